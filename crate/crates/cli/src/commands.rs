use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;

use projforce::enumerate::{survey, SurveyOptions, SurveyReport, SurveySpec};
use projforce::forcing::{min_entry_bound, verify_witness, SearchStats, VerdictRecord, WitnessRecord};
use projforce::oracle::{ab_characterization, abc_characterization, decide_bruteforce, exhaustive_map_check, BoundedVerdict, ClosedForm};
use projforce::{
    decide, is_projection, multiplicities, projection_matrix, realizable, weight_changes, Budget, Error, FieldSpec,
    ForcingVerdict, GeneratorMatrix, IncidenceSystem, LinearMapSpec, MatrixFile, Result, Status, Witness,
    WeightChangeMultiset,
};

use crate::{Cli, Command, Format, Instance, OracleCommand, SurveyArgs};

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExhausted { .. } => 3,
        _ => 2,
    }
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let budget = Budget::nodes(cli.budget).with_threads(cli.threads as usize);
    let out = Output { format: cli.format };
    match &cli.command {
        Command::Check { instance, exit_status } => {
            let v = check(&out, instance, &budget)?;
            if *exit_status && v.status == Status::NotForcing {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Matrix { q, k } => matrix(&out, *q, *k)?,
        Command::VerifyMap { domain, image } => verify_map(&out, domain, image)?,
        Command::Survey(args) => run_survey(&out, args, &budget)?,
        Command::Witness { instance } => witness(&out, instance, &budget)?,
        Command::Realizable { instance } => realizable_cmd(&out, instance, &budget)?,
        Command::SplitDiff { instance } => split_diff(&out, instance)?,
        Command::Oracle { oracle } => run_oracle(&out, oracle)?,
    }
    Ok(ExitCode::SUCCESS)
}

struct Output {
    format: Format,
}

impl Output {
    /// Prints `value` as JSON, or `text()` in text mode.
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<()> {
        let s = match self.format {
            Format::Json => to_json(value)? + "\n",
            Format::Text => text(),
        };
        let mut stdout = io::stdout().lock();
        stdout.write_all(s.as_bytes()).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Pretty JSON with keys sorted, so that parsing and re-serializing any
/// output reproduces it byte for byte.
fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let io = |e: serde_json::Error| Error::Io(e.to_string());
    let tree = serde_json::to_value(value).map_err(io)?;
    serde_json::to_string_pretty(&tree).map_err(io)
}

fn system(q: u64, k: usize) -> Result<IncidenceSystem> {
    IncidenceSystem::new(&FieldSpec::new(q)?, k)
}

fn load(instance: &Instance) -> Result<(IncidenceSystem, WeightChangeMultiset)> {
    let sys = system(instance.q, instance.k)?;
    instance.multiset.expect_len(sys.n_points())?;
    Ok((sys, instance.multiset.clone()))
}

fn witness_text(w: &WitnessRecord) -> String {
    format!(
        "d          {:?}\narrangement {:?}\ndomain (B):\n{}image (C):\n{}",
        w.d.values(),
        w.arrangement,
        w.domain.to_text(),
        w.image.to_text()
    )
}

/// Re-checks a witness produced by the engine so nothing unverified is printed.
fn certified(sys: &IncidenceSystem, s: &WeightChangeMultiset, w: &Witness) -> Result<WitnessRecord> {
    verify_witness(sys, s, w)?;
    Ok(WitnessRecord::from(w))
}

fn stats_text(stats: &SearchStats) -> String {
    format!("search     {} nodes visited, {} pruned\n", stats.visited, stats.pruned)
}

fn check(out: &Output, instance: &Instance, budget: &Budget) -> Result<ForcingVerdict> {
    let (sys, s) = load(instance)?;
    let v = decide(&sys, &s, budget)?;
    let witness = v.witness.as_ref().map(|w| certified(&sys, &s, w)).transpose()?;
    let record = VerdictRecord { witness: witness.clone(), ..v.to_record() };
    out.emit(&record, || {
        let mut t = format!(
            "multiset   {s}\ndelta      {}\nthreshold  {}\nstatus     {:?}\nreason     {:?}\n",
            v.delta, v.delta_threshold, v.status, v.reason
        );
        t += &stats_text(&v.stats);
        if let Some(w) = &witness {
            t += &witness_text(w);
        }
        t
    })?;
    Ok(v)
}

#[derive(Serialize)]
struct MatrixDump {
    q: u64,
    k: usize,
    points: Vec<Vec<u64>>,
    m: Vec<Vec<u8>>,
    inverse_numerators: Vec<Vec<i64>>,
    denominator: i64,
}

fn matrix(out: &Output, q: u64, k: usize) -> Result<()> {
    let sys = system(q, k)?;
    let dump = MatrixDump {
        q,
        k,
        points: sys.geometry().points().iter().map(|p| p.coords().iter().map(|x| x.rep() as u64).collect()).collect(),
        m: sys.rows().map(<[u8]>::to_vec).collect(),
        inverse_numerators: sys.inverse_numerators(),
        denominator: sys.row_weight(),
    };
    out.emit(&dump, || {
        let join = |v: &[String]| v.join(" ");
        let mut t = format!("# {} points of PG({}, {q})\n", dump.points.len(), k - 1);
        for (i, p) in dump.points.iter().enumerate() {
            t += &format!("{i}: ({})\n", p.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
        }
        t += "# M\n";
        for row in &dump.m {
            t += &join(&row.iter().map(u8::to_string).collect::<Vec<_>>());
            t.push('\n');
        }
        t += &format!("# M^-1 numerators, denominator {}\n", dump.denominator);
        for row in &dump.inverse_numerators {
            t += &join(&row.iter().map(i64::to_string).collect::<Vec<_>>());
            t.push('\n');
        }
        t
    })
}

fn read_matrix(path: &Path) -> Result<MatrixFile> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    MatrixFile::parse(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct MapReport {
    q: u64,
    k: usize,
    changes: WeightChangeMultiset,
    projection: bool,
    r: Vec<i64>,
    r_zero_columns: i64,
    q_counts: Vec<i64>,
    q_zero_columns: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    projection_matrix: Option<Vec<Vec<u64>>>,
}

fn verify_map(out: &Output, domain: &Path, image: &Path) -> Result<()> {
    let (db, ib) = (read_matrix(domain)?, read_matrix(image)?);
    if db.q != ib.q || db.k != ib.k {
        return Err(Error::Parse(format!(
            "domain is over q = {} with k = {}, image over q = {} with k = {}",
            db.q, db.k, ib.q, ib.k
        )));
    }
    let (f, b) = db.to_matrix()?;
    let (_, c) = ib.to_matrix()?;
    let map = LinearMapSpec::new(GeneratorMatrix::new(&f, b)?, c)?;
    let sys = system(db.q, db.k)?;
    let geom = sys.geometry();
    let r = multiplicities(geom, map.domain().matrix())?;
    let qv = multiplicities(geom, map.image())?;
    let report = MapReport {
        q: db.q,
        k: db.k,
        changes: weight_changes(geom, &map)?,
        projection: is_projection(geom, &map)?,
        r: r.counts,
        r_zero_columns: r.zero_cols,
        q_counts: qv.counts,
        q_zero_columns: qv.zero_cols,
        projection_matrix: projection_matrix(&map).map(|p| p.to_reps()),
    };
    out.emit(&report, || {
        let mut t = format!(
            "changes    {}\nprojection {}\nR          {:?} (+{} zero columns)\nQ          {:?} (+{} zero columns)\n",
            report.changes, report.projection, report.r, report.r_zero_columns, report.q_counts, report.q_zero_columns
        );
        if let Some(p) = &report.projection_matrix {
            t += "P with C = B P:\n";
            for row in p {
                t += &row.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
                t.push('\n');
            }
        }
        t
    })
}

fn survey_text(r: &SurveyReport) -> String {
    let convention = if r.spec.realizable_only { "realizable only" } else { "including vacuous" };
    let mut t = format!(
        "survey q={} k={} entries {}..={} ({convention})\nenumerated {}\n",
        r.spec.q, r.spec.k, r.spec.min_entry, r.spec.max_entry, r.total_enumerated
    );
    let c = &r.counts;
    t += &format!(
        "  not realizable             {}\n  forcing, split difference  {}\n  forcing, search            {}\n  not forcing                {}\n",
        c.not_realizable, c.forcing_split_difference, c.forcing_search, c.not_forcing
    );
    t += &format!("forcing {}\nforcing beyond split difference {}\n", r.forcing.len(), r.forcing_not_split_difference.len());
    for m in &r.forcing_not_split_difference {
        t += &format!("  {m}\n");
    }
    t
}

fn run_survey(out: &Output, args: &SurveyArgs, budget: &Budget) -> Result<()> {
    let spec = SurveySpec {
        realizable_only: !args.include_vacuous,
        ..SurveySpec::new(args.q, args.k, args.min_entry, args.max_entry)
    };
    let options = SurveyOptions {
        checkpoint: args.checkpoint.clone(),
        resume: args.resume,
        witness_samples: args.witness_samples,
    };
    let report = survey(&spec, budget, &options)?;
    if let Some(path) = &args.json_out {
        fs::write(path, to_json(&report)? + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    if let Some(path) = &args.csv_out {
        let file = fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        report.write_csv(file)?;
    }
    out.emit(&report, || survey_text(&report))
}

fn witness(out: &Output, instance: &Instance, budget: &Budget) -> Result<()> {
    let (sys, s) = load(instance)?;
    let v = decide(&sys, &s, budget)?;
    let record = v.witness.as_ref().map(|w| certified(&sys, &s, w)).transpose()?;
    out.emit(&record, || match &record {
        Some(w) => format!("multiset   {s}\nverified   non-projection realizing the multiset\n{}", witness_text(w)),
        None => format!("multiset   {s}\nno witness: {:?} ({:?})\n", v.status, v.reason),
    })
}

#[derive(Serialize)]
struct RealizableReport {
    realizable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    arrangement: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    domain: Option<MatrixFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<MatrixFile>,
    stats: SearchStats,
}

fn realizable_cmd(out: &Output, instance: &Instance, budget: &Budget) -> Result<()> {
    let (sys, s) = load(instance)?;
    let r = realizable(&sys, &s, budget)?;
    if let Some(map) = &r.map {
        if weight_changes(sys.geometry(), map)? != s {
            return Err(Error::UnverifiedWitness("realizing map does not reproduce the multiset".into()));
        }
    }
    let f = sys.field();
    let report = RealizableReport {
        realizable: r.realizable,
        d: r.d.as_ref().map(|d| d.values().to_vec()),
        arrangement: r.arrangement.clone(),
        domain: r.map.as_ref().map(|m| MatrixFile::from_matrix(f, m.domain().matrix())),
        image: r.map.as_ref().map(|m| MatrixFile::from_matrix(f, m.image())),
        stats: r.stats,
    };
    out.emit(&report, || {
        let mut t = format!("multiset   {s}\nrealizable {}\n", report.realizable);
        if let (Some(d), Some(b), Some(c)) = (&report.d, &report.domain, &report.image) {
            t += &format!("d          {d:?}\ndomain (B):\n{}image (C):\n{}", b.to_text(), c.to_text());
        }
        t + &stats_text(&report.stats)
    })
}

#[derive(Serialize)]
struct SplitDiffReport {
    delta: i64,
    threshold: i64,
    forcing_by_split_difference: bool,
}

fn split_diff(out: &Output, instance: &Instance) -> Result<()> {
    let (sys, s) = load(instance)?;
    let (delta, den) = min_entry_bound(sys.field(), sys.k(), &s)?;
    let report = SplitDiffReport { delta, threshold: -den, forcing_by_split_difference: delta > -den };
    out.emit(&report, || {
        format!(
            "delta      {}\nthreshold  {}\nforcing by split difference: {}\n",
            report.delta, report.threshold, report.forcing_by_split_difference
        )
    })
}

#[derive(Serialize)]
struct ClosedFormReport {
    realizable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    forcing: Option<bool>,
}

impl From<ClosedForm> for ClosedFormReport {
    fn from(c: ClosedForm) -> Self {
        ClosedFormReport { realizable: c.realizable, forcing: c.forcing }
    }
}

fn closed_form_text(c: &ClosedFormReport) -> String {
    let forcing = c.forcing.map_or("not determined".to_string(), |b| b.to_string());
    format!("realizable {}\nforcing    {forcing}\n", c.realizable)
}

#[derive(Serialize)]
struct BoundedReport {
    forcing: bool,
    max_cols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    realizations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    domain: Option<MatrixFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<MatrixFile>,
}

fn run_oracle(out: &Output, oracle: &OracleCommand) -> Result<()> {
    match oracle {
        OracleCommand::Bruteforce { instance } => {
            let (sys, s) = load(instance)?;
            let v = decide_bruteforce(&sys, &s)?;
            let record = v.to_record();
            out.emit(&record, || format!("multiset   {s}\nstatus     {:?}\nreason     {:?}\n", v.status, v.reason))
        }
        OracleCommand::Ab { k, a, b } => {
            if *k < 2 {
                return Err(Error::InvalidDimension);
            }
            let report = ClosedFormReport::from(ab_characterization(*k, *a, *b));
            out.emit(&report, || closed_form_text(&report))
        }
        OracleCommand::Abc { k, a, b, c } => {
            if *k < 2 {
                return Err(Error::InvalidDimension);
            }
            let report = ClosedFormReport::from(abc_characterization(*k, *a, *b, *c));
            out.emit(&report, || closed_form_text(&report))
        }
        OracleCommand::Maps { multiset, max_cols } => {
            let f = FieldSpec::new(2)?;
            let verdict = exhaustive_map_check(&f, 2, multiset, *max_cols)?;
            let report = match &verdict {
                BoundedVerdict::NotForcing { map } => BoundedReport {
                    forcing: false,
                    max_cols: *max_cols,
                    realizations: None,
                    domain: Some(MatrixFile::from_matrix(&f, map.domain().matrix())),
                    image: Some(MatrixFile::from_matrix(&f, map.image())),
                },
                BoundedVerdict::Forcing { realizations } => BoundedReport {
                    forcing: true,
                    max_cols: *max_cols,
                    realizations: Some(*realizations),
                    domain: None,
                    image: None,
                },
            };
            out.emit(&report, || {
                let mut t = format!("multiset   {multiset}\nforcing within {} columns: {}\n", report.max_cols, report.forcing);
                if let Some(n) = report.realizations {
                    t += &format!("realizing (R, Q) pairs: {n}\n");
                }
                if let (Some(b), Some(c)) = (&report.domain, &report.image) {
                    t += &format!("domain (B):\n{}image (C):\n{}", b.to_text(), c.to_text());
                }
                t
            })
        }
    }
}
