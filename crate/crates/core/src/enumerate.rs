//! Classification surveys over all multisets with entries in a range.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::WeightChangeMultiset;
use crate::error::{Error, Result};
use crate::forcing::{decide, Budget, Reason, Status, WitnessRecord};
use crate::gf::FieldSpec;
use crate::projgeom::{point_count, IncidenceSystem};

/// Multisets classified per checkpoint.
pub const CHECKPOINT_INTERVAL: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveySpec {
    pub q: u64,
    pub k: usize,
    pub min_entry: i64,
    pub max_entry: i64,
    /// Count only realizable multisets as forcing; non-realizable ones are
    /// vacuously forcing and are otherwise included.
    pub realizable_only: bool,
}

impl SurveySpec {
    pub fn new(q: u64, k: usize, min_entry: i64, max_entry: i64) -> Self {
        SurveySpec { q, k, min_entry, max_entry, realizable_only: true }
    }

    pub fn validate(&self) -> Result<usize> {
        if self.min_entry > self.max_entry {
            return Err(Error::InvalidBounds { min: self.min_entry, max: self.max_entry });
        }
        if self.k == 0 {
            return Err(Error::InvalidDimension);
        }
        let f = FieldSpec::new(self.q)?;
        point_count(f.q(), self.k).ok_or(Error::Overflow { q: f.q(), k: self.k, cap: usize::MAX })
    }
}

/// All non-decreasing sequences of length N with entries in the range, in
/// lexicographic order.
pub fn enumerate_multisets(spec: &SurveySpec) -> Result<impl Iterator<Item = WeightChangeMultiset>> {
    let n = spec.validate()?;
    Ok((spec.min_entry..=spec.max_entry)
        .combinations_with_replacement(n)
        .map(WeightChangeMultiset::new))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    NotRealizable,
    ForcingSplitDifference,
    ForcingSearch,
    NotForcing,
}

impl Classification {
    fn of(status: Status, reason: Reason) -> Self {
        match (status, reason) {
            (Status::ForcingVacuous, _) => Classification::NotRealizable,
            (Status::NotForcing, _) => Classification::NotForcing,
            (Status::Forcing, Reason::SplitDifference) => Classification::ForcingSplitDifference,
            (Status::Forcing, _) => Classification::ForcingSearch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub multiset: WeightChangeMultiset,
    pub status: Status,
    pub reason: Reason,
    pub delta: i64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyCounts {
    pub not_realizable: usize,
    pub forcing_split_difference: usize,
    pub forcing_search: usize,
    pub not_forcing: usize,
}

impl SurveyCounts {
    pub fn total(&self) -> usize {
        self.not_realizable + self.forcing_split_difference + self.forcing_search + self.not_forcing
    }

    fn add(&mut self, c: Classification) {
        match c {
            Classification::NotRealizable => self.not_realizable += 1,
            Classification::ForcingSplitDifference => self.forcing_split_difference += 1,
            Classification::ForcingSearch => self.forcing_search += 1,
            Classification::NotForcing => self.not_forcing += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleWitness {
    pub multiset: WeightChangeMultiset,
    pub witness: WitnessRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub spec: SurveySpec,
    pub total_enumerated: usize,
    pub counts: SurveyCounts,
    /// Forcing multisets under the survey's convention.
    pub forcing: Vec<WeightChangeMultiset>,
    /// The subset of `forcing` that fails the split-difference test.
    pub forcing_not_split_difference: Vec<WeightChangeMultiset>,
    pub witnesses: Vec<SampleWitness>,
    pub records: Vec<SurveyRecord>,
}

impl SurveyReport {
    fn assemble(spec: &SurveySpec, records: Vec<SurveyRecord>, witnesses: Vec<SampleWitness>) -> Self {
        let mut counts = SurveyCounts::default();
        let mut forcing = Vec::new();
        let mut not_split = Vec::new();
        for r in &records {
            let class = Classification::of(r.status, r.reason);
            counts.add(class);
            let counted = match class {
                Classification::ForcingSplitDifference | Classification::ForcingSearch => true,
                Classification::NotRealizable => !spec.realizable_only,
                Classification::NotForcing => false,
            };
            if counted {
                forcing.push(r.multiset.clone());
                if r.reason != Reason::SplitDifference {
                    not_split.push(r.multiset.clone());
                }
            }
        }
        SurveyReport {
            spec: spec.clone(),
            total_enumerated: records.len(),
            counts,
            forcing,
            forcing_not_split_difference: not_split,
            witnesses,
            records,
        }
    }

    /// CSV summary: `multiset,status,reason,delta`, one row per multiset.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["multiset", "status", "reason", "delta"]).map_err(io)?;
        for r in &self.records {
            let ms: Vec<String> = r.multiset.values().iter().map(i64::to_string).collect();
            w.write_record([
                ms.join(","),
                format!("{:?}", r.status),
                format!("{:?}", r.reason),
                r.delta.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }
}

/// Resumable progress of a survey.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyState {
    pub spec: SurveySpec,
    pub processed: usize,
    pub complete: bool,
    pub records: Vec<SurveyRecord>,
    pub witnesses: Vec<SampleWitness>,
}

impl SurveyState {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        let json = serde_json::to_string(self).map_err(|e| Error::Io(e.to_string()))?;
        fs::write(&tmp, json).map_err(|e| Error::Io(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Default)]
pub struct SurveyOptions {
    /// State file written every [`CHECKPOINT_INTERVAL`] multisets.
    pub checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint file if it exists.
    pub resume: bool,
    /// How many non-forcing multisets keep their witness in the report.
    pub witness_samples: usize,
}

/// Classifies every multiset described by `spec` with [`decide`].
///
/// If the budget runs out, the checkpoint (when configured) is written with
/// `complete = false` and the error is returned.
pub fn survey(spec: &SurveySpec, budget: &Budget, options: &SurveyOptions) -> Result<SurveyReport> {
    spec.validate()?;
    let f = FieldSpec::new(spec.q)?;
    let sys = IncidenceSystem::new(&f, spec.k)?;

    let mut state = match (&options.checkpoint, options.resume) {
        (Some(path), true) if path.exists() => {
            let st = SurveyState::load(path)?;
            if st.spec != *spec {
                return Err(Error::Parse("checkpoint was written for a different survey".into()));
            }
            st
        }
        _ => SurveyState { spec: spec.clone(), processed: 0, complete: false, records: Vec::new(), witnesses: Vec::new() },
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(budget.threads.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    let per_item = Budget { threads: 1, ..*budget };

    let mut pending = enumerate_multisets(spec)?.skip(state.processed).peekable();
    while pending.peek().is_some() {
        let chunk: Vec<WeightChangeMultiset> = pending.by_ref().take(CHECKPOINT_INTERVAL).collect();
        let results: Vec<Result<_>> =
            pool.install(|| chunk.par_iter().map(|s| decide(&sys, s, &per_item)).collect());
        for (s, r) in chunk.into_iter().zip(results) {
            let v = match r {
                Ok(v) => v,
                Err(e) => {
                    if let Some(path) = &options.checkpoint {
                        state.save(path)?;
                    }
                    return Err(e);
                }
            };
            if let Some(w) = &v.witness {
                if state.witnesses.len() < options.witness_samples {
                    state.witnesses.push(SampleWitness { multiset: s.clone(), witness: w.into() });
                }
            }
            state.records.push(SurveyRecord { multiset: s, status: v.status, reason: v.reason, delta: v.delta });
            state.processed += 1;
        }
        if let Some(path) = &options.checkpoint {
            state.save(path)?;
        }
    }
    state.complete = true;
    if let Some(path) = &options.checkpoint {
        state.save(path)?;
    }
    Ok(SurveyReport::assemble(spec, state.records, state.witnesses))
}
