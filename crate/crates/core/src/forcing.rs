//! Deciding whether a multiset of weight changes is projection-forcing.
//!
//! A multiset S of size N is realized by a linear map exactly when some
//! arrangement π of S over the points of PG(k-1, q) has M^{-1}π integral, and
//! that integral vector is then R - Q, the change in column multiplicities. S
//! fails to force a projection iff some integral M^{-1}π has a negative entry.
//!
//! Entry i of M^{-1}π is `(q T_i - (q-1) ΣS) / q^{k-1}` where T_i is the sum
//! of π over the q^{k-1} points not orthogonal to point i. Its minimum over
//! all arrangements is the split difference divided by q^{k-1}, which gives
//! the fast sufficient test and the pruning bound used by the search.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{
    is_projection, multiplicities, projection_matrix, weight_change_vector, weight_changes, FqMatrix,
    GeneratorMatrix, LinearMapSpec, WeightChangeMultiset,
};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::matfile::MatrixFile;
use crate::projgeom::{point_count, IncidenceSystem};

/// Default cap on visited search nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Search limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub threads: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: DEFAULT_NODE_BUDGET, threads: 1 }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes, ..Budget::default() }
    }

    pub fn with_threads(self, threads: usize) -> Self {
        Budget { threads: threads.max(1), ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Forcing,
    NotForcing,
    ForcingVacuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reason {
    SplitDifference,
    ExhaustiveSearch,
    NotRealizable,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Partial arrangements extended by one value.
    pub visited: u64,
    /// Branches cut by the integrality or negativity bound.
    pub pruned: u64,
}

impl SearchStats {
    fn merge(&mut self, other: SearchStats) {
        self.visited += other.visited;
        self.pruned += other.pruned;
    }
}

/// D = R - Q = M^{-1}π for an arrangement π with integral inverse image.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DifferenceVector(Vec<i64>);

impl DifferenceVector {
    /// Solves M d = π, failing with `NonIntegral` when the solution is fractional.
    pub fn from_arrangement(sys: &IncidenceSystem, pi: &[i64]) -> Result<Self> {
        sys.solve_integral(pi)?.map(DifferenceVector).ok_or(Error::NonIntegral)
    }

    /// Wraps `d` after checking its length.
    pub fn new(sys: &IncidenceSystem, d: Vec<i64>) -> Result<Self> {
        if d.len() != sys.n_points() {
            return Err(Error::LengthMismatch { expected: sys.n_points(), got: d.len() });
        }
        Ok(DifferenceVector(d))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&x| x < 0)
    }
}

/// A non-projection realizing S, with the data it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub map: LinearMapSpec,
    pub claimed_changes: WeightChangeMultiset,
    pub d: DifferenceVector,
    /// The arrangement π with M d = π.
    pub arrangement: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingVerdict {
    pub status: Status,
    pub reason: Reason,
    pub delta: i64,
    /// -q^{k-1}; the split-difference test passes when delta exceeds it.
    pub delta_threshold: i64,
    pub witness: Option<Witness>,
    pub stats: SearchStats,
}

impl ForcingVerdict {
    pub fn is_forcing(&self) -> bool {
        self.status != Status::NotForcing
    }

    pub fn to_record(&self) -> VerdictRecord {
        VerdictRecord {
            status: self.status,
            reason: self.reason,
            delta: self.delta,
            delta_threshold: self.delta_threshold,
            witness: self.witness.as_ref().map(WitnessRecord::from),
            stats: self.stats,
        }
    }
}

/// Serialized form of a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub domain: MatrixFile,
    pub image: MatrixFile,
    pub claimed_changes: WeightChangeMultiset,
    pub d: DifferenceVector,
    pub arrangement: Vec<i64>,
}

impl From<&Witness> for WitnessRecord {
    fn from(w: &Witness) -> Self {
        let f = w.map.field();
        WitnessRecord {
            domain: MatrixFile::from_matrix(f, w.map.domain().matrix()),
            image: MatrixFile::from_matrix(f, w.map.image()),
            claimed_changes: w.claimed_changes.clone(),
            d: w.d.clone(),
            arrangement: w.arrangement.clone(),
        }
    }
}

/// Serialized form of a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub status: Status,
    pub reason: Reason,
    pub delta: i64,
    pub delta_threshold: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    pub stats: SearchStats,
}

fn expected_size(f: &FieldSpec, k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidDimension);
    }
    point_count(f.q(), k).ok_or(Error::Overflow { q: f.q(), k, cap: usize::MAX })
}

/// Sum of the smallest q^{k-1} elements minus (q - 1) times the sum of the rest.
pub fn split_difference(f: &FieldSpec, k: usize, s: &WeightChangeMultiset) -> Result<i64> {
    s.expect_len(expected_size(f, k)?)?;
    let q = f.q() as i64;
    let head = q.pow(k as u32 - 1) as usize;
    let (low, high) = s.values().split_at(head);
    Ok(low.iter().sum::<i64>() - (q - 1) * high.iter().sum::<i64>())
}

/// True when δ_q(S) > -q^{k-1}, which certifies that S is projection-forcing.
pub fn split_difference_forcing(f: &FieldSpec, k: usize, s: &WeightChangeMultiset) -> Result<bool> {
    Ok(split_difference(f, k, s)? > -(f.q() as i64).pow(k as u32 - 1))
}

/// Minimum entry of M^{-1}π over all arrangements π, as (numerator, denominator).
pub fn min_entry_bound(f: &FieldSpec, k: usize, s: &WeightChangeMultiset) -> Result<(i64, i64)> {
    Ok((split_difference(f, k, s)?, (f.q() as i64).pow(k as u32 - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Integral arrangement with a negative entry.
    Witness,
    /// Any integral arrangement.
    Integral,
    /// Every integral arrangement, without symmetry reduction.
    All,
}

#[derive(Clone)]
struct Search {
    mode: Mode,
    q: i64,
    den: i64,
    total: i64,
    values: Vec<i64>,
    remaining: Vec<usize>,
    /// Coordinates i with M[pos][i] = 1.
    coords_of_pos: Vec<Vec<usize>>,
    /// Coordinates whose last contributing position is `pos`.
    completes_at: Vec<Vec<usize>>,
    partial: Vec<i64>,
    open: Vec<usize>,
    assigned: Vec<usize>,
    stats: SearchStats,
    counter: Arc<AtomicU64>,
    budget: u64,
    found_integral: bool,
    found: Vec<(Vec<i64>, Vec<i64>)>,
    scratch: Vec<i64>,
}

impl Search {
    fn new(sys: &IncidenceSystem, s: &WeightChangeMultiset, mode: Mode, counter: Arc<AtomicU64>, budget: u64) -> Self {
        let n = sys.n_points();
        let mut values: Vec<i64> = s.values().to_vec();
        values.dedup();
        let remaining = values.iter().map(|v| s.values().iter().filter(|x| *x == v).count()).collect();
        let coords_of_pos = (0..n).map(|p| (0..n).filter(|&i| sys.entry(p, i) == 1).collect()).collect();
        let mut completes_at = vec![Vec::new(); n];
        for i in 0..n {
            let last = *sys.column_support(i).iter().max().expect("supports are nonempty");
            completes_at[last].push(i);
        }
        let open = (0..n).map(|i| sys.column_support(i).len()).collect();
        Search {
            mode,
            q: sys.q(),
            den: sys.row_weight(),
            total: s.sum(),
            values,
            remaining,
            coords_of_pos,
            completes_at,
            partial: vec![0; n],
            open,
            assigned: Vec::with_capacity(n),
            stats: SearchStats::default(),
            counter,
            budget,
            found_integral: false,
            found: Vec::new(),
            scratch: Vec::with_capacity(n + 1),
        }
    }

    fn n(&self) -> usize {
        self.partial.len()
    }

    #[inline]
    fn numerator(&self, t: i64) -> i64 {
        self.q * t - (self.q - 1) * self.total
    }

    fn tick(&mut self) -> Result<()> {
        self.stats.visited += 1;
        let seen = self.counter.fetch_add(1, Ordering::Relaxed) + 1;
        if seen > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget, visited: seen });
        }
        Ok(())
    }

    /// Assigns value index `vi` to the next position; false if a coordinate
    /// completed by this position is fractional.
    fn push(&mut self, vi: usize) -> bool {
        let pos = self.assigned.len();
        let v = self.values[vi];
        self.remaining[vi] -= 1;
        self.assigned.push(vi);
        for &i in &self.coords_of_pos[pos] {
            self.partial[i] += v;
            self.open[i] -= 1;
        }
        self.completes_at[pos].iter().all(|&i| self.numerator(self.partial[i]) % self.den == 0)
    }

    fn pop(&mut self) {
        let vi = self.assigned.pop().expect("pop on empty arrangement");
        let pos = self.assigned.len();
        let v = self.values[vi];
        self.remaining[vi] += 1;
        for &i in &self.coords_of_pos[pos] {
            self.partial[i] -= v;
            self.open[i] += 1;
        }
    }

    /// Whether some coordinate can still reach an integer value <= -1.
    fn can_go_negative(&mut self) -> bool {
        self.scratch.clear();
        self.scratch.push(0);
        let mut acc = 0;
        for (vi, &c) in self.remaining.iter().enumerate() {
            for _ in 0..c {
                acc += self.values[vi];
                self.scratch.push(acc);
            }
        }
        (0..self.n()).any(|i| self.numerator(self.partial[i] + self.scratch[self.open[i]]) <= -self.den)
    }

    fn leaf(&mut self) -> bool {
        let d: Vec<i64> = self.partial.iter().map(|&t| self.numerator(t) / self.den).collect();
        match self.mode {
            Mode::Witness => {
                self.found_integral = true;
                d.iter().any(|&x| x < 0)
            }
            Mode::Integral => true,
            Mode::All => {
                let pi = self.arrangement();
                self.found.push((pi, d));
                false
            }
        }
    }

    fn arrangement(&self) -> Vec<i64> {
        self.assigned.iter().map(|&vi| self.values[vi]).collect()
    }

    /// Candidate value indices for the next position, in ascending order.
    fn candidates(&self) -> Vec<usize> {
        if self.assigned.is_empty() && self.mode != Mode::All {
            // Collineations act transitively on points and preserve M, so an
            // occurrence of the minimum may be placed at point 0.
            return vec![0];
        }
        (0..self.values.len()).filter(|&vi| self.remaining[vi] > 0).collect()
    }

    /// Depth-first search; returns true when a success was found, leaving it
    /// in `self.assigned`.
    fn dfs(&mut self) -> Result<bool> {
        if self.assigned.len() == self.n() {
            return Ok(self.leaf());
        }
        if self.mode == Mode::Witness && !self.can_go_negative() {
            self.stats.pruned += 1;
            return Ok(false);
        }
        for vi in self.candidates() {
            self.tick()?;
            if self.push(vi) {
                if self.dfs()? {
                    return Ok(true);
                }
            } else {
                self.stats.pruned += 1;
            }
            self.pop();
        }
        Ok(false)
    }

    /// Runs the search, splitting on the value at point 1 across threads.
    fn run(mut self, threads: usize) -> Result<(Option<Vec<i64>>, SearchStats, bool)> {
        if threads <= 1 || self.n() < 3 || self.mode == Mode::All {
            let hit = self.dfs()?;
            return Ok((hit.then(|| self.arrangement()), self.stats, self.found_integral));
        }
        if self.mode == Mode::Witness && !self.can_go_negative() {
            self.stats.pruned += 1;
            return Ok((None, self.stats, false));
        }
        self.tick()?;
        if !self.push(0) {
            self.stats.pruned += 1;
            return Ok((None, self.stats, false));
        }
        let branches = self.candidates();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        let base = &self;
        let results: Vec<Result<(bool, Search)>> = pool.install(|| {
            branches
                .par_iter()
                .map(|&vi| {
                    let mut branch = base.clone();
                    branch.stats = SearchStats::default();
                    branch.tick()?;
                    let hit = if branch.push(vi) {
                        branch.dfs()?
                    } else {
                        branch.stats.pruned += 1;
                        false
                    };
                    Ok((hit, branch))
                })
                .collect()
        });
        let mut stats = self.stats;
        let mut found_integral = false;
        let mut winner = None;
        for r in results {
            let (hit, branch) = r?;
            stats.merge(branch.stats);
            found_integral |= branch.found_integral || hit;
            if hit && winner.is_none() {
                winner = Some(branch.arrangement());
            }
        }
        Ok((winner, stats, found_integral))
    }
}

/// Lays out the map realizing M d: every point appears as a column of B
/// `max(d_p, 0) + 1` times, and as a column of C `max(d_p, 0) + 1 - d_p` times.
/// C is padded with zero columns up to the width of B.
pub fn construct_map(sys: &IncidenceSystem, d: &DifferenceVector) -> Result<LinearMapSpec> {
    let geom = sys.geometry();
    let f = geom.field();
    let k = geom.k();
    if d.values().len() != sys.n_points() {
        return Err(Error::LengthMismatch { expected: sys.n_points(), got: d.values().len() });
    }
    let mut b_cols = Vec::new();
    let mut c_cols = Vec::new();
    for (p, &dp) in geom.points().iter().zip(d.values()) {
        let r = dp.max(0) + 1;
        let q = r - dp;
        b_cols.extend(std::iter::repeat_n(p.coords().to_vec(), r as usize));
        c_cols.extend(std::iter::repeat_n(p.coords().to_vec(), q as usize));
    }
    while c_cols.len() < b_cols.len() {
        c_cols.push(vec![FieldElement::ZERO; k]);
    }
    let domain = GeneratorMatrix::new(f, FqMatrix::from_columns(k, &b_cols)?)?;
    LinearMapSpec::new(domain, FqMatrix::from_columns(k, &c_cols)?)
}

/// Recomputes everything a witness claims from its matrices alone.
pub fn verify_witness(sys: &IncidenceSystem, s: &WeightChangeMultiset, w: &Witness) -> Result<()> {
    let geom = sys.geometry();
    let fail = |msg: &str| Err(Error::UnverifiedWitness(msg.to_string()));
    if weight_changes(geom, &w.map)? != *s || w.claimed_changes != *s {
        return fail("weight changes do not match the multiset");
    }
    if weight_change_vector(geom, &w.map)? != w.arrangement {
        return fail("arrangement does not match the pointwise weight changes");
    }
    if sys.apply(w.d.values())? != w.arrangement {
        return fail("M d differs from the arrangement");
    }
    let r = multiplicities(geom, w.map.domain().matrix())?;
    let q = multiplicities(geom, w.map.image())?;
    if r.counts.iter().zip(&q.counts).zip(w.d.values()).any(|((a, b), d)| a - b != *d) {
        return fail("d is not the multiplicity difference of the map");
    }
    if is_projection(geom, &w.map)? || projection_matrix(&w.map).is_some() {
        return fail("map is a projection");
    }
    Ok(())
}

fn build_witness(sys: &IncidenceSystem, s: &WeightChangeMultiset, arrangement: Vec<i64>) -> Result<Witness> {
    let d = DifferenceVector::from_arrangement(sys, &arrangement)?;
    let map = construct_map(sys, &d)?;
    let w = Witness { map, claimed_changes: s.clone(), d, arrangement };
    verify_witness(sys, s, &w)?;
    Ok(w)
}

/// Outcome of a realizability query.
#[derive(Debug, Clone)]
pub struct Realization {
    pub realizable: bool,
    /// A map realizing S (projection or not), when realizable.
    pub map: Option<LinearMapSpec>,
    pub d: Option<DifferenceVector>,
    pub arrangement: Option<Vec<i64>>,
    pub stats: SearchStats,
}

fn search(sys: &IncidenceSystem, s: &WeightChangeMultiset, mode: Mode, counter: &Arc<AtomicU64>, budget: &Budget) -> Result<(Option<Vec<i64>>, SearchStats, bool)> {
    Search::new(sys, s, mode, Arc::clone(counter), budget.max_nodes).run(budget.threads)
}

/// Whether some linear map realizes S; if so, returns one.
pub fn realizable(sys: &IncidenceSystem, s: &WeightChangeMultiset, budget: &Budget) -> Result<Realization> {
    s.expect_len(sys.n_points())?;
    let counter = Arc::new(AtomicU64::new(0));
    let (hit, stats, _) = search(sys, s, Mode::Integral, &counter, budget)?;
    let Some(pi) = hit else {
        return Ok(Realization { realizable: false, map: None, d: None, arrangement: None, stats });
    };
    let d = DifferenceVector::from_arrangement(sys, &pi)?;
    let map = construct_map(sys, &d)?;
    if weight_changes(sys.geometry(), &map)? != *s {
        return Err(Error::UnverifiedWitness("constructed map does not realize the multiset".into()));
    }
    Ok(Realization { realizable: true, map: Some(map), d: Some(d), arrangement: Some(pi), stats })
}

/// Full decision: NotForcing iff some arrangement has an integral inverse
/// image with a negative entry.
///
/// When the split-difference test passes no negative entry is possible, so
/// only realizability is searched for (to separate Forcing from
/// ForcingVacuous). Every witness is rebuilt and re-verified before it is
/// returned.
pub fn decide(sys: &IncidenceSystem, s: &WeightChangeMultiset, budget: &Budget) -> Result<ForcingVerdict> {
    s.expect_len(sys.n_points())?;
    let f = sys.field();
    let k = sys.k();
    let delta = split_difference(f, k, s)?;
    let delta_threshold = -sys.row_weight();
    let counter = Arc::new(AtomicU64::new(0));
    let mut stats = SearchStats::default();

    let verdict = |status, reason, witness, stats| ForcingVerdict { status, reason, delta, delta_threshold, witness, stats };

    let split_ok = delta > delta_threshold;
    let mut integral_seen = false;
    if !split_ok {
        let (hit, st, seen) = search(sys, s, Mode::Witness, &counter, budget)?;
        stats.merge(st);
        if let Some(pi) = hit {
            let w = build_witness(sys, s, pi)?;
            return Ok(verdict(Status::NotForcing, Reason::ExhaustiveSearch, Some(w), stats));
        }
        integral_seen = seen;
    }
    if !integral_seen {
        let (hit, st, _) = search(sys, s, Mode::Integral, &counter, budget)?;
        stats.merge(st);
        integral_seen = hit.is_some();
    }
    let (status, reason) = match (integral_seen, split_ok) {
        (false, _) => (Status::ForcingVacuous, Reason::NotRealizable),
        (true, true) => (Status::Forcing, Reason::SplitDifference),
        (true, false) => (Status::Forcing, Reason::ExhaustiveSearch),
    };
    Ok(verdict(status, reason, None, stats))
}

/// Every distinct arrangement π of S with M^{-1}π integral, paired with
/// M^{-1}π, in lexicographic order of π. No symmetry reduction.
pub fn integral_arrangements(sys: &IncidenceSystem, s: &WeightChangeMultiset, budget: &Budget) -> Result<Vec<(Vec<i64>, DifferenceVector)>> {
    s.expect_len(sys.n_points())?;
    let counter = Arc::new(AtomicU64::new(0));
    let mut search = Search::new(sys, s, Mode::All, counter, budget.max_nodes);
    search.dfs()?;
    Ok(search.found.into_iter().map(|(pi, d)| (pi, DifferenceVector(d))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(v: &[i64]) -> WeightChangeMultiset {
        WeightChangeMultiset::new(v.to_vec())
    }

    fn system(q: u64, k: usize) -> IncidenceSystem {
        IncidenceSystem::new(&FieldSpec::new(q).unwrap(), k).unwrap()
    }

    #[test]
    fn split_difference_values() {
        let f2 = FieldSpec::new(2).unwrap();
        assert_eq!(split_difference(&f2, 3, &ms(&[3, 3, 3, 4, 4, 4, 7])).unwrap(), -2);
        assert_eq!(split_difference(&f2, 3, &ms(&[2, 2, 2, 3, 5, 5, 5])).unwrap(), -6);
        assert!(split_difference_forcing(&f2, 3, &ms(&[3, 3, 3, 4, 4, 4, 7])).unwrap());
        assert!(!split_difference_forcing(&f2, 3, &ms(&[2, 2, 2, 3, 5, 5, 5])).unwrap());
        assert_eq!(
            split_difference(&f2, 3, &ms(&[1; 6])).unwrap_err(),
            Error::SizeMismatch { expected: 7, got: 6 }
        );
        for q in [2, 3, 4] {
            let f = FieldSpec::new(q).unwrap();
            for k in [2, 3] {
                let n = point_count(q as u32, k).unwrap();
                for c in 0..6 {
                    let s = ms(&vec![c; n]);
                    assert_eq!(split_difference(&f, k, &s).unwrap(), c);
                    assert!(split_difference_forcing(&f, k, &s).unwrap());
                    assert_eq!(min_entry_bound(&f, k, &s).unwrap(), (c, (q as i64).pow(k as u32 - 1)));
                }
            }
        }
        assert_eq!(min_entry_bound(&f2, 3, &ms(&[3, 3, 3, 4, 4, 4, 7])).unwrap(), (-2, 4));
        assert_eq!(min_entry_bound(&f2, 2, &ms(&[1, 1, 2])).unwrap(), (0, 2));
    }

    #[test]
    fn two_maps_multiset_is_not_forcing() {
        let sys = system(2, 3);
        let s = ms(&[2, 2, 2, 2, 4, 4, 4]);
        let v = decide(&sys, &s, &Budget::default()).unwrap();
        assert_eq!(v.status, Status::NotForcing);
        assert_eq!(v.reason, Reason::ExhaustiveSearch);
        let w = v.witness.as_ref().unwrap();
        verify_witness(&sys, &s, w).unwrap();
        assert!(w.d.has_negative());
    }

    #[test]
    fn beyond_split_difference_is_forcing() {
        let sys = system(2, 3);
        let s = ms(&[2, 2, 2, 3, 5, 5, 5]);
        let v = decide(&sys, &s, &Budget::default()).unwrap();
        assert_eq!((v.status, v.reason), (Status::Forcing, Reason::ExhaustiveSearch));
        assert!(v.witness.is_none());
        let all = integral_arrangements(&sys, &s, &Budget::default()).unwrap();
        assert!(!all.is_empty());
        for (pi, d) in &all {
            let mut sorted = d.values().to_vec();
            sorted.sort();
            assert_eq!(sorted, vec![0, 0, 0, 1, 1, 1, 3]);
            assert_eq!(&sys.apply(d.values()).unwrap(), pi);
        }
    }

    #[test]
    fn split_difference_fast_path() {
        let sys = system(2, 3);
        let v = decide(&sys, &ms(&[3, 3, 3, 4, 4, 4, 7]), &Budget::default()).unwrap();
        assert_eq!((v.status, v.reason, v.delta, v.delta_threshold), (Status::Forcing, Reason::SplitDifference, -2, -4));
    }

    #[test]
    fn zero_multiset_is_forcing() {
        for (q, k) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (4, 2), (5, 2)] {
            let sys = system(q, k);
            let v = decide(&sys, &ms(&vec![0; sys.n_points()]), &Budget::default()).unwrap();
            assert_eq!(v.status, Status::Forcing, "q={q} k={k}");
        }
    }

    #[test]
    fn non_realizable_is_vacuous() {
        let sys = system(2, 3);
        let s = ms(&[1, 1, 1, 1, 1, 1, 2]);
        let v = decide(&sys, &s, &Budget::default()).unwrap();
        assert_eq!((v.status, v.reason), (Status::ForcingVacuous, Reason::NotRealizable));
        assert!(!realizable(&sys, &s, &Budget::default()).unwrap().realizable);
    }

    #[test]
    fn realizability_examples() {
        let sys = system(2, 3);
        let r = realizable(&sys, &ms(&[2, 2, 2, 2, 2, 2, 4]), &Budget::default()).unwrap();
        assert!(r.realizable);
        assert!(!realizable(&sys, &ms(&[1, 1, 1, 1, 1, 1, 2]), &Budget::default()).unwrap().realizable);

        let sys = system(2, 2);
        let r = realizable(&sys, &ms(&[1, 1, 2]), &Budget::default()).unwrap();
        assert!(r.realizable);
        assert_eq!(r.arrangement.as_deref(), Some(&[1, 1, 2][..]));
        assert_eq!(r.d.unwrap().values(), &[1, 1, 0]);
    }

    #[test]
    fn construct_map_examples() {
        let sys = system(2, 2);
        let geom = sys.geometry();
        let zero = DifferenceVector::new(&sys, vec![0; 3]).unwrap();
        let map = construct_map(&sys, &zero).unwrap();
        assert_eq!(map.domain().matrix(), map.image());
        assert_eq!(weight_changes(geom, &map).unwrap().values(), &[0, 0, 0]);

        let d = DifferenceVector::new(&sys, vec![1, 1, 0]).unwrap();
        let map = construct_map(&sys, &d).unwrap();
        assert_eq!(weight_changes(geom, &map).unwrap().values(), &[1, 1, 2]);

        let sys = system(2, 3);
        let d = DifferenceVector::new(&sys, vec![0, 0, 0, 1, 1, 1, 3]).unwrap();
        let map = construct_map(&sys, &d).unwrap();
        // R = max(d, 0) + 1 = (1,1,1,2,2,2,4)
        assert_eq!(map.domain().n(), 13);
        let changes = weight_changes(sys.geometry(), &map).unwrap();
        assert_eq!(changes, WeightChangeMultiset::new(sys.apply(d.values()).unwrap()));
        assert!(is_projection(sys.geometry(), &map).unwrap());

        assert_eq!(
            DifferenceVector::from_arrangement(&system(2, 2), &[1, 1, 1]).unwrap_err(),
            Error::NonIntegral
        );
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let sys = system(2, 3);
        let err = decide(&sys, &ms(&[2, 2, 2, 3, 5, 5, 5]), &Budget::nodes(3)).unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { budget: 3, .. }));
    }

    #[test]
    fn threads_do_not_change_verdicts() {
        let sys = system(2, 3);
        for s in [[2, 2, 2, 2, 4, 4, 4], [0, 0, 2, 2, 2, 2, 6], [2, 2, 2, 3, 5, 5, 5], [0, 2, 2, 4, 4, 6, 6]] {
            let s = ms(&s);
            let one = decide(&sys, &s, &Budget::default()).unwrap();
            let many = decide(&sys, &s, &Budget::default().with_threads(4)).unwrap();
            assert_eq!(one.status, many.status);
            assert_eq!(one.witness, many.witness);
        }
    }

    #[test]
    fn size_mismatch() {
        let sys = system(2, 3);
        assert!(matches!(decide(&sys, &ms(&[1; 6]), &Budget::default()), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn verdict_record_round_trip() {
        let sys = system(2, 3);
        let v = decide(&sys, &ms(&[2, 2, 2, 2, 4, 4, 4]), &Budget::default()).unwrap();
        let json = serde_json::to_string(&v.to_record()).unwrap();
        let back: VerdictRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        assert!(json.starts_with(r#"{"status":"NotForcing","reason":"ExhaustiveSearch","delta":"#));
    }
}
