//! Reference implementations for cross-checking the engine.
//!
//! Nothing here shares code with the pruned search in [`crate::forcing`]:
//! [`decide_bruteforce`] walks every distinct arrangement, the closed forms
//! cover binary multisets with one or two entries off a constant, and
//! [`exhaustive_map_check`] works from the definitions by building maps and
//! weighing codewords.

use std::collections::HashMap;

use crate::codes::{projection_matrix, weight_changes, FqMatrix, GeneratorMatrix, LinearMapSpec, WeightChangeMultiset};
use crate::error::{Error, Result};
use crate::forcing::{
    construct_map, split_difference, verify_witness, DifferenceVector, ForcingVerdict, Reason, SearchStats, Status,
    Witness,
};
use crate::gf::{FieldElement, FieldSpec};
use crate::projgeom::{Geometry, IncidenceSystem};

/// Largest multiset size [`decide_bruteforce`] accepts.
pub const BRUTEFORCE_MAX_POINTS: usize = 7;

/// Largest column bound [`exhaustive_map_check`] accepts.
pub const MAP_CHECK_MAX_COLS: usize = 8;

/// Rearranges `v` into the next lexicographic permutation; false after the last one.
fn next_permutation(v: &mut [i64]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Unpruned check of every distinct arrangement of S.
pub fn decide_bruteforce(sys: &IncidenceSystem, s: &WeightChangeMultiset) -> Result<ForcingVerdict> {
    let n = sys.n_points();
    if n > BRUTEFORCE_MAX_POINTS {
        return Err(Error::TooLarge(format!("{n} points, brute force is capped at {BRUTEFORCE_MAX_POINTS}")));
    }
    s.expect_len(n)?;
    let delta = split_difference(sys.field(), sys.k(), s)?;
    let mut stats = SearchStats::default();
    let mut pi = s.values().to_vec();
    let mut any_integral = false;
    loop {
        stats.visited += 1;
        let (nums, den) = sys.apply_inverse(&pi)?;
        if nums.iter().all(|x| x % den == 0) {
            any_integral = true;
            if nums.iter().any(|&x| x < 0) {
                let d = DifferenceVector::from_arrangement(sys, &pi)?;
                let map = construct_map(sys, &d)?;
                let w = Witness { map, claimed_changes: s.clone(), d, arrangement: pi };
                verify_witness(sys, s, &w)?;
                return Ok(ForcingVerdict {
                    status: Status::NotForcing,
                    reason: Reason::ExhaustiveSearch,
                    delta,
                    delta_threshold: -sys.row_weight(),
                    witness: Some(w),
                    stats,
                });
            }
        }
        if !next_permutation(&mut pi) {
            break;
        }
    }
    let (status, reason) = if any_integral {
        (Status::Forcing, Reason::ExhaustiveSearch)
    } else {
        (Status::ForcingVacuous, Reason::NotRealizable)
    };
    Ok(ForcingVerdict { status, reason, delta, delta_threshold: -sys.row_weight(), witness: None, stats })
}

/// Realizability and (where the closed form applies) forcing status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedForm {
    pub realizable: bool,
    /// `None` when the forcing characterization does not apply.
    pub forcing: Option<bool>,
}

fn pow2(e: usize) -> i64 {
    1i64 << e
}

/// Binary S with 2^k - 2 copies of `a` and one `b`: realizable iff
/// 2^{k-2} | a and 2^{k-1} | b; if realizable, forcing iff b <= 2a.
pub fn ab_characterization(k: usize, a: i64, b: i64) -> ClosedForm {
    assert!(k >= 2, "needs k >= 2");
    let realizable = a % pow2(k - 2) == 0 && b % pow2(k - 1) == 0;
    ClosedForm { realizable, forcing: realizable.then_some(b <= 2 * a) }
}

/// Binary S with 2^k - 3 copies of `a` and one each of `b`, `c`: realizable
/// iff all three are divisible by 2^{k-2} and exactly one or all three are
/// divisible by 2^{k-1}. For k >= 3 and realizable S, forcing iff {a, b, c}
/// satisfies the triangle inequality and 3a - b - c >= 0.
pub fn abc_characterization(k: usize, a: i64, b: i64, c: i64) -> ClosedForm {
    assert!(k >= 2, "needs k >= 2");
    let lo = pow2(k - 2);
    let hi = pow2(k - 1);
    let divisible = [a, b, c].iter().filter(|&&x| x % hi == 0).count();
    let realizable = [a, b, c].iter().all(|&x| x % lo == 0) && (divisible == 1 || divisible == 3);
    let forcing = (realizable && k >= 3).then(|| a <= b + c && b <= a + c && c <= a + b && 3 * a - b - c >= 0);
    ClosedForm { realizable, forcing }
}

/// `count` copies of `a` followed by `rest`.
pub fn near_constant(count: usize, a: i64, rest: &[i64]) -> WeightChangeMultiset {
    let mut v = vec![a; count];
    v.extend_from_slice(rest);
    WeightChangeMultiset::new(v)
}

/// Outcome of the bounded map search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedVerdict {
    /// A non-projection within the bound realizes S.
    NotForcing { map: LinearMapSpec },
    /// Every map within the bound realizing S is a projection; `realizations`
    /// counts the (R, Q) pairs that realize S.
    Forcing { realizations: usize },
}

impl BoundedVerdict {
    pub fn is_forcing(&self) -> bool {
        matches!(self, BoundedVerdict::Forcing { .. })
    }
}

#[derive(Debug, Clone, Default)]
struct CatalogEntry {
    realizations: usize,
    violation: Option<LinearMapSpec>,
}

/// Every binary map from a 2-dimensional code built from column
/// multiplicities (R, Q) with ΣR, ΣQ <= max_cols, indexed by its projective
/// multiset of weight changes.
#[derive(Debug, Clone)]
pub struct MapCatalog {
    max_cols: usize,
    entries: HashMap<WeightChangeMultiset, CatalogEntry>,
}

fn compositions(parts: usize, max_total: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; parts];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for x in 0..=left {
            cur[i] = x;
            rec(i + 1, left - x, cur, out);
        }
    }
    rec(0, max_total, &mut cur, &mut out);
    out
}

impl MapCatalog {
    pub fn build(f: &FieldSpec, k: usize, max_cols: usize) -> Result<Self> {
        if f.q() != 2 || k != 2 {
            return Err(Error::TooLarge(format!("bounded map search supports q = 2, k = 2 only (got q = {}, k = {k})", f.q())));
        }
        if max_cols > MAP_CHECK_MAX_COLS {
            return Err(Error::TooLarge(format!("column bound {max_cols} exceeds {MAP_CHECK_MAX_COLS}")));
        }
        let geom = Geometry::new(f, k)?;
        // all nonzero vectors of F_2^2; over F_2 each is its own class
        let vectors: Vec<Vec<FieldElement>> = geom.points().iter().map(|p| p.coords().to_vec()).collect();
        let layout = |counts: &[usize]| -> Vec<Vec<FieldElement>> {
            counts.iter().zip(&vectors).flat_map(|(&c, v)| std::iter::repeat_n(v.clone(), c)).collect()
        };

        let shapes = compositions(vectors.len(), max_cols);
        let mut entries: HashMap<WeightChangeMultiset, CatalogEntry> = HashMap::new();
        for r in &shapes {
            let Ok(domain) = GeneratorMatrix::new(f, FqMatrix::from_columns(k, &layout(r))?) else {
                continue;
            };
            for q in &shapes {
                let mut cols = layout(q);
                if cols.is_empty() {
                    cols.push(vec![FieldElement::ZERO; k]);
                }
                let map = LinearMapSpec::new(domain.clone(), FqMatrix::from_columns(k, &cols)?)?;
                let changes = weight_changes(&geom, &map)?;
                let entry = entries.entry(changes).or_default();
                entry.realizations += 1;
                if entry.violation.is_none() && projection_matrix(&map).is_none() {
                    entry.violation = Some(map);
                }
            }
        }
        Ok(MapCatalog { max_cols, entries })
    }

    pub fn max_cols(&self) -> usize {
        self.max_cols
    }

    pub fn check(&self, s: &WeightChangeMultiset) -> BoundedVerdict {
        match self.entries.get(s) {
            Some(CatalogEntry { violation: Some(map), .. }) => BoundedVerdict::NotForcing { map: map.clone() },
            Some(e) => BoundedVerdict::Forcing { realizations: e.realizations },
            None => BoundedVerdict::Forcing { realizations: 0 },
        }
    }
}

/// Definition-level check of S over binary maps with at most `max_cols`
/// domain and image columns.
pub fn exhaustive_map_check(f: &FieldSpec, k: usize, s: &WeightChangeMultiset, max_cols: usize) -> Result<BoundedVerdict> {
    s.expect_len(3)?;
    Ok(MapCatalog::build(f, k, max_cols)?.check(s))
}

/// The two binary maps from the two-maps example: both have projective
/// weight changes {2,2,2,2,4,4,4}; the first duplicates a coordinate of the
/// simplex code, the second projects another code onto two coordinates.
pub fn two_maps() -> (LinearMapSpec, LinearMapSpec) {
    let f = FieldSpec::new(2).expect("F_2");
    let m = |rows: &[[u64; 7]]| FqMatrix::from_reps(&f, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
    let v1 = GeneratorMatrix::new(&f, m(&[[1, 1, 1, 1, 0, 0, 0], [1, 1, 0, 0, 1, 1, 0], [1, 0, 1, 0, 1, 0, 1]])).unwrap();
    let v2 = GeneratorMatrix::new(&f, m(&[[1, 1, 1, 1, 0, 0, 0], [1, 1, 1, 0, 1, 0, 0], [1, 1, 0, 0, 0, 1, 1]])).unwrap();
    let pair = FqMatrix::from_reps(&f, &[vec![1, 1], vec![1, 1], vec![1, 1]]).unwrap();
    // phi1 copies coordinate 1 twice; phi2 keeps coordinates 1 and 2. On these
    // bases both images are all-ones pairs.
    (LinearMapSpec::new(v1, pair.clone()).unwrap(), LinearMapSpec::new(v2, pair).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::is_projection;
    use crate::forcing::{decide, Budget};

    fn system(q: u64, k: usize) -> IncidenceSystem {
        IncidenceSystem::new(&FieldSpec::new(q).unwrap(), k).unwrap()
    }

    fn ms(v: &[i64]) -> WeightChangeMultiset {
        WeightChangeMultiset::new(v.to_vec())
    }

    #[test]
    fn permutations_are_distinct_and_complete() {
        let mut v = vec![1, 1, 2, 3];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 12);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bruteforce_examples() {
        let sys = system(2, 3);
        assert_eq!(decide_bruteforce(&sys, &ms(&[2, 2, 2, 2, 4, 4, 4])).unwrap().status, Status::NotForcing);
        assert_eq!(decide_bruteforce(&sys, &ms(&[2, 2, 2, 3, 5, 5, 5])).unwrap().status, Status::Forcing);
        let v = decide_bruteforce(&system(2, 2), &ms(&[1, 1, 2])).unwrap();
        assert_eq!((v.status, v.stats.visited), (Status::Forcing, 3));
        assert!(matches!(decide_bruteforce(&system(2, 4), &ms(&[0; 15])), Err(Error::TooLarge(_))));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(ab_characterization(3, 2, 4), ClosedForm { realizable: true, forcing: Some(true) });
        assert_eq!(ab_characterization(3, 2, 8), ClosedForm { realizable: true, forcing: Some(false) });
        assert_eq!(ab_characterization(3, 1, 2), ClosedForm { realizable: false, forcing: None });
        assert!(abc_characterization(3, 2, 2, 4).realizable);
        assert_eq!(abc_characterization(3, 4, 4, 4), ClosedForm { realizable: true, forcing: Some(true) });
        let cf = abc_characterization(3, 2, 6, 12);
        assert!(cf.forcing != Some(true));
        assert_eq!(abc_characterization(2, 1, 1, 2).forcing, None);
    }

    #[test]
    fn map_check_examples() {
        let f2 = FieldSpec::new(2).unwrap();
        let catalog = MapCatalog::build(&f2, 2, 8).unwrap();
        assert!(catalog.check(&ms(&[0, 0, 0])).is_forcing());
        assert!(catalog.check(&ms(&[1, 1, 2])).is_forcing());
        let sys = system(2, 2);
        let s = ms(&[2, 2, 4]);
        assert_eq!(catalog.check(&s).is_forcing(), decide_bruteforce(&sys, &s).unwrap().is_forcing());
        assert!(matches!(exhaustive_map_check(&FieldSpec::new(3).unwrap(), 2, &ms(&[0; 3]), 4), Err(Error::TooLarge(_))));
        assert!(matches!(exhaustive_map_check(&f2, 2, &ms(&[0; 3]), 9), Err(Error::TooLarge(_))));
    }

    #[test]
    fn two_maps_fixture() {
        let (phi1, phi2) = two_maps();
        let g = Geometry::new(&FieldSpec::new(2).unwrap(), 3).unwrap();
        let target = ms(&[2, 2, 2, 2, 4, 4, 4]);
        assert_eq!(weight_changes(&g, &phi1).unwrap(), target);
        assert_eq!(weight_changes(&g, &phi2).unwrap(), target);
        assert!(!is_projection(&g, &phi1).unwrap());
        assert!(projection_matrix(&phi1).is_none());
        assert!(is_projection(&g, &phi2).unwrap());
        assert!(projection_matrix(&phi2).is_some());
    }

    #[test]
    fn bruteforce_witness_matches_engine_witness() {
        // the symmetry reduction keeps the lexicographically least success
        let sys = system(2, 3);
        for s in [[2, 2, 2, 2, 4, 4, 4], [0, 0, 2, 2, 2, 2, 6], [0, 2, 2, 2, 2, 4, 6]] {
            let s = ms(&s);
            let a = decide_bruteforce(&sys, &s).unwrap();
            let b = decide(&sys, &s, &Budget::default()).unwrap();
            assert_eq!(a.status, b.status);
            assert_eq!(a.witness.map(|w| w.arrangement), b.witness.map(|w| w.arrangement));
        }
    }
}
