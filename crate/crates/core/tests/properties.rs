use proptest::prelude::*;

use projforce::codes::weight_change_vector_via_incidence;
use projforce::forcing::{integral_arrangements, min_entry_bound};
use projforce::oracle::decide_bruteforce;
use projforce::{
    decide, is_projection, multiplicities, projection_matrix, projective_weights, realizable, weight_changes, Budget,
    FieldElement, FieldSpec, FqMatrix, GeneratorMatrix, IncidenceSystem, LinearMapSpec, Status, WeightChangeMultiset,
};

fn field_and_k() -> impl Strategy<Value = (u64, usize)> {
    prop_oneof![Just((2u64, 2usize)), Just((2, 3)), Just((3, 2)), Just((3, 3)), Just((4, 2)), Just((4, 3))]
}

/// A random full-rank k x n domain matrix and an arbitrary k x m image.
fn random_map() -> impl Strategy<Value = (u64, usize, Vec<Vec<u64>>, Vec<Vec<u64>>)> {
    field_and_k().prop_flat_map(|(q, k)| {
        let n = k..(k + 8);
        let m = 0usize..8;
        (Just(q), Just(k), n, m).prop_flat_map(move |(q, k, n, m)| {
            let b = proptest::collection::vec(proptest::collection::vec(0..q, n), k);
            let c = proptest::collection::vec(proptest::collection::vec(0..q, m.max(1)), k);
            (Just(q), Just(k), b, c)
        })
    })
}

fn build(q: u64, k: usize, b: &[Vec<u64>], c: &[Vec<u64>]) -> Option<(IncidenceSystem, LinearMapSpec)> {
    let f = FieldSpec::new(q).unwrap();
    let domain = GeneratorMatrix::new(&f, FqMatrix::from_reps(&f, b).unwrap()).ok()?;
    let map = LinearMapSpec::new(domain, FqMatrix::from_reps(&f, c).unwrap()).unwrap();
    Some((IncidenceSystem::new(&f, k).unwrap(), map))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn weight_changes_equal_m_times_difference((q, k, b, c) in random_map()) {
        let Some((sys, map)) = build(q, k, &b, &c) else { return Ok(()) };
        let direct = projforce::codes::weight_change_vector(sys.geometry(), &map).unwrap();
        prop_assert_eq!(&direct, &weight_change_vector_via_incidence(&sys, &map).unwrap());
        let r = multiplicities(sys.geometry(), map.domain().matrix()).unwrap();
        prop_assert_eq!(projective_weights(sys.geometry(), map.domain()).unwrap(), sys.apply(&r.counts).unwrap());
        prop_assert_eq!(r.total_columns() as usize, b[0].len());
    }

    #[test]
    fn projection_tests_agree((q, k, b, c) in random_map()) {
        let Some((sys, map)) = build(q, k, &b, &c) else { return Ok(()) };
        let by_multiplicity = is_projection(sys.geometry(), &map).unwrap();
        let by_matching = projection_matrix(&map);
        prop_assert_eq!(by_multiplicity, by_matching.is_some());
        if let Some(p) = by_matching {
            prop_assert_eq!(&map.domain().matrix().mul(map.field(), &p).unwrap(), map.image());
        }
        if by_multiplicity {
            prop_assert!(weight_changes(sys.geometry(), &map).unwrap().values().iter().all(|&x| x >= 0));
        }
    }

    #[test]
    fn row_scaling_preserves_changes((q, k, b, c) in random_map(), row in 0usize..3, scalar in 1u64..4) {
        let Some((sys, map)) = build(q, k, &b, &c) else { return Ok(()) };
        let f = map.field().clone();
        let row = row % k;
        let a = f.element(scalar % q).unwrap();
        prop_assume!(!a.is_zero());
        let scale = |m: &FqMatrix| {
            let mut m = m.clone();
            for j in 0..m.cols() {
                m.set(row, j, f.mul(a, m.get(row, j)));
            }
            m
        };
        let scaled = LinearMapSpec::new(
            GeneratorMatrix::new(&f, scale(map.domain().matrix())).unwrap(),
            scale(map.image()),
        ).unwrap();
        prop_assert_eq!(weight_changes(sys.geometry(), &map).unwrap(), weight_changes(sys.geometry(), &scaled).unwrap());
    }

    #[test]
    fn monomial_images_preserve_weights((q, k, b, _c) in random_map(), seed in any::<u64>()) {
        let zeros = vec![vec![0u64]; k];
        let Some((sys, map)) = build(q, k, &b, &zeros) else { return Ok(()) };
        let f = map.field();
        let n = map.domain().n();
        // permute columns by a rotation and scale each by a nonzero element
        let shift = (seed as usize) % n;
        let mut img = FqMatrix::zeros(k, n);
        for j in 0..n {
            let s = FieldElement::from_raw((1 + (seed >> j) as u32 % (f.q() - 1)) as u8);
            for i in 0..k {
                img.set(i, (j + shift) % n, f.mul(s, map.domain().matrix().get(i, j)));
            }
        }
        let mono = LinearMapSpec::new(map.domain().clone(), img).unwrap();
        prop_assert!(weight_changes(sys.geometry(), &mono).unwrap().values().iter().all(|&x| x == 0));
    }

    #[test]
    fn apply_inverse_is_linear((q, k) in field_and_k(), seed in proptest::collection::vec(-20i64..20, 40)) {
        let sys = IncidenceSystem::new(&FieldSpec::new(q).unwrap(), k).unwrap();
        let n = sys.n_points();
        let u: Vec<i64> = seed.iter().cycle().take(n).copied().collect();
        let v: Vec<i64> = seed.iter().rev().cycle().take(n).copied().collect();
        let sum: Vec<i64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let (nu, _) = sys.apply_inverse(&u).unwrap();
        let (nv, _) = sys.apply_inverse(&v).unwrap();
        let (ns, den) = sys.apply_inverse(&sum).unwrap();
        prop_assert_eq!(ns, nu.iter().zip(&nv).map(|(a, b)| a + b).collect::<Vec<_>>());
        // M^{-1} M u = u
        let (back, _) = sys.apply_inverse(&sys.apply(&u).unwrap()).unwrap();
        prop_assert_eq!(back, u.iter().map(|x| x * den).collect::<Vec<_>>());
    }

    #[test]
    fn split_difference_is_exact_minimum(q_k in prop_oneof![Just((2u64, 2usize)), Just((2, 3)), Just((3, 2))],
                                         raw in proptest::collection::vec(-5i64..8, 7)) {
        let (q, k) = q_k;
        let f = FieldSpec::new(q).unwrap();
        let sys = IncidenceSystem::new(&f, k).unwrap();
        let s = WeightChangeMultiset::new(raw[..sys.n_points()].to_vec());
        let (num, den) = min_entry_bound(&f, k, &s).unwrap();
        prop_assert_eq!(den, sys.row_weight());
        // brute-force minimum over every ordering
        let mut best = i64::MAX;
        let mut idx: Vec<usize> = (0..sys.n_points()).collect();
        permute(&mut idx, 0, &mut |p| {
            let pi: Vec<i64> = p.iter().map(|&i| s.values()[i]).collect();
            let (nums, _) = sys.apply_inverse(&pi).unwrap();
            best = best.min(*nums.iter().min().unwrap());
        });
        prop_assert_eq!(best, num);
    }

    #[test]
    fn realizability_matches_vacuity(raw in proptest::collection::vec(-3i64..9, 7)) {
        let sys = IncidenceSystem::new(&FieldSpec::new(2).unwrap(), 3).unwrap();
        let s = WeightChangeMultiset::new(raw.clone());
        let v = decide(&sys, &s, &Budget::default()).unwrap();
        let r = realizable(&sys, &s, &Budget::default()).unwrap();
        prop_assert_eq!(!r.realizable, v.status == Status::ForcingVacuous);
        prop_assert_eq!(v.status, decide_bruteforce(&sys, &s).unwrap().status);
        if let Some(map) = r.map {
            prop_assert_eq!(weight_changes(sys.geometry(), &map).unwrap(), s.clone());
        }
        // presentation order is irrelevant
        let mut rev = raw;
        rev.reverse();
        prop_assert_eq!(decide(&sys, &WeightChangeMultiset::new(rev), &Budget::default()).unwrap().status, v.status);
    }
}

fn permute(v: &mut Vec<usize>, i: usize, visit: &mut dyn FnMut(&[usize])) {
    if i == v.len() {
        visit(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v, i + 1, visit);
        v.swap(i, j);
    }
}

#[test]
fn integral_arrangements_agree_with_bruteforce_enumeration() {
    let sys = IncidenceSystem::new(&FieldSpec::new(2).unwrap(), 3).unwrap();
    for s in [[2, 2, 2, 3, 5, 5, 5], [2, 2, 2, 2, 4, 4, 4], [0, 1, 2, 3, 4, 5, 6]] {
        let s = WeightChangeMultiset::new(s.to_vec());
        let found: Vec<Vec<i64>> = integral_arrangements(&sys, &s, &Budget::default()).unwrap().into_iter().map(|(pi, _)| pi).collect();
        let mut brute = std::collections::BTreeSet::new();
        let mut idx: Vec<usize> = (0..7).collect();
        permute(&mut idx, 0, &mut |p| {
            let pi: Vec<i64> = p.iter().map(|&i| s.values()[i]).collect();
            if sys.solve_integral(&pi).unwrap().is_some() {
                brute.insert(pi);
            }
        });
        assert_eq!(found, brute.into_iter().collect::<Vec<_>>());
    }
}
