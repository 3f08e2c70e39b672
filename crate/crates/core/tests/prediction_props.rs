use std::collections::BTreeMap;

use kacwreath_core::arrangement::{
    singular_hyperplanes, span_rank, Hyperplane, KClass, LinearInK, ParameterFace,
};
use kacwreath_core::exactmat::{int, rat, ratio, IntMatrix, QPolynomial, Rat};
use kacwreath_core::mckay::GammaDescriptor;
use kacwreath_core::partitions::PartitionCounter;
use kacwreath_core::predictions::{
    count_findim, diophantine_count, filtration_lattices_n1, gram_report, integral_root_span,
    levelrank_irrational, levelrank_rational, poincare_n1, predicted_gr, predicted_gr2,
    Provenance,
};
use kacwreath_core::weights::RootSystem;
use kacwreath_core::Error;
use num_bigint::BigUint;
use num_traits::Zero;

fn ubig(v: u64) -> BigUint {
    BigUint::from(v)
}

fn z(ell: u32) -> GammaDescriptor {
    GammaDescriptor::cyclic(ell).unwrap()
}

fn map1(entries: &[(u64, u64)]) -> BTreeMap<u64, BigUint> {
    entries.iter().map(|&(k, v)| (k, ubig(v))).collect()
}

fn map2(entries: &[((u64, u64), u64)]) -> BTreeMap<(u64, u64), BigUint> {
    entries.iter().map(|&(k, v)| (k, ubig(v))).collect()
}

#[test]
fn gram_cyclic_order_three() {
    let n = IntMatrix::from_i64_rows(&[vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]]).unwrap();
    let report = gram_report(&n, &[0, 1], None).unwrap();
    let expected_c =
        IntMatrix::from_i64_rows(&[vec![1, 1, 1], vec![1, 2, 2], vec![1, 2, 3]]).unwrap();
    assert_eq!(report.c, expected_c);
    let inv: Vec<Vec<Rat>> = (0..3)
        .map(|i| (0..3).map(|j| report.c_inverse.get(i, j).clone()).collect())
        .collect();
    let expected_inv: Vec<Vec<Rat>> = [[2, -1, 0], [-1, 2, -1], [0, -1, 1]]
        .iter()
        .map(|row| row.iter().map(|&v| rat(v)).collect())
        .collect();
    assert_eq!(inv, expected_inv);
    assert!(report.positive_definite);
    assert_eq!(report.findim_block.get(0, 0), &rat(2));
    assert_eq!(report.findim_block.get(0, 1), &rat(-1));
    assert_eq!(report.findim_block.get(1, 1), &rat(2));
}

#[test]
fn gram_triangular_ones_general_order() {
    for ell in 2..=6usize {
        let rows: Vec<Vec<i64>> =
            (0..ell).map(|i| (0..ell).map(|j| i64::from(j >= i)).collect()).collect();
        let n = IntMatrix::from_i64_rows(&rows).unwrap();
        let report = gram_report(&n, &[], None).unwrap();
        for i in 0..ell {
            for j in 0..ell {
                assert_eq!(report.c.get(i, j), &int(i.min(j) as i64 + 1));
                let expected = if i == j {
                    if i == ell - 1 {
                        rat(1)
                    } else {
                        rat(2)
                    }
                } else if i.abs_diff(j) == 1 {
                    rat(-1)
                } else {
                    rat(0)
                };
                assert_eq!(report.c_inverse.get(i, j), &expected, "ell={ell} ({i},{j})");
            }
        }
        assert!(report.positive_definite);
    }
}

#[test]
fn gram_q_determinants() {
    // single vertex: det = 1 + q^2
    let one = IntMatrix::from_i64_rows(&[vec![0]]).unwrap();
    let report = gram_report(&IntMatrix::identity(1), &[], Some(&one)).unwrap();
    assert_eq!(report.q_det.unwrap(), QPolynomial::from_i64(&[1, 0, 1]));
    assert_eq!(report.q_cyclotomic_factors.unwrap(), vec![(4, 1)]);
    assert_eq!(report.nondegenerate_off_unity, Some(true));

    // path with two vertices: det = 1 + q^2 + q^4
    let path2 = IntMatrix::from_i64_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
    let report = gram_report(&IntMatrix::identity(2), &[], Some(&path2)).unwrap();
    assert_eq!(report.q_det.unwrap(), QPolynomial::from_i64(&[1, 0, 1, 0, 1]));
    assert_eq!(report.q_cyclotomic_factors.unwrap(), vec![(3, 1), (6, 1)]);
    assert_eq!(report.q_remainder.unwrap(), QPolynomial::one());
    assert_eq!(report.nondegenerate_off_unity, Some(true));

    // path with ell vertices: det = 1 + q^2 + ... + q^(2 ell)
    for ell in 3..=6usize {
        let rows: Vec<Vec<i64>> = (0..ell)
            .map(|i| (0..ell).map(|j| i64::from(i.abs_diff(j) == 1)).collect())
            .collect();
        let adj = IntMatrix::from_i64_rows(&rows).unwrap();
        let report = gram_report(&IntMatrix::identity(ell), &[], Some(&adj)).unwrap();
        let mut coeffs = vec![0i64; 2 * ell + 1];
        for c in coeffs.iter_mut().step_by(2) {
            *c = 1;
        }
        assert_eq!(report.q_det.unwrap(), QPolynomial::new(coeffs.iter().map(|&c| int(c)).collect()));
        assert_eq!(report.nondegenerate_off_unity, Some(true));
    }
}

#[test]
fn gram_identity_and_rank_errors() {
    let report = gram_report(&IntMatrix::identity(4), &[1, 2], None).unwrap();
    assert_eq!(report.c, IntMatrix::identity(4));
    assert!(report.positive_definite);
    let deficient = IntMatrix::from_i64_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
    assert!(matches!(gram_report(&deficient, &[], None), Err(Error::RankDeficient(_))));
}

#[test]
fn filtration_lattice_conventions() {
    let (cyclic, truncated) = filtration_lattices_n1(3).unwrap();
    assert_eq!(cyclic.invariant_factors, vec![int(3)]);
    assert_eq!(cyclic.free_rank, 1);
    assert!(truncated.invariant_factors.is_empty());
    assert_eq!(truncated.free_rank, 1);
    for ell in 2..=8u32 {
        let (cyclic, truncated) = filtration_lattices_n1(ell).unwrap();
        assert_eq!(cyclic.invariant_factors, vec![int(ell as i64)], "ell={ell}");
        assert_eq!(cyclic.free_rank, 1);
        assert!(truncated.invariant_factors.is_empty(), "ell={ell}");
        assert_eq!(truncated.free_rank, 1);
    }
}

#[test]
fn poincare_polynomials_rank_one() {
    // lambda on the affine vertex: every root pairs integrally
    for ell in 2..=5u32 {
        let pairs = vec![Rat::zero(); ell as usize - 1];
        let poly = poincare_n1(ell, &pairs).unwrap();
        assert_eq!(poly, QPolynomial::new(vec![int(1), int(ell as i64 - 1)]));
    }
    // generic lambda: no integral root, constant polynomial
    let poly = poincare_n1(3, &[ratio(1, 7), ratio(1, 7)]).unwrap();
    assert_eq!(poly, QPolynomial::new(vec![int(3)]));
    // exactly one integral root pair
    let poly = poincare_n1(3, &[rat(1), ratio(1, 2)]).unwrap();
    assert_eq!(poly, QPolynomial::new(vec![int(2), int(1)]));
}

/// The span rank feeding the Poincare polynomial, recomputed through the
/// hyperplane family of the corresponding parameter face.
fn span_via_hyperplanes(ell: u32, pairs: &[Rat]) -> usize {
    let mut lambda = vec![LinearInK::constant(Rat::zero()); ell as usize];
    let head: Rat = Rat::from_integer(1.into()) - pairs.iter().sum::<Rat>();
    lambda[0] = LinearInK::constant(head);
    for (i, p) in pairs.iter().enumerate() {
        lambda[i + 1] = LinearInK::constant(p.clone());
    }
    let face = ParameterFace::new(z(ell), 1, KClass::Irrational, lambda).unwrap();
    let alphas: Vec<Vec<i64>> = singular_hyperplanes(&face)
        .unwrap()
        .into_iter()
        .filter_map(|h| match h {
            Hyperplane::Root { alpha, .. } => Some(alpha),
            Hyperplane::Boson { .. } => None,
        })
        .collect();
    span_rank(&RootSystem::new(&z(ell)), &alphas)
}

#[test]
fn poincare_span_two_ways() {
    let cases: Vec<(u32, Vec<Rat>)> = vec![
        (2, vec![Rat::zero()]),
        (3, vec![Rat::zero(), Rat::zero()]),
        (3, vec![ratio(1, 7), ratio(1, 7)]),
        (3, vec![rat(1), ratio(1, 2)]),
        (4, vec![rat(-2), ratio(3, 5), rat(4)]),
        (5, vec![ratio(1, 2), ratio(1, 2), ratio(1, 3), ratio(2, 3)]),
    ];
    for (ell, pairs) in cases {
        let direct = integral_root_span(ell, &pairs).unwrap();
        let via_face = span_via_hyperplanes(ell, &pairs);
        assert_eq!(direct, via_face, "ell={ell} pairs={pairs:?}");
    }
}

#[test]
fn diophantine_examples() {
    assert_eq!(diophantine_count(&[0], 4), ubig(1));
    assert_eq!(diophantine_count(&[0, 0], 1), ubig(2));
    assert_eq!(diophantine_count(&[1], 2), ubig(1));
    assert_eq!(diophantine_count(&[2, 1], 0), ubig(1));
    assert_eq!(diophantine_count(&[-2], 3), ubig(1));
    assert_eq!(diophantine_count(&[-1, -1], 0), ubig(4));
    assert_eq!(diophantine_count(&[], 0), ubig(1));
    assert_eq!(diophantine_count(&[], 1), ubig(0));
}

#[test]
fn levelrank_irrational_values() {
    let squares: Vec<u64> = (0..=6).map(|n| (0..=2).any(|a| a * a == n) as u64).collect();
    for (n, &expected) in squares.iter().enumerate() {
        assert_eq!(levelrank_irrational(2, n as u64).unwrap(), ubig(expected), "n={n}");
    }
    assert_eq!(levelrank_irrational(3, 1).unwrap(), ubig(2));
    assert_eq!(levelrank_irrational(3, 2).unwrap(), ubig(0));
    assert_eq!(levelrank_irrational(3, 3).unwrap(), ubig(2));
    assert_eq!(levelrank_irrational(3, 4).unwrap(), ubig(3));
}

#[test]
fn levelrank_rational_values() {
    assert_eq!(levelrank_rational(2, 2, 0, 2).unwrap(), ubig(1));
    assert_eq!(levelrank_rational(2, 2, 1, 3).unwrap(), ubig(1));
    assert_eq!(levelrank_rational(2, 2, 2, 4).unwrap(), ubig(1));
    assert_eq!(levelrank_rational(3, 2, 0, 2).unwrap(), ubig(1));
    assert!(matches!(
        levelrank_rational(2, 2, 4, 1),
        Err(Error::DepthExhausted { .. })
    ));
}

#[test]
fn graded_prediction_integer_k() {
    let face = ParameterFace::standard(z(2), 2, KClass::Exact(rat(0)));
    let p = predicted_gr(&face).unwrap();
    assert_eq!(p.by_index, map1(&[(0, 2), (1, 1), (2, 2)]));
    assert_eq!(p.by_pair, None);
    assert_eq!(p.provenance, Provenance::Branching);
    assert_eq!(p.total(), ubig(5));

    let mut pc = PartitionCounter::new();
    for n in 0..=4u64 {
        let face = ParameterFace::standard(z(3), n, KClass::Exact(rat(0)));
        let p = predicted_gr(&face).unwrap();
        assert_eq!(p.total(), pc.multipartition_count(3, n), "n={n}");
        for (i, v) in &p.by_index {
            assert_eq!(*v, pc.p_colored(2, n - i) * pc.p_colored(1, *i), "n={n} i={i}");
        }
    }
}

#[test]
fn graded_prediction_rank_one_strata() {
    for ell in 2..=4u32 {
        let face = ParameterFace::standard(z(ell), 1, KClass::Irrational);
        let p = predicted_gr(&face).unwrap();
        assert_eq!(p.by_index, map1(&[(0, ell as u64 - 1), (1, 1)]), "ell={ell}");
        assert_eq!(p.total(), ubig(ell as u64));
        assert_eq!(count_findim(&face).unwrap(), ubig(ell as u64 - 1));
    }
    let face = ParameterFace::standard(z(2), 2, KClass::Irrational);
    let p = predicted_gr(&face).unwrap();
    assert_eq!(p.by_index, map1(&[(1, 2), (2, 3)]));
}

#[test]
fn graded_prediction_trivial_group() {
    let g = GammaDescriptor::trivial();
    let face = ParameterFace::standard(g, 5, KClass::Irrational);
    let p = predicted_gr(&face).unwrap();
    assert_eq!(p.by_index, map1(&[(5, 7)]));
    assert_eq!(count_findim(&face).unwrap(), BigUint::zero());

    // branching and the closed form are independent routes to the two-index
    // grading at rational k
    let face = ParameterFace::standard(g, 3, KClass::Exact(ratio(-1, 2)));
    let via_branching = predicted_gr(&face).unwrap();
    assert_eq!(via_branching.provenance, Provenance::Branching);
    let via_closed = predicted_gr2(&face).unwrap();
    assert_eq!(via_closed.provenance, Provenance::ClosedForm);
    assert_eq!(via_closed.by_pair.as_ref().unwrap(), &map2(&[((3, 0), 2), ((1, 1), 1)]));
    assert_eq!(via_branching.by_pair, via_closed.by_pair);
    assert_eq!(via_branching.by_index, map1(&[(2, 1), (3, 2)]));
    assert_eq!(count_findim(&face).unwrap(), BigUint::zero());

    // denominator larger than n: everything in boson degree zero
    let face = ParameterFace::standard(g, 3, KClass::Exact(ratio(1, 5)));
    let p = predicted_gr2(&face).unwrap();
    assert_eq!(p.by_pair.as_ref().unwrap(), &map2(&[((3, 0), 3)]));
    assert_eq!(p.total(), ubig(3));

    let face = ParameterFace::standard(g, 3, KClass::Irrational);
    assert!(matches!(predicted_gr2(&face), Err(Error::InvalidFace(_))));
}

#[test]
fn graded_prediction_finite_plus_heisenberg() {
    let mut pc = PartitionCounter::new();
    // n stops at 2: one step further the face acquires winding roots and
    // leaves the branching regime
    for n in 0..=2u64 {
        let face = ParameterFace::standard(z(3), n, KClass::Exact(ratio(-1, 2)));
        let p = predicted_gr2(&face).unwrap();
        assert_eq!(p.total(), pc.multipartition_count(3, n), "n={n}");
        let pair = p.by_pair.as_ref().unwrap();
        let remarginalized: BTreeMap<u64, BigUint> = {
            let mut out: BTreeMap<u64, BigUint> = BTreeMap::new();
            for (&(i, j), v) in pair {
                *out.entry(i + j).or_default() += v.clone();
            }
            out
        };
        assert_eq!(remarginalized, p.by_index, "n={n}");
        let zero_entry = pair.get(&(0, 0)).cloned().unwrap_or_default();
        assert_eq!(zero_entry, count_findim(&face).unwrap(), "n={n}");
    }
}

#[test]
fn winding_regime_dispatch() {
    let face = ParameterFace::standard(z(2), 3, KClass::Exact(ratio(-1, 2)));
    assert!(matches!(predicted_gr(&face), Err(Error::UnsupportedRegime(_))));
    // the finite-dimensional count falls through to level-rank
    assert_eq!(count_findim(&face).unwrap(), levelrank_rational(2, 2, 3, 5).unwrap());
    // level-rank agrees with branching where the branching engine applies
    for n in 0..=1u64 {
        let face = ParameterFace::standard(z(2), n, KClass::Exact(ratio(-1, 2)));
        assert_eq!(
            count_findim(&face).unwrap(),
            levelrank_rational(2, 2, n, n + 2).unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn findim_two_paths_levelrank() {
    for ell in 2..=3u32 {
        for n in 0..=4u64 {
            let face = ParameterFace::standard(z(ell), n, KClass::Irrational);
            assert_eq!(
                count_findim(&face).unwrap(),
                levelrank_irrational(ell, n).unwrap(),
                "ell={ell} n={n}"
            );
        }
    }
}

fn orthogonal_pair_face(m1: i64, m2: i64, n: u64) -> ParameterFace {
    let lambda = vec![
        LinearInK::new(ratio(6, 7), rat(m1 + m2)),
        LinearInK::new(Rat::zero(), rat(-m1)),
        LinearInK::new(ratio(1, 7), Rat::zero()),
        LinearInK::new(Rat::zero(), rat(-m2)),
    ];
    ParameterFace::new(z(4), n, KClass::Irrational, lambda).unwrap()
}

#[test]
fn findim_two_paths_diophantine() {
    for n in 0..=5u64 {
        let face = ParameterFace::standard(z(2), n, KClass::Irrational);
        assert_eq!(count_findim(&face).unwrap(), diophantine_count(&[0], n), "m=(0) n={n}");
    }
    for n in 0..=5u64 {
        let lambda = vec![LinearInK::new(rat(1), rat(1)), LinearInK::new(Rat::zero(), rat(-1))];
        let face = ParameterFace::new(z(2), n, KClass::Irrational, lambda).unwrap();
        assert_eq!(count_findim(&face).unwrap(), diophantine_count(&[1], n), "m=(1) n={n}");
    }
    for n in 0..=4u64 {
        let face = orthogonal_pair_face(2, 1, n);
        assert_eq!(count_findim(&face).unwrap(), diophantine_count(&[2, 1], n), "m=(2,1) n={n}");
    }
}
