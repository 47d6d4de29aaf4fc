//! Property tests for the algebraic and numerical invariants.

use std::f64::consts::PI;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use proptest::prelude::*;

use nilstab_core::cohomology::{
    boundary2, boundary3, builtin_cocycle, builtin_witness_cycle, pair_cocycle_cycle, voiculescu_cycle, Chain2,
    Cocycle, CocycleKind, PolyCocycle,
};
use nilstab_core::extensions::{central_extension, scaling_map};
use nilstab_core::group::{heisenberg3, quotient_by_last, validate_group, GroupElement, MalcevGroup};
use nilstab_core::obstruction::{matrix_log_near_identity, winding_pairing, LOG_TOL};
use nilstab_core::report::SampleConfig;
use nilstab_core::representation::{build_rho, chi, defect, norm, NormKind, PhaseShiftMatrix};

fn element(m: usize, bound: i64) -> impl Strategy<Value = GroupElement> {
    proptest::collection::vec(-bound..=bound, m).prop_map(|v| GroupElement::from_i64(&v))
}

fn groups() -> Vec<MalcevGroup> {
    let z2 = builtin_cocycle(CocycleKind::Z2Skinny);
    let h3 = builtin_cocycle(CocycleKind::HeisenbergSkinny);
    vec![
        MalcevGroup::lattice(2),
        MalcevGroup::lattice(3),
        heisenberg3(),
        central_extension(&h3).unwrap().total().as_ref().clone(),
        central_extension(&z2.scale(&BigInt::from(-3))).unwrap().total().as_ref().clone(),
    ]
}

fn three(m: usize) -> impl Strategy<Value = (GroupElement, GroupElement, GroupElement)> {
    (element(m, 4), element(m, 4), element(m, 4))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_axioms((idx, (x, y, z)) in (0usize..5).prop_flat_map(|i| (Just(i), three(groups()[i].hirsch())))) {
        let g = &groups()[idx];
        let xy_z = g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap();
        let x_yz = g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        let inv = g.inverse(&x).unwrap();
        prop_assert!(g.multiply(&x, &inv).unwrap().is_identity());
        prop_assert!(g.multiply(&inv, &x).unwrap().is_identity());
        prop_assert_eq!(g.multiply(&x, &g.identity()).unwrap(), x.clone());
        let sum = g.canonical_hom(&x) + g.canonical_hom(&y);
        prop_assert_eq!(g.canonical_hom(&g.multiply(&x, &y).unwrap()), sum);
        prop_assert!(g.is_triangular());
    }

    #[test]
    fn h3_center_is_last_coordinate(x in element(3, 5), k in -5i64..=5) {
        let g = heisenberg3();
        prop_assert!(g.commutator(&x, &GroupElement::from_i64(&[0, 0, k])).unwrap().is_identity());
    }

    #[test]
    fn commutator_cycles(a in element(3, 3), b in element(3, 3)) {
        let g = heisenberg3();
        let c = Chain2::new(vec![(BigInt::from(1), a.clone(), b.clone()), (BigInt::from(-1), b.clone(), a.clone())]);
        let commute = g.multiply(&a, &b).unwrap() == g.multiply(&b, &a).unwrap();
        prop_assert_eq!(boundary2(&g, &c).unwrap().is_empty(), commute);
    }

    #[test]
    fn pairing_is_bilinear(
        terms1 in proptest::collection::vec((-3i64..=3, element(2, 3), element(2, 3)), 0..4),
        terms2 in proptest::collection::vec((-3i64..=3, element(2, 3), element(2, 3)), 0..4),
        k in -4i64..=4,
    ) {
        let s = builtin_cocycle(CocycleKind::Z2Skinny);
        let mk = |t: &Vec<(i64, GroupElement, GroupElement)>| {
            Chain2::new(t.iter().map(|(c, a, b)| (BigInt::from(*c), a.clone(), b.clone())).collect())
        };
        let (c1, c2) = (mk(&terms1), mk(&terms2));
        let sum = pair_cocycle_cycle(&s, &c1).unwrap() + pair_cocycle_cycle(&s, &c2).unwrap();
        prop_assert_eq!(pair_cocycle_cycle(&s, &c1.plus(&c2)).unwrap(), sum);
        let kb = BigInt::from(k);
        prop_assert_eq!(
            pair_cocycle_cycle(&s.scale(&kb), &c1).unwrap(),
            &kb * pair_cocycle_cycle(&s, &c1).unwrap()
        );
        let t = s.scale(&BigInt::from(2));
        let added = PolyCocycle::new(s.group().clone(), s.poly() + t.poly(), "3*sigma").unwrap();
        prop_assert_eq!(
            pair_cocycle_cycle(&added, &c1).unwrap(),
            pair_cocycle_cycle(&s, &c1).unwrap() + pair_cocycle_cycle(&t, &c1).unwrap()
        );
    }

    #[test]
    fn pairing_ignores_boundaries(
        terms in proptest::collection::vec((-3i64..=3, element(3, 2), element(3, 2), element(3, 2)), 1..4),
    ) {
        let kind = CocycleKind::HeisenbergSkinny;
        let s = builtin_cocycle(kind);
        let g = s.group().clone();
        let c = builtin_witness_cycle(kind);
        let t: Vec<_> = terms.into_iter().map(|(k, a, b, cc)| (BigInt::from(k), a, b, cc)).collect();
        let d = boundary3(&g, &t).unwrap();
        prop_assert!(boundary2(&g, &d).unwrap().is_empty());
        prop_assert_eq!(pair_cocycle_cycle(&s, &d).unwrap(), BigInt::from(0));
        prop_assert_eq!(pair_cocycle_cycle(&s, &c.plus(&d)).unwrap(), pair_cocycle_cycle(&s, &c).unwrap());
    }

    #[test]
    fn shipped_cocycles_satisfy_the_identity(x in element(3, 6), y in element(3, 6), z in element(3, 6), k in -3i64..=3) {
        let s = builtin_cocycle(CocycleKind::HeisenbergSkinny).scale(&BigInt::from(k));
        let g = s.group().clone();
        let xy = g.multiply(&x, &y).unwrap();
        let yz = g.multiply(&y, &z).unwrap();
        let d = s.eval(&y, &z).unwrap() - s.eval(&xy, &z).unwrap() + s.eval(&x, &yz).unwrap() - s.eval(&x, &y).unwrap();
        prop_assert_eq!(d, BigInt::from(0));
        prop_assert_eq!(s.eval(&g.identity(), &y).unwrap(), BigInt::from(0));
        prop_assert_eq!(s.eval(&x, &g.identity()).unwrap(), BigInt::from(0));
    }

    #[test]
    fn scaling_map_is_a_homomorphism(x in element(3, 4), y in element(3, 4), k in -4i64..=4) {
        let s = builtin_cocycle(CocycleKind::Z2Skinny);
        let kb = BigInt::from(k);
        let from = central_extension(&s).unwrap();
        let to = central_extension(&s.scale(&kb)).unwrap();
        let lhs = to.total().multiply(&scaling_map(&x, &kb), &scaling_map(&y, &kb)).unwrap();
        prop_assert_eq!(lhs, scaling_map(&from.total().multiply(&x, &y).unwrap(), &kb));
    }

    #[test]
    fn rho_is_multiplicative_up_to_chi(x in element(3, 3), y in element(3, 3), n in prop::sample::select(vec![9usize, 15, 33, 127])) {
        let s = builtin_cocycle(CocycleKind::HeisenbergSkinny);
        let xy = s.group().multiply(&x, &y).unwrap();
        let lhs = build_rho(&s, n, &x).unwrap().compose(&build_rho(&s, n, &y).unwrap()).unwrap();
        let rhs = build_rho(&s, n, &xy).unwrap().scale(chi(&s, n, &x, &y).unwrap());
        prop_assert_eq!(lhs.shift(), rhs.shift());
        let (frob, _) = lhs.difference_norms(&rhs).unwrap();
        prop_assert!(frob < 1e-12 * (n as f64).sqrt());
        let unit = lhs.compose(&lhs.adjoint()).unwrap().to_dense();
        let id = PhaseShiftMatrix::identity(n).to_dense();
        prop_assert!(unit.sub(&id).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn defect_bounds_hold(x in element(2, 3), y in element(2, 3), n in prop::sample::select(vec![8usize, 16, 32, 64, 128, 256])) {
        let s = builtin_cocycle(CocycleKind::Z2Skinny);
        let d = defect(&s, n, &x, &y).unwrap();
        prop_assert!(d.frob <= d.bound_frob + 1e-9);
        prop_assert!(d.op <= d.bound_op + 1e-9);
        prop_assert!(d.op <= d.frob + 1e-12);
    }

    #[test]
    fn structured_matches_dense(x in element(2, 4), y in element(2, 4), n in 1usize..20) {
        let s = builtin_cocycle(CocycleKind::Z2Skinny);
        let a = build_rho(&s, n, &x).unwrap();
        let b = build_rho(&s, n, &y).unwrap();
        let dense = a.to_dense().mul(&b.to_dense()).unwrap();
        prop_assert!(a.compose(&b).unwrap().to_dense().max_abs_diff(&dense) < 1e-12);
        prop_assert!(a.adjoint().to_dense().max_abs_diff(&a.to_dense().adjoint()) < 1e-12);
        let (_, op) = a.difference_norms(&b).unwrap();
        let dense_op = norm(&a.to_dense().sub(&b.to_dense()).unwrap(), NormKind::Operator).unwrap();
        prop_assert!((op - dense_op).abs() < 1e-9, "{} vs {}", op, dense_op);
    }

    #[test]
    fn log_terms_are_scalar(a in element(2, 3), b in element(2, 3), n in prop::sample::select(vec![16usize, 32, 64])) {
        let s = builtin_cocycle(CocycleKind::Z2Skinny);
        let g = s.group().clone();
        let ab = g.multiply(&a, &b).unwrap();
        let t = build_rho(&s, n, &ab).unwrap()
            .compose(&build_rho(&s, n, &b).unwrap().adjoint()).unwrap()
            .compose(&build_rho(&s, n, &a).unwrap().adjoint()).unwrap();
        let sig = s.eval(&a, &b).unwrap();
        let sig_f: f64 = sig.to_string().parse().unwrap();
        prop_assume!(sig_f.abs() < n as f64 / 6.0);
        let log = matrix_log_near_identity(&t.to_dense(), LOG_TOL).unwrap();
        let want = Complex64::new(0.0, -2.0 * PI * sig_f / n as f64) * n as f64;
        prop_assert!((log.trace() - want).norm() < 1e-10);
    }
}

#[test]
fn quotients_stay_valid() {
    for g in groups() {
        let q = quotient_by_last(&g).unwrap();
        assert!(validate_group(&q, &SampleConfig::group_default()).passed(), "{}", q.name());
    }
}

#[test]
fn pairing_of_genuine_representation_vanishes() {
    let g = Arc::new(MalcevGroup::lattice(2));
    let rep = |x: &GroupElement| {
        let f: Vec<f64> = x.coords().iter().map(|c| c.to_string().parse().unwrap()).collect();
        Ok(nilstab_core::representation::DenseMatrix::scalar(
            2,
            Complex64::from_polar(1.0, 2.0 * PI * (0.3 * f[0] + 0.7 * f[1])),
        ))
    };
    let p = winding_pairing(&g, rep, &voiculescu_cycle()).unwrap();
    assert_eq!(p.rounded, Some(0));
}
