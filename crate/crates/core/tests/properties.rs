use proptest::prelude::*;

use conelip::cone::{cone_lip, odot, PhField, RaySystem};
use conelip::elements::{eval_pairing, FreeElement, PhFreeElement, PhTerm};
use conelip::freespace::{kr_norm, ph_norm, KrMethod, PH_NORM_TOL};
use conelip::mcshane::{mcshane, PartialField, Side};
use conelip::metric::{lip_const, PointedSpace, ScalarField};
use conelip::NormKind;

fn norm_kind() -> impl Strategy<Value = NormKind> {
    prop_oneof![Just(NormKind::L1), Just(NormKind::L2), Just(NormKind::Linf)]
}

/// A space of 2–7 points in dimension 1–3 with at least one field on it.
fn space_and_fields(count: usize) -> impl Strategy<Value = (PointedSpace, Vec<ScalarField>)> {
    (norm_kind(), 1usize..=3, 2usize..=7)
        .prop_flat_map(move |(norm, dim, n)| {
            (
                Just(norm),
                Just(dim),
                prop::collection::vec(prop::collection::vec(-3.0..3.0f64, dim), n),
                prop::collection::vec(prop::collection::vec(-5.0..5.0f64, n - 1), count),
            )
        })
        .prop_filter_map("points must be distinct", |(norm, dim, points, fields)| {
            let space = PointedSpace::embedded(norm, dim, points).ok()?;
            let fields = fields
                .into_iter()
                .map(|v| {
                    let mut values = vec![0.0];
                    values.extend(v);
                    ScalarField::new(values).unwrap()
                })
                .collect();
            Some((space, fields))
        })
}

fn element(field: &ScalarField) -> FreeElement {
    // Reuse field values as coefficients; index 0 carries none.
    FreeElement::new(field.values().iter().copied().enumerate().skip(1))
}

fn lip(s: &PointedSpace, f: &ScalarField) -> f64 {
    lip_const(s, f).unwrap().value
}

fn rays_and_fields() -> impl Strategy<Value = (RaySystem, PhField, PhField)> {
    (norm_kind(), 2usize..=8)
        .prop_flat_map(|(norm, k)| {
            (
                Just(norm),
                prop::collection::vec(0.0..std::f64::consts::TAU, k),
                prop::collection::vec(-3.0..3.0f64, k),
                prop::collection::vec(-3.0..3.0f64, k),
            )
        })
        .prop_filter_map("directions must be distinct", |(norm, angles, f, g)| {
            let vectors: Vec<Vec<f64>> = angles.iter().map(|a| vec![a.cos(), a.sin()]).collect();
            let rays = RaySystem::from_vectors(norm, 2, &vectors).ok()?;
            let dirs = rays.directions();
            for i in 0..dirs.len() {
                for j in (i + 1)..dirs.len() {
                    if norm.dist(&dirs[i], &dirs[j]) < 1e-3 {
                        return None;
                    }
                }
            }
            Some((rays, PhField::new(f).unwrap(), PhField::new(g).unwrap()))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lip_is_absolutely_homogeneous((s, fs) in space_and_fields(1), alpha in -4.0..4.0f64) {
        let l = lip(&s, &fs[0]);
        let scaled = lip(&s, &fs[0].scaled(alpha));
        prop_assert!((scaled - alpha.abs() * l).abs() <= 1e-12 * (1.0 + scaled));
    }

    #[test]
    fn lip_is_subadditive((s, fs) in space_and_fields(2)) {
        let sum = fs[0].axpy(1.0, &fs[1]).unwrap();
        prop_assert!(lip(&s, &sum) <= lip(&s, &fs[0]) + lip(&s, &fs[1]) + 1e-12);
    }

    #[test]
    fn restriction_never_raises_lip((s, fs) in space_and_fields(1), mask in prop::collection::vec(any::<bool>(), 7)) {
        let mut subset = vec![0];
        subset.extend((1..s.len()).filter(|&i| mask[i]));
        let sub = s.restrict(&subset).unwrap();
        let f = fs[0].restrict(&subset).unwrap();
        prop_assert!(lip(&sub, &f) <= lip(&s, &fs[0]));
    }

    #[test]
    fn mcshane_sandwich_holds_for_any_admissible_field(
        (s, fs) in space_and_fields(1),
        mask in prop::collection::vec(any::<bool>(), 7),
    ) {
        let f = &fs[0];
        let mut domain = vec![0];
        domain.extend((1..s.len()).filter(|&i| mask[i]));
        let pf = PartialField::from_field(f, domain.clone()).unwrap();
        let l = lip(&s, f);
        let lo = mcshane(&s, &pf, Side::Sup, Some(l)).unwrap();
        let hi = mcshane(&s, &pf, Side::Inf, Some(l)).unwrap();
        for x in 0..s.len() {
            let (a, v, b) = (lo.values()[x], f.values()[x], hi.values()[x]);
            prop_assert!(a <= v + 1e-12 && v <= b + 1e-12, "{x}: {a} {v} {b}");
        }
        for &x in &domain {
            prop_assert_eq!(lo.values()[x], f.values()[x]);
            prop_assert_eq!(hi.values()[x], f.values()[x]);
        }
        prop_assert!(lip(&s, &lo) <= l + 1e-12);
        prop_assert!(lip(&s, &hi) <= l + 1e-12);
    }

    #[test]
    fn kr_norm_is_a_norm((s, fs) in space_and_fields(2), alpha in -3.0..3.0f64) {
        let (a, b) = (element(&fs[0]), element(&fs[1]));
        let na = kr_norm(&s, &a, KrMethod::Flow).unwrap().value;
        let nb = kr_norm(&s, &b, KrMethod::Flow).unwrap().value;
        let nab = kr_norm(&s, &a.add(&b), KrMethod::Flow).unwrap().value;
        let scaled = kr_norm(&s, &a.scaled(alpha), KrMethod::Flow).unwrap().value;
        prop_assert!(nab <= na + nb + 1e-9 * (1.0 + na + nb));
        prop_assert!((scaled - alpha.abs() * na).abs() <= 1e-9 * (1.0 + na));
    }

    #[test]
    fn kr_lp_and_flow_agree((s, fs) in space_and_fields(1)) {
        let r = kr_norm(&s, &element(&fs[0]), KrMethod::Both).unwrap();
        let (lp, flow) = (r.lp_value.unwrap(), r.flow_value.unwrap());
        prop_assert!((lp - flow).abs() <= 1e-9 * (1.0 + flow));
        prop_assert!(r.lp_gap.unwrap() <= 1e-9);
    }

    #[test]
    fn pairing_is_bounded_by_lip_times_norm((s, fs) in space_and_fields(2)) {
        let mu = element(&fs[1]);
        let pair = eval_pairing(&s, &fs[0], &mu).unwrap();
        let n = kr_norm(&s, &mu, KrMethod::Flow).unwrap().value;
        prop_assert!(pair.abs() <= lip(&s, &fs[0]) * n * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn molecules_have_the_distance_as_norm((s, _) in space_and_fields(0), i in 0usize..7, j in 0usize..7) {
        let (i, j) = (i % s.len(), j % s.len());
        prop_assume!(i != j);
        let n = kr_norm(&s, &FreeElement::molecule(i, j), KrMethod::Both).unwrap().value;
        prop_assert!((n - s.d(i, j)).abs() <= 1e-12 * (1.0 + n));
    }

    #[test]
    fn cone_lip_dominates_values_and_scales((rays, f, _) in rays_and_fields(), alpha in -3.0..3.0f64) {
        let l = cone_lip(&rays, &f).unwrap();
        prop_assert!(f.values().iter().all(|v| v.abs() <= l));
        let scaled = PhField::new(f.values().iter().map(|v| alpha * v).collect()).unwrap();
        let ls = cone_lip(&rays, &scaled).unwrap();
        prop_assert!((ls - alpha.abs() * l).abs() <= 1e-9 * (1.0 + ls));
    }

    #[test]
    fn odot_is_submultiplicative((rays, f, g) in rays_and_fields()) {
        let p = odot(&rays, &f, &g).unwrap();
        let bound = cone_lip(&rays, &f).unwrap() * cone_lip(&rays, &g).unwrap();
        prop_assert!(cone_lip(&rays, &p).unwrap() <= bound + 1e-9 * bound.max(1.0));
    }

    #[test]
    fn ph_norm_is_homogeneous_and_below_the_mass(
        norm in norm_kind(),
        terms in prop::collection::vec((prop::collection::vec(-2.0..2.0f64, 2), -2.0..2.0f64), 1..5),
        alpha in 0.1..3.0f64,
    ) {
        let terms: Vec<PhTerm> = terms.into_iter().map(|(x, a)| PhTerm { x, a }).collect();
        let mu = PhFreeElement::new(norm, 2, terms).unwrap();
        let n = ph_norm(&mu, PH_NORM_TOL).unwrap();
        let mass: f64 = mu.reduced().weights.iter().map(|w| w.abs()).sum();
        prop_assert!(n.value <= mass * (1.0 + 1e-9) + 1e-12);
        prop_assert!(n.lower_bound <= n.value);
        let s = ph_norm(&mu.scaled(alpha), PH_NORM_TOL).unwrap();
        prop_assert!((s.value - alpha * n.value).abs() <= 1e-7 * (1.0 + s.value));
    }
}
