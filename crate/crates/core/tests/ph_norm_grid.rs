//! The cutting-plane ph norm against the LP whose cone constraints are
//! imposed only at `t = k/4096`. That LP is solved exactly by adding
//! violated grid rows found by enumeration, so it shares nothing with the
//! continuous search used by `ph_norm`.

use conelip::elements::{PhFreeElement, PhTerm};
use conelip::freespace::{ph_norm, PH_NORM_TOL};
use conelip::lp::{solve_lp, LpProblem, Relation, Sense};
use conelip::NormKind;

const GRID: usize = 4096;

fn grid_lp(directions: &[Vec<f64>], weights: &[f64], norm: NormKind) -> f64 {
    let k = directions.len();
    let rhs = |i: usize, j: usize, t: f64| {
        let x: Vec<f64> = directions[i]
            .iter()
            .zip(&directions[j])
            .map(|(a, b)| (1.0 - t) * a - t * b)
            .collect();
        norm.norm(&x)
    };
    let mut p = LpProblem::new(Sense::Max, weights.to_vec());
    for j in 0..k {
        p.set_bound(j, Some(-1.0), Some(1.0));
    }
    loop {
        let sol = solve_lp(&p).unwrap().into_optimal().unwrap();
        let v = &sol.primal;
        let mut added = false;
        for i in 0..k {
            for j in (i + 1)..k {
                let mut worst = (0.0, 0);
                for s in 1..GRID {
                    let t = s as f64 / GRID as f64;
                    let viol = ((1.0 - t) * v[i] - t * v[j]).abs() - rhs(i, j, t);
                    if viol > worst.0 {
                        worst = (viol, s);
                    }
                }
                if worst.0 > 1e-12 {
                    let t = worst.1 as f64 / GRID as f64;
                    let r = rhs(i, j, t);
                    p.add_sparse(&[(i, 1.0 - t), (j, -t)], Relation::Le, r);
                    p.add_sparse(&[(i, t - 1.0), (j, t)], Relation::Le, r);
                    added = true;
                }
            }
        }
        if !added {
            return sol.objective;
        }
    }
}

fn unit(angle: f64, norm: NormKind) -> Vec<f64> {
    let x = vec![angle.cos(), angle.sin()];
    let n = norm.norm(&x);
    x.into_iter().map(|v| v / n).collect()
}

fn element(norm: NormKind, dirs: &[Vec<f64>], weights: &[f64]) -> PhFreeElement {
    let terms = dirs
        .iter()
        .zip(weights)
        .map(|(x, &a)| PhTerm { x: x.clone(), a })
        .collect();
    PhFreeElement::new(norm, 2, terms).unwrap()
}

fn compare(mu: &PhFreeElement) -> (f64, f64, f64) {
    let red = mu.reduced();
    let oracle = grid_lp(&red.directions, &red.weights, mu.norm);
    let got = ph_norm(mu, PH_NORM_TOL).unwrap();
    (got.value, got.lower_bound, oracle)
}

const WEIGHTS: [&[f64]; 4] = [
    &[1.0, -1.0],
    &[2.0, -1.0, 0.5],
    &[1.0, 1.0, -1.5, 0.25],
    &[-0.5, 3.0, -2.0],
];

#[test]
fn smooth_norm_matches_the_grid_lp() {
    let angles: [&[f64]; 4] = [
        &[0.0, 2.0],
        &[0.3, 1.9, 4.0],
        &[0.0, 0.7, 2.2, 3.5],
        &[1.0, 1.2, 5.5],
    ];
    for (a, w) in angles.iter().zip(WEIGHTS) {
        let dirs: Vec<Vec<f64>> = a.iter().map(|&t| unit(t, NormKind::L2)).collect();
        let (value, _, oracle) = compare(&element(NormKind::L2, &dirs, w));
        assert!((value - oracle).abs() <= 1e-5, "{a:?}: {value} vs grid {oracle}");
    }
}

#[test]
fn polyhedral_norms_match_the_grid_lp_when_kinks_lie_on_the_grid() {
    let axes = [
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![-1.0, 0.0],
        vec![0.0, -1.0],
    ];
    let picks: [&[usize]; 4] = [&[0, 1], &[0, 1, 2], &[0, 1, 2, 3], &[3, 0, 2]];
    for norm in [NormKind::L1, NormKind::Linf] {
        for (idx, w) in picks.iter().zip(WEIGHTS) {
            let dirs: Vec<Vec<f64>> = idx.iter().map(|&i| axes[i].clone()).collect();
            let (value, _, oracle) = compare(&element(norm, &dirs, w));
            assert!((value - oracle).abs() <= 1e-5, "{norm} {idx:?}: {value} vs grid {oracle}");
        }
    }
}

#[test]
fn certified_lower_bound_never_exceeds_the_grid_lp() {
    let angles: [&[f64]; 2] = [&[0.3, 1.9, 4.0], &[1.0, 1.2, 5.5]];
    for norm in NormKind::ALL {
        for (a, w) in angles.iter().zip([WEIGHTS[1], WEIGHTS[3]]) {
            let dirs: Vec<Vec<f64>> = a.iter().map(|&t| unit(t, norm)).collect();
            let (value, lower, oracle) = compare(&element(norm, &dirs, w));
            assert!(lower <= oracle + 1e-12, "{norm} {a:?}: {lower} above grid {oracle}");
            assert!(lower <= value);
        }
    }
}
