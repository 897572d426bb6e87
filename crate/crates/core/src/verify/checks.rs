//! Atomic property checks. Each draws one random instance, evaluates one
//! relation and reports a residual that passes when `residual ≤ tolerance`.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::cone::{
    ball_projection, cone_lip, lambda_inverse, lambda_restrict, odot, ph_mcshane_extend,
    ph_pairing, ph_pushforward, PhField, PhMap, RaySystem,
};
use crate::elements::{barycenter, FreeElement, PhFreeElement, PhTerm};
use crate::error::Result;
use crate::freespace::{
    kr_norm, ph_norm, ph_quotient_check, phi, q_functional, quotient_dist_dual,
    quotient_dist_primal, theta, KrMethod, Scaling, PH_NORM_TOL,
};
use crate::lp::{solve_lp, LpProblem, Relation, Sense};
use crate::mcshane::{mcshane, mcshane_exact, partial_lip, PartialField, Side};
use crate::metric::{lip_const, lip_const_exact, PointedSpace, ScalarField};
use crate::norm::NormKind;
use crate::numeric::{exact, Arithmetic};

use super::gen::{self, CaseRng};

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub operation: &'static str,
    /// The relation under test, in words.
    pub property: &'static str,
    pub instance: Value,
    pub measured: BTreeMap<String, f64>,
    pub residual: f64,
    pub tolerance: f64,
    pub error: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.residual <= self.tolerance
    }
}

struct Measured {
    residual: f64,
    values: Vec<(&'static str, f64)>,
}

fn measured(residual: f64, values: &[(&'static str, f64)]) -> Result<Measured> {
    Ok(Measured {
        residual,
        values: values.to_vec(),
    })
}

fn run(
    operation: &'static str,
    property: &'static str,
    tolerance: f64,
    instance: Value,
    body: impl FnOnce() -> Result<Measured>,
) -> Outcome {
    let mut out = Outcome {
        operation,
        property,
        instance,
        measured: BTreeMap::new(),
        residual: f64::INFINITY,
        tolerance,
        error: None,
    };
    match body() {
        Ok(m) => {
            out.residual = if m.residual.is_nan() {
                f64::INFINITY
            } else {
                m.residual
            };
            out.measured = m.values.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        }
        Err(e) => out.error = Some(e.to_string()),
    }
    out
}

fn rel(x: f64, scale: f64) -> f64 {
    x / scale.abs().max(1.0)
}

fn space_json(s: &PointedSpace) -> Value {
    serde_json::to_value(s.to_spec()).expect("serializable")
}

fn rays_json(rays: &RaySystem, f: &PhField) -> Value {
    serde_json::to_value(rays.to_file(f)).expect("serializable")
}

fn field_json(f: &ScalarField) -> Value {
    serde_json::to_value(f).expect("serializable")
}

fn elem_json(mu: &FreeElement) -> Value {
    serde_json::to_value(mu.to_file()).expect("serializable")
}

// ---------------------------------------------------------------- lipschitz

pub fn lip_homogeneity(rng: &mut CaseRng) -> Outcome {
    let n = rng.gen_range(2..=8);
    let s = gen::space(rng, n);
    let f = gen::field(rng, n);
    let alpha = rng.gen_range(-4.0..=4.0);
    let inst = json!({"space": space_json(&s), "field": field_json(&f), "alpha": alpha});
    run("lip_const", "Lip(αf) = |α|·Lip(f)", 1e-12, inst, || {
        let l = lip_const(&s, &f)?.value;
        let la = lip_const(&s, &f.scaled(alpha))?.value;
        let expected = alpha.abs() * l;
        measured(rel((la - expected).abs(), expected), &[("lip", l), ("lip_scaled", la)])
    })
}

pub fn lip_subadditivity(rng: &mut CaseRng) -> Outcome {
    let n = rng.gen_range(2..=8);
    let s = gen::space(rng, n);
    let f = gen::field(rng, n);
    let g = gen::field(rng, n);
    let inst = json!({"space": space_json(&s), "f": field_json(&f), "g": field_json(&g)});
    run("lip_const", "Lip(f+g) ≤ Lip(f) + Lip(g)", 1e-12, inst, || {
        let lf = lip_const(&s, &f)?.value;
        let lg = lip_const(&s, &g)?.value;
        let lfg = lip_const(&s, &f.axpy(1.0, &g)?)?.value;
        measured(
            rel(lfg - lf - lg, lf + lg),
            &[("lip_f", lf), ("lip_g", lg), ("lip_sum", lfg)],
        )
    })
}

pub fn lip_restriction(rng: &mut CaseRng) -> Outcome {
    let n = rng.gen_range(3..=8);
    let s = gen::space(rng, n);
    let f = gen::field(rng, n);
    let sub = gen::domain(rng, n);
    let inst = json!({"space": space_json(&s), "field": field_json(&f), "subset": sub});
    run("restrict", "Lip(f|A) ≤ Lip(f)", 0.0, inst, || {
        let full = lip_const(&s, &f)?.value;
        let part = lip_const(&s.restrict(&sub)?, &f.restrict(&sub)?)?.value;
        measured(part - full, &[("lip", full), ("lip_restricted", part)])
    })
}

pub fn lip_cache_identity(rng: &mut CaseRng) -> Outcome {
    let n = rng.gen_range(2..=8);
    let dim = rng.gen_range(1..=3);
    let norm = gen::norm(rng);
    let s = gen::point_space(rng, n, dim, norm);
    let inst = json!({"space": space_json(&s)});
    run("build_space", "cached distances equal recomputed norms bit for bit", 0.0, inst, || {
        let pts = s.points().expect("embedded");
        let mismatches = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| s.d(i, j).to_bits() != norm.dist(&pts[i], &pts[j]).to_bits())
            .count();
        measured(mismatches as f64, &[("mismatches", mismatches as f64)])
    })
}

// ------------------------------------------------------------------ mcshane

struct McInstance {
    space: PointedSpace,
    pf: PartialField,
}

fn mc_instance(rng: &mut CaseRng) -> McInstance {
    let n = rng.gen_range(3..=10);
    let space = gen::space(rng, n);
    let domain = gen::domain(rng, n);
    let f = gen::field(rng, n);
    let pf = PartialField::from_field(&f, domain).expect("valid domain");
    McInstance { space, pf }
}

fn mc_json(m: &McInstance) -> Value {
    json!({"space": space_json(&m.space), "partial": m.pf})
}

fn extension_scale(pf: &PartialField, l: f64, space: &PointedSpace) -> f64 {
    let vmax = pf.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let dmax = space
        .distance_matrix()
        .iter()
        .flatten()
        .fold(0.0f64, |m, v| m.max(*v));
    vmax + l * dmax
}

pub fn mcshane_preserves_lip(rng: &mut CaseRng) -> Outcome {
    let m = mc_instance(rng);
    run("mcshane", "both extensions agree on E and keep Lip = L", 1e-12, mc_json(&m), || {
        let l = partial_lip(&m.space, &m.pf)?;
        let mut worst: f64 = 0.0;
        let mut lips = [0.0; 2];
        for (k, side) in [Side::Sup, Side::Inf].into_iter().enumerate() {
            let e = mcshane(&m.space, &m.pf, side, None)?;
            for (&i, &v) in m.pf.domain.iter().zip(&m.pf.values) {
                if e.values()[i] != v {
                    worst = f64::INFINITY;
                }
            }
            lips[k] = lip_const(&m.space, &e)?.value;
            worst = worst.max(rel((lips[k] - l).abs(), l));
        }
        measured(worst, &[("lip_data", l), ("lip_sup", lips[0]), ("lip_inf", lips[1])])
    })
}

pub fn mcshane_order(rng: &mut CaseRng) -> Outcome {
    let m = mc_instance(rng);
    run("mcshane", "F ≤ G pointwise", 1e-12, mc_json(&m), || {
        let l = partial_lip(&m.space, &m.pf)?;
        let f = mcshane(&m.space, &m.pf, Side::Sup, None)?;
        let g = mcshane(&m.space, &m.pf, Side::Inf, None)?;
        let excess = f
            .values()
            .iter()
            .zip(g.values())
            .fold(f64::NEG_INFINITY, |w, (a, b)| w.max(a - b));
        measured(
            rel(excess, extension_scale(&m.pf, l, &m.space)),
            &[("max_sup_minus_inf", excess)],
        )
    })
}

/// A vertex of the polytope of Lip-`l` extensions of `pf`, chosen by a
/// random objective.
fn sampled_extension(
    space: &PointedSpace,
    pf: &PartialField,
    l: f64,
    objective: &[f64],
) -> Result<Vec<f64>> {
    let n = space.len();
    let mut var = vec![None; n];
    let mut known = vec![None; n];
    for (&i, &v) in pf.domain.iter().zip(&pf.values) {
        known[i] = Some(v);
    }
    let mut k = 0;
    for i in 0..n {
        if known[i].is_none() {
            var[i] = Some(k);
            k += 1;
        }
    }
    let mut p = LpProblem::new(Sense::Max, objective[..k].to_vec());
    for j in 0..k {
        p.set_free(j);
    }
    for x in 0..n {
        for y in 0..n {
            if x == y || (var[x].is_none() && var[y].is_none()) {
                continue;
            }
            // h(x) − h(y) ≤ L·d
            let mut terms = Vec::new();
            let mut rhs = l * space.d(x, y);
            match var[x] {
                Some(j) => terms.push((j, 1.0)),
                None => rhs -= known[x].unwrap(),
            }
            match var[y] {
                Some(j) => terms.push((j, -1.0)),
                None => rhs += known[y].unwrap(),
            }
            p.add_sparse(&terms, Relation::Le, rhs);
        }
    }
    let sol = solve_lp(&p)?.into_optimal()?;
    Ok((0..n)
        .map(|i| match var[i] {
            Some(j) => sol.primal[j],
            None => known[i].unwrap(),
        })
        .collect())
}

pub fn mcshane_lp_sandwich(rng: &mut CaseRng) -> Outcome {
    let m = mc_instance(rng);
    let objective: Vec<f64> = (0..m.space.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let inst = json!({"space": space_json(&m.space), "partial": m.pf, "objective": objective});
    run("mcshane", "every Lip-L extension lies in [F, G]", 1e-9, inst, || {
        let l = partial_lip(&m.space, &m.pf)?;
        let f = mcshane(&m.space, &m.pf, Side::Sup, None)?;
        let g = mcshane(&m.space, &m.pf, Side::Inf, None)?;
        let h = sampled_extension(&m.space, &m.pf, l, &objective)?;
        let mut out = f64::NEG_INFINITY;
        for i in 0..h.len() {
            out = out.max(f.values()[i] - h[i]).max(h[i] - g.values()[i]);
        }
        measured(
            rel(out, extension_scale(&m.pf, l, &m.space)),
            &[("lip_data", l), ("max_outside", out)],
        )
    })
}

pub fn mcshane_exact_lip(rng: &mut CaseRng) -> Outcome {
    let n = rng.gen_range(3..=8);
    let dim = rng.gen_range(1..=2);
    let norm = [NormKind::L1, NormKind::Linf][rng.gen_range(0..2)];
    let space = gen::lattice_space(rng, n, dim, norm, 1.0);
    let domain = gen::domain(rng, n);
    let values: Vec<f64> = domain
        .iter()
        .map(|&i| if i == 0 { 0.0 } else { rng.gen_range(-6..=6) as f64 })
        .collect();
    let pf = PartialField::new(domain.clone(), values).expect("valid");
    let inst = json!({"space": space_json(&space), "partial": pf});
    run("mcshane_exact", "rational extensions keep Lip = L exactly, F ≤ G", 0.0, inst, || {
        let sub = space.restrict(&domain)?;
        let data: Vec<_> = pf.values.iter().map(|&v| exact(v)).collect();
        let l = lip_const_exact(&sub, &data);
        let f = mcshane_exact(&space, &pf, Side::Sup)?;
        let g = mcshane_exact(&space, &pf, Side::Inf)?;
        let mut bad = 0usize;
        for e in [&f, &g] {
            if lip_const_exact(&space, e) != l {
                bad += 1;
            }
            for (&i, v) in domain.iter().zip(&data) {
                if &e[i] != v {
                    bad += 1;
                }
            }
        }
        bad += f.iter().zip(&g).filter(|(a, b)| a > b).count();
        let float = mcshane(&space, &pf, Side::Sup, None)?;
        let drift = float
            .values()
            .iter()
            .zip(&f)
            .fold(0.0f64, |m, (a, b)| m.max((a - num_traits::ToPrimitive::to_f64(b).unwrap()).abs()));
        measured(
            bad as f64,
            &[
                ("violations", bad as f64),
                ("lip_data", num_traits::ToPrimitive::to_f64(&l).unwrap()),
                ("float_drift", drift),
            ],
        )
    })
}

pub fn mcshane_monotone(rng: &mut CaseRng) -> Outcome {
    let m = mc_instance(rng);
    let n = m.space.len();
    let outside: Vec<usize> = (0..n).filter(|i| !m.pf.domain.contains(i)).collect();
    let extra = *outside.choose(rng).expect("domain leaves a point out");
    let inst = json!({"space": space_json(&m.space), "partial": m.pf, "added": extra});
    run("mcshane", "enlarging E raises F and lowers G", 1e-12, inst, || {
        let l = partial_lip(&m.space, &m.pf)?;
        let f = mcshane(&m.space, &m.pf, Side::Sup, None)?;
        let g = mcshane(&m.space, &m.pf, Side::Inf, None)?;
        let mut big = m.pf.clone();
        big.domain.push(extra);
        big.values.push(0.5 * (f.values()[extra] + g.values()[extra]));
        let f2 = mcshane(&m.space, &big, Side::Sup, None)?;
        let g2 = mcshane(&m.space, &big, Side::Inf, None)?;
        let mut worst = f64::NEG_INFINITY;
        for i in 0..n {
            worst = worst
                .max(f.values()[i] - f2.values()[i])
                .max(g2.values()[i] - g.values()[i]);
        }
        measured(
            rel(worst, extension_scale(&m.pf, l, &m.space)),
            &[("lip_data", l), ("lip_enlarged", partial_lip(&m.space, &big)?)],
        )
    })
}

// --------------------------------------------------------------------- cone

pub fn cone_real_line(rng: &mut CaseRng) -> Outcome {
    let a = rng.gen_range(-10.0..=10.0);
    let b = rng.gen_range(-10.0..=10.0);
    let rays = RaySystem::real_line();
    let f = PhField::new(vec![a, b]).expect("finite");
    run("cone_lip", "on ℝ, Lip = max(|f(1)|, |f(−1)|)", 1e-9, rays_json(&rays, &f), || {
        let c = cone_lip(&rays, &f)?;
        let expected = a.abs().max(b.abs());
        measured((c - expected).abs(), &[("cone_lip", c), ("closed_form", expected)])
    })
}

fn cone_instance(rng: &mut CaseRng, kmax: usize) -> (RaySystem, PhField) {
    let k = rng.gen_range(2..=kmax);
    let dim = rng.gen_range(2..=3);
    let norm = gen::norm(rng);
    let rays = gen::rays(rng, k, dim, norm);
    let f = gen::ph_field(rng, k);
    (rays, f)
}

pub fn cone_lambda_sandwich(rng: &mut CaseRng) -> Outcome {
    let (rays, f) = cone_instance(rng, 12);
    run(
        "lambda_restrict",
        "Lip(Λf) ≤ cone Lip(f) ≤ 3·Lip(Λf)",
        1e-9,
        rays_json(&rays, &f),
        || {
            let c = cone_lip(&rays, &f)?;
            let (s, g) = lambda_restrict(&rays, &f)?;
            let l = lip_const(&s, &g)?.value;
            let ratio = if l > 0.0 { c / l } else { 0.0 };
            measured(
                rel((l - c).max(c - 3.0 * l), c),
                &[("cone_lip", c), ("sphere_lip", l), ("ratio", ratio)],
            )
        },
    )
}

pub fn cone_lambda_roundtrip(rng: &mut CaseRng) -> Outcome {
    let (rays, f) = cone_instance(rng, 12);
    run("lambda_inverse", "Λ ∘ Λ⁻¹ is the identity", 0.0, rays_json(&rays, &f), || {
        let (s, g) = lambda_restrict(&rays, &f)?;
        let (rays2, f2) = lambda_inverse(&s, &g)?;
        let (_, g2) = lambda_restrict(&rays2, &f2)?;
        let same = rays2 == rays && g2 == g && f2 == f;
        measured(if same { 0.0 } else { 1.0 }, &[])
    })
}

fn extension_instance(rng: &mut CaseRng) -> (RaySystem, PhField, Vec<usize>, Side) {
    let k = rng.gen_range(3..=8);
    let dim = rng.gen_range(2..=3);
    let norm = gen::norm(rng);
    let rays = gen::rays(rng, k, dim, norm);
    let f = gen::ph_field(rng, k);
    let m = rng.gen_range(1..=4.min(k - 1));
    let sub = gen::subset(rng, k, m);
    let side = if rng.gen_bool(0.5) { Side::Sup } else { Side::Inf };
    (rays, f, sub, side)
}

pub fn cone_ph_extension(rng: &mut CaseRng) -> Outcome {
    let (rays, f, sub, side) = extension_instance(rng);
    let data: Vec<f64> = sub.iter().map(|&i| f.values()[i]).collect();
    let inst = json!({"rays": rays_json(&rays, &f), "sub": sub, "side": side});
    run(
        "ph_mcshane_extend",
        "ph extension agrees on the sub-cone and keeps the cone Lip constant",
        1e-9,
        inst,
        || {
            let l = cone_lip(&rays.subsystem(&sub)?, &PhField::new(data.clone())?)?;
            let out = ph_mcshane_extend(&rays, &sub, &data, side)?;
            let exact_on_sub = sub.iter().zip(&data).all(|(&i, &v)| out.values()[i] == v);
            let lo = cone_lip(&rays, &out)?;
            let r = if exact_on_sub {
                rel((lo - l).abs(), l)
            } else {
                f64::INFINITY
            };
            measured(r, &[("lip_sub", l), ("lip_extended", lo)])
        },
    )
}

pub fn cone_two_step_extension(rng: &mut CaseRng) -> Outcome {
    let (rays, f, sub, side) = extension_instance(rng);
    let k = rays.len();
    let data: Vec<f64> = sub.iter().map(|&i| f.values()[i]).collect();
    let rest: Vec<usize> = (0..k).filter(|i| !sub.contains(i)).collect();
    let take = rng.gen_range(0..=rest.len());
    let mut mid: Vec<usize> = sub.iter().copied().chain(rest[..take].iter().copied()).collect();
    mid.sort_unstable();
    let inst = json!({"rays": rays_json(&rays, &f), "sub": sub, "middle": mid, "side": side});
    run(
        "ph_mcshane_extend",
        "extending in two steps keeps the cone Lip constant",
        1e-9,
        inst,
        || {
            let l = cone_lip(&rays.subsystem(&sub)?, &PhField::new(data.clone())?)?;
            let mid_rays = rays.subsystem(&mid)?;
            let local: Vec<usize> = sub
                .iter()
                .map(|i| mid.iter().position(|m| m == i).unwrap())
                .collect();
            let step1 = ph_mcshane_extend(&mid_rays, &local, &data, side)?;
            let step2 = ph_mcshane_extend(&rays, &mid, step1.values(), side)?;
            let l2 = cone_lip(&rays, &step2)?;
            measured(rel((l2 - l).abs(), l), &[("lip_sub", l), ("lip_two_step", l2)])
        },
    )
}

pub const PAIRS_PER_CASE: usize = 100;

fn random_pairs(rng: &mut CaseRng, dim: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    (0..PAIRS_PER_CASE)
        .map(|_| {
            let x = gen::vector(rng, dim, 3.0);
            let y = if rng.gen_bool(0.3) {
                let eps = 10f64.powf(rng.gen_range(-6.0..0.0));
                x.iter().zip(gen::vector(rng, dim, eps)).map(|(a, b)| a + b).collect()
            } else {
                gen::vector(rng, dim, 3.0)
            };
            (x, y)
        })
        .collect()
}

pub fn cone_radial_bound(rng: &mut CaseRng) -> Outcome {
    let dim = rng.gen_range(1..=3);
    let norm = gen::norm(rng);
    let pairs = random_pairs(rng, dim);
    let inst = json!({"norm": norm, "pairs": pairs});
    run("radial_bound", "‖x‖·‖x/‖x‖ − y/‖y‖‖ ≤ 2‖x − y‖", 1e-12, inst, || {
        let mut worst = f64::NEG_INFINITY;
        let mut ratio: f64 = 0.0;
        for (x, y) in &pairs {
            let (nx, ny) = (norm.norm(x), norm.norm(y));
            let d = norm.dist(x, y);
            if nx == 0.0 || ny == 0.0 || d == 0.0 {
                continue;
            }
            let ux: Vec<f64> = x.iter().map(|v| v / nx).collect();
            let uy: Vec<f64> = y.iter().map(|v| v / ny).collect();
            let lhs = nx * norm.dist(&ux, &uy);
            ratio = ratio.max(lhs / d);
            worst = worst.max((lhs - 2.0 * d) / d);
        }
        measured(worst, &[("max_ratio", ratio)])
    })
}

pub fn cone_ball_projection(rng: &mut CaseRng) -> Outcome {
    let dim = rng.gen_range(1..=3);
    let norm = gen::norm(rng);
    let pairs = random_pairs(rng, dim);
    let inst = json!({"norm": norm, "pairs": pairs});
    run("ball_projection", "the ball projection is 2-Lipschitz", 1e-9, inst, || {
        let mut ratio: f64 = 0.0;
        for (x, y) in &pairs {
            let d = norm.dist(x, y);
            if d == 0.0 {
                continue;
            }
            let g = norm.dist(&ball_projection(x, norm), &ball_projection(y, norm));
            ratio = ratio.max(g / d);
        }
        measured(ratio - 2.0, &[("max_ratio", ratio)])
    })
}

pub fn cone_sample_domination(rng: &mut CaseRng) -> Outcome {
    let (rays, f) = cone_instance(rng, 6);
    let mut points = vec![vec![0.0; rays.dim()]];
    let mut values = vec![0.0];
    for (u, &v) in rays.directions().iter().zip(f.values()) {
        for _ in 0..rng.gen_range(1..=2) {
            let r = rng.gen_range(0.2..=3.0);
            points.push(u.iter().map(|c| r * c).collect());
            values.push(r * v);
        }
    }
    let inst = json!({"rays": rays_json(&rays, &f), "points": points});
    run(
        "cone_lip",
        "cone Lip bounds the Lipschitz constant of any finite sample",
        1e-9,
        inst,
        || {
            let c = cone_lip(&rays, &f)?;
            let s = PointedSpace::embedded(rays.norm(), rays.dim(), points.clone())?;
            let l = lip_const(&s, &ScalarField::new(values.clone())?)?.value;
            measured(rel(l - c, c), &[("cone_lip", c), ("sample_lip", l)])
        },
    )
}

// ------------------------------------------------------------------ algebra

pub fn algebra_odot(rng: &mut CaseRng) -> Outcome {
    let k = rng.gen_range(2..=10);
    let norm = gen::norm(rng);
    let rays = gen::rays(rng, k, 2, norm);
    let f = gen::ph_field(rng, k);
    let g = gen::ph_field(rng, k);
    let inst = json!({"f": rays_json(&rays, &f), "g": g});
    run("odot", "Lip(f ⊙ g) ≤ Lip(f)·Lip(g)", 1e-9, inst, || {
        let lf = cone_lip(&rays, &f)?;
        let lg = cone_lip(&rays, &g)?;
        let lp = cone_lip(&rays, &odot(&rays, &f, &g)?)?;
        let bound = lf * lg;
        let r = if bound > 0.0 { (lp - bound) / bound } else { lp };
        measured(r, &[("lip_f", lf), ("lip_g", lg), ("lip_product", lp)])
    })
}

fn isometry(rng: &mut CaseRng, norm: NormKind) -> Vec<Vec<f64>> {
    match norm {
        NormKind::L2 => {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            vec![vec![a.cos(), -a.sin()], vec![a.sin(), a.cos()]]
        }
        _ => {
            let s = [
                if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
                if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
            ];
            if rng.gen_bool(0.5) {
                vec![vec![s[0], 0.0], vec![0.0, s[1]]]
            } else {
                vec![vec![0.0, s[0]], vec![s[1], 0.0]]
            }
        }
    }
}

fn ph_element(rng: &mut CaseRng, norm: NormKind, terms: usize) -> PhFreeElement {
    let terms = (0..terms)
        .map(|_| PhTerm {
            x: gen::vector(rng, 2, 2.0),
            a: rng.gen_range(-2.0..=2.0),
        })
        .collect();
    PhFreeElement::new(norm, 2, terms).expect("finite")
}

pub fn algebra_pushforward_isometry(rng: &mut CaseRng) -> Outcome {
    let norm = gen::norm(rng);
    let matrix = isometry(rng, norm);
    let k = rng.gen_range(1..=4);
    let mu = ph_element(rng, norm, k);
    let inst = json!({"matrix": matrix, "element": mu});
    run("ph_pushforward", "linear isometries preserve the ph-free norm", 1e-6, inst, || {
        let map = PhMap::Linear {
            matrix: matrix.clone(),
            codomain: norm,
        };
        let a = ph_norm(&mu, PH_NORM_TOL)?.value;
        let b = ph_norm(&ph_pushforward(&map, &mu)?, PH_NORM_TOL)?.value;
        measured((a - b).abs(), &[("norm", a), ("norm_pushed", b)])
    })
}

pub fn algebra_pairing_bilinear(rng: &mut CaseRng) -> Outcome {
    let (rays, f) = cone_instance(rng, 8);
    let g = gen::ph_field(rng, rays.len());
    let alpha = rng.gen_range(-3.0..=3.0);
    let terms = (0..rng.gen_range(1..=5))
        .map(|_| {
            let i = rng.gen_range(0..rays.len());
            let r = rng.gen_range(0.1..=3.0);
            PhTerm {
                x: rays.directions()[i].iter().map(|c| r * c).collect(),
                a: rng.gen_range(-2.0..=2.0),
            }
        })
        .collect();
    let mu = PhFreeElement::new(rays.norm(), rays.dim(), terms).expect("finite");
    let inst = json!({"f": rays_json(&rays, &f), "g": g, "alpha": alpha, "element": mu});
    run("ph_pairing", "⟨αf + g, μ⟩ = α⟨f, μ⟩ + ⟨g, μ⟩", 1e-12, inst, || {
        let combo = PhField::new(
            f.values()
                .iter()
                .zip(g.values())
                .map(|(a, b)| alpha * a + b)
                .collect(),
        )?;
        let lhs = ph_pairing(&rays, &combo, &mu)?;
        let pf = ph_pairing(&rays, &f, &mu)?;
        let pg = ph_pairing(&rays, &g, &mu)?;
        let rhs = alpha * pf + pg;
        let scale = alpha.abs() * pf.abs() + pg.abs();
        measured(rel((lhs - rhs).abs(), scale), &[("lhs", lhs), ("rhs", rhs)])
    })
}

// ---------------------------------------------------------------- freespace

fn kr_instance(rng: &mut CaseRng) -> (PointedSpace, FreeElement) {
    let n = rng.gen_range(2..=8);
    let s = gen::space(rng, n);
    let mu = gen::free_element(rng, n);
    (s, mu)
}

pub fn freespace_routes(rng: &mut CaseRng) -> Outcome {
    let (s, mu) = kr_instance(rng);
    let inst = json!({"space": space_json(&s), "element": elem_json(&mu)});
    run(
        "kr_norm",
        "LP and transport agree and the LP duality gap is closed",
        1e-9,
        inst,
        || {
            let lp = kr_norm(&s, &mu, KrMethod::Lp)?;
            let flow = kr_norm(&s, &mu, KrMethod::Flow)?.value;
            let gap = lp.lp_gap.unwrap_or(0.0);
            measured(
                rel((lp.value - flow).abs(), lp.value).max(gap),
                &[("lp", lp.value), ("flow", flow), ("lp_gap", gap)],
            )
        },
    )
}

pub fn freespace_homogeneity(rng: &mut CaseRng) -> Outcome {
    let (s, mu) = kr_instance(rng);
    let alpha = rng.gen_range(-4.0..=4.0);
    let inst = json!({"space": space_json(&s), "element": elem_json(&mu), "alpha": alpha});
    run("kr_norm", "‖αμ‖ = |α|·‖μ‖", 1e-9, inst, || {
        let a = kr_norm(&s, &mu, KrMethod::Flow)?.value;
        let b = kr_norm(&s, &mu.scaled(alpha), KrMethod::Flow)?.value;
        measured(rel((b - alpha.abs() * a).abs(), b), &[("norm", a), ("norm_scaled", b)])
    })
}

pub fn freespace_triangle(rng: &mut CaseRng) -> Outcome {
    let (s, mu) = kr_instance(rng);
    let nu = gen::free_element(rng, s.len());
    let inst = json!({"space": space_json(&s), "mu": elem_json(&mu), "nu": elem_json(&nu)});
    run("kr_norm", "‖μ + ν‖ ≤ ‖μ‖ + ‖ν‖", 1e-9, inst, || {
        let a = kr_norm(&s, &mu, KrMethod::Lp)?.value;
        let b = kr_norm(&s, &nu, KrMethod::Lp)?.value;
        let c = kr_norm(&s, &mu.add(&nu), KrMethod::Lp)?.value;
        measured(rel(c - a - b, a + b), &[("mu", a), ("nu", b), ("sum", c)])
    })
}

pub fn freespace_molecule(rng: &mut CaseRng) -> Outcome {
    let n = rng.gen_range(2..=8);
    let s = gen::space(rng, n);
    let pair = gen::subset(rng, n, 2);
    let inst = json!({"space": space_json(&s), "x": pair[0], "y": pair[1]});
    run("kr_norm", "‖δx − δy‖ = d(x, y)", 1e-12, inst, || {
        let d = s.d(pair[0], pair[1]);
        let v = kr_norm(&s, &FreeElement::molecule(pair[0], pair[1]), KrMethod::Both)?.value;
        measured(rel((v - d).abs(), d), &[("norm", v), ("distance", d)])
    })
}

// -------------------------------------------------------------- ph isometry

pub fn ph_isometry(rng: &mut CaseRng, norm: NormKind) -> Outcome {
    let x = gen::vector(rng, 2, 3.0);
    let y = gen::vector(rng, 2, 3.0);
    let inst = json!({"norm": norm, "x": x, "y": y});
    run("ph_norm", "‖δᵖʰx − δᵖʰy‖ = ‖x − y‖", 1e-6, inst, || {
        let mu = PhFreeElement::molecule(norm, x.clone(), y.clone())?;
        let r = ph_norm(&mu, PH_NORM_TOL)?;
        let d = norm.dist(&x, &y);
        measured(
            (r.value - d).abs(),
            &[
                ("ph_norm", r.value),
                ("distance", d),
                ("violation", r.violation),
                ("rounds", r.rounds as f64),
            ],
        )
    })
}

// ----------------------------------------------------------------- duality

fn generators(rng: &mut CaseRng, n: usize, kmax: usize) -> Vec<ScalarField> {
    let k = rng.gen_range(0..=kmax.min(n - 1));
    (0..k).map(|_| gen::field(rng, n)).collect()
}

pub fn duality_quotient(rng: &mut CaseRng) -> Outcome {
    let n = rng.gen_range(3..=8);
    let s = gen::space(rng, n);
    let g = gen::field(rng, n);
    let gens = generators(rng, n, 3);
    let inst = json!({"space": space_json(&s), "g": field_json(&g), "generators": gens});
    run("quotient", "quotient distance equals its dual", 1e-7, inst, || {
        let p = quotient_dist_primal(&s, &g, &gens, Arithmetic::Float)?;
        let d = quotient_dist_dual(&s, &g, &gens, Arithmetic::Float)?;
        measured(
            (p.dist - d.value).abs(),
            &[
                ("primal", p.dist),
                ("dual", d.value),
                ("primal_lp_gap", p.lp.gap),
                ("dual_lp_gap", d.lp.gap),
            ],
        )
    })
}

pub fn duality_quotient_exact(rng: &mut CaseRng) -> Outcome {
    let n = rng.gen_range(3..=5);
    let dim = rng.gen_range(1..=2);
    let norm = [NormKind::L1, NormKind::Linf][rng.gen_range(0..2)];
    let s = gen::lattice_space(rng, n, dim, norm, 0.25);
    let quarter = |rng: &mut CaseRng| {
        let mut v = vec![0.0];
        v.extend((1..n).map(|_| rng.gen_range(-16..=16) as f64 / 4.0));
        ScalarField::new(v).expect("finite")
    };
    let g = quarter(rng);
    let k = rng.gen_range(0..=2.min(n - 1));
    let gens: Vec<ScalarField> = loop {
        let gens: Vec<ScalarField> = (0..k).map(|_| quarter(rng)).collect();
        let rows: Vec<Vec<f64>> = gens.iter().map(|f| f.values().to_vec()).collect();
        if crate::numeric::rank(&rows, 1e-12) == k {
            break gens;
        }
    };
    let inst = json!({"space": space_json(&s), "g": field_json(&g), "generators": gens});
    run("quotient", "quotient distance equals its dual exactly", 0.0, inst, || {
        let p = quotient_dist_primal(&s, &g, &gens, Arithmetic::Rational)?;
        let d = quotient_dist_dual(&s, &g, &gens, Arithmetic::Rational)?;
        let equal = p.exact.is_some() && p.exact == d.exact;
        measured(
            if equal { 0.0 } else { 1.0 },
            &[("primal", p.dist), ("dual", d.value)],
        )
    })
}

pub fn duality_barycenter(rng: &mut CaseRng) -> Outcome {
    let n = rng.gen_range(3..=7);
    let s = gen::point_space(rng, n, 1, NormKind::L2);
    let pts = s.points().expect("embedded");
    let x0 = pts[0][0];
    let id = ScalarField::new(pts.iter().map(|p| p[0] - x0).collect()).expect("finite");
    let g = gen::field(rng, n);
    let inst = json!({"space": space_json(&s), "g": field_json(&g)});
    run(
        "quotient",
        "the dual witness for the identity generator has zero barycenter",
        1e-9,
        inst,
        || {
            let d = quotient_dist_dual(&s, &g, &[id.clone()], Arithmetic::Float)?;
            // Barycenter relative to the basepoint, where δ₀ = 0.
            let b = barycenter(&s, &d.mu)?[0] - x0 * d.mu.terms().iter().map(|t| t.1).sum::<f64>();
            measured(b.abs(), &[("barycenter", b), ("dual", d.value)])
        },
    )
}

pub fn duality_ph_quotient(rng: &mut CaseRng) -> Outcome {
    let dim = rng.gen_range(1..=2);
    let norm = gen::norm(rng);
    let (s, scalings) = loop {
        let m = rng.gen_range(1..=3);
        let mut points = vec![vec![0.0; dim]];
        let mut scalings = Vec::new();
        for _ in 0..m {
            let x = gen::vector(rng, dim, 2.0);
            let r = *[0.5, 1.5, 2.0, 3.0].choose(rng).unwrap();
            points.push(x.clone());
            points.push(x.iter().map(|v| r * v).collect());
            scalings.push(Scaling {
                base: points.len() - 2,
                scaled: points.len() - 1,
                r,
            });
        }
        if let Ok(s) = PointedSpace::embedded(norm, dim, points) {
            break (s, scalings);
        }
    };
    let g = gen::field(rng, s.len());
    let sc: Vec<Value> = scalings
        .iter()
        .map(|c| json!({"base": c.base, "scaled": c.scaled, "r": c.r}))
        .collect();
    let inst = json!({"space": space_json(&s), "g": field_json(&g), "scalings": sc});
    run(
        "ph_quotient_check",
        "distance to sampled ph fields equals the dual over the generators",
        1e-7,
        inst,
        || {
            let q = ph_quotient_check(&s, &scalings, &g, Arithmetic::Float)?;
            measured(q.gap, &[("primal", q.primal), ("dual", q.dual)])
        },
    )
}

// -------------------------------------------------------------- annihilator

/// `mode` 0 forces `r = 0`, 1 forces `r = 1`, anything else draws `r`.
pub fn annihilator_ph_norm(rng: &mut CaseRng, mode: usize) -> Outcome {
    let norm = gen::norm(rng);
    let x = loop {
        let x = gen::vector(rng, 2, 3.0);
        if norm.norm(&x) > 1e-3 {
            break x;
        }
    };
    let r = match mode {
        0 => 0.0,
        1 => 1.0,
        _ => rng.gen_range(0.0..=5.0),
    };
    let rx: Vec<f64> = x.iter().map(|v| r * v).collect();
    let inst = json!({"norm": norm, "x": x, "r": r});
    run("ph_norm", "‖r·δᵖʰx − δᵖʰ(rx)‖ = 0", 1e-9, inst, || {
        let mu = PhFreeElement::new(
            norm,
            2,
            vec![PhTerm { x: x.clone(), a: r }, PhTerm { x: rx.clone(), a: -1.0 }],
        )?;
        let v = ph_norm(&mu, PH_NORM_TOL)?.value;
        measured(v.abs(), &[("ph_norm", v)])
    })
}

pub fn annihilator_pairing(rng: &mut CaseRng) -> Outcome {
    let (rays, f) = cone_instance(rng, 8);
    let i = rng.gen_range(0..rays.len());
    let s = rng.gen_range(0.1..=3.0);
    let r = rng.gen_range(0.0..=5.0);
    let x: Vec<f64> = rays.directions()[i].iter().map(|c| s * c).collect();
    let rx: Vec<f64> = x.iter().map(|v| r * v).collect();
    let inst = json!({"rays": rays_json(&rays, &f), "x": x, "r": r});
    run("ph_pairing", "every ph field annihilates r·δᵖʰx − δᵖʰ(rx)", 1e-12, inst, || {
        let mu = PhFreeElement::new(
            rays.norm(),
            rays.dim(),
            vec![PhTerm { x: x.clone(), a: r }, PhTerm { x: rx.clone(), a: -1.0 }],
        )?;
        let p = ph_pairing(&rays, &f, &mu)?;
        let scale = r * s * f.values()[i].abs();
        measured(rel(p.abs(), scale), &[("pairing", p)])
    })
}

// ---------------------------------------------------------------- theta-phi

/// A random element on a sphere sample `{0} ∪ {uᵢ}` in the plane.
pub fn sphere_element(rng: &mut CaseRng) -> (PointedSpace, FreeElement) {
    let norm = gen::norm(rng);
    let k = rng.gen_range(1..=5);
    let rays = gen::rays(rng, k, 2, norm);
    let space = rays.sphere_space().expect("unit directions");
    let mu = FreeElement::new((1..=k).map(|i| (i, rng.gen_range(-2.0..=2.0))));
    (space, mu)
}

pub fn theta_phi_bounds(rng: &mut CaseRng) -> Outcome {
    let (s, mu) = sphere_element(rng);
    let inst = json!({"space": space_json(&s), "element": elem_json(&mu)});
    run("theta", "‖Θμ‖ ≤ ‖μ‖ ≤ 3·‖Θμ‖", 1e-6, inst, || {
        let ph = ph_norm(&theta(&s, &mu)?, PH_NORM_TOL)?.value;
        let kr = kr_norm(&s, &mu, KrMethod::Both)?.value;
        measured(
            (ph - kr).max(kr - 3.0 * ph),
            &[("ph_norm", ph), ("kr_norm", kr)],
        )
    })
}

pub fn theta_phi_roundtrip(rng: &mut CaseRng) -> Outcome {
    let (s, mu) = sphere_element(rng);
    let inst = json!({"space": space_json(&s), "element": elem_json(&mu)});
    run("phi", "Φ ∘ Θ is the identity", 0.0, inst, || {
        let (s2, back) = phi(&theta(&s, &mu)?)?;
        let pts = s.points().expect("embedded");
        let pts2 = s2.points().expect("embedded");
        let same = back
            .terms()
            .iter()
            .all(|&(i, a)| pts.iter().position(|p| *p == pts2[i]).map(|j| mu.coefficient(j)) == Some(a))
            && back.terms().len() == mu.terms().len();
        measured(if same { 0.0 } else { 1.0 }, &[])
    })
}

// ------------------------------------------------------------------ q-bound

pub fn q_bound(rng: &mut CaseRng) -> Outcome {
    let (s, mu) = sphere_element(rng);
    let inst = json!({"space": space_json(&s), "element": elem_json(&mu)});
    run("q", "|Q(μ)| ≤ ‖μ‖", 1e-9, inst, || {
        let q = q_functional(&s, &mu)?;
        let kr = kr_norm(&s, &mu, KrMethod::Both)?.value;
        measured(rel(q.abs() - kr, kr), &[("q", q), ("kr_norm", kr)])
    })
}
