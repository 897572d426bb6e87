//! Norms on finitely supported elements of the free spaces, quotient
//! distances with their dual programs, and the maps between the sphere
//! free space and the positively homogeneous one.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::cone::{pair_sup, UNIT_TOL};
use crate::elements::{FreeElement, PhFreeElement, PhTerm, DIRECTION_TOL};
use crate::error::{Error, Result};
use crate::flow::{min_cost_flow, FlowNetwork};
use crate::lp::{solve_lp_with, LpProblem, LpSolution, Relation, Sense};
use crate::mcshane::{mcshane_sup, PartialField};
use crate::metric::{PointedSpace, ScalarField};
use crate::norm::{combine, NormKind};
use crate::numeric::{rank, Arithmetic};

/// Agreement required between the LP and flow routes.
pub const ROUTE_TOL: f64 = 1e-9;
pub const PH_NORM_TOL: f64 = 1e-9;
pub const CUT_ROUNDS: usize = 500;
/// Cut positions closer than this are the same cut.
const CUT_REPEAT: f64 = 1e-12;
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrMethod {
    Lp,
    Flow,
    Both,
}

impl std::str::FromStr for KrMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lp" => Ok(KrMethod::Lp),
            "flow" => Ok(KrMethod::Flow),
            "both" => Ok(KrMethod::Both),
            other => Err(Error::Malformed(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrNorm {
    pub value: f64,
    pub lp_value: Option<f64>,
    pub flow_value: Option<f64>,
    /// A 1-Lipschitz field attaining the norm (LP route only).
    pub witness: Option<ScalarField>,
    /// Arc flows `(from, to, amount)` of an optimal transport (flow route
    /// only).
    pub transport: Option<Vec<(usize, usize, f64)>>,
    pub lp_gap: Option<f64>,
}

/// Kantorovich–Rubinstein norm of `mu`: the largest `μ(f)` over 1-Lipschitz
/// `f` vanishing at the basepoint, or equivalently the cheapest transport
/// of `mu`'s mass to the basepoint.
pub fn kr_norm(space: &PointedSpace, mu: &FreeElement, method: KrMethod) -> Result<KrNorm> {
    kr_norm_with(space, mu, method, Arithmetic::Float)
}

pub fn kr_norm_with(
    space: &PointedSpace,
    mu: &FreeElement,
    method: KrMethod,
    arithmetic: Arithmetic,
) -> Result<KrNorm> {
    mu.check_in(space)?;
    let mut out = KrNorm {
        value: 0.0,
        lp_value: None,
        flow_value: None,
        witness: None,
        transport: None,
        lp_gap: None,
    };
    if mu.is_zero() {
        out.witness = Some(ScalarField::zero(space.len()));
        return Ok(out);
    }
    // By the McShane extension the support plus the basepoint suffices.
    let mut nodes = vec![PointedSpace::BASEPOINT];
    nodes.extend(mu.terms().iter().map(|t| t.0));

    if matches!(method, KrMethod::Lp | KrMethod::Both) {
        let m = nodes.len() - 1;
        let objective = mu.terms().iter().map(|t| t.1).collect();
        let mut p = LpProblem::new(Sense::Max, objective);
        for j in 0..m {
            p.set_free(j);
        }
        for (a, &x) in nodes.iter().enumerate() {
            for (b, &y) in nodes.iter().enumerate() {
                if a == b {
                    continue;
                }
                let mut terms = Vec::with_capacity(2);
                if a > 0 {
                    terms.push((a - 1, 1.0));
                }
                if b > 0 {
                    terms.push((b - 1, -1.0));
                }
                p.add_sparse(&terms, Relation::Le, space.d(x, y));
            }
        }
        let sol = solve_lp_with(&p, arithmetic)?.into_optimal()?;
        let pf = PartialField::new(
            nodes.clone(),
            std::iter::once(0.0).chain(sol.primal.iter().copied()).collect(),
        )?;
        out.witness = Some(mcshane_sup(space, &pf)?);
        out.lp_value = Some(sol.objective);
        out.lp_gap = Some(sol.gap);
    }
    if matches!(method, KrMethod::Flow | KrMethod::Both) {
        let total: f64 = mu.terms().iter().map(|t| t.1).sum();
        let mut div = vec![-total];
        div.extend(mu.terms().iter().map(|t| t.1));
        let net = FlowNetwork::complete(div, |a, b| space.d(nodes[a], nodes[b]));
        let sol = min_cost_flow(&net)?;
        out.flow_value = Some(sol.cost);
        out.transport = Some(
            net.arcs
                .iter()
                .zip(&sol.flow)
                .filter(|(_, &f)| f > 0.0)
                .map(|(a, &f)| (nodes[a.tail], nodes[a.head], f))
                .collect(),
        );
    }
    out.value = match (out.lp_value, out.flow_value) {
        (Some(l), Some(f)) => {
            if (l - f).abs() > ROUTE_TOL * l.abs().max(1.0) {
                return Err(Error::NumericalFailure(format!(
                    "LP value {l} and transport cost {f} disagree"
                )));
            }
            l
        }
        (Some(l), None) => l,
        (None, Some(f)) => f,
        (None, None) => unreachable!("at least one route runs"),
    };
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientPrimal {
    pub dist: f64,
    pub coeffs: Vec<f64>,
    pub exact: Option<BigRational>,
    pub lp: LpSolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientDual {
    pub value: f64,
    pub mu: FreeElement,
    pub exact: Option<BigRational>,
    pub lp: LpSolution,
}

fn check_generators(space: &PointedSpace, g: &ScalarField, gens: &[ScalarField]) -> Result<()> {
    g.check_aligned(space)?;
    for f in gens {
        f.check_aligned(space)?;
    }
    let rows: Vec<Vec<f64>> = gens.iter().map(|f| f.values().to_vec()).collect();
    if rank(&rows, RANK_TOL) < gens.len() {
        return Err(Error::DependentGenerators);
    }
    Ok(())
}

/// `min_c Lip(g − Σ cᵢ fᵢ)`, one LP in `(c, L)`.
pub fn quotient_dist_primal(
    space: &PointedSpace,
    g: &ScalarField,
    gens: &[ScalarField],
    arithmetic: Arithmetic,
) -> Result<QuotientPrimal> {
    check_generators(space, g, gens)?;
    let k = gens.len();
    let n = space.len();
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut p = LpProblem::new(Sense::Min, objective);
    for j in 0..k {
        p.set_free(j);
    }
    let gv = g.values();
    for x in 0..n {
        for y in (x + 1)..n {
            let dg = gv[x] - gv[y];
            let df: Vec<f64> = gens.iter().map(|f| f.values()[x] - f.values()[y]).collect();
            // ±(Δg − Σ cᵢ Δfᵢ) ≤ L·d
            let mut up: Vec<f64> = df.iter().map(|v| -v).collect();
            up.push(-space.d(x, y));
            p.add(up, Relation::Le, -dg);
            let mut down = df.clone();
            down.push(-space.d(x, y));
            p.add(down, Relation::Le, dg);
        }
    }
    let lp = solve_lp_with(&p, arithmetic)?.into_optimal()?;
    Ok(QuotientPrimal {
        dist: lp.objective,
        coeffs: lp.primal[..k].to_vec(),
        exact: lp.exact_objective.clone(),
        lp,
    })
}

/// `sup μ(g)` over `‖μ‖ ≤ 1` with `μ(fᵢ) = 0` for every generator. The norm
/// bound is written with transport variables on every ordered pair, so the
/// whole problem is a single LP.
pub fn quotient_dist_dual(
    space: &PointedSpace,
    g: &ScalarField,
    gens: &[ScalarField],
    arithmetic: Arithmetic,
) -> Result<QuotientDual> {
    check_generators(space, g, gens)?;
    let annihilated: Vec<Vec<f64>> = gens.iter().map(|f| f.values().to_vec()).collect();
    dual_over_subspace(space, g, &annihilated, None, arithmetic).map(|d| QuotientDual {
        value: d.value,
        mu: d.mu,
        exact: d.exact,
        lp: d.lp,
    })
}

struct SubspaceDual {
    value: f64,
    mu: FreeElement,
    exact: Option<BigRational>,
    lp: LpSolution,
}

/// Shared dual program. `μ` is constrained either by `μ(f) = 0` for each
/// row of `annihilated`, or to the span of `generators` (given as
/// coefficient vectors over all points).
fn dual_over_subspace(
    space: &PointedSpace,
    g: &ScalarField,
    annihilated: &[Vec<f64>],
    generators: Option<&[Vec<f64>]>,
    arithmetic: Arithmetic,
) -> Result<SubspaceDual> {
    let n = space.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .collect();
    let na = n - 1;
    let nb = generators.map_or(0, |g| g.len());
    let a0 = pairs.len();
    let b0 = a0 + na;
    let nvars = b0 + nb;

    let mut objective = vec![0.0; nvars];
    for z in 1..n {
        objective[a0 + z - 1] = g.values()[z];
    }
    let mut p = LpProblem::new(Sense::Max, objective);
    for j in a0..nvars {
        p.set_free(j);
    }
    // a_z equals the net outflow of the transport at z.
    for z in 1..n {
        let mut terms = vec![(a0 + z - 1, 1.0)];
        for (k, &(x, y)) in pairs.iter().enumerate() {
            if x == z {
                terms.push((k, -1.0));
            } else if y == z {
                terms.push((k, 1.0));
            }
        }
        p.add_sparse(&terms, Relation::Eq, 0.0);
    }
    let budget: Vec<(usize, f64)> = pairs
        .iter()
        .enumerate()
        .map(|(k, &(x, y))| (k, space.d(x, y)))
        .collect();
    p.add_sparse(&budget, Relation::Le, 1.0);
    for f in annihilated {
        let terms: Vec<(usize, f64)> = (1..n).map(|z| (a0 + z - 1, f[z])).collect();
        p.add_sparse(&terms, Relation::Eq, 0.0);
    }
    if let Some(gens) = generators {
        for z in 1..n {
            let mut terms = vec![(a0 + z - 1, 1.0)];
            for (k, gen) in gens.iter().enumerate() {
                if gen[z] != 0.0 {
                    terms.push((b0 + k, -gen[z]));
                }
            }
            p.add_sparse(&terms, Relation::Eq, 0.0);
        }
    }
    let lp = solve_lp_with(&p, arithmetic)?.into_optimal()?;
    let mu = FreeElement::new((1..n).map(|z| (z, lp.primal[a0 + z - 1])));
    Ok(SubspaceDual {
        value: lp.objective,
        mu,
        exact: lp.exact_objective.clone(),
        lp,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhNorm {
    /// Optimum of the final relaxation; an upper bound on the true norm.
    pub value: f64,
    /// Largest relative violation of the cone constraint by the optimizer.
    pub violation: f64,
    /// `value / (1 + violation)`, a certified lower bound.
    pub lower_bound: f64,
    pub rounds: usize,
    pub cuts: usize,
    pub directions: Vec<Vec<f64>>,
    /// Optimal values on `directions`.
    pub witness: Vec<f64>,
}

/// Norm of a ph free element by cutting planes on the semi-infinite LP
/// `max Σ wᵢ vᵢ` s.t. `|vᵢ| ≤ 1` and
/// `|(1−t)vᵢ − t·vⱼ| ≤ ‖(1−t)uᵢ − t·uⱼ‖` for every pair and `t ∈ [0,1]`.
pub fn ph_norm(mu: &PhFreeElement, tol: f64) -> Result<PhNorm> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Malformed(format!("tolerance {tol} must be positive")));
    }
    let red = mu.reduced();
    let k = red.directions.len();
    let norm = red.norm;
    if k == 0 {
        return Ok(PhNorm {
            value: 0.0,
            violation: 0.0,
            lower_bound: 0.0,
            rounds: 0,
            cuts: 0,
            directions: Vec::new(),
            witness: Vec::new(),
        });
    }
    let mut p = LpProblem::new(Sense::Max, red.weights.clone());
    for j in 0..k {
        p.set_bound(j, Some(-1.0), Some(1.0));
    }
    let mut cuts = 0;
    // Cut positions per pair, so a round that would only repeat old cuts is
    // recognised as a stall.
    let mut placed: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    let mut add_cut = |p: &mut LpProblem, i: usize, j: usize, t: f64| {
        // Rows are scaled to right-hand side 1 so LP slack is a relative
        // violation, like the one `pair_sup` reports.
        let r = norm.norm(&combine(1.0 - t, &red.directions[i], -t, &red.directions[j]));
        let (a, b) = ((1.0 - t) / r, t / r);
        p.add_sparse(&[(i, a), (j, -b)], Relation::Le, 1.0);
        p.add_sparse(&[(i, -a), (j, b)], Relation::Le, 1.0);
        cuts += 2;
    };
    // t = 0 and t = 1 are the variable bounds.
    for i in 0..k {
        for j in (i + 1)..k {
            add_cut(&mut p, i, j, 0.5);
            placed.insert((i, j), vec![0.0, 0.5, 1.0]);
        }
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        let sol = solve_lp_with(&p, Arithmetic::Float)?.into_optimal()?;
        let v = &sol.primal;
        let mut worst: f64 = v.iter().fold(0.0f64, |m, x| m.max(x.abs() - 1.0));
        let mut new_cuts = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                let m = pair_sup(&red.directions[i], &red.directions[j], v[i], v[j], norm)?;
                let viol = m.value - 1.0;
                worst = worst.max(viol);
                if viol > tol {
                    new_cuts.push((i, j, m.at));
                }
            }
        }
        let worst = worst.max(0.0);
        if new_cuts.is_empty() {
            return Ok(PhNorm {
                value: sol.objective,
                violation: worst,
                lower_bound: sol.objective / (1.0 + worst),
                rounds,
                cuts,
                directions: red.directions,
                witness: sol.primal,
            });
        }
        let fresh: Vec<(usize, usize, f64)> = new_cuts
            .into_iter()
            .filter(|&(i, j, t)| {
                let seen = placed.entry((i, j)).or_default();
                let new = seen.iter().all(|&s| (s - t).abs() > CUT_REPEAT);
                if new {
                    seen.push(t);
                }
                new
            })
            .collect();
        if rounds >= CUT_ROUNDS || fresh.is_empty() {
            return Err(Error::NoConvergence {
                rounds,
                violation: worst,
            });
        }
        for (i, j, t) in fresh {
            add_cut(&mut p, i, j, t);
        }
    }
}

/// `Σ αᵢ δ_{xᵢ} ↦ Σ αᵢ δ^{ph}_{xᵢ}` for elements supported on unit vectors.
pub fn theta(space: &PointedSpace, mu: &FreeElement) -> Result<PhFreeElement> {
    let norm = space.norm_kind().ok_or(Error::MatrixSpaceUnsupported)?;
    let points = space.points().expect("embedded");
    mu.check_in(space)?;
    let mut terms = Vec::with_capacity(mu.terms().len());
    for &(i, a) in mu.terms() {
        if (norm.norm(&points[i]) - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitSupport(i));
        }
        terms.push(PhTerm {
            x: points[i].clone(),
            a,
        });
    }
    PhFreeElement::new(norm, points[0].len(), terms)
}

/// Inverse of [`theta`]: returns the sphere sample `{0} ∪ support` and the
/// element on it. Coincident support points are merged.
pub fn phi(mu: &PhFreeElement) -> Result<(PointedSpace, FreeElement)> {
    let mut points = vec![vec![0.0; mu.dim]];
    let mut terms = Vec::with_capacity(mu.terms.len());
    for (k, t) in mu.terms.iter().enumerate() {
        if (mu.norm.norm(&t.x) - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitSupport(k));
        }
        let idx = match points
            .iter()
            .skip(1)
            .position(|p| mu.norm.dist(p, &t.x) <= DIRECTION_TOL)
        {
            Some(i) => i + 1,
            None => {
                points.push(t.x.clone());
                points.len() - 1
            }
        };
        terms.push((idx, t.a));
    }
    let space = PointedSpace::embedded(mu.norm, mu.dim, points)?;
    Ok((space, FreeElement::new(terms)))
}

/// `Q(Σ αᵢ δ_{xᵢ}) = Σ αᵢ`.
pub fn q_functional(space: &PointedSpace, mu: &FreeElement) -> Result<f64> {
    mu.check_in(space)?;
    Ok(mu.terms().iter().map(|t| t.1).sum())
}

/// A declared homogeneity relation: point `scaled` equals `r` times point
/// `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaling {
    pub base: usize,
    pub scaled: usize,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhQuotient {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    /// Sampled homogeneous field closest to `g`.
    pub h: Vec<f64>,
    /// Dual witness in the span of `r·δ_x − δ_{rx}`.
    pub mu: FreeElement,
    pub exact_primal: Option<BigRational>,
    pub exact_dual: Option<BigRational>,
}

/// Distance from `g` to the fields satisfying `h(rx) = r·h(x)` for every
/// declared scaling, computed twice: directly, and as the supremum of `μ(g)`
/// over unit-norm `μ` in the span of `r·δ_x − δ_{rx}`.
pub fn ph_quotient_check(
    space: &PointedSpace,
    scalings: &[Scaling],
    g: &ScalarField,
    arithmetic: Arithmetic,
) -> Result<PhQuotient> {
    g.check_aligned(space)?;
    let norm = space.norm_kind().ok_or(Error::MatrixSpaceUnsupported)?;
    let points = space.points().expect("embedded");
    let n = space.len();
    for s in scalings {
        if s.base >= n || s.scaled >= n {
            return Err(Error::IndexOutOfRange(s.base.max(s.scaled)));
        }
        if !(s.r >= 0.0) || !s.r.is_finite() {
            return Err(Error::Malformed(format!("scaling factor {} must be ≥ 0", s.r)));
        }
        let target: Vec<f64> = points[s.base].iter().map(|v| s.r * v).collect();
        let miss = norm.dist(&target, &points[s.scaled]);
        if miss > 1e-12 * (1.0 + norm.norm(&target)) {
            return Err(Error::NotScalingClosed(s.base, s.scaled));
        }
    }

    // Primal: variables h_1..h_{n-1} (h_0 = 0) and L.
    let nh = n - 1;
    let mut objective = vec![0.0; nh + 1];
    objective[nh] = 1.0;
    let mut p = LpProblem::new(Sense::Min, objective);
    for j in 0..nh {
        p.set_free(j);
    }
    let gv = g.values();
    for x in 0..n {
        for y in (x + 1)..n {
            let dg = gv[x] - gv[y];
            // ±((g−h)(x) − (g−h)(y)) ≤ L·d
            let mut up = vec![0.0; nh + 1];
            let mut down = vec![0.0; nh + 1];
            if x > 0 {
                up[x - 1] -= 1.0;
                down[x - 1] += 1.0;
            }
            if y > 0 {
                up[y - 1] += 1.0;
                down[y - 1] -= 1.0;
            }
            up[nh] = -space.d(x, y);
            down[nh] = -space.d(x, y);
            p.add(up, Relation::Le, -dg);
            p.add(down, Relation::Le, dg);
        }
    }
    let mut generators = Vec::new();
    for s in scalings {
        let mut row = vec![0.0; nh + 1];
        if s.scaled > 0 {
            row[s.scaled - 1] += 1.0;
        }
        if s.base > 0 {
            row[s.base - 1] -= s.r;
        }
        if row.iter().any(|&v| v != 0.0) {
            p.add(row, Relation::Eq, 0.0);
        }
        let mut gen = vec![0.0; n];
        gen[s.base] += s.r;
        gen[s.scaled] -= 1.0;
        gen[0] = 0.0;
        if gen.iter().any(|&v| v != 0.0) {
            generators.push(gen);
        }
    }
    let primal = solve_lp_with(&p, arithmetic)?.into_optimal()?;
    let dual = dual_over_subspace(space, g, &[], Some(&generators), arithmetic)?;
    let mut h = vec![0.0];
    h.extend_from_slice(&primal.primal[..nh]);
    Ok(PhQuotient {
        primal: primal.objective,
        dual: dual.value,
        gap: (primal.objective - dual.value).abs(),
        h,
        mu: dual.mu,
        exact_primal: primal.exact_objective,
        exact_dual: dual.exact,
    })
}

/// Every point of a space as a unit-norm sample, if it is one.
pub fn is_sphere_space(space: &PointedSpace) -> bool {
    match (space.norm_kind(), space.points()) {
        (Some(norm), Some(points)) => {
            points[0].iter().all(|&v| v == 0.0)
                && points
                    .iter()
                    .skip(1)
                    .all(|p| (norm.norm(p) - 1.0).abs() <= UNIT_TOL)
        }
        _ => false,
    }
}

/// Distance of a ph molecule, `‖x − y‖`, for cross-checks.
pub fn molecule_distance(norm: NormKind, x: &[f64], y: &[f64]) -> f64 {
    norm.dist(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    fn line(xs: &[f64]) -> PointedSpace {
        PointedSpace::embedded(NormKind::L2, 1, xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn molecule_norm_is_distance() {
        let s = line(&[0.0, 1.0, 3.0, -2.0]);
        for m in [KrMethod::Lp, KrMethod::Flow, KrMethod::Both] {
            let v = kr_norm(&s, &FreeElement::molecule(2, 3), m).unwrap().value;
            assert!((v - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_unit_masses_on_the_line() {
        let s = line(&[0.0, 1.0, 3.0]);
        let mu = FreeElement::new([(1, 1.0), (2, 1.0)]);
        let r = kr_norm(&s, &mu, KrMethod::Both).unwrap();
        assert!((r.value - 4.0).abs() < 1e-12);
        let w = r.witness.unwrap();
        assert!((w.values()[1] + w.values()[2] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn matrix_space_instance() {
        // d(0,a)=1, d(0,b)=2, d(a,b)=1; ‖2δ_a − δ_b‖ = 2 at f = (0, 1, 0).
        let s = PointedSpace::from_matrix(vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ])
        .unwrap();
        let mu = FreeElement::new([(1, 2.0), (2, -1.0)]);
        let r = kr_norm(&s, &mu, KrMethod::Both).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quotient_hand_instance() {
        let s = line(&[0.0, 1.0, 2.0]);
        let g = ScalarField::new(vec![0.0, -1.0, 0.0]).unwrap();
        let id = ScalarField::new(vec![0.0, 1.0, 2.0]).unwrap();
        let p = quotient_dist_primal(&s, &g, &[id.clone()], Arithmetic::Rational).unwrap();
        assert_eq!(p.exact, Some(rational(1, 1)));
        assert!(p.coeffs[0].abs() < 1e-12);
        let d = quotient_dist_dual(&s, &g, &[id], Arithmetic::Rational).unwrap();
        assert_eq!(d.exact, Some(rational(1, 1)));
        assert!((d.mu.coefficient(1) + 1.0).abs() < 1e-12);
        assert!((d.mu.coefficient(2) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn quotient_without_generators_is_lip() {
        let s = line(&[0.0, 1.0, 2.5]);
        let g = ScalarField::new(vec![0.0, 2.0, -1.0]).unwrap();
        let p = quotient_dist_primal(&s, &g, &[], Arithmetic::Float).unwrap();
        let d = quotient_dist_dual(&s, &g, &[], Arithmetic::Float).unwrap();
        assert!((p.dist - 2.0).abs() < 1e-12);
        assert!((d.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn quotient_of_a_member_is_zero() {
        let s = line(&[0.0, 1.0, 2.0]);
        let f = ScalarField::new(vec![0.0, 1.0, 4.0]).unwrap();
        let g = f.scaled(-3.0);
        let p = quotient_dist_primal(&s, &g, &[f.clone()], Arithmetic::Float).unwrap();
        let d = quotient_dist_dual(&s, &g, &[f], Arithmetic::Float).unwrap();
        assert!(p.dist.abs() < 1e-12 && d.value.abs() < 1e-12);
    }

    #[test]
    fn dependent_generators_are_rejected() {
        let s = line(&[0.0, 1.0, 2.0]);
        let g = ScalarField::zero(3);
        let f = ScalarField::new(vec![0.0, 1.0, 2.0]).unwrap();
        let err = quotient_dist_primal(&s, &g, &[f.clone(), f.scaled(2.0)], Arithmetic::Float);
        assert_eq!(err.unwrap_err(), Error::DependentGenerators);
    }

    #[test]
    fn ph_norm_of_a_real_molecule() {
        let mu = PhFreeElement::molecule(NormKind::L2, vec![2.0], vec![-1.0]).unwrap();
        let r = ph_norm(&mu, PH_NORM_TOL).unwrap();
        assert!((r.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn ph_norm_of_a_plane_molecule() {
        for norm in NormKind::ALL {
            let x = vec![1.0, 0.0];
            let y = vec![0.0, 1.0];
            let mu = PhFreeElement::molecule(norm, x.clone(), y.clone()).unwrap();
            let r = ph_norm(&mu, PH_NORM_TOL).unwrap();
            assert!((r.value - norm.dist(&x, &y)).abs() < 1e-8, "{norm}: {}", r.value);
        }
    }

    #[test]
    fn ph_norm_of_homogeneity_generator_is_zero() {
        let x = vec![0.4, -0.9];
        let mu = PhFreeElement::new(
            NormKind::L2,
            2,
            vec![
                PhTerm { x: x.clone(), a: 2.0 },
                PhTerm { x: vec![0.8, -1.8], a: -1.0 },
            ],
        )
        .unwrap();
        assert_eq!(ph_norm(&mu, PH_NORM_TOL).unwrap().value, 0.0);
    }

    #[test]
    fn theta_phi_examples() {
        let s = PointedSpace::embedded(
            NormKind::L2,
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        let mu = FreeElement::delta(1);
        let t = theta(&s, &mu).unwrap();
        assert!((ph_norm(&t, PH_NORM_TOL).unwrap().value - 1.0).abs() < 1e-12);
        assert!((kr_norm(&s, &mu, KrMethod::Both).unwrap().value - 1.0).abs() < 1e-12);

        let m = FreeElement::molecule(1, 2);
        let t = theta(&s, &m).unwrap();
        let ph = ph_norm(&t, PH_NORM_TOL).unwrap().value;
        let kr = kr_norm(&s, &m, KrMethod::Both).unwrap().value;
        assert!((kr - 2f64.sqrt()).abs() < 1e-12);
        assert!((ph - 2f64.sqrt()).abs() < 1e-8);

        let (s2, back) = phi(&t).unwrap();
        assert_eq!(back, FreeElement::molecule(1, 2));
        assert_eq!(s2.points().unwrap(), s.points().unwrap());
        assert!(theta(&s, &FreeElement::default()).unwrap().terms.is_empty());

        let off = PointedSpace::embedded(NormKind::L2, 1, vec![vec![0.0], vec![2.0]]).unwrap();
        assert_eq!(
            theta(&off, &FreeElement::delta(1)).unwrap_err(),
            Error::NonUnitSupport(1)
        );
    }

    #[test]
    fn q_functional_examples() {
        let s = PointedSpace::embedded(
            NormKind::L2,
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert_eq!(q_functional(&s, &FreeElement::molecule(1, 2)).unwrap(), 0.0);
        let both = FreeElement::new([(1, 1.0), (2, 1.0)]);
        assert_eq!(q_functional(&s, &both).unwrap(), 2.0);
        assert!((kr_norm(&s, &both, KrMethod::Both).unwrap().value - 2.0).abs() < 1e-12);
        assert_eq!(q_functional(&s, &FreeElement::default()).unwrap(), 0.0);
    }

    #[test]
    fn ph_quotient_hand_instance() {
        let s = line(&[0.0, 1.0, 2.0]);
        let sc = [Scaling {
            base: 1,
            scaled: 2,
            r: 2.0,
        }];
        let g = ScalarField::new(vec![0.0, 0.0, 1.0]).unwrap();
        let q = ph_quotient_check(&s, &sc, &g, Arithmetic::Rational).unwrap();
        assert_eq!(q.exact_primal, Some(rational(1, 2)));
        assert_eq!(q.exact_dual, Some(rational(1, 2)));

        let hom = ScalarField::new(vec![0.0, 3.0, 6.0]).unwrap();
        let q = ph_quotient_check(&s, &sc, &hom, Arithmetic::Float).unwrap();
        assert!(q.primal.abs() < 1e-12 && q.dual.abs() < 1e-12);

        let bad = [Scaling {
            base: 1,
            scaled: 2,
            r: 3.0,
        }];
        assert_eq!(
            ph_quotient_check(&s, &bad, &g, Arithmetic::Float).unwrap_err(),
            Error::NotScalingClosed(1, 2)
        );
    }
}
