//! Positively homogeneous Lipschitz functions on the cone spanned by finitely
//! many unit directions.
//!
//! A [`PhField`] stores one value per direction of a [`RaySystem`] and
//! stands for the function `r·uᵢ ↦ r·valuesᵢ`, so homogeneity holds by
//! construction. The Lipschitz constant over the cone reduces to a
//! one-dimensional supremum per pair of directions ([`pair_sup`]).

use serde::{Deserialize, Serialize};

use crate::elements::{PhFreeElement, PhTerm, DIRECTION_TOL};
use crate::error::{Error, Result};
use crate::metric::{PointedSpace, ScalarField};
use crate::norm::{combine, scale, NormKind};
use crate::search::{maximize, Maximum};

/// Unit-norm tolerance for ray directions.
pub const UNIT_TOL: f64 = 1e-12;
/// Scalar in front of the pointwise product in [`odot`].
pub const ODOT_FACTOR: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct RaySystem {
    norm: NormKind,
    dim: usize,
    directions: Vec<Vec<f64>>,
}

/// On-disk ray system with values attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayFile {
    pub norm: NormKind,
    pub dim: usize,
    pub directions: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl RaySystem {
    pub fn new(norm: NormKind, dim: usize, directions: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension("dimension must be positive".into()));
        }
        for (i, u) in directions.iter().enumerate() {
            if u.len() != dim {
                return Err(Error::BadDimension(format!(
                    "direction {i} has {} coordinates, expected {dim}",
                    u.len()
                )));
            }
            let n = norm.norm(u);
            if !n.is_finite() || (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::InvalidRays(format!("direction {i} has norm {n}")));
            }
        }
        for i in 0..directions.len() {
            for j in (i + 1)..directions.len() {
                if norm.dist(&directions[i], &directions[j]) <= UNIT_TOL {
                    return Err(Error::InvalidRays(format!("directions {i} and {j} coincide")));
                }
            }
        }
        Ok(RaySystem {
            norm,
            dim,
            directions,
        })
    }

    /// Normalizes arbitrary nonzero vectors into a ray system.
    pub fn from_vectors(norm: NormKind, dim: usize, vectors: &[Vec<f64>]) -> Result<Self> {
        let dirs = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let n = norm.norm(v);
                if n == 0.0 {
                    Err(Error::InvalidRays(format!("vector {i} is zero")))
                } else {
                    Ok(scale(v, 1.0 / n))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        RaySystem::new(norm, dim, dirs)
    }

    /// The two rays `±1` of the real line.
    pub fn real_line() -> Self {
        RaySystem {
            norm: NormKind::L2,
            dim: 1,
            directions: vec![vec![1.0], vec![-1.0]],
        }
    }

    pub fn norm(&self) -> NormKind {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn directions(&self) -> &[Vec<f64>] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn subsystem(&self, idx: &[usize]) -> Result<RaySystem> {
        let dirs = idx
            .iter()
            .map(|&i| self.directions.get(i).cloned().ok_or(Error::IndexOutOfRange(i)))
            .collect::<Result<Vec<_>>>()?;
        RaySystem::new(self.norm, self.dim, dirs)
    }

    /// Index of the direction through `x ≠ 0`, if represented.
    pub fn locate(&self, x: &[f64]) -> Result<(usize, f64)> {
        let r = self.norm.norm(x);
        let u = scale(x, 1.0 / r);
        self.directions
            .iter()
            .position(|d| self.norm.dist(d, &u) <= DIRECTION_TOL)
            .map(|i| (i, r))
            .ok_or_else(|| Error::DirectionNotRepresented(x.to_vec()))
    }

    /// `{0} ∪ {uᵢ}` with the restricted norm metric; point `i + 1` is `uᵢ`.
    pub fn sphere_space(&self) -> Result<PointedSpace> {
        let mut points = vec![vec![0.0; self.dim]];
        points.extend(self.directions.iter().cloned());
        PointedSpace::embedded(self.norm, self.dim, points)
    }

    pub fn to_file(&self, f: &PhField) -> RayFile {
        RayFile {
            norm: self.norm,
            dim: self.dim,
            directions: self.directions.clone(),
            values: f.values.clone(),
        }
    }
}

impl RayFile {
    pub fn into_parts(self) -> Result<(RaySystem, PhField)> {
        let rays = RaySystem::new(self.norm, self.dim, self.directions)?;
        let f = PhField::new(self.values)?;
        f.check(&rays)?;
        Ok((rays, f))
    }
}

/// Values on the directions of a ray system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhField {
    values: Vec<f64>,
}

impl PhField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Malformed("field values must be finite".into()));
        }
        Ok(PhField { values })
    }

    pub fn zero(n: usize) -> Self {
        PhField {
            values: vec![0.0; n],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn check(&self, rays: &RaySystem) -> Result<()> {
        if self.values.len() == rays.len() {
            Ok(())
        } else {
            Err(Error::RaySystemMismatch)
        }
    }
}

/// `f(x) = ‖x‖·f(x/‖x‖)`.
pub fn ph_eval(rays: &RaySystem, f: &PhField, x: &[f64]) -> Result<f64> {
    f.check(rays)?;
    if x.len() != rays.dim {
        return Err(Error::BadDimension(format!(
            "point has {} coordinates, expected {}",
            x.len(),
            rays.dim
        )));
    }
    if x.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let (i, r) = rays.locate(x)?;
    Ok(r * f.values[i])
}

/// Supremum over `t ∈ [0, 1]` of `|(1−t)a − t·b| / ‖(1−t)u − t·v‖`.
///
/// The value is the largest difference quotient of the ph function between
/// the rays through `u` and `v`; the endpoints give `|a|` and `|b|`.
pub fn pair_sup(u: &[f64], v: &[f64], a: f64, b: f64, norm: NormKind) -> Result<Maximum> {
    if u.len() != v.len() {
        return Err(Error::BadDimension("pair directions differ in dimension".into()));
    }
    if norm.dist(u, v) <= UNIT_TOL {
        return Err(Error::DegeneratePair);
    }
    let p = u.to_vec();
    let q = combine(1.0, u, 1.0, v);
    let s = a + b;
    let ratio = |t: f64| -> f64 {
        let num = (a - t * s).abs();
        let den = norm.norm(&combine(1.0, &p, -t, &q));
        num / den
    };
    let mut best = Maximum {
        at: 0.0,
        value: ratio(0.0),
    }
    .max(Maximum {
        at: 1.0,
        value: ratio(1.0),
    });
    if a == 0.0 && b == 0.0 {
        return Ok(best);
    }
    for t in critical_points(&p, &q, a, s, norm) {
        if (0.0..=1.0).contains(&t) {
            best = best.max(Maximum {
                at: t,
                value: ratio(t),
            });
        }
    }
    Ok(best.max(maximize(ratio, 0.0, 1.0)))
}

// Closed-form candidates for the ratio's maximum: the single stationary point
// for l2, the breakpoints of the piecewise-linear denominator otherwise.
fn critical_points(p: &[f64], q: &[f64], a: f64, s: f64, norm: NormKind) -> Vec<f64> {
    let mut out = Vec::new();
    match norm {
        NormKind::L2 => {
            let pp: f64 = p.iter().map(|x| x * x).sum();
            let pq: f64 = p.iter().zip(q).map(|(x, y)| x * y).sum();
            let qq: f64 = q.iter().map(|y| y * y).sum();
            let den = a * qq - s * pq;
            if den != 0.0 {
                out.push((a * pq - s * pp) / den);
            }
        }
        NormKind::L1 | NormKind::Linf => {
            for k in 0..p.len() {
                if q[k] != 0.0 {
                    out.push(p[k] / q[k]);
                }
                if norm == NormKind::Linf {
                    for l in (k + 1)..p.len() {
                        for sign in [1.0, -1.0] {
                            let dq = q[k] - sign * q[l];
                            if dq != 0.0 {
                                out.push((p[k] - sign * p[l]) / dq);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Lipschitz constant of the ph function over the cone of the ray system.
pub fn cone_lip(rays: &RaySystem, f: &PhField) -> Result<f64> {
    f.check(rays)?;
    let v = &f.values;
    let mut best = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for i in 0..rays.len() {
        for j in (i + 1)..rays.len() {
            let m = pair_sup(&rays.directions[i], &rays.directions[j], v[i], v[j], rays.norm)?;
            best = best.max(m.value);
        }
    }
    Ok(best)
}

/// Restriction to `{0} ∪ {uᵢ}`, as a field on [`RaySystem::sphere_space`].
pub fn lambda_restrict(rays: &RaySystem, f: &PhField) -> Result<(PointedSpace, ScalarField)> {
    f.check(rays)?;
    let space = rays.sphere_space()?;
    let mut values = vec![0.0];
    values.extend_from_slice(&f.values);
    Ok((space, ScalarField::new(values)?))
}

/// Homogeneous extension `x ↦ ‖x‖·g(x/‖x‖)` of a field on a sphere sample.
/// Point 0 of `space` must be the origin and all others unit vectors.
pub fn lambda_inverse(space: &PointedSpace, g: &ScalarField) -> Result<(RaySystem, PhField)> {
    g.check_aligned(space)?;
    let (norm, dim) = match space.geometry() {
        crate::metric::Geometry::Embedded { norm, dim, .. } => (*norm, *dim),
        crate::metric::Geometry::Matrix => return Err(Error::MatrixSpaceUnsupported),
    };
    let points = space.points().expect("embedded");
    if points[0].iter().any(|&v| v != 0.0) {
        return Err(Error::Malformed("the basepoint of a sphere sample must be the origin".into()));
    }
    for (i, p) in points.iter().enumerate().skip(1) {
        if (norm.norm(p) - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitSupport(i));
        }
    }
    let rays = RaySystem::new(norm, dim, points[1..].to_vec())?;
    Ok((rays, PhField::new(g.values()[1..].to_vec())?))
}

/// `f ⊙ g = (1/5)·Λ⁻¹(Λf·Λg)`, i.e. one fifth of the direction-wise product.
pub fn odot(rays: &RaySystem, f: &PhField, g: &PhField) -> Result<PhField> {
    odot_scaled(rays, f, g, ODOT_FACTOR)
}

/// Direction-wise product times `factor`; `factor = 1` gives the raw
/// product.
pub fn odot_scaled(rays: &RaySystem, f: &PhField, g: &PhField, factor: f64) -> Result<PhField> {
    f.check(rays)?;
    g.check(rays)?;
    PhField::new(
        f.values
            .iter()
            .zip(&g.values)
            .map(|(a, b)| factor * a * b)
            .collect(),
    )
}

/// Slopes this close to zero count as asymptotically tight.
const SLOPE_TOL: f64 = 8.0 * f64::EPSILON;

/// Extends ph data from the sub-cone spanned by `sub` to every ray while
/// keeping its cone Lipschitz constant.
///
/// For a direction `u` outside `sub`, the sup extension is
/// `max_{w∈sub} sup_{r≥0} (r·f(w) − L‖u − r·w‖)`; the inner supremum is
/// searched over `r = s/(1−s)` and the `s → 1` limit is added when
/// `f(w) = L`.
pub fn ph_mcshane_extend(
    rays: &RaySystem,
    sub: &[usize],
    f_sub: &[f64],
    side: crate::mcshane::Side,
) -> Result<PhField> {
    if sub.is_empty() {
        return Err(Error::EmptySubcone);
    }
    if sub.len() != f_sub.len() {
        return Err(Error::Malformed(format!(
            "{} sub-cone indices but {} values",
            sub.len(),
            f_sub.len()
        )));
    }
    for (a, i) in sub.iter().enumerate() {
        if *i >= rays.len() {
            return Err(Error::IndexOutOfRange(*i));
        }
        if sub[..a].contains(i) {
            return Err(Error::Malformed(format!("index {i} repeated")));
        }
    }
    let sign = match side {
        crate::mcshane::Side::Sup => 1.0,
        crate::mcshane::Side::Inf => -1.0,
    };
    let data: Vec<f64> = f_sub.iter().map(|v| sign * v).collect();
    let sub_rays = rays.subsystem(sub)?;
    let l = cone_lip(&sub_rays, &PhField::new(data.clone())?)?;

    let mut values = vec![0.0; rays.len()];
    for (&i, &v) in sub.iter().zip(f_sub) {
        values[i] = v;
    }
    for (k, u) in rays.directions.iter().enumerate() {
        if sub.contains(&k) {
            continue;
        }
        let mut best = f64::NEG_INFINITY;
        for (w, &fw) in sub_rays.directions.iter().zip(&data) {
            best = best.max(ray_sup(rays.norm, u, w, fw, l));
        }
        values[k] = sign * best;
    }
    PhField::new(values)
}

// sup_{r≥0} r·fw − L‖u − r·w‖, concave in r.
fn ray_sup(norm: NormKind, u: &[f64], w: &[f64], fw: f64, l: f64) -> f64 {
    if l == 0.0 {
        return 0.0;
    }
    let nw = norm.norm(w);
    let slope = fw - l * nw;
    let tight = slope >= -SLOPE_TOL * l.max(1.0);
    let h = |r: f64| r * slope.min(0.0) + l * norm.norm_gap(r, w, u);
    let limit = if tight {
        l * norm.norm_gap_limit(w, u)
    } else {
        f64::NEG_INFINITY
    };
    let objective = |s: f64| -> f64 {
        if s >= 1.0 {
            limit
        } else {
            h(s / (1.0 - s))
        }
    };
    let m = maximize(objective, 0.0, 1.0);
    m.value.max(limit).max(h(0.0))
}

/// Radial projection onto the closed unit ball.
pub fn ball_projection(x: &[f64], norm: NormKind) -> Vec<f64> {
    let n = norm.norm(x);
    if n <= 1.0 {
        x.to_vec()
    } else {
        scale(x, 1.0 / n)
    }
}

/// A positively homogeneous map between finite-dimensional normed spaces.
#[derive(Debug, Clone, PartialEq)]
pub enum PhMap {
    /// `x ↦ M x` with `M` given row by row.
    Linear {
        matrix: Vec<Vec<f64>>,
        codomain: NormKind,
    },
    /// One ph field per output coordinate, all on the same rays.
    Fields {
        rays: RaySystem,
        fields: Vec<PhField>,
        codomain: NormKind,
    },
}

impl PhMap {
    pub fn codomain(&self) -> NormKind {
        match self {
            PhMap::Linear { codomain, .. } | PhMap::Fields { codomain, .. } => *codomain,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            PhMap::Linear { matrix, .. } => matrix.len(),
            PhMap::Fields { fields, .. } => fields.len(),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            PhMap::Linear { matrix, .. } => matrix
                .iter()
                .map(|row| {
                    if row.len() != x.len() {
                        Err(Error::BadDimension("matrix width differs from input".into()))
                    } else {
                        Ok(row.iter().zip(x).map(|(m, v)| m * v).sum())
                    }
                })
                .collect(),
            PhMap::Fields { rays, fields, .. } => {
                fields.iter().map(|f| ph_eval(rays, f, x)).collect()
            }
        }
    }
}

/// `Σ aᵢ δ^{ph}_{xᵢ} ↦ Σ aᵢ δ^{ph}_{f(xᵢ)}`.
pub fn ph_pushforward(map: &PhMap, mu: &PhFreeElement) -> Result<PhFreeElement> {
    let terms = mu
        .terms
        .iter()
        .map(|t| {
            Ok(PhTerm {
                x: map.apply(&t.x)?,
                a: t.a,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PhFreeElement::new(map.codomain(), map.output_dim(), terms)
}

/// `⟨f, μ⟩ = Σ aᵢ f(xᵢ)`.
pub fn ph_pairing(rays: &RaySystem, f: &PhField, mu: &PhFreeElement) -> Result<f64> {
    if mu.norm != rays.norm || mu.dim != rays.dim {
        return Err(Error::RaySystemMismatch);
    }
    mu.terms
        .iter()
        .map(|t| Ok(t.a * ph_eval(rays, f, &t.x)?))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcshane::Side;
    use crate::metric::lip_const;

    fn plane(norm: NormKind, dirs: &[[f64; 2]]) -> RaySystem {
        RaySystem::from_vectors(norm, 2, &dirs.iter().map(|d| d.to_vec()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn eval_examples() {
        let rays = plane(NormKind::L2, &[[1.0, 0.0]]);
        let f = PhField::new(vec![3.0]).unwrap();
        assert_eq!(ph_eval(&rays, &f, &[2.0, 0.0]).unwrap(), 6.0);
        assert_eq!(ph_eval(&rays, &f, &[0.0, 0.0]).unwrap(), 0.0);
        assert!(matches!(
            ph_eval(&rays, &f, &[0.0, 1.0]),
            Err(Error::DirectionNotRepresented(_))
        ));
        let line = RaySystem::real_line();
        let g = PhField::new(vec![2.0, 1.0]).unwrap();
        assert_eq!(ph_eval(&line, &g, &[-0.5]).unwrap(), 0.5);
    }

    #[test]
    fn pair_sup_on_the_line_is_the_max_norm() {
        let m = pair_sup(&[1.0], &[-1.0], 2.0, 1.0, NormKind::L2).unwrap();
        assert_eq!(m.value, 2.0);
    }

    #[test]
    fn pair_sup_orthogonal_l2() {
        let m = pair_sup(&[1.0, 0.0], &[0.0, 1.0], 1.0, -1.0, NormKind::L2).unwrap();
        assert!((m.at - 0.5).abs() < 1e-12);
        assert!((m.value - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pair_sup_degenerate_and_zero() {
        assert_eq!(
            pair_sup(&[1.0, 0.0], &[1.0, 0.0], 1.0, 1.0, NormKind::L2).unwrap_err(),
            Error::DegeneratePair
        );
        let m = pair_sup(&[1.0, 0.0], &[0.0, 1.0], 0.0, 0.0, NormKind::L1).unwrap();
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn cone_lip_examples() {
        let line = RaySystem::real_line();
        assert_eq!(cone_lip(&line, &PhField::new(vec![2.0, 1.0]).unwrap()).unwrap(), 2.0);
        let rays = plane(NormKind::L2, &[[1.0, 0.0], [0.0, 1.0]]);
        let l = cone_lip(&rays, &PhField::new(vec![1.0, -1.0]).unwrap()).unwrap();
        assert!((l - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(cone_lip(&rays, &PhField::zero(2)).unwrap(), 0.0);
    }

    #[test]
    fn lambda_round_trip() {
        let rays = plane(NormKind::L2, &[[1.0, 0.0], [0.0, 1.0]]);
        let f = PhField::new(vec![1.0, -1.0]).unwrap();
        let (space, g) = lambda_restrict(&rays, &f).unwrap();
        assert_eq!(g.values(), &[0.0, 1.0, -1.0]);
        let (rays2, f2) = lambda_inverse(&space, &g).unwrap();
        assert_eq!(rays2, rays);
        assert_eq!(f2, f);
        let lip = lip_const(&space, &g).unwrap().value;
        let cl = cone_lip(&rays, &f).unwrap();
        assert!(lip <= cl + 1e-15 && cl <= 3.0 * lip);
    }

    #[test]
    fn lambda_on_the_line_is_tight() {
        let line = RaySystem::real_line();
        let f = PhField::new(vec![2.0, 1.0]).unwrap();
        let (space, g) = lambda_restrict(&line, &f).unwrap();
        assert_eq!(lip_const(&space, &g).unwrap().value, 2.0);
        assert_eq!(cone_lip(&line, &f).unwrap(), 2.0);
    }

    #[test]
    fn lambda_inverse_rejects_bad_samples() {
        let s = PointedSpace::embedded(NormKind::L2, 1, vec![vec![0.0], vec![2.0]]).unwrap();
        let g = ScalarField::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(lambda_inverse(&s, &g).unwrap_err(), Error::NonUnitSupport(1));
    }

    #[test]
    fn odot_examples() {
        let line = RaySystem::real_line();
        let one = PhField::new(vec![1.0, 1.0]).unwrap();
        let sq = odot(&line, &one, &one).unwrap();
        assert_eq!(sq.values(), &[0.2, 0.2]);
        assert_eq!(cone_lip(&line, &sq).unwrap(), 0.2);
        let f = PhField::new(vec![2.0, 1.0]).unwrap();
        let g = PhField::new(vec![1.0, 2.0]).unwrap();
        let p = odot(&line, &f, &g).unwrap();
        assert_eq!(p.values(), &[0.4, 0.4]);
        assert_eq!(
            odot(&line, &f, &PhField::zero(2)).unwrap().values(),
            &[0.0, 0.0]
        );
        assert_eq!(
            odot(&line, &f, &PhField::zero(3)).unwrap_err(),
            Error::RaySystemMismatch
        );
    }

    #[test]
    fn ph_extension_of_one_axis_to_the_plane() {
        let rays = plane(NormKind::L2, &[[1.0, 0.0], [0.0, 1.0]]);
        let ext = ph_mcshane_extend(&rays, &[0], &[1.0], Side::Sup).unwrap();
        assert_eq!(ext.values()[0], 1.0);
        assert!(ext.values()[1].abs() < 1e-12, "{}", ext.values()[1]);
        assert!((cone_lip(&rays, &ext).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ph_extension_trivial_cases() {
        let rays = plane(NormKind::L1, &[[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]]);
        let full = ph_mcshane_extend(&rays, &[0, 1, 2], &[0.5, -0.25, 1.0], Side::Sup).unwrap();
        assert_eq!(full.values(), &[0.5, -0.25, 1.0]);
        let zero = ph_mcshane_extend(&rays, &[1], &[0.0], Side::Inf).unwrap();
        assert!(zero.values().iter().all(|&v| v == 0.0));
        assert_eq!(
            ph_mcshane_extend(&rays, &[], &[], Side::Sup).unwrap_err(),
            Error::EmptySubcone
        );
    }

    #[test]
    fn ball_projection_examples() {
        assert_eq!(ball_projection(&[3.0, 0.0], NormKind::L2), vec![1.0, 0.0]);
        assert_eq!(ball_projection(&[0.5, 0.0], NormKind::L2), vec![0.5, 0.0]);
    }

    #[test]
    fn pushforward_rotates_a_delta() {
        let rot = PhMap::Linear {
            matrix: vec![vec![0.0, -1.0], vec![1.0, 0.0]],
            codomain: NormKind::L2,
        };
        let mu = PhFreeElement::delta(NormKind::L2, vec![1.0, 0.0]).unwrap();
        let out = ph_pushforward(&rot, &mu).unwrap();
        assert_eq!(out.terms[0].x, vec![0.0, 1.0]);
        assert!(ph_pushforward(&rot, &PhFreeElement::zero(NormKind::L2, 2))
            .unwrap()
            .terms
            .is_empty());
    }

    #[test]
    fn pushforward_through_field_map() {
        let line = RaySystem::real_line();
        let abs = PhField::new(vec![1.0, 1.0]).unwrap();
        let map = PhMap::Fields {
            rays: line,
            fields: vec![abs],
            codomain: NormKind::L2,
        };
        let mu = PhFreeElement::molecule(NormKind::L2, vec![-2.0], vec![3.0]).unwrap();
        let out = ph_pushforward(&map, &mu).unwrap();
        assert_eq!(out.terms[0].x, vec![2.0]);
        assert_eq!(out.terms[1].x, vec![3.0]);
    }

    #[test]
    fn pairing_examples() {
        let line = RaySystem::real_line();
        let abs = PhField::new(vec![1.0, 1.0]).unwrap();
        let mu = PhFreeElement::molecule(NormKind::L2, vec![2.0], vec![-1.0]).unwrap();
        assert_eq!(ph_pairing(&line, &abs, &mu).unwrap(), 1.0);
        assert_eq!(ph_pairing(&line, &PhField::zero(2), &mu).unwrap(), 0.0);
        let r = 3.5;
        let x = -0.75;
        let gen = PhFreeElement::new(
            NormKind::L2,
            1,
            vec![PhTerm { x: vec![x], a: r }, PhTerm { x: vec![r * x], a: -1.0 }],
        )
        .unwrap();
        let f = PhField::new(vec![0.3, -1.1]).unwrap();
        assert_eq!(ph_pairing(&line, &f, &gen).unwrap(), 0.0);
    }
}
