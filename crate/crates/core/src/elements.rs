//! Finitely supported elements of the free spaces: signed combinations of
//! point evaluations, and of their positively homogeneous counterparts.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::metric::{PointedSpace, ScalarField};
use crate::norm::NormKind;

/// Two unit vectors closer than this are treated as the same direction.
pub const DIRECTION_TOL: f64 = 1e-9;

/// `Σ aᵢ δ_{xᵢ}` over point indices of a [`PointedSpace`], in canonical
/// form: indices sorted and distinct, no basepoint term, no zero
/// coefficient.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FreeElement {
    terms: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeTerm {
    pub point: usize,
    pub a: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeElementFile {
    pub terms: Vec<FreeTerm>,
}

impl FreeElement {
    pub fn new(terms: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut raw: Vec<(usize, f64)> = terms.into_iter().collect();
        raw.sort_by_key(|t| t.0);
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(raw.len());
        for (i, a) in raw {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 += a,
                _ => out.push((i, a)),
            }
        }
        out.retain(|&(i, a)| i != PointedSpace::BASEPOINT && a != 0.0);
        FreeElement { terms: out }
    }

    pub fn delta(i: usize) -> Self {
        FreeElement::new([(i, 1.0)])
    }

    /// `δ_x − δ_y`.
    pub fn molecule(x: usize, y: usize) -> Self {
        FreeElement::new([(x, 1.0), (y, -1.0)])
    }

    pub fn terms(&self) -> &[(usize, f64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, i: usize) -> f64 {
        self.terms
            .iter()
            .find(|t| t.0 == i)
            .map_or(0.0, |t| t.1)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        FreeElement::new(self.terms.iter().map(|&(i, a)| (i, alpha * a)))
    }

    pub fn add(&self, other: &FreeElement) -> Self {
        FreeElement::new(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn check_in(&self, space: &PointedSpace) -> Result<()> {
        match self.terms.iter().find(|t| t.0 >= space.len()) {
            Some(t) => Err(Error::IndexOutOfRange(t.0)),
            None => Ok(()),
        }
    }

    pub fn to_file(&self) -> FreeElementFile {
        FreeElementFile {
            terms: self
                .terms
                .iter()
                .map(|&(point, a)| FreeTerm { point, a })
                .collect(),
        }
    }

    pub fn from_file(file: &FreeElementFile) -> Result<Self> {
        if file.terms.iter().any(|t| !t.a.is_finite()) {
            return Err(Error::Malformed("coefficients must be finite".into()));
        }
        Ok(FreeElement::new(file.terms.iter().map(|t| (t.point, t.a))))
    }
}

/// `μ(f) = Σ aᵢ f(xᵢ)`.
pub fn eval_pairing(space: &PointedSpace, f: &ScalarField, mu: &FreeElement) -> Result<f64> {
    f.check_aligned(space)?;
    mu.check_in(space)?;
    Ok(mu.terms.iter().map(|&(i, a)| a * f.values()[i]).sum())
}

/// `β(μ) = Σ aᵢ xᵢ` for an embedded space.
pub fn barycenter(space: &PointedSpace, mu: &FreeElement) -> Result<Vec<f64>> {
    let points = space.points().ok_or(Error::MatrixSpaceUnsupported)?;
    mu.check_in(space)?;
    let mut out = vec![0.0; points[0].len()];
    for &(i, a) in &mu.terms {
        for (o, p) in out.iter_mut().zip(&points[i]) {
            *o += a * p;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhTerm {
    pub x: Vec<f64>,
    pub a: f64,
}

/// `Σ aᵢ δ^{ph}_{xᵢ}` for points of a normed space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhFreeElement {
    pub norm: NormKind,
    pub dim: usize,
    pub terms: Vec<PhTerm>,
}

/// Per-direction weights `wᵢ = Σ a·r` over the terms `a·δ^{ph}_{r·uᵢ}`,
/// directions sorted lexicographically.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPh {
    pub norm: NormKind,
    pub directions: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl PhFreeElement {
    /// Validates dimensions and drops terms at the origin.
    pub fn new(norm: NormKind, dim: usize, terms: Vec<PhTerm>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension("dimension must be positive".into()));
        }
        for (k, t) in terms.iter().enumerate() {
            if t.x.len() != dim {
                return Err(Error::BadDimension(format!(
                    "term {k} has {} coordinates, expected {dim}",
                    t.x.len()
                )));
            }
            if !t.a.is_finite() || t.x.iter().any(|v| !v.is_finite()) {
                return Err(Error::Malformed(format!("term {k} is not finite")));
            }
        }
        let terms = terms
            .into_iter()
            .filter(|t| t.x.iter().any(|&v| v != 0.0))
            .collect();
        Ok(PhFreeElement { norm, dim, terms })
    }

    pub fn zero(norm: NormKind, dim: usize) -> Self {
        PhFreeElement {
            norm,
            dim,
            terms: Vec::new(),
        }
    }

    pub fn delta(norm: NormKind, x: Vec<f64>) -> Result<Self> {
        let dim = x.len();
        PhFreeElement::new(norm, dim, vec![PhTerm { x, a: 1.0 }])
    }

    /// `δ^{ph}_x − δ^{ph}_y`.
    pub fn molecule(norm: NormKind, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let dim = x.len();
        PhFreeElement::new(norm, dim, vec![PhTerm { x, a: 1.0 }, PhTerm { x: y, a: -1.0 }])
    }

    /// Merges collinear support points into one weight per direction.
    pub fn reduced(&self) -> ReducedPh {
        let mut directions: Vec<Vec<f64>> = Vec::new();
        let mut weights: Vec<f64> = Vec::new();
        let mut mass = 0.0;
        for t in &self.terms {
            let r = self.norm.norm(&t.x);
            if r == 0.0 {
                continue;
            }
            let u: Vec<f64> = t.x.iter().map(|v| v / r).collect();
            let w = t.a * r;
            mass += w.abs();
            match directions
                .iter()
                .position(|d| self.norm.dist(d, &u) <= DIRECTION_TOL)
            {
                Some(k) => weights[k] += w,
                None => {
                    directions.push(u);
                    weights.push(w);
                }
            }
        }
        let floor = 8.0 * f64::EPSILON * mass;
        let mut kept: Vec<(Vec<f64>, f64)> = directions
            .into_iter()
            .zip(weights)
            .filter(|(_, w)| w.abs() > floor)
            .collect();
        kept.sort_by(|a, b| lex_cmp(&a.0, &b.0));
        let (directions, weights) = kept.into_iter().unzip();
        ReducedPh {
            norm: self.norm,
            directions,
            weights,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().weights.is_empty()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        PhFreeElement {
            norm: self.norm,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| PhTerm {
                    x: t.x.clone(),
                    a: alpha * t.a,
                })
                .collect(),
        }
    }
}

pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}
