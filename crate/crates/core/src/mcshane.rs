//! McShane sup/inf extensions on finite pointed metric spaces.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{lip_of_values, PointedSpace, ScalarField};
use crate::numeric::exact;

/// Tolerance for agreement and sandwich checks.
pub const EXTENSION_TOL: f64 = 1e-12;

/// Values of a function on a subset `domain` that contains the basepoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialField {
    pub domain: Vec<usize>,
    pub values: Vec<f64>,
}

impl PartialField {
    pub fn new(domain: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let pf = PartialField { domain, values };
        pf.validate()?;
        Ok(pf)
    }

    pub fn validate(&self) -> Result<()> {
        if self.domain.len() != self.values.len() {
            return Err(Error::Malformed(format!(
                "{} domain indices but {} values",
                self.domain.len(),
                self.values.len()
            )));
        }
        let Some(pos) = self.domain.iter().position(|&i| i == PointedSpace::BASEPOINT) else {
            return Err(Error::BasepointMissing);
        };
        if self.values[pos] != 0.0 {
            return Err(Error::NonzeroAtBasepoint(self.values[pos]));
        }
        for (a, i) in self.domain.iter().enumerate() {
            if self.domain[..a].contains(i) {
                return Err(Error::Malformed(format!("index {i} repeated in domain")));
            }
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Malformed("values must be finite".into()));
        }
        Ok(())
    }

    fn check_in(&self, space: &PointedSpace) -> Result<()> {
        self.validate()?;
        match self.domain.iter().find(|&&i| i >= space.len()) {
            Some(&i) => Err(Error::IndexOutOfRange(i)),
            None => Ok(()),
        }
    }

    /// Restricts a total field to `domain`.
    pub fn from_field(f: &ScalarField, domain: Vec<usize>) -> Result<Self> {
        let values = domain
            .iter()
            .map(|&i| f.values().get(i).copied().ok_or(Error::IndexOutOfRange(i)))
            .collect::<Result<Vec<_>>>()?;
        PartialField::new(domain, values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Sup,
    Inf,
}

/// Lipschitz constant of the partial field over its own domain.
pub fn partial_lip(space: &PointedSpace, pf: &PartialField) -> Result<f64> {
    pf.check_in(space)?;
    let sub = space.restrict(&pf.domain)?;
    let order = crate::metric::restriction_order(&pf.domain)?;
    let vals: Vec<f64> = order.iter().map(|i| value_at(pf, *i)).collect();
    Ok(lip_of_values(&sub, &vals).value)
}

fn value_at(pf: &PartialField, i: usize) -> f64 {
    let k = pf.domain.iter().position(|&d| d == i).expect("index in domain");
    pf.values[k]
}

/// `F(x) = max_{y∈E} (f(y) − L·d(x,y))` with `L` the Lipschitz constant of
/// the data.
pub fn mcshane_sup(space: &PointedSpace, pf: &PartialField) -> Result<ScalarField> {
    mcshane(space, pf, Side::Sup, None)
}

/// `G(x) = min_{y∈E} (f(y) + L·d(x,y))`.
pub fn mcshane_inf(space: &PointedSpace, pf: &PartialField) -> Result<ScalarField> {
    mcshane(space, pf, Side::Inf, None)
}

/// Either extension with an optional admissible constant `lip ≥ L`.
pub fn mcshane(
    space: &PointedSpace,
    pf: &PartialField,
    side: Side,
    lip: Option<f64>,
) -> Result<ScalarField> {
    let own = partial_lip(space, pf)?;
    let l = match lip {
        Some(l) if l + EXTENSION_TOL < own => {
            return Err(Error::Malformed(format!(
                "constant {l} is below the data's Lipschitz constant {own}"
            )))
        }
        Some(l) => l.max(own),
        None => own,
    };
    let mut out = vec![0.0; space.len()];
    for (x, slot) in out.iter_mut().enumerate() {
        if let Some(k) = pf.domain.iter().position(|&d| d == x) {
            *slot = pf.values[k];
            continue;
        }
        // Strict comparison keeps the lowest domain position on ties.
        let mut best: Option<f64> = None;
        for (&y, &fy) in pf.domain.iter().zip(&pf.values) {
            let cand = match side {
                Side::Sup => fy - l * space.d(x, y),
                Side::Inf => fy + l * space.d(x, y),
            };
            best = Some(match (best, side) {
                (None, _) => cand,
                (Some(b), Side::Sup) if cand > b => cand,
                (Some(b), Side::Inf) if cand < b => cand,
                (Some(b), _) => b,
            });
        }
        *slot = best.expect("domain contains the basepoint");
    }
    ScalarField::new(out)
}

/// Both extensions in exact arithmetic over the rational images of the
/// cached distances and the data.
pub fn mcshane_exact(space: &PointedSpace, pf: &PartialField, side: Side) -> Result<Vec<BigRational>> {
    pf.check_in(space)?;
    let vals: Vec<BigRational> = pf.values.iter().map(|&v| exact(v)).collect();
    let mut l = BigRational::zero();
    for a in 0..pf.domain.len() {
        for b in (a + 1)..pf.domain.len() {
            let d = exact(space.d(pf.domain[a], pf.domain[b]));
            let q = num_traits::Signed::abs(&(&vals[a] - &vals[b])) / d;
            if q > l {
                l = q;
            }
        }
    }
    let mut out = Vec::with_capacity(space.len());
    for x in 0..space.len() {
        if let Some(k) = pf.domain.iter().position(|&d| d == x) {
            out.push(vals[k].clone());
            continue;
        }
        let mut best: Option<BigRational> = None;
        for (&y, fy) in pf.domain.iter().zip(&vals) {
            let dl = &l * exact(space.d(x, y));
            let cand = match side {
                Side::Sup => fy - dl,
                Side::Inf => fy + dl,
            };
            best = Some(match best {
                None => cand,
                Some(b) => match side {
                    Side::Sup if cand > b => cand,
                    Side::Inf if cand < b => cand,
                    _ => b,
                },
            });
        }
        out.push(best.expect("nonempty domain"));
    }
    Ok(out)
}

/// True iff `mcshane_sup ≤ h ≤ mcshane_inf` pointwise.
pub fn is_extremal_sandwich(space: &PointedSpace, pf: &PartialField, h: &ScalarField) -> Result<bool> {
    h.check_aligned(space)?;
    let l = partial_lip(space, pf)?;
    for (&i, &v) in pf.domain.iter().zip(&pf.values) {
        if (h.values()[i] - v).abs() > EXTENSION_TOL * (1.0 + v.abs()) {
            return Err(Error::NotAnExtension(format!(
                "h({i}) = {} but the data says {v}",
                h.values()[i]
            )));
        }
    }
    let lh = lip_of_values(space, h.values()).value;
    if lh > l + EXTENSION_TOL * (1.0 + l) {
        return Err(Error::NotAnExtension(format!(
            "Lipschitz constant {lh} exceeds {l}"
        )));
    }
    let lo = mcshane_sup(space, pf)?;
    let hi = mcshane_inf(space, pf)?;
    Ok(h.values()
        .iter()
        .zip(lo.values().iter().zip(hi.values()))
        .all(|(&v, (&a, &b))| {
            a - EXTENSION_TOL * (1.0 + a.abs()) <= v && v <= b + EXTENSION_TOL * (1.0 + b.abs())
        }))
}
