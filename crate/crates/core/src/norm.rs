//! Finite-dimensional norms and the vector helpers built on them.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormKind {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "l2")]
    L2,
    #[serde(rename = "linf")]
    Linf,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::L1, NormKind::L2, NormKind::Linf];

    pub fn norm(self, x: &[f64]) -> f64 {
        match self {
            NormKind::L1 => x.iter().map(|v| v.abs()).sum(),
            NormKind::L2 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::Linf => x.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }

    pub fn dist(self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            NormKind::L1 => x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum(),
            NormKind::L2 => x
                .iter()
                .zip(y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt(),
            NormKind::Linf => x.iter().zip(y).fold(0.0, |m, (a, b)| m.max((a - b).abs())),
        }
    }

    /// `r·‖w‖ − ‖r·w − u‖`, evaluated without the cancellation that the
    /// direct difference suffers for large `r`.
    pub fn norm_gap(self, r: f64, w: &[f64], u: &[f64]) -> f64 {
        match self {
            NormKind::L2 => {
                let nw = self.norm(w);
                let far = w
                    .iter()
                    .zip(u)
                    .map(|(a, b)| (r * a - b) * (r * a - b))
                    .sum::<f64>()
                    .sqrt();
                let denom = r * nw + far;
                if denom == 0.0 {
                    return 0.0;
                }
                let dot: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
                let nu2: f64 = u.iter().map(|b| b * b).sum();
                (2.0 * r * dot - nu2) / denom
            }
            NormKind::L1 => w
                .iter()
                .zip(u)
                .map(|(&a, &b)| coord_gap(r, a, b, a.abs()))
                .sum(),
            NormKind::Linf => {
                let nw = self.norm(w);
                w.iter()
                    .zip(u)
                    .map(|(&a, &b)| r * (nw - a.abs()) + coord_gap(r, a, b, a.abs()))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Limit of [`NormKind::norm_gap`] as `r → ∞`; minus the one-sided
    /// directional derivative of the norm at `w` in direction `−u`.
    pub fn norm_gap_limit(self, w: &[f64], u: &[f64]) -> f64 {
        match self {
            NormKind::L2 => {
                let dot: f64 = w.iter().zip(u).map(|(a, b)| a * b).sum();
                dot / self.norm(w)
            }
            NormKind::L1 => w
                .iter()
                .zip(u)
                .map(|(&a, &b)| if a == 0.0 { -b.abs() } else { a.signum() * b })
                .sum(),
            NormKind::Linf => {
                let nw = self.norm(w);
                w.iter()
                    .zip(u)
                    .filter(|(a, _)| a.abs() == nw)
                    .map(|(&a, &b)| a.signum() * b)
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

// r|a| − |r a − b|, rationalized.
fn coord_gap(r: f64, a: f64, b: f64, abs_a: f64) -> f64 {
    let far = (r * a - b).abs();
    let denom = r * abs_a + far;
    if denom == 0.0 {
        0.0
    } else {
        (2.0 * r * a * b - b * b) / denom
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::L1 => "l1",
            NormKind::L2 => "l2",
            NormKind::Linf => "linf",
        })
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "l1" => Ok(NormKind::L1),
            "l2" => Ok(NormKind::L2),
            "linf" => Ok(NormKind::Linf),
            other => Err(Error::Malformed(format!("unknown norm {other:?}"))),
        }
    }
}

pub(crate) fn scale(x: &[f64], s: f64) -> Vec<f64> {
    x.iter().map(|v| v * s).collect()
}

pub(crate) fn combine(a: f64, x: &[f64], b: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(p, q)| a * p + b * q).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norms_of_a_simple_vector() {
        let x = [3.0, -4.0];
        assert_eq!(NormKind::L1.norm(&x), 7.0);
        assert_eq!(NormKind::L2.norm(&x), 5.0);
        assert_eq!(NormKind::Linf.norm(&x), 4.0);
    }

    #[test]
    fn norm_gap_matches_direct_difference_at_moderate_r() {
        let w = [0.6, 0.8];
        let u = [0.0, 1.0];
        for norm in NormKind::ALL {
            let nw = norm.norm(&w);
            let w: Vec<f64> = w.iter().map(|v| v / nw).collect();
            for r in [0.0, 0.3, 1.0, 2.5, 10.0] {
                let direct = r * norm.norm(&w) - norm.dist(&scale(&w, r), &u);
                let stable = norm.norm_gap(r, &w, &u);
                assert!((direct - stable).abs() < 1e-12, "{norm} r={r}");
            }
        }
    }

    #[test]
    fn norm_gap_approaches_its_limit() {
        let w = [1.0, 0.0];
        let u = [0.6, -0.8];
        for norm in NormKind::ALL {
            let lim = norm.norm_gap_limit(&w, &u);
            let far = norm.norm_gap(1e9, &w, &u);
            assert!((lim - far).abs() < 1e-8, "{norm}: {lim} vs {far}");
        }
    }

    #[test]
    fn parse_round_trip() {
        for n in NormKind::ALL {
            assert_eq!(n.to_string().parse::<NormKind>().unwrap(), n);
        }
        assert!("l3".parse::<NormKind>().is_err());
    }
}
