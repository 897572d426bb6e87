//! Finite pointed metric spaces, sampled scalar fields on them, and exact
//! Lipschitz constants.
//!
//! The basepoint is always index 0. Distances are computed once when a
//! space is built and every downstream operation reads that cache.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::NormKind;
use crate::numeric::exact;

/// Absolute slack allowed on the triangle inequality.
pub const METRIC_TOL: f64 = 1e-12;
/// Points closer than this are rejected as duplicates.
pub const DUPLICATE_TOL: f64 = 1e-12;

/// On-disk description of a space; see [`PointedSpace::from_spec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpaceSpec {
    Points {
        norm: NormKind,
        dim: usize,
        points: Vec<Vec<f64>>,
    },
    Matrix {
        dist: Vec<Vec<f64>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Embedded {
        norm: NormKind,
        dim: usize,
        points: Vec<Vec<f64>>,
    },
    Matrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointedSpace {
    geometry: Geometry,
    n: usize,
    dist: Vec<f64>,
}

impl PointedSpace {
    pub const BASEPOINT: usize = 0;

    pub fn from_spec(spec: SpaceSpec) -> Result<Self> {
        match spec {
            SpaceSpec::Points { norm, dim, points } => Self::embedded(norm, dim, points),
            SpaceSpec::Matrix { dist } => Self::from_matrix(dist),
        }
    }

    pub fn embedded(norm: NormKind, dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension("dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::BadDimension("a space needs at least its basepoint".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::BadDimension(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::Malformed(format!("point {i} is not finite")));
            }
        }
        let n = points.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = norm.dist(&points[i], &points[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        let space = PointedSpace {
            geometry: Geometry::Embedded { norm, dim, points },
            n,
            dist,
        };
        space.check_separation()?;
        Ok(space)
    }

    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::BadDimension("empty distance matrix".into()));
        }
        let mut dist = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::BadDimension(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) = {d}")));
                }
            }
            dist.extend_from_slice(row);
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::InvalidMetric(format!("d({i},{i}) is not zero")));
            }
            for j in (i + 1)..n {
                if dist[i * n + j] != dist[j * n + i] {
                    return Err(Error::InvalidMetric(format!("d({i},{j}) is not symmetric")));
                }
            }
        }
        let space = PointedSpace {
            geometry: Geometry::Matrix,
            n,
            dist,
        };
        space.check_separation()?;
        space.check_triangle()?;
        Ok(space)
    }

    fn check_separation(&self) -> Result<()> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.d(i, j) < DUPLICATE_TOL {
                    return Err(Error::DuplicatePoint(i, j));
                }
            }
        }
        Ok(())
    }

    // Norm-induced distances satisfy the triangle inequality already.
    fn check_triangle(&self) -> Result<()> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                for k in 0..self.n {
                    if k == i || k == j {
                        continue;
                    }
                    if self.d(i, j) > self.d(i, k) + self.d(k, j) + METRIC_TOL {
                        return Err(Error::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn points(&self) -> Option<&[Vec<f64>]> {
        match &self.geometry {
            Geometry::Embedded { points, .. } => Some(points),
            Geometry::Matrix => None,
        }
    }

    pub fn norm_kind(&self) -> Option<NormKind> {
        match &self.geometry {
            Geometry::Embedded { norm, .. } => Some(*norm),
            Geometry::Matrix => None,
        }
    }

    pub fn distance_matrix(&self) -> Vec<Vec<f64>> {
        self.dist.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn to_spec(&self) -> SpaceSpec {
        match &self.geometry {
            Geometry::Embedded { norm, dim, points } => SpaceSpec::Points {
                norm: *norm,
                dim: *dim,
                points: points.clone(),
            },
            Geometry::Matrix => SpaceSpec::Matrix {
                dist: self.distance_matrix(),
            },
        }
    }

    /// Sub-space on `subset`; distances are copied from the cache, not
    /// recomputed. The basepoint moves to the front, the other indices keep
    /// their given order (see [`restriction_order`]).
    pub fn restrict(&self, subset: &[usize]) -> Result<PointedSpace> {
        let subset = restriction_order(subset)?;
        for (a, &i) in subset.iter().enumerate() {
            if i >= self.n {
                return Err(Error::IndexOutOfRange(i));
            }
            if subset[..a].contains(&i) {
                return Err(Error::Malformed(format!("index {i} repeated")));
            }
        }
        let m = subset.len();
        let mut dist = vec![0.0; m * m];
        for (a, &i) in subset.iter().enumerate() {
            for (b, &j) in subset.iter().enumerate() {
                dist[a * m + b] = self.d(i, j);
            }
        }
        let geometry = match &self.geometry {
            Geometry::Embedded { norm, dim, points } => Geometry::Embedded {
                norm: *norm,
                dim: *dim,
                points: subset.iter().map(|&i| points[i].clone()).collect(),
            },
            Geometry::Matrix => Geometry::Matrix,
        };
        Ok(PointedSpace { geometry, n: m, dist })
    }
}

/// Order of the original indices inside a restricted space.
pub fn restriction_order(subset: &[usize]) -> Result<Vec<usize>> {
    if !subset.contains(&PointedSpace::BASEPOINT) {
        return Err(Error::BasepointMissing);
    }
    let mut order = vec![PointedSpace::BASEPOINT];
    order.extend(subset.iter().copied().filter(|&i| i != PointedSpace::BASEPOINT));
    Ok(order)
}

/// A real function sampled on every point of a space, zero at the basepoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField {
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        match values.first() {
            None => Err(Error::Malformed("a field needs at least the basepoint value".into())),
            Some(&v) if v != 0.0 => Err(Error::NonzeroAtBasepoint(v)),
            Some(_) => {
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Malformed("field values must be finite".into()));
                }
                Ok(ScalarField { values })
            }
        }
    }

    pub fn zero(n: usize) -> Self {
        ScalarField {
            values: vec![0.0; n.max(1)],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_aligned(&self, space: &PointedSpace) -> Result<()> {
        if self.values.len() == space.len() {
            Ok(())
        } else {
            Err(Error::MisalignedField {
                expected: space.len(),
                got: self.values.len(),
            })
        }
    }

    pub fn restrict(&self, subset: &[usize]) -> Result<ScalarField> {
        let values = restriction_order(subset)?
            .iter()
            .map(|&i| self.values.get(i).copied().ok_or(Error::IndexOutOfRange(i)))
            .collect::<Result<Vec<_>>>()?;
        ScalarField::new(values)
    }

    pub fn scaled(&self, alpha: f64) -> ScalarField {
        ScalarField {
            values: self.values.iter().map(|v| alpha * v).collect(),
        }
    }

    /// `self + alpha·other`.
    pub fn axpy(&self, alpha: f64, other: &ScalarField) -> Result<ScalarField> {
        if self.len() != other.len() {
            return Err(Error::MisalignedField {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(ScalarField {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipConst {
    pub value: f64,
    /// Lowest-index pair attaining the maximum; `None` for spaces with a
    /// single point.
    pub pair: Option<(usize, usize)>,
}

/// Largest difference quotient over all pairs of distinct points.
pub fn lip_const(space: &PointedSpace, f: &ScalarField) -> Result<LipConst> {
    f.check_aligned(space)?;
    Ok(lip_of_values(space, f.values()))
}

pub(crate) fn lip_of_values(space: &PointedSpace, v: &[f64]) -> LipConst {
    let n = space.len();
    let mut best = LipConst {
        value: 0.0,
        pair: None,
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let q = (v[i] - v[j]).abs() / space.d(i, j);
            if best.pair.is_none() || q > best.value {
                best = LipConst {
                    value: q,
                    pair: Some((i, j)),
                };
            }
        }
    }
    best
}

/// Exact Lipschitz constant of `values` over the rational images of the
/// cached distances.
pub fn lip_const_exact(space: &PointedSpace, values: &[BigRational]) -> BigRational {
    let n = space.len();
    let dist: Vec<BigRational> = (0..n * n).map(|k| exact(space.dist[k])).collect();
    let mut best = BigRational::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let q = (&values[i] - &values[j]).abs() / &dist[i * n + j];
            if q > best {
                best = q;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> PointedSpace {
        PointedSpace::embedded(NormKind::L2, 1, xs.iter().map(|&x| vec![x]).collect()).unwrap()
    }

    #[test]
    fn build_from_points() {
        let s = line(&[0.0, 1.0, 2.0]);
        assert_eq!(s.d(0, 2), 2.0);
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn build_two_point_matrix() {
        let s = PointedSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(s.d(1, 0), 1.0);
    }

    #[test]
    fn triangle_violation_is_reported() {
        let err = PointedSpace::from_matrix(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 1.0],
            vec![3.0, 1.0, 0.0],
        ])
        .unwrap_err();
        assert_eq!(err, Error::TriangleViolation { i: 0, j: 2, k: 1 });
    }

    #[test]
    fn duplicates_and_dimensions_are_rejected() {
        assert_eq!(
            PointedSpace::embedded(NormKind::L1, 1, vec![vec![0.0], vec![1.0], vec![1.0]])
                .unwrap_err(),
            Error::DuplicatePoint(1, 2)
        );
        assert!(matches!(
            PointedSpace::embedded(NormKind::L1, 2, vec![vec![0.0, 0.0], vec![1.0]]),
            Err(Error::BadDimension(_))
        ));
        assert!(matches!(
            PointedSpace::from_matrix(vec![vec![0.0, 1.0]]),
            Err(Error::BadDimension(_))
        ));
    }

    #[test]
    fn lip_of_identity_and_zero() {
        let s = line(&[0.0, 1.0, 2.0]);
        let id = ScalarField::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(lip_const(&s, &id).unwrap().value, 1.0);
        assert_eq!(lip_const(&s, &ScalarField::zero(3)).unwrap().value, 0.0);
    }

    #[test]
    fn lip_reports_maximizing_pair() {
        let s = line(&[0.0, 1.0, 2.0]);
        let f = ScalarField::new(vec![0.0, -1.0, 0.0]).unwrap();
        let l = lip_const(&s, &f).unwrap();
        assert_eq!(l.value, 1.0);
        assert_eq!(l.pair, Some((0, 1)));
    }

    #[test]
    fn misaligned_field() {
        let s = line(&[0.0, 1.0]);
        let f = ScalarField::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(lip_const(&s, &f), Err(Error::MisalignedField { .. })));
    }

    #[test]
    fn field_must_vanish_at_basepoint() {
        assert_eq!(
            ScalarField::new(vec![1.0, 0.0]).unwrap_err(),
            Error::NonzeroAtBasepoint(1.0)
        );
    }

    #[test]
    fn restrict_copies_distances() {
        let s = line(&[0.0, 1.0, 2.0]);
        let r = s.restrict(&[0, 1]).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r.d(0, 1), 1.0);
        assert_eq!(s.restrict(&[0, 1, 2]).unwrap(), s);
        assert_eq!(s.restrict(&[1, 2]).unwrap_err(), Error::BasepointMissing);
    }

    #[test]
    fn restrict_embedded_plane_is_principal_submatrix() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 4.0]];
        let s = PointedSpace::embedded(NormKind::L2, 2, pts.clone()).unwrap();
        let r = s.restrict(&[0, 2, 3]).unwrap();
        let idx = [0, 2, 3];
        for a in 0..3 {
            for b in 0..3 {
                let direct = NormKind::L2.dist(&pts[idx[a]], &pts[idx[b]]);
                assert_eq!(r.d(a, b), direct);
            }
        }
        assert_eq!(r.d(1, 2), 13f64.sqrt());
    }

    #[test]
    fn spec_round_trip_through_json() {
        let text = r#"{"kind":"points","norm":"l2","dim":2,"points":[[0,0],[1,0],[0,1]]}"#;
        let spec: SpaceSpec = serde_json::from_str(text).unwrap();
        let s = PointedSpace::from_spec(spec).unwrap();
        assert_eq!(s.d(1, 2), 2f64.sqrt());
        let m: SpaceSpec = serde_json::from_str(r#"{"kind":"matrix","dist":[[0,2],[2,0]]}"#).unwrap();
        assert_eq!(PointedSpace::from_spec(m).unwrap().d(0, 1), 2.0);
    }
}
