//! Scalar abstraction shared by the floating-point and exact solvers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Environment switch for exact arithmetic in eligible linear programs.
pub const RATIONAL_ENV: &str = "CONELIP_RATIONAL";
/// Largest variable count solved exactly when rational mode is requested.
pub const RATIONAL_MAX_VARS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Arithmetic {
    #[default]
    Float,
    Rational,
}

impl Arithmetic {
    /// `Rational` when `CONELIP_RATIONAL=1`.
    pub fn from_env() -> Self {
        match std::env::var(RATIONAL_ENV) {
            Ok(v) if v.trim() == "1" => Arithmetic::Rational,
            _ => Arithmetic::Float,
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Anything within `eps` of zero is treated as zero.
    fn eps() -> Self;
    /// Smallest magnitude accepted as a pivot.
    fn pivot_eps() -> Self;
    /// Infeasibility a basic variable may pick up in the ratio test.
    fn feas_eps() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;

    fn is_pos(&self) -> bool {
        *self > Self::eps()
    }
    fn is_neg(&self) -> bool {
        *self < -Self::eps()
    }
}

impl Scalar for f64 {
    fn eps() -> Self {
        1e-11
    }
    fn pivot_eps() -> Self {
        1e-9
    }
    fn feas_eps() -> Self {
        1e-11
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Scalar for BigRational {
    fn eps() -> Self {
        BigRational::zero()
    }
    fn pivot_eps() -> Self {
        BigRational::zero()
    }
    fn feas_eps() -> Self {
        BigRational::zero()
    }
    fn from_f64(x: f64) -> Self {
        exact(x)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

/// Exact rational value of a finite double.
pub fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Rank of a dense row-major matrix by Gaussian elimination with partial
/// pivoting; entries below `tol` (relative to the largest entry) count as 0.
pub fn rank(rows: &[Vec<f64>], tol: f64) -> usize {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let m = a.len();
    if m == 0 {
        return 0;
    }
    let n = a[0].len();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |s, v| s.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let (p, pv) = (r..m)
            .map(|i| (i, a[i][c].abs()))
            .fold((r, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pv <= tol * scale {
            continue;
        }
        a.swap(r, p);
        for i in (r + 1)..m {
            let factor = a[i][c] / a[r][c];
            if factor != 0.0 {
                for k in c..n {
                    a[i][k] -= factor * a[r][k];
                }
            }
        }
        r += 1;
    }
    r
}
