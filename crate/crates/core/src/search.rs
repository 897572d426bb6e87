//! One-dimensional maximization: a uniform grid followed by ternary
//! refinement around the best grid cell. The objective is not assumed
//! unimodal on the whole interval.

pub const GRID_POINTS: usize = 1025;
pub const REFINE_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub at: f64,
    pub value: f64,
}

impl Maximum {
    /// Keeps `self` unless `other` is strictly larger.
    pub fn max(self, other: Maximum) -> Maximum {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

/// Best point found for `f` on `[lo, hi]`. `f` may return `-inf` where it
/// is undefined.
pub fn maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> Maximum {
    let cells = (GRID_POINTS - 1) as f64;
    let at = |k: usize| {
        if k == GRID_POINTS - 1 {
            hi
        } else {
            lo + (hi - lo) * (k as f64 / cells)
        }
    };
    let mut best_k = 0;
    let mut best = Maximum {
        at: lo,
        value: f(lo),
    };
    for k in 1..GRID_POINTS {
        let t = at(k);
        let v = f(t);
        if v > best.value || best.value.is_nan() {
            best = Maximum { at: t, value: v };
            best_k = k;
        }
    }
    let mut a = at(best_k.saturating_sub(1));
    let mut b = at((best_k + 1).min(GRID_POINTS - 1));
    while b - a > REFINE_WIDTH {
        let m1 = a + (b - a) / 3.0;
        let m2 = b - (b - a) / 3.0;
        if f(m1) < f(m2) {
            a = m1;
        } else {
            b = m2;
        }
        if m1 == a && m2 == b {
            break;
        }
    }
    let mid = 0.5 * (a + b);
    best.max(Maximum {
        at: mid,
        value: f(mid),
    })
}
