//! Seeded random instances.
//!
//! Every case draws from its own `SplitMix64` stream. The stream for case
//! `index` of suite `name` under run seed `seed` starts from
//!
//! ```text
//! s = SplitMix64(seed).next_u64()
//!     ^ rotl(fnv1a64(name), 17)
//!     ^ index * 0x9E3779B97F4A7C15
//! ```
//!
//! so any single case can be regenerated without running the others.

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::cone::{PhField, RaySystem};
use crate::elements::FreeElement;
use crate::metric::{PointedSpace, ScalarField};
use crate::norm::NormKind;

pub type CaseRng = SplitMix64;

fn fnv1a64(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

pub fn case_seed(seed: u64, suite: &str, index: usize) -> u64 {
    let head = SplitMix64::seed_from_u64(seed).next_u64();
    head ^ fnv1a64(suite).rotate_left(17) ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

pub fn case_rng(seed: u64, suite: &str, index: usize) -> CaseRng {
    SplitMix64::seed_from_u64(case_seed(seed, suite, index))
}

pub fn norm(rng: &mut CaseRng) -> NormKind {
    NormKind::ALL[rng.gen_range(0..3)]
}

pub fn vector(rng: &mut CaseRng, dim: usize, half_width: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-half_width..=half_width)).collect()
}

/// A unit vector for `norm`, from a box sample rejected near the origin.
pub fn unit(rng: &mut CaseRng, dim: usize, norm: NormKind) -> Vec<f64> {
    loop {
        let x = vector(rng, dim, 1.0);
        let n = norm.norm(&x);
        if n > 0.1 {
            return x.into_iter().map(|v| v / n).collect();
        }
    }
}

/// `n` random points in `[-3, 3]^dim`.
pub fn point_space(rng: &mut CaseRng, n: usize, dim: usize, norm: NormKind) -> PointedSpace {
    loop {
        let points = (0..n).map(|_| vector(rng, dim, 3.0)).collect();
        if let Ok(s) = PointedSpace::embedded(norm, dim, points) {
            return s;
        }
    }
}

/// Points with coordinates on the lattice `step·ℤ` inside `[-4, 4]^dim`;
/// in l1 or l∞ all distances are exact dyadic or integer values.
pub fn lattice_space(
    rng: &mut CaseRng,
    n: usize,
    dim: usize,
    norm: NormKind,
    step: f64,
) -> PointedSpace {
    let k = (4.0 / step) as i64;
    loop {
        let points = (0..n)
            .map(|_| (0..dim).map(|_| rng.gen_range(-k..=k) as f64 * step).collect())
            .collect();
        if let Ok(s) = PointedSpace::embedded(norm, dim, points) {
            return s;
        }
    }
}

/// A point cloud in dimension 1–3 with a random norm; one time in four the
/// distances are handed over as a bare matrix.
pub fn space(rng: &mut CaseRng, n: usize) -> PointedSpace {
    let dim = rng.gen_range(1..=3);
    let norm = norm(rng);
    let s = point_space(rng, n, dim, norm);
    if rng.gen_bool(0.25) {
        PointedSpace::from_matrix(s.distance_matrix()).expect("metric from points")
    } else {
        s
    }
}

pub fn field(rng: &mut CaseRng, n: usize) -> ScalarField {
    let mut v = vec![0.0];
    v.extend((1..n).map(|_| rng.gen_range(-5.0..=5.0)));
    ScalarField::new(v).expect("finite")
}

/// `k` distinct unit directions, pairwise at least `1e-3` apart.
pub fn rays(rng: &mut CaseRng, k: usize, dim: usize, norm: NormKind) -> RaySystem {
    let mut dirs: Vec<Vec<f64>> = Vec::with_capacity(k);
    while dirs.len() < k {
        let u = unit(rng, dim, norm);
        if dirs.iter().all(|d| norm.dist(d, &u) > 1e-3) {
            dirs.push(u);
        }
    }
    RaySystem::new(norm, dim, dirs).expect("unit and distinct")
}

pub fn ph_field(rng: &mut CaseRng, k: usize) -> PhField {
    PhField::new((0..k).map(|_| rng.gen_range(-3.0..=3.0)).collect()).expect("finite")
}

/// Random coefficients on a random nonempty subset of the non-basepoint
/// indices.
pub fn free_element(rng: &mut CaseRng, n: usize) -> FreeElement {
    loop {
        let mut terms = Vec::new();
        for i in 1..n {
            if rng.gen_bool(0.6) {
                terms.push((i, rng.gen_range(-3.0..=3.0)));
            }
        }
        if !terms.is_empty() {
            return FreeElement::new(terms);
        }
    }
}

/// Random subset of `0..n` of size `m` (in increasing order).
pub fn subset(rng: &mut CaseRng, n: usize, m: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    for i in 0..m {
        let j = rng.gen_range(i..n);
        all.swap(i, j);
    }
    let mut out = all[..m].to_vec();
    out.sort_unstable();
    out
}

/// A subset containing the basepoint and leaving at least one point out.
pub fn domain(rng: &mut CaseRng, n: usize) -> Vec<usize> {
    let m = rng.gen_range(1..n);
    let mut d = vec![0];
    d.extend(subset(rng, n - 1, m - 1).into_iter().map(|i| i + 1));
    d
}
