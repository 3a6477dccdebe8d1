//! Lower-bound witnesses `t·V^{m,k}_{r,l} ⊂ M`.
//!
//! `V^{m,k}_{r,l}` is the convex hull of all signed row/column permutations
//! of the indicator `e` of the top-left `r × l` block. Every mixed norm is
//! invariant under those permutations and sign changes, and `M` is convex,
//! so `t·V ⊂ M` holds exactly when `t·e ∈ M`.

use alloc::vec::Vec;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::exponent::{to_f64, Rational};
use crate::instance::{BallSpec, Instance};
use crate::norms::Matrix;
use crate::phi::{Dimensions, TargetSpace};
use crate::{Error, Result};

/// `(τ₁, τ₂, ε₁, ε₂)`: `γ(x)_{i,j} = ε₁_i ε₂_j x_{τ₁(i), τ₂(j)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
    row_signs: Vec<i8>,
    col_signs: Vec<i8>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = alloc::vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !core::mem::replace(&mut seen[i], true))
}

impl GroupElement {
    pub fn new(row_perm: Vec<usize>, col_perm: Vec<usize>, row_signs: Vec<i8>, col_signs: Vec<i8>) -> Result<Self> {
        if !is_permutation(&row_perm) || !is_permutation(&col_perm) {
            return Err(Error::InvalidGroupElement("permutation is not a bijection"));
        }
        if row_signs.len() != row_perm.len() || col_signs.len() != col_perm.len() {
            return Err(Error::InvalidGroupElement("sign vector length"));
        }
        if !row_signs.iter().chain(&col_signs).all(|s| *s == 1 || *s == -1) {
            return Err(Error::InvalidGroupElement("signs must be +1 or -1"));
        }
        Ok(Self {
            row_perm,
            col_perm,
            row_signs,
            col_signs,
        })
    }

    pub fn identity(m: usize, k: usize) -> Self {
        Self {
            row_perm: (0..m).collect(),
            col_perm: (0..k).collect(),
            row_signs: alloc::vec![1; m],
            col_signs: alloc::vec![1; k],
        }
    }

    pub fn random(m: usize, k: usize, rng: &mut impl Rng) -> Self {
        let mut g = Self::identity(m, k);
        g.row_perm.shuffle(rng);
        g.col_perm.shuffle(rng);
        for s in g.row_signs.iter_mut().chain(g.col_signs.iter_mut()) {
            *s = if rng.random::<bool>() { 1 } else { -1 };
        }
        g
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.row_perm.len(), self.col_perm.len())
    }

    /// The element acting as `outer(inner(x))`.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.dims() != inner.dims() {
            let (m, k) = outer.dims();
            let (m2, k2) = inner.dims();
            return Err(Error::DimensionMismatch(m, k, m2, k2));
        }
        let row_perm = outer.row_perm.iter().map(|&i| inner.row_perm[i]).collect();
        let col_perm = outer.col_perm.iter().map(|&j| inner.col_perm[j]).collect();
        let row_signs = (0..outer.row_perm.len())
            .map(|i| outer.row_signs[i] * inner.row_signs[outer.row_perm[i]])
            .collect();
        let col_signs = (0..outer.col_perm.len())
            .map(|j| outer.col_signs[j] * inner.col_signs[outer.col_perm[j]])
            .collect();
        Ok(Self {
            row_perm,
            col_perm,
            row_signs,
            col_signs,
        })
    }
}

/// `γ(x)`.
pub fn group_apply(g: &GroupElement, x: &Matrix) -> Result<Matrix> {
    let (m, k) = g.dims();
    if (x.rows(), x.cols()) != (m, k) {
        return Err(Error::DimensionMismatch(x.rows(), x.cols(), m, k));
    }
    Ok(Matrix::from_fn(m, k, |i, j| {
        f64::from(g.row_signs[i] * g.col_signs[j]) * x.get(g.row_perm[i], g.col_perm[j])
    }))
}

fn check_block(m: u64, k: u64, r: u64, l: u64) -> Result<()> {
    if r == 0 || l == 0 || r > m || l > k {
        return Err(Error::BlockOutOfRange { r, l, m, k });
    }
    Ok(())
}

/// The indicator of the top-left `r × l` block.
pub fn v_extreme_point(m: usize, k: usize, r: usize, l: usize) -> Result<Matrix> {
    check_block(m as u64, k as u64, r as u64, l as u64)?;
    Ok(Matrix::from_fn(m, k, |i, j| if i < r && j < l { 1.0 } else { 0.0 }))
}

/// Largest `t` with `t·V_{r,l} ⊂ M`: `min_α ν_α r^{−1/p_α} l^{−1/θ_α}`.
pub fn v_inclusion_scale(balls: &[BallSpec], r: u64, l: u64) -> f64 {
    let (lr, ll) = (libm::log(r as f64), libm::log(l as f64));
    balls
        .iter()
        .map(|b| b.nu() * libm::exp(-b.p().recip_f64() * lr - b.theta().recip_f64() * ll))
        .fold(f64::INFINITY, f64::min)
}

/// Order of `d_n(V_{r,l}, l_{q,σ})`: `r^{1/q} l^{1/σ}` while
/// `n ≤ m^{2/q} k^{2/σ} r^{1−2/q} l^{1−2/σ}`, else
/// `n^{−1/2} m^{1/q} k^{1/σ} r^{1/2} l^{1/2}`.
pub fn v_width_lower_bound(dims: &Dimensions, r: u64, l: u64, target: &TargetSpace) -> Result<f64> {
    let (m, k, n) = (dims.m(), dims.k(), dims.n());
    check_block(m, k, r, l)?;
    let uq = target.q().recip_f64();
    let vs = target.sigma().recip_f64();
    let (lm, lk, lr, ll) = (
        libm::log(m as f64),
        libm::log(k as f64),
        libm::log(r as f64),
        libm::log(l as f64),
    );
    let ln_threshold = 2.0 * uq * lm + 2.0 * vs * lk + (1.0 - 2.0 * uq) * lr + (1.0 - 2.0 * vs) * ll;
    let first = uq * lr + vs * ll;
    if n == 0 || libm::log(n as f64) <= ln_threshold {
        return Ok(libm::exp(first));
    }
    let second = -0.5 * libm::log(n as f64) + uq * lm + vs * lk + 0.5 * (lr + ll);
    Ok(libm::exp(second))
}

/// Both branches of [`v_width_lower_bound`] evaluated at the threshold
/// `n = m^{2/q} k^{2/σ} r^{1−2/q} l^{1−2/σ}` (a real number).
pub fn v_width_branches_at_threshold(dims: &Dimensions, r: u64, l: u64, target: &TargetSpace) -> (f64, f64) {
    let uq = target.q().recip_f64();
    let vs = target.sigma().recip_f64();
    let (lm, lk, lr, ll) = (
        libm::log(dims.m() as f64),
        libm::log(dims.k() as f64),
        libm::log(r as f64),
        libm::log(l as f64),
    );
    let ln_t = 2.0 * uq * lm + 2.0 * vs * lk + (1.0 - 2.0 * uq) * lr + (1.0 - 2.0 * vs) * ll;
    let first = libm::exp(uq * lr + vs * ll);
    let second = libm::exp(-0.5 * ln_t + uq * lm + vs * lk + 0.5 * (lr + ll));
    (first, second)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessBound {
    pub value: f64,
    pub r: u64,
    pub l: u64,
}

/// Full grid for `m ≤ 64`; otherwise powers of two plus the endpoint.
fn axis_grid(size: u64) -> Vec<u64> {
    if size <= 64 {
        return (1..=size).collect();
    }
    let mut g: Vec<u64> = core::iter::successors(Some(1u64), |x| x.checked_mul(2))
        .take_while(|&x| x <= size)
        .collect();
    if g.last() != Some(&size) {
        g.push(size);
    }
    g
}

/// `LB(r, l) = v_inclusion_scale · v_width_lower_bound`.
pub fn witness_value(inst: &Instance, r: u64, l: u64) -> Result<f64> {
    Ok(v_inclusion_scale(inst.balls(), r, l) * v_width_lower_bound(inst.dims(), r, l, inst.target())?)
}

/// Best witness over the `(r, l)` grid; ties keep the smallest `r`, then `l`.
///
/// When the sub-grid is used, the rounded solutions of the log-linear
/// systems of every ball triple are added as candidates.
pub fn best_witness_lower_bound(inst: &Instance) -> Result<WitnessBound> {
    let (m, k) = (inst.dims().m(), inst.dims().k());
    let rows = axis_grid(m);
    let cols = axis_grid(k);
    let mut candidates: Vec<(u64, u64)> = rows.iter().flat_map(|&r| cols.iter().map(move |&l| (r, l))).collect();
    if m > 64 || k > 64 {
        candidates.extend(loglinear_candidates(inst));
        candidates.sort_unstable();
        candidates.dedup();
    }
    let mut best = WitnessBound {
        value: f64::NEG_INFINITY,
        r: 1,
        l: 1,
    };
    for (r, l) in candidates {
        let value = witness_value(inst, r, l)?;
        if value > best.value {
            best = WitnessBound { value, r, l };
        }
    }
    Ok(best)
}

/// Solves `ln ratio_ab = a₁ ln r + b₁ ln l`, `ln ratio_bg = a₂ ln r + b₂ ln l`
/// where `rows = [[a₁, b₁], [a₂, b₂]]` are reciprocal differences.
///
/// Nothing is returned for dependent rows (collinear reciprocal points).
pub fn solve_rl_loglinear(ratio_ab: f64, ratio_bg: f64, rows: &[[Rational; 2]; 2]) -> Option<(f64, f64)> {
    let det = &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0];
    if det.is_zero() {
        return None;
    }
    let (a1, b1, a2, b2) = (to_f64(&rows[0][0]), to_f64(&rows[0][1]), to_f64(&rows[1][0]), to_f64(&rows[1][1]));
    let d = to_f64(&det);
    let (y1, y2) = (libm::log(ratio_ab), libm::log(ratio_bg));
    let log_r = (y1 * b2 - y2 * b1) / d;
    let log_l = (a1 * y2 - a2 * y1) / d;
    Some((libm::exp(log_r), libm::exp(log_l)))
}

/// Integer `(r, l)` candidates from the log-linear system of every ball
/// triple, clamped to the grid and rounded both ways.
pub fn loglinear_candidates(inst: &Instance) -> Vec<(u64, u64)> {
    let balls = inst.balls();
    let (m, k) = (inst.dims().m(), inst.dims().k());
    let mut out = Vec::new();
    let diff = |a: &BallSpec, b: &BallSpec| {
        [a.p().recip() - b.p().recip(), a.theta().recip() - b.theta().recip()]
    };
    for a in 0..balls.len() {
        for b in a + 1..balls.len() {
            for c in b + 1..balls.len() {
                let rows = [diff(&balls[a], &balls[b]), diff(&balls[b], &balls[c])];
                let Some((r, l)) = solve_rl_loglinear(balls[a].nu() / balls[b].nu(), balls[b].nu() / balls[c].nu(), &rows)
                else {
                    continue;
                };
                let clamp = |x: f64, hi: u64| x.clamp(1.0, hi as f64);
                let (r, l) = (clamp(r, m), clamp(l, k));
                for rr in [libm::floor(r), libm::ceil(r)] {
                    for ll in [libm::floor(l), libm::ceil(l)] {
                        out.push((rr as u64, ll as u64));
                    }
                }
            }
        }
    }
    out
}
