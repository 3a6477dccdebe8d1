//! Mixed norms `‖x‖_{p,θ}`: inner `l_p` over each column, outer `l_θ` over
//! the columns.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exponent::{Exponent, Rational, Weight};
use crate::instance::BallSpec;
use crate::{Error, Result};

/// Relative slack for closed-ball membership and norm inequalities.
pub const NORM_SLACK_REL: f64 = 1e-12;

/// An `m × k` real matrix, column-major: entry `(i, j)` has row `i < m`
/// inside column (block) `j < k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    m: usize,
    k: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(m: usize, k: usize) -> Self {
        Self {
            m,
            k,
            data: vec![0.0; m * k],
        }
    }

    pub fn from_fn(m: usize, k: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut x = Self::zeros(m, k);
        for j in 0..k {
            for i in 0..m {
                x.data[j * m + i] = f(i, j);
            }
        }
        x
    }

    /// Wraps column-major data of length `m·k`.
    pub fn from_column_major(m: usize, k: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != m * k {
            return Err(Error::DimensionMismatch(data.len(), 1, m, k));
        }
        Ok(Self { m, k, data })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.m + i]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[j * self.m + i] = value;
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.m..(j + 1) * self.m]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            data: self.data.iter().map(|x| x * c).collect(),
            ..self.clone()
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.k, self.m, |i, j| self.get(j, i))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

/// `l_p` norm of nonnegative-scaled values, `recip = 1/p`.
fn lp(values: impl Iterator<Item = f64>, recip: f64) -> f64 {
    if recip == 0.0 {
        values.fold(0.0, |acc, x| acc.max(x.abs()))
    } else if recip == 1.0 {
        values.map(f64::abs).sum()
    } else {
        let p = 1.0 / recip;
        libm::pow(values.map(|x| libm::pow(x.abs(), p)).sum::<f64>(), recip)
    }
}

/// `‖x‖_{l^{m,k}_{p,θ}}`, evaluated on `x / max|x|` and rescaled.
pub fn mixed_norm(x: &Matrix, p: &Exponent, theta: &Exponent) -> f64 {
    mixed_norm_f64(x, p.recip_f64(), theta.recip_f64())
}

pub(crate) fn mixed_norm_f64(x: &Matrix, u: f64, v: f64) -> f64 {
    let scale = x.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let cols = (0..x.k).map(|j| lp(x.column(j).iter().map(|e| e / scale), u));
    scale * lp(cols, v)
}

/// Gradient of `x ↦ ‖x‖_{p,θ}` for finite `p, θ > 1` at `x ≠ 0`.
pub(crate) fn mixed_norm_gradient(x: &Matrix, u: f64, v: f64) -> Option<Matrix> {
    if u == 0.0 || v == 0.0 || u >= 1.0 || v >= 1.0 {
        return None;
    }
    let total = mixed_norm_f64(x, u, v);
    if total == 0.0 {
        return None;
    }
    let (p, theta) = (1.0 / u, 1.0 / v);
    let mut g = Matrix::zeros(x.m, x.k);
    for j in 0..x.k {
        let col = lp(x.column(j).iter().copied(), u);
        if col == 0.0 {
            continue;
        }
        let outer = libm::pow(col / total, theta - 1.0);
        for i in 0..x.m {
            let e = x.get(i, j);
            let inner = libm::pow(e.abs() / col, p - 1.0);
            g.set(i, j, outer * inner * e.signum());
        }
    }
    Some(g)
}

/// Maximizer of `⟨g, y⟩` over the unit `l_p` ball (`recip = 1/p`).
fn lp_support(g: &[f64], recip: f64) -> Vec<f64> {
    let mut y = vec![0.0; g.len()];
    if recip == 0.0 {
        y.iter_mut().zip(g).for_each(|(y, g)| *y = if *g == 0.0 { 0.0 } else { g.signum() });
    } else if recip == 1.0 {
        if let Some((i, gi)) = g.iter().enumerate().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())) {
            y[i] = if *gi == 0.0 { 0.0 } else { gi.signum() };
        }
    } else {
        let dual = 1.0 / (1.0 - recip);
        let norm = lp(g.iter().copied(), 1.0 - recip);
        if norm > 0.0 {
            y.iter_mut()
                .zip(g)
                .for_each(|(y, g)| *y = g.signum() * libm::pow(g.abs() / norm, dual - 1.0));
        }
    }
    y
}

/// A maximizer of `⟨g, x⟩` over the unit ball of `l^{m,k}_{p,θ}`: column
/// maximizers of the inner norm, weighted by the outer maximizer applied to
/// the column dual norms.
pub(crate) fn support_point(g: &Matrix, u: f64, v: f64) -> Matrix {
    let dual_norms: Vec<f64> = (0..g.k).map(|j| lp(g.column(j).iter().copied(), 1.0 - u)).collect();
    let weights = lp_support(&dual_norms, v);
    let mut out = Matrix::zeros(g.m, g.k);
    for j in 0..g.k {
        let col = lp_support(g.column(j), u);
        for (i, c) in col.into_iter().enumerate() {
            out.set(i, j, weights[j] * c);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub inside: bool,
    /// `max_α ‖x‖_{p_α,θ_α} / ν_α`.
    pub ratio: f64,
}

/// Membership of `x` in `∩_α ν_α B_{p_α,θ_α}` (closed balls).
pub fn membership(x: &Matrix, balls: &[BallSpec]) -> Membership {
    let ratio = balls
        .iter()
        .map(|b| mixed_norm(x, b.p(), b.theta()) / b.nu())
        .fold(0.0, f64::max);
    Membership {
        inside: ratio <= 1.0 + NORM_SLACK_REL,
        ratio,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl NormInequality {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            holds: lhs <= rhs * (1.0 + NORM_SLACK_REL),
        }
    }
}

/// `‖x‖_{p,θ} ≤ ‖x‖_{p₁,θ₁}^{1−λ} ‖x‖_{p₂,θ₂}^λ` with
/// `1/p = (1−λ)/p₁ + λ/p₂` and likewise for `θ`.
pub fn interpolation_check(
    x: &Matrix,
    s1: (&Exponent, &Exponent),
    s2: (&Exponent, &Exponent),
    lambda: &Weight,
) -> NormInequality {
    let p = crate::exponent::convex_combine(s1.0, s2.0, lambda);
    let theta = crate::exponent::convex_combine(s1.1, s2.1, lambda);
    let lhs = mixed_norm(x, &p, &theta);
    let n1 = mixed_norm(x, s1.0, s1.1);
    let n2 = mixed_norm(x, s2.0, s2.1);
    let rhs = if lambda.value().is_zero() {
        n1
    } else if lambda.value().is_one() {
        n2
    } else {
        let l = lambda.to_f64();
        libm::pow(n1, 1.0 - l) * libm::pow(n2, l)
    };
    NormInequality::new(lhs, rhs)
}

/// Multiway form: `‖x‖_{p,θ} ≤ Π_i ‖x‖_{p_i,θ_i}^{τ_i}` with
/// `1/p = Σ τ_i/p_i`, `1/θ = Σ τ_i/θ_i`, `Σ τ_i = 1`.
pub fn multiway_interpolation_check(x: &Matrix, specs: &[(Exponent, Exponent, Weight)]) -> Result<NormInequality> {
    let total: Rational = specs.iter().map(|(_, _, w)| w.value().clone()).sum();
    if !total.is_one() {
        return Err(Error::WeightsDoNotSumToOne(alloc::format!("{total}")));
    }
    let u: Rational = specs.iter().map(|(p, _, w)| w.value() * p.recip()).sum();
    let v: Rational = specs.iter().map(|(_, t, w)| w.value() * t.recip()).sum();
    let lhs = mixed_norm(x, &Exponent::from_recip(u)?, &Exponent::from_recip(v)?);
    let mut log_rhs = 0.0;
    let mut zero = false;
    for (p, t, w) in specs {
        if w.value().is_zero() {
            continue;
        }
        let n = mixed_norm(x, p, t);
        if n == 0.0 {
            zero = true;
        } else {
            log_rhs += w.to_f64() * libm::log(n);
        }
    }
    let rhs = if zero { 0.0 } else { libm::exp(log_rhs) };
    Ok(NormInequality::new(lhs, rhs))
}

/// A random point of `∂M`: a seeded uniform direction in `[-1, 1]^{mk}`
/// scaled so that its largest membership ratio is `1`.
pub fn sample_boundary(balls: &[BallSpec], m: usize, k: usize, seed: u64) -> Result<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_boundary_with(balls, m, k, &mut rng)
}

pub(crate) fn sample_boundary_with(balls: &[BallSpec], m: usize, k: usize, rng: &mut impl Rng) -> Result<Matrix> {
    if balls.is_empty() {
        return Err(Error::EmptyFamily);
    }
    loop {
        let x = Matrix::from_fn(m, k, |_, _| rng.random_range(-1.0..1.0));
        let ratio = membership(&x, balls).ratio;
        if ratio > 0.0 {
            return Ok(x.scaled(1.0 / ratio));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{parse_exponent, rat};

    fn e(s: &str) -> Exponent {
        parse_exponent(s).unwrap()
    }

    #[test]
    fn support_point_attains_dual_norm() {
        let g = Matrix::from_column_major(3, 2, vec![0.5, -2.0, 1.0, 0.0, 3.0, -0.25]).unwrap();
        for (u, v) in [(0.0, 0.0), (1.0, 1.0), (0.25, 0.5), (0.0, 1.0), (1.0 / 3.0, 0.0)] {
            let s = support_point(&g, u, v);
            assert!((mixed_norm_f64(&s, u, v) - 1.0).abs() < 1e-12);
            let value: f64 = s.as_slice().iter().zip(g.as_slice()).map(|(a, b)| a * b).sum();
            let mut ok = true;
            for seed in 0..200u64 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let y = Matrix::from_fn(3, 2, |_, _| rng.random_range(-1.0..1.0));
                let y = y.scaled(1.0 / mixed_norm_f64(&y, u, v));
                let other: f64 = y.as_slice().iter().zip(g.as_slice()).map(|(a, b)| a * b).sum();
                ok &= other <= value * (1.0 + 1e-12);
            }
            assert!(ok, "u={u} v={v}");
        }
    }

    #[test]
    fn single_entry_norm() {
        let mut x = Matrix::zeros(3, 4);
        x.set(1, 2, -2.5);
        for (p, t) in [("1", "1"), ("2", "7/2"), ("inf", "3"), ("inf", "inf")] {
            assert!((mixed_norm(&x, &e(p), &e(t)) - 2.5).abs() < 1e-15);
        }
    }

    #[test]
    fn all_ones_norm() {
        let x = Matrix::from_fn(2, 3, |_, _| 1.0);
        let expected = 3f64.powf(1.0 / 3.0) * 2f64.sqrt();
        assert!((mixed_norm(&x, &e("2"), &e("3")) - expected).abs() < 1e-14);
    }

    #[test]
    fn sup_norm_is_max_entry() {
        let x = Matrix::from_fn(3, 3, |i, j| (i as f64 - 1.3) * (j as f64 + 0.5));
        assert_eq!(mixed_norm(&x, &e("inf"), &e("inf")), x.max_abs());
    }

    #[test]
    fn membership_examples() {
        let ball = BallSpec::new(e("2"), e("2"), 1.0).unwrap();
        let m0 = membership(&Matrix::zeros(2, 2), core::slice::from_ref(&ball));
        assert!(m0.inside);
        assert_eq!(m0.ratio, 0.0);
        let x = Matrix::from_fn(2, 2, |_, _| 1.0);
        let m1 = membership(&x, core::slice::from_ref(&ball));
        assert!(!m1.inside);
        assert!((m1.ratio - 2.0).abs() < 1e-15);
        let m2 = membership(&x.scaled(0.5), core::slice::from_ref(&ball));
        assert!(m2.inside);
        assert!((m2.ratio - 1.0).abs() < 1e-15);
    }

    #[test]
    fn interpolation_examples() {
        let x = Matrix::from_fn(3, 3, |i, j| ((i * 7 + j * 3) % 5) as f64 - 1.7);
        let zero = Weight::new(Rational::zero()).unwrap();
        let r = interpolation_check(&x, (&e("3"), &e("5")), (&e("1"), &e("inf")), &zero);
        assert_eq!(r.lhs, r.rhs);
        let w = Weight::new(rat(2, 7)).unwrap();
        let r = interpolation_check(&x, (&e("3"), &e("5")), (&e("3"), &e("5")), &w);
        assert!((r.lhs - r.rhs).abs() < 1e-13 * r.lhs);
        let w = Weight::new(rat(1, 2)).unwrap();
        let r = interpolation_check(&x, (&e("1"), &e("1")), (&e("inf"), &e("inf")), &w);
        assert!(r.holds);
    }

    #[test]
    fn multiway_examples() {
        let x = Matrix::from_fn(2, 3, |i, j| (i as f64 + 1.0) * (j as f64 - 0.75));
        let one = Weight::new(Rational::one()).unwrap();
        let r = multiway_interpolation_check(&x, &[(e("3"), e("4"), one)]).unwrap();
        assert_eq!(r.lhs, r.rhs);

        let w = Weight::new(rat(1, 3)).unwrap();
        let two = multiway_interpolation_check(&x, &[(e("1"), e("2"), w.complement()), (e("5"), e("inf"), w.clone())]).unwrap();
        let pair = interpolation_check(&x, (&e("1"), &e("2")), (&e("5"), &e("inf")), &w);
        assert!((two.lhs - pair.lhs).abs() < 1e-14 * pair.lhs);
        assert!((two.rhs - pair.rhs).abs() < 1e-13 * pair.rhs);

        let bad = multiway_interpolation_check(&x, &[(e("1"), e("2"), w.clone()), (e("5"), e("inf"), w)]);
        assert!(matches!(bad, Err(Error::WeightsDoNotSumToOne(_))));
    }

    #[test]
    fn boundary_samples() {
        let ball = BallSpec::new(e("2"), e("2"), 1.0).unwrap();
        let x = sample_boundary(core::slice::from_ref(&ball), 3, 2, 9).unwrap();
        let frob: f64 = x.as_slice().iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((frob - 1.0).abs() < 1e-12);
        assert_eq!(x, sample_boundary(core::slice::from_ref(&ball), 3, 2, 9).unwrap());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let x = Matrix::from_fn(3, 2, |i, j| (i as f64) - 0.6 * (j as f64) + 0.2);
        let (u, v) = (1.0 / 3.0, 0.25);
        let g = mixed_norm_gradient(&x, u, v).unwrap();
        let h = 1e-6;
        for idx in 0..6 {
            let mut plus = x.clone();
            let mut minus = x.clone();
            plus.as_mut_slice()[idx] += h;
            minus.as_mut_slice()[idx] -= h;
            let fd = (mixed_norm_f64(&plus, u, v) - mixed_norm_f64(&minus, u, v)) / (2.0 * h);
            assert!((fd - g.as_slice()[idx]).abs() < 1e-7);
        }
    }
}
