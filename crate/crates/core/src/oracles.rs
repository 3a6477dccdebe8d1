//! Ground truths at desk scale: classical exact widths and a seeded
//! numerical width estimator.

use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exponent::Exponent;
use crate::instance::BallSpec;
use crate::norms::{membership, mixed_norm_f64, mixed_norm_gradient, sample_boundary_with, support_point, Matrix};
use crate::phi::TargetSpace;
use crate::subspace::{distance_to_subspace, Frame};
use crate::witness::{group_apply, v_extreme_point, v_inclusion_scale, GroupElement};
use crate::{Error, Result};

/// Largest `mk` accepted by [`numeric_width_estimate`].
pub const NUMERIC_MAX_ENTRIES: u64 = 16;

pub const DEFAULT_RESTARTS: u32 = 64;
pub const DEFAULT_ITERATIONS: u32 = 200;

/// `d_n(B^N_∞, l^N_s) = (N − n)^{1/s}`.
pub fn exact_width_linf(big_n: u64, n: u64, s: &Exponent) -> Result<f64> {
    if n > big_n {
        return Err(Error::WidthIndexExceedsDimension { n, dim: big_n });
    }
    if n == big_n {
        return Ok(0.0);
    }
    Ok(libm::exp(s.recip_f64() * libm::log((big_n - n) as f64)))
}

/// `d_n(B^N_2, l^N_2)`: `1` for `n < N`, `0` at `n = N`.
pub fn exact_width_euclidean_ball(big_n: u64, n: u64) -> Result<f64> {
    if n > big_n {
        return Err(Error::WidthIndexExceedsDimension { n, dim: big_n });
    }
    Ok(if n < big_n { 1.0 } else { 0.0 })
}

const SUP_SAMPLES: usize = 256;
const SUP_SEED: u64 = 0x5eed_0f_5u64;

/// `sup_{x ∈ M} ‖x‖_{q,σ}`, the width at `n = 0`.
///
/// Exact for one ball. For several balls this is a lower estimate: the best
/// of the block points `t*·e(r, l)` and of seeded boundary samples.
pub fn sup_norm_over_m(balls: &[BallSpec], m: u64, k: u64, target: &TargetSpace) -> Result<f64> {
    if balls.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if m == 0 || k == 0 {
        return Err(Error::ZeroDimension { m, k });
    }
    let uq = target.q().recip_f64();
    let vs = target.sigma().recip_f64();
    if let [b] = balls {
        let a = (uq - b.p().recip_f64()).max(0.0);
        let c = (vs - b.theta().recip_f64()).max(0.0);
        return Ok(b.nu() * libm::exp(a * libm::log(m as f64) + c * libm::log(k as f64)));
    }
    let mut best = 0.0f64;
    for r in 1..=m {
        for l in 1..=k {
            let t = v_inclusion_scale(balls, r, l);
            best = best.max(t * libm::exp(uq * libm::log(r as f64) + vs * libm::log(l as f64)));
        }
    }
    if m * k <= 1 << 16 {
        let mut rng = ChaCha8Rng::seed_from_u64(SUP_SEED);
        for _ in 0..SUP_SAMPLES {
            let x = sample_boundary_with(balls, m as usize, k as usize, &mut rng)?;
            best = best.max(mixed_norm_f64(&x, uq, vs));
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    Exact,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleMetadata {
    pub restarts: u32,
    pub iterations: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthSample {
    pub estimate: f64,
    pub kind: SampleKind,
    /// `None` for exact samples.
    pub metadata: Option<SampleMetadata>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub restarts: u32,
    pub iterations: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            iterations: DEFAULT_ITERATIONS,
        }
    }
}

const RANDOM_GROUP_ELEMENTS: usize = 6;
const RANDOM_BOUNDARY_POINTS: usize = 24;
const ACTIVE_SET: usize = 8;
const FULL_EVAL_EVERY: u32 = 25;
const ASCENT_POINTS: usize = 3;
const ASCENT_STEPS: usize = 20;

struct Problem<'a> {
    balls: &'a [BallSpec],
    m: usize,
    k: usize,
    n: usize,
    u: f64,
    v: f64,
    pool: Vec<Matrix>,
}

impl Problem<'_> {
    fn distance(&self, x: &Matrix, frame: &Frame) -> f64 {
        distance_to_subspace(x, frame, self.u, self.v).distance
    }

    /// Radial projection onto `∂M`.
    fn to_boundary(&self, x: &Matrix) -> Option<Matrix> {
        let ratio = membership(x, self.balls).ratio;
        (ratio > 0.0 && ratio.is_finite()).then(|| x.scaled(1.0 / ratio))
    }

    /// Ascent of the convex map `x ↦ dist(x, L)` over `M`. With `g` the norm
    /// gradient at the optimal residual, `dist(y, L) ≥ dist(x, L) + ⟨g, y − x⟩`,
    /// so the support points of each ball in direction `g` (pulled back onto
    /// `∂M`) and a plain gradient step are the candidates.
    fn ascend(&self, start: &Matrix, frame: &Frame) -> (Matrix, f64) {
        let mut x = start.clone();
        let mut best = self.distance(&x, frame);
        let mut step = 0.5 * x.max_abs().max(1e-12);
        for _ in 0..ASCENT_STEPS {
            let approx = distance_to_subspace(&x, frame, self.u, self.v);
            let Some(g) = mixed_norm_gradient(&approx.residual, self.u, self.v) else {
                break;
            };
            let data = x.as_slice().iter().zip(g.as_slice()).map(|(a, b)| a + step * b).collect();
            let mut candidates: Vec<Matrix> = self
                .balls
                .iter()
                .map(|b| support_point(&g, b.p().recip_f64(), b.theta().recip_f64()))
                .collect();
            candidates.push(Matrix::from_column_major(self.m, self.k, data).expect("length matches"));
            let found = candidates
                .iter()
                .filter_map(|c| self.to_boundary(c))
                .map(|y| (self.distance(&y, frame), y))
                .max_by(|a, b| a.0.total_cmp(&b.0));
            match found {
                Some((d, y)) if d > best * (1.0 + 1e-12) => {
                    best = d;
                    x = y;
                    step *= 1.5;
                }
                _ => {
                    step *= 0.5;
                    if step < 1e-6 * x.max_abs() {
                        break;
                    }
                }
            }
        }
        (x, best)
    }

    /// Inner maximization over the pool plus refined points; returns the
    /// value and the worst points, largest first.
    fn full_eval(&self, frame: &Frame, extra: &[Matrix]) -> (f64, Vec<Matrix>) {
        let mut scored: Vec<(f64, &Matrix)> = self.pool.iter().chain(extra).map(|x| (self.distance(x, frame), x)).collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut worst: Vec<(f64, Matrix)> = scored.iter().take(ACTIVE_SET).map(|(d, x)| (*d, (*x).clone())).collect();
        for i in 0..ASCENT_POINTS.min(worst.len()) {
            let (x, d) = self.ascend(&worst[i].1, frame);
            if d > worst[i].0 {
                worst[i] = (d, x);
            }
        }
        worst.sort_by(|a, b| b.0.total_cmp(&a.0));
        let value = worst.first().map_or(0.0, |w| w.0);
        (value, worst.into_iter().map(|(_, x)| x).collect())
    }

    fn active_eval(&self, frame: &Frame, active: &[Matrix]) -> f64 {
        active.iter().map(|x| self.distance(x, frame)).fold(0.0, f64::max)
    }

    fn initial_frame(&self, restart: u32, rng: &mut ChaCha8Rng) -> Frame {
        let len = self.m * self.k;
        if restart % 2 == 0 {
            let coords = sample(rng, len, self.n);
            Frame::orthonormalize(
                coords
                    .iter()
                    .map(|i| {
                        let mut e = alloc::vec![0.0; len];
                        e[i] = 1.0;
                        e
                    })
                    .collect(),
            )
        } else {
            self.random_frame(rng)
        }
    }

    fn random_frame(&self, rng: &mut ChaCha8Rng) -> Frame {
        let len = self.m * self.k;
        loop {
            let vectors = (0..self.n).map(|_| (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let f = Frame::orthonormalize(vectors);
            if f.dim() == self.n {
                return f;
            }
        }
    }

    fn perturbed(&self, frame: &Frame, scale: f64, rng: &mut ChaCha8Rng) -> Option<Frame> {
        let vectors = frame
            .basis
            .iter()
            .map(|b| b.iter().map(|x| x + scale * rng.random_range(-1.0..1.0)).collect())
            .collect();
        let f = Frame::orthonormalize(vectors);
        (f.dim() == self.n).then_some(f)
    }

    fn restart(&self, index: u32, iterations: u32, rng: &mut ChaCha8Rng) -> f64 {
        let mut frame = self.initial_frame(index, rng);
        let (mut best_full, mut active) = self.full_eval(&frame, &[]);
        let mut best_frame = frame.clone();
        let mut current = self.active_eval(&frame, &active);
        let mut scale = 0.3;
        for step in 1..=iterations {
            if let Some(candidate) = self.perturbed(&frame, scale, rng) {
                let value = self.active_eval(&candidate, &active);
                if value < current {
                    frame = candidate;
                    current = value;
                    scale = (scale * 1.2).min(1.0);
                } else {
                    scale = (scale * 0.7).max(1e-4);
                }
            }
            if step % FULL_EVAL_EVERY == 0 || step == iterations {
                let (value, worst) = self.full_eval(&frame, &active);
                active = worst;
                if value < best_full {
                    best_full = value;
                    best_frame = frame.clone();
                } else {
                    frame = best_frame.clone();
                }
                current = self.active_eval(&frame, &active);
            }
        }
        best_full
    }
}

fn restart_seed(seed: u64, index: u32) -> u64 {
    seed ^ (u64::from(index) + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Heuristic `d_n(M, l^{m,k}_{q,σ})` for `mk ≤ 16`, `n ≤ mk`.
///
/// Minimum over restarts of the best inner value found for the best
/// subspace. The inner value lower-bounds the true sup for that subspace,
/// so the estimate can fall short of `d_n` by the inner shortfall.
pub fn numeric_width_estimate(
    balls: &[BallSpec],
    m: u64,
    k: u64,
    n: u64,
    target: &TargetSpace,
    budget: Budget,
    seed: u64,
) -> Result<WidthSample> {
    if budget.restarts == 0 {
        return Err(Error::InvalidBudget("restarts"));
    }
    if budget.iterations == 0 {
        return Err(Error::InvalidBudget("iterations"));
    }
    if balls.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if m == 0 || k == 0 {
        return Err(Error::ZeroDimension { m, k });
    }
    let dim = m * k;
    if dim > NUMERIC_MAX_ENTRIES {
        return Err(Error::TooLargeForNumeric(dim));
    }
    if n > dim {
        return Err(Error::WidthIndexExceedsDimension { n, dim });
    }
    if n == dim {
        return Ok(WidthSample {
            estimate: 0.0,
            kind: SampleKind::Exact,
            metadata: None,
        });
    }
    let (mu, ku) = (m as usize, k as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool = Vec::new();
    let mut elements = alloc::vec![GroupElement::identity(mu, ku)];
    elements.extend((0..RANDOM_GROUP_ELEMENTS).map(|_| GroupElement::random(mu, ku, &mut rng)));
    for r in 1..=mu {
        for l in 1..=ku {
            let t = v_inclusion_scale(balls, r as u64, l as u64);
            let e = v_extreme_point(mu, ku, r, l)?.scaled(t);
            for g in &elements {
                pool.push(group_apply(g, &e)?);
            }
        }
    }
    for _ in 0..RANDOM_BOUNDARY_POINTS {
        pool.push(sample_boundary_with(balls, mu, ku, &mut rng)?);
    }
    let problem = Problem {
        balls,
        m: mu,
        k: ku,
        n: n as usize,
        u: target.q().recip_f64(),
        v: target.sigma().recip_f64(),
        pool,
    };
    let estimate = if n == 0 {
        problem.full_eval(&Frame::orthonormalize(Vec::new()), &[]).0
    } else {
        (0..budget.restarts)
            .map(|i| {
                let mut r = ChaCha8Rng::seed_from_u64(restart_seed(seed, i));
                problem.restart(i, budget.iterations, &mut r)
            })
            .fold(f64::INFINITY, f64::min)
    };
    Ok(WidthSample {
        estimate,
        kind: SampleKind::Heuristic,
        metadata: Some(SampleMetadata {
            restarts: budget.restarts,
            iterations: budget.iterations,
            seed,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::parse_exponent;

    fn e(s: &str) -> Exponent {
        parse_exponent(s).unwrap()
    }

    fn ball(p: &str, t: &str, nu: f64) -> BallSpec {
        BallSpec::new(e(p), e(t), nu).unwrap()
    }

    fn target(q: &str, s: &str) -> TargetSpace {
        TargetSpace::new(e(q), e(s)).unwrap()
    }

    const SMALL: Budget = Budget {
        restarts: 8,
        iterations: 60,
    };

    #[test]
    fn linf_examples() {
        assert!((exact_width_linf(4, 2, &e("2")).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(exact_width_linf(4, 4, &e("2")).unwrap(), 0.0);
        assert!((exact_width_linf(7, 0, &e("1")).unwrap() - 7.0).abs() < 1e-13);
        assert_eq!(exact_width_linf(7, 3, &Exponent::infinity()).unwrap(), 1.0);
        assert!(exact_width_linf(3, 4, &e("2")).is_err());
    }

    #[test]
    fn euclidean_examples() {
        assert_eq!(exact_width_euclidean_ball(4, 2).unwrap(), 1.0);
        assert_eq!(exact_width_euclidean_ball(4, 4).unwrap(), 0.0);
        assert_eq!(exact_width_euclidean_ball(4, 0).unwrap(), 1.0);
        assert!(exact_width_euclidean_ball(4, 5).is_err());
    }

    #[test]
    fn sup_norm_examples() {
        let t = target("3", "4");
        let v = sup_norm_over_m(&[ball("6", "8", 2.0)], 5, 7, &t).unwrap();
        let expected = 2.0 * 5f64.powf(1.0 / 3.0 - 1.0 / 6.0) * 7f64.powf(0.25 - 0.125);
        assert!((v - expected).abs() < 1e-12 * expected);
        assert_eq!(sup_norm_over_m(&[ball("2", "3", 1.5)], 5, 7, &t).unwrap(), 1.5);
        let fam = [ball("inf", "2", 1.0), ball("2", "inf", 1.3)];
        let a = sup_norm_over_m(&fam, 4, 3, &t).unwrap();
        let doubled: Vec<_> = fam.iter().map(|b| b.with_nu(2.0 * b.nu()).unwrap()).collect();
        let b = sup_norm_over_m(&doubled, 4, 3, &t).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-12 * b);
    }

    #[test]
    fn numeric_euclidean_ball() {
        let t = target("2", "2");
        for n in [0, 1, 2] {
            let s = numeric_width_estimate(&[ball("2", "2", 1.0)], 2, 2, n, &t, SMALL, 7).unwrap();
            assert!((s.estimate - 1.0).abs() < 0.1, "n={n}: {}", s.estimate);
            assert_eq!(s.kind, SampleKind::Heuristic);
        }
    }

    #[test]
    fn numeric_linf_pair() {
        let s = numeric_width_estimate(&[ball("inf", "inf", 1.0)], 1, 2, 1, &target("2", "2"), SMALL, 11).unwrap();
        assert!((s.estimate - 1.0).abs() < 0.1, "{}", s.estimate);
    }

    #[test]
    fn numeric_full_dimension_and_errors() {
        let t = target("2", "2");
        let s = numeric_width_estimate(&[ball("2", "2", 1.0)], 2, 2, 4, &t, SMALL, 1).unwrap();
        assert_eq!(s.estimate, 0.0);
        assert_eq!(s.kind, SampleKind::Exact);
        assert!(s.metadata.is_none());
        let zero = Budget {
            restarts: 0,
            iterations: 5,
        };
        assert!(matches!(
            numeric_width_estimate(&[ball("2", "2", 1.0)], 2, 2, 1, &t, zero, 1),
            Err(Error::InvalidBudget(_))
        ));
        assert!(numeric_width_estimate(&[ball("2", "2", 1.0)], 4, 5, 1, &t, SMALL, 1).is_err());
        assert!(numeric_width_estimate(&[ball("2", "2", 1.0)], 2, 2, 5, &t, SMALL, 1).is_err());
    }

    #[test]
    fn numeric_is_deterministic() {
        let t = target("4", "3");
        let fam = [ball("2", "inf", 1.0), ball("inf", "1", 2.0)];
        let a = numeric_width_estimate(&fam, 2, 3, 2, &t, SMALL, 5).unwrap();
        let b = numeric_width_estimate(&fam, 2, 3, 2, &t, SMALL, 5).unwrap();
        assert_eq!(a, b);
    }
}
