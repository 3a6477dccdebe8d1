//! Ball families `M = ∩_α ν_α B^{m,k}_{p_α,θ_α}` and their validation.

use alloc::vec::Vec;

use crate::exponent::{Exponent, ReciprocalPoint};
use crate::phi::{Dimensions, TargetSpace};
use crate::{Error, Result};

/// One ball `ν B^{m,k}_{p,θ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSpec {
    p: Exponent,
    theta: Exponent,
    nu: f64,
}

impl BallSpec {
    pub fn new(p: Exponent, theta: Exponent, nu: f64) -> Result<Self> {
        if !(nu.is_finite() && nu > 0.0) {
            return Err(Error::InvalidRadius(nu));
        }
        Ok(Self { p, theta, nu })
    }

    pub fn p(&self) -> &Exponent {
        &self.p
    }

    pub fn theta(&self) -> &Exponent {
        &self.theta
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn point(&self) -> ReciprocalPoint {
        ReciprocalPoint::from_exponents(&self.p, &self.theta)
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        Self::new(self.p.clone(), self.theta.clone(), nu)
    }

    pub fn with_point(&self, point: &ReciprocalPoint) -> Self {
        Self {
            p: point.p(),
            theta: point.theta(),
            nu: self.nu,
        }
    }

    /// Swaps the roles of `p` and `θ`.
    pub fn transposed(&self) -> Self {
        Self {
            p: self.theta.clone(),
            theta: self.p.clone(),
            nu: self.nu,
        }
    }
}

/// A validated problem: dimensions, target space and a nonempty family of
/// balls with pairwise distinct `(p, θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    dims: Dimensions,
    target: TargetSpace,
    balls: Vec<BallSpec>,
}

impl Instance {
    /// Same as [`validate_instance`].
    pub fn new(dims: Dimensions, target: TargetSpace, balls: Vec<BallSpec>) -> Result<Self> {
        validate_instance(dims, target, balls)
    }

    pub fn dims(&self) -> &Dimensions {
        &self.dims
    }

    pub fn target(&self) -> &TargetSpace {
        &self.target
    }

    pub fn balls(&self) -> &[BallSpec] {
        &self.balls
    }

    pub fn q(&self) -> &Exponent {
        self.target.q()
    }

    pub fn sigma(&self) -> &Exponent {
        self.target.sigma()
    }

    pub fn points(&self) -> Vec<ReciprocalPoint> {
        self.balls.iter().map(BallSpec::point).collect()
    }

    pub fn with_n(&self, n: u64) -> Result<Self> {
        Ok(Self {
            dims: self.dims.with_n(n)?,
            ..self.clone()
        })
    }

    pub fn with_balls(&self, balls: Vec<BallSpec>) -> Result<Self> {
        validate_instance(self.dims, self.target.clone(), balls)
    }

    /// Every radius multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let balls = self.balls.iter().map(|b| b.with_nu(b.nu * c)).collect::<Result<_>>()?;
        Ok(Self { balls, ..self.clone() })
    }

    /// The instance with `(m, q, p_α)` and `(k, σ, θ_α)` exchanged.
    pub fn transposed(&self) -> Self {
        Self {
            dims: self.dims.transposed(),
            target: self.target.transposed(),
            balls: self.balls.iter().map(BallSpec::transposed).collect(),
        }
    }
}

/// Builds an [`Instance`], coalescing balls with equal `(p, θ)` into the
/// one with the smallest radius. Order of first occurrence is kept.
///
/// Range checks on `n`, `q` and `σ` happen when [`Dimensions`] and
/// [`TargetSpace`] are constructed; an empty family is rejected here.
pub fn validate_instance(dims: Dimensions, target: TargetSpace, balls: Vec<BallSpec>) -> Result<Instance> {
    if balls.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut kept: Vec<BallSpec> = Vec::with_capacity(balls.len());
    for ball in balls {
        BallSpec::new(ball.p.clone(), ball.theta.clone(), ball.nu)?;
        match kept.iter_mut().find(|b| b.p == ball.p && b.theta == ball.theta) {
            Some(existing) => existing.nu = existing.nu.min(ball.nu),
            None => kept.push(ball),
        }
    }
    Ok(Instance {
        dims,
        target,
        balls: kept,
    })
}
