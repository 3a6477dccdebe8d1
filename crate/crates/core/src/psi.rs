//! The eight candidate values `Ψ_0..Ψ_7` and their minimum `Ψ`.
//!
//! `Ψ_0` scans single balls. `Ψ_1..Ψ_5` scan ordered pairs `(α, β)` whose
//! segment crosses one of the lines `u = 1/q`, `v = 1/σ`, `u = 1/2`,
//! `v = 1/2`, or the critical line; the crossing point is interpolated and
//! `Φ` is evaluated there. `Ψ_6` and `Ψ_7` scan unordered triples whose
//! triangle strictly contains `(1/q, 1/σ)` or `(1/2, 1/2)`.
//!
//! Scans run in lexicographic index order and keep the first strict
//! minimum, so certificates are deterministic.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{Signed, ToPrimitive};

use crate::exponent::{half, to_f64, Exponent, Rational, ReciprocalPoint, Weight};
use crate::geometry::{barycentric, solve_critical_crossing, solve_crossing_rat};
use crate::instance::{BallSpec, Instance};
use crate::phi::phi;
use crate::{Error, Result};

/// Relative tolerance for reporting ties between components.
pub const TIE_REL: f64 = 1e-9;

/// Indices and exact weights that attain one component.
///
/// `point` is the `(1/p, 1/θ)` at which `Φ` is evaluated: `(1/q, θ̂)` for
/// `Ψ_1`, `(p̂, 1/σ)` for `Ψ_2`, `(1/q, 1/σ)` for `Ψ_6`, and so on.
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    Single {
        alpha: usize,
    },
    Pair {
        alpha: usize,
        beta: usize,
        weight: Weight,
        point: ReciprocalPoint,
    },
    Triple {
        indices: [usize; 3],
        weights: [Weight; 3],
        point: ReciprocalPoint,
    },
}

impl Certificate {
    pub fn indices(&self) -> Vec<usize> {
        match self {
            Certificate::Single { alpha } => alloc::vec![*alpha],
            Certificate::Pair { alpha, beta, .. } => alloc::vec![*alpha, *beta],
            Certificate::Triple { indices, .. } => indices.to_vec(),
        }
    }

    /// Recomputes the component value from the stored weights.
    pub fn replay(&self, inst: &Instance) -> Result<f64> {
        let balls = inst.balls();
        let (log_nu, point) = match self {
            Certificate::Single { alpha } => {
                let b = &balls[*alpha];
                return Ok(b.nu() * phi(b.p(), b.theta(), inst.target(), inst.dims())?.value);
            }
            Certificate::Pair {
                alpha,
                beta,
                weight,
                point,
            } => (
                weight.complement().to_f64() * libm::log(balls[*alpha].nu())
                    + weight.to_f64() * libm::log(balls[*beta].nu()),
                point,
            ),
            Certificate::Triple { indices, weights, point } => (
                indices
                    .iter()
                    .zip(weights)
                    .map(|(&i, w)| w.to_f64() * libm::log(balls[i].nu()))
                    .sum(),
                point,
            ),
        };
        Ok(libm::exp(log_nu) * phi(&point.p(), &point.theta(), inst.target(), inst.dims())?.value)
    }

    /// Checks, exactly, that the weights solve the defining equations of
    /// component `j` and that `point` is the interpolated exponent pair.
    pub fn is_consistent(&self, j: usize, inst: &Instance) -> bool {
        let pts = inst.points();
        let h = half();
        let uq = inst.q().recip();
        let vs = inst.sigma().recip();
        match self {
            Certificate::Single { alpha } => j == 0 && *alpha < pts.len(),
            Certificate::Pair {
                alpha,
                beta,
                weight,
                point,
            } => {
                if !weight.is_interior() || *point != ReciprocalPoint::combine(&pts[*alpha], &pts[*beta], weight) {
                    return false;
                }
                match j {
                    1 => point.u() == uq,
                    2 => point.v() == vs,
                    3 => point.u() == &h,
                    4 => point.v() == &h,
                    5 => crate::geometry::critical_deviation(point, inst.q(), inst.sigma())
                        .is_ok_and(|d| d == Rational::from_integer(0.into())),
                    _ => false,
                }
            }
            Certificate::Triple { indices, weights, point } => {
                let target = match j {
                    6 => (uq.clone(), vs.clone()),
                    7 => (h.clone(), h.clone()),
                    _ => return false,
                };
                let mut u = Rational::from_integer(0.into());
                let mut v = u.clone();
                let mut total = u.clone();
                for (&i, w) in indices.iter().zip(weights) {
                    if !w.value().is_positive() {
                        return false;
                    }
                    u += w.value() * pts[i].u();
                    v += w.value() * pts[i].v();
                    total += w.value();
                }
                total == Rational::from_integer(1.into())
                    && (point.u(), point.v()) == (&target.0, &target.1)
                    && u == target.0
                    && v == target.1
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    /// `+∞` when the candidate set is empty.
    pub value: f64,
    pub certificate: Option<Certificate>,
}

impl Component {
    fn empty() -> Self {
        Self {
            value: f64::INFINITY,
            certificate: None,
        }
    }

    fn offer(&mut self, value: f64, certificate: impl FnOnce() -> Certificate) {
        if value < self.value {
            self.value = value;
            self.certificate = Some(certificate());
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PsiEstimate {
    pub value: f64,
    pub components: [Component; 8],
    /// Every `j` with `Ψ_j` within [`TIE_REL`] of the minimum, ascending.
    pub ties: Vec<usize>,
    /// `n = 0`: the value is the `n^{-1/2} = +∞` convention, i.e. a diameter.
    pub n_is_zero: bool,
}

impl PsiEstimate {
    pub fn component_values(&self) -> [f64; 8] {
        core::array::from_fn(|j| self.components[j].value)
    }
}

/// Which coordinate a pair component interpolates, and the line it targets.
#[derive(Clone, Copy)]
enum Axis {
    U,
    V,
}

fn pair_line_component(inst: &Instance, axis: Axis, target: &Rational, fixed: &Exponent, log_nu: &[f64]) -> Result<Component> {
    let pts = inst.points();
    let mut best = Component::empty();
    let coord: Vec<f64> = pts
        .iter()
        .map(|p| match axis {
            Axis::U => to_f64(p.u()),
            Axis::V => to_f64(p.v()),
        })
        .collect();
    let t = to_f64(target);
    for (a, pa) in pts.iter().enumerate() {
        for (b, pb) in pts.iter().enumerate() {
            if a == b || (coord[a] - t) * (coord[b] - t) > AREA_MARGIN {
                continue;
            }
            let (ca, cb) = match axis {
                Axis::U => (pa.u(), pb.u()),
                Axis::V => (pa.v(), pb.v()),
            };
            let Some(w) = solve_crossing_rat(ca, cb, target) else { continue };
            let point = ReciprocalPoint::combine(pa, pb, &w);
            let (p, theta) = match axis {
                Axis::U => (fixed.clone(), point.theta()),
                Axis::V => (point.p(), fixed.clone()),
            };
            let wf = w.to_f64();
            let value = libm::exp((1.0 - wf) * log_nu[a] + wf * log_nu[b])
                * phi(&p, &theta, inst.target(), inst.dims())?.value;
            best.offer(value, || Certificate::Pair {
                alpha: a,
                beta: b,
                weight: w,
                point,
            });
        }
    }
    Ok(best)
}

fn critical_component(inst: &Instance, log_nu: &[f64]) -> Result<Component> {
    let pts = inst.points();
    let mut best = Component::empty();
    for (a, pa) in pts.iter().enumerate() {
        for (b, pb) in pts.iter().enumerate() {
            if a == b {
                continue;
            }
            let Some((w, point)) = solve_critical_crossing(pa, pb, inst.q(), inst.sigma()) else {
                continue;
            };
            let wf = w.to_f64();
            let value = libm::exp((1.0 - wf) * log_nu[a] + wf * log_nu[b])
                * phi(&point.p(), &point.theta(), inst.target(), inst.dims())?.value;
            best.offer(value, || Certificate::Pair {
                alpha: a,
                beta: b,
                weight: w,
                point,
            });
        }
    }
    Ok(best)
}

/// Float signed areas decide clear rejections and clearly worse values;
/// every triple that could matter is settled exactly.
const AREA_MARGIN: f64 = 1e-12;

fn triple_component(inst: &Instance, target: ReciprocalPoint, log_nu: &[f64]) -> Result<Component> {
    let pts = inst.points();
    let mut best = Component::empty();
    if pts.len() < 3 {
        return Ok(best);
    }
    let phi_value = phi(&target.p(), &target.theta(), inst.target(), inst.dims())?.value;
    let xy: Vec<(f64, f64)> = pts.iter().map(|p| (to_f64(p.u()), to_f64(p.v()))).collect();
    let t = (to_f64(target.u()), to_f64(target.v()));
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            for c in b + 1..pts.len() {
                let det = cross(xy[a], xy[b], xy[c]);
                let sb = cross(xy[a], t, xy[c]);
                let sc = cross(xy[a], xy[b], t);
                let sa = det - sb - sc;
                let sign = if det >= 0.0 { 1.0 } else { -1.0 };
                if [sa, sb, sc].iter().any(|s| sign * s < -AREA_MARGIN) {
                    continue;
                }
                if det.abs() > 1e-4 && best.value.is_finite() {
                    let log = (sa * log_nu[a] + sb * log_nu[b] + sc * log_nu[c]) / det;
                    if libm::exp(log) * phi_value > best.value * (1.0 + 1e-9) {
                        continue;
                    }
                }
                let Some((ta, tb, tc)) = barycentric(&pts[a], &pts[b], &pts[c], &target) else {
                    continue;
                };
                let log = ta.to_f64() * log_nu[a] + tb.to_f64() * log_nu[b] + tc.to_f64() * log_nu[c];
                best.offer(libm::exp(log) * phi_value, || Certificate::Triple {
                    indices: [a, b, c],
                    weights: [ta, tb, tc],
                    point: target.clone(),
                });
            }
        }
    }
    Ok(best)
}

/// Component `Ψ_j`, `0 ≤ j ≤ 7`, with the certificate of its minimizer.
pub fn psi_component(inst: &Instance, j: usize) -> Result<Component> {
    let log_nu: Vec<f64> = inst.balls().iter().map(|b| libm::log(b.nu())).collect();
    let two = Exponent::two();
    let q = inst.q().clone();
    let sigma = inst.sigma().clone();
    match j {
        0 => {
            let mut best = Component::empty();
            for (alpha, b) in inst.balls().iter().enumerate() {
                let value = b.nu() * phi(b.p(), b.theta(), inst.target(), inst.dims())?.value;
                best.offer(value, || Certificate::Single { alpha });
            }
            Ok(best)
        }
        1 => pair_line_component(inst, Axis::U, q.recip(), &q, &log_nu),
        2 => pair_line_component(inst, Axis::V, sigma.recip(), &sigma, &log_nu),
        3 => pair_line_component(inst, Axis::U, &half(), &two, &log_nu),
        4 => pair_line_component(inst, Axis::V, &half(), &two, &log_nu),
        5 => critical_component(inst, &log_nu),
        6 => triple_component(inst, ReciprocalPoint::from_exponents(&q, &sigma), &log_nu),
        7 => triple_component(inst, ReciprocalPoint::from_exponents(&two, &two), &log_nu),
        _ => Err(Error::ComponentIndex(j)),
    }
}

/// `Ψ = min_j Ψ_j` with all components, certificates and the tie set.
pub fn psi(inst: &Instance) -> Result<PsiEstimate> {
    let mut comps = Vec::with_capacity(8);
    for j in 0..8 {
        comps.push(psi_component(inst, j)?);
    }
    let components: [Component; 8] = comps.try_into().expect("eight components");
    let value = components.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
    let ties = (0..8)
        .filter(|&j| components[j].value <= value * (1.0 + TIE_REL))
        .collect();
    Ok(PsiEstimate {
        value,
        components,
        ties,
        n_is_zero: inst.dims().n() == 0,
    })
}

/// Coalesces a large family on an axis-aligned grid of cell side `δ` in
/// reciprocal coordinates, keeping the smallest-radius ball of every
/// occupied cell.
///
/// With `(mk)^δ ≤ 4/3` the reduced intersection `M'` satisfies
/// `M ⊂ M' ⊂ 2M`. Output is ordered by cell.
pub fn family_reduce(balls: &[BallSpec], delta: &Rational, m: u64, k: u64) -> Result<Vec<BallSpec>> {
    let mk = (m as f64) * (k as f64);
    let admissible = delta.is_positive()
        && delta.to_f64().is_some_and(|d| d * libm::log(mk) <= libm::log(4.0 / 3.0));
    if !admissible {
        return Err(Error::InadmissibleDelta(alloc::format!("{delta}")));
    }
    if balls.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let cell = |x: &Rational| (x / delta).floor().to_integer();
    let mut cells: BTreeMap<_, &BallSpec> = BTreeMap::new();
    for ball in balls {
        let key = (cell(ball.p().recip()), cell(ball.theta().recip()));
        let slot = cells.entry(key).or_insert(ball);
        if ball.nu() < slot.nu() {
            *slot = ball;
        }
    }
    Ok(cells.into_values().cloned().collect())
}
