//! Exact planar predicates on reciprocal points.
//!
//! Every routine here works in `(1/p, 1/θ)` coordinates with exact rationals;
//! strictness of `λ ∈ (0, 1)` and `τ > 0` is decided without tolerance.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exponent::{half, Exponent, Rational, ReciprocalPoint, Weight};
use crate::{Error, Result};

/// Weight `w ∈ (0, 1)` with `(1 − w)·a + w·b = target`, if it exists.
///
/// The first endpoint must differ from the target, so a segment that starts
/// on the target line yields nothing.
pub fn solve_crossing(a: &Exponent, b: &Exponent, target: &Exponent) -> Option<Weight> {
    solve_crossing_rat(a.recip(), b.recip(), target.recip())
}

pub(crate) fn solve_crossing_rat(a: &Rational, b: &Rational, target: &Rational) -> Option<Weight> {
    if a == b || a == target {
        return None;
    }
    let w = (target - a) / (b - a);
    let w = Weight::new(w).ok()?;
    w.is_interior().then_some(w)
}

fn critical_scales(q: &Exponent, sigma: &Exponent) -> Result<(Rational, Rational)> {
    let h = half();
    let dq = &h - q.recip();
    let ds = &h - sigma.recip();
    if !dq.is_positive() || !ds.is_positive() {
        return Err(Error::CriticalLineUndefined);
    }
    Ok((dq, ds))
}

/// Signed deviation of `pt` from the critical line through `(1/q, 1/σ)` and
/// `(1/2, 1/2)`:
/// `(u − 1/q)/(1/2 − 1/q) − (v − 1/σ)/(1/2 − 1/σ)`.
pub fn critical_deviation(pt: &ReciprocalPoint, q: &Exponent, sigma: &Exponent) -> Result<Rational> {
    let (dq, ds) = critical_scales(q, sigma)?;
    Ok(deviation(pt, q, sigma, &dq, &ds))
}

fn deviation(pt: &ReciprocalPoint, q: &Exponent, sigma: &Exponent, dq: &Rational, ds: &Rational) -> Rational {
    (pt.u() - q.recip()) / dq - (pt.v() - sigma.recip()) / ds
}

/// Point where the segment `[a, b]` meets the critical line with the
/// crossing exponents strictly inside `(2, q) × (2, σ)`.
///
/// Returns nothing when `q = 2` or `σ = 2`, when `a` itself lies on the
/// line, or when no interior crossing exists.
pub fn solve_critical_crossing(
    a: &ReciprocalPoint,
    b: &ReciprocalPoint,
    q: &Exponent,
    sigma: &Exponent,
) -> Option<(Weight, ReciprocalPoint)> {
    let (dq, ds) = critical_scales(q, sigma).ok()?;
    let fa = deviation(a, q, sigma, &dq, &ds);
    if fa.is_zero() {
        return None;
    }
    let fb = deviation(b, q, sigma, &dq, &ds);
    if fa == fb {
        return None;
    }
    let w = Weight::new(&fa / (&fa - &fb)).ok()?;
    if !w.is_interior() {
        return None;
    }
    let c = ReciprocalPoint::combine(a, b, &w);
    let h = half();
    let inside = c.u() > q.recip() && c.u() < &h && c.v() > sigma.recip() && c.v() < &h;
    inside.then_some((w, c))
}

fn cross(o: &ReciprocalPoint, a: &ReciprocalPoint, b: &ReciprocalPoint) -> Rational {
    (a.u() - o.u()) * (b.v() - o.v()) - (a.v() - o.v()) * (b.u() - o.u())
}

/// Barycentric coordinates of `target` in the triangle `abc`, returned only
/// when the triangle is nondegenerate and all three weights are strictly
/// positive.
pub fn barycentric(
    a: &ReciprocalPoint,
    b: &ReciprocalPoint,
    c: &ReciprocalPoint,
    target: &ReciprocalPoint,
) -> Option<(Weight, Weight, Weight)> {
    let det = cross(a, b, c);
    if det.is_zero() {
        return None;
    }
    // Sub-areas share the sign of `det` exactly when the target is interior;
    // deciding that first avoids three divisions on every rejected triple.
    let sb = cross(a, target, c);
    let sc = cross(a, b, target);
    let positive = det.is_positive();
    let same = |s: &Rational| if positive { s.is_positive() } else { s.is_negative() };
    if !same(&sb) || !same(&sc) {
        return None;
    }
    let tb = sb / &det;
    let tc = sc / &det;
    let ta = Rational::one() - &tb - &tc;
    if !ta.is_positive() {
        return None;
    }
    Some((Weight::new(ta).ok()?, Weight::new(tb).ok()?, Weight::new(tc).ok()?))
}

/// One failed condition of the general-position test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Condition 1: a coordinate equals `1/2`, `1/q` or `1/σ`.
    CriticalCoordinate { index: usize },
    /// Condition 1: the point lies on the critical line (`q, σ > 2`).
    OnCriticalLine { index: usize },
    /// Condition 2: two points share `u`.
    SharedU { first: usize, second: usize },
    /// Condition 2: two points share `v`.
    SharedV { first: usize, second: usize },
    /// Condition 3: a special point lies on the closed segment.
    SpecialPointOnSegment { first: usize, second: usize, point: ReciprocalPoint },
    /// Condition 4: three points on a line.
    Collinear { indices: [usize; 3] },
}

impl Violation {
    /// Number (1–4) of the general-position condition.
    pub fn condition(&self) -> u8 {
        match self {
            Violation::CriticalCoordinate { .. } | Violation::OnCriticalLine { .. } => 1,
            Violation::SharedU { .. } | Violation::SharedV { .. } => 2,
            Violation::SpecialPointOnSegment { .. } => 3,
            Violation::Collinear { .. } => 4,
        }
    }

    fn indices(&self) -> Vec<usize> {
        match self {
            Violation::CriticalCoordinate { index } | Violation::OnCriticalLine { index } => {
                alloc::vec![*index]
            }
            Violation::SharedU { first, second }
            | Violation::SharedV { first, second }
            | Violation::SpecialPointOnSegment { first, second, .. } => alloc::vec![*first, *second],
            Violation::Collinear { indices } => indices.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralPosition {
    pub violations: Vec<Violation>,
}

impl GeneralPosition {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn on_segment(a: &ReciprocalPoint, b: &ReciprocalPoint, s: &ReciprocalPoint) -> bool {
    if !cross(a, b, s).is_zero() {
        return false;
    }
    let within = |x: &Rational, lo: &Rational, hi: &Rational| {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        x >= lo && x <= hi
    };
    within(s.u(), a.u(), b.u()) && within(s.v(), a.v(), b.v())
}

/// Checks the four general-position conditions and lists every violation.
pub fn is_general_position(
    points: &[ReciprocalPoint],
    q: &Exponent,
    sigma: &Exponent,
) -> Result<GeneralPosition> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoints(i, j));
            }
        }
    }
    let h = half();
    let uq = q.recip();
    let vs = sigma.recip();
    let scales = critical_scales(q, sigma).ok();
    let mut violations = Vec::new();

    for (index, pt) in points.iter().enumerate() {
        if pt.u() == &h || pt.u() == uq || pt.v() == &h || pt.v() == vs {
            violations.push(Violation::CriticalCoordinate { index });
        }
        if let Some((dq, ds)) = &scales {
            if deviation(pt, q, sigma, dq, ds).is_zero() {
                violations.push(Violation::OnCriticalLine { index });
            }
        }
    }

    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i].u() == points[j].u() {
                violations.push(Violation::SharedU { first: i, second: j });
            }
            if points[i].v() == points[j].v() {
                violations.push(Violation::SharedV { first: i, second: j });
            }
        }
    }

    let mut specials: Vec<ReciprocalPoint> = Vec::new();
    for (u, v) in [(&h, &h), (&h, vs), (uq, &h), (uq, vs)] {
        let s = ReciprocalPoint::new(u.clone(), v.clone()).expect("special points lie in the unit square");
        if !specials.contains(&s) {
            specials.push(s);
        }
    }
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for s in &specials {
                if on_segment(&points[i], &points[j], s) {
                    violations.push(Violation::SpecialPointOnSegment {
                        first: i,
                        second: j,
                        point: s.clone(),
                    });
                }
            }
        }
    }

    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for l in j + 1..points.len() {
                if cross(&points[i], &points[j], &points[l]).is_zero() {
                    violations.push(Violation::Collinear { indices: [i, j, l] });
                }
            }
        }
    }

    Ok(GeneralPosition { violations })
}

/// Largest admissible coordinate displacement, `log 2 / log(mk)`.
pub fn displacement_bound(m: u64, k: u64) -> f64 {
    core::f64::consts::LN_2 / libm::log((m as f64) * (k as f64))
}

const OFFSET_BITS: u32 = 16;
const STEP_BITS: u32 = 24;
const MAX_ATTEMPTS: usize = 64;

fn dyadic(numer: i64, bits: u32) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::one() << bits as usize)
}

fn nudge(x: &Rational, step: &Rational, rng: &mut ChaCha8Rng) -> Rational {
    let scale = 1i64 << OFFSET_BITS;
    let j: i64 = rng.random_range(1..scale);
    let offset = step * dyadic(j, OFFSET_BITS);
    let up = x + &offset;
    let down = x - &offset;
    let prefer_up = rng.random::<bool>();
    let in_range = |r: &Rational| !r.is_negative() && r <= &Rational::one();
    match (prefer_up, in_range(&up), in_range(&down)) {
        (true, true, _) | (false, true, false) => up,
        _ => down,
    }
}

/// Moves points into general position, each coordinate by strictly less
/// than `log 2 / log(mk)`.
///
/// Offsets are dyadic rationals drawn from a seeded generator and always
/// measured from the original points, so repeated attempts never accumulate.
/// The step starts at half the bound and is halved after every failed
/// attempt; points named in any violation so far are the ones moved.
pub fn perturb_to_general_position(
    points: &[ReciprocalPoint],
    q: &Exponent,
    sigma: &Exponent,
    m: u64,
    k: u64,
    seed: u64,
) -> Result<Vec<ReciprocalPoint>> {
    let report = is_general_position(points, q, sigma)?;
    if report.holds() {
        return Ok(points.to_vec());
    }
    let mk = m.saturating_mul(k).max(2);
    let start = displacement_bound(mk, 1) / 2.0;
    let mut step = dyadic(libm::floor(start * (1u64 << STEP_BITS) as f64) as i64, STEP_BITS);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut flagged = alloc::vec![false; points.len()];
    let mark = |flagged: &mut Vec<bool>, report: &GeneralPosition| {
        for v in &report.violations {
            for i in v.indices() {
                flagged[i] = true;
            }
        }
    };
    mark(&mut flagged, &report);

    for _ in 0..MAX_ATTEMPTS {
        let candidate: Vec<ReciprocalPoint> = points
            .iter()
            .zip(&flagged)
            .map(|(pt, &moved)| {
                if !moved {
                    return pt.clone();
                }
                let u = nudge(pt.u(), &step, &mut rng);
                let v = nudge(pt.v(), &step, &mut rng);
                ReciprocalPoint::new(u, v).expect("nudged coordinates stay in [0, 1]")
            })
            .collect();
        match is_general_position(&candidate, q, sigma) {
            Ok(r) if r.holds() => return Ok(candidate),
            Ok(r) => mark(&mut flagged, &r),
            Err(Error::DuplicatePoints(i, j)) => {
                flagged[i] = true;
                flagged[j] = true;
            }
            Err(e) => return Err(e),
        }
        step = step / Rational::from_integer(BigInt::from(2));
    }
    Err(Error::PerturbationFailed(MAX_ATTEMPTS))
}
