//! Randomized invariant suites. Each suite draws its trials from its own
//! seeded stream, so adding or reordering suites leaves the others intact.
//!
//! A trial yields a measure that passes when it is at most the suite
//! tolerance: a relative error for identities, a relative excess
//! `(lhs − rhs)/|rhs|` for inequalities, `0`/`1` for exact predicates.
//! Trials where the property is vacuous yield `−∞` and are not counted as
//! applicable.

use std::fmt::Write;

use mixwidth_core::exponent::{convex_combine, rat, to_f64};
use mixwidth_core::geometry::{displacement_bound, is_general_position, perturb_to_general_position};
use mixwidth_core::norms::{multiway_interpolation_check, interpolation_check, membership, mixed_norm};
use mixwidth_core::phi::{phi, phi_branches, phi_from_branches};
use mixwidth_core::psi::{family_reduce, psi};
use mixwidth_core::witness::{
    group_apply, v_extreme_point, v_inclusion_scale, v_width_branches_at_threshold, GroupElement,
};
use mixwidth_core::{
    BallSpec, Certificate, Dimensions, Exponent, Instance, Matrix, Rational, ReciprocalPoint, TargetSpace, Weight,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{CliError, Fault};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub applicable: usize,
    pub passed: usize,
    pub tolerance: f64,
    /// Largest measure over applicable trials.
    pub worst: f64,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub trials: usize,
    /// Replaces the tolerance of every suite with a numeric tolerance.
    pub tolerance_rel: Option<f64>,
    pub fault: Option<Fault>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            trials: 500,
            tolerance_rel: None,
            fault: None,
        }
    }
}

type Trial = fn(&mut ChaCha8Rng, &SuiteOptions) -> Result<(f64, String), CliError>;

struct Suite {
    name: &'static str,
    tolerance: f64,
    /// Whether `--tolerance-rel` applies.
    numeric: bool,
    trial: Trial,
}

const VACUOUS: f64 = f64::NEG_INFINITY;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn excess(lhs: f64, rhs: f64) -> f64 {
    if lhs <= rhs {
        if rhs == 0.0 { 0.0 } else { (lhs - rhs) / rhs.abs() }
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        (lhs - rhs) / rhs.abs()
    }
}

fn flag(ok: bool) -> f64 {
    if ok { 0.0 } else { 1.0 }
}

// Random inputs.

fn unit_rational(rng: &mut ChaCha8Rng) -> Rational {
    let d = rng.random_range(1..=24i64);
    rat(rng.random_range(0..=d), d)
}

fn exponent(rng: &mut ChaCha8Rng) -> Exponent {
    Exponent::from_recip(unit_rational(rng)).expect("unit interval")
}

fn target_exponent(rng: &mut ChaCha8Rng) -> Exponent {
    let choices = [rat(1, 2), rat(2, 5), rat(1, 3), rat(1, 4), rat(1, 6)];
    Exponent::from_recip(choices[rng.random_range(0..choices.len())].clone()).expect("valid")
}

fn target(rng: &mut ChaCha8Rng) -> TargetSpace {
    TargetSpace::new(target_exponent(rng), target_exponent(rng)).expect("finite and >= 2")
}

fn dims(rng: &mut ChaCha8Rng, max: u64) -> Dimensions {
    let m = rng.random_range(1..=max);
    let k = rng.random_range(1..=max);
    Dimensions::new(m, k, rng.random_range(0..=m * k / 2)).expect("n <= mk/2")
}

fn ball(rng: &mut ChaCha8Rng) -> BallSpec {
    BallSpec::new(exponent(rng), exponent(rng), rng.random_range(0.1..10.0)).expect("positive radius")
}

fn balls(rng: &mut ChaCha8Rng, max: usize) -> Vec<BallSpec> {
    let count = rng.random_range(1..=max);
    (0..count).map(|_| ball(rng)).collect()
}

fn instance(rng: &mut ChaCha8Rng, max_balls: usize) -> Result<Instance, CliError> {
    let d = dims(rng, 64);
    let t = target(rng);
    Ok(Instance::new(d, t, balls(rng, max_balls))?)
}

fn matrix(rng: &mut ChaCha8Rng, m: usize, k: usize) -> Matrix {
    Matrix::from_fn(m, k, |_, _| rng.random_range(-2.0..2.0))
}

fn describe(inst: &Instance) -> String {
    let mut s = format!(
        "m={} k={} n={} q={} sigma={} balls=",
        inst.dims().m(),
        inst.dims().k(),
        inst.dims().n(),
        inst.q(),
        inst.sigma()
    );
    for b in inst.balls() {
        let _ = write!(s, "({},{},{})", b.p(), b.theta(), b.nu());
    }
    s
}

// Suites.

fn phi_transpose_symmetry(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let (p, th, t, d) = (exponent(rng), exponent(rng), target(rng), dims(rng, 64));
    let a = phi(&p, &th, &t, &d)?.value;
    let b = phi(&th, &p, &t.transposed(), &d.transposed())?.value;
    Ok((rel(a, b), format!("p={p} theta={th} q={} sigma={} {d:?}: {a} vs {b}", t.q(), t.sigma())))
}

/// An exponent pair on a boundary between `Φ` regions.
fn boundary_pair(rng: &mut ChaCha8Rng, t: &TargetSpace) -> (Exponent, Exponent) {
    let (uq, vs) = (t.q().recip().clone(), t.sigma().recip().clone());
    let e = |u: Rational| Exponent::from_recip(u).expect("unit interval");
    match rng.random_range(0..6) {
        0 => (t.q().clone(), exponent(rng)),
        1 => (exponent(rng), t.sigma().clone()),
        2 => (Exponent::two(), exponent(rng)),
        3 => (exponent(rng), Exponent::two()),
        4 => (t.q().clone(), t.sigma().clone()),
        _ => {
            // ω_{p,q} = ω_{θ,σ} = w on the segment towards (1/2, 1/2).
            let w = unit_rational(rng);
            let h = rat(1, 2);
            let u = &uq + &w * (&h - &uq);
            let v = &vs + &w * (&h - &vs);
            (e(u), e(v))
        }
    }
}

fn phi_branch_overlap(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<(f64, String), CliError> {
    let t = target(rng);
    let d = dims(rng, 64);
    let (p, th) = boundary_pair(rng, &t);
    let mut values = phi_branches(&p, &th, &t, &d);
    if opts.fault == Some(Fault::PhiBranch) {
        if let Some(v) = values.iter_mut().flatten().next() {
            *v *= 1.5;
        }
    }
    let present: Vec<(usize, f64)> = values.iter().enumerate().filter_map(|(i, v)| v.map(|v| (i + 1, v))).collect();
    let mut gap: f64 = 0.0;
    for (i, a) in &present {
        for (j, b) in &present {
            if i < j {
                gap = gap.max(rel(*a, *b));
            }
        }
    }
    if phi_from_branches(&p, &th, &values).is_err() {
        gap = gap.max(1.0);
    }
    Ok((gap, format!("p={p} theta={th} q={} sigma={} {d:?}: branches {present:?}", t.q(), t.sigma())))
}

fn phi_monotone_n(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let (p, th, t, d) = (exponent(rng), exponent(rng), target(rng), dims(rng, 64));
    let n2 = rng.random_range(d.n()..=d.max_n());
    let a = phi(&p, &th, &t, &d)?.value;
    let b = phi(&p, &th, &t, &d.with_n(n2)?)?.value;
    Ok((excess(b, a), format!("p={p} theta={th} {d:?} n2={n2}: {a} then {b}")))
}

fn psi_homogeneity(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let inst = instance(rng, 4)?;
    let c = rng.random_range(-5.0f64..5.0).exp();
    let a = psi(&inst)?.value;
    let b = psi(&inst.scaled(c)?)?.value;
    Ok((rel(c * a, b), format!("{} c={c}: {a} {b}", describe(&inst))))
}

fn psi_monotone_n(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let inst = instance(rng, 4)?;
    let d = inst.dims();
    let n2 = rng.random_range(d.n()..=d.max_n());
    let a = psi(&inst)?.value;
    let b = psi(&inst.with_n(n2)?)?.value;
    Ok((excess(b, a), format!("{} n2={n2}: {a} then {b}", describe(&inst))))
}

fn psi_monotone_nu(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let inst = instance(rng, 4)?;
    let i = rng.random_range(0..inst.balls().len());
    let c = rng.random_range(1.0..10.0);
    let mut bs = inst.balls().to_vec();
    bs[i] = bs[i].with_nu(bs[i].nu() * c)?;
    let a = psi(&inst)?.value;
    let b = psi(&inst.with_balls(bs)?)?.value;
    Ok((excess(a, b), format!("{} ball {i} x{c}: {a} then {b}", describe(&inst))))
}

fn psi_add_ball(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let inst = instance(rng, 3)?;
    let mut bs = inst.balls().to_vec();
    bs.push(ball(rng));
    let a = psi(&inst)?.value;
    let b = psi(&inst.with_balls(bs)?)?.value;
    Ok((excess(b, a), format!("{}: {a} then {b}", describe(&inst))))
}

fn psi_transpose(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let inst = instance(rng, 4)?;
    let a = psi(&inst)?;
    let b = psi(&inst.transposed())?;
    let (ca, cb) = (a.component_values(), b.component_values());
    let mut worst = rel(a.value, b.value);
    for (i, j) in [(0, 0), (1, 2), (2, 1), (3, 4), (4, 3), (5, 5), (6, 6), (7, 7)] {
        worst = worst.max(rel(ca[i], cb[j]));
    }
    Ok((worst, format!("{}: {ca:?} vs {cb:?}", describe(&inst))))
}

fn psi_certificate_replay(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let inst = instance(rng, 5)?;
    let est = psi(&inst)?;
    let mut worst: f64 = 0.0;
    for (j, c) in est.components.iter().enumerate() {
        match &c.certificate {
            Some(cert) if cert.is_consistent(j, &inst) => worst = worst.max(rel(cert.replay(&inst)?, c.value)),
            Some(_) => worst = f64::INFINITY,
            None if c.value.is_infinite() => {}
            None => worst = f64::INFINITY,
        }
    }
    Ok((worst, describe(&inst)))
}

fn psi_zero_case_inequality(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let raw = instance(rng, 4)?;
    let (m, k) = (raw.dims().m(), raw.dims().k());
    let moved = perturb_to_general_position(&raw.points(), raw.q(), raw.sigma(), m, k, rng.random())?;
    let inst = raw.with_balls(raw.balls().iter().zip(&moved).map(|(b, pt)| b.with_point(pt)).collect())?;
    let est = psi(&inst)?;
    let Some(Certificate::Single { alpha }) = &est.components[0].certificate else {
        return Ok((VACUOUS, String::new()));
    };
    let a = &inst.balls()[*alpha];
    if !est.ties.contains(&0) || a.p().recip() >= inst.q().recip() || a.theta().recip() >= inst.sigma().recip() {
        return Ok((VACUOUS, String::new()));
    }
    let (lm, lk) = ((m as f64).ln(), (k as f64).ln());
    let mut worst = f64::NEG_INFINITY;
    for b in inst.balls() {
        let lhs = a.nu() * ((b.p().recip_f64() - a.p().recip_f64()) * lm + (b.theta().recip_f64() - a.theta().recip_f64()) * lk).exp();
        worst = worst.max(excess(lhs, b.nu()));
    }
    Ok((worst, describe(&inst)))
}

fn interpolation_two_point(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let (m, k) = (rng.random_range(1..=8), rng.random_range(1..=8));
    let x = matrix(rng, m, k);
    let (p1, t1, p2, t2) = (exponent(rng), exponent(rng), exponent(rng), exponent(rng));
    let lam = Weight::new(unit_rational(rng))?;
    let r = interpolation_check(&x, (&p1, &t1), (&p2, &t2), &lam);
    Ok((excess(r.lhs, r.rhs), format!("({p1},{t1}) ({p2},{t2}) lambda={lam}: {} > {}", r.lhs, r.rhs)))
}

fn interpolation_multiway(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let (m, k) = (rng.random_range(1..=8), rng.random_range(1..=8));
    let x = matrix(rng, m, k);
    let count = rng.random_range(2..=4);
    let raw: Vec<i64> = (0..count).map(|_| rng.random_range(1..=12)).collect();
    let total: i64 = raw.iter().sum();
    let specs: Vec<(Exponent, Exponent, Weight)> = raw
        .iter()
        .map(|&w| Ok((exponent(rng), exponent(rng), Weight::new(rat(w, total))?)))
        .collect::<Result<_, CliError>>()?;
    let r = multiway_interpolation_check(&x, &specs)?;
    Ok((excess(r.lhs, r.rhs), format!("{} exponent pairs: {} > {}", specs.len(), r.lhs, r.rhs)))
}

fn group_invariance(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let (m, k) = (rng.random_range(1..=8), rng.random_range(1..=8));
    let x = matrix(rng, m, k);
    let g = GroupElement::random(m, k, rng);
    let (p, t) = (exponent(rng), exponent(rng));
    let a = mixed_norm(&x, &p, &t);
    let b = mixed_norm(&group_apply(&g, &x)?, &p, &t);
    Ok((rel(a, b), format!("{m}x{k} p={p} theta={t}: {a} vs {b}")))
}

fn inclusion_scale_tightness(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let bs = balls(rng, 5);
    let (m, k) = (rng.random_range(1..=16usize), rng.random_range(1..=16usize));
    let (r, l) = (rng.random_range(1..=m), rng.random_range(1..=k));
    let t = v_inclusion_scale(&bs, r as u64, l as u64);
    let ratio = membership(&v_extreme_point(m, k, r, l)?.scaled(t), &bs).ratio;
    Ok(((ratio - 1.0).abs(), format!("{m}x{k} r={r} l={l} t*={t}: ratio {ratio}")))
}

fn inclusion_reduction_soundness(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let bs = balls(rng, 5);
    let (m, k) = (rng.random_range(1..=8usize), rng.random_range(1..=8usize));
    let (r, l) = (rng.random_range(1..=m), rng.random_range(1..=k));
    let t = v_inclusion_scale(&bs, r as u64, l as u64);
    let e = v_extreme_point(m, k, r, l)?;
    let count = rng.random_range(1..=8);
    let weights: Vec<f64> = (0..count).map(|_| rng.random_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let scale = t * rng.random_range(0.0..=1.0);
    let mut x = Matrix::zeros(m, k);
    for w in &weights {
        let y = group_apply(&GroupElement::random(m, k, rng), &e)?;
        for (xi, yi) in x.as_mut_slice().iter_mut().zip(y.as_slice()) {
            *xi += scale * w / total * yi;
        }
    }
    let inside = membership(&x, &bs).inside;
    let outside = !membership(&e.scaled(t * (1.0 + 1e-6)), &bs).inside;
    Ok((flag(inside && outside), format!("{m}x{k} r={r} l={l}: inside {inside}, beyond t* outside {outside}")))
}

fn perturbation_inclusion(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let (m, k) = (rng.random_range(1..=8usize), rng.random_range(1..=8usize));
    let x = matrix(rng, m, k);
    let a = ReciprocalPoint::new(unit_rational(rng), unit_rational(rng))?;
    let bound = displacement_bound(m.max(2) as u64, k as u64);
    let step = |rng: &mut ChaCha8Rng, c: &Rational| {
        let d = rat(rng.random_range(-1000..=1000), 1000) * Rational::from_float(bound * 0.999).expect("finite");
        let out = c + d;
        out.clamp(rat(0, 1), rat(1, 1))
    };
    let b = ReciprocalPoint::new(step(rng, a.u()), step(rng, a.v()))?;
    let du = to_f64(&(a.u() - b.u())).abs();
    let dv = to_f64(&(a.v() - b.v())).abs();
    let factor = (du * (m as f64).ln() + dv * (k as f64).ln()).exp();
    let na = mixed_norm(&x, &a.p(), &a.theta());
    let nb = mixed_norm(&x, &b.p(), &b.theta());
    let measure = excess(nb, factor * na).max(excess(na, factor * nb));
    let measure = if factor < 2.0 { measure } else { f64::INFINITY };
    Ok((measure, format!("{m}x{k} {a} -> {b}: factor {factor}, norms {na} {nb}")))
}

fn continuity(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let inst = instance(rng, 4)?;
    let eps = rat(1, 10_000);
    let moved: Vec<BallSpec> = inst
        .balls()
        .iter()
        .map(|b| {
            let mut nudge = |c: &Rational| {
                let d = rat(rng.random_range(-1000..=1000), 1000) * &eps;
                (c + d).clamp(rat(0, 1), rat(1, 1))
            };
            let pt = b.point();
            let (u, v) = (nudge(pt.u()), nudge(pt.v()));
            Ok(b.with_point(&ReciprocalPoint::new(u, v)?))
        })
        .collect::<Result<_, CliError>>()?;
    let a = psi(&inst)?.value;
    let b = psi(&inst.with_balls(moved)?)?.value;
    Ok(((b / a - 1.0).abs(), format!("{}: {a} vs {b}", describe(&inst))))
}

fn block_width_threshold(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let d = dims(rng, 256);
    let t = target(rng);
    let (r, l) = (rng.random_range(1..=d.m()), rng.random_range(1..=d.k()));
    let (a, b) = v_width_branches_at_threshold(&d, r, l, &t);
    Ok((rel(a, b), format!("{d:?} r={r} l={l}: {a} vs {b}")))
}

fn family_reduce_sandwich(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let bs = balls(rng, 30);
    let (m, k) = (rng.random_range(1..=6usize), rng.random_range(2..=6usize));
    let delta = rat(1, 20);
    let reduced = family_reduce(&bs, &delta, m as u64, k as u64)?;
    let halved: Vec<BallSpec> = reduced.iter().map(|b| b.with_nu(b.nu() / 2.0)).collect::<Result<_, _>>()?;
    let mut ok = true;
    for _ in 0..20 {
        let dir = matrix(rng, m, k);
        let s: f64 = rng.random_range(0.0..=1.0);
        ok &= membership(&dir.scaled(s / membership(&dir, &halved).ratio), &bs).inside;
        ok &= membership(&dir.scaled(s / membership(&dir, &bs).ratio), &reduced).inside;
    }
    Ok((flag(ok), format!("{} balls -> {} cells on {m}x{k}", bs.len(), reduced.len())))
}

fn general_position_perturb(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let t = target(rng);
    let (m, k) = (rng.random_range(1..=64u64), rng.random_range(2..=64u64));
    let count = rng.random_range(1..=6);
    let mut pts: Vec<ReciprocalPoint> = Vec::new();
    // Coarse grids produce many coincidences with critical values.
    while pts.len() < count {
        let d = rng.random_range(1..=4i64);
        let pt = ReciprocalPoint::new(rat(rng.random_range(0..=d), d), rat(rng.random_range(0..=d), d))?;
        if !pts.contains(&pt) {
            pts.push(pt);
        }
    }
    let out = perturb_to_general_position(&pts, t.q(), t.sigma(), m, k, rng.random())?;
    let gp = is_general_position(&out, t.q(), t.sigma())?.holds();
    let bound = displacement_bound(m, k);
    let within = pts
        .iter()
        .zip(&out)
        .all(|(a, b)| to_f64(&(a.u() - b.u())).abs() < bound && to_f64(&(a.v() - b.v())).abs() < bound);
    Ok((flag(gp && within), format!("{} points, q={} sigma={}: general {gp}, within {within}", pts.len(), t.q(), t.sigma())))
}

fn interpolated_exponent_round_trip(rng: &mut ChaCha8Rng, _: &SuiteOptions) -> Result<(f64, String), CliError> {
    let (a, b) = (exponent(rng), exponent(rng));
    let w = Weight::new(unit_rational(rng))?;
    let c = convex_combine(&a, &b, &w);
    let ok = match mixwidth_core::geometry::solve_crossing(&a, &b, &c) {
        Some(found) => found == w,
        None => a == b || !w.is_interior(),
    };
    Ok((flag(ok), format!("a={a} b={b} w={w} -> {c}")))
}

const SUITES: &[Suite] = &[
    Suite { name: "phi_transpose_symmetry", tolerance: 1e-12, numeric: true, trial: phi_transpose_symmetry },
    Suite { name: "phi_branch_overlap", tolerance: 1e-9, numeric: true, trial: phi_branch_overlap },
    Suite { name: "phi_monotone_n", tolerance: 1e-12, numeric: true, trial: phi_monotone_n },
    Suite { name: "psi_homogeneity", tolerance: 1e-12, numeric: true, trial: psi_homogeneity },
    Suite { name: "psi_monotone_n", tolerance: 1e-12, numeric: true, trial: psi_monotone_n },
    Suite { name: "psi_monotone_nu", tolerance: 1e-12, numeric: true, trial: psi_monotone_nu },
    Suite { name: "psi_add_ball", tolerance: 1e-12, numeric: true, trial: psi_add_ball },
    Suite { name: "psi_transpose", tolerance: 1e-12, numeric: true, trial: psi_transpose },
    Suite { name: "psi_certificate_replay", tolerance: 1e-12, numeric: true, trial: psi_certificate_replay },
    Suite { name: "psi_zero_case_inequality", tolerance: 1e-9, numeric: true, trial: psi_zero_case_inequality },
    Suite { name: "interpolation_two_point", tolerance: 1e-12, numeric: true, trial: interpolation_two_point },
    Suite { name: "interpolation_multiway", tolerance: 1e-12, numeric: true, trial: interpolation_multiway },
    Suite { name: "group_invariance", tolerance: 1e-14, numeric: true, trial: group_invariance },
    Suite { name: "inclusion_scale_tightness", tolerance: 1e-12, numeric: true, trial: inclusion_scale_tightness },
    Suite { name: "inclusion_reduction_soundness", tolerance: 0.0, numeric: false, trial: inclusion_reduction_soundness },
    Suite { name: "perturbation_inclusion", tolerance: 1e-12, numeric: true, trial: perturbation_inclusion },
    Suite { name: "continuity", tolerance: 0.05, numeric: false, trial: continuity },
    Suite { name: "block_width_threshold", tolerance: 1e-9, numeric: true, trial: block_width_threshold },
    Suite { name: "family_reduce_sandwich", tolerance: 0.0, numeric: false, trial: family_reduce_sandwich },
    Suite { name: "general_position_perturb", tolerance: 0.0, numeric: false, trial: general_position_perturb },
    Suite { name: "crossing_round_trip", tolerance: 0.0, numeric: false, trial: interpolated_exponent_round_trip },
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

fn stream_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (index as u64 + 1).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

fn run(index: usize, suite: &Suite, opts: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let tolerance = match (suite.numeric, opts.tolerance_rel) {
        (true, Some(t)) => t,
        _ => suite.tolerance,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(opts.seed, index));
    let mut report = SuiteReport {
        name: suite.name,
        trials: opts.trials,
        applicable: 0,
        passed: 0,
        tolerance,
        worst: f64::NEG_INFINITY,
        first_failure: None,
    };
    for trial in 0..opts.trials {
        let (measure, detail) = (suite.trial)(&mut rng, opts)?;
        if measure == VACUOUS {
            report.passed += 1;
            continue;
        }
        report.applicable += 1;
        if measure > report.worst || measure.is_nan() {
            report.worst = measure;
        }
        if measure <= tolerance {
            report.passed += 1;
        } else if report.first_failure.is_none() {
            report.first_failure = Some(format!("trial {trial}: measure {measure}; {detail}"));
        }
    }
    Ok(report)
}

/// Runs the named suite.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport, CliError> {
    let (index, suite) = SUITES
        .iter()
        .enumerate()
        .find(|(_, s)| s.name == name)
        .ok_or_else(|| CliError::Config(format!("unknown suite {name:?}")))?;
    run(index, suite, opts)
}

pub fn run_all(opts: &SuiteOptions) -> Result<Vec<SuiteReport>, CliError> {
    SUITES.iter().enumerate().map(|(i, s)| run(i, s, opts)).collect()
}

pub fn render_table(reports: &[SuiteReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(
            out,
            "{} {:<30} {:>4}/{:<4} applicable {:>4}  worst {:>12.3e}  tolerance {:.0e}",
            if r.ok() { "PASS" } else { "FAIL" },
            r.name,
            r.passed,
            r.trials,
            r.applicable,
            r.worst,
            r.tolerance
        );
        if let Some(f) = &r.first_failure {
            let _ = writeln!(out, "     first failure: {f}");
        }
    }
    out
}
