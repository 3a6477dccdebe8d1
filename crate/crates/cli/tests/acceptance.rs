//! Acceptance criteria C1–C7. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mixwidth::suites::{render_table, run_all, SuiteOptions};
use mixwidth_core::exponent::{parse_exponent, rat};
use mixwidth_core::geometry::{is_general_position, perturb_to_general_position};
use mixwidth_core::norms::{membership, sample_boundary};
use mixwidth_core::oracles::{exact_width_linf, numeric_width_estimate, Budget};
use mixwidth_core::psi::{family_reduce, psi};
use mixwidth_core::witness::best_witness_lower_bound;
use mixwidth_core::{
    BallSpec, Certificate, Dimensions, Exponent, Instance, Rational, ReciprocalPoint, TargetSpace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn e(s: &str) -> Exponent {
    parse_exponent(s).unwrap()
}

fn target(q: &str, sigma: &str) -> TargetSpace {
    TargetSpace::new(e(q), e(sigma)).unwrap()
}

fn ball(p: &str, theta: &str, nu: f64) -> BallSpec {
    BallSpec::new(e(p), e(theta), nu).unwrap()
}

fn recip_ball(u: Rational, v: Rational, nu: f64) -> BallSpec {
    let pt = ReciprocalPoint::new(u, v).unwrap();
    BallSpec::new(pt.p(), pt.theta(), nu).unwrap()
}

fn instance(m: u64, k: u64, n: u64, t: &TargetSpace, balls: Vec<BallSpec>) -> Instance {
    Instance::new(Dimensions::new(m, k, n).unwrap(), t.clone(), balls).unwrap()
}

fn within(elapsed: Duration, limit: f64, what: String) -> Outcome {
    let secs = elapsed.as_secs_f64();
    if secs < limit {
        Ok(format!("{what}; {secs:.2} s"))
    } else {
        Err(format!("{what}; {secs:.2} s exceeds {limit} s"))
    }
}

fn c1() -> Outcome {
    let start = Instant::now();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut count = 0;
    for s in ["2", "3", "4"] {
        let t = target(s, s);
        let band_lo = 2f64.powf(-1.0 / e(s).value_f64()) * 0.99;
        for m in [2u64, 4, 8] {
            for k in [2u64, 4, 8] {
                for n in 0..=m * k / 2 {
                    let exact = exact_width_linf(m * k, n, &e(s)).map_err(|x| x.to_string())?;
                    let value = psi(&instance(m, k, n, &t, vec![ball("inf", "inf", 1.0)])).unwrap().value;
                    let ratio = exact / value;
                    lo = lo.min(ratio);
                    hi = hi.max(ratio);
                    count += 1;
                    if !(ratio >= band_lo && ratio <= 1.01) {
                        return Err(format!("s={s} m={m} k={k} n={n}: ratio {ratio} outside [{band_lo}, 1.01]"));
                    }
                }
            }
        }
    }
    within(start.elapsed(), 1.0, format!("{count} cases, ratio in [{lo:.4}, {hi:.4}]"))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let t = target("2", "2");
    let mut exact_cases = 0;
    for m in 1..=16u64 {
        for k in 1..=16u64 {
            for n in 0..=m * k / 2 {
                let v = psi(&instance(m, k, n, &t, vec![ball("2", "2", 1.0)])).unwrap().value;
                if v != 1.0 {
                    return Err(format!("m={m} k={k} n={n}: psi = {v}"));
                }
                exact_cases += 1;
            }
        }
    }
    let mut worst = 0.0f64;
    let mut numeric_cases = 0;
    for m in 1..=9u64 {
        for k in 1..=9 / m {
            for n in 0..=m * k / 2 {
                let s = numeric_width_estimate(&[ball("2", "2", 1.0)], m, k, n, &t, Budget::default(), 5)
                    .map_err(|x| x.to_string())?;
                let dev = (s.estimate - 1.0).abs();
                worst = worst.max(dev);
                numeric_cases += 1;
                if dev > 0.10 {
                    return Err(format!("m={m} k={k} n={n}: numeric estimate {}", s.estimate));
                }
            }
        }
    }
    within(
        start.elapsed(),
        30.0,
        format!("psi = 1 in {exact_cases} cases; numeric within {:.2}% in {numeric_cases} cases", worst * 100.0),
    )
}

fn c3() -> Outcome {
    let t = target("2", "2");
    let inst = instance(4, 4, 4, &t, vec![ball("inf", "2", 1.0), ball("1", "2", 4.0)]);
    let est = psi(&inst).map_err(|x| x.to_string())?;
    if (est.value - 2.0).abs() > 1e-12 * 2.0 {
        return Err(format!("psi = {}", est.value));
    }
    if est.ties != [0, 1, 3] {
        return Err(format!("ties {:?}", est.ties));
    }
    for j in [1, 3] {
        let c = &est.components[j];
        let Some(Certificate::Pair { weight, point, .. }) = &c.certificate else {
            return Err(format!("psi_{j} has certificate {:?}", c.certificate));
        };
        if *weight.value() != rat(1, 2) || *point.v() != rat(1, 2) || (c.value - 2.0).abs() > 2e-12 {
            return Err(format!("psi_{j} = {} weight {weight} at {point}", c.value));
        }
    }
    Ok("psi = 2, ties {0, 1, 3}, weights 1/2, theta = 2".into())
}

fn c4() -> Outcome {
    let start = Instant::now();
    let opts = SuiteOptions { trials: 500, ..SuiteOptions::default() };
    let reports = run_all(&opts).map_err(|x| x.to_string())?;
    let failed: Vec<_> = reports.iter().filter(|r| !r.ok()).cloned().collect();
    if !failed.is_empty() {
        return Err(render_table(&failed).trim_end().to_string());
    }
    within(start.elapsed(), 60.0, format!("{} suites x 500 trials", reports.len()))
}

fn general_position(balls: Vec<BallSpec>, t: &TargetSpace) -> Vec<BallSpec> {
    let pts: Vec<ReciprocalPoint> = balls.iter().map(BallSpec::point).collect();
    let moved = perturb_to_general_position(&pts, t.q(), t.sigma(), 4, 4, 17).unwrap();
    assert!(is_general_position(&moved, t.q(), t.sigma()).unwrap().holds());
    balls.iter().zip(&moved).map(|(b, p)| b.with_point(p)).collect()
}

fn patterns() -> Vec<Vec<BallSpec>> {
    vec![
        vec![recip_ball(rat(3, 7), rat(5, 9), 1.0)],
        vec![recip_ball(rat(1, 7), rat(4, 5), 1.0), recip_ball(rat(5, 6), rat(1, 9), 2.0)],
        vec![
            recip_ball(rat(1, 8), rat(1, 8), 1.0),
            recip_ball(rat(7, 8), rat(1, 3), 3.0),
            recip_ball(rat(2, 5), rat(9, 10), 1.5),
        ],
    ]
}

fn c5() -> Outcome {
    let start = Instant::now();
    let mut widest = 1.0f64;
    let mut lines = Vec::new();
    let mut failure = None;
    for (q, sigma) in [("2", "2"), ("3", "3"), ("4", "2")] {
        let t = target(q, sigma);
        for (pi, pattern) in patterns().into_iter().enumerate() {
            let balls = general_position(pattern, &t);
            let mut ratios = Vec::new();
            for m in [4u64, 8, 16, 32, 64] {
                let inst = instance(m, m, m * m / 4, &t, balls.clone());
                let lb = best_witness_lower_bound(&inst).map_err(|x| x.to_string())?.value;
                ratios.push(lb / psi(&inst).map_err(|x| x.to_string())?.value);
            }
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().cloned().fold(0.0, f64::max);
            let band = hi / lo;
            widest = widest.max(band);
            let line = format!("(q,sigma)=({q},{sigma}) pattern {}: ratios {ratios:.3?}", pi + 1);
            if !(lo > 0.0 && band <= 4.0) && failure.is_none() {
                failure = Some(line.clone());
            }
            lines.push(line);
        }
    }
    if let Some(f) = failure {
        return Err(format!("band exceeds 4: {f}"));
    }
    within(start.elapsed(), 120.0, format!("{} sweeps, widest band {widest:.3}", lines.len()))
}

fn perturbed(balls: &[BallSpec], eps: &Rational, rng: &mut ChaCha8Rng) -> Vec<BallSpec> {
    let mut nudge = |c: &Rational| {
        let d = rat(rng.random_range(-1000..=1000), 1000) * eps;
        (c + d).clamp(rat(0, 1), rat(1, 1))
    };
    balls
        .iter()
        .map(|b| {
            let pt = b.point();
            let (u, v) = (nudge(pt.u()), nudge(pt.v()));
            b.with_point(&ReciprocalPoint::new(u, v).unwrap())
        })
        .collect()
}

fn c6() -> Outcome {
    let instances = [
        instance(64, 64, 1024, &target("2", "2"), vec![ball("inf", "2", 1.0), ball("1", "2", 4.0)]),
        instance(
            16,
            48,
            100,
            &target("3", "3"),
            vec![ball("3/2", "5", 1.0), ball("7", "6/5", 2.0), ball("4", "4", 0.8)],
        ),
        instance(
            40,
            9,
            37,
            &target("4", "2"),
            vec![ball("inf", "1", 1.0), ball("2", "inf", 3.0), ball("5/4", "3", 1.7), ball("10", "7/4", 0.5)],
        ),
    ];
    let mut summary = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        let base = psi(inst).unwrap().value;
        let mut rng = ChaCha8Rng::seed_from_u64(600 + i as u64);
        let mut devs = Vec::new();
        for eps in [rat(1, 100), rat(1, 1000), rat(1, 10_000)] {
            let mut worst = 0.0f64;
            for _ in 0..50 {
                let moved = inst.with_balls(perturbed(inst.balls(), &eps, &mut rng)).unwrap();
                worst = worst.max((psi(&moved).unwrap().value / base - 1.0).abs());
            }
            devs.push(worst);
        }
        let line = format!("instance {}: {:.3e} {:.3e} {:.3e}", i + 1, devs[0], devs[1], devs[2]);
        if !(devs[0] >= devs[1] && devs[1] >= devs[2] && devs[2] < 0.05) {
            return Err(line);
        }
        summary.push(line);
    }
    Ok(summary.join("; "))
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    let mut worst_ratio = 1.0f64;
    let mut sizes = Vec::new();
    for (m, k) in [(4u64, 4u64), (8, 3), (6, 10), (16, 16), (2, 32)] {
        let balls: Vec<BallSpec> = (0..100)
            .map(|_| {
                let u = rat(rng.random_range(0..=1000), 1000);
                let v = rat(rng.random_range(0..=1000), 1000);
                recip_ball(u, v, rng.random_range(0.2..5.0))
            })
            .collect();
        // Largest δ = 1/d with (mk)^δ ≤ 4/3.
        let d = ((m * k) as f64).ln() / (4.0f64 / 3.0).ln();
        let delta = rat(1, d.ceil() as i64);
        let reduced = family_reduce(&balls, &delta, m, k).map_err(|x| x.to_string())?;
        let (mu, ku) = (m as usize, k as usize);
        for s in 0..1000u64 {
            let scale = rng.random_range(0.0..=1.0);
            let x = sample_boundary(&balls, mu, ku, rng.random()).unwrap().scaled(scale);
            if !membership(&x, &reduced).inside {
                return Err(format!("{m}x{k}: sample {s} of M outside M'"));
            }
            let y = sample_boundary(&reduced, mu, ku, rng.random()).unwrap().scaled(scale / 2.0);
            if !membership(&y, &balls).inside {
                return Err(format!("{m}x{k}: sample {s} of M'/2 outside M"));
            }
        }
        let t = target("3", "2");
        let n = m * k / 3;
        let a = psi(&instance(m, k, n, &t, balls.clone())).unwrap().value;
        let b = psi(&instance(m, k, n, &t, reduced.clone())).unwrap().value;
        let ratio = b / a;
        if !(0.25..=4.0).contains(&ratio) {
            return Err(format!("{m}x{k}: psi ratio {ratio}"));
        }
        worst_ratio = if (ratio.ln()).abs() > worst_ratio.ln().abs() { ratio } else { worst_ratio };
        sizes.push(reduced.len());
    }
    Ok(format!("5 families of 100 balls reduced to {sizes:?}; 2000 samples each, no violations; extreme psi ratio {worst_ratio:.4}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("C1", "single cube ball against exact widths", c1),
        ("C2", "Euclidean ball", c2),
        ("C3", "worked two-ball instance", c3),
        ("C4", "invariant suites", c4),
        ("C5", "witness bound tracks psi", c5),
        ("C6", "continuity in exponents", c6),
        ("C7", "covering reduction", c7),
    ];
    let mut all = true;
    for (id, name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {id} {name}: {detail}"),
            Err(detail) => {
                all = false;
                println!("FAIL {id} {name}: {detail}");
            }
        }
    }
    if all { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
