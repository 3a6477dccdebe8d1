use mixwidth_core::exponent::parse_exponent;
use mixwidth_core::oracles::{exact_width_euclidean_ball, exact_width_linf, numeric_width_estimate, Budget};
use mixwidth_core::{BallSpec, Exponent, TargetSpace};

fn e(s: &str) -> Exponent {
    parse_exponent(s).unwrap()
}

fn ball(p: &str, t: &str, nu: f64) -> BallSpec {
    BallSpec::new(e(p), e(t), nu).unwrap()
}

fn target(s: &str) -> TargetSpace {
    TargetSpace::new(e(s), e(s)).unwrap()
}

const BUDGET: Budget = Budget {
    restarts: 64,
    iterations: 100,
};

#[test]
fn heuristic_is_nonincreasing_in_n() {
    let fam = [ball("inf", "2", 1.0), ball("2", "inf", 1.5)];
    let t = target("2");
    let mut last = f64::INFINITY;
    for n in 0..=6 {
        let s = numeric_width_estimate(&fam, 2, 3, n, &t, BUDGET, 3).unwrap();
        assert!(s.estimate <= last * 1.02, "n={n}: {} after {last}", s.estimate);
        last = s.estimate;
    }
}

#[test]
fn heuristic_matches_euclidean_ball() {
    let t = target("2");
    for (m, k) in [(1, 3), (2, 2), (3, 3), (2, 4)] {
        for n in 0..m * k {
            let s = numeric_width_estimate(&[ball("2", "2", 1.0)], m, k, n, &t, BUDGET, 9).unwrap();
            let exact = exact_width_euclidean_ball(m * k, n).unwrap();
            assert!((s.estimate / exact - 1.0).abs() <= 0.15, "m={m} k={k} n={n}: {}", s.estimate);
        }
    }
}

#[test]
fn heuristic_matches_cube_widths() {
    for (q, dims) in [("2", vec![(1, 2), (3, 3), (2, 4)]), ("3", vec![(1, 3), (2, 2)])] {
        let t = target(q);
        for (m, k) in dims {
            for n in 0..m * k {
                let s = numeric_width_estimate(&[ball("inf", "inf", 1.0)], m, k, n, &t, BUDGET, 21).unwrap();
                let exact = exact_width_linf(m * k, n, &e(q)).unwrap();
                assert!((s.estimate / exact - 1.0).abs() <= 0.15, "q={q} m={m} k={k} n={n}: {} vs {exact}", s.estimate);
            }
        }
    }
}

#[test]
fn heuristic_scales_with_radii() {
    let t = target("2");
    let fam = [ball("inf", "1", 1.0), ball("3/2", "inf", 0.7)];
    let scaled: Vec<BallSpec> = fam.iter().map(|b| b.with_nu(b.nu() * 3.5).unwrap()).collect();
    for n in [1, 2, 3] {
        let a = numeric_width_estimate(&fam, 2, 3, n, &t, BUDGET, 4).unwrap().estimate;
        let b = numeric_width_estimate(&scaled, 2, 3, n, &t, BUDGET, 4).unwrap().estimate;
        assert!((b / (3.5 * a) - 1.0).abs() <= 0.01, "n={n}: {a} {b}");
    }
}
