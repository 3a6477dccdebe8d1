//! The single-ball quantity `Φ(p, θ; q, σ, m, k, n)` and `ω_{p,q}`.
//!
//! `Φ` is given by six closed forms on six overlapping regions of
//! `[1, ∞]²`. Region membership is decided exactly on reciprocals; the
//! closed forms are evaluated in log space and exponentiated once.

use core::fmt;

use num_traits::{One, Signed};

use crate::exponent::{half, to_f64, Exponent, Rational};
use crate::{Error, Result};

/// Relative tolerance for agreement of overlapping branches.
pub const BRANCH_AGREEMENT_REL: f64 = 1e-9;

/// Block sizes `m` (inner length), `k` (block count) and the width index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimensions {
    m: u64,
    k: u64,
    n: u64,
}

impl Dimensions {
    pub fn new(m: u64, k: u64, n: u64) -> Result<Self> {
        if m == 0 || k == 0 {
            return Err(Error::ZeroDimension { m, k });
        }
        if n.checked_mul(2).is_none_or(|twice| twice > m.saturating_mul(k)) {
            return Err(Error::WidthIndexTooLarge { m, k, n });
        }
        Ok(Self { m, k, n })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Largest admissible width index, `⌊mk/2⌋`.
    pub fn max_n(&self) -> u64 {
        self.m * self.k / 2
    }

    pub fn with_n(&self, n: u64) -> Result<Self> {
        Self::new(self.m, self.k, n)
    }

    /// Swaps `m` and `k`.
    pub fn transposed(&self) -> Self {
        Self {
            m: self.k,
            k: self.m,
            n: self.n,
        }
    }
}

/// Target exponents `2 ≤ q, σ < ∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TargetSpace {
    q: Exponent,
    sigma: Exponent,
}

impl TargetSpace {
    pub fn new(q: Exponent, sigma: Exponent) -> Result<Self> {
        for (name, e) in [("q", &q), ("sigma", &sigma)] {
            if e.is_infinite() || e.recip() > &half() {
                return Err(Error::TargetOutOfRange {
                    name,
                    value: e.render(),
                });
            }
        }
        Ok(Self { q, sigma })
    }

    pub fn q(&self) -> &Exponent {
        &self.q
    }

    pub fn sigma(&self) -> &Exponent {
        &self.sigma
    }

    pub fn transposed(&self) -> Self {
        Self {
            q: self.sigma.clone(),
            sigma: self.q.clone(),
        }
    }
}

/// `ω_{p,q}`: `1` when `q = 2`, otherwise `min{(1/p − 1/q)/(1/2 − 1/q), 1}`.
///
/// Exact; requires `p ≤ q`.
pub fn omega(p: &Exponent, q: &Exponent) -> Result<Rational> {
    if p.recip() < q.recip() {
        return Err(Error::OmegaDomain);
    }
    let denom = half() - q.recip();
    if !denom.is_positive() {
        return Ok(Rational::one());
    }
    let ratio = (p.recip() - q.recip()) / denom;
    Ok(if ratio > Rational::one() { Rational::one() } else { ratio })
}

/// Set of branch labels `1..=6`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct BranchSet(u8);

impl BranchSet {
    pub fn contains(&self, branch: u8) -> bool {
        (1..=6).contains(&branch) && self.0 & (1 << branch) != 0
    }

    pub fn insert(&mut self, branch: u8) {
        self.0 |= 1 << branch;
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=6).filter(|b| self.contains(*b))
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }
}

impl fmt::Display for BranchSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        f.write_str("{")?;
        for b in self.iter() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
            first = false;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiValue {
    pub value: f64,
    pub branches: BranchSet,
}

/// Logarithms of `m`, `k` and `n`; `ln 0 = −∞` makes `n^{−1/2} = +∞`.
#[derive(Clone, Copy)]
struct Logs {
    m: f64,
    k: f64,
    n: f64,
}

impl Logs {
    fn of(d: &Dimensions) -> Self {
        Self {
            m: libm::log(d.m as f64),
            k: libm::log(d.k as f64),
            n: if d.n == 0 { f64::NEG_INFINITY } else { libm::log(d.n as f64) },
        }
    }
}

/// `ω·ln(base)` with the convention `base^0 = 1` even for `base = +∞`.
fn pow_ln(base_ln: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        0.0
    } else {
        omega * base_ln
    }
}

/// Values of every branch whose region contains `(p, θ)`; index `i` holds
/// branch `i + 1`.
pub fn phi_branches(p: &Exponent, theta: &Exponent, t: &TargetSpace, d: &Dimensions) -> [Option<f64>; 6] {
    let u = p.recip();
    let v = theta.recip();
    let uq = t.q.recip();
    let vs = t.sigma.recip();
    let h = half();
    let logs = Logs::of(d);

    let a = to_f64(&(uq - u)); // 1/q − 1/p
    let b = to_f64(&(vs - v)); // 1/σ − 1/θ
    let uqf = to_f64(uq);
    let vsf = to_f64(vs);
    // ln of n^{-1/2} m^{1/q} k^{1/σ}, n^{-1/2} m^{1/2} k^{1/σ}, n^{-1/2} m^{1/q} k^{1/2}
    let x = -0.5 * logs.n + uqf * logs.m + vsf * logs.k;
    let y = -0.5 * logs.n + 0.5 * logs.m + vsf * logs.k;
    let z = -0.5 * logs.n + uqf * logs.m + 0.5 * logs.k;

    let p_ge_q = u <= uq;
    let p_le_q = u >= uq;
    let t_ge_s = v <= vs;
    let t_le_s = v >= vs;
    let omega_p = if p_le_q { omega(p, &t.q).ok() } else { None };
    let omega_t = if t_le_s { omega(theta, &t.sigma).ok() } else { None };

    let mut out = [None; 6];
    if p_ge_q && t_ge_s {
        out[0] = Some(a * logs.m + b * logs.k);
    }
    if let (true, Some(wt)) = (p_ge_q, &omega_t) {
        out[1] = Some(a * logs.m + pow_ln(y, to_f64(wt)).min(0.0));
    }
    if let (true, Some(wp)) = (t_ge_s, &omega_p) {
        out[2] = Some(b * logs.k + pow_ln(z, to_f64(wp)).min(0.0));
    }
    if let (Some(wp), Some(wt)) = (&omega_p, &omega_t) {
        let (wpf, wtf) = (to_f64(wp), to_f64(wt));
        if u <= &h && wp <= wt {
            out[3] = Some(pow_ln(x, wpf).min(a * logs.m + pow_ln(y, wtf)).min(0.0));
        }
        if v <= &h && wt <= wp {
            out[4] = Some(pow_ln(x, wtf).min(b * logs.k + pow_ln(z, wpf)).min(0.0));
        }
    }
    if u >= &h && v >= &h {
        out[5] = Some(x.min(0.0));
    }
    out.map(|ln| ln.map(libm::exp))
}

fn relative_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// `Φ(p, θ)`, with a check that all applicable branches agree.
pub fn phi(p: &Exponent, theta: &Exponent, t: &TargetSpace, d: &Dimensions) -> Result<PhiValue> {
    phi_from_branches(p, theta, &phi_branches(p, theta, t, d))
}

/// Reduces branch values to a [`PhiValue`]; exposed so harnesses can feed
/// altered branch tables through the same consistency check.
pub fn phi_from_branches(p: &Exponent, theta: &Exponent, values: &[Option<f64>; 6]) -> Result<PhiValue> {
    let mut branches = BranchSet::default();
    let mut reference: Option<(u8, f64)> = None;
    for (i, value) in values.iter().enumerate() {
        let Some(value) = *value else { continue };
        let label = i as u8 + 1;
        branches.insert(label);
        match reference {
            None => reference = Some((label, value)),
            Some((first, first_value)) => {
                if relative_gap(first_value, value) > BRANCH_AGREEMENT_REL {
                    return Err(Error::BranchDisagreement {
                        first,
                        second: label,
                        first_value,
                        second_value: value,
                    });
                }
            }
        }
    }
    match reference {
        Some((_, value)) => Ok(PhiValue { value, branches }),
        None => Err(Error::NoBranch {
            p: p.render(),
            theta: theta.render(),
        }),
    }
}

/// `ν·Φ(p, θ)` for one ball `ν B_{p,θ}`.
pub fn single_ball_width_estimate(
    ball: &crate::BallSpec,
    t: &TargetSpace,
    d: &Dimensions,
) -> Result<f64> {
    Ok(ball.nu() * phi(ball.p(), ball.theta(), t, d)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::exponent::{parse_exponent, rat};

    fn e(s: &str) -> Exponent {
        parse_exponent(s).unwrap()
    }

    fn target(q: &str, s: &str) -> TargetSpace {
        TargetSpace::new(e(q), e(s)).unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&e("6"), &e("6")).unwrap(), Rational::zero());
        assert_eq!(omega(&e("2"), &e("6")).unwrap(), Rational::one());
        assert_eq!(omega(&e("2"), &e("2")).unwrap(), Rational::one());
        // (1/3 − 1/6)/(1/2 − 1/6) = (1/6)/(1/3)
        assert_eq!(omega(&e("3"), &e("6")).unwrap(), rat(1, 2));
        assert_eq!(omega(&e("1"), &e("6")).unwrap(), Rational::one());
        assert_eq!(omega(&e("8"), &e("6")), Err(Error::OmegaDomain));
    }

    #[test]
    fn dimension_and_target_validation() {
        assert!(Dimensions::new(4, 4, 8).is_ok());
        assert!(matches!(Dimensions::new(4, 4, 9), Err(Error::WidthIndexTooLarge { .. })));
        assert!(matches!(Dimensions::new(0, 4, 0), Err(Error::ZeroDimension { .. })));
        assert!(Dimensions::new(3, 3, 4).is_ok());
        assert!(Dimensions::new(3, 3, 5).is_err());
        assert!(TargetSpace::new(e("inf"), e("2")).is_err());
        assert!(TargetSpace::new(e("3/2"), e("2")).is_err());
        assert!(TargetSpace::new(e("2"), e("5/2")).is_ok());
    }

    #[test]
    fn phi_examples() {
        let t = target("2", "2");
        let d = Dimensions::new(4, 9, 5).unwrap();
        let v = phi(&e("inf"), &e("inf"), &t, &d).unwrap();
        assert!((v.value - 6.0).abs() < 1e-12);
        assert!(v.branches.contains(1));

        let d = Dimensions::new(4, 4, 8).unwrap();
        let v = phi(&e("2"), &e("2"), &t, &d).unwrap();
        assert_eq!(v.value, 1.0);
        assert_eq!(v.branches.len(), 6);

        let d = Dimensions::new(16, 16, 0).unwrap();
        let v = phi(&e("4"), &e("4"), &t, &d).unwrap();
        assert!((v.value - 4.0).abs() < 1e-12);
    }

    #[test]
    fn single_ball_examples() {
        let t = target("2", "2");
        let d = Dimensions::new(4, 4, 3).unwrap();
        let ball = crate::BallSpec::new(e("2"), e("2"), 1.0).unwrap();
        assert_eq!(single_ball_width_estimate(&ball, &t, &d).unwrap(), 1.0);

        let d = Dimensions::new(4, 9, 2).unwrap();
        let ball = crate::BallSpec::new(e("inf"), e("inf"), 5.0).unwrap();
        assert!((single_ball_width_estimate(&ball, &t, &d).unwrap() - 30.0).abs() < 1e-12);

        // p = q, θ = σ with n ≤ m^{2/q} k^{2/σ}: every applicable branch gives 1
        let t = target("4", "3");
        let d = Dimensions::new(16, 27, 36).unwrap();
        let ball = crate::BallSpec::new(e("4"), e("3"), 1.0).unwrap();
        let v = phi(ball.p(), ball.theta(), &t, &d).unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
        assert!(v.branches.len() >= 4);
    }

    #[test]
    fn case_two_formula() {
        // p ≥ q, θ ≤ σ: m^{1/q−1/p} min{1, (n^{-1/2} m^{1/2} k^{1/σ})^{ω_{θ,σ}}}
        let t = target("4", "4");
        let d = Dimensions::new(16, 64, 400).unwrap();
        let v = phi(&e("8"), &e("3"), &t, &d).unwrap();
        let w = (1.0 / 3.0 - 0.25) / 0.25;
        let y: f64 = 400f64.powf(-0.5) * 16f64.powf(0.5) * 64f64.powf(0.25);
        let expected = 16f64.powf(0.25 - 0.125) * y.powf(w).min(1.0);
        assert!((v.value - expected).abs() < 1e-12 * expected);
        assert!(v.branches.contains(2));
    }

    #[test]
    fn n_zero_selects_finite_branches() {
        let t = target("4", "4");
        let d = Dimensions::new(8, 8, 0).unwrap();
        let v = phi(&e("1"), &e("1"), &t, &d).unwrap();
        assert_eq!(v.value, 1.0);
        let v = phi(&e("inf"), &e("1"), &t, &d).unwrap();
        assert!((v.value - 8f64.powf(0.25)).abs() < 1e-12);
    }

    #[test]
    fn disagreement_is_reported() {
        let mut values = [Some(1.0), None, Some(1.5), None, None, None];
        let err = phi_from_branches(&e("2"), &e("2"), &values).unwrap_err();
        assert!(matches!(err, Error::BranchDisagreement { first: 1, second: 3, .. }));
        values[2] = Some(1.0 + 1e-12);
        assert!(phi_from_branches(&e("2"), &e("2"), &values).is_ok());
        assert!(matches!(phi_from_branches(&e("2"), &e("2"), &[None; 6]), Err(Error::NoBranch { .. })));
    }
}
