//! Hodge-number arithmetic for the canonical system: `χ(K_X)`, the gap
//! `p_g − (χ + q − 1)`, `h(X)`, the series coefficient `s_n`, binomial
//! parity, dimension-count bounds, the example-family calculators and the
//! irreducibility classifier.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::exact::{series_expand_power, TruncatedSeries};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LedgerError {
    #[error("invalid Hodge vector: {0}")]
    InvalidHodge(String),
    #[error("parameters out of range: {0}")]
    BadRange(String),
    #[error("input violates the construction's hypotheses: {0}")]
    HypothesisViolation(String),
}

/// `h^{0,0}, …, h^{0,n}` with `h^{0,0} = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeVector {
    n: usize,
    h: Vec<u64>,
}

impl HodgeVector {
    pub fn new(h: Vec<u64>) -> Result<Self, LedgerError> {
        if h.len() < 2 {
            return Err(LedgerError::InvalidHodge(format!(
                "need h^{{0,0}}..h^{{0,n}} with n ≥ 1, got {} entries",
                h.len()
            )));
        }
        if h[0] != 1 {
            return Err(LedgerError::InvalidHodge(format!("h^{{0,0}} = {}, expected 1", h[0])));
        }
        Ok(Self { n: h.len() - 1, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> &[u64] {
        &self.h
    }

    pub fn q(&self) -> u64 {
        self.h[1]
    }

    pub fn p_g(&self) -> u64 {
        self.h[self.n]
    }
}

fn alternating_sum(h: &[u64]) -> i64 {
    h.iter()
        .enumerate()
        .map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) })
        .sum()
}

/// `χ(K_X) = (−1)^n χ(O_X)` and `gap = p_g − (χ + q − 1)`.
pub fn chi_and_gap(hv: &HodgeVector) -> (i64, i64) {
    let chi_o = alternating_sum(&hv.h);
    let chi = if hv.n.is_multiple_of(2) { chi_o } else { -chi_o };
    let gap = hv.p_g() as i64 - (chi + hv.q() as i64 - 1);
    (chi, gap)
}

/// `h(X) = Σ_{j=0}^{⌊(n−1)/2⌋} h^{0, n−1−2j}`.
pub fn h_of_x(hv: &HodgeVector) -> u64 {
    (0..=(hv.n - 1) / 2).map(|j| hv.h[hv.n - 1 - 2 * j]).sum()
}

/// `∏_{j=1}^n (1 + j t)^{(−1)^{j+1} h^{0,n−j}}` modulo `t^{n+1}`.
pub fn s_series(hv: &HodgeVector) -> TruncatedSeries<BigInt> {
    let n = hv.n;
    (1..=n).fold(TruncatedSeries::one(n), |acc, j| {
        let e = hv.h[n - j] as i64;
        let e = if j % 2 == 1 { e } else { -e };
        acc.mul(&series_expand_power(j as i64, e, n))
    })
}

/// Coefficient of `t^n` in [`s_series`]; never depends on `p_g`.
pub fn s_n_coefficient(hv: &HodgeVector) -> BigInt {
    s_series(hv).coeff(hv.n).clone()
}

/// Parity of `C(a, b)` from binary carries: it is odd iff adding `b` and
/// `a − b` in base 2 produces no carry.
pub fn binomial_is_odd(a: u64, b: u64) -> bool {
    b <= a && (b & (a - b)) == 0
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityCheck {
    #[serde(serialize_with = "bigint_string")]
    pub s_n: BigInt,
    pub h_of_x: u64,
    pub s_n_odd: bool,
    pub binomial_odd: bool,
    /// Both parities agree.
    pub parity_ok: bool,
}

fn bigint_string<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn parity_criterion(hv: &HodgeVector) -> ParityCheck {
    let s_n = s_n_coefficient(hv);
    let h = h_of_x(hv);
    let s_n_odd = s_n.is_odd();
    let binomial_odd = binomial_is_odd(h, hv.n as u64);
    ParityCheck {
        s_n,
        h_of_x: h,
        s_n_odd,
        binomial_odd,
        parity_ok: s_n_odd == binomial_odd,
    }
}

/// Geometric hypotheses supplied by the user; never checked numerically.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisFlags {
    /// No fibration of Albanese general type (for surfaces: no irrational
    /// pencil of genus `> q/2`).
    #[serde(default)]
    pub no_agt_fibration: bool,
    /// `0 ∈ V_k(X)` is an isolated point for every `k > 0`.
    #[serde(default)]
    pub isolated_zero: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExorbitanceVerdict {
    Main,
    Exorbitant,
    OutOfHypotheses,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerVerdict {
    pub n: usize,
    pub q: u64,
    pub p_g: u64,
    pub chi: i64,
    pub gap: i64,
    pub ineq_i: bool,
    pub eq_case: bool,
    pub q_equals_n_plus_1: bool,
    /// `χ(K_X) ≥ q − n`, an arithmetic consistency flag.
    pub chi_lower_bound: bool,
    pub h_of_x: u64,
    #[serde(serialize_with = "bigint_string")]
    pub s_n: BigInt,
    pub parity_ok: bool,
    pub exorbitant_verdict: ExorbitanceVerdict,
    pub reason: String,
    pub flags: HypothesisFlags,
    pub warnings: Vec<String>,
}

/// The full ledger for one Hodge vector under the given hypotheses.
pub fn ledger_verdict(hv: &HodgeVector, flags: HypothesisFlags) -> LedgerVerdict {
    let (chi, gap) = chi_and_gap(hv);
    let parity = parity_criterion(hv);
    let n = hv.n;
    let q = hv.q();
    let (exorbitant_verdict, reason) = verdict(n, q, &parity, flags);
    let mut warnings = Vec::new();
    if !parity.parity_ok {
        warnings.push("s_n parity differs from C(h(X), n) parity".to_string());
    }
    let in_scope = exorbitant_verdict != ExorbitanceVerdict::OutOfHypotheses;
    if in_scope && n >= 3 && gap < 0 {
        warnings.push("p_g < χ + q − 1 contradicts the hypotheses".to_string());
    }
    if in_scope && n >= 3 && (gap == 0) != (exorbitant_verdict == ExorbitanceVerdict::Main) {
        warnings.push("gap and parity verdict disagree; the data cannot come from such a variety".into());
    }
    if (chi as i128) < q as i128 - n as i128 {
        warnings.push("χ(K_X) < q − n".to_string());
    }
    LedgerVerdict {
        n,
        q,
        p_g: hv.p_g(),
        chi,
        gap,
        ineq_i: gap >= 0,
        eq_case: gap == 0,
        q_equals_n_plus_1: q == n as u64 + 1,
        chi_lower_bound: chi as i128 >= q as i128 - n as i128,
        h_of_x: parity.h_of_x,
        s_n: parity.s_n,
        parity_ok: parity.parity_ok,
        exorbitant_verdict,
        reason,
        flags,
        warnings,
    }
}

fn verdict(n: usize, q: u64, parity: &ParityCheck, flags: HypothesisFlags) -> (ExorbitanceVerdict, String) {
    use ExorbitanceVerdict::*;
    let n64 = n as u64;
    if n == 1 {
        return (Main, "curve: s_1 = 1 is odd".into());
    }
    if !flags.no_agt_fibration {
        return (OutOfHypotheses, "fibration hypothesis not asserted".into());
    }
    if n == 2 {
        return if q < 2 {
            (OutOfHypotheses, format!("surface with q = {q} < 2"))
        } else if q % 2 == 1 {
            (Main, "surface with odd q: |K| lies in the main component".into())
        } else {
            (Exorbitant, "surface with even q: Σ is a proper hypersurface of |K|".into())
        };
    }
    if q < n64 + 1 {
        return (OutOfHypotheses, format!("q = {q} < n + 1 = {}", n64 + 1));
    }
    if !flags.isolated_zero {
        return (OutOfHypotheses, "isolated-zero hypothesis not asserted".into());
    }
    if q > n64 + 1 {
        return (Exorbitant, format!("q = {q} > n + 1 forces p_g > χ + q − 1"));
    }
    if parity.s_n_odd {
        (Main, format!("q = n + 1 and s_n = {} is odd", parity.s_n))
    } else {
        (Exorbitant, format!("q = n + 1 and s_n = {} is even", parity.s_n))
    }
}

/// Ledger input document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerInput {
    pub n: usize,
    pub h: Vec<u64>,
    #[serde(default)]
    pub flags: HypothesisFlags,
}

impl LedgerInput {
    pub fn hodge_vector(&self) -> Result<HodgeVector, LedgerError> {
        if self.h.len() != self.n + 1 {
            return Err(LedgerError::InvalidHodge(format!(
                "n = {} needs {} entries, got {}",
                self.n,
                self.n + 1,
                self.h.len()
            )));
        }
        HodgeVector::new(self.h.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionBounds {
    /// `(n−2)(q−n) + 2t − 3`, when `q ≥ n + t − 1`.
    pub bound_a: Option<i64>,
    /// `n(q−n) + 1`, when `q < n + t − 1`.
    pub bound_b: Option<i64>,
    /// The resulting lower bound on `p_g − (χ + q − 1)`.
    pub gap_lower_bound: i64,
}

/// Lower bounds for `p_g − (χ + q − t)`, with `t` the generic kernel
/// dimension of `∪s` on `H^1(O_X)`.
pub fn dimension_count_bounds(n: i64, q: i64, t: i64) -> Result<DimensionBounds, LedgerError> {
    if n < 3 || q < n + 1 || t < 2 {
        return Err(LedgerError::BadRange(format!(
            "need n ≥ 3, q ≥ n + 1, t ≥ 2 (got n={n}, q={q}, t={t})"
        )));
    }
    Ok(if q >= n + t - 1 {
        DimensionBounds {
            bound_a: Some((n - 2) * (q - n) + 2 * t - 3),
            bound_b: None,
            gap_lower_bound: (n - 2) * (q - n),
        }
    } else {
        DimensionBounds {
            bound_a: None,
            bound_b: Some(n * (q - n) + 1),
            gap_lower_bound: (n - 1) * (q - n) - n + 2,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QCap {
    pub q_at_most_n_plus_1: bool,
    /// `q − 2`
    pub lhs: i64,
    /// `(n − 1)(q − n)`
    pub rhs: i64,
}

/// The inequality `q − 2 ≥ (n − 1)(q − n)`, which holds exactly when
/// `q ≤ n + 1`.
pub fn q_cap_check(n: i64, q: i64) -> Result<QCap, LedgerError> {
    if n < 3 {
        return Err(LedgerError::BadRange(format!("need n ≥ 3, got {n}")));
    }
    let lhs = q - 2;
    let rhs = (n - 1) * (q - n);
    Ok(QCap {
        q_at_most_n_plus_1: q <= n + 1,
        lhs,
        rhs,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub dim: Option<i64>,
    pub chi: i64,
    pub q: i64,
    pub p_g: i64,
    pub gap: i64,
}

impl Invariants {
    fn new(dim: Option<i64>, chi: i64, q: i64, p_g: i64) -> Self {
        Self {
            dim,
            chi,
            q,
            p_g,
            gap: p_g - (chi + q - 1),
        }
    }
}

/// Double cover `X → Y` branched on `2H`: `χ(K_X) = χ(K_Y) + h^0(K_Y + H)`,
/// `q(X) = q(Y) + h^1(−H)`, `p_g(X) = p_g(Y) + h^0(K_Y + H)`.
pub fn double_cover_invariants(
    chi_y: i64,
    q_y: i64,
    pg_y: i64,
    h0_ky_plus_h: i64,
    h1_minus_h: i64,
) -> Result<Invariants, LedgerError> {
    if [chi_y, q_y, pg_y, h0_ky_plus_h, h1_minus_h].iter().any(|&x| x < 0) {
        return Err(LedgerError::BadRange("double-cover data must be nonnegative".into()));
    }
    Ok(Invariants::new(
        None,
        chi_y + h0_ky_plus_h,
        q_y + h1_minus_h,
        pg_y + h0_ky_plus_h,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseInvariants {
    pub chi: i64,
    pub q: i64,
    pub p_g: i64,
}

/// `Z = Y × C` with `C` of genus 2, for `Y` of dimension `n` with
/// `χ(K_Y) = 0`, `q(Y) = n`, `p_g(Y) = 1`.
pub fn product_with_genus2_curve(n: i64, y: BaseInvariants) -> Result<Invariants, LedgerError> {
    if n < 3 {
        return Err(LedgerError::BadRange(format!("need n ≥ 3, got {n}")));
    }
    let expected = BaseInvariants { chi: 0, q: n, p_g: 1 };
    if y != expected {
        return Err(LedgerError::HypothesisViolation(format!(
            "Y must have χ(K_Y) = 0, q = {n}, p_g = 1; got {y:?}"
        )));
    }
    // χ(K_Z) = χ(K_Y)·χ(K_C) = 0, q(Z) = q(Y) + 2, p_g(Z) = p_g(Y)·p_g(C).
    Ok(Invariants::new(Some(n + 1), 0, n + 2, 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompleteIntersection {
    pub hodge: HodgeVector,
    pub q: u64,
    pub chi: i64,
    pub gap: i64,
}

/// `h^{0,i} = C(q, i)` for `i ≤ n − 2`, `h^{0,n−1} = C(q, n−1) + p_g(Y)`,
/// `q = n + 1`. The gap does not depend on `p_g`, which is fixed by
/// `χ(K_X) = 1`.
pub fn complete_intersection_invariants(n: usize, pg_y: u64) -> Result<CompleteIntersection, LedgerError> {
    if n < 3 {
        return Err(LedgerError::BadRange(format!("need n ≥ 3, got {n}")));
    }
    let q = n as u64 + 1;
    let mut h: Vec<u64> = (0..=n - 2).map(|i| binomial(q, i as u64)).collect();
    h.push(binomial(q, n as u64 - 1) + pg_y);
    let partial = alternating_sum(&h);
    let signed = if n.is_multiple_of(2) { partial } else { -partial };
    let p_g = 1 - signed;
    if p_g < 0 {
        return Err(LedgerError::BadRange(format!("no nonnegative p_g gives χ = 1 (n={n})")));
    }
    h.push(p_g as u64);
    let hodge = HodgeVector::new(h)?;
    let (chi, gap) = chi_and_gap(&hodge);
    assert_eq!(gap, pg_y as i64, "complete-intersection gap must equal p_g(Y)");
    Ok(CompleteIntersection { hodge, q, chi, gap })
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum Cor15Class {
    Curve,
    SurfaceOddQ,
    ThreefoldPlusBoundary,
    ReducibleCertificate { reason: String },
}

/// Which of the irreducible cases `(n, q, gap)` can be, or why the
/// paracanonical system must be reducible.
pub fn classify_cor15(n: u64, q: u64, gap: i64) -> Result<Cor15Class, LedgerError> {
    if n == 0 || q < n + 1 {
        return Err(LedgerError::BadRange(format!("need n ≥ 1 and q ≥ n + 1 (got n={n}, q={q})")));
    }
    Ok(match n {
        1 => Cor15Class::Curve,
        2 if q % 2 == 1 => Cor15Class::SurfaceOddQ,
        2 => Cor15Class::ReducibleCertificate {
            reason: format!("surface with even q = {q}: |K| is exorbitant"),
        },
        _ if q == n + 1 && gap == 0 => Cor15Class::ThreefoldPlusBoundary,
        _ if q != n + 1 => Cor15Class::ReducibleCertificate {
            reason: format!("q = {q} ≠ n + 1 = {}", n + 1),
        },
        _ => Cor15Class::ReducibleCertificate {
            reason: format!("p_g − (χ + q − 1) = {gap} ≠ 0"),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityCounterexample {
    pub h: Vec<u64>,
    #[serde(serialize_with = "bigint_string")]
    pub s_n: BigInt,
    pub h_of_x: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParitySweep {
    pub max_n: usize,
    pub max_h: u64,
    pub checked: u64,
    pub counterexamples: Vec<ParityCounterexample>,
}

/// Checks `s_n ≡ C(h(X), n) mod 2` on every Hodge vector with
/// `1 ≤ n ≤ max_n`, `h^{0,0} = 1` and other entries in `0..=max_h`.
pub fn sweep_parity(max_n: usize, max_h: u64) -> ParitySweep {
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    for n in 1..=max_n {
        let mut h = vec![0u64; n + 1];
        h[0] = 1;
        loop {
            let hv = HodgeVector { n, h: h.clone() };
            let p = parity_criterion(&hv);
            checked += 1;
            if !p.parity_ok {
                counterexamples.push(ParityCounterexample {
                    h: h.clone(),
                    s_n: p.s_n,
                    h_of_x: p.h_of_x,
                });
            }
            // Odometer over h[1..=n].
            let Some(i) = (1..=n).find(|&i| h[i] < max_h) else { break };
            h[i] += 1;
            h[1..i].iter_mut().for_each(|x| *x = 0);
        }
    }
    ParitySweep {
        max_n,
        max_h,
        checked,
        counterexamples,
    }
}

/// `C(a, b)` as a big integer, for cross-checking [`binomial_is_odd`].
pub fn big_binomial(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    (0..b).fold(BigInt::one(), |acc, i| acc * (a - i) / (i + 1))
}
