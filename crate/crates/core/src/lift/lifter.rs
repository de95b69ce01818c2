use serde::Serialize;
use thiserror::Error;

use super::model::{unit_basis, AxiomViolation, SectionAlgebraModel};
use crate::exact::matrix::is_zero_vector;
use crate::exact::GaussianRational as Q;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error(transparent)]
    Axiom(#[from] AxiomViolation),
    #[error("no first-order deformation: s ∪ v = {} ≠ 0", show(.mult_image))]
    NoFirstOrderDeformation { mult_image: Vec<Q> },
    #[error("obstruction at order {order}: class {}", show(.class))]
    Obstruction { order: usize, class: Vec<Q> },
    #[error("model defect at order {order}: {detail}")]
    ModelDefect { order: usize, detail: String },
    #[error("order {requested} exceeds the model truncation {n_max}")]
    OrderTooHigh { requested: usize, n_max: usize },
}

impl LiftError {
    /// The order at which lifting stopped, when there is one.
    pub fn order(&self) -> Option<usize> {
        match self {
            LiftError::Obstruction { order, .. } | LiftError::ModelDefect { order, .. } => {
                Some(*order)
            }
            LiftError::NoFirstOrderDeformation { .. } => Some(1),
            _ => None,
        }
    }
}

pub(crate) fn show(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

fn zero(dim: usize) -> Vec<Q> {
    vec![Q::from_integer(0); dim]
}

fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scale(c: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| c * x).collect()
}

/// Per-order record. At order 2 `obstruction` is `d_2(σ²)` for the
/// uncorrected σ; at higher orders it is `d_n(q_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderTrace {
    pub order: usize,
    pub obstruction: Vec<Q>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_cup_obstruction: Option<Vec<Q>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrected_obstruction: Option<Vec<Q>>,
    pub q_class: Vec<Q>,
    pub tail: Vec<Q>,
    pub tau: Vec<Q>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftResult {
    pub order_achieved: usize,
    pub normalization: String,
    pub sigma_initial: Vec<Q>,
    pub xi: Vec<Q>,
    pub sigma: Vec<Q>,
    /// `τ^(2)..τ^(N)`.
    pub taus: Vec<Vec<Q>>,
    /// `σ, r_2τ^(2), …, r_Nτ^(N)`: the exponent's top-order classes.
    pub tails: Vec<Vec<Q>>,
    pub trace: Vec<OrderTrace>,
}

pub const NORMALIZATION: &str = "q_n is the t^n coefficient of exp(σt + Σ r_k(τ^(k)) t^k) with the t^n exponent term omitted";

/// Lifting state after some order: the exponent classes `x_1..x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftState {
    pub sigma: Vec<Q>,
    pub xi: Vec<Q>,
    pub taus: Vec<Vec<Q>>,
    pub tails: Vec<Vec<Q>>,
}

/// `σ ∈ Q_1` with `d_1σ = v`, the canonical solution.
pub fn solve_sigma(m: &SectionAlgebraModel) -> Result<Vec<Q>, LiftError> {
    let mult_image = m.mult(1).apply(&m.direction);
    if !is_zero_vector(&mult_image) {
        return Err(LiftError::NoFirstOrderDeformation { mult_image });
    }
    m.d(1)
        .solve(&m.direction)
        .ok_or_else(|| LiftError::ModelDefect {
            order: 1,
            detail: "s ∪ v = 0 but v ∉ im d_1".into(),
        })
}

/// Corrects σ by `r_1(ξ)` so that `d_2(σ²) = 0` and solves for `τ^(2)`.
pub fn second_order_step(
    m: &SectionAlgebraModel,
    sigma: &[Q],
) -> Result<(LiftState, OrderTrace), LiftError> {
    let ob = m.d(2).apply(&m.mul(1, sigma, 1, sigma));
    let v_cup = m.cup_v_h.apply(&ob);
    if !is_zero_vector(&v_cup) {
        return Err(LiftError::ModelDefect {
            order: 2,
            detail: format!("v ∪ d_2σ² = {} ≠ 0", show(&v_cup)),
        });
    }
    let two = Q::from_integer(2);
    let xi = m
        .cup_v_s
        .scale(&two)
        .solve(&ob)
        .ok_or_else(|| LiftError::Obstruction {
            order: 2,
            class: ob.clone(),
        })?;
    let corrected = sub(sigma, &m.r(1).apply(&xi));
    let square = m.mul(1, &corrected, 1, &corrected);
    let corrected_ob = m.d(2).apply(&square);
    if !is_zero_vector(&corrected_ob) {
        return Err(LiftError::ModelDefect {
            order: 2,
            detail: format!("d_2(σ − r_1ξ)² = {} ≠ 0", show(&corrected_ob)),
        });
    }
    let q_class = scale(&Q::from_ratio(1, 2), &square);
    let (tau, tail) = solve_tail(m, 2, &q_class)?;
    let trace = OrderTrace {
        order: 2,
        obstruction: ob,
        v_cup_obstruction: Some(v_cup),
        corrected_obstruction: Some(corrected_ob),
        q_class,
        tail: tail.clone(),
        tau: tau.clone(),
    };
    let state = LiftState {
        sigma: corrected.clone(),
        xi,
        taus: vec![tau],
        tails: vec![corrected, tail],
    };
    Ok((state, trace))
}

/// `τ` with `r_n(τ) = −q`, returning `(τ, r_n(τ))`.
fn solve_tail(m: &SectionAlgebraModel, n: usize, q: &[Q]) -> Result<(Vec<Q>, Vec<Q>), LiftError> {
    let target: Vec<Q> = q.iter().map(|x| -x).collect();
    let tau = m.r(n).solve(&target).ok_or_else(|| LiftError::ModelDefect {
        order: n,
        detail: format!("d_{n}(q_{n}) = 0 but q_{n} ∉ im r_{n}"),
    })?;
    Ok((tau, target))
}

/// Coefficients `E_1..E_n` of `exp(Σ x_k t^k)` in the graded algebra `⊕Q_k`,
/// via `m·E_m = Σ_k k·x_k·E_{m−k}`.
pub fn exp_coefficients(m: &SectionAlgebraModel, xs: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let mut e: Vec<Vec<Q>> = Vec::with_capacity(n);
    for deg in 1..=n {
        let mut acc = xs
            .get(deg - 1)
            .cloned()
            .unwrap_or_else(|| zero(m.q_dim(deg)));
        acc = scale(&Q::from_integer(deg as i64), &acc);
        for k in 1..deg {
            if let Some(x) = xs.get(k - 1) {
                let term = m.mul(k, x, deg - k, &e[deg - k - 1]);
                acc = add(&acc, &scale(&Q::from_integer(k as i64), &term));
            }
        }
        e.push(scale(&Q::from_ratio(1, deg as i64), &acc));
    }
    e
}

pub fn higher_order_step(
    m: &SectionAlgebraModel,
    state: &mut LiftState,
    n: usize,
) -> Result<OrderTrace, LiftError> {
    let q_class = exp_coefficients(m, &state.tails[..n - 1], n).pop().expect("n ≥ 1");
    let ob = m.d(n).apply(&q_class);
    if !is_zero_vector(&ob) {
        return Err(LiftError::Obstruction { order: n, class: ob });
    }
    let (tau, tail) = solve_tail(m, n, &q_class)?;
    state.taus.push(tau.clone());
    state.tails.push(tail.clone());
    Ok(OrderTrace {
        order: n,
        obstruction: ob,
        v_cup_obstruction: None,
        corrected_obstruction: None,
        q_class,
        tail,
        tau,
    })
}

/// Validates structure (not transversality, whose failure is exactly what the
/// obstruction bookkeeping detects) and lifts to order `n`.
pub fn lift_full(m: &SectionAlgebraModel, n: usize) -> Result<LiftResult, LiftError> {
    m.validate_structure()?;
    let sigma = solve_sigma(m)?;
    lift_from_sigma(m, &sigma, n)
}

/// Lifting from a chosen first-order solution `σ` with `d_1σ = v`.
pub fn lift_from_sigma(
    m: &SectionAlgebraModel,
    sigma: &[Q],
    n: usize,
) -> Result<LiftResult, LiftError> {
    if n > m.n_max {
        return Err(LiftError::OrderTooHigh {
            requested: n,
            n_max: m.n_max,
        });
    }
    if m.d(1).apply(sigma) != m.direction {
        return Err(LiftError::ModelDefect {
            order: 1,
            detail: "d_1σ ≠ v".into(),
        });
    }
    if n < 2 {
        return Ok(LiftResult {
            order_achieved: n,
            normalization: NORMALIZATION.into(),
            sigma_initial: sigma.to_vec(),
            xi: zero(m.s_dim(1)),
            sigma: sigma.to_vec(),
            taus: vec![],
            tails: vec![sigma.to_vec()],
            trace: vec![],
        });
    }
    let (mut state, first) = second_order_step(m, sigma)?;
    let mut trace = vec![first];
    for k in 3..=n {
        trace.push(higher_order_step(m, &mut state, k)?);
    }
    Ok(LiftResult {
        order_achieved: n,
        normalization: NORMALIZATION.into(),
        sigma_initial: sigma.to_vec(),
        xi: state.xi,
        sigma: state.sigma,
        taus: state.taus,
        tails: state.tails,
        trace,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "order")]
pub enum LiftCheck {
    Pass,
    Mismatch(usize),
}

/// Recomputes `exp(X)` as `Σ X^k/k!` from the stored `σ` and `τ`s and checks
/// that every coefficient from order 2 on has vanishing top-order class.
pub fn verify_lift(m: &SectionAlgebraModel, result: &LiftResult) -> LiftCheck {
    let n = result.order_achieved;
    if n > m.n_max || result.taus.len() + 1 != n.max(1) {
        return LiftCheck::Mismatch(n);
    }
    if m.d(1).apply(&result.sigma) != m.direction
        || result.sigma != sub(&result.sigma_initial, &m.r(1).apply(&result.xi))
    {
        return LiftCheck::Mismatch(1);
    }
    let mut xs = vec![result.sigma.clone()];
    xs.extend((2..=n).map(|k| m.r(k).apply(&result.taus[k - 2])));
    let mut total: Vec<Vec<Q>> = (1..=n).map(|k| zero(m.q_dim(k))).collect();
    // power[d−1] is the t^d coefficient of X^p
    let mut power: Vec<Vec<Q>> = xs.clone();
    let mut factorial = Q::from_integer(1);
    for p in 1..=n {
        factorial = &factorial * &Q::from_integer(p as i64);
        let inv = Q::from_integer(1) / factorial.clone();
        for d in p..=n {
            total[d - 1] = add(&total[d - 1], &scale(&inv, &power[d - 1]));
        }
        power = (1..=n)
            .map(|d| {
                let mut acc = zero(m.q_dim(d));
                for a in p..d {
                    let b = d - a;
                    if b >= 1 {
                        acc = add(&acc, &m.mul(a, &power[a - 1], b, &xs[b - 1]));
                    }
                }
                acc
            })
            .collect();
    }
    match (2..=n).find(|&d| !is_zero_vector(&total[d - 1])) {
        Some(d) => LiftCheck::Mismatch(d),
        None => LiftCheck::Pass,
    }
}

/// `ker r_n` basis, the gauge freedom in `τ^(n)`.
pub fn gauge_directions(m: &SectionAlgebraModel, n: usize) -> Vec<Vec<Q>> {
    m.r(n).kernel_basis()
}

/// `σ + r_1(ζ)` for every basis vector `ζ` of `S_1`.
pub fn sigma_gauge_shifts(m: &SectionAlgebraModel, sigma: &[Q]) -> Vec<Vec<Q>> {
    unit_basis(m.s_dim(1))
        .iter()
        .map(|zeta| add(sigma, &m.r(1).apply(zeta)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::fixtures;

    #[test]
    fn elliptic_tails_follow_log() {
        let m = fixtures::elliptic(4, Q::from_integer(1));
        let r = lift_full(&m, 4).unwrap();
        let tails: Vec<Q> = r.tails.iter().map(|t| t[0].clone()).collect();
        assert_eq!(
            tails,
            vec![
                Q::from_integer(1),
                Q::from_ratio(-1, 2),
                Q::from_ratio(1, 3),
                Q::from_ratio(-1, 4)
            ]
        );
        assert_eq!(verify_lift(&m, &r), LiftCheck::Pass);
    }

    #[test]
    fn zero_direction_gives_trivial_lift() {
        let m = fixtures::elliptic(5, Q::from_integer(0));
        let r = lift_full(&m, 5).unwrap();
        assert!(r.tails.iter().all(|t| is_zero_vector(t)));
        assert!(r.taus.iter().all(|t| is_zero_vector(t)));
    }

    #[test]
    fn perturbing_tau2_off_kernel_is_caught() {
        let m = fixtures::elliptic(4, Q::from_integer(1));
        let mut r = lift_full(&m, 4).unwrap();
        r.taus[0][1] = &r.taus[0][1] + &Q::from_integer(1);
        assert_eq!(verify_lift(&m, &r), LiftCheck::Mismatch(2));
    }

    #[test]
    fn exp_recursion_matches_power_sum() {
        let m = fixtures::two_generator(8, 3);
        let r = lift_full(&m, 8).unwrap();
        let e = exp_coefficients(&m, &r.tails, 8);
        assert!(e[1..].iter().all(|c| is_zero_vector(c)));
        assert_eq!(verify_lift(&m, &r), LiftCheck::Pass);
    }

    #[test]
    fn order_too_high() {
        let m = fixtures::elliptic(3, Q::from_integer(1));
        assert!(matches!(lift_full(&m, 4), Err(LiftError::OrderTooHigh { .. })));
    }
}
