//! Built-in section-algebra models.

use super::model::{ProductEntry, SectionAlgebraModel};
use crate::exact::{ExactMatrix, GaussianRational as Q};

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn products(n_max: usize, q_dims: &[usize], entry: impl Fn(usize, usize, usize, usize) -> Option<usize>) -> Vec<ProductEntry> {
    let mut out = Vec::new();
    for a in 1..=n_max {
        for b in a..=n_max.saturating_sub(a) {
            let (da, db, dc) = (q_dims[a - 1], q_dims[b - 1], q_dims[a + b - 1]);
            let mut m = ExactMatrix::zeros(dc, da * db);
            let mut rows = m.to_rows();
            for i in 0..da {
                for j in 0..db {
                    if let Some(k) = entry(a, b, i, j) {
                        rows[k][i * db + j] = q(1);
                    }
                }
            }
            if dc > 0 {
                m = ExactMatrix::from_rows(rows).expect("rectangular");
            }
            out.push(ProductEntry { a, b, matrix: m });
        }
    }
    out
}

/// `[0 | I_k]` with `zeros` leading zero columns.
fn padded_identity(zeros: usize, k: usize) -> ExactMatrix {
    ExactMatrix::from_fn(k, zeros + k, |i, j| if j == zeros + i { q(1) } else { q(0) })
}

/// Degree-one functions on an elliptic curve with a single pole at the origin:
/// `S_n` has basis of pole orders `{0, 2, 3, …, n}`, `r_n` reads the `z^{−n}`
/// coefficient, which is `1` for `℘^k` and `−2` for `℘^k℘′`.
pub fn elliptic(n_max: usize, v: Q) -> SectionAlgebraModel {
    let s_dims: Vec<usize> = (1..=n_max).collect();
    let q_dims = vec![1; n_max];
    let mut h1_dims = vec![0; n_max + 1];
    h1_dims[0] = 1;
    let restriction = (1..=n_max)
        .map(|n| {
            let lead = match n {
                1 => 0,
                n if n % 2 == 0 => 1,
                _ => -2,
            };
            ExactMatrix::from_fn(1, n, |_, j| if j + 1 == n { q(lead) } else { q(0) })
        })
        .collect();
    let connecting = (1..=n_max)
        .map(|n| {
            if n == 1 {
                ExactMatrix::identity(1)
            } else {
                ExactMatrix::zeros(0, 1)
            }
        })
        .collect();
    let mult_by_s = (1..=n_max)
        .map(|n| ExactMatrix::zeros(0, if n == 1 { 1 } else { 0 }))
        .collect();
    SectionAlgebraModel {
        schema_version: crate::SCHEMA_VERSION,
        n_max,
        products: products(n_max, &q_dims, |_, _, _, _| Some(0)),
        s_dims,
        q_dims,
        h1_dims,
        h2_dim: 0,
        restriction,
        connecting,
        mult_by_s,
        cup_v_s: ExactMatrix::zeros(0, 1),
        cup_v_h: ExactMatrix::zeros(0, 0),
        base: vec![q(1)],
        direction: vec![v],
    }
}

/// Tails generated by `σ0` and `η` in degree one, `Q_n` spanned by
/// `σ0^{n−b}η^b`. `S_1 = ⟨s, ξ⟩` with `r_1(ξ) = η`, `H1_1 = ⟨w⟩` with
/// `d_2 = (β, 1, 0)` and `ξ ∪ v = w`.
pub fn two_generator(n_max: usize, beta: i64) -> SectionAlgebraModel {
    assert!(n_max >= 2);
    let q_dims: Vec<usize> = (1..=n_max).map(|n| n + 1).collect();
    let mut s_dims = vec![2, 4];
    s_dims.extend((3..=n_max).map(|n| n + 2));
    let mut h1_dims = vec![0; n_max + 1];
    h1_dims[0] = 1;
    h1_dims[1] = 1;
    let mut restriction = vec![
        ExactMatrix::from_i64(&[&[0, 0], &[0, 1]]),
        ExactMatrix::from_i64(&[&[0, 0, 0, 1], &[0, 0, 0, -beta], &[0, 0, 1, 0]]),
    ];
    restriction.extend((3..=n_max).map(|n| padded_identity(1, n + 1)));
    let mut connecting = vec![
        ExactMatrix::from_i64(&[&[1, 0]]),
        ExactMatrix::from_i64(&[&[beta, 1, 0]]),
    ];
    connecting.extend((3..=n_max).map(|n| ExactMatrix::zeros(0, n + 1)));
    let mut mult_by_s = vec![ExactMatrix::zeros(1, 1), ExactMatrix::zeros(0, 1)];
    mult_by_s.extend((3..=n_max).map(|_| ExactMatrix::zeros(0, 0)));
    SectionAlgebraModel {
        schema_version: crate::SCHEMA_VERSION,
        n_max,
        products: products(n_max, &q_dims, |_, _, i, j| Some(i + j)),
        s_dims,
        q_dims,
        h1_dims,
        h2_dim: 1,
        restriction,
        connecting,
        mult_by_s,
        cup_v_s: ExactMatrix::from_i64(&[&[0, 1]]),
        cup_v_h: ExactMatrix::zeros(1, 1),
        base: vec![q(1), q(0)],
        direction: vec![q(1)],
    }
}

/// Two-generator tails with `∪v` dead on `S_1` while `d_2(σ0²) ≠ 0`.
pub fn obstructed_order_2() -> SectionAlgebraModel {
    let mut m = two_generator(4, 0);
    m.connecting[1] = ExactMatrix::from_i64(&[&[1, 0, 0]]);
    m.restriction[1] = ExactMatrix::from_i64(&[&[0, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
    m.cup_v_s = ExactMatrix::zeros(1, 2);
    m
}

/// Second order is unobstructed, but `d_3` sees `σ0³`.
pub fn obstructed_order_3() -> SectionAlgebraModel {
    let n_max = 3;
    let q_dims = vec![2, 3, 4];
    SectionAlgebraModel {
        schema_version: crate::SCHEMA_VERSION,
        n_max,
        products: products(n_max, &q_dims, |_, _, i, j| Some(i + j)),
        s_dims: vec![2, 4, 4],
        h1_dims: vec![1, 1, 2, 1],
        q_dims,
        h2_dim: 1,
        restriction: vec![
            ExactMatrix::from_i64(&[&[0, 0], &[0, 1]]),
            padded_identity(1, 3),
            ExactMatrix::from_i64(&[&[0, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]),
        ],
        connecting: vec![
            ExactMatrix::from_i64(&[&[1, 0]]),
            ExactMatrix::zeros(1, 3),
            ExactMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 0, 0, 0]]),
        ],
        mult_by_s: vec![
            ExactMatrix::zeros(1, 1),
            ExactMatrix::from_i64(&[&[0], &[1]]),
            ExactMatrix::from_i64(&[&[0, 1]]),
        ],
        cup_v_s: ExactMatrix::zeros(1, 2),
        cup_v_h: ExactMatrix::zeros(1, 1),
        base: vec![q(1), q(0)],
        direction: vec![q(1)],
    }
}

/// `s ∪ v ≠ 0`: `v = v1` survives multiplication by `s`.
pub fn no_first_order() -> SectionAlgebraModel {
    let n_max = 2;
    let q_dims = vec![2, 3];
    SectionAlgebraModel {
        schema_version: crate::SCHEMA_VERSION,
        n_max,
        products: products(n_max, &q_dims, |_, _, i, j| Some(i + j)),
        s_dims: vec![2, 4],
        h1_dims: vec![2, 1, 1],
        q_dims,
        h2_dim: 0,
        restriction: vec![
            ExactMatrix::from_i64(&[&[0, 0], &[0, 1]]),
            padded_identity(1, 3),
        ],
        connecting: vec![
            ExactMatrix::from_i64(&[&[1, 0], &[0, 0]]),
            ExactMatrix::zeros(1, 3),
        ],
        mult_by_s: vec![ExactMatrix::from_i64(&[&[0, 1]]), ExactMatrix::identity(1)],
        cup_v_s: ExactMatrix::from_i64(&[&[1, 1]]),
        cup_v_h: ExactMatrix::zeros(0, 1),
        base: vec![q(1), q(0)],
        direction: vec![q(0), q(1)],
    }
}

/// Elliptic data with `d_1 = 0`: `H1_0` is not hit although `s` kills it.
pub fn d1_zero_violation() -> SectionAlgebraModel {
    let mut m = elliptic(3, q(1));
    m.connecting[0] = ExactMatrix::zeros(1, 1);
    m
}

/// Every space zero.
pub fn zero_model() -> SectionAlgebraModel {
    SectionAlgebraModel {
        schema_version: crate::SCHEMA_VERSION,
        n_max: 1,
        s_dims: vec![0],
        q_dims: vec![0],
        h1_dims: vec![0, 0],
        h2_dim: 0,
        restriction: vec![ExactMatrix::zeros(0, 0)],
        connecting: vec![ExactMatrix::zeros(0, 0)],
        mult_by_s: vec![ExactMatrix::zeros(0, 0)],
        cup_v_s: ExactMatrix::zeros(0, 0),
        cup_v_h: ExactMatrix::zeros(0, 0),
        products: vec![],
        base: vec![],
        direction: vec![],
    }
}

/// Named fixtures for the command line.
pub fn by_name(name: &str, n_max: usize) -> Option<SectionAlgebraModel> {
    Some(match name {
        "elliptic" => elliptic(n_max.max(1), q(1)),
        "two-generator" => two_generator(n_max.max(2), 3),
        "obstructed-order-2" => obstructed_order_2(),
        "obstructed-order-3" => obstructed_order_3(),
        "no-first-order" => no_first_order(),
        "d1-zero" => d1_zero_violation(),
        "zero" => zero_model(),
        _ => return None,
    })
}

pub const NAMES: [&str; 7] = [
    "elliptic",
    "two-generator",
    "obstructed-order-2",
    "obstructed-order-3",
    "no-first-order",
    "d1-zero",
    "zero",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift::model::{validate_model, Axiom};

    #[test]
    fn transversal_fixtures_validate() {
        for m in [elliptic(6, q(1)), two_generator(8, 3), zero_model(), no_first_order()] {
            validate_model(&m).unwrap();
        }
    }

    #[test]
    fn obstructed_fixtures_fail_only_transversality() {
        for m in [obstructed_order_2(), obstructed_order_3()] {
            m.validate_structure().unwrap();
            assert_eq!(m.check_transversality().unwrap_err().which, Axiom::Transversality);
        }
    }

    #[test]
    fn d1_zero_breaks_exactness_at_h1_0() {
        let err = validate_model(&d1_zero_violation()).unwrap_err();
        assert_eq!(err.which, Axiom::ExactnessAtH1 { index: 0 });
    }

    #[test]
    fn json_round_trip_keeps_empty_shapes() {
        for name in NAMES {
            let m = by_name(name, 6).unwrap();
            let back = SectionAlgebraModel::from_json(&m.to_json()).unwrap();
            assert_eq!(back, m, "{name}");
        }
    }
}
