//! Frozen example values, each checked against an oracle that does not reuse
//! the code path under test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use paracanonical::cup_model::{build_ample_divisor_canonical, build_koszul, serre_pairing};
use paracanonical::exact::pfaffian::standard_symplectic;
use paracanonical::exact::{
    pfaffian_poly, rank_kernel_image, series_expand_power, solve_linear, ExactMatrix,
    GaussianRational as Q, PolyMatrix, SparsePoly,
};
use paracanonical::ledger::{
    self, chi_and_gap, classify_cor15, complete_intersection_invariants, dimension_count_bounds,
    double_cover_invariants, h_of_x, ledger_verdict, parity_criterion,
    product_with_genus2_curve, q_cap_check, s_n_coefficient, BaseInvariants, Cor15Class,
    ExorbitanceVerdict, HodgeVector, HypothesisFlags, LedgerError,
};
use paracanonical::sampling;
use paracanonical::strata::{
    pencil_coefficient, pencil_root_multiplicity, plant_degenerate_point, rank_of_cup_s,
    sigma_polynomial, smooth_point_test, PointKind, SigmaDegree, SkewFamily,
};
use paracanonical::transversality::{
    derivative_complex, incidence_report, is_k_transversal, isolated_point_test,
    tangency_check, unit_vector, wedge_degenerate,
};

const SEED: u64 = 7;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn qs(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

/// Row reduction over ℚ choosing the last usable row as pivot.
fn oracle_rank(m: &ExactMatrix) -> usize {
    let mut rows: Vec<Vec<BigRational>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| {
            assert!(x.is_real());
            x.re().clone()
        }).collect())
        .collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(p) = (rank..rows.len()).rev().find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot[col];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[test]
fn product_of_thin_matrices_has_rank_two() {
    let mut rng = sampling::rng(SEED);
    for _ in 0..10 {
        let a = sampling::rational_matrix(&mut rng, 4, 2, 4);
        let b = sampling::rational_matrix(&mut rng, 2, 6, 4);
        let m = &a * &b;
        let rki = rank_kernel_image(&m);
        assert_eq!(rki.rank, oracle_rank(&m));
        assert_eq!(rki.rank + rki.kernel_basis.len(), 6);
        if oracle_rank(&a) == 2 && oracle_rank(&b) == 2 {
            assert_eq!(rki.rank, 2);
        }
        let x = sampling::nonzero_vector(&mut rng, 6, 3);
        let rhs = m.apply(&x);
        let sol = solve_linear(&m, &rhs).unwrap();
        assert_eq!(m.apply(&sol), rhs);
    }
}

#[test]
fn negative_power_matches_squared_geometric_series() {
    // (1+3t)^{-1} = Σ (−3)^k t^k, squared by hand
    let geo: Vec<BigInt> = (0..=4).map(|k| BigInt::from(-3).pow(k)).collect();
    let square: Vec<BigInt> = (0..=4)
        .map(|n| (0..=n).map(|k| &geo[k] * &geo[n - k]).sum())
        .collect();
    assert_eq!(series_expand_power(3, -2, 4).coeffs(), square.as_slice());
    assert_eq!(square, [1, -6, 27, -108, 405].map(BigInt::from));
}

#[test]
fn generic_four_by_four_pfaffian() {
    // variables a12 a13 a14 a23 a24 a34
    let idx = |i: usize, j: usize| match (i, j) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        _ => 5,
    };
    let m = PolyMatrix::from_fn(4, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Less => SparsePoly::var(idx(i, j), 6),
        std::cmp::Ordering::Greater => -&SparsePoly::var(idx(j, i), 6),
        std::cmp::Ordering::Equal => SparsePoly::zero_in(6),
    });
    let pf = pfaffian_poly(&m).unwrap();
    let v = |i| SparsePoly::var(i, 6);
    let expected = &(&(&v(0) * &v(5)) - &(&v(1) * &v(4))) + &(&v(2) * &v(3));
    assert_eq!(pf, expected);
    assert_eq!(&pf * &pf, m.det());
}

#[test]
fn koszul_cup_matrix_matches_hand_wedge() {
    let m = build_koszul(3, 0).unwrap();
    // e1∧ on Λ¹ → Λ² in the basis (e12, e13, e23)
    let hand = ExactMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
    let cup = m.cup_map(&unit_vector(0, 3), 1).unwrap();
    assert_eq!(cup, hand);
    assert_eq!(oracle_rank(&cup), 2);
}

#[test]
fn ample_model_dimensions() {
    assert_eq!(build_ample_divisor_canonical(3, 2).unwrap().graded_dims(), &[4, 3, 1]);
    let m = build_ample_divisor_canonical(4, 1).unwrap();
    assert_eq!(m.dim(0), 4);
}

#[test]
fn serre_pairing_kernel_is_the_linear_part() {
    let m = build_ample_divisor_canonical(3, 2).unwrap();
    let s = qs(&[5, 1, 0, 0]);
    let c = serre_pairing(&m, &s).unwrap();
    assert_eq!(oracle_rank(&c), 2);
    assert!(c.apply(&unit_vector(0, 3)).iter().all(Q::is_zero));
    // e3 ∧ (e2 ∧ e1) = −e123
    assert_eq!(c[(1, 2)], q(-1));
    assert_eq!(c[(2, 1)], q(1));
}

#[test]
fn derivative_complex_examples() {
    let m = build_ample_divisor_canonical(3, 2).unwrap();
    let c = derivative_complex(&m, &qs(&[1, 1, 0])).unwrap();
    assert_eq!(c.cohomology_dims, vec![2, 0, 0]);
    let m = build_ample_divisor_canonical(4, 2).unwrap();
    assert!(is_k_transversal(&m, &unit_vector(2, 4), 1).unwrap());
    assert!(isolated_point_test(&build_ample_divisor_canonical(4, 1).unwrap(), 50, SEED).unwrap());
}

#[test]
fn shifted_koszul_is_exact_above_zero() {
    // M^0 = V, M^1 = Λ², M^2 = Λ³, M^3 = 0: only slot 0 has cohomology
    let m = build_koszul(3, 1).unwrap();
    let c = derivative_complex(&m, &unit_vector(0, 3)).unwrap();
    assert_eq!(c.cohomology_dims, vec![1, 0, 0, 0]);
    assert!(isolated_point_test(&m, 16, SEED).unwrap());
}

#[test]
fn incidence_examples() {
    let r = incidence_report(&build_ample_divisor_canonical(3, 2).unwrap(), 16, SEED).unwrap();
    assert_eq!(r.dim_i_main, Some(3));
    let r = incidence_report(&build_ample_divisor_canonical(5, 3).unwrap(), 16, SEED).unwrap();
    assert_eq!(r.dim_i_main, Some(6));
    let r = incidence_report(&build_koszul(4, 0).unwrap(), 16, SEED).unwrap();
    assert_eq!(r.dim_i_main, None);
    assert_eq!(serde_json::to_value(&r).unwrap()["dim_i_main"], "no incidence");
}

#[test]
fn wedge_dependence() {
    let forms = vec![qs(&[1, 1, 0]), qs(&[0, 1, 1]), qs(&[1, 2, 1])];
    assert!(wedge_degenerate(&forms).unwrap());
    assert_eq!(oracle_rank(&ExactMatrix::from_rows(forms).unwrap()), 2);
    assert!(!wedge_degenerate(&[qs(&[1, 0]), qs(&[0, 1])]).unwrap());
}

#[test]
fn tangent_to_rank_two_path() {
    let mut rng = sampling::rng(SEED);
    let d = ExactMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]]);
    for _ in 0..5 {
        let (p0, p1) = (sampling::invertible_matrix(&mut rng, 4, 2), sampling::rational_matrix(&mut rng, 4, 4, 2));
        let (q0, q1) = (sampling::invertible_matrix(&mut rng, 4, 2), sampling::rational_matrix(&mut rng, 4, 4, 2));
        // F(t) = (p0 + p1 t) d (q0 + q1 t)
        let f = &(&p0 * &d) * &q0;
        let g = &(&(&p1 * &d) * &q0) + &(&(&p0 * &d) * &q1);
        assert_eq!(oracle_rank(&f), 2);
        assert!(tangency_check(&f, &g).unwrap());
    }
    let zero = ExactMatrix::zeros(2, 2);
    assert!(!tangency_check(&zero, &ExactMatrix::identity(2)).unwrap());
}

#[test]
fn sigma_for_two_random_generators() {
    let mut rng = sampling::rng(SEED);
    let gens: Vec<_> = (0..2).map(|_| sampling::skew_matrix(&mut rng, 4, 4)).collect();
    let f = SkewFamily::new(4, gens).unwrap();
    let d = sigma_polynomial(&f, 4, SEED);
    assert_eq!(d.degree, SigmaDegree::Degree(2));
    assert_eq!(&d.pf_poly * &d.pf_poly, f.poly_matrix().det());
}

#[test]
fn odd_q_surface_family_is_all_of_k() {
    let m = build_ample_divisor_canonical(3, 3).unwrap();
    let f = SkewFamily::from_cup_module(&m).unwrap();
    assert_eq!(sigma_polynomial(&f, 4, SEED).degree, SigmaDegree::AllOfK);
}

#[test]
fn corank_two_forms() {
    let mut rng = sampling::rng(SEED);
    let u = sampling::invertible_matrix(&mut rng, 6, 2);
    let c = &(&u.transpose() * &standard_symplectic(2, 2)) * &u;
    let f = SkewFamily::new(6, vec![c]).unwrap();
    assert_eq!(rank_of_cup_s(&f, &[q(1)]).unwrap(), 4);
    let (f, s) = plant_degenerate_point(&mut rng, 6, 3, 4);
    let rep = smooth_point_test(&f, &s).unwrap();
    assert_eq!(rep.verdict, PointKind::Smooth);
    // gradient against symbolic differentiation of the determinant's root
    let pf = f.pfaffian_poly();
    assert_eq!(rep.gradient, pf.gradient().iter().map(|g| g.eval(&s)).collect::<Vec<_>>());
}

/// `det(λa + μb)` expanded symbolically in two variables.
fn bivariate_det(a: &ExactMatrix, b: &ExactMatrix) -> SparsePoly {
    let n = a.rows();
    PolyMatrix::from_fn(n, |i, j| {
        SparsePoly::linear_form(&[a[(i, j)].clone(), b[(i, j)].clone()])
    })
    .det()
}

#[test]
fn pencil_coefficient_against_bivariate_expansion() {
    let mut rng = sampling::rng(SEED);
    for _ in 0..4 {
        let a = sampling::skew_matrix(&mut rng, 6, 3);
        let b = sampling::skew_matrix(&mut rng, 6, 3);
        let det = bivariate_det(&a, &b);
        assert_eq!(pencil_coefficient(&a, &b).unwrap(), det.coefficient(&[4, 2]));
    }
    let j = standard_symplectic(1, 0);
    let a = standard_symplectic(1, 2).principal_submatrix(&[2, 3, 0, 1]);
    let mut b = ExactMatrix::zeros(4, 4);
    b[(0, 1)] = j[(0, 1)].clone();
    b[(1, 0)] = j[(1, 0)].clone();
    assert_eq!(pencil_coefficient(&a, &b).unwrap(), q(1));
    assert_eq!(pencil_coefficient(&a, &ExactMatrix::zeros(4, 4)).unwrap(), q(0));
}

#[test]
fn corank_four_pencil_has_double_root() {
    let mut rng = sampling::rng(SEED);
    let a = standard_symplectic(1, 4);
    for _ in 0..3 {
        let b = sampling::skew_matrix(&mut rng, 6, 3);
        let pf = {
            let m = PolyMatrix::from_fn(6, |i, j| {
                SparsePoly::linear_form(&[a[(i, j)].clone(), b[(i, j)].clone()])
            });
            pfaffian_poly(&m).unwrap()
        };
        let oracle = (0..=3u32).find(|&k| !pf.coefficient(&[3 - k, k]).is_zero()).unwrap();
        assert_eq!(pencil_root_multiplicity(&a, &b).unwrap(), oracle as usize);
        assert_eq!(oracle, 2);
    }
}

fn brute_chi(h: &[u64]) -> i64 {
    let n = h.len() - 1;
    let chi_o: i64 = h.iter().enumerate().map(|(j, &x)| if j % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
    if n.is_multiple_of(2) { chi_o } else { -chi_o }
}

#[test]
fn chi_and_gap_examples() {
    let hv = HodgeVector::new(vec![1, 3, 3, 1]).unwrap();
    assert_eq!(chi_and_gap(&hv), (0, -1));
    for c in 0..6 {
        for p in 0..6 {
            let h = vec![1, 4, c, p];
            let chi = brute_chi(&h);
            let gap = p as i64 - (chi + 4 - 1);
            assert_eq!(chi_and_gap(&HodgeVector::new(h).unwrap()), (chi, gap));
        }
    }
}

#[test]
fn h_of_x_index_by_index() {
    let h = [1u64, 6, 4, 3, 2, 1];
    // h^{0,4} + h^{0,2} + h^{0,0}
    let oracle = h[4] + h[2] + h[0];
    assert_eq!(h_of_x(&HodgeVector::new(h.to_vec()).unwrap()), oracle);
    assert_eq!(oracle, 7);
}

/// Coefficient of `t^k` in `(1 + jt)^e` via generalized binomials.
fn power_coeff(j: i64, e: i64, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k as i64 {
        c = c * BigInt::from(e - i) / BigInt::from(i + 1);
    }
    c * BigInt::from(j).pow(k as u32)
}

fn oracle_s_n(h: &[u64]) -> BigInt {
    let n = h.len() - 1;
    let mut acc = vec![BigInt::zero(); n + 1];
    acc[0] = BigInt::one();
    for j in 1..=n {
        let e = h[n - j] as i64 * if j % 2 == 1 { 1 } else { -1 };
        let factor: Vec<BigInt> = (0..=n).map(|k| power_coeff(j as i64, e, k)).collect();
        acc = (0..=n)
            .map(|d| (0..=d).map(|k| &acc[k] * &factor[d - k]).sum())
            .collect();
    }
    acc[n].clone()
}

#[test]
fn s_n_examples() {
    assert_eq!(s_n_coefficient(&HodgeVector::new(vec![1, 4, 9]).unwrap()), BigInt::from(2));
    let h = vec![1, 4, 3, 2];
    assert_eq!(s_n_coefficient(&HodgeVector::new(h.clone()).unwrap()), oracle_s_n(&h));
    for h in [vec![1, 2, 5, 1, 3], vec![1, 0, 6, 6, 6, 2], vec![1, 3, 1]] {
        assert_eq!(s_n_coefficient(&HodgeVector::new(h.clone()).unwrap()), oracle_s_n(&h));
    }
}

#[test]
fn parity_examples() {
    let flags = HypothesisFlags {
        no_agt_fibration: true,
        isolated_zero: true,
    };
    let v = ledger_verdict(&HodgeVector::new(vec![1, 3, 5]).unwrap(), flags);
    assert_eq!(v.exorbitant_verdict, ExorbitanceVerdict::Main);
    let v = ledger_verdict(&HodgeVector::new(vec![1, 4, 5]).unwrap(), flags);
    assert_eq!(v.exorbitant_verdict, ExorbitanceVerdict::Exorbitant);
    let hv = HodgeVector::new(vec![1, 4, 3, 2]).unwrap();
    let p = parity_criterion(&hv);
    assert_eq!(p.h_of_x, 4);
    assert!(!p.binomial_odd && !p.s_n_odd);
    assert!(oracle_s_n(hv.h()).is_even_oracle());
    assert_eq!(ledger_verdict(&hv, flags).exorbitant_verdict, ExorbitanceVerdict::Exorbitant);
}

trait EvenOracle {
    fn is_even_oracle(&self) -> bool;
}

impl EvenOracle for BigInt {
    fn is_even_oracle(&self) -> bool {
        (self.abs() % 2u32).is_zero()
    }
}

#[test]
fn dimension_bounds_by_substitution() {
    let b = dimension_count_bounds(3, 4, 2).unwrap();
    assert_eq!((b.bound_a, b.bound_b), (Some(2), None));
    let b = dimension_count_bounds(3, 4, 4).unwrap();
    assert_eq!((b.bound_a, b.bound_b), (None, Some(4)));
    // n=4, q=6: branch (a) for t ≤ 3, branch (b) above
    let b = dimension_count_bounds(4, 6, 3).unwrap();
    assert_eq!((b.bound_a, b.gap_lower_bound), (Some(2 * 2 + 2 * 3 - 3), 4));
    let b = dimension_count_bounds(4, 6, 4).unwrap();
    assert_eq!((b.bound_b, b.gap_lower_bound), (Some(4 * 2 + 1), 3 * 2 - 4 + 2));
}

#[test]
fn q_cap_examples() {
    let c = q_cap_check(3, 4).unwrap();
    assert!(c.q_at_most_n_plus_1);
    assert_eq!((c.lhs, c.rhs), (2, 2));
    assert!(!q_cap_check(3, 5).unwrap().q_at_most_n_plus_1);
    assert!(q_cap_check(5, 6).unwrap().q_at_most_n_plus_1);
}

#[test]
fn example_family_values() {
    for c in 1..5 {
        assert_eq!(double_cover_invariants(0, 3, 1, c, 0).unwrap().gap, -1);
    }
    for n in 3..7 {
        assert_eq!(double_cover_invariants(0, n, 1, 2, 0).unwrap().gap, 2 - n);
    }
    // no branch data: the cover's numbers are Y's own
    let y = double_cover_invariants(0, 3, 1, 0, 0).unwrap();
    assert_eq!(y.gap, -1);
    let z = product_with_genus2_curve(3, BaseInvariants { chi: 0, q: 3, p_g: 1 }).unwrap();
    assert_eq!((z.dim, z.q, z.p_g, z.gap), (Some(4), 5, 2, -2));
    assert_eq!(product_with_genus2_curve(4, BaseInvariants { chi: 0, q: 4, p_g: 1 }).unwrap().gap, -3);
    assert!(matches!(
        product_with_genus2_curve(3, BaseInvariants { chi: 1, q: 3, p_g: 1 }),
        Err(LedgerError::HypothesisViolation(_))
    ));
    for (n, pg) in [(3, 0), (3, 5), (4, 1)] {
        let ci = complete_intersection_invariants(n, pg).unwrap();
        assert_eq!(ci.gap, pg as i64);
        let chi = brute_chi(ci.hodge.h());
        assert_eq!(ci.hodge.p_g() as i64 - (chi + ci.q as i64 - 1), pg as i64);
    }
}

#[test]
fn corollary_classes() {
    assert_eq!(classify_cor15(1, 2, 0).unwrap(), Cor15Class::Curve);
    assert_eq!(classify_cor15(2, 5, 0).unwrap(), Cor15Class::SurfaceOddQ);
    assert!(matches!(classify_cor15(3, 5, 0).unwrap(), Cor15Class::ReducibleCertificate { .. }));
    assert_eq!(classify_cor15(3, 4, 0).unwrap(), Cor15Class::ThreefoldPlusBoundary);
}

#[test]
fn binomial_parity_up_to_ten_thousand() {
    // Pascal's triangle mod 2 as bit rows: row_{a+1} = row_a ^ (row_a << 1)
    const MAX: usize = 10_000;
    let words = MAX / 64 + 1;
    let mut row = vec![0u64; words];
    row[0] = 1;
    for a in 0..=MAX {
        for b in 0..=a {
            let bit = (row[b / 64] >> (b % 64)) & 1 == 1;
            assert_eq!(ledger::binomial_is_odd(a as u64, b as u64), bit, "C({a}, {b})");
        }
        let mut carry = 0u64;
        for w in row.iter_mut() {
            let shifted = (*w << 1) | carry;
            carry = *w >> 63;
            *w ^= shifted;
        }
    }
    for a in 0..=300u64 {
        for b in 0..=a {
            assert_eq!(!ledger::big_binomial(a, b).is_even_oracle(), ledger::binomial_is_odd(a, b));
        }
    }
}
