//! Derivative complexes `M^0 → M^1 → … → M^n` with differential `∪v`,
//! k-transversality, incidence dimension counts, the wedge criterion and the
//! kernel/cokernel tangency check.
//!
//! Generic statements are witnessed on seeded samples; every report carries
//! its seed and sample size and never claims more than that.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cup_model::{CupModelError, CupModule};
use crate::exact::matrix::{is_zero_vector, rank_of_vectors};
use crate::exact::{ExactMatrix, GaussianRational as Q};
use crate::sampling;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransversalityError {
    #[error("direction has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("∪v∘∪v ≠ 0 from M^{k}: not a complex")]
    NotAComplex { k: usize },
    #[error("degree {k} outside 0..={n}")]
    BadIndex { k: usize, n: usize },
    #[error("wedge criterion needs between 1 and {q} forms of length {q}, got {count}")]
    BadArity { count: usize, q: usize },
    #[error("f is {f_rows}×{f_cols} but g is {g_rows}×{g_cols}")]
    ShapeMismatch {
        f_rows: usize,
        f_cols: usize,
        g_rows: usize,
        g_cols: usize,
    },
}

impl From<CupModelError> for TransversalityError {
    fn from(e: CupModelError) -> Self {
        match e {
            CupModelError::DimensionMismatch { expected, found } => {
                Self::DimensionMismatch { expected, found }
            }
            other => unreachable!("cup_map only reports dimension errors: {other}"),
        }
    }
}

/// The complex `0 → M^0 → … → M^n → 0` with differential `∪v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivativeComplex {
    pub direction: Vec<Q>,
    pub graded_dims: Vec<usize>,
    /// `maps[k] = ∪v : M^k → M^{k+1}`; the last one targets the zero space.
    #[serde(skip)]
    pub maps: Vec<ExactMatrix>,
    pub ranks: Vec<usize>,
    pub cohomology_dims: Vec<usize>,
}

impl DerivativeComplex {
    pub fn cohomology(&self, k: usize) -> usize {
        self.cohomology_dims[k]
    }

    /// No cohomology in any degree `k ≥ 1`.
    pub fn exact_above_zero(&self) -> bool {
        self.cohomology_dims.iter().skip(1).all(|&h| h == 0)
    }

    /// `dim ker(∪v : M^0 → M^1)`.
    pub fn kernel_at_zero(&self) -> usize {
        self.cohomology_dims[0]
    }
}

pub fn derivative_complex(m: &CupModule, v: &[Q]) -> Result<DerivativeComplex, TransversalityError> {
    let n = m.top_degree();
    let maps = (0..=n)
        .map(|k| m.cup_map(v, k))
        .collect::<Result<Vec<_>, _>>()?;
    for k in 1..=n {
        if !(&maps[k] * &maps[k - 1]).is_zero() {
            return Err(TransversalityError::NotAComplex { k: k - 1 });
        }
    }
    let ranks: Vec<usize> = maps.iter().map(ExactMatrix::rank).collect();
    let cohomology_dims = (0..=n)
        .map(|k| {
            let incoming = if k == 0 { 0 } else { ranks[k - 1] };
            m.dim(k) - ranks[k] - incoming
        })
        .collect();
    Ok(DerivativeComplex {
        direction: v.to_vec(),
        graded_dims: m.graded_dims().to_vec(),
        maps,
        ranks,
        cohomology_dims,
    })
}

fn check_degree(m: &CupModule, k: usize) -> Result<(), TransversalityError> {
    if k > m.top_degree() {
        return Err(TransversalityError::BadIndex {
            k,
            n: m.top_degree(),
        });
    }
    Ok(())
}

/// `ker(∪v on M^k) = im(∪v on M^{k−1})`.
pub fn is_k_transversal(m: &CupModule, v: &[Q], k: usize) -> Result<bool, TransversalityError> {
    check_degree(m, k)?;
    Ok(derivative_complex(m, v)?.cohomology(k) == 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangencyVerdict {
    pub k: usize,
    pub excluded: bool,
    pub label: String,
}

/// The transversality test phrased as a tangency statement about `V_k` at 0.
pub fn tangency_excluded(m: &CupModule, v: &[Q], k: usize) -> Result<TangencyVerdict, TransversalityError> {
    let excluded = is_k_transversal(m, v, k)?;
    let label = if excluded {
        format!("v not tangent to V_{k} at 0")
    } else {
        format!("v may be tangent to V_{k} at 0 (H^{k} of the derivative complex is nonzero)")
    };
    Ok(TangencyVerdict { k, excluded, label })
}

/// A sampled direction that fails transversality at some `k ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleFailure {
    pub sample: usize,
    pub k: usize,
    pub cohomology_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolationReport {
    pub isolated: bool,
    pub sample_count: usize,
    pub seed: u64,
    pub failures: Vec<SampleFailure>,
    pub note: String,
}

/// Sampled check that every `v ≠ 0` is k-transversal for all `k ≥ 1`.
pub fn isolation_report(m: &CupModule, sample_count: usize, seed: u64) -> Result<IsolationReport, TransversalityError> {
    let mut rng = sampling::rng(seed);
    let mut failures = Vec::new();
    for sample in 0..sample_count {
        let v = sampling::nonzero_vector(&mut rng, m.v_dim(), 3);
        let c = derivative_complex(m, &v)?;
        failures.extend(
            c.cohomology_dims
                .iter()
                .enumerate()
                .skip(1)
                .filter(|(_, &h)| h > 0)
                .map(|(k, &h)| SampleFailure {
                    sample,
                    k,
                    cohomology_dim: h,
                }),
        );
    }
    let isolated = failures.is_empty();
    let note = if isolated {
        format!("certified on sample ({sample_count} directions, seed {seed}); not a proof")
    } else {
        format!("{} transversality failures on {sample_count} sampled directions", failures.len())
    };
    Ok(IsolationReport {
        isolated,
        sample_count,
        seed,
        failures,
        note,
    })
}

pub fn isolated_point_test(m: &CupModule, sample_count: usize, seed: u64) -> Result<bool, TransversalityError> {
    Ok(isolation_report(m, sample_count, seed)?.isolated)
}

/// A rational number written `a/b` in JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction(pub BigRational);

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerDegree {
    pub k: usize,
    pub transversal: usize,
    pub max_cohomology_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IncidenceReport {
    pub q: usize,
    pub p_g: usize,
    pub sample_count: usize,
    pub seed: u64,
    /// Generic `dim ker(∪v on M^0)` over transversal samples.
    pub fiber_kernel_dim: Option<usize>,
    /// Open-stratum dimension; `None` when the generic fiber is empty.
    #[serde(serialize_with = "incidence_dim")]
    pub dim_i_main: Option<usize>,
    /// Generic `dim ker(v ↦ v∪s)` for `s` taken from the fibers.
    pub generic_t: Option<usize>,
    pub sigma_codim_estimate: Option<usize>,
    pub transversal_fraction: Fraction,
    pub per_k: Vec<PerDegree>,
    pub note: String,
}

fn incidence_dim<S: Serializer>(d: &Option<usize>, s: S) -> Result<S::Ok, S::Error> {
    match d {
        Some(d) => s.serialize_u64(*d as u64),
        None => s.serialize_str("no incidence"),
    }
}

/// `I = {([v], [s]) : v ∪ s = 0}`: dimension of the main stratum from the
/// projection to `P(V)`, plus the fiber dimension of its image in `P(M^0)`.
pub fn incidence_report(m: &CupModule, sample_count: usize, seed: u64) -> Result<IncidenceReport, TransversalityError> {
    let q = m.v_dim();
    let n = m.top_degree();
    let mut rng = sampling::rng(seed);
    let mut per_k: Vec<PerDegree> = (0..=n)
        .map(|k| PerDegree {
            k,
            transversal: 0,
            max_cohomology_dim: 0,
        })
        .collect();
    let mut transversal = 0usize;
    let mut fiber: Option<usize> = None;
    let mut t: Option<usize> = None;
    for _ in 0..sample_count {
        let v = sampling::nonzero_vector(&mut rng, q, 3);
        let c = derivative_complex(m, &v)?;
        for (slot, &h) in per_k.iter_mut().zip(&c.cohomology_dims) {
            if h == 0 {
                slot.transversal += 1;
            }
            slot.max_cohomology_dim = slot.max_cohomology_dim.max(h);
        }
        if !c.exact_above_zero() {
            continue;
        }
        transversal += 1;
        let ker = c.kernel_at_zero();
        fiber = Some(fiber.map_or(ker, |f| f.min(ker)));
        if ker > 0 && n >= 1 {
            let basis = c.maps[0].kernel_basis();
            let s = random_combination(&mut rng, &basis);
            let dim = cup_with_section(m, &s).kernel_basis().len();
            t = Some(t.map_or(dim, |x| x.min(dim)));
        }
    }
    let dim_i_main = fiber.filter(|&f| f > 0).map(|f| (q - 1) + (f - 1));
    let p_g = m.dim(0);
    let sigma_codim_estimate = match (dim_i_main, t) {
        (Some(d), Some(t)) if p_g > 0 && t > 0 => {
            let image_dim = d - (t - 1);
            Some((p_g - 1).saturating_sub(image_dim))
        }
        _ => None,
    };
    let denom = BigInt::from(sample_count.max(1));
    Ok(IncidenceReport {
        q,
        p_g,
        sample_count,
        seed,
        fiber_kernel_dim: fiber,
        dim_i_main,
        generic_t: t,
        sigma_codim_estimate,
        transversal_fraction: Fraction(BigRational::new_raw(BigInt::from(transversal), denom)),
        per_k,
        note: format!(
            "open stratum only; generic values are minima over {sample_count} seeded samples (seed {seed})"
        ),
    })
}

fn random_combination<R: rand::Rng>(rng: &mut R, basis: &[Vec<Q>]) -> Vec<Q> {
    let dim = basis[0].len();
    loop {
        let coeffs = sampling::nonzero_vector(rng, basis.len(), 3);
        let mut s = vec![Q::zero(); dim];
        for (c, b) in coeffs.iter().zip(basis) {
            for (x, y) in s.iter_mut().zip(b) {
                *x += &(c * y);
            }
        }
        if !is_zero_vector(&s) {
            return s;
        }
    }
}

/// Matrix of `v ↦ v ∪ s : V → M^1`.
pub fn cup_with_section(m: &CupModule, s: &[Q]) -> ExactMatrix {
    let q = m.v_dim();
    let d0 = m.dim(0);
    let columns: Vec<Vec<Q>> = (0..q)
        .map(|i| m.action(0).column_block(i * d0, d0).apply(s))
        .collect();
    ExactMatrix::from_fn(m.dim(1), q, |r, c| columns[c][r].clone())
}

/// `ω_0 ∧ … ∧ ω_k = 0` in `Λ^{k+1} V`, i.e. the forms are dependent.
pub fn wedge_degenerate(forms: &[Vec<Q>]) -> Result<bool, TransversalityError> {
    let q = forms.first().map_or(0, Vec::len);
    if forms.is_empty() || forms.len() > q || forms.iter().any(|f| f.len() != q) {
        return Err(TransversalityError::BadArity {
            count: forms.len(),
            q,
        });
    }
    Ok(rank_of_vectors(forms, q) < forms.len())
}

/// `g(ker f) ⊆ im f`, the first-order condition for `f + g·t` to stay in the
/// rank stratum of `f`.
pub fn tangency_check(f: &ExactMatrix, g: &ExactMatrix) -> Result<bool, TransversalityError> {
    if (f.rows(), f.cols()) != (g.rows(), g.cols()) {
        return Err(TransversalityError::ShapeMismatch {
            f_rows: f.rows(),
            f_cols: f.cols(),
            g_rows: g.rows(),
            g_cols: g.cols(),
        });
    }
    Ok(f
        .kernel_basis()
        .iter()
        .all(|u| f.solve(&g.apply(u)).is_some()))
}

/// `e_i` scaled by one, as a convenience for examples and tests.
pub fn unit_vector(i: usize, q: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); q];
    v[i] = Q::one();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cup_model::{build_ample_divisor_canonical, build_koszul};

    fn sum(idx: &[usize], q: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); q];
        for &i in idx {
            v[i] = Q::one();
        }
        v
    }

    #[test]
    fn koszul_is_exact_for_nonzero_direction() {
        let m = build_koszul(3, 0).unwrap();
        let c = derivative_complex(&m, &unit_vector(0, 3)).unwrap();
        assert_eq!(c.cohomology_dims, vec![0, 0, 0, 0]);
    }

    #[test]
    fn zero_direction_gives_graded_dims() {
        let m = build_ample_divisor_canonical(4, 2).unwrap();
        let c = derivative_complex(&m, &[Q::zero(), Q::zero(), Q::zero(), Q::zero()]).unwrap();
        assert_eq!(c.cohomology_dims, m.graded_dims());
        assert!(!is_k_transversal(&m, &vec![Q::zero(); 4], 1).unwrap());
    }

    #[test]
    fn ample_surface_kernel_is_chi() {
        let m = build_ample_divisor_canonical(3, 2).unwrap();
        let c = derivative_complex(&m, &sum(&[0, 1], 3)).unwrap();
        assert_eq!(c.cohomology_dims, vec![2, 0, 0]);
    }

    #[test]
    fn transversal_examples() {
        let m = build_ample_divisor_canonical(4, 2).unwrap();
        assert!(is_k_transversal(&m, &unit_vector(2, 4), 1).unwrap());
        let k = build_koszul(3, 0).unwrap();
        assert!(is_k_transversal(&k, &unit_vector(0, 3), 2).unwrap());
        assert!(matches!(
            is_k_transversal(&k, &unit_vector(0, 3), 4),
            Err(TransversalityError::BadIndex { .. })
        ));
        let t = tangency_excluded(&k, &unit_vector(0, 3), 2).unwrap();
        assert!(t.excluded);
        assert_eq!(t.label, "v not tangent to V_2 at 0");
    }

    #[test]
    fn dimension_mismatch() {
        let m = build_koszul(3, 0).unwrap();
        assert_eq!(
            derivative_complex(&m, &[Q::one()]),
            Err(TransversalityError::DimensionMismatch {
                expected: 3,
                found: 1
            })
        );
    }

    #[test]
    fn shifted_koszul_fails_only_at_degree_zero() {
        // Λ^1 → Λ^2 → … → Λ^q → 0: ∧v kills v itself, so H^0 = ⟨v⟩, and the
        // truncated complex is exact in every degree k ≥ 1.
        let m = build_koszul(3, 1).unwrap();
        let c = derivative_complex(&m, &unit_vector(0, 3)).unwrap();
        assert_eq!(c.cohomology_dims, vec![1, 0, 0, 0]);
        assert!(isolated_point_test(&m, 8, 0).unwrap());
    }

    #[test]
    fn isolated_point_on_ample_model() {
        let m = build_ample_divisor_canonical(4, 1).unwrap();
        let r = isolation_report(&m, 50, 7).unwrap();
        assert!(r.isolated);
        assert!(r.note.starts_with("certified on sample"));
    }

    #[test]
    fn zero_tensors_are_not_isolated() {
        let k = build_koszul(3, 0).unwrap();
        let zero = CupModule::new(
            3,
            k.graded_dims().to_vec(),
            (0..3).map(|i| ExactMatrix::zeros(k.action(i).rows(), k.action(i).cols())).collect(),
            None,
        )
        .unwrap();
        assert!(!isolated_point_test(&zero, 4, 0).unwrap());
    }

    #[test]
    fn incidence_on_ample_models() {
        let r = incidence_report(&build_ample_divisor_canonical(3, 2).unwrap(), 16, 0).unwrap();
        assert_eq!(r.dim_i_main, Some(3));
        assert_eq!(r.fiber_kernel_dim, Some(2));
        assert_eq!(r.generic_t, Some(1));
        assert_eq!(r.sigma_codim_estimate, Some(0));
        let r = incidence_report(&build_ample_divisor_canonical(5, 3).unwrap(), 8, 1).unwrap();
        assert_eq!(r.dim_i_main, Some(6));
    }

    #[test]
    fn koszul_has_no_incidence() {
        let r = incidence_report(&build_koszul(3, 0).unwrap(), 8, 0).unwrap();
        assert_eq!(r.dim_i_main, None);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["dim_i_main"], "no incidence");
        assert_eq!(json["transversal_fraction"], "8/8");
    }

    #[test]
    fn wedge_criterion() {
        assert!(!wedge_degenerate(&[unit_vector(0, 3), unit_vector(1, 3)]).unwrap());
        assert!(wedge_degenerate(&[unit_vector(0, 3), unit_vector(0, 3)]).unwrap());
        let forms = [
            sum(&[0, 1], 3),
            sum(&[1, 2], 3),
            vec![Q::one(), Q::from_integer(2), Q::one()],
        ];
        assert!(wedge_degenerate(&forms).unwrap());
        assert!(matches!(wedge_degenerate(&[]), Err(TransversalityError::BadArity { .. })));
    }

    #[test]
    fn tangency_trivial_cases() {
        let f = ExactMatrix::identity(3);
        let g = ExactMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert!(tangency_check(&f, &g).unwrap());
        assert!(!tangency_check(&ExactMatrix::zeros(3, 3), &g).unwrap());
        assert!(tangency_check(&f, &ExactMatrix::zeros(2, 3)).is_err());
    }
}
