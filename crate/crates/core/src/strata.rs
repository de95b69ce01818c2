//! Skew families `s ↦ c_s = Σ x_i A_i`, the Pfaffian hypersurface `Σ`, its
//! rank strata and singular points, and pencil computations.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::cup_model::{serre_pairing, CupModelError, CupModule};
use crate::exact::pfaffian::standard_symplectic;
use crate::exact::poly::PolyMatrix;
use crate::exact::{pfaffian, pfaffian_poly, ExactMatrix, GaussianRational as Q, SparsePoly};
use crate::sampling;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StrataError {
    #[error("generator {index} is not skew-symmetric")]
    NotSkew { index: usize },
    #[error("matrix sizes differ: {0}")]
    SizeMismatch(String),
    #[error("coefficient vector has {found} entries, family has {expected} generators")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("q = {q} is odd: Σ is all of |K| and has no smooth points")]
    OddQ { q: usize },
    #[error("the Pfaffian of the family vanishes identically")]
    DegenerateFamily,
    #[error("gradient and rank criteria disagree at s (rank {rank}, gradient nonzero: {gradient_nonzero})")]
    CriterionMismatch { rank: usize, gradient_nonzero: bool },
    #[error("Pf(λa + μb) vanishes identically")]
    IdenticallyZero,
    #[error(transparent)]
    Model(#[from] CupModelError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FamilySource {
    Explicit,
    /// `c_s` from the Serre pairing, coordinates in the given basis of `M^0`.
    SerrePairing { basis: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewFamily {
    q: usize,
    generators: Vec<ExactMatrix>,
    source: FamilySource,
}

/// JSON form `{"q": int, "generators": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub q: usize,
    pub generators: Vec<ExactMatrix>,
}

impl SkewFamily {
    pub fn new(q: usize, generators: Vec<ExactMatrix>) -> Result<Self, StrataError> {
        for (index, g) in generators.iter().enumerate() {
            if (g.rows(), g.cols()) != (q, q) {
                return Err(StrataError::SizeMismatch(format!(
                    "generator {index} is {}×{}, expected {q}×{q}",
                    g.rows(),
                    g.cols()
                )));
            }
            if !g.is_skew() {
                return Err(StrataError::NotSkew { index });
            }
        }
        Ok(Self {
            q,
            generators,
            source: FamilySource::Explicit,
        })
    }

    /// `A_i = c_{e_i}` for the standard basis `e_i` of `M^0`.
    pub fn from_cup_module(m: &CupModule) -> Result<Self, StrataError> {
        let d0 = m.dim(0);
        let generators = (0..d0)
            .map(|i| {
                let mut s = vec![Q::zero(); d0];
                s[i] = Q::one();
                serre_pairing(m, &s)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut f = Self::new(m.v_dim(), generators)?;
        f.source = FamilySource::SerrePairing {
            basis: "standard basis of M^0 (W first, then Λ¹V)".into(),
        };
        Ok(f)
    }

    pub fn from_file(file: FamilyFile) -> Result<Self, StrataError> {
        Self::new(file.q, file.generators)
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            q: self.q,
            generators: self.generators.clone(),
        }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn generators(&self) -> &[ExactMatrix] {
        &self.generators
    }

    pub fn source(&self) -> &FamilySource {
        &self.source
    }

    /// Number of coordinates `x_i`.
    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// `c_s = Σ s_i A_i`.
    pub fn form(&self, s: &[Q]) -> Result<ExactMatrix, StrataError> {
        if s.len() != self.len() {
            return Err(StrataError::DimensionMismatch {
                expected: self.len(),
                found: s.len(),
            });
        }
        let mut out = ExactMatrix::zeros(self.q, self.q);
        for (x, a) in s.iter().zip(&self.generators) {
            if !x.is_zero() {
                out = &out + &a.scale(x);
            }
        }
        Ok(out)
    }

    pub fn poly_matrix(&self) -> PolyMatrix {
        if self.generators.is_empty() {
            return PolyMatrix::from_fn(self.q, |_, _| SparsePoly::zero());
        }
        PolyMatrix::linear_combination(&self.generators)
    }

    pub fn pfaffian_poly(&self) -> SparsePoly {
        pfaffian_poly(&self.poly_matrix()).expect("generators are skew")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SigmaDegree {
    Degree(u32),
    /// Every form in the family is degenerate.
    AllOfK,
}

impl Serialize for SigmaDegree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Degree(d) => s.serialize_u32(*d),
            Self::AllOfK => s.serialize_str("all of |K|"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankSample {
    pub s: Vec<Q>,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaDescription {
    #[serde(serialize_with = "poly_string")]
    pub pf_poly: SparsePoly,
    pub degree: SigmaDegree,
    pub homogeneous: bool,
    pub rank_strata: Vec<RankSample>,
}

fn poly_string<S: Serializer>(p: &SparsePoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Pfaffian polynomial of the family with rank data on seeded samples.
pub fn sigma_polynomial(f: &SkewFamily, sample_count: usize, seed: u64) -> SigmaDescription {
    let pf_poly = if f.q % 2 == 1 {
        SparsePoly::zero_in(f.len())
    } else {
        f.pfaffian_poly()
    };
    let degree = match pf_poly.total_degree() {
        Some(d) => SigmaDegree::Degree(d),
        None => SigmaDegree::AllOfK,
    };
    let mut rng = sampling::rng(seed);
    let rank_strata = if f.is_empty() {
        Vec::new()
    } else {
        (0..sample_count)
            .map(|_| {
                let s = sampling::nonzero_vector(&mut rng, f.len(), 3);
                let rank = f.form(&s).expect("sample has family length").rank();
                RankSample { s, rank }
            })
            .collect()
    };
    SigmaDescription {
        homogeneous: pf_poly.is_homogeneous(),
        pf_poly,
        degree,
        rank_strata,
    }
}

pub fn rank_of_cup_s(f: &SkewFamily, s: &[Q]) -> Result<usize, StrataError> {
    Ok(f.form(s)?.rank())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Smooth,
    Singular,
    NotOnSigma,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothPointReport {
    pub verdict: PointKind,
    pub rank: usize,
    pub pf_value: Q,
    pub gradient: Vec<Q>,
}

/// Smoothness of `Σ = {Pf = 0}` at `[s]`, decided by the gradient and
/// cross-checked against `rank(c_s) = q − 2`.
pub fn smooth_point_test(f: &SkewFamily, s: &[Q]) -> Result<SmoothPointReport, StrataError> {
    if f.q % 2 == 1 {
        return Err(StrataError::OddQ { q: f.q });
    }
    let rank = rank_of_cup_s(f, s)?;
    let pf = f.pfaffian_poly();
    if pf.is_zero() {
        return Err(StrataError::DegenerateFamily);
    }
    let pf_value = pf.eval(s);
    let gradient: Vec<Q> = (0..f.len()).map(|i| pf.derivative(i).eval(s)).collect();
    if !pf_value.is_zero() {
        return Ok(SmoothPointReport {
            verdict: PointKind::NotOnSigma,
            rank,
            pf_value,
            gradient,
        });
    }
    let gradient_nonzero = gradient.iter().any(|g| !g.is_zero());
    if gradient_nonzero != (rank + 2 == f.q) {
        return Err(StrataError::CriterionMismatch {
            rank,
            gradient_nonzero,
        });
    }
    let verdict = if gradient_nonzero {
        PointKind::Smooth
    } else {
        PointKind::Singular
    };
    Ok(SmoothPointReport {
        verdict,
        rank,
        pf_value,
        gradient,
    })
}

fn check_pencil(a: &ExactMatrix, b: &ExactMatrix) -> Result<(), StrataError> {
    if !a.is_square() || (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(StrataError::SizeMismatch(format!(
            "a is {}×{}, b is {}×{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if !a.is_skew() {
        return Err(StrataError::NotSkew { index: 0 });
    }
    if !b.is_skew() {
        return Err(StrataError::NotSkew { index: 1 });
    }
    Ok(())
}

/// Coefficients of the polynomial `p(μ)` of degree `≤ degree` through the
/// values `p(0), p(1), …, p(degree)`.
fn interpolate(values: &[Q]) -> Vec<Q> {
    let n = values.len();
    let vandermonde = ExactMatrix::from_fn(n, n, |i, j| Q::from_integer(i as i64).pow(j as i32));
    vandermonde.solve(values).expect("Vandermonde matrix is invertible")
}

/// Coefficient of `λ^{q−2} μ²` in `det(λa + μb)`.
pub fn pencil_coefficient(a: &ExactMatrix, b: &ExactMatrix) -> Result<Q, StrataError> {
    check_pencil(a, b)?;
    let q = a.rows();
    if q < 2 {
        return Ok(Q::zero());
    }
    // det(λa + μb) is homogeneous of degree q, so this is the μ² coefficient
    // of det(a + μb).
    let values: Vec<Q> = (0..=q)
        .map(|mu| (a + &b.scale(&Q::from_integer(mu as i64))).det())
        .collect();
    Ok(interpolate(&values)[2].clone())
}

/// Vanishing order of the binary form `Pf(λa + μb)` at `μ = 0`.
pub fn pencil_root_multiplicity(a: &ExactMatrix, b: &ExactMatrix) -> Result<usize, StrataError> {
    check_pencil(a, b)?;
    let q = a.rows();
    if q % 2 == 1 {
        return Err(StrataError::IdenticallyZero);
    }
    let values: Vec<Q> = (0..=q / 2)
        .map(|mu| {
            pfaffian(&(a + &b.scale(&Q::from_integer(mu as i64)))).expect("pencil of skew matrices")
        })
        .collect();
    interpolate(&values)
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(StrataError::IdenticallyZero)
}

/// `a = diag(0₂, J, …, J)` and `b = [[C, M], [−Mᵀ, N]]` with `C = c·J`.
pub fn block_pencil(q: usize, c: &Q, m: &ExactMatrix, n: &ExactMatrix) -> (ExactMatrix, ExactMatrix) {
    assert!(q >= 4 && q.is_multiple_of(2), "block pencil needs even q ≥ 4");
    assert_eq!((m.rows(), m.cols()), (2, q - 2));
    assert_eq!((n.rows(), n.cols()), (q - 2, q - 2));
    let mut a = ExactMatrix::zeros(q, q);
    let tail = standard_symplectic((q - 2) / 2, 0);
    for i in 0..q - 2 {
        for j in 0..q - 2 {
            a[(i + 2, j + 2)] = tail[(i, j)].clone();
        }
    }
    let mut b = ExactMatrix::zeros(q, q);
    b[(0, 1)] = c.clone();
    b[(1, 0)] = -c;
    for i in 0..2 {
        for j in 0..q - 2 {
            b[(i, j + 2)] = m[(i, j)].clone();
            b[(j + 2, i)] = -&m[(i, j)];
        }
    }
    for i in 0..q - 2 {
        for j in 0..q - 2 {
            b[(i + 2, j + 2)] = n[(i, j)].clone();
        }
    }
    (a, b)
}

/// A random family with `generators` members together with a point `s` at
/// which `c_s` has exactly the requested even `rank`.
///
/// The degenerate form `B = Pᵀ diag(J, …, J, 0) P` is planted by choosing
/// `s` with `s_0 ≠ 0` and the other generators at random, then solving for
/// `A_0`.
pub fn plant_degenerate_point<R: Rng>(
    rng: &mut R,
    q: usize,
    generators: usize,
    rank: usize,
) -> (SkewFamily, Vec<Q>) {
    assert!(rank.is_multiple_of(2) && rank <= q && generators >= 1);
    let p = sampling::invertible_matrix(rng, q, 2);
    let target = &(&p.transpose() * &standard_symplectic(rank / 2, q - rank)) * &p;
    let mut s: Vec<Q> = (0..generators)
        .map(|_| Q::from_integer(sampling::small_int(rng, 3)))
        .collect();
    while s[0].is_zero() {
        s[0] = Q::from_integer(sampling::small_int(rng, 3));
    }
    let mut gens: Vec<ExactMatrix> = (0..generators)
        .map(|_| sampling::skew_matrix(rng, q, 3))
        .collect();
    let mut rest = ExactMatrix::zeros(q, q);
    for (x, a) in s.iter().zip(&gens).skip(1) {
        rest = &rest + &a.scale(x);
    }
    gens[0] = (&target - &rest).scale(&s[0].inv().expect("s_0 ≠ 0"));
    let family = SkewFamily::new(q, gens).expect("planted generators are skew");
    (family, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cup_model::build_ample_divisor_canonical;

    fn j() -> ExactMatrix {
        standard_symplectic(1, 0)
    }

    #[test]
    fn odd_q_is_all_of_k() {
        let f = SkewFamily::from_cup_module(&build_ample_divisor_canonical(3, 2).unwrap()).unwrap();
        let d = sigma_polynomial(&f, 4, 0);
        assert_eq!(d.degree, SigmaDegree::AllOfK);
        assert!(d.pf_poly.is_zero());
        assert!(d.rank_strata.iter().all(|r| r.rank <= 2));
        assert_eq!(serde_json::to_value(&d).unwrap()["degree"], "all of |K|");
    }

    #[test]
    fn two_by_two_family() {
        let f = SkewFamily::new(2, vec![j()]).unwrap();
        let d = sigma_polynomial(&f, 0, 0);
        assert_eq!(d.pf_poly, SparsePoly::var(0, 1));
        assert_eq!(d.degree, SigmaDegree::Degree(1));
    }

    #[test]
    fn rank_examples() {
        let f = SkewFamily::new(4, vec![standard_symplectic(2, 0)]).unwrap();
        assert_eq!(rank_of_cup_s(&f, &[Q::zero()]).unwrap(), 0);
        assert_eq!(rank_of_cup_s(&f, &[Q::one()]).unwrap(), 4);
        assert!(rank_of_cup_s(&f, &[]).is_err());
    }

    #[test]
    fn rejects_bad_generators() {
        let sym = ExactMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(SkewFamily::new(2, vec![j(), sym]), Err(StrataError::NotSkew { index: 1 }));
        assert!(matches!(
            SkewFamily::new(3, vec![j()]),
            Err(StrataError::SizeMismatch(_))
        ));
    }

    #[test]
    fn smooth_and_singular_points() {
        // x1·diag(0, J) + x2·diag(J, 0): Pf = x1·x2.
        let a = standard_symplectic(2, 0);
        let mut a1 = a.clone();
        a1[(0, 1)] = Q::zero();
        a1[(1, 0)] = Q::zero();
        let a2 = &a - &a1;
        let f = SkewFamily::new(4, vec![a1, a2]).unwrap();
        let smooth = smooth_point_test(&f, &[Q::one(), Q::zero()]).unwrap();
        assert_eq!(smooth.verdict, PointKind::Smooth);
        assert_eq!(smooth.rank, 2);
        let sing = smooth_point_test(&f, &[Q::zero(), Q::zero()]).unwrap();
        assert_eq!(sing.verdict, PointKind::Singular);
        let off = smooth_point_test(&f, &[Q::one(), Q::one()]).unwrap();
        assert_eq!(off.verdict, PointKind::NotOnSigma);

        let odd = SkewFamily::new(3, vec![ExactMatrix::zeros(3, 3)]).unwrap();
        assert_eq!(smooth_point_test(&odd, &[Q::one()]), Err(StrataError::OddQ { q: 3 }));
        let flat = SkewFamily::new(4, vec![ExactMatrix::zeros(4, 4)]).unwrap();
        assert_eq!(smooth_point_test(&flat, &[Q::one()]), Err(StrataError::DegenerateFamily));
    }

    #[test]
    fn block_pencil_example() {
        let (a, b) = block_pencil(4, &Q::one(), &ExactMatrix::zeros(2, 2), &ExactMatrix::zeros(2, 2));
        assert_eq!(pencil_coefficient(&a, &b).unwrap(), Q::one());
        assert_eq!(pencil_root_multiplicity(&a, &b).unwrap(), 1);
        assert_eq!(pencil_coefficient(&a, &ExactMatrix::zeros(4, 4)).unwrap(), Q::zero());
    }

    #[test]
    fn nondegenerate_pencil_has_no_root_at_zero() {
        let a = standard_symplectic(2, 0);
        assert_eq!(pencil_root_multiplicity(&a, &a).unwrap(), 0);
        let z = ExactMatrix::zeros(4, 4);
        assert_eq!(pencil_root_multiplicity(&z, &z), Err(StrataError::IdenticallyZero));
    }

    #[test]
    fn planted_point_has_requested_rank() {
        let mut rng = sampling::rng(3);
        for rank in [0, 2, 4] {
            let (f, s) = plant_degenerate_point(&mut rng, 6, 3, rank);
            assert_eq!(rank_of_cup_s(&f, &s).unwrap(), rank);
        }
    }
}
