//! Graded modules `M^0 … M^n` over `V` with a cup action `V ⊗ M^k → M^{k+1}`.
//!
//! These are the finite stand-ins for `H^•(L)` as a module over `H^1(O_X)`.
//! A model is pure data (one tensor per degree); the geometric families are
//! constructors that emit the same representation, so every downstream
//! engine is model-agnostic.
//!
//! Tensor layout: `A_k` is a `d_{k+1} × (q·d_k)` matrix whose column
//! `i·d_k + j` is `e_i ∪ b_j` for the `j`-th basis vector `b_j` of `M^k`.
//! Bases of `Λ^k V` are `k`-subsets of `{0..q}` in lexicographic order.

use std::collections::HashMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::matrix::is_zero_vector;
use crate::exact::{ExactMatrix, GaussianRational as Q};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CupModelError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("tensor shape mismatch: {0}")]
    Shape(String),
    #[error("vector has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("serre pairing needs a surface model (n = 2), this model has n = {n}")]
    WrongGrading { n: usize },
    #[error("model has no top trace")]
    NoTrace,
    #[error("cup action does not square to zero: {0}")]
    NotADifferential(CupViolation),
}

/// Concrete witness that `(v∪)∘(v∪) ≠ 0` on `M^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CupViolation {
    pub v: Vec<Q>,
    pub k: usize,
    pub x: Vec<Q>,
    /// `v ∪ (v ∪ x)`, nonzero.
    pub image: Vec<Q>,
}

impl std::fmt::Display for CupViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v={:?}, k={}, x={:?} ↦ {:?}", self.v, self.k, self.x, self.image)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CupModule {
    v_dim: usize,
    graded_dims: Vec<usize>,
    action: Vec<ExactMatrix>,
    top_trace: Option<Vec<Q>>,
}

impl CupModule {
    /// Checks tensor shapes only; use [`validate_cup_square_zero`] for the
    /// differential condition.
    pub fn new(
        v_dim: usize,
        graded_dims: Vec<usize>,
        action: Vec<ExactMatrix>,
        top_trace: Option<Vec<Q>>,
    ) -> Result<Self, CupModelError> {
        if graded_dims.is_empty() {
            return Err(CupModelError::Shape("at least M^0 is required".into()));
        }
        let n = graded_dims.len() - 1;
        if action.len() != n {
            return Err(CupModelError::Shape(format!(
                "{} action tensors for {} degrees (need {n})",
                action.len(),
                n + 1
            )));
        }
        for (k, a) in action.iter().enumerate() {
            let want = (graded_dims[k + 1], v_dim * graded_dims[k]);
            if (a.rows(), a.cols()) != want {
                return Err(CupModelError::Shape(format!(
                    "A_{k} is {}×{}, expected {}×{}",
                    a.rows(),
                    a.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        if let Some(t) = &top_trace {
            if t.len() != graded_dims[n] {
                return Err(CupModelError::Shape(format!(
                    "top trace has {} entries, M^{n} has dimension {}",
                    t.len(),
                    graded_dims[n]
                )));
            }
        }
        Ok(Self {
            v_dim,
            graded_dims,
            action,
            top_trace,
        })
    }

    /// `q = dim V`.
    pub fn v_dim(&self) -> usize {
        self.v_dim
    }

    /// Top degree `n`.
    pub fn top_degree(&self) -> usize {
        self.graded_dims.len() - 1
    }

    pub fn graded_dims(&self) -> &[usize] {
        &self.graded_dims
    }

    pub fn dim(&self, k: usize) -> usize {
        self.graded_dims.get(k).copied().unwrap_or(0)
    }

    pub fn action(&self, k: usize) -> &ExactMatrix {
        &self.action[k]
    }

    pub fn top_trace(&self) -> Option<&[Q]> {
        self.top_trace.as_deref()
    }

    fn check_direction(&self, v: &[Q]) -> Result<(), CupModelError> {
        if v.len() != self.v_dim {
            return Err(CupModelError::DimensionMismatch {
                expected: self.v_dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Matrix of `v∪ : M^k → M^{k+1}`; for `k = n` this is the zero map to
    /// the zero space.
    pub fn cup_map(&self, v: &[Q], k: usize) -> Result<ExactMatrix, CupModelError> {
        self.check_direction(v)?;
        let dk = self.dim(k);
        if k >= self.top_degree() {
            return Ok(ExactMatrix::zeros(0, dk));
        }
        let a = &self.action[k];
        let mut out = ExactMatrix::zeros(self.dim(k + 1), dk);
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for r in 0..out.rows() {
                for c in 0..dk {
                    let entry = &a[(r, i * dk + c)];
                    if !entry.is_zero() {
                        out[(r, c)] += &(entry * vi);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `e_i ∪ x` for `x ∈ M^k`.
    fn basis_cup(&self, i: usize, k: usize, x: &[Q]) -> Vec<Q> {
        let dk = self.dim(k);
        self.action[k].column_block(i * dk, dk).apply(x)
    }

    /// `v ∪ x` for `x ∈ M^k`.
    pub fn cup(&self, v: &[Q], k: usize, x: &[Q]) -> Result<Vec<Q>, CupModelError> {
        if x.len() != self.dim(k) {
            return Err(CupModelError::DimensionMismatch {
                expected: self.dim(k),
                found: x.len(),
            });
        }
        Ok(self.cup_map(v, k)?.apply(x))
    }

    /// Explicit-tensor descriptor reproducing this module.
    pub fn descriptor(&self) -> ModelDescriptor {
        ModelDescriptor {
            schema_version: crate::SCHEMA_VERSION,
            kind: ModelKind::ExplicitTensors,
            q: self.v_dim,
            chi: None,
            shift: None,
            graded_dims: Some(self.graded_dims.clone()),
            tensors: Some(self.action.iter().map(ExactMatrix::to_rows).collect()),
            top_trace: self.top_trace.clone(),
        }
    }
}

/// Lexicographically ordered `k`-subsets of `{0..q}`.
pub fn exterior_basis(q: usize, k: usize) -> Vec<Vec<usize>> {
    if k > q {
        return Vec::new();
    }
    (0..q).combinations(k).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `e_i ∧ e_S = sign · e_{S∪{i}}`, or `None` when `i ∈ S`.
pub fn wedge_basis(i: usize, subset: &[usize]) -> Option<(i64, Vec<usize>)> {
    if subset.contains(&i) {
        return None;
    }
    let before = subset.iter().filter(|&&s| s < i).count();
    let sign = if before % 2 == 0 { 1 } else { -1 };
    let mut out = subset.to_vec();
    out.insert(before, i);
    Some((sign, out))
}

/// Wedge action tensor `V ⊗ Λ^k V → Λ^{k+1} V` in the standard layout.
pub fn wedge_tensor(q: usize, k: usize) -> ExactMatrix {
    let src = exterior_basis(q, k);
    let dst = exterior_basis(q, k + 1);
    let index: HashMap<&[usize], usize> =
        dst.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
    let dk = src.len();
    let mut a = ExactMatrix::zeros(dst.len(), q * dk);
    for i in 0..q {
        for (j, s) in src.iter().enumerate() {
            if let Some((sign, t)) = wedge_basis(i, s) {
                a[(index[t.as_slice()], i * dk + j)] = Q::from_integer(sign);
            }
        }
    }
    a
}

/// `M^k = Λ^{k+c} V` for `k = 0..=q`, acting by wedge product.
pub fn build_koszul(q: usize, shift: usize) -> Result<CupModule, CupModelError> {
    if q == 0 || shift > q {
        return Err(CupModelError::InvalidParameters(format!(
            "koszul needs q ≥ 1 and 0 ≤ shift ≤ q (got q={q}, shift={shift})"
        )));
    }
    let dims: Vec<usize> = (0..=q).map(|k| binomial(q, k + shift)).collect();
    let action = (0..q).map(|k| wedge_tensor(q, k + shift)).collect();
    let top_trace = (shift == 0).then(|| vec![Q::one()]);
    CupModule::new(q, dims, action, top_trace)
}

/// Canonical-bundle model of a smooth ample divisor in a `q`-dimensional
/// abelian variety: `n = q − 1`, `M^0 = W ⊕ Λ¹V` with `dim W = χ − 1`
/// (listed first), `M^k = Λ^{k+1} V` for `k ≥ 1`. `W` is killed by the cup
/// action; the `Λ` parts act by wedge product.
pub fn build_ample_divisor_canonical(q: usize, chi: usize) -> Result<CupModule, CupModelError> {
    if q < 2 || chi < 1 {
        return Err(CupModelError::InvalidParameters(format!(
            "ample-divisor model needs q ≥ 2 and χ ≥ 1 (got q={q}, χ={chi})"
        )));
    }
    let n = q - 1;
    let w = chi - 1;
    let mut dims = vec![w + q];
    dims.extend((1..=n).map(|k| binomial(q, k + 1)));

    // A_0: V ⊗ (W ⊕ Λ¹) → Λ², zero on W.
    let lam1 = wedge_tensor(q, 1);
    let d0 = w + q;
    let mut a0 = ExactMatrix::zeros(dims[1], q * d0);
    for i in 0..q {
        for j in 0..q {
            for r in 0..dims[1] {
                a0[(r, i * d0 + w + j)] = lam1[(r, i * q + j)].clone();
            }
        }
    }
    let mut action = vec![a0];
    action.extend((1..n).map(|k| wedge_tensor(q, k + 1)));
    CupModule::new(q, dims, action, Some(vec![Q::one()]))
}

/// Checks `(v∪)∘(v∪) = 0` for every `v`, on the basis pairs `(e_i, e_j)`.
///
/// Squares `e_i∪e_i∪` are tested first, so a failing mixed pair `i < j`
/// yields the witness `v = e_i + e_j`.
pub fn validate_cup_square_zero(m: &CupModule) -> Result<(), CupViolation> {
    let q = m.v_dim();
    let unit = |i: usize| {
        let mut e = vec![Q::zero(); q];
        e[i] = Q::one();
        e
    };
    for k in 0..m.top_degree().saturating_sub(1) {
        let dk = m.dim(k);
        for b in 0..dk {
            let mut x = vec![Q::zero(); dk];
            x[b] = Q::one();
            let first: Vec<Vec<Q>> = (0..q).map(|i| m.basis_cup(i, k, &x)).collect();
            for (i, fi) in first.iter().enumerate() {
                let sq = m.basis_cup(i, k + 1, fi);
                if !is_zero_vector(&sq) {
                    return Err(CupViolation {
                        v: unit(i),
                        k,
                        x,
                        image: sq,
                    });
                }
            }
            for i in 0..q {
                for j in i + 1..q {
                    let a = m.basis_cup(j, k + 1, &first[i]);
                    let c = m.basis_cup(i, k + 1, &first[j]);
                    let sym: Vec<Q> = a.iter().zip(&c).map(|(p, r)| p + r).collect();
                    if !is_zero_vector(&sym) {
                        let mut v = unit(i);
                        v[j] = Q::one();
                        return Err(CupViolation { v, k, x, image: sym });
                    }
                }
            }
        }
    }
    Ok(())
}

/// The skew form `c_s(v, w) = trace(w ∪ (v ∪ s))` on `V`, for `s ∈ M^0` of
/// a surface model. Row `a`, column `b` holds `c_s(e_a, e_b)`.
pub fn serre_pairing(m: &CupModule, s: &[Q]) -> Result<ExactMatrix, CupModelError> {
    if m.top_degree() != 2 {
        return Err(CupModelError::WrongGrading { n: m.top_degree() });
    }
    let trace = m.top_trace().ok_or(CupModelError::NoTrace)?;
    if s.len() != m.dim(0) {
        return Err(CupModelError::DimensionMismatch {
            expected: m.dim(0),
            found: s.len(),
        });
    }
    let q = m.v_dim();
    let first: Vec<Vec<Q>> = (0..q).map(|a| m.basis_cup(a, 0, s)).collect();
    Ok(ExactMatrix::from_fn(q, q, |a, b| {
        let top = m.basis_cup(b, 1, &first[a]);
        top.iter().zip(trace).map(|(x, t)| x * t).sum()
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Koszul,
    AmpleDivisorCanonical,
    ExplicitTensors,
}

/// JSON form of a model: either a built-in family with its parameters or
/// raw tensors with exact string entries.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub kind: ModelKind,
    pub q: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graded_dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensors: Option<Vec<Vec<Vec<Q>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_trace: Option<Vec<Q>>,
}

fn schema_version() -> u32 {
    crate::SCHEMA_VERSION
}

impl ModelDescriptor {
    pub fn koszul(q: usize, shift: usize) -> Self {
        Self {
            schema_version: crate::SCHEMA_VERSION,
            kind: ModelKind::Koszul,
            q,
            chi: None,
            shift: Some(shift),
            graded_dims: None,
            tensors: None,
            top_trace: None,
        }
    }

    pub fn ample(q: usize, chi: usize) -> Self {
        Self {
            kind: ModelKind::AmpleDivisorCanonical,
            chi: Some(chi),
            shift: None,
            ..Self::koszul(q, 0)
        }
    }

    /// Builds the module and rejects it unless `∪v` squares to zero.
    pub fn build(&self) -> Result<CupModule, CupModelError> {
        let m = match self.kind {
            ModelKind::Koszul => build_koszul(self.q, self.shift.unwrap_or(0))?,
            ModelKind::AmpleDivisorCanonical => {
                let chi = self.chi.ok_or_else(|| {
                    CupModelError::InvalidParameters("ample_divisor_canonical needs chi".into())
                })?;
                build_ample_divisor_canonical(self.q, chi)?
            }
            ModelKind::ExplicitTensors => self.build_explicit()?,
        };
        validate_cup_square_zero(&m).map_err(CupModelError::NotADifferential)?;
        Ok(m)
    }

    fn build_explicit(&self) -> Result<CupModule, CupModelError> {
        let tensors = self.tensors.as_ref().ok_or_else(|| {
            CupModelError::InvalidParameters("explicit_tensors needs tensors".into())
        })?;
        let dims = match &self.graded_dims {
            Some(d) => d.clone(),
            None => infer_dims(self.q, tensors)?,
        };
        let action = tensors
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let cols = self.q * dims.get(k).copied().unwrap_or(0);
                ExactMatrix::from_rows_with_cols(rows.clone(), cols)
                    .map_err(|e| CupModelError::Shape(format!("A_{k}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CupModule::new(self.q, dims, action, self.top_trace.clone())
    }
}

/// `d_{k+1}` is the row count of `A_k`, `d_k` its column count over `q`.
fn infer_dims(q: usize, tensors: &[Vec<Vec<Q>>]) -> Result<Vec<usize>, CupModelError> {
    if q == 0 {
        return Err(CupModelError::InvalidParameters("q must be positive".into()));
    }
    let first = tensors.first().ok_or_else(|| {
        CupModelError::InvalidParameters("graded_dims required when there are no tensors".into())
    })?;
    let cols = first.first().map(Vec::len).ok_or_else(|| {
        CupModelError::InvalidParameters("graded_dims required for empty tensors".into())
    })?;
    if cols % q != 0 {
        return Err(CupModelError::Shape(format!("A_0 has {cols} columns, not a multiple of q={q}")));
    }
    let mut dims = vec![cols / q];
    dims.extend(tensors.iter().map(Vec::len));
    Ok(dims)
}
