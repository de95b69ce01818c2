use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::matrix::{is_zero_vector, rank_of_vectors};
use crate::exact::{ExactMatrix, GaussianRational as Q};

/// Which structural fact a model fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "axiom")]
pub enum Axiom {
    Shape { detail: String },
    /// `im d_n = ker(mult_n)` inside `H1_{n−1}`.
    ExactnessAtH1 { index: usize },
    /// `ker d_n = im r_n` inside `Q_n`.
    ExactnessAtQ { n: usize },
    BaseSection,
    MulCommutative { a: usize },
    MulAssociative { a: usize, b: usize, c: usize },
    CupCompatibility,
    Transversality,
}

#[derive(Clone, Debug, Error, PartialEq, Eq, Serialize)]
#[error("axiom violated: {which:?} ({witness})")]
pub struct AxiomViolation {
    pub which: Axiom,
    pub witness: String,
}

fn violation(which: Axiom, witness: impl Into<String>) -> AxiomViolation {
    AxiomViolation {
        which,
        witness: witness.into(),
    }
}

/// `mul_{a,b} : Q_a ⊗ Q_b → Q_{a+b}`, column `i·dim Q_b + j` holding the
/// product of basis vectors `i` and `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub a: usize,
    pub b: usize,
    pub matrix: ExactMatrix,
}

/// Finite presentation of the sections and tails used by the lifter.
///
/// Index conventions: `s_dims[n−1] = dim S_n`, `q_dims[n−1] = dim Q_n`,
/// `h1_dims[n] = dim H1_n`; likewise `restriction[n−1] = r_n`,
/// `connecting[n−1] = d_n`, `mult_by_s[n−1] : H1_{n−1} → H1_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionAlgebraModel {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub n_max: usize,
    pub s_dims: Vec<usize>,
    pub q_dims: Vec<usize>,
    pub h1_dims: Vec<usize>,
    pub h2_dim: usize,
    pub restriction: Vec<ExactMatrix>,
    pub connecting: Vec<ExactMatrix>,
    pub mult_by_s: Vec<ExactMatrix>,
    pub cup_v_s: ExactMatrix,
    pub cup_v_h: ExactMatrix,
    /// Entries with `a ≤ b`, `a + b ≤ n_max`.
    pub products: Vec<ProductEntry>,
    pub base: Vec<Q>,
    pub direction: Vec<Q>,
}

fn schema_version() -> u32 {
    crate::SCHEMA_VERSION
}

impl SectionAlgebraModel {
    /// Parses a model file. Matrices with no rows carry no column count in
    /// JSON, so those are reshaped from the declared dimensions.
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let mut m: Self = serde_json::from_str(text)?;
        m.restore_empty_shapes();
        Ok(m)
    }

    fn restore_empty_shapes(&mut self) {
        fn fix(m: &mut ExactMatrix, cols: Option<usize>) {
            if let Some(cols) = cols {
                if m.rows() == 0 && m.cols() != cols {
                    *m = ExactMatrix::zeros(0, cols);
                }
            }
        }
        let q = |n: usize| self.q_dims.get(n.wrapping_sub(1)).copied();
        let s = |n: usize| self.s_dims.get(n.wrapping_sub(1)).copied();
        let h1 = |n: usize| self.h1_dims.get(n).copied();
        let (q_cols, s_cols, h1_cols): (Vec<_>, Vec<_>, Vec<_>) = (1..=self.restriction.len().max(self.connecting.len()).max(self.mult_by_s.len()))
            .map(|n| (q(n), s(n), h1(n - 1)))
            .fold((vec![], vec![], vec![]), |mut acc, (a, b, c)| {
                acc.0.push(a);
                acc.1.push(b);
                acc.2.push(c);
                acc
            });
        for (k, m) in self.restriction.iter_mut().enumerate() {
            fix(m, s_cols[k]);
        }
        for (k, m) in self.connecting.iter_mut().enumerate() {
            fix(m, q_cols[k]);
        }
        for (k, m) in self.mult_by_s.iter_mut().enumerate() {
            fix(m, h1_cols[k]);
        }
        let (s1, h11) = (s(1), h1(1));
        fix(&mut self.cup_v_s, s1);
        fix(&mut self.cup_v_h, h11);
        let dims = self.q_dims.clone();
        for p in &mut self.products {
            let cols = dims
                .get(p.a.wrapping_sub(1))
                .zip(dims.get(p.b.wrapping_sub(1)))
                .map(|(x, y)| x * y);
            fix(&mut p.matrix, cols);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn q_dim(&self, n: usize) -> usize {
        self.q_dims[n - 1]
    }

    pub fn s_dim(&self, n: usize) -> usize {
        self.s_dims[n - 1]
    }

    pub fn r(&self, n: usize) -> &ExactMatrix {
        &self.restriction[n - 1]
    }

    pub fn d(&self, n: usize) -> &ExactMatrix {
        &self.connecting[n - 1]
    }

    /// `H1_{n−1} → H1_n`.
    pub fn mult(&self, n: usize) -> &ExactMatrix {
        &self.mult_by_s[n - 1]
    }

    fn product(&self, a: usize, b: usize) -> Option<&ExactMatrix> {
        self.products
            .iter()
            .find(|p| p.a == a && p.b == b)
            .map(|p| &p.matrix)
    }

    /// `x·y` for `x ∈ Q_a`, `y ∈ Q_b`.
    pub fn mul(&self, a: usize, x: &[Q], b: usize, y: &[Q]) -> Vec<Q> {
        if a > b {
            return self.mul(b, y, a, x);
        }
        let m = self
            .product(a, b)
            .unwrap_or_else(|| panic!("no product Q_{a} ⊗ Q_{b} in the model"));
        let db = self.q_dim(b);
        let mut tensor = Vec::with_capacity(x.len() * db);
        for xi in x {
            for yj in y {
                tensor.push(xi * yj);
            }
        }
        m.apply(&tensor)
    }

    fn check_shapes(&self) -> Result<(), AxiomViolation> {
        let n = self.n_max;
        let shape = |detail: String| violation(Axiom::Shape { detail }, "");
        if n == 0 {
            return Err(shape("n_max must be at least 1".into()));
        }
        if self.s_dims.len() != n || self.q_dims.len() != n || self.h1_dims.len() != n + 1 {
            return Err(shape(format!(
                "need {n} S dims, {n} Q dims and {} H1 dims",
                n + 1
            )));
        }
        if self.restriction.len() != n || self.connecting.len() != n || self.mult_by_s.len() != n {
            return Err(shape(format!("need {n} restriction, connecting and mult maps")));
        }
        let expect = |m: &ExactMatrix, rows: usize, cols: usize, name: String| {
            if (m.rows(), m.cols()) == (rows, cols) {
                Ok(())
            } else {
                Err(shape(format!(
                    "{name} is {}×{}, expected {rows}×{cols}",
                    m.rows(),
                    m.cols()
                )))
            }
        };
        for k in 1..=n {
            expect(self.r(k), self.q_dim(k), self.s_dim(k), format!("r_{k}"))?;
            expect(self.d(k), self.h1_dims[k - 1], self.q_dim(k), format!("d_{k}"))?;
            expect(self.mult(k), self.h1_dims[k], self.h1_dims[k - 1], format!("mult_{k}"))?;
        }
        expect(&self.cup_v_s, self.h1_dims[1], self.s_dim(1), "cup_v_S".into())?;
        expect(&self.cup_v_h, self.h2_dim, self.h1_dims[1], "cup_v_H".into())?;
        for a in 1..=n {
            for b in a..=n - a {
                let m = self
                    .product(a, b)
                    .ok_or_else(|| shape(format!("missing product Q_{a} ⊗ Q_{b}")))?;
                expect(m, self.q_dim(a + b), self.q_dim(a) * self.q_dim(b), format!("mul_{a},{b}"))?;
            }
        }
        if self.base.len() != self.s_dim(1) {
            return Err(shape("base section is not in S_1".into()));
        }
        if self.direction.len() != self.h1_dims[0] {
            return Err(shape("direction is not in H1_0".into()));
        }
        Ok(())
    }

    /// Everything except the transversality axiom; the lifter needs these
    /// facts to even state its linear systems.
    pub fn validate_structure(&self) -> Result<(), AxiomViolation> {
        self.check_shapes()?;
        let n = self.n_max;
        for k in 1..=n {
            let image = self.d(k).image_basis();
            let kernel = self.mult(k).kernel_basis();
            if !same_span(&image, &kernel, self.h1_dims[k - 1]) {
                return Err(violation(
                    Axiom::ExactnessAtH1 { index: k - 1 },
                    format!(
                        "dim im d_{k} = {}, dim ker mult_{k} = {}",
                        image.len(),
                        kernel.len()
                    ),
                ));
            }
        }
        for k in 1..=n {
            let kernel = self.d(k).kernel_basis();
            let image = self.r(k).image_basis();
            if !same_span(&kernel, &image, self.q_dim(k)) {
                return Err(violation(
                    Axiom::ExactnessAtQ { n: k },
                    format!("dim ker d_{k} = {}, dim im r_{k} = {}", kernel.len(), image.len()),
                ));
            }
        }
        if !is_zero_vector(&self.r(1).apply(&self.base)) {
            return Err(violation(Axiom::BaseSection, "r_1(s) ≠ 0"));
        }
        if self.cup_v_s.apply(&self.base) != self.mult(1).apply(&self.direction) {
            return Err(violation(Axiom::BaseSection, "s ∪ v computed two ways disagree"));
        }
        self.check_products()?;
        self.check_cup_compatibility()
    }

    fn check_products(&self) -> Result<(), AxiomViolation> {
        let n = self.n_max;
        for a in 1..=n / 2 {
            let basis = unit_basis(self.q_dim(a));
            for x in &basis {
                for y in &basis {
                    if self.mul(a, x, a, y) != self.mul(a, y, a, x) {
                        return Err(violation(Axiom::MulCommutative { a }, format!("{x:?}·{y:?}")));
                    }
                }
            }
        }
        for a in 1..=n {
            for b in 1..=n.saturating_sub(a) {
                for c in 1..=n.saturating_sub(a + b) {
                    for x in unit_basis(self.q_dim(a)) {
                        for y in unit_basis(self.q_dim(b)) {
                            let xy = self.mul(a, &x, b, &y);
                            for z in unit_basis(self.q_dim(c)) {
                                let left = self.mul(a + b, &xy, c, &z);
                                let right = self.mul(a, &x, b + c, &self.mul(b, &y, c, &z));
                                if left != right {
                                    return Err(violation(
                                        Axiom::MulAssociative { a, b, c },
                                        format!("{x:?}, {y:?}, {z:?}"),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `d_2(r_1(ξ)·σ) = ξ ∪ v` for the canonical `σ` with `d_1σ = v`, and
    /// `d_2(r_1(ξ)·κ) = 0` for `κ ∈ ker d_1`.
    fn check_cup_compatibility(&self) -> Result<(), AxiomViolation> {
        if self.n_max < 2 {
            return Ok(());
        }
        let sigma = self.d(1).solve(&self.direction);
        let kernel = self.d(1).kernel_basis();
        for (i, xi) in unit_basis(self.s_dim(1)).iter().enumerate() {
            let restricted = self.r(1).apply(xi);
            if let Some(sigma) = &sigma {
                let lhs = self.d(2).apply(&self.mul(1, &restricted, 1, sigma));
                if lhs != self.cup_v_s.apply(xi) {
                    return Err(violation(
                        Axiom::CupCompatibility,
                        format!("d_2(r_1(ξ_{i})·σ) ≠ ξ_{i} ∪ v"),
                    ));
                }
            }
            for kappa in &kernel {
                let lhs = self.d(2).apply(&self.mul(1, &restricted, 1, kappa));
                if !is_zero_vector(&lhs) {
                    return Err(violation(
                        Axiom::CupCompatibility,
                        format!("d_2(r_1(ξ_{i})·κ) ≠ 0 for κ ∈ ker d_1"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `im(∪v : S_1 → H1_1) = ker(∪v : H1_1 → H2)`.
    pub fn check_transversality(&self) -> Result<(), AxiomViolation> {
        let image = self.cup_v_s.image_basis();
        let kernel = self.cup_v_h.kernel_basis();
        if same_span(&image, &kernel, self.h1_dims[1]) {
            Ok(())
        } else {
            Err(violation(
                Axiom::Transversality,
                format!("dim im ∪v|S = {}, dim ker ∪v|H1 = {}", image.len(), kernel.len()),
            ))
        }
    }
}

pub fn validate_model(m: &SectionAlgebraModel) -> Result<(), AxiomViolation> {
    m.validate_structure()?;
    m.check_transversality()
}

pub(crate) fn unit_basis(dim: usize) -> Vec<Vec<Q>> {
    (0..dim)
        .map(|i| {
            let mut e = vec![Q::from_integer(0); dim];
            e[i] = Q::from_integer(1);
            e
        })
        .collect()
}

fn same_span(a: &[Vec<Q>], b: &[Vec<Q>], dim: usize) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut both = a.to_vec();
    both.extend_from_slice(b);
    rank_of_vectors(&both, dim) == a.len()
}
