//! Sparse multivariate polynomials with ℚ(i) coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::GaussianRational as Q;

/// Exponent vector; its length is the number of variables of the owning
/// polynomial.
pub type Monomial = Vec<u32>;

/// A polynomial `Σ c_m x^m`. Zero coefficients are never stored.
///
/// Polynomials with different variable counts can be combined: the shorter
/// exponent vectors are padded with zeros, so constants built with
/// `SparsePoly::one()` mix freely with polynomials in `n` variables.
#[derive(Clone, Default)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl SparsePoly {
    pub fn zero_in(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Q, nvars: usize) -> Self {
        let mut p = Self::zero_in(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The variable `x_index` (0-based) in a ring of `nvars` variables.
    pub fn var(index: usize, nvars: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut m = vec![0; nvars];
        m[index] = 1;
        let mut p = Self::zero_in(nvars);
        p.add_term(m, Q::one());
        p
    }

    /// `Σ c_i x_i`.
    pub fn linear_form(coefficients: &[Q]) -> Self {
        let n = coefficients.len();
        let mut p = Self::zero_in(n);
        for (i, c) in coefficients.iter().enumerate() {
            let mut m = vec![0; n];
            m[i] = 1;
            p.add_term(m, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, monomial: &[u32]) -> Q {
        let padded = pad(monomial, self.nvars.max(monomial.len()));
        let key = if padded.len() > self.nvars {
            if padded[self.nvars..].iter().any(|&e| e != 0) {
                return Q::zero();
            }
            padded[..self.nvars].to_vec()
        } else {
            padded
        };
        self.terms.get(&key).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `c·x^m`, dropping the term if it cancels.
    pub fn add_term(&mut self, monomial: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        if monomial.len() > self.nvars {
            self.promote(monomial.len());
        }
        let monomial = pad(&monomial, self.nvars);
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn promote(&mut self, nvars: usize) {
        if nvars <= self.nvars {
            return;
        }
        let old = std::mem::take(&mut self.terms);
        self.terms = old.into_iter().map(|(m, c)| (pad(&m, nvars), c)).collect();
        self.nvars = nvars;
    }

    fn promoted(&self, nvars: usize) -> Self {
        let mut p = self.clone();
        p.promote(nvars);
        p
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero_in(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::constant(Q::one(), self.nvars);
        for _ in 0..exp {
            result = &result * self;
        }
        result
    }

    /// Evaluates at a point with one coordinate per variable.
    pub fn eval(&self, point: &[Q]) -> Q {
        assert!(
            point.len() >= self.nvars,
            "point has {} coordinates, polynomial has {} variables",
            point.len(),
            self.nvars
        );
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .enumerate()
                    .fold(c.clone(), |acc, (i, &e)| acc * point[i].pow(e as i32))
            })
            .sum()
    }

    /// Formal partial derivative with respect to `x_var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero_in(self.nvars.max(var + 1));
        for (m, c) in &self.terms {
            let Some(&e) = m.get(var) else { continue };
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] -= 1;
            out.add_term(m2, c * &Q::from_integer(e.into()));
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }

    /// Renders with the given variable names; terms in descending lex order.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            let coeff = if c.is_real() { c.to_string() } else { format!("({c})") };
            let term = if mono.is_empty() {
                coeff
            } else if c.is_one() {
                mono.join("*")
            } else if *c == -Q::one() {
                format!("-{}", mono.join("*"))
            } else {
                format!("{coeff}*{}", mono.join("*"))
            };
            parts.push(term);
        }
        parts.join(" + ").replace("+ -", "- ")
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

fn pad(m: &[u32], n: usize) -> Monomial {
    let mut v = m.to_vec();
    v.resize(n.max(m.len()), 0);
    v
}

/// Equality is up to padding of the variable list.
impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self.terms.iter().all(|(m, c)| &other.coefficient(m) == c)
    }
}

impl Eq for SparsePoly {}

impl Zero for SparsePoly {
    fn zero() -> Self {
        Self::zero_in(0)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for SparsePoly {
    fn one() -> Self {
        Self::constant(Q::one(), 0)
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let n = self.nvars.max(rhs.nvars);
        let mut out = self.promoted(n);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        let n = self.nvars.max(rhs.nvars);
        let mut out = self.promoted(n);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let n = self.nvars.max(rhs.nvars);
        let mut out = SparsePoly::zero_in(n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut m = pad(ma, n);
                for (i, e) in mb.iter().enumerate() {
                    m[i] += e;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_poly {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr for SparsePoly {
            type Output = SparsePoly;
            fn $method(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$method(&rhs)
            }
        }
    )*};
}

forward_poly!(Add add, Sub sub, Mul mul);

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -&self
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Self::default_names(self.nvars)))
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}

/// Square matrix with polynomial entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<SparsePoly>,
}

impl PolyMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> SparsePoly) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    /// `Σ x_i · generators[i]` in a ring with one variable per generator.
    pub fn linear_combination(generators: &[super::ExactMatrix]) -> Self {
        let nvars = generators.len();
        let n = generators.first().map_or(0, |g| g.rows());
        Self::from_fn(n, |i, j| {
            let coeffs: Vec<Q> = generators.iter().map(|g| g[(i, j)].clone()).collect();
            let mut p = SparsePoly::linear_form(&coeffs);
            p.promote(nvars);
            p
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &SparsePoly {
        &self.entries[i * self.n + j]
    }

    pub fn is_skew(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    pub fn eval(&self, point: &[Q]) -> super::ExactMatrix {
        super::ExactMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).eval(point))
    }

    /// Determinant by Laplace expansion along rows with memoisation over
    /// the set of used columns (`O(2^n · n)` polynomial products).
    pub fn det(&self) -> SparsePoly {
        let n = self.n;
        assert!(n < usize::BITS as usize, "matrix too large for subset memo");
        if n == 0 {
            return SparsePoly::one();
        }
        // memo[mask] = determinant of the minor on rows (n - popcount(mask))..n
        // and the columns *not* in mask... built bottom-up from the last row.
        let full = (1usize << n) - 1;
        let mut memo: Vec<Option<SparsePoly>> = vec![None; 1 << n];
        memo[full] = Some(SparsePoly::one());
        for mask in (0..full).rev() {
            let used = mask.count_ones() as usize;
            let row = used;
            let mut acc = SparsePoly::zero();
            // Columns still free, in ascending order; the sign follows the
            // position of the column among the free ones.
            let mut position = 0usize;
            for col in 0..n {
                if mask & (1 << col) != 0 {
                    continue;
                }
                let entry = self.get(row, col);
                if !entry.is_zero() {
                    if let Some(rest) = &memo[mask | (1 << col)] {
                        if !rest.is_zero() {
                            let term = entry * rest;
                            acc = if position.is_multiple_of(2) { &acc + &term } else { &acc - &term };
                        }
                    }
                }
                position += 1;
            }
            memo[mask] = Some(acc);
        }
        memo[0].take().expect("root of memo table")
    }
}
