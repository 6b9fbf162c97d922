//! Universal differential calculus, derivations, cyclic cocycles from closed
//! graded traces, and Hodge decomposition of finite graded calculi.
//!
//! Degree-`k` universal forms are coordinates in `Ã ⊗ A^{⊗k}`, where the basis
//! tensor `x ⊗ e_{i_1} ⊗ … ⊗ e_{i_k}` stands for `x de_{i_1} ⋯ de_{i_k}` and `x`
//! runs over `e_0 … e_{d−1}` and the adjoined unit `1̃` (slot index `d`). Degree 0
//! is the unitization `Ã`, with `d1̃ = 0`; its `A` part is `Ω⁰_u(A) = A`.

mod cocycle;
mod format;
mod hodge;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

pub use cocycle::{
    cocycle_from_trace, trace_from_cocycle, twisted_cocycle_check, twisted_trace_from_cocycle,
    MultilinearFunctional,
};
pub use format::parse_graded_calculus;
pub use hodge::{
    hodge, universal_map, universal_property_check, GradedCalculus, HodgeDegree, HodgeReport,
};

use crate::error::{check_size, Error, Result};
use crate::exact::{ExactMatrix, GaussRat};
use crate::homology::FiniteAlgebra;

/// Largest universal-form component `(d+1)·d^N` that may be built.
pub const MAX_FORM_DIM: u128 = 1_000_000;

/// A homogeneous universal form.
#[derive(Debug, Clone, PartialEq)]
pub struct Form {
    pub degree: usize,
    pub coeffs: Vec<GaussRat>,
}

impl Form {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_same(other)?;
        Ok(Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.check_same(other)?;
        Ok(Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: &GaussRat) -> Form {
        Form {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    fn check_same(&self, other: &Form) -> Result<()> {
        if self.degree != other.degree || self.coeffs.len() != other.coeffs.len() {
            return Err(Error::Shape(format!(
                "forms of degree {} and {} cannot be added",
                self.degree, other.degree
            )));
        }
        Ok(())
    }
}

/// Sparse combination of basis forms of one degree, keyed by basis index.
type Terms = BTreeMap<usize, GaussRat>;

fn accumulate(terms: &mut Terms, idx: usize, v: GaussRat) {
    if v.is_zero() {
        return;
    }
    let remove = match terms.get_mut(&idx) {
        Some(e) => {
            *e += &v;
            e.is_zero()
        }
        None => {
            terms.insert(idx, v);
            false
        }
    };
    if remove {
        terms.remove(&idx);
    }
}

/// A basis form: coefficient slot (`d` for `1̃`) and the differentiated slots.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Word {
    head: usize,
    tail: Vec<usize>,
}

/// The universal calculus `Ω_u(A)` truncated at `max_degree`.
#[derive(Debug, Clone)]
pub struct UniversalForms {
    base: FiniteAlgebra,
    max_degree: usize,
    differentials: Vec<ExactMatrix>,
}

/// Builds `Ω_u(A)` through degree `max_degree`, with `d_u` as exact matrices.
pub fn universal_forms(alg: &FiniteAlgebra, max_degree: usize) -> Result<UniversalForms> {
    let d = alg.dim();
    let top = (d as u128 + 1).saturating_mul((d as u128).checked_pow(max_degree as u32).unwrap_or(u128::MAX));
    check_size(&format!("universal forms of degree {max_degree}"), top, MAX_FORM_DIM)?;
    let mut forms = UniversalForms {
        base: alg.clone(),
        max_degree,
        differentials: Vec::new(),
    };
    forms.differentials = (0..max_degree).map(|k| forms.build_differential(k)).collect();
    Ok(forms)
}

impl UniversalForms {
    pub fn base(&self) -> &FiniteAlgebra {
        &self.base
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Dimension `(d+1)·d^k` of degree `k`.
    pub fn dim(&self, k: usize) -> usize {
        let d = self.base.dim();
        (d + 1) * d.pow(k as u32)
    }

    /// Index of the adjoined unit `1̃` among coefficient slots.
    pub fn tilde_one(&self) -> usize {
        self.base.dim()
    }

    /// `d_u` from degree `k` to `k+1`.
    pub fn differential(&self, k: usize) -> Result<&ExactMatrix> {
        self.differentials.get(k).ok_or_else(|| {
            Error::Domain(format!(
                "no differential out of degree {k} in a calculus truncated at {}",
                self.max_degree
            ))
        })
    }

    fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.max_degree {
            return Err(Error::Domain(format!(
                "degree {k} exceeds the truncation degree {}",
                self.max_degree
            )));
        }
        Ok(())
    }

    fn word(&self, k: usize, mut idx: usize) -> Word {
        let d = self.base.dim();
        let mut tail = vec![0; k];
        for slot in tail.iter_mut().rev() {
            *slot = idx % d;
            idx /= d;
        }
        Word { head: idx, tail }
    }

    fn index(&self, head: usize, tail: &[usize]) -> usize {
        let d = self.base.dim();
        tail.iter().fold(head, |acc, &x| acc * d + x)
    }

    fn build_differential(&self, k: usize) -> ExactMatrix {
        let one = self.tilde_one();
        let mut m = ExactMatrix::zeros(self.dim(k + 1), self.dim(k));
        for idx in 0..self.dim(k) {
            let w = self.word(k, idx);
            if w.head == one {
                continue;
            }
            let mut tail = vec![w.head];
            tail.extend_from_slice(&w.tail);
            m.set(self.index(one, &tail), idx, GaussRat::one());
        }
        m
    }

    pub fn zero(&self, k: usize) -> Result<Form> {
        self.check_degree(k)?;
        Ok(Form {
            degree: k,
            coeffs: vec![GaussRat::zero(); self.dim(k)],
        })
    }

    /// Basis form number `idx` of degree `k`.
    pub fn basis(&self, k: usize, idx: usize) -> Result<Form> {
        let mut f = self.zero(k)?;
        if idx >= f.coeffs.len() {
            return Err(Error::Shape(format!("basis index {idx} out of range in degree {k}")));
        }
        f.coeffs[idx] = GaussRat::one();
        Ok(f)
    }

    /// `a_0 da_1 ⋯ da_k` with `a_0 ∈ Ã` (length `d+1`, last entry the `1̃`
    /// coefficient) and `a_i ∈ A`.
    pub fn elementary(&self, a0: &[GaussRat], rest: &[Vec<GaussRat>]) -> Result<Form> {
        let d = self.base.dim();
        let k = rest.len();
        self.check_degree(k)?;
        if a0.len() != d + 1 || rest.iter().any(|a| a.len() != d) {
            return Err(Error::Shape("elementary form needs a0 ∈ Ã and a_i ∈ A".into()));
        }
        let mut coeffs = a0.to_vec();
        for a in rest {
            let mut next = Vec::with_capacity(coeffs.len() * d);
            for c in &coeffs {
                for x in a {
                    next.push(c * x);
                }
            }
            coeffs = next;
        }
        Ok(Form { degree: k, coeffs })
    }

    /// An element of `A` as a degree-0 form (no `1̃` component).
    pub fn function(&self, a: &[GaussRat]) -> Result<Form> {
        if a.len() != self.base.dim() {
            return Err(Error::Shape("element has the wrong length".into()));
        }
        let mut coeffs = a.to_vec();
        coeffs.push(GaussRat::zero());
        Ok(Form { degree: 0, coeffs })
    }

    /// The unit `1̃` of the calculus.
    pub fn unit(&self) -> Form {
        let mut f = self.zero(0).expect("degree 0 exists");
        let one = self.tilde_one();
        f.coeffs[one] = GaussRat::one();
        f
    }

    pub fn d(&self, form: &Form) -> Result<Form> {
        let m = self.differential(form.degree)?;
        Ok(Form {
            degree: form.degree + 1,
            coeffs: m.apply(&form.coeffs)?,
        })
    }

    /// Product of slot `head` (possibly `1̃`) with `e_j`, as sparse coordinates in `A`.
    fn head_times(&self, head: usize, j: usize) -> Vec<(usize, GaussRat)> {
        if head == self.tilde_one() {
            vec![(j, GaussRat::one())]
        } else {
            self.base.basis_product(head, j).clone()
        }
    }

    /// `(a_0 da_1 ⋯ da_n)(b_0 db_1 ⋯ db_q)` on basis words via the closed formula
    /// `(−1)^n a_0a_1 da_2 ⋯ da_n db_0 ⋯ db_q + Σ_{r=1}^n (−1)^{n−r} a_0 da_1 ⋯ d(a_r a_{r+1}) ⋯ db_q`
    /// over the list `a_1, …, a_n, b_0, b_1, …, b_q`.
    fn word_product_formula(&self, x: &Word, y: &Word, out: &mut Terms, scale: &GaussRat) {
        let one = self.tilde_one();
        if y.head == one {
            let mut tail = x.tail.clone();
            tail.extend_from_slice(&y.tail);
            accumulate(out, self.index(x.head, &tail), scale.clone());
            return;
        }
        let n = x.tail.len();
        let mut list = x.tail.clone();
        list.push(y.head);
        list.extend_from_slice(&y.tail);
        if n == 0 {
            for (k, c) in self.head_times(x.head, y.head) {
                accumulate(out, self.index(k, &y.tail), scale * &c);
            }
            return;
        }
        let sign = |e: usize| if e % 2 == 0 { scale.clone() } else { -scale };
        for (k, c) in self.head_times(x.head, list[0]) {
            accumulate(out, self.index(k, &list[1..]), &sign(n) * &c);
        }
        for r in 1..=n {
            // Merge list positions r−1 and r (a_r a_{r+1} in 1-based terms).
            for (k, c) in self.base.basis_product(list[r - 1], list[r]) {
                let mut tail = Vec::with_capacity(list.len() - 1);
                tail.extend_from_slice(&list[..r - 1]);
                tail.push(*k);
                tail.extend_from_slice(&list[r + 1..]);
                accumulate(out, self.index(x.head, &tail), &sign(n - r) * c);
            }
        }
    }

    /// Right action of `e_y` on a basis word by repeated use of
    /// `(ω da) y = ω d(ay) − (ω a) dy`.
    fn word_times_function(&self, x: &Word, y: usize) -> Terms {
        let mut out = Terms::new();
        match x.tail.split_last() {
            None => {
                for (k, c) in self.head_times(x.head, y) {
                    accumulate(&mut out, self.index(k, &[]), c);
                }
            }
            Some((&last, front)) => {
                let prefix = Word {
                    head: x.head,
                    tail: front.to_vec(),
                };
                for (k, c) in self.base.basis_product(last, y) {
                    let mut tail = front.to_vec();
                    tail.push(*k);
                    accumulate(&mut out, self.index(x.head, &tail), c.clone());
                }
                let lower = self.word_times_function(&prefix, last);
                let degree = front.len();
                for (idx, c) in lower {
                    let w = self.word(degree, idx);
                    let mut tail = w.tail;
                    tail.push(y);
                    accumulate(&mut out, self.index(w.head, &tail), -c);
                }
            }
        }
        out
    }

    fn word_product_bimodule(&self, x: &Word, y: &Word, out: &mut Terms, scale: &GaussRat) {
        let one = self.tilde_one();
        let (lead, degree): (Terms, usize) = if y.head == one {
            (std::iter::once((self.index(x.head, &x.tail), GaussRat::one())).collect(), x.tail.len())
        } else {
            (self.word_times_function(x, y.head), x.tail.len())
        };
        for (idx, c) in lead {
            let w = self.word(degree, idx);
            let mut tail = w.tail;
            tail.extend_from_slice(&y.tail);
            accumulate(out, self.index(w.head, &tail), scale * &c);
        }
    }

    fn product_with(
        &self,
        a: &Form,
        b: &Form,
        rule: impl Fn(&Self, &Word, &Word, &mut Terms, &GaussRat),
    ) -> Result<Form> {
        let degree = a.degree + b.degree;
        if degree > self.max_degree {
            return Err(Error::Domain(format!(
                "product degree {degree} exceeds the truncation degree {}",
                self.max_degree
            )));
        }
        let mut out = Terms::new();
        for (i, x) in a.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            let wx = self.word(a.degree, i);
            for (j, y) in b.coeffs.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let wy = self.word(b.degree, j);
                rule(self, &wx, &wy, &mut out, &(x * y));
            }
        }
        let mut f = self.zero(degree)?;
        for (idx, v) in out {
            f.coeffs[idx] = v;
        }
        Ok(f)
    }

    /// Graded product by the closed product formula.
    pub fn product(&self, a: &Form, b: &Form) -> Result<Form> {
        self.product_with(a, b, Self::word_product_formula)
    }

    /// Graded product by composing the bimodule actions one generator at a time.
    pub fn product_via_bimodule(&self, a: &Form, b: &Form) -> Result<Form> {
        self.product_with(a, b, Self::word_product_bimodule)
    }

    /// Checks `d(ωη) = (dω)η + (−1)^p ω dη`; `None` when the degrees do not fit.
    pub fn leibniz_holds(&self, a: &Form, b: &Form) -> Result<Option<bool>> {
        if a.degree + b.degree + 1 > self.max_degree {
            return Ok(None);
        }
        let lhs = self.d(&self.product(a, b)?)?;
        let first = self.product(&self.d(a)?, b)?;
        let second = self.product(a, &self.d(b)?)?;
        let rhs = if a.degree % 2 == 0 {
            first.add(&second)?
        } else {
            first.sub(&second)?
        };
        Ok(Some(lhs == rhs))
    }

    /// Product of two basis forms as a sparse vector; used by the trace checks.
    pub(crate) fn basis_product(&self, p: usize, i: usize, q: usize, j: usize) -> Terms {
        let mut out = Terms::new();
        self.word_product_formula(&self.word(p, i), &self.word(q, j), &mut out, &GaussRat::one());
        out
    }

    /// The truncation as a [`GradedCalculus`] with identity Gram matrices; products
    /// landing above the top degree are dropped.
    pub fn to_graded_calculus(&self) -> Result<GradedCalculus> {
        let n = self.max_degree;
        let dims: Vec<usize> = (0..=n).map(|k| self.dim(k)).collect();
        let mut products = BTreeMap::new();
        for p in 0..=n {
            for q in 0..=n - p {
                let mut m = ExactMatrix::zeros(dims[p + q], dims[p] * dims[q]);
                for i in 0..dims[p] {
                    for j in 0..dims[q] {
                        for (k, v) in self.basis_product(p, i, q, j) {
                            m.set(k, i * dims[q] + j, v);
                        }
                    }
                }
                products.insert((p, q), m);
            }
        }
        let grams = dims.iter().map(|&k| ExactMatrix::identity(k)).collect();
        GradedCalculus::new(dims, self.differentials.clone(), products, grams)
    }
}

/// Basis of `Der(A)`: matrices `X` (column `j` is `X(e_j)`) with
/// `X(e_i e_j) = X(e_i) e_j + e_i X(e_j)`.
pub fn derivations(alg: &FiniteAlgebra) -> Vec<ExactMatrix> {
    let d = alg.dim();
    // Unknown X_{m,j} sits at column m·d + j; one equation per (i, j, l).
    let var = |m: usize, j: usize| m * d + j;
    let mut system = ExactMatrix::zeros(d * d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            let row0 = (i * d + j) * d;
            // X(e_i e_j) = Σ_k c_ij^k X(e_k)
            for (k, c) in alg.basis_product(i, j) {
                for l in 0..d {
                    system.add_to(row0 + l, var(l, *k), c);
                }
            }
            // − X(e_i) e_j = − Σ_m X_{m,i} e_m e_j
            for m in 0..d {
                for (l, c) in alg.basis_product(m, j) {
                    system.add_to(row0 + l, var(m, i), &-c);
                }
            }
            // − e_i X(e_j)
            for m in 0..d {
                for (l, c) in alg.basis_product(i, m) {
                    system.add_to(row0 + l, var(m, j), &-c);
                }
            }
        }
    }
    system
        .nullspace()
        .into_iter()
        .map(|v| {
            let rows: Vec<Vec<GaussRat>> = (0..d).map(|m| v[m * d..(m + 1) * d].to_vec()).collect();
            ExactMatrix::from_dense(&rows).expect("square")
        })
        .collect()
}
