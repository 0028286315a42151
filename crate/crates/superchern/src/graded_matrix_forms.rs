//! Endomorphism-valued differential forms on a trivial Z/2-graded bundle.
//!
//! A `MatForm` is a (p+q) x (p+q) matrix of `Form`s; rows and columns up to
//! `p` are even, the rest odd. The product is plain matrix multiplication
//! with entrywise wedge (the standard identification with matrices over the
//! form algebra, no extra Koszul sign). Total parity of an entry
//! contribution is form degree plus block parity, mod 2.

use crate::error::{Error, Result};
use crate::exterior_forms::Form;
use crate::numeric::MatValue;
use crate::scalar_poly::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct GradedShape {
    pub p: usize,
    pub q: usize,
}

impl GradedShape {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::EmptyShape);
        }
        Ok(GradedShape { p, q })
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    /// 0 when row i and column j lie in the same block, 1 otherwise.
    pub fn block_parity(&self, i: usize, j: usize) -> u8 {
        ((i >= self.p) != (j >= self.p)) as u8
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatForm {
    shape: GradedShape,
    n_vars: usize,
    entries: Vec<Form>, // row-major, dim * dim
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl MatForm {
    pub fn zero(shape: GradedShape, n_vars: usize) -> Self {
        MatForm {
            shape,
            n_vars,
            entries: vec![Form::zero(n_vars); shape.dim() * shape.dim()],
        }
    }

    pub fn identity(shape: GradedShape, n_vars: usize) -> Self {
        let mut m = MatForm::zero(shape, n_vars);
        for i in 0..shape.dim() {
            *m.entry_mut(i, i) = Form::one(n_vars);
        }
        m
    }

    pub fn from_entries(shape: GradedShape, n_vars: usize, entries: Vec<Form>) -> Result<Self> {
        if entries.len() != shape.dim() * shape.dim() {
            return Err(Error::EntryCount(entries.len(), shape.dim()));
        }
        for e in &entries {
            if e.n_vars() != n_vars {
                return Err(Error::VarMismatch(e.n_vars(), n_vars));
            }
        }
        Ok(MatForm {
            shape,
            n_vars,
            entries,
        })
    }

    pub fn shape(&self) -> GradedShape {
        self.shape
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.dim() + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Form {
        let d = self.dim();
        &mut self.entries[i * d + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Form::is_zero)
    }

    fn check_compatible(&self, other: &MatForm) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch);
        }
        if self.n_vars != other.n_vars {
            return Err(Error::VarMismatch(self.n_vars, other.n_vars));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MatForm) -> Result<MatForm> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<Vec<_>>>()?;
        MatForm::from_entries(self.shape, self.n_vars, entries)
    }

    pub fn checked_sub(&self, other: &MatForm) -> Result<MatForm> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> MatForm {
        let entries = self.entries.iter().map(Form::neg).collect();
        MatForm {
            shape: self.shape,
            n_vars: self.n_vars,
            entries,
        }
    }

    pub fn scale(&self, factor: &Rational) -> MatForm {
        let entries = self.entries.iter().map(|e| e.scale(factor)).collect();
        MatForm {
            shape: self.shape,
            n_vars: self.n_vars,
            entries,
        }
    }

    /// Matrix product with entrywise wedge.
    pub fn checked_mul(&self, other: &MatForm) -> Result<MatForm> {
        self.check_compatible(other)?;
        let dim = self.dim();
        let mut out = MatForm::zero(self.shape, self.n_vars);
        for i in 0..dim {
            for k in 0..dim {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let b = other.entry(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.wedge(b)?;
                    *out.entry_mut(i, j) = out.entry(i, j).checked_add(&prod)?;
                }
            }
        }
        Ok(out)
    }

    /// Entrywise exterior derivative.
    pub fn d(&self) -> MatForm {
        let entries = self.entries.iter().map(Form::d).collect();
        MatForm {
            shape: self.shape,
            n_vars: self.n_vars,
            entries,
        }
    }

    /// Trace over the even block minus trace over the odd block.
    pub fn supertrace(&self) -> Form {
        let mut out = Form::zero(self.n_vars);
        for i in 0..self.dim() {
            let diag = self.entry(i, i);
            out = if i < self.shape.p {
                out.checked_add(diag).expect("shared n_vars")
            } else {
                out.checked_sub(diag).expect("shared n_vars")
            };
        }
        out
    }

    /// Split into (even, odd) total-parity parts; the parts re-sum to the
    /// input.
    pub fn parity_decompose(&self) -> (MatForm, MatForm) {
        let mut even = MatForm::zero(self.shape, self.n_vars);
        let mut odd = MatForm::zero(self.shape, self.n_vars);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let bp = self.shape.block_parity(i, j);
                let e = self.entry(i, j);
                *even.entry_mut(i, j) = e.degree_parity_part(bp);
                *odd.entry_mut(i, j) = e.degree_parity_part(1 - bp);
            }
        }
        (even, odd)
    }

    /// `Some(parity)` when the matrix is homogeneous in total parity (the
    /// zero matrix counts as even).
    pub fn total_parity(&self) -> Option<Parity> {
        let (even, odd) = self.parity_decompose();
        match (even.is_zero(), odd.is_zero()) {
            (_, true) => Some(Parity::Even),
            (true, false) => Some(Parity::Odd),
            _ => None,
        }
    }

    /// Negate the odd total-parity part (sign of commuting an odd variable
    /// past this matrix).
    pub fn parity_flip(&self) -> MatForm {
        let (even, odd) = self.parity_decompose();
        even.checked_add(&odd.neg()).expect("same shape")
    }

    /// `ab - (-1)^{|a||b|} ba` for total-parity homogeneous a, b.
    pub fn supercommutator(&self, other: &MatForm) -> Result<MatForm> {
        self.check_compatible(other)?;
        let pa = self.total_parity().ok_or(Error::InhomogeneousParity)?;
        let pb = other.total_parity().ok_or(Error::InhomogeneousParity)?;
        let ab = self.checked_mul(other)?;
        let ba = other.checked_mul(self)?;
        if pa == Parity::Odd && pb == Parity::Odd {
            ab.checked_add(&ba)
        } else {
            ab.checked_sub(&ba)
        }
    }

    /// True when every entry is a 1-form supported in the diagonal blocks.
    pub fn is_block_diagonal_one_form(&self) -> bool {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let e = self.entry(i, j);
                if e.is_zero() {
                    continue;
                }
                if self.shape.block_parity(i, j) != 0 {
                    return false;
                }
                if e.degree_component(1) != *e {
                    return false;
                }
            }
        }
        true
    }

    /// Projection of each entry onto exterior degree `k`.
    pub fn degree_component(&self, k: usize) -> MatForm {
        let entries = self.entries.iter().map(|e| e.degree_component(k)).collect();
        MatForm {
            shape: self.shape,
            n_vars: self.n_vars,
            entries,
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<MatValue> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.eval(point))
            .collect::<Result<Vec<_>>>()?;
        MatValue::from_entries(self.dim(), self.n_vars, entries)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.entries
            .iter()
            .fold(0.0, |m, e| m.max(e.max_abs_coefficient()))
    }
}
