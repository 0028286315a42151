//! Numeric backend: the finite-dimensional real exterior algebra on n
//! generators, and matrices over it. Coordinates are indexed by bitmask.

use crate::error::{Error, Result};

/// Element of the 2^n-dimensional exterior algebra over the reals.
#[derive(Clone, Debug, PartialEq)]
pub struct ExteriorValue {
    n_vars: usize,
    coords: Vec<f64>,
}

/// Parity of the permutation that sorts the concatenation of the index sets
/// `a` and `b` (given as bitmasks); +1.0 or -1.0.
fn mask_sign(a: usize, b: usize) -> f64 {
    let mut inversions = 0u32;
    let mut bits = b;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        inversions += (a >> (i + 1)).count_ones();
        bits &= bits - 1;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl ExteriorValue {
    pub fn zero(n_vars: usize) -> Self {
        ExteriorValue {
            n_vars,
            coords: vec![0.0; 1 << n_vars],
        }
    }

    pub fn scalar(n_vars: usize, value: f64) -> Self {
        let mut v = ExteriorValue::zero(n_vars);
        v.coords[0] = value;
        v
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn get(&self, mask: usize) -> f64 {
        self.coords[mask]
    }

    pub fn set(&mut self, mask: usize, value: f64) {
        self.coords[mask] = value;
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn add(&self, other: &ExteriorValue) -> ExteriorValue {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        ExteriorValue {
            n_vars: self.n_vars,
            coords,
        }
    }

    pub fn sub(&self, other: &ExteriorValue) -> ExteriorValue {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        ExteriorValue {
            n_vars: self.n_vars,
            coords,
        }
    }

    pub fn scale(&self, factor: f64) -> ExteriorValue {
        let coords = self.coords.iter().map(|a| a * factor).collect();
        ExteriorValue {
            n_vars: self.n_vars,
            coords,
        }
    }

    pub fn wedge(&self, other: &ExteriorValue) -> ExteriorValue {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let mut out = ExteriorValue::zero(self.n_vars);
        for (ma, &ca) in self.coords.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (mb, &cb) in other.coords.iter().enumerate() {
                if cb == 0.0 || ma & mb != 0 {
                    continue;
                }
                out.coords[ma | mb] += mask_sign(ma, mb) * ca * cb;
            }
        }
        out
    }

    pub fn norm_max(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

/// A (p+q) x (p+q) matrix over the numeric exterior algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct MatValue {
    dim: usize,
    n_vars: usize,
    entries: Vec<ExteriorValue>,
}

impl MatValue {
    pub fn zero(dim: usize, n_vars: usize) -> Self {
        MatValue {
            dim,
            n_vars,
            entries: vec![ExteriorValue::zero(n_vars); dim * dim],
        }
    }

    pub fn identity(dim: usize, n_vars: usize) -> Self {
        let mut m = MatValue::zero(dim, n_vars);
        for i in 0..dim {
            *m.entry_mut(i, i) = ExteriorValue::scalar(n_vars, 1.0);
        }
        m
    }

    pub fn from_entries(dim: usize, n_vars: usize, entries: Vec<ExteriorValue>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::EntryCount(entries.len(), dim));
        }
        Ok(MatValue {
            dim,
            n_vars,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn entry(&self, i: usize, j: usize) -> &ExteriorValue {
        &self.entries[i * self.dim + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut ExteriorValue {
        &mut self.entries[i * self.dim + j]
    }

    pub fn add(&self, other: &MatValue) -> MatValue {
        debug_assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        MatValue {
            dim: self.dim,
            n_vars: self.n_vars,
            entries,
        }
    }

    pub fn sub(&self, other: &MatValue) -> MatValue {
        debug_assert_eq!(self.dim, other.dim);
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.sub(b))
            .collect();
        MatValue {
            dim: self.dim,
            n_vars: self.n_vars,
            entries,
        }
    }

    pub fn scale(&self, factor: f64) -> MatValue {
        let entries = self.entries.iter().map(|a| a.scale(factor)).collect();
        MatValue {
            dim: self.dim,
            n_vars: self.n_vars,
            entries,
        }
    }

    pub fn mul(&self, other: &MatValue) -> MatValue {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = MatValue::zero(self.dim, self.n_vars);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self.entry(i, k);
                if a.norm_max() == 0.0 {
                    continue;
                }
                for j in 0..self.dim {
                    let prod = a.wedge(other.entry(k, j));
                    *out.entry_mut(i, j) = out.entry(i, j).add(&prod);
                }
            }
        }
        out
    }

    /// Max absolute value over all 2^n * (p+q)^2 coordinates.
    pub fn norm_max(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.norm_max()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }

    /// Supertrace with the first `p` indices even.
    pub fn supertrace(&self, p: usize) -> ExteriorValue {
        let mut out = ExteriorValue::zero(self.n_vars);
        for i in 0..self.dim {
            let diag = self.entry(i, i);
            out = if i < p { out.add(diag) } else { out.sub(diag) };
        }
        out
    }

    /// `exp(self)` by scaling and squaring: scale so the max-norm is at most
    /// 1/2, run the Taylor series until the term norm drops below
    /// `tolerance`, then square back up.
    pub fn exp(&self, tolerance: f64) -> Result<MatValue> {
        if !self.is_finite() {
            return Err(Error::NonFinite);
        }
        let norm = self.norm_max();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let scaled = self.scale(0.5f64.powi(squarings as i32));
        let mut acc = MatValue::identity(self.dim, self.n_vars);
        let mut term = MatValue::identity(self.dim, self.n_vars);
        for k in 1..=80 {
            term = term.mul(&scaled).scale(1.0 / k as f64);
            acc = acc.add(&term);
            if term.norm_max() <= tolerance {
                break;
            }
        }
        for _ in 0..squarings {
            acc = acc.mul(&acc);
        }
        if !acc.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mask_sign_matches_small_cases() {
        assert_eq!(mask_sign(0b01, 0b10), 1.0); // dx1 ^ dx2
        assert_eq!(mask_sign(0b10, 0b01), -1.0); // dx2 ^ dx1
        assert_eq!(mask_sign(0b011, 0b100), 1.0);
    }

    #[test]
    fn wedge_kills_repeats() {
        let mut a = ExteriorValue::zero(2);
        a.set(0b01, 1.0);
        assert_eq!(a.wedge(&a).norm_max(), 0.0);
    }

    #[test]
    fn exp_of_scalar_matrix() {
        let c = 1.7;
        let m = MatValue::identity(2, 1).scale(-c);
        let e = m.exp(1e-14).unwrap();
        for i in 0..2 {
            assert!((e.entry(i, i).get(0) - (-c).exp()).abs() < 1e-12);
        }
        assert!(e.entry(0, 1).norm_max() < 1e-14);
    }

    #[test]
    fn exp_of_nilpotent() {
        // exp(N) = 1 + N for N = dx1^dx2 in a 1x1 matrix
        let mut m = MatValue::zero(1, 2);
        m.entry_mut(0, 0).set(0b11, 1.0);
        let e = m.exp(1e-14).unwrap();
        assert!((e.entry(0, 0).get(0) - 1.0).abs() < 1e-14);
        assert!((e.entry(0, 0).get(0b11) - 1.0).abs() < 1e-14);
    }
}
