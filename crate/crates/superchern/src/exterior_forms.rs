//! The exterior algebra of a coordinate chart with polynomial coefficients.
//!
//! A `Form` stores one `Poly` per strictly increasing index tuple, so the
//! representation is canonical: all wedge signs are resolved at construction
//! and equality is structural. Mixed-degree forms are first-class.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::numeric::ExteriorValue;
use crate::scalar_poly::{Poly, Rational};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Form {
    n_vars: usize,
    // index tuples are 0-based and strictly increasing; no zero Poly stored
    components: BTreeMap<Vec<u32>, Poly>,
}

/// Sign of merging two sorted disjoint index tuples, with the merged tuple.
/// Returns `None` when the tuples intersect. The sign is the parity of the
/// number of transpositions needed to sort the concatenation.
fn merge_sign(a: &[u32], b: &[u32]) -> Option<(i32, Vec<u32>)> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let mut sign = 1i32;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            merged.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining a[i..]
            if (a.len() - i) % 2 == 1 {
                sign = -sign;
            }
            merged.push(b[j]);
            j += 1;
        }
    }
    merged.extend_from_slice(&a[i..]);
    merged.extend_from_slice(&b[j..]);
    Some((sign, merged))
}

impl Form {
    pub fn zero(n_vars: usize) -> Self {
        Form {
            n_vars,
            components: BTreeMap::new(),
        }
    }

    /// A 0-form.
    pub fn from_poly(p: Poly) -> Self {
        let n_vars = p.n_vars();
        let mut f = Form::zero(n_vars);
        if !p.is_zero() {
            f.components.insert(Vec::new(), p);
        }
        f
    }

    pub fn one(n_vars: usize) -> Self {
        Form::from_poly(Poly::one(n_vars))
    }

    pub fn constant(n_vars: usize, value: Rational) -> Self {
        Form::from_poly(Poly::constant(n_vars, value))
    }

    /// The coordinate 1-form `dx_{var}` (0-based index).
    pub fn dx(n_vars: usize, var: usize) -> Result<Self> {
        if var >= n_vars {
            return Err(Error::VarIndex {
                index: var,
                n_vars,
            });
        }
        let mut f = Form::zero(n_vars);
        f.components.insert(vec![var as u32], Poly::one(n_vars));
        Ok(f)
    }

    /// `p dx_I` for a strictly increasing 0-based index tuple `I`.
    pub fn component(n_vars: usize, indices: Vec<u32>, coeff: Poly) -> Result<Self> {
        if coeff.n_vars() != n_vars {
            return Err(Error::VarMismatch(coeff.n_vars(), n_vars));
        }
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::IndexTuple);
        }
        if let Some(&last) = indices.last() {
            if last as usize >= n_vars {
                return Err(Error::VarIndex {
                    index: last as usize,
                    n_vars,
                });
            }
        }
        let mut f = Form::zero(n_vars);
        if !coeff.is_zero() {
            f.components.insert(indices, coeff);
        }
        Ok(f)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<u32>, &Poly)> {
        self.components.iter()
    }

    /// Component keys sorted by (degree, index tuple); the canonical
    /// rendering and JSON order.
    pub fn sorted_keys(&self) -> Vec<&Vec<u32>> {
        let mut keys: Vec<&Vec<u32>> = self.components.keys().collect();
        keys.sort_by_key(|k| (k.len(), (*k).clone()));
        keys
    }

    pub fn coefficient(&self, indices: &[u32]) -> Poly {
        self.components
            .get(indices)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.n_vars))
    }

    pub fn max_degree(&self) -> usize {
        self.components.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    fn add_component(&mut self, indices: Vec<u32>, coeff: Poly) {
        if coeff.is_zero() {
            return;
        }
        match self.components.get_mut(&indices) {
            Some(p) => {
                let sum = p.checked_add(&coeff).expect("n_vars invariant");
                if sum.is_zero() {
                    self.components.remove(&indices);
                } else {
                    *p = sum;
                }
            }
            None => {
                self.components.insert(indices, coeff);
            }
        }
    }

    pub fn checked_add(&self, other: &Form) -> Result<Form> {
        if self.n_vars != other.n_vars {
            return Err(Error::VarMismatch(self.n_vars, other.n_vars));
        }
        let mut out = self.clone();
        for (idx, p) in &other.components {
            out.add_component(idx.clone(), p.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Form) -> Result<Form> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Form {
        let components = self
            .components
            .iter()
            .map(|(i, p)| (i.clone(), p.neg()))
            .collect();
        Form {
            n_vars: self.n_vars,
            components,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Form {
        let mut out = Form::zero(self.n_vars);
        for (idx, p) in &self.components {
            out.add_component(idx.clone(), p.scale(factor));
        }
        out
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        if self.n_vars != other.n_vars {
            return Err(Error::VarMismatch(self.n_vars, other.n_vars));
        }
        let mut out = Form::zero(self.n_vars);
        for (ia, pa) in &self.components {
            for (ib, pb) in &other.components {
                if let Some((sign, merged)) = merge_sign(ia, ib) {
                    let mut coeff = pa.checked_mul(pb)?;
                    if sign < 0 {
                        coeff = coeff.neg();
                    }
                    out.add_component(merged, coeff);
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative: `d(f dx_I) = sum_i (d_i f) dx_i ^ dx_I`.
    pub fn d(&self) -> Form {
        let mut out = Form::zero(self.n_vars);
        for (idx, p) in &self.components {
            for var in 0..self.n_vars {
                let dp = p.partial(var).expect("var in range");
                if dp.is_zero() {
                    continue;
                }
                if let Some((sign, merged)) = merge_sign(&[var as u32], idx) {
                    let coeff = if sign < 0 { dp.neg() } else { dp };
                    out.add_component(merged, coeff);
                }
            }
        }
        out
    }

    /// Restriction to the components of exterior degree `k`.
    pub fn degree_component(&self, k: usize) -> Form {
        let components = self
            .components
            .iter()
            .filter(|(i, _)| i.len() == k)
            .map(|(i, p)| (i.clone(), p.clone()))
            .collect();
        Form {
            n_vars: self.n_vars,
            components,
        }
    }

    /// True when every component has the same degree parity as `parity`
    /// (0 = even, 1 = odd).
    pub fn has_pure_degree_parity(&self, parity: u8) -> bool {
        self.components
            .keys()
            .all(|i| (i.len() % 2) as u8 == parity)
    }

    /// Projection onto components of degree parity `parity`.
    pub fn degree_parity_part(&self, parity: u8) -> Form {
        let components = self
            .components
            .iter()
            .filter(|(i, _)| (i.len() % 2) as u8 == parity)
            .map(|(i, p)| (i.clone(), p.clone()))
            .collect();
        Form {
            n_vars: self.n_vars,
            components,
        }
    }

    /// Negate the odd-degree components (the Koszul sign of commuting an odd
    /// variable past this form).
    pub fn parity_flip(&self) -> Form {
        let components = self
            .components
            .iter()
            .map(|(i, p)| {
                let p = if i.len() % 2 == 1 { p.neg() } else { p.clone() };
                (i.clone(), p)
            })
            .collect();
        Form {
            n_vars: self.n_vars,
            components,
        }
    }

    pub fn eval(&self, point: &[f64]) -> Result<ExteriorValue> {
        if point.len() != self.n_vars {
            return Err(Error::PointLength(point.len(), self.n_vars));
        }
        let mut out = ExteriorValue::zero(self.n_vars);
        for (idx, p) in &self.components {
            let mask = idx.iter().fold(0usize, |m, &i| m | (1 << i));
            out.set(mask, p.eval(point)?);
        }
        Ok(out)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        use num::{Signed, ToPrimitive};
        let mut best = 0.0f64;
        for p in self.components.values() {
            for (_, c) in p.terms() {
                best = best.max(c.abs().to_f64().unwrap_or(f64::INFINITY));
            }
        }
        best
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for key in self.sorted_keys() {
            let poly = &self.components[key];
            let dx: Vec<String> = key.iter().map(|i| format!("dx{}", i + 1)).collect();
            let dx = dx.join("^");
            let pieces: Vec<(bool, String)> = if key.is_empty() {
                poly.signed_term_strings()
            } else {
                let terms = poly.signed_term_strings();
                if terms.len() == 1 {
                    let (neg, text) = terms.into_iter().next().unwrap();
                    vec![(neg, format!("{text}*{dx}"))]
                } else {
                    vec![(false, format!("({poly})*{dx}"))]
                }
            };
            for (neg, text) in pieces {
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                    first = false;
                } else {
                    write!(f, " {} ", if neg { "-" } else { "+" })?;
                }
                write!(f, "{text}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_poly::rat_int;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i).unwrap()
    }

    #[test]
    fn add_merges_components() {
        // x1 dx2 + dx2 = (x1 + 1) dx2
        let a = Form::component(2, vec![1], x(2, 0)).unwrap();
        let b = Form::dx(2, 1).unwrap();
        let sum = a.checked_add(&b).unwrap();
        let expected =
            Form::component(2, vec![1], x(2, 0).checked_add(&Poly::one(2)).unwrap()).unwrap();
        assert_eq!(sum, expected);
    }

    #[test]
    fn add_zero_and_cancellation() {
        let a = Form::dx(2, 0).unwrap().wedge(&Form::dx(2, 1).unwrap()).unwrap();
        assert_eq!(a.checked_add(&Form::zero(2)).unwrap(), a);
        assert!(a.checked_add(&a.neg()).unwrap().is_zero());
    }

    #[test]
    fn wedge_antisymmetry_of_one_forms() {
        let dx1 = Form::dx(2, 0).unwrap();
        let dx2 = Form::dx(2, 1).unwrap();
        let ab = dx1.wedge(&dx2).unwrap();
        let ba = dx2.wedge(&dx1).unwrap();
        assert_eq!(ab, ba.neg());
        assert!(dx1.wedge(&dx1).unwrap().is_zero());
    }

    #[test]
    fn wedge_bilinearity_sign() {
        // (x2 dx1) ^ (x1 dx2) = x1 x2 dx1^dx2
        let a = Form::component(2, vec![0], x(2, 1)).unwrap();
        let b = Form::component(2, vec![1], x(2, 0)).unwrap();
        let expected = Form::component(2, vec![0, 1], &x(2, 0) * &x(2, 1)).unwrap();
        assert_eq!(a.wedge(&b).unwrap(), expected);
    }

    #[test]
    fn d_basic() {
        // d(x1 dx2) = dx1^dx2
        let a = Form::component(2, vec![1], x(2, 0)).unwrap();
        let expected = Form::component(2, vec![0, 1], Poly::one(2)).unwrap();
        assert_eq!(a.d(), expected);

        // d(x1 x2) = x2 dx1 + x1 dx2
        let f = Form::from_poly(&x(2, 0) * &x(2, 1));
        let expected = Form::component(2, vec![0], x(2, 1))
            .unwrap()
            .checked_add(&Form::component(2, vec![1], x(2, 0)).unwrap())
            .unwrap();
        assert_eq!(f.d(), expected);
    }

    #[test]
    fn d_squared_zero() {
        let p = &(&x(3, 0) * &x(3, 1)) * &x(3, 2);
        let f = Form::from_poly(p);
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn degree_component_partition() {
        let a = Form::one(2)
            .checked_add(&Form::component(2, vec![0, 1], Poly::one(2)).unwrap())
            .unwrap();
        assert_eq!(
            a.degree_component(2),
            Form::component(2, vec![0, 1], Poly::one(2)).unwrap()
        );
        let mut resum = Form::zero(2);
        for k in 0..=2 {
            resum = resum.checked_add(&a.degree_component(k)).unwrap();
        }
        assert_eq!(resum, a);
        assert!(Form::one(2).degree_component(1).is_zero());
    }

    #[test]
    fn eval_basic() {
        let a = Form::component(2, vec![1], x(2, 0)).unwrap();
        let v = a.eval(&[2.0, 0.0]).unwrap();
        assert_eq!(v.get(0b10), 2.0);
        assert_eq!(v.get(0), 0.0);
    }

    #[test]
    fn eval_commutes_with_wedge() {
        let a = Form::component(2, vec![0], x(2, 1))
            .unwrap()
            .checked_add(&Form::from_poly(x(2, 0)))
            .unwrap();
        let b = Form::component(2, vec![1], x(2, 0)).unwrap();
        let point = [1.25, -0.5];
        let lhs = a.wedge(&b).unwrap().eval(&point).unwrap();
        let rhs = a.eval(&point).unwrap().wedge(&b.eval(&point).unwrap());
        assert!(lhs.sub(&rhs).norm_max() < 1e-12);
    }

    #[test]
    fn invalid_tuples_rejected() {
        assert_eq!(
            Form::component(2, vec![1, 0], Poly::one(2)),
            Err(Error::IndexTuple)
        );
        assert!(Form::component(2, vec![0, 2], Poly::one(2)).is_err());
        assert!(Form::dx(1, 0)
            .unwrap()
            .checked_add(&Form::dx(2, 0).unwrap())
            .is_err());
    }

    #[test]
    fn display_golden() {
        let ch = Form::one(2)
            .checked_sub(&Form::component(2, vec![0, 1], Poly::one(2)).unwrap())
            .unwrap();
        assert_eq!(ch.to_string(), "1 - 1*dx1^dx2");

        let two = Form::constant(2, rat_int(2));
        assert_eq!(two.to_string(), "2");

        let mixed =
            Form::component(2, vec![1], x(2, 0).checked_add(&Poly::one(2)).unwrap()).unwrap();
        assert_eq!(mixed.to_string(), "(1 + x1)*dx2");
    }
}
