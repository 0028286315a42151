//! Exact multivariate polynomial arithmetic over the rationals.
//!
//! `Poly` is the coefficient ring for every form in the crate. Terms are
//! keyed by exponent vector in lexicographic order and zero coefficients are
//! never stored, so structural equality coincides with mathematical equality.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rational {
    Rational::from(BigInt::from(num))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    n_vars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Self {
        Poly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, value: Rational) -> Self {
        let mut p = Poly::zero(n_vars);
        if !value.is_zero() {
            p.terms.insert(vec![0; n_vars], value);
        }
        p
    }

    pub fn one(n_vars: usize) -> Self {
        Poly::constant(n_vars, Rational::one())
    }

    /// The coordinate polynomial `x_{var}` (0-based index).
    pub fn var(n_vars: usize, var: usize) -> Result<Self> {
        if var >= n_vars {
            return Err(Error::VarIndex {
                index: var,
                n_vars,
            });
        }
        let mut exps = vec![0; n_vars];
        exps[var] = 1;
        let mut p = Poly::zero(n_vars);
        p.terms.insert(exps, Rational::one());
        Ok(p)
    }

    pub fn monomial(n_vars: usize, exps: Vec<u32>, coeff: Rational) -> Result<Self> {
        if exps.len() != n_vars {
            return Err(Error::VarMismatch(exps.len(), n_vars));
        }
        let mut p = Poly::zero(n_vars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        Ok(p)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, exps: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(c) => {
                *c += coeff;
                if c.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, coeff);
            }
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        if self.n_vars != other.n_vars {
            return Err(Error::VarMismatch(self.n_vars, other.n_vars));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        if self.n_vars != other.n_vars {
            return Err(Error::VarMismatch(self.n_vars, other.n_vars));
        }
        let mut out = Poly::zero(self.n_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), -c.clone()))
            .collect();
        Poly {
            n_vars: self.n_vars,
            terms,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Poly {
        if factor.is_zero() {
            return Poly::zero(self.n_vars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c * factor))
            .collect();
        Poly {
            n_vars: self.n_vars,
            terms,
        }
    }

    /// Formal partial derivative with respect to variable `var` (0-based).
    pub fn partial(&self, var: usize) -> Result<Poly> {
        if var >= self.n_vars {
            return Err(Error::VarIndex {
                index: var,
                n_vars: self.n_vars,
            });
        }
        let mut out = Poly::zero(self.n_vars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[var] -= 1;
            out.add_term(exps, c * Rational::from(BigInt::from(e[var])));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.n_vars {
            return Err(Error::PointLength(point.len(), self.n_vars));
        }
        let mut total = 0.0;
        for (e, c) in &self.terms {
            let mut m = c.to_f64().ok_or(Error::NonFinite)?;
            for (x, &k) in point.iter().zip(e) {
                m *= x.powi(k as i32);
            }
            total += m;
        }
        Ok(total)
    }

    /// Signed canonical term strings, in lexicographic exponent order.
    ///
    /// Each entry is `(is_negative, text_of_abs_value)`; callers splice in
    /// `+`/`-` separators. A unit coefficient is elided unless the monomial
    /// is constant.
    pub(crate) fn signed_term_strings(&self) -> Vec<(bool, String)> {
        let mut out = Vec::new();
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let abs = c.abs();
            let mut parts: Vec<String> = Vec::new();
            let constant = e.iter().all(|&k| k == 0);
            if constant || !abs.is_one() {
                parts.push(abs.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => parts.push(format!("x{}", i + 1)),
                    _ => parts.push(format!("x{}^{}", i + 1, k)),
                }
            }
            out.push((neg, parts.join("*")));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (neg, text)) in self.signed_term_strings().iter().enumerate() {
            if i == 0 {
                if *neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if *neg { "-" } else { "+" })?;
            }
            write!(f, "{text}")?;
        }
        Ok(())
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("variable count mismatch")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("variable count mismatch")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("variable count mismatch")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}
