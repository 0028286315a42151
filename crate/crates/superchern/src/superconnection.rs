//! Superconnections d + A' on a trivial graded bundle: curvature, the
//! exponential of the curvature, and the Chern character form.

use num::{BigInt, One};

use crate::error::{Error, Result};
use crate::exterior_forms::Form;
use crate::graded_matrix_forms::{GradedShape, MatForm};
use crate::numeric::{ExteriorValue, MatValue};
use crate::scalar_poly::Rational;

/// The odd coefficient matrix A' = omega + A of a superconnection d + A'.
#[derive(Clone, PartialEq, Debug)]
pub struct Superconnection {
    a_prime: MatForm,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExpMode {
    ExactSeries { max_order: usize },
    NumericAtPoint { point: Vec<f64>, tolerance: f64 },
}

impl ExpMode {
    pub fn exact() -> Self {
        ExpMode::ExactSeries { max_order: 64 }
    }
}

/// Chern character in either computation mode.
#[derive(Clone, Debug, PartialEq)]
pub enum ChernValue {
    Exact(Form),
    Numeric(ExteriorValue),
}

impl Superconnection {
    /// Rejects any A' with a nonzero even total-parity part.
    pub fn new(a_prime: MatForm) -> Result<Self> {
        let (even, _) = a_prime.parity_decompose();
        if !even.is_zero() {
            return Err(Error::APrimeNotOdd);
        }
        Ok(Superconnection { a_prime })
    }

    pub fn a_prime(&self) -> &MatForm {
        &self.a_prime
    }

    pub fn shape(&self) -> GradedShape {
        self.a_prime.shape()
    }

    pub fn n_vars(&self) -> usize {
        self.a_prime.n_vars()
    }

    /// The connection coefficient: the degree-1 block-diagonal part of A'.
    pub fn omega(&self) -> MatForm {
        let mut out = MatForm::zero(self.shape(), self.n_vars());
        let one = self.a_prime.degree_component(1);
        for i in 0..self.a_prime.dim() {
            for j in 0..self.a_prime.dim() {
                if self.shape().block_parity(i, j) == 0 {
                    *out.entry_mut(i, j) = one.entry(i, j).clone();
                }
            }
        }
        out
    }

    /// The linear part A = A' - omega.
    pub fn linear_part(&self) -> MatForm {
        self.a_prime
            .checked_sub(&self.omega())
            .expect("same shape")
    }

    /// dA' + A' ^ A'; always of even total parity.
    pub fn curvature(&self) -> MatForm {
        let sq = self
            .a_prime
            .checked_mul(&self.a_prime)
            .expect("same shape");
        self.a_prime.d().checked_add(&sq).expect("same shape")
    }

    /// d F + A' F - F A' with F the curvature; zero for every
    /// superconnection.
    pub fn bianchi_residual(&self) -> MatForm {
        let f = self.curvature();
        let af = self.a_prime.checked_mul(&f).expect("same shape");
        let fa = f.checked_mul(&self.a_prime).expect("same shape");
        f.d()
            .checked_add(&af)
            .and_then(|m| m.checked_sub(&fa))
            .expect("same shape")
    }
}

/// Search bound for the nilpotency index: form-degree nilpotency plus matrix
/// nilpotency of the 0-form block.
pub fn nilpotency_bound(m: &MatForm) -> usize {
    m.n_vars() / 2 + 1 + m.dim()
}

/// Smallest K with m^K = 0, searched up to `nilpotency_bound`.
pub fn nilpotency_index(m: &MatForm) -> Result<usize> {
    let bound = nilpotency_bound(m);
    let mut power = m.clone();
    for k in 1..=bound {
        if power.is_zero() {
            return Ok(k);
        }
        power = power.checked_mul(m)?;
    }
    Err(Error::NotNilpotent(bound))
}

/// Terminating series for exp(-m) of a nilpotent m, with exact rational
/// division by k!.
pub fn exp_neg_exact(m: &MatForm, max_order: usize) -> Result<MatForm> {
    let k_nil = nilpotency_index(m)?;
    if k_nil - 1 > max_order {
        return Err(Error::MaxOrderExceeded {
            required: k_nil - 1,
            max_order,
        });
    }
    let mut acc = MatForm::identity(m.shape(), m.n_vars());
    let mut power = MatForm::identity(m.shape(), m.n_vars());
    let mut factorial = BigInt::one();
    for k in 1..k_nil {
        power = power.checked_mul(m)?;
        factorial *= BigInt::from(k);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let coeff = Rational::new(BigInt::from(sign), factorial.clone());
        acc = acc.checked_add(&power.scale(&coeff))?;
    }
    Ok(acc)
}

/// exp(-m) evaluated at a point of the chart, by scaling and squaring in the
/// finite-dimensional algebra.
pub fn exp_neg_numeric(m: &MatForm, point: &[f64], tolerance: f64) -> Result<MatValue> {
    if point.len() != m.n_vars() {
        return Err(Error::PointLength(point.len(), m.n_vars()));
    }
    m.eval(point)?.scale(-1.0).exp(tolerance)
}

pub fn chern_character_exact(s: &Superconnection, max_order: usize) -> Result<Form> {
    Ok(exp_neg_exact(&s.curvature(), max_order)?.supertrace())
}

pub fn chern_character_numeric(
    s: &Superconnection,
    point: &[f64],
    tolerance: f64,
) -> Result<ExteriorValue> {
    Ok(exp_neg_numeric(&s.curvature(), point, tolerance)?.supertrace(s.shape().p))
}

pub fn chern_character(s: &Superconnection, mode: &ExpMode) -> Result<ChernValue> {
    match mode {
        ExpMode::ExactSeries { max_order } => {
            Ok(ChernValue::Exact(chern_character_exact(s, *max_order)?))
        }
        ExpMode::NumericAtPoint { point, tolerance } => Ok(ChernValue::Numeric(
            chern_character_numeric(s, point, *tolerance)?,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_matrix_forms::Parity;
    use crate::scalar_poly::{rat_int, Poly};

    fn shape(p: usize, q: usize) -> GradedShape {
        GradedShape::new(p, q).unwrap()
    }

    /// The (1,0), n=2 running example: A' = x1 dx2.
    fn running_example() -> Superconnection {
        let mut a = MatForm::zero(shape(1, 0), 2);
        *a.entry_mut(0, 0) =
            Form::component(2, vec![1], Poly::var(2, 0).unwrap()).unwrap();
        Superconnection::new(a).unwrap()
    }

    #[test]
    fn zero_connection_curvature() {
        let s = Superconnection::new(MatForm::zero(shape(1, 1), 2)).unwrap();
        assert!(s.curvature().is_zero());
        assert!(s.bianchi_residual().is_zero());
    }

    #[test]
    fn running_example_curvature() {
        // dA' = dx1^dx2, A'^A' = 0
        let f = running_example().curvature();
        let expected = Form::dx(2, 0).unwrap().wedge(&Form::dx(2, 1).unwrap()).unwrap();
        assert_eq!(*f.entry(0, 0), expected);
        assert_eq!(f.total_parity(), Some(Parity::Even));
    }

    /// Off-diagonal 0-form coefficients on (1,1): the connection part is
    /// trivial, so A' is the linear part alone.
    fn flat_example() -> Superconnection {
        let mut a = MatForm::zero(shape(1, 1), 2);
        *a.entry_mut(0, 1) = Form::from_poly(Poly::var(2, 0).unwrap());
        *a.entry_mut(1, 0) = Form::from_poly(Poly::var(2, 1).unwrap());
        Superconnection::new(a).unwrap()
    }

    #[test]
    fn flat_case_matches_general_formula() {
        // With omega = 0 the curvature is dA + A^A computed independently.
        let s = flat_example();
        assert!(s.omega().is_zero());
        let a = s.linear_part();
        assert_eq!(a, *s.a_prime());
        let independent = a
            .d()
            .checked_add(&a.checked_mul(&a).unwrap())
            .unwrap();
        assert_eq!(s.curvature(), independent);
    }

    #[test]
    fn omega_of_running_example_is_its_diagonal_one_form() {
        let s = running_example();
        assert_eq!(s.omega(), *s.a_prime());
        assert!(s.linear_part().is_zero());
    }

    #[test]
    fn odd_invariant_enforced() {
        let mut a = MatForm::zero(shape(1, 1), 2);
        *a.entry_mut(0, 0) = Form::one(2); // even entry
        assert_eq!(Superconnection::new(a), Err(Error::APrimeNotOdd));
    }

    #[test]
    fn nilpotency_cases() {
        let s = shape(1, 0);
        assert_eq!(nilpotency_index(&MatForm::zero(s, 2)).unwrap(), 1);

        let mut top = MatForm::zero(s, 2);
        *top.entry_mut(0, 0) = Form::dx(2, 0)
            .unwrap()
            .wedge(&Form::dx(2, 1).unwrap())
            .unwrap();
        assert_eq!(nilpotency_index(&top).unwrap(), 2);

        let c = MatForm::identity(shape(1, 1), 2).scale(&rat_int(3));
        assert_eq!(nilpotency_index(&c), Err(Error::NotNilpotent(4)));
    }

    #[test]
    fn exp_neg_exact_cases() {
        let s = shape(1, 0);
        let id = MatForm::identity(s, 2);
        assert_eq!(exp_neg_exact(&MatForm::zero(s, 2), 64).unwrap(), id);

        let mut top = MatForm::zero(s, 2);
        *top.entry_mut(0, 0) = Form::dx(2, 0)
            .unwrap()
            .wedge(&Form::dx(2, 1).unwrap())
            .unwrap();
        let e = exp_neg_exact(&top, 64).unwrap();
        let expected = id.checked_sub(&top).unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn exp_neg_numeric_scalar_oracle() {
        let c = 1.3f64;
        let m = MatForm::identity(shape(1, 1), 1).scale(&Rational::new(
            BigInt::from(13),
            BigInt::from(10),
        ));
        let e = exp_neg_numeric(&m, &[0.0], 1e-13).unwrap();
        for i in 0..2 {
            assert!((e.entry(i, i).get(0) - (-c).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn chern_of_trivial_connection() {
        let s = Superconnection::new(MatForm::zero(shape(3, 1), 2)).unwrap();
        let ch = chern_character_exact(&s, 64).unwrap();
        assert_eq!(ch, Form::constant(2, rat_int(2)));
    }

    #[test]
    fn chern_of_running_example() {
        let ch = chern_character_exact(&running_example(), 64).unwrap();
        let expected = Form::one(2)
            .checked_sub(
                &Form::dx(2, 0)
                    .unwrap()
                    .wedge(&Form::dx(2, 1).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert_eq!(ch, expected);
    }

    #[test]
    fn off_diagonal_constant_cancels_numerically() {
        // A' = [[0, c], [c, 0]] on (1,1): curvature = c^2 id, str cancels.
        let mut a = MatForm::zero(shape(1, 1), 1);
        *a.entry_mut(0, 1) = Form::one(1);
        *a.entry_mut(1, 0) = Form::one(1);
        let s = Superconnection::new(a).unwrap();
        let ch = chern_character_numeric(&s, &[0.7], 1e-13).unwrap();
        assert!(ch.norm_max() < 1e-12);
    }

    #[test]
    fn running_example_bianchi() {
        assert!(running_example().bianchi_residual().is_zero());
    }

    #[test]
    fn chern_is_closed_and_even() {
        let ch = chern_character_exact(&running_example(), 64).unwrap();
        assert!(ch.d().is_zero());
        assert!(ch.has_pure_degree_parity(0));
    }
}
