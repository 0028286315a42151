//! Pullbacks along the universal superpoint path and the theta-expansion
//! calculus.
//!
//! A `ThetaPair` holds `body + soul * theta` with theta the odd coordinate
//! (theta^2 = 0, theta anticommutes with odd elements). The generator action
//! sends a homogeneous k-form a to `a + (-1)^k (da) theta`, and the lift
//! pullback sends a matrix A to `A - theta dA`.

use crate::error::{Error, Result};
use crate::exterior_forms::Form;
use crate::graded_matrix_forms::MatForm;
use crate::scalar_poly::Poly;
use crate::superconnection::Superconnection;

/// Shared surface of the two coefficient algebras (forms and matrix forms)
/// that theta-expansion needs.
pub trait ThetaAlgebra: Sized + Clone + PartialEq {
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    /// Negate the odd part: the sign of commuting theta past the element.
    fn parity_flip(&self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl ThetaAlgebra for Form {
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.wedge(other)
    }
    fn parity_flip(&self) -> Self {
        Form::parity_flip(self)
    }
    fn neg(&self) -> Self {
        Form::neg(self)
    }
    fn is_zero(&self) -> bool {
        Form::is_zero(self)
    }
}

impl ThetaAlgebra for MatForm {
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.checked_add(other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)
    }
    fn parity_flip(&self) -> Self {
        MatForm::parity_flip(self)
    }
    fn neg(&self) -> Self {
        MatForm::neg(self)
    }
    fn is_zero(&self) -> bool {
        MatForm::is_zero(self)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ThetaPair<T> {
    pub body: T,
    pub soul: T,
}

impl<T: ThetaAlgebra> ThetaPair<T> {
    pub fn new(body: T, soul: T) -> Self {
        ThetaPair { body, soul }
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero() && self.soul.is_zero()
    }

    pub fn neg(&self) -> Self {
        ThetaPair {
            body: self.body.neg(),
            soul: self.soul.neg(),
        }
    }
}

/// Product of theta-expansions:
/// `(a0 + a1 t)(b0 + b1 t) = a0 b0 + (a0 b1 + a1 flip(b0)) t`
/// since `t b0 = flip(b0) t` and `t^2 = 0`.
pub fn theta_mul<T: ThetaAlgebra>(a: &ThetaPair<T>, b: &ThetaPair<T>) -> Result<ThetaPair<T>> {
    let body = a.body.try_mul(&b.body)?;
    let soul = a
        .body
        .try_mul(&b.soul)?
        .try_add(&a.soul.try_mul(&b.body.parity_flip())?)?;
    Ok(ThetaPair { body, soul })
}

/// The action of the odd translation on forms: degreewise
/// `a_k -> a_k + (-1)^k (d a_k) theta`.
pub fn t_star(a: &Form) -> ThetaPair<Form> {
    let mut soul = Form::zero(a.n_vars());
    for k in 0..=a.max_degree() {
        let part = a.degree_component(k).d();
        soul = if k % 2 == 0 {
            soul.checked_add(&part).expect("same n_vars")
        } else {
            soul.checked_sub(&part).expect("same n_vars")
        };
    }
    ThetaPair::new(a.clone(), soul)
}

/// The soul-extraction of `t_star` alone; applying it twice gives zero
/// because d squares to zero.
pub fn t_star_soul(a: &Form) -> Form {
    t_star(a).soul
}

/// Pullback of the linear coefficient along the canonical lift:
/// `A -> A - theta dA`.
pub fn tilde_c_pullback(a: &MatForm) -> ThetaPair<MatForm> {
    // For odd A, dA is even and commutes with theta, so -theta dA = -dA theta.
    ThetaPair::new(a.clone(), a.d().neg())
}

/// Contraction of the pulled-back connection form with the transport
/// direction: `omega -> -omega + (d omega) theta`.
pub fn connection_coefficient(omega: &MatForm) -> Result<ThetaPair<MatForm>> {
    if !omega.is_block_diagonal_one_form() {
        return Err(Error::BadConnectionForm);
    }
    Ok(ThetaPair::new(omega.neg(), omega.d()))
}

/// Coefficient of the reduced transport equation: `A' - theta dA'`, the
/// connection and linear contributions merged through A' = A + omega.
pub fn total_transport_coefficient(s: &Superconnection) -> ThetaPair<MatForm> {
    tilde_c_pullback(s.a_prime())
}

/// Checks the contraction of the pulled-back 1-form `f dg` two ways:
/// directly via `connection_coefficient`, and through the theta-expansions
/// of f and g as `-t_star(f) * dg`.
pub fn verify_fdg_contraction(f: &Poly, g: &Poly) -> Result<bool> {
    let n = f.n_vars();
    if n != g.n_vars() {
        return Err(Error::VarMismatch(n, g.n_vars()));
    }
    let f_form = Form::from_poly(f.clone());
    let g_form = Form::from_poly(g.clone());
    let dg = g_form.d();
    let omega = f_form.wedge(&dg)?;

    // Route (i): matrix-level contraction on a (1,0) bundle.
    let shape = crate::graded_matrix_forms::GradedShape::new(1, 0)?;
    let mut omega_mat = MatForm::zero(shape, n);
    *omega_mat.entry_mut(0, 0) = omega.clone();
    let direct = connection_coefficient(&omega_mat)?;

    // Route (ii): -T*(f) * (dg + 0 theta), using only t_star pieces.
    let expanded = theta_mul(
        &t_star(&f_form),
        &ThetaPair::new(dg.clone(), Form::zero(n)),
    )?
    .neg();

    Ok(*direct.body.entry(0, 0) == expanded.body && *direct.soul.entry(0, 0) == expanded.soul)
}
