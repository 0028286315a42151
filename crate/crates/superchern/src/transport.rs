//! Parallel transport along the universal superpoint path.
//!
//! The theta-expanded transport equation reduces to the constraint
//! `psi1 = A' psi0` together with `d psi0 / dt = -(dA' + A'^A') psi0`. The
//! generator is time-independent, so the exact solver is the terminating
//! exponential series; RK4 time-stepping is kept as an independent numeric
//! oracle.

use num::{BigInt, One};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded_matrix_forms::MatForm;
use crate::numeric::MatValue;
use crate::scalar_poly::Rational;
use crate::superconnection::{
    chern_character_exact, chern_character_numeric, exp_neg_exact, exp_neg_numeric, nilpotency_index,
    Superconnection,
};

/// Coefficients of the reduced transport system.
#[derive(Clone, PartialEq, Debug)]
pub struct TransportSystem {
    constraint_coeff: MatForm, // A'
    generator: MatForm,        // G = dA' + A'^A'
    d_a_prime: MatForm,
}

impl TransportSystem {
    pub fn constraint_coeff(&self) -> &MatForm {
        &self.constraint_coeff
    }

    pub fn generator(&self) -> &MatForm {
        &self.generator
    }

    pub fn d_a_prime(&self) -> &MatForm {
        &self.d_a_prime
    }

    /// Replace the generator, breaking the defining identity. Only useful as
    /// a negative control for the verification checks.
    pub fn with_corrupted_generator(mut self, generator: MatForm) -> Self {
        self.generator = generator;
        self
    }
}

/// Reduce the theta-expanded transport equation of `s` to its coupled
/// system; the generator coincides with the curvature.
pub fn reduce_to_system(s: &Superconnection) -> TransportSystem {
    let a_prime = s.a_prime().clone();
    let d_a_prime = a_prime.d();
    let sq = a_prime.checked_mul(&a_prime).expect("same shape");
    let generator = d_a_prime.checked_add(&sq).expect("same shape");
    debug_assert_eq!(generator, s.curvature());
    TransportSystem {
        constraint_coeff: a_prime,
        generator,
        d_a_prime,
    }
}

/// Residuals of the unreduced theta-expansion, computed directly from the
/// superconnection rather than from `reduce_to_system`:
/// `r0 = psi1 - A' psi0`, `r1 = dpsi0_dt + A' psi1 + (dA') psi0`.
pub fn raw_residual(
    s: &Superconnection,
    psi0: &MatForm,
    psi1: &MatForm,
    dpsi0_dt: &MatForm,
) -> Result<(MatForm, MatForm)> {
    let a_prime = s.a_prime();
    let r0 = psi1.checked_sub(&a_prime.checked_mul(psi0)?)?;
    let r1 = dpsi0_dt
        .checked_add(&a_prime.checked_mul(psi1)?)?
        .checked_add(&a_prime.d().checked_mul(psi0)?)?;
    Ok((r0, r1))
}

/// Exact solution `psi0(t) = exp(-t G)` as a terminating series, with
/// `psi1 = A' psi0`.
pub fn solve_exact(sys: &TransportSystem, t: &Rational) -> Result<(MatForm, MatForm)> {
    let g = &sys.generator;
    let k_nil = nilpotency_index(g)?;
    let mut psi0 = MatForm::identity(g.shape(), g.n_vars());
    let mut power = MatForm::identity(g.shape(), g.n_vars());
    let mut factorial = BigInt::one();
    let mut t_pow = Rational::one();
    for k in 1..k_nil {
        power = power.checked_mul(g)?;
        factorial *= BigInt::from(k);
        t_pow *= t;
        let sign = if k % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        let coeff = &t_pow * Rational::from(sign) / Rational::from(factorial.clone());
        psi0 = psi0.checked_add(&power.scale(&coeff))?;
    }
    let psi1 = sys.constraint_coeff.checked_mul(&psi0)?;
    Ok((psi0, psi1))
}

/// Numeric trajectory of the reduced system on a uniform grid over [0, 1].
#[derive(Clone, Debug)]
pub struct SuperSectionTrajectory {
    pub times: Vec<f64>,
    pub psi0: Vec<MatValue>,
    pub psi1: Vec<MatValue>,
}

/// Classical RK4 on `psi0' = -G psi0` in the numeric algebra, from the
/// identity at t = 0; `steps` must be at least 1.
pub fn solve_rk4(
    sys: &TransportSystem,
    point: &[f64],
    steps: usize,
) -> Result<SuperSectionTrajectory> {
    if steps == 0 {
        return Err(Error::Spec("step count must be positive".into()));
    }
    let g = sys.generator.eval(point)?;
    let a = sys.constraint_coeff.eval(point)?;
    if !g.is_finite() || !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let h = 1.0 / steps as f64;
    let dim = sys.generator.dim();
    let n_vars = sys.generator.n_vars();
    let mut y = MatValue::identity(dim, n_vars);
    let mut times = Vec::with_capacity(steps + 1);
    let mut psi0 = Vec::with_capacity(steps + 1);
    let mut psi1 = Vec::with_capacity(steps + 1);
    let rhs = |y: &MatValue| g.mul(y).scale(-1.0);
    times.push(0.0);
    psi1.push(a.mul(&y));
    psi0.push(y.clone());
    for step in 1..=steps {
        let k1 = rhs(&y);
        let k2 = rhs(&y.add(&k1.scale(h / 2.0)));
        let k3 = rhs(&y.add(&k2.scale(h / 2.0)));
        let k4 = rhs(&y.add(&k3.scale(h)));
        let incr = k1
            .add(&k2.scale(2.0))
            .add(&k3.scale(2.0))
            .add(&k4)
            .scale(h / 6.0);
        y = y.add(&incr);
        if !y.is_finite() {
            return Err(Error::NonFinite);
        }
        times.push(step as f64 * h);
        psi1.push(a.mul(&y));
        psi0.push(y.clone());
    }
    Ok(SuperSectionTrajectory { times, psi0, psi1 })
}

/// How `verify_theorem` should solve and compare.
#[derive(Clone, Debug)]
pub enum VerifyMode {
    Exact,
    Numeric {
        point: Vec<f64>,
        h: f64,
        tolerance: f64,
    },
}

/// Flat record of the gaps between transport and the exponential of the
/// curvature.
#[derive(Clone, Debug, Serialize)]
pub struct TransportReport {
    pub mode: String,
    pub residual_constraint: f64,
    pub residual_ode: f64,
    pub terminal_gap: f64,
    pub ch_gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
}

/// Norm used for exact-mode reports: 0 for the zero matrix, otherwise the
/// largest absolute rational coefficient.
fn exact_norm(m: &MatForm) -> f64 {
    if m.is_zero() {
        0.0
    } else {
        m.max_abs_coefficient()
    }
}

fn steps_from_h(h: f64) -> Result<usize> {
    if !(h > 0.0) {
        return Err(Error::Spec("step size must be positive".into()));
    }
    let steps = (1.0 / h).round();
    if steps < 1.0 || (steps * h - 1.0).abs() > 1e-9 {
        return Err(Error::Spec(format!(
            "step size {h} does not divide the unit interval"
        )));
    }
    Ok(steps as usize)
}

/// Solve the transport system of `s` and compare the terminal value with the
/// exponential of the curvature, and its supertrace with the Chern
/// character.
pub fn verify_theorem(s: &Superconnection, mode: &VerifyMode) -> Result<TransportReport> {
    let sys = reduce_to_system(s);
    match mode {
        VerifyMode::Exact => {
            let (psi0, psi1) = solve_exact(&sys, &Rational::one())?;
            let dpsi0 = sys.generator.checked_mul(&psi0)?.neg();
            let (r0, r1) = raw_residual(s, &psi0, &psi1, &dpsi0)?;
            let expected = exp_neg_exact(&s.curvature(), 64)?;
            let gap = psi0.checked_sub(&expected)?;
            let ch_gap = psi0
                .supertrace()
                .checked_sub(&chern_character_exact(s, 64)?)?;
            Ok(TransportReport {
                mode: "exact".into(),
                residual_constraint: exact_norm(&r0),
                residual_ode: exact_norm(&r1),
                terminal_gap: exact_norm(&gap),
                ch_gap: if ch_gap.is_zero() {
                    0.0
                } else {
                    ch_gap.max_abs_coefficient()
                },
                h: None,
                point: None,
            })
        }
        VerifyMode::Numeric {
            point,
            h,
            tolerance,
        } => {
            let steps = steps_from_h(*h)?;
            let traj = solve_rk4(&sys, point, steps)?;
            let a = sys.constraint_coeff.eval(point)?;
            let d_a = sys.d_a_prime.eval(point)?;
            // Constraint residual over the grid.
            let mut residual_constraint = 0.0f64;
            for (y0, y1) in traj.psi0.iter().zip(&traj.psi1) {
                residual_constraint = residual_constraint.max(y1.sub(&a.mul(y0)).norm_max());
            }
            // Second-equation residual with a central-difference time
            // derivative (independent of the generator identity).
            let mut residual_ode = 0.0f64;
            for i in 1..traj.times.len().saturating_sub(1) {
                let dt = traj.times[i + 1] - traj.times[i - 1];
                let dpsi0 = traj.psi0[i + 1].sub(&traj.psi0[i - 1]).scale(1.0 / dt);
                let r1 = dpsi0
                    .add(&a.mul(&traj.psi1[i]))
                    .add(&d_a.mul(&traj.psi0[i]));
                residual_ode = residual_ode.max(r1.norm_max());
            }
            let expected = exp_neg_numeric(&s.curvature(), point, *tolerance)?;
            let terminal = traj.psi0.last().expect("nonempty trajectory");
            let terminal_gap = terminal.sub(&expected).norm_max();
            let ch = terminal.supertrace(s.shape().p);
            let ch_gap = ch
                .sub(&chern_character_numeric(s, point, *tolerance)?)
                .norm_max();
            Ok(TransportReport {
                mode: "numeric".into(),
                residual_constraint,
                residual_ode,
                terminal_gap,
                ch_gap,
                h: Some(*h),
                point: Some(point.to_vec()),
            })
        }
    }
}

/// Parse `h` into a step count, shared with the CLI so usage errors match.
pub fn validate_step(h: f64) -> Result<usize> {
    steps_from_h(h)
}
