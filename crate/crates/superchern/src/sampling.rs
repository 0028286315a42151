//! Seeded random generators for polynomials, forms, and odd coefficient
//! matrices, used by the verification command and the property suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exterior_forms::Form;
use crate::graded_matrix_forms::{GradedShape, MatForm};
use crate::scalar_poly::{rat, Poly, Rational};
use crate::superconnection::Superconnection;

pub const SEED_ENV: &str = "SUPERCHERN_SEED";

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seed from `SUPERCHERN_SEED` when set, else a fixed default.
    pub fn from_env() -> Self {
        let seed = std::env::var(SEED_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(0x5eed);
        Sampler::new(seed)
    }

    pub fn rational(&mut self) -> Rational {
        let num = self.rng.gen_range(-3i64..=3);
        let den = self.rng.gen_range(1i64..=3);
        rat(num, den)
    }

    pub fn nonzero_rational(&mut self) -> Rational {
        loop {
            let r = self.rational();
            if !num::Zero::is_zero(&r) {
                return r;
            }
        }
    }

    pub fn poly(&mut self, n_vars: usize, max_degree: u32) -> Poly {
        let mut out = Poly::zero(n_vars);
        let n_terms = self.rng.gen_range(1..=3);
        for _ in 0..n_terms {
            let mut exps = vec![0u32; n_vars];
            let mut budget = max_degree;
            for e in exps.iter_mut() {
                let k = self.rng.gen_range(0..=budget);
                *e = k;
                budget -= k;
            }
            let term = Poly::monomial(n_vars, exps, self.rational()).expect("length matches");
            out = out.checked_add(&term).expect("same n_vars");
        }
        out
    }

    fn index_tuple(&mut self, n_vars: usize, degree: usize) -> Vec<u32> {
        let mut all: Vec<u32> = (0..n_vars as u32).collect();
        for i in (1..all.len()).rev() {
            let j = self.rng.gen_range(0..=i);
            all.swap(i, j);
        }
        let mut tuple: Vec<u32> = all.into_iter().take(degree).collect();
        tuple.sort_unstable();
        tuple
    }

    /// Random form of homogeneous exterior degree.
    pub fn homogeneous_form(&mut self, n_vars: usize, degree: usize, max_poly_degree: u32) -> Form {
        assert!(degree <= n_vars);
        let mut out = Form::zero(n_vars);
        let n_components = self.rng.gen_range(1..=2);
        for _ in 0..n_components {
            let tuple = self.index_tuple(n_vars, degree);
            let comp = Form::component(n_vars, tuple, self.poly(n_vars, max_poly_degree))
                .expect("valid tuple");
            out = out.checked_add(&comp).expect("same n_vars");
        }
        out
    }

    pub fn form(&mut self, n_vars: usize, max_poly_degree: u32) -> Form {
        let mut out = Form::zero(n_vars);
        for degree in 0..=n_vars {
            if self.rng.gen_bool(0.5) {
                let h = self.homogeneous_form(n_vars, degree, max_poly_degree);
                out = out.checked_add(&h).expect("same n_vars");
            }
        }
        out
    }

    /// Random matrix homogeneous in total parity (0 = even, 1 = odd).
    pub fn parity_homogeneous_mat(
        &mut self,
        shape: GradedShape,
        n_vars: usize,
        parity: u8,
        max_poly_degree: u32,
    ) -> MatForm {
        let mut m = MatForm::zero(shape, n_vars);
        for i in 0..shape.dim() {
            for j in 0..shape.dim() {
                let bp = shape.block_parity(i, j);
                let mut entry = Form::zero(n_vars);
                for degree in 0..=n_vars {
                    if (degree % 2) as u8 != (parity + bp) % 2 {
                        continue;
                    }
                    if self.rng.gen_bool(0.4) {
                        let h = self.homogeneous_form(n_vars, degree, max_poly_degree);
                        entry = entry.checked_add(&h).expect("same n_vars");
                    }
                }
                *m.entry_mut(i, j) = entry;
            }
        }
        m
    }

    /// Random odd A'. When `with_zero_form` is set, off-block entries may
    /// carry constant 0-form parts (so the curvature need not be nilpotent).
    pub fn odd_a_prime(
        &mut self,
        shape: GradedShape,
        n_vars: usize,
        max_poly_degree: u32,
        with_zero_form: bool,
    ) -> Superconnection {
        let mut m = MatForm::zero(shape, n_vars);
        for i in 0..shape.dim() {
            for j in 0..shape.dim() {
                let bp = shape.block_parity(i, j);
                let mut entry = Form::zero(n_vars);
                for degree in 0..=n_vars {
                    if (degree + bp as usize) % 2 != 1 {
                        continue;
                    }
                    if degree == 0 && !with_zero_form {
                        continue;
                    }
                    if !self.rng.gen_bool(0.5) {
                        continue;
                    }
                    let h = if degree == 0 {
                        // constant 0-form part
                        Form::constant(n_vars, self.nonzero_rational())
                    } else {
                        self.homogeneous_form(n_vars, degree, max_poly_degree)
                    };
                    entry = entry.checked_add(&h).expect("same n_vars");
                }
                *m.entry_mut(i, j) = entry;
            }
        }
        Superconnection::new(m).expect("odd by construction")
    }

    pub fn shape(&mut self, max_p: usize, max_q: usize) -> GradedShape {
        loop {
            let p = self.rng.gen_range(0..=max_p);
            let q = self.rng.gen_range(0..=max_q);
            if p + q >= 1 {
                return GradedShape::new(p, q).expect("p+q >= 1");
            }
        }
    }

    pub fn point(&mut self, n_vars: usize) -> Vec<f64> {
        (0..n_vars).map(|_| self.rng.gen_range(-1.0..1.0)).collect()
    }

    pub fn usize_in(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }
}
