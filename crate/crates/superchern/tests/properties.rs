//! Property tests for the algebraic identities the crate is built on.
//! Structured inputs are drawn through the seeded `Sampler`, with proptest
//! driving the seeds.

use num::One;
use proptest::prelude::*;

use superchern::exterior_forms::Form;
use superchern::graded_matrix_forms::{GradedShape, MatForm};
use superchern::sampling::Sampler;
use superchern::scalar_poly::Rational;
use superchern::superconnection::{
    chern_character_exact, exp_neg_exact, nilpotency_index, Superconnection,
};
use superchern::superpath_pullback::{t_star, t_star_soul, theta_mul};
use superchern::transport::{raw_residual, reduce_to_system, solve_exact};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partials_commute(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = s.usize_in(1, 4);
        let p = s.poly(n, 4);
        let i = s.usize_in(0, n - 1);
        let j = s.usize_in(0, n - 1);
        let ij = p.partial(i).unwrap().partial(j).unwrap();
        let ji = p.partial(j).unwrap().partial(i).unwrap();
        prop_assert_eq!(ij, ji);
    }

    #[test]
    fn partial_product_rule(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = s.usize_in(1, 3);
        let a = s.poly(n, 3);
        let b = s.poly(n, 3);
        let i = s.usize_in(0, n - 1);
        let lhs = a.checked_mul(&b).unwrap().partial(i).unwrap();
        let rhs = a
            .partial(i)
            .unwrap()
            .checked_mul(&b)
            .unwrap()
            .checked_add(&a.checked_mul(&b.partial(i).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn eval_is_ring_morphism(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = s.usize_in(1, 3);
        let a = s.poly(n, 3);
        let b = s.poly(n, 3);
        let point = s.point(n);
        let prod = a.checked_mul(&b).unwrap().eval(&point).unwrap();
        let split = a.eval(&point).unwrap() * b.eval(&point).unwrap();
        let scale = prod.abs().max(split.abs()).max(1.0);
        prop_assert!((prod - split).abs() / scale < 1e-12);
    }

    #[test]
    fn d_squared_zero_on_forms(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = s.usize_in(1, 4);
        let f = s.form(n, 3);
        prop_assert!(f.d().d().is_zero());
    }

    #[test]
    fn graded_leibniz_for_d(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = s.usize_in(1, 4);
        let da = s.usize_in(0, n);
        let db = s.usize_in(0, n);
        let a = s.homogeneous_form(n, da, 3);
        let b = s.homogeneous_form(n, db, 3);
        let lhs = a.wedge(&b).unwrap().d();
        let mut rhs = a.d().wedge(&b).unwrap();
        let second = a.wedge(&b.d()).unwrap();
        rhs = if da % 2 == 0 {
            rhs.checked_add(&second).unwrap()
        } else {
            rhs.checked_sub(&second).unwrap()
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_commutativity(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = s.usize_in(1, 4);
        let da = s.usize_in(0, n);
        let db = s.usize_in(0, n);
        let a = s.homogeneous_form(n, da, 2);
        let b = s.homogeneous_form(n, db, 2);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let expected = if (da * db) % 2 == 0 { ba } else { ba.neg() };
        prop_assert_eq!(ab, expected);
    }

    #[test]
    fn t_star_multiplicative(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = s.usize_in(1, 4);
        let da = s.usize_in(0, n);
        let db = s.usize_in(0, n);
        let a = s.homogeneous_form(n, da, 2);
        let b = s.homogeneous_form(n, db, 2);
        let lhs = t_star(&a.wedge(&b).unwrap());
        let rhs = theta_mul(&t_star(&a), &t_star(&b)).unwrap();
        prop_assert_eq!(lhs.body, rhs.body);
        prop_assert_eq!(lhs.soul, rhs.soul);
    }

    #[test]
    fn soul_extraction_nilpotent(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let n = s.usize_in(1, 4);
        let a = s.form(n, 3);
        prop_assert!(t_star_soul(&t_star_soul(&a)).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mat_mul_associative(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let shape = s.shape(2, 2);
        let n = s.usize_in(1, 3);
        let a = s.parity_homogeneous_mat(shape, n, 0, 2);
        let b = s.parity_homogeneous_mat(shape, n, 1, 2);
        let c = s.parity_homogeneous_mat(shape, n, 0, 2);
        let left = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
        let right = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn supertrace_kills_supercommutators(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let shape = s.shape(2, 2);
        let n = s.usize_in(1, 3);
        // Equal parity only: see the mixed-parity counterexample in the
        // graded_matrix_forms unit tests.
        let parity = s.usize_in(0, 1) as u8;
        let a = s.parity_homogeneous_mat(shape, n, parity, 2);
        let b = s.parity_homogeneous_mat(shape, n, parity, 2);
        let comm = a.supercommutator(&b).unwrap();
        prop_assert!(comm.supertrace().is_zero());
    }

    #[test]
    fn supertrace_commutes_with_d(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let shape = s.shape(2, 2);
        let n = s.usize_in(1, 3);
        let parity = s.usize_in(0, 1) as u8;
        let a = s.parity_homogeneous_mat(shape, n, parity, 2);
        prop_assert_eq!(a.d().supertrace(), a.supertrace().d());
    }

    #[test]
    fn matrix_graded_leibniz(seed in any::<u64>()) {
        // Both factors homogeneous in form degree.
        let mut s = Sampler::new(seed);
        let shape = s.shape(2, 2);
        let n = s.usize_in(1, 3);
        let ka = s.usize_in(0, n);
        let kb = s.usize_in(0, n);
        let mut a = MatForm::zero(shape, n);
        let mut b = MatForm::zero(shape, n);
        for i in 0..shape.dim() {
            for j in 0..shape.dim() {
                *a.entry_mut(i, j) = s.homogeneous_form(n, ka, 2);
                *b.entry_mut(i, j) = s.homogeneous_form(n, kb, 2);
            }
        }
        let lhs = a.checked_mul(&b).unwrap().d();
        let second = a.checked_mul(&b.d()).unwrap();
        let mut rhs = a.d().checked_mul(&b).unwrap();
        rhs = if ka % 2 == 0 {
            rhs.checked_add(&second).unwrap()
        } else {
            rhs.checked_sub(&second).unwrap()
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parity_decompose_partitions(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let shape = s.shape(2, 2);
        let n = s.usize_in(1, 3);
        let even = s.parity_homogeneous_mat(shape, n, 0, 2);
        let odd = s.parity_homogeneous_mat(shape, n, 1, 2);
        let mixed = even.checked_add(&odd).unwrap();
        let (e, o) = mixed.parity_decompose();
        prop_assert_eq!(e.checked_add(&o).unwrap(), mixed);
        prop_assert_eq!(e, even);
        prop_assert_eq!(o, odd);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn curvature_is_even_and_bianchi_holds(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let shape = s.shape(2, 1);
        let n = s.usize_in(1, 3);
        let sc = s.odd_a_prime(shape, n, 2, false);
        let (_, odd) = sc.curvature().parity_decompose();
        prop_assert!(odd.is_zero());
        prop_assert!(sc.bianchi_residual().is_zero());
    }

    #[test]
    fn transport_matches_exponential_exactly(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let shape = s.shape(2, 2);
        let n = s.usize_in(1, 4);
        let sc = s.odd_a_prime(shape, n, 2, false);
        prop_assert!(nilpotency_index(&sc.curvature()).is_ok());
        let sys = reduce_to_system(&sc);
        let (psi0, psi1) = solve_exact(&sys, &Rational::one()).unwrap();
        prop_assert_eq!(psi0.clone(), exp_neg_exact(&sc.curvature(), 64).unwrap());
        prop_assert_eq!(
            psi0.supertrace(),
            chern_character_exact(&sc, 64).unwrap()
        );
        // Residuals of the unreduced theta-expansion.
        let dpsi0 = sys.generator().checked_mul(&psi0).unwrap().neg();
        let (r0, r1) = raw_residual(&sc, &psi0, &psi1, &dpsi0).unwrap();
        prop_assert!(r0.is_zero());
        prop_assert!(r1.is_zero());
    }

    #[test]
    fn chern_character_is_closed_and_even_degree(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let shape = s.shape(2, 2);
        let n = s.usize_in(1, 4);
        let sc = s.odd_a_prime(shape, n, 2, false);
        let ch = chern_character_exact(&sc, 64).unwrap();
        prop_assert!(ch.d().is_zero());
        prop_assert!(ch.has_pure_degree_parity(0));
    }

    #[test]
    fn gauge_invariance_under_constant_even_conjugation(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let shape = s.shape(2, 2);
        let n = s.usize_in(1, 3);
        let sc = s.odd_a_prime(shape, n, 2, false);
        let (g, g_inv) = random_invertible_block_diagonal(&mut s, shape, n);
        let conj = g
            .checked_mul(sc.a_prime())
            .unwrap()
            .checked_mul(&g_inv)
            .unwrap();
        let conj_sc = Superconnection::new(conj).unwrap();
        prop_assert_eq!(
            chern_character_exact(&conj_sc, 64).unwrap(),
            chern_character_exact(&sc, 64).unwrap()
        );
    }

    #[test]
    fn exact_flow_semigroup(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let shape = s.shape(2, 1);
        let n = s.usize_in(1, 3);
        let sc = s.odd_a_prime(shape, n, 2, false);
        let sys = reduce_to_system(&sc);
        let t1 = s.rational();
        let t2 = s.rational();
        let (whole, _) = solve_exact(&sys, &(&t1 + &t2)).unwrap();
        let (a, _) = solve_exact(&sys, &t1).unwrap();
        let (b, _) = solve_exact(&sys, &t2).unwrap();
        prop_assert_eq!(whole, a.checked_mul(&b).unwrap());
    }
}

/// A constant, even (block-diagonal), exactly invertible gauge, with its
/// inverse computed by rational Gauss-Jordan elimination.
fn random_invertible_block_diagonal(
    s: &mut Sampler,
    shape: GradedShape,
    n_vars: usize,
) -> (MatForm, MatForm) {
    let dim = shape.dim();
    loop {
        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::from_integer(0.into()); dim]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if shape.block_parity(i, j) == 0 {
                    *cell = if i == j {
                        s.nonzero_rational()
                    } else {
                        s.rational()
                    };
                }
            }
        }
        if let Some(inv) = invert(&rows) {
            let to_mat = |m: &Vec<Vec<Rational>>| {
                let mut out = MatForm::zero(shape, n_vars);
                for i in 0..dim {
                    for j in 0..dim {
                        *out.entry_mut(i, j) = Form::constant(n_vars, m[i][j].clone());
                    }
                }
                out
            };
            return (to_mat(&rows), to_mat(&inv));
        }
    }
}

fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    use num::Zero;
    let dim = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut inv: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = a[col][col].clone();
        for j in 0..dim {
            a[col][j] /= scale.clone();
            inv[col][j] /= scale.clone();
        }
        for r in 0..dim {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..dim {
                let av = a[col][j].clone();
                let iv = inv[col][j].clone();
                a[r][j] -= factor.clone() * av;
                inv[r][j] -= factor.clone() * iv;
            }
        }
    }
    Some(inv)
}
