//! Randomized exact checks of the matrix kernel on nilpotent inputs.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hopf::CheckResult;
use crate::rational::Rational;
use crate::sparse::{analytic_apply, kron, AnalyticFn, SparseMatrix};

/// Random nilpotent matrix: strictly upper triangular with small rational
/// entries, conjugated by a random basis permutation.
pub fn random_nilpotent<R: Rng>(rng: &mut R, dim: usize, density: f64) -> SparseMatrix {
    let mut trips = Vec::new();
    for i in 1..=dim {
        for j in i + 1..=dim {
            if rng.gen_bool(density) {
                trips.push((i, j, random_rational(rng)));
            }
        }
    }
    let m = SparseMatrix::from_triplets(dim, trips).expect("indices in range");
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    m.permute_basis(&perm)
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(-5i64..=5);
    let den = rng.gen_range(1i64..=4);
    Rational::new(num, den)
}

fn exp(m: &SparseMatrix) -> SparseMatrix {
    analytic_apply(&AnalyticFn::Exp, m).expect("nilpotent input")
}

/// `(A⊗B)(C⊗D) = AC ⊗ BD`.
pub fn mixed_product_residual<R: Rng>(rng: &mut R) -> usize {
    let (d1, d2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
    let a = random_nilpotent(rng, d1, 0.6).add(&SparseMatrix::scalar(d1, random_rational(rng)));
    let c = random_nilpotent(rng, d1, 0.6).add(&SparseMatrix::scalar(d1, random_rational(rng)));
    let b = random_nilpotent(rng, d2, 0.6).add(&SparseMatrix::scalar(d2, random_rational(rng)));
    let d = random_nilpotent(rng, d2, 0.6).add(&SparseMatrix::scalar(d2, random_rational(rng)));
    kron(&a, &b)
        .mul(&kron(&c, &d))
        .diff_nnz(&kron(&a.mul(&c), &b.mul(&d)))
}

/// `ln(1 + (e^N - 1)) = N`.
pub fn exp_log_residual<R: Rng>(rng: &mut R) -> usize {
    let dim = rng.gen_range(1..=6);
    let n = random_nilpotent(rng, dim, 0.5);
    let back = analytic_apply(
        &AnalyticFn::Log1p,
        &exp(&n).sub(&SparseMatrix::identity(dim)),
    )
    .expect("nilpotent input");
    back.diff_nnz(&n)
}

/// `(1+N)^q (1+N)^{-q} = 1`.
pub fn pow1p_inverse_residual<R: Rng>(rng: &mut R) -> usize {
    let dim = rng.gen_range(1..=6);
    let n = random_nilpotent(rng, dim, 0.5);
    let q = random_rational(rng);
    let up = analytic_apply(&AnalyticFn::Pow1p(q.clone()), &n).expect("nilpotent input");
    let down = analytic_apply(&AnalyticFn::Pow1p(-q), &n).expect("nilpotent input");
    up.mul(&down).diff_nnz(&SparseMatrix::identity(dim))
}

/// `e^{A+B} = e^A e^B` for commuting nilpotents `A` and `B = c₁A + c₂A²`.
pub fn exp_additivity_residual<R: Rng>(rng: &mut R) -> usize {
    let dim = rng.gen_range(1..=6);
    let a = random_nilpotent(rng, dim, 0.5);
    let b = a
        .scale(&random_rational(rng))
        .add(&a.mul(&a).scale(&random_rational(rng)));
    exp(&a.add(&b)).diff_nnz(&exp(&a).mul(&exp(&b)))
}

/// Runs each law on `cases` random inputs drawn from a seeded generator.
pub fn core_property_checks(cases: usize, seed: u64) -> Vec<CheckResult> {
    type Law = fn(&mut ChaCha8Rng) -> usize;
    let laws: [(&str, Law); 4] = [
        ("mixed-product", mixed_product_residual),
        ("exp-log", exp_log_residual),
        ("pow1p-inverse", pow1p_inverse_residual),
        ("exp-additivity", exp_additivity_residual),
    ];
    laws.iter()
        .enumerate()
        .map(|(k, (name, law))| {
            let started = Instant::now();
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let mut residual = 0;
            let mut failing = 0;
            for _ in 0..cases {
                let r = law(&mut rng);
                residual += r;
                failing += usize::from(r > 0);
            }
            CheckResult::from_residual(format!("core[{name},cases={cases}]"), 0, residual, started)
                .with_note(format!("{failing} of {cases} cases failed"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::nilpotency_index;

    #[test]
    fn generator_is_nilpotent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let m = random_nilpotent(&mut rng, 5, 0.7);
            assert!(nilpotency_index(&m).unwrap() <= 5);
        }
    }

    #[test]
    fn laws_hold() {
        for c in core_property_checks(100, 1) {
            assert!(c.passed, "{c}");
        }
    }

    #[test]
    fn broken_law_is_detected() {
        // exp is not additive on a non-commuting pair
        let a = SparseMatrix::unit(3, 1, 2).unwrap();
        let b = SparseMatrix::unit(3, 2, 3).unwrap();
        assert!(exp(&a.add(&b)).diff_nnz(&exp(&a).mul(&exp(&b))) > 0);
    }
}
