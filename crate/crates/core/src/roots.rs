//! Root data of gl(N)/sl(N) in the standard e-basis, Cartan elements, and
//! chain plans for nested blocks sl(N) ⊃ sl(N-2) ⊃ …

use std::fmt;

use serde::Serialize;

use crate::error::{Result, TwistError};
use crate::expr::Expr;
use crate::rational::Rational;

/// The root `e_i - e_j`, carried by the generator `E_ij`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Root {
    pub i: usize,
    pub j: usize,
}

impl Root {
    pub fn new(n: usize, i: usize, j: usize) -> Result<Root> {
        if i == j || i == 0 || j == 0 || i > n || j > n {
            return Err(TwistError::IndexOutOfRange(format!(
                "root e{i}-e{j} in sl({n})"
            )));
        }
        Ok(Root { i, j })
    }

    pub fn generator(&self) -> Expr {
        Expr::gen(self.i, self.j)
    }

    /// Coordinates in the e-basis of R^n.
    pub fn coords(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        v[self.i - 1] += 1;
        v[self.j - 1] -= 1;
        v
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}-e{}", self.i, self.j)
    }
}

/// `H_{i,k} = ½(E_ii - E_kk)`.
pub fn cartan_element(n: usize, i: usize, k: usize) -> Result<Expr> {
    Root::new(n, i, k)?;
    let half = Rational::new(1, 2);
    Ok(Expr::sum([
        Expr::scaled(half.clone(), Expr::gen(i, i)),
        Expr::scaled(-half, Expr::gen(k, k)),
    ]))
}

/// Embedding of the four-dimensional carrier `[H,E]=E, [H,A]=αA, [H,B]=βB,
/// [A,B]=E` into gl(N): `H = αE_11 - βE_NN`, `A = E_1r`, `B = E_rN`,
/// `E = E_1N`, with `β = 1 - α`.
#[derive(Clone, Debug)]
pub struct CarrierEmbedding {
    pub n: usize,
    pub r: usize,
    pub alpha: Rational,
    pub beta: Rational,
    pub h: Expr,
    pub a: Expr,
    pub b: Expr,
    pub e: Expr,
}

impl CarrierEmbedding {
    pub fn new(n: usize, r: usize, alpha: Rational) -> Result<Self> {
        if n < 3 || r <= 1 || r >= n {
            return Err(TwistError::IndexOutOfRange(format!(
                "carrier needs 1 < r < N, got N={n}, r={r}"
            )));
        }
        let beta = &Rational::ONE - &alpha;
        let h = Expr::sum([
            Expr::scaled(alpha.clone(), Expr::gen(1, 1)),
            Expr::scaled(-beta.clone(), Expr::gen(n, n)),
        ]);
        Ok(CarrierEmbedding {
            n,
            r,
            alpha,
            beta,
            h,
            a: Expr::gen(1, r),
            b: Expr::gen(r, n),
            e: Expr::gen(1, n),
        })
    }
}

/// One step of a chain: a Jordanian factor on `initial_root` and extensions
/// indexed by the constituent pairs `pi_prime[m] + pi_doubleprime[m] = initial_root`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub initial_root: Root,
    pub pi_prime: Vec<Root>,
    pub pi_doubleprime: Vec<Root>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainPlan {
    pub n: usize,
    pub steps: Vec<ChainStep>,
    /// No further step fits.
    pub maximal: bool,
}

/// Constituent pairs of `e_a - e_b` inside the block spanned by `block`:
/// `(e_a - e_s, e_s - e_b)` for every other `s` in the block, ascending.
pub fn constituent_roots_in_block(
    n: usize,
    block: &[usize],
    a: usize,
    b: usize,
) -> Result<(Vec<Root>, Vec<Root>)> {
    Root::new(n, a, b)?;
    let mut prime = Vec::new();
    let mut doubleprime = Vec::new();
    let mut sorted = block.to_vec();
    sorted.sort_unstable();
    for s in sorted {
        if s == a || s == b {
            continue;
        }
        prime.push(Root::new(n, a, s)?);
        doubleprime.push(Root::new(n, s, b)?);
    }
    Ok((prime, doubleprime))
}

/// Constituent roots for step `k` (0-based) of the nested chain in sl(N):
/// initial root `e_{k+1} - e_{N-k}` inside the block `k+1 ..= N-k`.
pub fn constituent_roots(n: usize, k: usize) -> Result<(Vec<Root>, Vec<Root>)> {
    if n < 2 * k + 2 {
        return Err(TwistError::InvalidArgument(format!(
            "step k={k} needs N - 2k >= 2, got N={n}"
        )));
    }
    let block: Vec<usize> = (k + 1..=n - k).collect();
    constituent_roots_in_block(n, &block, k + 1, n - k)
}

/// Plan for the chain of steps `0..=p` in sl(N).
pub fn chain_plan(n: usize, p: usize) -> Result<ChainPlan> {
    if n < 2 || n < 2 * p + 2 {
        return Err(TwistError::InvalidArgument(format!(
            "chain of length p={p} needs N - 2p >= 2, got N={n}"
        )));
    }
    let steps = (0..=p)
        .map(|k| {
            let (pi_prime, pi_doubleprime) = constituent_roots(n, k)?;
            Ok(ChainStep {
                initial_root: Root::new(n, k + 1, n - k)?,
                pi_prime,
                pi_doubleprime,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainPlan {
        n,
        steps,
        maximal: n < 2 * (p + 1) + 2,
    })
}

/// The largest admissible `p` for sl(N).
pub fn max_chain_length(n: usize) -> usize {
    (n - 2) / 2
}

/// Plan of the alternative two-step chain that starts from `e_2 - e_{N-1}`
/// with its full constituent set in sl(N), followed by `e_1 - e_N` inside
/// the block that excludes the indices 2 and N-1.
pub fn alternative_chain_plan(n: usize) -> Result<ChainPlan> {
    if n < 4 {
        return Err(TwistError::InvalidArgument(format!(
            "alternative chain needs N >= 4, got {n}"
        )));
    }
    let all: Vec<usize> = (1..=n).collect();
    let (p1, d1) = constituent_roots_in_block(n, &all, 2, n - 1)?;
    let inner: Vec<usize> = (1..=n).filter(|&s| s != 2 && s != n - 1).collect();
    let (p0, d0) = constituent_roots_in_block(n, &inner, 1, n)?;
    Ok(ChainPlan {
        n,
        steps: vec![
            ChainStep {
                initial_root: Root::new(n, 2, n - 1)?,
                pi_prime: p1,
                pi_doubleprime: d1,
            },
            ChainStep {
                initial_root: Root::new(n, 1, n)?,
                pi_prime: p0,
                pi_doubleprime: d0,
            },
        ],
        maximal: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{eval_expr, Morphism};
    use crate::sparse::SparseMatrix;

    fn r(i: usize, j: usize) -> Root {
        Root { i, j }
    }

    /// Every root of the sub-block, every pair summing to `λ0`, filtered by
    /// the closure condition `λ + λ0 ∉ Λ`.
    fn brute_force_constituents(n: usize, k: usize) -> (Vec<Root>, Vec<Root>) {
        let block: Vec<usize> = (k + 1..=n - k).collect();
        let roots: Vec<Root> = block
            .iter()
            .flat_map(|&i| {
                block
                    .iter()
                    .filter(move |&&j| j != i)
                    .map(move |&j| r(i, j))
            })
            .collect();
        let is_root = |v: &[i64]| roots.iter().any(|x| x.coords(n) == v);
        let lambda0 = r(k + 1, n - k).coords(n);
        let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        let mut prime = Vec::new();
        let mut doubleprime = Vec::new();
        for x in &roots {
            for y in &roots {
                let (cx, cy) = (x.coords(n), y.coords(n));
                if add(&cx, &cy) != lambda0 {
                    continue;
                }
                if is_root(&add(&cx, &lambda0)) || is_root(&add(&cy, &lambda0)) {
                    continue;
                }
                // λ' is the member sharing the positive index of λ0
                if x.i == k + 1 {
                    prime.push(*x);
                    doubleprime.push(*y);
                }
            }
        }
        (prime, doubleprime)
    }

    #[test]
    fn constituent_examples() {
        let (p, d) = constituent_roots(6, 0).unwrap();
        assert_eq!(p, vec![r(1, 2), r(1, 3), r(1, 4), r(1, 5)]);
        assert_eq!(d, vec![r(2, 6), r(3, 6), r(4, 6), r(5, 6)]);
        assert_eq!(constituent_roots(4, 1).unwrap(), (vec![], vec![]));
        let (p, _) = constituent_roots(7, 1).unwrap();
        assert_eq!(p, vec![r(2, 3), r(2, 4), r(2, 5)]);
        assert!(constituent_roots(5, 2).is_err());
    }

    #[test]
    fn constituents_match_brute_force() {
        for n in 2..=9 {
            for k in 0..=(n - 2) / 2 {
                assert_eq!(
                    constituent_roots(n, k).unwrap(),
                    brute_force_constituents(n, k),
                    "N={n}, k={k}"
                );
            }
        }
    }

    #[test]
    fn constituent_pairs_sum_to_initial_root() {
        for n in 2..=10 {
            let plan = chain_plan(n, max_chain_length(n)).unwrap();
            assert!(plan.maximal);
            for step in &plan.steps {
                let l0 = step.initial_root.coords(n);
                for (a, b) in step.pi_prime.iter().zip(&step.pi_doubleprime) {
                    let s: Vec<i64> = a
                        .coords(n)
                        .iter()
                        .zip(b.coords(n))
                        .map(|(x, y)| x + y)
                        .collect();
                    assert_eq!(s, l0);
                }
            }
        }
    }

    #[test]
    fn chain_plan_examples() {
        let plan = chain_plan(6, 1).unwrap();
        let initials: Vec<Root> = plan.steps.iter().map(|s| s.initial_root).collect();
        assert_eq!(initials, vec![r(1, 6), r(2, 5)]);
        assert!(!plan.maximal);
        let plan = chain_plan(4, 1).unwrap();
        assert!(plan.steps[1].pi_prime.is_empty());
        assert!(plan.maximal);
        assert!(chain_plan(5, 2).is_err());
        // a three-index block still carries one extension
        assert_eq!(chain_plan(3, 0).unwrap().steps[0].pi_prime, vec![r(1, 2)]);
    }

    #[test]
    fn alternative_plan_uses_full_constituent_set() {
        let plan = alternative_chain_plan(6).unwrap();
        assert_eq!(plan.steps[0].initial_root, r(2, 5));
        assert_eq!(
            plan.steps[0].pi_prime,
            vec![r(2, 1), r(2, 3), r(2, 4), r(2, 6)]
        );
        assert_eq!(plan.steps[1].pi_prime, vec![r(1, 3), r(1, 4)]);
    }

    #[test]
    fn cartan_examples() {
        let f2 = Morphism::fundamental(2).unwrap();
        let h = eval_expr(&cartan_element(2, 1, 2).unwrap(), &f2).unwrap();
        assert_eq!(
            h,
            SparseMatrix::diagonal(&[Rational::new(1, 2), Rational::new(-1, 2)])
        );
        let f6 = Morphism::fundamental(6).unwrap();
        let h = eval_expr(&cartan_element(6, 1, 6).unwrap(), &f6).unwrap();
        assert_eq!(h.get(1, 1), Rational::new(1, 2));
        assert_eq!(h.get(6, 6), Rational::new(-1, 2));
        assert_eq!(h.nnz(), 2);
        assert!(cartan_element(3, 2, 2).is_err());
        assert!(cartan_element(3, 1, 4).is_err());
    }

    #[test]
    fn carrier_relations_hold_for_rational_alpha() {
        for n in [3, 4, 6] {
            let f = Morphism::fundamental(n).unwrap();
            for r in 2..n {
                for alpha in [
                    Rational::ZERO,
                    Rational::new(1, 3),
                    Rational::new(1, 2),
                    Rational::new(2, 5),
                    Rational::new(-7, 3),
                ] {
                    let c = CarrierEmbedding::new(n, r, alpha.clone()).unwrap();
                    let ev = |x: &Expr| eval_expr(x, &f).unwrap();
                    let (h, a, b, e) = (ev(&c.h), ev(&c.a), ev(&c.b), ev(&c.e));
                    assert_eq!(h.commutator(&e), e);
                    assert_eq!(h.commutator(&a), a.scale(&c.alpha));
                    assert_eq!(h.commutator(&b), b.scale(&c.beta));
                    assert_eq!(a.commutator(&b), e);
                    assert!(e.commutator(&a).is_zero());
                    assert!(e.commutator(&b).is_zero());
                }
            }
        }
    }
}
