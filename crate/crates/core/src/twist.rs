//! Twisting elements kept symbolic as `exp(Σ u_a ⊗ w_a)` and materialized on
//! demand into exact unipotent matrices.

use std::fmt;

use serde::Serialize;

use crate::error::{Result, TwistError};
use crate::expr::{counit_eval, eval_expr, Expr, Morphism};
use crate::rational::Rational;
use crate::roots::{
    alternative_chain_plan, cartan_element, chain_plan, CarrierEmbedding, ChainPlan,
};
use crate::sparse::{analytic_apply, kron, AnalyticFn, SparseMatrix};

/// `exp(Σ left_a ⊗ right_a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistFactor {
    pub name: String,
    pub n: usize,
    pub terms: Vec<(Expr, Expr)>,
}

/// Factors in application order: `factors[0]` acts first, so the product is
/// `factors[last] · … · factors[0]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwistSequence {
    pub n: usize,
    pub factors: Vec<TwistFactor>,
}

/// Which of the two externally dragged factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ExternalKind {
    E0Tilde,
    E1Tilde,
}

impl fmt::Display for ExternalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExternalKind::E0Tilde => write!(f, "~E0"),
            ExternalKind::E1Tilde => write!(f, "~E1"),
        }
    }
}

impl TwistFactor {
    pub fn new(name: impl Into<String>, n: usize, terms: Vec<(Expr, Expr)>) -> Self {
        TwistFactor {
            name: name.into(),
            n,
            terms,
        }
    }

    /// `Σ left(u_a) ⊗ right(w_a)`.
    pub fn argument(&self, left: &Morphism, right: &Morphism) -> Result<SparseMatrix> {
        let mut acc = SparseMatrix::zero(left.dim() * right.dim());
        for (u, w) in &self.terms {
            acc = acc.add(&kron(&eval_expr(u, left)?, &eval_expr(w, right)?));
        }
        Ok(acc)
    }

    pub fn materialize(&self, left: &Morphism, right: &Morphism) -> Result<SparseMatrix> {
        analytic_apply(&AnalyticFn::Exp, &self.argument(left, right)?)
    }

    /// `exp(-T)`.
    pub fn materialize_inverse(&self, left: &Morphism, right: &Morphism) -> Result<SparseMatrix> {
        analytic_apply(&AnalyticFn::Exp, &self.argument(left, right)?.neg())
    }

    /// Both the factor and its inverse from one evaluation of the argument.
    pub fn materialize_pair(
        &self,
        left: &Morphism,
        right: &Morphism,
    ) -> Result<(SparseMatrix, SparseMatrix)> {
        let arg = self.argument(left, right)?;
        Ok((
            analytic_apply(&AnalyticFn::Exp, &arg)?,
            analytic_apply(&AnalyticFn::Exp, &arg.neg())?,
        ))
    }

    /// `(ε ⊗ id)F` under `phi`: `exp(Σ ε(u_a)·phi(w_a))`.
    pub fn counit_left(&self, phi: &Morphism) -> Result<SparseMatrix> {
        let mut arg = SparseMatrix::zero(phi.dim());
        for (u, w) in &self.terms {
            let c = counit_eval(u)?;
            if !c.is_zero() {
                arg = arg.add_scaled(&c, &eval_expr(w, phi)?);
            }
        }
        analytic_apply(&AnalyticFn::Exp, &arg)
    }

    /// `(id ⊗ ε)F` under `phi`.
    pub fn counit_right(&self, phi: &Morphism) -> Result<SparseMatrix> {
        let mut arg = SparseMatrix::zero(phi.dim());
        for (u, w) in &self.terms {
            let c = counit_eval(w)?;
            if !c.is_zero() {
                arg = arg.add_scaled(&c, &eval_expr(u, phi)?);
            }
        }
        analytic_apply(&AnalyticFn::Exp, &arg)
    }

    /// Applies a generator renumbering to both legs.
    pub fn relabel(&self, name: impl Into<String>, map: &[usize]) -> TwistFactor {
        TwistFactor {
            name: name.into(),
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(u, w)| (u.relabel(map), w.relabel(map)))
                .collect(),
        }
    }
}

impl fmt::Display for TwistFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = exp(", self.name)?;
        for (k, (u, w)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{u} ⊗ {w}")?;
        }
        write!(f, ")")
    }
}

impl TwistSequence {
    pub fn empty(n: usize) -> Self {
        TwistSequence {
            n,
            factors: Vec::new(),
        }
    }

    pub fn new(n: usize, factors: Vec<TwistFactor>) -> Result<Self> {
        if let Some(f) = factors.iter().find(|f| f.n != n) {
            return Err(TwistError::InvalidArgument(format!(
                "factor {} is for N={}, sequence for N={n}",
                f.name, f.n
            )));
        }
        Ok(TwistSequence { n, factors })
    }

    pub fn single(f: TwistFactor) -> Self {
        TwistSequence {
            n: f.n,
            factors: vec![f],
        }
    }

    /// `other` applied after `self`.
    pub fn then(mut self, other: impl Into<TwistSequence>) -> Result<Self> {
        let other = other.into();
        if !self.factors.is_empty() && !other.factors.is_empty() && self.n != other.n {
            return Err(TwistError::InvalidArgument("mixed N in sequence".into()));
        }
        if self.factors.is_empty() {
            self.n = other.n;
        }
        self.factors.extend(other.factors);
        Ok(self)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.factors.iter().map(|f| f.name.as_str()).collect()
    }

    /// `F = F_last · … · F_first`.
    pub fn materialize(&self, left: &Morphism, right: &Morphism) -> Result<SparseMatrix> {
        Ok(self.materialize_pair(left, right)?.0)
    }

    /// `(F, F⁻¹)`, the inverse built factor-wise from `exp(-T)`.
    pub fn materialize_pair(
        &self,
        left: &Morphism,
        right: &Morphism,
    ) -> Result<(SparseMatrix, SparseMatrix)> {
        let dim = left.dim() * right.dim();
        let mut f = SparseMatrix::identity(dim);
        let mut inv = SparseMatrix::identity(dim);
        for factor in &self.factors {
            let (m, m_inv) = factor.materialize_pair(left, right)?;
            f = m.mul(&f);
            inv = inv.mul(&m_inv);
        }
        Ok((f, inv))
    }
}

impl From<TwistFactor> for TwistSequence {
    fn from(f: TwistFactor) -> Self {
        TwistSequence::single(f)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(TwistError::InvalidArgument(format!(
            "N must be >= 2, got {n}"
        )));
    }
    Ok(())
}

/// `exp(H_{i,j} ⊗ σ_{i,j})` for the root `e_i - e_j`.
pub fn jordanian_on_root(
    n: usize,
    i: usize,
    j: usize,
    name: impl Into<String>,
) -> Result<TwistFactor> {
    let h = cartan_element(n, i, j)?;
    Ok(TwistFactor::new(name, n, vec![(h, Expr::sigma(i, j))]))
}

/// `Φ_{J_{k-1}} = exp(H_{k,N-k+1} ⊗ σ_{k,N-k+1})`, 1-based `k`.
pub fn jordanian_factor(n: usize, k: usize) -> Result<TwistFactor> {
    check_n(n)?;
    if k == 0 || k + k > n {
        return Err(TwistError::IndexOutOfRange(format!(
            "Jordanian factor k={k} needs k < N-k+1 for N={n}"
        )));
    }
    jordanian_on_root(n, k, n - k + 1, format!("J{}", k - 1))
}

/// `exp(E_{i,s} ⊗ E_{s,j} e^{-β σ_{i,j}})`.
pub fn extension_on_roots(
    n: usize,
    i: usize,
    s: usize,
    j: usize,
    beta: &Rational,
    name: impl Into<String>,
) -> Result<TwistFactor> {
    for idx in [i, s, j] {
        if idx == 0 || idx > n {
            return Err(TwistError::IndexOutOfRange(format!(
                "index {idx} for N={n}"
            )));
        }
    }
    if s == i || s == j || i == j {
        return Err(TwistError::IndexOutOfRange(format!(
            "extension needs distinct indices, got ({i}, {s}, {j})"
        )));
    }
    let right = Expr::prod([Expr::gen(s, j), Expr::exp_sigma(-beta.clone(), i, j)]);
    Ok(TwistFactor::new(name, n, vec![(Expr::gen(i, s), right)]))
}

/// `Φ_{E_{k-1}(r)} = exp(E_{k,r} ⊗ E_{r,N-k+1} e^{-β σ_{k,N-k+1}})`, 1-based `k`.
pub fn extension_factor(n: usize, k: usize, r: usize, beta: &Rational) -> Result<TwistFactor> {
    check_n(n)?;
    if k == 0 || !(k < r && r < n + 1 - k) {
        return Err(TwistError::IndexOutOfRange(format!(
            "extension factor needs k < r < N-k+1, got N={n}, k={k}, r={r}"
        )));
    }
    extension_on_roots(n, k, r, n + 1 - k, beta, format!("E{}({r})", k - 1))
}

/// Extended Jordanian twist on the generic carrier: Jordanian factor on
/// `H = αE_11 - βE_NN` followed by `exp(A ⊗ B e^{-βσ})`.
pub fn extended_twist_generic(n: usize, r: usize, alpha: &Rational) -> Result<TwistSequence> {
    let c = CarrierEmbedding::new(n, r, alpha.clone())?;
    let jordan = TwistFactor::new(
        format!("J[alpha={alpha}]"),
        n,
        vec![(c.h.clone(), Expr::sigma(1, n))],
    );
    let ext = extension_on_roots(n, 1, r, n, &c.beta, format!("E[alpha={alpha},r={r}]"))?;
    TwistSequence::new(n, vec![jordan, ext])
}

/// Factors of a chain plan in application order: each step's Jordanian
/// factor followed by its extensions.
pub fn twist_from_plan(plan: &ChainPlan, step_names: &[&str]) -> Result<TwistSequence> {
    let n = plan.n;
    let half = Rational::new(1, 2);
    let mut factors = Vec::new();
    for (step, label) in plan.steps.iter().zip(step_names) {
        let (a, b) = (step.initial_root.i, step.initial_root.j);
        factors.push(jordanian_on_root(n, a, b, format!("J{label}"))?);
        for lp in &step.pi_prime {
            factors.push(extension_on_roots(
                n,
                a,
                lp.j,
                b,
                &half,
                format!("E{label}({})", lp.j),
            )?);
        }
    }
    TwistSequence::new(n, factors)
}

/// The chain `F_{B_p} … F_{B_0}` of nested extended Jordanian twists.
pub fn chain_twist(n: usize, p: usize) -> Result<TwistSequence> {
    let plan = chain_plan(n, p)?;
    let labels: Vec<String> = (0..=p).map(|k| k.to_string()).collect();
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    twist_from_plan(&plan, &labels)
}

/// The alternative chain `Φ'_{E0} Φ_{J0} Φ'_{E1} Φ_{J1}`, which starts from
/// `e_2 - e_{N-1}` with its full constituent set.
pub fn alternative_chain(n: usize) -> Result<TwistSequence> {
    twist_from_plan(&alternative_chain_plan(n)?, &["1'", "0'"])
}

/// The renumbering `1 ⇄ 2`, `N-1 ⇄ N` as a 1-based index map.
pub fn swap_renumbering(n: usize) -> Vec<usize> {
    let mut map: Vec<usize> = (1..=n).collect();
    map.swap(0, 1);
    map.swap(n - 2, n - 1);
    map
}

/// External factors obtained by dragging a Jordanian factor through the two
/// outer extensions of the other step.
pub fn external_factor(n: usize, which: ExternalKind) -> Result<TwistFactor> {
    if n < 6 {
        return Err(TwistError::NotApplicable(format!(
            "external factors exist for N > 5, got N={n}"
        )));
    }
    let half = Rational::new(1, 2);
    let h2 = cartan_element(n, 2, n - 1)?;
    // (E_12 + ½E_{1,N-1} + E_{1,N-1}H_{2,N-1}) ⊗ E_{2N} e^{-(σ_{1N}+σ_{2,N-1})/2}
    let left0 = Expr::sum([
        Expr::gen(1, 2),
        Expr::scaled(half.clone(), Expr::gen(1, n - 1)),
        Expr::prod([Expr::gen(1, n - 1), h2]),
    ]);
    let right0 = Expr::prod([
        Expr::gen(2, n),
        Expr::exp_sigma(-half.clone(), 1, n),
        Expr::exp_sigma(-half.clone(), 2, n - 1),
    ]);
    // E_{1,N-1} ⊗ E_{N-1,N} e^{-(σ_{1N}-σ_{2,N-1})/2}
    let right1 = Expr::prod([
        Expr::gen(n - 1, n),
        Expr::exp_sigma(-half.clone(), 1, n),
        Expr::exp_sigma(half, 2, n - 1),
    ]);
    let e0 = TwistFactor::new(
        "~E0",
        n,
        vec![(left0, right0), (Expr::gen(1, n - 1), right1)],
    );
    Ok(match which {
        ExternalKind::E0Tilde => e0,
        ExternalKind::E1Tilde => e0.relabel("~E1", &swap_renumbering(n)),
    })
}
