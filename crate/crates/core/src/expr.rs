//! Symbolic elements of U(gl(N)) and their images under algebra morphisms.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, TwistError};
use crate::rational::Rational;
use crate::sparse::{analytic_apply, kron, AnalyticFn, SparseMatrix};

/// Expression tree over the generators `E_ij` of gl(N).
///
/// `Func(f, s)` is `f` applied to the element `s` by its power series about
/// zero, so `Func(Log1p, E)` is `σ = ln(1 + E)` and `Func(Pow1p(-β), E)` is
/// `e^{-βσ} = (1 + E)^{-β}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Gen(usize, usize),
    Scalar(Rational),
    Sum(Vec<Expr>),
    /// Ordered, noncommutative.
    Prod(Vec<Expr>),
    Func(AnalyticFn, Box<Expr>),
}

impl Expr {
    pub fn gen(i: usize, j: usize) -> Expr {
        Expr::Gen(i, j)
    }

    pub fn scalar(c: Rational) -> Expr {
        Expr::Scalar(c)
    }

    pub fn one() -> Expr {
        Expr::Scalar(Rational::ONE)
    }

    /// Sum with nested sums flattened.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        let mut out = Vec::new();
        for t in terms {
            match t {
                Expr::Sum(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            return out.pop().unwrap();
        }
        Expr::Sum(out)
    }

    /// Product with nested products flattened; order is kept.
    pub fn prod<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
        let mut out = Vec::new();
        for f in factors {
            match f {
                Expr::Prod(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            return out.pop().unwrap();
        }
        Expr::Prod(out)
    }

    pub fn func(f: AnalyticFn, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    /// `c · e`
    pub fn scaled(c: Rational, e: Expr) -> Expr {
        if c.is_one() {
            return e;
        }
        Expr::prod([Expr::Scalar(c), e])
    }

    /// `σ_ij = ln(1 + E_ij)`
    pub fn sigma(i: usize, j: usize) -> Expr {
        Expr::func(AnalyticFn::Log1p, Expr::gen(i, j))
    }

    /// `e^{c·σ_ij} = (1 + E_ij)^c`
    pub fn exp_sigma(c: Rational, i: usize, j: usize) -> Expr {
        if c.is_zero() {
            return Expr::one();
        }
        Expr::func(AnalyticFn::Pow1p(c), Expr::gen(i, j))
    }

    /// Largest generator index mentioned.
    pub fn max_index(&self) -> usize {
        match self {
            Expr::Gen(i, j) => *i.max(j),
            Expr::Scalar(_) => 0,
            Expr::Sum(ts) | Expr::Prod(ts) => ts.iter().map(Expr::max_index).max().unwrap_or(0),
            Expr::Func(_, s) => s.max_index(),
        }
    }

    /// The antipode of U(gl(N)) as a tree transform: generators change sign,
    /// products reverse, and `f(s) ↦ f(S(s))`.
    pub fn antipode(&self) -> Expr {
        match self {
            Expr::Gen(..) => Expr::prod([Expr::Scalar(-Rational::ONE), self.clone()]),
            Expr::Scalar(_) => self.clone(),
            Expr::Sum(ts) => Expr::Sum(ts.iter().map(Expr::antipode).collect()),
            Expr::Prod(fs) => Expr::Prod(fs.iter().rev().map(Expr::antipode).collect()),
            Expr::Func(f, s) => Expr::Func(f.clone(), Box::new(s.antipode())),
        }
    }

    /// Swaps generator indices by `map` (1-based, `map[i-1]` is the image of `i`).
    pub fn relabel(&self, map: &[usize]) -> Expr {
        match self {
            Expr::Gen(i, j) => Expr::Gen(map[i - 1], map[j - 1]),
            Expr::Scalar(_) => self.clone(),
            Expr::Sum(ts) => Expr::Sum(ts.iter().map(|t| t.relabel(map)).collect()),
            Expr::Prod(fs) => Expr::Prod(fs.iter().map(|t| t.relabel(map)).collect()),
            Expr::Func(f, s) => Expr::Func(f.clone(), Box::new(s.relabel(map))),
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum([self, rhs])
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::prod([self, rhs])
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::scaled(-Rational::ONE, self)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Gen(i, j) => write!(f, "E{i},{j}"),
            Expr::Scalar(c) => write!(f, "{c}"),
            Expr::Sum(ts) => {
                write!(f, "(")?;
                for (k, t) in ts.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Expr::Prod(fs) => {
                for (k, t) in fs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "·")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Expr::Func(AnalyticFn::Log1p, s) => write!(f, "ln(1+{s})"),
            Expr::Func(AnalyticFn::Pow1p(q), s) => write!(f, "(1+{s})^({q})"),
            Expr::Func(AnalyticFn::Exp, s) => write!(f, "exp({s})"),
        }
    }
}

/// A finite sum `Σ left_a ⊗ right_a` in U ⊗ U.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TensorExpr {
    pub terms: Vec<(Expr, Expr)>,
}

impl TensorExpr {
    pub fn new(terms: Vec<(Expr, Expr)>) -> Self {
        TensorExpr { terms }
    }

    /// `x ⊗ 1 + 1 ⊗ x`
    pub fn primitive(x: Expr) -> Self {
        TensorExpr::new(vec![(x.clone(), Expr::one()), (Expr::one(), x)])
    }

    pub fn plus(mut self, other: TensorExpr) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn scaled(self, c: &Rational) -> Self {
        TensorExpr::new(
            self.terms
                .into_iter()
                .map(|(u, w)| (Expr::scaled(c.clone(), u), w))
                .collect(),
        )
    }

    /// `Σ left(u_a) ⊗ right(w_a)`.
    pub fn eval(&self, left: &Morphism, right: &Morphism) -> Result<SparseMatrix> {
        let mut acc = SparseMatrix::zero(left.dim() * right.dim());
        for (u, w) in &self.terms {
            acc = acc.add(&kron(&eval_expr(u, left)?, &eval_expr(w, right)?));
        }
        Ok(acc)
    }
}

impl fmt::Display for TensorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (u, w)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{u} ⊗ {w}")?;
        }
        Ok(())
    }
}

/// Counit: generators go to zero and `f(s) ↦ f(ε(s))`.
///
/// Fails when an analytic function would be evaluated at a non-zero scalar,
/// where its value is generally irrational.
pub fn counit_eval(e: &Expr) -> Result<Rational> {
    Ok(match e {
        Expr::Gen(..) => Rational::ZERO,
        Expr::Scalar(c) => c.clone(),
        Expr::Sum(ts) => {
            let mut acc = Rational::ZERO;
            for t in ts {
                acc += &counit_eval(t)?;
            }
            acc
        }
        Expr::Prod(fs) => {
            let mut acc = Rational::ONE;
            for t in fs {
                acc *= &counit_eval(t)?;
            }
            acc
        }
        Expr::Func(f, s) => {
            let arg = counit_eval(s)?;
            if !arg.is_zero() {
                return Err(TwistError::NonRationalCounit(format!("{f}({arg})")));
            }
            f.at_zero()
        }
    })
}

/// An algebra morphism from U(gl(N)) into `dim × dim` matrices, fixed by the
/// images of the generators.
#[derive(Clone)]
pub struct Morphism {
    n: usize,
    dim: usize,
    label: String,
    images: Arc<Vec<SparseMatrix>>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Morphism({}, N={}, dim={})",
            self.label, self.n, self.dim
        )
    }
}

impl Morphism {
    /// Builds from an image function on 1-based generator indices.
    pub fn from_images<F>(n: usize, dim: usize, label: impl Into<String>, image: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Result<SparseMatrix>,
    {
        let mut images = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                let m = image(i, j)?;
                if m.dim() != dim {
                    return Err(TwistError::DimensionMismatch {
                        left: m.dim(),
                        right: dim,
                    });
                }
                images.push(m);
            }
        }
        Ok(Morphism {
            n,
            dim,
            label: label.into(),
            images: Arc::new(images),
        })
    }

    /// Defining representation: `E_ij ↦ e_ij`.
    pub fn fundamental(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(TwistError::InvalidArgument(format!(
                "gl(N) needs N >= 2, got {n}"
            )));
        }
        Self::from_images(n, n, "fundamental", |i, j| SparseMatrix::unit(n, i, j))
    }

    /// `E_ij ↦ a(E_ij) ⊗ I + I ⊗ b(E_ij)`; with `a = b` this is `(a ⊗ a)∘Δ`.
    pub fn tensor_sum(a: &Morphism, b: &Morphism) -> Result<Self> {
        if a.n != b.n {
            return Err(TwistError::DimensionMismatch {
                left: a.n,
                right: b.n,
            });
        }
        let (ia, ib) = (SparseMatrix::identity(a.dim), SparseMatrix::identity(b.dim));
        Self::from_images(
            a.n,
            a.dim * b.dim,
            format!("{}+{}", a.label, b.label),
            |i, j| Ok(kron(a.image(i, j), &ib).add(&kron(&ia, b.image(i, j)))),
        )
    }

    /// The undeformed coproduct followed by `phi ⊗ phi`.
    pub fn coproduct(phi: &Morphism) -> Result<Self> {
        let mut m = Self::tensor_sum(phi, phi)?;
        m.label = format!("delta({})", phi.label);
        Ok(m)
    }

    /// Coproduct of the fundamental representation: the leg-doubled witness.
    pub fn doubled(n: usize) -> Result<Self> {
        let mut m = Self::coproduct(&Self::fundamental(n)?)?;
        m.label = "doubled".into();
        Ok(m)
    }

    /// Sends every generator to zero; realizes the counit as `ε(x)·I`.
    pub fn zero(n: usize, dim: usize) -> Result<Self> {
        Self::from_images(n, dim, "zero", |_, _| Ok(SparseMatrix::zero(dim)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Image of `E_ij`; indices must be in range.
    pub fn image(&self, i: usize, j: usize) -> &SparseMatrix {
        &self.images[(i - 1) * self.n + (j - 1)]
    }
}

/// Structural evaluation of `e` under `phi`.
pub fn eval_expr(e: &Expr, phi: &Morphism) -> Result<SparseMatrix> {
    match e {
        Expr::Gen(i, j) => {
            if *i == 0 || *j == 0 || *i > phi.n || *j > phi.n {
                return Err(TwistError::IndexOutOfRange(format!(
                    "generator E{i},{j} in gl({})",
                    phi.n
                )));
            }
            Ok(phi.image(*i, *j).clone())
        }
        Expr::Scalar(c) => Ok(SparseMatrix::scalar(phi.dim, c.clone())),
        Expr::Sum(ts) => {
            let mut acc = SparseMatrix::zero(phi.dim);
            for t in ts {
                acc = acc.add(&eval_expr(t, phi)?);
            }
            Ok(acc)
        }
        Expr::Prod(fs) => {
            let mut scalar = Rational::ONE;
            let mut acc: Option<SparseMatrix> = None;
            for t in fs {
                if let Expr::Scalar(c) = t {
                    scalar *= c;
                    continue;
                }
                let m = eval_expr(t, phi)?;
                acc = Some(match acc {
                    None => m,
                    Some(a) => a.mul(&m),
                });
            }
            Ok(match acc {
                None => SparseMatrix::scalar(phi.dim, scalar),
                Some(m) => m.scale(&scalar),
            })
        }
        Expr::Func(f, s) => analytic_apply(f, &eval_expr(s, phi)?),
    }
}

/// Image of `S(e)` under `phi`.
pub fn antipode_eval(e: &Expr, phi: &Morphism) -> Result<SparseMatrix> {
    eval_expr(&e.antipode(), phi)
}
