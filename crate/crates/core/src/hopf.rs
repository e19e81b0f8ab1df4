//! Exact verification of the Hopf-algebraic identities of a twist: cocycle
//! and counit equations, twisted coproducts, R-matrix properties, and the
//! twisted antipode.
//!
//! Every identity lives in U(g); here it is checked on images in a witness
//! representation, which is a necessary condition. A pass means the
//! difference matrix has no stored entries.

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Result, TwistError};
use crate::expr::{eval_expr, Expr, Morphism};
use crate::rational::Rational;
use crate::sparse::{kron, permute_legs, SparseMatrix};
use crate::twist::{
    extension_factor, external_factor, jordanian_factor, ExternalKind, TwistFactor, TwistSequence,
};

/// Outcome of one exact verification.
#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Stored entries in the difference matrix; zero exactly when passed.
    pub residual_nnz: usize,
    /// Dimension of the space the identity was checked in.
    pub dims: usize,
    #[serde(serialize_with = "ser_millis", rename = "elapsed_ms")]
    pub elapsed: Duration,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn ser_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl CheckResult {
    pub fn from_residual(
        name: impl Into<String>,
        dims: usize,
        residual_nnz: usize,
        started: Instant,
    ) -> Self {
        CheckResult {
            name: name.into(),
            passed: residual_nnz == 0,
            residual_nnz,
            dims,
            elapsed: started.elapsed(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} residual={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.residual_nnz
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    /// The defining representation on C^N.
    Fundamental,
    /// `x ↦ x⊗1 + 1⊗x` on C^N ⊗ C^N.
    Doubled,
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessKind::Fundamental => write!(f, "fundamental"),
            WitnessKind::Doubled => write!(f, "doubled"),
        }
    }
}

impl std::str::FromStr for WitnessKind {
    type Err = TwistError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fundamental" => Ok(WitnessKind::Fundamental),
            "doubled" => Ok(WitnessKind::Doubled),
            _ => Err(TwistError::Parse(format!("unknown witness `{s}`"))),
        }
    }
}

/// A representation `ρ` together with `(ρ⊗ρ)∘Δ`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub kind: WitnessKind,
    pub base: Morphism,
    pub delta: Morphism,
}

impl Witness {
    pub fn new(kind: WitnessKind, n: usize) -> Result<Self> {
        let base = match kind {
            WitnessKind::Fundamental => Morphism::fundamental(n)?,
            WitnessKind::Doubled => Morphism::doubled(n)?,
        };
        let delta = Morphism::coproduct(&base)?;
        Ok(Witness { kind, base, delta })
    }

    pub fn fundamental(n: usize) -> Result<Self> {
        Self::new(WitnessKind::Fundamental, n)
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Dimension of the single-leg representation space.
    pub fn d(&self) -> usize {
        self.base.dim()
    }

    /// Suffix for check names; empty for the default witness.
    pub fn tag(&self) -> &'static str {
        match self.kind {
            WitnessKind::Fundamental => "",
            WitnessKind::Doubled => ",doubled",
        }
    }

    fn check_n(&self, n: usize) -> Result<()> {
        if n != self.n() {
            return Err(TwistError::DimensionMismatch {
                left: n,
                right: self.n(),
            });
        }
        Ok(())
    }

    /// `(F, F⁻¹)` on V⊗V.
    pub fn materialize(&self, f: &TwistSequence) -> Result<(SparseMatrix, SparseMatrix)> {
        self.check_n(f.n)?;
        f.materialize_pair(&self.base, &self.base)
    }

    /// Image of `Δ(x)` on V⊗V.
    pub fn coproduct(&self, x: &Expr) -> Result<SparseMatrix> {
        eval_expr(x, &self.delta)
    }
}

/// `Δ_F(x) = F Δ(x) F⁻¹` with the materialized twist cached.
pub struct TwistedCoalgebra<'w> {
    pub witness: &'w Witness,
    pub f: SparseMatrix,
    pub f_inv: SparseMatrix,
}

impl<'w> TwistedCoalgebra<'w> {
    pub fn new(twist: &TwistSequence, witness: &'w Witness) -> Result<Self> {
        let (f, f_inv) = witness.materialize(twist)?;
        Ok(TwistedCoalgebra { witness, f, f_inv })
    }

    pub fn coproduct(&self, x: &Expr) -> Result<SparseMatrix> {
        Ok(self.conjugate(&self.witness.coproduct(x)?))
    }

    /// `F m F⁻¹` for an element already on V⊗V.
    pub fn conjugate(&self, m: &SparseMatrix) -> SparseMatrix {
        self.f.mul(m).mul(&self.f_inv)
    }
}

/// `F Δ(x) F⁻¹` on V⊗V.
pub fn twisted_coproduct(f: &TwistSequence, x: &Expr, witness: &Witness) -> Result<SparseMatrix> {
    TwistedCoalgebra::new(f, witness)?.coproduct(x)
}

/// Product of `(Δ ⊗ id)` images (or `(id ⊗ Δ)` when `left_leg` is false) of
/// every factor, each computed as `exp(Σ Δ(u) ⊗ w)`.
fn delta_leg_image(
    f: &TwistSequence,
    witness: &Witness,
    left_leg: bool,
) -> Result<(SparseMatrix, SparseMatrix)> {
    if left_leg {
        f.materialize_pair(&witness.delta, &witness.base)
    } else {
        f.materialize_pair(&witness.base, &witness.delta)
    }
}

/// Checks `F₁₂ (Δ_B ⊗ id)(F) = F₂₃ (id ⊗ Δ_B)(F)` on V⊗V⊗V, where `Δ_B` is
/// the coproduct already twisted by `base` (undeformed when empty).
pub fn cocycle_check(
    label: &str,
    f: &TwistSequence,
    base: &TwistSequence,
    witness: &Witness,
) -> Result<CheckResult> {
    let started = Instant::now();
    witness.check_n(f.n)?;
    if !base.is_empty() {
        witness.check_n(base.n)?;
    }
    let d = witness.d();
    let id = SparseMatrix::identity(d);
    let (fm, _) = witness.materialize(f)?;
    let (b, b_inv) = witness.materialize(base)?;
    let (dl, _) = delta_leg_image(f, witness, true)?;
    let (dr, _) = delta_leg_image(f, witness, false)?;

    let b12 = kron(&b, &id);
    let b12_inv = kron(&b_inv, &id);
    let b23 = kron(&id, &b);
    let b23_inv = kron(&id, &b_inv);
    let lhs = kron(&fm, &id).mul(&b12).mul(&dl).mul(&b12_inv);
    let rhs = kron(&id, &fm).mul(&b23).mul(&dr).mul(&b23_inv);
    let residual = lhs.diff_nnz(&rhs);
    let name = format!("cocycle[{label},N={}{}]", f.n, witness.tag());
    Ok(CheckResult::from_residual(
        name,
        d * d * d,
        residual,
        started,
    ))
}

/// Checks `(ε ⊗ id)F = (id ⊗ ε)F = 1` factor by factor.
pub fn counit_check(label: &str, f: &TwistSequence, witness: &Witness) -> Result<CheckResult> {
    let started = Instant::now();
    witness.check_n(f.n)?;
    let phi = &witness.base;
    let mut residual = 0;
    for factor in &f.factors {
        let id = SparseMatrix::identity(phi.dim());
        residual += factor.counit_left(phi)?.diff_nnz(&id);
        residual += factor.counit_right(phi)?.diff_nnz(&id);
    }
    let name = format!("counit[{label},N={}{}]", f.n, witness.tag());
    Ok(CheckResult::from_residual(
        name,
        phi.dim(),
        residual,
        started,
    ))
}

/// Checks every factor as a twist of the coproduct deformed by all factors
/// applied before it.
pub fn factorwise_cocycle_checks(
    label: &str,
    f: &TwistSequence,
    witness: &Witness,
) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    let mut base = TwistSequence::empty(f.n);
    for factor in &f.factors {
        let single = TwistSequence::single(factor.clone());
        let sub = format!("{label}:{}|{}", factor.name, base.names().join(","));
        out.push(cocycle_check(&sub, &single, &base, witness)?);
        base = base.then(single)?;
    }
    Ok(out)
}

/// `R = F₂₁ F⁻¹`; checks the Yang–Baxter equation `R₁₂R₁₃R₂₃ = R₂₃R₁₃R₁₂`
/// and triangularity `R₂₁ R = 1`.
pub fn r_matrix_checks(label: &str, f: &TwistSequence, witness: &Witness) -> Result<CheckResult> {
    let started = Instant::now();
    let d = witness.d();
    let (fm, f_inv) = witness.materialize(f)?;
    let f21 = permute_legs(&fm, d, &[1, 0]);
    let r = f21.mul(&f_inv);
    let r21 = permute_legs(&r, d, &[1, 0]);
    let triangular = r21.mul(&r).diff_nnz(&SparseMatrix::identity(d * d));

    let id = SparseMatrix::identity(d);
    let r12 = kron(&r, &id);
    let r23 = kron(&id, &r);
    let r13 = permute_legs(&r12, d, &[0, 2, 1]);
    let lhs = r12.mul(&r13).mul(&r23);
    let rhs = r23.mul(&r13).mul(&r12);
    let qybe = lhs.diff_nnz(&rhs);
    let name = format!("rmatrix[{label},N={}{}]", f.n, witness.tag());
    Ok(
        CheckResult::from_residual(name, d * d * d, qybe + triangular, started).with_note(format!(
            "qybe residual={qybe}, triangularity residual={triangular}"
        )),
    )
}

/// Checks `(Δ_F ⊗ id)Δ_F(x) = (id ⊗ Δ_F)Δ_F(x)` on V⊗V⊗V for each `x`.
pub fn coassociativity_check(
    label: &str,
    f: &TwistSequence,
    xs: &[Expr],
    witness: &Witness,
) -> Result<CheckResult> {
    let started = Instant::now();
    let d = witness.d();
    let id = SparseMatrix::identity(d);
    let (fm, f_inv) = witness.materialize(f)?;
    let (dl, dl_inv) = delta_leg_image(f, witness, true)?;
    let (dr, dr_inv) = delta_leg_image(f, witness, false)?;
    let left = kron(&fm, &id).mul(&dl);
    let left_inv = dl_inv.mul(&kron(&f_inv, &id));
    let right = kron(&id, &fm).mul(&dr);
    let right_inv = dr_inv.mul(&kron(&id, &f_inv));
    let triple = Morphism::tensor_sum(&witness.delta, &witness.base)?;
    let mut residual = 0;
    for x in xs {
        let x3 = eval_expr(x, &triple)?;
        let a = left.mul(&x3).mul(&left_inv);
        let b = right.mul(&x3).mul(&right_inv);
        residual += a.diff_nnz(&b);
    }
    let name = format!("coassoc[{label},N={}{}]", f.n, witness.tag());
    Ok(CheckResult::from_residual(
        name,
        d * d * d,
        residual,
        started,
    ))
}

/// A term `c · first ⊗ second` of a finite expansion of a twist.
#[derive(Clone, Debug)]
struct ExpansionTerm {
    coef: Rational,
    first: Vec<Expr>,
    second: Vec<Expr>,
}

/// Images of one leg monomial under `ρ` and `ρ∘S`.
struct LegImages {
    plain: SparseMatrix,
    antipode: SparseMatrix,
}

fn leg_images(factors: &[Expr], phi: &Morphism) -> Result<LegImages> {
    let mut plain = SparseMatrix::identity(phi.dim());
    let mut antipode = SparseMatrix::identity(phi.dim());
    for x in factors {
        plain = plain.mul(&eval_expr(x, phi)?);
        antipode = eval_expr(&x.antipode(), phi)?.mul(&antipode);
    }
    Ok(LegImages { plain, antipode })
}

/// Multi-index expansion of `exp(sign · Σ u_a ⊗ w_a)` with every term whose
/// images vanish in `phi` discarded. A discarded monomial stays zero under
/// every extension, so the surviving sum is exact for products through
/// `phi`.
fn expand_factor(
    factor: &TwistFactor,
    sign: &Rational,
    phi: &Morphism,
    bound: usize,
) -> Result<Vec<ExpansionTerm>> {
    let vanishes = |legs: &[Expr]| -> Result<bool> {
        let im = leg_images(legs, phi)?;
        Ok(im.plain.is_zero() && im.antipode.is_zero())
    };
    let mut out = vec![ExpansionTerm {
        coef: Rational::ONE,
        first: vec![],
        second: vec![],
    }];
    let mut frontier = out.clone();
    let mut degree = 0;
    while !frontier.is_empty() {
        degree += 1;
        if degree > bound {
            return Err(TwistError::ExpansionOverflow { bound });
        }
        let mut next = Vec::new();
        for term in &frontier {
            for (u, w) in &factor.terms {
                let mut first = term.first.clone();
                first.push(u.clone());
                let mut second = term.second.clone();
                second.push(w.clone());
                if vanishes(&first)? || vanishes(&second)? {
                    continue;
                }
                // sign^k / k! accumulated one degree at a time
                let coef = &(&term.coef * sign) / &Rational::integer(degree as i64);
                next.push(ExpansionTerm {
                    coef,
                    first,
                    second,
                });
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// Expansion of a product `F_k … F_1` (or of `F⁻¹ = F_1⁻¹ … F_k⁻¹`).
fn expand_sequence(
    f: &TwistSequence,
    inverse: bool,
    phi: &Morphism,
    bound: usize,
) -> Result<Vec<ExpansionTerm>> {
    let sign = if inverse {
        -Rational::ONE
    } else {
        Rational::ONE
    };
    let mut acc = vec![ExpansionTerm {
        coef: Rational::ONE,
        first: vec![],
        second: vec![],
    }];
    // product order: for F, factors[last] is leftmost; for F⁻¹, factors[0]⁻¹ is leftmost
    let ordered: Vec<&TwistFactor> = if inverse {
        f.factors.iter().collect()
    } else {
        f.factors.iter().rev().collect()
    };
    for factor in ordered {
        let terms = expand_factor(factor, &sign, phi, bound)?;
        let mut next = Vec::with_capacity(acc.len() * terms.len());
        for a in &acc {
            for t in &terms {
                let mut first = a.first.clone();
                first.extend(t.first.iter().cloned());
                let mut second = a.second.clone();
                second.extend(t.second.iter().cloned());
                next.push(ExpansionTerm {
                    coef: &a.coef * &t.coef,
                    first,
                    second,
                });
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Default degree bound for antipode expansions.
pub fn default_expansion_bound(n: usize) -> usize {
    2 * n
}

/// Image of `v = Σ f⁽¹⁾ S(f⁽²⁾)`.
pub fn antipode_twist_element(
    f: &TwistSequence,
    phi: &Morphism,
    bound: usize,
) -> Result<SparseMatrix> {
    let mut v = SparseMatrix::zero(phi.dim());
    for t in expand_sequence(f, false, phi, bound)? {
        let a = leg_images(&t.first, phi)?;
        let b = leg_images(&t.second, phi)?;
        v = v.add_scaled(&t.coef, &a.plain.mul(&b.antipode));
    }
    Ok(v)
}

/// True for elements of the Lie algebra: linear combinations of generators.
fn is_primitive(e: &Expr) -> bool {
    match e {
        Expr::Gen(..) => true,
        Expr::Sum(ts) => ts.iter().all(is_primitive),
        Expr::Prod(fs) => {
            let mut lie = 0;
            for f in fs {
                match f {
                    Expr::Scalar(_) => {}
                    f if is_primitive(f) => lie += 1,
                    _ => return false,
                }
            }
            lie == 1
        }
        _ => false,
    }
}

/// Checks the antipode axiom for `S_F(a) = v S(a) v⁻¹`:
/// `m(S_F ⊗ id)Δ_F(x) = 0 = m(id ⊗ S_F)Δ_F(x)` for every Lie algebra
/// element `x`.
pub fn antipode_checks(
    label: &str,
    f: &TwistSequence,
    xs: &[Expr],
    witness: &Witness,
    bound: usize,
) -> Result<CheckResult> {
    let started = Instant::now();
    witness.check_n(f.n)?;
    let phi = &witness.base;
    let dim = phi.dim();
    let v = antipode_twist_element(f, phi, bound)?;
    let v_inv = v.inverse()?;
    let fwd = expand_sequence(f, false, phi, bound)?;
    let inv = expand_sequence(f, true, phi, bound)?;
    let fwd_im: Vec<(LegImages, LegImages)> = fwd
        .iter()
        .map(|t| Ok((leg_images(&t.first, phi)?, leg_images(&t.second, phi)?)))
        .collect::<Result<_>>()?;
    let inv_im: Vec<(LegImages, LegImages)> = inv
        .iter()
        .map(|t| Ok((leg_images(&t.first, phi)?, leg_images(&t.second, phi)?)))
        .collect::<Result<_>>()?;
    let one = leg_images(&[], phi)?;

    let mut residual = 0;
    for x in xs {
        if !is_primitive(x) {
            return Err(TwistError::InvalidArgument(format!(
                "{x} is not a Lie algebra element"
            )));
        }
        let xi = leg_images(std::slice::from_ref(x), phi)?;
        let mut left_sum = SparseMatrix::zero(dim);
        let mut right_sum = SparseMatrix::zero(dim);
        // Δ(x) = x ⊗ 1 + 1 ⊗ x
        for (x1, x2) in [(&xi, &one), (&one, &xi)] {
            for (t, (a, b)) in fwd.iter().zip(&fwd_im) {
                for (t2, (a2, b2)) in inv.iter().zip(&inv_im) {
                    let c = &t.coef * &t2.coef;
                    // p = a·x1·a', q = b·x2·b'
                    let s_p = a2.antipode.mul(&x1.antipode).mul(&a.antipode);
                    let q = b.plain.mul(&x2.plain).mul(&b2.plain);
                    left_sum = left_sum.add_scaled(&c, &v.mul(&s_p).mul(&v_inv).mul(&q));
                    let p = a.plain.mul(&x1.plain).mul(&a2.plain);
                    let s_q = b2.antipode.mul(&x2.antipode).mul(&b.antipode);
                    right_sum = right_sum.add_scaled(&c, &p.mul(&v).mul(&s_q).mul(&v_inv));
                }
            }
        }
        residual += left_sum.nnz() + right_sum.nnz();
    }
    let name = format!("antipode[{label},N={}{}]", f.n, witness.tag());
    Ok(CheckResult::from_residual(name, dim, residual, started))
}

/// Checks that dragging `Φ_{J1}` through the two outer extensions of the
/// first step produces the external factor:
/// `Φ_{J1} Φ_{E0(2)} Φ_{E0(N-1)} Φ_{J1}⁻¹ = Φ̃_{E0}`, that `Φ_{J1}` commutes
/// with the inner extensions `Φ_{E0(r)}`, `3 ≤ r ≤ N-2`, and that the whole
/// rearranged three-factor product agrees.
pub fn verify_dragging(n: usize, witness: &Witness) -> Result<CheckResult> {
    let started = Instant::now();
    if n < 6 {
        return Err(TwistError::NotApplicable(format!(
            "dragging identity needs N > 5, got N={n}"
        )));
    }
    witness.check_n(n)?;
    let half = Rational::new(1, 2);
    let phi = &witness.base;
    let mat = |f: &TwistFactor| f.materialize_pair(phi, phi);
    let (j0, _) = mat(&jordanian_factor(n, 1)?)?;
    let (j1, j1_inv) = mat(&jordanian_factor(n, 2)?)?;
    let (e2, _) = mat(&extension_factor(n, 1, 2, &half)?)?;
    let (elast, _) = mat(&extension_factor(n, 1, n - 1, &half)?)?;
    let (tilde, _) = mat(&external_factor(n, ExternalKind::E0Tilde)?)?;

    let dragged = j1.mul(&e2).mul(&elast).mul(&j1_inv);
    let mut residual = dragged.diff_nnz(&tilde);

    let mut inner = SparseMatrix::identity(phi.dim() * phi.dim());
    for r in 3..=n - 2 {
        let (er, _) = mat(&extension_factor(n, 1, r, &half)?)?;
        residual += j1.commutator(&er).nnz();
        inner = inner.mul(&er);
    }
    // Φ_{J1} Φ_{E0} Φ_{J0} = Φ̃_{E0} Φ_{E0(N-2≺3)} Φ_{J1} Φ_{J0}
    let e0_all = e2.mul(&elast).mul(&inner);
    let lhs = j1.mul(&e0_all).mul(&j0);
    let rhs = tilde.mul(&inner).mul(&j1).mul(&j0);
    residual += lhs.diff_nnz(&rhs);

    let name = format!("dragging[N={n}{}]", witness.tag());
    Ok(CheckResult::from_residual(
        name,
        phi.dim() * phi.dim(),
        residual,
        started,
    ))
}

/// The mirror identity along the alternative chain:
/// `Φ_{J0} Φ'_{E1(1)} Φ'_{E1(N)} Φ_{J0}⁻¹ = Φ̃_{E1}`, plus the commutation of
/// `Φ_{J0}` with the remaining `Φ'_{E1(s)}`.
pub fn verify_dragging_alternative(n: usize, witness: &Witness) -> Result<CheckResult> {
    let started = Instant::now();
    if n < 6 {
        return Err(TwistError::NotApplicable(format!(
            "dragging identity needs N > 5, got N={n}"
        )));
    }
    witness.check_n(n)?;
    let phi = &witness.base;
    let alt = crate::twist::alternative_chain(n)?;
    let find = |name: &str| -> Result<&TwistFactor> {
        alt.factors
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| TwistError::InvalidArgument(format!("missing factor {name}")))
    };
    let (j0, j0_inv) = find("J0'")?.materialize_pair(phi, phi)?;
    let (e1, _) = find("E1'(1)")?.materialize_pair(phi, phi)?;
    let (en, _) = find(&format!("E1'({n})"))?.materialize_pair(phi, phi)?;
    let (tilde, _) = external_factor(n, ExternalKind::E1Tilde)?.materialize_pair(phi, phi)?;
    let mut residual = j0.mul(&e1).mul(&en).mul(&j0_inv).diff_nnz(&tilde);
    for s in 3..=n - 2 {
        let (es, _) = find(&format!("E1'({s})"))?.materialize_pair(phi, phi)?;
        residual += j0.commutator(&es).nnz();
    }
    let name = format!("dragging-alt[N={n}{}]", witness.tag());
    Ok(CheckResult::from_residual(
        name,
        phi.dim() * phi.dim(),
        residual,
        started,
    ))
}
