//! Square sparse matrices over [`Rational`] in compressed-row form.
//!
//! Public indices are 1-based; a tensor index `(a, b)` over factors of
//! dimension `d` is `(a - 1) * d + b`. Stored values are never zero, and
//! every row is sorted by column, so `==` is exact equality in O(nnz).

use std::fmt;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Result, TwistError};
use crate::rational::Rational;

/// Rows above this many stored entries are multiplied in parallel.
const PAR_MUL_THRESHOLD: usize = 20_000;

#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<Rational>,
}

/// Scalar analytic function applied to a nilpotent argument by its power
/// series about zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnalyticFn {
    /// `exp(x)`
    Exp,
    /// `ln(1 + x)`
    Log1p,
    /// `(1 + x)^q`
    Pow1p(Rational),
}

impl AnalyticFn {
    pub fn pow1p(q: Rational) -> Self {
        AnalyticFn::Pow1p(q)
    }

    /// Taylor coefficient of `x^k`.
    pub fn coefficient(&self, k: u32) -> Rational {
        match self {
            AnalyticFn::Exp => {
                let fact: Rational = (1..=k as i64).map(Rational::integer).product();
                fact.recip().expect("factorial is non-zero")
            }
            AnalyticFn::Log1p => {
                if k == 0 {
                    Rational::ZERO
                } else {
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    Rational::new(sign, k as i64)
                }
            }
            AnalyticFn::Pow1p(q) => Rational::binomial(q, k),
        }
    }

    /// Value at `x = 0`.
    pub fn at_zero(&self) -> Rational {
        self.coefficient(0)
    }
}

impl fmt::Display for AnalyticFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticFn::Exp => write!(f, "exp"),
            AnalyticFn::Log1p => write!(f, "log1p"),
            AnalyticFn::Pow1p(q) => write!(f, "pow1p({q})"),
        }
    }
}

impl SparseMatrix {
    pub fn zero(dim: usize) -> Self {
        SparseMatrix {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Rational::ONE)
    }

    /// `c * I`.
    pub fn scalar(dim: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero(dim);
        }
        SparseMatrix {
            dim,
            row_ptr: (0..=dim).collect(),
            cols: (0..dim as u32).collect(),
            vals: vec![c; dim],
        }
    }

    /// Matrix unit with a single `1` at 1-based `(i, j)`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Result<Self> {
        Self::from_triplets(dim, [(i, j, Rational::ONE)])
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let dim = diag.len();
        Self::from_rows(
            dim,
            diag.iter()
                .enumerate()
                .map(|(i, v)| {
                    if v.is_zero() {
                        vec![]
                    } else {
                        vec![(i as u32, v.clone())]
                    }
                })
                .collect(),
        )
    }

    /// Builds from 1-based `(row, col, value)` triplets. Duplicates are summed
    /// and zeros dropped.
    pub fn from_triplets<I>(dim: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut rows: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); dim];
        for (i, j, v) in triplets {
            if i == 0 || j == 0 || i > dim || j > dim {
                return Err(TwistError::IndexOutOfRange(format!(
                    "({i}, {j}) in dimension {dim}"
                )));
            }
            rows[i - 1].push(((j - 1) as u32, v));
        }
        for row in &mut rows {
            *row = canonical_row(std::mem::take(row));
        }
        Ok(Self::from_rows(dim, rows))
    }

    /// Rows must already be sorted by column, free of duplicates and zeros.
    fn from_rows(dim: usize, rows: Vec<Vec<(u32, Rational)>>) -> Self {
        debug_assert_eq!(rows.len(), dim);
        let nnz = rows.iter().map(Vec::len).sum();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                cols.push(c);
                vals.push(v);
            }
            row_ptr.push(cols.len());
        }
        SparseMatrix {
            dim,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }

    fn row(&self, i: usize) -> impl Iterator<Item = (u32, &Rational)> + '_ {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.cols[a..b].iter().copied().zip(&self.vals[a..b])
    }

    /// Entry at 1-based `(i, j)`; zero when absent or out of range.
    pub fn get(&self, i: usize, j: usize) -> Rational {
        if i == 0 || j == 0 || i > self.dim || j > self.dim {
            return Rational::ZERO;
        }
        let (a, b) = (self.row_ptr[i - 1], self.row_ptr[i]);
        match self.cols[a..b].binary_search(&((j - 1) as u32)) {
            Ok(k) => self.vals[a + k].clone(),
            Err(_) => Rational::ZERO,
        }
    }

    /// Stored entries as 1-based `(row, col, value)`, rows then columns ascending.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(c, v)| (i + 1, c as usize + 1, v)))
    }

    fn assert_same_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "dimension mismatch: {} vs {}",
            self.dim, other.dim
        );
    }

    /// Entrywise `self + c * other`.
    fn axpy(&self, c: &Rational, other: &Self) -> Self {
        self.assert_same_dim(other);
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let rows = (0..self.dim)
            .map(|i| {
                let mut out = Vec::new();
                let mut a = self.row(i).peekable();
                let mut b = other.row(i).peekable();
                loop {
                    match (a.peek(), b.peek()) {
                        (Some(&(ca, va)), Some(&(cb, vb))) => {
                            if ca < cb {
                                out.push((ca, va.clone()));
                                a.next();
                            } else if cb < ca {
                                out.push((cb, c * vb));
                                b.next();
                            } else {
                                let s = va + &(c * vb);
                                if !s.is_zero() {
                                    out.push((ca, s));
                                }
                                a.next();
                                b.next();
                            }
                        }
                        (Some(&(ca, va)), None) => {
                            out.push((ca, va.clone()));
                            a.next();
                        }
                        (None, Some(&(cb, vb))) => {
                            out.push((cb, c * vb));
                            b.next();
                        }
                        (None, None) => break,
                    }
                }
                out
            })
            .collect();
        Self::from_rows(self.dim, rows)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.axpy(&Rational::ONE, other)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.axpy(&-Rational::ONE, other)
    }

    pub fn add_scaled(&self, c: &Rational, other: &Self) -> Self {
        self.axpy(c, other)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        SparseMatrix {
            dim: self.dim,
            row_ptr: self.row_ptr.clone(),
            cols: self.cols.clone(),
            vals: self.vals.iter().map(|v| v * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::ONE)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_dim(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.dim);
        }
        let dim = self.dim;
        let row_product = |scratch: &mut Scratch, i: usize| {
            for (k, a) in self.row(i) {
                for (j, b) in other.row(k as usize) {
                    scratch.accumulate(j, a * b);
                }
            }
            scratch.drain()
        };
        let rows: Vec<Vec<(u32, Rational)>> = if self.nnz() + other.nnz() > PAR_MUL_THRESHOLD {
            (0..dim)
                .into_par_iter()
                .map_init(|| Scratch::new(dim), row_product)
                .collect()
        } else {
            let mut scratch = Scratch::new(dim);
            (0..dim).map(|i| row_product(&mut scratch, i)).collect()
        };
        Self::from_rows(dim, rows)
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Number of stored entries in `self - other`.
    pub fn diff_nnz(&self, other: &Self) -> usize {
        self.sub(other).nnz()
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); self.dim];
        for i in 0..self.dim {
            for (c, v) in self.row(i) {
                rows[c as usize].push((i as u32, v.clone()));
            }
        }
        Self::from_rows(self.dim, rows)
    }

    /// Conjugates by a basis permutation: entry `(i, j)` moves to
    /// `(perm[i], perm[j])` (0-based).
    pub fn permute_basis(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        let mut rows: Vec<Vec<(u32, Rational)>> = vec![Vec::new(); self.dim];
        for i in 0..self.dim {
            let target = &mut rows[perm[i]];
            target.extend(
                self.row(i)
                    .map(|(c, v)| (perm[c as usize] as u32, v.clone())),
            );
        }
        for row in &mut rows {
            row.sort_unstable_by_key(|(c, _)| *c);
        }
        Self::from_rows(self.dim, rows)
    }

    /// Inverse of a unipotent matrix by the finite series `Σ (-n)^k`, falling
    /// back to Gauss-Jordan elimination for small general matrices.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.sub(&Self::identity(self.dim));
        match analytic_apply(&AnalyticFn::Pow1p(-Rational::ONE), &n) {
            Ok(inv) => Ok(inv),
            Err(TwistError::NotNilpotent { .. }) => self.inverse_dense(),
            Err(e) => Err(e),
        }
    }

    fn inverse_dense(&self) -> Result<Self> {
        let n = self.dim;
        if n > 512 {
            return Err(TwistError::InvalidArgument(format!(
                "dense inversion refused for dimension {n}"
            )));
        }
        let mut a: Vec<Vec<Rational>> = vec![vec![Rational::ZERO; 2 * n]; n];
        for (i, j, v) in self.entries() {
            a[i - 1][j - 1] = v.clone();
        }
        for (i, row) in a.iter_mut().enumerate() {
            row[n + i] = Rational::ONE;
        }
        for c in 0..n {
            let pivot = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or(TwistError::Singular)?;
            a.swap(c, pivot);
            let inv = a[c][c].recip().expect("pivot is non-zero");
            for v in a[c].iter_mut() {
                *v = &*v * &inv;
            }
            let pivot_row = a[c].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == c || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *v = &*v - &(&f * p);
                    }
                }
            }
        }
        let rows = a
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .skip(n)
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c as u32, v))
                    .collect()
            })
            .collect();
        Ok(Self::from_rows(n, rows))
    }

    /// Writes the plain-text dump: `dim <d>` then `row col num den` per entry.
    pub fn write_dump<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "dim {}", self.dim)?;
        for (i, j, v) in self.entries() {
            writeln!(w, "{i} {j} {} {}", v.numer(), v.denom())?;
        }
        Ok(())
    }

    pub fn to_dump_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dump(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("dump is ASCII")
    }

    pub fn read_dump<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| TwistError::Parse("empty dump".into()))??;
        let dim: usize = header
            .strip_prefix("dim ")
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| TwistError::Parse(format!("bad header `{header}`")))?;
        let mut triplets = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [i, j, num, den] = parts[..] else {
                return Err(TwistError::Parse(format!("bad entry line `{line}`")));
            };
            let idx = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| TwistError::Parse(format!("bad index `{s}`")))
            };
            let v: Rational = format!("{num}/{den}").parse()?;
            triplets.push((idx(i)?, idx(j)?, v));
        }
        Self::from_triplets(dim, triplets)
    }

    pub fn from_dump_str(s: &str) -> Result<Self> {
        Self::read_dump(s.as_bytes())
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix(dim={}, {{", self.dim)?;
        for (n, (i, j, v)) in self.entries().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            if n == 24 {
                write!(f, "... {} more", self.nnz() - 24)?;
                break;
            }
            write!(f, "({i},{j}): {v}")?;
        }
        write!(f, "}})")
    }
}

fn canonical_row(mut row: Vec<(u32, Rational)>) -> Vec<(u32, Rational)> {
    row.sort_by_key(|(c, _)| *c);
    let mut out: Vec<(u32, Rational)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += &v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// Dense accumulator for one output row.
struct Scratch {
    acc: Vec<Rational>,
    live: Vec<bool>,
    touched: Vec<u32>,
}

impl Scratch {
    fn new(dim: usize) -> Self {
        Scratch {
            acc: vec![Rational::ZERO; dim],
            live: vec![false; dim],
            touched: Vec::new(),
        }
    }

    fn accumulate(&mut self, j: u32, v: Rational) {
        let k = j as usize;
        if self.live[k] {
            self.acc[k] += &v;
        } else {
            self.live[k] = true;
            self.acc[k] = v;
            self.touched.push(j);
        }
    }

    fn drain(&mut self) -> Vec<(u32, Rational)> {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &j in &self.touched {
            let k = j as usize;
            self.live[k] = false;
            let v = std::mem::take(&mut self.acc[k]);
            if !v.is_zero() {
                out.push((j, v));
            }
        }
        self.touched.clear();
        out
    }
}

/// Kronecker product: `(a ⊗ b)[((i-1)·db + k, (j-1)·db + l)] = a[i,j]·b[k,l]`.
pub fn kron(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    let db = b.dim;
    let dim = a.dim * db;
    let mut rows = Vec::with_capacity(dim);
    for i in 0..a.dim {
        for k in 0..db {
            let mut row = Vec::new();
            for (j, av) in a.row(i) {
                for (l, bv) in b.row(k) {
                    row.push((j * db as u32 + l, av * bv));
                }
            }
            rows.push(row);
        }
    }
    SparseMatrix::from_rows(dim, rows)
}

/// `I ⊗ … ⊗ m ⊗ … ⊗ I` with `m` in position `leg` (1-based) of `legs`.
pub fn embed_leg(m: &SparseMatrix, leg: usize, legs: usize) -> Result<SparseMatrix> {
    if leg == 0 || leg > legs {
        return Err(TwistError::LegOutOfRange { leg, legs });
    }
    let d = m.dim;
    let left = SparseMatrix::identity(d.pow(leg as u32 - 1));
    let right = SparseMatrix::identity(d.pow((legs - leg) as u32));
    Ok(kron(&kron(&left, m), &right))
}

/// Permutes tensor legs of an operator on `(C^d)^{⊗legs}`: leg `i` of the
/// input becomes leg `perm[i]` of the output (0-based).
pub fn permute_legs(m: &SparseMatrix, d: usize, perm: &[usize]) -> SparseMatrix {
    let legs = perm.len();
    assert_eq!(
        m.dim,
        d.pow(legs as u32),
        "operator does not act on {legs} legs"
    );
    let map: Vec<usize> = (0..m.dim)
        .map(|idx| {
            let mut digits = vec![0; legs];
            let mut rest = idx;
            for leg in (0..legs).rev() {
                digits[leg] = rest % d;
                rest /= d;
            }
            let mut out = vec![0; legs];
            for (leg, digit) in digits.into_iter().enumerate() {
                out[perm[leg]] = digit;
            }
            out.into_iter().fold(0, |acc, x| acc * d + x)
        })
        .collect();
    m.permute_basis(&map)
}

/// Smallest `k` with `m^k = 0`.
pub fn nilpotency_index(m: &SparseMatrix) -> Result<usize> {
    Ok(nilpotent_powers(m)?.len() + 1)
}

/// `[m, m^2, …, m^(k-1)]` where `k` is the nilpotency index.
fn nilpotent_powers(m: &SparseMatrix) -> Result<Vec<SparseMatrix>> {
    let dim = m.dim;
    let mut powers = Vec::new();
    let mut p = m.clone();
    let mut k = 1;
    loop {
        if p.is_zero() {
            return Ok(powers);
        }
        if k >= dim {
            return Err(TwistError::NotNilpotent { dim });
        }
        if k == 32 && !is_nilpotent_by_squaring(&p, k) {
            return Err(TwistError::NotNilpotent { dim });
        }
        let next = p.mul(m);
        powers.push(p);
        p = next;
        k += 1;
    }
}

/// Decides nilpotency of `m` given `p = m^k` by squaring `p` until its
/// exponent reaches the dimension.
fn is_nilpotent_by_squaring(p: &SparseMatrix, k: usize) -> bool {
    let mut p = p.clone();
    let mut exp = k;
    while exp < p.dim {
        if p.is_zero() {
            return true;
        }
        p = p.mul(&p);
        exp *= 2;
    }
    p.is_zero()
}

/// Evaluates `f` on a nilpotent matrix by its truncated power series.
pub fn analytic_apply(f: &AnalyticFn, m: &SparseMatrix) -> Result<SparseMatrix> {
    let powers = nilpotent_powers(m)?;
    let mut acc = SparseMatrix::scalar(m.dim, f.at_zero());
    for (k, p) in powers.iter().enumerate() {
        acc = acc.add_scaled(&f.coefficient(k as u32 + 1), p);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn e(dim: usize, i: usize, j: usize) -> SparseMatrix {
        SparseMatrix::unit(dim, i, j).unwrap()
    }

    #[test]
    fn kron_examples() {
        let k = kron(&e(2, 1, 2), &e(2, 1, 2));
        assert_eq!(k, e(4, 1, 4));
        assert_eq!(
            kron(&SparseMatrix::identity(2), &SparseMatrix::identity(2)),
            SparseMatrix::identity(4)
        );
        let h = SparseMatrix::diagonal(&[q(1, 2), q(-1, 2)]);
        let he = kron(&h, &e(2, 1, 2));
        let expected = SparseMatrix::from_triplets(4, [(1, 2, q(1, 2)), (3, 4, q(-1, 2))]).unwrap();
        assert_eq!(he, expected);
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(nilpotency_index(&e(2, 1, 2)).unwrap(), 2);
        assert_eq!(nilpotency_index(&SparseMatrix::zero(3)).unwrap(), 1);
        assert_eq!(
            nilpotency_index(&SparseMatrix::identity(2)),
            Err(TwistError::NotNilpotent { dim: 2 })
        );
        let shift =
            SparseMatrix::from_triplets(4, [(1, 2, q(1, 1)), (2, 3, q(1, 1)), (3, 4, q(1, 1))])
                .unwrap();
        assert_eq!(nilpotency_index(&shift).unwrap(), 4);
    }

    #[test]
    fn nilpotency_rejects_large_non_nilpotent_quickly() {
        // a 40-cycle has m^40 = I, so the squaring shortcut must fire.
        let dim = 40;
        let cyc =
            SparseMatrix::from_triplets(dim, (1..=dim).map(|i| (i, i % dim + 1, Rational::ONE)))
                .unwrap();
        assert!(matches!(
            nilpotency_index(&cyc),
            Err(TwistError::NotNilpotent { .. })
        ));
    }

    #[test]
    fn analytic_examples() {
        let h = SparseMatrix::diagonal(&[q(1, 2), q(-1, 2)]);
        let he = kron(&h, &e(2, 1, 2));
        assert_eq!(
            analytic_apply(&AnalyticFn::Exp, &he).unwrap(),
            SparseMatrix::identity(4).add(&he)
        );
        assert_eq!(
            analytic_apply(&AnalyticFn::Log1p, &e(2, 1, 2)).unwrap(),
            e(2, 1, 2)
        );
        let expected = SparseMatrix::identity(3).add_scaled(&q(-1, 2), &e(3, 1, 3));
        assert_eq!(
            analytic_apply(&AnalyticFn::Pow1p(q(-1, 2)), &e(3, 1, 3)).unwrap(),
            expected
        );
        assert!(analytic_apply(&AnalyticFn::Exp, &SparseMatrix::identity(2)).is_err());
    }

    #[test]
    fn log1p_of_two_step_nilpotent() {
        // ln(1 + n) with n = e12 + e23: n - n^2/2, n^2 = e13
        let n = e(3, 1, 2).add(&e(3, 2, 3));
        let expected = n.add_scaled(&q(-1, 2), &e(3, 1, 3));
        assert_eq!(analytic_apply(&AnalyticFn::Log1p, &n).unwrap(), expected);
    }

    #[test]
    fn embed_leg_examples() {
        let i2 = SparseMatrix::identity(2);
        assert_eq!(
            embed_leg(&e(2, 1, 2), 1, 2).unwrap(),
            kron(&e(2, 1, 2), &i2)
        );
        assert_eq!(
            embed_leg(&e(2, 1, 2), 2, 2).unwrap(),
            kron(&i2, &e(2, 1, 2))
        );
        assert_eq!(
            embed_leg(&e(2, 1, 2), 3, 2),
            Err(TwistError::LegOutOfRange { leg: 3, legs: 2 })
        );
    }

    #[test]
    fn swap_legs_exchanges_kron_factors() {
        let a = e(3, 1, 2);
        let b = e(3, 2, 3).add(&e(3, 3, 3));
        assert_eq!(permute_legs(&kron(&a, &b), 3, &[1, 0]), kron(&b, &a));
        let c = e(3, 3, 1);
        let abc = kron(&kron(&a, &b), &c);
        assert_eq!(permute_legs(&abc, 3, &[0, 2, 1]), kron(&kron(&a, &c), &b));
        // leg i goes to perm[i]: (a,b,c) -> positions (1,2,0) gives (c,a,b)
        assert_eq!(permute_legs(&abc, 3, &[1, 2, 0]), kron(&kron(&c, &a), &b));
    }

    #[test]
    fn inverse_paths() {
        let u = SparseMatrix::identity(3).add(&e(3, 1, 3).scale(&q(5, 7)));
        assert!(u.mul(&u.inverse().unwrap()).is_identity());
        let m = SparseMatrix::from_triplets(
            2,
            [
                (1, 1, q(2, 1)),
                (1, 2, q(1, 1)),
                (2, 1, q(1, 1)),
                (2, 2, q(1, 1)),
            ],
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let singular = SparseMatrix::from_triplets(2, [(1, 1, q(1, 1)), (2, 1, q(1, 1))]).unwrap();
        assert_eq!(singular.inverse(), Err(TwistError::Singular));
    }

    #[test]
    fn arithmetic_drops_zeros() {
        let a = e(2, 1, 2);
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.sub(&a).nnz(), 0);
        assert!(a.mul(&a).is_zero());
        assert_eq!(a.get(1, 2), Rational::ONE);
        assert_eq!(a.get(2, 1), Rational::ZERO);
    }

    #[test]
    fn dump_examples() {
        assert_eq!(
            SparseMatrix::identity(2).to_dump_string(),
            "dim 2\n1 1 1 1\n2 2 1 1\n"
        );
        assert_eq!(SparseMatrix::zero(3).to_dump_string(), "dim 3\n");
        let m = SparseMatrix::from_triplets(3, [(3, 1, q(-7, 4)), (1, 2, q(2, 1))]).unwrap();
        assert_eq!(m.to_dump_string(), "dim 3\n1 2 2 1\n3 1 -7 4\n");
        assert_eq!(SparseMatrix::from_dump_str(&m.to_dump_string()).unwrap(), m);
        assert!(SparseMatrix::from_dump_str("dim 2\n1 1 1\n").is_err());
        assert!(SparseMatrix::from_dump_str("dim 2\n3 1 1 1\n").is_err());
    }
}
