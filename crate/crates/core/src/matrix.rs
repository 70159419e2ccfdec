//! Square matrices over [`PAdic`] and the subgroup predicates of `GL_n(Q_p)`.

use std::fmt;
use std::ops::{Mul, Sub};

use crate::error::{Error, Result};
use crate::padic::PAdic;
use crate::weyl::WeylElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PMatrix {
    n: usize,
    p: u32,
    entries: Vec<PAdic>,
}

impl PMatrix {
    pub fn from_rows(rows: Vec<Vec<PAdic>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        let p = rows[0]
            .first()
            .map(PAdic::prime)
            .ok_or_else(|| Error::InvalidInput("empty row".into()))?;
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(n, row.len()));
            }
            for x in row {
                if x.prime() != p {
                    return Err(Error::PrimeMismatch(p, x.prime()));
                }
                entries.push(x);
            }
        }
        Ok(PMatrix { n, p, entries })
    }

    /// Integer matrix, every entry carrying `prec` digits.
    pub fn from_i64_rows(rows: &[Vec<i64>], p: u32, prec: u32) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| PAdic::from_i64(x, p, prec)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Self::from_rows(rows)
    }

    fn from_fn(n: usize, p: u32, mut f: impl FnMut(usize, usize) -> PAdic) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        PMatrix { n, p, entries }
    }

    pub fn identity(n: usize, p: u32, prec: u32) -> Self {
        Self::from_fn(n, p, |i, j| {
            if i == j {
                PAdic::one(p, prec)
            } else {
                PAdic::zero(p, prec as i64)
            }
        })
    }

    /// The matrix with `1` at `(w(j), j)`.
    pub fn permutation(w: &WeylElement, p: u32, prec: u32) -> Self {
        Self::from_fn(w.n(), p, |i, j| {
            if w.image(j) == i {
                PAdic::one(p, prec)
            } else {
                PAdic::zero(p, prec as i64)
            }
        })
    }

    pub fn diagonal(diag: &[PAdic]) -> Result<Self> {
        let n = diag.len();
        let p = diag
            .first()
            .map(PAdic::prime)
            .ok_or_else(|| Error::InvalidInput("empty diagonal".into()))?;
        let prec = diag.iter().map(PAdic::rel_prec).max().unwrap_or(1).max(1);
        Ok(Self::from_fn(n, p, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                PAdic::zero(p, prec as i64)
            }
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> &PAdic {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: PAdic) {
        assert_eq!(x.prime(), self.p);
        self.entries[i * self.n + j] = x;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[PAdic]> {
        self.entries.chunks(self.n)
    }

    pub fn column(&self, j: usize) -> Vec<PAdic> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[PAdic] {
        &self.entries
    }

    /// Largest relative precision among the entries.
    pub fn precision(&self) -> u32 {
        self.entries.iter().map(PAdic::rel_prec).max().unwrap_or(0)
    }

    pub fn min_valuation(&self) -> Option<i64> {
        self.entries.iter().filter_map(PAdic::valuation).min()
    }

    pub fn truncate_rel(&self, prec: u32) -> Self {
        PMatrix {
            n: self.n,
            p: self.p,
            entries: self.entries.iter().map(|x| x.truncate_rel(prec)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, self.p, |i, j| self.get(j, i).clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        let n = self.n;
        Ok(Self::from_fn(n, self.p, |i, j| {
            let mut acc = self.get(i, 0) * other.get(0, j);
            for k in 1..n {
                acc = acc + self.get(i, k) * other.get(k, j);
            }
            acc
        }))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(Self::from_fn(self.n, self.p, |i, j| {
            self.get(i, j) - other.get(i, j)
        }))
    }

    /// Gauss–Jordan inversion, pivoting on the entry of least valuation.
    pub fn inv(&self) -> Result<Self> {
        let n = self.n;
        let prec = self.precision().max(1);
        let mut a: Vec<Vec<PAdic>> = self.rows().map(|r| r.to_vec()).collect();
        let mut inv: Vec<Vec<PAdic>> = PMatrix::identity(n, self.p, prec)
            .rows()
            .map(|r| r.to_vec())
            .collect();
        for c in 0..n {
            let pivot_row = (c..n)
                .filter_map(|r| a[r][c].valuation().map(|v| (v, r)))
                .min()
                .map(|(_, r)| r)
                .ok_or(Error::SingularToPrecision)?;
            a.swap(c, pivot_row);
            inv.swap(c, pivot_row);
            let scale = a[c][c].inv()?;
            for j in 0..n {
                a[c][j] = &a[c][j] * &scale;
                inv[c][j] = &inv[c][j] * &scale;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let factor = a[r][c].clone();
                for j in 0..n {
                    a[r][j] = &a[r][j] - &(&factor * &a[c][j]);
                    inv[r][j] = &inv[r][j] - &(&factor * &inv[c][j]);
                }
            }
        }
        PMatrix::from_rows(inv)
    }

    /// Smallest number of digits, counted from the least valuation in `reference`,
    /// to which `self` agrees with `reference` entrywise.
    pub fn agreement_digits(&self, reference: &Self) -> i64 {
        let base = reference.min_valuation().unwrap_or(0);
        self.entries
            .iter()
            .zip(&reference.entries)
            .map(|(a, b)| a.agreement_from(b, base))
            .min()
            .unwrap_or(i64::MAX)
    }

    /// Entrywise equality to the known precision.
    pub fn eq_to_precision(&self, other: &Self) -> bool {
        self.n == other.n
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.eq_to_precision(b))
    }

    /// Rank over `Q_p` of the submatrix `rows × cols`, entries that vanish to
    /// their known precision being treated as zero.
    pub fn rank_of(&self, rows: &[usize], cols: &[usize]) -> usize {
        let mut a: Vec<Vec<PAdic>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        let (nr, nc) = (rows.len(), cols.len());
        let mut rank = 0;
        for c in 0..nc {
            let Some((_, r)) = (rank..nr)
                .filter_map(|r| a[r][c].valuation().map(|v| (v, r)))
                .min()
            else {
                continue;
            };
            a.swap(rank, r);
            let pivot_inv = a[rank][c].inv().expect("pivot is non-zero");
            for r in rank + 1..nr {
                if a[r][c].is_zero() {
                    continue;
                }
                let factor = &a[r][c] * &pivot_inv;
                for j in c..nc {
                    a[r][j] = &a[r][j] - &(&factor * &a[rank][j]);
                }
            }
            rank += 1;
        }
        rank
    }
}

impl Mul<&PMatrix> for &PMatrix {
    type Output = PMatrix;
    fn mul(self, rhs: &PMatrix) -> PMatrix {
        self.checked_mul(rhs).expect("matrix dimensions and primes agree")
    }
}

impl Sub<&PMatrix> for &PMatrix {
    type Output = PMatrix;
    fn sub(self, rhs: &PMatrix) -> PMatrix {
        self.checked_sub(rhs).expect("matrix dimensions agree")
    }
}

impl fmt::Display for PMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `e_k(α)`: the diagonal matrix with `α` in row `k` (one-based) and `1` elsewhere.
pub fn elementary_diag(k: usize, alpha: &PAdic, n: usize) -> Result<PMatrix> {
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange(format!("row {k} of a {n}x{n} matrix")));
    }
    if alpha.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let prec = alpha.rel_prec();
    let diag: Vec<PAdic> = (1..=n)
        .map(|i| {
            if i == k {
                alpha.clone()
            } else {
                PAdic::one(alpha.prime(), prec)
            }
        })
        .collect();
    PMatrix::diagonal(&diag)
}

/// A diagonal element `diag(x_1, …, x_n)` of the torus `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagElement {
    entries: Vec<PAdic>,
}

impl DiagElement {
    pub fn new(entries: Vec<PAdic>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInput("empty torus element".into()));
        }
        if entries.iter().any(PAdic::is_zero) {
            return Err(Error::ZeroArgument);
        }
        let p = entries[0].prime();
        if let Some(x) = entries.iter().find(|x| x.prime() != p) {
            return Err(Error::PrimeMismatch(p, x.prime()));
        }
        Ok(DiagElement { entries })
    }

    pub fn identity(n: usize, p: u32, prec: u32) -> Self {
        DiagElement {
            entries: vec![PAdic::one(p, prec); n],
        }
    }

    /// `diag(p^{k_1}, …, p^{k_n})`.
    pub fn from_valuations(vals: &[i64], p: u32, prec: u32) -> Self {
        DiagElement {
            entries: vals.iter().map(|&k| PAdic::p_power(p, k, prec)).collect(),
        }
    }

    /// `t' = diag(p, …, p, 1, …, 1)` with `j0` copies of `p`.
    pub fn t_prime(n: usize, j0: usize, p: u32, prec: u32) -> Self {
        let vals: Vec<i64> = (0..n).map(|i| i64::from(i < j0)).collect();
        Self::from_valuations(&vals, p, prec)
    }

    /// `t_0 = diag(p^{n-1}, …, p, 1)`.
    pub fn t_zero(n: usize, p: u32, prec: u32) -> Self {
        let vals: Vec<i64> = (0..n).map(|i| (n - 1 - i) as i64).collect();
        Self::from_valuations(&vals, p, prec)
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[PAdic] {
        &self.entries
    }

    pub fn valuations(&self) -> Vec<i64> {
        self.entries
            .iter()
            .map(|x| x.valuation().expect("torus entries are non-zero"))
            .collect()
    }

    /// Membership in `T₊ = {t : t N₀ t⁻¹ ⊂ N₀}`: valuations non-increasing
    /// down the diagonal.
    pub fn in_t_plus(&self) -> bool {
        self.valuations().windows(2).all(|w| w[0] >= w[1])
    }

    pub fn to_matrix(&self) -> PMatrix {
        PMatrix::diagonal(&self.entries).expect("non-empty diagonal")
    }

    pub fn inv(&self) -> Self {
        DiagElement {
            entries: self
                .entries
                .iter()
                .map(|x| x.inv().expect("torus entries are non-zero"))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        DiagElement {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = DiagElement::identity(self.n(), self.entries[0].prime(), self.precision());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn precision(&self) -> u32 {
        self.entries.iter().map(PAdic::rel_prec).max().unwrap_or(1)
    }

    /// `w⁻¹ t w`, whose `j`-th diagonal entry is `t_{w(j)}`.
    pub fn conjugate_by(&self, w: &WeylElement) -> Self {
        DiagElement {
            entries: (0..self.n()).map(|j| self.entries[w.image(j)].clone()).collect(),
        }
    }
}

/// The subgroups and patterns that [`membership`] can test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subgroup {
    /// Upper triangular invertible.
    B,
    /// Upper unipotent.
    N,
    /// Upper unipotent with integral entries.
    N0,
    /// Lower unipotent.
    NMinus,
    /// Diagonal invertible.
    T,
    /// Diagonal with valuations non-increasing down the diagonal.
    TPlus,
    /// `GL_n(Z_p)`.
    G0,
    /// `U^{(l)}`: the kernel of reduction modulo `p^l` on `G0`.
    Congruence(u32),
    /// `N_w = N ∩ w N⁻ w⁻¹`.
    NwPattern(WeylElement),
    /// `N'_w = N ∩ w N w⁻¹`.
    NPrimePattern(WeylElement),
}

#[derive(Debug)]
enum Truth {
    Yes,
    No,
    Unknown(String),
}

impl Truth {
    fn from_result(r: Result<bool>) -> Self {
        match r {
            Ok(true) => Truth::Yes,
            Ok(false) => Truth::No,
            Err(e) => Truth::Unknown(e.to_string()),
        }
    }
}

/// Conjunction over a sequence of checks: any `No` wins, then any `Unknown`.
fn all_of(checks: impl IntoIterator<Item = Truth>) -> Truth {
    let mut unknown = None;
    for t in checks {
        match t {
            Truth::No => return Truth::No,
            Truth::Unknown(msg) => {
                unknown.get_or_insert(msg);
            }
            Truth::Yes => {}
        }
    }
    unknown.map_or(Truth::Yes, Truth::Unknown)
}

fn is_zero(x: &PAdic) -> Truth {
    if x.is_zero() {
        Truth::Yes
    } else {
        Truth::No
    }
}

fn is_one(x: &PAdic) -> Truth {
    let one = PAdic::one(x.prime(), x.rel_prec().max(1));
    if x.eq_to_precision(&one) {
        Truth::Yes
    } else {
        Truth::No
    }
}

fn is_nonzero(x: &PAdic) -> Truth {
    if x.is_zero() {
        Truth::Unknown(format!("entry {x} may vanish"))
    } else {
        Truth::Yes
    }
}

fn is_integral(x: &PAdic) -> Truth {
    Truth::from_result(x.valuation_at_least(0))
}

fn has_valuation_at_least(x: &PAdic, l: i64) -> Truth {
    Truth::from_result(x.valuation_at_least(l))
}

/// Reduction modulo `p` of an integral entry, if decidable.
fn residue(x: &PAdic) -> std::result::Result<u32, String> {
    match x.valuation() {
        Some(0) => Ok(x.leading_digit().unwrap_or(0)),
        Some(_) => Ok(0),
        None if x.abs_prec() >= 1 => Ok(0),
        None => Err(format!("residue of {x} unknown")),
    }
}

/// Invertibility of an integral matrix over `F_p` from its residues.
fn residue_invertible(g: &PMatrix) -> Truth {
    let p = g.prime() as u64;
    let n = g.n();
    let mut a = Vec::with_capacity(n);
    for row in g.rows() {
        let mut r = Vec::with_capacity(n);
        for x in row {
            match residue(x) {
                Ok(d) => r.push(d as u64),
                Err(msg) => return Truth::Unknown(msg),
            }
        }
        a.push(r);
    }
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| a[r][c] != 0) else {
            return Truth::No;
        };
        a.swap(c, piv);
        let inv = modpow(a[c][c], p - 2, p);
        for r in c + 1..n {
            let factor = a[r][c] * inv % p;
            for j in c..n {
                a[r][j] = (a[r][j] + p * p - factor * a[c][j] % p) % p;
            }
        }
    }
    Truth::Yes
}

fn modpow(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % m;
        }
        a = a * a % m;
        e >>= 1;
    }
    acc
}

fn membership_truth(g: &PMatrix, s: &Subgroup) -> Truth {
    let n = g.n();
    let strictly_lower = || {
        (0..n)
            .flat_map(move |i| (0..i).map(move |j| (i, j)))
            .map(|(i, j)| is_zero(g.get(i, j)))
    };
    let strictly_upper = || {
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| is_zero(g.get(i, j)))
    };
    let unit_diagonal = || (0..n).map(|i| is_one(g.get(i, i)));
    let nonzero_diagonal = || (0..n).map(|i| is_nonzero(g.get(i, i)));
    let integral = || g.entries().iter().map(is_integral);
    match s {
        Subgroup::B => all_of(strictly_lower().chain(nonzero_diagonal())),
        Subgroup::N => all_of(strictly_lower().chain(unit_diagonal())),
        Subgroup::N0 => all_of(strictly_lower().chain(unit_diagonal()).chain(integral())),
        Subgroup::NMinus => all_of(strictly_upper().chain(unit_diagonal())),
        Subgroup::T => all_of(
            strictly_lower()
                .chain(strictly_upper())
                .chain(nonzero_diagonal()),
        ),
        Subgroup::TPlus => match membership_truth(g, &Subgroup::T) {
            Truth::Yes => {
                let vals: Vec<i64> = (0..n)
                    .map(|i| g.get(i, i).valuation().expect("checked non-zero"))
                    .collect();
                if vals.windows(2).all(|w| w[0] >= w[1]) {
                    Truth::Yes
                } else {
                    Truth::No
                }
            }
            other => other,
        },
        Subgroup::G0 => match all_of(integral()) {
            Truth::Yes => residue_invertible(g),
            other => other,
        },
        Subgroup::Congruence(l) => {
            let l = i64::from(*l);
            let checks = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| {
                let x = g.get(i, j);
                if i == j {
                    let one = PAdic::one(x.prime(), x.rel_prec().max(1));
                    has_valuation_at_least(&(x - &one), l)
                } else {
                    has_valuation_at_least(x, l)
                }
            });
            all_of(checks)
        }
        Subgroup::NwPattern(w) | Subgroup::NPrimePattern(w) => {
            if w.n() != n {
                return Truth::No;
            }
            let keep_inversions = matches!(s, Subgroup::NwPattern(_));
            let winv = w.inverse();
            let outside = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| (winv.image(i) > winv.image(j)) != keep_inversions)
                .map(|(i, j)| is_zero(g.get(i, j)));
            all_of(strictly_lower().chain(unit_diagonal()).chain(outside))
        }
    }
}

/// Decides `g ∈ S`; undecidable cases surface as `InsufficientPrecision`.
pub fn membership(g: &PMatrix, s: &Subgroup) -> Result<bool> {
    match membership_truth(g, s) {
        Truth::Yes => Ok(true),
        Truth::No => Ok(false),
        Truth::Unknown(msg) => Err(Error::InsufficientPrecision(msg)),
    }
}
