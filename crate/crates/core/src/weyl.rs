//! The symmetric group `S_n` as the Weyl group of `GL_n`: lengths, the strong
//! Bruhat order, total orderings refining it, and the position sets of the
//! unipotent subgroups attached to a permutation.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::PMatrix;
use crate::padic::PAdic;

/// A permutation `w` of `{0, …, n-1}` stored by its images; displayed
/// one-based in one-line notation (`"2,3,1"`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    images: Vec<usize>,
}

impl WeylElement {
    /// From zero-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!(
                    "{images:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(WeylElement { images })
    }

    /// From one-based one-line notation, e.g. `[2, 3, 1]`.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidInput(format!(
                "{images:?} is not one-based"
            )));
        }
        Self::new(images.iter().map(|&i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        WeylElement {
            images: (0..n).collect(),
        }
    }

    /// The longest element `w₀`, reversing the order.
    pub fn longest(n: usize) -> Self {
        WeylElement {
            images: (0..n).rev().collect(),
        }
    }

    /// The transposition of the (zero-based) points `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        WeylElement { images }
    }

    /// All of `S_n`, lexicographic in the images.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(WeylElement {
                images: current.clone(),
            });
            // next permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1])
            else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        out
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Zero-based image `w(j)`.
    pub fn image(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|i| i + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.n()];
        for (j, &i) in self.images.iter().enumerate() {
            images[i] = j;
        }
        WeylElement { images }
    }

    /// `self ∘ other`, matching the product of permutation matrices.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n());
        WeylElement {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        }
    }

    /// `w · (a b)`: swaps the images at positions `a` and `b`.
    pub fn right_transpose(&self, a: usize, b: usize) -> Self {
        let mut images = self.images.clone();
        images.swap(a, b);
        WeylElement { images }
    }

    /// Length, i.e. the number of inversions.
    pub fn length(&self) -> usize {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.images[i] > self.images[j])
            .count()
    }

    pub fn to_matrix(&self, p: u32, prec: u32) -> PMatrix {
        PMatrix::permutation(self, p, prec)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_line().iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for WeylElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidInput(format!("bad permutation {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_line(&images)
    }
}

/// Strong Bruhat order `u ⪯ w` by the sorted-prefix (tableau) criterion:
/// for every `k`, the sorted first `k` images of `u` are dominated entrywise
/// by those of `w`.
pub fn bruhat_leq(u: &WeylElement, w: &WeylElement) -> Result<bool> {
    if u.n() != w.n() {
        return Err(Error::DimensionMismatch(u.n(), w.n()));
    }
    let n = u.n();
    let mut pu: Vec<usize> = Vec::with_capacity(n);
    let mut pw: Vec<usize> = Vec::with_capacity(n);
    for k in 0..n {
        let pos_u = pu.partition_point(|&x| x < u.images[k]);
        pu.insert(pos_u, u.images[k]);
        let pos_w = pw.partition_point(|&x| x < w.images[k]);
        pw.insert(pos_w, w.images[k]);
        if pu.iter().zip(&pw).any(|(a, b)| a > b) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn bruhat_lt(u: &WeylElement, w: &WeylElement) -> Result<bool> {
    Ok(u != w && bruhat_leq(u, w)?)
}

/// Everything reachable from `w` by right multiplication with transpositions
/// that strictly decrease the length at every step (including `w` itself).
pub fn chain_down_set(w: &WeylElement) -> HashSet<WeylElement> {
    let n = w.n();
    let mut seen = HashSet::new();
    let mut stack = vec![w.clone()];
    seen.insert(w.clone());
    while let Some(x) = stack.pop() {
        let lx = x.length();
        for a in 0..n {
            for b in a + 1..n {
                let y = x.right_transpose(a, b);
                if y.length() < lx && seen.insert(y.clone()) {
                    stack.push(y);
                }
            }
        }
    }
    seen
}

/// The transposition-chain definition of `⪯`, for all pairs of `S_n` at once.
pub struct ChainOracle {
    down: HashMap<WeylElement, HashSet<WeylElement>>,
}

impl ChainOracle {
    pub fn new(n: usize) -> Self {
        ChainOracle {
            down: WeylElement::all(n)
                .into_iter()
                .map(|w| {
                    let d = chain_down_set(&w);
                    (w, d)
                })
                .collect(),
        }
    }

    pub fn leq(&self, u: &WeylElement, w: &WeylElement) -> bool {
        self.down.get(w).is_some_and(|d| d.contains(u))
    }
}

/// Named total orderings of `W` refining `⪯`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderingPreset {
    /// By length, then lexicographically by one-line images.
    #[default]
    Default,
    /// The `n = 3` chain `id ≺ s₁ ≺ s₂ ≺ [3,1,2] ≺ [2,3,1] ≺ w₀` used by the
    /// `M₀ ∩ V₅` counterexample.
    PaperN3,
}

impl FromStr for OrderingPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(OrderingPreset::Default),
            "paper-n3" => Ok(OrderingPreset::PaperN3),
            other => Err(Error::InvalidPreset(other.to_string())),
        }
    }
}

impl fmt::Display for OrderingPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderingPreset::Default => "default",
            OrderingPreset::PaperN3 => "paper-n3",
        })
    }
}

/// An enumeration `w_1, …, w_{n!}` of `W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylOrdering {
    elements: Vec<WeylElement>,
}

impl WeylOrdering {
    pub fn from_elements(elements: Vec<WeylElement>) -> Result<Self> {
        let ord = WeylOrdering { elements };
        ord.validate()?;
        Ok(ord)
    }

    fn validate(&self) -> Result<()> {
        let Some(first) = self.elements.first() else {
            return Err(Error::InvalidInput("empty ordering".into()));
        };
        let n = first.n();
        let distinct: BTreeSet<_> = self.elements.iter().collect();
        if distinct.len() != self.elements.len() || self.elements.len() != factorial(n) {
            return Err(Error::InvalidInput("ordering must list W exactly once".into()));
        }
        for (i, later) in self.elements.iter().enumerate() {
            for earlier_or_not in &self.elements[i + 1..] {
                if bruhat_lt(earlier_or_not, later)? {
                    return Err(Error::InvalidInput(format!(
                        "{earlier_or_not} ≺ {later} but comes later"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    /// `w_m`, one-based.
    pub fn element(&self, m: usize) -> &WeylElement {
        &self.elements[m - 1]
    }

    /// The one-based `m` with `w = w_m`.
    pub fn index_of(&self, w: &WeylElement) -> Option<usize> {
        self.elements.iter().position(|x| x == w).map(|i| i + 1)
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

pub fn standard_ordering(n: usize, preset: OrderingPreset) -> Result<WeylOrdering> {
    match preset {
        OrderingPreset::Default => {
            let mut all = WeylElement::all(n);
            all.sort_by_key(|w| (w.length(), w.images.clone()));
            WeylOrdering::from_elements(all)
        }
        OrderingPreset::PaperN3 => {
            if n != 3 {
                return Err(Error::InvalidPreset(format!("paper-n3 needs n = 3, got {n}")));
            }
            let chain = [[1, 2, 3], [2, 1, 3], [1, 3, 2], [3, 1, 2], [2, 3, 1], [3, 2, 1]];
            WeylOrdering::from_elements(
                chain
                    .iter()
                    .map(|c| WeylElement::from_one_line(c))
                    .collect::<Result<_>>()?,
            )
        }
    }
}

/// A set of strictly upper triangular (zero-based) positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositionMask {
    n: usize,
    positions: BTreeSet<(usize, usize)>,
}

impl PositionMask {
    fn from_filter(n: usize, keep: impl Fn(usize, usize) -> bool) -> Self {
        PositionMask {
            n,
            positions: (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| keep(i, j))
                .collect(),
        }
    }

    /// Positions of `N_w`: `w⁻¹(i) > w⁻¹(j)`.
    pub fn n_w(w: &WeylElement) -> Self {
        let winv = w.inverse();
        Self::from_filter(w.n(), |i, j| winv.image(i) > winv.image(j))
    }

    /// Positions of `N'_w`: `w⁻¹(i) < w⁻¹(j)`.
    pub fn n_prime_w(w: &WeylElement) -> Self {
        let winv = w.inverse();
        Self::from_filter(w.n(), |i, j| winv.image(i) < winv.image(j))
    }

    /// Positions of `N^{(1)}_{j0}`: `i ≤ j0 ≤ j` in one-based indices.
    pub fn n1_j0(n: usize, j0: usize) -> Self {
        Self::from_filter(n, |i, j| i < j0 && j + 1 >= j0)
    }

    /// Positions rescaled by `t' = diag(p, …, p, 1, …, 1)` (`j0` copies of
    /// `p`): one-based `i ≤ j0 < j`.
    pub fn t_prime_scaled(n: usize, j0: usize) -> Self {
        Self::from_filter(n, |i, j| i < j0 && j >= j0)
    }

    pub fn all_upper(n: usize) -> Self {
        Self::from_filter(n, |_, _| true)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        PositionMask {
            n: self.n,
            positions: self.positions.intersection(&other.positions).copied().collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        PositionMask {
            n: self.n,
            positions: self.positions.union(&other.positions).copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.positions.contains(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.positions.iter().copied()
    }
}

/// Coset representatives of `N_{w,j0} / t' N_{w,j0} t'⁻¹`: unipotent
/// matrices with an entry `p·a`, `a ∈ {0, …, p-1}`, at each position of
/// `N_w` with one-based `i ≤ j0 < j`, and zero elsewhere.
pub fn theta_representatives(
    w: &WeylElement,
    j0: usize,
    p: u32,
    prec: u32,
) -> Result<Vec<PMatrix>> {
    let n = w.n();
    if j0 == 0 || j0 >= n {
        return Err(Error::IndexOutOfRange(format!("j0 = {j0} for n = {n}")));
    }
    let scaled: Vec<(usize, usize)> = PositionMask::n_w(w)
        .intersect(&PositionMask::t_prime_scaled(n, j0))
        .iter()
        .collect();
    let count = (p as u64).pow(scaled.len() as u32);
    let mut out = Vec::with_capacity(count as usize);
    for mut idx in 0..count {
        let mut m = PMatrix::identity(n, p, prec);
        for &(i, j) in &scaled {
            let a = (idx % p as u64) as i64;
            idx /= p as u64;
            m.set(i, j, PAdic::from_i64(a * p as i64, p, prec)?);
        }
        out.push(m);
    }
    Ok(out)
}
