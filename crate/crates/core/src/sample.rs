//! Seeded random elements of the groups and patterns used by the checks.
//!
//! Every trial draws from its own stream, `ChaCha8(seed)` on stream `index`,
//! so results do not depend on the order trials are run in.

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::matrix::{DiagElement, PMatrix};
use crate::padic::PAdic;
use crate::weyl::{PositionMask, WeylElement};

pub type TrialRng = ChaCha8Rng;

pub fn trial_rng(seed: u64, index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Shape of sampled entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sampler {
    pub p: u32,
    pub prec: u32,
    /// Valuations of generic entries are drawn from `[-V, V]`.
    pub valwindow: i64,
    /// Units have at most this many base-`p` digits.
    pub max_digits: u32,
}

impl Sampler {
    pub fn new(p: u32, prec: u32, valwindow: i64) -> Self {
        Sampler {
            p,
            prec,
            valwindow,
            max_digits: 6,
        }
    }

    /// A unit with a random number of digits, leading digit non-zero.
    fn unit(&self, rng: &mut TrialRng) -> BigUint {
        let len = rng.gen_range(1..=self.max_digits.min(self.prec).max(1));
        let p = self.p;
        let mut u = BigUint::from(rng.gen_range(1..p));
        let mut scale = BigUint::from(p);
        for _ in 1..len {
            u += &scale * BigUint::from(rng.gen_range(0..p));
            scale *= p;
        }
        u
    }

    /// `p^v·u` for a random unit `u`.
    pub fn with_valuation(&self, rng: &mut TrialRng, v: i64) -> PAdic {
        let u = self.unit(rng);
        PAdic::from_unit(self.p, v, &u, self.prec).expect("sampled unit")
    }

    /// Non-zero with valuation in `[lo, hi]`.
    pub fn nonzero_in(&self, rng: &mut TrialRng, lo: i64, hi: i64) -> PAdic {
        let v = rng.gen_range(lo..=hi);
        self.with_valuation(rng, v)
    }

    /// Valuation at least `lo` (and at most `lo + V`), zero with probability 1/5.
    pub fn at_least(&self, rng: &mut TrialRng, lo: i64) -> PAdic {
        if rng.gen_ratio(1, 5) {
            self.zero()
        } else {
            self.nonzero_in(rng, lo, lo + self.valwindow.max(1))
        }
    }

    /// Generic entry: zero with probability 1/5, else valuation in `[-V, V]`.
    pub fn generic(&self, rng: &mut TrialRng) -> PAdic {
        if rng.gen_ratio(1, 5) {
            self.zero()
        } else {
            self.nonzero_in(rng, -self.valwindow, self.valwindow)
        }
    }

    pub fn zero(&self) -> PAdic {
        PAdic::zero(self.p, self.prec as i64)
    }

    pub fn one(&self) -> PAdic {
        PAdic::one(self.p, self.prec)
    }

    fn build(&self, n: usize, mut f: impl FnMut(usize, usize) -> PAdic) -> PMatrix {
        PMatrix::from_rows(
            (0..n)
                .map(|i| (0..n).map(|j| f(i, j)).collect())
                .collect(),
        )
        .expect("square")
    }

    /// A random element of `GL_n(Q_p)`.
    pub fn gl(&self, rng: &mut TrialRng, n: usize) -> PMatrix {
        loop {
            let g = self.build(n, |_, _| self.generic(rng));
            if g.rank_of(&(0..n).collect::<Vec<_>>(), &(0..n).collect::<Vec<_>>()) == n {
                return g;
            }
        }
    }

    /// Invertible upper triangular.
    pub fn borel(&self, rng: &mut TrialRng, n: usize) -> PMatrix {
        self.build(n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.zero(),
            std::cmp::Ordering::Equal => self.nonzero_in(rng, -self.valwindow, self.valwindow),
            std::cmp::Ordering::Less => self.generic(rng),
        })
    }

    /// Unipotent upper triangular with integral entries.
    pub fn n0(&self, rng: &mut TrialRng, n: usize) -> PMatrix {
        self.unipotent_on(rng, &PositionMask::all_upper(n), 0)
    }

    /// Unipotent with entries of valuation `≥ lo` at the positions of `mask`.
    pub fn unipotent_on(&self, rng: &mut TrialRng, mask: &PositionMask, lo: i64) -> PMatrix {
        let n = mask.dim();
        self.build(n, |i, j| {
            if i == j {
                self.one()
            } else if mask.contains(i, j) {
                self.at_least(rng, lo)
            } else {
                self.zero()
            }
        })
    }

    /// Unipotent upper triangular supported on `N_w`, entries of valuation in `[-V, V]`.
    pub fn n_w(&self, rng: &mut TrialRng, w: &WeylElement) -> PMatrix {
        let mask = PositionMask::n_w(w);
        self.build(w.n(), |i, j| {
            if i == j {
                self.one()
            } else if mask.contains(i, j) {
                self.generic(rng)
            } else {
                self.zero()
            }
        })
    }

    /// `diag(x_1, …, x_n)` with non-increasing valuations in `[-V, V]`.
    pub fn t_plus(&self, rng: &mut TrialRng, n: usize) -> DiagElement {
        let mut vals: Vec<i64> = (0..n)
            .map(|_| rng.gen_range(-self.valwindow..=self.valwindow))
            .collect();
        vals.sort_unstable_by(|a, b| b.cmp(a));
        DiagElement::new(vals.iter().map(|&v| self.with_valuation(rng, v)).collect())
            .expect("non-zero diagonal")
    }

    /// An element of `U^{(l)}`: identity plus `p^l` times an integral matrix.
    pub fn congruence(&self, rng: &mut TrialRng, n: usize, l: i64) -> PMatrix {
        self.build(n, |i, j| {
            let x = self.at_least(rng, l);
            if i == j {
                x.add_ref(&self.one())
            } else {
                x
            }
        })
    }

    /// A random element of `R_w`. With `level = Some(l)` every free entry
    /// has valuation `≥ l`, so the result lies in `U^{(l)}w`.
    pub fn r_pattern(&self, rng: &mut TrialRng, w: &WeylElement, level: Option<i64>) -> PMatrix {
        let winv = w.inverse();
        self.build(w.n(), |i, j| match winv.image(i).cmp(&j) {
            std::cmp::Ordering::Equal => self.one(),
            std::cmp::Ordering::Less => self.zero(),
            std::cmp::Ordering::Greater => {
                let base = if w.image(j) > i { 0 } else { 1 };
                self.at_least(rng, level.map_or(base, |l| l.max(base)))
            }
        })
    }

    /// An element of `R_w` whose `o`-class entries have valuation `≥ o_level`
    /// and whose `πo`-class entries have valuation `≥ pi_level`.
    pub fn r_pattern_levels(
        &self,
        rng: &mut TrialRng,
        w: &WeylElement,
        o_level: i64,
        pi_level: i64,
    ) -> PMatrix {
        let winv = w.inverse();
        self.build(w.n(), |i, j| match winv.image(i).cmp(&j) {
            std::cmp::Ordering::Equal => self.one(),
            std::cmp::Ordering::Less => self.zero(),
            std::cmp::Ordering::Greater if w.image(j) > i => self.at_least(rng, o_level.max(0)),
            std::cmp::Ordering::Greater => self.at_least(rng, pi_level.max(1)),
        })
    }

    /// `n_w · w · b`, a point of the Bruhat cell `BwB`.
    pub fn cell(&self, rng: &mut TrialRng, w: &WeylElement) -> PMatrix {
        let nw = self.n_w(rng, w);
        let b = self.borel(rng, w.n());
        &(&nw * &w.to_matrix(self.p, self.prec)) * &b
    }

    /// `r · b` with `r` a random element of `R_w`: a point of `U_w`.
    pub fn uw_point(&self, rng: &mut TrialRng, w: &WeylElement) -> PMatrix {
        let r = self.r_pattern(rng, w, None);
        let b = self.borel(rng, w.n());
        &r * &b
    }
}

/// `sample_cell(w)` for trial `index`: a point of `BwB`.
pub fn sample_cell(w: &WeylElement, sampler: &Sampler, seed: u64, index: u64) -> PMatrix {
    sampler.cell(&mut trial_rng(seed, index), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{bruhat_cell, matches_pattern, rb_decompose};
    use crate::matrix::{membership, Subgroup};

    #[test]
    fn streams_are_reproducible() {
        let s = Sampler::new(3, 32, 2);
        let a = s.gl(&mut trial_rng(7, 11), 3);
        let b = s.gl(&mut trial_rng(7, 11), 3);
        let c = s.gl(&mut trial_rng(7, 12), 3);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sampled_shapes() {
        let s = Sampler::new(5, 32, 2);
        let mut rng = trial_rng(1, 0);
        for _ in 0..20 {
            assert!(membership(&s.n0(&mut rng, 4), &Subgroup::N0).unwrap());
            assert!(membership(&s.borel(&mut rng, 4), &Subgroup::B).unwrap());
            assert!(s.t_plus(&mut rng, 4).in_t_plus());
            assert!(membership(&s.congruence(&mut rng, 3, 2), &Subgroup::Congruence(2)).unwrap());
        }
    }

    #[test]
    fn cells_and_patterns() {
        let s = Sampler::new(3, 32, 2);
        for (k, w) in WeylElement::all(3).iter().enumerate() {
            let g = sample_cell(w, &s, 5, k as u64);
            assert_eq!(&bruhat_cell(&g).unwrap(), w);
            let mut rng = trial_rng(5, 100 + k as u64);
            let r = s.r_pattern(&mut rng, w, None);
            assert!(matches_pattern(&r, w).unwrap());
            let d = rb_decompose(&r).unwrap();
            assert_eq!(&d.w, w);
            assert!(d.r.eq_to_precision(&r));
        }
    }

    #[test]
    fn unit_digits_are_exact() {
        let s = Sampler::new(2, 16, 0);
        let x = s.with_valuation(&mut trial_rng(0, 0), 3);
        assert_eq!(x.valuation(), Some(3));
        assert_eq!(x.rel_prec(), 16);
    }
}
