//! Point values of f_w against a brute-force oracle: exact rational LU of
//! w⁻¹g (g ∈ U^{(1)}wB iff w⁻¹g = L·U with L unipotent lower triangular,
//! L ≡ 1 mod p; then f_w(g) = χ⁻¹(diag U)), with its own F_p arithmetic.

use std::sync::Arc;

use bruhat_core::checks::build_counterexample;
use bruhat_core::{eval_fw, Character, PMatrix, WeylElement};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

type Q = BigRational;
type Mat = Vec<Vec<Q>>;

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(x: u64, p: u64) -> u64 {
    pow_mod(x, p - 2, p)
}

fn split(x: &BigInt, p: u64) -> (i64, u64) {
    let pb = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    while (&x % &pb).is_zero() {
        x /= &pb;
        v += 1;
    }
    let r: u64 = (&x % &pb).try_into().unwrap();
    (v, r)
}

/// (valuation, residue of the unit part) of a non-zero rational.
fn val_res(x: &Q, p: u64) -> (i64, u64) {
    let (vn, rn) = split(x.numer(), p);
    let (vd, rd) = split(x.denom(), p);
    let mut r = rn * inv_mod(rd, p) % p;
    if x.is_negative() {
        r = (p - r) % p;
    }
    (vn - vd, r)
}

struct Chi {
    p: u64,
    c: Vec<u64>,
    e: Vec<u64>,
}

impl Chi {
    fn component(&self, i: usize, x: &Q) -> u64 {
        let (v, r) = val_res(x, self.p);
        let cv = if v >= 0 {
            pow_mod(self.c[i], v as u64, self.p)
        } else {
            inv_mod(pow_mod(self.c[i], (-v) as u64, self.p), self.p)
        };
        cv * pow_mod(r, self.e[i], self.p) % self.p
    }

    fn library(&self) -> Arc<Character> {
        let cs: Vec<i64> = self.c.iter().map(|&c| c as i64).collect();
        Arc::new(Character::over_prime_field(self.p as u32, &cs, &self.e).unwrap())
    }
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).fold(Q::zero(), |s, k| s + &a[i][k] * &b[k][j])).collect())
        .collect()
}

fn from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

/// f_w(g) for `w` given by zero-based images.
fn f_w(chi: &Chi, w: &[usize], g: &Mat) -> u64 {
    let n = g.len();
    let h: Mat = (0..n).map(|i| g[w[i]].clone()).collect();
    let mut l = vec![vec![Q::zero(); n]; n];
    let mut u = vec![vec![Q::zero(); n]; n];
    for k in 0..n {
        for j in k..n {
            let s = (0..k).fold(h[k][j].clone(), |s, t| s - &l[k][t] * &u[t][j]);
            u[k][j] = s;
        }
        if u[k][k].is_zero() {
            return 0;
        }
        for i in k + 1..n {
            let s = (0..k).fold(h[i][k].clone(), |s, t| s - &l[i][t] * &u[t][k]);
            let x = s / &u[k][k];
            if !x.is_zero() && val_res(&x, chi.p).0 < 1 {
                return 0;
            }
            l[i][k] = x;
        }
    }
    (0..n).fold(1, |acc, k| acc * inv_mod(chi.component(k, &u[k][k]), chi.p) % chi.p)
}

fn n_ab(a: i64, b: i64) -> Mat {
    from_i64(&[vec![1, a, b], vec![0, 1, 0], vec![0, 0, 1]])
}

/// f(z) for the GL_3 element built from h = Σ n(a,b)·diag(p²,1,1)·f_{w2}.
fn counterexample_at_z(chi: &Chi) -> u64 {
    let p = chi.p as i64;
    let w2 = [1, 0, 2];
    let w5 = [1, 2, 0];
    let tinv: Mat = vec![
        vec![Q::new(BigInt::one(), BigInt::from(p * p)), q(0), q(0)],
        vec![q(0), q(1), q(0)],
        vec![q(0), q(0), q(1)],
    ];
    let h = |x: &Mat| -> u64 {
        let mut s = 0;
        for a in 0..p * p {
            for b in 0..p * p {
                let y = mul(&tinv, &mul(&n_ab(-a, -b), x));
                s = (s + f_w(chi, &w2, &y)) % chi.p;
            }
        }
        s
    };
    let z = from_i64(&[vec![p * p, 0, 1], vec![1, 0, 0], vec![p, 1, 0]]);
    let mut corr = 0;
    for a in 0..p * p * p {
        for b in 0..p * p * p {
            let v = f_w(chi, &w5, &mul(&n_ab(-a, -b), &z));
            if v != 0 {
                let r5 = from_i64(&[vec![a, b, 1], vec![1, 0, 0], vec![0, 1, 0]]);
                corr = (corr + h(&r5) * v) % chi.p;
            }
        }
    }
    let scale = inv_mod(chi.component(2, &q(p * p)), chi.p);
    (h(&z) + chi.p - scale * corr % chi.p) % chi.p
}

fn kk_value(x: &bruhat_core::KKElem) -> u64 {
    x.coeffs().first().copied().unwrap_or(0) as u64
}

#[test]
fn counterexample_value_at_z_is_pinned() {
    // c = (1,1,1), e = (0,1,0): f(z) = (-1)^{e2} c2 c3 = -1 = 2 in F_3
    let chi = Chi { p: 3, c: vec![1, 1, 1], e: vec![0, 1, 0] };
    assert_eq!(counterexample_at_z(&chi), 2);
    let lib = build_counterexample(chi.library(), 32).unwrap();
    assert_eq!(kk_value(&lib.f.eval(&lib.z).unwrap()), 2);
}

#[test]
fn counterexample_value_matches_closed_form() {
    for (p, c, e) in [
        (3u64, vec![1u64, 2, 1], vec![0u64, 1, 0]),
        (3, vec![2, 2, 2], vec![1, 0, 1]),
        (5, vec![1, 3, 4], vec![0, 1, 3]),
    ] {
        let chi = Chi { p, c: c.clone(), e: e.clone() };
        let sign = if e[1] % 2 == 1 { p - 1 } else { 1 };
        let expected = sign * c[1] % p * c[2] % p;
        assert_eq!(counterexample_at_z(&chi), expected, "p={p} c={c:?} e={e:?}");
        if p == 3 {
            let lib = build_counterexample(chi.library(), 32).unwrap();
            assert_eq!(kk_value(&lib.f.eval(&lib.z).unwrap()), expected);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn eval_fw_matches_rational_oracle(
        entries in proptest::collection::vec(-40i64..40, 9),
        widx in 0usize..6,
        pidx in 0usize..2,
        e in proptest::collection::vec(0u64..4, 3),
    ) {
        let p = [3u64, 5][pidx];
        let rows: Vec<Vec<i64>> = entries.chunks(3).map(|c| c.to_vec()).collect();
        let g = from_i64(&rows);
        let chi = Chi { p, c: vec![1, 2, p - 1], e: e.iter().map(|x| x % (p - 1)).collect() };
        let w = &WeylElement::all(3)[widx];
        let gm = PMatrix::from_i64_rows(&rows, p as u32, 40).unwrap();
        match eval_fw(&chi.library(), w, &gm) {
            Ok(v) => prop_assert_eq!(kk_value(&v), f_w(&chi, w.images(), &g)),
            Err(e) => {
                // only singular inputs may fail
                let det = &g[0][0] * (&g[1][1] * &g[2][2] - &g[1][2] * &g[2][1])
                    - &g[0][1] * (&g[1][0] * &g[2][2] - &g[1][2] * &g[2][0])
                    + &g[0][2] * (&g[1][0] * &g[2][1] - &g[1][1] * &g[2][0]);
                prop_assert!(det.is_zero(), "{e}");
            }
        }
    }
}
