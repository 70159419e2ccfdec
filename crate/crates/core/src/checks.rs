//! Extensional checks of identities between elements of `M₀`: both sides are
//! evaluated on sampled points of the relevant support.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::decomp::{classify_uw, decompose_in_ulwb};
use crate::error::{Error, Result};
use crate::json::{kk_to_json, matrix_to_json};
use crate::matrix::{DiagElement, PMatrix};
use crate::padic::PAdic;
use crate::report::{derive_seed, run_trials, Outcome, Report};
use crate::residue::KKElem;
use crate::sample::{Sampler, TrialRng};
use crate::series::{eval_fw, Character, PSElement, Term};
use crate::weyl::{bruhat_leq, standard_ordering, theta_representatives, OrderingPreset, PositionMask, WeylElement, WeylOrdering};

fn down_set(w: &WeylElement) -> Vec<WeylElement> {
    WeylElement::all(w.n())
        .into_iter()
        .filter(|u| bruhat_leq(u, w).expect("same n"))
        .collect()
}

/// A point of `∪_{w' ⪯ w} U_{w'}`: cycles through the lower elements and
/// three samplers (Bruhat cell, `R_{w'}·B`, `U^{(1)}w'·B`).
fn lower_point(s: &Sampler, rng: &mut TrialRng, lower: &[WeylElement], idx: u64) -> PMatrix {
    let k = lower.len() as u64;
    let w = &lower[(idx % k) as usize];
    match (idx / k) % 3 {
        0 => s.cell(rng, w),
        1 => s.uw_point(rng, w),
        _ => {
            let r = s.r_pattern(rng, w, Some(1));
            &r * &s.borel(rng, w.n())
        }
    }
}

fn tag(nonzero: bool) -> Outcome {
    if nonzero {
        Outcome::PassTagged("nonzero_values")
    } else {
        Outcome::Pass
    }
}

fn compare(
    lhs: Result<KKElem>,
    rhs: Result<KKElem>,
    input: impl FnOnce() -> Value,
) -> Outcome {
    match (lhs, rhs) {
        (Ok(a), Ok(b)) if a == b => tag(!a.is_zero()),
        (Ok(a), Ok(b)) => Outcome::check(false, input, kk_to_json(&a), kk_to_json(&b)),
        (Err(e), _) | (_, Err(e)) => Outcome::from_error(e, input()),
    }
}

/// `g = Σ_{m ∈ Θ_{w,j0}} m t' f_w` together with `χ(w⁻¹ t' w)`.
pub fn theta_sum(
    chi: &Arc<Character>,
    w: &WeylElement,
    j0: usize,
    p: u32,
    prec: u32,
) -> Result<(PSElement, KKElem)> {
    let n = w.n();
    let t = DiagElement::t_prime(n, j0, p, prec);
    let mut g = PSElement::zero(chi.clone());
    for m in theta_representatives(w, j0, p, prec)? {
        g.add_term(chi.field().one(), m, t.clone(), w.clone())?;
    }
    let factor = chi.eval_conjugate(&t, w)?;
    Ok((g, factor))
}

/// `χ(w⁻¹t'w)·f_w = Σ_Θ m t' f_w` on `∪_{w'⪯w} U_{w'}`, and the sum is
/// invariant under left translation by `U^{(1)}`.
pub fn lemma_theta_check(
    chi: &Arc<Character>,
    w: &WeylElement,
    j0: usize,
    s: &Sampler,
    seed: u64,
    trials: u64,
) -> Result<Report> {
    let (g, factor) = theta_sum(chi, w, j0, s.p, s.prec)?;
    let lower = down_set(w);
    let input = |x: &PMatrix| json!({"w": w.to_string(), "j0": j0, "p": s.p, "x": matrix_to_json(x)});
    let mut report = Report::new("theta-lemma");
    let seed_a = derive_seed(seed, &format!("theta-a {w} {j0}"));
    let a = run_trials("theta-lemma", seed_a, trials, |i, rng| {
        let x = lower_point(s, rng, &lower, i);
        let lhs = eval_fw(chi, w, &x).map(|v| &factor * &v);
        compare(lhs, g.eval(&x), || input(&x))
    });
    report.absorb("restriction", a);
    let reps = theta_representatives(w, j0, s.p, s.prec)?;
    let tp = DiagElement::t_prime(w.n(), j0, s.p, s.prec).to_matrix();
    let all = WeylElement::all(w.n());
    let seed_b = derive_seed(seed, &format!("theta-b {w} {j0}"));
    let b = run_trials("theta-lemma", seed_b, trials, |i, rng| {
        // half the points sit in the support of the sum
        let x = if i % 2 == 0 {
            use rand::Rng;
            let m = &reps[rng.gen_range(0..reps.len())];
            let r = s.r_pattern(rng, w, Some(1));
            let y = &r * &s.borel(rng, w.n());
            &(m * &tp) * &y
        } else {
            s.uw_point(rng, &all[(i / 2) as usize % all.len()])
        };
        let u = s.congruence(rng, w.n(), 1);
        let ux = &u * &x;
        compare(g.eval(&ux), g.eval(&x), || {
            json!({"w": w.to_string(), "j0": j0, "p": s.p, "x": matrix_to_json(&x), "u": matrix_to_json(&u)})
        })
    });
    report.absorb("u1_invariance", b);
    report.detail("representatives", reps.len() as u64);
    Ok(report)
}

/// `n' t f_w` against `t f_w` for `n' ∈ N'_w ∩ N₀`, `t ∈ T₊`, at points of
/// `∪_{w'⪯w} U_{w'}`. Both vanish below `U_w`. On `U_w` they agree once
/// `t⁻¹n't` is integral; even trials draw such `n'`, odd trials draw `n'`
/// freely and only count disagreements on `U_w` (`top_cell_mismatch`).
pub fn nprime_invariance_check(
    chi: &Arc<Character>,
    w: &WeylElement,
    s: &Sampler,
    seed: u64,
    trials: u64,
) -> Result<Report> {
    let n = w.n();
    let lower = down_set(w);
    let mask = PositionMask::n_prime_w(w);
    let one = chi.field().one();
    let id = PMatrix::identity(n, s.p, s.prec);
    let seed = derive_seed(seed, &format!("nprime {w}"));
    let report = run_trials("nprime-invariance", seed, trials, |i, rng| {
        let t = s.t_plus(rng, n);
        let tm = t.to_matrix();
        let restricted = i % 2 == 0;
        let np = {
            let m = s.unipotent_on(rng, &mask, 0);
            if restricted {
                &(&tm * &m) * &t.inv().to_matrix()
            } else {
                m
            }
        };
        let x = if i % 4 >= 2 {
            // t·U^{(1)}wB, where t f_w is non-zero
            let r = s.r_pattern(rng, w, Some(1));
            &tm * &(&r * &s.borel(rng, n))
        } else {
            lower_point(s, rng, &lower, i / 4)
        };
        let input = || {
            json!({
                "w": w.to_string(),
                "p": s.p,
                "x": matrix_to_json(&x),
                "nprime": matrix_to_json(&np),
                "t": matrix_to_json(&tm),
            })
        };
        let top = match classify_uw(&x) {
            Ok(c) if c == *w => true,
            Ok(c) if bruhat_leq(&c, w).unwrap_or(false) => false,
            Ok(_) => return Outcome::PassTagged("outside_domain"),
            Err(e) => return Outcome::from_error(e, input()),
        };
        let lhs = Term::new(one.clone(), np.clone(), t.clone(), w.clone())
            .and_then(|term| term.eval_basis(chi, &x));
        let rhs = Term::new(one.clone(), id.clone(), t.clone(), w.clone())
            .and_then(|term| term.eval_basis(chi, &x));
        if !top {
            let zero = chi.field().zero();
            return match (lhs, rhs) {
                (Ok(a), Ok(b)) if a.is_zero() && b.is_zero() => Outcome::PassTagged("lower_cell"),
                (Ok(a), Ok(b)) => Outcome::check(
                    false,
                    input,
                    json!([kk_to_json(&zero), kk_to_json(&zero)]),
                    json!([kk_to_json(&a), kk_to_json(&b)]),
                ),
                (Err(e), _) | (_, Err(e)) => Outcome::from_error(e, input()),
            };
        }
        match (lhs, rhs) {
            (Ok(a), Ok(b)) if a == b => Outcome::PassTagged(if a.is_zero() { "top_cell_zero" } else { "top_cell_nonzero" }),
            (Ok(_), Ok(_)) if !restricted => Outcome::PassTagged("top_cell_mismatch"),
            (Ok(a), Ok(b)) => Outcome::check(false, input, kk_to_json(&b), kk_to_json(&a)),
            (Err(e), _) | (_, Err(e)) => Outcome::from_error(e, input()),
        }
    });
    Ok(report)
}

/// Representatives of `(N_{0,w} ∩ U^{(l)}) / t₀^l (N_{0,w} ∩ U^{(1)}) t₀^{-l}`:
/// entry `p^l·d`, `0 ≤ d < p^{l(j-i-1)+1}`, at each position `(i, j)` of `N_w`.
pub fn quotient_representatives(w: &WeylElement, l: u32, p: u32, prec: u32) -> Result<Vec<PMatrix>> {
    let n = w.n();
    let positions: Vec<(usize, usize, u64)> = PositionMask::n_w(w)
        .iter()
        .map(|(i, j)| (i, j, (p as u64).pow(l * (j - i - 1) as u32 + 1)))
        .collect();
    let total: u64 = positions.iter().map(|&(_, _, c)| c).product();
    let pl = PAdic::p_power(p, l as i64, prec);
    let mut out = Vec::with_capacity(total as usize);
    for mut idx in 0..total {
        let mut m = PMatrix::identity(n, p, prec);
        for &(i, j, count) in &positions {
            let d = idx % count;
            idx /= count;
            let d = PAdic::from_i64(d as i64, p, prec)?;
            m.set(i, j, d.mul_ref(&pl));
        }
        out.push(m);
    }
    Ok(out)
}

/// `χ(w⁻¹t₀^l w)⁻¹ Σ_n n t₀^l f_w` for `t₀ = diag(p^{n-1}, …, p, 1)`, summed
/// over [`quotient_representatives`].
pub fn quotient_sum(chi: &Arc<Character>, w: &WeylElement, l: u32, p: u32, prec: u32) -> Result<PSElement> {
    let n = w.n();
    let t0l = DiagElement::t_zero(n, p, prec).pow(l);
    let norm = chi
        .eval_conjugate(&t0l, w)?
        .inv()
        .expect("character values are units");
    let mut sum = PSElement::zero(chi.clone());
    for m in quotient_representatives(w, l, p, prec)? {
        sum.add_term(norm.clone(), m, t0l.clone(), w.clone())?;
    }
    Ok(sum)
}

/// The averaging formula: at `x = rb` with `r ∈ R_w` whose `πo`-class
/// entries lie in `p^l·Z_p`, [`quotient_sum`] is `χ⁻¹(b)` if `r ∈ U^{(l)}w`
/// and `0` otherwise.
pub fn quotient_formula_check(
    chi: &Arc<Character>,
    w: &WeylElement,
    l: u32,
    s: &Sampler,
    seed: u64,
    trials: u64,
) -> Result<Report> {
    let n = w.n();
    let sum = quotient_sum(chi, w, l, s.p, s.prec)?;
    let seed = derive_seed(seed, &format!("quotient {w} {l}"));
    let mut report = run_trials("quotient-formula", seed, trials, |i, rng| {
        let o_level = if i % 2 == 0 { l as i64 } else { 0 };
        let r = s.r_pattern_levels(rng, w, o_level, l as i64);
        let b = s.borel(rng, n);
        let x = &r * &b;
        let input = || {
            json!({"w": w.to_string(), "l": l, "p": s.p, "r": matrix_to_json(&r), "b": matrix_to_json(&b)})
        };
        let expected = match decompose_in_ulwb(&r, w, l) {
            Ok(Some(_)) => chi.eval_inv(&b),
            Ok(None) => Ok(chi.field().zero()),
            Err(e) => Err(e),
        };
        match (expected, sum.eval(&x)) {
            (Ok(e), Ok(got)) if e == got => {
                if e.is_zero() {
                    Outcome::PassTagged("zero_branch")
                } else {
                    Outcome::PassTagged("character_branch")
                }
            }
            (Ok(e), Ok(got)) => Outcome::check(false, input, kk_to_json(&e), kk_to_json(&got)),
            (Err(e), _) | (_, Err(e)) => Outcome::from_error(e, input()),
        }
    });
    report.detail("representatives", sum.len() as u64);
    Ok(report)
}

/// `[[1,a,b],[0,1,0],[0,0,1]]`.
fn n_ab(a: i64, b: i64, p: u32, prec: u32) -> Result<PMatrix> {
    PMatrix::from_i64_rows(&[vec![1, a, b], vec![0, 1, 0], vec![0, 0, 1]], p, prec)
}

/// `[[a,b,1],[1,0,0],[0,1,0]] ∈ R_{w5}`.
fn r5_ab(a: i64, b: i64, p: u32, prec: u32) -> Result<PMatrix> {
    PMatrix::from_i64_rows(&[vec![a, b, 1], vec![1, 0, 0], vec![0, 1, 0]], p, prec)
}

/// The `GL_3` element of `M₀ ∩ V₅` that does not vanish at `z`.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub ordering: WeylOrdering,
    pub h: PSElement,
    pub f: PSElement,
    pub z: PMatrix,
}

/// `h = Σ_{a,b<p²} n(a,b)·diag(p²,1,1)·f_{w2}` and
/// `f = h − χ₃(p²)⁻¹ Σ_{a,b<p³} h(r5(a,b))·n(a,b)·f_{w5}`.
pub fn build_counterexample(chi: Arc<Character>, prec: u32) -> Result<Counterexample> {
    let p = chi.prime();
    if chi.n() != 3 {
        return Err(Error::CharacterNotAdmissible("needs n = 3".into()));
    }
    if p == 2 {
        return Err(Error::CharacterNotAdmissible("needs p >= 3".into()));
    }
    if !chi.ratios_nontrivial_on_units() {
        return Err(Error::CharacterNotAdmissible(
            "chi_1/chi_2 and chi_2/chi_3 must be non-trivial on units".into(),
        ));
    }
    let ordering = standard_ordering(3, OrderingPreset::PaperN3)?;
    let w2 = ordering.element(2).clone();
    let w5 = ordering.element(5).clone();
    let pi = p as i64;
    let one = chi.field().one();
    let t = DiagElement::from_valuations(&[2, 0, 0], p, prec);
    let mut h = PSElement::zero(chi.clone());
    for a in 0..pi * pi {
        for b in 0..pi * pi {
            h.add_term(one.clone(), n_ab(a, b, p, prec)?, t.clone(), w2.clone())?;
        }
    }
    let p3 = pi * pi * pi;
    let coeffs: Vec<(i64, i64, KKElem)> = (0..p3 * p3)
        .into_par_iter()
        .map(|k| {
            let (a, b) = (k / p3, k % p3);
            Ok((a, b, h.eval(&r5_ab(a, b, p, prec)?)?))
        })
        .collect::<Result<_>>()?;
    let chi3_p2 = chi.component(2, &PAdic::p_power(p, 2, prec))?;
    let scale = -&chi3_p2.inv().expect("unit");
    let mut f = h.clone();
    let id = DiagElement::identity(3, p, prec);
    for (a, b, c) in coeffs {
        f.add_term(&scale * &c, n_ab(a, b, p, prec)?, id.clone(), w5.clone())?;
    }
    let z = PMatrix::from_i64_rows(
        &[vec![pi * pi, 0, 1], vec![1, 0, 0], vec![pi, 1, 0]],
        p,
        prec,
    )?;
    Ok(Counterexample { ordering, h, f, z })
}

impl Counterexample {
    /// `f = 0` on sampled points of `G₅ = ∪_{l≤5} B w_l B`, the cells used
    /// in equal proportion.
    pub fn vanishing_check(&self, s: &Sampler, seed: u64, trials: u64) -> Report {
        let cells: Vec<WeylElement> = (1..=5).map(|l| self.ordering.element(l).clone()).collect();
        run_trials("counterexample", derive_seed(seed, "g5"), trials, |i, rng| {
            let x = s.cell(rng, &cells[(i % 5) as usize]);
            match self.f.eval(&x) {
                Ok(v) if v.is_zero() => Outcome::Pass,
                Ok(v) => Outcome::check(
                    false,
                    || json!({"p": s.p, "x": matrix_to_json(&x)}),
                    json!("0"),
                    kk_to_json(&v),
                ),
                Err(e) => Outcome::from_error(e, json!({"x": matrix_to_json(&x)})),
            }
        })
    }
}

/// The point `r'` that a term `n t f_w` cannot distinguish from `r`, for
/// `r` in `R_{w1}`, `R_{w2}` or `R_{w3}` of the `n = 3` ordering.
pub fn support_restriction_partner(r: &PMatrix, bullet: usize) -> Result<PMatrix> {
    let p = r.prime();
    let prec = r.precision().max(1);
    let g = |i: usize, j: usize| r.get(i, j).clone();
    let zero = PAdic::zero(p, prec as i64);
    let one = PAdic::one(p, prec);
    let rows = match bullet {
        1 => return Ok(PMatrix::identity(3, p, prec)),
        // [[α,1,0],[1,0,0],[β',γ',1]] -> γ' = 0
        2 => vec![
            vec![g(0, 0), one.clone(), zero.clone()],
            vec![one.clone(), zero.clone(), zero.clone()],
            vec![g(2, 0), zero.clone(), one],
        ],
        // [[1,0,0],[α',γ,1],[β',1,0]] -> [[1,0,0],[α'−β'γ,γ,1],[0,1,0]]
        3 => vec![
            vec![one.clone(), zero.clone(), zero.clone()],
            vec![g(1, 0).sub_ref(&g(2, 0).mul_ref(&g(1, 1))), g(1, 1), one.clone()],
            vec![zero.clone(), one, zero],
        ],
        other => return Err(Error::IndexOutOfRange(format!("bullet {other}"))),
    };
    PMatrix::from_rows(rows)
}

/// `n t f_w(r) = n t f_w(r')` for random terms and `r ∈ R_{w_i}`, `i ≤ 3`.
pub fn support_restriction_check(
    chi: &Arc<Character>,
    s: &Sampler,
    seed: u64,
    trials: u64,
) -> Result<Report> {
    let ordering = standard_ordering(3, OrderingPreset::PaperN3)?;
    let all = WeylElement::all(3);
    let one = chi.field().one();
    Ok(run_trials("support-restriction", derive_seed(seed, "support"), trials, |i, rng| {
        use rand::Rng;
        let bullet = (i % 3) as usize + 1;
        let w = &all[rng.gen_range(0..6)];
        let n = s.n0(rng, 3);
        let t = s.t_plus(rng, 3);
        let r = s.r_pattern(rng, ordering.element(bullet), None);
        let rp = match support_restriction_partner(&r, bullet) {
            Ok(m) => m,
            Err(e) => return Outcome::from_error(e, json!({})),
        };
        let term = match Term::new(one.clone(), n.clone(), t.clone(), w.clone()) {
            Ok(term) => term,
            Err(e) => return Outcome::from_error(e, json!({})),
        };
        compare(term.eval_basis(chi, &r), term.eval_basis(chi, &rp), || {
            json!({
                "bullet": bullet,
                "w": w.to_string(),
                "n": matrix_to_json(&n),
                "t": matrix_to_json(&t.to_matrix()),
                "r": matrix_to_json(&r),
            })
        })
    }))
}
