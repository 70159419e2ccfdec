//! Named verification suites. Each one is deterministic in its
//! [`RunConfig`] and returns a [`Report`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde_json::json;

use crate::checks::{
    build_counterexample, lemma_theta_check, nprime_invariance_check, quotient_formula_check,
    support_restriction_check,
};
use crate::config::RunConfig;
use crate::decomp::{bruhat_cell, classify_uw, matches_pattern, rb_decompose};
use crate::error::{Error, Result};
use crate::json::{kk_to_json, matrix_to_json};
use crate::report::{derive_seed, run_trials, Outcome, Report};
use crate::weyl::{bruhat_leq, ChainOracle, WeylElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Reconstruction,
    Disjointness,
    N0Invariance,
    BplusMonotonicity,
    CellInclusion,
    BruhatOracle,
    ThetaLemma,
    NprimeInvariance,
    QuotientFormula,
    Counterexample,
    PrecisionHonesty,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Reconstruction,
        Suite::Disjointness,
        Suite::N0Invariance,
        Suite::BplusMonotonicity,
        Suite::CellInclusion,
        Suite::BruhatOracle,
        Suite::ThetaLemma,
        Suite::NprimeInvariance,
        Suite::QuotientFormula,
        Suite::Counterexample,
        Suite::PrecisionHonesty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Reconstruction => "reconstruction",
            Suite::Disjointness => "disjointness",
            Suite::N0Invariance => "n0-invariance",
            Suite::BplusMonotonicity => "bplus-monotonicity",
            Suite::CellInclusion => "cell-inclusion",
            Suite::BruhatOracle => "bruhat-oracle",
            Suite::ThetaLemma => "theta-lemma",
            Suite::NprimeInvariance => "nprime-invariance",
            Suite::QuotientFormula => "quotient-formula",
            Suite::Counterexample => "counterexample",
            Suite::PrecisionHonesty => "precision-honesty",
        }
    }

    pub fn run(self, cfg: &RunConfig) -> Result<Report> {
        cfg.validate()?;
        let mut report = match self {
            Suite::Reconstruction => reconstruction(cfg),
            Suite::Disjointness => disjointness(cfg),
            Suite::N0Invariance => n0_invariance(cfg),
            Suite::BplusMonotonicity => bplus_monotonicity(cfg),
            Suite::CellInclusion => cell_inclusion(cfg),
            Suite::BruhatOracle => bruhat_oracle(cfg),
            Suite::ThetaLemma => theta_lemma(cfg),
            Suite::NprimeInvariance => nprime_invariance(cfg),
            Suite::QuotientFormula => quotient_formula(cfg),
            Suite::Counterexample => counterexample(cfg),
            Suite::PrecisionHonesty => precision_honesty(cfg),
        }?;
        report.suite = self.name().to_string();
        Ok(report)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Report> {
    name.parse::<Suite>()?.run(cfg)
}

/// Digits `r·b` must reproduce of a sampled `g` (40 at precision 64).
fn reconstruction_threshold(precision: u32) -> i64 {
    precision as i64 * 5 / 8
}

/// `r·b = g`, `r` matches exactly the `R_w` pattern of its own `w`, and
/// `g·b'` decomposes as `(w, r, b·b')`.
fn reconstruction(cfg: &RunConfig) -> Result<Report> {
    let s = cfg.sampler();
    let n = cfg.n;
    let all = WeylElement::all(n);
    let threshold = reconstruction_threshold(cfg.precision);
    let seed = derive_seed(cfg.seed, "reconstruction");
    let mut report = run_trials("reconstruction", seed, cfg.trials_or(10_000), |_, rng| {
        let g = s.gl(rng, n);
        let input = || json!({"g": matrix_to_json(&g)});
        let d = match rb_decompose(&g) {
            Ok(d) => d,
            Err(e) => return Outcome::from_error(e, input()),
        };
        match d.reconstruction_digits(&g) {
            Ok(digits) if digits >= threshold => {}
            Ok(digits) => {
                return Outcome::check(false, input, json!(format!(">= {threshold} digits")), json!(digits))
            }
            Err(e) => return Outcome::from_error(e, input()),
        }
        let mut matched = Vec::new();
        for w in &all {
            match matches_pattern(&d.r, w) {
                Ok(true) => matched.push(w.to_string()),
                Ok(false) => {}
                Err(e) => return Outcome::from_error(e, input()),
            }
        }
        if matched != [d.w.to_string()] {
            return Outcome::check(false, input, json!([d.w.to_string()]), json!(matched));
        }
        let bp = s.borel(rng, n);
        let gb = &g * &bp;
        match rb_decompose(&gb) {
            Ok(e) => {
                let ok = e.w == d.w && e.r.eq_to_precision(&d.r) && e.b.eq_to_precision(&(&d.b * &bp));
                Outcome::check(
                    ok,
                    || json!({"g": matrix_to_json(&g), "b_prime": matrix_to_json(&bp)}),
                    json!({"w": d.w.to_string(), "r": matrix_to_json(&d.r)}),
                    json!({"w": e.w.to_string(), "r": matrix_to_json(&e.r)}),
                )
            }
            Err(e) => Outcome::from_error(e, input()),
        }
    });
    report.detail("min_digits", threshold);
    Ok(report)
}

/// A sampled `r ∈ R_w` decomposes to `(w, r, 1)` and satisfies no other
/// `R_{w'}` pattern.
fn disjointness(cfg: &RunConfig) -> Result<Report> {
    let s = cfg.sampler();
    let all = WeylElement::all(cfg.n);
    let per_w = cfg.trials_or(100);
    let id = crate::matrix::PMatrix::identity(cfg.n, cfg.p, cfg.precision);
    let mut report = Report::new("disjointness");
    for w in &all {
        let seed = derive_seed(cfg.seed, &format!("disjointness {w}"));
        let sub = run_trials("disjointness", seed, per_w, |_, rng| {
            let r = s.r_pattern(rng, w, None);
            let input = || json!({"w": w.to_string(), "g": matrix_to_json(&r)});
            for other in &all {
                match matches_pattern(&r, other) {
                    Ok(m) if m == (other == w) => {}
                    Ok(m) => {
                        return Outcome::check(
                            false,
                            input,
                            json!({"pattern": other.to_string(), "matches": !m}),
                            json!({"pattern": other.to_string(), "matches": m}),
                        )
                    }
                    Err(e) => return Outcome::from_error(e, input()),
                }
            }
            match rb_decompose(&r) {
                Ok(d) => Outcome::check(
                    d.w == *w && d.r.eq_to_precision(&r) && d.b.eq_to_precision(&id),
                    input,
                    json!({"w": w.to_string(), "b": "identity"}),
                    json!({"w": d.w.to_string(), "r": matrix_to_json(&d.r), "b": matrix_to_json(&d.b)}),
                ),
                Err(e) => Outcome::from_error(e, input()),
            }
        });
        report.absorb(&w.to_string(), sub);
    }
    report.detail("pairs", (all.len() * (all.len() - 1)) as u64);
    Ok(report)
}

/// `classify(u·g) = classify(g)` for `u ∈ N₀` (even trials) and
/// `u ∈ U^{(1)}` (odd trials).
fn n0_invariance(cfg: &RunConfig) -> Result<Report> {
    let s = cfg.sampler();
    let n = cfg.n;
    let seed = derive_seed(cfg.seed, "n0-invariance");
    Ok(run_trials("n0-invariance", seed, cfg.trials_or(20_000), |i, rng| {
        let g = s.gl(rng, n);
        let (u, tag) = if i % 2 == 0 { (s.n0(rng, n), "n0") } else { (s.congruence(rng, n, 1), "u1") };
        let ug = &u * &g;
        match (classify_uw(&g), classify_uw(&ug)) {
            (Ok(a), Ok(b)) if a == b => Outcome::PassTagged(tag),
            (Ok(a), Ok(b)) => Outcome::check(
                false,
                || json!({"g": matrix_to_json(&g), "u": matrix_to_json(&u), "ug": matrix_to_json(&ug)}),
                json!(a.to_string()),
                json!(b.to_string()),
            ),
            (Err(e), _) | (_, Err(e)) => Outcome::from_error(e, json!({"g": matrix_to_json(&g)})),
        }
    }))
}

/// `classify(t⁻¹n⁻¹g) ⪯ classify(g)` for `n ∈ N₀`, `t ∈ T₊`.
fn bplus_monotonicity(cfg: &RunConfig) -> Result<Report> {
    let s = cfg.sampler();
    let n = cfg.n;
    let seed = derive_seed(cfg.seed, "bplus-monotonicity");
    Ok(run_trials("bplus-monotonicity", seed, cfg.trials_or(10_000), |_, rng| {
        let g = s.gl(rng, n);
        let nn = s.n0(rng, n);
        let t = s.t_plus(rng, n);
        let moved = match nn.inv() {
            Ok(ninv) => &t.inv().to_matrix() * &(&ninv * &g),
            Err(e) => return Outcome::from_error(e, json!({})),
        };
        let input = || {
            json!({
                "g": matrix_to_json(&g),
                "n": matrix_to_json(&nn),
                "t": matrix_to_json(&t.to_matrix()),
                "moved": matrix_to_json(&moved),
            })
        };
        match (classify_uw(&g), classify_uw(&moved)) {
            (Ok(w), Ok(wp)) => {
                let strict = wp != w;
                match bruhat_leq(&wp, &w) {
                    Ok(true) if strict => Outcome::PassTagged("strictly_lower"),
                    Ok(true) => Outcome::PassTagged("same_cell"),
                    _ => Outcome::check(false, input, json!(format!("⪯ {w}")), json!(wp.to_string())),
                }
            }
            (Err(e), _) | (_, Err(e)) => Outcome::from_error(e, input()),
        }
    }))
}

/// Samples of `N_w w B` have Bruhat cell `w` and lie in `∪_{w'⪯w} U_{w'}`.
fn cell_inclusion(cfg: &RunConfig) -> Result<Report> {
    let s = cfg.sampler();
    let per_w = cfg.trials_or(1_000);
    let mut report = Report::new("cell-inclusion");
    for w in WeylElement::all(cfg.n) {
        let seed = derive_seed(cfg.seed, &format!("cell-inclusion {w}"));
        let sub = run_trials("cell-inclusion", seed, per_w, |_, rng| {
            let g = s.cell(rng, &w);
            let input = || json!({"w": w.to_string(), "g": matrix_to_json(&g)});
            match (bruhat_cell(&g), classify_uw(&g)) {
                (Ok(c), Ok(u)) => {
                    let ok = c == w && bruhat_leq(&u, &w).unwrap_or(false);
                    if ok && u != w {
                        return Outcome::PassTagged("strictly_lower");
                    }
                    Outcome::check(
                        ok,
                        input,
                        json!({"bruhat_cell": w.to_string(), "classify": format!("⪯ {w}")}),
                        json!({"bruhat_cell": c.to_string(), "classify": u.to_string()}),
                    )
                }
                (Err(e), _) | (_, Err(e)) => Outcome::from_error(e, input()),
            }
        });
        report.absorb(&w.to_string(), sub);
    }
    Ok(report)
}

/// Sorted-prefix Bruhat order against the transitive closure of
/// transposition chains, on all pairs. Deterministic; `trials` is ignored.
fn bruhat_oracle(cfg: &RunConfig) -> Result<Report> {
    let all = WeylElement::all(cfg.n);
    let oracle = ChainOracle::new(cfg.n);
    let mut report = Report::new("bruhat-oracle");
    let mut comparable = 0u64;
    for u in &all {
        for w in &all {
            let fast = bruhat_leq(u, w)?;
            let slow = oracle.leq(u, w);
            comparable += fast as u64;
            report.trials += 1;
            if fast != slow {
                report.failures.push(crate::report::Failure {
                    input: json!({"u": u.to_string(), "w": w.to_string()}),
                    expected: json!(slow),
                    got: json!(fast),
                });
            }
        }
    }
    report.detail("pairs", report.trials);
    report.detail("comparable_pairs", comparable);
    Ok(report)
}

fn theta_lemma(cfg: &RunConfig) -> Result<Report> {
    let chi = cfg.character()?;
    let s = cfg.sampler();
    let mut report = Report::new("theta-lemma");
    for w in WeylElement::all(cfg.n) {
        for j0 in 1..cfg.n {
            let sub = lemma_theta_check(&chi, &w, j0, &s, cfg.seed, cfg.trials_or(200))?;
            report.absorb(&format!("{w} j0={j0}"), sub);
        }
    }
    Ok(report)
}

fn nprime_invariance(cfg: &RunConfig) -> Result<Report> {
    let chi = cfg.character()?;
    let s = cfg.sampler();
    let mut report = Report::new("nprime-invariance");
    for w in WeylElement::all(cfg.n) {
        let sub = nprime_invariance_check(&chi, &w, &s, cfg.seed, cfg.trials_or(200))?;
        report.absorb(&w.to_string(), sub);
    }
    if cfg.n == 3 && cfg.p >= 3 {
        let sub = support_restriction_check(&chi, &s, cfg.seed, cfg.trials_or(200))?;
        report.absorb("support_restriction", sub);
    }
    Ok(report)
}

fn quotient_formula(cfg: &RunConfig) -> Result<Report> {
    let chi = cfg.character()?;
    let s = cfg.sampler();
    let ordering = cfg.ordering()?;
    let mut report = Report::new("quotient-formula");
    for (m, w) in ordering.elements().iter().enumerate() {
        for l in 1..=2 {
            let sub = quotient_formula_check(&chi, w, l, &s, cfg.seed, cfg.trials_or(100))?;
            report.absorb(&format!("m={} w={w} l={l}", m + 1), sub);
        }
    }
    Ok(report)
}

fn counterexample(cfg: &RunConfig) -> Result<Report> {
    if cfg.n != 3 {
        return Err(Error::InvalidInput("the counterexample lives in GL_3 (n = 3)".into()));
    }
    let chi = cfg.character()?;
    let c = build_counterexample(chi, cfg.precision)?;
    let mut report = c.vanishing_check(&cfg.sampler(), cfg.seed, cfg.trials_or(1_000));
    let fz = c.f.eval(&c.z);
    report.trials += 1;
    match &fz {
        Ok(v) if !v.is_zero() => {}
        Ok(v) => report.failures.push(crate::report::Failure {
            input: json!({"z": matrix_to_json(&c.z)}),
            expected: json!("non-zero"),
            got: kk_to_json(v),
        }),
        Err(Error::InsufficientPrecision(_)) | Err(Error::SingularToPrecision) => report.precision_aborts += 1,
        Err(e) => return Err(e.clone()),
    }
    if let Ok(v) = fz {
        report.detail("f_z", kk_to_json(&v));
    }
    report.detail("z", matrix_to_json(&c.z));
    report.detail("terms", c.f.len() as u64);
    report.detail("h_terms", c.h.len() as u64);
    Ok(report)
}

/// Re-runs the reconstruction, B₊-monotonicity and counterexample
/// computations on the same samples truncated to `precision` digits and
/// compares with the full-precision (64-digit) answers; an answer must agree
/// or be an explicit precision abort.
fn precision_honesty(cfg: &RunConfig) -> Result<Report> {
    let high = crate::padic::DEFAULT_PRECISION.max(cfg.precision);
    let low = if cfg.precision < high { cfg.precision } else { 8 };
    let hi_cfg = RunConfig { precision: high, ..cfg.clone() };
    let s = hi_cfg.sampler();
    let n = cfg.n;
    let trials = cfg.trials_or(1_000);
    let mut report = Report::new("precision-honesty");

    let seed = derive_seed(cfg.seed, "honesty reconstruction");
    let sub = run_trials("precision-honesty", seed, trials, |_, rng| {
        let g = s.gl(rng, n);
        let g8 = g.truncate_rel(low);
        let input = || json!({"g": matrix_to_json(&g8)});
        let reference = match rb_decompose(&g) {
            Ok(d) => d,
            Err(_) => return Outcome::PassTagged("reference_undecided"),
        };
        match rb_decompose(&g8) {
            Ok(d) => Outcome::check(
                d.w == reference.w && d.r.eq_to_precision(&reference.r) && d.b.eq_to_precision(&reference.b),
                input,
                json!({"w": reference.w.to_string(), "r": matrix_to_json(&reference.r), "b": matrix_to_json(&reference.b)}),
                json!({"w": d.w.to_string(), "r": matrix_to_json(&d.r), "b": matrix_to_json(&d.b)}),
            ),
            Err(e) => Outcome::from_error(e, input()),
        }
    });
    report.absorb("reconstruction", sub);

    let seed = derive_seed(cfg.seed, "honesty monotonicity");
    let sub = run_trials("precision-honesty", seed, trials, |_, rng| {
        let g = s.gl(rng, n);
        let nn = s.n0(rng, n);
        let t = s.t_plus(rng, n);
        let moved = match nn.inv() {
            Ok(ninv) => &t.inv().to_matrix() * &(&ninv * &g),
            Err(e) => return Outcome::from_error(e, json!({})),
        };
        let classify_pair = |x: &crate::matrix::PMatrix| -> Result<(WeylElement, WeylElement)> {
            Ok((classify_uw(x)?, classify_uw(&(&t.inv().to_matrix() * &(&nn.inv()? * x)))?))
        };
        let reference = match (classify_uw(&g), classify_uw(&moved)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Outcome::PassTagged("reference_undecided"),
        };
        let g8 = g.truncate_rel(low);
        match classify_pair(&g8) {
            Ok(got) => Outcome::check(
                got == reference,
                || json!({"g": matrix_to_json(&g8), "n": matrix_to_json(&nn), "t": matrix_to_json(&t.to_matrix())}),
                json!([reference.0.to_string(), reference.1.to_string()]),
                json!([got.0.to_string(), got.1.to_string()]),
            ),
            Err(e) => Outcome::from_error(e, json!({"g": matrix_to_json(&g8)})),
        }
    });
    report.absorb("bplus-monotonicity", sub);

    let chi = cfg.character();
    match chi {
        Ok(chi) if n == 3 && cfg.p >= 3 && chi.ratios_nontrivial_on_units() => {
            let f_hi = build_counterexample(chi.clone(), high)?;
            let f_lo = build_counterexample(chi, low)?;
            let cells: Vec<WeylElement> = (1..=6).map(|m| f_hi.ordering.element(m).clone()).collect();
            let seed = derive_seed(cfg.seed, "honesty counterexample");
            let sub = run_trials("precision-honesty", seed, trials, |i, rng| {
                let x = if i == 0 {
                    f_hi.z.clone()
                } else {
                    let k = rng.gen_range(0..cells.len());
                    s.cell(rng, &cells[k])
                };
                let reference = match f_hi.f.eval(&x) {
                    Ok(v) => v,
                    Err(_) => return Outcome::PassTagged("reference_undecided"),
                };
                let x8 = x.truncate_rel(low);
                match f_lo.f.eval(&x8) {
                    Ok(v) => Outcome::check(
                        v == reference,
                        || json!({"x": matrix_to_json(&x8)}),
                        kk_to_json(&reference),
                        kk_to_json(&v),
                    ),
                    Err(e) => Outcome::from_error(e, json!({"x": matrix_to_json(&x8)})),
                }
            });
            report.absorb("counterexample", sub);
        }
        _ => report.detail("counterexample", "skipped: needs n = 3, p >= 3 and an admissible character"),
    }
    report.detail("low_precision", low);
    report.detail("reference_precision", high);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(p: u32, n: usize, trials: u64) -> RunConfig {
        RunConfig { p, n, trials: Some(trials), seed: 9, ..RunConfig::default() }
    }

    #[test]
    fn names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_runs_small() {
        for s in Suite::ALL {
            let r = s.run(&small(3, 3, 12)).unwrap();
            assert!(r.passed(), "{s}: {}", serde_json::to_string(&r.failures[0]).unwrap());
            assert_eq!(r.suite, s.name());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = small(5, 3, 40);
        for s in [Suite::Reconstruction, Suite::QuotientFormula] {
            let a = serde_json::to_string(&s.run(&cfg).unwrap()).unwrap();
            let b = serde_json::to_string(&s.run(&cfg).unwrap()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bruhat_oracle_pair_count() {
        let r = Suite::BruhatOracle.run(&small(3, 4, 1)).unwrap();
        assert_eq!(r.trials, 576);
        assert!(r.passed());
    }
}
