//! Characters of the torus, the functions `f_w`, and finite combinations
//! `Σ λ·n·t·f_w` evaluated pointwise.

use std::sync::Arc;

use crate::decomp::decompose_in_ulwb;
use crate::error::{Error, Result};
use crate::matrix::{membership, DiagElement, PMatrix, Subgroup};
use crate::padic::PAdic;
use crate::residue::{KKElem, ResidueField};
use crate::weyl::WeylElement;

/// `χ_i(p^v·u) = c^v · (u mod p)^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharComponent {
    pub c: KKElem,
    pub e: u64,
}

/// `χ = χ_1 ⊗ … ⊗ χ_n`, trivial on `1 + pZ_p` in each factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    field: Arc<ResidueField>,
    comps: Vec<CharComponent>,
}

impl Character {
    pub fn new(field: Arc<ResidueField>, comps: Vec<CharComponent>) -> Result<Self> {
        let p = field.characteristic() as u64;
        let mut comps = comps;
        for (i, comp) in comps.iter_mut().enumerate() {
            if comp.c.field() != &field {
                return Err(Error::InvalidInput("character values in another field".into()));
            }
            if comp.c.is_zero() {
                return Err(Error::CharacterNotAdmissible(format!(
                    "chi_{}(p) must be non-zero",
                    i + 1
                )));
            }
            comp.e %= p - 1;
        }
        Ok(Character { field, comps })
    }

    /// Convenience constructor over `F_p` from integer values of `χ_i(p)`.
    pub fn over_prime_field(p: u32, cs: &[i64], es: &[u64]) -> Result<Self> {
        if cs.len() != es.len() {
            return Err(Error::DimensionMismatch(cs.len(), es.len()));
        }
        let field = ResidueField::prime(p)?;
        let comps = cs
            .iter()
            .zip(es)
            .map(|(&c, &e)| CharComponent {
                c: field.from_i64(c),
                e,
            })
            .collect();
        Self::new(field, comps)
    }

    pub fn field(&self) -> &Arc<ResidueField> {
        &self.field
    }

    pub fn prime(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn n(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[CharComponent] {
        &self.comps
    }

    /// `χ_i(x)`, zero-based `i`.
    pub fn component(&self, i: usize, x: &PAdic) -> Result<KKElem> {
        let Some(v) = x.valuation() else {
            return Err(Error::precision("character of a value known only as O(p^A)"));
        };
        let comp = &self.comps[i];
        let cv = comp.c.powi(v).expect("c is non-zero");
        let u = x.unit_residue(&self.field)?;
        Ok(&cv * &u.pow(comp.e))
    }

    fn on_diagonal<'a>(&self, diag: impl Iterator<Item = &'a PAdic>) -> Result<KKElem> {
        let mut acc = self.field.one();
        for (i, x) in diag.enumerate() {
            acc = &acc * &self.component(i, x)?;
        }
        Ok(acc)
    }

    /// `χ(b)` for `b ∈ B`.
    pub fn eval(&self, b: &PMatrix) -> Result<KKElem> {
        let n = b.n();
        if n != self.n() {
            return Err(Error::DimensionMismatch(n, self.n()));
        }
        for i in 0..n {
            for j in 0..i {
                if !b.get(i, j).is_zero() {
                    return Err(Error::NotUpperTriangular);
                }
            }
        }
        self.on_diagonal((0..n).map(|i| b.get(i, i)))
    }

    /// `χ⁻¹(b)`.
    pub fn eval_inv(&self, b: &PMatrix) -> Result<KKElem> {
        Ok(self.eval(b)?.inv().expect("character values are units"))
    }

    pub fn eval_diag(&self, t: &DiagElement) -> Result<KKElem> {
        self.on_diagonal(t.entries().iter())
    }

    /// `χ(w⁻¹ t w)`; the conjugate has `t_{w(j)}` in position `j`.
    pub fn eval_conjugate(&self, t: &DiagElement, w: &WeylElement) -> Result<KKElem> {
        self.eval_diag(&t.conjugate_by(w))
    }

    /// `χ_i ≠ χ_{i+1}` for every `i`.
    pub fn is_irreducible(&self) -> bool {
        self.comps.windows(2).all(|c| c[0] != c[1])
    }

    /// Whether `χ_i/χ_{i+1}` is non-trivial on `Z_p^*` for every `i`.
    pub fn ratios_nontrivial_on_units(&self) -> bool {
        self.comps.windows(2).all(|c| c[0].e != c[1].e)
    }
}

/// One symbol `λ · n · t · f_w`, with `(n t)⁻¹` cached.
#[derive(Clone, Debug)]
pub struct Term {
    pub lambda: KKElem,
    pub n: PMatrix,
    pub t: DiagElement,
    pub w: WeylElement,
    inv_nt: PMatrix,
}

impl Term {
    pub fn new(lambda: KKElem, n: PMatrix, t: DiagElement, w: WeylElement) -> Result<Self> {
        if !membership(&n, &Subgroup::N0)? {
            return Err(Error::NotInBPlus(format!("{n} is not in N0")));
        }
        if !t.in_t_plus() {
            return Err(Error::NotInBPlus(format!("{:?} is not in T+", t.valuations())));
        }
        let inv_nt = t.inv().to_matrix().checked_mul(&n.inv()?)?;
        Ok(Term {
            lambda,
            n,
            t,
            w,
            inv_nt,
        })
    }

    /// `(n t f_w)(g) = f_w(t⁻¹ n⁻¹ g)`, without the coefficient.
    pub fn eval_basis(&self, chi: &Character, g: &PMatrix) -> Result<KKElem> {
        eval_fw(chi, &self.w, &self.inv_nt.checked_mul(g)?)
    }
}

/// `f_w(g)`: `χ⁻¹(b)` when `g = r·b` with `r ∈ U^{(1)}w`, else zero.
pub fn eval_fw(chi: &Character, w: &WeylElement, g: &PMatrix) -> Result<KKElem> {
    match decompose_in_ulwb(g, w, 1)? {
        Some(d) => chi.eval_inv(&d.b),
        None => Ok(chi.field().zero()),
    }
}

/// A finite `k_K`-combination of symbols `n t f_w`.
#[derive(Clone, Debug)]
pub struct PSElement {
    chi: Arc<Character>,
    terms: Vec<Term>,
}

impl PSElement {
    pub fn zero(chi: Arc<Character>) -> Self {
        PSElement {
            chi,
            terms: Vec::new(),
        }
    }

    /// The single term `f_w`.
    pub fn basis(chi: Arc<Character>, w: &WeylElement, p: u32, prec: u32) -> Result<Self> {
        let n = w.n();
        let mut v = Self::zero(chi);
        let one = v.chi.field().one();
        v.push(Term::new(
            one,
            PMatrix::identity(n, p, prec),
            DiagElement::identity(n, p, prec),
            w.clone(),
        )?);
        Ok(v)
    }

    pub fn character(&self) -> &Arc<Character> {
        &self.chi
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Appends a term; terms with coefficient zero are dropped.
    pub fn push(&mut self, term: Term) {
        if !term.lambda.is_zero() {
            self.terms.push(term);
        }
    }

    pub fn add_term(&mut self, lambda: KKElem, n: PMatrix, t: DiagElement, w: WeylElement) -> Result<()> {
        if lambda.is_zero() {
            return Ok(());
        }
        self.push(Term::new(lambda, n, t, w)?);
        Ok(())
    }

    pub fn scale(&self, lambda: &KKElem) -> Self {
        let mut out = Self::zero(self.chi.clone());
        for t in &self.terms {
            let mut t = t.clone();
            t.lambda = &t.lambda * lambda;
            out.push(t);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.chi != other.chi {
            return Err(Error::InvalidInput("elements over different characters".into()));
        }
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.clone());
        }
        Ok(out)
    }

    /// `v(g) = Σ λ_i · f_{w_i}(t_i⁻¹ n_i⁻¹ g)`.
    pub fn eval(&self, g: &PMatrix) -> Result<KKElem> {
        let mut acc = self.chi.field().zero();
        for t in &self.terms {
            let x = t.eval_basis(&self.chi, g)?;
            if !x.is_zero() {
                acc = &acc + &(&t.lambda * &x);
            }
        }
        Ok(acc)
    }

    /// Left action of `n·t ∈ B₊`: `(n t)(n' t') = (n · t n' t⁻¹)(t t')`.
    pub fn act_bplus(&self, n: &PMatrix, t: &DiagElement) -> Result<Self> {
        if !membership(n, &Subgroup::N0)? {
            return Err(Error::NotInBPlus(format!("{n} is not in N0")));
        }
        if !t.in_t_plus() {
            return Err(Error::NotInBPlus(format!("{:?} is not in T+", t.valuations())));
        }
        let tm = t.to_matrix();
        let tinv = t.inv().to_matrix();
        let mut out = Self::zero(self.chi.clone());
        for term in &self.terms {
            let conj = tm.checked_mul(&term.n)?.checked_mul(&tinv)?;
            let new_n = n.checked_mul(&conj)?;
            out.push(Term::new(
                term.lambda.clone(),
                new_n,
                t.mul(&term.t),
                term.w.clone(),
            )?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{trial_rng, Sampler};

    fn chi3() -> Arc<Character> {
        Arc::new(Character::over_prime_field(3, &[1, 2, 1], &[0, 1, 0]).unwrap())
    }

    #[test]
    fn character_basics() {
        let chi = chi3();
        let f = chi.field().clone();
        assert!(chi.eval(&PMatrix::identity(3, 3, 10)).unwrap().is_one());
        let t = DiagElement::from_valuations(&[1, 0, 0], 3, 10);
        assert_eq!(chi.eval_diag(&t).unwrap(), f.from_i64(1));
        let t = DiagElement::from_valuations(&[0, 1, 0], 3, 10);
        assert_eq!(chi.eval_diag(&t).unwrap(), f.from_i64(2));
        let b = PMatrix::from_i64_rows(&[vec![2, 5, 1], vec![0, 2, 7], vec![0, 0, 1]], 3, 10).unwrap();
        // chi_2(2) = 2^1
        assert_eq!(chi.eval(&b).unwrap(), f.from_i64(2));
        let lower = PMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1]], 3, 10).unwrap();
        let chi2 = Character::over_prime_field(3, &[1, 1], &[0, 0]).unwrap();
        assert_eq!(chi2.eval(&lower), Err(Error::NotUpperTriangular));
    }

    #[test]
    fn irreducibility() {
        assert!(!Character::over_prime_field(5, &[2, 2, 2], &[1, 1, 1]).unwrap().is_irreducible());
        assert!(Character::over_prime_field(5, &[2, 2, 2], &[0, 1, 0]).unwrap().is_irreducible());
        // exponents collapse mod p - 1 = 1
        let c = Character::over_prime_field(2, &[1, 1], &[0, 1]).unwrap();
        assert!(!c.is_irreducible());
    }

    #[test]
    fn fw_at_w_and_shifted() {
        let chi = chi3();
        for w in WeylElement::all(3) {
            let g = w.to_matrix(3, 10);
            assert!(eval_fw(&chi, &w, &g).unwrap().is_one());
            // w · diag(p,1,1): b = diag(p,1,1)
            let t = DiagElement::from_valuations(&[1, 0, 0], 3, 10);
            let val = eval_fw(&chi, &w, &g.checked_mul(&t.to_matrix()).unwrap()).unwrap();
            assert_eq!(val, chi.eval_diag(&t).unwrap().inv().unwrap());
        }
    }

    #[test]
    fn right_equivariance_and_u1_invariance() {
        let chi = chi3();
        let s = Sampler::new(3, 32, 2);
        for k in 0..40 {
            let mut rng = trial_rng(3, k);
            let w = &WeylElement::all(3)[(k % 6) as usize];
            let g = s.uw_point(&mut rng, w);
            let b = s.borel(&mut rng, 3);
            let u = s.congruence(&mut rng, 3, 1);
            let base = eval_fw(&chi, w, &g).unwrap();
            let gb = eval_fw(&chi, w, &g.checked_mul(&b).unwrap()).unwrap();
            assert_eq!(gb, &chi.eval_inv(&b).unwrap() * &base);
            let ug = eval_fw(&chi, w, &u.checked_mul(&g).unwrap()).unwrap();
            assert_eq!(ug, base);
        }
    }

    #[test]
    fn bplus_action_matches_translation() {
        let chi = chi3();
        let s = Sampler::new(3, 32, 2);
        let mut rng = trial_rng(9, 0);
        let w: WeylElement = "3,1,2".parse().unwrap();
        let v = PSElement::basis(chi.clone(), &w, 3, 32).unwrap();
        let n = s.n0(&mut rng, 3);
        let t = s.t_plus(&mut rng, 3);
        let acted = v.act_bplus(&n, &t).unwrap();
        let nt_inv = t.inv().to_matrix().checked_mul(&n.inv().unwrap()).unwrap();
        for k in 0..30 {
            let mut rng = trial_rng(9, 1 + k);
            let g = s.gl(&mut rng, 3);
            assert_eq!(
                acted.eval(&g).unwrap(),
                v.eval(&nt_inv.checked_mul(&g).unwrap()).unwrap()
            );
        }
        assert!(matches!(
            v.act_bplus(&n, &DiagElement::from_valuations(&[0, 1, 0], 3, 32)),
            Err(Error::NotInBPlus(_))
        ));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let chi = chi3();
        let w = WeylElement::identity(3);
        let mut v = PSElement::zero(chi.clone());
        v.add_term(
            chi.field().zero(),
            PMatrix::identity(3, 3, 8),
            DiagElement::identity(3, 3, 8),
            w,
        )
        .unwrap();
        assert!(v.is_empty());
    }
}
