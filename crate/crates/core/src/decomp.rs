//! The factorization `g = r·b` with `r ∈ R_w`, `b ∈ B`, the partition of
//! `GL_n` into the sets `U_w = R_w·B`, and the field-level Bruhat cell.

use crate::error::{Error, Result};
use crate::matrix::PMatrix;
use crate::padic::PAdic;
use crate::weyl::WeylElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RBDecomposition {
    pub w: WeylElement,
    pub r: PMatrix,
    pub b: PMatrix,
}

impl RBDecomposition {
    /// Digits of agreement between `r·b` and `g`.
    pub fn reconstruction_digits(&self, g: &PMatrix) -> Result<i64> {
        Ok(self.r.checked_mul(&self.b)?.agreement_digits(g))
    }
}

/// Condition that a decomposition must meet while it is being built; the
/// column loop stops as soon as it is violated.
struct Target<'a> {
    w: &'a WeylElement,
    level: i64,
}

enum Outcome {
    Done(RBDecomposition),
    Rejected,
}

/// Pivot row of a column restricted to `free` rows: least valuation, largest
/// row index among ties.
fn choose_pivot(col: &[PAdic], free: &[bool]) -> Result<usize> {
    let mut best: Option<(i64, usize)> = None;
    for (i, x) in col.iter().enumerate() {
        if !free[i] {
            continue;
        }
        if let Some(v) = x.valuation() {
            match best {
                Some((bv, _)) if v > bv => {}
                _ => best = Some((v, i)),
            }
        }
    }
    let Some((v_star, row)) = best else {
        return Err(Error::SingularToPrecision);
    };
    for (i, x) in col.iter().enumerate() {
        if free[i] && x.is_zero() && x.abs_prec() <= v_star {
            return Err(Error::precision(format!(
                "entry in row {} is O(p^{}) against pivot valuation {v_star}",
                i + 1,
                x.abs_prec()
            )));
        }
    }
    Ok(row)
}

fn decompose(g: &PMatrix, target: Option<Target<'_>>) -> Result<Outcome> {
    let n = g.n();
    let p = g.prime();
    let prec = g.precision().max(1);
    let mut images = vec![0usize; n];
    let mut free = vec![true; n];
    // columns of r, built left to right
    let mut rcols: Vec<Vec<PAdic>> = Vec::with_capacity(n);
    let mut b: Vec<Vec<PAdic>> = vec![vec![PAdic::zero(p, prec as i64); n]; n];
    for j in 0..n {
        let mut col = g.column(j);
        for jp in 0..j {
            let row = images[jp];
            let coef = col[row].clone();
            if !coef.is_zero() {
                for (i, x) in col.iter_mut().enumerate() {
                    // rcol jp vanishes exactly on rows pivoted before jp
                    if i != row && !images[..jp].contains(&i) {
                        *x = x.sub_ref(&coef.mul_ref(&rcols[jp][i]));
                    }
                }
            }
            col[row] = PAdic::zero(p, prec as i64);
            b[jp][j] = coef;
        }
        let pivot_row = choose_pivot(&col, &free)?;
        if let Some(t) = &target {
            if t.w.image(j) != pivot_row {
                return Ok(Outcome::Rejected);
            }
        }
        let pivot = col[pivot_row].clone();
        let pinv = pivot.inv()?;
        let rcol: Vec<PAdic> = col
            .iter()
            .enumerate()
            .map(|(i, x)| {
                if i == pivot_row {
                    PAdic::one(p, prec)
                } else if !free[i] {
                    PAdic::zero(p, prec as i64)
                } else {
                    x.mul_ref(&pinv)
                }
            })
            .collect();
        if let Some(t) = &target {
            for (i, x) in rcol.iter().enumerate() {
                if i != pivot_row && free[i] && !x.valuation_at_least(t.level)? {
                    return Ok(Outcome::Rejected);
                }
            }
        }
        b[j][j] = pivot;
        images[j] = pivot_row;
        free[pivot_row] = false;
        rcols.push(rcol);
    }
    let w = WeylElement::new(images)?;
    let r = PMatrix::from_rows(
        (0..n)
            .map(|i| (0..n).map(|j| rcols[j][i].clone()).collect())
            .collect(),
    )?;
    let b = PMatrix::from_rows(b)?;
    Ok(Outcome::Done(RBDecomposition { w, r, b }))
}

/// The unique `g = r·b` with `r ∈ R_w` and `b` invertible upper triangular.
pub fn rb_decompose(g: &PMatrix) -> Result<RBDecomposition> {
    match decompose(g, None)? {
        Outcome::Done(d) => Ok(d),
        Outcome::Rejected => unreachable!("no target given"),
    }
}

/// The `w` with `g ∈ U_w`.
pub fn classify_uw(g: &PMatrix) -> Result<WeylElement> {
    Ok(rb_decompose(g)?.w)
}

/// Decomposition of `g` if `g ∈ U^{(l)}wB`, otherwise `None`. Stops at the
/// first column that rules membership out.
pub fn decompose_in_ulwb(g: &PMatrix, w: &WeylElement, l: u32) -> Result<Option<RBDecomposition>> {
    if g.n() != w.n() {
        return Err(Error::DimensionMismatch(g.n(), w.n()));
    }
    match decompose(
        g,
        Some(Target {
            w,
            level: l as i64,
        }),
    )? {
        Outcome::Done(d) => Ok(Some(d)),
        Outcome::Rejected => Ok(None),
    }
}

/// `g ∈ U^{(l)}wB`: the decomposition has this `w` and every non-pivot entry
/// of `r` lies in `p^l·Z_p`.
pub fn in_ulwb(g: &PMatrix, w: &WeylElement, l: u32) -> Result<bool> {
    Ok(decompose_in_ulwb(g, w, l)?.is_some())
}

/// Whether `r` has the entry pattern of `R_w`.
pub fn matches_pattern(r: &PMatrix, w: &WeylElement) -> Result<bool> {
    let n = r.n();
    if n != w.n() {
        return Err(Error::DimensionMismatch(n, w.n()));
    }
    let winv = w.inverse();
    let one = PAdic::one(r.prime(), 1);
    for i in 0..n {
        for j in 0..n {
            let x = r.get(i, j);
            let ok = match winv.image(i).cmp(&j) {
                std::cmp::Ordering::Equal => x.eq_to_precision(&one) && x.valuation() == Some(0),
                std::cmp::Ordering::Less => x.is_zero(),
                std::cmp::Ordering::Greater => {
                    let k = if w.image(j) > i { 0 } else { 1 };
                    x.valuation_at_least(k)?
                }
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The `w` with `g ∈ BwB`, from the ranks of the lower-left submatrices
/// (rows `≥ i`, columns `≤ j`). Entries vanishing to their precision count
/// as zero; an inconsistent rank table is reported as a precision failure.
pub fn bruhat_cell(g: &PMatrix) -> Result<WeylElement> {
    let n = g.n();
    // rk[i][j]: rows i.., columns ..j (exclusive), with padding
    let mut rk = vec![vec![0usize; n + 1]; n + 1];
    for i in 0..n {
        let rows: Vec<usize> = (i..n).collect();
        for j in 1..=n {
            let cols: Vec<usize> = (0..j).collect();
            rk[i][j] = g.rank_of(&rows, &cols);
        }
    }
    if rk[0][n] < n {
        return Err(Error::SingularToPrecision);
    }
    let mut images = vec![usize::MAX; n];
    for j in 0..n {
        for i in 0..n {
            let jump = rk[i][j + 1] as i64 - rk[i + 1][j + 1] as i64 - rk[i][j] as i64
                + rk[i + 1][j] as i64;
            if jump == 1 {
                if images[j] != usize::MAX {
                    return Err(Error::precision("rank table is not a permutation"));
                }
                images[j] = i;
            } else if jump != 0 {
                return Err(Error::precision("rank table is not a permutation"));
            }
        }
    }
    if images.contains(&usize::MAX) {
        return Err(Error::precision("rank table is not a permutation"));
    }
    WeylElement::new(images).map_err(|_| Error::precision("rank table is not a permutation"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>], p: u32) -> PMatrix {
        PMatrix::from_i64_rows(rows, p, 20).unwrap()
    }

    #[test]
    fn identity_class_example() {
        let g = m(&[vec![1, 0, 0], vec![3, 1, 0], vec![3, 3, 1]], 3);
        let d = rb_decompose(&g).unwrap();
        assert_eq!(d.w, WeylElement::identity(3));
        assert!(d.r.eq_to_precision(&g));
        assert!(d.b.eq_to_precision(&PMatrix::identity(3, 3, 20)));
    }

    #[test]
    fn two_by_two_hand_run() {
        let g = m(&[vec![1, 0], vec![1, 1]], 3);
        let d = rb_decompose(&g).unwrap();
        assert_eq!(d.w.to_string(), "2,1");
        assert!(d.r.eq_to_precision(&m(&[vec![1, 1], vec![1, 0]], 3)));
        assert!(d.b.eq_to_precision(&m(&[vec![1, 1], vec![0, -1]], 3)));
        assert!(matches_pattern(&d.r, &d.w).unwrap());
    }

    #[test]
    fn z_matrix() {
        let z = m(&[vec![9, 0, 1], vec![1, 0, 0], vec![3, 1, 0]], 3);
        let d = rb_decompose(&z).unwrap();
        assert_eq!(d.w.to_string(), "2,3,1");
        assert!(d.r.eq_to_precision(&z));
        assert!(d.b.eq_to_precision(&PMatrix::identity(3, 3, 20)));
        assert_eq!(bruhat_cell(&z).unwrap(), WeylElement::longest(3));
    }

    #[test]
    fn singular_is_reported() {
        let g = m(&[vec![1, 2], vec![2, 4]], 5);
        assert_eq!(rb_decompose(&g), Err(Error::SingularToPrecision));
    }

    #[test]
    fn undecidable_pivot_is_reported() {
        let p = 3;
        let small = PAdic::zero(p, 0);
        let g = PMatrix::from_rows(vec![
            vec![PAdic::p_power(p, 1, 10), PAdic::one(p, 10)],
            vec![small, PAdic::zero(p, 10)],
        ])
        .unwrap();
        assert!(matches!(
            rb_decompose(&g),
            Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn permutations_are_their_own_r() {
        for w in WeylElement::all(4) {
            let g = w.to_matrix(5, 10);
            let d = rb_decompose(&g).unwrap();
            assert_eq!(d.w, w);
            assert!(d.r.eq_to_precision(&g));
            assert_eq!(bruhat_cell(&g).unwrap(), w);
            assert!(in_ulwb(&g, &w, 3).unwrap());
        }
    }

    #[test]
    fn level_read_off() {
        let w = WeylElement::identity(3);
        let mut e = PMatrix::identity(3, 3, 20);
        e.set(1, 0, PAdic::from_i64(9, 3, 20).unwrap());
        let g = e.checked_mul(&w.to_matrix(3, 20)).unwrap();
        assert!(in_ulwb(&g, &w, 2).unwrap());
        assert!(!in_ulwb(&g, &w, 3).unwrap());
        assert!(in_ulwb(&g, &w, 1).unwrap());
        // a perturbation in a pivoted row is absorbed by b
        let w: WeylElement = "2,3,1".parse().unwrap();
        let g = e.checked_mul(&w.to_matrix(3, 20)).unwrap();
        assert!(in_ulwb(&g, &w, 5).unwrap());
    }

    #[test]
    fn lower_unipotent_is_big_cell_in_gl2() {
        let g = m(&[vec![1, 0], vec![1, 1]], 2);
        assert_eq!(bruhat_cell(&g).unwrap().to_string(), "2,1");
        let b = m(&[vec![2, 1], vec![0, 3]], 2);
        assert_eq!(bruhat_cell(&b).unwrap(), WeylElement::identity(2));
    }
}
