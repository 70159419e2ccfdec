//! The concrete n = 3 data: the R_w table, the ordering chain and the
//! matrix z.

use bruhat_core::checks::build_counterexample;
use bruhat_core::*;
use std::sync::Arc;

/// Entry classes of R_w: '1', '0', 'o' (integral), 'p' (in p·o).
const TABLE: [[&str; 3]; 6] = [
    ["100", "p10", "pp1"],
    ["100", "po1", "p10"],
    ["o10", "100", "pp1"],
    ["oo1", "100", "p10"],
    ["o10", "op1", "100"],
    ["oo1", "o10", "100"],
];

fn w_of(pattern: &[&str; 3]) -> WeylElement {
    // the 1s sit where w(j) = i
    let mut images = vec![0; 3];
    for (i, row) in pattern.iter().enumerate() {
        for (j, c) in row.chars().enumerate() {
            if c == '1' {
                images[j] = i;
            }
        }
    }
    WeylElement::new(images).unwrap()
}

#[test]
fn table_patterns_are_the_r_w_patterns() {
    let s = Sampler::new(3, 40, 2);
    let mut seen = Vec::new();
    for pattern in &TABLE {
        let w = w_of(pattern);
        seen.push(w.clone());
        for k in 0..100 {
            let mut rng = trial_rng(17, k);
            let r = s.r_pattern(&mut rng, &w, None);
            for (i, row) in pattern.iter().enumerate() {
                for (j, c) in row.chars().enumerate() {
                    let x = r.get(i, j);
                    match c {
                        '1' => assert!(x.eq_to_precision(&PAdic::one(3, 40))),
                        '0' => assert!(x.is_zero()),
                        'o' => assert!(x.valuation_at_least(0).unwrap()),
                        _ => assert!(x.valuation_at_least(1).unwrap()),
                    }
                }
            }
            let d = rb_decompose(&r).unwrap();
            assert_eq!(d.w, w);
            assert!(d.r.eq_to_precision(&r));
            assert!(d.b.eq_to_precision(&PMatrix::identity(3, 3, 40)));
        }
        // a unit in an 'o' slot or valuation 1 in a 'p' slot is allowed,
        // a unit in a 'p' slot is not
        let mut rows = vec![vec![0i64; 3]; 3];
        let mut p_slot = None;
        for (i, row) in pattern.iter().enumerate() {
            for (j, c) in row.chars().enumerate() {
                rows[i][j] = match c {
                    '1' => 1,
                    'o' => 2,
                    'p' => {
                        p_slot = Some((i, j));
                        3
                    }
                    _ => 0,
                };
            }
        }
        let r = PMatrix::from_i64_rows(&rows, 3, 40).unwrap();
        assert!(matches_pattern(&r, &w).unwrap());
        if let Some((i, j)) = p_slot {
            rows[i][j] = 1;
            let bad = PMatrix::from_i64_rows(&rows, 3, 40).unwrap();
            assert!(!matches_pattern(&bad, &w).unwrap());
        }
    }
    seen.sort_by_key(|w| w.one_line());
    seen.dedup();
    assert_eq!(seen.len(), 6);
}

#[test]
fn ordering_chain() {
    let o = standard_ordering(3, OrderingPreset::PaperN3).unwrap();
    let lines: Vec<String> = o.elements().iter().map(|w| w.to_string()).collect();
    assert_eq!(lines, ["1,2,3", "2,1,3", "1,3,2", "3,1,2", "2,3,1", "3,2,1"]);
    // the chain refines the Bruhat order
    for a in 0..6 {
        for b in 0..6 {
            if bruhat_leq(&o.elements()[a], &o.elements()[b]).unwrap() {
                assert!(a <= b);
            }
        }
    }
}

#[test]
fn z_lies_in_the_big_cell_but_decomposes_at_w5() {
    for p in [3u32, 5, 7] {
        let pi = p as i64;
        let z = PMatrix::from_i64_rows(&[vec![pi * pi, 0, 1], vec![1, 0, 0], vec![pi, 1, 0]], p, 32).unwrap();
        assert_eq!(bruhat_cell(&z).unwrap(), WeylElement::longest(3));
        let d = rb_decompose(&z).unwrap();
        assert_eq!(d.w.to_string(), "2,3,1");
        assert!(d.r.eq_to_precision(&z));
        assert!(d.b.eq_to_precision(&PMatrix::identity(3, p, 32)));
        // not in N0·w0·B: the U_w label sits strictly below w0
        assert!(bruhat_leq(&d.w, &WeylElement::longest(3)).unwrap());
        assert_ne!(d.w, WeylElement::longest(3));
    }
}

#[test]
fn counterexample_shape() {
    let chi = Arc::new(Character::over_prime_field(3, &[1, 1, 1], &[0, 1, 0]).unwrap());
    let c = build_counterexample(chi, 24).unwrap();
    // h has p^4 terms; every correction coefficient vanishes
    assert_eq!(c.h.len(), 81);
    assert_eq!(c.f.len(), 81);
    assert!(!c.f.eval(&c.z).unwrap().is_zero());
}

#[test]
fn gl2_cells() {
    let g = PMatrix::from_i64_rows(&[vec![1, 0], vec![1, 1]], 5, 20).unwrap();
    assert_eq!(bruhat_cell(&g).unwrap().to_string(), "2,1");
    let b = PMatrix::from_i64_rows(&[vec![5, 1], vec![0, 1]], 5, 20).unwrap();
    assert_eq!(bruhat_cell(&b).unwrap(), WeylElement::identity(2));
}

#[test]
fn t_zero_and_t_prime() {
    assert_eq!(DiagElement::t_zero(4, 3, 10).valuations(), vec![3, 2, 1, 0]);
    assert_eq!(DiagElement::t_prime(4, 2, 3, 10).valuations(), vec![1, 1, 0, 0]);
    assert!(DiagElement::from_valuations(&[2, 0, 0], 3, 10).in_t_plus());
    assert!(!DiagElement::from_valuations(&[0, 1, -1], 3, 10).in_t_plus());
}
