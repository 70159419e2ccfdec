//! Fixed inputs for the benchmarks, drawn from the library's own sampler so
//! that every run measures the same matrices.

use std::sync::Arc;

use bruhat_core::{trial_rng, Character, PMatrix, Sampler, WeylElement};

pub const SEED: u64 = 0x5eed;

/// `count` random elements of `GL_n(Q_p)`.
pub fn gl_fixtures(p: u32, n: usize, prec: u32, count: u64) -> Vec<PMatrix> {
    let s = Sampler::new(p, prec, 2);
    (0..count).map(|i| s.gl(&mut trial_rng(SEED, i), n)).collect()
}

/// `count` points of `N_w w B`, cycling through `W`.
pub fn cell_fixtures(p: u32, n: usize, prec: u32, count: u64) -> Vec<PMatrix> {
    let s = Sampler::new(p, prec, 2);
    let all = WeylElement::all(n);
    (0..count)
        .map(|i| s.cell(&mut trial_rng(SEED ^ 1, i), &all[i as usize % all.len()]))
        .collect()
}

/// The character `c = (1,1,1)`, `e = (0,1,0)` over `F_3`.
pub fn gl3_character() -> Arc<Character> {
    Arc::new(Character::over_prime_field(3, &[1, 1, 1], &[0, 1, 0]).expect("valid character"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_stable() {
        assert_eq!(gl_fixtures(3, 3, 16, 4), gl_fixtures(3, 3, 16, 4));
        assert_eq!(cell_fixtures(5, 3, 16, 7).len(), 7);
    }
}
