//! Seeded generators for games and strategies.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::game::{PayoffMatrix, TwoPlayerGame, UnitSphereStrategy};
use crate::vector::normalized;

/// Matrix with i.i.d. entries drawn from `U[lo, hi)`.
pub fn random_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    lo: f64,
    hi: f64,
) -> PayoffMatrix {
    let dist = Uniform::new(lo, hi);
    let data = (0..rows * cols).map(|_| dist.sample(rng)).collect();
    PayoffMatrix::new(rows, cols, data).expect("finite entries")
}

/// Game with `A` of shape `m×n` and `B` of shape `n×m`, entries in `U[lo, hi)`.
pub fn random_game<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: usize,
    lo: f64,
    hi: f64,
) -> TwoPlayerGame {
    let a = random_matrix(rng, m, n, lo, hi);
    let b = random_matrix(rng, n, m, lo, hi);
    TwoPlayerGame::new(a, b).expect("conforming shapes")
}

/// As [`random_game`], redrawing any zero entry so the game is strictly positive.
pub fn random_positive_game<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    n: usize,
    lo: f64,
    hi: f64,
) -> TwoPlayerGame {
    assert!(lo >= 0.0 && hi > lo, "positive range required");
    loop {
        let g = random_game(rng, m, n, lo, hi);
        if crate::game::is_positive_game(&g) {
            return g;
        }
    }
}

/// Uniformly distributed point on the unit sphere in `Rⁿ`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UnitSphereStrategy {
    loop {
        let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(u) = normalized(&v) {
            return UnitSphereStrategy::new(u, false).expect("unit vector");
        }
    }
}

/// Unit vector with all coordinates strictly positive.
pub fn random_positive_unit<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UnitSphereStrategy {
    let dist = Uniform::new(0.05, 1.0);
    let v: Vec<f64> = (0..n).map(|_| dist.sample(rng)).collect();
    UnitSphereStrategy::from_direction(v, true).expect("positive vector")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_generation_is_reproducible() {
        let g1 = random_game(&mut ChaCha8Rng::seed_from_u64(5), 3, 4, -1.0, 1.0);
        let g2 = random_game(&mut ChaCha8Rng::seed_from_u64(5), 3, 4, -1.0, 1.0);
        assert_eq!(g1, g2);
        assert_eq!((g1.m(), g1.n()), (3, 4));
        assert!(g1.a().data().iter().all(|v| (-1.0..1.0).contains(v)));
    }

    #[test]
    fn strategies_are_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..6 {
            let u = random_unit(&mut rng, n);
            assert!((crate::vector::norm2(u.values()) - 1.0).abs() < 1e-12);
            let p = random_positive_unit(&mut rng, n);
            assert!(p.is_nonnegative() && p.values().iter().all(|v| *v > 0.0));
        }
        assert!(random_positive_game(&mut rng, 3, 3, 0.0, 1.0)
            .a()
            .is_positive());
    }
}
