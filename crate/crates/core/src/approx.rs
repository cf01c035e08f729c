//! Approximate mixed equilibria of standard bimatrix games from the unique
//! equilibrium of the positive unit-sphere game on the same matrices.
//!
//! With `(x, y)` the sphere equilibrium and `x' = x/‖x‖₁`, `y' = y/‖y‖₁`,
//! player 1 has `Ay' = c₁x'` for a positive constant `c₁`. Their payoff is
//! `c₁‖x'‖₂²` and the best pure deviation earns `c₁‖x'‖∞`, so the guaranteed
//! fraction is `‖x'‖₂²/‖x'‖∞ ≥ 2/(√m+1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{PayoffMatrix, TwoPlayerGame, UnitSphereStrategy};
use crate::solver::solve_pusg;
use crate::spectral::IterationConfig;
use crate::vector::{dot, norm1, norm2, norm_inf};

/// Relative disagreement allowed between the two deviation-payoff routes.
pub const DEVIATION_CROSS_CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxMsneResult {
    pub x1: Vec<f64>,
    pub y1: Vec<f64>,
    pub factor_1: f64,
    pub factor_2: f64,
    /// `2/(√m+1)`.
    pub bound_1: f64,
    /// `2/(√n+1)`.
    pub bound_2: f64,
    /// Standard-game payoffs `x'ᵀAy'` and `y'ᵀBx'`.
    pub u_1: f64,
    pub u_2: f64,
    /// Best pure-deviation payoffs `max_i (Ay')_i`, `max_j (Bx')_j`.
    pub best_deviation_1: f64,
    pub best_deviation_2: f64,
    /// `c₁` with `Ay' = c₁x'`, and `c₂` with `Bx' = c₂y'`.
    pub scale_1: f64,
    pub scale_2: f64,
}

impl ApproxMsneResult {
    /// Multiplicative approximation guarantee `max(1/factor_1, 1/factor_2)`.
    pub fn multiplicative_ratio(&self) -> f64 {
        (1.0 / self.factor_1).max(1.0 / self.factor_2)
    }
}

/// `2/(√n+1)`, the minimum of `‖p‖₂²/‖p‖∞` over the simplex in `Rⁿ`.
pub fn factor_lower_bound(n: usize) -> f64 {
    2.0 / ((n as f64).sqrt() + 1.0)
}

/// `x/‖x‖₁` for a nonnegative strategy.
pub fn l1_normalize(x: &UnitSphereStrategy) -> Result<Vec<f64>> {
    if x.values().iter().any(|v| *v < 0.0) {
        return Err(Error::Precondition(
            "l1 normalization needs a nonnegative strategy".into(),
        ));
    }
    let s = norm1(x.values());
    Ok(x.values().iter().map(|v| v / s).collect())
}

/// `‖p‖₂²/‖p‖∞` for a probability vector.
pub fn approx_factor(p: &[f64]) -> Result<f64> {
    if p.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::Precondition(
            "probability vector must be nonnegative".into(),
        ));
    }
    let inf = norm_inf(p);
    if inf == 0.0 {
        return Err(Error::Precondition("zero probability vector".into()));
    }
    if (norm1(p) - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!(
            "probability vector sums to {}",
            norm1(p)
        )));
    }
    let n2 = norm2(p);
    Ok(n2 * n2 / inf)
}

/// Best pure-strategy payoff against `opponent`: the largest entry of `M·opponent`.
pub fn best_pure_deviation(m: &PayoffMatrix, opponent: &[f64]) -> f64 {
    m.mul_vec(opponent)
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max)
}

fn player_side(m: &PayoffMatrix, own: &[f64], opponent: &[f64]) -> Result<(f64, f64, f64, f64)> {
    let image = m.mul_vec(opponent);
    let u = dot(own, &image);
    let scale = u / dot(own, own);
    let identity = scale * norm_inf(own);
    let explicit = best_pure_deviation(m, opponent);
    if (identity - explicit).abs() > DEVIATION_CROSS_CHECK_TOL * explicit.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "deviation payoff mismatch: {identity} via the proportionality identity, {explicit} by enumeration"
        )));
    }
    Ok((u, explicit, scale, approx_factor(own)?))
}

/// Solve the positive sphere game, L1-normalize both strategies and certify
/// the per-player approximation factors.
pub fn simple_scheme(game: &TwoPlayerGame, cfg: &IterationConfig) -> Result<ApproxMsneResult> {
    let cert = solve_pusg(game, cfg)?;
    let x1 = l1_normalize(&cert.profile.x)?;
    let y1 = l1_normalize(&cert.profile.y)?;
    let (u_1, best_deviation_1, scale_1, factor_1) = player_side(game.a(), &x1, &y1)?;
    let (u_2, best_deviation_2, scale_2, factor_2) = player_side(game.b(), &y1, &x1)?;
    Ok(ApproxMsneResult {
        bound_1: factor_lower_bound(x1.len()),
        bound_2: factor_lower_bound(y1.len()),
        x1,
        y1,
        factor_1,
        factor_2,
        u_1,
        u_2,
        best_deviation_1,
        best_deviation_2,
        scale_1,
        scale_2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_positive_game;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn unit(v: &[f64]) -> UnitSphereStrategy {
        UnitSphereStrategy::new(v.to_vec(), true).unwrap()
    }

    #[test]
    fn l1_normalize_examples() {
        assert_eq!(l1_normalize(&unit(&[S, S])).unwrap(), vec![0.5, 0.5]);
        assert_eq!(l1_normalize(&unit(&[1.0, 0.0])).unwrap(), vec![1.0, 0.0]);
        let p = l1_normalize(&unit(&[0.6, 0.8])).unwrap();
        assert!((p[0] - 3.0 / 7.0).abs() < 1e-15 && (p[1] - 4.0 / 7.0).abs() < 1e-15);
        let neg = UnitSphereStrategy::new(vec![0.6, -0.8], false).unwrap();
        assert!(matches!(l1_normalize(&neg), Err(Error::Precondition(_))));
    }

    #[test]
    fn approx_factor_examples() {
        for n in 1..8 {
            let p = vec![1.0 / n as f64; n];
            assert!((approx_factor(&p).unwrap() - 1.0).abs() < 1e-14);
        }
        let f = approx_factor(&[0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0]).unwrap();
        assert!((f - 2.0 / 3.0).abs() < 1e-15);
        assert!((f - factor_lower_bound(4)).abs() < 1e-15);
        assert_eq!(approx_factor(&[1.0, 0.0]).unwrap(), 1.0);
        assert!(approx_factor(&[0.0, 0.0]).is_err());
        assert!(approx_factor(&[1.5, -0.5]).is_err());
    }

    #[test]
    fn analytic_minimizer_attains_bound() {
        for n in [2usize, 3, 4, 9, 16, 25] {
            let r = (n as f64).sqrt();
            let mut p = vec![(r - 1.0) / ((n as f64 - 1.0) * r); n];
            p[0] = 1.0 / r;
            assert!((approx_factor(&p).unwrap() - factor_lower_bound(n)).abs() < 1e-12);
        }
    }

    #[test]
    fn all_ones_is_exact() {
        let ones = PayoffMatrix::constant(2, 2, 1.0);
        let g = TwoPlayerGame::new(ones.clone(), ones).unwrap();
        let r = simple_scheme(&g, &IterationConfig::default()).unwrap();
        for v in r.x1.iter().chain(&r.y1) {
            assert!((v - 0.5).abs() < 1e-12);
        }
        assert!((r.factor_1 - 1.0).abs() < 1e-12 && (r.factor_2 - 1.0).abs() < 1e-12);
        assert!((r.u_1 - r.best_deviation_1).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_example() {
        let g = TwoPlayerGame::new(
            PayoffMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]),
            PayoffMatrix::from_rows(&[[5.0, 6.0], [7.0, 8.0]]),
        )
        .unwrap();
        let r = simple_scheme(&g, &IterationConfig::default()).unwrap();
        // Perron vector of AB = [[19,22],[43,50]] by the quadratic formula.
        let rho = (69.0 + 4745f64.sqrt()) / 2.0;
        let (vx, vy) = (22.0, rho - 19.0);
        let x1 = [vx / (vx + vy), vy / (vx + vy)];
        assert!((r.x1[0] - x1[0]).abs() < 1e-10 && (r.x1[1] - x1[1]).abs() < 1e-10);
        assert!((r.x1[0] - 0.3058).abs() < 1e-3);
        let f = (x1[0] * x1[0] + x1[1] * x1[1]) / x1[1];
        assert!((r.factor_1 - f).abs() < 1e-10);
        assert!((r.factor_1 - 0.829).abs() < 1e-3);
        assert!(r.factor_1 >= r.bound_1);
        let ay = g.a().mul_vec(&r.y1);
        let b1 = ay[0].max(ay[1]);
        assert!(r.u_1 >= r.factor_1 * b1 - 1e-9);
    }

    #[test]
    fn single_action_factors_are_one() {
        let g = TwoPlayerGame::new(
            PayoffMatrix::from_rows(&[[3.0]]),
            PayoffMatrix::from_rows(&[[0.5]]),
        )
        .unwrap();
        let r = simple_scheme(&g, &IterationConfig::default()).unwrap();
        assert_eq!((r.factor_1, r.factor_2), (1.0, 1.0));
        assert_eq!((r.bound_1, r.bound_2), (1.0, 1.0));
    }

    #[test]
    fn non_positive_game_is_rejected() {
        let g = TwoPlayerGame::new(PayoffMatrix::identity(2), PayoffMatrix::identity(2)).unwrap();
        assert!(matches!(
            simple_scheme(&g, &IterationConfig::default()),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn random_games_respect_bounds_and_deviations() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..40 {
            let m = rng.gen_range(1..=12);
            let n = rng.gen_range(1..=12);
            let g = random_positive_game(&mut rng, m, n, 0.0, 1.0);
            let r = simple_scheme(&g, &IterationConfig::default()).unwrap();
            assert!(r.factor_1 > 0.0 && r.factor_1 <= 1.0 + 1e-12);
            assert!(r.factor_1 >= r.bound_1 - 1e-9 && r.factor_2 >= r.bound_2 - 1e-9);
            for i in 0..m {
                let e = UnitSphereStrategy::basis(m, i);
                let dev = dot(e.values(), &g.a().mul_vec(&r.y1));
                assert!(r.u_1 >= (r.factor_1 - 1e-9) * dev);
            }
            for j in 0..n {
                let dev = g.b().mul_vec(&r.x1)[j];
                assert!(r.u_2 >= (r.factor_2 - 1e-9) * dev);
            }
        }
    }

    fn simplex(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0.0f64..1.0, 1..=max_n).prop_filter_map("nonzero", |v| {
            let s: f64 = v.iter().sum();
            (s > 1e-6).then(|| v.iter().map(|x| x / s).collect())
        })
    }

    proptest! {
        #[test]
        fn factor_respects_lower_bound(p in simplex(30)) {
            let f = approx_factor(&p).unwrap();
            prop_assert!(f >= factor_lower_bound(p.len()) - 1e-12);
            prop_assert!(f <= 1.0 + 1e-12);
        }

        #[test]
        fn factor_is_permutation_invariant(p in simplex(12), k in 0usize..12) {
            let mut q = p.clone();
            q.rotate_left(k % p.len());
            q.reverse();
            prop_assert!((approx_factor(&p).unwrap() - approx_factor(&q).unwrap()).abs() < 1e-14);
        }

        #[test]
        fn l1_round_trip(v in prop::collection::vec(0.01f64..1.0, 1..10)) {
            let u = UnitSphereStrategy::from_direction(v, true).unwrap();
            let p = l1_normalize(&u).unwrap();
            let back = UnitSphereStrategy::from_direction(p, true).unwrap();
            prop_assert!(crate::vector::dist2(back.values(), u.values()) < 1e-12);
        }
    }
}
