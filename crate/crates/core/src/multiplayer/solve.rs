use serde::{Deserialize, Serialize};

use super::tensor::{
    contract_all_but, contract_tensor_all_but, is_symmetric_tensor, GameTensor, MultiProfile,
    NormMode,
};
use crate::error::{Error, Result};
use crate::spectral::IterationConfig;
use crate::vector::{dist1, dist2, dot, norm2};

/// Tolerance for the exact symmetry test of SS-HOPM inputs.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiVerdict {
    pub accepted: bool,
    /// `λ_k = x_kᵀ v_k` with `v_k` the contraction for player `k`.
    pub lambdas: Vec<f64>,
    /// `‖v_k − λ_k x_k‖₂`.
    pub residuals: Vec<f64>,
    /// First failing player, if any.
    pub failing_player: Option<usize>,
}

/// Checks `contract_all_but(A^k, x, k) = λ_k x_k` with `λ_k ≥ 0` for every
/// player, after rescaling the profile to unit 2-norms.
pub fn verify_multi_ne(
    game: &GameTensor,
    profile: &MultiProfile,
    eps: f64,
) -> Result<MultiVerdict> {
    if profile.player_count() != game.player_count() {
        return Err(Error::DimensionMismatch {
            context: "profile player count",
            expected: game.player_count(),
            found: profile.player_count(),
        });
    }
    let p = profile.to_mode(NormMode::L2);
    let mut lambdas = Vec::new();
    let mut residuals = Vec::new();
    let mut failing = None;
    for k in 0..game.player_count() {
        if p.strategy(k).len() != game.actions()[k] {
            return Err(Error::DimensionMismatch {
                context: "strategy length",
                expected: game.actions()[k],
                found: p.strategy(k).len(),
            });
        }
        let v = contract_all_but(game, k, p.strategies())?;
        let x = p.strategy(k);
        let lambda = dot(x, &v);
        let r: Vec<f64> = v.iter().zip(x).map(|(vi, xi)| vi - lambda * xi).collect();
        let res = norm2(&r);
        if failing.is_none() && (res > eps || lambda < -eps) {
            failing = Some(k);
        }
        lambdas.push(lambda);
        residuals.push(res);
    }
    Ok(MultiVerdict {
        accepted: failing.is_none(),
        lambdas,
        residuals,
        failing_player: failing,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopmResult {
    pub x: Vec<f64>,
    pub lambda: f64,
    pub alpha: f64,
    pub iterations: usize,
    /// `λᵗ` for `t = 0, 1, …`.
    pub lambda_history: Vec<f64>,
}

/// Shifted symmetric higher-order power method on a shared, fully symmetric,
/// positive tensor. Stops once both `|λᵗ⁺¹−λᵗ|` and `‖xᵗ⁺¹−xᵗ‖₂` are at most
/// `cfg.tol`.
pub fn ss_hopm(game: &GameTensor, x0: &[f64], cfg: &IterationConfig) -> Result<HopmResult> {
    cfg.validate()?;
    let m = game.player_count();
    let n = game.actions()[0];
    if !game.actions().iter().all(|a| *a == n) || !game.is_shared() {
        return Err(Error::Precondition(
            "SS-HOPM needs one tensor shared by all players".into(),
        ));
    }
    let a = game.tensor(0);
    if !is_symmetric_tensor(a, m, n, SYMMETRY_TOL) {
        return Err(Error::Precondition(
            "tensor is not symmetric under index permutations".into(),
        ));
    }
    if !game.is_positive() {
        return Err(Error::NotPositive {
            what: "tensor".into(),
        });
    }
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            context: "SS-HOPM start",
            expected: n,
            found: x0.len(),
        });
    }
    if x0.iter().any(|v| *v <= 0.0) {
        return Err(Error::Precondition(
            "SS-HOPM start must be strictly positive".into(),
        ));
    }
    let alpha = (m as f64 * a.iter().sum::<f64>()).ceil();
    let shape = game.actions();
    let grad = |x: &[f64]| contract_tensor_all_but(a, shape, 0, &vec![x.to_vec(); m]);

    let mut x: Vec<f64> = x0.iter().map(|v| v / norm2(x0)).collect();
    let mut g = grad(&x)?;
    let mut lambda = dot(&x, &g);
    let mut history = vec![lambda];
    for t in 1..=cfg.max_iter {
        let y: Vec<f64> = g.iter().zip(&x).map(|(gi, xi)| gi + alpha * xi).collect();
        let ny = norm2(&y);
        let next: Vec<f64> = y.iter().map(|v| v / ny).collect();
        g = grad(&next)?;
        let next_lambda = dot(&next, &g);
        let dx = dist2(&next, &x);
        let dl = (next_lambda - lambda).abs();
        x = next;
        lambda = next_lambda;
        history.push(lambda);
        if dl <= cfg.tol && dx <= cfg.tol {
            return Ok(HopmResult {
                x,
                lambda,
                alpha,
                iterations: t,
                lambda_history: history,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        residual: history
            .windows(2)
            .last()
            .map_or(0.0, |w| (w[1] - w[0]).abs()),
        last_iterate: x,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRun {
    /// Equilibrium rescaled to unit 2-norms.
    pub equilibrium: MultiProfile,
    pub verdict: MultiVerdict,
    pub iterations: usize,
    /// L1-normalized iterates, starting with the initial profile.
    pub trace: Vec<MultiProfile>,
}

/// Simultaneous application of `f(x)_k = v_k/‖v_k‖₁`, `v_k` the player-k
/// contraction. For general nonnegative games this is a heuristic: it may
/// cycle or drift, in which case a non-convergence error is returned.
pub fn fixed_point_iterate(
    game: &GameTensor,
    start: &MultiProfile,
    cfg: &IterationConfig,
) -> Result<FixedPointRun> {
    cfg.validate()?;
    if !game.is_nonnegative() {
        return Err(Error::Precondition(
            "fixed-point dynamics needs nonnegative tensors".into(),
        ));
    }
    let mut cur = start.to_mode(NormMode::L1);
    let mut trace = vec![cur.clone()];
    for t in 1..=cfg.max_iter {
        let mut next = Vec::with_capacity(game.player_count());
        for k in 0..game.player_count() {
            next.push(super::tensor::multi_best_response(
                game,
                k,
                &cur,
                NormMode::L1,
            )?);
        }
        let next = MultiProfile::new(next, NormMode::L1)?;
        let change: f64 = cur
            .strategies()
            .iter()
            .zip(next.strategies())
            .map(|(a, b)| dist1(a, b))
            .sum();
        trace.push(next.clone());
        cur = next;
        if change <= cfg.tol {
            let equilibrium = cur.to_mode(NormMode::L2);
            let verdict = verify_multi_ne(game, &equilibrium, crate::solver::VERIFY_EPS)?;
            return Ok(FixedPointRun {
                equilibrium,
                verdict,
                iterations: t,
                trace,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        residual: f64::NAN,
        last_iterate: cur.strategies().concat(),
    })
}
