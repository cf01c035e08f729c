//! Markov games: each player's payoffs along their own axis sum to a constant
//! whatever the others play. After scaling that constant to 1 the
//! L1-normalized best-response map is a contraction whenever every
//! `δ_k > (m−2)/(m−1)`, giving a unique equilibrium reached by Cournot play.

use serde::{Deserialize, Serialize};

use super::solve::{verify_multi_ne, MultiVerdict};
use super::tensor::{contract_all_but, contract_axis, unravel, GameTensor, MultiProfile, NormMode};
use crate::error::{Error, Result};
use crate::spectral::IterationConfig;
use crate::vector::dist1;
use rand::Rng;

/// Largest action count accepted by [`compute_delta`].
pub const DEFAULT_DELTA_CAP: usize = 20;
/// Relative tolerance for fiber sums to count as constant.
pub const MARKOV_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovCertificate {
    pub is_markov: bool,
    /// Fiber-sum constants `c_k` of the unscaled game; empty unless Markov.
    pub constants: Vec<f64>,
    /// `δ_k` of the scaled game; empty unless Markov.
    pub deltas: Vec<f64>,
    /// Every `δ_k > (m−2)/(m−1)`.
    pub contraction_ok: bool,
}

impl MarkovCertificate {
    /// `max_k (1 − δ_k)`.
    pub fn rate(&self) -> f64 {
        self.deltas.iter().map(|d| 1.0 - d).fold(0.0, f64::max)
    }

    pub fn threshold(m: usize) -> f64 {
        (m as f64 - 2.0) / (m as f64 - 1.0)
    }
}

/// Sums over player `k`'s own axis, one per assignment of the other indices.
fn fiber_sums(game: &GameTensor, k: usize) -> Vec<f64> {
    let ones = vec![1.0; game.actions()[k]];
    contract_axis(game.tensor(k), game.actions(), k, &ones)
}

/// Fibers along axis `k`, one row per assignment of the other indices.
fn fibers(data: &[f64], shape: &[usize], k: usize) -> Vec<Vec<f64>> {
    let n = shape[k];
    let inner: usize = shape[k + 1..].iter().product();
    let outer: usize = shape[..k].iter().product();
    let mut out = Vec::with_capacity(outer * inner);
    for o in 0..outer {
        for i in 0..inner {
            out.push((0..n).map(|a| data[(o * n + a) * inner + i]).collect());
        }
    }
    out
}

/// `δ_k = min_V [min_o Σ_{i∈V} A_o,i + min_o Σ_{i∉V} A_o,i]` over all subsets `V`
/// of player `k`'s actions, `o` ranging over assignments of the other players.
/// Exact enumeration in Gray-code order; errors when `n_k > cap`.
pub fn compute_delta(game: &GameTensor, k: usize, cap: usize) -> Result<f64> {
    let n = game.actions()[k];
    if n > cap {
        return Err(Error::ExceedsCap {
            what: format!("player {k} action count"),
            size: n,
            cap,
        });
    }
    let fib = fibers(game.tensor(k), game.actions(), k);
    let totals: Vec<f64> = fib.iter().map(|f| f.iter().sum()).collect();
    let mut inside = vec![0.0; fib.len()];
    let eval = |inside: &[f64]| {
        let a = inside.iter().fold(f64::INFINITY, |m, v| m.min(*v));
        let b = inside
            .iter()
            .zip(&totals)
            .fold(f64::INFINITY, |m, (v, t)| m.min(t - v));
        a + b
    };
    let mut best = eval(&inside);
    let mut gray = 0u64;
    for step in 1..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        gray ^= 1 << bit;
        let sign = if gray & (1 << bit) != 0 { 1.0 } else { -1.0 };
        for (s, f) in inside.iter_mut().zip(&fib) {
            *s += sign * f[bit];
        }
        best = best.min(eval(&inside));
    }
    Ok(best.clamp(0.0, 1.0))
}

/// Detect the Markov property, scale each `A^k` to unit fiber sums and
/// compute the `δ_k`. Non-positive or non-Markov games yield `is_markov = false`.
pub fn markov_check_and_scale(
    game: &GameTensor,
    tol: f64,
) -> Result<(GameTensor, MarkovCertificate)> {
    let negative = MarkovCertificate {
        is_markov: false,
        constants: Vec::new(),
        deltas: Vec::new(),
        contraction_ok: false,
    };
    if !game.is_positive() {
        return Ok((game.clone(), negative));
    }
    let mut constants = Vec::with_capacity(game.player_count());
    for k in 0..game.player_count() {
        let sums = fiber_sums(game, k);
        let c = sums.iter().sum::<f64>() / sums.len() as f64;
        if sums.iter().any(|s| (s - c).abs() > tol * c) {
            return Ok((game.clone(), negative));
        }
        constants.push(c);
    }
    let scaled = game.with_tensors(
        game.tensors()
            .iter()
            .zip(&constants)
            .map(|(t, c)| t.iter().map(|v| v / c).collect())
            .collect(),
    );
    let deltas = (0..scaled.player_count())
        .map(|k| compute_delta(&scaled, k, DEFAULT_DELTA_CAP))
        .collect::<Result<Vec<_>>>()?;
    let threshold = MarkovCertificate::threshold(game.player_count());
    let contraction_ok = deltas.iter().all(|d| *d > threshold);
    Ok((
        scaled,
        MarkovCertificate {
            is_markov: true,
            constants,
            deltas,
            contraction_ok,
        },
    ))
}

/// Markov game with own-axis fibers drawn from `U[1, 1+spread]` then normalized.
pub fn random_markov_game<R: Rng + ?Sized>(
    rng: &mut R,
    actions: &[usize],
    spread: f64,
) -> GameTensor {
    let raw =
        GameTensor::from_fn(actions.to_vec(), |_, _| rng.gen_range(1.0..1.0 + spread)).unwrap();
    let tensors = (0..actions.len())
        .map(|k| {
            let sums = fiber_sums(&raw, k);
            let others: Vec<usize> = (0..actions.len())
                .filter(|j| *j != k)
                .map(|j| actions[j])
                .collect();
            raw.tensor(k)
                .iter()
                .enumerate()
                .map(|(f, v)| {
                    let mut idx = unravel(f, actions);
                    idx.remove(k);
                    v / sums[super::tensor::ravel(&idx, &others)]
                })
                .collect()
        })
        .collect();
    GameTensor::new(actions.to_vec(), tensors).unwrap()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovRun {
    /// Unique equilibrium with unit 2-norm strategies.
    pub equilibrium: MultiProfile,
    pub verdict: MultiVerdict,
    pub certificate: MarkovCertificate,
    pub rounds: usize,
    /// L1-normalized profiles `x⁰, x¹, …`.
    pub trace: Vec<MultiProfile>,
}

impl MarkovRun {
    /// `εₜ = max_k ‖x_kᵗ − x_k*‖₁` against the final iterate.
    pub fn errors(&self) -> Vec<f64> {
        let last = self.trace.last().expect("non-empty trace");
        self.trace
            .iter()
            .map(|p| max_l1_distance(p, last))
            .collect()
    }

    /// Round-by-round check of `εₜ ≤ (m−1)ᵗ δᵗ ε₀ + slack` with `δ = max_k (1−δ_k)`.
    pub fn error_bound_holds(&self, slack: f64) -> bool {
        let errs = self.errors();
        let m = self.equilibrium.player_count() as f64;
        let q = (m - 1.0) * self.certificate.rate();
        errs.iter()
            .enumerate()
            .all(|(t, e)| *e <= q.powi(t as i32) * errs[0] + slack)
    }
}

pub(crate) fn max_l1_distance(a: &MultiProfile, b: &MultiProfile) -> f64 {
    a.strategies()
        .iter()
        .zip(b.strategies())
        .map(|(x, y)| dist1(x, y))
        .fold(0.0, f64::max)
}

/// Cournot play `x_kᵗ = f(xᵗ⁻¹)_k` on a Markov game in L1-normalized
/// coordinates, from `start` or the uniform profile. Stops once the summed
/// L1 change is at most `cfg.tol`.
pub fn markov_cournot(
    game: &GameTensor,
    start: Option<&MultiProfile>,
    cfg: &IterationConfig,
) -> Result<MarkovRun> {
    cfg.validate()?;
    let (scaled, certificate) = markov_check_and_scale(game, MARKOV_TOL)?;
    if !certificate.is_markov {
        return Err(Error::Precondition(
            "game is not a positive Markov game".into(),
        ));
    }
    if !certificate.contraction_ok {
        return Err(Error::Precondition(format!(
            "contraction condition fails: deltas {:?} must exceed {}",
            certificate.deltas,
            MarkovCertificate::threshold(game.player_count())
        )));
    }
    let mut cur = match start {
        Some(s) => s.to_mode(NormMode::L1),
        None => MultiProfile::uniform(game.actions(), NormMode::L1),
    };
    if cur.strategies().iter().flatten().any(|v| *v <= 0.0) {
        return Err(Error::Precondition(
            "start profile must be strictly positive".into(),
        ));
    }
    let mut trace = vec![cur.clone()];
    for t in 1..=cfg.max_iter {
        let next = (0..scaled.player_count())
            .map(|k| contract_all_but(&scaled, k, cur.strategies()))
            .collect::<Result<Vec<_>>>()?;
        // Conservation keeps unit L1 norms; renormalize only to absorb rounding.
        let next = MultiProfile::from_directions(next, NormMode::L1)?;
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
            return Ok(MarkovRun {
                equilibrium,
                verdict,
                certificate,
                rounds: t,
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
