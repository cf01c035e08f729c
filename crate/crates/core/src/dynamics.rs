//! Cournot adjustment: both players simultaneously best-respond to the
//! previous round.
//!
//! On a positive game the even rounds satisfy `x²ᵏ ∝ (AB)ᵏx⁰`, so the
//! dynamics is a power iteration on `AB` and converges linearly with ratio
//! `|λ₂|/λ₁` per two rounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{best_response, BestResponse, StrategyProfile, TwoPlayerGame};
use crate::spectral::IterationConfig;
use crate::vector::{dist2, normalized};

/// Quantization step for cycle detection.
pub const CYCLE_QUANTUM: f64 = 1e-9;
/// Number of past rounds searched for a repeated state.
pub const CYCLE_WINDOW: usize = 64;
/// A repeat only counts as a cycle while the dynamics still moves by more
/// than this per round; slower motion is left to the convergence test.
pub const CYCLE_MIN_STEP: f64 = 1e-8;
/// Errors at or below this are treated as exact zeros when fitting rates.
pub const RATE_NOISE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ResidualBelowTol,
    MaxRounds,
    CycleDetected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearningTrace {
    /// `rounds[0]` is the starting profile.
    pub rounds: Vec<StrategyProfile>,
    /// Distance to the reference profile per round; empty without a reference.
    pub errors: Vec<f64>,
    pub fitted_ratio: Option<f64>,
    pub converged: bool,
    pub stop_reason: StopReason,
}

/// One CSV row of an exported trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub round: usize,
    pub player: usize,
    pub coord: usize,
    pub value: f64,
    pub error: Option<f64>,
}

impl LearningTrace {
    pub fn last(&self) -> &StrategyProfile {
        self.rounds.last().expect("trace holds the start profile")
    }

    /// Long-format rows: one per (round, player, coordinate).
    pub fn rows(&self) -> impl Iterator<Item = TraceRow> + '_ {
        self.rounds.iter().enumerate().flat_map(move |(t, p)| {
            let err = self.errors.get(t).copied();
            let xs =
                p.x.values()
                    .iter()
                    .enumerate()
                    .map(move |(i, v)| (1, i, *v));
            let ys =
                p.y.values()
                    .iter()
                    .enumerate()
                    .map(move |(i, v)| (2, i, *v));
            xs.chain(ys).map(move |(player, coord, value)| TraceRow {
                round: t,
                player,
                coord,
                value,
                error: err,
            })
        })
    }
}

fn quantize(p: &StrategyProfile) -> Vec<i64> {
    p.x.values()
        .iter()
        .chain(p.y.values())
        .map(|v| (v / CYCLE_QUANTUM).round() as i64)
        .collect()
}

/// Run simultaneous best-response dynamics from `start`.
///
/// Stops when `‖xᵗ⁺¹−xᵗ‖₂ + ‖yᵗ⁺¹−yᵗ‖₂ ≤ cfg.tol`, when a quantized state
/// repeats inside the last [`CYCLE_WINDOW`] rounds, or after `cfg.max_iter`
/// rounds. A zero image (indifferent best response) aborts with
/// [`Error::Indifferent`]. With a `reference`, per-round errors and a fitted
/// per-round ratio are recorded.
pub fn cournot_run(
    game: &TwoPlayerGame,
    start: &StrategyProfile,
    cfg: &IterationConfig,
    reference: Option<&StrategyProfile>,
) -> Result<LearningTrace> {
    cfg.validate()?;
    crate::game::utility_1(game, start)?;
    let mut rounds = vec![start.clone()];
    let mut keys = std::collections::VecDeque::with_capacity(CYCLE_WINDOW + 1);
    keys.push_back(quantize(start));
    let mut stop = StopReason::MaxRounds;
    for t in 1..=cfg.max_iter {
        let prev = rounds.last().unwrap();
        let x = match best_response(game.a(), &prev.y)? {
            BestResponse::Unique(s) => s,
            BestResponse::Indifferent => {
                return Err(Error::Indifferent {
                    round: t,
                    player: 1,
                })
            }
        };
        let y = match best_response(game.b(), &prev.x)? {
            BestResponse::Unique(s) => s,
            BestResponse::Indifferent => {
                return Err(Error::Indifferent {
                    round: t,
                    player: 2,
                })
            }
        };
        let next = StrategyProfile::new(x, y);
        let step = next.distance(prev);
        let key = quantize(&next);
        rounds.push(next);
        if step <= cfg.tol {
            stop = StopReason::ResidualBelowTol;
            break;
        }
        // Lag ≥ 2: the previous round is excluded, a lag-1 repeat is convergence.
        let n = keys.len();
        let repeated = keys.iter().take(n.saturating_sub(1)).any(|k| *k == key);
        if repeated && step > CYCLE_MIN_STEP {
            log::debug!("cournot: cycle detected at round {}", rounds.len() - 1);
            stop = StopReason::CycleDetected;
            break;
        }
        keys.push_back(key);
        if keys.len() > CYCLE_WINDOW {
            keys.pop_front();
        }
    }
    let converged = stop == StopReason::ResidualBelowTol;
    let errors = reference
        .map(|r| rounds.iter().map(|p| p.distance(r)).collect())
        .unwrap_or_default();
    let mut trace = LearningTrace {
        rounds,
        errors,
        fitted_ratio: None,
        converged,
        stop_reason: stop,
    };
    if let (true, Some(r)) = (converged, reference) {
        trace.fitted_ratio = estimate_rate(&trace, r).ok();
    }
    Ok(trace)
}

fn log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mt = points.iter().map(|p| p.0).sum::<f64>() / n;
    let ml = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (t, e) in points {
        num += (t - mt) * (e.ln() - ml);
        den += (t - mt) * (t - mt);
    }
    num / den
}

/// Per-round linear-convergence ratio: `exp` of the least-squares slope of
/// `ln(errorₜ)` against `t` over the tail half of the trace.
///
/// Errors at or below [`RATE_NOISE_FLOOR`] are dropped and the tail is taken
/// over the rounds before the floor is reached. A trace that is exact after
/// the first round reports `0`.
pub fn estimate_rate(trace: &LearningTrace, reference: &StrategyProfile) -> Result<f64> {
    if !trace.converged {
        return Err(Error::Precondition(
            "rate estimation needs a converged trace".into(),
        ));
    }
    let errors: Vec<f64> = trace.rounds.iter().map(|p| p.distance(reference)).collect();
    let last = match errors.iter().rposition(|e| *e > RATE_NOISE_FLOOR) {
        None | Some(0) => return Ok(0.0),
        Some(t) => t,
    };
    let tail: Vec<(f64, f64)> = (last / 2..=last)
        .filter(|&t| errors[t] > RATE_NOISE_FLOOR)
        .map(|t| (t as f64, errors[t]))
        .collect();
    if tail.len() < 4 {
        return Err(Error::InsufficientData {
            needed: 4,
            found: tail.len(),
        });
    }
    Ok(log_slope(&tail).exp())
}

/// Fitted error ratio per two rounds, using even rounds `t ≥ 2` whose error
/// stays above `floor`. Comparable to `|λ₂|/λ₁` of `AB`.
pub fn even_round_ratio(
    trace: &LearningTrace,
    reference: &StrategyProfile,
    floor: f64,
) -> Result<f64> {
    let points: Vec<(f64, f64)> = trace
        .rounds
        .iter()
        .enumerate()
        .skip(2)
        .step_by(2)
        .map(|(t, p)| ((t / 2) as f64, p.distance(reference)))
        .take_while(|(_, e)| *e > floor)
        .collect();
    if points.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            found: points.len(),
        });
    }
    Ok(log_slope(&points).exp())
}

/// Checks the closed form `x²ᵏ = (AB)ᵏx⁰/‖·‖` and `y²ᵏ = (BA)ᵏy⁰/‖·‖`
/// within `1e-8` for `k = 1..=16` (as far as the trace reaches).
pub fn even_subsequence_check(trace: &LearningTrace, game: &TwoPlayerGame) -> bool {
    let Some(start) = trace.rounds.first() else {
        return false;
    };
    let ab = game.ab();
    let ba = game.ba();
    let mut px = start.x.values().to_vec();
    let mut py = start.y.values().to_vec();
    for k in 1..=16usize {
        if 2 * k >= trace.rounds.len() {
            break;
        }
        let (Some(nx), Some(ny)) = (normalized(&ab.mul_vec(&px)), normalized(&ba.mul_vec(&py)))
        else {
            return false;
        };
        px = nx;
        py = ny;
        let r = &trace.rounds[2 * k];
        if dist2(r.x.values(), &px) > 1e-8 || dist2(r.y.values(), &py) > 1e-8 {
            return false;
        }
    }
    true
}
