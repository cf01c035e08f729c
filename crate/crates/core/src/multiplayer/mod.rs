//! Games with any number of players. Each player's payoff is a multilinear
//! form in all strategies, stored as one tensor per player.

mod markov;
mod solve;
mod tensor;

pub use markov::{
    compute_delta, markov_check_and_scale, markov_cournot, random_markov_game, MarkovCertificate,
    MarkovRun, DEFAULT_DELTA_CAP, MARKOV_TOL,
};
pub use solve::{
    fixed_point_iterate, ss_hopm, verify_multi_ne, FixedPointRun, HopmResult, MultiVerdict,
    SYMMETRY_TOL,
};
pub use tensor::{
    contract_all_but, contract_tensor_all_but, is_symmetric_tensor, multi_best_response,
    GameTensor, MultiProfile, NormMode,
};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::spectral::IterationConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultiMethod {
    SsHopm,
    MarkovCournot,
    FixedPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiSolveReport {
    pub method: MultiMethod,
    pub equilibrium: MultiProfile,
    pub verdict: MultiVerdict,
    pub iterations: usize,
    pub markov: MarkovCertificate,
    /// L1-normalized iterates for the dynamics-based methods; empty for SS-HOPM.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<MultiProfile>,
}

/// Picks SS-HOPM for shared symmetric positive tensors, Markov Cournot play
/// for certified Markov games, and the plain fixed-point iteration otherwise.
pub fn solve_multi(game: &GameTensor, cfg: &IterationConfig) -> Result<MultiSolveReport> {
    let (_, markov) = markov_check_and_scale(game, MARKOV_TOL)?;
    let n = game.actions()[0];
    let symmetric = game.is_positive()
        && game.is_shared()
        && game.actions().iter().all(|a| *a == n)
        && is_symmetric_tensor(game.tensor(0), game.player_count(), n, SYMMETRY_TOL);
    log::debug!(
        "multi solve: symmetric {symmetric}, markov contraction {}",
        markov.contraction_ok
    );
    if symmetric {
        let r = ss_hopm(game, &vec![1.0; n], cfg)?;
        let equilibrium = MultiProfile::symmetric(&r.x, game.player_count(), NormMode::L2)?;
        let verdict = verify_multi_ne(game, &equilibrium, crate::solver::VERIFY_EPS)?;
        return Ok(MultiSolveReport {
            method: MultiMethod::SsHopm,
            equilibrium,
            verdict,
            iterations: r.iterations,
            markov,
            trace: Vec::new(),
        });
    }
    if markov.contraction_ok {
        let r = markov_cournot(game, None, cfg)?;
        return Ok(MultiSolveReport {
            method: MultiMethod::MarkovCournot,
            equilibrium: r.equilibrium,
            verdict: r.verdict,
            iterations: r.rounds,
            markov,
            trace: r.trace,
        });
    }
    let start = MultiProfile::uniform(game.actions(), NormMode::L1);
    let r = fixed_point_iterate(game, &start, cfg)?;
    Ok(MultiSolveReport {
        method: MultiMethod::FixedPoint,
        equilibrium: r.equilibrium,
        verdict: r.verdict,
        iterations: r.iterations,
        markov,
        trace: r.trace,
    })
}
