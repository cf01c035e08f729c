use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::game_file::GameFile;
use crate::error::{Error, Result};
use crate::game::{PayoffMatrix, TwoPlayerGame};
use crate::multiplayer::{random_markov_game, GameTensor};
use crate::random::random_matrix;

/// Largest number of payoff entries per player accepted by [`gen_random`].
pub const MAX_GENERATED_ENTRIES: usize = 1 << 22;
/// Markov fibers start as `U[1, 1 + MARKOV_SPREAD]` draws before normalization.
pub const MARKOV_SPREAD: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameShape {
    TwoPlayer { m: usize, n: usize },
    MultiPlayer { actions: Vec<usize> },
}

impl GameShape {
    fn actions(&self) -> Vec<usize> {
        match self {
            GameShape::TwoPlayer { m, n } => vec![*m, *n],
            GameShape::MultiPlayer { actions } => actions.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryDistribution {
    Uniform01,
    UniformPositive {
        lo: f64,
        hi: f64,
    },
    /// Positive entries whose own-axis fibers sum to 1 for every player.
    Markov,
}

fn check_shape(shape: &GameShape) -> Result<()> {
    let actions = shape.actions();
    if actions.len() < 2 {
        return Err(Error::validation(
            "shape",
            "at least two players are required",
        ));
    }
    if let Some(k) = actions.iter().position(|n| *n == 0) {
        return Err(Error::validation(
            format!("shape[{k}]"),
            "player has no actions",
        ));
    }
    let size = actions
        .iter()
        .try_fold(1usize, |acc, n| acc.checked_mul(*n));
    match size {
        Some(s) if s <= MAX_GENERATED_ENTRIES => Ok(()),
        _ => Err(Error::ExceedsCap {
            what: "payoff tensor".into(),
            size: size.unwrap_or(usize::MAX),
            cap: MAX_GENERATED_ENTRIES,
        }),
    }
}

/// Seeded random game; the same arguments always give the same file.
pub fn gen_random(shape: &GameShape, dist: EntryDistribution, seed: u64) -> Result<GameFile> {
    check_shape(shape)?;
    let (lo, hi) = match dist {
        EntryDistribution::Uniform01 => (0.0, 1.0),
        EntryDistribution::UniformPositive { lo, hi } => {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return Err(Error::validation(
                    "distribution",
                    format!("need 0 < lo < hi, got lo={lo}, hi={hi}"),
                ));
            }
            (lo, hi)
        }
        EntryDistribution::Markov => (1.0, 1.0 + MARKOV_SPREAD),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let file = match (shape, dist) {
        (GameShape::TwoPlayer { m, n }, EntryDistribution::Markov) => {
            let t = random_markov_game(&mut rng, &[*m, *n], MARKOV_SPREAD);
            let a = PayoffMatrix::new(*m, *n, t.tensor(0).to_vec())?;
            let b = PayoffMatrix::new(*m, *n, t.tensor(1).to_vec())?.transpose();
            GameFile::two_player(&TwoPlayerGame::new(a, b)?)
        }
        (GameShape::TwoPlayer { m, n }, _) => {
            let a = random_matrix(&mut rng, *m, *n, lo, hi);
            let b = random_matrix(&mut rng, *n, *m, lo, hi);
            GameFile::two_player(&TwoPlayerGame::new(a, b)?)
        }
        (GameShape::MultiPlayer { actions }, EntryDistribution::Markov) => {
            GameFile::multi_player(&random_markov_game(&mut rng, actions, MARKOV_SPREAD))
        }
        (GameShape::MultiPlayer { actions }, _) => {
            let dist = rand_distr::Uniform::new(lo, hi);
            let t = GameTensor::from_fn(actions.clone(), |_, _| {
                rand_distr::Distribution::sample(&dist, &mut rng)
            })?;
            GameFile::multi_player(&t)
        }
    };
    Ok(file.with_seed(seed))
}
