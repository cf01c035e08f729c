use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{TwoPlayerGame, NONNEG_CLAMP, UNIT_NORM_TOL};
use crate::vector::{norm1, norm2};

/// Payoff tensors of an m-player game, one per player, all of shape
/// `n₁×…×n_m` stored row-major (last index fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTensor", into = "RawTensor")]
pub struct GameTensor {
    actions: Vec<usize>,
    tensors: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawTensor {
    actions: Vec<usize>,
    tensors: Vec<Vec<f64>>,
}

impl TryFrom<RawTensor> for GameTensor {
    type Error = Error;
    fn try_from(raw: RawTensor) -> Result<Self> {
        GameTensor::new(raw.actions, raw.tensors)
    }
}

impl From<GameTensor> for RawTensor {
    fn from(g: GameTensor) -> Self {
        RawTensor {
            actions: g.actions,
            tensors: g.tensors,
        }
    }
}

impl GameTensor {
    pub fn new(actions: Vec<usize>, tensors: Vec<Vec<f64>>) -> Result<Self> {
        if actions.len() < 2 {
            return Err(Error::validation(
                "actions",
                "at least two players are required",
            ));
        }
        if let Some(k) = actions.iter().position(|n| *n == 0) {
            return Err(Error::validation(
                format!("actions[{k}]"),
                "player has no actions",
            ));
        }
        if tensors.len() != actions.len() {
            return Err(Error::validation(
                "tensors",
                format!(
                    "expected {} tensors, found {}",
                    actions.len(),
                    tensors.len()
                ),
            ));
        }
        let size: usize = actions.iter().product();
        for (k, t) in tensors.iter().enumerate() {
            if t.len() != size {
                return Err(Error::validation(
                    format!("tensors[{k}]"),
                    format!("expected {size} entries, found {}", t.len()),
                ));
            }
            if let Some(i) = t.iter().position(|v| !v.is_finite()) {
                return Err(Error::validation(
                    format!("tensors[{k}][{i}]"),
                    "entry is not finite",
                ));
            }
        }
        Ok(GameTensor { actions, tensors })
    }

    /// Every player gets a copy of `data`, of shape `n×…×n` (`m` axes).
    pub fn shared(m: usize, n: usize, data: Vec<f64>) -> Result<Self> {
        GameTensor::new(vec![n; m], vec![data; m])
    }

    /// Build entries from `f(player, multi_index)`.
    pub fn from_fn(actions: Vec<usize>, mut f: impl FnMut(usize, &[usize]) -> f64) -> Result<Self> {
        let size: usize = actions.iter().product();
        let mut tensors = vec![Vec::with_capacity(size); actions.len()];
        for flat in 0..size {
            let idx = unravel(flat, &actions);
            for (k, t) in tensors.iter_mut().enumerate() {
                t.push(f(k, &idx));
            }
        }
        GameTensor::new(actions, tensors)
    }

    /// Two-player game as tensors: `A¹ = A`, `A²_{ij} = B_{ji}`.
    pub fn from_two_player(game: &TwoPlayerGame) -> Self {
        GameTensor {
            actions: vec![game.m(), game.n()],
            tensors: vec![
                game.a().data().to_vec(),
                game.b().transpose().data().to_vec(),
            ],
        }
    }

    pub fn player_count(&self) -> usize {
        self.actions.len()
    }

    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    pub fn tensor(&self, k: usize) -> &[f64] {
        &self.tensors[k]
    }

    pub fn tensors(&self) -> &[Vec<f64>] {
        &self.tensors
    }

    pub fn get(&self, k: usize, idx: &[usize]) -> f64 {
        self.tensors[k][ravel(idx, &self.actions)]
    }

    pub fn is_positive(&self) -> bool {
        self.tensors.iter().flatten().all(|v| *v > 0.0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.tensors.iter().flatten().all(|v| *v >= 0.0)
    }

    /// All players share one tensor.
    pub fn is_shared(&self) -> bool {
        self.tensors.windows(2).all(|w| w[0] == w[1])
    }

    pub(crate) fn with_tensors(&self, tensors: Vec<Vec<f64>>) -> Self {
        GameTensor {
            actions: self.actions.clone(),
            tensors,
        }
    }
}

pub(crate) fn unravel(mut flat: usize, shape: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for a in (0..shape.len()).rev() {
        idx[a] = flat % shape[a];
        flat /= shape[a];
    }
    idx
}

pub(crate) fn ravel(idx: &[usize], shape: &[usize]) -> usize {
    idx.iter().zip(shape).fold(0, |acc, (i, n)| acc * n + i)
}

/// Contract one axis of a row-major tensor with `x`.
pub(crate) fn contract_axis(data: &[f64], shape: &[usize], axis: usize, x: &[f64]) -> Vec<f64> {
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    let mut out = vec![0.0; outer * inner];
    for o in 0..outer {
        let base = o * n * inner;
        let dst = &mut out[o * inner..(o + 1) * inner];
        for (i, xi) in x.iter().enumerate() {
            if *xi == 0.0 {
                continue;
            }
            let src = &data[base + i * inner..base + (i + 1) * inner];
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s * xi;
            }
        }
    }
    out
}

/// `v_{i_k} = Σ_{i_j, j≠k} T_{i₁…i_m} Π_{j≠k} x_{j,i_j}` for a tensor of the given shape.
pub fn contract_tensor_all_but(
    data: &[f64],
    shape: &[usize],
    k: usize,
    strategies: &[Vec<f64>],
) -> Result<Vec<f64>> {
    if strategies.len() != shape.len() {
        return Err(Error::DimensionMismatch {
            context: "profile player count",
            expected: shape.len(),
            found: strategies.len(),
        });
    }
    for (j, (s, n)) in strategies.iter().zip(shape).enumerate() {
        if j != k && s.len() != *n {
            return Err(Error::DimensionMismatch {
                context: "strategy length",
                expected: *n,
                found: s.len(),
            });
        }
    }
    if k >= shape.len() {
        return Err(Error::Precondition(format!("no player {k}")));
    }
    let mut cur = data.to_vec();
    let mut cur_shape = shape.to_vec();
    // Contract from the last axis down so axis k keeps its position.
    for j in (0..shape.len()).rev() {
        if j == k {
            continue;
        }
        cur = contract_axis(&cur, &cur_shape, j, &strategies[j]);
        cur_shape.remove(j);
    }
    Ok(cur)
}

/// Player `k`'s payoff gradient: their tensor contracted with every other strategy.
pub fn contract_all_but(game: &GameTensor, k: usize, strategies: &[Vec<f64>]) -> Result<Vec<f64>> {
    if k >= game.player_count() {
        return Err(Error::Precondition(format!("no player {k}")));
    }
    contract_tensor_all_but(game.tensor(k), game.actions(), k, strategies)
}

/// Invariance under every permutation of the indices, checked exactly on the
/// adjacent transpositions that generate the symmetric group.
pub fn is_symmetric_tensor(data: &[f64], m: usize, n: usize, tol: f64) -> bool {
    let shape = vec![n; m];
    if data.len() != n.pow(m as u32) {
        return false;
    }
    for (flat, v) in data.iter().enumerate() {
        let mut idx = unravel(flat, &shape);
        for p in 0..m.saturating_sub(1) {
            idx.swap(p, p + 1);
            let w = data[ravel(&idx, &shape)];
            idx.swap(p, p + 1);
            if (v - w).abs() > tol * (1.0 + v.abs()) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMode {
    L1,
    L2,
}

impl NormMode {
    pub fn norm(self, v: &[f64]) -> f64 {
        match self {
            NormMode::L1 => norm1(v),
            NormMode::L2 => norm2(v),
        }
    }
}

/// Nonnegative strategies of all players, each of unit norm in `norm_mode`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiProfile {
    strategies: Vec<Vec<f64>>,
    norm_mode: NormMode,
}

impl MultiProfile {
    pub fn new(strategies: Vec<Vec<f64>>, norm_mode: NormMode) -> Result<Self> {
        let mut out = Vec::with_capacity(strategies.len());
        for (k, mut s) in strategies.into_iter().enumerate() {
            for v in s.iter_mut() {
                if *v < 0.0 && *v >= -NONNEG_CLAMP {
                    *v = 0.0;
                }
            }
            if s.iter().any(|v| *v < 0.0 || !v.is_finite()) {
                return Err(Error::validation(
                    format!("strategies[{k}]"),
                    "entries must be nonnegative",
                ));
            }
            let nrm = norm_mode.norm(&s);
            if (nrm - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::validation(
                    format!("strategies[{k}]"),
                    format!("{norm_mode:?} norm is {nrm}, expected 1"),
                ));
            }
            out.push(s.iter().map(|v| v / nrm).collect());
        }
        Ok(MultiProfile {
            strategies: out,
            norm_mode,
        })
    }

    /// Rescale arbitrary nonzero nonnegative directions to unit norm.
    pub fn from_directions(strategies: Vec<Vec<f64>>, norm_mode: NormMode) -> Result<Self> {
        let mut scaled = Vec::with_capacity(strategies.len());
        for (k, s) in strategies.into_iter().enumerate() {
            let nrm = norm_mode.norm(&s);
            if nrm == 0.0 || !nrm.is_finite() {
                return Err(Error::validation(
                    format!("strategies[{k}]"),
                    "zero direction",
                ));
            }
            scaled.push(s.iter().map(|v| v / nrm).collect());
        }
        MultiProfile::new(scaled, norm_mode)
    }

    pub fn uniform(actions: &[usize], norm_mode: NormMode) -> Self {
        let strategies = actions.iter().map(|n| vec![1.0; *n]).collect();
        MultiProfile::from_directions(strategies, norm_mode).expect("uniform profile")
    }

    /// Every one of `m` players plays `x`.
    pub fn symmetric(x: &[f64], m: usize, norm_mode: NormMode) -> Result<Self> {
        MultiProfile::from_directions(vec![x.to_vec(); m], norm_mode)
    }

    pub fn strategies(&self) -> &[Vec<f64>] {
        &self.strategies
    }

    pub fn strategy(&self, k: usize) -> &[f64] {
        &self.strategies[k]
    }

    pub fn norm_mode(&self) -> NormMode {
        self.norm_mode
    }

    pub fn player_count(&self) -> usize {
        self.strategies.len()
    }

    pub fn to_mode(&self, mode: NormMode) -> Self {
        MultiProfile::from_directions(self.strategies.clone(), mode).expect("nonzero strategies")
    }

    /// Largest per-player distance in the profile's own norm.
    pub fn max_distance(&self, other: &MultiProfile) -> f64 {
        self.strategies
            .iter()
            .zip(&other.strategies)
            .map(|(a, b)| {
                let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                self.norm_mode.norm(&d)
            })
            .fold(0.0, f64::max)
    }
}

/// Best response of player `k`: the contraction normalized in `mode`.
pub fn multi_best_response(
    game: &GameTensor,
    k: usize,
    profile: &MultiProfile,
    mode: NormMode,
) -> Result<Vec<f64>> {
    let v = contract_all_but(game, k, profile.strategies())?;
    let nrm = mode.norm(&v);
    if nrm == 0.0 || !nrm.is_finite() {
        return Err(Error::Numerical(format!("player {k} contraction vanishes")));
    }
    Ok(v.iter().map(|x| x / nrm).collect())
}
