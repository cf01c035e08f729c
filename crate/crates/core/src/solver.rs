//! Equilibria of two-player unit-sphere games.
//!
//! A profile `(x, y)` is an equilibrium iff `x ∥ Ay` and `y ∥ Bx` with
//! nonnegative scalings, so `x` is an eigenvector of `AB` with eigenvalue
//! `λμ ≥ 0`. Enumeration walks every nonnegative real eigenpair of `AB` and
//! constructs `y` by one of three branches; every candidate is passed through
//! [`verify_ne`] before it is reported.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{
    is_positive_game, EquilibriumCertificate, StrategyProfile, TwoPlayerGame, UnitSphereStrategy,
};
use crate::spectral::{
    self, power_iteration, rank_info, real_eigenpairs, IterationConfig, SpectralResult, RANK_TOL,
    REAL_EIGENVALUE_TOL,
};
use crate::vector::{dot, norm2, uniform_unit};

/// Eigenvalues of `AB` at or above `-NONNEG_EIGEN_TOL` count as nonnegative.
pub const NONNEG_EIGEN_TOL: f64 = 1e-10;
/// Residual tolerance every reported certificate satisfies.
pub const VERIFY_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    EigenEnumeration,
    PerronPowerIteration,
    CommutingSymmetric,
}

/// Which construction produced an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeBranch {
    /// `Bx ≠ 0`, `y = Bx/‖Bx‖`.
    ImageOfB,
    /// `Bx = 0` and `x ∈ range(A)`: `y ∝ A⁺x` (the `det A ≠ 0` case).
    InverseOfA,
    /// `Bx = 0` and `Ay = 0` for a null vector `y` of `A`.
    NullOfA,
    /// Perron eigenvector of `AB` for a positive game.
    Perron,
    /// Shared Perron eigenvector of commuting `A`, `B`.
    Commuting,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoundEquilibrium {
    pub certificate: EquilibriumCertificate,
    pub branch: NeBranch,
    /// Eigenvalue of `AB` the profile was built from.
    pub eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub equilibria: Vec<FoundEquilibrium>,
    pub method: SolveMethod,
    /// Spectrum of `AB`.
    pub spectrum_summary: SpectralResult,
    /// Set when some nonnegative eigenvalue has a multi-dimensional
    /// eigenspace; only a basis of it was enumerated.
    pub continuum: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rejection {
    /// 1 or 2.
    pub player: usize,
    /// `‖Ay − (xᵀAy)x‖₂` (or the player-2 analogue).
    pub residual: f64,
    pub utility: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NeVerdict {
    Accepted(EquilibriumCertificate),
    Rejected(Rejection),
}

impl NeVerdict {
    pub fn accepted(self) -> Option<EquilibriumCertificate> {
        match self {
            NeVerdict::Accepted(c) => Some(c),
            NeVerdict::Rejected(_) => None,
        }
    }

    pub fn is_accepted(&self) -> bool {
        matches!(self, NeVerdict::Accepted(_))
    }
}

/// Checks the best-response conditions directly: `‖Ay − (xᵀAy)x‖₂ ≤ eps`,
/// `‖Bx − (yᵀBx)y‖₂ ≤ eps`, and both utilities `≥ −eps`.
pub fn verify_ne(game: &TwoPlayerGame, profile: &StrategyProfile, eps: f64) -> Result<NeVerdict> {
    let u1 = crate::game::utility_1(game, profile)?;
    let u2 = crate::game::utility_2(game, profile)?;
    let x = profile.x.values();
    let y = profile.y.values();
    let ay = game.a().mul_vec(y);
    let bx = game.b().mul_vec(x);
    let r1 = norm2(
        &ay.iter()
            .zip(x)
            .map(|(p, q)| p - u1 * q)
            .collect::<Vec<_>>(),
    );
    let r2 = norm2(
        &bx.iter()
            .zip(y)
            .map(|(p, q)| p - u2 * q)
            .collect::<Vec<_>>(),
    );
    if r1 > eps || u1 < -eps {
        return Ok(NeVerdict::Rejected(Rejection {
            player: 1,
            residual: r1,
            utility: u1,
        }));
    }
    if r2 > eps || u2 < -eps {
        return Ok(NeVerdict::Rejected(Rejection {
            player: 2,
            residual: r2,
            utility: u2,
        }));
    }
    Ok(NeVerdict::Accepted(EquilibriumCertificate {
        profile: profile.clone(),
        lambda: u1,
        mu: u2,
        u1,
        u2,
        alignment_residual: r1.max(r2),
    }))
}

/// True iff `AB` has a real eigenvalue `λ ≥ −tol`.
pub fn has_ne(game: &TwoPlayerGame, tol: f64) -> Result<bool> {
    let spectrum_result = real_eigenpairs(&game.ab(), REAL_EIGENVALUE_TOL)?;
    Ok(spectrum_result.pairs.iter().any(|p| p.value >= -tol))
}

fn zero_threshold(m: &crate::game::PayoffMatrix) -> f64 {
    RANK_TOL * m.max_abs().max(f64::MIN_POSITIVE) * (m.rows().max(m.cols()) as f64)
}

fn candidate_ys(
    game: &TwoPlayerGame,
    x: &[f64],
    a_rank: &mut Option<spectral::RankInfo>,
) -> Vec<(Vec<f64>, NeBranch)> {
    let bx = game.b().mul_vec(x);
    if norm2(&bx) > zero_threshold(game.b()) {
        return vec![(bx, NeBranch::ImageOfB)];
    }
    // Bx = 0: player 2 is indifferent, so y only has to make x a best response.
    let info = a_rank.get_or_insert_with(|| rank_info(game.a()));
    let mut out: Vec<(Vec<f64>, NeBranch)> = info
        .null_space
        .iter()
        .map(|v| (v.clone(), NeBranch::NullOfA))
        .collect();
    let pre = spectral::pseudo_solve(game.a(), x);
    let back = game.a().mul_vec(&pre);
    let in_range = crate::vector::dist2(&back, x) <= 1e-8 && norm2(&pre) > 0.0;
    if in_range {
        let mut y = pre;
        // Ay = kx needs k ≥ 0.
        if dot(&game.a().mul_vec(&y), x) < 0.0 {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        out.push((y, NeBranch::InverseOfA));
    }
    out
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(p, q)| p.total_cmp(q))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Every equilibrium reachable from the nonnegative real eigenpairs of `AB`,
/// trying both signs of each eigenvector. An empty list means no equilibrium
/// exists; it is not an error.
pub fn enumerate_ne(game: &TwoPlayerGame, _cfg: &IterationConfig) -> Result<SolveReport> {
    let spectrum = real_eigenpairs(&game.ab(), REAL_EIGENVALUE_TOL)?;
    let mut a_rank = None;
    let mut found: Vec<FoundEquilibrium> = Vec::new();
    let mut continuum = false;
    for pair in spectrum
        .pairs
        .iter()
        .filter(|p| p.value >= -NONNEG_EIGEN_TOL)
    {
        if pair.eigenspace_dim > 1 {
            log::debug!(
                "eigenvalue {} has a {}-dimensional eigenspace",
                pair.value,
                pair.eigenspace_dim
            );
            continuum = true;
        }
        for sign in [1.0, -1.0] {
            let x: Vec<f64> = pair.vector.iter().map(|v| sign * v).collect();
            for (y, branch) in candidate_ys(game, &x, &mut a_rank) {
                let (Ok(xs), Ok(ys)) = (
                    UnitSphereStrategy::from_direction(x.clone(), false),
                    UnitSphereStrategy::from_direction(y, false),
                ) else {
                    continue;
                };
                let profile = StrategyProfile::new(xs, ys);
                if let NeVerdict::Accepted(certificate) = verify_ne(game, &profile, VERIFY_EPS)? {
                    let dup = found
                        .iter()
                        .any(|f| f.certificate.profile.distance(&profile) < 1e-9);
                    if !dup {
                        found.push(FoundEquilibrium {
                            certificate,
                            branch,
                            eigenvalue: pair.value,
                        });
                    }
                }
            }
        }
    }
    found.sort_by(|p, q| {
        q.eigenvalue
            .total_cmp(&p.eigenvalue)
            .then_with(|| {
                lex(
                    p.certificate.profile.x.values(),
                    q.certificate.profile.x.values(),
                )
            })
            .then_with(|| {
                lex(
                    p.certificate.profile.y.values(),
                    q.certificate.profile.y.values(),
                )
            })
    });
    Ok(SolveReport {
        equilibria: found,
        method: SolveMethod::EigenEnumeration,
        spectrum_summary: spectrum,
        continuum,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PusgSolution {
    pub certificate: EquilibriumCertificate,
    /// `ρ(AB)`.
    pub spectral_radius: f64,
    pub iterations: usize,
}

fn require_positive(game: &TwoPlayerGame) -> Result<()> {
    if !is_positive_game(game) {
        return Err(Error::NotPositive {
            what: "game".into(),
        });
    }
    Ok(())
}

/// The unique equilibrium of a positive game, from the uniform start.
pub fn solve_pusg(game: &TwoPlayerGame, cfg: &IterationConfig) -> Result<EquilibriumCertificate> {
    solve_pusg_from(game, &uniform_unit(game.m()), cfg).map(|s| s.certificate)
}

/// As [`solve_pusg`], running the power iteration on `AB` from a chosen
/// positive start.
pub fn solve_pusg_from(
    game: &TwoPlayerGame,
    x0: &[f64],
    cfg: &IterationConfig,
) -> Result<PusgSolution> {
    require_positive(game)?;
    if x0.iter().any(|v| *v < 0.0) {
        return Err(Error::Precondition(
            "power iteration start must be nonnegative".into(),
        ));
    }
    let pi = power_iteration(&game.ab(), x0, cfg)?;
    let x = UnitSphereStrategy::from_direction(pi.pair.vector, true)?;
    let y = UnitSphereStrategy::from_direction(game.b().mul_vec(x.values()), true)?;
    let profile = StrategyProfile::new(x, y);
    match verify_ne(game, &profile, VERIFY_EPS)? {
        NeVerdict::Accepted(certificate) => Ok(PusgSolution {
            certificate,
            spectral_radius: pi.pair.value,
            iterations: pi.iterations,
        }),
        NeVerdict::Rejected(r) => Err(Error::Numerical(format!(
            "Perron profile failed verification for player {} (residual {:e})",
            r.player, r.residual
        ))),
    }
}

/// Symmetric equilibrium `(x, x)` of a positive game with commuting square
/// payoff matrices; `x` is the Perron vector of `A`.
pub fn symmetric_commuting_ne(
    game: &TwoPlayerGame,
    cfg: &IterationConfig,
) -> Result<EquilibriumCertificate> {
    require_positive(game)?;
    let scale = game.a().max_abs() * game.b().max_abs() * game.m() as f64;
    if !crate::game::commutes(game, 1e-10 * scale.max(1.0))? {
        return Err(Error::Precondition("payoff matrices do not commute".into()));
    }
    let pi = power_iteration(game.a(), &uniform_unit(game.m()), cfg)?;
    let x = UnitSphereStrategy::from_direction(pi.pair.vector, true)?;
    let profile = StrategyProfile::new(x.clone(), x);
    verify_ne(game, &profile, VERIFY_EPS)?
        .accepted()
        .ok_or_else(|| Error::Numerical("shared Perron vector failed verification".into()))
}

/// Positive games go through [`solve_pusg`]; everything else is enumerated.
pub fn solve_auto(game: &TwoPlayerGame, cfg: &IterationConfig) -> Result<SolveReport> {
    if !is_positive_game(game) {
        return enumerate_ne(game, cfg);
    }
    let sol = solve_pusg_from(game, &uniform_unit(game.m()), cfg)?;
    let spectrum = real_eigenpairs(&game.ab(), REAL_EIGENVALUE_TOL)?;
    Ok(SolveReport {
        equilibria: vec![FoundEquilibrium {
            certificate: sol.certificate,
            branch: NeBranch::Perron,
            eigenvalue: sol.spectral_radius,
        }],
        method: SolveMethod::PerronPowerIteration,
        spectrum_summary: spectrum,
        continuum: false,
    })
}
