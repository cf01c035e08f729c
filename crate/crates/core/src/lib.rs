//! Equilibrium computation for unit-sphere games.
//!
//! Players pick unit 2-norm vectors and earn bilinear (two players) or
//! multilinear (more players) payoffs. Two-player equilibria are read off the
//! real eigenpairs of `AB`; positive games have a unique equilibrium found by
//! power iteration or Cournot play. Multiplayer games are handled by SS-HOPM
//! for symmetric tensors and contraction dynamics for Markov games.

pub mod approx;
pub mod dynamics;
pub mod error;
pub mod game;
pub mod io;
pub mod multiplayer;
pub mod random;
pub mod solver;
pub mod spectral;
pub mod vector;

pub use approx::{
    approx_factor, factor_lower_bound, l1_normalize, simple_scheme, ApproxMsneResult,
};
pub use dynamics::{
    cournot_run, estimate_rate, even_round_ratio, even_subsequence_check, LearningTrace, StopReason,
};
pub use error::{Error, Result};
pub use game::{
    best_response, best_response_1, best_response_2, commutes, is_positive_game, utility_1,
    utility_2, BestResponse, EquilibriumCertificate, PayoffMatrix, StrategyProfile, TwoPlayerGame,
    UnitSphereStrategy,
};
pub use multiplayer::{
    compute_delta, contract_all_but, markov_check_and_scale, markov_cournot, multi_best_response,
    solve_multi, ss_hopm, verify_multi_ne, GameTensor, MarkovCertificate, MultiProfile,
    MultiVerdict, NormMode,
};
pub use solver::{
    enumerate_ne, has_ne, solve_auto, solve_pusg, solve_pusg_from, symmetric_commuting_ne,
    verify_ne, FoundEquilibrium, NeBranch, NeVerdict, SolveMethod, SolveReport,
};
pub use spectral::{
    power_iteration, real_eigenpairs, spectral_radius_pair_check, EigenPair, IterationConfig,
    SpectralResult,
};
