use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use usg_core::dynamics::{cournot_run, StopReason};
use usg_core::io::{
    gen_random, load_game, load_result, write_multi_trace_csv, write_trace_csv, EntryDistribution,
    Game, GameShape, LearningSummary, LoadedGame, ResultFile, StoredEquilibrium,
};
use usg_core::multiplayer::{solve_multi, GameTensor};
use usg_core::random::random_positive_unit;
use usg_core::solver::{solve_pusg_from, VERIFY_EPS};
use usg_core::spectral::REAL_EIGENVALUE_TOL;
use usg_core::vector::uniform_unit;
use usg_core::{
    enumerate_ne, has_ne, real_eigenpairs, simple_scheme, verify_ne, Error, IterationConfig,
    Result, StrategyProfile, TwoPlayerGame,
};

use crate::args::{Common, Dist, GenArgs};
use crate::render;

pub const EXIT_OK: u8 = 0;
pub const EXIT_NON_CONVERGENCE: u8 = 3;
pub const EXIT_NO_EQUILIBRIUM: u8 = 4;
pub const EXIT_VALIDATION: u8 = 2;

/// Everything a command produces: the JSON payload, a text summary and the exit code.
pub struct Report {
    pub json: String,
    pub text: String,
    pub exit: u8,
}

impl Report {
    fn from_result(result: &ResultFile, text: String, exit: u8) -> Result<Self> {
        Ok(Report {
            json: result.to_json()?,
            text,
            exit,
        })
    }
}

fn config(common: &Common) -> Result<IterationConfig> {
    let cfg = IterationConfig::default()
        .with_tol(common.tol)
        .with_max_iter(common.max_iter)
        .with_seed(common.seed);
    cfg.validate()?;
    Ok(cfg)
}

fn two_player(loaded: &LoadedGame, command: &str) -> Result<TwoPlayerGame> {
    match &loaded.game {
        Game::TwoPlayer(g) => Ok(g.clone()),
        Game::Multi(_) => Err(Error::Validation {
            field: "kind".into(),
            message: format!(
                "`{command}` expects a two_player game; use `multi solve` for tensors"
            ),
        }),
    }
}

pub fn solve(path: &Path, starts: usize, common: &Common) -> Result<Report> {
    let loaded = load_game(path)?;
    let game = two_player(&loaded, "solve")?;
    let cfg = config(common)?;
    let mut result = ResultFile::new("solve", loaded.file.clone(), VERIFY_EPS);
    if loaded.is_positive {
        let starts = starts.max(1);
        log::info!("positive game: power iteration from {starts} start(s)");
        let sols = (0..starts)
            .into_par_iter()
            .map(|i| {
                let x0 = if i == 0 {
                    uniform_unit(game.m())
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64(common.seed.wrapping_add(i as u64));
                    random_positive_unit(&mut rng, game.m()).into_values()
                };
                solve_pusg_from(&game, &x0, &cfg)
            })
            .collect::<Result<Vec<_>>>()?;
        let spread = sols
            .iter()
            .map(|s| s.certificate.profile.distance(&sols[0].certificate.profile))
            .fold(0.0, f64::max);
        log::info!("largest disagreement between starts: {spread:e}");
        let best = &sols[0];
        result.method = Some("perron_power_iteration".into());
        result.equilibria = vec![StoredEquilibrium {
            strategies: vec![
                best.certificate.profile.x.values().to_vec(),
                best.certificate.profile.y.values().to_vec(),
            ],
            payoffs: vec![best.certificate.lambda, best.certificate.mu],
            branch: Some(usg_core::NeBranch::Perron),
            eigenvalue: Some(best.spectral_radius),
        }];
        result.spectrum = Some(real_eigenpairs(&game.ab(), REAL_EIGENVALUE_TOL)?);
        let mut text = render::equilibria(&result);
        if starts > 1 {
            text.push_str(&format!(
                "starts: {starts}, max disagreement {spread:.3e}\n"
            ));
        }
        return Report::from_result(&result, text, EXIT_OK);
    }
    let report = enumerate_ne(&game, &cfg)?;
    result.method = Some("eigen_enumeration".into());
    result.equilibria = report
        .equilibria
        .iter()
        .map(StoredEquilibrium::from)
        .collect();
    result.continuum = report.continuum;
    result.spectrum = Some(report.spectrum_summary);
    let exit = if result.equilibria.is_empty() {
        EXIT_NO_EQUILIBRIUM
    } else {
        EXIT_OK
    };
    Report::from_result(&result, render::equilibria(&result), exit)
}

pub fn spectrum(path: &Path, common: &Common) -> Result<Report> {
    let loaded = load_game(path)?;
    let game = two_player(&loaded, "spectrum")?;
    let spectrum_result = real_eigenpairs(&game.ab(), REAL_EIGENVALUE_TOL)?;
    let exists = has_ne(&game, common.tol)?;
    let mut result = ResultFile::new("spectrum", loaded.file.clone(), VERIFY_EPS);
    result.method = Some("real_schur".into());
    let text = render::spectrum(&spectrum_result, exists);
    result.spectrum = Some(spectrum_result);
    Report::from_result(&result, text, EXIT_OK)
}

pub fn learn(
    path: &Path,
    rounds: Option<usize>,
    trace_path: Option<&Path>,
    random_start: bool,
    common: &Common,
) -> Result<Report> {
    let loaded = load_game(path)?;
    let game = two_player(&loaded, "learn")?;
    let mut cfg = config(common)?;
    if let Some(r) = rounds {
        cfg = cfg.with_max_iter(r);
    }
    let start = if random_start {
        let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
        StrategyProfile::new(
            random_positive_unit(&mut rng, game.m()),
            random_positive_unit(&mut rng, game.n()),
        )
    } else {
        StrategyProfile::uniform(game.m(), game.n())
    };
    let reference = if loaded.is_positive {
        Some(
            usg_core::solve_pusg(
                &game,
                &IterationConfig::default()
                    .with_tol(1e-14)
                    .with_max_iter(100_000),
            )?
            .profile,
        )
    } else {
        None
    };
    let trace = cournot_run(&game, &start, &cfg, reference.as_ref())?;
    let mut result = ResultFile::new("learn", loaded.file.clone(), VERIFY_EPS);
    result.method = Some("cournot".into());
    result.learning = Some(LearningSummary {
        rounds: trace.rounds.len() - 1,
        converged: trace.converged,
        stop_reason: trace.stop_reason,
        fitted_ratio: trace.fitted_ratio,
    });
    if trace.converged {
        if let Some(cert) = verify_ne(&game, trace.last(), VERIFY_EPS)?.accepted() {
            result.equilibria.push(StoredEquilibrium {
                strategies: vec![
                    cert.profile.x.values().to_vec(),
                    cert.profile.y.values().to_vec(),
                ],
                payoffs: vec![cert.lambda, cert.mu],
                branch: None,
                eigenvalue: None,
            });
        }
    }
    if let Some(p) = trace_path {
        write_trace_csv(&trace, BufWriter::new(File::create(p)?))?;
        result.trace = Some(p.display().to_string());
    }
    let exit = match trace.stop_reason {
        StopReason::ResidualBelowTol => EXIT_OK,
        StopReason::MaxRounds | StopReason::CycleDetected => EXIT_NON_CONVERGENCE,
    };
    Report::from_result(
        &result,
        render::learning(&result, trace.errors.last().copied()),
        exit,
    )
}

pub fn approx(path: &Path, common: &Common) -> Result<Report> {
    let loaded = load_game(path)?;
    let game = two_player(&loaded, "approx")?;
    let cfg = config(common)?;
    let r = simple_scheme(&game, &cfg)?;
    let mut result = ResultFile::new("approx", loaded.file.clone(), VERIFY_EPS);
    result.method = Some("simple_scheme".into());
    let cert = usg_core::solve_pusg(&game, &cfg)?;
    result.equilibria.push(StoredEquilibrium {
        strategies: vec![
            cert.profile.x.values().to_vec(),
            cert.profile.y.values().to_vec(),
        ],
        payoffs: vec![cert.lambda, cert.mu],
        branch: Some(usg_core::NeBranch::Perron),
        eigenvalue: Some(cert.product_eigenvalue()),
    });
    let text = render::approximation(&r);
    result.approximation = Some(r);
    Report::from_result(&result, text, EXIT_OK)
}

pub fn multi_solve(path: &Path, trace_path: Option<&Path>, common: &Common) -> Result<Report> {
    let loaded = load_game(path)?;
    let tensor = match &loaded.game {
        Game::Multi(t) => t.clone(),
        Game::TwoPlayer(g) => GameTensor::from_two_player(g),
    };
    let cfg = config(common)?;
    let r = solve_multi(&tensor, &cfg)?;
    let mut result = ResultFile::new("multi solve", loaded.file.clone(), VERIFY_EPS);
    result.method = Some(
        serde_json::to_value(r.method)?
            .as_str()
            .unwrap_or_default()
            .to_string(),
    );
    result.equilibria.push(StoredEquilibrium {
        strategies: r.equilibrium.strategies().to_vec(),
        payoffs: r.verdict.lambdas.clone(),
        branch: None,
        eigenvalue: None,
    });
    result.markov = Some(r.markov.clone());
    if let Some(p) = trace_path {
        let errors: Option<Vec<f64>> = r
            .trace
            .last()
            .map(|last| r.trace.iter().map(|q| q.max_distance(last)).collect());
        write_multi_trace_csv(
            &r.trace,
            errors.as_deref(),
            BufWriter::new(File::create(p)?),
        )?;
        result.trace = Some(p.display().to_string());
    }
    let exit = if r.verdict.accepted {
        EXIT_OK
    } else {
        EXIT_NON_CONVERGENCE
    };
    Report::from_result(&result, render::multi(&result, r.iterations), exit)
}

pub fn verify(path: &Path) -> Result<Report> {
    let result = load_result(path)?;
    let verdicts = result.reverify()?;
    let all = verdicts.iter().all(|v| *v);
    let text = render::verification(&result, &verdicts);
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "command": "verify",
        "source": path.display().to_string(),
        "verify_tol": result.verify_tol,
        "accepted": verdicts,
    }))? + "\n";
    Ok(Report {
        json,
        text,
        exit: if all { EXIT_OK } else { EXIT_VALIDATION },
    })
}

fn parse_shape(shape: &str) -> Result<Vec<usize>> {
    shape
        .split(['x', 'X', ','])
        .map(|p| {
            p.trim().parse::<usize>().map_err(|_| Error::Validation {
                field: "shape".into(),
                message: format!("`{shape}` is not a list of action counts like 3x3"),
            })
        })
        .collect()
}

pub fn gen(args: &GenArgs, common: &Common) -> Result<Report> {
    let actions = parse_shape(&args.shape)?;
    let shape = if actions.len() == 2 && !args.tensor {
        GameShape::TwoPlayer {
            m: actions[0],
            n: actions[1],
        }
    } else {
        GameShape::MultiPlayer { actions }
    };
    let dist = match args.dist {
        Dist::Uniform01 => EntryDistribution::Uniform01,
        Dist::UniformPositive => EntryDistribution::UniformPositive {
            lo: args.lo,
            hi: args.hi,
        },
        Dist::Markov => EntryDistribution::Markov,
    };
    let mut file = gen_random(&shape, dist, common.seed)?;
    if let Some(name) = &args.name {
        file = file.with_name(name.clone());
    }
    let json = file.to_json()?;
    Ok(Report {
        text: json.clone(),
        json,
        exit: EXIT_OK,
    })
}
