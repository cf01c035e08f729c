//! Human-readable summaries for `--format text`.

use std::fmt::Write;

use usg_core::approx::ApproxMsneResult;
use usg_core::io::ResultFile;
use usg_core::spectral::SpectralResult;

fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("({})", parts.join(", "))
}

pub fn equilibria(result: &ResultFile) -> String {
    let mut out = String::new();
    let method = result.method.as_deref().unwrap_or("-");
    let _ = writeln!(out, "method: {method}");
    if result.equilibria.is_empty() {
        let _ = writeln!(out, "no equilibrium: AB has no real nonnegative eigenvalue");
    }
    for (i, e) in result.equilibria.iter().enumerate() {
        let _ = writeln!(out, "equilibrium {}:", i + 1);
        for (k, s) in e.strategies.iter().enumerate() {
            let _ = writeln!(out, "  x{} = {}", k + 1, vector(s));
        }
        let _ = writeln!(out, "  payoffs = {}", vector(&e.payoffs));
        if let Some(ev) = e.eigenvalue {
            let _ = writeln!(out, "  eigenvalue of AB = {ev:.9}");
        }
    }
    if result.continuum {
        let _ = writeln!(out, "note: a repeated eigenvalue admits a continuum; listed equilibria are basis representatives");
    }
    out
}

pub fn spectrum(spectrum_result: &SpectralResult, exists: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "spectral radius: {:.9}",
        spectrum_result.spectral_radius
    );
    for (re, im) in &spectrum_result.eigenvalues {
        if *im == 0.0 {
            let _ = writeln!(out, "  eigenvalue {re:.9}");
        } else {
            let _ = writeln!(out, "  eigenvalue {re:.9} {im:+.9}i");
        }
    }
    for p in &spectrum_result.pairs {
        let _ = writeln!(
            out,
            "  real pair {:.9} (eigenspace dim {}) vector {}",
            p.value,
            p.eigenspace_dim,
            vector(&p.vector)
        );
    }
    let _ = writeln!(out, "equilibrium exists: {exists}");
    out
}

pub fn learning(result: &ResultFile, final_error: Option<f64>) -> String {
    let mut out = String::new();
    if let Some(l) = &result.learning {
        let _ = writeln!(
            out,
            "rounds: {}, stop: {:?}, converged: {}",
            l.rounds, l.stop_reason, l.converged
        );
        if let Some(r) = l.fitted_ratio {
            let _ = writeln!(out, "fitted per-round ratio: {r:.6e}");
        }
    }
    if let Some(e) = final_error {
        let _ = writeln!(out, "final distance to equilibrium: {e:.3e}");
    }
    for e in &result.equilibria {
        for (k, s) in e.strategies.iter().enumerate() {
            let _ = writeln!(out, "  x{} = {}", k + 1, vector(s));
        }
    }
    if let Some(t) = &result.trace {
        let _ = writeln!(out, "trace: {t}");
    }
    out
}

pub fn approximation(r: &ApproxMsneResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "x' = {}", vector(&r.x1));
    let _ = writeln!(out, "y' = {}", vector(&r.y1));
    let _ = writeln!(
        out,
        "player 1: factor {:.6} (bound {:.6}), payoff {:.6}, best deviation {:.6}",
        r.factor_1, r.bound_1, r.u_1, r.best_deviation_1
    );
    let _ = writeln!(
        out,
        "player 2: factor {:.6} (bound {:.6}), payoff {:.6}, best deviation {:.6}",
        r.factor_2, r.bound_2, r.u_2, r.best_deviation_2
    );
    let _ = writeln!(
        out,
        "multiplicative approximation ratio: {:.6}",
        r.multiplicative_ratio()
    );
    out
}

pub fn multi(result: &ResultFile, iterations: usize) -> String {
    let mut out = equilibria(result);
    let _ = writeln!(out, "iterations: {iterations}");
    if let Some(m) = &result.markov {
        if m.is_markov {
            let _ = writeln!(
                out,
                "markov: constants {}, deltas {}, contraction {}",
                vector(&m.constants),
                vector(&m.deltas),
                m.contraction_ok
            );
        } else {
            let _ = writeln!(out, "markov: no");
        }
    }
    if let Some(t) = &result.trace {
        let _ = writeln!(out, "trace: {t}");
    }
    out
}

pub fn verification(result: &ResultFile, verdicts: &[bool]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "command: {}, tolerance {:e}",
        result.command, result.verify_tol
    );
    if verdicts.is_empty() {
        let _ = writeln!(out, "no stored equilibria");
    }
    for (i, v) in verdicts.iter().enumerate() {
        let _ = writeln!(
            out,
            "equilibrium {}: {}",
            i + 1,
            if *v { "accepted" } else { "REJECTED" }
        );
    }
    out
}
