//! Dense spectral kernels.
//!
//! Two independent routes are provided: [`power_iteration`] for the Perron
//! eigenpair of a strictly positive matrix, and [`real_eigenpairs`] for the
//! full real spectrum of an arbitrary square matrix (real Schur form for the
//! eigenvalues, SVD null spaces of `M − λI` for the eigenvectors).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::PayoffMatrix;
use crate::vector::{dot, norm2, sign_normalize};

/// Relative threshold on the imaginary part below which an eigenvalue is real.
pub const REAL_EIGENVALUE_TOL: f64 = 1e-8;
/// Relative rank threshold used for null spaces and the `det A ≠ 0` proxy.
pub const RANK_TOL: f64 = 1e-10;

/// Stopping parameters shared by every iterative method in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 10_000,
            seed: 0,
        }
    }
}

impl IterationConfig {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::validation(
                "tol",
                format!("must be > 0, got {}", self.tol),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::validation("max_iter", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub value: f64,
    /// Unit vector, first nonzero coordinate positive.
    pub vector: Vec<f64>,
    pub is_dominant: bool,
    /// Dimension of the eigenspace this vector was drawn from.
    pub eigenspace_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    /// Real eigenvalues with real eigenvectors, descending by value.
    pub pairs: Vec<EigenPair>,
    /// Number of eigenvalues discarded as non-real.
    pub complex_count: usize,
    /// Largest eigenvalue modulus, including non-real eigenvalues.
    pub spectral_radius: f64,
    /// Every eigenvalue as `(re, im)`, in solver order.
    pub eigenvalues: Vec<(f64, f64)>,
}

impl SpectralResult {
    /// Distinct real eigenvalues (one per eigenspace).
    pub fn real_values(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for p in &self.pairs {
            if out.last() != Some(&p.value) {
                out.push(p.value);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    pub pair: EigenPair,
    pub iterations: usize,
    /// Relative residual `‖Mx − λx‖₂ / |λ|` after each step.
    pub residuals: Vec<f64>,
}

fn check_square(m: &PayoffMatrix, what: &'static str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            context: what,
            expected: m.rows(),
            found: m.cols(),
        });
    }
    Ok(())
}

/// Normalized power iteration `x ← Mx/‖Mx‖₂` for a strictly positive square
/// matrix. Stops once the relative residual `‖Mx − λx‖₂/λ` (λ the Rayleigh
/// quotient) drops to `cfg.tol`.
pub fn power_iteration(
    m: &PayoffMatrix,
    x0: &[f64],
    cfg: &IterationConfig,
) -> Result<PowerIteration> {
    check_square(m, "power iteration matrix")?;
    cfg.validate()?;
    if !m.is_positive() {
        return Err(Error::NotPositive {
            what: "power iteration matrix".into(),
        });
    }
    if x0.len() != m.cols() {
        return Err(Error::DimensionMismatch {
            context: "power iteration start",
            expected: m.cols(),
            found: x0.len(),
        });
    }
    let mut x = crate::vector::normalized(x0)
        .ok_or_else(|| Error::validation("x0", "start vector is zero"))?;
    let mut residuals = Vec::new();
    for it in 1..=cfg.max_iter {
        let y = m.mul_vec(&x);
        let lambda = dot(&x, &y);
        let res: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - lambda * b).collect();
        let rel = norm2(&res) / lambda.abs().max(f64::MIN_POSITIVE);
        residuals.push(rel);
        if rel <= cfg.tol {
            return Ok(PowerIteration {
                pair: EigenPair {
                    value: lambda,
                    vector: x,
                    is_dominant: true,
                    eigenspace_dim: 1,
                },
                iterations: it,
                residuals,
            });
        }
        let n = norm2(&y);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Numerical(format!(
                "power iteration produced a degenerate iterate at step {it}"
            )));
        }
        x = y.into_iter().map(|v| v / n).collect();
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        residual: residuals.last().copied().unwrap_or(f64::INFINITY),
        last_iterate: x,
    })
}

/// All real eigenpairs of a square matrix.
///
/// An eigenvalue counts as real when `|Im| ≤ tol·(1 + |Re|)`. Real eigenvalues
/// that agree to within `1e-8·‖M‖_max·n` are merged into one eigenspace, and
/// an orthonormal basis of that eigenspace is returned (one pair per basis
/// vector, all sharing the same value).
pub fn real_eigenpairs(m: &PayoffMatrix, tol: f64) -> Result<SpectralResult> {
    check_square(m, "eigen decomposition")?;
    let n = m.rows();
    let mat = m.to_nalgebra();
    let schur = nalgebra::linalg::Schur::try_new(mat.clone(), f64::EPSILON, 1000 * n.max(1))
        .ok_or_else(|| {
            Error::Numerical(format!(
                "real Schur iteration did not converge for a {n}x{n} matrix (‖M‖_max = {})",
                m.max_abs()
            ))
        })?;
    let eig = schur.complex_eigenvalues();
    let eigenvalues: Vec<(f64, f64)> = eig.iter().map(|c| (c.re, c.im)).collect();
    let spectral_radius = eig.iter().fold(0.0f64, |r, c| r.max(c.norm()));

    let mut reals: Vec<f64> = Vec::new();
    let mut complex_count = 0;
    for &(re, im) in &eigenvalues {
        if im.abs() <= tol * (1.0 + re.abs()) {
            reals.push(re);
        } else {
            complex_count += 1;
        }
    }
    reals.sort_by(|a, b| b.total_cmp(a));

    let scale = m.max_abs().max(f64::MIN_POSITIVE) * n as f64;
    let cluster_tol = 1e-8 * scale;
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for v in reals {
        match clusters.last_mut() {
            Some(c) if (c[c.len() - 1] - v).abs() <= cluster_tol => c.push(v),
            _ => clusters.push(vec![v]),
        }
    }

    let mut pairs = Vec::new();
    for cluster in clusters {
        let value = cluster.iter().sum::<f64>() / cluster.len() as f64;
        let shifted = &mat - DMatrix::<f64>::identity(n, n) * value;
        let mut basis = null_space_of(&shifted, cluster_tol, cluster.len());
        let dim = basis.len();
        let is_dominant = value > 0.0 && (spectral_radius - value).abs() <= cluster_tol;
        for v in basis.iter_mut() {
            sign_normalize(v, 1e-12);
        }
        basis.sort_by(|a, b| lex_cmp(a, b));
        pairs.extend(basis.into_iter().map(|vector| EigenPair {
            value,
            vector,
            is_dominant,
            eigenspace_dim: dim,
        }));
    }

    Ok(SpectralResult {
        pairs,
        complex_count,
        spectral_radius,
        eigenvalues,
    })
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Right singular vectors of a square matrix with singular value `≤ abs_tol`,
/// at most `cap` of them, and always at least the smallest one.
fn null_space_of(mat: &DMatrix<f64>, abs_tol: f64, cap: usize) -> Vec<Vec<f64>> {
    let (sv, vt) = right_singular(mat);
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
    order
        .iter()
        .enumerate()
        .take_while(|&(rank, &i)| rank < cap && (rank == 0 || sv[i] <= abs_tol))
        .map(|(_, &i)| vt.row(i).iter().copied().collect())
        .collect()
}

fn right_singular(mat: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let svd = mat.clone().svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    (svd.singular_values.iter().copied().collect(), vt)
}

/// Orthonormal basis of `R^cols` whose first `rank` vectors span the row
/// space and the remainder span the null space (via SVD of `MᵀM`, which is
/// square so every direction gets a singular value).
fn full_right_basis(mat: &DMatrix<f64>) -> Vec<Vec<f64>> {
    let gram = mat.transpose() * mat;
    let svd = gram.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    order
        .into_iter()
        .map(|i| vt.row(i).iter().copied().collect())
        .collect()
}

/// Numerical rank information for a (possibly rectangular) matrix.
#[derive(Debug, Clone)]
pub struct RankInfo {
    pub singular_values: Vec<f64>,
    pub rank: usize,
    /// Orthonormal basis of `{y : My = 0}`.
    pub null_space: Vec<Vec<f64>>,
}

impl RankInfo {
    /// Square and well-conditioned: smallest singular value above
    /// `RANK_TOL` times the largest.
    pub fn is_nonsingular(&self, square: bool) -> bool {
        square && self.null_space.is_empty()
    }
}

/// Rank and null space with threshold `RANK_TOL · σ_max`.
pub fn rank_info(m: &PayoffMatrix) -> RankInfo {
    let mat = m.to_nalgebra();
    let (sv, vt) = right_singular(&mat);
    let smax = sv.iter().fold(0.0f64, |a, b| a.max(*b));
    let thr = RANK_TOL * smax.max(f64::MIN_POSITIVE);
    let rank = sv.iter().filter(|s| **s > thr).count();
    let mut null_space: Vec<Vec<f64>> = Vec::new();
    if rank < m.cols() {
        let full = full_right_basis(&mat);
        // Order null vectors from the short SVD first when available; they
        // are the most accurate.
        let mut order: Vec<usize> = (0..sv.len()).collect();
        order.sort_by(|&i, &j| sv[i].total_cmp(&sv[j]));
        for &i in order.iter().filter(|&&i| sv[i] <= thr) {
            null_space.push(vt.row(i).iter().copied().collect());
        }
        let need = m.cols() - rank;
        let mut k = full.len();
        while null_space.len() < need && k > 0 {
            k -= 1;
            let cand = orthogonalize(&full[k], &null_space);
            if let Some(c) = cand {
                null_space.push(c);
            }
        }
    }
    for v in null_space.iter_mut() {
        sign_normalize(v, 1e-12);
    }
    RankInfo {
        singular_values: sv,
        rank,
        null_space,
    }
}

fn orthogonalize(v: &[f64], basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut w = v.to_vec();
    for b in basis {
        let c = dot(&w, b);
        w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
    }
    let n = norm2(&w);
    (n > 1e-6).then(|| w.into_iter().map(|x| x / n).collect())
}

/// Least-squares solution `M⁺x` with the same rank threshold as [`rank_info`].
pub fn pseudo_solve(m: &PayoffMatrix, rhs: &[f64]) -> Vec<f64> {
    let mat = m.to_nalgebra();
    let b = DVector::from_column_slice(rhs);
    let svd = mat.svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |a, b| a.max(*b));
    let eps = RANK_TOL * smax.max(f64::MIN_POSITIVE);
    match svd.solve(&b, eps) {
        Ok(sol) => sol.iter().copied().collect(),
        Err(_) => vec![0.0; m.cols()],
    }
}

/// `(ρ(AB), ρ(BA))` for strictly positive `A` and `B`, each via power
/// iteration; errors if they disagree by more than `tol`.
pub fn spectral_radius_pair_check(
    a: &PayoffMatrix,
    b: &PayoffMatrix,
    tol: f64,
) -> Result<(f64, f64)> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::NotPositive {
            what: "payoff matrix".into(),
        });
    }
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    let cfg = IterationConfig::default()
        .with_tol(1e-14)
        .with_max_iter(100_000);
    let rho_ab = power_iteration(&ab, &crate::vector::uniform_unit(ab.rows()), &cfg)?
        .pair
        .value;
    let rho_ba = power_iteration(&ba, &crate::vector::uniform_unit(ba.rows()), &cfg)?
        .pair
        .value;
    if (rho_ab - rho_ba).abs() > tol {
        return Err(Error::Numerical(format!(
            "ρ(AB) = {rho_ab} and ρ(BA) = {rho_ba} differ by more than {tol:e}"
        )));
    }
    Ok((rho_ab, rho_ba))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    /// Roots of `λ² − tr·λ + det` for a 2×2 matrix; `None` when complex.
    fn char_poly_2x2(m: &PayoffMatrix) -> Option<(f64, f64)> {
        let tr = m.get(0, 0) + m.get(1, 1);
        let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
        let disc = tr * tr - 4.0 * det;
        (disc >= 0.0).then(|| ((tr + disc.sqrt()) / 2.0, (tr - disc.sqrt()) / 2.0))
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn power_iteration_examples() {
        let cfg = IterationConfig::default();
        let m = PayoffMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]);
        let (hi, _) = char_poly_2x2(&m).unwrap();
        let r = power_iteration(&m, &[1.0, 0.0], &cfg).unwrap();
        assert!((r.pair.value - hi).abs() < 1e-10);
        assert!((r.pair.value - 3.0).abs() < 1e-10);
        assert!(close(&r.pair.vector, &[S, S], 1e-10));

        let m = PayoffMatrix::constant(2, 2, 1.0);
        let r = power_iteration(&m, &[0.6, 0.8], &cfg).unwrap();
        assert!((r.pair.value - 2.0).abs() < 1e-12);
        assert!(close(&r.pair.vector, &[S, S], 1e-12));
        assert!(r.iterations <= 2);

        let m = PayoffMatrix::constant(3, 3, 1.0);
        let r = power_iteration(&m, &crate::vector::uniform_unit(3), &cfg).unwrap();
        let t = 1.0 / 3f64.sqrt();
        assert!((r.pair.value - 3.0).abs() < 1e-12);
        assert!(close(&r.pair.vector, &[t, t, t], 1e-12));
    }

    #[test]
    fn power_iteration_errors() {
        let cfg = IterationConfig::default().with_max_iter(2);
        let m = PayoffMatrix::from_rows(&[[2.0, 1.0], [1.0, 1.9]]);
        match power_iteration(&m, &[1.0, 0.0], &cfg) {
            Err(Error::NonConvergence { last_iterate, .. }) => assert_eq!(last_iterate.len(), 2),
            other => panic!("expected non-convergence, got {other:?}"),
        }
        let z = PayoffMatrix::from_rows(&[[1.0, 0.0], [1.0, 1.0]]);
        assert!(matches!(
            power_iteration(&z, &[1.0, 0.0], &IterationConfig::default()),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn real_eigenpairs_examples() {
        let r = real_eigenpairs(&PayoffMatrix::diagonal(&[2.0, 1.0]), REAL_EIGENVALUE_TOL).unwrap();
        assert_eq!(r.complex_count, 0);
        assert_eq!(r.pairs.len(), 2);
        assert!((r.pairs[0].value - 2.0).abs() < 1e-12);
        assert!(close(&r.pairs[0].vector, &[1.0, 0.0], 1e-12));
        assert!((r.pairs[1].value - 1.0).abs() < 1e-12);
        assert!(close(&r.pairs[1].vector, &[0.0, 1.0], 1e-12));
        assert!(r.pairs[0].is_dominant && !r.pairs[1].is_dominant);

        let rot = PayoffMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]);
        assert!(char_poly_2x2(&rot).is_none());
        let r = real_eigenpairs(&rot, REAL_EIGENVALUE_TOL).unwrap();
        assert!(r.pairs.is_empty());
        assert_eq!(r.complex_count, 2);
        assert!((r.spectral_radius - 1.0).abs() < 1e-12);

        let m = PayoffMatrix::constant(2, 2, 2.0);
        let (hi, lo) = char_poly_2x2(&m).unwrap();
        let r = real_eigenpairs(&m, REAL_EIGENVALUE_TOL).unwrap();
        assert_eq!(r.pairs.len(), 2);
        assert!((r.pairs[0].value - hi).abs() < 1e-12 && (hi - 4.0).abs() < 1e-12);
        assert!(close(&r.pairs[0].vector, &[S, S], 1e-12));
        assert!((r.pairs[1].value - lo).abs() < 1e-12);
        assert!(close(&r.pairs[1].vector, &[S, -S], 1e-12));
    }

    #[test]
    fn repeated_eigenvalue_gives_eigenspace_basis() {
        let r = real_eigenpairs(&PayoffMatrix::identity(3), REAL_EIGENVALUE_TOL).unwrap();
        assert_eq!(r.pairs.len(), 3);
        assert!(r.pairs.iter().all(|p| p.eigenspace_dim == 3));
        for (i, p) in r.pairs.iter().enumerate() {
            for q in &r.pairs[i + 1..] {
                assert!(dot(&p.vector, &q.vector).abs() < 1e-12);
            }
        }
        // Jordan block: one eigenvector only.
        let j = PayoffMatrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]]);
        let r = real_eigenpairs(&j, REAL_EIGENVALUE_TOL).unwrap();
        assert_eq!(r.pairs.len(), 1);
        assert!(close(&r.pairs[0].vector, &[1.0, 0.0], 1e-6));
    }

    #[test]
    fn rank_info_of_singular_and_wide_matrices() {
        let info = rank_info(&PayoffMatrix::constant(2, 2, 1.0));
        assert_eq!(info.rank, 1);
        assert_eq!(info.null_space.len(), 1);
        assert!(close(&info.null_space[0], &[S, -S], 1e-12));
        assert!(!info.is_nonsingular(true));

        let wide = PayoffMatrix::from_rows(&[[1.0, 2.0, 3.0]]);
        let info = rank_info(&wide);
        assert_eq!(info.rank, 1);
        assert_eq!(info.null_space.len(), 2);
        for v in &info.null_space {
            assert!(norm2(&wide.mul_vec(v)) < 1e-12);
        }

        let info = rank_info(&PayoffMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]));
        assert!(info.is_nonsingular(true));
        let sol = pseudo_solve(
            &PayoffMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]),
            &[3.0, 3.0],
        );
        assert!(close(&sol, &[1.0, 1.0], 1e-12));
    }

    #[test]
    fn spectral_radius_pair_examples() {
        let ones = PayoffMatrix::constant(2, 2, 1.0);
        let (p, q) = spectral_radius_pair_check(&ones, &ones, 1e-9).unwrap();
        assert!((p - 4.0).abs() < 1e-10 && (q - 4.0).abs() < 1e-10);

        let a = PayoffMatrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        let b = PayoffMatrix::from_rows(&[[5.0, 6.0], [7.0, 8.0]]);
        let ab = a.matmul(&b).unwrap();
        assert_eq!(ab.data(), &[19.0, 22.0, 43.0, 50.0]);
        let (hi, _) = char_poly_2x2(&ab).unwrap();
        let (p, q) = spectral_radius_pair_check(&a, &b, 1e-9).unwrap();
        assert!((p - hi).abs() < 1e-9 && (q - hi).abs() < 1e-9);
        assert!((p - 68.942).abs() < 1e-3);

        let (p, q) = spectral_radius_pair_check(
            &PayoffMatrix::from_rows(&[[1.0]]),
            &PayoffMatrix::from_rows(&[[3.0]]),
            1e-12,
        )
        .unwrap();
        assert_eq!((p, q), (3.0, 3.0));

        assert!(spectral_radius_pair_check(&PayoffMatrix::identity(2), &ones, 1e-9).is_err());
    }

    fn random_positive(rng: &mut ChaCha8Rng, n: usize) -> PayoffMatrix {
        PayoffMatrix::new(n, n, (0..n * n).map(|_| rng.gen_range(0.01..1.0)).collect()).unwrap()
    }

    #[test]
    fn perron_frobenius_on_random_positive_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.gen_range(2..8);
            let m = random_positive(&mut rng, n);
            let pi = power_iteration(
                &m,
                &crate::vector::uniform_unit(n),
                &IterationConfig::default(),
            )
            .unwrap();
            assert!(pi.pair.vector.iter().all(|v| *v > 0.0));
            let spectrum_result = real_eigenpairs(&m, REAL_EIGENVALUE_TOL).unwrap();
            assert!((spectrum_result.pairs[0].value - pi.pair.value).abs() < 1e-9 * pi.pair.value);
            assert!(spectrum_result.pairs[0].is_dominant);
            assert_eq!(spectrum_result.pairs[0].eigenspace_dim, 1);
            // Strictly dominant over every other eigenvalue modulus.
            let others = spectrum_result
                .eigenvalues
                .iter()
                .filter(|(re, im)| (re - pi.pair.value).abs() > 1e-9 || im.abs() > 1e-9);
            for (re, im) in others {
                assert!(re.hypot(*im) < pi.pair.value);
            }
            if let Some(second) = spectrum_result.pairs.get(1) {
                let cos = dot(&second.vector, &spectrum_result.pairs[0].vector).abs();
                assert!(cos < 1.0 - 1e-6);
            }
        }
    }

    #[test]
    fn power_iteration_converges_linearly() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let m = random_positive(&mut rng, 6);
            let r = power_iteration(
                &m,
                &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
                &IterationConfig::default(),
            )
            .unwrap();
            let res = &r.residuals;
            let tail = &res[res.len() / 2..];
            for w in tail.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-6) + 1e-15);
            }
            if tail.len() >= 3 {
                let ratio = tail[tail.len() - 1] / tail[tail.len() - 2];
                assert!(ratio < 1.0);
            }
        }
    }

    proptest! {
        #[test]
        fn rho_ab_equals_rho_ba(seed in 0u64..1000, m in 1usize..7, n in 1usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = PayoffMatrix::new(m, n, (0..m * n).map(|_| rng.gen_range(0.01..1.0)).collect()).unwrap();
            let b = PayoffMatrix::new(n, m, (0..m * n).map(|_| rng.gen_range(0.01..1.0)).collect()).unwrap();
            let (p, q) = spectral_radius_pair_check(&a, &b, 1e-8).unwrap();
            prop_assert!((p - q).abs() <= 1e-8);
        }

        #[test]
        fn eigenpair_residuals_are_small(seed in 0u64..1000, n in 1usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = PayoffMatrix::new(n, n, (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap();
            let spectrum_result = real_eigenpairs(&m, REAL_EIGENVALUE_TOL).unwrap();
            let bound = 1e-8 * m.max_abs() * n as f64;
            for p in &spectrum_result.pairs {
                let mv = m.mul_vec(&p.vector);
                let r: Vec<f64> = mv.iter().zip(&p.vector).map(|(a, b)| a - p.value * b).collect();
                prop_assert!(norm2(&r) <= bound, "residual {} > {}", norm2(&r), bound);
                prop_assert!((norm2(&p.vector) - 1.0).abs() < 1e-12);
            }
            prop_assert_eq!(spectrum_result.pairs.len() + spectrum_result.complex_count <= n, true);
            for w in spectrum_result.pairs.windows(2) {
                prop_assert!(w[0].value >= w[1].value);
            }
        }
    }
}
