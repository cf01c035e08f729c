//! Two-player unit-sphere games: payoff matrices, strategies, utilities and
//! single-step best responses.
//!
//! Player 1 owns an `m×n` matrix `A` and plays `x` on the unit sphere of
//! `R^m`; player 2 owns an `n×m` matrix `B` and plays `y ∈ R^n`. Utilities
//! are the bilinear forms `xᵀAy` and `yᵀBx`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{dot, norm2};

/// Unit-norm tolerance accepted on construction before exact renormalization.
pub const UNIT_NORM_TOL: f64 = 1e-9;
/// Negative coordinates down to this value are clamped to zero for
/// nonnegative strategies.
pub const NONNEG_CLAMP: f64 = 1e-12;

/// Dense real matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix")]
pub struct PayoffMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl TryFrom<RawMatrix> for PayoffMatrix {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        PayoffMatrix::new(raw.rows, raw.cols, raw.data)
    }
}

impl PayoffMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::validation(
                "shape",
                format!("matrix must have at least one row and column, got {rows}x{cols}"),
            ));
        }
        if data.len() != rows * cols {
            return Err(Error::validation(
                "data",
                format!(
                    "declared shape {rows}x{cols} needs {} entries, found {}",
                    rows * cols,
                    data.len()
                ),
            ));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::validation(
                "data",
                format!("entry {pos} is not a finite number"),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from nested rows; panics on ragged input (intended for literals).
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let data: Vec<f64> = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.as_ref().len(), cols, "ragged matrix literal");
                r.as_ref().iter().copied()
            })
            .collect();
        Self::new(rows.len(), cols, data).expect("invalid matrix literal")
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut data = vec![0.0; n * n];
        for (i, v) in d.iter().enumerate() {
            data[i * n + i] = *v;
        }
        Self::new(n, n, data).expect("invalid diagonal")
    }

    pub fn constant(rows: usize, cols: usize, value: f64) -> Self {
        Self::new(rows, cols, vec![value; rows * cols]).expect("invalid constant matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// True iff every entry is strictly positive.
    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|&v| v > 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn matmul(&self, other: &PayoffMatrix) -> Result<PayoffMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut data = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        PayoffMatrix::new(self.rows, other.cols, data)
    }

    pub fn transpose(&self) -> PayoffMatrix {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j);
            }
        }
        PayoffMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scaled(&self, c: f64) -> PayoffMatrix {
        PayoffMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

/// A two-player USG `A×B` with `A: m×n` and `B: n×m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPlayerGame {
    a: PayoffMatrix,
    b: PayoffMatrix,
}

impl TwoPlayerGame {
    pub fn new(a: PayoffMatrix, b: PayoffMatrix) -> Result<Self> {
        if a.cols() != b.rows() {
            return Err(Error::DimensionMismatch {
                context: "b.rows (must equal a.cols)",
                expected: a.cols(),
                found: b.rows(),
            });
        }
        if a.rows() != b.cols() {
            return Err(Error::DimensionMismatch {
                context: "b.cols (must equal a.rows)",
                expected: a.rows(),
                found: b.cols(),
            });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &PayoffMatrix {
        &self.a
    }

    pub fn b(&self) -> &PayoffMatrix {
        &self.b
    }

    /// Number of actions of player 1 (`m`).
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Number of actions of player 2 (`n`).
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    /// `AB`, an `m×m` matrix.
    pub fn ab(&self) -> PayoffMatrix {
        self.a.matmul(&self.b).expect("shapes validated")
    }

    /// `BA`, an `n×n` matrix.
    pub fn ba(&self) -> PayoffMatrix {
        self.b.matmul(&self.a).expect("shapes validated")
    }

    fn check_profile(&self, profile: &StrategyProfile) -> Result<()> {
        if profile.x.dim() != self.m() {
            return Err(Error::DimensionMismatch {
                context: "player 1 strategy",
                expected: self.m(),
                found: profile.x.dim(),
            });
        }
        if profile.y.dim() != self.n() {
            return Err(Error::DimensionMismatch {
                context: "player 2 strategy",
                expected: self.n(),
                found: profile.y.dim(),
            });
        }
        Ok(())
    }
}

/// A real vector with unit 2-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitSphereStrategy {
    values: Vec<f64>,
    nonnegative: bool,
}

impl UnitSphereStrategy {
    /// Accepts `values` whose 2-norm is within [`UNIT_NORM_TOL`] of one and
    /// renormalizes exactly. With `nonnegative`, coordinates in
    /// `[-NONNEG_CLAMP, 0)` are clamped to zero and anything lower is rejected.
    pub fn new(values: Vec<f64>, nonnegative: bool) -> Result<Self> {
        let norm = norm2(&values);
        if values.is_empty() || (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::validation(
                "strategy",
                format!("2-norm must be 1 within {UNIT_NORM_TOL:e}, got {norm}"),
            ));
        }
        Self::finish(values, nonnegative)
    }

    /// Normalize an arbitrary nonzero direction onto the sphere.
    pub fn from_direction(values: Vec<f64>, nonnegative: bool) -> Result<Self> {
        let norm = norm2(&values);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::validation(
                "strategy",
                "cannot normalize a zero or non-finite vector",
            ));
        }
        Self::finish(values.into_iter().map(|v| v / norm).collect(), nonnegative)
    }

    /// The uniform positive strategy `(1/√n, …, 1/√n)`.
    pub fn uniform(n: usize) -> Self {
        Self {
            values: crate::vector::uniform_unit(n),
            nonnegative: true,
        }
    }

    /// Pure strategy `e_i` in `R^n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut values = vec![0.0; n];
        values[i] = 1.0;
        Self {
            values,
            nonnegative: true,
        }
    }

    fn finish(mut values: Vec<f64>, nonnegative: bool) -> Result<Self> {
        if nonnegative {
            for (i, v) in values.iter_mut().enumerate() {
                if *v < -NONNEG_CLAMP {
                    return Err(Error::validation(
                        "strategy",
                        format!("coordinate {i} is negative ({v}) in a nonnegative strategy"),
                    ));
                }
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
        }
        let norm = norm2(&values);
        if norm == 0.0 {
            return Err(Error::validation("strategy", "zero vector after clamping"));
        }
        if norm != 1.0 {
            values.iter_mut().for_each(|v| *v /= norm);
        }
        Ok(Self {
            values,
            nonnegative,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.nonnegative
    }

    pub fn negated(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| -v).collect(),
            nonnegative: false,
        }
    }
}

/// A profile `(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    pub x: UnitSphereStrategy,
    pub y: UnitSphereStrategy,
}

impl StrategyProfile {
    pub fn new(x: UnitSphereStrategy, y: UnitSphereStrategy) -> Self {
        Self { x, y }
    }

    /// Uniform positive strategies for both players.
    pub fn uniform(m: usize, n: usize) -> Self {
        Self::new(
            UnitSphereStrategy::uniform(m),
            UnitSphereStrategy::uniform(n),
        )
    }

    /// `‖x − x'‖₂ + ‖y − y'‖₂`.
    pub fn distance(&self, other: &StrategyProfile) -> f64 {
        crate::vector::dist2(self.x.values(), other.x.values())
            + crate::vector::dist2(self.y.values(), other.y.values())
    }
}

/// A verified equilibrium: the profile plus its best-response witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumCertificate {
    pub profile: StrategyProfile,
    /// `λ` with `λx = Ay`; equals `xᵀAy`.
    pub lambda: f64,
    /// `μ` with `μy = Bx`; equals `yᵀBx`.
    pub mu: f64,
    pub u1: f64,
    pub u2: f64,
    /// `max(‖Ay − λx‖₂, ‖Bx − μy‖₂)`.
    pub alignment_residual: f64,
}

impl EquilibriumCertificate {
    /// `λμ`, which is an eigenvalue of `AB` (and of `BA`) at any equilibrium.
    pub fn product_eigenvalue(&self) -> f64 {
        self.lambda * self.mu
    }
}

/// Outcome of a best-response query.
#[derive(Debug, Clone, PartialEq)]
pub enum BestResponse {
    Unique(UnitSphereStrategy),
    /// The opponent's strategy maps to the zero vector; every strategy is a
    /// best response.
    Indifferent,
}

impl BestResponse {
    pub fn unique(self) -> Option<UnitSphereStrategy> {
        match self {
            BestResponse::Unique(s) => Some(s),
            BestResponse::Indifferent => None,
        }
    }
}

/// `xᵀAy`.
pub fn utility_1(game: &TwoPlayerGame, profile: &StrategyProfile) -> Result<f64> {
    game.check_profile(profile)?;
    Ok(dot(profile.x.values(), &game.a.mul_vec(profile.y.values())))
}

/// `yᵀBx`.
pub fn utility_2(game: &TwoPlayerGame, profile: &StrategyProfile) -> Result<f64> {
    game.check_profile(profile)?;
    Ok(dot(profile.y.values(), &game.b.mul_vec(profile.x.values())))
}

/// Maximizer of `x ↦ xᵀMs` over the unit sphere: `Ms/‖Ms‖₂`.
///
/// Works for either player: pass `A` and `y` for player 1, `B` and `x` for
/// player 2. The result is flagged nonnegative when `M` and `s` are.
pub fn best_response(m: &PayoffMatrix, s: &UnitSphereStrategy) -> Result<BestResponse> {
    if s.dim() != m.cols() {
        return Err(Error::DimensionMismatch {
            context: "best response",
            expected: m.cols(),
            found: s.dim(),
        });
    }
    let image = m.mul_vec(s.values());
    if image.iter().all(|v| *v == 0.0) {
        return Ok(BestResponse::Indifferent);
    }
    let nonneg = image.iter().all(|v| *v >= 0.0);
    UnitSphereStrategy::from_direction(image, nonneg).map(BestResponse::Unique)
}

pub fn best_response_1(a: &PayoffMatrix, y: &UnitSphereStrategy) -> Result<BestResponse> {
    best_response(a, y)
}

pub fn best_response_2(b: &PayoffMatrix, x: &UnitSphereStrategy) -> Result<BestResponse> {
    best_response(b, x)
}

/// True iff every entry of both payoff matrices is strictly positive.
pub fn is_positive_game(game: &TwoPlayerGame) -> bool {
    game.a.is_positive() && game.b.is_positive()
}

/// True iff `‖AB − BA‖_max ≤ tol`; requires square matrices of equal size.
pub fn commutes(game: &TwoPlayerGame, tol: f64) -> Result<bool> {
    if !game.a.is_square() || !game.b.is_square() {
        return Err(Error::Precondition(format!(
            "commutation needs square matrices, got {}x{} and {}x{}",
            game.a.rows(),
            game.a.cols(),
            game.b.rows(),
            game.b.cols()
        )));
    }
    let ab = game.ab();
    let ba = game.ba();
    let gap = ab
        .data()
        .iter()
        .zip(ba.data())
        .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
    Ok(gap <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn strat(v: &[f64]) -> UnitSphereStrategy {
        UnitSphereStrategy::new(v.to_vec(), false).unwrap()
    }

    fn game(a: &[[f64; 2]], b: &[[f64; 2]]) -> TwoPlayerGame {
        TwoPlayerGame::new(PayoffMatrix::from_rows(a), PayoffMatrix::from_rows(b)).unwrap()
    }

    #[test]
    fn utility_examples() {
        let ones = game(&[[1.0, 1.0], [1.0, 1.0]], &[[1.0, 1.0], [1.0, 1.0]]);
        let p = StrategyProfile::new(strat(&[S, S]), strat(&[S, S]));
        assert!((utility_1(&ones, &p).unwrap() - 2.0).abs() < 1e-12);
        assert!((utility_2(&ones, &p).unwrap() - 2.0).abs() < 1e-12);

        let id = game(&[[1.0, 0.0], [0.0, 1.0]], &[[1.0, 0.0], [0.0, 1.0]]);
        let p = StrategyProfile::new(strat(&[1.0, 0.0]), strat(&[0.0, 1.0]));
        assert_eq!(utility_1(&id, &p).unwrap(), 0.0);

        let g = game(&[[1.0, 2.0], [3.0, 4.0]], &[[5.0, 6.0], [7.0, 8.0]]);
        assert_eq!(utility_1(&g, &p).unwrap(), 2.0);
        assert_eq!(utility_2(&g, &p).unwrap(), 7.0);

        let p = StrategyProfile::new(strat(&[0.0, 1.0]), strat(&[0.0, 1.0]));
        assert_eq!(utility_2(&id, &p).unwrap(), 1.0);
    }

    #[test]
    fn utility_rejects_wrong_dimension() {
        let g = game(&[[1.0, 2.0], [3.0, 4.0]], &[[5.0, 6.0], [7.0, 8.0]]);
        let p = StrategyProfile::new(strat(&[1.0, 0.0, 0.0]), strat(&[0.0, 1.0]));
        assert!(matches!(
            utility_1(&g, &p),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn best_response_examples() {
        let id = PayoffMatrix::identity(2);
        let br = best_response_1(&id, &strat(&[1.0, 0.0]))
            .unwrap()
            .unique()
            .unwrap();
        assert_eq!(br.values(), &[1.0, 0.0]);

        let ones = PayoffMatrix::constant(2, 2, 1.0);
        let br = best_response_1(&ones, &strat(&[S, S]))
            .unwrap()
            .unique()
            .unwrap();
        assert!((br.values()[0] - S).abs() < 1e-15 && (br.values()[1] - S).abs() < 1e-15);

        let rot = PayoffMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]);
        let br = best_response_1(&rot, &strat(&[1.0, 0.0]))
            .unwrap()
            .unique()
            .unwrap();
        assert_eq!(br.values(), &[0.0, 1.0]);
    }

    #[test]
    fn zero_image_is_indifferent() {
        let ones = PayoffMatrix::constant(2, 2, 1.0);
        let br = best_response_1(&ones, &strat(&[S, -S])).unwrap();
        assert_eq!(br, BestResponse::Indifferent);
    }

    #[test]
    fn positivity_and_commutation() {
        let ones = game(&[[1.0, 1.0], [1.0, 1.0]], &[[1.0, 1.0], [1.0, 1.0]]);
        assert!(is_positive_game(&ones));
        let zero = game(&[[1.0, 0.0], [1.0, 1.0]], &[[1.0, 1.0], [1.0, 1.0]]);
        assert!(!is_positive_game(&zero));
        let g = game(&[[1.0, 2.0], [3.0, 4.0]], &[[5.0, 6.0], [7.0, 8.0]]);
        assert!(is_positive_game(&g));

        let sym = game(&[[2.0, 1.0], [1.0, 2.0]], &[[2.0, 1.0], [1.0, 2.0]]);
        assert!(commutes(&sym, 1e-12).unwrap());
        let pair = game(&[[2.0, 1.0], [1.0, 2.0]], &[[3.0, 1.0], [1.0, 3.0]]);
        assert!(commutes(&pair, 1e-12).unwrap());
        let swap = game(&[[1.0, 2.0], [3.0, 4.0]], &[[0.0, 1.0], [1.0, 0.0]]);
        assert!(!commutes(&swap, 1e-12).unwrap());

        let rect = TwoPlayerGame::new(
            PayoffMatrix::constant(2, 3, 1.0),
            PayoffMatrix::constant(3, 2, 1.0),
        )
        .unwrap();
        assert!(matches!(
            commutes(&rect, 1e-12),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn construction_validation() {
        assert!(PayoffMatrix::new(2, 2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(PayoffMatrix::new(0, 2, vec![]).is_err());
        assert!(PayoffMatrix::new(1, 1, vec![f64::NAN]).is_err());
        assert!(TwoPlayerGame::new(
            PayoffMatrix::constant(2, 3, 1.0),
            PayoffMatrix::constant(2, 2, 1.0)
        )
        .is_err());
        assert!(UnitSphereStrategy::new(vec![1.0, 1.0], false).is_err());
        let s = UnitSphereStrategy::new(vec![1.0 + 5e-10, 0.0], false).unwrap();
        assert_eq!(norm2(s.values()), 1.0);
        let s = UnitSphereStrategy::new(vec![1.0, -1e-13], true).unwrap();
        assert_eq!(s.values(), &[1.0, 0.0]);
        assert!(UnitSphereStrategy::new(vec![1.0, -1e-6], true).is_err());
    }

    fn unit_vec(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1.0f64..1.0, n)
            .prop_filter("nonzero", |v| norm2(v) > 1e-3)
            .prop_map(|v| {
                let n = norm2(&v);
                v.into_iter().map(|x| x / n).collect()
            })
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = PayoffMatrix> {
        prop::collection::vec(-2.0f64..2.0, rows * cols)
            .prop_map(move |d| PayoffMatrix::new(rows, cols, d).unwrap())
    }

    proptest! {
        #[test]
        fn utility_is_bounded_by_best_response_value(
            a in matrix(3, 4), x in unit_vec(3), y in unit_vec(4)
        ) {
            let g = TwoPlayerGame::new(a.clone(), a.transpose()).unwrap();
            let p = StrategyProfile::new(strat(&x), strat(&y));
            let u = utility_1(&g, &p).unwrap();
            let ay = a.mul_vec(&y);
            prop_assert!(u <= norm2(&ay) + 1e-12);
            if let BestResponse::Unique(br) = best_response_1(&a, &p.y).unwrap() {
                prop_assert!((norm2(br.values()) - 1.0).abs() < 1e-12);
                let q = StrategyProfile::new(br, p.y.clone());
                prop_assert!((utility_1(&g, &q).unwrap() - norm2(&ay)).abs() < 1e-9);
            }
        }

        #[test]
        fn best_response_is_scale_invariant(a in matrix(3, 3), y in unit_vec(3), c in 0.01f64..100.0) {
            let y = strat(&y);
            let r1 = best_response_1(&a, &y).unwrap();
            let r2 = best_response_1(&a.scaled(c), &y).unwrap();
            if let (BestResponse::Unique(p), BestResponse::Unique(q)) = (r1, r2) {
                prop_assert!(crate::vector::dist2(p.values(), q.values()) < 1e-12);
            }
        }

        #[test]
        fn utility_is_bilinear(
            a in matrix(2, 3), x1 in unit_vec(2), x2 in unit_vec(2), y in unit_vec(3),
            s in -3.0f64..3.0, t in -3.0f64..3.0
        ) {
            // Probe linearity in x through the raw bilinear form.
            let ay = a.mul_vec(&y);
            let combo: Vec<f64> = x1.iter().zip(&x2).map(|(p, q)| s * p + t * q).collect();
            let lhs = dot(&combo, &ay);
            let rhs = s * dot(&x1, &ay) + t * dot(&x2, &ay);
            prop_assert!((lhs - rhs).abs() < 1e-10);
            let g = TwoPlayerGame::new(a.clone(), a.transpose()).unwrap();
            let u = utility_1(&g, &StrategyProfile::new(strat(&x1), strat(&y))).unwrap();
            prop_assert!((u - dot(&x1, &ay)).abs() < 1e-12);
        }
    }
}
