//! Ordinal 2x2 game analysis and the row-stochastic behavior matrix.
//!
//! Covers the dilemma games of the model: dominance and pure Nash
//! analysis for two-strategy two-player games where each player either
//! minimizes (prison years) or maximizes (dollars) their payoff, the
//! forced-ethical-behavior payoff transform, and eigenanalysis of the
//! 2x2 behavior matrix whose rows sum to one.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GameError {
    #[error("payoff at profile ({row}, {col}) for player {player} is not finite")]
    NonFinitePayoff {
        row: usize,
        col: usize,
        player: usize,
    },
    #[error("behavior propensity {name}={value} is outside [0, 1]")]
    PropensityOutOfRange { name: &'static str, value: f64 },
}

/// Whether a player prefers smaller or larger payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Minimize,
    Maximize,
}

impl Orientation {
    /// True when `a` is strictly better than `b` for this player.
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Orientation::Minimize => a < b,
            Orientation::Maximize => a > b,
        }
    }
}

/// A 2x2 game: `payoffs[r][c]` holds (row payoff, column payoff) when the
/// row player picks strategy `r` and the column player picks `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrdinalGame {
    payoffs: [[(f64, f64); 2]; 2],
    orientation: [Orientation; 2],
    labels: [[String; 2]; 2],
}

impl OrdinalGame {
    pub fn new(
        payoffs: [[(f64, f64); 2]; 2],
        orientation: [Orientation; 2],
        labels: [[String; 2]; 2],
    ) -> Result<Self, GameError> {
        for (r, row) in payoffs.iter().enumerate() {
            for (c, &(a, b)) in row.iter().enumerate() {
                if !a.is_finite() {
                    return Err(GameError::NonFinitePayoff {
                        row: r,
                        col: c,
                        player: 0,
                    });
                }
                if !b.is_finite() {
                    return Err(GameError::NonFinitePayoff {
                        row: r,
                        col: c,
                        player: 1,
                    });
                }
            }
        }
        Ok(Self {
            payoffs,
            orientation,
            labels,
        })
    }

    pub fn payoffs(&self) -> &[[(f64, f64); 2]; 2] {
        &self.payoffs
    }

    pub fn orientation(&self) -> [Orientation; 2] {
        self.orientation
    }

    /// Strategy name for `player` (0 = row, 1 = column) at `index`.
    pub fn label(&self, player: usize, index: usize) -> &str {
        &self.labels[player][index]
    }

    /// Payoff to `player` at the profile (row strategy, column strategy).
    fn payoff(&self, player: usize, row: usize, col: usize) -> f64 {
        let (a, b) = self.payoffs[row][col];
        if player == 0 {
            a
        } else {
            b
        }
    }
}

/// Per-player dominant strategy, if one exists.
///
/// A strategy is dominant when it is weakly better than the alternative
/// against every opponent strategy and strictly better against at least
/// one, judged by that player's orientation.
pub fn dominant_strategies(g: &OrdinalGame) -> [Option<usize>; 2] {
    let mut out = [None, None];
    for player in 0..2 {
        for (s, other) in [(0usize, 1usize), (1, 0)] {
            let mut weakly = true;
            let mut strictly_somewhere = false;
            for opp in 0..2 {
                let (mine, theirs) = if player == 0 {
                    (g.payoff(0, s, opp), g.payoff(0, other, opp))
                } else {
                    (g.payoff(1, opp, s), g.payoff(1, opp, other))
                };
                if g.orientation[player].better(theirs, mine) {
                    weakly = false;
                    break;
                }
                if g.orientation[player].better(mine, theirs) {
                    strictly_somewhere = true;
                }
            }
            if weakly && strictly_somewhere {
                out[player] = Some(s);
                break;
            }
        }
    }
    out
}

/// All pure-strategy Nash equilibria in row-major profile order.
///
/// A profile is an equilibrium when neither player can strictly improve
/// by a unilateral deviation.
pub fn pure_nash_equilibria(g: &OrdinalGame) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for r in 0..2 {
        for c in 0..2 {
            let row_improves = g.orientation[0].better(g.payoff(0, 1 - r, c), g.payoff(0, r, c));
            let col_improves = g.orientation[1].better(g.payoff(1, r, 1 - c), g.payoff(1, r, c));
            if !row_improves && !col_improves {
                out.push((r, c));
            }
        }
    }
    out
}

/// Forced-ethical-behavior transform.
///
/// Strategy 0 is Return and strategy 1 is Keep. In every profile where a
/// player returns, that player's payoff becomes what keeping would have
/// paid against the same opponent choice, plus `bonus`; everything else
/// is unchanged. A large enough bonus flips the dominant strategy from
/// Keep to Return.
pub fn feb_transform(g: &OrdinalGame, bonus: f64) -> OrdinalGame {
    let mut payoffs = g.payoffs;
    for opp in 0..2 {
        // Row player returning against column choice `opp`.
        payoffs[0][opp].0 = g.payoff(0, 1, opp) + bonus;
        // Column player returning against row choice `opp`.
        payoffs[opp][0].1 = g.payoff(1, opp, 1) + bonus;
    }
    OrdinalGame {
        payoffs,
        orientation: g.orientation,
        labels: g.labels.clone(),
    }
}

/// Row-stochastic 2x2 behavior matrix.
///
/// Row 1 holds Alice's (ethical, unethical) propensities and row 2
/// Bob's. Each row sums to one, so only the first column is stored and
/// the second is derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviorMatrix {
    phi11: f64,
    phi21: f64,
}

impl BehaviorMatrix {
    pub fn new(phi11: f64, phi21: f64) -> Result<Self, GameError> {
        for (name, value) in [("phi11", phi11), ("phi21", phi21)] {
            if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                return Err(GameError::PropensityOutOfRange { name, value });
            }
        }
        Ok(Self { phi11, phi21 })
    }

    pub fn phi11(&self) -> f64 {
        self.phi11
    }

    pub fn phi21(&self) -> f64 {
        self.phi21
    }

    /// The full matrix [[phi11, 1-phi11], [phi21, 1-phi21]].
    pub fn full(&self) -> [[f64; 2]; 2] {
        [
            [self.phi11, 1.0 - self.phi11],
            [self.phi21, 1.0 - self.phi21],
        ]
    }
}

/// An eigenvalue with its unit-norm eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
}

impl EigenPair {
    /// Residual `||A v - lambda v||` against the real matrix `a`.
    pub fn residual(&self, a: &[Vec<f64>]) -> f64 {
        let n = self.vector.len();
        let mut norm2 = 0.0;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += a[i][j] * self.vector[j];
            }
            acc -= self.value * self.vector[i];
            norm2 += acc.norm_sqr();
        }
        norm2.sqrt()
    }
}

/// Normalize to unit Euclidean length with the largest-magnitude
/// component rotated onto the positive real axis, so repeated runs
/// produce identical vectors.
fn canonicalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for c in &mut v {
            *c /= norm;
        }
    }
    let lead = v
        .iter()
        .cloned()
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .unwrap_or_else(|| Complex64::new(1.0, 0.0));
    if lead.norm() > 0.0 {
        let phase = lead / lead.norm();
        for c in &mut v {
            *c /= phase;
        }
    }
    v
}

/// Eigenpairs of a real 2x2 matrix via the characteristic quadratic,
/// sorted by descending real part, then descending imaginary part.
pub fn eigen_2x2(m: &[[f64; 2]; 2]) -> [EigenPair; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr - 4.0 * det;
    let values = if disc >= 0.0 {
        let s = disc.sqrt();
        [
            Complex64::new((tr + s) / 2.0, 0.0),
            Complex64::new((tr - s) / 2.0, 0.0),
        ]
    } else {
        let s = (-disc).sqrt();
        [
            Complex64::new(tr / 2.0, s / 2.0),
            Complex64::new(tr / 2.0, -s / 2.0),
        ]
    };
    let scale = m.iter().flatten().fold(0.0f64, |a, &x| a.max(x.abs()));
    let tol = 1e-12 * scale.max(1.0);
    let mut out = Vec::with_capacity(2);
    for (k, &lambda) in values.iter().enumerate() {
        let vector = if m[0][1].abs() > tol {
            vec![Complex64::new(m[0][1], 0.0), lambda - m[0][0]]
        } else if m[1][0].abs() > tol {
            vec![lambda - m[1][1], Complex64::new(m[1][0], 0.0)]
        } else {
            // Diagonal matrix: pair each eigenvalue with its axis. For a
            // repeated eigenvalue take distinct axes in pair order.
            let d0 = (lambda - m[0][0]).norm();
            let d1 = (lambda - m[1][1]).norm();
            if d0 < d1 || (d0 == d1 && k == 0) {
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
            } else {
                vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
            }
        };
        out.push(EigenPair {
            value: lambda,
            vector: canonicalize(vector),
        });
    }
    let mut pair: [EigenPair; 2] = [out.remove(0), out.remove(0)];
    sort_pairs(&mut pair);
    pair
}

pub(crate) fn sort_pairs(pairs: &mut [EigenPair]) {
    pairs.sort_by(|a, b| {
        b.value
            .re
            .total_cmp(&a.value.re)
            .then(b.value.im.total_cmp(&a.value.im))
    });
}

/// Eigenpairs of the full behavior matrix, computed numerically from the
/// 2x2 characteristic polynomial rather than from any special-cased
/// closed form.
pub fn phi_eigen(m: &BehaviorMatrix) -> [EigenPair; 2] {
    eigen_2x2(&m.full())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd() -> OrdinalGame {
        OrdinalGame::new(
            [[(1.0, 1.0), (10.0, 0.0)], [(0.0, 10.0), (5.0, 5.0)]],
            [Orientation::Minimize, Orientation::Minimize],
            [
                ["Cooperate".into(), "Defect".into()],
                ["Cooperate".into(), "Defect".into()],
            ],
        )
        .unwrap()
    }

    fn keep_return() -> OrdinalGame {
        OrdinalGame::new(
            [
                [(50.0, 50.0), (50.0, 100.0)],
                [(100.0, 50.0), (100.0, 100.0)],
            ],
            [Orientation::Maximize, Orientation::Maximize],
            [
                ["Return".into(), "Keep".into()],
                ["Return".into(), "Keep".into()],
            ],
        )
        .unwrap()
    }

    fn all_equal() -> OrdinalGame {
        OrdinalGame::new(
            [[(1.0, 1.0), (1.0, 1.0)], [(1.0, 1.0), (1.0, 1.0)]],
            [Orientation::Maximize, Orientation::Maximize],
            [["A".into(), "B".into()], ["A".into(), "B".into()]],
        )
        .unwrap()
    }

    /// Exhaustive oracle: try all four profiles and all eight unilateral
    /// deviations directly.
    fn nash_oracle(g: &OrdinalGame) -> Vec<(usize, usize)> {
        let pay = |p: usize, r: usize, c: usize| {
            let (a, b) = g.payoffs()[r][c];
            if p == 0 {
                a
            } else {
                b
            }
        };
        let better = |p: usize, a: f64, b: f64| match g.orientation()[p] {
            Orientation::Minimize => a < b,
            Orientation::Maximize => a > b,
        };
        let mut out = Vec::new();
        for r in 0..2 {
            for c in 0..2 {
                let mut stable = true;
                for rr in 0..2 {
                    if better(0, pay(0, rr, c), pay(0, r, c)) {
                        stable = false;
                    }
                }
                for cc in 0..2 {
                    if better(1, pay(1, r, cc), pay(1, r, c)) {
                        stable = false;
                    }
                }
                if stable {
                    out.push((r, c));
                }
            }
        }
        out
    }

    #[test]
    fn pd_defection_dominates() {
        assert_eq!(dominant_strategies(&pd()), [Some(1), Some(1)]);
    }

    #[test]
    fn keep_return_keeping_dominates() {
        assert_eq!(dominant_strategies(&keep_return()), [Some(1), Some(1)]);
    }

    #[test]
    fn all_equal_has_no_dominant_strategy() {
        assert_eq!(dominant_strategies(&all_equal()), [None, None]);
    }

    #[test]
    fn pd_unique_nash_is_mutual_defection() {
        let nash = pure_nash_equilibria(&pd());
        assert_eq!(nash, vec![(1, 1)]);
        assert_eq!(nash, nash_oracle(&pd()));
    }

    #[test]
    fn feb_nash_is_mutual_return() {
        let feb = feb_transform(&keep_return(), 50.0);
        let nash = pure_nash_equilibria(&feb);
        assert_eq!(nash, vec![(0, 0)]);
        assert_eq!(nash, nash_oracle(&feb));
    }

    #[test]
    fn all_equal_every_profile_is_nash() {
        assert_eq!(
            pure_nash_equilibria(&all_equal()),
            vec![(0, 0), (0, 1), (1, 0), (1, 1)]
        );
    }

    #[test]
    fn feb_bonus_50_reproduces_payoff_table() {
        let feb = feb_transform(&keep_return(), 50.0);
        assert_eq!(
            feb.payoffs(),
            &[
                [(150.0, 150.0), (150.0, 100.0)],
                [(100.0, 150.0), (100.0, 100.0)]
            ]
        );
    }

    #[test]
    fn feb_bonus_zero_flattens_the_game() {
        let feb = feb_transform(&keep_return(), 0.0);
        assert_eq!(
            feb.payoffs(),
            &[
                [(100.0, 100.0), (100.0, 100.0)],
                [(100.0, 100.0), (100.0, 100.0)]
            ]
        );
        assert_eq!(dominant_strategies(&feb), [None, None]);
    }

    #[test]
    fn feb_bonus_25_flips_dominance_to_return() {
        let feb = feb_transform(&keep_return(), 25.0);
        assert_eq!(feb.payoffs()[0][0], (125.0, 125.0));
        assert_eq!(dominant_strategies(&feb), [Some(0), Some(0)]);
    }

    #[test]
    fn phi_identity_has_unit_eigenvalues() {
        let m = BehaviorMatrix::new(1.0, 0.0).unwrap();
        let [a, b] = phi_eigen(&m);
        assert_eq!(a.value, Complex64::new(1.0, 0.0));
        assert_eq!(b.value, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn phi_half_half_eigenvalues() {
        // Quadratic-formula oracle on lambda^2 - lambda = 0: roots 1 and 0.
        let m = BehaviorMatrix::new(0.5, 0.5).unwrap();
        let [a, b] = phi_eigen(&m);
        assert!((a.value.re - 1.0).abs() < 1e-12 && a.value.im == 0.0);
        assert!(b.value.re.abs() < 1e-12 && b.value.im == 0.0);
    }

    #[test]
    fn phi_eight_two_eigenvalues() {
        // [[0.8, 0.2], [0.2, 0.8]]: tr=1.6, det=0.6 -> 1.0 and 0.6.
        let m = BehaviorMatrix::new(0.8, 0.2).unwrap();
        let [a, b] = phi_eigen(&m);
        assert!((a.value.re - 1.0).abs() < 1e-12);
        assert!((b.value.re - 0.6).abs() < 1e-12);
        let full: Vec<Vec<f64>> = m.full().iter().map(|r| r.to_vec()).collect();
        assert!(a.residual(&full) < 1e-10);
        assert!(b.residual(&full) < 1e-10);
    }

    #[test]
    fn behavior_matrix_rejects_out_of_range() {
        assert!(BehaviorMatrix::new(1.5, 0.0).is_err());
        assert!(BehaviorMatrix::new(0.5, -0.1).is_err());
        assert!(BehaviorMatrix::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn game_rejects_non_finite_payoffs() {
        let bad = OrdinalGame::new(
            [[(1.0, 1.0), (f64::NAN, 0.0)], [(0.0, 10.0), (5.0, 5.0)]],
            [Orientation::Minimize, Orientation::Minimize],
            [["C".into(), "D".into()], ["C".into(), "D".into()]],
        );
        assert!(bad.is_err());
    }
}
