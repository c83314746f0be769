//! Coupled linear ODE dynamics for two- and three-player games.
//!
//! A game is a constant-coefficient linear system dx/dt = M x. Because
//! the system is linear, M doubles as the Jacobian everywhere, so
//! equilibrium classification reduces to trace/determinant analysis.
//! The third player enters as a one-way forcing term: their own state
//! feeds the other rows but nothing feeds back, which keeps the 3x3
//! matrix block-triangular.

use num_complex::Complex64;
use thiserror::Error;

use crate::games::{eigen_2x2, sort_pairs, EigenPair};

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("coupling rate {0} is not finite")]
    NonFiniteRate(&'static str),
    #[error("missing coupling rate {0} for this system")]
    MissingGamma(&'static str),
    #[error("coupling rate {0} is not used by this system")]
    UnexpectedGamma(&'static str),
    #[error("system dimension {got} not supported here (expected {expected})")]
    Dimension { expected: usize, got: usize },
    #[error("matrix must be square with n in {{2, 3}} and finite entries")]
    BadMatrix,
    #[error("axis labels must be distinct and match the matrix dimension")]
    BadLabels,
    #[error("initial state length {got} does not match system dimension {expected}")]
    BadInitialState { expected: usize, got: usize },
    #[error("integration step must be finite and > 0, got {0}")]
    BadStep(f64),
    #[error("integration needs at least 1 step")]
    NoSteps,
    #[error("state became non-finite after step {last_finite_step}")]
    Overflow {
        last_finite_step: usize,
        partial: Trajectory,
    },
    #[error("eigenvalues coincide; closed form for defective systems is unsupported")]
    RepeatedEigenvalue,
    #[error("initial state is not finite")]
    NonFiniteState,
}

/// Interaction rates. `alpha1`, `beta1` drive the first equation and
/// `alpha2`, `beta2` the second; the optional gammas couple the third
/// player in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub gamma3: Option<f64>,
}

impl CouplingParams {
    pub fn two_player(alpha1: f64, beta1: f64, alpha2: f64, beta2: f64) -> Self {
        Self {
            alpha1,
            beta1,
            alpha2,
            beta2,
            gamma1: None,
            gamma2: None,
            gamma3: None,
        }
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        let named = [
            ("alpha1", Some(self.alpha1)),
            ("beta1", Some(self.beta1)),
            ("alpha2", Some(self.alpha2)),
            ("beta2", Some(self.beta2)),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("gamma3", self.gamma3),
        ];
        for (name, value) in named {
            if let Some(v) = value {
                if !v.is_finite() {
                    return Err(DynamicsError::NonFiniteRate(name));
                }
            }
        }
        Ok(())
    }
}

/// Which pairing of the two players a 2D system models. The matrix is
/// the same [[alpha1, beta1], [alpha2, beta2]] in every variant; only
/// the axis labels change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPlayerVariant {
    EthicalBobCrookAlice,
    EthicalAliceCrookBob,
    UnethicalDuo,
    EthicalDuo,
}

impl TwoPlayerVariant {
    pub fn labels(self) -> [&'static str; 2] {
        match self {
            TwoPlayerVariant::EthicalBobCrookAlice => ["U_A", "E_B"],
            TwoPlayerVariant::EthicalAliceCrookBob => ["U_B", "E_A"],
            TwoPlayerVariant::UnethicalDuo => ["U_B", "U_A"],
            TwoPlayerVariant::EthicalDuo => ["E_B", "E_A"],
        }
    }
}

/// Whether the third player's state forces only the second row or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarlInfluence {
    AliceOnly,
    AliceAndBob,
}

/// An N-dimensional linear system dx/dt = M x with labeled axes.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    matrix: Vec<Vec<f64>>,
    labels: Vec<String>,
}

impl LinearSystem {
    pub fn new(matrix: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self, DynamicsError> {
        let n = matrix.len();
        if !(n == 2 || n == 3) || matrix.iter().any(|r| r.len() != n) {
            return Err(DynamicsError::BadMatrix);
        }
        if matrix.iter().flatten().any(|v| !v.is_finite()) {
            return Err(DynamicsError::BadMatrix);
        }
        if labels.len() != n {
            return Err(DynamicsError::BadLabels);
        }
        for i in 0..n {
            for j in 0..i {
                if labels[i] == labels[j] {
                    return Err(DynamicsError::BadLabels);
                }
            }
        }
        Ok(Self { matrix, labels })
    }

    pub fn n(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// dx/dt at `x`.
    pub fn derivative(&self, x: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).map(|(m, v)| m * v).sum())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n()).map(|i| self.matrix[i][i]).sum()
    }

    /// Determinant, defined for n in {2, 3}.
    pub fn determinant(&self) -> f64 {
        let m = &self.matrix;
        match self.n() {
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
        }
    }
}

/// Two-player system [[alpha1, beta1], [alpha2, beta2]] with axis labels
/// chosen by the variant.
pub fn build_two_player(
    p: &CouplingParams,
    variant: TwoPlayerVariant,
) -> Result<LinearSystem, DynamicsError> {
    p.validate()?;
    for (name, g) in [
        ("gamma1", p.gamma1),
        ("gamma2", p.gamma2),
        ("gamma3", p.gamma3),
    ] {
        if g.is_some() {
            return Err(DynamicsError::UnexpectedGamma(name));
        }
    }
    LinearSystem::new(
        vec![vec![p.alpha1, p.beta1], vec![p.alpha2, p.beta2]],
        variant.labels().iter().map(|s| s.to_string()).collect(),
    )
}

/// Trace-free special form [[alpha1, beta1], [-beta1, -alpha1]].
pub fn build_psi(alpha1: f64, beta1: f64) -> Result<LinearSystem, DynamicsError> {
    if !alpha1.is_finite() {
        return Err(DynamicsError::NonFiniteRate("alpha1"));
    }
    if !beta1.is_finite() {
        return Err(DynamicsError::NonFiniteRate("beta1"));
    }
    LinearSystem::new(
        vec![vec![alpha1, beta1], vec![-beta1, -alpha1]],
        vec!["U_A".to_string(), "E_B".to_string()],
    )
}

/// Three-player system over (U_B, U_A, E_C). The third player forces the
/// first two rows through gamma1/gamma2 but evolves independently at
/// rate gamma3, so the last row is [0, 0, gamma3].
pub fn build_three_player(
    p: &CouplingParams,
    carl: CarlInfluence,
) -> Result<LinearSystem, DynamicsError> {
    p.validate()?;
    let gamma2 = p.gamma2.ok_or(DynamicsError::MissingGamma("gamma2"))?;
    let gamma3 = p.gamma3.ok_or(DynamicsError::MissingGamma("gamma3"))?;
    let gamma1 = match carl {
        CarlInfluence::AliceOnly => {
            if p.gamma1.is_some() {
                return Err(DynamicsError::UnexpectedGamma("gamma1"));
            }
            0.0
        }
        CarlInfluence::AliceAndBob => p.gamma1.ok_or(DynamicsError::MissingGamma("gamma1"))?,
    };
    LinearSystem::new(
        vec![
            vec![p.alpha1, p.beta1, gamma1],
            vec![p.alpha2, p.beta2, gamma2],
            vec![0.0, 0.0, gamma3],
        ],
        vec!["U_B".to_string(), "U_A".to_string(), "E_C".to_string()],
    )
}

/// Null vector of a complex matrix by Gaussian elimination with partial
/// pivoting. Intended for shifted matrices A - lambda I that are singular
/// up to rounding.
fn null_vector(m: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = m.len();
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let scale = a
        .iter()
        .flatten()
        .fold(0.0f64, |acc, c| acc.max(c.norm()))
        .max(1.0);
    let tol = 1e-9 * scale;

    let mut pivot_rows: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    for col in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for (r, row) in a.iter().enumerate() {
            if !used[r] {
                let mag = row[col].norm();
                if best.map_or(true, |(_, m)| mag > m) {
                    best = Some((r, mag));
                }
            }
        }
        let (row, mag) = best.unwrap();
        if mag <= tol {
            continue; // free column
        }
        used[row] = true;
        pivot_rows[col] = Some(row);
        let pivot = a[row][col];
        for r in 0..n {
            if r != row {
                let factor = a[r][col] / pivot;
                for c in 0..n {
                    let sub = factor * a[row][c];
                    a[r][c] -= sub;
                }
            }
        }
    }

    // First free column gets value 1; back-substitute the pivots. A
    // numerically full-rank input (possible only for a badly polished
    // eigenvalue) frees its weakest pivot instead.
    let free = match (0..n).position(|c| pivot_rows[c].is_none()) {
        Some(col) => col,
        None => {
            let col = (0..n)
                .min_by(|&i, &j| {
                    let pi = a[pivot_rows[i].unwrap()][i].norm();
                    let pj = a[pivot_rows[j].unwrap()][j].norm();
                    pi.total_cmp(&pj)
                })
                .unwrap();
            pivot_rows[col] = None;
            col
        }
    };
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[free] = Complex64::new(1.0, 0.0);
    for col in 0..n {
        if let Some(row) = pivot_rows[col] {
            v[col] = -a[row][free] / a[row][col];
        }
    }
    v
}

fn unit_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
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
        .unwrap();
    if lead.norm() > 0.0 {
        let phase = lead / lead.norm();
        for c in &mut v {
            *c /= phase;
        }
    }
    v
}

/// Roots of a real cubic x^3 + p x^2 + q x + r.
fn cubic_roots(p: f64, q: f64, r: f64) -> [Complex64; 3] {
    // Depressed form t^3 + at + b with x = t - p/3.
    let a = q - p * p / 3.0;
    let b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    let shift = -p / 3.0;
    let disc = (b / 2.0) * (b / 2.0) + (a / 3.0) * (a / 3.0) * (a / 3.0);
    let mut roots = if disc > 0.0 {
        // One real root, one complex-conjugate pair.
        let sq = disc.sqrt();
        let u = (-b / 2.0 + sq).cbrt();
        let v = (-b / 2.0 - sq).cbrt();
        let real = u + v;
        let im = (u - v) * 3.0f64.sqrt() / 2.0;
        [
            Complex64::new(real + shift, 0.0),
            Complex64::new(-real / 2.0 + shift, im),
            Complex64::new(-real / 2.0 + shift, -im),
        ]
    } else if a.abs() < 1e-300 {
        // Triple root.
        [Complex64::new(shift, 0.0); 3]
    } else {
        // Three real roots via the trigonometric method.
        let m = 2.0 * (-a / 3.0).sqrt();
        let arg = (3.0 * b / (a * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let t = m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
            *slot = Complex64::new(t + shift, 0.0);
        }
        out
    };
    // A few Newton steps on the original cubic to polish each root.
    for root in &mut roots {
        for _ in 0..3 {
            let x = *root;
            let f = ((x + p) * x + q) * x + r;
            let df = (3.0 * x + 2.0 * p) * x + q;
            if df.norm() > 0.0 {
                *root -= f / df;
            }
        }
    }
    roots
}

/// All eigenpairs of the system, sorted by descending real part then
/// descending imaginary part.
///
/// For n=2 this is the characteristic quadratic. For n=3 a decoupled
/// third row [0, 0, g] makes the matrix block-triangular: the third
/// eigenvalue is exactly g and the rest come from the 2x2 block;
/// otherwise the characteristic cubic is solved directly.
pub fn eigen(s: &LinearSystem) -> Vec<EigenPair> {
    let m = s.matrix();
    if s.n() == 2 {
        let [a, b] = eigen_2x2(&[[m[0][0], m[0][1]], [m[1][0], m[1][1]]]);
        return vec![a, b];
    }

    let values: Vec<Complex64> = if m[2][0] == 0.0 && m[2][1] == 0.0 {
        let [a, b] = eigen_2x2(&[[m[0][0], m[0][1]], [m[1][0], m[1][1]]]);
        vec![a.value, b.value, Complex64::new(m[2][2], 0.0)]
    } else {
        let tr = s.trace();
        let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0]
            + m[1][1] * m[2][2]
            - m[1][2] * m[2][1];
        cubic_roots(-tr, minors, -s.determinant()).to_vec()
    };

    let mut pairs: Vec<EigenPair> = values
        .into_iter()
        .map(|lambda| {
            let shifted: Vec<Vec<Complex64>> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            let mut c = Complex64::new(m[i][j], 0.0);
                            if i == j {
                                c -= lambda;
                            }
                            c
                        })
                        .collect()
                })
                .collect();
            EigenPair {
                value: lambda,
                vector: unit_phase(null_vector(&shifted)),
            }
        })
        .collect();
    sort_pairs(&mut pairs);
    pairs
}

/// Closed-form solution x(t) = C1 v1 e^(l1 t) + C2 v2 e^(l2 t) of a 2D
/// system with distinct eigenvalues, with C fixed by the initial state.
#[derive(Debug, Clone)]
pub struct ClosedFormSolution {
    eigenpairs: [EigenPair; 2],
    coefficients: [Complex64; 2],
}

impl ClosedFormSolution {
    pub fn eigenpairs(&self) -> &[EigenPair; 2] {
        &self.eigenpairs
    }

    pub fn coefficients(&self) -> [Complex64; 2] {
        self.coefficients
    }

    /// Exact solution sampled on the same uniform grid the integrators
    /// use, so closed-form and stepped trajectories compare row by row.
    pub fn sample(&self, dt: f64, steps: usize) -> Result<Trajectory, DynamicsError> {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(DynamicsError::BadStep(dt));
        }
        if steps == 0 {
            return Err(DynamicsError::NoSteps);
        }
        let mut times = Vec::with_capacity(steps + 1);
        let mut states = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            let t = i as f64 * dt;
            let x = self.eval(t);
            if x.iter().any(|v| !v.is_finite()) {
                return Err(DynamicsError::Overflow {
                    last_finite_step: i.saturating_sub(1),
                    partial: Trajectory {
                        times,
                        states,
                        method: TrajectoryMethod::ClosedForm,
                    },
                });
            }
            times.push(t);
            states.push(x.to_vec());
        }
        Ok(Trajectory {
            times,
            states,
            method: TrajectoryMethod::ClosedForm,
        })
    }

    /// State at time `t`. The imaginary residue of the complex sum is
    /// discarded; for real systems and real initial conditions it only
    /// carries rounding noise.
    pub fn eval(&self, t: f64) -> [f64; 2] {
        let mut acc = [Complex64::new(0.0, 0.0); 2];
        for (pair, &coef) in self.eigenpairs.iter().zip(&self.coefficients) {
            let growth = (pair.value * t).exp();
            for i in 0..2 {
                acc[i] += coef * pair.vector[i] * growth;
            }
        }
        debug_assert!(acc.iter().all(|c| c.im.abs() <= 1e-9 * c.norm().max(1.0)));
        [acc[0].re, acc[1].re]
    }
}

pub fn closed_form_solution(
    s: &LinearSystem,
    x0: [f64; 2],
) -> Result<ClosedFormSolution, DynamicsError> {
    if s.n() != 2 {
        return Err(DynamicsError::Dimension {
            expected: 2,
            got: s.n(),
        });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(DynamicsError::NonFiniteState);
    }
    let pairs = eigen(s);
    let (l1, l2) = (pairs[0].value, pairs[1].value);
    if (l1 - l2).norm() <= 1e-9 {
        return Err(DynamicsError::RepeatedEigenvalue);
    }
    // Solve [v1 v2] C = x0 by Cramer's rule in complex arithmetic.
    let (v1, v2) = (&pairs[0].vector, &pairs[1].vector);
    let det = v1[0] * v2[1] - v2[0] * v1[1];
    let b = [Complex64::new(x0[0], 0.0), Complex64::new(x0[1], 0.0)];
    let c1 = (b[0] * v2[1] - v2[0] * b[1]) / det;
    let c2 = (v1[0] * b[1] - b[0] * v1[1]) / det;
    Ok(ClosedFormSolution {
        eigenpairs: [pairs[0].clone(), pairs[1].clone()],
        coefficients: [c1, c2],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrationMethod {
    Euler,
    Rk4,
}

/// How a trajectory's states were produced: a fixed-step scheme or
/// exact sampling of a closed-form solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryMethod {
    Euler,
    Rk4,
    ClosedForm,
}

impl From<IntegrationMethod> for TrajectoryMethod {
    fn from(m: IntegrationMethod) -> Self {
        match m {
            IntegrationMethod::Euler => TrajectoryMethod::Euler,
            IntegrationMethod::Rk4 => TrajectoryMethod::Rk4,
        }
    }
}

/// A fixed-step trajectory. `times[i]` is `i * dt` and `states[0]` is
/// the initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub method: TrajectoryMethod,
}

/// Fixed-step integration of dx/dt = M x from `x0`.
///
/// For the Euler method, a state component whose row has no off-diagonal
/// coupling is advanced as `x * (1 + dt * m_ii)` instead of the generic
/// `x + dt * (M x)_i`. The two are algebraically identical; the factored
/// order makes decoupled components bit-reproducible against the closed
/// geometric recurrence `(1 + dt * m_ii)^n * x0`.
pub fn integrate(
    s: &LinearSystem,
    x0: &[f64],
    dt: f64,
    steps: usize,
    method: IntegrationMethod,
) -> Result<Trajectory, DynamicsError> {
    let n = s.n();
    if x0.len() != n {
        return Err(DynamicsError::BadInitialState {
            expected: n,
            got: x0.len(),
        });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(DynamicsError::NonFiniteState);
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(DynamicsError::BadStep(dt));
    }
    if steps == 0 {
        return Err(DynamicsError::NoSteps);
    }

    let m = s.matrix();
    let decoupled_factor: Vec<Option<f64>> = (0..n)
        .map(|i| {
            let coupled = (0..n).any(|j| j != i && m[i][j] != 0.0);
            if coupled {
                None
            } else {
                Some(1.0 + dt * m[i][i])
            }
        })
        .collect();

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x0.to_vec());

    let mut x = x0.to_vec();
    for step in 1..=steps {
        let next: Vec<f64> = match method {
            IntegrationMethod::Euler => (0..n)
                .map(|i| match decoupled_factor[i] {
                    Some(q) => x[i] * q,
                    None => {
                        let dx: f64 = (0..n).map(|j| m[i][j] * x[j]).sum();
                        x[i] + dt * dx
                    }
                })
                .collect(),
            IntegrationMethod::Rk4 => {
                let k1 = s.derivative(&x);
                let mid1: Vec<f64> = (0..n).map(|i| x[i] + 0.5 * dt * k1[i]).collect();
                let k2 = s.derivative(&mid1);
                let mid2: Vec<f64> = (0..n).map(|i| x[i] + 0.5 * dt * k2[i]).collect();
                let k3 = s.derivative(&mid2);
                let end: Vec<f64> = (0..n).map(|i| x[i] + dt * k3[i]).collect();
                let k4 = s.derivative(&end);
                (0..n)
                    .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                    .collect()
            }
        };
        if next.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::Overflow {
                last_finite_step: step - 1,
                partial: Trajectory {
                    times,
                    states,
                    method: method.into(),
                },
            });
        }
        times.push(step as f64 * dt);
        states.push(next.clone());
        x = next;
    }
    Ok(Trajectory {
        times,
        states,
        method: method.into(),
    })
}

/// Equilibrium type of a planar linear system at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumKind {
    Saddle,
    StableNode,
    UnstableNode,
    StableSpiral,
    UnstableSpiral,
    Center,
    DegenerateLine,
    DegenerateZero,
}

impl EquilibriumKind {
    pub fn name(self) -> &'static str {
        match self {
            EquilibriumKind::Saddle => "Saddle",
            EquilibriumKind::StableNode => "StableNode",
            EquilibriumKind::UnstableNode => "UnstableNode",
            EquilibriumKind::StableSpiral => "StableSpiral",
            EquilibriumKind::UnstableSpiral => "UnstableSpiral",
            EquilibriumKind::Center => "Center",
            EquilibriumKind::DegenerateLine => "DegenerateLine",
            EquilibriumKind::DegenerateZero => "DegenerateZero",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumClass {
    pub kind: EquilibriumKind,
    pub trace: f64,
    pub determinant: f64,
    pub discriminant: f64,
}

/// Trace/determinant classification with tolerance 1e-9 on zero tests.
pub fn classify_equilibrium(s: &LinearSystem) -> Result<EquilibriumClass, DynamicsError> {
    if s.n() != 2 {
        return Err(DynamicsError::Dimension {
            expected: 2,
            got: s.n(),
        });
    }
    const EPS: f64 = 1e-9;
    let trace = s.trace();
    let determinant = s.determinant();
    let discriminant = trace * trace - 4.0 * determinant;
    let kind = if determinant < -EPS {
        EquilibriumKind::Saddle
    } else if determinant.abs() <= EPS {
        if trace.abs() <= EPS {
            EquilibriumKind::DegenerateZero
        } else {
            EquilibriumKind::DegenerateLine
        }
    } else if trace.abs() <= EPS {
        EquilibriumKind::Center
    } else if trace < 0.0 {
        if discriminant >= -EPS {
            EquilibriumKind::StableNode
        } else {
            EquilibriumKind::StableSpiral
        }
    } else if discriminant >= -EPS {
        EquilibriumKind::UnstableNode
    } else {
        EquilibriumKind::UnstableSpiral
    };
    Ok(EquilibriumClass {
        kind,
        trace,
        determinant,
        discriminant,
    })
}

/// A quadratic form Q(x, y) = a x^2 + b xy + c y^2 that is constant
/// along every trajectory of the system it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticInvariant {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticInvariant {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.a * x * x + self.b * x * y + self.c * y * y
    }
}

/// Conserved quadratic for trace-free 2D systems of the special
/// anti-symmetric coupling form, normalized so a = 1. Returns `None`
/// when the trace is nonzero, the upper coupling vanishes, or the
/// candidate form is not actually conserved.
pub fn conserved_form(s: &LinearSystem) -> Result<Option<QuadraticInvariant>, DynamicsError> {
    if s.n() != 2 {
        return Err(DynamicsError::Dimension {
            expected: 2,
            got: s.n(),
        });
    }
    const EPS: f64 = 1e-9;
    let m = s.matrix();
    if s.trace().abs() > EPS || m[0][1].abs() <= EPS {
        return Ok(None);
    }
    let q = QuadraticInvariant {
        a: 1.0,
        b: 2.0 * m[0][0] / m[0][1],
        c: -m[1][0] / m[0][1],
    };
    // dQ/dt collects to three coefficient equations; all must vanish.
    let cxx = 2.0 * q.a * m[0][0] + q.b * m[1][0];
    let cxy = 2.0 * q.a * m[0][1] + q.b * (m[0][0] + m[1][1]) + 2.0 * q.c * m[1][0];
    let cyy = q.b * m[0][1] + 2.0 * q.c * m[1][1];
    let scale = m.iter().flatten().fold(1.0f64, |a, &v| a.max(v.abs()));
    if cxx.abs() > EPS * scale || cxy.abs() > EPS * scale || cyy.abs() > EPS * scale {
        return Ok(None);
    }
    Ok(Some(q))
}
