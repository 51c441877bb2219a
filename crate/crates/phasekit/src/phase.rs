//! Phase operators and their temporally stable eigenstate families.
//!
//! A finite (or truncated) representation admits a unitary phase operator E
//! with cyclic action E|n> = e^{i[F(n)-F(n-1)] phi} |n-1> (index mod dim),
//! giving the polar decomposition a- = E sqrt(F(N)). Its eigenstates
//!
//! ```text
//! |m, phi> = dim^{-1/2} sum_n e^{-i F(n) phi} q^{mn} |n>,   q = e^{2 pi i / dim},
//! ```
//!
//! form an orthonormal basis that is equiprobable with respect to the number
//! basis and temporally stable: e^{-i F(N) t} only shifts phi to phi + t.
//!
//! In the infinite regime the phase operator survives only as a one-sided
//! isometry on a numerical cutoff space (E E^dag = I, E^dag E = I - |0><0|),
//! with non-normalizable eigenvectors |theta, phi> on the unit circle.
//!
//! The truncated algebra additionally carries the cyclic operator
//! V_s = b- + (b+)^{s-1} / E(s-1), whose weighted eigenstates |mu, phi> are
//! discrete analogs of coherent states over a finite spectrum, and the
//! diagonal companion U_s = (q_s)^N. The pair satisfies V_s^s = U_s^s = I
//! and V_s U_s = q_s U_s V_s but fails to be a Weyl pair because V_s is not
//! unitary whenever the weights E(n) = F(1)...F(n) are non-constant.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::{RepKind, Representation, StructureFunction};
use crate::error::{Error, Result};
use crate::kappa::KappaParam;
use crate::linalg::{cis, dagger, identity, inner, matrix_power, max_abs_diff, outer};

/// Which phase operator a matrix represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseOperatorKind {
    FiniteEd,
    TruncatedEs,
    InfiniteCutoff,
}

/// A phase operator over one representation space.
#[derive(Debug, Clone)]
pub struct PhaseOperator {
    matrix: Array2<Complex64>,
    kind: PhaseOperatorKind,
    phi: f64,
    dim: usize,
    kappa: KappaParam,
}

impl PhaseOperator {
    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn kind(&self) -> PhaseOperatorKind {
        self.kind
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kappa(&self) -> KappaParam {
        self.kappa
    }

    /// ||E^dag E - I||_max; vanishes for the finite and truncated kinds.
    pub fn unitarity_residual(&self) -> f64 {
        max_abs_diff(&dagger(&self.matrix).dot(&self.matrix), &identity(self.dim))
    }

    /// ||E E^dag - I||_max.
    pub fn right_unitarity_residual(&self) -> f64 {
        max_abs_diff(&self.matrix.dot(&dagger(&self.matrix)), &identity(self.dim))
    }

    /// ||E^dim - I||_max, the cyclicity of the finite phase operator.
    pub fn power_residual(&self) -> f64 {
        max_abs_diff(&matrix_power(&self.matrix, self.dim), &identity(self.dim))
    }

    /// ||a- - E sqrt(F(N))||_max over the representation that produced E.
    pub fn polar_residual(&self, rep: &Representation) -> Result<f64> {
        if rep.dim() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "operator dim {} vs representation dim {}",
                self.dim,
                rep.dim()
            )));
        }
        let root = Array2::from_diag(
            &(0..self.dim)
                .map(|n| Complex64::new(rep.structure().value_f64(n).sqrt(), 0.0))
                .collect::<ndarray::Array1<_>>(),
        );
        Ok(max_abs_diff(rep.a_minus(), &self.matrix.dot(&root)))
    }

    /// Nonunitarity witness of the cutoff operator: residual of
    /// E^dag E = I - |0><0| (exact on the cutoff space).
    pub fn left_isometry_defect(&self) -> f64 {
        let mut expected = identity(self.dim);
        expected[(0, 0)] = Complex64::new(0.0, 0.0);
        max_abs_diff(&dagger(&self.matrix).dot(&self.matrix), &expected)
    }

    /// Residual of E E^dag = I away from the last diagonal entry, plus the
    /// modulus of that entry. The identity holds exactly on the infinite
    /// space; the cutoff loses only the (last, last) element, which the
    /// second component exposes (it reads 0 instead of 1).
    pub fn right_isometry_defect(&self) -> (f64, f64) {
        let prod = self.matrix.dot(&dagger(&self.matrix));
        let last = self.dim - 1;
        let mut residual = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == last && j == last {
                    continue;
                }
                let expected = if i == j { 1.0 } else { 0.0 };
                residual = residual.max((prod[(i, j)] - Complex64::new(expected, 0.0)).norm());
            }
        }
        (residual, prod[(last, last)].norm())
    }
}

/// Build the unitary phase operator of a finite or truncated representation.
///
/// The action is E|n> = e^{i[F(n)-F(n-1)] phi}|n-1> for n >= 1, closed
/// cyclically by E|0> = e^{i[F(0)-F(dim-1)] phi}|dim-1>.
pub fn phase_operator(rep: &Representation) -> Result<PhaseOperator> {
    let kind = match rep.kind() {
        RepKind::FiniteExact => PhaseOperatorKind::FiniteEd,
        RepKind::Truncated => PhaseOperatorKind::TruncatedEs,
        RepKind::InfiniteCutoff => {
            return Err(Error::Regime(
                "open-top cutoff representation has no unitary phase operator; \
                 use phase_operator_infinite_cutoff"
                    .into(),
            ))
        }
    };
    let dim = rep.dim();
    let f = rep.structure();
    let phi = rep.phi();
    let mut matrix: Array2<Complex64> = Array2::zeros((dim, dim));
    for n in 1..dim {
        matrix[(n - 1, n)] = cis(f.increment(n - 1).to_f64().unwrap() * phi);
    }
    // cyclic closure; for dim = 1 this is the whole operator (phase 0)
    matrix[(dim - 1, 0)] = cis(-f.value_f64(dim - 1) * phi);
    Ok(PhaseOperator {
        matrix,
        kind,
        phi,
        dim,
        kappa: rep.kappa(),
    })
}

/// The nonunitary phase operator of the infinite regime, materialized on the
/// cutoff space spanned by |0>..|n_max>: a strict upper shift with phases
/// e^{i[F(n+1)-F(n)] phi}.
pub fn phase_operator_infinite_cutoff(
    kappa: KappaParam,
    phi: f64,
    n_max: usize,
) -> Result<PhaseOperator> {
    if kappa.is_negative() {
        return Err(Error::Regime(format!(
            "kappa = {kappa} < 0 is the finite regime; its phase operator is unitary"
        )));
    }
    let dim = n_max + 1;
    let f = StructureFunction::new(kappa, n_max)?;
    let mut matrix: Array2<Complex64> = Array2::zeros((dim, dim));
    for n in 0..n_max {
        matrix[(n, n + 1)] = cis(f.increment(n).to_f64().unwrap() * phi);
    }
    Ok(PhaseOperator {
        matrix,
        kind: PhaseOperatorKind::InfiniteCutoff,
        phi,
        dim,
        kappa,
    })
}

/// Label of a phase state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateLabel {
    /// Eigenstate of the finite/truncated phase operator, eigenvalue
    /// e^{2 pi i m / dim}.
    M { m: usize, phi: f64 },
    /// Non-normalized eigenvector of the cutoff phase operator, eigenvalue
    /// e^{i theta}.
    Theta { theta: f64, phi: f64 },
    /// Eigenstate of V_s, eigenvalue (q_s)^mu.
    Mu { mu: usize, phi: f64 },
    /// Computational (number) basis vector |n>.
    Number { n: usize },
}

impl StateLabel {
    /// The phi carried by the label, when it has one.
    pub fn phi(&self) -> Option<f64> {
        match self {
            StateLabel::M { phi, .. }
            | StateLabel::Theta { phi, .. }
            | StateLabel::Mu { phi, .. } => Some(*phi),
            StateLabel::Number { .. } => None,
        }
    }
}

/// A labeled complex amplitude vector together with the spectrum that
/// generates its time evolution.
#[derive(Debug, Clone)]
pub struct PhaseState {
    pub label: StateLabel,
    amplitudes: Vec<Complex64>,
    normalized: bool,
    dim: usize,
    kappa: Option<KappaParam>,
    /// Energy attached to each level; F(n) for algebraic states, the
    /// physical e_n for potential-derived ones.
    spectrum: Vec<f64>,
}

impl PhaseState {
    /// Assemble a state from raw parts. The spectrum must assign one energy
    /// per amplitude; it is what [`evolve`] exponentiates.
    pub fn new(
        label: StateLabel,
        amplitudes: Vec<Complex64>,
        normalized: bool,
        kappa: Option<KappaParam>,
        spectrum: Vec<f64>,
    ) -> Self {
        let dim = amplitudes.len();
        assert_eq!(spectrum.len(), dim, "one spectrum entry per amplitude");
        Self {
            label,
            amplitudes,
            normalized,
            dim,
            kappa,
            spectrum,
        }
    }

    /// The computational basis vector |n> of a dim-dimensional space.
    pub fn computational(n: usize, dim: usize, spectrum: Vec<f64>) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Self::new(StateLabel::Number { n }, amplitudes, true, None, spectrum)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kappa(&self) -> Option<KappaParam> {
        self.kappa
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Max amplitude difference against another state of the same dimension.
    pub fn max_diff(&self, other: &PhaseState) -> f64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// 1 - |<self|other>| / (|self| |other|): zero iff the two states agree
    /// up to a global phase.
    pub fn global_phase_distance(&self, other: &PhaseState) -> f64 {
        let ip = inner(&self.amplitudes, &other.amplitudes).norm();
        1.0 - ip / (self.norm() * other.norm())
    }

    /// JSON wire format: {label, amplitudes, dim, kappa}.
    pub fn to_json(&self) -> serde_json::Value {
        let label = match self.label {
            StateLabel::M { m, phi } => serde_json::json!({"type": "m", "m": m, "phi": phi}),
            StateLabel::Theta { theta, phi } => {
                serde_json::json!({"type": "theta", "theta": theta, "phi": phi})
            }
            StateLabel::Mu { mu, phi } => {
                serde_json::json!({"type": "mu", "mu": mu, "phi": phi})
            }
            StateLabel::Number { n } => serde_json::json!({"type": "n", "n": n}),
        };
        let kappa = match self.kappa {
            Some(k) => serde_json::json!({"num": k.numerator(), "den": k.denominator()}),
            None => serde_json::Value::Null,
        };
        serde_json::json!({
            "label": label,
            "amplitudes": self.amplitudes.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "dim": self.dim,
            "kappa": kappa,
        })
    }
}

/// The dim eigenstates |m, phi> of the phase operator, m = 0..dim-1.
///
/// `dim` is the full dimension d in the untruncated finite regime or the
/// truncation order s otherwise; any dim beyond the positivity bound of the
/// structure function is rejected.
pub fn phase_states(dim: usize, kappa: KappaParam, phi: f64) -> Result<Vec<PhaseState>> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dim 0 state family".into()));
    }
    let f = StructureFunction::new(kappa, dim - 1)?;
    let spectrum = f.values_f64();
    let scale = 1.0 / (dim as f64).sqrt();
    let states = (0..dim)
        .map(|m| {
            let amplitudes = (0..dim)
                .map(|n| {
                    let fourier = cis(2.0 * PI * ((m * n) % dim) as f64 / dim as f64);
                    scale * cis(-spectrum[n] * phi) * fourier
                })
                .collect();
            PhaseState::new(
                StateLabel::M { m, phi },
                amplitudes,
                true,
                Some(kappa),
                spectrum.clone(),
            )
        })
        .collect();
    Ok(states)
}

/// The non-normalized phase state |theta, phi> of the infinite regime on the
/// cutoff space: amplitudes e^{i n theta} e^{-i F(n) phi}, n = 0..=n_max.
pub fn theta_phase_state(
    theta: f64,
    phi: f64,
    kappa: KappaParam,
    n_max: usize,
) -> Result<PhaseState> {
    if kappa.is_negative() {
        return Err(Error::Regime(format!(
            "kappa = {kappa} < 0: theta states belong to the infinite regime"
        )));
    }
    if !(-PI..=PI).contains(&theta) {
        return Err(Error::InvalidParameter(format!(
            "theta = {theta} outside [-pi, pi]"
        )));
    }
    let f = StructureFunction::new(kappa, n_max)?;
    let spectrum = f.values_f64();
    let amplitudes = (0..=n_max)
        .map(|n| cis(n as f64 * theta - spectrum[n] * phi))
        .collect();
    Ok(PhaseState::new(
        StateLabel::Theta { theta, phi },
        amplitudes,
        false,
        Some(kappa),
        spectrum,
    ))
}

/// Apply e^{-i H t} with H the state's own spectrum. Temporal stability:
/// the result is the same family member with phi shifted to phi + t.
pub fn evolve(state: &PhaseState, t: f64) -> PhaseState {
    let amplitudes = state
        .amplitudes
        .iter()
        .zip(state.spectrum.iter())
        .map(|(a, e)| a * cis(-e * t))
        .collect();
    let label = match state.label {
        StateLabel::M { m, phi } => StateLabel::M { m, phi: phi + t },
        StateLabel::Theta { theta, phi } => StateLabel::Theta {
            theta,
            phi: phi + t,
        },
        StateLabel::Mu { mu, phi } => StateLabel::Mu { mu, phi: phi + t },
        // number states are stationary; only a global phase was applied
        StateLabel::Number { n } => StateLabel::Number { n },
    };
    PhaseState::new(
        label,
        amplitudes,
        state.normalized,
        state.kappa,
        state.spectrum.clone(),
    )
}

/// Standard inner product <state1|state2>.
pub fn overlap(state1: &PhaseState, state2: &PhaseState) -> Result<Complex64> {
    if state1.dim != state2.dim {
        return Err(Error::DimensionMismatch(format!(
            "states of dim {} and {}",
            state1.dim, state2.dim
        )));
    }
    Ok(inner(&state1.amplitudes, &state2.amplitudes))
}

/// Closed-form overlap of two |m, phi> states over the same algebra:
///
/// ```text
/// <m,phi|m',phi'> = (1/dim) sum_n q^{rho(n)},
/// rho(n) = -(m - m') n + dim/(2 pi) (phi - phi') F(n),
/// ```
///
/// an independent evaluation route used to cross-check [`overlap`].
pub fn phase_overlap_formula(
    dim: usize,
    kappa: KappaParam,
    m: usize,
    phi: f64,
    m_prime: usize,
    phi_prime: f64,
) -> Result<Complex64> {
    let f = StructureFunction::new(kappa, dim - 1)?;
    let d = dim as f64;
    let dm = m as i64 - m_prime as i64;
    let sum: Complex64 = (0..dim)
        .map(|n| {
            let rho = -(dm as f64) * n as f64 + d / (2.0 * PI) * (phi - phi_prime) * f.value_f64(n);
            cis(2.0 * PI * rho / d)
        })
        .sum();
    Ok(sum / d)
}

/// ||sum_m |m,phi><m,phi| - I||_max for a complete family of states.
pub fn closure_residual(states: &[PhaseState]) -> f64 {
    let dim = states[0].dim();
    let mut acc: Array2<Complex64> = Array2::zeros((dim, dim));
    for s in states {
        acc += &outer(s.amplitudes(), s.amplitudes());
    }
    max_abs_diff(&acc, &identity(dim))
}

/// Residual of the cutoff closure relation for theta states,
/// (1/2 pi) int d theta |theta,phi><theta,phi| = I, approximated by a
/// uniform grid of `grid_points` angles on [-pi, pi). Discrete orthogonality
/// of e^{i (n - n') theta} makes the grid sum exact (not approximate) as
/// soon as grid_points > n_max.
pub fn theta_closure_residual(
    kappa: KappaParam,
    phi: f64,
    n_max: usize,
    grid_points: usize,
) -> Result<f64> {
    if grid_points == 0 {
        return Err(Error::InvalidParameter("empty theta grid".into()));
    }
    let dim = n_max + 1;
    let mut acc: Array2<Complex64> = Array2::zeros((dim, dim));
    for j in 0..grid_points {
        let theta = -PI + 2.0 * PI * j as f64 / grid_points as f64;
        let state = theta_phase_state(theta, phi, kappa, n_max)?;
        acc += &outer(state.amplitudes(), state.amplitudes());
    }
    acc /= Complex64::new(grid_points as f64, 0.0);
    Ok(max_abs_diff(&acc, &identity(dim)))
}

/// Default grid size for the theta closure check.
pub fn default_theta_grid(n_max: usize) -> usize {
    4 * (n_max + 1)
}

/// The factorial-like weights E(0) = 1, E(n) = F(1) F(2) ... F(n).
///
/// Both linear and log-domain values are kept; the log domain is the one to
/// use beyond s ~ 30, where the linear values can overflow for kappa > 0.
#[derive(Debug, Clone)]
pub struct WeightTable {
    values: Vec<f64>,
    log_values: Vec<f64>,
}

impl WeightTable {
    pub(crate) fn from_energies(energies: &[f64]) -> Result<Self> {
        let mut values = vec![1.0f64];
        let mut log_values = vec![0.0f64];
        for (n, &e) in energies.iter().enumerate().skip(1) {
            if e <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "weight factor e_{n} = {e} is not positive"
                )));
            }
            values.push(values[n - 1] * e);
            log_values.push(log_values[n - 1] + e.ln());
        }
        Ok(Self { values, log_values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// E(n) in the linear domain (may overflow to infinity for large n).
    pub fn value(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// ln E(n), finite for any table size.
    pub fn log_value(&self, n: usize) -> f64 {
        self.log_values[n]
    }

    /// E(n)^{-1/2} evaluated in the log domain.
    pub fn inv_sqrt(&self, n: usize) -> f64 {
        (-0.5 * self.log_values[n]).exp()
    }

    /// The normalization C_0 > 0 with C_0^{-2} = sum_n 1/E(n).
    pub fn c0(&self) -> f64 {
        let inv_sum: f64 = self.log_values.iter().map(|l| (-l).exp()).sum();
        1.0 / inv_sum.sqrt()
    }

    /// True when every E(n) equals E(0) = 1 (the only case where V_s stays
    /// unitary).
    pub fn is_constant(&self) -> bool {
        self.values.iter().all(|&v| (v - 1.0).abs() < 1e-14)
    }
}

/// Weights E(0..s-1) of the truncated algebra.
pub fn build_weights(kappa: KappaParam, s: usize) -> Result<WeightTable> {
    if s == 0 {
        return Err(Error::InvalidParameter("empty weight table".into()));
    }
    let f = StructureFunction::new(kappa, s - 1)?;
    WeightTable::from_energies(&f.values_f64())
}

/// The cyclic pair (U_s, V_s): U_s = (q_s)^N diagonal and unitary,
/// V_s = b- + (b+)^{s-1}/E(s-1) cyclic of order s but not unitary for
/// non-constant weights.
#[derive(Debug, Clone)]
pub struct WeylCandidatePair {
    u: Array2<Complex64>,
    v: Array2<Complex64>,
    s: usize,
    q_s: Complex64,
    nonunitarity: f64,
}

impl WeylCandidatePair {
    pub fn u(&self) -> &Array2<Complex64> {
        &self.u
    }

    pub fn v(&self) -> &Array2<Complex64> {
        &self.v
    }

    pub fn order(&self) -> usize {
        self.s
    }

    pub fn q_s(&self) -> Complex64 {
        self.q_s
    }

    /// ||V^dag V - I||_max: strictly positive iff the weights are
    /// non-constant, witnessing that (U_s, V_s) is not a Weyl pair.
    pub fn nonunitarity_witness(&self) -> f64 {
        self.nonunitarity
    }

    /// ||V^s - I||_max.
    pub fn v_power_residual(&self) -> f64 {
        max_abs_diff(&matrix_power(&self.v, self.s), &identity(self.s))
    }

    /// ||U^s - I||_max.
    pub fn u_power_residual(&self) -> f64 {
        max_abs_diff(&matrix_power(&self.u, self.s), &identity(self.s))
    }

    /// ||V U - q_s U V||_max.
    pub fn s_commutation_residual(&self) -> f64 {
        let vu = self.v.dot(&self.u);
        let uv = self.u.dot(&self.v).mapv(|z| z * self.q_s);
        max_abs_diff(&vu, &uv)
    }
}

/// Build (U_s, V_s) over a truncated (or exact finite) representation of
/// size s >= 2.
pub fn build_vs_us(rep: &Representation) -> Result<WeylCandidatePair> {
    if rep.kind() == RepKind::InfiniteCutoff {
        return Err(Error::Regime(
            "V_s is defined over the truncated algebra, not the open-top cutoff".into(),
        ));
    }
    let s = rep.dim();
    if s < 2 {
        return Err(Error::InvalidParameter(format!(
            "V_s needs order s >= 2, got {s}"
        )));
    }
    let weights = build_weights(rep.kappa(), s)?;
    let q_s = cis(2.0 * PI / s as f64);
    let u = Array2::from_diag(
        &(0..s)
            .map(|n| cis(2.0 * PI * n as f64 / s as f64))
            .collect::<ndarray::Array1<_>>(),
    );
    let reach = matrix_power(rep.a_plus(), s - 1).mapv(|z| z / weights.value(s - 1));
    let v = rep.a_minus() + &reach;
    let vdv = dagger(&v).dot(&v);
    let nonunitarity = max_abs_diff(&vdv, &identity(s));
    Ok(WeylCandidatePair {
        u,
        v,
        s,
        q_s,
        nonunitarity,
    })
}

/// The s weighted eigenstates |mu, phi> of V_s:
///
/// ```text
/// |mu, phi> = C_0 sum_n E(n)^{-1/2} (q_s)^{n mu} e^{-i F(n) phi} |n>,
/// C_0^{-2} = sum_n 1/E(n),
/// ```
///
/// with V_s |mu, phi> = (q_s)^mu |mu, phi>. They are normalized but not
/// orthogonal, and temporally stable like the |m, phi> family.
pub fn vs_phase_states(rep: &Representation, weights: &WeightTable) -> Result<Vec<PhaseState>> {
    let s = rep.dim();
    if weights.len() != s {
        return Err(Error::DimensionMismatch(format!(
            "weight table of length {} vs representation of size {s}",
            weights.len()
        )));
    }
    let spectrum = rep.structure().values_f64();
    let c0 = weights.c0();
    let states = (0..s)
        .map(|mu| {
            let amplitudes = (0..s)
                .map(|n| {
                    let fourier = cis(2.0 * PI * ((n * mu) % s) as f64 / s as f64);
                    c0 * weights.inv_sqrt(n) * fourier * cis(-spectrum[n] * rep.phi())
                })
                .collect();
            PhaseState::new(
                StateLabel::Mu {
                    mu,
                    phi: rep.phi(),
                },
                amplitudes,
                true,
                Some(rep.kappa()),
                spectrum.clone(),
            )
        })
        .collect();
    Ok(states)
}

/// Closed-form overlap of two V_s eigenstates,
/// <mu,phi|mu',phi'> = C_0^2 sum_n E(n)^{-1} (q_s)^{n(mu'-mu)} e^{-i F(n)(phi'-phi)}.
pub fn vs_overlap_formula(
    weights: &WeightTable,
    spectrum: &[f64],
    mu: usize,
    phi: f64,
    mu_prime: usize,
    phi_prime: f64,
) -> Complex64 {
    let s = weights.len();
    let c0 = weights.c0();
    let dmu = mu_prime as i64 - mu as i64;
    let sum: Complex64 = (0..s)
        .map(|n| {
            let k = (n as i64 * dmu).rem_euclid(s as i64);
            (-weights.log_value(n)).exp()
                * cis(2.0 * PI * k as f64 / s as f64)
                * cis(-spectrum[n] * (phi_prime - phi))
        })
        .sum();
    c0 * c0 * sum
}

/// Residual of the weighted closure relation
/// (1/s) sum_mu |mu,phi><mu,phi| = C_0^2 sum_n E(n)^{-1} |n><n|.
pub fn vs_closure_residual(states: &[PhaseState], weights: &WeightTable) -> f64 {
    let s = states.len();
    let dim = states[0].dim();
    let mut acc: Array2<Complex64> = Array2::zeros((dim, dim));
    for st in states {
        acc += &outer(st.amplitudes(), st.amplitudes());
    }
    acc /= Complex64::new(s as f64, 0.0);
    let c0 = weights.c0();
    let expected = Array2::from_diag(
        &(0..dim)
            .map(|n| Complex64::new(c0 * c0 * (-weights.log_value(n)).exp(), 0.0))
            .collect::<ndarray::Array1<_>>(),
    );
    max_abs_diff(&acc, &expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::MATRIX_TOL;

    fn kappa(n: i64, d: i64) -> KappaParam {
        KappaParam::new(n, d).unwrap()
    }

    #[test]
    fn two_level_phase_operator_is_swap() {
        let rep = Representation::finite(kappa(-1, 1), 0.0).unwrap();
        let e = phase_operator(&rep).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(e.matrix()[(0, 1)], one);
        assert_eq!(e.matrix()[(1, 0)], one);
        assert_eq!(e.matrix()[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn finite_phase_operator_unitary_and_cyclic() {
        let rep = Representation::finite(kappa(-1, 3), 0.3).unwrap();
        let e = phase_operator(&rep).unwrap();
        assert!(e.unitarity_residual() < MATRIX_TOL);
        assert!(e.right_unitarity_residual() < MATRIX_TOL);
        assert!(e.power_residual() < MATRIX_TOL);
    }

    #[test]
    fn polar_decomposition_recovers_annihilator() {
        for phi in [0.0, 0.8, -1.9] {
            let rep = Representation::truncated(kappa(1, 1), phi, 3).unwrap();
            let e = phase_operator(&rep).unwrap();
            assert!(e.polar_residual(&rep).unwrap() < MATRIX_TOL);
        }
    }

    #[test]
    fn cutoff_operator_is_plain_shift_for_harmonic_at_zero_phi() {
        let e = phase_operator_infinite_cutoff(KappaParam::zero(), 0.0, 3).unwrap();
        for n in 0..3 {
            assert_eq!(e.matrix()[(n, n + 1)], Complex64::new(1.0, 0.0));
        }
        assert_eq!(e.matrix()[(3, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn cutoff_operator_isometry_defect() {
        let e = phase_operator_infinite_cutoff(kappa(1, 1), 0.5, 6).unwrap();
        assert!(e.left_isometry_defect() < MATRIX_TOL);
        let (off_top, corner) = e.right_isometry_defect();
        assert!(off_top < MATRIX_TOL);
        assert!(corner < MATRIX_TOL); // the lost entry reads 0, not 1
        assert!(phase_operator_infinite_cutoff(kappa(-1, 2), 0.0, 4).is_err());
    }

    #[test]
    fn theta_state_is_cutoff_eigenvector() {
        let k = kappa(1, 2);
        let n_max = 8;
        let e = phase_operator_infinite_cutoff(k, 0.7, n_max).unwrap();
        let theta = 1.1;
        let st = theta_phase_state(theta, 0.7, k, n_max).unwrap();
        let image = e
            .matrix()
            .dot(&ndarray::Array1::from(st.amplitudes().to_vec()));
        let expected = cis(theta);
        for n in 0..n_max {
            assert!((image[n] - expected * st.amplitudes()[n]).norm() < MATRIX_TOL);
        }
    }

    #[test]
    fn two_level_phase_states() {
        let states = phase_states(2, kappa(-1, 1), 0.0).unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        assert!((states[0].amplitudes()[0] - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!((states[0].amplitudes()[1] - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!((states[1].amplitudes()[1] - Complex64::new(-r, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn three_level_states_are_fourier_basis_at_zero_phi() {
        let states = phase_states(3, kappa(-1, 2), 0.0).unwrap();
        let r = 1.0 / 3.0f64.sqrt();
        for (m, st) in states.iter().enumerate() {
            for n in 0..3 {
                let expected = r * cis(2.0 * PI * (m * n) as f64 / 3.0);
                assert!((st.amplitudes()[n] - expected).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn equiprobability_over_grid() {
        for d in 2..=7usize {
            let k = KappaParam::from_dimension(d).unwrap();
            for st in phase_states(d, k, 1.7).unwrap() {
                for a in st.amplitudes() {
                    assert!((a.norm() - 1.0 / (d as f64).sqrt()).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn phase_states_reject_oversized_finite_dim() {
        assert!(phase_states(5, kappa(-1, 3), 0.0).is_err());
        // dim < d is the truncated family and is fine
        assert!(phase_states(3, kappa(-1, 3), 0.0).is_ok());
    }

    #[test]
    fn eigen_relation_of_phase_states() {
        let k = kappa(-1, 3);
        let rep = Representation::finite(k, 0.9).unwrap();
        let e = phase_operator(&rep).unwrap();
        for (m, st) in phase_states(4, k, 0.9).unwrap().iter().enumerate() {
            let image = e
                .matrix()
                .dot(&ndarray::Array1::from(st.amplitudes().to_vec()));
            let eigen = cis(2.0 * PI * m as f64 / 4.0);
            let residual = image
                .iter()
                .zip(st.amplitudes())
                .map(|(i, a)| (i - eigen * a).norm())
                .fold(0.0, f64::max);
            assert!(residual < MATRIX_TOL);
        }
    }

    #[test]
    fn theta_state_at_origin_is_all_ones() {
        let st = theta_phase_state(0.0, 0.0, KappaParam::zero(), 5).unwrap();
        for a in st.amplitudes() {
            assert_eq!(*a, Complex64::new(1.0, 0.0));
        }
        assert!(!st.is_normalized());
        assert!(theta_phase_state(4.0, 0.0, KappaParam::zero(), 5).is_err());
    }

    #[test]
    fn theta_grid_closure_is_exact_beyond_cutoff() {
        let k = kappa(1, 1);
        let n_max = 6;
        let res = theta_closure_residual(k, 0.4, n_max, default_theta_grid(n_max)).unwrap();
        assert!(res < MATRIX_TOL, "closure residual {res}");
        // an undersized grid genuinely fails: aliasing collapses distinct levels
        let res = theta_closure_residual(k, 0.4, n_max, n_max).unwrap();
        assert!(res > 0.5);
    }

    #[test]
    fn m_state_closure() {
        let states = phase_states(5, kappa(-1, 4), 0.6).unwrap();
        assert!(closure_residual(&states) < MATRIX_TOL);
    }

    #[test]
    fn evolve_identity_at_zero_time() {
        let st = &phase_states(4, kappa(-1, 3), 0.2).unwrap()[2];
        assert!(evolve(st, 0.0).max_diff(st) == 0.0);
    }

    #[test]
    fn evolve_matches_rebuild() {
        let k = kappa(-1, 3);
        let states = phase_states(4, k, 0.2).unwrap();
        let rebuilt = phase_states(4, k, 0.2 + 1.1).unwrap();
        for (st, rb) in states.iter().zip(rebuilt.iter()) {
            assert!(evolve(st, 1.1).max_diff(rb) < MATRIX_TOL);
        }
    }

    #[test]
    fn evolve_theta_matches_rebuild() {
        let k = kappa(1, 2);
        let st = theta_phase_state(0.9, 0.1, k, 10).unwrap();
        let rb = theta_phase_state(0.9, 0.1 - 2.1, k, 10).unwrap();
        assert!(evolve(&st, -2.1).max_diff(&rb) < MATRIX_TOL);
    }

    #[test]
    fn orthonormality_within_family() {
        let states = phase_states(4, kappa(-1, 3), 1.3).unwrap();
        for (m, a) in states.iter().enumerate() {
            for (mp, b) in states.iter().enumerate() {
                let ip = overlap(a, b).unwrap();
                let expected = if m == mp { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(expected, 0.0)).norm() < MATRIX_TOL);
            }
        }
    }

    #[test]
    fn rho_sum_matches_direct_inner_product() {
        let k = kappa(-1, 2);
        let a = &phase_states(3, k, 0.0).unwrap()[0];
        let b = &phase_states(3, k, 0.4).unwrap()[1];
        let direct = overlap(a, b).unwrap();
        let formula = phase_overlap_formula(3, k, 0, 0.0, 1, 0.4).unwrap();
        assert!((direct - formula).norm() < MATRIX_TOL);
    }

    #[test]
    fn overlap_rejects_dimension_mismatch() {
        let a = &phase_states(3, kappa(-1, 2), 0.0).unwrap()[0];
        let b = &phase_states(4, kappa(-1, 3), 0.0).unwrap()[0];
        assert!(overlap(a, b).is_err());
    }

    #[test]
    fn weight_tables() {
        let w = build_weights(KappaParam::zero(), 4).unwrap();
        assert_eq!(w.values(), &[1.0, 1.0, 2.0, 6.0]);
        let w = build_weights(kappa(1, 1), 3).unwrap();
        assert_eq!(w.values(), &[1.0, 1.0, 4.0]);
        let w = build_weights(kappa(-1, 3), 3).unwrap();
        assert!((w.value(2) - 4.0 / 3.0).abs() < 1e-15);
        assert!(build_weights(kappa(-1, 3), 6).is_err());
    }

    #[test]
    fn log_domain_consistent_with_linear() {
        let w = build_weights(kappa(1, 1), 12).unwrap();
        for n in 0..w.len() {
            assert!((w.log_value(n) - w.value(n).ln()).abs() < 1e-10);
            assert!((w.inv_sqrt(n) - 1.0 / w.value(n).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn large_table_stays_finite_in_log_domain() {
        let w = build_weights(kappa(1, 1), 60).unwrap();
        assert!(w.log_value(59).is_finite());
        assert!(w.inv_sqrt(59) > 0.0);
        assert!(w.c0() > 0.0);
    }

    #[test]
    fn v2_is_swap_with_real_eigenvectors() {
        let rep = Representation::truncated(KappaParam::zero(), 0.0, 2).unwrap();
        let pair = build_vs_us(&rep).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(pair.v()[(0, 1)], one);
        assert_eq!(pair.v()[(1, 0)], one);
        // eigenvalues (q_2)^mu = +-1 on (1, +-1)/sqrt(2)
        for (mu, sign) in [(0usize, 1.0), (1usize, -1.0)] {
            let v = ndarray::Array1::from(vec![one, Complex64::new(sign, 0.0)]);
            let image = pair.v().dot(&v);
            let eigen = cis(2.0 * PI * mu as f64 / 2.0);
            assert!((image[0] - eigen * v[0]).norm() < 1e-14);
            assert!((image[1] - eigen * v[1]).norm() < 1e-14);
        }
    }

    #[test]
    fn vs_family_cyclic_identities() {
        let rep = Representation::truncated(kappa(1, 1), 0.6, 3).unwrap();
        let pair = build_vs_us(&rep).unwrap();
        assert!(pair.v_power_residual() < MATRIX_TOL);
        assert!(pair.u_power_residual() < MATRIX_TOL);
        assert!(pair.s_commutation_residual() < MATRIX_TOL);
        assert!(pair.nonunitarity_witness() > 0.1);
    }

    #[test]
    fn s_commutation_for_harmonic() {
        let rep = Representation::truncated(KappaParam::zero(), 0.0, 3).unwrap();
        let pair = build_vs_us(&rep).unwrap();
        assert!(pair.s_commutation_residual() < MATRIX_TOL);
        assert!(pair.nonunitarity_witness() > 0.1);
    }

    #[test]
    fn constant_weights_keep_vs_unitary() {
        // kappa = -1/2, s = 3 = d: F = [0, 1, 1], all weights 1
        let rep = Representation::truncated(kappa(-1, 2), 0.8, 3).unwrap();
        let pair = build_vs_us(&rep).unwrap();
        assert!(build_weights(kappa(-1, 2), 3).unwrap().is_constant());
        assert!(pair.nonunitarity_witness() < MATRIX_TOL);
    }

    #[test]
    fn vs_states_two_level() {
        let rep = Representation::truncated(KappaParam::zero(), 0.0, 2).unwrap();
        let weights = build_weights(KappaParam::zero(), 2).unwrap();
        let states = vs_phase_states(&rep, &weights).unwrap();
        let r = 1.0 / 2.0f64.sqrt();
        assert!((weights.c0() - r).abs() < 1e-15);
        assert!((states[0].amplitudes()[1] - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!((states[1].amplitudes()[1] - Complex64::new(-r, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn vs_states_are_vs_eigenvectors() {
        let rep = Representation::truncated(kappa(1, 1), 0.4, 4).unwrap();
        let weights = build_weights(kappa(1, 1), 4).unwrap();
        let pair = build_vs_us(&rep).unwrap();
        for (mu, st) in vs_phase_states(&rep, &weights).unwrap().iter().enumerate() {
            let image = pair
                .v()
                .dot(&ndarray::Array1::from(st.amplitudes().to_vec()));
            let eigen = cis(2.0 * PI * mu as f64 / 4.0);
            let residual = image
                .iter()
                .zip(st.amplitudes())
                .map(|(i, a)| (i - eigen * a).norm())
                .fold(0.0, f64::max);
            assert!(residual < MATRIX_TOL, "mu = {mu}: {residual}");
            assert!((st.norm() - 1.0).abs() < MATRIX_TOL);
        }
    }

    #[test]
    fn vs_overlap_formula_matches_direct() {
        let k = kappa(1, 1);
        let rep_a = Representation::truncated(k, 0.3, 3).unwrap();
        let rep_b = Representation::truncated(k, -0.9, 3).unwrap();
        let weights = build_weights(k, 3).unwrap();
        let a = vs_phase_states(&rep_a, &weights).unwrap();
        let b = vs_phase_states(&rep_b, &weights).unwrap();
        let spectrum = rep_a.structure().values_f64();
        for mu in 0..3 {
            for mup in 0..3 {
                let direct = overlap(&a[mu], &b[mup]).unwrap();
                let formula = vs_overlap_formula(&weights, &spectrum, mu, 0.3, mup, -0.9);
                assert!((direct - formula).norm() < MATRIX_TOL);
            }
        }
    }

    #[test]
    fn vs_states_not_orthogonal_for_nonconstant_weights() {
        let k = kappa(1, 1);
        let rep = Representation::truncated(k, 0.0, 3).unwrap();
        let weights = build_weights(k, 3).unwrap();
        let states = vs_phase_states(&rep, &weights).unwrap();
        let ip = overlap(&states[0], &states[1]).unwrap();
        assert!(
            ip.norm() > 0.01,
            "expected nonzero overlap, got {}",
            ip.norm()
        );
    }

    #[test]
    fn vs_weighted_closure() {
        let k = kappa(1, 2);
        let rep = Representation::truncated(k, 0.7, 5).unwrap();
        let weights = build_weights(k, 5).unwrap();
        let states = vs_phase_states(&rep, &weights).unwrap();
        assert!(vs_closure_residual(&states, &weights) < MATRIX_TOL);
    }

    #[test]
    fn evolve_mu_state_matches_rebuild() {
        let k = kappa(1, 1);
        let weights = build_weights(k, 3).unwrap();
        let before =
            vs_phase_states(&Representation::truncated(k, 0.0, 3).unwrap(), &weights).unwrap();
        let after =
            vs_phase_states(&Representation::truncated(k, 0.7, 3).unwrap(), &weights).unwrap();
        for (st, rb) in before.iter().zip(after.iter()) {
            assert!(evolve(st, 0.7).max_diff(rb) < MATRIX_TOL);
        }
    }

    #[test]
    fn operator_rejection_paths() {
        let rep = Representation::infinite_cutoff(KappaParam::zero(), 0.0, 5).unwrap();
        assert!(phase_operator(&rep).is_err());
        assert!(build_vs_us(&rep).is_err());
        let tiny = Representation::truncated(KappaParam::zero(), 0.0, 1).unwrap();
        assert!(build_vs_us(&tiny).is_err());
        let e = phase_operator(&tiny).unwrap();
        assert!(e.unitarity_residual() < MATRIX_TOL);
        assert!(e.power_residual() < MATRIX_TOL);
    }

    #[test]
    fn state_json_shape() {
        let st = &phase_states(2, kappa(-1, 1), 0.5).unwrap()[1];
        let v = st.to_json();
        assert_eq!(v["label"]["type"], "m");
        assert_eq!(v["label"]["m"], 1);
        assert_eq!(v["dim"], 2);
        assert_eq!(v["kappa"]["num"], -1);
        assert_eq!(v["amplitudes"].as_array().unwrap().len(), 2);
    }
}
