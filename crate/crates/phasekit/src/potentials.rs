//! Spectral maps of three exactly solvable systems onto the oscillator
//! algebra.
//!
//! Each system is characterized by a linear level gap e_{n+1} - e_n = a n + b
//! with e_0 = 0, hence the spectrum e_n = a n(n-1)/2 + b n. Rescaling the
//! ladders by sqrt(b) identifies the system's algebra with the generalized
//! oscillator at kappa = a/(2b), so e_n = b F(n). The three realizations:
//!
//! - harmonic oscillator: a = 0, b = 1 (kappa = 0, infinite spectrum);
//! - Poschl-Teller well with strengths u, v > 1: a = 1, 2b = u + v + 1
//!   (kappa = 1/(u+v+1), infinite spectrum);
//! - Morse oscillator with depth parameter l >= 1: a = -1, 2b = 2l - 1
//!   (kappa = -1/(2l-1), levels n = 0..l, truncation order s = l + 1).
//!
//! Only spectra and matrix elements are represented here; wavefunctions,
//! superpotentials, and x-space potentials stay outside the scope of this
//! crate.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::kappa::{Dimension, KappaParam};
use crate::linalg::cis;
use crate::phase::{PhaseState, StateLabel, WeightTable};

/// Default numerical cutoff for the infinite-spectrum systems.
pub const DEFAULT_CUTOFF: usize = 32;

/// One of the three solvable systems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialSpec {
    HarmonicOscillator,
    PoschlTeller { u: f64, v: f64 },
    Morse { l: u32 },
}

impl PotentialSpec {
    /// Poschl-Teller well; both strengths must exceed 1.
    pub fn poschl_teller(u: f64, v: f64) -> Result<Self> {
        if !(u > 1.0 && v > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Poschl-Teller needs u > 1 and v > 1, got u = {u}, v = {v}"
            )));
        }
        Ok(Self::PoschlTeller { u, v })
    }

    /// Morse oscillator; l must be a positive integer.
    pub fn morse(l: u32) -> Result<Self> {
        if l == 0 {
            return Err(Error::InvalidParameter("Morse needs l >= 1".into()));
        }
        Ok(Self::Morse { l })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            PotentialSpec::HarmonicOscillator => Ok(()),
            PotentialSpec::PoschlTeller { u, v } => Self::poschl_teller(u, v).map(|_| ()),
            PotentialSpec::Morse { l } => Self::morse(l).map(|_| ()),
        }
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSpec::HarmonicOscillator => write!(f, "ho"),
            PotentialSpec::PoschlTeller { u, v } => write!(f, "pt:u={u},v={v}"),
            PotentialSpec::Morse { l } => write!(f, "morse:l={l}"),
        }
    }
}

impl FromStr for PotentialSpec {
    type Err = Error;

    /// Compact text form: `"ho"`, `"pt:u=2,v=3"`, `"morse:l=4"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("ho") {
            return Ok(Self::HarmonicOscillator);
        }
        let (head, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unrecognized potential spec {s:?}")))?;
        let mut fields = std::collections::BTreeMap::new();
        for part in args.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
            fields.insert(key.trim().to_string(), value.trim().to_string());
        }
        let get = |key: &str| {
            fields
                .get(key)
                .ok_or_else(|| Error::Parse(format!("missing {key}= in {s:?}")))
        };
        match head.trim().to_ascii_lowercase().as_str() {
            "pt" => {
                let u: f64 = get("u")?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad u in {s:?}")))?;
                let v: f64 = get("v")?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad v in {s:?}")))?;
                Self::poschl_teller(u, v)
            }
            "morse" => {
                let l: u32 = get("l")?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad l in {s:?}")))?;
                Self::morse(l)
            }
            other => Err(Error::Parse(format!("unknown potential {other:?}"))),
        }
    }
}

/// Linear-gap spectrum parameters: e_{n+1} - e_n = a n + b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumParams {
    pub a: f64,
    pub b: f64,
    /// kappa = a/(2b) as an exact rational, available when a and 2b are
    /// integers (always for the harmonic oscillator and Morse; for
    /// Poschl-Teller exactly when u + v is an integer).
    pub kappa_exact: Option<KappaParam>,
    /// Number of admitted levels.
    pub n_range: Dimension,
    /// The source system, when the parameters came from one.
    pub variant: Option<PotentialSpec>,
}

fn near_integer(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() < 1e-9).then_some(r as i64)
}

impl SpectrumParams {
    /// Build directly from gap parameters (a, b). The truncation rule for
    /// a < 0 requires -2b/a to be a positive integer; other negative-slope
    /// combinations admit no consistent level count and are rejected.
    pub fn from_linear_gap(a: f64, b: f64) -> Result<Self> {
        if b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "need b > 0 for a positive first gap, got b = {b}"
            )));
        }
        let kappa_exact = match (near_integer(a), near_integer(2.0 * b)) {
            (Some(na), Some(nb)) if nb != 0 => KappaParam::new(na, nb).ok(),
            _ => None,
        };
        let n_range = if a < 0.0 {
            Dimension::Finite(negative_slope_truncation(a, b)?)
        } else {
            Dimension::Infinite
        };
        Ok(Self {
            a,
            b,
            kappa_exact,
            n_range,
            variant: None,
        })
    }

    /// kappa = a/(2b) in floating point.
    pub fn kappa_f64(&self) -> f64 {
        self.a / (2.0 * self.b)
    }

    /// e_n = a n(n-1)/2 + b n without any range check.
    pub fn energy_unchecked(&self, n: usize) -> f64 {
        let n = n as f64;
        0.5 * self.a * n * (n - 1.0) + self.b * n
    }

    /// e_n within the admitted range.
    pub fn energy(&self, n: usize) -> Result<f64> {
        if let Dimension::Finite(s) = self.n_range {
            if n >= s {
                return Err(Error::InvalidParameter(format!(
                    "level n = {n} outside the admitted range 0..{s}"
                )));
            }
        }
        Ok(self.energy_unchecked(n))
    }

    /// The first `count` energies e_0..e_{count-1}.
    pub fn energies(&self, count: usize) -> Result<Vec<f64>> {
        if count == 0 {
            return Err(Error::InvalidParameter("empty energy list".into()));
        }
        self.energy(count - 1)?;
        Ok((0..count).map(|n| self.energy_unchecked(n)).collect())
    }

    /// Max residual of the link e_n = b F(n; kappa) over n = 0..=n_max.
    pub fn spectrum_link_residual(&self, n_max: usize) -> f64 {
        let kappa = self
            .kappa_exact
            .map(|k| k.as_f64())
            .unwrap_or_else(|| self.kappa_f64());
        (0..=n_max)
            .map(|n| {
                let f = n as f64 * (1.0 + kappa * (n as f64 - 1.0));
                (self.energy_unchecked(n) - self.b * f).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// s for a < 0: the level count below the turning point of the quadratic
/// spectrum, fixed by the parity of -2b/a (odd: s = -b/a + 3/2, even:
/// s = -b/a + 1).
fn negative_slope_truncation(a: f64, b: f64) -> Result<usize> {
    let t = near_integer(-2.0 * b / a).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "a = {a} < 0 with -2b/a = {} not an integer: no truncation rule applies",
            -2.0 * b / a
        ))
    })?;
    if t <= 0 {
        return Err(Error::InvalidParameter(format!(
            "-2b/a = {t} must be positive"
        )));
    }
    let s = if t % 2 != 0 {
        // -b/a + 3/2 with -2b/a = t odd
        (t + 3) / 2
    } else {
        t / 2 + 1
    };
    Ok(s as usize)
}

/// Map a solvable system onto its (a, b) gap parameters, exact kappa, and
/// admitted level range.
pub fn to_spectrum_params(spec: &PotentialSpec) -> Result<SpectrumParams> {
    spec.validate()?;
    let mut params = match *spec {
        PotentialSpec::HarmonicOscillator => SpectrumParams::from_linear_gap(0.0, 1.0)?,
        PotentialSpec::PoschlTeller { u, v } => {
            SpectrumParams::from_linear_gap(1.0, (u + v + 1.0) / 2.0)?
        }
        PotentialSpec::Morse { l } => {
            SpectrumParams::from_linear_gap(-1.0, l as f64 - 0.5)?
        }
    };
    params.variant = Some(*spec);
    Ok(params)
}

/// Truncation order of the spectrum: the parity formula for a < 0 (Morse:
/// s = l + 1), infinite otherwise (pick a cutoff; `DEFAULT_CUTOFF` works
/// for phase-state experiments).
pub fn truncation_order(params: &SpectrumParams) -> Dimension {
    params.n_range
}

/// e_n for a potential, range-checked.
pub fn energy(params: &SpectrumParams, n: usize) -> Result<f64> {
    params.energy(n)
}

/// Outcome of cross-checking the weight products against their closed
/// Gamma-function forms.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct GammaCheck {
    pub max_rel_err: f64,
}

fn ln_gamma_weight(spec: &PotentialSpec, n: usize) -> f64 {
    let nf = n as f64;
    match *spec {
        PotentialSpec::HarmonicOscillator => ln_gamma(nf + 1.0),
        PotentialSpec::PoschlTeller { u, v } => {
            ln_gamma(nf + 1.0) + ln_gamma(nf + u + v + 1.0)
                - nf * 2.0f64.ln()
                - ln_gamma(u + v + 1.0)
        }
        PotentialSpec::Morse { l } => {
            let l = l as f64;
            ln_gamma(nf + 1.0) + ln_gamma(2.0 * l) - nf * 2.0f64.ln() - ln_gamma(2.0 * l - nf)
        }
    }
}

/// Weights E(n) = e_1 e_2 ... e_n built from the physical energies, plus an
/// independent evaluation of their closed Gamma-function forms.
///
/// Relative to the algebraic weights F(1)...F(n) these carry a factor b^n
/// (each e_j = b F(j)); the Gamma forms only close for the physical choice,
/// which is what the discrete phase states of a potential use.
pub fn weight_table(spec: &PotentialSpec, n_max: usize) -> Result<(WeightTable, GammaCheck)> {
    let params = to_spectrum_params(spec)?;
    let energies = params.energies(n_max + 1)?;
    let weights = WeightTable::from_energies(&energies)?;
    let max_rel_err = (0..=n_max)
        .map(|n| ((weights.log_value(n) - ln_gamma_weight(spec, n)).exp() - 1.0).abs())
        .fold(0.0, f64::max);
    Ok((weights, GammaCheck { max_rel_err }))
}

/// The two temporally stable state families of a physical system.
#[derive(Debug, Clone)]
pub struct PhysicalStates {
    /// Fourier-type phase states s^{-1/2} e^{-i e_n phi} (q_s)^{nm} |n>.
    pub fourier: Vec<PhaseState>,
    /// Weighted discrete states C_0 E(n)^{-1/2} e^{-i e_n phi} (q_s)^{n mu} |n>.
    pub discrete: Vec<PhaseState>,
}

/// Build both phase-state families over the first s levels of a system.
/// Both evolve by the physical energies: e^{-i H t} shifts phi to phi + t.
pub fn physical_phase_states(
    spec: &PotentialSpec,
    s: usize,
    phi: f64,
) -> Result<PhysicalStates> {
    let params = to_spectrum_params(spec)?;
    if let Dimension::Finite(bound) = params.n_range {
        if s > bound {
            return Err(Error::InvalidParameter(format!(
                "s = {s} exceeds the admitted {bound} levels of {spec}"
            )));
        }
    }
    if s == 0 {
        return Err(Error::InvalidParameter("empty state family".into()));
    }
    let energies = params.energies(s)?;
    let weights = WeightTable::from_energies(&energies)?;
    let kappa = params.kappa_exact;
    let scale = 1.0 / (s as f64).sqrt();
    let c0 = weights.c0();

    let fourier = (0..s)
        .map(|m| {
            let amplitudes = (0..s)
                .map(|n| {
                    scale
                        * cis(-energies[n] * phi)
                        * cis(2.0 * PI * ((n * m) % s) as f64 / s as f64)
                })
                .collect();
            PhaseState::new(
                StateLabel::M { m, phi },
                amplitudes,
                true,
                kappa,
                energies.clone(),
            )
        })
        .collect();

    let discrete = (0..s)
        .map(|mu| {
            let amplitudes = (0..s)
                .map(|n| {
                    Complex64::from(c0 * weights.inv_sqrt(n))
                        * cis(-energies[n] * phi)
                        * cis(2.0 * PI * ((n * mu) % s) as f64 / s as f64)
                })
                .collect();
            PhaseState::new(
                StateLabel::Mu { mu, phi },
                amplitudes,
                true,
                kappa,
                energies.clone(),
            )
        })
        .collect();

    Ok(PhysicalStates { fourier, discrete })
}

/// The physical-phase quantization that hands Fourier states over to the
/// truncated basis route: phi = 2 pi p / (s kappa b) = 4 pi p / (s a).
/// Undefined at a = 0 (the harmonic oscillator), where the quantization
/// formula divides by kappa.
pub fn quantize_phi_physical(params: &SpectrumParams, s: usize, p: usize) -> Result<f64> {
    if params.a == 0.0 {
        return Err(Error::InvalidKappa(
            "kappa = 0: the basis quantization formula divides by kappa".into(),
        ));
    }
    Ok(4.0 * PI * p as f64 / (s as f64 * params.a))
}

/// JSON report for a system: parameters, spectrum, weights, and the
/// Gamma-form cross-check over the first s levels.
pub fn potential_report(spec: &PotentialSpec, s_override: Option<usize>) -> Result<serde_json::Value> {
    let params = to_spectrum_params(spec)?;
    let s = match (s_override, params.n_range) {
        (Some(s), _) => s,
        (None, Dimension::Finite(s)) => s,
        (None, Dimension::Infinite) => DEFAULT_CUTOFF,
    };
    if s == 0 {
        return Err(Error::InvalidParameter("empty report".into()));
    }
    let energies = params.energies(s)?;
    let (weights, gamma_check) = weight_table(spec, s - 1)?;
    let kappa = match params.kappa_exact {
        Some(k) => serde_json::json!({"num": k.numerator(), "den": k.denominator()}),
        None => serde_json::Value::Null,
    };
    Ok(serde_json::json!({
        "variant": spec.to_string(),
        "a": params.a,
        "b": params.b,
        "kappa": kappa,
        "s": s,
        "energies": energies,
        "weights": weights.values(),
        "gamma_check": gamma_check,
    }))
}
