//! Mutually unbiased bases from quantized phase states, verified through
//! generalized quadratic Gauss sums.
//!
//! Quantizing the phase parameter of the finite-regime states at
//! phi = -pi (d-1) p / d turns the d eigenstate families into bases
//!
//! ```text
//! |m, p> = d^{-1/2} sum_n q^{n(d-n)p/2 + nm} |n>,   q = e^{2 pi i / d},
//! ```
//!
//! quadratic discrete Fourier transforms of the number basis. Cross-basis
//! overlaps reduce to S(u, v, w) = sum_k e^{i pi (u k^2 + v k)/w}; for prime
//! d every modulus is 1/sqrt(d), so the d bases plus the computational one
//! form a complete set of d+1 mutually unbiased bases.
//!
//! The truncated algebra gives a second route with integer exponents
//! (q_s)^{n(delta-n)p + nm}, delta = 1 - 1/kappa, quantized at
//! phi = 2 pi p / (s kappa). Its Gauss-sum parameter u = 2(p - p') is even,
//! which costs the route its unbiasedness at s = 2 (see
//! [`MubSet::complete`], which is always computed from the actual overlaps,
//! never assumed from primality).
//!
//! Gauss sums are evaluated by direct summation over roots of unity; at
//! desk dimensions this is instant and unconditionally correct, so it
//! doubles as the oracle for every overlap identity.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::{Representation, StructureFunction};
use crate::error::{Error, Result};
use crate::kappa::KappaParam;
use crate::linalg::{cis, identity, matrix_power, max_abs_diff};
use crate::phase::{overlap, phase_operator, PhaseState, StateLabel};
use crate::tol::COMPOSITE_TOL;

/// Deterministic trial-division primality test (intended range: dim <= 10^6).
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut k = 3usize;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

/// Quantized phase parameter of the finite route: phi = -pi (d-1) p / d.
pub fn quantize_phi_finite(d: usize, p: usize) -> f64 {
    -PI * ((d - 1) * p) as f64 / d as f64
}

/// Quantized phase parameter of the truncated route: phi = 2 pi p / (s kappa),
/// defined for kappa != 0 with 1/kappa an integer.
pub fn quantize_phi_truncated(kappa: KappaParam, s: usize, p: usize) -> Result<f64> {
    if !kappa.reciprocal_is_integer() {
        return Err(Error::InvalidKappa(format!(
            "truncated-route quantization needs 1/kappa to be a nonzero integer, kappa = {kappa}"
        )));
    }
    Ok(2.0 * PI * p as f64 / (s as f64 * kappa.as_f64()))
}

/// e^{2 pi i x / (2 dim)} for an integer x, reduced mod 2 dim before any
/// float conversion so large labels cost no precision.
fn q_half_power(dim: usize, doubled_exponent: i128) -> Complex64 {
    let modulus = 2 * dim as i128;
    let r = doubled_exponent.rem_euclid(modulus) as f64;
    cis(PI * r / dim as f64)
}

/// The finite-route basis state |m, p> with amplitudes
/// d^{-1/2} q^{n(d-n)p/2 + nm}. The exponent is genuinely half-integral for
/// even d, so powers of q are taken as q^x = e^{2 pi i x / d} with rational x.
pub fn mub_state_finite(d: usize, p: usize, m: usize) -> Result<PhaseState> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 2, got {d}")));
    }
    if p >= d || m >= d {
        return Err(Error::InvalidParameter(format!(
            "labels p = {p}, m = {m} must lie in 0..{d}"
        )));
    }
    let kappa = KappaParam::from_dimension(d)?;
    let spectrum = StructureFunction::new(kappa, d - 1)?.values_f64();
    let scale = 1.0 / (d as f64).sqrt();
    let amplitudes = (0..d)
        .map(|n| {
            let (n_i, d_i, p_i, m_i) = (n as i128, d as i128, p as i128, m as i128);
            // doubled exponent: n(d-n)p + 2nm over q^{1/2}
            let doubled = n_i * (d_i - n_i) * p_i + 2 * n_i * m_i;
            scale * q_half_power(d, doubled)
        })
        .collect();
    Ok(PhaseState::new(
        StateLabel::M {
            m,
            phi: quantize_phi_finite(d, p),
        },
        amplitudes,
        true,
        Some(kappa),
        spectrum,
    ))
}

/// The relabeled form of the finite-route state, obtained by reversing the
/// number basis (k = d - n - 1): amplitudes
/// d^{-1/2} q^{(k+1)(d-k-1)p/2 - (k+1)m}. As a coordinate vector it is the
/// basis-reversal of [`mub_state_finite`].
pub fn mub_state_finite_relabeled(d: usize, p: usize, m: usize) -> Result<PhaseState> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 2, got {d}")));
    }
    if p >= d || m >= d {
        return Err(Error::InvalidParameter(format!(
            "labels p = {p}, m = {m} must lie in 0..{d}"
        )));
    }
    let kappa = KappaParam::from_dimension(d)?;
    let spectrum = StructureFunction::new(kappa, d - 1)?.values_f64();
    let scale = 1.0 / (d as f64).sqrt();
    let amplitudes = (0..d)
        .map(|k| {
            let (k_i, d_i, p_i, m_i) = (k as i128, d as i128, p as i128, m as i128);
            let doubled = (k_i + 1) * (d_i - k_i - 1) * p_i - 2 * (k_i + 1) * m_i;
            scale * q_half_power(d, doubled)
        })
        .collect();
    Ok(PhaseState::new(
        StateLabel::M {
            m,
            phi: quantize_phi_finite(d, p),
        },
        amplitudes,
        true,
        Some(kappa),
        spectrum,
    ))
}

/// The truncated-route basis state |m, p> with integer exponents,
/// s^{-1/2} (q_s)^{n(delta - n)p + nm}, delta = 1 - 1/kappa.
pub fn mub_state_truncated(kappa: KappaParam, s: usize, p: usize, m: usize) -> Result<PhaseState> {
    let delta = kappa.delta().ok_or_else(|| {
        Error::InvalidKappa(format!(
            "truncated route needs 1/kappa to be a nonzero integer, kappa = {kappa}"
        ))
    })?;
    if s < 2 {
        return Err(Error::InvalidParameter(format!("need s >= 2, got {s}")));
    }
    if p >= s || m >= s {
        return Err(Error::InvalidParameter(format!(
            "labels p = {p}, m = {m} must lie in 0..{s}"
        )));
    }
    let spectrum = StructureFunction::new(kappa, s - 1)?.values_f64();
    let scale = 1.0 / (s as f64).sqrt();
    let amplitudes = (0..s)
        .map(|n| {
            let (n_i, s_i, p_i, m_i, delta_i) = (
                n as i128,
                s as i128,
                p as i128,
                m as i128,
                delta as i128,
            );
            let exponent = (n_i * (delta_i - n_i) * p_i + n_i * m_i).rem_euclid(s_i);
            scale * cis(2.0 * PI * exponent as f64 / s as f64)
        })
        .collect();
    Ok(PhaseState::new(
        StateLabel::M {
            m,
            phi: quantize_phi_truncated(kappa, s, p)?,
        },
        amplitudes,
        true,
        Some(kappa),
        spectrum,
    ))
}

/// Parameters of the generalized quadratic Gauss sum
/// S(u, v, w) = sum_{k=0}^{|w|-1} e^{i pi (u k^2 + v k)/w}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GaussSumParams {
    pub u: i64,
    pub v: i64,
    pub w: i64,
}

impl GaussSumParams {
    pub fn new(u: i64, v: i64, w: i64) -> Result<Self> {
        if w == 0 {
            return Err(Error::InvalidParameter("Gauss sum needs w != 0".into()));
        }
        Ok(Self { u, v, w })
    }

    /// The nonvanishing precondition: uw + v even. Reported, not enforced;
    /// odd parity simply makes the sum vanish.
    pub fn parity_even(&self) -> bool {
        (self.u * self.w + self.v) % 2 == 0
    }
}

/// Evaluate S(u, v, w) by direct summation over |w| roots of unity. The
/// quadratic exponent is reduced mod 2w in integer arithmetic, so each term
/// is a unit-circle point evaluated at a small angle.
pub fn gauss_sum(params: GaussSumParams) -> Complex64 {
    let GaussSumParams { u, v, w } = params;
    let modulus = 2 * (w as i128).abs();
    (0..w.unsigned_abs())
        .map(|k| {
            let k = k as i128;
            let t = (u as i128 * k * k + v as i128 * k).rem_euclid(modulus);
            cis(PI * t as f64 / w as f64)
        })
        .sum()
}

/// Finite-route overlap via the Gauss sum:
/// <m,p|m',p'> = (1/d) S(p-p', -(p-p')d + 2(m'-m), d).
pub fn overlap_via_gauss_finite(
    d: usize,
    p: usize,
    m: usize,
    p_prime: usize,
    m_prime: usize,
) -> Result<Complex64> {
    let (d_i, p_i, m_i, pp, mp) = (
        d as i64,
        p as i64,
        m as i64,
        p_prime as i64,
        m_prime as i64,
    );
    let params = GaussSumParams::new(p_i - pp, -(p_i - pp) * d_i + 2 * (mp - m_i), d_i)?;
    Ok(gauss_sum(params) / d as f64)
}

/// Truncated-route overlap via the Gauss sum:
/// <m,p|m',p'> = (1/s) S(2(p-p'), 2 delta (p'-p) + 2(m'-m), s).
pub fn overlap_via_gauss_truncated(
    kappa: KappaParam,
    s: usize,
    p: usize,
    m: usize,
    p_prime: usize,
    m_prime: usize,
) -> Result<Complex64> {
    let delta = kappa.delta().ok_or_else(|| {
        Error::InvalidKappa(format!(
            "truncated route needs 1/kappa to be a nonzero integer, kappa = {kappa}"
        ))
    })?;
    let (s_i, p_i, m_i, pp, mp) = (
        s as i64,
        p as i64,
        m as i64,
        p_prime as i64,
        m_prime as i64,
    );
    let params = GaussSumParams::new(
        2 * (p_i - pp),
        2 * delta * (pp - p_i) + 2 * (mp - m_i),
        s_i,
    )?;
    Ok(gauss_sum(params) / s as f64)
}

/// How a family of bases was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MubRoute {
    /// Quantized finite-regime states over d levels (kappa = -1/(d-1)).
    Finite { d: usize },
    /// Quantized truncated-algebra states over s levels.
    Truncated { kappa: KappaParam, s: usize },
}

/// One orthonormal basis B_p. The computational basis is carried with
/// p = dim, matching its conventional position after B_0..B_{dim-1}.
#[derive(Debug, Clone)]
pub struct MubBasis {
    pub p: usize,
    pub dim: usize,
    pub vectors: Vec<PhaseState>,
}

impl MubBasis {
    /// Max deviation from orthonormality within the basis.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                let ip = overlap(a, b).expect("same dimension within a basis");
                worst = worst.max((ip - Complex64::new(expected, 0.0)).norm());
            }
        }
        worst
    }
}

/// Extremal cross-overlap moduli for one pair of bases.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairOverlap {
    pub p: usize,
    pub p_prime: usize,
    pub min: f64,
    pub max: f64,
}

impl PairOverlap {
    /// Worst deviation of the pair's overlap moduli from 1/sqrt(dim).
    pub fn unbiasedness_deviation(&self, dim: usize) -> f64 {
        let target = 1.0 / (dim as f64).sqrt();
        (self.min - target).abs().max((self.max - target).abs())
    }
}

/// An ordered family of bases over one dimension, with its pairwise
/// overlap report.
#[derive(Debug, Clone)]
pub struct MubSet {
    pub dim: usize,
    pub route: MubRoute,
    /// Whether dim is prime (trial division).
    pub prime: bool,
    /// True iff dim is prime AND every cross-basis overlap modulus was
    /// verified to lie within 1e-10 of 1/sqrt(dim). Never assumed.
    pub complete: bool,
    /// B_0..B_{dim-1} followed by the computational basis (p = dim).
    pub bases: Vec<MubBasis>,
    pub overlap_report: Vec<PairOverlap>,
}

impl MubSet {
    /// Number of bases in the family (dim + 1 including the computational).
    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// The basis pair deviating most from unbiasedness.
    pub fn worst_pair(&self) -> PairOverlap {
        *self
            .overlap_report
            .iter()
            .max_by(|a, b| {
                a.unbiasedness_deviation(self.dim)
                    .total_cmp(&b.unbiasedness_deviation(self.dim))
            })
            .expect("at least one pair")
    }

    /// Max deviation of any cross-basis overlap modulus from 1/sqrt(dim).
    pub fn max_unbiasedness_deviation(&self) -> f64 {
        self.worst_pair().unbiasedness_deviation(self.dim)
    }

    /// JSON wire format.
    pub fn to_json(&self) -> serde_json::Value {
        let route = match self.route {
            MubRoute::Finite { d } => serde_json::json!({"type": "finite", "d": d}),
            MubRoute::Truncated { kappa, s } => serde_json::json!({
                "type": "truncated",
                "kappa": {"num": kappa.numerator(), "den": kappa.denominator()},
                "s": s,
            }),
        };
        serde_json::json!({
            "dim": self.dim,
            "route": route,
            "prime": self.prime,
            "complete": self.complete,
            "bases": self.bases.iter().map(|b| serde_json::json!({
                "p": b.p,
                "vectors": b.vectors.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "overlap_report": self.overlap_report,
        })
    }

    /// CSV export of the overlap matrix: one row per basis pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,p_prime,min,max\n");
        for pair in &self.overlap_report {
            out.push_str(&format!(
                "{},{},{},{}\n",
                pair.p, pair.p_prime, pair.min, pair.max
            ));
        }
        out
    }
}

/// Generate the dim quantized bases plus the computational basis and fill
/// the overlap report. Prime dimensions are flagged; completeness is
/// decided by the verified overlaps, so composite dimensions (and the
/// degenerate truncated route at s = 2) come back with `complete = false`
/// and a violating pair visible in the report.
pub fn build_mub_set(route: MubRoute) -> Result<MubSet> {
    let (dim, kappa) = match route {
        MubRoute::Finite { d } => (d, KappaParam::from_dimension(d)?),
        MubRoute::Truncated { kappa, s } => (s, kappa),
    };
    if dim < 2 {
        return Err(Error::InvalidParameter(format!(
            "need dimension >= 2, got {dim}"
        )));
    }
    let spectrum = StructureFunction::new(kappa, dim - 1)?.values_f64();
    let mut bases = Vec::with_capacity(dim + 1);
    for p in 0..dim {
        let vectors = (0..dim)
            .map(|m| match route {
                MubRoute::Finite { d } => mub_state_finite(d, p, m),
                MubRoute::Truncated { kappa, s } => mub_state_truncated(kappa, s, p, m),
            })
            .collect::<Result<Vec<_>>>()?;
        bases.push(MubBasis { p, dim, vectors });
    }
    bases.push(MubBasis {
        p: dim,
        dim,
        vectors: (0..dim)
            .map(|n| PhaseState::computational(n, dim, spectrum.clone()))
            .collect(),
    });

    let mut overlap_report = Vec::new();
    for i in 0..bases.len() {
        for j in (i + 1)..bases.len() {
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for a in &bases[i].vectors {
                for b in &bases[j].vectors {
                    let modulus = overlap(a, b)?.norm();
                    lo = lo.min(modulus);
                    hi = hi.max(modulus);
                }
            }
            overlap_report.push(PairOverlap {
                p: bases[i].p,
                p_prime: bases[j].p,
                min: lo,
                max: hi,
            });
        }
    }

    let prime = is_prime(dim);
    let unbiased = overlap_report
        .iter()
        .all(|pair| pair.unbiasedness_deviation(dim) < COMPOSITE_TOL);
    Ok(MubSet {
        dim,
        route,
        prime,
        complete: prime && unbiased,
        bases,
        overlap_report,
    })
}

/// Residuals of the phase-operator decomposition E_d = U_phi V at the
/// quantized phi = -pi (d-1) p / d.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PseudoCommutationReport {
    /// ||E_d - U_phi V||_max.
    pub decomposition: f64,
    /// ||V U_phi - q^p U_phi V||_max.
    pub pseudo_commutation: f64,
    /// ||V^d - I||_max.
    pub v_power: f64,
    /// ||(U_phi)^d - e^{i pi (d-1) p} I||_max.
    pub u_power: f64,
}

impl PseudoCommutationReport {
    pub fn max_residual(&self) -> f64 {
        self.decomposition
            .max(self.pseudo_commutation)
            .max(self.v_power)
            .max(self.u_power)
    }
}

/// Decompose the finite phase operator as E_d = U_phi V with
/// U_phi = diag(e^{i [F(n+1)-F(n)] phi}) and V the cyclic shift, then check
/// the quantized pseudo-commutation relation V U_phi = q^p U_phi V, the
/// cyclicity V^d = I, and (U_phi)^d = e^{i pi (d-1) p} I.
pub fn pseudo_commutation_check(d: usize, p: usize) -> Result<PseudoCommutationReport> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("need d >= 2, got {d}")));
    }
    if p >= d {
        return Err(Error::InvalidParameter(format!(
            "p = {p} must lie in 0..{d}"
        )));
    }
    let kappa = KappaParam::from_dimension(d)?;
    let phi = quantize_phi_finite(d, p);
    let f = StructureFunction::new(kappa, d - 1)?;

    let u_phi = Array2::from_diag(
        &(0..d)
            .map(|n| cis(f.increment(n).to_f64().unwrap() * phi))
            .collect::<ndarray::Array1<_>>(),
    );
    let mut v: Array2<Complex64> = Array2::zeros((d, d));
    for n in 0..d {
        v[((n + d - 1) % d, n)] = Complex64::new(1.0, 0.0);
    }

    let rep = Representation::finite(kappa, phi)?;
    let e_d = phase_operator(&rep)?;
    let decomposition = max_abs_diff(e_d.matrix(), &u_phi.dot(&v));

    let q_p = cis(2.0 * PI * p as f64 / d as f64);
    let pseudo_commutation = max_abs_diff(&v.dot(&u_phi), &u_phi.dot(&v).mapv(|z| z * q_p));

    let v_power = max_abs_diff(&matrix_power(&v, d), &identity(d));

    let sign = cis(PI * ((d - 1) * p) as f64);
    let u_power = max_abs_diff(
        &matrix_power(&u_phi, d),
        &identity(d).mapv(|z| z * sign),
    );

    Ok(PseudoCommutationReport {
        decomposition,
        pseudo_commutation,
        v_power,
        u_power,
    })
}
