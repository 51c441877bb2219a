//! The generalized oscillator algebra and its truncation, as explicit
//! finite complex matrices.
//!
//! The three generators a-, a+, N obey [a-, a+] = I + 2 kappa N together
//! with [N, a+-] = +-a+- and adjointness. Their action on the number basis
//! is fixed by the structure function
//!
//! ```text
//! F(n) = n [1 + kappa (n - 1)],   F(n+1) - F(n) = 1 + 2 kappa n,   F(0) = 0,
//! ```
//!
//! which doubles as the energy spectrum of the Hamiltonian a+ a- = F(N).
//! Positivity of F caps the number of admissible levels when kappa < 0:
//! the space is d-dimensional with d = 1 - 1/kappa (so -1/kappa must be a
//! positive integer), while kappa >= 0 gives an infinite tower that can only
//! be materialized up to a numerical cutoff.
//!
//! The truncated algebra keeps s levels and compensates in the commutator:
//! [b-, b+] = I + 2 kappa N - F(s) |s-1><s-1|, with nilpotent ladders
//! (b-)^s = (b+)^s = 0.

use ndarray::Array2;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kappa::{Dimension, KappaParam};
use crate::linalg::{cis, commutator, dagger, identity, matrix_power, max_abs, max_abs_diff};
use crate::tol::MATRIX_TOL;

/// F(n) = n [1 + kappa (n - 1)] as an exact rational, with no positivity
/// constraint applied. Useful for boundary values such as F(s) in the
/// truncated commutator or F(d) = 0 at the edge of the finite regime.
pub fn structure_value(kappa: KappaParam, n: usize) -> Rational64 {
    let n = n as i64;
    let k = kappa.as_rational();
    Rational64::from_integer(n) * (Rational64::from_integer(1) + k * (n - 1))
}

/// Exact table of structure-function values F(0..=n_max).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureFunction {
    kappa: KappaParam,
    values: Vec<Rational64>,
}

impl StructureFunction {
    /// Evaluate F(0..=n_max), rejecting any n in range with F(n) <= 0.
    ///
    /// In the finite regime kappa = -1/(d-1) this enforces n_max <= d-1:
    /// F(d) = 0 sits exactly on the boundary of the strict positivity
    /// condition 1 + kappa(n-1) > 0 and is excluded.
    pub fn new(kappa: KappaParam, n_max: usize) -> Result<Self> {
        // Surfaces the -1/kappa integrality diagnostic before any values.
        kappa.dimension()?;
        let mut values = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let f = structure_value(kappa, n);
            if n >= 1 && f <= Rational64::from_integer(0) {
                return Err(Error::PositivityViolation {
                    n,
                    kappa: kappa.to_string(),
                    value: f.to_string(),
                });
            }
            values.push(f);
        }
        Ok(Self { kappa, values })
    }

    pub fn kappa(&self) -> KappaParam {
        self.kappa
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Rational64] {
        &self.values
    }

    pub fn value(&self, n: usize) -> Rational64 {
        self.values[n]
    }

    pub fn value_f64(&self, n: usize) -> f64 {
        self.values[n].to_f64().unwrap()
    }

    /// Exact increment F(n+1) - F(n) = 1 + 2 kappa n.
    pub fn increment(&self, n: usize) -> Rational64 {
        Rational64::from_integer(1) + self.kappa.as_rational() * Rational64::from_integer(2 * n as i64)
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64().unwrap()).collect()
    }
}

/// Which space a representation lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepKind {
    /// kappa < 0 with size d = 1 - 1/kappa: the full finite representation.
    FiniteExact,
    /// The s-level truncated algebra, any sign of kappa.
    Truncated,
    /// Numerical cutoff of the infinite tower (kappa >= 0) with the top row
    /// of a+ cut off; commutator and nilpotency identities are cutoff-limited.
    InfiniteCutoff,
}

/// Dense matrices of the ladder, number, and Hamiltonian operators at a
/// fixed phase parameter phi.
#[derive(Debug, Clone)]
pub struct Representation {
    dim: usize,
    phi: f64,
    kappa: KappaParam,
    kind: RepKind,
    structure: StructureFunction,
    a_plus: Array2<Complex64>,
    a_minus: Array2<Complex64>,
    number_op: Array2<Complex64>,
    hamiltonian: Array2<Complex64>,
}

impl Representation {
    /// The full finite representation: kappa < 0, size forced to d.
    pub fn finite(kappa: KappaParam, phi: f64) -> Result<Self> {
        match kappa.dimension()? {
            Dimension::Finite(d) => Self::build(kappa, phi, d, RepKind::FiniteExact),
            Dimension::Infinite => Err(Error::Regime(format!(
                "kappa = {kappa} >= 0 has no finite representation; \
                 use a truncated or infinite-cutoff one"
            ))),
        }
    }

    /// The s-dimensional truncated representation (any kappa whose first
    /// s-1 structure values stay positive).
    pub fn truncated(kappa: KappaParam, phi: f64, s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidParameter("size 0 representation".into()));
        }
        Self::build(kappa, phi, s, RepKind::Truncated)
    }

    /// Numerical cutoff of the infinite representation (kappa >= 0), keeping
    /// levels 0..=n_max. The top row of a+ is cut: identities that involve
    /// the lost matrix element hold only away from the last level.
    pub fn infinite_cutoff(kappa: KappaParam, phi: f64, n_max: usize) -> Result<Self> {
        if kappa.is_negative() {
            return Err(Error::Regime(format!(
                "kappa = {kappa} < 0 is the finite regime; the open-top cutoff \
                 surrogate is for kappa >= 0"
            )));
        }
        Self::build(kappa, phi, n_max + 1, RepKind::InfiniteCutoff)
    }

    /// Flag-style constructor: `truncated = true` builds the s-level
    /// truncated algebra, `truncated = false` requires the exact finite
    /// regime with `size` equal to d.
    pub fn build_representation(
        kappa: KappaParam,
        phi: f64,
        size: usize,
        truncated: bool,
    ) -> Result<Self> {
        if truncated {
            return Self::truncated(kappa, phi, size);
        }
        match kappa.dimension()? {
            Dimension::Finite(d) if d == size => Self::finite(kappa, phi),
            Dimension::Finite(d) => Err(Error::DimensionMismatch(format!(
                "kappa = {kappa} fixes the untruncated dimension to {d}, got size {size}"
            ))),
            Dimension::Infinite => Err(Error::Regime(format!(
                "kappa = {kappa} >= 0 is infinite-dimensional; request the truncated \
                 algebra or an explicit infinite-cutoff representation"
            ))),
        }
    }

    fn build(kappa: KappaParam, phi: f64, size: usize, kind: RepKind) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter("size 0 representation".into()));
        }
        let structure = StructureFunction::new(kappa, size - 1)?;
        let mut a_plus: Array2<Complex64> = Array2::zeros((size, size));
        let mut a_minus: Array2<Complex64> = Array2::zeros((size, size));
        // Both ladders are filled from their own defining action so the
        // adjointness relation is a checked property, not a construction.
        for n in 1..size {
            let root = structure.value_f64(n).sqrt();
            let step = structure.increment(n - 1).to_f64().unwrap() * phi;
            a_minus[(n - 1, n)] = root * cis(step);
            a_plus[(n, n - 1)] = root * cis(-step);
        }
        let number_op = Array2::from_diag(
            &(0..size)
                .map(|n| Complex64::new(n as f64, 0.0))
                .collect::<ndarray::Array1<_>>(),
        );
        let hamiltonian = Array2::from_diag(
            &(0..size)
                .map(|n| Complex64::new(structure.value_f64(n), 0.0))
                .collect::<ndarray::Array1<_>>(),
        );
        Ok(Self {
            dim: size,
            phi,
            kappa,
            kind,
            structure,
            a_plus,
            a_minus,
            number_op,
            hamiltonian,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn kappa(&self) -> KappaParam {
        self.kappa
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn is_truncated(&self) -> bool {
        self.kind == RepKind::Truncated
    }

    pub fn structure(&self) -> &StructureFunction {
        &self.structure
    }

    pub fn a_plus(&self) -> &Array2<Complex64> {
        &self.a_plus
    }

    pub fn a_minus(&self) -> &Array2<Complex64> {
        &self.a_minus
    }

    pub fn number_op(&self) -> &Array2<Complex64> {
        &self.number_op
    }

    pub fn hamiltonian(&self) -> &Array2<Complex64> {
        &self.hamiltonian
    }

    /// Entrywise residual between a+ and the conjugate transpose of a-.
    pub fn adjointness_residual(&self) -> f64 {
        max_abs_diff(&self.a_plus, &dagger(&self.a_minus))
    }

    /// Residual of hamiltonian = a+ a- against the stored diagonal.
    pub fn hamiltonian_residual(&self) -> f64 {
        max_abs_diff(&self.a_plus.dot(&self.a_minus), &self.hamiltonian)
    }
}

/// Residuals of the defining commutation relation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CommutatorReport {
    /// Max-entry residual against the right-hand side appropriate to the
    /// representation kind: I + 2 kappa N for the exact finite regime
    /// (and, cutoff-limited, for the open-top surrogate), with the extra
    /// -F(s)|s-1><s-1| corner term in the truncated case.
    pub residual: f64,
    /// Max-entry residual against I + 2 kappa N alone. For the truncated
    /// algebra of size s this exposes the corner defect F(s) at (s-1, s-1).
    pub plain_residual: f64,
    /// |trace [a-, a+]|, which must vanish in any finite representation.
    pub trace_magnitude: f64,
}

/// Compute the commutator [a-, a+] and compare it with the algebra's
/// right-hand side(s).
pub fn commutator_residual(rep: &Representation) -> CommutatorReport {
    let comm = commutator(rep.a_minus(), rep.a_plus());
    let s = rep.dim();
    let two_kappa = 2.0 * rep.kappa().as_f64();
    let mut plain_rhs = identity(s);
    for n in 0..s {
        plain_rhs[(n, n)] += Complex64::new(two_kappa * n as f64, 0.0);
    }
    let plain_residual = max_abs_diff(&comm, &plain_rhs);
    let residual = match rep.kind() {
        RepKind::Truncated => {
            let mut rhs = plain_rhs;
            let corner = structure_value(rep.kappa(), s).to_f64().unwrap();
            rhs[(s - 1, s - 1)] -= Complex64::new(corner, 0.0);
            max_abs_diff(&comm, &rhs)
        }
        RepKind::FiniteExact | RepKind::InfiniteCutoff => plain_residual,
    };
    let trace_magnitude = comm.diag().sum().norm();
    CommutatorReport {
        residual,
        plain_residual,
        trace_magnitude,
    }
}

/// Levels of the finite spectrum grouped by equal energy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyReport {
    pub dim: usize,
    /// (energy, level indices), ordered by first occurrence of the energy.
    pub classes: Vec<(Rational64, Vec<usize>)>,
}

impl DegeneracyReport {
    /// Indices grouped with the given level.
    pub fn class_of(&self, n: usize) -> Option<&[usize]> {
        self.classes
            .iter()
            .find(|(_, idx)| idx.contains(&n))
            .map(|(_, idx)| idx.as_slice())
    }
}

/// Group the finite-regime levels F(0..d-1) into degeneracy classes.
///
/// The symmetry F(n) = F(d-n) makes every level a doublet except n = 0
/// (always) and n = d/2 (d even). Rejected in the infinite regime, where
/// the spectrum is nondegenerate and unbounded.
pub fn degeneracy_report(kappa: KappaParam) -> Result<DegeneracyReport> {
    let d = match kappa.dimension()? {
        Dimension::Finite(d) => d,
        Dimension::Infinite => {
            return Err(Error::Regime(format!(
                "kappa = {kappa} >= 0: spectrum is nondegenerate and infinite; \
                 no degeneracy classes to report"
            )))
        }
    };
    let f = StructureFunction::new(kappa, d - 1)?;
    let mut classes: Vec<(Rational64, Vec<usize>)> = Vec::new();
    for n in 0..d {
        let e = f.value(n);
        match classes.iter_mut().find(|(v, _)| *v == e) {
            Some((_, idx)) => idx.push(n),
            None => classes.push((e, vec![n])),
        }
    }
    Ok(DegeneracyReport { dim: d, classes })
}

/// Whether the s-th powers of both ladders vanish.
///
/// True nilpotency is a property of the truncated algebra (and of the exact
/// finite regime, where F(d) = 0 annihilates the top level). For the
/// open-top infinite cutoff the vanishing of the cut matrix power is an
/// artifact -- the lost element <s|a+|s-1> = sqrt(F(s)) is nonzero -- so the
/// check reports false there.
pub fn nilpotency_check(rep: &Representation) -> bool {
    match rep.kind() {
        RepKind::InfiniteCutoff => false,
        RepKind::Truncated | RepKind::FiniteExact => {
            let s = rep.dim();
            max_abs(&matrix_power(rep.a_minus(), s)) < MATRIX_TOL
                && max_abs(&matrix_power(rep.a_plus(), s)) < MATRIX_TOL
        }
    }
}

// --- JSON wire format -------------------------------------------------------

/// Row-major [re, im] pair list for a dense complex matrix.
pub(crate) fn matrix_to_pairs(m: &Array2<Complex64>) -> Vec<[f64; 2]> {
    m.iter().map(|z| [z.re, z.im]).collect()
}

pub(crate) fn pairs_to_matrix(pairs: &[[f64; 2]], dim: usize) -> Result<Array2<Complex64>> {
    if pairs.len() != dim * dim {
        return Err(Error::Json(format!(
            "matrix payload has {} entries, expected {}",
            pairs.len(),
            dim * dim
        )));
    }
    let data: Vec<Complex64> = pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    Array2::from_shape_vec((dim, dim), data)
        .map_err(|e| Error::Json(format!("bad matrix shape: {e}")))
}

#[derive(Serialize, Deserialize)]
struct KappaJson {
    num: i64,
    den: i64,
}

#[derive(Serialize, Deserialize)]
struct RepresentationJson {
    dim: usize,
    phi: f64,
    kappa: KappaJson,
    kind: RepKind,
    truncated: bool,
    a_plus: Vec<[f64; 2]>,
    a_minus: Vec<[f64; 2]>,
    number_op: Vec<[f64; 2]>,
    hamiltonian: Vec<[f64; 2]>,
}

impl Representation {
    /// Serialize to the row-major JSON wire format.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RepresentationJson {
            dim: self.dim,
            phi: self.phi,
            kappa: KappaJson {
                num: self.kappa.numerator(),
                den: self.kappa.denominator(),
            },
            kind: self.kind,
            truncated: self.is_truncated(),
            a_plus: matrix_to_pairs(&self.a_plus),
            a_minus: matrix_to_pairs(&self.a_minus),
            number_op: matrix_to_pairs(&self.number_op),
            hamiltonian: matrix_to_pairs(&self.hamiltonian),
        })
        .expect("representation serialization cannot fail")
    }

    /// Reconstruct from the wire format, keeping the transported matrices
    /// (so downstream residual checks measure the parsed data, not a
    /// rebuild).
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: RepresentationJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Json(e.to_string()))?;
        let kappa = KappaParam::new(raw.kappa.num, raw.kappa.den)?;
        if raw.dim == 0 {
            return Err(Error::Json("dim 0 representation".into()));
        }
        let structure = StructureFunction::new(kappa, raw.dim - 1)?;
        Ok(Self {
            dim: raw.dim,
            phi: raw.phi,
            kappa,
            kind: raw.kind,
            structure,
            a_plus: pairs_to_matrix(&raw.a_plus, raw.dim)?,
            a_minus: pairs_to_matrix(&raw.a_minus, raw.dim)?,
            number_op: pairs_to_matrix(&raw.number_op, raw.dim)?,
            hamiltonian: pairs_to_matrix(&raw.hamiltonian, raw.dim)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn structure_function_harmonic_is_linear() {
        let f = StructureFunction::new(KappaParam::zero(), 3).unwrap();
        let expect: Vec<Rational64> = (0..=3).map(Rational64::from_integer).collect();
        assert_eq!(f.values(), expect.as_slice());
    }

    #[test]
    fn structure_function_finite_example() {
        // kappa = -1/3, d = 4: F(n) = n(4-n)/3 -- [0, 1, 4/3, 1]
        let k = KappaParam::new(-1, 3).unwrap();
        let f = StructureFunction::new(k, 3).unwrap();
        assert_eq!(
            f.values(),
            &[rat(0, 1), rat(1, 1), rat(4, 3), rat(1, 1)]
        );
        // cross-check the closed form F(n) = n(d-n)/(d-1)
        for n in 0..=3i64 {
            assert_eq!(f.value(n as usize), rat(n * (4 - n), 3));
        }
    }

    #[test]
    fn structure_function_positive_kappa() {
        let k = KappaParam::new(1, 1).unwrap();
        let f = StructureFunction::new(k, 2).unwrap();
        assert_eq!(f.values(), &[rat(0, 1), rat(1, 1), rat(4, 1)]);
    }

    #[test]
    fn structure_function_rejects_beyond_positivity() {
        // kappa = -1/3: F(4) = 0 lies on the boundary and is excluded
        let k = KappaParam::new(-1, 3).unwrap();
        assert!(StructureFunction::new(k, 4).is_err());
        assert!(StructureFunction::new(KappaParam::new(-2, 3).unwrap(), 2).is_err());
    }

    #[test]
    fn recurrence_is_exact() {
        for (num, den) in [(0, 1), (1, 1), (1, 2), (-1, 3), (-1, 5), (3, 2)] {
            let k = KappaParam::new(num, den).unwrap();
            let n_max = match k.dimension().unwrap() {
                Dimension::Finite(d) => d - 1,
                Dimension::Infinite => 12,
            };
            let f = StructureFunction::new(k, n_max).unwrap();
            for n in 0..n_max {
                assert_eq!(f.value(n + 1) - f.value(n), f.increment(n));
            }
        }
    }

    #[test]
    fn two_level_ladders() {
        // kappa = -1, d = 2, phi = 0: a- = [[0,1],[0,0]], a+ = [[0,0],[1,0]]
        let k = KappaParam::new(-1, 1).unwrap();
        let rep = Representation::finite(k, 0.0).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(rep.a_minus()[(0, 1)], one);
        assert_eq!(rep.a_minus()[(1, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(rep.a_plus()[(1, 0)], one);
        assert_eq!(rep.a_plus()[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn truncated_harmonic_number_operator() {
        let rep = Representation::truncated(KappaParam::zero(), 0.0, 3).unwrap();
        let prod = rep.a_plus().dot(rep.a_minus());
        for n in 0..3 {
            assert!((prod[(n, n)] - Complex64::new(n as f64, 0.0)).norm() < 1e-15);
        }
        assert!(rep.hamiltonian_residual() < 1e-15);
    }

    #[test]
    fn finite_commutator_closes_at_nonzero_phi() {
        let k = KappaParam::new(-1, 3).unwrap();
        let rep = Representation::finite(k, 0.7).unwrap();
        let report = commutator_residual(&rep);
        assert!(report.residual < MATRIX_TOL, "residual {}", report.residual);
        assert!(report.trace_magnitude < MATRIX_TOL);
        assert!(rep.adjointness_residual() < 1e-14);
    }

    #[test]
    fn truncated_corner_defect_equals_structure_value() {
        // kappa = 0, s = 4: residual against I + 2 kappa N alone is F(4) = 4
        let rep = Representation::truncated(KappaParam::zero(), 0.0, 4).unwrap();
        let report = commutator_residual(&rep);
        assert!(report.residual < MATRIX_TOL);
        assert!((report.plain_residual - 4.0).abs() < 1e-12);
        // and the defect sits at the last diagonal entry
        let comm = commutator(rep.a_minus(), rep.a_plus());
        assert!((comm[(3, 3)] - Complex64::new(-3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn truncated_commutator_closes() {
        let k = KappaParam::new(1, 2).unwrap();
        let rep = Representation::truncated(k, 0.4, 3).unwrap();
        assert!(commutator_residual(&rep).residual < MATRIX_TOL);
    }

    #[test]
    fn truncation_at_full_finite_size_has_no_corner() {
        // s = d makes F(s) = 0: the truncated algebra coincides with the
        // exact finite one.
        let k = KappaParam::new(-1, 3).unwrap();
        let rep = Representation::truncated(k, 0.3, 4).unwrap();
        let report = commutator_residual(&rep);
        assert!(report.residual < MATRIX_TOL);
        assert!(report.plain_residual < MATRIX_TOL);
    }

    #[test]
    fn degeneracy_classes_examples() {
        let r = degeneracy_report(KappaParam::new(-1, 3).unwrap()).unwrap();
        assert_eq!(
            r.classes,
            vec![
                (rat(0, 1), vec![0]),
                (rat(1, 1), vec![1, 3]),
                (rat(4, 3), vec![2]),
            ]
        );

        let r = degeneracy_report(KappaParam::new(-1, 2).unwrap()).unwrap();
        assert_eq!(
            r.classes,
            vec![(rat(0, 1), vec![0]), (rat(1, 1), vec![1, 2])]
        );

        let r = degeneracy_report(KappaParam::new(-1, 1).unwrap()).unwrap();
        assert_eq!(r.classes.len(), 2);
        assert!(r.classes.iter().all(|(_, idx)| idx.len() == 1));

        assert!(degeneracy_report(KappaParam::zero()).is_err());
    }

    #[test]
    fn degeneracy_partition_covers_all_levels() {
        for d in 2..=12 {
            let r = degeneracy_report(KappaParam::from_dimension(d).unwrap()).unwrap();
            let mut seen: Vec<usize> = r.classes.iter().flat_map(|(_, i)| i.clone()).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..d).collect::<Vec<_>>());
            // doublet pattern: singlets only at 0 and (d even) d/2
            for (_, idx) in &r.classes {
                match idx.as_slice() {
                    [0] => {}
                    [m] if d % 2 == 0 && *m == d / 2 => {}
                    [a, b] => assert_eq!(a + b, d),
                    other => panic!("unexpected class {other:?} for d = {d}"),
                }
            }
        }
    }

    #[test]
    fn nilpotency_examples() {
        let rep = Representation::truncated(KappaParam::zero(), 0.0, 2).unwrap();
        assert!(nilpotency_check(&rep));

        let rep = Representation::truncated(KappaParam::new(1, 1).unwrap(), 0.9, 5).unwrap();
        assert!(nilpotency_check(&rep));

        // open-top surrogate: the cut power vanishing is an artifact
        let rep = Representation::infinite_cutoff(KappaParam::zero(), 0.0, 4).unwrap();
        assert!(!nilpotency_check(&rep));
    }

    #[test]
    fn build_representation_flag_dispatch() {
        let k = KappaParam::new(-1, 3).unwrap();
        assert!(Representation::build_representation(k, 0.0, 4, false).is_ok());
        assert!(Representation::build_representation(k, 0.0, 3, false).is_err());
        assert!(Representation::build_representation(k, 0.0, 3, true).is_ok());
        assert!(Representation::build_representation(k, 0.0, 5, true).is_err());
        assert!(Representation::build_representation(KappaParam::zero(), 0.0, 7, false).is_err());
        assert!(Representation::infinite_cutoff(k, 0.0, 5).is_err());
    }

    #[test]
    fn size_one_representation_is_trivial() {
        let rep = Representation::truncated(KappaParam::new(1, 1).unwrap(), 0.5, 1).unwrap();
        assert!(max_abs(rep.a_minus()) == 0.0 && max_abs(rep.a_plus()) == 0.0);
        // corner term F(1) = 1 cancels the identity
        assert!(commutator_residual(&rep).residual < MATRIX_TOL);
        assert!(nilpotency_check(&rep));
    }

    #[test]
    fn json_round_trip_preserves_matrices() {
        let k = KappaParam::new(-1, 4).unwrap();
        let rep = Representation::finite(k, 1.3).unwrap();
        let value = rep.to_json();
        let back = Representation::from_json(&value).unwrap();
        assert_eq!(back.dim(), rep.dim());
        assert_eq!(back.kind(), rep.kind());
        assert!(max_abs_diff(back.a_plus(), rep.a_plus()) == 0.0);
        assert!(commutator_residual(&back).residual < MATRIX_TOL);
    }
}
