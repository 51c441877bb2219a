//! Default tolerances for matrix identities and composite quantities.
//!
//! Every construction in this crate is an exact identity contaminated only
//! by double rounding, so the defaults are tight: `1e-12` for direct matrix
//! identities and `1e-10` for composite quantities (overlaps, closures,
//! Gamma-form cross-checks).

/// Max-entry tolerance for matrix identities (commutators, unitarity, polar
/// decompositions, eigen-relations).
pub const MATRIX_TOL: f64 = 1e-12;

/// Tolerance for composite quantities: unbiasedness moduli, Gauss-sum
/// magnitudes, weight-table cross-checks.
pub const COMPOSITE_TOL: f64 = 1e-10;

/// Entrywise tolerance for adjointness checks.
pub const ADJOINT_TOL: f64 = 1e-14;

/// Configurable tolerance pair used by the verification suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Matrix-identity tolerance (default `1e-12`).
    pub matrix: f64,
    /// Composite-quantity tolerance (default `1e-10`).
    pub composite: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            matrix: MATRIX_TOL,
            composite: COMPOSITE_TOL,
        }
    }
}

impl Tolerances {
    /// Parse an override string: either a single value applied to the matrix
    /// tolerance (the composite tolerance scales by 100, preserving the
    /// default ratio) or a `matrix,composite` pair.
    pub fn parse(s: &str) -> Option<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        match parts.as_slice() {
            [one] => {
                let m: f64 = one.parse().ok()?;
                (m > 0.0).then_some(Self {
                    matrix: m,
                    composite: m * 100.0,
                })
            }
            [m, c] => {
                let m: f64 = m.parse().ok()?;
                let c: f64 = c.parse().ok()?;
                (m > 0.0 && c > 0.0).then_some(Self {
                    matrix: m,
                    composite: c,
                })
            }
            _ => None,
        }
    }

    /// Read the `PHASEKIT_TOLERANCE` environment variable, falling back to
    /// the defaults when unset or unparseable.
    pub fn from_env() -> Self {
        std::env::var("PHASEKIT_TOLERANCE")
            .ok()
            .and_then(|s| Self::parse(&s))
            .unwrap_or_default()
    }
}
