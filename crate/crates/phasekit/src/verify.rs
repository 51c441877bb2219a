//! The built-in verification grid.
//!
//! Every identity the crate implements is an exact statement contaminated
//! only by double rounding, so verification is a sweep: evaluate each
//! invariant over a fixed grid of (kappa, size, phi, t) cells and report
//! the worst residual seen. The default grid covers every regime -- finite
//! dimensions 2..=12, the prime dimensions up to 13 for the bases, four
//! truncated kappa values with orders up to 8, and the three solvable
//! systems -- in well under a minute.

use num_complex::Complex64;

use crate::algebra::{
    commutator_residual, degeneracy_report, Representation, StructureFunction,
};
use crate::kappa::{Dimension, KappaParam};
use crate::linalg::{cis, max_abs, matrix_power};
use crate::mub::{
    build_mub_set, gauss_sum, mub_state_finite, mub_state_truncated,
    overlap_via_gauss_finite, pseudo_commutation_check, GaussSumParams, MubRoute,
};
use crate::phase::{
    build_vs_us, build_weights, closure_residual, default_theta_grid, evolve, overlap,
    phase_operator, phase_operator_infinite_cutoff, phase_overlap_formula, phase_states,
    theta_closure_residual, theta_phase_state, vs_closure_residual, vs_overlap_formula,
    vs_phase_states,
};
use crate::potentials::{
    physical_phase_states, quantize_phi_physical, to_spectrum_params, weight_table,
    PotentialSpec,
};
use crate::tol::Tolerances;

/// Outcome of one invariant over its grid cells.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub cells: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn new(name: &str, cells: usize, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            cells,
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
        }
    }
}

const PHIS: [f64; 3] = [0.0, 0.3, 1.7];
const TIMES: [f64; 3] = [0.0, 0.7, -2.1];
const PRIMES: [usize; 6] = [2, 3, 5, 7, 11, 13];

fn finite_grid() -> Vec<(KappaParam, usize)> {
    (2..=12)
        .map(|d| (KappaParam::from_dimension(d).unwrap(), d))
        .collect()
}

fn truncated_grid() -> Vec<(KappaParam, usize)> {
    let kappas = [
        KappaParam::new(1, 1).unwrap(),
        KappaParam::new(1, 2).unwrap(),
        KappaParam::new(-1, 3).unwrap(),
        KappaParam::new(-1, 5).unwrap(),
    ];
    let mut grid = Vec::new();
    for k in kappas {
        let s_top = match k.dimension().unwrap() {
            Dimension::Finite(d) => d.min(8),
            Dimension::Infinite => 8,
        };
        for s in 2..=s_top {
            grid.push((k, s));
        }
    }
    grid
}

fn cutoff_kappas() -> [KappaParam; 3] {
    [
        KappaParam::zero(),
        KappaParam::new(1, 1).unwrap(),
        KappaParam::new(1, 2).unwrap(),
    ]
}

fn potential_cells() -> Vec<(PotentialSpec, usize)> {
    let mut cells = vec![
        (PotentialSpec::HarmonicOscillator, 16usize),
        (PotentialSpec::PoschlTeller { u: 2.0, v: 2.0 }, 12),
    ];
    for l in 2..=6u32 {
        cells.push((PotentialSpec::Morse { l }, l as usize + 1));
    }
    cells
}

fn algebra_checks(tol: &Tolerances, out: &mut Vec<CheckResult>) {
    let mut commutator_fin = 0.0f64;
    let mut trace = 0.0f64;
    let mut adjoint = 0.0f64;
    let mut hamiltonian = 0.0f64;
    let mut cells = 0usize;
    for (k, d) in finite_grid() {
        for phi in PHIS {
            let rep = Representation::finite(k, phi).unwrap();
            let report = commutator_residual(&rep);
            commutator_fin = commutator_fin.max(report.residual);
            trace = trace.max(report.trace_magnitude);
            adjoint = adjoint.max(rep.adjointness_residual());
            hamiltonian = hamiltonian.max(rep.hamiltonian_residual());
            cells += 1;
            let _ = d;
        }
    }
    out.push(CheckResult::new(
        "algebra/commutator-finite",
        cells,
        commutator_fin,
        tol.matrix,
    ));

    let mut commutator_tr = 0.0f64;
    let mut nilpotency = 0.0f64;
    let mut tr_cells = 0usize;
    for (k, s) in truncated_grid() {
        for phi in PHIS {
            let rep = Representation::truncated(k, phi, s).unwrap();
            let report = commutator_residual(&rep);
            commutator_tr = commutator_tr.max(report.residual);
            trace = trace.max(report.trace_magnitude);
            adjoint = adjoint.max(rep.adjointness_residual());
            hamiltonian = hamiltonian.max(rep.hamiltonian_residual());
            nilpotency = nilpotency
                .max(max_abs(&matrix_power(rep.a_minus(), s)))
                .max(max_abs(&matrix_power(rep.a_plus(), s)));
            tr_cells += 1;
        }
    }
    out.push(CheckResult::new(
        "algebra/commutator-truncated",
        tr_cells,
        commutator_tr,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "algebra/nilpotency",
        tr_cells,
        nilpotency,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "algebra/trace-zero",
        cells + tr_cells,
        trace,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "algebra/adjointness",
        cells + tr_cells,
        adjoint,
        tol.matrix / 100.0,
    ));
    out.push(CheckResult::new(
        "algebra/hamiltonian-diagonal",
        cells + tr_cells,
        hamiltonian,
        tol.matrix,
    ));

    // exact rational statements: count violations
    let mut symmetry_violations = 0usize;
    let mut perron_violations = 0usize;
    let mut exact_cells = 0usize;
    for (k, d) in finite_grid() {
        let f = StructureFunction::new(k, d - 1).unwrap();
        for n in 1..d {
            if f.value(n) != crate::algebra::structure_value(k, d - n) {
                symmetry_violations += 1;
            }
        }
        let ground = f.value(0);
        if (1..d).any(|n| f.value(n) <= ground) {
            perron_violations += 1;
        }
        let report = degeneracy_report(k).unwrap();
        let mut seen: Vec<usize> = report
            .classes
            .iter()
            .flat_map(|(_, idx)| idx.clone())
            .collect();
        seen.sort_unstable();
        if seen != (0..d).collect::<Vec<_>>() {
            symmetry_violations += 1;
        }
        exact_cells += 1;
    }
    out.push(CheckResult::new(
        "algebra/degeneracy-symmetry",
        exact_cells,
        symmetry_violations as f64,
        0.5,
    ));
    out.push(CheckResult::new(
        "algebra/ground-level-nondegenerate",
        exact_cells,
        perron_violations as f64,
        0.5,
    ));
}

fn phase_operator_checks(tol: &Tolerances, out: &mut Vec<CheckResult>) {
    let mut unitarity = 0.0f64;
    let mut cyclic = 0.0f64;
    let mut polar = 0.0f64;
    let mut eigen = 0.0f64;
    let mut cells = 0usize;

    let mut all: Vec<(KappaParam, usize, bool)> = finite_grid()
        .into_iter()
        .map(|(k, d)| (k, d, false))
        .collect();
    all.extend(truncated_grid().into_iter().map(|(k, s)| (k, s, true)));

    for (k, dim, truncated) in all {
        for phi in PHIS {
            let rep = if truncated {
                Representation::truncated(k, phi, dim).unwrap()
            } else {
                Representation::finite(k, phi).unwrap()
            };
            let e = phase_operator(&rep).unwrap();
            unitarity = unitarity
                .max(e.unitarity_residual())
                .max(e.right_unitarity_residual());
            cyclic = cyclic.max(e.power_residual());
            polar = polar.max(e.polar_residual(&rep).unwrap());
            for (m, st) in phase_states(dim, k, phi).unwrap().iter().enumerate() {
                let image = e
                    .matrix()
                    .dot(&ndarray::Array1::from(st.amplitudes().to_vec()));
                let eigenvalue = cis(2.0 * std::f64::consts::PI * m as f64 / dim as f64);
                let r = image
                    .iter()
                    .zip(st.amplitudes())
                    .map(|(i, a)| (i - eigenvalue * a).norm())
                    .fold(0.0, f64::max);
                eigen = eigen.max(r);
            }
            cells += 1;
        }
    }
    out.push(CheckResult::new(
        "phase/unitarity",
        cells,
        unitarity,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "phase/cyclic-power",
        cells,
        cyclic,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "phase/polar-decomposition",
        cells,
        polar,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "phase/eigen-relation",
        cells,
        eigen,
        tol.matrix,
    ));
}

fn phase_state_checks(tol: &Tolerances, out: &mut Vec<CheckResult>) {
    let mut orthonormality = 0.0f64;
    let mut closure = 0.0f64;
    let mut equiprobability = 0.0f64;
    let mut stability_m = 0.0f64;
    let mut rho = 0.0f64;
    let mut cells = 0usize;

    let mut dims: Vec<(KappaParam, usize)> = finite_grid();
    dims.extend(truncated_grid());

    for (k, dim) in &dims {
        let (k, dim) = (*k, *dim);
        for phi in PHIS {
            let states = phase_states(dim, k, phi).unwrap();
            closure = closure.max(closure_residual(&states));
            let target = 1.0 / (dim as f64).sqrt();
            for (m, a) in states.iter().enumerate() {
                for amp in a.amplitudes() {
                    equiprobability = equiprobability.max((amp.norm() - target).abs());
                }
                for (mp, b) in states.iter().enumerate() {
                    let expected = if m == mp { 1.0 } else { 0.0 };
                    let ip = overlap(a, b).unwrap();
                    orthonormality =
                        orthonormality.max((ip - Complex64::new(expected, 0.0)).norm());
                }
            }
            for t in TIMES {
                let rebuilt = phase_states(dim, k, phi + t).unwrap();
                for (st, rb) in states.iter().zip(rebuilt.iter()) {
                    stability_m = stability_m.max(evolve(st, t).max_diff(rb));
                }
            }
            // rho-sum oracle against a second phi
            let other = phase_states(dim, k, phi + 0.4).unwrap();
            for (m, a) in states.iter().enumerate() {
                for (mp, b) in other.iter().enumerate() {
                    let direct = overlap(a, b).unwrap();
                    let formula =
                        phase_overlap_formula(dim, k, m, phi, mp, phi + 0.4).unwrap();
                    rho = rho.max((direct - formula).norm());
                }
            }
            cells += 1;
        }
    }
    out.push(CheckResult::new(
        "phase/orthonormality",
        cells,
        orthonormality,
        tol.matrix,
    ));
    out.push(CheckResult::new("phase/closure", cells, closure, tol.matrix));
    out.push(CheckResult::new(
        "phase/equiprobability",
        cells,
        equiprobability,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "phase/temporal-stability-m",
        cells * TIMES.len(),
        stability_m,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "phase/overlap-rho-sum",
        cells,
        rho,
        tol.matrix,
    ));
}

fn vs_checks(tol: &Tolerances, out: &mut Vec<CheckResult>) {
    let mut v_power = 0.0f64;
    let mut u_power = 0.0f64;
    let mut s_comm = 0.0f64;
    let mut witness_margin = 0.0f64;
    let mut vs_eigen = 0.0f64;
    let mut vs_overlap = 0.0f64;
    let mut vs_closure = 0.0f64;
    let mut stability_mu = 0.0f64;
    let mut cells = 0usize;

    for (k, s) in truncated_grid() {
        for phi in PHIS {
            let rep = Representation::truncated(k, phi, s).unwrap();
            let pair = build_vs_us(&rep).unwrap();
            v_power = v_power.max(pair.v_power_residual());
            u_power = u_power.max(pair.u_power_residual());
            s_comm = s_comm.max(pair.s_commutation_residual());
            let weights = build_weights(k, s).unwrap();
            if !weights.is_constant() {
                witness_margin =
                    witness_margin.max((0.1 - pair.nonunitarity_witness()).max(0.0));
            }
            let states = vs_phase_states(&rep, &weights).unwrap();
            vs_closure = vs_closure.max(vs_closure_residual(&states, &weights));
            let q_s = cis(2.0 * std::f64::consts::PI / s as f64);
            for (mu, st) in states.iter().enumerate() {
                let image = pair
                    .v()
                    .dot(&ndarray::Array1::from(st.amplitudes().to_vec()));
                let eigenvalue = q_s.powu(mu as u32);
                let r = image
                    .iter()
                    .zip(st.amplitudes())
                    .map(|(i, a)| (i - eigenvalue * a).norm())
                    .fold(0.0, f64::max);
                vs_eigen = vs_eigen.max(r);
            }
            let spectrum = rep.structure().values_f64();
            let other_rep = Representation::truncated(k, phi - 0.9, s).unwrap();
            let other = vs_phase_states(&other_rep, &weights).unwrap();
            for (mu, a) in states.iter().enumerate() {
                for (mup, b) in other.iter().enumerate() {
                    let direct = overlap(a, b).unwrap();
                    let formula =
                        vs_overlap_formula(&weights, &spectrum, mu, phi, mup, phi - 0.9);
                    vs_overlap = vs_overlap.max((direct - formula).norm());
                }
            }
            for t in TIMES {
                let rebuilt_rep = Representation::truncated(k, phi + t, s).unwrap();
                let rebuilt = vs_phase_states(&rebuilt_rep, &weights).unwrap();
                for (st, rb) in states.iter().zip(rebuilt.iter()) {
                    stability_mu = stability_mu.max(evolve(st, t).max_diff(rb));
                }
            }
            cells += 1;
        }
    }
    out.push(CheckResult::new("vs/v-idempotency", cells, v_power, tol.matrix));
    out.push(CheckResult::new("vs/u-idempotency", cells, u_power, tol.matrix));
    out.push(CheckResult::new(
        "vs/s-commutation",
        cells,
        s_comm,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "vs/nonunitarity-margin",
        cells,
        witness_margin,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "vs/eigen-relation",
        cells,
        vs_eigen,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "vs/overlap-formula",
        cells,
        vs_overlap,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "vs/weighted-closure",
        cells,
        vs_closure,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "vs/temporal-stability-mu",
        cells * TIMES.len(),
        stability_mu,
        tol.matrix,
    ));
}

fn cutoff_checks(tol: &Tolerances, out: &mut Vec<CheckResult>) {
    let n_max = 24;
    let mut left = 0.0f64;
    let mut right = 0.0f64;
    let mut corner = 0.0f64;
    let mut theta_eigen = 0.0f64;
    let mut theta_closure = 0.0f64;
    let mut stability_theta = 0.0f64;
    let mut cells = 0usize;
    let thetas = [0.0, 1.1, -2.5];

    for k in cutoff_kappas() {
        for phi in PHIS {
            let e = phase_operator_infinite_cutoff(k, phi, n_max).unwrap();
            left = left.max(e.left_isometry_defect());
            let (off_top, lost) = e.right_isometry_defect();
            right = right.max(off_top);
            corner = corner.max(lost);
            theta_closure = theta_closure.max(
                theta_closure_residual(k, phi, n_max, default_theta_grid(n_max)).unwrap(),
            );
            for theta in thetas {
                let st = theta_phase_state(theta, phi, k, n_max).unwrap();
                let image = e
                    .matrix()
                    .dot(&ndarray::Array1::from(st.amplitudes().to_vec()));
                let eigenvalue = cis(theta);
                for n in 0..n_max {
                    theta_eigen =
                        theta_eigen.max((image[n] - eigenvalue * st.amplitudes()[n]).norm());
                }
                for t in TIMES {
                    let rebuilt = theta_phase_state(theta, phi + t, k, n_max).unwrap();
                    stability_theta = stability_theta.max(evolve(&st, t).max_diff(&rebuilt));
                }
            }
            cells += 1;
        }
    }
    out.push(CheckResult::new(
        "cutoff/left-isometry",
        cells,
        left,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "cutoff/right-isometry-off-top",
        cells,
        right,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "cutoff/lost-corner-reads-zero",
        cells,
        corner,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "cutoff/theta-eigen-relation",
        cells * thetas.len(),
        theta_eigen,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "cutoff/theta-grid-closure",
        cells,
        theta_closure,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "cutoff/temporal-stability-theta",
        cells * thetas.len() * TIMES.len(),
        stability_theta,
        tol.matrix,
    ));
}

fn mub_checks(tol: &Tolerances, out: &mut Vec<CheckResult>) {
    // finite route over prime dimensions
    let mut finite_dev = 0.0f64;
    let mut finite_incomplete = 0usize;
    for d in PRIMES {
        let set = build_mub_set(MubRoute::Finite { d }).unwrap();
        finite_dev = finite_dev.max(set.max_unbiasedness_deviation());
        if !set.complete {
            finite_incomplete += 1;
        }
    }
    out.push(CheckResult::new(
        "mub/finite-unbiasedness",
        PRIMES.len(),
        finite_dev,
        tol.composite,
    ));
    out.push(CheckResult::new(
        "mub/finite-completeness-flag",
        PRIMES.len(),
        finite_incomplete as f64,
        0.5,
    ));

    // truncated route: unbiased for odd prime orders; the even Gauss-sum
    // parameter makes s = 2 degenerate, which the builder must report
    let mut truncated_dev = 0.0f64;
    let mut truncated_cells = 0usize;
    for s in [3usize, 5, 7] {
        let mut kappas = vec![KappaParam::new(1, 1).unwrap(), KappaParam::new(1, 2).unwrap()];
        kappas.push(KappaParam::from_dimension(s).unwrap());
        for k in kappas {
            let set = build_mub_set(MubRoute::Truncated { kappa: k, s }).unwrap();
            truncated_dev = truncated_dev.max(set.max_unbiasedness_deviation());
            if !set.complete {
                truncated_dev = truncated_dev.max(1.0);
            }
            truncated_cells += 1;
        }
    }
    out.push(CheckResult::new(
        "mub/truncated-unbiasedness-odd-prime",
        truncated_cells,
        truncated_dev,
        tol.composite,
    ));

    let mut order_two_misflags = 0usize;
    for k in [KappaParam::new(1, 1).unwrap(), KappaParam::new(-1, 1).unwrap()] {
        let set = build_mub_set(MubRoute::Truncated { kappa: k, s: 2 }).unwrap();
        if set.complete || set.worst_pair().unbiasedness_deviation(2) < 0.1 {
            order_two_misflags += 1;
        }
    }
    out.push(CheckResult::new(
        "mub/truncated-order-two-degeneracy-reported",
        2,
        order_two_misflags as f64,
        0.5,
    ));

    let mut composite_misflags = 0usize;
    for d in [4usize, 6] {
        let set = build_mub_set(MubRoute::Finite { d }).unwrap();
        if set.complete || set.worst_pair().unbiasedness_deviation(d) < 0.01 {
            composite_misflags += 1;
        }
    }
    out.push(CheckResult::new(
        "mub/composite-honesty",
        2,
        composite_misflags as f64,
        0.5,
    ));

    // Gauss-sum oracle: exhaustive label grid for every dimension <= 13
    let mut oracle = 0.0f64;
    let mut oracle_cells = 0usize;
    for d in 2..=13usize {
        let states: Vec<Vec<_>> = (0..d)
            .map(|p| {
                (0..d)
                    .map(|m| mub_state_finite(d, p, m).unwrap())
                    .collect()
            })
            .collect();
        for p in 0..d {
            for m in 0..d {
                for pp in 0..d {
                    for mp in 0..d {
                        let direct = overlap(&states[p][m], &states[pp][mp]).unwrap();
                        let via = overlap_via_gauss_finite(d, p, m, pp, mp).unwrap();
                        oracle = oracle.max((direct - via).norm());
                        oracle_cells += 1;
                    }
                }
            }
        }
    }
    out.push(CheckResult::new(
        "mub/gauss-overlap-oracle",
        oracle_cells,
        oracle,
        tol.matrix,
    ));

    // |S(u, v, w)| = sqrt(w) for prime w, u coprime, uw + v even
    let mut magnitude = 0.0f64;
    let mut magnitude_cells = 0usize;
    for w in PRIMES {
        let w = w as i64;
        for u in 1..(2 * w) {
            if u % w == 0 {
                continue;
            }
            for v in -4..=4i64 {
                if (u * w + v) % 2 != 0 {
                    continue;
                }
                let s = gauss_sum(GaussSumParams::new(u, v, w).unwrap());
                magnitude = magnitude.max((s.norm() - (w as f64).sqrt()).abs());
                magnitude_cells += 1;
            }
        }
    }
    out.push(CheckResult::new(
        "mub/gauss-magnitude-prime",
        magnitude_cells,
        magnitude,
        tol.composite,
    ));

    let mut pseudo = 0.0f64;
    let mut pseudo_cells = 0usize;
    for d in 2..=8usize {
        for p in 0..d {
            pseudo = pseudo.max(pseudo_commutation_check(d, p).unwrap().max_residual());
            pseudo_cells += 1;
        }
    }
    out.push(CheckResult::new(
        "mub/pseudo-commutation",
        pseudo_cells,
        pseudo,
        tol.matrix,
    ));
}

fn potential_checks(tol: &Tolerances, out: &mut Vec<CheckResult>) {
    // spectrum link e_n = b F(n) and Gamma-form weights
    let mut link = 0.0f64;
    let mut gamma = 0.0f64;
    let mut cells = 0usize;
    let mut specs: Vec<(PotentialSpec, usize)> =
        vec![(PotentialSpec::HarmonicOscillator, 20usize)];
    for u in 2..=5u32 {
        for v in 2..=5u32 {
            specs.push((
                PotentialSpec::PoschlTeller {
                    u: u as f64,
                    v: v as f64,
                },
                15,
            ));
        }
    }
    for l in 1..=10u32 {
        specs.push((PotentialSpec::Morse { l }, l as usize));
    }
    for (spec, n_max) in &specs {
        let params = to_spectrum_params(spec).unwrap();
        link = link.max(params.spectrum_link_residual(*n_max));
        let (_, check) = weight_table(spec, *n_max).unwrap();
        gamma = gamma.max(check.max_rel_err);
        cells += 1;
    }
    out.push(CheckResult::new(
        "potentials/spectrum-link",
        cells,
        link,
        tol.matrix,
    ));
    out.push(CheckResult::new(
        "potentials/gamma-weights",
        cells,
        gamma,
        tol.composite,
    ));

    // Morse truncation order and level distinctness
    let mut truncation_mismatches = 0usize;
    let mut collisions = 0usize;
    for l in 1..=10u32 {
        let params = to_spectrum_params(&PotentialSpec::Morse { l }).unwrap();
        if params.n_range != Dimension::Finite(l as usize + 1) {
            truncation_mismatches += 1;
        }
        let energies = params.energies(l as usize + 1).unwrap();
        for i in 0..energies.len() {
            for j in (i + 1)..energies.len() {
                if (energies[i] - energies[j]).abs() < 1e-9 {
                    collisions += 1;
                }
            }
        }
    }
    out.push(CheckResult::new(
        "potentials/morse-truncation-order",
        10,
        truncation_mismatches as f64,
        0.5,
    ));
    out.push(CheckResult::new(
        "potentials/morse-levels-distinct",
        10,
        collisions as f64,
        0.5,
    ));

    // temporal stability of both physical families
    let mut stability = 0.0f64;
    let mut stability_cells = 0usize;
    for (spec, s) in potential_cells() {
        for phi in PHIS {
            let states = physical_phase_states(&spec, s, phi).unwrap();
            for t in TIMES {
                let rebuilt = physical_phase_states(&spec, s, phi + t).unwrap();
                for (st, rb) in states.fourier.iter().zip(rebuilt.fourier.iter()) {
                    stability = stability.max(evolve(st, t).max_diff(rb));
                }
                for (st, rb) in states.discrete.iter().zip(rebuilt.discrete.iter()) {
                    stability = stability.max(evolve(st, t).max_diff(rb));
                }
                stability_cells += 1;
            }
        }
    }
    out.push(CheckResult::new(
        "potentials/temporal-stability",
        stability_cells,
        stability,
        tol.matrix,
    ));

    // hand-off: Fourier states at the quantized physical phi coincide with
    // the truncated basis route up to a global phase
    let mut handoff = 0.0f64;
    let mut handoff_cells = 0usize;
    let handoff_specs = [
        (PotentialSpec::Morse { l: 2 }, 3usize),
        (PotentialSpec::Morse { l: 4 }, 5),
        (PotentialSpec::PoschlTeller { u: 2.0, v: 2.0 }, 4),
    ];
    for (spec, s) in handoff_specs {
        let params = to_spectrum_params(&spec).unwrap();
        let kappa = params.kappa_exact.unwrap();
        for p in 0..s {
            let phi = quantize_phi_physical(&params, s, p).unwrap();
            let states = physical_phase_states(&spec, s, phi).unwrap();
            for m in 0..s {
                let expected = mub_state_truncated(kappa, s, p, m).unwrap();
                handoff = handoff.max(states.fourier[m].global_phase_distance(&expected));
            }
            handoff_cells += 1;
        }
    }
    out.push(CheckResult::new(
        "potentials/basis-handoff",
        handoff_cells,
        handoff,
        tol.matrix,
    ));
}

/// Run every invariant over the default grid.
pub fn run_default_grid(tol: &Tolerances) -> Vec<CheckResult> {
    let mut out = Vec::new();
    algebra_checks(tol, &mut out);
    phase_operator_checks(tol, &mut out);
    phase_state_checks(tol, &mut out);
    vs_checks(tol, &mut out);
    cutoff_checks(tol, &mut out);
    mub_checks(tol, &mut out);
    potential_checks(tol, &mut out);
    out
}

/// Convenience: true iff every check passed.
pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_is_green() {
        let results = run_default_grid(&Tolerances::default());
        for r in &results {
            assert!(
                r.passed,
                "{} failed: residual {} > {}",
                r.name, r.max_residual, r.tolerance
            );
        }
        assert!(results.len() > 25);
    }
}
