//! Command-line front end: representations, phase states, MUB sets, Gauss
//! sums, potential reports, and the full verification suite.
//!
//! Exit codes: 0 success, 1 verification over tolerance, 2 invalid
//! configuration or unrepresentable parameters.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use phasekit::mub::{build_mub_set, gauss_sum, GaussSumParams, MubRoute};
use phasekit::phase::{build_vs_us, build_weights, phase_states, vs_phase_states};
use phasekit::potentials::{physical_phase_states, potential_report, PotentialSpec};
use phasekit::verify::{all_passed, run_default_grid};
use phasekit::{commutator_residual, KappaParam, Representation, Tolerances};

#[derive(Parser)]
#[command(name = "phasekit", version)]
#[command(about = "Generalized oscillator algebras, phase operators, temporally stable \
                   phase states, and mutually unbiased bases as explicit matrices")]
#[command(after_help = "The PHASEKIT_TOLERANCE environment variable overrides the default \
                        1e-12 (matrix) / 1e-10 (composite) tolerance pair for `verify`: \
                        either a single value (composite scales by 100) or `matrix,composite`.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Build the ladder, number, and Hamiltonian matrices of a representation
    Rep {
        /// kappa as a rational, e.g. "-1/3" or "0"
        #[arg(long)]
        kappa: String,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// matrix size: d (finite), s (truncated), or n_max+1 (open top)
        #[arg(long)]
        size: usize,
        /// build the s-level truncated algebra
        #[arg(long, conflicts_with = "open_top")]
        truncated: bool,
        /// build the open-top infinite-regime cutoff (kappa >= 0)
        #[arg(long)]
        open_top: bool,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Emit the |m, phi> eigenstate family of the phase operator
    Phases {
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// emit a single member instead of the whole family
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Emit the weighted |mu, phi> eigenstates of V_s and the (U_s, V_s) pair
    VsStates {
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// emit a single member instead of the whole family
        #[arg(long)]
        mu: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Build a family of bases plus the computational one and verify overlaps
    Mub {
        /// "finite" (needs --dim) or "truncated" (needs --kappa and --s)
        #[arg(long)]
        route: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long)]
        s: Option<usize>,
        /// restrict output to one basis label
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate the generalized quadratic Gauss sum S(u, v, w)
    Gauss {
        #[arg(long)]
        u: i64,
        #[arg(long)]
        v: i64,
        #[arg(long)]
        w: i64,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Report a solvable system: spectrum, weights, Gamma cross-check
    Potential {
        /// "ho", "pt:u=2,v=3", or "morse:l=4"
        #[arg(long)]
        spec: String,
        /// level count (defaults to the truncation order or the cutoff 32)
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// include both temporally stable state families at phi
        #[arg(long)]
        states: bool,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run the complete invariant suite over the built-in grid
    Verify {
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn emit(text: &str, output: &Option<PathBuf>) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn invalid(msg: &str) -> phasekit::Error {
    phasekit::Error::InvalidParameter(msg.to_string())
}

fn io_err(e: std::io::Error) -> phasekit::Error {
    phasekit::Error::InvalidParameter(format!("io: {e}"))
}

fn run_rep(
    kappa: &str,
    phi: f64,
    size: usize,
    truncated: bool,
    open_top: bool,
    output: &Option<PathBuf>,
    format: Format,
) -> Result<(), phasekit::Error> {
    let kappa: KappaParam = kappa.parse()?;
    let rep = if open_top {
        if size == 0 {
            return Err(invalid("size must be positive"));
        }
        Representation::infinite_cutoff(kappa, phi, size - 1)?
    } else {
        Representation::build_representation(kappa, phi, size, truncated)?
    };
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(&rep.to_json()).expect("serializable");
            emit(&text, output).map_err(io_err)?;
        }
        Format::Pretty => {
            let report = commutator_residual(&rep);
            let text = format!(
                "representation kappa={} dim={} phi={} kind={:?}\n\
                 commutator residual: {:.3e}\n\
                 trace magnitude:     {:.3e}\n\
                 adjointness:         {:.3e}",
                rep.kappa(),
                rep.dim(),
                rep.phi(),
                rep.kind(),
                report.residual,
                report.trace_magnitude,
                rep.adjointness_residual(),
            );
            emit(&text, output).map_err(io_err)?;
        }
        Format::Csv => return Err(invalid("csv is only available for `mub`")),
    }
    Ok(())
}

fn run_phases(
    kappa: &str,
    dim: usize,
    phi: f64,
    m: Option<usize>,
    output: &Option<PathBuf>,
    format: Format,
) -> Result<(), phasekit::Error> {
    let kappa: KappaParam = kappa.parse()?;
    let states = phase_states(dim, kappa, phi)?;
    if let Some(m) = m {
        if m >= dim {
            return Err(invalid(&format!("m = {m} outside 0..{dim}")));
        }
    }
    let selected: Vec<_> = match m {
        Some(m) => vec![&states[m]],
        None => states.iter().collect(),
    };
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "kappa": {"num": kappa.numerator(), "den": kappa.denominator()},
                "dim": dim,
                "phi": phi,
                "states": selected.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            });
            emit(
                &serde_json::to_string_pretty(&value).expect("serializable"),
                output,
            )
            .map_err(io_err)?;
        }
        Format::Pretty => {
            let mut text = format!("phase states kappa={kappa} dim={dim} phi={phi}\n");
            for st in &selected {
                text.push_str(&format!("{:?}  norm={:.12}\n", st.label, st.norm()));
            }
            emit(text.trim_end(), output).map_err(io_err)?;
        }
        Format::Csv => return Err(invalid("csv is only available for `mub`")),
    }
    Ok(())
}

fn run_vs_states(
    kappa: &str,
    s: usize,
    phi: f64,
    mu: Option<usize>,
    output: &Option<PathBuf>,
    format: Format,
) -> Result<(), phasekit::Error> {
    let kappa: KappaParam = kappa.parse()?;
    let rep = Representation::truncated(kappa, phi, s)?;
    let weights = build_weights(kappa, s)?;
    let pair = build_vs_us(&rep)?;
    let states = vs_phase_states(&rep, &weights)?;
    if let Some(mu) = mu {
        if mu >= s {
            return Err(invalid(&format!("mu = {mu} outside 0..{s}")));
        }
    }
    let selected: Vec<_> = match mu {
        Some(mu) => vec![&states[mu]],
        None => states.iter().collect(),
    };
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "kappa": {"num": kappa.numerator(), "den": kappa.denominator()},
                "s": s,
                "phi": phi,
                "c0": weights.c0(),
                "weights": weights.values(),
                "nonunitarity_witness": pair.nonunitarity_witness(),
                "states": selected.iter().map(|st| st.to_json()).collect::<Vec<_>>(),
            });
            emit(
                &serde_json::to_string_pretty(&value).expect("serializable"),
                output,
            )
            .map_err(io_err)?;
        }
        Format::Pretty => {
            let mut text = format!(
                "V_s eigenstates kappa={kappa} s={s} phi={phi} C_0={:.12}\n\
                 nonunitarity witness ||V^dag V - I|| = {:.6}\n",
                weights.c0(),
                pair.nonunitarity_witness()
            );
            for st in &selected {
                text.push_str(&format!("{:?}  norm={:.12}\n", st.label, st.norm()));
            }
            emit(text.trim_end(), output).map_err(io_err)?;
        }
        Format::Csv => return Err(invalid("csv is only available for `mub`")),
    }
    Ok(())
}

fn run_mub(
    route: &str,
    dim: Option<usize>,
    kappa: Option<&str>,
    s: Option<usize>,
    p: Option<usize>,
    output: &Option<PathBuf>,
    format: Format,
) -> Result<(), phasekit::Error> {
    let route = match route {
        "finite" => {
            let d = dim.ok_or_else(|| invalid("route finite needs --dim"))?;
            if kappa.is_some() || s.is_some() {
                return Err(invalid("route finite takes --dim only"));
            }
            MubRoute::Finite { d }
        }
        "truncated" => {
            let kappa: KappaParam = kappa
                .ok_or_else(|| invalid("route truncated needs --kappa"))?
                .parse()?;
            let s = s.ok_or_else(|| invalid("route truncated needs --s"))?;
            if dim.is_some() {
                return Err(invalid("route truncated takes --kappa and --s, not --dim"));
            }
            MubRoute::Truncated { kappa, s }
        }
        other => return Err(invalid(&format!("unknown route {other:?}"))),
    };
    let set = build_mub_set(route)?;
    if let Some(p) = p {
        if p > set.dim {
            return Err(invalid(&format!("p = {p} outside 0..={}", set.dim)));
        }
    }
    match format {
        Format::Json => {
            let mut value = set.to_json();
            if let Some(p) = p {
                let bases = value["bases"].as_array().unwrap();
                value["bases"] = serde_json::Value::Array(vec![bases[p].clone()]);
            }
            emit(
                &serde_json::to_string_pretty(&value).expect("serializable"),
                output,
            )
            .map_err(io_err)?;
        }
        Format::Csv => {
            emit(&set.to_csv(), output).map_err(io_err)?;
        }
        Format::Pretty => {
            let target = 1.0 / (set.dim as f64).sqrt();
            let mut text = format!(
                "{} bases over dimension {} (prime: {}, complete: {})\n\
                 target cross modulus 1/sqrt(dim) = {:.12}\n",
                set.len(),
                set.dim,
                set.prime,
                set.complete,
                target
            );
            for pair in &set.overlap_report {
                text.push_str(&format!(
                    "B_{} x B_{}: |overlap| in [{:.12}, {:.12}]\n",
                    pair.p, pair.p_prime, pair.min, pair.max
                ));
            }
            emit(text.trim_end(), output).map_err(io_err)?;
        }
    }
    Ok(())
}

fn run_gauss(u: i64, v: i64, w: i64, format: Format) -> Result<(), phasekit::Error> {
    let params = GaussSumParams::new(u, v, w)?;
    let value = gauss_sum(params);
    match format {
        Format::Json => {
            let payload = serde_json::json!({
                "u": u, "v": v, "w": w,
                "re": value.re,
                "im": value.im,
                "modulus": value.norm(),
                "parity_even": params.parity_even(),
            });
            emit(
                &serde_json::to_string_pretty(&payload).expect("serializable"),
                &None,
            )
            .map_err(io_err)?;
        }
        Format::Pretty => {
            let sign = if value.im < 0.0 { '-' } else { '+' };
            println!(
                "S({u}, {v}, {w}) = {} {} {}i  (modulus {}, parity {})",
                value.re,
                sign,
                value.im.abs(),
                value.norm(),
                if params.parity_even() { "even" } else { "odd" },
            );
        }
        Format::Csv => return Err(invalid("csv is only available for `mub`")),
    }
    Ok(())
}

fn run_potential(
    spec: &str,
    s: Option<usize>,
    phi: f64,
    states: bool,
    output: &Option<PathBuf>,
    format: Format,
) -> Result<(), phasekit::Error> {
    let spec: PotentialSpec = spec.parse()?;
    let mut report = potential_report(&spec, s)?;
    if states {
        let count = report["s"].as_u64().unwrap() as usize;
        let families = physical_phase_states(&spec, count, phi)?;
        report["phi"] = serde_json::json!(phi);
        report["fourier_states"] =
            serde_json::Value::Array(families.fourier.iter().map(|st| st.to_json()).collect());
        report["discrete_states"] =
            serde_json::Value::Array(families.discrete.iter().map(|st| st.to_json()).collect());
    }
    match format {
        Format::Json => emit(
            &serde_json::to_string_pretty(&report).expect("serializable"),
            output,
        )
        .map_err(io_err)?,
        Format::Pretty => {
            let text = format!(
                "{}  a={} b={} s={}\n\
                 energies: {}\n\
                 weights:  {}\n\
                 gamma-form max relative deviation: {:.3e}",
                report["variant"].as_str().unwrap(),
                report["a"],
                report["b"],
                report["s"],
                report["energies"],
                report["weights"],
                report["gamma_check"]["max_rel_err"].as_f64().unwrap(),
            );
            emit(&text, output).map_err(io_err)?;
        }
        Format::Csv => return Err(invalid("csv is only available for `mub`")),
    }
    Ok(())
}

fn run_verify(format: Format, output: &Option<PathBuf>) -> Result<bool, phasekit::Error> {
    let tolerances = Tolerances::from_env();
    let results = run_default_grid(&tolerances);
    let passed = all_passed(&results);
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "tolerances": {"matrix": tolerances.matrix, "composite": tolerances.composite},
                "passed": passed,
                "checks": results,
            });
            emit(
                &serde_json::to_string_pretty(&value).expect("serializable"),
                output,
            )
            .map_err(io_err)?;
        }
        Format::Pretty => {
            let mut text = format!(
                "verification grid (matrix tol {:.1e}, composite tol {:.1e})\n\n",
                tolerances.matrix, tolerances.composite
            );
            text.push_str(&format!(
                "{:<46} {:>8} {:>13} {:>9} {:>6}\n",
                "check", "cells", "max residual", "tol", "status"
            ));
            for r in &results {
                text.push_str(&format!(
                    "{:<46} {:>8} {:>13.3e} {:>9.1e} {:>6}\n",
                    r.name,
                    r.cells,
                    r.max_residual,
                    r.tolerance,
                    if r.passed { "PASS" } else { "FAIL" }
                ));
            }
            let ok = results.iter().filter(|r| r.passed).count();
            text.push_str(&format!(
                "\nverification: {} ({ok}/{} checks within tolerance)",
                if passed { "PASS" } else { "FAIL" },
                results.len()
            ));
            emit(&text, output).map_err(io_err)?;
        }
        Format::Csv => return Err(invalid("csv is only available for `mub`")),
    }
    Ok(passed)
}

fn dispatch(cli: Cli) -> Result<ExitCode, phasekit::Error> {
    match cli.command {
        Command::Rep {
            kappa,
            phi,
            size,
            truncated,
            open_top,
            output,
            format,
        } => {
            run_rep(&kappa, phi, size, truncated, open_top, &output, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Phases {
            kappa,
            dim,
            phi,
            m,
            output,
            format,
        } => {
            run_phases(&kappa, dim, phi, m, &output, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VsStates {
            kappa,
            s,
            phi,
            mu,
            output,
            format,
        } => {
            run_vs_states(&kappa, s, phi, mu, &output, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Mub {
            route,
            dim,
            kappa,
            s,
            p,
            output,
            format,
        } => {
            run_mub(&route, dim, kappa.as_deref(), s, p, &output, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Gauss { u, v, w, format } => {
            run_gauss(u, v, w, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Potential {
            spec,
            s,
            phi,
            states,
            output,
            format,
        } => {
            run_potential(&spec, s, phi, states, &output, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { format, output } => {
            let passed = run_verify(format, &output)?;
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
