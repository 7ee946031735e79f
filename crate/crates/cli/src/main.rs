//! `sicd`: search for SIC fiducials, certify state-set files as projective
//! t-designs, and print the bound tables and birank reports around them.
//!
//! Exit codes: 0 the check passed (or the report was printed), 1 a
//! certification or search came back negative, 2 usage, parse, or resource
//! errors. Codes depend only on inputs and flags.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::{env, fs};

use clap::{Parser, Subcommand};
use serde::Serialize;

use sicd_cli::format::{self, Metadata};
use sicd_cli::registry::Registry;
use sicd_core::{
    birank, certify_with_cap, length_lower_bound, orbit, partial_transpose,
    rho2_gamma_closed_form, rho_t_with_cap, search, tight_bound, DesignReport, SearchConfig,
    Subsystem, Tolerance, DEFAULT_SIZE_CAP,
};

/// Overrides the matrix-size cap (largest allowed total dimension).
const SIZE_CAP_ENV: &str = "SICD_SIZE_CAP";

#[derive(Parser)]
#[command(
    name = "sicd",
    version,
    about = "Search, certify, and tabulate SIC-POVMs and projective t-designs"
)]
struct Cli {
    /// Emit one machine-readable JSON document (floats carry 17
    /// significant digits) instead of the human table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a state-set file as a projective t-design.
    Verify {
        /// State-set file to check.
        path: PathBuf,
        /// Design strength to certify.
        #[arg(long, default_value_t = 2)]
        t: u32,
        /// Additionally require the SIC overlap condition to pass.
        #[arg(long)]
        sic: bool,
        /// Frobenius-defect threshold for the design identity.
        #[arg(long)]
        eps: Option<f64>,
        /// Relative eigenvalue cutoff for numerical ranks.
        #[arg(long)]
        rank_eps: Option<f64>,
    },
    /// Search for a SIC fiducial and write its Weyl-Heisenberg orbit.
    Search {
        #[arg(short = 'd', long)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        /// Orbit file to write; defaults to sic_d<dim>.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print tight-design point bounds with known-results annotations.
    Bounds {
        /// Dimension or inclusive range, e.g. 3 or 2..7.
        #[arg(short = 'd', long, value_parser = parse_range)]
        dim: Range,
        /// Strength or inclusive range, e.g. 2 or 1..3.
        #[arg(long, value_parser = parse_range, default_value = "1..3")]
        t: Range,
    },
    /// Birank and length bound of the symmetrized two-copy state rho_2.
    Birank {
        #[arg(short = 'd', long)]
        dim: usize,
        /// Relative eigenvalue cutoff for numerical ranks.
        #[arg(long)]
        rank_eps: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy)]
struct Range {
    lo: usize,
    hi: usize,
}

fn parse_range(s: &str) -> Result<Range, String> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| format!("bad range bound {lo:?}"))?;
    let hi: usize = hi.trim().parse().map_err(|_| format!("bad range bound {hi:?}"))?;
    if lo == 0 || hi < lo {
        return Err(format!("range {s:?} is empty"));
    }
    Ok(Range { lo, hi })
}

fn size_cap() -> Result<usize, String> {
    match env::var(SIZE_CAP_ENV) {
        Ok(text) => text
            .parse::<usize>()
            .ok()
            .filter(|&cap| cap >= 1)
            .ok_or(format!("{SIZE_CAP_ENV} must be a positive integer, got {text:?}")),
        Err(env::VarError::NotPresent) => Ok(DEFAULT_SIZE_CAP),
        Err(e) => Err(format!("{SIZE_CAP_ENV}: {e}")),
    }
}

fn tolerance(eps: Option<f64>, rank_eps: Option<f64>) -> Result<Tolerance, String> {
    let base = Tolerance::default();
    Tolerance::new(
        eps.unwrap_or(base.verify_eps),
        rank_eps.unwrap_or(base.rank_rel_eps),
    )
    .map_err(|e| e.to_string())
}

/// Human-mode float: 6 significant digits.
fn human(x: f64) -> String {
    format!("{x:.5e}")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((code, output)) => {
            // A consumer that closed the pipe early (e.g. `head`) is not an
            // error; the code is already fixed by the inputs and flags.
            use std::io::Write;
            let mut stdout = std::io::stdout();
            let _ = stdout.write_all(output.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(code)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(u8, String), String> {
    match cli.command {
        Command::Verify {
            path,
            t,
            sic,
            eps,
            rank_eps,
        } => cmd_verify(&path, t, sic, tolerance(eps, rank_eps)?, cli.json),
        Command::Search {
            dim,
            seed,
            restarts,
            out,
        } => cmd_search(dim, seed, restarts, out, cli.json),
        Command::Bounds { dim, t } => cmd_bounds(dim, t, cli.json),
        Command::Birank { dim, rank_eps } => {
            cmd_birank(dim, tolerance(None, rank_eps)?, cli.json)
        }
    }
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    command: &'static str,
    path: String,
    renormalized_states: usize,
    pass: bool,
    report: &'a DesignReport,
}

fn cmd_verify(
    path: &PathBuf,
    t: u32,
    sic: bool,
    tol: Tolerance,
    json: bool,
) -> Result<(u8, String), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let outcome =
        format::read_state_set(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let report = certify_with_cap(&outcome.set, t, &tol, size_cap()?)
        .map_err(|e| e.to_string())?;
    let pass = report.is_t_design && (!sic || report.is_sic == Some(true));

    let mut out = String::new();
    if json {
        let _ = writeln!(
            out,
            "{}",
            format::machine_json(&VerifyDoc {
                command: "verify",
                path: path.display().to_string(),
                renormalized_states: outcome.renormalized,
                pass,
                report: &report,
            })
        );
    } else {
        let _ = writeln!(out, "state set           {}", path.display());
        let _ = writeln!(out, "dim                 {}", report.dim);
        let _ = writeln!(
            out,
            "points              {} (renormalized on read: {})",
            report.n_points, outcome.renormalized
        );
        let _ = writeln!(out, "t                   {t}");
        let _ = writeln!(out, "frame potential     {}", human(report.frame_potential));
        let _ = writeln!(out, "fp lower bound      {}", human(report.fp_lower_bound));
        let _ = writeln!(out, "design residual     {}", human(report.residual_frobenius));
        let _ = writeln!(out, "t-design            {}", report.is_t_design);
        let _ = writeln!(out, "tight               {}", report.is_tight);
        match report.is_sic {
            Some(flag) => {
                let _ = writeln!(out, "sic                 {flag}");
            }
            None => {
                let _ = writeln!(out, "sic                 not applicable");
            }
        }
        let _ = writeln!(
            out,
            "max overlap dev     {}",
            human(report.max_overlap_deviation)
        );
        let _ = writeln!(out, "verdict             {}", if pass { "PASS" } else { "FAIL" });
    }
    Ok((if pass { 0 } else { 1 }, out))
}

#[derive(Serialize)]
struct SearchDoc {
    command: &'static str,
    dim: usize,
    seed: u64,
    restarts_used: usize,
    iterations_total: usize,
    objective: f64,
    sic_deviation: f64,
    converged: bool,
    out: String,
}

fn cmd_search(
    dim: usize,
    seed: u64,
    restarts: usize,
    out: Option<PathBuf>,
    json: bool,
) -> Result<(u8, String), String> {
    let mut cfg = SearchConfig::new(dim, seed);
    cfg.max_restarts = restarts;
    let result = search(&cfg).map_err(|e| e.to_string())?;

    let orb = orbit(&result.fiducial);
    let metadata = Metadata {
        generator: Some("sicd search (Weyl-Heisenberg orbit of best fiducial)".into()),
        seed: Some(seed),
        converged: Some(result.converged),
        sic_deviation: Some(result.sic_deviation),
    };
    let out = out.unwrap_or_else(|| PathBuf::from(format!("sic_d{dim}.json")));
    fs::write(&out, format::write_string(&format::to_file(&orb, Some(metadata))))
        .map_err(|e| format!("{}: {e}", out.display()))?;

    let mut text = String::new();
    if json {
        let _ = writeln!(
            text,
            "{}",
            format::machine_json(&SearchDoc {
                command: "search",
                dim,
                seed,
                restarts_used: result.restarts_used,
                iterations_total: result.iterations_total,
                objective: result.objective,
                sic_deviation: result.sic_deviation,
                converged: result.converged,
                out: out.display().to_string(),
            })
        );
    } else {
        let _ = writeln!(
            text,
            "search d={dim} seed={seed}: {} after {} restarts, {} iterations",
            if result.converged { "converged" } else { "did not converge" },
            result.restarts_used,
            result.iterations_total
        );
        let _ = writeln!(text, "objective           {}", human(result.objective));
        let _ = writeln!(text, "orbit deviation     {}", human(result.sic_deviation));
        let _ = writeln!(text, "orbit written to    {}", out.display());
    }
    Ok((if result.converged { 0 } else { 1 }, text))
}

#[derive(Serialize)]
struct BoundsRow {
    dim: usize,
    t: u32,
    tight_bound: u64,
    annotation: &'static str,
}

#[derive(Serialize)]
struct BoundsDoc {
    command: &'static str,
    rows: Vec<BoundsRow>,
}

fn cmd_bounds(dims: Range, ts: Range, json: bool) -> Result<(u8, String), String> {
    let registry = Registry::bundled();
    let mut rows = Vec::new();
    for dim in dims.lo..=dims.hi {
        for t in ts.lo..=ts.hi {
            let bound = tight_bound(dim, t as u32).map_err(|e| e.to_string())?;
            let bound = u64::try_from(bound)
                .map_err(|_| format!("bound for d={dim}, t={t} exceeds the table range"))?;
            rows.push(BoundsRow {
                dim,
                t: t as u32,
                tight_bound: bound,
                annotation: registry.annotation(dim, t as u32),
            });
        }
    }

    let mut out = String::new();
    if json {
        let _ = writeln!(
            out,
            "{}",
            format::machine_json(&BoundsDoc {
                command: "bounds",
                rows,
            })
        );
    } else {
        let _ = writeln!(out, "{:>4} {:>3} {:>12}  annotation", "d", "t", "tight bound");
        for row in &rows {
            let _ = writeln!(
                out,
                "{:>4} {:>3} {:>12}  {}",
                row.dim, row.t, row.tight_bound, row.annotation
            );
        }
    }
    Ok((0, out))
}

#[derive(Serialize)]
struct BirankDoc {
    command: &'static str,
    dim: usize,
    rank: usize,
    rank_gamma: usize,
    cross_validation_residual: f64,
    length_lower_bound: usize,
}

fn cmd_birank(dim: usize, tol: Tolerance, json: bool) -> Result<(u8, String), String> {
    if dim < 2 {
        return Err(format!("birank needs d >= 2, got {dim}"));
    }
    let rho = rho_t_with_cap(dim, 2, size_cap()?).map_err(|e| e.to_string())?;
    let b = birank(&rho, &tol).map_err(|e| e.to_string())?;
    let gamma = partial_transpose(&rho, Subsystem::A).map_err(|e| e.to_string())?;
    let residual = (&gamma - &rho2_gamma_closed_form(dim)).frobenius_norm();
    let bound = length_lower_bound(&rho, &tol).map_err(|e| e.to_string())?;

    let mut out = String::new();
    if json {
        let _ = writeln!(
            out,
            "{}",
            format::machine_json(&BirankDoc {
                command: "birank",
                dim,
                rank: b.r,
                rank_gamma: b.r_gamma,
                cross_validation_residual: residual,
                length_lower_bound: bound,
            })
        );
    } else {
        let _ = writeln!(out, "rho_2 for d = {dim}");
        let _ = writeln!(out, "birank              ({}, {})", b.r, b.r_gamma);
        let _ = writeln!(out, "closed-form resid   {}", human(residual));
        let _ = writeln!(out, "length lower bound  {bound}");
    }
    Ok((0, out))
}
