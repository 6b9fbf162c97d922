use std::path::PathBuf;
use std::str::FromStr;

use clap::Subcommand;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use ncg_core::fuzzy_berezin::{berezin_kernel, berezin_kernel_closed_form, fuzzy_sphere, kernel_integral};
use ncg_core::numeric::{c, CMat, I};
use ncg_core::qmetric::{gh_upper_bound, LipConstraintSample};
use ncg_core::su2_reps::{sphere_quadrature, SpinRep};

use super::{fmt_f64, Sizes};
use crate::{emit, CliError, CliResult, Format, Report};

/// Which matrices enter the defect maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSpec {
    /// Random Hermitian probes added to the three coordinates.
    pub random: usize,
}

impl FromStr for ProbeSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(":") {
            None if s == "coords" => Ok(ProbeSpec { random: 0 }),
            Some(("coords+random", k)) => k
                .parse()
                .map(|random| ProbeSpec { random })
                .map_err(|_| format!("bad probe count `{k}`")),
            _ => Err(format!("unknown probe set `{s}` (expected coords or coords+random:K)")),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum FuzzyCommand {
    /// Residuals of the sphere relations and Berezin kernel identities.
    Table {
        /// Comma-separated matrix sizes.
        #[arg(long, default_value = "2,3,4,8,16")]
        n: Sizes,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// γ_n, the sampled Berezin defect, and their sum.
    Gamma {
        /// Comma-separated matrix sizes.
        #[arg(long)]
        n: Sizes,
        /// Quadrature level; defaults to max(16, n) per size.
        #[arg(long)]
        level: Option<usize>,
        /// Group sample density for Lip-norms.
        #[arg(long, default_value_t = 8)]
        density: usize,
        /// coords, or coords+random:K for K extra random Hermitian probes.
        #[arg(long, default_value = "coords")]
        probes: ProbeSpec,
        /// Seed for the random probes.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Also write a line chart of γ_n and the bound.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Logarithmic axes for the chart.
        #[arg(long)]
        log: bool,
    },
}

impl FuzzyCommand {
    pub(crate) fn run(self) -> CliResult<Report> {
        match self {
            FuzzyCommand::Table { n, format } => table(&n.0, format),
            FuzzyCommand::Gamma {
                n,
                level,
                density,
                probes,
                seed,
                format,
                svg,
                log,
            } => {
                let rows = gamma_rows(&n.0, level, density, &probes, seed)?;
                if let Some(path) = svg {
                    let gamma: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.gamma)).collect();
                    let bound: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.bound)).collect();
                    let chart = crate::svg::line_chart("n", &[("gamma", &gamma), ("gh_bound", &bound)], log);
                    emit(Some(&path), &chart)?;
                }
                Ok(Report::ok(format_gamma(&rows, format)))
            }
        }
    }
}

fn check_sizes(ns: &[usize]) -> CliResult<()> {
    if ns.is_empty() {
        return Err(CliError::Argument("--n needs at least one size".into()));
    }
    if let Some(bad) = ns.iter().find(|&&n| n < 2) {
        return Err(CliError::Argument(format!("matrix size {bad} is below 2")));
    }
    Ok(())
}

fn table(ns: &[usize], format: Format) -> CliResult<Report> {
    check_sizes(ns)?;
    let mut rows = Vec::new();
    for &n in ns {
        let fs = fuzzy_sphere(n)?;
        let quad = sphere_quadrature(n.max(16))?;
        let integral = kernel_integral(fs.rep(), &quad)?;
        let closed = quad
            .polar_angles()
            .iter()
            .map(|&t| Ok((berezin_kernel(fs.rep(), t)? - berezin_kernel_closed_form(n, t)).abs()))
            .collect::<ncg_core::Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        rows.push([
            fs.radius_residual(),
            fs.commutator_residual(),
            (integral - 1.0).abs(),
            closed,
        ]);
    }
    let names = ["radius_residual", "commutator_residual", "kernel_integral_error", "kernel_closed_form_error"];
    let text = match format {
        Format::Csv => {
            let mut out = format!("n,{}\n", names.join(","));
            for (n, row) in ns.iter().zip(&rows) {
                let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
                out.push_str(&format!("{n},{}\n", cells.join(",")));
            }
            out
        }
        Format::Json => {
            let items: Vec<_> = ns
                .iter()
                .zip(&rows)
                .map(|(n, row)| {
                    let mut obj = serde_json::Map::new();
                    obj.insert("n".into(), json!(n));
                    for (name, v) in names.iter().zip(row) {
                        obj.insert((*name).into(), json!(v));
                    }
                    serde_json::Value::Object(obj)
                })
                .collect();
            super::json_text(&json!(items))
        }
    };
    Ok(Report::ok(text))
}

#[derive(Debug, Clone)]
struct GammaRow {
    n: usize,
    gamma: f64,
    defect_max: f64,
    bound: f64,
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> CMat {
    let m = CMat::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0)) + I * rng.random_range(-1.0..1.0));
    (&m + m.adjoint()) * c(0.5)
}

fn probes_for(rep: &SpinRep, spec: &ProbeSpec, rng: &mut ChaCha8Rng) -> ncg_core::Result<Vec<CMat>> {
    let fs = fuzzy_sphere(rep.dim())?;
    let mut probes: Vec<CMat> = fs.coordinates().to_vec();
    for _ in 0..spec.random {
        probes.push(random_hermitian(rng, rep.dim()));
    }
    Ok(probes)
}

fn gamma_rows(ns: &[usize], level: Option<usize>, density: usize, spec: &ProbeSpec, seed: u64) -> CliResult<Vec<GammaRow>> {
    check_sizes(ns)?;
    if let Some(l) = level {
        if let Some(&n) = ns.iter().find(|&&n| l < n) {
            return Err(CliError::Argument(format!("--level {l} is below the matrix size {n}")));
        }
    }
    let sample = LipConstraintSample::with_density(density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &n in ns {
        let fs = fuzzy_sphere(n)?;
        let probes = probes_for(fs.rep(), spec, &mut rng)?;
        let est = gh_upper_bound(fs.rep(), &probes, &sample, level.unwrap_or(n.max(16)))?;
        rows.push(GammaRow {
            n,
            gamma: est.gamma,
            defect_max: est.defect_max,
            bound: est.bound,
        });
    }
    Ok(rows)
}

fn format_gamma(rows: &[GammaRow], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("n,gamma,defect_max,gh_bound\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.n,
                    fmt_f64(r.gamma),
                    fmt_f64(r.defect_max),
                    fmt_f64(r.bound)
                ));
            }
            out
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|r| json!({"n": r.n, "gamma": r.gamma, "defect_max": r.defect_max, "gh_bound": r.bound}))
                .collect();
            super::json_text(&json!(items))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probe_specs() {
        assert_eq!("coords".parse::<ProbeSpec>().unwrap(), ProbeSpec { random: 0 });
        assert_eq!("coords+random:5".parse::<ProbeSpec>().unwrap(), ProbeSpec { random: 5 });
        assert!("random".parse::<ProbeSpec>().is_err());
        assert!("coords+random:x".parse::<ProbeSpec>().is_err());
    }
}
