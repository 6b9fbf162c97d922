use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use serde_json::json;

use ncg_core::calculus::{derivations, hodge, parse_graded_calculus, universal_forms, GradedCalculus};
use ncg_core::clifford::{clifford_relations, dirac_square, monomial_rank, spin_representation};
use ncg_core::exact::{ExactMatrix, GaussRat};
use ncg_core::homology::{homology_dims, Side, Variant};
use ncg_core::numeric::max_abs;

use super::{fmt_f64, json_text, load_with, AlgebraSource};
use crate::{CliError, CliResult, Format, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Hochschild,
    Cyclic,
    TwistedHochschild,
    TwistedCyclic,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Hochschild => Variant::Hochschild,
            VariantArg::Cyclic => Variant::Cyclic,
            VariantArg::TwistedHochschild => Variant::TwistedHochschild,
            VariantArg::TwistedCyclic => Variant::TwistedCyclic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Homology,
    Cohomology,
}

#[derive(Debug, Subcommand)]
pub enum HomologyCommand {
    /// Dimensions of the (co)homology groups in degrees 0..=N.
    Compute {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        #[arg(long, value_enum, default_value = "hochschild")]
        variant: VariantArg,
        #[arg(long, value_enum, default_value = "homology")]
        side: SideArg,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

impl HomologyCommand {
    pub(crate) fn run(self) -> CliResult<Report> {
        let HomologyCommand::Compute {
            source,
            max_degree,
            variant,
            side,
            format,
        } = self;
        let alg = source.load()?;
        let side = match side {
            SideArg::Homology => Side::Homology,
            SideArg::Cohomology => Side::Cohomology,
        };
        let variant = Variant::from(variant);
        let dims = homology_dims(&alg, max_degree, variant, side)?;
        let text = match format {
            Format::Csv => {
                let cells: Vec<String> = dims.iter().map(usize::to_string).collect();
                format!("{}\n", cells.join(","))
            }
            Format::Json => json_text(&json!({
                "variant": variant.to_string(),
                "side": side.to_string(),
                "dims": dims,
            })),
        };
        Ok(Report::ok(text))
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CalculusSource {
    /// Graded calculus file (see docs/formats.md).
    #[arg(long)]
    pub calculus: Option<PathBuf>,
    /// Algebra file; its universal calculus is truncated at --degree.
    #[arg(long)]
    pub algebra: Option<PathBuf>,
    /// Built-in algebra whose universal calculus is used.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum CalculusCommand {
    /// Hodge decomposition of a finite graded calculus.
    Hodge {
        #[command(flatten)]
        source: CalculusSource,
        /// Truncation degree for universal calculi.
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Basis of the derivations of an algebra.
    Derivations {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

const OVERLAP_TOL: f64 = 1e-9;
const EIGEN_TOL: f64 = 1e-12;

impl CalculusCommand {
    pub(crate) fn run(self) -> CliResult<Report> {
        match self {
            CalculusCommand::Hodge { source, degree, format } => {
                let calc = load_calculus(&source, degree)?;
                hodge_report(&calc, format)
            }
            CalculusCommand::Derivations { source, format } => {
                let alg = source.load()?;
                Ok(Report::ok(derivation_report(&derivations(&alg), format)))
            }
        }
    }
}

fn load_calculus(source: &CalculusSource, degree: usize) -> CliResult<GradedCalculus> {
    if let Some(path) = &source.calculus {
        return load_with(path, parse_graded_calculus);
    }
    let alg = AlgebraSource {
        algebra: source.algebra.clone(),
        preset: source.preset.clone(),
    }
    .load()?;
    Ok(universal_forms(&alg, degree)?.to_graded_calculus()?)
}

fn hodge_report(calc: &GradedCalculus, format: Format) -> CliResult<Report> {
    let report = hodge(calc)?;
    let min_eigen = report.min_laplacian_eigenvalue();
    let mut problems = Vec::new();
    if report.max_overlap >= OVERLAP_TOL {
        problems.push(format!("summands overlap by {}", report.max_overlap));
    }
    if !report.additive {
        problems.push("summand dimensions do not add up".to_string());
    }
    if min_eigen < -EIGEN_TOL {
        problems.push(format!("Laplacian has eigenvalue {min_eigen}"));
    }
    let rows: Vec<[usize; 4]> = report
        .degrees
        .iter()
        .zip(calc.dims())
        .map(|(g, &dim)| [dim, g.harmonic.len(), g.exact.len(), g.coexact.len()])
        .collect();
    let text = match format {
        Format::Csv => {
            let mut out = String::from("degree,dim,harmonic,exact,coexact,min_eigenvalue\n");
            for (k, (row, g)) in rows.iter().zip(&report.degrees).enumerate() {
                let low = g.laplacian_eigenvalues.first().copied().unwrap_or(0.0);
                out.push_str(&format!("{k},{},{},{},{},{}\n", row[0], row[1], row[2], row[3], fmt_f64(low)));
            }
            out
        }
        Format::Json => {
            let degrees: Vec<_> = rows
                .iter()
                .zip(&report.degrees)
                .map(|(row, g)| {
                    json!({
                        "dim": row[0],
                        "harmonic": row[1],
                        "exact": row[2],
                        "coexact": row[3],
                        "laplacian_eigenvalues": g.laplacian_eigenvalues,
                    })
                })
                .collect();
            json_text(&json!({
                "degrees": degrees,
                "max_overlap": report.max_overlap,
                "additive": report.additive,
                "dirac_eigenvalues": report.dirac_eigenvalues,
            }))
        }
    };
    Ok(Report {
        text,
        failure: (!problems.is_empty()).then(|| problems.join("; ")),
    })
}

fn matrix_rows(m: &ExactMatrix) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

fn derivation_report(basis: &[ExactMatrix], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = format!("derivations {}\n", basis.len());
            for (idx, m) in basis.iter().enumerate() {
                out.push_str(&format!("X{idx}\n"));
                for row in matrix_rows(m) {
                    out.push_str(&row.join(" "));
                    out.push('\n');
                }
            }
            out
        }
        Format::Json => {
            let mats: Vec<_> = basis.iter().map(matrix_rows).collect();
            json_text(&json!({"dimension": basis.len(), "basis": mats}))
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum CliffordCommand {
    /// Checks the spin representation of Cl(C^2k) and its Dirac operator.
    Check {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

impl CliffordCommand {
    pub(crate) fn run(self) -> CliResult<Report> {
        let CliffordCommand::Check { k } = self;
        if k == 0 {
            return Err(CliError::Argument("--k must be at least 1".into()));
        }
        let gens = spin_representation(k)?;
        let size = 1usize << k;
        let mut residual = 0.0f64;
        for i in 0..gens.len() {
            for j in i..gens.len() {
                let mut anti = gens[i].mul(&gens[j])?.add(&gens[j].mul(&gens[i])?)?;
                if i == j {
                    anti = anti.add(&ExactMatrix::identity(size).scale(&GaussRat::from_int(2)))?;
                }
                residual = residual.max(max_abs(&anti.to_complex()));
            }
        }
        let relations = clifford_relations(&gens)?;
        let rank = monomial_rank(&gens)?;
        let full = 1usize << (2 * k);
        let dirac = dirac_square(&gens).map(|_| ());
        let mut text = format!("generators {}\nmatrix size {size}\n", gens.len());
        text.push_str(&format!("anticommutator residual {residual}\n"));
        text.push_str(&format!("monomial rank {rank} of {full}\n"));
        text.push_str(&format!(
            "dirac square {}\n",
            if dirac.is_ok() { "-laplacian" } else { "mismatch" }
        ));
        let mut problems = Vec::new();
        if let Some((a, b)) = relations {
            problems.push(format!("relation fails for e{} and e{}", a + 1, b + 1));
        }
        if rank != full {
            problems.push(format!("monomials have rank {rank}, expected {full}"));
        }
        if let Err(e) = dirac {
            problems.push(e.to_string());
        }
        text.push_str(if problems.is_empty() { "PASS\n" } else { "FAIL\n" });
        Ok(Report {
            text,
            failure: (!problems.is_empty()).then(|| problems.join("; ")),
        })
    }
}
