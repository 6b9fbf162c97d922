mod algebraic;
mod fuzzy;
mod hopf;
mod metric;

use std::path::{Path, PathBuf};

use clap::Args;

use ncg_core::homology::{parse_algebra, FiniteAlgebra};

pub use algebraic::{CalculusCommand, CliffordCommand, HomologyCommand};
pub use fuzzy::FuzzyCommand;
pub use hopf::HopfCommand;
pub use metric::MetricCommand;

use crate::{read_input, CliError, CliResult};

/// Comma-separated list of sizes, e.g. `2,4,8`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sizes(pub Vec<usize>);

impl std::str::FromStr for Sizes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_list(s).map(Sizes)
    }
}

pub(crate) fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("`{t}` is not a nonnegative integer")))
        .collect()
}

/// Shortest round-trip representation, so outputs are byte-stable.
/// Tiny and huge magnitudes switch to exponent notation.
pub(crate) fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub(crate) fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are finite");
    s.push('\n');
    s
}

/// An algebra given either as a file or as a bundled preset.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct AlgebraSource {
    /// Algebra file (see docs/formats.md).
    #[arg(long)]
    pub algebra: Option<PathBuf>,
    /// Built-in algebra: complex, c2, c2_swap or m2.
    #[arg(long)]
    pub preset: Option<String>,
}

impl AlgebraSource {
    pub fn load(&self) -> CliResult<FiniteAlgebra> {
        if let Some(path) = &self.algebra {
            return load_with(path, parse_algebra);
        }
        match self.preset.as_deref() {
            Some("complex") => Ok(FiniteAlgebra::complex()),
            Some("c2") => Ok(FiniteAlgebra::c2()),
            Some("c2_swap") => Ok(FiniteAlgebra::c2_swap()),
            Some("m2") => Ok(FiniteAlgebra::m2()),
            Some(other) => Err(CliError::Argument(format!(
                "unknown preset `{other}` (expected complex, c2, c2_swap or m2)"
            ))),
            None => Err(CliError::Argument("an algebra is required".into())),
        }
    }
}

pub(crate) fn load_with<T>(path: &Path, parse: impl Fn(&str) -> ncg_core::Result<T>) -> CliResult<T> {
    let text = read_input(path)?;
    parse(&text).map_err(|e| CliError::in_file(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_parse() {
        assert_eq!(parse_list("2, 4,8").unwrap(), vec![2, 4, 8]);
        assert!(parse_list("2,x").is_err());
        assert!(parse_list("").is_err());
    }

    #[test]
    fn floats_round_trip() {
        for v in [1.1780972450961724, 0.0, -2.5e-13] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
