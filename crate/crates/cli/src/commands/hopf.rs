use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand};

use ncg_core::exact::GaussRat;
use ncg_core::hopf_rewrite::{
    commutativity_counterexample, hopf_axiom_check, parse_presentation, HopfStructure, Presentation,
};

use super::load_with;
use crate::{CliError, CliResult, Report};

/// `formal` keeps q as an indeterminate; anything else is a rational value.
#[derive(Debug, Clone, PartialEq)]
pub enum QValue {
    Formal,
    Value(GaussRat),
}

impl FromStr for QValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "formal" {
            return Ok(QValue::Formal);
        }
        s.parse::<GaussRat>()
            .map(QValue::Value)
            .map_err(|_| format!("expected `formal` or a rational, got `{s}`"))
    }
}

impl std::fmt::Display for QValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QValue::Formal => f.write_str("formal"),
            QValue::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct PresentationSource {
    /// Built-in presentation: su_q2 or sl_q2.
    #[arg(long)]
    pub preset: Option<String>,
    /// Presentation file (see docs/formats.md).
    #[arg(long)]
    pub presentation: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum HopfCommand {
    /// Hopf axioms on normal monomials and the commutativity of the q = 1 limit.
    Verify {
        #[command(flatten)]
        source: PresentationSource,
        /// Largest monomial degree for the Hopf axioms.
        #[arg(long, default_value_t = 3)]
        degree: usize,
        /// Value of q for the Hopf axioms.
        #[arg(long, default_value = "formal")]
        q: QValue,
        /// Largest word length for the commutativity checks.
        #[arg(long, default_value_t = 2)]
        commutativity_degree: usize,
        /// Value of q at which a pair of non-commuting words is sought.
        #[arg(long, default_value = "1/2")]
        noncommutative_at: GaussRat,
    },
}

impl HopfCommand {
    pub(crate) fn run(self) -> CliResult<Report> {
        let HopfCommand::Verify {
            source,
            degree,
            q,
            commutativity_degree,
            noncommutative_at,
        } = self;
        let (pres, structure) = match (&source.preset, &source.presentation) {
            (Some(name), _) => {
                let pres = Presentation::preset(name).map_err(|_| {
                    CliError::Argument(format!("unknown preset `{name}` (expected su_q2 or sl_q2)"))
                })?;
                let structure = match HopfStructure::for_preset(name) {
                    Ok(h) => Some(h),
                    Err(ncg_core::Error::Unsupported(_)) => None,
                    Err(e) => return Err(e.into()),
                };
                (pres, structure)
            }
            (None, Some(path)) => (load_with(path, parse_presentation)?, None),
            (None, None) => return Err(CliError::Argument("a presentation is required".into())),
        };

        let mut text = format!(
            "presentation {} ({} letters, {} rules)\n",
            pres.name(),
            pres.letters().len(),
            pres.rules().len()
        );
        let mut problems = Vec::new();

        match structure {
            Some(h) => {
                let h = match &q {
                    QValue::Formal => h,
                    QValue::Value(v) => h.specialize(v)?,
                };
                let report = hopf_axiom_check(&h, degree)?;
                match &report.failure {
                    None => text.push_str(&format!(
                        "hopf axioms up to degree {degree} at q = {q}: PASS ({} monomials, {} relations)\n",
                        report.monomials, report.rules
                    )),
                    Some(f) => {
                        text.push_str(&format!(
                            "hopf axioms up to degree {degree} at q = {q}: FAIL {} at {} (residual {})\n",
                            f.law, f.witness, f.residual
                        ));
                        problems.push(format!("{} fails at {}", f.law, f.witness));
                    }
                }
            }
            None => text.push_str("hopf axioms: no coproduct is available for this presentation\n"),
        }

        let one = GaussRat::from_int(1);
        match commutativity_counterexample(&pres, &one, commutativity_degree)? {
            None => text.push_str(&format!("commutative at q = 1 up to degree {commutativity_degree}: PASS\n")),
            Some((u, v)) => {
                let (u, v) = (pres.format_word(&u), pres.format_word(&v));
                text.push_str(&format!(
                    "commutative at q = 1 up to degree {commutativity_degree}: FAIL ({u})({v}) ≠ ({v})({u})\n"
                ));
                problems.push(format!("{u} and {v} do not commute at q = 1"));
            }
        }

        match commutativity_counterexample(&pres, &noncommutative_at, commutativity_degree)? {
            Some((u, v)) => text.push_str(&format!(
                "noncommutative at q = {noncommutative_at}: PASS ({}, {})\n",
                pres.format_word(&u),
                pres.format_word(&v)
            )),
            None => {
                text.push_str(&format!("noncommutative at q = {noncommutative_at}: FAIL\n"));
                problems.push(format!("no non-commuting pair at q = {noncommutative_at}"));
            }
        }

        Ok(Report {
            text,
            failure: (!problems.is_empty()).then(|| problems.join("; ")),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_values() {
        assert_eq!("formal".parse::<QValue>().unwrap(), QValue::Formal);
        assert_eq!("1/2".parse::<QValue>().unwrap().to_string(), "1/2");
        assert!("q".parse::<QValue>().is_err());
    }
}
