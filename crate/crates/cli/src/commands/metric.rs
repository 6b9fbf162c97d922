use std::str::FromStr;

use clap::Subcommand;
use serde_json::json;

use ncg_core::fuzzy_berezin::{coherent_states, Section};
use ncg_core::numeric::{c, CVec};
use ncg_core::qmetric::{state_metric, state_metric_refined, LipConstraintSample, MetricResult, State};
use ncg_core::su2_reps::{spin_rep, SpinRep};

use super::fmt_f64;
use crate::{CliError, CliResult, Format, Report};

/// A state named on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// Coherent state at the north pole.
    North,
    /// Coherent state at the south pole.
    South,
    /// Normalized trace.
    Mixed,
    /// Coherent state at polar angle θ and azimuth φ.
    Point(f64, f64),
    /// The k-th standard basis vector.
    Basis(usize),
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let float = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad angle `{t}`"));
        match s.split_once(':') {
            None => match s {
                "north" => Ok(StateSpec::North),
                "south" => Ok(StateSpec::South),
                "mixed" => Ok(StateSpec::Mixed),
                _ => Err(format!("unknown state `{s}` (expected north, south, mixed, point:θ,φ or basis:k)")),
            },
            Some(("point", rest)) => {
                let (t, p) = rest.split_once(',').ok_or_else(|| format!("expected point:θ,φ, got `{s}`"))?;
                Ok(StateSpec::Point(float(t)?, float(p)?))
            }
            Some(("basis", k)) => k.parse().map(StateSpec::Basis).map_err(|_| format!("bad basis index `{k}`")),
            _ => Err(format!("unknown state `{s}`")),
        }
    }
}

impl StateSpec {
    fn build(&self, rep: &SpinRep) -> CliResult<State> {
        let n = rep.dim();
        let coherent = |t: f64, p: f64| -> CliResult<State> {
            let v = coherent_states(rep, &[(t, p)], Section::STANDARD)?;
            Ok(State::pure(&v[0])?)
        };
        match *self {
            StateSpec::North => coherent(0.0, 0.0),
            StateSpec::South => coherent(std::f64::consts::PI, 0.0),
            StateSpec::Mixed => Ok(State::maximally_mixed(n)),
            StateSpec::Point(t, p) => coherent(t, p),
            StateSpec::Basis(k) => {
                if k >= n {
                    return Err(CliError::Argument(format!("basis index {k} out of range for n = {n}")));
                }
                let mut v = CVec::zeros(n);
                v[k] = c(1.0);
                Ok(State::pure(&v)?)
            }
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum MetricCommand {
    /// Distance between two states for the sampled Lip-norm.
    States {
        /// Matrix size.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// north, south, mixed, point:THETA,PHI or basis:K.
        #[arg(long, default_value = "north")]
        mu: StateSpec,
        /// Same forms as --mu.
        #[arg(long, default_value = "south")]
        nu: StateSpec,
        /// Group sample density.
        #[arg(long, default_value_t = 8)]
        density: usize,
        /// Duality-gap tolerance of the solver.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Double the sample density until the value settles (at most 6 rounds).
        #[arg(long)]
        refine: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

impl MetricCommand {
    pub(crate) fn run(self) -> CliResult<Report> {
        let MetricCommand::States {
            n,
            mu,
            nu,
            density,
            tol,
            refine,
            format,
        } = self;
        if !(tol > 0.0) {
            return Err(CliError::Argument("--tol must be positive".into()));
        }
        let rep = spin_rep(n)?;
        let (a, b) = (mu.build(&rep)?, nu.build(&rep)?);
        let result: MetricResult = if refine {
            state_metric_refined(&a, &b, &rep, density, tol, 6)?
        } else {
            state_metric(&a, &b, &rep, &LipConstraintSample::with_density(density)?, tol)?
        };
        let text = match format {
            Format::Csv => format!(
                "n,value,gap,converged,sample_size\n{n},{},{},{},{}\n",
                fmt_f64(result.value),
                fmt_f64(result.gap),
                result.converged,
                result.sample_size
            ),
            Format::Json => super::json_text(&json!({
                "n": n,
                "value": result.value,
                "gap": result.gap,
                "converged": result.converged,
                "sample_size": result.sample_size,
            })),
        };
        Ok(Report {
            text,
            failure: (!result.converged).then(|| "state metric solver did not converge".to_string()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_specs() {
        assert_eq!("north".parse::<StateSpec>().unwrap(), StateSpec::North);
        assert_eq!("point:1.5,0.25".parse::<StateSpec>().unwrap(), StateSpec::Point(1.5, 0.25));
        assert_eq!("basis:2".parse::<StateSpec>().unwrap(), StateSpec::Basis(2));
        assert!("point:1".parse::<StateSpec>().is_err());
        assert!("east".parse::<StateSpec>().is_err());
    }
}
