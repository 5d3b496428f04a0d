//! Resolved run configuration shared by all subcommands.

use std::path::PathBuf;
use std::sync::Arc;

use loopstrata::affine::DEFAULT_BUDGET;
use loopstrata::{Coweight, Error, Field, RootDatum};

use crate::CliError;

pub const BUDGET_ENV: &str = "LOOPSTRATA_BUDGET";

#[derive(Clone, Debug, Default)]
pub struct RawOptions {
    pub group: Option<String>,
    pub mu: Option<String>,
    pub q: u32,
    pub ext: u32,
    pub precision: Option<i64>,
    pub budget: Option<u128>,
    pub seed: u64,
    pub jobs: usize,
    pub dot: bool,
    pub oracle: bool,
    pub out: Option<PathBuf>,
}

pub struct RunConfig {
    pub rd: RootDatum,
    pub mu: Coweight,
    pub field: Arc<Field>,
    pub precision: Option<i64>,
    pub budget: u128,
    pub seed: u64,
    pub jobs: usize,
    pub dot: bool,
    pub oracle: bool,
    pub out: Option<PathBuf>,
}

/// Comma-separated integers, e.g. `1,0` or `[2, 1, 0]`.
pub fn parse_coweight(text: &str, rank: usize) -> Result<Coweight, Error> {
    let trimmed = text.trim().trim_start_matches('[').trim_end_matches(']');
    let offset = text.find(trimmed).unwrap_or(0);
    let mut out = vec![];
    let mut pos = offset;
    for part in trimmed.split(',') {
        let lead = part.len() - part.trim_start().len();
        let v = part.trim().parse::<i64>().map_err(|_| Error::Parse {
            pos: pos + lead,
            expected: "integer".into(),
        })?;
        out.push(v);
        pos += part.len() + 1;
    }
    if out.len() != rank {
        return Err(Error::Parse {
            pos: text.len(),
            expected: format!("{rank} coordinates"),
        });
    }
    Ok(out)
}

pub fn resolve_budget(flag: Option<u128>) -> Result<u128, CliError> {
    let b = match flag {
        Some(b) => b,
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("{BUDGET_ENV}=`{v}` is not a positive integer")))?,
            Err(_) => DEFAULT_BUDGET,
        },
    };
    if b == 0 {
        return Err(CliError::Config("budget must be positive".into()));
    }
    Ok(b)
}

impl RunConfig {
    pub fn resolve(raw: &RawOptions, default_group: &str) -> Result<Self, CliError> {
        let rd = RootDatum::from_descriptor(raw.group.as_deref().unwrap_or(default_group))?;
        let mu = match &raw.mu {
            Some(s) => parse_coweight(s, rd.rank())?,
            None => rd.default_mu(),
        };
        if !rd.is_dominant(&mu) {
            return Err(Error::Precondition(format!("μ = {mu:?} is not dominant")).into());
        }
        let field = Arc::new(Field::new(raw.q, raw.ext)?);
        if let Some(p) = raw.precision {
            if p <= 0 {
                return Err(CliError::Config("precision must be positive".into()));
            }
        }
        if raw.jobs == 0 {
            return Err(CliError::Config("jobs must be positive".into()));
        }
        Ok(RunConfig {
            rd,
            mu,
            field,
            precision: raw.precision,
            budget: resolve_budget(raw.budget)?,
            seed: raw.seed,
            jobs: raw.jobs,
            dot: raw.dot,
            oracle: raw.oracle,
            out: raw.out.clone(),
        })
    }

    pub fn require_gl(&self, what: &str) -> Result<usize, CliError> {
        self.rd
            .gl_size()
            .ok_or_else(|| CliError::Config(format!("{what} needs a GL:n group, got {}", self.rd.name())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coweights() {
        assert_eq!(parse_coweight("1,0", 2).unwrap(), vec![1, 0]);
        assert_eq!(parse_coweight("[2, -1, 0]", 3).unwrap(), vec![2, -1, 0]);
        assert!(matches!(parse_coweight("1,x", 2), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_coweight("1,0", 3), Err(Error::Parse { .. })));
    }

    #[test]
    fn budgets() {
        assert_eq!(resolve_budget(Some(5)).unwrap(), 5);
        assert!(resolve_budget(Some(0)).is_err());
    }
}
