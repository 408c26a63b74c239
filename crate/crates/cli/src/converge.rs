//! Circle convergence sweep, one run per resolution in parallel.

use elastica::flow::circle_sample;
use elastica::reference::eoc_table;
use elastica::EocTable;
use rayon::prelude::*;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub vertex_counts: Vec<usize>,
    pub lambda: f64,
    pub r0: f64,
    pub t_final: f64,
}

#[derive(Debug)]
pub struct SweepOutcome {
    /// Rows up to the first failed resolution.
    pub table: Option<EocTable>,
    pub failure: Option<CliError>,
}

impl Sweep {
    pub fn validate(&self) -> Result<()> {
        if self.vertex_counts.is_empty() {
            return Err(CliError::Config("empty N list".into()));
        }
        if let Some(&n) = self.vertex_counts.iter().find(|&&n| n < 3) {
            return Err(CliError::Config(format!("N = {n} is below 3")));
        }
        if self.vertex_counts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("N list must increase strictly".into()));
        }
        for (name, v) in [("lambda", self.lambda), ("r0", self.r0), ("t", self.t_final)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Config(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    pub fn run(&self) -> Result<SweepOutcome> {
        self.validate()?;
        let results: Vec<_> = self
            .vertex_counts
            .par_iter()
            .map(|&n| circle_sample(n, 2, self.lambda, self.r0, self.t_final).map_err(|e| (n, e)))
            .collect();
        let mut samples = Vec::new();
        let mut failure = None;
        for r in results {
            match r {
                Ok(s) => samples.push(s),
                Err((n, e)) => {
                    failure = Some(CliError::Run(format!("N = {n}: {e}")));
                    break;
                }
            }
        }
        let table = if samples.is_empty() {
            None
        } else {
            Some(eoc_table(&samples).map_err(|e| CliError::Run(e.to_string()))?)
        };
        Ok(SweepOutcome { table, failure })
    }
}
