//! Exact distribution kernels and enumerative checks of the inequalities the
//! witness construction relies on:
//!
//! * hypergeometric vs. binomial total variation, `(n-1)/(28(N-1)) <= δ <= (n-1)/(N-1)`;
//! * the binomial lower tail `B(n,p)([0, np - sqrt(np)/2]) >= 3/160`;
//! * the Chernoff-Hoeffding lower tail `P(S < -tk) <= exp(-2 t^2 k)`;
//! * stochastic dominance of dependent Bernoulli sums by iid ones.

mod checks;
mod coupling;
mod dist;
mod special;

use std::fmt;

use serde::Serialize;

pub use checks::{
    check_lemma4, check_theorem3, check_theorem5_binomial, hoeffding_bound, sweep_lemma4,
    sweep_theorem3, sweep_theorem5, SweepSummary, LOWER_TAIL_MASS_BOUND, NUMERIC_SLACK,
};
pub use coupling::{check_lemma6, tree_sum_distribution, ConditionalBernoulliTree, MAX_TREE_DEPTH};
pub use dist::{
    binom_cdf, binom_pmf, binomial, hypergeom_cdf, hypergeom_pmf, hypergeometric, tv_distance,
    DiscreteDistribution, NORMALIZATION_TOL,
};
pub use special::log_choose;

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub parameters: Vec<(String, f64)>,
    pub computed: Vec<(String, f64)>,
    pub bounds: Vec<(String, f64)>,
    pub pass: bool,
    /// Smallest slack over all inequalities checked; negative on failure.
    pub margin: f64,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub(crate) fn new(name: &str) -> Self {
        Self {
            name: name.to_owned(),
            parameters: Vec::new(),
            computed: Vec::new(),
            bounds: Vec::new(),
            pass: true,
            margin: f64::INFINITY,
            notes: Vec::new(),
        }
    }

    pub(crate) fn param(mut self, key: &str, v: f64) -> Self {
        self.parameters.push((key.to_owned(), v));
        self
    }

    pub(crate) fn value(&mut self, key: &str, v: f64) {
        self.computed.push((key.to_owned(), v));
    }

    pub(crate) fn bound(&mut self, key: &str, v: f64) {
        self.bounds.push((key.to_owned(), v));
    }

    /// Records `slack >= -tol` as one of the report's inequalities.
    pub(crate) fn require(&mut self, slack: f64, tol: f64) {
        self.margin = self.margin.min(slack);
        if slack.is_nan() || slack < -tol {
            self.pass = false;
        }
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "check = {}", self.name)?;
        for (k, v) in &self.parameters {
            writeln!(f, "param.{k} = {v}")?;
        }
        for (k, v) in &self.computed {
            writeln!(f, "value.{k} = {v:.17e}")?;
        }
        for (k, v) in &self.bounds {
            writeln!(f, "bound.{k} = {v:.17e}")?;
        }
        for n in &self.notes {
            writeln!(f, "note = {n}")?;
        }
        writeln!(f, "margin = {:.17e}", self.margin)?;
        write!(f, "result = {}", if self.pass { "pass" } else { "FAIL" })
    }
}
