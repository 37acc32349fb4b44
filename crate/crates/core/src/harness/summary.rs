use serde::{Serialize, Serializer};

use super::config::{ExperimentConfig, Method, SampleKind};
use super::run::{run_trials, witness_slab, TrialRecord};
use crate::error::{Error, Result};
use crate::probtools::{binom_cdf, CheckReport};
use crate::witness::theory_constants;

/// Slack for comparing a witness bound with an exact discrepancy: both are
/// the same count differences, evaluated in a different order.
const CONSISTENCY_TOL: f64 = 1e-12;

/// Empirical tail frequency for one threshold `c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailEntry {
    pub c: f64,
    /// `c sqrt(d/N)`
    pub threshold: f64,
    pub frequency: f64,
    /// `(1.6741 c^2 - 11.7042) d`; the reference is vacuous unless positive.
    pub exponent: f64,
    /// `1 - exp(-exponent)`, or `None` when not applicable.
    pub reference: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub kind: SampleKind,
    pub method: Method,
    pub n_points: usize,
    pub dim: usize,
    pub trials: usize,
    pub successes: usize,
    pub dstar_count: usize,
    pub mean_dstar: Option<f64>,
    pub se_dstar: Option<f64>,
    pub min_dstar: Option<f64>,
    pub max_dstar: Option<f64>,
    #[serde(serialize_with = "tails_by_c")]
    pub tails: Vec<TailEntry>,
    pub witness_count: usize,
    pub mean_k: Option<f64>,
    pub se_k: Option<f64>,
    /// `(d-1)/80`
    pub k_reference: f64,
    pub mean_witness: Option<f64>,
    pub se_witness: Option<f64>,
    /// `expectation_const * sqrt((d-1)/N)`, when a slab constant exists.
    pub witness_reference: Option<f64>,
    /// Frequency of `k < d/200`.
    pub freq_k_small: Option<f64>,
    /// `binom_cdf(d-1, 1/80, ceil(d/200) - 1)`
    pub k_small_reference: f64,
    /// Records with an exact `D*` whose witness bound exceeds it.
    pub witness_violations: usize,
}

fn tails_by_c<S: Serializer>(tails: &[TailEntry], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(tails.iter().map(|t| (c_key(t.c), t)))
}

/// `c` rounded to 6 significant digits, printed without trailing zeros.
pub fn c_key(c: f64) -> String {
    let rounded: f64 = format!("{c:.5e}").parse().unwrap_or(c);
    format!("{rounded}")
}

/// Reference probability for the LHS upper tail `P(D* <= c sqrt(d/N))`,
/// `1 - exp(-(1.6741 c^2 - 11.7042) d)` and its exponent.
pub fn theorem1_reference(c: f64, dim: usize) -> (f64, Option<f64>) {
    let exponent = (1.6741 * c * c - 11.7042) * dim as f64;
    let reference = (exponent > 0.0).then(|| -(-exponent).exp_m1());
    (exponent, reference)
}

/// `P(B(d-1, 1/80) <= ceil(d/200) - 1)`, the iid bound on `P(k < d/200)`.
pub fn k_small_reference(dim: usize) -> f64 {
    let last = dim.div_ceil(200) as i64 - 1;
    binom_cdf(dim.saturating_sub(1) as u64, 1.0 / 80.0, last).unwrap_or(1.0)
}

fn mean_se(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (Some(mean), Some(0.0));
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (Some(mean), Some((var / n).sqrt()))
}

pub fn summarize(records: &[TrialRecord], config: &ExperimentConfig) -> Result<Summary> {
    let dstars: Vec<f64> = records.iter().filter_map(|r| r.dstar).collect();
    let witnessed: Vec<&TrialRecord> = records
        .iter()
        .filter(|r| r.witness_bound.is_some())
        .collect();
    if dstars.is_empty() && witnessed.is_empty() {
        return Err(Error::NoData);
    }
    let (n, d) = (config.n_points, config.dim);
    let scale = (d as f64 / n as f64).sqrt();
    let (mean_dstar, se_dstar) = mean_se(&dstars);

    let tails = if dstars.is_empty() {
        Vec::new()
    } else {
        config
            .c_values
            .iter()
            .map(|&c| {
                let threshold = c * scale;
                let hits = dstars.iter().filter(|v| **v <= threshold).count();
                let (exponent, reference) = theorem1_reference(c, d);
                TailEntry {
                    c,
                    threshold,
                    frequency: hits as f64 / dstars.len() as f64,
                    exponent,
                    reference,
                }
            })
            .collect()
    };

    let ks: Vec<f64> = witnessed
        .iter()
        .filter_map(|r| r.k_count)
        .map(|k| k as f64)
        .collect();
    let bounds: Vec<f64> = witnessed.iter().filter_map(|r| r.witness_bound).collect();
    let (mean_k, se_k) = mean_se(&ks);
    let (mean_witness, se_witness) = mean_se(&bounds);
    let witness_reference = match witness_slab(config) {
        Ok(Some(sc)) if d >= 2 => {
            Some(theory_constants(&sc).expectation_const * ((d - 1) as f64 / n as f64).sqrt())
        }
        _ => None,
    };
    let freq_k_small = (!ks.is_empty())
        .then(|| ks.iter().filter(|k| 200.0 * **k < d as f64).count() as f64 / ks.len() as f64);
    let witness_violations = if config.method.is_exact() {
        records
            .iter()
            .filter(|r| match (r.dstar, r.witness_bound) {
                (Some(v), Some(w)) => w > v + CONSISTENCY_TOL,
                _ => false,
            })
            .count()
    } else {
        0
    };

    Ok(Summary {
        kind: config.kind,
        method: config.method,
        n_points: n,
        dim: d,
        trials: records.len(),
        successes: records.iter().filter(|r| r.succeeded()).count(),
        dstar_count: dstars.len(),
        mean_dstar,
        se_dstar,
        min_dstar: dstars.iter().copied().reduce(f64::min),
        max_dstar: dstars.iter().copied().reduce(f64::max),
        tails,
        witness_count: witnessed.len(),
        mean_k,
        se_k,
        k_reference: d.saturating_sub(1) as f64 / 80.0,
        mean_witness,
        se_witness,
        witness_reference,
        freq_k_small,
        k_small_reference: k_small_reference(d),
        witness_violations,
    })
}

/// Upper-tail report for an already summarized run: each observed
/// frequency of `D* <= c sqrt(d/N)` against its reference probability. Thresholds with a
/// non-positive exponent are listed as not applicable.
pub fn theorem1_report(summary: &Summary) -> CheckReport {
    let t = summary.dstar_count as f64;
    let mut r = CheckReport::new("theorem1")
        .param("N", summary.n_points as f64)
        .param("d", summary.dim as f64)
        .param("trials", t);
    for tail in &summary.tails {
        let key = c_key(tail.c);
        r.value(&format!("frequency[c={key}]"), tail.frequency);
        match tail.reference {
            Some(reference) => {
                let margin = 3.0 * (reference * (1.0 - reference) / t + 1.0 / t).sqrt();
                r.bound(&format!("reference[c={key}]"), reference);
                r.bound(&format!("accept_above[c={key}]"), reference - margin);
                r.require(tail.frequency - (reference - margin), 0.0);
            }
            None => r.note(format!(
                "c = {key}: exponent {} is not positive, reference not applicable",
                tail.exponent
            )),
        }
    }
    if summary.tails.is_empty() {
        r.note("no thresholds checked");
    }
    r
}

/// Runs `config` and checks the upper-tail frequencies against their
/// reference probabilities.
pub fn verify_theorem1(config: &ExperimentConfig) -> Result<CheckReport> {
    if config.kind != SampleKind::Lhs {
        return Err(Error::PreconditionViolated(
            "the upper-tail check concerns LHS samples (kind = lhs)".into(),
        ));
    }
    let records = run_trials(config)?;
    Ok(theorem1_report(&summarize(&records, config)?))
}

/// Lower-bound report for an already summarized run: the expected witness
/// bound, the mean `k`, the lower tail of `k` against the coupling bound and,
/// with an exact method, the mean discrepancy and per-trial consistency.
pub fn theorem2_report(summary: &Summary, config: &ExperimentConfig) -> Result<CheckReport> {
    let sc = theorem2_preconditions(config)?;
    let tc = theory_constants(&sc);
    let (n, d) = (config.n_points as f64, config.dim as f64);
    let mut r = CheckReport::new("theorem2")
        .param("N", n)
        .param("d", d)
        .param("trials", summary.trials as f64)
        .param("c", sc.c);

    match (
        summary.mean_witness,
        summary.se_witness,
        summary.witness_reference,
    ) {
        (Some(mean), Some(se), Some(reference)) => {
            r.value("mean_witness", mean);
            r.value("se_witness", se);
            r.bound("witness_reference", reference);
            r.require(mean - (reference - 3.0 * se), 0.0);
        }
        _ => {
            r.note("no witness bounds recorded");
            r.require(-1.0, 0.0);
        }
    }
    if let (Some(mean), Some(se)) = (summary.mean_k, summary.se_k) {
        r.value("mean_k", mean);
        r.value("se_k", se);
        r.bound("k_reference", summary.k_reference);
        r.require(mean - (summary.k_reference - 3.0 * se), 0.0);
    }
    if let Some(freq) = summary.freq_k_small {
        let reference = summary.k_small_reference;
        let se = (reference * (1.0 - reference) / summary.witness_count as f64).sqrt();
        r.value("freq_k_small", freq);
        r.bound("k_small_reference", reference);
        r.bound("k_small_accept_below", reference + 3.0 * se);
        r.require(reference + 3.0 * se - freq, 0.0);
    }
    if config.method.is_exact() {
        match summary.mean_dstar {
            Some(mean) => {
                let reference = tc.k_const * (d / n).sqrt();
                r.value("mean_dstar", mean);
                r.bound("dstar_reference", reference);
                r.require(mean - reference, 0.0);
            }
            None => {
                r.note("no exact discrepancies recorded");
                r.require(-1.0, 0.0);
            }
        }
        r.value("witness_violations", summary.witness_violations as f64);
        r.require(-(summary.witness_violations as f64), 0.0);
    } else {
        r.note("mean D* check skipped: method is not exact");
    }
    Ok(r)
}

fn theorem2_preconditions(config: &ExperimentConfig) -> Result<crate::witness::SlabConstant> {
    if config.kind != SampleKind::Lhs {
        return Err(Error::PreconditionViolated(
            "the witness lower-bound check concerns LHS samples (kind = lhs)".into(),
        ));
    }
    crate::witness::compute_slab_constant(config.n_points, config.dim, true)
}

/// Runs `config` and checks the witness lower bound. Needs `kind = lhs`,
/// `d >= 2` and `N >= 1600 d`.
pub fn verify_theorem2(config: &ExperimentConfig) -> Result<CheckReport> {
    theorem2_preconditions(config)?;
    let records = run_trials(config)?;
    theorem2_report(&summarize(&records, config)?, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::Seed;

    fn record(trial: usize, dstar: Option<f64>, witness: Option<(f64, usize)>) -> TrialRecord {
        TrialRecord {
            trial,
            seed: Seed(trial as u64),
            method: Method::Exact,
            dstar,
            witness_bound: witness.map(|w| w.0),
            k_count: witness.map(|w| w.1),
            runtime_ms: None,
            error: None,
        }
    }

    #[test]
    fn constant_values_have_zero_error() {
        let cfg = ExperimentConfig::new(SampleKind::Lhs, 10, 1, 4);
        let recs: Vec<_> = (0..4).map(|i| record(i, Some(0.05), None)).collect();
        let s = summarize(&recs, &cfg).unwrap();
        assert_eq!(s.mean_dstar, Some(0.05));
        assert_eq!(s.se_dstar, Some(0.0));
        assert!(s.mean_k.is_none());
    }

    #[test]
    fn no_data_is_an_error() {
        let cfg = ExperimentConfig::new(SampleKind::Lhs, 10, 2, 1);
        assert!(matches!(summarize(&[], &cfg), Err(Error::NoData)));
        assert!(matches!(
            summarize(&[record(0, None, None)], &cfg),
            Err(Error::NoData)
        ));
    }

    #[test]
    fn sample_standard_error() {
        let cfg = ExperimentConfig::new(SampleKind::Lhs, 10, 2, 4);
        let recs: Vec<_> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .enumerate()
            .map(|(i, v)| record(i, Some(v / 10.0), None))
            .collect();
        let s = summarize(&recs, &cfg).unwrap();
        // sample sd of 0.1..0.4 is sqrt(5/3)/10
        let want = (5.0f64 / 3.0).sqrt() / 10.0 / 2.0;
        assert!((s.se_dstar.unwrap() - want).abs() < 1e-15);
        assert_eq!(s.min_dstar, Some(0.1));
        assert_eq!(s.max_dstar, Some(0.4));
    }

    #[test]
    fn theorem1_reference_values() {
        let (e, r) = theorem1_reference(3.0, 2);
        assert!((e - 6.7254).abs() < 1e-12);
        assert!((r.unwrap() - (1.0 - (-6.7254f64).exp())).abs() < 1e-15);
        assert!(r.unwrap() >= 0.998);
        let (_, r4) = theorem1_reference(4.0, 2);
        assert!(r4.unwrap() > 0.999999);
        assert_eq!(theorem1_reference(1.0, 2).1, None);
    }

    #[test]
    fn not_applicable_thresholds_do_not_fail() {
        let mut cfg = ExperimentConfig::new(SampleKind::Lhs, 512, 2, 2);
        cfg.c_values = vec![1.0];
        let recs = vec![record(0, Some(0.9), None), record(1, Some(0.9), None)];
        let r = theorem1_report(&summarize(&recs, &cfg).unwrap());
        assert!(r.pass);
        assert!(r.notes[0].contains("not applicable"));
    }

    #[test]
    fn k_small_reference_small_d() {
        let want = (79.0f64 / 80.0).powi(3);
        assert!((k_small_reference(4) - want).abs() < 1e-15);
        // d = 201: ceil(d/200) - 1 = 1
        let b = binom_cdf(200, 1.0 / 80.0, 1).unwrap();
        assert_eq!(k_small_reference(201), b);
    }

    #[test]
    fn c_keys() {
        assert_eq!(c_key(3.0), "3");
        assert_eq!(c_key(0.1), "0.1");
        assert_eq!(c_key(2.0 / 3.0), "0.666667");
        assert_eq!(c_key(1234567.0), "1234570");
    }

    #[test]
    fn theorem2_preconditions_enforced() {
        let cfg = ExperimentConfig::new(SampleKind::Lhs, 512, 2, 2);
        assert!(matches!(
            verify_theorem2(&cfg),
            Err(Error::PreconditionViolated(_))
        ));
        let cfg = ExperimentConfig::new(SampleKind::Uniform, 3200, 2, 2);
        assert!(matches!(
            verify_theorem2(&cfg),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn violations_counted_for_exact_methods() {
        let cfg = ExperimentConfig::new(SampleKind::Lhs, 3200, 2, 2);
        let recs = vec![
            record(0, Some(0.01), Some((0.02, 1))),
            record(1, Some(0.01), Some((0.0, 0))),
        ];
        let s = summarize(&recs, &cfg).unwrap();
        assert_eq!(s.witness_violations, 1);
        assert_eq!(s.freq_k_small, Some(0.5));
        assert!(!theorem2_report(&s, &cfg).unwrap().pass);
    }
}
