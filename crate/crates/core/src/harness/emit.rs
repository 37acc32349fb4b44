use std::io::Write;

use super::run::TrialRecord;
use super::summary::{c_key, Summary};
use crate::error::Result;

/// Column order of the records file.
pub const RECORD_COLUMNS: [&str; 7] = [
    "trial",
    "seed",
    "dstar",
    "method",
    "witness_bound",
    "k_count",
    "runtime_ms",
];

fn real(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

fn int(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per trial; reals at 17 significant digits, missing values empty.
pub fn emit_records_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_COLUMNS)?;
    for r in records {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            real(r.dstar),
            r.method.to_string(),
            real(r.witness_bound),
            int(r.k_count),
            real(r.runtime_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `field,value` rows; per-threshold fields are named `tail[c].field`.
pub fn emit_summary_csv<W: Write>(s: &Summary, out: W) -> Result<()> {
    let mut rows: Vec<(String, String)> = vec![
        ("kind".into(), s.kind.to_string()),
        ("method".into(), s.method.to_string()),
        ("N".into(), s.n_points.to_string()),
        ("d".into(), s.dim.to_string()),
        ("trials".into(), s.trials.to_string()),
        ("successes".into(), s.successes.to_string()),
        ("dstar_count".into(), s.dstar_count.to_string()),
        ("mean_dstar".into(), real(s.mean_dstar)),
        ("se_dstar".into(), real(s.se_dstar)),
        ("min_dstar".into(), real(s.min_dstar)),
        ("max_dstar".into(), real(s.max_dstar)),
    ];
    for t in &s.tails {
        let k = c_key(t.c);
        rows.push((format!("tail[{k}].threshold"), real(Some(t.threshold))));
        rows.push((format!("tail[{k}].frequency"), real(Some(t.frequency))));
        rows.push((format!("tail[{k}].exponent"), real(Some(t.exponent))));
        rows.push((format!("tail[{k}].reference"), real(t.reference)));
    }
    rows.extend([
        ("witness_count".into(), s.witness_count.to_string()),
        ("mean_k".into(), real(s.mean_k)),
        ("se_k".into(), real(s.se_k)),
        ("k_reference".into(), real(Some(s.k_reference))),
        ("mean_witness".into(), real(s.mean_witness)),
        ("se_witness".into(), real(s.se_witness)),
        ("witness_reference".into(), real(s.witness_reference)),
        ("freq_k_small".into(), real(s.freq_k_small)),
        ("k_small_reference".into(), real(Some(s.k_small_reference))),
        (
            "witness_violations".into(),
            s.witness_violations.to_string(),
        ),
    ]);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["field", "value"])?;
    for (k, v) in rows {
        w.write_record([k, v])?;
    }
    w.flush()?;
    Ok(())
}

/// The summary as one JSON object, tails keyed by `c` at 6 significant digits.
pub fn emit_summary_json<W: Write>(s: &Summary, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, s)?;
    writeln!(out)?;
    Ok(())
}
