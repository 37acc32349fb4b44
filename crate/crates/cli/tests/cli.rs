use std::path::Path;
use std::process::{Command, Output};

fn lhsdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lhsdisc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value(text: &str, key: &str) -> String {
    let prefix = format!("{key} = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no `{key}` in output:\n{text}"))
        .to_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sample_then_stardisc() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p.txt");
    let o = lhsdisc(&[
        "sample",
        "--kind",
        "lhs",
        "--n",
        "16",
        "--d",
        "2",
        "--seed",
        "7",
        "--out",
        path_str(&p),
    ]);
    assert!(o.status.success());

    let o = lhsdisc(&["stardisc", "--in", path_str(&p), "--method", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let v: f64 = value(&text, "dstar").parse().unwrap();
    assert!(v > 0.0 && v <= 1.0);
    assert_eq!(value(&text, "argmax_box").split_whitespace().count(), 2);

    let o = lhsdisc(&["stardisc", "--in", path_str(&p), "--method", "exact2d"]);
    assert_eq!(value(&stdout(&o), "dstar"), value(&text, "dstar"));

    let o = lhsdisc(&[
        "stardisc",
        "--in",
        path_str(&p),
        "--method",
        "estimate",
        "--budget",
        "50",
    ]);
    let est: f64 = value(&stdout(&o), "dstar").parse().unwrap();
    assert!(est <= v);
}

#[test]
fn sample_to_stdout_is_reproducible() {
    let a = lhsdisc(&[
        "sample", "--kind", "uniform", "--n", "5", "--d", "3", "--seed", "1",
    ]);
    let b = lhsdisc(&[
        "sample", "--kind", "uniform", "--n", "5", "--d", "3", "--seed", "1",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# pointset v1\n5 3\n"));
}

#[test]
fn witness_strict_gate_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.txt");
    lhsdisc(&[
        "sample",
        "--kind",
        "lhs",
        "--n",
        "16",
        "--d",
        "2",
        "--seed",
        "7",
        "--out",
        path_str(&small),
    ]);
    assert_eq!(
        lhsdisc(&["witness", "--in", path_str(&small)])
            .status
            .code(),
        Some(2)
    );

    let big = dir.path().join("big.txt");
    lhsdisc(&[
        "sample",
        "--kind",
        "lhs",
        "--n",
        "3200",
        "--d",
        "2",
        "--seed",
        "3",
        "--out",
        path_str(&big),
    ]);
    let o = lhsdisc(&["witness", "--in", path_str(&big)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text
        .trim_end()
        .lines()
        .last()
        .unwrap()
        .starts_with("lower_bound = "));
    assert!(text.contains("[step 2]"));
    assert_eq!(value(&text, "n_slab"), "20");
}

#[test]
fn prob_subcommands() {
    let o = lhsdisc(&["prob", "lemma4", "--n", "16", "--p", "0.25"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "result"), "pass");

    let o = lhsdisc(&["prob", "theorem3", "--N", "20", "--W", "10", "--n", "8"]);
    assert_eq!(o.status.code(), Some(0));

    // n p (1 - p) < 1
    let o = lhsdisc(&["prob", "theorem3", "--N", "10", "--W", "5", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = lhsdisc(&["prob", "theorem5", "--k", "30", "--q", "0.4", "--t", "0.1"]);
    assert_eq!(o.status.code(), Some(0));

    let o = lhsdisc(&[
        "prob", "lemma6", "--depth", "6", "--q", "0.0125", "--trees", "3", "--seed", "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("result = pass").count(), 3);

    let o = lhsdisc(&["prob", "lemma6", "--depth", "30", "--q", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(
        lhsdisc(&["sample", "--kind", "lhs", "--n", "3", "--d", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        lhsdisc(&[
            "stardisc",
            "--in",
            "/nonexistent/p.txt",
            "--method",
            "exact"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(lhsdisc(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn help_documents_formats() {
    let o = lhsdisc(&["sample", "--help"]);
    assert!(stdout(&o).contains("# pointset v1"));
    let o = lhsdisc(&["experiment", "--help"]);
    let text = stdout(&o);
    for key in ["master_seed", "c_values", "strict_witness", "runtime_ms"] {
        assert!(text.contains(key), "{key}");
    }
}

#[test]
fn experiment_is_bit_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        "kind = lhs\nN = 64\nd = 2\ntrials = 20\nmaster_seed = 11\nc_values = 1, 3, 4\nmethod = exact2d\n",
    )
    .unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let rec = dir.path().join(format!("rec{run}.csv"));
        let sum = dir.path().join(format!("sum{run}.json"));
        let o = lhsdisc(&[
            "experiment",
            "--config",
            path_str(&cfg),
            "--out-records",
            path_str(&rec),
            "--out-summary",
            path_str(&sum),
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        outputs.push((std::fs::read(&rec).unwrap(), std::fs::read(&sum).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let records = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert_eq!(records.lines().count(), 21);
    assert!(records.starts_with("trial,seed,dstar,method,witness_bound,k_count,runtime_ms\n"));

    let summary = String::from_utf8(outputs[0].1.clone()).unwrap();
    assert!(summary.trim_start().starts_with('{'));
    assert!(summary.contains("\"tails\"") && summary.contains("\"3\": {"));

    // a .csv summary path switches the format
    let sum = dir.path().join("sum.csv");
    let rec = dir.path().join("rec.csv");
    let o = lhsdisc(&[
        "experiment",
        "--config",
        path_str(&cfg),
        "--out-records",
        path_str(&rec),
        "--out-summary",
        path_str(&sum),
        "--check",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&sum)
        .unwrap()
        .starts_with("field,value\n"));
    assert!(stdout(&o).contains("check = theorem1"));
}
