use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entbroadcast"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, label: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(label).map(str::trim))
        .unwrap_or_else(|| panic!("no line starting with {label:?} in\n{text}"))
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("entbroadcast-cli-{}-{name}", std::process::id()))
}

#[test]
fn channel_symmetric_nonlocal() {
    let o = run(&[
        "channel",
        "--alpha",
        "0.70710678",
        "--p",
        "0.5",
        "--scenario",
        "nonlocal",
        "--pair",
        "a1b1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(field(&s, "concurrence (closed)"), "0.4");
    assert_eq!(field(&s, "F_max (SVD)"), "0.8");
    assert!(field(&s, "useful").starts_with("yes"));
}

#[test]
fn channel_symmetric_local_json() {
    let o = run(&[
        "channel",
        "--alpha",
        "0.7071067811865476",
        "--p",
        "0.5",
        "--scenario",
        "local",
        "--pair",
        "a2b2",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = v["concurrence_wootters"].as_f64().unwrap();
    assert!((c - 1.0 / 6.0).abs() < 1e-10);
    assert!((v["f_max_svd"].as_f64().unwrap() - 13.0 / 18.0).abs() < 1e-10);
    assert_eq!(v["useful"], true);
}

#[test]
fn channel_product_input_is_separable() {
    let o = run(&[
        "channel",
        "--alpha",
        "1",
        "--p",
        "0.5",
        "--scenario",
        "local",
        "--pair",
        "a1b1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(field(&s, "inseparable"), "false");
    assert!(field(&s, "useful").starts_with("no"));
}

#[test]
fn invalid_arguments_exit_3() {
    for args in [
        &[
            "channel",
            "--alpha",
            "1.5",
            "--p",
            "0.5",
            "--scenario",
            "local",
            "--pair",
            "a1b1",
        ][..],
        &[
            "channel",
            "--alpha",
            "0.5",
            "--p",
            "-0.1",
            "--scenario",
            "local",
            "--pair",
            "a1b1",
        ],
        &[
            "channel",
            "--alpha",
            "0.5",
            "--p",
            "0.5",
            "--scenario",
            "bogus",
            "--pair",
            "a1b1",
        ],
        &["sweep", "--alpha-steps", "1"],
        &["--jobs", "0", "regions"],
        &["no-such-command"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(3), "args {args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_exits_4() {
    let o = run(&["regions", "--out", "/nonexistent-dir/regions.txt"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn sweep_csv_is_deterministic_across_job_counts() {
    let args = ["sweep", "--alpha-steps", "11", "--p-steps", "11"];
    let a = run(&[&["--jobs", "1"][..], &args].concat());
    let b = run(&[&["--jobs", "3"][..], &args].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("alpha,p,scenario,pair,concurrence,n_value,f_max,inseparable,useful")
    );
    // 2 scenarios × 11 × 11 points × 2 pairs.
    assert_eq!(lines.count(), 484);
    assert!(!text.contains('\r'));
}

#[test]
fn sweep_symmetric_row() {
    let o = run(&[
        "sweep",
        "--scenario",
        "nonlocal",
        "--pair",
        "a1b1",
        "--alpha-range",
        "0.70710678118654752,1",
        "--alpha-steps",
        "2",
        "--p-steps",
        "3",
    ]);
    let text = stdout(&o);
    let row = text
        .lines()
        .find(|l| l.contains(",0.5,nonlocal,a1b1,"))
        .expect("row at p = 0.5");
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[4], "0.4");
    assert_eq!(cols[6], "0.8");
    assert_eq!(cols[7], "true");
}

#[test]
fn local_sweep_near_p_one_never_inseparable_for_second_pair() {
    let o = run(&[
        "sweep",
        "--scenario",
        "local",
        "--pair",
        "a2b2",
        "--p-range",
        "0.9,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() > 1);
    for row in text.lines().skip(1) {
        assert_eq!(row.split(',').nth(7), Some("false"), "{row}");
    }
}

#[test]
fn sweep_writes_json_file() {
    let path = temp_path("sweep.json");
    let o = run(&[
        "sweep",
        "--alpha-steps",
        "3",
        "--p-steps",
        "3",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["schema"], 1);
}

#[test]
fn regions_text_and_json() {
    let o = run(&["regions", "--scenario", "nonlocal"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(field(&s, "p window"), "(0.333333333333, 0.666666666667)");

    let o = run(&["regions", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    let regions = v["regions"].as_array().unwrap();
    assert_eq!(regions.len(), 2);
    let span = |i: usize| {
        let s = regions[i]["alpha_span"].as_array().unwrap();
        (s[0].as_f64().unwrap(), s[1].as_f64().unwrap())
    };
    let (local, nonlocal) = (span(0), span(1));
    assert!(nonlocal.0 < local.0 && local.1 < nonlocal.1);
}

#[test]
fn verify_passes_with_small_sample() {
    let o = run(&["verify", "--samples", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let s = stdout(&o);
    assert!(s.lines().filter(|l| l.starts_with("PASS")).count() >= 18);
    assert!(!s.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn verify_json_report() {
    let o = run(&["verify", "--samples", "1000", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
}

#[test]
fn injected_fault_is_caught() {
    let o = run(&[
        "verify",
        "--samples",
        "1000",
        "--inject-fault",
        "concurrence-x-sign",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    let fail = s
        .lines()
        .find(|l| l.starts_with("FAIL"))
        .expect("a failing claim");
    assert!(fail.contains("x-vs-wootters"));
}
