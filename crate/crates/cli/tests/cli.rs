use std::path::PathBuf;
use std::process::{Command, Output};

fn schurcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schurcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("schurcert-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// Data rows of a CSV output, skipping `#` lines.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(rows: &[Vec<String>], name: &str) -> usize {
    rows[0].iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn tkdiff_example_row() {
    let o = schurcert(&["tkdiff", "--q", "2", "--m", "1", "--n", "1", "--p", "6", "--oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 2);
    let closed: f64 = rows[1][column(&rows, "closed_form")].parse().unwrap();
    let oracle: f64 = rows[1][column(&rows, "oracle")].parse().unwrap();
    assert!((closed - 1.5874011).abs() < 1e-7);
    assert!((closed - oracle).abs() < 1e-10);
    assert_eq!(rows[1][column(&rows, "upper_ok")], "true");
    assert_eq!(rows[1][column(&rows, "lower_ok")], "true");
}

#[test]
fn tkdiff_grid_has_one_row_per_point() {
    let o = schurcert(&["tkdiff", "--q", "2,3", "--m", "1,2", "--n", "1", "--p", "6,inf", "--u", "1", "--v", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_rows(&stdout(&o)).len(), 1 + 8);
}

#[test]
fn config_echo_comes_first() {
    let o = schurcert(&["--seed", "7", "tkdiff", "--q", "2", "--m", "1", "--n", "1", "--p", "6"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schurcert tkdiff"));
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with('#')).collect();
    for key in ["# seed = 7", "# format = csv", "# q = [2]", "# oracle = false", "# cap = "] {
        assert!(header.iter().any(|l| l.starts_with(key)), "missing {key:?} in {header:?}");
    }
}

#[test]
fn cartan_identity_is_zero() {
    let m = scratch("id.json", r#"{"rows":3,"cols":3,"entries":["1","0","0","0","1","0","0","0","1"]}"#);
    for method in ["minors", "smith"] {
        let o = schurcert(&["cartan", "--q", "2", "--matrix", m.to_str().unwrap(), "--method", method]);
        assert_eq!(o.status.code(), Some(0));
        let rows = csv_rows(&stdout(&o));
        assert_eq!(rows[1][column(&rows, "lambda")], "0 0");
    }
}

#[test]
fn cartan_methods_agree() {
    let m = scratch("m.json", r#"{"rows":2,"cols":2,"entries":["9","1/3","0","1/9"]}"#);
    let run = |method| {
        let o = schurcert(&["cartan", "--q", "3", "--matrix", m.to_str().unwrap(), "--method", method]);
        assert_eq!(o.status.code(), Some(0));
        csv_rows(&stdout(&o))[1].clone()
    };
    assert_eq!(run("minors"), run("smith"));
    assert_eq!(run("minors")[0], "2");
}

#[test]
fn bad_inputs_exit_2() {
    assert_eq!(schurcert(&["tkdiff", "--q", "2", "--m", "1", "--n", "1", "--p", "x"]).status.code(), Some(2));
    assert_eq!(schurcert(&["tkdiff", "--q", "4", "--m", "1", "--n", "1", "--p", "6"]).status.code(), Some(2));
    assert_eq!(schurcert(&["cartan", "--q", "2", "--matrix", "/nonexistent.json"]).status.code(), Some(2));
    let singular = scratch("det9.json", r#"{"rows":2,"cols":2,"entries":["9","1/3","0","1"]}"#);
    let o = schurcert(&["cartan", "--q", "3", "--matrix", singular.to_str().unwrap(), "--method", "smith"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(schurcert(&["no-such-command"]).status.code() == Some(2));
}

#[test]
fn divergent_series_exits_3_with_blocks() {
    let o = schurcert(&["legendre-norm", "--p", "4", "--delta", "0.25", "--max-octaves", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.contains("# divergent = "));
    let rows = csv_rows(&text);
    assert_eq!(rows[0], ["start", "end", "block_sum", "ratio_to_previous"]);
    assert!(rows.len() > 10);
}

#[test]
fn legendre_norm_converges_for_p8() {
    let o = schurcert(&["legendre-norm", "--p", "8", "--delta", "0.25", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("certified: true"));
    assert!(text.lines().any(|l| l.starts_with("N: ")));
}

#[test]
fn real_decay_trace() {
    let o = schurcert(&["real-decay", "--p", "8", "--u", "3", "--v", "2", "--C1", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(csv_rows(&text).len(), 3);
    let bound: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("# bound = "))
        .unwrap()
        .parse()
        .unwrap();
    // e^{-3/4} + e^{-1/4} at a = 1/4
    assert!((bound - ((-0.75f64).exp() + (-0.25f64).exp())).abs() < 1e-12);
}

#[test]
fn path_lists_steps() {
    let o = schurcert(&["path", "--r", "3", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows = csv_rows(&text);
    assert_eq!(rows[0], ["step", "index", "polygon", "governing_break", "rule"]);
    assert!(text.contains("# steps = "));
}

#[test]
fn certify_is_a_text_record() {
    let values: Vec<String> = (0..8)
        .flat_map(|a| (0..8).map(move |b| format!(r#"{{"polygon":[{a},{b}],"value":{}}}"#, 1.0 / (1.0 + (a + b) as f64))))
        .collect();
    let f = scratch("f.json", &format!("[{}]", values.join(",")));
    let pairs = scratch("pairs.json", r#"[{"polygon":[2,2],"index":1}]"#);
    let o = schurcert(&[
        "certify", "--q", "2", "--n", "1", "--p", "6",
        "--f", f.to_str().unwrap(), "--pairs", pairs.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# format = text"));
    assert!(text.contains("polygon: (2,2)"));
    assert!(text.contains("bound: "));
}

#[test]
fn gamma2_and_multnorm_bracket() {
    let s = scratch("h.json", r#"{"rows":2,"cols":2,"entries":[[1,0],[1,0],[1,0],[-1,0]]}"#);
    let o = schurcert(&["gamma2", "--symbol", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    let upper: f64 = rows[1][column(&rows, "upper")].parse().unwrap();
    assert!((upper - 2f64.sqrt()).abs() < 1e-6);
    let o = schurcert(&["multnorm", "--symbol", s.to_str().unwrap(), "--p", "4", "--restarts", "2", "--iterations", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    let lower: f64 = rows[1][column(&rows, "lower")].parse().unwrap();
    let upper: f64 = rows[1][column(&rows, "upper")].parse().unwrap();
    assert!(lower > 1.0 && lower <= upper * (1.0 + 1e-9));
}

#[test]
fn output_is_deterministic() {
    let s = scratch("r.json", r#"{"rows":3,"cols":3,"entries":[[1,0],[0.5,0.5],[0,1],[2,0],[0,-1],[1,1],[0.3,0],[1,0],[-1,0.2]]}"#);
    let args = ["multnorm", "--symbol", s.to_str().unwrap(), "--p", "3", "--restarts", "3", "--iterations", "200"];
    let a = schurcert(&args);
    let b = schurcert(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("schurcert-out-{}.csv", std::process::id()));
    let o = schurcert(&["--out", path.to_str().unwrap(), "path", "--r", "3", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("# schurcert path"));
}

#[test]
fn selftest_single_criterion() {
    let o = schurcert(&["selftest", "--only", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# passed = 1/1"));
    assert!(!text.contains(" s)"), "timings must stay out of the output");
    assert_eq!(schurcert(&["selftest", "--only", "12"]).status.code(), Some(2));
}
