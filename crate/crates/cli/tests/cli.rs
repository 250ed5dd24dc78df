use std::process::Command;

fn run_with(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("vknot").chain(args.iter().copied());
    let code = vknot_cli::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_with(args, "")
}

const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";

#[test]
fn trefoil_jk() {
    let (code, out, _) = run(&["jk", TREFOIL]);
    assert_eq!(code, 0);
    assert_eq!(out, "A^-4 + A^-12 - A^-16\n");
}

#[test]
fn empty_diagram_v0() {
    let (code, out, _) = run(&["vk", "", "--k", "0"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1");
}

#[test]
fn lemma31_passes() {
    let (code, out, _) = run(&["experiment", "lemma31", "--n-max", "12"]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("verdict: pass"));
    let (code, out, _) = run(&["experiment", "lemma31", "--n-max", "12", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn kink_bracket_from_stdin() {
    let (code, out, _) = run_with(&["bracket", "-"], "O1+ U1+\n");
    assert_eq!(code, 0);
    assert_eq!(out, "-A^3\n");
}

#[test]
fn code_from_file() {
    let path = std::env::temp_dir().join(format!("vknot-cli-{}.txt", std::process::id()));
    std::fs::write(&path, TREFOIL).unwrap();
    let arg = format!("@{}", path.display());
    let (code, out, _) = run(&["jk", &arg]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, 0);
    assert_eq!(out, "A^-4 + A^-12 - A^-16\n");
}

#[test]
fn parse_error_names_token() {
    let (code, out, err) = run(&["jk", "O1+ Q7"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("Q7"), "{err}");
    let (code, _, err) = run(&["twist", "eval", "O1+ U1+ | (0, 2, XYZ)", "--z", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("XYZ"), "{err}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["vk", TREFOIL]).0, 2);
    assert_eq!(run(&["--format", "yaml", "jk", TREFOIL]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn state_limit_flag() {
    let (code, _, err) = run(&["--limit", "2", "jk", TREFOIL]);
    assert_eq!(code, 2);
    assert!(err.contains("limit"), "{err}");
}

#[test]
fn state_limit_env() {
    let bin = env!("CARGO_BIN_EXE_vknot");
    let out = Command::new(bin).env("VKNOT_STATE_LIMIT", "2").args(["jk", TREFOIL]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(bin).env("VKNOT_STATE_LIMIT", "3").args(["jk", TREFOIL]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "A^-4 + A^-12 - A^-16\n");
}

#[test]
fn figure5_and_twist_eval_agree() {
    let (_, fig, _) = run(&["figure5", "--n", "3"]);
    let (_, direct, _) = run(&["jk", fig.trim()]);
    let (code, out, _) = run(&["twist", "eval", "| (0, 0, OSR)", "--z", "2", "--jk", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("z,code,f"));
    assert!(lines.next().unwrap().ends_with(direct.trim()), "{out} vs {direct}");
}

#[test]
fn series_csv() {
    let (code, out, _) = run(&["series", TREFOIL, "--order", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "k,v\n0,1\n1,0\n2,-48\n");
}

#[test]
fn gpv_scan_json() {
    let (code, out, _) = run(&["gpv", "scan", "--k", "2", "--alpha-max", "4", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn theorem2_and_kauffman_type() {
    let (code, out, _) = run(&["experiment", "theorem2", "--k", "2"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = run(&["experiment", "kauffman-type", "--k", "2", "--trials", "8"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["experiment", "kauffman-type", "--k", "2", "--trials", "10", "--seed", "7", "--format", "json"][..],
        &["experiment", "coefficients", "--n-max", "8", "--format", "csv"][..],
        &["experiment", "corollary33", "--k", "3"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a, b);
    }
}
