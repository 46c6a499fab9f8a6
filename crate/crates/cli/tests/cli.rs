use std::io::Write as _;
use std::process::{Command, Stdio};

use serde_json::Value;

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn run_with(args: &[&str], input: &str) -> Output {
    let mut argv = vec!["slodowy"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = slodowy_cli::run(argv, &mut input.as_bytes(), &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn run(args: &[&str]) -> Output {
    run_with(args, "")
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.code, 0, "{args:?}: {}", o.err);
    serde_json::from_str(&o.out).unwrap()
}

#[test]
fn decompose_two_factors() {
    let v = json(&["decompose", "4,4,4,2,2,1,1", "5,4,3,3,2,1"]);
    assert_eq!(v["total_count"], 12);
    assert_eq!(v["slice_dim"], 10);
    let factors = v["factors"].as_array().unwrap();
    assert_eq!(factors.len(), 2);
    assert_eq!(factors[0]["d"], serde_json::json!([3, 2, 1]));
    assert_eq!(factors[0]["dp"], serde_json::json!([2, 2, 1, 1]));
    assert_eq!(factors[0]["count"], 6);
    assert_eq!(factors[1]["d"], serde_json::json!([2, 1]));
    assert_eq!(factors[1]["count"], 2);
}

#[test]
fn decompose_methods_agree() {
    let args = ["4,4,4,2,2,1,1", "5,4,3,3,2,1"];
    let young = json(&["decompose", args[0], args[1], "--method", "young"]);
    let quiver = json(&["decompose", args[0], args[1], "--method", "quiver"]);
    assert_eq!(young["factors"], quiver["factors"]);
}

#[test]
fn counts() {
    assert_eq!(run(&["count", "5,4,3,1"]).out.trim(), "60");
    assert_eq!(run(&["count-slice", "5,3,3,2", "5,4,3,1"]).out.trim(), "3");
    assert_eq!(
        run(&["count-slice", "4,4,4,2,2,1,1", "5,4,3,3,2,1"])
            .out
            .trim(),
        "12"
    );
    assert_eq!(run(&["leq", "2,1", "3"]).out.trim(), "true");
    assert_eq!(run(&["leq", "3", "2,1"]).out.trim(), "false");
}

#[test]
fn input_errors_exit_one() {
    let o = run(&["decompose", "3,3", "2,2,2"]);
    assert_eq!(o.code, 1);
    assert!(o.err.starts_with("NotNested"), "{}", o.err);
    assert!(o.out.is_empty());
    let o = run(&["decompose", "2,1", "4"]);
    assert_eq!(o.code, 1);
    assert!(o.err.starts_with("SizeMismatch"), "{}", o.err);
    let o = run(&["count", "3,x"]);
    assert_eq!(o.code, 1);
}

#[test]
fn usage_errors() {
    for args in [&["bogus"][..], &["count", "--frob", "3"], &[]] {
        let o = run(args);
        assert_ne!(o.code, 0, "{args:?}");
        assert!(o.err.contains("Usage"), "{args:?}: {}", o.err);
    }
    let o = run(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("decompose"));
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["decompose", "4,4,4,2,2,1,1", "5,4,3,3,2,1"][..],
        &["chambers", "2,2,1,1", "3,2,1", "--format", "json"],
        &["quiver-sample", "3,2,1", "--seed", "9"],
        &["dim", "2,2,1", "3,2"],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.code, 0, "{args:?}: {}", a.err);
        assert_eq!(a.out, b.out, "{args:?}");
    }
}

#[test]
fn flops_dot() {
    let o = run(&["flops", "3,2,1"]);
    assert_eq!(o.code, 0);
    assert!(o.out.starts_with("graph "));
    assert!(o.out.trim_end().ends_with('}'));
    assert_eq!(o.out.matches(" -- ").count(), 6);
    let v = json(&["flops", "3,2,1", "--format", "json"]);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 6);
}

#[test]
fn chambers_dot() {
    let o = run(&["chambers", "3,2,1", "--dot"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert_eq!(o.out, run(&["flops", "3,2,1"]).out);
    let o = run(&["chambers", "2,1,1", "3,1", "--dot"]);
    assert_eq!(o.code, 0, "{}", o.err);
    assert!(o.out.starts_with("graph slice_flops {"));
    assert_eq!(o.out.matches(" -- ").count(), 2);
    assert_eq!(
        o.out,
        run(&["chambers", "2,1,1", "3,1", "--format", "dot"]).out
    );
}

#[test]
fn chambers_of_a_slice() {
    let v = json(&[
        "chambers",
        "4,4,4,2,2,1,1",
        "5,4,3,3,2,1",
        "--format",
        "json",
    ]);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 12);
    assert_eq!(v["factors"][0]["chambers"].as_array().unwrap().len(), 6);
    let o = run(&["chambers", "3,2,1", "--at", "1,1"]);
    assert_eq!(o.code, 0, "{}", o.err);
    let o = run(&["chambers", "3,2,1", "--at", "1,-1"]);
    assert_eq!(o.code, 0, "{}", o.err);
}

#[test]
fn sample_then_check() {
    for args in [
        &["quiver-sample", "3,2,1", "--seed", "5"][..],
        &["quiver-sample", "2,2,1", "3,2", "--seed", "2"],
    ] {
        let sample = run(args);
        assert_eq!(sample.code, 0, "{}", sample.err);
        let o = run_with(&["quiver-check", "-"], &sample.out);
        assert_eq!(o.code, 0, "{}", o.err);
        let v: Value = serde_json::from_str(&o.out).unwrap();
        assert_eq!(v["on_fiber"], true);
    }
    let sample = run(&["quiver-sample", "3,2,1", "--seed", "5"]);
    let v: Value =
        serde_json::from_str(&run_with(&["quiver-check", "-"], &sample.out).out).unwrap();
    assert_eq!(v["stable"], true);
    assert_eq!(v["all_A_surjective"], true);
    assert_eq!(v["theta"]["jordan_type"], serde_json::json!([3, 2, 1]));
    let unstable = run(&["quiver-sample", "3,2,1", "--unstable", "--seed", "5"]);
    let v: Value =
        serde_json::from_str(&run_with(&["quiver-check", "-"], &unstable.out).out).unwrap();
    assert_eq!(v["on_fiber"], true);
    assert_eq!(v["stable"], false);
}

#[test]
fn reflection_round_trip() {
    let sample = run(&["quiver-sample", "3,2,1", "--seed", "5"]).out;
    let check = |rep: &str, extra: &[&str]| -> Value {
        let mut args = vec!["quiver-check", "-"];
        args.extend_from_slice(extra);
        let o = run_with(&args, rep);
        assert_eq!(o.code, 0, "{}", o.err);
        serde_json::from_str(&o.out).unwrap()
    };
    let original = check(&sample, &[]);
    let once = check(&sample, &["--reflect", "1"]);
    assert_eq!(once["reflected"]["v"], serde_json::json!([4, 1]));
    let reflected = serde_json::to_string(&once["reflected"]).unwrap();
    let twice = check(&reflected, &["--reflect", "1", "--inverse"]);
    assert_eq!(twice["on_fiber"], true);
    let back = serde_json::to_string(&twice["reflected"]).unwrap();
    let restored = check(&back, &[]);
    assert_eq!(restored["v"], original["v"]);
    assert_eq!(restored["theta"], original["theta"]);
}

#[test]
fn malformed_representation() {
    let o = run_with(&["quiver-check", "-"], "{not json");
    assert_eq!(o.code, 1);
    let o = run_with(
        &["quiver-check", "-"],
        r#"{"v":[1],"w":[2],"A":[],"B":[],"Gamma":[],"Delta":[]}"#,
    );
    assert_eq!(o.code, 1, "{}", o.out);
}

#[test]
fn sl2_and_dims() {
    let o = run(&["sl2", "3,1"]);
    assert_eq!(o.code, 0);
    assert!(o.out.contains("triple relations: true"));
    assert!(o.out.contains("transversal: true"));
    let v = json(&["dim", "4,4,4,2,2,1,1", "5,4,3,3,2,1", "--format", "json"]);
    assert_eq!(v["slice_dim"], 10);
    assert_eq!(v["sampled_dim"], 10);
    assert_eq!(run(&["sl2", "1,1"]).code, 1);
}

#[test]
fn verify_small() {
    let o = run(&["verify", "--trials", "10", "--seed", "3"]);
    assert_eq!(o.code, 0, "{}", o.out);
    assert!(o.out.contains("all suites pass"));
    assert!(!o.out.contains("FAIL"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_slodowy");
    let out = Command::new(bin)
        .args(["count", "5,4,3,1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "60");
    let out = Command::new(bin)
        .args(["decompose", "3,3", "2,2,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let mut child = Command::new(bin)
        .args(["quiver-check"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let sample = run(&["quiver-sample", "2,1", "--seed", "1"]).out;
    child
        .stdin
        .take()
        .unwrap()
        .write_all(sample.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
}
