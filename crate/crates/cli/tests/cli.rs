use std::process::{Command, Output};

fn carlitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carlitz"))
        .args(args)
        .env_remove("CARLITZ_P")
        .env_remove("CARLITZ_Q")
        .env_remove("CARLITZ_PREC")
        .output()
        .expect("run carlitz")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn pi_has_leading_exponent_three_halves() {
    let o = carlitz(&["compute", "pi", "--q", "3", "--prec", "12", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["q"], 3);
    assert_eq!(v["lattice_den"], 2);
    let text = stdout(&carlitz(&["compute", "pi", "--q", "3", "--prec", "12"]));
    let body = text.lines().nth(1).unwrap();
    assert!(body.contains("θ^(3/2)"), "{body}");
    assert!(body.ends_with("O(θ^(-12))"), "{body}");
}

#[test]
fn d1_is_theta_cubed_minus_theta() {
    let o = carlitz(&["compute", "dn", "--n", "1", "--q", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().last().unwrap(), "θ^3 + 2θ");
}

#[test]
fn zeta_reports_term_counts() {
    let o = carlitz(&["compute", "zeta", "--n", "1", "--s", "0", "--prec", "8", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 1);
    assert!(v["enumerated_terms"].as_u64().unwrap() <= v["nominal_terms"].as_u64().unwrap());
}

#[test]
fn suites_verify() {
    for args in [
        vec!["verify", "carlitz-identity"],
        vec!["verify", "digit-ring", "--p", "3", "--range", "27"],
        vec!["verify", "theorem5", "--q", "3", "--s", "2", "--prec", "12"],
    ] {
        let o = carlitz(&args);
        assert!(o.status.success(), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).lines().next().unwrap().contains("verified"));
    }
}

#[test]
fn verify_json_is_a_report() {
    let o = carlitz(&["verify", "kernel", "--q", "2", "--prec", "10", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["checks"].as_array().is_some_and(|c| !c.is_empty()));
}

#[test]
fn exit_codes() {
    assert_eq!(carlitz(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(carlitz(&["compute", "pi", "--q", "6"]).status.code(), Some(2));
    assert_eq!(carlitz(&["compute", "pi", "--prec", "0"]).status.code(), Some(2));
    assert_eq!(carlitz(&["compute", "zeta", "--budget", "5"]).status.code(), Some(3));
}

#[test]
fn environment_overrides_defaults() {
    let o = Command::new(env!("CARGO_BIN_EXE_carlitz"))
        .args(["compute", "pi", "--format", "json"])
        .env("CARLITZ_Q", "2")
        .env("CARLITZ_PREC", "5")
        .output()
        .unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["q"], 2);
    assert_eq!(v["precision"], "5");
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "solve", "--prec", "10", "--seed", "7", "--format", "json"];
    assert_eq!(carlitz(&args).stdout, carlitz(&args).stdout);
}
