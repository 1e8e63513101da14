use std::process::{Command, Output};

fn dirac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_exit_codes() {
    let ok = dirac(&["verify", "standard_courant_R3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("kind = L and L* Dirac, Lie bialgebroid"));

    let broken = dirac(&["verify", "broken_aff1"]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(stdout(&broken).contains("violated = {phi,psi}+{mu,gamma}"));

    let missing = dirac(&["verify", "no/such/file.toml"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn abelian_spec_passes_trivially() {
    let o = dirac(&["verify", "abelian_k3_point"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = std::env::temp_dir().join(format!("dirac-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.toml");
    std::fs::write(&path, "[metadata]\nname = \"bad\"\n\n[dimensions]\nn = 1\nk = 1\n\n[rho_l]\n\"1,1\" = \"q1 +\"\n").unwrap();
    let o = dirac(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 9"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bracket_of_vector_fields() {
    let o = dirac(&["bracket", "standard_courant_R3", "e1", "q1*e2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[[e1,e2]] = e2"));
    let bad = dirac(&["bracket", "standard_courant_R3", "q1", "e2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn deform_resumes_from_a_json_report() {
    let dir = std::env::temp_dir().join(format!("dirac-cli-resume-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let first = dirac(&["deform", "poisson_R2", "--omega1", "q2*f1*f2", "--order", "2", "--json"]);
    assert_eq!(first.status.code(), Some(0));
    let path = dir.join("state.json");
    std::fs::write(&path, &first.stdout).unwrap();
    let resumed = dirac(&["deform", "poisson_R2", "--resume", path.to_str().unwrap(), "--order", "4"]);
    assert_eq!(resumed.status.code(), Some(0));
    assert!(stdout(&resumed).contains("state: order 4 verified through 4"));

    let other = dirac(&["deform", "poisson_R3", "--resume", path.to_str().unwrap(), "--order", "4"]);
    assert_eq!(other.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn deform_rejects_non_closed_first_order() {
    let o = dirac(&["deform", "standard_courant_R3", "--omega1", "q3*f1*f2", "--order", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[fail] order 1"));
}

#[test]
fn deform_reports_unconditional_obstruction_on_point_models() {
    let o = dirac(&["deform", "obstructed_k4_point", "--omega1", "f3*f4", "--order", "2", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["checks"][1]["status"], "fail");
}

#[test]
fn cohomology_and_gauge() {
    let o = dirac(&["cohomology", "aff1_point", "--degree", "2"]);
    assert!(stdout(&o).contains("dim H^2 = 0"));
    let closed = dirac(&["gauge", "standard_courant_R3", "--B", "f1*f2 - q1*f1*f3", "--bound", "1"]);
    assert_eq!(closed.status.code(), Some(0), "{}", stdout(&closed));
    let open = dirac(&["gauge", "standard_courant_R3", "--B", "q3*f1*f2", "--bound", "1"]);
    assert_eq!(open.status.code(), Some(1));
}

#[test]
fn json_and_text_verdicts_agree() {
    for args in [["verify", "su2_phi_point"], ["verify", "broken_aff1"]] {
        let text = stdout(&dirac(&args));
        let json: serde_json::Value = serde_json::from_slice(&dirac(&[args[0], args[1], "--json"]).stdout).unwrap();
        for check in json["checks"].as_array().unwrap() {
            let line = format!("[{}] {}", check["status"].as_str().unwrap(), check["name"].as_str().unwrap());
            assert!(text.contains(&line), "{line}");
        }
        assert!(text.contains(&format!("status: {}", json["status"].as_str().unwrap())));
    }
}

#[test]
fn timing_is_opt_in() {
    let plain = dirac(&["cohomology", "aff1_point", "--degree", "1", "--json"]);
    assert!(!stdout(&plain).contains("timing_ms"));
    let timed = dirac(&["cohomology", "aff1_point", "--degree", "1", "--json", "--timing"]);
    assert!(stdout(&timed).contains("timing_ms"));
}

#[test]
fn bundled_specs_print_canonically() {
    let list = stdout(&dirac(&["specs"]));
    assert!(list.lines().any(|l| l == "aff1_point"));
    let text = stdout(&dirac(&["specs", "aff1_point"]));
    assert!(text.starts_with("[metadata]\nname = \"aff1_point\""));
}
