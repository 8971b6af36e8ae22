use std::fs;
use std::process::{Command, Output};

fn liouville(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(args)
        .env_remove("LIOUVILLE_GRID_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn branch_csv_has_header_and_64_rows() {
    let out = liouville(&["branch", "--R", "4", "--a-max", "6", "--steps", "64"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), liouville::io::BRANCH_HEADER);
    assert_eq!(lines.count(), 64);
    assert!(stderr(&out).contains("lambda_max"));
}

#[test]
fn output_is_deterministic() {
    let a = liouville(&["branch", "--steps", "32", "--grid-n", "512"]);
    let b = liouville(&["branch", "--steps", "32", "--grid-n", "512"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["branch", "--R", "4", "--steps", "0"][..],
        &["shape", "--V", "0.8"],
        &["shape", "--V", "-0.6"],
        &["branch", "--R", "-1"],
        &["bifurcate", "--beta", "0"],
        &["spectrum", "--l-max", "1"],
        &["nonsense"],
    ] {
        let out = liouville(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn bifurcate_reports_the_root() {
    let out = liouville(&["bifurcate", "--R", "4", "--beta", "0.625"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let a = json["state"]["A"].as_f64().unwrap();
    assert!((a - 0.376721107754).abs() < 1e-9, "{a}");
    assert!((json["phi_tilde_slope"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(json["beta_exceptional"].as_array().unwrap().len(), 5);
}

#[test]
fn spectrum_of_the_zero_state_is_the_bessel_table() {
    let out = liouville(&["spectrum", "--A", "0", "--n-max", "2", "--l-max", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let sigma00 = json["sigma"][0][0].as_f64().unwrap();
    let exact = 1.0 + (liouville::numerics::bessel::J0_FIRST_ZERO / 4.0).powi(2);
    assert!((sigma00 - exact).abs() < 1e-5, "{sigma00} vs {exact}");
    // The zero state has a purely oscillatory translation pair 1 ± iR²√(π/β).
    let im = json["E01"][0][1].as_f64().unwrap().abs();
    assert!(
        (im - 16.0 * (std::f64::consts::PI / 0.625).sqrt()).abs() < 1e-9,
        "{im}"
    );
}

#[test]
fn shape_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("shape.csv");
    let svg = dir.path().join("shape.svg");
    let out = liouville(&[
        "shape",
        "--V",
        "0.22",
        "--samples",
        "64",
        "--csv",
        csv.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().next().unwrap(), "phi,radius,x,y");
    assert_eq!(rows.lines().count(), 65);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    assert!(stderr(&out).contains("rho3"));
}

#[test]
fn verify_passes_and_perturbation_fails() {
    let out = liouville(&["verify", "--R", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let table = stdout(&out);
    assert!(table.lines().all(|l| l.starts_with("PASS")));
    assert!(table.contains("J(4) = 0.783213 < J(5) = 1.642909"));

    let out = liouville(&["verify", "--perturb"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out)
        .lines()
        .any(|l| l.starts_with("FAIL") && l.contains("pohozhaev")));
}

#[test]
fn bessel_lemma_prints_j() {
    let out = liouville(&["bessel-lemma", "--R", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((json["j_closed_form"].as_f64().unwrap() - 0.78321318046280).abs() < 1e-10);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.conf");
    let out_path = dir.path().join("branch.csv");
    fs::write(
        &config,
        format!(
            "# coarse run\nR = 3\nsteps = 40\nN = 256\noutput = {}\n",
            out_path.display()
        ),
    )
    .unwrap();

    let out = liouville(&[
        "branch",
        "--config",
        config.to_str().unwrap(),
        "--steps",
        "33",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let rows = fs::read_to_string(&out_path).unwrap();
    assert_eq!(rows.lines().count(), 34);
    let first: f64 = rows
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((first - 6.0 / 33.0).abs() < 1e-10);

    fs::write(&config, "R = 3\nbogus = 1\n").unwrap();
    let out = liouville(&["branch", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bogus"));
}

#[test]
fn grid_size_comes_from_the_environment_unless_flagged() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_liouville"));
        cmd.args(["spectrum", "--A", "1"])
            .env_remove("LIOUVILLE_GRID_N");
        if let Some(n) = env {
            cmd.env("LIOUVILLE_GRID_N", n);
        }
        if let Some(n) = flag {
            cmd.args(["--grid-n", n]);
        }
        cmd.output().unwrap()
    };
    let coarse = run(Some("256"), None);
    let fine = run(None, None);
    let flagged = run(Some("256"), Some("2048"));
    assert_eq!(coarse.status.code(), Some(0));
    assert_ne!(coarse.stdout, fine.stdout);
    assert_eq!(flagged.stdout, fine.stdout);
    assert_eq!(run(Some("abc"), None).status.code(), Some(2));
    assert_eq!(run(Some("102"), None).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_a_computational_failure() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.json");
    let out = liouville(&["bessel-lemma"]);
    assert_eq!(out.status.code(), Some(0));
    let out = liouville(&["spectrum", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("out.json"));
}
