use std::process::{Command, Output};

fn netgram(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netgram")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = netgram(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows as maps from header name to field.
fn records(csv: &str) -> Vec<Vec<(String, String)>> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    lines.map(|l| header.iter().zip(l.split(',')).map(|(h, v)| (h.to_string(), v.to_string())).collect()).collect()
}

fn field(rec: &[(String, String)], name: &str) -> String {
    rec.iter().find(|(h, _)| h == name).map(|(_, v)| v.clone()).unwrap()
}

#[test]
fn directed_ring_is_perfectly_conditioned() {
    let out = stdout(&["analyze", "--family", "ring", "--directed", "--n", "10", "--gamma", "2"]);
    let rows = records(&out);
    assert_eq!(out.lines().next().unwrap(), "n,gamma,kappa,lambda_min,pd");
    assert_eq!(field(&rows[0], "kappa"), "1");
    assert_eq!(field(&rows[0], "pd"), "true");
}

#[test]
fn undirected_star_kappa_grows_with_size() {
    let out = stdout(&["sweep-size", "--family", "star", "--n", "5..50:5"]);
    assert_eq!(out.lines().next().unwrap(), "n,gamma,kappa,bound_eq4,bound_family,bound_theorem2,lambda_min");
    let kappas: Vec<f64> = records(&out).iter().map(|r| field(r, "kappa").parse().unwrap()).collect();
    assert_eq!(kappas.len(), 10);
    assert!(kappas.windows(2).all(|w| w[1] > w[0]), "{kappas:?}");
}

#[test]
fn root_led_path_lambda_min() {
    let out =
        stdout(&["analyze", "--family", "path", "--directed", "--n", "3", "--gamma", "2", "--leaders", "explicit:1"]);
    let rows = records(&out);
    assert_eq!(field(&rows[0], "lambda_min"), "0.0625");
    assert_eq!(field(&rows[0], "kappa"), "16");
}

#[test]
fn identical_runs_give_identical_bytes() {
    let args = ["sweep-leaders", "--n", "200", "--gamma", "2", "--divisors", "6", "--block-length", "10"];
    assert_eq!(netgram(&args).stdout, netgram(&args).stdout);
    let args = ["bounds", "--family", "complete", "--n", "12"];
    assert_eq!(netgram(&args).stdout, netgram(&args).stdout);
}

#[test]
fn generated_file_round_trips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("star.txt");
    let path = path.to_str().unwrap();
    stdout(&["gen", "--family", "star", "--directed", "--n", "6", "--output", path]);

    let from_file = stdout(&["analyze", "--input", path, "--gamma", "3", "--leaders", "explicit:1,2,3,4,5"]);
    let from_family = stdout(&[
        "analyze",
        "--family",
        "star",
        "--directed",
        "--n",
        "6",
        "--gamma",
        "3",
        "--leaders",
        "explicit:1,2,3,4,5",
    ]);
    assert_eq!(from_file, from_family);
}

#[test]
fn bounds_are_all_satisfied_for_the_ring() {
    let out = stdout(&["bounds", "--family", "ring", "--n", "12", "--gamma", "2.5"]);
    let rows = records(&out);
    let names: Vec<String> = rows.iter().map(|r| field(r, "bound_name")).collect();
    for name in ["eq4", "family", "family_printed", "theorem2", "schur", "schur_coarse", "lemma1_lower_1"] {
        assert!(names.iter().any(|n| n == name), "missing {name}");
    }
    assert!(rows.iter().all(|r| field(r, "satisfied") == "true"));
}

#[test]
fn energy_reaches_target() {
    let out = stdout(&[
        "energy",
        "--family",
        "path",
        "--directed",
        "--n",
        "4",
        "--gamma",
        "2",
        "--target",
        "e4",
        "--steps",
        "6",
    ]);
    let rows = records(&out);
    let get =
        |q: &str| -> f64 { field(rows.iter().find(|r| field(r, "quantity") == q).unwrap(), "value").parse().unwrap() };
    assert!(get("steering_error") < 1e-12);
    assert!((get("min_energy") - get("realized_energy")).abs() < 1e-12 * get("min_energy"));
    assert_eq!(rows.iter().filter(|r| field(r, "quantity") == "input_norm").count(), 6);
}

#[test]
fn invalid_configuration_exits_with_one() {
    let out = netgram(&["analyze", "--family", "star", "--n", "10", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));

    assert_eq!(netgram(&["analyze", "--family", "complete", "--directed", "--n", "4"]).status.code(), Some(1));
    assert_eq!(netgram(&["analyze", "--n", "4"]).status.code(), Some(1));
    assert_eq!(netgram(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(netgram(&["--help"]).status.code(), Some(0));
}

#[test]
fn numerical_failure_exits_with_two() {
    // Only node 1 leads a 3-node undirected path: steering in one step needs
    // an invertible G(0) = B B^T, which is singular.
    let out = netgram(&[
        "energy",
        "--family",
        "path",
        "--n",
        "3",
        "--gamma",
        "3",
        "--leaders",
        "explicit:1",
        "--target",
        "1,1,1",
        "--steps",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("numerical failure: "));
}
