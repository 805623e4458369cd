//! End-to-end tests that spawn the `zerolab` binary.

use std::path::Path;
use std::process::{Command, Output};
use zerolab_core::kernels::indistinguishability_report;
use zerolab_core::lfun::{
    density_from_zeros, dump_coefficients, dump_zeros, explicit_formula_density,
    parse_coefficients, parse_zeros, AutoRep,
};
use zerolab_core::testfn::pair_from_spec;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerolab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerolab"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 stderr")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("valid json report")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Last CSV row split into cells.
fn last_row(out: &Output) -> Vec<String> {
    let text = stdout(out);
    let line = text.trim_end().lines().last().expect("csv row");
    line.split(',').map(str::to_string).collect()
}

#[test]
fn nonvanish_reports_exact_rationals() {
    let out = run(&["nonvanish", "--support", "2/3", "--out", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["support"], "2/3");
    assert_eq!(v["multiplicity_bound"], "2");
    assert_eq!(v["p0_lower"], "-1");
    assert_eq!(v["nontrivial"], false);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["subcommand"], "nonvanish");

    let out = run(&["nonvanish", "--support", "3", "--out", "json"]);
    let v = json(&out);
    assert_eq!(v["multiplicity_bound"], "5/6");
    assert_eq!(v["p0_lower"], "1/6");
    assert_eq!(v["nontrivial"], true);

    let out = run(&["nonvanish", "--support", "0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn reruns_are_byte_identical_for_any_thread_count() {
    let args = [
        "rmt-density", "--group", "USp", "--dim", "3", "--draws", "50", "--seed", "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let one = run_env(&args, "ZEROLAB_THREADS", "1");
    let four = run_env(&args, "ZEROLAB_THREADS", "4");
    assert_eq!(a.stdout, one.stdout);
    assert_eq!(a.stdout, four.stdout);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# defaults\ndraws = 40\nseed = 7\ndim = 4\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_cfg = run(&["rmt-density", "--group", "U", "--config", cfg]);
    assert_eq!(code(&from_cfg), 0);
    let row = last_row(&from_cfg);
    assert_eq!(row[2], "40", "draws comes from the config file");

    let overridden = run(&[
        "rmt-density", "--group", "U", "--config", cfg, "--draws", "20",
    ]);
    let row = last_row(&overridden);
    assert_eq!(row[2], "20", "explicit flag beats the config file");

    let direct = run(&[
        "rmt-density", "--group", "U", "--dim", "4", "--draws", "40", "--seed", "7",
    ]);
    assert_eq!(
        from_cfg.stdout, direct.stdout,
        "config-file run equals the equivalent all-flags run"
    );
}

#[test]
fn malformed_config_and_coefficients_are_input_errors() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = dir.path().join("broken.cfg");
    std::fs::write(&cfg, "ok = 1\nline without separator\n").unwrap();
    let out = run(&["primes", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 2"), "stderr: {}", stderr(&out));

    let coeffs = dir.path().join("bad.coeffs");
    std::fs::write(&coeffs, "conductor 100 root +1\n2 0.5\n9 0.5\n").unwrap();
    let out = run(&[
        "ef-density", "--coefficients", coeffs.to_str().unwrap(), "--test-fn", "fejer:0.1",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 3"), "stderr: {}", stderr(&out));

    let out = run(&["ef-density", "--test-fn", "fejer:0.1"]);
    assert_eq!(code(&out), 1, "missing --coefficients is an input error");
    assert!(stderr(&out).contains("--coefficients"));
}

#[test]
fn unknown_subcommand_and_bad_flags_exit_one() {
    let out = run(&["no-such-command"]);
    assert_eq!(code(&out), 1);
    let out = run(&["rmt-density", "--group", "SOwrong"]);
    assert_eq!(code(&out), 1);
    let out = run(&["rmt-density", "--draws", "two"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--draws"));
}

#[test]
fn help_and_version_exit_zero() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let out = run(&["rmt-density", "--help"]);
    assert_eq!(code(&out), 0);
    let out = run(&["--version"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn kernel_pair_lists_all_five_closed_forms() {
    let out = run(&["kernel-pair", "--test-fn", "fejer:0.8"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.trim_end().lines().skip(1).collect();
    assert_eq!(rows.len(), 5);
    let value_of = |label: &str| -> f64 {
        rows.iter()
            .find(|r| r.starts_with(&format!("{label},")))
            .unwrap_or_else(|| panic!("row for {label}"))
            .split(',')
            .nth(2)
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((value_of("U") - 1.0).abs() <= 1e-12);
    assert!((value_of("Sp") - 0.6).abs() <= 1e-12);
    assert!((value_of("O") - 1.4).abs() <= 1e-12);

    let single = run(&["kernel-pair", "--class", "O", "--test-fn", "fejer:0.8"]);
    let row = last_row(&single);
    assert_eq!(row[0], "O");
    let v: f64 = row[2].parse().unwrap();
    assert!((v - 1.4).abs() <= 1e-12);

    let bad = run(&["kernel-pair", "--class", "SU"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn primes_counts_up_to_limit() {
    let out = run(&["primes", "--limit", "100"]);
    assert_eq!(code(&out), 0);
    assert_eq!(last_row(&out), vec!["100", "25", "97"]);
}

#[test]
fn verify_testfn_gates_on_tolerance() {
    let ok = run(&["verify-testfn", "--test-fn", "fejer:0.8"]);
    assert_eq!(code(&ok), 0);
    let row = last_row(&ok);
    assert_eq!(row.last().unwrap(), "true");

    let strict = run(&["verify-testfn", "--test-fn", "fejer:0.8", "--tol", "1e-18"]);
    assert_eq!(code(&strict), 2, "failed verification is a numeric failure");
    let row = last_row(&strict);
    assert_eq!(row.last().unwrap(), "false");
}

fn write_constant_theta_file(dir: &Path) -> (String, AutoRep) {
    // e^10; the dumped horizon snaps to the largest listed prime, so list
    // primes through 23 (a prime) to keep the round trip exact.
    let rep = AutoRep::with_constant_theta(22026.465794806718, 23, 1.0).expect("valid rep");
    let path = dir.join("constant-theta.coeffs");
    std::fs::write(&path, dump_coefficients(&rep)).unwrap();
    (path.to_str().unwrap().to_string(), rep)
}

#[test]
fn ef_density_matches_the_library_bit_for_bit() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (path, rep) = write_constant_theta_file(dir.path());
    let round_tripped = parse_coefficients(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rep, round_tripped);

    let fp = pair_from_spec("fejer:0.3").unwrap();
    let expected = explicit_formula_density(&rep, &fp, 3).unwrap();

    let out = run(&[
        "ef-density", "--coefficients", &path, "--test-fn", "fejer:0.3", "--out", "json",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["value"].as_f64().unwrap().to_bits(), expected.value.to_bits());
    assert_eq!(
        v["tail_bound"].as_f64().unwrap().to_bits(),
        expected.tail_bound.to_bits()
    );
    let per_nu = v["per_nu"].as_array().unwrap();
    assert_eq!(per_nu.len(), expected.per_nu.len());
    for (got, want) in per_nu.iter().zip(&expected.per_nu) {
        assert_eq!(got.as_f64().unwrap().to_bits(), want.to_bits());
    }

    // Support 0.8 needs primes up to e^8; the file stops at 23.
    let too_wide = run(&["ef-density", "--coefficients", &path, "--test-fn", "fejer:0.8"]);
    assert_eq!(code(&too_wide), 1);
    assert!(stderr(&too_wide).contains("horizon"));
}

#[test]
fn density_from_zeros_matches_the_library() {
    let dir = tempfile::tempdir().expect("tempdir");
    let text = "conductor 22026.465794806718\n0\n1.2\n-1.2\n3.5\n";
    let path = dir.path().join("zeros.txt");
    std::fs::write(&path, text).unwrap();

    let record = parse_zeros(text).unwrap();
    assert_eq!(dump_zeros(&record), text);
    let fp = pair_from_spec("fejer:0.8").unwrap();
    let expected = density_from_zeros(&record, &fp).unwrap();

    let out = run(&[
        "density-from-zeros", "--zeros", path.to_str().unwrap(), "--out", "json",
    ]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["ordinates"], 4);
    assert_eq!(v["value"].as_f64().unwrap().to_bits(), expected.to_bits());
}

#[test]
fn sieve_check_round_trips_exactly() {
    let out = run(&["sieve-check", "--q-max", "200", "--vectors", "3", "--seed", "9"]);
    assert_eq!(code(&out), 0);
    assert_eq!(last_row(&out), vec!["200", "3", "600", "all exact"]);
}

#[test]
fn indist_check_reports_the_regime() {
    let below = run(&["indist-check", "--test-fn", "fejer:0.9", "--out", "json"]);
    assert_eq!(code(&below), 0);
    let v = json(&below);
    assert_eq!(v["below_one"], true);
    let report = indistinguishability_report(&pair_from_spec("fejer:0.9").unwrap());
    assert_eq!(
        v["orthogonal"].as_f64().unwrap().to_bits(),
        report.orthogonal.to_bits()
    );

    let above = run(&["indist-check", "--test-fn", "fejer:1.5", "--out", "json"]);
    assert_eq!(code(&above), 0, "a split above support 1 is expected, not an error");
    let v = json(&above);
    assert_eq!(v["below_one"], false);
    assert!(v["max_spread"].as_f64().unwrap() > 0.1);
}

#[test]
fn second_moment_targets_half_phi_zero() {
    let out = run(&["second-moment", "--log-conductor", "30", "--test-fn", "fejer:1"]);
    assert_eq!(code(&out), 0);
    let row = last_row(&out);
    assert_eq!(row[3], "0.5");
    let sum: f64 = row[2].parse().unwrap();
    let dev: f64 = row[4].parse().unwrap();
    assert!((sum - 0.5).abs() <= 0.1);
    assert!((dev - (sum - 0.5).abs()).abs() <= 1e-15);
}

#[test]
fn output_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().expect("tempdir");
    let path = dir.path().join("report.json");
    let out = run(&[
        "primes", "--limit", "50", "--out", "json", "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["count"], 15);
    assert_eq!(v["largest"], 47);
}

#[test]
fn rmt_density_row_matches_the_json_payload() {
    let args = ["rmt-paircorr", "--group", "U", "--dim", "6", "--draws", "40", "--seed", "3"];
    let csv = run(&args);
    assert_eq!(code(&csv), 0);
    let row = last_row(&csv);
    assert_eq!(row[0], "U");
    assert_eq!(row[1], "6");
    assert_eq!(row[3], "pair_corr");

    let mut jargs = args.to_vec();
    jargs.extend_from_slice(&["--out", "json"]);
    let v = json(&run(&jargs));
    assert_eq!(v["mean"].as_f64().unwrap(), row[4].parse::<f64>().unwrap());
    assert_eq!(v["target"].as_f64().unwrap(), row[6].parse::<f64>().unwrap());
}
