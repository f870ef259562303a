//! End-to-end tests of the command-line interface: file formats, exit codes,
//! and determinism of seeded runs.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use covercert::arrangement::Multiplicity;
use covercert::io;
use covercert::random::random_quadric_general_arrangement;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covercert"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn write_noguchi_arrangement(dir: &Path, multiplicities: Option<Vec<Multiplicity>>) -> PathBuf {
    let arr = random_quadric_general_arrangement(2, 6, 5150);
    let arr = match multiplicities {
        Some(ms) => arr.with_multiplicities(ms).unwrap(),
        None => arr,
    };
    let path = dir.join("arrangement.json");
    io::write_text_file(&path, &io::arrangement_canonical_json(&arr)).unwrap();
    path
}

#[test]
fn thresholds_prints_paper_values() {
    let out = run(&["thresholds", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("d_quadric=6"));
    assert!(text.contains("m_min=6"));

    let out = run(&["thresholds", "--n", "2", "--m", "3"]);
    assert!(stdout(&out).contains("d_big=20"));
}

#[test]
fn standard_lines_cli() {
    let out = run(&["standard-lines", "--n", "2", "--k", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("none exist"));

    let out = run(&["standard-lines", "--n", "2", "--k", "1"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("{0,1}|{2,3}"));
}

#[test]
fn check_malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ this is not json").unwrap();
    let out = run(&["check", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_pass_and_fail_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_noguchi_arrangement(dir.path(), None);
    let out = run(&[
        "check",
        "--input",
        good.to_str().unwrap(),
        "--quadrics",
        "--exhaustive",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("linear general position: pass"));
    assert!(stdout(&out).contains("quadric general position: pass"));
    assert!(stdout(&out).contains("pair-product determinant test: pass"));

    // three concurrent lines
    let bad = dir.path().join("concurrent.json");
    std::fs::write(
        &bad,
        r#"{"n": 2, "covectors": [["1","0","0"],["0","1","0"],["1","1","0"],["0","0","1"]]}"#,
    )
    .unwrap();
    let out = run(&["check", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("dependent subset"));
}

#[test]
fn check_randomized_mode_reports_provenance_and_undecided() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_noguchi_arrangement(dir.path(), None);
    let out = run(&[
        "check",
        "--input",
        good.to_str().unwrap(),
        "--randomized",
        "--seed",
        "7",
        "--trials",
        "25",
    ]);
    assert_eq!(out.status.code(), Some(3)); // undecided is incomplete
    let text = stdout(&out);
    assert!(text.contains("seed=7"));
    assert!(text.contains("undecided"));

    // randomized without --seed is a usage error
    let out = run(&["check", "--input", good.to_str().unwrap(), "--randomized"]);
    assert!(!out.status.success());
}

#[test]
fn normalize_and_cover_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let arr_path = write_noguchi_arrangement(dir.path(), None);
    let norm_path = dir.path().join("normalized.json");
    let out = run(&[
        "normalize",
        "--input",
        arr_path.to_str().unwrap(),
        "--output",
        norm_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let norm: io::NormalizedFile =
        serde_json::from_str(&std::fs::read_to_string(&norm_path).unwrap()).unwrap();
    assert_eq!(norm.pivot, vec![0, 1, 2]);
    assert_eq!(norm.a.len(), 3);

    let cover_path = dir.path().join("cover.json");
    let out = run(&[
        "cover",
        "--input",
        arr_path.to_str().unwrap(),
        "--m",
        "6",
        "--output",
        cover_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let cov = io::load_cover(&cover_path).unwrap();
    assert_eq!((cov.n(), cov.k(), cov.m()), (2, 3, 6));
    // the cover coefficients are exactly the normalized rows
    let a_strings: Vec<Vec<String>> = cov
        .a()
        .iter()
        .map(|r| r.iter().map(covercert::exactalg::rational_to_string).collect())
        .collect();
    assert_eq!(a_strings, norm.a);
}

#[test]
fn differential_output_has_twist_and_parses() {
    let dir = tempfile::tempdir().unwrap();
    let arr_path = write_noguchi_arrangement(dir.path(), None);
    let out_path = dir.path().join("sigma.json");
    let out = run(&[
        "differential",
        "--input",
        arr_path.to_str().unwrap(),
        "--m",
        "6",
        "--rows",
        "3,4",
        "--chart",
        "0",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let file: io::DifferentialFile =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(file.twist_exponent, -1); // 2n+1-m = 5-6
    assert_eq!(file.symmetric_degree, 2);
    assert_eq!(file.rows, vec![3, 4]);
    let poly = io::poly_from_repr(&file.section).unwrap();
    assert!(!poly.is_zero());
}

#[test]
fn verify_identities_exact_and_sampled() {
    let dir = tempfile::tempdir().unwrap();
    let arr_path = write_noguchi_arrangement(dir.path(), None);
    let out = run(&[
        "verify-identities",
        "--input",
        arr_path.to_str().unwrap(),
        "--m",
        "6",
        "--exact",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("cramer annihilation (rows [3, 4]): pass"));
    for c in 1..=5 {
        assert!(text.contains(&format!("chart compatibility (0,{c}): pass")));
    }
    assert!(text.contains("bw factorization (9 pairs): pass"));

    let out = run(&[
        "verify-identities",
        "--input",
        arr_path.to_str().unwrap(),
        "--m",
        "6",
        "--sampled",
        "--samples",
        "10",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn baselocus_sample_cli_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let arr_path = write_noguchi_arrangement(dir.path(), None);
    let args = [
        "baselocus-sample",
        "--input",
        arr_path.to_str().unwrap(),
        "--m",
        "6",
        "--samples",
        "20",
        "--seed",
        "11",
    ];
    let out1 = run(&args);
    assert_eq!(out1.status.code(), Some(0), "{}", stdout(&out1));
    assert!(stdout(&out1).contains("sampled evidence only"));
    let out2 = run(&args);
    assert_eq!(stdout(&out1), stdout(&out2)); // same seed, same bytes

    // m = 5 = 2n+1 violates the twist precondition: input error
    let out = run(&[
        "baselocus-sample",
        "--input",
        arr_path.to_str().unwrap(),
        "--m",
        "5",
        "--samples",
        "5",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_cli_pass_fail_and_byte_identical_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_noguchi_arrangement(dir.path(), Some(vec![Multiplicity::Finite(6); 6]));
    let cert1 = dir.path().join("cert1.json");
    let cert2 = dir.path().join("cert2.json");
    for cert in [&cert1, &cert2] {
        let out = run(&[
            "certify",
            "--input",
            good.to_str().unwrap(),
            "--output",
            cert.to_str().unwrap(),
            "--with-evidence",
            "--samples",
            "10",
            "--seed",
            "99",
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    }
    let bytes1 = std::fs::read(&cert1).unwrap();
    let bytes2 = std::fs::read(&cert2).unwrap();
    assert_eq!(bytes1, bytes2);

    let mut ms = vec![Multiplicity::Finite(6); 6];
    ms[0] = Multiplicity::Finite(5);
    let bad = dir.path().join("bad.json");
    let arr = random_quadric_general_arrangement(2, 6, 5150)
        .with_multiplicities(ms)
        .unwrap();
    io::write_text_file(&bad, &io::arrangement_canonical_json(&arr)).unwrap();
    let cert3 = dir.path().join("cert3.json");
    let out = run(&[
        "certify",
        "--input",
        bad.to_str().unwrap(),
        "--output",
        cert3.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(&cert3).unwrap();
    assert!(text.contains("\"verdict\": \"fail\""));
}

#[test]
fn certify_strata_cap_exits_incomplete() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_noguchi_arrangement(dir.path(), Some(vec![Multiplicity::Finite(6); 6]));
    let cert = dir.path().join("cert.json");
    let out = run(&[
        "certify",
        "--input",
        good.to_str().unwrap(),
        "--output",
        cert.to_str().unwrap(),
        "--strata-cap",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_documents_every_subcommand() {
    let out = run(&["--help"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for sub in [
        "check",
        "normalize",
        "cover",
        "differential",
        "verify-identities",
        "baselocus-sample",
        "standard-lines",
        "thresholds",
        "certify",
    ] {
        assert!(text.contains(sub), "missing {sub} in --help");
    }
}
