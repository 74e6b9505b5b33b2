//! End-to-end checks of the `t32` binary: output content, formats, exit
//! codes, and reproducibility.

use std::process::{Command, Output};

fn t32(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_t32"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn expand_prints_table_rows() {
    let out = t32(&["expand", "8"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "8\t21011\t5\t1\n");

    let out = t32(&["expand", "0", "--table", "3"]);
    assert_eq!(stdout(&out), "0\tε\t0\t0\n1\t2\t2\t0\n2\t21\t3\t1\n3\t210\t3\t1\n");
}

#[test]
fn seq_named_words_and_ops() {
    let out = t32(&["seq", "t32", "--length", "30"]);
    assert_eq!(stdout(&out).trim(), "001110111110110111110000110110");

    for backend in ["dfao", "block", "relations"] {
        let out = t32(&["seq", "t32", "--backend", backend, "--length", "30"]);
        assert_eq!(stdout(&out).trim(), "001110111110110111110000110110", "{backend}");
    }

    let out = t32(&["seq", "t32", "--op", "delta", "--length", "30"]);
    assert_eq!(stdout(&out).trim(), "010011000011011000010001011010");

    let out = t32(&["seq", "t32", "--op", "slide2", "--length", "30"]);
    assert_eq!(stdout(&out).trim(), "013321333321321333320001321320");

    let out = t32(&["seq", "t32-mod", "--m", "4", "--length", "30"]);
    assert_eq!(stdout(&out).trim(), "023310131130132311130200132130");

    let out = t32(&["seq", "kolakoski", "--length", "13", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.starts_with("index,symbol\n0,2\n1,2\n2,1\n"));

    let out = t32(&["seq", "t32", "--length", "5", "--format", "json"]);
    assert_eq!(stdout(&out).trim(), "[0,0,1,1,1]");
}

#[test]
fn seq_from_rule_file() {
    let dir = std::env::temp_dir().join(format!("t32-rules-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tau.rules");
    std::fs::write(&path, "00 -> 001\n01 -> 000\n10 -> 111\n11 -> 110\n").unwrap();
    let out = t32(&["seq", path.to_str().unwrap(), "--length", "30"]);
    assert_eq!(stdout(&out).trim(), "001110111110110111110000110110");

    // same file, explicit complementary seed
    let out = t32(&["seq", path.to_str().unwrap(), "--seed-symbol", "1", "--length", "30"]);
    assert_eq!(stdout(&out).trim(), "110001000001001000001111001001");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn toeplitz_output() {
    let out = t32(&["toeplitz", "--pattern", "01?0?10??", "--length", "30"]);
    assert_eq!(stdout(&out).trim(), "010011000011011000010001011010");

    let out = t32(&["toeplitz", "--pattern", "01?0?10??", "--freqs"]);
    let text = stdout(&out);
    assert!(text.contains("freq(0)\t3/5"));
    assert!(text.contains("freq(1)\t2/5"));
    assert!(text.contains("complexity_exponent\t2.709511"));
}

#[test]
fn freq_csv_shape() {
    let out = t32(&["freq", "--word", "t32", "--mod-exp", "1", "--length", "30"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,c,k,count,density,deviation");
    assert_eq!(lines.len(), 5); // header + 2 symbols x 2 residues
    assert!(lines[1].starts_with("30,0,0,5,"));
    assert!(lines[2].starts_with("30,0,1,6,"));
}

#[test]
fn zeta_summary_and_csv() {
    let out = t32(&["zeta", "--k", "2", "--grid", "4096"]);
    let text = stdout(&out);
    assert!(text.contains("certified < 20/27: true"), "{text}");

    let out = t32(&["zeta", "--k", "2", "--grid", "64", "--format", "csv"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 64 + 1); // header, samples, summary
    assert!(text.lines().last().unwrap().starts_with("# zeta_2"));
}

#[test]
fn contraction_reports_bound() {
    let out = t32(&["contraction", "--level", "8", "--trials", "50", "--seed", "5"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("within_bound\ttrue"));
}

#[test]
fn emit_single_point() {
    let out = t32(&["emit", "--ranges", "30:30"]);
    assert_eq!(stdout(&out), "N,count,density\n30,11,0.3666666667\n");

    // an empty range list gives a header-only file
    let out = t32(&["emit", "--ranges", ""]);
    assert_eq!(stdout(&out), "N,count,density\n");
}

#[test]
fn verify_single_checks_and_exit_codes() {
    let out = t32(&["verify", "--check", "counter-table", "--check", "parity-vector-period"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS counter-table"));
    assert!(text.contains("OK: 2 checks, 0 hard failure(s)"));

    // unknown check is a usage error
    let out = t32(&["verify", "--check", "nope"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown word is a usage error
    let out = t32(&["seq", "not-a-word"]);
    assert_eq!(out.status.code(), Some(2));

    // clap-level usage error
    let out = t32(&["no-such-subcommand"]);
    assert_eq!(out.status.code(), Some(2));

    // factor window shorter than the factor length
    let out = t32(&["factors", "--word", "t32", "--len", "5", "--prefix", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let out = t32(&["verify", "--list"]);
    assert!(out.status.success());
    let names = stdout(&out);
    assert!(names.lines().count() >= 20);
    assert!(names.contains("zeta2") && names.contains("mod-m-freqs"));
}

#[test]
fn failing_factor_check_exits_nonzero() {
    // the fixed point of 0 -> 01, 1 -> 11 is 0111... whose factors are not
    // closed under complement
    let dir = std::env::temp_dir().join(format!("t32-badword-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ones.rules");
    std::fs::write(&path, "0 -> 01\n1 -> 11\n").unwrap();
    let out = t32(&[
        "factors",
        "--word",
        path.to_str().unwrap(),
        "--len",
        "2",
        "--prefix",
        "1000",
        "--check",
        "complement",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("closed_under_complement\tfalse"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn identical_configs_are_byte_identical() {
    let a = t32(&["verify", "--check", "zeta2", "--format", "json", "--seed", "9"]);
    let b = t32(&["verify", "--check", "zeta2", "--format", "json", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let a = t32(&["freq", "--word", "tprime", "--mod-exp", "2", "--length", "50000"]);
    let b = t32(&["freq", "--word", "tprime", "--mod-exp", "2", "--length", "50000"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn threads_do_not_change_results() {
    let a = t32(&["verify", "--check", "toeplitz-identity", "--length", "200000", "--threads", "1"]);
    let b = t32(&["verify", "--check", "toeplitz-identity", "--length", "200000", "--threads", "4"]);
    assert!(a.status.success() && b.status.success());
    // timing lines differ; the verdicts must not
    let strip = |out: &Output| {
        stdout(out)
            .lines()
            .map(|l| l.split(" (").next().unwrap().to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
}
