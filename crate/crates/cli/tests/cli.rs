use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const ADR_HEADER: &str =
    "k_db,config,p,dims,bits,payload_bits,adr_baseline_cont,adr_baseline_quant,adr_proposed,fidelity_mean";

fn irsfb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irsfb"))
        .args(args)
        .env_remove("IRSFB_WORKERS")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn payload_ratio_prints_csv() {
    let out = irsfb(&["payload-ratio", "--full-scale"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("config,p,dims,sum_np,payload_ratio,payload_bits,baseline_bits")
    );
    assert!(csv.contains("\np2_32x32_b3x3,2,32x32,64,16,192,3072\n"));
    assert!(csv.contains(",20,51.2,60,3072\n"));
}

#[test]
fn adr_sweep_writes_file_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "small.toml", "[sweep]\nk_db = [0.0, 20.0]\n");
    let out_path = dir.path().join("nested/adr.csv");
    let out = irsfb(&[
        "adr-vs-k",
        "--config",
        &cfg,
        "--trials",
        "5",
        "--seed",
        "3",
        "--out",
        out_path.to_str().unwrap(),
        "--plot",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out.stdout.is_empty());
    let csv = fs::read_to_string(&out_path).unwrap();
    assert_eq!(csv.lines().next(), Some(ADR_HEADER));
    assert_eq!(csv.lines().count(), 1 + 2 * 4);
    let svg = fs::read_to_string(out_path.with_extension("svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("p2_16x16_b3x3"));
}

#[test]
fn same_seed_gives_identical_bytes_for_any_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "small.toml",
        "[sweep]\nk_db = [-10.0, 30.0]\ntrials = 12\n",
    );
    let run = |workers: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_irsfb"))
            .args(["fixed-budget", "--config", &cfg, "--seed", "9"])
            .env("IRSFB_WORKERS", workers)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let first = run("1");
    assert_eq!(first, run("1"));
    assert_eq!(first, run("4"));
    assert_eq!(first, run("0"));
    let other = irsfb(&["fixed-budget", "--config", &cfg, "--seed", "10"]);
    assert_ne!(first, other.stdout);
}

#[test]
fn unknown_config_key_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.toml", "[sweep]\ntrails = 3\n");
    let out = irsfb(&["adr-vs-k", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trails"));
}

#[test]
fn over_budget_factorization_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "budget.toml",
        "[feedback]\nbudget_bits = 1024\n\n[[factorization]]\ndims = [256, 2, 2]\nbits = 4\n",
    );
    let out = irsfb(&["fixed-budget", "--full-scale", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("1040"));
}

#[test]
fn mismatched_dims_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "dims.toml",
        "[[factorization]]\ndims = [16, 8]\nbits = 3\n",
    );
    let out = irsfb(&["payload-ratio", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("16x8"));
}

#[test]
fn solver_failure_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "solver.toml",
        "[solver]\ntol = 0.0\nmax_iter = 1\n",
    );
    let out = irsfb(&["adr-vs-k", "--config", &cfg, "--trials", "2"]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("trial 0"));
}

#[test]
fn selftest_passes() {
    let out = irsfb(&["selftest"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}
