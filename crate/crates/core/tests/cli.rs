use std::fs;
use std::path::PathBuf;

use clap::Parser;
use nichols::cartan::{self, CartanDatum};
use nichols::cli::{load_or_build, main_with, run, Args, CacheStatus, Command, JobConfig, RunOptions};
use nichols::nichols::{NicholsBasis, SuperLetters};

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(format!("{name}.toml"))
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let args = Args::try_parse_from(std::iter::once("nichols").chain(args.iter().copied())).unwrap();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(args, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn mixed36_hilbert_sums_to_36() {
    let cfg = JobConfig::load(&config_path("mixed36")).unwrap();
    let report = run(cfg, Command::Hilbert, &RunOptions::default()).unwrap();
    assert_eq!(report.hilbert.iter().sum::<usize>(), 36);
    assert_eq!(report.hilbert, [1, 2, 3, 4, 5, 6, 5, 4, 3, 2, 1]);
}

#[test]
fn mixed36_check_passes_and_exits_zero() {
    let p = config_path("mixed36");
    let (code, out, _) = invoke(&["check", "--config", p.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(!out.lines().any(|l| l.starts_with("fail")));
}

#[test]
fn malformed_scalar_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    fs::write(&p, "format_version = 1\nM = 3\nn = 1\nq = [[\"z^\"]]\ncutoff = 4\n").unwrap();
    let (code, _, err) = invoke(&["hilbert", "--config", p.to_str().unwrap()]);
    assert_ne!(code, 0);
    assert!(err.contains("4:"), "{err}");
    match JobConfig::load(&p) {
        Err(nichols::cli::CliError::Config { line, column, .. }) => {
            assert_eq!(line, 4);
            // points past "z^", into the quoted entry
            assert!((7..=10).contains(&column), "{column}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn truncated_basis_is_not_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cfg.toml");
    fs::write(&p, "format_version = 1\nM = 3\nn = 1\nq = [[\"z\"]]\ncutoff = 2\n").unwrap();
    // a truncated basis is not a failure
    let (code, out, _) = invoke(&["check", "--config", p.to_str().unwrap(), "--suite", "structure"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn failures_are_detected() {
    let cfg = JobConfig::load(&config_path("rank1_z5")).unwrap();
    let mut report = run(cfg, Command::Check, &RunOptions::default()).unwrap();
    assert!(!report.failed());
    report.checks.push(nichols::liealg::CheckResult::fail("probe", "forced", "1"));
    assert!(report.failed());
    assert!(report.to_text().contains("fail probe: forced [witness 1]"));
}

#[test]
fn structured_reports_are_deterministic() {
    let p = config_path("b2_r3");
    let a = invoke(&["roots", "--config", p.to_str().unwrap(), "--format", "structured"]);
    let b = invoke(&["roots", "--config", p.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(a.1, b.1);
    let v: serde_json::Value = serde_json::from_str(&a.1).unwrap();
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["roots"]["positive_roots"].as_array().unwrap().len(), 4);
    assert!(v.get("timings_ms").is_none());
}

#[test]
fn infinite_verdicts_carry_certificates() {
    let cfg = JobConfig::load(&config_path("growth_pair")).unwrap();
    let report = run(cfg, Command::Hilbert, &RunOptions::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&report.to_structured()).unwrap();
    assert_eq!(v["finiteness"]["status"], "infinite");
    assert!(v["finiteness"]["certificate"]["kind"].is_string());
}

#[test]
fn cache_roundtrip_and_eviction() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = JobConfig::load(&config_path("a2_r3")).unwrap();
    let opts = RunOptions {
        cache_dir: Some(dir.path().to_path_buf()),
        ..RunOptions::default()
    };
    let (fresh, s) = load_or_build(&cfg, Some(dir.path())).unwrap();
    assert_eq!(s, CacheStatus::Miss);
    let (cached, s) = load_or_build(&cfg, Some(dir.path())).unwrap();
    assert_eq!(s, CacheStatus::Hit);
    assert_eq!(fresh.to_snapshot(), cached.to_snapshot());

    let direct = run(cfg.clone(), Command::Check, &RunOptions::default()).unwrap();
    let via_cache = run(cfg.clone(), Command::Check, &opts).unwrap();
    assert_eq!(direct.to_structured(), via_cache.to_structured());

    let mut other = cfg.clone();
    other.cutoff = 9;
    assert_ne!(other.hash(), cfg.hash());
    assert_eq!(load_or_build(&other, Some(dir.path())).unwrap().1, CacheStatus::Miss);

    let file = dir.path().join(format!("{}.json", cfg.hash()));
    let mut text = fs::read_to_string(&file).unwrap();
    let at = text.find("\\\"blocks").unwrap();
    text.replace_range(at + 3..at + 4, "X");
    fs::write(&file, text).unwrap();
    let (rebuilt, s) = load_or_build(&cfg, Some(dir.path())).unwrap();
    assert_eq!(s, CacheStatus::Evicted);
    assert_eq!(rebuilt.to_snapshot(), fresh.to_snapshot());
    assert_eq!(load_or_build(&cfg, Some(dir.path())).unwrap().1, CacheStatus::Hit);
}

#[test]
fn presentation_export_matches_golden() {
    let cfg = JobConfig::load(&config_path("a2_r3")).unwrap();
    let basis = NicholsBasis::build(&cfg.space, cfg.cutoff).unwrap();
    let letters = SuperLetters::compute(&basis).unwrap();
    let datum = CartanDatum::of(&cfg.space).unwrap();
    let text = cartan::presentation(&cfg.space, &datum, &letters).export_text(&cfg.space);
    let golden = fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/a2_r3.presentation")).unwrap();
    assert_eq!(text, golden);
}

#[test]
fn even_order_skips_presentation_verification() {
    let cfg = JobConfig::load(&config_path("a3_minus1")).unwrap();
    let report = run(cfg, Command::Present, &RunOptions::default()).unwrap();
    let p = report.presentation.unwrap();
    assert!(p.contains("hypothesis odd orders above 1 fail"), "{p}");
    assert!(p.contains("serre 1 2"));
    assert!(report.checks.iter().all(|c| c.status == nichols::liealg::Status::Skipped));
}
