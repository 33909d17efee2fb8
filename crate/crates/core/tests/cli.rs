use std::process::Command;

use uipq_core::cli::{execute, main_with_args, render, Cli};
use clap::Parser;

fn uipq(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_uipq")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn rendered(args: &[&str]) -> Vec<u8> {
    let cli = Cli::try_parse_from(std::iter::once("uipq").chain(args.iter().copied())).unwrap();
    render(&cli.command, &execute(&cli.command).unwrap()).unwrap()
}

#[test]
fn laws_radius_one_has_the_first_hull_mass() {
    let (code, out) = uipq(&["laws", "--radius", "1"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "hull,r=1,1,5,27,0.18518518518518517,0.18518518518518517"), "{out}");
    assert!(out.starts_with(&format!("# uipq {}\n# config {{", uipq_core::VERSION)));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(uipq(&["laws", "--radius", "abc"]).0, 2);
    assert_eq!(uipq(&["nosuchcommand"]).0, 2);
    assert_eq!(uipq(&["mc", "--radius", "3", "--trials", "10"]).0, 2);
    assert_eq!(uipq(&["laws", "--inner", "2"]).0, 2);
    assert_eq!(main_with_args(["uipq", "cycles"]), 2);
}

#[test]
fn enumerate_small_case() {
    let (code, out) = uipq(&["enumerate", "--n", "2", "--p", "1"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "2,1,2,2"), "{out}");
}

#[test]
fn mc_single_tree_probability_for_the_smallest_annulus() {
    let (code, out) = uipq(&["mc", "--inner", "1", "--outer", "2", "--trials", "40000", "--seed", "3"]);
    assert_eq!(code, 0);
    let row = out.lines().find(|l| l.starts_with("\"N_1,2\"")).unwrap();
    let p1: f64 = row.split(',').nth(7).unwrap().parse().unwrap();
    let sigma = (0.35f64 * 0.65 / 40_000.0).sqrt();
    assert!((p1 - 0.35).abs() < 3.0 * sigma, "{p1}");
}

#[test]
fn mc_radius_five_fits_the_exact_law() {
    let (code, out) = uipq(&["mc", "--radius", "5", "--trials", "100000", "--seed", "7"]);
    assert_eq!(code, 0);
    let row: Vec<&str> = out.lines().last().unwrap().split(',').collect();
    let p_value: f64 = row[4].parse().unwrap();
    let tv: f64 = row[5].parse().unwrap();
    assert!(p_value > 0.01 && tv < 0.015, "{row:?}");
}

#[test]
fn different_seeds_differ_and_both_pass() {
    let a = uipq(&["mc", "--radius", "3", "--trials", "5000", "--seed", "1"]);
    let b = uipq(&["mc", "--radius", "3", "--trials", "5000", "--seed", "2"]);
    assert_eq!((a.0, b.0), (0, 0));
    assert_ne!(a.1, b.1);
}

#[test]
fn cycles_single_tree_frequency() {
    let (code, out) = uipq(&["cycles", "--R", "50", "--trials", "100000"]);
    assert_eq!(code, 0);
    let note = out.lines().find(|l| l.starts_with("# P(N=1)")).unwrap();
    let z: f64 = note.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(z.abs() < 3.0, "{note}");
    assert!(out.contains("R,trials,mean,p50,p95,max,seed"));
}

#[test]
fn bridge_columns_follow_the_contract() {
    let out = String::from_utf8(rendered(&["bridge", "--k", "2", "--K", "6", "--trials", "2000"])).unwrap();
    assert!(out.contains("\nk,K,r,c,trials,hits,p_hat,stderr,seed\n"));
}

#[test]
fn identical_configs_give_identical_bytes() {
    for args in [
        &["laws", "--radius", "2", "--format", "json"][..],
        &["mc", "--radius", "2", "--trials", "3000", "--seed", "5"][..],
        &["volume", "--radius", "4", "--trials", "500"][..],
    ] {
        assert_eq!(rendered(args), rendered(args));
    }
}

#[test]
fn json_output_carries_rationals_as_strings() {
    let v: serde_json::Value = serde_json::from_slice(&rendered(&["laws", "--radius", "1", "--format", "json"])).unwrap();
    assert_eq!(v["version"], uipq_core::VERSION);
    assert_eq!(v["config"]["radius"], 1);
    assert_eq!(v["extra"]["hull"]["masses"][1], "5/27");
    assert_eq!(v["extra"]["theta"]["masses"][0], "2/3");
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("laws.csv");
    let (code, stdout) = uipq(&["laws", "--radius", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, rendered(&["laws", "--radius", "1", "--out", path.to_str().unwrap()]));
}
