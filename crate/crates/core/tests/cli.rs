//! Drives the `nesg` binary end to end in a temporary directory.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nesg::datagen::io::{load_game, load_strategy};
use nesg::{exact_leader_value, BehaviorModel};

fn nesg(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nesg"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = nesg(args, dir);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

const FAST_EVO: &[&str] = &["--pop", "12", "--gens", "15"];

fn pipeline(dir: &Path) {
    ok(&["gen-games", "--targets", "4,6", "--steps", "1,2", "--per-pair", "2", "--seed", "3", "--out", "games"], dir);
    ok(&["gen-data", "--game", "games/game_n6_m2_1.json", "--model", "qr:0.8", "--count", "300", "--seed", "4", "--out", "d.csv"], dir);
    ok(&["train", "--data", "d.csv", "--epochs", "15", "--seed", "5", "--out", "net.json", "--log", "loss.csv"], dir);
    let mut solve = vec!["solve", "--game", "games/game_n6_m2_1.json", "--solver", "nesg", "--net", "net.json", "--seed", "7"];
    solve.extend_from_slice(FAST_EVO);
    solve.extend_from_slice(&["--out", "strat.json", "--history", "hist.csv"]);
    ok(&solve, dir);
}

#[test]
fn pipeline_produces_valid_files() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    pipeline(dir);

    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("games/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["games"].as_array().unwrap().len(), 8);
    assert!(dir.join("games/game_n4_m1_2.json").exists());

    let csv = fs::read_to_string(dir.join("d.csv")).unwrap();
    assert_eq!(csv.lines().count(), 301);
    assert!(csv.starts_with("c_1_1,"));
    assert!(dir.join("d.csv.meta.json").exists());

    let game = load_game(&dir.join("games/game_n6_m2_1.json")).unwrap();
    let strategy = load_strategy(&dir.join("strat.json"), Some(&game)).unwrap();
    assert!(!strategy.is_empty());
    let hist = fs::read_to_string(dir.join("hist.csv")).unwrap();
    assert_eq!(hist.lines().count(), 17);
}

#[test]
fn score_reproduces_easg_fitness() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(&["gen-games", "--targets", "8", "--steps", "1", "--per-pair", "1", "--out", "g"], dir);
    let mut args = vec!["solve", "--game", "g/game_n8_m1_1.json", "--solver", "easg", "--seed", "2", "--out", "s.json"];
    args.extend_from_slice(FAST_EVO);
    let solved = ok(&args, dir);
    let fitness = solved.split_whitespace().last().unwrap().to_string();

    let scored = ok(&["score", "--game", "g/game_n8_m1_1.json", "--strategy", "s.json", "--model", "rational"], dir);
    assert_eq!(scored.trim(), format!("rational\t{fitness}"));

    let pt = ok(&["score", "--game", "g/game_n8_m1_1.json", "--strategy", "s.json", "--model", "pt:0.64,2.25,0.88,0.88"], dir);
    let game = load_game(&dir.join("g/game_n8_m1_1.json")).unwrap();
    let s = load_strategy(&dir.join("s.json"), Some(&game)).unwrap();
    let model: BehaviorModel = "pt:0.64,2.25,0.88,0.88".parse().unwrap();
    let expected = exact_leader_value(&game, &s, &model).unwrap();
    assert_eq!(pt.trim().split('\t').nth(1).unwrap().parse::<f64>().unwrap(), expected);
}

#[test]
fn easg_br_requires_a_model_and_nesg_a_network() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(&["gen-games", "--targets", "4", "--steps", "1", "--per-pair", "1", "--out", "g"], dir);
    for solver in ["easg_br", "nesg"] {
        let out = nesg(&["solve", "--game", "g/game_n4_m1_1.json", "--solver", solver, "--out", "s.json"], dir);
        assert!(!out.status.success());
        assert!(String::from_utf8_lossy(&out.stderr).contains("needs --"));
    }
}

#[test]
fn bad_input_gives_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    for args in [
        &["frobnicate"][..],
        &["gen-games", "--out", "x", "--bogus"],
        &["score", "--game", "missing.json", "--strategy", "s.json"],
        &["gen-data", "--game", "missing.json", "--model", "qr:-1", "--out", "d.csv"],
    ] {
        let out = nesg(args, dir);
        assert!(!out.status.success(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    fs::write(dir.join("bad.json"), "{\"support\": [{\"prob\": 0.9, \"alloc\": [[1]]}]}").unwrap();
    ok(&["gen-games", "--targets", "4", "--steps", "1", "--per-pair", "1", "--out", "g"], dir);
    let out = nesg(&["score", "--game", "g/game_n4_m1_1.json", "--strategy", "bad.json"], dir);
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum to 1"));
}

#[test]
fn help_lists_every_subcommand() {
    let tmp = tempfile::tempdir().unwrap();
    let help = ok(&["--help"], tmp.path());
    for cmd in ["gen-games", "gen-data", "train", "solve", "score", "table1", "table2", "timing"] {
        assert!(help.contains(cmd), "{cmd}");
        let sub = ok(&[cmd, "--help"], tmp.path());
        assert!(sub.contains("--seed") && sub.contains("--out"), "{cmd}");
    }
}
