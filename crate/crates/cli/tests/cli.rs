use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn cyclone(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cyclone"));
    cmd.args(args).env_remove("CYCLONE_OUT_DIR").env_remove("CYCLONE_JOBS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Every file under `dir`, keyed by relative path.
fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                out.insert(p.strip_prefix(root).unwrap().display().to_string(), std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(dir, dir, &mut out);
    out
}

#[test]
fn unknown_preset_is_a_usage_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("o");
    let o = cyclone(&["sim", "--a", "grandmaster", "-n", "2", "--out-dir", out.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: usage: "));
    assert!(!out.exists(), "no work before validation");
}

#[test]
fn bad_flags_are_usage_errors() {
    let o = cyclone(&["sim", "--games-please"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o).lines().count(), 1);
    let o = cyclone(&["train", "--objective", "humanness"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--db"));
}

#[test]
fn runtime_failures_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.jsonl");
    std::fs::write(&bad, "not json\n").unwrap();
    let o = cyclone(&["humanness", "--db", bad.to_str().unwrap(), "--out-dir", tmp.path().to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let err = stderr(&o);
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error: runtime: "));
}

#[test]
fn sim_writes_stats_and_echoes_config() {
    let tmp = tempfile::tempdir().unwrap();
    let o = cyclone(
        &["sim", "--a", "self-play", "--b", "self-play", "-n", "12", "--seed", "1"],
        &[("CYCLONE_OUT_DIR", tmp.path())],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let config = text.lines().find_map(|l| l.strip_prefix("config ")).unwrap();
    let config: serde_json::Value = serde_json::from_str(config).unwrap();
    assert_eq!(config["games"], 12);
    assert_eq!(config["out_dir"], tmp.path().display().to_string());
    assert!(text.lines().any(|l| l.starts_with("sim a=self-play b=self-play n=12 mean=")));
    let stats: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["stats"]["n"], 12);
    assert_eq!(stats["scores"].as_array().unwrap().len(), 12);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str, jobs: &str| {
        let dir = tmp.path().join(name);
        let d = dir.to_str().unwrap();
        let db = dir.join("decisions.jsonl");
        for args in [
            vec!["sim", "--a", "human-like", "--b", "human-complementary", "-n", "16", "--seed", "5", "--logs"],
            vec!["sim", "--matrix", "-n", "4", "--seed", "9"],
            vec!["gen-db", "--preset", "human-like", "-n", "2", "--seed", "3"],
            vec!["humanness", "--weights", "self-play", "--db", db.to_str().unwrap()],
            vec!["train", "--objective", "humanness", "--db", db.to_str().unwrap(), "--max-experiments", "1"],
        ] {
            let mut args = args;
            args.extend(["--out-dir", d, "--jobs", jobs]);
            let o = cyclone(&args, &[]);
            assert!(o.status.success(), "{args:?}: {}", stderr(&o));
        }
        tree(&dir)
    };
    let a = run("a", "1");
    let b = run("b", "2");
    assert!(a.contains_key("logs/seed-5.gamelog"));
    assert!(a.contains_key("matrix.json") && a.contains_key("audit.jsonl") && a.contains_key("weights.toml"));
    assert_eq!(a.keys().collect::<Vec<_>>(), b.keys().collect::<Vec<_>>());
    for (k, v) in &a {
        assert!(b[k] == *v, "{k} differs");
    }
}

#[test]
fn train_resumes_an_interrupted_trail() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().to_str().unwrap();
    let db = tmp.path().join("decisions.jsonl");
    assert!(cyclone(&["gen-db", "--preset", "self-play", "-n", "2", "--out-dir", d], &[]).status.success());
    let args =
        ["train", "--objective", "humanness", "--db", db.to_str().unwrap(), "--max-experiments", "3", "--out-dir", d];
    let o = cyclone(&args, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let audit = tmp.path().join("audit.jsonl");
    let full = std::fs::read_to_string(&audit).unwrap();
    let weights = std::fs::read(tmp.path().join("weights.toml")).unwrap();
    // Keep the start record and the first experiment, as if the run had died.
    let cut: String = full.lines().take(2).map(|l| format!("{l}\n")).collect();
    std::fs::write(&audit, cut).unwrap();
    let mut resume = args.to_vec();
    resume.push("--resume");
    let o = cyclone(&resume, &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&audit).unwrap(), full);
    assert_eq!(std::fs::read(tmp.path().join("weights.toml")).unwrap(), weights);
}

#[test]
fn weight_files_are_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let w = tmp.path().join("mine.toml");
    std::fs::write(&w, cyclone_core::decision::Preset::HumanLike.weights::<f64>().to_toml(Some("mine"))).unwrap();
    let o = cyclone(&["sim", "--a", w.to_str().unwrap(), "-n", "2", "--out-dir", tmp.path().to_str().unwrap()], &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("sim a=mine b=self-play"));
}

#[test]
fn replay_reports_the_logged_score() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path().to_str().unwrap();
    assert!(cyclone(
        &["sim", "--a", "human-like", "--b", "human-like", "-n", "1", "--seed", "8", "--logs", "--out-dir", d],
        &[]
    )
    .status
    .success());
    let stats: serde_json::Value =
        serde_json::from_slice(&std::fs::read(tmp.path().join("stats.json")).unwrap()).unwrap();
    let o = cyclone(&["replay", tmp.path().join("logs/seed-8.gamelog").to_str().unwrap()], &[]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with(&format!("score={}", stats["scores"][0])));
}
