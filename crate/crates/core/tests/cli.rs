use std::path::PathBuf;
use std::process::Command;

use pfl::fixtures;

struct Workdir(PathBuf);

impl Workdir {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("pfl-bin-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Workdir(dir)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    }
}

impl Drop for Workdir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn pfl(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pfl")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn compute_on_covid_tree() {
    let w = Workdir::new("compute");
    let tree = w.write("covid.ft", fixtures::COVID_WORKPLACE);
    let query = w.write("q.pfl", "assume:\n  setp IW = 0.25\ncompute:\n  P[IWoS]\n");
    let (code, out, err) = pfl(&["compute", "-t", &tree, "-q", &query, "--default-prob", "0.1", "--format", "machine"]);
    assert_eq!(code, 0, "{err}");
    let v: f64 = out.trim().parse().unwrap();
    assert!(v > 0.0 && v < 1.0);
    assert_eq!(out.lines().count(), 1);
}

#[test]
fn computeall_cut_sets() {
    let w = Workdir::new("all");
    let tree = w.write("mec.ft", fixtures::MEDIUM_CORROSION);
    let (code, out, _) = pfl(&["computeall", "-t", &tree, "--query-text", "computeall: MCS[MeC]", "--format", "machine"]);
    assert_eq!(code, 0);
    let mut sets: Vec<&str> = out.split_whitespace().collect();
    sets.sort();
    assert_eq!(sets, ["{WW,CO2}", "{WW,H2S}", "{WW,O2}"]);
}

#[test]
fn export_writes_a_script() {
    let w = Workdir::new("smt");
    let tree = w.write("and.ft", "T and a b;");
    let script = w.0.join("out.smt2");
    let s = script.display().to_string();
    let (code, _, err) = pfl(&["export-smt", "-t", &tree, "--query-text", "check: P[a and b] >= 0.5", "-o", &s]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(&script).unwrap();
    assert!(text.contains("(set-logic QF_NRA)"));
    assert!(text.contains("(check-sat)"));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(pfl(&["check"]).0, 2);
    assert_eq!(pfl(&["nonsense"]).0, 2);
    let (code, _, err) = pfl(&["check", "-t", "/nonexistent.ft", "--query-text", "check: P[a] > 0"]);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent.ft"));
}
