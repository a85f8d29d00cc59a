use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use flatwall::{Graph, MinorModel};

struct Run(Command);

impl Run {
    fn args<I: IntoIterator<Item = S>, S: AsRef<std::ffi::OsStr>>(mut self, a: I) -> Self {
        self.0.args(a);
        self
    }

    fn arg(mut self, a: &str) -> Self {
        self.0.arg(a);
        self
    }

    fn code(mut self, want: i32) {
        let out = self.0.output().unwrap();
        assert_eq!(out.status.code(), Some(want), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    }

    fn success(self) {
        self.code(0)
    }
}

fn bin() -> Run {
    Run(Command::new(env!("CARGO_BIN_EXE_flatwall")))
}

/// Fresh scratch directory under the target dir, named after the test.
fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn strong_run_on_a_bare_wall_writes_a_verifiable_certificate() {
    let dir = scratch("strong_run_on_a_bare_wall_writes_a_verifiable_certificate");
    let g = dir.join("g.txt");
    let c1 = dir.join("c1.json");
    let c2 = dir.join("c2.json");
    bin().args(["gen", "wall", "--h", "64", "--w", "64", "--out", s(&g)]).success();
    for c in [&c1, &c2] {
        bin()
            .args(["run", "strong", "--graph", s(&g), "--wall", &format!("{}.wall.json", s(&g))])
            .args(["--t", "3", "--w", "4", "--override-n", "5", "--override-z", "16", "--out", s(c)])
            .success();
    }
    assert_eq!(fs::read(&c1).unwrap(), fs::read(&c2).unwrap());
    bin().args(["verify", "flat", "--graph", s(&g), "--cert", s(&c1)]).success();

    // Same certificate against a graph missing an edge of its wall.
    let mut host = Graph::from_text(&fs::read_to_string(&g).unwrap()).unwrap();
    let cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(&c1).unwrap()).unwrap();
    let p = &cert["wall"]["paths"][0];
    let (u, v) = (p[0].as_u64().unwrap() as usize, p[1].as_u64().unwrap() as usize);
    assert!(host.remove_edge(u, v));
    let broken = dir.join("broken.txt");
    fs::write(&broken, host.to_text()).unwrap();
    bin().args(["verify", "flat", "--graph", s(&broken), "--cert", s(&c1)]).code(2);
}

#[test]
fn weak_run_rejects_high_degree() {
    let dir = scratch("weak_run_rejects_high_degree");
    let g = dir.join("g.txt");
    bin().args(["gen", "wall", "--h", "64", "--w", "64", "--out", s(&g)]).success();
    bin()
        .args(["run", "weak", "--graph", s(&g), "--wall", &format!("{}.wall.json", s(&g))])
        .args(["--t", "3", "--w", "4", "--d", "2", "--override-n", "5", "--override-z", "16"])
        .args(["--out", s(&dir.join("o.json"))])
        .code(3);
}

#[test]
fn verify_model_pass_and_fail() {
    let dir = scratch("verify_model_pass_and_fail");
    let g = dir.join("k4.txt");
    let m = dir.join("m.json");
    let k4 = Graph::complete(4);
    fs::write(&g, k4.to_text()).unwrap();
    let mut model = MinorModel::identity(&k4);
    fs::write(&m, model.to_json()).unwrap();
    bin().args(["verify", "model", "--graph", s(&g), "--model", s(&m)]).success();
    model.branch_sets[1] = vec![0];
    fs::write(&m, model.to_json()).unwrap();
    bin().args(["verify", "model", "--graph", s(&g), "--model", s(&m)]).code(2);
}

#[test]
fn lowerbound_output_has_max_degree_five() {
    let dir = scratch("lowerbound_output_has_max_degree_five");
    let g = dir.join("lb.txt");
    bin().args(["gen", "lowerbound", "--wp", "3", "--tp", "2", "--out", s(&g)]).success();
    let host = Graph::from_text(&fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(host.max_degree(), 5);
    bin().args(["gen", "lowerbound", "--wp", "2", "--tp", "2", "--out", s(&g)]).code(3);
}

#[test]
fn planted_generation_is_seeded() {
    let dir = scratch("planted_generation_is_seeded");
    let a = dir.join("a.txt");
    let b = dir.join("b.txt");
    for p in [&a, &b] {
        bin().args(["gen", "planted", "--random", "6", "--z", "10", "--tau", "4", "--seed", "11", "--out", s(p)]).success();
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(dir.join("a.txt.chain.json").exists());
    let plan = dir.join("plan.json");
    fs::write(&plan, r#"{"z": 10, "tau": 4, "types": [7]}"#).unwrap();
    bin().args(["gen", "planted", "--plan", s(&plan), "--out", s(&a)]).code(3);
}

#[test]
fn usage_errors_exit_64() {
    bin().args(["gen", "wall", "--bogus"]).code(64);
    bin().arg("frobnicate").code(64);
    bin().args(["verify", "model", "--graph", "x"]).code(64);
    bin().arg("--help").success();
}
