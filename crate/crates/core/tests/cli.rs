use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use inertia_forge::engine::InertiaCertificate;
use inertia_forge::graph::{exhaustive_treewidth, Graph};
use inertia_forge::linalg::{det, Inertia, Mat, Rat};
use num_traits::Zero;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_inertia-forge"));
    c.env_remove("INERTIA_FORGE_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn graph_file(dir: &Path, name: &str, g: &Graph) -> String {
    write(dir, name, &g.to_text())
}

fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn c4() -> Graph {
    Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap()
}

fn load_mat(p: &Path) -> Mat {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn load_cert(p: &Path) -> InertiaCertificate {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn out_dir(tmp: &TempDir, name: &str) -> PathBuf {
    tmp.path().join(name)
}

/// `UᵀDU` entry by entry with `D = diag(+1 × p, −1 × rest)`.
fn signed_gram(u: &Mat, p: usize) -> Vec<Vec<Rat>> {
    let n = u.cols();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..u.rows()).fold(Rat::zero(), |acc, r| {
                        let t = &u[(r, i)] * &u[(r, j)];
                        if r < p {
                            acc + t
                        } else {
                            acc - t
                        }
                    })
                })
                .collect()
        })
        .collect()
}

#[test]
fn construct_then_verify_round_trip() {
    let tmp = TempDir::new().unwrap();
    let g = graph_file(tmp.path(), "p4bar.txt", &path_graph(4).complement());
    let out = out_dir(&tmp, "o");
    let o = run(&[
        "construct", "--graph", &g, "--k", "1", "--p", "2", "--q", "1", "--seed", "7", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("(2, 1, 1)"));
    for f in ["U.json", "A.json", "certificate.json", "representation.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let cert = load_cert(&out.join("certificate.json"));
    assert_eq!(cert.inertia_a, Inertia::new(2, 1, 1));
    assert_eq!((cert.n, cert.k, cert.m, cert.seed), (4, 1, 3, 7));

    let u = load_mat(&out.join("U.json"));
    let a = load_mat(&out.join("A.json"));
    assert_eq!(a.to_rows(), signed_gram(&u, 2));
    // zero exactly on the path edges
    for i in 1..=4 {
        for j in i + 1..=4 {
            assert_eq!(a[(i - 1, j - 1)].is_zero(), j == i + 1, "entry {i},{j}");
        }
    }

    let v = run(&[
        "verify",
        "--graph",
        &g,
        "--matrix",
        out.join("A.json").to_str().unwrap(),
        "--certificate",
        out.join("certificate.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
    assert!(stdout(&v).contains("PASS"));
}

#[test]
fn square_form_gives_nonsingular_matrix() {
    let tmp = TempDir::new().unwrap();
    let g = graph_file(tmp.path(), "k4.txt", &Graph::complete(4));
    let out = out_dir(&tmp, "o");
    let o = run(&[
        "construct", "--graph", &g, "--k", "2", "--p", "2", "--q", "2", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let a = load_mat(&out.join("A.json"));
    assert!(!det(&a).unwrap().is_zero());
    assert_eq!(load_cert(&out.join("certificate.json")).inertia_a, Inertia::new(2, 2, 0));
}

#[test]
fn wrong_width_exits_2() {
    assert_eq!(exhaustive_treewidth(&c4()).unwrap(), 2);
    let tmp = TempDir::new().unwrap();
    let g = graph_file(tmp.path(), "c4bar.txt", &c4().complement());
    let o = run(&["construct", "--graph", &g, "--k", "1", "--p", "2", "--q", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("partial 1-tree"));

    // without --k the width is detected
    let o = run(&["construct", "--graph", &g, "--p", "2", "--q", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("k = 2"));

    let t = run(&["treewidth", "--graph", &g, "--format", "json"]);
    assert_eq!(code(&t), 0);
    let json: serde_json::Value = serde_json::from_str(&stdout(&t)).unwrap();
    assert_eq!(json["k"], 2);
    assert_eq!(json["exhaustive_treewidth"], 2);
    let t = run(&["treewidth", "--graph", &g, "--k", "1"]);
    assert_eq!(code(&t), 2);
}

#[test]
fn out_of_range_targets_exit_3() {
    let tmp = TempDir::new().unwrap();
    let g = graph_file(tmp.path(), "p4bar.txt", &path_graph(4).complement());
    for args in [
        &["--p", "1", "--q", "0"][..],
        &["--p", "3", "--q", "2"],
        &["--m", "4", "--p", "2", "--q", "1"],
        &["--m", "2"],
    ] {
        let mut all = vec!["construct", "--graph", &g, "--k", "1"];
        all.extend_from_slice(args);
        assert_eq!(code(&run(&all)), 3, "{args:?}");
    }
}

#[test]
fn exhausted_retries_exit_4() {
    // complement of the 2-tree with edges i~j for |i-j| <= 2; this seed
    // rejects both allowed draws for some vertex at bounds 2 and 4
    let n = 8;
    let edges: Vec<_> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| j - i > 2)
        .collect();
    let tmp = TempDir::new().unwrap();
    let g = graph_file(tmp.path(), "g.txt", &Graph::from_edges(n, &edges).unwrap());
    let o = run(&[
        "construct", "--graph", &g, "--k", "2", "--p", "2", "--q", "2", "--coord-bound", "2",
        "--max-retries", "1", "--seed", "4",
    ]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("retries"));
}

#[test]
fn tampered_matrix_exits_5_and_names_the_pair() {
    let tmp = TempDir::new().unwrap();
    let g = graph_file(tmp.path(), "p4bar.txt", &path_graph(4).complement());
    let out = out_dir(&tmp, "o");
    let o = run(&["construct", "--graph", &g, "--p", "2", "--q", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mut a = load_mat(&out.join("A.json"));
    // zero out the edge 1-3 of the pattern
    a[(0, 2)] = Rat::zero();
    a[(2, 0)] = Rat::zero();
    let tampered = write(tmp.path(), "t.json", &serde_json::to_string(&a).unwrap());
    let v = run(&["verify", "--graph", &g, "--matrix", &tampered]);
    assert_eq!(code(&v), 5);
    assert!(stdout(&v).contains("missing edge 1-3"), "{}", stdout(&v));

    // the original matrix against the wrong certificate
    let other = out_dir(&tmp, "other");
    let o = run(&["construct", "--graph", &g, "--p", "3", "--q", "1", "--out", other.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v = run(&[
        "verify",
        "--graph",
        &g,
        "--matrix",
        out.join("A.json").to_str().unwrap(),
        "--certificate",
        other.join("certificate.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&v), 5);
    assert!(stdout(&v).contains("certificate inertia"));
}

#[test]
fn bad_input_exits_1() {
    let tmp = TempDir::new().unwrap();
    let g = write(tmp.path(), "e.txt", "2 1\n1 2\n");
    let ns = write(
        tmp.path(),
        "ns.json",
        r#"{"rows":2,"cols":2,"data":[["1","2"],["3","4"]]}"#,
    );
    let o = run(&["verify", "--graph", &g, "--matrix", &ns]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not symmetric"));

    let wrong_size = write(tmp.path(), "i3.json", &serde_json::to_string(&Mat::identity(3)).unwrap());
    assert_eq!(code(&run(&["verify", "--graph", &g, "--matrix", &wrong_size])), 1);

    let missing = tmp.path().join("nope.txt");
    assert_eq!(code(&run(&["construct", "--graph", missing.to_str().unwrap()])), 1);

    let garbage = write(tmp.path(), "bad.txt", "3 2\n1 2\n");
    assert_eq!(code(&run(&["construct", "--graph", &garbage])), 1);

    // --p without --q is a usage error
    assert_eq!(code(&run(&["construct", "--graph", &g, "--p", "2"])), 1);
    let form = write(tmp.path(), "f.json", &serde_json::to_string(&Mat::identity(3)).unwrap());
    assert_eq!(
        code(&run(&["construct", "--graph", &g, "--p", "2", "--q", "1", "--form", &form])),
        1
    );
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn explicit_form_file() {
    let tmp = TempDir::new().unwrap();
    let g = graph_file(tmp.path(), "p5bar.txt", &path_graph(5).complement());
    let k = Mat::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
    let form = write(tmp.path(), "k.json", &serde_json::to_string(&k).unwrap());
    let o = run(&["construct", "--graph", &g, "--form", &form, "--format", "json"]);
    assert_eq!(code(&o), 0);
    let cert: InertiaCertificate = serde_json::from_str(&stdout(&o)).unwrap();
    // K has inertia (2, 1, 0); U of rank 3 carries it over
    assert_eq!(cert.inertia_a, Inertia::new(2, 1, 2));
    assert!(cert.target.is_none());

    let singular = write(tmp.path(), "s.json", &serde_json::to_string(&Mat::zeros(3, 3)).unwrap());
    assert_eq!(code(&run(&["construct", "--graph", &g, "--form", &singular])), 1);
}

#[test]
fn certificates_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let g = graph_file(tmp.path(), "p6bar.txt", &path_graph(6).complement());
    let mut bodies = Vec::new();
    for dir in ["a", "b"] {
        let out = out_dir(&tmp, dir);
        let o = run(&["construct", "--graph", &g, "--p", "2", "--q", "2", "--seed", "11", "--out", out.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
        bodies.push(
            ["certificate.json", "U.json", "A.json", "representation.json"]
                .map(|f| fs::read(out.join(f)).unwrap()),
        );
    }
    assert_eq!(bodies[0], bodies[1]);

    // the seed can come from the environment
    let o = bin()
        .args(["construct", "--graph", &g, "--p", "2", "--q", "2", "--format", "json"])
        .env("INERTIA_FORGE_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(o.stdout, bodies[0][0]);
}

#[test]
fn sweep_table_and_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let g = graph_file(tmp.path(), "p5bar.txt", &path_graph(5).complement());
    let o = run(&["sweep", "--graph", &g, "--k", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 15);
    for r in &rows {
        let (m, p, q) = (r["m"].as_u64().unwrap(), r["p"].as_u64().unwrap(), r["q"].as_u64().unwrap());
        assert_eq!(p + q, m);
        assert_eq!(r["inertia"]["z"].as_u64().unwrap(), 5 - m);
        assert_eq!(r["pass"], true);
    }
    let text = stdout(&run(&["sweep", "--graph", &g]));
    assert!(text.contains("15/15 pass"));

    let bad = graph_file(tmp.path(), "c4bar.txt", &c4().complement());
    let o = run(&["sweep", "--graph", &bad, "--k", "1"]);
    assert_eq!(code(&o), 2);
    assert!(o.stdout.is_empty());
}

#[test]
fn selftest_counts_and_fault() {
    let o = run(&["selftest", "--quick"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for name in ["lemma2.1", "lemma2.2", "lemma2.3", "lemma2.4", "inertia-agreement", "treewidth"] {
        assert!(text.contains(&format!("{name}: ")), "{name}");
    }
    assert!(text.contains("lemma2.1: 20/20"));

    let o = run(&["selftest", "--quick", "--inject-fault"]);
    assert_eq!(code(&o), 5);
    assert!(!stdout(&o).contains("inertia-agreement: 50/50"));
}
