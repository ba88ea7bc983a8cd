use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rosenlin::io::{self, PencilFile, ProblemFile};
use rosenlin::random;
use rosenlin::system::{example_r2, BlockDims};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rosenlin"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rosenlin-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&o.stdout))
    })
}

fn write_problem(dir: &Path, name: &str, pf: &ProblemFile) -> PathBuf {
    let path = dir.join(name);
    io::write_json(&path, pf).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dim_prints_formula() {
    let o = run(&["dim", "--m", "2", "--n", "2", "--k", "2", "--r", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "14");
    let o = run(&["dim", "--m", "1", "--n", "5", "--k", "1", "--r", "3"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "2");
    assert_eq!(code(&run(&["dim", "--m", "0", "--n", "1", "--k", "1", "--r", "1"])), 2);
}

#[test]
fn usage_errors_exit_2_and_help_exits_0() {
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["dim", "--m", "x"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn build_verify_solve_round_trip() {
    let dir = scratch("roundtrip");
    let problem = write_problem(&dir, "r2.json", &ProblemFile::new(&example_r2()));
    for source in ["c1", "c2", "dl"] {
        let pencil = dir.join(format!("{source}.json"));
        let o = run(&["build", "--input", s(&problem), "--source", source, "--output", s(&pencil)]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

        let o = run(&["verify", "--pencil", s(&pencil), "--input", s(&problem)]);
        assert_eq!(code(&o), 0, "{source}: {}", String::from_utf8_lossy(&o.stdout));
        assert_eq!(stdout_json(&o)["verdict"], "pass");

        let o = run(&["solve", "--pencil", s(&pencil), "--input", s(&problem)]);
        assert_eq!(code(&o), 0);
        let v = stdout_json(&o);
        assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 3);
        let recovered = if source == "c2" { &v["left"] } else { &v["right"] };
        for r in recovered.as_array().unwrap() {
            assert!(r["transfer_residual"].as_f64().unwrap() < 1e-8);
        }
    }
}

#[test]
fn verify_rejects_a_perturbed_pencil_with_exit_1() {
    let dir = scratch("perturbed");
    let problem = write_problem(&dir, "r2.json", &ProblemFile::new(&example_r2()));
    let mut pf = PencilFile::from_pencil(&rosenlin::spaces::build_c1(&example_r2()), None);
    pf.y[0][1][0] += 1.0;
    let pencil = dir.join("bad.json");
    io::write_json(&pencil, &pf).unwrap();
    let o = run(&["verify", "--pencil", s(&pencil), "--input", s(&problem)]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["verdict"], "fail");
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = scratch("malformed");
    let garbage = dir.join("garbage.json");
    std::fs::write(&garbage, "{ not json").unwrap();
    assert_eq!(code(&run(&["build", "--input", s(&garbage)])), 2);
    assert_eq!(code(&run(&["build", "--input", s(&dir.join("missing.json"))])), 2);

    let mut pf = ProblemFile::new(&example_r2());
    pf.format = 7;
    let wrong = write_problem(&dir, "format.json", &pf);
    assert_eq!(code(&run(&["build", "--input", s(&wrong)])), 2);

    let mut pf = ProblemFile::new(&example_r2());
    pf.realization.b.push(vec![[0.0, 0.0]]);
    let shape = write_problem(&dir, "shape.json", &pf);
    assert_eq!(code(&run(&["build", "--input", s(&shape)])), 2);
}

#[test]
fn sample_is_deterministic_and_writes_files() {
    let dir = scratch("sample");
    let real = random::realization(&mut random::rng(3), BlockDims::new(2, 1, 2, 1).unwrap());
    let problem = write_problem(&dir, "p.json", &ProblemFile::new(&real));
    let out = dir.join("pencils");
    let args = ["sample", "--input", s(&problem), "--count", "4", "--seed", "9"];
    let a = run(&args);
    let b = run(&[&args[..], &["--output", s(&out)]].concat());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["count"], 4);
    assert_eq!(v["pass_rate"], 1.0);
    assert!(out.join("sample_0003.json").exists());
    let back = io::read_pencil(&out.join("sample_0000.json")).unwrap();
    assert_eq!(back.dims, real.dims());

    let v = stdout_json(&run(&["sample", "--input", s(&problem), "--count", "0"]));
    assert!(v["pass_rate"].is_null());
}

#[test]
fn chebyshev_build_verifies_in_the_monomial_frame() {
    let dir = scratch("basis");
    let real = random::realization(&mut random::rng(4), BlockDims::new(3, 1, 2, 1).unwrap());
    let problem = write_problem(&dir, "p.json", &ProblemFile::new(&real));
    let pencil = dir.join("cheb.json");
    let o = run(&["build", "--input", s(&problem), "--basis", "chebyshev", "--output", s(&pencil)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(io::read_pencil(&pencil).unwrap().basis.is_some());
    let o = run(&["verify", "--pencil", s(&pencil), "--input", s(&problem)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn symmetric_source_on_unstructured_data_is_a_compute_error() {
    let dir = scratch("sym");
    let real = random::realization(&mut random::rng(5), BlockDims::new(1, 2, 2, 1).unwrap());
    let problem = write_problem(&dir, "p.json", &ProblemFile::new(&real));
    assert_eq!(code(&run(&["build", "--input", s(&problem), "--source", "sym"])), 3);
    let sym = random::symmetric_realization(&mut random::rng(5), BlockDims::new(1, 2, 2, 1).unwrap());
    let problem = write_problem(&dir, "sym.json", &ProblemFile::new(&sym));
    assert_eq!(code(&run(&["build", "--input", s(&problem), "--source", "sym"])), 0);
}

#[test]
fn r1_examples() {
    let dir = scratch("r1");
    let r1 = rosenlin::system::example_r1();
    let problem = write_problem(&dir, "r1.json", &ProblemFile::new(&r1));
    let c1 = stdout_json(&run(&["build", "--input", s(&problem), "--source", "c1"]));
    let dl = stdout_json(&run(&["build", "--input", s(&problem), "--source", "dl"]));
    let expected = serde_json::to_value(PencilFile::from_pencil(&rosenlin::spaces::build_c1(&r1), None)).unwrap();
    assert_eq!(c1["X"], expected["X"]);
    assert_eq!(c1["Y"], expected["Y"]);
    assert_eq!(dl["X"], c1["X"]);
    assert_eq!(dl["Y"], c1["Y"]);

    let pencil = dir.join("c1.json");
    run(&["build", "--input", s(&problem), "--output", s(&pencil)]);
    let v = stdout_json(&run(&["verify", "--pencil", s(&pencil), "--input", s(&problem)]));
    assert!(v["max_eig_error"].as_f64().unwrap() <= 1e-8);

    let v = stdout_json(&run(&["solve", "--pencil", s(&pencil), "--input", s(&problem)]));
    let eigs = v["eigenvalues"].as_array().unwrap();
    assert_eq!(eigs.len(), 2);
    for e in eigs {
        assert!((e[0].as_f64().unwrap() - 1.0).abs() < 1e-7 && e[1].as_f64().unwrap().abs() < 1e-7);
    }
    for r in v["right"].as_array().unwrap() {
        assert!((r["vector"][0][0].as_f64().unwrap().abs() - 1.0).abs() < 1e-12);
    }

    let out = dir.join("samples");
    let o = run(&["sample", "--input", s(&problem), "--count", "10", "--output", s(&out)]);
    assert_eq!(stdout_json(&o)["pass_rate"], 1.0);
    assert_eq!(std::fs::read_dir(&out).unwrap().count(), 10);
}

#[test]
fn empty_pencil_exits_2() {
    let dir = scratch("empty");
    let problem = write_problem(&dir, "r2.json", &ProblemFile::new(&example_r2()));
    let mut pf = PencilFile::from_pencil(&rosenlin::spaces::build_c1(&example_r2()), None);
    pf.x.clear();
    pf.y.clear();
    let pencil = dir.join("empty.json");
    io::write_json(&pencil, &pf).unwrap();
    assert_eq!(code(&run(&["solve", "--pencil", s(&pencil), "--input", s(&problem)])), 2);
    std::fs::write(&pencil, "{\"format\": 1, \"X\": [[").unwrap();
    assert_eq!(code(&run(&["verify", "--pencil", s(&pencil), "--input", s(&problem)])), 2);
}
