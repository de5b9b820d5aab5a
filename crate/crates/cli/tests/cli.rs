//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

use netresponse::io::{load_attributes, load_edge_list};
use netresponse::{is_feasible, ResponseInstance};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_netresponse"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn binary");
    assert!(
        out.status.success(),
        "command {args:?} failed:\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

#[test]
fn generate_is_bit_exact_across_reruns() {
    let tmp = tempfile::tempdir().unwrap();
    let dir_a = tmp.path().join("a");
    let dir_b = tmp.path().join("b");
    for dir in [&dir_a, &dir_b] {
        run_ok(&[
            "generate",
            "--n",
            "25",
            "--edge-prob",
            "0.25",
            "--count",
            "3",
            "--seed",
            "99",
            "--out-dir",
            dir.to_str().unwrap(),
        ]);
    }
    for name in ["inst_0000.edges", "inst_0000.attrs", "inst_0002.edges", "inst_0002.attrs"] {
        let a = std::fs::read(dir_a.join(name)).unwrap();
        let b = std::fs::read(dir_b.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between reruns");
    }
    let manifest = read(&dir_a.join("manifest.json"));
    assert!(manifest.contains("\"subcommand\": \"generate\""));
    assert!(manifest.contains("\"seed\": 99"));
}

#[test]
fn solve_produces_feasible_solution_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("inst");
    run_ok(&[
        "generate",
        "--n",
        "40",
        "--edge-prob",
        "0.15",
        "--count",
        "1",
        "--seed",
        "5",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    let prefix = tmp.path().join("run");
    run_ok(&[
        "solve",
        "--graph",
        dir.join("inst_0000.edges").to_str().unwrap(),
        "--attrs",
        dir.join("inst_0000.attrs").to_str().unwrap(),
        "--coarsest-size",
        "20",
        "--subset-cap",
        "10",
        "--seed",
        "3",
        "--out",
        prefix.to_str().unwrap(),
    ]);

    // parse the solution back and verify feasibility independently
    let solution = read(&tmp.path().join("run.solution.txt"));
    let mut x = vec![false; 40];
    for line in solution.lines() {
        let mut fields = line.split_whitespace();
        let id: usize = fields.next().unwrap().parse().unwrap();
        let v: u8 = fields.next().unwrap().parse().unwrap();
        x[id] = v == 1;
    }
    let loaded = load_edge_list(&dir.join("inst_0000.edges"), false).unwrap();
    let attrs = load_attributes(&dir.join("inst_0000.attrs"), loaded.graph.n()).unwrap();
    let inst =
        ResponseInstance::with_derived_p(loaded.graph, attrs.phi, attrs.b, attrs.a).unwrap();
    let sol = is_feasible(&inst, &x).unwrap();
    assert!(sol.feasible, "solution file is not feasible");

    let report = read(&tmp.path().join("run.report.txt"));
    assert!(report.contains("feasible = true"));
    assert!(report.contains("objective = "));
    let trace = read(&tmp.path().join("run.trace.csv"));
    assert!(trace.starts_with("level,pass,objective"));
    let manifest = read(&tmp.path().join("run.manifest.json"));
    assert!(manifest.contains("\"sha256\""));
}

#[test]
fn sequential_and_parallel_solves_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("inst");
    run_ok(&[
        "generate",
        "--n",
        "80",
        "--edge-prob",
        "0.08",
        "--count",
        "1",
        "--seed",
        "13",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    let graph = dir.join("inst_0000.edges");
    let attrs = dir.join("inst_0000.attrs");
    let par = tmp.path().join("par");
    let seq = tmp.path().join("seq");
    for (prefix, extra) in [(&par, None), (&seq, Some("--sequential"))] {
        let mut args = vec![
            "solve",
            "--graph",
            graph.to_str().unwrap(),
            "--attrs",
            attrs.to_str().unwrap(),
            "--coarsest-size",
            "30",
            "--subset-cap",
            "8",
            "--seed",
            "21",
            "--out",
            prefix.to_str().unwrap(),
        ];
        if let Some(flag) = extra {
            args.push(flag);
        }
        run_ok(&args);
    }
    assert_eq!(
        read(&tmp.path().join("par.solution.txt")),
        read(&tmp.path().join("seq.solution.txt"))
    );
}

#[test]
fn simulate_seeds_only_with_zero_iterations() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("inst");
    run_ok(&[
        "generate",
        "--n",
        "60",
        "--edge-prob",
        "0.1",
        "--count",
        "1",
        "--seed",
        "4",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    let out = tmp.path().join("sim.attrs");
    run_ok(&[
        "simulate",
        "--graph",
        dir.join("inst_0000.edges").to_str().unwrap(),
        "--iterations",
        "0",
        "--seed",
        "17",
        "--out",
        out.to_str().unwrap(),
    ]);
    let attrs = read(&out);
    let mut hot = 0;
    for line in attrs.lines() {
        let phi: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
        if phi > 0.0 {
            assert!((0.8..=1.0).contains(&phi));
            hot += 1;
        }
    }
    assert_eq!(hot, 3); // ceil(0.05 * 60)
}

#[test]
fn compare_self_gives_unit_ratios() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("inst");
    run_ok(&[
        "generate",
        "--n",
        "30",
        "--edge-prob",
        "0.2",
        "--count",
        "2",
        "--seed",
        "8",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    let out = tmp.path().join("cmp.csv");
    run_ok(&[
        "compare",
        "--dir",
        dir.to_str().unwrap(),
        "--against",
        "ma",
        "--seed",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    let csv = read(&out);
    let mut rows = 0;
    for line in csv.lines().skip(1) {
        let ratio = line.split(',').nth(5).unwrap();
        assert_eq!(ratio, "1", "self-comparison ratio must be exactly 1: {line}");
        rows += 1;
    }
    assert_eq!(rows, 2);
}

#[test]
fn compare_against_exact_never_exceeds_one() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("inst");
    run_ok(&[
        "generate",
        "--n",
        "14",
        "--edge-prob",
        "0.3",
        "--count",
        "3",
        "--seed",
        "12",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    let out = tmp.path().join("cmp.csv");
    run_ok(&[
        "compare",
        "--dir",
        dir.to_str().unwrap(),
        "--against",
        "exact",
        "--exact-limit",
        "14",
        "--seed",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    for line in read(&out).lines().skip(1) {
        let ratio: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!(ratio <= 1.0 + 1e-9, "ratio above 1 against exact: {line}");
    }
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    // usage
    let usage = bin().arg("solve").arg("--bogus").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));

    // missing input file
    let io = bin()
        .args(["solve", "--graph", "/nonexistent.edges", "--attrs", "/nonexistent.attrs", "--out", "/tmp/x"])
        .output()
        .unwrap();
    assert_eq!(io.status.code(), Some(3));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("inst");
    run_ok(&[
        "generate",
        "--n",
        "30",
        "--edge-prob",
        "0.2",
        "--count",
        "1",
        "--seed",
        "2",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    let config = tmp.path().join("cfg.toml");
    std::fs::write(&config, "coarsest_size = 12\nsubset_cap = 6\ntheta = 0.45\n").unwrap();
    let prefix = tmp.path().join("run");
    run_ok(&[
        "solve",
        "--graph",
        dir.join("inst_0000.edges").to_str().unwrap(),
        "--attrs",
        dir.join("inst_0000.attrs").to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--theta",
        "0.55",
        "--seed",
        "1",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    let manifest = read(&tmp.path().join("run.manifest.json"));
    // flag wins over file, file wins over default
    assert!(manifest.contains("\"theta\": 0.55"));
    assert!(manifest.contains("\"coarsest_size\": 12"));
    assert!(manifest.contains("\"subset_cap\": 6"));
}
