mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use gcnivc::bench::LabelDataset;
use gcnivc::Graph;
use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcnivc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn star_dimacs(leaves: usize) -> String {
    let mut s = format!("c star\np edge {} {}\n", leaves + 1, leaves);
    for i in 2..=leaves + 1 {
        s += &format!("e 1 {i}\n");
    }
    s
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn solve_star_reports_center_with_original_ids() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("star.dimacs"), star_dimacs(5)).unwrap();
    let stdout = ok(&[
        "solve",
        &p(&dir, "star.dimacs"),
        "--steps",
        "1000",
        "-o",
        &p(&dir, "out.json"),
    ]);
    assert!(stdout.contains("best size 1"), "{stdout}");
    let v = json(&dir.path().join("out.json"));
    assert_eq!(v["best_size"], 1);
    assert_eq!(v["cover"], serde_json::json!([1]));
    assert_eq!(v["n"], 6);
    assert_eq!(v["m"], 5);
    assert!(v["time_to_best_seconds"].is_null());
}

#[test]
fn construct_only_prints_initial_cover() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("star.dimacs"), star_dimacs(8)).unwrap();
    for init in ["gcn", "greedy"] {
        let stdout = ok(&[
            "solve",
            &p(&dir, "star.dimacs"),
            "--construct-only",
            "--init",
            init,
            "-o",
            &p(&dir, "init.json"),
        ]);
        assert!(
            stdout.contains("initial cover: size = 1, valid = true"),
            "{stdout}"
        );
        let v = json(&dir.path().join("init.json"));
        assert_eq!(v["cover"], serde_json::json!([1]));
        assert_eq!(v["init"], init);
    }
}

#[test]
fn ablation_flags_change_config_echo_only() {
    let dir = TempDir::new().unwrap();
    let g = gcnivc::generate::gnp(
        16,
        0.3,
        &mut <rand_xoshiro::Xoshiro256PlusPlus as rand::SeedableRng>::seed_from_u64(9),
    );
    gcnivc::io::write_edge_list(&g, &dir.path().join("g.edges")).unwrap();
    let opt = common::exhaustive_mvc(&g);
    for flags in [&[][..], &["--no-dcnumber"][..], &["--no-crv"][..]] {
        let mut args = vec!["solve", "g.edges", "--steps", "20000", "-o", "r.json"];
        args.extend_from_slice(flags);
        let args: Vec<String> = args
            .iter()
            .map(|a| {
                if a.ends_with(".edges") || a.ends_with(".json") {
                    p(&dir, a)
                } else {
                    a.to_string()
                }
            })
            .collect();
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        ok(&refs);
        let v = json(&dir.path().join("r.json"));
        assert_eq!(v["best_size"], opt, "{flags:?}");
        assert_eq!(v["config"]["dcnumber"], !flags.contains(&"--no-dcnumber"));
        assert_eq!(v["config"]["crv"], !flags.contains(&"--no-crv"));
        let cover: Vec<usize> = serde_json::from_value(v["cover"].clone()).unwrap();
        assert!(g.is_cover_list(&cover));
    }
}

#[test]
fn bench_directory_writes_report() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("inst");
    fs::create_dir(&inst).unwrap();
    fs::write(inst.join("a.dimacs"), star_dimacs(4)).unwrap();
    fs::write(inst.join("b.edges"), "0 1\n1 2\n2 0\n").unwrap();
    let stdout = ok(&[
        "bench",
        inst.to_str().unwrap(),
        "--steps",
        "500",
        "--seeds",
        "1-3",
        "-o",
        &p(&dir, "report.json"),
    ]);
    assert!(stdout.contains("Min"), "{stdout}");
    let v = json(&dir.path().join("report.json"));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let by_name = |n: &str| rows.iter().find(|r| r["name"] == n).unwrap().clone();
    assert_eq!(by_name("a")["min_size"], 1);
    assert_eq!(by_name("b")["min_size"], 2);
    assert_eq!(by_name("b")["runs"], 3);
}

#[test]
fn tune_grid_has_one_row_per_cell() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("k3.edges"), "0 1\n1 2\n2 0\n").unwrap();
    fs::write(dir.path().join("s.dimacs"), star_dimacs(3)).unwrap();
    ok(&[
        "tune",
        &p(&dir, "k3.edges"),
        &p(&dir, "s.dimacs"),
        "--steps",
        "300",
        "--seeds",
        "1-2",
        "--ctner",
        "1,3",
        "--bms",
        "5,50",
        "--target-size",
        "k3=2",
        "-o",
        &p(&dir, "tune.json"),
    ]);
    let rows = json(&dir.path().join("tune.json"));
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r["instances"], 2);
        assert_eq!(r["hits"], 2);
    }
}

#[test]
fn gen_labels_from_file_and_random_families() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("k3.edges"), "0 1\n1 2\n2 0\n").unwrap();
    fs::write(dir.path().join("star.dimacs"), star_dimacs(9)).unwrap();
    ok(&[
        "gen-labels",
        "--count",
        "0",
        "--input",
        &p(&dir, "k3.edges"),
        "--input",
        &p(&dir, "star.dimacs"),
        "-o",
        &p(&dir, "files.json"),
    ]);
    let ds = LabelDataset::load(&dir.path().join("files.json")).unwrap();
    assert_eq!(ds.records.len(), 2);
    assert_eq!(
        ds.records[0]
            .labels
            .iter()
            .map(|&b| b as usize)
            .sum::<usize>(),
        2
    );
    let mut star = vec![0u8; 10];
    star[0] = 1;
    assert_eq!(ds.records[1].labels, star);

    let stdout = ok(&[
        "gen-labels",
        "--count",
        "50",
        "--min-n",
        "5",
        "--max-n",
        "18",
        "--seed",
        "3",
        "-o",
        &p(&dir, "random.json"),
    ]);
    assert!(stdout.contains("wrote 50 labeled graphs"), "{stdout}");
    let ds = LabelDataset::load(&dir.path().join("random.json")).unwrap();
    for rec in &ds.records {
        assert!((5..=18).contains(&rec.n));
        let g = Graph::from_edges(rec.edges.iter().map(|e| (e[0], e[1])), rec.n);
        let flags: Vec<bool> = rec.labels.iter().map(|&b| b == 1).collect();
        assert!(g.is_vertex_cover(&flags), "{}", rec.graph_id);
        let size = flags.iter().filter(|&&b| b).count();
        assert_eq!(size, common::exhaustive_mvc(&g), "{}", rec.graph_id);
    }
}

#[test]
fn errors_exit_nonzero_with_message() {
    let out = run(&["solve", "/nonexistent/graph.dimacs"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.dimacs"), "p edge 2 1\ne 1 3\n").unwrap();
    let out = run(&["solve", &p(&dir, "bad.dimacs"), "--steps", "10"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = run(&["gen-labels", "--max-n", "400", "-o", &p(&dir, "x.json")]);
    assert!(!out.status.success());
}
