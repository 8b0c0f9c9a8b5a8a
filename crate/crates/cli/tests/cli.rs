use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const TRIANGLE: &str = "NAME: tri\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n";

fn tsplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsplab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_triangle(dir: &Path) -> String {
    let path = dir.join("tri.tsp");
    fs::write(&path, TRIANGLE).unwrap();
    path.to_str().unwrap().to_string()
}

/// Compares against `tests/snapshots/<name>.txt`; set UPDATE_SNAPSHOTS=1 to rewrite.
fn check_snapshot(name: &str, actual: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_SNAPSHOTS").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing snapshot {}", path.display()));
    assert_eq!(actual, expected, "snapshot {name} differs");
}

#[test]
fn help_snapshots() {
    let commands: [(&str, &[&str]); 7] = [
        ("", &[]),
        ("gen", &["--n", "--seed", "--lo", "--hi", "--out"]),
        (
            "solve",
            &[
                "--instance",
                "--algorithm",
                "--variant",
                "--preset",
                "--config",
                "--seed",
                "--time-scale",
                "--max-evaluations",
                "--rounding",
                "--trajectory",
            ],
        ),
        ("bench", &["--plan", "--out-csv", "--out-json", "--workers", "--baseline-variant"]),
        (
            "tune",
            &[
                "--algorithm",
                "--variant",
                "--instances",
                "--budget",
                "--candidates",
                "--seed",
                "--time-scale",
                "--max-evaluations",
                "--rounding",
                "--out",
            ],
        ),
        ("gap", &["--csv", "--baseline-variant", "--json"]),
        ("render-prompt", &["--template", "--name", "--signature", "--code-file"]),
    ];
    for (cmd, flags) in commands {
        let args: Vec<&str> = if cmd.is_empty() { vec!["--help"] } else { vec![cmd, "--help"] };
        let out = tsplab(&args);
        assert!(out.status.success());
        let text = stdout(&out);
        for flag in flags {
            assert!(text.contains(flag), "{cmd} help lacks {flag}");
        }
        check_snapshot(if cmd.is_empty() { "help" } else { cmd }, &text);
    }
}

#[test]
fn solve_triangle_with_every_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write_triangle(dir.path());
    for alg in [
        "aco", "ga", "alns", "tabu", "sa", "q_learning", "sarsa", "christofides", "convex_hull", "branch_and_bound",
    ] {
        let out = tsplab(&["solve", "--instance", &tri, "--algorithm", alg, "--max-evaluations", "200", "--time-scale", "0.1"]);
        assert!(out.status.success(), "{alg}: {}", String::from_utf8_lossy(&out.stderr));
        let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(json["best_cost"].as_f64(), Some(12.0), "{alg}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("seed=0"));
    }
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.tsp");
    let b = dir.path().join("b.tsp");
    for p in [&a, &b] {
        assert!(tsplab(&["gen", "--n", "12", "--seed", "3", "--out", p.to_str().unwrap()]).status.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(fs::read_to_string(&a).unwrap().contains("DIMENSION : 12"));
}

#[test]
fn gap_table_sign() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("runs.csv");
    fs::write(
        &csv,
        "algorithm,variant,config_id,instance,n,seed,rep,best_cost,elapsed_s,evaluations,nodes_expanded,status\n\
         sa,baseline,original,x,10,1,0,100,0.1,5,,ok\n\
         sa,lundy_mees_r1,r1,x,10,2,0,90,0.1,5,,ok\n",
    )
    .unwrap();
    let out = tsplab(&["gap", "--csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().find(|l| l.contains("lundy_mees_r1")).unwrap();
    assert!(row.trim_end().ends_with("+10.0"), "{row}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write_triangle(dir.path());
    let unknown_flag = tsplab(&["solve", "--instance", &tri, "--algorithm", "ga", "--bogus"]);
    assert_eq!(unknown_flag.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&unknown_flag.stderr).contains("--bogus"));
    assert_eq!(tsplab(&["solve", "--instance", &tri, "--algorithm", "nope"]).status.code(), Some(1));
    assert_eq!(tsplab(&["solve", "--instance", &tri, "--algorithm", "aco", "--variant", "hybrid_r1"]).status.code(), Some(1));
    assert_eq!(tsplab(&["solve", "--instance", "/no/such.tsp", "--algorithm", "ga"]).status.code(), Some(2));
    let garbage = dir.path().join("bad.tsp");
    fs::write(&garbage, "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n").unwrap();
    assert_eq!(
        tsplab(&["solve", "--instance", garbage.to_str().unwrap(), "--algorithm", "ga"]).status.code(),
        Some(2)
    );
    assert_eq!(tsplab(&[]).status.code(), Some(1));
}

#[test]
fn bench_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.toml");
    fs::write(
        &plan,
        "repetitions = 2\nbase_seed = 5\ntime_scale = 0.1\nmax_evaluations = 300\n\
         instances = [{ n = 8, seed = 1 }, { n = 9, seed = 2 }]\n\
         [[runs]]\nalgorithm = \"sa\"\n[[runs]]\nalgorithm = \"sa\"\nvariant = \"lundy_mees_r1\"\n\
         [[runs]]\nalgorithm = \"convex_hull\"\n",
    )
    .unwrap();
    let csv = dir.path().join("out.csv");
    let json = dir.path().join("out.json");
    let out = tsplab(&[
        "bench",
        "--plan",
        plan.to_str().unwrap(),
        "--out-csv",
        csv.to_str().unwrap(),
        "--out-json",
        json.to_str().unwrap(),
        "--workers",
        "2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("algorithm,variant,config_id,instance,n,seed,rep,best_cost,elapsed_s,evaluations,nodes_expanded,status")
    );
    assert_eq!(lines.count(), 2 * 2 + 2 * 2 + 2);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(report["schema"], 1);
    assert_eq!(report["gaps"].as_array().unwrap().len(), 2);
}

#[test]
fn tune_and_render_prompt() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write_triangle(dir.path());
    let cfg = dir.path().join("best.toml");
    let out = tsplab(&[
        "tune",
        "--algorithm",
        "tabu",
        "--instances",
        &tri,
        "--budget",
        "12",
        "--candidates",
        "3",
        "--time-scale",
        "0.1",
        "--max-evaluations",
        "50",
        "--out",
        cfg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["algorithm"], "tabu");
    let solved = tsplab(&["solve", "--instance", &tri, "--algorithm", "tabu", "--config", cfg.to_str().unwrap(), "--max-evaluations", "50"]);
    assert!(solved.status.success());

    let too_small = tsplab(&["tune", "--algorithm", "tabu", "--instances", &tri, "--budget", "2", "--candidates", "3"]);
    assert_eq!(too_small.status.code(), Some(1));

    let code = dir.path().join("ga.py");
    fs::write(&code, "def genetic_algorithm(d):\n    pass\n").unwrap();
    let out = tsplab(&[
        "render-prompt",
        "--name",
        "Genetic Algorithm",
        "--signature",
        "def genetic_algorithm(d)",
        "--code-file",
        code.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let prompt = stdout(&out);
    assert!(prompt.contains("improve this Genetic Algorithm implementation for the travelling salesman problem"));
    assert!(!prompt.contains("{{"));
}
