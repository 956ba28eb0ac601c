use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SMALL: &str = "3 6\n2 6\n3 6\n4 4\n";
const PAIRS: &str = "2 8\n5 5 2\n4 3 2\n";

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_permknap"));
    c.env_remove("PERMKNAP_SEED");
    c
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

#[test]
fn solve_prints_profit() {
    let dir = TempDir::new().unwrap();
    let small = write(dir.path(), "small.txt", SMALL);
    let pairs = write(dir.path(), "pairs.txt", PAIRS);
    let empty = write(dir.path(), "empty.txt", "0 10\n");
    assert_eq!(
        run(bin().arg("solve").arg(&small).args(["--algo", "brute"])),
        (0, "profit 12\n".into(), String::new())
    );
    assert_eq!(
        run(bin().arg("solve").arg(&pairs).args(["--algo", "pipeline"])).1,
        "profit 6\n"
    );
    assert_eq!(run(bin().arg("solve").arg(&empty)).1, "profit 0\n");
    for algo in ["auto", "bellman", "permdp", "pipeline", "brute"] {
        assert_eq!(
            run(bin().arg("solve").arg(&small).args(["--algo", algo])).1,
            "profit 12\n",
            "{algo}"
        );
    }
}

#[test]
fn solve_prints_witness_lines() {
    let dir = TempDir::new().unwrap();
    let pairs = write(dir.path(), "pairs.txt", PAIRS);
    let (code, out, _) =
        run(bin()
            .arg("solve")
            .arg(&pairs)
            .args(["--algo", "pipeline", "--witness"]));
    assert_eq!(code, 0);
    assert_eq!(out, "profit 6\ntake 1 2\n");
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let garbled = write(dir.path(), "bad.txt", "2 8\n5 five\n");
    let invalid = write(dir.path(), "inv.txt", "1 8\n0 5\n");
    let many = write(dir.path(), "many.txt", "1 10\n1 1 30\n");
    assert_eq!(run(bin().arg("solve").arg(&garbled)).0, 2);
    assert_eq!(run(bin().arg("solve").arg(&invalid)).0, 2);
    assert_eq!(
        run(bin().arg("solve").arg(dir.path().join("missing.txt"))).0,
        2
    );
    let (code, _, err) = run(bin().arg("solve").arg(&many).args(["--algo", "brute"]));
    assert_eq!(code, 3, "{err}");
}

#[test]
fn gen_is_deterministic_and_honours_the_seed_variable() {
    let args = [
        "gen",
        "--n",
        "40",
        "--w-max",
        "20",
        "--m-max",
        "4",
        "--dist",
        "correlated",
    ];
    let a = run(bin().args(args).args(["--seed", "5"])).1;
    let b = run(bin().args(args).args(["--seed", "5"])).1;
    let c = run(bin().args(args).env("PERMKNAP_SEED", "5")).1;
    let d = run(bin().args(args)).1;
    assert_eq!(a, b);
    assert_eq!(a, c);
    assert_ne!(a, d);
    assert!(a.starts_with("40 "));
    assert_eq!(a.lines().count(), 41);

    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.txt");
    assert_eq!(
        run(bin().args(args).args(["--seed", "5", "-o"]).arg(&out)).0,
        0
    );
    assert_eq!(std::fs::read_to_string(&out).unwrap(), a);
    assert_eq!(run(bin().args(["gen", "--n", "0"])).0, 2);
}

#[test]
fn generated_files_round_trip_through_solve() {
    let dir = TempDir::new().unwrap();
    for dist in [
        "uniform",
        "correlated",
        "clustered-weights",
        "all-equal",
        "two-coprime",
        "common-factor",
    ] {
        let f = dir.path().join(format!("{dist}.txt"));
        let code = run(bin()
            .args([
                "gen", "--n", "30", "--w-max", "25", "--m-max", "5", "--dist", dist, "-o",
            ])
            .arg(&f))
        .0;
        assert_eq!(code, 0);
        let bellman = run(bin().arg("solve").arg(&f).args(["--algo", "bellman"])).1;
        let pipeline = run(bin()
            .arg("solve")
            .arg(&f)
            .args(["--algo", "pipeline", "--seed", "3"]))
        .1;
        assert_eq!(bellman, pipeline, "{dist}");
    }
}

#[test]
fn verify_reports_pass_and_skip() {
    let dir = TempDir::new().unwrap();
    let small = write(dir.path(), "small.txt", SMALL);
    let huge = write(
        dir.path(),
        "huge.txt",
        "2 9000000000\n5000000000 1\n5000000000 2\n",
    );
    let (code, out, _) = run(bin().arg("verify").arg(&small).args(["--trials", "3"]));
    assert_eq!(code, 0);
    let name = small.display().to_string();
    assert_eq!(
        out,
        format!("{name} pipeline PASS got=12 want=12\n{name} permdp PASS got=12 want=12\n")
    );
    let (code, out, _) = run(bin().arg("verify").arg(&huge));
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.contains(" SKIP")), "{out}");
    assert_eq!(
        run(bin().arg("verify").arg(dir.path().join("nope.txt"))).0,
        2
    );
}

#[test]
fn bench_writes_one_record_per_instance_and_algorithm() {
    let dir = TempDir::new().unwrap();
    let files: Vec<PathBuf> = (0..3)
        .map(|i| {
            write(
                dir.path(),
                &format!("i{i}.txt"),
                &format!("2 {}\n2 3 2\n3 4\n", 3 + i),
            )
        })
        .collect();
    let (code, out, err) = run(bin().arg("bench").args(&files).args([
        "--algos",
        "bellman,pipeline",
        "--repeats",
        "3",
        "--verify",
    ]));
    assert_eq!(code, 0, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(
        lines[0],
        "instance_id,n,W,w_max,p_max,algorithm,seed,alpha,safety,profit,reduced_items,elapsed_ns,verified"
    );
    assert!(lines[1..].iter().all(|l| l.ends_with(",1")));
    assert!(err.contains("slope algorithm=bellman"));
}

#[test]
fn bench_generates_instances_by_size() {
    let (code, out, err) = run(bin().args([
        "bench",
        "--sizes",
        "64,128,256",
        "--w-max",
        "16",
        "--algos",
        "permdp",
        "--repeats",
        "1",
    ]));
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 4);
    assert!(out
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("uniform-n64-s0,64,"));
    assert!(err.contains("slope algorithm=permdp w_max=16 sizes=3 slope="));
}
