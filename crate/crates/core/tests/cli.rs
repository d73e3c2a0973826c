use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_berge-ramsey");

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("RAMSEY_CACHE")
        .output()
        .expect("binary runs")
}

fn status(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn exit_status_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let blue_k3 = "blue=berge:K3";
    let red_k4 = "red=berge:K4";
    let cases: &[(&[&str], i32)] = &[
        (
            &[
                "decide",
                "--n",
                "5",
                "--r",
                "3",
                "--target",
                blue_k3,
                "--target",
                red_k4,
                "--no-cache",
            ],
            0,
        ),
        (
            &[
                "decide",
                "--n",
                "4",
                "--r",
                "3",
                "--target",
                blue_k3,
                "--target",
                red_k4,
                "--no-cache",
            ],
            1,
        ),
        (
            &[
                "decide",
                "--n",
                "7",
                "--r",
                "3",
                "--target",
                "berge:K5",
                "--target",
                "berge:K5",
                "--max-nodes",
                "5",
                "--no-cache",
            ],
            3,
        ),
        (
            &[
                "decide",
                "--r",
                "3",
                "--target",
                blue_k3,
                "--target",
                red_k4,
                "--no-cache",
            ],
            2,
        ),
        (
            &[
                "decide",
                "--n",
                "5",
                "--r",
                "3",
                "--colors",
                "1",
                "--target",
                "berge:K3",
                "--target",
                "berge:K3",
                "--no-cache",
            ],
            2,
        ),
        (
            &[
                "decide",
                "--n",
                "5",
                "--r",
                "3",
                "--target",
                "bogus:K3",
                "--target",
                "berge:K3",
                "--no-cache",
            ],
            2,
        ),
        (
            &[
                "number",
                "--r",
                "3",
                "--target",
                "berge:K3",
                "--target",
                "berge:K3",
                "--hi",
                "8",
                "--no-cache",
            ],
            0,
        ),
        (
            &[
                "number",
                "--r",
                "3",
                "--target",
                "berge:K3",
                "--target",
                "berge:K3",
                "--hi",
                "4",
                "--no-cache",
            ],
            1,
        ),
        (&["construct", "two-block", "--t", "4", "--s", "5"], 0),
        (&["construct", "two-block", "--t", "2", "--s", "5"], 2),
        (&["construct", "special-pair", "--n", "6", "--r", "4"], 0),
        (
            &[
                "construct",
                "class-partition-suspension",
                "--t",
                "6",
                "--s",
                "4",
                "--a",
                "2",
            ],
            0,
        ),
        (
            &[
                "construct",
                "superlinear-multicolor",
                "--r",
                "3",
                "--t",
                "5",
                "--epsilon",
                "1/2",
            ],
            2,
        ),
        (
            &[
                "construct",
                "superlinear-multicolor",
                "--r",
                "3",
                "--t",
                "5",
                "--epsilon",
                "1/2",
                "--seed",
                "3",
            ],
            0,
        ),
        (
            &["construct", "lll-suspension-bound", "--r", "3", "--t", "10"],
            0,
        ),
        (
            &["construct", "lll-suspension-bound", "--r", "3", "--t", "4"],
            1,
        ),
        (&["reproduce", "--max-nodes", "0"], 3),
        (&["verify"], 2),
    ];
    for (args, expected) in cases {
        let out = run_in(d, args);
        assert_eq!(
            status(&out),
            *expected,
            "{args:?}\nstdout: {}\nstderr: {}",
            stdout(&out),
            stderr(&out)
        );
    }
}

#[test]
fn witnesses_recipes_and_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let coloring = r#"{"n": 5, "r": 3, "k": 2, "colors": [0,0,0,0,0,0,0,0,0,0]}"#;
    fs::write(d.join("c.json"), coloring).unwrap();

    let out = run_in(
        d,
        &[
            "detect",
            "--coloring",
            "c.json",
            "--target",
            "berge:K4",
            "--target",
            "berge:K4",
            "--out",
            "w.json",
        ],
    );
    assert_eq!(status(&out), 0, "{}", stderr(&out));
    assert_eq!(
        status(&run_in(
            d,
            &["verify", "--coloring", "c.json", "--witness", "w.json"]
        )),
        0
    );

    let mut w: Value =
        serde_json::from_str(&fs::read_to_string(d.join("w.json")).unwrap()).unwrap();
    w["core"][0] = Value::from(w["core"][1].as_u64().unwrap());
    fs::write(d.join("bad.json"), w.to_string()).unwrap();
    let out = run_in(
        d,
        &["verify", "--coloring", "c.json", "--witness", "bad.json"],
    );
    assert_eq!(status(&out), 1);
    assert!(stdout(&out).starts_with("invalid:"), "{}", stdout(&out));

    let out = run_in(
        d,
        &[
            "detect",
            "--coloring",
            "c.json",
            "--target",
            "berge:K6",
            "--target",
            "berge:K6",
        ],
    );
    assert_eq!((status(&out), stdout(&out).trim()), (1, "none"));

    fs::write(
        d.join("broken.json"),
        r#"{"n": 5, "r": 3, "k": 2, "colours": []}"#,
    )
    .unwrap();
    let out = run_in(
        d,
        &[
            "detect",
            "--coloring",
            "broken.json",
            "--target",
            "berge:K4",
            "--target",
            "berge:K4",
        ],
    );
    assert_eq!(status(&out), 2);
    assert!(stderr(&out).contains("colors"), "{}", stderr(&out));

    assert_eq!(
        status(&run_in(
            d,
            &[
                "construct",
                "two-block",
                "--t",
                "5",
                "--s",
                "5",
                "--out",
                "tb.json"
            ]
        )),
        0
    );
    assert_eq!(status(&run_in(d, &["verify", "--recipe", "tb.json"])), 0);
    let mut recipe: Value =
        serde_json::from_str(&fs::read_to_string(d.join("tb.json")).unwrap()).unwrap();
    recipe["recipe"]["guarantee"][0] = Value::from("berge:K3");
    fs::write(d.join("tb2.json"), recipe.to_string()).unwrap();
    let out = run_in(d, &["verify", "--recipe", "tb2.json"]);
    assert_eq!(status(&out), 1, "{}{}", stdout(&out), stderr(&out));

    let out = run_in(
        d,
        &[
            "number",
            "--r",
            "3",
            "--target",
            "berge:K4",
            "--target",
            "berge:K5",
            "--hi",
            "8",
            "--no-cache",
            "--out",
            "cert.json",
        ],
    );
    assert_eq!(status(&out), 0);
    assert!(
        stdout(&out).starts_with("R^3(BK4,BK5) = 6\n"),
        "{}",
        stdout(&out)
    );
    assert_eq!(
        status(&run_in(
            d,
            &["verify", "--certificate", "cert.json", "--recheck"]
        )),
        0
    );
    let mut cert: Value =
        serde_json::from_str(&fs::read_to_string(d.join("cert.json")).unwrap()).unwrap();
    cert["lower_witness"]["colors"] = Value::from(vec![0; 10]);
    fs::write(d.join("cert2.json"), cert.to_string()).unwrap();
    assert_eq!(
        status(&run_in(d, &["verify", "--certificate", "cert2.json"])),
        1
    );
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "number",
        "--r",
        "3",
        "--target",
        "berge:K3",
        "--target",
        "berge:K4",
        "--hi",
        "8",
        "--cache",
        "store.jsonl",
    ];
    let first = run_in(d, &args);
    assert_eq!(status(&first), 0);
    let second = run_in(d, &args);
    assert_eq!(stdout(&first), stdout(&second));
    let lines = fs::read_to_string(d.join("store.jsonl")).unwrap();
    assert_eq!(
        lines.lines().count(),
        1,
        "second run should be served from the cache"
    );

    let mut f = fs::OpenOptions::new()
        .append(true)
        .open(d.join("store.jsonl"))
        .unwrap();
    std::io::Write::write_all(&mut f, b"{\"record\":\"certif").unwrap();
    let third = run_in(d, &args);
    assert_eq!(status(&third), 0);
    assert!(
        stderr(&third).contains("skipping corrupt cache line"),
        "{}",
        stderr(&third)
    );

    let out = Command::new(BIN)
        .args([
            "decide", "--n", "5", "--r", "3", "--target", "berge:K3", "--target", "berge:K3",
        ])
        .current_dir(d)
        .env("RAMSEY_CACHE", d.join("env.jsonl"))
        .output()
        .unwrap();
    assert_eq!(status(&out), 0);
    assert!(d.join("env.jsonl").exists());
    assert!(!d.join("ramsey-cache.jsonl").exists());
}

#[test]
fn json_reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "decide",
        "--n",
        "4",
        "--r",
        "3",
        "--target",
        "berge:K3",
        "--target",
        "berge:K4",
        "--format",
        "json",
        "--no-cache",
    ];
    let a = run_in(dir.path(), &args);
    let b = run_in(dir.path(), &args);
    assert_eq!(status(&a), 1);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["status"], "not-arrows");
    assert!(v["counterexample"]["colors"].is_array());
}
