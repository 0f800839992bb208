use std::process::{Command, Output};

fn hyperlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn check_holds_exits_zero() {
    let o = hyperlab(&[
        "check",
        "--ring",
        "z8:1,3",
        "--ideal",
        "0,4",
        "--prop",
        "uv-primary",
        "--u",
        "3",
        "--v",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| holds |"));
}

#[test]
fn zphi_failure_carries_witness_and_exits_one() {
    let o = hyperlab(&[
        "--json",
        "zphi",
        "--phi",
        "2,3",
        "--d",
        "12",
        "--prop",
        "uv-primary",
        "--u",
        "3",
        "--v",
        "2",
        "--window",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["status"]["kind"], "fails");
    let parts = &rows[0]["witness"]["parts"];
    assert_eq!(parts, &serde_json::json!([[2, 2], [3]]));
}

#[test]
fn failure_records_replay() {
    let o = hyperlab(&[
        "--json", "check", "--ring", "z12:1,5", "--ideal", "0", "--prop", "uv-prime", "--u", "3",
        "--v", "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let row = &json_lines(&o)[0];
    let parts: Vec<String> = row["witness"]["parts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| {
            p.as_array()
                .unwrap()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    let witness = parts.join("|");
    let replayed = hyperlab(&[
        "check", "--ring", "z12:1,5", "--ideal", "0", "--prop", "uv-prime", "--u", "3", "--v", "2",
        "--replay", &witness,
    ]);
    assert_eq!(replayed.status.code(), Some(1));
    assert!(stdout(&replayed).contains("failure reproduced"));

    let z = hyperlab(&[
        "zphi",
        "--phi",
        "2,3",
        "--d",
        "12",
        "--prop",
        "uv-primary",
        "--u",
        "3",
        "--v",
        "2",
        "--replay",
        "2,2|3",
    ]);
    assert_eq!(z.status.code(), Some(1));
    let bogus = hyperlab(&[
        "zphi",
        "--phi",
        "2,3",
        "--d",
        "12",
        "--prop",
        "uv-primary",
        "--u",
        "3",
        "--v",
        "2",
        "--replay",
        "6,2|3",
    ]);
    assert_eq!(bogus.status.code(), Some(0));
    assert!(stdout(&bogus).contains("does not show a failure"));
}

#[test]
fn golden_passes() {
    let o = hyperlab(&["golden"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert_eq!(text.matches("[flagged:").count(), 3);
}

#[test]
fn sweep_is_deterministic_and_writes_out() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for path in [&a, &b] {
        let o = hyperlab(&[
            "--json",
            "--out",
            path.to_str().unwrap(),
            "sweep",
            "--moduli",
            "6,8",
            "--u-max",
            "4",
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(o.stdout.is_empty());
    }
    let first = std::fs::read(&a).unwrap();
    assert!(!first.is_empty());
    assert_eq!(first, std::fs::read(&b).unwrap());
    let last: serde_json::Value =
        serde_json::from_str(String::from_utf8(first).unwrap().lines().last().unwrap()).unwrap();
    assert_eq!(last["kind"], "summary");
    assert_eq!(last["violations"], 0);
}

#[test]
fn sweep_honours_worker_count() {
    let o = Command::new(env!("CARGO_BIN_EXE_hyperlab"))
        .args(["sweep", "--moduli", "4", "--no-records"])
        .env("HYPERLAB_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_hyperlab"))
        .args(["golden"])
        .env("HYPERLAB_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["bogus"],
        vec![
            "check", "--ring", "z8:1,3", "--ideal", "0,4", "--prop", "nonsense",
        ],
        vec![
            "check", "--ring", "z8:1,3", "--ideal", "0,3", "--prop", "prime",
        ],
        vec![
            "check", "--ring", "z8:1,3", "--ideal", "0,4", "--prop", "uv-prime",
        ],
        vec![
            "check", "--ring", "z8:1,3", "--ideal", "0,4", "--prop", "uv-prime", "--u", "2", "--v",
            "2",
        ],
        vec![
            "zphi",
            "--phi",
            "2,3",
            "--d",
            "12",
            "--prop",
            "uv-primary",
            "--u",
            "3",
            "--v",
            "2",
            "--window",
            "1",
        ],
        vec!["validate", "--ring", "nonsense"],
    ] {
        assert_eq!(hyperlab(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn table_files_and_structural_errors() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("z2.toml");
    std::fs::write(
        &good,
        "n = 2\nadd = [[0, 1], [1, 0]]\nhmul = [[[0], [0]], [[0], [0, 1]]]\n",
    )
    .unwrap();
    let o = hyperlab(&["--json", "validate", "--ring", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["passed"], true);
    let o = hyperlab(&["ideals", "--ring", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    // 1∘1 = {1} but 1∘0 ≠ 0∘1: commutativity fails.
    let lawless = dir.path().join("bad.toml");
    std::fs::write(
        &lawless,
        "n = 2\nadd = [[0, 1], [1, 0]]\nhmul = [[[0], [0]], [[1], [1]]]\n",
    )
    .unwrap();
    let o = hyperlab(&["validate", "--ring", lawless.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("VIOLATION"));
    let o = hyperlab(&["ideals", "--ring", lawless.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));

    let malformed = dir.path().join("short.toml");
    std::fs::write(
        &malformed,
        "n = 2\nadd = [[0, 1], [1, 0]]\nhmul = [[[0], [0]]]\n",
    )
    .unwrap();
    let o = hyperlab(&["validate", "--ring", malformed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}
