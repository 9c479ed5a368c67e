use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn polgame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polgame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let o = polgame(&full);
    let v = serde_json::from_str(&stdout(&o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&o)));
    (o.status.code().expect("exit code"), v)
}

const EXAM: &str = "(a:{}, b:{}) |-o (a:{c:(),d:()}, b:{e:(),f:()})";

#[test]
fn exit_codes() {
    assert_eq!(
        polgame(&["prove", "() |-o ()", "--engine", "linear"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(polgame(&["prove", "() |-o (a:{})"]).status.code(), Some(1));
    assert_eq!(polgame(&["prove", "() |-o ("]).status.code(), Some(2));
    assert_eq!(polgame(&["prove", "{} |-o ()"]).status.code(), Some(2));
    assert_eq!(polgame(&["eval", "{}"]).status.code(), Some(1));
    let over = polgame(&["eval", "bang((8:{2:()}))", "--engine", "naive"]);
    assert_eq!(over.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&over.stderr).contains("budget"));
}

#[test]
fn engines_agree_on_sequents() {
    let sequents = [
        EXAM,
        "(a:{}) |-o ()",
        "() |- {a:(), b:(c:{})}",
        "{a:()} |-p {}",
        "ox((a:{}), (b:{c:()})) |-o otr({x:()}, (y:{}))",
        "(a:{b:()}) |- par({a:()}, dual((c:{})))",
    ];
    for s in sequents {
        let codes: Vec<_> = ["linear", "dp", "naive"]
            .iter()
            .map(|e| polgame(&["prove", s, "--engine", e]).status.code())
            .collect();
        assert!(
            codes.iter().all(|c| *c == codes[0] && c.unwrap() < 2),
            "{s}: {codes:?}"
        );
    }
}

#[test]
fn golden_profile() {
    let f = "oxr((2:{2:()}),{1:(),1:(2:{})})";
    assert_eq!(
        stdout(&polgame(&["profile", f, "--measured"])),
        "[1,2,6,8,8]"
    );
    assert_eq!(
        stdout(&polgame(&["profile", f, "--formula"])),
        "[1,2,6,8,8]"
    );
    let (_, v) = json(&["profile", f]);
    assert_eq!(v["value"], serde_json::json!([1, 2, 6, 8, 8]));
}

#[test]
fn bang_leaves_in_stats() {
    let (code, v) = json(&["eval", "bang((3:{2:()}))", "--engine", "naive", "--count"]);
    assert_eq!(code, 0);
    assert_eq!(v["stats"]["leaves"], 48);
    let text = stdout(&polgame(&[
        "eval",
        "bang((3:{2:()}))",
        "--engine",
        "naive",
        "--count",
    ]));
    assert!(text.contains("leaves: 48"));
}

#[test]
fn records_share_a_schema() {
    let runs: [&[&str]; 9] = [
        &["prove", EXAM, "--engine", "dp"],
        &["eval", "(a:{c:()})", "--engine", "naive", "--witness"],
        &["expand", "ox((a:{}), ())"],
        &["size", "par({a:()}, {b:()})", "--graph"],
        &["profile", "(a:{})"],
        &["count", "(a:{c:(),d:()})"],
        &["extract", EXAM],
        &["normalize", "id :: (a:{}) |-o (a:{})"],
        &["random", "formula", "--seed", "4"],
    ];
    for args in runs {
        let (_, v) = json(args);
        for key in ["command", "seed", "engine", "stats"] {
            assert!(v.get(key).is_some(), "{args:?} lacks {key}");
        }
        assert!(
            v.get("verdict").is_some() || v.get("value").is_some(),
            "{args:?}"
        );
    }
}

#[test]
fn dp_stats() {
    let (_, v) = json(&["eval", "ox((a:{}), (a:{}))", "--engine", "dp", "--stats"]);
    for key in ["verdict", "binary_ops", "memo_hits", "bound"] {
        assert!(v["stats"].get(key).is_some());
    }
    assert_eq!(v["stats"]["bound"], "2");
}

#[test]
fn input_sources() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polgame"))
        .args(["count", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .expect("spawn");
    child
        .stdin
        .take()
        .expect("stdin")
        .write_all(b"(a:{c:(),d:()}, b:{e:()})")
        .expect("write");
    let out = child.wait_with_output().expect("wait");
    assert_eq!(stdout(&out), "2");

    let path = std::env::temp_dir().join(format!("polgame-cli-{}.txt", std::process::id()));
    std::fs::write(&path, EXAM).expect("write temp file");
    let arg = format!("@{}", path.display());
    assert_eq!(polgame(&["prove", &arg]).status.code(), Some(0));
    std::fs::remove_file(path).ok();
}

#[test]
fn normalize_and_extract() {
    let worked = "( a -> >c . ( ), b -> >e . ( ) ) ; <b . { e -> >a . ( ), f -> >b . ( ) } :: (a:{}, b:{}) |- {a:(), b:()}";
    for order in ["innermost", "outermost"] {
        assert_eq!(
            stdout(&polgame(&["normalize", worked, "--order", order])),
            ">a . ( )"
        );
    }
    assert_eq!(
        polgame(&["normalize", "id :: (a:{}) |-o (b:{})"])
            .status
            .code(),
        Some(2)
    );

    let proof = stdout(&polgame(&["extract", EXAM]));
    let term = polgame::morphism::parse_term(&proof).expect("printed proof parses");
    let s = polgame::parse_sequent(EXAM).expect("sequent");
    polgame::morphism::typecheck(&term, &s).expect("extracted proof typechecks");
    assert_eq!(
        polgame(&["extract", "() |-o (a:{})"]).status.code(),
        Some(1)
    );
}

#[test]
fn random_is_deterministic() {
    for kind in ["formula", "game", "term"] {
        let a = stdout(&polgame(&["random", kind, "--seed", "11", "--n", "3"]));
        let b = stdout(&polgame(&["random", kind, "--seed", "11", "--n", "3"]));
        assert_eq!(a, b);
        assert_eq!(a.lines().count(), 3);
    }
}

#[test]
fn bench_suites() {
    let (_, v) = json(&["bench", "engines", "--sizes", "2,4,8"]);
    assert_eq!(v["stats"]["engines_agree"], true);
    let rows = v["value"]["rows"].as_array().expect("rows");
    assert!(rows
        .iter()
        .any(|r| r["engine"] == "naive" && r["status"] == "budget"));
    assert!(rows
        .iter()
        .filter(|r| r["engine"] != "naive")
        .all(|r| r["status"] == "ok"));

    let (_, v) = json(&["bench", "growth", "--sizes", "2"]);
    let l4 = v["value"]["rows"]
        .as_array()
        .expect("rows")
        .iter()
        .find(|r| r["instance"] == "par(L_4, L_4)")
        .expect("L_4 row")
        .clone();
    assert_eq!(l4["leaves"], 6);
    assert_eq!(l4["usize"], 5);

    let (_, v) = json(&["bench", "shortcircuit", "--sizes", "3"]);
    let row = &v["value"]["rows"][0];
    assert!(row["mean_short_circuit"].as_f64() <= row["mean_full"].as_f64());
}
