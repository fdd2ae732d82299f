use std::process::Command;

use serde_json::Value;

fn bin(args: &[&str], threads: Option<&str>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_factor-count"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("FC_THREADS", t),
        None => cmd.env_remove("FC_THREADS"),
    };
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (code, out, err) = bin(args, None);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

const TABLE1_ROWS: [[&str; 3]; 4] = [
    ["0.6377", "0.6729", "0.7108"],
    ["1.6164", "1.6712", "1.7109"],
    ["2.6781", "2.7222", "2.7543"],
    ["3.6306", "3.6870", "3.7227"],
];

#[test]
fn table1_matches_published_digits() {
    let csv = ok(&["table1", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 5);
    for (line, want) in lines[1..].iter().zip(TABLE1_ROWS) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(&cells[3..], &want[..], "{line}");
    }
    assert_eq!(ok(&["table1"]), ok(&["table1", "--exact"]));
}

#[test]
fn table2_matches_published_digits() {
    let want = [
        "0.0000000000",
        "0.2261237100",
        "0.2843779231",
        "0.3036262081",
        "0.3107772116",
        "0.3136222260",
        "0.3148056307",
        "0.3153133064",
        "0.3155360250",
        "0.3156353854",
    ];
    let csv = ok(&["table2", "--format", "csv"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,P(x)");
    assert_eq!(lines.len(), 11);
    for (i, line) in lines[1..].iter().enumerate() {
        assert_eq!(*line, format!("{},{}", i + 1, want[i]));
    }
    assert_eq!(ok(&["script-p", "10"]), "0.3156353854\n");
}

#[test]
fn certify_quartic() {
    let j = json(&["certify", "x^4-1", "--x", "10000", "--format", "json"]);
    assert_eq!(j["k_hat"], "3");
    assert_eq!(j["certified"], false);
    assert_eq!(j["breakdown"]["threshold"], "256");
    let text = ok(&["certify", "x^4-1", "--x", "10000"]);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("CERTIFIED: no (bound = exp(1.5"), "{last}");
    let text = ok(&["certify", "x^4+1", "--x", "100"]);
    assert!(text.ends_with("CERTIFIED: no (x below 256)\n"), "{text}");
}

#[test]
fn json_keys_are_sorted() {
    let out = ok(&["certify", "x^2+1", "--x", "1000", "--format", "json"]);
    let top: Vec<&str> = out
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort_unstable();
    assert_eq!(top, sorted);
    assert!(top.len() > 5);
}

#[test]
fn exit_codes() {
    assert_eq!(bin(&["--help"], None).0, 0);
    assert_eq!(bin(&["bogus"], None).0, 1);
    assert_eq!(bin(&["f-value", "x^2+1"], None).0, 1);
    assert_eq!(bin(&["f-value", "x^2+", "--x", "10"], None).0, 1);
    assert_eq!(bin(&["f-value", "--x", "10"], None).0, 1);
    assert_eq!(bin(&["certify", "x^2-2x+1", "--x", "100"], None).0, 2);
    assert_eq!(bin(&["omega", "x^2+1", "--p", "9"], None).0, 2);
    assert_eq!(bin(&["nfm-check", "x^2+1", "--x", "1.5"], None).0, 2);
    assert_eq!(bin(&["f-value", "x^2+1", "--x", "10"], Some("zero")).0, 1);
    let (code, _, err) = bin(&["mertens-q", "2e6", "--exact"], None);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn verification_verbs() {
    let j = json(&["nfm-check", "x^3-2", "--x", "10000", "--monogenic", "--exact", "--format", "json"]);
    assert_eq!(j["holds"], true);
    assert_eq!(j["trusted"], true);
    assert_eq!(j["a_g"]["error_radius"], "0");
    let j = json(&["components1", "x^2+x+1", "--x", "1000", "--monogenic", "--format", "json"]);
    assert_eq!(j["holds"], true);
    let j = json(&["nfm-check", "2x^2+1", "--x", "10000", "--format", "json"]);
    assert_eq!(j["trusted"], false);
    assert_eq!(j["h"], "x^2 + 2");
}

#[test]
fn small_verbs() {
    assert_eq!(ok(&["omega", "x^2+1", "--p", "5"]), "omega(5) = 2\n");
    assert_eq!(ok(&["resultant", "x^2+1", "x-2"]), "R(f, g) = 5\n");
    assert_eq!(ok(&["resultant", "--coeffs", "[1,0,1]", "--coeffs", "[-2,1]"]), "R(f, g) = 5\n");
    let j = json(&["discriminant", "2x^2+1", "--format", "json"]);
    assert_eq!(j["discriminant"], "-8");
    assert_eq!(j["d_bold"], "8");
    let j = json(&["mertens-q", "10", "--exact", "--format", "json"]);
    assert_eq!(j["mertens_q"]["value"], "1.176190476190");
    assert_eq!(j["mertens_q"]["error_radius"], "0");
    assert_eq!(ok(&["f-value", "x^4+1", "--x", "1000"]), ok(&["f-value", "--coeffs", "[1,0,0,0,1]", "--x", "1000"]));
    let t = ok(&["threshold", "x-1"]);
    assert!(t.starts_with("u* = loglog x* = 4.52"), "{t}");
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["f-value", "x^4-5x^2+4", "--x", "200000", "--format", "json", "--digits", "30"];
    let one = bin(&args, Some("1"));
    let four = bin(&args, Some("4"));
    let default = bin(&args, None);
    assert_eq!(one.0, 0);
    assert_eq!(one, four);
    assert_eq!(one, default);
    let args = ["table1", "--exact", "--digits", "25"];
    assert_eq!(bin(&args, Some("1")), bin(&args, Some("3")));
}
