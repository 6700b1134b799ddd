use serde_json::Value;
use std::collections::BTreeSet;
use std::process::{Command, Output};

fn ellpsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellpsp"))
        .args(args)
        .env_remove("ELLPSP_POINT_CAP")
        .output()
        .unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn test_emits_a_verdict_per_input() {
    let o = ellpsp(&[
        "test", "--flavor", "strong-g", "--curve", "-1,0", "--d", "1", "--n", "161", "--point",
        "0,0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    for k in [
        "test", "N", "curve", "point", "passed", "reason", "s", "t", "trace",
    ] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert_eq!(v["N"], "161");
    assert_eq!(v["curve"]["d"], 1);
    // 161 = 7 * 23 and (-1/161) = 1
    assert_eq!(v["reason"], "JacobiNotMinusOne");
    assert_eq!(v["passed"], false);
    assert!(o.stderr.is_empty());

    let o = ellpsp(&[
        "test", "--flavor", "s", "--curve", "1,1", "--n", "13", "--point", "0,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["reason"], "NotComposite");
}

#[test]
fn strong_verdict_carries_the_trace() {
    // 287 = 7 * 41 passes on y^2 = x^3 - 25x at (-4, 6)
    let o = ellpsp(&[
        "test", "--flavor", "strong-g", "--curve", "-25,0", "--d", "1", "--n", "287=7*41",
        "--point", "-4:6:1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["passed"], true);
    assert_eq!(v["s"], 5);
    assert_eq!(v["t"], "9");
    let trace = v["trace"].as_array().unwrap();
    assert!(!trace.is_empty());
    for (i, st) in trace.iter().enumerate() {
        assert_eq!(st["r"], i as u64);
        assert_eq!(st["point"]["n"], "287");
    }
    assert_eq!(v["point"]["x"], "283");
}

#[test]
fn config_errors_exit_two() {
    let o = ellpsp(&[
        "test", "--flavor", "g", "--curve", "-1,0", "--n", "161", "--point", "0,0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    let o = ellpsp(&[
        "test", "--flavor", "s", "--curve", "1,1", "--n", "35", "--point", "0,2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = ellpsp(&[
        "test", "--flavor", "x", "--curve", "1,1", "--n", "35", "--point", "0,1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = ellpsp(&["stats", "--bound-check", "--n", "35", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_three() {
    let o = Command::new(env!("CARGO_BIN_EXE_ellpsp"))
        .args(["verify", "--theorem", "carmichael", "--n", "35"])
        .env("ELLPSP_POINT_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn input_file_runs_in_order() {
    let path = std::env::temp_dir().join(format!("ellpsp-jobs-{}.txt", std::process::id()));
    std::fs::write(&path, "# N point\n35 0:1:1\n13 0,1\n\n91=7*13 0,1\n").unwrap();
    let o = ellpsp(&[
        "test",
        "--flavor",
        "s",
        "--curve",
        "1,1",
        "--input",
        path.to_str().unwrap(),
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(0));
    let ns: Vec<Value> = json_lines(&o).into_iter().map(|v| v["N"].clone()).collect();
    assert_eq!(ns, ["35", "13", "91"]);
}

#[test]
fn census_csv_matches_the_closed_form() {
    let o = ellpsp(&["census", "--p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap(),
        vec!["p", "no_roots", "one_root", "three_roots", "singular"]
    );
    let row: Vec<u64> = r
        .records()
        .next()
        .unwrap()
        .unwrap()
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    let p = 7u64;
    let nonsing = p * p * p - p * p;
    // (p+1)/3p, 1/2, (p-2)/6p of the nonsingular cubics
    assert_eq!(row[1] * 3 * p, (p + 1) * nonsing);
    assert_eq!(row[2] * 2, nonsing);
    assert_eq!(row[3] * 6 * p, (p - 2) * nonsing);
    assert_eq!(row[4], p * p);

    let o = ellpsp(&["census", "--p", "5,11", "--format", "json"]);
    let v = json_lines(&o);
    assert_eq!(v.len(), 2);
    assert_eq!(v[1]["proportions"], v[1]["predicted"]);
}

#[test]
fn verify_reports_the_maxima() {
    let o = ellpsp(&["verify", "--theorem", "max-h", "--grid", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["max"], "5/8");
    assert_eq!(v["argmax"], serde_json::json!([[1, 1, 1, 1]]));

    let o = ellpsp(&[
        "verify",
        "--theorem",
        "max-h-prime",
        "--grid",
        "6",
        "--tw",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["max"], "9/11");

    let o = ellpsp(&["verify", "--theorem", "witness", "--n", "25"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["missing"], serde_json::json!([]));

    let o = ellpsp(&["verify", "--theorem", "max-h", "--grid", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn stats_are_replayable() {
    let args = [
        "stats",
        "--bound-check",
        "--n",
        "35",
        "--samples",
        "3000",
        "--seed",
        "42",
    ];
    let a = ellpsp(&args);
    let b = ellpsp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = &json_lines(&a)[0];
    assert_eq!(v["seed"], 42);
    // 623/1120 in lowest terms
    assert_eq!(v["bound"], "89/160");
    assert_eq!(v["within_bound"], true);
    let c = ellpsp(&[
        "stats",
        "--bound-check",
        "--n",
        "35",
        "--samples",
        "3000",
        "--seed",
        "43",
    ]);
    assert_ne!(a.stdout, c.stdout);

    let o = ellpsp(&["stats", "--exact", "--n", "35"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_lines(&o)[0]["within_bound"], true);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let path = std::env::temp_dir().join(format!("ellpsp-out-{}.jsonl", std::process::id()));
    let args = [
        "stats",
        "--bound-check",
        "--n",
        "35",
        "--samples",
        "500",
        "--seed",
        "7",
    ];
    let direct = ellpsp(&args);
    let mut with_out = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    with_out.extend(["--out", &p]);
    let o = ellpsp(&with_out);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_file(&path).ok();
}

fn search_ns(flavor: &str, from: &str, to: &str) -> Vec<u64> {
    let o = ellpsp(&[
        "search", "--flavor", flavor, "--curve", "-25,0", "--d", "1", "--from", from, "--to", to,
        "--point", "-4,6",
    ]);
    assert_eq!(o.status.code(), Some(0));
    json_lines(&o)
        .iter()
        .map(|v| v["N"].as_str().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn search_is_ordered_and_strong_is_a_subset() {
    let strong = search_ns("strong-g", "9", "20000");
    let weak = search_ns("g", "9", "20000");
    assert_eq!(strong.first(), Some(&287));
    assert!(strong.windows(2).all(|w| w[0] < w[1]));
    assert!(weak.windows(2).all(|w| w[0] < w[1]));
    let w: BTreeSet<_> = weak.iter().collect();
    assert!(strong.iter().all(|n| w.contains(n)));
    assert!(strong.len() < weak.len());
    assert!(search_ns("g", "100", "50").is_empty());
    // S flavors run without CM data
    let o = ellpsp(&[
        "search", "--flavor", "s", "--curve", "-25,0", "--from", "9", "--to", "400", "--point",
        "-4,6",
    ]);
    assert_eq!(o.status.code(), Some(0));
}
