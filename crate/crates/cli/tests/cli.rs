use std::process::{Command, Output};

use serde_json::Value;

fn phaselock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phaselock"))
        .args(args)
        .output()
        .expect("phaselock binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = phaselock(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

/// Data lines of a CSV output, without the `#` header.
fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

#[test]
fn points_streams_every_vertex() {
    let o = phaselock(&["points", "--family", "db", "--n", "5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# count=30\n"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 30);
    assert_eq!(rows[0], "-1,-1,-1,-1,4");

    let v = json(&["points", "--family", "cs", "--n", "4", "--j", "2"]);
    assert_eq!(v["data"].as_array().unwrap().len(), 6);
    assert_eq!(v["config"]["params"]["j"], "2");
}

#[test]
fn norm_of_a_db_vertex_is_one() {
    let v = json(&["norm", "--spec", "I_DB(4)", "--vector", "3,-1,-1,-1"]);
    assert!((v["data"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let v = json(&[
        "norm",
        "--spec",
        "Intersect(C_DB(4),C_CS(4))",
        "--vector",
        "1,2,3,4",
        "--project",
    ]);
    assert!(v["data"]["value"].as_f64().unwrap() > 0.0);
    assert_eq!(v["config"]["params"]["vector"], "-1.5,-0.5,0.5,1.5");
}

#[test]
fn member_reports_certificates_for_hulls() {
    let v = json(&["member", "--spec", "Hull(I_DB(4),I_CS(4))", "--vector", "0.5,-0.5,0,0"]);
    assert_eq!(v["data"]["inside"], true);
    assert!(v["data"]["certificate"]["objective"].as_f64().unwrap() < 1.0);
    let v = json(&["member", "--true", "--vector", "10,-10,0"]);
    assert_eq!(v["data"]["inside"], false);
    let v = json(&["member", "--true", "--gamma", "30", "--vector", "10,-10,0"]);
    assert_eq!(v["data"]["inside"], true);
}

#[test]
fn volume_modes() {
    let v = json(&["volume", "--exact", "--spec", "C_DB(5)"]);
    assert!((v["data"]["value"].as_f64().unwrap() - 4472.135955).abs() < 1e-5);
    let v = json(&["volume", "--postnikov", "--x", "1,0,-1", "--euclidean"]);
    assert!((v["data"]["value"].as_f64().unwrap() - 3.0 * 3f64.sqrt()).abs() < 1e-12);
    let v = json(&[
        "volume",
        "--mc",
        "--spec",
        "I_DB(4)",
        "--samples",
        "20000",
        "--seed",
        "5",
    ]);
    let d = &v["data"];
    assert_eq!(d["samples"], 20000);
    assert_eq!(d["seed"], 5);
    let (value, se) = (d["value"].as_f64().unwrap(), d["std_error"].as_f64().unwrap());
    assert!((value - 128.0).abs() < 4.0 * se, "{value} ± {se}");
    assert!(v["config"]["params"]["caveat"].is_string());
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        vec!["volume", "--mc", "--exact", "--spec", "I_DB(4)"],
        vec!["norm", "--spec", "Nope(4)", "--vector", "1,-1"],
        vec!["norm", "--spec", "I_DB(4)", "--vector", "1,2,3,4"],
        vec!["member", "--spec", "I_DB(4)", "--vector", "1,-1,0"],
        vec!["frobnicate"],
    ] {
        let o = phaselock(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(phaselock(&["--help"]).status.code(), Some(0));
}

#[test]
fn table1_echoes_config_and_ratios_are_consistent() {
    let o = phaselock(&["table1", "--n", "5", "--samples", "5000", "--seed", "9"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for header in ["# command=table1", "# seed=9", "# samples=5000", "# n=5"] {
        assert!(text.contains(header), "{header}");
    }
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 6);
    let c_cs: f64 = rows[0][4].parse().unwrap();
    assert_eq!(&rows[0][3], "exact");
    for r in &rows {
        let volume: f64 = r[4].parse().unwrap();
        let ratio: f64 = r[8].parse().unwrap();
        assert_eq!(ratio, volume / c_cs, "{r:?}");
        assert!(r[10].is_empty());
    }
    assert_eq!(&rows[3][2], "Intersect(C_DB(5),C_CS(5))");
}

#[test]
fn table2_small_run() {
    let v = json(&["table2", "--n", "5", "--samples", "5000", "--lp-samples", "1000"]);
    let cells = v["data"].as_array().unwrap();
    assert_eq!(cells.len(), 4);
    assert_eq!(cells[1]["samples"], 1000);
    assert_eq!(cells[2]["samples"], 5000);
    assert!(cells[3]["exact"].as_f64().is_some());
}

#[test]
fn evs_emits_one_row_per_kappa() {
    let o = phaselock(&[
        "evs", "--dist", "dexp:1", "--n", "64", "--kappa", "0.25,2", "--trials", "50",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][6], "P_sync -> 0");
    assert_eq!(&rows[1][6], "P_sync -> 1");
    let o = phaselock(&["evs", "--n", "64", "--kappa", "0.5", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic_and_thread_independent() {
    let args = |t: &'static str| ["table1", "--n", "5", "--samples", "20000", "--threads", t];
    let a = phaselock(&args("1")).stdout;
    assert_eq!(a, phaselock(&args("1")).stdout);
    assert_eq!(a, phaselock(&args("3")).stdout);
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("phaselock-out-{}.csv", std::process::id()));
    let o = phaselock(&[
        "volume",
        "--exact",
        "--spec",
        "I_DB(3)",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.contains("key,value\nvalue,15.588457268119"));
}
