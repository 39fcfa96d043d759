use std::process::{Command, Output};

fn maxgrowth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxgrowth")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// `(n, count)` pairs from CSV output.
fn rows(csv: &str) -> Vec<(u64, u64, String, String)> {
    csv.lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].to_string(), f[3].to_string())
        })
        .collect()
}

#[test]
fn table_gk2() {
    let o = maxgrowth(&["table", "--family", "gk", "--k", "2", "--nmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("n,count,case,method\n"));
    let formula: Vec<(u64, u64)> =
        rows(&out).into_iter().filter(|r| r.3 == "formula").map(|r| (r.0, r.1)).collect();
    assert_eq!(formula, vec![(2, 3), (3, 4), (4, 0), (5, 6)]);
}

#[test]
fn table_hk1_formula_and_recursion() {
    let o = maxgrowth(&["table", "--family", "hk", "--k", "1", "--nmax", "9", "--methods", "formula,recursion"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    for want in [(3, 7), (4, 4), (9, 0)] {
        for method in ["formula", "recursion"] {
            assert!(r.iter().any(|x| (x.0, x.1) == want && x.3 == method), "{want:?} {method}");
        }
    }
    let four = r.iter().find(|x| x.0 == 4).unwrap();
    assert_eq!(four.2, "prime_square_coprime");
}

#[test]
fn table_hk2_with_oracle() {
    let o = maxgrowth(&["table", "--family", "hk", "--k", "2", "--nmax", "4", "--methods", "formula,oracle"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    for method in ["formula", "oracle"] {
        let got: Vec<(u64, u64)> = r.iter().filter(|x| x.3 == method).map(|x| (x.0, x.1)).collect();
        assert_eq!(got, vec![(2, 7), (3, 13), (4, 0)], "{method}");
    }
}

#[test]
fn table_negative_k_and_jsonl() {
    let o = maxgrowth(&["table", "--family", "hk", "--k", "-2", "--nmax", "3", "--format", "jsonl"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    for v in &lines {
        let obj = v.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(keys, ["case", "count", "method", "n"]);
    }
    // k = -2: k + 2 = 0, so every odd prime takes the 2p + 1 branch
    assert_eq!((&lines[0]["n"], &lines[0]["count"]), (&2.into(), &7.into()));
    assert_eq!((&lines[2]["n"], &lines[2]["count"], &lines[2]["case"]), (&3.into(), &7.into(), &"prime_divides_k_plus_2".into()));
}

#[test]
fn output_is_byte_stable() {
    let args = ["table", "--family", "hk", "--k", "3", "--nmax", "9", "--methods", "formula,recursion,oracle"];
    let a = maxgrowth(&args);
    let b = maxgrowth(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = ["verify", "--family", "hk", "--k", "-2..2", "--nmax", "12", "--oracle-nmax", "5"];
    assert_eq!(maxgrowth(&v).stdout, maxgrowth(&v).stdout);
}

#[test]
fn verify_campaigns() {
    let o = maxgrowth(&["verify", "--family", "gk", "--k", "1..4", "--nmax", "30", "--oracle-nmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().filter(|l| l.starts_with("gk ")).all(|l| l.ends_with(" PASS")));
    assert!(out.ends_with("summary: cells=116 pass=116 fail=0 oracle_cells=16 skipped=0\n"), "{out}");

    let o = maxgrowth(&["verify", "--family", "hk", "--k", "-4..6", "--nmax", "100", "--oracle-nmax", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("hk k=1 n=3 formula=7 recursion=7 oracle=7 PASS\n"));
}

#[test]
fn verify_examples() {
    for args in [
        ["verify", "--family", "gk", "--k", "1..5", "--nmax", "200", "--oracle-nmax", "7"],
        ["verify", "--family", "hk", "--k", "-4..6", "--nmax", "200", "--oracle-nmax", "5"],
        ["verify", "--family", "hk", "--k", "2..2", "--nmax", "50", "--oracle-nmax", "0"],
    ] {
        let o = maxgrowth(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        let out = stdout(&o);
        let summary = out.lines().last().unwrap();
        assert!(summary.contains(" fail=0 ") && summary.ends_with(" skipped=0"), "{summary}");
    }
    let o = maxgrowth(&["verify", "--family", "hk", "--k", "2..2", "--nmax", "50"]);
    assert!(!stdout(&o).contains("oracle="));
}

#[test]
fn verify_skips_beyond_the_index_cap() {
    let o = maxgrowth(&["verify", "--family", "gk", "--k", "2", "--nmax", "13", "--oracle-nmax", "13"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("gk k=2 n=13 formula=14 recursion=14 oracle=SKIPPED PASS\n"), "{out}");
    assert!(out.contains("skipped=1"));
}

#[test]
fn node_budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_maxgrowth"))
        .args(["table", "--family", "hk", "--k", "1", "--nmax", "5", "--methods", "oracle"])
        .env("MAXGROWTH_NODE_BUDGET", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("SKIPPED"));
}

#[test]
fn noniso() {
    let o = maxgrowth(&["noniso", "--i", "2", "--j", "3"]);
    assert_eq!(stdout(&o), "certificate: p=2 side=plus m_p(H_2)=7 m_p(H_3)=3\n");
    let o = maxgrowth(&["noniso", "--i", "4", "--j", "4"]);
    assert_eq!(stdout(&o), "no certificate from this criterion\n");
    let o = maxgrowth(&["noniso", "--i", "0", "--j", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["prime"], 3);
    assert_ne!(v["m_i"], v["m_j"]);
}

#[test]
fn mdeg() {
    let o = maxgrowth(&["mdeg", "--family", "hk", "--k", "2"]);
    assert!(stdout(&o).starts_with("group=H_2 exact=2 empirical_slope=2.0"), "{}", stdout(&o));
    let o = maxgrowth(&["mdeg", "--family", "hk", "--k", "3", "--limit", "10000"]);
    assert!(stdout(&o).starts_with("group=H_3 exact=1 "));
    let o = maxgrowth(&["mdeg", "--family", "gk", "--k", "4", "--limit", "10000"]);
    assert!(stdout(&o).starts_with("group=G_4 exact=1 "));
    let o = maxgrowth(&["mdeg", "--family", "gk", "--k", "1", "--limit", "1000"]);
    assert!(stdout(&o).starts_with("group=G_1 exact=0 empirical_slope=0.000000"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["table", "--family", "gk", "--k", "0", "--nmax", "5"],
        vec!["table", "--family", "gk", "--k", "2", "--nmax", "1"],
        vec!["table", "--family", "xk", "--k", "2", "--nmax", "5"],
        vec!["table", "--family", "gk", "--k", "2", "--nmax", "5", "--methods", "guess"],
        vec!["verify", "--family", "hk", "--k", "5..1", "--nmax", "5"],
        vec!["mdeg", "--family", "hk", "--k", "2", "--limit", "10"],
        vec!["frobnicate"],
    ] {
        let o = maxgrowth(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty());
    }
}
