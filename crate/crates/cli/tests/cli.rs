use std::fs;
use std::process::{Command, Output};

fn noncollide(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noncollide")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn count_examples() {
    let o = noncollide(&["count", "--start", "0,2", "--end", "0,2", "--steps", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "3\n");
    for method in ["enumerate", "lgv", "schur"] {
        let o = noncollide(&["count", "--start", "0,2", "--end", "0,2", "--steps", "2", "--method", method]);
        assert_eq!(stdout(&o), "3\n", "{method}");
    }
}

#[test]
fn parity_error_exits_one() {
    let o = noncollide(&["count", "--start", "0,2", "--end", "1,3", "--steps", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parity"));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(noncollide(&["count", "--start", "0,2"]).status.code(), Some(2));
    assert_eq!(noncollide(&["count", "--start", "0,x", "--end", "0,2", "--steps", "2"]).status.code(), Some(2));
    assert_eq!(noncollide(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn large_counts_print_in_full() {
    let o = noncollide(&["count", "--start", "0,2,4", "--end", "0,2,4", "--steps", "60"]);
    let s = stdout(&o);
    assert!(s.trim().len() > 20 && s.trim().bytes().all(|b| b.is_ascii_digit()), "{s}");
}

#[test]
fn schur_methods() {
    let o = noncollide(&["schur", "--shape", "2,1", "--points", "1,1,1", "--method", "principal"]);
    assert_eq!(stdout(&o), "8\n");
    for method in ["ssyt", "bialternant", "dualjt"] {
        let o = noncollide(&["schur", "--shape", "2,1", "--points", "1,2,3", "--method", method]);
        assert_eq!(stdout(&o), "60\n", "{method}");
        // (x+y)(x+z)(y+z) at (1/2, 2, 3)
        let o = noncollide(&["schur", "--shape", "2,1", "--points", "1/2,2,3", "--method", method]);
        assert_eq!(stdout(&o), "175/4\n", "{method}");
    }
    let o = noncollide(&["schur", "--shape", "2,1", "--points", "1,2,3", "--method", "principal"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lgv_on_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    // two sources, two sinks, one shared middle vertex
    fs::write(
        &g,
        r#"{"vertices":["a","b","m","c","d"],
            "edges":[{"from":"a","to":"m","weight":1},{"from":"b","to":"m","weight":"1/2"},
                     {"from":"m","to":"c","weight":1},{"from":"m","to":"d","weight":3},
                     {"from":"a","to":"c","weight":2},{"from":"b","to":"d","weight":1}]}"#,
    )
    .unwrap();
    let p = g.to_str().unwrap();
    let o = noncollide(&["lgv", "--graph", p, "--sources", "a,b", "--sinks", "c,d"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    // det [[1+2, 3], [1/2, 3/2+1]] = 15/2 - 3/2 = 6
    assert_eq!(stdout(&o), "6\n");
    let o = noncollide(&["lgv", "--graph", p, "--sources", "a,b", "--sinks", "c,d", "--check"]);
    let s = stdout(&o);
    assert!(s.contains("determinant,6") && s.contains("compatible,true") && s.contains("nonintersecting_sum,6"), "{s}");
    let o = noncollide(&["lgv", "--graph", p, "--sources", "a,zz", "--sinks", "c,d"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn tableau_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    fs::write(&w, r#"[{"start":[0,2],"steps":[[-1,-1,-1],[-1,1,-1]],"horizon":3},{"start":[0,2],"steps":[[1,1],[1,1]],"horizon":2}]"#)
        .unwrap();
    let t = dir.path().join("t.json");
    let o = noncollide(&["tableau", "from-walk", "--in", w.to_str().unwrap(), "--out", t.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let tabs: serde_json::Value = serde_json::from_str(&fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(tabs[0]["shape"], serde_json::json!([2, 2, 1]));
    assert_eq!(tabs[1]["shape"], serde_json::json!([]));
    let first = dir.path().join("t0.json");
    fs::write(&first, tabs[0].to_string()).unwrap();
    let o = noncollide(&["tableau", "to-walk", "--in", first.to_str().unwrap(), "--walkers", "2", "--steps", "3"]);
    let back: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(back["steps"], serde_json::json!([[-1, -1, -1], [-1, 1, -1]]));
}

#[test]
fn sample_walk_csv_layout() {
    let o = noncollide(&["sample-walk", "--start", "0,2,4", "--steps", "5", "--n", "4", "--seed", "42"]);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("# seed=42 command=sample-walk start=0,2,4 steps=5 n=4 method=exact"));
    assert_eq!(lines.next(), Some("sample_id,t,walker_id,position"));
    let rows: Vec<Vec<i64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4 * 6 * 3);
    for chunk in rows.chunks(3) {
        assert!(chunk[0][3] < chunk[1][3] && chunk[1][3] < chunk[2][3], "{chunk:?}");
    }
}

#[test]
fn simulate_csv_layout_and_ordering() {
    for cmd in ["simulate-dyson", "simulate-inhomogeneous"] {
        let o = noncollide(&[cmd, "--n", "3", "--t", "1", "--steps", "40", "--paths", "3", "--seed", "7", "--record-every", "10"]);
        let s = stdout(&o);
        let mut lines = s.lines();
        assert!(lines.next().unwrap().starts_with("# seed=7 command="));
        assert_eq!(lines.next(), Some("path_id,t,i,value"));
        let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
        // origin start: first draw at step 1, then steps 10, 20, 30, 40
        assert_eq!(rows.len(), 3 * 5 * 3, "{cmd}");
        for c in rows.chunks(3) {
            assert!(c[0][3] < c[1][3] && c[1][3] < c[2][3]);
        }
        assert_eq!(rows.last().unwrap()[1], 1.0);
    }
}

#[test]
fn verify_sde_reads_matrix_output() {
    let dir = tempfile::tempdir().unwrap();
    let eig = dir.path().join("eig.csv");
    let rep = dir.path().join("sde.json");
    let o = noncollide(&["simulate-matrix", "--n", "2", "--t", "1", "--steps", "1000", "--paths", "200", "--seed", "9", "--out", eig.to_str().unwrap()]);
    assert!(o.status.success());
    let o = noncollide(&["verify-sde", "--in", eig.to_str().unwrap(), "--report", rep.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(r["seed"], 9);
    assert_eq!(r["paths"], 200);
    let slope = r["pooled"]["slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.3, "{slope}");
    for q in r["qv"].as_array().unwrap() {
        assert!((q.as_f64().unwrap() - 1.0).abs() < 0.05);
    }
    assert_eq!(r["gamma"].as_array().unwrap().len(), 2);
}

#[test]
fn density_values() {
    // one particle: heat kernel at distance 0.7, time 0.5
    let o = noncollide(&["density", "p", "--x", "-0.2", "--t", "0.5", "--y", "0.5"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    let exact = (-0.49f64).exp() / std::f64::consts::PI.sqrt();
    assert!((v - exact).abs() < 1e-12, "{v} {exact}");
    let o = noncollide(&["density", "survival", "--x", "0,1", "--t", "1"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.5204998778130465).abs() < 1e-9);
    let o = noncollide(&["density", "g", "--n", "2", "--t", "0.5", "--y", "0,1"]);
    assert_eq!(o.status.code(), Some(1), "missing horizon");
    let o = noncollide(&["density", "p", "--grid", "-1,1,4", "--t", "1"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 10);
}

#[test]
fn verify_single_criterion_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let rep = dir.path().join("r.json");
    let o = noncollide(&["verify", "--criterion", "2", "--report", rep.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("criterion  2 [PASS]"));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(r["pass"], true);
    assert_eq!(noncollide(&["verify", "--criterion", "99"]).status.code(), Some(1));
}
