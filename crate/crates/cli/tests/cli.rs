use std::path::Path;
use std::process::{Command, Output};

use casson::fixtures;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn casson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casson")).args(args).env_remove("CASSON_SEED").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn values(v: &Value) -> Vec<(String, Option<i64>)> {
    v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["method"].as_str().unwrap().to_string(), r["value"].as_i64()))
        .collect()
}

#[test]
fn trefoil_braid_all_methods() {
    let out = casson(&["v2", "--braid", "s1 s1 s1", "--method", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    for (m, value) in values(&v) {
        match m.as_str() {
            "natangle" => assert_eq!(value, None),
            _ => assert_eq!(value, Some(1), "{m}"),
        }
    }
}

#[test]
fn empty_gauss_code_is_the_unknot() {
    let out = casson(&["v2", "--gauss", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(values(&json(&out)), vec![("gauss".to_string(), Some(0))]);
}

#[test]
fn exit_codes() {
    assert_eq!(casson(&["v2", "--gauss", "O1+Q"]).status.code(), Some(1));
    assert_eq!(casson(&["v2", "--braid", "s1 x2"]).status.code(), Some(1));
    assert_eq!(casson(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(casson(&["v2", "--gauss", "O1+U2+U1+O2+", "--method", "all"]).status.code(), Some(2));
    assert_eq!(casson(&["v2", "--torus", "4"]).status.code(), Some(2));
    assert_eq!(casson(&["v2", "--braid", "s1 s1"]).status.code(), Some(2));
    assert_eq!(casson(&["--help"]).status.code(), Some(0));
}

#[test]
fn generated_diagrams_never_disagree() {
    for seed in 0..15 {
        let s = seed.to_string();
        let gen = casson(&["gen", "--seed", &s, "--letters", "6", "--moves", "8", "--format", "tsv"]);
        assert_eq!(gen.status.code(), Some(0));
        let code = String::from_utf8(gen.stdout).unwrap();
        let out = casson(&["v2", "--gauss", code.trim(), "--method", "all"]);
        assert_eq!(out.status.code(), Some(0), "{code}");
        let checked = casson(&["moves-check", "--gauss", code.trim(), "--moves", "30", "--seed", &s]);
        assert_eq!(checked.status.code(), Some(0));
        assert_eq!(json(&checked)["preserved"], true);
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_casson"))
            .args(["gen", "--format", "tsv"])
            .env("CASSON_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("5"), casson(&["gen", "--format", "tsv", "--seed", "5"]).stdout);
    assert_ne!(run("5"), run("6"));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn torus_table() {
    let dir = tempfile::tempdir().unwrap();
    let mut table = String::from("name,kind,payload\n");
    for n in 3..=15 {
        table.push_str(&format!("T({n};2),torus,{n}\n"));
    }
    let path = write(dir.path(), "torus.csv", &table);
    let out_path = dir.path().join("out.json");
    let out = casson(&["batch", &path, "-o", out_path.to_str().unwrap(), "--method", "gauss,sym,skein"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 13);
    let mut ok = 0;
    for (r, n) in records.iter().zip(3i64..) {
        assert_eq!(r["name"], format!("T({n};2)"));
        if n % 2 == 1 {
            ok += 1;
            for x in r["results"].as_array().unwrap() {
                assert_eq!(x["value"].as_i64(), Some((n * n - 1) / 8));
            }
            assert_eq!(r["bound"]["sharp"], true);
            assert_eq!(r["agree"], true);
        } else {
            assert!(r["error"].is_string());
        }
    }
    assert_eq!(ok, 7);
}

#[test]
fn batch_rows_fail_alone() {
    let dir = tempfile::tempdir().unwrap();
    let table = "name,kind,payload\n\
                 trefoil,gauss,O1+U2+O3+U1+O2+U3+\n\
                 broken,gauss,O1+U7\n\
                 eight,braid,s1 -s2 s1 -s2\n\
                 odd,sausage,1\n\
                 tangle,tangle,MIN@2:u; A@1:R; X@1:+:o; X@1:+:o; X@1:+:o; A@1:L; MAX@2:u\n";
    let path = write(dir.path(), "mixed.csv", table);
    let out = casson(&["batch", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = v["records"].as_array().unwrap();
    assert_eq!(r.len(), 5);
    assert!(r[0]["error"].is_null() && r[2]["error"].is_null() && r[4]["error"].is_null());
    assert!(r[1]["error"].as_str().unwrap().starts_with("parse error"));
    assert!(r[3]["error"].is_string());
    assert_eq!(values(&r[2]).iter().filter(|x| x.1 == Some(-1)).count(), 4);
    assert_eq!(values(&r[4]).iter().filter(|x| x.1 == Some(1)).count(), 4);

    let empty = write(dir.path(), "empty.csv", "name,kind,payload\n");
    assert_eq!(json(&casson(&["batch", &empty]))["records"], Value::Array(vec![]));
    assert_eq!(casson(&["batch", "/nonexistent/table.csv"]).status.code(), Some(1));
}

#[test]
fn tsv_batch() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "t.csv", "name,kind,payload\nt3,torus,3\n");
    let out = casson(&["batch", &path, "--format", "tsv", "--method", "gauss,sym"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "t3\ttorus\t1\t1\ttrue\ttrue\t");
}

#[test]
fn polyknot_and_integral() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let closed = fixtures::trefoil(&mut rng, 30).unwrap();
    let path = write(dir.path(), "trefoil.json", &closed.to_json());
    let out = casson(&["v2", "--knot", &path, "--method", "gauss,sym,skein,morse"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(values(&json(&out)).iter().all(|x| x.1 == Some(1)));

    let out = casson(&["integrate", "--knot", &path, "--samples", "400000", "--seed", "3", "--report-variance"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 0.3, "{v}");
    assert_eq!(v["terms"].as_array().unwrap().len(), 4);
    assert_eq!(v["seed"], 3);
    let again = casson(&["integrate", "--knot", &path, "--samples", "400000", "--seed", "3", "--report-variance"]);
    assert_eq!(out.stdout, again.stdout);
}
