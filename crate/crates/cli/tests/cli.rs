//! End-to-end CLI flows through the compiled binary.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_peisert"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("peisert-cli-tests").join(name);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn construct_to_file(args: &[&str], path: &PathBuf) {
    let out = bin()
        .args(["construct"])
        .args(args)
        .args(["--format", "machine"])
        .output()
        .unwrap();
    assert!(out.status.success(), "construct {args:?}: {out:?}");
    let line = out.stdout.split(|&b| b == b'\n').next().unwrap();
    let v: serde_json::Value = serde_json::from_slice(line).unwrap();
    std::fs::write(path, serde_json::to_vec(&v["descriptor"]).unwrap()).unwrap();
}

#[test]
fn construct_xq_and_analyze_everything() {
    let dir = tmpdir("xq9");
    let desc = dir.join("x9.json");
    construct_to_file(&["xq", "--q", "9"], &desc);
    let out = bin()
        .args([
            "analyze",
            "--descriptor",
            desc.to_str().unwrap(),
            "--analyses",
            "srg,cliques,ekr,maximal,eigenfunctions,baer",
            "--format",
            "machine",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["srg"]["v"], 81);
    assert_eq!(v["srg"]["k"], 32);
    assert_eq!(v["cliques"]["summary"]["n_canonical"], 4);
    assert_eq!(v["cliques"]["summary"]["n_noncanonical"], 4);
    assert_eq!(v["ekr"]["strict_ekr"], false);
    assert_eq!(v["maximal"]["cliques"].as_array().unwrap().len(), 8);
    let eigs = v["eigenfunctions"].as_array().unwrap();
    assert_eq!(eigs[0]["support_size"], 12);
    assert_eq!(eigs[0]["tight"], true);
    assert_eq!(eigs[1]["support_size"], 8);
    assert_eq!(eigs[1]["tight"], true);
    assert_eq!(v["baer"]["all_subarrays"], true);
    assert_eq!(v["baer"]["intersection_size"], 3);
}

#[test]
fn analyze_flags_imprimitive_m1() {
    // an m = 1 descriptor: single direction
    let dir = tmpdir("m1");
    let desc = dir.join("m1.json");
    let out = bin()
        .args(["construct", "xq", "--q", "9", "--format", "machine"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let mut v: serde_json::Value =
        serde_json::from_slice(out.stdout.split(|&b| b == b'\n').next().unwrap()).unwrap();
    let d = v["descriptor"].as_object_mut().unwrap();
    let first = d["directions"][0].clone();
    d.insert("directions".into(), serde_json::json!([first]));
    std::fs::write(&desc, serde_json::to_vec(&v["descriptor"]).unwrap()).unwrap();
    let out = bin()
        .args([
            "analyze",
            "--descriptor",
            desc.to_str().unwrap(),
            "--analyses",
            "srg",
            "--format",
            "machine",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["srg"]["primitive"], false);
    assert_eq!(v["srg"]["mu"], 0);
}

#[test]
fn q8_extremal_has_seven_noncanonical() {
    let dir = tmpdir("q8");
    let desc = dir.join("e8.json");
    construct_to_file(&["extremal", "--q", "8"], &desc);
    let out = bin()
        .args([
            "analyze",
            "--descriptor",
            desc.to_str().unwrap(),
            "--analyses",
            "ekr,cliques",
            "--format",
            "machine",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ekr"]["strict_ekr"], false);
    assert_eq!(v["cliques"]["summary"]["n_canonical"], 5);
    assert_eq!(v["cliques"]["summary"]["n_noncanonical"], 7);
}

#[test]
fn iso_example_q32_graphs_differ() {
    let dir = tmpdir("q32");
    let out = bin()
        .args(["construct", "example-q32", "--format", "machine"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let lines: Vec<&[u8]> = out
        .stdout
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .collect();
    assert_eq!(lines.len(), 2);
    let (a, b) = (dir.join("x1.json"), dir.join("x2.json"));
    for (line, path) in lines.iter().zip([&a, &b]) {
        let v: serde_json::Value = serde_json::from_slice(line).unwrap();
        std::fs::write(path, serde_json::to_vec(&v["descriptor"]).unwrap()).unwrap();
    }
    let out = bin()
        .args([
            "iso",
            "--a",
            a.to_str().unwrap(),
            "--b",
            b.to_str().unwrap(),
            "--format",
            "machine",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["isomorphic"], false);
    // a graph is isomorphic to itself, with an explicit verified map
    let out = bin()
        .args([
            "iso",
            "--a",
            a.to_str().unwrap(),
            "--b",
            a.to_str().unwrap(),
            "--explicit-map",
            "--format",
            "machine",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["map"].as_array().unwrap().len(), 1024);
}

#[test]
fn iso_peisert_vs_polar_form() {
    let dir = tmpdir("polar");
    let (a, b) = (dir.join("x4.json"), dir.join("vo42.json"));
    construct_to_file(&["xq", "--q", "4"], &a);
    construct_to_file(&["vo-plus", "--r", "2", "--e", "2"], &b);
    let out = bin()
        .args([
            "iso",
            "--a",
            a.to_str().unwrap(),
            "--b",
            b.to_str().unwrap(),
            "--explicit-map",
            "--format",
            "machine",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["isomorphic"], true);
    assert_eq!(v["map"].as_array().unwrap().len(), 16);
}

#[test]
fn y_qn_shift_is_isomorphic_to_unshifted() {
    let dir = tmpdir("yqn");
    let (a, b) = (dir.join("u.json"), dir.join("u_shift.json"));
    construct_to_file(&["y-qn", "--q", "9"], &a);
    // shift by a generator power landing in F_q: (q^2-1)/(q-1) = 10
    construct_to_file(&["y-qn", "--q", "9", "--shift", "10"], &b);
    let out = bin()
        .args(["iso", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap(), "--format", "machine"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{out:?}");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["isomorphic"], true);
}

#[test]
fn edge_list_export() {
    let dir = tmpdir("edges");
    let desc = dir.join("x9.json");
    let edges = dir.join("x9.edges");
    construct_to_file(&["xq", "--q", "9"], &desc);
    let out = bin()
        .args([
            "analyze",
            "--descriptor",
            desc.to_str().unwrap(),
            "--analyses",
            "srg",
            "--edges",
            edges.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&edges).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // 81 vertices of degree 32
    assert_eq!(lines.len(), 81 * 32 / 2);
    for l in &lines {
        let (u, v) = l.split_once(' ').unwrap();
        let (u, v): (u32, u32) = (u.parse().unwrap(), v.parse().unwrap());
        assert!(u < v && v < 81);
    }
}

#[test]
fn census_deep_gate_and_output_path() {
    let out = bin().args(["census", "--q", "16"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2), "q = 16 must require --deep");
    let dir = tmpdir("out");
    let path = dir.join("census9.txt");
    let out = bin()
        .args(["census", "--q", "9", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("q = 9\n"));
}

#[test]
fn extremal_values_output() {
    let out = bin()
        .args(["extremal-values", "--q", "9", "--format", "machine"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["e_q"], 4);
    assert_eq!(v["cap_e_q"], 5);
    let out = bin().args(["extremal-values", "--q", "5"]).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), "e_q = 4\nE_q = 3\n");
}

#[test]
fn bad_descriptor_cites_offending_key() {
    let dir = tmpdir("bad");
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"kind":"peisert","tower":{"p":3,"n":2,"fq_modulus":[1,0,1],"fq2_modulus":[2,1,1],"generator_index":3},"beta_index":0,"directions":["g0:0"]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["analyze", "--descriptor", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.lines().count() == 1, "single-line error expected: {err}");
}
