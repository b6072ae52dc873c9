use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn surflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surflab")).args(args).output().expect("binary runs")
}

fn run_on(cmd: &str, config: &str, extra: &[&str]) -> Output {
    let path = corpus(config);
    let mut args = vec![cmd, "--config", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    surflab(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enneper_mesh_contains_the_unit_point() {
    let o = run_on("build", "enneper.toml", &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let verts: Vec<[f64; 3]> = text
        .lines()
        .filter_map(|l| l.strip_prefix("v "))
        .map(|l| {
            let v: Vec<f64> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect();
    assert_eq!(verts.len(), text.lines().filter(|l| l.starts_with("#va ")).count());
    let want = [-1.0, 4.0 / 3.0, 0.0];
    let hit = verts.iter().any(|v| v.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-9));
    assert!(hit, "no vertex at f(1)");
    assert!(text.lines().any(|l| l.starts_with("l ")), "missing singular polyline");
    let faces = text.lines().filter(|l| l.starts_with("f ")).count();
    assert_eq!(faces, 64 + 2 * 62 * 64);
}

#[test]
fn resolution_below_two_is_a_usage_error() {
    let o = run_on("build", "enneper.toml", &["--resolution", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn formula_weight_across_the_singular_set_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cmc.toml");
    std::fs::write(
        &path,
        "kind = \"cmc\"\ng = \"z\"\nH = 2.0\nresolution = 16\n[domain]\nshape = \"disk\"\ncenter = [0.0, 0.0]\nradius = 1.5\n",
    )
    .unwrap();
    let o = surflab(&["build", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).to_lowercase().contains("omega"));
}

#[test]
fn enneper_special_points() {
    let o = run_on("singular", "enneper.toml", &["--seed", "1.1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let curve = &v[0];
    assert_eq!(curve["closed"], Value::Bool(true));
    let specials = curve["special_points"].as_array().unwrap();
    assert_eq!(specials.len(), 8);
    let count = |ty: &str| specials.iter().filter(|p| p["report"]["type"] == ty).count();
    assert_eq!(count("Swallowtail"), 4);
    assert_eq!(count("CuspidalCrossCap"), 4);
    for s in curve["samples"].as_array().unwrap() {
        assert!(s["t"].is_number() && s["point"].is_array());
    }
}

#[test]
fn butterfly_point_is_reported() {
    let o = run_on("singular", "butterfly.toml", &["--seed", "1.05,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let specials = v[0]["special_points"].as_array().unwrap();
    assert_eq!(specials.len(), 1);
    let r = &specials[0]["report"];
    assert_eq!(r["type"], "CuspidalButterfly");
    assert!((r["point"][0].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn singular_without_seeds_is_a_usage_error() {
    let o = run_on("singular", "enneper.toml", &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn seed_away_from_the_singular_set_exits_one() {
    let o = run_on("singular", "circle_2z.toml", &["--seed", "0,0"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v[0]["error"].is_string());
}

#[test]
fn invariants_table() {
    let o = run_on("invariants", "enneper.toml", &["--seed", "1.1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(
        header,
        [
            "t",
            "re(z)",
            "im(z)",
            "kappa_s_closed",
            "kappa_s_general",
            "kappa_nu",
            "kappa_locus",
            "type",
            "epsilon_gamma"
        ]
    );
    let mut edges = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        if &rec[7] != "CuspidalEdge" {
            continue;
        }
        edges += 1;
        let closed: f64 = rec[3].parse().unwrap();
        let general: f64 = rec[4].parse().unwrap();
        let nu: f64 = rec[5].parse().unwrap();
        assert!(closed < 0.0 && ((closed - general) / closed).abs() < 1e-7);
        assert!(nu.abs() < 1e-8);
        assert_eq!(&rec[8], "-1");
    }
    assert!(edges > 100);
}

#[test]
fn invariants_needs_exactly_one_seed() {
    let o = run_on("invariants", "enneper.toml", &["--seed", "1.1,0", "--seed", "-1.1,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_config_exits_two() {
    let o = surflab(&["verify", "--config", "/nonexistent/surface.toml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for (cmd, extra) in
        [("build", vec![]), ("singular", vec!["--seed", "1.1,0"]), ("invariants", vec!["--seed", "1.1,0"])]
    {
        let a = run_on(cmd, "enneper.toml", &extra);
        let b = run_on(cmd, "enneper.toml", &extra);
        assert_eq!(a.status.code(), Some(0));
        assert!(a.stdout == b.stdout, "{cmd} output differs between runs");
    }
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("curve.json");
    let a = run_on("singular", "butterfly.toml", &["--seed", "1.05,0"]);
    let b = run_on("singular", "butterfly.toml", &["--seed", "1.05,0", "--out", file.to_str().unwrap()]);
    assert_eq!(b.status.code(), Some(0));
    assert!(b.stdout.is_empty());
    assert_eq!(std::fs::read(&file).unwrap(), a.stdout);
}

#[test]
fn verify_passes_on_the_corpus() {
    for name in ["enneper.toml", "butterfly.toml", "s1_minus.toml", "circle_2z.toml", "enneper_cmc.json"] {
        let o = run_on("verify", name, &[]);
        let text = stdout(&o);
        assert_eq!(o.status.code(), Some(0), "{name}:\n{text}");
        assert!(text.lines().filter(|l| l.starts_with("PASS ")).count() >= 9, "{name}:\n{text}");
    }
}
