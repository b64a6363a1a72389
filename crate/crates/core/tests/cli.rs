use std::path::Path;
use std::process::{Command, Output};

fn nilscroll(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilscroll")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gallery_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (report, xml) = (dir.path().join("r.json"), dir.path().join("r.xml"));
    let o = nilscroll(&["verify", "gallery", "--n", "21", "--report", path(&report), "--junit", path(&xml)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 7);
    for r in reports {
        assert!(r["pass"].as_object().unwrap().values().all(|p| p.as_bool() == Some(true)));
        assert!(r["maskFraction"].as_f64().unwrap() < 1.0);
    }
    let xml = std::fs::read_to_string(&xml).unwrap();
    assert!(xml.contains("failures=\"0\""));
}

#[test]
fn perturbed_fixture_fails() {
    let o = nilscroll(&["verify", "perturbed-circle", "--n", "11"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"]["fd_mean_curvature"], false);
}

#[test]
fn validation_errors_exit_2() {
    assert_eq!(code(&nilscroll(&["verify"])), 2);
    assert_eq!(code(&nilscroll(&["verify", "--request", "/nonexistent/request.json"])), 2);
    assert_eq!(code(&nilscroll(&["verify", "sphere"])), 2);
    assert_eq!(code(&nilscroll(&["construct", "--branch", "beta-half", "--ruling", "constant"])), 2);
    assert_eq!(code(&nilscroll(&["construct", "--branch", "curvature", "--k1", "csv:/nonexistent/k1.csv"])), 2);
    assert_eq!(code(&nilscroll(&["construct", "--branch", "beta-half", "--tol", "bogus=1"])), 2);
    assert_eq!(code(&nilscroll(&["construct", "--grid", "1:0:3,0:1:3", "--branch", "tangent"])), 2);
    assert_eq!(code(&nilscroll(&["frobnicate"])), 2);
}

#[test]
fn invalid_chart_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.obj");
    let o = nilscroll(&["construct", "--branch", "ar-data", "--q", "const:0", "--out", path(&out)]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn construct_csv_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = nilscroll(&[
            "construct",
            "--branch",
            "beta-half",
            "--ruling",
            "circle",
            "--format",
            "csv",
            "--grid",
            "-1:1:9,-1:1:9",
            "--out",
            path(&out),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().next(), Some("s,t,x1,x2,x3"));
    assert_eq!(text.lines().count(), 82);
    let report = std::fs::read_to_string(dir.path().join("a.report.json")).unwrap();
    assert!(report.contains("\"fd_mean_curvature\": true"));
}

#[test]
fn parabola_b0_mesh_is_planar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = nilscroll(&["construct", "--branch", "beta-half", "--ruling", "parabola", "--b", "0", "--format", "csv", "--out", path(&out)]);
    assert_eq!(code(&o), 0);
    let pts: Vec<nilscroll::Nil3Point> = std::fs::read_to_string(out)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            nilscroll::Nil3Point::new(v[2], v[3], v[4])
        })
        .collect();
    assert!(nilscroll::verify::verify_planarity(&pts).unwrap() <= 1e-8);
}

#[test]
fn request_file_and_curvature_csv() {
    let dir = tempfile::tempdir().unwrap();
    let k1 = dir.path().join("k1.csv");
    let mut text = String::from("s,k1\n");
    for i in 0..=80 {
        let s = -2.0 + 0.05 * i as f64;
        text += &format!("{s},{}\n", s.sin());
    }
    std::fs::write(&k1, text).unwrap();
    let req = dir.path().join("req.json");
    let body = format!(r#"{{"branch":"curvature","params":{{"k1":"csv:{}"}},"span":[-2,2],"step":0.001}}"#, path(&k1));
    std::fs::write(&req, body).unwrap();
    let o = nilscroll(&["verify", "--request", path(&req), "--n", "11"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["name"], "req");
    assert_eq!(v["pass"]["gram_drift"], true);
}

#[test]
fn examples_writes_five_figures() {
    let dir = tempfile::tempdir().unwrap();
    let o = nilscroll(&["examples", "all", "--out-dir", path(dir.path()), "--n", "5"]);
    assert_eq!(code(&o), 0);
    let mut names: Vec<String> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.len(), 5, "{names:?}");
    assert!(names.iter().all(|n| n.ends_with(".obj")));
    let umbrella = std::fs::read_to_string(dir.path().join("horizontal-umbrella.obj")).unwrap();
    assert_eq!(umbrella.lines().filter(|l| l.starts_with("f ")).count(), 16);
    let o = nilscroll(&["examples", "vertical-plane", "--out-dir", path(dir.path()), "--format", "csv"]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&nilscroll(&["examples", "klein-bottle", "--out-dir", path(dir.path())])), 2);
}
