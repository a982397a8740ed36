use std::path::Path;
use std::process::{Command, Output};

use linksig_core::strata::PresentationMatrix;
use linksig_core::{catalog, ColoredLinkData, SlopeData};

fn linksig(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linksig")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn export(key: &str, dir: &Path) {
    let o = linksig(&["catalog", "show", key, "--export", dir.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn slope_of_l1_at_i_i() {
    let dir = tempfile::tempdir().unwrap();
    export("l(1)", dir.path());
    let o = linksig(&["slope", &path(dir.path(), "l1.slope.json"), "--omega", "1/4,1/4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 4.0).abs() < 1e-9);
    let o = linksig(&["slope", &path(dir.path(), "l1.slope.json"), "--omega", "0,1/4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hosokawa_of_t24() {
    let dir = tempfile::tempdir().unwrap();
    export("t24", dir.path());
    let link = path(dir.path(), "t24.link.json");
    let o = linksig(&["hosokawa", &link]);
    assert_eq!(o.status.code(), Some(0));
    let want = linksig_core::LaurentPoly::parse("(t1 - 1)(t2 - 1)(t1*t2 + 1)", 2).unwrap().unit_normalize();
    assert_eq!(stdout(&o).trim(), want.poly().to_string());

    let o = linksig(&["hosokawa", &link, "--delta", "t1*t2 + 1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("overrides"));
    assert_eq!(stdout(&o).trim(), want.poly().to_string());
    let o = linksig(&["hosokawa", &link, "--normalized"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_on_l1_is_obstructed() {
    let dir = tempfile::tempdir().unwrap();
    export("l(1)", dir.path());
    let o = linksig(&[
        "report",
        &path(dir.path(), "l1.link.json"),
        "--slope",
        &path(dir.path(), "l1.slope.json"),
        "--prime",
        "2",
        "--depth",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("verdict: OBSTRUCTED"), "{text}");
    let first = text.lines().find(|l| l.starts_with("witness")).unwrap();
    assert!(first.starts_with("witness (0, 1/4, 1/4) sigma=1"), "{first}");
}

#[test]
fn report_on_hopf2_is_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    export("hopf2", dir.path());
    let o = linksig(&["report", &path(dir.path(), "hopf2.link.json"), "--prime", "3", "--depth", "1"]);
    assert!(stdout(&o).contains("verdict: INCONCLUSIVE"));
}

#[test]
fn export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for key in catalog::list() {
        export(key, dir.path());
        let e = catalog::get(key).unwrap();
        let stem = e.file_stem();
        let read = |suffix: &str| std::fs::read_to_string(dir.path().join(format!("{stem}.{suffix}.json"))).unwrap();
        if let Some(l) = &e.link {
            assert_eq!(&ColoredLinkData::from_json(&read("link")).unwrap(), l);
        }
        if let Some(s) = &e.slope {
            assert_eq!(&SlopeData::from_json(&read("slope")).unwrap(), s);
        }
        if let Some(p) = &e.presentation {
            assert_eq!(&PresentationMatrix::from_json(&read("presentation")).unwrap(), p);
        }
    }
}

#[test]
fn mirror_flips_the_map() {
    let dir = tempfile::tempdir().unwrap();
    export("t24", dir.path());
    let link = path(dir.path(), "t24.link.json");
    let mirror = path(dir.path(), "m.json");
    assert!(linksig(&["mirror", &link, "--out", &mirror]).status.success());
    let a = stdout(&linksig(&["sigmap", &link, "--grid", "8"]));
    let b = stdout(&linksig(&["sigmap", &mirror, "--grid", "8"]));
    for (x, y) in a.lines().skip(1).zip(b.lines().skip(1)) {
        let (x, y): (Vec<&str>, Vec<&str>) = (x.split(',').collect(), y.split(',').collect());
        assert_eq!(x[2].parse::<i64>().unwrap(), -y[2].parse::<i64>().unwrap());
        assert_eq!(x[3], y[3]);
    }
}

#[test]
fn ppm_and_json_outputs() {
    let dir = tempfile::tempdir().unwrap();
    export("t24", dir.path());
    let link = path(dir.path(), "t24.link.json");
    let o = linksig(&["sigmap", &link, "--grid", "5", "--format", "ppm"]);
    assert!(stdout(&o).starts_with("P3\n4 4\n255\n"));
    let o = linksig(&["sigmap", &link, "--grid", "5", "--format", "json"]);
    let v = linksig_core::sampler::records_from_json(&stdout(&o)).unwrap();
    assert_eq!(v.len(), 16);
    export("hopf1", dir.path());
    let o = linksig(&["sigmap", &path(dir.path(), "hopf1.link.json"), "--grid", "5", "--format", "ppm"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ideals_point_and_classification() {
    let dir = tempfile::tempdir().unwrap();
    export("aug4", dir.path());
    let p = path(dir.path(), "aug4.presentation.json");
    let o = linksig(&["ideals", &p, "--omega", "0,0,0,1/3"]);
    let text = stdout(&o);
    assert!(text.contains("stratum index: 1"), "{text}");
    assert!(text.contains("predicted nullity: suppressed"));
    assert!(text.contains("flag: more-than-two-ones"));
    let o = linksig(&["ideals", &p, "--classify", "--grid", "2"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 16);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(4) == Some("1")));
    let o = linksig(&["ideals", &p, "--omega", "0,0,0,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name":"x","mu":2,"components":[{"id":"a","color":1}]}"#).unwrap();
    let o = linksig(&["sigmap", bad.to_str().unwrap(), "--grid", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert_eq!(linksig(&["catalog", "show", "trefoil"]).status.code(), Some(2));
    assert_eq!(linksig(&["sigmap", "missing.json", "--grid", "4"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_linksig"))
        .env("LINKSIG_THREADS", "0")
        .args(["catalog", "list"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
