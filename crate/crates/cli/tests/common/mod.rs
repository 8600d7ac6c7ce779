#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

pub fn data(rel: &str) -> PathBuf {
    root().join("data").join(rel)
}

/// Runs the binary with no config from the environment.
pub fn cibscore<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_cibscore"))
        .args(args)
        .env_remove("CIBSCORE_CONFIG")
        .env_remove("RUST_LOG")
        .output()
        .expect("spawn cibscore")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

pub fn raw_ingest_args(out: &Path) -> Vec<String> {
    let raw = data("synthetic/raw");
    let p = |name: &str| raw.join(name).display().to_string();
    vec![
        "ingest".into(),
        "--video-id".into(),
        "synth01".into(),
        "--fps".into(),
        "25".into(),
        "--face".into(),
        p("face.csv"),
        "--calibration".into(),
        p("calibration.csv"),
        "--emotions".into(),
        p("emotions.csv"),
        "--detections".into(),
        p("detections.csv"),
        "--frames".into(),
        p("frames"),
        "--out".into(),
        out.display().to_string(),
    ]
}

/// Scores the shipped bundle and evaluates it against the shipped ratings,
/// optionally dropping items, all inside `out`.
pub fn score_and_evaluate(out: &Path, drop: Option<&str>) -> Result<(), String> {
    let check = |o: Output| {
        if o.status.success() {
            Ok(())
        } else {
            Err(format!("exit {}: {}", code(&o), stderr(&o)))
        }
    };
    let bundle = data("synthetic/bundle");
    check(cibscore([
        "score".as_ref(),
        bundle.as_os_str(),
        "--out-dir".as_ref(),
        out.as_os_str(),
        "--seed".as_ref(),
        "7".as_ref(),
    ]))?;
    let mut args: Vec<std::ffi::OsString> = vec![
        "evaluate".into(),
        data("synthetic/ratings.csv").into(),
        out.join("scores.csv").into(),
        "--out-dir".into(),
        out.into(),
    ];
    if let Some(d) = drop {
        args.push("--drop-items".into());
        args.push(d.into());
    }
    check(cibscore(args))
}

/// Every file under `dir`, relative, sorted.
pub fn listing(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push(p.strip_prefix(dir).unwrap().to_path_buf());
            }
        }
    }
    out.sort();
    out
}

/// `None` when both trees hold the same files with the same bytes.
pub fn tree_difference(a: &Path, b: &Path) -> Option<String> {
    let (la, lb) = (listing(a), listing(b));
    if la != lb {
        return Some(format!("file lists differ: {la:?} vs {lb:?}"));
    }
    la.into_iter()
        .find(|rel| fs::read(a.join(rel)).unwrap() != fs::read(b.join(rel)).unwrap())
        .map(|rel| format!("{} differs", rel.display()))
}

pub const GOLDEN_FILES: [(&str, Option<&str>, &str); 4] = [
    ("agreement_table.txt", None, "agreement_table.txt"),
    ("agreement_items.csv", None, "agreement_items.csv"),
    ("agreement_table.txt", Some("gaze,vocalization"), "agreement_table_dropped.txt"),
    ("agreement_items.csv", Some("gaze,vocalization"), "agreement_items_dropped.csv"),
];

/// Compares evaluate outputs with `data/golden`; returns mismatches.
/// With `bless` the golden files are rewritten first.
pub fn golden_mismatches(bless: bool) -> Vec<String> {
    let golden = data("golden");
    let mut bad = Vec::new();
    for drop in [None, Some("gaze,vocalization")] {
        let tmp = tempfile::tempdir().unwrap();
        if let Err(e) = score_and_evaluate(tmp.path(), drop) {
            bad.push(e);
            continue;
        }
        for (produced, _, name) in GOLDEN_FILES.iter().filter(|g| g.1 == drop) {
            let fresh = fs::read_to_string(tmp.path().join(produced)).unwrap();
            if bless {
                fs::create_dir_all(&golden).unwrap();
                fs::write(golden.join(name), &fresh).unwrap();
            }
            match fs::read_to_string(golden.join(name)) {
                Ok(expected) if expected == fresh => {}
                Ok(_) => bad.push(format!("{name} differs from golden")),
                Err(e) => bad.push(format!("{name}: {e}")),
            }
        }
    }
    bad
}
