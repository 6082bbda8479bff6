#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use goursat::Report;
use goursat_core::expr::{parse, Chart, Expr};

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn problem(name: &str) -> String {
    root().join("problems").join(name).display().to_string()
}

pub fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

/// Run the binary; stdout and exit status.
pub fn goursat(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_goursat")).args(args).output().expect("binary runs");
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap_or(-1))
}

/// Run with `--json` and parse the report.
pub fn report(args: &[&str]) -> (Report, String) {
    let mut a = args.to_vec();
    a.push("--json");
    let (text, code) = goursat(&a);
    let r: Report = serde_json::from_str(&text).unwrap_or_else(|e| panic!("bad report ({e}):\n{text}"));
    assert_eq!(r.exit_code, code);
    (r, text)
}

pub fn chart(r: &Report) -> Chart {
    let s = r.system.as_ref().expect("system echo");
    Chart::with_params(&s.coordinates, &s.parameters).unwrap()
}

pub fn expr(r: &Report, text: &str) -> Expr {
    parse(text, &chart(r)).unwrap_or_else(|e| panic!("{text}: {e}"))
}

/// Symbolic equality over the report's chart.
pub fn same(r: &Report, a: &str, b: &str) -> bool {
    expr(r, a).sub(&expr(r, b)).is_zero()
}

/// Coordinate names of a bundle made of unit generators; `None` otherwise.
pub fn unit_coords(b: &goursat::report::Bundle) -> Option<Vec<String>> {
    let mut out = Vec::new();
    for g in &b.generators {
        let mut it = g.iter();
        match (it.next(), it.next()) {
            (Some((c, e)), None) if e == "1" => out.push(c.clone()),
            _ => return None,
        }
    }
    out.sort();
    Some(out)
}

pub fn names(v: &[&str]) -> Option<Vec<String>> {
    let mut v: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    v.sort();
    Some(v)
}
