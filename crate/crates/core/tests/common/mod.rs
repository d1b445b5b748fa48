//! Golden table and binary runner shared by the cli and acceptance targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub const BIN: &str = env!("CARGO_BIN_EXE_nearness");

pub fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

pub fn fixture(name: &str) -> String {
    dir("fixtures").join(name).display().to_string()
}

/// (golden file, expected exit, args with `@name` standing for a fixture)
pub const GOLDEN: &[(&str, i32, &[&str])] = &[
    ("i1_check.txt", 0, &["check", "@i1.json"]),
    ("i1_check.json", 0, &["--json", "check", "@i1.json"]),
    ("i1_spectrum.txt", 0, &["spectrum", "@i1.json"]),
    ("i1_near_a.txt", 0, &["near", "@i1.json", "--set", "a"]),
    ("i1_near_ab.txt", 0, &["near", "@i1.json", "--set", "a,b"]),
    ("i1_below.txt", 0, &["below", "@i1.json"]),
    ("i1_regularize.txt", 0, &["regularize", "@i1.json"]),
    ("i1_props.txt", 0, &["props", "@i1.json"]),
    ("i2_check.txt", 0, &["check", "@i2.json"]),
    ("i2_near_empty.txt", 0, &["near", "@i2.json", "--set="]),
    ("i2_restrict_1.txt", 0, &["restrict", "@i2.json", "--set", "1"]),
    ("i2_restrict_0.txt", 0, &["restrict", "@i2.json", "--set", "0"]),
    ("i2_regularize.txt", 0, &["regularize", "@i2.json"]),
    ("i2_regularize_original.txt", 0, &["regularize", "@i2.json", "--priming", "original"]),
    ("i2_props.txt", 0, &["props", "@i2.json"]),
    ("i3_below.txt", 0, &["below", "@i3.json"]),
    ("i3_below.json", 0, &["--json", "below", "@i3.json"]),
    ("i3_near.txt", 0, &["near", "@i3.json", "--set", "a,1"]),
    ("i3_star.txt", 0, &["star", "@i3.json", "--cover", "0", "--element", "a"]),
    ("i3_restrict_star.txt", 0, &["restrict", "@i3.json", "--star", "a"]),
    ("i3_spectrum.txt", 0, &["spectrum", "@i3.json"]),
    ("i5_from_space.txt", 0, &["from-space", "@i5.json"]),
    ("i5_roundtrip.txt", 0, &["roundtrip", "@i5.json", "--seed", "7"]),
    ("i5_props.txt", 0, &["props", "@i5.json", "--seed", "3"]),
    ("i5_props.json", 0, &["--json", "props", "@i5.json", "--seed", "3"]),
    ("boolean4_frame_check.txt", 0, &["frame-check", "@boolean4.json"]),
    ("boolean4_props.txt", 0, &["props", "@boolean4.json"]),
    ("boolean4_check.txt", 0, &["check", "@boolean4.json"]),
    ("empty_theta_check.txt", 0, &["check", "@empty_theta.json"]),
    ("empty_theta_props.txt", 1, &["props", "@empty_theta.json"]),
];

pub fn args(spec: &[&str]) -> Vec<String> {
    spec.iter()
        .map(|a| match a.strip_prefix('@') {
            Some(f) => fixture(f),
            None => a.to_string(),
        })
        .collect()
}

// fixture paths are absolute; golden files hold them relative
pub fn normalise(s: &str) -> String {
    s.replace(&format!("{}/", dir("fixtures").display()), "")
}

pub fn run_bin(a: &[String]) -> (i32, String, String) {
    let o = Command::new(BIN).args(a).env_remove("NEARNESS_MAX_ELEMS").output().unwrap();
    (
        o.status.code().unwrap(),
        normalise(&String::from_utf8(o.stdout).unwrap()),
        String::from_utf8(o.stderr).unwrap(),
    )
}

