#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use katz_forge::engine::{parse_script, ConnectionDescriptor, Step};
use serde_json::Value;

pub fn golden_dir() -> PathBuf {
    match std::env::var_os("KATZ_FORGE_GOLDEN_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../golden"),
    }
}

pub fn read(rel: &str) -> String {
    fs::read_to_string(golden_dir().join(rel)).unwrap_or_else(|e| panic!("{}: {}", rel, e))
}

pub fn descriptor(name: &str) -> ConnectionDescriptor {
    ConnectionDescriptor::parse_json(&read(&format!("descriptors/{}.json", name))).unwrap()
}

pub fn script(name: &str) -> Vec<Step> {
    parse_script(&read(&format!("scripts/{}.script", name))).unwrap()
}

pub fn scheme(name: &str) -> Vec<ConnectionDescriptor> {
    let v: Value = serde_json::from_str(&read(&format!("schemes/{}.json", name))).unwrap();
    v.as_array().unwrap().iter().map(|x| ConnectionDescriptor::from_json(x).unwrap()).collect()
}

pub const THEOREM_ROWS: [&str; 10] =
    ["row01", "row02", "row03", "row04", "row05", "row06", "row07", "row08", "row09", "row10"];

/// (start, script, target) for the four constructions and the excluded type.
pub const CONSTRUCTIONS: [(&str, &str, &str); 5] = [
    ("l1", "e1", "row01"),
    ("l2", "e2", "row04"),
    ("l3", "e3", "row05"),
    ("l4", "e4", "row06"),
    ("l5", "e5", "excluded"),
];

/// Every descriptor under version control.
pub fn all_descriptors() -> Vec<(String, ConnectionDescriptor)> {
    let mut names: Vec<String> = fs::read_dir(golden_dir().join("descriptors"))
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().trim_end_matches(".json").to_string())
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), descriptor(&n))).collect()
}

pub mod oracle;
pub mod props;
