mod common;

use common::*;
use katz_forge::engine::{render_trace, run_script, EngineError, Location};
use katz_forge::scalars::parse_scalar;

#[test]
fn e1_scheme_rows() {
    let steps = script("e1");
    let trace = run_script(&descriptor("l1"), &steps).unwrap();
    let rows = scheme("e1");
    assert_eq!(trace.len(), rows.len());
    for (i, (got, want)) in trace.iter().zip(&rows).enumerate() {
        assert_eq!(got, want, "row {}\n{}", i, render_trace(&trace, &steps));
    }
}

#[test]
fn constructions_reach_theorem_rows() {
    for (start, s, target) in CONSTRUCTIONS {
        let trace = run_script(&descriptor(start), &script(s)).unwrap_or_else(|f| panic!("{}: {}", s, f));
        assert_eq!(trace.last().unwrap(), &descriptor(target), "{}", s);
    }
}

#[test]
fn e4_ramification_climbs() {
    let trace = run_script(&descriptor("l4"), &script("e4")).unwrap();
    let ps: Vec<u32> = trace
        .iter()
        .filter_map(|c| c.at_infinity().irregular.first().map(|e| e.p))
        .collect();
    assert_eq!(ps, vec![1, 2, 3, 4, 5, 6]);
}

#[test]
fn rank_six_against_eight() {
    let err = run_script(&descriptor("x16"), &script("x16")).unwrap_err();
    assert_eq!(err.step, 0);
    match err.error {
        EngineError::Contradiction(c) => {
            assert_eq!(c.location, Location::zero());
            assert_eq!((c.rank, c.required), (6, 8));
        }
        e => panic!("expected a contradiction, got {}", e),
    }
}

#[test]
fn rank_one_with_unipotent_blocks() {
    let steps = script("x38");
    let err = run_script(&descriptor("x38"), &steps).unwrap_err();
    assert_eq!(err.step, 2);
    let rows = scheme("x38");
    assert_eq!(err.trace, rows, "\n{}", render_trace(&err.trace, &steps));
    match err.error {
        EngineError::Contradiction(c) => {
            assert_eq!((c.rank, c.required), (1, 2));
            let at = |s: &str| Location::Finite(parse_scalar(s).unwrap());
            assert!(c.location == at("2*a") || c.location == at("-2*a"));
            assert_eq!(c.vanishing.to_string(), "1");
        }
        e => panic!("expected a contradiction, got {}", e),
    }
}

#[test]
fn empty_script_is_identity() {
    let c = descriptor("l1");
    assert_eq!(run_script(&c, &[]).unwrap(), vec![c]);
}
