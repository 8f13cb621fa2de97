//! Checks shared by the property tests and the acceptance report.

use katz_forge::elementary::{ElementaryModule, LaurentTail};
use katz_forge::engine::{
    op_fourier, op_middle_convolution, op_moebius, op_twist_at, rigidity_index, run_script, ConnectionDescriptor,
    Location, Moebius,
};
use katz_forge::jordan::JordanData;
use katz_forge::scalars::{parse_eigenvalue, parse_scalar, Eigenvalue, Scalar};
use num::One;
use proptest::prelude::*;

use super::{all_descriptors, descriptor, script, CONSTRUCTIONS};

const COEFFS: [&str; 8] = ["1", "-2", "a", "3*b", "zeta(3)*a", "a^2/4", "-b", "zeta(4)"];
const EIGS: [&str; 6] = ["1", "-1", "zeta(4)", "l", "l^-1", "zeta(3)"];

pub fn arb_jordan() -> impl Strategy<Value = JordanData> {
    prop::collection::vec((0..EIGS.len(), 1u32..=3), 1..=3).prop_map(|bs| {
        JordanData::new(bs.into_iter().map(|(i, b)| (parse_eigenvalue(EIGS[i]).unwrap(), b)).collect())
    })
}

pub fn arb_elementary() -> impl Strategy<Value = ElementaryModule> {
    (1u32..=6, prop::collection::vec(prop::option::of(0..COEFFS.len()), 1..=3), 0..COEFFS.len(), arb_jordan())
        .prop_map(|(p, lower, lead, r)| {
            let q = lower.len() as i64;
            let mut terms = vec![(-q, parse_scalar(COEFFS[lead]).unwrap())];
            for (k, c) in lower.into_iter().enumerate().skip(1) {
                if let Some(c) = c {
                    terms.push((-(k as i64), parse_scalar(COEFFS[c]).unwrap()));
                }
            }
            ElementaryModule::new(p, LaurentTail::from_terms(terms), r).unwrap()
        })
}

pub fn duality_involution(e: &ElementaryModule) -> Result<(), String> {
    let back = e.dual().and_then(|d| d.dual()).map_err(|x| x.to_string())?;
    if back != *e {
        return Err(format!("{} -> {}", e, back));
    }
    Ok(())
}

/// Run the duality check on `cases` random modules with a fixed seed.
pub fn duality_suite(cases: u32) -> Result<u32, String> {
    let config = ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() };
    let mut runner = proptest::test_runner::TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner
        .run(&arb_elementary(), |e| duality_involution(&e).map_err(TestCaseError::fail))
        .map_err(|e| e.to_string())?;
    Ok(cases)
}

/// rig before and after each operation, on every golden descriptor where the
/// operation applies. Returns how many times each operation was applied.
pub fn rig_invariance() -> Result<[usize; 4], String> {
    let mut applied = [0usize; 4];
    let t = Eigenvalue::symbol("t");
    for (name, c) in all_descriptors() {
        let before = rigidity_index(&c).map_err(|e| format!("{}: {}", name, e))?;
        let mut results = Vec::new();
        results.push((0, op_twist_at(&c, &[(Location::zero(), t.clone()), (Location::Infinity, t.inv())])));
        results.push((1, op_moebius(&c, &Moebius::Inversion)));
        results.push((1, op_moebius(&c, &Moebius::Affine(Scalar::from_int(2), Scalar::zero()))));
        if name != "x16" {
            results.push((2, op_fourier(&c)));
        }
        let inf = c.at_infinity();
        if let Some((chi, _)) = inf.regular.blocks().first() {
            if inf.is_regular() && inf.regular == JordanData::scalar(chi.clone(), c.rank() as u32) && !chi.is_one() {
                results.push((3, op_middle_convolution(&c, chi)));
            }
        }
        for (op, r) in results {
            let out = r.map_err(|e| format!("{}: {}", name, e))?;
            let after = rigidity_index(&out).map_err(|e| format!("{}: {}", name, e))?;
            if after != before {
                return Err(format!("{}: rig {} -> {} under operation {}", name, before, after, op));
            }
            applied[op] += 1;
        }
    }
    if applied.iter().any(|n| *n == 0) {
        return Err(format!("some operation never applied: {:?}", applied));
    }
    Ok(applied)
}

/// F(F(c)) equals the pullback along z -> -z. The rank-6 exclusion input has
/// no transform and is skipped.
pub fn double_fourier() -> Result<usize, String> {
    let minus = Moebius::Affine(Scalar::from_int(-1), Scalar::zero());
    let mut n = 0;
    for (name, c) in all_descriptors() {
        if name == "x16" {
            continue;
        }
        let ff = op_fourier(&c).and_then(|x| op_fourier(&x)).map_err(|e| format!("{}: {}", name, e))?;
        let eps = op_moebius(&c, &minus).map_err(|e| format!("{}: {}", name, e))?;
        if ff != eps {
            return Err(format!("{}:\n{}\nvs\n{}", name, ff, eps));
        }
        n += 1;
    }
    Ok(n)
}

fn slopes_ok(c: &ConnectionDescriptor) -> Result<(), String> {
    for (loc, ft) in c.points() {
        for e in &ft.irregular {
            if !e.slope().numer().is_one() {
                return Err(format!("slope {} at {}", e.slope(), loc));
            }
        }
    }
    Ok(())
}

/// Every state of every replay, including the exclusion schemes up to their
/// failing step, has slopes with numerator 1.
pub fn replay_slopes() -> Result<usize, String> {
    let mut runs: Vec<(&str, &str)> = CONSTRUCTIONS.iter().map(|(s, sc, _)| (*s, *sc)).collect();
    runs.push(("x16", "x16"));
    runs.push(("x38", "x38"));
    let mut states = 0;
    for (start, sc) in runs {
        let trace = match run_script(&descriptor(start), &script(sc)) {
            Ok(t) => t,
            Err(f) => f.trace,
        };
        for c in &trace {
            slopes_ok(c).map_err(|e| format!("{}: {}", sc, e))?;
        }
        states += trace.len();
    }
    Ok(states)
}
