mod common;

use projcalc::derivation::{check, deserialize, serialize};
use projcalc::expr;
use projcalc::infer::{run_program, AxiomMode};

#[test]
fn corpus_is_large_enough() {
    assert!(common::corpus().len() >= 50);
}

#[test]
fn corpus_round_trips_through_the_formatter() {
    for p in common::corpus() {
        let printed = expr::format(&p.program);
        let again = expr::parse(&printed).unwrap_or_else(|e| panic!("{}: {e}\n{printed}", p.name));
        assert_eq!(again, p.program, "{}", p.name);
        assert_eq!(expr::format(&again), printed, "{}", p.name);
    }
}

#[test]
fn corpus_assertions_hold() {
    for p in common::corpus() {
        let report = run_program(&p.program, p.mode).unwrap();
        if let Some(a) = report.assertions.iter().find(|a| !a.passed) {
            panic!("{}: {}: {}", p.name, a.text, a.message);
        }
        if let Some(b) = report.bindings.iter().find(|b| !b.passed()) {
            panic!("{}: let {}: {:?}", p.name, b.name, b.error);
        }
    }
}

#[test]
fn corpus_derivations_check_and_serialize() {
    let mut count = 0;
    for p in common::corpus() {
        let report = run_program(&p.program, p.mode).unwrap();
        for (name, d) in report.derivations() {
            check(d, &p.env).unwrap_or_else(|e| panic!("{}/{name}: {e}", p.name));
            let bytes = serialize(d);
            assert_eq!(&deserialize(&bytes).unwrap(), d);
            assert_eq!(serialize(&deserialize(&bytes).unwrap()), bytes);
            count += 1;
        }
    }
    assert!(count > 200, "only {count} derivations");
}

#[test]
fn pd_programs_need_pd() {
    // Every PD program must fail somewhere once PD is withdrawn.
    for p in common::corpus().into_iter().filter(|p| p.mode == AxiomMode::ZfcPd) {
        let report = run_program(&p.program, AxiomMode::Zfc).unwrap();
        assert!(!report.all_passed(), "{} passes without PD", p.name);
    }
}
