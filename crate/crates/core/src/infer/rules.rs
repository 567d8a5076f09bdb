//! Level arithmetic of the individual rules, one function per rule.
//!
//! The engine combines these; they are also exposed so the arithmetic can be
//! swept directly without going through expression sharpening.

use crate::pointclass::{checked_level, ClassError, Kind, LevelSchedule, PointClass};

type R<T> = Result<T, ClassError>;

fn lvl(n: u64) -> R<u32> {
    checked_level(n)
}

/// F-COMP: `Δ(p) ∘ Δ(q)` is `Δ(p+q)`.
pub fn compose(p: u32, q: u32) -> R<u32> {
    lvl(u64::from(p) + u64::from(q))
}

/// F-COMP-B: `Δ(p) ∘ Borel` is `Δ(p)`.
pub fn compose_borel(p: u32) -> u32 {
    p
}

/// F-PRE-DELTA: preimage of a `Δ(n)` set under a `Δ(p)` function.
pub fn preimage_delta(p: u32, n: u32) -> R<PointClass> {
    PointClass::delta(u64::from(p) + u64::from(n))
}

/// F-PRE-SIGMA: preimage of a `Σ(n)` (or `Π(n)`) set under a `Δ(p)`
/// function stays in the kind at level `n+p−1`. `Δ` targets are rejected.
pub fn preimage_sigma(p: u32, target: PointClass) -> R<Option<PointClass>> {
    let level = u64::from(target.level()) + u64::from(p) - 1;
    match target.kind() {
        Kind::Delta => Ok(None),
        kind => PointClass::new(kind, level).map(Some),
    }
}

/// F-GRAPH: the graph of a `Δ(p)` function is `Δ(p+1)`.
pub fn graph(p: u32) -> R<PointClass> {
    PointClass::delta(u64::from(p) + 1)
}

/// F-UNGRAPH: graph and domain both in `Δ(n)` give a `Δ(n+1)` function,
/// where `Δ(n)` is the least Δ class above both.
pub fn ungraph(graph: PointClass, domain: PointClass) -> R<u32> {
    let n = graph.delta_cover()?.level().max(domain.delta_cover()?.level());
    lvl(u64::from(n) + 1)
}

/// F-SECT: sections of a `Δ(p)` function on a product are `Δ(p+1)`.
pub fn section(p: u32) -> R<u32> {
    lvl(u64::from(p) + 1)
}

/// F-PAIR and F-ARITH: the larger of the operand levels.
pub fn pair(p: u32, q: u32) -> u32 {
    p.max(q)
}

/// F-PARTIAL: partial inf/sup of a `Δ(p)` function over a domain in class
/// `d` is `Δ(q+1)` with `q = max(p, level of the least Δ above d)`.
pub fn partial(p: u32, domain: PointClass) -> R<u32> {
    let q = p.max(domain.delta_cover()?.level());
    lvl(u64::from(q) + 1)
}

/// DOMAIN: a function restricted to a domain in class `d`.
pub fn with_domain(p: u32, domain: PointClass) -> R<u32> {
    Ok(p.max(domain.delta_cover()?.level()))
}

/// F-INT: integrating a `Δ(p)` function against a `Δ(r)` kernel.
pub fn integral(p: u32, r: u32) -> R<u32> {
    lvl(u64::from(p) + u64::from(r) + 2)
}

/// S-WR: the threshold set `{μ : μ(A) ≥ r}` for `A` in class `c`.
pub fn measure_threshold(c: PointClass) -> R<PointClass> {
    c.sigma_cover()
}

/// Whether S-WR at this input needs PD.
pub fn measure_threshold_gated(c: PointClass) -> R<bool> {
    Ok(measure_threshold(c)?.level() >= 2)
}

/// F-SELECT: least `m` with `c ≤ Π(2m+1)`.
pub fn select_index(c: PointClass) -> u32 {
    let mut m = 0u32;
    loop {
        match PointClass::pi(2 * u64::from(m) + 1) {
            Ok(bound) if c.leq(bound) => return m,
            Ok(_) => m += 1,
            // Π of an odd level ≥ the cap always dominates a capped class.
            Err(_) => return m,
        }
    }
}

/// The uniformizing graph class `Π(2m+1)`.
pub fn select_graph(m: u32) -> R<PointClass> {
    PointClass::pi(2 * u64::from(m) + 1)
}

/// F-CSUP / F-CINF: a family of functions with a bounded schedule.
pub fn countable_level(schedule: &LevelSchedule) -> R<u32> {
    Ok(schedule.bound()?.delta_cover()?.level())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_examples() {
        assert_eq!(compose(2, 3), Ok(5));
        assert_eq!(pair(2, 3), 3);
        assert_eq!(partial(3, PointClass::delta(2).unwrap()), Ok(4));
        assert_eq!(integral(2, 1), Ok(5));
        assert_eq!(select_index(PointClass::COANALYTIC), 0);
        assert_eq!(select_index(PointClass::delta(2).unwrap()), 1);
        assert_eq!(select_index(PointClass::ANALYTIC), 1);
        assert_eq!(select_index(PointClass::pi(3).unwrap()), 1);
        assert_eq!(select_index(PointClass::sigma(3).unwrap()), 2);
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(compose(65_535, 1), Err(ClassError::LevelOverflow(65_536))));
        assert!(integral(65_534, 1).is_err());
    }
}
