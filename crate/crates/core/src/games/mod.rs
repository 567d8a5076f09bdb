//! Finite alternating games: players I and II pick moves in `0..k` for
//! `2N+2` turns, I first; I wins iff the play lands in the target set.
//!
//! Plays are numbered in base `k` with the first move most significant, so
//! bit `i` of a bitset target is the play whose base-`k` digits spell `i`.

mod predicate;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use predicate::{Predicate, PredicateError};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Player {
    I,
    II,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::I => Player::II,
            Player::II => Player::I,
        }
    }

    /// Who moves after a history of this length.
    pub fn to_move(depth: usize) -> Player {
        if depth.is_multiple_of(2) {
            Player::I
        } else {
            Player::II
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::I => "I",
            Player::II => "II",
        })
    }
}

/// A caller-supplied membership test.
pub type TargetFn = Arc<dyn Fn(&[u32]) -> bool + Send + Sync>;

#[derive(Clone)]
pub enum Target {
    /// Membership bit per play index.
    Bits(Vec<bool>),
    Expr(Predicate),
    Callback(TargetFn),
}

impl fmt::Debug for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Bits(b) => write!(f, "Bits({})", bits_to_hex(b)),
            Target::Expr(p) => write!(f, "Expr({:?})", p.source()),
            Target::Callback(_) => f.write_str("Callback"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("ResourceLimit: game tree has {nodes} nodes, budget is {budget}")]
    ResourceLimit { nodes: u64, budget: u64 },
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("bad target: {0}")]
    BadTarget(String),
    #[error(transparent)]
    Predicate(#[from] PredicateError),
    #[error("game file: {0}")]
    Format(String),
}

#[derive(Debug, Clone)]
pub struct FiniteGame {
    k: u32,
    n: u32,
    target: Target,
}

/// Number of plays `k^(2N+2)`, if it fits.
fn play_count(k: u32, n: u32) -> Option<u64> {
    u64::from(k).checked_pow(2 * n + 2)
}

/// Number of tree nodes `1 + k + ... + k^(2N+2)`, saturating.
fn node_count(k: u32, n: u32) -> u64 {
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..=(2 * n + 2) {
        total = total.saturating_add(level);
        level = level.saturating_mul(u64::from(k));
    }
    total
}

fn bits_to_hex(bits: &[bool]) -> String {
    let digits = bits.len().div_ceil(4).max(1);
    let mut s = String::with_capacity(digits + 2);
    s.push_str("0x");
    for d in (0..digits).rev() {
        let mut v = 0u32;
        for b in 0..4 {
            if bits.get(4 * d + b).copied().unwrap_or(false) {
                v |= 1 << b;
            }
        }
        s.push(char::from_digit(v, 16).expect("nibble"));
    }
    s
}

/// Reads a hex bitset of exactly `len` bits (bit 0 is the last digit's low bit).
fn hex_to_bits(hex: &str, len: u64) -> Result<Vec<bool>, GameError> {
    let body = hex.strip_prefix("0x").or_else(|| hex.strip_prefix("0X")).unwrap_or(hex);
    if body.is_empty() {
        return Err(GameError::BadTarget("empty hex bitset".into()));
    }
    let len = usize::try_from(len).map_err(|_| GameError::BadTarget("too many plays".into()))?;
    let mut bits = vec![false; len];
    for (pos, c) in body.chars().rev().enumerate() {
        let v = c.to_digit(16).ok_or_else(|| GameError::BadTarget(format!("`{c}` is not a hex digit")))?;
        for b in 0..4 {
            if v & (1 << b) != 0 {
                let i = 4 * pos + b as usize;
                if i >= len {
                    return Err(GameError::BadTarget(format!("bit {i} is beyond the {len} plays")));
                }
                bits[i] = true;
            }
        }
    }
    Ok(bits)
}

impl FiniteGame {
    fn checked(k: u32, n: u32, target: Target) -> Result<FiniteGame, GameError> {
        if k == 0 {
            return Err(GameError::EmptyAlphabet);
        }
        Ok(FiniteGame { k, n, target })
    }

    pub fn with_bits(k: u32, n: u32, bits: Vec<bool>) -> Result<FiniteGame, GameError> {
        let plays = play_count(k, n).ok_or_else(|| GameError::BadTarget("too many plays for a bitset".into()))?;
        if bits.len() as u64 != plays {
            return Err(GameError::BadTarget(format!("bitset has {} bits, the game has {plays} plays", bits.len())));
        }
        Self::checked(k, n, Target::Bits(bits))
    }

    pub fn with_hex(k: u32, n: u32, hex: &str) -> Result<FiniteGame, GameError> {
        let plays = play_count(k, n).ok_or_else(|| GameError::BadTarget("too many plays for a bitset".into()))?;
        Self::with_bits(k, n, hex_to_bits(hex, plays)?)
    }

    pub fn with_expr(k: u32, n: u32, text: &str) -> Result<FiniteGame, GameError> {
        let len = 2 * n as usize + 2;
        Self::checked(k, n, Target::Expr(Predicate::parse(text, len)?))
    }

    pub fn with_callback(
        k: u32,
        n: u32,
        f: impl Fn(&[u32]) -> bool + Send + Sync + 'static,
    ) -> Result<FiniteGame, GameError> {
        Self::checked(k, n, Target::Callback(Arc::new(f)))
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn horizon(&self) -> u32 {
        self.n
    }

    pub fn play_len(&self) -> usize {
        2 * self.n as usize + 2
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    fn index(&self, play: &[u32]) -> usize {
        play.iter().fold(0usize, |acc, m| acc * self.k as usize + *m as usize)
    }

    /// Whether Player I wins this complete play.
    pub fn in_target(&self, play: &[u32]) -> bool {
        match &self.target {
            Target::Bits(b) => b[self.index(play)],
            Target::Expr(p) => p.holds(play),
            Target::Callback(f) => f(play),
        }
    }

    /// The game with the complementary target.
    pub fn complement(&self) -> FiniteGame {
        let target = match &self.target {
            Target::Bits(b) => Target::Bits(b.iter().map(|x| !x).collect()),
            _ => {
                let inner = self.clone();
                Target::Callback(Arc::new(move |p: &[u32]| !inner.in_target(p)))
            }
        };
        FiniteGame { k: self.k, n: self.n, target }
    }

    /// Parses a `.pjg` document.
    pub fn from_json(text: &str) -> Result<FiniteGame, GameError> {
        let file: GameFile = serde_json::from_str(text).map_err(|e| GameError::Format(e.to_string()))?;
        match file.target {
            TargetSpec::Hex(h) => Self::with_hex(file.k, file.n, &h),
            TargetSpec::Expr { expr } => Self::with_expr(file.k, file.n, &expr),
        }
    }

    /// The `.pjg` form; callback targets have none.
    pub fn to_json(&self) -> Option<String> {
        let target = match &self.target {
            Target::Bits(b) => TargetSpec::Hex(bits_to_hex(b)),
            Target::Expr(p) => TargetSpec::Expr { expr: p.source().to_string() },
            Target::Callback(_) => return None,
        };
        let file = GameFile { k: self.k, n: self.n, target };
        Some(serde_json::to_string(&file).expect("game JSON is always serializable"))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TargetSpec {
    Hex(String),
    Expr { expr: String },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    k: u32,
    #[serde(rename = "N")]
    n: u32,
    target: TargetSpec,
}

/// Moves of one player, keyed by the history they answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub player: Player,
    pub moves: BTreeMap<Vec<u32>, u32>,
}

impl Strategy {
    /// Always plays `m`, on every history of the player's parity.
    pub fn constant(g: &FiniteGame, player: Player, m: u32) -> Strategy {
        let mut moves = BTreeMap::new();
        let mut stack = vec![Vec::new()];
        while let Some(h) = stack.pop() {
            if h.len() == g.play_len() {
                continue;
            }
            if Player::to_move(h.len()) == player {
                moves.insert(h.clone(), m);
            }
            for x in 0..g.k {
                let mut next = h.clone();
                next.push(x);
                stack.push(next);
            }
        }
        Strategy { player, moves }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub winner: Player,
    pub strategy: Strategy,
    pub nodes: u64,
}

/// Solves with the default node budget.
pub fn solve(g: &FiniteGame) -> Result<Solution, GameError> {
    solve_with_budget(g, DEFAULT_NODE_BUDGET)
}

/// Backward induction. `won[d][j]` records whether Player I wins from the
/// depth-`d` history with index `j`.
pub fn solve_with_budget(g: &FiniteGame, budget: u64) -> Result<Solution, GameError> {
    let nodes = node_count(g.k, g.n);
    if nodes > budget {
        return Err(GameError::ResourceLimit { nodes, budget });
    }
    let k = g.k as usize;
    let len = g.play_len();
    let plays = play_count(g.k, g.n).expect("bounded by the budget") as usize;

    let mut play = vec![0u32; len];
    let mut leaves = Vec::with_capacity(plays);
    for j in 0..plays {
        let mut rest = j;
        for slot in play.iter_mut().rev() {
            *slot = (rest % k) as u32;
            rest /= k;
        }
        leaves.push(g.in_target(&play));
    }
    let mut won = vec![leaves];
    for depth in (0..len).rev() {
        let below = won.last().expect("leaf level exists");
        let level: Vec<bool> = below
            .chunks(k)
            .map(|kids| match Player::to_move(depth) {
                Player::I => kids.iter().any(|w| *w),
                Player::II => kids.iter().all(|w| *w),
            })
            .collect();
        won.push(level);
    }
    won.reverse();

    let winner = if won[0][0] { Player::I } else { Player::II };
    let mut moves = BTreeMap::new();
    let mut stack: Vec<(Vec<u32>, usize)> = vec![(Vec::new(), 0)];
    while let Some((h, j)) = stack.pop() {
        let depth = h.len();
        if depth == len {
            continue;
        }
        let good = |m: usize| won[depth + 1][j * k + m] == (winner == Player::I);
        let choices: Vec<usize> = if Player::to_move(depth) == winner {
            let m = (0..k).find(|m| good(*m)).expect("a won position has a winning move");
            moves.insert(h.clone(), m as u32);
            vec![m]
        } else {
            (0..k).collect()
        };
        for m in choices {
            let mut next = h.clone();
            next.push(m as u32);
            stack.push((next, j * k + m));
        }
    }
    Ok(Solution { winner, strategy: Strategy { player: winner, moves }, nodes })
}

/// Whether `s` wins for `player` against every opponent reply. Missing
/// entries on reachable histories make the strategy lose.
pub fn verify_strategy(g: &FiniteGame, s: &Strategy, player: Player) -> bool {
    let mut stack = vec![Vec::new()];
    while let Some(h) = stack.pop() {
        if h.len() == g.play_len() {
            if g.in_target(&h) != (player == Player::I) {
                return false;
            }
            continue;
        }
        if Player::to_move(h.len()) == player {
            match s.moves.get(&h) {
                Some(m) if *m < g.k => {
                    let mut next = h.clone();
                    next.push(*m);
                    stack.push(next);
                }
                _ => return false,
            }
        } else {
            for m in 0..g.k {
                let mut next = h.clone();
                next.push(m);
                stack.push(next);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_targets() {
        let full = FiniteGame::with_expr(3, 1, "true").unwrap();
        let sol = solve(&full).unwrap();
        assert_eq!(sol.winner, Player::I);
        assert!(verify_strategy(&full, &Strategy::constant(&full, Player::I, 2), Player::I));
        let empty = FiniteGame::with_bits(2, 0, vec![false; 4]).unwrap();
        assert_eq!(solve(&empty).unwrap().winner, Player::II);
        assert!(!verify_strategy(&empty, &Strategy::constant(&empty, Player::I, 0), Player::I));
    }

    #[test]
    fn diagonal_is_won_by_copying() {
        let g = FiniteGame::with_expr(2, 0, "a0 == b0").unwrap();
        let sol = solve(&g).unwrap();
        assert_eq!(sol.winner, Player::II);
        assert!(verify_strategy(&g, &sol.strategy, Player::II));
        let copy = Strategy { player: Player::II, moves: BTreeMap::from([(vec![0], 1), (vec![1], 0)]) };
        assert!(verify_strategy(&g, &copy, Player::II));
        // Copying also wins the complement: complementing the target does not swap roles.
        let c = g.complement();
        let sol = solve(&c).unwrap();
        assert_eq!(sol.winner, Player::II);
        let same = Strategy { player: Player::II, moves: BTreeMap::from([(vec![0], 0), (vec![1], 1)]) };
        assert!(verify_strategy(&c, &same, Player::II));
    }

    #[test]
    fn hex_round_trip() {
        let g = FiniteGame::with_hex(2, 1, "0x8001").unwrap();
        let Target::Bits(b) = g.target() else { panic!() };
        assert!(b[0] && b[15] && b.iter().filter(|x| **x).count() == 2);
        assert_eq!(g.to_json().unwrap(), r#"{"k":2,"N":1,"target":"0x8001"}"#);
        assert!(FiniteGame::with_hex(2, 1, "0x10000").is_err());
        let parsed = FiniteGame::from_json(r#"{"k": 2, "N": 0, "target": {"expr": "a0 != b0"}}"#).unwrap();
        assert_eq!(solve(&parsed).unwrap().winner, Player::II);
    }

    #[test]
    fn budget_is_enforced() {
        let g = FiniteGame::with_expr(10, 3, "true").unwrap();
        assert!(matches!(solve_with_budget(&g, 1000), Err(GameError::ResourceLimit { .. })));
        let big = FiniteGame::with_expr(1000, 1000, "true").unwrap();
        assert!(matches!(solve(&big), Err(GameError::ResourceLimit { .. })));
    }
}
