//! CNF formulas: DIMACS I/O, seeded random k-SAT, the half/half variable
//! split and the clause sets it induces, plus an exhaustive SAT oracle.
//!
//! Clause indices are 0-based throughout. Variables `1..=h` belong to the
//! first half and `h+1..=2h` to the second, where `h = ceil(n / 2)`; for odd
//! `n` the last second-half variable does not occur in the formula.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::Rng as _;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::rng;

/// Largest `n` accepted by [`CnfFormula::enumerate_satisfying`].
pub const MAX_ENUMERATION_VARS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("clause {clause}: literal {literal} out of range for {vars} variables")]
    LiteralOutOfRange { clause: usize, literal: i64, vars: usize },
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("clause {0} contains a literal and its negation")]
    Tautology(usize),
    #[error("clause width {k} exceeds variable count {n}")]
    WidthTooLarge { k: usize, n: usize },
    #[error("clause width must be positive")]
    ZeroWidth,
    #[error("assignment has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("exhaustive enumeration limited to {MAX_ENUMERATION_VARS} variables, formula has {0}")]
    TooManyVars(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<i32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    First,
    Second,
}

/// Assignment to one half of the variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfAssignment {
    pub side: Side,
    pub bits: Vec<bool>,
}

impl HalfAssignment {
    pub fn new(side: Side, bits: Vec<bool>) -> Self {
        Self { side, bits }
    }

    /// All `2^h` assignments of one side in lexicographic order (first bit most significant).
    pub fn all(side: Side, h: usize) -> impl Iterator<Item = HalfAssignment> {
        (0u64..1 << h).map(move |v| HalfAssignment {
            side,
            bits: (0..h).map(|i| v >> (h - 1 - i) & 1 == 1).collect(),
        })
    }

    pub fn to_bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(side: Side, s: &str) -> Option<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self { side, bits })
    }
}

/// A subset of the clause indices, possibly over a padded universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClauseSet {
    pub members: BitSet,
}

impl ClauseSet {
    pub fn new(universe: usize) -> Self {
        Self { members: BitSet::new(universe) }
    }

    pub fn from_indices(universe: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        Self { members: BitSet::from_indices(universe, idx) }
    }

    pub fn universe_size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.members.contains(j)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.members.intersection_count(&other.members) == 0
    }

    /// Widens the universe with never-occupied padding elements.
    pub fn padded(&self, universe: usize) -> Self {
        assert!(universe >= self.universe_size());
        Self::from_indices(universe, self.members.iter())
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members.iter().collect()
    }
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, CnfError> {
        for (j, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(CnfError::EmptyClause(j));
            }
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(CnfError::LiteralOutOfRange {
                        clause: j,
                        literal: i64::from(lit),
                        vars: num_vars,
                    });
                }
                if clause.contains(&-lit) {
                    return Err(CnfError::Tautology(j));
                }
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// Size of each half of the variable split.
    pub fn half_size(&self) -> usize {
        self.num_vars.div_ceil(2)
    }

    pub fn parse_dimacs(text: &str) -> Result<Self, CnfError> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current: Vec<i32> = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('%') {
                break;
            }
            let err = |msg: String| CnfError::Parse { line: line_no, msg };
            if line.starts_with('p') {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                    return Err(err(format!("malformed header {line:?}")));
                }
                let n = parts[2].parse().map_err(|_| err(format!("bad variable count {:?}", parts[2])))?;
                let m = parts[3].parse().map_err(|_| err(format!("bad clause count {:?}", parts[3])))?;
                header = Some((n, m));
                continue;
            }
            let Some((n, _)) = header else {
                return Err(err("clause before 'p cnf' header".into()));
            };
            for tok in line.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|_| err(format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    if current.is_empty() {
                        return Err(err("empty clause".into()));
                    }
                    if current.iter().any(|&l| current.contains(&-l)) {
                        return Err(err("clause contains a literal and its negation".into()));
                    }
                    clauses.push(std::mem::take(&mut current));
                } else {
                    if lit.unsigned_abs() as usize > n {
                        return Err(err(format!("literal {lit} out of range for {n} variables")));
                    }
                    current.push(lit as i32);
                }
            }
        }
        let Some((n, m)) = header else {
            return Err(CnfError::Parse { line: last_line, msg: "missing 'p cnf' header".into() });
        };
        if !current.is_empty() {
            return Err(CnfError::Parse { line: last_line, msg: "last clause not terminated by 0".into() });
        }
        if clauses.len() != m {
            return Err(CnfError::Parse {
                line: last_line,
                msg: format!("header declares {m} clauses, found {}", clauses.len()),
            });
        }
        Self::new(n, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    /// `m` clauses over `k` distinct variables each, with uniform signs.
    pub fn random_ksat(n: usize, m: usize, k: usize, seed: u64) -> Result<Self, CnfError> {
        if k == 0 {
            return Err(CnfError::ZeroWidth);
        }
        if k > n {
            return Err(CnfError::WidthTooLarge { k, n });
        }
        let mut rng = rng::from_seed(seed);
        let clauses = (0..m)
            .map(|_| {
                let mut vars = sample(&mut rng, n, k).into_vec();
                vars.sort_unstable();
                vars.into_iter()
                    .map(|v| {
                        let lit = v as i32 + 1;
                        if rng.gen::<bool>() { lit } else { -lit }
                    })
                    .collect()
            })
            .collect();
        Self::new(n, clauses)
    }

    fn side_range(&self, side: Side) -> std::ops::Range<usize> {
        let h = self.half_size();
        match side {
            Side::First => 1..h + 1,
            Side::Second => h + 1..2 * h + 1,
        }
    }

    /// Clauses none of whose literals over `h`'s variables is made true by `h`.
    pub fn induced_clause_set(&self, h: &HalfAssignment) -> Result<ClauseSet, CnfError> {
        if h.bits.len() != self.half_size() {
            return Err(CnfError::LengthMismatch { expected: self.half_size(), found: h.bits.len() });
        }
        let range = self.side_range(h.side);
        let mut set = ClauseSet::new(self.clauses.len());
        for (j, clause) in self.clauses.iter().enumerate() {
            let satisfied = clause.iter().any(|&lit| {
                let var = lit.unsigned_abs() as usize;
                range.contains(&var) && h.bits[var - range.start] == (lit > 0)
            });
            if !satisfied {
                set.members.insert(j);
            }
        }
        Ok(set)
    }

    pub fn check_assignment(&self, assignment: &[bool]) -> Result<bool, CnfError> {
        if assignment.len() != self.num_vars {
            return Err(CnfError::LengthMismatch { expected: self.num_vars, found: assignment.len() });
        }
        Ok(self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&lit| assignment[lit.unsigned_abs() as usize - 1] == (lit > 0))
        }))
    }

    /// All satisfying assignments, lexicographic with `x1` most significant.
    pub fn enumerate_satisfying(&self) -> Result<Vec<Vec<bool>>, CnfError> {
        let n = self.num_vars;
        if n > MAX_ENUMERATION_VARS {
            return Err(CnfError::TooManyVars(n));
        }
        let mut out = Vec::new();
        let mut bits = vec![false; n];
        for v in 0u64..1 << n {
            for (i, b) in bits.iter_mut().enumerate() {
                *b = v >> (n - 1 - i) & 1 == 1;
            }
            if self.check_assignment(&bits)? {
                out.push(bits.clone());
            }
        }
        Ok(out)
    }

    pub fn is_satisfiable(&self) -> Result<bool, CnfError> {
        Ok(!self.enumerate_satisfying()?.is_empty())
    }

    /// Splits a full assignment into its two halves (odd `n` padded with `false`).
    pub fn split(&self, assignment: &[bool]) -> (HalfAssignment, HalfAssignment) {
        let h = self.half_size();
        let mut padded = assignment.to_vec();
        padded.resize(2 * h, false);
        (
            HalfAssignment::new(Side::First, padded[..h].to_vec()),
            HalfAssignment::new(Side::Second, padded[h..].to_vec()),
        )
    }

    /// Joins two halves back into an assignment of length `n`.
    pub fn join(&self, alpha: &HalfAssignment, beta: &HalfAssignment) -> Vec<bool> {
        let mut out: Vec<bool> = alpha.bits.iter().chain(&beta.bits).copied().collect();
        out.truncate(self.num_vars);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn parse_examples() {
        let f = CnfFormula::parse_dimacs("p cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.clauses(), &[vec![1, -2]]);
        let g = CnfFormula::parse_dimacs("c hi\np cnf 4 2\n1 2 0\n-3 -4 0\n").unwrap();
        assert_eq!(g.num_clauses(), 2);
        let e = CnfFormula::parse_dimacs("p cnf 2 1\n3 0\n").unwrap_err();
        assert!(matches!(e, CnfError::Parse { line: 2, ref msg } if msg.contains("out of range")));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("p cnf x 1\n1 0\n", 1),
            ("1 0\n", 1),
            ("p cnf 2 2\n1 0\n", 2),
            ("p cnf 2 1\n1 -1 0\n", 2),
            ("p cnf 2 1\n1 2\n", 2),
            ("c only\nc comments\n", 2),
            ("p cnf 2 1\n0\n", 2),
        ];
        for (text, line) in cases {
            match CnfFormula::parse_dimacs(text) {
                Err(CnfError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = CnfFormula::parse_dimacs("p cnf 3 2\n1 2\n3 0 -1\n0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2, 3], vec![-1]]);
    }

    #[test]
    fn random_ksat_shape_and_determinism() {
        let a = CnfFormula::random_ksat(4, 4, 2, 0).unwrap();
        assert_eq!(a, CnfFormula::random_ksat(4, 4, 2, 0).unwrap());
        assert_eq!(a.num_clauses(), 4);
        let b = CnfFormula::random_ksat(2, 1, 2, 99).unwrap();
        let mut vars: Vec<u32> = b.clauses()[0].iter().map(|l| l.unsigned_abs()).collect();
        vars.sort();
        assert_eq!(vars, vec![1, 2]);
        let c = CnfFormula::random_ksat(10, 40, 3, 7).unwrap();
        assert_eq!(c.num_clauses(), 40);
        for clause in c.clauses() {
            let mut v: Vec<u32> = clause.iter().map(|l| l.unsigned_abs()).collect();
            v.dedup();
            assert_eq!(v.len(), 3);
        }
        assert_eq!(CnfFormula::random_ksat(2, 1, 3, 0), Err(CnfError::WidthTooLarge { k: 3, n: 2 }));
    }

    #[test]
    fn induced_set_examples() {
        // (x1 v x3) with n = 4: x3 is on the second half.
        let f = CnfFormula::new(4, vec![vec![1, 3]]).unwrap();
        let alpha = HalfAssignment::new(Side::First, bits("10"));
        assert!(f.induced_clause_set(&alpha).unwrap().members.is_empty());

        let g = CnfFormula::new(2, vec![vec![-1, -2]]).unwrap();
        let s = g.induced_clause_set(&HalfAssignment::new(Side::First, bits("1"))).unwrap();
        let t = g.induced_clause_set(&HalfAssignment::new(Side::Second, bits("1"))).unwrap();
        assert_eq!(s.indices(), vec![0]);
        assert_eq!(t.indices(), vec![0]);
        assert!(!s.is_disjoint(&t));
        assert!(!g.check_assignment(&bits("11")).unwrap());

        let h = CnfFormula::new(4, vec![vec![-1, 3], vec![-2, -4], vec![-1, -2]]).unwrap();
        let zero = HalfAssignment::new(Side::First, bits("00"));
        assert!(h.induced_clause_set(&zero).unwrap().members.is_empty());

        let short = HalfAssignment::new(Side::First, bits("1"));
        assert!(h.induced_clause_set(&short).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let f = CnfFormula::new(1, vec![vec![1]]).unwrap();
        assert!(f.check_assignment(&[true]).unwrap());
        let g = CnfFormula::new(1, vec![vec![1], vec![-1]]).unwrap();
        assert!(g.enumerate_satisfying().unwrap().is_empty());
        let h = CnfFormula::new(2, vec![vec![1, 2]]).unwrap();
        assert_eq!(h.enumerate_satisfying().unwrap(), vec![bits("01"), bits("10"), bits("11")]);
        let big = CnfFormula::new(25, vec![vec![1]]).unwrap();
        assert_eq!(big.enumerate_satisfying(), Err(CnfError::TooManyVars(25)));
    }

    #[test]
    fn disjointness_bridge_exhaustive() {
        for n in 1..=12usize {
            for seed in 0..3 {
                let k = n.min(3);
                let f = CnfFormula::random_ksat(n, 3 * n, k, seed).unwrap();
                let h = f.half_size();
                for alpha in HalfAssignment::all(Side::First, h) {
                    let s = f.induced_clause_set(&alpha).unwrap();
                    for beta in HalfAssignment::all(Side::Second, h) {
                        let t = f.induced_clause_set(&beta).unwrap();
                        let full = f.join(&alpha, &beta);
                        assert_eq!(f.check_assignment(&full).unwrap(), s.is_disjoint(&t));
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn dimacs_round_trip(n in 1usize..12, m in 0usize..30, seed in any::<u64>()) {
            let k = n.min(3);
            let f = CnfFormula::random_ksat(n, m, k, seed).unwrap();
            let text = f.to_dimacs();
            let g = CnfFormula::parse_dimacs(&text).unwrap();
            prop_assert_eq!(&g, &f);
            prop_assert_eq!(g.to_dimacs(), text);
        }
    }
}
