//! PCP-Vectors instances compiled from CNF formulas.
//!
//! Bob's vector lists, for every randomness outcome `l`, the message he would
//! send on his induced clause set. Alice's vector lists, for every `l` and
//! every possible Bob message `k`, either the symbol `k` itself (she would
//! accept it) or the bottom symbol. A row of Alice's vector therefore
//! "matches" Bob's entry exactly when the protocol verifier accepts.
//!
//! Alice's rows are stored implicitly: once Merlin's message passes the
//! randomness-independent checks, the accepted messages at `l` are the
//! solutions of one linear equation per round over Bob's field values.

use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::cnf::{ClauseSet, CnfError, CnfFormula, HalfAssignment, Side};
use crate::ff::{Fe, Polynomial};
use crate::protocol::{
    build_indicator_polys, merlin_message, AliceCheck, BobMessage, MerlinMessage, Probability,
    ProtocolError, ProtocolParams,
};

/// Bottom symbol in dense storage and in the JSON format.
pub const BOTTOM: i32 = -1;
/// Default guard on the Bob alphabet size `K = q^(T R)`.
pub const DEFAULT_MAX_ALPHABET: u64 = 2_000_000;
/// Formulas with more than this many clauses per variable are rejected.
pub const MAX_CLAUSE_RATIO: usize = 16;
const MAX_CANDIDATES: u128 = 200_000;
const MAX_SCORE_WORK: u128 = 20_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcpError {
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error("formula has {m} clauses for {n} variables; at most {MAX_CLAUSE_RATIO} clauses per variable supported")]
    NotSparse { n: usize, m: usize },
    #[error("formula has no clauses")]
    NoClauses,
    #[error("Bob alphabet K = {k} exceeds guard {max}")]
    AlphabetTooLarge { k: u128, max: u64 },
    #[error("{0} Merlin candidates exceed the enumeration guard")]
    TooManyCandidates(u128),
    #[error("pair scan of {0} row checks exceeds the size guard")]
    ScanTooLarge(u128),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("instance has no vectors on side {0}")]
    EmptySide(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MerlinMode {
    /// Honest messages of every `(alpha, beta)` split, deduplicated.
    PairwiseHonest,
    /// Every polynomial within the degree bound having at most `max_nonzero`
    /// nonzero coefficients. Only feasible for tiny fields.
    BoundedEnumeration { max_nonzero: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcpParams {
    pub protocol: ProtocolParams,
    pub merlin_mode: MerlinMode,
    pub max_alphabet: u64,
}

impl PcpParams {
    /// Protocol over the clause universe padded up to a multiple of `columns`.
    pub fn for_formula(
        formula: &CnfFormula,
        columns: usize,
        rounds: usize,
        modulus: Option<u64>,
        merlin_mode: MerlinMode,
    ) -> Result<Self, PcpError> {
        let (n, m) = (formula.num_vars(), formula.num_clauses());
        if m == 0 {
            return Err(PcpError::NoClauses);
        }
        if m > MAX_CLAUSE_RATIO * n {
            return Err(PcpError::NotSparse { n, m });
        }
        if columns == 0 {
            return Err(ProtocolError::BadColumns { n: m, columns }.into());
        }
        let universe = m.div_ceil(columns) * columns;
        let protocol = match modulus {
            Some(q) => ProtocolParams::with_modulus(universe, columns, rounds, q)?,
            None => ProtocolParams::new(universe, columns, rounds)?,
        };
        let params = Self { protocol, merlin_mode, max_alphabet: DEFAULT_MAX_ALPHABET };
        params.check_alphabet()?;
        Ok(params)
    }

    pub fn with_max_alphabet(mut self, max: u64) -> Result<Self, PcpError> {
        self.max_alphabet = max;
        self.check_alphabet()?;
        Ok(self)
    }

    fn check_alphabet(&self) -> Result<(), PcpError> {
        let k = self.alphabet_size_wide();
        if k > u128::from(self.max_alphabet) {
            return Err(PcpError::AlphabetTooLarge { k, max: self.max_alphabet });
        }
        Ok(())
    }

    fn alphabet_size_wide(&self) -> u128 {
        u128::from(self.protocol.modulus()).pow((self.protocol.columns() * self.protocol.rounds()) as u32)
    }

    /// Padded clause universe `m'`.
    pub fn universe(&self) -> usize {
        self.protocol.universe()
    }

    /// `L = q^R`.
    pub fn randomness_count(&self) -> usize {
        self.protocol.randomness_space() as usize
    }

    /// `K = |Sigma| = q^(T R)`.
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size_wide() as usize
    }

    /// Largest number of good rows any pair can have when the formula is unsatisfiable:
    /// `(2(m'/T - 1))^R`, i.e. `L` times the amplified soundness error.
    pub fn soundness_rows(&self) -> u64 {
        (self.protocol.merlin_degree_bound() as u64).pow(self.protocol.rounds() as u32)
    }

    /// The R field elements drawn for randomness index `ell` (round 0 least significant).
    pub fn randomness(&self, ell: usize) -> Vec<Fe> {
        let q = self.protocol.modulus() as usize;
        let mut rest = ell;
        (0..self.protocol.rounds())
            .map(|_| {
                let d = rest % q;
                rest /= q;
                Fe(d as u64)
            })
            .collect()
    }
}

/// Mixed-radix base `q` encoding of Bob's `T * R` values; digit `r * T + t`
/// (round-major, then column) has weight `q^(r T + t)`.
pub fn pack_bob_message(msgs: &[BobMessage], params: &PcpParams) -> Result<u32, PcpError> {
    let (t, r) = (params.protocol.columns(), params.protocol.rounds());
    if msgs.len() != r || msgs.iter().any(|m| m.values.len() != t) {
        return Err(PcpError::Shape(format!("expected {r} rounds of {t} values")));
    }
    let q = params.protocol.modulus();
    let mut sym = 0u64;
    for v in msgs.iter().rev().flat_map(|m| m.values.iter().rev()) {
        if v.0 >= q {
            return Err(PcpError::Shape(format!("value {} not reduced mod {q}", v.0)));
        }
        sym = sym * q + v.0;
    }
    Ok(sym as u32)
}

pub fn unpack_bob_message(sym: u32, params: &PcpParams) -> Result<Vec<BobMessage>, PcpError> {
    if sym as usize >= params.alphabet_size() {
        return Err(PcpError::Shape(format!("symbol {sym} outside alphabet")));
    }
    let q = params.protocol.modulus();
    let mut rest = u64::from(sym);
    Ok((0..params.protocol.rounds())
        .map(|_| BobMessage {
            values: (0..params.protocol.columns())
                .map(|_| {
                    let d = rest % q;
                    rest /= q;
                    Fe(d)
                })
                .collect(),
        })
        .collect())
}

/// One Alice vector: an `L x K` array over `Sigma` plus bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AliceVector {
    /// Every entry is bottom.
    Rejecting { rows: usize, columns: usize },
    /// Entry `(l, k)` is `k` iff for every round `r` the base-`q` digits
    /// `k_{r,t}` satisfy `sum_t coeffs[l][r][t] * k_{r,t} = rhs[l][r]`.
    Linear {
        q: u32,
        t: usize,
        r: usize,
        rows: usize,
        coeffs: Vec<u32>,
        rhs: Vec<u32>,
    },
    /// Explicit entries, row-major, `BOTTOM` for bottom.
    Dense { rows: usize, columns: usize, cells: Vec<i32> },
}

impl AliceVector {
    pub fn rows(&self) -> usize {
        match self {
            Self::Rejecting { rows, .. } | Self::Linear { rows, .. } | Self::Dense { rows, .. } => *rows,
        }
    }

    pub fn columns(&self) -> usize {
        match self {
            Self::Rejecting { columns, .. } | Self::Dense { columns, .. } => *columns,
            Self::Linear { q, t, r, .. } => (*q as usize).pow((t * r) as u32),
        }
    }

    pub fn is_rejecting(&self) -> bool {
        match self {
            Self::Rejecting { .. } => true,
            Self::Linear { .. } => false,
            Self::Dense { cells, .. } => cells.iter().all(|&c| c == BOTTOM),
        }
    }

    /// Whether column `k` of row `ell` holds the symbol `k`.
    pub fn accepts(&self, ell: usize, k: u32) -> bool {
        match self {
            Self::Rejecting { .. } => false,
            Self::Dense { columns, cells, .. } => cells[ell * columns + k as usize] != BOTTOM,
            Self::Linear { q, t, r, coeffs, rhs, .. } => {
                let q = u64::from(*q);
                let mut rest = u64::from(k);
                for round in 0..*r {
                    let base = (ell * r + round) * t;
                    let mut sum = 0u64;
                    for col in 0..*t {
                        let digit = rest % q;
                        rest /= q;
                        sum += u64::from(coeffs[base + col]) * digit;
                    }
                    if sum % q != u64::from(rhs[ell * r + round]) {
                        return false;
                    }
                }
                true
            }
        }
    }

    /// Entry `(ell, k)`: `Some(symbol)` or `None` for bottom.
    pub fn entry(&self, ell: usize, k: usize) -> Option<u32> {
        match self {
            Self::Dense { columns, cells, .. } => {
                let c = cells[ell * columns + k];
                (c != BOTTOM).then_some(c as u32)
            }
            _ => self.accepts(ell, k as u32).then_some(k as u32),
        }
    }

    pub fn dense_row(&self, ell: usize) -> Vec<i32> {
        (0..self.columns())
            .map(|k| self.entry(ell, k).map_or(BOTTOM, |s| s as i32))
            .collect()
    }

    pub fn to_dense(&self) -> AliceVector {
        let (rows, columns) = (self.rows(), self.columns());
        let cells = (0..rows).flat_map(|ell| self.dense_row(ell)).collect();
        AliceVector::Dense { rows, columns, cells }
    }

    /// Symbols present in row `ell`, ascending.
    pub fn row_symbols(&self, ell: usize) -> Vec<u32> {
        (0..self.columns()).filter_map(|k| self.entry(ell, k)).collect()
    }
}

/// Where each vector came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// Merlin candidate polynomials, coefficients low degree first.
    pub merlin: Vec<Vec<u64>>,
    /// Per A vector: first-half assignment and index into `merlin`.
    pub a: Vec<(HalfAssignment, usize)>,
    /// Per B vector: second-half assignment.
    pub b: Vec<HalfAssignment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcpVectorsInstance {
    pub q: u64,
    pub columns: usize,
    pub rounds: usize,
    /// `|L|`.
    pub l: usize,
    /// `|K| = |Sigma|`.
    pub k: usize,
    pub a: Vec<AliceVector>,
    pub b: Vec<Vec<u32>>,
    pub provenance: Option<Provenance>,
}

impl PcpVectorsInstance {
    pub fn sigma_size(&self) -> usize {
        self.k
    }

    /// Checks shapes, symbol ranges and the relabelling invariant of dense Alice rows.
    pub fn validate(&self) -> Result<(), PcpError> {
        let bad = |m: String| Err(PcpError::Invalid(m));
        let expected_l = u128::from(self.q).pow(self.rounds as u32);
        let expected_k = u128::from(self.q).pow((self.rounds * self.columns) as u32);
        if expected_l != self.l as u128 || expected_k != self.k as u128 {
            return bad(format!("L = {} and K = {} inconsistent with q = {}, T = {}, R = {}", self.l, self.k, self.q, self.columns, self.rounds));
        }
        for (j, b) in self.b.iter().enumerate() {
            if b.len() != self.l {
                return bad(format!("B[{j}] has length {}, expected {}", b.len(), self.l));
            }
            if let Some(&s) = b.iter().find(|&&s| s as usize >= self.k) {
                return bad(format!("B[{j}] holds symbol {s} outside [0, {})", self.k));
            }
        }
        for (i, a) in self.a.iter().enumerate() {
            if a.rows() != self.l || a.columns() != self.k {
                return bad(format!("A[{i}] has shape {}x{}, expected {}x{}", a.rows(), a.columns(), self.l, self.k));
            }
            match a {
                AliceVector::Dense { cells, columns, .. } => {
                    for (idx, &c) in cells.iter().enumerate() {
                        if c != BOTTOM && c as usize != idx % columns {
                            return bad(format!("A[{i}] entry ({}, {}) = {c} is neither bottom nor its column index", idx / columns, idx % columns));
                        }
                    }
                }
                AliceVector::Linear { q, t, r, coeffs, rhs, rows } => {
                    if u64::from(*q) != self.q || *t != self.columns || *r != self.rounds
                        || coeffs.len() != rows * r * t || rhs.len() != rows * r
                        || coeffs.iter().chain(rhs).any(|&c| c >= *q)
                    {
                        return bad(format!("A[{i}] has malformed row constraints"));
                    }
                }
                AliceVector::Rejecting { .. } => {}
            }
        }
        if let Some(p) = &self.provenance {
            if p.a.len() != self.a.len() || p.b.len() != self.b.len() {
                return bad("provenance does not cover every vector".into());
            }
            if p.a.iter().any(|(_, mu)| *mu >= p.merlin.len()) {
                return bad("provenance refers to a missing Merlin candidate".into());
            }
        }
        Ok(())
    }
}

/// `s(a, b)` as a count of good rows out of `rows`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Score {
    pub good_rows: u64,
    pub rows: u64,
}

impl Score {
    pub fn as_probability(&self) -> Probability {
        Probability::new(self.good_rows, self.rows)
    }

    pub fn value(&self) -> f64 {
        self.good_rows as f64 / self.rows as f64
    }

    pub fn is_perfect(&self) -> bool {
        self.good_rows == self.rows
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.good_rows, self.rows)
    }
}

/// Fraction of rows where Alice's row contains Bob's symbol. Since accepted
/// entries equal their column index, the only column that can match is `b_l`.
pub fn score(a: &AliceVector, b: &[u32]) -> Result<Score, PcpError> {
    if a.rows() != b.len() {
        return Err(PcpError::Shape(format!("A has {} rows, B has length {}", a.rows(), b.len())));
    }
    let columns = a.columns();
    if let Some(&s) = b.iter().find(|&&s| s as usize >= columns) {
        return Err(PcpError::Shape(format!("B symbol {s} outside alphabet of size {columns}")));
    }
    let good = b.iter().enumerate().filter(|&(ell, &s)| a.accepts(ell, s)).count();
    Ok(Score { good_rows: good as u64, rows: b.len() as u64 })
}

/// Exact maximiser of `s(a, b)`, ties broken by smallest `(A index, B index)`.
pub fn brute_force_max_score(inst: &PcpVectorsInstance) -> Result<(usize, usize, Score), PcpError> {
    if inst.a.is_empty() {
        return Err(PcpError::EmptySide("A"));
    }
    if inst.b.is_empty() {
        return Err(PcpError::EmptySide("B"));
    }
    let work = inst.a.len() as u128 * inst.b.len() as u128 * inst.l as u128;
    if work > MAX_SCORE_WORK {
        return Err(PcpError::ScanTooLarge(work));
    }
    let best = inst
        .a
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let mut best: Option<(usize, usize, Score)> = None;
            for (j, b) in inst.b.iter().enumerate() {
                let s = score(a, b)?;
                if best.is_none_or(|(_, _, bs)| s.good_rows > bs.good_rows) {
                    best = Some((i, j, s));
                }
            }
            Ok(best.expect("B is nonempty"))
        })
        .collect::<Result<Vec<_>, PcpError>>()?
        .into_iter()
        .reduce(|x, y| if y.2.good_rows > x.2.good_rows { y } else { x })
        .expect("A is nonempty");
    Ok(best)
}

fn padded_set(formula: &CnfFormula, h: &HalfAssignment, params: &PcpParams) -> Result<ClauseSet, PcpError> {
    Ok(formula.induced_clause_set(h)?.padded(params.universe()))
}

fn bob_vector_for_set(set: &ClauseSet, params: &PcpParams) -> Result<Vec<u32>, PcpError> {
    let polys = build_indicator_polys(set, &params.protocol)?;
    (0..params.randomness_count())
        .map(|ell| {
            let msgs: Vec<BobMessage> = params
                .randomness(ell)
                .into_iter()
                .map(|x| BobMessage { values: polys.eval_all(x) })
                .collect();
            pack_bob_message(&msgs, params)
        })
        .collect()
}

/// Bob's honest message on `T_beta` for every randomness outcome.
pub fn build_bob_vector(formula: &CnfFormula, beta: &HalfAssignment, params: &PcpParams) -> Result<Vec<u32>, PcpError> {
    let set = padded_set(formula, &HalfAssignment::new(Side::Second, beta.bits.clone()), params)?;
    bob_vector_for_set(&set, params)
}

fn alice_vector_for_set(set: &ClauseSet, merlin: &MerlinMessage, params: &PcpParams) -> Result<AliceVector, PcpError> {
    let check = AliceCheck::new(merlin, set, &params.protocol)?;
    let rows = params.randomness_count();
    if !check.passes_fixed_checks() {
        return Ok(AliceVector::Rejecting { rows, columns: params.alphabet_size() });
    }
    let (t, r) = (params.protocol.columns(), params.protocol.rounds());
    let mut coeffs = Vec::with_capacity(rows * r * t);
    let mut rhs = Vec::with_capacity(rows * r);
    for ell in 0..rows {
        for x in params.randomness(ell) {
            let (c, v) = check.row_constraint(x).expect("fixed checks passed");
            coeffs.extend(c.iter().map(|e| e.0 as u32));
            rhs.push(v.0 as u32);
        }
    }
    Ok(AliceVector::Linear { q: params.protocol.modulus() as u32, t, r, rows, coeffs, rhs })
}

/// Alice's accept table for `(alpha, mu)` with accepted entries relabelled to their column index.
pub fn build_alice_vector(
    formula: &CnfFormula,
    alpha: &HalfAssignment,
    merlin: &MerlinMessage,
    params: &PcpParams,
) -> Result<AliceVector, PcpError> {
    let set = padded_set(formula, &HalfAssignment::new(Side::First, alpha.bits.clone()), params)?;
    alice_vector_for_set(&set, merlin, params)
}

fn distinct_sets(formula: &CnfFormula, side: Side, params: &PcpParams) -> Result<Vec<ClauseSet>, PcpError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for h in HalfAssignment::all(side, formula.half_size()) {
        let s = padded_set(formula, &h, params)?;
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Merlin messages the reduction ranges over, in a fixed order without duplicates.
///
/// Restricting to the honest messages keeps the satisfying split's message
/// (so completeness survives) and only removes A vectors, so no score can
/// exceed what the full enumeration would allow.
pub fn enumerate_merlin_candidates(formula: &CnfFormula, params: &PcpParams) -> Result<Vec<MerlinMessage>, PcpError> {
    let field = params.protocol.field();
    match params.merlin_mode {
        MerlinMode::PairwiseHonest => {
            let s_sets = distinct_sets(formula, Side::First, params)?;
            let t_sets = distinct_sets(formula, Side::Second, params)?;
            let pairs = s_sets.len() as u128 * t_sets.len() as u128;
            if pairs > MAX_CANDIDATES {
                return Err(PcpError::TooManyCandidates(pairs));
            }
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            for s in &s_sets {
                for t in &t_sets {
                    let m = merlin_message(s, t, &params.protocol)?;
                    if seen.insert(m.phi.clone()) {
                        out.push(m);
                    }
                }
            }
            Ok(out)
        }
        MerlinMode::BoundedEnumeration { max_nonzero } => {
            let positions = params.protocol.merlin_degree_bound() + 1;
            let q = params.protocol.modulus();
            let count = sparse_poly_count(positions as u128, max_nonzero, u128::from(q) - 1);
            if count > MAX_CANDIDATES {
                return Err(PcpError::TooManyCandidates(count));
            }
            let mut out = Vec::with_capacity(count as usize);
            let mut support = Vec::new();
            enumerate_supports(positions, max_nonzero, 0, &mut support, &mut |supp| {
                let mut vals = vec![1u64; supp.len()];
                loop {
                    let mut coeffs = vec![Fe(0); positions];
                    for (&pos, &v) in supp.iter().zip(&vals) {
                        coeffs[pos] = Fe(v);
                    }
                    out.push(MerlinMessage { phi: Polynomial::from_coeffs(field, coeffs) });
                    // odometer over nonzero values
                    let mut i = 0;
                    while i < vals.len() {
                        vals[i] += 1;
                        if vals[i] < q {
                            break;
                        }
                        vals[i] = 1;
                        i += 1;
                    }
                    if i == vals.len() {
                        break;
                    }
                }
            });
            Ok(out)
        }
    }
}

fn sparse_poly_count(positions: u128, max_nonzero: usize, nonzero_values: u128) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for j in 0..=max_nonzero.min(positions as usize) {
        if j > 0 {
            binom = binom * (positions - j as u128 + 1) / j as u128;
        }
        total = total.saturating_add(binom.saturating_mul(nonzero_values.saturating_pow(j as u32)));
    }
    total
}

fn enumerate_supports(
    positions: usize,
    max_size: usize,
    start: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    visit(current);
    if current.len() == max_size {
        return;
    }
    for p in start..positions {
        current.push(p);
        enumerate_supports(positions, max_size, p + 1, current, visit);
        current.pop();
    }
}

/// All Bob vectors (one per `beta`) and all Alice vectors (one per `alpha` and Merlin candidate).
pub fn build_instance(formula: &CnfFormula, params: &PcpParams) -> Result<PcpVectorsInstance, PcpError> {
    let candidates = enumerate_merlin_candidates(formula, params)?;
    let h = formula.half_size();
    let betas: Vec<HalfAssignment> = HalfAssignment::all(Side::Second, h).collect();
    let alphas: Vec<HalfAssignment> = HalfAssignment::all(Side::First, h).collect();

    let b = betas
        .par_iter()
        .map(|beta| build_bob_vector(formula, beta, params))
        .collect::<Result<Vec<_>, _>>()?;

    let tags: Vec<(HalfAssignment, usize)> = alphas
        .iter()
        .flat_map(|alpha| (0..candidates.len()).map(move |mu| (alpha.clone(), mu)))
        .collect();
    let a = tags
        .par_iter()
        .map(|(alpha, mu)| build_alice_vector(formula, alpha, &candidates[*mu], params))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(PcpVectorsInstance {
        q: params.protocol.modulus(),
        columns: params.protocol.columns(),
        rounds: params.protocol.rounds(),
        l: params.randomness_count(),
        k: params.alphabet_size(),
        a,
        b,
        provenance: Some(Provenance {
            merlin: candidates.iter().map(|m| m.phi.to_u64s()).collect(),
            a: tags,
            b: betas,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{alice_verdict, bob_message, exact_accept_probability, Verdict};
    use proptest::prelude::*;

    fn toy() -> (CnfFormula, PcpParams) {
        let f = CnfFormula::new(2, vec![vec![-1, -2]]).unwrap();
        let p = PcpParams::for_formula(&f, 2, 1, None, MerlinMode::PairwiseHonest).unwrap();
        (f, p)
    }

    fn bits(side: Side, s: &str) -> HalfAssignment {
        HalfAssignment::from_bit_string(side, s).unwrap()
    }

    #[test]
    fn params_for_toy_formula() {
        let (_, p) = toy();
        assert_eq!(p.universe(), 2);
        assert_eq!(p.protocol.modulus(), 11);
        assert_eq!(p.randomness_count(), 11);
        assert_eq!(p.alphabet_size(), 121);
        assert_eq!(p.soundness_rows(), 0);
    }

    #[test]
    fn params_guards() {
        let dense = CnfFormula::random_ksat(2, 40, 2, 1).unwrap();
        assert!(matches!(
            PcpParams::for_formula(&dense, 2, 1, None, MerlinMode::PairwiseHonest),
            Err(PcpError::NotSparse { .. })
        ));
        let f = CnfFormula::random_ksat(8, 40, 3, 1).unwrap();
        assert!(matches!(
            PcpParams::for_formula(&f, 4, 1, None, MerlinMode::PairwiseHonest),
            Err(PcpError::AlphabetTooLarge { .. })
        ));
    }

    #[test]
    fn pack_examples() {
        let f = CnfFormula::random_ksat(8, 8, 3, 0).unwrap();
        let p = PcpParams::for_formula(&f, 2, 1, None, MerlinMode::PairwiseHonest).unwrap();
        assert_eq!(p.protocol.modulus(), 37);
        let zero = vec![BobMessage { values: vec![Fe(0), Fe(0)] }];
        assert_eq!(pack_bob_message(&zero, &p).unwrap(), 0);
        let one = vec![BobMessage { values: vec![Fe(1), Fe(0)] }];
        assert_eq!(pack_bob_message(&one, &p).unwrap(), 1);
        let other = vec![BobMessage { values: vec![Fe(0), Fe(1)] }];
        assert_eq!(pack_bob_message(&other, &p).unwrap(), 37);
        assert!(pack_bob_message(&[], &p).is_err());
    }

    proptest! {
        #[test]
        fn pack_unpack_bijection(vals in prop::collection::vec(0u64..37, 4)) {
            let f = CnfFormula::random_ksat(8, 8, 3, 0).unwrap();
            let p = PcpParams::for_formula(&f, 2, 2, None, MerlinMode::PairwiseHonest).unwrap();
            let msgs = vec![
                BobMessage { values: vec![Fe(vals[0]), Fe(vals[1])] },
                BobMessage { values: vec![Fe(vals[2]), Fe(vals[3])] },
            ];
            let sym = pack_bob_message(&msgs, &p).unwrap();
            prop_assert_eq!(unpack_bob_message(sym, &p).unwrap(), msgs);
            prop_assert!((sym as usize) < p.alphabet_size());
        }
    }

    #[test]
    fn bob_vector_examples() {
        let (f, p) = toy();
        let v = build_bob_vector(&f, &bits(Side::Second, "0"), &p).unwrap();
        assert_eq!(v, vec![0; 11]);
        // Two betas with the same induced set give the same vector.
        let g = CnfFormula::new(4, vec![vec![1, 2]]).unwrap();
        let pg = PcpParams::for_formula(&g, 2, 1, None, MerlinMode::PairwiseHonest).unwrap();
        let v0 = build_bob_vector(&g, &bits(Side::Second, "00"), &pg).unwrap();
        let v1 = build_bob_vector(&g, &bits(Side::Second, "11"), &pg).unwrap();
        assert_eq!(v0, v1);
    }

    #[test]
    fn alice_vector_examples() {
        let (f, p) = toy();
        // Merlin constant 1 fails the node check.
        let bad = MerlinMessage { phi: Polynomial::constant(p.protocol.field(), Fe(1)) };
        let a = build_alice_vector(&f, &bits(Side::First, "0"), &bad, &p).unwrap();
        assert!(a.is_rejecting());
        assert!((0..11).all(|ell| a.row_symbols(ell).is_empty()));

        // Disjoint toy pair: alpha = 0 satisfies the clause.
        let alpha = bits(Side::First, "0");
        let beta = bits(Side::Second, "1");
        let s = f.induced_clause_set(&alpha).unwrap().padded(2);
        let t = f.induced_clause_set(&beta).unwrap().padded(2);
        let honest = merlin_message(&s, &t, &p.protocol).unwrap();
        let a = build_alice_vector(&f, &alpha, &honest, &p).unwrap();
        let b = build_bob_vector(&f, &beta, &p).unwrap();
        for (ell, &k) in b.iter().enumerate().take(11) {
            assert_eq!(a.entry(ell, k as usize), Some(k));
        }
    }

    #[test]
    fn accepted_columns_solve_one_linear_equation() {
        let f = CnfFormula::random_ksat(6, 8, 3, 3).unwrap();
        let p = PcpParams::for_formula(&f, 2, 1, None, MerlinMode::PairwiseHonest).unwrap();
        let q = p.protocol.modulus();
        let cands = enumerate_merlin_candidates(&f, &p).unwrap();
        let mut checked = 0;
        for alpha in HalfAssignment::all(Side::First, 3) {
            let set = f.induced_clause_set(&alpha).unwrap().padded(p.universe());
            for mu in &cands {
                let check = AliceCheck::new(mu, &set, &p.protocol).unwrap();
                let a = build_alice_vector(&f, &alpha, mu, &p).unwrap();
                for ell in 0..p.randomness_count() {
                    let accepted = (0..p.alphabet_size()).filter(|&k| a.accepts(ell, k as u32)).count() as u64;
                    match check.row_constraint(Fe(ell as u64)) {
                        None => assert_eq!(accepted, 0),
                        Some((c, _)) if c.iter().any(|x| x.0 != 0) => assert_eq!(accepted, q),
                        Some((_, rhs)) => assert_eq!(accepted, if rhs.0 == 0 { q * q } else { 0 }),
                    }
                    // the table agrees with the protocol verdict on every column
                    if ell % 7 == 0 {
                        for k in 0..p.alphabet_size() as u32 {
                            let msg = unpack_bob_message(k, &p).unwrap();
                            let v = alice_verdict(mu, &set, Fe(ell as u64), &msg[0], &p.protocol).unwrap();
                            assert_eq!(a.accepts(ell, k), v == Verdict::Accept);
                        }
                    }
                }
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn candidate_examples() {
        // Only x1 occurs: T_beta is always {0}, S_alpha is {0} or empty.
        let f = CnfFormula::new(2, vec![vec![1]]).unwrap();
        let p = PcpParams::for_formula(&f, 2, 1, None, MerlinMode::PairwiseHonest).unwrap();
        let sets: HashSet<_> = HalfAssignment::all(Side::Second, 1)
            .map(|b| f.induced_clause_set(&b).unwrap())
            .collect();
        assert_eq!(sets.len(), 1);
        assert_eq!(enumerate_merlin_candidates(&f, &p).unwrap().len(), 2);

        // Deduplication matches a direct count of distinct honest messages.
        let g = CnfFormula::random_ksat(6, 8, 2, 4).unwrap();
        let pg = PcpParams::for_formula(&g, 2, 1, None, MerlinMode::PairwiseHonest).unwrap();
        let mut direct = HashSet::new();
        for alpha in HalfAssignment::all(Side::First, 3) {
            for beta in HalfAssignment::all(Side::Second, 3) {
                let s = g.induced_clause_set(&alpha).unwrap().padded(pg.universe());
                let t = g.induced_clause_set(&beta).unwrap().padded(pg.universe());
                direct.insert(merlin_message(&s, &t, &pg.protocol).unwrap());
            }
        }
        assert_eq!(enumerate_merlin_candidates(&g, &pg).unwrap().len(), direct.len());

        let (t, pt) = toy();
        let c = enumerate_merlin_candidates(&t, &pt).unwrap();
        assert!(c.len() <= 4);
        for assignment in t.enumerate_satisfying().unwrap() {
            let (alpha, beta) = t.split(&assignment);
            let s = t.induced_clause_set(&alpha).unwrap().padded(2);
            let u = t.induced_clause_set(&beta).unwrap().padded(2);
            assert!(c.contains(&merlin_message(&s, &u, &pt.protocol).unwrap()));
        }
    }

    #[test]
    fn bounded_enumeration_counts() {
        let (t, mut pt) = toy();
        pt.merlin_mode = MerlinMode::BoundedEnumeration { max_nonzero: 2 };
        // degree bound 0: one position, zero polynomial plus 10 constants
        assert_eq!(enumerate_merlin_candidates(&t, &pt).unwrap().len(), 11);
        let f = CnfFormula::random_ksat(4, 4, 2, 0).unwrap();
        let mut p = PcpParams::for_formula(&f, 2, 1, None, MerlinMode::BoundedEnumeration { max_nonzero: 2 }).unwrap();
        // 3 positions over F_17: 1 + 3*16 + 3*16^2
        assert_eq!(enumerate_merlin_candidates(&f, &p).unwrap().len(), 1 + 48 + 768);
        p.merlin_mode = MerlinMode::BoundedEnumeration { max_nonzero: 3 };
        let all = enumerate_merlin_candidates(&f, &p).unwrap();
        assert_eq!(all.len(), 17usize.pow(3));
        let distinct: HashSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
    }

    #[test]
    fn instance_shape_and_gap() {
        let f = CnfFormula::random_ksat(4, 4, 2, 5).unwrap();
        let p = PcpParams::for_formula(&f, 2, 1, None, MerlinMode::PairwiseHonest).unwrap();
        let inst = build_instance(&f, &p).unwrap();
        inst.validate().unwrap();
        let cands = enumerate_merlin_candidates(&f, &p).unwrap();
        assert_eq!(inst.b.len(), 4);
        assert_eq!(inst.a.len(), 4 * cands.len());
        let (_, _, best) = brute_force_max_score(&inst).unwrap();
        assert_eq!(best.is_perfect(), f.is_satisfiable().unwrap());
    }

    #[test]
    fn unsatisfiable_instance_respects_soundness() {
        let f = CnfFormula::new(2, vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]]).unwrap();
        for mode in [MerlinMode::PairwiseHonest, MerlinMode::BoundedEnumeration { max_nonzero: 2 }] {
            let p = PcpParams::for_formula(&f, 2, 1, None, mode).unwrap();
            let inst = build_instance(&f, &p).unwrap();
            let (_, _, best) = brute_force_max_score(&inst).unwrap();
            assert!(best.good_rows <= p.soundness_rows(), "{best} vs {}", p.soundness_rows());
        }
    }

    #[test]
    fn score_examples() {
        let rej = AliceVector::Rejecting { rows: 3, columns: 4 };
        assert_eq!(score(&rej, &[0, 1, 3]).unwrap().good_rows, 0);
        let cells: Vec<i32> = (0..3).flat_map(|_| 0..4).collect();
        let full = AliceVector::Dense { rows: 3, columns: 4, cells };
        assert!(score(&full, &[0, 1, 3]).unwrap().is_perfect());
        assert!(score(&full, &[0, 1]).is_err());
        assert!(score(&full, &[0, 1, 9]).is_err());
    }

    #[test]
    fn single_pair_brute_force() {
        let inst = PcpVectorsInstance {
            q: 2,
            columns: 1,
            rounds: 1,
            l: 2,
            k: 2,
            a: vec![AliceVector::Dense { rows: 2, columns: 2, cells: vec![0, -1, -1, 1] }],
            b: vec![vec![0, 0]],
            provenance: None,
        };
        inst.validate().unwrap();
        let (i, j, s) = brute_force_max_score(&inst).unwrap();
        assert_eq!((i, j, s.good_rows), (0, 0, 1));
    }

    #[test]
    fn dense_validation_rejects_relabel_violations() {
        let mut inst = PcpVectorsInstance {
            q: 2,
            columns: 1,
            rounds: 1,
            l: 2,
            k: 2,
            a: vec![AliceVector::Dense { rows: 2, columns: 2, cells: vec![1, -1, -1, 1] }],
            b: vec![vec![0, 1]],
            provenance: None,
        };
        assert!(inst.validate().is_err());
        inst.a[0] = AliceVector::Dense { rows: 2, columns: 2, cells: vec![0, -1, -1, 1] };
        inst.validate().unwrap();
        inst.b[0][1] = 2;
        assert!(inst.validate().is_err());
    }

    #[test]
    fn verifier_equivalence_small() {
        let f = CnfFormula::random_ksat(6, 6, 2, 11).unwrap();
        let p = PcpParams::for_formula(&f, 2, 1, None, MerlinMode::PairwiseHonest).unwrap();
        let inst = build_instance(&f, &p).unwrap();
        let prov = inst.provenance.as_ref().unwrap();
        for (a, (alpha, mu)) in inst.a.iter().zip(&prov.a) {
            let s = f.induced_clause_set(alpha).unwrap().padded(p.universe());
            let merlin = MerlinMessage { phi: Polynomial::from_u64s(p.protocol.field(), &prov.merlin[*mu]) };
            for (b, beta) in inst.b.iter().zip(&prov.b) {
                let t = f.induced_clause_set(beta).unwrap().padded(p.universe());
                let exact = exact_accept_probability(&s, &t, &merlin, &p.protocol).unwrap();
                assert_eq!(score(a, b).unwrap().as_probability(), exact);
            }
        }
        // spot-check Bob entries against the protocol's message
        let beta = &prov.b[1];
        let t = f.induced_clause_set(beta).unwrap().padded(p.universe());
        for ell in 0..p.randomness_count() {
            let msg = bob_message(&t, Fe(ell as u64), &p.protocol).unwrap();
            assert_eq!(inst.b[1][ell], pack_bob_message(&[msg], &p).unwrap());
        }
    }
}
