//! Merlin–Arthur protocol for Set Disjointness.
//!
//! The universe `[n]` is laid out as a `(n/T) x T` grid. Each party turns the
//! 0/1 membership column `t` of its set into a polynomial of degree
//! `< n/T` by interpolating on the nodes `0..n/T`. Merlin sends the claimed
//! sum-of-products polynomial `Phi`; a random point `l` in F_q is drawn; Bob
//! reveals his column polynomials at `l`; Alice accepts iff `Phi` vanishes on
//! every node and agrees with the product sum at `l`. Rounds after the first
//! reuse Merlin's message and redraw `l`.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use thiserror::Error;

use crate::cnf::ClauseSet;
use crate::ff::{choose_prime, lagrange_basis, Fe, FieldError, Polynomial, PrimeField};

/// Largest `q^R` that [`exact_accept_probability`] will enumerate.
pub const MAX_RANDOMNESS_SPACE: u64 = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("column count {columns} must be positive and divide the universe size {n}")]
    BadColumns { n: usize, columns: usize },
    #[error("repetition count must be at least 1")]
    ZeroRounds,
    #[error("modulus {q} too small: need 2(n/T - 1) < q/2 (n/T = {rows})")]
    ModulusTooSmall { q: u64, rows: usize },
    #[error("element {u} outside universe of size {n}")]
    OutOfRange { u: usize, n: usize },
    #[error("set universe {found} does not match protocol universe {expected}")]
    UniverseMismatch { expected: usize, found: usize },
    #[error("expected {expected} values, got {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("randomness space q^R = {0} exceeds the enumeration guard")]
    EnumerationTooLarge(u128),
}

/// Parameters of one protocol instance.
#[derive(Clone)]
pub struct ProtocolParams {
    n: usize,
    columns: usize,
    field: PrimeField,
    rounds: usize,
    basis: Arc<Vec<Polynomial>>,
}

impl fmt::Debug for ProtocolParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProtocolParams")
            .field("n", &self.n)
            .field("columns", &self.columns)
            .field("q", &self.field.modulus())
            .field("rounds", &self.rounds)
            .finish()
    }
}

impl PartialEq for ProtocolParams {
    fn eq(&self, other: &Self) -> bool {
        (self.n, self.columns, self.field, self.rounds)
            == (other.n, other.columns, other.field, other.rounds)
    }
}

impl Eq for ProtocolParams {}

impl ProtocolParams {
    /// Uses the smallest prime `q >= 4n`.
    pub fn new(n: usize, columns: usize, rounds: usize) -> Result<Self, ProtocolError> {
        let field = choose_prime(n as u64)?;
        Self::with_field(n, columns, rounds, field)
    }

    pub fn with_modulus(n: usize, columns: usize, rounds: usize, q: u64) -> Result<Self, ProtocolError> {
        Self::with_field(n, columns, rounds, PrimeField::new(q)?)
    }

    pub fn with_field(
        n: usize,
        columns: usize,
        rounds: usize,
        field: PrimeField,
    ) -> Result<Self, ProtocolError> {
        if columns == 0 || n == 0 || !n.is_multiple_of(columns) {
            return Err(ProtocolError::BadColumns { n, columns });
        }
        if rounds == 0 {
            return Err(ProtocolError::ZeroRounds);
        }
        let rows = n / columns;
        let q = field.modulus();
        // 2(rows - 1) < q / 2, kept in integers.
        if 4 * (rows as u64 - 1) >= q || rows as u64 > q {
            return Err(ProtocolError::ModulusTooSmall { q, rows });
        }
        let nodes: Vec<Fe> = (0..rows as u64).map(Fe).collect();
        let basis = (0..rows).map(|i| lagrange_basis(field, &nodes, i)).collect();
        Ok(Self { n, columns, field, rounds, basis: Arc::new(basis) })
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    /// `T`.
    pub fn columns(&self) -> usize {
        self.columns
    }

    /// `n / T`, the number of interpolation nodes per column.
    pub fn rows(&self) -> usize {
        self.n / self.columns
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn modulus(&self) -> u64 {
        self.field.modulus()
    }

    /// `R`.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Degree bound on Merlin's polynomial, `2(n/T - 1)`.
    pub fn merlin_degree_bound(&self) -> usize {
        2 * (self.rows() - 1)
    }

    /// Single-round soundness error `2(n/T - 1) / q`.
    pub fn round_soundness(&self) -> Probability {
        Probability::new(self.merlin_degree_bound() as u64, self.modulus())
    }

    /// `q^R`, the number of joint randomness outcomes.
    pub fn randomness_space(&self) -> u128 {
        u128::from(self.modulus()).pow(self.rounds as u32)
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self == other
    }
}

/// Maps universe element `u` to its `(row, column)` cell: `t = u / (n/T)`, `i = u mod (n/T)`.
pub fn partition_universe(u: usize, params: &ProtocolParams) -> Result<(usize, usize), ProtocolError> {
    if u >= params.n {
        return Err(ProtocolError::OutOfRange { u, n: params.n });
    }
    let rows = params.rows();
    Ok((u % rows, u / rows))
}

/// One interpolated 0/1 indicator polynomial per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorPolys {
    pub polys: Vec<Polynomial>,
}

impl IndicatorPolys {
    pub fn eval_all(&self, x: Fe) -> Vec<Fe> {
        self.polys.iter().map(|p| p.eval(x)).collect()
    }
}

fn check_universe(set: &ClauseSet, params: &ProtocolParams) -> Result<(), ProtocolError> {
    if set.universe_size() != params.n {
        return Err(ProtocolError::UniverseMismatch { expected: params.n, found: set.universe_size() });
    }
    Ok(())
}

pub fn build_indicator_polys(set: &ClauseSet, params: &ProtocolParams) -> Result<IndicatorPolys, ProtocolError> {
    check_universe(set, params)?;
    let rows = params.rows();
    let polys = (0..params.columns)
        .map(|t| {
            (0..rows)
                .filter(|&i| set.contains(t * rows + i))
                .try_fold(Polynomial::zero(params.field), |acc, i| acc.add(&params.basis[i]))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IndicatorPolys { polys })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MerlinMessage {
    pub phi: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BobMessage {
    pub values: Vec<Fe>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

/// Honest Merlin: `Phi = sum_t Psi_{A,t} * Psi_{B,t}`.
pub fn merlin_message(
    set_a: &ClauseSet,
    set_b: &ClauseSet,
    params: &ProtocolParams,
) -> Result<MerlinMessage, ProtocolError> {
    let pa = build_indicator_polys(set_a, params)?;
    let pb = build_indicator_polys(set_b, params)?;
    let mut phi = Polynomial::zero(params.field);
    for (a, b) in pa.polys.iter().zip(&pb.polys) {
        phi = phi.add(&a.mul(b)?)?;
    }
    Ok(MerlinMessage { phi })
}

/// Bob's column polynomials evaluated at the shared random point.
pub fn bob_message(set_b: &ClauseSet, ell: Fe, params: &ProtocolParams) -> Result<BobMessage, ProtocolError> {
    let pb = build_indicator_polys(set_b, params)?;
    Ok(BobMessage { values: pb.eval_all(params.field.elem(ell.0)) })
}

/// Alice's side of the protocol with Merlin's message already fixed.
///
/// The randomness-independent checks (degree bound and vanishing on every
/// node) are evaluated once at construction.
#[derive(Debug, Clone)]
pub struct AliceCheck {
    params: ProtocolParams,
    own: IndicatorPolys,
    phi: Polynomial,
    passes_fixed_checks: bool,
}

impl AliceCheck {
    pub fn new(
        merlin: &MerlinMessage,
        set_a: &ClauseSet,
        params: &ProtocolParams,
    ) -> Result<Self, ProtocolError> {
        if merlin.phi.field() != params.field {
            return Err(FieldError::FieldMismatch(merlin.phi.field().modulus(), params.modulus()).into());
        }
        let own = build_indicator_polys(set_a, params)?;
        let degree_ok = merlin.phi.degree().is_none_or(|d| d <= params.merlin_degree_bound());
        let vanishes = (0..params.rows() as u64).all(|i| merlin.phi.eval(Fe(i)).0 == 0);
        Ok(Self {
            params: params.clone(),
            own,
            phi: merlin.phi.clone(),
            passes_fixed_checks: degree_ok && vanishes,
        })
    }

    /// Degree bound and `Phi(i) = 0` on every node.
    pub fn passes_fixed_checks(&self) -> bool {
        self.passes_fixed_checks
    }

    /// The linear condition on Bob's values at `ell`: accept iff
    /// `sum_t coeffs[t] * bob[t] == rhs`. `None` when the fixed checks fail.
    pub fn row_constraint(&self, ell: Fe) -> Option<(Vec<Fe>, Fe)> {
        if !self.passes_fixed_checks {
            return None;
        }
        Some((self.own.eval_all(ell), self.phi.eval(ell)))
    }

    pub fn verdict(&self, ell: Fe, bob: &BobMessage) -> Result<Verdict, ProtocolError> {
        if bob.values.len() != self.params.columns {
            return Err(ProtocolError::ShapeMismatch { expected: self.params.columns, found: bob.values.len() });
        }
        let Some((coeffs, rhs)) = self.row_constraint(self.params.field.elem(ell.0)) else {
            return Ok(Verdict::Reject);
        };
        let f = self.params.field;
        let sum = coeffs
            .iter()
            .zip(&bob.values)
            .fold(Fe(0), |acc, (&c, &b)| f.add(acc, f.mul(c, f.elem(b.0))));
        Ok(if sum == rhs { Verdict::Accept } else { Verdict::Reject })
    }
}

pub fn alice_verdict(
    merlin: &MerlinMessage,
    set_a: &ClauseSet,
    ell: Fe,
    bob: &BobMessage,
    params: &ProtocolParams,
) -> Result<Verdict, ProtocolError> {
    AliceCheck::new(merlin, set_a, params)?.verdict(ell, bob)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub params: ProtocolParams,
    pub merlin: MerlinMessage,
    pub randomness: Vec<Fe>,
    pub bob: Vec<BobMessage>,
    pub round_verdicts: Vec<Verdict>,
    pub verdict: Verdict,
    pub reject_round: Option<usize>,
}

impl Transcript {
    /// Line-oriented log: a header, Merlin's coefficients, one line per round, the verdict.
    pub fn to_log(&self) -> String {
        let p = &self.params;
        let mut out = format!(
            "protocol n={} T={} q={} R={}\n",
            p.universe(),
            p.columns(),
            p.modulus(),
            p.rounds()
        );
        let coeffs: Vec<String> = self.merlin.phi.coeffs().iter().map(|c| c.to_string()).collect();
        writeln!(out, "merlin {}", if coeffs.is_empty() { "0".into() } else { coeffs.join(" ") }).unwrap();
        for (r, ((ell, bob), v)) in self.randomness.iter().zip(&self.bob).zip(&self.round_verdicts).enumerate() {
            let vals: Vec<String> = bob.values.iter().map(|x| x.to_string()).collect();
            writeln!(out, "round {r} ell={ell} bob={} {v}", vals.join(",")).unwrap();
        }
        writeln!(out, "verdict {}", self.verdict).unwrap();
        out
    }
}

/// Runs all `R` rounds against a fixed Merlin message with honest Bob.
pub fn run_protocol(
    set_a: &ClauseSet,
    set_b: &ClauseSet,
    merlin: &MerlinMessage,
    randomness: &[Fe],
    params: &ProtocolParams,
) -> Result<Transcript, ProtocolError> {
    if randomness.len() != params.rounds {
        return Err(ProtocolError::ShapeMismatch { expected: params.rounds, found: randomness.len() });
    }
    let alice = AliceCheck::new(merlin, set_a, params)?;
    let bob_polys = build_indicator_polys(set_b, params)?;
    let mut bob = Vec::with_capacity(params.rounds);
    let mut round_verdicts = Vec::with_capacity(params.rounds);
    let randomness: Vec<Fe> = randomness.iter().map(|x| params.field.elem(x.0)).collect();
    for &ell in &randomness {
        let msg = BobMessage { values: bob_polys.eval_all(ell) };
        round_verdicts.push(alice.verdict(ell, &msg)?);
        bob.push(msg);
    }
    let reject_round = round_verdicts.iter().position(|&v| v == Verdict::Reject);
    Ok(Transcript {
        params: params.clone(),
        merlin: merlin.clone(),
        randomness,
        bob,
        round_verdicts,
        verdict: if reject_round.is_none() { Verdict::Accept } else { Verdict::Reject },
        reject_round,
    })
}

/// An exact probability `accepting / total`, compared by cross-multiplication.
#[derive(Debug, Clone, Copy)]
pub struct Probability {
    pub accepting: u64,
    pub total: u64,
}

impl Probability {
    pub fn new(accepting: u64, total: u64) -> Self {
        assert!(total > 0);
        Self { accepting, total }
    }

    pub fn one() -> Self {
        Self::new(1, 1)
    }

    pub fn pow(&self, e: u32) -> Self {
        Self::new(self.accepting.pow(e), self.total.pow(e))
    }

    pub fn as_f64(&self) -> f64 {
        self.accepting as f64 / self.total as f64
    }
}

impl PartialEq for Probability {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Probability {}

impl PartialOrd for Probability {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Probability {
    fn cmp(&self, other: &Self) -> Ordering {
        (u128::from(self.accepting) * u128::from(other.total))
            .cmp(&(u128::from(other.accepting) * u128::from(self.total)))
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.accepting, self.total)
    }
}

/// Single-round verdict against honest Bob for every `l` in F_q.
pub fn round_acceptance_table(
    set_a: &ClauseSet,
    set_b: &ClauseSet,
    merlin: &MerlinMessage,
    params: &ProtocolParams,
) -> Result<Vec<bool>, ProtocolError> {
    let alice = AliceCheck::new(merlin, set_a, params)?;
    let bob_polys = build_indicator_polys(set_b, params)?;
    params
        .field
        .elements()
        .map(|ell| {
            let msg = BobMessage { values: bob_polys.eval_all(ell) };
            Ok(alice.verdict(ell, &msg)? == Verdict::Accept)
        })
        .collect()
}

/// Counts accepting randomness tuples over all of `F_q^R`.
pub fn exact_accept_probability(
    set_a: &ClauseSet,
    set_b: &ClauseSet,
    merlin: &MerlinMessage,
    params: &ProtocolParams,
) -> Result<Probability, ProtocolError> {
    let space = params.randomness_space();
    if space > u128::from(MAX_RANDOMNESS_SPACE) {
        return Err(ProtocolError::EnumerationTooLarge(space));
    }
    let table = round_acceptance_table(set_a, set_b, merlin, params)?;
    let q = params.modulus();
    let mut accepting = 0u64;
    for tuple in 0..space as u64 {
        let mut rest = tuple;
        let mut ok = true;
        for _ in 0..params.rounds {
            if !table[(rest % q) as usize] {
                ok = false;
                break;
            }
            rest /= q;
        }
        accepting += u64::from(ok);
    }
    Ok(Probability::new(accepting, space as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommunicationCost {
    pub merlin_bits: u64,
    pub coin_bits: u64,
    pub bob_bits: u64,
}

pub fn communication_cost(params: &ProtocolParams) -> CommunicationCost {
    let b = params.field.element_bits();
    let coefficients = 2 * params.rows() as u64 - 1;
    CommunicationCost {
        merlin_bits: coefficients * b,
        coin_bits: params.rounds as u64 * b,
        bob_bits: (params.rounds * params.columns) as u64 * b,
    }
}
