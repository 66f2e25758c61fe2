//! Brute-force optima for every instance kind and the gap verifier.
//!
//! The scans here recompute objectives with their own loops instead of the
//! scoring helpers the generators use.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::cnf::{CnfError, CnfFormula};
use crate::envelope::{Document, Objective, ReducedInstance};
use crate::gadget_diam::ProductPoint;
use crate::gadget_ip::{closest_pair_via_index, IpError, LinearScanIndex};
use crate::gadget_lcs::{lcs, lcs_distinct};
use crate::gadget_regex::{min_hamming, RegexError};
use crate::pcp::AliceVector;

/// Largest number of vectors per side the scans accept.
pub const MAX_SIDE: usize = 4096;
/// Longest string the quadratic LCS program is used on.
pub const MAX_DP_LEN: usize = 4096;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("{side} side has {count} vectors; the scan accepts at most {MAX_SIDE}")]
    TooLarge { side: &'static str, count: usize },
    #[error("instance has no vectors on side {0}")]
    Empty(&'static str),
    #[error("instance carries no provenance; gap verification needs it")]
    MissingProvenance,
    #[error("instance was built from a different formula")]
    FormulaMismatch,
    #[error("{0} is not supported for this instance kind")]
    Unsupported(&'static str),
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Ip(#[from] IpError),
    #[error(transparent)]
    Regex(#[from] RegexError),
}

/// Optimal value with the witness pair; for regular expressions the first
/// index is always 0 (the single expression) and the second is the string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub value: i64,
    pub witness: (usize, usize),
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveOptions {
    /// Route Max-IP style instances through the bucketing reduction with this exponent.
    pub bucket_exponent: Option<f64>,
}

fn guard(side: &'static str, count: usize) -> Result<(), OracleError> {
    if count == 0 {
        return Err(OracleError::Empty(side));
    }
    if count > MAX_SIDE {
        return Err(OracleError::TooLarge { side, count });
    }
    Ok(())
}

/// Maximises `f(i, j)` over the grid, first pair in row-major order on ties.
fn scan_max(na: usize, nb: usize, f: impl Fn(usize, usize) -> i64 + Sync) -> Solution {
    let rows: Vec<(i64, usize)> = (0..na)
        .into_par_iter()
        .map(|i| {
            let mut best = (i64::MIN, 0);
            for j in 0..nb {
                let v = f(i, j);
                if v > best.0 {
                    best = (v, j);
                }
            }
            best
        })
        .collect();
    let mut out = Solution { value: i64::MIN, witness: (0, 0) };
    for (i, (v, j)) in rows.into_iter().enumerate() {
        if v > out.value {
            out = Solution { value: v, witness: (i, j) };
        }
    }
    out
}

fn good_rows(a: &AliceVector, b: &[u32]) -> i64 {
    let mut count = 0;
    for (ell, &sym) in b.iter().enumerate() {
        let hit = match a {
            AliceVector::Rejecting { .. } => false,
            AliceVector::Dense { columns, cells, .. } => cells[ell * columns..(ell + 1) * columns].contains(&(sym as i32)),
            _ => a.entry(ell, sym as usize) == Some(sym),
        };
        count += i64::from(hit);
    }
    count
}

fn overlap(a: &BitSet, b: &BitSet) -> i64 {
    b.iter().filter(|&i| a.contains(i)).count() as i64
}

fn dot(a: &[i8], b: &[i8]) -> i64 {
    let mut s = 0i64;
    for k in 0..a.len() {
        s += i64::from(a[k]) * i64::from(b[k]);
    }
    s
}

fn squared_distance(p: &ProductPoint, r: &ProductPoint) -> i64 {
    let mut total = 0i64;
    for ell in 0..p.rows {
        let mut m = 0i64;
        for c in 0..p.cols {
            let d = (i64::from(p.coords[ell * p.cols + c]) - i64::from(r.coords[ell * p.cols + c])).abs();
            m = m.max(d);
        }
        total += m * m;
    }
    total
}

fn lcs_value(x: &[u32], y: &[u32]) -> i64 {
    if x.len() <= MAX_DP_LEN && y.len() <= MAX_DP_LEN {
        lcs(x, y) as i64
    } else {
        lcs_distinct(x, y) as i64
    }
}

fn bucketed<V: Sync>(a: &[V], b: &[V], x: f64, obj: impl Fn(&V, &V) -> i64 + Copy) -> Result<Solution, OracleError> {
    let best = closest_pair_via_index(a, b, LinearScanIndex::build, |idx, q| idx.query(q, obj), x)?;
    Ok(Solution { value: best.value, witness: (best.a, best.b) })
}

/// Exact optimum of the instance's objective (max except for regular expressions, which minimise).
pub fn solve(inst: &ReducedInstance, opts: SolveOptions) -> Result<Solution, OracleError> {
    let (na, nb) = match inst {
        ReducedInstance::PcpVectors(p) => (p.a.len(), p.b.len()),
        ReducedInstance::Subset(s) => (s.a_sets.len(), s.b_sets.len()),
        ReducedInstance::MaxIp(m) => (m.a.len(), m.b.len()),
        ReducedInstance::SignedMaxIp(s) => (s.a.len(), s.b.len()),
        ReducedInstance::Lcs(l) => (l.x.len(), l.y.len()),
        ReducedInstance::Regex(r) => (1, r.strings.len()),
        ReducedInstance::Diameter(d) => (d.points.len(), d.points.len()),
    };
    guard("A", na)?;
    guard("B", nb)?;
    if opts.bucket_exponent.is_some() && !matches!(inst, ReducedInstance::MaxIp(_) | ReducedInstance::SignedMaxIp(_) | ReducedInstance::Subset(_)) {
        return Err(OracleError::Unsupported("bucketing"));
    }
    Ok(match inst {
        ReducedInstance::PcpVectors(p) => scan_max(na, nb, |i, j| good_rows(&p.a[i], &p.b[j])),
        ReducedInstance::Subset(s) => match opts.bucket_exponent {
            Some(x) => bucketed(&s.a_sets, &s.b_sets, x, overlap)?,
            None => scan_max(na, nb, |i, j| overlap(&s.a_sets[i], &s.b_sets[j])),
        },
        ReducedInstance::MaxIp(m) => match opts.bucket_exponent {
            Some(x) => bucketed(&m.a, &m.b, x, overlap)?,
            None => scan_max(na, nb, |i, j| overlap(&m.a[i], &m.b[j])),
        },
        ReducedInstance::SignedMaxIp(s) => match opts.bucket_exponent {
            Some(x) => bucketed(&s.a, &s.b, x, |u: &Vec<i8>, v: &Vec<i8>| dot(u, v).abs())?,
            None => scan_max(na, nb, |i, j| dot(&s.a[i], &s.b[j]).abs()),
        },
        ReducedInstance::Lcs(l) => scan_max(na, nb, |i, j| lcs_value(&l.x[i], &l.y[j])),
        ReducedInstance::Regex(r) => {
            let costs = r.strings.par_iter().map(|y| min_hamming(&r.expr, y)).collect::<Result<Vec<_>, _>>()?;
            let (j, &c) = costs.iter().enumerate().min_by_key(|&(j, &c)| (c, j)).expect("guarded nonempty");
            Solution { value: c as i64, witness: (0, j) }
        }
        ReducedInstance::Diameter(d) => {
            if d.points.len() == 1 {
                Solution { value: 0, witness: (0, 0) }
            } else {
                scan_max(na, nb, |i, j| if j > i { squared_distance(&d.points[i], &d.points[j]) } else { i64::MIN })
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GapVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapReport {
    pub kind: String,
    pub measure: String,
    pub objective: Objective,
    pub satisfiable: bool,
    pub satisfying_assignments: usize,
    /// `completeness` for satisfiable sources, `soundness` otherwise.
    pub side: String,
    pub value: i64,
    pub witness: (usize, usize),
    pub completeness: i64,
    pub soundness: i64,
    pub promised_bound: i64,
    pub verdict: GapVerdict,
}

impl GapReport {
    pub fn passed(&self) -> bool {
        self.verdict == GapVerdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let rel = match (self.objective, self.satisfiable) {
            (Objective::Max, true) | (Objective::Min, false) => ">=",
            _ => "<=",
        };
        let rows = [
            ("kind", self.kind.clone()),
            ("measure", format!("{} ({})", self.measure, if self.objective == Objective::Max { "max" } else { "min" })),
            ("source", format!("{} ({} satisfying assignments)", if self.satisfiable { "satisfiable" } else { "unsatisfiable" }, self.satisfying_assignments)),
            ("optimum", self.value.to_string()),
            ("witness", format!("({}, {})", self.witness.0, self.witness.1)),
            ("promise", format!("{} {rel} {} [{} side]", self.measure, self.promised_bound, self.side)),
            ("verdict", if self.passed() { "PASS".into() } else { "FAIL".into() }),
        ];
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&format!("{k:<10} {v}\n"));
        }
        out
    }
}

impl fmt::Display for GapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}

/// Decides the source's satisfiability by enumeration and checks the
/// document's optimum lands on the promised side of its gap. The instance
/// must already have passed validation.
pub fn verify_gap(doc: &Document, inst: &ReducedInstance, formula: &CnfFormula) -> Result<GapReport, OracleError> {
    let prov = doc.provenance().ok_or(OracleError::MissingProvenance)?;
    if !prov.source.matches(formula) {
        return Err(OracleError::FormulaMismatch);
    }
    let sat = formula.enumerate_satisfying()?;
    let sol = solve(inst, SolveOptions::default())?;
    let gap = doc.expected_gap();
    let satisfiable = !sat.is_empty();
    let (bound, ok) = match (gap.objective, satisfiable) {
        (Objective::Max, true) => (gap.completeness, sol.value >= gap.completeness),
        (Objective::Max, false) => (gap.soundness, sol.value <= gap.soundness),
        (Objective::Min, true) => (gap.completeness, sol.value <= gap.completeness),
        (Objective::Min, false) => (gap.soundness, sol.value >= gap.soundness),
    };
    Ok(GapReport {
        kind: doc.kind().to_string(),
        measure: gap.measure.clone(),
        objective: gap.objective,
        satisfiable,
        satisfying_assignments: sat.len(),
        side: if satisfiable { "completeness" } else { "soundness" }.into(),
        value: sol.value,
        witness: sol.witness,
        completeness: gap.completeness,
        soundness: gap.soundness,
        promised_bound: bound,
        verdict: if ok { GapVerdict::Pass } else { GapVerdict::Fail },
    })
}
