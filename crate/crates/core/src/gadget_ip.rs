//! PCP-Vectors to Subset Query / Max-IP, the `{-1, 1}` variant, and the
//! bucketing reduction from the offline pair problem to an exact index.

use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::pcp::PcpVectorsInstance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IpError {
    #[error("instance has no vectors on side {0}")]
    EmptySide(&'static str),
    #[error("vectors have mismatched dimensions")]
    DimensionMismatch,
    #[error("bucket exponent {0} outside (0, 1]")]
    BadExponent(f64),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

/// Set families over the universe `L x Sigma`, element `(l, s)` at index `l * |Sigma| + s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPairInstance {
    pub l: usize,
    pub sigma: usize,
    pub a_sets: Vec<BitSet>,
    pub b_sets: Vec<BitSet>,
}

impl SetPairInstance {
    pub fn universe_size(&self) -> usize {
        self.l * self.sigma
    }

    /// Common size `k` of every B set (equals `L`).
    pub fn k_uniform(&self) -> usize {
        self.l
    }

    pub fn validate(&self) -> Result<(), IpError> {
        let u = self.universe_size();
        if self.a_sets.iter().chain(&self.b_sets).any(|s| s.len() != u) {
            return Err(IpError::Invalid(format!("set universe differs from L * |Sigma| = {u}")));
        }
        for (j, b) in self.b_sets.iter().enumerate() {
            if b.count() != self.l {
                return Err(IpError::Invalid(format!("B set {j} has size {}, expected {}", b.count(), self.l)));
            }
            for ell in 0..self.l {
                let in_row = (0..self.sigma).filter(|&s| b.contains(ell * self.sigma + s)).count();
                if in_row != 1 {
                    return Err(IpError::Invalid(format!("B set {j} has {in_row} elements in row {ell}")));
                }
            }
        }
        Ok(())
    }
}

/// `{0,1}` vectors stored as bitsets; inner product is intersection size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxIpInstance {
    pub dim: usize,
    pub a: Vec<BitSet>,
    pub b: Vec<BitSet>,
}

impl MaxIpInstance {
    pub fn validate(&self) -> Result<(), IpError> {
        if self.a.iter().chain(&self.b).any(|v| v.len() != self.dim) {
            return Err(IpError::DimensionMismatch);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedVectorInstance {
    pub dim: usize,
    pub a: Vec<Vec<i8>>,
    pub b: Vec<Vec<i8>>,
}

impl SignedVectorInstance {
    pub fn validate(&self) -> Result<(), IpError> {
        if !self.dim.is_multiple_of(4) {
            return Err(IpError::Invalid(format!("dimension {} not divisible by 4", self.dim)));
        }
        for v in self.a.iter().chain(&self.b) {
            if v.len() != self.dim {
                return Err(IpError::DimensionMismatch);
            }
            if v.iter().any(|&x| x != 1 && x != -1) {
                return Err(IpError::Invalid("entry outside {-1, 1}".into()));
            }
        }
        Ok(())
    }
}

pub const GAMMA_ONE: [i8; 4] = [1, 1, 1, 1];
pub const ALPHA_ZERO: [i8; 4] = [1, 1, -1, -1];
pub const BETA_ZERO: [i8; 4] = [1, -1, 1, -1];

/// `(l, s)` is in the A set iff some column of row `l` holds `s`; the B set is `{(l, b_l)}`.
pub fn to_subset_instance(pv: &PcpVectorsInstance) -> SetPairInstance {
    let (l, sigma) = (pv.l, pv.sigma_size());
    let a_sets = pv
        .a
        .par_iter()
        .map(|a| {
            let mut set = BitSet::new(l * sigma);
            if !a.is_rejecting() {
                for ell in 0..l {
                    for s in a.row_symbols(ell) {
                        set.insert(ell * sigma + s as usize);
                    }
                }
            }
            set
        })
        .collect();
    let b_sets = pv
        .b
        .iter()
        .map(|b| BitSet::from_indices(l * sigma, b.iter().enumerate().map(|(ell, &s)| ell * sigma + s as usize)))
        .collect();
    SetPairInstance { l, sigma, a_sets, b_sets }
}

pub fn to_max_ip(sp: &SetPairInstance) -> MaxIpInstance {
    MaxIpInstance { dim: sp.universe_size(), a: sp.a_sets.clone(), b: sp.b_sets.clone() }
}

/// Drops coordinates that are zero in every A vector or in every B vector.
/// Every inner product is unchanged. Returns the kept original coordinates.
pub fn compact_support(ip: &MaxIpInstance) -> (MaxIpInstance, Vec<usize>) {
    let union = |vs: &[BitSet]| {
        let mut u = BitSet::new(ip.dim);
        for v in vs {
            for i in v.iter() {
                u.insert(i);
            }
        }
        u
    };
    let (ua, ub) = (union(&ip.a), union(&ip.b));
    let kept: Vec<usize> = (0..ip.dim).filter(|&i| ua.contains(i) && ub.contains(i)).collect();
    let project = |v: &BitSet| BitSet::from_indices(kept.len(), kept.iter().enumerate().filter(|(_, &c)| v.contains(c)).map(|(i, _)| i));
    let out = MaxIpInstance {
        dim: kept.len(),
        a: ip.a.iter().map(project).collect(),
        b: ip.b.iter().map(project).collect(),
    };
    (out, kept)
}

/// Coordinate-wise gadget substitution: 1 becomes `GAMMA_ONE`, 0 becomes
/// `ALPHA_ZERO` on the A side and `BETA_ZERO` on the B side.
pub fn to_signed(ip: &MaxIpInstance) -> SignedVectorInstance {
    let expand = |v: &BitSet, zero: &[i8; 4]| -> Vec<i8> {
        (0..ip.dim)
            .flat_map(|i| if v.contains(i) { GAMMA_ONE } else { *zero })
            .collect()
    };
    SignedVectorInstance {
        dim: 4 * ip.dim,
        a: ip.a.iter().map(|v| expand(v, &ALPHA_ZERO)).collect(),
        b: ip.b.iter().map(|v| expand(v, &BETA_ZERO)).collect(),
    }
}

pub fn signed_dot(x: &[i8], y: &[i8]) -> i64 {
    x.iter().zip(y).map(|(&a, &b)| i64::from(a) * i64::from(b)).sum()
}

/// Best pair found by a scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BestPair {
    pub a: usize,
    pub b: usize,
    pub value: i64,
}

fn better(x: BestPair, y: BestPair) -> BestPair {
    if y.value > x.value || (y.value == x.value && (y.a, y.b) < (x.a, x.b)) {
        y
    } else {
        x
    }
}

/// Quadratic scan maximising `objective(a, b)`; ties go to the smallest `(a, b)` index pair.
pub fn brute_force_max_by<V: Sync>(
    a: &[V],
    b: &[V],
    objective: impl Fn(&V, &V) -> i64 + Sync,
) -> Result<BestPair, IpError> {
    if a.is_empty() {
        return Err(IpError::EmptySide("A"));
    }
    if b.is_empty() {
        return Err(IpError::EmptySide("B"));
    }
    let best = a
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            b.iter()
                .enumerate()
                .map(|(j, y)| BestPair { a: i, b: j, value: objective(x, y) })
                .reduce(better)
                .expect("B nonempty")
        })
        .reduce_with(better)
        .expect("A nonempty");
    Ok(best)
}

pub fn brute_force_max_ip(ip: &MaxIpInstance) -> Result<BestPair, IpError> {
    ip.validate()?;
    brute_force_max_by(&ip.a, &ip.b, |x, y| x.intersection_count(y) as i64)
}

/// Maximises `|a . b|`.
pub fn brute_force_max_abs_ip(sv: &SignedVectorInstance) -> Result<BestPair, IpError> {
    sv.validate()?;
    brute_force_max_by(&sv.a, &sv.b, |x, y| signed_dot(x, y).abs())
}

/// Exact index that scans its bucket linearly.
pub struct LinearScanIndex<'a, V> {
    offset: usize,
    vectors: &'a [V],
}

impl<'a, V> LinearScanIndex<'a, V> {
    pub fn build(vectors: &'a [V], offset: usize) -> Self {
        Self { offset, vectors }
    }

    /// Best `(global index, value)` in the bucket, smallest index on ties.
    pub fn query(&self, q: &V, objective: impl Fn(&V, &V) -> i64) -> Option<(usize, i64)> {
        let mut best: Option<(usize, i64)> = None;
        for (j, v) in self.vectors.iter().enumerate() {
            let val = objective(q, v);
            if best.is_none_or(|(_, bv)| val > bv) {
                best = Some((self.offset + j, val));
            }
        }
        best
    }
}

/// Splits B into `ceil(N^(1-x))` buckets, builds one index per bucket and
/// queries every A vector against each. Returns the global optimum.
pub fn closest_pair_via_index<'v, V, I>(
    a: &[V],
    b: &'v [V],
    index_builder: impl Fn(&'v [V], usize) -> I,
    query_fn: impl Fn(&I, &V) -> Option<(usize, i64)>,
    x: f64,
) -> Result<BestPair, IpError> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(IpError::BadExponent(x));
    }
    if a.is_empty() {
        return Err(IpError::EmptySide("A"));
    }
    if b.is_empty() {
        return Err(IpError::EmptySide("B"));
    }
    let n = b.len();
    let buckets = ((n as f64).powf(1.0 - x).ceil() as usize).clamp(1, n);
    let size = n.div_ceil(buckets);
    let mut best: Option<BestPair> = None;
    for (bi, chunk) in b.chunks(size).enumerate() {
        let index = index_builder(chunk, bi * size);
        for (i, q) in a.iter().enumerate() {
            if let Some((j, value)) = query_fn(&index, q) {
                let cand = BestPair { a: i, b: j, value };
                best = Some(best.map_or(cand, |cur| better(cur, cand)));
            }
        }
    }
    best.ok_or(IpError::EmptySide("B"))
}

/// Bucket count used by [`closest_pair_via_index`] for `n` B vectors.
pub fn bucket_count(n: usize, x: f64) -> usize {
    ((n as f64).powf(1.0 - x).ceil() as usize).clamp(1, n.max(1))
}
