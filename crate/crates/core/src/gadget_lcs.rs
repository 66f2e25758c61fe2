//! Max-IP to bichromatic LCS over permutations.
//!
//! Coordinate `i` of a vector becomes a block over its own sub-alphabet of
//! `|F|^2` symbols. A 1-bit writes the transpose permutation, a 0-bit writes
//! the permutation `(i, j) -> (j, i + p(j))` for the vector's polynomial `p`.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng as _;
use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::ff::{is_prime, Fe, PrimeField, Polynomial};
use crate::gadget_ip::{BestPair, MaxIpInstance};
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LcsError {
    #[error("block field size {0} is not prime")]
    NotPrime(u64),
    #[error("degree bound must be at least 1")]
    ZeroDegree,
    #[error("only {available} polynomials available for {needed} vectors")]
    InsufficientPolynomials { available: u128, needed: usize },
    #[error("gap guard violated: |F|^2 = {f2} <= (2|F|-1) * d * dim = {bound}")]
    GapGuard { f2: u128, bound: u128 },
    #[error("string alphabet of {0} symbols does not fit in 32 bits")]
    AlphabetOverflow(u128),
    #[error("source vector dimension {got} differs from {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid string {index}: {msg}")]
    NotPermutation { index: usize, msg: String },
    #[error("instance has no strings on side {0}")]
    EmptySide(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGadgetParams {
    pub field: PrimeField,
    pub degree: usize,
    pub vectors: usize,
    pub dim: usize,
}

fn pow_sat(base: u64, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(u128::from(base));
    }
    acc
}

impl PermGadgetParams {
    /// Validates polynomial supply and the gap-dominance guard.
    pub fn new(block_field: u64, degree: usize, vectors: usize, dim: usize) -> Result<Self, LcsError> {
        if !is_prime(block_field) {
            return Err(LcsError::NotPrime(block_field));
        }
        if degree == 0 {
            return Err(LcsError::ZeroDegree);
        }
        let f = u128::from(block_field);
        let available = pow_sat(block_field, degree) - 1;
        if available < vectors as u128 {
            return Err(LcsError::InsufficientPolynomials { available, needed: vectors });
        }
        let bound = (2 * f - 1) * degree as u128 * dim as u128;
        if f * f <= bound {
            return Err(LcsError::GapGuard { f2: f * f, bound });
        }
        let total = f * f * dim as u128;
        if total > u128::from(u32::MAX) {
            return Err(LcsError::AlphabetOverflow(total));
        }
        let field = PrimeField::new(block_field).map_err(|_| LcsError::NotPrime(block_field))?;
        Ok(Self { field, degree, vectors, dim })
    }

    /// Smallest prime block field satisfying both guards for the given degree.
    pub fn auto(vectors: usize, dim: usize, degree: usize) -> Result<Self, LcsError> {
        if degree == 0 {
            return Err(LcsError::ZeroDegree);
        }
        let mut f = 2u64;
        loop {
            if is_prime(f) {
                match Self::new(f, degree, vectors, dim) {
                    Ok(p) => return Ok(p),
                    Err(LcsError::AlphabetOverflow(t)) => return Err(LcsError::AlphabetOverflow(t)),
                    Err(_) => {}
                }
            }
            f += 1;
        }
    }

    pub fn block_field(&self) -> u64 {
        self.field.modulus()
    }

    pub fn block_len(&self) -> usize {
        let f = self.block_field() as usize;
        f * f
    }

    pub fn string_len(&self) -> usize {
        self.block_len() * self.dim
    }
}

/// Symbols `a * |F| + b` of `pi_p(i, j) = (j, i + p(j))` over positions `(i, j)` in lexicographic order.
pub fn perm_from_poly(p: &Polynomial) -> Vec<u32> {
    let field = p.field();
    let f = field.modulus();
    let pj: Vec<u64> = (0..f).map(|j| p.eval(Fe(j)).0).collect();
    let mut out = Vec::with_capacity((f * f) as usize);
    for i in 0..f {
        for j in 0..f {
            let k = (i + pj[j as usize]) % f;
            out.push((j * f + k) as u32);
        }
    }
    out
}

/// Nonzero polynomials of degree at most `degree` with zero constant term,
/// one per vector, pairwise distinct. Drawn deterministically from `seed`.
pub fn assign_polynomials(params: &PermGadgetParams, seed: u64) -> Result<Vec<Polynomial>, LcsError> {
    let f = params.block_field();
    let d = params.degree;
    let available = pow_sat(f, d) - 1;
    if available < params.vectors as u128 {
        return Err(LcsError::InsufficientPolynomials { available, needed: params.vectors });
    }
    let mut r = rng::stream(seed, 0x1c5);
    let to_poly = |tail: &[u64]| {
        let mut c = vec![0u64];
        c.extend_from_slice(tail);
        Polynomial::from_u64s(params.field, &c)
    };
    let tails: Vec<Vec<u64>> = if available <= 4 * params.vectors as u128 {
        let mut all: Vec<Vec<u64>> = Vec::new();
        let mut cur = vec![0u64; d];
        loop {
            let mut pos = 0;
            while pos < d {
                cur[pos] += 1;
                if cur[pos] < f {
                    break;
                }
                cur[pos] = 0;
                pos += 1;
            }
            if pos == d {
                break;
            }
            all.push(cur.clone());
        }
        all.shuffle(&mut r);
        all.truncate(params.vectors);
        all
    } else {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(params.vectors);
        while out.len() < params.vectors {
            let tail: Vec<u64> = (0..d).map(|_| r.gen_range(0..f)).collect();
            if tail.iter().all(|&c| c == 0) || !seen.insert(tail.clone()) {
                continue;
            }
            out.push(tail);
        }
        out
    };
    Ok(tails.iter().map(|t| to_poly(t)).collect())
}

/// Block `i` is the transpose if `u_i = 1`, otherwise `pi_p`, shifted into block `i`'s sub-alphabet.
pub fn encode_vector(u: &BitSet, p: &Polynomial, params: &PermGadgetParams) -> Result<Vec<u32>, LcsError> {
    if u.len() != params.dim {
        return Err(LcsError::DimensionMismatch { expected: params.dim, got: u.len() });
    }
    let one = perm_from_poly(&Polynomial::zero(params.field));
    let zero = perm_from_poly(p);
    let block = params.block_len() as u32;
    let mut out = Vec::with_capacity(params.string_len());
    for i in 0..params.dim {
        let src = if u.contains(i) { &one } else { &zero };
        let base = i as u32 * block;
        out.extend(src.iter().map(|&s| base + s));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcsInstance {
    pub block_field: u64,
    pub degree: usize,
    pub dim: usize,
    pub x: Vec<Vec<u32>>,
    pub y: Vec<Vec<u32>>,
}

impl LcsInstance {
    pub fn block_len(&self) -> usize {
        (self.block_field * self.block_field) as usize
    }

    /// Every string must list each symbol of each block's sub-alphabet exactly once, in block order.
    pub fn validate(&self) -> Result<(), LcsError> {
        if !is_prime(self.block_field) {
            return Err(LcsError::NotPrime(self.block_field));
        }
        let block = self.block_len();
        let len = block * self.dim;
        for (index, s) in self.x.iter().chain(&self.y).enumerate() {
            if s.len() != len {
                return Err(LcsError::NotPermutation { index, msg: format!("length {} != {len}", s.len()) });
            }
            let mut seen = vec![false; len];
            for (pos, &sym) in s.iter().enumerate() {
                let sym = sym as usize;
                if sym >= len || sym / block != pos / block {
                    return Err(LcsError::NotPermutation { index, msg: format!("symbol {sym} at position {pos} outside its block") });
                }
                if std::mem::replace(&mut seen[sym], true) {
                    return Err(LcsError::NotPermutation { index, msg: format!("symbol {sym} repeated") });
                }
            }
        }
        Ok(())
    }
}

/// Encodes A into `x` and B into `y`, with vector `v` of the concatenated list getting polynomial `v`.
pub fn build_lcs_instance(ip: &MaxIpInstance, params: &PermGadgetParams, seed: u64) -> Result<LcsInstance, LcsError> {
    if params.vectors < ip.a.len() + ip.b.len() {
        return Err(LcsError::InsufficientPolynomials {
            available: params.vectors as u128,
            needed: ip.a.len() + ip.b.len(),
        });
    }
    let polys = assign_polynomials(params, seed)?;
    let encode_all = |vs: &[BitSet], off: usize| -> Result<Vec<Vec<u32>>, LcsError> {
        vs.par_iter().enumerate().map(|(i, v)| encode_vector(v, &polys[off + i], params)).collect()
    };
    Ok(LcsInstance {
        block_field: params.block_field(),
        degree: params.degree,
        dim: params.dim,
        x: encode_all(&ip.a, 0)?,
        y: encode_all(&ip.b, ip.a.len())?,
    })
}

/// Lower bound on the best LCS when some pair has inner product `ip_value`.
pub fn completeness_lcs(params: &PermGadgetParams, ip_value: u64) -> u64 {
    ip_value * params.block_len() as u64
}

/// Upper bound on every LCS when all inner products are at most `ip_bound`.
pub fn soundness_lcs(params: &PermGadgetParams, ip_bound: u64) -> u64 {
    let f = params.block_field();
    let s = ip_bound.min(params.dim as u64);
    s * f * f + (params.dim as u64 - s) * (2 * f - 1) * params.degree as u64
}

/// Classic quadratic dynamic program.
pub fn lcs<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    let mut prev = vec![0usize; y.len() + 1];
    let mut cur = vec![0usize; y.len() + 1];
    for a in x {
        for (j, b) in y.iter().enumerate() {
            cur[j + 1] = if a == b { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[y.len()]
}

/// LCS of two strings without repeated symbols, as the longest increasing
/// run of `y`-positions read along `x`.
pub fn lcs_distinct(x: &[u32], y: &[u32]) -> usize {
    let max = x.iter().chain(y).copied().max().map_or(0, |m| m as usize + 1);
    let mut pos = vec![u32::MAX; max];
    for (i, &s) in y.iter().enumerate() {
        pos[s as usize] = i as u32;
    }
    let mut tails: Vec<u32> = Vec::new();
    for &s in x {
        let p = pos[s as usize];
        if p == u32::MAX {
            continue;
        }
        let k = tails.partition_point(|&t| t < p);
        if k == tails.len() {
            tails.push(p);
        } else {
            tails[k] = p;
        }
    }
    tails.len()
}

/// Pair maximising the LCS, smallest indices on ties.
pub fn brute_force_max_lcs(inst: &LcsInstance) -> Result<BestPair, LcsError> {
    inst.validate()?;
    if inst.x.is_empty() {
        return Err(LcsError::EmptySide("X"));
    }
    if inst.y.is_empty() {
        return Err(LcsError::EmptySide("Y"));
    }
    let pairs: Vec<(usize, usize)> = (0..inst.x.len()).flat_map(|i| (0..inst.y.len()).map(move |j| (i, j))).collect();
    let values: Vec<i64> = pairs.par_iter().map(|&(i, j)| lcs_distinct(&inst.x[i], &inst.y[j]) as i64).collect();
    let mut best = BestPair { a: 0, b: 0, value: values[0] };
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        if v > best.value {
            best = BestPair { a: i, b: j, value: v };
        }
    }
    Ok(best)
}

/// Every polynomial of degree at most `degree` with zero constant term, zero included.
pub fn zero_constant_polys(field: PrimeField, degree: usize) -> Vec<Polynomial> {
    let f = field.modulus();
    let count = f.pow(degree as u32);
    (0..count)
        .map(|mut idx| {
            let mut c = vec![0u64];
            for _ in 0..degree {
                c.push(idx % f);
                idx /= f;
            }
            Polynomial::from_u64s(field, &c)
        })
        .collect()
}
