//! PCP-Vectors to regular-expression closest pair over `{|, concatenation}`
//! expressions, with exact minimum Hamming distance and a binary embedding
//! through an error-correcting code.

use std::fmt::Write as _;

use rand::Rng as _;
use rayon::prelude::*;
use thiserror::Error;

use crate::ff::{is_prime, PrimeField, Polynomial};
use crate::pcp::PcpVectorsInstance;
use crate::rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegexError {
    #[error("parse error at offset {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("{0} node needs at least two children")]
    Arity(&'static str),
    #[error("alternatives have different language lengths {0} and {1}")]
    NonUniform(usize, usize),
    #[error("string length {got} differs from language length {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    SymbolRange { symbol: u32, alphabet: usize },
    #[error("instance has no vectors")]
    Empty,
    #[error("code parameter error: {0}")]
    Code(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegexAst {
    Literal(u32),
    Or(Vec<RegexAst>),
    Concat(Vec<RegexAst>),
}

fn or_of(mut children: Vec<RegexAst>) -> RegexAst {
    if children.len() == 1 {
        children.pop().expect("one child")
    } else {
        RegexAst::Or(children)
    }
}

fn concat_of(mut children: Vec<RegexAst>) -> RegexAst {
    if children.len() == 1 {
        children.pop().expect("one child")
    } else {
        RegexAst::Concat(children)
    }
}

impl RegexAst {
    /// Common length of every word in the language; fails on ragged alternatives.
    pub fn language_length(&self) -> Result<usize, RegexError> {
        match self {
            RegexAst::Literal(_) => Ok(1),
            RegexAst::Or(cs) => {
                if cs.len() < 2 {
                    return Err(RegexError::Arity("or"));
                }
                let first = cs[0].language_length()?;
                for c in &cs[1..] {
                    let l = c.language_length()?;
                    if l != first {
                        return Err(RegexError::NonUniform(first, l));
                    }
                }
                Ok(first)
            }
            RegexAst::Concat(cs) => {
                if cs.len() < 2 {
                    return Err(RegexError::Arity("concat"));
                }
                cs.iter().map(|c| c.language_length()).sum()
            }
        }
    }

    pub fn literal_count(&self) -> usize {
        match self {
            RegexAst::Literal(_) => 1,
            RegexAst::Or(cs) | RegexAst::Concat(cs) => cs.iter().map(|c| c.literal_count()).sum(),
        }
    }

    pub fn max_symbol(&self) -> Option<u32> {
        match self {
            RegexAst::Literal(s) => Some(*s),
            RegexAst::Or(cs) | RegexAst::Concat(cs) => cs.iter().filter_map(|c| c.max_symbol()).max(),
        }
    }

    /// Replaces every literal by the expression `f` returns for it.
    pub fn map_literals(&self, f: &impl Fn(u32) -> RegexAst) -> RegexAst {
        match self {
            RegexAst::Literal(s) => f(*s),
            RegexAst::Or(cs) => RegexAst::Or(cs.iter().map(|c| c.map_literals(f)).collect()),
            RegexAst::Concat(cs) => RegexAst::Concat(cs.iter().map(|c| c.map_literals(f)).collect()),
        }
    }
}

/// Literal used for rows of `a` where every entry is the bottom symbol.
pub fn sentinel_symbol(pv: &PcpVectorsInstance) -> u32 {
    pv.sigma_size() as u32
}

/// Or over `a` of the concatenation over rows of the alternatives `a[l][k]`.
/// Bottom entries are dropped; a row with no symbols becomes the sentinel
/// literal, which never matches a string drawn from the original alphabet.
pub fn build_regex(pv: &PcpVectorsInstance) -> Result<RegexAst, RegexError> {
    if pv.a.is_empty() {
        return Err(RegexError::Empty);
    }
    let sentinel = sentinel_symbol(pv);
    let branches: Vec<RegexAst> = pv
        .a
        .par_iter()
        .map(|a| {
            let rows = (0..pv.l)
                .map(|ell| {
                    let syms = if a.is_rejecting() { Vec::new() } else { a.row_symbols(ell) };
                    if syms.is_empty() {
                        RegexAst::Literal(sentinel)
                    } else {
                        or_of(syms.into_iter().map(RegexAst::Literal).collect())
                    }
                })
                .collect();
            concat_of(rows)
        })
        .collect();
    Ok(or_of(branches))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegexInstance {
    pub expr: RegexAst,
    pub strings: Vec<Vec<u32>>,
    pub alphabet: usize,
}

impl RegexInstance {
    /// Strings `y(b)` are the vectors `b` themselves; the alphabet includes the sentinel.
    pub fn from_pcp(pv: &PcpVectorsInstance) -> Result<Self, RegexError> {
        Ok(Self { expr: build_regex(pv)?, strings: pv.b.clone(), alphabet: pv.sigma_size() + 1 })
    }

    pub fn validate(&self) -> Result<usize, RegexError> {
        let m = self.expr.language_length()?;
        if let Some(s) = self.expr.max_symbol().filter(|&s| s as usize >= self.alphabet) {
            return Err(RegexError::SymbolRange { symbol: s, alphabet: self.alphabet });
        }
        for y in &self.strings {
            if y.len() != m {
                return Err(RegexError::LengthMismatch { expected: m, got: y.len() });
            }
            if let Some(&s) = y.iter().find(|&&s| s as usize >= self.alphabet) {
                return Err(RegexError::SymbolRange { symbol: s, alphabet: self.alphabet });
            }
        }
        Ok(m)
    }
}

/// Text form: literals are `#` followed by a decimal, alternatives are joined
/// by `|`, concatenation is juxtaposition and binds tighter. Nested nodes of
/// the same kind, and alternations inside a concatenation, are parenthesised.
pub fn serialize(ast: &RegexAst) -> String {
    let mut out = String::new();
    write_node(ast, &mut out);
    out
}

fn write_node(ast: &RegexAst, out: &mut String) {
    match ast {
        RegexAst::Literal(s) => {
            let _ = write!(out, "#{s}");
        }
        RegexAst::Or(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push('|');
                }
                write_grouped(c, matches!(c, RegexAst::Or(_)), out);
            }
        }
        RegexAst::Concat(cs) => {
            for c in cs {
                write_grouped(c, !matches!(c, RegexAst::Literal(_)), out);
            }
        }
    }
}

fn write_grouped(ast: &RegexAst, group: bool, out: &mut String) {
    if group {
        out.push('(');
        write_node(ast, out);
        out.push(')');
    } else {
        write_node(ast, out);
    }
}

pub fn parse(text: &str) -> Result<RegexAst, RegexError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let ast = p.alternation()?;
    if p.pos != p.s.len() {
        return Err(p.err("unexpected ')'"));
    }
    Ok(ast)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> RegexError {
        RegexError::Parse { offset: self.pos, msg: msg.to_string() }
    }

    fn alternation(&mut self) -> Result<RegexAst, RegexError> {
        let mut children = vec![self.concatenation()?];
        while self.s.get(self.pos) == Some(&b'|') {
            self.pos += 1;
            children.push(self.concatenation()?);
        }
        Ok(or_of(children))
    }

    fn concatenation(&mut self) -> Result<RegexAst, RegexError> {
        let mut children = Vec::new();
        while let Some(&c) = self.s.get(self.pos) {
            match c {
                b'#' => {
                    self.pos += 1;
                    let start = self.pos;
                    while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                        self.pos += 1;
                    }
                    if start == self.pos {
                        return Err(self.err("expected decimal literal after '#'"));
                    }
                    let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
                    let v = digits.parse::<u32>().map_err(|_| RegexError::Parse { offset: start, msg: "literal out of range".into() })?;
                    children.push(RegexAst::Literal(v));
                }
                b'(' => {
                    let open = self.pos;
                    self.pos += 1;
                    let inner = self.alternation()?;
                    if self.s.get(self.pos) != Some(&b')') {
                        return Err(RegexError::Parse { offset: open, msg: "unbalanced '('".into() });
                    }
                    self.pos += 1;
                    children.push(inner);
                }
                b'|' | b')' => break,
                _ => return Err(self.err("unexpected character")),
            }
        }
        if children.is_empty() {
            return Err(self.err("empty operand"));
        }
        Ok(concat_of(children))
    }
}

/// Exact minimum Hamming distance from `y` to a word of the language.
/// Each node sits at a single offset, so one bottom-up pass suffices.
pub fn min_hamming(ast: &RegexAst, y: &[u32]) -> Result<usize, RegexError> {
    let (len, cost) = eval(ast, y, 0)?;
    if len != y.len() {
        return Err(RegexError::LengthMismatch { expected: len, got: y.len() });
    }
    Ok(cost)
}

fn eval(ast: &RegexAst, y: &[u32], off: usize) -> Result<(usize, usize), RegexError> {
    match ast {
        RegexAst::Literal(s) => match y.get(off) {
            Some(c) => Ok((1, usize::from(c != s))),
            None => Err(RegexError::LengthMismatch { expected: off + 1, got: y.len() }),
        },
        RegexAst::Or(cs) => {
            let (len, mut best) = eval(&cs[0], y, off)?;
            for c in &cs[1..] {
                let (l, v) = eval(c, y, off)?;
                if l != len {
                    return Err(RegexError::NonUniform(len, l));
                }
                best = best.min(v);
            }
            Ok((len, best))
        }
        RegexAst::Concat(cs) => {
            let (mut len, mut cost) = (0, 0);
            for c in cs {
                let (l, v) = eval(c, y, off + len)?;
                len += l;
                cost += v;
            }
            Ok((len, cost))
        }
    }
}

/// Best string: smallest min-Hamming distance, smallest index on ties.
pub fn closest_string(inst: &RegexInstance) -> Result<(usize, usize), RegexError> {
    inst.validate()?;
    if inst.strings.is_empty() {
        return Err(RegexError::Empty);
    }
    let costs: Vec<usize> = inst.strings.par_iter().map(|y| min_hamming(&inst.expr, y)).collect::<Result<_, _>>()?;
    let (idx, &cost) = costs.iter().enumerate().min_by_key(|&(i, &c)| (c, i)).expect("nonempty");
    Ok((idx, cost))
}

/// Binary codewords, one per alphabet symbol, with a verified distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryCode {
    pub length: usize,
    pub words: Vec<Vec<u8>>,
    pub min_distance: usize,
}

fn pack(word: &[u8]) -> Vec<u64> {
    word.chunks(64)
        .map(|c| c.iter().enumerate().fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i)))
        .collect()
}

fn packed_distance(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
}

/// Integer distance target `ceil((1/2 - delta) * length)`.
pub fn distance_target(delta: f64, length: usize) -> usize {
    ((0.5 - delta) * length as f64 - 1e-9).ceil().max(0.0) as usize
}

impl BinaryCode {
    /// Seeded random code; each codeword is resampled until it is far from all earlier ones.
    pub fn random(sigma_size: usize, delta: f64, length: usize, seed: u64) -> Result<Self, RegexError> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(RegexError::Code(format!("delta {delta} outside (0, 1/2)")));
        }
        if length == 0 || sigma_size == 0 {
            return Err(RegexError::Code("empty code".into()));
        }
        const RETRIES: usize = 2000;
        let target = distance_target(delta, length);
        let mut r = rng::stream(seed, 0xecc);
        let mut words: Vec<Vec<u8>> = Vec::with_capacity(sigma_size);
        let mut packed: Vec<Vec<u64>> = Vec::with_capacity(sigma_size);
        for sym in 0..sigma_size {
            let mut ok = false;
            for _ in 0..RETRIES {
                let w: Vec<u8> = (0..length).map(|_| r.gen_range(0..2u8)).collect();
                let pw = pack(&w);
                if packed.iter().all(|p| packed_distance(p, &pw) >= target) {
                    words.push(w);
                    packed.push(pw);
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Err(RegexError::Code(format!(
                    "no codeword for symbol {sym} at distance {target} after {RETRIES} tries; increase d_code"
                )));
            }
        }
        let mut code = Self { length, words, min_distance: 0 };
        code.min_distance = code.verify_distance();
        Ok(code)
    }

    /// Reed-Solomon over `F_p` with messages of `k` digits, concatenated with
    /// the Hadamard code on the binary expansion of each field element.
    pub fn reed_solomon_hadamard(sigma_size: usize, p: u64, k: usize) -> Result<Self, RegexError> {
        if !is_prime(p) || k == 0 || k as u64 > p {
            return Err(RegexError::Code(format!("need prime p >= k >= 1, got p={p} k={k}")));
        }
        let capacity = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if capacity < sigma_size as u128 {
            return Err(RegexError::Code(format!("p^k = {capacity} < alphabet {sigma_size}")));
        }
        let field = PrimeField::new(p).map_err(|e| RegexError::Code(e.to_string()))?;
        let w = 64 - (p - 1).leading_zeros() as usize;
        let w = w.max(1);
        let words = (0..sigma_size as u64)
            .map(|mut sym| {
                let digits: Vec<u64> = (0..k)
                    .map(|_| {
                        let d = sym % p;
                        sym /= p;
                        d
                    })
                    .collect();
                let msg = Polynomial::from_u64s(field, &digits);
                let mut out = Vec::with_capacity(p as usize * (1 << w));
                for x in field.elements() {
                    let v = msg.eval(x).0;
                    for z in 0..(1u64 << w) {
                        out.push(((v & z).count_ones() & 1) as u8);
                    }
                }
                out
            })
            .collect::<Vec<_>>();
        let mut code = Self { length: p as usize * (1 << w), words, min_distance: 0 };
        code.min_distance = code.verify_distance();
        Ok(code)
    }

    /// Exhaustive minimum pairwise distance (the length for a single codeword).
    pub fn verify_distance(&self) -> usize {
        let packed: Vec<Vec<u64>> = self.words.iter().map(|w| pack(w)).collect();
        (0..packed.len())
            .into_par_iter()
            .map(|i| (i + 1..packed.len()).map(|j| packed_distance(&packed[i], &packed[j])).min().unwrap_or(self.length))
            .min()
            .unwrap_or(self.length)
    }

    pub fn encode(&self, s: &[u32]) -> Vec<u32> {
        s.iter().flat_map(|&c| self.words[c as usize].iter().map(|&b| u32::from(b))).collect()
    }
}

/// Substitutes every symbol, in the expression and in the strings, by its codeword.
pub fn to_binary(inst: &RegexInstance, code: &BinaryCode) -> Result<RegexInstance, RegexError> {
    inst.validate()?;
    if code.words.len() < inst.alphabet {
        return Err(RegexError::Code(format!("code covers {} symbols, alphabet has {}", code.words.len(), inst.alphabet)));
    }
    let expr = inst.expr.map_literals(&|s| {
        concat_of(code.words[s as usize].iter().map(|&b| RegexAst::Literal(u32::from(b))).collect())
    });
    Ok(RegexInstance { expr, strings: inst.strings.iter().map(|y| code.encode(y)).collect(), alphabet: 2 })
}
