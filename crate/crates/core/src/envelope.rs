//! Versioned JSON documents for every instance kind.
//!
//! Each document carries a `kind` discriminator, a `version`, the gap it is
//! promised to exhibit, and optional provenance pointing back to the source
//! formula. Serialization is compact JSON followed by a newline, so a parsed
//! document re-serializes to the same bytes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::cnf::{CnfFormula, HalfAssignment, Side};
use crate::gadget_diam::{DiameterInstance, PointSide, ProductPoint};
use crate::gadget_ip::{MaxIpInstance, SetPairInstance, SignedVectorInstance};
use crate::gadget_lcs::LcsInstance;
use crate::gadget_regex::{self, RegexInstance};
use crate::pcp::{AliceVector, MerlinMode, PcpParams, PcpVectorsInstance, Provenance, BOTTOM};

pub const FORMAT_VERSION: u32 = 1;
/// Dense Alice storage refuses to write more cells than this.
pub const MAX_DENSE_CELLS: u128 = 50_000_000;

#[derive(Debug, Error)]
pub enum EnvelopeError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing or non-string \"kind\" field")]
    MissingKind,
    #[error("unknown kind \"{0}\"")]
    UnknownKind(String),
    #[error("unsupported version {found}; this build reads version {FORMAT_VERSION}")]
    Version { found: u64 },
    #[error("invalid {kind} document: {msg}")]
    Invalid { kind: &'static str, msg: String },
    #[error("instance too large to store densely: {0} cells")]
    TooLarge(u128),
}

fn invalid(kind: &'static str, msg: impl ToString) -> EnvelopeError {
    EnvelopeError::Invalid { kind, msg: msg.to_string() }
}

/// Whether the optimum is maximised or minimised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Max,
    Min,
}

/// For `max`: satisfiable sources reach at least `completeness`, unsatisfiable
/// ones stay at most `soundness`. For `min` the inequalities flip.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedGap {
    pub measure: String,
    pub objective: Objective,
    pub completeness: i64,
    pub soundness: i64,
}

/// Parameters of the source formula and of the compilation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceInfo {
    pub num_vars: usize,
    pub num_clauses: usize,
    pub digest: String,
    pub merlin_mode: String,
    pub q: u64,
    #[serde(rename = "T")]
    pub columns: usize,
    #[serde(rename = "R")]
    pub rounds: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub soundness_rows: u64,
}

impl SourceInfo {
    pub fn new(formula: &CnfFormula, params: &PcpParams) -> Self {
        Self {
            num_vars: formula.num_vars(),
            num_clauses: formula.num_clauses(),
            digest: formula_digest(formula),
            merlin_mode: merlin_mode_name(params.merlin_mode),
            q: params.protocol.modulus(),
            columns: params.protocol.columns(),
            rounds: params.protocol.rounds(),
            l: params.randomness_count(),
            soundness_rows: params.soundness_rows(),
        }
    }

    pub fn matches(&self, formula: &CnfFormula) -> bool {
        self.num_vars == formula.num_vars()
            && self.num_clauses == formula.num_clauses()
            && self.digest == formula_digest(formula)
    }
}

pub fn merlin_mode_name(mode: MerlinMode) -> String {
    match mode {
        MerlinMode::PairwiseHonest => "pairwise-honest".into(),
        MerlinMode::BoundedEnumeration { max_nonzero } => format!("bounded-enumeration:{max_nonzero}"),
    }
}

pub fn parse_merlin_mode(s: &str) -> Option<MerlinMode> {
    match s {
        "pairwise-honest" | "pairwise" => Some(MerlinMode::PairwiseHonest),
        _ => {
            let rest = s.strip_prefix("bounded-enumeration:").or_else(|| s.strip_prefix("bounded:"))?;
            rest.parse().ok().map(|max_nonzero| MerlinMode::BoundedEnumeration { max_nonzero })
        }
    }
}

/// 64-bit FNV-1a of the canonical DIMACS text, in hex.
pub fn formula_digest(formula: &CnfFormula) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in formula.to_dimacs().bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    format!("{h:016x}")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AliceTag {
    pub alpha: String,
    pub mu: usize,
}

/// Back-pointers from every vector to the half assignments it encodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceDoc {
    pub source: SourceInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merlin: Option<Vec<Vec<u64>>>,
    pub a: Vec<AliceTag>,
    pub b: Vec<String>,
}

impl ProvenanceDoc {
    pub fn from_pcp(p: &Provenance, source: SourceInfo, with_merlin: bool) -> Self {
        Self {
            source,
            merlin: with_merlin.then(|| p.merlin.clone()),
            a: p.a.iter().map(|(alpha, mu)| AliceTag { alpha: alpha.to_bit_string(), mu: *mu }).collect(),
            b: p.b.iter().map(|beta| beta.to_bit_string()).collect(),
        }
    }

    fn to_pcp(&self) -> Result<Provenance, EnvelopeError> {
        let bits = |side, s: &str| HalfAssignment::from_bit_string(side, s).ok_or_else(|| invalid("pcp-vectors", format!("bad assignment \"{s}\"")));
        Ok(Provenance {
            merlin: self.merlin.clone().unwrap_or_default(),
            a: self.a.iter().map(|t| Ok((bits(Side::First, &t.alpha)?, t.mu))).collect::<Result<_, EnvelopeError>>()?,
            b: self.b.iter().map(|s| bits(Side::Second, s)).collect::<Result<_, _>>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcpDoc {
    pub version: u32,
    pub q: u64,
    #[serde(rename = "T")]
    pub columns: usize,
    #[serde(rename = "R")]
    pub rounds: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<i32>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<u32>>,
    pub expected_gap: ExpectedGap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetDoc {
    pub version: u32,
    pub universe: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub sigma: usize,
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    pub expected_gap: ExpectedGap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaxIpDoc {
    pub version: u32,
    pub universe: usize,
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    pub expected_gap: ExpectedGap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignedDoc {
    pub version: u32,
    pub universe: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<i8>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<i8>>,
    pub expected_gap: ExpectedGap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LcsDoc {
    pub version: u32,
    #[serde(rename = "blockField")]
    pub block_field: u64,
    pub degree: usize,
    pub dim: usize,
    #[serde(rename = "X")]
    pub x: Vec<Vec<u32>>,
    #[serde(rename = "Y")]
    pub y: Vec<Vec<u32>>,
    pub expected_gap: ExpectedGap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDoc>,
}

/// Parameters of the binary code, present when the alphabet was collapsed to bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryInfo {
    pub delta: f64,
    pub d_code: usize,
    pub min_distance: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegexDoc {
    pub version: u32,
    pub expr: String,
    pub strings: Vec<Vec<u32>>,
    pub alphabet: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binary: Option<BinaryInfo>,
    pub expected_gap: ExpectedGap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDoc {
    pub side: String,
    pub rows: Vec<Vec<i8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiameterDoc {
    pub version: u32,
    #[serde(rename = "L")]
    pub l: usize,
    pub sigma: usize,
    pub points: Vec<PointDoc>,
    pub expected_gap: ExpectedGap,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    PcpVectors(PcpDoc),
    Subset(SubsetDoc),
    Maxip(MaxIpDoc),
    SignedMaxip(SignedDoc),
    LcsPermutation(LcsDoc),
    Regexp(RegexDoc),
    Diameter(DiameterDoc),
}

pub const KINDS: [&str; 7] = ["pcp-vectors", "subset", "maxip", "signed-maxip", "lcs-permutation", "regexp", "diameter"];

/// A document decoded into its domain type.
#[derive(Debug, Clone)]
pub enum ReducedInstance {
    PcpVectors(PcpVectorsInstance),
    Subset(SetPairInstance),
    MaxIp(MaxIpInstance),
    SignedMaxIp(SignedVectorInstance),
    Lcs(LcsInstance),
    Regex(RegexInstance),
    Diameter(DiameterInstance),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::PcpVectors(_) => KINDS[0],
            Document::Subset(_) => KINDS[1],
            Document::Maxip(_) => KINDS[2],
            Document::SignedMaxip(_) => KINDS[3],
            Document::LcsPermutation(_) => KINDS[4],
            Document::Regexp(_) => KINDS[5],
            Document::Diameter(_) => KINDS[6],
        }
    }

    pub fn expected_gap(&self) -> &ExpectedGap {
        match self {
            Document::PcpVectors(d) => &d.expected_gap,
            Document::Subset(d) => &d.expected_gap,
            Document::Maxip(d) => &d.expected_gap,
            Document::SignedMaxip(d) => &d.expected_gap,
            Document::LcsPermutation(d) => &d.expected_gap,
            Document::Regexp(d) => &d.expected_gap,
            Document::Diameter(d) => &d.expected_gap,
        }
    }

    pub fn provenance(&self) -> Option<&ProvenanceDoc> {
        match self {
            Document::PcpVectors(d) => d.provenance.as_ref(),
            Document::Subset(d) => d.provenance.as_ref(),
            Document::Maxip(d) => d.provenance.as_ref(),
            Document::SignedMaxip(d) => d.provenance.as_ref(),
            Document::LcsPermutation(d) => d.provenance.as_ref(),
            Document::Regexp(d) => d.provenance.as_ref(),
            Document::Diameter(d) => d.provenance.as_ref(),
        }
    }

    fn version(&self) -> u32 {
        match self {
            Document::PcpVectors(d) => d.version,
            Document::Subset(d) => d.version,
            Document::Maxip(d) => d.version,
            Document::SignedMaxip(d) => d.version,
            Document::LcsPermutation(d) => d.version,
            Document::Regexp(d) => d.version,
            Document::Diameter(d) => d.version,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    /// Parses, checks kind and version, then decodes and validates the instance.
    pub fn from_json(text: &str) -> Result<(Self, ReducedInstance), EnvelopeError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let kind = value.get("kind").and_then(|k| k.as_str()).ok_or(EnvelopeError::MissingKind)?;
        if !KINDS.contains(&kind) {
            return Err(EnvelopeError::UnknownKind(kind.to_string()));
        }
        match value.get("version").and_then(|v| v.as_u64()) {
            Some(v) if v == u64::from(FORMAT_VERSION) => {}
            Some(v) => return Err(EnvelopeError::Version { found: v }),
            None => return Err(invalid(KINDS.iter().find(|&&k| k == kind).copied().unwrap_or("document"), "missing version")),
        }
        let doc: Document = serde_json::from_value(value)?;
        debug_assert_eq!(doc.version(), FORMAT_VERSION);
        let inst = doc.decode()?;
        Ok((doc, inst))
    }

    /// Builds the domain instance and runs its validator.
    pub fn decode(&self) -> Result<ReducedInstance, EnvelopeError> {
        match self {
            Document::PcpVectors(d) => d.to_instance().map(ReducedInstance::PcpVectors),
            Document::Subset(d) => {
                let k = "subset";
                if d.universe != d.l * d.sigma {
                    return Err(invalid(k, "universe differs from L * sigma"));
                }
                let sp = SetPairInstance {
                    l: d.l,
                    sigma: d.sigma,
                    a_sets: decode_sets(k, d.universe, &d.a)?,
                    b_sets: decode_sets(k, d.universe, &d.b)?,
                };
                sp.validate().map_err(|e| invalid(k, e))?;
                check_provenance(k, &d.provenance, sp.a_sets.len(), sp.b_sets.len())?;
                Ok(ReducedInstance::Subset(sp))
            }
            Document::Maxip(d) => {
                let k = "maxip";
                let ip = MaxIpInstance { dim: d.universe, a: decode_sets(k, d.universe, &d.a)?, b: decode_sets(k, d.universe, &d.b)? };
                check_provenance(k, &d.provenance, ip.a.len(), ip.b.len())?;
                Ok(ReducedInstance::MaxIp(ip))
            }
            Document::SignedMaxip(d) => {
                let k = "signed-maxip";
                let sv = SignedVectorInstance { dim: d.universe, a: d.a.clone(), b: d.b.clone() };
                sv.validate().map_err(|e| invalid(k, e))?;
                check_provenance(k, &d.provenance, sv.a.len(), sv.b.len())?;
                Ok(ReducedInstance::SignedMaxIp(sv))
            }
            Document::LcsPermutation(d) => {
                let k = "lcs-permutation";
                let inst = LcsInstance { block_field: d.block_field, degree: d.degree, dim: d.dim, x: d.x.clone(), y: d.y.clone() };
                inst.validate().map_err(|e| invalid(k, e))?;
                check_provenance(k, &d.provenance, inst.x.len(), inst.y.len())?;
                Ok(ReducedInstance::Lcs(inst))
            }
            Document::Regexp(d) => {
                let k = "regexp";
                let expr = gadget_regex::parse(&d.expr).map_err(|e| invalid(k, e))?;
                let inst = RegexInstance { expr, strings: d.strings.clone(), alphabet: d.alphabet };
                inst.validate().map_err(|e| invalid(k, e))?;
                if let Some(p) = &d.provenance {
                    if p.b.len() != inst.strings.len() {
                        return Err(invalid(k, "provenance does not cover every string"));
                    }
                }
                Ok(ReducedInstance::Regex(inst))
            }
            Document::Diameter(d) => {
                let k = "diameter";
                let points = d
                    .points
                    .iter()
                    .map(|p| {
                        let side = match p.side.as_str() {
                            "x" => PointSide::X,
                            "y" => PointSide::Y,
                            other => return Err(invalid(k, format!("unknown side \"{other}\""))),
                        };
                        if p.rows.len() != d.l || p.rows.iter().any(|r| r.len() != d.sigma) {
                            return Err(invalid(k, "point shape differs from L x sigma"));
                        }
                        Ok(ProductPoint { side, rows: d.l, cols: d.sigma, coords: p.rows.concat() })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let inst = DiameterInstance { l: d.l, sigma: d.sigma, points };
                inst.validate().map_err(|e| invalid(k, e))?;
                check_provenance(k, &d.provenance, inst.side_count(PointSide::X), inst.side_count(PointSide::Y))?;
                Ok(ReducedInstance::Diameter(inst))
            }
        }
    }
}

fn decode_sets(kind: &'static str, len: usize, hex: &[String]) -> Result<Vec<BitSet>, EnvelopeError> {
    hex.iter().map(|h| BitSet::from_hex(len, h).map_err(|e| invalid(kind, e))).collect()
}

fn check_provenance(kind: &'static str, p: &Option<ProvenanceDoc>, na: usize, nb: usize) -> Result<(), EnvelopeError> {
    match p {
        Some(p) if p.a.len() != na || p.b.len() != nb => Err(invalid(kind, "provenance does not cover every vector")),
        _ => Ok(()),
    }
}

impl PcpDoc {
    pub fn from_instance(pv: &PcpVectorsInstance, expected_gap: ExpectedGap, provenance: Option<ProvenanceDoc>) -> Result<Self, EnvelopeError> {
        let cells = pv.a.len() as u128 * pv.l as u128 * pv.k as u128;
        if cells > MAX_DENSE_CELLS {
            return Err(EnvelopeError::TooLarge(cells));
        }
        let a = pv
            .a
            .iter()
            .map(|v| (0..pv.l).flat_map(|ell| v.dense_row(ell)).collect())
            .collect();
        Ok(Self {
            version: FORMAT_VERSION,
            q: pv.q,
            columns: pv.columns,
            rounds: pv.rounds,
            l: pv.l,
            k: pv.k,
            a,
            b: pv.b.clone(),
            expected_gap,
            provenance,
        })
    }

    pub fn to_instance(&self) -> Result<PcpVectorsInstance, EnvelopeError> {
        let k = "pcp-vectors";
        let a = self
            .a
            .iter()
            .enumerate()
            .map(|(i, cells)| {
                if cells.len() != self.l * self.k {
                    return Err(invalid(k, format!("A[{i}] has {} cells, expected L * K = {}", cells.len(), self.l * self.k)));
                }
                if let Some(&c) = cells.iter().find(|&&c| c < BOTTOM) {
                    return Err(invalid(k, format!("A[{i}] holds {c}")));
                }
                Ok(AliceVector::Dense { rows: self.l, columns: self.k, cells: cells.clone() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let provenance = match &self.provenance {
            Some(p) if p.merlin.is_some() => Some(p.to_pcp()?),
            _ => None,
        };
        let pv = PcpVectorsInstance {
            q: self.q,
            columns: self.columns,
            rounds: self.rounds,
            l: self.l,
            k: self.k,
            a,
            b: self.b.clone(),
            provenance,
        };
        pv.validate().map_err(|e| invalid(k, e))?;
        check_provenance(k, &self.provenance, pv.a.len(), pv.b.len())?;
        Ok(pv)
    }
}

pub fn encode_sets(sets: &[BitSet]) -> Vec<String> {
    sets.iter().map(BitSet::to_hex).collect()
}

pub fn encode_points(inst: &DiameterInstance) -> Vec<PointDoc> {
    inst.points
        .iter()
        .map(|p| PointDoc { side: p.side.as_str().into(), rows: (0..p.rows).map(|ell| p.row(ell).to_vec()).collect() })
        .collect()
}
