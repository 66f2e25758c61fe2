//! Formula to PCP-Vectors document, and PCP-Vectors to every target kind,
//! each stamped with the gap it must exhibit.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cnf::CnfFormula;
use crate::envelope::{
    encode_points, encode_sets, BinaryInfo, DiameterDoc, Document, EnvelopeError, ExpectedGap, LcsDoc, MaxIpDoc,
    Objective, PcpDoc, ProvenanceDoc, RegexDoc, SignedDoc, SourceInfo, SubsetDoc, FORMAT_VERSION,
};
use crate::gadget_diam::build_diameter_instance;
use crate::gadget_ip::{compact_support, to_max_ip, to_signed, to_subset_instance, IpError};
use crate::gadget_lcs::{build_lcs_instance, completeness_lcs, soundness_lcs, LcsError, PermGadgetParams};
use crate::gadget_regex::{distance_target, serialize, to_binary, BinaryCode, RegexError, RegexInstance};
use crate::pcp::{build_instance, PcpError, PcpParams, PcpVectorsInstance};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Pcp(#[from] PcpError),
    #[error(transparent)]
    Envelope(#[from] EnvelopeError),
    #[error(transparent)]
    Ip(#[from] IpError),
    #[error(transparent)]
    Lcs(#[from] LcsError),
    #[error(transparent)]
    Regex(#[from] RegexError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Subset,
    MaxIp,
    SignedMaxIp,
    Lcs,
    Regexp,
    Diameter,
}

impl Target {
    pub const ALL: [Target; 6] = [Target::Subset, Target::MaxIp, Target::SignedMaxIp, Target::Lcs, Target::Regexp, Target::Diameter];

    pub fn name(self) -> &'static str {
        match self {
            Target::Subset => "subset",
            Target::MaxIp => "maxip",
            Target::SignedMaxIp => "signed-maxip",
            Target::Lcs => "lcs",
            Target::Regexp => "regexp",
            Target::Diameter => "diameter",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown target \"{s}\" (expected one of subset, maxip, signed-maxip, lcs, regexp, diameter)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReduceOptions {
    /// LCS block field; the smallest admissible prime when absent.
    pub block_field: Option<u64>,
    pub degree: usize,
    pub seed: u64,
    /// Collapse the regular-expression alphabet to bits.
    pub binary: bool,
    pub delta: f64,
    pub d_code: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self { block_field: None, degree: 1, seed: 0, binary: false, delta: 0.2, d_code: 128 }
    }
}

/// Gap of the PCP-Vectors instance itself, in good rows out of `L`.
pub fn pcp_gap(params: &PcpParams) -> ExpectedGap {
    ExpectedGap {
        measure: "good-rows".into(),
        objective: Objective::Max,
        completeness: params.randomness_count() as i64,
        soundness: params.soundness_rows() as i64,
    }
}

pub fn build_pcp_document(formula: &CnfFormula, params: &PcpParams) -> Result<(Document, PcpVectorsInstance), PipelineError> {
    let pv = build_instance(formula, params)?;
    let prov = pv.provenance.as_ref().map(|p| ProvenanceDoc::from_pcp(p, SourceInfo::new(formula, params), true));
    let doc = PcpDoc::from_instance(&pv, pcp_gap(params), prov)?;
    Ok((Document::PcpVectors(doc), pv))
}

fn scaled(measure: &str, objective: Objective, completeness: i64, soundness: i64) -> ExpectedGap {
    ExpectedGap { measure: measure.into(), objective, completeness, soundness }
}

/// Reduces a PCP-Vectors instance whose gap is `base` (completeness `L`, soundness `S` rows).
pub fn reduce(
    pv: &PcpVectorsInstance,
    base: &ExpectedGap,
    provenance: Option<&ProvenanceDoc>,
    target: Target,
    opts: &ReduceOptions,
) -> Result<Document, PipelineError> {
    let (l, s) = (base.completeness, base.soundness);
    let provenance = provenance.map(|p| ProvenanceDoc { merlin: None, ..p.clone() });
    let version = FORMAT_VERSION;
    let doc = match target {
        Target::Subset => {
            let sp = to_subset_instance(pv);
            Document::Subset(SubsetDoc {
                version,
                universe: sp.universe_size(),
                l: sp.l,
                sigma: sp.sigma,
                a: encode_sets(&sp.a_sets),
                b: encode_sets(&sp.b_sets),
                expected_gap: scaled("intersection", Objective::Max, l, s),
                provenance,
            })
        }
        Target::MaxIp => {
            let ip = to_max_ip(&to_subset_instance(pv));
            Document::Maxip(MaxIpDoc {
                version,
                universe: ip.dim,
                a: encode_sets(&ip.a),
                b: encode_sets(&ip.b),
                expected_gap: scaled("inner-product", Objective::Max, l, s),
                provenance,
            })
        }
        Target::SignedMaxIp => {
            let sv = to_signed(&to_max_ip(&to_subset_instance(pv)));
            Document::SignedMaxip(SignedDoc {
                version,
                universe: sv.dim,
                a: sv.a,
                b: sv.b,
                expected_gap: scaled("abs-inner-product", Objective::Max, 4 * l, 4 * s),
                provenance,
            })
        }
        Target::Lcs => {
            let (ip, _) = compact_support(&to_max_ip(&to_subset_instance(pv)));
            let vectors = ip.a.len() + ip.b.len();
            let params = match opts.block_field {
                Some(f) => PermGadgetParams::new(f, opts.degree, vectors, ip.dim)?,
                None => PermGadgetParams::auto(vectors, ip.dim, opts.degree)?,
            };
            let inst = build_lcs_instance(&ip, &params, opts.seed)?;
            Document::LcsPermutation(LcsDoc {
                version,
                block_field: inst.block_field,
                degree: inst.degree,
                dim: inst.dim,
                x: inst.x,
                y: inst.y,
                expected_gap: scaled(
                    "lcs",
                    Objective::Max,
                    completeness_lcs(&params, l as u64) as i64,
                    soundness_lcs(&params, s as u64) as i64,
                ),
                provenance,
            })
        }
        Target::Regexp => {
            let inst = RegexInstance::from_pcp(pv)?;
            let gap = scaled("hamming", Objective::Min, 0, l - s);
            if opts.binary {
                let code = BinaryCode::random(inst.alphabet, opts.delta, opts.d_code, opts.seed)?;
                let bin = to_binary(&inst, &code)?;
                let t = distance_target(opts.delta, opts.d_code) as i64;
                Document::Regexp(RegexDoc {
                    version,
                    expr: serialize(&bin.expr),
                    strings: bin.strings,
                    alphabet: bin.alphabet,
                    binary: Some(BinaryInfo { delta: opts.delta, d_code: opts.d_code, min_distance: code.min_distance, seed: opts.seed }),
                    expected_gap: scaled("hamming", Objective::Min, 0, (l - s) * t),
                    provenance,
                })
            } else {
                Document::Regexp(RegexDoc {
                    version,
                    expr: serialize(&inst.expr),
                    strings: inst.strings,
                    alphabet: inst.alphabet,
                    binary: None,
                    expected_gap: gap,
                    provenance,
                })
            }
        }
        Target::Diameter => {
            let inst = build_diameter_instance(pv);
            Document::Diameter(DiameterDoc {
                version,
                l: inst.l,
                sigma: inst.sigma,
                points: encode_points(&inst),
                expected_gap: scaled("squared-diameter", Objective::Max, 4 * l, l + 3 * s),
                provenance,
            })
        }
    };
    Ok(doc)
}
