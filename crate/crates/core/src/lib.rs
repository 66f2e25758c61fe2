//! Merlin-Arthur Set-Disjointness protocol simulator, a compiler from CNF
//! formulas to PCP-Vectors instances, and gadget reductions from PCP-Vectors
//! to Max-IP, permutation LCS, regular-expression closest pair and
//! product-metric diameter, each paired with a brute-force gap check.

pub mod bitset;
pub mod cli;
pub mod cnf;
pub mod envelope;
pub mod ff;
pub mod gadget_diam;
pub mod gadget_ip;
pub mod gadget_lcs;
pub mod gadget_regex;
pub mod oracle;
pub mod pcp;
pub mod pipeline;
pub mod protocol;
pub mod rng;
