//! Runs every reduction on one formula, serializes each document, reads it back
//! and certifies that the brute-force optimum lands on the promised side.

use pcpvec::cnf::CnfFormula;
use pcpvec::envelope::Document;
use pcpvec::oracle::verify_gap;
use pcpvec::pcp::{MerlinMode, PcpParams};
use pcpvec::pipeline::{build_pcp_document, reduce, ReduceOptions, Target};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let formula = CnfFormula::random_ksat(4, 2, 2, 1)?;
    let params = PcpParams::for_formula(&formula, 2, 1, None, MerlinMode::PairwiseHonest)?;
    let (pcp_doc, pv) = build_pcp_document(&formula, &params)?;
    let mut docs = vec![pcp_doc.clone()];
    for t in Target::ALL {
        docs.push(reduce(&pv, pcp_doc.expected_gap(), pcp_doc.provenance(), t, &ReduceOptions::default())?);
    }
    for doc in docs {
        let text = doc.to_json();
        let (back, inst) = Document::from_json(&text)?;
        let report = verify_gap(&back, &inst, &formula)?;
        println!("{:<13} {:>9} bytes  {}", doc.kind(), text.len(), report.to_table().lines().last().unwrap_or_default());
    }
    Ok(())
}
