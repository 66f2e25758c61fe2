//! Builds the regular expression for a PCP-Vectors instance and finds the
//! string closest to its language in Hamming distance.

use pcpvec::cnf::CnfFormula;
use pcpvec::gadget_regex::{closest_string, parse, serialize, RegexInstance};
use pcpvec::pcp::{build_instance, MerlinMode, PcpParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let formula = CnfFormula::random_ksat(4, 2, 2, 1)?;
    let params = PcpParams::for_formula(&formula, 2, 1, None, MerlinMode::PairwiseHonest)?;
    let pv = build_instance(&formula, &params)?;
    let inst = RegexInstance::from_pcp(&pv)?;
    let text = serialize(&inst.expr);
    println!("alphabet {} symbols, {} literals, expression {} bytes", inst.alphabet, inst.expr.literal_count(), text.len());
    println!("prefix: {}", &text[..text.len().min(120)]);
    assert_eq!(parse(&text)?, inst.expr);
    let (idx, dist) = closest_string(&inst)?;
    println!("closest string {idx} at Hamming distance {dist} (L = {})", pv.l);
    Ok(())
}
