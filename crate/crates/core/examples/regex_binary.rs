//! Collapses a regex instance to the binary alphabet with an error-correcting
//! code and shows distances scaling by at least the code's distance target.

use pcpvec::cnf::CnfFormula;
use pcpvec::gadget_regex::{distance_target, min_hamming, to_binary, BinaryCode, RegexInstance};
use pcpvec::pcp::{build_instance, MerlinMode, PcpParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let formula = CnfFormula::new(2, vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]])?;
    let params = PcpParams::for_formula(&formula, 2, 1, None, MerlinMode::BoundedEnumeration { max_nonzero: 0 })?;
    let pv = build_instance(&formula, &params)?;
    let inst = RegexInstance::from_pcp(&pv)?;

    let (delta, length) = (0.2, 64);
    let code = BinaryCode::random(inst.alphabet, delta, length, 3)?;
    let rsh = BinaryCode::reed_solomon_hadamard(inst.alphabet, 17, 3)?;
    println!("random code: {} words, length {}, distance {}", code.words.len(), code.length, code.verify_distance());
    println!("RS-Hadamard code: length {}, distance {}", rsh.length, rsh.verify_distance());

    let bin = to_binary(&inst, &code)?;
    let t = distance_target(delta, length);
    for (y, yb) in inst.strings.iter().zip(&bin.strings) {
        let (h, hb) = (min_hamming(&inst.expr, y)?, min_hamming(&bin.expr, yb)?);
        println!("distance {h:>2} -> {hb:>4} (>= {})", h * t);
    }
    Ok(())
}
