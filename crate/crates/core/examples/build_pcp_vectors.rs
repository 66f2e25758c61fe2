//! Compiles a small CNF formula into a PCP-Vectors instance and finds the best
//! pair by brute force.

use pcpvec::cnf::CnfFormula;
use pcpvec::pcp::{brute_force_max_score, build_instance, MerlinMode, PcpParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let formula = CnfFormula::random_ksat(6, 8, 3, 11)?;
    println!("{}", formula.to_dimacs());
    let params = PcpParams::for_formula(&formula, 2, 1, None, MerlinMode::PairwiseHonest)?;
    let pv = build_instance(&formula, &params)?;
    println!(
        "q={} L={} K={} |A|={} |B|={} soundness rows {}",
        params.protocol.modulus(),
        pv.l,
        pv.sigma_size(),
        pv.a.len(),
        pv.b.len(),
        params.soundness_rows()
    );
    let (i, j, s) = brute_force_max_score(&pv)?;
    println!("satisfiable: {}", formula.is_satisfiable()?);
    println!("best pair ({i}, {j}) accepts {s} rows");
    Ok(())
}
