//! Embeds PCP-Vectors into the (l2, l_inf) product metric and reports the
//! diameter for a satisfiable and an unsatisfiable formula.

use pcpvec::cnf::CnfFormula;
use pcpvec::gadget_diam::{brute_force_diameter, build_diameter_instance, max_same_side_sq};
use pcpvec::pcp::{build_instance, MerlinMode, PcpParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let formulas = [
        CnfFormula::random_ksat(4, 2, 2, 1)?,
        CnfFormula::new(2, vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]])?,
    ];
    for f in &formulas {
        let params = PcpParams::for_formula(f, 2, 1, None, MerlinMode::PairwiseHonest)?;
        let pv = build_instance(f, &params)?;
        let d = build_diameter_instance(&pv);
        let best = brute_force_diameter(&d)?;
        println!(
            "satisfiable={} L={} points={} squared diameter {} (4L = {}, same side max {})",
            f.is_satisfiable()?,
            pv.l,
            d.points.len(),
            best.value,
            4 * pv.l,
            max_same_side_sq(&d)?
        );
    }
    Ok(())
}
