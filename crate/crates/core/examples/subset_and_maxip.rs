//! Turns PCP-Vectors into set containment and 0/1 Max-IP, then checks that the
//! intersection sizes track the acceptance counts.

use pcpvec::cnf::CnfFormula;
use pcpvec::gadget_ip::{brute_force_max_ip, compact_support, to_max_ip, to_subset_instance};
use pcpvec::pcp::{brute_force_max_score, build_instance, MerlinMode, PcpParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let formula = CnfFormula::random_ksat(4, 2, 2, 1)?;
    let params = PcpParams::for_formula(&formula, 2, 1, None, MerlinMode::PairwiseHonest)?;
    let pv = build_instance(&formula, &params)?;

    let sets = to_subset_instance(&pv);
    println!("universe {} bits, every B set has size {}", sets.universe_size(), pv.l);
    let ip = to_max_ip(&sets);
    let best = brute_force_max_ip(&ip)?;
    let (_, _, s) = brute_force_max_score(&pv)?;
    println!("max inner product {} at ({}, {}), best PCP score {s}", best.value, best.a, best.b);

    let (small, kept) = compact_support(&ip);
    println!("support compaction keeps {} of {} coordinates, optimum {}", kept.len(), ip.dim, brute_force_max_ip(&small)?.value);
    Ok(())
}
