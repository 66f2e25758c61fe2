//! Encodes polynomials over a small field as permutations and shows the LCS
//! gap between matching and differing polynomials, then builds full LCS strings.

use pcpvec::bitset::BitSet;
use pcpvec::ff::{Polynomial, PrimeField};
use pcpvec::gadget_ip::{brute_force_max_ip, MaxIpInstance};
use pcpvec::gadget_lcs::{brute_force_max_lcs, build_lcs_instance, completeness_lcs, lcs, perm_from_poly, soundness_lcs, PermGadgetParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = PrimeField::new(7)?;
    let p = Polynomial::from_u64s(f, &[0, 2]);
    let r = Polynomial::from_u64s(f, &[0, 5]);
    let (pp, pr) = (perm_from_poly(&p), perm_from_poly(&r));
    println!("LCS(pi_p, pi_p) = {} (|F|^2 = 49)", lcs(&pp, &pp));
    println!("LCS(pi_p, pi_r) = {} (bound 2|F|-1 = 13)", lcs(&pp, &pr));

    let ip = MaxIpInstance {
        dim: 4,
        a: vec![BitSet::from_indices(4, [0, 1, 2]), BitSet::from_indices(4, [3])],
        b: vec![BitSet::from_indices(4, [0, 1, 2]), BitSet::from_indices(4, [1, 3])],
    };
    let params = PermGadgetParams::auto(ip.a.len() + ip.b.len(), ip.dim, 1)?;
    let inst = build_lcs_instance(&ip, &params, 0)?;
    let best_ip = brute_force_max_ip(&ip)?;
    let best = brute_force_max_lcs(&inst)?;
    println!(
        "block field {} string length {}; max IP {} -> max LCS {} (completeness {}, soundness for IP<=2 {})",
        params.block_field(),
        params.string_len(),
        best_ip.value,
        best.value,
        completeness_lcs(&params, best_ip.value as u64),
        soundness_lcs(&params, 2)
    );
    Ok(())
}
