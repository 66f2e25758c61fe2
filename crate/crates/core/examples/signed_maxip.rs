//! Maps 0/1 vectors to {-1,1} vectors whose inner products are four times the
//! originals, and compares the signed and absolute optima.

use pcpvec::bitset::BitSet;
use pcpvec::gadget_ip::{brute_force_max_abs_ip, signed_dot, to_signed, MaxIpInstance, ALPHA_ZERO, BETA_ZERO, GAMMA_ONE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("gadget products:");
    for (x, xn) in [(GAMMA_ONE, "one"), (ALPHA_ZERO, "zero")] {
        for (y, yn) in [(GAMMA_ONE, "one"), (BETA_ZERO, "zero")] {
            println!("  a={xn:<4} b={yn:<4} -> {}", signed_dot(&x, &y));
        }
    }
    let ip = MaxIpInstance {
        dim: 6,
        a: vec![BitSet::from_indices(6, [0, 1, 2]), BitSet::from_indices(6, [3, 4])],
        b: vec![BitSet::from_indices(6, [1, 2, 5]), BitSet::from_indices(6, [0, 3, 4])],
    };
    let signed = to_signed(&ip);
    for (i, (a, sa)) in ip.a.iter().zip(&signed.a).enumerate() {
        for (j, (b, sb)) in ip.b.iter().zip(&signed.b).enumerate() {
            println!("({i},{j}): 0/1 product {} signed product {}", a.intersection_count(b), signed_dot(sa, sb));
        }
    }
    let best = brute_force_max_abs_ip(&signed)?;
    println!("max |a.b| = {} at ({}, {})", best.value, best.a, best.b);
    Ok(())
}
