//! Runs the Set-Disjointness protocol on one disjoint and one intersecting
//! pair, printing transcripts, exact acceptance probabilities and the bit cost.

use pcpvec::cnf::ClauseSet;
use pcpvec::ff::Fe;
use pcpvec::protocol::{communication_cost, exact_accept_probability, merlin_message, run_protocol, ProtocolParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ProtocolParams::new(8, 2, 1)?;
    let cost = communication_cost(&params);
    println!(
        "n=8 T=2 q={}: Merlin {} bits, coins {} bits, Bob {} bits",
        params.modulus(),
        cost.merlin_bits,
        cost.coin_bits,
        cost.bob_bits
    );

    for (label, b) in [("disjoint", vec![1, 2]), ("intersecting", vec![3, 5])] {
        let set_a = ClauseSet::from_indices(8, [0, 3]);
        let set_b = ClauseSet::from_indices(8, b);
        let msg = merlin_message(&set_a, &set_b, &params)?;
        let transcript = run_protocol(&set_a, &set_b, &msg, &[Fe(2)], &params)?;
        println!("--- {label}");
        print!("{}", transcript.to_log());
        let p = exact_accept_probability(&set_a, &set_b, &msg, &params)?;
        println!("exact acceptance {p} (soundness bound {})", params.round_soundness());
    }
    Ok(())
}
