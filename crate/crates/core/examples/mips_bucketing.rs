//! Splits the query side into ceil(N^(1-x)) buckets, answers each with an exact
//! linear-scan index, and compares against brute force for several x.

use pcpvec::bitset::BitSet;
use pcpvec::gadget_ip::{bucket_count, brute_force_max_ip, closest_pair_via_index, LinearScanIndex, MaxIpInstance};
use pcpvec::rng;
use rand::Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut r = rng::from_seed(42);
    let (n, dim) = (200, 40);
    let mut draw = || BitSet::from_indices(dim, (0..dim).filter(|_| r.gen_bool(0.3)));
    let ip = MaxIpInstance { dim, a: (0..n).map(|_| draw()).collect(), b: (0..n).map(|_| draw()).collect() };
    let brute = brute_force_max_ip(&ip)?;
    println!("brute force: {} at ({}, {})", brute.value, brute.a, brute.b);
    for x in [0.25, 0.5, 0.75, 1.0] {
        let got = closest_pair_via_index(&ip.a, &ip.b, LinearScanIndex::build, |idx, q| idx.query(q, |u, v| u.intersection_count(v) as i64), x)?;
        println!("x={x:<4} buckets={:<3} optimum {}", bucket_count(n, x), got.value);
    }
    Ok(())
}
