//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use pcpvec::bitset::BitSet;
use pcpvec::cnf::{ClauseSet, CnfFormula};
use pcpvec::envelope::Document;
use pcpvec::ff::{Fe, Polynomial};
use pcpvec::gadget_diam::{build_diameter_instance, delta_2_inf_sq, max_same_side_sq, PointSide};
use pcpvec::gadget_ip::{
    brute_force_max_ip, closest_pair_via_index, signed_dot, to_max_ip, to_signed, to_subset_instance, LinearScanIndex,
    MaxIpInstance, ALPHA_ZERO, BETA_ZERO, GAMMA_ONE,
};
use pcpvec::gadget_lcs::{lcs, perm_from_poly, zero_constant_polys};
use pcpvec::gadget_regex::{distance_target, min_hamming, to_binary, BinaryCode, RegexInstance};
use pcpvec::pcp::{brute_force_max_score, build_instance, score, MerlinMode, PcpParams, PcpVectorsInstance};
use pcpvec::pipeline::{build_pcp_document, reduce, ReduceOptions, Target};
use pcpvec::protocol::{
    exact_accept_probability, merlin_message, round_acceptance_table, AliceCheck, MerlinMessage, Probability,
    ProtocolParams,
};
use pcpvec::rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn random_pair(r: &mut rng::Rng, n: usize, disjoint: bool) -> (ClauseSet, ClauseSet) {
    loop {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for u in 0..n {
            match r.gen_range(0..4) {
                0 => a.push(u),
                1 => b.push(u),
                2 if !disjoint => {
                    a.push(u);
                    b.push(u);
                }
                _ => {}
            }
        }
        let sa = ClauseSet::from_indices(n, a);
        let sb = ClauseSet::from_indices(n, b);
        if sa.is_disjoint(&sb) == disjoint {
            return (sa, sb);
        }
    }
}

fn c1_completeness() -> Outcome {
    let start = Instant::now();
    let mut r = rng::from_seed(1);
    let mut checked = 0;
    for n in [8usize, 16] {
        let params = ProtocolParams::new(n, 2, 1).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let (a, b) = random_pair(&mut r, n, true);
            let msg = merlin_message(&a, &b, &params).map_err(|e| e.to_string())?;
            let p = exact_accept_probability(&a, &b, &msg, &params).map_err(|e| e.to_string())?;
            ensure!(p == Probability::one(), "n={n}: disjoint pair accepted with probability {p}");
            checked += 1;
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(5), "took {t:?}, limit 5 s");
    Ok(format!("{checked} disjoint pairs, every probability exactly 1"))
}

/// Every polynomial within the degree bound with at most two nonzero coefficients.
fn sparse_family(params: &ProtocolParams) -> Vec<MerlinMessage> {
    let f = params.field();
    let q = params.modulus();
    let slots = params.merlin_degree_bound() + 1;
    let mut out = vec![MerlinMessage { phi: Polynomial::zero(f) }];
    for i in 0..slots {
        for c in 1..q {
            out.push(MerlinMessage { phi: Polynomial::monomial(f, Fe(c), i) });
            for j in i + 1..slots {
                for d in 1..q {
                    let phi = Polynomial::monomial(f, Fe(c), i).add(&Polynomial::monomial(f, Fe(d), j)).expect("same field");
                    out.push(MerlinMessage { phi });
                }
            }
        }
    }
    out
}

fn c2_soundness() -> Outcome {
    let mut r = rng::from_seed(2);
    let mut summary = Vec::new();
    for n in [8usize, 16] {
        let p1 = ProtocolParams::new(n, 2, 1).map_err(|e| e.to_string())?;
        let p2 = ProtocolParams::new(n, 2, 2).map_err(|e| e.to_string())?;
        let bound = p1.round_soundness();
        let bound2 = bound.pow(2);
        let intersecting: Vec<(ClauseSet, ClauseSet)> = (0..100).map(|_| random_pair(&mut r, n, false)).collect();
        let disjoint: Vec<(ClauseSet, ClauseSet)> = (0..100).map(|_| random_pair(&mut r, n, true)).collect();
        let probe = &intersecting[0].0;
        let mut family: Vec<MerlinMessage> = intersecting
            .iter()
            .chain(&disjoint)
            .map(|(a, b)| merlin_message(a, b, &p1))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let honest_count = family.len();
        let mut sparse_total = 0;
        if n == 8 {
            let sparse = sparse_family(&p1);
            sparse_total = sparse.len();
            family.extend(sparse);
        }
        // Check (a) depends on Merlin's message alone; everything failing it accepts with probability 0.
        let mut passing = Vec::new();
        for m in &family {
            let check = AliceCheck::new(m, probe, &p1).map_err(|e| e.to_string())?;
            if check.passes_fixed_checks() {
                passing.push(m.clone());
            }
        }
        for (idx, m) in family.iter().enumerate().step_by(97) {
            if !passing.contains(m) {
                let (a, b) = &intersecting[idx % intersecting.len()];
                let p = exact_accept_probability(a, b, m, &p1).map_err(|e| e.to_string())?;
                ensure!(p.accepting == 0, "message failing check (a) accepted with {p}");
            }
        }
        let mut worst = Probability::new(0, 1);
        let mut worst2 = Probability::new(0, 1);
        for (a, b) in &intersecting {
            for m in &passing {
                let table = round_acceptance_table(a, b, m, &p1).map_err(|e| e.to_string())?;
                let single = Probability::new(table.iter().filter(|&&x| x).count() as u64, p1.modulus());
                ensure!(single <= bound, "n={n}: per-round acceptance {single} exceeds {bound}");
                let two = exact_accept_probability(a, b, m, &p2).map_err(|e| e.to_string())?;
                ensure!(two <= bound2, "n={n}: two-round acceptance {two} exceeds {bound2}");
                ensure!(two == single.pow(2), "n={n}: two-round {two} is not the square of {single}");
                worst = worst.max(single);
                worst2 = worst2.max(two);
            }
        }
        summary.push(format!(
            "n={n}: {} messages ({honest_count} honest, {sparse_total} sparse), {} pass check (a), worst {worst} <= {bound}, R=2 worst {worst2} <= {bound2}",
            family.len(),
            passing.len()
        ));
    }
    Ok(summary.join("; "))
}

fn c3_verifier_equivalence() -> Outcome {
    let mut total = 0usize;
    for (m, rounds, seed) in [(8usize, 1usize, 3u64), (4, 2, 5)] {
        let f = CnfFormula::random_ksat(8, m, 3, seed).map_err(|e| e.to_string())?;
        let params = PcpParams::for_formula(&f, 2, rounds, None, MerlinMode::PairwiseHonest).map_err(|e| e.to_string())?;
        let pv = build_instance(&f, &params).map_err(|e| e.to_string())?;
        let prov = pv.provenance.as_ref().ok_or("missing provenance")?;
        let universe = params.universe();
        let merlin: Vec<MerlinMessage> =
            prov.merlin.iter().map(|c| MerlinMessage { phi: Polynomial::from_u64s(params.protocol.field(), c) }).collect();
        let a_sets: Vec<ClauseSet> = prov
            .a
            .iter()
            .map(|(alpha, _)| f.induced_clause_set(alpha).map(|s| s.padded(universe)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        let b_sets: Vec<ClauseSet> = prov
            .b
            .iter()
            .map(|beta| f.induced_clause_set(beta).map(|s| s.padded(universe)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for (i, a) in pv.a.iter().enumerate() {
            let mu = prov.a[i].1;
            for (j, b) in pv.b.iter().enumerate() {
                let s = score(a, b).map_err(|e| e.to_string())?;
                let p = exact_accept_probability(&a_sets[i], &b_sets[j], &merlin[mu], &params.protocol).map_err(|e| e.to_string())?;
                ensure!(s.as_probability() == p, "R={rounds} (alpha {i}, mu {mu}, beta {j}): score {s} vs probability {p}");
                total += 1;
            }
        }
    }
    Ok(format!("{total} (alpha, mu, beta) triples over n=8 builds with R=1 and R=2, all equal"))
}

/// Seeded formulas split by satisfiability.
fn collect_formulas(want_sat: usize, want_unsat: usize, mut gen: impl FnMut(u64) -> CnfFormula) -> (Vec<CnfFormula>, Vec<CnfFormula>) {
    let (mut sat, mut unsat) = (Vec::new(), Vec::new());
    let mut seed = 0;
    while sat.len() < want_sat || unsat.len() < want_unsat {
        let f = gen(seed);
        seed += 1;
        if f.is_satisfiable().expect("small formula") {
            if sat.len() < want_sat {
                sat.push(f);
            }
        } else if unsat.len() < want_unsat {
            unsat.push(f);
        }
        assert!(seed < 100_000, "formula search exhausted");
    }
    (sat, unsat)
}

fn c4_end_to_end_gap() -> Outcome {
    let (sat, unsat) = collect_formulas(20, 20, |seed| {
        let n = 8 + (seed % 3) as usize;
        CnfFormula::random_ksat(n, 40, 3, 4000 + seed).expect("valid parameters")
    });
    let mut worst_unsat = 0u64;
    for (formulas, satisfiable) in [(&sat, true), (&unsat, false)] {
        for f in formulas.iter() {
            let modes: &[MerlinMode] = if satisfiable {
                &[MerlinMode::PairwiseHonest]
            } else {
                &[MerlinMode::PairwiseHonest, MerlinMode::BoundedEnumeration { max_nonzero: 0 }]
            };
            for &mode in modes {
                let params = PcpParams::for_formula(f, 2, 1, None, mode).map_err(|e| e.to_string())?;
                let pv = build_instance(f, &params).map_err(|e| e.to_string())?;
                let (_, _, s) = brute_force_max_score(&pv).map_err(|e| e.to_string())?;
                if satisfiable {
                    ensure!(s.is_perfect(), "satisfiable formula (n={}) has max score {s}", f.num_vars());
                } else {
                    let bound = Probability::new(2 * (params.universe() as u64 / 2 - 1), params.protocol.modulus());
                    ensure!(s.as_probability() <= bound, "unsatisfiable formula has max score {s} > {bound}");
                    worst_unsat = worst_unsat.max(s.good_rows);
                }
            }
        }
    }
    Ok(format!(
        "20 satisfiable formulas reach score 1; 20 unsatisfiable formulas stay <= 2(m'/T-1)/q (worst {worst_unsat} good rows, honest and zero-polynomial Merlins)"
    ))
}

/// Small instances where every reduction is cheap enough to check exhaustively.
fn desk_instances() -> Vec<(CnfFormula, PcpVectorsInstance, PcpParams)> {
    let (sat, unsat) = collect_formulas(4, 4, |seed| {
        let n = 4 + (seed % 3) as usize;
        let m = 2 + (seed % 4) as usize * 2;
        CnfFormula::random_ksat(n, m, 2, 700 + seed).expect("valid parameters")
    });
    sat.into_iter()
        .chain(unsat)
        .chain([CnfFormula::new(2, vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]]).expect("valid")])
        .flat_map(|f| {
            let mut out = Vec::new();
            for mode in [MerlinMode::PairwiseHonest, MerlinMode::BoundedEnumeration { max_nonzero: 1 }] {
                let params = PcpParams::for_formula(&f, 2, 1, None, mode).expect("small formula");
                if matches!(mode, MerlinMode::BoundedEnumeration { .. }) && params.protocol.modulus() > 17 {
                    continue;
                }
                let pv = build_instance(&f, &params).expect("small formula");
                out.push((f.clone(), pv, params));
            }
            out
        })
        .collect()
}

fn c5_subset_identity(inst: &[(CnfFormula, PcpVectorsInstance, PcpParams)]) -> Outcome {
    let mut pairs = 0usize;
    for (f, pv, _) in inst {
        let sp = to_subset_instance(pv);
        sp.validate().map_err(|e| e.to_string())?;
        for (a, sa) in pv.a.iter().zip(&sp.a_sets) {
            for (b, sb) in pv.b.iter().zip(&sp.b_sets) {
                let s = score(a, b).map_err(|e| e.to_string())?;
                ensure!(sa.intersection_count(sb) as u64 == s.good_rows, "|a & b| = {} but L s = {}", sa.intersection_count(sb), s.good_rows);
                pairs += 1;
            }
        }
        let contained = sp.a_sets.iter().any(|a| sp.b_sets.iter().any(|b| b.is_subset(a)));
        if f.is_satisfiable().map_err(|e| e.to_string())? {
            ensure!(contained, "satisfiable source without a containment pair");
        }
    }
    Ok(format!("{pairs} pairs over {} instances; satisfiable sources contain b in a", inst.len()))
}

fn c6_signed_identity(inst: &[(CnfFormula, PcpVectorsInstance, PcpParams)]) -> Outcome {
    let g = [
        signed_dot(&GAMMA_ONE, &GAMMA_ONE),
        signed_dot(&ALPHA_ZERO, &GAMMA_ONE),
        signed_dot(&GAMMA_ONE, &BETA_ZERO),
        signed_dot(&ALPHA_ZERO, &BETA_ZERO),
    ];
    ensure!(g == [4, 0, 0, 0], "gadget products {g:?}");
    let mut pairs = 0usize;
    for (_, pv, _) in inst {
        let ip = to_max_ip(&to_subset_instance(pv));
        let sv = to_signed(&ip);
        sv.validate().map_err(|e| e.to_string())?;
        for (a, sa) in ip.a.iter().zip(&sv.a) {
            for (b, sb) in ip.b.iter().zip(&sv.b) {
                ensure!(signed_dot(sa, sb) == 4 * a.intersection_count(b) as i64, "signed product mismatch");
                pairs += 1;
            }
        }
    }
    Ok(format!("gadget products (4,0,0,0); a.b = 4 a'.b' on {pairs} pairs"))
}

fn c7_bucketing() -> Outcome {
    let obj = |x: &BitSet, y: &BitSet| x.intersection_count(y) as i64;
    for seed in 0..50u64 {
        let mut r = rng::stream(7, seed);
        let n = r.gen_range(1..=120);
        let dim = r.gen_range(1..=64);
        let density = r.gen_range(0.1..0.7);
        let mut vec_gen = || BitSet::from_indices(dim, (0..dim).filter(|_| r.gen_bool(density)));
        let ip = MaxIpInstance { dim, a: (0..n).map(|_| vec_gen()).collect(), b: (0..n).map(|_| vec_gen()).collect() };
        let brute = brute_force_max_ip(&ip).map_err(|e| e.to_string())?;
        for x in [0.25, 0.5, 1.0] {
            let got = closest_pair_via_index(&ip.a, &ip.b, LinearScanIndex::build, |idx, q| idx.query(q, obj), x)
                .map_err(|e| e.to_string())?;
            ensure!(got.value == brute.value, "seed {seed}, x={x}: {} vs {}", got.value, brute.value);
        }
    }
    Ok("50 instances x {1/4, 1/2, 1}: bucketed optimum equals brute force".into())
}

fn c8_lcs_blocks() -> Outcome {
    let mut pairs = 0usize;
    for q in [3u64, 5, 7] {
        let field = pcpvec::ff::PrimeField::new(q).map_err(|e| e.to_string())?;
        let polys = zero_constant_polys(field, 2);
        let perms: Vec<Vec<u32>> = polys.iter().map(perm_from_poly).collect();
        for (i, p) in polys.iter().enumerate() {
            for (j, r) in polys.iter().enumerate() {
                let v = lcs(&perms[i], &perms[j]) as u64;
                if i == j {
                    ensure!(v == q * q, "|F|={q}: LCS(pi_p, pi_p) = {v}");
                } else {
                    let deg = p.sub(r).map_err(|e| e.to_string())?.degree().unwrap_or(0).max(1) as u64;
                    ensure!(v <= (2 * q - 1) * deg, "|F|={q}, p={p}, r={r}: LCS {v} > {}", (2 * q - 1) * deg);
                }
                pairs += 1;
            }
        }
    }
    let mut r = rng::from_seed(8);
    let field = pcpvec::ff::PrimeField::new(5).map_err(|e| e.to_string())?;
    let polys = zero_constant_polys(field, 2);
    for _ in 0..100 {
        let blocks = r.gen_range(1..=5);
        let pick = |r: &mut rng::Rng| -> Vec<Vec<u32>> {
            (0..blocks)
                .map(|b| perm_from_poly(polys.choose(r).expect("nonempty")).into_iter().map(|s| s + 25 * b as u32).collect())
                .collect()
        };
        let (xs, ys) = (pick(&mut r), pick(&mut r));
        let sum: usize = xs.iter().zip(&ys).map(|(x, y)| lcs(x, y)).sum();
        ensure!(lcs(&xs.concat(), &ys.concat()) == sum, "additivity failed");
    }
    Ok(format!("{pairs} polynomial pairs within (2|F|-1) max(1, deg); additivity exact on 100 concatenations"))
}

fn c9_regex(inst: &[(CnfFormula, PcpVectorsInstance, PcpParams)]) -> Outcome {
    let mut strings = 0usize;
    let mut binary = 0usize;
    let delta = 0.2;
    for (idx, (_, pv, _)) in inst.iter().enumerate() {
        let ri = RegexInstance::from_pcp(pv).map_err(|e| e.to_string())?;
        ri.validate().map_err(|e| e.to_string())?;
        let mut h = Vec::new();
        for b in &pv.b {
            let best = pv.a.iter().map(|a| score(a, b).map(|s| s.good_rows)).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
            let best = best.into_iter().max().unwrap_or(0) as usize;
            let d = min_hamming(&ri.expr, b).map_err(|e| e.to_string())?;
            ensure!(d == pv.l - best, "min Hamming {d} != L - L max s = {}", pv.l - best);
            h.push(d);
            strings += 1;
        }
        if pv.l * pv.a.len() <= 4000 {
            let d_code = 64;
            let code = BinaryCode::random(ri.alphabet, delta, d_code, idx as u64).map_err(|e| e.to_string())?;
            let t = distance_target(delta, d_code);
            let bin = to_binary(&ri, &code).map_err(|e| e.to_string())?;
            for (y, &d) in bin.strings.iter().zip(&h) {
                let db = min_hamming(&bin.expr, y).map_err(|e| e.to_string())?;
                ensure!(d != 0 || db == 0, "zero distance not preserved");
                ensure!(db >= d * t, "binary distance {db} < {d} * {t}");
                binary += 1;
            }
        }
    }
    Ok(format!("identity on {strings} strings; binary code keeps zeros and scales by >= ceil((1/2-d) d_code) on {binary} strings"))
}

fn c10_diameter(inst: &[(CnfFormula, PcpVectorsInstance, PcpParams)]) -> Outcome {
    let mut pairs = 0usize;
    for (f, pv, _) in inst {
        let d = build_diameter_instance(pv);
        d.validate().map_err(|e| e.to_string())?;
        let xs: Vec<_> = d.points.iter().filter(|p| p.side == PointSide::X).collect();
        let ys: Vec<_> = d.points.iter().filter(|p| p.side == PointSide::Y).collect();
        let l = pv.l as u64;
        let mut diam = 0;
        for (a, x) in pv.a.iter().zip(&xs) {
            for (b, y) in pv.b.iter().zip(&ys) {
                let s = score(a, b).map_err(|e| e.to_string())?.good_rows;
                let d2 = delta_2_inf_sq(x, y).map_err(|e| e.to_string())?;
                ensure!(d2 == l + 3 * s, "cross pair squared distance {d2} != L(1+3s) = {}", l + 3 * s);
                diam = diam.max(d2);
                pairs += 1;
            }
        }
        let same = max_same_side_sq(&d).map_err(|e| e.to_string())?;
        ensure!(same <= l, "same-side squared distance {same} > L = {l}");
        if f.is_satisfiable().map_err(|e| e.to_string())? {
            ensure!(diam.max(same) == 4 * l, "satisfiable source has squared diameter {} != 4L", diam.max(same));
        }
    }
    Ok(format!("Delta^2 = L(1+3s) on {pairs} cross pairs; same side <= L; satisfiable diameter^2 = 4L"))
}

fn run_cli(bin: &Path, dir: &Path, args: &[&str]) -> Result<i32, String> {
    let out = Command::new(bin).args(args).current_dir(dir).output().map_err(|e| e.to_string())?;
    let code = out.status.code().unwrap_or(-1);
    if code == 2 {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(code)
}

fn c11_serialization() -> Outcome {
    let mut docs = 0;
    for (idx, f) in [
        CnfFormula::random_ksat(4, 2, 2, 1).map_err(|e| e.to_string())?,
        CnfFormula::new(2, vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]]).map_err(|e| e.to_string())?,
    ]
    .iter()
    .enumerate()
    {
        let params = PcpParams::for_formula(f, 2, 1, None, MerlinMode::PairwiseHonest).map_err(|e| e.to_string())?;
        let (pdoc, pv) = build_pcp_document(f, &params).map_err(|e| e.to_string())?;
        let mut all = vec![pdoc.clone()];
        for t in Target::ALL {
            let opts = ReduceOptions { seed: idx as u64, ..ReduceOptions::default() };
            all.push(reduce(&pv, pdoc.expected_gap(), pdoc.provenance(), t, &opts).map_err(|e| e.to_string())?);
        }
        let opts = ReduceOptions { binary: true, d_code: 64, ..ReduceOptions::default() };
        all.push(reduce(&pv, pdoc.expected_gap(), pdoc.provenance(), Target::Regexp, &opts).map_err(|e| e.to_string())?);
        for d in all {
            let text = d.to_json();
            let (back, _) = Document::from_json(&text).map_err(|e| format!("{}: {e}", d.kind()))?;
            ensure!(back.to_json() == text, "{} did not round-trip byte-exactly", d.kind());
            docs += 1;
        }
    }

    let bin = Path::new(env!("CARGO_BIN_EXE_pcpvec"));
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    ensure!(run_cli(bin, dir.path(), &["gen-formula", "-n", "4", "-m", "2", "-k", "2", "--seed", "1", "-o", "f.cnf"])? == 0, "gen-formula failed");
    ensure!(run_cli(bin, dir.path(), &["build-pcp", "-f", "f.cnf", "-o", "pcp.json"])? == 0, "build-pcp failed");
    ensure!(run_cli(bin, dir.path(), &["verify-gap", "-i", "pcp.json", "-f", "f.cnf"])? == 0, "verify-gap failed on pcp-vectors");
    for t in ["subset", "maxip", "signed-maxip", "lcs", "regexp", "diameter"] {
        let out = format!("{t}.json");
        ensure!(run_cli(bin, dir.path(), &["reduce", "-i", "pcp.json", "--target", t, "-o", &out])? == 0, "reduce {t} failed");
        ensure!(run_cli(bin, dir.path(), &["verify-gap", "-i", &out, "-f", "f.cnf"])? == 0, "verify-gap failed on {t}");
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(60), "pipeline took {t:?}");
    Ok(format!("{docs} documents round-trip byte-exactly; CLI pipeline on 6 targets passes in {:.2} s", t.as_secs_f64()))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => Err(format!(
            "panicked: {}",
            p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
        )),
    }
}

fn main() {
    let desk = desk_instances();
    let criteria: Vec<Criterion> = vec![
        ("protocol completeness", Box::new(c1_completeness)),
        ("protocol soundness", Box::new(c2_soundness)),
        ("verifier equivalence", Box::new(c3_verifier_equivalence)),
        ("end-to-end gap", Box::new(c4_end_to_end_gap)),
        ("subset / max-IP identity", Box::new(|| c5_subset_identity(&desk))),
        ("signed identity", Box::new(|| c6_signed_identity(&desk))),
        ("bucketing oracle equivalence", Box::new(c7_bucketing)),
        ("LCS block bounds", Box::new(c8_lcs_blocks)),
        ("regex identity", Box::new(|| c9_regex(&desk))),
        ("diameter identity", Box::new(|| c10_diameter(&desk))),
        ("serialization and CLI pipeline", Box::new(c11_serialization)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let res = guarded(f);
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS [{:>2}] {name}: {detail} ({secs:.2} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name}: {detail} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
