//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any
//! criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use census_core::canon::{self, brute_force_ground_aut};
use census_core::chaos::{
    gen_cauchy_schwarz_check, khintchine_reference, moment_combinatorial, moment_direct,
    t1_upper_check, uniform_probe, zlm_lower_chain, ChaosCoefficients,
};
use census_core::covering::SetCollection;
use census_core::enumerate::{
    census, theorem_p0_report, DegreeMode, Filter, Limits, ModeKind, MuTable,
};
use census_core::math::factorial;
use census_core::partitions::{meinardus_ratio, PartitionTable};
use census_core::random;
use census_core::transforms::{even_to_double, extend_connected, find_chains, ChainKind};
use chaos_census::parallel::{enumerate_parallel, fill_table};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mu(table: &mut MuTable, l: u32, p: u32, kind: ModeKind, filter: Filter) -> BigUint {
    fill_table(table, &[(p, DegreeMode::new(kind, l))], Limits::default()).unwrap();
    table.get(l, p, kind, filter).unwrap().clone()
}

fn within(start: Instant, secs: u64) -> Result<Duration, String> {
    let t = start.elapsed();
    if t < Duration::from_secs(secs) {
        Ok(t)
    } else {
        Err(format!("took {t:.1?}, budget {secs} s"))
    }
}

/// Coin-change count of partitions, independent of the pentagonal recurrence.
fn partition_dp(max_n: usize) -> Vec<BigUint> {
    let mut v = vec![BigUint::from(0u32); max_n + 1];
    v[0] = BigUint::from(1u32);
    for part in 1..=max_n {
        for n in part..=max_n {
            let add = v[n - part].clone();
            v[n] += add;
        }
    }
    v
}

fn c1() -> Outcome {
    let start = Instant::now();
    let dp = partition_dp(7);
    let mut got = Vec::new();
    for p in 2..=7u32 {
        let reps = enumerate_parallel(p, DegreeMode::Exact(2), Limits::default()).unwrap();
        let full = census(&reps).unwrap().full;
        let want = &dp[p as usize] - &dp[p as usize - 1];
        if full != want {
            return Err(format!("p={p}: enumerated {full}, nu(p)-nu(p-1) = {want}"));
        }
        got.push(full.to_string());
    }
    let t = within(start, 60)?;
    Ok(format!("mu_2,p for p=2..7 = [{}] in {t:.2?}", got.join(", ")))
}

fn c2a(table: &mut MuTable) -> Outcome {
    let mut bad = Vec::new();
    for p in 3..=7 {
        let full = mu(table, 2, p, ModeKind::Exact, Filter::Full);
        let star = mu(table, 2, p, ModeKind::AtMost, Filter::Full);
        if star != &full * 2u32 {
            bad.push(format!("p={p}: mu*={star} vs 2mu={}", full * 2u32));
        }
    }
    if bad.is_empty() {
        Ok("mu*_2,p = 2 mu_2,p for p=3..7".into())
    } else {
        Err(bad.join("; "))
    }
}

fn c2b(table: &mut MuTable) -> Outcome {
    for p in 3..=7 {
        let c = mu(table, 2, p, ModeKind::Exact, Filter::Connected);
        let cs = mu(table, 2, p, ModeKind::AtMost, Filter::Connected);
        if c != BigUint::from(1u32) || cs != BigUint::from(2u32) {
            return Err(format!("p={p}: connected exact {c}, at most {cs}"));
        }
    }
    Ok("connected counts 1 (exact) and 2 (at most) for p=3..7".into())
}

fn c3() -> Outcome {
    let t = PartitionTable::new(2000);
    let dp = partition_dp(200);
    for (n, want) in dp.iter().enumerate() {
        if t.nu(n).unwrap() != want {
            return Err(format!("nu({n}) disagrees with DP"));
        }
    }
    let r500 = meinardus_ratio(&t, 500).unwrap();
    let r2000 = meinardus_ratio(&t, 2000).unwrap();
    if !(r2000 > 0.95 && r2000 < 1.0) {
        return Err(format!("ratio at 2000 = {r2000}"));
    }
    if (1.0 - r2000).abs() >= (1.0 - r500).abs() {
        return Err(format!("ratio at 2000 ({r2000}) not closer to 1 than at 500 ({r500})"));
    }
    Ok(format!("ratio 500: {r500:.6}, 2000: {r2000:.6}; DP agrees for n <= 200"))
}

fn c4() -> Outcome {
    let start = Instant::now();
    let mut r = rng(4);
    let mut compared = 0;
    for k in 0..200 {
        let l = if r.gen_bool(0.5) { 2 } else { 3 };
        let b = random::random_coefficients(&mut r, l, 5, 4).unwrap();
        for p in [2u32, 4, 6] {
            let a = moment_combinatorial(&b, p).unwrap();
            let d = moment_direct(&b, p).unwrap();
            if a != d {
                return Err(format!("instance {k} p={p}: {a} vs {d}"));
            }
            compared += 1;
        }
    }
    let u = ChaosCoefficients::uniform(2, 3).unwrap();
    let w = moment_combinatorial(&u, 4).unwrap();
    if w != int(21) {
        return Err(format!("uniform Z_2(3) fourth moment {w}"));
    }
    let t = within(start, 120)?;
    Ok(format!("{compared} exact agreements plus worked value 21 in {t:.2?}"))
}

fn c5(table: &mut MuTable) -> Outcome {
    let mut r = rng(5);
    for (l, p) in [(2u32, 4u32), (3, 4)] {
        let mu_full = mu(table, l, p, ModeKind::Exact, Filter::Full);
        for k in 0..100 {
            let b = random::random_coefficients(&mut r, l as usize, 6, 7).unwrap();
            let c = t1_upper_check(&b, p, &mu_full).unwrap();
            if !c.holds {
                return Err(format!("(l,p)=({l},{p}) instance {k}: {} > {}", c.moment, c.bound));
            }
        }
    }
    Ok("200 random b within the upper bound".into())
}

fn c6(table: &mut MuTable) -> Outcome {
    let mut msg = Vec::new();
    for (l, p, m) in [(2u32, 2u32, 4u32), (2, 4, 6), (3, 2, 6)] {
        let s = mu(table, l, p, ModeKind::Exact, Filter::Standard);
        let c = zlm_lower_chain(l, p, m, &s).unwrap();
        if !c.holds {
            return Err(format!("({l},{p},{m}): {} < {}", c.lhs, c.rhs));
        }
        msg.push(format!("({l},{p},{m}) {}>={}", c.lhs, c.rhs));
    }
    let probes: Vec<_> = (4..=10).map(|m| uniform_probe(2, 4, m).unwrap()).collect();
    if let Some(w) = probes.windows(2).find(|w| w[0].ratio_pow > w[1].ratio_pow) {
        return Err(format!("uniform ratio decreases at m={}", w[1].m));
    }
    let ratios: Vec<String> = probes.iter().map(|p| format!("{:.4}", p.ratio)).collect();
    Ok(format!("{}; uniform ratios m=4..10 [{}]", msg.join(", "), ratios.join(", ")))
}

fn c7() -> Outcome {
    let mut r = rng(7);
    for k in 0..1000 {
        let v = random::random_variable_covering(&mut r, 5).unwrap();
        if !gen_cauchy_schwarz_check(&v).unwrap().holds {
            return Err(format!("violation at instance {k}"));
        }
    }
    Ok("0 violations in 1000 instances".into())
}

fn c8() -> Outcome {
    let mut r = rng(8);
    for k in 0..500 {
        let c = random::random_even_covering(&mut r, 7, 6);
        let red = even_to_double(&c).unwrap();
        if !red.collection.is_double_covering() || !red.verify(&c) {
            return Err(format!("instance {k}: {c}"));
        }
        let ground = red.collection.ground();
        if !red.map.is_onto(&c.ground()) || red.map.iter().any(|(from, _)| ground.binary_search(&from).is_err()) {
            return Err(format!("instance {k}: map is not a surjection from the new ground"));
        }
    }
    Ok("500 reductions verified".into())
}

fn c9() -> Outcome {
    let bound = BigUint::from(324u32);
    let mut standard = 0;
    for rep in enumerate_parallel(4, DegreeMode::Exact(3), Limits::default()).unwrap() {
        let c = SetCollection::from_multigraph(&rep.graph).unwrap();
        if !canon::is_standard(&c).unwrap() {
            continue;
        }
        standard += 1;
        let aut = canon::ground_rearrangement_count(&c).unwrap().ground_aut;
        let size = canon::eclass_size(&c).unwrap();
        if aut > bound || &size * &bound < factorial(6) {
            return Err(format!("{c}: aut {aut}, eclass size {size}"));
        }
    }
    let mut checked = 0;
    for l in 2..=8u32 {
        for p in 2..=8u32 {
            let n = (p * l / 2) as usize;
            if n > 8 {
                continue;
            }
            for mode in [DegreeMode::Exact(l), DegreeMode::AtMost(l)] {
                for rep in enumerate_parallel(p, mode, Limits::default()).unwrap() {
                    let c = SetCollection::from_multigraph(&rep.graph).unwrap();
                    let e = c.ground().len();
                    let aut = brute_force_ground_aut(&c).unwrap();
                    let size = canon::eclass_size_on(&c, n).unwrap();
                    if size * aut * factorial((n - e) as u64) != factorial(n as u64) {
                        return Err(format!("orbit-stabilizer fails for {c} on {n} points"));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{standard} standard (3,4) classes within 324; orbit-stabilizer on {checked} classes"))
}

fn c10() -> Outcome {
    let mut classes = 0;
    for l in [2u32, 3] {
        for p in 2..=6u32 {
            for rep in enumerate_parallel(p, DegreeMode::Exact(l), Limits::default()).unwrap() {
                let c = SetCollection::from_multigraph(&rep.graph).unwrap();
                classes += 1;
                for len in 1..=p as usize {
                    for kind in [ChainKind::X, ChainKind::Y] {
                        let n = find_chains(&c, kind, len).unwrap().len();
                        if n > p as usize {
                            return Err(format!("{c} {kind:?} r={len}: {n} chains"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("chain counts <= p on {classes} classes"))
}

fn c11() -> Outcome {
    let mut worst = 0;
    for q in [3u32, 4] {
        let sources = enumerate_parallel(q, DegreeMode::Exact(2), Limits::default()).unwrap();
        for p in [5usize, 6] {
            let mut fibers: BTreeMap<_, usize> = BTreeMap::new();
            for rep in sources.iter().filter(|r| r.graph.is_connected()) {
                let c = SetCollection::from_multigraph(&rep.graph).unwrap();
                let out = extend_connected(&c, p).unwrap();
                if !out.is_connected() || out.len() != p {
                    return Err(format!("{c} extends to {out}"));
                }
                *fibers.entry(canon::collection_code(&out).unwrap()).or_insert(0) += 1;
            }
            let big = fibers.values().copied().max().unwrap_or(0);
            if big > p {
                return Err(format!("q={q} p={p}: fiber of size {big}"));
            }
            worst = worst.max(big);
        }
    }
    Ok(format!("largest fiber {worst}"))
}

fn c12(table: &mut MuTable) -> Outcome {
    let mut msg = Vec::new();
    for (l, max_p) in [(2u32, 7u32), (3, 6), (4, 5)] {
        let ps: Vec<u32> = (2..=max_p).collect();
        for &p in &ps {
            mu(table, l, p, ModeKind::Exact, Filter::Full);
            mu(table, l, p, ModeKind::AtMost, Filter::Full);
        }
        let r = theorem_p0_report(l, &ps, table).unwrap();
        if !r.inner_inequality_holds() {
            return Err(format!("l={l}: standard count exceeds at-most count"));
        }
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !ok(r.a_fit) || !ok(r.b_fit) {
            return Err(format!("l={l}: a={} b={}", r.a_fit, r.b_fit));
        }
        msg.push(format!("l={l} a={:.4} b={:.4}", r.a_fit, r.b_fit));
    }
    Ok(msg.join(", "))
}

fn c13() -> Outcome {
    for n in 1..=50u64 {
        let r = khintchine_reference(4, n).unwrap();
        let want = int(3) - BigRational::new(BigInt::from(2), BigInt::from(n));
        if r.value != want {
            return Err(format!("p=4 n={n}: {}", r.value));
        }
    }
    let r = khintchine_reference(6, 1000).unwrap();
    let v = census_core::math::rational_to_f64(&r.value);
    if v > 15.0 || v < 15.0 * 0.98 {
        return Err(format!("p=6 n=1000: {v}"));
    }
    Ok(format!("3 - 2/n exact for n=1..50; p=6 n=1000 gives {v:.4}"))
}

fn main() {
    let mut table = MuTable::new();
    let criteria: Vec<(&str, Box<dyn FnOnce(&mut MuTable) -> Outcome>)> = vec![
        ("1 (b1 identity)", Box::new(|_| c1())),
        ("2a (mu*_2,p = 2 mu_2,p)", Box::new(c2a)),
        ("2b (connected quadratic counts)", Box::new(c2b)),
        ("3 (partition asymptotic)", Box::new(|_| c3())),
        ("4 (moment oracle equivalence)", Box::new(|_| c4())),
        ("5 (moment upper bound)", Box::new(c5)),
        ("6 (lower-bound chain)", Box::new(c6)),
        ("7 (generalized Cauchy-Schwarz)", Box::new(|_| c7())),
        ("8 (even-to-double reduction)", Box::new(|_| c8())),
        ("9 (rearrangement bound, orbit-stabilizer)", Box::new(|_| c9())),
        ("10 (chain counts)", Box::new(|_| c10())),
        ("11 (extension fiber bound)", Box::new(|_| c11())),
        ("12 (standard vs at-most inequality)", Box::new(c12)),
        ("13 (Khintchine reference)", Box::new(|_| c13())),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f(&mut table) {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    println!("acceptance: {failed} criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
