//! Verification suites behind `chaos-census verify`. Each suite counts
//! its checks and collects a message per failed one.

use std::collections::BTreeMap;

use census_core::canon::{self, brute_force_ground_aut, structural_ground_aut};
use census_core::chaos::{
    gen_cauchy_schwarz_check, khintchine_reference, moment_combinatorial, moment_direct,
    t1_upper_check, uniform_probe, zlm_lower_chain, ChaosCoefficients,
};
use census_core::covering::SetCollection;
use census_core::enumerate::{
    count_labeled_direct, count_labeled_from, labeled_growth_fit, theorem_p0_report, DegreeMode,
    Filter, Limits, ModeKind, MuTable,
};
use census_core::math::{factorial, ln_biguint};
use census_core::partitions::{
    meinardus_ratio, partitions_min2_table, theorem_p1_ratio, PartitionTable,
};
use census_core::random;
use census_core::transforms::{even_to_double, extend_connected, find_chains, ChainKind};
use num_bigint::BigUint;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CensusError, Result};
use crate::parallel::{enumerate_parallel, fill_table};

pub const SUITES: &[&str] = &[
    "b1",
    "p1",
    "meinardus",
    "p0-chain",
    "l0-fit",
    "l4",
    "l7",
    "l6-fiber",
    "l1",
    "l10",
    "moments-oracle",
    "t1-upper",
    "x53-chain",
    "khintchine",
];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            passed: true,
            ..SuiteReport::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.passed = false;
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// Shared state across suites: the seed, trial override, limits and a μ
/// table that fills lazily (and can be preloaded from the cache).
#[derive(Clone, Debug)]
pub struct Context {
    pub seed: u64,
    pub trials: Option<u64>,
    pub limits: Limits,
    pub table: MuTable,
}

impl Context {
    pub fn new(seed: u64, limits: Limits) -> Self {
        Context {
            seed,
            trials: None,
            limits,
            table: MuTable::new(),
        }
    }

    pub fn mu(&mut self, l: u32, p: u32, kind: ModeKind, filter: Filter) -> Result<BigUint> {
        let mode = DegreeMode::new(kind, l);
        fill_table(&mut self.table, &[(p, mode)], self.limits)?;
        Ok(self.table.require(l, p, kind, filter)?.clone())
    }

    fn rng(&self, suite: &str) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        let stream = SUITES.iter().position(|s| *s == suite).unwrap_or(SUITES.len());
        r.set_stream(stream as u64);
        r
    }

    fn trials(&self, default: u64) -> u64 {
        self.trials.unwrap_or(default)
    }
}

/// Runs one suite by name, or every suite for `"all"`.
pub fn run(name: &str, ctx: &mut Context) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_suite(s, ctx)).collect();
    }
    Ok(vec![run_suite(name, ctx)?])
}

pub fn run_suite(name: &str, ctx: &mut Context) -> Result<SuiteReport> {
    match name {
        "b1" => b1(ctx),
        "p1" => p1(ctx),
        "meinardus" => meinardus(),
        "p0-chain" => p0_chain(ctx),
        "l0-fit" => l0_fit(ctx),
        "l4" => l4(ctx),
        "l7" => l7(ctx),
        "l6-fiber" => l6_fiber(ctx),
        "l1" => l1(ctx),
        "l10" => l10(ctx),
        "moments-oracle" => moments_oracle(ctx),
        "t1-upper" => t1_upper(ctx),
        "x53-chain" => x53_chain(ctx),
        "khintchine" => khintchine(),
        other => Err(CensusError::format(format!(
            "unknown suite {other:?}; expected one of {} or all",
            SUITES.join(", ")
        ))),
    }
}

fn b1(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("b1");
    let t = PartitionTable::new(16);
    let min2 = partitions_min2_table(16);
    for p in 2..=7u32 {
        let got = ctx.mu(2, p, ModeKind::Exact, Filter::Full)?;
        let want = t.difference(p as usize)?;
        rep.check(got == want, || format!("p={p}: enumerated {got}, nu(p)-nu(p-1) = {want}"));
        rep.check(min2[p as usize] == want, || format!("p={p}: min-part-2 count {}", min2[p as usize]));
        rep.note(format!("p={p}: mu_2,p = {got}"));
    }
    Ok(rep)
}

/// Number of pairs of partitions with parts >= 2 whose sizes add to `p`.
fn two_colour_min2(p: usize) -> BigUint {
    let m = partitions_min2_table(p.max(2));
    let at = |k: usize| if k == 1 { BigUint::from(0u32) } else { m[k].clone() };
    (0..=p).map(|k| at(k) * at(p - k)).sum()
}

fn p1(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("p1");
    for p in 3..=7u32 {
        let full = ctx.mu(2, p, ModeKind::Exact, Filter::Full)?;
        let star = ctx.mu(2, p, ModeKind::AtMost, Filter::Full)?;
        rep.check(star == &full * 2u32, || {
            format!("p={p}: mu*_2,p = {star}, 2 mu_2,p = {}", &full * 2u32)
        });
        let two = two_colour_min2(p as usize);
        rep.note(format!(
            "p={p}: mu*_2,p = {star}; two-colour partitions into parts >= 2: {two}"
        ));
        let c = ctx.mu(2, p, ModeKind::Exact, Filter::Connected)?;
        let cs = ctx.mu(2, p, ModeKind::AtMost, Filter::Connected)?;
        rep.check(c == BigUint::from(1u32), || format!("p={p}: connected (exact) = {c}"));
        rep.check(cs == BigUint::from(2u32), || format!("p={p}: connected (at most) = {cs}"));
    }
    let t = PartitionTable::new(2000);
    for p in [100usize, 500, 2000] {
        rep.note(format!("p={p}: 2(nu(p)-nu(p-1)) / asymptotic = {:.6}", theorem_p1_ratio(&t, p)?));
    }
    Ok(rep)
}

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

fn meinardus() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("meinardus");
    let t = PartitionTable::new(2000);
    let dp = partition_dp(200);
    for (n, want) in dp.iter().enumerate() {
        let got = t.nu(n)?;
        rep.check(got == want, || format!("n={n}: recurrence {got}, DP {want}"));
    }
    let r500 = meinardus_ratio(&t, 500)?;
    let r2000 = meinardus_ratio(&t, 2000)?;
    rep.check(r2000 > 0.95 && r2000 < 1.0, || format!("ratio at 2000 = {r2000}"));
    rep.check((1.0 - r2000).abs() < (1.0 - r500).abs(), || {
        format!("ratio at 2000 ({r2000}) not closer to 1 than at 500 ({r500})")
    });
    rep.note(format!("nu(n)/asymptotic: n=500 {r500:.6}, n=2000 {r2000:.6}"));
    Ok(rep)
}

fn p0_chain(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("p0-chain");
    for (l, ps) in [(2u32, 2..=7u32), (3, 2..=6), (4, 2..=5)] {
        let ps: Vec<u32> = ps.collect();
        for &p in &ps {
            for kind in [ModeKind::Exact, ModeKind::AtMost] {
                ctx.mu(l, p, kind, Filter::Full)?;
            }
        }
        let r = theorem_p0_report(l, &ps, &ctx.table)?;
        for row in &r.rows {
            rep.check(row.inner_holds, || {
                format!("l={l} p={}: standard {} > at-most full {}", row.p, row.mu_standard, row.mu_star_full)
            });
        }
        rep.check(r.a_fit.is_finite() && r.a_fit > 0.0, || format!("l={l}: a fit {}", r.a_fit));
        rep.check(r.b_fit.is_finite() && r.b_fit > 0.0, || format!("l={l}: b fit {}", r.b_fit));
        rep.note(format!("l={l}: a(l) ~ {:.6}, b(l) ~ {:.6}", r.a_fit, r.b_fit));
    }
    Ok(rep)
}

fn l0_fit(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("l0-fit");
    for (l, ps, direct_max) in [(2u32, 2..=8u32, 6u32), (3, 2..=6, 4)] {
        let mut cells = Vec::new();
        for p in ps {
            let mode = DegreeMode::Exact(l);
            let reps = enumerate_parallel(p, mode, ctx.limits)?;
            let n = count_labeled_from(&reps, p, mode)?;
            if p <= direct_max {
                let d = count_labeled_direct(p, mode, 8)?;
                rep.check(d == n, || format!("l={l} p={p}: orbit sum {n}, direct {d}"));
            }
            cells.push((p, n));
        }
        let c = labeled_growth_fit(l, &cells);
        rep.check(c.is_finite() && c > 0.0, || format!("l={l}: fitted constant {c}"));
        for (p, n) in &cells {
            let bound = *p as f64 * (c.ln() + (l as f64 - 1.0) * (*p as f64).ln());
            rep.check(ln_biguint(n) <= bound + 1e-9, || format!("l={l} p={p}: count above fit"));
        }
        rep.note(format!("l={l}: c(l) ~ {c:.6}"));
    }
    Ok(rep)
}

fn small_cells() -> Vec<(u32, DegreeMode)> {
    let mut cells = Vec::new();
    for p in 2..=8 {
        cells.push((p, DegreeMode::Exact(2)));
        cells.push((p, DegreeMode::AtMost(2)));
    }
    for p in 2..=5 {
        cells.push((p, DegreeMode::Exact(3)));
        cells.push((p, DegreeMode::AtMost(3)));
    }
    for p in 2..=4 {
        cells.push((p, DegreeMode::Exact(4)));
    }
    cells
}

fn l4(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("l4");
    let bound = BigUint::from(324u32);
    let mut standard = 0;
    for r in enumerate_parallel(4, DegreeMode::Exact(3), ctx.limits)? {
        let c = SetCollection::from_multigraph(&r.graph)?;
        if !canon::is_standard(&c)? {
            continue;
        }
        standard += 1;
        let aut = canon::ground_rearrangement_count(&c)?.ground_aut;
        let size = canon::eclass_size(&c)?;
        rep.check(aut <= bound, || format!("{c}: ground_aut {aut} > 324"));
        rep.check(&size * &bound >= factorial(6), || format!("{c}: eclass size {size} < 6!/324"));
    }
    rep.note(format!("standard (3,4) classes checked: {standard}"));
    let mut total = 0;
    for (p, mode) in small_cells() {
        let n = (p * mode.l() / 2) as usize;
        if n > 8 {
            continue;
        }
        for r in enumerate_parallel(p, mode, ctx.limits)? {
            let c = SetCollection::from_multigraph(&r.graph)?;
            let e = c.ground().len();
            let aut = brute_force_ground_aut(&c)?;
            let structural = structural_ground_aut(&r.graph)?;
            rep.check(aut == structural, || format!("{c}: brute {aut}, structural {structural}"));
            let size = canon::eclass_size_on(&c, n)?;
            let lhs = size * &aut * factorial((n - e) as u64);
            rep.check(lhs == factorial(n as u64), || format!("{c}: orbit-stabilizer fails on {n}"));
            total += 1;
        }
    }
    rep.note(format!("orbit-stabilizer checked on {total} classes"));
    Ok(rep)
}

fn l7(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("l7");
    let mut max_seen = 0;
    for l in [2u32, 3] {
        for p in 2..=6u32 {
            for r in enumerate_parallel(p, DegreeMode::Exact(l), ctx.limits)? {
                let c = SetCollection::from_multigraph(&r.graph)?;
                for len in 1..=p as usize {
                    for kind in [ChainKind::X, ChainKind::Y] {
                        let n = find_chains(&c, kind, len)?.len();
                        max_seen = max_seen.max(n);
                        rep.check(n <= p as usize, || format!("{c} {kind:?} r={len}: {n} chains"));
                    }
                }
            }
        }
    }
    rep.note(format!("largest chain count seen: {max_seen}"));
    Ok(rep)
}

fn l6_fiber(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("l6-fiber");
    for q in [3u32, 4] {
        let sources = enumerate_parallel(q, DegreeMode::Exact(2), ctx.limits)?;
        for p in [5usize, 6] {
            let mut fibers: BTreeMap<canon::CanonicalCode, usize> = BTreeMap::new();
            for r in sources.iter().filter(|r| r.graph.is_connected()) {
                let c = SetCollection::from_multigraph(&r.graph)?;
                let out = extend_connected(&c, p)?;
                rep.check(out.is_connected() && out.is_double_covering(), || {
                    format!("{c} -> {out}: not a connected double-covering")
                });
                *fibers.entry(canon::collection_code(&out)?).or_insert(0) += 1;
            }
            for (code, n) in &fibers {
                rep.check(*n <= p, || format!("q={q} p={p}: {n} sources reach {code}"));
            }
            rep.note(format!("q={q} p={p}: {} target classes", fibers.len()));
        }
    }
    Ok(rep)
}

fn l1(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("l1");
    let mut r = ctx.rng("l1");
    for _ in 0..ctx.trials(500) {
        let c = random::random_even_covering(&mut r, 7, 6);
        let red = even_to_double(&c)?;
        let ground = c.ground();
        let fixes = red
            .map
            .iter()
            .all(|(from, to)| ground.binary_search(&from).is_err() || from == to);
        rep.check(red.collection.is_double_covering() && red.verify(&c) && fixes, || {
            format!("{c} -> {}", red.collection)
        });
    }
    Ok(rep)
}

fn l10(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("l10");
    let mut r = ctx.rng("l10");
    let instances = (0..ctx.trials(1000))
        .map(|_| random::random_variable_covering(&mut r, 5))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let checks = instances
        .par_iter()
        .map(gen_cauchy_schwarz_check)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    for (k, c) in checks.iter().enumerate() {
        rep.check(c.holds, || format!("trial {k}: lhs^2 exceeds {}", c.rhs_sq));
    }
    Ok(rep)
}

fn moments_oracle(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("moments-oracle");
    let mut r = ctx.rng("moments-oracle");
    let mut instances = Vec::new();
    for _ in 0..ctx.trials(200) {
        let l = if r.gen_bool(0.5) { 2 } else { 3 };
        instances.push(random::random_coefficients(&mut r, l, 5, 4)?);
    }
    let outcomes = instances
        .par_iter()
        .map(|b| -> Result<Vec<(u32, BigRational, BigRational)>> {
            [2u32, 4, 6]
                .iter()
                .map(|&p| Ok((p, moment_combinatorial(b, p)?, moment_direct(b, p)?)))
                .collect()
        })
        .collect::<Result<Vec<_>>>()?;
    for (k, rows) in outcomes.iter().enumerate() {
        for (p, a, b) in rows {
            rep.check(a == b, || format!("trial {k} p={p}: combinatorial {a}, direct {b}"));
        }
    }
    let u = ChaosCoefficients::uniform(2, 3)?;
    let w = moment_combinatorial(&u, 4)?;
    rep.check(w == BigRational::from_integer(21.into()), || format!("uniform Z_2(3), p=4: {w}"));
    Ok(rep)
}

fn t1_upper(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("t1-upper");
    let mut r = ctx.rng("t1-upper");
    for (l, p) in [(2u32, 4u32), (3, 4)] {
        let mu_full = ctx.mu(l, p, ModeKind::Exact, Filter::Full)?;
        let trials = ctx.trials(100);
        let bs = (0..trials)
            .map(|_| random::random_coefficients(&mut r, l as usize, 6, 7))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let checks = bs
            .par_iter()
            .map(|b| t1_upper_check(b, p, &mu_full))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        for (k, c) in checks.iter().enumerate() {
            rep.check(c.holds, || format!("l={l} p={p} trial {k}: {} > {}", c.moment, c.bound));
        }
        rep.note(format!("l={l} p={p}: mu(full) = {mu_full}"));
    }
    Ok(rep)
}

fn x53_chain(ctx: &mut Context) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("x53-chain");
    for (l, p, m) in [(2u32, 2u32, 4u32), (2, 4, 6), (3, 2, 6)] {
        let mu_std = ctx.mu(l, p, ModeKind::Exact, Filter::Standard)?;
        let c = zlm_lower_chain(l, p, m, &mu_std)?;
        rep.check(c.holds, || format!("(l,p,m)=({l},{p},{m}): {} < {}", c.lhs, c.rhs));
        rep.note(format!("(l,p,m)=({l},{p},{m}): lhs {} >= rhs {}", c.lhs, c.rhs));
    }
    let probes = (4..=10)
        .map(|m| uniform_probe(2, 4, m))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    for w in probes.windows(2) {
        rep.check(w[0].ratio_pow <= w[1].ratio_pow, || {
            format!("uniform ratio drops from m={} to m={}", w[0].m, w[1].m)
        });
    }
    for pr in &probes {
        rep.note(format!("m={}: ||f||_4/||b|| = {:.6}", pr.m, pr.ratio));
    }
    Ok(rep)
}

fn khintchine() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("khintchine");
    for n in 1..=50u64 {
        let r = khintchine_reference(4, n)?;
        let want = BigRational::from_integer(3.into()) - BigRational::new(2.into(), n.into());
        rep.check(r.value == want, || format!("p=4 n={n}: {}", r.value));
    }
    let r = khintchine_reference(6, 1000)?;
    rep.check(r.within_double_factorial, || format!("p=6 n=1000: {} above 15", r.value));
    rep.check(r.relative_to_limit >= 0.98, || {
        format!("p=6 n=1000: {} not within 2% of 15", r.relative_to_limit)
    });
    rep.note(format!("p=6 n=1000: value/15 = {:.6}", r.relative_to_limit));
    Ok(rep)
}
