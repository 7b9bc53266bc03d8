//! Seeded generators for randomized suites. Every function takes the RNG
//! explicitly, so a fixed seed reproduces the same instances.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::chaos::{ChaosCoefficients, VariableCovering};
use crate::covering::{Element, Multigraph, SetCollection};
use crate::error::Result;

/// Random loopless multigraph on `p` vertices with every degree in
/// `1..=l` (vertices that stay isolated are dropped).
pub fn random_multigraph<R: Rng + ?Sized>(rng: &mut R, p: usize, l: u32) -> Multigraph {
    let mut g = Multigraph::new(p);
    let steps = rng.gen_range(1..=p * l as usize);
    for _ in 0..steps {
        let open: Vec<usize> = (0..p).filter(|&i| g.degree(i) < l).collect();
        if open.len() < 2 {
            break;
        }
        let i = *open.choose(rng).expect("nonempty");
        let j = loop {
            let j = *open.choose(rng).expect("nonempty");
            if j != i {
                break j;
            }
        };
        g.add_edges(i, j, 1);
    }
    let live: Vec<usize> = (0..p).filter(|&i| g.degree(i) > 0).collect();
    g.induced(&live)
}

/// Random double-covering with at most `p` members of size at most `l`,
/// with ground labels scattered over `1..=4 * #ground`.
pub fn random_double_covering<R: Rng + ?Sized>(rng: &mut R, p: usize, l: u32) -> SetCollection {
    let g = random_multigraph(rng, p.max(2), l);
    let c = SetCollection::from_multigraph(&g).expect("multigraph edges form a double-covering");
    scatter_labels(rng, &c)
}

/// Injective relabeling of the ground set onto random labels.
pub fn scatter_labels<R: Rng + ?Sized>(rng: &mut R, c: &SetCollection) -> SetCollection {
    let ground = c.ground();
    let span = (4 * ground.len().max(1)) as Element;
    let mut pool: Vec<Element> = (1..=span).collect();
    pool.shuffle(rng);
    let map: BTreeMap<Element, Element> = ground.iter().copied().zip(pool).collect();
    c.relabel(|e| map[&e])
}

/// Random permutation of the collection's own ground set.
pub fn permute_ground<R: Rng + ?Sized>(rng: &mut R, c: &SetCollection) -> SetCollection {
    let ground = c.ground();
    let mut image = ground.clone();
    image.shuffle(rng);
    let map: BTreeMap<Element, Element> = ground.into_iter().zip(image).collect();
    c.relabel(|e| map[&e])
}

/// Random even-covering: each of `1..=ground` lies in 2 or 4 (when
/// possible) distinct members out of `p`; empty members are dropped.
pub fn random_even_covering<R: Rng + ?Sized>(rng: &mut R, p: usize, ground: u32) -> SetCollection {
    let p = p.max(2);
    let mut members = vec![Vec::new(); p];
    let slots: Vec<usize> = (0..p).collect();
    for e in 1..=ground {
        let count = if p >= 4 && rng.gen_bool(0.4) { 4 } else { 2 };
        for &k in slots.choose_multiple(rng, count) {
            members[k].push(e);
        }
    }
    members.retain(|m| !m.is_empty());
    SetCollection::new(members).expect("empty members removed")
}

fn random_rational<R: Rng + ?Sized>(rng: &mut R, max_abs: i64, positive: bool) -> BigRational {
    let lo = if positive { 1 } else { -max_abs };
    let mut num = rng.gen_range(lo..=max_abs);
    if num == 0 {
        num = 1;
    }
    let den = rng.gen_range(1..=3i64);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Random coefficients on a nonempty random subfamily of the `l`-subsets
/// of `{1, ..., m}`, with small signed rational values.
pub fn random_coefficients<R: Rng + ?Sized>(
    rng: &mut R,
    l: usize,
    m: u32,
    max_abs: i64,
) -> Result<ChaosCoefficients> {
    let all = ChaosCoefficients::uniform(l, m)?;
    let mut keys: Vec<Vec<Element>> = all.terms().map(|(k, _)| k.clone()).collect();
    keys.shuffle(rng);
    let take = rng.gen_range(1..=keys.len().max(1));
    keys.truncate(take);
    let terms: Vec<(Vec<Element>, BigRational)> = keys
        .into_iter()
        .map(|k| (k, random_rational(rng, max_abs, false)))
        .collect();
    ChaosCoefficients::new(l, terms)
}

/// Random variable covering: the sets come from a random double-covering
/// or even-covering of at most `max_vars` variables, each variable ranges
/// over `0..range` with `range` in `1..=3`, and the sequences hold positive
/// rationals.
pub fn random_variable_covering<R: Rng + ?Sized>(rng: &mut R, max_vars: u32) -> Result<VariableCovering> {
    let sets = loop {
        let c = if rng.gen_bool(0.5) {
            let p = rng.gen_range(2..=5);
            let l = rng.gen_range(1..=3);
            random_double_covering(rng, p, l)
        } else {
            let p = rng.gen_range(2..=6);
            let g = rng.gen_range(1..=max_vars.max(1));
            random_even_covering(rng, p, g)
        };
        if c.ground().len() as u32 <= max_vars {
            break c;
        }
    };
    let range = rng.gen_range(1..=3u32);
    let seqs = sets
        .members()
        .iter()
        .map(|m| {
            let len = range.pow(m.len() as u32) as usize;
            (0..len).map(|_| random_rational(rng, 9, true)).collect()
        })
        .collect();
    VariableCovering::new(sets.members().to_vec(), range, seqs)
}
