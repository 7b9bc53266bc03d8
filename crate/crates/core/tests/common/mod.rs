#![allow(dead_code)]

use std::collections::BTreeSet;

use census_core::covering::{Element, Multigraph, SetCollection};
use census_core::enumerate::DegreeMode;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn coll(sets: &[&[Element]]) -> SetCollection {
    SetCollection::new(sets.iter().map(|s| s.iter().copied())).unwrap()
}

pub fn cycle(p: u32, offset: u32) -> SetCollection {
    SetCollection::new((0..p).map(|k| [offset + k, offset + (k + 1) % p])).unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, n - 1);
            out.push(v);
        }
    }
    out
}

/// Smallest upper-triangle sequence over every vertex order.
pub fn brute_canonical(g: &Multigraph) -> Vec<u32> {
    let p = g.order();
    permutations(p)
        .into_iter()
        .map(|perm| {
            let mut v = Vec::new();
            for i in 0..p {
                for j in i + 1..p {
                    v.push(g.get(perm[i], perm[j]));
                }
            }
            v
        })
        .min()
        .unwrap_or_default()
}

fn allowed(mode: DegreeMode, d: u32) -> bool {
    match mode {
        DegreeMode::Exact(l) => d == l,
        DegreeMode::AtMost(l) => d >= 1 && d <= l,
    }
}

/// Every labeled multiplicity matrix on `p` vertices obeying the degree
/// constraint, reduced to brute-force canonical forms.
pub fn brute_classes(p: usize, mode: DegreeMode) -> BTreeSet<Vec<u32>> {
    let l = match mode {
        DegreeMode::Exact(l) | DegreeMode::AtMost(l) => l,
    };
    let pairs: Vec<(usize, usize)> = (0..p)
        .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
        .collect();
    let mut out = BTreeSet::new();
    let mut g = Multigraph::new(p);
    fn rec(
        k: usize,
        pairs: &[(usize, usize)],
        g: &mut Multigraph,
        l: u32,
        mode: DegreeMode,
        out: &mut BTreeSet<Vec<u32>>,
    ) {
        if k == pairs.len() {
            if (0..g.order()).all(|v| allowed(mode, g.degree(v))) {
                out.insert(brute_canonical(g));
            }
            return;
        }
        let (i, j) = pairs[k];
        // once the last pair touching vertex i is placed its degree is final
        let room = l.saturating_sub(g.degree(i).max(g.degree(j)));
        for m in 0..=room {
            g.set(i, j, m);
            let i_done = pairs[k + 1..].iter().all(|&(a, b)| a != i && b != i);
            if !i_done || allowed(mode, g.degree(i)) {
                rec(k + 1, pairs, g, l, mode, out);
            }
        }
        g.set(i, j, 0);
    }
    rec(0, &pairs, &mut g, l, mode, &mut out);
    out
}

/// Coefficients of `prod_{k >= 2} (1 - x^k)^{-2}` up to `x^n`.
pub fn two_colour_min2_partitions(n: usize) -> Vec<u64> {
    let mut c = vec![0u64; n + 1];
    c[0] = 1;
    for part in 2..=n {
        for _ in 0..2 {
            for t in part..=n {
                c[t] += c[t - part];
            }
        }
    }
    c
}

/// Partition numbers by the unrestricted coin-change recurrence.
pub fn partition_dp(n: usize) -> Vec<num_bigint::BigUint> {
    let mut ways = vec![num_bigint::BigUint::from(0u32); n + 1];
    ways[0] = num_bigint::BigUint::from(1u32);
    for part in 1..=n {
        for t in part..=n {
            let add = ways[t - part].clone();
            ways[t] += add;
        }
    }
    ways
}

/// Number of distinct collections obtained by relabeling `c` with every
/// injection of its ground into `{1, ..., n}`.
pub fn orbit_by_relabeling(c: &SetCollection, n: usize) -> usize {
    let ground = c.ground();
    let e = ground.len();
    let mut seen = BTreeSet::new();
    let mut chosen = Vec::with_capacity(e);
    let mut used = vec![false; n + 1];
    fn rec(
        c: &SetCollection,
        ground: &[Element],
        n: usize,
        chosen: &mut Vec<Element>,
        used: &mut [bool],
        seen: &mut BTreeSet<SetCollection>,
    ) {
        if chosen.len() == ground.len() {
            let map: std::collections::BTreeMap<Element, Element> =
                ground.iter().copied().zip(chosen.iter().copied()).collect();
            seen.insert(c.relabel(|x| map[&x]));
            return;
        }
        for v in 1..=n {
            if !used[v] {
                used[v] = true;
                chosen.push(v as Element);
                rec(c, ground, n, chosen, used, seen);
                chosen.pop();
                used[v] = false;
            }
        }
    }
    rec(c, &ground, n, &mut chosen, &mut used, &mut seen);
    seen.len()
}

/// True iff some bijection between the ground sets maps `a` onto `b`.
pub fn exhaustive_isomorphic(a: &SetCollection, b: &SetCollection) -> bool {
    let ga = a.ground();
    let gb = b.ground();
    if ga.len() != gb.len() || a.len() != b.len() {
        return false;
    }
    permutations(ga.len()).into_iter().any(|perm| {
        let map: std::collections::BTreeMap<Element, Element> =
            ga.iter().copied().zip(perm.iter().map(|&i| gb[i])).collect();
        &a.relabel(|x| map[&x]) == b
    })
}
