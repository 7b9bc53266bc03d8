//! Constructive operations on coverings: reducing even-coverings to
//! double-coverings, chain detection, connected extension and the
//! standardize-then-grow pipeline.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::canon::{self, CanonicalCode};
use crate::covering::{Element, SetCollection};
use crate::error::{Error, Result};

/// Function table from one ground set onto another.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundMap {
    mapping: BTreeMap<Element, Element>,
}

impl GroundMap {
    pub fn identity<I: IntoIterator<Item = Element>>(ground: I) -> Self {
        GroundMap {
            mapping: ground.into_iter().map(|e| (e, e)).collect(),
        }
    }

    pub fn get(&self, e: Element) -> Option<Element> {
        self.mapping.get(&e).copied()
    }

    pub fn insert(&mut self, from: Element, to: Element) {
        self.mapping.insert(from, to);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, Element)> + '_ {
        self.mapping.iter().map(|(&a, &b)| (a, b))
    }

    /// Image of a set; `None` if some element is outside the domain.
    pub fn image(&self, set: &[Element]) -> Option<Vec<Element>> {
        let mut out: Vec<Element> = set.iter().map(|&e| self.get(e)).collect::<Option<_>>()?;
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    pub fn is_onto(&self, target: &[Element]) -> bool {
        let image: BTreeSet<Element> = self.mapping.values().copied().collect();
        target.iter().all(|e| image.contains(e)) && image.len() == target.len()
    }
}

/// Result of [`even_to_double`]. `members[k]` is the image of input
/// member `k` in the order the input was given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub members: Vec<Vec<Element>>,
    pub collection: SetCollection,
    pub map: GroundMap,
}

impl Reduction {
    /// True iff the map is onto the source ground and sends each output
    /// member onto its source member.
    pub fn verify(&self, source: &SetCollection) -> bool {
        let src = source.members();
        self.collection.is_double_covering()
            && self.members.len() == src.len()
            && self.map.is_onto(&source.ground())
            && self
                .members
                .iter()
                .zip(src)
                .all(|(b, a)| self.map.image(b).as_deref() == Some(a.as_slice()))
    }
}

/// Splits over-covered elements until every element lies in exactly two
/// members. Elements are handled in ascending order; each step moves the
/// element out of the two lowest-indexed members containing it onto the
/// next fresh label.
pub fn even_to_double(c: &SetCollection) -> Result<Reduction> {
    if !c.is_even_covering() {
        return Err(Error::NotEvenCovering);
    }
    let mut members: Vec<Vec<Element>> = c.members().to_vec();
    let ground = c.ground();
    let mut map = GroundMap::identity(ground.iter().copied());
    let mut fresh = ground.last().map_or(0, |&e| e + 1);
    for &a in &ground {
        loop {
            let holders: Vec<usize> = (0..members.len())
                .filter(|&k| members[k].binary_search(&a).is_ok())
                .collect();
            if holders.len() < 4 {
                break;
            }
            let b = fresh;
            fresh += 1;
            for &k in &holders[..2] {
                let m = &mut members[k];
                m.retain(|&e| e != a);
                m.push(b);
                m.sort_unstable();
            }
            map.insert(b, a);
        }
    }
    let collection = SetCollection::new(members.iter().cloned())?;
    Ok(Reduction {
        members,
        collection,
        map,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChainKind {
    X,
    Y,
}

/// Ordered member indices (into the normalized collection) of a chain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chain {
    pub kind: ChainKind,
    pub members: Vec<usize>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn intersection_size(a: &[Element], b: &[Element]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Chains of length `r`. Two orderings of the same members count once;
/// each chain is reported by its lexicographically smallest valid order.
pub fn find_chains(c: &SetCollection, kind: ChainKind, r: usize) -> Result<Vec<Chain>> {
    if !c.is_double_covering() {
        return Err(Error::NotDoubleCovering);
    }
    let p = c.len();
    if r == 0 || r > p {
        return Ok(Vec::new());
    }
    let l = c.max_member_size();
    let pattern = |k: usize| -> Option<usize> {
        // required size of the k-th consecutive intersection (k from 1)
        match kind {
            ChainKind::X => Some(if k % 2 == 1 { l - 1 } else { 1 }),
            ChainKind::Y => (l % 2 == 0).then_some(l / 2),
        }
    };
    match kind {
        ChainKind::X if r % 2 == 1 => return Ok(Vec::new()),
        ChainKind::Y if l % 2 == 1 => {
            if r != 1 {
                return Ok(Vec::new());
            }
            return Ok((0..p)
                .map(|k| Chain {
                    kind,
                    members: alloc::vec![k],
                })
                .collect());
        }
        _ => {}
    }
    let members = c.members();
    let mut found: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    let mut path = Vec::with_capacity(r);
    let mut used = alloc::vec![false; p];
    extend_chain(members, r, &pattern, &mut path, &mut used, &mut found);
    Ok(found
        .into_values()
        .map(|members| Chain { kind, members })
        .collect())
}

fn extend_chain(
    members: &[Vec<Element>],
    r: usize,
    pattern: &dyn Fn(usize) -> Option<usize>,
    path: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut BTreeMap<Vec<usize>, Vec<usize>>,
) {
    if path.len() == r {
        let mut key = path.clone();
        key.sort_unstable();
        // paths are produced in lexicographic order, so the first is smallest
        found.entry(key).or_insert_with(|| path.clone());
        return;
    }
    for k in 0..members.len() {
        if used[k] {
            continue;
        }
        if let Some(&prev) = path.last() {
            match pattern(path.len()) {
                Some(want) if intersection_size(&members[prev], &members[k]) == want => {}
                _ => continue,
            }
        }
        used[k] = true;
        path.push(k);
        extend_chain(members, r, pattern, path, used, found);
        path.pop();
        used[k] = false;
    }
}

fn exact_degree(c: &SetCollection) -> Result<usize> {
    let l = c.max_member_size();
    if c.is_empty() || c.members().iter().any(|m| m.len() != l) {
        return Err(Error::invalid("members must all have the same size"));
    }
    Ok(l)
}

/// Grows a connected exact-degree double-covering with `q` members to one
/// with `p` members by detaching part of the last member and splicing a
/// chain of `p - q` new members between the detached and the fresh labels.
pub fn extend_connected(c: &SetCollection, p: usize) -> Result<SetCollection> {
    let used: BTreeSet<Element> = c.ground().into_iter().collect();
    extend_connected_avoiding(c, p, &used)
}

/// As [`extend_connected`], drawing fresh labels outside `used`.
pub fn extend_connected_avoiding(
    c: &SetCollection,
    p: usize,
    used: &BTreeSet<Element>,
) -> Result<SetCollection> {
    if !c.is_double_covering() {
        return Err(Error::NotDoubleCovering);
    }
    let l = exact_degree(c)?;
    let q = c.len();
    if (p * l) % 2 == 1 || (q * l) % 2 == 1 {
        return Err(Error::ParityViolation {
            l: l as u32,
            p: p as u32,
        });
    }
    if q < 2 || p <= q {
        return Err(Error::invalid("need p > q >= 2"));
    }
    if !c.is_connected() {
        return Err(Error::invalid("collection must be connected"));
    }
    let mut fresh = FreshLabels::new(used);
    let mut members: Vec<Vec<Element>> = c.members().to_vec();
    let last = members.pop().expect("q >= 2");
    let r = p - q;
    let chain: Vec<Vec<Element>>;
    let modified: Vec<Element>;
    if l % 2 == 1 {
        let a = *last.iter().max().expect("nonempty member");
        let b = fresh.next();
        modified = last.iter().copied().filter(|&e| e != a).chain([b]).collect();
        let mut links = Vec::with_capacity(r);
        let mut head = alloc::vec![a];
        for k in 0..r / 2 {
            let s = fresh.take(l - 1);
            let tail = if k + 1 == r / 2 { b } else { fresh.next() };
            links.push(head.iter().chain(&s).copied().collect());
            links.push(s.iter().copied().chain([tail]).collect());
            head = alloc::vec![tail];
        }
        chain = links;
    } else {
        let half = l / 2;
        let a_part: Vec<Element> = last[last.len() - half..].to_vec();
        let b_part = fresh.take(half);
        modified = last[..last.len() - half]
            .iter()
            .chain(&b_part)
            .copied()
            .collect();
        let mut links = Vec::with_capacity(r);
        let mut head = a_part;
        for k in 0..r {
            let tail = if k + 1 == r { b_part.clone() } else { fresh.take(half) };
            links.push(head.iter().chain(&tail).copied().collect());
            head = tail;
        }
        chain = links;
    }
    members.push(modified);
    members.extend(chain);
    SetCollection::new(members)
}

struct FreshLabels<'a> {
    used: &'a BTreeSet<Element>,
    next: Element,
}

impl<'a> FreshLabels<'a> {
    fn new(used: &'a BTreeSet<Element>) -> Self {
        FreshLabels { used, next: 1 }
    }

    fn next(&mut self) -> Element {
        while self.used.contains(&self.next) {
            self.next += 1;
        }
        let e = self.next;
        self.next += 1;
        e
    }

    fn take(&mut self, n: usize) -> Vec<Element> {
        (0..n).map(|_| self.next()).collect()
    }
}

/// Keeps the first component of every isomorphism class of components.
pub fn phi_standardize(c: &SetCollection) -> Result<SetCollection> {
    let mut seen: BTreeSet<CanonicalCode> = BTreeSet::new();
    let mut kept = Vec::new();
    for comp in c.connected_components() {
        if seen.insert(canon::collection_code(&comp)?) {
            kept.push(comp);
        }
    }
    Ok(SetCollection::combine(&kept))
}

/// Replaces a component with the most ground elements (ties: smallest
/// canonical code) by its connected extension, so that the result has `p`
/// members. Fails with `Unextendable` if the result is not standard.
pub fn psi_grow(c: &SetCollection, p: usize) -> Result<SetCollection> {
    let q = c.len();
    if p == q {
        return Ok(c.clone());
    }
    if p < q {
        return Err(Error::invalid("p must be at least the current size"));
    }
    if !canon::is_standard(c)? {
        return Err(Error::invalid("collection must be standard"));
    }
    let l = exact_degree(c)?;
    if ((p - q) * l) % 2 == 1 {
        return Err(Error::ParityViolation {
            l: l as u32,
            p: p as u32,
        });
    }
    let comps = c.connected_components();
    let mut best: Option<(usize, CanonicalCode, usize)> = None;
    for (k, comp) in comps.iter().enumerate() {
        let size = comp.ground().len();
        let code = canon::collection_code(comp)?;
        let better = match &best {
            None => true,
            Some((s, bc, _)) => size > *s || (size == *s && code < *bc),
        };
        if better {
            best = Some((size, code, k));
        }
    }
    let (_, _, k) = best.ok_or(Error::Unextendable)?;
    let used: BTreeSet<Element> = c.ground().into_iter().collect();
    let grown = extend_connected_avoiding(&comps[k], comps[k].len() + p - q, &used)?;
    let mut parts: Vec<SetCollection> = comps;
    parts[k] = grown;
    let out = SetCollection::combine(&parts);
    if !canon::is_standard(&out)? {
        return Err(Error::Unextendable);
    }
    Ok(out)
}

/// `psi_grow(phi_standardize(c), c.len())`.
pub fn tau(c: &SetCollection) -> Result<SetCollection> {
    psi_grow(&phi_standardize(c)?, c.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coll(sets: &[&[Element]]) -> SetCollection {
        SetCollection::new(sets.iter().map(|s| s.iter().copied())).unwrap()
    }

    fn cycle(p: u32, offset: u32) -> SetCollection {
        SetCollection::new((0..p).map(|k| [offset + k, offset + (k + 1) % p])).unwrap()
    }

    #[test]
    fn reduction_of_quadruple_singleton() {
        let c = coll(&[&[1], &[1], &[1], &[1]]);
        let r = even_to_double(&c).unwrap();
        assert_eq!(r.collection, coll(&[&[1], &[1], &[2], &[2]]));
        assert_eq!(r.map.get(2), Some(1));
        assert!(r.verify(&c));
    }

    #[test]
    fn double_covering_is_fixed() {
        let c = cycle(4, 1);
        let r = even_to_double(&c).unwrap();
        assert_eq!(r.collection, c);
        assert!(r.map.iter().all(|(a, b)| a == b));
    }

    #[test]
    fn odd_covering_rejected() {
        assert_eq!(
            even_to_double(&coll(&[&[1], &[1], &[1]])),
            Err(Error::NotEvenCovering)
        );
    }

    #[test]
    fn chains_in_cycle() {
        let c = cycle(6, 1);
        for r in 1..=6 {
            for kind in [ChainKind::X, ChainKind::Y] {
                let n = find_chains(&c, kind, r).unwrap().len();
                assert!(n <= 6);
            }
        }
        assert_eq!(find_chains(&c, ChainKind::X, 2).unwrap().len(), 6);
        assert_eq!(find_chains(&c, ChainKind::X, 3).unwrap().len(), 0);
    }

    #[test]
    fn odd_l_singletons_are_y_chains() {
        let k4 = coll(&[&[1, 2, 3], &[1, 4, 5], &[2, 4, 6], &[3, 5, 6]]);
        assert_eq!(find_chains(&k4, ChainKind::Y, 1).unwrap().len(), 4);
        assert!(find_chains(&k4, ChainKind::Y, 2).unwrap().is_empty());
    }

    #[test]
    fn cycle_extends_to_cycle() {
        let grown = extend_connected(&cycle(3, 1), 5).unwrap();
        assert!(grown.is_double_covering() && grown.is_connected());
        assert!(canon::are_isomorphic(&grown, &cycle(5, 1)).unwrap());
        assert_eq!(grown.ground(), (1..=5).collect::<Vec<_>>());
    }

    #[test]
    fn triple_edge_extends() {
        let c = coll(&[&[1, 2, 3], &[1, 2, 3]]);
        let g = extend_connected(&c, 4).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.is_double_covering() && g.is_connected());
        assert!(g.members().iter().all(|m| m.len() == 3));
        let g6 = extend_connected(&g, 6).unwrap();
        assert!(g6.is_double_covering() && g6.is_connected());
        assert_eq!(
            extend_connected(&c, 5),
            Err(Error::ParityViolation { l: 3, p: 5 })
        );
    }

    #[test]
    fn phi_drops_repeated_components() {
        let c = SetCollection::combine(&[cycle(3, 1), cycle(3, 10), cycle(4, 20)]);
        let s = phi_standardize(&c).unwrap();
        assert_eq!(s, SetCollection::combine(&[cycle(3, 1), cycle(4, 20)]));
        assert_eq!(phi_standardize(&s).unwrap(), s);
    }

    #[test]
    fn psi_grows_largest_component() {
        let c = SetCollection::combine(&[cycle(3, 1), cycle(4, 10)]);
        let g = psi_grow(&c, 9).unwrap();
        let want = SetCollection::combine(&[cycle(3, 1), cycle(6, 10)]);
        assert!(canon::are_isomorphic(&g, &want).unwrap());
        assert_eq!(psi_grow(&c, 7).unwrap(), c);
    }
}
