//! Canonical codes, isomorphism tests and automorphism counts.
//!
//! The canonical form of a multigraph is the lexicographically largest
//! lower-triangle multiplicity sequence over all vertex orders that respect
//! an isomorphism-invariant vertex colouring (degree refinement). The search
//! keeps, at each position, only the candidates whose new row is maximal and
//! prunes against the incumbent; every surviving leaf that reproduces the
//! final code is an automorphism, which gives the vertex automorphism count
//! as a by-product.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;

use crate::covering::{Element, Multigraph, SetCollection};
use crate::error::{Error, Result};
use crate::math::{factorial, next_permutation};

/// Largest vertex count accepted by the canonical search.
pub const DEFAULT_VERTEX_LIMIT: usize = 12;

/// Largest member count for the brute-force code of collections that are
/// not double-coverings.
pub const HYPERGRAPH_MEMBER_LIMIT: usize = 9;

/// Ground sets up to this size get brute-force rearrangement counts
/// (`9! = 362880 <= 4 * 10^5`).
pub const BRUTE_FORCE_GROUND_LIMIT: usize = 9;

const TAG_MULTIGRAPH: u8 = b'M';
const TAG_HYPERGRAPH: u8 = b'H';

/// Byte string identifying an isomorphism class. Counts are big-endian
/// `u16`, rows are laid out lower-triangle row-major.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        use core::fmt::Write;
        let mut s = String::with_capacity(self.0.len() * 2);
        for b in &self.0 {
            let _ = write!(s, "{b:02x}");
        }
        s
    }

    pub fn from_hex(hex: &str) -> Result<Self> {
        if hex.len() % 2 != 0 {
            return Err(Error::invalid("hex code must have even length"));
        }
        let bytes = (0..hex.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&hex[i..i + 2], 16))
            .collect::<core::result::Result<Vec<u8>, _>>()
            .map_err(|_| Error::invalid("invalid hex digit in canonical code"))?;
        Ok(CanonicalCode(bytes))
    }

    /// Vertex count encoded in the code.
    pub fn order(&self) -> usize {
        if self.0.len() < 3 {
            return 0;
        }
        u16::from_be_bytes([self.0[1], self.0[2]]) as usize
    }

    /// Rebuilds the canonical representative from a multigraph code.
    pub fn to_multigraph(&self) -> Result<Multigraph> {
        if self.0.first() != Some(&TAG_MULTIGRAPH) {
            return Err(Error::invalid("not a multigraph code"));
        }
        let p = self.order();
        let body = &self.0[3..];
        if body.len() != p * p.saturating_sub(1) {
            return Err(Error::invalid("truncated canonical code"));
        }
        let mut g = Multigraph::new(p);
        let mut at = 0;
        for k in 1..p {
            for i in 0..k {
                let m = u16::from_be_bytes([body[at], body[at + 1]]) as u32;
                g.set(i, k, m);
                at += 2;
            }
        }
        Ok(g)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// Isomorphism-invariant vertex colours: iterated refinement of the degree
/// by the multiset of (neighbour colour, multiplicity). Colours are ranks of
/// sorted signatures, so equal graphs up to relabeling get equal colourings.
pub fn refined_colors(g: &Multigraph) -> Vec<u32> {
    let p = g.order();
    let mut colors: Vec<u32> = g.degrees();
    let mut classes = distinct_count(&colors);
    loop {
        let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..p)
            .map(|v| {
                let mut nb: Vec<(u32, u32)> = (0..p)
                    .filter(|&w| g.get(v, w) > 0)
                    .map(|w| (colors[w], g.get(v, w)))
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort();
        sorted.dedup();
        let next: Vec<u32> = sigs
            .iter()
            .map(|s| sorted.binary_search(s).unwrap_or(0) as u32)
            .collect();
        let n = sorted.len();
        colors = next;
        if n == classes {
            return colors;
        }
        classes = n;
    }
}

fn distinct_count(xs: &[u32]) -> usize {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

struct Search<'a> {
    g: &'a Multigraph,
    colors: Vec<u32>,
    slot_colors: Vec<u32>,
    chosen: Vec<usize>,
    used: Vec<bool>,
    cur: Vec<u32>,
    best: Option<Vec<u32>>,
    best_order: Vec<usize>,
    automorphisms: u128,
}

impl<'a> Search<'a> {
    fn new(g: &'a Multigraph) -> Self {
        let colors = refined_colors(g);
        let mut slot_colors = colors.clone();
        slot_colors.sort_unstable();
        let p = g.order();
        Search {
            g,
            colors,
            slot_colors,
            chosen: Vec::with_capacity(p),
            used: vec![false; p],
            cur: Vec::with_capacity(p * p / 2),
            best: None,
            best_order: Vec::new(),
            automorphisms: 0,
        }
    }

    fn compare_prefix(&self) -> Ordering {
        match &self.best {
            None => Ordering::Greater,
            Some(b) => self.cur.as_slice().cmp(&b[..self.cur.len()]),
        }
    }

    fn run(&mut self) {
        let p = self.g.order();
        let k = self.chosen.len();
        if k == p {
            match self.compare_prefix() {
                Ordering::Greater => {
                    self.best = Some(self.cur.clone());
                    self.best_order = self.chosen.clone();
                    self.automorphisms = 1;
                }
                Ordering::Equal => self.automorphisms += 1,
                Ordering::Less => {}
            }
            return;
        }
        let target = self.slot_colors[k];
        let mut kept: Vec<usize> = Vec::new();
        let mut best_row: Vec<u32> = Vec::new();
        for v in 0..p {
            if self.used[v] || self.colors[v] != target {
                continue;
            }
            let row: Vec<u32> = self.chosen.iter().map(|&u| self.g.get(u, v)).collect();
            if kept.is_empty() {
                best_row = row;
                kept.push(v);
            } else {
                match row.cmp(&best_row) {
                    Ordering::Greater => {
                        best_row = row;
                        kept.clear();
                        kept.push(v);
                    }
                    Ordering::Equal => kept.push(v),
                    Ordering::Less => {}
                }
            }
        }
        let mark = self.cur.len();
        self.cur.extend_from_slice(&best_row);
        for v in kept {
            if self.compare_prefix() == Ordering::Less {
                break;
            }
            self.used[v] = true;
            self.chosen.push(v);
            self.run();
            self.chosen.pop();
            self.used[v] = false;
        }
        self.cur.truncate(mark);
    }
}

/// Canonical code, the vertex order realising it, and the number of vertex
/// automorphisms.
pub struct CanonicalForm {
    pub code: CanonicalCode,
    pub order: Vec<usize>,
    pub automorphisms: u128,
}

pub fn canonical_form_with_limit(g: &Multigraph, vertex_limit: usize) -> Result<CanonicalForm> {
    let p = g.order();
    if p > vertex_limit {
        return Err(Error::limit("vertex count", p as u64, vertex_limit as u64));
    }
    if (0..p).any(|i| g.get(i, i) != 0) {
        return Err(Error::invalid("multigraph must be loopless"));
    }
    let mut search = Search::new(g);
    search.run();
    let entries = search.best.unwrap_or_default();
    let mut bytes = Vec::with_capacity(3 + 2 * entries.len());
    bytes.push(TAG_MULTIGRAPH);
    bytes.extend_from_slice(&(p as u16).to_be_bytes());
    for m in entries {
        let m = u16::try_from(m).map_err(|_| Error::limit("edge multiplicity", m as u64, u16::MAX as u64))?;
        bytes.extend_from_slice(&m.to_be_bytes());
    }
    Ok(CanonicalForm {
        code: CanonicalCode(bytes),
        order: search.best_order,
        automorphisms: search.automorphisms.max(1),
    })
}

pub fn canonical_form(g: &Multigraph) -> Result<CanonicalForm> {
    canonical_form_with_limit(g, DEFAULT_VERTEX_LIMIT)
}

/// Canonical code of a loopless multigraph; equal codes iff isomorphic.
pub fn canonical_code(g: &Multigraph) -> Result<CanonicalCode> {
    canonical_form(g).map(|f| f.code)
}

/// The graph relabeled into canonical vertex order.
pub fn canonical_representative(g: &Multigraph) -> Result<Multigraph> {
    let form = canonical_form(g)?;
    Ok(g.permuted(&form.order))
}

/// Number of vertex permutations fixing the multiplicity matrix.
pub fn vertex_automorphisms(g: &Multigraph) -> Result<BigUint> {
    canonical_form(g).map(|f| BigUint::from(f.automorphisms))
}

/// Element signatures (sorted member indices containing each element).
fn incidence_signatures(c: &SetCollection) -> Vec<Vec<usize>> {
    let mut by_elem: BTreeMap<Element, Vec<usize>> = BTreeMap::new();
    for (i, m) in c.members().iter().enumerate() {
        for &e in m {
            by_elem.entry(e).or_default().push(i);
        }
    }
    by_elem.into_values().collect()
}

/// Brute force over member orders for general collections. Returns the
/// maximal sorted signature list and how many member orders attain it.
fn hypergraph_search(c: &SetCollection) -> Result<(Vec<Vec<usize>>, u64)> {
    let p = c.len();
    if p > HYPERGRAPH_MEMBER_LIMIT {
        return Err(Error::limit("member count", p as u64, HYPERGRAPH_MEMBER_LIMIT as u64));
    }
    let sigs = incidence_signatures(c);
    // slot -> member, restricted to orders that keep member sizes sorted
    let sizes = c.member_sizes();
    let mut by_size: Vec<usize> = (0..p).collect();
    by_size.sort_by_key(|&i| (sizes[i], i));
    let mut best: Option<Vec<Vec<usize>>> = None;
    let mut hits = 0u64;
    let mut perm: Vec<usize> = (0..p).collect();
    loop {
        let order: Vec<usize> = perm.iter().map(|&k| by_size[k]).collect();
        if order.iter().zip(&by_size).all(|(&a, &b)| sizes[a] == sizes[b]) {
            let mut slot_of = vec![0usize; p];
            for (slot, &m) in order.iter().enumerate() {
                slot_of[m] = slot;
            }
            let mut mapped: Vec<Vec<usize>> = sigs
                .iter()
                .map(|s| {
                    let mut t: Vec<usize> = s.iter().map(|&m| slot_of[m]).collect();
                    t.sort_unstable();
                    t
                })
                .collect();
            mapped.sort();
            match best.as_ref().map(|b| mapped.cmp(b)) {
                None | Some(Ordering::Greater) => {
                    best = Some(mapped);
                    hits = 1;
                }
                Some(Ordering::Equal) => hits += 1,
                Some(Ordering::Less) => {}
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok((best.unwrap_or_default(), hits))
}

/// Canonical code of any set-collection. Double-coverings use the
/// multigraph code; other collections use an incidence-signature code.
pub fn collection_code(c: &SetCollection) -> Result<CanonicalCode> {
    if c.is_double_covering() {
        return canonical_code(&c.to_multigraph()?);
    }
    let (sigs, _) = hypergraph_search(c)?;
    let mut bytes = vec![TAG_HYPERGRAPH];
    bytes.extend_from_slice(&(c.len() as u16).to_be_bytes());
    bytes.extend_from_slice(&(sigs.len() as u16).to_be_bytes());
    for s in sigs {
        bytes.extend_from_slice(&(s.len() as u16).to_be_bytes());
        for m in s {
            bytes.extend_from_slice(&(m as u16).to_be_bytes());
        }
    }
    Ok(CanonicalCode(bytes))
}

/// True iff a ground bijection maps one collection onto the other.
pub fn are_isomorphic(a: &SetCollection, b: &SetCollection) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let mut sa = a.member_sizes();
    let mut sb = b.member_sizes();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb || a.ground().len() != b.ground().len() {
        return Ok(false);
    }
    Ok(collection_code(a)? == collection_code(b)?)
}

/// True iff the connected components are pairwise non-isomorphic.
pub fn is_standard(c: &SetCollection) -> Result<bool> {
    let mut codes = Vec::new();
    for comp in c.connected_components() {
        codes.push(collection_code(&comp)?);
    }
    let n = codes.len();
    codes.sort();
    codes.dedup();
    Ok(codes.len() == n)
}

/// Multigraph version of [`is_standard`].
pub fn is_standard_graph(g: &Multigraph) -> Result<bool> {
    let comps = g.components();
    let mut codes = Vec::with_capacity(comps.len());
    for comp in &comps {
        codes.push(canonical_code(&g.induced(comp))?);
    }
    codes.sort();
    codes.dedup();
    Ok(codes.len() == comps.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismCount {
    /// Vertex (member) permutations fixing the structure.
    pub vertex_aut: BigUint,
    /// Ground-set rearrangements fixing the collection.
    pub ground_aut: BigUint,
}

/// Counts ground rearrangements by trying every permutation of the ground
/// set. Fails beyond [`BRUTE_FORCE_GROUND_LIMIT`] elements.
pub fn brute_force_ground_aut(c: &SetCollection) -> Result<BigUint> {
    let ground = c.ground();
    let n = ground.len();
    if n > BRUTE_FORCE_GROUND_LIMIT {
        return Err(Error::limit("ground size", n as u64, BRUTE_FORCE_GROUND_LIMIT as u64));
    }
    let index: BTreeMap<Element, usize> = ground.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    loop {
        let image = c.relabel(|e| ground[perm[index[&e]]]);
        if &image == c {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(BigUint::from(count))
}

/// Ground automorphisms of a double-covering from its multigraph: each
/// vertex automorphism lifts to `prod m!` edge bijections (one factor per
/// bundle of `m` parallel edges), and each pair of equal members (an
/// isolated bundle) makes two vertex maps induce the same lift.
pub fn structural_ground_aut(g: &Multigraph) -> Result<BigUint> {
    let p = g.order();
    let vertex = vertex_automorphisms(g)?;
    let mut acc = vertex;
    let mut twins = 0u32;
    for i in 0..p {
        for j in i + 1..p {
            let m = g.get(i, j);
            if m > 1 {
                acc *= factorial(m as u64);
            }
            if m > 0 && g.degree(i) == m && g.degree(j) == m {
                twins += 1;
            }
        }
    }
    Ok(acc >> twins)
}

/// Vertex and ground automorphism counts. Small ground sets are counted by
/// brute force; larger double-coverings use [`structural_ground_aut`].
pub fn ground_rearrangement_count(c: &SetCollection) -> Result<AutomorphismCount> {
    let double = c.is_double_covering();
    let vertex_aut = if double {
        vertex_automorphisms(&c.to_multigraph()?)?
    } else {
        BigUint::from(hypergraph_search(c)?.1)
    };
    let ground_aut = if c.ground().len() <= BRUTE_FORCE_GROUND_LIMIT {
        brute_force_ground_aut(c)?
    } else if double {
        structural_ground_aut(&c.to_multigraph()?)?
    } else {
        let n = c.ground().len();
        return Err(Error::limit("ground size", n as u64, BRUTE_FORCE_GROUND_LIMIT as u64));
    };
    Ok(AutomorphismCount {
        vertex_aut,
        ground_aut,
    })
}

/// Number of collections isomorphic to `c` on a ground set of exactly
/// `c`'s own size: `e! / ground_aut`.
pub fn eclass_size(c: &SetCollection) -> Result<BigUint> {
    eclass_size_on(c, c.ground().len())
}

/// Number of collections isomorphic to `c` whose elements are drawn from a
/// fixed ground set of size `n`: `n! / ((n - e)! ground_aut)`.
pub fn eclass_size_on(c: &SetCollection, n: usize) -> Result<BigUint> {
    let e = c.ground().len();
    if n < e {
        return Ok(BigUint::from(0u32));
    }
    let aut = ground_rearrangement_count(c)?.ground_aut;
    Ok(factorial(n as u64) / (factorial((n - e) as u64) * aut))
}

/// Orbit size from a precomputed ground automorphism count.
pub fn eclass_size_from_aut(ground_size: usize, n: usize, ground_aut: &BigUint) -> BigUint {
    if n < ground_size {
        return BigUint::from(0u32);
    }
    factorial(n as u64) / (factorial((n - ground_size) as u64) * ground_aut)
}
