//! Set-collections, their multigraph view, and the structural predicates.
//!
//! A [`SetCollection`] is a finite multiset of nonempty finite sets over
//! integer ground elements. It is kept in normalized order (each member
//! sorted, members sorted lexicographically), so equality of collections up
//! to a rearrangement of members is plain structural equality.
//!
//! When every ground element lies in exactly two members, the collection is
//! a loopless multigraph: members are vertices, elements are edges.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::math::{multinomial, run_lengths};

/// Ground element label.
pub type Element = u32;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SetCollection {
    members: Vec<Vec<Element>>,
}

impl SetCollection {
    /// Builds a normalized collection. Duplicate elements inside a member
    /// collapse (members are sets); empty members are rejected.
    pub fn new<I, S>(sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = Element>,
    {
        let mut members = Vec::new();
        for set in sets {
            let mut m: Vec<Element> = set.into_iter().collect();
            m.sort_unstable();
            m.dedup();
            if m.is_empty() {
                return Err(Error::EmptyMember);
            }
            members.push(m);
        }
        members.sort();
        Ok(SetCollection { members })
    }

    pub fn empty() -> Self {
        SetCollection { members: Vec::new() }
    }

    pub fn members(&self) -> &[Vec<Element>] {
        &self.members
    }

    /// Number of members, `p`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Largest member size, `l`.
    pub fn max_member_size(&self) -> usize {
        self.members.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Member sizes in member order.
    pub fn member_sizes(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }

    /// Sorted distinct elements of the union.
    pub fn ground(&self) -> Vec<Element> {
        let mut g: Vec<Element> = self.members.iter().flatten().copied().collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// Occurrence count of each ground element, counted over member indices.
    pub fn occurrences(&self) -> BTreeMap<Element, usize> {
        let mut occ = BTreeMap::new();
        for &e in self.members.iter().flatten() {
            *occ.entry(e).or_insert(0) += 1;
        }
        occ
    }

    pub fn is_double_covering(&self) -> bool {
        self.occurrences().values().all(|&c| c == 2)
    }

    pub fn is_even_covering(&self) -> bool {
        self.occurrences().values().all(|&c| c % 2 == 0)
    }

    /// Member indices grouped by connectivity (members linked when they
    /// share an element). Groups are ordered by their smallest index.
    pub fn component_indices(&self) -> Vec<Vec<usize>> {
        let p = self.members.len();
        let mut uf = UnionFind::new(p);
        let mut first_owner: BTreeMap<Element, usize> = BTreeMap::new();
        for (i, m) in self.members.iter().enumerate() {
            for &e in m {
                match first_owner.get(&e) {
                    Some(&j) => uf.union(i, j),
                    None => {
                        first_owner.insert(e, i);
                    }
                }
            }
        }
        uf.groups()
    }

    pub fn connected_components(&self) -> Vec<SetCollection> {
        self.component_indices()
            .into_iter()
            .map(|idx| self.select(&idx))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.component_indices().len() <= 1
    }

    /// Sub-collection formed by the given member indices.
    pub fn select(&self, indices: &[usize]) -> SetCollection {
        let mut members: Vec<Vec<Element>> =
            indices.iter().map(|&i| self.members[i].clone()).collect();
        members.sort();
        SetCollection { members }
    }

    /// Collection of all members of the given collections.
    pub fn combine<'a, I>(parts: I) -> SetCollection
    where
        I: IntoIterator<Item = &'a SetCollection>,
    {
        let mut members: Vec<Vec<Element>> = parts
            .into_iter()
            .flat_map(|c| c.members.iter().cloned())
            .collect();
        members.sort();
        SetCollection { members }
    }

    /// Applies `f` to every element. `f` must be injective on the ground
    /// set for the result to be isomorphic to `self`.
    pub fn relabel<F: FnMut(Element) -> Element>(&self, mut f: F) -> SetCollection {
        let mut members: Vec<Vec<Element>> = self
            .members
            .iter()
            .map(|m| {
                let mut s: Vec<Element> = m.iter().map(|&e| f(e)).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        members.sort();
        SetCollection { members }
    }

    /// Multigraph view with vertices in normalized member order.
    pub fn to_multigraph(&self) -> Result<Multigraph> {
        Multigraph::from_members(&self.members)
    }

    /// Collection with fresh ground labels `1..=E` assigned to the edges
    /// in row-major upper-triangle order.
    pub fn from_multigraph(g: &Multigraph) -> Result<SetCollection> {
        let p = g.order();
        let mut members = vec![Vec::new(); p];
        let mut next: Element = 1;
        for i in 0..p {
            for j in i + 1..p {
                for _ in 0..g.get(i, j) {
                    members[i].push(next);
                    members[j].push(next);
                    next += 1;
                }
            }
        }
        SetCollection::new(members)
    }
}

impl fmt::Display for SetCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (k, e) in m.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Loopless multigraph stored as a dense symmetric multiplicity matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multigraph {
    order: usize,
    mult: Vec<u32>,
}

impl Multigraph {
    pub fn new(order: usize) -> Self {
        Multigraph {
            order,
            mult: vec![0; order * order],
        }
    }

    /// Validates symmetry and a zero diagonal.
    pub fn from_matrix(rows: &[Vec<u32>]) -> Result<Self> {
        let p = rows.len();
        let mut g = Multigraph::new(p);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(Error::invalid("multiplicity matrix must be square"));
            }
            if row[i] != 0 {
                return Err(Error::invalid("multigraph must be loopless"));
            }
            for (j, &m) in row.iter().enumerate() {
                if rows[j][i] != m {
                    return Err(Error::invalid("multiplicity matrix must be symmetric"));
                }
                g.mult[i * p + j] = m;
            }
        }
        Ok(g)
    }

    /// Multigraph of an ordered member list: `mult[i][j] = #(A_i ∩ A_j)`.
    /// Fails unless every element lies in exactly two members.
    pub fn from_members(members: &[Vec<Element>]) -> Result<Self> {
        let mut owners: BTreeMap<Element, Vec<usize>> = BTreeMap::new();
        for (i, m) in members.iter().enumerate() {
            for &e in m {
                owners.entry(e).or_default().push(i);
            }
        }
        let mut g = Multigraph::new(members.len());
        for idx in owners.values() {
            match idx.as_slice() {
                &[a, b] if a != b => g.add_edges(a, b, 1),
                _ => return Err(Error::NotDoubleCovering),
            }
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.mult[i * self.order + j]
    }

    /// Adds `m` parallel edges between distinct vertices `i` and `j`.
    pub fn add_edges(&mut self, i: usize, j: usize, m: u32) {
        assert!(i != j, "loops are not allowed");
        self.mult[i * self.order + j] += m;
        self.mult[j * self.order + i] += m;
    }

    pub fn set(&mut self, i: usize, j: usize, m: u32) {
        assert!(i != j || m == 0, "loops are not allowed");
        self.mult[i * self.order + j] = m;
        self.mult[j * self.order + i] = m;
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.row(i).iter().sum()
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.order).map(|i| self.degree(i)).collect()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.mult[i * self.order..(i + 1) * self.order]
    }

    pub fn edge_count(&self) -> u64 {
        self.mult.iter().map(|&m| m as u64).sum::<u64>() / 2
    }

    /// Vertex sets of the connected components, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.order);
        for i in 0..self.order {
            for j in i + 1..self.order {
                if self.get(i, j) > 0 {
                    uf.union(i, j);
                }
            }
        }
        uf.groups()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Induced subgraph on `vertices`, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Multigraph {
        let mut g = Multigraph::new(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate() {
                g.mult[a * vertices.len() + b] = self.get(u, v);
            }
        }
        g
    }

    /// Graph whose vertex `k` is `self`'s vertex `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Multigraph {
        self.induced(order)
    }

    /// Rows of the matrix, for display and serialization.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.order).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Multinomial multiplicity of a tuple: `p! / prod (group size)!`, where the
/// groups collect equal items.
pub fn gamma<T: Ord + Clone>(items: &[T]) -> BigUint {
    let mut sorted = items.to_vec();
    sorted.sort();
    multinomial(&run_lengths(&sorted))
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub(crate) fn groups(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = self.find(i);
            by_root.entry(r).or_default().push(i);
        }
        let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
        groups.sort_by_key(|g| g[0]);
        groups
    }
}
