//! Unlabeled and labeled counts of double-coverings.
//!
//! Representatives are generated as upper-triangular multiplicity matrices
//! filled row by row under degree constraints, then deduplicated by
//! canonical code. The search space is split into independent branches by
//! (degree sequence, first matrix row); merging branch results is a set
//! union, so any schedule over branches yields the same output.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;
use core::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::canon::{self, CanonicalCode, DEFAULT_VERTEX_LIMIT};
use crate::covering::Multigraph;
use crate::error::{Error, Result};
use crate::math::ln_biguint;

/// Member-size constraint: `#(A_k) = l` or `1 <= #(A_k) <= l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DegreeMode {
    Exact(u32),
    AtMost(u32),
}

impl DegreeMode {
    pub fn new(kind: ModeKind, l: u32) -> Self {
        match kind {
            ModeKind::Exact => DegreeMode::Exact(l),
            ModeKind::AtMost => DegreeMode::AtMost(l),
        }
    }

    pub fn l(self) -> u32 {
        match self {
            DegreeMode::Exact(l) | DegreeMode::AtMost(l) => l,
        }
    }

    pub fn kind(self) -> ModeKind {
        match self {
            DegreeMode::Exact(_) => ModeKind::Exact,
            DegreeMode::AtMost(_) => ModeKind::AtMost,
        }
    }

    fn allows(self, degree: u32) -> bool {
        match self {
            DegreeMode::Exact(l) => degree == l,
            DegreeMode::AtMost(l) => (1..=l).contains(&degree),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeKind {
    Exact,
    AtMost,
}

impl ModeKind {
    pub fn name(self) -> &'static str {
        match self {
            ModeKind::Exact => "exact",
            ModeKind::AtMost => "atmost",
        }
    }
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ModeKind::Exact),
            "atmost" | "at-most" => Ok(ModeKind::AtMost),
            _ => Err(Error::InvalidParameter(String::from("mode must be exact or atmost"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Filter {
    Full,
    Standard,
    Connected,
}

impl Filter {
    pub const ALL: [Filter; 3] = [Filter::Full, Filter::Standard, Filter::Connected];

    pub fn name(self) -> &'static str {
        match self {
            Filter::Full => "full",
            Filter::Standard => "standard",
            Filter::Connected => "connected",
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Filter::Full),
            "standard" => Ok(Filter::Standard),
            "connected" => Ok(Filter::Connected),
            _ => Err(Error::InvalidParameter(String::from(
                "filter must be full, standard or connected",
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub vertex_limit: usize,
    /// Maximum number of search nodes per enumeration.
    pub work_limit: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            vertex_limit: DEFAULT_VERTEX_LIMIT,
            work_limit: 1_000_000_000,
        }
    }
}

/// Independent unit of the search: a fixed degree sequence and first row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub degrees: Vec<u32>,
    pub first_row: Vec<u32>,
}

/// One isomorphism class: its code and the canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representative {
    pub code: CanonicalCode,
    pub graph: Multigraph,
}

pub struct Enumerator {
    p: usize,
    mode: DegreeMode,
    limits: Limits,
}

impl Enumerator {
    pub fn new(p: u32, mode: DegreeMode, limits: Limits) -> Result<Self> {
        if mode.l() < 2 {
            return Err(Error::invalid("l must be at least 2"));
        }
        if p < 2 {
            return Err(Error::invalid("p must be at least 2"));
        }
        if p as usize > limits.vertex_limit {
            return Err(Error::limit("p", p as u64, limits.vertex_limit as u64));
        }
        Ok(Enumerator {
            p: p as usize,
            mode,
            limits,
        })
    }

    pub fn mode(&self) -> DegreeMode {
        self.mode
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Nonincreasing degree sequences realizable by a loopless multigraph.
    /// Every class has a representative whose degrees are sorted this way.
    pub fn degree_sequences(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        match self.mode {
            DegreeMode::Exact(l) => {
                let seq = vec![l; self.p];
                if graphical(&seq) {
                    out.push(seq);
                }
            }
            DegreeMode::AtMost(l) => {
                let mut seq = Vec::with_capacity(self.p);
                nonincreasing(self.p, l, &mut seq, &mut out);
                out.retain(|s| graphical(s));
            }
        }
        out
    }

    pub fn branches(&self) -> Vec<Branch> {
        let mut out = Vec::new();
        for degrees in self.degree_sequences() {
            let mut row = vec![0u32; self.p];
            first_rows(&degrees, 1, degrees[0], &mut row, &mut out);
        }
        out
    }

    /// All classes reachable from one branch, keyed by canonical code.
    pub fn explore(
        &self,
        branch: &Branch,
        nodes: &AtomicU64,
    ) -> Result<BTreeMap<CanonicalCode, Multigraph>> {
        let p = self.p;
        let mut g = Multigraph::new(p);
        let mut residual = branch.degrees.clone();
        for j in 1..p {
            let m = branch.first_row[j];
            if m > 0 {
                g.set(0, j, m);
                residual[j] -= m;
            }
        }
        residual[0] = 0;
        let mut out = BTreeMap::new();
        let mut state = Fill {
            p,
            g,
            residual,
            nodes,
            work_limit: self.limits.work_limit,
            vertex_limit: self.limits.vertex_limit,
            out: &mut out,
        };
        state.start_row(1)?;
        Ok(out)
    }

    /// Sequential enumeration, sorted by canonical code.
    pub fn run(&self) -> Result<Vec<Representative>> {
        let nodes = AtomicU64::new(0);
        let mut all = BTreeMap::new();
        for branch in self.branches() {
            all.extend(self.explore(&branch, &nodes)?);
        }
        Ok(into_representatives(all))
    }
}

/// Converts merged branch output into sorted canonical representatives.
pub fn into_representatives(merged: BTreeMap<CanonicalCode, Multigraph>) -> Vec<Representative> {
    merged
        .into_keys()
        .map(|code| {
            let graph = code
                .to_multigraph()
                .expect("multigraph codes always decode");
            Representative { code, graph }
        })
        .collect()
}

struct Fill<'a> {
    p: usize,
    g: Multigraph,
    residual: Vec<u32>,
    nodes: &'a AtomicU64,
    work_limit: u64,
    vertex_limit: usize,
    out: &'a mut BTreeMap<CanonicalCode, Multigraph>,
}

impl Fill<'_> {
    fn tick(&self) -> Result<()> {
        let n = self.nodes.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        if n > self.work_limit {
            return Err(Error::limit("search nodes", n, self.work_limit));
        }
        Ok(())
    }

    fn start_row(&mut self, i: usize) -> Result<()> {
        self.tick()?;
        if !graphical(&self.residual[i..]) {
            return Ok(());
        }
        if i + 1 >= self.p {
            // graphical() on a single vertex means its residual is zero
            let code = canon::canonical_form_with_limit(&self.g, self.vertex_limit)?.code;
            if !self.out.contains_key(&code) {
                self.out.insert(code, self.g.clone());
            }
            return Ok(());
        }
        self.fill(i, i + 1)
    }

    fn fill(&mut self, i: usize, j: usize) -> Result<()> {
        let need = self.residual[i];
        if need == 0 {
            return self.start_row(i + 1);
        }
        if j >= self.p {
            return Ok(());
        }
        self.tick()?;
        let capacity_after: u32 = self.residual[j + 1..].iter().sum();
        let lo = need.saturating_sub(capacity_after);
        let hi = need.min(self.residual[j]);
        for m in (lo..=hi).rev() {
            self.g.set(i, j, m);
            self.residual[i] -= m;
            self.residual[j] -= m;
            let r = self.fill(i, j + 1);
            self.residual[i] += m;
            self.residual[j] += m;
            self.g.set(i, j, 0);
            r?;
        }
        Ok(())
    }
}

/// Loopless multigraph realizability: even sum and max <= sum of the rest.
fn graphical(degrees: &[u32]) -> bool {
    let sum: u64 = degrees.iter().map(|&d| d as u64).sum();
    let max = degrees.iter().copied().max().unwrap_or(0) as u64;
    sum % 2 == 0 && 2 * max <= sum
}

fn nonincreasing(len: usize, cap: u32, seq: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if seq.len() == len {
        out.push(seq.clone());
        return;
    }
    let top = seq.last().copied().unwrap_or(cap);
    for d in (1..=top).rev() {
        seq.push(d);
        nonincreasing(len, cap, seq, out);
        seq.pop();
    }
}

fn first_rows(degrees: &[u32], j: usize, left: u32, row: &mut Vec<u32>, out: &mut Vec<Branch>) {
    let p = degrees.len();
    if j == p {
        if left == 0 {
            let residual: Vec<u32> = (1..p).map(|k| degrees[k] - row[k]).collect();
            if graphical(&residual) {
                out.push(Branch {
                    degrees: degrees.to_vec(),
                    first_row: row.clone(),
                });
            }
        }
        return;
    }
    let capacity_after: u32 = degrees[j + 1..].iter().sum();
    let lo = left.saturating_sub(capacity_after);
    for m in (lo..=left.min(degrees[j])).rev() {
        row[j] = m;
        first_rows(degrees, j + 1, left - m, row, out);
    }
    row[j] = 0;
}

/// Canonical representatives of all classes of `(l,p)` (or `(l,p)*`)
/// double-coverings, sorted by code.
pub fn enumerate_unlabeled(p: u32, mode: DegreeMode) -> Result<Vec<Representative>> {
    Enumerator::new(p, mode, Limits::default())?.run()
}

/// Counts of one cell under each filter.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FilterCounts {
    pub full: BigUint,
    pub standard: BigUint,
    pub connected: BigUint,
}

impl FilterCounts {
    pub fn get(&self, filter: Filter) -> &BigUint {
        match filter {
            Filter::Full => &self.full,
            Filter::Standard => &self.standard,
            Filter::Connected => &self.connected,
        }
    }
}

pub fn passes(g: &Multigraph, filter: Filter) -> Result<bool> {
    match filter {
        Filter::Full => Ok(true),
        Filter::Connected => Ok(g.is_connected()),
        Filter::Standard => canon::is_standard_graph(g),
    }
}

pub fn census(reps: &[Representative]) -> Result<FilterCounts> {
    let mut counts = FilterCounts::default();
    for r in reps {
        counts.full += 1u32;
        if passes(&r.graph, Filter::Standard)? {
            counts.standard += 1u32;
        }
        if passes(&r.graph, Filter::Connected)? {
            counts.connected += 1u32;
        }
    }
    Ok(counts)
}

/// `mu_{l,p}` under a filter, by enumeration.
pub fn mu(p: u32, mode: DegreeMode, filter: Filter) -> Result<BigUint> {
    let reps = enumerate_unlabeled(p, mode)?;
    Ok(census(&reps)?.get(filter).clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MuKey {
    pub l: u32,
    pub p: u32,
    pub mode: ModeKind,
    pub filter: Filter,
}

/// Cache of computed counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MuTable {
    entries: BTreeMap<MuKey, BigUint>,
}

impl MuTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, l: u32, p: u32, mode: ModeKind, filter: Filter) -> Option<&BigUint> {
        self.entries.get(&MuKey { l, p, mode, filter })
    }

    pub fn require(&self, l: u32, p: u32, mode: ModeKind, filter: Filter) -> Result<&BigUint> {
        self.get(l, p, mode, filter)
            .ok_or(Error::MissingMuCell { l, p })
    }

    pub fn insert(&mut self, key: MuKey, value: BigUint) {
        self.entries.insert(key, value);
    }

    pub fn contains_cell(&self, l: u32, p: u32, mode: ModeKind) -> bool {
        Filter::ALL
            .iter()
            .all(|&filter| self.get(l, p, mode, filter).is_some())
    }

    pub fn record(&mut self, p: u32, mode: DegreeMode, counts: &FilterCounts) {
        for filter in Filter::ALL {
            let key = MuKey {
                l: mode.l(),
                p,
                mode: mode.kind(),
                filter,
            };
            self.entries.insert(key, counts.get(filter).clone());
        }
    }

    /// Enumerates the cell unless it is already present.
    pub fn ensure(&mut self, p: u32, mode: DegreeMode) -> Result<()> {
        if !self.contains_cell(mode.l(), p, mode.kind()) {
            let reps = enumerate_unlabeled(p, mode)?;
            let counts = census(&reps)?;
            self.record(p, mode, &counts);
        }
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MuKey, &BigUint)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Extend<(MuKey, BigUint)> for MuTable {
    fn extend<T: IntoIterator<Item = (MuKey, BigUint)>>(&mut self, iter: T) {
        self.entries.extend(iter);
    }
}

/// Size of the labeled family on the ground set `{1, ..., floor(pl/2)}`:
/// the sum over class representatives of their orbit sizes.
pub fn count_labeled(p: u32, mode: DegreeMode) -> Result<BigUint> {
    let reps = enumerate_unlabeled(p, mode)?;
    count_labeled_from(&reps, p, mode)
}

pub fn count_labeled_from(reps: &[Representative], p: u32, mode: DegreeMode) -> Result<BigUint> {
    let n = (p as usize * mode.l() as usize) / 2;
    let mut total = BigUint::zero();
    for r in reps {
        let aut = canon::structural_ground_aut(&r.graph)?;
        let e = r.graph.edge_count() as usize;
        total += canon::eclass_size_from_aut(e, n, &aut);
    }
    Ok(total)
}

/// Direct count of the labeled family by generating every multiset of `p`
/// admissible subsets of `{1, ..., floor(pl/2)}`. Independent of the
/// canonical machinery; practical for ground sets up to about 8.
pub fn count_labeled_direct(p: u32, mode: DegreeMode, max_ground: usize) -> Result<BigUint> {
    let n = (p as usize * mode.l() as usize) / 2;
    if n > max_ground || n > 16 {
        return Err(Error::limit("ground size", n as u64, max_ground.min(16) as u64));
    }
    let subsets: Vec<u32> = (1u32..(1u32 << n))
        .filter(|s| mode.allows(s.count_ones()))
        .collect();
    let mut counts = vec![0u8; n];
    let mut total = 0u64;
    direct_multisets(&subsets, 0, p as usize, &mut counts, &mut total);
    Ok(BigUint::from(total))
}

fn direct_multisets(subsets: &[u32], from: usize, left: usize, counts: &mut [u8], total: &mut u64) {
    if left == 0 {
        if counts.iter().all(|&c| c == 0 || c == 2) {
            *total += 1;
        }
        return;
    }
    for (k, &s) in subsets.iter().enumerate().skip(from) {
        let fits = (0..counts.len()).all(|b| s & (1 << b) == 0 || counts[b] < 2);
        if !fits {
            continue;
        }
        for b in 0..counts.len() {
            if s & (1 << b) != 0 {
                counts[b] += 1;
            }
        }
        direct_multisets(subsets, k, left - 1, counts, total);
        for b in 0..counts.len() {
            if s & (1 << b) != 0 {
                counts[b] -= 1;
            }
        }
    }
}

/// `(x / p^(p * e))^(1/p)` evaluated in log space.
fn growth_term(x: &BigUint, p: u32, exponent_per_p: f64) -> f64 {
    let p = p as f64;
    libm::exp((ln_biguint(x) - p * exponent_per_p * libm::log(p)) / p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct P0Row {
    pub p: u32,
    pub mu_standard: BigUint,
    pub mu_star_full: BigUint,
    pub inner_holds: bool,
    pub lower_term: f64,
    pub upper_term: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityObservation {
    pub q: u32,
    pub p: u32,
    pub mu_q: BigUint,
    pub mu_p: BigUint,
    pub nondecreasing: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct P0Report {
    pub l: u32,
    pub rows: Vec<P0Row>,
    /// `min_p (mu_standard / p^{p(l/2-1)})^{1/p}` over the rows.
    pub a_fit: f64,
    /// `max_p (mu*_full / p^{p(l/2-1)})^{1/p}` over the rows.
    pub b_fit: f64,
    /// Observations only; never asserted.
    pub monotonicity: Vec<MonotonicityObservation>,
}

impl P0Report {
    pub fn inner_inequality_holds(&self) -> bool {
        self.rows.iter().all(|r| r.inner_holds)
    }
}

/// Checks `mu_{l,p}(standard) <= mu*_{l,p}(full)` on every cell with `pl`
/// even and fits the two-sided growth constants.
pub fn theorem_p0_report(l: u32, ps: &[u32], table: &MuTable) -> Result<P0Report> {
    let e = l as f64 / 2.0 - 1.0;
    let mut rows = Vec::new();
    for &p in ps.iter().filter(|&&p| (p * l) % 2 == 0) {
        let std = table.require(l, p, ModeKind::Exact, Filter::Standard)?.clone();
        let star = table.require(l, p, ModeKind::AtMost, Filter::Full)?.clone();
        rows.push(P0Row {
            p,
            inner_holds: std <= star,
            lower_term: growth_term(&std, p, e),
            upper_term: growth_term(&star, p, e),
            mu_standard: std,
            mu_star_full: star,
        });
    }
    let a_fit = rows.iter().map(|r| r.lower_term).fold(f64::INFINITY, f64::min);
    let b_fit = rows.iter().map(|r| r.upper_term).fold(0.0, f64::max);
    let mut monotonicity = Vec::new();
    let cells: Vec<(u32, BigUint)> = rows
        .iter()
        .filter_map(|r| {
            table
                .get(l, r.p, ModeKind::Exact, Filter::Full)
                .map(|v| (r.p, v.clone()))
        })
        .collect();
    for (a, (q, mq)) in cells.iter().enumerate() {
        for (p, mp) in cells.iter().skip(a + 1) {
            monotonicity.push(MonotonicityObservation {
                q: *q,
                p: *p,
                mu_q: mq.clone(),
                mu_p: mp.clone(),
                nondecreasing: mq <= mp,
            });
        }
    }
    Ok(P0Report {
        l,
        rows,
        a_fit,
        b_fit,
        monotonicity,
    })
}

/// `max_p (count / p^{p(l-1)})^{1/p}`: the fitted constant in the upper
/// labeled-growth bound, over the supplied `(p, count)` cells.
pub fn labeled_growth_fit(l: u32, cells: &[(u32, BigUint)]) -> f64 {
    cells
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| growth_term(c, *p, l as f64 - 1.0))
        .fold(0.0, f64::max)
}

/// Distinct component codes of a representative (useful for reports).
pub fn component_codes(g: &Multigraph) -> Result<BTreeSet<CanonicalCode>> {
    g.components()
        .iter()
        .map(|c| canon::canonical_code(&g.induced(c)))
        .collect()
}

pub fn to_u64(x: &BigUint) -> Option<u64> {
    x.to_u64()
}
