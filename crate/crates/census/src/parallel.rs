//! Rayon drivers over the independent work units exposed by the core
//! crate. Results are merged with exact, order-insensitive operations, so
//! output does not depend on the number of threads.

use std::collections::BTreeMap;
use std::sync::atomic::AtomicU64;

use census_core::canon::CanonicalCode;
use census_core::chaos::{ChaosCoefficients, CombinatorialPlan, DirectPlan, Histogram};
use census_core::covering::Multigraph;
use census_core::enumerate::{
    census, into_representatives, DegreeMode, Enumerator, FilterCounts, Limits, MuTable,
    Representative,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{CensusError, Result};

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn with_threads<T, F>(threads: Option<usize>, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| CensusError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

pub fn enumerate_parallel(p: u32, mode: DegreeMode, limits: Limits) -> Result<Vec<Representative>> {
    let en = Enumerator::new(p, mode, limits)?;
    let nodes = AtomicU64::new(0);
    let parts: Vec<BTreeMap<CanonicalCode, Multigraph>> = en
        .branches()
        .par_iter()
        .map(|b| en.explore(b, &nodes))
        .collect::<Result<_, _>>()?;
    let mut merged = BTreeMap::new();
    for part in parts {
        for (code, g) in part {
            merged.entry(code).or_insert(g);
        }
    }
    Ok(into_representatives(merged))
}

pub fn census_parallel(reps: &[Representative]) -> Result<FilterCounts> {
    let counts = reps
        .par_chunks(64)
        .map(census)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(counts.into_iter().fold(FilterCounts::default(), |mut acc, c| {
        acc.full += c.full;
        acc.standard += c.standard;
        acc.connected += c.connected;
        acc
    }))
}

/// Fills every missing `(p, mode)` cell of `table`.
pub fn fill_table(table: &mut MuTable, cells: &[(u32, DegreeMode)], limits: Limits) -> Result<()> {
    for &(p, mode) in cells {
        if table.contains_cell(mode.l(), p, mode.kind()) {
            continue;
        }
        let reps = enumerate_parallel(p, mode, limits)?;
        let counts = census_parallel(&reps)?;
        table.record(p, mode, &counts);
    }
    Ok(())
}

pub fn moment_direct_parallel(b: &ChaosCoefficients, p: u32, limit: u64) -> Result<BigRational> {
    let plan = DirectPlan::new(b, limit)?;
    let h = direct_histogram_parallel(&plan);
    Ok(plan.moment(&h, p))
}

pub fn direct_histogram_parallel(plan: &DirectPlan) -> Histogram {
    (0..plan.block_count())
        .into_par_iter()
        .map(|block| plan.block_histogram(block))
        .reduce(Histogram::default, |mut a, b| {
            a.merge(b);
            a
        })
}

pub fn moment_combinatorial_parallel(b: &ChaosCoefficients, p: u32) -> Result<BigRational> {
    let plan = CombinatorialPlan::new(b, p)?;
    let total = (0..plan.lead_count())
        .into_par_iter()
        .map(|k| plan.partial(k))
        .reduce(BigInt::zero, |a, b| a + b);
    Ok(plan.finish(total))
}
