//! JSON formats for collections and chaos coefficients.

use std::collections::BTreeMap;
use std::str::FromStr;

use census_core::chaos::ChaosCoefficients;
use census_core::covering::{Element, SetCollection};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{CensusError, Result};

/// A collection read from external labels, relabeled onto `1..=k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ingested {
    pub collection: SetCollection,
    /// `labels[i]` is the external label of internal element `i + 1`.
    pub labels: Vec<i64>,
}

impl Ingested {
    pub fn external(&self, e: Element) -> Option<i64> {
        self.labels.get((e as usize).checked_sub(1)?).copied()
    }
}

pub fn ingest(sets: Vec<Vec<i64>>) -> Result<Ingested> {
    let mut labels: Vec<i64> = sets.iter().flatten().copied().collect();
    labels.sort_unstable();
    labels.dedup();
    let dense: BTreeMap<i64, Element> = labels
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, i as Element + 1))
        .collect();
    let collection =
        SetCollection::new(sets.iter().map(|s| s.iter().map(|x| dense[x]).collect::<Vec<_>>()))?;
    Ok(Ingested { collection, labels })
}

/// Parses `[[1,2,3],[3,4,5],...]`.
pub fn parse_collection(text: &str) -> Result<Ingested> {
    let sets: Vec<Vec<i64>> = serde_json::from_str(text)?;
    ingest(sets)
}

/// One collection per non-blank line.
pub fn parse_collection_lines(text: &str) -> Result<Vec<Ingested>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(parse_collection)
        .collect()
}

pub fn collection_to_json(c: &SetCollection) -> String {
    serde_json::to_string(c.members()).expect("vectors of integers serialize")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub set: Vec<Element>,
    pub coeff: String,
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    BigRational::from_str(t).map_err(|_| CensusError::format(format!("not a rational: {s:?}")))
}

/// Parses a JSON array of `{"set": [...], "coeff": "n/d"}`. All sets must
/// have the same size.
pub fn parse_coefficients(text: &str) -> Result<ChaosCoefficients> {
    let records: Vec<CoefficientRecord> = serde_json::from_str(text)?;
    let l = records
        .first()
        .map(|r| r.set.len())
        .ok_or_else(|| CensusError::format("coefficient file is empty"))?;
    let terms = records
        .into_iter()
        .map(|r| Ok((r.set, parse_rational(&r.coeff)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChaosCoefficients::new(l, terms)?)
}

pub fn coefficients_to_json(b: &ChaosCoefficients) -> String {
    let records: Vec<CoefficientRecord> = b
        .terms()
        .map(|(s, v)| CoefficientRecord {
            set: s.clone(),
            coeff: v.to_string(),
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("records serialize")
}
