//! Open-problem probes over the computable range. Every row is an
//! observation; nothing here is asserted.

use census_core::chaos::{dl_gl_estimates, uniform_probe, NormProbe};
use census_core::enumerate::{count_labeled_from, DegreeMode, Filter, Limits, MuTable};
use census_core::math::ln_biguint;
use num_bigint::BigUint;
use serde::Serialize;

use crate::error::Result;
use crate::parallel::{census_parallel, enumerate_parallel};

pub const LABEL: &str = "observation, not assertion";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Observation {
    pub label: &'static str,
    pub topic: &'static str,
    pub l: u32,
    pub p: u32,
    pub quantity: String,
    pub value: String,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// `(l, largest p)` per degree.
    pub ranges: Vec<(u32, u32)>,
    /// Largest `m` for the uniform norm probes.
    pub probe_m: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            ranges: vec![(2, 9), (3, 8), (4, 6)],
            probe_m: 8,
        }
    }
}

fn obs(topic: &'static str, l: u32, p: u32, quantity: impl Into<String>, value: impl ToString) -> Observation {
    Observation {
        label: LABEL,
        topic,
        l,
        p,
        quantity: quantity.into(),
        value: value.to_string(),
    }
}

fn root_ratio(x: &BigUint, p: u32, exponent: f64) -> f64 {
    (ln_biguint(x) / p as f64 - exponent * (p as f64).ln()).exp()
}

/// Runs every probe; `table` receives the enumerated μ cells.
pub fn run(cfg: &ExperimentConfig, table: &mut MuTable, limits: Limits) -> Result<Vec<Observation>> {
    let mut rows = Vec::new();
    for &(l, max_p) in &cfg.ranges {
        let mut prev: Option<(u32, BigUint, BigUint)> = None;
        let mut mu_full = Vec::new();
        for p in 2..=max_p {
            if (p * l) % 2 == 1 {
                continue;
            }
            let mode = DegreeMode::Exact(l);
            let reps = enumerate_parallel(p, mode, limits)?;
            let counts = census_parallel(&reps)?;
            table.record(p, mode, &counts);
            let labeled = count_labeled_from(&reps, p, mode)?;
            for f in Filter::ALL {
                rows.push(obs("monotonicity", l, p, format!("mu({})", f.name()), counts.get(f)));
            }
            rows.push(obs("monotonicity", l, p, "labeled count", &labeled));
            if let Some((q, mq, dq)) = &prev {
                rows.push(obs(
                    "monotonicity",
                    l,
                    p,
                    format!("mu(full) nondecreasing from p={q}"),
                    mq <= &counts.full,
                ));
                rows.push(obs(
                    "monotonicity",
                    l,
                    p,
                    format!("labeled count^(1/p) nondecreasing from p={q}"),
                    ln_biguint(dq) / *q as f64 <= ln_biguint(&labeled) / p as f64,
                ));
            }
            rows.push(obs(
                "limit ratios",
                l,
                p,
                "mu(full)^(1/p) / p^(l/2-1)",
                format!("{:.6}", root_ratio(&counts.full, p, l as f64 / 2.0 - 1.0)),
            ));
            rows.push(obs(
                "limit ratios",
                l,
                p,
                "labeled count^(1/p) / p^(l-1)",
                format!("{:.6}", root_ratio(&labeled, p, l as f64 - 1.0)),
            ));
            mu_full.push((p, counts.full.clone()));
            prev = Some((p, counts.full.clone(), labeled));
        }
        let mut probes = Vec::new();
        for p in [2u32, 4, 6] {
            for m in l..=cfg.probe_m {
                let pr = uniform_probe(l, p, m)?;
                if m == cfg.probe_m {
                    rows.push(obs("d(l), g(l)", l, p, format!("||f||_p / ||b||, uniform b on m={m}"), format!("{:.6}", pr.ratio)));
                }
                probes.push(NormProbe { l, p, m, ratio: pr.ratio });
            }
        }
        let est = dl_gl_estimates(l, &mu_full, &probes);
        rows.push(obs("d(l), g(l)", l, 0, "d(l) estimate: max mu(full)^(1/p) / p^(l/2-1)", format!("{:.6}", est.d_estimate)));
        rows.push(obs("d(l), g(l)", l, 0, "g(l) estimate: max ||f||_p / (p^(l/2) ||b||), uniform b", format!("{:.6}", est.g_estimate)));
    }
    Ok(rows)
}
