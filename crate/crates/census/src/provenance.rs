use census_core::chaos::DEFAULT_DIRECT_LIMIT;
use census_core::enumerate::Limits;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub vertex_limit: usize,
    pub work_limit: u64,
    pub direct_limit: u64,
}

impl Provenance {
    pub fn new(seed: Option<u64>, limits: Limits) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            seed,
            vertex_limit: limits.vertex_limit,
            work_limit: limits.work_limit,
            direct_limit: DEFAULT_DIRECT_LIMIT,
        }
    }
}
