//! Data-parallel drivers for the exhaustive LEF checks.

use glued_core::lef::{check_budget, CheckReport, Lef};
use rayon::prelude::*;

use crate::error::CliResult;

/// Pairs per rayon task. Small enough to balance, large enough that the
/// merge cost is negligible.
const CHUNK: u64 = 4096;

/// Exhaustive multiplicativity over `F_n × F_n`, split across threads. The
/// result, including which failures are reported, does not depend on the
/// thread count: chunks are merged in index order.
pub fn par_multiplicativity(lef: &Lef, budget: u128) -> CliResult<CheckReport> {
    let size = lef.window_size(lef.n())?;
    check_budget(size.saturating_mul(size), budget)?;
    let elements = lef.window_elements(lef.n(), budget)?;
    let images = elements.par_iter().map(|s| lef.phi(s)).collect::<Result<Vec<_>, _>>()?;
    let total = (elements.len() as u64).pow(2);
    let chunks: Vec<u64> = (0..total.div_ceil(CHUNK)).collect();
    let reports: Vec<CheckReport> = chunks
        .par_iter()
        .map(|&c| lef.multiplicativity_range(&elements, &images, c * CHUNK..((c + 1) * CHUNK).min(total)))
        .collect();
    Ok(reports.into_iter().fold(CheckReport::new("multiplicativity"), CheckReport::merge))
}
