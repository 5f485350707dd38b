//! Inputs shared by the benchmarks under `benches/`.

use vcx_core::{discretize, FunctionSpec, GridSpec, Result};

/// Symbol string of `sin²(πx)` on `n` cells with `dy = 0.5·dx`.
pub fn sin2_symbols(n: usize) -> Result<Vec<i64>> {
    let f = FunctionSpec::sin_squared(0.0, 1.0)?;
    let trace = discretize(&f, &GridSpec::with_cells(0.0, 1.0, n, 0.5)?)?;
    Ok(trace.symbols.unwrap_or_default())
}
