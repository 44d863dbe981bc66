use crate::error::{CliError, Result};

/// Endpoint tolerance for `start:step:stop` grids.
pub const GRID_TOLERANCE: f64 = 1e-9;

/// Parses `start:step:stop` (inclusive of `stop` within [`GRID_TOLERANCE`])
/// or a comma-separated list. Grid points are `start + i * step`, with the
/// last point snapped to `stop` when within tolerance.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| CliError::Usage(format!("`{s}` is not a number in grid `{text}`")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (number(start)?, number(step)?, number(stop)?);
            if step <= 0.0 {
                return Err(CliError::Usage(format!("grid step must be positive in `{text}`")));
            }
            if stop < start - GRID_TOLERANCE {
                return Err(CliError::Usage(format!("grid stop precedes start in `{text}`")));
            }
            let count = ((stop - start) / step + GRID_TOLERANCE).floor() as usize + 1;
            Ok((0..count)
                .map(|i| {
                    let v = start + i as f64 * step;
                    if (v - stop).abs() <= GRID_TOLERANCE {
                        stop
                    } else {
                        v
                    }
                })
                .collect())
        }
        [list] => list.split(',').map(number).collect(),
        _ => Err(CliError::Usage(format!("grid `{text}` must be `start:step:stop` or a comma list"))),
    }
}
