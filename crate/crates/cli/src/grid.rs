//! Grid syntax: a single value, a comma list, `start:stop:step` (inclusive)
//! or `logspace(a,b,n)` with endpoint values `a`, `b`.

use crate::CliError;

pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Usage(format!("invalid grid '{text}': {why}"));
    let t = text.trim();
    if let Some(inner) = t
        .strip_prefix("logspace(")
        .and_then(|s| s.strip_suffix(')'))
    {
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad("expected logspace(a,b,n)"));
        }
        let a = number(parts[0]).ok_or_else(|| bad("start is not a number"))?;
        let b = number(parts[1]).ok_or_else(|| bad("stop is not a number"))?;
        let n: usize = parts[2]
            .parse()
            .map_err(|_| bad("count is not an integer"))?;
        if n == 0 {
            return Err(bad("count must be positive"));
        }
        return polariton_core::sweeps::logspace(a, b, n).map_err(|e| bad(&e.to_string()));
    }
    if t.contains(':') {
        let parts: Vec<&str> = t.split(':').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:step"));
        }
        let start = number(parts[0]).ok_or_else(|| bad("start is not a number"))?;
        let stop = number(parts[1]).ok_or_else(|| bad("stop is not a number"))?;
        let step = number(parts[2]).ok_or_else(|| bad("step is not a number"))?;
        if step <= 0.0 || stop < start {
            return Err(bad("need step > 0 and stop >= start"));
        }
        let span = (stop - start) / step;
        // tolerate rounding in the endpoint
        let count = (span + 1e-9).floor() as usize + 1;
        if count > 10_000_000 {
            return Err(bad("too many points"));
        }
        return Ok((0..count).map(|k| start + k as f64 * step).collect());
    }
    t.split(',')
        .map(|p| number(p.trim()).ok_or_else(|| bad("not a number")))
        .collect()
}

fn number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Parses `lo:hi`.
pub fn parse_interval(text: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("invalid interval '{text}', expected lo:hi"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo = number(lo.trim()).ok_or_else(bad)?;
    let hi = number(hi.trim()).ok_or_else(bad)?;
    Ok((lo, hi))
}
