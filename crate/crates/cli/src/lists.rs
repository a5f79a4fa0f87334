//! Value lists given on the command line.

use anyhow::{anyhow, bail, Context, Result};
use grover_rel::{Extended, Real};

pub fn parse_value<T: Real>(s: &str, what: &str) -> Result<T> {
    T::parse_decimal(s).ok_or_else(|| anyhow!("invalid {what} `{s}`"))
}

/// `a,b,c` or `start:stop:count-log`.
///
/// Log-spaced lists include both endpoints exactly; interior points are
/// `start · (stop/start)^(i/(count−1))`.
pub fn parse_list(s: &str, what: &str) -> Result<Vec<Extended>> {
    if let Some((range, spacing)) = s.split_once('-').filter(|(r, _)| r.contains(':')) {
        if spacing != "log" {
            bail!("unknown spacing `{spacing}` in {what} list (expected `log`)");
        }
        let parts: Vec<&str> = range.split(':').collect();
        let [start, stop, count] = parts[..] else {
            bail!("{what} range must look like start:stop:count-log");
        };
        let start: Extended = parse_value(start, what)?;
        let stop: Extended = parse_value(stop, what)?;
        let count: usize = count
            .parse()
            .with_context(|| format!("invalid point count `{count}` in {what} list"))?;
        return log_spaced(start, stop, count, what);
    }
    s.split(',').map(|item| parse_value(item.trim(), what)).collect()
}

fn log_spaced(start: Extended, stop: Extended, count: usize, what: &str) -> Result<Vec<Extended>> {
    if !(start > Extended::ZERO && stop > start) {
        bail!("{what} range needs 0 < start < stop");
    }
    match count {
        0 => bail!("{what} range needs at least one point"),
        1 => return Ok(vec![start]),
        _ => {}
    }
    // ln(stop/start) and e^x through the accurate ±1 forms
    let span = (stop / start - Extended::ONE).ln_1p();
    let steps = Extended::from((count - 1) as f64);
    let mut values: Vec<Extended> = (0..count)
        .map(|i| start * ((span * Extended::from(i as f64) / steps).exp_m1() + Extended::ONE))
        .collect();
    values[count - 1] = stop;
    Ok(values)
}
