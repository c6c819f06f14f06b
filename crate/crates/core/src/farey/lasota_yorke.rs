use crate::error::Result;
use crate::exact::DigitSource;

use super::map::ExactPoint;
use super::renewal::{scan_fluctuations, RenewalTrace};

/// Renewal bookkeeping of the Lasota–Yorke orbit of `x` for `A = (1/2, 1]`,
/// computed by running the exact orbit for `n` steps.
pub fn ly_spent_time(x: &ExactPoint, n: u64) -> Result<RenewalTrace> {
    let mut y = x.clone();
    let mut hits = Vec::new();
    for k in 0..=n {
        if y.ly_step()? {
            hits.push(k);
        }
    }
    Ok(RenewalTrace::from_hit_times(&hits, n))
}

/// Spent time `σ_n` for each horizon, given a source whose partial sums `S_k`
/// mark visits to `A` at the times `S_k − 1` (the induced Lasota–Yorke chain,
/// or continued-fraction digits for the Farey map).
pub fn scan_spent_times<S: DigitSource + ?Sized>(source: &mut S, horizons: &[u64]) -> Result<Vec<u64>> {
    let shifted: Vec<u64> = horizons.iter().map(|&n| n + 1).collect();
    let recs = scan_fluctuations(source, &shifted)?;
    Ok(recs
        .iter()
        .zip(horizons)
        .map(|(r, &n)| if r.x_n == 0 { n } else { r.gap })
        .collect())
}
