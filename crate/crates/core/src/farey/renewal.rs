use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{DigitSource, DigitStream};

/// Renewal bookkeeping of one orbit up to a horizon `n`, for a set `A`.
///
/// `return_times` holds `τ_1, τ_2, …` up to and including the first renewal
/// past the horizon when it is known; `partial_sums` holds the matching `S_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RenewalTrace {
    pub horizon: u64,
    pub return_times: Vec<u64>,
    pub partial_sums: Vec<u64>,
    /// `Z_n`: last visit to `A` at or before `n` (0 if none).
    pub last_hit: u64,
    /// `N_n`.
    pub renewals: u64,
    /// `σ_n`.
    pub spent_time: u64,
    /// Whether the orbit visits `A` within `[0, n]`.
    pub in_k: bool,
}

impl RenewalTrace {
    /// Build from the visit times to `A` (strictly increasing). Visits past
    /// the horizon beyond the first one are ignored.
    pub fn from_hit_times(hits: &[u64], n: u64) -> Self {
        let starts_in_a = hits.first() == Some(&0);
        let mut return_times = Vec::new();
        let mut partial_sums = Vec::new();
        let mut prev = 0u64;
        let mut last_hit = 0u64;
        let mut renewals = 0u64;
        let mut in_k = false;
        for &h in hits {
            if h > n {
                if !(starts_in_a && h == 0) {
                    return_times.push(h - prev);
                    partial_sums.push(h);
                }
                break;
            }
            in_k = true;
            last_hit = h;
            if h == 0 {
                continue;
            }
            return_times.push(h - prev);
            partial_sums.push(h);
            prev = h;
            renewals += 1;
        }
        let spent_time = if in_k { n - last_hit } else { n };
        Self {
            horizon: n,
            return_times,
            partial_sums,
            last_hit,
            renewals,
            spent_time,
            in_k,
        }
    }

    /// Build from hit gaps: the first gap is the first visit time (`≥ 0`),
    /// later gaps are return times (`≥ 1`). Stops after the first visit past `n`.
    pub fn from_gaps<I>(gaps: I, n: u64) -> Result<Self>
    where
        I: IntoIterator<Item = Result<u64>>,
    {
        let mut hits = Vec::new();
        let mut t: Option<u64> = None;
        for gap in gaps {
            let gap = gap?;
            let next = match t {
                None => gap,
                Some(prev) => prev.checked_add(gap).ok_or(Error::DigitOverflow)?,
            };
            hits.push(next);
            t = Some(next);
            if next > n {
                break;
            }
        }
        Ok(Self::from_hit_times(&hits, n))
    }
}

/// One value of the fluctuation process `X_n = max{S_k ≤ n}` (with `S_0 = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FluctuationRecord {
    pub n: u64,
    pub x_n: u64,
    /// `n − X_n`.
    pub gap: u64,
    /// `log(max(gap, 1)) / log n`.
    pub scaled: f64,
}

impl FluctuationRecord {
    pub fn new(n: u64, x_n: u64) -> Self {
        debug_assert!(x_n <= n);
        let gap = n - x_n;
        Self {
            n,
            x_n,
            gap,
            scaled: log_scaled(gap, n),
        }
    }
}

/// `log(max(v, 1)) / log n`, the logarithmic scaling shared by the uniform laws.
pub fn log_scaled(v: u64, n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    (v.max(1) as f64).ln() / (n as f64).ln()
}

/// `X_n` read off the digit sums; the stream is extended until some `S_k > n`.
pub fn fluctuation<S: DigitSource>(s: &mut DigitStream<S>, n: u64) -> Result<FluctuationRecord> {
    if n == 0 {
        return Err(Error::invalid("fluctuation needs n ≥ 1"));
    }
    s.extend_past(n)?;
    let sums = s.sums();
    let idx = sums.partition_point(|&v| v <= n);
    let x_n = if idx == 0 { 0 } else { sums[idx - 1] };
    Ok(FluctuationRecord::new(n, x_n))
}

/// `X_n` for every horizon in `horizons` (sorted ascending) in one pass over
/// the digits, without storing them.
pub fn scan_fluctuations<S: DigitSource + ?Sized>(
    source: &mut S,
    horizons: &[u64],
) -> Result<Vec<FluctuationRecord>> {
    debug_assert!(horizons.windows(2).all(|w| w[0] <= w[1]));
    let mut out = Vec::with_capacity(horizons.len());
    let mut sum = 0u64;
    let mut next = 0usize;
    let mut done = false;
    while next < horizons.len() {
        let pending = if done {
            None
        } else {
            match source.next_digit()? {
                Some(d) => Some(sum.checked_add(d).ok_or(Error::DigitOverflow)?),
                None => {
                    done = true;
                    None
                }
            }
        };
        // Every horizon below the next partial sum sees X_n = current sum.
        while next < horizons.len() && pending.is_none_or(|p| p > horizons[next]) {
            out.push(FluctuationRecord::new(horizons[next], sum));
            next += 1;
        }
        if let Some(p) = pending {
            sum = p;
        }
    }
    Ok(out)
}

/// Renewal trace of the Farey orbit for `A = A_1`, read off the digits:
/// visits to `A_1` happen exactly at the times `S_k − 1`.
pub fn renewal_trace<S: DigitSource>(s: &mut DigitStream<S>, n: u64) -> Result<RenewalTrace> {
    if n == 0 {
        return Err(Error::invalid("renewal trace needs n ≥ 1"));
    }
    s.extend_past(n.saturating_add(1))?;
    let hits: Vec<u64> = s.sums().iter().map(|&v| v - 1).collect();
    Ok(RenewalTrace::from_hit_times(&hits, n))
}

/// Normalised spent-time Kac process `W_{σ_n} / W_n` with `W_n = log(n + 2)`.
pub fn kac_process(sigma_n: u64, n: u64) -> f64 {
    debug_assert!(sigma_n <= n);
    ((sigma_n + 2) as f64).ln() / ((n + 2) as f64).ln()
}
