use std::sync::Arc;

use num_traits::Float;
use serde::Serialize;

use super::density::ClosedFormDensity;
use super::exact::exact_iterate;
use super::grid::GridFunction;
use super::mesh::Mesh;
use super::rates::wandering_rate;
use crate::error::{Error, Result};

/// Finite-difference shape diagnostics of a grid function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConeReport {
    /// Smallest slope `(f_{i+1} − f_i)/(x_{i+1} − x_i)`.
    pub min_slope: f64,
    /// Largest change between consecutive slopes; positive means a convex kink.
    pub max_second_difference: f64,
}

impl ConeReport {
    pub fn in_cone(&self, tol: f64) -> bool {
        self.min_slope >= -tol && self.max_second_difference <= tol
    }
}

/// Slope and slope-increment extremes over the interior nodes.
pub fn cone_check<F: Float>(f: &GridFunction<F>) -> Result<ConeReport> {
    let x = f.nodes();
    let v = f.values();
    if x.len() < 3 {
        return Err(Error::invalid("cone check needs at least 3 nodes"));
    }
    let slope = |i: usize| ((v[i + 1] - v[i]) / (x[i + 1] - x[i])).to_f64().unwrap();
    let mut min_slope = slope(0);
    let mut max_second_difference = f64::NEG_INFINITY;
    let mut prev = min_slope;
    for i in 1..x.len() - 1 {
        let s = slope(i);
        min_slope = min_slope.min(s);
        max_second_difference = max_second_difference.max(s - prev);
        prev = s;
    }
    Ok(ConeReport { min_slope, max_second_difference })
}

/// Outcome of the monotone-decay check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DecayReport {
    pub holds: bool,
    /// Largest `T̂^{n+1}f(x) − T̂ⁿf(x)` seen (may be negative).
    pub worst_violation: f64,
    pub worst_n: u64,
    pub worst_x: f64,
}

/// Tolerance of the decay check.
pub const DECAY_TOL: f64 = 1e-9;

/// `T̂^{n+1}f ≤ T̂ⁿf + 10⁻⁹` on the nodes of `A_1 = (1/2, 1]`, `n < n_max`.
pub fn decreasing_on_a1_check(f: &ClosedFormDensity<f64>, n_max: u64, mesh: Arc<Mesh<f64>>) -> DecayReport {
    decreasing_check_above(f, n_max, 0.5, mesh)
}

/// The decay check on the nodes `x > lower`.
pub fn decreasing_check_above(
    f: &ClosedFormDensity<f64>,
    n_max: u64,
    lower: f64,
    mesh: Arc<Mesh<f64>>,
) -> DecayReport {
    let mut g = GridFunction::from_density(mesh, f);
    let start = g.nodes().partition_point(|&x| x <= lower);
    let mut report = DecayReport {
        holds: true,
        worst_violation: f64::NEG_INFINITY,
        worst_n: 0,
        worst_x: f64::NAN,
    };
    for n in 0..n_max {
        let next = g.transfer();
        for i in start..g.nodes().len() {
            let d = next.values()[i] - g.values()[i];
            if d > report.worst_violation {
                report.worst_violation = d;
                report.worst_n = n;
                report.worst_x = g.nodes()[i];
            }
        }
        g = next;
    }
    report.holds = report.worst_violation <= DECAY_TOL;
    report
}

/// One row of a uniformly-returning trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OperatorTrace {
    pub n: u64,
    pub w_n: f64,
    pub probe_x: f64,
    /// `T̂ⁿf(probe_x)` from the grid.
    pub value: f64,
    /// `W_n·T̂ⁿf(probe_x)`.
    pub product: f64,
    pub min_slope: f64,
    pub max_second_difference: f64,
    /// `∫ T̂ⁿf dμ` on the grid; the exact operator preserves it, so its
    /// drift measures discretization error.
    pub mu_integral: f64,
    /// Branch-sum value when `n` is small enough to afford it.
    pub oracle: Option<f64>,
}

/// Iterate `f` on the grid and record `W_n·T̂ⁿf` at the probes for each `n` of
/// the schedule. Probes must lie in `A_1`; rows with `n ≤ oracle_up_to` carry
/// the branch-sum value.
pub fn uniform_returning_trace(
    f: &ClosedFormDensity<f64>,
    schedule: &[u64],
    probes: &[f64],
    mesh: Arc<Mesh<f64>>,
    oracle_up_to: u32,
) -> Result<Vec<OperatorTrace>> {
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("schedule must be strictly increasing"));
    }
    if let Some(p) = probes.iter().find(|&&p| !(p > 0.5 && p <= 1.0)) {
        return Err(Error::invalid(format!("probe {p} outside A_1 = (1/2, 1]")));
    }
    let oracle_up_to = oracle_up_to.min(super::exact::MAX_EXACT_ITERATE);
    let mut g = GridFunction::from_density(mesh, f);
    let mut at = 0u64;
    let mut rows = Vec::with_capacity(schedule.len() * probes.len());
    for &n in schedule {
        g.iterate_transfer(n - at);
        at = n;
        let cone = cone_check(&g)?;
        let mu_integral = g.integral_mu();
        let w_n = wandering_rate(n);
        for &x in probes {
            let value = g.eval(x);
            let oracle = if n <= oracle_up_to as u64 {
                Some(exact_iterate(f, n as u32, &x)?)
            } else {
                None
            };
            rows.push(OperatorTrace {
                n,
                w_n,
                probe_x: x,
                value,
                product: w_n * value,
                min_slope: cone.min_slope,
                max_second_difference: cone.max_second_difference,
                mu_integral,
                oracle,
            });
        }
    }
    Ok(rows)
}
