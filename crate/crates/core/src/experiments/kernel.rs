//! Kernel decay envelopes: the normalized zonal packet peaks like
//! lambda^((d-1)/2) at its center and decays like theta^(-(d-1)/2) away from
//! it; both envelopes must stay bounded across degrees.

use crate::error::{Error, Result};
use crate::experiments::refine::refine_to_stability;
use crate::experiments::report::{Check, ExperimentReport};
use crate::experiments::scaling::{format_degrees, REFINE_TOL};
use crate::specfun::{HarmonicDegree, ZonalKernel};

/// Allowed max/min ratio of each envelope statistic across the degree ladder.
pub const ENVELOPE_RATIO_BOUND: f64 = 4.0;

/// For each degree, computes the tail envelope
/// E(l) = max over theta in [2/lambda, pi/2] of |packet(theta)| theta^((d-1)/2)
/// and the peak envelope
/// N(l) = max over theta in [0, 1/lambda] of |packet(theta)| lambda^(-(d-1)/2),
/// where packet is the L^2-normalized zonal function. Passes when both vary
/// by at most a factor of [`ENVELOPE_RATIO_BOUND`] across the ladder.
pub fn kernel_decay_check(d: u32, lgrid: &[u32]) -> Result<ExperimentReport> {
    if !(2..=4).contains(&d) {
        return Err(Error::domain(format!("kernel decay check supports d in 2..=4, got {d}")));
    }
    if lgrid.len() < 2 || lgrid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("degree ladder must be strictly increasing with >= 2 entries"));
    }

    let mut report = ExperimentReport::new("kernel-decay");
    report.push_config("d", d);
    report.push_config("lgrid", format_degrees(lgrid));
    report.push_config("ratio_bound", ENVELOPE_RATIO_BOUND);
    report.push_config("refine_tol", REFINE_TOL);

    let half_dm1 = f64::from(d - 1) / 2.0;
    let mut tails = Vec::new();
    let mut peaks = Vec::new();
    let mut worst_refine = 0.0f64;
    for &l in lgrid {
        let lam = HarmonicDegree::new(d, l)?.lambda();
        let kernel = ZonalKernel::new(d, l)?;
        let refined = refine_to_stability(
            (16 * l as usize).max(1024),
            (256 * l as usize).max(16 * 1024),
            REFINE_TOL,
            |m| {
                // tail region [2/lambda, pi/2], m samples
                let lo = 2.0 / lam;
                let hi = std::f64::consts::FRAC_PI_2;
                let mut tail = 0.0f64;
                for i in 0..=m {
                    let theta = lo + (hi - lo) * i as f64 / m as f64;
                    let v = kernel.packet(theta.cos())?.abs() * theta.powf(half_dm1);
                    tail = tail.max(v);
                }
                // peak region [0, 1/lambda], proportionally fewer samples
                let mp = (m / 16).max(64);
                let mut peak = 0.0f64;
                for i in 0..=mp {
                    let theta = (1.0 / lam) * i as f64 / mp as f64;
                    let v = kernel.packet(theta.cos())?.abs() * lam.powf(-half_dm1);
                    peak = peak.max(v);
                }
                Ok(vec![tail, peak])
            },
        )?;
        worst_refine = worst_refine.max(refined.max_rel_change);
        report.push_row(l, lam, "envelope_tail", refined.values[0]);
        report.push_row(l, lam, "envelope_peak", refined.values[1]);
        report.push_row(l, lam, "refine_change", refined.max_rel_change);
        tails.push(refined.values[0]);
        peaks.push(refined.values[1]);
    }

    let ratio = |v: &[f64]| -> f64 {
        let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
        max / min
    };
    report.push_check(Check::upper_bound(
        "tail envelope max/min ratio",
        ratio(&tails),
        ENVELOPE_RATIO_BOUND,
        0.0,
    ));
    report.push_check(Check::upper_bound(
        "peak envelope max/min ratio",
        ratio(&peaks),
        ENVELOPE_RATIO_BOUND,
        0.0,
    ));
    report.push_check(Check::upper_bound(
        "refinement relative change on doubling",
        worst_refine,
        REFINE_TOL,
        0.0,
    ));
    Ok(report)
}
