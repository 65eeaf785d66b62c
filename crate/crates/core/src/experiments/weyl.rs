//! Pointwise Weyl constancy on S^2: the full-eigenspace density is exactly
//! (2l+1)/(4 pi) at every point, and its submanifold norm grows like
//! lambda^(d-1) = lambda.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::experiments::fit::fit_loglog;
use crate::experiments::refine::refine_to_stability;
use crate::experiments::report::{Check, ExperimentReport};
use crate::experiments::scaling::{check_lgrid, format_degrees, REFINE_TOL};
use crate::exponents::{Exponent, ExponentQuery};
use crate::geometry::{Chart, SubmanifoldGrid};
use crate::norms::{density, lp_norm};
use crate::specfun::assoc_legendre_norm_all;
use crate::systems::eigenspace_basis_matrix;

/// Relative tolerance on the pointwise addition-theorem identity.
pub const POINTWISE_TOL: f64 = 1e-8;
/// Allowed deviation of the density-norm slope from d - 1 = 1.
pub const SLOPE_TOL: f64 = 0.02;

/// Check the degree-l eigenspace density on S^2: pointwise constancy at
/// `n_samples` random points per degree (skipped when n_samples = 0), and a
/// meridian L^1-norm slope of 1 across the ladder.
pub fn weyl_check(lgrid: &[u32], n_samples: usize, seed: u64) -> Result<ExperimentReport> {
    check_lgrid(lgrid)?;
    let q = ExponentQuery::new(2, 1, Exponent::from_int(2))?;
    let phalf = q.p.half();

    let mut report = ExperimentReport::new("weyl");
    report.push_config("d", 2);
    report.push_config("p", q.p);
    report.push_config("chart", Chart::MeridianArc.label());
    report.push_config("lgrid", format_degrees(lgrid));
    report.push_config("n_samples", n_samples);
    report.push_config("seed", seed);
    report.push_config("pointwise_tol", POINTWISE_TOL);
    report.push_config("slope_tol", SLOPE_TOL);
    report.push_config("refine_tol", REFINE_TOL);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut norm_points = Vec::new();
    let mut worst_dev = 0.0f64;
    let mut worst_refine = 0.0f64;
    for &l in lgrid {
        let lam = q.lambda(l);
        if n_samples > 0 {
            let expected = (2.0 * f64::from(l) + 1.0) / (4.0 * std::f64::consts::PI);
            let mut dev = 0.0f64;
            for _ in 0..n_samples {
                let x: f64 = rng.gen_range(-1.0..=1.0);
                let qvals = assoc_legendre_norm_all(l, x)?;
                let s = qvals[0] * qvals[0]
                    + 2.0 * qvals[1..].iter().map(|v| v * v).sum::<f64>();
                dev = dev.max((s - expected).abs() / expected);
            }
            report.push_row(l, lam, "pointwise_max_rel_dev", dev);
            worst_dev = worst_dev.max(dev);
        }
        let refined =
            refine_to_stability(8 * l as usize, 64 * l as usize, REFINE_TOL, |n| {
                let grid = SubmanifoldGrid::for_chart(Chart::MeridianArc, n)?;
                let sys = eigenspace_basis_matrix(l, &grid)?;
                Ok(vec![lp_norm(&density(&sys), &grid, &phalf)?])
            })?;
        worst_refine = worst_refine.max(refined.max_rel_change);
        report.push_row(l, lam, "eigenspace_density_norm", refined.values[0]);
        report.push_row(l, lam, "refine_change", refined.max_rel_change);
        norm_points.push((lam, refined.values[0]));
    }

    let fit = fit_loglog(&norm_points)?;
    let slope = fit.slope;
    report.push_fit("density_norm", fit);
    if n_samples > 0 {
        report.push_check(Check::upper_bound(
            "pointwise relative deviation from (2l+1)/(4 pi)",
            worst_dev,
            0.0,
            POINTWISE_TOL,
        ));
    }
    report.push_check(Check::within_abs("density norm slope", slope, 1.0, SLOPE_TOL));
    report.push_check(Check::upper_bound(
        "refinement relative change on doubling",
        worst_refine,
        REFINE_TOL,
        0.0,
    ));
    Ok(report)
}
