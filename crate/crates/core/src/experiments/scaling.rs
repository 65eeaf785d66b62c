//! Upper-bound ratio scaling: the measured density norm divided by the bound
//! envelope must not grow by a positive power of lambda.

use crate::error::{Error, Result};
use crate::experiments::families::{SystemFamily, TProfile};
use crate::experiments::fit::fit_loglog;
use crate::experiments::refine::refine_to_stability;
use crate::experiments::report::{csv_file_name, Check, ExperimentReport};
use crate::exponents::{lambda_power, theorem_alpha_h, ExponentQuery};
use crate::geometry::SubmanifoldGrid;
use crate::norms::{density, lp_norm};

/// Default tolerance on upper-bound ratio slopes.
pub const RATIO_SLOPE_TOL: f64 = 0.10;
/// Relative tolerance for accepting a grid refinement.
pub const REFINE_TOL: f64 = 0.01;
/// Refinement start n = REFINE_N0_FACTOR * l and cap n <= REFINE_CAP_FACTOR * l.
pub const REFINE_N0_FACTOR: usize = 8;
pub const REFINE_CAP_FACTOR: usize = 64;

/// Measure R(lambda) = ||sum_j t_j |f_j|^2||_{L^{p/2}(Sigma)} /
/// (Lambda(lambda) ||t||_alpha) for a family of systems over a ladder of
/// degrees, fit its log-log slope, and check the slope stays below
/// [`RATIO_SLOPE_TOL`]: the desk-scale rendering of a uniform constant in the
/// upper bound.
pub fn ratio_upper_scaling(
    q: &ExponentQuery,
    family: &SystemFamily,
    profile: &TProfile,
    lgrid: &[u32],
) -> Result<ExperimentReport> {
    check_lgrid(lgrid)?;
    let chart = family.chart();
    if chart.d() != q.d || chart.k() != q.k {
        return Err(Error::config(format!(
            "family {} lives on a (d={}, k={}) chart but the query asks (d={}, k={})",
            family.label(),
            chart.d(),
            chart.k(),
            q.d,
            q.k
        )));
    }
    let alpha = theorem_alpha_h(q)?.alpha;
    let phalf = q.p.half();

    let mut report = ExperimentReport::new("scaling");
    report.push_config("d", q.d);
    report.push_config("k", q.k);
    report.push_config("p", q.p);
    report.push_config("alpha", alpha);
    report.push_config("family", family.label());
    report.push_config("profile", profile.label());
    report.push_config("chart", chart.label());
    report.push_config("lgrid", format_degrees(lgrid));
    report.push_config("slope_tol", RATIO_SLOPE_TOL);
    report.push_config("refine_tol", REFINE_TOL);

    let mut ratio_points = Vec::with_capacity(lgrid.len());
    let mut norm_points = Vec::with_capacity(lgrid.len());
    let mut single_function = true;
    let mut worst_refine = 0.0f64;
    let mut any_cap = false;

    for &l in lgrid {
        let lam = q.lambda(l);
        let envelope = lambda_power(q, lam)?;
        let mut tnorm_cell = None;
        let refined = refine_to_stability(
            REFINE_N0_FACTOR * l as usize,
            REFINE_CAP_FACTOR * l as usize,
            REFINE_TOL,
            |n| {
                let grid = SubmanifoldGrid::for_chart(chart, n)?;
                let systems = family.build(l, &grid)?;
                let mut norms = Vec::with_capacity(systems.len());
                for sys in systems {
                    let t = profile.weights(sys.n_functions());
                    let sys = sys.with_t(t.clone())?;
                    if tnorm_cell.is_none() {
                        tnorm_cell = Some(crate::norms::lalpha_norm(&t, &alpha)?);
                    }
                    if sys.n_functions() != 1 {
                        single_function = false;
                    }
                    norms.push(lp_norm(&density(&sys), &grid, &phalf)?);
                }
                Ok(norms)
            },
        )?;
        worst_refine = worst_refine.max(refined.max_rel_change);
        any_cap |= refined.hit_cap;
        let tnorm = tnorm_cell
            .ok_or_else(|| Error::numerical("family produced no systems (degenerate family)"))?;
        if !(tnorm > 0.0) {
            return Err(Error::numerical("coefficient profile has zero norm"));
        }

        let mut best = f64::NEG_INFINITY;
        for (i, norm) in refined.values.iter().enumerate() {
            let r = norm / (envelope * tnorm);
            if refined.values.len() > 1 {
                report.push_row(l, lam, format!("ratio_draw{i:03}"), r);
            }
            best = best.max(r);
        }
        let norm_max = refined.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        report.push_row(l, lam, "density_norm_max", norm_max);
        report.push_row(l, lam, "ratio_max", best);
        report.push_row(l, lam, "refine_change", refined.max_rel_change);
        report.push_row(l, lam, "refine_resolution", refined.resolution as f64);
        ratio_points.push((lam, best));
        norm_points.push((lam, norm_max));
    }

    let ratio_fit = fit_loglog(&ratio_points)?;
    let slope = ratio_fit.slope;
    report.push_fit("ratio", ratio_fit);
    report.push_fit("density_norm", fit_loglog(&norm_points)?);
    if single_function && *profile == TProfile::Ones {
        // for a one-function family the L^p norm of the function itself is
        // the square root of the density norm
        let pts: Vec<(f64, f64)> = norm_points.iter().map(|&(x, y)| (x, y.sqrt())).collect();
        report.push_fit("function_lp_norm", fit_loglog(&pts)?);
    }

    report.push_check(Check::upper_bound("ratio slope", slope, 0.0, RATIO_SLOPE_TOL));
    report.push_check(Check::upper_bound(
        "refinement relative change on doubling",
        worst_refine,
        REFINE_TOL,
        0.0,
    ));
    if any_cap {
        report.push_check(Check::upper_bound("refinement cap reached", 1.0, 0.0, 0.0));
    }
    Ok(report)
}

/// Conventional artifact file name for a scaling run.
pub fn scaling_file_name(q: &ExponentQuery, family: &SystemFamily, profile: &TProfile) -> String {
    csv_file_name(
        "scaling",
        q.d,
        q.k,
        &q.p,
        &format!("{}-{}", family.label(), profile.label()),
    )
}

pub(crate) fn check_lgrid(lgrid: &[u32]) -> Result<()> {
    if lgrid.len() < 4 {
        return Err(Error::config(format!(
            "degree ladder needs at least 4 entries, got {}",
            lgrid.len()
        )));
    }
    if lgrid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("degree ladder must be strictly increasing"));
    }
    Ok(())
}

pub(crate) fn format_degrees(lgrid: &[u32]) -> String {
    lgrid.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}
