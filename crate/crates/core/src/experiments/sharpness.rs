//! Lower-bound saturation experiments: order-window systems on S^2 and
//! Gram-whitened zonal packet systems on S^d.

use nalgebra::DMatrix;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::experiments::fit::fit_loglog;
use crate::experiments::refine::refine_to_stability;
use crate::experiments::report::{Check, ExperimentReport};
use crate::experiments::scaling::{check_lgrid, format_degrees, REFINE_TOL};
use crate::exponents::{beta_threshold, ExponentQuery, Exponent};
use crate::geometry::{separated_points, Chart, SubmanifoldGrid};
use crate::norms::{density, lp_norm};
use crate::specfun::ZonalKernel;
use crate::systems::{
    window_system_high, window_system_low, zonal_gram_from_kernel, zonal_packet_system,
    zonal_packet_values,
};

/// Default tolerance on lower-bound slopes.
pub const LOWER_SLOPE_TOL: f64 = 0.05;
/// Tolerance on the single-packet (spike) slope, which is checked two-sided.
pub const SPIKE_SLOPE_TOL: f64 = 0.10;
/// Tolerance on zonal-packet lower-bound slopes.
pub const ZONAL_SLOPE_TOL: f64 = 0.10;
/// Required accuracy of the whitening identity A G A^T = I.
pub const WHITEN_TOL: f64 = 1e-10;

/// Order-window saturation on S^2. For each degree k in the ladder, with
/// window half-width t = ceil(k^tau), measures the window-system density in
/// L^{p/2} of a meridian (low orders) and of the equator (high orders), fits
/// both slopes against k, and checks them against the closed-form targets
/// (1 - 2/p) + tau 2/p (low, claimed for p >= 4) and (1 + tau)/2 (high,
/// claimed for p <= 4).
pub fn sharpness_s2(p: &Exponent, tau: f64, kgrid: &[u32]) -> Result<ExperimentReport> {
    let q = ExponentQuery::new(2, 1, *p)?; // validates p >= 2
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::domain(format!("window exponent tau = {tau} must lie in (0, 1)")));
    }
    check_lgrid(kgrid)?;
    let phalf = p.half();
    let two_u = 2.0 * q.p.recip().to_f64().unwrap();
    let target_low = (1.0 - two_u) + tau * two_u;
    let target_high = (1.0 + tau) / 2.0;
    let four = Exponent::from_int(4);

    let mut report = ExperimentReport::new("sharpness-s2");
    report.push_config("d", 2);
    report.push_config("p", p);
    report.push_config("tau", tau);
    report.push_config("kgrid", format_degrees(kgrid));
    report.push_config("low_chart", Chart::MeridianArc.label());
    report.push_config("high_chart", Chart::Equator { d: 2 }.label());
    report.push_config("slope_tol", LOWER_SLOPE_TOL);
    report.push_config("refine_tol", REFINE_TOL);

    let mut low_points = Vec::new();
    let mut high_points = Vec::new();
    let mut worst_refine = 0.0f64;
    for &k in kgrid {
        let lam = q.lambda(k);
        let t_k = super::families::window_width(k, tau);
        let refined = refine_to_stability(8 * k as usize, 64 * k as usize, REFINE_TOL, |n| {
            let low_grid = SubmanifoldGrid::for_chart(Chart::MeridianArc, n)?;
            let high_grid = SubmanifoldGrid::for_chart(Chart::Equator { d: 2 }, n)?;
            let low = window_system_low(k, t_k, &low_grid)?;
            let high = window_system_high(k, t_k, &high_grid)?;
            Ok(vec![
                lp_norm(&density(&low), &low_grid, &phalf)?,
                lp_norm(&density(&high), &high_grid, &phalf)?,
            ])
        })?;
        worst_refine = worst_refine.max(refined.max_rel_change);
        report.push_row(k, lam, "window_width", f64::from(t_k));
        report.push_row(k, lam, "lowwindow_density_norm", refined.values[0]);
        report.push_row(k, lam, "highwindow_density_norm", refined.values[1]);
        report.push_row(k, lam, "refine_change", refined.max_rel_change);
        low_points.push((f64::from(k), refined.values[0]));
        high_points.push((f64::from(k), refined.values[1]));
    }

    let low_fit = fit_loglog(&low_points)?;
    let high_fit = fit_loglog(&high_points)?;
    let low_slope = low_fit.slope;
    let high_slope = high_fit.slope;
    report.push_fit("lowwindow", low_fit);
    report.push_fit("highwindow", high_fit);
    if *p >= four {
        report.push_check(Check::lower_bound(
            "low-window density slope on meridian",
            low_slope,
            target_low,
            LOWER_SLOPE_TOL,
        ));
    }
    if *p <= four {
        report.push_check(Check::lower_bound(
            "high-window density slope on equator",
            high_slope,
            target_high,
            LOWER_SLOPE_TOL,
        ));
    }
    report.push_check(Check::upper_bound(
        "refinement relative change on doubling",
        worst_refine,
        REFINE_TOL,
        0.0,
    ));
    Ok(report)
}

/// Separated zonal-packet saturation on S^d along a great S^k. Builds a
/// C lambda^(beta-1)-separated set in a cap of the submanifold, whitens the
/// zonal translates into an orthonormal system, measures the packet density
/// in L^{p/2}(Sigma) with all-ones and with spiked coefficients, and checks
/// the slopes against (d-1) - 2k/p + (2/p) k (1-beta) and (d-1) - 2k/p.
pub fn sharpness_zonal(
    d: u32,
    k: u32,
    p: &Exponent,
    beta: f64,
    big_c: f64,
    lgrid: &[u32],
) -> Result<ExperimentReport> {
    let q = ExponentQuery::new(d, k, *p)?;
    if k > 2 {
        return Err(Error::domain(format!(
            "zonal packet experiment supports k <= 2, got k = {k}"
        )));
    }
    let thr = beta_threshold(k, d);
    let thr_f = thr.to_f64().unwrap();
    if beta < thr_f - 1e-12 {
        return Err(Error::config(format!(
            "beta = {beta} below beta_threshold({k}, {d}) = {thr} = {thr_f:.6}"
        )));
    }
    if !(beta < 1.0) {
        return Err(Error::domain(format!("beta = {beta} must lie below 1")));
    }
    if !(big_c >= 1.0) {
        return Err(Error::domain(format!("separation constant C = {big_c} must be >= 1")));
    }
    check_lgrid(lgrid)?;
    let chart = if k == 1 { Chart::Equator { d } } else { Chart::GreatSphere2 { d } };
    let phalf = p.half();
    let two_u = 2.0 * q.p.recip().to_f64().unwrap();
    let kf = f64::from(k);
    let target_ones = f64::from(d - 1) - kf * two_u + two_u * kf * (1.0 - beta);
    let target_spike = f64::from(d - 1) - kf * two_u;

    let mut report = ExperimentReport::new("sharpness-zonal");
    report.push_config("d", d);
    report.push_config("k", k);
    report.push_config("p", p);
    report.push_config("beta", beta);
    report.push_config("beta_threshold", thr);
    report.push_config("separation_constant", big_c);
    report.push_config("chart", chart.label());
    report.push_config("lgrid", format_degrees(lgrid));
    report.push_config("slope_tol", ZONAL_SLOPE_TOL);
    report.push_config("refine_tol", REFINE_TOL);

    // Packing candidates live on a fixed grid decoupled from the integration
    // grids, so refinement never moves the packet centers.
    let cand_resolution = if k == 1 { 4096 } else { 48 };
    report.push_config("candidate_resolution", cand_resolution);

    let mut ones_points = Vec::new();
    let mut spike_points = Vec::new();
    let mut worst_refine = 0.0f64;
    let mut worst_delta = 0.0f64;
    let mut worst_whiten = 0.0f64;

    for &l in lgrid {
        let lam = q.lambda(l);
        let cand = SubmanifoldGrid::for_chart(chart, cand_resolution)?;
        let pts = separated_points(&cand, lam, beta, big_c)?;
        let kernel = ZonalKernel::new(d, l)?;
        let gd = zonal_gram_from_kernel(&kernel, pts.points()).map_err(|e| match e {
            Error::GramNotPositiveDefinite { .. } => Error::numerical(format!(
                "beta or C too small for this degree range (l = {l}): {e}"
            )),
            other => other,
        })?;
        let whiten_residual = {
            let aga = &gd.a * &gd.g * gd.a.transpose();
            let eye = DMatrix::<f64>::identity(aga.nrows(), aga.ncols());
            (aga - eye).iter().fold(0.0f64, |m, v| m.max(v.abs()))
        };
        worst_delta = worst_delta.max(gd.delta_bound);
        worst_whiten = worst_whiten.max(whiten_residual);

        // densities at the packet centers: the candidate peaks, used to make
        // the sup norm grid-independent
        let center_vals = zonal_packet_values(&kernel, &gd, pts.points(), pts.points())?;
        let names = pts.len();
        let ones_center_sup = (0..names)
            .map(|c| (0..names).map(|r| center_vals[(r, c)].powi(2)).sum::<f64>())
            .fold(0.0f64, f64::max);
        let spike_center_sup =
            (0..names).map(|c| center_vals[(0, c)].powi(2)).fold(0.0f64, f64::max);

        let (n0, cap) = if k == 1 {
            ((8 * l as usize).max(64), 64 * l as usize)
        } else {
            ((l as usize + 2).max(24), 8 * (l as usize + 2))
        };
        let refined = refine_to_stability(n0, cap, REFINE_TOL, |n| {
            let grid = SubmanifoldGrid::for_chart(chart, n)?;
            let sys = zonal_packet_system(&gd, d, l, &pts, &grid)?;
            let dens = density(&sys);
            let spike_t = super::families::TProfile::Spike.weights(sys.n_functions());
            let sys_spike = sys.clone().with_t(spike_t)?;
            let dens_spike = density(&sys_spike);
            let (ones_norm, spike_norm) = if p.is_infinite() {
                (
                    lp_norm(&dens, &grid, &phalf)?.max(ones_center_sup),
                    lp_norm(&dens_spike, &grid, &phalf)?.max(spike_center_sup),
                )
            } else {
                (lp_norm(&dens, &grid, &phalf)?, lp_norm(&dens_spike, &grid, &phalf)?)
            };
            Ok(vec![ones_norm, spike_norm])
        })?;
        worst_refine = worst_refine.max(refined.max_rel_change);

        report.push_row(l, lam, "packing_count", pts.len() as f64);
        report.push_row(l, lam, "separation", pts.separation());
        report.push_row(l, lam, "gram_delta_bound", gd.delta_bound);
        report.push_row(l, lam, "gram_min_eigenvalue", gd.min_eigenvalue);
        report.push_row(l, lam, "whitening_residual", whiten_residual);
        report.push_row(l, lam, "ones_density_norm", refined.values[0]);
        report.push_row(l, lam, "spike_density_norm", refined.values[1]);
        report.push_row(l, lam, "refine_change", refined.max_rel_change);
        ones_points.push((lam, refined.values[0]));
        spike_points.push((lam, refined.values[1]));
    }

    let ones_fit = fit_loglog(&ones_points)?;
    let spike_fit = fit_loglog(&spike_points)?;
    let ones_slope = ones_fit.slope;
    let spike_slope = spike_fit.slope;
    report.push_fit("ones", ones_fit);
    report.push_fit("spike", spike_fit);
    report.push_check(Check::lower_bound(
        "ones-profile density slope",
        ones_slope,
        target_ones,
        ZONAL_SLOPE_TOL,
    ));
    report.push_check(Check::within_abs(
        "spike-profile density slope",
        spike_slope,
        target_spike,
        SPIKE_SLOPE_TOL,
    ));
    report.push_check(Check::upper_bound("gram delta bound", worst_delta, 0.5, 0.0));
    report.push_check(Check::upper_bound(
        "whitening identity residual",
        worst_whiten,
        0.0,
        WHITEN_TOL,
    ));
    report.push_check(Check::upper_bound(
        "refinement relative change on doubling",
        worst_refine,
        REFINE_TOL,
        0.0,
    ));
    Ok(report)
}
