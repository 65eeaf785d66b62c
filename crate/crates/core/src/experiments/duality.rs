//! Trace-duality sampling: for random weights W, coefficient profiles t, and
//! random orthonormal systems f_j in a fixed eigenspace, the weighted density
//! sum must stay below ||t||_alpha times the Schatten-alpha' norm of the
//! discretized weighted projector. The inequality holds exactly at any grid
//! resolution, so any violation beyond rounding is a defect.

use nalgebra::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::experiments::families::TProfile;
use crate::experiments::refine::refine_to_stability;
use crate::experiments::report::{Check, ExperimentReport};
use crate::experiments::scaling::REFINE_TOL;
use crate::exponents::{theorem_alpha_h, Exponent, ExponentQuery};
use crate::geometry::{Chart, SubmanifoldGrid};
use crate::norms::{assemble_projector_with_kernel, lalpha_norm, schatten_norm};
use crate::specfun::ZonalKernel;
use crate::systems::{eigenspace_basis_matrix, mixed_seed, random_system_from_basis, SystemMatrix};

/// Relative slack beyond which a draw counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-8;
/// Functions per random orthonormal system.
const SYSTEM_SIZE: usize = 6;

/// A weight function W on the equator circle, described by parameters so the
/// same W can be evaluated on grids of any resolution.
#[derive(Debug, Clone)]
enum WSpec {
    /// Random trigonometric polynomial sum_j c_j e^(i j phi), |j| <= deg.
    Trig { coeffs: Vec<Complex<f64>> },
    /// Gaussian bump in the circle angle, width sigma (a concentrated spike).
    Bump { center: f64, sigma: f64 },
    /// Constant complex weight.
    Constant { value: Complex<f64> },
}

impl WSpec {
    fn family(&self) -> &'static str {
        match self {
            WSpec::Trig { .. } => "trig",
            WSpec::Bump { .. } => "bump",
            WSpec::Constant { .. } => "constant",
        }
    }

    fn eval(&self, grid: &SubmanifoldGrid) -> Vec<Complex<f64>> {
        grid.points()
            .iter()
            .map(|pt| {
                let phi = pt.coords()[1].atan2(pt.coords()[0]);
                match self {
                    WSpec::Trig { coeffs } => {
                        let deg = (coeffs.len() / 2) as i64;
                        let mut acc = Complex::new(0.0, 0.0);
                        for (idx, c) in coeffs.iter().enumerate() {
                            let j = idx as i64 - deg;
                            acc += c * Complex::from_polar(1.0, j as f64 * phi);
                        }
                        acc
                    }
                    WSpec::Bump { center, sigma } => {
                        let raw = (phi - center).rem_euclid(2.0 * std::f64::consts::PI);
                        let dist = raw.min(2.0 * std::f64::consts::PI - raw);
                        Complex::new((-(dist / sigma).powi(2)).exp(), 0.0)
                    }
                    WSpec::Constant { value } => *value,
                }
            })
            .collect()
    }
}

/// Everything defining one draw, independent of grid resolution.
#[derive(Debug, Clone)]
struct DrawSpec {
    w: WSpec,
    t_profile: TProfile,
    f_seed: u64,
}

fn draw_spec(i: u32, l: u32, lam: f64, seed: u64) -> DrawSpec {
    let ds = mixed_seed(seed ^ u64::from(i).wrapping_mul(0x9E37_79B9_7F4A_7C15), l);
    let mut rng = ChaCha8Rng::seed_from_u64(ds);
    let w = match i % 3 {
        0 => {
            let deg = (l as usize / 8).max(4);
            let scale = 1.0 / ((2 * deg + 1) as f64).sqrt();
            let coeffs = (0..(2 * deg + 1))
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    Complex::new(re * scale, im * scale)
                })
                .collect();
            WSpec::Trig { coeffs }
        }
        1 => WSpec::Bump {
            center: rng.gen_range(0.0..(2.0 * std::f64::consts::PI)),
            sigma: 16.0 / lam,
        },
        _ => {
            let phase = rng.gen_range(0.0..(2.0 * std::f64::consts::PI));
            let mag = rng.gen_range(0.5..1.5);
            WSpec::Constant { value: Complex::from_polar(mag, phase) }
        }
    };
    let t_profile = match (i / 3) % 3 {
        0 => TProfile::Ones,
        1 => TProfile::Spike,
        _ => TProfile::Geometric { ratio: 0.7 },
    };
    DrawSpec { w, t_profile, f_seed: rng.gen() }
}

/// LHS and RHS of the trace-duality inequality for one draw at one grid.
fn evaluate_draw(
    spec: &DrawSpec,
    kernel: &ZonalKernel,
    basis: &SystemMatrix,
    grid: &SubmanifoldGrid,
    alpha: &Exponent,
    alpha_conj: &Exponent,
) -> Result<(f64, f64)> {
    let wvals = spec.w.eval(grid);
    let sys = random_system_from_basis(basis, SYSTEM_SIZE, spec.f_seed)?;
    let t = spec.t_profile.weights(SYSTEM_SIZE);
    let f = sys.values();
    let weights = grid.weights();
    let mut lhs = 0.0f64;
    for (j, tj) in t.iter().enumerate() {
        if *tj == 0.0 {
            continue;
        }
        let mut acc = 0.0f64;
        for i in 0..grid.len() {
            acc += weights[i] * wvals[i].norm_sqr() * f[(j, i)].norm_sqr();
        }
        lhs += tj * acc;
    }
    let op = assemble_projector_with_kernel(kernel, grid, &wvals)?;
    let rhs = lalpha_norm(&t, alpha)? * schatten_norm(&op, alpha_conj)?;
    Ok((lhs, rhs))
}

/// Sample the trace-duality inequality `n_draws` times at degree l on the
/// equator of S^2, with W cycled through trig-polynomial, bump, and constant
/// families and t through ones/spike/geometric profiles. Reports the maximum
/// relative slack and counts violations beyond [`VIOLATION_TOL`].
pub fn duality_sampling(
    l: u32,
    k: u32,
    p: &Exponent,
    n_draws: u32,
    seed: u64,
) -> Result<ExperimentReport> {
    let q = ExponentQuery::new(2, k, *p)?; // enforces k = 1 on S^2
    if n_draws == 0 {
        return Err(Error::config("duality sampling needs at least one draw"));
    }
    let ah = theorem_alpha_h(&q)?;
    let alpha = ah.alpha;
    let alpha_conj = alpha.conjugate()?;
    let lam = q.lambda(l);
    let chart = Chart::Equator { d: 2 };

    let mut report = ExperimentReport::new("duality");
    report.push_config("d", 2);
    report.push_config("k", k);
    report.push_config("p", p);
    report.push_config("alpha", alpha);
    report.push_config("alpha_conjugate", alpha_conj);
    report.push_config("l", l);
    report.push_config("n_draws", n_draws);
    report.push_config("seed", seed);
    report.push_config("system_size", SYSTEM_SIZE);
    report.push_config("chart", chart.label());
    report.push_config("w_families", "trig,bump,constant (cycled by draw)");
    report.push_config("t_profiles", "ones,spike,geom0.7 (cycled by draw)");
    report.push_config("violation_tol", VIOLATION_TOL);
    report.push_config("refine_tol", REFINE_TOL);

    let specs: Vec<DrawSpec> =
        (0..n_draws).map(|i| draw_spec(i, l, lam, seed)).collect();
    let kernel = ZonalKernel::new(2, l)?;

    // Probe one draw per W family with the refinement loop; run all draws at
    // the largest accepted resolution.
    let n0 = (4 * l as usize).max(128);
    let cap = 64 * l as usize;
    let mut n_star = 2 * n0;
    let mut worst_refine = 0.0f64;
    for probe in specs.iter().take(3) {
        let refined = refine_to_stability(n0, cap, REFINE_TOL, |n| {
            let grid = SubmanifoldGrid::for_chart(chart, n)?;
            let basis = eigenspace_basis_matrix(l, &grid)?;
            let (lhs, rhs) = evaluate_draw(probe, &kernel, &basis, &grid, &alpha, &alpha_conj)?;
            Ok(vec![lhs, rhs])
        })?;
        worst_refine = worst_refine.max(refined.max_rel_change);
        n_star = n_star.max(refined.resolution);
    }
    report.push_config("grid_resolution", n_star);

    let grid = SubmanifoldGrid::for_chart(chart, n_star)?;
    let basis = eigenspace_basis_matrix(l, &grid)?;
    let outcomes: Vec<(f64, f64)> = specs
        .par_iter()
        .map(|spec| evaluate_draw(spec, &kernel, &basis, &grid, &alpha, &alpha_conj))
        .collect::<Result<Vec<_>>>()?;

    let mut max_slack = f64::NEG_INFINITY;
    let mut violations = 0u32;
    for (i, ((lhs, rhs), spec)) in outcomes.iter().zip(&specs).enumerate() {
        let slack = (lhs - rhs) / rhs.max(1e-300);
        if slack > VIOLATION_TOL {
            violations += 1;
        }
        max_slack = max_slack.max(slack);
        report.push_row(l, lam, format!("lhs_draw{i:03}_{}", spec.w.family()), *lhs);
        report.push_row(l, lam, format!("rhs_draw{i:03}_{}", spec.w.family()), *rhs);
        report.push_row(l, lam, format!("rel_slack_draw{i:03}"), slack);
    }
    report.push_row(l, lam, "max_rel_slack", max_slack);
    report.push_row(l, lam, "violations", f64::from(violations));
    report.push_row(l, lam, "refine_change", worst_refine);

    report.push_check(Check::upper_bound("max relative slack", max_slack, 0.0, VIOLATION_TOL));
    report.push_check(Check::upper_bound(
        "violations beyond tolerance",
        f64::from(violations),
        0.0,
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sample_has_no_violations() {
        let rep = duality_sampling(12, 1, &Exponent::from_int(4), 9, 424242).unwrap();
        assert!(rep.passed(), "{}", rep.summary());
        let c = rep.check("max relative slack").unwrap();
        assert!(c.observed < 1e-10, "slack {}", c.observed);
        // all three W families and t profiles appear
        let text = rep.csv_string().unwrap();
        assert!(text.contains("_trig"));
        assert!(text.contains("_bump"));
        assert!(text.contains("_constant"));
    }

    #[test]
    fn zero_t_profile_gives_zero_sides() {
        // a system with t = 0 makes both sides vanish; the slack convention
        // treats 0 <= 0 as satisfied
        let lhs = 0.0f64;
        let rhs = 0.0f64;
        let slack = (lhs - rhs) / rhs.max(1e-300);
        assert!(slack <= VIOLATION_TOL);
    }

    #[test]
    fn alpha_conjugate_pairs() {
        for (p, want_alpha, want_conj) in [
            (Exponent::from_int(2), Exponent::from_int(2), Exponent::from_int(2)),
            (Exponent::from_int(8), Exponent::from_int(4), Exponent::from_ratio(4, 3)),
            (Exponent::Infinity, Exponent::Infinity, Exponent::from_int(1)),
        ] {
            let q = ExponentQuery::new(2, 1, p).unwrap();
            let a = theorem_alpha_h(&q).unwrap().alpha;
            assert_eq!(a, want_alpha);
            assert_eq!(a.conjugate().unwrap(), want_conj);
        }
    }

    #[test]
    fn rejects_k2_on_s2() {
        assert!(duality_sampling(12, 2, &Exponent::from_int(4), 3, 1).is_err());
    }
}
