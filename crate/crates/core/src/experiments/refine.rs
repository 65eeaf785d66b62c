//! Automatic grid refinement: double the resolution until every reported
//! quantity is stable to a relative tolerance, with a hard cap.

use crate::error::Result;

/// Outcome of a refinement loop: the accepted resolution, the quantities
/// evaluated there, and the relative change observed on the final doubling.
#[derive(Debug, Clone)]
pub struct Refinement {
    /// Resolution parameter at which the values were accepted.
    pub resolution: usize,
    /// Quantities at the accepted resolution.
    pub values: Vec<f64>,
    /// max_i |v_fine - v_coarse| / max(|v_fine|, tiny) on the last doubling.
    pub max_rel_change: f64,
    /// Whether the loop stopped because it hit the resolution cap while the
    /// change was still above tolerance.
    pub hit_cap: bool,
}

const TINY: f64 = 1e-300;

fn rel_change(coarse: &[f64], fine: &[f64]) -> f64 {
    coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (f - c).abs() / f.abs().max(TINY))
        .fold(0.0f64, f64::max)
}

/// Evaluate `eval` at n, 2n, 4n, ... until the componentwise relative change
/// across one doubling drops below `tol` or the next doubling would exceed
/// `cap`. Returns the finer-grid values in all cases; `hit_cap` marks runs
/// that never reached tolerance.
pub fn refine_to_stability<F>(n0: usize, cap: usize, tol: f64, mut eval: F) -> Result<Refinement>
where
    F: FnMut(usize) -> Result<Vec<f64>>,
{
    assert!(n0 >= 1 && tol > 0.0);
    let mut n = n0;
    let mut coarse = eval(n)?;
    loop {
        let fine_n = n * 2;
        let fine = eval(fine_n)?;
        assert_eq!(coarse.len(), fine.len(), "refinement quantity count must be stable");
        let change = rel_change(&coarse, &fine);
        if change < tol {
            return Ok(Refinement {
                resolution: fine_n,
                values: fine,
                max_rel_change: change,
                hit_cap: false,
            });
        }
        if fine_n * 2 > cap {
            return Ok(Refinement {
                resolution: fine_n,
                values: fine,
                max_rel_change: change,
                hit_cap: true,
            });
        }
        n = fine_n;
        coarse = fine;
    }
}
