//! Families of orthonormal systems and coefficient profiles exercised by the
//! experiments, plus the default degree ladders.

use crate::error::{Error, Result};
use crate::geometry::{Chart, SubmanifoldGrid};
use crate::systems::{
    eigenspace_basis_matrix, mixed_seed, random_system_from_basis, window_system,
    window_system_high, window_system_low, HarmonicConvention, SystemMatrix,
};

/// Geometric ladder of eigenfunction degrees used by default: roughly
/// half-octave steps. The d = 2 ladder spans 16..256; higher dimensions stop
/// at 64 (dense-operator cost grows with the grid dimension).
pub fn degree_ladder(d: u32) -> Vec<u32> {
    if d == 2 {
        vec![16, 23, 32, 45, 64, 91, 128, 181, 256]
    } else {
        vec![16, 23, 32, 45, 64]
    }
}

/// The default ladder restricted to [lo, hi].
pub fn degree_ladder_in(d: u32, lo: u32, hi: u32) -> Vec<u32> {
    degree_ladder(d).into_iter().filter(|l| (lo..=hi).contains(l)).collect()
}

/// Window half-width t_k = ceil(k^tau) used by the order-window families.
pub fn window_width(k_deg: u32, tau: f64) -> u32 {
    (f64::from(k_deg).powf(tau)).ceil().max(1.0) as u32
}

/// Coefficient profile t_j applied to a system of n functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TProfile {
    /// t identically one: exercises the alpha = p/2 endpoint.
    Ones,
    /// Single spike t = e_0: exercises the alpha = 1 side.
    Spike,
    /// Geometric decay t_j = ratio^j: an intermediate profile.
    Geometric { ratio: f64 },
}

impl TProfile {
    pub fn label(&self) -> String {
        match self {
            TProfile::Ones => "ones".to_string(),
            TProfile::Spike => "spike".to_string(),
            TProfile::Geometric { ratio } => format!("geom{ratio}"),
        }
    }

    pub fn weights(&self, n: usize) -> Vec<f64> {
        match self {
            TProfile::Ones => vec![1.0; n],
            TProfile::Spike => {
                let mut t = vec![0.0; n];
                if n > 0 {
                    t[0] = 1.0;
                }
                t
            }
            TProfile::Geometric { ratio } => (0..n).map(|j| ratio.powi(j as i32)).collect(),
        }
    }
}

/// A recipe producing one or more orthonormal systems per degree, together
/// with the submanifold the experiment measures them on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemFamily {
    /// The single zonal harmonic Y_l^0, measured on a meridian through its
    /// pole.
    SingleZonal,
    /// The full (2l+1)-dimensional eigenspace basis; its density is constant.
    FullEigenspace,
    /// Low-order window, orders m in [t, 2t] with t = ceil(l^tau); these
    /// concentrate along meridians.
    WindowLow { tau: f64 },
    /// High-order window, orders m in [l-2t, l-t]; these concentrate near
    /// the equator.
    WindowHigh { tau: f64 },
    /// Seeded random orthonormal systems of `n_functions` eigenfunctions,
    /// `draws` independent draws per degree.
    Random { n_functions: usize, draws: u32, seed: u64 },
}

impl SystemFamily {
    pub fn label(&self) -> String {
        match self {
            SystemFamily::SingleZonal => "zonal".to_string(),
            SystemFamily::FullEigenspace => "eigenspace".to_string(),
            SystemFamily::WindowLow { tau } => format!("windowlow{tau}"),
            SystemFamily::WindowHigh { tau } => format!("windowhigh{tau}"),
            SystemFamily::Random { n_functions, draws, .. } => {
                format!("random{n_functions}x{draws}")
            }
        }
    }

    /// The submanifold this family is measured on. Meridian-concentrated
    /// families use the quarter-meridian arc; equator-concentrated ones the
    /// equator circle.
    pub fn chart(&self) -> Chart {
        match self {
            SystemFamily::WindowHigh { .. } => Chart::Equator { d: 2 },
            _ => Chart::MeridianArc,
        }
    }

    /// Number of independent systems produced per degree.
    pub fn draws(&self) -> u32 {
        match self {
            SystemFamily::Random { draws, .. } => (*draws).max(1),
            _ => 1,
        }
    }

    /// Evaluate the family's systems at degree l on a grid (all draws, unit
    /// coefficient weights; callers apply a [`TProfile`]).
    pub fn build(&self, l: u32, grid: &SubmanifoldGrid) -> Result<Vec<SystemMatrix>> {
        match self {
            SystemFamily::SingleZonal => Ok(vec![window_system(
                l,
                0,
                0,
                HarmonicConvention::RealCosine,
                grid,
            )?]),
            SystemFamily::FullEigenspace => Ok(vec![eigenspace_basis_matrix(l, grid)?]),
            SystemFamily::WindowLow { tau } => {
                check_tau(*tau)?;
                Ok(vec![window_system_low(l, window_width(l, *tau), grid)?])
            }
            SystemFamily::WindowHigh { tau } => {
                check_tau(*tau)?;
                Ok(vec![window_system_high(l, window_width(l, *tau), grid)?])
            }
            SystemFamily::Random { n_functions, draws, seed } => {
                let dim = 2 * l as usize + 1;
                let r = (*n_functions).min(dim).max(1);
                let basis = eigenspace_basis_matrix(l, grid)?;
                (0..(*draws).max(1))
                    .map(|i| {
                        let s = mixed_seed(seed.wrapping_add(u64::from(i).wrapping_mul(
                            0x2545_F491_4F6C_DD1D,
                        )), l);
                        random_system_from_basis(&basis, r, s)
                    })
                    .collect()
            }
        }
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::domain(format!("window exponent tau = {tau} must lie in (0, 1)")));
    }
    Ok(())
}
