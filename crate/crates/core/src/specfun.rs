//! Special functions for spherical harmonic analysis: fully normalized
//! associated Legendre functions, Gegenbauer polynomials, eigenspace
//! dimensions and the zonal reproducing kernel of a single degree.
//!
//! Normalization convention (no Condon-Shortley phase): `assoc_legendre_norm`
//! returns
//!
//! ```text
//! qlm(l, m, x) = sqrt( (2l+1)/(4 pi) * (l-m)!/(l+m)! ) * P_l^m(x)
//! ```
//!
//! so that the real spherical harmonics
//!
//! ```text
//! Y_l^0      = qlm(l, 0, cos theta)
//! Y_l^m      = sqrt(2) * qlm(l, m, cos theta) * cos(m phi)   (m > 0)
//! Y_l^{-m}   = sqrt(2) * qlm(l, m, cos theta) * sin(m phi)   (m > 0)
//! ```
//!
//! are orthonormal in L^2(S^2) and satisfy the addition theorem
//! sum_m Y_l^m(x) Y_l^m(y) = (2l+1)/(4 pi) * P_l(x . y).
//!
//! Everything is evaluated by recurrences on the *normalized* values, which
//! keeps every intermediate O(sqrt(l)) and is stable well past l = 2048
//! (unnormalized P_l^m overflows f64 near m ~ 150).

use crate::error::{Error, Result};

/// A single Laplace eigenspace on S^d: degree l, eigenvalue lambda^2 with
/// lambda = sqrt(l(l+d-1)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicDegree {
    pub d: u32,
    pub l: u32,
}

impl HarmonicDegree {
    pub fn new(d: u32, l: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("sphere dimension d = {d} must be >= 2")));
        }
        Ok(HarmonicDegree { d, l })
    }

    pub fn lambda(&self) -> f64 {
        let l = f64::from(self.l);
        let d = f64::from(self.d);
        (l * (l + d - 1.0)).sqrt()
    }

    pub fn dim(&self) -> u64 {
        harmonic_dim(self.d, self.l)
    }
}

/// Surface measure of the unit sphere S^d in R^(d+1):
/// omega_d = 2 pi^((d+1)/2) / Gamma((d+1)/2), via exact half-integer Gamma.
pub fn surface_area(d: u32) -> f64 {
    assert!(d >= 1, "surface_area defined for d >= 1");
    2.0 * std::f64::consts::PI.powf((f64::from(d) + 1.0) / 2.0) / gamma_half(d + 1)
}

/// Gamma(n/2) for integer n >= 1.
fn gamma_half(n: u32) -> f64 {
    let mut g = if n % 2 == 1 { std::f64::consts::PI.sqrt() } else { 1.0 };
    let mut x = if n % 2 == 1 { 0.5 } else { 1.0 };
    while x < f64::from(n) / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Dimension of the space of degree-l spherical harmonics on S^d:
/// N(d, 0) = 1 and N(d, l) = (2l+d-1) * (l+1)...(l+d-2) / (d-1)! for l >= 1.
pub fn harmonic_dim(d: u32, l: u32) -> u64 {
    assert!(d >= 2, "harmonic_dim defined for d >= 2");
    if l == 0 {
        return 1;
    }
    let l = u128::from(l);
    let d = u128::from(d);
    let mut num: u128 = 2 * l + d - 1;
    for j in 1..=(d - 2) {
        num *= l + j;
    }
    let mut den: u128 = 1;
    for j in 1..=(d - 1) {
        den *= j;
    }
    u64::try_from(num / den).expect("harmonic dimension exceeds u64; degree out of desk scale")
}

/// Fully normalized associated Legendre function qlm(l, m, x) (see module
/// docs). Stable ascending-degree recurrence on normalized values.
pub fn assoc_legendre_norm(l: u32, m: u32, x: f64) -> Result<f64> {
    check_legendre_args(l, m, x)?;
    let q_mm = sectoral(m, x);
    Ok(climb_degree(l, m, x, q_mm))
}

/// qlm(l, m, x) for every m in 0..=l at fixed (l, x). O(l^2), used to
/// evaluate whole eigenspace bases node by node.
pub fn assoc_legendre_norm_all(l: u32, x: f64) -> Result<Vec<f64>> {
    check_legendre_args(l, 0, x)?;
    let mut out = Vec::with_capacity(l as usize + 1);
    let mut q_mm = FOUR_PI_RSQRT;
    let s = (1.0 - x * x).max(0.0).sqrt();
    for m in 0..=l {
        if m > 0 {
            let mf = f64::from(m);
            q_mm *= s * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
        }
        out.push(climb_degree(l, m, x, q_mm));
    }
    Ok(out)
}

/// qlm(l, m, x) for m in m_lo..=m_hi. O((m_hi-m_lo+1) * l).
pub fn assoc_legendre_norm_window(l: u32, m_lo: u32, m_hi: u32, x: f64) -> Result<Vec<f64>> {
    if m_lo > m_hi {
        return Err(Error::domain(format!("empty window [{m_lo}, {m_hi}]")));
    }
    check_legendre_args(l, m_hi, x)?;
    let mut out = Vec::with_capacity((m_hi - m_lo) as usize + 1);
    let mut q_mm = FOUR_PI_RSQRT;
    let s = (1.0 - x * x).max(0.0).sqrt();
    for m in 1..=m_hi {
        let mf = f64::from(m);
        q_mm *= s * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
        if m >= m_lo {
            out.push(climb_degree(l, m, x, q_mm));
        }
    }
    if m_lo == 0 {
        out.insert(0, climb_degree(l, 0, x, FOUR_PI_RSQRT));
    }
    Ok(out)
}

const FOUR_PI_RSQRT: f64 = 0.28209479177387814; // 1/sqrt(4 pi)

fn check_legendre_args(l: u32, m: u32, x: f64) -> Result<()> {
    if m > l {
        return Err(Error::domain(format!("order m = {m} exceeds degree l = {l}")));
    }
    if !(x.is_finite() && x.abs() <= 1.0) {
        return Err(Error::domain(format!("legendre argument x = {x} outside [-1, 1]")));
    }
    Ok(())
}

/// q_m^m(x) = sqrt((2m+1)/(4 pi) * 1/(2m)!) * (2m-1)!! * (1-x^2)^(m/2),
/// built multiplicatively so nothing over- or underflows prematurely.
fn sectoral(m: u32, x: f64) -> f64 {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut q = FOUR_PI_RSQRT;
    for j in 1..=m {
        let jf = f64::from(j);
        q *= s * ((2.0 * jf + 1.0) / (2.0 * jf)).sqrt();
    }
    q
}

/// Ascend q_m^m -> q_l^m with the normalized three-term recurrence
/// q_j^m = a_jm * x * q_{j-1}^m - b_jm * q_{j-2}^m,
/// a_jm = sqrt((4j^2-1)/(j^2-m^2)), b_jm = sqrt((2j+1)/(2j-3) * ((j-1)^2-m^2)/(j^2-m^2)).
fn climb_degree(l: u32, m: u32, x: f64, q_mm: f64) -> f64 {
    if l == m {
        return q_mm;
    }
    let mf = f64::from(m);
    let m2 = mf * mf;
    let mut prev = 0.0f64; // q_{m-1}^m, conventionally zero
    let mut cur = q_mm;
    for j in (m + 1)..=l {
        let jf = f64::from(j);
        let j2 = jf * jf;
        let a = ((4.0 * j2 - 1.0) / (j2 - m2)).sqrt();
        let b = ((2.0 * jf + 1.0) / (2.0 * jf - 3.0) * ((jf - 1.0) * (jf - 1.0) - m2) / (j2 - m2))
            .sqrt();
        let next = a * x * cur - b * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Real orthonormal spherical harmonic on S^2 at colatitude theta, longitude
/// phi. Signed order m in [-l, l]: positive orders are cosine type, negative
/// orders sine type (see module docs).
pub fn sph_harm_real(l: u32, m: i32, theta: f64, phi: f64) -> Result<f64> {
    let mm = m.unsigned_abs();
    let q = assoc_legendre_norm(l, mm, theta.cos())?;
    Ok(if m == 0 {
        q
    } else if m > 0 {
        std::f64::consts::SQRT_2 * q * (f64::from(mm) * phi).cos()
    } else {
        std::f64::consts::SQRT_2 * q * (f64::from(mm) * phi).sin()
    })
}

/// Gegenbauer (ultraspherical) polynomial C_l^a(t) by the three-term
/// recurrence l C_l = 2t(l+a-1) C_{l-1} - (l+2a-2) C_{l-2}.
/// a = 1/2 reproduces the Legendre polynomials.
pub fn gegenbauer(l: u32, a: f64, t: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::domain(format!("gegenbauer index a = {a} must be positive")));
    }
    if !t.is_finite() {
        return Err(Error::domain(format!("gegenbauer argument t = {t} must be finite")));
    }
    if l == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0f64;
    let mut cur = 2.0 * a * t;
    for j in 2..=l {
        let jf = f64::from(j);
        let next = (2.0 * t * (jf + a - 1.0) * cur - (jf + 2.0 * a - 2.0) * prev) / jf;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// The reproducing kernel of the degree-l eigenspace on S^d, as a function of
/// the cosine of geodesic distance:
///
/// ```text
/// Z_l(c) = N(d,l)/omega_d * C_l^a(c) / C_l^a(1),   a = (d-1)/2,
/// ```
///
/// so that Z_l(x . y) = sum_j Y_j(x) Y_j(y) over any orthonormal basis of the
/// eigenspace, and Z_l(1) = N(d,l)/omega_d is the diagonal height.
#[derive(Debug, Clone)]
pub struct ZonalKernel {
    degree: HarmonicDegree,
    normalization: f64,
    gegenbauer_at_one: f64,
}

impl ZonalKernel {
    pub fn new(d: u32, l: u32) -> Result<Self> {
        let degree = HarmonicDegree::new(d, l)?;
        let a = (f64::from(d) - 1.0) / 2.0;
        let at_one = gegenbauer(l, a, 1.0)?;
        if !at_one.is_finite() || at_one <= 0.0 {
            return Err(Error::numerical(format!(
                "gegenbauer normalization C_l^a(1) = {at_one} unusable at d={d}, l={l}"
            )));
        }
        let normalization = harmonic_dim(d, l) as f64 / surface_area(d);
        Ok(ZonalKernel { degree, normalization, gegenbauer_at_one: at_one })
    }

    pub fn degree(&self) -> HarmonicDegree {
        self.degree
    }

    /// Kernel diagonal Z_l(1) = N(d,l)/omega_d.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Evaluate at a cosine of geodesic distance. c may overshoot [-1, 1] by
    /// at most 1e-9 (dot products of unit vectors in f64); larger violations
    /// are domain errors.
    pub fn eval(&self, c: f64) -> Result<f64> {
        if !c.is_finite() || c.abs() > 1.0 + 1e-9 {
            return Err(Error::domain(format!("zonal kernel argument c = {c} outside [-1, 1]")));
        }
        let c = c.clamp(-1.0, 1.0);
        let a = (f64::from(self.degree.d) - 1.0) / 2.0;
        let num = gegenbauer(self.degree.l, a, c)?;
        Ok(self.normalization * num / self.gegenbauer_at_one)
    }

    /// The L^2-normalized packet centered at a point at geodesic distance
    /// acos(c): Z_l(c) / sqrt(Z_l(1)). Its L^2(S^d) norm is one.
    pub fn packet(&self, c: f64) -> Result<f64> {
        Ok(self.eval(c)? / self.normalization.sqrt())
    }
}

/// Free-function form of [`ZonalKernel::eval`].
pub fn zonal_eval(zk: &ZonalKernel, c: f64) -> Result<f64> {
    zk.eval(c)
}
