//! Closed-form exponent tables for eigenfunction restriction bounds.
//!
//! All tables are piecewise-rational functions of 1/p, so every formula is
//! evaluated in exact rational arithmetic with p = infinity handled as
//! 1/p = 0. Exactness matters: case boundaries (p = 4, p = 2d/(d-1),
//! p = 2(d+1)/(d-1)) must agree between branches *exactly*, not to within a
//! float tolerance.
//!
//! The quantities, for the sphere S^d, a submanifold of dimension k, and a
//! Lebesgue exponent p in [2, inf]:
//!
//! ```text
//! sigma(p,d)   single-eigenfunction L^p(S^d) exponent
//!              = (d-1)/2 * (1/2 - 1/p)        2 <= p <= 2(d+1)/(d-1)
//!              = d*(1/2 - 1/p) - 1/2          2(d+1)/(d-1) <= p <= inf
//!
//! alpha(d,p)   l^alpha exponent for systems on the full sphere
//!              = 2p/(p+2)                     2 <= p <= 2(d+1)/(d-1)
//!              = p(d-1)/(2d)                  above (infinite at p = inf)
//!
//! delta(k,d,p) single-eigenfunction restriction exponent to Sigma^k
//!              k = d-1:  (d-1)/4 - (d-2)/(2p)    2 <= p < 2d/(d-1)
//!                        (d-1)/(2d)              p = 2d/(d-1)  (both limits)
//!                        (d-1)/2 - (d-1)/p       p > 2d/(d-1)
//!              k = d-2:  (d-1)/2 - (d-2)/p
//!              k <= d-3: (d-1)/2 - k/p
//!
//! Lambda(k,d,p)(lam) = lam^(2 delta), with an extra log(lam) exactly when
//!              (p,k) = (2, d-2)
//!
//! (alpha,h)(k,d,p)  l^alpha exponent and log-power for restriction to Sigma^k
//!              (k,d) = (1,2):  (max{2, p/2}, min{1/2, 2/p})
//!              k = d-1, d>=3:  (2p/(p+2), 0)                2 <= p < 2d/(d-1)
//!                              (2p(d-2)/(4d-p-4),
//!                               (2d-p)/(p(d-2)))            2d/(d-1) <= p < 4
//!                              (p/2, 2/p)                   4 <= p <= inf
//!              k <= d-2, d>=3: the whole range [1, p/2] is admissible; the
//!                              result carries a range flag instead of a pair
//!
//! gamma(p,beta) exponent for densities over Cλ^(beta-1)-separated sets
//!              = (beta+1)/2                   2 <= p <= 4
//!              = 1 - 2(1-beta)/p              4 <= p <= inf
//!
//! beta_threshold(k,d) = 2k/(2k+d-1), the smallest separation exponent for
//! which the separated-set lower bounds are claimed.
//! ```
//!
//! For k = d-1 the alpha/h branches agree at p = 4 in both components; at
//! p = 2d/(d-1) only alpha is continuous (2d/(2d-1) from both sides) while h
//! jumps from 0 to 1: the middle branch carries the endpoint log loss. The
//! (1,2) row exceeds p/2 for p < 4 (alpha = 2 there); both facts are part of
//! the table, not accidents, and the tests pin them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Extended rational exponent: a finite rational or +infinity.
///
/// Used both for the Lebesgue exponent p in [2, inf] and for sequence-space
/// exponents alpha in [1, inf] returned by the tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational64),
    Infinity,
}

impl Exponent {
    pub fn from_int(n: i64) -> Self {
        Exponent::Finite(Rational64::from_integer(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Exponent::Finite(Rational64::new(num, den))
    }

    /// Exact conversion of a finite f64 (dyadic rational). Fails for values
    /// whose exact numerator/denominator exceed i64, which cannot happen for
    /// the desk-scale exponents this crate deals in.
    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_infinite() && x > 0.0 {
            return Ok(Exponent::Infinity);
        }
        if !x.is_finite() {
            return Err(Error::domain(format!("exponent must be finite or +inf, got {x}")));
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1i64 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0xf_ffff_ffff_ffff;
        let (mut mant, mut exp) = if exp_bits == 0 {
            (frac as i64, -1074i64)
        } else {
            ((frac | (1 << 52)) as i64, exp_bits - 1075)
        };
        if mant == 0 {
            return Ok(Exponent::Finite(Rational64::zero()));
        }
        while mant % 2 == 0 && exp < 0 {
            mant /= 2;
            exp += 1;
        }
        let value = if exp >= 0 {
            if exp > 10 {
                return Err(Error::domain(format!("exponent {x} too large for exact rational")));
            }
            Rational64::from_integer(sign * (mant << exp))
        } else {
            let shift = -exp;
            if shift > 62 {
                return Err(Error::domain(format!(
                    "exponent {x} has no short dyadic form; pass a rational string instead"
                )));
            }
            Rational64::new(sign * mant, 1i64 << shift)
        };
        Ok(Exponent::Finite(value))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn as_rational(&self) -> Option<Rational64> {
        match self {
            Exponent::Finite(r) => Some(*r),
            Exponent::Infinity => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(r) => r.to_f64().unwrap_or(f64::NAN),
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// 1/p as an exact rational; 0 for p = infinity.
    pub fn recip(&self) -> Rational64 {
        match self {
            Exponent::Finite(r) => {
                debug_assert!(!r.is_zero());
                r.recip()
            }
            Exponent::Infinity => Rational64::zero(),
        }
    }

    /// Hoelder conjugate p' with 1/p + 1/p' = 1. Defined for p >= 1;
    /// 1 and infinity are swapped.
    pub fn conjugate(&self) -> Result<Exponent> {
        match self {
            Exponent::Infinity => Ok(Exponent::from_int(1)),
            Exponent::Finite(r) => {
                if *r < Rational64::one() {
                    return Err(Error::domain(format!("conjugate undefined for p = {r} < 1")));
                }
                if *r == Rational64::one() {
                    return Ok(Exponent::Infinity);
                }
                Ok(Exponent::Finite(*r / (*r - Rational64::one())))
            }
        }
    }

    /// p/2 (infinity stays infinity).
    pub fn half(&self) -> Exponent {
        match self {
            Exponent::Finite(r) => Exponent::Finite(*r / Rational64::from_integer(2)),
            Exponent::Infinity => Exponent::Infinity,
        }
    }

    fn cmp_rational(&self, other: &Rational64) -> Ordering {
        match self {
            Exponent::Finite(r) => r.cmp(other),
            Exponent::Infinity => Ordering::Greater,
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Exponent::Infinity, Exponent::Infinity) => Ordering::Equal,
            (Exponent::Infinity, _) => Ordering::Greater,
            (_, Exponent::Infinity) => Ordering::Less,
            (Exponent::Finite(a), Exponent::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Infinity => write!(f, "inf"),
            Exponent::Finite(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts "inf"/"infinity"/"oo", integers ("8"), fractions ("8/3") and
    /// decimal literals ("2.5", parsed exactly in base 10).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "oo" => return Ok(Exponent::Infinity),
            _ => {}
        }
        if let Some((num, den)) = s.split_once('/') {
            let n: i64 = num
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad exponent numerator in {s:?}")))?;
            let d: i64 = den
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("bad exponent denominator in {s:?}")))?;
            if d == 0 {
                return Err(Error::domain(format!("zero denominator in exponent {s:?}")));
            }
            return Ok(Exponent::Finite(Rational64::new(n, d)));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let int: i64 = if int_part.is_empty() {
                0
            } else {
                int_part
                    .parse()
                    .map_err(|_| Error::domain(format!("bad exponent literal {s:?}")))?
            };
            if frac_part.is_empty() || frac_part.len() > 12 || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::domain(format!("bad exponent literal {s:?}")));
            }
            let scale = 10i64.pow(frac_part.len() as u32);
            let frac: i64 = frac_part.parse().unwrap();
            let signum = if s.trim_start().starts_with('-') { -1 } else { 1 };
            return Ok(Exponent::Finite(
                Rational64::from_integer(int) + Rational64::new(signum * frac, scale),
            ));
        }
        let n: i64 = s
            .parse()
            .map_err(|_| Error::domain(format!("bad exponent literal {s:?}")))?;
        Ok(Exponent::from_int(n))
    }
}

/// A query against the restriction exponent tables: sphere dimension d,
/// submanifold dimension k, Lebesgue exponent p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExponentQuery {
    pub d: u32,
    pub k: u32,
    pub p: Exponent,
}

impl ExponentQuery {
    pub fn new(d: u32, k: u32, p: Exponent) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("sphere dimension d = {d} must be >= 2")));
        }
        if k < 1 || k > d - 1 {
            return Err(Error::domain(format!(
                "submanifold dimension k = {k} must satisfy 1 <= k <= d-1 = {}",
                d - 1
            )));
        }
        if p.cmp_rational(&Rational64::from_integer(2)) == Ordering::Less {
            return Err(Error::domain(format!("exponent p = {p} must be >= 2")));
        }
        Ok(ExponentQuery { d, k, p })
    }

    /// Eigenvalue parameter for degree l on S^d: lambda = sqrt(l(l+d-1)).
    pub fn lambda(&self, l: u32) -> f64 {
        let l = l as f64;
        let d = self.d as f64;
        (l * (l + d - 1.0)).sqrt()
    }
}

/// Which branch of a piecewise table produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    SoggeSubcritical,
    SoggeSupercritical,
    AlphaLowP,
    AlphaHighP,
    Codim1Low,
    Codim1Boundary,
    Codim1High,
    Codim2,
    DeepCodim,
    CurveOnS2,
    Codim1AlphaLow,
    Codim1AlphaMid,
    Codim1AlphaHigh,
    Codim2AlphaRange,
    GammaLowP,
    GammaHighP,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::SoggeSubcritical => "sogge-subcritical",
            Regime::SoggeSupercritical => "sogge-supercritical",
            Regime::AlphaLowP => "alpha-low-p",
            Regime::AlphaHighP => "alpha-high-p",
            Regime::Codim1Low => "codim1-low",
            Regime::Codim1Boundary => "boundary",
            Regime::Codim1High => "codim1-high",
            Regime::Codim2 => "codim2",
            Regime::DeepCodim => "deep-codim",
            Regime::CurveOnS2 => "curve-on-s2",
            Regime::Codim1AlphaLow => "codim1-alpha-low",
            Regime::Codim1AlphaMid => "codim1-alpha-mid",
            Regime::Codim1AlphaHigh => "codim1-alpha-high",
            Regime::Codim2AlphaRange => "codim2-alpha-range",
            Regime::GammaLowP => "gamma-low-p",
            Regime::GammaHighP => "gamma-high-p",
        };
        f.write_str(s)
    }
}

/// One table lookup: the value, the branch that produced it, and the closed
/// p-interval on which that branch is the defining formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentResult {
    pub value: Exponent,
    pub regime: Regime,
    pub p_lo: Exponent,
    pub p_hi: Exponent,
}

impl ExponentResult {
    fn finite(value: Rational64, regime: Regime, p_lo: Exponent, p_hi: Exponent) -> Self {
        ExponentResult { value: Exponent::Finite(value), regime, p_lo, p_hi }
    }

    /// The value as a rational; errors if the value is infinite.
    pub fn rational(&self) -> Result<Rational64> {
        self.value
            .as_rational()
            .ok_or_else(|| Error::numerical("expected a finite exponent value".to_string()))
    }
}

fn ratio(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn require_p_at_least_2(p: Exponent) -> Result<()> {
    if p.cmp_rational(&Rational64::from_integer(2)) == Ordering::Less {
        return Err(Error::domain(format!("exponent p = {p} must be >= 2")));
    }
    Ok(())
}

/// Single-eigenfunction L^p(S^d) exponent sigma(p, d).
pub fn sogge_sigma(p: Exponent, d: u32) -> Result<ExponentResult> {
    if d < 2 {
        return Err(Error::domain(format!("sphere dimension d = {d} must be >= 2")));
    }
    require_p_at_least_2(p)?;
    let u = p.recip();
    let dd = i64::from(d);
    let half = ratio(1, 2);
    // critical exponent 2(d+1)/(d-1) in terms of u: u_c = (d-1)/(2(d+1))
    let u_crit = ratio(dd - 1, 2 * (dd + 1));
    let p_crit = Exponent::Finite(ratio(2 * (dd + 1), dd - 1));
    if u >= u_crit {
        let value = ratio(dd - 1, 2) * (half - u);
        Ok(ExponentResult::finite(value, Regime::SoggeSubcritical, Exponent::from_int(2), p_crit))
    } else {
        let value = Rational64::from_integer(dd) * (half - u) - half;
        Ok(ExponentResult::finite(value, Regime::SoggeSupercritical, p_crit, Exponent::Infinity))
    }
}

/// l^alpha exponent alpha(d, p) for orthonormal systems on the full sphere.
/// Infinite exactly at p = infinity (where the high branch p(d-1)/(2d) blows up).
pub fn fs_alpha(d: u32, p: Exponent) -> Result<ExponentResult> {
    if d < 2 {
        return Err(Error::domain(format!("sphere dimension d = {d} must be >= 2")));
    }
    require_p_at_least_2(p)?;
    let dd = i64::from(d);
    let u = p.recip();
    let u_crit = ratio(dd - 1, 2 * (dd + 1));
    let p_crit = Exponent::Finite(ratio(2 * (dd + 1), dd - 1));
    if u >= u_crit {
        // 2p/(p+2) = 2/(1 + 2/p)
        let value = ratio(2, 1) / (Rational64::one() + ratio(2, 1) * u);
        return Ok(ExponentResult::finite(value, Regime::AlphaLowP, Exponent::from_int(2), p_crit));
    }
    let value = match p {
        Exponent::Infinity => Exponent::Infinity,
        Exponent::Finite(r) => Exponent::Finite(r * ratio(dd - 1, 2 * dd)),
    };
    Ok(ExponentResult { value, regime: Regime::AlphaHighP, p_lo: p_crit, p_hi: Exponent::Infinity })
}

/// Single-eigenfunction restriction exponent delta(k, d, p) for a k-dimensional
/// geodesic submanifold of S^d. The codimension-one boundary p = 2d/(d-1) is
/// labelled [`Regime::Codim1Boundary`]; both one-sided formulas attain the
/// common value (d-1)/(2d) there.
pub fn bgt_delta(q: &ExponentQuery) -> Result<ExponentResult> {
    let dd = i64::from(q.d);
    let kk = i64::from(q.k);
    let u = q.p.recip();
    let half_dm1 = ratio(dd - 1, 2);

    if q.k == q.d - 1 {
        // boundary at p = 2d/(d-1), i.e. u = (d-1)/(2d)
        let u_bdry = ratio(dd - 1, 2 * dd);
        let p_bdry = Exponent::Finite(ratio(2 * dd, dd - 1));
        return Ok(match u.cmp(&u_bdry) {
            Ordering::Greater => {
                let value = ratio(dd - 1, 4) - ratio(dd - 2, 2) * u;
                ExponentResult::finite(value, Regime::Codim1Low, Exponent::from_int(2), p_bdry)
            }
            Ordering::Equal => {
                let value = ratio(dd - 1, 2 * dd);
                ExponentResult::finite(value, Regime::Codim1Boundary, p_bdry, p_bdry)
            }
            Ordering::Less => {
                let value = half_dm1 - ratio(dd - 1, 1) * u;
                ExponentResult::finite(value, Regime::Codim1High, p_bdry, Exponent::Infinity)
            }
        });
    }

    let (regime, coeff) = if q.k == q.d - 2 {
        (Regime::Codim2, ratio(dd - 2, 1))
    } else {
        (Regime::DeepCodim, ratio(kk, 1))
    };
    let value = half_dm1 - coeff * u;
    Ok(ExponentResult::finite(value, regime, Exponent::from_int(2), Exponent::Infinity))
}

/// True exactly when the restriction bound carries a log(lambda) factor:
/// (p, k) = (2, d-2).
pub fn has_log_loss(q: &ExponentQuery) -> bool {
    q.k + 2 == q.d && q.p == Exponent::from_int(2)
}

/// The bound envelope Lambda(k,d,p) evaluated at lambda: lam^(2 delta), with
/// an extra ln(lam) factor exactly when (p,k) = (2, d-2). Callers should pass
/// lam >= 2 so the log factor is positive.
pub fn lambda_power(q: &ExponentQuery, lam: f64) -> Result<f64> {
    let delta = bgt_delta(q)?.rational()?;
    let exponent = 2.0 * delta.to_f64().unwrap();
    let base = lam.powf(exponent);
    Ok(if has_log_loss(q) { base * lam.ln() } else { base })
}

/// The (alpha, h) pair for restriction of orthonormal systems to Sigma^k.
///
/// For k <= d-2 (d >= 3) the theorem admits every alpha in [1, p/2] with no
/// log factor claimed sharp; `alpha_is_range` is set, `alpha` carries the
/// upper endpoint p/2 and `h` is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaH {
    pub alpha: Exponent,
    pub h: Rational64,
    pub regime: Regime,
    /// When set, `alpha` is the upper endpoint of the admissible range
    /// [1, p/2] rather than a single sharp exponent.
    pub alpha_is_range: bool,
}

pub fn theorem_alpha_h(q: &ExponentQuery) -> Result<AlphaH> {
    let dd = i64::from(q.d);
    let u = q.p.recip();

    if q.d == 2 {
        // curves in S^2: alpha = max{2, p/2}, h = min{1/2, 2/p}
        let alpha = if q.p <= Exponent::from_int(4) {
            Exponent::from_int(2)
        } else {
            q.p.half()
        };
        let h = std::cmp::min(ratio(1, 2), ratio(2, 1) * u);
        return Ok(AlphaH { alpha, h, regime: Regime::CurveOnS2, alpha_is_range: false });
    }

    if q.k == q.d - 1 {
        let u_bdry = ratio(dd - 1, 2 * dd); // p = 2d/(d-1)
        let u_four = ratio(1, 4); // p = 4
        if u > u_bdry {
            // 2 <= p < 2d/(d-1)
            let alpha = ratio(2, 1) / (Rational64::one() + ratio(2, 1) * u);
            return Ok(AlphaH {
                alpha: Exponent::Finite(alpha),
                h: Rational64::zero(),
                regime: Regime::Codim1AlphaLow,
                alpha_is_range: false,
            });
        }
        if u > u_four {
            // 2d/(d-1) <= p < 4: alpha = 2(d-2)/((4d-4)u - 1), h = (2du - 1)/(d-2)
            let alpha = ratio(2 * (dd - 2), 1) / (ratio(4 * dd - 4, 1) * u - Rational64::one());
            let h = (ratio(2 * dd, 1) * u - Rational64::one()) / ratio(dd - 2, 1);
            return Ok(AlphaH {
                alpha: Exponent::Finite(alpha),
                h,
                regime: Regime::Codim1AlphaMid,
                alpha_is_range: false,
            });
        }
        // 4 <= p <= inf
        return Ok(AlphaH {
            alpha: q.p.half(),
            h: ratio(2, 1) * u,
            regime: Regime::Codim1AlphaHigh,
            alpha_is_range: false,
        });
    }

    // k <= d-2, d >= 3: admissible range [1, p/2]
    Ok(AlphaH {
        alpha: q.p.half(),
        h: Rational64::zero(),
        regime: Regime::Codim2AlphaRange,
        alpha_is_range: true,
    })
}

/// Scaling exponent gamma(p, beta) for separated-set densities.
/// beta is the separation exponent in [0, 1].
pub fn corollary_gamma(p: Exponent, beta: Rational64) -> Result<ExponentResult> {
    require_p_at_least_2(p)?;
    if beta.is_negative() || beta > Rational64::one() {
        return Err(Error::domain(format!("separation exponent beta = {beta} must lie in [0, 1]")));
    }
    let u = p.recip();
    let four = Exponent::from_int(4);
    if p <= four {
        let value = (beta + Rational64::one()) / ratio(2, 1);
        Ok(ExponentResult::finite(value, Regime::GammaLowP, Exponent::from_int(2), four))
    } else {
        let value = Rational64::one() - ratio(2, 1) * (Rational64::one() - beta) * u;
        Ok(ExponentResult::finite(value, Regime::GammaHighP, four, Exponent::Infinity))
    }
}

/// Smallest separation exponent beta for which the separated-set lower bounds
/// are claimed: beta_threshold(k, d) = 2k/(2k + d - 1).
pub fn beta_threshold(k: u32, d: u32) -> Rational64 {
    let kk = i64::from(k);
    let dd = i64::from(d);
    ratio(2 * kk, 2 * kk + dd - 1)
}

/// Lower-bound slope for separated zonal families with t identically one:
/// (d-1) - 2k/p + (2/p) * k * (1 - beta), as an exact rational in 1/p.
pub fn zonal_lower_slope(q: &ExponentQuery, beta: Rational64) -> Rational64 {
    let dd = i64::from(q.d);
    let kk = i64::from(q.k);
    let u = q.p.recip();
    ratio(dd - 1, 1) - ratio(2 * kk, 1) * u + ratio(2 * kk, 1) * u * (Rational64::one() - beta)
}
