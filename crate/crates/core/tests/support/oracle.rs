//! Exact-arithmetic oracles for the special-function tests.
//!
//! The library evaluates normalized associated Legendre functions by the
//! ascending three-term recurrence in floating point. The oracle here takes a
//! completely different route: it computes the m-th derivative of the
//! Legendre polynomial through the Gegenbauer recurrence in exact
//! `BigRational` arithmetic (the argument x is chosen dyadic, so every
//! intermediate is an exact rational), assembles the squared normalized value
//!
//! ```text
//! q_l^m(x)^2 = (2l+1)/(4 pi) * (l-m)!/(l+m)! * (1-x^2)^m * [ (2m-1)!! * C_{l-m}^{m+1/2}(x) ]^2
//! ```
//!
//! as a single exact rational, and only leaves exact arithmetic for the final
//! square root. The oracle value is therefore accurate to a couple of ulps.
//! The library uses no Condon-Shortley phase (its sectoral seed is positive),
//! so the oracle sign is the sign of the derivative factor.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// The dyadic rational num / 2^exp (exactly representable in f64 for small exp).
pub fn dyadic(num: i64, exp: u32) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(2u64).pow(exp))
}

pub fn big_ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Convert an exact rational to the nearest f64 without overflowing on huge
/// numerators/denominators: compute the integer quotient scaled to carry
/// ~128 significant bits, then undo the scaling in two factor-of-2 steps.
pub fn big_ratio_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let n = r.numer();
    let d = r.denom();
    let shift: i64 = 128 - (n.bits() as i64 - d.bits() as i64);
    let scaled: BigInt = if shift >= 0 {
        (n << shift as u64) / d
    } else {
        n / (d << (-shift) as u64)
    };
    let q = scaled.to_f64().expect("128-bit scaled quotient is finite");
    let half = (shift / 2) as i32;
    q * 2f64.powi(-half) * 2f64.powi(-(shift as i32 - half))
}

/// Square root of a nonnegative rational as f64. The rational is rescaled by
/// an even power of two before conversion so that values far outside the f64
/// range (e.g. squares of deep evanescent-tail Legendre values) neither
/// underflow nor overflow before the root is taken.
pub fn sqrt_big_ratio(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    assert!(r.is_positive(), "sqrt_big_ratio needs a nonnegative argument");
    let e = r.numer().bits() as i64 - r.denom().bits() as i64; // ~ log2(r)
    let h = e.div_euclid(2);
    let rest = if h >= 0 {
        BigRational::new(r.numer().clone(), r.denom() << (2 * h) as u64)
    } else {
        BigRational::new(r.numer() << (-2 * h) as u64, r.denom().clone())
    };
    2f64.powi(h as i32) * big_ratio_to_f64(&rest).sqrt()
}

/// Gegenbauer polynomial C_l^a(t) in exact rational arithmetic via
/// l C_l = 2 t (l+a-1) C_{l-1} - (l+2a-2) C_{l-2}.
pub fn gegenbauer_big(l: u32, a: &BigRational, t: &BigRational) -> BigRational {
    let one = BigRational::from(BigInt::from(1));
    if l == 0 {
        return one;
    }
    let two = BigRational::from(BigInt::from(2));
    let mut prev = one.clone();
    let mut cur = &two * a * t;
    for j in 2..=l {
        let jf = BigRational::from(BigInt::from(j));
        let next = (&two * t * (&jf + a - &one) * &cur - (&jf + &two * a - &two) * &prev) / &jf;
        prev = cur;
        cur = next;
    }
    cur
}

/// Legendre polynomial P_l(t) = C_l^{1/2}(t), exact.
pub fn legendre_big(l: u32, t: &BigRational) -> BigRational {
    gegenbauer_big(l, &big_ratio(1, 2), t)
}

/// [C_{l-1}^a(t), C_l^a(t), C_{l+1}^a(t)] from a single recurrence pass
/// (for l = 0 the first entry is 0, the conventional below-range value).
pub fn gegenbauer_big_triple(l: u32, a: &BigRational, t: &BigRational) -> [BigRational; 3] {
    let zero = BigRational::from(BigInt::from(0));
    let one = BigRational::from(BigInt::from(1));
    let two = BigRational::from(BigInt::from(2));
    // window holds [C_{j-1}, C_j] after step j, seeded with [C_{-1}=0, C_0=1].
    let mut below = zero;
    let mut at = one.clone();
    let mut second_last = BigRational::from(BigInt::from(0));
    for j in 1..=(l + 1) {
        let jf = BigRational::from(BigInt::from(j));
        let next = (&two * t * (&jf + a - &one) * &at - (&jf + &two * a - &two) * &below) / &jf;
        second_last = below;
        below = at;
        at = next;
    }
    // after the loop: second_last = C_{l-1}, below = C_l, at = C_{l+1}
    [second_last, below, at]
}

fn double_factorial_odd(m: u32) -> BigInt {
    // (2m-1)!! = 1 * 3 * ... * (2m-1), with the empty product for m = 0.
    let mut acc = BigInt::from(1);
    for j in 1..=m {
        acc *= BigInt::from(2 * j - 1);
    }
    acc
}

/// Exact values of the fully normalized associated Legendre oracle at the
/// three consecutive degrees [l-1, l, l+1] (same m, same dyadic x) from one
/// recurrence pass. The below-range entry at l = m is 0. Exact up to the
/// final square root and one division by sqrt(4 pi).
pub fn assoc_legendre_norm_oracle_triple(l: u32, m: u32, x: &BigRational) -> [f64; 3] {
    assert!(m <= l, "oracle needs m <= l");
    // d^m/dx^m P_{l'}(x) = (2m-1)!! * C_{l'-m}^{m+1/2}(x)
    let a = big_ratio(i64::from(2 * m + 1), 2);
    let c_triple = gegenbauer_big_triple(l - m, &a, x);
    let dfac = BigRational::from(double_factorial_odd(m));
    let one = BigRational::from(BigInt::from(1));
    let sin2 = (&one - x * x).pow(m as i32);
    let sqrt_4pi = (4.0 * std::f64::consts::PI).sqrt();

    let mut out = [0.0f64; 3];
    for (idx, c_val) in c_triple.iter().enumerate() {
        if idx == 0 && l == m {
            continue; // l' = m - 1 is below range; keep the conventional 0
        }
        let lp = l + idx as u32 - 1;
        let d_val = &dfac * c_val;
        if d_val.is_zero() {
            continue;
        }
        let sign = if d_val.is_negative() { -1.0 } else { 1.0 };
        // (l'-m)!/(l'+m)! = 1 / prod_{j=l'-m+1}^{l'+m} j
        let mut denom = BigInt::from(1);
        for j in (lp - m + 1)..=(lp + m) {
            denom *= BigInt::from(j);
        }
        let q_squared_times_4pi = BigRational::from(BigInt::from(2 * lp + 1))
            * BigRational::new(BigInt::from(1), denom)
            * &sin2
            * &d_val
            * &d_val;
        out[idx] = sign * sqrt_big_ratio(&q_squared_times_4pi) / sqrt_4pi;
    }
    out
}

/// Single normalized associated Legendre oracle value.
pub fn assoc_legendre_norm_oracle(l: u32, m: u32, x: &BigRational) -> f64 {
    assoc_legendre_norm_oracle_triple(l, m, x)[1]
}

/// Dimension of the degree-l eigenspace on S^d, computed independently as a
/// difference of binomials N(d, l) = binom(l+d, d) - binom(l+d-2, d).
pub fn harmonic_dim_oracle(d: u32, l: u32) -> BigInt {
    if l == 0 {
        return BigInt::from(1);
    }
    binom_big(l + d, d) - binom_big(l + d - 2, d)
}

pub fn binom_big(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for j in 0..k {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// A simple deterministic xorshift for reproducible oracle draws without
/// pulling rand into every test file.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in 0..n.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// An odd dyadic numerator in (-2^exp, 2^exp), never hitting the endpoints.
    pub fn dyadic_in_unit(&mut self, exp: u32) -> BigRational {
        let span = 1i64 << exp;
        let mut num = (self.next_u64() % (2 * span as u64 - 1)) as i64 - (span - 1);
        if num % 2 == 0 {
            num += 1; // odd numerators stay clear of 0 and +/-1
        }
        dyadic(num, exp)
    }
}
