//! Randomized properties of the closed-form exponent tables: exact branch
//! agreement at case boundaries, range bounds, monotonicity, and conjugation
//! identities, all in exact rational arithmetic.

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use eigenrest::exponents::{
    bgt_delta, corollary_gamma, fs_alpha, has_log_loss, sogge_sigma, theorem_alpha_h, Exponent,
    ExponentQuery,
};

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

/// Strategy for finite p >= 2 with small denominators (p = (2b + a)/b).
fn finite_p() -> impl Strategy<Value = Exponent> {
    (0i64..=64, 1i64..=12).prop_map(|(a, b)| Exponent::from_ratio(2 * b + a, b))
}

fn any_p() -> impl Strategy<Value = Exponent> {
    prop_oneof![8 => finite_p(), 1 => Just(Exponent::Infinity)]
}

fn dim_pair() -> impl Strategy<Value = (u32, u32)> {
    (2u32..=6).prop_flat_map(|d| (Just(d), 1u32..d))
}

proptest! {
    /// alpha stays in [1, max(2, p/2)] and h in [0, 1]; h can exceed 1/2 only
    /// on the codimension-one mid branch (closed-open interval [2d/(d-1), 4)).
    #[test]
    fn alpha_h_ranges((d, k) in dim_pair(), p in any_p()) {
        let q = ExponentQuery::new(d, k, p).unwrap();
        let ah = theorem_alpha_h(&q).unwrap();

        let one = Exponent::from_int(1);
        prop_assert!(ah.alpha >= one);
        let cap = if p.half() >= Exponent::from_int(2) { p.half() } else { Exponent::from_int(2) };
        prop_assert!(ah.alpha <= cap, "alpha {} exceeds max(2, p/2) = {} at d={d} k={k} p={p}", ah.alpha, cap);

        prop_assert!(!ah.h.is_negative());
        prop_assert!(ah.h <= Rational64::one());
        if ah.h > rat(1, 2) {
            // only the codim-1 mid branch may exceed 1/2
            let dd = i64::from(d);
            prop_assert_eq!(k, d - 1);
            let u = p.recip();
            prop_assert!(u > rat(1, 4) && u <= rat(dd - 1, 2 * dd),
                "h = {} > 1/2 outside the mid branch at d={d} k={k} p={p}", ah.h);
        }
    }

    /// For p >= 2d/(d-1) the restriction exponent is nonincreasing in the
    /// submanifold dimension k (deeper codimension restricts less).
    #[test]
    fn delta_nonincreasing_in_k(d in 3u32..=6, a in 0i64..=40, b in 1i64..=10) {
        let dd = i64::from(d);
        // p >= 2d/(d-1): p = 2d/(d-1) + a/b
        let p = Exponent::Finite(rat(2 * dd, dd - 1) + rat(a, b));
        let mut prev: Option<Rational64> = None;
        for k in 1..d {
            let v = bgt_delta(&ExponentQuery::new(d, k, p).unwrap()).unwrap().rational().unwrap();
            if let Some(pv) = prev {
                prop_assert!(v <= pv, "delta increased from k={} to k={k} at d={d} p={p}", k - 1);
            }
            prev = Some(v);
        }
    }

    /// sigma, delta, and alpha are monotone nondecreasing in p (exact).
    #[test]
    fn tables_monotone_in_p((d, k) in dim_pair(), a in 0i64..=40, b in 1i64..=10, step in 1i64..=8) {
        let p1 = rat(2 * b + a, b);
        let p2 = p1 + rat(step, 4);
        let (e1, e2) = (Exponent::Finite(p1), Exponent::Finite(p2));

        let s1 = sogge_sigma(e1, d).unwrap().rational().unwrap();
        let s2 = sogge_sigma(e2, d).unwrap().rational().unwrap();
        prop_assert!(s1 <= s2);

        let d1 = bgt_delta(&ExponentQuery::new(d, k, e1).unwrap()).unwrap().rational().unwrap();
        let d2 = bgt_delta(&ExponentQuery::new(d, k, e2).unwrap()).unwrap().rational().unwrap();
        prop_assert!(d1 <= d2);

        let a1 = fs_alpha(d, e1).unwrap().value;
        let a2 = fs_alpha(d, e2).unwrap().value;
        prop_assert!(a1 <= a2);
    }

    /// Conjugation is an exact involution with 1/p + 1/p' = 1.
    #[test]
    fn conjugate_involution(a in 1i64..=64, b in 1i64..=12) {
        // p > 1: p = 1 + a/b
        let p = Exponent::Finite(rat(b + a, b));
        let pc = p.conjugate().unwrap();
        prop_assert_eq!(p.recip() + pc.recip(), Rational64::one());
        prop_assert_eq!(pc.conjugate().unwrap(), p);
    }

    /// The log factor in the envelope occurs exactly at (p, k) = (2, d-2).
    #[test]
    fn log_loss_is_isolated((d, k) in dim_pair(), p in any_p()) {
        let q = ExponentQuery::new(d, k, p).unwrap();
        let expected = k + 2 == d && p == Exponent::from_int(2);
        prop_assert_eq!(has_log_loss(&q), expected);
    }

    /// gamma is within [1/2, 1], nondecreasing in beta, and equals 1 at beta = 1.
    #[test]
    fn gamma_range_and_monotonicity(pa in 0i64..=40, pb in 1i64..=10, bn in 0i64..=16) {
        let p = Exponent::Finite(rat(2 * pb + pa, pb));
        let beta1 = rat(bn, 16);
        let beta2 = rat(bn.min(15) + 1, 16);
        let g1 = corollary_gamma(p, beta1).unwrap().rational().unwrap();
        let g2 = corollary_gamma(p, beta2).unwrap().rational().unwrap();
        prop_assert!(g1 >= rat(1, 2) && g1 <= Rational64::one());
        prop_assert!(g1 <= g2);
        let g_top = corollary_gamma(p, Rational64::one()).unwrap().rational().unwrap();
        prop_assert_eq!(g_top, Rational64::one());
    }
}

/// Exact branch agreement at every case boundary of every table, for all
/// sphere dimensions up to 8, with both branch formulas written out here
/// independently of the library.
#[test]
fn branch_formulas_agree_exactly_at_boundaries() {
    for d in 2..=8i64 {
        let du = d as u32;
        let half = rat(1, 2);

        // sigma: boundary p_c = 2(d+1)/(d-1)
        let p_crit = rat(2 * (d + 1), d - 1);
        let u = p_crit.recip();
        let low = rat(d - 1, 2) * (half - u);
        let high = Rational64::from_integer(d) * (half - u) - half;
        assert_eq!(low, high, "sigma branches disagree at d = {d}");
        let impl_val = sogge_sigma(Exponent::Finite(p_crit), du).unwrap().rational().unwrap();
        assert_eq!(impl_val, low);

        // ell^alpha exponent: same boundary
        let a_low = rat(2, 1) * p_crit / (p_crit + rat(2, 1));
        let a_high = p_crit * rat(d - 1, 2 * d);
        assert_eq!(a_low, a_high, "alpha branches disagree at d = {d}");
        let impl_val = fs_alpha(du, Exponent::Finite(p_crit)).unwrap().rational().unwrap();
        assert_eq!(impl_val, a_low);

        // delta, k = d-1: boundary 2d/(d-1)
        if d >= 2 {
            let p_b = rat(2 * d, d - 1);
            let u_b = p_b.recip();
            let low = rat(d - 1, 4) - rat(d - 2, 2) * u_b;
            let high = rat(d - 1, 2) - rat(d - 1, 1) * u_b;
            let at = rat(d - 1, 2 * d);
            assert_eq!(low, at, "delta low branch misses the boundary value at d = {d}");
            assert_eq!(high, at, "delta high branch misses the boundary value at d = {d}");
            let q = ExponentQuery::new(du, du - 1, Exponent::Finite(p_b)).unwrap();
            assert_eq!(bgt_delta(&q).unwrap().rational().unwrap(), at);
        }

        // theorem pair, k = d-1, d >= 3: alpha continuous at 2d/(d-1) and at 4
        if d >= 3 {
            let u1 = rat(d - 1, 2 * d);
            let a_low = rat(2, 1) / (Rational64::one() + rat(2, 1) * u1);
            let a_mid = rat(2 * (d - 2), 1) / (rat(4 * d - 4, 1) * u1 - Rational64::one());
            assert_eq!(a_low, a_mid, "theorem alpha disagrees at p = 2d/(d-1), d = {d}");

            let u2 = rat(1, 4);
            let a_mid4 = rat(2 * (d - 2), 1) / (rat(4 * d - 4, 1) * u2 - Rational64::one());
            assert_eq!(a_mid4, rat(2, 1), "theorem alpha disagrees at p = 4, d = {d}");
            let h_mid4 = (rat(2 * d, 1) * u2 - Rational64::one()) / rat(d - 2, 1);
            assert_eq!(h_mid4, rat(1, 2), "theorem h disagrees at p = 4, d = {d}");

            let q4 = ExponentQuery::new(du, du - 1, Exponent::from_int(4)).unwrap();
            let ah = theorem_alpha_h(&q4).unwrap();
            assert_eq!(ah.alpha, Exponent::Finite(rat(2, 1)));
            assert_eq!(ah.h, rat(1, 2));
        }

        // gamma: boundary p = 4, any beta; formulas (beta+1)/2 and 1 - 2(1-beta)/p
        for bn in 0..=4i64 {
            let beta = rat(bn, 4);
            let g_low = (beta + Rational64::one()) / rat(2, 1);
            let g_high = Rational64::one() - rat(2, 1) * (Rational64::one() - beta) / rat(4, 1);
            assert_eq!(g_low, g_high, "gamma branches disagree at p = 4, beta = {beta}");
            let impl_val =
                corollary_gamma(Exponent::from_int(4), beta).unwrap().rational().unwrap();
            assert_eq!(impl_val, g_low);
        }
    }
}

/// Small perturbations around each boundary stay within an exact Lipschitz
/// band, so no branch assignment off-by-one can hide at the seams.
#[test]
fn boundary_neighborhoods_are_lipschitz() {
    let lip = rat(1, 1000); // |delta v| <= 12 * |delta u| with |delta u| <= 1e-4ish
    for d in 2..=8i64 {
        let du = d as u32;
        for k in 1..du {
            let boundaries: Vec<Rational64> = if k == du - 1 {
                vec![rat(2 * d, d - 1), rat(4, 1)]
            } else {
                vec![rat(2 * (d + 1), d - 1)]
            };
            for p_b in boundaries {
                let eps = p_b / rat(10_000, 1);
                let probe = |p: Rational64| {
                    bgt_delta(&ExponentQuery::new(du, k, Exponent::Finite(p)).unwrap())
                        .unwrap()
                        .rational()
                        .unwrap()
                };
                let at = probe(p_b);
                let below = probe(p_b - eps);
                let above = probe(p_b + eps);
                assert!((at - below).abs() < lip, "jump below boundary p = {p_b} at d={d} k={k}");
                assert!((above - at).abs() < lip, "jump above boundary p = {p_b} at d={d} k={k}");
            }
        }
    }
}
