//! Cross-validates the chord-constructed formal group law against honest
//! Weierstrass point addition carried out in exact rational arithmetic.
//!
//! The parameter t embeds into curve coordinates by x = t/w(t), y = -1/w(t).
//! Adding the embedded points with the textbook chord formulas and reading
//! the parameter of the sum must agree 3-adically with evaluating the law's
//! series at (t1, t2). The two routes share only the w-expansion, which is
//! itself checked against the curve equation below.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use pfg_core::group::elliptic_w_expansion;
use pfg_core::{Ctx, EllipticCoefficients, FormalGroupLaw, PrimeConfig, PrimeContext};

fn ctx() -> Ctx {
    PrimeContext::new(PrimeConfig::new(3, 1, 14).unwrap()).unwrap()
}

/// 3-adic valuation of a nonzero rational.
fn v3(x: &BigRational) -> i64 {
    assert!(!x.is_zero());
    let three = BigInt::from(3);
    let count = |mut n: BigInt| {
        let mut v = 0i64;
        n = n.abs();
        while (&n % &three).is_zero() {
            n /= &three;
            v += 1;
        }
        v
    };
    count(x.numer().clone()) - count(x.denom().clone())
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Evaluates a univariate series with canonical integer coefficients at a
/// rational point.
fn eval_series_1(series: &pfg_core::MultiSeries, t: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (m, c) in series.terms() {
        let k = m.exps()[0] as usize;
        let coeff = BigRational::from_integer(BigInt::from_biguint(
            num_bigint::Sign::Plus,
            c.rep()[0].clone(),
        ));
        acc += coeff * t.pow(k as i32);
    }
    acc
}

fn eval_series_2(series: &pfg_core::MultiSeries, t1: &BigRational, t2: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (m, c) in series.terms() {
        let coeff = BigRational::from_integer(BigInt::from_biguint(
            num_bigint::Sign::Plus,
            c.rep()[0].clone(),
        ));
        acc += coeff * t1.pow(m.exps()[0] as i32) * t2.pow(m.exps()[1] as i32);
    }
    acc
}

#[test]
fn chord_law_matches_weierstrass_point_addition() {
    let c = ctx();
    let trunc = 12;
    // a general curve with every a_i in play; discriminant -608 is a unit
    let coeffs = EllipticCoefficients::from_integers(&c, [1, 1, 1, 0, 1]);
    let (a1, a2, a3, a4, a6) = (big(1), big(1), big(1), big(0), big(1));

    let group = FormalGroupLaw::elliptic(&c, trunc, &coeffs).unwrap();
    let w = elliptic_w_expansion(&c, trunc + 3, &coeffs).unwrap();

    let t1 = big(3);
    let t2 = big(9);
    let w1 = eval_series_1(&w, &t1);
    let w2 = eval_series_1(&w, &t2);

    // the expansion satisfies the curve equation to the tail bound:
    // w = t^3 + a1 t w + a2 t^2 w + a3 w^2 + a4 t w^2 + a6 w^3
    for (t, wv) in [(&t1, &w1), (&t2, &w2)] {
        let rhs = t.pow(3)
            + &a1 * t * wv
            + &a2 * t.pow(2) * wv
            + &a3 * wv.pow(2)
            + &a4 * t * wv.pow(2)
            + &a6 * wv.pow(3);
        let gap = wv - rhs;
        assert!(gap.is_zero() || v3(&gap) >= 14, "curve equation residual v = {:?}", v3(&gap));
    }

    // embed and add on the curve: x = t/w, y = -1/w
    let x1 = &t1 / &w1;
    let y1 = -w1.recip();
    let x2 = &t2 / &w2;
    let y2 = -w2.recip();
    let lambda = (&y2 - &y1) / (&x2 - &x1);
    let nu = &y1 - &lambda * &x1;
    let x3 = lambda.pow(2) + &a1 * &lambda - &a2 - &x1 - &x2;
    let y3 = -(&lambda * &x3 + &nu) - &a1 * &x3 - &a3;
    let t_sum = -&x3 / &y3;

    // the law's series at the same pair
    let t_series = eval_series_2(&group.law().components()[0], &t1, &t2);

    let gap = &t_sum - &t_series;
    assert!(
        !gap.is_zero() && v3(&gap) >= 8 || gap.is_zero(),
        "point addition and the series disagree: v3(gap) = {}",
        v3(&gap)
    );
    // both parameters sit at valuation 1, so eight extra digits of
    // agreement is far beyond coincidence
    assert_eq!(v3(&t_sum), 1);
    assert_eq!(v3(&t_series), 1);
}
