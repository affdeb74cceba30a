//! Exact rational arithmetic on `i128` numerator/denominator pairs.
//!
//! Values are kept in canonical form (denominator positive, gcd of the two
//! parts equal to one) so that structural equality is value equality.
//! Arithmetic never wraps: every operation that could overflow has a
//! `checked_*` form returning an error, and the operator impls panic rather
//! than produce a wrong value.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::Error;

/// An exact rational number. Construct via [`Rational::new`] or
/// [`Rational::integer`]; the canonical-form invariant always holds.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Builds `num/den` in canonical form. A zero denominator is an error.
    pub fn new(num: i128, den: i128) -> Result<Rational, Error> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        let g = gcd_u128(num.unsigned_abs(), den.unsigned_abs());
        debug_assert!(g > 0);
        // g divides both parts, so these divisions are exact; only the sign
        // flip on i128::MIN can overflow.
        let mut num = num / (g as i128);
        let mut den = den / (g as i128);
        if den < 0 {
            num = num.checked_neg().ok_or(Error::Overflow)?;
            den = den.checked_neg().ok_or(Error::Overflow)?;
        }
        Ok(Rational { num, den })
    }

    pub fn integer(n: i128) -> Rational {
        Rational { num: n, den: 1 }
    }

    pub fn numerator(&self) -> i128 {
        self.num
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn is_positive(&self) -> bool {
        self.num > 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn abs(&self) -> Rational {
        Rational {
            num: self.num.checked_abs().expect("rational abs overflow"),
            den: self.den,
        }
    }

    pub fn checked_add(&self, other: &Rational) -> Result<Rational, Error> {
        let g = gcd_u128(self.den.unsigned_abs(), other.den.unsigned_abs()) as i128;
        let lhs = self
            .num
            .checked_mul(other.den / g)
            .ok_or(Error::Overflow)?;
        let rhs = other
            .num
            .checked_mul(self.den / g)
            .ok_or(Error::Overflow)?;
        let num = lhs.checked_add(rhs).ok_or(Error::Overflow)?;
        let den = self
            .den
            .checked_mul(other.den / g)
            .ok_or(Error::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_sub(&self, other: &Rational) -> Result<Rational, Error> {
        self.checked_add(&Rational {
            num: other.num.checked_neg().ok_or(Error::Overflow)?,
            den: other.den,
        })
    }

    pub fn checked_mul(&self, other: &Rational) -> Result<Rational, Error> {
        // Cross-reduce before multiplying to keep intermediates small.
        let g1 = gcd_u128(self.num.unsigned_abs(), other.den.unsigned_abs()) as i128;
        let g2 = gcd_u128(other.num.unsigned_abs(), self.den.unsigned_abs()) as i128;
        let num = (self.num / g1)
            .checked_mul(other.num / g2)
            .ok_or(Error::Overflow)?;
        let den = (self.den / g2)
            .checked_mul(other.den / g1)
            .ok_or(Error::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_div(&self, other: &Rational) -> Result<Rational, Error> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.checked_mul(&Rational {
            num: other.den,
            den: other.num,
        })
    }

    pub fn checked_recip(&self) -> Result<Rational, Error> {
        Rational::ONE.checked_div(self)
    }

    /// Least common multiple of two non-negative rationals:
    /// `lcm(a/b, c/d) = lcm(a, c) / gcd(b, d)` on canonical forms.
    pub fn checked_lcm(&self, other: &Rational) -> Result<Rational, Error> {
        if self.is_negative() || other.is_negative() {
            return Err(Error::Overflow);
        }
        let gn = gcd_u128(self.num.unsigned_abs(), other.num.unsigned_abs());
        let num = if gn == 0 {
            0
        } else {
            (self.num / gn as i128)
                .checked_mul(other.num)
                .ok_or(Error::Overflow)?
        };
        let den = gcd_u128(self.den.unsigned_abs(), other.den.unsigned_abs()) as i128;
        Rational::new(num, den)
    }

    /// Exact integer value, if this rational is an integer.
    pub fn to_integer(&self) -> Option<i128> {
        (self.den == 1).then_some(self.num)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Nearest rational with the given denominator to an `f64`, used where a
    /// float has to be brought back into exact arithmetic.
    pub fn from_f64_snapped(value: f64, den: i128) -> Result<Rational, Error> {
        if !value.is_finite() || den <= 0 {
            return Err(Error::Overflow);
        }
        let scaled = value * den as f64;
        if scaled.abs() >= i128::MAX as f64 / 2.0 {
            return Err(Error::Overflow);
        }
        Rational::new(scaled.round() as i128, den)
    }

    /// Decimal rendering without rounding, or `None` when the expansion does
    /// not terminate within `max_dp` digits.
    pub fn to_decimal_string(&self, max_dp: u32) -> Option<String> {
        let mut d = self.den;
        let mut twos = 0u32;
        let mut fives = 0u32;
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        if d != 1 {
            return None;
        }
        let dp = twos.max(fives);
        if dp > max_dp {
            return None;
        }
        let scale = 10i128.checked_pow(dp)?;
        let digits = self.num.unsigned_abs().checked_mul(scale as u128)? / self.den as u128;
        let int_part = digits / scale as u128;
        let frac_part = digits % scale as u128;
        let sign = if self.num < 0 { "-" } else { "" };
        if dp == 0 {
            return Some(format!("{sign}{int_part}"));
        }
        let frac = format!("{:0width$}", frac_part, width = dp as usize);
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            Some(format!("{sign}{int_part}"))
        } else {
            Some(format!("{sign}{int_part}.{frac}"))
        }
    }
}

fn cmp_positive(mut an: u128, mut ad: u128, mut bn: u128, mut bd: u128) -> Ordering {
    // Continued-fraction comparison: compare integer parts, then recurse on
    // the reciprocals of the fractional parts. Never overflows.
    loop {
        let (qa, ra) = (an / ad, an % ad);
        let (qb, rb) = (bn / bd, bn % bd);
        match qa.cmp(&qb) {
            Ordering::Equal => {}
            other => return other,
        }
        match (ra == 0, rb == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            (false, false) => {
                let (nan, nad) = (bd, rb);
                let (nbn, nbd) = (ad, ra);
                an = nan;
                ad = nad;
                bn = nbn;
                bd = nbd;
            }
        }
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        match (self.num.signum(), other.num.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            (1, 1) => cmp_positive(
                self.num.unsigned_abs(),
                self.den.unsigned_abs(),
                other.num.unsigned_abs(),
                other.den.unsigned_abs(),
            ),
            _ => cmp_positive(
                other.num.unsigned_abs(),
                other.den.unsigned_abs(),
                self.num.unsigned_abs(),
                self.den.unsigned_abs(),
            ),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        self.checked_add(&rhs).expect("rational add overflow")
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self.checked_sub(&rhs).expect("rational sub overflow")
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        self.checked_mul(&rhs).expect("rational mul overflow")
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self.checked_div(&rhs).expect("rational div by zero or overflow")
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: self.num.checked_neg().expect("rational neg overflow"),
            den: self.den,
        }
    }
}

impl fmt::Display for Rational {
    /// Decimal when the expansion terminates within nine digits, otherwise
    /// the exact `num/den` form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_decimal_string(9) {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.num, self.den),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts integers (`"12"`), terminating decimals (`"0.25"`) and
    /// integer fractions (`"1/15"`), each with an optional leading sign.
    fn from_str(s: &str) -> Result<Rational, Error> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num = parse_decimal(n)?;
            let den = parse_decimal(d)?;
            if !num.is_integer() || !den.is_integer() {
                return Err(Error::InvalidNumber(s.to_string()));
            }
            return num.checked_div(&den).map_err(|e| match e {
                Error::DivisionByZero => Error::ZeroDenominator,
                other => other,
            });
        }
        parse_decimal(s)
    }
}

fn parse_decimal(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidNumber(s.to_string());
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1i128, rest),
        None => (1i128, s.strip_prefix('+').unwrap_or(s)),
    };
    if digits.is_empty() {
        return Err(bad());
    }
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let mut num: i128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        let d = c.to_digit(10).ok_or_else(bad)? as i128;
        num = num
            .checked_mul(10)
            .and_then(|n| n.checked_add(d))
            .ok_or(Error::Overflow)?;
    }
    let den = 10i128
        .checked_pow(frac_part.len() as u32)
        .ok_or(Error::Overflow)?;
    Rational::new(sign * num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(num: i128, den: i128) -> Rational {
        Rational::new(num, den).unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(r(4, 200), r(1, 50));
        assert_eq!(r(-3, -6), r(1, 2));
        assert_eq!(r(3, -6), r(-1, 2));
        assert_eq!(r(0, -7), Rational::ZERO);
        assert_eq!(r(7, 7).numerator(), 1);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(Rational::new(1, 0), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(r(1, 20) + r(1, 15), r(7, 60));
        assert_eq!(r(1, 5) - r(1, 10), r(1, 10));
        assert_eq!(r(2, 3) * r(3, 4), r(1, 2));
        assert_eq!(r(1, 2) / r(1, 6), r(3, 1));
    }

    #[test]
    fn division_by_zero_rejected() {
        assert!(matches!(
            r(1, 2).checked_div(&Rational::ZERO),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn overflow_is_an_error_not_wraparound() {
        let big = Rational::integer(i128::MAX);
        assert!(matches!(big.checked_add(&Rational::ONE), Err(Error::Overflow)));
        assert!(matches!(big.checked_mul(&big), Err(Error::Overflow)));
    }

    #[test]
    fn ordering_crosses_denominators() {
        assert!(r(1, 3) < r(1, 2));
        assert!(r(-1, 2) < r(-1, 3));
        assert!(r(-1, 2) < r(1, 1000));
        assert!(r(7, 60) > r(1, 10));
        assert_eq!(r(2, 4).cmp(&r(1, 2)), Ordering::Equal);
    }

    #[test]
    fn ordering_survives_large_components() {
        let a = r(i64::MAX as i128, i64::MAX as i128 - 1);
        let b = r(i64::MAX as i128 - 1, i64::MAX as i128 - 2);
        assert!(a < b);
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(r(1, 20).checked_lcm(&r(1, 15)).unwrap(), r(1, 5));
        assert_eq!(r(3, 1).checked_lcm(&r(4, 1)).unwrap(), r(12, 1));
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!("12".parse::<Rational>().unwrap(), r(12, 1));
        assert_eq!("0.25".parse::<Rational>().unwrap(), r(1, 4));
        assert_eq!("-0.5".parse::<Rational>().unwrap(), r(-1, 2));
        assert_eq!("1/15".parse::<Rational>().unwrap(), r(1, 15));
        assert!("".parse::<Rational>().is_err());
        assert!("1.2.3".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("1.5/2".parse::<Rational>().is_err());
    }

    #[test]
    fn displays_decimal_or_fraction() {
        assert_eq!(r(1, 4).to_string(), "0.25");
        assert_eq!(r(-13, 10).to_string(), "-1.3");
        assert_eq!(r(1, 15).to_string(), "1/15");
        assert_eq!(r(5, 1).to_string(), "5");
    }

    proptest! {
        #[test]
        fn add_matches_direct_fraction_arithmetic(
            an in -10_000i128..10_000, ad in 1i128..10_000,
            bn in -10_000i128..10_000, bd in 1i128..10_000,
        ) {
            let sum = r(an, ad).checked_add(&r(bn, bd)).unwrap();
            prop_assert_eq!(sum, r(an * bd + bn * ad, ad * bd));
        }

        #[test]
        fn results_stay_canonical(
            an in -10_000i128..10_000, ad in 1i128..10_000,
            bn in -10_000i128..10_000, bd in 1i128..10_000,
        ) {
            for v in [
                r(an, ad).checked_add(&r(bn, bd)).unwrap(),
                r(an, ad).checked_mul(&r(bn, bd)).unwrap(),
            ] {
                prop_assert!(v.denominator() > 0);
                prop_assert_eq!(
                    gcd_u128(v.numerator().unsigned_abs(), v.denominator().unsigned_abs()),
                    1
                );
            }
        }

        #[test]
        fn float_conversion_is_monotone(
            an in -(1i128 << 40)..(1i128 << 40), ad in 1i128..(1i128 << 40),
            bn in -(1i128 << 40)..(1i128 << 40), bd in 1i128..(1i128 << 40),
        ) {
            let (a, b) = (r(an, ad), r(bn, bd));
            if a < b {
                prop_assert!(a.to_f64() <= b.to_f64());
            }
        }

        #[test]
        fn ordering_agrees_with_exact_cross_multiplication(
            an in -100_000i128..100_000, ad in 1i128..100_000,
            bn in -100_000i128..100_000, bd in 1i128..100_000,
        ) {
            prop_assert_eq!(r(an, ad).cmp(&r(bn, bd)), (an * bd).cmp(&(bn * ad)));
        }

        #[test]
        fn display_round_trips(n in -1_000_000i128..1_000_000, d in 1i128..1_000_000) {
            let v = r(n, d);
            prop_assert_eq!(v.to_string().parse::<Rational>().unwrap(), v);
        }
    }
}
