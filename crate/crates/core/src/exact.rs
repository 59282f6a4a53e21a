//! Exact rational arithmetic helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

/// Falling factorial `(x)_t = x (x-1) ... (x-t+1)`; zero once a factor hits zero.
pub fn falling(x: u64, t: u64) -> BigInt {
    if t > x {
        return BigInt::zero();
    }
    (0..t).map(|i| BigInt::from(x - i)).product()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(v: impl Into<BigInt>) -> Rational {
    BigRational::from_integer(v.into())
}

pub fn pow(base: &Rational, e: u64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    num_traits::pow(base.clone(), e as usize)
}

/// `(x)_t / x^t`, the probability that `t` independent uniform draws from
/// `[x]` are pairwise distinct.
pub fn distinct_draws(x: u64, t: u64) -> Rational {
    if x == 0 {
        return if t == 0 {
            Rational::one()
        } else {
            Rational::zero()
        };
    }
    BigRational::new(falling(x, t), BigInt::from(x).pow(t as u32))
}

/// Parses `a/b`, a decimal like `0.25`, or an integer into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        return Some(BigRational::new(a, b));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().ok()?
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().ok()?;
        let signed_frac = if negative { -frac } else { frac };
        return Some(BigRational::new(whole * &scale + signed_frac, scale));
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}
