//! Binary floating point values of fixed precision, used only to report
//! numeric results. All arithmetic that matters is done in exact rationals
//! and rounded once into a [`BigFloat`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

pub const MIN_PREC: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Nearest,
    /// Toward +∞; used for error bounds.
    Up,
}

/// `mantissa · 2^exponent` with `|mantissa| < 2^prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    exponent: i64,
    prec: u32,
}

fn pow2(e: u64) -> BigInt {
    BigInt::one() << e
}

/// `num / den` rounded to an integer; `den > 0`.
fn div_round(num: &BigInt, den: &BigInt, mode: Round) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    if r.is_zero() {
        return q;
    }
    match mode {
        Round::Up => q + 1,
        Round::Nearest => match (r * 2u8).cmp(den) {
            Ordering::Less => q,
            Ordering::Greater => q + 1,
            // ties to even
            Ordering::Equal if q.is_even() => q,
            Ordering::Equal => q + 1,
        },
    }
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mantissa: BigInt::zero(),
            exponent: 0,
            prec,
        }
    }

    pub fn from_rational(r: &Rational, prec: u32, mode: Round) -> Self {
        if r.is_zero() {
            return Self::zero(prec);
        }
        let num = r.numer();
        let den = r.denom();
        let mut shift = prec as i64 - (num.bits() as i64 - den.bits() as i64);
        loop {
            let (n, d) = if shift >= 0 {
                (num << shift as u64, den.clone())
            } else {
                (num.clone(), den << (-shift) as u64)
            };
            let m = div_round(&n, &d, mode);
            if m.bits() > prec as u64 {
                shift -= 1;
                continue;
            }
            return BigFloat {
                mantissa: m,
                exponent: -shift,
                prec,
            };
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn to_rational(&self) -> Rational {
        let m = Rational::from_integer(self.mantissa.clone());
        if self.exponent >= 0 {
            m * Rational::from_integer(pow2(self.exponent as u64))
        } else {
            m / Rational::from_integer(pow2((-self.exponent) as u64))
        }
    }

    /// Decimal digits that the precision can honestly carry.
    pub fn decimal_digits(&self) -> usize {
        // log10(2) ≈ 0.30103
        (self.prec as usize * 30103) / 100000
    }

    /// Fixed-point decimal with `frac_digits` digits after the point,
    /// rounded to nearest.
    pub fn to_fixed(&self, frac_digits: usize) -> String {
        let r = self.to_rational();
        let scale = BigInt::from(10u8).pow(frac_digits as u32);
        let scaled = div_round(&(r.numer() * &scale), r.denom(), Round::Nearest);
        let neg = scaled.sign() == Sign::Minus;
        let digits = scaled.abs().to_string();
        let padded = if digits.len() <= frac_digits {
            format!("{}{}", "0".repeat(frac_digits + 1 - digits.len()), digits)
        } else {
            digits
        };
        let (int, frac) = padded.split_at(padded.len() - frac_digits);
        let sign = if neg { "-" } else { "" };
        if frac_digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Scientific notation with `sig_digits` significant digits, e.g.
    /// `1.25e-40`. Rounds the magnitude up, so it is safe for bounds.
    pub fn to_sci_upper(&self, sig_digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let sig_digits = sig_digits.max(1);
        let r = self.to_rational().abs();
        let ten = Rational::from_integer(10.into());
        // estimate the decimal exponent, then correct
        let mut e10 = ((r.numer().bits() as f64 - r.denom().bits() as f64)
            * std::f64::consts::LOG10_2) as i64;
        let pow10 = |e: i64| -> Rational {
            if e >= 0 {
                ten.pow(e as i32)
            } else {
                Rational::one() / ten.pow((-e) as i32)
            }
        };
        while pow10(e10) > r {
            e10 -= 1;
        }
        while pow10(e10 + 1) <= r {
            e10 += 1;
        }
        let scaled = &r / pow10(e10 - sig_digits as i64 + 1);
        let mut m = div_round(scaled.numer(), scaled.denom(), Round::Up);
        if m.to_string().len() > sig_digits {
            m = div_round(&m, &BigInt::from(10u8), Round::Up);
            e10 += 1;
        }
        let digits = m.to_string();
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        let (head, tail) = digits.split_at(1);
        if tail.is_empty() {
            format!("{sign}{head}e{e10}")
        } else {
            format!("{sign}{head}.{tail}e{e10}")
        }
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rational();
        let int_digits = r.abs().to_integer().to_string().len();
        let frac = self.decimal_digits().saturating_sub(int_digits);
        write!(f, "{}", self.to_fixed(frac))
    }
}

/// Rational approximation of `e⁻¹` together with a bound on its error, good
/// to well beyond `prec` bits.
pub fn e_inverse(prec: u32) -> (Rational, Rational) {
    let target = Rational::new(BigInt::one(), pow2(prec as u64 + 16));
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    let mut k: u64 = 0;
    loop {
        if k.is_multiple_of(2) {
            sum += &term;
        } else {
            sum -= &term;
        }
        k += 1;
        term /= Rational::from_integer(k.into());
        // alternating series with decreasing terms
        if term < target {
            return (sum, term);
        }
    }
}
