//! Reference implementations of the sequences, computed without any normal
//! ordering or series algebra where possible: recurrences, Hermite special
//! values and Dobiński-type sums with rigorous error bounds.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bigfloat::{e_inverse, BigFloat, Round, MIN_PREC};
use crate::egf::TruncatedEGF;
use crate::util::{binomial_row, factorial};
use crate::{Error, Rational, Result};

/// `B(0..=n_max)` via `B(n+1) = Σ_k C(n,k) B(k)`.
pub fn bell_numbers(n_max: usize) -> Vec<BigInt> {
    let mut b = vec![BigInt::one()];
    for n in 0..n_max {
        let next = binomial_row(n).iter().zip(&b).map(|(c, bk)| c * bk).sum();
        b.push(next);
    }
    b
}

pub fn bell(n: usize) -> BigInt {
    bell_numbers(n).pop().expect("at least B(0)")
}

/// Stirling numbers of the second kind, `1 ≤ k ≤ n ≤ n_max`, from
/// `S(n,k) = k·S(n−1,k) + S(n−1,k−1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    /// `rows[n][k]` for `0 ≤ k ≤ n`, including the `k = 0` column.
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&BigInt> {
        self.rows.get(n)?.get(k)
    }

    /// `S(n, 1..=n)`.
    pub fn row(&self, n: usize) -> &[BigInt] {
        &self.rows[n][1..]
    }

    pub fn row_sum(&self, n: usize) -> BigInt {
        self.row(n).iter().sum()
    }

    pub(crate) fn set(&mut self, n: usize, k: usize, value: BigInt) {
        self.rows[n][k] = value;
    }
}

pub fn stirling_table(n_max: usize) -> Result<StirlingTable> {
    if n_max < 1 {
        return Err(Error::OutOfRange("n_max must be at least 1".into()));
    }
    let mut rows = vec![vec![BigInt::one()]];
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let row = (0..=n)
            .map(|k| {
                let stay = if k < n { &prev[k] * k } else { BigInt::zero() };
                let new_block = if k > 0 {
                    prev[k - 1].clone()
                } else {
                    BigInt::zero()
                };
                stay + new_block
            })
            .collect();
        rows.push(row);
    }
    Ok(StirlingTable { rows })
}

/// `I(0..=n_max)` via `I(n) = I(n−1) + (n−1)·I(n−2)`.
pub fn involution_numbers(n_max: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::one()];
    for n in 1..=n_max {
        let next = if n == 1 {
            BigInt::one()
        } else {
            &v[n - 1] + &v[n - 2] * (n - 1)
        };
        v.push(next);
    }
    v
}

pub fn involution(n: usize) -> BigInt {
    involution_numbers(n).pop().expect("at least I(0)")
}

/// Physicists' Hermite polynomial, integer coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitePoly {
    pub n: usize,
    pub coeffs: Vec<BigInt>,
}

impl HermitePoly {
    /// Checks `H_{n+1} = 2x·H_n − 2n·H_{n−1}` with `self` as `H_{n+1}`.
    pub fn follows(&self, prev: &HermitePoly, prev2: &HermitePoly) -> bool {
        let n = prev.n;
        if self.n != n + 1 || prev2.n + 1 != n {
            return false;
        }
        let mut expect = vec![BigInt::zero(); n + 2];
        for (i, c) in prev.coeffs.iter().enumerate() {
            expect[i + 1] += c * 2;
        }
        for (i, c) in prev2.coeffs.iter().enumerate() {
            expect[i] -= c * (2 * n);
        }
        expect == self.coeffs
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| {
            acc * x + Rational::from_integer(c.clone())
        })
    }
}

/// `H_0..=H_{n_max}`.
pub fn hermite_all(n_max: usize) -> Vec<HermitePoly> {
    let mut out = vec![HermitePoly {
        n: 0,
        coeffs: vec![BigInt::one()],
    }];
    if n_max >= 1 {
        out.push(HermitePoly {
            n: 1,
            coeffs: vec![BigInt::zero(), BigInt::from(2)],
        });
    }
    for n in 1..n_max {
        let mut c = vec![BigInt::zero(); n + 2];
        for (i, h) in out[n].coeffs.iter().enumerate() {
            c[i + 1] += h * 2;
        }
        for (i, h) in out[n - 1].coeffs.iter().enumerate() {
            c[i] -= h * (2 * n);
        }
        out.push(HermitePoly {
            n: n + 1,
            coeffs: c,
        });
    }
    out
}

pub fn hermite(n: usize) -> HermitePoly {
    hermite_all(n).pop().expect("at least H_0")
}

/// `H_n(1/(√2 i)) / (−√2 i)ⁿ`, evaluated exactly.
///
/// With `u = √2 i` (so `u² = −2`), the monomial `h_j xʲ` contributes
/// `h_j u⁻ʲ (−1)ⁿ u⁻ⁿ`. Only `j ≡ n (mod 2)` is nonzero, and then
/// `u^{−(n+j)} = (−2)^{−(n+j)/2}` is rational.
pub fn involution_from_hermite(n: usize) -> BigInt {
    let h = hermite(n);
    let minus_two = Rational::from_integer(BigInt::from(-2));
    let mut total = Rational::zero();
    for (j, c) in h.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        debug_assert_eq!((n + j) % 2, 0, "Hermite parity");
        let power = minus_two.pow(((n + j) / 2) as i32);
        total += Rational::from_integer(c.clone()) / power;
    }
    if n % 2 == 1 {
        total = -total;
    }
    assert!(total.is_integer(), "special value must be an integer");
    total.to_integer()
}

/// A numeric value with a rigorous bound on `|value − exact|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub value: BigFloat,
    /// Covers the truncated tail, the error in `e⁻¹` and the final rounding.
    pub tail_bound: BigFloat,
}

impl Enclosure {
    pub fn prec_bits(&self) -> u32 {
        self.value.prec()
    }

    /// `|value − target| ≤ tail_bound`.
    pub fn encloses(&self, target: &Rational) -> bool {
        (self.value.to_rational() - target).abs() <= self.tail_bound.to_rational()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Repr {
            value: String,
            prec_bits: u32,
            tail_bound: String,
        }
        serde_json::to_value(Repr {
            value: self.value.to_string(),
            prec_bits: self.prec_bits(),
            tail_bound: self.tail_bound.to_sci_upper(6),
        })
        .expect("plain data serializes")
    }
}

/// `e⁻¹·Σ_{k≥0} c(k)/k!`, summed exactly up to `k = terms`, for a
/// nonnegative coefficient of the form `c(k) = β·(k+σ)ⁿ`.
///
/// For such `c` the term ratio `t_{k+1}/t_k = (1 + 1/(k+σ))ⁿ/(k+1)` is
/// decreasing, so once it drops below 1 the rest of the tail is dominated
/// by a geometric series.
fn dobinski_type_sum(
    coeff: impl Fn(usize) -> Rational,
    terms: usize,
    prec: u32,
) -> Result<Enclosure> {
    if terms < 1 {
        return Err(Error::InvalidArgs("truncation K must be at least 1".into()));
    }
    if prec < MIN_PREC {
        return Err(Error::InvalidArgs(format!(
            "precision must be at least {MIN_PREC} bits, got {prec}"
        )));
    }
    let term = |k: usize| coeff(k) / Rational::from_integer(factorial(k));

    let sum: Rational = (0..=terms).map(term).sum();

    let mut tail = Rational::zero();
    let mut k = terms + 1;
    let mut t = term(k);
    loop {
        let t_next = term(k + 1);
        if t.is_zero() {
            break;
        }
        let ratio = &t_next / &t;
        if ratio < Rational::new(1.into(), 2.into()) {
            tail += &t / (Rational::one() - ratio);
            break;
        }
        tail += &t;
        k += 1;
        t = t_next;
    }

    let (e_inv, e_err) = e_inverse(prec);
    let exact_part = &e_inv * &sum;
    let value = BigFloat::from_rational(&exact_part, prec, Round::Nearest);
    let rounding = (value.to_rational() - &exact_part).abs();
    // e⁻¹ < 3/8
    let bound = e_err * sum.abs() + rounding + tail * Rational::new(3.into(), 8.into());
    Ok(Enclosure {
        value,
        tail_bound: BigFloat::from_rational(&bound, prec, Round::Up),
    })
}

/// Dobiński sum `e⁻¹·Σ_{k=0}^{K} kⁿ/k!` with an enclosure of `B(n)`.
pub fn dobinski(n: usize, terms: usize, prec: u32) -> Result<Enclosure> {
    let power = |k: usize| Rational::from_integer(BigInt::from(k).pow(n as u32));
    let enc = dobinski_type_sum(power, terms, prec)?;
    if enc.tail_bound.to_rational() >= Rational::new(1.into(), 2.into()) {
        return Err(Error::PrecisionTooLow {
            bound: enc.tail_bound.to_sci_upper(6),
        });
    }
    Ok(enc)
}

/// `n`-th counting term of `Σ_k (1/k!) exp(exp((k+1)x) − 2)`, truncated at
/// `k = K`. Each `k`-term is `e⁻¹·exp(e^{(k+1)x} − 1)`, whose Taylor
/// coefficients are exact rationals.
pub fn g1_coefficient(n: usize, terms: usize, prec: u32) -> Result<Enclosure> {
    let coeff = |k: usize| {
        TruncatedEGF::exp_linear(&Rational::from_integer((k + 1).into()), n)
            .sub(&TruncatedEGF::one(n))
            .exp_series()
            .and_then(|s| s.counting_term(n))
            .expect("inner series has zero constant term")
    };
    dobinski_type_sum(coeff, terms, prec)
}

/// `n`-th counting term of `Σ_k (1/k!) exp(kx(1 + kx/2) − 1)`, truncated at
/// `k = K`. Each `k`-term is `e⁻¹·exp(kx + k²x²/2)`.
pub fn g2_coefficient(n: usize, terms: usize, prec: u32) -> Result<Enclosure> {
    let coeff = |k: usize| {
        let mut c = vec![Rational::zero(); n + 1];
        let kr = Rational::from_integer(k.into());
        if n >= 1 {
            c[1] = kr.clone();
        }
        if n >= 2 {
            c[2] = &kr * &kr / Rational::from_integer(2.into());
        }
        TruncatedEGF::from_coeffs(c)
            .and_then(|s| s.exp_series())
            .and_then(|s| s.counting_term(n))
            .expect("inner series has zero constant term")
    };
    dobinski_type_sum(coeff, terms, prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn int(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    #[test]
    fn bell_values() {
        assert_eq!(bell_numbers(7), big(&[1, 1, 2, 5, 15, 52, 203, 877]));
        assert_eq!(bell(0), BigInt::one());
        assert_eq!(bell(10), BigInt::from(115975));
    }

    #[test]
    fn stirling_rows() {
        let t = stirling_table(10).unwrap();
        assert_eq!(t.row(4), &big(&[1, 7, 6, 1])[..]);
        for n in 1..=10 {
            assert_eq!(t.get(n, 1), Some(&BigInt::one()));
            assert_eq!(t.get(n, n), Some(&BigInt::one()));
        }
        assert_eq!(t.row_sum(10), BigInt::from(115975));
        assert!(stirling_table(0).is_err());
    }

    #[test]
    fn involution_values() {
        assert_eq!(involution_numbers(6), big(&[1, 1, 2, 4, 10, 26, 76]));
        assert_eq!(involution(8), BigInt::from(764));
    }

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0).coeffs, big(&[1]));
        assert_eq!(hermite(1).coeffs, big(&[0, 2]));
        assert_eq!(hermite(2).coeffs, big(&[-2, 0, 4]));
        assert_eq!(hermite(4).coeffs, big(&[12, 0, -48, 0, 16]));
        let hs = hermite_all(6);
        assert!(hs[6].follows(&hs[5], &hs[4]));
        assert!(!hs[6].follows(&hs[4], &hs[5]));
        assert_eq!(hs[2].eval(&int(3)), int(34));
    }

    #[test]
    fn hermite_special_values() {
        assert_eq!(involution_from_hermite(0), BigInt::one());
        assert_eq!(involution_from_hermite(4), BigInt::from(10));
        assert_eq!(involution_from_hermite(10), BigInt::from(9496));
    }

    #[test]
    fn dobinski_encloses_bell() {
        let e = dobinski(7, 100, 256).unwrap();
        assert!(e.encloses(&int(877)));
        assert!(e.tail_bound.to_rational() < Rational::new(1.into(), BigInt::from(10).pow(30)));
        assert!(dobinski(0, 100, 256).unwrap().encloses(&int(1)));
        let e = dobinski(15, 100, 256).unwrap();
        assert!(e.encloses(&int(1382958545)));
    }

    #[test]
    fn dobinski_argument_checks() {
        assert!(matches!(dobinski(3, 0, 256), Err(Error::InvalidArgs(_))));
        assert!(matches!(dobinski(3, 10, 32), Err(Error::InvalidArgs(_))));
        // K far too small for n: the tail alone exceeds 1/2
        assert!(matches!(
            dobinski(20, 2, 64),
            Err(Error::PrecisionTooLow { .. })
        ));
    }

    #[test]
    fn g_coefficients() {
        assert!(g1_coefficient(0, 80, 256).unwrap().encloses(&int(1)));
        assert!(g1_coefficient(1, 80, 256).unwrap().encloses(&int(2)));
        assert!(g1_coefficient(4, 80, 256).unwrap().encloses(&int(780)));
        assert!(g2_coefficient(0, 80, 256).unwrap().encloses(&int(1)));
        assert!(g2_coefficient(2, 80, 256).unwrap().encloses(&int(4)));
        assert!(g2_coefficient(4, 80, 256).unwrap().encloses(&int(150)));
    }

    #[test]
    fn enclosure_json() {
        let v = dobinski(3, 40, 64).unwrap().to_json_value();
        assert_eq!(v["prec_bits"], 64);
        assert!(v["value"].as_str().unwrap().starts_with("5.0000"));
        assert!(v["tail_bound"].as_str().unwrap().contains('e'));
    }
}
