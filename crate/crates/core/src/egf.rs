//! Truncated exponential generating functions over exact rationals.
//!
//! A [`TruncatedEGF`] of order `N` stores `a_0..a_N`, the ordinary power
//! series coefficients of `G(x) = Σ g(n) xⁿ/n!`. The combinatorial data lives
//! in the *counting terms* `g(n) = n!·a_n`.
//!
//! Binary operations truncate to the smaller of the two orders; nothing is
//! ever zero-padded.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::util::factorial;
use crate::{Error, Rational, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedEGF {
    coeffs: Vec<Rational>,
}

impl TruncatedEGF {
    /// Builds a series from its power series coefficients `a_0..a_N`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InsufficientTerms { needed: 1, got: 0 });
        }
        Ok(TruncatedEGF { coeffs })
    }

    /// `G(x) = Σ g(n) xⁿ/n!` from the first `order + 1` entries of `g`.
    pub fn from_counting_sequence<T>(g: &[T], order: usize) -> Result<Self>
    where
        T: Clone + Into<Rational>,
    {
        if g.len() < order + 1 {
            return Err(Error::InsufficientTerms {
                needed: order + 1,
                got: g.len(),
            });
        }
        let mut fact = BigInt::one();
        let coeffs = g[..=order]
            .iter()
            .enumerate()
            .map(|(n, gn)| {
                if n > 1 {
                    fact *= n;
                }
                gn.clone().into() / Rational::from_integer(fact.clone())
            })
            .collect();
        Ok(TruncatedEGF { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        TruncatedEGF {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `x` (just `0` at order 0).
    pub fn x(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// `exp(c·x)`, i.e. counting terms `cⁿ`.
    pub fn exp_linear(c: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = Rational::one();
        for n in 0..=order {
            if n > 0 {
                term = term * c / Rational::from_integer(n.into());
            }
            coeffs.push(term.clone());
        }
        TruncatedEGF { coeffs }
    }

    /// `exp(x)`, the EGF of the all-ones sequence.
    pub fn exp_x(order: usize) -> Self {
        Self::exp_linear(&Rational::one(), order)
    }

    /// `exp(exp(x) - 1)`, the Bell number EGF.
    pub fn bell(order: usize) -> Self {
        let mut inner = Self::exp_x(order);
        inner.coeffs[0] = Rational::zero();
        inner
            .exp_series()
            .expect("exp(x) - 1 has zero constant term")
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let keep = order.min(self.order()) + 1;
        TruncatedEGF {
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    /// `g(n) = n!·a_n`.
    pub fn counting_term(&self, n: usize) -> Result<Rational> {
        let a = self.coeffs.get(n).ok_or(Error::IndexOutOfRange {
            index: n,
            order: self.order(),
        })?;
        Ok(a * Rational::from_integer(factorial(n)))
    }

    /// All counting terms `g(0)..g(N)`.
    pub fn counting_terms(&self) -> Vec<Rational> {
        let mut fact = BigInt::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, a)| {
                if n > 1 {
                    fact *= n;
                }
                a * Rational::from_integer(fact.clone())
            })
            .collect()
    }

    /// Counting terms as integers, or `None` if any of them is fractional.
    pub fn integer_counting_terms(&self) -> Option<Vec<BigInt>> {
        self.counting_terms()
            .into_iter()
            .map(|g| g.is_integer().then(|| g.to_integer()))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncatedEGF {
            coeffs: (0..=n)
                .map(|i| &self.coeffs[i] + &other.coeffs[i])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncatedEGF {
            coeffs: (0..=n)
                .map(|i| &self.coeffs[i] - &other.coeffs[i])
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedEGF {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product truncated to the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let coeffs = (0..=n)
            .map(|i| {
                (0..=i)
                    .filter(|&j| !self.coeffs[j].is_zero())
                    .fold(Rational::zero(), |acc, j| {
                        acc + &self.coeffs[j] * &other.coeffs[i - j]
                    })
            })
            .collect();
        TruncatedEGF { coeffs }
    }

    /// `d/dx`; shifts the counting sequence left by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderZero);
        }
        Ok(TruncatedEGF {
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, a)| a * Rational::from_integer((i + 1).into()))
                .collect(),
        })
    }

    /// `F(G(x))` for `G` with zero constant term (Horner evaluation).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for i in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[i];
        }
        Ok(acc)
    }

    /// `exp(C(x))` for `C(0) = 0`: the all-graph EGF from the connected-graph
    /// EGF.
    ///
    /// Uses `A' = C'·A`, i.e. `n·a_n = Σ_{k=1..n} k·c_k·a_{n-k}`.
    pub fn exp_series(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order();
        let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
        a.push(Rational::one());
        for m in 1..=n {
            let s = (1..=m)
                .filter(|&k| !self.coeffs[k].is_zero())
                .fold(Rational::zero(), |acc, k| {
                    acc + &self.coeffs[k] * Rational::from_integer(k.into()) * &a[m - k]
                });
            a.push(s / Rational::from_integer(m.into()));
        }
        Ok(TruncatedEGF { coeffs: a })
    }

    /// `log(A(x))` for `A(0) = 1`; inverse of [`exp_series`](Self::exp_series).
    ///
    /// Uses `A' = C'·A` solved for `C`: `n·c_n = n·a_n - Σ_{k=1..n-1} k·c_k·a_{n-k}`.
    pub fn log_series(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantTermNotOne);
        }
        let n = self.order();
        let mut c: Vec<Rational> = Vec::with_capacity(n + 1);
        c.push(Rational::zero());
        for m in 1..=n {
            let mut s = &self.coeffs[m] * Rational::from_integer(m.into());
            for (k, ck) in c.iter().enumerate().skip(1) {
                s -= ck * Rational::from_integer(k.into()) * &self.coeffs[m - k];
            }
            c.push(s / Rational::from_integer(m.into()));
        }
        Ok(TruncatedEGF { coeffs: c })
    }

    /// Series whose counting terms are the pointwise products
    /// `g₃(n) = g₁(n)·g₂(n)`.
    pub fn diamond_product(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut fact = BigInt::one();
        let coeffs = (0..=n)
            .map(|i| {
                if i > 1 {
                    fact *= i;
                }
                &self.coeffs[i] * &other.coeffs[i] * Rational::from_integer(fact.clone())
            })
            .collect();
        TruncatedEGF { coeffs }
    }

    /// `A₁(x·d/dy) A₂(y) |_{y=0}`, evaluated literally: the `n`-th term is
    /// `a₁(n)·xⁿ` times the constant term of the `n`-th derivative of `A₂`.
    ///
    /// Agrees with [`diamond_product`](Self::diamond_product); the two are
    /// kept as independent code paths so one can check the other.
    pub fn apply_diff_operator(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut deriv = other.truncate(n);
        for i in 0..=n {
            coeffs.push(&self.coeffs[i] * &deriv.coeffs[0]);
            if i < n {
                deriv = deriv.derivative().expect("order stays positive below n");
            }
        }
        TruncatedEGF { coeffs }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&EgfRepr::from(self)).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: EgfRepr = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        repr.try_into()
    }
}

impl fmt::Debug for TruncatedEGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedEGF[")?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for TruncatedEGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})x")?,
                _ => write!(f, "({a})x^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// Wire form: `{"order": N, "coeffs": [["num","den"], ...]}`.
#[derive(Serialize, Deserialize)]
pub(crate) struct EgfRepr {
    order: usize,
    coeffs: Vec<[String; 2]>,
}

impl From<&TruncatedEGF> for EgfRepr {
    fn from(s: &TruncatedEGF) -> Self {
        EgfRepr {
            order: s.order(),
            coeffs: s
                .coeffs
                .iter()
                .map(|a| [a.numer().to_string(), a.denom().to_string()])
                .collect(),
        }
    }
}

impl TryFrom<EgfRepr> for TruncatedEGF {
    type Error = Error;

    fn try_from(repr: EgfRepr) -> Result<Self> {
        if repr.coeffs.len() != repr.order + 1 {
            return Err(Error::Format(format!(
                "order {} needs {} coefficients, found {}",
                repr.order,
                repr.order + 1,
                repr.coeffs.len()
            )));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|[num, den]| parse_rational_parts(num, den))
            .collect::<Result<Vec<_>>>()?;
        TruncatedEGF::from_coeffs(coeffs)
    }
}

pub(crate) fn parse_rational_parts(num: &str, den: &str) -> Result<Rational> {
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Format(format!("bad integer {num:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Format(format!("bad integer {den:?}")))?;
    if den.is_zero() {
        return Err(Error::Format("zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}
