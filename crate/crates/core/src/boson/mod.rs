//! Single-mode boson words and their normal ordering.
//!
//! Words are rewritten with the single rule `a a† → q a† a + 1` until every
//! creator stands left of every annihilator. Coefficients live in ℤ[q]; the
//! canonical boson algebra is the specialization `q = 1`.

mod fock;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::qpoly::QPoly;
use crate::{Error, Limits, Result};

pub use fock::fock_check;
pub use parse::parse_word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// Annihilator `a`.
    A,
    /// Creator `a†`.
    Ad,
}

/// Operator product; `letters[0]` is the leftmost factor and acts last.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BosonWord {
    letters: Vec<Letter>,
}

impl BosonWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        BosonWord { letters }
    }

    /// `(a†)ʲ aᵏ`.
    pub fn normal_monomial(j: usize, k: usize) -> Self {
        let mut letters = vec![Letter::Ad; j];
        letters.extend(std::iter::repeat_n(Letter::A, k));
        BosonWord { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn creators(&self) -> usize {
        self.letters.iter().filter(|&&l| l == Letter::Ad).count()
    }

    pub fn annihilators(&self) -> usize {
        self.letters.len() - self.creators()
    }

    /// `#a† − #a`, conserved by rewriting.
    pub fn excess(&self) -> isize {
        self.creators() as isize - self.annihilators() as isize
    }

    /// `n` concatenated copies.
    pub fn power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("word power must be at least 1".into()));
        }
        Ok(BosonWord {
            letters: self.letters.repeat(n),
        })
    }

    /// Positions `i` with `letters[i..i+2] == [a, a†]`.
    fn redexes(&self) -> impl Iterator<Item = usize> + '_ {
        self.letters
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w == &[Letter::A, Letter::Ad])
            .map(|(i, _)| i)
    }

    /// `Some((j, k))` if the word is already `(a†)ʲ aᵏ`.
    fn as_normal(&self) -> Option<(usize, usize)> {
        let j = self
            .letters
            .iter()
            .take_while(|&&l| l == Letter::Ad)
            .count();
        self.letters[j..]
            .iter()
            .all(|&l| l == Letter::A)
            .then(|| (j, self.letters.len() - j))
    }
}

impl fmt::Display for BosonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<&str> = self
            .letters
            .iter()
            .map(|l| match l {
                Letter::A => "a",
                Letter::Ad => "ad",
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// `Σ c_{j,k}(q) (a†)ʲ aᵏ` with no zero coefficients, ordered by `(j, k)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalForm {
    terms: BTreeMap<(usize, usize), QPoly>,
}

impl NormalForm {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff·(a†)ʲaᵏ`, dropping the term if it cancels.
    pub fn add_term(&mut self, j: usize, k: usize, coeff: &QPoly) {
        let slot = self.terms.entry((j, k)).or_default();
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&(j, k));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), &QPoly)> {
        self.terms.iter().map(|(&jk, c)| (jk, c))
    }

    pub fn coeff(&self, j: usize, k: usize) -> Option<&QPoly> {
        self.terms.get(&(j, k))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical boson coefficients (`q = 1`), zero terms dropped.
    pub fn at_q_one(&self) -> BTreeMap<(usize, usize), BigInt> {
        self.terms
            .iter()
            .map(|(&jk, c)| (jk, c.at_one()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }

    /// The same form with every coefficient specialized to `q = 1`.
    pub fn specialize_q_one(&self) -> NormalForm {
        NormalForm {
            terms: self
                .at_q_one()
                .into_iter()
                .map(|(jk, c)| (jk, QPoly::constant(c)))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_repr()).expect("plain data serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_repr()).expect("plain data serializes")
    }

    fn to_repr(&self) -> NormalFormRepr {
        NormalFormRepr {
            terms: self
                .terms
                .iter()
                .map(|(&(j, k), c)| TermRepr {
                    j,
                    k,
                    coeff: c.coeffs().iter().map(BigInt::to_string).collect(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: NormalFormRepr =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        let mut nf = NormalForm::new();
        let mut last = None;
        for t in repr.terms {
            if last.is_some_and(|prev| prev >= (t.j, t.k)) {
                return Err(Error::Format(
                    "terms must be strictly sorted by (j,k)".into(),
                ));
            }
            last = Some((t.j, t.k));
            let coeffs = t
                .coeff
                .iter()
                .map(|c| {
                    c.parse::<BigInt>()
                        .map_err(|_| Error::Format(format!("bad integer {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let poly = QPoly::from_coeffs(coeffs);
            if poly.is_zero() {
                return Err(Error::Format(format!(
                    "zero coefficient at ({},{})",
                    t.j, t.k
                )));
            }
            nf.terms.insert((t.j, t.k), poly);
        }
        Ok(nf)
    }
}

fn fmt_monomial(j: usize, k: usize) -> String {
    let mut parts = Vec::new();
    match j {
        0 => {}
        1 => parts.push("a†".to_string()),
        _ => parts.push(format!("(a†)^{j}")),
    }
    match k {
        0 => {}
        1 => parts.push("a".to_string()),
        _ => parts.push(format!("a^{k}")),
    }
    parts.join(" ")
}

/// Highest-degree terms first, e.g. `(a†)^2 a^2 + a† a`.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(j, k), c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mono = fmt_monomial(j, k);
            let coeff =
                if c.coeffs().len() > 1 && c.coeffs().iter().filter(|x| !x.is_zero()).count() > 1 {
                    format!("({c})")
                } else {
                    c.to_string()
                };
            match (mono.is_empty(), coeff == "1") {
                (true, _) => write!(f, "{coeff}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{coeff} {mono}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct NormalFormRepr {
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    j: usize,
    k: usize,
    coeff: Vec<String>,
}

/// Which redex the rewriting engine contracts next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Smallest pending word, leftmost `a a†` pair.
    Leftmost,
    /// Uniformly random pending word and random redex, seeded.
    Random(u64),
}

pub fn normal_order(word: &BosonWord) -> Result<NormalForm> {
    normal_order_with(word, Strategy::Leftmost, &Limits::default())
}

/// Rewrites `word` to normal form one redex at a time.
///
/// Pending (non-normal) words are kept in a map so that identical words
/// produced along different branches are merged before being rewritten
/// again.
pub fn normal_order_with(
    word: &BosonWord,
    strategy: Strategy,
    limits: &Limits,
) -> Result<NormalForm> {
    Error::cap("word length", word.len(), limits.max_word_len)?;
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Strategy::Leftmost => None,
    };

    let mut done = NormalForm::new();
    let mut pending: BTreeMap<BosonWord, QPoly> = BTreeMap::new();
    push(&mut pending, &mut done, word.clone(), QPoly::one());

    while !pending.is_empty() {
        let (w, coeff, site) = match rng.as_mut() {
            None => {
                let (w, c) = pending.pop_first().expect("non-empty");
                let site = w.redexes().next().expect("pending words are not normal");
                (w, c, site)
            }
            Some(rng) => {
                let idx = rng.gen_range(0..pending.len());
                let w = pending.keys().nth(idx).expect("index in range").clone();
                let c = pending.remove(&w).expect("key present");
                let sites: Vec<usize> = w.redexes().collect();
                let site = sites[rng.gen_range(0..sites.len())];
                (w, c, site)
            }
        };

        // a a† → q a† a
        let mut swapped = w.letters.clone();
        swapped[site] = Letter::Ad;
        swapped[site + 1] = Letter::A;
        push(
            &mut pending,
            &mut done,
            BosonWord::new(swapped),
            coeff.shift(),
        );

        // a a† → 1
        let mut contracted = w.letters;
        contracted.drain(site..site + 2);
        push(&mut pending, &mut done, BosonWord::new(contracted), coeff);
    }
    Ok(done)
}

fn push(pending: &mut BTreeMap<BosonWord, QPoly>, done: &mut NormalForm, w: BosonWord, c: QPoly) {
    match w.as_normal() {
        Some((j, k)) => done.add_term(j, k, &c),
        None => {
            let slot = pending.entry(w).or_default();
            *slot += &c;
        }
    }
}

fn number_word(n: usize) -> Result<BosonWord> {
    BosonWord::new(vec![Letter::Ad, Letter::A]).power(n)
}

/// `S_q(n, k)` for `k = 1..n`, read off the normal form of `(a† a)ⁿ`.
pub fn q_stirling_row(n: usize, limits: &Limits) -> Result<Vec<QPoly>> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    let nf = normal_order_with(&number_word(n)?, Strategy::Leftmost, limits)?;
    Ok((1..=n)
        .map(|k| nf.coeff(k, k).cloned().unwrap_or_default())
        .collect())
}

/// `S(n, k)` for `k = 1..n`.
pub fn stirling_row(n: usize, limits: &Limits) -> Result<Vec<BigInt>> {
    Ok(q_stirling_row(n, limits)?
        .iter()
        .map(QPoly::at_one)
        .collect())
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::OutOfRange(format!(
            "need 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// Stirling number of the second kind from normal ordering `(a† a)ⁿ`.
pub fn stirling(n: usize, k: usize) -> Result<BigInt> {
    check_nk(n, k)?;
    Ok(stirling_row(n, &Limits::default())?.swap_remove(k - 1))
}

pub fn q_stirling(n: usize, k: usize) -> Result<QPoly> {
    check_nk(n, k)?;
    Ok(q_stirling_row(n, &Limits::default())?.swap_remove(k - 1))
}

/// Row `k ↦ S_{r,s}(n, k)` of generalized Stirling numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingRow {
    pub n: usize,
    pub entries: BTreeMap<usize, BigInt>,
}

impl StirlingRow {
    pub fn sum(&self) -> BigInt {
        self.entries.values().sum()
    }
}

/// Normal-orders `[(a†)ʳ aˢ]ⁿ` (canonical case) and returns the common
/// prefix exponent `n(r−s)` together with the row `S_{r,s}(n, k)`, where the
/// word equals `(a†)^{n(r−s)} Σ_k S_{r,s}(n,k) (a†)ᵏ aᵏ`.
///
/// Every term is checked against that shape; a mismatch is reported as
/// [`Error::StructureViolation`].
pub fn generalized_stirling(
    r: usize,
    s: usize,
    n: usize,
    limits: &Limits,
) -> Result<(usize, StirlingRow)> {
    if s < 1 || n < 1 {
        return Err(Error::InvalidArgs(format!(
            "need s >= 1 and n >= 1, got s={s}, n={n}"
        )));
    }
    if r < s {
        return Err(Error::InvalidArgs(format!("need r >= s, got r={r}, s={s}")));
    }
    let word = BosonWord::normal_monomial(r, s).power(n)?;
    let nf = normal_order_with(&word, Strategy::Leftmost, limits)?;
    let prefix = n * (r - s);
    let mut entries = BTreeMap::new();
    for ((j, k), c) in nf.at_q_one() {
        if j != prefix + k {
            return Err(Error::StructureViolation {
                j,
                k,
                msg: format!("expected j = {prefix} + k"),
            });
        }
        if k < s || k > n * s {
            return Err(Error::StructureViolation {
                j,
                k,
                msg: format!("expected {s} <= k <= {}", n * s),
            });
        }
        entries.insert(k, c);
    }
    Ok((prefix, StirlingRow { n, entries }))
}

/// `B_{r,s}(n) = Σ_k S_{r,s}(n, k)`.
pub fn bell_rs(r: usize, s: usize, n: usize, limits: &Limits) -> Result<BigInt> {
    Ok(generalized_stirling(r, s, n, limits)?.1.sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::{Ad, A};

    fn poly(v: &[i64]) -> QPoly {
        QPoly::from_coeffs(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn defining_relation() {
        let nf = normal_order(&BosonWord::new(vec![A, Ad])).unwrap();
        assert_eq!(nf.coeff(1, 1), Some(&poly(&[0, 1])));
        assert_eq!(nf.coeff(0, 0), Some(&poly(&[1])));
        assert_eq!(nf.len(), 2);
    }

    #[test]
    fn number_operator_squared() {
        let nf = normal_order(&BosonWord::new(vec![Ad, A, Ad, A])).unwrap();
        assert_eq!(nf.coeff(2, 2), Some(&poly(&[0, 1])));
        assert_eq!(nf.coeff(1, 1), Some(&poly(&[1])));
        assert_eq!(nf.len(), 2);
    }

    #[test]
    fn a2_ad2_canonical() {
        let nf = normal_order(&BosonWord::new(vec![A, A, Ad, Ad])).unwrap();
        let canon = nf.at_q_one();
        assert_eq!(canon.len(), 3);
        assert_eq!(canon[&(2, 2)], BigInt::from(1));
        assert_eq!(canon[&(1, 1)], BigInt::from(4));
        assert_eq!(canon[&(0, 0)], BigInt::from(2));
    }

    #[test]
    fn empty_and_normal_words_are_fixed_points() {
        let nf = normal_order(&BosonWord::default()).unwrap();
        assert_eq!(nf.coeff(0, 0), Some(&QPoly::one()));
        let nf = normal_order(&BosonWord::normal_monomial(3, 2)).unwrap();
        assert_eq!(nf.len(), 1);
        assert_eq!(nf.coeff(3, 2), Some(&QPoly::one()));
    }

    #[test]
    fn powers() {
        let w = BosonWord::new(vec![Ad, A]);
        assert_eq!(w.power(3).unwrap().letters(), &[Ad, A, Ad, A, Ad, A]);
        assert_eq!(w.power(1).unwrap(), w);
        assert_eq!(
            BosonWord::new(vec![Ad, Ad, A]).power(2).unwrap().letters(),
            &[Ad, Ad, A, Ad, Ad, A]
        );
        assert!(w.power(0).is_err());
    }

    #[test]
    fn stirling_values() {
        assert_eq!(
            stirling_row(4, &Limits::default()).unwrap(),
            big(&[1, 7, 6, 1])
        );
        assert_eq!(stirling(5, 2).unwrap(), BigInt::from(15));
        assert_eq!(stirling(6, 6).unwrap(), BigInt::from(1));
        assert!(stirling(3, 0).is_err());
        assert!(stirling(3, 4).is_err());
    }

    #[test]
    fn q_stirling_values() {
        assert_eq!(q_stirling(2, 1).unwrap(), poly(&[1]));
        assert_eq!(q_stirling(2, 2).unwrap(), poly(&[0, 1]));
        assert_eq!(q_stirling(3, 3).unwrap(), poly(&[0, 0, 0, 1]));
    }

    #[test]
    fn generalized_rows() {
        let lim = Limits::default();
        let (p, row) = generalized_stirling(2, 2, 2, &lim).unwrap();
        assert_eq!(p, 0);
        assert_eq!(row.entries.len(), 3);
        assert_eq!(row.entries[&2], BigInt::from(2));
        assert_eq!(row.entries[&3], BigInt::from(4));
        assert_eq!(row.entries[&4], BigInt::from(1));
        assert_eq!(bell_rs(2, 2, 2, &lim).unwrap(), BigInt::from(7));
        assert_eq!(bell_rs(2, 2, 1, &lim).unwrap(), BigInt::from(1));

        // (a†² a)² = a†⁴a² + 2a†³a
        let (p, row) = generalized_stirling(2, 1, 2, &lim).unwrap();
        assert_eq!(p, 2);
        assert_eq!(row.entries[&1], BigInt::from(2));
        assert_eq!(row.entries[&2], BigInt::from(1));

        let (p, row) = generalized_stirling(1, 1, 5, &lim).unwrap();
        assert_eq!(p, 0);
        assert_eq!(
            row.entries.values().cloned().collect::<Vec<_>>(),
            big(&[1, 15, 25, 10, 1])
        );

        assert_eq!(bell_rs(1, 1, 4, &lim).unwrap(), BigInt::from(15));
        assert_eq!(bell_rs(1, 1, 7, &lim).unwrap(), BigInt::from(877));
        assert!(matches!(
            generalized_stirling(1, 2, 2, &lim),
            Err(Error::InvalidArgs(_))
        ));
        assert!(matches!(
            generalized_stirling(1, 1, 0, &lim),
            Err(Error::InvalidArgs(_))
        ));
    }

    #[test]
    fn word_cap() {
        let w = BosonWord::new(vec![Ad, A]).power(13).unwrap();
        assert!(matches!(normal_order(&w), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn strategies_agree_on_small_words() {
        let w = parse_word("a a ad a ad ad a ad").unwrap();
        let lim = Limits::default();
        let reference = normal_order_with(&w, Strategy::Leftmost, &lim).unwrap();
        for seed in 0..20 {
            assert_eq!(
                normal_order_with(&w, Strategy::Random(seed), &lim).unwrap(),
                reference
            );
        }
    }

    #[test]
    fn display_and_json() {
        let nf = normal_order(&parse_word("(ad a)^2").unwrap()).unwrap();
        assert_eq!(nf.specialize_q_one().to_string(), "(a†)^2 a^2 + a† a");
        assert_eq!(nf.to_string(), "q (a†)^2 a^2 + a† a");
        let nf = normal_order(&parse_word("a ad").unwrap()).unwrap();
        assert_eq!(nf.to_string(), "q a† a + 1");
        let json = nf.to_json();
        assert_eq!(
            json,
            r#"{"terms":[{"j":0,"k":0,"coeff":["1"]},{"j":1,"k":1,"coeff":["0","1"]}]}"#
        );
        assert_eq!(NormalForm::from_json(&json).unwrap(), nf);
        assert!(NormalForm::from_json(
            r#"{"terms":[{"j":1,"k":1,"coeff":["1"]},{"j":0,"k":0,"coeff":["1"]}]}"#
        )
        .is_err());
        assert!(NormalForm::from_json(r#"{"terms":[{"j":1,"k":1,"coeff":["0"]}]}"#).is_err());
    }
}
