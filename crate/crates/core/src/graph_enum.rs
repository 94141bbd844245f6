//! Brute-force enumeration of set partitions and the weighted line graphs
//! built from them.
//!
//! A partition of `n` labeled lines plays two roles: grouping arrows into
//! propagator lines, and grouping the lines that meet at one vertex (or leave
//! one origin). Weights attach to blocks by size.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::egf::TruncatedEGF;
use crate::util::factorial;
use crate::{Error, Limits, Rational, Result};

/// Set partition of `{1..n}` as a restricted growth string: `rgs[0] = 0` and
/// `rgs[i+1] ≤ 1 + max(rgs[..=i])`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    rgs: Vec<u8>,
}

impl SetPartition {
    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self> {
        let mut max: Option<u8> = None;
        for &r in &rgs {
            let limit = max.map_or(0, |m| m + 1);
            if r > limit {
                return Err(Error::InvalidArgs(format!(
                    "{rgs:?} is not a restricted growth string"
                )));
            }
            max = Some(max.map_or(r, |m| m.max(r)));
        }
        Ok(SetPartition { rgs })
    }

    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn block_count(&self) -> usize {
        self.rgs.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Size of each block, in block order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.block_count()];
        for &r in &self.rgs {
            sizes[r as usize] += 1;
        }
        sizes
    }

    /// Blocks as sets of 1-based labels.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (i, &r) in self.rgs.iter().enumerate() {
            blocks[r as usize].push(i + 1);
        }
        blocks
    }
}

/// One base-36 digit per element, e.g. `0010`.
impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &r in &self.rgs {
            let c = char::from_digit(r as u32, 36).ok_or(fmt::Error)?;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// In-place generator of restricted growth strings in lexicographic order.
struct RgsCursor {
    rgs: Vec<u8>,
    /// `prefix_max[i] = max(rgs[..=i])`.
    prefix_max: Vec<u8>,
    started: bool,
}

impl RgsCursor {
    fn new(n: usize) -> Self {
        RgsCursor {
            rgs: vec![0; n],
            prefix_max: vec![0; n],
            started: false,
        }
    }

    fn advance(&mut self) -> Option<&[u8]> {
        if !self.started {
            self.started = true;
            return Some(&self.rgs);
        }
        let n = self.rgs.len();
        let i = (1..n)
            .rev()
            .find(|&i| self.rgs[i] <= self.prefix_max[i - 1])?;
        self.rgs[i] += 1;
        self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
        for t in i + 1..n {
            self.rgs[t] = 0;
            self.prefix_max[t] = self.prefix_max[i];
        }
        Some(&self.rgs)
    }
}

/// Stream of all partitions of `{1..n}`, each exactly once.
pub struct SetPartitions {
    cursor: RgsCursor,
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        self.cursor
            .advance()
            .map(|r| SetPartition { rgs: r.to_vec() })
    }
}

fn check_cap(n: usize, limits: &Limits) -> Result<()> {
    Error::cap("partition size n", n, limits.max_partition_n)?;
    // block labels must fit one base-36 digit / u8
    Error::cap("partition size n", n, 36)
}

pub fn set_partitions(n: usize, limits: &Limits) -> Result<SetPartitions> {
    check_cap(n, limits)?;
    Ok(SetPartitions {
        cursor: RgsCursor::new(n),
    })
}

/// Calls `visit` with every restricted growth string of length `n` without
/// allocating per partition.
fn for_each_rgs(n: usize, mut visit: impl FnMut(&[u8])) {
    let mut cursor = RgsCursor::new(n);
    while let Some(r) = cursor.advance() {
        visit(r);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowCounts {
    pub total: u64,
    /// Number of partitions with `k` blocks, i.e. `k` propagator lines.
    pub by_block_count: BTreeMap<usize, u64>,
}

/// Counts arrow graphs on `n` labeled arrows, classified by the number of
/// concatenated lines.
pub fn arrow_graph_counts(n: usize, limits: &Limits) -> Result<ArrowCounts> {
    check_cap(n, limits)?;
    let mut by_block_count = BTreeMap::new();
    let mut total = 0u64;
    let mut cursor = RgsCursor::new(n);
    while cursor.advance().is_some() {
        let blocks = cursor.prefix_max.last().map_or(0, |&m| m as usize + 1);
        *by_block_count.entry(blocks).or_insert(0) += 1;
        total += 1;
    }
    Ok(ArrowCounts {
        total,
        by_block_count,
    })
}

/// Rational weight per block size with a fallback for unlisted sizes.
///
/// Weights are arbitrary rationals; the 0/1 multipliers used for the
/// classic examples are just special cases. A weight of 0 forbids blocks of
/// that size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpec {
    explicit: BTreeMap<usize, Rational>,
    default: Rational,
}

impl WeightSpec {
    pub fn constant(default: Rational) -> Self {
        WeightSpec {
            explicit: BTreeMap::new(),
            default,
        }
    }

    pub fn ones() -> Self {
        Self::constant(Rational::one())
    }

    pub fn zeros() -> Self {
        Self::constant(Rational::zero())
    }

    /// Sets the weight for one block size (sizes start at 1).
    pub fn with(mut self, size: usize, w: Rational) -> Result<Self> {
        if size == 0 {
            return Err(Error::WeightSpec("block sizes start at 1".into()));
        }
        self.explicit.insert(size, w);
        Ok(self)
    }

    pub fn weight(&self, size: usize) -> &Rational {
        self.explicit.get(&size).unwrap_or(&self.default)
    }

    pub fn default_weight(&self) -> &Rational {
        &self.default
    }

    pub fn explicit(&self) -> &BTreeMap<usize, Rational> {
        &self.explicit
    }

    /// `exp(Σ_s w(s) yˢ/s!)` truncated at `order`.
    pub fn exp_series(&self, order: usize) -> TruncatedEGF {
        let coeffs = (0..=order)
            .map(|s| {
                if s == 0 {
                    Rational::zero()
                } else {
                    self.weight(s) / Rational::from_integer(factorial(s))
                }
            })
            .collect();
        TruncatedEGF::from_coeffs(coeffs)
            .and_then(|s| s.exp_series())
            .expect("constant term is zero")
    }
}

fn parse_weight(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let bad = || Error::WeightSpec(format!("bad weight value {text:?}"));
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// `size:value` pairs separated by `;`, plus a mandatory `default:value`,
/// e.g. `1:1;2:1;default:0`. Values are integers or `p/q`.
impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut explicit = BTreeMap::new();
        let mut default = None;
        for item in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once(':')
                .ok_or_else(|| Error::WeightSpec(format!("expected key:value, got {item:?}")))?;
            let value = parse_weight(value)?;
            match key.trim() {
                "default" => {
                    if default.replace(value).is_some() {
                        return Err(Error::WeightSpec("default given twice".into()));
                    }
                }
                k => {
                    let size: usize = k
                        .parse()
                        .map_err(|_| Error::WeightSpec(format!("bad block size {k:?}")))?;
                    if size == 0 {
                        return Err(Error::WeightSpec("block sizes start at 1".into()));
                    }
                    if explicit.insert(size, value).is_some() {
                        return Err(Error::WeightSpec(format!("size {size} given twice")));
                    }
                }
            }
        }
        let default =
            default.ok_or_else(|| Error::WeightSpec("missing mandatory default:value".into()))?;
        Ok(WeightSpec { explicit, default })
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, w) in &self.explicit {
            write!(f, "{s}:{w};")?;
        }
        write!(f, "default:{}", self.default)
    }
}

/// Number of partitions of `{1..n}` for each block-size profile, where a
/// profile is `mult[s]` = number of blocks of size `s`.
fn block_profiles(n: usize) -> HashMap<Vec<u8>, u64> {
    let mut profiles: HashMap<Vec<u8>, u64> = HashMap::new();
    let mut sizes = vec![0u8; n];
    let mut mult = vec![0u8; n + 1];
    for_each_rgs(n, |rgs| {
        sizes.iter_mut().for_each(|s| *s = 0);
        mult.iter_mut().for_each(|m| *m = 0);
        let mut blocks = 0;
        for &r in rgs {
            sizes[r as usize] += 1;
            blocks = blocks.max(r as usize + 1);
        }
        for &s in &sizes[..blocks] {
            mult[s as usize] += 1;
        }
        match profiles.get_mut(&mult) {
            Some(c) => *c += 1,
            None => {
                profiles.insert(mult.clone(), 1);
            }
        }
    });
    profiles
}

/// `Σ_{partitions of {1..n}} Π_{blocks} w(|block|)`.
pub fn weighted_partition_sum(n: usize, w: &WeightSpec, limits: &Limits) -> Result<Rational> {
    check_cap(n, limits)?;
    let mut total = Rational::zero();
    for (mult, count) in block_profiles(n) {
        let mut product = Rational::from_integer(count.into());
        for (size, &m) in mult.iter().enumerate().skip(1) {
            for _ in 0..m {
                product *= w.weight(size);
            }
        }
        total += product;
    }
    Ok(total)
}

/// Number of graphs with `n` labeled lines: each line leaves an origin
/// (grouping weighted by `L`) and ends at a vertex (grouping weighted by `V`).
/// The two groupings are independent, so the count factorizes.
pub fn bender_count(n: usize, v: &WeightSpec, l: &WeightSpec, limits: &Limits) -> Result<Rational> {
    Ok(weighted_partition_sum(n, l, limits)? * weighted_partition_sum(n, v, limits)?)
}

/// [`bender_count`] by direct enumeration of all ordered pairs
/// (origin partition, vertex partition). Quadratic in `B(n)`.
pub fn bender_count_pairs(
    n: usize,
    v: &WeightSpec,
    l: &WeightSpec,
    limits: &Limits,
) -> Result<Rational> {
    check_cap(n, limits)?;
    // Per-partition weights scaled to integers by a common denominator.
    let scaled_weights = |w: &WeightSpec| -> (Vec<BigInt>, BigInt) {
        let mut raw = Vec::new();
        for_each_rgs(n, |rgs| {
            let p = SetPartition { rgs: rgs.to_vec() };
            raw.push(
                p.block_sizes()
                    .iter()
                    .fold(Rational::one(), |acc, &s| acc * w.weight(s)),
            );
        });
        let den = raw.iter().fold(BigInt::one(), |d, r| d.lcm(r.denom()));
        let nums = raw.iter().map(|r| r.numer() * (&den / r.denom())).collect();
        (nums, den)
    };
    let (origin, origin_den) = scaled_weights(l);
    let (vertex, vertex_den) = scaled_weights(v);

    // |w| < 2^40 keeps every partial sum of products inside i128
    let fits = |x: &BigInt| x.to_i64().filter(|v| v.unsigned_abs() < 1 << 40);
    let small: Option<Vec<i64>> = vertex.iter().map(fits).collect();
    let mut total = BigInt::zero();
    for wl in &origin {
        if wl.is_zero() {
            continue;
        }
        match (&small, fits(wl)) {
            (Some(vs), Some(a)) => {
                let mut acc: i128 = 0;
                for &b in vs {
                    acc += a as i128 * b as i128;
                }
                total += acc;
            }
            _ => {
                for wv in &vertex {
                    total += wl * wv;
                }
            }
        }
    }
    Ok(Rational::new(total, origin_den * vertex_den))
}

/// `exp(Σ L_m xᵐ/m! dᵐ/dyᵐ) exp(Σ V_s yˢ/s!) |_{y=0}` to order `order`.
pub fn model_series(
    v: &WeightSpec,
    l: &WeightSpec,
    order: usize,
    limits: &Limits,
) -> Result<TruncatedEGF> {
    check_cap(order, limits)?;
    Ok(l.exp_series(order)
        .apply_diff_operator(&v.exp_series(order)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(x: i64) -> Rational {
        Rational::from_integer(x.into())
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn enumerates_in_lexicographic_order() {
        let all: Vec<String> = set_partitions(3, &lim())
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(all, ["000", "001", "010", "011", "012"]);
        let empty: Vec<SetPartition> = set_partitions(0, &lim()).unwrap().collect();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].block_count(), 0);
    }

    #[test]
    fn caps() {
        assert!(matches!(
            set_partitions(15, &lim()),
            Err(Error::ResourceCap { .. })
        ));
        assert!(arrow_graph_counts(15, &lim()).is_err());
        assert!(weighted_partition_sum(15, &WeightSpec::ones(), &lim()).is_err());
    }

    #[test]
    fn partition_accessors() {
        let p = SetPartition::from_rgs(vec![0, 1, 0, 2]).unwrap();
        assert_eq!(p.block_count(), 3);
        assert_eq!(p.block_sizes(), vec![2, 1, 1]);
        assert_eq!(p.blocks(), vec![vec![1, 3], vec![2], vec![4]]);
        assert!(SetPartition::from_rgs(vec![1]).is_err());
        assert!(SetPartition::from_rgs(vec![0, 2]).is_err());
    }

    #[test]
    fn arrow_counts() {
        let c = arrow_graph_counts(4, &lim()).unwrap();
        assert_eq!(c.total, 15);
        assert_eq!(
            c.by_block_count,
            BTreeMap::from([(1, 1), (2, 7), (3, 6), (4, 1)])
        );
        assert_eq!(arrow_graph_counts(1, &lim()).unwrap().total, 1);
        assert_eq!(arrow_graph_counts(7, &lim()).unwrap().total, 877);
    }

    #[test]
    fn weight_spec_text() {
        let w: WeightSpec = "1:1; 2:1;default:0".parse().unwrap();
        assert_eq!(w.weight(2), &int(1));
        assert_eq!(w.weight(3), &int(0));
        assert_eq!(w.to_string(), "1:1;2:1;default:0");
        let w: WeightSpec = "3:-2/4;default:7".parse().unwrap();
        assert_eq!(w.weight(3), &Rational::new((-1).into(), 2.into()));
        for bad in [
            "1:1",
            "0:1;default:1",
            "x:1;default:1",
            "default:1/0",
            "1:2;1:3;default:0",
            "default:1;default:2",
            "1;default:1",
        ] {
            assert!(bad.parse::<WeightSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn weighted_sums() {
        let ones = WeightSpec::ones();
        assert_eq!(weighted_partition_sum(6, &ones, &lim()).unwrap(), int(203));
        let at_most_two: WeightSpec = "1:1;2:1;default:0".parse().unwrap();
        assert_eq!(
            weighted_partition_sum(4, &at_most_two, &lim()).unwrap(),
            int(10)
        );
        let singletons: WeightSpec = "1:1;default:0".parse().unwrap();
        for n in 0..8 {
            assert_eq!(
                weighted_partition_sum(n, &singletons, &lim()).unwrap(),
                int(1)
            );
        }
    }

    #[test]
    fn bender_counts() {
        let ones = WeightSpec::ones();
        let single: WeightSpec = "1:1;default:0".parse().unwrap();
        let at_most_two: WeightSpec = "1:1;2:1;default:0".parse().unwrap();
        assert_eq!(bender_count(5, &ones, &single, &lim()).unwrap(), int(52));
        assert_eq!(bender_count(4, &ones, &ones, &lim()).unwrap(), int(225));
        assert_eq!(
            bender_count(4, &at_most_two, &ones, &lim()).unwrap(),
            int(150)
        );
        assert_eq!(bender_count(0, &ones, &ones, &lim()).unwrap(), int(1));
        assert_eq!(
            bender_count_pairs(4, &at_most_two, &ones, &lim()).unwrap(),
            int(150)
        );
    }

    #[test]
    fn model_series_examples() {
        let ones = WeightSpec::ones();
        let single: WeightSpec = "1:1;default:0".parse().unwrap();
        let s = model_series(&ones, &single, 7, &lim()).unwrap();
        let expect: Vec<Rational> = [1, 1, 2, 5, 15, 52, 203, 877]
            .iter()
            .map(|&x| int(x))
            .collect();
        assert_eq!(s.counting_terms(), expect);

        let s = model_series(&WeightSpec::zeros(), &ones, 5, &lim()).unwrap();
        assert_eq!(s, TruncatedEGF::one(5));

        // vertex weight 2 on single lines, 1 elsewhere
        let v: WeightSpec = "1:2;default:1".parse().unwrap();
        let s = model_series(&v, &ones, 4, &lim()).unwrap();
        let expect: Vec<Rational> = [1, 2, 10, 75, 780].iter().map(|&x| int(x)).collect();
        assert_eq!(s.counting_terms(), expect);
    }
}
