//! Cross-verification battery: every identity is checked by computing the
//! same numbers along independent routes and comparing them exactly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boson::{self, fock_check, normal_order_with, BosonWord, Letter, Strategy};
use crate::egf::TruncatedEGF;
use crate::graph_enum::{
    arrow_graph_counts, bender_count, bender_count_pairs, model_series, WeightSpec,
};
use crate::sequences::{
    bell_numbers, dobinski, g1_coefficient, g2_coefficient, hermite_all, involution_from_hermite,
    involution_numbers, stirling_table,
};
use crate::{Limits, Rational, Result};

/// Bell numbers `B(1..=7)` as commonly tabulated.
pub const PUBLISHED_BELL: [u64; 7] = [1, 2, 5, 15, 52, 203, 877];

/// Involution numbers `I(1..=6)`.
pub const PUBLISHED_INVOLUTION: [u64; 6] = [1, 2, 4, 10, 26, 76];

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_n: usize,
    pub prec: u32,
    pub limits: Limits,
    pub seed: u64,
    /// Test hook: perturbs one entry of the recurrence Stirling table so the
    /// harness can confirm that a broken identity is reported.
    pub corrupt_stirling: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            max_n: 8,
            prec: 256,
            limits: Limits::default(),
            seed: 0x5eed,
            corrupt_stirling: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub identity: &'static str,
    /// `None` on success, otherwise the first discrepancy found.
    pub failure: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {:<28} {}", c.name, c.identity)?;
            if let Some(why) = &c.failure {
                writeln!(f, "     {why}")?;
            }
        }
        let failed = self.failed().count();
        write!(
            f,
            "{} checks, {} passed, {} failed",
            self.checks.len(),
            self.checks.len() - failed,
            failed
        )
    }
}

/// `Ok(None)` = identity holds, `Ok(Some(msg))` = it does not, `Err` =
/// something (usually a resource cap) prevented the check from running.
type Outcome = Result<Option<String>>;

macro_rules! ensure_eq {
    ($left:expr, $right:expr, $($ctx:tt)+) => {
        let (l, r) = (&$left, &$right);
        if l != r {
            return Ok(Some(format!("{}: {:?} != {:?}", format!($($ctx)+), l, r)));
        }
    };
}

fn int(x: impl Into<BigInt>) -> Rational {
    Rational::from_integer(x.into())
}

type NamedCheck = (&'static str, &'static str, fn(&VerifyOptions) -> Outcome);

pub fn run(opts: &VerifyOptions) -> Result<Report> {
    let checks: [NamedCheck; 11] = [
        (
            "bell-four-way",
            "B(n): recurrence = exp(e^x-1) = bell_rs(1,1,n) = partition count",
            bell_four_way,
        ),
        (
            "stirling-consistency",
            "S(n,k): (a† a)^n normal ordering = triangle recurrence = block counts",
            stirling_consistency,
        ),
        (
            "connected-graph-theorem",
            "log(exp(e^x-1)) = e^x-1, so c(n) = 1",
            connected_graph_theorem,
        ),
        (
            "diamond-product",
            "A1(x d/dy) A2(y)|y=0 has counting terms a1(n) a2(n)",
            diamond_product,
        ),
        (
            "model-series-bridge",
            "weighted line graph EGF = brute-force graph count",
            model_series_bridge,
        ),
        (
            "bell-times-next-bell",
            "L=1, V1=2: B(n)B(n+1); Dobinski-type closed form coefficients",
            bell_times_next_bell,
        ),
        (
            "bell-times-involution",
            "L=1, V<=2: B(n)I(n); Hermite special values; closed form coefficients",
            bell_times_involution,
        ),
        (
            "dobinski",
            "B(n) = e^-1 sum k^n/k!, rigorously enclosed",
            dobinski_check,
        ),
        (
            "generalized-stirling-shape",
            "[(a†)^r a^s]^n = (a†)^{n(r-s)} sum_{k=s}^{ns} S_rs(n,k) (a†)^k a^k",
            generalized_shape,
        ),
        (
            "q-degeneration",
            "S_q(n,k) at q=1 equals S(n,k)",
            q_degeneration,
        ),
        (
            "rewrite-confluence",
            "normal form independent of rewrite order",
            confluence,
        ),
    ];
    let mut report = Report::default();
    for (name, identity, check) in checks {
        let failure = check(opts)?;
        report.checks.push(CheckResult {
            name,
            identity,
            failure,
        });
    }
    Ok(report)
}

fn bell_four_way(o: &VerifyOptions) -> Outcome {
    let bell = bell_numbers(o.max_n);
    let egf = TruncatedEGF::bell(o.max_n).counting_terms();
    for n in 1..=o.max_n {
        ensure_eq!(int(bell[n].clone()), egf[n], "recurrence vs EGF at n={n}");
        let rewrite = boson::bell_rs(1, 1, n, &o.limits)?;
        ensure_eq!(bell[n], rewrite, "recurrence vs rewriting at n={n}");
        let count = arrow_graph_counts(n, &o.limits)?.total;
        ensure_eq!(
            bell[n],
            BigInt::from(count),
            "recurrence vs enumeration at n={n}"
        );
        if let Some(&published) = PUBLISHED_BELL.get(n - 1) {
            ensure_eq!(bell[n], BigInt::from(published), "tabulated value at n={n}");
        }
    }
    Ok(None)
}

fn stirling_consistency(o: &VerifyOptions) -> Outcome {
    let mut table = stirling_table(o.max_n.max(1))?;
    if o.corrupt_stirling {
        let n = o.max_n.max(1);
        let bumped = table.get(n, 1).cloned().unwrap_or_default() + 1;
        table.set(n, 1, bumped);
    }
    for n in 1..=o.max_n {
        let rewrite = boson::stirling_row(n, &o.limits)?;
        ensure_eq!(
            rewrite.as_slice(),
            table.row(n),
            "rewriting vs recurrence, n={n}"
        );
        let counts = arrow_graph_counts(n, &o.limits)?;
        let by_k: Vec<BigInt> = (1..=n)
            .map(|k| BigInt::from(counts.by_block_count.get(&k).copied().unwrap_or(0)))
            .collect();
        ensure_eq!(
            by_k.as_slice(),
            table.row(n),
            "enumeration vs recurrence, n={n}"
        );
    }
    if o.max_n >= 4 {
        ensure_eq!(table.row_sum(4), BigInt::from(15), "row n=4 sum");
    }
    Ok(None)
}

fn connected_graph_theorem(o: &VerifyOptions) -> Outcome {
    let c = TruncatedEGF::bell(o.max_n).log_series()?;
    for (n, term) in c.counting_terms().iter().enumerate().skip(1) {
        ensure_eq!(*term, Rational::one(), "c({n})");
    }
    let back = c.exp_series()?;
    ensure_eq!(back, TruncatedEGF::bell(o.max_n), "exp(log(A)) round trip");
    Ok(None)
}

/// Random series with small rational coefficients.
pub fn random_series(rng: &mut impl Rng, order: usize) -> TruncatedEGF {
    let coeffs = (0..=order)
        .map(|_| Rational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=4).into()))
        .collect();
    TruncatedEGF::from_coeffs(coeffs).expect("non-empty")
}

/// Random weight spec with small integer weights on sizes 1..=4.
pub fn random_weights(rng: &mut impl Rng) -> WeightSpec {
    let mut w = WeightSpec::constant(int(rng.gen_range(0..=2)));
    for size in 1..=4 {
        if rng.gen_bool(0.6) {
            w = w.with(size, int(rng.gen_range(-2..=3))).expect("size >= 1");
        }
    }
    w
}

fn diamond_product(o: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    for trial in 0..25 {
        let (o1, o2) = (rng.gen_range(0..=o.max_n), rng.gen_range(0..=o.max_n));
        let a1 = random_series(&mut rng, o1);
        let a2 = random_series(&mut rng, o2);
        ensure_eq!(
            a1.apply_diff_operator(&a2),
            a1.diamond_product(&a2),
            "trial {trial}"
        );
    }
    let bell = TruncatedEGF::bell(o.max_n);
    let squares = bell.diamond_product(&bell);
    let b = bell_numbers(o.max_n);
    for (n, bn) in b.iter().enumerate() {
        ensure_eq!(squares.counting_term(n)?, int(bn * bn), "B(n)^2 at n={n}");
    }
    Ok(None)
}

fn model_series_bridge(o: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed ^ 0xb1d9e);
    let order = o.max_n.min(8);
    for trial in 0..10 {
        let v = random_weights(&mut rng);
        let l = random_weights(&mut rng);
        let series = model_series(&v, &l, order, &o.limits)?;
        for n in 0..=order {
            let count = bender_count(n, &v, &l, &o.limits)?;
            ensure_eq!(
                series.counting_term(n)?,
                count,
                "trial {trial}, V={v}, L={l}, n={n}"
            );
            if n <= 7 {
                let pairs = bender_count_pairs(n, &v, &l, &o.limits)?;
                ensure_eq!(pairs, count, "pair enumeration, trial {trial}, n={n}");
            }
        }
    }
    Ok(None)
}

/// Vertex weights reproducing `exp(e^y − 1 + y)`: weight 2 on single lines.
pub fn next_bell_vertex_weights() -> WeightSpec {
    WeightSpec::ones().with(1, int(2)).expect("size >= 1")
}

/// Vertex weights allowing at most two lines per vertex.
pub fn involution_vertex_weights() -> WeightSpec {
    WeightSpec::zeros()
        .with(1, int(1))
        .and_then(|w| w.with(2, int(1)))
        .expect("sizes >= 1")
}

fn numeric_range(o: &VerifyOptions) -> usize {
    o.max_n.min(10)
}

fn bell_times_next_bell(o: &VerifyOptions) -> Outcome {
    let order = o.max_n.min(8);
    let b = bell_numbers(o.max_n + 1);
    let series = model_series(
        &next_bell_vertex_weights(),
        &WeightSpec::ones(),
        order,
        &o.limits,
    )?;
    let bell = TruncatedEGF::bell(order + 1);
    let diamond = bell.diamond_product(&bell.derivative()?);
    for n in 0..=order {
        let expect = int(&b[n] * &b[n + 1]);
        ensure_eq!(series.counting_term(n)?, expect, "graph series at n={n}");
        ensure_eq!(
            diamond.counting_term(n)?,
            expect,
            "diamond product at n={n}"
        );
    }
    for n in 0..=numeric_range(o) {
        let enc = g1_coefficient(n, 80, o.prec)?;
        let expect = int(&b[n] * &b[n + 1]);
        if !enc.encloses(&expect) {
            return Ok(Some(format!(
                "closed form coefficient n={n} misses {expect}"
            )));
        }
    }
    Ok(None)
}

fn bell_times_involution(o: &VerifyOptions) -> Outcome {
    let order = o.max_n.min(8);
    let b = bell_numbers(o.max_n);
    let inv = involution_numbers(o.max_n.max(30));
    let series = model_series(
        &involution_vertex_weights(),
        &WeightSpec::ones(),
        order,
        &o.limits,
    )?;
    for n in 0..=order {
        ensure_eq!(
            series.counting_term(n)?,
            int(&b[n] * &inv[n]),
            "graph series at n={n}"
        );
    }
    for (n, &published) in PUBLISHED_INVOLUTION.iter().enumerate() {
        ensure_eq!(
            inv[n + 1],
            BigInt::from(published),
            "tabulated value at n={}",
            n + 1
        );
    }
    for (n, expect) in inv.iter().enumerate().take(31) {
        ensure_eq!(
            involution_from_hermite(n),
            *expect,
            "Hermite special value at n={n}"
        );
    }
    let hs = hermite_all(30);
    for n in 2..=30 {
        if !hs[n].follows(&hs[n - 1], &hs[n - 2]) {
            return Ok(Some(format!("Hermite recurrence fails at n={n}")));
        }
    }
    for n in 0..=numeric_range(o) {
        let enc = g2_coefficient(n, 80, o.prec)?;
        let expect = int(&b[n] * &inv[n]);
        if !enc.encloses(&expect) {
            return Ok(Some(format!(
                "closed form coefficient n={n} misses {expect}"
            )));
        }
    }
    Ok(None)
}

fn dobinski_check(o: &VerifyOptions) -> Outcome {
    let b = bell_numbers(o.max_n);
    for (n, bn) in b.iter().enumerate() {
        let enc = dobinski(n, 100, o.prec)?;
        if !enc.encloses(&int(bn.clone())) {
            return Ok(Some(format!("n={n}: {} does not enclose {bn}", enc.value)));
        }
    }
    Ok(None)
}

fn generalized_shape(o: &VerifyOptions) -> Outcome {
    // [(a†)^4 a^4]^4 has 32 letters
    let limits = Limits {
        max_word_len: o.limits.max_word_len.max(32),
        ..o.limits
    };
    for r in 1..=4 {
        for s in 1..=r {
            for n in 1..=o.max_n.min(4) {
                let (prefix, row) = boson::generalized_stirling(r, s, n, &limits)?;
                ensure_eq!(prefix, n * (r - s), "prefix exponent r={r} s={s} n={n}");
                if row.entries.keys().any(|&k| k < s || k > n * s) {
                    return Ok(Some(format!(
                        "row support r={r} s={s} n={n}: {:?}",
                        row.entries
                    )));
                }
                let word = BosonWord::normal_monomial(r, s).power(n)?;
                let nf = normal_order_with(&word, Strategy::Leftmost, &limits)?;
                if !fock_check(&word, &nf, word.len() + 2)? {
                    return Ok(Some(format!("representation check r={r} s={s} n={n}")));
                }
            }
        }
    }
    Ok(None)
}

fn q_degeneration(o: &VerifyOptions) -> Outcome {
    let table = stirling_table(o.max_n.max(1))?;
    for n in 1..=o.max_n.min(8) {
        let q_row = boson::q_stirling_row(n, &o.limits)?;
        let at_one: Vec<BigInt> = q_row.iter().map(|p| p.at_one()).collect();
        ensure_eq!(at_one.as_slice(), table.row(n), "n={n}");
    }
    Ok(None)
}

/// Random word of length `1..=max_len`.
pub fn random_word(rng: &mut impl Rng, max_len: usize) -> BosonWord {
    let len = rng.gen_range(1..=max_len);
    BosonWord::new(
        (0..len)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Letter::A
                } else {
                    Letter::Ad
                }
            })
            .collect(),
    )
}

fn confluence(o: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed ^ 0xc0f1);
    for trial in 0..200u64 {
        let word = random_word(&mut rng, 10);
        let leftmost = normal_order_with(&word, Strategy::Leftmost, &o.limits)?;
        let random = normal_order_with(
            &word,
            Strategy::Random(o.seed.wrapping_add(trial)),
            &o.limits,
        )?;
        ensure_eq!(leftmost, random, "word {word}");
        let excess = word.excess();
        if leftmost
            .terms()
            .any(|((j, k), _)| j as isize - k as isize != excess)
        {
            return Ok(Some(format!("excess not conserved for {word}")));
        }
        if leftmost.is_empty() && !word.is_empty() {
            return Ok(Some(format!("empty normal form for {word}")));
        }
    }
    Ok(None)
}
