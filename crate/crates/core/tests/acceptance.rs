//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed. All comparisons are exact unless a numeric
//! tolerance is stated.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bosonkit::boson::{
    self, fock_check, normal_order_with, q_stirling_row, stirling_row, BosonWord, Strategy,
};
use bosonkit::egf::TruncatedEGF;
use bosonkit::graph_enum::{
    arrow_graph_counts, bender_count, bender_count_pairs, model_series, WeightSpec,
};
use bosonkit::sequences::{
    bell, bell_numbers, dobinski, g1_coefficient, g2_coefficient, involution,
    involution_from_hermite, involution_numbers, stirling_table,
};
use bosonkit::verify::{
    involution_vertex_weights, next_bell_vertex_weights, random_series, random_weights, random_word,
};
use bosonkit::{Limits, Rational};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn int(x: impl Into<BigInt>) -> Rational {
    Rational::from_integer(x.into())
}

/// 10⁻ᵉ as an exact rational.
fn ten_to_minus(e: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10).pow(e))
}

const PUBLISHED_BELL: [u64; 7] = [1, 2, 5, 15, 52, 203, 877];

fn bell_four_way() -> Outcome {
    let lim = Limits::default();
    let rec = bell_numbers(12);
    // exp(e^x - 1) by composition, independent of the exp recurrence
    let inner = TruncatedEGF::exp_x(12).sub(&TruncatedEGF::one(12));
    let egf = TruncatedEGF::exp_x(12)
        .compose(&inner)
        .map_err(|e| e.to_string())?;
    for n in 1..=12 {
        let via_egf = egf.counting_term(n).map_err(|e| e.to_string())?;
        let via_rewrite = boson::bell_rs(1, 1, n, &lim).map_err(|e| e.to_string())?;
        let via_enum = arrow_graph_counts(n, &lim)
            .map_err(|e| e.to_string())?
            .total;
        check!(
            int(rec[n].clone()) == via_egf,
            "n={n}: recurrence {} vs EGF {via_egf}",
            rec[n]
        );
        check!(
            rec[n] == via_rewrite,
            "n={n}: recurrence vs rewriting {via_rewrite}"
        );
        check!(
            rec[n] == BigInt::from(via_enum),
            "n={n}: recurrence vs enumeration {via_enum}"
        );
        if n <= 7 {
            check!(
                rec[n] == BigInt::from(PUBLISHED_BELL[n - 1]),
                "n={n}: published value"
            );
        }
    }
    Ok(())
}

fn stirling_three_way() -> Outcome {
    let lim = Limits::default();
    let table = stirling_table(12).map_err(|e| e.to_string())?;
    for n in 1..=12 {
        let rewrite = stirling_row(n, &lim).map_err(|e| e.to_string())?;
        let counts = arrow_graph_counts(n, &lim).map_err(|e| e.to_string())?;
        let by_k: Vec<BigInt> = (1..=n)
            .map(|k| BigInt::from(*counts.by_block_count.get(&k).unwrap_or(&0)))
            .collect();
        check!(
            rewrite.as_slice() == table.row(n),
            "n={n}: rewriting vs recurrence"
        );
        check!(
            by_k.as_slice() == table.row(n),
            "n={n}: enumeration vs recurrence"
        );
    }
    check!(
        table.row_sum(4) == BigInt::from(15),
        "row 4 sums to {}",
        table.row_sum(4)
    );
    Ok(())
}

fn connected_graph_theorem() -> Outcome {
    let c = TruncatedEGF::bell(10)
        .log_series()
        .map_err(|e| e.to_string())?;
    check!(c.order() == 10, "order {}", c.order());
    for n in 1..=10 {
        let term = c.counting_term(n).map_err(|e| e.to_string())?;
        check!(term == Rational::one(), "c({n}) = {term}");
    }
    Ok(())
}

fn operator_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..100 {
        let (o1, o2) = (rng.gen_range(0..=10), rng.gen_range(0..=10));
        let a1 = random_series(&mut rng, o1);
        let a2 = random_series(&mut rng, o2);
        check!(
            a1.apply_diff_operator(&a2) == a1.diamond_product(&a2),
            "trial {trial}: {a1:?} vs {a2:?}"
        );
    }
    Ok(())
}

fn model_series_bridge() -> Outcome {
    let lim = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..50 {
        let v = random_weights(&mut rng);
        let l = random_weights(&mut rng);
        let series = model_series(&v, &l, 8, &lim).map_err(|e| e.to_string())?;
        for n in 0..=8 {
            let count = bender_count(n, &v, &l, &lim).map_err(|e| e.to_string())?;
            let term = series.counting_term(n).map_err(|e| e.to_string())?;
            check!(
                term == count,
                "trial {trial} V={v} L={l} n={n}: {term} vs {count}"
            );
            if n <= 7 {
                let pairs = bender_count_pairs(n, &v, &l, &lim).map_err(|e| e.to_string())?;
                check!(
                    pairs == count,
                    "trial {trial} n={n}: pair enumeration {pairs} vs {count}"
                );
            }
        }
    }
    Ok(())
}

fn example_bell_next_bell() -> Outcome {
    let start = Instant::now();
    let lim = Limits::default();
    let b = bell_numbers(11);
    let series = model_series(&next_bell_vertex_weights(), &WeightSpec::ones(), 8, &lim)
        .map_err(|e| e.to_string())?;
    for n in 0..=8 {
        let expect = int(&b[n] * &b[n + 1]);
        check!(
            series.counting_term(n).unwrap() == expect,
            "graph series n={n}"
        );
        let direct = bender_count(n, &next_bell_vertex_weights(), &WeightSpec::ones(), &lim)
            .map_err(|e| e.to_string())?;
        check!(direct == expect, "enumeration n={n}");
    }
    for n in 0..=10 {
        let enc = g1_coefficient(n, 80, 256).map_err(|e| e.to_string())?;
        let expect = int(&b[n] * &b[n + 1]);
        check!(
            enc.encloses(&expect),
            "closed form n={n}: {} misses {expect}",
            enc.value
        );
        check!(
            enc.tail_bound.to_rational() < ten_to_minus(20),
            "closed form n={n}: bound {} not below 1e-20",
            enc.tail_bound.to_sci_upper(4)
        );
    }
    let elapsed = start.elapsed();
    check!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(())
}

fn example_bell_involution() -> Outcome {
    let lim = Limits::default();
    let b = bell_numbers(10);
    let inv = involution_numbers(30);
    let series = model_series(&involution_vertex_weights(), &WeightSpec::ones(), 8, &lim)
        .map_err(|e| e.to_string())?;
    for n in 0..=8 {
        let expect = int(&b[n] * &inv[n]);
        check!(
            series.counting_term(n).unwrap() == expect,
            "graph series n={n}"
        );
    }
    for (n, value) in inv.iter().enumerate() {
        check!(
            &involution_from_hermite(n) == value,
            "Hermite special value n={n}"
        );
    }
    for n in 0..=10 {
        let enc = g2_coefficient(n, 80, 256).map_err(|e| e.to_string())?;
        let expect = int(&b[n] * &inv[n]);
        check!(
            enc.encloses(&expect),
            "closed form n={n}: {} misses {expect}",
            enc.value
        );
        check!(
            enc.tail_bound.to_rational() < ten_to_minus(20),
            "closed form n={n}: bound"
        );
    }
    check!(involution(6) == BigInt::from(76), "I(6)");
    Ok(())
}

fn dobinski_enclosure() -> Outcome {
    for n in 0..=15 {
        let enc = dobinski(n, 100, 256).map_err(|e| e.to_string())?;
        let b = int(bell(n));
        check!(enc.encloses(&b), "n={n}: {} misses {b}", enc.value);
        check!(
            enc.tail_bound.to_rational() < ten_to_minus(20),
            "n={n}: bound too large"
        );
    }
    Ok(())
}

fn generalized_structure() -> Outcome {
    // [(a†)^4 a^4]^4 is 32 letters, above the default cap
    let lim = Limits {
        max_word_len: 32,
        ..Limits::default()
    };
    for r in 1..=4 {
        for s in 1..=r {
            for n in 1..=4 {
                let (prefix, row) =
                    boson::generalized_stirling(r, s, n, &lim).map_err(|e| e.to_string())?;
                check!(prefix == n * (r - s), "r={r} s={s} n={n}: prefix {prefix}");
                check!(
                    row.entries.keys().all(|&k| s <= k && k <= n * s),
                    "r={r} s={s} n={n}: support {:?}",
                    row.entries.keys().collect::<Vec<_>>()
                );
                let word = BosonWord::normal_monomial(r, s).power(n).unwrap();
                let nf = normal_order_with(&word, Strategy::Leftmost, &lim)
                    .map_err(|e| e.to_string())?;
                let ok = fock_check(&word, &nf, word.len() + 2).map_err(|e| e.to_string())?;
                check!(ok, "r={r} s={s} n={n}: representation check");
            }
        }
    }
    Ok(())
}

fn q_degeneration_and_confluence() -> Outcome {
    let lim = Limits::default();
    let table = stirling_table(8).map_err(|e| e.to_string())?;
    for n in 1..=8 {
        let at_one: Vec<BigInt> = q_stirling_row(n, &lim)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|p| p.at_one())
            .collect();
        check!(
            at_one.as_slice() == table.row(n),
            "n={n}: q=1 specialization"
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for trial in 0..200u64 {
        let word = random_word(&mut rng, 10);
        let reference =
            normal_order_with(&word, Strategy::Leftmost, &lim).map_err(|e| e.to_string())?;
        let other =
            normal_order_with(&word, Strategy::Random(trial), &lim).map_err(|e| e.to_string())?;
        check!(reference == other, "trial {trial}: {word} not confluent");
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 Bell four-way agreement (n<=12)", bell_four_way),
        ("2 Stirling three-way agreement (n<=12)", stirling_three_way),
        (
            "3 connected graph theorem: c(n)=1 (order 10)",
            connected_graph_theorem,
        ),
        (
            "4 operator form = pointwise product (100 pairs)",
            operator_form,
        ),
        (
            "5 line-graph EGF = brute force (50 weight pairs)",
            model_series_bridge,
        ),
        (
            "6 B(n)B(n+1) graphs and closed form (<1e-20)",
            example_bell_next_bell,
        ),
        (
            "7 B(n)I(n) graphs, Hermite values, closed form",
            example_bell_involution,
        ),
        (
            "8 Dobinski enclosure of B(n), n<=15 (<1e-20)",
            dobinski_enclosure,
        ),
        (
            "9 generalized Stirling shape + representation",
            generalized_structure,
        ),
        (
            "10 q -> 1 degeneration and confluence (200)",
            q_degeneration_and_confluence,
        ),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        let start = Instant::now();
        match criterion() {
            Ok(()) => println!("PASS  {name}  [{:.2?}]", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
