use std::fmt::Write as _;

use num_bigint::BigInt;
use serde_json::{json, Value};

use bosonkit::boson::{normal_order_with, parse_word, q_stirling_row, NormalForm, Strategy};
use bosonkit::graph_enum::{
    bender_count, model_series, set_partitions, weighted_partition_sum, WeightSpec,
};
use bosonkit::qpoly::QPoly;
use bosonkit::sequences::{bell_numbers, involution_numbers, stirling_table};
use bosonkit::verify::{self, VerifyOptions};
use bosonkit::{boson, Rational};

use crate::{CliError, Format, SeqName, Settings};

const DEFAULT_MAX_N: usize = 10;

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(T::to_string).collect()
}

/// One-dimensional integer table starting at index `start`.
fn emit_sequence(
    format: Format,
    name: &str,
    start: usize,
    values: &[BigInt],
    extra: Value,
) -> String {
    match format {
        Format::Plain => format!("{}\n", join(values)),
        Format::Json => {
            let mut v = json!({ "sequence": name, "start": start, "values": strings(values) });
            if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
                map.extend(more);
            }
            json_text(&v)
        }
        Format::Csv => {
            let mut out = String::from("n,value\n");
            for (i, x) in values.iter().enumerate() {
                let _ = writeln!(out, "{},{x}", start + i);
            }
            out
        }
    }
}

fn qpoly_coeffs(p: &QPoly) -> Vec<String> {
    strings(p.coeffs())
}

pub fn seq(
    settings: &Settings,
    name: SeqName,
    max_n: Option<usize>,
    r: Option<usize>,
    s: Option<usize>,
) -> Result<String, CliError> {
    let max_n = settings.max_n(max_n, DEFAULT_MAX_N)?;
    if (r.is_some() || s.is_some()) && name != SeqName::BellRs {
        return Err(CliError::Usage("--r and --s only apply to bell-rs".into()));
    }
    let format = settings.format;
    match name {
        SeqName::Bell => Ok(emit_sequence(
            format,
            "bell",
            0,
            &bell_numbers(max_n),
            json!({}),
        )),
        SeqName::Involution => Ok(emit_sequence(
            format,
            "involution",
            0,
            &involution_numbers(max_n),
            json!({}),
        )),
        SeqName::BellRs => {
            let (r, s) = match (r, s) {
                (Some(r), Some(s)) => (r, s),
                _ => return Err(CliError::Usage("bell-rs needs --r and --s".into())),
            };
            if s < 1 || r < s {
                return Err(CliError::Usage(format!(
                    "bell-rs needs r >= s >= 1, got r={r}, s={s}"
                )));
            }
            let values = (1..=max_n)
                .map(|n| boson::bell_rs(r, s, n, &settings.limits))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(emit_sequence(
                format,
                "bell-rs",
                1,
                &values,
                json!({ "r": r, "s": s }),
            ))
        }
        SeqName::Stirling => {
            if max_n < 1 {
                return Err(CliError::Usage("stirling needs --max-n >= 1".into()));
            }
            let table = stirling_table(max_n)?;
            Ok(match format {
                Format::Plain => (1..=max_n)
                    .map(|n| format!("{}\n", join(table.row(n))))
                    .collect(),
                Format::Json => json_text(&json!({
                    "sequence": "stirling",
                    "rows": (1..=max_n)
                        .map(|n| json!({ "n": n, "values": strings(table.row(n)) }))
                        .collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut out = String::from("n,k,value\n");
                    for n in 1..=max_n {
                        for (i, v) in table.row(n).iter().enumerate() {
                            let _ = writeln!(out, "{n},{},{v}", i + 1);
                        }
                    }
                    out
                }
            })
        }
        SeqName::QStirling => {
            if max_n < 1 {
                return Err(CliError::Usage("q-stirling needs --max-n >= 1".into()));
            }
            let rows = (1..=max_n)
                .map(|n| q_stirling_row(n, &settings.limits))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(match format {
                Format::Plain => rows
                    .iter()
                    .map(|row| format!("{}\n", strings(row).join("; ")))
                    .collect(),
                Format::Json => json_text(&json!({
                    "sequence": "q-stirling",
                    "rows": rows
                        .iter()
                        .enumerate()
                        .map(|(i, row)| json!({
                            "n": i + 1,
                            "values": row.iter().map(qpoly_coeffs).collect::<Vec<_>>(),
                        }))
                        .collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    let mut out = String::from("n,k,degree,coeff\n");
                    for (i, row) in rows.iter().enumerate() {
                        for (k, p) in row.iter().enumerate() {
                            for (d, c) in p.coeffs().iter().enumerate() {
                                let _ = writeln!(out, "{},{},{d},{c}", i + 1, k + 1);
                            }
                        }
                    }
                    out
                }
            })
        }
    }
}

pub fn normal_order(settings: &Settings, expr: &str, q_mode: bool) -> Result<String, CliError> {
    let word = parse_word(expr)?;
    let nf = normal_order_with(&word, Strategy::Leftmost, &settings.limits)?;
    let nf = if q_mode { nf } else { nf.specialize_q_one() };
    Ok(match settings.format {
        Format::Plain => format!("{nf}\n"),
        Format::Json => format!("{}\n", nf.to_json()),
        Format::Csv => normal_form_csv(&nf),
    })
}

fn normal_form_csv(nf: &NormalForm) -> String {
    let mut out = String::from("j,k,degree,coeff\n");
    for ((j, k), c) in nf.terms() {
        for (d, x) in c.coeffs().iter().enumerate() {
            if x != &BigInt::from(0) {
                let _ = writeln!(out, "{j},{k},{d},{x}");
            }
        }
    }
    out
}

pub fn graphs(
    settings: &Settings,
    lines: usize,
    vertex: &str,
    origin: &str,
    series: Option<usize>,
) -> Result<String, CliError> {
    let v: WeightSpec = vertex.parse()?;
    let l: WeightSpec = origin.parse()?;
    let limits = &settings.limits;
    let count = bender_count(lines, &v, &l, limits)?;
    let origin_factor = weighted_partition_sum(lines, &l, limits)?;
    let vertex_factor = weighted_partition_sum(lines, &v, limits)?;
    let terms: Option<Vec<Rational>> = match series {
        Some(order) => Some(model_series(&v, &l, order, limits)?.counting_terms()),
        None => None,
    };
    Ok(match settings.format {
        Format::Plain => {
            let mut out = format!("{count}\n");
            let _ = writeln!(out, "origin factor: {origin_factor}");
            let _ = writeln!(out, "vertex factor: {vertex_factor}");
            if let Some(t) = &terms {
                let _ = writeln!(out, "series: {}", join(t));
            }
            out
        }
        Format::Json => {
            let mut v = json!({
                "lines": lines,
                "V": v.to_string(),
                "L": l.to_string(),
                "count": count.to_string(),
                "origin_factor": origin_factor.to_string(),
                "vertex_factor": vertex_factor.to_string(),
            });
            if let Some(t) = &terms {
                v["series"] = json!(strings(t));
            }
            json_text(&v)
        }
        Format::Csv => {
            let mut out = String::from("key,value\n");
            let _ = writeln!(out, "count,{count}");
            let _ = writeln!(out, "origin_factor,{origin_factor}");
            let _ = writeln!(out, "vertex_factor,{vertex_factor}");
            if let Some(t) = &terms {
                for (n, x) in t.iter().enumerate() {
                    let _ = writeln!(out, "series_{n},{x}");
                }
            }
            out
        }
    })
}

pub fn partitions(settings: &Settings, n: usize) -> Result<String, CliError> {
    let parts = set_partitions(n, &settings.limits)?;
    Ok(match settings.format {
        Format::Plain => parts.map(|p| format!("{p}\n")).collect(),
        Format::Json => json_text(&json!({
            "n": n,
            "partitions": parts.map(|p| p.to_string()).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("rgs,blocks\n");
            for p in parts {
                let _ = writeln!(out, "{p},{}", p.block_count());
            }
            out
        }
    })
}

pub fn verify(
    settings: &Settings,
    max_n: Option<usize>,
    prec: Option<u32>,
    corrupt_stirling: bool,
) -> Result<String, CliError> {
    let opts = VerifyOptions {
        max_n: settings.max_n(max_n, VerifyOptions::default().max_n)?,
        prec: settings.prec(prec)?,
        limits: settings.limits,
        corrupt_stirling,
        ..VerifyOptions::default()
    };
    let report = verify::run(&opts)?;
    let output = match settings.format {
        Format::Plain => format!("{report}\n"),
        Format::Json => json_text(&json!({
            "max_n": opts.max_n,
            "prec_bits": opts.prec,
            "passed": report.all_passed(),
            "checks": report.checks.iter().map(|c| json!({
                "name": c.name,
                "identity": c.identity,
                "passed": c.passed(),
                "failure": c.failure,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut out = String::from("name,passed\n");
            for c in &report.checks {
                let _ = writeln!(out, "{},{}", c.name, c.passed());
            }
            out
        }
    };
    if report.all_passed() {
        Ok(output)
    } else {
        Err(CliError::Verification {
            output,
            failed: report.failed().map(|c| c.name.to_string()).collect(),
        })
    }
}
