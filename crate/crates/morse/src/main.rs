//! Command-line front end for the Morse / odometer library.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use morse_adic::dyadic::Dyadic;
use morse_adic::morse_map::{a_seq, morse_inverse, morse_on_int, morse_step};
use morse_adic::perms::{self, MorsePerm, OrderKind};
use morse_adic::substitution::{derivative, thue_morse};
use morse_adic::timesub::{build_order, orbit_trace, window_order};
use morse_adic::{stats, verify};

#[derive(Parser)]
#[command(name = "morse", version, about = "Exact arithmetic for the Morse map on the 2-adic integers")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Output format: "text" or "json" (same as --json).
    #[arg(long, global = true)]
    format: Option<String>,
    /// Render order chains with "<|" instead of "\u{25c1}".
    #[arg(long, global = true)]
    ascii: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply the Morse map once.
    Step {
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Apply the inverse Morse map once.
    Inverse {
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Values of the Morse map on a range of integers.
    Table {
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        from: i64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 15)]
        to: i64,
    },
    /// The jump magnitudes a_0 .. a_max.
    Aseq {
        #[arg(long = "max-r", default_value_t = 9)]
        max_r: u64,
    },
    /// First letters of the Thue-Morse word.
    Thue {
        #[arg(long, default_value_t = 32)]
        len: usize,
    },
    /// Digit differentiation of a point.
    Derivative {
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// The level-n Morse permutation.
    Perm {
        #[arg(long)]
        n: u32,
        /// "cycle" or "table".
        #[arg(long, default_value = "cycle")]
        repr: String,
    },
    /// A broken-cycle order of level n.
    Order {
        #[arg(long)]
        n: u32,
        /// "tau" or "taubar".
        #[arg(long, default_value = "tau")]
        kind: String,
    },
    /// Orbit displacements t(k) for |k| <= window.
    Trace {
        #[arg(allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 8)]
        window: u32,
    },
    /// The interval tower of a generic point.
    BuildOrder {
        #[arg(allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Smallest tower interval covering [-K, K], in visit order.
    Window {
        #[arg(allow_hyphen_values = true)]
        point: String,
        #[arg(short = 'K', long = "radius", default_value_t = 8)]
        radius: u64,
    },
    /// Monte Carlo report on the repeat-position laws.
    Stats {
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        #[arg(long, env = "MORSE_SEED", default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
    /// Run the acceptance suite; exits 1 if any check fails.
    Verify {
        #[arg(long, env = "MORSE_SEED", default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
    },
}

const ORDER_CAP: u64 = 1 << 24;

fn parse_point(s: &str) -> Result<Dyadic, ExitCode> {
    Dyadic::from_str(s).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}

fn chain<T: ToString>(seq: &[T], ascii: bool) -> String {
    let sep = if ascii { " <| " } else { " \u{25c1} " };
    seq.iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn emit(json_mode: bool, value: serde_json::Value, text: String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        println!("{text}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(code) => code,
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    let json_mode = match cli.format.as_deref() {
        None | Some("text") => cli.json,
        Some("json") => true,
        Some(other) => {
            eprintln!("error: unknown --format {other:?} (use text or json)");
            return Err(ExitCode::from(2));
        }
    };
    let ascii = cli.ascii;
    match cli.command {
        Cmd::Step { point } => {
            let x = parse_point(&point)?;
            let y = morse_step(&x).map_err(fail)?;
            emit(
                json_mode,
                json!({ "input": x.to_string(), "output": y.to_string() }),
                y.to_string(),
            );
        }
        Cmd::Inverse { point } => {
            let x = parse_point(&point)?;
            let y = morse_inverse(&x).map_err(fail)?;
            emit(
                json_mode,
                json!({ "input": x.to_string(), "output": y.to_string() }),
                y.to_string(),
            );
        }
        Cmd::Table { from, to } => {
            if from > to {
                eprintln!("error: --from must not exceed --to");
                return Err(ExitCode::from(2));
            }
            let values: Vec<String> = (from..=to)
                .map(|n| morse_on_int(&BigInt::from(n)).to_string())
                .collect();
            emit(
                json_mode,
                json!({ "from": from, "to": to, "values": values }),
                values.join(" "),
            );
        }
        Cmd::Aseq { max_r } => {
            if max_r > 100_000 {
                eprintln!("error: --max-r too large");
                return Err(ExitCode::from(2));
            }
            let values: Vec<String> = (0..=max_r).map(|r| a_seq(r).to_string()).collect();
            emit(
                json_mode,
                json!({ "max_r": max_r, "values": values }),
                values.join(" "),
            );
        }
        Cmd::Thue { len } => {
            let w = thue_morse(len).to_string();
            emit(json_mode, json!({ "len": len, "word": w }), w);
        }
        Cmd::Derivative { point } => {
            let x = parse_point(&point)?;
            let y = derivative(&x).map_err(fail)?;
            emit(
                json_mode,
                json!({
                    "input": x.to_string(),
                    "output": y.to_string(),
                    "digits": y.to_digit_string().ok(),
                }),
                y.to_string(),
            );
        }
        Cmd::Perm { n, repr } => {
            if n > perms::MATERIALIZE_MAX {
                eprintln!("error: --n above the materialization bound {}", perms::MATERIALIZE_MAX);
                return Err(ExitCode::from(2));
            }
            let perm = MorsePerm::new(n).map_err(fail)?;
            match repr.as_str() {
                "cycle" => {
                    let mut cycle: Vec<u128> = vec![1 << n];
                    loop {
                        let next = perm.apply(*cycle.last().unwrap()).map_err(fail)?;
                        if next == 1 << n {
                            break;
                        }
                        cycle.push(next);
                    }
                    let text = format!(
                        "({})",
                        cycle.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
                    );
                    emit(json_mode, json!({ "n": n, "cycle": cycle.iter().map(|e| e.to_string()).collect::<Vec<_>>() }), text);
                }
                "table" => {
                    let rows: Vec<(u128, u128)> = perm
                        .domain()
                        .map(|i| Ok((i, perm.apply(i)?)))
                        .collect::<morse_adic::Result<_>>()
                        .map_err(fail)?;
                    let text = rows
                        .iter()
                        .map(|(i, g)| format!("{i} -> {g}"))
                        .collect::<Vec<_>>()
                        .join("\n");
                    emit(
                        json_mode,
                        json!({
                            "n": n,
                            "table": rows.iter().map(|(_, g)| g.to_string()).collect::<Vec<_>>(),
                        }),
                        text,
                    );
                }
                other => {
                    eprintln!("error: unknown --repr {other:?} (use cycle or table)");
                    return Err(ExitCode::from(2));
                }
            }
        }
        Cmd::Order { n, kind } => {
            let kind = match kind.as_str() {
                "tau" => OrderKind::Tau,
                "taubar" => OrderKind::TauBar,
                other => {
                    eprintln!("error: unknown --kind {other:?} (use tau or taubar)");
                    return Err(ExitCode::from(2));
                }
            };
            let order = perms::order_capped(n, kind, ORDER_CAP).map_err(fail)?;
            emit(
                json_mode,
                json!({
                    "n": n,
                    "kind": kind.as_str(),
                    "sequence": order.sequence.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                }),
                chain(&order.sequence, ascii),
            );
        }
        Cmd::Trace { point, window } => {
            let x = parse_point(&point)?;
            let trace = orbit_trace(&x, window).map_err(fail)?;
            let text = trace
                .values()
                .iter()
                .map(|(k, v)| format!("t({k}) = {v}"))
                .collect::<Vec<_>>()
                .join("\n");
            let values: serde_json::Map<String, serde_json::Value> = trace
                .values()
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v.to_string())))
                .collect();
            emit(
                json_mode,
                json!({ "base": x.to_string(), "window": window, "values": values }),
                text,
            );
        }
        Cmd::BuildOrder { point, depth } => {
            let x = parse_point(&point)?;
            if depth == 0 {
                eprintln!("error: --depth must be at least 1");
                return Err(ExitCode::from(2));
            }
            let cons = build_order(&x, depth).map_err(fail)?;
            let mut levels = Vec::new();
            let mut text_lines = Vec::new();
            for (j, level) in cons.levels().iter().enumerate() {
                let order = if level.r <= 16 {
                    Some(cons.level_order(j, ORDER_CAP).map_err(fail)?)
                } else {
                    None
                };
                let mut line = format!(
                    "level {j}: r = {}, eps = {}, interval [{}, {}]",
                    level.r, level.eps, level.lo, level.hi
                );
                if let Some(o) = &order {
                    line.push_str(&format!("\n  {}", chain(&o.sequence, ascii)));
                }
                text_lines.push(line);
                levels.push(json!({
                    "r": level.r,
                    "eps": level.eps,
                    "lo": level.lo.to_string(),
                    "hi": level.hi.to_string(),
                    "order": order.map(|o| o.sequence.iter().map(|e| e.to_string()).collect::<Vec<_>>()),
                }));
            }
            emit(
                json_mode,
                json!({ "base": x.to_string(), "levels": levels }),
                text_lines.join("\n"),
            );
        }
        Cmd::Window { point, radius } => {
            let x = parse_point(&point)?;
            let order = window_order(&x, radius, ORDER_CAP).map_err(fail)?;
            emit(
                json_mode,
                json!({
                    "base": x.to_string(),
                    "lo": order.lo.to_string(),
                    "hi": order.hi.to_string(),
                    "sequence": order.sequence.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
                }),
                chain(&order.sequence, ascii),
            );
        }
        Cmd::Stats { samples, kmax, seed } => {
            if samples < 1 || !(1..=40).contains(&kmax) {
                eprintln!("error: need --samples >= 1 and 1 <= --kmax <= 40");
                return Err(ExitCode::from(2));
            }
            let report = stats::r_distribution(samples, kmax, seed);
            if json_mode {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("samples: {} (aborted {})", report.samples, report.aborted);
                for law in &report.laws {
                    println!("{} ({} observations, max |z| = {:.2}):", law.name, law.observations, law.max_abs_z);
                    for bin in &law.bins {
                        println!(
                            "  k = {:2}: count {:10} freq {:.6} expected {:.6} z {:+.2}",
                            bin.k, bin.count, bin.freq, bin.expected, bin.z
                        );
                    }
                }
                println!("gap correlation z: {:+.2}", report.gap_correlation_z);
            }
        }
        Cmd::Verify { seed } => {
            let results = verify::all_checks(seed);
            let all_pass = results.iter().all(|r| r.pass);
            if json_mode {
                println!("{}", serde_json::to_string_pretty(&results).unwrap());
            } else {
                for r in &results {
                    println!("{}", r.line());
                }
                println!("{}", if all_pass { "all checks passed" } else { "FAILURES present" });
            }
            if !all_pass {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
