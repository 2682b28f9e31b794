//! Command-line surface: stable file formats, JSON output with sorted keys,
//! deterministic results.

use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::blocks::centralizer;
use crate::error::{Error, Result};
use crate::logic::{build_phi, check_phi, parse_formula, CheckResult, EmitFormat};
use crate::marked_graph::{build_marked_graph, find_marked_embedding, marked_isomorphic, EeVerdict};
use crate::oracle::ball_enumerate;
use crate::spec::GroupProductSpec;
use crate::witness::witness_reduction;
use crate::words::{parse_word, ElementOrder, GroupContext, NormalForm};

#[derive(Parser)]
#[command(name = "graphprod", version, about = "Graph products of finite abelian groups")]
struct Cli {
    /// Pretty-print JSON output
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormulaFormat {
    Sexpr,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Build and print the marked graph of a spec
    Graph {
        spec: PathBuf,
        /// Emit DOT text instead of JSON
        #[arg(long)]
        dot: bool,
    },
    /// Canonical normal form of a word
    Normalize {
        spec: PathBuf,
        /// Word text; `-` or omitted reads standard input
        word: Option<String>,
    },
    /// Order of an element
    Order {
        spec: PathBuf,
        word: Option<String>,
    },
    /// Block decomposition of a cyclically reduced word
    Blocks {
        spec: PathBuf,
        word: Option<String>,
    },
    /// Centralizer description of a cyclically reduced word
    Centralizer {
        spec: PathBuf,
        word: Option<String>,
    },
    /// Marked-graph embedding from one spec into another
    Embed {
        src: PathBuf,
        dst: PathBuf,
        /// Require non-edges to map to non-edges
        #[arg(long)]
        induced: bool,
    },
    /// Marked-graph isomorphism between two specs
    Iso {
        a: PathBuf,
        b: PathBuf,
    },
    /// Decide elementary equivalence of two graph products
    Ee {
        a: PathBuf,
        b: PathBuf,
    },
    /// Emit the characteristic sentence of a spec
    PhiEmit {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "sexpr")]
        format: FormulaFormat,
    },
    /// Check the characteristic sentence of one spec against another
    PhiCheck {
        src: PathBuf,
        target: PathBuf,
        /// Conjugator radius for the bounded condition-(3) check
        #[arg(long, default_value_t = 3)]
        radius: usize,
    },
    /// Reduce witness words to single-syllable witnesses
    WitnessReduce {
        src: PathBuf,
        target: PathBuf,
        /// Witness words; omitted reads one word per line from standard input
        words: Vec<String>,
    },
    /// Enumerate the ball of a given radius
    Ball {
        spec: PathBuf,
        radius: usize,
        /// Print only the element count
        #[arg(long)]
        count: bool,
    },
    /// Parse a formula and echo its canonical s-expression
    #[command(hide = true)]
    ParseFormula {
        text: Option<String>,
    },
}

fn read_stdin() -> Result<String> {
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| Error::Precondition(format!("reading standard input: {e}")))?;
    Ok(buf)
}

fn word_arg(arg: Option<String>) -> Result<String> {
    match arg {
        Some(w) if w != "-" => Ok(w),
        _ => read_stdin(),
    }
}

fn load_ctx(path: &PathBuf) -> Result<GroupContext> {
    Ok(GroupContext::new(build_marked_graph(&GroupProductSpec::from_path(path)?)?))
}

fn reduced_word(ctx: &GroupContext, text: &str) -> Result<NormalForm> {
    let w = parse_word(ctx, text)?;
    if !w.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced(w.render()));
    }
    Ok(w)
}

fn blocks_json(core: &NormalForm) -> Result<Value> {
    let desc = centralizer(core)?;
    let decomp = crate::blocks::block_decomposition(core)?;
    let g = core.ctx().graph();
    let blocks: Vec<Value> = decomp
        .blocks
        .iter()
        .map(|b| {
            json!({
                "kind": match b.kind {
                    crate::blocks::BlockKind::Singular => "singular",
                    crate::blocks::BlockKind::Regular => "regular",
                },
                "word": b.word.render(),
            })
        })
        .collect();
    Ok(json!({
        "blocks": blocks,
        "link": desc.link_vertices.iter().map(|&v| g.vertex(v).id.clone()).collect::<Vec<_>>(),
        "vertex_factors": desc.vertex_factors.iter().map(|&v| g.vertex(v).id.clone()).collect::<Vec<_>>(),
    }))
}

fn map_json(pairs: &[(String, String)]) -> Value {
    let mut obj = serde_json::Map::new();
    for (s, d) in pairs {
        obj.insert(s.clone(), Value::String(d.clone()));
    }
    Value::Object(obj)
}

enum Output {
    Json(Value),
    Text(String),
}

fn execute(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Graph { spec, dot } => {
            let g = build_marked_graph(&GroupProductSpec::from_path(&spec)?)?;
            if dot {
                Ok(Output::Text(g.to_dot()))
            } else {
                Ok(Output::Json(g.to_json()))
            }
        }
        Command::Normalize { spec, word } => {
            let ctx = load_ctx(&spec)?;
            let w = parse_word(&ctx, &word_arg(word)?)?;
            Ok(Output::Json(json!({ "word": w.render() })))
        }
        Command::Order { spec, word } => {
            let ctx = load_ctx(&spec)?;
            let w = parse_word(&ctx, &word_arg(word)?)?;
            let order = match w.order_of() {
                ElementOrder::Finite(n) => json!(n),
                ElementOrder::Infinite => json!("infinite"),
            };
            Ok(Output::Json(json!({ "order": order })))
        }
        Command::Blocks { spec, word } | Command::Centralizer { spec, word } => {
            let ctx = load_ctx(&spec)?;
            let core = reduced_word(&ctx, &word_arg(word)?)?;
            Ok(Output::Json(blocks_json(&core)?))
        }
        Command::Embed { src, dst, induced } => {
            let gs = build_marked_graph(&GroupProductSpec::from_path(&src)?)?;
            let gd = build_marked_graph(&GroupProductSpec::from_path(&dst)?)?;
            match find_marked_embedding(&gs, &gd, induced) {
                Some(e) => Ok(Output::Json(json!({
                    "embeds": true,
                    "map": map_json(&e.as_id_pairs(&gs, &gd)),
                }))),
                None => Ok(Output::Json(json!({ "embeds": false, "map": Value::Null }))),
            }
        }
        Command::Iso { a, b } => {
            let ga = build_marked_graph(&GroupProductSpec::from_path(&a)?)?;
            let gb = build_marked_graph(&GroupProductSpec::from_path(&b)?)?;
            match marked_isomorphic(&ga, &gb) {
                Some(e) => Ok(Output::Json(json!({
                    "isomorphic": true,
                    "map": map_json(&e.as_id_pairs(&ga, &gb)),
                }))),
                None => Ok(Output::Json(json!({ "isomorphic": false, "map": Value::Null }))),
            }
        }
        Command::Ee { a, b } => {
            let sa = GroupProductSpec::from_path(&a)?;
            let sb = GroupProductSpec::from_path(&b)?;
            match crate::marked_graph::decide_elementary_equivalence(&sa, &sb)? {
                EeVerdict::Equivalent(pairs) => Ok(Output::Json(json!({
                    "equivalent": true,
                    "isomorphism": map_json(&pairs),
                }))),
                EeVerdict::NotEquivalent(witness) => Ok(Output::Json(json!({
                    "equivalent": false,
                    "witness": serde_json::to_value(&witness)
                        .map_err(|e| Error::Precondition(e.to_string()))?,
                }))),
            }
        }
        Command::PhiEmit { spec, format } => {
            let g = build_marked_graph(&GroupProductSpec::from_path(&spec)?)?;
            let phi = build_phi(&g)?;
            let format = match format {
                FormulaFormat::Sexpr => EmitFormat::Sexpr,
                FormulaFormat::Pretty => EmitFormat::Pretty,
            };
            Ok(Output::Text(phi.emit(format)))
        }
        Command::PhiCheck { src, target, radius } => {
            let g = build_marked_graph(&GroupProductSpec::from_path(&src)?)?;
            let phi = build_phi(&g)?;
            let target = GroupProductSpec::from_path(&target)?;
            let result = check_phi(&phi, &target, radius)?;
            let words = |ws: &[NormalForm]| -> Vec<String> { ws.iter().map(NormalForm::render).collect() };
            Ok(Output::Json(match result {
                CheckResult::CertifiedTrue { witnesses } => {
                    json!({ "result": "certified-true", "witnesses": words(&witnesses) })
                }
                CheckResult::CertifiedFalse { reason } => {
                    json!({ "result": "certified-false", "reason": reason })
                }
                CheckResult::NoCounterexample { witnesses, conjugator_radius } => json!({
                    "result": "no-counterexample",
                    "witnesses": words(&witnesses),
                    "radius": conjugator_radius,
                }),
                CheckResult::NoWitnessFound { description } => {
                    json!({ "result": "no-witness-found", "description": description })
                }
            }))
        }
        Command::WitnessReduce { src, target, words } => {
            let source = build_marked_graph(&GroupProductSpec::from_path(&src)?)?;
            let ctx = load_ctx(&target)?;
            let texts: Vec<String> = if words.is_empty() {
                read_stdin()?.lines().map(str::to_string).filter(|l| !l.trim().is_empty()).collect()
            } else {
                words
            };
            let tuple: Vec<NormalForm> = texts
                .iter()
                .map(|t| parse_word(&ctx, t))
                .collect::<Result<_>>()?;
            let red = witness_reduction(&tuple, &source)?;
            Ok(Output::Json(json!({
                "h": red.h.iter().map(NormalForm::render).collect::<Vec<_>>(),
                "matrix": red.matrix.entries,
                "transversal": red.transversal.columns,
                "diagnostics": red.diagnostics,
            })))
        }
        Command::Ball { spec, radius, count } => {
            let ctx = load_ctx(&spec)?;
            let ball = ball_enumerate(&ctx, radius)?;
            if count {
                Ok(Output::Json(json!({ "count": ball.elements.len(), "radius": radius })))
            } else {
                Ok(Output::Json(json!({
                    "elements": ball.elements.iter().map(NormalForm::render).collect::<Vec<_>>(),
                    "radius": radius,
                })))
            }
        }
        Command::ParseFormula { text } => {
            let f = parse_formula(&word_arg(text)?)?;
            Ok(Output::Text(crate::logic::emit_sexpr(&f)))
        }
    }
}

/// Run the CLI: exit 0 on success, 1 on domain errors (with a JSON error
/// object), 2 on usage errors (via the argument parser).
pub fn run() -> i32 {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(Output::Json(value)) => {
            let text = if cli.pretty {
                serde_json::to_string_pretty(&value).expect("serializable value")
            } else {
                serde_json::to_string(&value).expect("serializable value")
            };
            println!("{text}");
            0
        }
        Ok(Output::Text(text)) => {
            println!("{}", text.trim_end());
            0
        }
        Err(e) => {
            let obj = json!({ "error": e.code(), "message": e.to_string() });
            println!("{}", serde_json::to_string(&obj).expect("serializable error"));
            1
        }
    }
}
