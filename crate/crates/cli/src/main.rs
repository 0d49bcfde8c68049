mod error;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use silting_core::decompose::{ObjId, Registry};
use silting_core::exceptional::{
    braid_apply, certify_by_probe, format_word, hereditary_connectivity_probe, parse_word, silting_to_exceptional,
    ProbeResult,
};
use silting_core::explorer::{bfs, to_dot, to_json, BfsOptions, Directions};
use silting_core::mutation::{bb_tilting, mutation, okuyama_rickard};
use silting_core::silting::{
    compare, gamma, is_presilting, is_tilting, presilting_witness, Certificate, Direction, SiltingObject,
};
use silting_core::Field;

use error::CliError;
use input::{load_registry, parse_field, parse_object, sequence, summand_json, summands, vertex, vertex_list};

#[derive(Parser, Debug)]
#[command(name = "silt", version, about = "Silting objects and their mutation over bound quiver algebras")]
struct Cli {
    /// Presentation file or builtin name (k, a2, a3, kronecker, ab0, dual-numbers).
    #[arg(long, global = true)]
    algebra: Option<String>,
    /// Field characteristic: a prime, or 0/Q for the rationals.
    #[arg(long, global = true, env = "SILT_FIELD")]
    field: Option<String>,
    /// Report errors as JSON on stderr.
    #[arg(long, global = true)]
    json_errors: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Dir {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Dirs {
    Left,
    Right,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Presilting, tilting and certificate report for the sum of the objects.
    Check {
        #[arg(required = true)]
        objects: Vec<String>,
        /// Depth budget of the search for a mutation trail from A.
        #[arg(long, default_value_t = 4)]
        budget: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Irreducible or multiple mutation at a summand class.
    Mutate {
        #[arg(long, default_value = "A")]
        object: String,
        #[arg(long)]
        at: String,
        #[arg(long, value_enum)]
        dir: Dir,
        #[arg(long, default_value_t = 4)]
        budget: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Position of two silting objects in the partial order.
    Compare {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Coordinates of an object on the summand classes of a silting base.
    Gamma {
        #[arg(long)]
        base: String,
        object: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Explore the mutation quiver around an object.
    Quiver {
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long)]
        mod_shift: bool,
        #[arg(long, value_enum, default_value = "left")]
        dir: Dirs,
        #[arg(long, default_value = "A")]
        start: String,
        #[arg(long, default_value_t = 5000)]
        max_nodes: usize,
        #[arg(long, value_enum, default_value = "dot")]
        format: GraphFormat,
    },
    /// Two-term complex attached to an idempotent.
    Or {
        #[arg(long)]
        idempotent: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Tilting complex from the inverse translate of a simple module.
    Bb {
        #[arg(long)]
        vertex: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Exceptional sequences over hereditary algebras.
    Exc {
        #[command(subcommand)]
        command: ExcCommand,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Subcommand, Debug)]
enum ExcCommand {
    /// Apply a braid word to an exceptional sequence (default: the one of A).
    Braid {
        #[arg(long)]
        word: String,
        sequence: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Search for a mutation path between two silting objects.
    Probe {
        a: String,
        b: String,
        #[arg(long, default_value_t = 8)]
        budget: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

struct Ctx {
    algebra: Option<String>,
    field: Option<Field>,
}

impl Ctx {
    fn registry(&self) -> Result<Registry, CliError> {
        load_registry(self.algebra.as_deref(), self.field)
    }
}

fn labels(reg: &Registry, ids: &[ObjId]) -> String {
    if ids.is_empty() {
        return "0".into();
    }
    ids.iter().map(|&s| reg.label(s)).collect::<Vec<_>>().join(" + ")
}

fn summands_json(reg: &Registry, ids: &[ObjId]) -> Value {
    json!(ids.iter().map(|&s| summand_json(reg, s)).collect::<Vec<_>>())
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit(format: Format, text: String, value: Value) {
    match format {
        Format::Text => out(&text),
        Format::Json => out(&format!("{}\n", serde_json::to_string_pretty(&value).unwrap())),
    }
}

fn object_report(reg: &Registry, obj: &SiltingObject) -> (String, Value) {
    let presilting = is_presilting(reg, &obj.summands);
    let tilting = is_tilting(reg, &obj.summands);
    let mut text = format!("summands: {}\n", labels(reg, &obj.summands));
    text += &format!("presilting: {presilting}\n");
    text += &format!("tilting: {tilting}\n");
    text += &format!("classes: {} of {}\n", obj.delta(), reg.algebra().n_vertices());
    text += &format!("certificate: {}\n", obj.certificate);
    let witness = presilting_witness(reg, &obj.summands);
    if let Some(w) = &witness {
        text += &format!("witness: Hom({}, {}[{}]) has dimension {}\n", reg.label(w.src), reg.label(w.dst), w.shift, w.dim);
    }
    let value = json!({
        "summands": summands_json(reg, &obj.summands),
        "presilting": presilting,
        "tilting": tilting,
        "classes": obj.delta(),
        "certificate": obj.certificate,
        "witness": witness,
        "trail": obj.trail,
    });
    (text, value)
}

fn fail_if_failed(obj: &SiltingObject) -> Result<(), CliError> {
    match &obj.certificate {
        Certificate::Failed(r) => Err(CliError::math("NotSilting", r.clone())),
        _ => Ok(()),
    }
}

fn silting_object(reg: &Registry, ids: Vec<ObjId>, budget: usize) -> Result<SiltingObject, CliError> {
    let obj = SiltingObject::new(reg, ids, None);
    Ok(certify_by_probe(reg, &obj, budget)?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let field = cli.field.as_deref().map(parse_field).transpose()?;
    let ctx = Ctx { algebra: cli.algebra, field };
    match cli.command {
        Command::Check { objects, budget, format } => {
            let reg = ctx.registry()?;
            let obj = silting_object(&reg, summands(&reg, &objects)?, budget)?;
            let (text, value) = object_report(&reg, &obj);
            emit(format, text, value);
            fail_if_failed(&obj)
        }
        Command::Mutate { object, at, dir, budget, format } => {
            let reg = ctx.registry()?;
            let obj = silting_object(&reg, summands(&reg, std::slice::from_ref(&object))?, budget)?;
            fail_if_failed(&obj)?;
            let at = summands(&reg, &[at])?;
            let d = match dir {
                Dir::Left => Direction::Left,
                Dir::Right => Direction::Right,
            };
            let mu = mutation(&reg, &obj, &at, d)?;
            let (mut text, mut value) = object_report(&reg, &mu.result);
            text += &format!("new: {}\n", labels(&reg, &mu.new_part));
            if !mu.discarded.is_empty() {
                text += &format!("discarded: {}\n", labels(&reg, &mu.discarded));
            }
            value["new"] = summands_json(&reg, &mu.new_part);
            value["discarded"] = summands_json(&reg, &mu.discarded);
            emit(format, text, value);
            fail_if_failed(&mu.result)
        }
        Command::Compare { a, b, format } => {
            let reg = ctx.registry()?;
            let (m, n) = (summands(&reg, &[a])?, summands(&reg, &[b])?);
            for x in [&m, &n] {
                if !is_presilting(&reg, x) {
                    return Err(CliError::math("NotSilting", format!("{} is not presilting", labels(&reg, x))));
                }
            }
            let r = compare(&reg, &m, &n);
            emit(format, format!("{r}\n"), json!({ "relation": r.to_string() }));
            Ok(())
        }
        Command::Gamma { base, object, format } => {
            let reg = ctx.registry()?;
            let m = summands(&reg, &[base])?;
            if !is_presilting(&reg, &m) {
                return Err(CliError::math("NotSilting", format!("{} is not presilting", labels(&reg, &m))));
            }
            let parts = parse_object(&reg, &object)?;
            let alg = reg.algebra();
            let x = silting_core::complex::direct_sum(alg, &parts.iter().collect::<Vec<_>>());
            let g = gamma(&reg, &m, &x)?;
            let mut classes = m.clone();
            classes.dedup();
            let cl: Vec<String> = classes.iter().map(|&c| reg.label(c)).collect();
            let text = format!("basis: {}\ngamma: {:?}\n", cl.join(", "), g);
            emit(format, text, json!({ "basis": cl, "gamma": g }));
            Ok(())
        }
        Command::Quiver { depth, mod_shift, dir, start, max_nodes, format } => {
            let reg = ctx.registry()?;
            let obj = silting_object(&reg, summands(&reg, &[start])?, 0)?;
            fail_if_failed(&obj)?;
            let directions = match dir {
                Dirs::Left => Directions::Left,
                Dirs::Right => Directions::Right,
                Dirs::Both => Directions::Both,
            };
            let g = bfs(&reg, &obj, &BfsOptions { depth, directions, mod_shift, max_nodes })?;
            match format {
                GraphFormat::Dot => out(&to_dot(&reg, &g)),
                GraphFormat::Json => out(&format!("{}\n", serde_json::to_string_pretty(&to_json(&reg, &g)).unwrap())),
            }
            Ok(())
        }
        Command::Or { idempotent, format } => {
            let reg = ctx.registry()?;
            let e = vertex_list(&reg, &idempotent)?;
            let t = okuyama_rickard(&reg, &e)?;
            let mut text = format!("summands: {}\n", labels(&reg, &t.summands));
            text += &format!("matches mutation: {}\n", t.matches_mutation);
            text += &format!("criterion: {}\n", t.criterion_tilting);
            text += &format!("tilting: {}\n", t.is_tilting);
            let value = json!({
                "vertices": t.vertices.iter().map(|&v| reg.algebra().vertex_label(v)).collect::<Vec<_>>(),
                "summands": summands_json(&reg, &t.summands),
                "matches_mutation": t.matches_mutation,
                "criterion": t.criterion_tilting,
                "tilting": t.is_tilting,
            });
            emit(format, text, value);
            Ok(())
        }
        Command::Bb { vertex: v, format } => {
            let reg = ctx.registry()?;
            let i = vertex(&reg, &v)?;
            let t = bb_tilting(&reg, i)?;
            let mut text = format!("summands: {}\n", labels(&reg, &t.summands));
            text += &format!("tau inverse dims: {:?}\n", t.tau_inverse.dims);
            text += &format!("matches mutation: {}\n", t.matches_mutation);
            text += &format!("tilting: {}\n", t.is_tilting);
            let value = json!({
                "vertex": reg.algebra().vertex_label(t.vertex),
                "summands": summands_json(&reg, &t.summands),
                "tau_inverse_dims": t.tau_inverse.dims,
                "matches_mutation": t.matches_mutation,
                "tilting": t.is_tilting,
            });
            emit(format, text, value);
            Ok(())
        }
        Command::Exc { command: ExcCommand::Braid { word, sequence: specs, format } } => {
            let reg = ctx.registry()?;
            let w = parse_word(&word)?;
            let seq = if specs.is_empty() { silting_to_exceptional(&reg, &reg.regular())? } else { sequence(&reg, &specs)? };
            let out = braid_apply(&reg, &seq, &w)?;
            let text = format!("word: {}\nsequence: {}\n", format_word(&w), out.iter().map(|&s| reg.label(s)).collect::<Vec<_>>().join(", "));
            emit(format, text, json!({ "word": format_word(&w), "sequence": summands_json(&reg, &out) }));
            Ok(())
        }
        Command::Exc { command: ExcCommand::Probe { a, b, budget, format } } => {
            let reg = ctx.registry()?;
            let (m, n) = (summands(&reg, &[a])?, summands(&reg, &[b])?);
            match hereditary_connectivity_probe(&reg, &m, &n, budget)? {
                ProbeResult::Path(steps) => {
                    let mut text = format!("path of length {}\n", steps.len());
                    for s in &steps {
                        text += &format!("{} at {} -> {}\n", s.direction, reg.label(s.at), labels(&reg, &s.to));
                    }
                    let value = json!({
                        "length": steps.len(),
                        "steps": steps.iter().map(|s| json!({
                            "direction": s.direction,
                            "at": reg.label(s.at),
                            "to": summands_json(&reg, &s.to),
                        })).collect::<Vec<_>>(),
                    });
                    emit(format, text, value);
                    Ok(())
                }
                ProbeResult::Exhausted => Err(CliError::math("ProbeExhausted", format!("no path within budget {budget}"))),
            }
        }
        Command::Serve { port } => {
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::input("Io", e.to_string()))?;
            rt.block_on(silting_service::serve(port, ctx.field)).map_err(|e| CliError::input("Io", e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let json_errors = std::env::args().any(|a| a == "--json-errors");
            let err = CliError::input("BadArguments", e.to_string());
            if json_errors {
                eprintln!("{}", err.to_json());
            } else {
                eprint!("{e}");
            }
            return ExitCode::from(2);
        }
    };
    let json_errors = cli.json_errors;
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if json_errors {
                eprintln!("{}", e.to_json());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
