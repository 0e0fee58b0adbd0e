mod commands;
mod error;
mod reference;
mod system_file;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use commands::{Command, Session};
use error::CliError;
use system_file::parse_system_file;

/// Exact global residues, normal forms, traces and root counts for
/// polynomial systems.
#[derive(Parser, Debug)]
#[command(name = "globres", version)]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Top,
}

#[derive(Subcommand, Debug)]
enum Top {
    /// Run every check on the built-in reference system.
    ReproduceReference,
    #[command(flatten)]
    System(Command),
}

fn command_name(top: &Top) -> String {
    let debug = match top {
        Top::ReproduceReference => return "reproduce-reference".into(),
        Top::System(c) => format!("{c:?}"),
    };
    let head: String = debug.chars().take_while(|c| c.is_alphanumeric()).collect();
    let mut out = String::new();
    for (i, ch) in head.chars().enumerate() {
        if ch.is_uppercase() && i > 0 {
            out.push('-');
        }
        out.push(ch.to_ascii_lowercase());
    }
    out
}

fn render_text(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 2, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_text(x, indent + 2, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match x {
                    Value::Object(m) => {
                        let line: Vec<String> = m.iter().map(|(k, x)| format!("{k}={}", scalar(x))).collect();
                        out.push_str(&format!("{pad}{}\n", line.join(" ")));
                    }
                    _ => out.push_str(&format!("{pad}{}\n", scalar(x))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(" "),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

struct Finished {
    result: Value,
    timing: Map<String, Value>,
    digest: String,
    cache: Value,
    ok: bool,
}

fn run(cli: &Cli) -> Result<Finished, CliError> {
    match &cli.command {
        Top::ReproduceReference => {
            let (result, timing, ok) = reference::reproduce();
            let digest = reference::reference_file().digest();
            let cache = json!({ "series_cached": globres::residue::cached_series_count().to_string() });
            Ok(Finished {
                result,
                timing,
                digest,
                cache,
                ok,
            })
        }
        Top::System(cmd) => {
            let session = Session::new(parse_system_file(cmd.system())?);
            let out = session.execute(cmd)?;
            Ok(Finished {
                result: out.result,
                timing: out.timing,
                digest: session.digest(),
                cache: session.cache(),
                ok: true,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("warning: {e}");
        }
    }
    let name = command_name(&cli.command);
    let start = Instant::now();
    match run(&cli) {
        Ok(Finished {
            result,
            mut timing,
            digest,
            cache,
            ok,
        }) => {
            timing.insert(
                "total_ms".into(),
                Value::String(start.elapsed().as_millis().to_string()),
            );
            if cli.json {
                let report = json!({
                    "command": name,
                    "system_digest": digest,
                    "result": result,
                    "timing": timing,
                    "cache": cache,
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                let mut out = String::new();
                render_text(&result, 0, &mut out);
                print!("{out}");
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            if cli.json {
                let report = json!({
                    "command": name,
                    "error": { "kind": e.kind(), "message": e.to_string() },
                });
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
