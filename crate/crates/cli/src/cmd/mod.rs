pub mod evolve;
pub mod field;
pub mod mosaic;
pub mod observable;

use crate::args::Command;
use crate::context::{Ctx, Outcome};
use crate::error::CliError;

pub fn dispatch(ctx: &mut Ctx, cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Mosaic(c) => mosaic::run(ctx, c),
        Command::Observable(c) => observable::run(ctx, c),
        Command::Wirtinger(k) => observable::wirtinger_cmd(ctx, k),
        Command::Field(c) => field::run(ctx, c),
        Command::Evolve(c) => evolve::run(ctx, c),
    }
}

/// Space-separated subcommand path, e.g. `field verify`.
pub fn name(cmd: &Command) -> String {
    let leaf = |v: serde_json::Value| match v {
        serde_json::Value::Object(m) => m.keys().next().cloned().unwrap_or_default(),
        serde_json::Value::String(s) => s,
        _ => String::new(),
    };
    match cmd {
        Command::Mosaic(c) => format!("mosaic {}", leaf(serde_json::to_value(c).unwrap_or_default())),
        Command::Observable(c) => format!("observable {}", leaf(serde_json::to_value(c).unwrap_or_default())),
        Command::Wirtinger(_) => "wirtinger".into(),
        Command::Field(c) => format!("field {}", leaf(serde_json::to_value(c).unwrap_or_default())),
        Command::Evolve(c) => format!("evolve {}", leaf(serde_json::to_value(c).unwrap_or_default())),
    }
}
