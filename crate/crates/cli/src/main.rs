//! `qknot`: command-line front end for mosaics, observables, nodal sets and
//! field evolution. Exit status is 0 on success, 1 on a domain error and 2
//! on a usage error; every failure writes one `error[<code>]: ...` line to
//! stderr.

mod args;
mod cmd;
mod context;
mod error;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};

use args::Cli;
use context::{json, Ctx, RunManifest, DETERMINISM_NOTE};
use error::CliError;

fn main() -> ExitCode {
    let args: Vec<String> = match std::env::args_os().skip(1).map(|a| a.into_string()).collect() {
        Ok(a) => a,
        Err(_) => return fail(&CliError::usage("arguments must be valid UTF-8")),
    };
    match run(args) {
        Ok(code) => code,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.line());
    ExitCode::from(e.exit_code() as u8)
}

/// Splits `--config PATH` off the arguments and prepends the argv stored in
/// that manifest, so later flags override it.
fn merge_config(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or_else(|| CliError::usage("--config needs a manifest path"))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else { return Ok(rest) };
    let text = fs::read_to_string(&path).map_err(|e| CliError::domain("io", format!("{path}: {e}")))?;
    let v: serde_json::Value = serde_json::from_str(&text)?;
    let base = v
        .get("argv")
        .and_then(|a| a.as_array())
        .and_then(|a| a.iter().map(|x| x.as_str().map(String::from)).collect::<Option<Vec<_>>>())
        .ok_or_else(|| CliError::domain("config", format!("{path}: manifest has no argv string list")))?;
    Ok(base.into_iter().chain(rest).collect())
}

fn command() -> clap::Command {
    fn overriding(c: clap::Command) -> clap::Command {
        let names: Vec<String> = c.get_subcommands().map(|s| s.get_name().to_string()).collect();
        names
            .iter()
            .fold(c.args_override_self(true), |c, n| c.mut_subcommand(n, overriding))
    }
    overriding(Cli::command())
}

fn parse(argv: &[String]) -> Result<Result<Cli, ExitCode>, CliError> {
    let matches = command().try_get_matches_from(std::iter::once("qknot".to_string()).chain(argv.iter().cloned()));
    let err = match matches.and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(cli) => return Ok(Ok(cli)),
        Err(e) => e,
    };
    match err.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = err.print();
            Ok(Err(ExitCode::SUCCESS))
        }
        ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            eprintln!("{}", CliError::usage("missing subcommand").line());
            eprint!("{}", err.render());
            Ok(Err(ExitCode::from(2)))
        }
        _ => {
            let rendered = err.render().to_string();
            let mut lines = rendered.lines();
            let first = lines.next().unwrap_or_default().trim_start_matches("error: ").to_string();
            eprintln!("{}", CliError::usage(first).line());
            for l in lines {
                eprintln!("{l}");
            }
            Ok(Err(ExitCode::from(2)))
        }
    }
}

fn run(args: Vec<String>) -> Result<ExitCode, CliError> {
    let argv = merge_config(args)?;
    let cli = match parse(&argv)? {
        Ok(cli) => cli,
        Err(code) => return Ok(code),
    };
    if cli.global.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
            .map_err(|e| CliError::domain("threads", e.to_string()))?;
    }
    let mut ctx = Ctx::new(&cli.global);
    let outcome = cmd::dispatch(&mut ctx, &cli.command)?;

    match &cli.global.out {
        Some(p) => ctx.write_side_output(p, outcome.body.as_bytes())?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(outcome.body.as_bytes())?;
            out.flush()?;
        }
    }

    let manifest_path = cli.global.manifest.clone().or_else(|| {
        cli.global.out.as_ref().map(|o| {
            let mut s = o.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    });
    if let Some(p) = manifest_path {
        let m = RunManifest {
            tool: "qknot",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: cmd::name(&cli.command),
            argv,
            inputs: ctx.inputs.clone(),
            parameters: serde_json::to_value(&cli)?,
            outputs: ctx.outputs.clone(),
            determinism: DETERMINISM_NOTE,
        };
        fs::write(&p, json(&m)?).map_err(|e| CliError::domain("io", format!("{}: {e}", p.display())))?;
    }

    match outcome.failure {
        Some(e) => Ok(fail(&e)),
        None => Ok(ExitCode::SUCCESS),
    }
}
