use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use sha2::{Digest, Sha256};

use qknot::ambient::{MoveTable, OrbitSettings};
use qknot::invariants::{BracketSettings, PlanarDiagram};
use qknot::mosaic::{library, Mosaic};
use qknot::par::Execution;

use crate::args::{Format, Global};
use crate::error::CliError;

pub const DETERMINISM_NOTE: &str = "Outputs are a pure function of argv and the input bytes. \
No clock or random state is read; projection retries follow a fixed perturbation sequence; \
the thread count does not change any output.";

#[derive(Clone, Debug, Serialize)]
pub struct InputRecord {
    pub path: String,
    /// Hex SHA-256 of the file bytes; absent for built-in library inputs.
    pub sha256: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub argv: Vec<String>,
    pub inputs: Vec<InputRecord>,
    pub parameters: serde_json::Value,
    pub outputs: Vec<String>,
    pub determinism: &'static str,
}

/// What a subcommand produced. A report with `failure` set is still
/// written, then the run exits with that error.
pub struct Outcome {
    pub body: String,
    pub failure: Option<CliError>,
}

impl Outcome {
    pub fn ok(body: String) -> Outcome {
        Outcome { body, failure: None }
    }
}

pub struct Ctx {
    pub format: Format,
    pub exec: Execution,
    pub budget: usize,
    pub cap: usize,
    moves: Option<PathBuf>,
    table: Option<Arc<MoveTable>>,
    pub inputs: Vec<InputRecord>,
    pub outputs: Vec<String>,
}

impl Ctx {
    pub fn new(g: &Global) -> Ctx {
        Ctx {
            format: g.format,
            exec: if g.threads == 1 {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
            budget: g.budget,
            cap: g.cap,
            moves: g.moves.clone(),
            table: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn orbit_settings(&self) -> OrbitSettings {
        OrbitSettings {
            budget: self.budget,
            execution: self.exec,
        }
    }

    pub fn bracket_settings(&self) -> BracketSettings {
        BracketSettings {
            cap: self.cap,
            execution: self.exec,
        }
    }

    pub fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::domain("io", format!("{}: {e}", path.display())))?;
        self.inputs.push(InputRecord {
            path: path.display().to_string(),
            sha256: Some(format!("{:x}", Sha256::digest(&bytes))),
        });
        String::from_utf8(bytes).map_err(|_| CliError::domain("io", format!("{}: not UTF-8", path.display())))
    }

    pub fn read_bytes(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::domain("io", format!("{}: {e}", path.display())))?;
        self.inputs.push(InputRecord {
            path: path.display().to_string(),
            sha256: Some(format!("{:x}", Sha256::digest(&bytes))),
        });
        Ok(bytes)
    }

    pub fn table(&mut self) -> Result<Arc<MoveTable>, CliError> {
        if let Some(t) = &self.table {
            return Ok(t.clone());
        }
        let t = match self.moves.clone() {
            Some(p) => MoveTable::from_json(&self.read(&p)?)?,
            None => MoveTable::default_table(),
        };
        let t = Arc::new(t);
        self.table = Some(t.clone());
        Ok(t)
    }

    fn library(&mut self, name: &str) -> Result<Mosaic, CliError> {
        let m = match name.split_once(':') {
            Some(("circle", n)) => {
                let n: usize = n
                    .parse()
                    .map_err(|_| CliError::usage(format!("lib:circle:N needs a lattice size, got {n:?}")))?;
                if n < 2 {
                    return Err(CliError::usage("lib:circle:N needs N >= 2"));
                }
                library::circle_at(n, 0, 0)
            }
            _ => match name {
                "trefoil" => library::trefoil(),
                "figure_eight" => library::figure_eight(),
                "circle" => library::circle_2x2(),
                _ => return Err(CliError::usage(format!("unknown library knot {name:?}"))),
            },
        };
        self.inputs.push(InputRecord {
            path: format!("lib:{name}"),
            sha256: None,
        });
        Ok(m)
    }

    pub fn mosaic(&mut self, source: &str) -> Result<Mosaic, CliError> {
        match source.strip_prefix("lib:") {
            Some(name) => self.library(name),
            None => Ok(Mosaic::parse_any(&self.read(Path::new(source))?)?),
        }
    }

    /// A knot diagram from a mosaic or a PD code.
    pub fn diagram(&mut self, source: &str) -> Result<PlanarDiagram, CliError> {
        if let Some(name) = source.strip_prefix("lib:") {
            let m = self.library(name)?;
            return Ok(PlanarDiagram::from_mosaic(&m)?);
        }
        let text = self.read(Path::new(source))?;
        let t = text.trim_start();
        if t.starts_with("PD[") || t.starts_with("X[") {
            Ok(PlanarDiagram::from_pd_text(&text)?)
        } else {
            Ok(PlanarDiagram::from_mosaic(&Mosaic::parse_any(&text)?)?)
        }
    }

    /// JSON or text, chosen by `--format`.
    pub fn render<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> Result<String, CliError> {
        Ok(match self.format {
            Format::Json => json(value)?,
            Format::Text => text(),
        })
    }

    pub fn write_side_output(&mut self, path: &Path, body: &[u8]) -> Result<(), CliError> {
        fs::write(path, body).map_err(|e| CliError::domain("io", format!("{}: {e}", path.display())))?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
