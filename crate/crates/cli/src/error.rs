use std::fmt;

use qknot::ambient::AmbientError;
use qknot::classify::ClassifyError;
use qknot::evolve::EvolveError;
use qknot::hilbert::HilbertError;
use qknot::invariants::InvariantError;
use qknot::mosaic::MosaicError;
use qknot::nodal::NodalError;

/// A failed run. `Usage` exits with 2, everything else with 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain { code: &'static str, message: String },
}

impl CliError {
    pub fn domain(code: &'static str, message: impl Into<String>) -> CliError {
        CliError::Domain {
            code,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> CliError {
        CliError::Usage(message.into())
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain { code, .. } => code,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 1,
        }
    }

    /// `error[<code>]: <message>` on one line.
    pub fn line(&self) -> String {
        let msg = match self {
            CliError::Usage(m) => m,
            CliError::Domain { message, .. } => message,
        };
        let flat: Vec<&str> = msg.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        format!("error[{}]: {}", self.code(), flat.join("; "))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line())
    }
}

macro_rules! domain_from {
    ($($t:ty => $code:literal),* $(,)?) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::domain($code, e.to_string())
            }
        })*
    };
}

domain_from! {
    MosaicError => "mosaic",
    AmbientError => "ambient",
    HilbertError => "hilbert",
    InvariantError => "invariant",
    ClassifyError => "field",
    NodalError => "nodal",
    EvolveError => "evolve",
    std::io::Error => "io",
    serde_json::Error => "json",
}
