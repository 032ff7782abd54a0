use std::path::PathBuf;

use phaselock::models::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config{}: {message}", at_line(.line))]
    Config { line: usize, message: String },

    #[error("unknown preset '{0}' (see `phaselock presets`)")]
    UnknownPreset(String),

    #[error("invalid setting: {0}")]
    Invalid(String),

    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", .path.display())]
    Parse { path: PathBuf, source: ParseError },

    #[error("bad input data: {0}")]
    Data(String),

    #[error(transparent)]
    Analysis(#[from] phaselock::Error),
}

fn at_line(line: &usize) -> String {
    if *line > 0 {
        format!(" line {line}")
    } else {
        String::new()
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::UnknownPreset(_) | CliError::Invalid(_) => EXIT_CONFIG,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Data(_) => EXIT_DATA,
            CliError::Analysis(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Analysis(_) => EXIT_DATA,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
