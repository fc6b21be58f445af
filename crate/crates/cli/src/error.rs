use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in '{field}': {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Numerical(#[from] kgwell::Error),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 config, 3 numerical failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(e) => match e {
                kgwell::Error::Domain { .. }
                | kgwell::Error::Cfl { .. }
                | kgwell::Error::Config(_)
                | kgwell::Error::NonDirichlet { .. }
                | kgwell::Error::Lightcone { .. } => 2,
                _ => 3,
            },
            CliError::Io { .. } => 4,
        }
    }
}
