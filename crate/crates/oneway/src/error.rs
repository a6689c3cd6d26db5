use std::path::PathBuf;

/// Failures surfaced by the command-line front end, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),

    #[error("numerical failure in {context}: {source}")]
    Numerical {
        context: &'static str,
        #[source]
        source: oneway_core::Error,
    },

    #[error(transparent)]
    File(#[from] FileError),
}

impl AppError {
    pub const EXIT_USAGE: i32 = 2;
    pub const EXIT_NUMERICAL: i32 = 3;
    pub const EXIT_IO: i32 = 4;

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => Self::EXIT_USAGE,
            AppError::Numerical { .. } => Self::EXIT_NUMERICAL,
            AppError::File(_) => Self::EXIT_IO,
        }
    }

    /// Wraps a core error raised while computing `context`. Parameter
    /// errors are reported as usage errors.
    pub fn core(context: &'static str, source: oneway_core::Error) -> Self {
        use oneway_core::Error as E;
        match source {
            E::OutOfRange { .. } | E::NoShots | E::InvalidLabel(_) | E::InvalidGraph(_) => {
                AppError::Usage(format!("{context}: {source}"))
            }
            _ => AppError::Numerical { context, source },
        }
    }
}

/// Problems reading or writing the on-disk formats.
#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}{}: {message}", path.display(), line.map(|l| format!(":{l}")).unwrap_or_default())]
    Parse { path: PathBuf, line: Option<usize>, message: String },

    #[error("{}: {source}", path.display())]
    Invalid {
        path: PathBuf,
        #[source]
        source: oneway_core::Error,
    },
}
