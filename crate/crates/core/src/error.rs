use std::path::PathBuf;

/// Errors produced by the simulator.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    Shape {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix is singular to tolerance (pivot {pivot:.3e} below {threshold:.3e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite entry in matrix construction")]
    NonFinite,

    #[error("{}", usage_message(.key.as_deref(), *.line, .message))]
    Usage {
        key: Option<String>,
        line: Option<usize>,
        message: String,
    },

    #[error("I/O error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV {}: line {line}: {message}", .path.display())]
    Csv {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("too many singular draws at M={m}: {redraws} redraws over {trials} trials")]
    RedrawLimit {
        m: usize,
        redraws: usize,
        trials: usize,
    },
}

fn usage_message(key: Option<&str>, line: Option<usize>, message: &str) -> String {
    match (key, line) {
        (Some(k), Some(l)) => format!("usage error at line {l} (key `{k}`): {message}"),
        (Some(k), None) => format!("usage error (key `{k}`): {message}"),
        (None, Some(l)) => format!("usage error at line {l}: {message}"),
        (None, None) => format!("usage error: {message}"),
    }
}

impl Error {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Error::Usage {
            key: None,
            line: None,
            message: message.into(),
        }
    }

    pub(crate) fn usage_key(key: &str, line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Usage {
            key: Some(key.to_string()),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 64 for usage errors, 2 for I/O
    /// failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage { .. } => crate::cli::EXIT_USAGE,
            Error::Io { .. } => crate::cli::EXIT_IO,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
