use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl VerifyError {
    /// 2 usage, 3 numerical failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            VerifyError::Usage(_) => 2,
            VerifyError::Numerical(_) => 3,
            VerifyError::Io { .. } => 4,
        }
    }
}
