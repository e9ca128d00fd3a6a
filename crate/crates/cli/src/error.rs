use std::path::PathBuf;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error(transparent)]
    Core(#[from] cavmag::Error),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 configuration, 3 numerical failure, 4 estimation failure, 1 I/O.
    pub fn exit_code(&self) -> i32 {
        use cavmag::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                E::InvalidConfig(_) | E::StiffnessGuard { .. } => 2,
                E::NormDrift { .. } | E::NonFinite { .. } | E::EnsembleAborted { .. } => 3,
                E::Estimation(_) | E::NotSuperradiant { .. } => 4,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "config",
            3 => "numerical",
            4 => "estimation",
            _ => "io",
        }
    }

    /// One-line JSON error record for stderr.
    pub fn record(&self) -> String {
        let details: Vec<String> = match self {
            CliError::Config(v) => v.clone(),
            CliError::Core(cavmag::Error::InvalidConfig(v)) => v.clone(),
            other => vec![other.to_string()],
        };
        json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "message": self.to_string(),
                "details": details,
            }
        })
        .to_string()
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
