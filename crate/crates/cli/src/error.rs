use std::fmt;

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum Failure {
    /// bad flags, invalid parameters, schema violations (exit 2)
    Usage(String),
    /// unreadable or malformed data files (exit 3)
    Data(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Data(m) => f.write_str(m),
        }
    }
}

impl From<pseudorank::Error> for Failure {
    fn from(e: pseudorank::Error) -> Self {
        use pseudorank::Error as E;
        match e {
            E::Data { .. } | E::Csv(_) => Failure::Data(e.to_string()),
            E::InvalidInput(_) | E::DimensionMismatch { .. } | E::Json(_) => {
                Failure::Usage(e.to_string())
            }
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;
