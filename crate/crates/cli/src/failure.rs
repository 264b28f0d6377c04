use sperner_core::Error;

/// Why a command did not succeed, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, parameters outside a construction's domain, size limits,
    /// unreadable paths: exit 2.
    Usage(String),
    /// A check failed or could not be completed, or an input file is
    /// malformed: exit 1.
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Verification(_) => 1,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) | Failure::Verification(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::NotApplicable(_) | Error::SizeLimit(_) => Failure::Usage(e.to_string()),
            Error::Parse { .. } | Error::Realization(_) | Error::Invariant(_) => Failure::Verification(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}
