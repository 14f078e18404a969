use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use specfact_core::{Error, ErrorClass};

/// Everything that ends a command with a nonzero exit status.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(String),
    /// Bad command line: clap error kind and message.
    Usage(String, String),
    /// A computed result failed its check; the report is already on stdout.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Failure::Io(format!("{}: {e}", path.display()))
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Failure::Usage("InvalidArgument".into(), message.into())
    }

    fn class(&self) -> ErrorClass {
        match self {
            Failure::Core(e) => e.class(),
            Failure::Io(_) | Failure::Usage(..) => ErrorClass::Input,
            Failure::Check(_) => ErrorClass::Numerical,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.class() {
            ErrorClass::Input => 1,
            ErrorClass::Numerical => 2,
            ErrorClass::Precondition => 3,
            ErrorClass::Resource => 4,
        }
    }

    /// Prints the JSON diagnostic to stderr.
    pub fn report(&self) -> ExitCode {
        #[derive(Serialize)]
        struct Diagnostic<'a> {
            error: &'a str,
            class: &'static str,
            message: String,
        }
        let (error, message) = match self {
            Failure::Core(e) => (e.kind(), e.to_string()),
            Failure::Io(m) => ("Io", m.clone()),
            Failure::Usage(kind, m) => (kind.as_str(), m.trim_end().to_string()),
            Failure::Check(m) => ("CheckFailed", m.clone()),
        };
        let class = match self.class() {
            ErrorClass::Input => "input",
            ErrorClass::Numerical => "numerical",
            ErrorClass::Precondition => "precondition",
            ErrorClass::Resource => "resource",
        };
        let diag = Diagnostic { error, class, message };
        eprintln!("{}", serde_json::to_string(&diag).expect("serializable"));
        ExitCode::from(self.exit_code())
    }
}
