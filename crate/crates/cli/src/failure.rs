use std::fmt;

use fondgr::compiler::CompileError;
use fondgr::datasets::DatasetError;
use fondgr::logic::LogicError;
use fondgr::pddl::PddlError;
use fondgr::planner::PlannerError;
use fondgr::recognizer::RecognizeError;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_FILE: u8 = 3;
pub const EXIT_UNSOLVABLE: u8 = 4;
pub const EXIT_INTERNAL: u8 = 1;

/// An error message with its process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure::new(EXIT_FILE, format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn planner_code(e: &PlannerError) -> u8 {
    match e {
        PlannerError::TooManyExecutions { .. } => EXIT_UNSOLVABLE,
        _ => EXIT_FILE,
    }
}

fn compile_code(e: &CompileError) -> u8 {
    match e {
        CompileError::Pddl(_) => EXIT_FILE,
        CompileError::Planner(p) => planner_code(p),
        _ => EXIT_INPUT,
    }
}

fn recognize_code(e: &RecognizeError) -> u8 {
    match e {
        RecognizeError::Compile { source, .. } => compile_code(source),
        RecognizeError::Planner { source, .. } => planner_code(source),
        RecognizeError::Pddl(_) | RecognizeError::Io { .. } | RecognizeError::Json { .. } => {
            EXIT_FILE
        }
        _ => EXIT_INPUT,
    }
}

impl From<LogicError> for Failure {
    fn from(e: LogicError) -> Self {
        Failure::new(EXIT_INPUT, e.to_string())
    }
}

impl From<PddlError> for Failure {
    fn from(e: PddlError) -> Self {
        Failure::new(EXIT_FILE, e.to_string())
    }
}

impl From<PlannerError> for Failure {
    fn from(e: PlannerError) -> Self {
        Failure::new(planner_code(&e), e.to_string())
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Self {
        Failure::new(compile_code(&e), e.to_string())
    }
}

impl From<RecognizeError> for Failure {
    fn from(e: RecognizeError) -> Self {
        Failure::new(recognize_code(&e), e.to_string())
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        let code = match &e {
            DatasetError::Recognize(r) => recognize_code(r),
            DatasetError::BudgetExhausted { .. } => EXIT_UNSOLVABLE,
            DatasetError::Io { .. } | DatasetError::Json { .. } => EXIT_FILE,
            DatasetError::Arity { .. } => EXIT_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}
