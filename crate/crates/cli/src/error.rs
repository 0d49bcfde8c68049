use std::fmt;

use silting_core::complex::ComplexError;
use silting_core::decompose::DecomposeError;
use silting_core::exceptional::ExceptionalError;
use silting_core::module_cat::ModuleError;
use silting_core::mutation::MutationError;
use silting_core::silting::SiltingError;
use silting_core::AlgebraError;

/// Input problems exit with 2, mathematical failures with 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Kind {
    Input,
    Math,
}

#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: Kind,
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    pub fn input(code: &'static str, message: impl Into<String>) -> CliError {
        CliError { kind: Kind::Input, code, message: message.into() }
    }

    pub fn math(code: &'static str, message: impl Into<String>) -> CliError {
        CliError { kind: Kind::Math, code, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Input => 2,
            Kind::Math => 1,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "error": self.code, "message": self.message, "exit": self.exit_code() })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        let code = match e {
            AlgebraError::InfiniteDimensional { .. } => "InfiniteDimensional",
            AlgebraError::MalformedPresentation(_) => "MalformedPresentation",
            AlgebraError::InvalidVertex(_) => "InvalidVertex",
            AlgebraError::UnknownBuiltin(_) => "UnknownBuiltin",
            AlgebraError::Field(_) => "BadField",
            AlgebraError::Json(_) => "BadJson",
        };
        CliError::input(code, e.to_string())
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::Algebra(a) => a.into(),
            ComplexError::NotChainMap(_) => CliError::input("NotChainMap", e.to_string()),
            ComplexError::Malformed(_) => CliError::input("MalformedComplex", e.to_string()),
            ComplexError::Json(_) => CliError::input("BadJson", e.to_string()),
        }
    }
}

impl From<DecomposeError> for CliError {
    fn from(e: DecomposeError) -> Self {
        let code = match e {
            DecomposeError::FieldTooSmall(_) => "FieldTooSmall",
            DecomposeError::RadicalUnavailable(..) => "RadicalUnavailable",
            DecomposeError::LiftFailed => "LiftFailed",
        };
        CliError::math(code, e.to_string())
    }
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::ZeroModule => CliError::math("ZeroModule", e.to_string()),
            ModuleError::NotProjective => CliError::math("NotProjective", e.to_string()),
            ModuleError::NotInjective => CliError::math("NotInjective", e.to_string()),
            ModuleError::SimpleIsInjective(_) => CliError::math("SimpleIsInjective", e.to_string()),
            ModuleError::SelfExtension(_) => CliError::math("SelfExtension", e.to_string()),
            ModuleError::ProjDimTooBig => CliError::math("ProjDimTooBig", e.to_string()),
            ModuleError::InvalidVertex(_) => CliError::input("InvalidVertex", e.to_string()),
            ModuleError::Malformed(_) => CliError::input("MalformedModule", e.to_string()),
        }
    }
}

impl From<MutationError> for CliError {
    fn from(e: MutationError) -> Self {
        match e {
            MutationError::NotASummand(_) => CliError::input("NotASummand", e.to_string()),
            MutationError::Empty => CliError::input("EmptyMutation", e.to_string()),
            MutationError::InvalidVertices(_) => CliError::input("InvalidVertices", e.to_string()),
            MutationError::ProjDimTooBig => CliError::math("ProjDimTooBig", e.to_string()),
            MutationError::Module(m) => m.into(),
            MutationError::Decompose(d) => d.into(),
        }
    }
}

impl From<SiltingError> for CliError {
    fn from(e: SiltingError) -> Self {
        match e {
            SiltingError::NotInAisle(_) => CliError::math("NotInAisle", e.to_string()),
            SiltingError::IterationCap(_) => CliError::math("IterationCap", e.to_string()),
            SiltingError::Decompose(d) => d.into(),
        }
    }
}

impl From<ExceptionalError> for CliError {
    fn from(e: ExceptionalError) -> Self {
        match e {
            ExceptionalError::NotHereditary => CliError::math("NotHereditary", e.to_string()),
            ExceptionalError::ValidationFailed(_) => CliError::math("NotExceptional", e.to_string()),
            ExceptionalError::CycleDetected => CliError::math("CycleDetected", e.to_string()),
            ExceptionalError::BadWord(_) => CliError::input("BadWord", e.to_string()),
            ExceptionalError::Decompose(d) => d.into(),
            ExceptionalError::Mutation(m) => m.into(),
        }
    }
}
