//! Agent programs: protocols written against named variables instead of raw
//! δ tables. [`Compiled`] turns a program into a [`crate::machine::Machine`]
//! whose variables are stored, encoded, on the agent's tapes.

mod compiled;
pub mod encoding;
pub mod ids;
mod logp;
mod mult;
mod pow2;
mod shim;
pub mod tables;

pub use compiled::Compiled;
pub use encoding::{Field, FieldKind, Value, Vars};
pub use ids::{IdAssignment, IdProbe, Noop, RESERVED};
pub use logp::LogPredicate;
pub use mult::Multiplication;
pub use pow2::PowerOfTwo;
pub use shim::{shim_execution, ShimResult};

use alloc::boxed::Box;
use alloc::string::String;
use thiserror::Error;

use crate::machine::{MachineError, SpecError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("sub-protocol field `{0}` collides with a reserved name")]
    ReservedField(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// Read-only values a host program exposes to the program it runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Ambient {
    pub id: u64,
    pub population: u64,
    pub partner_id: u64,
}

/// A protocol described at the variable level.
///
/// `step` must be a pure function of its arguments. Output strings use the
/// characters `0`, `1`, `#` and the program's input symbols.
pub trait AgentProgram {
    fn name(&self) -> &str;

    fn inputs(&self) -> &[char];

    fn state_schema(&self) -> alloc::vec::Vec<Field>;

    fn message_schema(&self) -> alloc::vec::Vec<Field>;

    fn init(&self, input: char, ambient: &Ambient) -> Vars;

    /// One interaction: own variables and the partner's decoded message in,
    /// new variables out.
    fn step(
        &self,
        vars: &Vars,
        message: &Vars,
        initiator: bool,
        ambient: &Ambient,
    ) -> Result<Vars, MachineError>;

    /// Contents of the outgoing message, in `message_schema` order.
    fn message(&self, vars: &Vars) -> Vars;

    fn output(&self, vars: &Vars) -> String;
}

impl<P: AgentProgram + ?Sized> AgentProgram for Box<P> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn inputs(&self) -> &[char] {
        (**self).inputs()
    }
    fn state_schema(&self) -> alloc::vec::Vec<Field> {
        (**self).state_schema()
    }
    fn message_schema(&self) -> alloc::vec::Vec<Field> {
        (**self).message_schema()
    }
    fn init(&self, input: char, ambient: &Ambient) -> Vars {
        (**self).init(input, ambient)
    }
    fn step(
        &self,
        vars: &Vars,
        message: &Vars,
        initiator: bool,
        ambient: &Ambient,
    ) -> Result<Vars, MachineError> {
        (**self).step(vars, message, initiator, ambient)
    }
    fn message(&self, vars: &Vars) -> Vars {
        (**self).message(vars)
    }
    fn output(&self, vars: &Vars) -> String {
        (**self).output(vars)
    }
}

pub type DynProgram = Box<dyn AgentProgram + Send + Sync>;

/// The built-in programs by command-line name: `mult`, `pow2`, `ids`, `logp`.
pub fn program_by_name(name: &str) -> Option<DynProgram> {
    Some(match name {
        "mult" => Box::new(Multiplication),
        "pow2" => Box::new(PowerOfTwo),
        "logp" => Box::new(LogPredicate),
        "ids" => Box::new(IdAssignment::new(IdProbe).ok()?),
        _ => return None,
    })
}

/// Ground truth for the built-in predicates, from symbol counts.
pub fn predicate_truth(name: &str, input: &str) -> Result<bool, ProtocolError> {
    let count = |c: char| input.chars().filter(|&x| x == c).count() as u64;
    match name {
        "mult" => Ok(count('c') == count('a') * count('b')),
        "pow2" => Ok(count('1').is_power_of_two()),
        "logp" => Ok(count('a').is_power_of_two()),
        _ => Err(ProtocolError::UnknownPredicate(name.into())),
    }
}
