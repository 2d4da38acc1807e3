//! Single-agent machinery: four left-bounded tapes, a control state, and the
//! working flag, driven by an internal transition function.
//!
//! Two kinds of [`Machine`] exist in this crate. [`ProtocolSpec`] is a literal
//! δ/γ table. [`crate::protocols::Compiled`] runs a variable-level agent program
//! whose variables live, encoded, on the agent's tapes.

mod spec;
mod tape;

pub use spec::{ProtocolSpec, ProtocolSpecBuilder, SpecError, Transition};
pub use tape::{Move, Symbol, Tape};

use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

/// Blank rendering used by [`SymbolTable`].
pub const BLANK_CHAR: char = '_';

/// Maps symbol ids to printable characters. Id 0 is the blank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<char>,
}

impl SymbolTable {
    /// Builds a table whose symbol 1.. are `names` in order. Duplicates and the blank
    /// character are rejected.
    pub fn new(names: impl IntoIterator<Item = char>) -> Result<Self, SpecError> {
        let mut table = SymbolTable {
            names: alloc::vec![BLANK_CHAR],
        };
        for c in names {
            if table.names.contains(&c) {
                return Err(SpecError::DuplicateSymbol(c));
            }
            table.names.push(c);
        }
        if table.names.len() > usize::from(u8::MAX) + 1 {
            return Err(SpecError::TooManySymbols);
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbol(&self, c: char) -> Option<Symbol> {
        self.names
            .iter()
            .position(|&n| n == c)
            .map(|i| Symbol(i as u8))
    }

    pub fn name(&self, s: Symbol) -> char {
        self.names.get(usize::from(s.0)).copied().unwrap_or('?')
    }

    pub fn render(&self, symbols: &[Symbol]) -> String {
        symbols.iter().map(|&s| self.name(s)).collect()
    }

    pub fn parse(&self, text: &str) -> Option<Vec<Symbol>> {
        text.chars().map(|c| self.symbol(c)).collect()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len()).map(|i| Symbol(i as u8))
    }
}

/// A control state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(pub u32);

/// Which of the four tapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TapeId {
    Working = 0,
    Output = 1,
    Incoming = 2,
    Outgoing = 3,
}

impl TapeId {
    pub const ALL: [TapeId; 4] = [
        TapeId::Working,
        TapeId::Output,
        TapeId::Incoming,
        TapeId::Outgoing,
    ];
}

/// Full configuration of one agent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentConfiguration {
    pub state: State,
    pub working: Tape,
    pub output: Tape,
    pub incoming: Tape,
    pub outgoing: Tape,
    /// `true` while the agent computes internally; `false` when ready to interact.
    pub working_flag: bool,
}

impl AgentConfiguration {
    /// The configuration every agent starts in: state `q0`, flag 1, its input on
    /// working cell 0, everything else blank.
    pub fn initial(q0: State, input: Symbol) -> Self {
        AgentConfiguration {
            state: q0,
            working: Tape::from_symbols([input], 0),
            working_flag: true,
            ..Default::default()
        }
    }

    pub fn tape(&self, id: TapeId) -> &Tape {
        match id {
            TapeId::Working => &self.working,
            TapeId::Output => &self.output,
            TapeId::Incoming => &self.incoming,
            TapeId::Outgoing => &self.outgoing,
        }
    }

    pub fn tape_mut(&mut self, id: TapeId) -> &mut Tape {
        match id {
            TapeId::Working => &mut self.working,
            TapeId::Output => &mut self.output,
            TapeId::Incoming => &mut self.incoming,
            TapeId::Outgoing => &mut self.outgoing,
        }
    }

    pub fn is_ready(&self) -> bool {
        !self.working_flag
    }

    /// Output tape contents (`s_o`).
    pub fn output_content(&self) -> &[Symbol] {
        self.output.content()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("internal step requested on an agent whose working flag is 0")]
    FlagNotWorking,
    #[error("agent still working after {0} internal steps")]
    NonQuiescent(u64),
    #[error("state {0:?} is not a state of this protocol")]
    UnknownState(State),
    #[error("tape decoding failed: {0}")]
    Decode(String),
    #[error("field `{field}` needs {needed} cells, cap is {cap}")]
    EncodingOverflow {
        field: String,
        needed: usize,
        cap: usize,
    },
    #[error("agent program failed: {0}")]
    Program(String),
}

/// A protocol executor: a γ function on control states plus one application of δ.
///
/// Implementations must be deterministic.
pub trait Machine {
    fn symbols(&self) -> &SymbolTable;

    fn input_alphabet(&self) -> &[Symbol];

    fn initial_state(&self) -> State;

    /// γ: new states of (initiator, responder).
    fn interact(&self, initiator: State, responder: State) -> (State, State);

    /// δ applied once. Only called with `agent.working_flag == true`.
    fn delta(&self, agent: &mut AgentConfiguration) -> Result<(), MachineError>;

    /// Human-readable rendering of an agent configuration.
    fn describe(&self, agent: &AgentConfiguration) -> String {
        let t = self.symbols();
        alloc::format!(
            "q{} w={} o={} flag={}",
            agent.state.0,
            t.render(agent.working.content()),
            t.render(agent.output.content()),
            u8::from(agent.working_flag)
        )
    }
}

impl<M: Machine + ?Sized> Machine for &M {
    fn symbols(&self) -> &SymbolTable {
        (**self).symbols()
    }
    fn input_alphabet(&self) -> &[Symbol] {
        (**self).input_alphabet()
    }
    fn initial_state(&self) -> State {
        (**self).initial_state()
    }
    fn interact(&self, initiator: State, responder: State) -> (State, State) {
        (**self).interact(initiator, responder)
    }
    fn delta(&self, agent: &mut AgentConfiguration) -> Result<(), MachineError> {
        (**self).delta(agent)
    }
    fn describe(&self, agent: &AgentConfiguration) -> String {
        (**self).describe(agent)
    }
}

impl<M: Machine + ?Sized> Machine for alloc::boxed::Box<M> {
    fn symbols(&self) -> &SymbolTable {
        (**self).symbols()
    }
    fn input_alphabet(&self) -> &[Symbol] {
        (**self).input_alphabet()
    }
    fn initial_state(&self) -> State {
        (**self).initial_state()
    }
    fn interact(&self, initiator: State, responder: State) -> (State, State) {
        (**self).interact(initiator, responder)
    }
    fn delta(&self, agent: &mut AgentConfiguration) -> Result<(), MachineError> {
        (**self).delta(agent)
    }
    fn describe(&self, agent: &AgentConfiguration) -> String {
        (**self).describe(agent)
    }
}

/// One application of δ to an agent whose working flag is 1.
pub fn apply_internal_step<M: Machine + ?Sized>(
    machine: &M,
    agent: &AgentConfiguration,
) -> Result<AgentConfiguration, MachineError> {
    if !agent.working_flag {
        return Err(MachineError::FlagNotWorking);
    }
    let mut next = agent.clone();
    machine.delta(&mut next)?;
    Ok(next)
}

/// Result of driving an agent to readiness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiescence {
    pub steps: u64,
    /// Largest extent of each tape seen along the way, including the start.
    pub peak: [usize; 4],
}

/// Iterates δ in place until the working flag clears. An agent that is already
/// ready takes zero steps.
pub fn run_until_ready<M: Machine + ?Sized>(
    machine: &M,
    agent: &mut AgentConfiguration,
    budget: u64,
) -> Result<Quiescence, MachineError> {
    let mut peak = tape_extent(agent);
    let mut steps = 0;
    while agent.working_flag {
        if steps >= budget {
            return Err(MachineError::NonQuiescent(steps));
        }
        machine.delta(agent)?;
        steps += 1;
        let now = tape_extent(agent);
        for (p, e) in peak.iter_mut().zip(now) {
            *p = (*p).max(e);
        }
    }
    Ok(Quiescence { steps, peak })
}

/// Per-tape extent, in the order working, output, incoming, outgoing.
pub fn tape_extent(agent: &AgentConfiguration) -> [usize; 4] {
    TapeId::ALL.map(|id| agent.tape(id).extent())
}

/// Largest tape extents observed over an execution.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpaceReport {
    pub per_agent: Vec<[usize; 4]>,
}

impl SpaceReport {
    pub fn new(n: usize) -> Self {
        SpaceReport {
            per_agent: alloc::vec![[0; 4]; n],
        }
    }

    pub fn record(&mut self, agent: usize, extents: [usize; 4]) {
        let slot = &mut self.per_agent[agent];
        for (p, e) in slot.iter_mut().zip(extents) {
            *p = (*p).max(e);
        }
    }

    /// Maximum over agents, per tape.
    pub fn per_tape(&self) -> [usize; 4] {
        let mut out = [0; 4];
        for row in &self.per_agent {
            for (o, e) in out.iter_mut().zip(row) {
                *o = (*o).max(*e);
            }
        }
        out
    }

    /// Maximum over every agent and tape.
    pub fn overall(&self) -> usize {
        self.per_tape().into_iter().max().unwrap_or(0)
    }
}
