use alloc::string::{String, ToString};
use alloc::vec::Vec;
use thiserror::Error;

use super::{AgentConfiguration, Machine, MachineError, Move, State, Symbol, SymbolTable};

/// Right-hand side of one δ row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: State,
    /// Symbols written on working, output, incoming, outgoing.
    pub write: [Symbol; 4],
    pub moves: [Move; 4],
    pub working_flag: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("symbol `{0}` declared twice (or clashes with the blank `_`)")]
    DuplicateSymbol(char),
    #[error("tape alphabet larger than 256 symbols")]
    TooManySymbols,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(char),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("protocol declares no states")]
    NoStates,
    #[error("input alphabet is empty")]
    NoInputs,
    #[error("delta undefined for state `{state}` reading `{read}`")]
    MissingDelta { state: String, read: String },
    #[error("gamma undefined for (`{0}`, `{1}`)")]
    MissingGamma(String, String),
}

/// A protocol given as literal δ and γ tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolSpec {
    symbols: SymbolTable,
    inputs: Vec<Symbol>,
    states: Vec<String>,
    initial: State,
    delta: Vec<Transition>,
    gamma: Vec<(State, State)>,
}

impl ProtocolSpec {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: State) -> &str {
        self.states.get(q.0 as usize).map_or("?", String::as_str)
    }

    pub fn state(&self, name: &str) -> Option<State> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| State(i as u32))
    }

    pub fn transition(&self, q: State, read: [Symbol; 4]) -> &Transition {
        &self.delta[delta_index(self.symbols.len(), q, read)]
    }

    pub fn gamma(&self, a: State, b: State) -> (State, State) {
        self.gamma[a.0 as usize * self.states.len() + b.0 as usize]
    }
}

fn delta_index(g: usize, q: State, read: [Symbol; 4]) -> usize {
    read.iter()
        .fold(q.0 as usize, |acc, s| acc * g + usize::from(s.0))
}

impl Machine for ProtocolSpec {
    fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    fn input_alphabet(&self) -> &[Symbol] {
        &self.inputs
    }

    fn initial_state(&self) -> State {
        self.initial
    }

    fn interact(&self, initiator: State, responder: State) -> (State, State) {
        self.gamma(initiator, responder)
    }

    fn delta(&self, agent: &mut AgentConfiguration) -> Result<(), MachineError> {
        if agent.state.0 as usize >= self.states.len() {
            return Err(MachineError::UnknownState(agent.state));
        }
        let read = [
            agent.working.read(),
            agent.output.read(),
            agent.incoming.read(),
            agent.outgoing.read(),
        ];
        let t = *self.transition(agent.state, read);
        for (i, id) in super::TapeId::ALL.into_iter().enumerate() {
            let tape = agent.tape_mut(id);
            tape.write(t.write[i]);
            tape.shift(t.moves[i]);
        }
        agent.state = t.next;
        agent.working_flag = t.working_flag;
        Ok(())
    }

    fn describe(&self, agent: &AgentConfiguration) -> String {
        let t = &self.symbols;
        alloc::format!(
            "{} w={} o={} im={} om={}",
            self.state_name(agent.state),
            t.render(agent.working.content()),
            t.render(agent.output.content()),
            t.render(agent.incoming.content()),
            t.render(agent.outgoing.content()),
        )
    }
}

/// Incremental construction of a [`ProtocolSpec`]; `build` checks totality.
#[derive(Clone, Debug)]
pub struct ProtocolSpecBuilder {
    symbols: SymbolTable,
    inputs: Vec<Symbol>,
    states: Vec<String>,
    initial: State,
    delta: Vec<Option<Transition>>,
    gamma: Vec<Option<(State, State)>>,
}

impl ProtocolSpecBuilder {
    /// `inputs` form X; `extra` are the further non-blank tape symbols of Γ.
    pub fn new<'a>(
        inputs: impl IntoIterator<Item = char>,
        extra: impl IntoIterator<Item = char>,
        states: impl IntoIterator<Item = &'a str>,
        initial: &str,
    ) -> Result<Self, SpecError> {
        let inputs: Vec<char> = inputs.into_iter().collect();
        if inputs.is_empty() {
            return Err(SpecError::NoInputs);
        }
        let symbols = SymbolTable::new(inputs.iter().copied().chain(extra))?;
        let mut names: Vec<String> = Vec::new();
        for s in states {
            if names.iter().any(|n| n == s) {
                return Err(SpecError::DuplicateState(s.to_string()));
            }
            names.push(s.to_string());
        }
        if names.is_empty() {
            return Err(SpecError::NoStates);
        }
        let initial = names
            .iter()
            .position(|n| n == initial)
            .ok_or_else(|| SpecError::UnknownState(initial.to_string()))?;
        let g = symbols.len();
        let q = names.len();
        Ok(ProtocolSpecBuilder {
            inputs: (1..=inputs.len()).map(|i| Symbol(i as u8)).collect(),
            symbols,
            delta: alloc::vec![None; q * g.pow(4)],
            gamma: alloc::vec![None; q * q],
            states: names,
            initial: State(initial as u32),
        })
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn state(&self, name: &str) -> Result<State, SpecError> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| State(i as u32))
            .ok_or_else(|| SpecError::UnknownState(name.to_string()))
    }

    pub fn symbol(&self, c: char) -> Result<Symbol, SpecError> {
        self.symbols.symbol(c).ok_or(SpecError::UnknownSymbol(c))
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn set_delta(&mut self, q: State, read: [Symbol; 4], t: Transition) {
        let i = delta_index(self.symbols.len(), q, read);
        self.delta[i] = Some(t);
    }

    pub fn set_gamma(&mut self, a: State, b: State, out: (State, State)) {
        let q = self.states.len();
        self.gamma[a.0 as usize * q + b.0 as usize] = Some(out);
    }

    /// Every (state, scanned symbols) combination, in table order.
    pub fn delta_domain(&self) -> impl Iterator<Item = (State, [Symbol; 4])> {
        let g = self.symbols.len() as u8;
        let q = self.states.len() as u32;
        (0..q).flat_map(move |s| {
            (0..g).flat_map(move |a| {
                (0..g).flat_map(move |b| {
                    (0..g).flat_map(move |c| {
                        (0..g).map(move |d| (State(s), [Symbol(a), Symbol(b), Symbol(c), Symbol(d)]))
                    })
                })
            })
        })
    }

    /// Fills every δ entry from `f`.
    pub fn delta_all(mut self, f: impl Fn(State, [Symbol; 4]) -> Transition) -> Self {
        let domain: Vec<_> = self.delta_domain().collect();
        for (q, read) in domain {
            self.set_delta(q, read, f(q, read));
        }
        self
    }

    pub fn gamma_all(mut self, f: impl Fn(State, State) -> (State, State)) -> Self {
        let q = self.states.len() as u32;
        for a in 0..q {
            for b in 0..q {
                self.set_gamma(State(a), State(b), f(State(a), State(b)));
            }
        }
        self
    }

    pub fn gamma_identity(self) -> Self {
        self.gamma_all(|a, b| (a, b))
    }

    pub fn build(self) -> Result<ProtocolSpec, SpecError> {
        let g = self.symbols.len();
        let mut delta = Vec::with_capacity(self.delta.len());
        for (i, t) in self.delta.iter().enumerate() {
            match t {
                Some(t) => delta.push(*t),
                None => {
                    let mut rest = i;
                    let mut read = [Symbol::BLANK; 4];
                    for slot in read.iter_mut().rev() {
                        *slot = Symbol((rest % g) as u8);
                        rest /= g;
                    }
                    return Err(SpecError::MissingDelta {
                        state: self.states[rest].clone(),
                        read: self.symbols.render(&read),
                    });
                }
            }
        }
        let q = self.states.len();
        let mut gamma = Vec::with_capacity(q * q);
        for (i, t) in self.gamma.iter().enumerate() {
            match t {
                Some(t) => gamma.push(*t),
                None => {
                    return Err(SpecError::MissingGamma(
                        self.states[i / q].clone(),
                        self.states[i % q].clone(),
                    ))
                }
            }
        }
        Ok(ProtocolSpec {
            symbols: self.symbols,
            inputs: self.inputs,
            states: self.states,
            initial: self.initial,
            delta,
            gamma,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{apply_internal_step, Tape, TapeId};
    use proptest::prelude::*;

    #[test]
    fn missing_rows_are_reported() {
        let b = ProtocolSpecBuilder::new(['x'], [], ["q0"], "q0").unwrap();
        match b.clone().gamma_identity().build() {
            Err(SpecError::MissingDelta { state, read }) => {
                assert_eq!(state, "q0");
                assert_eq!(read, "____");
            }
            other => panic!("unexpected {other:?}"),
        }
        let b = b.delta_all(|q, r| Transition {
            next: q,
            write: r,
            moves: [Move::L; 4],
            working_flag: false,
        });
        assert!(matches!(b.build(), Err(SpecError::MissingGamma(_, _))));
    }

    #[test]
    fn unknown_initial_state() {
        assert_eq!(
            ProtocolSpecBuilder::new(['x'], [], ["a"], "b").unwrap_err(),
            SpecError::UnknownState("b".into())
        );
    }

    fn arbitrary_spec() -> ProtocolSpec {
        // Deterministic but irregular table over Γ = {_, 0, 1} and three states.
        ProtocolSpecBuilder::new(['0', '1'], [], ["p", "q", "r"], "p")
            .unwrap()
            .delta_all(|q, read| {
                let h = read.iter().fold(q.0 as usize * 7 + 3, |acc, s| {
                    acc.wrapping_mul(31).wrapping_add(usize::from(s.0) + 1)
                });
                let pick = |k: usize| Symbol(((h >> (2 * k)) % 3) as u8);
                let mv = |k: usize| if (h >> (10 + k)) & 1 == 1 { Move::R } else { Move::L };
                Transition {
                    next: State(((h >> 16) % 3) as u32),
                    write: [pick(0), pick(1), pick(2), pick(3)],
                    moves: [mv(0), mv(1), mv(2), mv(3)],
                    working_flag: (h >> 20) & 1 == 1,
                }
            })
            .gamma_identity()
            .build()
            .unwrap()
    }

    fn tape_strategy() -> impl Strategy<Value = Tape> {
        (proptest::collection::vec(0u8..3, 0..6), 0usize..7)
            .prop_map(|(cells, head)| Tape::from_symbols(cells.into_iter().map(Symbol), head))
    }

    proptest! {
        #[test]
        fn step_is_deterministic_and_local(
            state in 0u32..3,
            tapes in proptest::collection::vec(tape_strategy(), 4),
        ) {
            let spec = arbitrary_spec();
            let agent = AgentConfiguration {
                state: State(state),
                working: tapes[0].clone(),
                output: tapes[1].clone(),
                incoming: tapes[2].clone(),
                outgoing: tapes[3].clone(),
                working_flag: true,
            };
            let a = apply_internal_step(&spec, &agent).unwrap();
            let b = apply_internal_step(&spec, &agent).unwrap();
            prop_assert_eq!(&a, &b);
            for id in TapeId::ALL {
                let before = agent.tape(id);
                let after = a.tape(id);
                // Only the scanned cell may change.
                for i in 0..before.extent().max(after.extent()) + 2 {
                    if i != before.head() {
                        prop_assert_eq!(before.get(i), after.get(i));
                    }
                }
                let h = before.head();
                let expect = match spec.transition(agent.state, [
                    agent.working.read(), agent.output.read(), agent.incoming.read(), agent.outgoing.read()
                ]).moves[id as usize] {
                    Move::L => h.saturating_sub(1),
                    Move::R => h + 1,
                };
                prop_assert_eq!(after.head(), expect);
            }
        }
    }
}
