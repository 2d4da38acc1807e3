use alloc::string::String;
use alloc::vec::Vec;

use super::encoding::{decode, encode, Field, Vars};
use super::{AgentProgram, Ambient};
use crate::machine::{AgentConfiguration, Machine, MachineError, SpecError, State, Symbol, SymbolTable};

/// Control states of a compiled program.
pub const START: State = State(0);
pub const READY: State = State(1);
pub const INITIATOR: State = State(2);
pub const RESPONDER: State = State(3);

/// A program run on real tapes. Γ is `{_, 0, 1, #}` plus the input symbols.
///
/// γ maps a ready pair to (INITIATOR, RESPONDER). The internal computation that
/// follows is a single δ application that decodes the working and incoming
/// tapes, steps the program, and rewrites working, outgoing and output. The
/// incoming tape is cleared afterwards and every head returns to cell 0.
#[derive(Clone, Debug)]
pub struct Compiled<P> {
    program: P,
    symbols: SymbolTable,
    inputs: Vec<Symbol>,
    state_schema: Vec<Field>,
    message_schema: Vec<Field>,
}

impl<P: AgentProgram> Compiled<P> {
    pub fn new(program: P) -> Result<Self, SpecError> {
        let mut names = alloc::vec!['0', '1', '#'];
        for &c in program.inputs() {
            if !names.contains(&c) {
                names.push(c);
            }
        }
        let symbols = SymbolTable::new(names)?;
        let mut inputs = Vec::new();
        for &c in program.inputs() {
            let s = symbols.symbol(c).ok_or(SpecError::UnknownSymbol(c))?;
            if inputs.contains(&s) {
                return Err(SpecError::DuplicateSymbol(c));
            }
            inputs.push(s);
        }
        if inputs.is_empty() {
            return Err(SpecError::NoInputs);
        }
        Ok(Compiled {
            state_schema: program.state_schema(),
            message_schema: program.message_schema(),
            program,
            symbols,
            inputs,
        })
    }

    pub fn program(&self) -> &P {
        &self.program
    }

    pub fn state_schema(&self) -> &[Field] {
        &self.state_schema
    }

    pub fn message_schema(&self) -> &[Field] {
        &self.message_schema
    }

    /// Variables held on a ready agent's working tape.
    pub fn decode_vars(&self, agent: &AgentConfiguration) -> Result<Vars, MachineError> {
        decode(&self.state_schema, agent.working.content())
    }

    fn store(&self, agent: &mut AgentConfiguration, vars: &Vars) -> Result<(), MachineError> {
        let working = encode(&self.state_schema, vars)?;
        let outgoing = encode(&self.message_schema, &self.program.message(vars))?;
        let out_text = self.program.output(vars);
        let output = self.symbols.parse(&out_text).ok_or_else(|| {
            MachineError::Program(alloc::format!("output `{out_text}` outside the tape alphabet"))
        })?;
        agent.working.replace_content(&working);
        agent.outgoing.replace_content(&outgoing);
        agent.output.replace_content(&output);
        agent.incoming.replace_content(&[]);
        for tape in [
            &mut agent.working,
            &mut agent.output,
            &mut agent.incoming,
            &mut agent.outgoing,
        ] {
            tape.set_head(0);
        }
        agent.state = READY;
        agent.working_flag = false;
        Ok(())
    }
}

impl<P: AgentProgram> Machine for Compiled<P> {
    fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    fn input_alphabet(&self) -> &[Symbol] {
        &self.inputs
    }

    fn initial_state(&self) -> State {
        START
    }

    fn interact(&self, initiator: State, responder: State) -> (State, State) {
        if initiator == READY && responder == READY {
            (INITIATOR, RESPONDER)
        } else {
            (initiator, responder)
        }
    }

    fn delta(&self, agent: &mut AgentConfiguration) -> Result<(), MachineError> {
        match agent.state {
            START => {
                let c = self.symbols.name(agent.working.get(0));
                let vars = self.program.init(c, &Ambient::default());
                self.store(agent, &vars)
            }
            INITIATOR | RESPONDER => {
                let vars = self.decode_vars(agent)?;
                let msg = decode(&self.message_schema, agent.incoming.content())?;
                let next = self.program.step(
                    &vars,
                    &msg,
                    agent.state == INITIATOR,
                    &Ambient::default(),
                )?;
                self.store(agent, &next)
            }
            READY => {
                agent.working_flag = false;
                Ok(())
            }
            q => Err(MachineError::UnknownState(q)),
        }
    }

    fn describe(&self, agent: &AgentConfiguration) -> String {
        match self.decode_vars(agent) {
            Ok(vars) => {
                let mut s = String::new();
                for (i, (f, v)) in self.state_schema.iter().zip(&vars).enumerate() {
                    if i > 0 {
                        s.push(' ');
                    }
                    match v {
                        super::Value::Uint(x) => s.push_str(&alloc::format!("{}={x}", f.name)),
                        super::Value::Str(t) => s.push_str(&alloc::format!("{}={t:?}", f.name)),
                    }
                }
                s
            }
            Err(_) => alloc::format!(
                "q{} w={}",
                agent.state.0,
                self.symbols.render(agent.working.content())
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::run_until_ready;
    use crate::population::{encounter, initial_configuration, InputAssignment};
    use crate::protocols::Value;
    use alloc::vec;

    /// One bit flipped by every interaction.
    struct Flip;

    impl AgentProgram for Flip {
        fn name(&self) -> &str {
            "flip"
        }
        fn inputs(&self) -> &[char] {
            &['0', '1']
        }
        fn state_schema(&self) -> Vec<Field> {
            vec![Field::bounded("bit", 1)]
        }
        fn message_schema(&self) -> Vec<Field> {
            vec![]
        }
        fn init(&self, input: char, _: &Ambient) -> Vars {
            vec![Value::from(input == '1')]
        }
        fn step(&self, v: &Vars, _: &Vars, _: bool, _: &Ambient) -> Result<Vars, MachineError> {
            Ok(vec![Value::Uint(1 - v[0].uint())])
        }
        fn message(&self, _: &Vars) -> Vars {
            vec![]
        }
        fn output(&self, v: &Vars) -> String {
            if v[0].uint() == 1 { "1".into() } else { "0".into() }
        }
    }

    #[test]
    fn single_bit_alternates_per_encounter() {
        let m = Compiled::new(Flip).unwrap();
        let x = InputAssignment::parse(&m, "01").unwrap();
        let mut c = initial_configuration(&m, &x);
        for a in &mut c.agents {
            run_until_ready(&m, a, 10).unwrap();
        }
        let start = c.clone();
        let mut seen = vec![start.clone()];
        for _ in 0..4 {
            let (mut next, eff) = encounter(&m, &c, 0, 1).unwrap();
            assert!(eff);
            for a in &mut next.agents {
                let q = run_until_ready(&m, a, 10).unwrap();
                assert_eq!(q.steps, 1);
            }
            c = next;
            seen.push(c.clone());
        }
        assert_eq!(seen[0], seen[2]);
        assert_eq!(seen[1], seen[3]);
        assert_ne!(seen[0], seen[1]);
        assert_eq!(m.decode_vars(&seen[1].agents[0]).unwrap(), vec![Value::Uint(1)]);
    }

    #[test]
    fn gamma_assigns_roles_only_to_ready_pairs() {
        let m = Compiled::new(Flip).unwrap();
        assert_eq!(m.interact(READY, READY), (INITIATOR, RESPONDER));
        assert_eq!(m.interact(START, READY), (START, READY));
    }

    #[test]
    fn input_symbols_share_digit_cells() {
        let m = Compiled::new(crate::protocols::LogPredicate).unwrap();
        assert_eq!(m.symbols().len(), 5);
        let zero = m.symbols().symbol('0').unwrap();
        assert!(m.input_alphabet().contains(&zero));
    }
}
