use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{nd_choice, TmSpec};
use crate::machine::{MachineError, Move};
use crate::protocols::encoding::bit_len;
use crate::protocols::{AgentProgram, Ambient, Field, Value, Vars};

/// Simulation roles.
pub const IDLE: u64 = 0;
pub const HOLD: u64 = 1;
pub const PASS: u64 = 2;
pub const RESET: u64 = 3;
pub const ACCEPT: u64 = 4;
pub const REJECT: u64 = 5;

pub const PHASE: usize = 0;
pub const TMQ: usize = 1;
pub const HEAD: usize = 2;
pub const TARGET: usize = 3;
pub const ORIGIN: usize = 4;
pub const TAPE: usize = 5;
pub const OUT: usize = 6;
pub const INPUT: usize = 7;

/// Runs a Turing machine over a population that already has ids `0..n` and
/// knows `n` (ambient values). Meant to be wrapped in
/// [`crate::protocols::IdAssignment`].
///
/// Global cell `n*k + i` is local cell `k` of agent `i`, so agent `i`'s input
/// starts in global cell `i`. A single token carries the machine state and the
/// global head. Its holder performs one step per interaction, and when the
/// head lands on another agent's cell, the token is handed over. Only that
/// agent may take it. On acceptance the holder outputs 1 and the bit spreads
/// by contact.
///
/// Nondeterministic steps take option `partner_id mod k`. A rejecting branch
/// of a nondeterministic machine starts a reset: the token walks once around
/// the ring, restoring every local tape to its input, and the last agent
/// restarts the machine at agent 0. Deterministic rejection just stops.
#[derive(Clone, Debug)]
pub struct DistributedTm {
    tm: TmSpec,
    inputs: Vec<char>,
    width: u32,
}

impl DistributedTm {
    pub fn new(tm: TmSpec) -> Self {
        let width = bit_len(tm.symbols().len() as u64 - 1);
        DistributedTm {
            inputs: tm.input_chars(),
            tm,
            width,
        }
    }

    pub fn tm(&self) -> &TmSpec {
        &self.tm
    }

    /// Local tape cells an agent may use in a population of `n`.
    pub fn local_cap(&self, n: u64) -> usize {
        (self.tm.space_bound(n).div_ceil(n.max(1)) + 2) as usize
    }

    fn fresh_tape(&self, v: &Vars) -> Value {
        let sym = self.tm.input_symbols()[v[INPUT].uint() as usize];
        Value::Str(vec![sym])
    }

    fn start_reset(&self, v: &mut Vars, me: u64, n: u64) {
        v[TAPE] = self.fresh_tape(v);
        v[PHASE] = Value::Uint(RESET);
        v[TARGET] = Value::Uint((me + 1) % n);
        v[ORIGIN] = Value::Uint(me);
    }

    fn hand_over(v: &mut Vars, me: u64, n: u64, head: u64) {
        v[HEAD] = Value::Uint(head);
        if head % n == me {
            v[PHASE] = Value::Uint(HOLD);
        } else {
            v[PHASE] = Value::Uint(PASS);
            v[TARGET] = Value::Uint(head % n);
        }
    }

    fn tm_step(&self, v: &mut Vars, me: u64, n: u64, partner: u64) -> Result<(), MachineError> {
        let q = v[TMQ].uint() as u32;
        let head = v[HEAD].uint();
        if head % n != me {
            return Err(MachineError::Program(alloc::format!(
                "agent {me} holds the token for cell {head}"
            )));
        }
        let k = (head / n) as usize;
        let mut tape = v[TAPE].str().to_vec();
        let read = tape.get(k).copied().unwrap_or(0);
        let opts = self.tm.options(q, read);
        if self.tm.is_halting(q) || opts.is_empty() {
            self.reject(v, me, n);
            return Ok(());
        }
        let m = opts[if opts.len() == 1 { 0 } else { nd_choice(opts.len(), partner) }];
        if k >= tape.len() && m.write != 0 {
            let cap = self.local_cap(n);
            if k >= cap {
                return Err(MachineError::EncodingOverflow {
                    field: "tape".into(),
                    needed: k + 1,
                    cap,
                });
            }
            tape.resize(k + 1, 0);
        }
        if k < tape.len() {
            tape[k] = m.write;
            while tape.last() == Some(&0) {
                tape.pop();
            }
        }
        v[TAPE] = Value::Str(tape);
        v[TMQ] = Value::Uint(u64::from(m.next));
        let next_head = match m.dir {
            Move::L => head.saturating_sub(1),
            Move::R => head + 1,
        };
        if m.next == self.tm.accept() {
            v[PHASE] = Value::Uint(ACCEPT);
            v[OUT] = Value::Uint(1);
            v[HEAD] = Value::Uint(next_head);
        } else if m.next == self.tm.reject() {
            v[HEAD] = Value::Uint(next_head);
            self.reject(v, me, n);
        } else {
            Self::hand_over(v, me, n, next_head);
        }
        Ok(())
    }

    fn reject(&self, v: &mut Vars, me: u64, n: u64) {
        if self.tm.is_deterministic() {
            v[PHASE] = Value::Uint(REJECT);
        } else {
            self.start_reset(v, me, n);
        }
    }
}

impl AgentProgram for DistributedTm {
    fn name(&self) -> &str {
        "tm"
    }

    fn inputs(&self) -> &[char] {
        &self.inputs
    }

    fn state_schema(&self) -> Vec<Field> {
        vec![
            Field::bounded("phase", 3),
            Field::uint("tm_state"),
            Field::uint("head"),
            Field::uint("target"),
            Field::uint("origin"),
            Field::string("tape", self.width, None),
            Field::bounded("out", 1),
            Field::uint("input"),
        ]
    }

    fn message_schema(&self) -> Vec<Field> {
        vec![
            Field::bounded("phase", 3),
            Field::uint("tm_state"),
            Field::uint("head"),
            Field::uint("target"),
            Field::uint("origin"),
            Field::bounded("out", 1),
        ]
    }

    fn init(&self, input: char, amb: &Ambient) -> Vars {
        let idx = self.inputs.iter().position(|&c| c == input).unwrap_or(0);
        let mut v = vec![
            Value::Uint(if amb.id == 0 { HOLD } else { IDLE }),
            Value::Uint(u64::from(self.tm.initial())),
            Value::Uint(0),
            Value::Uint(0),
            Value::Uint(0),
            Value::Str(Vec::new()),
            Value::Uint(0),
            Value::Uint(idx as u64),
        ];
        v[TAPE] = self.fresh_tape(&v);
        v
    }

    fn step(&self, v: &Vars, m: &Vars, _initiator: bool, amb: &Ambient) -> Result<Vars, MachineError> {
        let mut v = v.clone();
        let (me, n, partner) = (amb.id, amb.population.max(1), amb.partner_id);
        let phase = v[PHASE].uint();
        let (their_phase, their_target) = (m[0].uint(), m[3].uint());
        if phase == ACCEPT {
            return Ok(v);
        }
        if m[5].uint() == 1 {
            v[PHASE] = Value::Uint(ACCEPT);
            v[OUT] = Value::Uint(1);
            return Ok(v);
        }
        if their_phase == PASS && their_target == me {
            v[PHASE] = Value::Uint(HOLD);
            v[TMQ] = m[1].clone();
            v[HEAD] = m[2].clone();
            return Ok(v);
        }
        if their_phase == RESET && their_target == me {
            v[TAPE] = self.fresh_tape(&v);
            if (me + 1) % n == m[4].uint() {
                v[TMQ] = Value::Uint(u64::from(self.tm.initial()));
                Self::hand_over(&mut v, me, n, 0);
            } else {
                v[PHASE] = Value::Uint(RESET);
                v[TARGET] = Value::Uint((me + 1) % n);
                v[ORIGIN] = m[4].clone();
            }
            return Ok(v);
        }
        if (phase == PASS || phase == RESET) && partner == v[TARGET].uint() {
            v[PHASE] = Value::Uint(IDLE);
            return Ok(v);
        }
        if phase == HOLD {
            self.tm_step(&mut v, me, n, partner)?;
        }
        Ok(v)
    }

    fn message(&self, v: &Vars) -> Vars {
        vec![
            v[PHASE].clone(),
            v[TMQ].clone(),
            v[HEAD].clone(),
            v[TARGET].clone(),
            v[ORIGIN].clone(),
            v[OUT].clone(),
        ]
    }

    fn output(&self, v: &Vars) -> String {
        if v[OUT].uint() == 1 { "1".into() } else { "0".into() }
    }
}

/// Global tape from per-agent local tapes, indexed by agent id.
pub fn reassemble_tape(local: &[Vec<u8>]) -> Vec<u8> {
    let n = local.len();
    let len = local
        .iter()
        .enumerate()
        .map(|(i, t)| if t.is_empty() { 0 } else { n * (t.len() - 1) + i + 1 })
        .max()
        .unwrap_or(0);
    let mut tape = vec![0u8; len];
    for (i, t) in local.iter().enumerate() {
        for (k, &s) in t.iter().enumerate() {
            tape[n * k + i] = s;
        }
    }
    while tape.last() == Some(&0) {
        tape.pop();
    }
    tape
}
