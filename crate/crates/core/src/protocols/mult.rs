use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{AgentProgram, Ambient, Field, Value, Vars};
use crate::machine::MachineError;

pub const A: u64 = 0;
pub const B: u64 = 1;
pub const C: u64 = 2;
pub const A_SLEEP: u64 = 3;
pub const B_SLEEP: u64 = 4;
pub const C_SLEEP: u64 = 5;

const ROLE: usize = 0;
const NA: usize = 1;
const NB: usize = 2;
const NC: usize = 3;
const OUT: usize = 4;

/// Decides `N_c = N_a * N_b` over inputs `{a, b, c}`.
///
/// Agents holding `c` carry three counters and merge them on c-c meetings; the
/// surviving `c` ends up with the global counts. Everyone else sleeps and
/// copies the bit broadcast by `c`.
///
/// Agents still in `a`/`b` start at output 1 and drop to 0 once an `a` and a
/// `b` have met, spreading that 0 among themselves. This only matters when no
/// `c` exists, where it makes the output `N_a * N_b == 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Multiplication;

fn verdict(v: &Vars) -> Value {
    let prod = v[NA].uint().checked_mul(v[NB].uint());
    Value::from(prod == Some(v[NC].uint()))
}

impl AgentProgram for Multiplication {
    fn name(&self) -> &str {
        "mult"
    }

    fn inputs(&self) -> &[char] {
        &['a', 'b', 'c']
    }

    fn state_schema(&self) -> Vec<Field> {
        vec![
            Field::bounded("role", 3),
            Field::uint("na"),
            Field::uint("nb"),
            Field::uint("nc"),
            Field::bounded("out", 1),
        ]
    }

    fn message_schema(&self) -> Vec<Field> {
        self.state_schema()
    }

    fn init(&self, input: char, _: &Ambient) -> Vars {
        let role = match input {
            'a' => A,
            'b' => B,
            _ => C,
        };
        let mut v: Vars = vec![
            Value::Uint(role),
            Value::Uint(0),
            Value::Uint(0),
            Value::Uint(u64::from(role == C)),
            Value::Uint(1),
        ];
        if role == C {
            v[OUT] = verdict(&v);
        }
        v
    }

    fn step(&self, v: &Vars, m: &Vars, initiator: bool, _: &Ambient) -> Result<Vars, MachineError> {
        let mut v = v.clone();
        let mine = v[ROLE].uint();
        let theirs = m[ROLE].uint();
        match (mine, theirs) {
            (A, C) => v[ROLE] = Value::Uint(A_SLEEP),
            (B, C) => v[ROLE] = Value::Uint(B_SLEEP),
            (A, B) | (B, A) => v[OUT] = Value::Uint(0),
            (A | B, A | B) => {
                if m[OUT].uint() == 0 {
                    v[OUT] = Value::Uint(0);
                }
            }
            (C, A) => {
                v[NA] = Value::Uint(v[NA].uint() + 1);
                v[OUT] = verdict(&v);
            }
            (C, B) => {
                v[NB] = Value::Uint(v[NB].uint() + 1);
                v[OUT] = verdict(&v);
            }
            (C, C) if initiator => {
                for i in [NA, NB, NC] {
                    v[i] = Value::Uint(v[i].uint() + m[i].uint());
                }
                v[OUT] = verdict(&v);
            }
            (C, C) => {
                v[ROLE] = Value::Uint(C_SLEEP);
                v[OUT] = m[OUT].clone();
            }
            (A_SLEEP | B_SLEEP | C_SLEEP, C) => v[OUT] = m[OUT].clone(),
            _ => {}
        }
        Ok(v)
    }

    fn message(&self, v: &Vars) -> Vars {
        v.clone()
    }

    fn output(&self, v: &Vars) -> String {
        if v[OUT].uint() == 1 { "1".into() } else { "0".into() }
    }
}
