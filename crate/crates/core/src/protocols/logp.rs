use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{AgentProgram, Ambient, Field, Value, Vars};
use crate::machine::MachineError;

pub const X: usize = 0;
const OUT: usize = 1;

/// Decides whether the number of `a` inputs is a power of two, with an
/// `O(log log n)`-bit counter per agent.
///
/// Part one merges equal positive `x` values: the initiator increments, the
/// responder drops to 0. A value `k` stands for `2^(k-1)` inputs. Part two
/// watches for two distinct positive values (output 0), announces 1 after every
/// merge, and lets agents with `x = 0` copy the output of any positive agent.
#[derive(Clone, Copy, Debug, Default)]
pub struct LogPredicate;

impl AgentProgram for LogPredicate {
    fn name(&self) -> &str {
        "logp"
    }

    fn inputs(&self) -> &[char] {
        &['a', '0']
    }

    fn state_schema(&self) -> Vec<Field> {
        vec![Field::uint("x"), Field::bounded("out", 1)]
    }

    fn message_schema(&self) -> Vec<Field> {
        self.state_schema()
    }

    fn init(&self, input: char, _: &Ambient) -> Vars {
        let a = u64::from(input == 'a');
        vec![Value::Uint(a), Value::Uint(a)]
    }

    fn step(&self, v: &Vars, m: &Vars, initiator: bool, _: &Ambient) -> Result<Vars, MachineError> {
        let (x, px) = (v[X].uint(), m[X].uint());
        let mut v = v.clone();
        if x > 0 && px > 0 {
            if x == px {
                v[X] = Value::Uint(if initiator { x + 1 } else { 0 });
                v[OUT] = Value::Uint(1);
            } else {
                v[OUT] = Value::Uint(0);
            }
        } else if x == 0 && px > 0 {
            v[OUT] = m[OUT].clone();
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
