use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{AgentProgram, Ambient, Field, Value, Vars};
use crate::machine::MachineError;

pub const ZERO: u64 = 0;
pub const ONE: u64 = 1;
pub const ONE_SLEEP: u64 = 2;

const ROLE: usize = 0;
const COUNT: usize = 1;
const NEXT: usize = 2;
const OUT: usize = 3;

/// Decides whether the number of 1-inputs is a power of two.
///
/// Active 1-agents merge counters on meeting (initiator keeps the sum, the
/// responder goes to sleep). `next` is kept as the least power of two not
/// below the counter, so it is doubled only when a merge needs it.
#[derive(Clone, Copy, Debug, Default)]
pub struct PowerOfTwo;

impl AgentProgram for PowerOfTwo {
    fn name(&self) -> &str {
        "pow2"
    }

    fn inputs(&self) -> &[char] {
        &['0', '1']
    }

    fn state_schema(&self) -> Vec<Field> {
        vec![
            Field::bounded("role", 2),
            Field::uint("count"),
            Field::uint("next"),
            Field::bounded("out", 1),
        ]
    }

    fn message_schema(&self) -> Vec<Field> {
        vec![
            Field::bounded("role", 2),
            Field::uint("count"),
            Field::bounded("out", 1),
        ]
    }

    fn init(&self, input: char, _: &Ambient) -> Vars {
        let one = u64::from(input == '1');
        vec![
            Value::Uint(one),
            Value::Uint(one),
            Value::Uint(one),
            Value::Uint(one),
        ]
    }

    fn step(&self, v: &Vars, m: &Vars, initiator: bool, _: &Ambient) -> Result<Vars, MachineError> {
        let mut v = v.clone();
        let theirs = m[0].uint();
        match v[ROLE].uint() {
            ONE if theirs == ONE && initiator => {
                let count = v[COUNT].uint() + m[1].uint();
                let mut next = v[NEXT].uint().max(1);
                while next < count {
                    next *= 2;
                }
                v[COUNT] = Value::Uint(count);
                v[NEXT] = Value::Uint(next);
                v[OUT] = Value::from(next == count);
            }
            ONE if theirs == ONE => v[ROLE] = Value::Uint(ONE_SLEEP),
            ZERO | ONE_SLEEP if theirs == ONE => v[OUT] = m[2].clone(),
            _ => {}
        }
        Ok(v)
    }

    fn message(&self, v: &Vars) -> Vars {
        vec![v[ROLE].clone(), v[COUNT].clone(), v[OUT].clone()]
    }

    fn output(&self, v: &Vars) -> String {
        if v[OUT].uint() == 1 { "1".into() } else { "0".into() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_tracks_least_power_above() {
        let p = PowerOfTwo;
        let amb = Ambient::default();
        let mut leader = p.init('1', &amb);
        assert_eq!(p.output(&leader), "1");
        // Oracle: after absorbing k agents the output is 1 iff k+1 is a power of two.
        for k in 1..40u64 {
            let other = p.message(&p.init('1', &amb));
            leader = p.step(&leader, &other, true, &amb).unwrap();
            let total = k + 1;
            assert_eq!(leader[COUNT].uint(), total);
            assert_eq!(leader[NEXT].uint(), total.next_power_of_two());
            assert_eq!(p.output(&leader) == "1", total.is_power_of_two());
        }
    }

    #[test]
    fn responder_sleeps_and_zeros_copy() {
        let p = PowerOfTwo;
        let amb = Ambient::default();
        let one = p.init('1', &amb);
        let slept = p.step(&one, &p.message(&one), false, &amb).unwrap();
        assert_eq!(slept[ROLE].uint(), ONE_SLEEP);
        let zero = p.init('0', &amb);
        assert_eq!(p.output(&zero), "0");
        assert_eq!(p.output(&p.step(&zero, &p.message(&one), true, &amb).unwrap()), "1");
        assert_eq!(p.step(&zero, &p.message(&slept), true, &amb).unwrap(), zero);
    }
}
