use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{AgentProgram, Ambient, Field, ProtocolError, Value, Vars};
use crate::machine::MachineError;

/// Variable names the wrapper keeps for itself.
pub const RESERVED: [&str; 7] = ["id", "sid", "rid", "ps", "sps", "rps", "binput"];

pub const ID: usize = 0;
pub const SID: usize = 1;
pub const PS: usize = 2;
pub const SPS: usize = 3;
pub const BINPUT: usize = 4;
/// Index of the first variable of the wrapped program.
pub const SUB: usize = 5;

/// Assigns ids `0..n` and teaches every agent `n`, running `sub` on top.
///
/// Same-id meetings bump the initiator's id and set both sizes from it.
/// Meetings of different ids spread the larger size, and an agent that learns a
/// larger size is reinitialized. Only agents agreeing on the size run `sub`,
/// one interaction step at a time, with `id`, `ps` and the partner's id as
/// ambient values.
#[derive(Clone, Debug)]
pub struct IdAssignment<S> {
    sub: S,
    name: String,
}

impl<S: AgentProgram> IdAssignment<S> {
    pub fn new(sub: S) -> Result<Self, ProtocolError> {
        for f in sub.state_schema().iter().chain(&sub.message_schema()) {
            if RESERVED.contains(&f.name.as_str()) {
                return Err(ProtocolError::ReservedField(f.name.clone()));
            }
        }
        let name = match sub.name() {
            "probe" => "ids".into(),
            other => alloc::format!("ids+{other}"),
        };
        Ok(IdAssignment { sub, name })
    }

    pub fn sub(&self) -> &S {
        &self.sub
    }

    fn reinit(&self, v: &mut Vars) {
        let input = self.sub.inputs()[v[BINPUT].uint() as usize];
        let amb = Ambient {
            id: v[ID].uint(),
            population: v[PS].uint(),
            partner_id: 0,
        };
        v.truncate(SUB);
        v.extend(self.sub.init(input, &amb));
    }
}

impl<S: AgentProgram> AgentProgram for IdAssignment<S> {
    fn name(&self) -> &str {
        &self.name
    }

    fn inputs(&self) -> &[char] {
        self.sub.inputs()
    }

    fn state_schema(&self) -> Vec<Field> {
        let mut s = vec![
            Field::uint("id"),
            Field::uint("sid"),
            Field::uint("ps"),
            Field::uint("sps"),
            Field::uint("binput"),
        ];
        s.extend(self.sub.state_schema());
        s
    }

    fn message_schema(&self) -> Vec<Field> {
        let mut s = vec![Field::uint("sid"), Field::uint("sps")];
        s.extend(self.sub.message_schema());
        s
    }

    fn init(&self, input: char, _: &Ambient) -> Vars {
        let b = self.sub.inputs().iter().position(|&c| c == input).unwrap_or(0) as u64;
        let mut v = vec![
            Value::Uint(0),
            Value::Uint(0),
            Value::Uint(1),
            Value::Uint(1),
            Value::Uint(b),
        ];
        self.reinit(&mut v);
        v
    }

    fn step(&self, v: &Vars, m: &Vars, initiator: bool, _: &Ambient) -> Result<Vars, MachineError> {
        let mut v = v.clone();
        let (rid, rps) = (m[0].uint(), m[1].uint());
        let id = v[ID].uint();
        let ps = v[PS].uint();
        if rid == id {
            if initiator {
                v[ID] = Value::Uint(id + 1);
                v[SID] = Value::Uint(id + 1);
                v[PS] = Value::Uint(id + 2);
            } else {
                v[PS] = Value::Uint(id + 2);
            }
            v[SPS] = v[PS].clone();
            self.reinit(&mut v);
        } else if rps > ps {
            v[PS] = Value::Uint(rps);
            v[SPS] = Value::Uint(rps);
            self.reinit(&mut v);
        } else if rps == ps {
            let amb = Ambient {
                id,
                population: ps,
                partner_id: rid,
            };
            let sub = self.sub.step(&v[SUB..].to_vec(), &m[2..].to_vec(), initiator, &amb)?;
            v.truncate(SUB);
            v.extend(sub);
        }
        Ok(v)
    }

    fn message(&self, v: &Vars) -> Vars {
        let mut m = vec![v[SID].clone(), v[SPS].clone()];
        m.extend(self.sub.message(&v[SUB..].to_vec()));
        m
    }

    fn output(&self, v: &Vars) -> String {
        self.sub.output(&v[SUB..].to_vec())
    }
}

/// A wrapped program that does nothing and outputs nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct Noop;

/// A wrapped program that mirrors the ambient id and size and outputs them as
/// `id#ps` in binary. Lets output stability track the id layer.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdProbe;

const INPUTS_01: [char; 2] = ['0', '1'];

impl AgentProgram for Noop {
    fn name(&self) -> &str {
        "noop"
    }
    fn inputs(&self) -> &[char] {
        &INPUTS_01
    }
    fn state_schema(&self) -> Vec<Field> {
        Vec::new()
    }
    fn message_schema(&self) -> Vec<Field> {
        Vec::new()
    }
    fn init(&self, _: char, _: &Ambient) -> Vars {
        Vec::new()
    }
    fn step(&self, _: &Vars, _: &Vars, _: bool, _: &Ambient) -> Result<Vars, MachineError> {
        Ok(Vec::new())
    }
    fn message(&self, _: &Vars) -> Vars {
        Vec::new()
    }
    fn output(&self, _: &Vars) -> String {
        String::new()
    }
}

impl AgentProgram for IdProbe {
    fn name(&self) -> &str {
        "probe"
    }
    fn inputs(&self) -> &[char] {
        &INPUTS_01
    }
    fn state_schema(&self) -> Vec<Field> {
        vec![Field::uint("seen_id"), Field::uint("seen_ps")]
    }
    fn message_schema(&self) -> Vec<Field> {
        Vec::new()
    }
    fn init(&self, _: char, amb: &Ambient) -> Vars {
        vec![Value::Uint(amb.id), Value::Uint(amb.population)]
    }
    fn step(&self, _: &Vars, _: &Vars, _: bool, amb: &Ambient) -> Result<Vars, MachineError> {
        Ok(vec![Value::Uint(amb.id), Value::Uint(amb.population)])
    }
    fn message(&self, _: &Vars) -> Vars {
        Vec::new()
    }
    fn output(&self, v: &Vars) -> String {
        alloc::format!("{:b}#{:b}", v[0].uint(), v[1].uint())
    }
}
