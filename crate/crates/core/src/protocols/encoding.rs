//! Field-by-field serialization of program variables onto tape cells.
//!
//! Each field is written as `#` followed by binary digits, most significant
//! first. Zero is the single digit `0`. A symbol string is written as a `1`
//! marker digit followed by one fixed-width group of digits per symbol, so the
//! empty string is just the marker.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::machine::{MachineError, Symbol};

pub const ZERO: Symbol = Symbol(1);
pub const ONE: Symbol = Symbol(2);
pub const HASH: Symbol = Symbol(3);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Uint(u64),
    Str(Vec<u8>),
}

impl Value {
    /// Numeric value; strings read as 0.
    pub fn uint(&self) -> u64 {
        match self {
            Value::Uint(v) => *v,
            Value::Str(_) => 0,
        }
    }

    pub fn str(&self) -> &[u8] {
        match self {
            Value::Str(s) => s,
            Value::Uint(_) => &[],
        }
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Uint(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Uint(u64::from(v))
    }
}

pub type Vars = Vec<Value>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Uint { max_bits: Option<u32> },
    Str { width: u32, max_len: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    pub name: String,
    pub kind: FieldKind,
}

impl Field {
    pub fn uint(name: &str) -> Self {
        Field {
            name: name.to_string(),
            kind: FieldKind::Uint { max_bits: None },
        }
    }

    pub fn bounded(name: &str, max_bits: u32) -> Self {
        Field {
            name: name.to_string(),
            kind: FieldKind::Uint {
                max_bits: Some(max_bits),
            },
        }
    }

    pub fn string(name: &str, width: u32, max_len: Option<usize>) -> Self {
        Field {
            name: name.to_string(),
            kind: FieldKind::Str { width, max_len },
        }
    }
}

/// Binary length of `v`, counting zero as one digit.
pub fn bit_len(v: u64) -> u32 {
    (64 - v.leading_zeros()).max(1)
}

/// Digits a value occupies after its `#` tag.
pub fn value_len(field: &Field, value: &Value) -> usize {
    match (field.kind, value) {
        (FieldKind::Str { width, .. }, Value::Str(s)) => 1 + width as usize * s.len(),
        (_, v) => bit_len(v.uint()) as usize,
    }
}

/// Cells taken by the encoding: one tag plus the digits, per field.
pub fn encoded_len(schema: &[Field], vars: &[Value]) -> usize {
    schema
        .iter()
        .zip(vars)
        .map(|(f, v)| 1 + value_len(f, v))
        .sum()
}

fn push_bits(out: &mut Vec<Symbol>, v: u64, bits: u32) {
    for i in (0..bits).rev() {
        out.push(if v >> i & 1 == 1 { ONE } else { ZERO });
    }
}

pub fn encode(schema: &[Field], vars: &[Value]) -> Result<Vec<Symbol>, MachineError> {
    let mut out = Vec::with_capacity(encoded_len(schema, vars));
    encode_into(schema, vars, &mut out)?;
    Ok(out)
}

pub fn encode_into(
    schema: &[Field],
    vars: &[Value],
    out: &mut Vec<Symbol>,
) -> Result<(), MachineError> {
    if schema.len() != vars.len() {
        return Err(MachineError::Program(alloc::format!(
            "{} values for {} fields",
            vars.len(),
            schema.len()
        )));
    }
    for (field, value) in schema.iter().zip(vars) {
        out.push(HASH);
        match (field.kind, value) {
            (FieldKind::Uint { max_bits }, Value::Uint(v)) => {
                let bits = bit_len(*v);
                if let Some(cap) = max_bits {
                    if bits > cap {
                        return Err(overflow(field, bits as usize, cap as usize));
                    }
                }
                push_bits(out, *v, bits);
            }
            (FieldKind::Str { width, max_len }, Value::Str(s)) => {
                if let Some(cap) = max_len {
                    if s.len() > cap {
                        return Err(overflow(field, s.len(), cap));
                    }
                }
                out.push(ONE);
                for &sym in s {
                    if width < 8 && u32::from(sym) >> width != 0 {
                        return Err(MachineError::Program(alloc::format!(
                            "symbol {sym} does not fit {width} bits in `{}`",
                            field.name
                        )));
                    }
                    push_bits(out, u64::from(sym), width);
                }
            }
            _ => {
                return Err(MachineError::Program(alloc::format!(
                    "value kind does not match field `{}`",
                    field.name
                )))
            }
        }
    }
    Ok(())
}

fn overflow(field: &Field, needed: usize, cap: usize) -> MachineError {
    MachineError::EncodingOverflow {
        field: field.name.clone(),
        needed,
        cap,
    }
}

pub fn decode(schema: &[Field], cells: &[Symbol]) -> Result<Vars, MachineError> {
    let err = |msg: &str| MachineError::Decode(msg.to_string());
    let mut groups = Vec::with_capacity(schema.len());
    let mut rest = cells;
    while let Some((&first, tail)) = rest.split_first() {
        if first != HASH {
            return Err(err("expected field tag"));
        }
        let end = tail.iter().position(|&s| s == HASH).unwrap_or(tail.len());
        groups.push(&tail[..end]);
        rest = &tail[end..];
    }
    if groups.len() != schema.len() {
        return Err(MachineError::Decode(alloc::format!(
            "found {} fields, schema has {}",
            groups.len(),
            schema.len()
        )));
    }
    let mut vars = Vec::with_capacity(schema.len());
    for (field, digits) in schema.iter().zip(groups) {
        let bits = digits
            .iter()
            .map(|&s| match s {
                ZERO => Ok(0u8),
                ONE => Ok(1u8),
                _ => Err(err("non-binary digit")),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        match field.kind {
            FieldKind::Uint { .. } => {
                if bits.is_empty() || bits.len() > 64 {
                    return Err(err("bad integer length"));
                }
                vars.push(Value::Uint(
                    bits.iter().fold(0u64, |acc, &b| acc << 1 | u64::from(b)),
                ));
            }
            FieldKind::Str { width, .. } => {
                let w = width as usize;
                if bits.first() != Some(&1) || (w > 0 && (bits.len() - 1) % w != 0) || w == 0 {
                    return Err(err("bad string field"));
                }
                let s = bits[1..]
                    .chunks(w)
                    .map(|c| c.iter().fold(0u8, |acc, &b| acc << 1 | b))
                    .collect();
                vars.push(Value::Str(s));
            }
        }
    }
    Ok(vars)
}
