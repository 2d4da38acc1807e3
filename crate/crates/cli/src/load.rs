use std::path::{Path, PathBuf};

use pm_core::machine::{Machine, ProtocolSpec};
use pm_core::protocols::{predicate_truth, program_by_name, tables, Compiled, DynProgram};
use pm_core::tmsim::{tm_protocol, TmProtocol, TmSpec};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formats::{parse_protocol, parse_tm, FormatError};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("unknown protocol `{0}`")]
    Unknown(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
}

pub enum Loaded {
    Program { name: String, proto: Compiled<DynProgram> },
    Table { name: String, spec: ProtocolSpec },
    Tm { name: String, tm: TmSpec, proto: TmProtocol },
}

fn read(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io { path: path.into(), source })
}

impl Loaded {
    /// Resolves a protocol name as accepted by `--protocol`.
    pub fn load(name: &str) -> Result<Loaded, LoadError> {
        if let Some(path) = name.strip_prefix("tm:") {
            let tm = parse_tm(&read(Path::new(path))?)
                .map_err(|source| LoadError::Format { path: path.into(), source })?;
            return Ok(Self::tm(name, tm));
        }
        if let Some(path) = name.strip_prefix("table:") {
            let spec = parse_protocol(&read(Path::new(path))?)
                .map_err(|source| LoadError::Format { path: path.into(), source })?;
            return Ok(Loaded::Table { name: name.into(), spec });
        }
        let spec = match name {
            "toggle" => Some(tables::toggle()),
            "or" => Some(tables::or_epidemic()),
            "copy" => Some(tables::initiator_copy()),
            _ => None,
        };
        if let Some(spec) = spec {
            return Ok(Loaded::Table { name: name.into(), spec });
        }
        let program = program_by_name(name).ok_or_else(|| LoadError::Unknown(name.into()))?;
        let proto = Compiled::new(program).expect("built-in programs compile");
        Ok(Loaded::Program { name: name.into(), proto })
    }

    pub fn tm(name: &str, tm: TmSpec) -> Loaded {
        Loaded::Tm {
            name: name.into(),
            proto: tm_protocol(tm.clone()),
            tm,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Loaded::Program { name, .. } | Loaded::Table { name, .. } | Loaded::Tm { name, .. } => name,
        }
    }

    pub fn machine(&self) -> &(dyn Machine + Sync) {
        match self {
            Loaded::Program { proto, .. } => proto,
            Loaded::Table { spec, .. } => spec,
            Loaded::Tm { proto, .. } => proto,
        }
    }

    pub fn input_chars(&self) -> Vec<char> {
        let m = self.machine();
        m.input_alphabet().iter().map(|&s| m.symbols().name(s)).collect()
    }

    /// Ground truth for inputs of the built-in predicates.
    pub fn oracle(&self, input: &str) -> Option<bool> {
        match self {
            Loaded::Program { name, .. } => predicate_truth(name, input).ok(),
            _ => None,
        }
    }

    /// A seeded input of size `n`, in sorted symbol order. For the built-in
    /// predicates half the draws are constructed to satisfy the predicate.
    pub fn random_input(&self, n: usize, seed: u64) -> String {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let alphabet = self.input_chars();
        let planted = match self.name() {
            "mult" if rng.gen_bool(0.5) => {
                // n + 1 = (a + 1)(b + 1) with c = ab; b's alone when n + 1 is prime.
                let splits: Vec<(usize, usize)> = (1..=n)
                    .filter(|&a| (n + 1) % (a + 1) == 0 && (n + 1) / (a + 1) >= 2)
                    .map(|a| (a, (n + 1) / (a + 1) - 1))
                    .collect();
                let (a, b) = splits.choose(&mut rng).copied().unwrap_or((0, n));
                Some(counts(&[('a', a), ('b', b), ('c', a * b)]))
            }
            "pow2" | "logp" if rng.gen_bool(0.5) => {
                let (hit, miss) = if self.name() == "pow2" { ('1', '0') } else { ('a', '0') };
                let t = rng.gen_range(0..=n.ilog2());
                Some(counts(&[(hit, 1 << t), (miss, n - (1 << t))]))
            }
            _ => None,
        };
        planted.unwrap_or_else(|| {
            let mut s: Vec<char> = (0..n).map(|_| *alphabet.choose(&mut rng).expect("inputs")).collect();
            s.sort_unstable();
            s.into_iter().collect()
        })
    }
}

fn counts(parts: &[(char, usize)]) -> String {
    let mut s: Vec<char> = parts.iter().flat_map(|&(c, k)| std::iter::repeat(c).take(k)).collect();
    s.sort_unstable();
    s.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_inputs_cover_both_answers() {
        for name in ["mult", "pow2", "logp"] {
            let p = Loaded::load(name).unwrap();
            for n in [4usize, 8, 15, 64] {
                let answers: Vec<bool> = (0..40)
                    .map(|seed| {
                        let x = p.random_input(n, seed);
                        assert_eq!(x.chars().count(), n);
                        p.oracle(&x).unwrap()
                    })
                    .collect();
                assert!(answers.contains(&true) && answers.contains(&false), "{name} n={n}");
                assert_eq!(p.random_input(n, 3), p.random_input(n, 3));
            }
        }
    }

    #[test]
    fn names_resolve() {
        for name in ["mult", "pow2", "logp", "ids", "toggle", "or", "copy"] {
            assert_eq!(Loaded::load(name).unwrap().name(), name);
        }
        assert!(matches!(Loaded::load("nope"), Err(LoadError::Unknown(_))));
        assert!(matches!(Loaded::load("tm:/no/such/file"), Err(LoadError::Io { .. })));
    }
}
