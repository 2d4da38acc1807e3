//! Single-tape Turing machines: a direct interpreter used as ground truth, and
//! a distributed simulation that spreads the tape over a population with ids.

pub mod distributed;
pub mod library;
mod monitor;

pub use distributed::{
    reassemble_tape, DistributedTm, ACCEPT, HOLD, IDLE, PASS, REJECT, RESET,
};
pub use monitor::{tm_protocol, AuditViolation, SimStatus, TmMonitor, TmProtocol};

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use hashbrown::HashSet;
use thiserror::Error;

use crate::machine::Move;

pub const TM_BLANK: char = '_';

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TmError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(char),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(char),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("no {0} state declared")]
    MissingState(&'static str),
    #[error("halting state `{0}` has outgoing transitions")]
    HaltingRule(String),
    #[error("input alphabet is empty")]
    NoInput,
    #[error("no verdict within {0} steps")]
    StepBoundExceeded(u64),
}

/// One option of the transition relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TmMove {
    pub next: u32,
    pub write: u8,
    pub dir: Move,
}

/// A Turing machine with one left-bounded tape. Symbol 0 is the blank.
///
/// A (state, symbol) pair without rules rejects. Moving left on cell 0 keeps the
/// head in place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmSpec {
    symbols: Vec<char>,
    states: Vec<String>,
    input: Vec<u8>,
    initial: u32,
    accept: u32,
    reject: u32,
    rows: BTreeMap<(u32, u8), Vec<TmMove>>,
    /// `s(n) = space.0 * n + space.1`.
    space: (u64, u64),
}

impl TmSpec {
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, c: char) -> Option<u8> {
        self.symbols.iter().position(|&x| x == c).map(|i| i as u8)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state(&self, name: &str) -> Option<u32> {
        self.states.iter().position(|s| s == name).map(|i| i as u32)
    }

    pub fn input_symbols(&self) -> &[u8] {
        &self.input
    }

    pub fn input_chars(&self) -> Vec<char> {
        self.input.iter().map(|&s| self.symbols[s as usize]).collect()
    }

    pub fn initial(&self) -> u32 {
        self.initial
    }

    pub fn accept(&self) -> u32 {
        self.accept
    }

    pub fn reject(&self) -> u32 {
        self.reject
    }

    pub fn is_halting(&self, q: u32) -> bool {
        q == self.accept || q == self.reject
    }

    pub fn options(&self, q: u32, s: u8) -> &[TmMove] {
        self.rows.get(&(q, s)).map_or(&[], Vec::as_slice)
    }

    pub fn is_deterministic(&self) -> bool {
        self.rows.values().all(|r| r.len() == 1)
    }

    /// Largest number of options in any row.
    pub fn fan_out(&self) -> usize {
        self.rows.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn space_coefficients(&self) -> (u64, u64) {
        self.space
    }

    pub fn space_bound(&self, n: u64) -> u64 {
        self.space.0 * n + self.space.1
    }

    pub fn rules(&self) -> impl Iterator<Item = (u32, u8, &TmMove)> {
        self.rows
            .iter()
            .flat_map(|(&(q, s), r)| r.iter().map(move |m| (q, s, m)))
    }

    pub fn parse_input(&self, text: &str) -> Result<Vec<u8>, TmError> {
        text.chars()
            .map(|c| {
                self.symbol(c)
                    .filter(|s| self.input.contains(s))
                    .ok_or(TmError::UnknownSymbol(c))
            })
            .collect()
    }

    pub fn render(&self, tape: &[u8]) -> String {
        tape.iter().map(|&s| self.symbols[s as usize]).collect()
    }

    pub fn initial_config(&self, input: &[u8]) -> TmConfig {
        TmConfig::new(self.initial, 0, input.to_vec())
    }

    /// Successors of a configuration, one per option. Empty when halted.
    pub fn successors(&self, c: &TmConfig) -> Vec<TmConfig> {
        if self.is_halting(c.state) {
            return Vec::new();
        }
        let opts = self.options(c.state, c.read());
        if opts.is_empty() {
            return alloc::vec![TmConfig { state: self.reject, ..c.clone() }];
        }
        opts.iter().map(|m| c.apply(m)).collect()
    }
}

/// Instantaneous description: state, head, tape without trailing blanks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TmConfig {
    pub state: u32,
    pub head: usize,
    pub tape: Vec<u8>,
}

impl TmConfig {
    pub fn new(state: u32, head: usize, mut tape: Vec<u8>) -> Self {
        while tape.last() == Some(&0) {
            tape.pop();
        }
        TmConfig { state, head, tape }
    }

    pub fn read(&self) -> u8 {
        self.tape.get(self.head).copied().unwrap_or(0)
    }

    pub fn apply(&self, m: &TmMove) -> TmConfig {
        let mut tape = self.tape.clone();
        if self.head >= tape.len() {
            tape.resize(self.head + 1, 0);
        }
        tape[self.head] = m.write;
        let head = match m.dir {
            Move::L => self.head.saturating_sub(1),
            Move::R => self.head + 1,
        };
        TmConfig::new(m.next, head, tape)
    }
}

/// Incremental construction of a [`TmSpec`].
#[derive(Clone, Debug)]
pub struct TmBuilder {
    symbols: Vec<char>,
    states: Vec<String>,
    input: Vec<u8>,
    initial: Option<u32>,
    accept: Option<u32>,
    reject: Option<u32>,
    rows: BTreeMap<(u32, u8), Vec<TmMove>>,
    space: (u64, u64),
}

impl TmBuilder {
    /// `symbols` are the non-blank tape symbols.
    pub fn new<'a>(
        symbols: impl IntoIterator<Item = char>,
        states: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, TmError> {
        let mut syms = alloc::vec![TM_BLANK];
        for c in symbols {
            if syms.contains(&c) {
                return Err(TmError::DuplicateSymbol(c));
            }
            syms.push(c);
        }
        let mut names: Vec<String> = Vec::new();
        for s in states {
            if names.iter().any(|n| n == s) {
                return Err(TmError::DuplicateState(s.to_string()));
            }
            names.push(s.to_string());
        }
        Ok(TmBuilder {
            symbols: syms,
            states: names,
            input: Vec::new(),
            initial: None,
            accept: None,
            reject: None,
            rows: BTreeMap::new(),
            space: (1, 1),
        })
    }

    fn state(&self, name: &str) -> Result<u32, TmError> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| i as u32)
            .ok_or_else(|| TmError::UnknownState(name.to_string()))
    }

    fn symbol(&self, c: char) -> Result<u8, TmError> {
        self.symbols
            .iter()
            .position(|&x| x == c)
            .map(|i| i as u8)
            .ok_or(TmError::UnknownSymbol(c))
    }

    pub fn input(&mut self, chars: impl IntoIterator<Item = char>) -> Result<&mut Self, TmError> {
        for c in chars {
            let s = self.symbol(c)?;
            if s == 0 {
                return Err(TmError::UnknownSymbol(c));
            }
            if !self.input.contains(&s) {
                self.input.push(s);
            }
        }
        Ok(self)
    }

    pub fn initial(&mut self, name: &str) -> Result<&mut Self, TmError> {
        self.initial = Some(self.state(name)?);
        Ok(self)
    }

    pub fn accept(&mut self, name: &str) -> Result<&mut Self, TmError> {
        self.accept = Some(self.state(name)?);
        Ok(self)
    }

    pub fn reject(&mut self, name: &str) -> Result<&mut Self, TmError> {
        self.reject = Some(self.state(name)?);
        Ok(self)
    }

    pub fn space(&mut self, per_agent: u64, extra: u64) -> &mut Self {
        self.space = (per_agent, extra);
        self
    }

    /// Adds `(q, s) -> (next, write, dir)`. Repeating a key adds a further option.
    pub fn rule(
        &mut self,
        q: &str,
        s: char,
        next: &str,
        write: char,
        dir: Move,
    ) -> Result<&mut Self, TmError> {
        let key = (self.state(q)?, self.symbol(s)?);
        let m = TmMove {
            next: self.state(next)?,
            write: self.symbol(write)?,
            dir,
        };
        let row = self.rows.entry(key).or_default();
        if !row.contains(&m) {
            row.push(m);
        }
        Ok(self)
    }

    pub fn build(&self) -> Result<TmSpec, TmError> {
        let initial = self.initial.ok_or(TmError::MissingState("initial"))?;
        let accept = self.accept.ok_or(TmError::MissingState("accept"))?;
        let reject = self.reject.ok_or(TmError::MissingState("reject"))?;
        if self.input.is_empty() {
            return Err(TmError::NoInput);
        }
        for &(q, _) in self.rows.keys() {
            if q == accept || q == reject {
                return Err(TmError::HaltingRule(self.states[q as usize].clone()));
            }
        }
        Ok(TmSpec {
            symbols: self.symbols.clone(),
            states: self.states.clone(),
            input: self.input.clone(),
            initial,
            accept,
            reject,
            rows: self.rows.clone(),
            space: self.space,
        })
    }
}

/// Choice index for a `k`-way nondeterministic step, from the partner's id.
pub fn nd_choice(k: usize, partner_id: u64) -> usize {
    (partner_id % k as u64) as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmVerdict {
    pub accepted: bool,
    /// Steps on the path that decided (deterministic: the only path).
    pub steps: u64,
    /// Final tape, for deterministic machines.
    pub tape: Option<Vec<u8>>,
}

/// Decides `input` by direct interpretation. Nondeterministic machines are
/// searched breadth-first over configurations; they accept iff some path does.
pub fn reference_tm_run(tm: &TmSpec, input: &[u8], step_bound: u64) -> Result<TmVerdict, TmError> {
    if tm.is_deterministic() {
        let trace = deterministic_trace(tm, input, step_bound)?;
        let last = trace.last().expect("trace starts with the initial configuration");
        return Ok(TmVerdict {
            accepted: last.state == tm.accept,
            steps: trace.len() as u64 - 1,
            tape: Some(last.tape.clone()),
        });
    }
    let start = tm.initial_config(input);
    let mut seen: HashSet<TmConfig> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back((start, 0u64));
    let mut cut = false;
    while let Some((c, depth)) = queue.pop_front() {
        if c.state == tm.accept {
            return Ok(TmVerdict {
                accepted: true,
                steps: depth,
                tape: None,
            });
        }
        if depth >= step_bound {
            cut |= !tm.is_halting(c.state);
            continue;
        }
        for next in tm.successors(&c) {
            if seen.insert(next.clone()) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    if cut {
        return Err(TmError::StepBoundExceeded(step_bound));
    }
    Ok(TmVerdict {
        accepted: false,
        steps: 0,
        tape: None,
    })
}

/// Every configuration of a deterministic run, initial one first, ending in a
/// halting state.
pub fn deterministic_trace(tm: &TmSpec, input: &[u8], step_bound: u64) -> Result<Vec<TmConfig>, TmError> {
    let mut trace = alloc::vec![tm.initial_config(input)];
    loop {
        let c = trace.last().expect("non-empty");
        if tm.is_halting(c.state) {
            return Ok(trace);
        }
        if trace.len() as u64 > step_bound {
            return Err(TmError::StepBoundExceeded(step_bound));
        }
        let next = tm.successors(c).swap_remove(0);
        trace.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::library::{divisor_tm, equality_tm};
    use super::*;

    #[test]
    fn choice_is_partner_mod_k() {
        assert_eq!(nd_choice(2, 7), 1);
        assert_eq!(nd_choice(3, 0), 0);
        assert_eq!(nd_choice(2, 4), 0);
    }

    #[test]
    fn equality_machine_verdicts() {
        let tm = equality_tm();
        let run = |s: &str| reference_tm_run(&tm, &tm.parse_input(s).unwrap(), 10_000).unwrap();
        assert!(run("aabb").accepted);
        assert!(!run("aab").accepted);
        assert!(run("ab0ba0").accepted);
        assert!(run("000").accepted);
        let v = run("abab");
        assert_eq!(tm.render(v.tape.as_ref().unwrap()), "YXXX");
    }

    #[test]
    fn equality_machine_matches_counting_oracle() {
        let tm = equality_tm();
        let alphabet = ['a', 'b', '0'];
        for n in 1..=6u32 {
            for code in 0..3usize.pow(n) {
                let mut k = code;
                let s: String = (0..n)
                    .map(|_| {
                        let c = alphabet[k % 3];
                        k /= 3;
                        c
                    })
                    .collect();
                let v = reference_tm_run(&tm, &tm.parse_input(&s).unwrap(), 10_000).unwrap();
                let count = |c| s.chars().filter(|&x| x == c).count();
                assert_eq!(v.accepted, count('a') == count('b'), "{s}");
                let visited = deterministic_trace(&tm, &tm.parse_input(&s).unwrap(), 10_000)
                    .unwrap()
                    .iter()
                    .map(|c| c.head as u64 + 1)
                    .max()
                    .unwrap();
                assert!(visited <= tm.space_bound(u64::from(n)));
            }
        }
    }

    #[test]
    fn divisor_machine_guesses() {
        let tm = divisor_tm();
        assert!(!tm.is_deterministic());
        assert_eq!(tm.fan_out(), 2);
        for na in 1..=15usize {
            let mut input = alloc::vec![tm.symbol('a').unwrap(); na];
            input.push(tm.symbol('0').unwrap());
            let v = reference_tm_run(&tm, &input, 1000).unwrap();
            assert_eq!(v.accepted, na % 2 == 0 || na % 3 == 0, "N_a = {na}");
        }
    }

    #[test]
    fn step_bound_is_reported() {
        let tm = equality_tm();
        let input = tm.parse_input("aabb").unwrap();
        assert_eq!(reference_tm_run(&tm, &input, 3), Err(TmError::StepBoundExceeded(3)));
    }

    #[test]
    fn halting_states_cannot_have_rules() {
        let mut b = TmBuilder::new(['a'], ["s", "y", "n"]).unwrap();
        b.input(['a']).unwrap().initial("s").unwrap().accept("y").unwrap().reject("n").unwrap();
        b.rule("y", 'a', "s", 'a', Move::R).unwrap();
        assert_eq!(b.build(), Err(TmError::HaltingRule("y".into())));
    }
}
