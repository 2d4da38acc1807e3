//! Text formats for table protocols (`.pm`) and Turing machines (`.tm`).
//!
//! Both are line based. `#` starts a comment, blank lines are ignored, tokens
//! are separated by whitespace and `_` is the blank symbol.
//!
//! Protocol file:
//!
//! ```text
//! inputs 0 1
//! symbols X Y            # further tape symbols, optional
//! states q0 A B
//! initial q0
//! delta q0 1*** -> B _1== LLLL 0
//! gamma A B -> B A
//! ```
//!
//! A `delta` row names a state (or `*`), four scanned symbols for the working,
//! output, incoming and outgoing tapes (`*` matches anything), the next state
//! (`=` keeps it), four written symbols (`=` keeps the scanned one), four moves
//! and the new working flag. `gamma` rows map an (initiator, responder) pair of
//! states, with `*` and `=` as above. Later rows override earlier ones; every
//! entry must end up defined.
//!
//! TM file:
//!
//! ```text
//! symbols a b X
//! input a b
//! states start scan acc rej
//! initial start
//! accept acc
//! reject rej
//! space 1 1              # s(n) = 1*n + 1 cells
//! start a -> scan X R
//! ```
//!
//! Repeating a `(state, symbol)` key adds a nondeterministic option. A missing
//! key rejects.

use pm_core::machine::{Move, ProtocolSpec, ProtocolSpecBuilder, SpecError, State, Symbol, Transition};
use pm_core::tmsim::{TmBuilder, TmError, TmSpec};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Spec { line: usize, source: SpecError },
    #[error("line {line}: {source}")]
    Tm { line: usize, source: TmError },
    #[error("incomplete protocol: {0}")]
    Incomplete(SpecError),
    #[error("incomplete machine: {0}")]
    IncompleteTm(TmError),
    #[error("missing `{0}` line")]
    Missing(&'static str),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Non-empty lines with comments removed, tokenized, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn single_char(line: usize, tok: &str) -> Result<char, FormatError> {
    let mut it = tok.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(syntax(line, format!("expected one symbol, got `{tok}`"))),
    }
}

fn four(line: usize, tok: &str, what: &str) -> Result<[char; 4], FormatError> {
    let cs: Vec<char> = tok.chars().collect();
    cs.try_into()
        .map_err(|_| syntax(line, format!("{what} needs exactly four characters, got `{tok}`")))
}

fn moves(line: usize, tok: &str) -> Result<[Move; 4], FormatError> {
    let mut out = [Move::L; 4];
    for (slot, c) in out.iter_mut().zip(four(line, tok, "moves")?) {
        *slot = match c {
            'L' => Move::L,
            'R' => Move::R,
            _ => return Err(syntax(line, format!("move must be L or R, got `{c}`"))),
        };
    }
    Ok(out)
}

struct DeltaRow {
    state: Option<State>,
    read: [Option<Symbol>; 4],
    next: Option<State>,
    write: [Option<Symbol>; 4],
    moves: [Move; 4],
    flag: bool,
}

struct GammaRow {
    pair: (Option<State>, Option<State>),
    out: (Option<State>, Option<State>),
}

pub fn parse_protocol(text: &str) -> Result<ProtocolSpec, FormatError> {
    let mut inputs: Option<Vec<char>> = None;
    let mut extra: Vec<char> = Vec::new();
    let mut states: Option<Vec<String>> = None;
    let mut initial: Option<(usize, String)> = None;
    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for (line, toks) in lines(text) {
        let args = &toks[1..];
        match toks[0] {
            "inputs" => {
                inputs = Some(args.iter().map(|t| single_char(line, t)).collect::<Result<_, _>>()?)
            }
            "symbols" => {
                for t in args {
                    extra.push(single_char(line, t)?);
                }
            }
            "states" => states = Some(args.iter().map(|s| s.to_string()).collect()),
            "initial" => match args {
                [q] => initial = Some((line, q.to_string())),
                _ => return Err(syntax(line, "`initial` takes one state")),
            },
            "delta" | "gamma" => rows.push((line, toks.iter().map(|s| s.to_string()).collect())),
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let inputs = inputs.ok_or(FormatError::Missing("inputs"))?;
    let states = states.ok_or(FormatError::Missing("states"))?;
    let (init_line, initial) = initial.ok_or(FormatError::Missing("initial"))?;
    let mut b = ProtocolSpecBuilder::new(inputs, extra, states.iter().map(String::as_str), &initial)
        .map_err(|source| FormatError::Spec { line: init_line, source })?;

    let state_or_any = |b: &ProtocolSpecBuilder, line: usize, tok: &str, any: &str| {
        if tok == any {
            Ok(None)
        } else {
            b.state(tok).map(Some).map_err(|source| FormatError::Spec { line, source })
        }
    };
    let symbols_or_any = |b: &ProtocolSpecBuilder, line: usize, tok: &str, any: char, what: &str| {
        let mut out = [None; 4];
        for (slot, c) in out.iter_mut().zip(four(line, tok, what)?) {
            if c != any {
                *slot = Some(b.symbol(c).map_err(|source| FormatError::Spec { line, source })?);
            }
        }
        Ok::<_, FormatError>(out)
    };

    let mut deltas = Vec::new();
    let mut gammas = Vec::new();
    for (line, toks) in &rows {
        let line = *line;
        let t: Vec<&str> = toks.iter().map(String::as_str).collect();
        match t.as_slice() {
            ["delta", q, read, "->", next, write, mv, flag] => deltas.push(DeltaRow {
                state: state_or_any(&b, line, q, "*")?,
                read: symbols_or_any(&b, line, read, '*', "scanned symbols")?,
                next: state_or_any(&b, line, next, "=")?,
                write: symbols_or_any(&b, line, write, '=', "written symbols")?,
                moves: moves(line, mv)?,
                flag: match *flag {
                    "0" => false,
                    "1" => true,
                    f => return Err(syntax(line, format!("flag must be 0 or 1, got `{f}`"))),
                },
            }),
            ["gamma", a, c, "->", x, y] => gammas.push(GammaRow {
                pair: (state_or_any(&b, line, a, "*")?, state_or_any(&b, line, c, "*")?),
                out: (state_or_any(&b, line, x, "=")?, state_or_any(&b, line, y, "=")?),
            }),
            ["delta", ..] => {
                return Err(syntax(line, "expected `delta STATE RRRR -> STATE WWWW MMMM FLAG`"))
            }
            _ => return Err(syntax(line, "expected `gamma STATE STATE -> STATE STATE`")),
        }
    }

    let domain: Vec<(State, [Symbol; 4])> = b.delta_domain().collect();
    for (q, read) in domain {
        let hit = deltas.iter().rev().find(|r| {
            r.state.is_none_or(|s| s == q) && r.read.iter().zip(read).all(|(p, s)| p.is_none_or(|p| p == s))
        });
        if let Some(r) = hit {
            let mut write = read;
            for (w, o) in write.iter_mut().zip(r.write) {
                if let Some(o) = o {
                    *w = o;
                }
            }
            b.set_delta(
                q,
                read,
                Transition {
                    next: r.next.unwrap_or(q),
                    write,
                    moves: r.moves,
                    working_flag: r.flag,
                },
            );
        }
    }
    let count = b.state_count() as u32;
    for x in 0..count {
        for y in 0..count {
            let (x, y) = (State(x), State(y));
            let hit = gammas
                .iter()
                .rev()
                .find(|g| g.pair.0.is_none_or(|s| s == x) && g.pair.1.is_none_or(|s| s == y));
            if let Some(g) = hit {
                b.set_gamma(x, y, (g.out.0.unwrap_or(x), g.out.1.unwrap_or(y)));
            }
        }
    }
    b.build().map_err(FormatError::Incomplete)
}

pub fn parse_tm(text: &str) -> Result<TmSpec, FormatError> {
    let mut symbols: Option<Vec<char>> = None;
    let mut states: Option<Vec<String>> = None;
    let mut rest: Vec<(usize, Vec<&str>)> = Vec::new();
    for (line, toks) in lines(text) {
        match toks[0] {
            "symbols" => {
                symbols = Some(toks[1..].iter().map(|t| single_char(line, t)).collect::<Result<_, _>>()?)
            }
            "states" => states = Some(toks[1..].iter().map(|s| s.to_string()).collect()),
            _ => rest.push((line, toks)),
        }
    }
    let symbols = symbols.ok_or(FormatError::Missing("symbols"))?;
    let states = states.ok_or(FormatError::Missing("states"))?;
    let mut b = TmBuilder::new(symbols, states.iter().map(String::as_str))
        .map_err(|source| FormatError::Tm { line: 1, source })?;
    for (line, toks) in rest {
        let tm = |source| FormatError::Tm { line, source };
        match toks.as_slice() {
            ["input", chars @ ..] => {
                let cs = chars.iter().map(|t| single_char(line, t)).collect::<Result<Vec<_>, _>>()?;
                b.input(cs).map_err(tm)?;
            }
            ["initial", q] => {
                b.initial(q).map_err(tm)?;
            }
            ["accept", q] => {
                b.accept(q).map_err(tm)?;
            }
            ["reject", q] => {
                b.reject(q).map_err(tm)?;
            }
            ["space", a, c] => {
                let num = |t: &str| t.parse::<u64>().map_err(|_| syntax(line, format!("bad number `{t}`")));
                b.space(num(a)?, num(c)?);
            }
            [q, s, "->", next, w, d] => {
                let dir = match *d {
                    "L" => Move::L,
                    "R" => Move::R,
                    _ => return Err(syntax(line, format!("move must be L or R, got `{d}`"))),
                };
                b.rule(q, single_char(line, s)?, next, single_char(line, w)?, dir).map_err(tm)?;
            }
            _ => return Err(syntax(line, "expected a directive or `STATE SYM -> STATE SYM L|R`")),
        }
    }
    b.build().map_err(FormatError::IncompleteTm)
}

/// Renders `tm` in the format read by [`parse_tm`].
pub fn write_tm(tm: &TmSpec) -> String {
    let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
    let mut out = String::new();
    out += &format!("symbols {}\n", join(&mut tm.symbols()[1..].iter().map(|c| c.to_string())));
    out += &format!("input {}\n", join(&mut tm.input_chars().into_iter().map(|c| c.to_string())));
    out += &format!("states {}\n", tm.states().join(" "));
    let name = |q: u32| tm.states()[q as usize].as_str();
    out += &format!("initial {}\naccept {}\nreject {}\n", name(tm.initial()), name(tm.accept()), name(tm.reject()));
    let (a, c) = tm.space_coefficients();
    out += &format!("space {a} {c}\n");
    for (q, s, m) in tm.rules() {
        let dir = match m.dir {
            Move::L => 'L',
            Move::R => 'R',
        };
        out += &format!(
            "{} {} -> {} {} {dir}\n",
            name(q),
            tm.symbols()[s as usize],
            name(m.next),
            tm.symbols()[m.write as usize]
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use pm_core::protocols::tables;
    use pm_core::tmsim::library::{divisor_tm, equality_tm};

    const TOGGLE: &str = include_str!("../machines/toggle.pm");

    #[test]
    fn toggle_file_matches_builtin() {
        assert_eq!(parse_protocol(TOGGLE).unwrap(), tables::toggle());
    }

    #[test]
    fn shipped_machines_match_library() {
        assert_eq!(parse_tm(include_str!("../machines/eq.tm")).unwrap(), equality_tm());
        assert_eq!(parse_tm(include_str!("../machines/divisor.tm")).unwrap(), divisor_tm());
    }

    #[test]
    fn tm_round_trip() {
        for tm in [equality_tm(), divisor_tm()] {
            assert_eq!(parse_tm(&write_tm(&tm)).unwrap(), tm);
        }
    }

    #[test]
    fn errors_carry_lines() {
        let bad = "inputs 0 1\nstates q\ninitial q\ndelta q **** -> q ==== LLLX 0\n";
        assert!(matches!(parse_protocol(bad), Err(FormatError::Syntax { line: 4, .. })));
        let bad = "inputs 0 1\nstates q\ninitial q\n\ngamma q r -> q q\n";
        assert!(matches!(parse_protocol(bad), Err(FormatError::Spec { line: 5, .. })));
        let gap = "inputs 0\nstates q\ninitial q\ngamma * * -> = =\n";
        assert!(matches!(parse_protocol(gap), Err(FormatError::Incomplete(_))));
        let bad = "symbols a\nstates s y n\ninput a\ninitial s\naccept y\nreject n\ns a -> y b R\n";
        assert!(matches!(parse_tm(bad), Err(FormatError::Tm { line: 7, .. })));
        let bad = "symbols a\nstates s y n\ninput a\ninitial s\naccept y\nreject n\nspace 1 x\n";
        assert!(matches!(parse_tm(bad), Err(FormatError::Syntax { line: 7, .. })));
    }
}
