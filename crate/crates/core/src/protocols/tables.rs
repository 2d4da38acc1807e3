//! Small protocols written directly as δ/γ tables.

use crate::machine::{Move, ProtocolSpec, ProtocolSpecBuilder, State, Symbol, Transition};

const KEEP_ALL: [Move; 4] = [Move::L; 4];

/// Input 0/1 picks state A/B; every effective interaction flips both participants.
/// Output is 0 in A and 1 in B.
pub fn toggle() -> ProtocolSpec {
    let b = ProtocolSpecBuilder::new(['0', '1'], [], ["q0", "A", "B"], "q0").unwrap();
    let zero = b.symbol('0').unwrap();
    let one = b.symbol('1').unwrap();
    let (a, bb) = (b.state("A").unwrap(), b.state("B").unwrap());
    b.delta_all(|q, read| {
        let next = match q.0 {
            0 if read[0] == one => bb,
            0 => a,
            _ => q,
        };
        let working = if q.0 == 0 { Symbol::BLANK } else { read[0] };
        Transition {
            next,
            write: [working, if next == bb { one } else { zero }, read[2], read[3]],
            moves: KEEP_ALL,
            working_flag: false,
        }
    })
    .gamma_all(|x, y| {
        let flip = |s: State| if s == a { bb } else if s == bb { a } else { s };
        (flip(x), flip(y))
    })
    .build()
    .unwrap()
}

/// Increments the LSB-first binary number on the working tape, then halts
/// (flag 0). γ is the identity.
pub fn binary_counter() -> ProtocolSpec {
    let b = ProtocolSpecBuilder::new(['0', '1'], [], ["inc", "done"], "inc").unwrap();
    let zero = b.symbol('0').unwrap();
    let one = b.symbol('1').unwrap();
    let done = b.state("done").unwrap();
    b.delta_all(|q, read| {
        let rest = [read[1], read[2], read[3]];
        if q == done {
            return Transition {
                next: q,
                write: read,
                moves: KEEP_ALL,
                working_flag: false,
            };
        }
        if read[0] == one {
            Transition {
                next: q,
                write: [zero, rest[0], rest[1], rest[2]],
                moves: [Move::R, Move::L, Move::L, Move::L],
                working_flag: true,
            }
        } else {
            Transition {
                next: done,
                write: [one, rest[0], rest[1], rest[2]],
                moves: KEEP_ALL,
                working_flag: false,
            }
        }
    })
    .gamma_identity()
    .build()
    .unwrap()
}

fn bit_state_protocol(gamma: fn(bool, bool) -> (bool, bool)) -> ProtocolSpec {
    let b = ProtocolSpecBuilder::new(['0', '1'], [], ["q0", "Z", "O"], "q0").unwrap();
    let zero = b.symbol('0').unwrap();
    let one = b.symbol('1').unwrap();
    let (z, o) = (b.state("Z").unwrap(), b.state("O").unwrap());
    b.delta_all(|q, read| {
        let next = match q.0 {
            0 if read[0] == one => o,
            0 => z,
            _ => q,
        };
        Transition {
            next,
            write: [Symbol::BLANK, if next == o { one } else { zero }, read[2], read[3]],
            moves: KEEP_ALL,
            working_flag: false,
        }
    })
    .gamma_all(|x, y| {
        if x.0 == 0 || y.0 == 0 {
            return (x, y);
        }
        let (p, q) = gamma(x == o, y == o);
        (if p { o } else { z }, if q { o } else { z })
    })
    .build()
    .unwrap()
}

/// One-way epidemic of 1s: stably computes the OR of the inputs.
pub fn or_epidemic() -> ProtocolSpec {
    bit_state_protocol(|a, b| (a || b, a || b))
}

/// The responder copies the initiator's bit. With mixed inputs both unanimous
/// outcomes are reachable, so it computes nothing stably.
pub fn initiator_copy() -> ProtocolSpec {
    bit_state_protocol(|a, _| (a, a))
}
