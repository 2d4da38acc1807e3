//! Machines used by the test suite and shipped as examples.

use super::{TmBuilder, TmSpec};
use crate::machine::Move::{L, R};

/// Decides `#a = #b` over `{a, b, 0}` by crossing off one `a` and one `b` per
/// pass. Cell 0 carries a marked copy of its symbol so the return sweep can
/// find the left end. Uses `n + 1` cells.
pub fn equality_tm() -> TmSpec {
    let mut b = TmBuilder::new(
        ['a', 'b', '0', 'X', 'A', 'B', 'Z', 'Y'],
        ["start", "scan", "need_a", "need_b", "back", "acc", "rej"],
    )
    .expect("static alphabet");
    b.input(['a', 'b', '0']).unwrap();
    b.initial("start").unwrap().accept("acc").unwrap().reject("rej").unwrap();
    b.space(1, 1);
    let marked = [('a', 'A'), ('b', 'B'), ('0', 'Z'), ('X', 'Y')];
    let mut rule = |q, s, n, w, d| {
        b.rule(q, s, n, w, d).unwrap();
    };
    for (plain, mark) in marked.iter().copied().take(3) {
        rule("start", plain, "scan", mark, L);
    }
    rule("start", '_', "acc", '_', L);
    for (plain, mark) in marked {
        let (wants, cross) = match plain {
            'a' => (Some("need_b"), true),
            'b' => (Some("need_a"), true),
            _ => (None, false),
        };
        for (sym, crossed) in [(plain, 'X'), (mark, 'Y')] {
            match wants {
                Some(next) if cross => rule("scan", sym, next, crossed, R),
                _ => rule("scan", sym, "scan", sym, R),
            }
            // Looking for a partner: skip everything except the wanted letter.
            if plain != 'b' {
                rule("need_b", sym, "need_b", sym, R);
            }
            if plain != 'a' {
                rule("need_a", sym, "need_a", sym, R);
            }
            let back_next = if sym == mark { "scan" } else { "back" };
            rule("back", sym, back_next, sym, L);
        }
    }
    rule("scan", '_', "acc", '_', L);
    rule("need_b", 'b', "back", 'X', L);
    rule("need_b", 'B', "back", 'Y', L);
    rule("need_a", 'a', "back", 'X', L);
    rule("need_a", 'A', "back", 'Y', L);
    rule("need_a", '_', "rej", '_', L);
    rule("need_b", '_', "rej", '_', L);
    rule("back", '_', "back", '_', L);
    b.build().expect("well-formed")
}

/// Over `{a, 0}`: guesses `d` in `{2, 3}` on the first step, then accepts iff
/// `d` divides the number of `a`s. Uses `n + 1` cells.
pub fn divisor_tm() -> TmSpec {
    let mut b = TmBuilder::new(
        ['a', '0'],
        ["start", "m2_0", "m2_1", "m3_0", "m3_1", "m3_2", "acc", "rej"],
    )
    .expect("static alphabet");
    b.input(['a', '0']).unwrap();
    b.initial("start").unwrap().accept("acc").unwrap().reject("rej").unwrap();
    b.space(1, 1);
    for s in ['a', '0', '_'] {
        b.rule("start", s, "m2_0", s, L).unwrap();
        b.rule("start", s, "m3_0", s, L).unwrap();
    }
    let counters: [&[&str]; 2] = [&["m2_0", "m2_1"], &["m3_0", "m3_1", "m3_2"]];
    for names in counters {
        let k = names.len();
        for (j, q) in names.iter().enumerate() {
            b.rule(q, 'a', names[(j + 1) % k], 'a', R).unwrap();
            b.rule(q, '0', q, '0', R).unwrap();
            b.rule(q, '_', if j == 0 { "acc" } else { "rej" }, '_', L).unwrap();
        }
    }
    b.build().expect("well-formed")
}
