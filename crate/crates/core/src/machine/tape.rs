use alloc::vec::Vec;

/// A tape symbol. Symbol 0 is always the blank.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u8);

impl Symbol {
    pub const BLANK: Symbol = Symbol(0);

    pub fn is_blank(self) -> bool {
        self == Self::BLANK
    }
}

/// Head movement. There is no "stay" move; `L` on cell 0 leaves the head in place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    L,
    R,
}

/// A left-bounded tape with a single head.
///
/// Cells past the stored sequence are blank. The stored sequence never ends in a
/// blank, so two tapes with the same visible contents and head compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tape {
    cells: Vec<Symbol>,
    head: usize,
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_symbols(cells: impl IntoIterator<Item = Symbol>, head: usize) -> Self {
        let mut tape = Tape {
            cells: cells.into_iter().collect(),
            head,
        };
        tape.canonicalize();
        tape
    }

    pub fn head(&self) -> usize {
        self.head
    }

    /// Contents up to the last non-blank cell.
    pub fn content(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn get(&self, index: usize) -> Symbol {
        self.cells.get(index).copied().unwrap_or(Symbol::BLANK)
    }

    pub fn read(&self) -> Symbol {
        self.get(self.head)
    }

    pub fn write(&mut self, symbol: Symbol) {
        let head = self.head;
        self.set(head, symbol);
    }

    pub fn set(&mut self, index: usize, symbol: Symbol) {
        if index >= self.cells.len() {
            if symbol.is_blank() {
                return;
            }
            self.cells.resize(index + 1, Symbol::BLANK);
        }
        self.cells[index] = symbol;
        self.canonicalize();
    }

    pub fn shift(&mut self, mv: Move) {
        match mv {
            Move::L => self.head = self.head.saturating_sub(1),
            Move::R => self.head += 1,
        }
    }

    pub fn set_head(&mut self, head: usize) {
        self.head = head;
    }

    /// Replace the whole contents, keeping the head where it is.
    pub fn replace_content(&mut self, content: &[Symbol]) {
        self.cells.clear();
        self.cells.extend_from_slice(content);
        self.canonicalize();
    }

    /// Cells occupied by content or by the head: `max(last non-blank + 1, head + 1)`.
    pub fn extent(&self) -> usize {
        self.cells.len().max(self.head + 1)
    }

    fn canonicalize(&mut self) {
        while self.cells.last().is_some_and(|s| s.is_blank()) {
            self.cells.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn s(v: u8) -> Symbol {
        Symbol(v)
    }

    #[test]
    fn blank_tape_extent_is_head_occupancy() {
        let mut tape = Tape::new();
        assert_eq!(tape.extent(), 1);
        tape.set_head(5);
        assert_eq!(tape.extent(), 6);
    }

    #[test]
    fn extent_counts_last_non_blank() {
        let tape = Tape::from_symbols(vec![s(2), s(1), s(2)], 0);
        assert_eq!(tape.extent(), 3);
    }

    #[test]
    fn left_move_at_origin_stays() {
        let mut tape = Tape::new();
        tape.shift(Move::L);
        assert_eq!(tape.head(), 0);
        tape.shift(Move::R);
        tape.shift(Move::R);
        tape.shift(Move::L);
        assert_eq!(tape.head(), 1);
    }

    #[test]
    fn writing_blank_trims_trailing_cells() {
        let mut tape = Tape::from_symbols(vec![s(1), s(1), s(1)], 2);
        tape.write(Symbol::BLANK);
        assert_eq!(tape.content(), &[s(1), s(1)]);
        assert_eq!(tape.extent(), 3);
        tape.set(1, Symbol::BLANK);
        assert_eq!(tape.content(), &[s(1)]);
    }

    proptest! {
        #[test]
        fn canonical_form_is_unique(cells in proptest::collection::vec(0u8..3, 0..12), pad in 0usize..5, head in 0usize..16) {
            let plain = Tape::from_symbols(cells.iter().map(|&c| Symbol(c)), head);
            let padded = Tape::from_symbols(
                cells.iter().map(|&c| Symbol(c)).chain(core::iter::repeat(Symbol::BLANK).take(pad)),
                head,
            );
            prop_assert_eq!(&plain, &padded);
            let again = Tape::from_symbols(plain.content().iter().copied(), plain.head());
            prop_assert_eq!(plain, again);
        }
    }
}
