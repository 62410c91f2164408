//! Brute-force reference implementations. These deliberately avoid the
//! missing-set machinery: words are enumerated in order and applied to the
//! full state set directly, so they serve as an independent check on the
//! missing-state-automaton path.

use crate::automaton::{Automaton, StateSet};
use crate::word::Word;

/// Shortest k-compressing word of length at most `max_len`, by direct
/// enumeration in (length, lexicographic) order. Returns the length and
/// the first word achieving it.
pub fn shortest_compressing(aut: &Automaton, k: usize, max_len: usize) -> Option<(usize, Word)> {
    let full = StateSet::full(aut.n());
    for len in 0..=max_len {
        // Codes in increasing numeric order with bit i = letter i would not
        // be lexicographic; enumerate letters most-significant-first instead.
        for code in 0..(1u64 << len) {
            let letters = (0..len)
                .map(|i| {
                    let bit = code >> (len - 1 - i) & 1;
                    crate::word::Letter::from_index(bit as usize)
                })
                .collect();
            let w = Word::new(letters);
            let image = aut.apply_word(&full, &w).expect("same universe");
            if aut.n() - image.len() >= k {
                return Some((len, w));
            }
        }
    }
    None
}
