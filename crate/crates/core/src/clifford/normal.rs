//! Normal ordering of generator words by anticommutation rewrites.
//!
//! A word is in normal order when its creators come first in descending mode
//! order, followed by its annihilators in ascending mode order. Any adjacent
//! pair out of order is rewritten with `ab = -ba + {a, b}`; a repeated
//! generator kills the word. The rewrite position is chosen by a pluggable
//! strategy, so confluence can be tested with random choices.

use std::collections::BTreeMap;

use super::{GeneratorKind, Letter, Word};

fn key(l: Letter) -> (u8, i64) {
    match l.kind {
        GeneratorKind::Creator => (0, -(l.mode as i64)),
        GeneratorKind::Annihilator => (1, l.mode as i64),
    }
}

fn anticommutator(a: Letter, b: Letter) -> bool {
    a.mode == b.mode && a.kind != b.kind
}

/// Normal-ordered expansion of a product of generators, always rewriting the
/// leftmost out-of-order pair.
pub fn normal_order(letters: &[Letter]) -> BTreeMap<Word, i64> {
    normal_order_with(letters, &mut |positions| positions[0])
}

/// Normal-ordered expansion; `choose` picks which of the out-of-order
/// adjacent positions to rewrite next and must return one of them.
pub fn normal_order_with(letters: &[Letter], choose: &mut dyn FnMut(&[usize]) -> usize) -> BTreeMap<Word, i64> {
    let mut out: BTreeMap<Word, i64> = BTreeMap::new();
    let mut work: Vec<(i64, Vec<Letter>)> = vec![(1, letters.to_vec())];
    while let Some((coef, word)) = work.pop() {
        let mut bad = Vec::new();
        let mut dead = false;
        for i in 0..word.len().saturating_sub(1) {
            let (a, b) = (key(word[i]), key(word[i + 1]));
            if a == b {
                dead = true;
                break;
            }
            if a > b {
                bad.push(i);
            }
        }
        if dead {
            continue;
        }
        if bad.is_empty() {
            let w = Word::from_sorted(&word);
            let e = out.entry(w).or_insert(0);
            *e += coef;
            if *e == 0 {
                out.remove(&w);
            }
            continue;
        }
        let i = choose(&bad);
        assert!(bad.contains(&i), "strategy must pick an out-of-order position");
        let (a, b) = (word[i], word[i + 1]);
        if anticommutator(a, b) {
            let mut contracted = word.clone();
            contracted.drain(i..i + 2);
            work.push((coef, contracted));
        }
        let mut swapped = word;
        swapped.swap(i, i + 1);
        work.push((-coef, swapped));
    }
    out
}
