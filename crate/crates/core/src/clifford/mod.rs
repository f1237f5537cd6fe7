//! Dirac creation and annihilation operators on a stage.
//!
//! Stage `s` is the exterior algebra on its `Exp(s-1)` monadics, so it is a
//! fermionic Fock space with one mode per monadic: mode `k` is the monadic
//! `ι e_k` and a basis monomial of the stage is the bitmask of the modes it
//! contains (its serial number). The creator `γ_v` wedges by `v` on the left,
//! the annihilator `γ^u` is the left derivation by `u`.
//!
//! Operators are kept symbolically as normal-ordered words. Operators on
//! fewer modes embed in larger stages with the same mode indices, so mixed
//! arithmetic lifts to the larger operand.

mod checks;
pub mod normal;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

pub(crate) use checks::sample_planes;
pub use checks::{
    car_check, full_rotation_check, generator_from_duplex, rotation_suite, so_closure_check, spin_generator,
};

use crate::basis::{self, BasisMonomial, Monadic};
use crate::error::{PlexusError, Result};
use crate::grassmann::Element;
use crate::matrix::{SignedSparseMatrix, SparseMatrix};
use crate::scalar::{int, Rational};

/// Largest number of modes an operator word can address.
pub const MAX_MODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorKind {
    Creator,
    Annihilator,
}

/// A generator by mode index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub mode: usize,
    pub kind: GeneratorKind,
}

impl Letter {
    pub fn creator(mode: usize) -> Self {
        Letter { mode, kind: GeneratorKind::Creator }
    }

    pub fn annihilator(mode: usize) -> Self {
        Letter { mode, kind: GeneratorKind::Annihilator }
    }

    /// Action on a basis state; `None` when the result is zero.
    pub fn act(self, state: u64) -> Option<(u64, i8)> {
        let bit = 1u64 << self.mode;
        let above = if self.mode >= 63 { 0 } else { state >> (self.mode + 1) };
        let sign = if above.count_ones() % 2 == 0 { 1 } else { -1 };
        match self.kind {
            GeneratorKind::Creator if state & bit == 0 => Some((state | bit, sign)),
            GeneratorKind::Annihilator if state & bit != 0 => Some((state & !bit, sign)),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = 1u128 << self.mode;
        match self.kind {
            GeneratorKind::Creator => write!(f, "γ_e{label}"),
            GeneratorKind::Annihilator => write!(f, "γ^e{label}"),
        }
    }
}

/// A normal-ordered word: creators (descending mode) then annihilators
/// (ascending mode), each generator at most once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    pub creators: u64,
    pub annihilators: u64,
}

impl Word {
    pub const EMPTY: Word = Word { creators: 0, annihilators: 0 };

    fn from_sorted(letters: &[Letter]) -> Word {
        let mut w = Word::EMPTY;
        for l in letters {
            match l.kind {
                GeneratorKind::Creator => w.creators |= 1 << l.mode,
                GeneratorKind::Annihilator => w.annihilators |= 1 << l.mode,
            }
        }
        w
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out: Vec<Letter> = (0..64).rev().filter(|k| self.creators >> k & 1 == 1).map(Letter::creator).collect();
        out.extend((0..64).filter(|k| self.annihilators >> k & 1 == 1).map(Letter::annihilator));
        out
    }

    pub fn len(&self) -> usize {
        (self.creators.count_ones() + self.annihilators.count_ones()) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Highest mode used plus one.
    fn span(&self) -> usize {
        64 - (self.creators | self.annihilators).leading_zeros() as usize
    }

    /// Action on a basis state by bit manipulation.
    pub fn act(&self, state: u64) -> Option<(u64, i8)> {
        let mut s = state;
        let mut sign = 1i8;
        for l in self.letters().into_iter().rev() {
            let (next, sg) = l.act(s)?;
            s = next;
            sign *= sg;
        }
        Some((s, sign))
    }
}

/// Number of modes (monadics) of a stage: `Exp(stage-1)`, zero for stage 0.
pub fn stage_modes(stage: usize) -> Result<usize> {
    if stage == 0 {
        return Ok(0);
    }
    if stage > basis::MAX_ENUMERABLE_STAGE {
        return Err(PlexusError::RankTooLarge { requested: stage, max: basis::MAX_ENUMERABLE_STAGE });
    }
    Ok(basis::stage_dimension(stage - 1)? as usize)
}

/// Smallest stage whose modes include `modes` modes.
pub fn stage_for_modes(modes: usize) -> usize {
    (0..=basis::MAX_ENUMERABLE_STAGE).find(|&s| stage_modes(s).unwrap() >= modes).unwrap_or(usize::MAX)
}

/// The monadic labelling mode `k`: `ι e_k`.
pub fn mode_label(mode: usize) -> BasisMonomial {
    BasisMonomial::from_serial_u64(mode as u64).iota()
}

/// A generator named by its monadic label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordGenerator {
    pub index: BasisMonomial,
    pub kind: GeneratorKind,
}

impl CliffordGenerator {
    pub fn new(index: BasisMonomial, kind: GeneratorKind) -> Result<Self> {
        let g = CliffordGenerator { index, kind };
        g.mode()?;
        Ok(g)
    }

    pub fn creator(index: BasisMonomial) -> Result<Self> {
        Self::new(index, GeneratorKind::Creator)
    }

    pub fn annihilator(index: BasisMonomial) -> Result<Self> {
        Self::new(index, GeneratorKind::Annihilator)
    }

    pub fn from_letter(l: Letter) -> Self {
        CliffordGenerator { index: mode_label(l.mode), kind: l.kind }
    }

    /// Mode index: the serial of the label's body.
    pub fn mode(&self) -> Result<usize> {
        let [m] = self.index.factors() else {
            return Err(PlexusError::InvalidArgument(format!("generator label {} is not a monadic", self.index)));
        };
        match m.body().serial_u64() {
            Some(k) if (k as usize) < MAX_MODES => Ok(k as usize),
            _ => Err(PlexusError::InvalidArgument(format!("generator label {} is beyond stage 4", self.index))),
        }
    }

    pub fn letter(&self) -> Letter {
        Letter { mode: self.mode().expect("validated on construction"), kind: self.kind }
    }

    /// Smallest stage on which the generator acts.
    pub fn stage(&self) -> usize {
        self.index.rank()
    }

    pub fn operator(&self) -> CliffordOperator {
        let modes = stage_modes(self.stage()).unwrap_or(MAX_MODES);
        CliffordOperator::letter(modes, self.letter())
    }
}

/// Element of the Clifford algebra of a stage: rational combination of
/// normal-ordered words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliffordOperator {
    modes: usize,
    terms: BTreeMap<Word, Rational>,
}

fn accumulate(terms: &mut BTreeMap<Word, Rational>, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = terms.entry(w).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        terms.remove(&w);
    }
}

impl CliffordOperator {
    pub fn zero(modes: usize) -> Self {
        assert!(modes <= MAX_MODES, "at most {MAX_MODES} modes");
        CliffordOperator { modes, terms: BTreeMap::new() }
    }

    pub fn scalar(modes: usize, c: Rational) -> Self {
        let mut op = Self::zero(modes);
        accumulate(&mut op.terms, Word::EMPTY, c);
        op
    }

    pub fn identity(modes: usize) -> Self {
        Self::scalar(modes, Rational::one())
    }

    pub fn letter(modes: usize, l: Letter) -> Self {
        assert!(l.mode < modes, "mode {} outside {} modes", l.mode, modes);
        let mut op = Self::zero(modes);
        op.terms.insert(Word::from_sorted(&[l]), Rational::one());
        op
    }

    /// Product of generators in the given order.
    pub fn product(modes: usize, letters: &[Letter]) -> Self {
        let mut op = Self::zero(modes);
        for (w, c) in normal::normal_order(letters) {
            assert!(w.span() <= modes, "word exceeds {modes} modes");
            accumulate(&mut op.terms, w, int(c));
        }
        op
    }

    /// Creator `γ_k` on the modes of `stage`.
    pub fn creator(stage: usize, mode: usize) -> Result<Self> {
        Ok(Self::letter(stage_modes(stage)?, Letter::creator(mode)))
    }

    /// Annihilator `γ^k` on the modes of `stage`.
    pub fn annihilator(stage: usize, mode: usize) -> Result<Self> {
        Ok(Self::letter(stage_modes(stage)?, Letter::annihilator(mode)))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn stage(&self) -> usize {
        stage_for_modes(self.modes)
    }

    pub fn dimension(&self) -> usize {
        1usize << self.modes
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the operator is `c·1`.
    pub fn as_scalar(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Word::EMPTY).cloned(),
            _ => None,
        }
    }

    pub fn lift(&self, modes: usize) -> Self {
        assert!(modes >= self.modes && modes <= MAX_MODES);
        CliffordOperator { modes, terms: self.terms.clone() }
    }

    fn common(&self, other: &Self) -> usize {
        self.modes.max(other.modes)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.lift(self.common(other));
        for (w, c) in &other.terms {
            accumulate(&mut out.terms, *w, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.modes);
        for (w, x) in &self.terms {
            accumulate(&mut out.terms, *w, x * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.common(other));
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let mut letters = w1.letters();
                letters.extend(w2.letters());
                let coef = c1 * c2;
                for (w, s) in normal::normal_order(&letters) {
                    accumulate(&mut out.terms, w, &coef * int(s));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// Symbolic action on an element, through the monomial wedge and the
    /// left derivation. The result lives in the larger of the element's stage
    /// and the operator's stage.
    pub fn apply(&self, a: &Element) -> Element {
        let stage = a.stage().max(self.stage());
        let mut out = Element::zero(stage);
        for (w, c) in &self.terms {
            let letters = w.letters();
            for (m, x) in a.terms() {
                if let Some((sign, result)) = apply_word(&letters, m) {
                    let term = Element::term(stage, result, c * x * int(sign as i64)).expect("rank within stage");
                    out = out.add(&term).expect("same stage");
                }
            }
        }
        out
    }

    /// Action on a basis state (bitmask over modes).
    pub fn apply_state(&self, state: u64) -> Vec<(u64, Rational)> {
        let mut acc: BTreeMap<u64, Rational> = BTreeMap::new();
        for (w, c) in &self.terms {
            if let Some((s, sign)) = w.act(state) {
                *acc.entry(s).or_insert_with(Rational::zero) += c * int(sign as i64);
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Matrix over the classical basis of the operator's stage, indexed by
    /// serial number.
    pub fn matrix(&self) -> SparseMatrix {
        let dim = self.dimension();
        let columns = (0..dim as u64)
            .map(|j| self.apply_state(j).into_iter().map(|(i, v)| (i as usize, v)).collect())
            .collect();
        SparseMatrix::from_columns(dim, columns)
    }

    /// The matrix as a signed one-entry-per-column map, when it has that shape.
    pub fn signed_matrix(&self) -> Option<SignedSparseMatrix> {
        let dim = self.dimension();
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim as u64 {
            let image = self.apply_state(j);
            match image.as_slice() {
                [] => cols.push(None),
                [(i, v)] if v.is_one() => cols.push(Some((*i as usize, false))),
                [(i, v)] if (-v).is_one() => cols.push(Some((*i as usize, true))),
                _ => return None,
            }
        }
        Some(SignedSparseMatrix::from_fn(dim, |j| cols[j]))
    }

    /// Sparse coordinates over words, for linear-algebra checks.
    pub fn flatten(&self) -> Vec<(usize, Rational)> {
        assert!(self.modes <= 32, "flattening needs at most 32 modes");
        let mut out: Vec<(usize, Rational)> = self
            .terms
            .iter()
            .map(|(w, c)| (((w.creators << self.modes) | w.annihilators) as usize, c.clone()))
            .collect();
        out.sort_by_key(|e| e.0);
        out
    }
}

/// Applies a word (letters in order, rightmost first) to one monomial.
fn apply_word(letters: &[Letter], m: &BasisMonomial) -> Option<(i8, BasisMonomial)> {
    let mut current = m.clone();
    let mut sign = 1i8;
    for l in letters.iter().rev() {
        let v = mode_label(l.mode);
        match l.kind {
            GeneratorKind::Creator => {
                let (s, next) = v.wedge(&current);
                if s == 0 {
                    return None;
                }
                sign *= s;
                current = next;
            }
            GeneratorKind::Annihilator => {
                let target = Monadic::new(BasisMonomial::from_serial_u64(l.mode as u64));
                let j = current.factors().iter().position(|x| *x == target)?;
                if j % 2 == 1 {
                    sign = -sign;
                }
                let mut rest = current.factors().to_vec();
                rest.remove(j);
                current = BasisMonomial::from_factors(rest).expect("distinct factors").1;
            }
        }
    }
    Some((sign, current))
}

impl fmt::Display for CliffordOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let letters: Vec<String> = w.letters().iter().map(Letter::to_string).collect();
            match (c.is_one(), letters.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (true, false) => write!(f, "{}", letters.join(""))?,
                (false, false) => write!(f, "({c}) {}", letters.join(""))?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(q: u64) -> BasisMonomial {
        BasisMonomial::from_serial_u64(q)
    }

    #[test]
    fn creation_on_vacuum() {
        let g = CliffordGenerator::creator(e(1)).unwrap().operator();
        assert_eq!(g.apply(&Element::unit()), Element::serial(1));
    }

    #[test]
    fn derivation_sign_at_second_position() {
        let g = CliffordGenerator::annihilator(e(1)).unwrap().operator();
        let x = crate::expr::parse("e2 v e1").unwrap();
        assert_eq!(g.apply(&x), Element::serial(2).scale(&int(-1)).lift(2).unwrap());
    }

    #[test]
    fn creator_squares_to_zero_on_its_own_label() {
        let g = CliffordGenerator::creator(e(1)).unwrap().operator();
        assert!(g.apply(&Element::serial(1)).is_zero());
    }

    #[test]
    fn anticommutators() {
        let c1 = CliffordGenerator::creator(e(1)).unwrap().operator();
        let a1 = CliffordGenerator::annihilator(e(1)).unwrap().operator();
        let c2 = CliffordGenerator::creator(e(2)).unwrap().operator();
        let a2 = CliffordGenerator::annihilator(e(2)).unwrap().operator();
        assert_eq!(c1.anticommutator(&a1).as_scalar(), Some(int(1)));
        assert!(c1.anticommutator(&c2).is_zero());
        assert!(a1.anticommutator(&a2).is_zero());
        assert!(c2.anticommutator(&a1).is_zero());
    }

    #[test]
    fn labels_must_be_monadic() {
        assert!(CliffordGenerator::creator(e(3)).is_err());
        assert!(CliffordGenerator::creator(e(0)).is_err());
    }

    #[test]
    fn matrix_agrees_with_symbolic_action_on_stage_3() {
        let modes = stage_modes(3).unwrap();
        let op = CliffordOperator::product(modes, &[Letter::creator(2), Letter::annihilator(0), Letter::creator(1)])
            .add(&CliffordOperator::letter(modes, Letter::annihilator(3)));
        let m = op.matrix();
        for j in 0..16u64 {
            let symbolic = op.apply(&Element::serial(j).lift(3).unwrap());
            let column: Vec<(usize, Rational)> = symbolic
                .terms()
                .map(|(mono, c)| (mono.serial_u64().unwrap() as usize, c.clone()))
                .collect();
            let mut expected = m.column(j as usize).to_vec();
            expected.sort_by_key(|x| x.0);
            let mut got = column;
            got.sort_by_key(|x| x.0);
            assert_eq!(got, expected, "column {j}");
        }
    }
}
