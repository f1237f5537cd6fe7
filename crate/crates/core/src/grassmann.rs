//! Superpositions of classical basis monomials with exact rational
//! coefficients: the linear algebra, the linear unitization ι, the graded
//! wedge product, the Deg/Rank operators, the propagated Hilbert metric, and
//! the dual and duplex spaces.
//!
//! The Hilbert metric is propagated from `‖r‖ = r²` on stage 0 with the usual
//! exterior-algebra convention: products of different degree are orthogonal,
//! and same-degree products pair through the determinant of the Gram matrix
//! of their factors. Under this convention the classical basis is
//! orthonormal at every stage.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::basis::{BasisMonomial, RenderFormat};
use crate::error::{PlexusError, Result};
use crate::linalg;
use crate::scalar::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Degree,
    Rank,
}

impl Grading {
    fn of(self, m: &BasisMonomial) -> usize {
        match self {
            Grading::Degree => m.degree(),
            Grading::Rank => m.rank(),
        }
    }
}

/// Element of a stage: finite combination of basis monomials of rank at most
/// `stage`. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    stage: usize,
    terms: BTreeMap<BasisMonomial, Rational>,
}

fn accumulate(terms: &mut BTreeMap<BasisMonomial, Rational>, m: BasisMonomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match terms.entry(m) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl Element {
    pub fn zero(stage: usize) -> Self {
        Element { stage, terms: BTreeMap::new() }
    }

    /// A single basis monomial at its own rank.
    pub fn monomial(m: BasisMonomial) -> Self {
        let stage = m.rank();
        Element::term(stage, m, Rational::one()).expect("rank equals stage")
    }

    pub fn term(stage: usize, m: BasisMonomial, c: Rational) -> Result<Self> {
        if m.rank() > stage {
            return Err(PlexusError::StageMismatch { left: m.rank(), right: stage });
        }
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, m, c);
        Ok(Element { stage, terms })
    }

    /// `e_q` at the smallest stage containing it.
    pub fn serial(q: u64) -> Self {
        Element::monomial(BasisMonomial::from_serial_u64(q))
    }

    pub fn unit() -> Self {
        Element::monomial(BasisMonomial::unit())
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &BasisMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The same element viewed in a higher stage.
    pub fn lift(&self, stage: usize) -> Result<Self> {
        if stage < self.stage {
            return Err(PlexusError::StageMismatch { left: self.stage, right: stage });
        }
        Ok(Element { stage, terms: self.terms.clone() })
    }

    /// Smallest stage holding every term (0 for the zero element).
    pub fn min_stage(&self) -> usize {
        self.terms.keys().map(BasisMonomial::rank).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        if self.stage != other.stage {
            return Err(PlexusError::StageMismatch { left: self.stage, right: other.stage });
        }
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&mut terms, m.clone(), c.clone());
        }
        Ok(Element { stage: self.stage, terms })
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Element {
        if c.is_zero() {
            return Element::zero(self.stage);
        }
        let terms = self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect();
        Element { stage: self.stage, terms }
    }

    /// Graded exterior product, bilinear extension of the basis wedge.
    pub fn wedge(&self, other: &Element) -> Element {
        let stage = self.stage.max(other.stage);
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (sign, m) = a.wedge(b);
                if sign != 0 {
                    accumulate(&mut terms, m, ca * cb * int(sign as i64));
                }
            }
        }
        Element { stage, terms }
    }

    /// Linear ι: applies the unitization to every monomial; lands in the next
    /// stage, homogeneous of degree 1.
    pub fn iota(&self) -> Element {
        let terms = self.terms.iter().map(|(m, c)| (m.iota(), c.clone())).collect();
        Element { stage: self.stage + 1, terms }
    }

    pub fn grade_project(&self, by: Grading, value: usize) -> Element {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| by.of(m) == value)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Element { stage: self.stage, terms }
    }

    /// The Deg or Rank operator: multiplies each homogeneous part by its grade.
    pub fn apply_grading(&self, by: Grading) -> Element {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let g = by.of(m) as i64;
            accumulate(&mut terms, m.clone(), c * int(g));
        }
        Element { stage: self.stage, terms }
    }

    pub fn hilbert_inner(&self, other: &Element) -> Result<Rational> {
        if self.stage != other.stage {
            return Err(PlexusError::StageMismatch { left: self.stage, right: other.stage });
        }
        let mut by_degree: BTreeMap<usize, Vec<(&BasisMonomial, &Rational)>> = BTreeMap::new();
        for (m, c) in &other.terms {
            by_degree.entry(m.degree()).or_default().push((m, c));
        }
        let mut acc = Rational::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in by_degree.get(&a.degree()).into_iter().flatten() {
                let g = monomial_gram(a, b);
                if !g.is_zero() {
                    acc += ca * *cb * g;
                }
            }
        }
        Ok(acc)
    }

    /// Hilbert norm `‖Q‖ = ⟨Q, Q⟩`.
    pub fn hilbert_norm(&self) -> Rational {
        self.hilbert_inner(self).expect("same stage")
    }

    /// The metric isomorphism onto the dual. The classical basis is
    /// orthonormal, so the dual carries the same coefficients.
    pub fn hilbert_dual(&self) -> DualElement {
        DualElement { stage: self.stage, coterms: self.terms.clone() }
    }

    pub fn render(&self, format: RenderFormat) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push(' ');
            }
            out.push_str(&m.render(format));
        }
        out
    }

    /// JSON form: list of `[serial-or-expression, numerator, denominator]`.
    pub fn to_json(&self) -> serde_json::Value {
        let triples: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                serde_json::json!([
                    m.render(RenderFormat::Serial),
                    c.numer().to_string(),
                    c.denom().to_string()
                ])
            })
            .collect();
        serde_json::json!({ "stage": self.stage, "terms": triples })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Element> {
        let bad = |msg: &str| PlexusError::InvalidArgument(format!("element JSON: {msg}"));
        let stage = value["stage"].as_u64().ok_or_else(|| bad("missing stage"))? as usize;
        let mut out = Element::zero(stage);
        for t in value["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let arr = t.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("term must be a triple"))?;
            let label = arr[0].as_str().ok_or_else(|| bad("label must be a string"))?;
            let num: num_bigint::BigInt =
                arr[1].as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("numerator"))?;
            let den: num_bigint::BigInt =
                arr[2].as_str().and_then(|s| s.parse().ok()).ok_or_else(|| bad("denominator"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            let e = crate::expr::parse(label)?.lift(stage)?;
            out = out.add(&e.scale(&Rational::new(num, den)))?;
        }
        Ok(out)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderFormat::Expr))
    }
}

/// Inner product of two basis monomials under the propagated metric: zero
/// across degrees, otherwise the determinant of the Gram matrix of the
/// monadic bodies (computed recursively).
pub fn monomial_gram(a: &BasisMonomial, b: &BasisMonomial) -> Rational {
    if a.degree() != b.degree() {
        return Rational::zero();
    }
    if a.degree() == 0 {
        // Stage 0 is ℝ with ‖r‖ = r².
        return Rational::one();
    }
    let gram: linalg::DenseMatrix = a
        .factors()
        .iter()
        .map(|x| b.factors().iter().map(|y| monomial_gram(x.body(), y.body())).collect())
        .collect();
    linalg::determinant(&gram)
}

/// Linear functional on a stage, given by coefficients against the
/// classical basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualElement {
    stage: usize,
    coterms: BTreeMap<BasisMonomial, Rational>,
}

impl DualElement {
    pub fn zero(stage: usize) -> Self {
        DualElement { stage, coterms: BTreeMap::new() }
    }

    /// The coordinate functional `ê^m`.
    pub fn basis(stage: usize, m: BasisMonomial) -> Result<Self> {
        Ok(Element::term(stage, m, Rational::one())?.hilbert_dual())
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn coterms(&self) -> impl Iterator<Item = (&BasisMonomial, &Rational)> {
        self.coterms.iter()
    }

    pub fn scale(&self, c: &Rational) -> DualElement {
        let mut coterms = BTreeMap::new();
        for (m, x) in &self.coterms {
            accumulate(&mut coterms, m.clone(), x * c);
        }
        DualElement { stage: self.stage, coterms }
    }

    pub fn add(&self, other: &DualElement) -> Result<DualElement> {
        if self.stage != other.stage {
            return Err(PlexusError::StageMismatch { left: self.stage, right: other.stage });
        }
        let mut coterms = self.coterms.clone();
        for (m, c) in &other.coterms {
            accumulate(&mut coterms, m.clone(), c.clone());
        }
        Ok(DualElement { stage: self.stage, coterms })
    }

    /// Valuation `self ∘ q`.
    pub fn eval(&self, q: &Element) -> Result<Rational> {
        if self.stage != q.stage {
            return Err(PlexusError::StageMismatch { left: self.stage, right: q.stage });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.coterms {
            if let Some(x) = q.terms.get(m) {
                acc += c * x;
            }
        }
        Ok(acc)
    }
}

/// Vector of the duplex space `Q ⊕ Dual Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplexVector {
    pub ket: Element,
    pub bra: DualElement,
}

impl DuplexVector {
    pub fn new(ket: Element, bra: DualElement) -> Result<Self> {
        if ket.stage != bra.stage {
            return Err(PlexusError::StageMismatch { left: ket.stage, right: bra.stage });
        }
        Ok(DuplexVector { ket, bra })
    }

    pub fn stage(&self) -> usize {
        self.ket.stage
    }

    pub fn scale(&self, c: &Rational) -> DuplexVector {
        DuplexVector { ket: self.ket.scale(c), bra: self.bra.scale(c) }
    }

    pub fn add(&self, other: &DuplexVector) -> Result<DuplexVector> {
        Ok(DuplexVector { ket: self.ket.add(&other.ket)?, bra: self.bra.add(&other.bra)? })
    }
}

/// Neutral duplex norm `‖Q ⊕ Q'‖ = Q' ∘ Q`.
pub fn duplex_norm(v: &DuplexVector) -> Result<Rational> {
    v.bra.eval(&v.ket)
}

/// Symmetric polarization `½ (v'(w) + w'(v))` of the duplex norm.
pub fn duplex_inner(v: &DuplexVector, w: &DuplexVector) -> Result<Rational> {
    if v.stage() != w.stage() {
        return Err(PlexusError::StageMismatch { left: v.stage(), right: w.stage() });
    }
    Ok((v.bra.eval(&w.ket)? + w.bra.eval(&v.ket)?) / int(2))
}

/// Inertia `(positive, negative)` of the duplex form on a whole stage,
/// computed from its Gram matrix in the basis `{e_q ⊕ 0} ∪ {0 ⊕ ê^q}`.
pub fn duplex_signature(stage: usize) -> Result<(usize, usize)> {
    if stage > 3 {
        return Err(PlexusError::RankTooLarge { requested: stage, max: 3 });
    }
    let basis: Vec<BasisMonomial> = crate::basis::enumerate_stage(stage)?.collect();
    let mut vectors = Vec::with_capacity(2 * basis.len());
    for m in &basis {
        vectors.push(DuplexVector::new(
            Element::term(stage, m.clone(), Rational::one())?,
            DualElement::zero(stage),
        )?);
    }
    for m in &basis {
        vectors.push(DuplexVector::new(Element::zero(stage), DualElement::basis(stage, m.clone())?)?);
    }
    let mut gram = Vec::with_capacity(vectors.len());
    for v in &vectors {
        let row = vectors.iter().map(|w| duplex_inner(v, w)).collect::<Result<Vec<_>>>()?;
        gram.push(row);
    }
    let (pos, neg, _) = linalg::inertia(&gram);
    Ok((pos, neg))
}

/// The only term of a single-term element.
pub fn single_monomial(e: &Element) -> Option<(&BasisMonomial, &Rational)> {
    if e.terms.len() == 1 {
        e.terms.iter().next()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn e(q: u64) -> Element {
        Element::serial(q)
    }

    fn at(q: u64, stage: usize) -> Element {
        e(q).lift(stage).unwrap()
    }

    #[test]
    fn superposition() {
        let two = at(1, 1).add(&at(1, 1)).unwrap();
        assert_eq!(two, at(1, 1).scale(&int(2)));
        assert!(at(1, 1).add(&at(1, 1).scale(&int(-1))).unwrap().is_zero());
        let s = at(5, 3).add(&at(6, 3)).unwrap().scale(&ratio(3, 2));
        assert_eq!(s.coefficient(&BasisMonomial::from_serial_u64(5)), ratio(3, 2));
        assert_eq!(s.len(), 2);
        assert!(matches!(at(1, 1).add(&at(1, 2)), Err(PlexusError::StageMismatch { .. })));
    }

    #[test]
    fn wedge_examples() {
        let a = at(2, 2).add(&at(1, 2)).unwrap();
        assert_eq!(a.wedge(&at(1, 2)), at(3, 2));
        assert_eq!(Element::unit().wedge(&at(7, 3)), at(7, 3));
        assert_eq!(at(1, 2).wedge(&at(2, 2)), at(3, 2).scale(&int(-1)));
    }

    #[test]
    fn iota_is_linear() {
        let a = at(1, 2).scale(&int(2)).add(&at(2, 2).scale(&int(3))).unwrap();
        let expected = at(2, 3).scale(&int(2)).add(&at(4, 3).scale(&int(3))).unwrap();
        assert_eq!(a.iota(), expected);
        assert!(Element::zero(2).iota().is_zero());
        assert_eq!(Element::unit().iota(), e(1));
    }

    #[test]
    fn grading_operators() {
        let q = at(3, 3).add(&at(4, 3)).unwrap();
        let deg = q.apply_grading(Grading::Degree);
        assert_eq!(deg, at(3, 3).scale(&int(2)).add(&at(4, 3)).unwrap());
        assert_eq!(e(1).apply_grading(Grading::Rank), e(1));
        assert_eq!(q.grade_project(Grading::Degree, 1), at(4, 3));
    }

    #[test]
    fn hilbert_metric() {
        assert_eq!(monomial_gram(&BasisMonomial::from_serial_u64(5), &BasisMonomial::from_serial_u64(5)), int(1));
        assert_eq!(at(5, 3).hilbert_inner(&at(6, 3)).unwrap(), int(0));
        let v = at(1, 2).scale(&int(2)).add(&at(3, 2)).unwrap();
        assert_eq!(v.hilbert_norm(), int(5));
        assert_eq!(at(9, 3).hilbert_dual().eval(&at(9, 3)).unwrap(), int(1));
    }

    #[test]
    fn classical_basis_is_orthonormal_through_stage_3() {
        let basis: Vec<_> = crate::basis::enumerate_stage(3).unwrap().collect();
        for a in &basis {
            for b in &basis {
                let expected = if a == b { int(1) } else { int(0) };
                assert_eq!(monomial_gram(a, b), expected, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn duplex_examples() {
        let ket = at(1, 1);
        let bra = DualElement::basis(1, BasisMonomial::from_serial_u64(1)).unwrap();
        let v = DuplexVector::new(ket.clone(), bra.clone()).unwrap();
        assert_eq!(duplex_norm(&v).unwrap(), int(1));
        let w = DuplexVector::new(ket.clone(), bra.scale(&int(-1))).unwrap();
        assert_eq!(duplex_norm(&w).unwrap(), int(-1));
        let at2 = DuplexVector::new(
            ket.lift(2).unwrap(),
            DualElement::basis(2, BasisMonomial::from_serial_u64(2)).unwrap(),
        )
        .unwrap();
        assert_eq!(duplex_norm(&at2).unwrap(), int(0));
        assert_eq!(duplex_inner(&v, &v).unwrap(), int(1));
        assert_eq!(duplex_inner(&v, &w).unwrap(), int(0));
    }

    #[test]
    fn duplex_form_is_neutral() {
        for (r, dim) in [(0usize, 1usize), (1, 2), (2, 4), (3, 16)] {
            assert_eq!(duplex_signature(r).unwrap(), (dim, dim));
        }
    }

    #[test]
    fn json_roundtrip() {
        let q = at(5, 3).scale(&ratio(-3, 7)).add(&at(6, 3)).unwrap();
        let back = Element::from_json(&q.to_json()).unwrap();
        assert_eq!(back, q);
    }
}
