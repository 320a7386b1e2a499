//! The tied BMW algebra `𝒦ₙ`, its classical BMW quotient `𝒞ₙ`, and their Markov traces.
//!
//! Elements are finite sums of words in the letters `gᵢ, hᵢ, eᵢ, fᵢ` (tied family)
//! or `gᵢ, hᵢ` (classical family) with Laurent polynomial coefficients. Inverse
//! letters are accepted on input and expanded with the inverse relation of the
//! family, so normal forms never contain them.

mod markov;
mod relations;
mod rewrite;
mod trace;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use smallvec::SmallVec;
use thiserror::Error;

use crate::coeff::Coeff;
use crate::poly::{LaurentPoly, PolyError, VarSet};

pub use relations::{bmw_relations, tbmw_relations, IndexPattern, Relation, RelationGroup};
pub use rewrite::{normal_words, CompletionReport, Rule, RuleSet};
pub use markov::{
    check_relation, epsilon, invariant_via_trace, invariant_via_trace_memo, kauffman_via_trace, pi, psi, tau_prime,
    to_classical_variables, RelationCheck,
};
pub use trace::{step_budget, Cluster, DenomPoly, TraceEngine, TraceMemo, DEFAULT_STEP_BUDGET};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("letter index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("strand counts differ: {0} vs {1}")]
    StrandMismatch(usize, usize),
    #[error("algebra families differ")]
    FamilyMismatch,
    #[error("letter `{0}` does not belong to this algebra")]
    ForeignLetter(String),
    #[error("step budget of {budget} exhausted while reducing `{word}`")]
    StepBudget { budget: u64, word: String },
    #[error("no reduction applies to `{0}`")]
    Stuck(String),
    #[error("coefficient `{0}` has no Laurent image")]
    NotLaurent(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Letter kinds. The derived order is the within-index order used by normal forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    G,
    H,
    F,
    E,
}

impl Kind {
    fn symbol(self) -> char {
        match self {
            Kind::G => 'g',
            Kind::H => 'h',
            Kind::F => 'f',
            Kind::E => 'e',
        }
    }
}

/// A generator at `index` (1-based), acting on strands `index` and `index+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: u8,
    pub kind: Kind,
}

impl Letter {
    pub fn new(kind: Kind, index: u8) -> Self {
        Letter { index, kind }
    }

    pub fn shifted(self, by: i32) -> Self {
        Letter { index: (self.index as i32 + by) as u8, kind: self.kind }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.index)
    }
}

pub type Word = SmallVec<[Letter; 8]>;

pub fn word_to_string(w: &[Letter]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

/// Which algebra an element lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `𝒦ₙ` over `ℤ[a^±1, z^±1, x^±1]`.
    Tied,
    /// `𝒞ₙ` over `ℤ[l^±1, m^±1]`.
    Classical,
}

impl Family {
    pub fn vars(self) -> VarSet {
        match self {
            Family::Tied => VarSet::azx(),
            Family::Classical => VarSet::bmw(),
        }
    }

    pub fn has_kind(self, k: Kind) -> bool {
        matches!((self, k), (Family::Tied, _) | (Family::Classical, Kind::G | Kind::H))
    }

    /// `gᵢ⁻¹` written in the letters of the family.
    pub fn inverse_terms<C: Coeff>(self, index: u8) -> Vec<(Word, LaurentPoly<C>)> {
        let v = self.vars();
        let w = |k| Word::from_slice(&[Letter::new(k, index)]);
        match self {
            Family::Tied => {
                let z = LaurentPoly::var(&v, "z", 1);
                vec![(w(Kind::E), z.clone()), (w(Kind::F), z), (w(Kind::G), LaurentPoly::from_int(&v, -1))]
            }
            Family::Classical => {
                let m = LaurentPoly::var(&v, "m", 1);
                vec![(Word::new(), m.clone()), (w(Kind::H), m), (w(Kind::G), LaurentPoly::from_int(&v, -1))]
            }
        }
    }
}

/// A linear combination of words.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement<C: Coeff = BigInt> {
    family: Family,
    strands: usize,
    terms: BTreeMap<Word, LaurentPoly<C>>,
}

impl<C: Coeff> AlgebraElement<C> {
    pub fn zero(family: Family, strands: usize) -> Self {
        AlgebraElement { family, strands, terms: BTreeMap::new() }
    }

    pub fn one(family: Family, strands: usize) -> Self {
        Self::from_word(family, strands, Word::new(), LaurentPoly::one(&family.vars()))
    }

    pub fn from_word(family: Family, strands: usize, word: Word, coeff: LaurentPoly<C>) -> Self {
        let mut e = Self::zero(family, strands);
        e.add_term(word, coeff);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, LaurentPoly<C>)>>(family: Family, strands: usize, terms: I) -> Self {
        let mut e = Self::zero(family, strands);
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    /// A single generator; `inverse` expands `gᵢ⁻¹`.
    pub fn letter(family: Family, strands: usize, kind: Kind, index: usize, inverse: bool) -> Result<Self, AlgebraError> {
        if index == 0 || index >= strands {
            return Err(AlgebraError::IndexOutOfRange { index, strands });
        }
        if !family.has_kind(kind) || (inverse && kind != Kind::G) {
            return Err(AlgebraError::ForeignLetter(format!("{}{index}", kind.symbol())));
        }
        let idx = index as u8;
        if inverse {
            Ok(Self::from_terms(family, strands, family.inverse_terms(idx)))
        } else {
            Ok(Self::from_word(family, strands, Word::from_slice(&[Letter::new(kind, idx)]), LaurentPoly::one(&family.vars())))
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn vars(&self) -> VarSet {
        self.family.vars()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &LaurentPoly<C>)> {
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

    pub fn coeff(&self, word: &[Letter]) -> Option<&LaurentPoly<C>> {
        self.terms.get(word)
    }

    pub fn add_term(&mut self, word: Word, coeff: LaurentPoly<C>) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.family != other.family {
            return Err(AlgebraError::FamilyMismatch);
        }
        if self.strands != other.strands {
            return Err(AlgebraError::StrandMismatch(self.strands, other.strands));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg())
    }

    /// The product; words are concatenated, nothing is reduced.
    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(self.family, self.strands);
        for (u, c) in &self.terms {
            for (v, d) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, c * d);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &LaurentPoly<C>) -> Self {
        Self::from_terms(self.family, self.strands, self.terms.iter().map(|(w, d)| (w.clone(), d * c)))
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.family, self.strands, self.terms.iter().map(|(w, d)| (w.clone(), -d)))
    }

    /// The same element regarded in an algebra with more strands.
    pub fn embed(&self, strands: usize) -> Self {
        assert!(strands >= self.strands);
        AlgebraElement { strands, ..self.clone() }
    }

    /// Largest letter index occurring, 0 for scalars.
    pub fn top_index(&self) -> u8 {
        self.terms.keys().flat_map(|w| w.iter().map(|l| l.index)).max().unwrap_or(0)
    }

    /// Parses sums such as `z e1 g1 + a^-1 z f1 - 1` or `(a+1) * g1 G2 h1`.
    ///
    /// Letters are `g h e f` (and `G` for the inverse of `g`) followed by an
    /// index; every other token belongs to the coefficient. Without `strands`
    /// the count is one more than the largest index.
    pub fn parse(text: &str, family: Family, strands: Option<usize>) -> Result<Self, AlgebraError> {
        let vars = family.vars();
        let parsed = split_terms(text)?;
        let top = parsed.iter().flat_map(|t| t.letters.iter().map(|l| l.1)).max().unwrap_or(0);
        let strands = strands.unwrap_or(top + 1);
        let mut out = Self::zero(family, strands);
        for t in parsed {
            let coeff = if t.coeff.trim().is_empty() {
                LaurentPoly::one(&vars)
            } else {
                LaurentPoly::parse(&t.coeff, &vars).map_err(|e| match e {
                    PolyError::Parse { pos, msg } => AlgebraError::Parse { pos: t.offset + pos, msg },
                    other => other.into(),
                })?
            };
            let coeff = if t.negative { -coeff } else { coeff };
            let mut term = Self::from_word(family, strands, Word::new(), coeff);
            for &(sym, index, pos) in &t.letters {
                let (kind, inverse) = match sym {
                    'g' => (Kind::G, false),
                    'G' => (Kind::G, true),
                    'h' => (Kind::H, false),
                    'e' => (Kind::E, false),
                    'f' => (Kind::F, false),
                    _ => return Err(AlgebraError::Parse { pos, msg: format!("unknown letter `{sym}`") }),
                };
                let l = Self::letter(family, strands, kind, index, inverse)?;
                term = term.try_mul(&l)?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }

    /// Applies `f` to every coefficient, moving into `family`.
    pub fn map_coeffs<F>(&self, family: Family, mut f: F) -> Result<Self, AlgebraError>
    where
        F: FnMut(&LaurentPoly<C>) -> Result<LaurentPoly<C>, AlgebraError>,
    {
        let mut out = Self::zero(family, self.strands);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }
}

struct ParsedTerm {
    negative: bool,
    coeff: String,
    offset: usize,
    letters: Vec<(char, usize, usize)>,
}

fn letter_token(tok: &str) -> Option<(char, usize)> {
    let mut chars = tok.chars();
    let sym = chars.next()?;
    if !"gGhef".contains(sym) {
        return None;
    }
    let digits = chars.as_str();
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().map(|i| (sym, i))
}

fn split_terms(text: &str) -> Result<Vec<ParsedTerm>, AlgebraError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut raw: Vec<(bool, usize, usize)> = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    let mut prev: Option<char> = None;
    let mut any = false;
    for &(pos, ch) in &chars {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(AlgebraError::Parse { pos, msg: "unbalanced `)`".into() });
                }
            }
            '+' | '-' | '\u{2212}' if depth == 0 && prev != Some('^') => {
                if any {
                    raw.push((negative, start, pos));
                }
                negative = ch != '+';
                start = pos + ch.len_utf8();
                any = false;
                prev = Some(ch);
                continue;
            }
            _ => {}
        }
        if !ch.is_whitespace() {
            any = true;
            prev = Some(ch);
        }
    }
    if depth != 0 {
        return Err(AlgebraError::Parse { pos: text.len(), msg: "unbalanced `(`".into() });
    }
    if !any {
        return Err(AlgebraError::Parse { pos: text.len(), msg: "missing term".into() });
    }
    raw.push((negative, start, text.len()));
    let mut out = Vec::new();
    for (negative, s, e) in raw {
        let body = &text[s..e];
        let mut coeff = String::new();
        let mut letters = Vec::new();
        let mut depth = 0i32;
        let mut tok_start = None;
        let flush = |from: usize, to: usize, coeff: &mut String, letters: &mut Vec<(char, usize, usize)>| {
            let tok = &body[from..to];
            if let Some((sym, idx)) = letter_token(tok) {
                letters.push((sym, idx, s + from));
            } else if tok != "*" && tok != "\u{00b7}" {
                if !letters.is_empty() {
                    return Err(AlgebraError::Parse { pos: s + from, msg: "coefficient after letters".into() });
                }
                coeff.push(' ');
                coeff.push_str(tok.trim_end_matches(['*', '\u{00b7}']));
            }
            Ok(())
        };
        for (i, ch) in body.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            if ch.is_whitespace() && depth == 0 {
                if let Some(t) = tok_start.take() {
                    flush(t, i, &mut coeff, &mut letters)?;
                }
            } else if tok_start.is_none() {
                tok_start = Some(i);
            }
        }
        if let Some(t) = tok_start {
            flush(t, body.len(), &mut coeff, &mut letters)?;
        }
        out.push(ParsedTerm { negative, coeff, offset: s, letters });
    }
    Ok(out)
}

impl<C: Coeff> fmt::Display for AlgebraElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let (neg, c) = match c.as_monomial() {
                Some((k, _)) if k.is_negative() => (true, -c),
                _ => (false, c.clone()),
            };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let ctext = if c.len() > 1 { format!("({c})") } else { c.to_string() };
            match (c.is_one(), w.is_empty()) {
                (true, true) => f.write_str("1")?,
                (true, false) => f.write_str(&word_to_string(w))?,
                (false, true) => f.write_str(&ctext)?,
                (false, false) => write!(f, "{ctext} {}", word_to_string(w))?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for AlgebraElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type E = AlgebraElement<BigInt>;

    #[test]
    fn parse_and_display() {
        let e = E::parse("z e1 g1 + a^-1 z f1 - 1", Family::Tied, None).unwrap();
        assert_eq!(e.strands(), 2);
        assert_eq!(e.len(), 3);
        let again = E::parse(&e.to_string(), Family::Tied, Some(2)).unwrap();
        assert_eq!(again, e);
        let p = E::parse("(a+1) * g1 h2", Family::Tied, Some(4)).unwrap();
        assert_eq!(p.to_string(), "(a+1) g1 h2");
    }

    #[test]
    fn inverse_letter_expands() {
        let e = E::parse("G1", Family::Tied, None).unwrap();
        assert_eq!(e, E::parse("z e1 + z f1 - g1", Family::Tied, None).unwrap());
        let c = E::parse("G2", Family::Classical, Some(3)).unwrap();
        assert_eq!(c, E::parse("m + m h2 - g2", Family::Classical, Some(3)).unwrap());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(E::parse("g3", Family::Tied, Some(3)), Err(AlgebraError::IndexOutOfRange { .. })));
        assert!(matches!(E::parse("e1", Family::Classical, None), Err(AlgebraError::ForeignLetter(_))));
        assert!(E::parse("g1 +", Family::Tied, None).is_err());
        assert!(E::parse("(a g1", Family::Tied, None).is_err());
    }

    #[test]
    fn product_concatenates() {
        let u = E::parse("g1 + a h1", Family::Tied, Some(3)).unwrap();
        let v = E::parse("e2", Family::Tied, Some(3)).unwrap();
        assert_eq!(u.try_mul(&v).unwrap(), E::parse("g1 e2 + a h1 e2", Family::Tied, Some(3)).unwrap());
    }
}
