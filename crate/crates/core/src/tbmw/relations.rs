//! Relation catalogues, written with index placeholders `{i}` and `{j}`.

use super::{AlgebraElement, AlgebraError, Family};
use crate::coeff::Coeff;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationGroup {
    Defining,
    Derived,
    Lemma,
}

/// Which index pairs a relation is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexPattern {
    /// One index `i`.
    Single,
    /// `|i - j| = 1`, both orders.
    Adjacent,
    /// `|i - j| > 1`.
    Far,
    /// Any `i`, `j`.
    Any,
    /// `j = i - 1`.
    Down,
}

#[derive(Debug, Clone, Copy)]
pub struct Relation {
    pub name: &'static str,
    pub group: RelationGroup,
    pub pattern: IndexPattern,
    pub lhs: &'static str,
    pub rhs: &'static str,
}

impl Relation {
    /// Index pairs `(i, j)` at which the relation makes sense on `strands` strands.
    pub fn instances(&self, strands: usize) -> Vec<(usize, usize)> {
        let idx = 1..strands;
        let mut out = Vec::new();
        for i in idx.clone() {
            for j in idx.clone() {
                let ok = match self.pattern {
                    IndexPattern::Single => i == j,
                    IndexPattern::Adjacent => i.abs_diff(j) == 1,
                    IndexPattern::Far => i.abs_diff(j) > 1,
                    IndexPattern::Any => true,
                    IndexPattern::Down => j + 1 == i,
                };
                if ok {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn instantiate<C: Coeff>(
        &self,
        family: Family,
        strands: usize,
        i: usize,
        j: usize,
    ) -> Result<(AlgebraElement<C>, AlgebraElement<C>), AlgebraError> {
        let fill = |s: &str| s.replace("{i}", &i.to_string()).replace("{j}", &j.to_string());
        Ok((
            AlgebraElement::parse(&fill(self.lhs), family, Some(strands))?,
            AlgebraElement::parse(&fill(self.rhs), family, Some(strands))?,
        ))
    }
}

macro_rules! rel {
    ($name:expr, $g:ident, $p:ident, $l:expr, $r:expr) => {
        Relation { name: $name, group: RelationGroup::$g, pattern: IndexPattern::$p, lhs: $l, rhs: $r }
    };
}

/// The relations of `𝒦ₙ`: defining ones, consequences, and the lemmas used for reduction.
pub fn tbmw_relations() -> Vec<Relation> {
    vec![
        rel!("b1", Defining, Far, "g{i} g{j}", "g{j} g{i}"),
        rel!("b2", Defining, Adjacent, "g{i} g{j} g{i}", "g{j} g{i} g{j}"),
        rel!("bmw1", Defining, Single, "h{i} h{i}", "x^-1 h{i}"),
        rel!("bmw2", Defining, Far, "h{i} h{j}", "h{j} h{i}"),
        rel!("bmw3", Defining, Far, "g{i} h{j}", "h{j} g{i}"),
        rel!("bmw4a", Defining, Single, "g{i} h{i}", "a^-1 h{i}"),
        rel!("bmw4b", Defining, Single, "h{i} g{i}", "a^-1 h{i}"),
        rel!("bmw5", Defining, Adjacent, "h{i} g{j} h{i}", "a h{i}"),
        rel!("bmw6", Defining, Adjacent, "h{i} h{j} h{i}", "h{i}"),
        rel!("bmw7a", Defining, Adjacent, "g{i} g{j} h{i}", "h{j} g{i} g{j}"),
        rel!("bmw7b", Defining, Adjacent, "g{i} g{j} h{i}", "h{j} h{i}"),
        rel!("bmw8", Defining, Adjacent, "g{i} h{j} g{i}", "G{j} h{i} G{j}"),
        rel!("bmw9", Defining, Adjacent, "g{i} h{j} h{i}", "G{j} h{i}"),
        rel!("bmw10", Defining, Adjacent, "h{i} h{j} g{i}", "h{i} G{j}"),
        rel!("bt1", Defining, Any, "e{i} e{j}", "e{j} e{i}"),
        rel!("bt2", Defining, Single, "e{i} e{i}", "e{i}"),
        rel!("bt3", Defining, Single, "e{i} g{i}", "g{i} e{i}"),
        rel!("bt4", Defining, Far, "e{i} g{j}", "g{j} e{i}"),
        rel!("bt5a", Defining, Adjacent, "e{i} e{j} g{i}", "g{i} e{i} e{j}"),
        rel!("bt5b", Defining, Adjacent, "e{i} e{j} g{i}", "e{j} g{i} e{j}"),
        rel!("bt6", Defining, Adjacent, "e{i} g{j} g{i}", "g{j} g{i} e{j}"),
        rel!("new1a", Defining, Single, "e{i} h{i}", "h{i}"),
        rel!("new1b", Defining, Single, "h{i} e{i}", "h{i}"),
        rel!("new2", Defining, Far, "e{i} h{j}", "h{j} e{i}"),
        rel!("new8a", Defining, Single, "f{i} e{i}", "f{i}"),
        rel!("new8b", Defining, Single, "e{i} f{i}", "f{i}"),
        rel!("new9a", Defining, Adjacent, "f{i} e{j}", "e{j} f{i}"),
        rel!("new9b", Defining, Adjacent, "f{i} e{j}", "e{j} h{i} e{j}"),
        rel!("new10a", Defining, Single, "f{i} g{i}", "a^-1 f{i}"),
        rel!("new10b", Defining, Single, "g{i} f{i}", "a^-1 f{i}"),
        rel!("new13a", Defining, Adjacent, "g{i} f{j} g{i}", "G{j} f{i} G{j}"),
        rel!("new14", Defining, Single, "g{i} + G{i}", "z e{i} + z f{i}"),
        rel!("inv-a", Defining, Single, "g{i} G{i}", "1"),
        rel!("inv-b", Defining, Single, "G{i} g{i}", "1"),
        rel!("quadratic", Derived, Single, "g{i} g{i}", "z e{i} g{i} + a^-1 z f{i} - 1"),
        rel!("new3", Derived, Single, "f{i} f{i}", "(a z^-1 + a^-1 z^-1 - 1) f{i}"),
        rel!("new5a", Derived, Single, "f{i} h{i}", "(a z^-1 + a^-1 z^-1 - 1) h{i}"),
        rel!("new5b", Derived, Single, "h{i} f{i}", "(a z^-1 + a^-1 z^-1 - 1) h{i}"),
        rel!("bt7", Derived, Adjacent, "e{i} g{j} G{i}", "g{j} G{i} e{j}"),
        rel!("new4", Derived, Adjacent, "f{i} f{j}", "e{j} h{i} h{j} e{i}"),
        rel!("new6", Derived, Adjacent, "f{i} h{j}", "e{j} h{i} h{j}"),
        rel!("new7", Derived, Adjacent, "h{j} f{i}", "h{j} h{i} e{j}"),
        rel!("new11", Derived, Adjacent, "h{i} g{j} f{i}", "a h{i} e{j}"),
        rel!("new12", Derived, Adjacent, "f{i} g{j} h{i}", "a e{j} h{i}"),
        rel!("new13", Derived, Adjacent, "f{i} g{j} f{i}", "a e{j} h{i} e{j}"),
        rel!("far-ff", Lemma, Far, "f{i} f{j}", "f{j} f{i}"),
        rel!("far-fh", Lemma, Far, "f{i} h{j}", "h{j} f{i}"),
        rel!("far-fg", Lemma, Far, "f{i} g{j}", "g{j} f{i}"),
        rel!("far-fe", Lemma, Far, "f{i} e{j}", "e{j} f{i}"),
        rel!("adj-i", Lemma, Adjacent, "f{i} f{j} f{i}", "e{j} h{i} e{j}"),
        rel!("adj-ii", Lemma, Adjacent, "g{i} g{j} f{i}", "f{j} g{i} g{j}"),
        rel!("adj-iii", Lemma, Adjacent, "f{i} f{j} h{i}", "e{j} h{i}"),
        rel!("adj-iv", Lemma, Adjacent, "h{i} f{j} f{i}", "h{i} e{j}"),
        rel!("adj-v", Lemma, Adjacent, "f{i} f{j} e{i}", "f{i} f{j}"),
        rel!("adj-vi", Lemma, Adjacent, "e{i} f{j} h{i}", "f{j} h{i}"),
        rel!("adj-vii", Lemma, Adjacent, "h{i} f{j} h{i}", "h{i}"),
        rel!("red1-i", Lemma, Down, "h{i} g{j} g{i} e{i}", "h{i} f{j}"),
        rel!("red1-ii", Lemma, Down, "g{i} e{i} g{j} h{i}", "f{j} h{i}"),
        rel!("red2-i-a", Lemma, Down, "h{i} f{j} g{i}", "h{i} f{j} g{i} e{i}"),
        rel!("red2-i-b", Lemma, Down, "h{i} f{j} g{i}", "h{i} e{j} G{j}"),
        rel!("red2-ii-a", Lemma, Down, "g{i} e{i} f{j} g{i}", "g{i} f{j} g{i} e{i}"),
        rel!("red2-ii-b", Lemma, Down, "g{i} e{i} f{j} g{i}", "g{i} e{i} f{j} g{i} e{i}"),
        rel!("red2-ii-c", Lemma, Down, "g{i} e{i} f{j} g{i}", "G{j} e{j} h{i} e{j} G{j}"),
        rel!("red2-iii-a", Lemma, Down, "f{i} f{j} g{i}", "f{i} f{j} g{i} e{i}"),
        rel!("red2-iii-b", Lemma, Down, "f{i} f{j} g{i}", "e{j} h{i} e{j} G{j}"),
        rel!("red2-iv-a", Lemma, Down, "g{i} f{j} f{i}", "g{i} e{i} f{j} f{i}"),
        rel!("red2-iv-b", Lemma, Down, "g{i} f{j} f{i}", "G{j} e{j} h{i} e{j}"),
        rel!("red2-v-a", Lemma, Down, "g{i} f{j} h{i}", "g{i} e{i} f{j} h{i}"),
        rel!("red2-v-b", Lemma, Down, "g{i} f{j} h{i}", "G{j} e{j} h{i}"),
        rel!("L4-i", Lemma, Down, "h{i} g{j} e{i}", "h{i} e{j} g{j}"),
        rel!("L4-ii", Lemma, Down, "e{i} g{j} h{i}", "g{j} e{j} h{i}"),
        rel!("L4-iii", Lemma, Down, "e{i} g{j} f{i}", "g{j} e{j} f{i}"),
        rel!("L4-iv", Lemma, Down, "g{i} e{i} g{j} e{i}", "e{j} g{i} g{j} e{j}"),
        rel!("L4-v", Lemma, Down, "g{i} e{i} g{j} g{i} e{i}", "g{j} g{i} e{i} e{j} g{j}"),
        rel!("L4-vi", Lemma, Down, "g{i} e{i} g{j} f{i}", "f{j} g{i} g{j} e{j}"),
    ]
}

/// The relations of the classical algebra `𝒞ₙ` in the letters `g`, `h`.
pub fn bmw_relations() -> Vec<Relation> {
    vec![
        rel!("b1", Defining, Far, "g{i} g{j}", "g{j} g{i}"),
        rel!("b2", Defining, Adjacent, "g{i} g{j} g{i}", "g{j} g{i} g{j}"),
        rel!("inverse", Defining, Single, "g{i} + G{i}", "m + m h{i}"),
        rel!("inv-a", Defining, Single, "g{i} G{i}", "1"),
        rel!("inv-b", Defining, Single, "G{i} g{i}", "1"),
        rel!("gh", Defining, Single, "g{i} h{i}", "l^-1 h{i}"),
        rel!("hgh", Defining, Adjacent, "h{i} g{j} h{i}", "l h{i}"),
        rel!("hg", Derived, Single, "h{i} g{i}", "l^-1 h{i}"),
        rel!("hh", Derived, Single, "h{i} h{i}", "(l m^-1 + l^-1 m^-1 - 1) h{i}"),
        rel!("far-hh", Derived, Far, "h{i} h{j}", "h{j} h{i}"),
        rel!("far-gh", Derived, Far, "g{i} h{j}", "h{j} g{i}"),
        rel!("hhh", Derived, Adjacent, "h{i} h{j} h{i}", "h{i}"),
        rel!("ggh-a", Derived, Adjacent, "g{i} g{j} h{i}", "h{j} g{i} g{j}"),
        rel!("ggh-b", Derived, Adjacent, "g{i} g{j} h{i}", "h{j} h{i}"),
        rel!("ghg", Derived, Adjacent, "g{i} h{j} g{i}", "G{j} h{i} G{j}"),
        rel!("ghh", Derived, Adjacent, "g{i} h{j} h{i}", "G{j} h{i}"),
        rel!("hhg", Derived, Adjacent, "h{i} h{j} g{i}", "h{i} G{j}"),
    ]
}
