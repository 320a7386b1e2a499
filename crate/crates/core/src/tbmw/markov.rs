//! Link invariants from the Markov traces.

use super::relations::Relation;
use super::trace::{lmd_vars, DenomPoly, TraceEngine, TraceMemo};
use super::{AlgebraElement, AlgebraError, Family, Kind, Letter, Word};
use crate::braid::{BraidLetter, TiedBraidWord};
use crate::coeff::Coeff;
use crate::poly::{LaurentPoly, VarSet};

/// `σᵢ^±1 ↦ gᵢ^±1`, `ηᵢ ↦ eᵢ`.
pub fn pi<C: Coeff>(w: &TiedBraidWord) -> AlgebraElement<C> {
    image(w, Family::Tied, true)
}

/// The classical image of a braid word: `σᵢ^±1 ↦ gᵢ^±1`, ties dropped.
pub fn epsilon<C: Coeff>(w: &TiedBraidWord) -> AlgebraElement<C> {
    image(w, Family::Classical, false)
}

fn image<C: Coeff>(w: &TiedBraidWord, family: Family, ties: bool) -> AlgebraElement<C> {
    let n = w.strands();
    let mut acc = AlgebraElement::one(family, n);
    for l in w.letters() {
        let factor = match *l {
            BraidLetter::Sigma { index, positive } => AlgebraElement::letter(family, n, Kind::G, index, !positive),
            BraidLetter::Eta(i) if ties => AlgebraElement::letter(family, n, Kind::E, i, false),
            BraidLetter::Eta(_) => continue,
        };
        acc = acc.try_mul(&factor.expect("braid indices are in range")).expect("same algebra");
    }
    acc
}

/// `x^{1-n} a^{-exp(w)} ϖ(π(w))`, the normalized invariant of the closure of `w`.
pub fn invariant_via_trace<C: Coeff>(engine: &TraceEngine<C>, w: &TiedBraidWord) -> Result<LaurentPoly<C>, AlgebraError> {
    invariant_via_trace_memo(engine, w, &mut TraceMemo::default())
}

/// As [`invariant_via_trace`], sharing trace values of words across calls.
pub fn invariant_via_trace_memo<C: Coeff>(
    engine: &TraceEngine<C>,
    w: &TiedBraidWord,
    memo: &mut TraceMemo<C>,
) -> Result<LaurentPoly<C>, AlgebraError> {
    if engine.family() != Family::Tied {
        return Err(AlgebraError::FamilyMismatch);
    }
    let v = VarSet::azx();
    let t = engine.trace_memo(&pi(w), memo)?;
    let mut e = smallvec::SmallVec::from_slice(&[0, 0, 0]);
    e[0] = -(w.exp() as i32);
    e[2] = 1 - w.strands() as i32;
    Ok(&t * &LaurentPoly::monomial(&v, C::one(), e))
}

fn denominator_am<C: Coeff>(vars: &VarSet, a: &str, m: &str) -> LaurentPoly<C> {
    LaurentPoly::var(vars, a, 1) + LaurentPoly::var(vars, a, -1) - LaurentPoly::var(vars, m, 1)
}

/// `ψ`: `g ↦ g`, `e ↦ 1`, `h, f ↦ h`, with `a ↦ l`, `z ↦ m`, `x ↦ m/(l + l⁻¹ - m)`.
///
/// Only non-positive powers of `x` have a Laurent image; others are rejected.
pub fn psi<C: Coeff>(u: &AlgebraElement<C>) -> Result<AlgebraElement<C>, AlgebraError> {
    if u.family() != Family::Tied {
        return Err(AlgebraError::FamilyMismatch);
    }
    let bmw = VarSet::bmw();
    let x_inv = &denominator_am::<C>(&bmw, "l", "m") * &LaurentPoly::var(&bmw, "m", -1);
    let mut out = AlgebraElement::zero(Family::Classical, u.strands());
    for (w, c) in u.terms() {
        let mut coeff = LaurentPoly::zero(&bmw);
        for (e, k) in c.terms() {
            if e[2] > 0 {
                return Err(AlgebraError::NotLaurent(c.to_string()));
            }
            let mono = LaurentPoly::monomial(&bmw, k.clone(), [e[0], e[1]].into_iter().collect());
            coeff = &coeff + &(&mono * &x_inv.pow(-e[2])?);
        }
        let word: Word = w
            .iter()
            .filter(|l| l.kind != Kind::E)
            .map(|l| if l.kind == Kind::F { Letter::new(Kind::H, l.index) } else { *l })
            .collect();
        out.add_term(word, coeff);
    }
    Ok(out)
}

/// The classical trace `τ′`, as a numerator over a power of `l + l⁻¹ - m`.
pub fn tau_prime<C: Coeff>(engine: &TraceEngine<C>, u: &AlgebraElement<C>) -> Result<DenomPoly<C>, AlgebraError> {
    if engine.family() != Family::Classical {
        return Err(AlgebraError::FamilyMismatch);
    }
    DenomPoly::from_lmd(&engine.trace(u)?)
}

/// The oriented Kauffman polynomial of the closure of an untied braid word, in `l, m`:
/// `((l + l⁻¹ - m)/m)^{n-1} l^{-exp(σ)} τ′(ε(σ))`.
pub fn kauffman_via_trace<C: Coeff>(engine: &TraceEngine<C>, w: &TiedBraidWord) -> Result<LaurentPoly<C>, AlgebraError> {
    if w.has_ties() {
        return Err(AlgebraError::ForeignLetter("tie generator".into()));
    }
    let n = w.strands() as u32;
    let t = tau_prime(engine, &epsilon(w))?;
    let bmw = VarSet::bmw();
    let norm = LaurentPoly::monomial(&bmw, C::one(), [-(w.exp() as i32), 1 - n as i32].into_iter().collect());
    Ok(&t.cleared(n - 1)? * &norm)
}

/// A tied trace value read in the classical variables: `a ↦ l`, `z ↦ m`, `x ↦ m/(l + l⁻¹ - m)`.
pub fn to_classical_variables<C: Coeff>(p: &LaurentPoly<C>) -> Result<DenomPoly<C>, AlgebraError> {
    let lmd = lmd_vars();
    let bmw_den = denominator_am::<C>(&lmd, "l", "m");
    let md = &LaurentPoly::var(&lmd, "m", 1) * &LaurentPoly::var(&lmd, "d", 1);
    let x_inv = &bmw_den * &LaurentPoly::var(&lmd, "m", -1);
    let mut acc = LaurentPoly::zero(&lmd);
    for (e, k) in p.terms() {
        let mono = LaurentPoly::monomial(&lmd, k.clone(), [e[0], e[1], 0].into_iter().collect());
        let xs = if e[2] >= 0 { md.pow(e[2])? } else { x_inv.pow(-e[2])? };
        acc = &acc + &(&mono * &xs);
    }
    DenomPoly::from_lmd(&acc)
}

/// One instance of a relation and whether `lhs - rhs` rewrites to zero.
#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub name: &'static str,
    pub strands: usize,
    pub i: usize,
    pub j: usize,
    pub holds: bool,
    pub residue: String,
}

pub fn check_relation<C: Coeff>(
    engine: &TraceEngine<C>,
    rel: &Relation,
    strands: usize,
) -> Result<Vec<RelationCheck>, AlgebraError> {
    let mut out = Vec::new();
    for (i, j) in rel.instances(strands) {
        let (l, r) = rel.instantiate::<C>(engine.family(), strands, i, j)?;
        let diff = engine.normal_form(&l.try_sub(&r)?)?;
        out.push(RelationCheck { name: rel.name, strands, i, j, holds: diff.is_zero(), residue: diff.to_string() });
    }
    Ok(out)
}
