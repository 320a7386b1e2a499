//! Sparse multivariate Laurent polynomials with exact coefficients.
//!
//! A polynomial is a map from exponent vectors (one signed entry per variable of
//! its [`VarSet`]) to nonzero coefficients. The map is the canonical form: two
//! polynomials are equal exactly when their maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use smallvec::SmallVec;
use thiserror::Error;

use crate::coeff::Coeff;

pub type Exponents = SmallVec<[i32; 4]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable sets differ: [{left}] vs [{right}]")]
    VarSetMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("cannot raise non-monomial `{value}` to negative power in term `{term}`")]
    NonInvertible { value: String, term: String },
    #[error("division is not exact, remainder `{remainder}`")]
    InexactDivision { remainder: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// An ordered list of distinct variable names.
#[derive(Clone)]
pub struct VarSet(Arc<[Box<str>]>);

impl VarSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        let names: Vec<Box<str>> = names.iter().map(|s| s.as_ref().into()).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(!names[..i].contains(n), "duplicate variable `{n}`");
        }
        VarSet(names.into())
    }

    /// The variables of the tied-link polynomial: `a`, `z`, `x`.
    pub fn azx() -> Self {
        static V: OnceLock<VarSet> = OnceLock::new();
        V.get_or_init(|| Self::new(&["a", "z", "x"])).clone()
    }

    /// The variables of the tied bracket: `A`, `c`.
    pub fn bracket() -> Self {
        static V: OnceLock<VarSet> = OnceLock::new();
        V.get_or_init(|| Self::new(&["A", "c"])).clone()
    }

    /// The variables of the classical BMW trace: `l`, `m`.
    pub fn bmw() -> Self {
        static V: OnceLock<VarSet> = OnceLock::new();
        V.get_or_init(|| Self::new(&["l", "m"])).clone()
    }

    /// Jones variable `q = t^(1/4)`, plus `c` for untied components.
    pub fn jones() -> Self {
        static V: OnceLock<VarSet> = OnceLock::new();
        V.get_or_init(|| Self::new(&["q", "c"])).clone()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|s| &**s)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| &**n == name)
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.0[idx]
    }

    fn joined(&self) -> String {
        self.names().collect::<Vec<_>>().join(",")
    }
}

impl PartialEq for VarSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for VarSet {}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarSet[{}]", self.joined())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly<C: Coeff> {
    vars: VarSet,
    terms: BTreeMap<Exponents, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero(vars: &VarSet) -> Self {
        LaurentPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, C::one())
    }

    pub fn constant(vars: &VarSet, c: C) -> Self {
        Self::monomial(vars, c, Exponents::from_elem(0, vars.len()))
    }

    pub fn from_int(vars: &VarSet, c: i64) -> Self {
        Self::constant(vars, C::from_i64(c))
    }

    pub fn monomial(vars: &VarSet, c: C, exps: Exponents) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { vars: vars.clone(), terms }
    }

    /// `name^power`. Panics if `name` is not in `vars`.
    pub fn var(vars: &VarSet, name: &str, power: i32) -> Self {
        let idx = vars.index_of(name).unwrap_or_else(|| panic!("unknown variable `{name}`"));
        let mut e = Exponents::from_elem(0, vars.len());
        e[idx] = power;
        Self::monomial(vars, C::one(), e)
    }

    /// Builds from `(coefficient, exponents)` pairs, combining repeated exponents.
    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Self
    where
        I: IntoIterator<Item = (C, Exponents)>,
    {
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| c.is_one() && e.iter().all(|&k| k == 0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[i32]) -> Option<&C> {
        self.terms.get(exps)
    }

    /// `Some((c, e))` when the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(&C, &Exponents)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c, e))
        } else {
            None
        }
    }

    /// The constant, if the polynomial is one.
    pub fn as_constant(&self) -> Option<C> {
        if self.is_zero() {
            return Some(C::zero());
        }
        match self.as_monomial() {
            Some((c, e)) if e.iter().all(|&k| k == 0) => Some(c.clone()),
            _ => None,
        }
    }

    fn add_term(&mut self, exps: Exponents, c: C) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(PolyError::VarSetMismatch { left: self.vars.joined(), right: other.vars.joined() })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let terms = self.terms.iter().map(|(e, k)| (e.clone(), k.clone() * c)).filter(|(_, k)| !k.is_zero()).collect();
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    /// Multiplies by the monomial with exponent vector `shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        assert_eq!(shift.len(), self.vars.len());
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    /// Power with a nonnegative exponent, or a negative one when `self` is an invertible monomial.
    pub fn pow(&self, k: i32) -> Result<Self, PolyError> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(result)
    }

    /// Inverse of a monomial with unit coefficient.
    pub fn inverse(&self) -> Result<Self, PolyError> {
        match self.as_monomial() {
            Some((c, e)) if c.is_unit() => {
                let inv = C::one().div_exact(c).expect("unit coefficient");
                Ok(Self::monomial(&self.vars, inv, e.iter().map(|k| -k).collect()))
            }
            _ if self.is_zero() => Err(PolyError::DivisionByZero),
            _ => Err(PolyError::NonInvertible { value: self.to_string(), term: "1".into() }),
        }
    }

    /// Smallest and largest exponent of each variable, or `None` for the zero polynomial.
    pub fn exponent_bounds(&self) -> Option<(Exponents, Exponents)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for e in it {
            for i in 0..e.len() {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        Some((lo, hi))
    }

    pub fn degree_bounds(&self, name: &str) -> Option<(i32, i32)> {
        let idx = self.vars.index_of(name)?;
        let (lo, hi) = self.exponent_bounds()?;
        Some((lo[idx], hi[idx]))
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self.vars.index_of(name) {
            Some(i) => self.terms.keys().any(|e| e[i] != 0),
            None => false,
        }
    }

    /// Replaces `name` by `name^-1` (the mirror substitution `a <-> 1/a`).
    pub fn invert_var(&self, name: &str) -> Self {
        let idx = self.vars.index_of(name).unwrap_or_else(|| panic!("unknown variable `{name}`"));
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e[idx] = -e[idx];
                (e, c.clone())
            })
            .collect();
        LaurentPoly { vars: self.vars.clone(), terms }
    }

    /// Re-expresses over `out` by variable name. Variables with nonzero exponent must exist in `out`.
    pub fn rename_into(&self, out: &VarSet) -> Result<Self, PolyError> {
        self.substitute_all(&[], out)
    }

    /// Replaces every occurrence of `var` by `value`; remaining variables map by name into `out`.
    ///
    /// Negative powers of `var` need an invertible monomial `value`; see
    /// [`clear_and_divide`](Self::clear_and_divide) for the general case.
    pub fn substitute(&self, var: &str, value: &LaurentPoly<C>, out: &VarSet) -> Result<Self, PolyError> {
        self.substitute_all(&[(var, value)], out)
    }

    /// Simultaneous substitution of several variables.
    pub fn substitute_all(&self, subs: &[(&str, &LaurentPoly<C>)], out: &VarSet) -> Result<Self, PolyError> {
        // plan[i] = Some(sub index) or the index of the same name in `out`
        enum Target {
            Sub(usize),
            Var(usize),
            Unmapped,
        }
        let mut plan = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            if let Some(k) = subs.iter().position(|(n, _)| *n == name) {
                plan.push(Target::Sub(k));
            } else if let Some(j) = out.index_of(name) {
                plan.push(Target::Var(j));
            } else {
                plan.push(Target::Unmapped);
            }
        }
        for (n, v) in subs {
            if self.vars.index_of(n).is_none() {
                return Err(PolyError::UnknownVariable(n.to_string()));
            }
            if v.vars != *out {
                return Err(PolyError::VarSetMismatch { left: v.vars.joined(), right: out.joined() });
            }
        }
        let mut pow_cache: Vec<BTreeMap<i32, LaurentPoly<C>>> = vec![BTreeMap::new(); subs.len()];
        let mut result = Self::zero(out);
        for (e, c) in &self.terms {
            let mut base = Exponents::from_elem(0, out.len());
            let mut factor = Self::constant(out, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match plan[i] {
                    Target::Var(j) => base[j] += k,
                    Target::Unmapped => return Err(PolyError::UnknownVariable(self.vars.name(i).to_string())),
                    Target::Sub(s) => {
                        let value = subs[s].1;
                        let p = match pow_cache[s].get(&k) {
                            Some(p) => p.clone(),
                            None => {
                                let p = value.pow(k).map_err(|_| PolyError::NonInvertible {
                                    value: value.to_string(),
                                    term: Self::monomial(&self.vars, c.clone(), e.clone()).to_string(),
                                })?;
                                pow_cache[s].insert(k, p.clone());
                                p
                            }
                        };
                        factor = &factor * &p;
                    }
                }
            }
            result = &result + &factor.shift(&base);
        }
        Ok(result)
    }

    /// Substitutes a possibly non-invertible `value` for `var` by clearing negative
    /// powers of `var` first and dividing by the matching power of `value` afterwards.
    pub fn clear_and_divide(&self, var: &str, value: &LaurentPoly<C>, out: &VarSet) -> Result<Self, PolyError> {
        let idx = self.vars.index_of(var).ok_or_else(|| PolyError::UnknownVariable(var.to_string()))?;
        let k = self.terms.keys().map(|e| -e[idx]).max().unwrap_or(0).max(0);
        let mut shift = Exponents::from_elem(0, self.vars.len());
        shift[idx] = k;
        let cleared = self.shift(&shift).substitute(var, value, out)?;
        if k == 0 {
            return Ok(cleared);
        }
        cleared.div_exact(&value.pow(k)?)
    }

    /// Exact division in the Laurent ring. Fails with the remainder if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.check_vars(divisor)?;
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(self.clone());
        }
        let (plo, phi) = self.exponent_bounds().expect("nonzero");
        let (dlo, dhi) = divisor.exponent_bounds().expect("nonzero");
        let lo: Exponents = plo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
        let hi: Exponents = phi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
        let (lead_e, lead_c) = divisor.terms.iter().next_back().expect("nonzero");
        let mut quotient = Self::zero(&self.vars);
        let mut rem = self.clone();
        // quotient exponents must lie in the box [lo, hi], so the loop is finite
        while let Some((re, rc)) = rem.terms.iter().next_back() {
            let qe: Exponents = re.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            if qe.iter().zip(lo.iter().zip(&hi)).any(|(q, (l, h))| q < l || q > h) {
                break;
            }
            let Some(qc) = rc.div_exact(lead_c) else { break };
            let q = Self::monomial(&self.vars, qc, qe);
            rem = &rem - &(&q * divisor);
            quotient = &quotient + &q;
        }
        if rem.is_zero() {
            Ok(quotient)
        } else {
            Err(PolyError::InexactDivision { remainder: rem.to_string() })
        }
    }

    /// Terms in display order: total degree descending, then exponent vectors descending.
    fn display_order(&self) -> Vec<(&Exponents, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: i64 = a.iter().map(|&k| k as i64).sum();
            let db: i64 = b.iter().map(|&k| k as i64).sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    pub fn parse(text: &str, vars: &VarSet) -> Result<Self, PolyError> {
        crate::poly::parser::Parser::new(text, vars)?.parse_all()
    }
}

fn fmt_vars(f: &mut fmt::Formatter<'_>, vars: &VarSet, powers: &[(usize, i32)]) -> fmt::Result {
    for (n, (i, k)) in powers.iter().enumerate() {
        if n > 0 {
            f.write_str(" ")?;
        }
        f.write_str(vars.name(*i))?;
        if *k != 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl<C: Coeff> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            if neg {
                f.write_str("-")?;
            } else if n > 0 {
                f.write_str("+")?;
            }
            let abs = c.abs_value();
            let num: Vec<(usize, i32)> = e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (i, k)).collect();
            let den: Vec<(usize, i32)> = e.iter().enumerate().filter(|(_, &k)| k < 0).map(|(i, &k)| (i, -k)).collect();
            let coeff_text = abs.to_string();
            let coeff_text = if coeff_text.contains('/') { format!("({coeff_text})") } else { coeff_text };
            if num.is_empty() {
                f.write_str(&coeff_text)?;
            } else {
                if !abs.is_one() {
                    write!(f, "{coeff_text} ")?;
                }
                fmt_vars(f, &self.vars, &num)?;
            }
            if !den.is_empty() {
                f.write_str("/")?;
                let single = den.len() == 1;
                if !single {
                    f.write_str("(")?;
                }
                fmt_vars(f, &self.vars, &den)?;
                if !single {
                    f.write_str(")")?;
                }
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self, self.vars.joined())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl<'a, C: Coeff> $tr<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: &'a LaurentPoly<C>) -> LaurentPoly<C> {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<C: Coeff> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        self.scale(&-C::one())
    }
}

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

mod parser {
    use super::*;

    #[derive(Debug, Clone, PartialEq)]
    enum Tok {
        Num(String),
        Ident(String),
        Plus,
        Minus,
        Star,
        Slash,
        Caret,
        LParen,
        RParen,
    }

    pub(super) struct Parser<'v, C: Coeff> {
        toks: Vec<(usize, Tok)>,
        pos: usize,
        end: usize,
        vars: &'v VarSet,
        _c: std::marker::PhantomData<C>,
    }

    fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos, msg: msg.into() })
    }

    fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let ch = chars[i];
            let start = i;
            match ch {
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                '+' => out.push((start, Tok::Plus)),
                '-' | '\u{2212}' => out.push((start, Tok::Minus)),
                '*' | '\u{00b7}' => out.push((start, Tok::Star)),
                '/' => out.push((start, Tok::Slash)),
                '^' => out.push((start, Tok::Caret)),
                '(' => out.push((start, Tok::LParen)),
                ')' => out.push((start, Tok::RParen)),
                c if c.is_ascii_digit() => {
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    out.push((start, Tok::Num(chars[start..i].iter().collect())));
                    continue;
                }
                c if c.is_alphabetic() || c == '_' => {
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                    continue;
                }
                other => return err(start, format!("unexpected character `{other}`")),
            }
            i += 1;
        }
        Ok(out)
    }

    impl<'v, C: Coeff> Parser<'v, C> {
        pub(super) fn new(text: &str, vars: &'v VarSet) -> Result<Self, PolyError> {
            Ok(Parser { toks: lex(text)?, pos: 0, end: text.chars().count(), vars, _c: Default::default() })
        }

        fn peek(&self) -> Option<&Tok> {
            self.toks.get(self.pos).map(|(_, t)| t)
        }

        fn here(&self) -> usize {
            self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
        }

        pub(super) fn parse_all(mut self) -> Result<LaurentPoly<C>, PolyError> {
            if self.toks.is_empty() {
                return err(0, "empty expression");
            }
            let p = self.expr()?;
            if self.pos != self.toks.len() {
                return err(self.here(), "unexpected token");
            }
            Ok(p)
        }

        fn expr(&mut self) -> Result<LaurentPoly<C>, PolyError> {
            let mut acc = LaurentPoly::zero(self.vars);
            let mut sign = match self.peek() {
                Some(Tok::Minus) => {
                    self.pos += 1;
                    -1
                }
                Some(Tok::Plus) => {
                    self.pos += 1;
                    1
                }
                _ => 1,
            };
            loop {
                let t = self.term()?;
                acc = if sign < 0 { &acc - &t } else { &acc + &t };
                match self.peek() {
                    Some(Tok::Plus) => sign = 1,
                    Some(Tok::Minus) => sign = -1,
                    _ => break,
                }
                self.pos += 1;
            }
            Ok(acc)
        }

        fn starts_primary(&self) -> bool {
            matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::LParen))
        }

        fn term(&mut self) -> Result<LaurentPoly<C>, PolyError> {
            let mut acc = self.power()?;
            loop {
                match self.peek() {
                    Some(Tok::Star) => {
                        self.pos += 1;
                        let rhs = self.power()?;
                        acc = &acc * &rhs;
                    }
                    Some(Tok::Slash) => {
                        self.pos += 1;
                        let at = self.here();
                        let rhs = self.power()?;
                        let inv = rhs.inverse().or_else(|e| match e {
                            PolyError::DivisionByZero => err(at, "division by zero"),
                            _ => err(at, format!("divisor `{rhs}` is not a monomial")),
                        })?;
                        acc = &acc * &inv;
                    }
                    _ if self.starts_primary() => {
                        let rhs = self.power()?;
                        acc = &acc * &rhs;
                    }
                    _ => break,
                }
            }
            Ok(acc)
        }

        fn power(&mut self) -> Result<LaurentPoly<C>, PolyError> {
            let base = self.primary()?;
            if self.peek() != Some(&Tok::Caret) {
                return Ok(base);
            }
            self.pos += 1;
            let at = self.here();
            let neg = match self.peek() {
                Some(Tok::Minus) => {
                    self.pos += 1;
                    true
                }
                Some(Tok::Plus) => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let k: i32 = match self.peek() {
                Some(Tok::Num(d)) => d.parse().or_else(|_| err(at, "exponent out of range"))?,
                _ => return err(at, "expected integer exponent"),
            };
            self.pos += 1;
            let k = if neg { -k } else { k };
            base.pow(k).or_else(|_| err(at, format!("negative power of non-monomial `{base}`")))
        }

        fn primary(&mut self) -> Result<LaurentPoly<C>, PolyError> {
            let at = self.here();
            match self.toks.get(self.pos).map(|(_, t)| t.clone()) {
                Some(Tok::Num(d)) => {
                    self.pos += 1;
                    let c = C::parse_literal(&d).ok_or_else(|| PolyError::Parse { pos: at, msg: "bad number".into() })?;
                    Ok(LaurentPoly::constant(self.vars, c))
                }
                Some(Tok::Ident(name)) => {
                    self.pos += 1;
                    self.identifier(&name, at)
                }
                Some(Tok::LParen) => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    if self.peek() != Some(&Tok::RParen) {
                        return err(self.here(), "expected `)`");
                    }
                    self.pos += 1;
                    Ok(inner)
                }
                Some(_) => err(at, "expected number, variable or `(`"),
                None => err(at, "unexpected end of input"),
            }
        }

        /// A known variable, or a run of known variables written without spaces (`zx`).
        fn identifier(&self, name: &str, at: usize) -> Result<LaurentPoly<C>, PolyError> {
            if self.vars.index_of(name).is_some() {
                return Ok(LaurentPoly::var(self.vars, name, 1));
            }
            let mut acc = LaurentPoly::one(self.vars);
            let mut rest = name;
            'outer: while !rest.is_empty() {
                let mut best: Option<&str> = None;
                for v in self.vars.names() {
                    if rest.starts_with(v) && best.map_or(true, |b| v.len() > b.len()) {
                        best = Some(v);
                    }
                }
                match best {
                    Some(v) => {
                        acc = &acc * &LaurentPoly::var(self.vars, v, 1);
                        rest = &rest[v.len()..];
                        continue 'outer;
                    }
                    None => return err(at, format!("unknown variable `{name}`")),
                }
            }
            Ok(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type P = LaurentPoly<BigInt>;

    fn azx(s: &str) -> P {
        P::parse(s, &VarSet::azx()).unwrap()
    }

    fn y() -> P {
        let v = VarSet::azx();
        let a = P::var(&v, "a", 1);
        let ainv = P::var(&v, "a", -1);
        let zinv = P::var(&v, "z", -1);
        &(&(&a + &ainv) * &zinv) - &P::one(&v)
    }

    #[test]
    fn additive_inverse_is_empty() {
        let a = azx("a");
        let s = &a + &(-&a);
        assert!(s.is_zero());
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn disjoint_support_addition() {
        let p = &azx("1") + &azx("x^-1");
        assert_eq!(p.len(), 2);
        assert_eq!(p, azx("1+1/x"));
    }

    #[test]
    fn y_plus_one() {
        assert_eq!(&y() + &azx("1"), azx("a z^-1 + a^-1 z^-1"));
    }

    #[test]
    fn products() {
        assert!((&azx("a") * &azx("1/a")).is_one());
        assert_eq!(&azx("a+1/a") * &azx("1/z"), azx("a/z + 1/(a z)"));
        assert_eq!(&azx("z") * &y(), azx("a + 1/a - z"));
    }

    #[test]
    fn monomial_substitution() {
        let br = VarSet::new(&["A", "z", "c"]);
        let minus_a3 = LaurentPoly::<BigInt>::parse("-A^3", &br).unwrap();
        let got = azx("a+1/a").substitute("a", &minus_a3, &br).unwrap();
        assert_eq!(got, LaurentPoly::parse("-A^3-A^-3", &br).unwrap());
        let cinv = LaurentPoly::<BigInt>::parse("1/c", &br).unwrap();
        assert_eq!(azx("1/x").substitute("x", &cinv, &br).unwrap(), LaurentPoly::parse("c", &br).unwrap());
    }

    #[test]
    fn negative_power_of_binomial_rejected() {
        let out = VarSet::new(&["a", "A", "x"]);
        let value = LaurentPoly::<BigInt>::parse("A+1/A", &out).unwrap();
        let q = LaurentPoly::<BigInt>::parse("a/z", &VarSet::azx()).unwrap();
        match q.substitute("z", &value, &out) {
            Err(PolyError::NonInvertible { term, .. }) => assert_eq!(term, "a/z"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn clear_and_divide_y() {
        let out = VarSet::new(&["A", "c"]);
        let mid = VarSet::new(&["A", "z", "c"]);
        let a = LaurentPoly::<BigInt>::parse("-A^3", &mid).unwrap();
        let step = y().substitute_all(&[("a", &a)], &mid).unwrap_or_else(|e| panic!("{e}"));
        let z = LaurentPoly::<BigInt>::parse("A+1/A", &out).unwrap();
        let got = step.clear_and_divide("z", &z, &out).unwrap();
        assert_eq!(got, LaurentPoly::parse("-A^2-A^-2", &out).unwrap());

        let one = LaurentPoly::<BigInt>::one(&mid);
        assert!(one.clear_and_divide("z", &z, &out).unwrap().is_one());
        let z2 = LaurentPoly::<BigInt>::parse("z^2", &mid).unwrap();
        assert_eq!(z2.clear_and_divide("z", &z, &out).unwrap(), LaurentPoly::parse("A^2+2+A^-2", &out).unwrap());
    }

    #[test]
    fn inexact_division_reports_remainder() {
        let v = VarSet::new(&["A"]);
        let p = LaurentPoly::<BigInt>::parse("A^2+1", &v).unwrap();
        let d = LaurentPoly::<BigInt>::parse("A+1", &v).unwrap();
        assert!(matches!(p.div_exact(&d), Err(PolyError::InexactDivision { .. })));
        let d = LaurentPoly::<BigInt>::parse("2A", &v).unwrap();
        assert!(matches!(p.div_exact(&d), Err(PolyError::InexactDivision { .. })));
    }

    #[test]
    fn laurent_division_with_negative_exponents() {
        let v = VarSet::new(&["A"]);
        let p = LaurentPoly::<BigInt>::parse("A^3+A^-3", &v).unwrap();
        let d = LaurentPoly::<BigInt>::parse("A+A^-1", &v).unwrap();
        assert_eq!(p.div_exact(&d).unwrap(), LaurentPoly::parse("A^2-1+A^-2", &v).unwrap());
    }

    #[test]
    fn parse_examples() {
        assert_eq!(azx("1/x"), P::var(&VarSet::azx(), "x", -1));
        assert_eq!(azx("(a+1/a)/z-1"), y());
        let p = azx("-a^2-1+a z");
        assert_eq!(p.len(), 3);
        assert_eq!(p.to_string(), "-a^2+a z-1");
        assert_eq!(azx(&p.to_string()), p);
        assert_eq!(azx("1/x").to_string(), "1/x");
        // table-style fragments: juxtaposed variables, products of groups
        assert_eq!(azx("(-a+zx a^2+z x)/(x a)"), azx("-1/x + z a + z/a"));
        assert_eq!(azx("(-a^2-1+a z)^2/(z^2 a^2)"), &azx("(-a^2-1+a z)/(a z)") * &azx("(-a^2-1+a z)/(a z)"));
        assert_eq!(azx("2z^3 a"), azx("2*z^3*a"));
        assert_eq!(azx("\u{2212}a"), azx("-a"));
    }

    #[test]
    fn parse_errors_carry_position() {
        let v = VarSet::azx();
        match P::parse("a + + b", &v) {
            Err(PolyError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        match P::parse("a/(1+z)", &v) {
            Err(PolyError::Parse { pos, msg }) => {
                assert_eq!(pos, 2);
                assert!(msg.contains("not a monomial"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(P::parse("q", &v), Err(PolyError::Parse { .. })));
        assert!(matches!(P::parse("", &v), Err(PolyError::Parse { .. })));
        assert!(matches!(P::parse("(a", &v), Err(PolyError::Parse { .. })));
    }

    #[test]
    fn varset_mismatch_is_an_error() {
        let p = azx("a");
        let q = LaurentPoly::<BigInt>::parse("A", &VarSet::bracket()).unwrap();
        assert!(matches!(p.try_add(&q), Err(PolyError::VarSetMismatch { .. })));
        assert!(matches!(p.try_mul(&q), Err(PolyError::VarSetMismatch { .. })));
    }

    #[test]
    fn rational_coefficients_round_trip() {
        let v = VarSet::azx();
        let p = LaurentPoly::<BigRational>::parse("a/2 - 3/(4 x)", &v).unwrap();
        let back = LaurentPoly::<BigRational>::parse(&p.to_string(), &v).unwrap();
        assert_eq!(p, back);
        let two = LaurentPoly::<BigRational>::from_int(&v, 2);
        assert_eq!(p.div_exact(&two).unwrap().scale(&BigRational::from_i64(2)), p);
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        prop::collection::vec((-3i64..=3, -2i32..=2, -2i32..=2, -2i32..=1), 0..5).prop_map(|ts| {
            let v = VarSet::azx();
            P::from_terms(
                &v,
                ts.into_iter().map(|(c, a, z, x)| (BigInt::from(c), Exponents::from_slice(&[a, z, x]))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert!((&p - &p).is_zero());
        }

        #[test]
        fn no_zero_coefficients(p in arb_poly(), q in arb_poly()) {
            for r in [&p + &q, &p - &q, &p * &q] {
                prop_assert!(r.terms().all(|(_, c)| *c != BigInt::from(0)));
            }
        }

        #[test]
        fn display_parse_round_trip(p in arb_poly()) {
            let back = P::parse(&p.to_string(), &VarSet::azx()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn exact_division_inverts_multiplication(p in arb_poly(), q in arb_poly()) {
            prop_assume!(!q.is_zero());
            let prod = &p * &q;
            prop_assert_eq!(prod.div_exact(&q).unwrap(), p);
        }

        #[test]
        fn clear_and_divide_matches_direct_substitution(p in arb_poly()) {
            // z^3 * p has no negative z-powers for these degrees, so both routes apply
            let v = VarSet::azx();
            let lifted = &p * &P::var(&v, "z", 3);
            let out = VarSet::new(&["a", "A", "x"]);
            let value = LaurentPoly::<BigInt>::parse("A+1/A", &out).unwrap();
            let direct = lifted.substitute("z", &value, &out).unwrap();
            prop_assert_eq!(lifted.clear_and_divide("z", &value, &out).unwrap(), direct.clone());
            let multiplied = &(&p * &P::var(&v, "z", 1)) * &P::var(&v, "z", 2);
            prop_assert_eq!(multiplied.clear_and_divide("z", &value, &out).unwrap(), direct);
        }
    }
}
