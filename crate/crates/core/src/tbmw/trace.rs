//! Reduction to words with one top-index cluster, and the Markov traces.
//!
//! A cluster is one of `1, gₖ, gₖeₖ, hₖ, eₖ, fₖ` (tied) or `1, gₖ, hₖ` (classical).
//! Everything index dependent is computed once on three strands and shifted:
//! products of a cluster with a letter at the same index, and the reduction of
//! `d₁ δ d₂` with `d₁, d₂` at index `k` and `δ` at index `k-1`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use rustc_hash::FxHashMap;

use super::relations::{bmw_relations, tbmw_relations, Relation, RelationGroup};
use super::rewrite::{Budget, CompletionReport, RuleSet};
use super::{word_to_string, AlgebraElement, AlgebraError, Family, Kind, Letter, Word};
use crate::coeff::Coeff;
use crate::poly::{LaurentPoly, VarSet};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// Step budget, overridable through `TIELINK_STEP_BUDGET`.
pub fn step_budget() -> u64 {
    std::env::var("TIELINK_STEP_BUDGET").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_STEP_BUDGET)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cluster {
    One,
    G,
    GE,
    H,
    E,
    F,
}

impl Cluster {
    pub const TIED: [Cluster; 6] = [Cluster::One, Cluster::G, Cluster::GE, Cluster::H, Cluster::E, Cluster::F];
    pub const CLASSICAL: [Cluster; 3] = [Cluster::One, Cluster::G, Cluster::H];

    pub fn letters(self, index: u8) -> Word {
        let l = |k| Letter::new(k, index);
        match self {
            Cluster::One => Word::new(),
            Cluster::G => Word::from_slice(&[l(Kind::G)]),
            Cluster::GE => Word::from_slice(&[l(Kind::G), l(Kind::E)]),
            Cluster::H => Word::from_slice(&[l(Kind::H)]),
            Cluster::E => Word::from_slice(&[l(Kind::E)]),
            Cluster::F => Word::from_slice(&[l(Kind::F)]),
        }
    }

    fn from_kinds(kinds: &[Kind]) -> Option<Self> {
        Some(match kinds {
            [] => Cluster::One,
            [Kind::G] => Cluster::G,
            [Kind::G, Kind::E] => Cluster::GE,
            [Kind::H] => Cluster::H,
            [Kind::E] => Cluster::E,
            [Kind::F] => Cluster::F,
            _ => return None,
        })
    }
}

type Combo<C> = Vec<(Word, LaurentPoly<C>)>;
type Triple<C> = Vec<(Cluster, Cluster, Cluster, LaurentPoly<C>)>;

/// `(num, k)` standing for `num / (l + l⁻¹ - m)^k`.
#[derive(Debug, Clone)]
pub struct DenomPoly<C: Coeff = BigInt> {
    pub num: LaurentPoly<C>,
    pub den_pow: u32,
}

impl<C: Coeff> DenomPoly<C> {
    pub fn denominator() -> LaurentPoly<C> {
        let v = VarSet::bmw();
        LaurentPoly::var(&v, "l", 1) + LaurentPoly::var(&v, "l", -1) - LaurentPoly::var(&v, "m", 1)
    }

    /// From a polynomial in `l, m, d` with `d = 1/(l + l⁻¹ - m)` and no negative powers of `d`.
    pub fn from_lmd(p: &LaurentPoly<C>) -> Result<Self, AlgebraError> {
        let (lo, hi) = p.degree_bounds("d").unwrap_or((0, 0));
        if lo < 0 {
            return Err(AlgebraError::NotLaurent(p.to_string()));
        }
        let bmw = VarSet::bmw();
        let den = Self::denominator();
        let mut num = LaurentPoly::zero(&bmw);
        for (e, c) in p.terms() {
            let mono = LaurentPoly::monomial(&bmw, c.clone(), [e[0], e[1]].into_iter().collect());
            num = &num + &(&mono * &den.pow(hi - e[2])?);
        }
        Ok(DenomPoly { num, den_pow: hi as u32 })
    }

    /// `self · D^k` as a Laurent polynomial, if the division is exact.
    pub fn cleared(&self, k: u32) -> Result<LaurentPoly<C>, AlgebraError> {
        let den = Self::denominator();
        if k >= self.den_pow {
            Ok(&self.num * &den.pow((k - self.den_pow) as i32)?)
        } else {
            Ok(self.num.div_exact(&den.pow((self.den_pow - k) as i32)?)?)
        }
    }

    pub fn same_value(&self, other: &Self) -> bool {
        let k = self.den_pow.max(other.den_pow);
        match (self.cleared(k), other.cleared(k)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

/// Trace values of words, reusable across [`TraceEngine::trace_memo`] calls on one engine.
pub struct TraceMemo<C: Coeff = BigInt>(FxHashMap<Word, LaurentPoly<C>>);

impl<C: Coeff> Default for TraceMemo<C> {
    fn default() -> Self {
        TraceMemo(FxHashMap::default())
    }
}

impl<C: Coeff> TraceMemo<C> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub(crate) fn lmd_vars() -> VarSet {
    static V: OnceLock<VarSet> = OnceLock::new();
    V.get_or_init(|| VarSet::new(&["l", "m", "d"])).clone()
}

/// Rewriting system, cluster tables and trace weights of one algebra family.
pub struct TraceEngine<C: Coeff = BigInt> {
    family: Family,
    base: RuleSet<C>,
    report: CompletionReport,
    two: FxHashMap<(Cluster, Kind), Combo<C>>,
    triples: FxHashMap<(Cluster, Cluster, Cluster), Result<Triple<C>, String>>,
    weights: FxHashMap<Cluster, LaurentPoly<C>>,
    trace_vars: VarSet,
    budget: u64,
}

impl<C: Coeff> TraceEngine<C> {
    /// The tied algebra, with the trace in `a, z, x`.
    pub fn tied() -> Self {
        let v = VarSet::azx();
        let x = LaurentPoly::<C>::var(&v, "x", 1);
        let a = LaurentPoly::var(&v, "a", 1);
        let y = &(&(&a + &LaurentPoly::var(&v, "a", -1)) * &LaurentPoly::var(&v, "z", -1)) - &LaurentPoly::one(&v);
        let xa = &x * &a;
        let weights = [
            (Cluster::One, LaurentPoly::one(&v)),
            (Cluster::G, xa.clone()),
            (Cluster::GE, xa),
            (Cluster::H, x.clone()),
            (Cluster::F, x.clone()),
            (Cluster::E, &x * &y),
        ];
        Self::build(Family::Tied, &tbmw_relations(), &[RelationGroup::Defining], &Cluster::TIED, weights.into_iter().collect(), v)
    }

    /// The classical algebra, with the trace in `l, m, d`, `d = 1/(l + l⁻¹ - m)`.
    pub fn classical() -> Self {
        let v = lmd_vars();
        let md = &LaurentPoly::<C>::var(&v, "m", 1) * &LaurentPoly::var(&v, "d", 1);
        let weights = [
            (Cluster::One, LaurentPoly::one(&v)),
            (Cluster::G, &md * &LaurentPoly::var(&v, "l", 1)),
            (Cluster::H, md),
        ];
        // The minimal presentation only yields `(m - l⁻¹)(g₁g₂h₁ - h₂h₁) = 0`, so the
        // standard consequences are seeded as well.
        let groups = [RelationGroup::Defining, RelationGroup::Derived];
        Self::build(Family::Classical, &bmw_relations(), &groups, &Cluster::CLASSICAL, weights.into_iter().collect(), v)
    }

    fn build(
        family: Family,
        relations: &[Relation],
        groups: &[RelationGroup],
        clusters: &[Cluster],
        weights: FxHashMap<Cluster, LaurentPoly<C>>,
        trace_vars: VarSet,
    ) -> Self {
        let mut seeds = Vec::new();
        for r in relations.iter().filter(|r| groups.contains(&r.group)) {
            for (i, j) in r.instances(3) {
                let (l, rhs) = r.instantiate::<C>(family, 3, i, j).expect("catalogue parses");
                let d = l.try_sub(&rhs).expect("same algebra");
                seeds.push(d.terms().map(|(w, c)| (w.clone(), c.clone())).collect());
            }
        }
        let (base, report) = RuleSet::complete(family.vars(), 2, seeds, 20_000);
        let mut engine = TraceEngine {
            family,
            base,
            report,
            two: FxHashMap::default(),
            triples: FxHashMap::default(),
            weights,
            trace_vars,
            budget: step_budget(),
        };
        let kinds: Vec<Kind> = [Kind::G, Kind::H, Kind::F, Kind::E].into_iter().filter(|k| family.has_kind(*k)).collect();
        let mut budget = Budget::new(u64::MAX);
        for &c in clusters {
            for &k in &kinds {
                let mut w = c.letters(1);
                w.push(Letter::new(k, 1));
                let red = engine.base.reduce_terms([(w, LaurentPoly::one(&family.vars()))], &mut budget).expect("unbounded");
                engine.two.insert((c, k), red.into_iter().collect());
            }
        }
        for &d1 in &clusters[1..] {
            for &delta in &clusters[1..] {
                for &d2 in &clusters[1..] {
                    let mut w = d1.letters(2);
                    w.extend_from_slice(&delta.letters(1));
                    w.extend_from_slice(&d2.letters(2));
                    let red = engine.base.reduce_terms([(w.clone(), LaurentPoly::one(&family.vars()))], &mut budget).expect("unbounded");
                    let mut out = Vec::new();
                    let mut failed = None;
                    for (rw, rc) in red {
                        match split_triple(&rw) {
                            Some((c1, d, c2)) => out.push((c1, d, c2, rc)),
                            None => failed = Some(word_to_string(&rw)),
                        }
                    }
                    let entry = match failed {
                        None => Ok(out),
                        Some(bad) => Err(format!("{} reduces to a term in `{bad}`", word_to_string(&w))),
                    };
                    engine.triples.insert((d1, delta, d2), entry);
                }
            }
        }
        engine
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn completion_report(&self) -> &CompletionReport {
        &self.report
    }

    /// The rewriting system on three strands.
    pub fn base_rules(&self) -> &RuleSet<C> {
        &self.base
    }

    /// Triples `d₁ δ d₂` (at indices 2, 1, 2) that do not reduce to a single top cluster.
    pub fn stuck_triples(&self) -> Vec<String> {
        let mut v: Vec<String> = self.triples.values().filter_map(|r| r.as_ref().err().cloned()).collect();
        v.sort();
        v
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn trace_vars(&self) -> &VarSet {
        &self.trace_vars
    }

    /// Trace weight of a top cluster.
    pub fn weight(&self, c: Cluster) -> &LaurentPoly<C> {
        &self.weights[&c]
    }

    /// Rules valid on `strands` strands: shifted copies of the base system plus far commutations.
    pub fn rules_for(&self, strands: usize) -> RuleSet<C> {
        let top = strands.saturating_sub(1).max(2) as u8;
        let mut set = RuleSet::new(self.family.vars(), top);
        for by in 0..=(top as i32 - 2) {
            set = set.with_shifted_copy(&self.base, by);
        }
        let kinds: Vec<Kind> = [Kind::G, Kind::H, Kind::F, Kind::E].into_iter().filter(|k| self.family.has_kind(*k)).collect();
        set.with_far_commutation(&kinds)
    }

    /// Normal form by rewriting. This is canonical on up to three strands.
    pub fn normal_form(&self, u: &AlgebraElement<C>) -> Result<AlgebraElement<C>, AlgebraError> {
        self.check_family(u)?;
        let rules = self.rules_for(u.strands());
        let red = rules.reduce(u.terms().map(|(w, c)| (w.clone(), c.clone())), self.budget)?;
        Ok(AlgebraElement::from_terms(self.family, u.strands(), red))
    }

    /// Whether `u` reduces to zero.
    pub fn is_zero(&self, u: &AlgebraElement<C>) -> Result<bool, AlgebraError> {
        Ok(self.normal_form(u)?.is_zero())
    }

    fn check_family(&self, u: &AlgebraElement<C>) -> Result<(), AlgebraError> {
        if u.family() != self.family {
            return Err(AlgebraError::FamilyMismatch);
        }
        Ok(())
    }

    fn one(&self) -> LaurentPoly<C> {
        LaurentPoly::one(&self.family.vars())
    }

    /// Multiplies a run of letters at one index into clusters.
    fn run_clusters(&self, run: &[Letter], budget: &mut Budget) -> Result<Vec<(Cluster, LaurentPoly<C>)>, AlgebraError> {
        let mut acc: BTreeMap<Cluster, LaurentPoly<C>> = BTreeMap::new();
        acc.insert(Cluster::One, self.one());
        for l in run {
            budget.step(run)?;
            let mut next: BTreeMap<Cluster, LaurentPoly<C>> = BTreeMap::new();
            for (c, k) in &acc {
                for (w, d) in &self.two[&(*c, l.kind)] {
                    let kinds: Vec<Kind> = w.iter().map(|x| x.kind).collect();
                    let cl = Cluster::from_kinds(&kinds).ok_or_else(|| AlgebraError::Stuck(word_to_string(w)))?;
                    add_to(&mut next, cl, k * d);
                }
            }
            acc = next;
        }
        Ok(acc.into_iter().collect())
    }

    /// Rewrites `word` into words containing at most one cluster at index `k`.
    fn reduce_top(&self, word: &[Letter], k: u8, budget: &mut Budget) -> Result<BTreeMap<Word, LaurentPoly<C>>, AlgebraError> {
        let mut out = BTreeMap::new();
        let mut work: Vec<(Word, LaurentPoly<C>)> = vec![(Word::from_slice(word), self.one())];
        while let Some((w, c)) = work.pop() {
            let Some(split) = Segments::new(&w, k) else {
                add_to(&mut out, w, c);
                continue;
            };
            let first = self.run_clusters(&split.runs[0].1, budget)?;
            if split.runs.len() == 1 {
                for (cl, d) in first {
                    let mut x = split.pre.clone();
                    x.extend_from_slice(&split.runs[0].0);
                    x.extend_from_slice(&cl.letters(k));
                    x.extend_from_slice(&split.post);
                    add_to(&mut out, x, &c * &d);
                }
                continue;
            }
            budget.step(&w)?;
            let second = self.run_clusters(&split.runs[1].1, budget)?;
            let mut middle = split.seps[0].clone();
            middle.extend_from_slice(&split.runs[1].0);
            let mut rest = Word::new();
            for (i, (moved, run)) in split.runs.iter().enumerate().skip(2) {
                rest.extend_from_slice(&split.seps[i - 1]);
                rest.extend_from_slice(moved);
                rest.extend_from_slice(run);
            }
            rest.extend_from_slice(&split.post);
            let mut head = split.pre.clone();
            head.extend_from_slice(&split.runs[0].0);
            let mids = self.reduce_top(&middle, k - 1, budget)?;
            for (mw, mc) in &mids {
                let (u1, delta, u2) = split_at_index(mw, k - 1).ok_or_else(|| AlgebraError::Stuck(word_to_string(mw)))?;
                for (d1, c1) in &first {
                    for (d2, c2) in &second {
                        let coeff = &(&(&c * mc) * c1) * c2;
                        let mut x = head.clone();
                        if *d1 == Cluster::One || *d2 == Cluster::One || delta == Cluster::One {
                            if delta == Cluster::One {
                                x.extend_from_slice(&u1);
                                x.extend_from_slice(&u2);
                                x.extend_from_slice(&d1.letters(k));
                                x.extend_from_slice(&d2.letters(k));
                            } else {
                                x.extend_from_slice(&d1.letters(k));
                                x.extend_from_slice(mw);
                                x.extend_from_slice(&d2.letters(k));
                            }
                            x.extend_from_slice(&rest);
                            work.push((x, coeff));
                            continue;
                        }
                        let table = self.triples[&(*d1, delta, *d2)].as_ref().map_err(|e| AlgebraError::Stuck(e.clone()))?;
                        for (t1, t, t2, tc) in table {
                            let mut y = x.clone();
                            y.extend_from_slice(&u1);
                            y.extend_from_slice(&t1.letters(k - 1));
                            y.extend_from_slice(&t.letters(k));
                            y.extend_from_slice(&t2.letters(k - 1));
                            y.extend_from_slice(&u2);
                            y.extend_from_slice(&rest);
                            work.push((y, &coeff * tc));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn reduce_word(&self, word: &[Letter], k: u8, budget: &mut Budget) -> Result<BTreeMap<Word, LaurentPoly<C>>, AlgebraError> {
        if k == 0 {
            return Ok([(Word::from_slice(word), self.one())].into_iter().collect());
        }
        let mut out = BTreeMap::new();
        for (w, c) in self.reduce_top(word, k, budget)? {
            match split_at_index(&w, k) {
                Some((p, d, q)) if d != Cluster::One => {
                    let left = self.reduce_word(&p, k - 1, budget)?;
                    let right = self.reduce_word(&q, k - 1, budget)?;
                    for (lw, lc) in &left {
                        for (rw, rc) in &right {
                            let mut x = lw.clone();
                            x.extend_from_slice(&d.letters(k));
                            x.extend_from_slice(rw);
                            add_to(&mut out, x, &(&c * lc) * rc);
                        }
                    }
                }
                _ => {
                    for (x, d) in self.reduce_word(&w, k - 1, budget)? {
                        add_to(&mut out, x, &c * &d);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced form: each word is `w₁ d w₂` with `d` a single top cluster and
    /// `w₁`, `w₂` reduced on fewer strands.
    pub fn reduce(&self, u: &AlgebraElement<C>) -> Result<AlgebraElement<C>, AlgebraError> {
        self.check_family(u)?;
        let mut budget = Budget::new(self.budget);
        let mut out = AlgebraElement::zero(self.family, u.strands());
        for (w, c) in u.terms() {
            let k = w.iter().map(|l| l.index).max().unwrap_or(0);
            for (x, d) in self.reduce_word(w, k, &mut budget)? {
                out.add_term(x, c * &d);
            }
        }
        Ok(out)
    }

    /// Reduced product.
    pub fn multiply(&self, u: &AlgebraElement<C>, v: &AlgebraElement<C>) -> Result<AlgebraElement<C>, AlgebraError> {
        self.reduce(&u.try_mul(v)?)
    }

    fn trace_word(
        &self,
        word: &[Letter],
        memo: &mut FxHashMap<Word, LaurentPoly<C>>,
        budget: &mut Budget,
    ) -> Result<LaurentPoly<C>, AlgebraError> {
        if word.is_empty() {
            return Ok(LaurentPoly::one(&self.trace_vars));
        }
        if let Some(v) = memo.get(word) {
            return Ok(v.clone());
        }
        let k = word.iter().map(|l| l.index).max().unwrap_or(0);
        let mut acc = LaurentPoly::zero(&self.trace_vars);
        for (w, c) in self.reduce_top(word, k, budget)? {
            let c = c.rename_into(&self.trace_vars)?;
            let value = match split_at_index(&w, k) {
                Some((p, d, q)) if d != Cluster::One => {
                    let mut rotated = q;
                    rotated.extend_from_slice(&p);
                    &self.trace_word(&rotated, memo, budget)? * &self.weights[&d]
                }
                _ => self.trace_word(&w, memo, budget)?,
            };
            acc = &acc + &(&c * &value);
        }
        memo.insert(Word::from_slice(word), acc.clone());
        Ok(acc)
    }

    /// The Markov trace. Its value does not depend on the number of strands.
    pub fn trace(&self, u: &AlgebraElement<C>) -> Result<LaurentPoly<C>, AlgebraError> {
        self.trace_memo(u, &mut TraceMemo::default())
    }

    pub fn trace_memo(&self, u: &AlgebraElement<C>, memo: &mut TraceMemo<C>) -> Result<LaurentPoly<C>, AlgebraError> {
        self.check_family(u)?;
        let mut budget = Budget::new(self.budget);
        let mut acc = LaurentPoly::zero(&self.trace_vars);
        for (w, c) in u.terms() {
            let t = self.trace_word(w, &mut memo.0, &mut budget)?;
            acc = &acc + &(&c.rename_into(&self.trace_vars)? * &t);
        }
        Ok(acc)
    }
}

fn add_to<K: Ord, C: Coeff>(map: &mut BTreeMap<K, LaurentPoly<C>>, key: K, c: LaurentPoly<C>) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

/// A word cut around its letters at index `k`. Letters below `k-1` that sit
/// between two top letters are moved in front of the run they interrupt.
struct Segments {
    pre: Word,
    /// `(moved, run)` pairs.
    runs: Vec<(Word, Word)>,
    seps: Vec<Word>,
    post: Word,
}

impl Segments {
    fn new(w: &[Letter], k: u8) -> Option<Self> {
        let tops: Vec<usize> = (0..w.len()).filter(|&i| w[i].index == k).collect();
        let (&first, &last) = (tops.first()?, tops.last()?);
        let mut runs = vec![(Word::new(), Word::from_slice(&[w[first]]))];
        let mut seps = Vec::new();
        for pair in tops.windows(2) {
            let gap = &w[pair[0] + 1..pair[1]];
            if gap.iter().any(|l| l.index + 1 == k) {
                seps.push(Word::from_slice(gap));
                runs.push((Word::new(), Word::from_slice(&[w[pair[1]]])));
            } else {
                let r = runs.last_mut().unwrap();
                r.0.extend_from_slice(gap);
                r.1.push(w[pair[1]]);
            }
        }
        Some(Segments { pre: Word::from_slice(&w[..first]), runs, seps, post: Word::from_slice(&w[last + 1..]) })
    }
}

/// Splits `w` as `p d q` with all index-`k` letters forming the cluster `d`.
fn split_at_index(w: &[Letter], k: u8) -> Option<(Word, Cluster, Word)> {
    let tops: Vec<usize> = (0..w.len()).filter(|&i| w[i].index == k).collect();
    let Some((&first, &last)) = tops.first().zip(tops.last()) else {
        return Some((Word::from_slice(w), Cluster::One, Word::new()));
    };
    if last + 1 - first != tops.len() {
        return None;
    }
    let kinds: Vec<Kind> = w[first..=last].iter().map(|l| l.kind).collect();
    let d = Cluster::from_kinds(&kinds)?;
    Some((Word::from_slice(&w[..first]), d, Word::from_slice(&w[last + 1..])))
}

/// Reads a three-strand word as `c₁ d c₂` (clusters at indices 1, 2, 1).
fn split_triple(w: &[Letter]) -> Option<(Cluster, Cluster, Cluster)> {
    let (p, d, q) = split_at_index(w, 2)?;
    let kinds = |x: &Word| x.iter().map(|l| l.kind).collect::<Vec<_>>();
    Some((Cluster::from_kinds(&kinds(&p))?, d, Cluster::from_kinds(&kinds(&q))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tbmw::normal_words;

    fn alphabet(family: Family, top: u8) -> Vec<Letter> {
        let kinds: Vec<Kind> = [Kind::G, Kind::H, Kind::F, Kind::E].into_iter().filter(|k| family.has_kind(*k)).collect();
        (1..=top).flat_map(|i| kinds.iter().map(move |&k| Letter::new(k, i))).collect()
    }

    #[test]
    fn completion_closes() {
        for (e, dims) in [(TraceEngine::<BigInt>::tied(), (6, 75)), (TraceEngine::<BigInt>::classical(), (3, 15))] {
            let r = e.completion_report();
            assert!(!r.truncated);
            assert!(r.unresolved.is_empty(), "{:?}", r.unresolved);
            assert!(e.stuck_triples().is_empty());
            let two = normal_words(e.base_rules(), &alphabet(e.family(), 1), 5000).unwrap();
            let three = normal_words(e.base_rules(), &alphabet(e.family(), 2), 5000).unwrap();
            assert_eq!((two.len(), three.len()), dims);
        }
    }

    #[test]
    fn braid_weight_is_forced_by_tangle_relations() {
        // h₁g₂h₁ = a h₁ and h₁² = x⁻¹h₁, so centrality pins ϖ(α g) to x a ϖ(α)
        let e = TraceEngine::<BigInt>::tied();
        let p = |s: &str| AlgebraElement::<BigInt>::parse(s, Family::Tied, Some(3)).unwrap();
        assert_eq!(e.normal_form(&p("h1 g2 h1")).unwrap(), p("a h1"));
        assert_eq!(e.normal_form(&p("h1 h1")).unwrap(), p("x^-1 h1"));
        let ax = LaurentPoly::parse("a x", &VarSet::azx()).unwrap();
        assert_eq!(e.trace(&p("h1 g2 h1")).unwrap(), ax);
        assert_eq!(e.trace(&p("g2 h1 h1")).unwrap(), ax);
        assert_eq!(e.trace(&p("g1")).unwrap(), ax);
    }

    #[test]
    fn basic_traces() {
        let e = TraceEngine::<BigInt>::tied();
        let p = |s: &str| AlgebraElement::<BigInt>::parse(s, Family::Tied, Some(2)).unwrap();
        let q = |s: &str| LaurentPoly::parse(s, &VarSet::azx()).unwrap();
        assert_eq!(e.trace(&p("1")).unwrap(), q("1"));
        assert_eq!(e.trace(&p("h1")).unwrap(), q("x"));
        assert_eq!(e.trace(&p("f1")).unwrap(), q("x"));
        assert_eq!(e.trace(&p("e1")).unwrap(), q("x a/z + x/(a z) - x"));
        assert_eq!(e.trace(&p("G1")).unwrap(), q("x/a"));
        assert_eq!(e.trace(&p("G1 e1")).unwrap(), q("x/a"));
        assert_eq!(e.normal_form(&p("e1 e1")).unwrap(), p("e1"));
        assert_eq!(e.normal_form(&p("e1 h1")).unwrap(), p("h1"));
        assert_eq!(e.normal_form(&p("f1 f1")).unwrap(), p("(a z^-1 + a^-1 z^-1 - 1) f1"));
        assert_eq!(e.normal_form(&p("g1 g1")).unwrap(), p("z g1 e1 + z a^-1 f1 - 1"));
    }

    #[test]
    fn classical_traces() {
        let e = TraceEngine::<BigInt>::classical();
        let p = |s: &str| AlgebraElement::<BigInt>::parse(s, Family::Classical, Some(2)).unwrap();
        let q = |s: &str| LaurentPoly::parse(s, &lmd_vars()).unwrap();
        assert_eq!(e.trace(&p("g1")).unwrap(), q("l m d"));
        assert_eq!(e.trace(&p("h1")).unwrap(), q("m d"));
        let inv = DenomPoly::from_lmd(&e.trace(&p("G1")).unwrap()).unwrap();
        assert!(inv.same_value(&DenomPoly::from_lmd(&q("m d/l")).unwrap()));
        assert_eq!(inv.cleared(1).unwrap(), LaurentPoly::parse("m/l", &VarSet::bmw()).unwrap());
    }

    #[test]
    fn larger_reductions() {
        let e = TraceEngine::<BigInt>::tied();
        let p = |s: &str| AlgebraElement::<BigInt>::parse(s, Family::Tied, Some(3)).unwrap();
        assert_eq!(e.normal_form(&p("h2 f1 h2")).unwrap(), p("h2"));
        let r = e.reduce(&p("g1 g2 g1 h2 e1 g2 f1 g1 h2")).unwrap();
        for (w, _) in r.terms() {
            assert!(w.iter().filter(|l| l.index == 2).count() <= 1, "{}", word_to_string(w));
        }
    }
}
