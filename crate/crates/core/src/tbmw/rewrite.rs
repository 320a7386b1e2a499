//! Word rewriting modulo an admissible order, and completion of relation sets.
//!
//! Words are compared first by letter counts, from the top index down, with
//! `e` letters counted after the others at the same index; ties are broken
//! lexicographically with lower indices first. A rule rewrites its leading
//! word into a combination of smaller words.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::{word_to_string, AlgebraError, Kind, Letter, Word};
use crate::coeff::Coeff;
use crate::poly::{LaurentPoly, VarSet};

type Weight = SmallVec<[u16; 8]>;

fn weight(w: &[Letter], top: u8) -> Weight {
    let mut v: Weight = SmallVec::from_elem(0, 2 * top as usize);
    for l in w {
        let slot = 2 * (top - l.index) as usize + usize::from(l.kind == Kind::E);
        v[slot] += 1;
    }
    v
}

pub(crate) fn word_cmp(a: &[Letter], b: &[Letter], top: u8) -> Ordering {
    weight(a, top).cmp(&weight(b, top)).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    weight: Weight,
    word: Word,
}

impl Key {
    fn new(word: Word, top: u8) -> Self {
        Key { weight: weight(&word, top), word }
    }
}

/// `lhs → rhs`, where every word of `rhs` is smaller than `lhs`.
#[derive(Clone, Debug)]
pub struct Rule<C: Coeff> {
    pub lhs: Word,
    pub rhs: Vec<(Word, LaurentPoly<C>)>,
}

impl<C: Coeff> Rule<C> {
    pub fn shifted(&self, by: i32) -> Self {
        let sh = |w: &Word| w.iter().map(|l| l.shifted(by)).collect::<Word>();
        Rule { lhs: sh(&self.lhs), rhs: self.rhs.iter().map(|(w, c)| (sh(w), c.clone())).collect() }
    }
}

/// Counts rewriting steps against a budget.
pub(crate) struct Budget {
    pub(crate) limit: u64,
    pub(crate) used: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub(crate) fn step(&mut self, word: &[Letter]) -> Result<(), AlgebraError> {
        self.used += 1;
        if self.used > self.limit {
            return Err(AlgebraError::StepBudget { budget: self.limit, word: word_to_string(word) });
        }
        Ok(())
    }
}

#[derive(Clone)]
pub struct RuleSet<C: Coeff> {
    vars: VarSet,
    top: u8,
    rules: Vec<Rule<C>>,
    live: Vec<bool>,
    by_first: FxHashMap<Letter, Vec<u32>>,
}

impl<C: Coeff> RuleSet<C> {
    pub fn new(vars: VarSet, top: u8) -> Self {
        RuleSet { vars, top, rules: Vec::new(), live: Vec::new(), by_first: FxHashMap::default() }
    }

    pub fn top(&self) -> u8 {
        self.top
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule<C>> {
        self.rules.iter().zip(&self.live).filter(|(_, l)| **l).map(|(r, _)| r)
    }

    pub fn len(&self) -> usize {
        self.live.iter().filter(|l| **l).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Adds a rule without any completion. The caller guarantees it is decreasing.
    pub fn push(&mut self, rule: Rule<C>) -> usize {
        debug_assert!(rule.rhs.iter().all(|(w, _)| word_cmp(w, &rule.lhs, self.top) == Ordering::Less));
        let id = self.rules.len();
        self.by_first.entry(rule.lhs[0]).or_default().push(id as u32);
        self.rules.push(rule);
        self.live.push(true);
        id
    }

    fn kill(&mut self, id: usize) {
        self.live[id] = false;
        let first = self.rules[id].lhs[0];
        if let Some(v) = self.by_first.get_mut(&first) {
            v.retain(|&r| r as usize != id);
        }
    }

    /// Rules for letters `lo..=hi` on `top` indices: far letters commute, lower index first.
    pub fn with_far_commutation(mut self, kinds: &[Kind]) -> Self {
        let one = LaurentPoly::one(&self.vars);
        for i in 1..=self.top {
            for j in i + 2..=self.top {
                for &p in kinds {
                    for &q in kinds {
                        let lo = Letter::new(p, i);
                        let hi = Letter::new(q, j);
                        self.push(Rule { lhs: Word::from_slice(&[hi, lo]), rhs: vec![(Word::from_slice(&[lo, hi]), one.clone())] });
                    }
                }
            }
        }
        self
    }

    /// The union with `other` shifted up by `by` indices.
    pub fn with_shifted_copy(mut self, other: &RuleSet<C>, by: i32) -> Self {
        for r in other.rules() {
            let s = r.shifted(by);
            if self.find_match(&s.lhs).is_none() {
                self.push(s);
            }
        }
        self
    }

    fn find_match(&self, word: &[Letter]) -> Option<(usize, usize)> {
        for pos in 0..word.len() {
            if let Some(ids) = self.by_first.get(&word[pos]) {
                for &id in ids {
                    let lhs = &self.rules[id as usize].lhs;
                    if word[pos..].starts_with(lhs) {
                        return Some((pos, id as usize));
                    }
                }
            }
        }
        None
    }

    pub fn is_reducible(&self, word: &[Letter]) -> bool {
        self.find_match(word).is_some()
    }

    /// Fully reduces a combination of words.
    pub(crate) fn reduce_terms<I>(&self, terms: I, budget: &mut Budget) -> Result<BTreeMap<Word, LaurentPoly<C>>, AlgebraError>
    where
        I: IntoIterator<Item = (Word, LaurentPoly<C>)>,
    {
        let mut work: BTreeMap<Key, LaurentPoly<C>> = BTreeMap::new();
        let add = |work: &mut BTreeMap<Key, LaurentPoly<C>>, w: Word, c: LaurentPoly<C>| {
            if c.is_zero() {
                return;
            }
            let key = Key::new(w, self.top);
            match work.get_mut(&key) {
                Some(old) => {
                    let s = &*old + &c;
                    if s.is_zero() {
                        work.remove(&key);
                    } else {
                        *old = s;
                    }
                }
                None => {
                    work.insert(key, c);
                }
            }
        };
        for (w, c) in terms {
            add(&mut work, w, c);
        }
        let mut out = BTreeMap::new();
        while let Some((key, c)) = work.pop_last() {
            match self.find_match(&key.word) {
                Some((pos, id)) => {
                    budget.step(&key.word)?;
                    let rule = &self.rules[id];
                    let (pre, post) = (&key.word[..pos], &key.word[pos + rule.lhs.len()..]);
                    for (rw, rc) in &rule.rhs {
                        let mut w: Word = Word::from_slice(pre);
                        w.extend_from_slice(rw);
                        w.extend_from_slice(post);
                        add(&mut work, w, &c * rc);
                    }
                }
                None => {
                    out.insert(key.word, c);
                }
            }
        }
        Ok(out)
    }

    pub fn reduce<I>(&self, terms: I, budget: u64) -> Result<BTreeMap<Word, LaurentPoly<C>>, AlgebraError>
    where
        I: IntoIterator<Item = (Word, LaurentPoly<C>)>,
    {
        self.reduce_terms(terms, &mut Budget::new(budget))
    }

    fn leading(&self, p: &BTreeMap<Word, LaurentPoly<C>>) -> Option<(Word, LaurentPoly<C>)> {
        p.iter()
            .max_by(|a, b| word_cmp(a.0, b.0, self.top))
            .map(|(w, c)| (w.clone(), c.clone()))
    }

    /// Completes `seeds` (each a combination equal to zero) into a rewriting system.
    ///
    /// New rules are only formed when the leading coefficient is a unit of the
    /// Laurent ring; other relations are reported back unresolved.
    pub fn complete(vars: VarSet, top: u8, seeds: Vec<Vec<(Word, LaurentPoly<C>)>>, max_rules: usize) -> (Self, CompletionReport) {
        let mut set = RuleSet::new(vars, top);
        let mut report = CompletionReport::default();
        let mut seeds: Vec<Option<Vec<(Word, LaurentPoly<C>)>>> = seeds.into_iter().map(Some).collect();
        let mut queue: BinaryHeap<Reverse<(usize, u64, Task)>> = BinaryHeap::new();
        let mut seq = 0u64;
        for (i, s) in seeds.iter().enumerate() {
            let deg = s.as_ref().unwrap().iter().map(|(w, _)| w.len()).max().unwrap_or(0);
            queue.push(Reverse((deg, seq, Task::Seed(i))));
            seq += 1;
        }
        let mut unresolved: Vec<Vec<(Word, LaurentPoly<C>)>> = Vec::new();
        let mut budget = Budget::new(u64::MAX);
        while let Some(Reverse((_, _, task))) = queue.pop() {
            let poly = match task {
                Task::Seed(i) => match seeds[i].take() {
                    Some(p) => p,
                    None => continue,
                },
                Task::Pair(r1, r2, k) => {
                    if !set.live[r1] || !set.live[r2] {
                        continue;
                    }
                    report.pairs += 1;
                    set.s_poly(r1, r2, k)
                }
            };
            let reduced = set.reduce_terms(poly, &mut budget).expect("unbounded budget");
            let Some((lw, lc)) = set.leading(&reduced) else { continue };
            let inv = match lc.as_monomial() {
                Some((c, _)) if c.is_unit() => lc.inverse().expect("unit monomial"),
                _ => {
                    unresolved.push(reduced.into_iter().collect());
                    continue;
                }
            };
            if set.len() >= max_rules {
                report.truncated = true;
                break;
            }
            let rhs: Vec<(Word, LaurentPoly<C>)> =
                reduced.iter().filter(|(w, _)| **w != lw).map(|(w, c)| (w.clone(), -(c * &inv))).collect();
            for id in 0..set.rules.len() {
                if set.live[id] && contains(&set.rules[id].lhs, &lw) {
                    set.kill(id);
                    let r = &set.rules[id];
                    let mut p = vec![(r.lhs.clone(), LaurentPoly::one(&set.vars))];
                    p.extend(r.rhs.iter().map(|(w, c)| (w.clone(), -c)));
                    let deg = r.lhs.len();
                    seeds.push(Some(p));
                    queue.push(Reverse((deg, seq, Task::Seed(seeds.len() - 1))));
                    seq += 1;
                }
            }
            let new = set.push(Rule { lhs: lw, rhs });
            for other in 0..set.rules.len() {
                if !set.live[other] {
                    continue;
                }
                for (a, b) in [(new, other), (other, new)] {
                    let (la, lb) = (&set.rules[a].lhs, &set.rules[b].lhs);
                    for k in 1..la.len().min(lb.len()) {
                        if la[la.len() - k..] == lb[..k] {
                            queue.push(Reverse((la.len() + lb.len() - k, seq, Task::Pair(a, b, k))));
                            seq += 1;
                        }
                    }
                    if a == b {
                        break;
                    }
                }
            }
        }
        for p in unresolved {
            let reduced = set.reduce_terms(p, &mut budget).expect("unbounded budget");
            if !reduced.is_empty() {
                report.unresolved.push(
                    reduced.iter().map(|(w, c)| format!("({c}) {}", word_to_string(w))).collect::<Vec<_>>().join(" + "),
                );
            }
        }
        set.tidy();
        report.rules = set.len();
        (set, report)
    }

    fn s_poly(&self, r1: usize, r2: usize, k: usize) -> Vec<(Word, LaurentPoly<C>)> {
        let (a, b) = (&self.rules[r1], &self.rules[r2]);
        let tail = &b.lhs[k..];
        let head = &a.lhs[..a.lhs.len() - k];
        let mut out = Vec::new();
        for (w, c) in &a.rhs {
            let mut x = w.clone();
            x.extend_from_slice(tail);
            out.push((x, c.clone()));
        }
        for (w, c) in &b.rhs {
            let mut x = Word::from_slice(head);
            x.extend_from_slice(w);
            out.push((x, -c));
        }
        out
    }

    /// Reduces every right-hand side and drops dead rules.
    fn tidy(&mut self) {
        let live: Vec<Rule<C>> = self.rules().cloned().collect();
        let mut fresh = RuleSet::new(self.vars.clone(), self.top);
        for r in &live {
            fresh.push(r.clone());
        }
        let mut budget = Budget::new(u64::MAX);
        let mut out = RuleSet::new(self.vars.clone(), self.top);
        for r in live {
            let rhs = fresh.reduce_terms(r.rhs.clone(), &mut budget).expect("unbounded budget");
            out.push(Rule { lhs: r.lhs, rhs: rhs.into_iter().collect() });
        }
        *self = out;
    }
}

fn contains(hay: &[Letter], needle: &[Letter]) -> bool {
    hay.windows(needle.len()).any(|w| w == needle)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Task {
    Seed(usize),
    Pair(usize, usize, usize),
}

#[derive(Debug, Clone, Default)]
pub struct CompletionReport {
    pub rules: usize,
    pub pairs: usize,
    pub truncated: bool,
    /// Relations whose leading coefficient is not a unit, after full reduction.
    pub unresolved: Vec<String>,
}

/// All irreducible words over `alphabet`, or `None` if there are more than `limit`.
pub fn normal_words<C: Coeff>(rules: &RuleSet<C>, alphabet: &[Letter], limit: usize) -> Option<Vec<Word>> {
    let mut out = vec![Word::new()];
    let mut frontier = vec![Word::new()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in alphabet {
                let mut x = w.clone();
                x.push(l);
                if !rules.is_reducible(&x) {
                    next.push(x);
                }
            }
        }
        out.extend(next.iter().cloned());
        if out.len() > limit {
            return None;
        }
        frontier = next;
    }
    Some(out)
}
