//! Invariant evaluators driven by the skein recursion.
//!
//! `𝓛` is computed by resolving deciding crossings one at a time:
//! `𝓛(D) = −𝓛(D switched) + z(𝓛(D_e) + 𝓛(D_f))`, down to stacked unlinks
//! valued `a^w̄ yᵗ / x^{c−t−1}`. Curls are stripped first for their `a^{±1}`.
//! Everything else is a normalization or substitution of `𝓛`.

use std::cell::RefCell;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::coeff::Coeff;
use crate::diagram::{DiagramError, Smoothing, TiedDiagram};
use crate::poly::{LaurentPoly, PolyError, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SkeinError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("internal check failed: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SkeinStats {
    pub nodes: u64,
    pub cache_hits: u64,
    pub entries: usize,
}

/// Storage for memoized `𝓛` values of curl-free diagrams, keyed by [`TiedDiagram::canonical_key`].
pub trait SkeinMemo<C: Coeff> {
    fn lookup(&self, key: &[u8]) -> Option<LaurentPoly<C>>;
    /// Inserts unless present; the first value written wins.
    fn store(&self, key: Vec<u8>, value: &LaurentPoly<C>);
    fn count_node(&self);
    fn stats(&self) -> SkeinStats;
}

/// Single-owner memo table.
pub struct SkeinContext<C: Coeff = BigInt> {
    memo: RefCell<FxHashMap<Vec<u8>, LaurentPoly<C>>>,
    stats: RefCell<SkeinStats>,
}

impl<C: Coeff> Default for SkeinContext<C> {
    fn default() -> Self {
        SkeinContext { memo: RefCell::default(), stats: RefCell::default() }
    }
}

impl<C: Coeff> SkeinContext<C> {
    pub fn new() -> Self {
        Self::default()
    }
}

impl<C: Coeff> SkeinMemo<C> for SkeinContext<C> {
    fn lookup(&self, key: &[u8]) -> Option<LaurentPoly<C>> {
        let hit = self.memo.borrow().get(key).cloned();
        if hit.is_some() {
            self.stats.borrow_mut().cache_hits += 1;
        }
        hit
    }

    fn store(&self, key: Vec<u8>, value: &LaurentPoly<C>) {
        self.memo.borrow_mut().entry(key).or_insert_with(|| value.clone());
    }

    fn count_node(&self) {
        self.stats.borrow_mut().nodes += 1;
    }

    fn stats(&self) -> SkeinStats {
        SkeinStats { entries: self.memo.borrow().len(), ..*self.stats.borrow() }
    }
}

/// Memo table shareable across threads.
pub struct SharedSkeinContext<C: Coeff = BigInt> {
    memo: RwLock<FxHashMap<Vec<u8>, LaurentPoly<C>>>,
    nodes: AtomicU64,
    hits: AtomicU64,
}

impl<C: Coeff> Default for SharedSkeinContext<C> {
    fn default() -> Self {
        SharedSkeinContext { memo: RwLock::default(), nodes: AtomicU64::new(0), hits: AtomicU64::new(0) }
    }
}

impl<C: Coeff> SharedSkeinContext<C> {
    pub fn new() -> Self {
        Self::default()
    }
}

impl<C: Coeff> SkeinMemo<C> for SharedSkeinContext<C> {
    fn lookup(&self, key: &[u8]) -> Option<LaurentPoly<C>> {
        let hit = self.memo.read().expect("memo lock").get(key).cloned();
        if hit.is_some() {
            self.hits.fetch_add(1, Ordering::Relaxed);
        }
        hit
    }

    fn store(&self, key: Vec<u8>, value: &LaurentPoly<C>) {
        self.memo.write().expect("memo lock").entry(key).or_insert_with(|| value.clone());
    }

    fn count_node(&self) {
        self.nodes.fetch_add(1, Ordering::Relaxed);
    }

    fn stats(&self) -> SkeinStats {
        SkeinStats {
            nodes: self.nodes.load(Ordering::Relaxed),
            cache_hits: self.hits.load(Ordering::Relaxed),
            entries: self.memo.read().expect("memo lock").len(),
        }
    }
}

/// `y = (a + a⁻¹) z⁻¹ − 1`, the value of two tied circles.
pub fn y<C: Coeff>() -> LaurentPoly<C> {
    let v = VarSet::azx();
    let a = LaurentPoly::var(&v, "a", 1);
    let a_inv = LaurentPoly::var(&v, "a", -1);
    let z_inv = LaurentPoly::var(&v, "z", -1);
    &(&(&a + &a_inv) * &z_inv) - &LaurentPoly::one(&v)
}

fn a_pow<C: Coeff>(k: i64) -> LaurentPoly<C> {
    LaurentPoly::var(&VarSet::azx(), "a", k as i32)
}

/// `a^w̄ yᵗ / x^{c−t−1}`.
pub fn unlink_value<C: Coeff>(c: usize, t: usize, wbar: i64) -> LaurentPoly<C> {
    let v = VarSet::azx();
    let yt = y::<C>().pow(t as i32).expect("nonnegative power");
    let x = LaurentPoly::var(&v, "x", -((c - t - 1) as i32));
    &(&a_pow::<C>(wbar) * &yt) * &x
}

fn eval_rec<C: Coeff, M: SkeinMemo<C>>(d: &TiedDiagram, ctx: &M) -> Result<LaurentPoly<C>, SkeinError> {
    let (d, curls) = d.remove_kinks();
    let key = d.canonical_key();
    let value = match ctx.lookup(&key) {
        Some(v) => v,
        None => {
            ctx.count_node();
            let (sites, wbar) = d.ascending_data();
            let v = match sites.first() {
                None => {
                    let p = d.partition();
                    unlink_value(p.count(), p.essential_ties(), wbar)
                }
                Some(&s) => {
                    let switched = eval_rec(&d.switch(s)?, ctx)?;
                    let e = eval_rec(&d.smooth(s, Smoothing::E)?, ctx)?;
                    let f = eval_rec(&d.smooth(s, Smoothing::F)?, ctx)?;
                    let z = LaurentPoly::var(&VarSet::azx(), "z", 1);
                    &(&z * &(&e + &f)) - &switched
                }
            };
            ctx.store(key, &v);
            v
        }
    };
    Ok(&a_pow::<C>(curls) * &value)
}

/// The tied-link polynomial `𝓛(d)` in `ℤ[a^±, z^±, x^±]`, a regular-isotopy invariant.
pub fn eval_l<C: Coeff, M: SkeinMemo<C>>(d: &TiedDiagram, ctx: &M) -> Result<LaurentPoly<C>, SkeinError> {
    if d.edge_count() == 0 {
        return Err(DiagramError::Empty.into());
    }
    eval_rec(d, ctx)
}

/// `𝓛̂(d) = a^{−w(d)} 𝓛(d)`, an ambient isotopy invariant of oriented tied links.
pub fn eval_l_hat<C: Coeff, M: SkeinMemo<C>>(d: &TiedDiagram, ctx: &M) -> Result<LaurentPoly<C>, SkeinError> {
    let w = d.writhe()?;
    Ok(&a_pow::<C>(-w) * &eval_l(d, ctx)?)
}

fn bracket_mid() -> VarSet {
    static V: OnceLock<VarSet> = OnceLock::new();
    V.get_or_init(|| VarSet::new(&["A", "z", "c"])).clone()
}

/// Specializes an `𝓛` value: `a = −A³`, `x = c⁻¹`, `z = A + A⁻¹`.
pub fn bracket_from_l<C: Coeff>(l: &LaurentPoly<C>) -> Result<LaurentPoly<C>, SkeinError> {
    let mid = bracket_mid();
    let out = VarSet::bracket();
    let a = -LaurentPoly::var(&mid, "A", 3);
    let x = LaurentPoly::var(&mid, "c", -1);
    let step = l.substitute_all(&[("a", &a), ("x", &x)], &mid)?;
    let z = &LaurentPoly::var(&out, "A", 1) + &LaurentPoly::var(&out, "A", -1);
    Ok(step.clear_and_divide("z", &z, &out)?)
}

/// The tied bracket `⟨⟨d⟩⟩` in `ℤ[A^±, c]`.
pub fn eval_bracket<C: Coeff, M: SkeinMemo<C>>(d: &TiedDiagram, ctx: &M) -> Result<LaurentPoly<C>, SkeinError> {
    bracket_from_l(&eval_l(d, ctx)?)
}

/// `𝓙(d) = (−A)^{−3w} ⟨⟨d⟩⟩`.
pub fn eval_j<C: Coeff, M: SkeinMemo<C>>(d: &TiedDiagram, ctx: &M) -> Result<LaurentPoly<C>, SkeinError> {
    let w = d.writhe()?;
    let bracket = eval_bracket(d, ctx)?;
    let mut factor = LaurentPoly::var(&VarSet::bracket(), "A", (-3 * w) as i32);
    if w % 2 != 0 {
        factor = -factor;
    }
    Ok(&factor * &bracket)
}

/// Rewrites a value in `A` in the Jones variable `q = t^{1/4}`, where `A = q⁻¹`.
pub fn to_jones_q<C: Coeff>(p: &LaurentPoly<C>) -> Result<LaurentPoly<C>, SkeinError> {
    let out = VarSet::jones();
    let q_inv = LaurentPoly::var(&out, "q", -1);
    Ok(p.substitute("A", &q_inv, &out)?)
}

/// `𝓙(d)` in `q = t^{1/4}`: exponents of `q` are quarter-exponents of `t`.
pub fn eval_jones_q<C: Coeff, M: SkeinMemo<C>>(d: &TiedDiagram, ctx: &M) -> Result<LaurentPoly<C>, SkeinError> {
    to_jones_q(&eval_j(d, ctx)?)
}

/// The classical Kauffman polynomial of the underlying link: `𝓛` with every component tied,
/// normalized by the writhe when `oriented`.
pub fn eval_classical_kauffman<C: Coeff, M: SkeinMemo<C>>(
    d: &TiedDiagram,
    oriented: bool,
    ctx: &M,
) -> Result<LaurentPoly<C>, SkeinError> {
    let tied = d.all_tied();
    let value = if oriented { eval_l_hat(&tied, ctx)? } else { eval_l(&tied, ctx)? };
    if value.contains_var("x") {
        return Err(SkeinError::Internal(format!("x survives in an all-tied value: {value}")));
    }
    Ok(value)
}
