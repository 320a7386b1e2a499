mod common;

use common::*;
use proptest::prelude::*;
use tielink::diagram::{TangleLetter, TiedDiagram};
use tielink::skein::{eval_classical_kauffman, eval_l, eval_l_hat, SkeinContext};
use tielink::tbmw::{
    invariant_via_trace, kauffman_via_trace, AlgebraElement, DenomPoly, Family, Kind, Letter, TraceEngine, Word,
};
use tielink::{Poly, VarSet};

use std::sync::OnceLock;

fn tied() -> &'static TraceEngine {
    static E: OnceLock<TraceEngine> = OnceLock::new();
    E.get_or_init(TraceEngine::tied)
}

fn classical() -> &'static TraceEngine {
    static E: OnceLock<TraceEngine> = OnceLock::new();
    E.get_or_init(TraceEngine::classical)
}

/// A word in `gᵢ^±1, hᵢ, eᵢ, fᵢ` as text, e.g. `g1 G2 h1`.
fn word_text(letters: &[(u8, usize)], family: Family) -> String {
    let kinds: &[char] = if family == Family::Tied { &['g', 'G', 'h', 'e', 'f'] } else { &['g', 'G', 'h'] };
    let parts: Vec<String> = letters.iter().map(|&(k, i)| format!("{}{i}", kinds[k as usize % kinds.len()])).collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn element(text: &str, family: Family, n: usize) -> AlgebraElement {
    AlgebraElement::parse(text, family, Some(n)).unwrap()
}

fn to_lm(p: &Poly) -> Poly {
    let bmw = VarSet::bmw();
    p.substitute_all(&[("a", &Poly::var(&bmw, "l", 1)), ("z", &Poly::var(&bmw, "m", 1))], &bmw).unwrap()
}

fn letters(max_len: usize, n: usize) -> impl Strategy<Value = Vec<(u8, usize)>> {
    prop::collection::vec((0u8..5, 1..n), 0..=max_len)
}

#[test]
fn worked_examples() {
    let azx = |s: &str| Poly::parse(s, &VarSet::azx()).unwrap();
    let e = tied();
    assert_eq!(e.trace(&element("1", Family::Tied, 2)).unwrap(), azx("1"));
    assert_eq!(invariant_via_trace(e, &braid("", 1)).unwrap(), azx("1"));
    assert_eq!(invariant_via_trace(e, &braid("s1", 2)).unwrap(), azx("1"));
    let ctx: SkeinContext = SkeinContext::new();
    let trefoil = braid("e1 s1 s1 s1", 2);
    let via_trace = invariant_via_trace(e, &trefoil).unwrap();
    assert_eq!(via_trace, eval_l_hat(&trefoil.closure(None).unwrap(), &ctx).unwrap());
    let k = kauffman_via_trace(classical(), &braid("s1 s1 s1", 2)).unwrap();
    assert_eq!(k, to_lm(&via_trace));
    assert_eq!(kauffman_via_trace(classical(), &braid("", 1)).unwrap(), Poly::one(&VarSet::bmw()));
    assert_eq!(kauffman_via_trace(classical(), &braid("s1", 2)).unwrap(), Poly::one(&VarSet::bmw()));
    assert!(kauffman_via_trace(classical(), &trefoil).is_err());
}

#[test]
fn reduced_words_have_one_top_letter() {
    let e = tied();
    let u = element("g1 g2 G1 h2 e1 g2 f1 g1 h2 G2", Family::Tied, 3);
    let r = e.reduce(&u).unwrap();
    for (w, _) in r.terms() {
        assert!(w.iter().filter(|l| l.index == 2).count() <= 1);
    }
    assert_eq!(e.trace(&r).unwrap(), e.trace(&u).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn trace_is_central(u in letters(5, 3), v in letters(5, 3)) {
        let (u, v) = (element(&word_text(&u, Family::Tied), Family::Tied, 3), element(&word_text(&v, Family::Tied), Family::Tied, 3));
        let e = tied();
        prop_assert_eq!(e.trace(&u.try_mul(&v).unwrap()).unwrap(), e.trace(&v.try_mul(&u).unwrap()).unwrap());
    }

    #[test]
    fn classical_trace_is_central(u in letters(5, 3), v in letters(5, 3)) {
        let f = Family::Classical;
        let (u, v) = (element(&word_text(&u, f), f, 3), element(&word_text(&v, f), f, 3));
        let e = classical();
        let uv = DenomPoly::from_lmd(&e.trace(&u.try_mul(&v).unwrap()).unwrap()).unwrap();
        let vu = DenomPoly::from_lmd(&e.trace(&v.try_mul(&u).unwrap()).unwrap()).unwrap();
        prop_assert!(uv.same_value(&vu));
    }

    #[test]
    fn trace_survives_rewriting(u in letters(8, 4), v in letters(4, 4)) {
        let e = tied();
        let sum = element(&word_text(&u, Family::Tied), Family::Tied, 4)
            .try_add(&element(&format!("(a - z^-1) {}", word_text(&v, Family::Tied)), Family::Tied, 4))
            .unwrap();
        let t = e.trace(&sum).unwrap();
        prop_assert_eq!(&e.trace(&e.reduce(&sum).unwrap()).unwrap(), &t);
        prop_assert_eq!(&e.trace(&e.normal_form(&sum).unwrap()).unwrap(), &t);
    }

    #[test]
    fn trace_matches_tangle_closures(n in 2usize..5, raw in prop::collection::vec((0u8..5, 1usize..4), 0..8)) {
        let mut word = Word::new();
        let mut tangle = Vec::new();
        for (k, i) in raw {
            let i = 1 + (i - 1) % (n - 1);
            let (kind, t) = match k {
                0 => (Kind::G, TangleLetter::Cross { index: i, positive: true }),
                1 => (Kind::H, TangleLetter::CapCup(i)),
                2 => (Kind::E, TangleLetter::Tie(i)),
                _ => (Kind::F, TangleLetter::TiedCapCup(i)),
            };
            word.push(Letter::new(kind, i as u8));
            tangle.push(t);
        }
        let u = AlgebraElement::from_word(Family::Tied, n, word, Poly::one(&VarSet::azx()));
        let closure = TiedDiagram::tangle_closure(n, &tangle, &[]);
        let skein = &eval_l(&closure, &SkeinContext::new()).unwrap() * &Poly::var(&VarSet::azx(), "x", n as i32 - 1);
        prop_assert_eq!(tied().trace(&u).unwrap(), skein);
    }

    #[test]
    fn classical_trace_route(w in (2usize..5).prop_flat_map(|n| (Just(n), prop::collection::vec((any::<bool>(), 1..n), 0..7)))) {
        let (n, letters) = w;
        let b = tielink::braid::TiedBraidWord::new(n, letters.into_iter().map(|(p, i)| sigma(i, p)).collect()).unwrap();
        let ctx: SkeinContext = SkeinContext::new();
        let skein = eval_classical_kauffman(&b.closure(None).unwrap(), true, &ctx).unwrap();
        prop_assert_eq!(kauffman_via_trace(classical(), &b).unwrap(), to_lm(&skein));
    }

    #[test]
    fn element_text_round_trips(u in letters(6, 4), v in letters(3, 4)) {
        let e = element(&format!("{} - (a^2 z^-1 + 3 x) {}", word_text(&u, Family::Tied), word_text(&v, Family::Tied)), Family::Tied, 4);
        prop_assert_eq!(element(&e.to_string(), Family::Tied, 4), e);
    }
}
