mod common;

use common::*;
use tielink::skein::{eval_bracket, eval_j, eval_l, SkeinContext};
use tielink::{Poly, VarSet};

fn bracket_poly(s: &str) -> Poly {
    Poly::parse(s, &VarSet::bracket()).unwrap()
}

#[test]
fn oracles_on_small_diagrams() {
    let v = VarSet::azx();
    assert_eq!(kauffman_oracle(&closure("s1", 2)), Poly::var(&v, "a", 1));
    assert_eq!(kauffman_oracle(&closure("-s1", 2)), Poly::var(&v, "a", -1));
    assert_eq!(bracket_oracle(&closure("s1", 2)), bracket_poly("-A^3"));
    assert_eq!(bracket_oracle(&closure("-s1", 2)), bracket_poly("-A^-3"));
    assert_eq!(bracket_oracle(&closure("s1 -s1", 2).all_tied()), bracket_poly("-A^2-A^-2"));
}

#[test]
fn fixtures_are_knots() {
    for &(name, w, n) in KNOTS {
        assert_eq!(closure(w, n).component_count(), 1, "{name}");
    }
}

#[test]
fn trefoil_jones_from_state_sum() {
    // (−A)^{−3w}⟨D⟩ for the positive trefoil: −A^{−16} + A^{−12} + A^{−4}, i.e. −t⁴ + t³ + t
    let d = closure("s1 s1 s1", 2);
    let j = &bracket_poly("-A^-9") * &bracket_oracle(&d);
    assert_eq!(j, bracket_poly("-A^-16+A^-12+A^-4"));
}

#[test]
fn skein_matches_classical_kauffman_oracle() {
    let ctx = SkeinContext::new();
    for &(name, w, n) in KNOTS.iter().filter(|k| k.1.split_whitespace().count() <= 6) {
        let d = closure(w, n).all_tied();
        assert_eq!(eval_l(&d, &ctx).unwrap(), kauffman_oracle(&d), "{name}");
    }
    for (w, n) in [("s1 s1", 2), ("s1 s1 s1 s1", 2), ("s1 s2 s1 s2", 3), ("s1 -s2 s1 s1", 3)] {
        let d = closure(w, n).all_tied();
        assert_eq!(eval_l(&d, &ctx).unwrap(), kauffman_oracle(&d), "{w}");
    }
}

#[test]
fn bracket_matches_state_sum() {
    let ctx = SkeinContext::new();
    for &(name, w, n) in KNOTS {
        let d = closure(w, n);
        assert_eq!(eval_bracket(&d, &ctx).unwrap(), bracket_oracle(&d), "{name}");
    }
    for (w, n) in [("s1 s1", 2), ("e1 s1 -s2 s1 s2", 3), ("s1 s2 s2 s1", 3)] {
        let d = closure(w, n).all_tied();
        assert_eq!(eval_bracket(&d, &ctx).unwrap(), bracket_oracle(&d), "{w}");
    }
    let d = closure("s1 s1 s1", 2);
    assert_eq!(eval_j(&d, &ctx).unwrap(), bracket_poly("-A^-16+A^-12+A^-4"));
}
