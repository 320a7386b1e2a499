//! Independent oracles working directly on PD crossings, plus shared fixtures.
#![allow(dead_code)]

use std::collections::HashMap;

use tielink::braid::TiedBraidWord;
use tielink::diagram::TiedDiagram;
use tielink::{Poly, VarSet};

pub fn braid(s: &str, n: usize) -> TiedBraidWord {
    TiedBraidWord::parse(s, Some(n)).unwrap()
}

pub fn closure(s: &str, n: usize) -> TiedDiagram {
    braid(s, n).closure(None).unwrap()
}

/// Knot diagrams up to eight crossings, as braid words.
pub const KNOTS: &[(&str, &str, usize)] = &[
    ("3_1", "s1 s1 s1", 2),
    ("3_1*", "-s1 -s1 -s1", 2),
    ("4_1", "s1 -s2 s1 -s2", 3),
    ("5_1", "s1 s1 s1 s1 s1", 2),
    ("5_2", "s1 s1 s1 s2 -s1 s2", 3),
    ("6_2", "s1 s1 s1 -s2 s1 -s2", 3),
    ("6_3", "s1 s1 -s2 s1 -s2 -s2", 3),
    ("7_1", "s1 s1 s1 s1 s1 s1 s1", 2),
    ("8_19", "s1 s1 s1 s2 s1 s1 s1 s2", 3),
    ("6_1", "s1 s1 s2 -s1 -s3 s2 -s3", 4),
];

fn crossings(d: &TiedDiagram) -> (Vec<[u64; 4]>, usize) {
    let pd = d.to_pd();
    (pd.crossings, pd.split_circles)
}

/// Removes crossing `k` and joins its slots pairwise.
fn smooth(x: &[[u64; 4]], circles: usize, k: usize, pairs: [(usize, usize); 2]) -> (Vec<[u64; 4]>, usize) {
    let mut rest: Vec<[u64; 4]> = x.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, c)| *c).collect();
    let mut ends: Vec<(u64, u64)> = pairs.iter().map(|&(p, q)| (x[k][p], x[k][q])).collect();
    let mut circles = circles;
    for i in 0..2 {
        let (p, q) = ends[i];
        if p == q {
            circles += 1;
            continue;
        }
        for c in rest.iter_mut() {
            for e in c.iter_mut() {
                if *e == q {
                    *e = p;
                }
            }
        }
        for e in ends.iter_mut().skip(i + 1) {
            if e.0 == q {
                e.0 = p;
            }
            if e.1 == q {
                e.1 = p;
            }
        }
    }
    (rest, circles)
}

/// Classical unoriented Kauffman polynomial in `a, z` by the skein relation, reducing
/// towards the diagram where every crossing is first met from below.
pub fn kauffman_oracle(d: &TiedDiagram) -> Poly {
    let (x, circles) = crossings(d);
    kauffman_rec(&x, circles)
}

fn kauffman_rec(x: &[[u64; 4]], circles: usize) -> Poly {
    let v = VarSet::azx();
    let delta = &(&(&Poly::var(&v, "a", 1) + &Poly::var(&v, "a", -1)) * &Poly::var(&v, "z", -1)) - &Poly::one(&v);
    let mut ends: HashMap<u64, Vec<(usize, usize)>> = HashMap::new();
    for (c, cr) in x.iter().enumerate() {
        for (s, &e) in cr.iter().enumerate() {
            ends.entry(e).or_default().push((c, s));
        }
    }
    let mut edges: Vec<u64> = ends.keys().copied().collect();
    edges.sort_unstable_by(|a, b| b.cmp(a));
    let mut seen = std::collections::HashSet::new();
    let mut first_under: Vec<Option<bool>> = vec![None; x.len()];
    let mut under_in = vec![None; x.len()];
    let mut over_in = vec![None; x.len()];
    let mut owner = vec![[usize::MAX; 2]; x.len()];
    let mut comps = 0;
    for &base in &edges {
        if seen.contains(&base) {
            continue;
        }
        let (mut c, mut s) = ends[&base][0];
        seen.insert(base);
        loop {
            if first_under[c].is_none() {
                first_under[c] = Some(s % 2 == 0);
            }
            if s % 2 == 0 {
                under_in[c] = Some(s);
                owner[c][0] = comps;
            } else {
                over_in[c] = Some(s);
                owner[c][1] = comps;
            }
            let out = (s + 2) % 4;
            let e = x[c][out];
            if e == base {
                break;
            }
            seen.insert(e);
            (c, s) = *ends[&e].iter().find(|&&p| p != (c, out)).unwrap_or(&(c, out));
        }
        comps += 1;
    }
    match first_under.iter().position(|f| *f == Some(false)) {
        None => {
            let mut wbar = 0;
            for c in 0..x.len() {
                if owner[c][0] == owner[c][1] {
                    let (u, o) = (under_in[c].unwrap(), over_in[c].unwrap());
                    wbar += if (u + 3) % 4 == o { 1 } else { -1 };
                }
            }
            &Poly::var(&v, "a", wbar) * &delta.pow((comps + circles) as i32 - 1).unwrap()
        }
        Some(k) => {
            let mut switched = x.to_vec();
            switched[k].rotate_left(1);
            let (s0, c0) = smooth(x, circles, k, [(0, 1), (2, 3)]);
            let (s1, c1) = smooth(x, circles, k, [(0, 3), (1, 2)]);
            let z = Poly::var(&v, "z", 1);
            &(&z * &(&kauffman_rec(&s0, c0) + &kauffman_rec(&s1, c1))) - &kauffman_rec(&switched, circles)
        }
    }
}

/// Kauffman bracket state sum in `A` (with `⟨◯⟩ = 1`), in the bracket variables.
pub fn bracket_oracle(d: &TiedDiagram) -> Poly {
    let v = VarSet::bracket();
    let loop_value = -(&Poly::var(&v, "A", 2) + &Poly::var(&v, "A", -2));
    let (x, circles) = crossings(d);
    let mut total = Poly::zero(&v);
    for state in 0u32..(1 << x.len()) {
        let mut parent: HashMap<u64, u64> = HashMap::new();
        fn find(p: &mut HashMap<u64, u64>, e: u64) -> u64 {
            let up = *p.entry(e).or_insert(e);
            if up == e {
                e
            } else {
                let r = find(p, up);
                p.insert(e, r);
                r
            }
        }
        let mut a_count = 0i32;
        for (i, c) in x.iter().enumerate() {
            let pairs = if state >> i & 1 == 0 {
                a_count += 1;
                [(0, 1), (2, 3)]
            } else {
                a_count -= 1;
                [(0, 3), (1, 2)]
            };
            for (p, q) in pairs {
                let (rp, rq) = (find(&mut parent, c[p]), find(&mut parent, c[q]));
                parent.insert(rp, rq);
            }
        }
        let keys: Vec<u64> = parent.keys().copied().collect();
        let mut roots: Vec<u64> = keys.into_iter().map(|e| find(&mut parent, e)).collect();
        roots.sort_unstable();
        roots.dedup();
        let loops = roots.len() + circles;
        total = &total + &(&Poly::var(&v, "A", a_count) * &loop_value.pow(loops as i32 - 1).unwrap());
    }
    total
}

use rand::Rng;
use tielink::braid::BraidLetter;

pub fn sigma(index: usize, positive: bool) -> BraidLetter {
    BraidLetter::Sigma { index, positive }
}

pub fn random_letter<R: Rng>(rng: &mut R, n: usize, ties: bool) -> BraidLetter {
    let i = rng.gen_range(1..n);
    match rng.gen_range(0..if ties { 3 } else { 2 }) {
        0 => sigma(i, true),
        1 => sigma(i, false),
        _ => BraidLetter::Eta(i),
    }
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize, max_len: usize, ties: bool) -> TiedBraidWord {
    let len = rng.gen_range(0..=max_len);
    TiedBraidWord::new(n, (0..len).map(|_| random_letter(rng, n, ties)).collect()).unwrap()
}

/// Every word of length at most `max_len` over the generators of `TBₙ` (or `Bₙ`).
pub fn all_words(n: usize, max_len: usize, ties: bool) -> Vec<TiedBraidWord> {
    let mut alphabet = Vec::new();
    for i in 1..n {
        alphabet.extend([sigma(i, true), sigma(i, false)]);
        if ties {
            alphabet.push(BraidLetter::Eta(i));
        }
    }
    let mut out = vec![Vec::new()];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| alphabet.iter().map(move |&l| [w.as_slice(), &[l]].concat()))
            .collect();
        out.extend(frontier.iter().cloned());
    }
    out.into_iter().map(|w| TiedBraidWord::new(n, w).unwrap()).collect()
}

/// Switches every crossing of the closure.
pub fn mirror(w: &TiedBraidWord) -> TiedBraidWord {
    TiedBraidWord::new(w.strands(), w.letters().iter().map(|l| l.inverse()).collect()).unwrap()
}

fn splice(w: &TiedBraidWord, at: usize, remove: usize, insert: &[BraidLetter]) -> TiedBraidWord {
    let mut v = w.letters().to_vec();
    v.splice(at..at + remove, insert.iter().copied());
    TiedBraidWord::new(w.strands(), v).unwrap()
}

/// A pair of words whose closures are tie-isotopic, produced by one random move on `w`.
pub fn markov_move<R: Rng>(rng: &mut R, w: &TiedBraidWord) -> (&'static str, TiedBraidWord, TiedBraidWord) {
    let n = w.strands();
    let at = rng.gen_range(0..=w.len());
    let i = rng.gen_range(1..n);
    match rng.gen_range(0..7) {
        0 => {
            let v = TiedBraidWord::new(n, vec![random_letter(rng, n, false)]).unwrap();
            ("conjugation", w.clone(), w.conjugate(&v))
        }
        1 => ("stabilization", w.clone(), w.stabilize(rng.gen())),
        2 => {
            let p = rng.gen();
            ("inverse pair", w.clone(), splice(w, at, 0, &[sigma(i, p), sigma(i, !p)]))
        }
        3 if n > 2 => {
            let j = if i + 1 < n { i + 1 } else { i - 1 };
            let p = rng.gen();
            let base = splice(w, at, 0, &[sigma(i, p), sigma(j, p), sigma(i, p)]);
            ("braid relation", base.clone(), splice(&base, at, 3, &[sigma(j, p), sigma(i, p), sigma(j, p)]))
        }
        4 => {
            let base = splice(w, at, 0, &[BraidLetter::Eta(i)]);
            ("tie idempotence", base, splice(w, at, 0, &[BraidLetter::Eta(i), BraidLetter::Eta(i)]))
        }
        5 => {
            let j = rng.gen_range(1..n);
            let l = if rng.gen() { BraidLetter::Eta(j) } else { sigma(j, rng.gen()) };
            if i.abs_diff(j) == 1 && matches!(l, BraidLetter::Sigma { .. }) {
                // ηᵢ σⱼ σᵢ = σⱼ σᵢ ηⱼ
                let p = rng.gen();
                let base = splice(w, at, 0, &[BraidLetter::Eta(i), sigma(j, p), sigma(i, p)]);
                ("tie transport", base, splice(w, at, 0, &[sigma(j, p), sigma(i, p), BraidLetter::Eta(j)]))
            } else {
                let base = splice(w, at, 0, &[BraidLetter::Eta(i), l]);
                ("tie commutation", base, splice(w, at, 0, &[l, BraidLetter::Eta(i)]))
            }
        }
        _ => {
            let v = random_word(rng, n, 3, true);
            let v = TiedBraidWord::new(n, v.letters().iter().copied().filter(|l| matches!(l, BraidLetter::Sigma { .. })).collect()).unwrap();
            ("conjugation", w.clone(), w.conjugate(&v))
        }
    }
}
