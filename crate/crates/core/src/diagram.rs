//! Tied link diagrams in planar-diagram form.
//!
//! A crossing is four edge ids in counterclockwise order starting at the
//! incoming under-strand, so slots 0 and 2 carry the under strand and slots 1
//! and 3 the over strand. For an unoriented diagram "incoming" is just a
//! reading convention: rotating a crossing by two slots gives the same crossing.
//! Each edge appears in exactly two slots, or in none: an edge without
//! endpoints is a crossingless circle. Ties are stored as a block label per
//! edge, constant along components.
//!
//! When a diagram is oriented, slot 0 really is the incoming under-strand and
//! each crossing records whether the over strand enters at slot 3 (a positive
//! crossing) or at slot 1.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::braid::TiePartition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("edge {edge} appears {count} times; every edge must appear exactly twice")]
    BadEdge { edge: u32, count: usize },
    #[error("crossing index {0} out of range")]
    BadSite(usize),
    #[error("diagram is empty")]
    Empty,
    #[error("partition covers {got} components, diagram has {expected}")]
    PartitionSize { expected: usize, got: usize },
    #[error("orientation is inconsistent along component {0}")]
    InconsistentOrientation(usize),
    #[error("orientation has {got} entries, diagram has {expected} components")]
    OrientationSize { expected: usize, got: usize },
    #[error("diagram is not oriented")]
    Unoriented,
    #[error("diagram is not ascending: {0} deciding crossings")]
    NotAscending(usize),
    #[error("bad PD input: {0}")]
    Json(String),
}

/// Addresses a crossing for surgery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossingSite {
    pub crossing: usize,
}

/// The two smoothings of a crossing. `E` is the one compatible with the
/// orientation when the diagram is oriented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Smoothing {
    E,
    F,
}

/// One letter of a tangle word on `n` strands, acting at positions `index`, `index+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TangleLetter {
    Cross { index: usize, positive: bool },
    /// A tie between the two strands.
    Tie(usize),
    /// A cap over a cup.
    CapCup(usize),
    /// A cap over a cup, tied together.
    TiedCapCup(usize),
}

/// A component: its edges in increasing order. `edges[0]` is the base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub edges: Vec<u32>,
    pub crossingless: bool,
}

#[derive(Clone, PartialEq, Eq)]
pub struct TiedDiagram {
    crossings: Vec<[u32; 4]>,
    edge_block: Vec<u32>,
    over_in3: Option<Vec<bool>>,
}

type Ends = SmallVec<[(u32, u8); 2]>;

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n as u32).collect())
    }
    fn push(&mut self) -> u32 {
        let id = self.0.len() as u32;
        self.0.push(id);
        id
    }
    fn find(&mut self, mut x: u32) -> u32 {
        while self.0[x as usize] != x {
            let p = self.0[x as usize];
            self.0[x as usize] = self.0[p as usize];
            x = p;
        }
        x
    }
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller id as root so roots are class minima
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi as usize] = lo;
        }
    }
}

impl TiedDiagram {
    /// Builds from raw parts. Block labels are merged along components and renumbered.
    fn from_raw(crossings: Vec<[u32; 4]>, edge_block: Vec<u32>, over_in3: Option<Vec<bool>>) -> Result<Self, DiagramError> {
        let mut counts = vec![0usize; edge_block.len()];
        for x in &crossings {
            for &e in x {
                match counts.get_mut(e as usize) {
                    Some(c) => *c += 1,
                    None => return Err(DiagramError::BadEdge { edge: e, count: 1 }),
                }
            }
        }
        if let Some((e, &c)) = counts.iter().enumerate().find(|(_, &c)| c != 0 && c != 2) {
            return Err(DiagramError::BadEdge { edge: e as u32, count: c });
        }
        let mut d = TiedDiagram { crossings, edge_block, over_in3 };
        d.normalize_blocks();
        Ok(d)
    }

    fn normalize_blocks(&mut self) {
        let nb = self.edge_block.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut uf = UnionFind::new(nb);
        for x in &self.crossings {
            uf.union(self.edge_block[x[0] as usize], self.edge_block[x[2] as usize]);
            uf.union(self.edge_block[x[1] as usize], self.edge_block[x[3] as usize]);
        }
        let mut relabel = BTreeMap::new();
        for b in &mut self.edge_block {
            let r = uf.find(*b);
            let next = relabel.len() as u32;
            *b = *relabel.entry(r).or_insert(next);
        }
    }

    /// A single crossingless circle.
    pub fn unknot() -> Self {
        Self::unlink(&TiePartition::discrete(1))
    }

    /// Crossingless circles tied according to `partition`.
    pub fn unlink(partition: &TiePartition) -> Self {
        let mut edge_block = vec![0; partition.count()];
        for (b, block) in partition.blocks().iter().enumerate() {
            for &c in block {
                edge_block[c] = b as u32;
            }
        }
        Self::from_raw(Vec::new(), edge_block, Some(Vec::new())).expect("crossingless")
    }

    /// Closure of a tangle word on `n` strands: strand positions at the bottom are joined
    /// to the top. `ties` ties together the strands at top positions `(p, q)` (0-based).
    ///
    /// Crossings are positive for `Cross { positive: true }` when strands run downward.
    /// The result is oriented iff the word has no cap-cups.
    pub fn tangle_closure(n: usize, letters: &[TangleLetter], ties: &[(usize, usize)]) -> Self {
        let mut uf = UnionFind::new(n);
        let mut cur: Vec<u32> = (0..n as u32).collect();
        let mut crossings = Vec::new();
        let mut flags = Vec::new();
        let mut tie_pairs: Vec<(u32, u32)> = ties.iter().map(|&(p, q)| (p as u32, q as u32)).collect();
        let mut oriented = true;
        for &letter in letters {
            match letter {
                TangleLetter::Cross { index, positive } => {
                    let (l, r) = (index - 1, index);
                    let (tl, tr) = (cur[l], cur[r]);
                    let (bl, br) = (uf.push(), uf.push());
                    if positive {
                        crossings.push([tl, bl, br, tr]);
                    } else {
                        crossings.push([tr, tl, bl, br]);
                    }
                    flags.push(positive);
                    cur[l] = bl;
                    cur[r] = br;
                }
                TangleLetter::Tie(index) => tie_pairs.push((cur[index - 1], cur[index])),
                TangleLetter::CapCup(index) | TangleLetter::TiedCapCup(index) => {
                    let (l, r) = (index - 1, index);
                    let cap = cur[l];
                    uf.union(cur[l], cur[r]);
                    let cup = uf.push();
                    if matches!(letter, TangleLetter::TiedCapCup(_)) {
                        tie_pairs.push((cap, cup));
                    }
                    cur[l] = cup;
                    cur[r] = cup;
                    oriented = false;
                }
            }
        }
        for p in 0..n {
            uf.union(cur[p], p as u32);
        }
        let total = uf.0.len();
        let mut new_id = vec![u32::MAX; total];
        let mut count = 0u32;
        for e in 0..total as u32 {
            let r = uf.find(e);
            if new_id[r as usize] == u32::MAX {
                new_id[r as usize] = count;
                count += 1;
            }
            new_id[e as usize] = new_id[r as usize];
        }
        let crossings: Vec<[u32; 4]> = crossings.iter().map(|x| x.map(|e| new_id[e as usize])).collect();
        let mut block_uf = UnionFind::new(count as usize);
        for (a, b) in tie_pairs {
            block_uf.union(new_id[a as usize], new_id[b as usize]);
        }
        let edge_block = (0..count).map(|e| block_uf.find(e)).collect();
        Self::from_raw(crossings, edge_block, oriented.then_some(flags)).expect("closure is well formed")
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_block.len()
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn is_oriented(&self) -> bool {
        self.over_in3.is_some()
    }

    pub fn without_orientation(&self) -> Self {
        TiedDiagram { over_in3: None, ..self.clone() }
    }

    fn ends(&self) -> Vec<Ends> {
        let mut ends = vec![Ends::new(); self.edge_block.len()];
        for (c, x) in self.crossings.iter().enumerate() {
            for (s, &e) in x.iter().enumerate() {
                ends[e as usize].push((c as u32, s as u8));
            }
        }
        ends
    }

    fn other_end(ends: &[Ends], e: u32, c: u32, s: u8) -> (u32, u8) {
        let v = &ends[e as usize];
        if v[0] == (c, s) {
            v[1]
        } else {
            v[0]
        }
    }

    /// Component id of every edge, numbered by smallest edge.
    fn edge_components(&self) -> (Vec<u32>, usize) {
        let mut uf = UnionFind::new(self.edge_block.len());
        for x in &self.crossings {
            uf.union(x[0], x[2]);
            uf.union(x[1], x[3]);
        }
        let mut comp = vec![u32::MAX; self.edge_block.len()];
        let mut next = 0;
        let mut root_id = BTreeMap::new();
        for e in 0..self.edge_block.len() as u32 {
            let r = uf.find(e);
            let id = *root_id.entry(r).or_insert_with(|| {
                next += 1;
                next - 1
            });
            comp[e as usize] = id;
        }
        (comp, next as usize)
    }

    /// Components ordered by smallest edge id.
    pub fn components(&self) -> Vec<Component> {
        let (comp, n) = self.edge_components();
        let ends = self.ends();
        let mut out = vec![Component { edges: Vec::new(), crossingless: true }; n];
        for (e, &c) in comp.iter().enumerate() {
            out[c as usize].edges.push(e as u32);
            if !ends[e].is_empty() {
                out[c as usize].crossingless = false;
            }
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.edge_components().1
    }

    /// The tie partition over components.
    pub fn partition(&self) -> TiePartition {
        let (comp, n) = self.edge_components();
        let mut by_block: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        let mut seen = vec![false; n];
        for (e, &c) in comp.iter().enumerate() {
            if !seen[c as usize] {
                seen[c as usize] = true;
                by_block.entry(self.edge_block[e]).or_default().push(c as usize);
            }
        }
        TiePartition::from_blocks(by_block.into_values().collect()).expect("blocks cover components")
    }

    /// Replaces the tie partition.
    pub fn with_partition(&self, partition: &TiePartition) -> Result<Self, DiagramError> {
        let (comp, n) = self.edge_components();
        if partition.count() != n {
            return Err(DiagramError::PartitionSize { expected: n, got: partition.count() });
        }
        let mut block_of = vec![0u32; n];
        for (b, block) in partition.blocks().iter().enumerate() {
            for &c in block {
                block_of[c] = b as u32;
            }
        }
        let edge_block = comp.iter().map(|&c| block_of[c as usize]).collect();
        Self::from_raw(self.crossings.clone(), edge_block, self.over_in3.clone())
    }

    /// The same diagram with every component in one block.
    pub fn all_tied(&self) -> Self {
        let edge_block = vec![0; self.edge_block.len()];
        TiedDiagram { edge_block, ..self.clone() }
    }

    /// Minimal number of ties realizing the partition.
    pub fn essential_tie_count(&self) -> usize {
        self.partition().essential_ties()
    }

    fn check_site(&self, s: CrossingSite) -> Result<usize, DiagramError> {
        if s.crossing < self.crossings.len() {
            Ok(s.crossing)
        } else {
            Err(DiagramError::BadSite(s.crossing))
        }
    }

    /// Sign of a crossing of an oriented diagram.
    pub fn crossing_sign(&self, s: CrossingSite) -> Result<i64, DiagramError> {
        let c = self.check_site(s)?;
        let o = self.over_in3.as_ref().ok_or(DiagramError::Unoriented)?;
        Ok(if o[c] { 1 } else { -1 })
    }

    pub fn writhe(&self) -> Result<i64, DiagramError> {
        let o = self.over_in3.as_ref().ok_or(DiagramError::Unoriented)?;
        Ok(o.iter().map(|&p| if p { 1 } else { -1 }).sum())
    }

    /// Sign of a crossing whose two strands lie on one component; `None` otherwise.
    /// It does not depend on the orientation.
    pub fn self_crossing_sign(&self, s: CrossingSite) -> Result<Option<i64>, DiagramError> {
        let c = self.check_site(s)? as u32;
        let ends = self.ends();
        // walk from slot 0 out of slot 2 until the crossing is re-entered
        let (mut cc, mut ss) = (c, 2u8);
        loop {
            let e = self.crossings[cc as usize][ss as usize];
            let (nc, ns) = Self::other_end(&ends, e, cc, ss);
            if nc == c {
                return Ok(match ns {
                    1 => Some(-1),
                    3 => Some(1),
                    _ => None,
                });
            }
            cc = nc;
            ss = (ns + 2) % 4;
        }
    }

    /// Exchanges over and under at `s`.
    pub fn switch(&self, s: CrossingSite) -> Result<Self, DiagramError> {
        let c = self.check_site(s)?;
        let mut d = self.clone();
        let x = self.crossings[c];
        match &mut d.over_in3 {
            Some(flags) if flags[c] => {
                d.crossings[c] = [x[3], x[0], x[1], x[2]];
                flags[c] = false;
            }
            Some(flags) => {
                d.crossings[c] = [x[1], x[2], x[3], x[0]];
                flags[c] = true;
            }
            None => d.crossings[c] = [x[1], x[2], x[3], x[0]],
        }
        Ok(d)
    }

    /// Switches every crossing.
    pub fn mirror(&self) -> Self {
        let mut d = self.clone();
        for c in 0..self.crossings.len() {
            d = d.switch(CrossingSite { crossing: c }).expect("valid site");
        }
        d
    }

    /// Slot pairs joined by a smoothing.
    fn smoothing_pairs(&self, c: usize, which: Smoothing) -> [(usize, usize); 2] {
        let a = [(0, 1), (2, 3)];
        let b = [(0, 3), (1, 2)];
        // the oriented smoothing joins the incoming under end to the outgoing over end
        let e_is_a = self.over_in3.as_ref().map_or(true, |o| o[c]);
        match (which, e_is_a) {
            (Smoothing::E, true) | (Smoothing::F, false) => a,
            _ => b,
        }
    }

    /// Removes crossing `c`, joining the given edge groups. Orientation is kept iff `keep_orientation`.
    fn splice(&self, c: usize, joins: &[&[u32]], tie: bool, keep_orientation: bool) -> Self {
        let ne = self.edge_block.len();
        let mut uf = UnionFind::new(ne);
        for group in joins {
            for w in group.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut new_id = vec![u32::MAX; ne];
        let mut count = 0u32;
        for e in 0..ne as u32 {
            let r = uf.find(e);
            if new_id[r as usize] == u32::MAX {
                new_id[r as usize] = count;
                count += 1;
            }
            new_id[e as usize] = new_id[r as usize];
        }
        let crossings: Vec<[u32; 4]> = self
            .crossings
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != c)
            .map(|(_, x)| x.map(|e| new_id[e as usize]))
            .collect();
        let nb = self.edge_block.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut block_uf = UnionFind::new(nb);
        if tie {
            let x = self.crossings[c];
            for s in 1..4 {
                block_uf.union(self.edge_block[x[0] as usize], self.edge_block[x[s] as usize]);
            }
        }
        let mut edge_block = vec![0u32; count as usize];
        for e in 0..ne {
            edge_block[new_id[e] as usize] = block_uf.find(self.edge_block[e]);
        }
        let over_in3 = if keep_orientation {
            self.over_in3.as_ref().map(|o| o.iter().enumerate().filter(|&(i, _)| i != c).map(|(_, &f)| f).collect())
        } else {
            None
        };
        Self::from_raw(crossings, edge_block, over_in3).expect("surgery preserves well-formedness")
    }

    /// Removes the crossing at `s`, reconnects its ends per `which`, and ties the new arcs together.
    pub fn smooth(&self, s: CrossingSite, which: Smoothing) -> Result<Self, DiagramError> {
        let c = self.check_site(s)?;
        let x = self.crossings[c];
        let pairs = self.smoothing_pairs(c, which);
        let g1 = [x[pairs[0].0], x[pairs[0].1]];
        let g2 = [x[pairs[1].0], x[pairs[1].1]];
        Ok(self.splice(c, &[&g1, &g2], true, which == Smoothing::E))
    }

    /// Finds a crossing with one edge joining adjacent slots: `(crossing, first slot)`.
    fn find_kink(&self) -> Option<(usize, usize)> {
        self.crossings.iter().enumerate().find_map(|(c, x)| (0..4).find(|&k| x[k] == x[(k + 1) % 4]).map(|k| (c, k)))
    }

    /// Removes all curls. Returns the reduced diagram and the sum of the curl signs.
    pub fn remove_kinks(&self) -> (Self, i64) {
        let mut d = self.clone();
        let mut total = 0;
        while let Some((c, k)) = d.find_kink() {
            total += if k % 2 == 0 { 1 } else { -1 };
            let x = d.crossings[c];
            let through = [x[(k + 2) % 4], x[k], x[(k + 3) % 4]];
            d = d.splice(c, &[&through], false, true);
        }
        (d, total)
    }

    /// The end of base edge `b` to walk into first.
    fn start_end(&self, ends: &[Ends], b: u32) -> (u32, u8) {
        let v = &ends[b as usize];
        if let Some(o) = &self.over_in3 {
            let incoming = |&(c, s): &(u32, u8)| s == 0 || (s == 3 && o[c as usize]) || (s == 1 && !o[c as usize]);
            return *v.iter().find(|e| incoming(e)).unwrap_or(&v[0]);
        }
        let key = |&(c, s): &(u32, u8)| (self.crossings[c as usize][((s + 2) % 4) as usize], c, s);
        if key(&v[0]) <= key(&v[1]) {
            v[0]
        } else {
            v[1]
        }
    }

    /// Deciding crossings and the self-writhe of the associated ascending diagram.
    ///
    /// Components are visited in order of smallest edge, each from that edge, in the
    /// stored direction or a canonical one. A crossing first reached along its over
    /// strand is deciding: switching all of them leaves every crossing first met from
    /// below, which is an unlink stacked by component order.
    pub fn ascending_data(&self) -> (Vec<CrossingSite>, i64) {
        let ends = self.ends();
        let (comp, _) = self.edge_components();
        let nc = self.crossings.len();
        let mut seen = vec![false; nc];
        let mut deciding = Vec::new();
        // entry slots of the under and over passages, for self-crossings
        let mut under_in = vec![u8::MAX; nc];
        let mut over_in = vec![u8::MAX; nc];
        let mut visited_comp = vec![false; comp.len()];
        for b in 0..self.edge_block.len() as u32 {
            let k = comp[b as usize] as usize;
            if visited_comp[k] || ends[b as usize].is_empty() {
                visited_comp[k] = true;
                continue;
            }
            visited_comp[k] = true;
            let (mut c, mut s) = self.start_end(&ends, b);
            loop {
                let ci = c as usize;
                if s % 2 == 0 {
                    under_in[ci] = s;
                } else {
                    over_in[ci] = s;
                }
                if !seen[ci] {
                    seen[ci] = true;
                    if s % 2 == 1 {
                        deciding.push(CrossingSite { crossing: ci });
                    }
                }
                let out = (s + 2) % 4;
                let e = self.crossings[ci][out as usize];
                if e == b {
                    break;
                }
                (c, s) = Self::other_end(&ends, e, c, out);
            }
        }
        let mut wbar = 0;
        for c in 0..nc {
            let x = self.crossings[c];
            if comp[x[0] as usize] != comp[x[1] as usize] {
                continue;
            }
            let rel = (over_in[c] + 4 - under_in[c]) % 4;
            let sign = if rel == 3 { 1 } else { -1 };
            let deciding_here = deciding.iter().any(|d| d.crossing == c);
            wbar += if deciding_here { -sign } else { sign };
        }
        (deciding, wbar)
    }

    /// `(c, t, w̄)` for an ascending diagram.
    pub fn unlink_value_inputs(&self) -> Result<(usize, usize, i64), DiagramError> {
        let (sites, wbar) = self.ascending_data();
        if !sites.is_empty() {
            return Err(DiagramError::NotAscending(sites.len()));
        }
        let p = self.partition();
        Ok((p.count(), p.essential_ties(), wbar))
    }

    /// Reverses the direction of component `k`.
    pub fn reverse_component(&self, k: usize) -> Result<Self, DiagramError> {
        let (comp, n) = self.edge_components();
        if k >= n {
            return Err(DiagramError::OrientationSize { expected: n, got: k + 1 });
        }
        let flags = self.over_in3.as_ref().ok_or(DiagramError::Unoriented)?;
        let mut d = self.clone();
        let mut new_flags = flags.clone();
        for (c, x) in self.crossings.iter().enumerate() {
            let mut under = 0u8;
            let mut over = if flags[c] { 3u8 } else { 1 };
            if comp[x[0] as usize] as usize == k {
                under = 2;
            }
            if comp[x[1] as usize] as usize == k {
                over = (over + 2) % 4;
            }
            let r = under as usize;
            d.crossings[c] = [x[r], x[(r + 1) % 4], x[(r + 2) % 4], x[(r + 3) % 4]];
            new_flags[c] = (over + 4 - under) % 4 == 3;
        }
        d.over_in3 = Some(new_flags);
        Ok(d)
    }

    /// Renames edges by `perm` (old id → new id). Used to check label independence.
    pub fn relabel(&self, perm: &[u32]) -> Self {
        assert_eq!(perm.len(), self.edge_block.len());
        let crossings = self.crossings.iter().map(|x| x.map(|e| perm[e as usize])).collect();
        let mut edge_block = vec![0; perm.len()];
        for (e, &b) in self.edge_block.iter().enumerate() {
            edge_block[perm[e] as usize] = b;
        }
        Self::from_raw(crossings, edge_block, self.over_in3.clone()).expect("relabeling is a bijection")
    }

    /// Traversal code of the connected part containing `(c0, s0)`, starting there.
    fn encode_from(&self, ends: &[Ends], c0: u32, s0: u8) -> (Vec<u32>, Vec<u32>) {
        let mut num = BTreeMap::new();
        let mut off = Vec::new();
        let mut order = vec![c0];
        num.insert(c0, 0u32);
        off.push(s0);
        let mut code = Vec::new();
        let mut edges = Vec::new();
        let mut edge_seen = BTreeMap::new();
        let mut i = 0;
        while i < order.len() {
            let c = order[i];
            let r = off[i];
            code.push((r % 2) as u32);
            for j in 0..4u8 {
                let s = (r + j) % 4;
                let e = self.crossings[c as usize][s as usize];
                let (c2, s2) = Self::other_end(ends, e, c, s);
                let n2 = match num.get(&c2) {
                    Some(&n) => n,
                    None => {
                        let n = order.len() as u32;
                        num.insert(c2, n);
                        order.push(c2);
                        off.push(s2);
                        n
                    }
                };
                let local = (s2 + 4 - off[n2 as usize]) % 4;
                code.push(n2);
                code.push(local as u32);
                if !edge_seen.contains_key(&e) {
                    edge_seen.insert(e, ());
                    edges.push(e);
                }
            }
            i += 1;
        }
        let mut pattern = BTreeMap::new();
        code.push(u32::MAX);
        for e in &edges {
            let next = pattern.len() as u32;
            code.push(*pattern.entry(self.edge_block[*e as usize]).or_insert(next));
        }
        (code, edges)
    }

    /// A key equal for diagrams that agree up to relabeling of edges and crossings,
    /// including ties. Orientation is not part of the key.
    pub fn canonical_key(&self) -> Vec<u8> {
        let ends = self.ends();
        let nc = self.crossings.len();
        let mut part_of = vec![u32::MAX; nc];
        let mut parts: Vec<Vec<u32>> = Vec::new();
        for start in 0..nc as u32 {
            if part_of[start as usize] != u32::MAX {
                continue;
            }
            let id = parts.len() as u32;
            let mut stack = vec![start];
            part_of[start as usize] = id;
            let mut members = Vec::new();
            while let Some(c) = stack.pop() {
                members.push(c);
                for s in 0..4u8 {
                    let e = self.crossings[c as usize][s as usize];
                    let (c2, _) = Self::other_end(&ends, e, c, s);
                    if part_of[c2 as usize] == u32::MAX {
                        part_of[c2 as usize] = id;
                        stack.push(c2);
                    }
                }
            }
            parts.push(members);
        }
        let mut encoded: Vec<(Vec<u32>, Vec<u32>)> = parts
            .iter()
            .map(|members| {
                members
                    .iter()
                    .flat_map(|&c| (0..4u8).map(move |s| (c, s)))
                    .map(|(c, s)| self.encode_from(&ends, c, s))
                    .min()
                    .expect("nonempty part")
            })
            .collect();
        encoded.sort();
        let mut global = BTreeMap::new();
        let mut key: Vec<u32> = vec![encoded.len() as u32];
        for (code, edges) in &encoded {
            key.extend_from_slice(code);
            key.push(u32::MAX - 1);
            for e in edges {
                let next = global.len() as u32;
                key.push(*global.entry(self.edge_block[*e as usize]).or_insert(next));
            }
            key.push(u32::MAX);
        }
        let mut known = Vec::new();
        let mut fresh: BTreeMap<u32, u32> = BTreeMap::new();
        for (e, v) in ends.iter().enumerate() {
            if v.is_empty() {
                let b = self.edge_block[e];
                match global.get(&b) {
                    Some(&g) => known.push(g),
                    None => *fresh.entry(b).or_default() += 1,
                }
            }
        }
        known.sort_unstable();
        let mut fresh: Vec<u32> = fresh.into_values().collect();
        fresh.sort_unstable();
        key.push(known.len() as u32);
        key.extend(known);
        key.push(fresh.len() as u32);
        key.extend(fresh);
        key.iter().flat_map(|v| v.to_le_bytes()).collect()
    }

    /// Loads a PD file (see [`PdFile`]).
    pub fn from_pd(pd: &PdFile) -> Result<Self, DiagramError> {
        let mut ids: Vec<u64> = pd.crossings.iter().flatten().copied().collect();
        if ids.iter().any(|&i| i == 0) {
            return Err(DiagramError::Json("arc ids must be positive".into()));
        }
        ids.sort_unstable();
        ids.dedup();
        let index: BTreeMap<u64, u32> = ids.iter().enumerate().map(|(i, &a)| (a, i as u32)).collect();
        let crossings: Vec<[u32; 4]> = pd.crossings.iter().map(|x| x.map(|a| index[&a])).collect();
        let ne = ids.len() + pd.split_circles;
        if ne == 0 {
            return Err(DiagramError::Empty);
        }
        let raw = Self::from_raw(crossings, (0..ne as u32).collect(), None)?;
        let n = raw.component_count();
        let partition = match &pd.partition {
            Some(blocks) => {
                let blocks = blocks.iter().map(|b| b.iter().map(|&c| c.wrapping_sub(1)).collect()).collect();
                let p = TiePartition::from_blocks(blocks).map_err(|e| DiagramError::Json(e.to_string()))?;
                if p.count() != n {
                    return Err(DiagramError::PartitionSize { expected: n, got: p.count() });
                }
                p
            }
            None => TiePartition::discrete(n),
        };
        let mut d = raw.with_partition(&partition)?;
        if let Some(flags) = &pd.orientation {
            if flags.len() != n {
                return Err(DiagramError::OrientationSize { expected: n, got: flags.len() });
            }
            d = d.implied_orientation()?;
            for (k, &keep) in flags.iter().enumerate() {
                if !keep {
                    d = d.reverse_component(k)?;
                }
            }
        }
        Ok(d)
    }

    /// Orients each component: along slot 0 → 2 where it passes under, otherwise the
    /// canonical direction from its smallest edge.
    fn implied_orientation(&self) -> Result<Self, DiagramError> {
        let ends = self.ends();
        let (comp, n) = self.edge_components();
        let unoriented = self.without_orientation();
        let mut flags = vec![false; self.crossings.len()];
        let mut set = vec![false; self.crossings.len()];
        let mut visited = vec![false; n];
        for b in 0..self.edge_block.len() as u32 {
            let k = comp[b as usize] as usize;
            if visited[k] || ends[b as usize].is_empty() {
                visited[k] = true;
                continue;
            }
            visited[k] = true;
            // prefer a start that enters an under passage at slot 0
            let start = (0..self.edge_block.len() as u32)
                .filter(|&e| comp[e as usize] as usize == k)
                .flat_map(|e| ends[e as usize].iter().copied())
                .find(|&(_, s)| s == 0)
                .unwrap_or_else(|| unoriented.start_end(&ends, b));
            let (mut c, mut s) = start;
            loop {
                let ci = c as usize;
                if s == 2 {
                    return Err(DiagramError::InconsistentOrientation(k));
                }
                if s % 2 == 1 {
                    flags[ci] = s == 3;
                    set[ci] = true;
                }
                let out = (s + 2) % 4;
                let e = self.crossings[ci][out as usize];
                (c, s) = Self::other_end(&ends, e, c, out);
                if (c, s) == start {
                    break;
                }
            }
        }
        debug_assert!(set.iter().all(|&x| x));
        Ok(TiedDiagram { over_in3: Some(flags), ..self.clone() })
    }

    /// Writes a PD file. Arc ids are `1..`, in this diagram's edge order.
    pub fn to_pd(&self) -> PdFile {
        let ends = self.ends();
        let mut arc = vec![0u64; ends.len()];
        let mut next = 0;
        for (e, v) in ends.iter().enumerate() {
            if !v.is_empty() {
                next += 1;
                arc[e] = next;
            }
        }
        let split_circles = ends.iter().filter(|v| v.is_empty()).count();
        let crossings = self.crossings.iter().map(|x| x.map(|e| arc[e as usize])).collect();
        let mut pd = PdFile { crossings, split_circles, partition: None, orientation: None };
        let reloaded = TiedDiagram::from_pd(&pd).expect("round trip");
        // map components of the reloaded diagram back to ours through a representative edge
        let (ours, _) = self.edge_components();
        let rel_components = reloaded.components();
        let mut arc_to_edge = BTreeMap::new();
        for (e, &a) in arc.iter().enumerate() {
            if a > 0 {
                arc_to_edge.insert(a, e);
            }
        }
        let free: Vec<usize> = (0..ends.len()).filter(|&e| ends[e].is_empty()).collect();
        let rel_arc_count = next as usize;
        let rep: Vec<usize> = rel_components
            .iter()
            .map(|c| {
                let e = c.edges[0] as usize;
                if e < rel_arc_count {
                    arc_to_edge[&(e as u64 + 1)]
                } else {
                    free[e - rel_arc_count]
                }
            })
            .collect();
        let mut blocks: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (k, &e) in rep.iter().enumerate() {
            blocks.entry(self.edge_block[e]).or_default().push(k + 1);
        }
        pd.partition = Some(blocks.into_values().collect());
        if let Some(mine) = &self.over_in3 {
            // crossing order and slots survive the round trip, so directions compare per crossing
            let implied = reloaded.implied_orientation().expect("consistent");
            let theirs = implied.over_in3.as_ref().expect("oriented");
            let orient = rep
                .iter()
                .map(|&e| {
                    let k = ours[e];
                    let mut over_at = None;
                    for (c, x) in self.crossings.iter().enumerate() {
                        if ours[x[0] as usize] == k {
                            return true;
                        }
                        if ours[x[1] as usize] == k {
                            over_at = Some(c);
                        }
                    }
                    over_at.map_or(true, |c| mine[c] == theirs[c])
                })
                .collect();
            pd.orientation = Some(orient);
        }
        pd
    }
}

/// The JSON planar-diagram format.
///
/// `crossings` lists four positive arc ids per crossing, counterclockwise from the
/// incoming under-strand. `split_circles` adds crossingless components. Components
/// are numbered from 1 in order of their smallest arc id, split circles last;
/// `partition` lists blocks of component numbers (all singletons when absent).
/// When `orientation` is present the diagram is oriented: a component runs from
/// slot 0 to slot 2 where it passes under; a component that never passes under
/// leaves its smallest arc toward the end whose continuing arc has the smaller id.
/// A `false` flag reverses that component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PdFile {
    pub crossings: Vec<[u64; 4]>,
    #[serde(default)]
    pub split_circles: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<bool>>,
}

impl PdFile {
    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        serde_json::from_str(text).map_err(|e| DiagramError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

impl fmt::Debug for TiedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PD{:?} blocks{:?}", self.crossings, self.edge_block)?;
        if let Some(o) = &self.over_in3 {
            write!(f, " positive{o:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::TiedBraidWord;

    fn closure(s: &str, n: usize) -> TiedDiagram {
        TiedBraidWord::parse(s, Some(n)).unwrap().closure(None).unwrap()
    }

    const SITE: CrossingSite = CrossingSite { crossing: 0 };

    #[test]
    fn component_counts() {
        assert_eq!(closure("", 2).components().len(), 2);
        assert_eq!(closure("s1", 2).components().len(), 1);
        assert_eq!(closure("s1", 3).components().len(), 2);
        let e = closure("e1", 2);
        assert_eq!(e.components().len(), 2);
        assert_eq!(e.partition().blocks(), &[vec![0, 1]]);
        assert_eq!(closure("", 3).partition().blocks().len(), 3);
    }

    #[test]
    fn essential_ties() {
        let p = TiePartition::parse("1,2|3", None).unwrap();
        assert_eq!(TiedDiagram::unlink(&p).essential_tie_count(), 1);
        assert_eq!(closure("", 4).essential_tie_count(), 0);
        assert_eq!(closure("e1 e2 e3", 4).essential_tie_count(), 3);
    }

    #[test]
    fn writhe_matches_exponent() {
        let w = TiedBraidWord::parse("s1 -s2 s1 s1 e2 -s1", None).unwrap();
        assert_eq!(w.closure(None).unwrap().writhe().unwrap(), w.exp());
    }

    #[test]
    fn switch_and_mirror() {
        let d = closure("s1", 2);
        assert_eq!(d.switch(SITE).unwrap(), closure("-s1", 2));
        assert_eq!(d.switch(SITE).unwrap().switch(SITE).unwrap(), d);
        let t = closure("s1 s1 s1", 2);
        for c in 0..3 {
            let s = t.switch(CrossingSite { crossing: c }).unwrap();
            assert_eq!(s.component_count(), 1);
            assert_eq!(s.writhe().unwrap(), 1);
        }
        assert_eq!(t.mirror(), closure("-s1 -s1 -s1", 2));
        assert!(t.switch(CrossingSite { crossing: 3 }).is_err());
    }

    #[test]
    fn kink_smoothings() {
        let d = closure("s1", 2);
        let e = d.smooth(SITE, Smoothing::E).unwrap();
        let f = d.smooth(SITE, Smoothing::F).unwrap();
        let mut counts = [e.component_count(), f.component_count()];
        counts.sort();
        assert_eq!(counts, [1, 2]);
        let split = if e.component_count() == 2 { &e } else { &f };
        assert_eq!(split.crossing_count(), 0);
        assert_eq!(split.essential_tie_count(), 1);
        // the oriented smoothing of a braid crossing keeps the strands
        assert_eq!(e.component_count(), 2);
    }

    #[test]
    fn smoothing_two_components_merges() {
        let d = closure("s1 s1", 2);
        assert_eq!(d.component_count(), 2);
        for which in [Smoothing::E, Smoothing::F] {
            let s = d.smooth(SITE, which).unwrap();
            assert_eq!(s.crossing_count(), 1);
            assert_eq!(s.component_count(), 1);
            assert_eq!(s.essential_tie_count(), 0);
        }
    }

    #[test]
    fn kink_signs() {
        let (d, k) = closure("s1", 2).remove_kinks();
        assert_eq!((d.crossing_count(), k), (0, 1));
        let (_, k) = closure("-s1", 2).remove_kinks();
        assert_eq!(k, -1);
        let (d, k) = closure("s1 s2 -s1", 3).remove_kinks();
        assert_eq!(d.crossing_count(), 2);
        assert_eq!(k, 1);
        for w in ["s1 s1 s1", "s1 -s2 s1 -s2", "s1 s2 s2 s1 -s2"] {
            let d = closure(w, 3);
            for c in 0..d.crossing_count() {
                let site = CrossingSite { crossing: c };
                if let Some(sign) = d.self_crossing_sign(site).unwrap() {
                    assert_eq!(sign, d.crossing_sign(site).unwrap());
                }
            }
        }
    }

    #[test]
    fn ascending_examples() {
        assert_eq!(closure("", 3).ascending_data(), (vec![], 0));
        assert_eq!(closure("s1", 2).ascending_data(), (vec![], 1));
        let unoriented = closure("s1", 2).without_orientation();
        assert_eq!(unoriented.ascending_data(), (vec![], 1));
        let hopf = closure("s1 s1", 2);
        assert_eq!(hopf.ascending_data().0.len(), 1);
        assert_eq!(hopf.without_orientation().ascending_data().0.len(), 1);
        for k in 0..2 {
            assert_eq!(hopf.reverse_component(k).unwrap().ascending_data().0.len(), 1);
        }
    }

    #[test]
    fn unlink_inputs() {
        assert_eq!(closure("", 3).unlink_value_inputs().unwrap(), (3, 0, 0));
        assert_eq!(closure("e1", 2).unlink_value_inputs().unwrap(), (2, 1, 0));
        assert_eq!(closure("s1", 2).unlink_value_inputs().unwrap(), (1, 0, 1));
        assert!(matches!(closure("s1 s1", 2).unlink_value_inputs(), Err(DiagramError::NotAscending(1))));
    }

    #[test]
    fn switching_deciding_sites_gives_ascending() {
        let mut d = closure("s1 -s2 s1 s2 s2 -s1 s2", 3);
        let mut guard = 0;
        loop {
            let (sites, _) = d.ascending_data();
            if sites.is_empty() {
                break;
            }
            let before = sites.len();
            d = d.switch(sites[0]).unwrap();
            assert_eq!(d.ascending_data().0.len(), before - 1);
            guard += 1;
            assert!(guard < 10);
        }
    }

    #[test]
    fn keys() {
        let d = closure("s1 s1 s1 -s2 s1", 3);
        let perm: Vec<u32> = (0..d.edge_count() as u32).rev().collect();
        assert_eq!(d.canonical_key(), d.relabel(&perm).canonical_key());
        let tied = d.all_tied();
        assert_ne!(d.canonical_key(), tied.canonical_key());
        let t = closure("s1 s1 s1", 2);
        assert_ne!(t.canonical_key(), t.mirror().canonical_key());
        assert_eq!(closure("s1 s2", 3).canonical_key(), closure("s2 s1", 3).canonical_key());
        assert_ne!(closure("", 2).canonical_key(), closure("e1", 2).canonical_key());
        assert_eq!(closure("e1", 3).canonical_key(), closure("e2", 3).canonical_key());
        assert_ne!(closure("e1", 3).canonical_key(), closure("", 3).canonical_key());
    }

    #[test]
    fn pd_round_trip() {
        for (w, n) in [("s1 s1 s1", 2), ("e1 s1 -s2 s1", 3), ("", 2), ("s1 e1 s1", 3)] {
            let d = closure(w, n);
            let pd = d.to_pd();
            let back = TiedDiagram::from_pd(&PdFile::from_json(&pd.to_json()).unwrap()).unwrap();
            assert_eq!(back.canonical_key(), d.canonical_key());
            assert_eq!(back.partition(), d.partition());
            assert_eq!(back.writhe().unwrap(), d.writhe().unwrap());
        }
    }

    #[test]
    fn pd_errors() {
        let bad = PdFile { crossings: vec![[1, 2, 3, 3]], split_circles: 0, partition: None, orientation: None };
        assert!(matches!(TiedDiagram::from_pd(&bad), Err(DiagramError::BadEdge { .. })));
        let empty = PdFile { crossings: vec![], split_circles: 0, partition: None, orientation: None };
        assert!(matches!(TiedDiagram::from_pd(&empty), Err(DiagramError::Empty)));
        assert!(PdFile::from_json("{\"crossings\": [[1,2]]}").is_err());
        let p = PdFile { crossings: vec![], split_circles: 2, partition: Some(vec![vec![1]]), orientation: None };
        assert!(matches!(TiedDiagram::from_pd(&p), Err(DiagramError::PartitionSize { .. })));
    }

    #[test]
    fn trefoil_pd_is_oriented_from_slots() {
        // the standard right-handed trefoil code
        let pd = PdFile::from_json(r#"{"crossings": [[1,5,2,4],[3,1,4,6],[5,3,6,2]], "orientation": [true]}"#).unwrap();
        let d = TiedDiagram::from_pd(&pd).unwrap();
        assert_eq!(d.writhe().unwrap().abs(), 3);
        let flipped = PdFile { orientation: Some(vec![false]), ..pd };
        assert_eq!(TiedDiagram::from_pd(&flipped).unwrap().writhe().unwrap(), d.writhe().unwrap());
    }
}
