//! Tied braid words: braid generators and their inverses plus tie generators.

use std::fmt;

use thiserror::Error;

use crate::diagram::{TangleLetter, TiedDiagram};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("bad token `{token}` at position {pos}")]
    BadToken { pos: usize, token: String },
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: usize, strands: usize },
    #[error("strand count must be positive")]
    NoStrands,
    #[error("bad partition `{0}`")]
    BadPartition(String),
    #[error("partition refers to component {component}, but there are {count}")]
    NoSuchComponent { component: usize, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BraidLetter {
    /// `σᵢ` (positive) or `σᵢ⁻¹`, with `1 ≤ i < strands`.
    Sigma { index: usize, positive: bool },
    /// The tie `ηᵢ` between strands `i` and `i+1`.
    Eta(usize),
}

impl BraidLetter {
    pub fn index(self) -> usize {
        match self {
            BraidLetter::Sigma { index, .. } | BraidLetter::Eta(index) => index,
        }
    }

    pub fn inverse(self) -> Self {
        match self {
            BraidLetter::Sigma { index, positive } => BraidLetter::Sigma { index, positive: !positive },
            eta => eta,
        }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BraidLetter::Sigma { index, positive: true } => write!(f, "s{index}"),
            BraidLetter::Sigma { index, positive: false } => write!(f, "-s{index}"),
            BraidLetter::Eta(i) => write!(f, "e{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TiedBraidWord {
    strands: usize,
    letters: Vec<BraidLetter>,
}

impl TiedBraidWord {
    pub fn new(strands: usize, letters: Vec<BraidLetter>) -> Result<Self, BraidError> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        for l in &letters {
            let i = l.index();
            if i == 0 || i >= strands {
                return Err(BraidError::IndexOutOfRange { index: i, strands });
            }
        }
        Ok(TiedBraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        Self::new(strands, Vec::new()).expect("positive strand count")
    }

    /// Parses whitespace-separated `s3`, `-s3`, `e2`. Without `strands` the count is `1 + max index`.
    pub fn parse(text: &str, strands: Option<usize>) -> Result<Self, BraidError> {
        let mut letters = Vec::new();
        let mut pos = 0;
        for token in text.split_whitespace() {
            let at = pos + text[pos..].find(token).unwrap_or(0);
            pos = at + token.len();
            let bad = || BraidError::BadToken { pos: at, token: token.to_string() };
            let (neg, rest) = match token.strip_prefix('-').or_else(|| token.strip_prefix('\u{2212}')) {
                Some(r) => (true, r),
                None => (false, token),
            };
            let (kind, digits) = rest.split_at(rest.chars().next().map_or(0, char::len_utf8));
            let index: usize = digits.parse().map_err(|_| bad())?;
            let letter = match kind {
                "s" => BraidLetter::Sigma { index, positive: !neg },
                "e" if !neg => BraidLetter::Eta(index),
                _ => return Err(bad()),
            };
            letters.push(letter);
        }
        let inferred = 1 + letters.iter().map(|l| l.index()).max().unwrap_or(0);
        Self::new(strands.unwrap_or(inferred), letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn has_ties(&self) -> bool {
        self.letters.iter().any(|l| matches!(l, BraidLetter::Eta(_)))
    }

    /// Sum of the signs of the braid letters; ties count zero.
    pub fn exp(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                BraidLetter::Sigma { positive: true, .. } => 1,
                BraidLetter::Sigma { positive: false, .. } => -1,
                BraidLetter::Eta(_) => 0,
            })
            .sum()
    }

    /// Prepends `η₁⋯η_{n−1}`, tying every component of the closure together.
    pub fn all_tied(&self) -> Self {
        let mut letters: Vec<BraidLetter> = (1..self.strands).map(BraidLetter::Eta).collect();
        letters.extend_from_slice(&self.letters);
        TiedBraidWord { strands: self.strands, letters }
    }

    /// Drops all tie letters.
    pub fn untied(&self) -> Self {
        let letters = self.letters.iter().copied().filter(|l| matches!(l, BraidLetter::Sigma { .. })).collect();
        TiedBraidWord { strands: self.strands, letters }
    }

    /// The inverse word; ties are their own inverses.
    pub fn inverse(&self) -> Self {
        let letters = self.letters.iter().rev().map(|l| l.inverse()).collect();
        TiedBraidWord { strands: self.strands, letters }
    }

    pub fn concat(&self, other: &Self) -> Self {
        assert_eq!(self.strands, other.strands, "strand count mismatch");
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        TiedBraidWord { strands: self.strands, letters }
    }

    /// `v · self · v⁻¹`, unreduced.
    pub fn conjugate(&self, v: &Self) -> Self {
        v.concat(self).concat(&v.inverse())
    }

    /// Adds a strand and appends `σₙ^{±1}`.
    pub fn stabilize(&self, positive: bool) -> Self {
        let mut letters = self.letters.clone();
        letters.push(BraidLetter::Sigma { index: self.strands, positive });
        TiedBraidWord { strands: self.strands + 1, letters }
    }

    /// The permutation of strand positions: `perm[top] = bottom`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect(); // at[position] = strand starting there
        for l in &self.letters {
            if let BraidLetter::Sigma { index, .. } = l {
                at.swap(index - 1, *index);
            }
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    /// Number of components of the closure.
    pub fn component_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut cycles = 0;
        for s in 0..self.strands {
            if !seen[s] {
                cycles += 1;
                let mut t = s;
                while !seen[t] {
                    seen[t] = true;
                    t = perm[t];
                }
            }
        }
        cycles
    }

    /// The braid closure as an oriented tied diagram.
    ///
    /// Components are numbered by the smallest strand they pass through at the
    /// top; `extra` refers to that numbering and is joined with the ties of the word.
    pub fn closure(&self, extra: Option<&TiePartition>) -> Result<TiedDiagram, BraidError> {
        let letters: Vec<TangleLetter> = self
            .letters
            .iter()
            .map(|l| match *l {
                BraidLetter::Sigma { index, positive } => TangleLetter::Cross { index, positive },
                BraidLetter::Eta(i) => TangleLetter::Tie(i),
            })
            .collect();
        let mut ties = Vec::new();
        if let Some(p) = extra {
            let count = self.component_count();
            let top = self.component_top_strands();
            for block in p.blocks() {
                for &c in block {
                    if c >= count {
                        return Err(BraidError::NoSuchComponent { component: c + 1, count });
                    }
                }
                for w in block.windows(2) {
                    ties.push((top[w[0]], top[w[1]]));
                }
            }
        }
        Ok(TiedDiagram::tangle_closure(self.strands, &letters, &ties))
    }

    /// Smallest top strand of each closure component, in component order.
    fn component_top_strands(&self) -> Vec<usize> {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut out = Vec::new();
        for s in 0..self.strands {
            if !seen[s] {
                out.push(s);
                let mut t = s;
                while !seen[t] {
                    seen[t] = true;
                    t = perm[t];
                }
            }
        }
        out
    }
}

impl fmt::Display for TiedBraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A set partition of `{0..count}`; blocks are sorted, and ordered by their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TiePartition {
    blocks: Vec<Vec<usize>>,
}

impl TiePartition {
    pub fn discrete(count: usize) -> Self {
        TiePartition { blocks: (0..count).map(|i| vec![i]).collect() }
    }

    pub fn single_block(count: usize) -> Self {
        TiePartition { blocks: if count == 0 { vec![] } else { vec![(0..count).collect()] } }
    }

    /// Normalizes `blocks` (0-based). Fails on overlaps or gaps.
    pub fn from_blocks(mut blocks: Vec<Vec<usize>>) -> Result<Self, BraidError> {
        blocks.retain(|b| !b.is_empty());
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let mut all: Vec<usize> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(BraidError::BadPartition(format!("{blocks:?}")));
        }
        Ok(TiePartition { blocks })
    }

    /// Parses 1-based text such as `1,2|3`. Components not mentioned are singletons only if
    /// `count` is given.
    pub fn parse(text: &str, count: Option<usize>) -> Result<Self, BraidError> {
        let bad = || BraidError::BadPartition(text.to_string());
        let mut blocks = Vec::new();
        for part in text.split('|') {
            let mut block = Vec::new();
            for item in part.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let v: usize = item.parse().map_err(|_| bad())?;
                if v == 0 {
                    return Err(bad());
                }
                block.push(v - 1);
            }
            blocks.push(block);
        }
        if let Some(n) = count {
            let mentioned: Vec<usize> = blocks.iter().flatten().copied().collect();
            if let Some(&big) = mentioned.iter().find(|&&v| v >= n) {
                return Err(BraidError::NoSuchComponent { component: big + 1, count: n });
            }
            for i in 0..n {
                if !mentioned.contains(&i) {
                    blocks.push(vec![i]);
                }
            }
        }
        Self::from_blocks(blocks).map_err(|_| bad())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Minimal number of ties realizing the partition: components minus blocks.
    pub fn essential_ties(&self) -> usize {
        self.count() - self.blocks.len()
    }
}

impl fmt::Display for TiePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: Vec<String> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&text.join("|"))
    }
}
