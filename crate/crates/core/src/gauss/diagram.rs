use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::GaussError;
use crate::sign::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mark {
    Classical,
    /// Semi-virtual crossing: the arrow minus the arrow deleted.
    Dashed,
    /// Singular crossing: the arrow minus its crossing change.
    Chord,
}

impl Mark {
    fn prefix(self) -> &'static str {
        match self {
            Mark::Classical => "",
            Mark::Dashed => "d",
            Mark::Chord => "s",
        }
    }
}

/// Which way an arrow points along the line: `Right` when the overcrossing
/// endpoint comes first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn reversed(self) -> Direction {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Direction::Left => 'L',
            Direction::Right => 'R',
        }
    }
}

/// One arrow of a Gauss diagram. Positions are 0-based endpoint indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub over: usize,
    pub under: usize,
    pub sign: Sign,
    pub mark: Mark,
}

impl Arrow {
    pub fn classical(over: usize, under: usize, sign: Sign) -> Self {
        Self { over, under, sign, mark: Mark::Classical }
    }

    pub fn left(&self) -> usize {
        self.over.min(self.under)
    }

    pub fn right(&self) -> usize {
        self.over.max(self.under)
    }

    pub fn direction(&self) -> Direction {
        if self.over < self.under {
            Direction::Right
        } else {
            Direction::Left
        }
    }

    pub fn reversed(&self) -> Self {
        Self { over: self.under, under: self.over, ..*self }
    }

    pub fn with_mark(&self, mark: Mark) -> Self {
        Self { mark, ..*self }
    }
}

/// A long Gauss diagram in canonical form: endpoints `0..2n` on the line,
/// arrows listed by their leftmost endpoint.
///
/// Two diagrams are equivalent under orientation preserving homeomorphisms
/// of the line exactly when their canonical forms are equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaussDiagram {
    arrows: Vec<Arrow>,
}

/// One endpoint of a diagram under construction, keyed by an arbitrary arrow label.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Endpoint {
    pub key: usize,
    pub over: bool,
    pub sign: Sign,
    pub mark: Mark,
}

/// Whether the two strands of an RII pair run the same way (the second pair
/// of endpoints in the same order) or opposite ways (reversed order).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Strands {
    Parallel,
    Antiparallel,
}

/// Parameters of an RII insertion: two arrows of opposite signs between
/// gaps `slot_a <= slot_b`, pointing `direction`; the first one is signed `sign`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct R2Move {
    pub slot_a: usize,
    pub slot_b: usize,
    pub direction: Direction,
    pub sign: Sign,
    pub strands: Strands,
}

impl GaussDiagram {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Validates that the positions form a perfect matching of `0..2n` and
    /// canonicalizes.
    pub fn from_arrows(mut arrows: Vec<Arrow>) -> Result<Self, GaussError> {
        let size = 2 * arrows.len();
        let mut seen = vec![false; size];
        for a in &arrows {
            for p in [a.over, a.under] {
                if p >= size || seen[p] {
                    return Err(GaussError::BadPositions(size));
                }
                seen[p] = true;
            }
        }
        arrows.sort_by_key(|a| a.left());
        Ok(Self { arrows })
    }

    /// Keeps the relative order of the given arrows' endpoints, renumbering
    /// them to `0..2m`. Positions must be distinct.
    pub(crate) fn compress(mut arrows: Vec<Arrow>) -> Self {
        let mut pos: Vec<usize> = arrows.iter().flat_map(|a| [a.over, a.under]).collect();
        pos.sort_unstable();
        let rank = |p: usize| pos.binary_search(&p).expect("position present");
        for a in &mut arrows {
            a.over = rank(a.over);
            a.under = rank(a.under);
        }
        arrows.sort_by_key(|a| a.left());
        Self { arrows }
    }

    /// Assembles a diagram from endpoints listed left to right. Every key
    /// must appear once as over and once as under with matching sign and mark.
    pub(crate) fn from_endpoints(ends: &[Endpoint]) -> Result<Self, GaussError> {
        let mut by_key: BTreeMap<usize, Vec<(usize, Endpoint)>> = BTreeMap::new();
        for (p, e) in ends.iter().enumerate() {
            by_key.entry(e.key).or_default().push((p, *e));
        }
        let mut arrows = Vec::with_capacity(by_key.len());
        for (key, occ) in by_key {
            if occ.len() != 2 {
                return Err(GaussError::IndexCount { index: key, count: occ.len() });
            }
            let (p0, e0) = occ[0];
            let (p1, e1) = occ[1];
            if e0.over == e1.over {
                let kind = if e0.over { 'O' } else { 'U' };
                return Err(GaussError::DuplicateKind { index: key, kind });
            }
            if e0.sign != e1.sign || e0.mark != e1.mark {
                return Err(GaussError::InconsistentToken { index: key });
            }
            let (over, under) = if e0.over { (p0, p1) } else { (p1, p0) };
            arrows.push(Arrow { over, under, sign: e0.sign, mark: e0.mark });
        }
        Self::from_arrows(arrows)
    }

    /// Endpoints left to right, keyed by canonical arrow index.
    pub(crate) fn endpoints(&self) -> Vec<Endpoint> {
        let mut ends = vec![None; 2 * self.arrows.len()];
        for (i, a) in self.arrows.iter().enumerate() {
            ends[a.over] = Some(Endpoint { key: i, over: true, sign: a.sign, mark: a.mark });
            ends[a.under] = Some(Endpoint { key: i, over: false, sign: a.sign, mark: a.mark });
        }
        ends.into_iter().map(|e| e.expect("perfect matching")).collect()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn arrow(&self, i: usize) -> Result<&Arrow, GaussError> {
        self.arrows
            .get(i)
            .ok_or(GaussError::ArrowOutOfRange { index: i, len: self.arrows.len() })
    }

    pub fn is_classical(&self) -> bool {
        self.arrows.iter().all(|a| a.mark == Mark::Classical)
    }

    pub fn count_marked(&self, mark: Mark) -> usize {
        self.arrows.iter().filter(|a| a.mark == mark).count()
    }

    /// Sum of the crossing signs. Only defined on classical diagrams.
    pub fn writhe(&self) -> Result<i64, GaussError> {
        if !self.is_classical() {
            return Err(GaussError::MarkedDiagram);
        }
        Ok(self.arrows.iter().map(|a| a.sign.to_i64()).sum())
    }

    /// Virtualization move: arrow `i` points the other way, same sign and mark.
    pub fn reverse_arrow(&self, i: usize) -> Result<Self, GaussError> {
        self.arrow(i)?;
        let mut arrows = self.arrows.clone();
        arrows[i] = arrows[i].reversed();
        // The leftmost endpoint is unchanged, so the order stays canonical.
        Ok(Self { arrows })
    }

    pub fn with_mark(&self, i: usize, mark: Mark) -> Result<Self, GaussError> {
        self.arrow(i)?;
        let mut arrows = self.arrows.clone();
        arrows[i].mark = mark;
        Ok(Self { arrows })
    }

    pub fn with_all_marks(&self, mark: Mark) -> Self {
        Self {
            arrows: self.arrows.iter().map(|a| a.with_mark(mark)).collect(),
        }
    }

    /// The subdiagram on the arrows whose bit is set in `mask`.
    pub fn subdiagram(&self, mask: u64) -> Self {
        let kept = self
            .arrows
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, a)| *a)
            .collect();
        Self::compress(kept)
    }

    pub fn insert_r2_pair(&self, mv: R2Move) -> Result<Self, GaussError> {
        let max = 2 * self.arrows.len();
        for slot in [mv.slot_a, mv.slot_b] {
            if slot > max {
                return Err(GaussError::InvalidSlot { slot, max });
            }
        }
        if mv.slot_a > mv.slot_b {
            return Err(GaussError::InvalidSlot { slot: mv.slot_a, max: mv.slot_b });
        }
        let n = self.arrows.len();
        let (x, y) = (n, n + 1);
        let over_first = mv.direction == Direction::Right;
        let end = |key, over, sign| Endpoint { key, over, sign, mark: Mark::Classical };
        let first = [end(x, over_first, mv.sign), end(y, over_first, -mv.sign)];
        let mut second = [end(x, !over_first, mv.sign), end(y, !over_first, -mv.sign)];
        if mv.strands == Strands::Antiparallel {
            second.swap(0, 1);
        }
        let base = self.endpoints();
        let mut seq = Vec::with_capacity(base.len() + 4);
        for gap in 0..=max {
            if gap == mv.slot_a {
                seq.extend(first);
            }
            if gap == mv.slot_b {
                seq.extend(second);
            }
            seq.extend(base.get(gap).copied());
        }
        Self::from_endpoints(&seq)
    }

    /// True if arrows `i` and `j` cancel by an RII move: classical, opposite
    /// signs, over endpoints adjacent and under endpoints adjacent.
    pub fn is_r2_pair(&self, i: usize, j: usize) -> bool {
        let (Some(a), Some(b)) = (self.arrows.get(i), self.arrows.get(j)) else {
            return false;
        };
        i != j
            && a.mark == Mark::Classical
            && b.mark == Mark::Classical
            && a.sign != b.sign
            && a.over.abs_diff(b.over) == 1
            && a.under.abs_diff(b.under) == 1
    }

    pub fn r2_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.arrows.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.is_r2_pair(i, j))
            .collect()
    }

    pub fn delete_r2_pair(&self, i: usize, j: usize) -> Result<Self, GaussError> {
        self.arrow(i)?;
        self.arrow(j)?;
        if !self.is_r2_pair(i, j) {
            return Err(GaussError::NotR2Pair(i, j));
        }
        let all = if self.arrows.len() == 64 { u64::MAX } else { (1u64 << self.arrows.len()) - 1 };
        Ok(self.subdiagram(all & !(1 << i) & !(1 << j)))
    }

    /// Adds an isolated kink in gap `slot`.
    pub fn insert_kink(&self, slot: usize, direction: Direction, sign: Sign) -> Result<Self, GaussError> {
        let max = 2 * self.arrows.len();
        if slot > max {
            return Err(GaussError::InvalidSlot { slot, max });
        }
        let key = self.arrows.len();
        let over_first = direction == Direction::Right;
        let mut seq = self.endpoints();
        let e = |over| Endpoint { key, over, sign, mark: Mark::Classical };
        seq.splice(slot..slot, [e(over_first), e(!over_first)]);
        Self::from_endpoints(&seq)
    }
}

impl fmt::Display for GaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, e) in self.endpoints().iter().enumerate() {
            if p > 0 {
                write!(f, " ")?;
            }
            let kind = if e.over { 'O' } else { 'U' };
            write!(f, "{}{}{}{}", e.mark.prefix(), kind, e.key + 1, e.sign)?;
        }
        Ok(())
    }
}

fn parse_token(tok: &str) -> Result<Endpoint, GaussError> {
    let bad = || GaussError::MalformedToken(tok.to_string());
    let (mark, rest) = match tok.as_bytes().first() {
        Some(b'd') => (Mark::Dashed, &tok[1..]),
        Some(b's') => (Mark::Chord, &tok[1..]),
        _ => (Mark::Classical, tok),
    };
    let mut chars = rest.chars();
    let over = match chars.next() {
        Some('O') => true,
        Some('U') => false,
        _ => return Err(bad()),
    };
    let rest = chars.as_str();
    let sign = match rest.chars().last() {
        Some('+') => Sign::Plus,
        Some('-') => Sign::Minus,
        _ => return Err(bad()),
    };
    let digits = &rest[..rest.len() - 1];
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let key: usize = digits.parse().map_err(|_| bad())?;
    if key == 0 {
        return Err(bad());
    }
    Ok(Endpoint { key, over, sign, mark })
}

impl FromStr for GaussDiagram {
    type Err = GaussError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ends = s
            .split_whitespace()
            .map(parse_token)
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_endpoints(&ends)
    }
}
