//! Twist sequences and lattices over proper pairs, the Figure 5 family, and
//! the lattices whose derivatives recover a given chord or dashed diagram.
//!
//! A block is a list of arrows in slot order. Slot `j` has one endpoint at
//! the `j`-th place of the first interval and one in the second interval, at
//! the `j`-th place (`S`) or the `j`-th from the right (`B`).
//!
//! Regular blocks are words in `σ`, `σ⁻¹` and chords. In slot `j` (from 1)
//! `σ` is an arrow signed `+` pointing `Z` for odd `j` and against `Z` for
//! even `j`; `σ⁻¹` is its crossing change. Then `Φ_O(k) = σ^{2k-1}` and
//! `Φ_E(k) = σ^{2k}`, and a `σ⁻¹ σ` in adjacent slots is an RII pair.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::MultiIndex;
use crate::gauss::{Arrow, Direction, Endpoint, GaussDiagram, GaussError, Mark};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error("{pairs} proper pairs but {axes} axis types")]
    AxisCount { pairs: usize, axes: usize },
    #[error("lattice point has dimension {got}, lattice has {expected} axes")]
    Dimension { got: usize, expected: usize },
    #[error("slot gap {gap} out of range for a base with {max} gaps")]
    SlotOutOfRange { gap: usize, max: usize },
    #[error("pair {0}: first interval must not lie right of the second")]
    PairOrder(usize),
    #[error("figure5 is defined for n >= -1, got {0}")]
    Figure5Range(i64),
    #[error("diagram has no chords")]
    NoChords,
    #[error("diagram must consist of dashed arrows only")]
    NotAllDashed,
    #[error("cannot parse `{0}`")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwistFamily {
    /// `O`: odd crossing counts `2k - 1`.
    Odd,
    /// `E`: even crossing counts `2k`.
    Even,
    /// `F`: `|k|` parallel arrows.
    Fractional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IntervalOrder {
    /// `S`: second-interval endpoints in slot order.
    Same,
    /// `B`: second-interval endpoints in reverse slot order.
    Reversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistAxisType {
    pub family: TwistFamily,
    pub order: IntervalOrder,
    pub direction: Direction,
}

impl TwistAxisType {
    pub fn new(family: TwistFamily, order: IntervalOrder, direction: Direction) -> Self {
        Self { family, order, direction }
    }

    pub fn is_regular(&self) -> bool {
        self.family != TwistFamily::Fractional
    }

    /// All twelve types, `O` then `E` then `F`.
    pub fn all() -> Vec<Self> {
        let mut out = Vec::new();
        for family in [TwistFamily::Odd, TwistFamily::Even, TwistFamily::Fractional] {
            for order in [IntervalOrder::Same, IntervalOrder::Reversed] {
                for direction in [Direction::Right, Direction::Left] {
                    out.push(Self { family, order, direction });
                }
            }
        }
        out
    }
}

impl fmt::Display for TwistAxisType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = match self.family {
            TwistFamily::Odd => 'O',
            TwistFamily::Even => 'E',
            TwistFamily::Fractional => 'F',
        };
        let y = match self.order {
            IntervalOrder::Same => 'S',
            IntervalOrder::Reversed => 'B',
        };
        write!(f, "{x}{y}{}", self.direction.as_char())
    }
}

impl FromStr for TwistAxisType {
    type Err = TwistError;

    fn from_str(s: &str) -> Result<Self, TwistError> {
        let bad = || TwistError::Parse(s.to_string());
        let c: Vec<char> = s.trim().chars().collect();
        if c.len() != 3 {
            return Err(bad());
        }
        let family = match c[0] {
            'O' => TwistFamily::Odd,
            'E' => TwistFamily::Even,
            'F' => TwistFamily::Fractional,
            _ => return Err(bad()),
        };
        let order = match c[1] {
            'S' => IntervalOrder::Same,
            'B' => IntervalOrder::Reversed,
            _ => return Err(bad()),
        };
        let direction = match c[2] {
            'R' => Direction::Right,
            'L' => Direction::Left,
            _ => return Err(bad()),
        };
        Ok(Self { family, order, direction })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockArrow {
    pub direction: Direction,
    pub sign: Sign,
    pub mark: Mark,
}

/// Arrows of one proper pair, in slot order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub arrows: Vec<BlockArrow>,
}

impl Block {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Letter {
    Sigma,
    SigmaInv,
    Chord,
}

/// The arrow for `letter` in slot `j` (1-based) of a regular block pointing `z`.
fn regular_slot(z: Direction, j: usize, letter: Letter) -> BlockArrow {
    let natural = if j % 2 == 1 { z } else { z.reversed() };
    match letter {
        Letter::Sigma => BlockArrow { direction: natural, sign: Sign::Plus, mark: Mark::Classical },
        Letter::SigmaInv => BlockArrow { direction: natural.reversed(), sign: Sign::Minus, mark: Mark::Classical },
        Letter::Chord => BlockArrow { direction: natural, sign: Sign::Plus, mark: Mark::Chord },
    }
}

/// `χ^chords σ^power` as a block.
fn regular_word(z: Direction, chords: usize, power: i64) -> Block {
    let letter = if power >= 0 { Letter::Sigma } else { Letter::SigmaInv };
    let letters = std::iter::repeat_n(Letter::Chord, chords)
        .chain(std::iter::repeat_n(letter, power.unsigned_abs() as usize));
    Block {
        arrows: letters.enumerate().map(|(i, l)| regular_slot(z, i + 1, l)).collect(),
    }
}

fn braid_exponent(family: TwistFamily, k: i64) -> i64 {
    match family {
        TwistFamily::Odd => 2 * k - 1,
        TwistFamily::Even => 2 * k,
        TwistFamily::Fractional => unreachable!("fractional blocks are not braid words"),
    }
}

/// `dashed` dashed arrows followed by the `|k|` arrows of the fractional
/// block; arrows are `(Z, +)` in the `+` regime and `(-Z, -)` otherwise.
fn fractional_word(z: Direction, regime: Sign, dashed: usize, k: i64) -> Block {
    let (direction, sign) = match regime {
        Sign::Plus => (z, Sign::Plus),
        Sign::Minus => (z.reversed(), Sign::Minus),
    };
    let arrow = |mark| BlockArrow { direction, sign, mark };
    Block {
        arrows: std::iter::repeat_n(arrow(Mark::Dashed), dashed)
            .chain(std::iter::repeat_n(arrow(Mark::Classical), k.unsigned_abs() as usize))
            .collect(),
    }
}

/// The block of the axis sequence of type `t` at `k`.
pub fn axis_block(t: TwistAxisType, k: i64) -> Block {
    match t.family {
        TwistFamily::Fractional => {
            let regime = if k > 0 { Sign::Plus } else { Sign::Minus };
            fractional_word(t.direction, regime, 0, k)
        }
        fam => regular_word(t.direction, 0, braid_exponent(fam, k)),
    }
}

/// The block and scalar `c` with `(∂^{να} v∘Φ)(k) = c · v(block)` for the
/// one-axis sequence of type `t`. For regular types the block carries
/// `α` chords and holds for every `k`; for fractional types it carries `α`
/// dashed arrows and `c = ν^α`, and needs `k ∈ ℤ^ν`.
pub fn derivative_block(t: TwistAxisType, alpha: u32, nu: Sign, k: i64) -> (Block, Sign) {
    match t.family {
        TwistFamily::Fractional => {
            (fractional_word(t.direction, nu, alpha as usize, k), nu.pow(alpha))
        }
        fam => {
            let power = braid_exponent(fam, k) + nu.to_i64() * alpha as i64;
            (regular_word(t.direction, alpha as usize, power), Sign::Plus)
        }
    }
}

/// (gap or endpoint, rank, axis, interval, place) ordering of endpoints.
type PlaceKey = (usize, usize, usize, usize, usize);

/// An interval position: in gap `gap` of the base diagram (before base
/// endpoint `gap`), ordered within the gap by `rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub gap: usize,
    pub rank: usize,
}

impl Slot {
    pub fn new(gap: usize, rank: usize) -> Self {
        Self { gap, rank }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank == 0 {
            write!(f, "{}", self.gap)
        } else {
            write!(f, "{}.{}", self.gap, self.rank)
        }
    }
}

impl FromStr for Slot {
    type Err = TwistError;

    fn from_str(s: &str) -> Result<Self, TwistError> {
        let bad = || TwistError::Parse(s.to_string());
        let s = s.trim();
        let (g, r) = s.split_once('.').unwrap_or((s, "0"));
        Ok(Self { gap: g.parse().map_err(|_| bad())?, rank: r.parse().map_err(|_| bad())? })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProperPair {
    pub first: Slot,
    pub second: Slot,
}

impl ProperPair {
    pub fn new(first: Slot, second: Slot) -> Self {
        Self { first, second }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistLattice {
    base: GaussDiagram,
    pairs: Vec<ProperPair>,
    axes: Vec<TwistAxisType>,
}

impl TwistLattice {
    pub fn new(base: GaussDiagram, pairs: Vec<ProperPair>, axes: Vec<TwistAxisType>) -> Result<Self, TwistError> {
        if pairs.len() != axes.len() {
            return Err(TwistError::AxisCount { pairs: pairs.len(), axes: axes.len() });
        }
        let max = 2 * base.len();
        for (i, p) in pairs.iter().enumerate() {
            for s in [p.first, p.second] {
                if s.gap > max {
                    return Err(TwistError::SlotOutOfRange { gap: s.gap, max });
                }
            }
            if p.first > p.second {
                return Err(TwistError::PairOrder(i));
            }
        }
        Ok(Self { base, pairs, axes })
    }

    /// One axis on the empty line.
    pub fn single(t: TwistAxisType) -> Self {
        let pair = ProperPair::new(Slot::new(0, 0), Slot::new(0, 1));
        Self { base: GaussDiagram::empty(), pairs: vec![pair], axes: vec![t] }
    }

    pub fn base(&self) -> &GaussDiagram {
        &self.base
    }

    pub fn pairs(&self) -> &[ProperPair] {
        &self.pairs
    }

    pub fn axes(&self) -> &[TwistAxisType] {
        &self.axes
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// The base with `blocks[i]` placed in pair `i`.
    pub fn place(&self, blocks: &[Block]) -> Result<GaussDiagram, TwistError> {
        if blocks.len() != self.dim() {
            return Err(TwistError::Dimension { got: blocks.len(), expected: self.dim() });
        }
        // Sort keys: gap g -> 2g, base endpoint p -> 2p + 1.
        let mut keyed: Vec<(PlaceKey, Endpoint)> = self
            .base
            .endpoints()
            .into_iter()
            .enumerate()
            .map(|(p, e)| ((2 * p + 1, 0, 0, 0, 0), e))
            .collect();
        let mut next = self.base.len();
        for (axis, (pair, block)) in self.pairs.iter().zip(blocks).enumerate() {
            let len = block.len();
            for (j, a) in block.arrows.iter().enumerate() {
                let second_place = match self.axes[axis].order {
                    IntervalOrder::Same => j,
                    IntervalOrder::Reversed => len - 1 - j,
                };
                let over_first = a.direction == Direction::Right;
                let end = |over| Endpoint { key: next, over, sign: a.sign, mark: a.mark };
                keyed.push(((2 * pair.first.gap, pair.first.rank, axis, 0, j), end(over_first)));
                keyed.push(((2 * pair.second.gap, pair.second.rank, axis, 1, second_place), end(!over_first)));
                next += 1;
            }
        }
        keyed.sort_by_key(|(k, _)| *k);
        let ends: Vec<Endpoint> = keyed.into_iter().map(|(_, e)| e).collect();
        Ok(GaussDiagram::from_endpoints(&ends)?)
    }

    /// `Φ(z)`.
    pub fn eval(&self, z: &[i64]) -> Result<GaussDiagram, TwistError> {
        if z.len() != self.dim() {
            return Err(TwistError::Dimension { got: z.len(), expected: self.dim() });
        }
        let blocks: Vec<Block> = self.axes.iter().zip(z).map(|(&t, &k)| axis_block(t, k)).collect();
        self.place(&blocks)
    }

    /// `Φ(z)` with axis `axis` replaced by `block`.
    pub fn eval_with(&self, z: &[i64], axis: usize, block: Block) -> Result<GaussDiagram, TwistError> {
        if z.len() != self.dim() || axis >= self.dim() {
            return Err(TwistError::Dimension { got: z.len(), expected: self.dim() });
        }
        let mut blocks: Vec<Block> = self.axes.iter().zip(z).map(|(&t, &k)| axis_block(t, k)).collect();
        blocks[axis] = block;
        self.place(&blocks)
    }
}

impl fmt::Display for TwistLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |", self.base)?;
        let recs: Vec<String> = self
            .pairs
            .iter()
            .zip(&self.axes)
            .map(|(p, t)| format!(" ({}, {}, {t})", p.first, p.second))
            .collect();
        write!(f, "{}", recs.join(";"))
    }
}

/// `"<gauss code> | (a, b, XYZ); (a, b, XYZ)"` with slots written `g` or `g.r`.
impl FromStr for TwistLattice {
    type Err = TwistError;

    fn from_str(s: &str) -> Result<Self, TwistError> {
        let (code, rest) = s.split_once('|').ok_or_else(|| TwistError::Parse(s.to_string()))?;
        let base: GaussDiagram = code.parse()?;
        let mut pairs = Vec::new();
        let mut axes = Vec::new();
        for rec in rest.split(';').map(str::trim).filter(|r| !r.is_empty()) {
            let inner = rec
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| TwistError::Parse(rec.to_string()))?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            let [a, b, t] = parts[..] else {
                return Err(TwistError::Parse(rec.to_string()));
            };
            pairs.push(ProperPair::new(a.parse()?, b.parse()?));
            axes.push(t.parse()?);
        }
        Self::new(base, pairs, axes)
    }
}

/// The two-strand family of Figure 5.
pub fn figure5(n: i64) -> Result<GaussDiagram, TwistError> {
    if n < -1 {
        return Err(TwistError::Figure5Range(n));
    }
    if n == -1 {
        return Ok("U1- O1-".parse()?);
    }
    let n = n as usize;
    let mut ends = Vec::with_capacity(2 * n);
    for second in [false, true] {
        for i in 0..n {
            // Arrow i+1 starts over when i+1 is odd.
            let over = (i % 2 == 0) != second;
            ends.push(Endpoint { key: i, over, sign: Sign::Plus, mark: Mark::Classical });
        }
    }
    Ok(GaussDiagram::from_endpoints(&ends)?)
}

/// Sign of a chord read as if it pointed right.
fn normalized_chord_sign(a: &Arrow) -> Sign {
    match a.direction() {
        Direction::Right => a.sign,
        Direction::Left => -a.sign,
    }
}

/// Places each marked arrow of `d` selected by `pick` in its own proper
/// pair over the diagram of the remaining arrows.
fn split_marked(d: &GaussDiagram, pick: impl Fn(&Arrow) -> bool) -> (GaussDiagram, Vec<(ProperPair, Arrow)>) {
    let keep: u64 = d
        .arrows()
        .iter()
        .enumerate()
        .filter(|(_, a)| !pick(a))
        .fold(0, |m, (i, _)| m | 1 << i);
    let base = d.subdiagram(keep);
    let mut base_before = vec![0usize; 2 * d.len() + 1];
    let mut is_base = vec![false; 2 * d.len()];
    for a in d.arrows().iter().filter(|a| !pick(a)) {
        is_base[a.over] = true;
        is_base[a.under] = true;
    }
    for p in 0..2 * d.len() {
        base_before[p + 1] = base_before[p] + is_base[p] as usize;
    }
    let slot = |p: usize| Slot::new(base_before[p], p);
    let picked = d
        .arrows()
        .iter()
        .filter(|a| pick(a))
        .map(|a| (ProperPair::new(slot(a.left()), slot(a.right())), *a))
        .collect();
    (base, picked)
}

/// `Φ_K` with `(∂^{να} Φ_K)(0) = K` for `α = (1,…,1)`, `ν = (+,…,+)`: one
/// `OS` axis per chord, pointing right for a chord of normalized sign `+`.
pub fn integrate_chords(k: &GaussDiagram) -> Result<(TwistLattice, MultiIndex), TwistError> {
    let (base, picked) = split_marked(k, |a| a.mark == Mark::Chord);
    if picked.is_empty() {
        return Err(TwistError::NoChords);
    }
    let mut pairs = Vec::new();
    let mut axes = Vec::new();
    for (pair, a) in picked {
        let z = match normalized_chord_sign(&a) {
            Sign::Plus => Direction::Right,
            Sign::Minus => Direction::Left,
        };
        pairs.push(pair);
        axes.push(TwistAxisType::new(TwistFamily::Odd, IntervalOrder::Same, z));
    }
    let m = axes.len();
    Ok((TwistLattice::new(base, pairs, axes)?, MultiIndex::forward(vec![1; m])))
}

/// `Φ_D` for an all-dashed `D`: one `FS` axis per arrow, `Z` the arrow's
/// direction when signed `+` and the opposite when signed `-`; `α = 1`,
/// `ν` the arrow signs. Then `I(∂^{να} Φ_D(0)) = (-1)^{#-} D`.
pub fn integrate_dashed(d: &GaussDiagram) -> Result<(TwistLattice, MultiIndex), TwistError> {
    if d.is_empty() {
        return Err(TwistError::NotAllDashed);
    }
    if d.arrows().iter().any(|a| a.mark != Mark::Dashed) {
        return Err(TwistError::NotAllDashed);
    }
    let (base, picked) = split_marked(d, |_| true);
    let mut pairs = Vec::new();
    let mut axes = Vec::new();
    let mut nu = Vec::new();
    for (pair, a) in picked {
        let z = match a.sign {
            Sign::Plus => a.direction(),
            Sign::Minus => a.direction().reversed(),
        };
        pairs.push(pair);
        axes.push(TwistAxisType::new(TwistFamily::Fractional, IntervalOrder::Same, z));
        nu.push(a.sign);
    }
    let m = axes.len();
    let idx = MultiIndex::new(vec![1; m], nu).expect("equal lengths");
    Ok((TwistLattice::new(base, pairs, axes)?, idx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, LaurentPoly};
    use crate::bracket::StateSum;
    use crate::calculus::{derivative, poly_degree_evidence};
    use crate::gauss::FormalSum;

    fn gd(s: &str) -> GaussDiagram {
        s.parse().unwrap()
    }

    fn t(s: &str) -> TwistAxisType {
        s.parse().unwrap()
    }

    #[test]
    fn axis_type_text() {
        for ty in TwistAxisType::all() {
            assert_eq!(ty.to_string().parse::<TwistAxisType>().unwrap(), ty);
        }
        assert_eq!(TwistAxisType::all().len(), 12);
        assert!("OXR".parse::<TwistAxisType>().is_err());
    }

    #[test]
    fn block_examples() {
        assert!(axis_block(t("FSR"), 0).is_empty());
        let b = axis_block(t("FSR"), 3);
        assert_eq!(b.len(), 3);
        assert!(b.arrows.iter().all(|a| a.sign == Sign::Plus && a.direction == Direction::Right));
        assert_eq!(TwistLattice::single(t("FSR")).eval(&[3]).unwrap(), gd("O1+ O2+ O3+ U1+ U2+ U3+"));
        assert_eq!(TwistLattice::single(t("FBR")).eval(&[2]).unwrap(), gd("O1+ O2+ U2+ U1+"));
        let one = axis_block(t("OSR"), 1);
        assert_eq!(one.arrows, vec![BlockArrow { direction: Direction::Right, sign: Sign::Plus, mark: Mark::Classical }]);
        let zero = axis_block(t("OSR"), 0);
        assert_eq!(zero.len(), 1);
        assert_eq!(zero.arrows[0].sign, Sign::Minus);
        assert_eq!(axis_block(t("ESL"), -2).len(), 4);
        assert!(axis_block(t("EBR"), 0).is_empty());
    }

    #[test]
    fn figure5_family() {
        assert_eq!(figure5(3).unwrap(), gd("O1+ U2+ O3+ U1+ O2+ U3+"));
        assert_eq!(figure5(0).unwrap(), GaussDiagram::empty());
        assert_eq!(figure5(-1).unwrap(), gd("U1- O1-"));
        assert_eq!(figure5(-2), Err(TwistError::Figure5Range(-2)));
        let e = StateSum::default();
        for n in -1..=1 {
            assert_eq!(e.jones_kauffman(&figure5(n).unwrap()).unwrap(), LaurentPoly::one());
        }
        assert_eq!(
            e.jones_kauffman(&figure5(2).unwrap()).unwrap(),
            LaurentPoly::from_terms([(-4, 1), (-6, 1), (-10, -1)])
        );
    }

    #[test]
    fn figure5_recursion() {
        let e = StateSum::default();
        let br = |n| e.kauffman_bracket(&figure5(n).unwrap()).unwrap();
        for n in 1..=14 {
            let rhs = &LaurentPoly::monomial(2, 1) * &br(n - 2)
                + &LaurentPoly::neg_a_pow(-3 * (n - 2)) * &LaurentPoly::from_terms([(0, 1), (-4, -1)]);
            assert_eq!(br(n), rhs, "n = {n}");
        }
    }

    #[test]
    fn fractional_axis_matches_figure5() {
        let e = StateSum::default();
        let l = TwistLattice::single(t("FSR"));
        for n in -1..=6 {
            let a = e.jones_kauffman(&l.eval(&[n]).unwrap()).unwrap();
            assert_eq!(a, e.jones_kauffman(&figure5(n).unwrap()).unwrap(), "n = {n}");
        }
        assert_eq!(l.eval(&[-1]).unwrap(), figure5(-1).unwrap());
    }

    #[test]
    fn lattice_text_and_errors() {
        let l: TwistLattice = "O1+ U1+ | (0, 2, OSR); (1, 1.1, FBL)".parse().unwrap();
        assert_eq!(l.dim(), 2);
        assert_eq!(l.to_string(), "O1+ U1+ | (0, 2, OSR); (1, 1.1, FBL)");
        assert_eq!(l.to_string().parse::<TwistLattice>().unwrap(), l);
        let empty: TwistLattice = " | (0, 0.1, FSR)".parse().unwrap();
        assert_eq!(empty.eval(&[1]).unwrap(), gd("O1+ U1+"));
        assert_eq!("O1+ U1+ | (0, 3, OSR)".parse::<TwistLattice>(), Err(TwistError::SlotOutOfRange { gap: 3, max: 2 }));
        assert_eq!("O1+ U1+ | (2, 1, OSR)".parse::<TwistLattice>(), Err(TwistError::PairOrder(0)));
        assert!("O1+ U1+ | (0, 1)".parse::<TwistLattice>().is_err());
        assert!(matches!(l.eval(&[0]), Err(TwistError::Dimension { .. })));
    }

    #[test]
    fn axes_commute() {
        let l: TwistLattice = "O1+ U2- O2- U1+ | (0, 3, ESR); (1, 2, FBL); (2.1, 4, OBL)".parse().unwrap();
        let z = [2, -1, 1];
        let direct = l.eval(&z).unwrap();
        // Re-listing the pairs in another order is the same lattice up to axis labels.
        let perm = [2usize, 0, 1];
        let p = TwistLattice::new(
            l.base().clone(),
            perm.iter().map(|&i| l.pairs()[i]).collect(),
            perm.iter().map(|&i| l.axes()[i]).collect(),
        )
        .unwrap();
        let zp: Vec<i64> = perm.iter().map(|&i| z[i]).collect();
        assert_eq!(p.eval(&zp).unwrap(), direct);
    }

    fn crossing_change(d: &GaussDiagram, i: usize) -> GaussDiagram {
        let mut arrows = d.arrows().to_vec();
        arrows[i] = Arrow { sign: -arrows[i].sign, ..arrows[i].reversed() };
        GaussDiagram::from_arrows(arrows).unwrap()
    }

    #[test]
    fn regular_steps_collapse_by_rii() {
        for ty in TwistAxisType::all().into_iter().filter(|t| t.is_regular()) {
            let l = TwistLattice::single(ty);
            for k in -3..=3 {
                let (a, b) = (l.eval(&[k]).unwrap(), l.eval(&[k + 1]).unwrap());
                if a.len() == b.len() {
                    // σ⁻¹ to σ: a single crossing change.
                    assert_eq!(crossing_change(&a, 0), b, "{ty} k={k}");
                    continue;
                }
                let (long, short) = if a.len() > b.len() { (a, b) } else { (b, a) };
                assert_eq!(long.len(), short.len() + 2);
                // Changing the first crossing of the longer block creates an RII pair with the second.
                let changed = crossing_change(&long, 0);
                assert!(changed.is_r2_pair(0, 1), "{ty} k={k}");
                assert_eq!(changed.delete_r2_pair(0, 1).unwrap(), short, "{ty} k={k}");
            }
        }
    }

    fn base_lattice(ty: TwistAxisType) -> TwistLattice {
        // A pair threaded through a nontrivial base.
        TwistLattice::new(gd("O1- U2+ O3+ U1- O2+ U3+"), vec![ProperPair::new(Slot::new(1, 0), Slot::new(4, 0))], vec![ty])
            .unwrap()
    }

    fn check_differentiation(ty: TwistAxisType, l: &TwistLattice, ranks: &[u32]) {
        let e = StateSum::default();
        type Inv<'a> = Box<dyn Fn(&GaussDiagram) -> InvValue + Sync + 'a>;
        let invs: [(&str, Inv); 2] = [
            ("f", Box::new(|d| InvValue::Poly(e.jones_kauffman_marked(d).unwrap()))),
            ("v2", Box::new(|d| InvValue::Rat(e.vk_marked(d, 2).unwrap()))),
        ];
        for (name, inv) in &invs {
            let g = |z: &[i64]| inv(&l.eval(z).unwrap());
            for nu in [Sign::Plus, Sign::Minus] {
                for k in -3i64..=3 {
                    if !ty.is_regular() && nu.to_i64() * k < 0 {
                        continue;
                    }
                    for &alpha in ranks {
                        let idx = MultiIndex::new(vec![alpha], vec![nu]).unwrap();
                        let lhs = derivative(&g, &idx, &[k]);
                        let (block, c) = derivative_block(ty, alpha, nu, k);
                        let rhs = inv(&l.eval_with(&[k], 0, block).unwrap());
                        let rhs = if c == Sign::Minus { rhs.negate() } else { rhs };
                        assert_eq!(lhs, rhs, "{name} {ty} nu={nu} k={k} alpha={alpha}");
                    }
                }
            }
        }
    }

    #[derive(Clone, Debug, PartialEq)]
    enum InvValue {
        Poly(LaurentPoly),
        Rat(crate::algebra::BigRational),
    }

    impl InvValue {
        fn negate(self) -> Self {
            match self {
                Self::Poly(p) => Self::Poly(-&p),
                Self::Rat(r) => Self::Rat(-r),
            }
        }
    }

    impl crate::algebra::AbelianGroup for InvValue {
        fn zero_value() -> Self {
            Self::Rat(rat(0))
        }
        fn add(&self, other: &Self) -> Self {
            match (self, other) {
                (Self::Poly(a), Self::Poly(b)) => Self::Poly(a + b),
                (Self::Rat(a), Self::Rat(b)) => Self::Rat(a + b),
                (Self::Rat(a), Self::Poly(b)) | (Self::Poly(b), Self::Rat(a)) => {
                    assert_eq!(*a, rat(0));
                    Self::Poly(b.clone())
                }
            }
        }
        fn neg(&self) -> Self {
            self.clone().negate()
        }
    }

    #[test]
    fn differentiation_lemmas_on_empty_base() {
        for ty in TwistAxisType::all() {
            check_differentiation(ty, &TwistLattice::single(ty), &[0, 1, 2, 3]);
        }
    }

    #[test]
    fn differentiation_lemmas_on_knotted_base() {
        for ty in TwistAxisType::all() {
            check_differentiation(ty, &base_lattice(ty), &[1, 2]);
        }
    }

    #[test]
    fn chord_sign_rule() {
        // The j-th chord points Z for odd j: normalized sign (-1)^{j-1} ε_Z.
        for ty in [t("OSR"), t("EBL")] {
            let (b, _) = derivative_block(ty, 3, Sign::Plus, 1);
            let eps = if ty.direction == Direction::Right { 1 } else { -1 };
            let l = TwistLattice::single(ty);
            let d = l.place(&[b]).unwrap();
            let mut chords: Vec<&Arrow> = d.arrows().iter().filter(|a| a.mark == Mark::Chord).collect();
            chords.sort_by_key(|a| a.left());
            for (j, a) in chords.iter().enumerate() {
                let expect = if j % 2 == 0 { eps } else { -eps };
                assert_eq!(normalized_chord_sign(a).to_i64(), expect);
            }
        }
    }

    #[test]
    fn integrate_chords_recovers_diagram() {
        for code in ["sO1+ sU1+", "sU1+ sO1+", "sO1- O2+ sU1- U2+", "sO1+ sO2- U3+ sU1+ O3+ sU2-"] {
            let k = gd(code);
            let (l, idx) = integrate_chords(&k).unwrap();
            let g = |z: &[i64]| FormalSum::single(l.eval(z).unwrap());
            let lhs = derivative(&g, &idx, &vec![0; l.dim()]);
            assert_eq!(lhs, FormalSum::expand_marks(&k), "{code}");
        }
        let (l, _) = integrate_chords(&gd("sO1- sU1-")).unwrap();
        assert_eq!(l.axes()[0], t("OSL"));
        assert_eq!(integrate_chords(&gd("O1+ U1+")), Err(TwistError::NoChords));
    }

    #[test]
    fn integrate_dashed_axes() {
        let (l, idx) = integrate_dashed(&gd("dO1+ dU1+")).unwrap();
        assert_eq!(l.axes()[0], t("FSR"));
        assert_eq!(idx.nu(), &[Sign::Plus]);
        let (l, _) = integrate_dashed(&gd("dO1- dU1-")).unwrap();
        assert_eq!(l.axes()[0], t("FSL"));
        assert_eq!(integrate_dashed(&gd("dO1+ U2+ dU1+ O2+")), Err(TwistError::NotAllDashed));
    }

    #[test]
    fn regular_sequences_have_degree_k() {
        let e = StateSum::default();
        for ty in TwistAxisType::all().into_iter().filter(|t| t.is_regular()) {
            let l = base_lattice(ty);
            for k in [2usize, 3] {
                let f = |z: &[i64]| e.vk(&l.eval(z).unwrap(), k).unwrap();
                let r = poly_degree_evidence(&f, &[(-3, 3)], k as u32).unwrap();
                assert!(r.consistent(), "{ty} k={k}");
            }
        }
        // v_2 really has degree 2 on the figure-5 reindexing.
        let f = |z: &[i64]| e.vk(&figure5(2 * z[0]).unwrap(), 2).unwrap();
        assert!(poly_degree_evidence(&f, &[(0, 5)], 2).unwrap().consistent());
        assert_eq!(f(&[1]), rat(-24));
    }
}
