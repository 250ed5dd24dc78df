//! Kauffman bracket by exhaustive state sum, the Jones-Kauffman polynomial
//! `f = (-A)^{-3w} <D>`, and the coefficients `v_k` of `f(e^x)`.
//!
//! Smoothing convention: at a crossing of sign `+` the A-smoothing is the
//! oriented reconnection (the incoming over-arc continues as the outgoing
//! under-arc and vice versa); at a crossing of sign `-` it is the
//! disoriented one (incoming ends join, outgoing ends join). This is the
//! rule that gives `<positive kink> = -A^3` and `<negative kink> = -A^{-3}`.
//!
//! Loops are counted on the abstract curve, so virtual crossings never
//! enter: the line is cut into `2n + 1` arcs, each smoothing glues arc ends,
//! and every glued component other than the one holding the two rays is a
//! closed loop.

use num_rational::BigRational;
use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{exp_substitute, AbelianGroup, LaurentPoly, TruncatedSeries};
use crate::gauss::{FormalSum, GaussDiagram, GaussError};
use crate::sign::Sign;

pub const DEFAULT_STATE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BracketError {
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error("{arrows} arrows exceed the state-sum limit of {limit}")]
    TooManyArrows { arrows: usize, limit: usize },
}

/// One bit per arrow in canonical order: bit `i` clear means arrow `i`
/// takes its A-smoothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmoothingState {
    bits: u64,
    len: usize,
}

impl SmoothingState {
    pub fn new(bits: u64, len: usize) -> Self {
        assert!(len <= 64 && (len == 64 || bits >> len == 0), "state wider than the diagram");
        Self { bits, len }
    }

    pub fn is_a(&self, i: usize) -> bool {
        self.bits >> i & 1 == 0
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn a_count(&self) -> usize {
        self.len - self.bits.count_ones() as usize
    }
}

/// Per-crossing data for the inner loop: endpoint positions and sign.
#[derive(Clone, Copy)]
struct Crossing {
    over: usize,
    under: usize,
    positive: bool,
}

fn crossings(d: &GaussDiagram) -> Result<Vec<Crossing>, GaussError> {
    if !d.is_classical() {
        return Err(GaussError::MarkedDiagram);
    }
    Ok(d
        .arrows()
        .iter()
        .map(|a| Crossing { over: a.over, under: a.under, positive: a.sign == Sign::Plus })
        .collect())
}

fn find(parent: &mut [u8], mut x: u8) -> u8 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

/// Closed loops left after smoothing every crossing according to `state`.
fn loops_in_state(cross: &[Crossing], state: u64, parent: &mut [u8]) -> usize {
    let arcs = parent.len();
    for (i, p) in parent.iter_mut().enumerate() {
        *p = i as u8;
    }
    let mut components = arcs;
    let mut join = |parent: &mut [u8], a: usize, b: usize| {
        let (ra, rb) = (find(parent, a as u8), find(parent, b as u8));
        if ra != rb {
            parent[ra as usize] = rb;
            components -= 1;
        }
    };
    // Arc `p` ends at endpoint `p`; arc `p + 1` starts there.
    for (i, c) in cross.iter().enumerate() {
        let a_smoothing = state >> i & 1 == 0;
        if a_smoothing == c.positive {
            join(parent, c.over, c.under + 1);
            join(parent, c.under, c.over + 1);
        } else {
            join(parent, c.over, c.under);
            join(parent, c.over + 1, c.under + 1);
        }
    }
    components - 1
}

/// Closed loops for an explicit state; exposed for inspection and tests.
pub fn count_loops(d: &GaussDiagram, state: SmoothingState) -> Result<usize, GaussError> {
    let cross = crossings(d)?;
    assert_eq!(state.len(), cross.len(), "state length must match the arrow count");
    let mut parent = vec![0u8; 2 * cross.len() + 1];
    Ok(loops_in_state(&cross, state.bits, &mut parent))
}

/// State-sum engine settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateSum {
    pub limit: usize,
    pub parallel: bool,
}

impl Default for StateSum {
    fn default() -> Self {
        Self { limit: DEFAULT_STATE_LIMIT, parallel: true }
    }
}

const CHUNK_BITS: usize = 12;

impl StateSum {
    pub fn with_limit(limit: usize) -> Self {
        Self { limit, ..Self::default() }
    }

    pub fn sequential(self) -> Self {
        Self { parallel: false, ..self }
    }

    /// Counts of states by (number of A-smoothings, number of loops),
    /// flattened as `a * (n + 1) + loops`.
    fn histogram(&self, cross: &[Crossing]) -> Vec<u64> {
        let n = cross.len();
        let width = n + 1;
        let total: u64 = 1 << n;
        let chunk_len: u64 = 1 << CHUNK_BITS.min(n);
        let chunks = total / chunk_len;
        let run = |chunk: u64| {
            let mut hist = vec![0u64; width * width];
            let mut parent = vec![0u8; 2 * n + 1];
            let start = chunk * chunk_len;
            for state in start..start + chunk_len {
                let loops = loops_in_state(cross, state, &mut parent);
                let a = n - state.count_ones() as usize;
                hist[a * width + loops] += 1;
            }
            hist
        };
        let merge = |mut a: Vec<u64>, b: Vec<u64>| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        };
        if self.parallel && chunks > 1 {
            (0..chunks)
                .into_par_iter()
                .map(run)
                .reduce(|| vec![0u64; width * width], merge)
        } else {
            (0..chunks).map(run).fold(vec![0u64; width * width], merge)
        }
    }

    /// `<D> = sum over states of A^{#A - #B} d^{loops}`, `d = -A^2 - A^{-2}`.
    pub fn kauffman_bracket(&self, d: &GaussDiagram) -> Result<LaurentPoly, BracketError> {
        let cross = crossings(d)?;
        let n = cross.len();
        if n > self.limit || n > 40 {
            return Err(BracketError::TooManyArrows { arrows: n, limit: self.limit.min(40) });
        }
        let hist = self.histogram(&cross);
        let width = n + 1;
        let loop_value = LaurentPoly::loop_value();
        let mut loop_powers = vec![LaurentPoly::one()];
        for l in 1..width {
            loop_powers.push(&loop_powers[l - 1] * &loop_value);
        }
        let mut out = LaurentPoly::zero();
        for a in 0..width {
            let exp = 2 * a as i64 - n as i64;
            for (l, power) in loop_powers.iter().enumerate() {
                let count = hist[a * width + l];
                if count > 0 {
                    out = &out + &power.shift(exp).scale(&BigInt::from(count));
                }
            }
        }
        Ok(out)
    }

    /// `f = (-A)^{-3 w} <D>`.
    pub fn jones_kauffman(&self, d: &GaussDiagram) -> Result<LaurentPoly, BracketError> {
        let w = d.writhe()?;
        let bracket = self.kauffman_bracket(d)?;
        Ok(&LaurentPoly::neg_a_pow(-3 * w) * &bracket)
    }

    /// `f(e^x)` up to `x^order`.
    pub fn series(&self, d: &GaussDiagram, order: usize) -> Result<TruncatedSeries, BracketError> {
        Ok(exp_substitute(&self.jones_kauffman(d)?, order))
    }

    /// Coefficient of `x^k` in `f(e^x)`.
    pub fn vk(&self, d: &GaussDiagram, k: usize) -> Result<BigRational, BracketError> {
        Ok(self.series(d, k)?.coeff(k).clone())
    }

    /// `v_k` extended to diagrams with dashed or singular arrows.
    pub fn vk_marked(&self, d: &GaussDiagram, k: usize) -> Result<BigRational, BracketError> {
        evaluate_linear(&FormalSum::expand_marks(d), |t| self.vk(t, k))
    }

    /// `f` extended to diagrams with dashed or singular arrows.
    pub fn jones_kauffman_marked(&self, d: &GaussDiagram) -> Result<LaurentPoly, BracketError> {
        evaluate_linear(&FormalSum::expand_marks(d), |t| self.jones_kauffman(t))
    }
}

/// Linear extension of an invariant: `sum coeff * inv(term)`.
pub fn evaluate_linear<V, E, F>(s: &FormalSum, inv: F) -> Result<V, E>
where
    V: AbelianGroup,
    F: Fn(&GaussDiagram) -> Result<V, E>,
{
    s.terms().try_fold(V::zero_value(), |acc, (d, c)| {
        Ok(acc.add(&inv(d)?.scale(&BigInt::from(c))))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::gauss::random::random_diagram;
    use crate::gauss::{Direction, Mark, R2Move, Strands};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gd(s: &str) -> GaussDiagram {
        s.parse().unwrap()
    }

    fn lp(t: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(t.iter().copied())
    }

    #[test]
    fn empty_and_kinks() {
        let e = StateSum::default();
        assert_eq!(e.kauffman_bracket(&GaussDiagram::empty()).unwrap(), LaurentPoly::one());
        assert_eq!(e.kauffman_bracket(&gd("O1+ U1+")).unwrap(), lp(&[(3, -1)]));
        assert_eq!(e.kauffman_bracket(&gd("U1+ O1+")).unwrap(), lp(&[(3, -1)]));
        assert_eq!(e.kauffman_bracket(&gd("O1- U1-")).unwrap(), lp(&[(-3, -1)]));
        for code in ["O1+ U1+", "O1- U1-", ""] {
            assert_eq!(e.jones_kauffman(&gd(code)).unwrap(), LaurentPoly::one());
        }
    }

    #[test]
    fn kink_loop_counts() {
        let k = gd("O1+ U1+");
        assert_eq!(count_loops(&k, SmoothingState::new(0, 1)).unwrap(), 1);
        assert_eq!(count_loops(&k, SmoothingState::new(1, 1)).unwrap(), 0);
    }

    #[test]
    fn trefoil_and_phi2() {
        let e = StateSum::default();
        let t = gd("O1+ U2+ O3+ U1+ O2+ U3+");
        assert_eq!(e.jones_kauffman(&t).unwrap(), lp(&[(-4, 1), (-12, 1), (-16, -1)]));
        let phi2 = gd("O1+ U2+ U1+ O2+");
        assert_eq!(e.jones_kauffman(&phi2).unwrap(), lp(&[(-4, 1), (-6, 1), (-10, -1)]));
        assert_eq!(e.vk(&phi2, 2).unwrap(), rat(-24));
        assert_eq!(e.vk(&phi2, 0).unwrap(), rat(1));
        assert_eq!(e.vk(&phi2, 1).unwrap(), rat(0));
    }

    #[test]
    fn errors() {
        let e = StateSum::with_limit(2);
        assert_eq!(
            e.kauffman_bracket(&gd("O1+ U2+ O3+ U1+ O2+ U3+")),
            Err(BracketError::TooManyArrows { arrows: 3, limit: 2 })
        );
        assert_eq!(
            e.jones_kauffman(&gd("sO1+ sU1+")),
            Err(BracketError::Gauss(GaussError::MarkedDiagram))
        );
    }

    #[test]
    fn linear_extension() {
        let e = StateSum::default();
        let d = gd("O1+ U2+ O3+ U1+ O2+ U3+");
        let inv = |t: &GaussDiagram| e.jones_kauffman(t);
        assert_eq!(evaluate_linear(&FormalSum::single(d.clone()), inv).unwrap(), inv(&d).unwrap());
        let mut zero = FormalSum::single(d.clone());
        zero.add_term(d, -1);
        assert!(evaluate_linear(&zero, inv).unwrap().is_zero());
        // One chord on an otherwise empty line: both resolutions are kinks.
        let chord = FormalSum::expand_marks(&gd("sO1+ sU1+"));
        assert!(evaluate_linear(&chord, inv).unwrap().is_zero());
    }

    #[test]
    fn parallel_matches_sequential() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let d = random_diagram(&mut rng, 14, &[Mark::Classical]);
            let par = StateSum::default().kauffman_bracket(&d).unwrap();
            let seq = StateSum::default().sequential().kauffman_bracket(&d).unwrap();
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn invariance_under_moves() {
        let e = StateSum::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(0..=6);
            let d = random_diagram(&mut rng, n, &[Mark::Classical]);
            let f = e.jones_kauffman(&d).unwrap();
            let a = rng.gen_range(0..=2 * n);
            let b = rng.gen_range(a..=2 * n);
            let mv = R2Move {
                slot_a: a,
                slot_b: b,
                direction: if rng.gen() { Direction::Left } else { Direction::Right },
                sign: if rng.gen() { Sign::Plus } else { Sign::Minus },
                strands: if rng.gen() { Strands::Parallel } else { Strands::Antiparallel },
            };
            assert_eq!(e.jones_kauffman(&d.insert_r2_pair(mv).unwrap()).unwrap(), f);
            for i in 0..n {
                assert_eq!(e.jones_kauffman(&d.reverse_arrow(i).unwrap()).unwrap(), f);
            }
            let kink_sign = if rng.gen() { Sign::Plus } else { Sign::Minus };
            let k = d.insert_kink(rng.gen_range(0..=2 * n), Direction::Right, kink_sign).unwrap();
            let factor = LaurentPoly::monomial(3 * kink_sign.to_i64(), -1);
            assert_eq!(e.kauffman_bracket(&k).unwrap(), &factor * &e.kauffman_bracket(&d).unwrap());
            assert_eq!(e.jones_kauffman(&k).unwrap(), f);
        }
    }

    #[test]
    fn vk_has_kauffman_degree_k() {
        use crate::gauss::random::random_with_marks;
        let e = StateSum::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [2usize, 3] {
            let mut witness = false;
            for _ in 0..30 {
                let extra = rng.gen_range(0..=3);
                let mut marks = vec![Mark::Chord; k + 1];
                marks.extend(std::iter::repeat_n(Mark::Classical, extra));
                let d = random_with_marks(&mut rng, &marks);
                assert_eq!(e.vk_marked(&d, k).unwrap(), rat(0), "{d}");
                let fewer = random_with_marks(&mut rng, &marks[1..]);
                witness |= e.vk_marked(&fewer, k).unwrap() != rat(0);
            }
            assert!(witness, "no diagram with {k} chords detected v_{k}");
        }
    }

    #[test]
    fn lemma_recursion_small() {
        // <Phi(n)> = A^2 <Phi(n-2)> + (-A)^{-3(n-2)} (1 - A^{-4}) with Phi(-1) = U1- O1-.
        let e = StateSum::default();
        let phi = |n: i64| -> GaussDiagram {
            match n {
                -1 => gd("U1- O1-"),
                0 => GaussDiagram::empty(),
                1 => gd("O1+ U1+"),
                2 => gd("O1+ U2+ U1+ O2+"),
                3 => gd("O1+ U2+ O3+ U1+ O2+ U3+"),
                _ => unreachable!(),
            }
        };
        for n in 1..=3 {
            let lhs = e.kauffman_bracket(&phi(n)).unwrap();
            let rhs = &lp(&[(2, 1)]) * &e.kauffman_bracket(&phi(n - 2)).unwrap()
                + &LaurentPoly::neg_a_pow(-3 * (n - 2)) * &lp(&[(0, 1), (-4, -1)]);
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }
}
