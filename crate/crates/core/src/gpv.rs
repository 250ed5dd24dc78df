//! The subdiagram maps `I` and `I⁻¹` between classical and dashed formal
//! sums, and harnesses for the two finite-type notions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::binomial;
use crate::gauss::random::random_with_marks;
use crate::gauss::{Arrow, FormalSum, GaussDiagram, Mark};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GpvError {
    #[error("term `{0}` has a chord; I is defined on classical and dashed arrows")]
    ChordPresent(String),
    #[error("term `{0}` has a non-dashed arrow")]
    NotAllDashed(String),
}

/// A set of arrows of a diagram, as a bitmask over canonical indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ArrowSubset {
    mask: u64,
    len: usize,
}

impl ArrowSubset {
    pub fn new(mask: u64, len: usize) -> Self {
        assert!(len < 64 && mask >> len == 0, "subset wider than the diagram");
        Self { mask, len }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask >> i & 1 == 1
    }

    /// Arrows left out.
    pub fn complement_size(&self) -> usize {
        self.len - self.mask.count_ones() as usize
    }

    /// Every subset of the arrows selected by `within`.
    pub fn subsets_of(within: u64, len: usize) -> impl Iterator<Item = ArrowSubset> {
        // Standard submask enumeration, from `within` down to 0.
        let mut next = Some(within);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == 0 { None } else { Some((cur - 1) & within) };
            Some(ArrowSubset::new(cur, len))
        })
    }
}

fn mask_where(d: &GaussDiagram, pred: impl Fn(&Arrow) -> bool) -> u64 {
    d.arrows()
        .iter()
        .enumerate()
        .filter(|(_, a)| pred(a))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// `I(D) = Σ_{D' ⊂ D} i(D')` extended linearly; dashed arrows already in
/// `D` appear in every summand.
pub fn map_i(s: &FormalSum) -> Result<FormalSum, GpvError> {
    let mut out = FormalSum::zero();
    for (d, c) in s.terms() {
        if d.count_marked(Mark::Chord) > 0 {
            return Err(GpvError::ChordPresent(d.to_string()));
        }
        let dashed = mask_where(d, |a| a.mark == Mark::Dashed);
        let classical = mask_where(d, |a| a.mark == Mark::Classical);
        for sub in ArrowSubset::subsets_of(classical, d.len()) {
            out.add_term(d.subdiagram(sub.mask() | dashed).with_all_marks(Mark::Dashed), c);
        }
    }
    Ok(out)
}

/// `I⁻¹(A) = Σ_{A' ⊂ A} (-1)^{|A - A'|} A'` with the arrows of `A'` made classical.
pub fn map_i_inverse(s: &FormalSum) -> Result<FormalSum, GpvError> {
    let mut out = FormalSum::zero();
    for (d, c) in s.terms() {
        if d.count_marked(Mark::Dashed) != d.len() {
            return Err(GpvError::NotAllDashed(d.to_string()));
        }
        let all = mask_where(d, |_| true);
        for sub in ArrowSubset::subsets_of(all, d.len()) {
            let sign = if sub.complement_size() % 2 == 0 { 1 } else { -1 };
            out.add_term(d.subdiagram(sub.mask()).with_all_marks(Mark::Classical), sign * c);
        }
    }
    Ok(out)
}

/// Every diagram with `n` arrows of the given mark: all matchings,
/// directions and signs.
pub fn all_diagrams(n: usize, mark: Mark) -> Vec<GaussDiagram> {
    fn matchings(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let first = free.remove(0);
        for i in 0..free.len() {
            let other = free.remove(i);
            cur.push((first, other));
            matchings(free, cur, out);
            cur.pop();
            free.insert(i, other);
        }
        free.insert(0, first);
    }
    let mut ms = Vec::new();
    matchings(&mut (0..2 * n).collect(), &mut Vec::new(), &mut ms);
    let mut out = Vec::new();
    for m in ms {
        for flips in 0..1u32 << n {
            for signs in 0..1u32 << n {
                let arrows = m
                    .iter()
                    .enumerate()
                    .map(|(i, &(a, b))| {
                        let (over, under) = if flips >> i & 1 == 0 { (a, b) } else { (b, a) };
                        let sign = if signs >> i & 1 == 0 { Sign::Plus } else { Sign::Minus };
                        Arrow { over, under, sign, mark }
                    })
                    .collect();
                out.push(GaussDiagram::from_arrows(arrows).expect("matching"));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KauffmanTrial {
    pub diagram: String,
    #[serde(serialize_with = "crate::experiments::ser_rational")]
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KauffmanTypeReport {
    /// Each trial diagram carries `k + 1` chords.
    pub k: usize,
    pub seed: u64,
    pub trials: Vec<KauffmanTrial>,
}

impl KauffmanTypeReport {
    pub fn all_zero(&self) -> bool {
        self.trials.iter().all(|t| t.value.is_zero())
    }

    pub fn nonzero(&self) -> usize {
        self.trials.iter().filter(|t| !t.value.is_zero()).count()
    }
}

/// Evaluates `v` on the expansion of `trials` random diagrams with `k + 1`
/// chords and up to `max_extra_arrows` classical arrows.
pub fn kauffman_type_report<E, F>(
    v: F,
    k: usize,
    trials: usize,
    max_extra_arrows: usize,
    seed: u64,
) -> Result<KauffmanTypeReport, E>
where
    F: Fn(&GaussDiagram) -> Result<BigRational, E> + Sync,
    E: Send,
{
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let diagrams: Vec<GaussDiagram> = (0..trials)
        .map(|_| {
            let extra = rng.gen_range(0..=max_extra_arrows);
            let mut marks = vec![Mark::Chord; k + 1];
            marks.extend(std::iter::repeat_n(Mark::Classical, extra));
            random_with_marks(&mut rng, &marks)
        })
        .collect();
    let trials = diagrams
        .into_par_iter()
        .map(|d| {
            let value = crate::bracket::evaluate_linear(&FormalSum::expand_marks(&d), &v)?;
            Ok(KauffmanTrial { diagram: d.to_string(), value })
        })
        .collect::<Result<Vec<_>, E>>()?;
    Ok(KauffmanTypeReport { k, seed, trials })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub alpha: u32,
    #[serde(serialize_with = "crate::experiments::ser_rational")]
    pub value: BigRational,
    /// `None` when the derivative vanishes.
    pub sign: Option<Sign>,
}

/// `(∂^α g)(0)` for `g(z) = seq(z + shift)` and each `α` in `alphas`.
pub fn gpv_derivative_scan<E, F>(
    seq: F,
    shift: i64,
    alphas: std::ops::RangeInclusive<u32>,
) -> Result<Vec<ScanRow>, E>
where
    F: Fn(i64) -> Result<BigRational, E> + Sync,
    E: Send,
{
    let top = *alphas.end() as i64;
    let values = (0..=top)
        .into_par_iter()
        .map(|j| seq(shift + j))
        .collect::<Result<Vec<_>, E>>()?;
    Ok(alphas
        .map(|alpha| {
            let value: BigRational = (0..=alpha)
                .map(|j| {
                    let c = BigRational::from_integer(binomial(alpha, j));
                    let term = c * &values[j as usize];
                    if (alpha + j) % 2 == 1 {
                        -term
                    } else {
                        term
                    }
                })
                .sum();
            let sign = if value.is_zero() {
                None
            } else if value.is_positive() {
                Some(Sign::Plus)
            } else {
                Some(Sign::Minus)
            };
            ScanRow { alpha, value, sign }
        })
        .collect())
}

/// Convenience for tests and reports: the integer `(−1)^{#−}` of a dashed diagram.
pub fn minus_count_sign(d: &GaussDiagram) -> BigInt {
    let minus = d.arrows().iter().filter(|a| a.sign == Sign::Minus).count();
    BigInt::from(if minus % 2 == 0 { 1 } else { -1 })
}
