//! Discrete derivatives `∂^{να}` of functions on `ℤ^m`, the discrete power
//! series that reconstructs a function from its derivatives at the origin,
//! and a finite-window check of polynomial degree.

use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{binomial, factorial_power_over_factorial, AbelianGroup};
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("multi-index has {alpha} orders but {nu} signs")]
    LengthMismatch { alpha: usize, nu: usize },
    #[error("point has dimension {point}, multi-index has dimension {index}")]
    DimensionMismatch { point: usize, index: usize },
    #[error("window side {side} along axis {axis} is too short for derivatives of order {order}")]
    WindowTooSmall { axis: usize, side: i64, order: u32 },
}

/// A function `ℤ^m -> V` that may be evaluated concurrently.
pub trait GridFunction<V>: Fn(&[i64]) -> V + Sync {}
impl<V, F: Fn(&[i64]) -> V + Sync> GridFunction<V> for F {}

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct MultiIndex {
    alpha: Vec<u32>,
    nu: Vec<Sign>,
}

impl MultiIndex {
    pub fn new(alpha: Vec<u32>, nu: Vec<Sign>) -> Result<Self, CalculusError> {
        if alpha.len() != nu.len() {
            return Err(CalculusError::LengthMismatch { alpha: alpha.len(), nu: nu.len() });
        }
        Ok(Self { alpha, nu })
    }

    /// All signs `+`.
    pub fn forward(alpha: Vec<u32>) -> Self {
        let nu = vec![Sign::Plus; alpha.len()];
        Self { alpha, nu }
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    pub fn nu(&self) -> &[Sign] {
        &self.nu
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// `|α|`.
    pub fn degree(&self) -> u32 {
        self.alpha.iter().sum()
    }
}

/// Every `α ∈ ℕ^m` with `|α| = total`, in lexicographic order.
pub fn compositions(total: u32, m: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            rec(left - a, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, m, &mut Vec::with_capacity(m), &mut out);
    out
}

/// Every point of the box `Π [lo_i, hi_i]`, last coordinate fastest.
fn box_points(bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(bounds.len())];
    for &(lo, hi) in bounds {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// The weighted stencil of `∂^{να}` at `z`: pairs (point, coefficient).
pub fn stencil(idx: &MultiIndex, z: &[i64]) -> Result<Vec<(Vec<i64>, BigInt)>, CalculusError> {
    if z.len() != idx.dim() {
        return Err(CalculusError::DimensionMismatch { point: z.len(), index: idx.dim() });
    }
    let bounds: Vec<(i64, i64)> = idx.alpha.iter().map(|&a| (0, a as i64)).collect();
    Ok(box_points(&bounds)
        .into_iter()
        .map(|ks| {
            let mut coeff = BigInt::from(1);
            let mut point = z.to_vec();
            for i in 0..ks.len() {
                let (a, k) = (idx.alpha[i], ks[i] as u32);
                let c = binomial(a, k);
                // ∂^{+α} f(z) = Σ (-1)^{α+k} C(α,k) f(z+k); ∂^{-α} f(z) = Σ (-1)^k C(α,k) f(z-k).
                let odd = match idx.nu[i] {
                    Sign::Plus => (a + k) % 2 == 1,
                    Sign::Minus => k % 2 == 1,
                };
                coeff *= if odd { -c } else { c };
                point[i] += idx.nu[i].to_i64() * k as i64;
            }
            (point, coeff)
        })
        .collect())
}

/// `(∂^{να} f)(z)`.
pub fn try_derivative<V, F>(f: &F, idx: &MultiIndex, z: &[i64]) -> Result<V, CalculusError>
where
    V: AbelianGroup + Send,
    F: GridFunction<V>,
{
    let terms = stencil(idx, z)?;
    let combine = |(p, c): (Vec<i64>, BigInt)| f(&p).scale(&c);
    let add = |a: V, b: V| a.add(&b);
    Ok(if terms.len() > 16 {
        terms.into_par_iter().map(combine).reduce(V::zero_value, add)
    } else {
        terms.into_iter().map(combine).fold(V::zero_value(), add)
    })
}

/// As [`try_derivative`]; panics when `z` and `idx` have different dimensions.
pub fn derivative<V, F>(f: &F, idx: &MultiIndex, z: &[i64]) -> V
where
    V: AbelianGroup + Send,
    F: GridFunction<V>,
{
    try_derivative(f, idx, z).expect("point and multi-index dimensions agree")
}

/// `Σ_α (∂^{να} f)(0) z^{να} / α!` with `ν` the orthant of `z` (`+` on zero
/// coordinates). Only `α ≤ |z|` contribute.
pub fn power_series_eval<V, F>(f: &F, z: &[i64]) -> V
where
    V: AbelianGroup + Send,
    F: GridFunction<V>,
{
    let nu: Vec<Sign> = z.iter().map(|&x| if x < 0 { Sign::Minus } else { Sign::Plus }).collect();
    let origin = vec![0i64; z.len()];
    let bounds: Vec<(i64, i64)> = z.iter().map(|&x| (0, x.abs())).collect();
    box_points(&bounds)
        .into_par_iter()
        .map(|alpha| {
            let alpha: Vec<u32> = alpha.into_iter().map(|a| a as u32).collect();
            let weight = alpha
                .iter()
                .zip(z)
                .zip(&nu)
                .fold(BigInt::from(1), |acc, ((&a, &x), &s)| acc * factorial_power_over_factorial(x, a, s));
            let idx = MultiIndex { alpha, nu: nu.clone() };
            derivative(f, &idx, &origin).scale(&weight)
        })
        .reduce(V::zero_value, |a, b| a.add(&b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness<V> {
    pub value: V,
    pub index: MultiIndex,
    pub z: Vec<i64>,
}

/// Outcome of [`poly_degree_evidence`]: evidence over a finite window only.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeReport<V> {
    pub degree: u32,
    pub checked: usize,
    pub nonzero: usize,
    /// At most [`MAX_WITNESSES`] nonzero derivatives, in scan order.
    pub witnesses: Vec<Witness<V>>,
}

impl<V> DegreeReport<V> {
    pub fn consistent(&self) -> bool {
        self.nonzero == 0
    }
}

pub const MAX_WITNESSES: usize = 16;

/// Evaluates every `∂^{να}` with `|α| = deg + 1`, both signs per axis, at
/// every base point whose stencil stays inside `window` (inclusive bounds).
pub fn poly_degree_evidence<V, F>(
    f: &F,
    window: &[(i64, i64)],
    deg: u32,
) -> Result<DegreeReport<V>, CalculusError>
where
    V: AbelianGroup + Send + Sync,
    F: GridFunction<V>,
{
    let order = deg + 1;
    for (axis, &(lo, hi)) in window.iter().enumerate() {
        if hi - lo < order as i64 {
            return Err(CalculusError::WindowTooSmall { axis, side: hi - lo, order });
        }
    }
    let m = window.len();
    let values: HashMap<Vec<i64>, V> = box_points(window)
        .into_par_iter()
        .map(|p| {
            let v = f(&p);
            (p, v)
        })
        .collect();
    let cached = |p: &[i64]| values[p].clone();

    let mut jobs = Vec::new();
    for alpha in compositions(order, m) {
        for signs in 0..1u32 << m {
            let nu: Vec<Sign> =
                (0..m).map(|i| if signs >> i & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect();
            // Base points whose stencil fits: z + α inside for +, z - α inside for -.
            let bounds: Vec<(i64, i64)> = window
                .iter()
                .enumerate()
                .map(|(i, &(lo, hi))| match nu[i] {
                    Sign::Plus => (lo, hi - alpha[i] as i64),
                    Sign::Minus => (lo + alpha[i] as i64, hi),
                })
                .collect();
            let idx = MultiIndex { alpha: alpha.clone(), nu };
            for z in box_points(&bounds) {
                jobs.push((idx.clone(), z));
            }
        }
    }
    let results: Vec<Option<Witness<V>>> = jobs
        .into_par_iter()
        .map(|(index, z)| {
            let value = derivative(&cached, &index, &z);
            (!value.is_zero_value()).then_some(Witness { value, index, z })
        })
        .collect();
    let checked = results.len();
    let nonzero: Vec<Witness<V>> = results.into_iter().flatten().collect();
    Ok(DegreeReport {
        degree: deg,
        checked,
        nonzero: nonzero.len(),
        witnesses: nonzero.into_iter().take(MAX_WITNESSES).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, BigRational, LaurentPoly, RationalPoly};
    use proptest::prelude::*;

    fn one_d(alpha: u32, nu: Sign) -> MultiIndex {
        MultiIndex::new(vec![alpha], vec![nu]).unwrap()
    }

    /// Repeated single steps, one coordinate at a time in the given order.
    fn iterated<F: Fn(&[i64]) -> BigInt>(f: &F, idx: &MultiIndex, z: &[i64], order: &[usize]) -> BigInt {
        fn step(
            f: &dyn Fn(&[i64]) -> BigInt,
            alpha: &[u32],
            nu: &[Sign],
            order: &[usize],
            z: &[i64],
        ) -> BigInt {
            let Some((&i, rest)) = order.split_first() else {
                return f(z);
            };
            if alpha[i] == 0 {
                return step(f, alpha, nu, rest, z);
            }
            let mut lower = alpha.to_vec();
            lower[i] -= 1;
            let mut moved = z.to_vec();
            moved[i] += nu[i].to_i64();
            let here = step(f, &lower, nu, order, z);
            let there = step(f, &lower, nu, order, &moved);
            match nu[i] {
                Sign::Plus => there - here,
                Sign::Minus => here - there,
            }
        }
        step(f, idx.alpha(), idx.nu(), order, z)
    }

    #[test]
    fn first_difference() {
        let f = |z: &[i64]| BigInt::from(z[0] * z[0] * z[0]);
        for z in -4..4 {
            assert_eq!(derivative(&f, &one_d(1, Sign::Plus), &[z]), f(&[z + 1]) - f(&[z]));
            assert_eq!(derivative(&f, &one_d(1, Sign::Minus), &[z]), f(&[z]) - f(&[z - 1]));
        }
    }

    #[test]
    fn examples() {
        let sq = |z: &[i64]| BigInt::from(z[0] * z[0]);
        assert_eq!(derivative(&sq, &one_d(2, Sign::Plus), &[0]), BigInt::from(2));
        let cube = |z: &[i64]| BigInt::from(z[0].pow(3));
        for z in -5..5 {
            assert_eq!(derivative(&cube, &one_d(4, Sign::Plus), &[z]), BigInt::from(0));
            assert_eq!(derivative(&cube, &one_d(0, Sign::Minus), &[z]), cube(&[z]));
        }
        assert_eq!(
            try_derivative(&sq, &one_d(1, Sign::Plus), &[0, 0]),
            Err(CalculusError::DimensionMismatch { point: 2, index: 1 })
        );
        assert!(MultiIndex::new(vec![1], vec![]).is_err());
    }

    #[test]
    fn laurent_values() {
        let f = |z: &[i64]| LaurentPoly::monomial(z[0], 1);
        // (A - 1)^2 from the second forward difference at 0.
        let d = derivative(&f, &one_d(2, Sign::Plus), &[0]);
        assert_eq!(d, LaurentPoly::from_terms([(2, 1), (1, -2), (0, 1)]));
    }

    #[test]
    fn series_examples() {
        let c = |_: &[i64]| rat(7);
        let id = |z: &[i64]| rat(z[0]);
        for z in -4..=4 {
            assert_eq!(power_series_eval(&c, &[z]), rat(7));
            assert_eq!(power_series_eval(&id, &[z]), rat(z));
        }
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2), vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
        assert_eq!(compositions(4, 3).len(), 15);
        assert_eq!(compositions(0, 0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn degree_evidence() {
        let sq = |z: &[i64]| rat(z[0] * z[0]);
        let r = poly_degree_evidence(&sq, &[(0, 10)], 2).unwrap();
        assert!(r.consistent());
        assert!(r.checked > 0);
        let r = poly_degree_evidence(&sq, &[(0, 10)], 1).unwrap();
        assert!(!r.consistent());
        let w = &r.witnesses[0];
        assert_eq!(w.index.alpha(), &[2]);
        assert_eq!(w.value, rat(2));
        assert_eq!(
            poly_degree_evidence(&sq, &[(0, 2)], 2),
            Err(CalculusError::WindowTooSmall { axis: 0, side: 2, order: 3 })
        );
    }

    // A function with no polynomial structure.
    fn scramble(a: i64, b: i64, z: &[i64]) -> BigInt {
        let mut h = a;
        for &x in z {
            h = (h * 31 + x * b + 7).rem_euclid(1009);
        }
        BigInt::from(h - 500)
    }

    proptest! {
        #[test]
        fn stencil_matches_iterated_differences(
            a in 1i64..50, b in 1i64..50,
            alpha in prop::collection::vec(0u32..4, 2),
            signs in prop::collection::vec(any::<bool>(), 2),
            z in prop::collection::vec(-5i64..5, 2),
        ) {
            let nu = signs.iter().map(|&s| if s { Sign::Plus } else { Sign::Minus }).collect();
            let idx = MultiIndex::new(alpha, nu).unwrap();
            let f = |p: &[i64]| scramble(a, b, p);
            let direct = derivative(&f, &idx, &z);
            prop_assert_eq!(&direct, &iterated(&f, &idx, &z, &[0, 1]));
            prop_assert_eq!(&direct, &iterated(&f, &idx, &z, &[1, 0]));
        }

        #[test]
        fn series_reconstructs(a in 1i64..50, b in 1i64..50, x in -4i64..=4, y in -4i64..=4) {
            let f = |p: &[i64]| scramble(a, b, p);
            prop_assert_eq!(power_series_eval(&f, &[x, y]), f(&[x, y]));
        }

        #[test]
        fn polynomials_pass_degree_check(cs in prop::collection::vec(-9i64..9, 1..5)) {
            let p = RationalPoly::new(cs.iter().map(|&c| rat(c)).collect());
            let deg = p.degree().unwrap_or(0) as u32;
            let f = |z: &[i64]| -> BigRational { p.eval_int(z[0]) };
            let r = poly_degree_evidence(&f, &[(-6, 6)], deg).unwrap();
            prop_assert!(r.consistent());
            for k in deg + 1..deg + 3 {
                prop_assert_eq!(derivative(&f, &one_d(k, Sign::Minus), &[2]), rat(0));
            }
        }
    }
}
