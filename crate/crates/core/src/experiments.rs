//! Reproduction harness for the Figure 5 computations: closed forms, the
//! inductive coefficient relation, interpolant coefficient data, explicit
//! sums, monotonicity, and the non-polynomiality evidence on the
//! fractional sequence.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{
    binomial, factorial, lagrange_interpolate, rat, rational_wire, AlgebraError, BigInt, LaurentPoly,
    RationalPoly, TruncatedSeries,
};
use crate::bracket::{BracketError, StateSum};
use crate::gpv::gpv_derivative_scan;
use crate::sign::Sign;
use crate::twist::{figure5, TwistError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Bracket(#[from] BracketError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("parameter out of range: {0}")]
    Range(String),
}

pub(crate) fn ser_rational<S: Serializer>(c: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational_wire(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub case: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Record {
    fn compare<T: PartialEq + ToString>(case: impl Into<String>, expected: T, computed: T) -> Self {
        Self {
            case: case.into(),
            pass: expected == computed,
            expected: expected.to_string(),
            computed: computed.to_string(),
        }
    }

    fn check(case: impl Into<String>, expected: impl Into<String>, computed: impl ToString, pass: bool) -> Self {
        Self { case: case.into(), expected: expected.into(), computed: computed.to_string(), pass }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub records: Vec<Record>,
    pub verdict: Verdict,
}

impl ExperimentReport {
    fn from_records(name: &str, params: BTreeMap<String, Value>, records: Vec<Record>) -> Self {
        let verdict = if records.iter().all(|r| r.pass) { Verdict::Pass } else { Verdict::Fail };
        Self { name: name.to_string(), params, records, verdict }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Records as rows under a header.
    pub fn table(&self) -> Table {
        Table {
            columns: ["case", "expected", "computed", "pass"].map(String::from).to_vec(),
            rows: self
                .records
                .iter()
                .map(|r| vec![r.case.clone(), r.expected.clone(), r.computed.clone(), r.pass.to_string()])
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// `f(e^x)` up to `x^order` for each Figure 5 term in `ns`.
pub fn figure5_series(
    engine: &StateSum,
    ns: impl IntoIterator<Item = i64>,
    order: usize,
) -> Result<BTreeMap<i64, TruncatedSeries>, ExperimentError> {
    let ns: Vec<i64> = ns.into_iter().collect();
    ns.into_par_iter()
        .map(|n| Ok((n, engine.series(&figure5(n)?, order)?)))
        .collect()
}

/// `(n, f, v_0, …, v_order)` for `n` in `[n_min, n_max]`.
pub fn coefficient_table(engine: &StateSum, n_min: i64, n_max: i64, order: usize) -> Result<Table, ExperimentError> {
    let mut columns = vec!["n".to_string(), "f".to_string()];
    columns.extend((0..=order).map(|k| format!("v{k}")));
    let rows = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let f = engine.jones_kauffman(&figure5(n)?)?;
            let s = crate::algebra::exp_substitute(&f, order);
            let mut row = vec![n.to_string(), f.to_string()];
            row.extend(s.coeffs().iter().map(|c| c.to_string()));
            Ok(row)
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    Ok(Table { columns, rows })
}

fn a4_plus_1() -> LaurentPoly {
    LaurentPoly::from_terms([(4, 1), (0, 1)])
}

/// The closed form for the `n`-th Figure 5 term, by exact division by `A^4 + 1`.
pub fn lemma31_closed_form(n: i64) -> Result<LaurentPoly, AlgebraError> {
    let numerator = if n.rem_euclid(2) == 0 {
        &LaurentPoly::from_terms([(4, 1), (2, 1), (0, 1)]).shift(-2 * n) - &LaurentPoly::monomial(2 - 6 * n, 1)
    } else {
        &LaurentPoly::from_terms([(8, 1), (4, 1), (0, 1)]).shift(-2 - 2 * n) - &LaurentPoly::monomial(2 - 6 * n, 1)
    };
    numerator.div_exact(&a4_plus_1())
}

/// Closed forms of `f` and the bracket recursion for `-1 <= n <= n_max`.
pub fn verify_lemma31(engine: &StateSum, n_max: i64) -> Result<ExperimentReport, ExperimentError> {
    if n_max < -1 || n_max as usize > engine.limit {
        return Err(ExperimentError::Range(format!("n_max = {n_max} must lie in [-1, {}]", engine.limit)));
    }
    let brackets: BTreeMap<i64, LaurentPoly> = (-1..=n_max)
        .into_par_iter()
        .map(|n| Ok((n, engine.kauffman_bracket(&figure5(n)?)?)))
        .collect::<Result<_, ExperimentError>>()?;
    let mut records = Vec::new();
    for n in -1..=n_max {
        let d = figure5(n)?;
        let f = &LaurentPoly::neg_a_pow(-3 * d.writhe().map_err(TwistError::from)?) * &brackets[&n];
        let case = format!("f(Phi({n})) closed form");
        match lemma31_closed_form(n) {
            Ok(closed) => records.push(Record::compare(case, closed, f)),
            Err(e) => records.push(Record::check(case, "exact division", e, false)),
        }
    }
    for n in 1..=n_max {
        let rhs = &LaurentPoly::monomial(2, 1) * &brackets[&(n - 2)]
            + &LaurentPoly::neg_a_pow(-3 * (n - 2)) * &LaurentPoly::from_terms([(0, 1), (-4, -1)]);
        records.push(Record::compare(format!("<Phi({n})> recursion"), rhs, brackets[&n].clone()));
    }
    Ok(ExperimentReport::from_records("lemma31", params(&[("n_max", json!(n_max))]), records))
}

fn pow_rat(base: i64, k: usize) -> BigRational {
    BigRational::from_integer(num_traits::pow(BigInt::from(base), k))
}

fn inv_factorial(k: usize) -> BigRational {
    BigRational::new(BigInt::one(), factorial(k as u32))
}

/// The inductive relation between `v_0, …, v_k` on each term.
pub fn verify_lemma32(engine: &StateSum, k_max: usize, n_max: i64) -> Result<ExperimentReport, ExperimentError> {
    let series = figure5_series(engine, -1..=n_max, k_max)?;
    let mut records = Vec::new();
    for (&n, s) in &series {
        for k in 0..=k_max {
            let mut lhs = s.coeff(k) * rat(2);
            for i in 1..=k {
                lhs += pow_rat(4, i) * inv_factorial(i) * s.coeff(k - i);
            }
            let terms: [i64; 4] = if n.rem_euclid(2) == 0 {
                [4 - 2 * n, 2 - 2 * n, -2 * n, 2 - 6 * n]
            } else {
                [6 - 2 * n, 2 - 2 * n, -2 - 2 * n, 2 - 6 * n]
            };
            let rhs = (pow_rat(terms[0], k) + pow_rat(terms[1], k) + pow_rat(terms[2], k) - pow_rat(terms[3], k))
                * inv_factorial(k);
            records.push(Record::compare(format!("n={n} k={k}"), rhs, lhs));
        }
    }
    Ok(ExperimentReport::from_records("lemma32", params(&[("k_max", json!(k_max)), ("n_max", json!(n_max))]), records))
}

/// Leading interpolant coefficients predicted for `v_k` on the Figure 5 terms.
pub fn corollary33_prediction(k: usize) -> (BigRational, BigRational, BigRational, BigRational) {
    let sign = if k % 2 == 1 { rat(1) } else { rat(-1) };
    let top = &sign * (pow_rat(6, k) - rat(3) * pow_rat(2, k)) * inv_factorial(k) / rat(2);
    let j = k - 2;
    let even = &sign * (pow_rat(2, j) - pow_rat(6, j)) * inv_factorial(j);
    let odd = &sign * (rat(-5) * pow_rat(2, j) - pow_rat(6, j)) * inv_factorial(j);
    (top, rat(0), even, odd)
}

/// The degree-`k` interpolants through the even points `0, 2, …, 2k` and
/// the odd points `-1, 1, …, 2k-1`.
pub fn parity_interpolants(
    engine: &StateSum,
    k: usize,
) -> Result<(RationalPoly, RationalPoly), ExperimentError> {
    let evens: Vec<i64> = (0..=k as i64).map(|i| 2 * i).collect();
    let odds: Vec<i64> = (0..=k as i64).map(|i| 2 * i - 1).collect();
    let series = figure5_series(engine, evens.iter().chain(&odds).copied(), k)?;
    let pts = |xs: &[i64]| -> Vec<(i64, BigRational)> { xs.iter().map(|&n| (n, series[&n].coeff(k).clone())).collect() };
    Ok((lagrange_interpolate(&pts(&evens))?, lagrange_interpolate(&pts(&odds))?))
}

pub fn verify_corollary33(engine: &StateSum, k: usize) -> Result<ExperimentReport, ExperimentError> {
    if !(2..=6).contains(&k) {
        return Err(ExperimentError::Range(format!("k = {k} must lie in [2, 6]")));
    }
    let (p, q) = parity_interpolants(engine, k)?;
    let (top, next, even, odd) = corollary33_prediction(k);
    let mut records = Vec::new();
    for (name, poly, low) in [("even", &p, &even), ("odd", &q, &odd)] {
        records.push(Record::compare(format!("{name} coeff(n^{k})"), top.clone(), poly.coeff(k)));
        records.push(Record::compare(format!("{name} coeff(n^{})", k - 1), next.clone(), poly.coeff(k - 1)));
        records.push(Record::compare(format!("{name} coeff(n^{})", k - 2), low.clone(), poly.coeff(k - 2)));
    }
    // The fits must keep predicting beyond their data points.
    let beyond = figure5_series(engine, [2 * k as i64 + 2, 2 * k as i64 + 1], k)?;
    for (n, poly) in [(2 * k as i64 + 2, &p), (2 * k as i64 + 1, &q)] {
        records.push(Record::compare(format!("fit predicts v_{k}(Phi({n}))"), beyond[&n].coeff(k).clone(), poly.eval_int(n)));
    }
    let mut ps = params(&[("k", json!(k))]);
    ps.insert("even_fit".into(), json!(p.coeffs().iter().map(rational_wire).collect::<Vec<_>>()));
    ps.insert("odd_fit".into(), json!(q.coeffs().iter().map(rational_wire).collect::<Vec<_>>()));
    Ok(ExperimentReport::from_records("corollary33", ps, records))
}

/// The explicit summation formula for `v_k(Φ(n))`, even `n >= 2` or odd `n >= 3`.
pub fn explicit_formula(k: usize, n: i64) -> Option<BigRational> {
    let (lead, last) = match n.rem_euclid(2) {
        0 if n >= 2 => (-2 * n, n - 1),
        1 if n >= 3 => (2 - 2 * n, n - 2),
        _ => return None,
    };
    let mut acc = pow_rat(lead, k);
    for j in 0..=last {
        let t = pow_rat(4 * j - 6 * n + 2, k);
        if j % 2 == 0 {
            acc -= t;
        } else {
            acc += t;
        }
    }
    Some(acc * inv_factorial(k))
}

pub fn verify_explicit_formulas(engine: &StateSum, k: usize, n_max: i64) -> Result<ExperimentReport, ExperimentError> {
    let series = figure5_series(engine, 2..=n_max, k)?;
    let records = series
        .iter()
        .map(|(&n, s)| {
            let f = explicit_formula(k, n).expect("n >= 2");
            Record::compare(format!("v_{k}(Phi({n}))"), f, s.coeff(k).clone())
        })
        .collect();
    Ok(ExperimentReport::from_records("explicit", params(&[("k", json!(k)), ("n_max", json!(n_max))]), records))
}

/// Sign and one-step monotonicity of `n -> v_k(Φ(n))` on `[0, n_max]`:
/// nonnegative and nondecreasing for odd `k`, nonpositive and nonincreasing for even `k`.
pub fn verify_monotonicity(engine: &StateSum, k: usize, n_max: i64) -> Result<ExperimentReport, ExperimentError> {
    let series = figure5_series(engine, 0..=n_max, k)?;
    let vals: Vec<BigRational> = (0..=n_max).map(|n| series[&n].coeff(k).clone()).collect();
    let up = k % 2 == 1;
    let mut records = Vec::new();
    for (n, v) in vals.iter().enumerate() {
        let ok = if up { !v.is_negative() } else { !v.is_positive() };
        records.push(Record::check(format!("sign v_{k}(Phi({n}))"), if up { ">= 0" } else { "<= 0" }, v, ok));
    }
    for (n, w) in vals.windows(2).enumerate() {
        let ok = if up { w[1] >= w[0] } else { w[1] <= w[0] };
        let rel = if up { ">=" } else { "<=" };
        records.push(Record::check(format!("step {n}->{}", n + 1), format!("{} {rel} {}", w[1], w[0]), &w[1], ok));
    }
    Ok(ExperimentReport::from_records("monotonicity", params(&[("k", json!(k)), ("n_max", json!(n_max))]), records))
}

/// Largest even shift tried when certifying `p̄ - q̄`.
pub const SHIFT_SEARCH_BOUND: i64 = 40;

/// Smallest even `N >= 0` such that every coefficient of `(p - q)(z + N)`
/// has the sign of its leading coefficient and the constant term is
/// nonzero. Then `p̄ - q̄` keeps one strict sign on all of `z >= 0`.
pub fn certify_shift(p: &RationalPoly, q: &RationalPoly) -> Option<(i64, Sign)> {
    let diff = p.sub(q);
    let lead = diff.leading()?.clone();
    let sign = if lead.is_positive() { Sign::Plus } else { Sign::Minus };
    (0..=SHIFT_SEARCH_BOUND).step_by(2).find_map(|n| {
        let shifted = diff.shifted(n);
        let agrees = shifted.coeffs().iter().all(|c| c.is_zero() || c.is_positive() == lead.is_positive());
        (agrees && !shifted.coeff(0).is_zero()).then_some((n, sign))
    })
}

/// Non-polynomiality evidence for `v_k` on the Figure 5 sequence: with the
/// certified shift `N`, every `(∂^α v_k∘Φ̄)(0)` for `α ∈ [k+1, α_max]` must be
/// nonzero, equal `(-1)^α/2 · Σ_j C(α,j)(p̄-q̄)(j)`, and carry sign `(-1)^α`
/// when `p̄ > q̄` and `(-1)^{α+1}` when `p̄ < q̄`.
pub fn theorem2_evidence(engine: &StateSum, k: usize, alpha_max: u32) -> Result<ExperimentReport, ExperimentError> {
    let mut ps = params(&[("k", json!(k)), ("alpha_max", json!(alpha_max))]);
    let vk = |n: i64| -> Result<BigRational, ExperimentError> { Ok(engine.vk(&figure5(n)?, k)?) };
    if k < 2 {
        let rows = gpv_derivative_scan(vk, 0, 0..=alpha_max)?;
        let records = rows
            .iter()
            .map(|r| Record::compare(format!("alpha={}", r.alpha), "0".to_string(), r.value.to_string()))
            .collect();
        ps.insert("note".into(), json!("the statement concerns k >= 2"));
        return Ok(ExperimentReport { name: "theorem2".into(), params: ps, records, verdict: Verdict::NotApplicable });
    }
    let (p, q) = parity_interpolants(engine, k)?;
    let Some((shift, dominant)) = certify_shift(&p, &q) else {
        ps.insert("note".into(), json!(format!("no certified shift N <= {SHIFT_SEARCH_BOUND}")));
        return Ok(ExperimentReport { name: "theorem2".into(), params: ps, records: vec![], verdict: Verdict::Inconclusive });
    };
    if alpha_max as usize + shift as usize > engine.limit {
        return Err(ExperimentError::Range(format!(
            "alpha_max + N = {} exceeds the state-sum limit {}",
            alpha_max as i64 + shift,
            engine.limit
        )));
    }
    let pbar = p.shifted(shift);
    let qbar = q.shifted(shift);
    let mbar = pbar.add(&qbar).scale(&BigRational::new(1.into(), 2.into()));
    let gap = pbar.sub(&qbar);
    let wire = |r: &RationalPoly| json!(r.coeffs().iter().map(rational_wire).collect::<Vec<_>>());
    ps.insert("shift".into(), json!(shift));
    ps.insert("p_bar".into(), wire(&pbar));
    ps.insert("q_bar".into(), wire(&qbar));
    ps.insert("m_bar".into(), wire(&mbar));
    ps.insert("dominant".into(), json!(if dominant == Sign::Plus { "p_bar > q_bar" } else { "q_bar > p_bar" }));

    let rows = gpv_derivative_scan(vk, shift, (k as u32 + 1)..=alpha_max)?;
    let records = rows
        .iter()
        .map(|r| {
            let a = r.alpha;
            let sandwich: BigRational = (0..=a)
                .map(|j| BigRational::from_integer(binomial(a, j)) * gap.eval_int(j as i64))
                .sum::<BigRational>()
                / rat(2);
            let predicted = if a % 2 == 0 { sandwich } else { -sandwich };
            let expected_sign = match dominant {
                Sign::Plus => Sign::Minus.pow(a),
                Sign::Minus => Sign::Minus.pow(a + 1),
            };
            let ok = r.sign == Some(expected_sign) && predicted == r.value;
            Record::check(
                format!("alpha={a}"),
                format!("{} (sign {expected_sign})", predicted),
                &r.value,
                ok,
            )
        })
        .collect();
    Ok(ExperimentReport::from_records("theorem2", ps, records))
}
