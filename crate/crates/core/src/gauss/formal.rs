use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Arrow, GaussDiagram, Mark};
use crate::algebra::AbelianGroup;

/// Integer linear combination of canonical diagrams. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalSum {
    terms: BTreeMap<GaussDiagram, i64>,
}

impl FormalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(d: GaussDiagram) -> Self {
        Self::term(d, 1)
    }

    pub fn term(d: GaussDiagram, c: i64) -> Self {
        let mut s = Self::zero();
        s.add_term(d, c);
        s
    }

    pub fn add_term(&mut self, d: GaussDiagram, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(d).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GaussDiagram, i64)> + '_ {
        self.terms.iter().map(|(d, c)| (d, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &GaussDiagram) -> i64 {
        self.terms.get(d).copied().unwrap_or(0)
    }

    /// Expands every dashed and singular arrow into classical diagrams:
    ///
    /// * dashed arrow: `(arrow) - (arrow deleted)`;
    /// * chord of sign `e`: `e * (arrow signed e) - e * (arrow reversed, signed -e)`,
    ///   the second term being the crossing change of the first.
    ///
    /// Classical diagrams pass through as a single term.
    pub fn expand_marks(d: &GaussDiagram) -> Self {
        let mut partial: Vec<(i64, Vec<Arrow>)> = vec![(1, Vec::with_capacity(d.len()))];
        for a in d.arrows() {
            let c = a.with_mark(Mark::Classical);
            let choices: Vec<(i64, Option<Arrow>)> = match a.mark {
                Mark::Classical => vec![(1, Some(c))],
                Mark::Dashed => vec![(1, Some(c)), (-1, None)],
                Mark::Chord => {
                    let e = a.sign.to_i64();
                    let flipped = Arrow { sign: -a.sign, ..c.reversed() };
                    vec![(e, Some(c)), (-e, Some(flipped))]
                }
            };
            partial = partial
                .into_iter()
                .flat_map(|(coef, arrows)| {
                    choices.iter().map(move |(k, choice)| {
                        let mut next = arrows.clone();
                        next.extend(choice);
                        (coef * k, next)
                    })
                })
                .collect();
        }
        let mut out = Self::zero();
        for (c, arrows) in partial {
            out.add_term(GaussDiagram::compress(arrows), c);
        }
        out
    }

    /// Linear extension of [`FormalSum::expand_marks`].
    pub fn expand_all_marks(&self) -> Self {
        let mut out = Self::zero();
        for (d, c) in self.terms() {
            for (e, k) in Self::expand_marks(d).terms() {
                out.add_term(e.clone(), c * k);
            }
        }
        out
    }
}

impl AbelianGroup for FormalSum {
    fn zero_value() -> Self {
        FormalSum::zero()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, c) in other.terms() {
            out.add_term(d.clone(), c);
        }
        out
    }
    fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }
    fn is_zero_value(&self) -> bool {
        self.terms.is_empty()
    }
    fn scale(&self, c: &BigInt) -> Self {
        let c = c.to_i64().expect("formal sum coefficient fits in i64");
        let mut out = Self::zero();
        for (d, k) in self.terms() {
            out.add_term(d.clone(), k * c);
        }
        out
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            let sep = match (i, *c < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let mag = c.abs();
            if mag == 1 {
                write!(f, "{sep}[{d}]")?;
            } else {
                write!(f, "{sep}{mag}[{d}]")?;
            }
        }
        Ok(())
    }
}
