//! Seeded random diagrams for property tests and the finite-type harness.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Arrow, GaussDiagram, Mark};
use crate::sign::Sign;

/// `n` arrows on a uniformly random perfect matching, random signs and
/// directions, marks drawn uniformly from `marks`.
pub fn random_diagram<R: Rng + ?Sized>(rng: &mut R, n: usize, marks: &[Mark]) -> GaussDiagram {
    let marks: Vec<Mark> = (0..n).map(|_| *marks.choose(rng).expect("nonempty mark set")).collect();
    random_with_marks(rng, &marks)
}

/// One arrow per entry of `marks`, in random positions.
pub fn random_with_marks<R: Rng + ?Sized>(rng: &mut R, marks: &[Mark]) -> GaussDiagram {
    let mut pos: Vec<usize> = (0..2 * marks.len()).collect();
    pos.shuffle(rng);
    let arrows = marks
        .iter()
        .zip(pos.chunks(2))
        .map(|(&mark, p)| Arrow {
            over: p[0],
            under: p[1],
            sign: if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus },
            mark,
        })
        .collect();
    GaussDiagram::from_arrows(arrows).expect("shuffled positions form a matching")
}
