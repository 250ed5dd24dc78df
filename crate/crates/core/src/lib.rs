//! Exact Jones-Kauffman polynomial, its finite-type coefficients `v_k`,
//! twist lattices and discrete calculus for long virtual knots given as
//! Gauss diagrams.
//!
//! ```
//! use vknot::{bracket::StateSum, gauss::GaussDiagram};
//!
//! let trefoil: GaussDiagram = "O1+ U2+ O3+ U1+ O2+ U3+".parse().unwrap();
//! let f = StateSum::default().jones_kauffman(&trefoil).unwrap();
//! assert_eq!(f.to_string(), "A^-4 + A^-12 - A^-16");
//! ```

pub mod algebra;
pub mod bracket;
pub mod calculus;
pub mod experiments;
pub mod gauss;
pub mod gpv;
pub mod sign;
pub mod twist;

pub use sign::Sign;
