#![cfg_attr(not(test), no_std)]
//! Exact commutative algebra for stable simple normal crossings: detection,
//! invariants, blow-ups and a desingularization driver.

extern crate alloc;

pub mod blowup;
pub mod cleaning;
pub mod geom;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod linalg;
pub mod obstruction;
pub mod pipeline;
pub mod poly;
pub mod sample;

pub use geom::{Boundary, ComponentUnion, Divisor, DivisorPart, Mode, Triple, Verdict};
pub use ideal::{Ideal, RingMap};
pub use poly::{Monomial, Point, Poly, PolyError, Ring, RingRef, Q};
