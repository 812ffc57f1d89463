//! Admissible divides on closed orientable surfaces: combinatorial maps,
//! checkerboard colorings, open book page invariants, the A'Campo fiber with
//! its vanishing cycles and monodromy, and a census of small divides.

pub mod census;
pub mod divide;
pub mod fiber;
pub mod homology;
pub mod invariants;
pub mod io;
pub mod map;
