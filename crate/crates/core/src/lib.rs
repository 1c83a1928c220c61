//! Quantum cohomology of toric Fano manifolds: polytopes and fans, Batyrev's
//! presentation, and the critical points of the Landau–Ginzburg superpotential.

pub mod batyrev;
pub mod corpus_io;
pub mod critical_solver;
pub mod fan;
pub mod landau_ginzburg;
pub mod lattice_geometry;
pub mod newton_polygon;
pub mod spectra;
pub mod support_function;
