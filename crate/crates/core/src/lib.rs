//! Graded polynomial algebra over the rationals, shifted cotangent charts and
//! the structures built on them: homotopy Poisson structures, homotopy Lie
//! bialgebras and coisotropic reduction.

pub mod graded_algebra;
pub mod homotopy_poisson;
pub mod lie_structures;
pub mod linalg;
pub mod reduction;
pub mod report;
pub mod sample;
pub mod shifted_cotangent;
