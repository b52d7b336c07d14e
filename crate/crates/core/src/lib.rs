//! Exact-arithmetic workbench for twisted homological stability.
//!
//! Layers: exact linear algebra, finite rings and elementary matrices, semisimplicial
//! sets, FI- and VIC-modules, coefficient systems and group homology.

pub mod coeffsys;
pub mod exactlin;
pub mod finring;
pub mod scomplex;
pub mod funmod;
pub mod homology;
