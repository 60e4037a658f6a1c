//! Negative definite plumbing trees and the association game.
//!
//! * [`graph`]: weighted trees, intersection forms, exact determinants,
//!   negative definiteness, bad vertices and blow-downs.
//! * [`contfrac`]: negative continued fractions and their tail convergents.
//! * [`seifert`]: star-shaped plumbings from Seifert data, Brieskorn spheres
//!   and the two-ray plumbings of `S^3`.
//! * [`game`]: associations, moves, good sequences and the count of good
//!   initial associations.
//! * [`format`]: the JSON graph file format.

pub mod contfrac;
pub mod format;
pub mod game;
pub mod graph;
pub mod seifert;

pub use contfrac::{lemma1_check, ConvergentTable, NegContinuedFraction, Rational};
pub use game::{
    central_count, d_lower_bound, good_initial_count, pairing, Association, CountOptions, Game,
    GameError, GoodInitials, GoodSequence, MoveOrder, PairingVector,
};
pub use graph::{GraphError, IntersectionMatrix, PlumbingGraph, VertexId};
pub use seifert::{
    brieskorn, check_quadruple, enumerate_quadruples, SeifertError, SeifertInvariants,
    SphereQuadruple,
};
