//! Rational polygons, finite presentations of β-shifts and the certified
//! inner/outer approximations of their digit frequency sets.

pub mod df;
pub mod graph;
pub mod hull;
pub mod mmc;

pub use df::{
    df_approx, inner_polytope, outer_polytope, presentation, DfApprox, OuterPolytope, Witness,
};
pub use graph::{build_sft, BetaAutomaton, DigitEdge, DigitGraph, SftGraph};
pub use hull::{hausdorff, hausdorff_sq, Chart, Point, RatPolygon};
pub use mmc::{cycle_counts, max_mean_cycle, max_mean_cycle_int, MeanCycle};
