//! Rotation sets of a one-parameter family of torus homeomorphisms, computed
//! through the figure-eight model: kneading words of the clip points,
//! digit frequency sets of the associated β-shifts, and a projective change
//! of coordinates. All certified quantities are exact rationals.

pub mod eight;
pub mod error;
pub mod infimax;
pub mod io;
pub mod pipeline;
pub mod polytope;
pub mod rational;
pub mod word;

pub use error::{Error, Result};
pub use rational::Rational;
pub use word::{DigitWord, FreqVector};
