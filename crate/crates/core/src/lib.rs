//! Goal recognition for temporally extended goals in fully observable
//! non-deterministic planning domains.

pub mod automata;
pub mod compiler;
pub mod datasets;
pub mod logic;
pub mod pddl;
pub mod planner;
pub mod recognizer;
mod scalar;

pub use scalar::Scalar;

pub type Posterior64 = recognizer::Posterior<f64>;
pub type Posterior32 = recognizer::Posterior<f32>;
pub type Recognizer64 = recognizer::Recognizer<f64>;
pub type Recognizer32 = recognizer::Recognizer<f32>;
pub type DistanceTable64 = recognizer::DistanceTable<f64>;
