//! Deterministic modeling library for two- and three-player behavioral
//! dilemma games: logistic behavioral-marker curves, ordinal 2x2 game
//! analysis, behavioral polytopes over boolean truth tables, and coupled
//! linear ODE dynamics with eigenanalysis, fixed-step integration, and
//! phase-portrait export.
//!
//! Everything in this crate is a pure function of its inputs. The same
//! inputs always produce the same outputs, byte for byte where text is
//! emitted, so results can be diffed across runs.

pub mod dynamics;
pub mod games;
pub mod marker;
pub mod polytope;
pub mod portrait;

pub use dynamics::{
    CouplingParams, DynamicsError, EquilibriumClass, EquilibriumKind, IntegrationMethod,
    LinearSystem, Trajectory, TrajectoryMethod, TwoPlayerVariant,
};
pub use games::{BehaviorMatrix, EigenPair, GameError, OrdinalGame, Orientation};
pub use marker::{MarkerCurve, MarkerError, MarkerParams};
pub use polytope::{CombinedPolytopes, Halfspace, Polytope, PolytopeError, TruthTable};
pub use portrait::{PortraitError, PortraitSpec, RenderedPortrait, VectorFieldGrid};
