//! Signaling games with costly monitoring.
//!
//! Builds the normal form of a signaling game and of its costly-monitoring
//! variant, enumerates every extreme Nash equilibrium exactly, groups them into
//! connected components, computes component indices, and sweeps the monitoring
//! cost to check whether a component's outcome survives.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod game;
pub mod index;
pub mod linalg;
pub mod normalform;
pub mod outcome;
pub mod rational;
pub mod sweep;

pub use cli::{parse_game_file, run_command, serialize_game, write_sweep_csv, CommandResult};
pub use equilibrium::{
    component_outcome, enumerate_extreme_equilibria, induced_outcome, is_equilibrium, maximal_nash_subsets,
    solve_components, Component, EquilibriumCheck, MixedEquilibrium, NashSubset, OutcomeReport,
};
pub use error::{Error, Result};
pub use game::{
    outcome_of_profile, validate_game, MixedProfile, Payoff, ReceiverMix, ReceiverStrategy, ReceiverStrategyC,
    SenderStrategy, SignalingGame, ValidationReport,
};
pub use index::{
    component_index, duplicate_containment_check, equilibrium_index, index_sum_check, ContainmentReport, IndexMethod,
    IndexResult, IndexSumReport, PerturbationConfig,
};
pub use normalform::{
    build_normal_form, build_reduced_sgcm, build_sgcm_normal_form, dominance_filter, embed_map, reduce_normal_form,
    strategy_spaces, strategy_spaces_c, BimatrixGame, DominanceMode, EmbedMap, Reduction, StrategyClass,
};
pub use outcome::{
    classify_outcome, enumerate_plays, enumerate_plays_monitored, outcome_distance, project_outcome, InducedOutcome,
    Outcome, OutcomeC, OutcomeClass, Play, PlayC,
};
pub use rational::Rational;
pub use sweep::{
    base_components, cost_sweep, survival_threshold, verify_theorem_bound, BaseComponent, Grid, SweepConfig,
    SweepRecord, TheoremReport, ThresholdResult,
};
