//! Elitist non-dominated sorting genetic algorithm (NSGA-II).
//!
//! The core is independent of the control problem: anything implementing
//! [`Problem`] over a box-bounded real vector can be optimised. All objectives
//! are minimised.

mod archive;
mod bounds;
mod crowding;
mod dominance;
mod nsga2;
mod operators;

pub use archive::{read_archive_csv, write_archive_csv, write_front_csv, ArchiveRow, Columns};
pub use bounds::Bounds;
pub use crowding::crowding_distance;
pub use dominance::{dominates, nondominated_sort, ranks_from_fronts};
pub use nsga2::{
    assign_rank_and_crowding, crowded_compare, crowded_order, evolve, tournament_select,
    EvolveConfig, EvolveResult, GenerationRecord, Individual, Problem, Winner,
};
pub use operators::{
    mutate_polynomial, mutate_real, recombine_real, recombine_sbx, OperatorConfig, OperatorFamily,
};
