//! Finitely supported measures on shift spaces and the exact distance
//! `d(μ, ν) = inf{ε : μ(A) ≤ ν(A^ε) + ε for all A}`, computed by max-flow
//! and, for small supports, by subset enumeration.

mod bounds;
mod brute;
mod dbar;
mod flow;
mod json;
mod measure;

pub use bounds::{aux_affine, aux_convex, aux_initial, aux_uniform, check_aux, AuxInput, AuxItem};
pub use brute::{brute_feasible, bruteforce_one_sided, dbar_bruteforce, MAX_BRUTE_SUPPORT};
pub use dbar::{dbar, deficiency, one_sided, DistanceResult, Level, OneSided};
pub use flow::{Capacity, FlowNetwork};
pub use json::{parse_measure, render_measure, AtomDoc, MAX_MEASURE_ATOMS};
pub use measure::{
    co_measure, co_measure_word, convex, empirical, empirical_word, point_distance, FinMeasure,
    Mode, Point, DEFAULT_TRUNCATION,
};
