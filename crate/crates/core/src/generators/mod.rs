//! Digit generators: the integer-base algorithm and the multi-base Pisot
//! algorithm, with their traces.

mod bhs;
mod config;
mod generate;
mod pisot;
mod schedule;
mod search;
mod trace;

pub use bhs::{
    bhs_delta, bhs_init, bhs_step, bhs_update_t, h_bound, h_cost, k_cost, BhsState, Budgets, TUpdate,
};
pub use config::{parse_base, parse_rat, t_of, Cost, FSpec, GeneratorConfig, Kind, Mode, Profile, TLog};
pub use generate::{generate, DigitStream, GeneratorOutput};
pub use pisot::{
    pisot_choose_n, pisot_delta, pisot_init, pisot_params, pisot_step, pisot_v, verify_feasibility, PisotState,
    StepParams, CENSUS_CAP,
};
pub use schedule::{conditions_hold, pisot_schedule, Schedule, ScheduleBase};
pub use search::{BlockConstraints, LexSearch, SearchResult};
pub use trace::{
    write_jsonl, BlockCheck, EntrySummary, ExactValue, Ledger, StepTrace, TEntry, TSequence, TRACE_SCHEMA_VERSION,
};
