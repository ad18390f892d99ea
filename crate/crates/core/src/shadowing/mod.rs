//! Pseudo-orbits, Newton refinement to true orbits, periodic closing and the
//! exponential shadowing inequalities.

mod closing;
mod jump;
mod newton;
mod pseudo;

pub use closing::{
    close_orbit, closing_events, closing_rate_samples, collect_census, periodic_census, Census,
    CensusOptions, ClosingEvent, PeriodicPoint, HYPERBOLICITY_THRESHOLD,
};
pub use jump::cat_single_jump;
pub use newton::{
    newton_shadow, verify_exponential_shadowing, Deviation, ShadowResult, ShadowVerdict, MAX_HALVINGS,
    MAX_STEP,
};
pub use pseudo::{
    build_recurrent_pseudo_orbit, offsets_from_lengths, PseudoOrbit, RecurrenceOptions, RETURN_BUDGET,
};

pub use crate::fit::{fit_lipschitz, fit_rates, LipschitzFit, RateFit};
