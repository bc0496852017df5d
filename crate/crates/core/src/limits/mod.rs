//! Asymptotic experiments: scaled constant sequences, their extrapolated
//! limits, and the drivers comparing polynomial and entire-function routes.

mod drivers;
mod series;

pub(crate) use drivers::sweep;
pub use drivers::{
    abs_power, bernstein_mu, entire_error_growing_interval, monotonicity_violation, nikolskii_limit,
    periodic_limit_individual, validate_n_list, BandLimitedParams, Comparison, Diagnostic, DriverReport, Row,
    DEFAULT_MAX_ORDER, DEFAULT_N_LIST, MAX_BERNSTEIN_DEGREE, MIN_SURVIVORS,
};
pub use series::{extrapolate, richardson, tail_limit, AsymptoticSeries, ExtrapolationResult, SeriesEntry, FIT_WINDOW};
