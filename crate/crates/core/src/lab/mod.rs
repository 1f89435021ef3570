//! Numerical checks of the mean-value theorems on a desk-scale grid.
//!
//! Summatory functions are accumulated once over `[1, x_max]` and read off
//! at a geometric grid; the predicted main term is subtracted and the
//! residual is fitted by a polynomial in `log x`.

mod fit;
mod summatory;
mod verify;

pub use fit::{fit_log_powers, LogFit};
pub use summatory::{
    geometric_grid, summatory, summatory_exact, summatory_jordan, summatory_jordan_exact, MainTerm,
    MainTermKind, NeumaierSum,
};
pub use verify::{verify_theorem, LabConfig, SpotCheckSummary, SummatoryReport, TheoremId, TrendCheck};
