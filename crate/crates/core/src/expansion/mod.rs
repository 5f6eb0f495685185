//! Exact asymptotic expansion coefficients: g-function data, Airy constants,
//! the `Q_k` Laurent data and the `R_k` recursion producing the `e_k`.

mod airy;
mod gfunc;
mod hamiltonian;
mod qseries;
mod table;

pub use airy::{airy_constants, AiryConstants};
pub use gfunc::{g_coeffs, GCoefficients};
pub use hamiltonian::{h_expansion_coeffs, HamiltonianCoefficients};
pub use qseries::{g_series, pole_order, q_series, QSeriesBuilder};
pub use table::{
    e_coeffs, r_recursion, shared_table, truncation_schedule, RecurrenceMismatch, RecurrenceReading,
    ExpansionTable,
};
