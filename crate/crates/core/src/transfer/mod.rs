//! Transfer matrices on standard modules of the (dilute) periodic
//! Temperley–Lieb algebra and the Markov-trace route to sector partition
//! functions.

mod laurent;
mod link;
mod markov;
mod row;

pub use laurent::{LaurentMatrix, OmegaLaurent};
pub use link::{module_basis, LinkState, Site};
pub use markov::{c_table, markov_z, markov_z_from_traces, spectrum, trace_tm, CTable};
pub use row::{build_on_basis, build_transfer, TransferOperator, MAX_DIM};
