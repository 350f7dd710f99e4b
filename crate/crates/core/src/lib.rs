//! Sector-length distributions of pure multipartite qudit states.
//!
//! A pure state of `N` parties with local dimension `d` is expanded in a
//! product basis of traceless local operators. Grouping the terms by the
//! number of parties they act on gives the sectors, and the squared
//! Hilbert-Schmidt length `S_k` of the k-th sector measures k-party
//! correlations. For pure states `Σ_k S_k = d^N`.
//!
//! * [`qstate`]: state construction, partial traces, purities
//! * [`bloch_oracle`]: brute-force Gell-Mann expansion (ground truth)
//! * [`sector_engine`]: sector lengths from the `2^N` purity table, and the
//!   operator-level superoperators
//! * [`closed_forms`]: exact big-integer distributions of GHZ, product and
//!   Bell-pair states
//! * [`identities`]: numerical checks of the linear relations among `S_k`
//! * [`explorer`]: GHZ vs Bell-family sweep, boundary root, N-sector search

pub mod bloch_oracle;
pub mod closed_forms;
pub mod error;
pub mod explorer;
pub mod identities;
pub mod operator;
pub mod qstate;
pub mod sector_engine;
pub mod state_spec;
pub mod subset;

pub use error::{Error, Result};
pub use operator::{DensityOperator, Operator};
pub use qstate::{PartySubset, PureState};
pub use sector_engine::{PurityTable, SectorDistribution};
pub use state_spec::StateSpec;
