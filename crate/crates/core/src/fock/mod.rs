//! Fock-basis photon statistics.

pub mod distribution;
pub mod hafnian;
pub mod oracle;
pub mod probability;
pub mod scattershot;

pub use distribution::{outcomes_up_to, outcomes_with_total, FockOutcome, OutcomeDistribution};
pub use hafnian::{hafnian, hafnian_repeated};
pub use oracle::{oracle_distribution, oracle_probability, OracleCircuit, OracleState};
pub use probability::{
    enumerate_distribution, outcome_probability, sample_fock, sample_from_distribution, suggest_cutoff,
    GaussianPhotonStatistics, REQUIRED_MASS,
};
pub use scattershot::{
    chi_to_db, db_to_chi, optimal_chi, scattershot_success_probability, ScattershotParams,
};
