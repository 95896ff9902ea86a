//! Concurrence bounds for two-qubit mixed states from twofold-copy parity
//! measurements.
//!
//! The crate evaluates the exact Wootters concurrence together with measurable
//! lower and upper bounds obtained from parity (swap-test) observables on two
//! identical copies of a state, and simulates the two experimental routes for
//! obtaining them:
//!
//! - [`tomography`]: simulated polarization tomography with Poisson counting
//!   noise, linear-inversion reconstruction and a physicality projection;
//! - [`coincidence`]: an event-class simulation of the twofold-copy
//!   coincidence experiment — beamsplitter swap tests with finite mode
//!   overlap, same-pulse double-pair backgrounds, blocking-run calibration,
//!   background subtraction and normalization, and parametric-bootstrap error
//!   bars on the estimated bounds.
//!
//! [`report`] drives full studies over families of dephased states and emits
//! CSV/JSON reports; the `twofold` binary exposes everything as subcommands.

pub mod coincidence;
pub mod concurrence;
pub mod error;
pub mod qlinalg;
pub mod report;
pub mod states;
pub mod tol;
pub mod tomography;

pub use error::{Error, Result};

/// Derive a child seed for an independent substream.
///
/// SplitMix64 finalizer over the pair; good enough to decorrelate streams and
/// fully deterministic, which keeps parallel trials mergeable by index.
pub fn child_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
