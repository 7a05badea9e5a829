//! Runs the code in the guide under `book/` as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/hamiltonian.md")]
pub mod hamiltonian {}
#[doc = include_str!("../../../book/src/dissipation.md")]
pub mod dissipation {}
#[doc = include_str!("../../../book/src/steady-state.md")]
pub mod steady_state {}
#[doc = include_str!("../../../book/src/doppler.md")]
pub mod doppler {}
#[doc = include_str!("../../../book/src/spectra.md")]
pub mod spectra {}
#[doc = include_str!("../../../book/src/scans.md")]
pub mod scans {}
#[doc = include_str!("../../../book/src/oracle.md")]
pub mod oracle {}
#[doc = include_str!("../../../book/src/configuration.md")]
pub mod configuration {}
