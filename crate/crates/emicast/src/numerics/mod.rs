//! Shared numerical kernels: least squares, penalized regression,
//! simplex optimization, and seeded randomness.

pub mod elastic_net;
pub mod matrix;
pub mod optim;
pub mod rng;

pub use elastic_net::{elastic_net, ElasticNetFit};
pub use matrix::{ols_solve, Matrix, OlsFit};
pub use optim::{nelder_mead, NelderMeadResult};
pub use rng::{bootstrap_sample, Rng, RngStream};
