//! Exact arithmetic in F_q, F_q[θ] and K = F_q(θ).

mod fq;
mod kelem;
mod poly;

pub use fq::{DegreeLimitExceeded, Fq, FqConfig, FqElement};
pub use kelem::KElement;
pub use poly::FqPoly;
