//! Exact computations for quotients of tilting-module categories of quantum
//! groups at roots of unity, attached to the subregular two-sided cell.

pub mod affine;
pub mod cli;
pub mod deeq;
pub mod exactnum;
pub mod fusion;
pub mod linalg;
pub mod mckay;
pub mod rootdata;
pub mod tiltchar;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("model violation: {0}")]
    Model(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
