use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(String, String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("sector ({h},{v}) is not realised by the dense model on a {m}x{n} torus")]
    DenseSector { h: u8, v: u8, m: usize, n: usize },
    #[error("imaginary residue {0:e} above tolerance")]
    ImaginaryResidue(f64),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
