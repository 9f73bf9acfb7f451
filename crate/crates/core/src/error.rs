use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no field of order {p}^{e}: {reason}")]
    Field { p: u32, e: u32, reason: String },
    #[error("attempted to invert zero")]
    ZeroInverse,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("fields differ: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),
    #[error("not an N-complex: d^{n} nonzero starting in degree {degree}")]
    NotNComplex { n: usize, degree: usize },
    #[error("not a complex: d∘d nonzero starting in degree {0}")]
    NotComplex(usize),
    #[error("order {order} does not match field characteristic {p}")]
    OrderMismatch { order: usize, p: u32 },
    #[error("contraction index {s} out of range for order {n}")]
    ContractionIndex { s: usize, n: usize },
    #[error("degree mismatch: {0}")]
    Degree(String),
    #[error("invalid expression: {0}")]
    Expr(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("map is not twist compatible: {0}")]
    NotTwistCompatible(String),
    #[error("field too small: need q > {needed}, got q = {got}")]
    FieldTooSmall { needed: u64, got: u32 },
    #[error("matrix is singular")]
    Singular,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("bad cache data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
