use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("singular denominator in {0}")]
    SingularDenominator(&'static str),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("ellipticity violated on element {element}: eigenvalues ({min}, {max}) outside [1, {lambda}]")]
    Ellipticity {
        element: usize,
        min: f64,
        max: f64,
        lambda: f64,
    },
    #[error("boundary condition violated: {0}")]
    BoundaryCondition(String),
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("zero measure or zero function: {0}")]
    Degenerate(String),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
