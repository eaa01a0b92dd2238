use std::io;

/// Failures raised by the evolution schemes, diagnostics and oracles.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("constraint solve blew up: beta = {beta:.3e} at r = {r:.6}")]
    Blowup { r: f64, beta: f64 },

    #[error("degenerate null cone at (u, v) = ({u:.6}, {v:.6}): r = {r:.3e}")]
    DegenerateCone { u: f64, v: f64, r: f64 },

    #[error("non-finite value produced in {0}")]
    NonFinite(&'static str),

    #[error("adaptive quadrature exceeded depth {depth} (error estimate {estimate:.3e})")]
    Quadrature { depth: usize, estimate: f64 },

    #[error("time step {dt:.6e} exceeds the CFL bound {bound:.6e}")]
    Cfl { dt: f64, bound: f64 },

    #[error("cone mantle leaves the grid at t = {t:.6} (r = {r:.6}, r_max = {r_max:.6})")]
    ConeOutOfRange { t: f64, r: f64, r_max: f64 },

    #[error("snapshot index {index} has no neighbours in a run of {len} snapshots")]
    Index { index: usize, len: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code for the command line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Blowup { .. } | Error::DegenerateCone { .. } => 2,
            Error::NonFinite(_) | Error::Quadrature { .. } | Error::Index { .. } => 3,
            Error::Config(_) | Error::Cfl { .. } | Error::ConeOutOfRange { .. } | Error::Io(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_documented_table() {
        assert_eq!(Error::Blowup { r: 1.0, beta: 51.0 }.exit_code(), 2);
        assert_eq!(Error::DegenerateCone { u: 0.0, v: 1.0, r: -1e-3 }.exit_code(), 2);
        assert_eq!(Error::NonFinite("rhs").exit_code(), 3);
        assert_eq!(Error::Quadrature { depth: 40, estimate: 1.0 }.exit_code(), 3);
        assert_eq!(Error::Config("n_cells".into()).exit_code(), 4);
    }
}
