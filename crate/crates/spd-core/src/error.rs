use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate triangle (gram determinant {0:e})")]
    DegenerateTriangle(f64),
    #[error("sum of oriented distances is at the pole pi/2")]
    PoleSingularity,
    #[error("infeasible: {0}")]
    Infeasible(&'static str),
    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: f64, lo: f64, hi: f64 },
    #[error("negative discriminant {0:e}")]
    NegativeDiscriminant(f64),
    #[error("(k, delta) = ({k}, {delta}) outside the level domain")]
    OutsideDomain { k: f64, delta: f64 },
    #[error("edge {0} shorter than pi/3")]
    EdgeTooShort(f64),
    #[error("separation violation: {0} < pi/3")]
    SeparationViolation(f64),
    #[error("total area within 1e-9 of pi")]
    AreaAtPi,
    #[error("bad angles: {0}")]
    BadAngles(&'static str),
    #[error("face {0} does not contain its circumcenter")]
    CircumcenterOutside(usize),
    #[error("triangulation is not icosahedral (vertex {vertex} has degree {degree})")]
    NotIcosahedral { vertex: usize, degree: usize },
    #[error("no admissible perturbation after {0} attempts")]
    CannotPerturb(usize),
    #[error("local packing is not of type one")]
    NotTypeOne,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("spheres overlap (side {0} < 2)")]
    Overlap(f64),
    #[error("no star of area {0} is reachable")]
    InfeasibleArea(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(value: f64, lo: f64, hi: f64, slack: f64) -> Result<()> {
    if value.is_finite() && value >= lo - slack && value <= hi + slack {
        Ok(())
    } else {
        Err(Error::OutOfRange { value, lo, hi })
    }
}
