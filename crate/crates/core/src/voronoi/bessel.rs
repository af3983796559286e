use crate::{Error, Result};

/// Largest argument accepted by [`j1`].
pub const J1_MAX_ARG: f64 = 1e7;

/// Bessel function of the first kind of order one, for `0 <= z <= 1e7`.
pub fn j1(z: f64) -> Result<f64> {
    if !(z >= 0.0) || z > J1_MAX_ARG {
        return Err(Error::Domain(format!("j1 argument {z} outside [0, {J1_MAX_ARG}]")));
    }
    Ok(libm::j1(z))
}
