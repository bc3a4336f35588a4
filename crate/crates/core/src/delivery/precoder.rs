use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::topology::ChannelMatrix;
use crate::{Error, Result};

/// Submatrices whose 1-norm condition estimate exceeds this are treated as
/// singular.
pub const MAX_CONDITION: f64 = 1e12;

/// `sub[k][m]` = gain from helper `helpers[m]` to user `users[k]`.
pub fn channel_submatrix(
    channel: &ChannelMatrix,
    helpers: &[usize],
    users: &[usize],
) -> DMatrix<Complex64> {
    DMatrix::from_fn(users.len(), helpers.len(), |k, m| {
        channel.gain(users[k], helpers[m])
    })
}

fn norm1(m: &DMatrix<Complex64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Inverse of the channel between `helpers` and `users`.
pub fn build_precoder(
    channel: &ChannelMatrix,
    helpers: &[usize],
    users: &[usize],
) -> Result<DMatrix<Complex64>> {
    if helpers.len() != users.len() {
        return Err(Error::InvalidParameter(format!(
            "{} helpers for {} users",
            helpers.len(),
            users.len()
        )));
    }
    let sub = channel_submatrix(channel, helpers, users);
    let inv = sub.clone().try_inverse().ok_or(Error::SingularChannel {
        condition: f64::INFINITY,
    })?;
    let condition = norm1(&sub) * norm1(&inv);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::SingularChannel { condition });
    }
    Ok(inv)
}

/// Infinity-norm distance of `sub * precoder` from the identity.
pub fn zero_forcing_error(sub: &DMatrix<Complex64>, precoder: &DMatrix<Complex64>) -> f64 {
    let prod = sub * precoder;
    let n = prod.nrows();
    (0..n)
        .map(|r| {
            (0..prod.ncols())
                .map(|c| {
                    let target = if r == c { 1.0 } else { 0.0 };
                    (prod[(r, c)] - Complex64::new(target, 0.0)).norm()
                })
                .sum::<f64>()
        })
        .fold(0.0, f64::max)
}
