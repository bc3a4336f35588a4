use serde::Serialize;

use crate::placement::binomial;
use crate::{Error, Result};

/// Delivery time in file slots: each transmission carries one subfile,
/// `1 / C(L, t)` of a file, to each user it serves.
pub fn delivery_time(transmissions: u64, profiles: usize, t: usize) -> f64 {
    transmissions as f64 / binomial(profiles, t) as f64
}

/// `K (1 - gamma) / T`; `None` when there are no users.
pub fn sum_dof(users: usize, gamma: f64, time: f64) -> Result<Option<f64>> {
    if users == 0 {
        return Ok(None);
    }
    if time.is_nan() || time <= 0.0 {
        return Err(Error::UndefinedMetric { users });
    }
    Ok(Some(users as f64 * (1.0 - gamma) / time))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeliveryStats {
    pub transmissions: u64,
    pub time: f64,
    pub sum_dof: Option<f64>,
}

impl DeliveryStats {
    /// The sum-DoF is formed as `K (L - t) C(L, t) / (L n_tx)` in integers
    /// with one final division, so integral values come out exact.
    pub fn new(transmissions: u64, users: usize, profiles: usize, t: usize) -> Result<Self> {
        let time = delivery_time(transmissions, profiles, t);
        let gamma = t as f64 / profiles as f64;
        let mut dof = sum_dof(users, gamma, time)?;
        if dof.is_some() {
            let num = (users as u128)
                .checked_mul((profiles - t) as u128)
                .and_then(|x| x.checked_mul(binomial(profiles, t) as u128));
            let den = (profiles as u128).checked_mul(transmissions as u128);
            if let (Some(num), Some(den)) = (num, den) {
                dof = Some(num as f64 / den as f64);
            }
        }
        Ok(Self {
            transmissions,
            time,
            sum_dof: dof,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_full_round_of_ten_profiles() {
        assert_eq!(delivery_time(45, 10, 1), 4.5);
        assert_eq!(delivery_time(0, 10, 1), 0.0);
        assert_eq!(sum_dof(40, 0.1, 4.5).unwrap(), Some(8.0));
    }

    #[test]
    fn metric_edge_cases() {
        assert_eq!(sum_dof(0, 0.1, 0.0).unwrap(), None);
        assert!(matches!(
            sum_dof(3, 0.1, 0.0),
            Err(Error::UndefinedMetric { users: 3 })
        ));
    }

    #[test]
    fn stats_from_counts() {
        let s = DeliveryStats::new(45, 40, 10, 1).unwrap();
        assert_eq!(s.sum_dof, Some(8.0));
        // L = 5, t = 2, one round of 4 users per profile: C(5,3) = 10 sends
        let s = DeliveryStats::new(10, 20, 5, 2).unwrap();
        assert_eq!(s.sum_dof, Some(12.0));
    }
}
