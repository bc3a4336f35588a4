use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::placement::{integral_gamma_l, CacheConfig};
use crate::{Error, Result};

pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum SweepVar {
    /// Number of cache profiles, L.
    #[serde(rename = "L")]
    Profiles,
    /// Helper transmission radius, r.
    #[serde(rename = "r")]
    Radius,
}

impl fmt::Display for SweepVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVar::Profiles => "L",
            SweepVar::Radius => "r",
        })
    }
}

impl FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" | "profiles" => Ok(SweepVar::Profiles),
            "r" | "radius" => Ok(SweepVar::Radius),
            other => Err(Error::InvalidParameter(format!(
                "unknown sweep variable {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bb,
    Greedy,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::Bb, Method::Greedy];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Bb => "bb",
            Method::Greedy => "greedy",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bb" => Ok(Method::Bb),
            "greedy" => Ok(Method::Greedy),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// User density, either absolute or scaled by the number of profiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Density {
    Absolute(f64),
    PerProfile(f64),
}

impl Density {
    pub fn resolve(self, profiles: usize) -> f64 {
        match self {
            Density::Absolute(u) => u,
            Density::PerProfile(u) => u * profiles as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub helpers: usize,
    pub profiles: usize,
    pub gamma: f64,
    pub radius: f64,
    pub user_radius: f64,
    pub density: Density,
    pub trials: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub verify_decode: bool,
    pub sweep: SweepVar,
    pub values: Vec<f64>,
}

/// Parameters of a single sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointConfig {
    pub helpers: usize,
    pub profiles: usize,
    pub t: usize,
    pub radius: f64,
    pub user_radius: f64,
    pub density: f64,
}

impl PointConfig {
    pub fn gamma(&self) -> f64 {
        self.t as f64 / self.profiles as f64
    }
}

impl ExperimentConfig {
    /// Sweep over `r` with the defaults of the radius experiment.
    pub fn radius_sweep(values: Vec<f64>) -> Self {
        Self {
            helpers: 4,
            profiles: 10,
            gamma: 0.1,
            radius: 1.2,
            user_radius: 2.7,
            density: Density::Absolute(12.0 / (1.2f64.powi(2) * std::f64::consts::PI)),
            trials: DEFAULT_TRIALS,
            seed: 1,
            methods: Method::ALL.to_vec(),
            verify_decode: false,
            sweep: SweepVar::Radius,
            values,
        }
    }

    /// Sweep over `L` at fixed users per profile.
    pub fn profile_sweep(values: Vec<f64>) -> Self {
        Self {
            density: Density::PerProfile(4.0 / (1.2f64.powi(2) * std::f64::consts::PI)),
            sweep: SweepVar::Profiles,
            ..Self::radius_sweep(values)
        }
    }

    pub fn point(&self, value: f64) -> Result<PointConfig> {
        let (profiles, radius) = match self.sweep {
            SweepVar::Radius => (self.profiles, value),
            SweepVar::Profiles => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "profile count must be a positive integer, got {value}"
                    )));
                }
                (value as usize, self.radius)
            }
        };
        if self.helpers == 0 {
            return Err(Error::InvalidParameter(
                "at least one helper is required".into(),
            ));
        }
        let t = CacheConfig::new(profiles, self.gamma).validate()?;
        debug_assert_eq!(integral_gamma_l(self.gamma, profiles), Some(t));
        Ok(PointConfig {
            helpers: self.helpers,
            profiles,
            t,
            radius,
            user_radius: self.user_radius,
            density: self.density.resolve(profiles),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidParameter(
                "sweep needs at least one value".into(),
            ));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidParameter(
                "no partitioning method selected".into(),
            ));
        }
        for &v in &self.values {
            self.point(v)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_point() {
        let c = ExperimentConfig::radius_sweep(vec![1.2, 4.2]);
        let p = c.point(4.2).unwrap();
        assert_eq!((p.profiles, p.t, p.radius), (10, 1, 4.2));
        c.validate().unwrap();
    }

    #[test]
    fn profile_points_scale_density() {
        let c = ExperimentConfig::profile_sweep(vec![10.0, 20.0, 40.0]);
        let p = c.point(20.0).unwrap();
        assert_eq!(p.t, 2);
        let base = 4.0 / (1.44 * std::f64::consts::PI);
        assert!((p.density - 20.0 * base).abs() < 1e-12);
    }

    #[test]
    fn non_integral_gamma_l_rejected() {
        let c = ExperimentConfig::profile_sweep(vec![15.0]);
        assert!(c.validate().is_err());
        assert!(ExperimentConfig::profile_sweep(vec![2.5])
            .validate()
            .is_err());
        assert!(ExperimentConfig::radius_sweep(vec![]).validate().is_err());
    }

    #[test]
    fn parse_enums() {
        assert_eq!("L".parse::<SweepVar>().unwrap(), SweepVar::Profiles);
        assert_eq!("r".parse::<SweepVar>().unwrap(), SweepVar::Radius);
        assert_eq!("greedy".parse::<Method>().unwrap(), Method::Greedy);
        assert!("x".parse::<Method>().is_err());
    }
}
