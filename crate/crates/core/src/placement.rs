//! Shared-cache placement. Users are assigned to one of `L` cache
//! profiles; every file is split into `C(L, t)` subfiles indexed by the
//! `t`-subsets of the profiles, and a profile caches exactly the subfiles
//! whose index contains it.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::{Error, Result};

/// Binomial coefficient, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CacheConfig {
    /// Number of cache profiles, L.
    pub profiles: usize,
    /// Fraction of the library each user stores, gamma.
    pub gamma: f64,
    /// Largest number of subfiles a file may be split into, Q.
    pub max_subpacketization: u64,
    /// Library size N.
    pub library: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NoProfiles,
    GammaOutOfRange(f64),
    MemorySharingRequired { gamma_l: f64 },
    SubpacketizationExceeded { subfiles: u64, cap: u64 },
    LibraryTooSmall { library: usize, users: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoProfiles => write!(f, "at least one cache profile is required"),
            Violation::GammaOutOfRange(g) => write!(f, "cache fraction {g} is outside (0, 1)"),
            Violation::MemorySharingRequired { gamma_l } => write!(
                f,
                "gamma*L = {gamma_l} is not an integer; memory sharing required, unsupported"
            ),
            Violation::SubpacketizationExceeded { subfiles, cap } => {
                write!(f, "{subfiles} subfiles per file exceed the cap {cap}")
            }
            Violation::LibraryTooSmall { library, users } => {
                write!(f, "{library} files cannot serve {users} distinct demands")
            }
        }
    }
}

/// `Some(t)` when `gamma * profiles` is within rounding of an integer.
pub fn integral_gamma_l(gamma: f64, profiles: usize) -> Option<usize> {
    let gl = gamma * profiles as f64;
    let t = gl.round();
    ((gl - t).abs() < 1e-9 && t >= 0.0).then_some(t as usize)
}

impl CacheConfig {
    pub fn new(profiles: usize, gamma: f64) -> Self {
        Self {
            profiles,
            gamma,
            max_subpacketization: u64::MAX,
            library: usize::MAX,
        }
    }

    /// Checks every placement condition and returns `t = gamma * L`.
    pub fn validate(&self) -> Result<usize> {
        let mut violations = Vec::new();
        if self.profiles == 0 {
            violations.push(Violation::NoProfiles);
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            violations.push(Violation::GammaOutOfRange(self.gamma));
        }
        let t = integral_gamma_l(self.gamma, self.profiles);
        match t {
            None => violations.push(Violation::MemorySharingRequired {
                gamma_l: self.gamma * self.profiles as f64,
            }),
            Some(t) if t <= self.profiles => {
                let subfiles = binomial(self.profiles, t);
                if subfiles > self.max_subpacketization {
                    violations.push(Violation::SubpacketizationExceeded {
                        subfiles,
                        cap: self.max_subpacketization,
                    });
                }
            }
            Some(_) => {}
        }
        match (violations.is_empty(), t) {
            (true, Some(t)) => Ok(t),
            _ => Err(Error::InvalidCacheConfig(violations)),
        }
    }

    /// Worst-case demands need a distinct file per user.
    pub fn check_library(&self, users: usize) -> Result<()> {
        if self.library < users {
            return Err(Error::InvalidCacheConfig(vec![
                Violation::LibraryTooSmall {
                    library: self.library,
                    users,
                },
            ]));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileAssignment {
    /// Profile (0-based) of each user.
    pub profile_of: Vec<usize>,
    /// Users of each profile, ascending.
    pub members: Vec<Vec<usize>>,
}

impl ProfileAssignment {
    pub fn from_profiles(profile_of: Vec<usize>, profiles: usize) -> Result<Self> {
        let mut members = vec![Vec::new(); profiles];
        for (user, &p) in profile_of.iter().enumerate() {
            let slot = members.get_mut(p).ok_or_else(|| {
                Error::InvalidParameter(format!("user {user} has profile {p} >= {profiles}"))
            })?;
            slot.push(user);
        }
        Ok(Self {
            profile_of,
            members,
        })
    }

    pub fn profiles(&self) -> usize {
        self.members.len()
    }

    pub fn users(&self) -> usize {
        self.profile_of.len()
    }

    /// C_l for each profile.
    pub fn counts(&self) -> Vec<usize> {
        self.members.iter().map(Vec::len).collect()
    }
}

/// Each of `users` users picks a profile uniformly and independently.
pub fn assign_profiles<R: Rng + ?Sized>(
    users: usize,
    profiles: usize,
    rng: &mut R,
) -> Result<ProfileAssignment> {
    if profiles == 0 {
        return Err(Error::InvalidParameter(
            "at least one cache profile is required".into(),
        ));
    }
    let profile_of = (0..users).map(|_| rng.random_range(0..profiles)).collect();
    ProfileAssignment::from_profiles(profile_of, profiles)
}

/// A `t`-subset of the profiles, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SubfileIndex(Vec<usize>);

impl SubfileIndex {
    pub fn new(mut profiles: Vec<usize>) -> Self {
        profiles.sort_unstable();
        profiles.dedup();
        Self(profiles)
    }

    pub fn profiles(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, profile: usize) -> bool {
        self.0.binary_search(&profile).is_ok()
    }

    /// This set with `profile` removed.
    pub fn without(&self, profile: usize) -> SubfileIndex {
        SubfileIndex(self.0.iter().copied().filter(|&p| p != profile).collect())
    }

    /// Bitmask of the members; profiles must be below 64.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &p| m | (1u64 << p))
    }
}

impl fmt::Display for SubfileIndex {
    /// 1-based, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| (p + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

/// Every `size`-subset of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, size: usize) -> Vec<SubfileIndex> {
    if size > n {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(binomial(n, size) as usize);
    let mut cur: Vec<usize> = (0..size).collect();
    loop {
        out.push(SubfileIndex(cur.clone()));
        // rightmost position that can still advance
        let Some(pos) = (0..size).rev().find(|&i| cur[i] < n - size + i) else {
            break;
        };
        cur[pos] += 1;
        for j in pos + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
    out
}

/// All subfile indices of a placement with `profiles` profiles and `t = gamma * L`.
pub fn subfile_indices(profiles: usize, t: usize) -> Vec<SubfileIndex> {
    k_subsets(profiles, t)
}

pub fn cached_by(profile: usize, index: &SubfileIndex) -> bool {
    index.contains(profile)
}

/// Subfile indices a user of `profile` must receive, `C(L-1, t)` of them.
pub fn needed_subfiles(profile: usize, profiles: usize, t: usize) -> Vec<SubfileIndex> {
    subfile_indices(profiles, t)
        .into_iter()
        .filter(|s| !s.contains(profile))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, Stream};

    fn idx(v: &[usize]) -> SubfileIndex {
        SubfileIndex::new(v.to_vec())
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(10, 1), 10);
        assert_eq!(binomial(10, 2), 45);
        assert_eq!(binomial(40, 5), 658_008);
        assert_eq!(binomial(1, 2), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn fig5_config_is_valid() {
        let mut c = CacheConfig::new(10, 0.1);
        c.max_subpacketization = 10;
        assert_eq!(c.validate().unwrap(), 1);
    }

    #[test]
    fn third_of_three_profiles() {
        let mut c = CacheConfig::new(3, 1.0 / 3.0);
        c.max_subpacketization = 3;
        assert_eq!(c.validate().unwrap(), 1);
    }

    #[test]
    fn fractional_gamma_l_needs_memory_sharing() {
        let err = CacheConfig::new(10, 0.15).validate().unwrap_err();
        match err {
            Error::InvalidCacheConfig(v) => {
                assert!(matches!(v[..], [Violation::MemorySharingRequired { .. }]));
                assert!(v[0].to_string().contains("memory sharing"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn every_violation_is_reported() {
        let c = CacheConfig {
            profiles: 20,
            gamma: 0.1,
            max_subpacketization: 100,
            library: 3,
        };
        // C(20,2) = 190 > 100
        let err = c.validate().unwrap_err();
        assert!(matches!(err, Error::InvalidCacheConfig(ref v)
            if v == &[Violation::SubpacketizationExceeded { subfiles: 190, cap: 100 }]));
        assert!(c.check_library(4).is_err());
        assert!(c.check_library(3).is_ok());

        let bad = CacheConfig::new(0, 1.5).validate().unwrap_err();
        assert!(matches!(bad, Error::InvalidCacheConfig(ref v) if v.len() == 2));
    }

    #[test]
    fn profile_assignment_edge_cases() {
        let mut rng = stream_rng(1, Stream::Profiles);
        let a = assign_profiles(0, 4, &mut rng).unwrap();
        assert_eq!(a.counts(), vec![0; 4]);
        let b = assign_profiles(17, 1, &mut rng).unwrap();
        assert_eq!(b.counts(), vec![17]);
        assert_eq!(b.members[0], (0..17).collect::<Vec<_>>());
        assert!(assign_profiles(3, 0, &mut rng).is_err());
    }

    #[test]
    fn profile_assignment_is_seeded() {
        let a = assign_profiles(50, 7, &mut stream_rng(9, Stream::Profiles)).unwrap();
        let b = assign_profiles(50, 7, &mut stream_rng(9, Stream::Profiles)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts().iter().sum::<usize>(), 50);
    }

    #[test]
    fn subfile_indices_examples() {
        assert_eq!(subfile_indices(3, 1), vec![idx(&[0]), idx(&[1]), idx(&[2])]);
        assert_eq!(subfile_indices(10, 1).len(), 10);
        assert_eq!(subfile_indices(4, 0), vec![idx(&[])]);
        assert_eq!(
            subfile_indices(4, 2),
            vec![
                idx(&[0, 1]),
                idx(&[0, 2]),
                idx(&[0, 3]),
                idx(&[1, 2]),
                idx(&[1, 3]),
                idx(&[2, 3])
            ]
        );
        assert!(subfile_indices(2, 3).is_empty());
    }

    #[test]
    fn membership() {
        assert!(cached_by(1, &idx(&[1])));
        assert!(!cached_by(0, &idx(&[1])));
    }

    #[test]
    fn needed_subfiles_examples() {
        assert_eq!(needed_subfiles(0, 3, 1), vec![idx(&[1]), idx(&[2])]);
        assert_eq!(needed_subfiles(3, 5, 4).len(), 1);
    }

    #[test]
    fn cached_fraction_is_gamma() {
        for l in 1..=16usize {
            for t in 0..=l {
                let all = subfile_indices(l, t);
                assert_eq!(all.len() as u64, binomial(l, t));
                for p in 0..l {
                    let cached = all.iter().filter(|s| cached_by(p, s)).count();
                    let needed = needed_subfiles(p, l, t);
                    assert_eq!(cached + needed.len(), all.len());
                    assert_eq!(needed.len() as u64, binomial(l - 1, t));
                    // cached / total = t / L exactly
                    assert_eq!(cached as u64 * l as u64, t as u64 * all.len() as u64);
                }
            }
        }
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(idx(&[0, 2]).to_string(), "{1 3}");
        assert_eq!(idx(&[1, 2]).without(1), idx(&[2]));
    }
}
