//! Partitioning of same-profile users into the fewest sets that a single
//! zero-forcing transmission can serve.
//!
//! A set is servable when its users can be paired with distinct helpers
//! over nonzero links, i.e. when it is a matching in the helper/user
//! bipartite graph: a square channel submatrix with continuous random
//! gains on such a support is invertible with probability one. Minimising
//! the number of sets is the same as assigning each user to one of its
//! helpers while minimising the largest helper load.

mod bnb;
mod greedy;
mod instance;
mod oracle;
mod tables;

use std::fmt;

use serde::Serialize;

use crate::topology::Connectivity;
use crate::{Error, Result};

pub use bnb::{
    bb_assign, bb_assign_with_stats, partitions_from_assignment, Assignment, SearchStats,
};
pub use greedy::greedy_assign;
pub use instance::{parse_instance, write_instance};
pub use oracle::{brute_force_min_partitions, flow_oracle, lower_bound, BRUTE_FORCE_LIMIT};
pub use tables::{build_tables, DegreeTables};

/// The users of one cache profile together with the helpers each of them
/// can be served by.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileSubnetwork {
    pub profile: usize,
    pub helpers: usize,
    /// User ids in service order (ascending in practice).
    pub users: Vec<usize>,
    /// Sorted candidate helpers of `users[j]`.
    pub candidates: Vec<Vec<usize>>,
}

impl ProfileSubnetwork {
    pub fn new(
        profile: usize,
        helpers: usize,
        users: Vec<usize>,
        mut candidates: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if users.len() != candidates.len() {
            return Err(Error::InvalidParameter(format!(
                "{} users but {} candidate lists",
                users.len(),
                candidates.len()
            )));
        }
        for (user, cands) in users.iter().zip(candidates.iter_mut()) {
            cands.sort_unstable();
            cands.dedup();
            if cands.is_empty() {
                return Err(Error::InvalidParameter(format!(
                    "user {user} has no candidate helper"
                )));
            }
            if let Some(&h) = cands.iter().find(|&&h| h >= helpers) {
                return Err(Error::InvalidParameter(format!(
                    "user {user} lists helper {h} but only {helpers} helpers exist"
                )));
            }
        }
        Ok(Self {
            profile,
            helpers,
            users,
            candidates,
        })
    }

    /// Restricts `conn` to the kept users in `members`.
    pub fn from_connectivity(
        conn: &Connectivity,
        profile: usize,
        members: &[usize],
    ) -> Result<Self> {
        let candidates = members.iter().map(|&k| conn.candidates(k)).collect();
        Self::new(profile, conn.helpers(), members.to_vec(), candidates)
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    fn candidates_of(&self, user: usize) -> Option<&[usize]> {
        self.users
            .iter()
            .position(|&u| u == user)
            .map(|j| self.candidates[j].as_slice())
    }
}

/// One jointly servable set: `slots[i]` is the user served by helper `i`,
/// if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub slots: Vec<Option<usize>>,
}

impl Partition {
    /// Helpers with an assigned user, ascending.
    pub fn helpers(&self) -> Vec<usize> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.map(|_| i))
            .collect()
    }

    /// Users in helper order, aligned with [`Partition::helpers`].
    pub fn users(&self) -> Vec<usize> {
        self.slots.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.slots.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Partition {
    /// Dash-separated user ids in helper order, `0` for an idle helper.
    /// User ids are printed as stored.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .slots
            .iter()
            .map(|s| s.map_or_else(|| "0".to_string(), |u| u.to_string()))
            .collect();
        f.write_str(&parts.join("-"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PartitionSet {
    pub partitions: Vec<Partition>,
}

impl PartitionSet {
    /// G_l.
    pub fn count(&self) -> usize {
        self.partitions.len()
    }

    /// Checks that every partition is a matching over existing links and
    /// that the partitions cover each subnetwork user exactly once.
    pub fn validate(&self, subnet: &ProfileSubnetwork) -> Result<()> {
        let mut seen = vec![0usize; subnet.len()];
        for (g, part) in self.partitions.iter().enumerate() {
            if part.slots.len() != subnet.helpers {
                return Err(Error::InvalidAssignment(format!(
                    "partition {g} has {} slots for {} helpers",
                    part.slots.len(),
                    subnet.helpers
                )));
            }
            for (helper, user) in part.slots.iter().enumerate() {
                let Some(user) = *user else { continue };
                let cands = subnet.candidates_of(user).ok_or_else(|| {
                    Error::InvalidAssignment(format!("partition {g}: unknown user {user}"))
                })?;
                if cands.binary_search(&helper).is_err() {
                    return Err(Error::InvalidAssignment(format!(
                        "partition {g}: no link between helper {helper} and user {user}"
                    )));
                }
                let j = subnet
                    .users
                    .iter()
                    .position(|&u| u == user)
                    .unwrap_or_default();
                seen[j] += 1;
            }
        }
        if let Some(j) = seen.iter().position(|&c| c != 1) {
            return Err(Error::InvalidAssignment(format!(
                "user {} covered {} times",
                subnet.users[j], seen[j]
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::ProfileSubnetwork;

    /// The twelve-user, four-helper example subnetwork. User ids and helper
    /// indices here are 0-based: user `k` here is user `k + 1` of the worked example.
    pub fn example_subnetwork() -> ProfileSubnetwork {
        let cands: Vec<Vec<usize>> = vec![
            vec![0],
            vec![0, 1],
            vec![0, 1],
            vec![1],
            vec![1],
            vec![0, 1, 2],
            vec![2],
            vec![2],
            vec![1, 3],
            vec![1, 3],
            vec![3],
            vec![3],
        ];
        ProfileSubnetwork::new(0, 4, (0..12).collect(), cands).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_accessors() {
        let p = Partition {
            slots: vec![None, Some(2), None, Some(1)],
        };
        assert_eq!(p.helpers(), vec![1, 3]);
        assert_eq!(p.users(), vec![2, 1]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.to_string(), "0-2-0-1");
    }

    #[test]
    fn subnetwork_rejects_bad_candidates() {
        assert!(ProfileSubnetwork::new(0, 2, vec![0], vec![vec![]]).is_err());
        assert!(ProfileSubnetwork::new(0, 2, vec![0], vec![vec![2]]).is_err());
        assert!(ProfileSubnetwork::new(0, 2, vec![0, 1], vec![vec![0]]).is_err());
        let s = ProfileSubnetwork::new(0, 3, vec![5], vec![vec![2, 0, 2]]).unwrap();
        assert_eq!(s.candidates[0], vec![0, 2]);
    }

    #[test]
    fn validate_catches_bad_sets() {
        let s = fixtures::example_subnetwork();
        // user 0 only reaches helper 0
        let wrong_link = PartitionSet {
            partitions: vec![Partition {
                slots: vec![None, Some(0), None, None],
            }],
        };
        assert!(wrong_link.validate(&s).is_err());
        let incomplete = PartitionSet {
            partitions: vec![Partition {
                slots: vec![Some(0), None, None, None],
            }],
        };
        assert!(incomplete.validate(&s).is_err());
    }
}
