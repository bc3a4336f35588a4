use serde::Serialize;

use crate::partition::PartitionSet;
use crate::placement::{binomial, k_subsets, SubfileIndex};

/// Helpers `a` and users `p` of one scheduled partition; `users[k]` is
/// served through `helpers[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScheduledPartition {
    pub helpers: Vec<usize>,
    pub users: Vec<usize>,
}

/// The partition each profile contributes to one round, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Round {
    pub entries: Vec<Option<ScheduledPartition>>,
}

impl Round {
    /// v(g): profiles with nothing left to serve in this round.
    pub fn empty_profiles(&self) -> usize {
        self.entries.iter().filter(|e| e.is_none()).count()
    }

    pub fn is_served(&self, profile: usize) -> bool {
        matches!(self.entries.get(profile), Some(Some(_)))
    }

    /// Members of `group` that have a partition in this round.
    pub fn effective_group(&self, group: &SubfileIndex) -> Vec<usize> {
        group
            .profiles()
            .iter()
            .copied()
            .filter(|&p| self.is_served(p))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundSchedule {
    pub profiles: usize,
    pub rounds: Vec<Round>,
}

impl RoundSchedule {
    /// G.
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }
}

/// Round `g` serves the `g`-th partition of every profile that still has
/// one. `sets` is indexed by profile.
pub fn build_schedule(sets: &[PartitionSet]) -> RoundSchedule {
    let rounds = sets.iter().map(PartitionSet::count).max().unwrap_or(0);
    let rounds = (0..rounds)
        .map(|g| Round {
            entries: sets
                .iter()
                .map(|set| {
                    set.partitions.get(g).map(|p| ScheduledPartition {
                        helpers: p.helpers(),
                        users: p.users(),
                    })
                })
                .collect(),
        })
        .collect();
    RoundSchedule {
        profiles: sets.len(),
        rounds,
    }
}

/// Transmissions over the whole schedule with multicast groups of size
/// `t + 1`: every group is sent in a round unless all of its profiles are
/// idle, giving `sum_g C(L, t+1) - C(v(g), t+1)`.
pub fn count_transmissions(schedule: &RoundSchedule, t: usize) -> u64 {
    let all = binomial(schedule.profiles, t + 1);
    schedule
        .rounds
        .iter()
        .map(|r| all - binomial(r.empty_profiles(), t + 1))
        .sum()
}

/// Same count as [`count_transmissions`] by walking every group of every
/// round.
pub fn enumerate_transmissions(schedule: &RoundSchedule, t: usize) -> u64 {
    let groups = k_subsets(schedule.profiles, t + 1);
    schedule
        .rounds
        .iter()
        .map(|r| {
            groups
                .iter()
                .filter(|g| g.profiles().iter().any(|&p| r.is_served(p)))
                .count() as u64
        })
        .sum()
}
