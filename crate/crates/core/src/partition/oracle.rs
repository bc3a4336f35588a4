//! Reference answers for the minimum number of partitions.

use super::{build_tables, ProfileSubnetwork};
use crate::{Error, Result};

/// Largest number of assignments [`brute_force_min_partitions`] will walk.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// `ceil(C / E)`: a partition holds at most one user per helper.
pub fn lower_bound(subnet: &ProfileSubnetwork) -> usize {
    if subnet.helpers == 0 {
        return subnet.len();
    }
    subnet.len().div_ceil(subnet.helpers)
}

/// Tries every helper choice for every multi-helper user.
pub fn brute_force_min_partitions(subnet: &ProfileSubnetwork) -> Result<usize> {
    let tables = build_tables(subnet);
    let size = tables
        .multi
        .iter()
        .try_fold(1u128, |acc, (_, c)| acc.checked_mul(c.len() as u128))
        .unwrap_or(u128::MAX);
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge {
            size,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut loads = tables.single_loads();
    let mut best = usize::MAX;
    enumerate(&tables.multi, 0, &mut loads, &mut best);
    Ok(best)
}

fn enumerate(multi: &[(usize, Vec<usize>)], j: usize, loads: &mut [usize], best: &mut usize) {
    if j == multi.len() {
        *best = (*best).min(loads.iter().copied().max().unwrap_or(0));
        return;
    }
    for &h in &multi[j].1 {
        loads[h] += 1;
        enumerate(multi, j + 1, loads, best);
        loads[h] -= 1;
    }
}

/// Smallest `q` such that every user can be matched to a candidate helper
/// with no helper used more than `q` times, found by binary search over
/// augmenting-path b-matchings.
pub fn flow_oracle(subnet: &ProfileSubnetwork) -> usize {
    if subnet.is_empty() {
        return 0;
    }
    let (mut lo, mut hi) = (lower_bound(subnet).max(1), subnet.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if matched_users(subnet, mid) == subnet.len() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Size of a maximum b-matching with helper capacity `cap`.
fn matched_users(subnet: &ProfileSubnetwork, cap: usize) -> usize {
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); subnet.helpers];
    let mut matched = 0;
    for j in 0..subnet.len() {
        let mut visited = vec![false; subnet.helpers];
        if augment(subnet, cap, j, &mut holders, &mut visited) {
            matched += 1;
        }
    }
    matched
}

fn augment(
    subnet: &ProfileSubnetwork,
    cap: usize,
    user: usize,
    holders: &mut [Vec<usize>],
    visited: &mut [bool],
) -> bool {
    for &h in &subnet.candidates[user] {
        if visited[h] {
            continue;
        }
        visited[h] = true;
        if holders[h].len() < cap {
            holders[h].push(user);
            return true;
        }
        for slot in 0..holders[h].len() {
            let other = holders[h][slot];
            if augment(subnet, cap, other, holders, visited) {
                holders[h][slot] = user;
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::fixtures::example_subnetwork;

    #[test]
    fn example_optimum() {
        let s = example_subnetwork();
        assert_eq!(brute_force_min_partitions(&s).unwrap(), 3);
        assert_eq!(flow_oracle(&s), 3);
        assert_eq!(lower_bound(&s), 3);
    }

    #[test]
    fn all_on_one_helper_is_serial() {
        let s = ProfileSubnetwork::new(0, 4, (0..6).collect(), vec![vec![0]; 6]).unwrap();
        assert_eq!(flow_oracle(&s), 6);
        assert_eq!(brute_force_min_partitions(&s).unwrap(), 6);
    }

    #[test]
    fn lower_bound_ceiling() {
        let mk = |c: usize| {
            ProfileSubnetwork::new(0, 4, (0..c).collect(), vec![vec![0, 1, 2, 3]; c]).unwrap()
        };
        assert_eq!(lower_bound(&mk(0)), 0);
        assert_eq!(lower_bound(&mk(5)), 2);
        assert_eq!(lower_bound(&mk(12)), 3);
        assert_eq!(flow_oracle(&mk(0)), 0);
        assert_eq!(flow_oracle(&mk(5)), 2);
    }

    #[test]
    fn degree_one_needs_no_enumeration() {
        let s = ProfileSubnetwork::new(
            0,
            3,
            (0..4).collect(),
            vec![vec![0], vec![0], vec![2], vec![1]],
        )
        .unwrap();
        assert_eq!(brute_force_min_partitions(&s).unwrap(), 2);
    }

    #[test]
    fn oversized_instance_rejected() {
        let n = 15; // 3^15 > 10^7
        let s = ProfileSubnetwork::new(0, 3, (0..n).collect(), vec![vec![0, 1, 2]; n]).unwrap();
        assert!(matches!(
            brute_force_min_partitions(&s),
            Err(Error::InstanceTooLarge { .. })
        ));
    }
}
