//! Least-cost branch and bound over helper choices for the multi-helper
//! users.
//!
//! A search state is a prefix `s` of helper choices for the multi-helper
//! users (taken in table order). Its cost is the largest helper load it
//! implies, counting the single-helper users. Cost never decreases along a
//! path, so the first complete state whose cost is minimal among all open
//! states is optimal.
//!
//! The walk follows a path greedily: expand the current state, and when
//! its cheapest child (lowest helper index on ties) is no more expensive
//! than every open state, move to that child. Otherwise jump to the
//! cheapest open state, preferring the deepest one and then the earliest
//! generated.
//!
//! Two states at the same depth with the same loads have identical
//! subtrees, so a child equal to an already generated state is dropped.
//! Without this the search enumerates every assignment whose cost stays
//! below the optimum, which is exponential in the number of users.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::Serialize;

use super::{DegreeTables, Partition, PartitionSet};
use crate::{Error, Result};

/// Helper choice for every multi-helper user, with the resulting loads.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment {
    /// `choices[j]` serves `tables.multi[j]`.
    pub choices: Vec<usize>,
    /// Users per helper, single-helper users included.
    pub loads: Vec<usize>,
    /// Largest load, which is the number of partitions.
    pub bound: usize,
}

impl Assignment {
    /// Checks `choices` against the tables and derives loads and bound.
    pub fn new(tables: &DegreeTables, choices: Vec<usize>) -> Result<Self> {
        if choices.len() != tables.multi.len() {
            return Err(Error::InvalidAssignment(format!(
                "{} choices for {} multi-helper users",
                choices.len(),
                tables.multi.len()
            )));
        }
        let mut loads = tables.single_loads();
        for (&h, (user, cands)) in choices.iter().zip(&tables.multi) {
            if cands.binary_search(&h).is_err() {
                return Err(Error::InvalidAssignment(format!(
                    "user {user} cannot be served by helper {h}"
                )));
            }
            loads[h] += 1;
        }
        let bound = loads.iter().copied().max().unwrap_or(0);
        Ok(Self {
            choices,
            loads,
            bound,
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// States generated, root excluded.
    pub generated: usize,
    /// States whose children were generated.
    pub expanded: usize,
    /// Jumps to an open state off the current path.
    pub jumps: usize,
    /// Children dropped as duplicates of a generated state.
    pub duplicates: usize,
}

struct Node {
    parent: usize,
    helper: usize,
    depth: usize,
    bound: usize,
    loads: Vec<usize>,
    open: bool,
}

// Min-heap key: cheapest first, then deepest, then earliest generated.
type Key = Reverse<(usize, Reverse<usize>, usize)>;

fn key(nodes: &[Node], id: usize) -> Key {
    Reverse((nodes[id].bound, Reverse(nodes[id].depth), id))
}

/// Minimum-bound assignment of the multi-helper users.
pub fn bb_assign(tables: &DegreeTables) -> Assignment {
    bb_assign_with_stats(tables).0
}

pub fn bb_assign_with_stats(tables: &DegreeTables) -> (Assignment, SearchStats) {
    let mut stats = SearchStats::default();
    let root_loads = tables.single_loads();
    let depth_goal = tables.multi.len();
    let mut nodes = vec![Node {
        parent: usize::MAX,
        helper: usize::MAX,
        depth: 0,
        bound: root_loads.iter().copied().max().unwrap_or(0),
        loads: root_loads,
        open: false,
    }];
    let mut heap: BinaryHeap<Key> = BinaryHeap::new();
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    seen.insert((0, nodes[0].loads.clone()));
    let mut current = 0;

    while nodes[current].depth < depth_goal {
        nodes[current].open = false;
        stats.expanded += 1;

        let j = nodes[current].depth;
        let mut best: Option<usize> = None;
        for &h in &tables.multi[j].1 {
            let mut loads = nodes[current].loads.clone();
            loads[h] += 1;
            let bound = nodes[current].bound.max(loads[h]);
            if !seen.insert((j + 1, loads.clone())) {
                stats.duplicates += 1;
                continue;
            }
            let id = nodes.len();
            nodes.push(Node {
                parent: current,
                helper: h,
                depth: j + 1,
                bound,
                loads,
                open: true,
            });
            heap.push(key(&nodes, id));
            stats.generated += 1;
            // candidates are ascending, so strict < keeps the lowest helper
            if best.is_none_or(|b| bound < nodes[b].bound) {
                best = Some(id);
            }
        }
        while let Some(Reverse((_, _, id))) = heap.peek() {
            if nodes[*id].open {
                break;
            }
            heap.pop();
        }
        // the optimal leaf is reachable from some open state, so the heap
        // cannot run dry before a complete state is reached
        let Reverse((min_open, _, top)) = *heap.peek().expect("open state remains");

        current = match best {
            Some(b) if nodes[b].bound <= min_open => b,
            _ => {
                stats.jumps += 1;
                heap.pop();
                top
            }
        };
    }

    let mut choices = vec![0; depth_goal];
    let mut id = current;
    while id != 0 {
        choices[nodes[id].depth - 1] = nodes[id].helper;
        id = nodes[id].parent;
    }
    let leaf = &nodes[current];
    let assignment = Assignment {
        choices,
        loads: leaf.loads.clone(),
        bound: leaf.bound,
    };
    (assignment, stats)
}

/// Lays the users out per helper (single-helper users first, then the
/// assigned multi-helper users in table order) and reads off partition `g`
/// as the `g`-th user of every helper.
pub fn partitions_from_assignment(
    tables: &DegreeTables,
    assignment: &Assignment,
) -> Result<PartitionSet> {
    let check = Assignment::new(tables, assignment.choices.clone())?;
    if check != *assignment {
        return Err(Error::InvalidAssignment(format!(
            "stated loads {:?} / bound {} do not match choices (loads {:?}, bound {})",
            assignment.loads, assignment.bound, check.loads, check.bound
        )));
    }
    let mut columns = tables.single.clone();
    for (&h, (user, _)) in assignment.choices.iter().zip(&tables.multi) {
        columns[h].push(*user);
    }
    let partitions = (0..assignment.bound)
        .map(|g| Partition {
            slots: columns.iter().map(|col| col.get(g).copied()).collect(),
        })
        .collect();
    Ok(PartitionSet { partitions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::fixtures::example_subnetwork;
    use crate::partition::{build_tables, ProfileSubnetwork};

    #[test]
    fn example_optimum_matches_published_assignment() {
        let tables = build_tables(&example_subnetwork());
        let (a, stats) = bb_assign_with_stats(&tables);
        assert_eq!(a.bound, 3);
        assert_eq!(a.loads, vec![3, 3, 3, 3]);
        // u2->e1, u3->e1, u6->e3, u9->e2, u10->e4
        assert_eq!(a.choices, vec![0, 0, 2, 1, 3]);
        assert!(stats.jumps >= 1);
    }

    #[test]
    fn example_partitions() {
        let s = example_subnetwork();
        let tables = build_tables(&s);
        let a = bb_assign(&tables);
        let set = partitions_from_assignment(&tables, &a).unwrap();
        set.validate(&s).unwrap();
        let rendered: Vec<Vec<usize>> = set
            .partitions
            .iter()
            .map(|p| p.slots.iter().map(|u| u.unwrap() + 1).collect())
            .collect();
        assert_eq!(
            rendered,
            vec![vec![1, 4, 7, 11], vec![2, 5, 8, 12], vec![3, 9, 6, 10]]
        );
    }

    #[test]
    fn no_multi_users() {
        let s = ProfileSubnetwork::new(
            0,
            4,
            (0..7).collect(),
            vec![
                vec![0],
                vec![1],
                vec![1],
                vec![2],
                vec![2],
                vec![3],
                vec![3],
            ],
        )
        .unwrap();
        let tables = build_tables(&s);
        let a = bb_assign(&tables);
        assert!(a.choices.is_empty());
        assert_eq!(a.bound, 2);
        let set = partitions_from_assignment(&tables, &a).unwrap();
        assert_eq!(set.count(), 2);
        set.validate(&s).unwrap();
    }

    #[test]
    fn empty_subnetwork() {
        let s = ProfileSubnetwork::new(0, 4, vec![], vec![]).unwrap();
        let tables = build_tables(&s);
        let a = bb_assign(&tables);
        assert_eq!(a.bound, 0);
        assert_eq!(partitions_from_assignment(&tables, &a).unwrap().count(), 0);
    }

    #[test]
    fn single_helper_network_is_serial() {
        let s = ProfileSubnetwork::new(0, 1, (0..5).collect(), vec![vec![0]; 5]).unwrap();
        assert_eq!(bb_assign(&build_tables(&s)).bound, 5);
    }

    #[test]
    fn inconsistent_assignment_rejected() {
        let tables = build_tables(&example_subnetwork());
        // u2 cannot use helper e3
        assert!(Assignment::new(&tables, vec![2, 0, 2, 1, 3]).is_err());
        assert!(Assignment::new(&tables, vec![0, 0]).is_err());
        let mut a = bb_assign(&tables);
        a.bound = 2;
        assert!(partitions_from_assignment(&tables, &a).is_err());
    }

    #[test]
    fn partition_count_equals_max_load() {
        let tables = build_tables(&example_subnetwork());
        for choices in [
            vec![0, 0, 0, 1, 1],
            vec![1, 1, 1, 3, 3],
            vec![0, 1, 2, 3, 1],
        ] {
            let a = Assignment::new(&tables, choices).unwrap();
            let set = partitions_from_assignment(&tables, &a).unwrap();
            assert_eq!(set.count(), *a.loads.iter().max().unwrap());
            set.validate(&example_subnetwork()).unwrap();
        }
    }

    #[test]
    fn deterministic() {
        let tables = build_tables(&example_subnetwork());
        assert_eq!(
            bb_assign_with_stats(&tables).0,
            bb_assign_with_stats(&tables).0
        );
    }
}
