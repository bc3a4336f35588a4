use super::{Partition, PartitionSet, ProfileSubnetwork};

/// Builds partitions one at a time: helpers are scanned in index order and
/// each takes the first not-yet-placed user it has a link to.
pub fn greedy_assign(subnet: &ProfileSubnetwork) -> PartitionSet {
    let mut placed = vec![false; subnet.len()];
    let mut remaining = subnet.len();
    let mut partitions = Vec::new();
    while remaining > 0 {
        let mut slots = vec![None; subnet.helpers];
        for (helper, slot) in slots.iter_mut().enumerate() {
            let pick = (0..subnet.len())
                .find(|&j| !placed[j] && subnet.candidates[j].binary_search(&helper).is_ok());
            if let Some(j) = pick {
                placed[j] = true;
                remaining -= 1;
                *slot = Some(subnet.users[j]);
            }
        }
        partitions.push(Partition { slots });
    }
    PartitionSet { partitions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::fixtures::example_subnetwork;

    fn one_based(p: &Partition) -> Vec<usize> {
        p.slots.iter().map(|s| s.map_or(0, |u| u + 1)).collect()
    }

    #[test]
    fn example_greedy_partitions() {
        let s = example_subnetwork();
        let set = greedy_assign(&s);
        let got: Vec<Vec<usize>> = set.partitions.iter().map(one_based).collect();
        assert_eq!(
            got,
            vec![
                vec![1, 2, 6, 9],
                vec![3, 4, 7, 10],
                vec![0, 5, 8, 11],
                vec![0, 0, 0, 12]
            ]
        );
        set.validate(&s).unwrap();
    }

    #[test]
    fn single_user() {
        let s = ProfileSubnetwork::new(0, 3, vec![7], vec![vec![1]]).unwrap();
        let set = greedy_assign(&s);
        assert_eq!(set.count(), 1);
        assert_eq!(set.partitions[0].slots, vec![None, Some(7), None]);
    }

    #[test]
    fn fully_connected_fills_partitions() {
        for e in 1..=5usize {
            for c in 1..=4usize {
                let n = c * e;
                let s = ProfileSubnetwork::new(0, e, (0..n).collect(), vec![(0..e).collect(); n])
                    .unwrap();
                let set = greedy_assign(&s);
                assert_eq!(set.count(), c);
                assert!(set.partitions.iter().all(|p| p.len() == e));
            }
        }
    }

    #[test]
    fn empty_subnetwork() {
        let s = ProfileSubnetwork::new(0, 4, vec![], vec![]).unwrap();
        assert_eq!(greedy_assign(&s).count(), 0);
    }
}
