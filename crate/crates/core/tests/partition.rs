use helpercache::partition::{
    bb_assign, brute_force_min_partitions, build_tables, flow_oracle, greedy_assign, lower_bound,
    parse_instance, partitions_from_assignment, ProfileSubnetwork,
};
use proptest::prelude::*;

fn subnetwork() -> impl Strategy<Value = ProfileSubnetwork> {
    (1usize..=4).prop_flat_map(|e| {
        prop::collection::vec(prop::collection::btree_set(0..e, 1..=e), 0..=12).prop_map(move |c| {
            let n = c.len();
            ProfileSubnetwork::new(
                0,
                e,
                (1..=n).collect(),
                c.into_iter().map(|s| s.into_iter().collect()).collect(),
            )
            .unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn bb_matches_oracles_and_beats_greedy(s in subnetwork()) {
        let tables = build_tables(&s);
        let bb = partitions_from_assignment(&tables, &bb_assign(&tables)).unwrap();
        bb.validate(&s).unwrap();
        let greedy = greedy_assign(&s);
        greedy.validate(&s).unwrap();
        let brute = brute_force_min_partitions(&s).unwrap();
        prop_assert_eq!(bb.count(), brute);
        prop_assert_eq!(flow_oracle(&s), brute);
        prop_assert!(lower_bound(&s) <= bb.count());
        prop_assert!(bb.count() <= greedy.count());
    }

    #[test]
    fn bb_is_deterministic(s in subnetwork()) {
        let t = build_tables(&s);
        prop_assert_eq!(bb_assign(&t), bb_assign(&t));
    }
}

#[test]
fn large_dense_profile_is_solved_quickly() {
    // 40 users all reaching the same three of four helpers
    let n = 40;
    let cands = (0..n)
        .map(|k| if k % 5 == 0 { vec![3] } else { vec![0, 1, 2] })
        .collect();
    let s = ProfileSubnetwork::new(0, 4, (1..=n).collect(), cands).unwrap();
    let t = build_tables(&s);
    let start = std::time::Instant::now();
    let a = bb_assign(&t);
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert_eq!(a.bound, flow_oracle(&s));
    assert_eq!(a.bound, 11);
}

#[test]
fn instance_file_round_trip_through_solvers() {
    let text =
        "1: 1\n2: 1,2\n3: 1,2\n4: 2\n5: 2\n6: 1,2,3\n7: 3\n8: 3\n9: 2,4\n10: 2,4\n11: 4\n12: 4\n";
    let s = parse_instance(text, None).unwrap();
    let t = build_tables(&s);
    let set = partitions_from_assignment(&t, &bb_assign(&t)).unwrap();
    let shown: Vec<String> = set.partitions.iter().map(|p| p.to_string()).collect();
    assert_eq!(shown, ["1-4-7-11", "2-5-8-12", "3-9-6-10"]);
}
