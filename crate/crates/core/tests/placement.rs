use helpercache::placement::{
    assign_profiles, binomial, needed_subfiles, subfile_indices, CacheConfig,
};
use helpercache::rng::{stream_rng, Stream};

#[test]
fn profile_counts_are_multinomial() {
    let (users, profiles) = (100_000, 10);
    let a = assign_profiles(users, profiles, &mut stream_rng(21, Stream::Profiles)).unwrap();
    let expected = users as f64 / profiles as f64;
    let chi2: f64 = a
        .counts()
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    // 9 degrees of freedom; 27.88 is the 0.999 quantile
    assert!(chi2 < 27.88, "chi2 = {chi2}");
    assert_eq!(a.counts().iter().sum::<usize>(), users);
}

#[test]
fn needed_and_cached_partition_the_library() {
    for l in 1..=12 {
        for t in 0..=l {
            let all = subfile_indices(l, t);
            assert_eq!(all.len() as u64, binomial(l, t));
            for p in 0..l {
                let need = needed_subfiles(p, l, t);
                assert_eq!(need.len() as u64, binomial(l - 1, t));
                assert!(need.iter().all(|s| !s.contains(p)));
            }
        }
    }
}

#[test]
fn fractional_gamma_l_is_rejected() {
    assert!(CacheConfig::new(10, 0.15).validate().is_err());
    assert_eq!(CacheConfig::new(10, 0.1).validate().unwrap(), 1);
}
