use std::collections::BTreeMap;

use super::schedule::RoundSchedule;
use crate::placement::{k_subsets, needed_subfiles, ProfileAssignment, SubfileIndex};
use crate::{Error, Result};

/// Replays the schedule and checks that every user receives each subfile
/// index it lacks exactly once and nothing else.
pub fn coverage_check(
    schedule: &RoundSchedule,
    assignment: &ProfileAssignment,
    t: usize,
) -> Result<()> {
    let profiles = assignment.profiles();
    if schedule.profiles != profiles {
        return Err(Error::Coverage(format!(
            "schedule has {} profiles, assignment {}",
            schedule.profiles, profiles
        )));
    }
    let groups = k_subsets(profiles, t + 1);
    let mut received: BTreeMap<usize, Vec<SubfileIndex>> = BTreeMap::new();
    for round in &schedule.rounds {
        for group in &groups {
            for profile in round.effective_group(group) {
                let part = round.entries[profile].as_ref().expect("served profile");
                let subfile = group.without(profile);
                for &u in &part.users {
                    received.entry(u).or_default().push(subfile.clone());
                }
            }
        }
    }

    let mut problems = Vec::new();
    let needed: Vec<Vec<SubfileIndex>> = (0..profiles)
        .map(|p| needed_subfiles(p, profiles, t))
        .collect();
    for (user, &profile) in assignment.profile_of.iter().enumerate() {
        let mut got = received.remove(&user).unwrap_or_default();
        got.sort();
        if got != needed[profile] {
            let missing = needed[profile].iter().filter(|s| !got.contains(s)).count();
            let extra = got.len() as isize - (needed[profile].len() - missing) as isize;
            problems.push(format!(
                "user {user} (profile {}): {missing} missing, {extra} duplicate or unexpected",
                profile + 1
            ));
        }
    }
    for user in received.keys() {
        problems.push(format!("user {user} is scheduled but has no profile"));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Coverage(problems.join("; ")))
    }
}
