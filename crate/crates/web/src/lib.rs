//! Browser bindings. Every entry point takes plain numbers and returns a
//! JSON string, so the page needs no generated TypeScript types.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use helpercache::partition::{
    bb_assign_with_stats, build_tables, greedy_assign, lower_bound, partitions_from_assignment,
    PartitionSet, ProfileSubnetwork,
};
use helpercache::sim::{
    build_network, run_sweep, trial_seed, Density, ExperimentConfig, Method, Network, PointConfig,
    SweepVar,
};

#[derive(Serialize)]
struct Topology {
    helpers: Vec<[f64; 2]>,
    user_radius: f64,
    radius: f64,
    users: Vec<User>,
    /// Users dropped but out of every helper's reach.
    unreachable: Vec<[f64; 2]>,
    profile_counts: Vec<usize>,
}

#[derive(Serialize)]
struct User {
    x: f64,
    y: f64,
    profile: usize,
    helpers: Vec<usize>,
}

#[derive(Serialize)]
struct Partitioning {
    profile: usize,
    users: Vec<usize>,
    lower_bound: usize,
    bb: Vec<Vec<Option<usize>>>,
    greedy: Vec<Vec<Option<usize>>>,
    bb_states: usize,
}

#[derive(Serialize)]
struct SweepRow {
    r: f64,
    bb: f64,
    greedy: f64,
    bb_std: f64,
    greedy_std: f64,
    mean_k: f64,
}

fn point(
    helpers: usize,
    profiles: usize,
    radius: f64,
    user_radius: f64,
    density: f64,
) -> Result<PointConfig, String> {
    let mut c = ExperimentConfig::radius_sweep(vec![radius]);
    c.helpers = helpers;
    c.profiles = profiles;
    c.gamma = 1.0 / profiles.max(1) as f64;
    c.user_radius = user_radius;
    c.density = Density::Absolute(density);
    c.point(radius).map_err(|e| e.to_string())
}

fn network(
    helpers: usize,
    profiles: usize,
    radius: f64,
    user_radius: f64,
    density: f64,
    seed: u32,
) -> Result<Network, String> {
    let p = point(helpers, profiles, radius, user_radius, density)?;
    build_network(&p, trial_seed(u64::from(seed), 0)).map_err(|e| e.to_string())
}

fn slots(set: &PartitionSet) -> Vec<Vec<Option<usize>>> {
    set.partitions.iter().map(|p| p.slots.clone()).collect()
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// Helper positions, users with their profile and reachable helpers.
#[wasm_bindgen]
pub fn topology(
    helpers: usize,
    profiles: usize,
    radius: f64,
    user_radius: f64,
    density: f64,
    seed: u32,
) -> Result<String, String> {
    let net = network(helpers, profiles, radius, user_radius, density, seed)?;
    let conn = &net.connectivity;
    let users = conn
        .reachable_users
        .iter()
        .enumerate()
        .map(|(k, &raw)| User {
            x: net.users.positions[raw].x,
            y: net.users.positions[raw].y,
            profile: net.assignment.profile_of[k],
            helpers: conn.candidates(k),
        })
        .collect();
    let unreachable = (0..net.users.raw_count())
        .filter(|i| !conn.reachable_users.contains(i))
        .map(|i| [net.users.positions[i].x, net.users.positions[i].y])
        .collect();
    to_json(&Topology {
        helpers: net.layout.positions.iter().map(|p| [p.x, p.y]).collect(),
        user_radius,
        radius,
        users,
        unreachable,
        profile_counts: net.assignment.counts(),
    })
}

/// Branch-and-bound and greedy partitions of one profile's users. User
/// ids in the result index the `users` array of [`topology`].
#[wasm_bindgen]
pub fn partition_profile(
    helpers: usize,
    profiles: usize,
    radius: f64,
    user_radius: f64,
    density: f64,
    seed: u32,
    profile: usize,
) -> Result<String, String> {
    let net = network(helpers, profiles, radius, user_radius, density, seed)?;
    let members = net
        .assignment
        .members
        .get(profile)
        .ok_or_else(|| format!("profile {profile} out of range"))?;
    let subnet = ProfileSubnetwork::from_connectivity(&net.connectivity, profile, members)
        .map_err(|e| e.to_string())?;
    let tables = build_tables(&subnet);
    let (assignment, stats) = bb_assign_with_stats(&tables);
    let bb = partitions_from_assignment(&tables, &assignment).map_err(|e| e.to_string())?;
    to_json(&Partitioning {
        profile,
        users: members.clone(),
        lower_bound: lower_bound(&subnet),
        bb: slots(&bb),
        greedy: slots(&greedy_assign(&subnet)),
        bb_states: stats.generated,
    })
}

/// Mean sum-DoF of both methods over `r` values given as a comma-separated
/// list.
#[wasm_bindgen]
pub fn sweep_radius(
    helpers: usize,
    profiles: usize,
    radii: &str,
    user_radius: f64,
    density: f64,
    trials: usize,
    seed: u32,
) -> Result<String, String> {
    let values = radii
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut c = ExperimentConfig::radius_sweep(values);
    c.helpers = helpers;
    c.profiles = profiles;
    c.gamma = 1.0 / profiles.max(1) as f64;
    c.user_radius = user_radius;
    c.density = Density::Absolute(density);
    c.trials = trials;
    c.seed = u64::from(seed);
    c.sweep = SweepVar::Radius;
    let points = run_sweep(&c).map_err(|e| e.to_string())?;
    let rows: Vec<SweepRow> = points
        .iter()
        .map(|p| {
            let get = |m: Method| p.aggregates.iter().find(|a| a.method == m).unwrap();
            let (bb, gr) = (get(Method::Bb), get(Method::Greedy));
            SweepRow {
                r: p.sweep_value,
                bb: bb.mean_sum_dof,
                greedy: gr.mean_sum_dof,
                bb_std: bb.std_sum_dof,
                greedy_std: gr.std_sum_dof,
                mean_k: bb.mean_users,
            }
        })
        .collect();
    to_json(&rows)
}
