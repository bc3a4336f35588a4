//! Transmission phase: rounds over partitions, multicast groups of
//! `t + 1` profiles, zero-forcing signals and their decoding.

mod coverage;
mod precoder;
mod schedule;
mod signal;
mod stats;

use std::io::Write;

use serde::Serialize;

use crate::placement::{k_subsets, ProfileAssignment};
use crate::topology::ChannelMatrix;
use crate::Result;

pub use coverage::coverage_check;
pub use precoder::{build_precoder, channel_submatrix, zero_forcing_error, MAX_CONDITION};
pub use schedule::{
    build_schedule, count_transmissions, enumerate_transmissions, Round, RoundSchedule,
    ScheduledPartition,
};
pub use signal::{
    compose_signal, verify_decode, zero_pad, DecodeResidual, Demands, ProfileBlock, RoundPrecoders,
    SubfileSymbols, TransmissionRecord,
};
pub use stats::{delivery_time, sum_dof, DeliveryStats};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct VerificationSummary {
    pub transmissions: u64,
    pub decoded: usize,
    pub max_residual: f64,
    pub max_zero_forcing_error: f64,
}

/// Sends every transmission of `schedule` over `channel`, decodes at every
/// served user and audits coverage. Fails on the first user that cannot
/// recover its subfile.
pub fn verify_schedule(
    schedule: &RoundSchedule,
    channel: &ChannelMatrix,
    assignment: &ProfileAssignment,
    t: usize,
    symbols: &SubfileSymbols,
) -> Result<VerificationSummary> {
    let demands = Demands::distinct(assignment.users());
    let groups = k_subsets(schedule.profiles, t + 1);
    let mut summary = VerificationSummary::default();
    for (g, round) in schedule.rounds.iter().enumerate() {
        let precoders = RoundPrecoders::build(round, channel)?;
        for (entry, inv) in round.entries.iter().zip(&precoders.inverses) {
            if let (Some(p), Some(inv)) = (entry, inv) {
                let sub = channel_submatrix(channel, &p.helpers, &p.users);
                summary.max_zero_forcing_error = summary
                    .max_zero_forcing_error
                    .max(zero_forcing_error(&sub, inv));
            }
        }
        for group in &groups {
            let Some(record) = compose_signal(
                g,
                round,
                &precoders,
                group,
                &demands,
                symbols,
                channel.helpers(),
            ) else {
                continue;
            };
            summary.transmissions += 1;
            for r in verify_decode(&record, channel, &precoders, assignment, &demands, symbols)? {
                summary.decoded += 1;
                summary.max_residual = summary.max_residual.max(r.residual);
            }
        }
    }
    coverage_check(schedule, assignment, t)?;
    Ok(summary)
}

/// One `round,group,profiles_served,users_served,subfile_indices` line per
/// transmission. Rounds and profiles are 1-based, sets are written as
/// `{a b}` and per-profile subfile indices are joined by `|`.
pub fn write_trace<W: Write>(
    out: &mut W,
    schedule: &RoundSchedule,
    t: usize,
) -> std::io::Result<()> {
    writeln!(
        out,
        "round,group,profiles_served,users_served,subfile_indices"
    )?;
    let groups = k_subsets(schedule.profiles, t + 1);
    for (g, round) in schedule.rounds.iter().enumerate() {
        for group in &groups {
            let served = round.effective_group(group);
            if served.is_empty() {
                continue;
            }
            let users: usize = served
                .iter()
                .map(|&p| round.entries[p].as_ref().map_or(0, |e| e.users.len()))
                .sum();
            let profiles: Vec<String> = served.iter().map(|p| (p + 1).to_string()).collect();
            let subfiles: Vec<String> = served
                .iter()
                .map(|&p| group.without(p).to_string())
                .collect();
            writeln!(
                out,
                "{},{},{{{}}},{},{}",
                g + 1,
                group,
                profiles.join(" "),
                users,
                subfiles.join("|")
            )?;
        }
    }
    Ok(())
}
