//! Superposed multicast signals and per-user decoding by cache
//! cancellation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::precoder::build_precoder;
use super::schedule::Round;
use crate::placement::{cached_by, ProfileAssignment, SubfileIndex};
use crate::rng::derive_seed;
use crate::topology::ChannelMatrix;
use crate::{Error, Result};

/// Worst-case demands: every user asks for a different file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Demands {
    pub file_of: Vec<usize>,
}

impl Demands {
    /// User `k` requests file `k`.
    pub fn distinct(users: usize) -> Self {
        Self {
            file_of: (0..users).collect(),
        }
    }

    pub fn file(&self, user: usize) -> usize {
        self.file_of[user]
    }
}

/// Stand-in payload: one unit-variance complex symbol per subfile, a pure
/// function of the seed, the file and the subfile index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubfileSymbols {
    pub seed: u64,
}

impl SubfileSymbols {
    pub fn symbol(&self, file: usize, index: &SubfileIndex) -> Complex64 {
        let mut parts = vec![self.seed, file as u64, index.len() as u64];
        parts.extend(index.profiles().iter().map(|&p| p as u64));
        let h1 = derive_seed(&parts);
        let h2 = derive_seed(&[h1, 0x5eed]);
        // Box-Muller on two 53-bit uniforms, u1 in (0, 1]
        let u1 = ((h1 >> 11) as f64 + 1.0) / (1u64 << 53) as f64;
        let u2 = (h2 >> 11) as f64 / (1u64 << 53) as f64;
        let r = (-u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        Complex64::new(r * theta.cos(), r * theta.sin())
    }
}

/// Precoders of every profile served in one round.
#[derive(Debug, Clone)]
pub struct RoundPrecoders {
    pub inverses: Vec<Option<DMatrix<Complex64>>>,
}

impl RoundPrecoders {
    pub fn build(round: &Round, channel: &ChannelMatrix) -> Result<Self> {
        let inverses = round
            .entries
            .iter()
            .map(|e| {
                e.as_ref()
                    .map(|p| build_precoder(channel, &p.helpers, &p.users))
                    .transpose()
            })
            .collect::<Result<_>>()?;
        Ok(Self { inverses })
    }
}

/// One profile's contribution to a transmission.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileBlock {
    pub profile: usize,
    pub helpers: Vec<usize>,
    pub users: Vec<usize>,
    /// Group minus this profile; the subfile every user of the block gets.
    pub subfile: SubfileIndex,
    /// Precoded block embedded in the length-E transmit vector.
    #[serde(skip)]
    pub padded: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmissionRecord {
    pub round: usize,
    pub group: SubfileIndex,
    pub blocks: Vec<ProfileBlock>,
    #[serde(skip)]
    pub signal: Vec<Complex64>,
}

impl TransmissionRecord {
    pub fn served_profiles(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.profile).collect()
    }

    pub fn served_users(&self) -> usize {
        self.blocks.iter().map(|b| b.users.len()).sum()
    }
}

/// Embeds `block` (indexed like `helpers`) into a length-`len` vector.
pub fn zero_pad(block: &[Complex64], helpers: &[usize], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (&h, &v) in helpers.iter().zip(block) {
        out[h] = v;
    }
    out
}

fn precoded_block(
    precoder: &DMatrix<Complex64>,
    users: &[usize],
    helpers: &[usize],
    subfile: &SubfileIndex,
    demands: &Demands,
    symbols: &SubfileSymbols,
    len: usize,
) -> Vec<Complex64> {
    let w = DVector::from_iterator(
        users.len(),
        users
            .iter()
            .map(|&u| symbols.symbol(demands.file(u), subfile)),
    );
    let v = precoder * w;
    zero_pad(v.as_slice(), helpers, len)
}

/// The signal sent for multicast group `group` in round `round_index`, or
/// `None` when none of the group's profiles is served in that round.
#[allow(clippy::too_many_arguments)]
pub fn compose_signal(
    round_index: usize,
    round: &Round,
    precoders: &RoundPrecoders,
    group: &SubfileIndex,
    demands: &Demands,
    symbols: &SubfileSymbols,
    helpers: usize,
) -> Option<TransmissionRecord> {
    let effective = round.effective_group(group);
    if effective.is_empty() {
        return None;
    }
    let mut signal = vec![Complex64::new(0.0, 0.0); helpers];
    let blocks = effective
        .into_iter()
        .map(|profile| {
            let part = round.entries[profile]
                .as_ref()
                .expect("effective profile is served");
            let precoder = precoders.inverses[profile]
                .as_ref()
                .expect("precoder built for every served profile");
            let subfile = group.without(profile);
            let padded = precoded_block(
                precoder,
                &part.users,
                &part.helpers,
                &subfile,
                demands,
                symbols,
                helpers,
            );
            for (s, p) in signal.iter_mut().zip(&padded) {
                *s += p;
            }
            ProfileBlock {
                profile,
                helpers: part.helpers.clone(),
                users: part.users.clone(),
                subfile,
                padded,
            }
        })
        .collect();
    Some(TransmissionRecord {
        round: round_index,
        group: group.clone(),
        blocks,
        signal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecodeResidual {
    pub user: usize,
    pub residual: f64,
}

fn decode_failure(record: &TransmissionRecord, user: usize, residual: f64) -> Error {
    Error::DecodeFailure {
        user,
        round: record.round,
        group: record.group.profiles().to_vec(),
        residual,
    }
}

/// Each served user receives `h_k^T x`, removes every other profile's
/// block (rebuilt from subfiles its own cache holds) and compares what is
/// left with the subfile it wanted.
pub fn verify_decode(
    record: &TransmissionRecord,
    channel: &ChannelMatrix,
    precoders: &RoundPrecoders,
    assignment: &ProfileAssignment,
    demands: &Demands,
    symbols: &SubfileSymbols,
) -> Result<Vec<DecodeResidual>> {
    let len = record.signal.len();
    let mut out = Vec::with_capacity(record.served_users());
    for block in &record.blocks {
        for &user in &block.users {
            let own = assignment.profile_of[user];
            if own != block.profile {
                return Err(decode_failure(record, user, f64::INFINITY));
            }
            let mut remainder = channel.receive(user, &record.signal);
            for other in record.blocks.iter().filter(|b| b.profile != own) {
                // the interfering subfiles must sit in this user's cache
                if !cached_by(own, &other.subfile) {
                    return Err(decode_failure(record, user, f64::INFINITY));
                }
                let precoder = precoders.inverses[other.profile]
                    .as_ref()
                    .expect("precoder for served profile");
                let rebuilt = precoded_block(
                    precoder,
                    &other.users,
                    &other.helpers,
                    &other.subfile,
                    demands,
                    symbols,
                    len,
                );
                remainder -= channel.receive(user, &rebuilt);
            }
            let wanted = symbols.symbol(demands.file(user), &block.subfile);
            let residual = (remainder - wanted).norm();
            if residual.is_nan() || residual >= 1e-9 * (wanted.norm() + 1.0) {
                return Err(decode_failure(record, user, residual));
            }
            out.push(DecodeResidual { user, residual });
        }
    }
    Ok(out)
}
