use serde::Serialize;

use super::ProfileSubnetwork;

/// Users split by degree. Single-helper users are stacked in their
/// helper's column; multi-helper users keep their full candidate list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeTables {
    pub helpers: usize,
    /// `single[i]`: users whose only helper is `i`, in service order.
    pub single: Vec<Vec<usize>>,
    /// `(user, candidates)` for every user with two or more helpers.
    pub multi: Vec<(usize, Vec<usize>)>,
}

impl DegreeTables {
    /// Column heights of the single-helper table.
    pub fn single_loads(&self) -> Vec<usize> {
        self.single.iter().map(Vec::len).collect()
    }

    pub fn users(&self) -> usize {
        self.single.iter().map(Vec::len).sum::<usize>() + self.multi.len()
    }
}

pub fn build_tables(subnet: &ProfileSubnetwork) -> DegreeTables {
    let mut single = vec![Vec::new(); subnet.helpers];
    let mut multi = Vec::new();
    for (&user, cands) in subnet.users.iter().zip(&subnet.candidates) {
        match cands.as_slice() {
            [only] => single[*only].push(user),
            _ => multi.push((user, cands.clone())),
        }
    }
    DegreeTables {
        helpers: subnet.helpers,
        single,
        multi,
    }
}
