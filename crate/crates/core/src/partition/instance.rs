//! Plain-text subnetwork instances: one `user_id: h,h,...` line per user,
//! users and helpers 1-based, helpers ascending. Blank lines and `#` comments are skipped.

use std::fmt::Write;

use super::ProfileSubnetwork;
use crate::{Error, Result};

/// Parses an instance. The helper count is `helpers` when given, otherwise
/// the largest helper index that appears.
pub fn parse_instance(text: &str, helpers: Option<usize>) -> Result<ProfileSubnetwork> {
    let mut users = Vec::new();
    let mut candidates = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let (id, rest) = line
            .split_once(':')
            .ok_or_else(|| err("expected `user_id: h,h,...`".into()))?;
        let user: usize = id
            .trim()
            .parse()
            .map_err(|e| err(format!("bad user id {id:?}: {e}")))?;
        let cands = rest
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| match s.parse::<usize>() {
                Ok(0) => Err(err("helper indices start at 1".into())),
                Ok(h) => Ok(h - 1),
                Err(e) => Err(err(format!("bad helper {s:?}: {e}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if user == 0 {
            return Err(err("user ids start at 1".into()));
        }
        if cands.is_empty() {
            return Err(err(format!("user {user} lists no helper")));
        }
        if users.contains(&user) {
            return Err(err(format!("user {user} listed twice")));
        }
        users.push(user);
        candidates.push(cands);
    }
    let seen = candidates
        .iter()
        .flatten()
        .map(|h| h + 1)
        .max()
        .unwrap_or(0);
    let helpers = helpers.unwrap_or(seen);
    ProfileSubnetwork::new(0, helpers, users, candidates)
}

pub fn write_instance(subnet: &ProfileSubnetwork) -> String {
    let mut out = String::new();
    for (user, cands) in subnet.users.iter().zip(&subnet.candidates) {
        let hs: Vec<String> = cands.iter().map(|h| (h + 1).to_string()).collect();
        let _ = writeln!(out, "{user}: {}", hs.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::fixtures::example_subnetwork;
    use proptest::prelude::*;

    #[test]
    fn parses_example() {
        let text = "# example subnetwork\n1: 1\n2: 1,2\n3: 1,2\n4: 2\n5: 2\n6: 1,2,3\n7: 3\n8: 3\n9: 2,4\n10: 2,4\n11: 4\n12: 4\n";
        let s = parse_instance(text, None).unwrap();
        assert_eq!(s.helpers, 4);
        assert_eq!(s.users, (1..=12).collect::<Vec<_>>());
        assert_eq!(s.candidates, example_subnetwork().candidates);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(
            parse_instance("1 2 3", None),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_instance("\n1: 0", None),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_instance("1:", None).is_err());
        assert!(parse_instance("1: 1\n1: 2", None).is_err());
        assert!(parse_instance("x: 1", None).is_err());
        assert!(parse_instance("0: 1", None).is_err());
        assert!(parse_instance("1: 5", Some(4)).is_err());
    }

    proptest! {
        #[test]
        fn write_then_parse_is_identity(
            cands in prop::collection::vec(prop::collection::btree_set(0usize..6, 1..=6), 0..20)
        ) {
            let cands: Vec<Vec<usize>> = cands.into_iter().map(|s| s.into_iter().collect()).collect();
            let users: Vec<usize> = (0..cands.len()).map(|k| 3 * k + 1).collect();
            let s = ProfileSubnetwork::new(0, 6, users, cands).unwrap();
            let back = parse_instance(&write_instance(&s), Some(6)).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
