//! Network geometry: helper layout, Poisson users, radius-limited
//! connectivity and the channel matrix with its structural zeros.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::Serialize;

use crate::{Error, Result};

/// Distance between centers of two edge-sharing hexagons of circumradius 1.
pub const HEX_SPACING: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HelperLayout {
    pub positions: Vec<Point>,
}

impl HelperLayout {
    pub fn count(&self) -> usize {
        self.positions.len()
    }

    /// Largest distance from the layout centroid (the origin) to a helper.
    pub fn max_radius(&self) -> f64 {
        self.positions.iter().map(Point::norm).fold(0.0, f64::max)
    }
}

// Axial neighbour directions, walked in this order around each ring.
const AXIAL_DIRS: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

/// `count` hexagon centers packed as a compact spiral on the triangular
/// lattice, translated so that their centroid is the origin.
pub fn hex_layout(count: usize) -> Result<HelperLayout> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "helper count must be at least 1".into(),
        ));
    }
    let mut cells = vec![(0i64, 0i64)];
    let mut ring = 1i64;
    'outer: while cells.len() < count {
        let (mut q, mut r) = (AXIAL_DIRS[4].0 * ring, AXIAL_DIRS[4].1 * ring);
        for &(dq, dr) in &AXIAL_DIRS {
            for _ in 0..ring {
                cells.push((q, r));
                if cells.len() == count {
                    break 'outer;
                }
                q += dq;
                r += dr;
            }
        }
        ring += 1;
    }

    let mut positions: Vec<Point> = cells
        .iter()
        .map(|&(q, r)| {
            let (q, r) = (q as f64, r as f64);
            Point::new(HEX_SPACING * (q + r / 2.0), 1.5 * r)
        })
        .collect();
    let n = positions.len() as f64;
    let cx = positions.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = positions.iter().map(|p| p.y).sum::<f64>() / n;
    for p in &mut positions {
        p.x -= cx;
        p.y -= cy;
    }
    Ok(HelperLayout { positions })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserField {
    pub positions: Vec<Point>,
    /// Radius of the disk the users are dropped in.
    pub disk_radius: f64,
    /// Users per unit area.
    pub density: f64,
}

impl UserField {
    pub fn raw_count(&self) -> usize {
        self.positions.len()
    }

    /// Mean of the Poisson user count, `density * pi * disk_radius^2`.
    pub fn expected_count(density: f64, disk_radius: f64) -> f64 {
        density * PI * disk_radius * disk_radius
    }

    pub fn from_positions(positions: Vec<Point>, disk_radius: f64) -> Self {
        Self {
            positions,
            disk_radius,
            density: 0.0,
        }
    }
}

/// Homogeneous Poisson point process on the disk of radius `disk_radius`
/// centered at the origin.
pub fn sample_users<R: Rng + ?Sized>(
    density: f64,
    disk_radius: f64,
    rng: &mut R,
) -> Result<UserField> {
    if !density.is_finite() || density <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "user density must be positive, got {density}"
        )));
    }
    if !disk_radius.is_finite() || disk_radius <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "user disk radius must be positive, got {disk_radius}"
        )));
    }
    let mean = UserField::expected_count(density, disk_radius);
    let count = Poisson::new(mean)
        .map_err(|e| Error::InvalidParameter(format!("poisson mean {mean}: {e}")))?
        .sample(rng) as usize;
    let positions = (0..count)
        .map(|_| {
            let rho = disk_radius * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            Point::new(rho * theta.cos(), rho * theta.sin())
        })
        .collect();
    Ok(UserField {
        positions,
        disk_radius,
        density,
    })
}

/// Radius-limited helper/user links over the users that can be reached by
/// at least one helper.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Connectivity {
    /// `adjacency[i][k]`: helper `i` reaches kept user `k`.
    pub adjacency: Vec<Vec<bool>>,
    pub radius: f64,
    /// Indices into the originating [`UserField`] of the kept users.
    pub reachable_users: Vec<usize>,
}

impl Connectivity {
    pub fn helpers(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of kept users, K.
    pub fn users(&self) -> usize {
        self.reachable_users.len()
    }

    pub fn linked(&self, helper: usize, user: usize) -> bool {
        self.adjacency[helper][user]
    }

    /// Helpers reaching kept user `user`, ascending.
    pub fn candidates(&self, user: usize) -> Vec<usize> {
        (0..self.helpers())
            .filter(|&i| self.adjacency[i][user])
            .collect()
    }

    /// Builds a connectivity from explicit candidate lists, one per user.
    /// Users with no candidate are dropped, as in [`connect`].
    pub fn from_candidates(helpers: usize, candidates: &[Vec<usize>]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); helpers];
        let mut reachable_users = Vec::new();
        for (k, cands) in candidates.iter().enumerate() {
            if let Some(&bad) = cands.iter().find(|&&i| i >= helpers) {
                return Err(Error::InvalidParameter(format!(
                    "user {k} lists helper {bad} but only {helpers} helpers exist"
                )));
            }
            if cands.is_empty() {
                continue;
            }
            reachable_users.push(k);
            for (i, row) in adjacency.iter_mut().enumerate() {
                row.push(cands.contains(&i));
            }
        }
        Ok(Self {
            adjacency,
            radius: f64::NAN,
            reachable_users,
        })
    }

    pub fn is_fully_connected(&self) -> bool {
        self.adjacency.iter().all(|row| row.iter().all(|&b| b))
    }
}

/// Links every helper to every user within `radius`, then prunes users
/// that no helper reaches.
pub fn connect(layout: &HelperLayout, users: &UserField, radius: f64) -> Result<Connectivity> {
    if radius.is_nan() || radius < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "transmission radius must be nonnegative, got {radius}"
        )));
    }
    let full: Vec<Vec<bool>> = layout
        .positions
        .iter()
        .map(|h| {
            users
                .positions
                .iter()
                .map(|u| h.dist(u) <= radius)
                .collect()
        })
        .collect();
    let reachable_users: Vec<usize> = (0..users.raw_count())
        .filter(|&k| full.iter().any(|row| row[k]))
        .collect();
    let adjacency = full
        .iter()
        .map(|row| reachable_users.iter().map(|&k| row[k]).collect())
        .collect();
    Ok(Connectivity {
        adjacency,
        radius,
        reachable_users,
    })
}

/// K x E channel gains; row `k` is the channel vector of kept user `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    pub coefficients: DMatrix<Complex64>,
}

impl ChannelMatrix {
    pub fn users(&self) -> usize {
        self.coefficients.nrows()
    }

    pub fn helpers(&self) -> usize {
        self.coefficients.ncols()
    }

    pub fn gain(&self, user: usize, helper: usize) -> Complex64 {
        self.coefficients[(user, helper)]
    }

    /// Inner product of user `user`'s channel with a length-E transmit vector.
    pub fn receive(&self, user: usize, signal: &[Complex64]) -> Complex64 {
        signal
            .iter()
            .enumerate()
            .map(|(i, x)| self.coefficients[(user, i)] * x)
            .sum()
    }
}

/// Unit-variance circularly-symmetric complex Gaussian draw.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws i.i.d. complex Gaussian gains on every link and exact zeros
/// elsewhere.
pub fn draw_channels<R: Rng + ?Sized>(conn: &Connectivity, rng: &mut R) -> ChannelMatrix {
    let (k, e) = (conn.users(), conn.helpers());
    let mut coefficients = DMatrix::from_element(k, e, Complex64::new(0.0, 0.0));
    for user in 0..k {
        for helper in 0..e {
            if conn.linked(helper, user) {
                let mut h = complex_gaussian(rng);
                while h == Complex64::new(0.0, 0.0) {
                    h = complex_gaussian(rng);
                }
                coefficients[(user, helper)] = h;
            }
        }
    }
    ChannelMatrix { coefficients }
}

/// Debug dump: `helper,i,x,y`, `user,k,x,y` (raw user index) and
/// `link,i,k` (kept user index) records, one per line.
pub fn write_topology_dump<W: Write>(
    out: &mut W,
    layout: &HelperLayout,
    users: &UserField,
    conn: &Connectivity,
) -> std::io::Result<()> {
    for (i, p) in layout.positions.iter().enumerate() {
        writeln!(out, "helper,{i},{:.15e},{:.15e}", p.x, p.y)?;
    }
    for (k, p) in users.positions.iter().enumerate() {
        writeln!(out, "user,{k},{:.15e},{:.15e}", p.x, p.y)?;
    }
    for (i, row) in conn.adjacency.iter().enumerate() {
        for (k, &linked) in row.iter().enumerate() {
            if linked {
                writeln!(out, "link,{i},{k}")?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, Stream};

    fn min_pairwise(points: &[Point]) -> f64 {
        let mut best = f64::INFINITY;
        for (a, p) in points.iter().enumerate() {
            for q in &points[a + 1..] {
                best = best.min(p.dist(q));
            }
        }
        best
    }

    #[test]
    fn single_helper_sits_at_origin() {
        let layout = hex_layout(1).unwrap();
        assert_eq!(layout.positions, vec![Point::ORIGIN]);
    }

    #[test]
    fn zero_helpers_rejected() {
        assert!(matches!(hex_layout(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn two_helpers_share_an_edge() {
        let l = hex_layout(2).unwrap();
        assert!((l.positions[0].dist(&l.positions[1]) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn four_helper_cluster_geometry() {
        let l = hex_layout(4).unwrap();
        assert_eq!(l.count(), 4);
        assert!((min_pairwise(&l.positions) - 3f64.sqrt()).abs() < 1e-12);
        let cx: f64 = l.positions.iter().map(|p| p.x).sum();
        let cy: f64 = l.positions.iter().map(|p| p.y).sum();
        assert!(cx.abs() < 1e-12 && cy.abs() < 1e-12);
        // rhombus of two triangles: five edge-sharing pairs, one long diagonal of 3
        let mut adjacent = 0;
        for a in 0..4 {
            for b in a + 1..4 {
                if (l.positions[a].dist(&l.positions[b]) - 3f64.sqrt()).abs() < 1e-9 {
                    adjacent += 1;
                }
            }
        }
        assert_eq!(adjacent, 5);
        assert!((l.max_radius() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn larger_layouts_are_distinct_lattice_points() {
        for e in 1..=40 {
            let l = hex_layout(e).unwrap();
            assert_eq!(l.count(), e);
            if e > 1 {
                assert!(min_pairwise(&l.positions) > 3f64.sqrt() - 1e-9);
            }
        }
    }

    #[test]
    fn users_stay_inside_disk() {
        let mut rng = stream_rng(3, Stream::Users);
        let f = sample_users(5.0, 2.7, &mut rng).unwrap();
        assert!(f.raw_count() > 0);
        assert!(f.positions.iter().all(|p| p.norm() <= 2.7 + 1e-12));
    }

    #[test]
    fn tiny_density_gives_empty_field() {
        let mut rng = stream_rng(3, Stream::Users);
        let f = sample_users(1e-12, 1.0, &mut rng).unwrap();
        assert_eq!(f.raw_count(), 0);
    }

    #[test]
    fn fig5_expected_user_count() {
        let u = 12.0 / (1.2f64 * 1.2 * PI);
        assert!((UserField::expected_count(u, 2.7) - 60.75).abs() < 1e-9);
    }

    #[test]
    fn bad_sampling_parameters_rejected() {
        let mut rng = stream_rng(0, Stream::Users);
        assert!(sample_users(0.0, 1.0, &mut rng).is_err());
        assert!(sample_users(1.0, -1.0, &mut rng).is_err());
    }

    #[test]
    fn zero_radius_links_nothing() {
        let layout = hex_layout(4).unwrap();
        let users =
            UserField::from_positions(vec![Point::new(0.3, 0.2), Point::new(-1.0, 0.5)], 2.0);
        let conn = connect(&layout, &users, 0.0).unwrap();
        assert_eq!(conn.users(), 0);
    }

    #[test]
    fn user_on_helper_is_linked_even_at_zero_radius() {
        let layout = hex_layout(4).unwrap();
        let users = UserField::from_positions(vec![layout.positions[2]], 2.0);
        let conn = connect(&layout, &users, 0.0).unwrap();
        assert_eq!(conn.users(), 1);
        assert_eq!(conn.candidates(0), vec![2]);
    }

    #[test]
    fn large_radius_is_fully_connected() {
        let layout = hex_layout(4).unwrap();
        let mut rng = stream_rng(11, Stream::Users);
        let users = sample_users(3.0, 2.7, &mut rng).unwrap();
        let r = 2.7 + layout.max_radius();
        let conn = connect(&layout, &users, r).unwrap();
        assert_eq!(conn.users(), users.raw_count());
        assert!(conn.is_fully_connected());
    }

    #[test]
    fn channels_follow_zero_pattern() {
        // Example subnetwork restricted to users 1, 2, 6, 9.
        let cands = vec![vec![0], vec![0, 1], vec![0, 1, 2], vec![1, 3]];
        let conn = Connectivity::from_candidates(4, &cands).unwrap();
        let mut rng = stream_rng(1, Stream::Channels);
        let h = draw_channels(&conn, &mut rng);
        for (k, c) in cands.iter().enumerate() {
            for i in 0..4 {
                let zero = h.gain(k, i) == Complex64::new(0.0, 0.0);
                assert_eq!(zero, !c.contains(&i), "entry ({k},{i})");
            }
        }
    }

    #[test]
    fn empty_adjacency_gives_zero_channel() {
        let layout = hex_layout(3).unwrap();
        let users = UserField::from_positions(vec![Point::new(10.0, 10.0)], 20.0);
        let conn = connect(&layout, &users, 1.0).unwrap();
        let h = draw_channels(&conn, &mut stream_rng(0, Stream::Channels));
        assert_eq!(h.users(), 0);
        assert_eq!(h.helpers(), 3);
    }

    #[test]
    fn channel_draws_are_seeded() {
        let conn = Connectivity::from_candidates(2, &[vec![0, 1], vec![1]]).unwrap();
        let a = draw_channels(&conn, &mut stream_rng(5, Stream::Channels));
        let b = draw_channels(&conn, &mut stream_rng(5, Stream::Channels));
        assert_eq!(a, b);
    }

    #[test]
    fn dump_has_one_record_per_line() {
        let layout = hex_layout(2).unwrap();
        let users = UserField::from_positions(vec![Point::new(0.1, 0.0)], 1.0);
        let conn = connect(&layout, &users, 5.0).unwrap();
        let mut buf = Vec::new();
        write_topology_dump(&mut buf, &layout, &users, &conn).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2 + 1 + 2);
        assert!(lines[0].starts_with("helper,0,"));
        let x: f64 = lines[2].split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(x, 0.1);
    }
}
