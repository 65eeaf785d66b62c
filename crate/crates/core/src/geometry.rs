//! Points on round spheres, quadrature grids on geodesic submanifolds, and
//! separated point packings.
//!
//! Charts in play (S^d sits in R^(d+1), coordinates x_1..x_{d+1}):
//!
//! * meridian arc (d = 2): theta -> (sin theta, 0, cos theta), theta in
//!   [0, pi/2], the quarter great circle from the north pole to the equator;
//!   composite Gauss-Legendre panels in arclength.
//! * equator circle (any d): t -> (cos t, sin t, 0, ..); uniform trapezoid,
//!   which is exact for trigonometric polynomials of degree < n.
//! * great 2-sphere (d >= 3): the unit sphere of span(e_1, e_2, e_3);
//!   Gauss-Legendre in cos theta times uniform phi, exact for polynomials of
//!   degree <= 2n - 1 with n_theta = n, n_phi = 2n.
//! * the full 2-sphere (d = 2), same product rule, for orthonormality and
//!   trace-duality experiments.
//!
//! All constructions are deterministic: same inputs, bit-identical grids.

use std::io::Write as IoWrite;

use crate::error::{Error, Result};

/// A point on S^d, stored as its unit vector in R^(d+1).
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Build from ambient coordinates; the vector must be within 1e-9 of unit
    /// length and is renormalized exactly to unit length.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::domain("a sphere point needs at least two ambient coordinates"));
        }
        let norm2: f64 = coords.iter().map(|c| c * c).sum();
        if !norm2.is_finite() || (norm2.sqrt() - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "coordinates have length {} but must be a unit vector",
                norm2.sqrt()
            )));
        }
        let norm = norm2.sqrt();
        Ok(SpherePoint { coords: coords.into_iter().map(|c| c / norm).collect() })
    }

    /// Point on S^2 from colatitude theta in [0, pi] and longitude phi.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        SpherePoint {
            coords: vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()],
        }
    }

    /// Sphere dimension d (ambient dimension minus one).
    pub fn d(&self) -> u32 {
        (self.coords.len() - 1) as u32
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean inner product; for unit vectors this is the cosine of the
    /// geodesic distance.
    pub fn dot(&self, other: &SpherePoint) -> f64 {
        assert_eq!(self.coords.len(), other.coords.len(), "points on different spheres");
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    /// Geodesic (great-circle) distance in [0, pi].
    pub fn geodesic_distance(&self, other: &SpherePoint) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    /// Colatitude/longitude of a point on S^2.
    pub fn angles(&self) -> Result<(f64, f64)> {
        if self.d() != 2 {
            return Err(Error::domain("angles are defined for points on S^2 only"));
        }
        let theta = self.coords[2].clamp(-1.0, 1.0).acos();
        let phi = self.coords[1].atan2(self.coords[0]);
        Ok((theta, phi))
    }

    /// Embed a point of a lower sphere into S^d by zero-padding.
    pub fn embed(&self, d: u32) -> Result<SpherePoint> {
        if self.d() > d {
            return Err(Error::domain("cannot embed into a lower-dimensional sphere"));
        }
        let mut coords = self.coords.clone();
        coords.resize(d as usize + 1, 0.0);
        Ok(SpherePoint { coords })
    }
}

/// Geodesic distance between two points (free-function form).
pub fn geodesic_distance(a: &SpherePoint, b: &SpherePoint) -> f64 {
    a.geodesic_distance(b)
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence. Nodes ascend and are exactly antisymmetric.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::domain("gauss_legendre needs at least one node"));
    }
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    let nf = n as f64;
    for i in 0..n / 2 {
        // Tricomi-style initial guess for the i-th root from the top
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, pm1) = legendre_pair(n, x);
            let dp = nf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (p, pm1) = legendre_pair(n, x);
        let dp = nf * (x * p - pm1) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // mirror to enforce exact antisymmetry
        nodes[n - 1 - i] = x;
        nodes[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        // the middle root is exactly zero; P_n'(0) = n P_{n-1}(0)
        let (_, pm1) = legendre_pair(n, 0.0);
        let dp0 = nf * pm1;
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (dp0 * dp0);
    }
    Ok((nodes, weights))
}

/// (P_n(x), P_{n-1}(x)) by the classical three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut pm1 = 1.0f64;
    let mut p = x;
    for j in 2..=n {
        let jf = j as f64;
        let next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * pm1) / jf;
        pm1 = p;
        p = next;
    }
    (p, pm1)
}

/// Which geodesic submanifold a grid discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chart {
    /// Quarter great circle of S^2 from the north pole to the equator in the
    /// x1-x3 plane.
    MeridianArc,
    /// Great circle of S^d through e_1, e_2.
    Equator { d: u32 },
    /// Great 2-sphere of S^d (d >= 3) spanned by e_1, e_2, e_3.
    GreatSphere2 { d: u32 },
    /// All of S^2.
    FullSphere,
}

impl Chart {
    /// Ambient sphere dimension d.
    pub fn d(&self) -> u32 {
        match self {
            Chart::MeridianArc | Chart::FullSphere => 2,
            Chart::Equator { d } | Chart::GreatSphere2 { d } => *d,
        }
    }

    /// Intrinsic dimension k of the submanifold.
    pub fn k(&self) -> u32 {
        match self {
            Chart::MeridianArc | Chart::Equator { .. } => 1,
            Chart::GreatSphere2 { .. } | Chart::FullSphere => 2,
        }
    }

    /// A distinguished center used to anchor cap-restricted packings.
    pub fn center(&self) -> SpherePoint {
        let d = self.d() as usize;
        let mut coords = vec![0.0; d + 1];
        match self {
            // midpoint of the quarter arc, theta = pi/4
            Chart::MeridianArc => {
                coords[0] = std::f64::consts::FRAC_1_SQRT_2;
                coords[2] = std::f64::consts::FRAC_1_SQRT_2;
            }
            // equator base point e_1
            Chart::Equator { .. } => coords[0] = 1.0,
            // pole of the (great) 2-sphere: e_3
            Chart::GreatSphere2 { .. } | Chart::FullSphere => coords[2] = 1.0,
        }
        SpherePoint { coords }
    }

    /// Short token for file names.
    pub fn label(&self) -> &'static str {
        match self {
            Chart::MeridianArc => "meridian",
            Chart::Equator { .. } => "equator",
            Chart::GreatSphere2 { .. } => "great2",
            Chart::FullSphere => "sphere",
        }
    }

    /// Total measure of the submanifold (arclength or area).
    pub fn measure(&self) -> f64 {
        match self {
            Chart::MeridianArc => std::f64::consts::FRAC_PI_2,
            Chart::Equator { .. } => 2.0 * std::f64::consts::PI,
            Chart::GreatSphere2 { .. } | Chart::FullSphere => 4.0 * std::f64::consts::PI,
        }
    }
}

/// A quadrature grid on a chart: points x_i on the ambient sphere and weights
/// w_i so that sum_i w_i f(x_i) approximates (or, for polynomials up to the
/// design degree, equals) the submanifold integral of f.
#[derive(Debug, Clone)]
pub struct SubmanifoldGrid {
    chart: Chart,
    resolution: usize,
    points: Vec<SpherePoint>,
    weights: Vec<f64>,
}

const PANEL_ORDER: usize = 12;

impl SubmanifoldGrid {
    /// Dispatch on the chart; `n` is the resolution parameter (see the
    /// specific constructors for the point counts it produces).
    pub fn for_chart(chart: Chart, n: usize) -> Result<Self> {
        match chart {
            Chart::MeridianArc => meridian_arc_grid(n),
            Chart::Equator { d } => equator_grid(d, 1, n),
            Chart::GreatSphere2 { d } => equator_grid(d, 2, n),
            Chart::FullSphere => full_sphere_grid(n),
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// The resolution parameter the grid was built with.
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Quadrature of a function given its values at the grid points.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Write the grid as CSV: one row per node, ambient coordinates then
    /// weight, in full round-trip precision.
    pub fn write_csv<W: IoWrite>(&self, out: &mut W) -> Result<()> {
        let d = self.chart.d() as usize;
        write!(out, "index")?;
        for j in 0..=d {
            write!(out, ",x{}", j + 1)?;
        }
        writeln!(out, ",weight")?;
        for (i, (p, w)) in self.points.iter().zip(&self.weights).enumerate() {
            write!(out, "{i}")?;
            for c in p.coords() {
                write!(out, ",{c:.17e}")?;
            }
            writeln!(out, ",{w:.17e}")?;
        }
        Ok(())
    }
}

/// Composite Gauss-Legendre grid with exactly `n` nodes on the quarter
/// meridian arc of S^2 (theta in [0, pi/2], arclength weights), panels of
/// order ~12.
pub fn meridian_arc_grid(n: usize) -> Result<SubmanifoldGrid> {
    if n < 2 {
        return Err(Error::domain("meridian arc grid needs at least two nodes"));
    }
    let panels = n.div_ceil(PANEL_ORDER);
    let base = n / panels;
    let extra = n % panels;
    let total = std::f64::consts::FRAC_PI_2;
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut a = 0.0f64;
    let mut consumed = 0usize;
    for p in 0..panels {
        let sz = base + usize::from(p < extra);
        consumed += sz;
        let b = if p + 1 == panels { total } else { total * consumed as f64 / n as f64 };
        let (xs, ws) = gauss_legendre(sz)?;
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (x, w) in xs.iter().zip(&ws) {
            let theta = mid + half * x;
            points.push(SpherePoint { coords: vec![theta.sin(), 0.0, theta.cos()] });
            weights.push(half * w);
        }
        a = b;
    }
    Ok(SubmanifoldGrid { chart: Chart::MeridianArc, resolution: n, points, weights })
}

/// Quadrature grid on the great S^k inside S^d. k = 1: uniform n-point
/// trapezoid on the equator circle (exact for trigonometric polynomials of
/// degree < n). k = 2 (d >= 3): Gauss-Legendre x uniform product grid with
/// n x 2n points, exact for polynomials of degree <= 2n - 1.
pub fn equator_grid(d: u32, k: u32, n: usize) -> Result<SubmanifoldGrid> {
    if d < 2 || k < 1 || k > d - 1 {
        return Err(Error::domain(format!(
            "equator grid needs 1 <= k <= d-1; got k = {k}, d = {d}"
        )));
    }
    match k {
        1 => {
            if n == 0 {
                return Err(Error::domain("grid needs at least one node"));
            }
            let w = 2.0 * std::f64::consts::PI / n as f64;
            let mut points = Vec::with_capacity(n);
            for j in 0..n {
                let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                let mut coords = vec![0.0; d as usize + 1];
                coords[0] = t.cos();
                coords[1] = t.sin();
                points.push(SpherePoint { coords });
            }
            Ok(SubmanifoldGrid {
                chart: Chart::Equator { d },
                resolution: n,
                weights: vec![w; n],
                points,
            })
        }
        2 => {
            let (points, weights) = product_sphere2_grid(d, n)?;
            Ok(SubmanifoldGrid {
                chart: Chart::GreatSphere2 { d },
                resolution: n,
                points,
                weights,
            })
        }
        _ => Err(Error::domain("k >= 3 submanifold quadrature is not provided")),
    }
}

/// The k = 2 product rule on all of S^2 (2n^2 points, exact to degree
/// 2n - 1): orthonormality or Gram checks at degree l need n >= l + 1.
pub fn full_sphere_grid(n: usize) -> Result<SubmanifoldGrid> {
    let (points, weights) = product_sphere2_grid(2, n)?;
    Ok(SubmanifoldGrid { chart: Chart::FullSphere, resolution: n, points, weights })
}

fn product_sphere2_grid(d: u32, n: usize) -> Result<(Vec<SpherePoint>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::domain("grid needs at least one node"));
    }
    let (xs, ws) = gauss_legendre(n)?;
    let nphi = 2 * n;
    let wphi = 2.0 * std::f64::consts::PI / nphi as f64;
    let mut points = Vec::with_capacity(n * nphi);
    let mut weights = Vec::with_capacity(n * nphi);
    for (x, w) in xs.iter().zip(&ws) {
        let sin_theta = (1.0 - x * x).max(0.0).sqrt();
        for j in 0..nphi {
            let phi = 2.0 * std::f64::consts::PI * j as f64 / nphi as f64;
            let mut coords = vec![0.0; d as usize + 1];
            coords[0] = sin_theta * phi.cos();
            coords[1] = sin_theta * phi.sin();
            coords[2] = *x;
            points.push(SpherePoint { coords });
            weights.push(w * wphi);
        }
    }
    Ok((points, weights))
}

/// A set of points on a chart with guaranteed pairwise separation, packed
/// greedily inside the geodesic cap of radius pi/4 around the chart center
/// (so all pairwise distances are at most pi/2).
#[derive(Debug, Clone)]
pub struct SeparatedSet {
    points: Vec<SpherePoint>,
    separation: f64,
    lam: f64,
    beta: f64,
    c: f64,
}

impl SeparatedSet {
    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The guaranteed pairwise separation C lambda^(beta - 1).
    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn params(&self) -> (f64, f64, f64) {
        (self.lam, self.beta, self.c)
    }
}

/// Greedy farthest-point packing over the nodes of `grid`, restricted to the
/// cap of radius pi/4 around the chart center, with pairwise separation
/// C lambda^(beta - 1). Deterministic: the first point is the node nearest
/// the center, ties break to the lowest node index, and the packing stops
/// when no node is at least the separation away from every selected point.
pub fn separated_points(
    grid: &SubmanifoldGrid,
    lam: f64,
    beta: f64,
    c: f64,
) -> Result<SeparatedSet> {
    if !(lam >= 2.0) {
        return Err(Error::domain(format!("packing frequency lam = {lam} must be >= 2")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::domain(format!("packing exponent beta = {beta} must lie in (0, 1)")));
    }
    if !(c >= 1.0) {
        return Err(Error::domain(format!("packing constant C = {c} must be >= 1")));
    }
    let separation = c * lam.powf(beta - 1.0);
    let center = grid.chart().center();
    let idx = greedy_separated_indices(
        grid.points(),
        &center,
        std::f64::consts::FRAC_PI_4,
        separation,
    );
    Ok(SeparatedSet {
        points: idx.into_iter().map(|i| grid.points()[i].clone()).collect(),
        separation,
        lam,
        beta,
        c,
    })
}

/// Greedy farthest-point packing among `candidates`, restricted to the
/// geodesic cap of radius `cap_radius` around `center`, stopping when no
/// remaining candidate is at least `min_separation` away from every chosen
/// point. Returns indices into `candidates` in the order chosen.
pub fn greedy_separated_indices(
    candidates: &[SpherePoint],
    center: &SpherePoint,
    cap_radius: f64,
    min_separation: f64,
) -> Vec<usize> {
    let eligible: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].geodesic_distance(center) <= cap_radius + 1e-12)
        .collect();
    if eligible.is_empty() {
        return Vec::new();
    }
    let first = *eligible
        .iter()
        .min_by(|&&a, &&b| {
            candidates[a]
                .geodesic_distance(center)
                .partial_cmp(&candidates[b].geodesic_distance(center))
                .unwrap()
                .then(a.cmp(&b))
        })
        .unwrap();
    let mut chosen = vec![first];
    // distance from each eligible candidate to the chosen set so far
    let mut min_dist: Vec<f64> =
        eligible.iter().map(|&i| candidates[i].geodesic_distance(&candidates[first])).collect();
    loop {
        let mut best: Option<(usize, f64)> = None; // (position in eligible, distance)
        for (pos, &i) in eligible.iter().enumerate() {
            if chosen.contains(&i) {
                continue;
            }
            let dcur = min_dist[pos];
            match best {
                Some((_, dbest)) if dcur <= dbest => {}
                _ => best = Some((pos, dcur)),
            }
        }
        match best {
            Some((pos, dist)) if dist >= min_separation => {
                let idx = eligible[pos];
                chosen.push(idx);
                for (p, &i) in eligible.iter().enumerate() {
                    let dnew = candidates[i].geodesic_distance(&candidates[idx]);
                    if dnew < min_dist[p] {
                        min_dist[p] = dnew;
                    }
                }
            }
            _ => break,
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_small_rules_match_closed_forms() {
        let (x, w) = gauss_legendre(2).unwrap();
        assert_relative_eq!(x[1], 1.0 / 3.0f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(x[0], -x[1], max_relative = 1e-15);
        assert_relative_eq!(w[0], 1.0, max_relative = 1e-14);
        let (x, w) = gauss_legendre(3).unwrap();
        assert_eq!(x[1], 0.0);
        assert_relative_eq!(x[2], (0.6f64).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(w[1], 8.0 / 9.0, max_relative = 1e-14);
        assert_relative_eq!(w[0], 5.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn gauss_legendre_exactness_at_design_degree() {
        // n nodes integrate x^(2n-2) exactly: int = 2/(2n-1)
        for n in [1usize, 5, 12, 40] {
            let (x, w) = gauss_legendre(n).unwrap();
            let acc: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2 * n as i32 - 2)).sum();
            assert_relative_eq!(acc, 2.0 / (2.0 * n as f64 - 1.0), max_relative = 1e-12);
            let total: f64 = w.iter().sum();
            assert_relative_eq!(total, 2.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn meridian_arc_counts_and_integrals() {
        for n in [2usize, 7, 12, 37, 100] {
            let g = meridian_arc_grid(n).unwrap();
            assert_eq!(g.len(), n);
            assert_relative_eq!(
                g.total_weight(),
                std::f64::consts::FRAC_PI_2,
                max_relative = 1e-13
            );
        }
        assert!(meridian_arc_grid(1).is_err());
        let g = meridian_arc_grid(36).unwrap();
        // int_0^{pi/2} cos(theta) d theta = 1; cos(theta) = x3 on the arc
        let vals: Vec<f64> = g.points().iter().map(|p| p.coords()[2]).collect();
        assert_relative_eq!(g.integrate(&vals), 1.0, max_relative = 1e-13);
        // int_0^{pi/2} sin^2(theta) d theta = pi/4
        let vals: Vec<f64> = g.points().iter().map(|p| p.coords()[0].powi(2)).collect();
        assert_relative_eq!(g.integrate(&vals), std::f64::consts::FRAC_PI_4, max_relative = 1e-13);
    }

    #[test]
    fn equator_trapezoid_kills_low_modes() {
        let n = 24usize;
        let g = equator_grid(2, 1, n).unwrap();
        assert_eq!(g.len(), n);
        assert_relative_eq!(g.total_weight(), 2.0 * std::f64::consts::PI, max_relative = 1e-14);
        for m in [1usize, 5, 23] {
            let vals: Vec<f64> = g
                .points()
                .iter()
                .map(|p| (m as f64 * p.coords()[1].atan2(p.coords()[0])).cos())
                .collect();
            let acc = g.integrate(&vals);
            assert!(acc.abs() < 1e-12, "mode {m} not annihilated: {acc}");
        }
        // embedding dimension honored
        let g4 = equator_grid(4, 1, 10).unwrap();
        assert_eq!(g4.points()[0].coords().len(), 5);
        assert!(equator_grid(2, 2, 10).is_err());
        assert!(equator_grid(4, 3, 10).is_err());
    }

    #[test]
    fn sphere_product_grid_integrates_polynomials_exactly() {
        let g = full_sphere_grid(6).unwrap();
        assert_eq!(g.len(), 72);
        let pi = std::f64::consts::PI;
        assert_relative_eq!(g.total_weight(), 4.0 * pi, max_relative = 1e-13);
        // int x1^2 = 4 pi / 3
        let v: Vec<f64> = g.points().iter().map(|p| p.coords()[0].powi(2)).collect();
        assert_relative_eq!(g.integrate(&v), 4.0 * pi / 3.0, max_relative = 1e-13);
        // int x1^4 = 4 pi / 5
        let v: Vec<f64> = g.points().iter().map(|p| p.coords()[0].powi(4)).collect();
        assert_relative_eq!(g.integrate(&v), 4.0 * pi / 5.0, max_relative = 1e-13);
        // int x1^2 x3^2 = 4 pi / 15
        let v: Vec<f64> =
            g.points().iter().map(|p| p.coords()[0].powi(2) * p.coords()[2].powi(2)).collect();
        assert_relative_eq!(g.integrate(&v), 4.0 * pi / 15.0, max_relative = 1e-13);
        // odd monomial integrates to zero
        let v: Vec<f64> = g.points().iter().map(|p| p.coords()[2].powi(3)).collect();
        assert!(g.integrate(&v).abs() < 1e-13);
        // great 2-sphere inside S^3 carries the same measure
        let g3 = equator_grid(3, 2, 5).unwrap();
        assert_eq!(g3.points()[0].coords().len(), 4);
        assert_relative_eq!(g3.total_weight(), 4.0 * pi, max_relative = 1e-13);
        // all nodes unit length
        for p in g3.points() {
            let n2: f64 = p.coords().iter().map(|c| c * c).sum();
            assert_relative_eq!(n2, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn distances_and_angles() {
        let n = SpherePoint::from_angles(0.0, 0.0);
        let s = SpherePoint::from_angles(std::f64::consts::PI, 0.0);
        let e = SpherePoint::from_angles(std::f64::consts::FRAC_PI_2, 0.0);
        assert_relative_eq!(n.geodesic_distance(&s), std::f64::consts::PI, max_relative = 1e-15);
        assert_relative_eq!(
            n.geodesic_distance(&e),
            std::f64::consts::FRAC_PI_2,
            max_relative = 1e-15
        );
        assert_eq!(geodesic_distance(&n, &n), 0.0);
        let (t, p) = SpherePoint::from_angles(1.2, 0.7).angles().unwrap();
        assert_relative_eq!(t, 1.2, max_relative = 1e-14);
        assert_relative_eq!(p, 0.7, max_relative = 1e-14);
        assert!(SpherePoint::new(vec![1.0, 1.0, 0.0]).is_err());
        let q = SpherePoint::new(vec![0.6, 0.8]).unwrap();
        assert_eq!(q.d(), 1);
        let qe = q.embed(4).unwrap();
        assert_eq!(qe.d(), 4);
        assert_relative_eq!(qe.coords()[1], 0.8, max_relative = 1e-15);
    }

    #[test]
    fn packing_respects_separation_and_cap() {
        // lambda = 100, beta = 1/2, C = 4: separation 0.4 on the equator cap
        let g = equator_grid(2, 1, 4000).unwrap();
        let set = separated_points(&g, 100.0, 0.5, 4.0).unwrap();
        assert_relative_eq!(set.separation(), 0.4, max_relative = 1e-15);
        // |J| within a factor 2 of lambda^{k(1-beta)}/C = 2.5
        assert!(set.len() >= 2 && set.len() <= 5, "|J| = {}", set.len());
        let pts = set.points();
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                let dist = pts[i].geodesic_distance(&pts[j]);
                assert!(dist >= set.separation() - 1e-12, "pair ({i},{j}) too close: {dist}");
                assert!(dist <= std::f64::consts::FRAC_PI_2 + 1e-9, "pair exceeds pi/2: {dist}");
            }
        }
        // the first point is the node nearest the center
        let center = g.chart().center();
        assert!(pts[0].geodesic_distance(&center) < 2.0 * std::f64::consts::PI / 4000.0);
        // huge separation -> singleton
        let single = separated_points(&g, 2.0, 0.5, 100.0).unwrap();
        assert_eq!(single.len(), 1);
        // parameter validation
        assert!(separated_points(&g, 1.0, 0.5, 4.0).is_err());
        assert!(separated_points(&g, 100.0, 0.0, 4.0).is_err());
        assert!(separated_points(&g, 100.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn packing_count_scales_with_lambda() {
        // |J| ~ lambda^{k(1-beta)} on the circle: slope within +-0.1
        let g = equator_grid(2, 1, 8192).unwrap();
        let beta = 0.5;
        let mut logs = Vec::new();
        for lam in [32.0f64, 64.0, 128.0, 256.0, 512.0] {
            let set = separated_points(&g, lam, beta, 1.0).unwrap();
            logs.push((lam.ln(), (set.len() as f64).ln()));
        }
        let n = logs.len() as f64;
        let sx: f64 = logs.iter().map(|(x, _)| x).sum();
        let sy: f64 = logs.iter().map(|(_, y)| y).sum();
        let sxx: f64 = logs.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = logs.iter().map(|(x, y)| x * y).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((slope - (1.0 - beta)).abs() < 0.1, "packing slope {slope}");
    }

    #[test]
    fn csv_round_trip_precision() {
        let g = equator_grid(2, 1, 4).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "index,x1,x2,x3,weight");
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "0");
        let x: f64 = row[1].parse().unwrap();
        assert_eq!(x, 1.0);
        let w: f64 = row[4].parse().unwrap();
        assert_eq!(w, std::f64::consts::FRAC_PI_2);
    }
}
