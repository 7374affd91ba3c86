//! Fuzzy c-means on Lab color sets.
//!
//! The loop alternates [`update_centroids`] and [`update_memberships`] from a
//! seeded set of centroids, recording the objective `J_m` after each pass,
//! until no membership moves by `epsilon` or more.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::color::{ColorSet, Lab};
use crate::error::{Error, Result};
use crate::parallel::{self, point_chunks};
use crate::reference::{seed_from_references, ReferenceSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitMode {
    /// Points closest to the dominant reference colors.
    Reference,
    /// `c` distinct indices drawn with the configured seed.
    Random,
    /// The first `c` pairwise-distinct points.
    FirstDistinct,
    /// `c` indices spread evenly from the first to the last point.
    Uniform,
}

impl InitMode {
    pub const ALL: [InitMode; 4] = [
        InitMode::Reference,
        InitMode::Random,
        InitMode::FirstDistinct,
        InitMode::Uniform,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InitMode::Reference => "reference",
            InitMode::Random => "random",
            InitMode::FirstDistinct => "first",
            InitMode::Uniform => "uniform",
        }
    }
}

impl fmt::Display for InitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "reference" => Ok(InitMode::Reference),
            "random" => Ok(InitMode::Random),
            "first" | "first_distinct" | "first-distinct" => Ok(InitMode::FirstDistinct),
            "uniform" => Ok(InitMode::Uniform),
            other => Err(Error::Config(format!(
                "unknown init mode {other:?} (expected reference, random, first or uniform)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterConfig {
    pub clusters: usize,
    /// Fuzzifier `m`, strictly greater than 1.
    pub fuzzifier: f64,
    /// Membership exponent used by reference seeding.
    pub lambda: f64,
    pub epsilon: f64,
    pub max_iter: usize,
    pub init: InitMode,
    pub seed: u64,
}

impl ClusterConfig {
    pub const DEFAULT_FUZZIFIER: f64 = 2.0;
    pub const DEFAULT_LAMBDA: f64 = 1.0;
    pub const DEFAULT_EPSILON: f64 = 1e-5;
    pub const DEFAULT_MAX_ITER: usize = 300;

    pub fn new(clusters: usize) -> Self {
        ClusterConfig {
            clusters,
            fuzzifier: Self::DEFAULT_FUZZIFIER,
            lambda: Self::DEFAULT_LAMBDA,
            epsilon: Self::DEFAULT_EPSILON,
            max_iter: Self::DEFAULT_MAX_ITER,
            init: InitMode::Reference,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.clusters < 1 {
            return Err(Error::Config("cluster count must be at least 1".into()));
        }
        check_fuzzifier(self.fuzzifier)?;
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return Err(Error::Config(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::Config(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iter < 1 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

fn check_fuzzifier(m: f64) -> Result<()> {
    if m.is_finite() && m > 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "fuzzifier must be greater than 1, got {m}"
        )))
    }
}

/// A `clusters x points` matrix of membership degrees.
///
/// Stored point-major so each point's column is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix {
    clusters: usize,
    points: usize,
    data: Vec<f64>,
}

impl MembershipMatrix {
    pub fn from_fn(clusters: usize, points: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(clusters * points);
        for j in 0..points {
            for i in 0..clusters {
                data.push(f(i, j));
            }
        }
        MembershipMatrix {
            clusters,
            points,
            data,
        }
    }

    /// Builds from `rows[i][j]`, the membership of point `j` in cluster `i`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let clusters = rows.len();
        let points = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != points) {
            return Err(Error::Shape {
                expected: format!("rows of length {points}"),
                found: format!("row of length {}", bad.len()),
            });
        }
        Ok(Self::from_fn(clusters, points, |i, j| rows[i][j]))
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn get(&self, cluster: usize, point: usize) -> f64 {
        self.data[point * self.clusters + cluster]
    }

    /// Memberships of one point across all clusters.
    pub fn column(&self, point: usize) -> &[f64] {
        let start = point * self.clusters;
        &self.data[start..start + self.clusters]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.clusters.max(1))
    }

    /// Cluster with the highest membership for each point, lowest index on ties.
    pub fn hard_labels(&self) -> Vec<usize> {
        self.columns().map(argmax).collect()
    }

    fn check_shape(&self, clusters: usize, points: usize) -> Result<()> {
        if self.clusters == clusters && self.points == points {
            Ok(())
        } else {
            Err(Error::Shape {
                expected: format!("{clusters}x{points} membership matrix"),
                found: format!("{}x{}", self.clusters, self.points),
            })
        }
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// `J_m = sum_i sum_j u_ij^m * |x_j - v_i|^2`.
pub fn objective(colors: &ColorSet, u: &MembershipMatrix, v: &[Lab], m: f64) -> Result<f64> {
    u.check_shape(v.len(), colors.len())?;
    let points = colors.points();
    let chunks = point_chunks(points.len());
    let partials = parallel::map_indexed(chunks.len(), |k| {
        let (start, end) = chunks[k];
        let mut sum = 0.0;
        for (j, x) in points.iter().enumerate().take(end).skip(start) {
            for (mu, c) in u.column(j).iter().zip(v) {
                sum += mu.powf(m) * x.distance_squared(c);
            }
        }
        sum
    });
    Ok(partials.into_iter().sum())
}

fn check_distinct(v: &[Lab]) -> Result<()> {
    for (first, a) in v.iter().enumerate() {
        if let Some(offset) = v[first + 1..].iter().position(|b| a == b) {
            return Err(Error::DegenerateCentroids {
                first,
                second: first + 1 + offset,
            });
        }
    }
    Ok(())
}

/// Membership of every point to every centroid.
///
/// A point sitting exactly on one or more centroids splits its membership
/// evenly among those centroids.
pub fn update_memberships(colors: &ColorSet, v: &[Lab], m: f64) -> Result<MembershipMatrix> {
    check_fuzzifier(m)?;
    if v.is_empty() {
        return Err(Error::Config("at least one centroid is required".into()));
    }
    check_distinct(v)?;
    let c = v.len();
    let points = colors.points();
    let exponent = 1.0 / (m - 1.0);
    let mut data = vec![0.0; c * points.len()];
    parallel::for_each_chunk_mut(&mut data, c, |j, column| {
        let mut d2 = [0.0f64; 16];
        let mut heap;
        let d2: &mut [f64] = if c <= d2.len() {
            &mut d2[..c]
        } else {
            heap = vec![0.0; c];
            &mut heap
        };
        for (d, centroid) in d2.iter_mut().zip(v) {
            *d = points[j].distance_squared(centroid);
        }
        let zeros = d2.iter().filter(|&&d| d == 0.0).count();
        if zeros > 0 {
            let share = 1.0 / zeros as f64;
            for (mu, &d) in column.iter_mut().zip(d2.iter()) {
                *mu = if d == 0.0 { share } else { 0.0 };
            }
            return;
        }
        for (mu, &di) in column.iter_mut().zip(d2.iter()) {
            let sum: f64 = d2.iter().map(|&dk| (di / dk).powf(exponent)).sum();
            *mu = sum.recip();
        }
    });
    Ok(MembershipMatrix {
        clusters: c,
        points: points.len(),
        data,
    })
}

/// Weighted means `v_i = sum_j u_ij^m x_j / sum_j u_ij^m`.
pub fn update_centroids(colors: &ColorSet, u: &MembershipMatrix, m: f64) -> Result<Vec<Lab>> {
    check_fuzzifier(m)?;
    if u.points != colors.len() {
        return Err(Error::Shape {
            expected: format!("membership matrix over {} points", colors.len()),
            found: format!("{} points", u.points),
        });
    }
    let c = u.clusters;
    let points = colors.points();
    let chunks = point_chunks(points.len());
    let partials = parallel::map_indexed(chunks.len(), |k| {
        let (start, end) = chunks[k];
        let mut acc = vec![[0.0f64; 4]; c];
        for (j, x) in points.iter().enumerate().take(end).skip(start) {
            for (a, mu) in acc.iter_mut().zip(u.column(j)) {
                let w = mu.powf(m);
                a[0] += w * x.l;
                a[1] += w * x.a;
                a[2] += w * x.b;
                a[3] += w;
            }
        }
        acc
    });
    let mut total = vec![[0.0f64; 4]; c];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            for k in 0..4 {
                t[k] += p[k];
            }
        }
    }
    total
        .into_iter()
        .enumerate()
        .map(|(cluster, [l, a, b, w])| {
            if w > 0.0 {
                Ok(Lab::new(l / w, a / w, b / w))
            } else {
                Err(Error::EmptyCluster { cluster })
            }
        })
        .collect()
}

/// True when no membership changed by `epsilon` or more.
pub fn has_converged(
    prev: &MembershipMatrix,
    next: &MembershipMatrix,
    epsilon: f64,
) -> Result<bool> {
    next.check_shape(prev.clusters, prev.points)?;
    Ok(prev
        .data
        .iter()
        .zip(&next.data)
        .all(|(a, b)| (a - b).abs() < epsilon))
}

/// An initial centroid and where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Seed {
    /// 0-based index of the data point used.
    pub point: usize,
    pub lab: Lab,
    /// Name of the dominant reference color, for reference seeding.
    pub reference: Option<String>,
}

impl Seed {
    fn from_point(colors: &ColorSet, point: usize) -> Self {
        Seed {
            point,
            lab: colors[point],
            reference: None,
        }
    }
}

/// 0-based offsets `round(i * (n - 1) / (c - 1))`, rounding halves up.
pub fn uniform_indices(n: usize, c: usize) -> Vec<usize> {
    if c <= 1 {
        return vec![0; c];
    }
    let span = n.saturating_sub(1);
    // round(x / y) for non-negative integers, halves away from zero.
    (0..c)
        .map(|i| (2 * i * span + (c - 1)) / (2 * (c - 1)))
        .collect()
}

pub fn seed_centroids(colors: &ColorSet, config: &ClusterConfig) -> Result<Vec<Seed>> {
    seed_centroids_with(colors, config, &ReferenceSet::builtin())
}

/// [`seed_centroids`] with a caller-supplied reference palette.
pub fn seed_centroids_with(
    colors: &ColorSet,
    config: &ClusterConfig,
    refs: &ReferenceSet,
) -> Result<Vec<Seed>> {
    config.validate()?;
    let n = colors.len();
    let c = config.clusters;
    if c > n {
        return Err(Error::Config(format!(
            "c = {c} exceeds the number of points {n}"
        )));
    }
    match config.init {
        InitMode::Reference => {
            let seeding = seed_from_references(colors, refs, config.lambda, c)?;
            Ok(seeding
                .seeds
                .into_iter()
                .map(|s| Seed {
                    point: s.point,
                    lab: s.lab,
                    reference: Some(s.name),
                })
                .collect())
        }
        InitMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            Ok(rand::seq::index::sample(&mut rng, n, c)
                .into_iter()
                .map(|j| Seed::from_point(colors, j))
                .collect())
        }
        InitMode::FirstDistinct => {
            let mut seeds: Vec<Seed> = Vec::with_capacity(c);
            for (j, x) in colors.points().iter().enumerate() {
                if seeds.len() == c {
                    break;
                }
                if seeds.iter().all(|s| s.lab != *x) {
                    seeds.push(Seed::from_point(colors, j));
                }
            }
            if seeds.len() < c {
                return Err(Error::Seeding(format!(
                    "only {} distinct points, cannot seed {c} clusters",
                    seeds.len()
                )));
            }
            Ok(seeds)
        }
        InitMode::Uniform => Ok(uniform_indices(n, c)
            .into_iter()
            .map(|j| Seed::from_point(colors, j))
            .collect()),
    }
}

/// Result of a clustering run.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyPartition {
    pub memberships: MembershipMatrix,
    pub centroids: Vec<Lab>,
    pub seeds: Vec<Seed>,
    /// Number of centroid/membership update pairs performed.
    pub iterations: usize,
    /// `J_m` of the seeded partition followed by one value per iteration.
    pub objective_trace: Vec<f64>,
    pub converged: bool,
}

impl FuzzyPartition {
    pub fn objective(&self) -> f64 {
        *self
            .objective_trace
            .last()
            .expect("trace always has the seeded value")
    }
}

pub fn run_fcm(colors: &ColorSet, config: &ClusterConfig) -> Result<FuzzyPartition> {
    run_fcm_with(colors, config, &ReferenceSet::builtin())
}

pub fn run_fcm_with(
    colors: &ColorSet,
    config: &ClusterConfig,
    refs: &ReferenceSet,
) -> Result<FuzzyPartition> {
    let seeds = seed_centroids_with(colors, config, refs)?;
    iterate(colors, seeds, config)
}

/// Runs the FCM loop from explicit initial centroids.
pub fn run_from_centroids(
    colors: &ColorSet,
    centroids: &[Lab],
    config: &ClusterConfig,
) -> Result<FuzzyPartition> {
    config.validate()?;
    if centroids.len() != config.clusters {
        return Err(Error::Shape {
            expected: format!("{} centroids", config.clusters),
            found: format!("{}", centroids.len()),
        });
    }
    let seeds = centroids
        .iter()
        .map(|&lab| Seed {
            point: usize::MAX,
            lab,
            reference: None,
        })
        .collect();
    iterate(colors, seeds, config)
}

fn iterate(colors: &ColorSet, seeds: Vec<Seed>, config: &ClusterConfig) -> Result<FuzzyPartition> {
    let m = config.fuzzifier;
    let mut centroids: Vec<Lab> = seeds.iter().map(|s| s.lab).collect();
    let mut memberships = update_memberships(colors, &centroids, m)?;
    let mut objective_trace = vec![objective(colors, &memberships, &centroids, m)?];
    let mut iterations = 0;
    let mut converged = false;

    while iterations < config.max_iter {
        centroids = update_centroids(colors, &memberships, m)?;
        let next = update_memberships(colors, &centroids, m)?;
        objective_trace.push(objective(colors, &next, &centroids, m)?);
        iterations += 1;
        let done = has_converged(&memberships, &next, config.epsilon)?;
        memberships = next;
        if done {
            converged = true;
            break;
        }
    }

    Ok(FuzzyPartition {
        memberships,
        centroids,
        seeds,
        iterations,
        objective_trace,
        converged,
    })
}

/// Index of the nearest centroid for each point, lowest index on ties.
///
/// This is the hard label FCM memberships would give each point.
pub fn nearest_centroids(points: &[Lab], centroids: &[Lab]) -> Vec<usize> {
    parallel::map_indexed(points.len(), |j| {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, c) in centroids.iter().enumerate() {
            let d = points[j].distance_squared(c);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    })
}
