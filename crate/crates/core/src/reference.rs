//! Reference-color membership model and dominant-color seeding.
//!
//! Every input point is graded against a fixed palette of reference colors.
//! Each reference remembers the best membership any point achieved (`mu`) and
//! which point achieved it (`p`). References sorted by `mu` give the dominant
//! colors, and their `p` points become the initial FCM centroids.

use std::path::Path;

use crate::color::{data_lines, parse_coordinate, read_text, ColorSet, Lab};
use crate::error::{Error, Result};
use crate::parallel;

const BUILTIN: [(&str, f64, f64, f64); 14] = [
    ("Red", 41.34, 49.31, 24.65),
    ("Green", 55.03, -40.14, 32.29),
    ("Blue", 30.35, 26.44, -49.67),
    ("Yellow", 80.70, -3.66, 77.55),
    ("Magenta", 51.14, 48.16, -15.29),
    ("Cyan", 51.15, -19.72, -23.38),
    ("Dark skin", 38.02, 11.80, 13.66),
    ("Orange", 61.13, 28.11, 56.13),
    ("Purple", 31.10, 24.36, -22.11),
    ("Greenish yellow", 71.90, -28.11, 56.96),
    ("Bluish green", 71.00, -30.63, 1.53),
    ("Light skin", 65.67, 13.68, 16.89),
    ("Black", 0.00, 0.00, 0.00),
    ("White", 95.82, -0.17, 0.47),
];

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceColor {
    pub name: String,
    pub lab: Lab,
    /// Highest membership any scanned point reached; 0 before a scan.
    pub mu: f64,
    /// 0-based index of the point that reached `mu`; `None` before a scan.
    pub p: Option<usize>,
}

impl ReferenceColor {
    pub fn new(name: impl Into<String>, lab: Lab) -> Self {
        ReferenceColor {
            name: name.into(),
            lab,
            mu: 0.0,
            p: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSet {
    refs: Vec<ReferenceColor>,
}

impl ReferenceSet {
    pub fn new(refs: Vec<ReferenceColor>) -> Result<Self> {
        if refs.len() < 2 {
            return Err(Error::Config(format!(
                "at least 2 reference colors are required, found {}",
                refs.len()
            )));
        }
        if let Some(r) = refs.iter().find(|r| !r.lab.is_finite()) {
            return Err(Error::Domain(format!(
                "reference {:?} has a non-finite coordinate",
                r.name
            )));
        }
        Ok(ReferenceSet { refs })
    }

    /// The 14 ColorChecker-derived reference colors, unscanned.
    pub fn builtin() -> Self {
        ReferenceSet {
            refs: BUILTIN
                .iter()
                .map(|&(name, l, a, b)| ReferenceColor::new(name, Lab::new(l, a, b)))
                .collect(),
        }
    }

    /// Parses `name,L,a,b` lines (same comment rules as color-set files).
    pub fn parse(text: &str) -> Result<Self> {
        let mut refs = Vec::new();
        for (line, fields) in data_lines(text) {
            if fields.len() != 4 {
                return Err(Error::Parse {
                    line,
                    message: format!("expected 4 fields (name,L,a,b), found {}", fields.len()),
                });
            }
            if fields[0].is_empty() {
                return Err(Error::Parse {
                    line,
                    message: "empty reference name".into(),
                });
            }
            let lab = Lab::new(
                parse_coordinate(fields[1], line)?,
                parse_coordinate(fields[2], line)?,
                parse_coordinate(fields[3], line)?,
            );
            refs.push(ReferenceColor::new(fields[0], lab));
        }
        if refs.is_empty() {
            return Err(Error::EmptyInput);
        }
        ReferenceSet::new(refs)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&read_text(path.as_ref())?)
    }

    pub fn refs(&self) -> &[ReferenceColor] {
        &self.refs
    }

    pub fn len(&self) -> usize {
        self.refs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.refs.is_empty()
    }

    pub fn is_scanned(&self) -> bool {
        self.refs.iter().all(|r| r.p.is_some())
    }

    fn labs(&self) -> Vec<Lab> {
        self.refs.iter().map(|r| r.lab).collect()
    }
}

pub fn builtin_references() -> ReferenceSet {
    ReferenceSet::builtin()
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "lambda must be positive and finite, got {lambda}"
        )))
    }
}

/// Membership of a point to each reference given its distances `deltas`.
///
/// A zero distance claims the whole membership (split evenly if several are
/// zero). Otherwise component `i` is `(sum_j (d_i / d_j)^lambda)^-1`.
pub fn membership_vector(deltas: &[f64], lambda: f64) -> Result<Vec<f64>> {
    if deltas.len() < 2 {
        return Err(Error::Domain(format!(
            "at least 2 distances are required, found {}",
            deltas.len()
        )));
    }
    check_lambda(lambda)?;
    if let Some(d) = deltas.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
        return Err(Error::Domain(format!(
            "distance {d} is negative or non-finite"
        )));
    }
    let mut out = vec![0.0; deltas.len()];
    fill_memberships(deltas, lambda, &mut out);
    Ok(out)
}

// Inputs already validated.
fn fill_memberships(deltas: &[f64], lambda: f64, out: &mut [f64]) {
    let zeros = deltas.iter().filter(|&&d| d == 0.0).count();
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        for (o, &d) in out.iter_mut().zip(deltas) {
            *o = if d == 0.0 { share } else { 0.0 };
        }
        return;
    }
    for (o, &di) in out.iter_mut().zip(deltas) {
        let sum: f64 = deltas.iter().map(|&dj| (di / dj).powf(lambda)).sum();
        *o = sum.recip();
    }
}

pub fn point_memberships(x: &Lab, refs: &ReferenceSet, lambda: f64) -> Result<Vec<f64>> {
    let deltas: Vec<f64> = refs.refs.iter().map(|r| x.distance(&r.lab)).collect();
    membership_vector(&deltas, lambda)
}

#[derive(Clone)]
struct ScanState {
    best: Vec<(f64, usize)>,
    deltas: Vec<f64>,
    memberships: Vec<f64>,
}

impl ScanState {
    fn new(k: usize) -> Self {
        ScanState {
            best: vec![(f64::NEG_INFINITY, usize::MAX); k],
            deltas: vec![0.0; k],
            memberships: vec![0.0; k],
        }
    }
}

// Higher membership wins; equal memberships go to the lower point index.
fn better(candidate: (f64, usize), current: (f64, usize)) -> bool {
    candidate.0 > current.0 || (candidate.0 == current.0 && candidate.1 < current.1)
}

/// Fills `mu`/`p` of a fresh copy of `refs` from the points of `colors`.
///
/// The input set is left untouched. The result does not depend on the number
/// of workers.
pub fn scan_colorset(colors: &ColorSet, refs: &ReferenceSet, lambda: f64) -> Result<ReferenceSet> {
    if colors.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_lambda(lambda)?;
    let labs = refs.labs();
    let k = labs.len();
    let points = colors.points();

    let state = parallel::fold_reduce(
        points.len(),
        || ScanState::new(k),
        |mut st, j| {
            for (d, r) in st.deltas.iter_mut().zip(&labs) {
                *d = points[j].distance(r);
            }
            fill_memberships(&st.deltas, lambda, &mut st.memberships);
            for (best, &mu) in st.best.iter_mut().zip(&st.memberships) {
                if better((mu, j), *best) {
                    *best = (mu, j);
                }
            }
            st
        },
        |mut a, b| {
            for (x, y) in a.best.iter_mut().zip(b.best) {
                if better(y, *x) {
                    *x = y;
                }
            }
            a
        },
    );

    let mut scanned = refs.clone();
    for (r, (mu, p)) in scanned.refs.iter_mut().zip(state.best) {
        r.mu = mu;
        r.p = Some(p);
    }
    Ok(scanned)
}

/// A reference color together with its position in the original set.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedReference {
    pub index: usize,
    pub color: ReferenceColor,
}

impl RankedReference {
    /// Point index recorded by the scan. Always set for ranked entries.
    pub fn point(&self) -> usize {
        self.color.p.expect("ranked references come from a scan")
    }
}

/// References ordered by descending `mu`, ties by original index.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedReferences {
    entries: Vec<RankedReference>,
}

impl SortedReferences {
    pub fn entries(&self) -> &[RankedReference] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn sort_references(refs: &ReferenceSet) -> Result<SortedReferences> {
    if !refs.is_scanned() {
        return Err(Error::Unscanned);
    }
    let mut entries: Vec<RankedReference> = refs
        .refs
        .iter()
        .cloned()
        .enumerate()
        .map(|(index, color)| RankedReference { index, color })
        .collect();
    entries.sort_by(|x, y| {
        y.color
            .mu
            .total_cmp(&x.color.mu)
            .then(x.index.cmp(&y.index))
    });
    Ok(SortedReferences { entries })
}

/// The first `c` sorted references. The remainder of the sorted list is kept
/// so that centroid selection can step past references sharing a point.
#[derive(Debug, Clone, PartialEq)]
pub struct DominantColorSet {
    sorted: SortedReferences,
    count: usize,
}

impl DominantColorSet {
    pub fn entries(&self) -> &[RankedReference] {
        &self.sorted.entries[..self.count]
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn candidates(&self) -> &[RankedReference] {
        &self.sorted.entries
    }
}

pub fn dominant_colors(sorted: &SortedReferences, c: usize) -> Result<DominantColorSet> {
    if c < 1 {
        return Err(Error::Config("cluster count must be at least 1".into()));
    }
    if c > sorted.len() {
        return Err(Error::Config(format!(
            "c exceeds reference count {}",
            sorted.len()
        )));
    }
    Ok(DominantColorSet {
        sorted: sorted.clone(),
        count: c,
    })
}

/// An initial centroid chosen through a dominant reference color.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSeed {
    pub reference: usize,
    pub name: String,
    pub point: usize,
    pub lab: Lab,
}

/// Picks `v_i = x[p_i]` for each dominant color.
///
/// When a dominant color's point is already taken by a higher-ranked one,
/// the walk continues down the sorted list to the next reference with an
/// unused point. Seeds come back in sorted-list order.
pub fn initial_centroids(dom: &DominantColorSet, colors: &ColorSet) -> Result<Vec<ReferenceSeed>> {
    let c = dom.len();
    let mut used = Vec::with_capacity(c);
    let mut seeds = Vec::with_capacity(c);
    for entry in dom.candidates() {
        if seeds.len() == c {
            break;
        }
        let point = entry.point();
        let lab = *colors.get(point).ok_or_else(|| {
            Error::Seeding(format!(
                "reference {:?} points at x_{} but the set has {} points",
                entry.color.name,
                point + 1,
                colors.len()
            ))
        })?;
        if used.contains(&point) {
            continue;
        }
        used.push(point);
        seeds.push(ReferenceSeed {
            reference: entry.index,
            name: entry.color.name.clone(),
            point,
            lab,
        });
    }
    if seeds.len() < c {
        return Err(Error::Seeding(format!(
            "only {} distinct closest points among {} references, cannot seed {c} clusters; \
             use a baseline initializer",
            seeds.len(),
            dom.candidates().len()
        )));
    }
    Ok(seeds)
}

/// Every intermediate product of reference seeding, for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSeeding {
    pub scanned: ReferenceSet,
    pub sorted: SortedReferences,
    pub dominant: DominantColorSet,
    pub seeds: Vec<ReferenceSeed>,
}

/// Scan, sort, select `c` dominant colors and pick their points.
pub fn seed_from_references(
    colors: &ColorSet,
    refs: &ReferenceSet,
    lambda: f64,
    c: usize,
) -> Result<ReferenceSeeding> {
    if c > refs.len() {
        return Err(Error::Config(format!(
            "c exceeds reference count {}",
            refs.len()
        )));
    }
    let scanned = scan_colorset(colors, refs, lambda)?;
    let sorted = sort_references(&scanned)?;
    let dominant = dominant_colors(&sorted, c)?;
    let seeds = initial_centroids(&dominant, colors)?;
    Ok(ReferenceSeeding {
        scanned,
        sorted,
        dominant,
        seeds,
    })
}
