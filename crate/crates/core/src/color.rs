//! CIELAB points, the Euclidean Lab distance, sRGB conversion and color-set
//! ingestion.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// A point in CIELAB space.
///
/// Coordinates are stored as given. Out-of-gamut values, including negative
/// lightness, are valid data and are never clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

impl Lab {
    pub const fn new(l: f64, a: f64, b: f64) -> Self {
        Lab { l, a, b }
    }

    /// Like [`Lab::new`] but rejects NaN and infinite components.
    pub fn try_new(l: f64, a: f64, b: f64) -> Result<Self> {
        let lab = Lab { l, a, b };
        if lab.is_finite() {
            Ok(lab)
        } else {
            Err(Error::Domain(format!("non-finite Lab coordinate {lab}")))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.l.is_finite() && self.a.is_finite() && self.b.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.l, self.a, self.b]
    }

    pub fn distance_squared(&self, other: &Lab) -> f64 {
        let dl = self.l - other.l;
        let da = self.a - other.a;
        let db = self.b - other.b;
        dl * dl + da * da + db * db
    }

    pub fn distance(&self, other: &Lab) -> f64 {
        self.distance_squared(other).sqrt()
    }
}

impl From<[f64; 3]> for Lab {
    fn from([l, a, b]: [f64; 3]) -> Self {
        Lab { l, a, b }
    }
}

impl fmt::Display for Lab {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.2}, {:.2}, {:.2})", self.l, self.a, self.b)
    }
}

/// Euclidean distance between two Lab points.
pub fn lab_distance(x: &Lab, y: &Lab) -> f64 {
    x.distance(y)
}

/// An ordered, non-empty collection of color points. Index `j` here is the
/// point `x_{j+1}` of the data set; every index-valued result refers to this
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorSet {
    points: Vec<Lab>,
}

impl ColorSet {
    pub fn new(points: Vec<Lab>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(j) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::Domain(format!(
                "point {} has a non-finite coordinate",
                j + 1
            )));
        }
        Ok(ColorSet { points })
    }

    pub fn points(&self) -> &[Lab] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false for a constructed set; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Lab> {
        self.points.get(index)
    }

    pub fn into_points(self) -> Vec<Lab> {
        self.points
    }
}

impl std::ops::Index<usize> for ColorSet {
    type Output = Lab;

    fn index(&self, index: usize) -> &Lab {
        &self.points[index]
    }
}

/// Parses a color set from `L,a,b` lines. Blank lines and lines starting
/// with `#` are skipped; line numbers in errors are 1-based physical lines.
pub fn parse_colorset(text: &str) -> Result<ColorSet> {
    let mut points = Vec::new();
    for (line, fields) in data_lines(text) {
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 fields (L,a,b), found {}", fields.len()),
            });
        }
        let [l, a, b] = [0, 1, 2].map(|k| parse_coordinate(fields[k], line));
        points.push(Lab::new(l?, a?, b?));
    }
    ColorSet::new(points)
}

pub fn load_colorset_csv(path: impl AsRef<Path>) -> Result<ColorSet> {
    parse_colorset(&read_text(path.as_ref())?)
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Yields `(line number, trimmed fields)` for every non-blank, non-comment
/// line.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            None
        } else {
            Some((i + 1, trimmed.split(',').map(str::trim).collect()))
        }
    })
}

pub(crate) fn parse_coordinate(field: &str, line: usize) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(Error::Parse {
            line,
            message: format!("non-finite value {field:?}"),
        }),
        Err(_) => Err(Error::Parse {
            line,
            message: format!("invalid number {field:?}"),
        }),
    }
}

// sRGB primaries to XYZ (IEC 61966-2-1), D65 white.
const RGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

const XYZ_TO_RGB: [[f64; 3]; 3] = [
    [3.2404542, -1.5371385, -0.4985314],
    [-0.9692660, 1.8760108, 0.0415560],
    [0.0556434, -0.2040259, 1.0572252],
];

/// D65 white as the image of RGB (1, 1, 1), so that sRGB white lands exactly
/// on L* = 100, a* = b* = 0.
const WHITE: [f64; 3] = [
    RGB_TO_XYZ[0][0] + RGB_TO_XYZ[0][1] + RGB_TO_XYZ[0][2],
    RGB_TO_XYZ[1][0] + RGB_TO_XYZ[1][1] + RGB_TO_XYZ[1][2],
    RGB_TO_XYZ[2][0] + RGB_TO_XYZ[2][1] + RGB_TO_XYZ[2][2],
];

const EPSILON: f64 = 216.0 / 24389.0; // (6/29)^3
const KAPPA: f64 = 24389.0 / 27.0;

fn srgb_decode(v: f64) -> f64 {
    if v <= 0.04045 {
        v / 12.92
    } else {
        ((v + 0.055) / 1.055).powf(2.4)
    }
}

fn srgb_encode(v: f64) -> f64 {
    if v <= 0.0031308 {
        12.92 * v
    } else {
        1.055 * v.powf(1.0 / 2.4) - 0.055
    }
}

fn lab_f(t: f64) -> f64 {
    if t > EPSILON {
        t.cbrt()
    } else {
        (KAPPA * t + 16.0) / 116.0
    }
}

fn lab_f_inv(f: f64) -> f64 {
    let t = f * f * f;
    if t > EPSILON {
        t
    } else {
        (116.0 * f - 16.0) / KAPPA
    }
}

/// Converts an 8-bit sRGB triple to CIELAB under D65.
pub fn srgb_to_lab(r: u8, g: u8, b: u8) -> Lab {
    let rgb = [r, g, b].map(|c| srgb_decode(f64::from(c) / 255.0));
    let xyz = RGB_TO_XYZ.map(|row| row[0] * rgb[0] + row[1] * rgb[1] + row[2] * rgb[2]);
    let [xr, yr, zr] = [0, 1, 2].map(|k| xyz[k] / WHITE[k]);
    let (fx, fy, fz) = (lab_f(xr), lab_f(yr), lab_f(zr));
    let l = if yr > EPSILON {
        116.0 * fy - 16.0
    } else {
        KAPPA * yr
    };
    Lab::new(l, 500.0 * (fx - fy), 200.0 * (fy - fz))
}

/// Converts a Lab point back to 8-bit sRGB, clamping out-of-gamut colors.
/// Only meant for rendering outputs.
pub fn lab_to_srgb(lab: &Lab) -> [u8; 3] {
    let fy = (lab.l + 16.0) / 116.0;
    let fx = fy + lab.a / 500.0;
    let fz = fy - lab.b / 200.0;
    let xyz = [
        lab_f_inv(fx) * WHITE[0],
        lab_f_inv(fy) * WHITE[1],
        lab_f_inv(fz) * WHITE[2],
    ];
    XYZ_TO_RGB.map(|row| {
        let linear = row[0] * xyz[0] + row[1] * xyz[1] + row[2] * xyz[2];
        (srgb_encode(linear.clamp(0.0, 1.0)) * 255.0).round() as u8
    })
}
