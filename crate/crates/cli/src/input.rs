use std::path::Path;

use anyhow::{Context, Result};
use fuzzycolor::fcm::uniform_indices;
use fuzzycolor::{load_colorset_csv, srgb_to_lab, ColorSet, Lab};

/// Raster input kept around so label images can be rendered at full size.
#[derive(Debug, Clone)]
pub struct RasterInput {
    pub width: u32,
    pub height: u32,
    /// Every pixel in row-major order, converted to Lab.
    pub pixels: Vec<Lab>,
}

#[derive(Debug, Clone)]
pub struct Input {
    /// The points handed to seeding and clustering.
    pub colors: ColorSet,
    pub raster: Option<RasterInput>,
}

pub fn is_png(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"))
}

/// Loads a CSV color set or a PNG. `sample` keeps at most that many image
/// pixels, spread evenly over the image; CSV inputs are never sampled.
pub fn load_input(path: &Path, sample: Option<usize>) -> Result<Input> {
    if !is_png(path) {
        let colors = load_colorset_csv(path)?;
        return Ok(Input {
            colors,
            raster: None,
        });
    }
    let image = image::open(path)
        .with_context(|| format!("failed to decode {}", path.display()))?
        .into_rgb8();
    let (width, height) = image.dimensions();
    let pixels: Vec<Lab> = image
        .pixels()
        .map(|p| srgb_to_lab(p[0], p[1], p[2]))
        .collect();
    let points = match sample {
        Some(0) => anyhow::bail!("--sample must be at least 1"),
        Some(n) if n < pixels.len() => uniform_indices(pixels.len(), n)
            .into_iter()
            .map(|j| pixels[j])
            .collect(),
        _ => pixels.clone(),
    };
    let colors = ColorSet::new(points)?;
    Ok(Input {
        colors,
        raster: Some(RasterInput {
            width,
            height,
            pixels,
        }),
    })
}
