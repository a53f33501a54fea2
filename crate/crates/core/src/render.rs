//! Scatter plots of orbit point sets as binary PPM (P6) images.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{DynError, Result};
use crate::ext::ExtComplex;

pub const MIN_SIDE: usize = 16;
pub const MAX_SIDE: usize = 8192;
/// Fraction of the bounding box added on every side of an automatic viewport.
pub const AUTO_MARGIN: f64 = 0.05;

const BACKGROUND: [u8; 3] = [255, 255, 255];

/// Per-seed colours, cycled for more than ten seeds.
pub const PALETTE: [[u8; 3]; 10] = [
    [31, 119, 180],
    [255, 127, 14],
    [44, 160, 44],
    [214, 39, 40],
    [148, 103, 189],
    [140, 86, 75],
    [227, 119, 194],
    [127, 127, 127],
    [188, 189, 34],
    [23, 190, 207],
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Viewport {
    /// Bounding box of the finite points plus a 5% margin.
    Auto,
    Fixed(Rect),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointStyle {
    Pixel,
    Square3,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub width: usize,
    pub height: usize,
    pub viewport: Viewport,
    pub point_style: PointStyle,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec {
            width: 800,
            height: 800,
            viewport: Viewport::Auto,
            point_style: PointStyle::Pixel,
        }
    }
}

impl PlotSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("width", self.width), ("height", self.height)] {
            if !(MIN_SIDE..=MAX_SIDE).contains(&v) {
                return Err(DynError::InvalidPlotSpec(format!(
                    "{name} {v} outside [{MIN_SIDE}, {MAX_SIDE}]"
                )));
            }
        }
        if let Viewport::Fixed(r) = self.viewport {
            let ok = [r.re_min, r.re_max, r.im_min, r.im_max].iter().all(|v| v.is_finite())
                && r.re_max > r.re_min
                && r.im_max > r.im_min;
            if !ok {
                return Err(DynError::InvalidPlotSpec("viewport must be a finite non-empty rectangle".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotSidecar {
    pub width: usize,
    pub height: usize,
    pub viewport: Rect,
    pub point_style: PointStyle,
    /// Points at infinity left out of the image.
    pub dropped_infinite: usize,
    /// Finite points falling outside a fixed viewport.
    pub clipped: usize,
    pub per_seed_counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    /// RGB triples, row-major from the top-left corner.
    pub rgb: Vec<u8>,
}

impl Image {
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.rgb);
        out
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = 3 * (y * self.width + x);
        [self.rgb[i], self.rgb[i + 1], self.rgb[i + 2]]
    }

    pub fn count_non_background(&self) -> usize {
        self.rgb.chunks(3).filter(|p| *p != BACKGROUND).count()
    }
}

fn auto_rect(points_by_seed: &[Vec<ExtComplex>]) -> Option<Rect> {
    let mut it = points_by_seed.iter().flatten().filter_map(|z| z.finite());
    let first = it.next()?;
    let mut r = Rect {
        re_min: first.re,
        re_max: first.re,
        im_min: first.im,
        im_max: first.im,
    };
    for z in it {
        r.re_min = r.re_min.min(z.re);
        r.re_max = r.re_max.max(z.re);
        r.im_min = r.im_min.min(z.im);
        r.im_max = r.im_max.max(z.im);
    }
    let pad = |lo: &mut f64, hi: &mut f64| {
        let span = *hi - *lo;
        if span > 0.0 {
            *lo -= AUTO_MARGIN * span;
            *hi += AUTO_MARGIN * span;
        } else {
            *lo -= 1.0;
            *hi += 1.0;
        }
    };
    pad(&mut r.re_min, &mut r.re_max);
    pad(&mut r.im_min, &mut r.im_max);
    Some(r)
}

/// Rasterises the point sets, one palette colour per seed, later seeds on top.
pub fn rasterize(points_by_seed: &[Vec<ExtComplex>], spec: &PlotSpec) -> Result<(Image, PlotSidecar)> {
    spec.validate()?;
    let rect = match spec.viewport {
        Viewport::Fixed(r) => r,
        Viewport::Auto => auto_rect(points_by_seed).ok_or(DynError::EmptyPlot)?,
    };
    if points_by_seed.iter().flatten().all(|z| z.is_infinite()) {
        return Err(DynError::EmptyPlot);
    }
    let (w, h) = (spec.width, spec.height);
    let mut rgb = Vec::with_capacity(3 * w * h);
    for _ in 0..w * h {
        rgb.extend_from_slice(&BACKGROUND);
    }
    let mut img = Image { width: w, height: h, rgb };
    let mut dropped = 0;
    let mut clipped = 0;
    let mut per_seed = Vec::with_capacity(points_by_seed.len());
    let radius: i64 = match spec.point_style {
        PointStyle::Pixel => 0,
        PointStyle::Square3 => 1,
    };
    for (s, pts) in points_by_seed.iter().enumerate() {
        let colour = PALETTE[s % PALETTE.len()];
        let mut count = 0;
        for z in pts {
            let Some(c) = z.finite() else {
                dropped += 1;
                continue;
            };
            let fx = (c.re - rect.re_min) / (rect.re_max - rect.re_min);
            let fy = (rect.im_max - c.im) / (rect.im_max - rect.im_min);
            if !(0.0..=1.0).contains(&fx) || !(0.0..=1.0).contains(&fy) {
                clipped += 1;
                continue;
            }
            let px = ((fx * w as f64) as i64).min(w as i64 - 1);
            let py = ((fy * h as f64) as i64).min(h as i64 - 1);
            for dy in -radius..=radius {
                for dx in -radius..=radius {
                    let (x, y) = (px + dx, py + dy);
                    if x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h {
                        let i = 3 * (y as usize * w + x as usize);
                        img.rgb[i..i + 3].copy_from_slice(&colour);
                    }
                }
            }
            count += 1;
        }
        per_seed.push(count);
    }
    let sidecar = PlotSidecar {
        width: w,
        height: h,
        viewport: rect,
        point_style: spec.point_style,
        dropped_infinite: dropped,
        clipped,
        per_seed_counts: per_seed,
    };
    Ok((img, sidecar))
}

/// Path of the JSON sidecar written next to an image.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes the PPM image and its JSON sidecar (`<path>.json`).
pub fn render_scatter(points_by_seed: &[Vec<ExtComplex>], spec: &PlotSpec, path: &Path) -> Result<PlotSidecar> {
    let (img, sidecar) = rasterize(points_by_seed, spec)?;
    std::fs::write(path, img.to_ppm())?;
    std::fs::write(sidecar_path(path), crate::io::to_json(&sidecar)?)?;
    Ok(sidecar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::C64;

    fn fin(re: f64, im: f64) -> ExtComplex {
        ExtComplex::Finite(C64::new(re, im))
    }

    #[test]
    fn single_point_square_style() {
        let spec = PlotSpec {
            width: 64,
            height: 64,
            viewport: Viewport::Auto,
            point_style: PointStyle::Square3,
        };
        let (img, side) = rasterize(&[vec![fin(0.25, -1.0)]], &spec).unwrap();
        assert_eq!(img.count_non_background(), 9);
        assert_eq!(img.pixel(32, 32), PALETTE[0]);
        assert_eq!(side.per_seed_counts, vec![1]);
    }

    #[test]
    fn infinity_is_dropped_and_counted() {
        let spec = PlotSpec {
            width: 32,
            height: 32,
            ..Default::default()
        };
        let (img, side) = rasterize(&[vec![fin(0.0, 0.0), ExtComplex::Infinity], vec![fin(1.0, 1.0)]], &spec).unwrap();
        assert_eq!(side.dropped_infinite, 1);
        assert_eq!(side.per_seed_counts, vec![1, 1]);
        assert_eq!(img.count_non_background(), 2);
        // top-right corner region holds the second seed
        assert_eq!(img.pixel(30, 1), PALETTE[1]);
    }

    #[test]
    fn empty_plots() {
        let spec = PlotSpec::default();
        assert_eq!(rasterize(&[], &spec).unwrap_err(), DynError::EmptyPlot);
        assert_eq!(
            rasterize(&[vec![ExtComplex::Infinity]], &spec).unwrap_err(),
            DynError::EmptyPlot
        );
    }

    #[test]
    fn spec_bounds() {
        let bad = PlotSpec {
            width: 15,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(DynError::InvalidPlotSpec(_))));
        let ok = PlotSpec {
            width: 8192,
            height: 16,
            ..Default::default()
        };
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn ppm_header() {
        let (img, _) = rasterize(&[vec![fin(0.0, 0.0)]], &PlotSpec { width: 16, height: 20, ..Default::default() }).unwrap();
        let ppm = img.to_ppm();
        assert!(ppm.starts_with(b"P6\n16 20\n255\n"));
        assert_eq!(ppm.len(), b"P6\n16 20\n255\n".len() + 16 * 20 * 3);
    }
}
