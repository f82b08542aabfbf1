//! Stroked drawings: variable-width polylines on a page.

pub mod outline;
pub mod raster;
pub mod thickness;

pub use outline::{stroke_outline, PathCmd};
pub use raster::rasterize_drawing;
pub use thickness::{assign_thickness, band_extent, ThicknessParams};

use alloc::vec::Vec;

use crate::math::Vec2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StrokeTag {
    Silhouette,
    Contour,
    Suggestive,
    Crease,
    Hatch,
}

impl StrokeTag {
    pub const ALL: [StrokeTag; 5] = [
        StrokeTag::Silhouette,
        StrokeTag::Contour,
        StrokeTag::Suggestive,
        StrokeTag::Crease,
        StrokeTag::Hatch,
    ];

    /// Draw order: silhouettes and contours, then suggestive, crease, hatch.
    pub fn rank(self) -> u8 {
        match self {
            StrokeTag::Silhouette | StrokeTag::Contour => 0,
            StrokeTag::Suggestive => 1,
            StrokeTag::Crease => 2,
            StrokeTag::Hatch => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrokeTag::Silhouette => "silhouette",
            StrokeTag::Contour => "contour",
            StrokeTag::Suggestive => "suggestive",
            StrokeTag::Crease => "crease",
            StrokeTag::Hatch => "hatch",
        }
    }

    pub fn from_name(s: &str) -> Option<StrokeTag> {
        StrokeTag::ALL.into_iter().find(|t| t.name() == s)
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StrokeError {
    #[error("stroke needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("{points} points but {thickness} thickness values")]
    LengthMismatch { points: usize, thickness: usize },
    #[error("non-finite stroke coordinate or thickness")]
    NonFinite,
    #[error("negative stroke thickness {0}")]
    NegativeThickness(f64),
    #[error("supersample factor {0} not in {{1, 2, 4}}")]
    Supersample(usize),
}

/// A polyline with per-point full width, in page pixels.
#[derive(Clone, Debug, PartialEq)]
pub struct Stroke {
    pub points: Vec<Vec2>,
    pub thickness: Vec<f64>,
    pub tag: StrokeTag,
}

impl Stroke {
    pub fn new(points: Vec<Vec2>, thickness: Vec<f64>, tag: StrokeTag) -> Result<Stroke, StrokeError> {
        if points.len() < 2 {
            return Err(StrokeError::TooFewPoints(points.len()));
        }
        if points.len() != thickness.len() {
            return Err(StrokeError::LengthMismatch {
                points: points.len(),
                thickness: thickness.len(),
            });
        }
        if points.iter().any(|p| !p.is_finite()) || thickness.iter().any(|t| !t.is_finite()) {
            return Err(StrokeError::NonFinite);
        }
        if let Some(&t) = thickness.iter().find(|&&t| t < 0.0) {
            return Err(StrokeError::NegativeThickness(t));
        }
        Ok(Stroke { points, thickness, tag })
    }

    /// Constant-width stroke.
    pub fn uniform(points: Vec<Vec2>, width: f64, tag: StrokeTag) -> Result<Stroke, StrokeError> {
        let t = alloc::vec![width; points.len()];
        Stroke::new(points, t, tag)
    }

    pub fn max_thickness(&self) -> f64 {
        self.thickness.iter().copied().fold(0.0, f64::max)
    }

    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// Black ink on white paper.
    DarkOnLight,
    /// White ink on black paper.
    LightOnDark,
}

impl Polarity {
    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::DarkOnLight => Polarity::LightOnDark,
            Polarity::LightOnDark => Polarity::DarkOnLight,
        }
    }

    pub fn paper(self) -> f64 {
        match self {
            Polarity::DarkOnLight => 1.0,
            Polarity::LightOnDark => 0.0,
        }
    }

    pub fn ink(self) -> f64 {
        1.0 - self.paper()
    }

    pub fn name(self) -> &'static str {
        match self {
            Polarity::DarkOnLight => "dark-on-light",
            Polarity::LightOnDark => "light-on-dark",
        }
    }

    pub fn from_name(s: &str) -> Option<Polarity> {
        match s {
            "dark-on-light" => Some(Polarity::DarkOnLight),
            "light-on-dark" => Some(Polarity::LightOnDark),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DrawingDocument {
    pub width: usize,
    pub height: usize,
    pub polarity: Polarity,
    pub strokes: Vec<Stroke>,
}

impl DrawingDocument {
    pub fn new(width: usize, height: usize, polarity: Polarity) -> Self {
        DrawingDocument {
            width,
            height,
            polarity,
            strokes: Vec::new(),
        }
    }

    pub fn count(&self, tag: StrokeTag) -> usize {
        self.strokes.iter().filter(|s| s.tag == tag).count()
    }

    pub fn tag_counts(&self) -> [usize; 5] {
        let mut c = [0; 5];
        for s in &self.strokes {
            c[s.tag.index()] += 1;
        }
        c
    }
}

/// Clips strokes to the page and orders them by tag rank (stable within a
/// rank, so input order is otherwise kept).
pub fn compose(sets: &[Vec<Stroke>], width: usize, height: usize, polarity: Polarity) -> DrawingDocument {
    let mut doc = DrawingDocument::new(width, height, polarity);
    for set in sets {
        for s in set {
            doc.strokes.extend(clip_to_page(s, width as f64, height as f64));
        }
    }
    doc.strokes.sort_by_key(|s| s.tag.rank());
    doc
}

/// Flips paper and ink; strokes are untouched.
pub fn invert_tone(doc: &DrawingDocument) -> DrawingDocument {
    DrawingDocument {
        polarity: doc.polarity.flipped(),
        ..doc.clone()
    }
}

/// Parameter range of segment `a`-`b` inside `[0, w] x [0, h]`.
fn clip_segment(a: Vec2, b: Vec2, w: f64, h: f64) -> Option<(f64, f64)> {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [(-d.x, a.x), (d.x, w - a.x), (-d.y, a.y), (d.y, h - a.y)] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 <= t1).then_some((t0, t1))
}

/// Pieces of `stroke` inside the page, with interpolated thickness.
pub fn clip_to_page(stroke: &Stroke, w: f64, h: f64) -> Vec<Stroke> {
    let mut out = Vec::new();
    let mut pts: Vec<Vec2> = Vec::new();
    let mut th: Vec<f64> = Vec::new();
    let mut flush = |pts: &mut Vec<Vec2>, th: &mut Vec<f64>| {
        if pts.len() >= 2 {
            out.push(Stroke {
                points: core::mem::take(pts),
                thickness: core::mem::take(th),
                tag: stroke.tag,
            });
        }
        pts.clear();
        th.clear();
    };
    for i in 0..stroke.points.len() - 1 {
        let (a, b) = (stroke.points[i], stroke.points[i + 1]);
        let (ta, tb) = (stroke.thickness[i], stroke.thickness[i + 1]);
        match clip_segment(a, b, w, h) {
            None => flush(&mut pts, &mut th),
            Some((t0, t1)) => {
                let start = a.lerp(b, t0);
                let start_t = ta + (tb - ta) * t0;
                if t0 > 0.0 || pts.is_empty() {
                    flush(&mut pts, &mut th);
                    pts.push(start);
                    th.push(start_t);
                }
                pts.push(a.lerp(b, t1));
                th.push(ta + (tb - ta) * t1);
                if t1 < 1.0 {
                    flush(&mut pts, &mut th);
                }
            }
        }
    }
    flush(&mut pts, &mut th);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn seg(a: (f64, f64), b: (f64, f64), tag: StrokeTag) -> Stroke {
        Stroke::uniform(vec![Vec2::new(a.0, a.1), Vec2::new(b.0, b.1)], 2.0, tag).unwrap()
    }

    #[test]
    fn stroke_validation() {
        assert_eq!(
            Stroke::uniform(vec![Vec2::ZERO], 1.0, StrokeTag::Contour).unwrap_err(),
            StrokeError::TooFewPoints(1)
        );
        assert!(Stroke::new(vec![Vec2::ZERO, Vec2::ZERO], vec![1.0], StrokeTag::Contour).is_err());
        assert!(Stroke::new(vec![Vec2::ZERO, Vec2::ZERO], vec![1.0, -1.0], StrokeTag::Contour).is_err());
    }

    #[test]
    fn compose_orders_and_clips() {
        let doc = compose(
            &[
                vec![seg((1.0, 1.0), (5.0, 5.0), StrokeTag::Hatch)],
                vec![seg((2.0, 2.0), (3.0, 9.0), StrokeTag::Contour)],
                vec![seg((-5.0, -5.0), (-1.0, -2.0), StrokeTag::Contour)],
            ],
            10,
            10,
            Polarity::DarkOnLight,
        );
        let tags: Vec<StrokeTag> = doc.strokes.iter().map(|s| s.tag).collect();
        assert_eq!(tags, [StrokeTag::Contour, StrokeTag::Hatch]);
        assert!(compose(&[], 4, 4, Polarity::DarkOnLight).strokes.is_empty());
    }

    #[test]
    fn clipping_interpolates_thickness() {
        let s = Stroke::new(
            vec![Vec2::new(-10.0, 5.0), Vec2::new(10.0, 5.0)],
            vec![0.0, 4.0],
            StrokeTag::Contour,
        )
        .unwrap();
        let c = clip_to_page(&s, 8.0, 8.0);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].points, [Vec2::new(0.0, 5.0), Vec2::new(8.0, 5.0)]);
        assert!((c[0].thickness[0] - 2.0).abs() < 1e-12);
        assert!((c[0].thickness[1] - 3.6).abs() < 1e-12);
    }

    #[test]
    fn clipping_splits_excursions() {
        let pts = vec![Vec2::new(1.0, 1.0), Vec2::new(1.0, 20.0), Vec2::new(3.0, 20.0), Vec2::new(3.0, 1.0)];
        let s = Stroke::uniform(pts, 1.0, StrokeTag::Contour).unwrap();
        let c = clip_to_page(&s, 10.0, 10.0);
        assert_eq!(c.len(), 2);
        for piece in &c {
            assert!(piece.points.iter().all(|p| p.y <= 10.0));
        }
    }

    #[test]
    fn inversion_is_an_involution() {
        let doc = compose(&[vec![seg((1.0, 1.0), (5.0, 5.0), StrokeTag::Contour)]], 8, 8, Polarity::DarkOnLight);
        let inv = invert_tone(&doc);
        assert_eq!(inv.polarity, Polarity::LightOnDark);
        assert_eq!(inv.strokes, doc.strokes);
        assert_eq!(invert_tone(&inv), doc);
    }
}
