//! Splitting valley lines into contour-like and suggestive strokes.

use alloc::vec::Vec;

use crate::image::ScalarImage;
use crate::math::Vec2;
use crate::spatial::SegmentIndex;

use super::detect::{detect_valleys, ValleyError, ValleyParams};
use super::link::{link_valleys, LinkParams, ValleyPolyline};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValleyTag {
    /// Coincides with an occluding contour, or reaches zero luminance.
    Contour,
    /// A dark interior valley that does not reach black.
    Suggestive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaggedPolyline {
    pub points: Vec<Vec2>,
    pub tag: ValleyTag,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuggestiveParams {
    pub valley: ValleyParams,
    pub link: LinkParams,
    /// Valley points within this many pixels of a projected contour are
    /// contour points.
    pub contour_radius: f64,
}

impl Default for SuggestiveParams {
    fn default() -> Self {
        SuggestiveParams {
            valley: ValleyParams::default(),
            link: LinkParams::default(),
            contour_radius: 2.0,
        }
    }
}

/// Tags each point of each valley line and splits lines into runs of equal
/// tag. Points at or above `tau` are trimmed.
///
/// A point near a projected contour is `Contour`. Elsewhere a point with
/// luminance in `(0, tau)` is `Suggestive` and a point at zero luminance is
/// `Contour`. Luminance is the nearest pixel of `render`.
pub fn tag_valley_lines(
    render: &ScalarImage,
    valleys: &[ValleyPolyline],
    contours: &[Vec<Vec2>],
    tau: f64,
    contour_radius: f64,
) -> Vec<TaggedPolyline> {
    let index = SegmentIndex::new(contours, 4.0);
    let mut out = Vec::new();
    for v in valleys {
        let path = v.path();
        let mut run: Vec<Vec2> = Vec::new();
        let mut run_tag: Option<ValleyTag> = None;
        let flush = |run: &mut Vec<Vec2>, tag: Option<ValleyTag>, out: &mut Vec<TaggedPolyline>| {
            if let Some(tag) = tag {
                if run.len() >= 2 {
                    out.push(TaggedPolyline {
                        points: core::mem::take(run),
                        tag,
                    });
                }
            }
            run.clear();
        };
        for &p in &path {
            let tag = if index.distance(p) <= contour_radius {
                Some(ValleyTag::Contour)
            } else {
                match render.sample_nearest(p) {
                    Some(l) if l <= 0.0 => Some(ValleyTag::Contour),
                    Some(l) if l < tau => Some(ValleyTag::Suggestive),
                    _ => None,
                }
            };
            if tag != run_tag {
                let last = run.last().copied();
                flush(&mut run, run_tag, &mut out);
                // neighboring runs share their boundary point
                if let (Some(l), Some(_), Some(_)) = (last, run_tag, tag) {
                    run.push(l);
                }
                run_tag = tag;
            }
            if tag.is_some() {
                run.push(p);
            }
        }
        flush(&mut run, run_tag, &mut out);
    }
    out
}

/// Detects, links and tags valley lines of a rendered image.
pub fn suggestive_strokes(
    render: &ScalarImage,
    contours: &[Vec<Vec2>],
    params: &SuggestiveParams,
) -> Result<Vec<TaggedPolyline>, ValleyError> {
    let map = detect_valleys(render, &params.valley)?;
    let lines = link_valleys(&map, &params.link);
    Ok(tag_valley_lines(render, &lines, contours, params.valley.tau, params.contour_radius))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(y: f64) -> ValleyPolyline {
        ValleyPolyline {
            points: (0..20).map(|x| Vec2::new(x as f64 + 0.5, y)).collect(),
            closed: false,
        }
    }

    #[test]
    fn gray_valley_is_suggestive_black_is_contour() {
        let img = ScalarImage::from_fn(20, 20, |x, _| if x < 10 { 0.1 } else { 0.0 });
        let out = tag_valley_lines(&img, &[line(5.5)], &[], 0.25, 2.0);
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].tag, ValleyTag::Suggestive);
        assert_eq!(out[1].tag, ValleyTag::Contour);
        assert_eq!(out[0].points.last(), out[1].points.first());
    }

    #[test]
    fn bright_points_trimmed() {
        let img = ScalarImage::from_fn(20, 20, |x, _| if (8..12).contains(&x) { 0.9 } else { 0.1 });
        let out = tag_valley_lines(&img, &[line(5.5)], &[], 0.25, 2.0);
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|t| t.tag == ValleyTag::Suggestive));
        assert!(out.iter().all(|t| t.points.iter().all(|p| !(8.0..12.0).contains(&p.x))));
    }

    #[test]
    fn near_contour_is_contour() {
        let img = ScalarImage::new(20, 20, 0.1);
        let contour = alloc::vec![Vec2::new(0.0, 6.5), Vec2::new(20.0, 6.5)];
        let out = tag_valley_lines(&img, &[line(5.5)], &[contour], 0.25, 2.0);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].tag, ValleyTag::Contour);
    }
}
