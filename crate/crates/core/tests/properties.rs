use proptest::prelude::*;

use linedraw_core::eval::{chamfer, coverage_of, darkness_score};
use linedraw_core::hatching::{generate_hatching, DirectionField, HatchParams};
use linedraw_core::image::{Mask, ScalarImage};
use linedraw_core::math::{Vec2, PI};
use linedraw_core::spatial::point_segment_distance;
use linedraw_core::strokes::{
    assign_thickness, invert_tone, rasterize_drawing, DrawingDocument, Polarity, Stroke, StrokeTag, ThicknessParams,
};
use linedraw_core::valleys::{detect_valleys, tag_valley_lines, ValleyParams, ValleyPolyline, ValleyTag};

/// 8-bit gray levels so gains by powers of two stay on the fixed-point grid.
fn image(w: usize, h: usize) -> impl Strategy<Value = ScalarImage> {
    prop::collection::vec(0u8..=255, w * h).prop_map(move |v| ScalarImage::from_vec(w, h, v.iter().map(|&b| b as f64 / 256.0).collect()))
}

/// Random image with a few dark blobs, so valleys exist.
fn blobs(w: usize, h: usize) -> impl Strategy<Value = ScalarImage> {
    prop::collection::vec((0.0..w as f64, 0.0..h as f64, 1.0f64..4.0), 1..4).prop_map(move |bs| {
        ScalarImage::from_fn(w, h, |x, y| {
            let v = bs.iter().fold(1.0f64, |acc, &(cx, cy, r)| {
                let d = ((x as f64 + 0.5 - cx).powi(2) + (y as f64 + 0.5 - cy).powi(2)).sqrt();
                acc.min((d / (4.0 * r)).min(1.0))
            });
            (v * 255.0).round() / 256.0
        })
    })
}

fn polyline() -> impl Strategy<Value = Vec<Vec2>> {
    prop::collection::vec((0.0f64..40.0, 0.0f64..40.0), 2..6).prop_map(|v| v.into_iter().map(|(x, y)| Vec2::new(x, y)).collect())
}

fn stroke() -> impl Strategy<Value = Stroke> {
    (polyline(), 0.5f64..4.0).prop_map(|(p, w)| Stroke::uniform(p, w, StrokeTag::Contour).unwrap())
}

fn doc(strokes: Vec<Stroke>) -> DrawingDocument {
    let mut d = DrawingDocument::new(40, 40, Polarity::DarkOnLight);
    d.strokes = strokes;
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn valley_mask_rotates_exactly(img in prop_oneof![image(20, 16), blobs(24, 20)]) {
        let p = ValleyParams { tau: 0.6, ..Default::default() };
        let a = detect_valleys(&img, &p).unwrap().mask;
        let b = detect_valleys(&img.rotated_ccw(), &p).unwrap().mask;
        prop_assert_eq!(a.rotated_ccw(), b);
    }

    #[test]
    fn valley_mask_ignores_power_of_two_gain(img in blobs(24, 24), k in -2i32..=1, b in 0u32..64) {
        let a = 2f64.powi(k);
        let b = b as f64 / 256.0;
        let p = ValleyParams { tau: 0.375, ..Default::default() };
        let q = ValleyParams { tau: a * p.tau + b, min_strength: a * p.min_strength, ..p };
        let base = detect_valleys(&img, &p).unwrap().mask;
        let gained = detect_valleys(&img.map(|v| a * v + b), &q).unwrap().mask;
        prop_assert_eq!(base, gained);
    }

    #[test]
    fn chamfer_is_symmetric(a in prop::collection::vec(polyline(), 1..3), b in prop::collection::vec(polyline(), 1..3)) {
        let ab = chamfer(&a, &b, 4.0).unwrap();
        let ba = chamfer(&b, &a, 4.0).unwrap();
        prop_assert!((ab.mean - ba.mean).abs() <= 1e-12);
        prop_assert!((ab.max - ba.max).abs() <= 1e-12);
        prop_assert!(chamfer(&a, &a, 4.0).unwrap().max <= 1e-12);
    }

    #[test]
    fn coverage_grows_with_radius(s in stroke(), target in polyline(), r in 0.0f64..3.0, dr in 0.0f64..3.0) {
        let d = doc(vec![s]);
        let ink = linedraw_core::eval::ink_mask(&d).unwrap();
        let small = coverage_of(&ink, std::slice::from_ref(&target), r).unwrap();
        let large = coverage_of(&ink, &[target], r + dr).unwrap();
        prop_assert!(small <= large);
        prop_assert!((0.0..=1.0).contains(&small) && (0.0..=1.0).contains(&large));
    }

    #[test]
    fn raster_of_union_is_pixelwise_darkest(a in prop::collection::vec(stroke(), 1..3), b in prop::collection::vec(stroke(), 1..3)) {
        let ra = rasterize_drawing(&doc(a.clone()), 2).unwrap();
        let rb = rasterize_drawing(&doc(b.clone()), 2).unwrap();
        let both = rasterize_drawing(&doc([a, b].concat()), 2).unwrap();
        for ((u, x), y) in both.data().iter().zip(ra.data()).zip(rb.data()) {
            // union of ink samples: never lighter than either part, never darker than their sum
            prop_assert!(*u <= x.min(*y) + 1e-12);
            prop_assert!(1.0 - u <= (1.0 - x) + (1.0 - y) + 1e-12);
        }
    }

    #[test]
    fn wider_band_never_thins_the_stroke(w1 in 1usize..10, extra in 0usize..6, y in 12.0f64..28.0) {
        let band = |w: usize| ScalarImage::from_fn(40, 40, move |x, _| {
            let lo = 20 - w / 2;
            if x >= lo && x < lo + w { 0.1 } else { 1.0 }
        });
        let line = vec![(vec![Vec2::new(20.0, y), Vec2::new(20.0, y + 5.0)], StrokeTag::Contour)];
        let p = ThicknessParams::for_size(512, 512, 0.25);
        let thin = assign_thickness(&line, &band(w1), &p);
        let thick = assign_thickness(&line, &band(w1 + extra), &p);
        for (a, b) in thin[0].thickness.iter().zip(&thick[0].thickness) {
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn darkness_ignores_tone_inversion(strokes in prop::collection::vec(stroke(), 1..4)) {
        let render = ScalarImage::from_fn(40, 40, |x, y| ((x * 7 + y * 3) % 40) as f64 / 40.0);
        let depth = ScalarImage::from_fn(40, 40, |x, _| if x < 36 { 1.0 } else { f64::INFINITY });
        let d = doc(strokes);
        let a = darkness_score(&d, &render, &depth);
        let b = darkness_score(&invert_tone(&d), &render, &depth);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn suggestive_tags_partition_valley_points(
        lines in prop::collection::vec(polyline(), 1..4),
        contour in polyline(),
        img in image(40, 40),
        radius in 0.5f64..3.0,
    ) {
        let tau = 0.5;
        let valleys: Vec<ValleyPolyline> = lines.iter().map(|p| ValleyPolyline { points: p.clone(), closed: false }).collect();
        let out = tag_valley_lines(&img, &valleys, std::slice::from_ref(&contour), tau, radius);
        let near = |p: Vec2| contour.windows(2).any(|w| point_segment_distance(p, w[0], w[1]) <= radius);
        let expected = |p: Vec2| -> Option<ValleyTag> {
            if near(p) {
                return Some(ValleyTag::Contour);
            }
            match img.sample_nearest(p) {
                Some(l) if l <= 0.0 => Some(ValleyTag::Contour),
                Some(l) if l < tau => Some(ValleyTag::Suggestive),
                _ => None,
            }
        };
        // every run point after the first (a shared boundary) has the run's tag
        for run in &out {
            prop_assert!(run.points.len() >= 2);
            for &p in &run.points[1..] {
                prop_assert_eq!(expected(p), Some(run.tag));
                prop_assert!(lines.iter().flatten().any(|q| *q == p));
            }
        }
        // and every maximal same-tag run of two or more points is reported
        let mut want = 0usize;
        for l in &lines {
            let tags: Vec<Option<ValleyTag>> = l.iter().map(|&p| expected(p)).collect();
            let mut i = 0;
            while i < tags.len() {
                let mut j = i;
                while j + 1 < tags.len() && tags[j + 1] == tags[i] {
                    j += 1;
                }
                let shared = i > 0 && tags[i - 1].is_some();
                if tags[i].is_some() && j - i + 1 + usize::from(shared) >= 2 {
                    want += 1;
                }
                i = j + 1;
            }
        }
        prop_assert_eq!(out.len(), want);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hatches_keep_half_spacing(a in 0.0f64..PI, gx in -0.02f64..0.02, gy in -0.02f64..0.02, seed in 0u64..1000, spacing in 3.0f64..6.0) {
        let (w, h) = (64, 64);
        let field = DirectionField {
            orientation: ScalarImage::from_fn(w, h, |x, y| (a + gx * x as f64 + gy * y as f64).rem_euclid(PI)),
            mask: Mask::from_fn(w, h, |_, _| true),
            flagged: Mask::new(w, h),
        };
        let render = ScalarImage::new(w, h, 0.3);
        let params = HatchParams { spacing, levels: 1, seed, ..Default::default() };
        let hatches = generate_hatching(&render, &field, &params).unwrap();
        prop_assert!(!hatches.is_empty());
        for (i, s) in hatches.iter().enumerate() {
            for t in &hatches[i + 1..] {
                for p in &s.points {
                    for q in &t.points {
                        prop_assert!(p.distance(*q) >= 0.5 * spacing - 1e-9, "{} < {}", p.distance(*q), 0.5 * spacing);
                    }
                }
            }
        }
    }
}
