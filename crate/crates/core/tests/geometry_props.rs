use fitbench_core::geometry::{
    estimate_body_height, intersect_densepose, keypoints_to_mask, keypoints_to_mask_with,
    synthesize_densepose, BodyPart, BodyRegion, DensePoseMap, Joint, Keypoint, Padding, Provenance,
    Skeleton2D,
};
use fitbench_core::LabelImage;
use proptest::prelude::*;

fn skeleton_strategy(frame: (usize, usize), lo: f64, hi: f64) -> impl Strategy<Value = Skeleton2D> {
    prop::collection::vec((lo..hi, lo..hi), 12).prop_map(move |pts| {
        Skeleton2D::new(
            frame.0,
            frame.1,
            Joint::ALL
                .iter()
                .zip(pts)
                .map(|(&j, (x, y))| (j, Keypoint::visible(x, y))),
        )
        .unwrap()
    })
}

fn region_strategy() -> impl Strategy<Value = BodyRegion> {
    prop_oneof![Just(BodyRegion::UpperBody), Just(BodyRegion::LowerBody)]
}

/// Pixels whose unit cell overlaps the open padded box, clipped to the frame.
fn oracle_mask(s: &Skeleton2D, region: BodyRegion, pad: Padding) -> Vec<bool> {
    let xs: Vec<f64> = region
        .horizontal_joints()
        .iter()
        .map(|&j| s.get(j).unwrap().0)
        .collect();
    let ys: Vec<f64> = region
        .vertical_joints()
        .iter()
        .map(|&j| s.get(j).unwrap().1)
        .collect();
    let (min_x, max_x) = (
        xs.iter().cloned().fold(f64::MAX, f64::min),
        xs.iter().cloned().fold(f64::MIN, f64::max),
    );
    let (min_y, max_y) = (
        ys.iter().cloned().fold(f64::MAX, f64::min),
        ys.iter().cloned().fold(f64::MIN, f64::max),
    );
    let (px, py) = (
        pad.k1 * (max_x - min_x) / 2.0,
        pad.k2 * (max_y - min_y) / 2.0,
    );
    let mut out = Vec::new();
    for y in 0..s.height() {
        for x in 0..s.width() {
            let (x, y) = (x as f64, y as f64);
            out.push(
                x < max_x + px && x + 1.0 > min_x - px && y < max_y + py && y + 1.0 > min_y - py,
            );
        }
    }
    out
}

fn labels(w: usize, h: usize, data: Vec<u8>) -> DensePoseMap {
    DensePoseMap::from_labels(
        LabelImage::from_vec(w, h, data).unwrap(),
        Provenance::Synthesized,
    )
    .unwrap()
}

fn label_map_strategy() -> impl Strategy<Value = (DensePoseMap, DensePoseMap, DensePoseMap)> {
    (2usize..12, 2usize..12).prop_flat_map(|(w, h)| {
        let v = move || prop::collection::vec(0u8..6, w * h).prop_map(move |d| labels(w, h, d));
        (v(), v(), v())
    })
}

proptest! {
    #[test]
    fn mask_contains_defining_joints(s in skeleton_strategy((320, 480), 0.0, 320.0), region in region_strategy()) {
        let Ok(rect) = keypoints_to_mask(&s, region) else { return Ok(()) };
        for &j in region.horizontal_joints() {
            let x = s.get(j).unwrap().0;
            prop_assert!(rect.x0 as f64 <= x && x < rect.x1 as f64);
        }
        for &j in region.vertical_joints() {
            let y = s.get(j).unwrap().1;
            prop_assert!(rect.y0 as f64 <= y && y < rect.y1 as f64);
        }
    }

    #[test]
    fn mask_matches_cell_overlap_oracle(
        s in skeleton_strategy((96, 128), 0.0, 96.0),
        region in region_strategy(),
        k1 in 0.01f64..1.5,
        k2 in 0.01f64..1.5,
    ) {
        let pad = Padding { k1, k2 };
        let Ok(rect) = keypoints_to_mask_with(&s, region, pad) else { return Ok(()) };
        let raster = rect.rasterize();
        prop_assert_eq!(raster.as_slice(), &oracle_mask(&s, region, pad)[..]);
    }

    #[test]
    fn more_padding_never_shrinks(
        s in skeleton_strategy((200, 300), 0.0, 200.0),
        region in region_strategy(),
        k1 in 0.0f64..1.0,
        k2 in 0.0f64..1.0,
        d1 in 0.0f64..1.0,
        d2 in 0.0f64..1.0,
    ) {
        let small = keypoints_to_mask_with(&s, region, Padding { k1, k2 });
        let large = keypoints_to_mask_with(&s, region, Padding { k1: k1 + d1, k2: k2 + d2 });
        if let (Ok(a), Ok(b)) = (small, large) {
            prop_assert!(b.x0 <= a.x0 && b.y0 <= a.y0 && b.x1 >= a.x1 && b.y1 >= a.y1);
        }
    }

    #[test]
    fn integer_translation_shifts_mask(
        s in skeleton_strategy((1000, 1000), 300.0, 600.0),
        region in region_strategy(),
        dx in -100i32..100,
        dy in -100i32..100,
    ) {
        let Ok(a) = keypoints_to_mask(&s, region) else { return Ok(()) };
        let b = keypoints_to_mask(&s.translated(dx as f64, dy as f64), region).unwrap();
        prop_assert_eq!(b.x0 as i64, a.x0 as i64 + dx as i64);
        prop_assert_eq!(b.x1 as i64, a.x1 as i64 + dx as i64);
        prop_assert_eq!(b.y0 as i64, a.y0 as i64 + dy as i64);
        prop_assert_eq!(b.y1 as i64, a.y1 as i64 + dy as i64);
    }

    #[test]
    fn intersect_with_itself_is_identity((a, _, _) in label_map_strategy()) {
        let r = intersect_densepose(&a, &a).unwrap();
        prop_assert_eq!(r.labels(), a.labels());
        prop_assert_eq!(r.provenance(), Provenance::Intersected);
    }

    #[test]
    fn intersect_properties((s, p, q) in label_map_strategy()) {
        let (w, h) = (s.width(), s.height());
        let empty = labels(w, h, vec![0; w * h]);
        prop_assert_eq!(intersect_densepose(&s, &empty).unwrap().foreground().count(), 0);

        let once = intersect_densepose(&s, &p).unwrap();
        let twice = intersect_densepose(&once, &p).unwrap();
        prop_assert_eq!(twice.labels(), once.labels());

        // a predicted map that is disjoint from the synthesized foreground
        let outside = labels(w, h, s.labels().as_slice().iter().map(|&v| if v == 0 { 1 } else { 0 }).collect());
        prop_assert_eq!(intersect_densepose(&s, &outside).unwrap().foreground().count(), 0);

        // growing the predicted foreground never removes labels
        let union = labels(w, h, p.labels().as_slice().iter().zip(q.labels().as_slice()).map(|(&a, &b)| a.max(b)).collect());
        let small = intersect_densepose(&s, &p).unwrap();
        let big = intersect_densepose(&s, &union).unwrap();
        for (a, b) in small.labels().as_slice().iter().zip(big.labels().as_slice()) {
            prop_assert!(*a == 0 || a == b);
        }
        for (r, (&sv, &pv)) in small.labels().as_slice().iter().zip(s.labels().as_slice().iter().zip(p.labels().as_slice())) {
            prop_assert_eq!(*r, if pv != 0 { sv } else { 0 });
        }
    }

    #[test]
    fn body_height_rule(shoulder in 10.0f64..100.0, torso in 0.0f64..150.0, leg in 1.0f64..150.0) {
        use Joint::*;
        let hip = shoulder + torso;
        let s = Skeleton2D::new(200, 400, [
            (LeftShoulder, Keypoint::visible(120.0, shoulder)),
            (RightShoulder, Keypoint::visible(80.0, shoulder)),
            (LeftHip, Keypoint::visible(115.0, hip)),
            (RightHip, Keypoint::visible(85.0, hip)),
            (LeftAnkle, Keypoint::visible(115.0, hip + leg)),
            (RightAnkle, Keypoint::visible(85.0, hip + leg)),
        ]).unwrap();
        let h = estimate_body_height(&s).unwrap();
        let expected = if hip - shoulder > 0.0 { 3.2 * (hip - shoulder) } else { 2.3 * leg };
        prop_assert!((h - expected).abs() <= 1e-9 * expected);
    }
}

#[test]
fn synthesized_parts_are_present() {
    use Joint::*;
    let s = Skeleton2D::new(
        200,
        420,
        [
            (LeftShoulder, Keypoint::visible(130.0, 100.0)),
            (RightShoulder, Keypoint::visible(70.0, 100.0)),
            (LeftElbow, Keypoint::visible(160.0, 160.0)),
            (RightElbow, Keypoint::visible(40.0, 160.0)),
            (LeftWrist, Keypoint::visible(175.0, 215.0)),
            (RightWrist, Keypoint::visible(25.0, 215.0)),
            (LeftHip, Keypoint::visible(120.0, 225.0)),
            (RightHip, Keypoint::visible(80.0, 225.0)),
            (LeftKnee, Keypoint::visible(125.0, 320.0)),
            (RightKnee, Keypoint::visible(75.0, 320.0)),
            (LeftAnkle, Keypoint::visible(128.0, 405.0)),
            (RightAnkle, Keypoint::visible(72.0, 405.0)),
        ],
    )
    .unwrap();
    let map = synthesize_densepose(&s).unwrap();
    for part in [
        BodyPart::Torso,
        BodyPart::LeftArm,
        BodyPart::RightArm,
        BodyPart::LeftLeg,
        BodyPart::RightLeg,
    ] {
        assert!(map.part_mask(part).count() > 100, "{part:?}");
    }
    assert_eq!(map.part(100, 160), BodyPart::Torso);
    assert_eq!(map.part(0, 0), BodyPart::Background);
}
