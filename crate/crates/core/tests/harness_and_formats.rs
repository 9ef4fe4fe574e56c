use fitbench_core::formats::{
    contour_from_json, contour_to_json, decode_densepose_png, decode_layout_png,
    encode_densepose_png, encode_layout_png, load_manifest, parse_skeleton, skeleton_to_json,
    write_file,
};
use fitbench_core::geometry::{synthesize_densepose, Joint, Provenance};
use fitbench_core::harness::{
    fit_confusion, parse_json_report, render_report, synth_silhouette, synthetic_protocol,
    ConfusionOptions, HarnessError, LabeledLayout, Pairing, ReportFormat, CSV_HEADER,
};
use fitbench_core::shape_metrics::extract_garment_contour;
use fitbench_core::{FitClass, GarmentKind, LayoutClass};
use proptest::prelude::*;

const CANVAS: (usize, usize) = (128, 96);

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn silhouettes_are_deterministic_and_valid(seed in any::<u64>(), i in 0usize..5) {
        let fit = FitClass::ALL[i];
        let a = synth_silhouette(fit, seed, CANVAS).unwrap();
        prop_assert_eq!(&a, &synth_silhouette(fit, seed, CANVAS).unwrap());
        prop_assert!(a.count(LayoutClass::Garment) > 200);
        prop_assert!(a.count(LayoutClass::Body) > 200);
        let png = encode_layout_png(&a).unwrap();
        prop_assert_eq!(decode_layout_png(&png).unwrap(), a);
    }

    #[test]
    fn looser_tops_cover_more(seed in any::<u64>()) {
        let area = |f| synth_silhouette(f, seed, CANVAS).unwrap().count(LayoutClass::Garment);
        prop_assert!(area(FitClass::Slim) < area(FitClass::Regular));
        prop_assert!(area(FitClass::Regular) < area(FitClass::Loose));
    }
}

fn samples(fits: &[FitClass], seeds: std::ops::Range<u64>, offset: u64) -> Vec<LabeledLayout> {
    fits.iter()
        .flat_map(|&f| seeds.clone().map(move |s| (f, s)))
        .map(|(f, s)| LabeledLayout::new(synth_silhouette(f, s + offset, CANVAS).unwrap(), f))
        .collect()
}

#[test]
fn pairing_modes_count_comparisons() {
    let fits = GarmentKind::Top.fits();
    let gen = samples(fits, 0..2, 50);
    let src = samples(fits, 0..2, 0);
    let paired = fit_confusion(&gen, &src, ConfusionOptions::default()).unwrap();
    assert_eq!(paired.cells.len(), 3);
    assert!(paired
        .cells
        .iter()
        .all(|c| c.generated == c.source && c.count == 2));

    let all = fit_confusion(
        &gen,
        &src,
        ConfusionOptions {
            pairing: Pairing::AllPairs,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(all.cells.len(), 9);
    assert!(all.cells.iter().all(|c| c.count == 4));
    assert_eq!(
        all.cells.iter().map(|c| c.count).sum::<usize>(),
        gen.len() * src.len()
    );

    let uneven = fit_confusion(&gen[..5], &src, ConfusionOptions::default());
    assert!(matches!(uneven, Err(HarnessError::Unpairable(_))));
}

#[test]
fn reports_render_in_every_format() {
    let (gen, src) = synthetic_protocol(GarmentKind::Top, 3, CANVAS).unwrap();
    let report = fit_confusion(&gen, &src, ConfusionOptions::default()).unwrap();
    assert_eq!(report.cells.len(), 9);
    assert_eq!(
        parse_json_report(&render_report(&report, ReportFormat::Json)).unwrap(),
        report
    );

    let csv = render_report(&report, ReportFormat::Csv);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.count(), 9);

    let md = render_report(&report, ReportFormat::Markdown);
    assert_eq!(md.lines().count(), 5);
    assert!(md.starts_with("| pd \\ gt | slim Hu | slim Hd |"));
}

#[test]
fn mixing_garment_kinds_is_rejected() {
    let gen = samples(&[FitClass::Slim, FitClass::Tapered], 0..1, 0);
    let r = fit_confusion(&gen, &gen, ConfusionOptions::default());
    assert!(matches!(r, Err(HarnessError::MixedKinds)));
}

#[test]
fn skeleton_json_round_trips() {
    let text = r#"{"image_width": 64, "image_height": 80,
        "joints": {"left_shoulder": [40, 20, 1], "right_shoulder": [24, 20, true],
                   "left_hip": [38, 50, 0.9], "nose": [32, 5, 1], "left_wrist": [0, 0, 0]}}"#;
    let s = parse_skeleton(text).unwrap();
    assert_eq!(s.get(Joint::LeftShoulder), Some((40.0, 20.0)));
    assert_eq!(s.get(Joint::LeftHip), Some((38.0, 50.0)));
    assert_eq!(s.get(Joint::LeftWrist), None);
    assert_eq!(parse_skeleton(&skeleton_to_json(&s)).unwrap(), s);
    assert!(parse_skeleton(
        r#"{"image_width": 10, "image_height": 10, "joints": {"left_hip": [20, 2, 1]}}"#
    )
    .is_err());
}

#[test]
fn densepose_and_contour_files_round_trip() {
    let text = r#"{"image_width": 100, "image_height": 160, "joints": {
        "left_shoulder": [65, 40, 1], "right_shoulder": [35, 40, 1],
        "left_elbow": [75, 65, 1], "right_elbow": [25, 65, 1],
        "left_wrist": [80, 90, 1], "right_wrist": [20, 90, 1],
        "left_hip": [60, 90, 1], "right_hip": [40, 90, 1],
        "left_knee": [62, 120, 1], "right_knee": [38, 120, 1],
        "left_ankle": [63, 150, 1], "right_ankle": [37, 150, 1]}}"#;
    let map = synthesize_densepose(&parse_skeleton(text).unwrap()).unwrap();
    let back = decode_densepose_png(
        &encode_densepose_png(&map).unwrap(),
        Provenance::Synthesized,
    )
    .unwrap();
    assert_eq!(back, map);

    let layout = synth_silhouette(FitClass::Regular, 1, CANVAS).unwrap();
    let contour = extract_garment_contour(&layout).unwrap();
    assert_eq!(
        contour_from_json(&contour_to_json(&contour)).unwrap(),
        contour
    );
}

#[test]
fn manifest_paths_resolve_next_to_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.json");
    write_file(&manifest, br#"[{"layout": "a.png", "fit": "slim", "pair_id": "x"}, {"layout": "/abs/b.png", "fit": "tapered"}]"#).unwrap();
    let entries = load_manifest(&manifest).unwrap();
    assert_eq!(entries[0].layout, dir.path().join("a.png"));
    assert_eq!(entries[0].pair_id.as_deref(), Some("x"));
    assert_eq!(entries[1].layout, std::path::PathBuf::from("/abs/b.png"));
    assert_eq!(entries[1].fit, FitClass::Tapered);
}
