//! Browser bindings for the demo page in `www/`. Each exported function has a
//! plain Rust twin so the logic is testable on the host.

use fitbench_core::formats::{parse_skeleton, DENSEPOSE_PALETTE, LAYOUT_PALETTE};
use fitbench_core::geometry::{keypoints_to_mask, synthesize_densepose, BodyRegion};
use fitbench_core::harness::synth_silhouette;
use fitbench_core::shape_metrics::{
    extract_garment_contour, garment_region, hausdorff_distance, hu_distance, hu_vector,
};
use fitbench_core::{FitClass, LayoutMap};
use serde_json::json;
use wasm_bindgen::prelude::*;

const CONTOUR_RGB: [u8; 3] = [255, 255, 255];

fn parse_region(region: &str) -> Result<BodyRegion, String> {
    match region {
        "upper" => Ok(BodyRegion::UpperBody),
        "lower" => Ok(BodyRegion::LowerBody),
        other => Err(format!("unknown region `{other}`")),
    }
}

fn parse_fit(fit: &str) -> Result<FitClass, String> {
    fit.parse()
        .map_err(|e: fitbench_core::fit::UnknownFit| e.to_string())
}

/// Dense pose colored by part, darkened outside the garment-agnostic mask.
pub fn preprocess(skeleton_json: &str, region: &str) -> Result<Vec<u8>, String> {
    let skeleton = parse_skeleton(skeleton_json).map_err(|e| e.to_string())?;
    let rect = keypoints_to_mask(&skeleton, parse_region(region)?).map_err(|e| e.to_string())?;
    let pose = synthesize_densepose(&skeleton).map_err(|e| e.to_string())?;
    let mut rgba = Vec::with_capacity(pose.width() * pose.height() * 4);
    for y in 0..pose.height() {
        for x in 0..pose.width() {
            let [r, g, b] = DENSEPOSE_PALETTE[pose.part(x, y) as usize];
            if rect.contains(x, y) {
                rgba.extend([r / 2 + 60, g / 2 + 60, b / 2 + 60, 255]);
            } else {
                rgba.extend([r / 3, g / 3, b / 3, 255]);
            }
        }
    }
    Ok(rgba)
}

fn layout_rgba(layout: &LayoutMap, outline: bool) -> Vec<u8> {
    let mut rgba: Vec<u8> = layout
        .labels()
        .as_slice()
        .iter()
        .flat_map(|&l| {
            let [r, g, b] = LAYOUT_PALETTE[l as usize];
            [r, g, b, 255]
        })
        .collect();
    if outline {
        if let Ok(contour) = extract_garment_contour(layout) {
            for (x, y) in contour.points {
                let i = (y as usize * layout.width() + x as usize) * 4;
                rgba[i..i + 3].copy_from_slice(&CONTOUR_RGB);
            }
        }
    }
    rgba
}

/// Synthetic layout for `fit`, with its garment contour traced in white.
pub fn silhouette(fit: &str, seed: u32, height: usize, width: usize) -> Result<Vec<u8>, String> {
    let layout = synth_silhouette(parse_fit(fit)?, seed as u64, (height, width))
        .map_err(|e| e.to_string())?;
    Ok(layout_rgba(&layout, true))
}

/// Hu and Hausdorff distances between two synthetic layouts, as JSON.
pub fn compare(
    fit_a: &str,
    seed_a: u32,
    fit_b: &str,
    seed_b: u32,
    height: usize,
    width: usize,
) -> Result<String, String> {
    let make = |fit: &str, seed: u32| {
        synth_silhouette(parse_fit(fit)?, seed as u64, (height, width)).map_err(|e| e.to_string())
    };
    let (a, b) = (make(fit_a, seed_a)?, make(fit_b, seed_b)?);
    let hu = |l: &LayoutMap| {
        garment_region(l)
            .and_then(|m| hu_vector(&m))
            .map_err(|e| e.to_string())
    };
    let (ha, hb) = (hu(&a)?, hu(&b)?);
    let (ca, cb) = (
        extract_garment_contour(&a).map_err(|e| e.to_string())?,
        extract_garment_contour(&b).map_err(|e| e.to_string())?,
    );
    let hd = hausdorff_distance(&ca, &cb).map_err(|e| e.to_string())?;
    Ok(json!({
        "hu": hu_distance(&ha, &hb),
        "hd": hd,
        "phi_a": ha.phi,
        "phi_b": hb.phi,
        "contour_points": [ca.len(), cb.len()],
    })
    .to_string())
}

#[wasm_bindgen(js_name = preprocess)]
pub fn preprocess_js(skeleton_json: &str, region: &str) -> Result<Vec<u8>, JsError> {
    preprocess(skeleton_json, region).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = silhouette)]
pub fn silhouette_js(
    fit: &str,
    seed: u32,
    height: usize,
    width: usize,
) -> Result<Vec<u8>, JsError> {
    silhouette(fit, seed, height, width).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = compare)]
pub fn compare_js(
    fit_a: &str,
    seed_a: u32,
    fit_b: &str,
    seed_b: u32,
    height: usize,
    width: usize,
) -> Result<String, JsError> {
    compare(fit_a, seed_a, fit_b, seed_b, height, width).map_err(|e| JsError::new(&e))
}
