//! On-disk formats: keypoint JSON, label PNGs, dataset manifests, contour JSON.

use std::collections::BTreeMap;
use std::fs;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fit::FitClass;
use crate::geometry::{DensePoseMap, Joint, Keypoint, Provenance, Skeleton2D};
use crate::raster::{BinaryMask, LabelImage, LayoutMap};
use crate::shape_metrics::Contour;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("PNG decode: {0}")]
    PngDecode(#[from] png::DecodingError),
    #[error("PNG encode: {0}")]
    PngEncode(#[from] png::EncodingError),
    #[error("unsupported PNG: {0}")]
    UnsupportedPng(String),
    #[error("label {0} is out of range")]
    BadLabel(u8),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, FormatError>;

pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
enum Visibility {
    Flag(bool),
    Level(f64),
}

#[derive(Debug, Deserialize)]
struct RawSkeleton {
    image_width: usize,
    image_height: usize,
    joints: BTreeMap<String, (f64, f64, Visibility)>,
}

/// Parses `{"image_width", "image_height", "joints": {"left_shoulder": [x, y, visible], ...}}`.
/// Visibility may be a boolean or a number (non-zero is visible); joints with
/// other names are ignored.
pub fn parse_skeleton(text: &str) -> Result<Skeleton2D> {
    let raw: RawSkeleton = serde_json::from_str(text)?;
    let joints = raw.joints.into_iter().filter_map(|(name, (x, y, vis))| {
        let joint = name.parse::<Joint>().ok()?;
        let visible = match vis {
            Visibility::Flag(b) => b,
            Visibility::Level(v) => v != 0.0,
        };
        Some((joint, Keypoint { x, y, visible }))
    });
    Skeleton2D::new(raw.image_width, raw.image_height, joints)
        .map_err(|e| FormatError::Invalid(e.to_string()))
}

pub fn skeleton_to_json(skeleton: &Skeleton2D) -> String {
    let joints: serde_json::Map<String, serde_json::Value> = skeleton
        .joints()
        .iter()
        .map(|(j, kp)| {
            (
                j.name().to_string(),
                serde_json::json!([kp.x, kp.y, kp.visible]),
            )
        })
        .collect();
    serde_json::json!({
        "image_width": skeleton.width(),
        "image_height": skeleton.height(),
        "joints": joints,
    })
    .to_string()
}

/// Palette for dense-pose labels 0–5.
pub const DENSEPOSE_PALETTE: [[u8; 3]; 6] = [
    [0, 0, 0],
    [220, 80, 60],
    [70, 140, 230],
    [60, 200, 200],
    [240, 190, 50],
    [150, 90, 210],
];

/// Palette for layout labels 0–2.
pub const LAYOUT_PALETTE: [[u8; 3]; 3] = [[0, 0, 0], [200, 170, 140], [40, 110, 200]];

/// Mask as an 8-bit grayscale PNG: 255 inside, 0 outside.
pub fn encode_mask_png(mask: &BinaryMask) -> Result<Vec<u8>> {
    let data: Vec<u8> = mask
        .as_slice()
        .iter()
        .map(|&b| if b { 255 } else { 0 })
        .collect();
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, mask.width() as u32, mask.height() as u32);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::Eight);
        enc.write_header()?.write_image_data(&data)?;
    }
    Ok(out)
}

/// Labels as an 8-bit indexed PNG; the pixel values are the labels.
pub fn encode_label_png(labels: &LabelImage, palette: &[[u8; 3]]) -> Result<Vec<u8>> {
    if let Some(&v) = labels
        .as_slice()
        .iter()
        .find(|&&v| v as usize >= palette.len())
    {
        return Err(FormatError::BadLabel(v));
    }
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, labels.width() as u32, labels.height() as u32);
        enc.set_color(png::ColorType::Indexed);
        enc.set_depth(png::BitDepth::Eight);
        enc.set_palette(palette.concat());
        enc.write_header()?.write_image_data(labels.as_slice())?;
    }
    Ok(out)
}

/// Reads raw 8-bit samples of an indexed or grayscale PNG without palette expansion.
pub fn decode_label_png(bytes: &[u8]) -> Result<LabelImage> {
    let mut decoder = png::Decoder::new(Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info()?;
    let info = reader.info();
    let (color, depth) = (info.color_type, info.bit_depth);
    if !matches!(color, png::ColorType::Indexed | png::ColorType::Grayscale)
        || depth != png::BitDepth::Eight
    {
        return Err(FormatError::UnsupportedPng(format!(
            "expected 8-bit indexed or grayscale, got {color:?} at {depth:?}"
        )));
    }
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| FormatError::UnsupportedPng("image too large".into()))?;
    let mut buf = vec![0; size];
    let frame = reader.next_frame(&mut buf)?;
    buf.truncate(frame.buffer_size());
    LabelImage::from_vec(frame.width as usize, frame.height as usize, buf)
        .ok_or_else(|| FormatError::UnsupportedPng("empty image".into()))
}

pub fn decode_layout_png(bytes: &[u8]) -> Result<LayoutMap> {
    LayoutMap::from_labels(decode_label_png(bytes)?).map_err(FormatError::BadLabel)
}

pub fn encode_layout_png(layout: &LayoutMap) -> Result<Vec<u8>> {
    encode_label_png(layout.labels(), &LAYOUT_PALETTE)
}

pub fn decode_densepose_png(bytes: &[u8], provenance: Provenance) -> Result<DensePoseMap> {
    DensePoseMap::from_labels(decode_label_png(bytes)?, provenance).map_err(FormatError::BadLabel)
}

pub fn encode_densepose_png(map: &DensePoseMap) -> Result<Vec<u8>> {
    encode_label_png(map.labels(), &DENSEPOSE_PALETTE)
}

pub fn load_layout(path: &Path) -> Result<LayoutMap> {
    decode_layout_png(&read_file(path)?)
}

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub layout: PathBuf,
    pub fit: FitClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair_id: Option<String>,
}

/// Reads a JSON manifest; relative layout paths resolve against the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let mut entries: Vec<ManifestEntry> = serde_json::from_slice(&read_file(path)?)?;
    let base = path.parent().unwrap_or(Path::new(""));
    for e in &mut entries {
        if e.layout.is_relative() {
            e.layout = base.join(&e.layout);
        }
    }
    Ok(entries)
}

/// `[[x, y], ...]`
pub fn contour_to_json(contour: &Contour) -> String {
    serde_json::to_string(contour).expect("contour serializes")
}

pub fn contour_from_json(text: &str) -> Result<Contour> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::LayoutClass;

    #[test]
    fn skeleton_json_accepts_bool_and_numeric_visibility() {
        let s = parse_skeleton(
            r#"{"image_width": 64, "image_height": 80,
                "joints": {"left_hip": [10, 20, 1], "right_hip": [30.5, 20, true],
                           "left_knee": [1, 1, 0], "nose": [3, 3, 2]}}"#,
        )
        .unwrap();
        assert_eq!(s.get(Joint::LeftHip), Some((10.0, 20.0)));
        assert_eq!(s.get(Joint::RightHip), Some((30.5, 20.0)));
        assert_eq!(s.get(Joint::LeftKnee), None);
        let back = parse_skeleton(&skeleton_to_json(&s)).unwrap();
        assert_eq!(back, s);
        assert!(parse_skeleton(
            r#"{"image_width": 4, "image_height": 4, "joints": {"left_hip": [9, 1, true]}}"#
        )
        .is_err());
        assert!(parse_skeleton("[]").is_err());
    }

    #[test]
    fn label_png_keeps_indices() {
        let mut layout = LayoutMap::new(5, 3);
        layout.set(1, 1, LayoutClass::Garment);
        layout.set(4, 2, LayoutClass::Body);
        let bytes = encode_layout_png(&layout).unwrap();
        assert_eq!(decode_layout_png(&bytes).unwrap(), layout);

        let img = LabelImage::from_vec(2, 1, vec![0, 7]).unwrap();
        assert!(matches!(
            encode_label_png(&img, &LAYOUT_PALETTE),
            Err(FormatError::BadLabel(7))
        ));
        let gray = encode_label_png(
            &LabelImage::from_vec(2, 1, vec![0, 5]).unwrap(),
            &DENSEPOSE_PALETTE,
        )
        .unwrap();
        assert!(matches!(
            decode_layout_png(&gray),
            Err(FormatError::BadLabel(5))
        ));
    }

    #[test]
    fn mask_png_is_binary_gray() {
        let m = BinaryMask::from_fn(4, 2, |x, _| x > 1);
        let img = decode_label_png(&encode_mask_png(&m).unwrap()).unwrap();
        assert_eq!(img.as_slice(), &[0, 0, 255, 255, 0, 0, 255, 255]);
    }

    #[test]
    fn manifest_paths_are_relative_to_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        std::fs::write(&path, r#"[{"layout": "a.png", "fit": "slim"}, {"layout": "/abs/b.png", "fit": "loose", "pair_id": "7"}]"#).unwrap();
        let m = load_manifest(&path).unwrap();
        assert_eq!(m[0].layout, dir.path().join("a.png"));
        assert_eq!(m[1].layout, PathBuf::from("/abs/b.png"));
        assert_eq!(m[1].pair_id.as_deref(), Some("7"));
        std::fs::write(&path, r#"[{"layout": "a.png", "fit": "baggy"}]"#).unwrap();
        assert!(matches!(load_manifest(&path), Err(FormatError::Json(_))));
    }

    #[test]
    fn contour_json_is_point_array() {
        let c = Contour::new(vec![(1, 2), (3, 4)]);
        assert_eq!(contour_to_json(&c), "[[1,2],[3,4]]");
        assert_eq!(contour_from_json("[[1,2],[3,4]]").unwrap(), c);
    }
}
