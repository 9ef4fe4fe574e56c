use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{synth_silhouette, HarnessError, Result};
use crate::fit::{FitClass, GarmentKind};
use crate::raster::LayoutMap;
use crate::shape_metrics::{
    extract_garment_contour, garment_region, hausdorff_distance_strided, hu_distance, hu_vector,
    Contour, HuVector, MetricError,
};

/// A layout with its fit label and optional pairing key.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledLayout {
    pub layout: LayoutMap,
    pub fit: FitClass,
    pub pair_id: Option<String>,
}

impl LabeledLayout {
    pub fn new(layout: LayoutMap, fit: FitClass) -> Self {
        Self {
            layout,
            fit,
            pair_id: None,
        }
    }

    pub fn with_pair_id(mut self, id: impl Into<String>) -> Self {
        self.pair_id = Some(id.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pairing {
    /// Each generated layout is compared with its own source: matched by
    /// `pair_id` when every sample has one, otherwise by position.
    Paired,
    /// Every generated layout against every source layout of each fit.
    AllPairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionOptions {
    pub pairing: Pairing,
    pub keep_pairs: bool,
    /// Contour subsampling for the Hausdorff distance; 1 is exact.
    pub hd_stride: usize,
}

impl Default for ConfusionOptions {
    fn default() -> Self {
        Self {
            pairing: Pairing::Paired,
            keep_pairs: false,
            hd_stride: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellStats {
    pub generated: FitClass,
    pub source: FitClass,
    pub mean_hu: f64,
    pub mean_hd: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub generated_index: usize,
    pub source_index: usize,
    pub hu: f64,
    pub hd: f64,
}

/// Generated-fit × source-fit matrix of mean Hu and Hausdorff distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub kind: GarmentKind,
    pub pairing: Pairing,
    /// Non-empty cells, row-major in vocabulary order.
    pub cells: Vec<CellStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_pair_records: Option<Vec<PairRecord>>,
}

impl FitReport {
    pub fn cell(&self, generated: FitClass, source: FitClass) -> Option<&CellStats> {
        self.cells
            .iter()
            .find(|c| c.generated == generated && c.source == source)
    }

    /// Mean of the two cells between fits `a` and `b` for one metric.
    pub fn cross_distance(
        &self,
        a: FitClass,
        b: FitClass,
        metric: impl Fn(&CellStats) -> f64,
    ) -> Option<f64> {
        Some(0.5 * (metric(self.cell(a, b)?) + metric(self.cell(b, a)?)))
    }

    /// Every diagonal cell is strictly below each off-diagonal cell in its row
    /// and its column. False when any cell of the kind is missing.
    pub fn is_diagonal_minimal(&self, metric: impl Fn(&CellStats) -> f64) -> bool {
        let fits = self.kind.fits();
        fits.iter().all(|&f| {
            let Some(diag) = self.cell(f, f).map(&metric) else {
                return false;
            };
            fits.iter()
                .filter(|&&o| o != f)
                .all(|&o| match (self.cell(f, o), self.cell(o, f)) {
                    (Some(r), Some(c)) => diag < metric(r) && diag < metric(c),
                    _ => false,
                })
        })
    }

    /// Along the fit vocabulary order, the distance between the two extreme
    /// fits exceeds the distance between any adjacent pair. Trivially true for
    /// kinds with fewer than three fits.
    pub fn is_monotone(&self, metric: impl Fn(&CellStats) -> f64 + Copy) -> bool {
        let fits = self.kind.fits();
        if fits.len() < 3 {
            return true;
        }
        let (first, last) = (fits[0], fits[fits.len() - 1]);
        let Some(extreme) = self.cross_distance(first, last, metric) else {
            return false;
        };
        fits.windows(2).all(|w| {
            self.cross_distance(w[0], w[1], metric)
                .is_some_and(|d| d < extreme)
        })
    }
}

struct Features {
    hu: HuVector,
    contour: Contour,
}

fn features(layout: &LayoutMap) -> std::result::Result<Features, MetricError> {
    Ok(Features {
        hu: hu_vector(&garment_region(layout)?)?,
        contour: extract_garment_contour(layout)?,
    })
}

fn all_features(samples: &[LabeledLayout], side: &'static str) -> Result<Vec<Features>> {
    #[cfg(feature = "parallel")]
    use rayon::prelude::*;
    #[cfg(feature = "parallel")]
    let iter = samples.par_iter();
    #[cfg(not(feature = "parallel"))]
    let iter = samples.iter();
    iter.enumerate()
        .map(|(index, s)| {
            features(&s.layout).map_err(|source| HarnessError::Metric {
                side,
                index,
                source,
            })
        })
        .collect()
}

/// Index pairs `(generated, source)` compared under `pairing`, in generated order.
pub fn pair_indices(
    generated: &[LabeledLayout],
    sources: &[LabeledLayout],
    pairing: Pairing,
) -> Result<Vec<(usize, usize)>> {
    match pairing {
        Pairing::AllPairs => Ok((0..generated.len())
            .flat_map(|g| (0..sources.len()).map(move |s| (g, s)))
            .collect()),
        Pairing::Paired => {
            let all_keyed = generated.iter().chain(sources).all(|s| s.pair_id.is_some());
            let none_keyed = generated.iter().chain(sources).all(|s| s.pair_id.is_none());
            if all_keyed {
                let mut by_id = HashMap::new();
                for (i, s) in sources.iter().enumerate() {
                    let id = s.pair_id.as_deref().unwrap();
                    if by_id.insert(id, i).is_some() {
                        return Err(HarnessError::Unpairable(format!(
                            "duplicate source pair id `{id}`"
                        )));
                    }
                }
                generated
                    .iter()
                    .enumerate()
                    .map(|(g, s)| {
                        let id = s.pair_id.as_deref().unwrap();
                        by_id.get(id).map(|&src| (g, src)).ok_or_else(|| {
                            HarnessError::Unpairable(format!("no source with pair id `{id}`"))
                        })
                    })
                    .collect()
            } else if none_keyed && generated.len() == sources.len() {
                Ok((0..generated.len()).map(|i| (i, i)).collect())
            } else {
                Err(HarnessError::Unpairable(
                    "paired mode needs a pair id on every sample or equally long lists".into(),
                ))
            }
        }
    }
}

fn sorted_mean(mut v: Vec<f64>) -> f64 {
    // sorting first makes the mean independent of input order
    v.sort_by(f64::total_cmp);
    v.iter().sum::<f64>() / v.len() as f64
}

/// Compares every generated layout with its source layout(s) and averages the
/// Hu and Hausdorff distances per (generated fit, source fit) cell.
pub fn fit_confusion(
    generated: &[LabeledLayout],
    sources: &[LabeledLayout],
    options: ConfusionOptions,
) -> Result<FitReport> {
    let kind = generated
        .iter()
        .chain(sources)
        .map(|s| s.fit.kind())
        .next()
        .ok_or(HarnessError::EmptyCell {
            fit: FitClass::Slim,
            side: "generated",
        })?;
    if generated
        .iter()
        .chain(sources)
        .any(|s| s.fit.kind() != kind)
    {
        return Err(HarnessError::MixedKinds);
    }
    for &fit in kind.fits() {
        for (side, list) in [("generated", generated), ("source", sources)] {
            if !list.iter().any(|s| s.fit == fit) {
                return Err(HarnessError::EmptyCell { fit, side });
            }
        }
    }

    let index_pairs = pair_indices(generated, sources, options.pairing)?;
    let gen_features = all_features(generated, "generated")?;
    let src_features = all_features(sources, "source")?;

    let measure = |&(g, s): &(usize, usize)| -> Result<PairRecord> {
        let (a, b) = (&gen_features[g], &src_features[s]);
        let hd = hausdorff_distance_strided(&a.contour, &b.contour, options.hd_stride).map_err(
            |source| HarnessError::Metric {
                side: "generated",
                index: g,
                source,
            },
        )?;
        Ok(PairRecord {
            generated_index: g,
            source_index: s,
            hu: hu_distance(&a.hu, &b.hu),
            hd,
        })
    };
    #[cfg(feature = "parallel")]
    let records: Vec<PairRecord> = {
        use rayon::prelude::*;
        index_pairs.par_iter().map(measure).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let records: Vec<PairRecord> = index_pairs.iter().map(measure).collect::<Result<_>>()?;

    let mut cells = Vec::new();
    for &gf in kind.fits() {
        for &sf in kind.fits() {
            let in_cell: Vec<&PairRecord> = records
                .iter()
                .filter(|r| {
                    generated[r.generated_index].fit == gf && sources[r.source_index].fit == sf
                })
                .collect();
            if in_cell.is_empty() {
                continue;
            }
            cells.push(CellStats {
                generated: gf,
                source: sf,
                mean_hu: sorted_mean(in_cell.iter().map(|r| r.hu).collect()),
                mean_hd: sorted_mean(in_cell.iter().map(|r| r.hd).collect()),
                count: in_cell.len(),
            });
        }
    }

    Ok(FitReport {
        kind,
        pairing: options.pairing,
        cells,
        per_pair_records: options.keep_pairs.then_some(records),
    })
}

/// Seed offset separating synthetic "generated" layouts from their sources.
pub const GENERATED_SEED_OFFSET: u64 = 1_000_003;

/// Synthetic stand-in for the try-on sanity check: for each fit and seed a
/// source layout, and for each source one generated layout per fit of the
/// same kind (shared seed, so only the fit changes between them).
pub fn synthetic_protocol(
    kind: GarmentKind,
    seeds: u64,
    canvas: (usize, usize),
) -> Result<(Vec<LabeledLayout>, Vec<LabeledLayout>)> {
    let mut generated = Vec::new();
    let mut sources = Vec::new();
    for &source_fit in kind.fits() {
        for seed in 0..seeds {
            let id = format!("{source_fit}-{seed}");
            sources.push(
                LabeledLayout::new(synth_silhouette(source_fit, seed, canvas)?, source_fit)
                    .with_pair_id(&id),
            );
            for &target in kind.fits() {
                let layout = synth_silhouette(target, seed + GENERATED_SEED_OFFSET, canvas)?;
                generated.push(LabeledLayout::new(layout, target).with_pair_id(&id));
            }
        }
    }
    Ok((generated, sources))
}
