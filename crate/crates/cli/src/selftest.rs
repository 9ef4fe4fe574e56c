use std::f64::consts::PI;

use fitbench_core::cond_kernel::{
    film_modulate, zero_init_project, FiLMParams, Projection, ScaleBundle, Tensor4,
};
use fitbench_core::harness::{fit_confusion, synthetic_protocol, ConfusionOptions};
use fitbench_core::shape_metrics::{hausdorff_distance_sq, hu_vector, Point};
use fitbench_core::{BinaryMask, GarmentKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{FaultArg, JobConfig, Outcome};

pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> Check {
    Check {
        name,
        passed,
        detail,
    }
}

fn disk(radius: f64, size: usize) -> BinaryMask {
    let c = (size as f64 - 1.0) / 2.0;
    BinaryMask::from_fn(size, size, |x, y| {
        (x as f64 - c).hypot(y as f64 - c) <= radius
    })
}

fn hu_disk(fault: Option<FaultArg>) -> Check {
    let mut phi = match hu_vector(&disk(100.0, 210)) {
        Ok(h) => h.phi,
        Err(e) => return check("hu-disk", false, e.to_string()),
    };
    if fault == Some(FaultArg::PhiPerturb) {
        phi[0] *= 1.01;
    }
    let err = (phi[0] - 1.0 / (2.0 * PI)).abs();
    check(
        "hu-disk",
        err < 1e-3,
        format!("|phi1 - 1/(2pi)| = {err:.2e}"),
    )
}

fn hu_invariance() -> Check {
    let (w, h) = (40, 30);
    let blob = |x: usize, y: usize| {
        (4..20).contains(&x) && (3..25).contains(&y)
            || (4..34).contains(&x) && (18..25).contains(&y)
    };
    let base = BinaryMask::from_fn(w, h, blob);
    let shifted = BinaryMask::from_fn(w + 7, h + 5, |x, y| x >= 7 && y >= 5 && blob(x - 7, y - 5));
    let rotated = BinaryMask::from_fn(h, w, |x, y| blob(y, h - 1 - x));
    let (Ok(a), Ok(b), Ok(c)) = (hu_vector(&base), hu_vector(&shifted), hu_vector(&rotated)) else {
        return check("hu-invariance", false, "empty mask".into());
    };
    let rel = |p: &[f64; 7], q: &[f64; 7]| {
        p.iter()
            .zip(q)
            .map(|(x, y)| (x - y).abs() / x.abs().max(1e-12))
            .fold(0.0, f64::max)
    };
    let (t, r) = (rel(&a.phi, &b.phi), rel(&a.phi, &c.phi));
    check(
        "hu-invariance",
        t < 1e-9 && r < 1e-6,
        format!("translation {t:.1e}, rotation {r:.1e}"),
    )
}

/// `sqrt(ac) <= sqrt(ab) + sqrt(bc)` on squared integer distances, without rounding.
pub fn triangle_holds(ab: u64, bc: u64, ac: u64) -> bool {
    let slack = ac as i128 - ab as i128 - bc as i128;
    slack <= 0 || (slack as u128).pow(2) <= 4 * ab as u128 * bc as u128
}

fn random_points(rng: &mut ChaCha8Rng) -> Vec<Point> {
    let n = rng.random_range(1..12);
    (0..n)
        .map(|_| (rng.random_range(-50..50), rng.random_range(-50..50)))
        .collect()
}

fn hausdorff_axioms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let trials = 300;
    for i in 0..trials {
        let (a, b, c) = (
            random_points(&mut rng),
            random_points(&mut rng),
            random_points(&mut rng),
        );
        let d = |p: &[Point], q: &[Point]| hausdorff_distance_sq(p, q).expect("non-empty");
        let (ab, ba, bc, ac, aa) = (d(&a, &b), d(&b, &a), d(&b, &c), d(&a, &c), d(&a, &a));
        if aa != 0 || ab != ba || !triangle_holds(ab, bc, ac) {
            return check("hausdorff-axioms", false, format!("violated on triple {i}"));
        }
    }
    check("hausdorff-axioms", true, format!("{trials} triples"))
}

fn random_tensor(rng: &mut ChaCha8Rng, shape: [usize; 4], offset: f32, scale: f32) -> Tensor4 {
    Tensor4::from_fn(shape, |_| offset + scale * rng.random_range(-1.0f32..1.0))
}

fn film_standardization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let x = random_tensor(&mut rng, [2, 3, 8, 8], 5.0, 4.0);
    let y = match film_modulate(&x, &FiLMParams::identity(3)) {
        Ok(y) => y,
        Err(e) => return check("film-standardization", false, e.to_string()),
    };
    let [b, c, h, w] = y.shape();
    let mut worst: f64 = 0.0;
    for ci in 0..c {
        let vals: Vec<f64> = (0..b)
            .flat_map(|bi| (0..h).flat_map(move |hi| (0..w).map(move |wi| [bi, ci, hi, wi])))
            .map(|i| y.get(i) as f64)
            .collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        worst = worst.max(mean.abs()).max((sd - 1.0).abs());
    }
    check(
        "film-standardization",
        worst < 1e-4,
        format!("max deviation {worst:.1e}"),
    )
}

fn zero_init_contract() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let shapes = [[1, 4, 4, 3], [1, 4, 8, 6]];
    let features: Vec<Tensor4> = shapes
        .iter()
        .map(|&s| random_tensor(&mut rng, s, 0.0, 1.0))
        .collect();
    let residuals: Vec<Tensor4> = shapes
        .iter()
        .map(|&s| random_tensor(&mut rng, s, 0.5, 2.0))
        .collect();
    let run = || -> Result<bool, fitbench_core::cond_kernel::KernelError> {
        let bundle = ScaleBundle::from_tensors(features)?;
        let projected =
            zero_init_project(&bundle, &[Projection::zeros(4, 4), Projection::zeros(4, 4)])?;
        let params = FiLMParams {
            gamma: vec![1.5, -0.5, 2.0, 1.0],
            beta: vec![0.1, 0.2, -0.3, 0.0],
        };
        let mut exact = true;
        for (p, x) in projected.scales().iter().zip(&residuals) {
            exact &= p.tensor.data().iter().all(|v| v.to_bits() == 0);
            let lhs = film_modulate(&x.try_add(&p.tensor)?, &params)?;
            let rhs = film_modulate(x, &params)?;
            exact &= lhs
                .data()
                .iter()
                .zip(rhs.data())
                .all(|(a, b)| a.to_bits() == b.to_bits());
        }
        Ok(exact)
    };
    match run() {
        Ok(exact) => check(
            "zero-init",
            exact,
            if exact {
                "bit-exact".into()
            } else {
                "outputs differ".into()
            },
        ),
        Err(e) => check("zero-init", false, e.to_string()),
    }
}

fn fit_separation() -> Check {
    let seeds = 20;
    let report = synthetic_protocol(GarmentKind::Top, seeds, (128, 96))
        .and_then(|(g, s)| fit_confusion(&g, &s, ConfusionOptions::default()));
    match report {
        Ok(r) => {
            let hu = |c: &fitbench_core::harness::CellStats| c.mean_hu;
            let hd = |c: &fitbench_core::harness::CellStats| c.mean_hd;
            let ok = r.is_diagonal_minimal(hu)
                && r.is_diagonal_minimal(hd)
                && r.is_monotone(hu)
                && r.is_monotone(hd);
            check(
                "fit-separation",
                ok,
                format!("{seeds} seeds per fit, 128x96"),
            )
        }
        Err(e) => check("fit-separation", false, e.to_string()),
    }
}

pub fn checks(fault: Option<FaultArg>) -> Vec<Check> {
    vec![
        hu_disk(fault),
        hu_invariance(),
        hausdorff_axioms(),
        film_standardization(),
        zero_init_contract(),
        fit_separation(),
    ]
}

pub fn run_selftest(config: &JobConfig) -> Outcome {
    let results = checks(config.inject_fault);
    for c in &results {
        println!(
            "{:<22} {:<4} {}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    if results.iter().all(|c| c.passed) {
        Outcome::Clean
    } else {
        Outcome::Partial
    }
}
