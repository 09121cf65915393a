//! Operator norms at matrix levels and the sampled isometry harness.
//!
//! A level-n element is an n x n grid of induced elements; its norm is the
//! largest singular value of the block matrix obtained by substituting each
//! entry's matrix form. Sampling is deterministic: sample `i` of a run with
//! base seed `s` draws from a ChaCha stream derived from `(s, i)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::Automorphism;
use crate::induced::{InducedElement, InducedSpace};
use crate::linalg::{self, op_norm, rand_mat, Mat};
use crate::matrix_form::{matrix_form, CosetTables};
use crate::report::{Verdict, VerdictReport};
use crate::space::Field;
use crate::{Error, Result};

/// RNG for one sample of a seeded run.
pub fn sample_rng(base_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(index);
    rng
}

/// A random induced element: every coefficient drawn entrywise uniform in
/// [-1, 1] (independently for real and imaginary parts over the complex
/// field), then projected onto the space.
pub fn sample_element(ctx: &InducedSpace, rng: &mut ChaCha8Rng) -> InducedElement {
    let d = ctx.d();
    let complex = ctx.space.field == Field::Complex;
    let coeffs = (0..ctx.m())
        .map(|_| ctx.space.project(&rand_mat(rng, d, d, complex)))
        .collect();
    InducedElement { coeffs }
}

/// A random n x n grid of induced elements.
pub fn sample_level(
    ctx: &InducedSpace,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<InducedElement>> {
    (0..n)
        .map(|_| (0..n).map(|_| sample_element(ctx, rng)).collect())
        .collect()
}

/// Assembles the block matrix of a level-n element.
pub fn level_matrix(
    ctx: &InducedSpace,
    tables: &CosetTables,
    grid: &[Vec<InducedElement>],
) -> Result<Mat> {
    let n = grid.len();
    if n == 0 || grid.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension(
            "level element must be a square grid".into(),
        ));
    }
    let blocks: Vec<Vec<Mat>> = grid
        .iter()
        .map(|row| {
            row.iter()
                .map(|phi| matrix_form(ctx, tables, phi).matrix)
                .collect()
        })
        .collect();
    Ok(linalg::block_matrix(&blocks))
}

/// Norm of a level-n element: largest singular value of its block matrix.
pub fn level_norm(
    ctx: &InducedSpace,
    tables: &CosetTables,
    grid: &[Vec<InducedElement>],
) -> Result<f64> {
    op_norm(&level_matrix(ctx, tables, grid)?)
}

fn apply_aut_level(
    ctx: &InducedSpace,
    sigma: &Automorphism,
    grid: &[Vec<InducedElement>],
) -> Result<Vec<Vec<InducedElement>>> {
    grid.iter()
        .map(|row| row.iter().map(|phi| ctx.apply_aut(sigma, phi)).collect())
        .collect()
}

/// Checks that every automorphism in `gamma` preserves sampled norms at all
/// levels up to `max_level`, within `tol`.
pub fn reasonableness_check(
    ctx: &InducedSpace,
    tables: &CosetTables,
    gamma: &[Automorphism],
    samples: usize,
    max_level: usize,
    tol: f64,
    seed: u64,
) -> Result<VerdictReport> {
    let mut verdict = Verdict::new("reasonableness", seed);
    let mut worst = 0.0f64;
    let mut witness: Option<(usize, u64)> = None;
    for level in 1..=max_level {
        let mut level_worst = 0.0f64;
        for i in 0..samples {
            let index = (level as u64) << 32 | i as u64;
            let mut rng = sample_rng(seed, index);
            let grid = sample_level(ctx, level, &mut rng);
            let base = level_norm(ctx, tables, &grid)?;
            for sigma in gamma {
                let moved = apply_aut_level(ctx, sigma, &grid)?;
                let dev = (level_norm(ctx, tables, &moved)? - base).abs();
                if dev > level_worst {
                    level_worst = dev;
                }
                if dev > worst {
                    worst = dev;
                    witness = Some((level, index));
                }
            }
        }
        verdict.push(
            format!("level {level} worst norm deviation over the automorphism set"),
            level_worst,
            tol,
        );
    }
    if let Some((level, index)) = witness {
        verdict.witness(serde_json::json!({
            "worstDeviation": worst,
            "level": level,
            "sampleIndex": index,
        }));
    }
    Ok(verdict.finish())
}

/// Classification returned by the sampled isometry check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapClass {
    Isometric,
    Contractive,
    Neither,
}

impl MapClass {
    pub fn as_str(self) -> &'static str {
        match self {
            MapClass::Isometric => "isometric",
            MapClass::Contractive => "contractive",
            MapClass::Neither => "neither",
        }
    }
}

/// Compares sampled norms before and after a linear map applied entrywise
/// at each level. Reports the worst deviation from isometry and the worst
/// expansion ratio.
pub fn isometry_check<F>(
    ctx: &InducedSpace,
    tables: &CosetTables,
    f: F,
    samples: usize,
    max_level: usize,
    tol: f64,
    seed: u64,
) -> Result<(VerdictReport, MapClass)>
where
    F: Fn(&InducedElement) -> Result<InducedElement>,
{
    let mut worst_dev = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for level in 1..=max_level {
        for i in 0..samples {
            let index = (level as u64) << 32 | i as u64;
            let mut rng = sample_rng(seed, index);
            let grid = sample_level(ctx, level, &mut rng);
            let base = level_norm(ctx, tables, &grid)?;
            let moved: Vec<Vec<InducedElement>> = grid
                .iter()
                .map(|row| row.iter().map(&f).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            let after = level_norm(ctx, tables, &moved)?;
            worst_dev = worst_dev.max((after - base).abs());
            if base > 1e-12 {
                worst_ratio = worst_ratio.max(after / base);
            }
        }
    }
    let class = if worst_dev <= tol {
        MapClass::Isometric
    } else if worst_ratio <= 1.0 + tol {
        MapClass::Contractive
    } else {
        MapClass::Neither
    };
    let mut verdict = Verdict::new("isometry", seed);
    verdict.push("worst norm deviation", worst_dev, tol);
    verdict.witness(serde_json::json!({
        "classification": class.as_str(),
        "worstRatio": worst_ratio,
    }));
    Ok((verdict.finish(), class))
}
