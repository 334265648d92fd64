//! Paths and homotopies in `ℝⁿ`, sampled on a uniform grid and extended
//! piecewise-linearly, with the unitor homotopies `ρ₀`, `λ₀` and the two
//! descriptions of horizontal composition.
//!
//! Grid arguments are kept as integer ratios so that every evaluation which
//! lands on a grid node reads the stored sample exactly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PathError {
    #[error("invalid shape: {0}")]
    Shape(String),
    #[error("not composable: basepoints differ by {distance:e}")]
    NotComposable { distance: f64 },
}

/// A path `z: [0, 1] → ℝⁿ` with `z(0) = 0`, stored at `t = k/N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledPath {
    dim: usize,
    grid: usize,
    samples: Vec<f64>,
}

impl SampledPath {
    pub fn new(dim: usize, grid: usize, samples: Vec<f64>) -> Result<Self, PathError> {
        check_grid(dim, grid)?;
        if samples.len() != (grid + 1) * dim {
            return Err(PathError::Shape(format!("expected {} samples, found {}", (grid + 1) * dim, samples.len())));
        }
        if samples[..dim].iter().any(|&v| v != 0.0) {
            return Err(PathError::Shape("path must start at 0".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(PathError::Shape("non-finite sample".into()));
        }
        Ok(SampledPath { dim, grid, samples })
    }

    pub fn zero(dim: usize, grid: usize) -> Result<Self, PathError> {
        SampledPath::new(dim, grid, vec![0.0; (grid + 1) * dim])
    }

    /// Samples `f(k/N)`; `f(0)` must be 0.
    pub fn from_fn(dim: usize, grid: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self, PathError> {
        let samples = (0..=grid).flat_map(|k| f(k as f64 / grid as f64)).collect();
        SampledPath::new(dim, grid, samples)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn node(&self, k: usize) -> &[f64] {
        &self.samples[k * self.dim..(k + 1) * self.dim]
    }

    /// `z(num/den)` for `0 ≤ num ≤ den`.
    pub fn eval_ratio(&self, num: u64, den: u64) -> Vec<f64> {
        debug_assert!(num <= den && den > 0);
        let scaled = num * self.grid as u64;
        let k = (scaled / den) as usize;
        let rem = scaled % den;
        if rem == 0 {
            return self.node(k).to_vec();
        }
        let w = rem as f64 / den as f64;
        self.node(k).iter().zip(self.node(k + 1)).map(|(a, b)| a + w * (b - a)).collect()
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let pos = t.clamp(0.0, 1.0) * self.grid as f64;
        let k = (pos.floor() as usize).min(self.grid - 1);
        let w = pos - k as f64;
        if w == 0.0 {
            return self.node(k).to_vec();
        }
        self.node(k).iter().zip(self.node(k + 1)).map(|(a, b)| a + w * (b - a)).collect()
    }

    pub fn add(&self, other: &SampledPath) -> Result<SampledPath, PathError> {
        same_shape(self.dim, self.grid, other.dim, other.grid)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(SampledPath { dim: self.dim, grid: self.grid, samples })
    }

    pub fn sub(&self, other: &SampledPath) -> Result<SampledPath, PathError> {
        same_shape(self.dim, self.grid, other.dim, other.grid)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        Ok(SampledPath { dim: self.dim, grid: self.grid, samples })
    }
}

fn check_grid(dim: usize, grid: usize) -> Result<(), PathError> {
    if dim == 0 {
        return Err(PathError::Shape("dimension must be positive".into()));
    }
    if grid == 0 || !grid.is_multiple_of(2) {
        return Err(PathError::Shape(format!("grid size must be even and positive, got {grid}")));
    }
    Ok(())
}

fn same_shape(d1: usize, n1: usize, d2: usize, n2: usize) -> Result<(), PathError> {
    if d1 != d2 || n1 != n2 {
        return Err(PathError::Shape(format!("dimension/grid {d1}/{n1} vs {d2}/{n2}")));
    }
    Ok(())
}

/// A homotopy `y: [0, 1]² → ℝⁿ` stored at `(i/N, j/N)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledHomotopy {
    dim: usize,
    grid: usize,
    samples: Vec<f64>,
}

impl SampledHomotopy {
    pub fn new(dim: usize, grid: usize, samples: Vec<f64>) -> Result<Self, PathError> {
        check_grid(dim, grid)?;
        let m = grid + 1;
        if samples.len() != m * m * dim {
            return Err(PathError::Shape(format!("expected {} samples, found {}", m * m * dim, samples.len())));
        }
        Ok(SampledHomotopy { dim, grid, samples })
    }

    fn tabulate(dim: usize, grid: usize, f: impl Fn(u64, u64) -> Vec<f64>) -> Self {
        let mut samples = Vec::with_capacity((grid + 1) * (grid + 1) * dim);
        for i in 0..=grid as u64 {
            for j in 0..=grid as u64 {
                samples.extend(f(i, j));
            }
        }
        SampledHomotopy { dim, grid, samples }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// `y(i/N, j/N)`
    pub fn at(&self, i: usize, j: usize) -> &[f64] {
        let k = (i * (self.grid + 1) + j) * self.dim;
        &self.samples[k..k + self.dim]
    }

    /// Largest norm among `y(0, t)`, `y(s, 0)`, `y(s, 1)` at grid nodes.
    pub fn boundary_defect(&self) -> f64 {
        let n = self.grid;
        (0..=n)
            .flat_map(|k| [self.at(0, k), self.at(k, 0), self.at(k, n)])
            .map(norm)
            .fold(0.0, f64::max)
    }

    pub fn add(&self, other: &SampledHomotopy) -> Result<SampledHomotopy, PathError> {
        same_shape(self.dim, self.grid, other.dim, other.grid)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(SampledHomotopy { dim: self.dim, grid: self.grid, samples })
    }
}

/// The path `t ↦ z(t) + b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointedPath {
    pub path: SampledPath,
    pub base: Vec<f64>,
}

impl PointedPath {
    pub fn new(path: SampledPath, base: Vec<f64>) -> Result<Self, PathError> {
        if base.len() != path.dim {
            return Err(PathError::Shape("basepoint dimension".into()));
        }
        Ok(PointedPath { path, base })
    }

    /// Endpoint `z(1) + b`.
    pub fn end(&self) -> Vec<f64> {
        add(&d0(&self.path), &self.base)
    }

    /// `z(k/N) + b`
    pub fn node(&self, k: usize) -> Vec<f64> {
        add(self.path.node(k), &self.base)
    }
}

fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `∂₀(z) = z(1)`
pub fn d0(z: &SampledPath) -> Vec<f64> {
    z.node(z.grid).to_vec()
}

/// `∂₁(y)(t) = y(1, t)`
pub fn d1(y: &SampledHomotopy) -> SampledPath {
    let samples = (0..=y.grid).flat_map(|j| y.at(y.grid, j).to_vec()).collect();
    SampledPath { dim: y.dim, grid: y.grid, samples }
}

/// `ρ₀(z)(s, t) = z(t)` if `2t ≤ s`, else `z(t) − z((2t − s)/(2 − s))`.
pub fn rho0(z: &SampledPath) -> SampledHomotopy {
    let n = z.grid as u64;
    SampledHomotopy::tabulate(z.dim, z.grid, |i, j| {
        let zt = z.eval_ratio(j, n);
        if 2 * j <= i {
            zt
        } else {
            sub(&zt, &z.eval_ratio(2 * j - i, 2 * n - i))
        }
    })
}

/// `λ₀(z)(s, t) = z(st/(2 − s)) − z(2t/(2 − s))` if `2t ≤ s`, else
/// `z(st/(2 − s)) − z(s/(2 − s))`.
pub fn lambda0(z: &SampledPath) -> SampledHomotopy {
    let n = z.grid as u64;
    SampledHomotopy::tabulate(z.dim, z.grid, |i, j| {
        let first = z.eval_ratio(i * j, n * (2 * n - i));
        if 2 * j <= i {
            sub(&first, &z.eval_ratio(2 * j, 2 * n - i))
        } else {
            sub(&first, &z.eval_ratio(i, 2 * n - i))
        }
    })
}

fn check_composable(q: &PointedPath, p: &PointedPath, tolerance: f64) -> Result<(), PathError> {
    same_shape(q.path.dim, q.path.grid, p.path.dim, p.path.grid)?;
    let distance = norm(&sub(&q.base, &p.end()));
    if distance > tolerance || distance.is_nan() {
        return Err(PathError::NotComposable { distance });
    }
    Ok(())
}

/// `(z′, b′) ⊗ (z, b) = (z′ − ∂₁ρ₀(z′) + z − ∂₁λ₀(z), b)`, defined when
/// `b′ = z(1) + b` up to `tolerance`.
pub fn tensor(q: &PointedPath, p: &PointedPath, tolerance: f64) -> Result<PointedPath, PathError> {
    check_composable(q, p, tolerance)?;
    let left = q.path.sub(&d1(&rho0(&q.path)))?;
    let right = p.path.sub(&d1(&lambda0(&p.path)))?;
    Ok(PointedPath { path: left.add(&right)?, base: p.base.clone() })
}

/// The usual concatenation: `z(2t) + b` for `2t ≤ 1`, else
/// `z′(2t − 1) + z(1) + b`.
pub fn concat(q: &PointedPath, p: &PointedPath, tolerance: f64) -> Result<PointedPath, PathError> {
    check_composable(q, p, tolerance)?;
    let n = p.path.grid as u64;
    let end = d0(&p.path);
    let samples = (0..=n)
        .flat_map(|j| {
            if 2 * j <= n {
                p.path.eval_ratio(2 * j, n)
            } else {
                add(&q.path.eval_ratio(2 * j - n, n), &end)
            }
        })
        .collect();
    let path = SampledPath { dim: p.path.dim, grid: p.path.grid, samples };
    Ok(PointedPath { path, base: p.base.clone() })
}

#[derive(Debug, Clone, Serialize)]
pub struct PathSuiteConfig {
    pub dim: usize,
    pub grid: usize,
    pub paths: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for PathSuiteConfig {
    fn default() -> Self {
        PathSuiteConfig { dim: 3, grid: 64, paths: 100, seed: 0, tolerance: 1e-12 }
    }
}

/// Maxima over all paths and grid nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathReport {
    pub paths: usize,
    pub tensor_concat: f64,
    pub rho_additivity: f64,
    pub lambda_additivity: f64,
    pub boundary: f64,
    /// `|y(1, 1)|` over every produced homotopy; expected to be exactly 0.
    pub d0_d1: f64,
    pub tolerance: f64,
}

impl PathReport {
    pub fn passed(&self) -> bool {
        self.tensor_concat <= self.tolerance
            && self.rho_additivity <= self.tolerance
            && self.lambda_additivity <= self.tolerance
            && self.boundary <= self.tolerance
            && self.d0_d1 == 0.0
    }
}

/// `count` piecewise-linear paths with vertices uniform in `[-1, 1]ⁿ`.
pub fn random_paths(dim: usize, grid: usize, count: usize, seed: u64) -> Result<Vec<SampledPath>, PathError> {
    check_grid(dim, grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut samples = vec![0.0; dim];
            samples.extend((0..grid * dim).map(|_| rng.gen_range(-1.0..=1.0)));
            SampledPath::new(dim, grid, samples)
        })
        .collect()
}

fn max_diff(a: &[f64], b: &[f64], dim: usize) -> f64 {
    a.chunks(dim).zip(b.chunks(dim)).map(|(x, y)| norm(&sub(x, y))).fold(0.0, f64::max)
}

/// Path `k` is composed after path `k − 1` (cyclically) and summed with it
/// for the additivity checks. Basepoints are drawn from the same seed.
pub fn verify_path_axioms(config: &PathSuiteConfig) -> Result<PathReport, PathError> {
    let paths = random_paths(config.dim, config.grid, config.paths, config.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_ba5e);
    let bases: Vec<Vec<f64>> =
        (0..paths.len()).map(|_| (0..config.dim).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect();
    let count = paths.len();
    let per: Vec<[f64; 5]> = (0..count)
        .into_par_iter()
        .map(|k| -> Result<[f64; 5], PathError> {
            let z = &paths[k];
            let z1 = &paths[(k + 1) % count];
            let p = PointedPath::new(z.clone(), bases[k].clone())?;
            let q = PointedPath::new(z1.clone(), p.end())?;
            let tc = max_diff(tensor(&q, &p, 0.0)?.path.samples(), concat(&q, &p, 0.0)?.path.samples(), z.dim);
            let (r, l) = (rho0(z), lambda0(z));
            let sum = z.add(z1)?;
            let ra = max_diff(rho0(&sum).samples(), r.add(&rho0(z1))?.samples(), z.dim);
            let la = max_diff(lambda0(&sum).samples(), l.add(&lambda0(z1))?.samples(), z.dim);
            let boundary = r.boundary_defect().max(l.boundary_defect());
            let dd = norm(&d0(&d1(&r))).max(norm(&d0(&d1(&l))));
            Ok([tc, ra, la, boundary, dd])
        })
        .collect::<Result<_, _>>()?;
    let max = |i: usize| per.iter().map(|v| v[i]).fold(0.0, f64::max);
    Ok(PathReport {
        paths: count,
        tensor_concat: max(0),
        rho_additivity: max(1),
        lambda_additivity: max(2),
        boundary: max(3),
        d0_d1: max(4),
        tolerance: config.tolerance,
    })
}
