//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use eqnn::channel::{ChoiOperator, KrausSet, TransferMatrix};
use eqnn::group::Representation;
use eqnn::linalg::{c, hermitian_eig_unchecked, identity, kron, min_eigenvalue, CMatrix, CVector, RMatrix};
use eqnn::su2::{pool_channel, PoolParams};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn gauss<R: Rng>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| c(gauss(rng), gauss(rng)))
}

pub fn random_state<R: Rng>(d: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(d, |_, _| c(gauss(rng), gauss(rng)));
    let n = v.norm();
    v.unscale(n)
}

pub fn random_density<R: Rng>(d: usize, rng: &mut R) -> CMatrix {
    let g = random_matrix(d, d, rng);
    let rho = &g * g.adjoint();
    let t = eqnn::linalg::trace(&rho);
    rho / t
}

/// Random real transfer matrix (Hermiticity preserving map) of unit norm.
pub fn random_transfer<R: Rng>(din: usize, dout: usize, rng: &mut R) -> TransferMatrix {
    let v: Vec<f64> = (0..din * din * dout * dout).map(|_| gauss(rng)).collect();
    let t = TransferMatrix::from_real_vec(&v, din, dout).unwrap();
    let n = t.matrix.norm();
    t.scale(1.0 / n)
}

/// `M^{-1/2}` of a positive definite matrix.
fn inv_sqrt(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eig_unchecked(m);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(vals.len(), vals.iter().map(|&l| c(1.0 / l.sqrt(), 0.0))));
    &vecs * d * vecs.adjoint()
}

/// Random CPTP map read off a random isometry, with `rank` Kraus operators
/// (raised to `⌈d_in / d_out⌉` when an isometry needs more).
pub fn random_kraus<R: Rng>(din: usize, dout: usize, rank: usize, rng: &mut R) -> KrausSet {
    let rank = rank.max(din.div_ceil(dout));
    let g = random_matrix(rank * dout, din, rng);
    let v = &g * inv_sqrt(&(g.adjoint() * &g));
    let ops = (0..rank).map(|k| v.rows(k * dout, dout).into_owned()).collect();
    KrausSet::new(ops).unwrap()
}

/// Channel output computed straight from the Kraus operators.
pub fn kraus_apply(k: &KrausSet, rho: &CMatrix) -> CMatrix {
    k.operators.iter().map(|op| op * rho * op.adjoint()).sum()
}

/// Commutant dimension of the group generated by `mats`, as the nullspace of
/// the stacked `I ⊗ M − Mᵀ ⊗ I` (column stacking), counted by SVD.
pub fn commutant_dim_oracle(mats: &[CMatrix]) -> usize {
    let d = mats[0].nrows();
    let mut stacked = CMatrix::zeros(mats.len() * d * d, d * d);
    for (g, m) in mats.iter().enumerate() {
        let block = kron(&identity(d), m) - kron(&m.transpose(), &identity(d));
        stacked.view_mut((g * d * d, 0), (d * d, d * d)).copy_from(&block);
    }
    let s = stacked.svd(false, false).singular_values;
    let smax = s.max().max(1.0);
    d * d - s.iter().filter(|&&x| x > 1e-9 * smax).count()
}

/// Matrices to feed [`commutant_dim_oracle`]: the generators of a finite
/// representation, or Haar-sampled images for a Lie representation.
pub fn rep_samples(rep: &Representation, rng: &mut ChaCha8Rng) -> Vec<CMatrix> {
    match &rep.realization {
        Some(real) if !rep.is_finite() => (0..6).map(|_| real.eval(&real.group.sample(rng))).collect(),
        _ => rep.generators.clone(),
    }
}

/// Net parameters of a `d_in → d_out` CPTP map with no symmetry: real
/// dimension of Hermitian Choi operators minus the rank of `J ↦ Tr_out J`,
/// built entry by entry.
pub fn brute_force_net(din: usize, dout: usize) -> usize {
    let n = din * dout;
    // Real coordinates of a Hermitian n×n matrix: diagonal, then Re and Im
    // of the strict upper triangle.
    let mut coords = Vec::new();
    for i in 0..n {
        coords.push((i, i, false));
    }
    for i in 0..n {
        for j in i + 1..n {
            coords.push((i, j, false));
            coords.push((i, j, true));
        }
    }
    let mut m = RMatrix::zeros(2 * din * din, coords.len());
    for (col, &(i, j, imag)) in coords.iter().enumerate() {
        let mut h = CMatrix::zeros(n, n);
        if i == j {
            h[(i, i)] = c(1.0, 0.0);
        } else if imag {
            h[(i, j)] = c(0.0, 1.0);
            h[(j, i)] = c(0.0, -1.0);
        } else {
            h[(i, j)] = c(1.0, 0.0);
            h[(j, i)] = c(1.0, 0.0);
        }
        // Choi ordering in ⊗ out: trace the output index.
        for a in 0..din {
            for b in 0..din {
                let mut z = c(0.0, 0.0);
                for o in 0..dout {
                    z += h[(a * dout + o, b * dout + o)];
                }
                m[(a * din + b, col)] = z.re;
                m[(din * din + a * din + b, col)] = z.im;
            }
        }
    }
    let s = m.svd(false, false).singular_values;
    coords.len() - s.iter().filter(|&&x| x > 1e-9).count()
}

/// Min-eigenvalue verdict for the pooling family.
pub fn choi_feasible(p: PoolParams, threshold: f64) -> bool {
    min_eigenvalue(&pool_channel(p).matrix) >= threshold
}

/// Boundary surfaces of the pooling region over the disk `x² + v² ≤ 1`,
/// with `u = y + z` and `v = y − z`: the plane `u = 1` and the paraboloid
/// `u = (3(x² + v²) − 1)/2`.
fn surface_point(x: f64, v: f64, top: bool) -> PoolParams {
    let u = if top { 1.0 } else { 1.5 * (x * x + v * v) - 0.5 };
    PoolParams::new(x, 0.5 * (u + v), 0.5 * (u - v))
}

fn clamp_disk(x: f64, v: f64) -> (f64, f64) {
    let r = (x * x + v * v).sqrt();
    if r > 1.0 {
        (x / r, v / r)
    } else {
        (x, v)
    }
}

/// Nearest boundary point by a `step` grid over both surfaces, refined by a
/// shrinking compass search.
pub fn grid_projection(p: PoolParams, step: f64) -> PoolParams {
    let n = (1.0 / step).round() as i64;
    let mut best: Option<(f64, f64, f64, bool)> = None;
    for top in [true, false] {
        for i in -n..=n {
            let x = i as f64 * step;
            for j in -n..=n {
                let v = j as f64 * step;
                if x * x + v * v > 1.0 {
                    continue;
                }
                let d = p.distance(surface_point(x, v, top));
                if best.is_none_or(|b| d < b.0) {
                    best = Some((d, x, v, top));
                }
            }
        }
    }
    let (mut d, mut x, mut v, top) = best.expect("grid is non-empty");
    let mut h = step;
    while h > 1e-12 {
        let mut moved = false;
        for (dx, dv) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
            let (nx, nv) = clamp_disk(x + dx, v + dv);
            let nd = p.distance(surface_point(nx, nv, top));
            if nd < d {
                (d, x, v, moved) = (nd, nx, nv, true);
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    surface_point(x, v, top)
}

pub fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub fn choi_of(t: &TransferMatrix) -> ChoiOperator {
    t.to_choi()
}
