//! Equivariance and invariance residuals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EquivarianceProblem;
use crate::channel::TransferMatrix;
use crate::error::{EqnnError, Result};
use crate::exec::Exec;
use crate::group::adjoint::adjoint_unchecked;
use crate::group::Representation;
use crate::linalg::{identity, CMatrix, CVector, RMatrix};

/// `max_g ‖T A_in(g) − A_out(g) T‖_F` over the generator actions.
pub(crate) fn generator_residual(t: &TransferMatrix, problem: &EquivarianceProblem) -> f64 {
    let (ain, aout) = problem.actions();
    let tr = t.real_matrix();
    let imag = t.matrix.map(|z| z.im);
    ain.iter()
        .zip(&aout)
        .map(|(a, b)| {
            let r = &tr * a - b * &tr;
            let ri = &imag * a - b * &imag;
            (r.norm_squared() + ri.norm_squared()).sqrt()
        })
        .fold(0.0, f64::max)
}

fn group_residual(t: &TransferMatrix, problem: &EquivarianceProblem, rin: &CMatrix, rout: &CMatrix) -> f64 {
    let ain = adjoint_unchecked(rin, &problem.in_basis());
    let aout = adjoint_unchecked(rout, &problem.out_basis());
    (&t.matrix * ain - aout * &t.matrix).norm()
}

/// Sampled group elements as `(R_in(g), R_out(g))` pairs: random generator
/// words for finite groups, Haar samples for Lie groups with a realization.
pub(crate) fn sample_pairs(problem: &EquivarianceProblem, n: usize, seed: u64) -> Result<Vec<(CMatrix, CMatrix)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    if problem.r_in.is_finite() {
        let k = problem.r_in.n_generators();
        for _ in 0..n {
            let len = rng.random_range(1..=8);
            let mut a = identity(problem.in_dim());
            let mut b = identity(problem.out_dim());
            for _ in 0..len {
                let s = rng.random_range(0..k);
                a *= &problem.r_in.generators[s];
                b *= &problem.r_out.generators[s];
            }
            out.push((a, b));
        }
        return Ok(out);
    }
    let (Some(ri), Some(ro)) = (&problem.r_in.realization, &problem.r_out.realization) else {
        return Err(EqnnError::MissingSampler);
    };
    if ri.group != ro.group {
        return Err(EqnnError::Invalid("realizations belong to different groups".into()));
    }
    for _ in 0..n {
        let g = ri.group.sample(&mut rng);
        out.push((ri.eval(&g), ro.eval(&g)));
    }
    Ok(out)
}

/// Worst residual of each element over precomputed real action pairs.
pub(crate) fn residuals_against(elements: &[TransferMatrix], actions: &[(RMatrix, RMatrix)], exec: Exec) -> Vec<f64> {
    exec.map_slice(elements, |t| {
        let tr = t.real_matrix();
        let imag = t.matrix.map(|z| z.im);
        actions
            .iter()
            .map(|(a, b)| {
                let r = &tr * a - b * &tr;
                let ri = &imag * a - b * &imag;
                (r.norm_squared() + ri.norm_squared()).sqrt()
            })
            .fold(0.0, f64::max)
    })
}

/// [`verify_equivariance`] for a whole family, sharing the sampled actions.
pub fn verify_basis(elements: &[TransferMatrix], problem: &EquivarianceProblem, n_samples: usize, seed: u64, exec: Exec) -> Result<Vec<f64>> {
    if elements.iter().any(|t| t.in_dim != problem.in_dim() || t.out_dim != problem.out_dim()) {
        return Err(EqnnError::DimensionMismatch("map does not match the problem dimensions".into()));
    }
    let (ain, aout) = problem.actions();
    let mut actions: Vec<(RMatrix, RMatrix)> = ain.into_iter().zip(aout).collect();
    let pairs = match sample_pairs(problem, n_samples, seed) {
        Ok(p) => p,
        Err(EqnnError::MissingSampler) => Vec::new(),
        Err(e) => return Err(e),
    };
    let (bin, bout) = (problem.in_basis(), problem.out_basis());
    for (a, b) in &pairs {
        let re = |m: CMatrix| m.map(|z| z.re);
        actions.push((re(adjoint_unchecked(a, &bin)), re(adjoint_unchecked(b, &bout))));
    }
    Ok(residuals_against(elements, &actions, exec))
}

/// Worst equivariance residual of `t` over the generators plus `n_samples`
/// sampled group elements (random words or Haar samples). Lie problems
/// without a Haar sampler are checked at the algebra level only.
pub fn verify_equivariance(t: &TransferMatrix, problem: &EquivarianceProblem, n_samples: usize, seed: u64) -> Result<f64> {
    if t.in_dim != problem.in_dim() || t.out_dim != problem.out_dim() {
        return Err(EqnnError::DimensionMismatch("map does not match the problem dimensions".into()));
    }
    let mut worst = generator_residual(t, problem);
    let pairs = match sample_pairs(problem, n_samples, seed) {
        Ok(p) => p,
        Err(EqnnError::MissingSampler) => Vec::new(),
        Err(e) => return Err(e),
    };
    for (a, b) in &pairs {
        worst = worst.max(group_residual(t, problem, a, b));
    }
    Ok(worst)
}

/// `max |h(ψ) − h(R(g)ψ)|` over `n_samples` Haar-random (or random-word)
/// group elements applied to the given states in turn.
pub fn model_invariance<F>(h: F, rep: &Representation, states: &[CVector], n_samples: usize, seed: u64, exec: Exec) -> Result<f64>
where
    F: Fn(&CVector) -> f64 + Sync + Send,
{
    if states.is_empty() {
        return Err(EqnnError::Invalid("no states supplied".into()));
    }
    let problem = EquivarianceProblem::new(rep.clone(), rep.clone())?;
    let pairs = sample_pairs(&problem, n_samples, seed)?;
    let diffs = exec.map(pairs.len(), |i| {
        let psi = &states[i % states.len()];
        let moved = &pairs[i].0 * psi;
        (h(psi) - h(&moved)).abs()
    });
    Ok(diffs.into_iter().fold(0.0, f64::max))
}
