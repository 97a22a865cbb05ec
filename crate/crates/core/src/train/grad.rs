//! Loss gradients by central finite differences or parameter shifts.

use serde::{Deserialize, Serialize};

use super::model::{Model, Op};
use crate::error::Result;
use crate::exec::Exec;
use crate::linalg::CVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum GradMethod {
    FiniteDiff { h: f64 },
    /// Exact shifts for gate angles; pooling parameters fall back to
    /// finite differences with step `h`.
    ParamShift { h: f64 },
}

impl Default for GradMethod {
    fn default() -> Self {
        GradMethod::FiniteDiff { h: 1e-4 }
    }
}

/// `(1/m) Σ (f_i − y_i)²`.
pub fn mse_loss(f: &[f64], y: &[f64]) -> Result<f64> {
    if f.len() != y.len() || f.is_empty() {
        return Err(crate::EqnnError::DimensionMismatch(format!(
            "{} predictions for {} labels",
            f.len(),
            y.len()
        )));
    }
    Ok(f.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / f.len() as f64)
}

pub fn outputs(model: &Model, params: &[f64], states: &[CVector], exec: Exec) -> Result<Vec<f64>> {
    exec.map_slice(states, |s| model.forward(params, s)).into_iter().collect()
}

fn batch_loss(model: &Model, params: &[f64], states: &[CVector], labels: &[f64]) -> Result<f64> {
    let f = states
        .iter()
        .map(|s| model.forward(params, s))
        .collect::<Result<Vec<_>>>()?;
    mse_loss(&f, labels)
}

/// Central differences of the batch loss for the parameters in `which`.
fn finite_diff(
    model: &Model,
    params: &[f64],
    states: &[CVector],
    labels: &[f64],
    which: &[usize],
    h: f64,
    exec: Exec,
) -> Result<Vec<(usize, f64)>> {
    let probes = exec.map(2 * which.len(), |k| {
        let mut p = params.to_vec();
        p[which[k / 2]] += if k % 2 == 0 { h } else { -h };
        batch_loss(model, &p, states, labels)
    });
    let probes = probes.into_iter().collect::<Result<Vec<f64>>>()?;
    let mut out = Vec::with_capacity(which.len());
    for (i, &w) in which.iter().enumerate() {
        let (plus, minus) = (probes[2 * i], probes[2 * i + 1]);
        out.push((w, (plus - minus) / (2.0 * h)));
    }
    Ok(out)
}

/// Gradient of the batch MSE with respect to all parameters.
pub fn loss_gradient(
    model: &Model,
    params: &[f64],
    states: &[CVector],
    labels: &[f64],
    method: GradMethod,
    exec: Exec,
) -> Result<Vec<f64>> {
    let mut grad = vec![0.0; model.n_params];
    match method {
        GradMethod::FiniteDiff { h } => {
            let all: Vec<usize> = (0..model.n_params).collect();
            for (i, g) in finite_diff(model, params, states, labels, &all, h, exec)? {
                grad[i] = g;
            }
        }
        GradMethod::ParamShift { h } => {
            let m = states.len() as f64;
            let f0 = outputs(model, params, states, Exec::Sequential)?;
            // every gate occurrence is shifted separately; shared angles sum
            let shifted: Vec<(usize, usize, f64, f64)> = model
                .ops
                .iter()
                .enumerate()
                .filter_map(|(k, op)| {
                    let p = op.angle_param()?;
                    let (s, scale) = match op {
                        Op::Swap { .. } => (std::f64::consts::FRAC_PI_4, 1.0),
                        _ => (std::f64::consts::FRAC_PI_2, 0.5),
                    };
                    Some((k, p, s, scale))
                })
                .collect();
            let n_states = states.len();
            let evals = exec.map(shifted.len() * 2 * n_states, |idx| {
                let (occ, rest) = (idx / (2 * n_states), idx % (2 * n_states));
                let (sign, si) = (rest / n_states, rest % n_states);
                let (k, _, s, _) = shifted[occ];
                let delta = if sign == 0 { s } else { -s };
                model.forward_shifted(params, &states[si], Some((k, delta)))
            });
            let evals = evals.into_iter().collect::<Result<Vec<f64>>>()?;
            for (occ, &(_, p, _, scale)) in shifted.iter().enumerate() {
                for si in 0..n_states {
                    let plus = evals[occ * 2 * n_states + si];
                    let minus = evals[occ * 2 * n_states + n_states + si];
                    let df = scale * (plus - minus);
                    grad[p] += 2.0 * (f0[si] - labels[si]) * df / m;
                }
            }
            let pool: Vec<usize> = model.pool_groups.iter().flat_map(|&g| g..g + 3).collect();
            for (i, g) in finite_diff(model, params, states, labels, &pool, h, exec)? {
                grad[i] = g;
            }
        }
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::train::model::{ModelSpec, PoolingKind};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_state(n: usize, rng: &mut ChaCha8Rng) -> CVector {
        let v = CVector::from_fn(1 << n, |_, _| c(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng)));
        let nv = v.norm();
        v.unscale(nv)
    }

    #[test]
    fn mse_examples() {
        assert_eq!(mse_loss(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(mse_loss(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert!(mse_loss(&[1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn shift_rule_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for spec in [
            ModelSpec::Eqcnn { n: 6, reps: 2, pooling: PoolingKind::PartialTrace },
            ModelSpec::Hea { n: 6, depth: 1 },
        ] {
            let m = spec.build().unwrap();
            let params: Vec<f64> = (0..m.n_params).map(|_| rng.random_range(-3.0..3.0)).collect();
            let states: Vec<CVector> = (0..2).map(|_| random_state(6, &mut rng)).collect();
            let labels = [1.0, 0.0];
            let fd = loss_gradient(&m, &params, &states, &labels, GradMethod::FiniteDiff { h: 1e-4 }, Exec::Sequential).unwrap();
            let ps = loss_gradient(&m, &params, &states, &labels, GradMethod::ParamShift { h: 1e-4 }, Exec::Parallel).unwrap();
            for (a, b) in fd.iter().zip(&ps) {
                assert!((a - b).abs() < 1e-5, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn constant_model_has_zero_gradient() {
        // a 3-qubit EQCNN acting on |000⟩ only picks up global phases
        let m = ModelSpec::Eqcnn { n: 3, reps: 1, pooling: PoolingKind::PartialTrace }.build().unwrap();
        let mut zero = CVector::zeros(8);
        zero[0] = c(1.0, 0.0);
        let g = loss_gradient(&m, &[0.3, 0.9], &[zero], &[0.0], GradMethod::default(), Exec::Sequential).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-9));
    }
}
