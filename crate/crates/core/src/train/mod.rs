//! Training SU(2)-equivariant and baseline QCNN classifiers on spin-chain
//! ground states.
//!
//! The classifier output is `f = (Tr[φ_θ(ρ) SWAP] + 1)/2` on the last two
//! qubits; a state is predicted to be in the trivial phase when `f > τ`.

pub mod grad;
pub mod model;
pub mod optim;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{EqnnError, Result};
use crate::exec::Exec;
use crate::linalg::CVector;
use crate::spin::Dataset;

pub use grad::{loss_gradient, mse_loss, outputs, GradMethod};
pub use model::{Model, ModelSpec, Op, PoolingKind};
pub use optim::{Adam, AdamConfig};

/// Trivial phase (1) iff `f > τ`; ties go to the topological phase (0).
pub fn predict(f: f64, tau: f64) -> u8 {
    u8::from(f > tau)
}

/// Average of the outputs at the training points nearest to `α = 1` from
/// either side; `τ` is returned unchanged when one side is empty.
pub fn threshold_update(points: &[(f64, f64)], tau: f64) -> f64 {
    let below = points
        .iter()
        .filter(|(a, _)| *a < 1.0)
        .max_by(|x, y| x.0.total_cmp(&y.0));
    let above = points
        .iter()
        .filter(|(a, _)| *a > 1.0)
        .min_by(|x, y| x.0.total_cmp(&y.0));
    match (below, above) {
        (Some(b), Some(a)) => 0.5 * (a.1 + b.1),
        _ => tau,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    pub tau0: f64,
    pub grad: GradMethod,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 750,
            batch_size: 2,
            adam: AdamConfig::default(),
            tau0: 0.5,
            grad: GradMethod::default(),
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.adam.lr.is_nan() || self.adam.lr <= 0.0 || self.batch_size == 0 {
            return Err(EqnnError::Invalid("training needs lr > 0 and batch_size >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Training-set MSE before any update.
    pub initial_loss: f64,
    /// Training-set MSE after each epoch.
    pub loss: Vec<f64>,
    pub train_accuracy: Vec<f64>,
    pub tau: Vec<f64>,
}

/// Parameters and threshold of a trained model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub spec: ModelSpec,
    pub params: Vec<f64>,
    pub tau: f64,
}

impl TrainedModel {
    pub fn model(&self) -> Result<Model> {
        let m = self.spec.build()?;
        if m.n_params != self.params.len() {
            return Err(EqnnError::DimensionMismatch(format!(
                "{} parameters stored for a model with {}",
                self.params.len(),
                m.n_params
            )));
        }
        Ok(m)
    }
}

/// Random gate angles in `[−π, π)`; pooling triples start at the partial trace.
pub fn init_params(model: &Model, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p: Vec<f64> = (0..model.n_params)
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect();
    for &g in &model.pool_groups {
        p[g..g + 3].copy_from_slice(&[0.0, 1.0, 0.0]);
    }
    p
}

fn split(data: &Dataset) -> (Vec<CVector>, Vec<f64>, Vec<f64>) {
    let states = data.entries.iter().map(|e| e.state.clone()).collect();
    let labels = data.entries.iter().map(|e| f64::from(e.label)).collect();
    let alphas = data.entries.iter().map(|e| e.alpha).collect();
    (states, labels, alphas)
}

fn accuracy(f: &[f64], labels: &[f64], tau: f64) -> f64 {
    let hits = f
        .iter()
        .zip(labels)
        .filter(|(f, y)| f64::from(predict(**f, tau)) == **y)
        .count();
    hits as f64 / f.len().max(1) as f64
}

/// Mini-batch ADAM on the MSE loss, with the threshold re-estimated after
/// every epoch. Pooling parameters are projected back onto the CPTP region
/// after each step.
pub fn train(model: &Model, data: &Dataset, config: &TrainConfig, exec: Exec) -> Result<(TrainedModel, Metrics)> {
    config.validate()?;
    if data.is_empty() {
        return Err(EqnnError::Invalid("empty training set".into()));
    }
    if data.n != model.n {
        return Err(EqnnError::DimensionMismatch(format!(
            "{}-qubit data for a {}-qubit model",
            data.n, model.n
        )));
    }
    let (states, labels, alphas) = split(data);
    let mut params = init_params(model, config.seed);
    let mut adam = Adam::new(config.adam, model.n_params);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x7368_7566);
    let mut tau = config.tau0;
    let f0 = outputs(model, &params, &states, exec)?;
    let mut metrics = Metrics {
        initial_loss: mse_loss(&f0, &labels)?,
        loss: Vec::with_capacity(config.epochs),
        train_accuracy: Vec::with_capacity(config.epochs),
        tau: Vec::with_capacity(config.epochs),
    };
    let mut order: Vec<usize> = (0..states.len()).collect();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(config.batch_size) {
            let bs: Vec<CVector> = batch.iter().map(|&i| states[i].clone()).collect();
            let by: Vec<f64> = batch.iter().map(|&i| labels[i]).collect();
            let g = loss_gradient(model, &params, &bs, &by, config.grad, exec)?;
            adam.projected_step(&mut params, &g, &model.pool_groups)?;
        }
        let f = outputs(model, &params, &states, exec)?;
        let pts: Vec<(f64, f64)> = alphas.iter().copied().zip(f.iter().copied()).collect();
        tau = threshold_update(&pts, tau);
        metrics.loss.push(mse_loss(&f, &labels)?);
        metrics.train_accuracy.push(accuracy(&f, &labels, tau));
        metrics.tau.push(tau);
    }
    Ok((
        TrainedModel {
            spec: model.spec,
            params,
            tau,
        },
        metrics,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub alpha: f64,
    pub f: f64,
    pub predicted: u8,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub accuracy: f64,
    pub threshold: f64,
    pub points: Vec<PhasePoint>,
}

/// Predicts every entry of `data` and scores the predictions.
pub fn evaluate(trained: &TrainedModel, data: &Dataset, exec: Exec) -> Result<Evaluation> {
    let model = trained.model()?;
    let (states, labels, alphas) = split(data);
    let f = outputs(&model, &trained.params, &states, exec)?;
    let points = alphas
        .iter()
        .zip(&f)
        .zip(&data.entries)
        .map(|((&alpha, &f), e)| PhasePoint {
            alpha,
            f,
            predicted: predict(f, trained.tau),
            label: e.label,
        })
        .collect();
    Ok(Evaluation {
        accuracy: accuracy(&f, &labels, trained.tau),
        threshold: trained.tau,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::spin::DatasetEntry;

    #[test]
    fn prediction_convention() {
        assert_eq!(predict(0.9, 0.5), 1);
        assert_eq!(predict(0.1, 0.5), 0);
        assert_eq!(predict(0.5, 0.5), 0);
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold_update(&[(0.75, 0.8), (1.25, 0.2)], 0.4), 0.5);
        let t = threshold_update(&[(0.25, 0.1), (0.75, 0.9), (1.25, 0.3), (1.75, 0.0)], 0.5);
        assert!((t - 0.6).abs() < 1e-15);
        assert_eq!(threshold_update(&[(0.25, 0.9), (0.75, 0.3)], 0.42), 0.42);
    }

    #[test]
    fn identical_inputs_fit_quickly() {
        let spec = ModelSpec::Eqcnn { n: 4, reps: 1, pooling: PoolingKind::PartialTrace };
        let model = spec.build().unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // singlet on qubits (0, 2), |0⟩ on (1, 3): the SWAP readout depends on θ
        let mut psi = CVector::zeros(16);
        psi[0b1000] = c(h, 0.0);
        psi[0b0010] = c(-h, 0.0);
        let entry = DatasetEntry { alpha: 0.5, label: 1, state: psi };
        let data = Dataset { n: 4, entries: vec![entry.clone(), entry] };
        let cfg = TrainConfig { epochs: 60, seed: 3, ..TrainConfig::default() };
        let (_, m) = train(&model, &data, &cfg, Exec::Sequential).unwrap();
        assert!(m.loss.last().unwrap() < &1e-3, "{:?}", m.loss.last());
        let cfg2 = TrainConfig { epochs: 60, seed: 3, ..TrainConfig::default() };
        let (_, m2) = train(&model, &data, &cfg2, Exec::Parallel).unwrap();
        assert_eq!(m, m2);
    }
}
