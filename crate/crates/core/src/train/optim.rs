//! ADAM and its projected variant for pooling parameters.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::su2::{project_to_feasible, PoolParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            lr: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    pub config: AdamConfig,
    m: Vec<f64>,
    v: Vec<f64>,
    t: u32,
}

impl Adam {
    pub fn new(config: AdamConfig, n: usize) -> Self {
        Self {
            config,
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }

    /// One bias-corrected ADAM update, in place.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) {
        let AdamConfig { lr, beta1, beta2, eps } = self.config;
        self.t += 1;
        let c1 = 1.0 - beta1.powi(self.t as i32);
        let c2 = 1.0 - beta2.powi(self.t as i32);
        for i in 0..params.len() {
            self.m[i] = beta1 * self.m[i] + (1.0 - beta1) * grads[i];
            self.v[i] = beta2 * self.v[i] + (1.0 - beta2) * grads[i] * grads[i];
            let mh = self.m[i] / c1;
            let vh = self.v[i] / c2;
            params[i] -= lr * mh / (vh.sqrt() + eps);
        }
    }

    /// ADAM update followed by projection of every `(x, y, z)` triple
    /// starting at the indices in `groups` onto the CPTP region.
    pub fn projected_step(&mut self, params: &mut [f64], grads: &[f64], groups: &[usize]) -> Result<()> {
        self.step(params, grads);
        for &g in groups {
            let p = project_to_feasible(PoolParams::new(params[g], params[g + 1], params[g + 2]))?;
            params[g..g + 3].copy_from_slice(&p.to_array());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::feasible_contains;

    #[test]
    fn zero_gradient_is_a_fixed_point() {
        let mut a = Adam::new(AdamConfig::default(), 2);
        let mut p = vec![0.3, -1.0];
        a.step(&mut p, &[0.0, 0.0]);
        assert_eq!(p, vec![0.3, -1.0]);
    }

    #[test]
    fn quadratic_descends() {
        let mut a = Adam::new(AdamConfig::default(), 1);
        let mut p = vec![2.0];
        for _ in 0..200 {
            let g = 2.0 * p[0];
            a.step(&mut p, &[g]);
        }
        assert!(p[0].abs() < 0.1);
    }

    #[test]
    fn projected_steps_stay_feasible() {
        let mut a = Adam::new(AdamConfig { lr: 0.3, ..AdamConfig::default() }, 3);
        let mut p = vec![0.0, 1.0, 0.0];
        for k in 0..100 {
            let g = [(k as f64).sin(), -1.0, -0.7];
            a.projected_step(&mut p, &g, &[0]).unwrap();
            assert!(feasible_contains(PoolParams::new(p[0], p[1], p[2])));
        }
        let mut q = vec![0.0, 1.0, 1.0];
        let mut b = Adam::new(AdamConfig { lr: 0.0, ..AdamConfig::default() }, 3);
        b.projected_step(&mut q, &[0.0; 3], &[0]).unwrap();
        assert!((q[1] + q[2] - 1.0).abs() < 1e-9);
    }
}
