//! Bond-alternating Heisenberg chains, their ground states, and labelled
//! datasets of ground states across the dimerization transition.

pub mod lanczos;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{EqnnError, Result};
use crate::exec::Exec;
use crate::linalg::{c, CMatrix, CVector, RMatrix};

pub use lanczos::{lowest_eigenpairs, Eigenpairs, LanczosOptions};

/// Open chain `H = J₁ Σ_{i even} S_i·S_{i+1} + J₂ Σ_{i odd} S_i·S_{i+1}`
/// with `S = (X, Y, Z)/2`. Qubit 0 is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeisenbergSpec {
    pub n: usize,
    pub j1: f64,
    pub j2: f64,
}

impl HeisenbergSpec {
    pub fn new(n: usize, j1: f64, j2: f64) -> Result<Self> {
        if n < 2 {
            return Err(EqnnError::Invalid("a chain needs at least two sites".into()));
        }
        if n > 24 {
            return Err(EqnnError::Invalid(format!("{n} sites exceed the statevector limit of 24")));
        }
        if !(j1 > 0.0 && j2 >= 0.0 && j1.is_finite() && j2.is_finite()) {
            return Err(EqnnError::Invalid("couplings need j1 > 0 and j2 >= 0".into()));
        }
        Ok(Self { n, j1, j2 })
    }

    /// Chain with `J₁ = 1`, `J₂ = α`.
    pub fn with_alpha(n: usize, alpha: f64) -> Result<Self> {
        Self::new(n, 1.0, alpha)
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn alpha(&self) -> f64 {
        self.j2 / self.j1
    }

    /// `(bit mask of the two sites, coupling)` per bond.
    fn bonds(&self) -> Vec<(usize, usize, f64)> {
        (0..self.n - 1)
            .map(|i| {
                let a = 1 << (self.n - 1 - i);
                let b = 1 << (self.n - 2 - i);
                (a, b, if i % 2 == 0 { self.j1 } else { self.j2 })
            })
            .collect()
    }

    /// `y = H x` without storing `H`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let bonds = self.bonds();
        for (s, out) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &(a, b, j) in &bonds {
                let same = ((s & a) != 0) == ((s & b) != 0);
                if same {
                    acc += 0.25 * j * x[s];
                } else {
                    acc += -0.25 * j * x[s] + 0.5 * j * x[s ^ a ^ b];
                }
            }
            *out = acc;
        }
    }

    /// `H x` for complex vectors.
    pub fn apply_complex(&self, x: &CVector) -> CVector {
        let re: Vec<f64> = x.iter().map(|z| z.re).collect();
        let im: Vec<f64> = x.iter().map(|z| z.im).collect();
        let mut hr = vec![0.0; x.len()];
        let mut hi = vec![0.0; x.len()];
        self.apply(&re, &mut hr);
        self.apply(&im, &mut hi);
        CVector::from_iterator(x.len(), hr.into_iter().zip(hi).map(|(a, b)| c(a, b)))
    }

    /// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩`.
    pub fn energy(&self, psi: &CVector) -> f64 {
        psi.dotc(&self.apply_complex(psi)).re / psi.norm_squared()
    }

    /// Dense matrix, for small chains.
    pub fn dense(&self) -> RMatrix {
        let d = self.dim();
        let mut m = RMatrix::zeros(d, d);
        let mut e = vec![0.0; d];
        let mut col = vec![0.0; d];
        for j in 0..d {
            e[j] = 1.0;
            self.apply(&e, &mut col);
            m.set_column(j, &nalgebra::DVector::from_column_slice(&col));
            e[j] = 0.0;
        }
        m
    }

    pub fn dense_complex(&self) -> CMatrix {
        self.dense().map(|v| c(v, 0.0))
    }
}

#[derive(Debug, Clone)]
pub struct GroundStateResult {
    /// Lowest eigenvalues, ascending.
    pub energies: Vec<f64>,
    pub states: Vec<CVector>,
    /// Number of energies within `gap_tol` of the minimum.
    pub degeneracy: usize,
    /// `‖H v − E v‖` per pair.
    pub residuals: Vec<f64>,
}

impl GroundStateResult {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    /// Orthonormal basis of the ground space.
    pub fn ground_space(&self) -> &[CVector] {
        &self.states[..self.degeneracy]
    }
}

const GROUND_SEED: u64 = 0x6c61_6e63;

/// Lowest `k` eigenpairs, extended until the ground space is fully resolved
/// (at least one computed level lies above `gap_tol`).
pub fn ground_states(spec: &HeisenbergSpec, k: usize, gap_tol: f64) -> Result<GroundStateResult> {
    if k == 0 {
        return Err(EqnnError::Invalid("k must be at least 1".into()));
    }
    let dim = spec.dim();
    let mut want = k.min(dim);
    loop {
        let opts = LanczosOptions {
            seed: GROUND_SEED,
            ..LanczosOptions::default()
        };
        let pairs = lowest_eigenpairs(|x, y| spec.apply(x, y), dim, want, &opts)?;
        let e0 = pairs.values[0];
        let degeneracy = pairs.values.iter().filter(|&&e| e - e0 <= gap_tol).count();
        if degeneracy < pairs.values.len() || want == dim {
            return Ok(GroundStateResult {
                energies: pairs.values,
                states: pairs
                    .vectors
                    .iter()
                    .map(|v| CVector::from_iterator(dim, v.iter().map(|&x| c(x, 0.0))))
                    .collect(),
                degeneracy,
                residuals: pairs.residuals,
            });
        }
        want = (want + 2).min(dim);
    }
}

/// Trivial phase (`α < 1`) is labelled 1, topological phase 0.
pub fn phase_label(alpha: f64) -> Result<u8> {
    if (alpha - 1.0).abs() < 1e-12 {
        return Err(EqnnError::Invalid("α = 1 is the critical point and has no label".into()));
    }
    Ok(u8::from(alpha < 1.0))
}

/// How a state is picked from a degenerate ground space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegeneratePolicy {
    /// The first Lanczos vector.
    First,
    /// A complex-Gaussian random combination of the ground space.
    RandomInSpace,
}

#[derive(Debug, Clone)]
pub struct DatasetEntry {
    pub alpha: f64,
    pub label: u8,
    pub state: CVector,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub n: usize,
    pub entries: Vec<DatasetEntry>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    alpha: f64,
    label: u8,
    state: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct DatasetJson {
    n: usize,
    entries: Vec<EntryJson>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = DatasetJson {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| EntryJson {
                    alpha: e.alpha,
                    label: e.label,
                    state: e.state.iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("dataset serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let doc: DatasetJson =
            serde_json::from_value(v.clone()).map_err(|e| EqnnError::Invalid(format!("dataset JSON: {e}")))?;
        let dim = 1usize << doc.n;
        let mut entries = Vec::with_capacity(doc.entries.len());
        for e in doc.entries {
            if e.state.len() != dim {
                return Err(EqnnError::DimensionMismatch(format!(
                    "state of length {} for {} qubits",
                    e.state.len(),
                    doc.n
                )));
            }
            if e.label != phase_label(e.alpha)? {
                return Err(EqnnError::Invalid(format!("label {} inconsistent with α = {}", e.label, e.alpha)));
            }
            entries.push(DatasetEntry {
                alpha: e.alpha,
                label: e.label,
                state: CVector::from_iterator(dim, e.state.iter().map(|p| c(p[0], p[1]))),
            });
        }
        Ok(Self { n: doc.n, entries })
    }
}

/// Midpoints of `count` equal cells of `[lo, hi]`.
pub fn alpha_grid(count: usize, range: (f64, f64)) -> Vec<f64> {
    let (lo, hi) = range;
    let step = (hi - lo) / count as f64;
    (0..count).map(|i| lo + (i as f64 + 0.5) * step).collect()
}

fn pick_state(gs: &GroundStateResult, policy: DegeneratePolicy, seed: u64, index: usize) -> CVector {
    let space = gs.ground_space();
    match policy {
        DegeneratePolicy::First => space[0].clone(),
        DegeneratePolicy::RandomInSpace if space.len() == 1 => space[0].clone(),
        DegeneratePolicy::RandomInSpace => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            let mut psi = CVector::zeros(space[0].len());
            for v in space {
                let w = c(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
                psi += v * w;
            }
            let n = psi.norm();
            psi.unscale(n)
        }
    }
}

/// Ground states on an even midpoint grid of `α = J₂/J₁` (with `J₁ = 1`),
/// labelled by [`phase_label`].
pub fn make_dataset(
    n: usize,
    count: usize,
    range: (f64, f64),
    seed: u64,
    policy: DegeneratePolicy,
    exec: Exec,
) -> Result<Dataset> {
    if count < 1 {
        return Err(EqnnError::Invalid("dataset needs at least one point".into()));
    }
    if !(range.0 >= 0.0 && range.1 > range.0) {
        return Err(EqnnError::Invalid("α range must satisfy 0 <= lo < hi".into()));
    }
    let alphas = alpha_grid(count, range);
    if alphas.iter().any(|a| phase_label(*a).is_err()) {
        return Err(EqnnError::Invalid(format!(
            "{count} midpoints on [{}, {}] include the critical point α = 1; change the count or range",
            range.0, range.1
        )));
    }
    let results = exec.map(alphas.len(), |i| -> Result<DatasetEntry> {
        let alpha = alphas[i];
        let spec = HeisenbergSpec::with_alpha(n, alpha)?;
        let gs = ground_states(&spec, 2, 1e-8)?;
        Ok(DatasetEntry {
            alpha,
            label: phase_label(alpha)?,
            state: pick_state(&gs, policy, seed, i),
        })
    });
    let entries = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Dataset { n, entries })
}
