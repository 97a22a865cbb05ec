//! Group averaging `T_G[φ] = avg_g Ad_{R_out(g)} ∘ φ ∘ Ad_{R_in(g)}^†`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::nullspace::constraint_real;
use super::{tagged_basis, EquivarianceProblem, EquivariantBasis, Provenance};
use crate::channel::{ChoiOperator, TransferMatrix};
use crate::error::{EqnnError, Result};
use crate::exec::Exec;
use crate::group::adjoint::adjoint_unchecked;
use crate::group::{commutant_basis, dual_rep, enumerate_joint, tensor_product};
use crate::linalg::{c, hermitian_eig_unchecked, real_orthonormal_span, hs_inner, real_nullspace, svd, CMatrix, CVector, OperatorBasis, RMatrix, NULLSPACE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwirlMode {
    /// Average over every element of an enumerable finite group.
    FiniteExact,
    /// Monte Carlo average over Haar (or uniform finite) samples.
    HaarMc,
    /// Repeated `φ ← (φ + Ad_g ∘ φ ∘ Ad_g^†) / 2` with fresh random `g`.
    Recursive,
    /// Orthogonal projection of the Choi operator onto the commutant of
    /// `R_in* ⊗ R_out` via its Gram system.
    Weingarten,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwirlConfig {
    pub mode: TwirlMode,
    /// Sample count (MC) or iteration count (recursive).
    pub samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl TwirlConfig {
    pub fn exact() -> Self {
        Self {
            mode: TwirlMode::FiniteExact,
            samples: 1,
            seed: 0,
            exec: Exec::default(),
        }
    }

    pub fn haar(samples: usize, seed: u64) -> Self {
        Self {
            mode: TwirlMode::HaarMc,
            samples,
            seed,
            exec: Exec::default(),
        }
    }

    pub fn recursive(iterations: usize, seed: u64) -> Self {
        Self {
            mode: TwirlMode::Recursive,
            samples: iterations,
            seed,
            exec: Exec::default(),
        }
    }

    pub fn weingarten() -> Self {
        Self {
            mode: TwirlMode::Weingarten,
            samples: 1,
            seed: 0,
            exec: Exec::default(),
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

#[derive(Debug, Clone)]
pub struct TwirlResult {
    pub transfer: TransferMatrix,
    /// Jackknife standard error (Frobenius norm) of Monte Carlo estimates.
    pub std_error: Option<f64>,
}

/// Adjoint actions `(A_in(g), A_out(g))` of every element of a finite group.
fn finite_actions(problem: &EquivarianceProblem, exec: Exec) -> Result<Vec<(CMatrix, CMatrix)>> {
    if !problem.r_in.is_finite() {
        return Err(EqnnError::Invalid("finite-exact twirl needs a finite group".into()));
    }
    let elems = enumerate_joint(&[&problem.r_in, &problem.r_out], problem.group.enumeration_bound())?;
    let bin = problem.in_basis();
    let bout = problem.out_basis();
    Ok(exec.map_slice(&elems, |(_, mats)| {
        (adjoint_unchecked(&mats[0], &bin), adjoint_unchecked(&mats[1], &bout))
    }))
}

fn sample_element(
    problem: &EquivarianceProblem,
    finite: Option<&[(Vec<usize>, Vec<CMatrix>)]>,
    rng: &mut ChaCha8Rng,
) -> Result<(CMatrix, CMatrix)> {
    if let Some(elems) = finite {
        let (_, mats) = &elems[rng.random_range(0..elems.len())];
        return Ok((mats[0].clone(), mats[1].clone()));
    }
    let (Some(ri), Some(ro)) = (&problem.r_in.realization, &problem.r_out.realization) else {
        return Err(EqnnError::MissingSampler);
    };
    if ri.group != ro.group {
        return Err(EqnnError::MissingSampler);
    }
    let g = ri.group.sample(rng);
    Ok((ri.eval(&g), ro.eval(&g)))
}

fn conjugated(t: &CMatrix, ain: &CMatrix, aout: &CMatrix) -> CMatrix {
    aout * t * ain.adjoint()
}

/// Twirls `φ` according to `config`.
pub fn twirl(phi: &TransferMatrix, problem: &EquivarianceProblem, config: &TwirlConfig) -> Result<TwirlResult> {
    if phi.in_dim != problem.in_dim() || phi.out_dim != problem.out_dim() {
        return Err(EqnnError::DimensionMismatch("map does not match the problem dimensions".into()));
    }
    if config.samples == 0 {
        return Err(EqnnError::Invalid("twirl needs at least one sample".into()));
    }
    let (din, dout) = (phi.in_dim, phi.out_dim);
    match config.mode {
        TwirlMode::FiniteExact => {
            let acts = finite_actions(problem, config.exec)?;
            let terms = config.exec.map_slice(&acts, |(a, b)| conjugated(&phi.matrix, a, b));
            let mut sum = CMatrix::zeros(phi.matrix.nrows(), phi.matrix.ncols());
            for t in &terms {
                sum += t;
            }
            let n = terms.len() as f64;
            Ok(TwirlResult {
                transfer: TransferMatrix::new(sum.unscale(n), din, dout)?,
                std_error: None,
            })
        }
        TwirlMode::HaarMc => haar_mc(phi, problem, config),
        TwirlMode::Recursive => {
            let finite = if problem.r_in.is_finite() {
                Some(enumerate_joint(&[&problem.r_in, &problem.r_out], problem.group.enumeration_bound())?)
            } else {
                None
            };
            let bin = problem.in_basis();
            let bout = problem.out_basis();
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            let mut t = phi.matrix.clone();
            for _ in 0..config.samples {
                let (ri, ro) = sample_element(problem, finite.as_deref(), &mut rng)?;
                let ain = adjoint_unchecked(&ri, &bin);
                let aout = adjoint_unchecked(&ro, &bout);
                t = (&t + conjugated(&t, &ain, &aout)).scale(0.5);
            }
            Ok(TwirlResult {
                transfer: TransferMatrix::new(t, din, dout)?,
                std_error: None,
            })
        }
        TwirlMode::Weingarten => {
            let rc = tensor_product(&dual_rep(&problem.r_in), &problem.r_out)?;
            let comm = commutant_basis(&rc, None)?;
            let j = phi.to_choi();
            let jt = twirl_operator_weingarten(&j.matrix, &comm)?;
            Ok(TwirlResult {
                transfer: ChoiOperator::new(jt, din, dout)?.to_transfer(),
                std_error: None,
            })
        }
    }
}

const MC_CHUNK: usize = 256;

fn haar_mc(phi: &TransferMatrix, problem: &EquivarianceProblem, config: &TwirlConfig) -> Result<TwirlResult> {
    let finite = if problem.r_in.is_finite() {
        Some(enumerate_joint(&[&problem.r_in, &problem.r_out], problem.group.enumeration_bound())?)
    } else {
        None
    };
    let bin = problem.in_basis();
    let bout = problem.out_basis();
    let n = config.samples;
    let chunks = n.div_ceil(MC_CHUNK);
    let shape = phi.matrix.shape();
    // each sample draws from its own stream so results do not depend on scheduling
    let partial = config.exec.map(chunks, |c| -> Result<(CMatrix, f64)> {
        let mut sum = CMatrix::zeros(shape.0, shape.1);
        let mut sq = 0.0;
        for i in c * MC_CHUNK..((c + 1) * MC_CHUNK).min(n) {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(i as u64);
            let (ri, ro) = sample_element(problem, finite.as_deref(), &mut rng)?;
            let term = conjugated(&phi.matrix, &adjoint_unchecked(&ri, &bin), &adjoint_unchecked(&ro, &bout));
            sq += term.norm_squared();
            sum += term;
        }
        Ok((sum, sq))
    });
    let mut sum = CMatrix::zeros(shape.0, shape.1);
    let mut sq = 0.0;
    for p in partial {
        let (s, q) = p?;
        sum += s;
        sq += q;
    }
    let nf = n as f64;
    let mean = sum.unscale(nf);
    let std_error = if n > 1 {
        let var = ((sq - nf * mean.norm_squared()) / (nf - 1.0)).max(0.0);
        Some((var / nf).sqrt())
    } else {
        None
    };
    Ok(TwirlResult {
        transfer: TransferMatrix::new(mean, phi.in_dim, phi.out_dim)?,
        std_error,
    })
}

/// `‖φ − T_G[φ]‖_F` on transfer matrices.
pub fn antisymmetric_norm(phi: &TransferMatrix, problem: &EquivarianceProblem, config: &TwirlConfig) -> Result<f64> {
    let tw = twirl(phi, problem, config)?;
    Ok((&phi.matrix - tw.transfer.matrix).norm())
}

/// Projection of `x` onto the span of `commutant`: `Σ c_i P_i` with
/// `A c = b`, `A_ij = Tr[P_i^† P_j]`, `b_i = Tr[P_i^† x]`.
pub fn twirl_operator_weingarten(x: &CMatrix, commutant: &OperatorBasis) -> Result<CMatrix> {
    let k = commutant.len();
    let p = commutant.elements();
    let a = CMatrix::from_fn(k, k, |i, j| hs_inner(&p[i], &p[j]));
    let s = svd(&a).s;
    let (smax, smin) = (s.first().copied().unwrap_or(0.0), s.last().copied().unwrap_or(0.0));
    if k == 0 || smin <= 1e-12 * smax.max(1e-300) {
        return Err(EqnnError::SingularGram(smin));
    }
    let b = CVector::from_iterator(k, p.iter().map(|pi| hs_inner(pi, x)));
    let coeffs = a.lu().solve(&b).ok_or(EqnnError::SingularGram(smin))?;
    Ok(commutant.reconstruct(&coeffs))
}

/// The twirl as a matrix acting on vectorized transfer matrices.
///
/// For finite groups this is the group average of `A_in(g)^{-T} ⊗ A_out(g)`;
/// for Lie groups it is the orthogonal projector onto the joint nullspace of
/// the algebra constraints, which is what the Haar average converges to.
pub fn twirl_superoperator(problem: &EquivarianceProblem, exec: Exec) -> Result<RMatrix> {
    let n = problem.vec_len();
    if problem.r_in.is_finite() {
        let acts = finite_actions(problem, exec)?;
        let terms = exec.map_slice(&acts, |(a, b)| {
            let ar = a.map(|z| z.re);
            let br = b.map(|z| z.re);
            ar.kronecker(&br)
        });
        let mut sum = RMatrix::zeros(n, n);
        for t in &terms {
            sum += t;
        }
        Ok(sum / terms.len() as f64)
    } else {
        let (ain, aout) = problem.actions();
        let mut stacked = RMatrix::zeros(ain.len() * n, n);
        for (g, (a, b)) in ain.iter().zip(&aout).enumerate() {
            stacked.view_mut((g * n, 0), (n, n)).copy_from(&constraint_real(a, b));
        }
        let null = real_nullspace(&stacked, NULLSPACE_TOL);
        Ok(&null * null.transpose())
    }
}

/// Largest eigenvalue deviation of a Hermitian matrix from `{0, 1}`.
pub fn projector_defect(p: &RMatrix) -> f64 {
    let (vals, _) = hermitian_eig_unchecked(&crate::linalg::to_complex(p));
    vals.iter().map(|v| v.abs().min((v - 1.0).abs())).fold(0.0, f64::max)
}

/// Trace-preserving Pauli seed maps: transfer matrices with the TP entry at
/// `(0, 0)` plus one unit entry `(P_out, P_in)` with `P_out ≠ I`.
pub fn tp_pauli_seeds(in_dim: usize, out_dim: usize) -> Vec<TransferMatrix> {
    let (ni, no) = (in_dim * in_dim, out_dim * out_dim);
    let head = (in_dim as f64 / out_dim as f64).sqrt();
    let mut seeds = Vec::with_capacity((no - 1) * ni);
    for r in 1..no {
        for col in 0..ni {
            let mut m = CMatrix::zeros(no, ni);
            m[(0, 0)] = c(head, 0.0);
            m[(r, col)] += c(1.0, 0.0);
            seeds.push(TransferMatrix { matrix: m, in_dim, out_dim });
        }
    }
    seeds
}

/// Twirls every seed and returns an orthonormal basis of the resulting span.
pub fn twirled_span(problem: &EquivarianceProblem, seeds: &[TransferMatrix], config: &TwirlConfig) -> Result<EquivariantBasis> {
    if problem.locality.is_some() {
        return Err(EqnnError::Invalid("locality caps are only supported by the nullspace method".into()));
    }
    let twirled = config
        .exec
        .map_slice(seeds, |s| twirl(s, problem, config).map(|t| t.transfer.real_vec()))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let len = problem.vec_len();
    let m = RMatrix::from_fn(len, twirled.len(), |i, j| twirled[j][i]);
    let span = real_orthonormal_span(&m, NULLSPACE_TOL);
    tagged_basis(problem, &span, Provenance::Twirl)
}

/// Equivariant basis obtained by twirling every unit transfer matrix: the
/// exact group average for finite groups, the Weingarten projection for Lie
/// groups.
pub fn solve_twirl(problem: &EquivarianceProblem, exec: Exec) -> Result<EquivariantBasis> {
    let (din, dout) = (problem.in_dim(), problem.out_dim());
    let (no, ni) = (dout * dout, din * din);
    let seeds: Vec<TransferMatrix> = (0..no * ni)
        .map(|k| {
            let mut m = CMatrix::zeros(no, ni);
            m[(k % no, k / no)] = c(1.0, 0.0);
            TransferMatrix { matrix: m, in_dim: din, out_dim: dout }
        })
        .collect();
    let config = if problem.r_in.is_finite() { TwirlConfig::exact() } else { TwirlConfig::weingarten() };
    twirled_span(problem, &seeds, &config.with_exec(exec))
}
