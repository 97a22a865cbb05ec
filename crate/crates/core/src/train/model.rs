//! QCNN architectures and their forward evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{EqnnError, Result};
use crate::linalg::{c, partial_trace, CMatrix, CVector, C64, ZERO};
use crate::su2::{apply_pool, PoolParams};

/// How pooling layers discard qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PoolingKind {
    /// Trace out the first qubit of each pair.
    PartialTrace,
    /// Trainable `φ(x, y, z)` shared within a pooling layer.
    Parametric,
}

/// Architecture description; [`ModelSpec::build`] expands it into gates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    /// SU(2)-equivariant QCNN: each stage repeats `reps` times a pair of
    /// brickwork sublayers of `exp(−iθ SWAP)` gates (one shared θ per
    /// sublayer), then pools.
    Eqcnn { n: usize, reps: usize, pooling: PoolingKind },
    /// Hardware-efficient baseline: each stage repeats `depth` times a layer
    /// of per-qubit Rz-Ry-Rz rotations followed by a CNOT chain, then traces
    /// out half of the qubits.
    Hea { n: usize, depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    /// `exp(−iθ SWAP)` on two wires.
    Swap { a: usize, b: usize, param: usize },
    /// `exp(−iθ Z/2)`.
    Rz { wire: usize, param: usize },
    /// `exp(−iθ Y/2)`.
    Ry { wire: usize, param: usize },
    Cnot { control: usize, target: usize },
    /// Discards a wire.
    Trace { wire: usize },
    /// `φ(x, y, z)` on `(drop, keep)`, output on `keep`; parameters
    /// `group..group + 3`.
    Pool { drop: usize, keep: usize, group: usize },
}

impl Op {
    /// Parameter index of a gate angle.
    pub fn angle_param(&self) -> Option<usize> {
        match *self {
            Op::Swap { param, .. } | Op::Rz { param, .. } | Op::Ry { param, .. } => Some(param),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub spec: ModelSpec,
    pub n: usize,
    pub ops: Vec<Op>,
    pub n_params: usize,
    /// Start indices of `(x, y, z)` triples.
    pub pool_groups: Vec<usize>,
    /// The two wires measured with SWAP.
    pub readout: (usize, usize),
}

/// Pairs `(w0, w1), (w2, w3), …` lose their first wire; an odd leftover stays.
fn pool_pairs(active: &[usize]) -> (Vec<(usize, usize)>, Vec<usize>) {
    let mut pairs = Vec::new();
    let mut kept = Vec::new();
    let mut i = 0;
    while i + 1 < active.len() {
        pairs.push((active[i], active[i + 1]));
        kept.push(active[i + 1]);
        i += 2;
    }
    if i < active.len() {
        kept.push(active[i]);
    }
    (pairs, kept)
}

fn brick_pairs(active: &[usize], offset: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = offset;
    while i + 1 < active.len() {
        out.push((active[i], active[i + 1]));
        i += 2;
    }
    out
}

impl ModelSpec {
    pub fn n(&self) -> usize {
        match *self {
            ModelSpec::Eqcnn { n, .. } | ModelSpec::Hea { n, .. } => n,
        }
    }

    /// HEA on `n` qubits whose depth brings its parameter count closest to
    /// `target`.
    pub fn matched_hea(n: usize, target: usize) -> Result<ModelSpec> {
        let mut best = (usize::MAX, 1);
        for depth in 1..=64 {
            let p = ModelSpec::Hea { n, depth }.build()?.n_params;
            best = best.min((p.abs_diff(target), depth));
            if p > target {
                break;
            }
        }
        Ok(ModelSpec::Hea { n, depth: best.1 })
    }

    pub fn build(&self) -> Result<Model> {
        let n = self.n();
        if !(3..=20).contains(&n) {
            return Err(EqnnError::Invalid(format!("models need 3 to 20 qubits, got {n}")));
        }
        let mut active: Vec<usize> = (0..n).collect();
        let mut ops = Vec::new();
        let mut n_params = 0;
        let mut pool_groups = Vec::new();
        while active.len() > 2 {
            match *self {
                ModelSpec::Eqcnn { reps, .. } => {
                    if reps == 0 {
                        return Err(EqnnError::Invalid("convolution stages need reps >= 1".into()));
                    }
                    for _ in 0..reps {
                        for offset in 0..2 {
                            let param = n_params;
                            n_params += 1;
                            for (a, b) in brick_pairs(&active, offset) {
                                ops.push(Op::Swap { a, b, param });
                            }
                        }
                    }
                }
                ModelSpec::Hea { depth, .. } => {
                    if depth == 0 {
                        return Err(EqnnError::Invalid("HEA stages need depth >= 1".into()));
                    }
                    for _ in 0..depth {
                        for &w in &active {
                            ops.push(Op::Rz { wire: w, param: n_params });
                            ops.push(Op::Ry { wire: w, param: n_params + 1 });
                            ops.push(Op::Rz { wire: w, param: n_params + 2 });
                            n_params += 3;
                        }
                        for pair in active.windows(2) {
                            ops.push(Op::Cnot { control: pair[0], target: pair[1] });
                        }
                    }
                }
            }
            let (pairs, kept) = pool_pairs(&active);
            let parametric = matches!(
                self,
                ModelSpec::Eqcnn { pooling: PoolingKind::Parametric, .. }
            );
            if parametric {
                let group = n_params;
                n_params += 3;
                pool_groups.push(group);
                for (drop, keep) in pairs {
                    ops.push(Op::Pool { drop, keep, group });
                }
            } else {
                for (drop, _) in pairs {
                    ops.push(Op::Trace { wire: drop });
                }
            }
            active = kept;
        }
        Ok(Model {
            spec: *self,
            n,
            ops,
            n_params,
            pool_groups,
            readout: (active[0], active[1]),
        })
    }
}

impl Model {
    pub fn is_parametric(&self) -> bool {
        !self.pool_groups.is_empty()
    }

    pub fn pool_params(&self, params: &[f64], group: usize) -> PoolParams {
        PoolParams::new(params[group], params[group + 1], params[group + 2])
    }

    /// Output `f = (Tr[ρ_out SWAP] + 1)/2` for a pure input.
    pub fn forward(&self, params: &[f64], psi: &CVector) -> Result<f64> {
        self.forward_shifted(params, psi, None)
    }

    /// Forward pass with the angle of operation `shift.0` offset by `shift.1`.
    pub fn forward_shifted(&self, params: &[f64], psi: &CVector, shift: Option<(usize, f64)>) -> Result<f64> {
        self.check(params, psi.len())?;
        if self.is_parametric() {
            let rho = psi * psi.adjoint();
            self.forward_density_shifted(params, &rho, shift)
        } else {
            Ok(self.forward_pure(params, psi, shift))
        }
    }

    fn check(&self, params: &[f64], len: usize) -> Result<()> {
        if params.len() != self.n_params {
            return Err(EqnnError::DimensionMismatch(format!(
                "{} parameters for a model with {}",
                params.len(),
                self.n_params
            )));
        }
        if len != 1 << self.n {
            return Err(EqnnError::DimensionMismatch(format!(
                "state of length {len} for a {}-qubit model",
                self.n
            )));
        }
        Ok(())
    }

    fn angle(&self, params: &[f64], k: usize, op: &Op, shift: Option<(usize, f64)>) -> f64 {
        let base = op.angle_param().map(|p| params[p]).unwrap_or(0.0);
        match shift {
            Some((i, d)) if i == k => base + d,
            _ => base,
        }
    }

    /// Statevector evaluation: traced wires are simply never touched again,
    /// so evolving the full pure state and measuring the readout pair gives
    /// the same expectation as the reduced-state pipeline.
    fn forward_pure(&self, params: &[f64], psi: &CVector, shift: Option<(usize, f64)>) -> f64 {
        let n = self.n;
        let mut v: Vec<C64> = psi.iter().copied().collect();
        for (k, op) in self.ops.iter().enumerate() {
            let theta = self.angle(params, k, op, shift);
            if let Some(g) = Gate::from_op(op, theta, |w| w) {
                g.apply(&mut v, n);
            }
        }
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let s = swap_expectation(&v, n, self.readout.0, self.readout.1) / norm;
        0.5 * (s + 1.0)
    }

    /// Density-matrix evaluation through every layer.
    pub fn forward_density(&self, params: &[f64], rho: &CMatrix) -> Result<f64> {
        self.check(params, rho.nrows())?;
        self.forward_density_shifted(params, rho, None)
    }

    fn forward_density_shifted(&self, params: &[f64], rho: &CMatrix, shift: Option<(usize, f64)>) -> Result<f64> {
        let mut active: Vec<usize> = (0..self.n).collect();
        let mut rho = rho.clone();
        for (k, op) in self.ops.iter().enumerate() {
            let pos = |w: usize| active.iter().position(|&a| a == w).expect("wire is active");
            match *op {
                Op::Trace { wire } => {
                    let p = pos(wire);
                    let m = active.len();
                    let keep: Vec<usize> = (0..m).filter(|&i| i != p).collect();
                    rho = partial_trace(&rho, &vec![2; m], &keep)?;
                    active.remove(p);
                }
                Op::Pool { drop, keep, group } => {
                    let (pd, pk) = (pos(drop), pos(keep));
                    let p = self.pool_params(params, group);
                    rho = apply_pair_map(&rho, active.len(), pd, pk, &pool_units(p));
                    active.remove(pd);
                }
                _ => {
                    let theta = self.angle(params, k, op, shift);
                    let g = Gate::from_op(op, theta, pos).expect("unitary op");
                    rho = conjugate(&g, &rho, active.len());
                }
            }
        }
        let (a, b) = (
            active.iter().position(|&w| w == self.readout.0).expect("readout active"),
            active.iter().position(|&w| w == self.readout.1).expect("readout active"),
        );
        let m = active.len();
        let dim = 1 << m;
        let (ba, bb) = (1 << (m - 1 - a), 1 << (m - 1 - b));
        let mut s = 0.0;
        for col in 0..dim {
            let row = swap_bits(col, ba, bb);
            s += rho[(col, row)].re;
        }
        let tr: f64 = (0..dim).map(|i| rho[(i, i)].re).sum();
        Ok(0.5 * (s / tr + 1.0))
    }
}

fn swap_bits(s: usize, ba: usize, bb: usize) -> usize {
    if ((s & ba) != 0) != ((s & bb) != 0) {
        s ^ ba ^ bb
    } else {
        s
    }
}

fn swap_expectation(v: &[C64], n: usize, a: usize, b: usize) -> f64 {
    let (ba, bb) = (1 << (n - 1 - a), 1 << (n - 1 - b));
    v.iter()
        .enumerate()
        .map(|(s, z)| (z.conj() * v[swap_bits(s, ba, bb)]).re)
        .sum()
}

/// A unitary gate on qubit positions of an `nq`-qubit register.
#[derive(Debug, Clone, Copy)]
enum Gate {
    Swap(f64, usize, usize),
    Rz(f64, usize),
    Ry(f64, usize),
    Cnot(usize, usize),
}

impl Gate {
    fn from_op(op: &Op, theta: f64, pos: impl Fn(usize) -> usize) -> Option<Gate> {
        match *op {
            Op::Swap { a, b, .. } => Some(Gate::Swap(theta, pos(a), pos(b))),
            Op::Rz { wire, .. } => Some(Gate::Rz(theta, pos(wire))),
            Op::Ry { wire, .. } => Some(Gate::Ry(theta, pos(wire))),
            Op::Cnot { control, target } => Some(Gate::Cnot(pos(control), pos(target))),
            Op::Trace { .. } | Op::Pool { .. } => None,
        }
    }

    fn apply(&self, v: &mut [C64], nq: usize) {
        let bit = |q: usize| 1usize << (nq - 1 - q);
        match *self {
            Gate::Swap(theta, a, b) => {
                let (ba, bb) = (bit(a), bit(b));
                let (co, si) = (theta.cos(), theta.sin());
                let phase = c(co, -si);
                let msi = c(0.0, -si);
                for s in 0..v.len() {
                    let (xa, xb) = (s & ba != 0, s & bb != 0);
                    if xa == xb {
                        v[s] *= phase;
                    } else if xb {
                        let t = s ^ ba ^ bb;
                        let (p, q) = (v[s], v[t]);
                        v[s] = p * co + q * msi;
                        v[t] = q * co + p * msi;
                    }
                }
            }
            Gate::Rz(theta, q) => {
                let bq = bit(q);
                let (e0, e1) = (c((theta / 2.0).cos(), -(theta / 2.0).sin()), c((theta / 2.0).cos(), (theta / 2.0).sin()));
                for (s, z) in v.iter_mut().enumerate() {
                    *z *= if s & bq == 0 { e0 } else { e1 };
                }
            }
            Gate::Ry(theta, q) => {
                let bq = bit(q);
                let (co, si) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                for s in 0..v.len() {
                    if s & bq == 0 {
                        let t = s | bq;
                        let (p, r) = (v[s], v[t]);
                        v[s] = p * co - r * si;
                        v[t] = p * si + r * co;
                    }
                }
            }
            Gate::Cnot(ctl, tgt) => {
                let (bc, bt) = (bit(ctl), bit(tgt));
                for s in 0..v.len() {
                    if s & bc != 0 && s & bt == 0 {
                        v.swap(s, s | bt);
                    }
                }
            }
        }
    }
}

/// `U ρ U^†` for a gate on an `nq`-qubit register.
fn conjugate(g: &Gate, rho: &CMatrix, nq: usize) -> CMatrix {
    let d = rho.nrows();
    let mut a = rho.clone();
    for j in 0..d {
        let mut col: Vec<C64> = a.column(j).iter().copied().collect();
        g.apply(&mut col, nq);
        a.set_column(j, &CVector::from_vec(col));
    }
    let mut b = a.adjoint();
    for j in 0..d {
        let mut col: Vec<C64> = b.column(j).iter().copied().collect();
        g.apply(&mut col, nq);
        b.set_column(j, &CVector::from_vec(col));
    }
    b.adjoint()
}

/// `φ(|i⟩⟨j|)` for the 16 two-qubit matrix units, indexed `4 i + j`.
fn pool_units(p: PoolParams) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        for j in 0..4 {
            let mut e = CMatrix::zeros(4, 4);
            e[(i, j)] = c(1.0, 0.0);
            out.push(apply_pool(p, &e));
        }
    }
    out
}

/// Applies a 2→1 map given by its action on matrix units to the qubits at
/// positions `(pd, pk)` of an `m`-qubit operator; the output replaces `pk`.
fn apply_pair_map(rho: &CMatrix, m: usize, pd: usize, pk: usize, units: &[CMatrix]) -> CMatrix {
    let dim = 1 << m;
    let bd = 1 << (m - 1 - pd);
    let bk = 1 << (m - 1 - pk);
    // keep's position after removing pd
    let pk_new = if pk > pd { pk - 1 } else { pk };
    let bk_new = 1 << (m - 2 - pk_new);
    let compress = |s: usize| -> usize {
        let mut out = 0;
        let mut pos = 0;
        for q in (0..m).rev() {
            if q == pd {
                continue;
            }
            let bq = 1 << (m - 1 - q);
            if q != pk && s & bq != 0 {
                out |= 1 << pos;
            }
            pos += 1;
        }
        out
    };
    let base: Vec<usize> = (0..dim).map(compress).collect();
    let local = |s: usize| 2 * usize::from(s & bd != 0) + usize::from(s & bk != 0);
    let mut out = CMatrix::from_element(dim / 2, dim / 2, ZERO);
    for r in 0..dim {
        let (br, lr) = (base[r], local(r));
        for col in 0..dim {
            let x = rho[(r, col)];
            if x == ZERO {
                continue;
            }
            let e = &units[4 * lr + local(col)];
            let bc = base[col];
            for ko in 0..2 {
                for kc in 0..2 {
                    let y = e[(ko, kc)];
                    if y != ZERO {
                        out[(br | (ko * bk_new), bc | (kc * bk_new))] += x * y;
                    }
                }
            }
        }
    }
    out
}
