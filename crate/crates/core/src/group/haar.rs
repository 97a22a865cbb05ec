//! Haar-random unitaries.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, CMatrix, C64};

/// Haar-random element of SU(2) from a normalized Gaussian quaternion.
pub fn haar_su2<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let mut q = [0f64; 4];
    loop {
        for x in q.iter_mut() {
            *x = rng.sample(StandardNormal);
        }
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            q.iter_mut().for_each(|x| *x /= n);
            break;
        }
    }
    let (a, b, cc, d) = (q[0], q[1], q[2], q[3]);
    CMatrix::from_row_slice(2, 2, &[c(a, b), c(cc, d), c(-cc, d), c(a, -b)])
}

/// Haar-random element of U(d): QR of a complex Gaussian matrix with the
/// phases of R's diagonal absorbed into Q.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let z = CMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitary_deviation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samples_are_unitary_with_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let g = haar_su2(&mut rng);
            assert!(unitary_deviation(&g) < 1e-12);
            assert!((g.determinant() - c(1.0, 0.0)).norm() < 1e-12);
            let u = haar_unitary(4, &mut rng);
            assert!(unitary_deviation(&u) < 1e-12);
        }
    }
}
