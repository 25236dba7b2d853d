//! Seeded generators for quaternionic test data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qmatrix::QMatrix;
use crate::quaternion::{Quaternion, SliceFrame};
use crate::vector::{self, QVector};

/// Per-trial seed derived from a run seed; trials stay independent of the
/// order in which they are executed.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct QRng {
    rng: ChaCha8Rng,
}

impl QRng {
    pub fn seeded(seed: u64) -> Self {
        QRng { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        self.rng.random_range(lo..=hi_inclusive)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    /// Components uniform in `[-1, 1)`.
    pub fn quaternion(&mut self) -> Quaternion {
        Quaternion::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0))
    }

    pub fn unit_quaternion(&mut self) -> Quaternion {
        loop {
            let q = self.quaternion();
            let n = q.norm();
            if n > 0.1 {
                return q / n;
            }
        }
    }

    pub fn imaginary_unit(&mut self) -> Quaternion {
        loop {
            let q = self.quaternion().im();
            let n = q.norm();
            if n > 0.1 {
                return q / n;
            }
        }
    }

    pub fn vector(&mut self, n: usize) -> QVector {
        (0..n).map(|_| self.quaternion()).collect()
    }

    pub fn matrix(&mut self, n: usize) -> QMatrix {
        QMatrix::from_fn(n, |_, _| self.quaternion())
    }

    /// Random orthonormal basis of `H^n`.
    pub fn orthonormal_basis(&mut self, n: usize) -> Vec<QVector> {
        loop {
            let cand: Vec<QVector> = (0..n).map(|_| self.vector(n)).collect();
            let basis = vector::orthonormal_span(&cand, n, 1e-3);
            if basis.len() == n {
                return basis;
            }
        }
    }

    pub fn unitary(&mut self, n: usize) -> QMatrix {
        QMatrix::from_columns(&self.orthonormal_basis(n))
    }

    /// Random point `α + ιβ` with `β ≥ 0`, as a quaternion of `C_ι^+`.
    pub fn upper_half_point(&mut self, frame: &SliceFrame, real: bool) -> Quaternion {
        let alpha = self.uniform(-2.0, 2.0);
        let beta = if real { 0.0 } else { self.uniform(0.05, 2.0) };
        Quaternion::real(alpha) + frame.unit * beta
    }

    /// Spectrum for a random normal matrix: mostly distinct points of
    /// `C_ι^+`, with occasional real and repeated values.
    pub fn spectrum(&mut self, n: usize, frame: &SliceFrame) -> Vec<Quaternion> {
        let mut d: Vec<Quaternion> = Vec::with_capacity(n);
        for _ in 0..n {
            if !d.is_empty() && self.chance(0.15) {
                let k = self.index(0, d.len() - 1);
                d.push(d[k]);
            } else {
                let real = self.chance(0.2);
                d.push(self.upper_half_point(frame, real));
            }
        }
        d
    }

    /// `U D U*` with `U` unitary and `D` diagonal.
    pub fn normal_with_spectrum(&mut self, d: &[Quaternion]) -> QMatrix {
        let u = self.unitary(d.len());
        &(&u * &QMatrix::diagonal(d)) * &u.adjoint()
    }

    pub fn normal(&mut self, n: usize, frame: &SliceFrame) -> QMatrix {
        let d = self.spectrum(n, frame);
        self.normal_with_spectrum(&d)
    }

    /// Positive self-adjoint `X*X`.
    pub fn positive(&mut self, n: usize) -> QMatrix {
        let x = self.matrix(n);
        &x.adjoint() * &x
    }

    /// Complex `n × n` matrix with entries in the unit square.
    pub fn complex_matrix(&mut self, n: usize) -> nalgebra::DMatrix<nalgebra::Complex<f64>> {
        nalgebra::DMatrix::from_fn(n, n, |_, _| nalgebra::Complex::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0)))
    }
}
