#![allow(dead_code)]

use num_complex::Complex64;
use prepsynth::statesim::Mat4;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (-53f64).exp2()
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }
}

/// Haar-ish random orthogonal matrix by Gram-Schmidt on Gaussian columns.
pub fn random_orthogonal(rng: &mut Rng) -> Mat4 {
    let mut cols = [[0.0; 4]; 4];
    for c in 0..4 {
        let mut v: [f64; 4] = std::array::from_fn(|_| rng.normal());
        for p in 0..c {
            let d: f64 = (0..4).map(|k| v[k] * cols[p][k]).sum();
            for k in 0..4 {
                v[k] -= d * cols[p][k];
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        cols[c] = v.map(|x| x / n);
    }
    std::array::from_fn(|r| std::array::from_fn(|c| cols[c][r]))
}

/// Operator-norm distance between 2x2 unitaries up to global phase, from the
/// eigenphases of `a^† b`: `2 sin(|α1 - α2| / 4)`.
pub fn phase_free_distance_2x2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> f64 {
    let mut v = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                v[i][j] += a[k][i].conj() * b[k][j];
            }
        }
    }
    let tr = v[0][0] + v[1][1];
    let det = v[0][0] * v[1][1] - v[0][1] * v[1][0];
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    let mut d = (l1.arg() - l2.arg()).abs();
    if d > std::f64::consts::PI {
        d = 2.0 * std::f64::consts::PI - d;
    }
    2.0 * (d / 4.0).sin()
}
