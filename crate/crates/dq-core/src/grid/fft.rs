//! Discrete-Fourier differentiation on uniform periodic grids.

use rustfft::{num_complex::Complex, FftPlanner};

use crate::C64;

/// Forward/backward 2-D FFT over a row-major (q-major, p-fastest) field.
pub struct SpectralField {
    pub n_q: usize,
    pub n_p: usize,
    /// Angular wavenumbers per axis, Nyquist entry already zeroed.
    pub k_q: Vec<f64>,
    pub k_p: Vec<f64>,
    /// 2-D spectrum, same layout as the samples.
    pub hat: Vec<C64>,
}

fn wavenumbers(n: usize, half_extent: f64) -> Vec<f64> {
    let base = std::f64::consts::PI / half_extent;
    (0..n)
        .map(|j| {
            if j == n / 2 {
                0.0 // Nyquist weight zeroed explicitly
            } else if j < n / 2 {
                base * j as f64
            } else {
                base * (j as f64 - n as f64)
            }
        })
        .collect()
}

fn fft_rows(data: &mut [Complex<f64>], n_rows: usize, n_cols: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n_cols)
    } else {
        planner.plan_fft_forward(n_cols)
    };
    for r in 0..n_rows {
        fft.process(&mut data[r * n_cols..(r + 1) * n_cols]);
    }
}

fn transpose(data: &[Complex<f64>], n_rows: usize, n_cols: usize) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::new(0.0, 0.0); data.len()];
    for r in 0..n_rows {
        for c in 0..n_cols {
            out[c * n_rows + r] = data[r * n_cols + c];
        }
    }
    out
}

fn fft2(values: &[C64], n_q: usize, n_p: usize, inverse: bool) -> Vec<C64> {
    let mut data = values.to_vec();
    // p axis is contiguous
    fft_rows(&mut data, n_q, n_p, inverse);
    let mut t = transpose(&data, n_q, n_p);
    fft_rows(&mut t, n_p, n_q, inverse);
    let mut out = transpose(&t, n_p, n_q);
    if inverse {
        let scale = 1.0 / (n_q * n_p) as f64;
        for v in &mut out {
            *v *= scale;
        }
    }
    out
}

impl SpectralField {
    /// Transform samples (row-major, p-fastest) into spectral space.
    pub fn analyze(values: &[C64], n_q: usize, n_p: usize, l_q: f64, l_p: f64) -> Self {
        let hat = fft2(values, n_q, n_p, false);
        SpectralField {
            n_q,
            n_p,
            k_q: wavenumbers(n_q, l_q),
            k_p: wavenumbers(n_p, l_p),
            hat,
        }
    }

    /// Largest spectral magnitude.
    pub fn max_hat(&self) -> f64 {
        self.hat.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest spectral magnitude on the Nyquist ring (the unresolved modes).
    pub fn nyquist_mass(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let iq = self.n_q / 2;
        for ip in 0..self.n_p {
            worst = worst.max(self.hat[iq * self.n_p + ip].norm());
        }
        let ip = self.n_p / 2;
        for q in 0..self.n_q {
            worst = worst.max(self.hat[q * self.n_p + ip].norm());
        }
        worst
    }

    /// Zero every mode whose magnitude falls below `floor` (absolute).
    pub fn apply_floor(&mut self, floor: f64) {
        for v in &mut self.hat {
            if v.norm() < floor {
                *v = C64::new(0.0, 0.0);
            }
        }
    }

    /// Real-space samples of ∂q^{dq} ∂p^{dp} f.
    pub fn derivative(&self, dq: u32, dp: u32) -> Vec<C64> {
        let mut hat = self.hat.clone();
        for iq in 0..self.n_q {
            let fq = C64::new(0.0, self.k_q[iq]).powu(dq);
            for ip in 0..self.n_p {
                let fp = C64::new(0.0, self.k_p[ip]).powu(dp);
                hat[iq * self.n_p + ip] *= fq * fp;
            }
        }
        fft2(&hat, self.n_q, self.n_p, true)
    }
}
