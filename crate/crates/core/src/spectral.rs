//! Discrete Fourier tools for periodic samples on a uniform grid over `[0, 2π)`.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Normalized coefficients `ĉ_k` with `f(θ_l) = Σ_k ĉ_k e^{ikθ_l}`, in FFT order.
pub fn fourier_coefficients(samples: &[f64]) -> Vec<Complex64> {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    if n == 0 {
        return buf;
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Signed wave number of FFT bin `k` on an `n`-point grid.
pub fn wave_number(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Largest coefficient magnitude among wave numbers `|k| > n/4`.
pub fn high_mode_amplitude(samples: &[f64]) -> f64 {
    let n = samples.len();
    fourier_coefficients(samples)
        .iter()
        .enumerate()
        .filter(|(k, _)| wave_number(*k, n).unsigned_abs() as usize > n / 4)
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}

/// Derivative of a periodic function from its samples. The Nyquist mode is dropped.
pub fn spectral_derivative(samples: &[f64]) -> Vec<f64> {
    let n = samples.len();
    let mut coefs = fourier_coefficients(samples);
    for (k, c) in coefs.iter_mut().enumerate() {
        let j = wave_number(k, n);
        if n.is_multiple_of(2) && k == n / 2 {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c *= Complex64::new(0.0, j as f64);
        }
    }
    if n > 0 {
        FftPlanner::new().plan_fft_inverse(n).process(&mut coefs);
    }
    coefs.iter().map(|c| c.re).collect()
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn peak_to_peak(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    max - min
}

pub fn sup_norm(values: &[f64]) -> f64 {
    values.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

/// Uniform grid of `n` angles on `[0, 2π)`.
pub fn angle_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| std::f64::consts::TAU * k as f64 / n as f64)
        .collect()
}
