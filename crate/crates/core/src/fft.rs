//! Cubic 3-D complex FFT built from one-dimensional `rustfft` plans.
//!
//! Data is stored row-major, index `(i0 * L + i1) * L + i2`. Transforms are
//! unnormalised in both directions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Clone)]
pub struct Fft3 {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Fft3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fft3").field("len", &self.len).finish()
    }
}

impl Fft3 {
    pub fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn volume(&self) -> usize {
        self.len * self.len * self.len
    }

    /// `X_k = sum_j x_j exp(-2 pi i j.k / L)`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// `x_j = sum_k X_k exp(+2 pi i j.k / L)`.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let l = self.len;
        assert_eq!(data.len(), self.volume(), "buffer is not an L^3 cube");
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];

        // innermost axis is contiguous
        plan.process_with_scratch(data, &mut scratch);

        let mut lines = vec![Complex64::new(0.0, 0.0); data.len()];
        // middle axis
        for i0 in 0..l {
            for i2 in 0..l {
                let line = &mut lines[(i0 * l + i2) * l..(i0 * l + i2 + 1) * l];
                for (i1, slot) in line.iter_mut().enumerate() {
                    *slot = data[(i0 * l + i1) * l + i2];
                }
            }
        }
        plan.process_with_scratch(&mut lines, &mut scratch);
        for i0 in 0..l {
            for i2 in 0..l {
                let line = &lines[(i0 * l + i2) * l..(i0 * l + i2 + 1) * l];
                for (i1, value) in line.iter().enumerate() {
                    data[(i0 * l + i1) * l + i2] = *value;
                }
            }
        }
        // outer axis
        for i1 in 0..l {
            for i2 in 0..l {
                let line = &mut lines[(i1 * l + i2) * l..(i1 * l + i2 + 1) * l];
                for (i0, slot) in line.iter_mut().enumerate() {
                    *slot = data[(i0 * l + i1) * l + i2];
                }
            }
        }
        plan.process_with_scratch(&mut lines, &mut scratch);
        for i1 in 0..l {
            for i2 in 0..l {
                let line = &lines[(i1 * l + i2) * l..(i1 * l + i2 + 1) * l];
                for (i0, value) in line.iter().enumerate() {
                    data[(i0 * l + i1) * l + i2] = *value;
                }
            }
        }
    }
}

/// Smallest integer `>= min` whose prime factors are all in {2, 3, 5}.
pub fn smooth_size(min: usize) -> usize {
    let mut candidate = min.max(1);
    loop {
        let mut m = candidate;
        for p in [2, 3, 5] {
            while m % p == 0 {
                m /= p;
            }
        }
        if m == 1 {
            return candidate;
        }
        candidate += 1;
    }
}
