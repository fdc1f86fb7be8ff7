//! Truncated Fourier lattice, spectral fields and the Galerkin advection term.
//!
//! The retained wavevectors are the integer points of the cube
//! `0 < max_i |n_i| <= N`, listed in lexicographic order. Because the cube
//! centre is removed, the mode `-n` of the mode at position `i` sits at
//! position `len - 1 - i`, so Hermitian partners are found without a lookup.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{smooth_size, Fft3};

/// Integer wavevector.
pub type Mode = [i32; 3];

/// Complex 3-vector amplitude of a single Fourier mode.
pub type Vec3c = [Complex64; 3];

pub const ZERO3: Vec3c = [Complex64 { re: 0.0, im: 0.0 }; 3];

/// Field-level tolerance for tagging a field solenoidal:
/// `max_n |v_n . n| / |n| <= SOLENOIDAL_TOL * max_n |v_n|`.
pub const SOLENOIDAL_TOL: f64 = 1e-13;

/// All integer 3-vectors with `0 < max_i |n_i| <= n`, lexicographic order.
pub fn enumerate_modes(n: usize) -> Result<Vec<Mode>> {
    if n == 0 {
        return Err(Error::Config("truncation radius N must be at least 1".into()));
    }
    let r = n as i32;
    let side = 2 * n + 1;
    let mut modes = Vec::with_capacity(side * side * side - 1);
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                if a != 0 || b != 0 || c != 0 {
                    modes.push([a, b, c]);
                }
            }
        }
    }
    Ok(modes)
}

/// The truncated lattice together with cached per-mode geometry and the
/// dealiasing transform used for products.
#[derive(Debug)]
pub struct Lattice {
    n: usize,
    modes: Vec<Mode>,
    magnitude: Vec<f64>,
    magnitude_sq: Vec<f64>,
    fft: Fft3,
    grid_index: Vec<usize>,
}

impl Lattice {
    pub fn new(n: usize) -> Result<Arc<Self>> {
        let modes = enumerate_modes(n)?;
        let magnitude_sq: Vec<f64> = modes.iter().map(|m| dot_int(m, m)).collect();
        let magnitude = magnitude_sq.iter().map(|m| m.sqrt()).collect();
        // products of two truncated fields reach |n_i| <= 2N; a grid of
        // L >= 3N + 1 points keeps aliases off the retained modes
        let len = smooth_size(3 * n + 1);
        let grid_index = modes
            .iter()
            .map(|m| {
                let w = |k: i32| k.rem_euclid(len as i32) as usize;
                (w(m[0]) * len + w(m[1])) * len + w(m[2])
            })
            .collect();
        Ok(Arc::new(Self {
            n,
            modes,
            magnitude,
            magnitude_sq,
            fft: Fft3::new(len),
            grid_index,
        }))
    }

    /// Truncation radius N.
    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn mode(&self, i: usize) -> Mode {
        self.modes[i]
    }

    /// `|n|` for the mode at position `i`.
    pub fn magnitude(&self, i: usize) -> f64 {
        self.magnitude[i]
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitude
    }

    pub fn magnitude_sq(&self, i: usize) -> f64 {
        self.magnitude_sq[i]
    }

    /// Position of `-n` given the position of `n`.
    pub fn mirror(&self, i: usize) -> usize {
        self.modes.len() - 1 - i
    }

    pub fn index_of(&self, mode: Mode) -> Option<usize> {
        let r = self.n as i32;
        if mode.iter().any(|c| c.abs() > r) || mode == [0, 0, 0] {
            return None;
        }
        let side = 2 * self.n + 1;
        let cube = ((mode[0] + r) as usize * side + (mode[1] + r) as usize) * side
            + (mode[2] + r) as usize;
        let centre = (side * side * side - 1) / 2;
        Some(if cube < centre { cube } else { cube - 1 })
    }

    /// Side length of the dealiasing grid.
    pub fn grid_len(&self) -> usize {
        self.fft.len()
    }

    fn same_as(&self, other: &Lattice) -> bool {
        std::ptr::eq(self, other) || self.n == other.n
    }
}

fn dot_int(a: &Mode, b: &Mode) -> f64 {
    (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) as f64
}

fn dot_mode(v: &Vec3c, n: &Mode) -> Complex64 {
    v[0] * n[0] as f64 + v[1] * n[1] as f64 + v[2] * n[2] as f64
}

/// `sum_c |v_c|^2` in a fixed component order.
pub fn vec_norm_sqr(v: &Vec3c) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr() + v[2].norm_sqr()
}

/// Removes the component of `v` along `n`.
pub fn project_mode(v: &Vec3c, n: &Mode, n_sq: f64) -> Vec3c {
    let along = dot_mode(v, n) / n_sq;
    [
        v[0] - along * n[0] as f64,
        v[1] - along * n[1] as f64,
        v[2] - along * n[2] as f64,
    ]
}

/// Truncated Fourier coefficients of a real 3-vector field.
#[derive(Debug, Clone)]
pub struct SpectralField {
    lattice: Arc<Lattice>,
    coeffs: Vec<Vec3c>,
    solenoidal: bool,
}

impl SpectralField {
    pub fn zeros(lattice: Arc<Lattice>) -> Self {
        let coeffs = vec![ZERO3; lattice.len()];
        Self {
            lattice,
            coeffs,
            solenoidal: true,
        }
    }

    pub fn from_coeffs(lattice: Arc<Lattice>, coeffs: Vec<Vec3c>) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::Config(format!(
                "expected {} coefficients for N = {}, got {}",
                lattice.len(),
                lattice.truncation(),
                coeffs.len()
            )));
        }
        Ok(Self::tagged(lattice, coeffs))
    }

    /// Builds a field from a per-mode generator. Hermitian symmetry is the
    /// caller's responsibility; see [`enforce_hermitian`].
    pub fn from_fn(lattice: Arc<Lattice>, mut f: impl FnMut(Mode) -> Vec3c) -> Self {
        let coeffs = lattice.modes().iter().map(|&m| f(m)).collect();
        Self::tagged(lattice, coeffs)
    }

    fn tagged(lattice: Arc<Lattice>, coeffs: Vec<Vec3c>) -> Self {
        let mut field = Self {
            lattice,
            coeffs,
            solenoidal: false,
        };
        field.solenoidal = field.scaled_divergence() <= SOLENOIDAL_TOL;
        field
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Vec3c] {
        &self.coeffs
    }

    pub fn coeff(&self, mode: Mode) -> Option<&Vec3c> {
        self.lattice.index_of(mode).map(|i| &self.coeffs[i])
    }

    pub fn is_solenoidal(&self) -> bool {
        self.solenoidal
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|v| vec_norm_sqr(v) == 0.0)
    }

    pub fn into_coeffs(self) -> Vec<Vec3c> {
        self.coeffs
    }

    /// Largest single-mode amplitude `max_n |v_n|`.
    pub fn max_modulus(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|v| vec_norm_sqr(v).sqrt())
            .fold(0.0, f64::max)
    }

    /// `max_n |v_n . n| / (|v_n| |n|)` over nonzero modes.
    pub fn divergence_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                let amp = vec_norm_sqr(v).sqrt();
                (amp > 0.0).then(|| {
                    dot_mode(v, &self.lattice.mode(i)).norm() / (amp * self.lattice.magnitude(i))
                })
            })
            .fold(0.0, f64::max)
    }

    /// `max_n |v_n . n| / |n|` relative to `max_n |v_n|`; zero for the zero field.
    pub fn scaled_divergence(&self) -> f64 {
        let scale = self.max_modulus();
        if scale == 0.0 {
            return 0.0;
        }
        let worst = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, v)| dot_mode(v, &self.lattice.mode(i)).norm() / self.lattice.magnitude(i))
            .fold(0.0, f64::max);
        worst / scale
    }

    /// `max_n |v_n - conj(v_{-n})|`; exactly zero for canonical real fields.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|i| {
                let a = &self.coeffs[i];
                let b = &self.coeffs[self.lattice.mirror(i)];
                (0..3).map(|c| (a[c] - b[c].conj()).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.coeffs.len()).all(|i| {
            let a = &self.coeffs[i];
            let b = &self.coeffs[self.lattice.mirror(i)];
            (0..3).all(|c| a[c] == b[c].conj())
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|v| [v[0] * factor, v[1] * factor, v[2] * factor])
            .collect();
        Self {
            lattice: Arc::clone(&self.lattice),
            coeffs,
            solenoidal: self.solenoidal,
        }
    }

    /// Multiplies mode `i` by `factor(i)`; solenoidality is preserved.
    pub fn scale_modes(&self, mut factor: impl FnMut(usize) -> f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let f = factor(i);
                [v[0] * f, v[1] * f, v[2] * f]
            })
            .collect();
        Self {
            lattice: Arc::clone(&self.lattice),
            coeffs,
            solenoidal: self.solenoidal,
        }
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: f64, other: &SpectralField) -> Result<Self> {
        self.check_lattice(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| [x[0] + y[0] * a, x[1] + y[1] * a, x[2] + y[2] * a])
            .collect();
        Ok(Self::tagged(Arc::clone(&self.lattice), coeffs))
    }

    /// `max_n |self_n - other_n|`.
    pub fn max_difference(&self, other: &SpectralField) -> Result<f64> {
        self.check_lattice(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| {
                let d = [x[0] - y[0], x[1] - y[1], x[2] - y[2]];
                vec_norm_sqr(&d).sqrt()
            })
            .fold(0.0, f64::max))
    }

    /// `sum_n v_n . conj(u_n)`.
    pub fn inner(&self, other: &SpectralField) -> Result<Complex64> {
        self.check_lattice(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x[0] * y[0].conj() + x[1] * y[1].conj() + x[2] * y[2].conj())
            .sum())
    }

    pub fn check_lattice(&self, other: &SpectralField) -> Result<()> {
        if self.lattice.same_as(&other.lattice) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch {
                expected: self.lattice.truncation(),
                found: other.lattice.truncation(),
            })
        }
    }
}

/// Truncated Fourier coefficients of a scalar field.
#[derive(Debug, Clone)]
pub struct ScalarSpectralField {
    lattice: Arc<Lattice>,
    coeffs: Vec<Complex64>,
}

impl ScalarSpectralField {
    pub fn from_coeffs(lattice: Arc<Lattice>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::Config(format!(
                "expected {} coefficients, got {}",
                lattice.len(),
                coeffs.len()
            )));
        }
        Ok(Self { lattice, coeffs })
    }

    pub fn lattice(&self) -> &Arc<Lattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, mode: Mode) -> Option<Complex64> {
        self.lattice.index_of(mode).map(|i| self.coeffs[i])
    }

    pub fn is_hermitian(&self) -> bool {
        (0..self.coeffs.len()).all(|i| self.coeffs[i] == self.coeffs[self.lattice.mirror(i)].conj())
    }
}

/// Per-mode Leray projection `v - (v.n / |n|^2) n`.
pub fn project_solenoidal(f: &SpectralField) -> SpectralField {
    let lattice = &f.lattice;
    let coeffs = f
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, v)| project_mode(v, &lattice.mode(i), lattice.magnitude_sq(i)))
        .collect();
    SpectralField {
        lattice: Arc::clone(lattice),
        coeffs,
        solenoidal: true,
    }
}

/// Replaces `v_n` by `(v_n + conj(v_{-n})) / 2`. The result is exactly
/// Hermitian: the partner computation performs the same additions in the
/// opposite order and conjugation is exact.
pub fn enforce_hermitian(f: &SpectralField) -> SpectralField {
    let lattice = &f.lattice;
    let coeffs = (0..f.coeffs.len())
        .map(|i| {
            let a = &f.coeffs[i];
            let b = &f.coeffs[lattice.mirror(i)];
            [
                (a[0] + b[0].conj()) * 0.5,
                (a[1] + b[1].conj()) * 0.5,
                (a[2] + b[2].conj()) * 0.5,
            ]
        })
        .collect();
    SpectralField {
        lattice: Arc::clone(lattice),
        coeffs,
        solenoidal: f.solenoidal,
    }
}

/// Galerkin advection tendency
/// `-i sum_k (v_k . (n - k)) [P_n] v_{n-k}` on the retained modes.
///
/// Evaluated with zero-padded transforms on a grid of at least `3N + 1`
/// points per axis, which makes the result equal to the exact truncated
/// convolution. Real physical fields are packed in pairs into single complex
/// transforms.
pub fn nonlinear_term(f: &SpectralField, apply_projection: bool) -> SpectralField {
    let lattice = Arc::clone(&f.lattice);
    let fft = &lattice.fft;
    let volume = fft.volume();
    let zero = Complex64::new(0.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);

    // spectral coefficient of real field k: 0..3 velocity, 3 + 3c + d the
    // gradient component d/dx_d of v_c
    let spectral = |k: usize, i: usize| -> Complex64 {
        let v = &f.coeffs[i];
        if k < 3 {
            v[k]
        } else {
            let c = (k - 3) / 3;
            let d = (k - 3) % 3;
            i_unit * v[c] * lattice.mode(i)[d] as f64
        }
    };

    let mut physical: Vec<Vec<f64>> = Vec::with_capacity(12);
    let mut buffer = vec![zero; volume];
    for pair in 0..6 {
        buffer.iter_mut().for_each(|z| *z = zero);
        let (ka, kb) = (2 * pair, 2 * pair + 1);
        for (i, &g) in lattice.grid_index.iter().enumerate() {
            buffer[g] = spectral(ka, i) + i_unit * spectral(kb, i);
        }
        fft.inverse(&mut buffer);
        physical.push(buffer.iter().map(|z| z.re).collect());
        physical.push(buffer.iter().map(|z| z.im).collect());
    }

    // advection a_c = sum_d u_d du_c/dx_d
    let advect = |c: usize, x: usize| -> f64 {
        physical[0][x] * physical[3 + 3 * c][x]
            + physical[1][x] * physical[3 + 3 * c + 1][x]
            + physical[2][x] * physical[3 + 3 * c + 2][x]
    };

    let norm = 1.0 / volume as f64;
    let mut out = vec![ZERO3; lattice.len()];

    let mut packed = vec![zero; volume];
    for (x, z) in packed.iter_mut().enumerate() {
        *z = Complex64::new(advect(0, x), advect(1, x));
    }
    fft.forward(&mut packed);
    for (i, slot) in out.iter_mut().enumerate() {
        let x = packed[lattice.grid_index[i]];
        let y = packed[lattice.grid_index[lattice.mirror(i)]].conj();
        slot[0] = (x + y) * (0.5 * norm);
        slot[1] = (x - y) * (-0.5 * norm) * i_unit;
    }

    for (x, z) in packed.iter_mut().enumerate() {
        *z = Complex64::new(advect(2, x), 0.0);
    }
    fft.forward(&mut packed);
    for (i, slot) in out.iter_mut().enumerate() {
        slot[2] = packed[lattice.grid_index[i]] * norm;
    }

    for (i, slot) in out.iter_mut().enumerate() {
        let tendency = [-slot[0], -slot[1], -slot[2]];
        *slot = if apply_projection {
            project_mode(&tendency, &lattice.mode(i), lattice.magnitude_sq(i))
        } else {
            tendency
        };
    }

    let raw = SpectralField {
        lattice: Arc::clone(&lattice),
        coeffs: out,
        solenoidal: apply_projection,
    };
    let mut result = enforce_hermitian(&raw);
    if !apply_projection {
        result.solenoidal = result.scaled_divergence() <= SOLENOIDAL_TOL;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mode_counts() {
        assert_eq!(enumerate_modes(1).unwrap().len(), 26);
        assert_eq!(enumerate_modes(2).unwrap().len(), 124);
        assert!(matches!(enumerate_modes(0), Err(Error::Config(_))));
    }

    #[test]
    fn modes_closed_under_negation_and_mirror_index() {
        let lattice = Lattice::new(3).unwrap();
        for (i, m) in lattice.modes().iter().enumerate() {
            let neg = [-m[0], -m[1], -m[2]];
            assert_eq!(lattice.index_of(neg), Some(lattice.mirror(i)));
            assert_eq!(lattice.index_of(*m), Some(i));
        }
        assert_eq!(lattice.index_of([0, 0, 0]), None);
        assert_eq!(lattice.index_of([4, 0, 0]), None);
    }

    #[test]
    fn projection_examples() {
        let lattice = Lattice::new(1).unwrap();
        let v = [c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)];
        let p = project_mode(&v, &[1, 0, 0], 1.0);
        assert_eq!(p, [c(0.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);

        let parallel = [c(2.0, 1.0), c(2.0, 1.0), c(0.0, 0.0)];
        let p = project_mode(&parallel, &[1, 1, 0], 2.0);
        assert!(vec_norm_sqr(&p) < 1e-30);

        let field = SpectralField::from_fn(Arc::clone(&lattice), |m| {
            [c(m[1] as f64, 0.5), c(-(m[0] as f64), 0.25), c(m[2] as f64, 0.0)]
        });
        let once = project_solenoidal(&field);
        let twice = project_solenoidal(&once);
        assert!(once.max_difference(&twice).unwrap() < 1e-15);
        assert!(once.is_solenoidal());
        for (a, b) in field.coeffs().iter().zip(once.coeffs()) {
            assert!(vec_norm_sqr(b) <= vec_norm_sqr(a) * (1.0 + 1e-15));
        }
    }

    #[test]
    fn hermitian_enforcement() {
        let lattice = Lattice::new(1).unwrap();
        let i = lattice.index_of([1, 0, 0]).unwrap();
        let mut coeffs = vec![ZERO3; lattice.len()];
        coeffs[i] = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)];
        let f = SpectralField::from_coeffs(Arc::clone(&lattice), coeffs).unwrap();
        let h = enforce_hermitian(&f);
        assert_eq!(h.coeff([1, 0, 0]).unwrap()[0], c(0.5, 0.0));
        assert_eq!(h.coeff([-1, 0, 0]).unwrap()[0], c(0.5, 0.0));
        assert!(h.is_hermitian());
        let hh = enforce_hermitian(&h);
        assert_eq!(h.coeffs(), hh.coeffs());
    }

    #[test]
    fn shear_mode_has_no_advection() {
        // v = (0, cos x1, 0)
        let lattice = Lattice::new(2).unwrap();
        let f = SpectralField::from_fn(Arc::clone(&lattice), |m| {
            if m == [1, 0, 0] || m == [-1, 0, 0] {
                [c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)]
            } else {
                ZERO3
            }
        });
        for projection in [true, false] {
            let nl = nonlinear_term(&f, projection);
            assert!(nl.max_modulus() < 1e-15);
        }
    }

    #[test]
    fn nonlinear_term_is_hermitian_and_solenoidal() {
        let lattice = Lattice::new(2).unwrap();
        let raw = SpectralField::from_fn(Arc::clone(&lattice), |m| {
            let t = (m[0] * 7 + m[1] * 3 - m[2]) as f64;
            [c(t.sin(), t.cos()), c((2.0 * t).cos(), 0.1), c(0.3, (0.5 * t).sin())]
        });
        let f = project_solenoidal(&enforce_hermitian(&raw));
        let nl = nonlinear_term(&f, true);
        assert!(nl.is_hermitian());
        assert!(nl.divergence_defect() < 1e-13);
    }
}
