//! Independent reference computations shared by the integration tests.
//! Nothing here calls the FFT path, the root finders or the lattice-sum
//! machinery of the library.
#![allow(dead_code)]

use std::sync::Arc;

use gevrey::lattice::{Lattice, SpectralField, Vec3c, ZERO3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dot_mode(v: &Vec3c, m: [i32; 3]) -> Complex64 {
    v[0] * m[0] as f64 + v[1] * m[1] as f64 + v[2] * m[2] as f64
}

fn project(v: Vec3c, n: [i32; 3]) -> Vec3c {
    let n_sq = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) as f64;
    let along = dot_mode(&v, n) / n_sq;
    [
        v[0] - along * n[0] as f64,
        v[1] - along * n[1] as f64,
        v[2] - along * n[2] as f64,
    ]
}

/// Random Hermitian field with `|v_n| ~ e^{-decay |n|}`, optionally projected.
pub fn random_field(lattice: &Arc<Lattice>, rng: &mut ChaCha8Rng, decay: f64, solenoidal: bool) -> SpectralField {
    let mut coeffs = vec![ZERO3; lattice.len()];
    for (idx, mode) in lattice.modes().iter().enumerate() {
        let partner = lattice.mirror(idx);
        if idx > partner {
            continue;
        }
        let scale = (-decay * lattice.magnitude(idx)).exp();
        let mut v: Vec3c = std::array::from_fn(|_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale
        });
        if solenoidal {
            v = project(v, *mode);
        }
        coeffs[idx] = v;
        coeffs[partner] = v.map(|z| z.conj());
    }
    SpectralField::from_coeffs(Arc::clone(lattice), coeffs).unwrap()
}

/// `-i sum_{k + m = n} (v_k . m) v_m`, projected when asked, by direct
/// double loop over the retained modes.
pub fn brute_force_advection(f: &SpectralField, projected: bool) -> Vec<Vec3c> {
    let lattice = f.lattice();
    let minus_i = Complex64::new(0.0, -1.0);
    lattice
        .modes()
        .iter()
        .map(|&n| {
            let mut acc = ZERO3;
            for (k_idx, &k) in lattice.modes().iter().enumerate() {
                let m = [n[0] - k[0], n[1] - k[1], n[2] - k[2]];
                let Some(m_idx) = lattice.index_of(m) else { continue };
                let weight = dot_mode(&f.coeffs()[k_idx], m);
                for c in 0..3 {
                    acc[c] += minus_i * weight * f.coeffs()[m_idx][c];
                }
            }
            if projected {
                project(acc, n)
            } else {
                acc
            }
        })
        .collect()
}

/// Plain left-to-right evaluation of `sqrt(sum |v_n|^2 e^{2 sigma |n|} w(|n|))`.
pub fn naive_norm(f: &SpectralField, sigma: f64, weight: impl Fn(f64) -> f64) -> f64 {
    let lattice = f.lattice();
    let mut total = 0.0;
    for (idx, v) in f.coeffs().iter().enumerate() {
        let r = lattice.magnitude(idx);
        let mass: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        total += mass * (2.0 * sigma * r).exp() * weight(r);
    }
    total.sqrt()
}

pub fn naive_sobolev(f: &SpectralField, q: f64) -> f64 {
    naive_norm(f, 0.0, |r| r.powf(2.0 * q))
}

pub fn naive_triple(f: &SpectralField, sigma: f64, alpha: f64, s: f64) -> f64 {
    naive_norm(f, sigma, |r| (1.0 + alpha * alpha * r.powf(2.0 * s)) * r)
}

/// Plain bisection for the root of an increasing function on `[lo, hi]`.
pub fn bisect(mut lo: f64, mut hi: f64, g: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Root of `psi * norm(psi)^eps = beta`, found by bracket expansion and
/// bisection.
pub fn bisect_psi(beta: f64, epsilon: f64, norm: impl Fn(f64) -> f64) -> f64 {
    let g = |psi: f64| psi * norm(psi).powf(epsilon) - beta;
    let mut hi = beta / norm(0.0).powf(epsilon);
    while g(hi) < 0.0 {
        hi *= 2.0;
    }
    bisect(0.0, hi, g)
}

/// Simpson's rule on `[0, 1]^2` with `2k` panels per axis.
fn simpson_square(k: usize, f: impl Fn(f64, f64) -> f64) -> f64 {
    let n = 2 * k;
    let h = 1.0 / n as f64;
    let weight = |i: usize| {
        if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let mut total = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            total += weight(i) * weight(j) * f(i as f64 * h, j as f64 * h);
        }
    }
    total * h * h / 9.0
}

/// `sum_{0 < |n|_inf <= m} |n|^{-3-2s}` by enumeration of the positive
/// octant with multiplicities, plus the integral of `|x|^{-3-2s}` over
/// `|x|_inf > m + 1/2` evaluated with Simpson's rule on a cube face.
pub fn brute_force_cs(s: f64, m: i64) -> f64 {
    let a = 3.0 + 2.0 * s;
    let mut partial = 0.0;
    for x in 0..=m {
        for y in 0..=m {
            for z in 0..=m {
                if x == 0 && y == 0 && z == 0 {
                    continue;
                }
                let mult = [x, y, z].iter().filter(|&&c| c != 0).count();
                let r2 = (x * x + y * y + z * z) as f64;
                partial += (1u32 << mult) as f64 * r2.powf(-a / 2.0);
            }
        }
    }
    let face = simpson_square(200, |u, v| (1.0 + u * u + v * v).powf(-a / 2.0));
    let l = m as f64 + 0.5;
    let tail = 24.0 * face / (a - 3.0) * l.powf(3.0 - a);
    (partial + tail).sqrt()
}

pub fn max_abs_diff(a: &[Vec3c], b: &[Vec3c]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| (0..3).map(move |c| (x[c] - y[c]).norm()))
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &[Vec3c]) -> f64 {
    a.iter().flat_map(|x| x.iter().map(|z| z.norm())).fold(0.0, f64::max)
}
