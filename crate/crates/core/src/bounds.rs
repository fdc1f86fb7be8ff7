//! Closed-form constants and bound envelopes for the five Gevrey–Sobolev
//! estimates, and certification of computed trajectories against them.
//!
//! Every envelope depends on Sobolev embedding constants `C_q` for
//! `|f|_{6/(3-2q)} <= C_q ||f||_q` and on the lattice sum
//! `c_s = (sum_{n != 0} |n|^{-3-2s})^{1/2}`. Embedding constants are
//! configuration: each carries a provenance string that is echoed into every
//! report. The default is a bound that is rigorous for fields supported on
//! the truncated lattice `max_i |n_i| <= N` (Hausdorff–Young followed by
//! Hölder over the retained modes):
//!
//! `C_q(N) = (2 pi)^{(3 - 2q)/2} S_N^{q/3}`, `S_N = sum_{0 < |n|_inf <= N} |n|^{-3}`.
//!
//! It grows like `(ln N)^{q/3}`, so it is only meaningful for the stated
//! truncation.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::dynamics::RunSeries;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, SpectralField};
use crate::norms::{pairwise_sum, sobolev_norm, triple_norm, TripleNormParams};
use crate::xform::{beta_threshold, TransformSpec};

/// Default tail tolerance for `c_s`.
pub const CS_TAIL_TOL: f64 = 1e-8;

const PARAM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantRecord {
    pub name: String,
    pub value: f64,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingOverride {
    pub q: f64,
    pub value: f64,
    pub provenance: String,
}

/// Embedding constants and lattice sums used by the envelopes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundConstants {
    truncation: usize,
    inverse_cube_sum: f64,
    overrides: Vec<EmbeddingOverride>,
    cs_tail_tol: f64,
}

impl BoundConstants {
    /// Defaults valid for fields on the lattice of truncation radius `n`.
    pub fn for_truncation(n: usize) -> Result<Self> {
        let lattice = Lattice::new(n)?;
        let terms: Vec<f64> = lattice.magnitudes().iter().map(|r| r.powi(-3)).collect();
        Ok(Self {
            truncation: n,
            inverse_cube_sum: pairwise_sum(&terms),
            overrides: Vec::new(),
            cs_tail_tol: CS_TAIL_TOL,
        })
    }

    pub fn with_override(mut self, q: f64, value: f64, provenance: impl Into<String>) -> Result<Self> {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::Parameter(format!("C_{q} must be positive, got {value}")));
        }
        let provenance = provenance.into();
        if provenance.trim().is_empty() {
            return Err(Error::Parameter(format!("C_{q} override needs a provenance note")));
        }
        self.overrides.retain(|o| (o.q - q).abs() > PARAM_TOL);
        self.overrides.push(EmbeddingOverride { q, value, provenance });
        Ok(self)
    }

    pub fn with_cs_tail_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::Parameter(format!("tail tolerance must lie in (0, 1), got {tol}")));
        }
        self.cs_tail_tol = tol;
        Ok(self)
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn overrides(&self) -> &[EmbeddingOverride] {
        &self.overrides
    }

    /// `C_q` with its provenance.
    pub fn embedding(&self, q: f64) -> Result<ConstantRecord> {
        if !(q >= -PARAM_TOL && q < 1.5) {
            return Err(Error::Parameter(format!(
                "embedding constant C_q needs 0 <= q < 3/2, got {q}"
            )));
        }
        let q = q.max(0.0);
        if let Some(o) = self.overrides.iter().find(|o| (o.q - q).abs() <= PARAM_TOL) {
            return Ok(ConstantRecord {
                name: format!("C_{}", o.q),
                value: o.value,
                provenance: o.provenance.clone(),
            });
        }
        Ok(ConstantRecord {
            name: format!("C_{q}"),
            value: truncated_embedding_constant(q, self.inverse_cube_sum),
            provenance: format!(
                "lattice Hausdorff-Young/Hölder bound (2pi)^((3-2q)/2) * S_N^(q/3) \
                 for truncation N = {}, S_N = {:.17e}",
                self.truncation, self.inverse_cube_sum
            ),
        })
    }

    /// `c_s`, cached per `(s, tail tolerance)`.
    pub fn cs(&self, s: f64) -> Result<ConstantRecord> {
        let sum = cached_lattice_sum(s, self.cs_tail_tol)?;
        Ok(ConstantRecord {
            name: format!("c_s(s={s})"),
            value: sum.value,
            provenance: format!(
                "sqrt of sum over Z^3 minus origin: partial sum to |n|_inf <= {} plus \
                 Euler-Maclaurin tail {:.6e}, estimated remainder {:.3e} (tail tol {:e})",
                sum.cutoff, sum.tail, sum.remainder, self.cs_tail_tol
            ),
        })
    }
}

/// `(2 pi)^{(3 - 2q)/2} S^{q/3}` for a given `S = sum |n|^{-3}`.
pub fn truncated_embedding_constant(q: f64, inverse_cube_sum: f64) -> f64 {
    (2.0 * PI).powf((3.0 - 2.0 * q) / 2.0) * inverse_cube_sum.powf(q / 3.0)
}

// ---------------------------------------------------------------------------
// lattice sum c_s

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    /// `c_s` itself (square root of the sum).
    pub value: f64,
    /// Partial sums run over `max_i |n_i| <= cutoff`.
    pub cutoff: usize,
    pub partial: f64,
    pub tail: f64,
    /// Estimated size of the neglected Euler–Maclaurin remainder.
    pub remainder: f64,
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut derivative = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            derivative = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / derivative;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        rule.push((0.5 * (x + 1.0), 0.5 * w));
    }
    rule
}

/// `int_{|x|_inf > 1} |x|^{-b} dx` for `b > 3`, via the cube-surface
/// factorisation `24 / (b - 3) * int_0^1 int_0^1 (1 + u^2 + v^2)^{-b/2}`.
fn cube_exterior_integral(b: f64) -> f64 {
    let rule = gauss_legendre_unit(32);
    let mut face = 0.0;
    for &(u, wu) in &rule {
        for &(v, wv) in &rule {
            face += wu * wv * (1.0 + u * u + v * v).powf(-b / 2.0);
        }
    }
    24.0 * face / (b - 3.0)
}

/// Sum of `|n|^{-a}` over the shell `max_i |n_i| = m`, using the 48-fold
/// symmetry of the cube.
fn shell_sum(m: usize, a: f64) -> f64 {
    let m = m as i64;
    let mut terms = Vec::new();
    // representatives m = n1 >= n2 >= n3 >= 0
    for n2 in 0..=m {
        for n3 in 0..=n2 {
            let r2 = (m * m + n2 * n2 + n3 * n3) as f64;
            let zeros = (n2 == 0) as u32 + (n3 == 0) as u32;
            let distinct = match (m == n2, n2 == n3) {
                (true, true) => 1.0,
                (true, false) | (false, true) => 3.0,
                (false, false) => 6.0,
            };
            let signs = 2f64.powi(3 - zeros as i32);
            terms.push(distinct * signs * r2.powf(-a / 2.0));
        }
    }
    pairwise_sum(&terms)
}

/// `c_s = (sum_{n != 0} |n|^{-3-2s})^{1/2}`.
///
/// Exact shells are summed out to a cutoff `M`; the remaining region
/// `|x|_inf > M + 1/2` is exactly tiled by unit cells centred on the omitted
/// lattice points, so its contribution is `int f - (1/24) int lap f` up to a
/// fourth-order remainder. `M` is increased until the estimated remainder is
/// at most `tail_tol` times the partial sum.
pub fn lattice_sum_cs(s: f64, tail_tol: f64) -> Result<f64> {
    lattice_sum_cs_detailed(s, tail_tol).map(|sum| sum.value)
}

pub fn lattice_sum_cs_detailed(s: f64, tail_tol: f64) -> Result<LatticeSum> {
    if !(s > 0.0) {
        return Err(Error::DivergentSum { s });
    }
    if !(tail_tol > 0.0) {
        return Err(Error::Parameter(format!("tail tolerance must be positive, got {tail_tol}")));
    }
    let a = 3.0 + 2.0 * s;
    let k0 = cube_exterior_integral(a);
    let k2 = cube_exterior_integral(a + 2.0);
    let k4 = cube_exterior_integral(a + 4.0);
    let laplacian = a * (a - 1.0) / 24.0;
    let fourth = a * (a - 1.0) * (a + 1.0) * (a + 2.0) / 100.0;

    let mut partial = 0.0;
    let mut compensation = 0.0;
    let mut m = 0usize;
    loop {
        m += 1;
        // Kahan accumulation of shell sums
        let y = shell_sum(m, a) - compensation;
        let t = partial + y;
        compensation = (t - partial) - y;
        partial = t;
        if m < 8 {
            continue;
        }
        let l = m as f64 + 0.5;
        let remainder = fourth * k4 * l.powf(-2.0 * s - 4.0);
        if remainder <= tail_tol * partial || m >= 100_000 {
            let tail = k0 * l.powf(-2.0 * s) - laplacian * k2 * l.powf(-2.0 * s - 2.0);
            return Ok(LatticeSum {
                value: (partial + tail).sqrt(),
                cutoff: m,
                partial,
                tail,
                remainder,
            });
        }
    }
}

fn cached_lattice_sum(s: f64, tail_tol: f64) -> Result<LatticeSum> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), LatticeSum>>> = OnceLock::new();
    let key = (s.to_bits(), tail_tol.to_bits());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(*hit);
    }
    let sum = lattice_sum_cs_detailed(s, tail_tol)?;
    cache.lock().expect("cache poisoned").insert(key, sum);
    Ok(sum)
}

// ---------------------------------------------------------------------------
// closed-form constants

/// `A = 2 beta eps / (2 - eps)`.
pub fn amplitude_a(beta: f64, epsilon: f64) -> f64 {
    2.0 * beta * epsilon / (2.0 - epsilon)
}

/// `theta = (1 + eps) / (2 - eps)`.
pub fn theta(epsilon: f64) -> f64 {
    (1.0 + epsilon) / (2.0 - epsilon)
}

/// `D_s = (c_s + C_1 C_{1/2}) / (4 pi^3)`.
pub fn d_s(c_s: f64, c_1: f64, c_half: f64) -> f64 {
    (c_s + c_1 * c_half) / (4.0 * PI.powi(3))
}

/// `t* = (D_s theta)^{-1} A^{3/(2-eps)} xi0^{-theta}`.
pub fn thm1_horizon_from(d_s: f64, epsilon: f64, a: f64, xi0: f64) -> f64 {
    let th = theta(epsilon);
    a.powf(3.0 / (2.0 - epsilon)) * xi0.powf(-th) / (d_s * th)
}

/// `kappa = min(1, (s - 1/eps) / (1 - s))`.
pub fn kappa(s: f64, epsilon: f64) -> f64 {
    ((s - 1.0 / epsilon) / (1.0 - s)).min(1.0)
}

/// `Q_1`: zero when `beta <= eta2 / alpha^2`, otherwise
/// `beta (1 - 2s) / (2 (1 - s)) * (beta alpha^2 / (2 eta2 (1 - s)))^{1/(1-2s)}`.
pub fn q1(beta: f64, alpha: f64, eta2: f64, s: f64) -> f64 {
    if beta <= eta2 / (alpha * alpha) {
        0.0
    } else {
        beta * (1.0 - 2.0 * s) / (2.0 * (1.0 - s))
            * (beta * alpha * alpha / (2.0 * eta2 * (1.0 - s))).powf(1.0 / (1.0 - 2.0 * s))
    }
}

/// `Q_2 = 2 (2g - 1) ((5 - 2g) / eta3)^{(5-2g)/(2g-1)} (C_g C_{1/2} C_{1-g} / (4 (2pi)^3))^{4/(2g-1)}`.
pub fn q2(gamma: f64, eta3: f64, c_gamma: f64, c_half: f64, c_one_minus_gamma: f64) -> f64 {
    let k = 2.0 * gamma - 1.0;
    let embed = c_gamma * c_half * c_one_minus_gamma / (4.0 * (2.0 * PI).powi(3));
    2.0 * k * ((5.0 - 2.0 * gamma) / eta3).powf((5.0 - 2.0 * gamma) / k) * embed.powf(4.0 / k)
}

/// `q = max(beta^2 / (2 eta1), 2 Q_1)`.
pub fn rate_q(beta: f64, eta1: f64, q1: f64) -> f64 {
    (beta * beta / (2.0 * eta1)).max(2.0 * q1)
}

/// `t* = ((2g - 1) / (2q)) ln(1 + q / (Q_2 xi0^{1/(g - 1/2)}))`, with the
/// `q -> 0` limit `(g - 1/2) / (Q_2 xi0^{1/(g - 1/2)})`.
pub fn thm5_horizon_from(gamma: f64, q: f64, q2: f64, xi0: f64) -> f64 {
    let h = gamma - 0.5;
    let denom = q2 * xi0.powf(1.0 / h);
    if q == 0.0 {
        h / denom
    } else {
        (2.0 * gamma - 1.0) / (2.0 * q) * (q / denom).ln_1p()
    }
}

/// `phi(t) = e^{qt} (xi0^{-1/h} - (Q_2/q)(e^{qt/h} - 1))^{-h}`, `h = g - 1/2`.
pub fn thm5_phi_from(gamma: f64, q: f64, q2: f64, xi0: f64, t: f64) -> f64 {
    let h = gamma - 0.5;
    let growth = if q == 0.0 { q2 * t / h } else { q2 / q * (q * t / h).exp_m1() };
    (q * t).exp() * (xi0.powf(-1.0 / h) - growth).powf(-h)
}

fn require(cond: bool, message: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Parameter(message()))
    }
}

fn positive(name: &str, x: f64) -> Result<()> {
    require(x > 0.0 && x.is_finite(), || format!("{name} must be positive, got {x}"))
}

// ---------------------------------------------------------------------------
// theorem parameters

/// Euler / inviscid Burgers, finite-time bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm1Params {
    pub s: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub a: f64,
    pub theta: f64,
    pub d_s: f64,
    pub constants: Vec<ConstantRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm1Envelope {
    pub phi: f64,
    pub sigma_index: f64,
}

impl Thm1Params {
    pub fn new(s: f64, beta: f64, epsilon: f64, constants: &BoundConstants) -> Result<Self> {
        require(s > 0.0 && s <= 0.5 + PARAM_TOL, || format!("Theorem 1 needs 0 < s <= 1/2, got {s}"))?;
        positive("beta", beta)?;
        require(epsilon > 0.0 && epsilon < 2.0, || {
            format!("Theorem 1 needs 0 < epsilon < 2, got {epsilon}")
        })?;
        let cs = constants.cs(s)?;
        let c1 = constants.embedding(1.0)?;
        let chalf = constants.embedding(0.5)?;
        Ok(Self {
            s,
            beta,
            epsilon,
            a: amplitude_a(beta, epsilon),
            theta: theta(epsilon),
            d_s: d_s(cs.value, c1.value, chalf.value),
            constants: vec![cs, c1, chalf],
        })
    }

    pub fn horizon(&self, xi0: f64) -> f64 {
        thm1_horizon_from(self.d_s, self.epsilon, self.a, xi0)
    }

    /// `xi0 = ||w||_{1+s}^2 + A ||w||_{s+3/2}^{2-eps}`.
    pub fn xi(&self, w: &SpectralField) -> f64 {
        sobolev_norm(w, 1.0 + self.s).powi(2)
            + self.a * sobolev_norm(w, self.s + 1.5).powf(2.0 - self.epsilon)
    }

    fn check_horizon(&self, xi0: f64, t: f64) -> Result<()> {
        let t_star = self.horizon(xi0);
        if t >= t_star {
            Err(Error::Horizon { t, t_star })
        } else {
            Ok(())
        }
    }

    /// `xi(t) <= (xi0^{-theta} - D_s theta A^{-3/(2-eps)} t)^{-1/theta}`.
    pub fn xi_bound(&self, xi0: f64, t: f64) -> Result<f64> {
        self.check_horizon(xi0, t)?;
        let rate = self.d_s * self.theta * self.a.powf(-3.0 / (2.0 - self.epsilon));
        Ok((xi0.powf(-self.theta) - rate * t).powf(-1.0 / self.theta))
    }

    /// `phi(t) = ((A/xi0)^theta - D_s theta t / A)^{-1/(1+eps)}` and the strip
    /// width `beta phi^{-eps}`.
    pub fn envelope(&self, xi0: f64, t: f64) -> Result<Thm1Envelope> {
        self.check_horizon(xi0, t)?;
        let base = (self.a / xi0).powf(self.theta) - self.d_s * self.theta * t / self.a;
        let phi = base.powf(-1.0 / (1.0 + self.epsilon));
        Ok(Thm1Envelope {
            phi,
            sigma_index: self.beta * phi.powf(-self.epsilon),
        })
    }
}

/// Envelope of the two global-in-time Voigt estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoigtEnvelope {
    pub phi: f64,
    pub norm_bound: f64,
    pub sigma_index: f64,
}

/// Euler–Voigt, global bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm2Params {
    pub zeta: f64,
    pub s: f64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub a: f64,
    pub d: f64,
    pub constants: Vec<ConstantRecord>,
}

impl Thm2Params {
    pub fn new(zeta: f64, s: f64, alpha: f64, beta: f64, constants: &BoundConstants) -> Result<Self> {
        require(zeta > 0.0 && zeta <= 1.0 / 6.0 + PARAM_TOL, || {
            format!("Theorem 2 needs 0 < zeta <= 1/6, got {zeta}")
        })?;
        require(s >= 5.0 / 6.0 + zeta - PARAM_TOL, || {
            format!("Theorem 2 needs s >= 5/6 + zeta, got s = {s}, zeta = {zeta}")
        })?;
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        let ca = constants.embedding(5.0 / 6.0 + zeta)?;
        let cb = constants.embedding(1.0 / 3.0 - zeta / 2.0)?;
        let epsilon = 2.0 - 6.0 * zeta;
        Ok(Self {
            zeta,
            s,
            alpha,
            beta,
            epsilon,
            a: amplitude_a(beta, epsilon),
            d: beta * ca.value * cb.value * cb.value * (PI * alpha).powi(-3) / 4.0,
            constants: vec![ca, cb],
        })
    }

    fn exponential_branch(&self) -> bool {
        (self.zeta - 1.0 / 6.0).abs() <= PARAM_TOL
    }

    /// `xi = ||w||_0^2 + alpha^2 ||w||_s^2 + A |||w|||^{6 zeta}`.
    pub fn xi(&self, w: &SpectralField) -> f64 {
        let triple = triple_norm(w, TripleNormParams { alpha: self.alpha, s: self.s });
        sobolev_norm(w, 0.0).powi(2)
            + self.alpha * self.alpha * sobolev_norm(w, self.s).powi(2)
            + self.a * triple.powf(6.0 * self.zeta)
    }

    /// Polynomial bound for `zeta < 1/6`, exponential for `zeta = 1/6`.
    pub fn phi(&self, xi0: f64, t: f64) -> f64 {
        if self.exponential_branch() {
            return xi0 * (self.d * t).exp();
        }
        let p = 0.5 - 3.0 * self.zeta;
        if xi0 == 0.0 {
            return (p * self.d * t).powf(1.0 / p);
        }
        // (xi0^p + p D t)^{1/p} written to stay accurate as p -> 0
        (xi0.ln() + (p * self.d * t * xi0.powf(-p)).ln_1p() / p).exp()
    }

    pub fn envelope(&self, xi0: f64, t: f64) -> VoigtEnvelope {
        let phi = self.phi(xi0, t);
        let ratio = phi / self.a;
        VoigtEnvelope {
            phi,
            norm_bound: ratio.powf(1.0 / (6.0 * self.zeta)),
            sigma_index: self.beta * ratio.powf(1.0 - 1.0 / (3.0 * self.zeta)),
        }
    }
}

/// NS–Voigt with `1/2 < s < 1`, global bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm3Params {
    pub s: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub a: f64,
    pub kappa: f64,
    pub d_s_eps: f64,
    pub d_prime: f64,
    pub constants: Vec<ConstantRecord>,
}

impl Thm3Params {
    pub fn new(
        s: f64,
        epsilon: f64,
        alpha: f64,
        beta: f64,
        nu: f64,
        constants: &BoundConstants,
    ) -> Result<Self> {
        require(s > 0.5 && s < 1.0, || format!("Theorem 3 needs 1/2 < s < 1, got {s}"))?;
        require(epsilon > 1.0 / s && epsilon < 2.0, || {
            format!("Theorem 3 needs 1/s < epsilon < 2, got epsilon = {epsilon}, s = {s}")
        })?;
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        positive("nu", nu)?;
        let c1 = constants.embedding(1.0)?;
        let c_one_minus_s = constants.embedding(1.0 - s)?;
        let c_s_minus_half = constants.embedding(s - 0.5)?;
        let k = kappa(s, epsilon);
        let d_s_eps = c1.value * c_one_minus_s.value * c_s_minus_half.value
            * (2.0 * beta).powf(1.0 / epsilon)
            * (2.0 * PI).powi(-3)
            / alpha;
        let d_prime = d_s_eps.powf(2.0 / k) * k / (2.0 * alpha * alpha)
            * ((2.0 - k) / (4.0 * nu)).powf((2.0 - k) / k);
        Ok(Self {
            s,
            epsilon,
            alpha,
            beta,
            nu,
            a: amplitude_a(beta, epsilon),
            kappa: k,
            d_s_eps,
            d_prime,
            constants: vec![c1, c_one_minus_s, c_s_minus_half],
        })
    }

    /// `xi = ||w||_0^2 + alpha^2 ||w||_s^2 + A |||w|||^{2-eps}`.
    pub fn xi(&self, w: &SpectralField) -> f64 {
        let triple = triple_norm(w, TripleNormParams { alpha: self.alpha, s: self.s });
        sobolev_norm(w, 0.0).powi(2)
            + self.alpha * self.alpha * sobolev_norm(w, self.s).powi(2)
            + self.a * triple.powf(2.0 - self.epsilon)
    }

    pub fn envelope(&self, xi0: f64, t: f64) -> VoigtEnvelope {
        let phi = xi0 * (self.d_prime * t).exp();
        let ratio = phi / self.a;
        VoigtEnvelope {
            phi,
            norm_bound: ratio.powf(1.0 / (2.0 - self.epsilon)),
            sigma_index: self.beta * ratio.powf(-self.epsilon / (2.0 - self.epsilon)),
        }
    }
}

/// NS–Voigt with critical damping `s = 1/2`, time-independent bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm4Params {
    pub alpha: f64,
    pub nu: f64,
    pub beta: f64,
    /// `2 nu^2 (2 pi)^6 C_{1/2}^{-2} C_1^{-2} alpha^4`
    pub beta_max: f64,
    pub constants: Vec<ConstantRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm4Envelope {
    pub norm_bound: f64,
    pub sigma_index: f64,
}

impl Thm4Params {
    pub fn new(alpha: f64, nu: f64, beta: f64, constants: &BoundConstants) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("nu", nu)?;
        positive("beta", beta)?;
        let chalf = constants.embedding(0.5)?;
        let c1 = constants.embedding(1.0)?;
        let beta_max = 2.0 * nu * nu * (2.0 * PI).powi(6) * alpha.powi(4)
            / (chalf.value * chalf.value * c1.value * c1.value);
        require(beta <= beta_max, || {
            format!("Theorem 4 needs beta <= {beta_max:.6e}, got {beta}")
        })?;
        Ok(Self {
            alpha,
            nu,
            beta,
            beta_max,
            constants: vec![chalf, c1],
        })
    }

    /// `xi = ||w||_0^2 + alpha^2 ||w||_{1/2}^2 + 4 beta ln(1 + |||w|||)`.
    pub fn xi(&self, w: &SpectralField) -> f64 {
        let triple = triple_norm(w, TripleNormParams { alpha: self.alpha, s: 0.5 });
        sobolev_norm(w, 0.0).powi(2)
            + self.alpha * self.alpha * sobolev_norm(w, 0.5).powi(2)
            + 4.0 * self.beta * triple.ln_1p()
    }

    pub fn envelope(&self, xi0: f64) -> Thm4Envelope {
        Thm4Envelope {
            norm_bound: (xi0 + 6.0 * self.beta).sqrt(),
            sigma_index: self.beta * (-xi0 / (2.0 * self.beta) - 3.0).exp(),
        }
    }
}

/// NS–Voigt with `0 < s <= 1/2`: instantaneous analyticity, finite horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thm5Params {
    pub s: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub eta: [f64; 3],
    pub q1: f64,
    pub q2: f64,
    pub q: f64,
    pub constants: Vec<ConstantRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thm5Envelope {
    pub phi: f64,
    pub sigma_index: f64,
}

impl Thm5Params {
    pub fn new(
        s: f64,
        gamma: f64,
        alpha: f64,
        nu: f64,
        beta: f64,
        eta: [f64; 3],
        constants: &BoundConstants,
    ) -> Result<Self> {
        require(s > 0.0 && s <= 0.5 + PARAM_TOL, || format!("Theorem 5 needs 0 < s <= 1/2, got {s}"))?;
        require(gamma > 0.5 && gamma <= 1.0, || {
            format!("Theorem 5 needs 1/2 < gamma <= 1, got {gamma}")
        })?;
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        for (i, e) in eta.iter().enumerate() {
            positive(&format!("eta{}", i + 1), *e)?;
        }
        let total: f64 = eta.iter().sum();
        require((total - nu).abs() <= PARAM_TOL * nu.max(1.0), || {
            format!("eta1 + eta2 + eta3 = {total} must equal nu = {nu}")
        })?;
        let critical = (s - 0.5).abs() <= PARAM_TOL;
        if critical {
            require(beta <= eta[1] / (alpha * alpha), || {
                format!(
                    "for s = 1/2 Theorem 5 needs beta <= eta2 / alpha^2 = {}, got {beta}",
                    eta[1] / (alpha * alpha)
                )
            })?;
        }
        let c_gamma = constants.embedding(gamma)?;
        let c_half = constants.embedding(0.5)?;
        let c_rest = constants.embedding(1.0 - gamma)?;
        let q1 = if critical { 0.0 } else { q1(beta, alpha, eta[1], s) };
        let q2 = q2(gamma, eta[2], c_gamma.value, c_half.value, c_rest.value);
        Ok(Self {
            s,
            gamma,
            alpha,
            beta,
            eta,
            q1,
            q2,
            q: rate_q(beta, eta[0], q1),
            constants: vec![c_gamma, c_half, c_rest],
        })
    }

    /// `xi = ||w||_gamma^2 + alpha^2 ||w||_{1/2+gamma}^2`.
    pub fn xi(&self, w: &SpectralField) -> f64 {
        sobolev_norm(w, self.gamma).powi(2)
            + self.alpha * self.alpha * sobolev_norm(w, 0.5 + self.gamma).powi(2)
    }

    pub fn horizon(&self, xi0: f64) -> f64 {
        thm5_horizon_from(self.gamma, self.q, self.q2, xi0)
    }

    pub fn envelope(&self, xi0: f64, t: f64) -> Result<Thm5Envelope> {
        let t_star = self.horizon(xi0);
        if t >= t_star {
            return Err(Error::Horizon { t, t_star });
        }
        Ok(Thm5Envelope {
            phi: thm5_phi_from(self.gamma, self.q, self.q2, xi0, t),
            sigma_index: self.beta * t,
        })
    }
}

// ---------------------------------------------------------------------------
// unified theorem view

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "theorem")]
pub enum Theorem {
    #[serde(rename = "1")]
    One(Thm1Params),
    #[serde(rename = "2")]
    Two(Thm2Params),
    #[serde(rename = "3")]
    Three(Thm3Params),
    #[serde(rename = "4")]
    Four(Thm4Params),
    #[serde(rename = "5")]
    Five(Thm5Params),
}

/// Right-hand side of a theorem's Gevrey–Sobolev inequality at time `t`:
/// `|||v(t)|||_{sigma_index, q} <= bound`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub bound: f64,
    pub sigma_index: f64,
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

fn named(name: &str, value: f64) -> NamedValue {
    NamedValue {
        name: name.to_string(),
        value,
    }
}

impl Theorem {
    pub fn id(&self) -> u8 {
        match self {
            Theorem::One(_) => 1,
            Theorem::Two(_) => 2,
            Theorem::Three(_) => 3,
            Theorem::Four(_) => 4,
            Theorem::Five(_) => 5,
        }
    }

    /// The change of variables whose transformed field defines `xi`.
    pub fn transform(&self) -> TransformSpec {
        match self {
            Theorem::One(p) => TransformSpec::FixedSobolev {
                beta: p.beta,
                epsilon: p.epsilon,
                s: p.s,
            },
            Theorem::Two(p) => TransformSpec::VoigtTriple {
                beta: p.beta,
                epsilon: p.epsilon,
                alpha: p.alpha,
                s: p.s,
            },
            Theorem::Three(p) => TransformSpec::VoigtTriple {
                beta: p.beta,
                epsilon: p.epsilon,
                alpha: p.alpha,
                s: p.s,
            },
            Theorem::Four(p) => TransformSpec::CriticalShift {
                beta: p.beta,
                alpha: p.alpha,
            },
            Theorem::Five(p) => TransformSpec::LinearInTime { beta: p.beta },
        }
    }

    /// Sobolev index of the monitored Gevrey norm.
    pub fn monitored_q(&self) -> f64 {
        match self {
            Theorem::One(p) => p.s + 1.5,
            Theorem::Two(_) | Theorem::Three(_) => 0.5,
            Theorem::Four(_) => 0.0,
            Theorem::Five(p) => p.gamma,
        }
    }

    /// Theorem-specific `xi` of the transformed field.
    pub fn xi(&self, w: &SpectralField) -> f64 {
        match self {
            Theorem::One(p) => p.xi(w),
            Theorem::Two(p) => p.xi(w),
            Theorem::Three(p) => p.xi(w),
            Theorem::Four(p) => p.xi(w),
            Theorem::Five(p) => p.xi(w),
        }
    }

    /// Finite horizon `t*`, or `None` for global bounds.
    pub fn horizon(&self, xi0: f64) -> Option<f64> {
        match self {
            Theorem::One(p) => Some(p.horizon(xi0)),
            Theorem::Five(p) => Some(p.horizon(xi0)),
            _ => None,
        }
    }

    pub fn envelope(&self, xi0: f64, t: f64) -> Result<Envelope> {
        let q = self.monitored_q();
        Ok(match self {
            Theorem::One(p) => {
                let e = p.envelope(xi0, t)?;
                Envelope { bound: e.phi, sigma_index: e.sigma_index, q }
            }
            Theorem::Two(p) => {
                let e = p.envelope(xi0, t);
                Envelope { bound: e.norm_bound, sigma_index: e.sigma_index, q }
            }
            Theorem::Three(p) => {
                let e = p.envelope(xi0, t);
                Envelope { bound: e.norm_bound, sigma_index: e.sigma_index, q }
            }
            Theorem::Four(p) => {
                let e = p.envelope(xi0);
                Envelope { bound: e.norm_bound, sigma_index: e.sigma_index, q }
            }
            Theorem::Five(p) => {
                let e = p.envelope(xi0, t)?;
                Envelope { bound: e.phi.sqrt(), sigma_index: e.sigma_index, q }
            }
        })
    }

    /// Enforces the strict admissibility condition on `beta` for an initial
    /// condition with finite Gevrey norm at strip width `sigma`.
    pub fn check_admissible(&self, v_in: &SpectralField, sigma: f64) -> Result<()> {
        if let Theorem::Five(_) = self {
            return Ok(());
        }
        let spec = self.transform();
        let threshold = beta_threshold(v_in, &spec, sigma)?;
        require(spec.beta() < threshold, || {
            format!(
                "Theorem {}: beta = {} is not admissible (need beta < {threshold:.6e} at sigma = {sigma})",
                self.id(),
                spec.beta()
            )
        })
    }

    pub fn parameters(&self) -> Vec<NamedValue> {
        match self {
            Theorem::One(p) => vec![named("s", p.s), named("beta", p.beta), named("epsilon", p.epsilon)],
            Theorem::Two(p) => vec![
                named("zeta", p.zeta),
                named("s", p.s),
                named("alpha", p.alpha),
                named("beta", p.beta),
            ],
            Theorem::Three(p) => vec![
                named("s", p.s),
                named("epsilon", p.epsilon),
                named("alpha", p.alpha),
                named("beta", p.beta),
                named("nu", p.nu),
            ],
            Theorem::Four(p) => vec![named("alpha", p.alpha), named("nu", p.nu), named("beta", p.beta)],
            Theorem::Five(p) => vec![
                named("s", p.s),
                named("gamma", p.gamma),
                named("alpha", p.alpha),
                named("beta", p.beta),
                named("eta1", p.eta[0]),
                named("eta2", p.eta[1]),
                named("eta3", p.eta[2]),
            ],
        }
    }

    pub fn derived(&self) -> Vec<NamedValue> {
        match self {
            Theorem::One(p) => vec![named("A", p.a), named("theta", p.theta), named("D_s", p.d_s)],
            Theorem::Two(p) => vec![named("epsilon", p.epsilon), named("A", p.a), named("D", p.d)],
            Theorem::Three(p) => vec![
                named("A", p.a),
                named("kappa", p.kappa),
                named("D_s_eps", p.d_s_eps),
                named("D_prime_s_eps", p.d_prime),
            ],
            Theorem::Four(p) => vec![named("beta_max", p.beta_max)],
            Theorem::Five(p) => vec![named("Q1", p.q1), named("Q2", p.q2), named("q", p.q)],
        }
    }

    pub fn constants(&self) -> &[ConstantRecord] {
        match self {
            Theorem::One(p) => &p.constants,
            Theorem::Two(p) => &p.constants,
            Theorem::Three(p) => &p.constants,
            Theorem::Four(p) => &p.constants,
            Theorem::Five(p) => &p.constants,
        }
    }

    pub fn notes(&self) -> Vec<String> {
        match self {
            Theorem::Five(p) if p.s < 0.5 - PARAM_TOL => vec![format!(
                "s = {} < 1/2: xi uses ||w||_(1/2+gamma) as defined for the bound, while the \
                 energy estimate involves ||w||_(gamma+s); the two coincide only at s = 1/2",
                p.s
            )],
            _ => Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// certification

pub const REPORT_SCHEMA: &str = "gevrey-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedWithinEnvelope,
    EnvelopeViolated,
    HorizonExceeded,
    IntegrationFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub t: f64,
    pub monitored: Option<f64>,
    /// `None` at or beyond the horizon.
    pub envelope: Option<f64>,
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub schema: String,
    pub theorem: u8,
    pub parameters: Vec<NamedValue>,
    pub derived: Vec<NamedValue>,
    pub constants: Vec<ConstantRecord>,
    pub monitored_q: f64,
    pub xi0: f64,
    pub t_star: Option<f64>,
    pub rows: Vec<CertificateRow>,
    pub min_margin: Option<f64>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }
}

/// Compares the monitored Gevrey norm (the series' `gevrey` column) with the
/// theorem's envelope at every sample. `xi0` is read from the first sample,
/// which must be at `t = 0`.
pub fn certify(series: &RunSeries, theorem: &Theorem) -> Result<BoundReport> {
    let first = series
        .samples
        .first()
        .ok_or_else(|| Error::ReportIncomplete("series has no samples".into()))?;
    if first.t != 0.0 {
        return Err(Error::ReportIncomplete(format!(
            "first sample must be at t = 0, found t = {}",
            first.t
        )));
    }
    let xi0 = first.xi;
    if !(xi0 >= 0.0 && xi0.is_finite()) {
        return Err(Error::ReportIncomplete(format!("xi at t = 0 is {xi0}")));
    }
    let t_star = theorem.horizon(xi0).filter(|t| t.is_finite());

    let mut rows = Vec::with_capacity(series.samples.len());
    let mut min_margin: Option<f64> = None;
    let mut beyond_horizon = false;
    for sample in &series.samples {
        if t_star.is_some_and(|ts| sample.t >= ts) {
            beyond_horizon = true;
            rows.push(CertificateRow {
                t: sample.t,
                monitored: sample.gevrey.is_finite().then_some(sample.gevrey),
                envelope: None,
                margin: None,
            });
            continue;
        }
        let envelope = theorem.envelope(xi0, sample.t)?.bound;
        if !sample.gevrey.is_finite() {
            return Err(Error::ReportIncomplete(format!(
                "monitored norm missing at t = {}",
                sample.t
            )));
        }
        let margin = envelope - sample.gevrey;
        min_margin = Some(min_margin.map_or(margin, |m: f64| m.min(margin)));
        rows.push(CertificateRow {
            t: sample.t,
            monitored: Some(sample.gevrey),
            envelope: Some(envelope),
            margin: Some(margin),
        });
    }

    let verdict = if rows.iter().any(|r| r.margin.is_some_and(|m| !(m >= 0.0))) {
        Verdict::EnvelopeViolated
    } else if !series.is_complete() {
        Verdict::IntegrationFailed
    } else if beyond_horizon {
        Verdict::HorizonExceeded
    } else {
        Verdict::CertifiedWithinEnvelope
    };

    Ok(BoundReport {
        schema: REPORT_SCHEMA.to_string(),
        theorem: theorem.id(),
        parameters: theorem.parameters(),
        derived: theorem.derived(),
        constants: theorem.constants().to_vec(),
        monitored_q: theorem.monitored_q(),
        xi0,
        t_star,
        rows,
        min_margin,
        verdict,
        notes: theorem.notes(),
    })
}
