//! Numeric Asymptotic Iteration Method.
//!
//! For `y'' = lambda_0(x) y' + s_0(x) y` the iteration
//!
//! ```text
//! lambda_k = lambda_{k-1}' + s_{k-1} + lambda_0 lambda_{k-1}
//! s_k      = s_{k-1}'      + s_0 lambda_{k-1}
//! ```
//!
//! is carried out on truncated Taylor series about a fixed point `x0`, so
//! differentiation is a coefficient shift and no symbolic algebra is needed.
//! Eigenvalues are zeros, in the spectral parameter, of the termination
//! function `delta_k = lambda_k s_{k-1} - lambda_{k-1} s_k` evaluated at `x0`.

use crate::closedform::{alpha2, angular_params, energy_from_epsilon, tau, EnergyLevel, Method};
use crate::error::{Error, Result};
use crate::model::{Molecule, NonCentralParams, PhysicalConstants};

/// Iterations beyond the target level used by the termination test.
pub const DEPTH_MARGIN: usize = 4;
/// Termination tolerance on the normalized `delta`.
pub const DELTA_TOL: f64 = 1e-12;
const MAX_BISECTIONS: usize = 200;

/// Truncated power series `sum_j c_j (x - x0)^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    pub x0: f64,
    pub coef: Vec<f64>,
}

impl TaylorSeries {
    pub fn constant(x0: f64, value: f64, order: usize) -> Self {
        let mut coef = vec![0.0; order];
        if order > 0 {
            coef[0] = value;
        }
        Self { x0, coef }
    }

    /// The identity function `x` about `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut s = Self::constant(x0, x0, order);
        if order > 1 {
            s.coef[1] = 1.0;
        }
        s
    }

    /// `x^k` for integer `k` (negative powers via the reciprocal).
    pub fn power(x0: f64, k: i32, order: usize) -> Self {
        if k < 0 {
            return Self::power(x0, -k, order)
                .reciprocal()
                .expect("x0 != 0 for negative powers");
        }
        let k = k as usize;
        let mut coef = vec![0.0; order];
        let mut binom = 1.0;
        for (j, c) in coef.iter_mut().enumerate().take(k + 1) {
            *c = binom * x0.powi((k - j) as i32);
            binom *= (k - j) as f64 / (j + 1) as f64;
        }
        Self { x0, coef }
    }

    pub fn len(&self) -> usize {
        self.coef.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coef.is_empty()
    }

    /// Value at the expansion point.
    pub fn value(&self) -> f64 {
        self.coef.first().copied().unwrap_or(0.0)
    }

    pub fn derivative(&self) -> Self {
        let coef = self
            .coef
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| j as f64 * c)
            .collect();
        Self { x0: self.x0, coef }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().min(other.len());
        Self {
            x0: self.x0,
            coef: (0..len).map(|j| self.coef[j] + other.coef[j]).collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            x0: self.x0,
            coef: self.coef.iter().map(|c| c * factor).collect(),
        }
    }

    /// Cauchy product truncated to the shorter length.
    pub fn mul(&self, other: &Self) -> Self {
        let len = self.len().min(other.len());
        let mut coef = vec![0.0; len];
        for (i, &a) in self.coef.iter().enumerate().take(len) {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coef.iter().enumerate().take(len - i) {
                coef[i + j] += a * b;
            }
        }
        Self { x0: self.x0, coef }
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.value();
        if c0 == 0.0 || !c0.is_finite() {
            return Err(Error::Domain(format!(
                "series reciprocal needs a non-zero constant term at x0 = {}",
                self.x0
            )));
        }
        let len = self.len();
        let mut inv = vec![0.0; len];
        inv[0] = 1.0 / c0;
        for j in 1..len {
            let acc: f64 = (1..=j).map(|i| self.coef[i] * inv[j - i]).sum();
            inv[j] = -acc / c0;
        }
        Ok(Self {
            x0: self.x0,
            coef: inv,
        })
    }
}

/// `lambda_0`, `s_0` and the iteration depth.
#[derive(Debug, Clone)]
pub struct AimProblem {
    pub lambda0: TaylorSeries,
    pub s0: TaylorSeries,
    pub depth: usize,
}

impl AimProblem {
    pub fn x0(&self) -> f64 {
        self.lambda0.x0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AimRecord {
    pub k: usize,
    pub lambda: f64,
    pub s: f64,
    /// `lambda_k s_{k-1} - lambda_{k-1} s_k` at `x0`.
    pub delta: f64,
    /// `delta / (|lambda_k s_{k-1}| + |lambda_{k-1} s_k|)`, 0 when both vanish.
    pub normalized_delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AimTrace {
    pub x0: f64,
    pub records: Vec<AimRecord>,
}

impl AimTrace {
    pub fn last(&self) -> &AimRecord {
        self.records.last().expect("trace has at least one record")
    }
}

/// Runs `depth` iterations and records `lambda_k`, `s_k`, `delta_k` at `x0`
/// for `k = 0..=depth` (`delta_0` is reported as 0).
pub fn iterate(problem: &AimProblem) -> Result<AimTrace> {
    let depth = problem.depth;
    let available = problem.lambda0.len().min(problem.s0.len());
    let needed = 2 * depth + 4;
    if available < needed {
        return Err(Error::TruncationExhausted { needed, available });
    }
    let lambda0 = &problem.lambda0;
    let s0 = &problem.s0;
    let mut records = Vec::with_capacity(depth + 1);
    records.push(AimRecord {
        k: 0,
        lambda: lambda0.value(),
        s: s0.value(),
        delta: 0.0,
        normalized_delta: 0.0,
    });
    let mut lambda = lambda0.clone();
    let mut s = s0.clone();
    for k in 1..=depth {
        let next_lambda = lambda.derivative().add(&s).add(&lambda0.mul(&lambda));
        let next_s = s.derivative().add(&s0.mul(&lambda));
        let forward = next_lambda.value() * s.value();
        let backward = lambda.value() * next_s.value();
        let delta = forward - backward;
        let scale = forward.abs() + backward.abs();
        let normalized_delta = if scale > 0.0 { delta / scale } else { 0.0 };
        if !normalized_delta.is_finite() {
            return Err(Error::Domain(format!(
                "non-finite AIM iterate at k = {k}, x0 = {}",
                lambda0.x0
            )));
        }
        records.push(AimRecord {
            k,
            lambda: next_lambda.value(),
            s: next_s.value(),
            delta,
            normalized_delta,
        });
        lambda = next_lambda;
        s = next_s;
    }
    Ok(AimTrace {
        x0: lambda0.x0,
        records,
    })
}

/// A one-parameter family of AIM problems (the parameter is the eigenvalue
/// being searched for).
pub trait SpectralFamily {
    fn problem(&self, param: f64) -> Result<AimProblem>;

    /// Normalized `delta` at full depth.
    fn termination(&self, param: f64) -> Result<f64> {
        Ok(iterate(&self.problem(param)?)?.last().normalized_delta)
    }
}

/// Sign changes of the termination function on `samples + 1` equally spaced
/// points of `[lo, hi]`, as ascending brackets.
pub fn scan_brackets<F: SpectralFamily + ?Sized>(
    family: &F,
    lo: f64,
    hi: f64,
    samples: usize,
) -> Result<Vec<(f64, f64)>> {
    let samples = samples.max(1);
    let step = (hi - lo) / samples as f64;
    let mut out = Vec::new();
    let mut prev_x = lo;
    let mut prev = family.termination(lo)?;
    for i in 1..=samples {
        let x = if i == samples {
            hi
        } else {
            lo + i as f64 * step
        };
        let d = family.termination(x)?;
        if prev == 0.0 {
            out.push((prev_x, prev_x));
        } else if prev.signum() != d.signum() && d != 0.0 {
            out.push((prev_x, x));
        }
        prev_x = x;
        prev = d;
    }
    if prev == 0.0 {
        out.push((prev_x, prev_x));
    }
    Ok(out)
}

/// Bisection for a zero of the termination function inside `[lo, hi]`.
pub fn eigenvalue_scan<F: SpectralFamily + ?Sized>(family: &F, lo: f64, hi: f64) -> Result<f64> {
    let mut lo = lo;
    let mut hi = hi;
    let mut f_lo = family.termination(lo)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    let f_hi = family.termination(hi)?;
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = family.termination(mid)?;
        if f_mid.abs() <= DELTA_TOL * 1e-3 || (hi - lo) <= 4.0 * f64::EPSILON * mid.abs() {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::MaxIterations(MAX_BISECTIONS))
}

/// Radial Kratzer problem in `x = r/a`, `R = x^tau e^{-eps x} F(x)`:
/// `F'' = 2(eps - tau/x) F' + 2(eps tau - alpha^2)/x F`, spectral parameter `eps`.
#[derive(Debug, Clone, Copy)]
pub struct RadialFamily {
    pub alpha2: f64,
    pub tau: f64,
    pub depth: usize,
    pub order: usize,
    /// Multiplies the default expansion point `tau / eps`.
    pub x0_scale: f64,
}

impl RadialFamily {
    pub fn new(alpha2: f64, l_eff: f64, depth: usize) -> Self {
        Self {
            alpha2,
            tau: tau(alpha2, l_eff),
            depth,
            order: 2 * depth + 8,
            x0_scale: 1.0,
        }
    }

    pub fn expansion_point(&self, eps: f64) -> f64 {
        let x0 = self.x0_scale * self.tau / eps;
        // lambda_0 vanishes at tau/eps
        let lambda0 = 2.0 * (eps - self.tau / x0);
        if lambda0.abs() < 1e-12 * eps.abs().max(1.0) {
            1.1 * x0
        } else {
            x0
        }
    }
}

impl SpectralFamily for RadialFamily {
    fn problem(&self, eps: f64) -> Result<AimProblem> {
        if !(eps > 0.0) {
            return Err(Error::Domain(format!(
                "epsilon must be positive, got {eps}"
            )));
        }
        let x0 = self.expansion_point(eps);
        let inv_x = TaylorSeries::power(x0, -1, self.order);
        let lambda0 =
            TaylorSeries::constant(x0, 2.0 * eps, self.order).add(&inv_x.scale(-2.0 * self.tau));
        let s0 = inv_x.scale(2.0 * (eps * self.tau - self.alpha2));
        Ok(AimProblem {
            lambda0,
            s0,
            depth: self.depth,
        })
    }
}

/// Polar problem in `x = cos(theta)` after factoring out the end-point
/// behaviour: `f'' = 2(eta + (kappa+1)x)/(1-x^2) f' + ((kappa+1/2)^2 - l'^2)/(1-x^2) f`,
/// spectral parameter `l' = l + 1/2`.
#[derive(Debug, Clone, Copy)]
pub struct AngularFamily {
    pub kappa: f64,
    pub eta: f64,
    pub depth: usize,
    pub order: usize,
    pub x0: f64,
}

impl AngularFamily {
    /// Expands about the peak `x = -eta/kappa` of the end-point factor
    /// (clamped to `[-0.95, 0.95]`). At `x = 0` the root scan loses several
    /// digits once `kappa` is large and `eta` close to it.
    pub fn new(kappa: f64, eta: f64, depth: usize) -> Self {
        let x0 = if kappa > 0.0 {
            (-eta / kappa).clamp(-0.95, 0.95)
        } else {
            0.0
        };
        Self {
            kappa,
            eta,
            depth,
            order: 2 * depth + 8,
            x0,
        }
    }
}

impl SpectralFamily for AngularFamily {
    fn problem(&self, l_prime: f64) -> Result<AimProblem> {
        let x0 = self.x0;
        let x = TaylorSeries::variable(x0, self.order);
        let one_minus_x2 = TaylorSeries::constant(x0, 1.0, self.order).add(&x.mul(&x).scale(-1.0));
        let inv = one_minus_x2.reciprocal()?;
        let numerator = TaylorSeries::constant(x0, 2.0 * self.eta, self.order)
            .add(&x.scale(2.0 * self.kappa + 2.0));
        let k = self.kappa + 0.5;
        Ok(AimProblem {
            lambda0: numerator.mul(&inv),
            s0: inv.scale(k * k - l_prime * l_prime),
            depth: self.depth,
        })
    }
}

/// Canonical exactly-solvable form
/// `y'' = 2(a x^{N+1}/(1 - b x^{N+2}) - (m+1)/x) y' - w x^N/(1 - b x^{N+2}) y`,
/// spectral parameter `w`.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalFamily {
    pub a: f64,
    pub b: f64,
    pub m: f64,
    pub big_n: i32,
    pub depth: usize,
    pub order: usize,
    pub x0: f64,
}

impl CanonicalFamily {
    /// Expands about `x0 = 0.5 |b|^{-1/(N+2)}`, halfway between the origin and
    /// the nearest zero of `1 - b x^{N+2}`.
    pub fn new(a: f64, b: f64, m: f64, big_n: i32, depth: usize) -> Result<Self> {
        if big_n < -1 {
            return Err(Error::InvalidParameter(format!(
                "N must be >= -1, got {big_n}"
            )));
        }
        if b == 0.0 {
            return Err(Error::InvalidParameter("b must be non-zero".into()));
        }
        let x0 = 0.5 * b.abs().powf(-1.0 / (big_n + 2) as f64);
        Ok(Self {
            a,
            b,
            m,
            big_n,
            depth,
            order: 2 * depth + 8,
            x0,
        })
    }
}

impl SpectralFamily for CanonicalFamily {
    fn problem(&self, w: f64) -> Result<AimProblem> {
        let (x0, order, n) = (self.x0, self.order, self.big_n);
        let denom = TaylorSeries::constant(x0, 1.0, order)
            .add(&TaylorSeries::power(x0, n + 2, order).scale(-self.b));
        let inv = denom.reciprocal()?;
        let lambda0 = TaylorSeries::power(x0, n + 1, order)
            .mul(&inv)
            .scale(2.0 * self.a)
            .add(&TaylorSeries::power(x0, -1, order).scale(-2.0 * (self.m + 1.0)));
        let s0 = TaylorSeries::power(x0, n, order).mul(&inv).scale(-w);
        Ok(AimProblem {
            lambda0,
            s0,
            depth: self.depth,
        })
    }
}

/// `y'' = -2x y' + (eps - 1) y`: polynomial solutions at `eps = 2k + 1`.
#[derive(Debug, Clone, Copy)]
pub struct HermiteFamily {
    pub depth: usize,
    pub x0: f64,
}

impl SpectralFamily for HermiteFamily {
    fn problem(&self, eps: f64) -> Result<AimProblem> {
        let order = 2 * self.depth + 8;
        Ok(AimProblem {
            lambda0: TaylorSeries::variable(self.x0, order).scale(-2.0),
            s0: TaylorSeries::constant(self.x0, eps - 1.0, order),
            depth: self.depth,
        })
    }
}

/// `w_n^m(N) = b (N+2)^2 n (n + ((2m+1) b + 2a) / ((N+2) b))`.
pub fn w_closed_form(n: u32, m: f64, a: f64, b: f64, big_n: i32) -> Result<f64> {
    if big_n < -1 {
        return Err(Error::InvalidParameter(format!(
            "N must be >= -1, got {big_n}"
        )));
    }
    if b == 0.0 {
        return Err(Error::InvalidParameter(
            "b = 0 is the confluent limit; use the 1F1 form".into(),
        ));
    }
    let n = n as f64;
    let np2 = (big_n + 2) as f64;
    Ok(b * np2 * np2 * n * (n + ((2.0 * m + 1.0) * b + 2.0 * a) / (np2 * b)))
}

/// Exact eigenfunction of the canonical form at `w = w_n^m(N)`:
/// `y_n = (-1)^n (N+2)^n (sigma)_n 2F1(-n, rho + n; sigma; b x^{N+2})` with
/// `sigma = (2m + N + 3)/(N + 2)`, `rho = ((2m+1) b + 2a)/((N+2) b)` (`C_2 = 1`).
pub fn canonical_eigenfunction(n: u32, m: f64, a: f64, b: f64, big_n: i32, x: f64) -> Result<f64> {
    if b == 0.0 || big_n < -1 {
        return Err(Error::InvalidParameter("need b != 0 and N >= -1".into()));
    }
    let np2 = (big_n + 2) as f64;
    let sigma = (2.0 * m + big_n as f64 + 3.0) / np2;
    let rho = ((2.0 * m + 1.0) * b + 2.0 * a) / (np2 * b);
    let pochhammer: f64 = (0..n).map(|k| sigma + k as f64).product();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let f = crate::specfun::hyp2f1_terminating(n, rho, sigma, b * x.powi(big_n + 2))?;
    Ok(sign * np2.powi(n as i32) * pochhammer * f)
}

fn radial_brackets(family: &RadialFamily) -> Result<Vec<(f64, f64)>> {
    // roots are evenly spaced in 1/eps; scan t = 1/eps upward from 1/alpha
    struct Inverse<'a>(&'a RadialFamily);
    impl SpectralFamily for Inverse<'_> {
        fn problem(&self, t: f64) -> Result<AimProblem> {
            self.0.problem(1.0 / t)
        }
    }
    let alpha = family.alpha2.sqrt();
    if !(alpha > 0.0) {
        return Err(Error::NoSignChange { lo: 0.0, hi: 0.0 });
    }
    let t_lo = 1.0 / alpha;
    let t_hi = (family.tau + 2.0 * family.depth as f64 + 4.0) / family.alpha2;
    let samples = 40 * (family.depth + 2);
    Ok(scan_brackets(&Inverse(family), t_lo, t_hi, samples)?
        .into_iter()
        .map(|(a, b)| (1.0 / b, 1.0 / a))
        .collect())
}

/// `eps_n` of the radial problem found by the AIM root scan.
pub fn aim_radial_epsilon(alpha2: f64, n: u32, l_eff: f64) -> Result<f64> {
    let family = RadialFamily::new(alpha2, l_eff, n as usize + DEPTH_MARGIN);
    aim_radial_epsilon_with(&family, n)
}

pub fn aim_radial_epsilon_with(family: &RadialFamily, n: u32) -> Result<f64> {
    let brackets = radial_brackets(family)?;
    let alpha = family.alpha2.sqrt();
    let (lo, hi) = *brackets
        .get(n as usize)
        .ok_or(Error::NoSignChange { lo: 0.0, hi: alpha })?;
    if lo == hi {
        return Ok(lo);
    }
    eigenvalue_scan(family, lo, hi)
}

/// Radial energy from the AIM root scan, `E = D - (hbar^2/2 mu a^2) eps^2`.
pub fn aim_radial_energy(
    consts: &PhysicalConstants,
    mol: &Molecule,
    n: u32,
    l_eff: f64,
) -> Result<EnergyLevel> {
    let eps = aim_radial_epsilon(alpha2(consts, mol), n, l_eff)?;
    Ok(EnergyLevel {
        n,
        l_eff,
        m: None,
        angular: None,
        energy: energy_from_epsilon(consts, mol, eps),
        method: Method::AimNumeric,
    })
}

/// `l' = l + 1/2` of angular degree `N` from the AIM root scan.
pub fn aim_angular_l_prime(kappa: f64, eta: f64, degree: u32) -> Result<f64> {
    let family = AngularFamily::new(kappa, eta, degree as usize + DEPTH_MARGIN);
    let hi = (kappa * kappa + eta * eta).sqrt() + 2.0 * family.depth as f64 + 2.0;
    let samples = 40 * (family.depth + 2);
    let brackets = scan_brackets(&family, 1e-6, hi, samples)?;
    let (lo, hi) = *brackets
        .get(degree as usize)
        .ok_or(Error::NoSignChange { lo: 0.0, hi })?;
    if lo == hi {
        return Ok(lo);
    }
    eigenvalue_scan(&family, lo, hi)
}

/// Effective angular momentum `l = l' - 1/2` of `(m, N)` via AIM.
pub fn aim_angular_l(
    consts: &PhysicalConstants,
    mol: &Molecule,
    nc: &NonCentralParams,
    m: i64,
    degree: u32,
) -> Result<f64> {
    let p = angular_params(consts, mol, nc, m)?;
    Ok(aim_angular_l_prime(p.kappa, p.eta, degree)? - 0.5)
}
