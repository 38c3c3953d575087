//! Terminating hypergeometric series, associated Laguerre and Jacobi
//! polynomials, and the radial and polar eigenfunctions built from them.
//!
//! Polynomial coefficients are generated term by term from their exact
//! ratios and summed in `f64`; degrees of interest are small (<= 10).

use statrs::function::gamma::ln_gamma;

use crate::closedform::{angular_params, radial_params, AngularParams, RadialParams};
use crate::error::{Error, Result};
use crate::model::{Molecule, NonCentralParams, PhysicalConstants};
use crate::quad::integrate;

/// Integrand tail cut, relative to the peak of `R^2`.
const TAIL_CUT: f64 = 1e-16;
const NORM_REL_TOL: f64 = 1e-13;

/// Coefficients `c_k` of `1F1(-n; c; z) = sum_k c_k z^k`.
fn hyp1f1_coefficients(n: u32, c: f64) -> Result<Vec<f64>> {
    let mut coef = Vec::with_capacity(n as usize + 1);
    let mut term = 1.0;
    coef.push(term);
    for k in 0..n as usize {
        let denom = (c + k as f64) * (k as f64 + 1.0);
        if denom == 0.0 {
            return Err(Error::Pole { term: k + 1 });
        }
        term *= (k as f64 - n as f64) / denom;
        coef.push(term);
    }
    Ok(coef)
}

fn horner(coef: &[f64], z: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// `1F1(-n; c; z)` from the contiguous recurrence
/// `(c + k) M_{k+1} = (2k + c - z) M_k - k M_{k-1}`. Unlike the power sum it
/// keeps its relative accuracy near `z ~ c`, where the terms cancel.
fn hyp1f1_recurrence(n: u32, c: f64, z: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 - z / c;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + c - z) * cur - k * prev) / (c + k);
        prev = cur;
        cur = next;
    }
    cur
}

/// `1F1(-n; c; z) = sum_{k=0}^{n} (-n)_k z^k / ((c)_k k!)`.
pub fn hyp1f1_terminating(n: u32, c: f64, z: f64) -> Result<f64> {
    Ok(horner(&hyp1f1_coefficients(n, c)?, z))
}

/// `2F1(-n, rho + n; sigma; z)`, the polynomial of degree `n` appearing in the
/// exact AIM eigenfunctions.
pub fn hyp2f1_terminating(n: u32, rho: f64, sigma: f64, z: f64) -> Result<f64> {
    let second = rho + n as f64;
    let mut sum = 1.0;
    let mut term = 1.0;
    for k in 0..n as usize {
        let kf = k as f64;
        let denom = (sigma + kf) * (kf + 1.0);
        if denom == 0.0 {
            return Err(Error::Pole { term: k + 1 });
        }
        term *= (kf - n as f64) * (second + kf) / denom * z;
        sum += term;
    }
    Ok(sum)
}

/// Generalized binomial `binom(k + top_offset + j, j)` built as
/// `prod_{i=1}^{j} (base + i) / i`.
fn rising_binomial(base: f64, j: u32) -> f64 {
    (1..=j).fold(1.0, |acc, i| acc * (base + i as f64) / i as f64)
}

/// Associated Laguerre polynomial
/// `L_n^nu(x) = sum_k (-1)^k binom(n + nu, n - k) x^k / k!`.
pub fn laguerre(n: u32, nu: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut x_pow_over_fact = 1.0;
    for k in 0..=n {
        // binom(n + nu, n - k) = prod_{j=1}^{n-k} (nu + k + j) / j
        let binom = rising_binomial(nu + k as f64, n - k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * x_pow_over_fact;
        x_pow_over_fact *= x / (k as f64 + 1.0);
    }
    sum
}

/// Jacobi polynomial
/// `P_n^(p,q)(x) = sum_s binom(n+p, n-s) binom(n+q, s) ((x-1)/2)^s ((x+1)/2)^(n-s)`.
pub fn jacobi(n: u32, p: f64, q: f64, x: f64) -> f64 {
    let lo = 0.5 * (x - 1.0);
    let hi = 0.5 * (x + 1.0);
    (0..=n)
        .map(|s| {
            rising_binomial(p + s as f64, n - s)
                * rising_binomial(q + (n - s) as f64, s)
                * lo.powi(s as i32)
                * hi.powi((n - s) as i32)
        })
        .sum()
}

/// Radial eigenfunction
/// `R(r) = C (r/a)^tau e^{-eps r/a} (-1)^n (2 tau)_n 1F1(-n; 2 tau; 2 eps r/a)`,
/// with `C` fixed numerically so that `int_0^inf R^2 dr = 1`.
///
/// The envelope is evaluated in log space, shifted to its peak at
/// `x = tau/eps`, so large `tau` (physical molecules have tau ~ 200) never
/// overflows.
#[derive(Debug, Clone)]
pub struct RadialState {
    pub params: RadialParams,
    /// Equilibrium separation a, Å.
    pub a: f64,
    coef: Vec<f64>,
    /// `ln((2 tau)_n)`
    ln_pochhammer: f64,
    /// `tau ln(x_p) - eps x_p`: log of the unshifted envelope at its peak.
    ln_peak: f64,
    /// log of the normalization constant of the shifted form.
    ln_shifted_norm: f64,
    support: (f64, f64),
}

impl RadialState {
    pub fn new(params: RadialParams, a: f64) -> Result<Self> {
        if !(params.epsilon > 0.0 && params.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "no bound state: epsilon = {}",
                params.epsilon
            )));
        }
        let sigma = 2.0 * params.tau;
        let coef = hyp1f1_coefficients(params.n, sigma)?;
        let x_peak = params.tau / params.epsilon;
        let ln_pochhammer = ln_gamma(sigma + params.n as f64) - ln_gamma(sigma);
        let mut state = Self {
            params,
            a,
            coef,
            ln_pochhammer,
            ln_peak: params.tau * x_peak.ln() - params.epsilon * x_peak,
            ln_shifted_norm: 0.0,
            support: (0.0, 0.0),
        };
        state.support = state.find_support();
        let (lo, hi) = state.support;
        let integral = integrate(
            |x| {
                let v = state.shifted(x);
                v * v
            },
            lo,
            hi,
            NORM_REL_TOL,
            0.0,
            32,
        )?;
        // int R^2 dr = a int R(x)^2 dx
        state.ln_shifted_norm = -0.5 * (a * integral.value).ln();
        Ok(state)
    }

    pub fn from_molecule(
        consts: &PhysicalConstants,
        mol: &Molecule,
        n: u32,
        l_eff: f64,
    ) -> Result<Self> {
        Self::new(
            radial_params(consts, mol, n, l_eff),
            mol.equilibrium_separation,
        )
    }

    fn x_peak(&self) -> f64 {
        self.params.tau / self.params.epsilon
    }

    fn log_envelope_shifted(&self, x: f64) -> f64 {
        let p = &self.params;
        let xp = self.x_peak();
        p.tau * (x / xp).ln() - p.epsilon * (x - xp)
    }

    /// Envelope ratio times the 1F1 factor; the sign convention `(-1)^n` is kept.
    fn shifted(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let sign = if self.params.n % 2 == 0 { 1.0 } else { -1.0 };
        sign * self.log_envelope_shifted(x).exp()
            * hyp1f1_recurrence(
                self.params.n,
                2.0 * self.params.tau,
                2.0 * self.params.epsilon * x,
            )
    }

    fn tail_bound(&self, x: f64) -> f64 {
        let z = 2.0 * self.params.epsilon * x;
        let poly: f64 = self
            .coef
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * z.powi(k as i32))
            .sum();
        (2.0 * self.log_envelope_shifted(x)).exp() * poly * poly
    }

    fn find_support(&self) -> (f64, f64) {
        let xp = self.x_peak();
        let width = self.params.tau.sqrt() / self.params.epsilon;
        let step = width / 8.0;
        let peak = (0..=64)
            .map(|j| {
                let x = (xp - 4.0 * width + j as f64 * width / 8.0).max(step / 16.0);
                let v = self.shifted(x);
                v * v
            })
            .fold(0.0f64, f64::max)
            .max(f64::MIN_POSITIVE);
        let threshold = TAIL_CUT * peak;
        let mut hi = xp + step;
        while self.tail_bound(hi) > threshold {
            hi += step;
        }
        let mut lo = xp - step;
        while lo > 0.0 && self.tail_bound(lo) > threshold {
            lo -= step;
        }
        (lo.max(0.0), hi)
    }

    /// Integration range in r (Å) outside which `R^2` is below `1e-16` of its peak.
    pub fn support(&self) -> (f64, f64) {
        (self.support.0 * self.a, self.support.1 * self.a)
    }

    /// Normalized `R(r)`.
    pub fn value(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!(
                "radius must be positive, got r = {r}"
            )));
        }
        Ok(self.ln_shifted_norm.exp() * self.shifted(r / self.a))
    }

    /// `R(r)` without the constant `C`:
    /// `(r/a)^tau e^{-eps r/a} (-1)^n (2 tau)_n 1F1(-n; 2tau; 2 eps r/a)`.
    /// Underflows to zero for large tau; prefer [`RadialState::value`].
    pub fn unnormalized(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!(
                "radius must be positive, got r = {r}"
            )));
        }
        Ok((self.ln_peak + self.ln_pochhammer).exp() * self.shifted(r / self.a))
    }

    /// `ln C`, where `C * unnormalized` is normalized.
    pub fn ln_normalization(&self) -> f64 {
        self.ln_shifted_norm - self.ln_peak - self.ln_pochhammer
    }
}

/// Numeric normalization of a radial state, and the closed-form constant
/// `B_nl = (8 mu D a / (hbar^2 (2n + nu + 1)))^{3/2} [n! / ((2n + nu + 1) (n + nu)!)]^{1/2}`
/// (with `nu = sqrt(1 + 4 (alpha^2 + l(l+1)))` in the factorial slots) for comparison.
/// The two refer to differently scaled wavefunctions; only the numeric value
/// normalizes [`RadialState::unnormalized`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    /// `C`; may overflow to infinity for very large tau, see `ln_numeric`.
    pub numeric: f64,
    pub ln_numeric: f64,
    pub ln_closed_form: f64,
}

pub fn normalization_constant(
    consts: &PhysicalConstants,
    mol: &Molecule,
    n: u32,
    l_eff: f64,
) -> Result<Normalization> {
    let state = RadialState::from_molecule(consts, mol, n, l_eff)?;
    let ln_numeric = state.ln_normalization();
    let p = state.params;
    let nu = (1.0 + 4.0 * (p.alpha2 + l_eff * (l_eff + 1.0))).sqrt();
    let nf = n as f64;
    let prefactor = 8.0 * mol.reduced_mass * mol.dissociation_energy * mol.equilibrium_separation
        / (consts.hbar2_per_amu_a2 * (2.0 * nf + nu + 1.0));
    let ln_closed_form = 1.5 * prefactor.ln()
        + 0.5 * (ln_gamma(nf + 1.0) - (2.0 * nf + nu + 1.0).ln() - ln_gamma(nf + nu + 1.0));
    Ok(Normalization {
        numeric: ln_numeric.exp(),
        ln_numeric,
        ln_closed_form,
    })
}

/// `R(r)` for state `(n, l_eff)`, normalized or in the raw closed form.
pub fn radial_wavefunction(
    consts: &PhysicalConstants,
    mol: &Molecule,
    n: u32,
    l_eff: f64,
    r: f64,
    normalize: bool,
) -> Result<f64> {
    let state = RadialState::from_molecule(consts, mol, n, l_eff)?;
    if normalize {
        state.value(r)
    } else {
        state.unnormalized(r)
    }
}

/// Polar eigenfunction
/// `Theta_N(x) = N_N (1-x)^{(B+C)/2} (1+x)^{(B-C)/2} P_N^{(B+C, B-C)}(x)`, `x = cos(theta)`,
/// normalized so that `int_0^pi Theta^2 sin(theta) d theta = 1`.
#[derive(Debug, Clone)]
pub struct AngularState {
    pub params: AngularParams,
    pub degree: u32,
    /// exponents of (1-x) and (1+x)
    exps: (f64, f64),
    x_peak: f64,
    ln_norm: f64,
}

impl AngularState {
    pub fn new(params: AngularParams, degree: u32) -> Result<Self> {
        let exps = (0.5 * (params.b + params.c), 0.5 * (params.b - params.c));
        let total = exps.0 + exps.1;
        let x_peak = if total > 0.0 {
            (exps.1 - exps.0) / total
        } else {
            0.0
        };
        let mut state = Self {
            params,
            degree,
            exps,
            x_peak,
            ln_norm: 0.0,
        };
        let integral = integrate(
            |x| {
                let v = state.shifted(x);
                v * v
            },
            -1.0,
            1.0,
            NORM_REL_TOL,
            0.0,
            64,
        )?;
        state.ln_norm = -0.5 * integral.value.ln();
        Ok(state)
    }

    pub fn from_molecule(
        consts: &PhysicalConstants,
        mol: &Molecule,
        nc: &NonCentralParams,
        m: i64,
        degree: u32,
    ) -> Result<Self> {
        Self::new(angular_params(consts, mol, nc, m)?, degree)
    }

    fn shifted(&self, x: f64) -> f64 {
        let (ea, eb) = self.exps;
        let mut log_env = 0.0;
        if ea != 0.0 {
            log_env += ea * ((1.0 - x) / (1.0 - self.x_peak)).ln();
        }
        if eb != 0.0 {
            log_env += eb * ((1.0 + x) / (1.0 + self.x_peak)).ln();
        }
        log_env.exp() * jacobi(self.degree, 2.0 * ea, 2.0 * eb, x)
    }

    /// Normalized value as a function of `x = cos(theta)`, `-1 < x < 1`.
    pub fn value_at_cos(&self, x: f64) -> f64 {
        self.ln_norm.exp() * self.shifted(x)
    }

    /// Normalized `Theta(theta)`.
    pub fn value(&self, theta: f64) -> Result<f64> {
        if !(theta > 0.0 && theta < std::f64::consts::PI) {
            return Err(Error::Domain(format!(
                "polar angle must lie strictly inside (0, pi), got theta = {theta}"
            )));
        }
        Ok(self.value_at_cos(theta.cos()))
    }

    /// `Theta(theta)` without the normalization constant.
    pub fn unnormalized(&self, theta: f64) -> Result<f64> {
        Ok(self.value(theta)? * (-self.ln_norm).exp() * self.unshift_factor())
    }

    fn unshift_factor(&self) -> f64 {
        let (ea, eb) = self.exps;
        (ea * (1.0 - self.x_peak).ln() + eb * (1.0 + self.x_peak).ln()).exp()
    }
}

pub fn angular_wavefunction(
    consts: &PhysicalConstants,
    mol: &Molecule,
    nc: &NonCentralParams,
    m: i64,
    degree: u32,
    theta: f64,
    normalize: bool,
) -> Result<f64> {
    let state = AngularState::from_molecule(consts, mol, nc, m, degree)?;
    if normalize {
        state.value(theta)
    } else {
        state.unnormalized(theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::RadialParams;

    #[test]
    fn recurrence_matches_power_sum() {
        for n in 0..8 {
            for &(c, z) in &[(1.5, 0.7), (3.0, 0.2), (7.25, 1.9)] {
                let sum = hyp1f1_terminating(n, c, z).unwrap();
                assert!((hyp1f1_recurrence(n, c, z) - sum).abs() < 1e-13 * sum.abs().max(1.0));
            }
        }
    }

    #[test]
    fn hyp1f1_small_cases() {
        assert_eq!(hyp1f1_terminating(0, 3.3, 12.0).unwrap(), 1.0);
        assert_eq!(hyp1f1_terminating(1, 2.0, 2.0).unwrap(), 0.0);
        assert!(matches!(
            hyp1f1_terminating(3, -1.0, 0.5),
            Err(Error::Pole { term: 2 })
        ));
        // c = -3 with n = 2 never reaches the zero factor
        assert!(hyp1f1_terminating(2, -3.0, 0.5).is_ok());
    }

    #[test]
    fn hyp2f1_small_cases() {
        assert_eq!(hyp2f1_terminating(0, 1.0, 2.0, 0.3).unwrap(), 1.0);
        assert!(hyp2f1_terminating(2, 1.0, 0.0, 0.3).is_err());
    }

    #[test]
    fn hyp2f1_confluent_limit() {
        let (n, a, c, z) = (3u32, 0.7, 2.5, 1.3);
        let b = 1e-8;
        // rho + n = 1/b + a
        let lhs = hyp2f1_terminating(n, 1.0 / b + a - n as f64, c, z * b).unwrap();
        let rhs = hyp1f1_terminating(n, c, z).unwrap();
        assert!((lhs - rhs).abs() < 1e-6);
    }

    #[test]
    fn laguerre_low_degree() {
        assert_eq!(laguerre(0, 2.5, 7.0), 1.0);
        for x in [0.0, 0.3, 4.0] {
            assert!((laguerre(1, 0.0, x) - (1.0 - x)).abs() < 1e-15);
        }
        // L_2^0(x) = (x^2 - 4x + 2)/2
        assert!((laguerre(2, 0.0, 1.5) - (2.25 - 6.0 + 2.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_low_degree() {
        assert_eq!(jacobi(0, 0.3, 1.7, 0.2), 1.0);
        for x in [-0.9, 0.0, 0.45] {
            assert!((jacobi(1, 0.0, 0.0, x) - x).abs() < 1e-15);
            // Legendre P_2
            assert!((jacobi(2, 0.0, 0.0, x) - 0.5 * (3.0 * x * x - 1.0)).abs() < 1e-15);
        }
        // P_1^(a,b) = (a+1) + (a+b+2)(x-1)/2
        let (a, b, x) = (1.2, 0.4, 0.3);
        assert!((jacobi(1, a, b, x) - ((a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn radial_ground_state_is_nodeless_and_normalized() {
        let state = RadialState::new(RadialParams::new(10.0, 0, 0.0), 1.0).unwrap();
        let (lo, hi) = state.support();
        let integral = integrate(
            |r| state.value(r).unwrap().powi(2),
            lo.max(1e-12),
            hi,
            1e-13,
            0.0,
            32,
        )
        .unwrap();
        assert!((integral.value - 1.0).abs() < 1e-10);
        for i in 1..1000 {
            assert!(state.value(i as f64 * 0.01).unwrap() > 0.0);
        }
        assert!(state.value(0.0).is_err());
    }

    #[test]
    fn unnormalized_times_constant_is_normalized() {
        let state = RadialState::new(RadialParams::new(10.0, 2, 1.0), 1.3).unwrap();
        let c = state.ln_normalization().exp();
        for r in [0.4, 1.1, 2.7] {
            let lhs = c * state.unnormalized(r).unwrap();
            let rhs = state.value(r).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-12));
        }
    }

    #[test]
    fn co_normalization_is_finite() {
        let c = PhysicalConstants::codata2018();
        let mol = Molecule::co();
        for n in 0..4 {
            for l in 0..4 {
                let norm = normalization_constant(&c, &mol, n, l as f64).unwrap();
                assert!(norm.ln_numeric.is_finite());
                assert!(norm.numeric > 0.0 && norm.numeric.is_finite());
                assert!(norm.ln_closed_form.is_finite());
            }
        }
    }

    #[test]
    fn angular_legendre_limit() {
        let params = AngularParams {
            m: 0,
            u: 0.0,
            kappa: 0.0,
            eta: 0.0,
            b: 0.0,
            c: 0.0,
        };
        let state = AngularState::new(params, 1).unwrap();
        // normalized P_1: sqrt(3/2) x
        for theta in [0.3, 1.0, 2.5] {
            let v = state.value(theta).unwrap();
            assert!((v - 1.5f64.sqrt() * theta.cos()).abs() < 1e-12);
        }
        assert!(state.value(0.0).is_err());
    }
}
