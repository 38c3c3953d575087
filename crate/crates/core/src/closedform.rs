//! Closed-form bound-state spectrum of the modified and non-central
//! modified Kratzer potentials.
//!
//! Radial: with `alpha^2 = 2 mu D a^2 / hbar^2` and
//! `tau = 1/2 + sqrt(alpha^2 + (l + 1/2)^2)` the levels are
//! `epsilon_n = alpha^2 / (tau + n)`, `E = D - (hbar^2 / 2 mu a^2) epsilon_n^2`.
//!
//! Angular: the polar equation is solved by Jacobi polynomials of degree `N`
//! and fixes a real effective angular momentum `l_eff = kappa + N`, which is
//! then inserted into the radial formula.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{energy_scale, Molecule, NonCentralParams, PhysicalConstants};

/// `(n, N, m)`: radial degree, angular (Jacobi) degree, magnetic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    pub n: u32,
    pub angular: u32,
    pub m: i64,
}

impl QuantumNumbers {
    /// The labelling used by the reference table: `N = n`.
    pub fn diagonal(n: u32, m: i64) -> Self {
        Self { n, angular: n, m }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    AimNumeric,
    FdOracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::AimNumeric => "AIM",
            Method::FdOracle => "FD-oracle",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A labelled eigenvalue. Central levels carry no `m`/`N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLevel {
    pub n: u32,
    pub l_eff: f64,
    pub m: Option<i64>,
    pub angular: Option<u32>,
    /// eV
    pub energy: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialParams {
    pub n: u32,
    pub l_eff: f64,
    /// `2 mu D a^2 / hbar^2`
    pub alpha2: f64,
    /// `1/2 + sqrt(alpha^2 + (l + 1/2)^2)`
    pub tau: f64,
    /// `alpha^2 / (tau + n)`
    pub epsilon: f64,
}

impl RadialParams {
    pub fn new(alpha2: f64, n: u32, l_eff: f64) -> Self {
        let tau = tau(alpha2, l_eff);
        Self {
            n,
            l_eff,
            alpha2,
            tau,
            epsilon: alpha2 / (tau + n as f64),
        }
    }
}

pub(crate) fn tau(alpha2: f64, l: f64) -> f64 {
    0.5 + (alpha2 + (l + 0.5) * (l + 0.5)).sqrt()
}

/// Angular-equation parameters for a given `m`.
///
/// `kappa^2 + eta^2 = m^2 + 2 mu beta / hbar^2`, `kappa^2 - eta^2 = u`,
/// `2 kappa eta = 2 mu gamma / hbar^2`. The Jacobi parameters of the polar
/// wavefunction are `(B + C, B - C)` with `B = kappa`, `C = eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularParams {
    pub m: i64,
    pub u: f64,
    pub kappa: f64,
    pub eta: f64,
    pub b: f64,
    pub c: f64,
}

impl AngularParams {
    pub fn l_eff(&self, angular: u32) -> f64 {
        self.kappa + angular as f64
    }

    /// `l' = l + 1/2 = kappa + N + 1/2`
    pub fn l_prime(&self, angular: u32) -> f64 {
        self.kappa + angular as f64 + 0.5
    }

    /// `lambda = l_eff (l_eff + 1)`
    pub fn separation_constant(&self, angular: u32) -> f64 {
        let l = self.l_eff(angular);
        l * (l + 1.0)
    }
}

/// `alpha^2 = 2 mu D a^2 / hbar^2`.
pub fn alpha2(consts: &PhysicalConstants, mol: &Molecule) -> f64 {
    mol.dissociation_energy / energy_scale(consts, mol)
}

/// `E_nl = D - 8 mu D^2 a^2 / hbar^2 [1 + 2n + sqrt(1 + 4(2 mu D a^2/hbar^2 + l(l+1)))]^-2`.
///
/// `l` is any non-negative real.
pub fn kratzer_energy(consts: &PhysicalConstants, mol: &Molecule, n: u32, l: f64) -> f64 {
    let d = mol.dissociation_energy;
    let a2 = alpha2(consts, mol);
    let bracket = 1.0 + 2.0 * n as f64 + (1.0 + 4.0 * (a2 + l * (l + 1.0))).sqrt();
    d - 4.0 * d * a2 / (bracket * bracket)
}

/// `u = sqrt((m^2 + 2 mu beta/hbar^2)^2 - (2 mu gamma/hbar^2)^2)`.
pub fn angular_u(
    consts: &PhysicalConstants,
    mol: &Molecule,
    nc: &NonCentralParams,
    m: i64,
) -> Result<f64> {
    let coupling = consts.coupling(mol.reduced_mass);
    let p = (m * m) as f64 + coupling * nc.beta;
    let g = coupling * nc.gamma;
    let disc = p * p - g * g;
    if disc < 0.0 || !disc.is_finite() {
        return Err(Error::ComplexU {
            m,
            beta: nc.beta,
            gamma: nc.gamma,
        });
    }
    Ok(disc.sqrt())
}

pub fn angular_params(
    consts: &PhysicalConstants,
    mol: &Molecule,
    nc: &NonCentralParams,
    m: i64,
) -> Result<AngularParams> {
    let u = angular_u(consts, mol, nc, m)?;
    let p = (m * m) as f64 + consts.coupling(mol.reduced_mass) * nc.beta;
    let kappa = ((p + u) / 2.0).sqrt();
    // u <= p analytically; clamp the rounding residue
    let eta = ((p - u) / 2.0).max(0.0).sqrt();
    Ok(AngularParams {
        m,
        u,
        kappa,
        eta,
        b: kappa,
        c: eta,
    })
}

/// `l_eff = sqrt((m^2 + 2 mu beta/hbar^2 + u) / 2) + N`; `|m| + N` when beta = gamma = 0.
pub fn effective_l(
    consts: &PhysicalConstants,
    mol: &Molecule,
    nc: &NonCentralParams,
    m: i64,
    angular: u32,
) -> Result<f64> {
    Ok(angular_params(consts, mol, nc, m)?.l_eff(angular))
}

/// Energy of the non-central level `(n, N, m)`. `angular = None` uses `N = n`.
pub fn noncentral_energy(
    consts: &PhysicalConstants,
    mol: &Molecule,
    nc: &NonCentralParams,
    n: u32,
    m: i64,
    angular: Option<u32>,
) -> Result<f64> {
    let l = effective_l(consts, mol, nc, m, angular.unwrap_or(n))?;
    Ok(kratzer_energy(consts, mol, n, l))
}

pub fn noncentral_level(
    consts: &PhysicalConstants,
    mol: &Molecule,
    nc: &NonCentralParams,
    qn: QuantumNumbers,
) -> Result<EnergyLevel> {
    let l_eff = effective_l(consts, mol, nc, qn.m, qn.angular)?;
    Ok(EnergyLevel {
        n: qn.n,
        l_eff,
        m: Some(qn.m),
        angular: Some(qn.angular),
        energy: kratzer_energy(consts, mol, qn.n, l_eff),
        method: Method::ClosedForm,
    })
}

pub fn radial_params(
    consts: &PhysicalConstants,
    mol: &Molecule,
    n: u32,
    l_eff: f64,
) -> RadialParams {
    RadialParams::new(alpha2(consts, mol), n, l_eff)
}

/// `E = D - (hbar^2 / 2 mu a^2) epsilon^2`.
pub fn energy_from_epsilon(consts: &PhysicalConstants, mol: &Molecule, epsilon: f64) -> f64 {
    mol.dissociation_energy - energy_scale(consts, mol) * epsilon * epsilon
}

/// `Phi_m(phi) = e^{i m phi} / sqrt(2 pi)`.
pub fn azimuthal_wavefunction(m: i64, phi: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), m as f64 * phi)
}
