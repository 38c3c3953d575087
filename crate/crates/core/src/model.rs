//! Physical constants, molecule records and the (non-central) modified
//! Kratzer potential.
//!
//! Units throughout: energies in eV, lengths in Å, masses in amu, angles in
//! radians. The non-central strengths beta and gamma carry eV·Å², so that
//! `2 mu beta / hbar^2` is dimensionless.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// hbar*c in eV·Å (CODATA 2018).
pub const HBAR_C_EV_ANGSTROM: f64 = 1_973.269_804;
/// Atomic mass constant energy equivalent m_u c^2 in eV (CODATA 2018).
pub const AMU_C2_EV: f64 = 931.494_102_42e6;

/// Effective value of hbar^2/(1 amu · 1 Å^2) under which the reference CO
/// table of ro-vibrational energies is reproduced to all six printed
/// decimals. Every value in [4.1676722e-3, 4.1676725e-3] eV does so; this is
/// the midpoint. It sits about 0.3% below the CODATA 2018 value.
pub const TABLE2_HBAR2_PER_AMU_A2: f64 = 4.167_672_35e-3;

/// Environment variable naming a constants preset or a constants file.
pub const CONSTANTS_ENV: &str = "KRATZER_CONSTANTS";

/// The single physical constant the models need: hbar^2 / (1 amu · 1 Å^2) in eV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar2_per_amu_a2: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata2018()
    }
}

impl PhysicalConstants {
    pub fn codata2018() -> Self {
        Self::from_hbar_c(HBAR_C_EV_ANGSTROM, AMU_C2_EV)
    }

    /// Constants reproducing the reference CO table exactly
    /// (see [`TABLE2_HBAR2_PER_AMU_A2`]).
    pub fn table2() -> Self {
        Self {
            hbar2_per_amu_a2: TABLE2_HBAR2_PER_AMU_A2,
        }
    }

    /// Builds the constant from hbar*c (eV·Å) and m_u c^2 (eV).
    pub fn from_hbar_c(hbar_c: f64, amu_c2: f64) -> Self {
        Self {
            hbar2_per_amu_a2: hbar_c * hbar_c / amu_c2,
        }
    }

    pub fn new(hbar2_per_amu_a2: f64) -> Result<Self> {
        if !(hbar2_per_amu_a2.is_finite() && hbar2_per_amu_a2 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "hbar2_per_amu_A2 must be positive and finite, got {hbar2_per_amu_a2}"
            )));
        }
        Ok(Self { hbar2_per_amu_a2 })
    }

    /// `2 mu / hbar^2` in 1/(eV·Å²) for a reduced mass in amu.
    pub fn coupling(&self, reduced_mass: f64) -> f64 {
        2.0 * reduced_mass / self.hbar2_per_amu_a2
    }

    /// `hbar^2 / (2 mu)` in eV·Å².
    pub fn kinetic_prefactor(&self, reduced_mass: f64) -> f64 {
        self.hbar2_per_amu_a2 / (2.0 * reduced_mass)
    }

    /// Parses a constants file. Either `hbar2_per_amu_A2` alone, or the pair
    /// `hbar_c_eV_A` and `amu_c2_eV`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut hbar2 = None;
        let mut hbar_c = None;
        let mut amu_c2 = None;
        for entry in parse_key_values(text)? {
            let slot = match entry.key.as_str() {
                "hbar2_per_amu_A2" => &mut hbar2,
                "hbar_c_eV_A" => &mut hbar_c,
                "amu_c2_eV" => &mut amu_c2,
                other => {
                    return Err(Error::Parse {
                        line: entry.line,
                        msg: format!("unknown key `{other}`"),
                    })
                }
            };
            *slot = Some(entry.number()?);
        }
        match (hbar2, hbar_c, amu_c2) {
            (Some(v), None, None) => Self::new(v),
            (None, Some(hc), Some(mc2)) if hc > 0.0 && mc2 > 0.0 => {
                Self::new(Self::from_hbar_c(hc, mc2).hbar2_per_amu_a2)
            }
            _ => Err(Error::Parse {
                line: 0,
                msg: "expected either hbar2_per_amu_A2 or both hbar_c_eV_A and amu_c2_eV".into(),
            }),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Resolves a preset name (`codata2018`, `table2`) or a file path.
    pub fn resolve(spec: &str) -> Result<Self> {
        match spec {
            "codata2018" | "codata" => Ok(Self::codata2018()),
            "table2" => Ok(Self::table2()),
            path => Self::load(Path::new(path)),
        }
    }

    /// Constants named by [`CONSTANTS_ENV`], or `fallback` when it is unset.
    pub fn from_env_or(fallback: Self) -> Result<Self> {
        match std::env::var(CONSTANTS_ENV) {
            Ok(spec) if !spec.trim().is_empty() => Self::resolve(spec.trim()),
            _ => Ok(fallback),
        }
    }
}

/// Spectroscopic record of a diatomic molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    pub name: String,
    /// D, eV.
    pub dissociation_energy: f64,
    /// a, Å.
    pub equilibrium_separation: f64,
    /// mu, amu.
    pub reduced_mass: f64,
}

const CO_MOLECULE: &str = include_str!("../data/co.molecule");

impl Molecule {
    pub fn new(
        name: impl Into<String>,
        dissociation_energy: f64,
        equilibrium_separation: f64,
        reduced_mass: f64,
    ) -> Result<Self> {
        let mol = Self {
            name: name.into(),
            dissociation_energy,
            equilibrium_separation,
            reduced_mass,
        };
        mol.validate()?;
        Ok(mol)
    }

    /// The bundled CO ground-state record.
    pub fn co() -> Self {
        Self::parse(CO_MOLECULE).expect("bundled CO molecule file is valid")
    }

    pub fn validate(&self) -> Result<()> {
        for (label, v) in [
            ("D_eV", self.dissociation_energy),
            ("a_angstrom", self.equilibrium_separation),
            ("mu_amu", self.reduced_mass),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{label} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Parses the `key = value` molecule format (`#` starts a comment).
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut d = None;
        let mut a = None;
        let mut mu = None;
        let mut last_line = 0;
        for entry in parse_key_values(text)? {
            last_line = entry.line;
            match entry.key.as_str() {
                "name" => name = Some(entry.value.clone()),
                "D_eV" => d = Some((entry.number()?, entry.line)),
                "a_angstrom" => a = Some((entry.number()?, entry.line)),
                "mu_amu" => mu = Some((entry.number()?, entry.line)),
                other => {
                    return Err(Error::Parse {
                        line: entry.line,
                        msg: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        let missing = |key: &str| Error::Parse {
            line: last_line,
            msg: format!("missing key `{key}`"),
        };
        let name = name.ok_or_else(|| missing("name"))?;
        let (d, d_line) = d.ok_or_else(|| missing("D_eV"))?;
        let (a, a_line) = a.ok_or_else(|| missing("a_angstrom"))?;
        let (mu, mu_line) = mu.ok_or_else(|| missing("mu_amu"))?;
        for (v, line, key) in [
            (d, d_line, "D_eV"),
            (a, a_line, "a_angstrom"),
            (mu, mu_line, "mu_amu"),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Parse {
                    line,
                    msg: format!("`{key}` must be positive, got {v}"),
                });
            }
        }
        Ok(Self {
            name,
            dissociation_energy: d,
            equilibrium_separation: a,
            reduced_mass: mu,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Serializes to the molecule file format; `parse` inverts it exactly.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name = {}", self.name);
        let _ = writeln!(out, "D_eV = {}", self.dissociation_energy);
        let _ = writeln!(out, "a_angstrom = {}", self.equilibrium_separation);
        let _ = writeln!(out, "mu_amu = {}", self.reduced_mass);
        out
    }
}

/// Strengths of the angular terms `(beta + gamma cos(theta)) / (r^2 sin^2(theta))`, eV·Å².
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NonCentralParams {
    pub beta: f64,
    pub gamma: f64,
}

impl NonCentralParams {
    pub const CENTRAL: Self = Self {
        beta: 0.0,
        gamma: 0.0,
    };

    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta.is_finite() && gamma.is_finite() && beta >= 0.0 && gamma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta and gamma must be finite and non-negative, got beta = {beta}, gamma = {gamma}"
            )));
        }
        Ok(Self { beta, gamma })
    }

    /// beta = gamma = `strength`, the layout of the reference table.
    pub fn equal(strength: f64) -> Self {
        Self {
            beta: strength,
            gamma: strength,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSample {
    pub r: f64,
    pub theta: f64,
    pub v: f64,
}

/// `hbar^2 / (2 mu a^2)` in eV: the unit in which `alpha^2` and `epsilon^2`
/// measure energies.
pub fn energy_scale(consts: &PhysicalConstants, mol: &Molecule) -> f64 {
    let a = mol.equilibrium_separation;
    consts.kinetic_prefactor(mol.reduced_mass) / (a * a)
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "radius must be positive, got r = {r}"
        )))
    }
}

fn check_polar(theta: f64) -> Result<f64> {
    let s = theta.sin();
    if theta.is_finite() && theta > 0.0 && theta < std::f64::consts::PI && s > 0.0 {
        Ok(s)
    } else {
        Err(Error::Domain(format!(
            "polar angle must lie strictly inside (0, pi), got theta = {theta}"
        )))
    }
}

/// Modified Kratzer term `D ((r - a)/r)^2`.
pub fn kratzer_potential(mol: &Molecule, r: f64) -> Result<f64> {
    check_radius(r)?;
    let x = (r - mol.equilibrium_separation) / r;
    Ok(mol.dissociation_energy * x * x)
}

/// `D((r-a)/r)^2 + beta/(r^2 sin^2) + gamma cos/(r^2 sin^2)`.
pub fn potential(mol: &Molecule, nc: &NonCentralParams, r: f64, theta: f64) -> Result<f64> {
    let radial = kratzer_potential(mol, r)?;
    let s = check_polar(theta)?;
    Ok(radial + (nc.beta + nc.gamma * theta.cos()) / (r * r * s * s))
}

/// Kratzer term plus the centrifugal barrier `hbar^2 l(l+1) / (2 mu r^2)`.
/// `l` may be any non-negative real.
pub fn effective_radial_potential(
    consts: &PhysicalConstants,
    mol: &Molecule,
    l: f64,
    r: f64,
) -> Result<f64> {
    if !(l.is_finite() && l >= 0.0) {
        return Err(Error::InvalidParameter(format!("l must be >= 0, got {l}")));
    }
    let radial = kratzer_potential(mol, r)?;
    Ok(radial + consts.kinetic_prefactor(mol.reduced_mass) * l * (l + 1.0) / (r * r))
}

/// One labelled potential curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSeries {
    pub label: String,
    pub samples: Vec<PotentialSample>,
}

impl CurveSeries {
    /// Lowest sample: the bottom of the potential pocket on this grid.
    pub fn minimum(&self) -> Option<PotentialSample> {
        self.samples
            .iter()
            .copied()
            .min_by(|a, b| a.v.total_cmp(&b.v))
    }
}

/// Samples the non-central potential at fixed `theta` for each parameter
/// set, plus an optional Kratzer + centrifugal comparison series with
/// angular momentum `centrifugal_l`.
pub fn sample_curves(
    consts: &PhysicalConstants,
    mol: &Molecule,
    params: &[NonCentralParams],
    theta: f64,
    r_grid: &[f64],
    centrifugal_l: Option<f64>,
) -> Result<Vec<CurveSeries>> {
    if r_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter(
            "r grid must be strictly increasing".into(),
        ));
    }
    let mut out = Vec::with_capacity(params.len() + 1);
    for nc in params {
        let samples = r_grid
            .iter()
            .map(|&r| potential(mol, nc, r, theta).map(|v| PotentialSample { r, theta, v }))
            .collect::<Result<Vec<_>>>()?;
        out.push(CurveSeries {
            label: format!("V_NC(beta={},gamma={})", nc.beta, nc.gamma),
            samples,
        });
    }
    if let Some(l) = centrifugal_l {
        let samples = r_grid
            .iter()
            .map(|&r| {
                effective_radial_potential(consts, mol, l, r).map(|v| PotentialSample {
                    r,
                    theta,
                    v,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(CurveSeries {
            label: format!("V_K+centrifugal(l={l})"),
            samples,
        });
    }
    Ok(out)
}

pub(crate) struct KeyValue {
    pub line: usize,
    pub key: String,
    pub value: String,
}

impl KeyValue {
    pub fn number(&self) -> Result<f64> {
        self.value.parse::<f64>().map_err(|_| Error::Parse {
            line: self.line,
            msg: format!("`{}`: expected a number, got `{}`", self.key, self.value),
        })
    }
}

pub(crate) fn parse_key_values(text: &str) -> Result<Vec<KeyValue>> {
    let mut out: Vec<KeyValue> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `key = value`, got `{content}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(Error::Parse {
                line,
                msg: format!("expected `key = value`, got `{content}`"),
            });
        }
        if out.iter().any(|kv| kv.key == key) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate key `{key}`"),
            });
        }
        out.push(KeyValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_molecule_energy_scale() {
        let mol = Molecule::new("unit", 1.0, 1.0, 1.0).unwrap();
        let c = PhysicalConstants::codata2018();
        let s = energy_scale(&c, &mol);
        // (hbar c)^2 / (m_u c^2) / 2
        assert!((s - 1973.269804f64.powi(2) / 931.49410242e6 / 2.0).abs() < 1e-18);
        assert!((s - 2.0901e-3).abs() < 1e-7);
    }

    #[test]
    fn co_energy_scale_golden() {
        let s = energy_scale(&PhysicalConstants::codata2018(), &Molecule::co());
        assert!((s - 2.393_477_953_381_966e-4).abs() < 1e-16, "{s}");
    }

    #[test]
    fn doubling_mass_halves_scale() {
        let c = PhysicalConstants::codata2018();
        let mut mol = Molecule::co();
        let s1 = energy_scale(&c, &mol);
        mol.reduced_mass *= 2.0;
        assert!((energy_scale(&c, &mol) - s1 / 2.0).abs() < 1e-18);
    }

    #[test]
    fn kratzer_minimum_and_asymptote() {
        let co = Molecule::co();
        let v = potential(
            &co,
            &NonCentralParams::CENTRAL,
            co.equilibrium_separation,
            1.0,
        )
        .unwrap();
        assert_eq!(v, 0.0);
        let far = potential(&co, &NonCentralParams::CENTRAL, 1e9, 0.3).unwrap();
        assert!((far - 10.84514471).abs() < 1e-7);
    }

    #[test]
    fn angular_term_at_equator() {
        let co = Molecule::co();
        let nc = NonCentralParams::new(1.0, 3.7).unwrap();
        let v = potential(&co, &nc, 1.1282, PI / 2.0).unwrap();
        assert!((v - 1.0 / (1.1282f64 * 1.1282)).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let co = Molecule::co();
        let nc = NonCentralParams::equal(1.0);
        assert!(matches!(
            potential(&co, &nc, 1.0, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            potential(&co, &nc, 1.0, PI),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            potential(&co, &nc, 0.0, 1.0),
            Err(Error::Domain(_))
        ));
        let c = PhysicalConstants::default();
        assert!(matches!(
            effective_radial_potential(&c, &co, 1.0, -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn centrifugal_at_equilibrium() {
        let c = PhysicalConstants::codata2018();
        let co = Molecule::co();
        let v = effective_radial_potential(&c, &co, 50.0, co.equilibrium_separation).unwrap();
        assert!((v - 2550.0 * energy_scale(&c, &co)).abs() < 1e-14);
        assert!((v - 0.610).abs() < 1e-3);
        let v0 = effective_radial_potential(&c, &co, 0.0, 1.7).unwrap();
        assert_eq!(v0, kratzer_potential(&co, 1.7).unwrap());
    }

    #[test]
    fn centrifugal_pocket_is_shallower() {
        let c = PhysicalConstants::codata2018();
        let co = Molecule::co();
        let grid: Vec<f64> = (1..4000).map(|i| 0.5 + i as f64 * 1e-3).collect();
        let curves = sample_curves(
            &c,
            &co,
            &[NonCentralParams::CENTRAL],
            PI / 6.0,
            &grid,
            Some(50.0),
        )
        .unwrap();
        let k = curves[0].minimum().unwrap();
        let l50 = curves[1].minimum().unwrap();
        assert!(l50.v > k.v);
    }

    #[test]
    fn curves_reject_bad_grid() {
        let c = PhysicalConstants::codata2018();
        let co = Molecule::co();
        let err = sample_curves(
            &c,
            &co,
            &[NonCentralParams::CENTRAL],
            0.5,
            &[1.0, 1.0],
            None,
        );
        assert!(err.is_err());
        let err = sample_curves(
            &c,
            &co,
            &[NonCentralParams::CENTRAL],
            0.5,
            &[0.0, 1.0],
            None,
        );
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn molecule_file_round_trip() {
        let co = Molecule::co();
        assert_eq!(co.name, "CO");
        assert_eq!(co.dissociation_energy, 10.84514471);
        assert_eq!(co.equilibrium_separation, 1.1282);
        assert_eq!(co.reduced_mass, 6.860586);
        assert_eq!(Molecule::parse(&co.to_file_string()).unwrap(), co);
    }

    #[test]
    fn molecule_parse_errors_carry_lines() {
        let text = "name = X\nD_eV = 1.0\na_angstrom = oops\nmu_amu = 1\n";
        assert_eq!(
            Molecule::parse(text).unwrap_err(),
            Error::Parse {
                line: 3,
                msg: "`a_angstrom`: expected a number, got `oops`".into()
            }
        );
        let text = "# comment\nname = X\nD_eV = 1.0\nmu_amu 1\n";
        assert!(matches!(
            Molecule::parse(text),
            Err(Error::Parse { line: 4, .. })
        ));
        let text = "name = X\nD_eV = -1.0\na_angstrom = 1\nmu_amu = 1\n";
        assert!(matches!(
            Molecule::parse(text),
            Err(Error::Parse { line: 2, .. })
        ));
        let text = "name = X\nD_eV = 1.0\nmu_amu = 1\n";
        assert!(matches!(Molecule::parse(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn constants_files() {
        let c = PhysicalConstants::parse("hbar2_per_amu_A2 = 4.2e-3 # test\n").unwrap();
        assert_eq!(c.hbar2_per_amu_a2, 4.2e-3);
        let c = PhysicalConstants::parse("hbar_c_eV_A = 1973.269804\namu_c2_eV = 931.49410242e6\n")
            .unwrap();
        assert_eq!(c, PhysicalConstants::codata2018());
        assert!(PhysicalConstants::parse("hbar_c_eV_A = 1\n").is_err());
        assert!(PhysicalConstants::parse("hbar2_per_amu_A2 = -1\n").is_err());
        assert_eq!(
            PhysicalConstants::resolve("table2").unwrap(),
            PhysicalConstants::table2()
        );
    }
}
