//! Report builders behind the `kratzer` binary: the CO energy table, potential
//! curves and single-level lookups, rendered as CSV or text.

use std::fmt::Write as _;

use crate::closedform::{kratzer_energy, noncentral_energy};
use crate::error::{Error, Result};
use crate::model::{sample_curves, Molecule, NonCentralParams, PhysicalConstants};

/// `beta = gamma` columns of the energy table.
pub const TABLE_STRENGTHS: [f64; 4] = [0.0, 0.1, 1.0, 5.0];
/// `beta = gamma` curves next to the bare Kratzer curve.
pub const CURVE_STRENGTHS: [f64; 3] = [0.1, 1.0, 5.0];
pub const CURVE_THETA_DEG: f64 = 30.0;
pub const CURVE_CENTRIFUGAL_L: f64 = 50.0;
/// Published CO energies in the layout produced by [`table_csv`].
pub const CO_REFERENCE_CSV: &str = include_str!("../data/co_reference.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NumberFormat {
    /// Six decimals for energies, nine significant digits for curves.
    #[default]
    Fixed,
    /// 17 significant digits.
    Raw,
}

impl NumberFormat {
    pub fn energy(self, v: f64) -> String {
        match self {
            NumberFormat::Fixed => format!("{v:.6}"),
            NumberFormat::Raw => format!("{v:.16e}"),
        }
    }

    pub fn curve(self, v: f64) -> String {
        match self {
            NumberFormat::Fixed => significant(v, 9),
            NumberFormat::Raw => format!("{v:.16e}"),
        }
    }
}

/// `v` rounded to `digits` significant digits in positional notation.
pub fn significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v:.*}", digits.saturating_sub(1));
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub n: u32,
    pub l: u32,
    pub m: i64,
    pub kratzer: f64,
    pub noncentral: Vec<f64>,
}

/// Rows `(n, l = m)` for `n in 0..=n_max`, `l in 0..=l_max`, with `N = n`.
pub fn table_rows(
    consts: &PhysicalConstants,
    mol: &Molecule,
    n_max: u32,
    l_max: u32,
    strengths: &[f64],
) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for l in 0..=l_max {
            let m = l as i64;
            let noncentral = strengths
                .iter()
                .map(|&s| noncentral_energy(consts, mol, &NonCentralParams::equal(s), n, m, None))
                .collect::<Result<Vec<_>>>()?;
            rows.push(TableRow {
                n,
                l,
                m,
                kratzer: kratzer_energy(consts, mol, n, l as f64),
                noncentral,
            });
        }
    }
    Ok(rows)
}

fn strength_label(s: f64) -> String {
    format!("{s:.1}")
}

pub fn table_csv(rows: &[TableRow], strengths: &[f64], format: NumberFormat) -> String {
    let mut out = String::from("n,l,m,E_K");
    for &s in strengths {
        let _ = write!(out, ",E_NC_{}", strength_label(s));
    }
    out.push('\n');
    for row in rows {
        let _ = write!(
            out,
            "{},{},{},{}",
            row.n,
            row.l,
            row.m,
            format.energy(row.kratzer)
        );
        for &e in &row.noncentral {
            let _ = write!(out, ",{}", format.energy(e));
        }
        out.push('\n');
    }
    out
}

/// Parsed reference table: `(n, l, m, [E_K, E_NC...])` per row.
pub fn parse_table_csv(text: &str) -> Result<Vec<(u32, u32, i64, Vec<f64>)>> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |msg: String| Error::Parse { line: idx + 1, msg };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 4 {
            return Err(bad(format!(
                "expected at least 4 fields, got {}",
                fields.len()
            )));
        }
        let int = |s: &str| {
            s.trim()
                .parse::<i64>()
                .map_err(|e| bad(format!("{s:?}: {e}")))
        };
        let n = int(fields[0])?;
        let l = int(fields[1])?;
        let m = int(fields[2])?;
        if n < 0 || l < 0 {
            return Err(bad("n and l must be non-negative".into()));
        }
        let energies = fields[3..]
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| bad(format!("{s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push((n as u32, l as u32, m, energies));
    }
    Ok(out)
}

/// Evenly spaced `r` values, both ends included.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) || count < 2 {
        return Err(Error::InvalidParameter(format!(
            "curve grid needs 0 < r_min < r_max and at least 2 points, got [{lo}, {hi}] x {count}"
        )));
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            if i + 1 == count {
                hi
            } else {
                lo + i as f64 * step
            }
        })
        .collect())
}

/// Columns `r, V_K, V_NC_<s>..., V_K_l<L>` at fixed `theta_deg`.
pub fn curve_csv(
    consts: &PhysicalConstants,
    mol: &Molecule,
    theta_deg: f64,
    r_grid: &[f64],
    format: NumberFormat,
) -> Result<String> {
    let theta = theta_from_degrees(theta_deg)?;
    let mut params = vec![NonCentralParams::CENTRAL];
    params.extend(CURVE_STRENGTHS.iter().map(|&s| NonCentralParams::equal(s)));
    let series = sample_curves(
        consts,
        mol,
        &params,
        theta,
        r_grid,
        Some(CURVE_CENTRIFUGAL_L),
    )?;
    let mut out = String::from("r,V_K");
    for &s in &CURVE_STRENGTHS {
        let _ = write!(out, ",V_NC_{}", strength_label(s));
    }
    let _ = writeln!(out, ",V_K_l{}", CURVE_CENTRIFUGAL_L as u32);
    for (i, &r) in r_grid.iter().enumerate() {
        out.push_str(&format.curve(r));
        for s in &series {
            out.push(',');
            out.push_str(&format.curve(s.samples[i].v));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Checks a polar angle given in degrees.
pub fn theta_from_degrees(deg: f64) -> Result<f64> {
    let t = deg.to_radians();
    if deg > 0.0 && deg < 180.0 {
        Ok(t)
    } else {
        Err(Error::Domain(format!(
            "theta must lie in (0, 180) degrees, got {deg}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(significant(1.1282, 9), "1.12820000");
        assert_eq!(significant(0.000123456789123, 9), "0.000123456789");
        assert_eq!(significant(10.84514471, 9), "10.8451447");
        assert_eq!(significant(0.0, 9), "0.00000000");
        assert_eq!(significant(123456789012.0, 9), "123456789012");
    }

    #[test]
    fn reference_parses() {
        let rows = parse_table_csv(CO_REFERENCE_CSV).unwrap();
        assert_eq!(rows.len(), 16);
        assert!(rows.iter().all(|r| r.3.len() == 5 && r.1 as i64 == r.2));
        assert!(parse_table_csv("h\n1,2\n").is_err());
        let err = parse_table_csv("h\n0,0,0,x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn table_layout() {
        let rows = table_rows(
            &PhysicalConstants::table2(),
            &Molecule::co(),
            3,
            3,
            &TABLE_STRENGTHS,
        )
        .unwrap();
        let csv = table_csv(&rows, &TABLE_STRENGTHS, NumberFormat::Fixed);
        assert_eq!(csv, CO_REFERENCE_CSV);
    }

    #[test]
    fn curve_has_zero_at_equilibrium() {
        let mol = Molecule::co();
        let grid = [0.9, mol.equilibrium_separation, 2.0];
        let csv = curve_csv(
            &PhysicalConstants::codata2018(),
            &mol,
            30.0,
            &grid,
            NumberFormat::Fixed,
        )
        .unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "r,V_K,V_NC_0.1,V_NC_1.0,V_NC_5.0,V_K_l50");
        assert!(lines[2].starts_with("1.12820000,0.00000000,"));
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn grids_and_angles() {
        assert_eq!(linear_grid(1.0, 2.0, 3).unwrap(), vec![1.0, 1.5, 2.0]);
        assert!(linear_grid(0.0, 2.0, 3).is_err());
        assert!(linear_grid(1.0, 2.0, 1).is_err());
        assert!(theta_from_degrees(0.0).is_err());
        assert!(theta_from_degrees(180.0).is_err());
        assert!((theta_from_degrees(90.0).unwrap() - PI / 2.0).abs() < 1e-15);
    }
}
