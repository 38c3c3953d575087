//! Finite-difference eigensolvers for the separated radial and polar
//! equations, plus residual and inner-product utilities. Nothing here uses
//! the closed-form spectrum; it is the independent check on it.

use std::f64::consts::PI;

use crate::closedform::angular_params;
use crate::error::{Error, Result};
use crate::model::{kratzer_potential, Molecule, NonCentralParams, PhysicalConstants};
use crate::quad::integrate;

pub const MIN_GRID_POINTS: usize = 200;
const STURM_BISECTIONS: usize = 200;

/// Uniform grid of `count` nodes from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Grid1D {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "grid needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        if count < MIN_GRID_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least {MIN_GRID_POINTS} points, got {count}"
            )));
        }
        Ok(Self { lo, hi, count })
    }

    /// `[0.2 a, 4 a]` at spacing close to `spacing` Å.
    pub fn radial(mol: &Molecule, spacing: f64) -> Result<Self> {
        let a = mol.equilibrium_separation;
        let (lo, hi) = (0.2 * a, 4.0 * a);
        let count = (((hi - lo) / spacing).round() as usize + 1).max(MIN_GRID_POINTS);
        Self::new(lo, hi, count)
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.count - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.lo + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }

    /// Same interval, half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            count: 2 * (self.count - 1) + 1,
            ..*self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub grid: Grid1D,
    pub extrapolated: bool,
    /// `|E(h) - E(h/2)|` per level when extrapolated.
    pub drift: Vec<f64>,
    /// Set when some drift exceeds the requested tolerance.
    pub coarse: bool,
}

/// Symmetric tridiagonal matrix: `diag[i]`, `off[i]` couples `i` and `i+1`.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1]
            };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { coupling / q };
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `k` lowest eigenvalues by Sturm bisection.
    pub fn lowest(&self, k: usize) -> Vec<f64> {
        let (glo, ghi) = self.gershgorin();
        (0..k.min(self.len()))
            .map(|index| {
                let (mut lo, mut hi) = (glo, ghi);
                for _ in 0..STURM_BISECTIONS {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.count_below(mid) > index {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }

    /// Unit eigenvector for an (accurate) eigenvalue, by inverse iteration.
    pub fn eigenvector(&self, eigenvalue: f64) -> Vec<f64> {
        let n = self.len();
        let scale = self.diag.iter().map(|d| d.abs()).fold(1e-300, f64::max);
        let shift = eigenvalue + 1e-10 * scale;
        let mut v = vec![1.0; n];
        for _ in 0..4 {
            v = self.solve_shifted(shift, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        // sign convention: largest component positive
        let pivot = v
            .iter()
            .copied()
            .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
        if pivot < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        v
    }

    /// Solves `(T - shift I) x = rhs` by the Thomas algorithm.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let tiny = f64::EPSILON * 1e-3;
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0] - shift;
        if pivot.abs() < tiny {
            pivot = tiny;
        }
        c[0] = if n > 1 { self.off[0] / pivot } else { 0.0 };
        d[0] = rhs[0] / pivot;
        for i in 1..n {
            let mut p = self.diag[i] - shift - self.off[i - 1] * c[i - 1];
            if p.abs() < tiny {
                p = tiny;
            }
            c[i] = if i + 1 < n { self.off[i] / p } else { 0.0 };
            d[i] = (rhs[i] - self.off[i - 1] * d[i - 1]) / p;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        x
    }
}

/// `-(hbar^2/2mu) R'' + [D((r-a)/r)^2 + (hbar^2/2mu) l(l+1)/r^2] R = E R` on the
/// interior nodes of `grid`, Dirichlet at both ends.
pub fn radial_matrix(
    consts: &PhysicalConstants,
    mol: &Molecule,
    l_eff: f64,
    grid: &Grid1D,
) -> Result<SymTridiagonal> {
    if !(grid.lo > 0.0) {
        return Err(Error::Domain(format!(
            "radial grid must start at r > 0, got {}",
            grid.lo
        )));
    }
    let t = consts.kinetic_prefactor(mol.reduced_mass);
    let h = grid.spacing();
    let kinetic = t / (h * h);
    let centrifugal = t * l_eff * (l_eff + 1.0);
    let interior = grid.count - 2;
    let diag = (1..=interior)
        .map(|i| {
            let r = grid.point(i);
            Ok(2.0 * kinetic + kratzer_potential(mol, r)? + centrifugal / (r * r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymTridiagonal {
        diag,
        off: vec![-kinetic; interior - 1],
    })
}

/// Lowest `k` radial eigenvalues (eV). With `richardson`, a second solve at
/// half spacing gives `(4 E(h/2) - E(h)) / 3`; `tolerance` flags drift.
pub fn fd_radial_spectrum(
    consts: &PhysicalConstants,
    mol: &Molecule,
    l_eff: f64,
    grid: &Grid1D,
    k: usize,
    richardson: bool,
    tolerance: Option<f64>,
) -> Result<SpectrumResult> {
    let coarse = radial_matrix(consts, mol, l_eff, grid)?.lowest(k);
    if !richardson {
        return Ok(SpectrumResult {
            eigenvalues: coarse,
            grid: *grid,
            extrapolated: false,
            drift: Vec::new(),
            coarse: false,
        });
    }
    let fine_grid = grid.refined();
    let fine = radial_matrix(consts, mol, l_eff, &fine_grid)?.lowest(k);
    Ok(extrapolate(&coarse, &fine, *grid, tolerance))
}

fn extrapolate(
    coarse: &[f64],
    fine: &[f64],
    grid: Grid1D,
    tolerance: Option<f64>,
) -> SpectrumResult {
    let eigenvalues = coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    let drift: Vec<f64> = coarse
        .iter()
        .zip(fine)
        .map(|(c, f)| (c - f).abs())
        .collect();
    let coarse_flag = tolerance.is_some_and(|tol| drift.iter().any(|&d| d > tol));
    SpectrumResult {
        eigenvalues,
        grid,
        extrapolated: true,
        drift,
        coarse: coarse_flag,
    }
}

/// Unit-normalized FD eigenvector `index` of the radial operator, sampled at
/// the interior nodes, with the nodes.
pub fn fd_radial_eigenvector(
    consts: &PhysicalConstants,
    mol: &Molecule,
    l_eff: f64,
    grid: &Grid1D,
    index: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let matrix = radial_matrix(consts, mol, l_eff, grid)?;
    let e = *matrix
        .lowest(index + 1)
        .last()
        .ok_or_else(|| Error::InvalidParameter("empty grid".into()))?;
    let nodes = (1..grid.count - 1).map(|i| grid.point(i)).collect();
    Ok((nodes, matrix.eigenvector(e)))
}

/// Polar operator in self-adjoint form
/// `-(sin t Theta')' + (m^2 + 2mu beta/hbar^2 + 2mu gamma/hbar^2 cos t)/sin t Theta = lambda sin t Theta`
/// on `cells` equal cells of `[0, pi]` (cell-centred finite volumes; the flux
/// weight `sin t` vanishes on the outer faces), symmetrized by `W^{-1/2}`.
/// Returns the matrix and the cell centres.
pub fn angular_matrix(
    consts: &PhysicalConstants,
    mol: &Molecule,
    nc: &NonCentralParams,
    m: i64,
    cells: usize,
) -> Result<(SymTridiagonal, Vec<f64>)> {
    if cells < MIN_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "polar grid needs at least {MIN_GRID_POINTS} cells, got {cells}"
        )));
    }
    let coupling = consts.coupling(mol.reduced_mass);
    let (b, g) = (coupling * nc.beta, coupling * nc.gamma);
    let m2 = (m * m) as f64;
    let h = PI / cells as f64;
    let centres: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * h).collect();
    let face = |i: usize| {
        if i == 0 || i == cells {
            0.0
        } else {
            (i as f64 * h).sin()
        }
    };
    let weight: Vec<f64> = centres.iter().map(|t| t.sin()).collect();
    let diag = (0..cells)
        .map(|i| {
            let t = centres[i];
            let s = weight[i];
            let stiffness = (face(i) + face(i + 1)) / (h * h);
            (stiffness + (m2 + b + g * t.cos()) / s) / s
        })
        .collect();
    let off = (0..cells - 1)
        .map(|i| -face(i + 1) / (h * h) / (weight[i] * weight[i + 1]).sqrt())
        .collect();
    Ok((SymTridiagonal { diag, off }, centres))
}

fn l_from_separation(lambda: f64) -> f64 {
    0.5 * (-1.0 + (1.0 + 4.0 * lambda).sqrt())
}

/// Lowest `k` effective angular momenta `l = (-1 + sqrt(1 + 4 lambda))/2` of the
/// polar equation. With `richardson`, `lambda` is extrapolated from `cells`
/// and `2 cells`.
pub fn fd_angular_leff(
    consts: &PhysicalConstants,
    mol: &Molecule,
    nc: &NonCentralParams,
    m: i64,
    cells: usize,
    k: usize,
    richardson: bool,
) -> Result<SpectrumResult> {
    // surfaces the complex-u domain error; the FD operator itself is fine there
    angular_params(consts, mol, nc, m)?;
    let coarse = angular_matrix(consts, mol, nc, m, cells)?.0.lowest(k);
    let grid = Grid1D::new(0.0, PI, cells)?;
    let spectrum = if richardson {
        let fine = angular_matrix(consts, mol, nc, m, 2 * cells)?.0.lowest(k);
        extrapolate(&coarse, &fine, grid, None)
    } else {
        SpectrumResult {
            eigenvalues: coarse,
            grid,
            extrapolated: false,
            drift: Vec::new(),
            coarse: false,
        }
    };
    Ok(SpectrumResult {
        eigenvalues: spectrum
            .eigenvalues
            .iter()
            .map(|&l| l_from_separation(l))
            .collect(),
        ..spectrum
    })
}

/// FD polar eigenvector `index` as `(theta_i, sqrt(sin theta_i) Theta(theta_i))`,
/// unit-normalized; compare against `sqrt(sin theta) Theta` sampled on the centres.
pub fn fd_angular_eigenvector(
    consts: &PhysicalConstants,
    mol: &Molecule,
    nc: &NonCentralParams,
    m: i64,
    cells: usize,
    index: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let (matrix, centres) = angular_matrix(consts, mol, nc, m, cells)?;
    let e = *matrix
        .lowest(index + 1)
        .last()
        .ok_or_else(|| Error::InvalidParameter("empty grid".into()))?;
    Ok((centres, matrix.eigenvector(e)))
}

/// Max over interior nodes of `|y'' + p y' + q y|`, divided by `max |y''|`
/// (fourth-order centred differences). Zero for the zero function.
pub fn ode_residual<P, Q>(samples: &[f64], grid: &Grid1D, p: P, q: Q) -> f64
where
    P: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    assert_eq!(samples.len(), grid.count, "one sample per grid node");
    let h = grid.spacing();
    let y = samples;
    let mut max_residual = 0.0f64;
    let mut max_second = 0.0f64;
    for i in 2..grid.count - 2 {
        let x = grid.point(i);
        let second = (-y[i - 2] + 16.0 * y[i - 1] - 30.0 * y[i] + 16.0 * y[i + 1] - y[i + 2])
            / (12.0 * h * h);
        let first = (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h);
        let residual = second + p(x) * first + q(x) * y[i];
        max_residual = max_residual.max(residual.abs());
        max_second = max_second.max(second.abs());
    }
    if max_second > 0.0 {
        max_residual / max_second
    } else {
        max_residual
    }
}

/// `int f g w` over `[lo, hi]` by adaptive quadrature; the error target is
/// `rel_tol` times `int |f g w|`.
pub fn quadrature_inner_product<F, G, W>(
    f: F,
    g: G,
    weight: W,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
    W: Fn(f64) -> f64,
{
    let magnitude = integrate(|x| (f(x) * g(x) * weight(x)).abs(), lo, hi, 1e-6, 0.0, 64)?.value;
    let result = integrate(
        |x| f(x) * g(x) * weight(x),
        lo,
        hi,
        rel_tol,
        rel_tol * magnitude,
        64,
    )?;
    Ok(result.value)
}

/// `sum a_i b_i / (|a| |b|)`.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}
