//! Independent reference implementations used by the integration tests:
//! exact rational sums, textbook recurrences, composite Simpson, and the
//! closed-form spectrum written out from scratch.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite input")
}

pub fn q_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pow(x: &BigRational, k: u32) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * x)
}

fn factorial(k: u32) -> BigRational {
    (1..=k as i64).fold(BigRational::one(), |acc, j| acc * q_int(j))
}

/// `binom(top, k) = top (top-1) ... (top-k+1) / k!` for rational `top`.
pub fn binomial(top: &BigRational, k: u32) -> BigRational {
    let mut num = BigRational::one();
    for j in 0..k as i64 {
        num *= top - q_int(j);
    }
    num / factorial(k)
}

/// `(a)_k`.
pub fn pochhammer(a: &BigRational, k: u32) -> BigRational {
    let mut out = BigRational::one();
    for j in 0..k as i64 {
        out *= a + q_int(j);
    }
    out
}

/// `1F1(-n; c; z)` summed exactly.
pub fn exact_hyp1f1(n: u32, c: f64, z: f64) -> f64 {
    let (c, z) = (q(c), q(z));
    let minus_n = q_int(-(n as i64));
    let mut sum = BigRational::zero();
    for k in 0..=n {
        sum += pochhammer(&minus_n, k) / (pochhammer(&c, k) * factorial(k)) * pow(&z, k);
    }
    sum.to_f64().unwrap()
}

/// `2F1(-n, rho + n; sigma; z)` summed exactly.
pub fn exact_hyp2f1(n: u32, rho: f64, sigma: f64, z: f64) -> f64 {
    let (rho, sigma, z) = (q(rho), q(sigma), q(z));
    let minus_n = q_int(-(n as i64));
    let b = rho + q_int(n as i64);
    let mut sum = BigRational::zero();
    for k in 0..=n {
        sum += pochhammer(&minus_n, k) * pochhammer(&b, k) / (pochhammer(&sigma, k) * factorial(k))
            * pow(&z, k);
    }
    sum.to_f64().unwrap()
}

/// `L_n^nu(x) = sum_k (-1)^k binom(n + nu, n - k) x^k / k!`, exactly.
pub fn exact_laguerre(n: u32, nu: f64, x: f64) -> f64 {
    let top = q_int(n as i64) + q(nu);
    let x = q(x);
    let mut sum = BigRational::zero();
    for k in 0..=n {
        let term = binomial(&top, n - k) * pow(&x, k) / factorial(k);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum.to_f64().unwrap()
}

/// `P_n^{(p,q)}(x) = sum_s binom(n+p, n-s) binom(n+q, s) ((x-1)/2)^s ((x+1)/2)^{n-s}`, exactly.
pub fn exact_jacobi(n: u32, p: f64, qq: f64, x: f64) -> f64 {
    let np = q_int(n as i64) + q(p);
    let nq = q_int(n as i64) + q(qq);
    let x = q(x);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let minus = (&x - q_int(1)) * &half;
    let plus = (&x + q_int(1)) * &half;
    let mut sum = BigRational::zero();
    for s in 0..=n {
        sum += binomial(&np, n - s) * binomial(&nq, s) * pow(&minus, s) * pow(&plus, n - s);
    }
    sum.to_f64().unwrap()
}

/// Three-term recurrence for `P_n^{(p,q)}(x)`.
pub fn jacobi_recurrence(n: u32, p: f64, q: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 0.5 * (p - q) + 0.5 * (p + q + 2.0) * x;
    for k in 1..n {
        let k = k as f64;
        let c = 2.0 * k + p + q;
        let a1 = 2.0 * (k + 1.0) * (k + p + q + 1.0) * c;
        let a2 = (c + 1.0) * (p * p - q * q);
        let a3 = c * (c + 1.0) * (c + 2.0);
        let a4 = 2.0 * (k + p) * (k + q) * (c + 2.0);
        let next = ((a2 + a3 * x) * cur - a4 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// `(k+1) L_{k+1} = (2k + 1 + nu - x) L_k - (k + nu) L_{k-1}`.
pub fn laguerre_recurrence(n: u32, nu: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + nu - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + nu - x) * cur - (k + nu) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Composite Simpson with `panels` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels: usize) -> f64 {
    let panels = panels + panels % 2;
    let h = (hi - lo) / panels as f64;
    let mut sum = f(lo) + f(hi);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(lo + i as f64 * h);
    }
    sum * h / 3.0
}

/// `E = D - 4 D alpha^2 / (1 + 2n + sqrt(1 + 4(alpha^2 + l(l+1))))^2`.
pub fn kratzer_level(d: f64, alpha2: f64, n: u32, l: f64) -> f64 {
    let root = (1.0 + 4.0 * (alpha2 + l * (l + 1.0))).sqrt();
    let den = 1.0 + 2.0 * n as f64 + root;
    d - 4.0 * d * alpha2 / (den * den)
}

/// `alpha^2 = 2 mu D a^2 / hbar^2` with `hbar^2` in eV Å² amu.
pub fn alpha2(hbar2: f64, d: f64, a: f64, mu: f64) -> f64 {
    2.0 * mu * d * a * a / hbar2
}

/// `kappa` of the polar problem: `u = sqrt((m^2 + B)^2 - G^2)`,
/// `kappa = sqrt((m^2 + B + u)/2)` with `B, G = 2 mu (beta, gamma) / hbar^2`.
pub fn kappa(hbar2: f64, mu: f64, beta: f64, gamma: f64, m: i64) -> f64 {
    let big_b = 2.0 * mu * beta / hbar2;
    let big_g = 2.0 * mu * gamma / hbar2;
    let s = (m * m) as f64 + big_b;
    let u = (s * s - big_g * big_g).sqrt();
    ((s + u) / 2.0).sqrt()
}

/// `w = b (N+2)^2 n (n + ((2m+1) b + 2a) / ((N+2) b))`.
pub fn w_family(n: u32, m: f64, a: f64, b: f64, big_n: i32) -> f64 {
    let n = n as f64;
    let k = (big_n + 2) as f64;
    b * k * k * n * (n + ((2.0 * m + 1.0) * b + 2.0 * a) / (k * b))
}

/// `sum_k |binom(n + nu, n - k) x^k / k!|`: the magnitude scale of the
/// Laguerre sum at `x`.
pub fn laguerre_scale(n: u32, nu: f64, x: f64) -> f64 {
    let top = q_int(n as i64) + q(nu);
    (0..=n)
        .map(|k| {
            (binomial(&top, n - k) / factorial(k))
                .to_f64()
                .unwrap()
                .abs()
                * x.abs().powi(k as i32)
        })
        .sum()
}

/// Magnitude scale of the explicit Jacobi sum at `x`.
pub fn jacobi_scale(n: u32, p: f64, qq: f64, x: f64) -> f64 {
    let np = q_int(n as i64) + q(p);
    let nq = q_int(n as i64) + q(qq);
    (0..=n)
        .map(|s| {
            (binomial(&np, n - s) * binomial(&nq, s))
                .to_f64()
                .unwrap()
                .abs()
                * (0.5 * (x - 1.0)).abs().powi(s as i32)
                * (0.5 * (x + 1.0)).abs().powi((n - s) as i32)
        })
        .sum()
}

/// Uniform draw from the dyadic lattice `k / 1024` in `[lo, hi)`; exact in
/// binary so rational oracles stay small.
pub fn dyadic<R: rand::Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    let steps = ((hi - lo) * 1024.0) as i64;
    lo + rng.gen_range(0..steps) as f64 / 1024.0
}
