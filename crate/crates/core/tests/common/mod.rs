//! Hand-derived closed forms and brute-force numerical oracles. Nothing here
//! calls into the library's numerics, so agreement is a real cross-check.

#![allow(dead_code)]

use nalgebra::{SMatrix, SVector};

/// Curvature constant of a Kähler–Einstein curve factor.
pub fn kappa(kind: &str) -> f64 {
    match kind {
        "P1" => 2.0,
        "T2" => 0.0,
        "Sigma2" => -2.0,
        other => panic!("unknown curve {other}"),
    }
}

/// `c(t) = (c₀ + κ)e^{-t} - κ`.
pub fn product_coeff(c0: f64, kappa: f64, t: f64) -> f64 {
    (c0 + kappa) * (-t).exp() - kappa
}

/// First zero of any factor coefficient; only κ > 0 factors ever vanish.
pub fn product_singular_time(c0: &[f64], kappas: &[f64]) -> f64 {
    c0.iter()
        .zip(kappas)
        .filter(|(_, k)| **k > 0.0)
        .map(|(c, k)| ((c + k) / k).ln())
        .fold(f64::INFINITY, f64::min)
}

/// Volume `∏cᵢ` vanishes to order equal to the number of factors dying at `T`.
pub fn product_collapse_exponent(c0: &[f64], kappas: &[f64]) -> usize {
    let t = product_singular_time(c0, kappas);
    if !t.is_finite() {
        // ∏cᵢ ~ e^{-Kt} with K the number of torus factors.
        return kappas.iter().filter(|k| **k == 0.0).count();
    }
    c0.iter()
        .zip(kappas)
        .filter(|(c, k)| **k > 0.0 && (((*c + *k) / *k).ln() - t).abs() < 1e-12)
        .count()
}

/// Class `bH - aE` on 𝔽₁ moves to `b_t H - a_t E` with
/// `a_t = (a+1)e^{-t} - 1`, `b_t = (b+3)e^{-t} - 3`; `E` is contracted when
/// `a_t = 0` and the fibers `H - E` collapse when `b_t = a_t`.
pub fn f1_slopes(a: f64, b: f64, t: f64) -> (f64, f64) {
    ((a + 1.0) * (-t).exp() - 1.0, (b + 3.0) * (-t).exp() - 3.0)
}

pub fn f1_singular_time(a: f64, b: f64) -> f64 {
    (a + 1.0).ln().min(((b - a + 2.0) / 2.0).ln())
}

/// `0` if `E` goes first (`b > 3a`), `1` if the fibers do, `2` if both.
pub fn f1_collapse_exponent(a: f64, b: f64) -> usize {
    let e = (a + 1.0).ln();
    let f = ((b - a + 2.0) / 2.0).ln();
    if (e - f).abs() < 1e-12 {
        2
    } else if e < f {
        0
    } else {
        1
    }
}

/// `F₀ = aρ + (b-a)log(1+e^ρ)` with its first three derivatives.
pub fn f0_jet(a: f64, b: f64, rho: f64) -> [f64; 4] {
    let s = 1.0 / (1.0 + (-rho).exp());
    let sm = 1.0 / (1.0 + rho.exp());
    let sp = if rho > 0.0 {
        rho + (-rho).exp().ln_1p()
    } else {
        rho.exp().ln_1p()
    };
    [
        a * rho + (b - a) * sp,
        a + (b - a) * s,
        (b - a) * s * sm,
        (b - a) * s * sm * (sm - s),
    ]
}

/// Ricci eigenvalues `(R′/F′, R″/F″)` of the initial Calabi metric, with
/// `R = 2ρ - log(F₀′F₀″)` differentiated by hand.
pub fn f0_ricci_eigs(a: f64, b: f64, rho: f64) -> (f64, f64) {
    let [_, f1, f2, _] = f0_jet(a, b, rho);
    let s = 1.0 / (1.0 + (-rho).exp());
    let tangential = (2.0 - f2 / f1 - (1.0 - 2.0 * s)) / f1;
    let radial = -(1.0 - 2.0 * s) / f1 + f2 / (f1 * f1) + 2.0 / (b - a);
    (tangential, radial)
}

const D1: [f64; 7] = [
    -1.0 / 60.0,
    3.0 / 20.0,
    -3.0 / 4.0,
    0.0,
    3.0 / 4.0,
    -3.0 / 20.0,
    1.0 / 60.0,
];
const D2: [f64; 7] = [
    1.0 / 90.0,
    -3.0 / 20.0,
    3.0 / 2.0,
    -49.0 / 18.0,
    3.0 / 2.0,
    -3.0 / 20.0,
    1.0 / 90.0,
];

/// Real Hessian of `phi` on `ℝ⁴ = ℂ²` (coordinates `x₁, y₁, x₂, y₂`) by
/// sixth-order central differences with step `h`.
pub fn real_hessian(phi: &dyn Fn([f64; 4]) -> f64, p: [f64; 4], h: f64) -> [[f64; 4]; 4] {
    let at = |offsets: &[(usize, f64)]| {
        let mut q = p;
        for &(i, d) in offsets {
            q[i] += d;
        }
        phi(q)
    };
    let mut hess = [[0.0; 4]; 4];
    for i in 0..4 {
        hess[i][i] = (0..7)
            .map(|k| D2[k] * at(&[(i, (k as f64 - 3.0) * h)]))
            .sum::<f64>()
            / (h * h);
        for j in 0..i {
            let mut acc = 0.0;
            for k in 0..7 {
                for l in 0..7 {
                    let w = D1[k] * D1[l];
                    if w != 0.0 {
                        acc += w * at(&[(i, (k as f64 - 3.0) * h), (j, (l as f64 - 3.0) * h)]);
                    }
                }
            }
            hess[i][j] = acc / (h * h);
            hess[j][i] = hess[i][j];
        }
    }
    hess
}

/// `det(∂²Φ/∂zᵢ∂z̄ⱼ)` on ℂ² from the real Hessian:
/// `Φ_{zᵢz̄ⱼ} = ¼[(Φ_{xᵢxⱼ} + Φ_{yᵢyⱼ}) + i(Φ_{xᵢyⱼ} - Φ_{yᵢxⱼ})]`.
pub fn complex_hessian_det(phi: &dyn Fn([f64; 4]) -> f64, p: [f64; 4], h: f64) -> f64 {
    let m = real_hessian(phi, p, h);
    let (x1, y1, x2, y2) = (0, 1, 2, 3);
    let h11 = 0.25 * (m[x1][x1] + m[y1][y1]);
    let h22 = 0.25 * (m[x2][x2] + m[y2][y2]);
    let re12 = 0.25 * (m[x1][x2] + m[y1][y2]);
    let im12 = 0.25 * (m[x1][y2] - m[y1][x2]);
    h11 * h22 - (re12 * re12 + im12 * im12)
}

/// Point of `ℂ²` with `|z|² = e^ρ` in a direction fixed by two angles.
pub fn point_on_sphere(rho: f64, theta: f64, phase1: f64, phase2: f64) -> [f64; 4] {
    let r = (0.5 * rho).exp();
    let (c, s) = (theta.cos(), theta.sin());
    [
        r * c * phase1.cos(),
        r * c * phase1.sin(),
        r * s * phase2.cos(),
        r * s * phase2.sin(),
    ]
}

/// Twenty sample points: ρ spread over `[-3, 3]` off the grid nodes, with
/// varied directions.
pub fn sample_points() -> Vec<(f64, [f64; 4])> {
    (0..20)
        .map(|k| {
            let rho = -3.0 + 6.0 * (k as f64 + 0.37) / 20.0;
            let theta = 0.2 + 1.1 * ((k * 7) % 20) as f64 / 20.0;
            let p = point_on_sphere(rho, theta, 0.3 + 0.9 * k as f64, 2.1 - 0.7 * k as f64);
            (rho, p)
        })
        .collect()
}

/// Degree-6 interpolant through seven consecutive nodes, in powers of
/// `x = (ρ - ρ_c)/h`.
pub struct LocalPoly {
    pub center: f64,
    pub h: f64,
    pub coeffs: [f64; 7],
}

impl LocalPoly {
    /// Interpolates `values` at `rho[c-3..=c+3]`.
    pub fn through(rho: &[f64], values: &[f64], c: usize) -> Self {
        let h = rho[c + 1] - rho[c];
        let vander = SMatrix::<f64, 7, 7>::from_fn(|i, j| (i as f64 - 3.0).powi(j as i32));
        let rhs = SVector::<f64, 7>::from_fn(|i, _| values[c + i - 3]);
        let sol = vander.lu().solve(&rhs).expect("nonsingular Vandermonde");
        let mut coeffs = [0.0; 7];
        coeffs.copy_from_slice(sol.as_slice());
        Self {
            center: rho[c],
            h,
            coeffs,
        }
    }

    /// `(p, p′, p″)` at `rho`, derivatives in ρ.
    pub fn eval(&self, rho: f64) -> (f64, f64, f64) {
        let x = (rho - self.center) / self.h;
        let (mut p, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            p = p * x + c;
        }
        for (k, c) in self.coeffs.iter().enumerate().skip(1).rev() {
            d1 = d1 * x + k as f64 * c;
        }
        for (k, c) in self.coeffs.iter().enumerate().skip(2).rev() {
            d2 = d2 * x + (k * (k - 1)) as f64 * c;
        }
        (p, d1 / self.h, d2 / (self.h * self.h))
    }
}

/// Nearest grid index to `rho` on a uniform grid.
pub fn nearest_node(grid: &[f64], rho: f64) -> usize {
    let h = grid[1] - grid[0];
    (((rho - grid[0]) / h).round() as usize).clamp(3, grid.len() - 4)
}

/// Relative difference.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
