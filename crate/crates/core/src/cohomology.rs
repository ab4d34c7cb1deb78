//! Finite-dimensional cohomology engine for the normalized flow.
//!
//! The normalized flow moves the Kähler class along the segment
//! `[ω_t] = -c₁ + e^{-t}([ω₀] + c₁)`. Everything the flow "knows" about its
//! own lifespan and total volume is decided here: the first time the segment
//! leaves the (polyhedral) Kähler cone, the limit class at that time, and the
//! vanishing order `K` of the volume `[ω_t]ⁿ` there.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{FlowError, Result};

/// Default absolute tolerance for positivity of facet values and intersections.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Coordinates of a real (1,1)-class in a declared basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CohClass(pub Vec<f64>);

impl CohClass {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self(coeffs)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|c| c * factor).collect())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.0.iter().all(|c| c.abs() <= tol)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.dim(), other.dim(), "class dimension mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| f(*a, *b)).collect())
    }
}

impl Add for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        self.scale(-1.0)
    }
}

impl Mul<&CohClass> for f64 {
    type Output = CohClass;
    fn mul(self, rhs: &CohClass) -> CohClass {
        rhs.scale(self)
    }
}

/// Fully symmetric n-linear intersection form on basis indices.
///
/// Entries are stored under their sorted index tuple, so symmetry holds by
/// construction; unspecified entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionTensor {
    n: usize,
    dim: usize,
    entries: BTreeMap<Vec<usize>, f64>,
}

impl IntersectionTensor {
    /// Builds the tensor from `(indices, value)` pairs. Each multiset of
    /// indices may be given once in any order; conflicting duplicates are
    /// rejected.
    pub fn from_entries(n: usize, dim: usize, entries: &[(Vec<usize>, f64)]) -> Result<Self> {
        if n < 2 {
            return Err(FlowError::DegenerateSetup(format!(
                "complex dimension must be at least 2, got {n}"
            )));
        }
        let mut map = BTreeMap::new();
        for (idx, value) in entries {
            if idx.len() != n {
                return Err(FlowError::Arity {
                    expected: n,
                    got: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
                return Err(FlowError::DegenerateSetup(format!(
                    "basis index {bad} out of range for dimension {dim}"
                )));
            }
            let mut key = idx.clone();
            key.sort_unstable();
            if let Some(prev) = map.insert(key.clone(), *value) {
                if prev != *value {
                    return Err(FlowError::DegenerateSetup(format!(
                        "conflicting intersection entries for {key:?}: {prev} vs {value}"
                    )));
                }
            }
        }
        Ok(Self {
            n,
            dim,
            entries: map,
        })
    }

    pub fn complex_dim(&self) -> usize {
        self.n
    }

    pub fn basis_dim(&self) -> usize {
        self.dim
    }

    /// Value on basis indices in any order.
    pub fn entry(&self, idx: &[usize]) -> f64 {
        let mut key = idx.to_vec();
        key.sort_unstable();
        self.entries.get(&key).copied().unwrap_or(0.0)
    }

    /// Multilinear evaluation `α₁·α₂···αₙ`.
    pub fn evaluate(&self, classes: &[&CohClass]) -> Result<f64> {
        if classes.len() != self.n {
            return Err(FlowError::Arity {
                expected: self.n,
                got: classes.len(),
            });
        }
        for c in classes {
            if c.dim() != self.dim {
                return Err(FlowError::DimensionMismatch {
                    expected: self.dim,
                    got: c.dim(),
                });
            }
        }
        // Sum over every ordered index tuple; the stored entries are sparse
        // but the expansion is over all d^n tuples, which is tiny here.
        let mut total = 0.0;
        let mut idx = vec![0usize; self.n];
        loop {
            let value = self.entry(&idx);
            if value != 0.0 {
                let weight: f64 = idx.iter().zip(classes).map(|(&i, c)| c.0[i]).product();
                total += value * weight;
            }
            let mut pos = 0;
            loop {
                if pos == self.n {
                    return Ok(total);
                }
                idx[pos] += 1;
                if idx[pos] < self.dim {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    /// `α^(n-k) · β^k`.
    pub fn mixed(&self, alpha: &CohClass, beta: &CohClass, k: usize) -> Result<f64> {
        let mut args: Vec<&CohClass> = Vec::with_capacity(self.n);
        args.extend(std::iter::repeat_n(alpha, self.n - k.min(self.n)));
        args.extend(std::iter::repeat_n(beta, k.min(self.n)));
        self.evaluate(&args)
    }
}

/// Polyhedral Kähler cone given by facet functionals; the open cone is where
/// every functional is strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub facets: Vec<Vec<f64>>,
    #[serde(default)]
    pub facet_labels: Vec<String>,
}

impl ConeSpec {
    pub fn new(facets: Vec<Vec<f64>>) -> Self {
        Self {
            facets,
            facet_labels: Vec::new(),
        }
    }

    pub fn with_labels(mut self, labels: &[&str]) -> Self {
        self.facet_labels = labels.iter().map(|s| s.to_string()).collect();
        self
    }

    pub fn label(&self, i: usize) -> String {
        self.facet_labels
            .get(i)
            .cloned()
            .unwrap_or_else(|| format!("facet{i}"))
    }

    pub fn facet_values(&self, class: &CohClass) -> Vec<f64> {
        self.facets
            .iter()
            .map(|f| f.iter().zip(&class.0).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn min_facet_value(&self, class: &CohClass) -> f64 {
        self.facet_values(class)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Everything the class ODE needs: intersection data, cone, `c₁` and `[ω₀]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CohomologySetup {
    pub basis: Vec<String>,
    pub tensor: IntersectionTensor,
    pub cone: ConeSpec,
    pub c1: CohClass,
    pub omega0: CohClass,
    pub tol: f64,
}

impl CohomologySetup {
    /// Validates shapes, cone membership of `[ω₀]` and `[ω₀]ⁿ > 0`.
    pub fn new(
        basis: Vec<String>,
        tensor: IntersectionTensor,
        cone: ConeSpec,
        c1: CohClass,
        omega0: CohClass,
    ) -> Result<Self> {
        let setup = Self {
            basis,
            tensor,
            cone,
            c1,
            omega0,
            tol: DEFAULT_TOL,
        };
        setup.validate()?;
        Ok(setup)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn complex_dim(&self) -> usize {
        self.tensor.complex_dim()
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        if self.tensor.basis_dim() != d {
            return Err(FlowError::DimensionMismatch {
                expected: d,
                got: self.tensor.basis_dim(),
            });
        }
        for class in [&self.c1, &self.omega0] {
            if class.dim() != d {
                return Err(FlowError::DimensionMismatch {
                    expected: d,
                    got: class.dim(),
                });
            }
        }
        if self.cone.facets.is_empty() {
            return Err(FlowError::DegenerateSetup("cone has no facets".into()));
        }
        if let Some(f) = self.cone.facets.iter().find(|f| f.len() != d) {
            return Err(FlowError::DimensionMismatch {
                expected: d,
                got: f.len(),
            });
        }
        for (i, v) in self.cone.facet_values(&self.omega0).iter().enumerate() {
            if *v <= self.tol {
                return Err(FlowError::DegenerateSetup(format!(
                    "[omega_0] violates {} at t = 0 (value {v})",
                    self.cone.label(i)
                )));
            }
        }
        let top = self.top_power(&self.omega0)?;
        if top <= self.tol {
            return Err(FlowError::DegenerateSetup(format!(
                "[omega_0]^n = {top} is not positive"
            )));
        }
        Ok(())
    }

    /// `αⁿ`.
    pub fn top_power(&self, alpha: &CohClass) -> Result<f64> {
        self.tensor.mixed(alpha, alpha, 0)
    }

    /// Class on the segment for a given decay factor `e^{-t}` in `[0, 1]`.
    pub fn class_at_decay(&self, decay: f64) -> CohClass {
        let shifted = &self.omega0 + &self.c1;
        &(-&self.c1) + &shifted.scale(decay)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(FlowError::NegativeTime(t));
    }
    Ok(())
}

/// `[ω_t] = -c₁ + e^{-t}([ω₀] + c₁)`; `t = +∞` gives `-c₁`.
pub fn class_at(setup: &CohomologySetup, t: f64) -> Result<CohClass> {
    check_time(t)?;
    if t.is_infinite() {
        return Ok(-&setup.c1);
    }
    // e^{-t}[ω₀] + (e^{-t} - 1)c₁, exact at t = 0 and accurate for small t.
    Ok(&setup.omega0.scale((-t).exp()) + &setup.c1.scale((-t).exp_m1()))
}

/// First exit of the class segment from the open Kähler cone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Singularity {
    /// `T`, `f64::INFINITY` when the class never leaves the cone.
    pub time: f64,
    /// `e^{-T}` carried exactly (0 for infinite time).
    pub decay: f64,
    /// Facets that vanish at `T`.
    pub active_facets: Vec<usize>,
    /// Hitting time per facet; `None` for facets the segment never reaches.
    pub facet_times: Vec<Option<f64>>,
    /// `[ω_T]`, or `-c₁` for infinite time.
    pub limit_class: CohClass,
}

impl Singularity {
    pub fn is_finite(&self) -> bool {
        self.time.is_finite()
    }
}

/// Maximal existence time of the normalized flow.
///
/// For a facet `ℓ` the facet value along the segment is
/// `-ℓ(c₁) + e^{-t} ℓ([ω₀] + c₁)`, which vanishes at `e^{-t} = ℓ(c₁)/ℓ([ω₀]+c₁)`
/// when that ratio lies in `(tol, 1]`. `T` is the earliest such time.
pub fn singularity_time(setup: &CohomologySetup) -> Result<Singularity> {
    let tol = setup.tol;
    let initial = setup.cone.facet_values(&setup.omega0);
    if let Some(i) = initial.iter().position(|v| *v <= tol) {
        return Err(FlowError::DegenerateSetup(format!(
            "[omega_0] violates {} at t = 0",
            setup.cone.label(i)
        )));
    }
    let l_c1 = setup.cone.facet_values(&setup.c1);
    let l_shift = setup.cone.facet_values(&(&setup.omega0 + &setup.c1));

    let ratios: Vec<Option<f64>> = l_c1
        .iter()
        .zip(&l_shift)
        .map(|(&num, &den)| {
            if den <= 0.0 {
                return None;
            }
            let r = num / den;
            (r > tol && r <= 1.0).then_some(r)
        })
        .collect();

    let facet_times = ratios.iter().map(|r| r.map(|r| -r.ln())).collect();
    let decay = ratios.iter().flatten().copied().fold(0.0_f64, f64::max);

    let (time, active) = if decay > 0.0 {
        let active = ratios
            .iter()
            .enumerate()
            .filter(|(_, r)| r.is_some_and(|r| (r - decay).abs() <= tol))
            .map(|(i, _)| i)
            .collect();
        (-decay.ln(), active)
    } else {
        (f64::INFINITY, Vec::new())
    };

    Ok(Singularity {
        time,
        decay,
        active_facets: active,
        facet_times,
        limit_class: setup.class_at_decay(decay),
    })
}

/// `α₁···αₙ`.
pub fn top_intersection(tensor: &IntersectionTensor, classes: &[CohClass]) -> Result<f64> {
    let refs: Vec<&CohClass> = classes.iter().collect();
    tensor.evaluate(&refs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseExponent {
    pub k: usize,
    /// `[ω_T]^{n-k} · [ω₀]^k` for `k = 0..=n`.
    pub mixed: Vec<f64>,
}

/// Minimal `k` with `[ω_T]^{n-k}·[ω₀]^k > tol`, where `ω_T` is the limit class
/// of `singularity` (`-c₁` for infinite time).
pub fn collapse_exponent(
    setup: &CohomologySetup,
    singularity: &Singularity,
) -> Result<CollapseExponent> {
    let n = setup.complex_dim();
    let mixed = (0..=n)
        .map(|k| {
            setup
                .tensor
                .mixed(&singularity.limit_class, &setup.omega0, k)
        })
        .collect::<Result<Vec<_>>>()?;
    match mixed.iter().position(|v| *v > setup.tol) {
        Some(k) => Ok(CollapseExponent { k, mixed }),
        None => Err(FlowError::InconsistentCollapse { n, top: mixed[n] }),
    }
}

/// `[ω_t]ⁿ`.
pub fn volume_poly(setup: &CohomologySetup, t: f64) -> Result<f64> {
    let class = class_at(setup, t)?;
    setup.top_power(&class)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NefCheck {
    pub nef: bool,
    /// Smallest facet value.
    pub margin: f64,
}

/// Membership in the closed cone, up to `-tol`.
pub fn nef_check(setup: &CohomologySetup, class: &CohClass) -> NefCheck {
    let margin = setup.cone.min_facet_value(class);
    NefCheck {
        nef: margin >= -setup.tol,
        margin,
    }
}

/// Normalized time `t` to the unnormalized Ricci-flow time `s = (e^t - 1)/2`.
pub fn time_rescale(t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(t.exp_m1() / 2.0)
}

/// Inverse of [`time_rescale`]: `t = log(1 + 2s)`.
pub fn time_unscale(s: f64) -> Result<f64> {
    if s.is_nan() || s < 0.0 {
        return Err(FlowError::NegativeTime(s));
    }
    Ok((2.0 * s).ln_1p())
}

/// Unnormalized class `[ω(s)] = e^t [ω_t]`, which equals `[ω₀] - 2s c₁`.
pub fn unnormalized_class(setup: &CohomologySetup, t: f64) -> Result<CohClass> {
    Ok(class_at(setup, t)?.scale(t.exp()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1p1(omega0: [f64; 2]) -> CohomologySetup {
        let tensor = IntersectionTensor::from_entries(2, 2, &[(vec![0, 1], 1.0)]).unwrap();
        CohomologySetup::new(
            vec!["eta1".into(), "eta2".into()],
            tensor,
            ConeSpec::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]),
            CohClass::new(vec![2.0, 2.0]),
            CohClass::new(omega0.to_vec()),
        )
        .unwrap()
    }

    fn f1(a: f64, b: f64) -> CohomologySetup {
        let tensor = IntersectionTensor::from_entries(
            2,
            2,
            &[(vec![0, 0], 1.0), (vec![1, 1], -1.0)],
        )
        .unwrap();
        CohomologySetup::new(
            vec!["H".into(), "E".into()],
            tensor,
            ConeSpec::new(vec![vec![0.0, -1.0], vec![1.0, 1.0]]),
            CohClass::new(vec![3.0, -1.0]),
            CohClass::new(vec![b, -a]),
        )
        .unwrap()
    }

    #[test]
    fn class_at_examples() {
        let s = p1p1([1.0, 2.0]);
        assert_eq!(class_at(&s, 0.0).unwrap().0, vec![1.0, 2.0]);
        let c = class_at(&s, (1.5f64).ln()).unwrap();
        assert!(c.0[0].abs() < 1e-14 && (c.0[1] - 2.0 / 3.0).abs() < 1e-14);
        let c = class_at(&f1(1.0, 4.0), 2f64.ln()).unwrap();
        assert!((c.0[0] - 0.5).abs() < 1e-14 && c.0[1].abs() < 1e-14);
        assert_eq!(class_at(&s, f64::INFINITY).unwrap().0, vec![-2.0, -2.0]);
        assert!(matches!(class_at(&s, -1.0), Err(FlowError::NegativeTime(_))));
        assert!(class_at(&s, f64::NAN).is_err());
    }

    #[test]
    fn tensor_rejects_conflicts_and_bad_arity() {
        let bad = IntersectionTensor::from_entries(2, 2, &[(vec![0, 1], 1.0), (vec![1, 0], 2.0)]);
        assert!(bad.is_err());
        let t = IntersectionTensor::from_entries(2, 2, &[(vec![1, 0], 1.0)]).unwrap();
        assert_eq!(t.entry(&[0, 1]), 1.0);
        let a = CohClass::new(vec![1.0, 2.0]);
        assert!(matches!(
            top_intersection(&t, std::slice::from_ref(&a)),
            Err(FlowError::Arity { expected: 2, got: 1 })
        ));
        assert_eq!(top_intersection(&t, &[a.clone(), a]).unwrap(), 4.0);
        assert_eq!(
            top_intersection(&t, &[CohClass::zeros(2), CohClass::zeros(2)]).unwrap(),
            0.0
        );
    }

    #[test]
    fn setup_rejects_omega0_outside_cone() {
        let tensor = IntersectionTensor::from_entries(2, 2, &[(vec![0, 1], 1.0)]).unwrap();
        let r = CohomologySetup::new(
            vec!["a".into(), "b".into()],
            tensor,
            ConeSpec::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]]),
            CohClass::new(vec![2.0, 2.0]),
            CohClass::new(vec![1.0, -1.0]),
        );
        assert!(matches!(r, Err(FlowError::DegenerateSetup(_))));
    }

    #[test]
    fn fano_shrink_hits_both_facets() {
        let s = p1p1([1.0, 1.0]);
        let sing = singularity_time(&s).unwrap();
        assert!((sing.time - 1.5f64.ln()).abs() < 1e-12);
        assert_eq!(sing.active_facets, vec![0, 1]);
        let k = collapse_exponent(&s, &sing).unwrap();
        assert_eq!(k.k, 2);
        assert!((k.mixed[2] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nef_examples() {
        let s = f1(1.0, 4.0);
        let check = nef_check(&s, &CohClass::new(vec![1.0, 1.0]));
        assert!(!check.nef);
        assert_eq!(check.margin, -1.0);
        let zero = nef_check(&s, &CohClass::zeros(2));
        assert!(zero.nef && zero.margin == 0.0);
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(time_rescale(0.0).unwrap(), 0.0);
        assert!((time_rescale(3f64.ln()).unwrap() - 1.0).abs() < 1e-15);
        assert!((time_rescale(2f64.ln()).unwrap() - 0.5).abs() < 1e-15);
        assert!(time_rescale(-0.1).is_err());
        assert!(time_unscale(-0.1).is_err());
    }
}
