//! Floating-point oracles, deliberately independent of the symbolic path.
//!
//! * Clifford products are evaluated as 4×4 complex matrices. The generators
//!   are `i` times the Hermitian Euclidean gammas of the chiral representation,
//!   so that `c(a)c(b) + c(b)c(a) = −2 g(a,b)`.
//! * Sphere moments are estimated by Monte Carlo with normalized Gaussian
//!   vectors. Batches use ChaCha streams derived from one seed, so results
//!   are reproducible and independent of thread scheduling.
//! * Line integrals over `ℝ` use the substitution `ξ_n = tan θ` followed by
//!   double-exponential quadrature on `(−π/2, π/2)`.
//! * The boundary cases with no normal derivative (IV and V) are re-evaluated
//!   with matrices: `π⁺` becomes a Cauchy integral on a small circle around
//!   `+i`, `∂_{ξ_n}` a Cauchy derivative, and the `ξ'` integral an exact
//!   cubature on the octahedron.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::boundary::{case, CaseId};
use crate::clifford::{CliffordExpr, Cov};
use crate::error::{Error, Result};
use crate::geometry::GeoContext;
use crate::halfplane::XiNRational;
use crate::printed::build_inverse_low_orders;
use crate::scalar::{Deriv, Field, Invariant, Var};
use crate::symbols::{OperatorKind, SymExpr};

pub type CMat = Matrix4<Complex64>;

/// Default seed for every stochastic check.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

const BATCH: usize = 1 << 15;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Clifford generators `c(dx_1), …, c(dx_n)` as matrices.
#[derive(Clone, Debug)]
pub struct GammaRep {
    pub mats: Vec<CMat>,
}

pub fn build_gamma_rep(n: usize) -> Result<GammaRep> {
    if n != 4 {
        return Err(Error::Dimension(n));
    }
    let (o, z, i) = (cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 1.0));
    // Pauli matrices
    let pauli = [[[z, o], [o, z]], [[z, -i], [i, z]], [[o, z], [z, -o]]];
    let block = |tr: [[Complex64; 2]; 2], bl: [[Complex64; 2]; 2]| {
        let mut m = CMat::zeros();
        for r in 0..2 {
            for c in 0..2 {
                m[(r, c + 2)] = tr[r][c];
                m[(r + 2, c)] = bl[r][c];
            }
        }
        m
    };
    let mut mats = Vec::new();
    for s in pauli {
        let neg_i = s.map(|row| row.map(|e| -i * e));
        let pos_i = s.map(|row| row.map(|e| i * e));
        mats.push(block(neg_i, pos_i) * i);
    }
    mats.push(block([[o, z], [z, o]], [[o, z], [z, o]]) * i);
    Ok(GammaRep { mats })
}

impl GammaRep {
    /// `c(v) = Σ v_k c(dx_k)`.
    pub fn c(&self, v: &[Complex64; 4]) -> CMat {
        let mut m = CMat::zeros();
        for (g, a) in self.mats.iter().zip(v) {
            m += g * *a;
        }
        m
    }
}

/// Numeric values for every covector and indeterminate an oracle may meet.
///
/// On the collar (`boundary = true`) the cotangent vector is `(ξ', ξ_n)` with
/// `|ξ'| = 1`, and `∂_{x_n} c(ξ')` is represented by `c(h'(0)/2 · ξ')`.
#[derive(Clone, Debug, Serialize)]
pub struct NumericAssignment {
    pub boundary: bool,
    pub xi: [f64; 4],
    pub xi_p: [f64; 3],
    pub xi_n: f64,
    pub x: [f64; 4],
    pub df: [f64; 4],
    pub h_prime: f64,
    pub f: f64,
    pub seed: u64,
}

impl NumericAssignment {
    pub fn random(seed: u64, boundary: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = || -> f64 { StandardNormal.sample(&mut rng) };
        let xi = [g(), g(), g(), g()];
        let mut xi_p = [g(), g(), g()];
        let r = xi_p.iter().map(|v| v * v).sum::<f64>().sqrt();
        xi_p.iter_mut().for_each(|v| *v /= r);
        NumericAssignment { boundary, xi, xi_p, xi_n: g(), x: [g(), g(), g(), g()], df: [g(), g(), g(), g()], h_prime: g(), f: g(), seed }
    }

    fn xi_vec(&self, xin: Complex64) -> [Complex64; 4] {
        if self.boundary {
            [self.xi_p[0].into(), self.xi_p[1].into(), self.xi_p[2].into(), xin]
        } else {
            self.xi.map(Complex64::from)
        }
    }

    /// Components of a covector, with `ξ_n` overridden by `xin`.
    pub fn vector_at(&self, c: Cov, xin: Complex64) -> Option<[Complex64; 4]> {
        let e = |k: usize| {
            let mut v = [Complex64::from(0.0); 4];
            v[k] = 1.0.into();
            v
        };
        let tangential = |s: f64| [(s * self.xi_p[0]).into(), (s * self.xi_p[1]).into(), (s * self.xi_p[2]).into(), 0.0.into()];
        Some(match c {
            Cov::Dx(k) if (1..=4).contains(&k) => e(k as usize - 1),
            Cov::Dx(_) => return None,
            Cov::Xi => self.xi_vec(xin),
            Cov::X => self.x.map(Complex64::from),
            Cov::Df => self.df.map(Complex64::from),
            Cov::Xip if self.boundary => tangential(1.0),
            Cov::W if self.boundary => tangential(self.h_prime / 2.0),
            Cov::Dxn if self.boundary => e(3),
            _ => return None,
        })
    }

    /// Value of an indeterminate, with `ξ_n` overridden by `xin`.
    pub fn value_at(&self, v: &Var, xin: Complex64) -> Option<Complex64> {
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
        let xi = self.xi_vec(xin);
        Some(match v {
            Var::Pi => PI.into(),
            Var::Omega3 => (4.0 * PI).into(),
            Var::VolS3 => (2.0 * PI * PI).into(),
            Var::HPrime => self.h_prime.into(),
            Var::XiN => xin,
            Var::XiDotX => dot(&self.xi_p, &self.x[..3]).into(),
            Var::Xi(k) if (1..=4).contains(k) => xi[*k as usize - 1],
            Var::Jet(Field::F, d) if *d == Deriv::NONE => self.f.into(),
            Var::Jet(Field::X(j), d) if *d == Deriv::NONE && (1..=4).contains(j) => self.x[*j as usize - 1].into(),
            Var::Jet(Field::F, d) if d.order() == 1 => {
                let k = d.0.iter().position(|&c| c == 1)?;
                self.df[k].into()
            }
            Var::Inv(Invariant::NormX2) => dot(&self.x, &self.x).into(),
            Var::Inv(Invariant::XDf) => dot(&self.x, &self.df).into(),
            Var::Inv(Invariant::NormXNormDf) => (dot(&self.x, &self.x) * dot(&self.df, &self.df)).sqrt().into(),
            _ => return None,
        })
    }

    pub fn value(&self, v: &Var) -> Option<Complex64> {
        self.value_at(v, self.xi_n.into())
    }
}

/// Matrix of a Clifford expression, with `ξ_n` overridden by `xin`.
pub fn clifford_matrix(e: &CliffordExpr, a: &NumericAssignment, g: &GammaRep, xin: Complex64) -> Result<CMat> {
    let mut out = CMat::zeros();
    for (w, c) in e.terms() {
        let k = c.eval(|v| a.value_at(v, xin))?;
        let mut m = CMat::identity();
        for gen in w {
            let v = a.vector_at(*gen, xin).ok_or_else(|| Error::MissingAssignment(gen.name()))?;
            m *= g.c(&v);
        }
        out += m * k;
    }
    Ok(out)
}

pub fn numeric_trace(e: &CliffordExpr, a: &NumericAssignment) -> Result<Complex64> {
    let g = build_gamma_rep(4)?;
    Ok(clifford_matrix(e, a, &g, a.xi_n.into())?.trace())
}

/// Monte-Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_err: f64,
}

impl McEstimate {
    /// Distance to `exact` in units of the standard error.
    pub fn sigmas(&self, exact: f64) -> f64 {
        let d = (self.mean - exact).abs();
        if self.std_err == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / self.std_err
        }
    }
}

pub fn sphere_volume_f64(n: usize) -> f64 {
    // 2 π^{n/2} / Γ(n/2)
    let mut gamma = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut k = if n.is_multiple_of(2) { 1.0 } else { 0.5 };
    while k < n as f64 / 2.0 {
        gamma *= k;
        k += 1.0;
    }
    2.0 * PI.powf(n as f64 / 2.0) / gamma
}

/// Runs `per_sample` on `samples` uniform points of `S^{n−1}`, accumulating
/// `m` outputs; returns `∫_{S^{n−1}}` estimates for each.
fn mc_sphere<F>(n: usize, m: usize, samples: usize, seed: u64, per_sample: F) -> Vec<McEstimate>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    let batches = samples.div_ceil(BATCH);
    let partial: Vec<(Vec<f64>, Vec<f64>)> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = BATCH.min(samples - b * BATCH);
            let (mut s1, mut s2, mut out) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
            let mut p = vec![0.0; n];
            for _ in 0..count {
                let mut r = 0.0_f64;
                for v in p.iter_mut() {
                    *v = StandardNormal.sample(&mut rng);
                    r += *v * *v;
                }
                let r = r.sqrt();
                p.iter_mut().for_each(|v| *v /= r);
                per_sample(&p, &mut out);
                for k in 0..m {
                    s1[k] += out[k];
                    s2[k] += out[k] * out[k];
                }
            }
            (s1, s2)
        })
        .collect();
    let vol = sphere_volume_f64(n);
    let total = samples as f64;
    (0..m)
        .map(|k| {
            let s1: f64 = partial.iter().map(|(a, _)| a[k]).sum();
            let s2: f64 = partial.iter().map(|(_, b)| b[k]).sum();
            let mean = s1 / total;
            let var = (s2 / total - mean * mean).max(0.0) * total / (total - 1.0);
            McEstimate { mean: vol * mean, std_err: vol * (var / total).sqrt() }
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// `∫_{S^{n−1}} ξ^α` for many multi-indices from one sample stream.
///
/// Each sample is averaged over coordinate permutations and sign flips. The
/// estimator stays unbiased; odd moments come out exactly zero and moments
/// that differ by a permutation share one estimate.
pub fn mc_sphere_moments(alphas: &[Vec<u32>], n: usize, samples: usize, seed: u64) -> Vec<McEstimate> {
    let top = alphas.iter().flatten().copied().max().unwrap_or(0) as usize;
    let stride = top + 1;
    assert!(n * stride <= 64, "moment table too large");
    let perms = permutations(n);
    let mut classes: Vec<Vec<u32>> = Vec::new();
    let class_of: Vec<Option<usize>> = alphas
        .iter()
        .map(|a| {
            if a.iter().any(|e| e % 2 == 1) {
                return None;
            }
            let mut key = a.clone();
            key.sort_unstable();
            Some(classes.iter().position(|c| *c == key).unwrap_or_else(|| {
                classes.push(key);
                classes.len() - 1
            }))
        })
        .collect();
    // averaging over permutations = averaging over distinct exponent arrangements
    let arrangements: Vec<Vec<Vec<u32>>> = classes
        .iter()
        .map(|key| {
            let mut seen: Vec<Vec<u32>> = perms.iter().map(|p| p.iter().map(|&i| key[i]).collect()).collect();
            seen.sort_unstable();
            seen.dedup();
            seen
        })
        .collect();
    let est = mc_sphere(n, classes.len(), samples, seed, |p, out| {
        let mut pw = [1.0; 64];
        for (i, v) in p.iter().enumerate() {
            for e in 1..stride {
                pw[i * stride + e] = pw[i * stride + e - 1] * v;
            }
        }
        for (o, arr) in out.iter_mut().zip(&arrangements) {
            let mut acc = 0.0;
            for a in arr {
                acc += a.iter().enumerate().map(|(i, &e)| pw[i * stride + e as usize]).product::<f64>();
            }
            *o = acc / arr.len() as f64;
        }
    });
    let exact_zero = McEstimate { mean: 0.0, std_err: 0.0 };
    class_of.into_iter().map(|c| c.map_or(exact_zero, |i| est[i])).collect()
}

pub fn mc_sphere_moment(alpha: &[u32], samples: usize, seed: u64) -> McEstimate {
    mc_sphere_moments(&[alpha.to_vec()], alpha.len(), samples, seed)[0]
}

/// `∫_{S³} tr[M8 + M9]` by sampling, with `M8 = −c(ξ)c(X)c(ξ)c(df)` and
/// `M9 = −c(X)c(ξ)c(df)c(ξ)` on `|ξ| = 1`.
pub fn mc_m8_m9(a: &NumericAssignment, samples: usize, seed: u64) -> Result<McEstimate> {
    let g = build_gamma_rep(4)?;
    let cxv = g.c(&a.x.map(Complex64::from));
    let cdf = g.c(&a.df.map(Complex64::from));
    // tr[M8 + M9] is a quadratic form in ξ; its matrix comes from gamma traces
    let q: [[f64; 4]; 4] = std::array::from_fn(|k| {
        std::array::from_fn(|l| {
            let (gk, gl) = (&g.mats[k], &g.mats[l]);
            -(gk * cxv * gl * cdf + cxv * gk * cdf * gl).trace().re
        })
    });
    let est = mc_sphere(4, 1, samples, seed, |p, out| {
        let mut s = 0.0;
        for k in 0..4 {
            for l in 0..4 {
                s += q[k][l] * p[k] * p[l];
            }
        }
        out[0] = s;
    });
    Ok(est[0])
}

/// Quadrature result with the integrator's error estimate.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LineIntegral {
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

impl LineIntegral {
    pub fn value(&self) -> Complex64 {
        cx(self.re, self.im)
    }
}

/// `∫_ℝ g(x) dx` for a function decaying at least like `|x|^{-2}`.
pub fn integrate_real_line<F>(g: F) -> LineIntegral
where
    F: Fn(f64) -> Complex64,
{
    let h = |t: f64| {
        let c = t.cos();
        g(t.tan()) / (c * c)
    };
    let lim = PI / 2.0;
    let re = quadrature::double_exponential::integrate(|t| h(t).re, -lim, lim, 1e-13);
    let im = quadrature::double_exponential::integrate(|t| h(t).im, -lim, lim, 1e-13);
    LineIntegral { re: re.integral, im: im.integral, error: re.error_estimate.hypot(im.error_estimate) }
}

/// Numeric `∫_ℝ r(ξ_n) dξ_n` of a scalar rational.
pub fn numeric_line_integral(r: &XiNRational, a: &NumericAssignment) -> Result<LineIntegral> {
    if !r.poly.is_empty() {
        return Err(Error::NonIntegrable("polynomial part".into()));
    }
    let f = r.to_fraction();
    let s = f.num.as_scalar().ok_or(Error::Unsupported("Clifford-valued integrand".into()))?;
    if s.degree_in(Var::XiN) as i64 - (f.a + f.b) as i64 > -2 {
        return Err(Error::NonIntegrable("decays slower than |xi_n|^-2".into()));
    }
    // check assignment coverage once, then evaluate without error plumbing
    f.eval(cx(0.0, 0.0), |v| a.value(v))?;
    Ok(integrate_real_line(|x| f.eval(x.into(), |v| a.value(v)).expect("assignment checked")))
}

/// Collar symbol compiled for repeated numeric evaluation at fixed `ξ'`.
struct CompiledSymbol {
    terms: Vec<(i32, CMat, Vec<Complex64>, Vec<usize>)>,
    xi_slots: Vec<CMat>,
}

impl CompiledSymbol {
    /// Each term is `|ξ|^{-2k} p(ξ_n) · M_0 · …`; words are split at `c(ξ)`
    /// occurrences so that only those factors depend on `ξ_n`.
    fn new(sym: &SymExpr, a: &NumericAssignment, g: &GammaRep) -> Result<Self> {
        let zero = cx(0.0, 0.0);
        let mut terms = Vec::new();
        let mut xi_slots = Vec::new();
        for (k, c) in sym.parts() {
            for (w, coef) in c.terms() {
                let poly = coef.coefficients_in(Var::XiN);
                let poly = poly.iter().map(|p| p.eval(|v| a.value_at(v, zero))).collect::<Result<Vec<_>>>()?;
                let mut m = CMat::identity();
                let mut slots = Vec::new();
                for gen in w {
                    if *gen == Cov::Xi {
                        xi_slots.push(m);
                        slots.push(xi_slots.len() - 1);
                        m = CMat::identity();
                    } else {
                        let v = a.vector_at(*gen, zero).ok_or_else(|| Error::MissingAssignment(gen.name()))?;
                        m *= g.c(&v);
                    }
                }
                terms.push((k, m, poly, slots));
            }
        }
        Ok(CompiledSymbol { terms, xi_slots })
    }

    fn eval(&self, z: Complex64, cxi: &CMat) -> CMat {
        let norm = 1.0 + z * z;
        let mut out = CMat::zeros();
        for (k, tail, poly, slots) in &self.terms {
            let mut p = cx(0.0, 0.0);
            for c in poly.iter().rev() {
                p = p * z + c;
            }
            let mut m = CMat::identity();
            for s in slots {
                m = m * self.xi_slots[*s] * cxi;
            }
            out += m * tail * (p * norm.powi(-*k));
        }
        out
    }
}

const CIRCLE: usize = 64;

fn circle_mean<F: Fn(Complex64, Complex64) -> CMat>(center: Complex64, rho: f64, f: F) -> CMat {
    let mut acc = CMat::zeros();
    for j in 0..CIRCLE {
        let e = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / CIRCLE as f64);
        acc += f(center + e * rho, e);
    }
    acc / cx(CIRCLE as f64, 0.0)
}

/// Case IV or V integrated with matrices, Cauchy projections and quadrature.
/// Returns the `dx'` density at the assignment's `h'(0)`, `f`, `X`.
pub fn matrix_case_value(kind: OperatorKind, id: CaseId, a: &NumericAssignment) -> Result<LineIntegral> {
    let c = case(id);
    if c.k != 0 || c.j != 0 || c.alpha != 0 {
        return Err(Error::Unsupported(format!("case {id} has normal derivatives; no matrix oracle")));
    }
    let ctx = GeoContext::boundary(4)?;
    let sym = build_inverse_low_orders(kind, &ctx)?;
    let g = build_gamma_rep(4)?;
    let pre = c.prefactor().to_complex();
    let cdxn = g.c(&a.vector_at(Cov::Dxn, 0.0.into()).expect("collar"));
    // octahedral cubature: exact for polynomials of degree ≤ 3 on S²
    let mut dirs = Vec::new();
    for k in 0..3 {
        for s in [1.0, -1.0] {
            let mut d = [0.0; 3];
            d[k] = s;
            dirs.push(d);
        }
    }
    let compiled = dirs
        .iter()
        .map(|d| {
            let b = NumericAssignment { xi_p: *d, boundary: true, ..a.clone() };
            let cxip = g.c(&b.vector_at(Cov::Xip, 0.0.into()).expect("collar"));
            let l = CompiledSymbol::new(&sym.get(c.r), &b, &g)?;
            let r = CompiledSymbol::new(&sym.get(c.l), &b, &g)?;
            Ok((cxip, l, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let omega3 = 4.0 * PI;
    let i = cx(0.0, 1.0);
    Ok(integrate_real_line(|x| {
        let mut acc = cx(0.0, 0.0);
        for (cxip, l, r) in &compiled {
            let cxi = |z: Complex64| cxip + cdxn * z;
            // principal part at +i, evaluated at real x
            let plus = circle_mean(i, 0.5, |z, e| l.eval(z, &cxi(z)) * (e * 0.5 / (x - z)));
            let d_right = circle_mean(x.into(), 0.5, |z, e| r.eval(z, &cxi(z)) * (e.conj() / 0.5));
            acc += (plus * d_right).trace();
        }
        pre * acc * (omega3 / dirs.len() as f64)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_clifford;

    #[test]
    fn gamma_relations() {
        let g = build_gamma_rep(4).unwrap();
        for (p, a) in g.mats.iter().enumerate() {
            for (q, b) in g.mats.iter().enumerate() {
                let ac = a * b + b * a;
                let want = if p == q { -2.0 } else { 0.0 };
                assert!((ac - CMat::identity() * cx(want, 0.0)).norm() < 1e-14);
            }
        }
        let w = g.mats[0] * g.mats[1] * g.mats[0] * g.mats[1];
        assert!((w.trace() - cx(-4.0, 0.0)).norm() < 1e-14);
        assert!(build_gamma_rep(3).is_err());
    }

    #[test]
    fn boundary_trace_examples() {
        let ctx = GeoContext::boundary(4).unwrap();
        let a = NumericAssignment::random(7, true);
        let e = parse_clifford("c(xip)c(X)c(xip)c(dxn)", &ctx).unwrap();
        assert!((numeric_trace(&e, &a).unwrap() + 4.0 * a.x[3]).norm() < 1e-12);
        let e = parse_clifford("c(dxn)c(dxn)", &ctx).unwrap();
        assert!((numeric_trace(&e, &a).unwrap() + 4.0).norm() < 1e-12);
    }

    #[test]
    fn moments_and_volume() {
        assert!((sphere_volume_f64(4) - 2.0 * PI * PI).abs() < 1e-12);
        assert!((sphere_volume_f64(3) - 4.0 * PI).abs() < 1e-12);
        let e = mc_sphere_moment(&[2, 0, 0, 0], 200_000, DEFAULT_SEED);
        assert!(e.sigmas(PI * PI / 2.0) < 4.0);
        let e = mc_sphere_moment(&[1, 0, 0, 0], 200_000, DEFAULT_SEED);
        assert!(e.sigmas(0.0) < 4.0);
    }

    #[test]
    fn lorentzian() {
        let v = integrate_real_line(|x| (1.0 / (1.0 + x * x)).into());
        assert!((v.re - PI).abs() < 1e-10);
    }
}
