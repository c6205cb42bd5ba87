//! Evaluation contexts: normal coordinates at an interior point, a flat
//! model, and the boundary collar `g = h(x_n)^{-1} g' + dx_n^2` with
//! `h(0) = 1`.
//!
//! A context answers three kinds of questions: values of jets at the base
//! point, how `∂_x` acts on indeterminates and Clifford generators, and
//! inner products between covectors.

use crate::clifford::{CliffordExpr, Cov, Euclidean, Pairing};
use crate::error::{Error, Result};
use crate::scalar::{Coeff, Deriv, Field, Invariant, ScalarExpr, Var};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ContextKind {
    /// Riemannian normal coordinates centred at `x0`.
    InteriorNormal,
    /// Euclidean metric, no connection; perturbation fields still vary.
    Flat,
    /// Collar coordinates at a boundary point, normal coordinates on `∂M`.
    BoundaryCollar,
}

#[derive(Clone, Copy, Debug)]
pub struct GeoContext {
    pub kind: ContextKind,
    pub n: usize,
}

fn s(v: Var) -> ScalarExpr {
    ScalarExpr::var(v)
}

fn half_hp(sign: i64) -> ScalarExpr {
    s(Var::HPrime).scale(&Coeff::ratio(sign, 2))
}

impl GeoContext {
    pub fn interior(n: usize) -> Result<Self> {
        Self::build(ContextKind::InteriorNormal, n, 2)
    }

    pub fn flat(n: usize) -> Result<Self> {
        Self::build(ContextKind::Flat, n, 2)
    }

    pub fn boundary(n: usize) -> Result<Self> {
        Self::build(ContextKind::BoundaryCollar, n, 3)
    }

    fn build(kind: ContextKind, n: usize, min: usize) -> Result<Self> {
        if n % 2 == 1 || n < min || n > 4 {
            return Err(Error::Dimension(n));
        }
        Ok(GeoContext { kind, n })
    }

    pub fn is_boundary(&self) -> bool {
        self.kind == ContextKind::BoundaryCollar
    }

    /// `|ξ|^2` as a function of `x`. On the boundary `|ξ'| = 1` is imposed.
    pub fn norm_sq(&self) -> ScalarExpr {
        match self.kind {
            ContextKind::InteriorNormal => {
                let mut q = ScalarExpr::zero();
                for a in 1..=self.n as u8 {
                    for b in a..=self.n as u8 {
                        let mult = if a == b { 1 } else { 2 };
                        let t = &(&s(Var::jet(Field::metric(a, b))) * &s(Var::Xi(a))) * &s(Var::Xi(b));
                        q += &t.scale(&Coeff::int(mult));
                    }
                }
                q
            }
            ContextKind::Flat => euclid_norm_sq(self.n),
            ContextKind::BoundaryCollar => &ScalarExpr::one() + &s(Var::XiN).pow(2),
        }
    }

    /// Raised cotangent component `ξ^μ = g^{μν} ξ_ν`.
    pub fn xi_upper(&self, mu: u8) -> Result<ScalarExpr> {
        match self.kind {
            ContextKind::InteriorNormal => {
                let mut out = ScalarExpr::zero();
                for nu in 1..=self.n as u8 {
                    out += &(&s(Var::jet(Field::metric(mu, nu))) * &s(Var::Xi(nu)));
                }
                Ok(out)
            }
            ContextKind::Flat => Ok(s(Var::Xi(mu))),
            ContextKind::BoundaryCollar if mu as usize == self.n => Ok(s(Var::XiN)),
            ContextKind::BoundaryCollar => Err(Error::Unsupported("tangential cotangent component".into())),
        }
    }

    /// The indeterminate representing `ξ_μ`.
    pub fn xi_var(&self, mu: u8) -> Result<Var> {
        match self.kind {
            ContextKind::BoundaryCollar if mu as usize == self.n => Ok(Var::XiN),
            ContextKind::BoundaryCollar => Err(Error::Unsupported("tangential xi-derivative on the collar model".into())),
            _ => Ok(Var::Xi(mu)),
        }
    }

    /// Value of an indeterminate at the base point, `None` if it stays formal.
    pub fn base_value(&self, v: &Var) -> Option<ScalarExpr> {
        let Var::Jet(field, d) = v else {
            return match (self.kind, v) {
                (ContextKind::Flat, Var::Curv) => Some(ScalarExpr::zero()),
                _ => None,
            };
        };
        let order = d.order();
        match (self.kind, field) {
            (ContextKind::BoundaryCollar, _) => None,
            (_, Field::Metric(a, b)) if order == 0 => Some(ScalarExpr::int((a == b) as i64)),
            (ContextKind::Flat, Field::Metric(..)) => Some(ScalarExpr::zero()),
            (ContextKind::InteriorNormal, Field::Metric(..)) if order == 1 => Some(ScalarExpr::zero()),
            (ContextKind::Flat, Field::Gamma(_) | Field::Spin(..)) => Some(ScalarExpr::zero()),
            (_, Field::Gamma(_) | Field::Spin(..)) if order == 0 => Some(ScalarExpr::zero()),
            _ => None,
        }
    }

    pub fn at_base(&self, e: &ScalarExpr) -> ScalarExpr {
        e.substitute_with(|v| self.base_value(v))
    }

    /// `∂_{x_μ}` of a single indeterminate.
    pub fn d_var(&self, v: &Var, mu: u8) -> Result<ScalarExpr> {
        let missing = || Error::JetNotPresent(format!("d{mu} {v}"));
        match (self.kind, v) {
            (_, Var::Pi | Var::Omega3 | Var::VolS3 | Var::HPrime | Var::XiN | Var::Xi(_)) => Ok(ScalarExpr::zero()),
            (ContextKind::BoundaryCollar, _) => Err(missing()),
            (ContextKind::Flat, Var::Curv) => Ok(ScalarExpr::zero()),
            (ContextKind::Flat, Var::Jet(f, _)) if !f.is_perturbation() => Ok(ScalarExpr::zero()),
            (_, Var::Jet(f, d)) => {
                if d.order() >= 3 {
                    return Err(missing());
                }
                Ok(s(Var::Jet(*f, d.bump(mu as usize))))
            }
            _ => Err(missing()),
        }
    }

    /// `∂_{x_μ} |ξ|^2`, exact in `x` (not yet evaluated at the base point).
    pub fn d_norm_sq(&self, mu: u8) -> Result<ScalarExpr> {
        match self.kind {
            ContextKind::BoundaryCollar => Ok(if mu as usize == self.n { s(Var::HPrime) } else { ScalarExpr::zero() }),
            _ => self.norm_sq().derive_with(|v| self.d_var(v, mu)),
        }
    }

    /// `∂_{x_μ} c(a)` for a generator. Interior generators are frozen at `x0`
    /// (first vierbein derivatives vanish in normal coordinates).
    pub fn d_gen(&self, c: Cov, mu: u8) -> Result<CliffordExpr> {
        match (self.kind, c) {
            (ContextKind::BoundaryCollar, Cov::Xip) if mu as usize == self.n => Ok(CliffordExpr::gen(Cov::W)),
            (ContextKind::BoundaryCollar, Cov::Xip | Cov::Dxn) => Ok(CliffordExpr::zero()),
            (ContextKind::BoundaryCollar, _) => Err(Error::JetNotPresent(format!("d{mu} c({c})"))),
            (_, Cov::Dx(_)) => Ok(CliffordExpr::zero()),
            _ => Err(Error::Unsupported(format!("unexpanded generator c({c}) in interior symbol"))),
        }
    }

    /// Expansion of composite generators into the interior frame.
    pub fn expand(&self, c: Cov) -> Option<CliffordExpr> {
        if self.is_boundary() {
            return match c {
                Cov::Xi => Some(&CliffordExpr::gen(Cov::Xip) + &CliffordExpr::gen(Cov::Dxn).scale(&s(Var::XiN))),
                _ => None,
            };
        }
        let comp = |k: u8| -> Option<ScalarExpr> {
            match c {
                Cov::Xi => Some(s(Var::Xi(k))),
                Cov::X => Some(s(Var::jet(Field::X(k)))),
                Cov::Df => Some(s(Var::Jet(Field::F, Deriv::NONE.bump(k as usize)))),
                _ => None,
            }
        };
        comp(1)?;
        let mut out = CliffordExpr::zero();
        for k in 1..=self.n as u8 {
            out += &CliffordExpr::gen(Cov::Dx(k)).scale(&comp(k)?);
        }
        Some(out)
    }

    /// Contracted Christoffel symbol `Γ^k_{st}(x0)` on the collar (1-based).
    pub fn christoffel(&self, k: usize, st: (usize, usize)) -> ScalarExpr {
        let n = self.n;
        let (a, b) = st;
        if !self.is_boundary() {
            return ScalarExpr::zero();
        }
        if k == n && a == b && a < n {
            half_hp(1)
        } else if k < n && ((a == n && b == k) || (a == k && b == n)) {
            half_hp(-1)
        } else {
            ScalarExpr::zero()
        }
    }

    /// Connection coefficient `ω_{s,t}(e_i)(x0)` on the collar.
    pub fn connection(&self, st: (usize, usize), i: usize) -> ScalarExpr {
        let n = self.n;
        if !self.is_boundary() || i >= n {
            return ScalarExpr::zero();
        }
        match st {
            (a, b) if a == n && b == i => half_hp(1),
            (a, b) if a == i && b == n => half_hp(-1),
            _ => ScalarExpr::zero(),
        }
    }

    /// `Q(x0) = -1/4 Σ ω_{s,t}(e_i) c(e_i)c(e_s)c(e_t)`, computed in an
    /// orthonormal frame and mapped `e_n ↦ dx_n`.
    pub fn spin_q(&self) -> Result<CliffordExpr> {
        let e = Euclidean(self.n);
        let mut q = CliffordExpr::zero();
        for i in 1..=self.n {
            for a in 1..=self.n {
                for b in 1..=self.n {
                    let w = self.connection((a, b), i);
                    if w.is_zero() {
                        continue;
                    }
                    let word = [Cov::Dx(i as u8), Cov::Dx(a as u8), Cov::Dx(b as u8)];
                    q += &CliffordExpr::normalize(&word, &e)?.scale(&w);
                }
            }
        }
        let q = q.scale_coeff(&Coeff::ratio(-1, 4));
        if !self.is_boundary() {
            return Ok(q);
        }
        let n = self.n as u8;
        let mut out = CliffordExpr::zero();
        for (w, c) in q.terms() {
            if w.iter().any(|g| *g != Cov::Dx(n)) {
                return Err(Error::Unsupported("tangential frame vector left in Q".into()));
            }
            let mapped: Vec<Cov> = w.iter().map(|_| Cov::Dxn).collect();
            out += &CliffordExpr::normalize(&mapped, self)?.scale(c);
        }
        Ok(out)
    }
}

pub fn euclid_norm_sq(n: usize) -> ScalarExpr {
    let mut q = ScalarExpr::zero();
    for a in 1..=n as u8 {
        q += &s(Var::Xi(a)).pow(2);
    }
    q
}

impl Pairing for GeoContext {
    fn pair(&self, a: Cov, b: Cov) -> Result<ScalarExpr> {
        let undeclared = || Error::UndeclaredPairing(a.name(), b.name());
        if self.is_boundary() {
            use Cov::*;
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            return Ok(match (a, b) {
                (Xip, Xip) | (Dxn, Dxn) => ScalarExpr::one(),
                (Xip, Dxn) | (W, Dxn) => ScalarExpr::zero(),
                (Xip, X) => s(Var::XiDotX),
                (X, Dxn) => s(Var::jet(Field::X(self.n as u8))),
                (X, X) => s(Var::Inv(Invariant::NormX2)),
                (Xip, W) => half_hp(1),
                (Xi, _) | (_, Xi) => {
                    let xi = self.expand(Xi).expect("xi expands on the collar");
                    let other = if a == Xi { b } else { a };
                    let mut acc = ScalarExpr::zero();
                    for (w, c) in xi.terms() {
                        acc += &(c * &self.pair(w[0], other)?);
                    }
                    acc
                }
                _ => return Err(undeclared()),
            });
        }
        let comps = |c: Cov| -> Result<Vec<ScalarExpr>> {
            match c {
                Cov::Dx(k) if (k as usize) <= self.n && k > 0 => Ok((1..=self.n as u8).map(|j| ScalarExpr::int((j == k) as i64)).collect()),
                Cov::Xi | Cov::X | Cov::Df => {
                    let e = self.expand(c).ok_or_else(undeclared)?;
                    Ok((1..=self.n as u8)
                        .map(|j| e.terms().find(|(w, _)| w[0] == Cov::Dx(j)).map(|(_, c)| c.clone()).unwrap_or_default())
                        .collect())
                }
                _ => Err(undeclared()),
            }
        };
        if let (Cov::Dx(i), Cov::Dx(j)) = (a, b) {
            if i as usize <= self.n && j as usize <= self.n {
                return Ok(ScalarExpr::int((i == j) as i64));
            }
        }
        let (ca, cb) = (comps(a)?, comps(b)?);
        let mut acc = ScalarExpr::zero();
        for (x, y) in ca.iter().zip(&cb) {
            acc += &(x * y);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_dimension_rejected() {
        assert!(matches!(GeoContext::interior(3), Err(Error::Dimension(3))));
        assert!(matches!(GeoContext::boundary(5), Err(Error::Dimension(5))));
    }

    #[test]
    fn interior_normal_coordinate_values() {
        let ctx = GeoContext::interior(4).unwrap();
        let gam = Var::jet(Field::Gamma(2));
        assert_eq!(ctx.base_value(&gam), Some(ScalarExpr::zero()));
        let dg = Var::Jet(Field::metric(1, 2), Deriv::NONE.bump(3));
        assert_eq!(ctx.base_value(&dg), Some(ScalarExpr::zero()));
        let d2g = Var::Jet(Field::metric(1, 2), Deriv::NONE.bump(3).bump(4));
        assert_eq!(ctx.base_value(&d2g), None);
    }

    #[test]
    fn collar_lemma_values() {
        let ctx = GeoContext::boundary(4).unwrap();
        assert_eq!(ctx.d_norm_sq(4).unwrap(), s(Var::HPrime));
        assert!(ctx.d_norm_sq(2).unwrap().is_zero());
        assert_eq!(ctx.christoffel(1, (4, 1)), half_hp(-1));
        assert_eq!(ctx.christoffel(1, (1, 4)), half_hp(-1));
        assert_eq!(ctx.christoffel(4, (2, 2)), half_hp(1));
        assert!(ctx.christoffel(2, (1, 1)).is_zero());
        assert_eq!(ctx.connection((4, 2), 2), half_hp(1));
        assert_eq!(ctx.connection((2, 4), 2), half_hp(-1));
        assert!(ctx.connection((1, 2), 3).is_zero());
    }

    #[test]
    fn collar_pairings() {
        let ctx = GeoContext::boundary(4).unwrap();
        assert!(ctx.pair(Cov::Xip, Cov::Dxn).unwrap().is_zero());
        assert_eq!(ctx.pair(Cov::W, Cov::Xip).unwrap(), half_hp(1));
        assert!(ctx.pair(Cov::W, Cov::X).is_err());
        assert!(ctx.pair(Cov::W, Cov::W).is_err());
    }

    #[test]
    fn interior_pairing_expands_components() {
        let ctx = GeoContext::interior(4).unwrap();
        let p = ctx.pair(Cov::X, Cov::Df).unwrap();
        let mut expected = ScalarExpr::zero();
        for j in 1..=4u8 {
            expected += &(&s(Var::jet(Field::X(j))) * &s(Var::Jet(Field::F, Deriv::NONE.bump(j as usize))));
        }
        assert_eq!(p, expected);
    }

    #[test]
    fn q_on_the_collar() {
        let ctx = GeoContext::boundary(4).unwrap();
        let expected = CliffordExpr::gen(Cov::Dxn).scale(&s(Var::HPrime).scale(&Coeff::ratio(-3, 4)));
        assert_eq!(ctx.spin_q().unwrap(), expected);
    }

    #[test]
    fn collar_field_derivatives_are_absent() {
        let ctx = GeoContext::boundary(4).unwrap();
        assert!(matches!(ctx.d_var(&Var::jet(Field::F), 4), Err(Error::JetNotPresent(_))));
        assert!(ctx.d_gen(Cov::X, 4).is_err());
        assert_eq!(ctx.d_gen(Cov::Xip, 4).unwrap(), CliffordExpr::gen(Cov::W));
    }
}
