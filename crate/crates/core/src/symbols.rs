//! Pseudo-differential symbols.
//!
//! A [`SymExpr`] is a finite sum `Σ_k |ξ|^{-2k} C_k` where each `C_k` is a
//! Clifford expression whose coefficients are polynomials in the cotangent
//! variables and field jets. `|ξ|^2` is kept as an atom so that symbols stay
//! polynomial; the context says how `∂_x` and `∂_ξ` act on it.
//!
//! A [`PdoSymbol`] grades such sums by homogeneity degree.

use std::collections::BTreeMap;
use std::fmt;

use crate::clifford::{CliffordExpr, Pairing};
use crate::error::{Error, Result};
use crate::geometry::GeoContext;
use crate::scalar::{Coeff, ScalarExpr};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SymExpr {
    /// `k ↦ C_k`, meaning `|ξ|^{-2k} C_k`. `k` may be negative.
    parts: BTreeMap<i32, CliffordExpr>,
}

impl SymExpr {
    pub fn zero() -> Self {
        SymExpr { parts: BTreeMap::new() }
    }

    pub fn one() -> Self {
        SymExpr::clifford(CliffordExpr::one())
    }

    pub fn clifford(c: CliffordExpr) -> Self {
        SymExpr::with_power(0, c)
    }

    pub fn scalar(s: ScalarExpr) -> Self {
        SymExpr::clifford(CliffordExpr::scalar(s))
    }

    /// `|ξ|^{-2k} c`.
    pub fn with_power(k: i32, c: CliffordExpr) -> Self {
        let mut out = SymExpr::zero();
        out.add_part(k, c);
        out
    }

    /// `|ξ|^{-2k}`.
    pub fn norm_pow(k: i32) -> Self {
        SymExpr::with_power(k, CliffordExpr::one())
    }

    fn add_part(&mut self, k: i32, c: CliffordExpr) {
        if c.is_zero() {
            return;
        }
        let e = self.parts.entry(k).or_default();
        *e += &c;
        if e.is_zero() {
            self.parts.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (i32, &CliffordExpr)> {
        self.parts.iter().map(|(k, c)| (*k, c))
    }

    pub fn scale(&self, s: &ScalarExpr) -> Self {
        let mut out = SymExpr::zero();
        for (k, c) in &self.parts {
            out.add_part(*k, c.scale(s));
        }
        out
    }

    pub fn scale_coeff(&self, k: &Coeff) -> Self {
        self.scale(&ScalarExpr::constant(k.clone()))
    }

    pub fn mul(&self, o: &SymExpr, p: &dyn Pairing) -> Result<Self> {
        let mut out = SymExpr::zero();
        for (ka, ca) in &self.parts {
            for (kb, cb) in &o.parts {
                out.add_part(ka + kb, ca.mul(cb, p)?);
            }
        }
        Ok(out)
    }

    pub fn map_coeffs<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&ScalarExpr) -> Result<ScalarExpr>,
    {
        let mut out = SymExpr::zero();
        for (k, c) in &self.parts {
            out.add_part(*k, c.map_coeffs(&mut f)?);
        }
        Ok(out)
    }

    /// `∂_{ξ_μ}`. Generators are `ξ`-independent (composite ones are expanded).
    pub fn d_xi(&self, mu: u8, ctx: &GeoContext) -> Result<Self> {
        let v = ctx.xi_var(mu)?;
        let dn = ctx.norm_sq().diff(v);
        let mut out = SymExpr::zero();
        for (k, c) in &self.parts {
            out.add_part(*k, c.map_coeffs(|s| Ok(s.diff(v)))?);
            if *k != 0 && !dn.is_zero() {
                out.add_part(k + 1, c.scale(&dn.scale(&Coeff::int(-(*k as i64)))));
            }
        }
        Ok(out)
    }

    /// `∂_{x_μ}` with the jet rules of `ctx`.
    pub fn d_x(&self, mu: u8, ctx: &GeoContext) -> Result<Self> {
        let mut out = SymExpr::zero();
        let mut dn: Option<ScalarExpr> = None;
        for (k, c) in &self.parts {
            out.add_part(*k, c.map_coeffs(|s| s.derive_with(|v| ctx.d_var(v, mu)))?);
            if *k != 0 {
                if dn.is_none() {
                    dn = Some(ctx.d_norm_sq(mu)?);
                }
                let d = dn.as_ref().unwrap();
                if !d.is_zero() {
                    out.add_part(k + 1, c.scale(&d.scale(&Coeff::int(-(*k as i64)))));
                }
            }
            for (w, coeff) in c.terms() {
                for pos in 0..w.len() {
                    let dg = ctx.d_gen(w[pos], mu)?;
                    if dg.is_zero() {
                        continue;
                    }
                    let left = CliffordExpr::normalize(&w[..pos], ctx)?;
                    let right = CliffordExpr::normalize(&w[pos + 1..], ctx)?;
                    let t = left.mul(&dg, ctx)?.mul(&right, ctx)?.scale(coeff);
                    out.add_part(*k, t);
                }
            }
        }
        Ok(out)
    }

    /// Evaluates jets at the base point of `ctx`.
    pub fn at_base(&self, ctx: &GeoContext) -> Self {
        self.map_coeffs(|s| Ok(ctx.at_base(s))).expect("substitution is infallible")
    }

    /// Sets `|ξ| = 1` and returns the Clifford-valued polynomial.
    pub fn on_unit_sphere(&self) -> CliffordExpr {
        let mut out = CliffordExpr::zero();
        for c in self.parts.values() {
            out += c;
        }
        out
    }

    /// Clears denominators: `Σ_k n^{K-k} C_k` with `n` the polynomial `|ξ|^2`
    /// and `K` the largest power present. Canonical for comparisons.
    pub fn cleared(&self, norm_sq: &ScalarExpr, k_max: i32) -> CliffordExpr {
        let mut out = CliffordExpr::zero();
        for (k, c) in &self.parts {
            let e = k_max - k;
            assert!(e >= 0, "k_max below a stored power");
            out += &c.scale(&norm_sq.pow(e as u32));
        }
        out
    }

    pub fn max_power(&self) -> i32 {
        self.parts.keys().copied().max().unwrap_or(0)
    }

    /// Splits into homogeneous pieces by `ξ`-degree (`|ξ|^{-2k}` counts `-2k`).
    pub fn graded(&self) -> BTreeMap<i32, SymExpr> {
        let mut out: BTreeMap<i32, SymExpr> = BTreeMap::new();
        for (k, c) in &self.parts {
            for (w, coeff) in c.terms() {
                for (deg, piece) in coeff.split_by_xi_degree() {
                    out.entry(deg - 2 * k).or_default().add_part(*k, CliffordExpr::from_reduced(w.clone(), piece));
                }
            }
        }
        out
    }

    /// Degree-`deg` homogeneous extension of the restriction to `|ξ| = 1`.
    /// Fails if a piece has the wrong parity to be extended.
    pub fn homogenized(&self, deg: i32) -> Result<SymExpr> {
        let mut out = SymExpr::zero();
        for (k, c) in &self.parts {
            for (w, coeff) in c.terms() {
                for (d, piece) in coeff.split_by_xi_degree() {
                    let gap = deg - (d - 2 * k);
                    if gap % 2 != 0 {
                        return Err(Error::Unsupported(format!("piece of degree {} cannot extend to {deg}", d - 2 * k)));
                    }
                    out.add_part(k - gap / 2, CliffordExpr::from_reduced(w.clone(), piece));
                }
            }
        }
        Ok(out)
    }

    /// Whether `self` and `other` agree on the unit cosphere at the base point.
    pub fn same_on_sphere(&self, other: &SymExpr, deg: i32, ctx: &GeoContext) -> Result<bool> {
        let diff = (self - other).at_base(ctx).homogenized(deg)?;
        if diff.is_zero() {
            return Ok(true);
        }
        let n = ctx.at_base(&ctx.norm_sq());
        Ok(diff.cleared(&n, diff.max_power()).is_zero())
    }

    pub fn count_terms(&self) -> usize {
        self.parts.values().map(|c| c.terms().map(|(_, s)| s.len()).sum::<usize>()).sum()
    }
}

impl std::ops::Add for &SymExpr {
    type Output = SymExpr;
    fn add(self, o: &SymExpr) -> SymExpr {
        let mut out = self.clone();
        for (k, c) in &o.parts {
            out.add_part(*k, c.clone());
        }
        out
    }
}

impl std::ops::AddAssign<&SymExpr> for SymExpr {
    fn add_assign(&mut self, o: &SymExpr) {
        for (k, c) in &o.parts {
            self.add_part(*k, c.clone());
        }
    }
}

impl std::ops::Sub for &SymExpr {
    type Output = SymExpr;
    fn sub(self, o: &SymExpr) -> SymExpr {
        self + &-o
    }
}

impl std::ops::Neg for &SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        self.scale_coeff(&Coeff::int(-1))
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, "\n  + ")?;
            }
            match k {
                0 => write!(f, "[{c}]")?,
                _ => write!(f, "|xi|^{}*[{c}]", -2 * k)?,
            }
        }
        Ok(())
    }
}

/// Which perturbation of the Dirac operator.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, serde::Serialize)]
pub enum OperatorKind {
    /// `D + c(X) D^{-1} f D`
    A,
    /// `D + D^{-1} c(X) D`
    B,
}

impl std::str::FromStr for OperatorKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "A" | "a" => Ok(OperatorKind::A),
            "B" | "b" => Ok(OperatorKind::B),
            _ => Err(format!("unknown operator `{s}` (expected A or B)")),
        }
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Graded symbol with a truncation order.
#[derive(Clone, Debug, PartialEq)]
pub struct PdoSymbol {
    comps: BTreeMap<i32, SymExpr>,
    pub cutoff: i32,
    /// Number of scalar terms discarded below `cutoff`.
    pub dropped: usize,
}

pub const DEFAULT_CUTOFF: i32 = -4;

impl PdoSymbol {
    pub fn new(cutoff: i32) -> Self {
        PdoSymbol { comps: BTreeMap::new(), cutoff, dropped: 0 }
    }

    /// Adds `e`, splitting it by degree and dropping what falls below the cutoff.
    pub fn add(&mut self, e: &SymExpr) {
        for (d, piece) in e.graded() {
            if d < self.cutoff {
                self.dropped += piece.count_terms();
                continue;
            }
            let slot = self.comps.entry(d).or_default();
            *slot += &piece;
            if slot.is_zero() {
                self.comps.remove(&d);
            }
        }
    }

    /// Inserts a component that is known to be homogeneous of degree `d`.
    pub fn set(&mut self, d: i32, e: SymExpr) {
        if e.is_zero() {
            self.comps.remove(&d);
        } else {
            self.comps.insert(d, e);
        }
    }

    pub fn get(&self, d: i32) -> SymExpr {
        self.comps.get(&d).cloned().unwrap_or_default()
    }

    pub fn orders(&self) -> Vec<i32> {
        self.comps.keys().rev().copied().collect()
    }

    pub fn components(&self) -> impl Iterator<Item = (i32, &SymExpr)> {
        self.comps.iter().rev().map(|(d, e)| (*d, e))
    }

    pub fn map<F>(&self, mut f: F) -> Result<PdoSymbol>
    where
        F: FnMut(&SymExpr) -> Result<SymExpr>,
    {
        let mut out = PdoSymbol::new(self.cutoff);
        for e in self.comps.values() {
            out.add(&f(e)?);
        }
        out.dropped += self.dropped;
        Ok(out)
    }

    pub fn d_xi(&self, mu: u8, ctx: &GeoContext) -> Result<PdoSymbol> {
        self.map(|e| e.d_xi(mu, ctx))
    }

    pub fn d_x(&self, mu: u8, ctx: &GeoContext) -> Result<PdoSymbol> {
        self.map(|e| e.d_x(mu, ctx))
    }
}

/// All multi-indices of length `n` and total order `m`.
pub fn multi_indices(n: usize, m: u32) -> Vec<Vec<u8>> {
    fn rec(n: usize, m: u32, prefix: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n - 1 {
            let mut v = prefix.clone();
            v.push(m as u8);
            out.push(v);
            return;
        }
        for k in 0..=m {
            prefix.push(k as u8);
            rec(n, m - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, m, &mut Vec::new(), &mut out);
    out
}

fn factorial(k: u32) -> i64 {
    (1..=k as i64).product()
}

/// `Σ_{|α| = m} (-i)^m / α! ∂_ξ^α p · ∂_x^α q`.
fn compose_level(p: &SymExpr, q: &SymExpr, m: u32, ctx: &GeoContext) -> Result<SymExpr> {
    let mut out = SymExpr::zero();
    for alpha in multi_indices(ctx.n, m) {
        let mut dp = p.clone();
        let mut dq = q.clone();
        let mut afact = 1i64;
        for (idx, &a) in alpha.iter().enumerate() {
            let mu = idx as u8 + 1;
            for _ in 0..a {
                if dp.is_zero() || dq.is_zero() {
                    break;
                }
                dp = dp.d_xi(mu, ctx)?;
                dq = dq.d_x(mu, ctx)?;
            }
            afact *= factorial(a as u32);
        }
        if dp.is_zero() || dq.is_zero() {
            continue;
        }
        let c = &Coeff::i_pow(-(m as i64)) * &Coeff::ratio(1, afact);
        out += &dp.mul(&dq, ctx)?.scale_coeff(&c);
    }
    Ok(out)
}

/// Composition `σ^{PQ} = Σ_α (-i)^{|α|}/α! ∂_ξ^α σ^P ∂_x^α σ^Q`, truncated
/// at `cutoff`. `P` multiplies from the left.
pub fn compose(p: &PdoSymbol, q: &PdoSymbol, cutoff: i32, ctx: &GeoContext) -> Result<PdoSymbol> {
    let mut out = PdoSymbol::new(cutoff);
    for (dp, sp) in p.components() {
        for (dq, sq) in q.components() {
            let mut m = 0;
            while dp + dq - m as i32 >= cutoff {
                out.add(&compose_level(sp, sq, m, ctx)?);
                m += 1;
            }
        }
    }
    Ok(out)
}

/// Only the part of `p ∘ q` landing in degree `target`.
fn compose_at(p: &PdoSymbol, q: &PdoSymbol, target: i32, ctx: &GeoContext) -> Result<SymExpr> {
    let mut out = SymExpr::zero();
    for (dp, sp) in p.components() {
        for (dq, sq) in q.components() {
            let m = dp + dq - target;
            if m < 0 {
                continue;
            }
            out += &compose_level(sp, sq, m as u32, ctx)?;
        }
    }
    Ok(out)
}

/// Right parametrix of `square` through `depth` orders: `σ_{-2}, σ_{-3}, …`.
/// The leading symbol must be a constant multiple of `|ξ|^2`.
pub fn parametrix(square: &PdoSymbol, depth: usize, ctx: &GeoContext) -> Result<PdoSymbol> {
    let top = square.orders().first().copied().ok_or(Error::NonScalarLeading)?;
    let lead = square.get(top);
    let parts: Vec<_> = lead.parts().collect();
    let c = match parts.as_slice() {
        [(k, c)] if *k == -top / 2 && top > 0 => c.as_scalar().and_then(|s| s.as_constant()),
        _ => None,
    }
    .ok_or(Error::NonScalarLeading)?;
    let inv = c.inv().ok_or(Error::NonScalarLeading)?;
    let lead_inv = SymExpr::norm_pow(top / 2).scale_coeff(&inv);
    let cutoff = -top - depth as i32 + 1;
    let mut q = PdoSymbol::new(cutoff);
    q.set(-top, lead_inv.clone());
    for m in 1..depth as i32 {
        let rest = compose_at(square, &q, -m, ctx)?;
        let next = lead_inv.mul(&rest, ctx)?.scale_coeff(&Coeff::int(-1));
        q.set(-top - m, next);
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Cov;
    use crate::scalar::Var;

    fn flat() -> GeoContext {
        GeoContext::flat(4).unwrap()
    }

    #[test]
    fn multi_index_counts() {
        assert_eq!(multi_indices(4, 0).len(), 1);
        assert_eq!(multi_indices(4, 1).len(), 4);
        assert_eq!(multi_indices(4, 2).len(), 10);
    }

    #[test]
    fn norm_times_inverse_is_one_in_flat_space() {
        let ctx = flat();
        let mut p = PdoSymbol::new(-4);
        p.set(2, SymExpr::norm_pow(-1));
        let mut q = PdoSymbol::new(-4);
        q.set(-2, SymExpr::norm_pow(1));
        let r = compose(&p, &q, -4, &ctx).unwrap();
        assert_eq!(r.orders(), vec![0]);
        assert_eq!(r.get(0).on_unit_sphere(), CliffordExpr::one());
    }

    #[test]
    fn xi_derivative_of_inverse_norm() {
        let ctx = flat();
        let d = SymExpr::norm_pow(1).d_xi(2, &ctx).unwrap();
        let expected = SymExpr::with_power(2, CliffordExpr::scalar(ScalarExpr::var(Var::Xi(2)).scale(&Coeff::int(-2))));
        assert_eq!(d, expected);
    }

    #[test]
    fn constant_symbol_has_zero_xi_derivative() {
        let ctx = flat();
        let c = SymExpr::clifford(CliffordExpr::gen(Cov::Dx(1)));
        assert!(c.d_xi(1, &ctx).unwrap().is_zero());
    }

    #[test]
    fn composing_with_a_constant_scales() {
        let ctx = flat();
        let mut k = PdoSymbol::new(-4);
        k.set(0, SymExpr::scalar(ScalarExpr::int(3)));
        let mut q = PdoSymbol::new(-4);
        q.set(-2, SymExpr::norm_pow(1));
        q.set(-3, SymExpr::with_power(2, CliffordExpr::gen(Cov::Dx(1)).scale(&ScalarExpr::var(Var::Xi(1)))));
        let r = compose(&k, &q, -4, &ctx).unwrap();
        assert_eq!(r.get(-2), q.get(-2).scale(&ScalarExpr::int(3)));
        assert_eq!(r.get(-3), q.get(-3).scale(&ScalarExpr::int(3)));
    }

    #[test]
    fn parametrix_rejects_clifford_leading_symbol() {
        let ctx = flat();
        let mut p = PdoSymbol::new(-4);
        p.set(2, SymExpr::with_power(-1, CliffordExpr::gen(Cov::Dx(1))));
        assert!(matches!(parametrix(&p, 3, &ctx), Err(Error::NonScalarLeading)));
    }
}
