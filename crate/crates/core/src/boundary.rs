//! Boundary term of the residue for the collar model.
//!
//! The term is a sum over index tuples `(r, l, k, j, α)` with
//! `r + l − k − j − |α| = −3`, each contributing
//!
//! ```text
//! (−i)^{|α|+j+k+1} / (α! (j+k+1)!) ∫_{|ξ'|=1} ∫_ℝ
//!     tr[ ∂_{x_n}^j ∂_{ξ'}^α ∂_{ξ_n}^k π⁺σ_r  ×  ∂_{x'}^α ∂_{ξ_n}^{j+1} ∂_{x_n}^k σ_l ] dξ_n σ(ξ') dx'
//! ```
//!
//! where `σ_r` are the low orders of the inverse operator at the boundary
//! point. Evaluation order: Clifford trace, then `ξ'` over the unit 2-sphere
//! (odd powers of `g(X, ξ')` vanish), then `ξ_n` by residues.

use std::fmt;

use serde::Serialize;

use crate::cosphere::{DensityExpr, Measure};
use crate::error::{Error, Result};
use crate::geometry::GeoContext;
use crate::halfplane::{partial_fractions, pi_plus, real_line_integral, XiNFraction};
use crate::parse::{parse_scalar, parse_symbol};
use crate::printed::build_inverse_low_orders;
use crate::scalar::{Coeff, Monomial, ScalarExpr, Var};
use crate::symbols::{OperatorKind, SymExpr};

const DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CaseId {
    I,
    II,
    III,
    IV,
    V,
}

impl CaseId {
    pub const ALL: [CaseId; 5] = [CaseId::I, CaseId::II, CaseId::III, CaseId::IV, CaseId::V];
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for CaseId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        CaseId::ALL.into_iter().find(|c| c.to_string().eq_ignore_ascii_case(s)).ok_or_else(|| format!("unknown case `{s}` (expected I..V)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryCase {
    pub id: CaseId,
    pub r: i32,
    pub l: i32,
    pub k: u32,
    pub j: u32,
    /// `|α|`, tangential order.
    pub alpha: u32,
}

impl BoundaryCase {
    /// `(−i)^{|α|+j+k+1} / (α! (j+k+1)!)`; `α! = 1` whenever `|α| ≤ 1`.
    pub fn prefactor(&self) -> Coeff {
        let fact: i64 = (1..=(self.j + self.k + 1) as i64).product();
        let afact: i64 = (1..=self.alpha as i64).product();
        &Coeff::i_pow(-((self.alpha + self.j + self.k + 1) as i64)) * &Coeff::ratio(1, fact * afact)
    }
}

/// Solves `r + l − k − j − |α| = −3` with `r, l ≤ −1` and names the tuples.
pub fn enumerate_cases() -> Vec<BoundaryCase> {
    let mut out = Vec::new();
    for r in [-1, -2, -3] {
        for l in [-1, -2, -3] {
            let slack = r + l + 3;
            if slack < 0 {
                continue;
            }
            for alpha in 0..=slack as u32 {
                for j in 0..=slack as u32 - alpha {
                    let k = slack as u32 - alpha - j;
                    out.push((r, l, k, j, alpha));
                }
            }
        }
    }
    assert!(out.iter().all(|t| t.0 >= -2 && t.1 >= -2), "orders below -2 cannot occur");
    let id = |(r, l, k, j, alpha): (i32, i32, u32, u32, u32)| match (r, l, k, j, alpha) {
        (-1, -1, 0, 0, 1) => CaseId::I,
        (-1, -1, 0, 1, 0) => CaseId::II,
        (-1, -1, 1, 0, 0) => CaseId::III,
        (-2, -1, 0, 0, 0) => CaseId::IV,
        (-1, -2, 0, 0, 0) => CaseId::V,
        t => unreachable!("unexpected tuple {t:?}"),
    };
    let mut cases: Vec<BoundaryCase> =
        out.into_iter().map(|t| BoundaryCase { id: id(t), r: t.0, l: t.1, k: t.2, j: t.3, alpha: t.4 }).collect();
    cases.sort_by_key(|c| c.id);
    cases
}

pub fn case(id: CaseId) -> BoundaryCase {
    enumerate_cases().into_iter().find(|c| c.id == id).expect("all five cases exist")
}

fn collar() -> GeoContext {
    GeoContext::boundary(DIM).expect("dimension 4 is valid")
}

fn apply(sym: &SymExpr, dx: u32, dxi: u32, ctx: &GeoContext) -> Result<SymExpr> {
    let n = ctx.n as u8;
    let mut out = sym.clone();
    for _ in 0..dx {
        out = out.d_x(n, ctx)?;
    }
    for _ in 0..dxi {
        out = out.d_xi(n, ctx)?;
    }
    Ok(out)
}

/// `π⁺` of a collar symbol, returned as a fraction over `(ξ_n − i)^a`.
pub fn project_plus(sym: &SymExpr) -> Result<XiNFraction> {
    let r = partial_fractions(&XiNFraction::from_symbol(sym))?;
    Ok(pi_plus(&r).to_fraction())
}

/// `ξ'` integral over the unit 2-sphere of a numerator polynomial in
/// `g(X, ξ')`: odd powers vanish, the constant term picks up `Ω_3`.
pub fn integrate_tangential(num: &ScalarExpr) -> Result<ScalarExpr> {
    let mut out = ScalarExpr::zero();
    for (m, c) in num.terms() {
        let e = m.degree_of(Var::XiDotX);
        if e % 2 == 1 {
            continue;
        }
        if e > 0 {
            return Err(Error::OddSurvivor(format!("even power {e} of g(X, xi') left in a boundary integrand")));
        }
        if m.factors().iter().any(|(v, _)| matches!(v, Var::Xi(_))) {
            return Err(Error::OddSurvivor(format!("tangential component in {m}")));
        }
        out += &ScalarExpr::term(c.clone(), m.mul(&Monomial::var(Var::Omega3)));
    }
    Ok(out)
}

/// Traced, `ξ'`-integrated integrand of `left × right`, as a scalar fraction.
pub fn traced_integrand(left: &XiNFraction, right: &XiNFraction, ctx: &GeoContext) -> Result<XiNFraction> {
    let prod = left.mul(right, ctx)?;
    let tr = prod.num.trace(ctx)?;
    Ok(XiNFraction::scalar(integrate_tangential(&tr)?, prod.a, prod.b))
}

fn line_integral(f: &XiNFraction) -> Result<ScalarExpr> {
    let v = real_line_integral(&partial_fractions(f)?)?;
    v.as_scalar().ok_or(Error::Unsupported("Clifford-valued boundary integral".into()))
}

/// Full scalar integrand of a case (prefactor and `Ω_3` included), or `None`
/// when the right factor vanishes identically.
pub fn case_integrand(kind: OperatorKind, c: &BoundaryCase) -> Result<Option<XiNFraction>> {
    let ctx = collar();
    let sym = build_inverse_low_orders(kind, &ctx)?;
    let mut total: Option<XiNFraction> = None;
    let directions: Vec<Option<u8>> = if c.alpha == 0 { vec![None] } else { (1..ctx.n as u8).map(Some).collect() };
    for dir in directions {
        let mut right = apply(&sym.get(c.l), c.k, 0, &ctx)?;
        if let Some(mu) = dir {
            right = right.d_x(mu, &ctx)?;
        }
        let right = apply(&right, 0, c.j + 1, &ctx)?;
        if right.is_zero() {
            continue;
        }
        let mut left = apply(&sym.get(c.r), c.j, c.k, &ctx)?;
        if let Some(mu) = dir {
            left = left.d_xi(mu, &ctx)?;
        }
        let lf = project_plus(&left)?;
        let f = traced_integrand(&lf, &XiNFraction::from_symbol(&right), &ctx)?;
        let f = XiNFraction::new(f.num.scale_coeff(&c.prefactor()), f.a, f.b);
        total = Some(match total {
            None => f,
            Some(t) => {
                let (a, b) = (t.a.max(f.a), t.b.max(f.b));
                let lift = |g: &XiNFraction| {
                    let m = ScalarExpr::var(Var::XiN);
                    let up = |r: ScalarExpr, e: u32| (&m - &r).pow(e);
                    let i = ScalarExpr::i();
                    g.num.scale(&(&up(i.clone(), a - g.a) * &up(-&i, b - g.b)))
                };
                XiNFraction::new(&lift(&t) + &lift(&f), a, b)
            }
        });
    }
    Ok(total)
}

pub fn phi_case(kind: OperatorKind, c: &BoundaryCase) -> Result<DensityExpr> {
    let value = match case_integrand(kind, c)? {
        None => ScalarExpr::zero(),
        Some(f) => line_integral(&f)?,
    };
    Ok(DensityExpr::new(value, Measure::DxPrime))
}

/// Named pieces of `σ_{-2}` used to split case IV: `C1` (spin connection and
/// `∂_{x_n} c(ξ')`), `C2` (the `h'(0)` block, entering with a minus sign),
/// and the perturbation block (`C3` for A, `C4` for B).
pub fn case_iv_pieces(kind: OperatorKind) -> Vec<(&'static str, i64, &'static str)> {
    let c1 = "c(xi) Q c(xi) |xi|^-4 + c(xi) |xi|^-4 c(dxn) dx4(c(xi))";
    let c2 = "c(xi) |xi|^-6 c(dxn) c(xi) dx4(|xi|^2)";
    match kind {
        OperatorKind::A => vec![("C1", 1, c1), ("C2", -1, c2), ("C3", 1, "c(xi) f c(X) c(xi) |xi|^-4")],
        OperatorKind::B => vec![("C1", 1, c1), ("C2", -1, c2), ("C4", 1, "c(xi) (-c(X) + 2 c(xi) (xiX + xin X4) |xi|^-2) c(xi) |xi|^-4")],
    }
}

/// `π⁺` of a named piece, and its contribution `−i ∫∫ tr[π⁺(piece) × ∂_{ξ_n} σ_{-1}]`
/// (with the piece's sign in `σ_{-2}` applied).
pub fn piece_contribution(kind: OperatorKind, name: &str) -> Result<(XiNFraction, DensityExpr)> {
    let ctx = collar();
    let (_, sign, src) =
        case_iv_pieces(kind).into_iter().find(|(n, _, _)| *n == name).ok_or_else(|| Error::Unsupported(format!("no piece `{name}`")))?;
    let piece = parse_symbol(src, &ctx)?;
    let plus = project_plus(&piece)?;
    let sym = build_inverse_low_orders(kind, &ctx)?;
    let right = XiNFraction::from_symbol(&apply(&sym.get(-1), 0, 1, &ctx)?);
    let f = traced_integrand(&plus, &right, &ctx)?;
    let pre = &case(CaseId::IV).prefactor() * &Coeff::int(sign);
    let v = line_integral(&XiNFraction::new(f.num.scale_coeff(&pre), f.a, f.b))?;
    Ok((plus, DensityExpr::new(v, Measure::DxPrime)))
}

/// Case values as stated for each operator.
pub fn stated_case_value(kind: OperatorKind, id: CaseId) -> ScalarExpr {
    let src = match (kind, id) {
        (_, CaseId::I) => "0",
        (_, CaseId::II) => "-3/8 pi hp Omega3",
        (_, CaseId::III) => "3/8 pi hp Omega3",
        (OperatorKind::A, CaseId::IV) => "9/8 pi hp Omega3 - pi f X4 Omega3",
        (OperatorKind::A, CaseId::V) => "-9/8 pi hp Omega3 + pi f X4 Omega3",
        (OperatorKind::B, CaseId::IV) => "9/8 pi hp Omega3 + 1/2 pi X4 Omega3",
        (OperatorKind::B, CaseId::V) => "-9/8 pi hp Omega3 - 1/2 pi X4 Omega3",
    };
    parse_scalar(src).expect("static expression")
}

/// The `h'(0)`-proportional part of a case density.
pub fn hprime_block(d: &ScalarExpr) -> ScalarExpr {
    d.filter_terms(|m| m.degree_of(Var::HPrime) > 0)
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub id: CaseId,
    pub density: DensityExpr,
    pub paper_density: DensityExpr,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub operator: OperatorKind,
    pub cases: Vec<CaseReport>,
    pub total: DensityExpr,
    pub vanishes: bool,
}

pub fn phi_cases(kind: OperatorKind, ids: &[CaseId]) -> Result<Vec<CaseReport>> {
    let mut out = Vec::new();
    for c in enumerate_cases().iter().filter(|c| ids.contains(&c.id)) {
        let density = phi_case(kind, c)?;
        let paper = DensityExpr::new(stated_case_value(kind, c.id), Measure::DxPrime);
        out.push(CaseReport { id: c.id, matches: density == paper, density, paper_density: paper });
    }
    Ok(out)
}

pub fn phi_total(kind: OperatorKind) -> Result<PhiReport> {
    let cases = phi_cases(kind, &CaseId::ALL)?;
    let mut total = DensityExpr::zero(Measure::DxPrime);
    for c in &cases {
        total = total.plus(&c.density)?;
    }
    Ok(PhiReport { operator: kind, vanishes: total.is_zero(), cases, total })
}

/// Clifford-valued `π⁺ σ_{-1}` on `|ξ'| = 1`, numerator over `(ξ_n − i)`.
pub fn plus_sigma_minus1(kind: OperatorKind) -> Result<XiNFraction> {
    let ctx = collar();
    project_plus(&build_inverse_low_orders(kind, &ctx)?.get(-1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_five_cases() {
        let cs = enumerate_cases();
        assert_eq!(cs.iter().map(|c| c.id).collect::<Vec<_>>(), CaseId::ALL.to_vec());
        assert_eq!(case(CaseId::II).prefactor(), Coeff::ratio(-1, 2));
        assert_eq!(case(CaseId::IV).prefactor(), -Coeff::i());
    }

    #[test]
    fn tangential_integration() {
        let e = parse_scalar("3 xiX + 2 hp").unwrap();
        assert_eq!(integrate_tangential(&e).unwrap(), parse_scalar("2 hp Omega3").unwrap());
        assert!(integrate_tangential(&parse_scalar("xiX^2").unwrap()).is_err());
    }

    #[test]
    fn case_one_vanishes() {
        assert!(phi_case(OperatorKind::A, &case(CaseId::I)).unwrap().is_zero());
    }

    #[test]
    fn case_two_value() {
        let d = phi_case(OperatorKind::A, &case(CaseId::II)).unwrap();
        assert_eq!(d.value, stated_case_value(OperatorKind::A, CaseId::II));
    }
}
