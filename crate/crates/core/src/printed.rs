//! Published symbol data, kept as text records under `fixtures/`, plus the
//! constructors that turn them into [`PdoSymbol`]s.

use crate::error::{Error, Result};
use crate::geometry::GeoContext;
use crate::parse::{parse_symbol, records};
use crate::symbols::{compose, OperatorKind, PdoSymbol, SymExpr};

const SQUARE_A: &str = include_str!("../fixtures/square_a.txt");
const SQUARE_B: &str = include_str!("../fixtures/square_b.txt");
const INVERSE_A: &str = include_str!("../fixtures/inverse_a.txt");
const INVERSE_B: &str = include_str!("../fixtures/inverse_b.txt");
const GRAVITY: &str = include_str!("../fixtures/gravity.txt");
const LOW_ORDERS: &str = include_str!("../fixtures/low_orders.txt");

fn entry(file: &str, name: &str, ctx: &GeoContext) -> Result<SymExpr> {
    let recs = records(file)?;
    let (_, body) = recs.iter().find(|(n, _)| n == name).ok_or_else(|| Error::Unsupported(format!("no record `{name}`")))?;
    parse_symbol(body, ctx)
}

fn interior_only(ctx: &GeoContext) -> Result<()> {
    if ctx.is_boundary() {
        return Err(Error::Unsupported("square symbols are tabulated for interior charts only".into()));
    }
    Ok(())
}

/// `σ_2, σ_1, σ_0` of the square as tabulated.
pub fn build_square_symbol(kind: OperatorKind, ctx: &GeoContext) -> Result<PdoSymbol> {
    interior_only(ctx)?;
    let file = match kind {
        OperatorKind::A => SQUARE_A,
        OperatorKind::B => SQUARE_B,
    };
    let mut p = PdoSymbol::new(0);
    for d in [2, 1, 0] {
        p.set(d, entry(file, &format!("order {d}"), ctx)?);
    }
    Ok(p)
}

/// Tabulated `σ_{-2}` or `σ_{-3}` of the inverse square.
pub fn printed_inverse(kind: OperatorKind, order: i32, ctx: &GeoContext) -> Result<SymExpr> {
    interior_only(ctx)?;
    let file = match kind {
        OperatorKind::A => INVERSE_A,
        OperatorKind::B => INVERSE_B,
    };
    entry(file, &format!("order {order}"), ctx)
}

/// Named term list of `σ_{-4}`: the shared `N` block then the
/// operator-specific block (`M` for A, `R` for B).
pub fn printed_terms(kind: OperatorKind, ctx: &GeoContext) -> Result<Vec<(String, SymExpr)>> {
    interior_only(ctx)?;
    let own = match kind {
        OperatorKind::A => INVERSE_A,
        OperatorKind::B => INVERSE_B,
    };
    let mut out = Vec::new();
    for file in [GRAVITY, own] {
        for (name, body) in records(file)? {
            if name.starts_with("order") {
                continue;
            }
            out.push((name, parse_symbol(&body, ctx)?));
        }
    }
    Ok(out)
}

/// `σ_{-1}` and `σ_{-2}` of the inverse of the (unsquared) operator.
pub fn build_inverse_low_orders(kind: OperatorKind, ctx: &GeoContext) -> Result<PdoSymbol> {
    let chart = if ctx.is_boundary() { "collar" } else { "interior" };
    let mut p = PdoSymbol::new(-2);
    for d in [-1, -2] {
        p.set(d, entry(LOW_ORDERS, &format!("{chart} {kind} {d}"), ctx)?);
    }
    Ok(p)
}

fn from_text(src: &str, cutoff: i32, ctx: &GeoContext) -> Result<PdoSymbol> {
    let mut p = PdoSymbol::new(cutoff);
    p.add(&parse_symbol(src, ctx)?);
    Ok(p)
}

/// Symbol of the operator itself, assembled from `D`, `D^{-1}`, `f` and
/// `c(X)` by composition. Flat charts only: there `D^{-1}` is exact.
pub fn factor_symbol(kind: OperatorKind, cutoff: i32, ctx: &GeoContext) -> Result<PdoSymbol> {
    if ctx.kind != crate::geometry::ContextKind::Flat {
        return Err(Error::Unsupported("factor symbols are exact only on flat charts".into()));
    }
    let d = from_text("i c(xi)", cutoff, ctx)?;
    let d_inv = from_text("i c(xi) |xi|^-2", cutoff, ctx)?;
    let f = from_text("f", cutoff, ctx)?;
    let cx = from_text("c(X)", cutoff, ctx)?;
    let tail = match kind {
        OperatorKind::A => {
            let fd = compose(&f, &d, cutoff, ctx)?;
            let inner = compose(&d_inv, &fd, cutoff, ctx)?;
            compose(&cx, &inner, cutoff, ctx)?
        }
        OperatorKind::B => {
            let xd = compose(&cx, &d, cutoff, ctx)?;
            compose(&d_inv, &xd, cutoff, ctx)?
        }
    };
    let mut out = d;
    for (deg, e) in tail.components() {
        let mut sum = out.get(deg);
        sum += e;
        out.set(deg, sum);
    }
    Ok(out)
}

/// Square of [`factor_symbol`] through order 0.
pub fn rederived_square(kind: OperatorKind, ctx: &GeoContext) -> Result<PdoSymbol> {
    let a = factor_symbol(kind, -2, ctx)?;
    let mut sq = compose(&a, &a, 0, ctx)?;
    // (i c(ξ))² comes out as the polynomial Σ ξ_k²; store it as the |ξ|² atom.
    let lead = SymExpr::norm_pow(-1);
    if !sq.get(2).same_on_sphere(&lead, 2, ctx)? {
        return Err(Error::NonScalarLeading);
    }
    sq.set(2, lead);
    Ok(sq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_record_parses() {
        let ctx = GeoContext::interior(4).unwrap();
        for kind in [OperatorKind::A, OperatorKind::B] {
            assert_eq!(build_square_symbol(kind, &ctx).unwrap().orders(), vec![2, 1, 0]);
            assert!(!printed_inverse(kind, -3, &ctx).unwrap().is_zero());
            assert_eq!(printed_terms(kind, &ctx).unwrap().len(), if kind == OperatorKind::A { 20 } else { 18 });
            build_inverse_low_orders(kind, &ctx).unwrap();
            build_inverse_low_orders(kind, &GeoContext::boundary(4).unwrap()).unwrap();
        }
    }

    #[test]
    fn leading_factor_symbol_is_dirac() {
        let ctx = GeoContext::flat(4).unwrap();
        let a = factor_symbol(OperatorKind::B, -1, &ctx).unwrap();
        assert_eq!(a.get(1), parse_symbol("i c(xi)", &ctx).unwrap());
    }

    #[test]
    fn boundary_square_is_rejected() {
        let ctx = GeoContext::boundary(4).unwrap();
        assert!(build_square_symbol(OperatorKind::A, &ctx).is_err());
    }
}
