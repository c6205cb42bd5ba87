//! Text grammar for scalars, Clifford words and symbols.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := ['+' | '-'] power (('*' | '/' | <juxtaposition>) power)*
//! power  := atom ('^' ['-'] int)?
//! atom   := int | 'i' | ident | 'c(' cov ')' | '|xi|' | '(' expr ')' | '[' expr ']'
//!         | 'sum(' letter ':' expr ')' | 'dx' int '(' expr ')' | 'dxi' int '(' expr ')'
//! ```
//!
//! `sum(m: body)` repeats `body` for `m = 1..n`, replacing `{m}` textually.
//! Composite generators `c(xi)`, `c(X)`, `c(df)` are expanded by the context.
//! Record files hold `name: expr` entries; indented lines continue a record
//! and `#` starts a comment.

use crate::clifford::{CliffordExpr, Cov};
use crate::error::{Error, Result};
use crate::geometry::GeoContext;
use crate::scalar::{Coeff, Deriv, Field, Invariant, ScalarExpr, Var};
use crate::symbols::SymExpr;

/// Parses an indeterminate name as rendered by `Var`'s `Display`.
pub fn var_from_name(name: &str) -> Option<Var> {
    let simple = match name {
        "pi" => Some(Var::Pi),
        "Omega3" => Some(Var::Omega3),
        "VolS3" => Some(Var::VolS3),
        "hp" => Some(Var::HPrime),
        "s" => Some(Var::Curv),
        "xin" => Some(Var::XiN),
        "xiX" => Some(Var::XiDotX),
        _ => None,
    };
    if simple.is_some() {
        return simple;
    }
    for inv in Invariant::ALL {
        if Var::Inv(inv).to_string() == name {
            return Some(Var::Inv(inv));
        }
    }
    if let Some(rest) = name.strip_prefix("xi") {
        if let Some(m) = single_digit(rest) {
            return Some(Var::Xi(m));
        }
    }
    let (deriv, field) = match name.strip_prefix('d').and_then(|r| r.split_once('_')) {
        Some((digits, field)) if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => {
            let mut d = Deriv::NONE;
            for b in digits.bytes() {
                let k = (b - b'0') as usize;
                if !(1..=4).contains(&k) {
                    return None;
                }
                d = d.bump(k);
            }
            (d, field)
        }
        _ => (Deriv::NONE, name),
    };
    field_from_name(field).map(|f| Var::Jet(f, deriv))
}

fn single_digit(s: &str) -> Option<u8> {
    match s.as_bytes() {
        [b] if (b'1'..=b'9').contains(b) => Some(b - b'0'),
        _ => None,
    }
}

fn field_from_name(s: &str) -> Option<Field> {
    if s == "f" {
        return Some(Field::F);
    }
    if let Some(r) = s.strip_prefix("Gam") {
        return single_digit(r).map(Field::Gamma);
    }
    if let Some(r) = s.strip_prefix("om") {
        let (m, ab) = r.split_once('_')?;
        let m = single_digit(m)?;
        let b = ab.as_bytes();
        if b.len() != 2 {
            return None;
        }
        let (x, y) = (b[0].wrapping_sub(b'0'), b[1].wrapping_sub(b'0'));
        return (x >= 1 && x < y && y <= 9).then_some(Field::Spin(m, x, y));
    }
    if let Some(r) = s.strip_prefix('X') {
        return single_digit(r).map(Field::X);
    }
    if let Some(r) = s.strip_prefix('g') {
        let b = r.as_bytes();
        if b.len() != 2 {
            return None;
        }
        let (x, y) = (b[0].wrapping_sub(b'0'), b[1].wrapping_sub(b'0'));
        return ((1..=9).contains(&x) && (1..=9).contains(&y)).then(|| Field::metric(x, y));
    }
    None
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    ctx: &'a GeoContext,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn bytes(&self) -> &[u8] {
        self.src.as_bytes()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos, format!("expected `{}`", c as char))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let b = self.bytes()[self.pos];
            if b.is_ascii_alphanumeric() || b == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.src[start..self.pos].to_string()
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.bytes()[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().or_else(|_| err(start, "expected integer"))
    }

    /// Byte index of the `)` or `]` matching the opener just consumed.
    fn matching_close(&self, open: usize) -> Result<usize> {
        let mut depth = 0i32;
        for (k, b) in self.bytes()[open..].iter().enumerate() {
            match b {
                b'(' | b'[' => depth += 1,
                b')' | b']' => {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(open + k);
                    }
                }
                _ => {}
            }
        }
        err(open, "unbalanced bracket")
    }

    fn expr(&mut self) -> Result<SymExpr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc += &-&self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        matches!(self.peek(), Some(b) if b.is_ascii_alphanumeric() || matches!(b, b'(' | b'[' | b'|'))
    }

    fn term(&mut self) -> Result<SymExpr> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.power()?, self.ctx)?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.power()?;
                acc = acc.mul(&invert(&d).ok_or(Error::Parse { pos: at, msg: "unsupported divisor".into() })?, self.ctx)?;
            } else if self.starts_atom() {
                acc = acc.mul(&self.power()?, self.ctx)?;
            } else {
                break;
            }
        }
        Ok(if neg { -&acc } else { acc })
    }

    fn exponent(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let k = self.int()?;
        Ok(if neg { -k } else { k })
    }

    fn power(&mut self) -> Result<SymExpr> {
        if self.peek() == Some(b'|') {
            let at = self.pos;
            self.pos += 1;
            if self.ident() != "xi" || !self.eat(b'|') {
                return err(at, "expected |xi|");
            }
            let k = if self.eat(b'^') { self.exponent()? } else { 1 };
            if k % 2 != 0 {
                return err(at, "odd power of |xi|");
            }
            return Ok(SymExpr::norm_pow((-k / 2) as i32));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let k = self.exponent()?;
            if k < 0 {
                return err(at, "negative power of a non-norm factor");
            }
            let mut out = SymExpr::one();
            for _ in 0..k {
                out = out.mul(&base, self.ctx)?;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<SymExpr> {
        let at = self.pos;
        match self.peek() {
            Some(b'(') | Some(b'[') => {
                let close = self.bytes()[self.pos];
                self.pos += 1;
                let e = self.expr()?;
                self.expect(if close == b'(' { b')' } else { b']' })?;
                return Ok(e);
            }
            Some(b) if b.is_ascii_digit() => {
                return Ok(SymExpr::scalar(ScalarExpr::int(self.int()?)));
            }
            None => return err(at, "unexpected end of input"),
            _ => {}
        }
        let name = self.ident();
        if name.is_empty() {
            return err(self.pos, "unexpected character");
        }
        if self.bytes().get(self.pos) == Some(&b'(') {
            return self.call(&name, at);
        }
        self.named(&name, at)
    }

    fn call(&mut self, name: &str, at: usize) -> Result<SymExpr> {
        let open = self.pos;
        let close = self.matching_close(open)?;
        let inner = &self.src[open + 1..close];
        self.pos = close + 1;
        if name == "c" {
            let cov = Cov::from_name(inner.trim()).ok_or(Error::Parse { pos: at, msg: format!("unknown covector `{inner}`") })?;
            let e = self.ctx.expand(cov).unwrap_or_else(|| CliffordExpr::gen(cov));
            return Ok(SymExpr::clifford(e));
        }
        if name == "sum" {
            let (letter, body) = inner.split_once(':').ok_or(Error::Parse { pos: at, msg: "sum needs `letter:`".into() })?;
            let key = format!("{{{}}}", letter.trim());
            let mut acc = SymExpr::zero();
            for m in 1..=self.ctx.n {
                let text = body.replace(&key, &m.to_string());
                acc += &parse_symbol(&text, self.ctx)?;
            }
            return Ok(acc);
        }
        let inner_expr = parse_symbol(inner, self.ctx)?;
        if let Some(mu) = name.strip_prefix("dxi").and_then(single_digit) {
            return inner_expr.d_xi(mu, self.ctx);
        }
        if let Some(mu) = name.strip_prefix("dx").and_then(single_digit) {
            return inner_expr.d_x(mu, self.ctx);
        }
        err(at, format!("unknown function `{name}`"))
    }

    fn named(&mut self, name: &str, at: usize) -> Result<SymExpr> {
        let ctx = self.ctx;
        if name == "i" {
            return Ok(SymExpr::scalar(ScalarExpr::i()));
        }
        if name == "Q" {
            return Ok(SymExpr::clifford(ctx.spin_q()?));
        }
        if let Some(m) = name.strip_prefix("xiu").and_then(single_digit) {
            return Ok(SymExpr::scalar(ctx.xi_upper(m)?));
        }
        if let Some(m) = name.strip_prefix("gam").and_then(single_digit) {
            return Ok(SymExpr::clifford(CliffordExpr::gen(Cov::Dx(m))));
        }
        if let Some(m) = name.strip_prefix("sigu").and_then(single_digit) {
            let mut acc = SymExpr::zero();
            for nu in 1..=ctx.n as u8 {
                let g = ScalarExpr::var(Var::jet(Field::metric(m, nu)));
                acc += &self.spin(nu)?.scale(&g);
            }
            return Ok(acc);
        }
        if let Some(m) = name.strip_prefix("sig").and_then(single_digit) {
            return self.spin(m);
        }
        match var_from_name(name) {
            Some(v) => {
                v.validate(ctx.n).map_err(|_| Error::Parse { pos: at, msg: format!("index out of range in `{name}`") })?;
                Ok(SymExpr::scalar(ScalarExpr::var(v)))
            }
            None => err(at, format!("unknown identifier `{name}`")),
        }
    }

    /// `σ_m = Σ_{a<b} om_{m,ab} c(dx_a) c(dx_b)`.
    fn spin(&self, m: u8) -> Result<SymExpr> {
        let mut acc = CliffordExpr::zero();
        for a in 1..=self.ctx.n as u8 {
            for b in a + 1..=self.ctx.n as u8 {
                let w = CliffordExpr::normalize(&[Cov::Dx(a), Cov::Dx(b)], self.ctx)?;
                acc += &w.scale(&ScalarExpr::var(Var::jet(Field::Spin(m, a, b))));
            }
        }
        Ok(SymExpr::clifford(acc))
    }
}

/// Inverse of a divisor of the form `constant * |xi|^{2k}`.
fn invert(d: &SymExpr) -> Option<SymExpr> {
    let parts: Vec<_> = d.parts().collect();
    let [(k, c)] = parts.as_slice() else { return None };
    let c = c.as_scalar()?.as_constant()?.inv()?;
    Some(SymExpr::norm_pow(-k).scale_coeff(&c))
}

/// Parses a symbol expression in `ctx`.
pub fn parse_symbol(src: &str, ctx: &GeoContext) -> Result<SymExpr> {
    let mut p = Parser { src, pos: 0, ctx };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != src.len() {
        return err(p.pos, "trailing input");
    }
    Ok(e)
}

/// Parses a Clifford expression (no `|xi|` powers).
pub fn parse_clifford(src: &str, ctx: &GeoContext) -> Result<CliffordExpr> {
    let e = parse_symbol(src, ctx)?;
    match e.parts().collect::<Vec<_>>().as_slice() {
        [] => Ok(CliffordExpr::zero()),
        [(0, c)] => Ok((*c).clone()),
        _ => err(0, "expected a Clifford expression without |xi| powers"),
    }
}

/// Parses a scalar expression in the flat four-dimensional context.
pub fn parse_scalar(src: &str) -> Result<ScalarExpr> {
    let ctx = GeoContext::flat(4).expect("n = 4 is valid");
    parse_clifford(src, &ctx)?.as_scalar().ok_or(Error::Parse { pos: 0, msg: "expected a scalar".into() })
}

/// Splits a record file into `(name, body)` pairs.
pub fn records(src: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with(char::is_whitespace) {
            match out.last_mut() {
                Some((_, body)) => {
                    body.push(' ');
                    body.push_str(line.trim());
                }
                None => return err(lineno, "continuation line before any record"),
            }
            continue;
        }
        let (name, body) = line.split_once(':').ok_or(Error::Parse { pos: lineno, msg: "expected `name: expr`".into() })?;
        out.push((name.trim().to_string(), body.trim().to_string()));
    }
    Ok(out)
}

/// Convenience: rational literal as a scalar.
pub fn rational(n: i64, d: i64) -> ScalarExpr {
    ScalarExpr::constant(Coeff::ratio(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Pairing;

    #[test]
    fn var_names_round_trip() {
        let vars = [
            Var::Pi,
            Var::Omega3,
            Var::HPrime,
            Var::XiDotX,
            Var::Xi(3),
            Var::jet(Field::F),
            Var::Jet(Field::X(2), Deriv::NONE.bump(1)),
            Var::Jet(Field::metric(1, 3), Deriv::NONE.bump(2).bump(2)),
            Var::Jet(Field::Spin(1, 2, 4), Deriv::NONE.bump(3)),
            Var::jet(Field::Gamma(4)),
            Var::Inv(Invariant::DivFX),
        ];
        for v in vars {
            assert_eq!(var_from_name(&v.to_string()), Some(v), "{v}");
        }
    }

    #[test]
    fn scalar_rendering_round_trips() {
        let e = parse_scalar("-3/8 pi Omega3 hp + 2*f*X4 - i*xiX^2").unwrap();
        assert_eq!(parse_scalar(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn anticommutator_of_xi_and_x() {
        let ctx = GeoContext::interior(4).unwrap();
        let e = parse_clifford("c(xi)c(X) + c(X)c(xi)", &ctx).unwrap();
        let expected = ctx.pair(Cov::Xi, Cov::X).unwrap().scale(&Coeff::int(-2));
        assert_eq!(e, CliffordExpr::scalar(expected));
    }

    #[test]
    fn sum_expands_placeholders() {
        let ctx = GeoContext::flat(4).unwrap();
        let a = parse_symbol("sum(m: xi{m}*xi{m})", &ctx).unwrap();
        assert_eq!(a, SymExpr::scalar(crate::geometry::euclid_norm_sq(4)));
    }

    #[test]
    fn division_by_norm_powers() {
        let ctx = GeoContext::flat(4).unwrap();
        let a = parse_symbol("1/|xi|^2", &ctx).unwrap();
        assert_eq!(a, SymExpr::norm_pow(1));
        let b = parse_symbol("|xi|^-4 / 2", &ctx).unwrap();
        assert_eq!(b, SymExpr::norm_pow(2).scale(&rational(1, 2)));
    }

    #[test]
    fn derivative_operators() {
        let ctx = GeoContext::boundary(4).unwrap();
        let a = parse_symbol("dx4(i c(xi) |xi|^-2)", &ctx).unwrap();
        let b = parse_symbol("i c(w) |xi|^-2 - i c(xi) hp |xi|^-4", &ctx).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn records_with_continuations() {
        let r = records("# header\nA: 1 +\n   2\nB: c(dx1)  # trailing\n").unwrap();
        assert_eq!(r, vec![("A".into(), "1 + 2".into()), ("B".into(), "c(dx1)".into())]);
    }

    #[test]
    fn unknown_identifiers_are_rejected() {
        assert!(matches!(parse_scalar("zeta"), Err(Error::Parse { .. })));
        assert!(matches!(parse_scalar("X7"), Err(Error::Parse { .. })));
    }
}
