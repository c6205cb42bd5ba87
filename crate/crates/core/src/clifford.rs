//! Clifford algebra over formal covectors and the spinor trace.
//!
//! Convention: `c(a)c(b) + c(b)c(a) = -2 g(a,b)`, so `c(a)^2 = -|a|^2`.
//! Words are reduced by adjacent transpositions to strictly increasing
//! covector rank; the pairing table is supplied by the caller.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Coeff, ScalarExpr};

/// Formal covector identifiers.
///
/// The derived order is the default reduction order. `Dx(m)` are the frozen
/// coordinate covectors of the interior model; the others are the named
/// covectors of the boundary model (`Xi` is the full cotangent vector).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Cov {
    Dx(u8),
    Xi,
    Xip,
    X,
    Df,
    /// Normal derivative of `c(ξ')` at the base point.
    W,
    Dxn,
}

impl Cov {
    pub fn name(&self) -> String {
        match self {
            Cov::Dx(m) => format!("dx{m}"),
            Cov::Xi => "xi".into(),
            Cov::Xip => "xip".into(),
            Cov::X => "X".into(),
            Cov::Df => "df".into(),
            Cov::W => "w".into(),
            Cov::Dxn => "dxn".into(),
        }
    }

    pub fn from_name(s: &str) -> Option<Cov> {
        Some(match s {
            "xi" => Cov::Xi,
            "xip" => Cov::Xip,
            "X" => Cov::X,
            "df" => Cov::Df,
            "w" => Cov::W,
            "dxn" => Cov::Dxn,
            _ => {
                let m: u8 = s.strip_prefix("dx")?.parse().ok()?;
                if m == 0 {
                    return None;
                }
                Cov::Dx(m)
            }
        })
    }
}

impl fmt::Display for Cov {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Source of inner products between covectors.
pub trait Pairing {
    fn pair(&self, a: Cov, b: Cov) -> Result<ScalarExpr>;

    /// Spinor dimension used for `tr[id]`.
    fn spinor_dim(&self) -> i64 {
        4
    }
}

/// Orthonormal pairing on `dx1..dxn`; every other pairing is undeclared.
#[derive(Clone, Copy, Debug)]
pub struct Euclidean(pub usize);

impl Pairing for Euclidean {
    fn pair(&self, a: Cov, b: Cov) -> Result<ScalarExpr> {
        match (a, b) {
            (Cov::Dx(i), Cov::Dx(j)) if (i as usize) <= self.0 && (j as usize) <= self.0 => Ok(ScalarExpr::int((i == j) as i64)),
            _ => Err(Error::UndeclaredPairing(a.name(), b.name())),
        }
    }

    fn spinor_dim(&self) -> i64 {
        1 << (self.0 / 2)
    }
}

pub type Word = Vec<Cov>;

/// Linear combination of reduced words with scalar coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct CliffordExpr {
    terms: BTreeMap<Word, ScalarExpr>,
}

impl CliffordExpr {
    pub fn zero() -> Self {
        CliffordExpr { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        CliffordExpr::scalar(ScalarExpr::one())
    }

    pub fn scalar(s: ScalarExpr) -> Self {
        let mut out = CliffordExpr::zero();
        out.add_word(Vec::new(), s);
        out
    }

    /// The single generator `c(a)`.
    pub fn gen(a: Cov) -> Self {
        let mut out = CliffordExpr::zero();
        out.add_word(vec![a], ScalarExpr::one());
        out
    }

    /// A single word that is already in normal form.
    pub fn from_reduced(w: Word, c: ScalarExpr) -> Self {
        let mut out = CliffordExpr::zero();
        out.add_word(w, c);
        out
    }

    /// Reduces a raw word under the default covector order.
    pub fn normalize(word: &[Cov], p: &dyn Pairing) -> Result<Self> {
        Self::normalize_with_rank(word, p, &|c: Cov| c)
    }

    /// Reduces a raw word under the total order induced by `rank`.
    pub fn normalize_with_rank<K: Ord>(word: &[Cov], p: &dyn Pairing, rank: &dyn Fn(Cov) -> K) -> Result<Self> {
        let mut out = CliffordExpr::zero();
        let mut stack: Vec<(Word, ScalarExpr)> = vec![(word.to_vec(), ScalarExpr::one())];
        while let Some((w, c)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            let pos = (0..w.len().saturating_sub(1)).find(|&i| rank(w[i]) >= rank(w[i + 1]));
            let Some(i) = pos else {
                out.add_word(w, c);
                continue;
            };
            let (a, b) = (w[i], w[i + 1]);
            let g = p.pair(a, b)?;
            let mut rest = w.clone();
            rest.drain(i..i + 2);
            if a == b {
                stack.push((rest, -(&c * &g)));
            } else {
                let mut swapped = w;
                swapped.swap(i, i + 1);
                stack.push((swapped, -c.clone()));
                stack.push((rest, (&c * &g).scale(&Coeff::int(-2))));
            }
        }
        Ok(out)
    }

    /// Re-reduces every word under a different order.
    pub fn renormalize_with_rank<K: Ord>(&self, p: &dyn Pairing, rank: &dyn Fn(Cov) -> K) -> Result<Self> {
        let mut out = CliffordExpr::zero();
        for (w, c) in &self.terms {
            out += &Self::normalize_with_rank(w, p, rank)?.scale(c);
        }
        Ok(out)
    }

    fn add_word(&mut self, w: Word, c: ScalarExpr) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &ScalarExpr)> {
        self.terms.iter()
    }

    /// Coefficient of the empty word.
    pub fn scalar_part(&self) -> ScalarExpr {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    /// The scalar value if no non-empty word is present.
    pub fn as_scalar(&self) -> Option<ScalarExpr> {
        match self.terms.len() {
            0 => Some(ScalarExpr::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, s: &ScalarExpr) -> Self {
        let mut out = CliffordExpr::zero();
        for (w, c) in &self.terms {
            out.add_word(w.clone(), c * s);
        }
        out
    }

    pub fn scale_coeff(&self, k: &Coeff) -> Self {
        self.scale(&ScalarExpr::constant(k.clone()))
    }

    /// Applies `f` to every coefficient (substitution, differentiation, ...).
    pub fn map_coeffs<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&ScalarExpr) -> Result<ScalarExpr>,
    {
        let mut out = CliffordExpr::zero();
        for (w, c) in &self.terms {
            out.add_word(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Replaces each generator by a Clifford expression (e.g. `c(ξ) ↦ Σ ξ_μ c(dx_μ)`)
    /// and reduces under `p`.
    pub fn expand_generators<F>(&self, p: &dyn Pairing, mut f: F) -> Result<Self>
    where
        F: FnMut(Cov) -> Option<CliffordExpr>,
    {
        let mut out = CliffordExpr::zero();
        for (w, c) in &self.terms {
            let mut prod = CliffordExpr::scalar(c.clone());
            for &g in w {
                let img = f(g).unwrap_or_else(|| CliffordExpr::gen(g));
                prod = prod.mul(&img, p)?;
            }
            out += &prod;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &CliffordExpr, p: &dyn Pairing) -> Result<Self> {
        let mut out = CliffordExpr::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let c = ca * cb;
                if c.is_zero() {
                    continue;
                }
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out += &CliffordExpr::normalize(&w, p)?.scale(&c);
            }
        }
        Ok(out)
    }

    /// Spinor trace. Odd words vanish; even words use the Wick recursion.
    pub fn trace(&self, p: &dyn Pairing) -> Result<ScalarExpr> {
        let mut total = ScalarExpr::zero();
        for (w, c) in &self.terms {
            let t = word_trace(w, p)?;
            total += &(c * &t);
        }
        Ok(total.scale(&Coeff::int(p.spinor_dim())))
    }

    /// Coefficient-wise predicate check.
    pub fn any_coeff(&self, pred: impl Fn(&ScalarExpr) -> bool) -> bool {
        self.terms.values().any(pred)
    }
}

/// Normalized trace `tr[w] / tr[id]` of a raw word.
fn word_trace(w: &[Cov], p: &dyn Pairing) -> Result<ScalarExpr> {
    if w.len() % 2 == 1 {
        return Ok(ScalarExpr::zero());
    }
    if w.is_empty() {
        return Ok(ScalarExpr::one());
    }
    let mut total = ScalarExpr::zero();
    for j in 1..w.len() {
        let g = p.pair(w[0], w[j])?;
        if g.is_zero() {
            continue;
        }
        let rest: Word = w[1..].iter().enumerate().filter(|(k, _)| *k + 1 != j).map(|(_, c)| *c).collect();
        // 1-based position j+1 contributes (-1)^{j+1} * (-g) = (-1)^j * g
        let sign = if j % 2 == 1 { -1 } else { 1 };
        total += &(&g * &word_trace(&rest, p)?).scale(&Coeff::int(sign));
    }
    Ok(total)
}

impl std::ops::AddAssign<&CliffordExpr> for CliffordExpr {
    fn add_assign(&mut self, o: &CliffordExpr) {
        for (w, c) in &o.terms {
            self.add_word(w.clone(), c.clone());
        }
    }
}

impl std::ops::Add for &CliffordExpr {
    type Output = CliffordExpr;
    fn add(self, o: &CliffordExpr) -> CliffordExpr {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl std::ops::Sub for &CliffordExpr {
    type Output = CliffordExpr;
    fn sub(self, o: &CliffordExpr) -> CliffordExpr {
        let mut out = self.clone();
        out += &-o;
        out
    }
}

impl std::ops::Neg for &CliffordExpr {
    type Output = CliffordExpr;
    fn neg(self) -> CliffordExpr {
        self.scale_coeff(&Coeff::int(-1))
    }
}

impl fmt::Display for CliffordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let word: String = w.iter().map(|g| format!("c({g})")).collect::<Vec<_>>().join("*");
            match (w.is_empty(), c.len() > 1) {
                (true, _) => write!(f, "({c})")?,
                (false, true) => write!(f, "({c})*{word}")?,
                (false, false) if c == &ScalarExpr::one() => write!(f, "{word}")?,
                (false, false) => write!(f, "{c}*{word}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_squares_to_minus_one() {
        let e = Euclidean(4);
        let d1 = CliffordExpr::gen(Cov::Dx(1));
        assert_eq!(d1.mul(&d1, &e).unwrap(), CliffordExpr::scalar(ScalarExpr::int(-1)));
    }

    #[test]
    fn anticommutation_of_distinct_basis_covectors() {
        let e = Euclidean(4);
        let w = CliffordExpr::normalize(&[Cov::Dx(2), Cov::Dx(1)], &e).unwrap();
        let expected = CliffordExpr::normalize(&[Cov::Dx(1), Cov::Dx(2)], &e).unwrap().scale_coeff(&Coeff::int(-1));
        assert_eq!(w, expected);
    }

    #[test]
    fn identity_trace_is_four() {
        assert_eq!(CliffordExpr::one().trace(&Euclidean(4)).unwrap(), ScalarExpr::int(4));
    }

    #[test]
    fn trace_of_two_generator_words() {
        let e = Euclidean(4);
        let w = CliffordExpr::normalize(&[Cov::Dx(1), Cov::Dx(2), Cov::Dx(1), Cov::Dx(2)], &e).unwrap();
        assert_eq!(w.trace(&e).unwrap(), ScalarExpr::int(-4));
        let odd = CliffordExpr::gen(Cov::Dx(3));
        assert!(odd.trace(&e).unwrap().is_zero());
    }

    #[test]
    fn undeclared_pairing_is_an_error() {
        let e = Euclidean(4);
        assert!(matches!(CliffordExpr::normalize(&[Cov::W, Cov::X], &e), Err(Error::UndeclaredPairing(_, _))));
    }

    #[test]
    fn names_round_trip() {
        for c in [Cov::Dx(3), Cov::Xi, Cov::Xip, Cov::X, Cov::Df, Cov::W, Cov::Dxn] {
            assert_eq!(Cov::from_name(&c.name()), Some(c));
        }
    }
}
