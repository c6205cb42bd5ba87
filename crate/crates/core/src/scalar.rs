//! Exact scalar expressions.
//!
//! A [`ScalarExpr`] is a polynomial over a fixed registry of indeterminates
//! ([`Var`]) with Gaussian-rational coefficients ([`Coeff`]). The term map is
//! kept canonical at all times: monomials are sorted, zero coefficients are
//! never stored, and two expressions are equal iff their term maps are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact complex rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coeff {
    pub re: BigRational,
    pub im: BigRational,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Coeff::int(1)
    }

    pub fn int(n: i64) -> Self {
        Coeff { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Coeff { re: BigRational::new(BigInt::from(n), BigInt::from(d)), im: BigRational::zero() }
    }

    pub fn real(re: BigRational) -> Self {
        Coeff { re, im: BigRational::zero() }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Coeff { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Coeff::one(),
            1 => Coeff::i(),
            2 => Coeff::int(-1),
            _ => -Coeff::i(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Coeff::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Coeff { re: &self.re / &norm, im: -&self.im / &norm })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        Coeff { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        Coeff { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        Coeff { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { re: -self.re, im: -self.im }
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => {
                if self.im.is_one() {
                    write!(f, "i")
                } else if (-&self.im).is_one() {
                    write!(f, "-i")
                } else {
                    write!(f, "{}*i", fmt_rational(&self.im))
                }
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                let im = self.im.abs();
                if im.is_one() {
                    write!(f, "({} {} i)", fmt_rational(&self.re), sign)
                } else {
                    write!(f, "({} {} {}*i)", fmt_rational(&self.re), sign, fmt_rational(&im))
                }
            }
        }
    }
}

/// Multi-index of coordinate derivatives (counts per coordinate 1..=4).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Deriv(pub [u8; 4]);

impl Deriv {
    pub const NONE: Deriv = Deriv([0; 4]);

    pub fn order(&self) -> u32 {
        self.0.iter().map(|&c| c as u32).sum()
    }

    /// Adds one derivative in coordinate `mu` (1-based).
    pub fn bump(mut self, mu: usize) -> Deriv {
        self.0[mu - 1] += 1;
        self
    }

    fn suffix(&self) -> String {
        let mut s = String::new();
        for (k, &c) in self.0.iter().enumerate() {
            for _ in 0..c {
                s.push_str(&(k + 1).to_string());
            }
        }
        s
    }
}

/// Coefficient functions of the symbol calculus. Their jets at the base
/// point are the [`Var::Jet`] indeterminates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Field {
    /// The smooth function `f`.
    F,
    /// Component `X_j` of the vector field.
    X(u8),
    /// Inverse metric `g^{ab}`, stored with `a <= b`.
    Metric(u8, u8),
    /// Contracted Christoffel symbol `Γ^μ = g^{ab} Γ^μ_{ab}`.
    Gamma(u8),
    /// Spin-connection coefficient: `σ_μ = Σ_{a<b} om(μ,a,b) c(dx_a) c(dx_b)`.
    Spin(u8, u8, u8),
}

impl Field {
    pub fn metric(a: u8, b: u8) -> Field {
        if a <= b {
            Field::Metric(a, b)
        } else {
            Field::Metric(b, a)
        }
    }

    fn name(&self) -> String {
        match self {
            Field::F => "f".into(),
            Field::X(j) => format!("X{j}"),
            Field::Metric(a, b) => format!("g{a}{b}"),
            Field::Gamma(m) => format!("Gam{m}"),
            Field::Spin(m, a, b) => format!("om{m}_{a}{b}"),
        }
    }

    /// True for the perturbation data (`f`, `X`) as opposed to geometry.
    pub fn is_perturbation(&self) -> bool {
        matches!(self, Field::F | Field::X(_))
    }
}

/// Geometric invariants used to report densities.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Invariant {
    /// `|X|^2`
    NormX2,
    /// `div_M(X)`
    DivX,
    /// `div_M(fX)`
    DivFX,
    /// `df(X) = g(X, df)`
    XDf,
    /// `|X| |df|`
    NormXNormDf,
}

impl Invariant {
    pub const ALL: [Invariant; 5] = [Invariant::NormX2, Invariant::DivX, Invariant::DivFX, Invariant::XDf, Invariant::NormXNormDf];

    fn name(&self) -> &'static str {
        match self {
            Invariant::NormX2 => "absX2",
            Invariant::DivX => "divX",
            Invariant::DivFX => "divfX",
            Invariant::XDf => "Xdf",
            Invariant::NormXNormDf => "absXabsdf",
        }
    }
}

/// Parity under `ξ' ↦ −ξ'`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Parity {
    Even,
    Odd,
    XiFree,
}

impl Parity {
    pub fn times(self, other: Parity) -> Parity {
        use Parity::*;
        match (self, other) {
            (XiFree, p) | (p, XiFree) => p,
            (Even, Even) | (Odd, Odd) => Even,
            _ => Odd,
        }
    }
}

/// The indeterminate registry. Every scalar in the engine is a polynomial in
/// these; there are no free-form symbol names.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    Pi,
    /// Volume of the unit 2-sphere.
    Omega3,
    /// Volume of the unit 3-sphere.
    VolS3,
    /// `h'(0)` of the collar metric.
    HPrime,
    /// Scalar curvature.
    Curv,
    /// Normal cotangent coordinate `ξ_n`.
    XiN,
    /// `g(X, ξ')` on the boundary.
    XiDotX,
    /// Cotangent coordinate `ξ_μ` (1-based).
    Xi(u8),
    /// Jet of a coefficient field at the base point.
    Jet(Field, Deriv),
    Inv(Invariant),
}

impl Var {
    pub fn jet(field: Field) -> Var {
        Var::Jet(field, Deriv::NONE)
    }

    pub fn parity(&self) -> Parity {
        match self {
            Var::XiDotX | Var::Xi(_) => Parity::Odd,
            _ => Parity::XiFree,
        }
    }

    /// Homogeneity degree in the cotangent variable.
    pub fn xi_degree(&self) -> i32 {
        match self {
            Var::XiN | Var::XiDotX | Var::Xi(_) => 1,
            _ => 0,
        }
    }

    /// Checks the indices against the registry for dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let ok = |k: &u8| (1..=n as u8).contains(k);
        let valid = match self {
            Var::Xi(m) => ok(m),
            Var::Jet(field, d) => {
                d.0.iter().skip(n).all(|&c| c == 0)
                    && match field {
                        Field::F => true,
                        Field::X(j) | Field::Gamma(j) => ok(j),
                        Field::Metric(a, b) => ok(a) && ok(b) && a <= b,
                        Field::Spin(m, a, b) => ok(m) && ok(a) && ok(b) && a < b,
                    }
            }
            _ => true,
        };
        if valid {
            Ok(())
        } else {
            Err(Error::UnknownIndeterminate(self.to_string()))
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Pi => write!(f, "pi"),
            Var::Omega3 => write!(f, "Omega3"),
            Var::VolS3 => write!(f, "VolS3"),
            Var::HPrime => write!(f, "hp"),
            Var::Curv => write!(f, "s"),
            Var::XiN => write!(f, "xin"),
            Var::XiDotX => write!(f, "xiX"),
            Var::Xi(m) => write!(f, "xi{m}"),
            Var::Jet(field, d) => {
                if d.order() == 0 {
                    write!(f, "{}", field.name())
                } else {
                    write!(f, "d{}_{}", d.suffix(), field.name())
                }
            }
            Var::Inv(inv) => write!(f, "{}", inv.name()),
        }
    }
}

/// A power product of indeterminates, sorted by variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree_of(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map_or(0, |(_, e)| *e)
    }

    pub fn xi_degree(&self) -> i32 {
        self.0.iter().map(|(v, e)| v.xi_degree() * *e as i32).sum()
    }

    pub fn parity(&self) -> Parity {
        self.0.iter().fold(Parity::XiFree, |p, (v, e)| {
            let mut q = p;
            for _ in 0..*e {
                q = q.times(v.parity());
            }
            q
        })
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    out.push((a, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Removes `v^e` entirely, returning the exponent removed.
    pub fn without(&self, v: Var) -> (Monomial, u32) {
        let e = self.degree_of(v);
        (Monomial(self.0.iter().filter(|(w, _)| *w != v).cloned().collect()), e)
    }

    pub fn from_factors(mut f: Vec<(Var, u32)>) -> Monomial {
        f.retain(|(_, e)| *e > 0);
        f.sort_by_key(|a| a.0);
        Monomial(f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Canonical polynomial over [`Var`] with [`Coeff`] coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ScalarExpr {
    terms: BTreeMap<Monomial, Coeff>,
}

impl ScalarExpr {
    pub fn zero() -> Self {
        ScalarExpr { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        ScalarExpr::constant(Coeff::one())
    }

    pub fn int(n: i64) -> Self {
        ScalarExpr::constant(Coeff::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ScalarExpr::constant(Coeff::ratio(n, d))
    }

    pub fn i() -> Self {
        ScalarExpr::constant(Coeff::i())
    }

    pub fn constant(c: Coeff) -> Self {
        ScalarExpr::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        ScalarExpr::term(Coeff::one(), Monomial::var(v))
    }

    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ScalarExpr { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    /// The value if the expression has no indeterminates.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.len() {
            0 => Some(Coeff::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut v: Vec<Var> = self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn contains_var(&self, pred: impl Fn(&Var) -> bool) -> bool {
        self.terms.keys().any(|m| m.0.iter().any(|(v, _)| pred(v)))
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn scale(&self, c: &Coeff) -> ScalarExpr {
        if c.is_zero() {
            return ScalarExpr::zero();
        }
        ScalarExpr { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> ScalarExpr {
        let mut acc = ScalarExpr::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative in `v`.
    pub fn diff(&self, v: Var) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (m, c) in &self.terms {
            let e = m.degree_of(v);
            if e == 0 {
                continue;
            }
            let f = m.0.iter().map(|&(w, k)| if w == v { (w, k - 1) } else { (w, k) }).collect();
            out.add_term(Monomial::from_factors(f), c * &Coeff::int(e as i64));
        }
        out
    }

    /// Applies the derivation determined by `rule(v) = D(v)` (Leibniz rule).
    pub fn derive_with<F>(&self, mut rule: F) -> Result<ScalarExpr>
    where
        F: FnMut(&Var) -> Result<ScalarExpr>,
    {
        let mut cache: BTreeMap<Var, ScalarExpr> = BTreeMap::new();
        let mut out = ScalarExpr::zero();
        for v in self.vars() {
            let dv = match cache.get(&v) {
                Some(d) => d.clone(),
                None => {
                    let d = rule(&v)?;
                    cache.insert(v, d.clone());
                    d
                }
            };
            if dv.is_zero() {
                continue;
            }
            out += &(&self.diff(v) * &dv);
        }
        Ok(out)
    }

    /// Simultaneous substitution through a callback; `None` keeps the variable.
    pub fn substitute_with<F>(&self, mut rule: F) -> ScalarExpr
    where
        F: FnMut(&Var) -> Option<ScalarExpr>,
    {
        let mut cache: BTreeMap<Var, Option<ScalarExpr>> = BTreeMap::new();
        let mut out = ScalarExpr::zero();
        for (m, c) in &self.terms {
            let mut prod = ScalarExpr::constant(c.clone());
            let mut kept = Vec::new();
            for &(v, e) in &m.0 {
                let img = cache.entry(v).or_insert_with(|| rule(&v));
                match img {
                    Some(s) => prod = &prod * &s.pow(e),
                    None => kept.push((v, e)),
                }
                if prod.is_zero() {
                    break;
                }
            }
            if prod.is_zero() {
                continue;
            }
            let km = Monomial::from_factors(kept);
            for (pm, pc) in prod.terms {
                out.add_term(pm.mul(&km), pc);
            }
        }
        out
    }

    /// Simultaneous substitution of a binding table. Keys are checked
    /// against the registry for dimension `n`.
    pub fn substitute(&self, bindings: &BTreeMap<Var, ScalarExpr>, n: usize) -> Result<ScalarExpr> {
        for k in bindings.keys() {
            k.validate(n)?;
        }
        Ok(self.substitute_with(|v| bindings.get(v).cloned()))
    }

    /// Numeric evaluation; every variable must be assigned.
    pub fn eval<F>(&self, value: F) -> Result<Complex64>
    where
        F: Fn(&Var) -> Option<Complex64>,
    {
        let mut total = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_complex();
            for (v, e) in &m.0 {
                let x = value(v).ok_or_else(|| Error::MissingAssignment(v.to_string()))?;
                t *= x.powu(*e);
            }
            total += t;
        }
        Ok(total)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.degree_of(v)).max().unwrap_or(0)
    }

    /// Coefficients of the polynomial in `v`: `self = Σ_k out[k] v^k`.
    pub fn coefficients_in(&self, v: Var) -> Vec<ScalarExpr> {
        let mut out = vec![ScalarExpr::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Splits the expression by monomial `ξ`-degree.
    pub fn split_by_xi_degree(&self) -> BTreeMap<i32, ScalarExpr> {
        let mut out: BTreeMap<i32, ScalarExpr> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.xi_degree()).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    /// Keeps only the terms whose monomial satisfies `pred`.
    pub fn filter_terms(&self, pred: impl Fn(&Monomial) -> bool) -> ScalarExpr {
        ScalarExpr { terms: self.terms.iter().filter(|(m, _)| pred(m)).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// Parity of every term, or `None` for the zero expression or mixed parity.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity());
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }
}

impl AddAssign<&ScalarExpr> for ScalarExpr {
    fn add_assign(&mut self, o: &ScalarExpr) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for &ScalarExpr {
    type Output = ScalarExpr;
    fn add(self, o: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Add for ScalarExpr {
    type Output = ScalarExpr;
    fn add(mut self, o: ScalarExpr) -> ScalarExpr {
        self += &o;
        self
    }
}

impl Sub for &ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, o: &ScalarExpr) -> ScalarExpr {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for ScalarExpr {
    type Output = ScalarExpr;
    fn sub(self, o: ScalarExpr) -> ScalarExpr {
        &self - &o
    }
}

impl Neg for ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        ScalarExpr { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        -(self.clone())
    }
}

impl Mul for &ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, o: &ScalarExpr) -> ScalarExpr {
        let mut out = ScalarExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for ScalarExpr {
    type Output = ScalarExpr;
    fn mul(self, o: ScalarExpr) -> ScalarExpr {
        &self * &o
    }
}

impl From<Var> for ScalarExpr {
    fn from(v: Var) -> Self {
        ScalarExpr::var(v)
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        ScalarExpr::int(n)
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if (c.is_real() && c.re.is_negative()) || (c.re.is_zero() && c.im.is_negative()) {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for ScalarExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp() -> ScalarExpr {
        Var::HPrime.into()
    }

    #[test]
    fn add_identity_and_merge() {
        let s: ScalarExpr = Var::Curv.into();
        assert_eq!(&ScalarExpr::zero() + &s, s);
        let half = hp().scale(&Coeff::ratio(1, 2));
        assert_eq!(&half + &half, hp());
        let d: ScalarExpr = Var::Inv(Invariant::DivFX).into();
        let pi2 = ScalarExpr::var(Var::Pi).pow(2);
        let a = (&pi2 * &d).scale(&Coeff::int(2));
        let b = (&pi2 * &d).scale(&Coeff::int(-2));
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn multiplication_examples() {
        let pi: ScalarExpr = Var::Pi.into();
        assert_eq!((&pi * &pi).to_string(), "pi^2");
        let s: ScalarExpr = Var::Curv.into();
        assert_eq!(&(&ScalarExpr::ratio(1, 4) * &s) * &ScalarExpr::int(4), s);
        let fx = &ScalarExpr::var(Var::jet(Field::F)) * &ScalarExpr::var(Var::jet(Field::X(4)));
        assert_eq!(fx.len(), 1);
        let (m, _) = fx.terms().next().unwrap();
        assert_eq!(m.degree_of(Var::jet(Field::F)), 1);
        assert_eq!(m.degree_of(Var::jet(Field::X(4))), 1);
    }

    #[test]
    fn substitution_examples() {
        let gam = Var::jet(Field::Gamma(4));
        let mut b = BTreeMap::new();
        b.insert(gam, hp().scale(&Coeff::ratio(1, 2)));
        assert_eq!(ScalarExpr::var(gam).substitute(&b, 4).unwrap(), hp().scale(&Coeff::ratio(1, 2)));
        let s: ScalarExpr = Var::Curv.into();
        assert_eq!(s.substitute(&BTreeMap::new(), 4).unwrap(), s);
        let dg = Var::Jet(Field::metric(1, 1), Deriv::NONE.bump(2));
        let e = &ScalarExpr::var(Var::jet(Field::F)) * &ScalarExpr::var(dg);
        let mut b = BTreeMap::new();
        b.insert(dg, ScalarExpr::zero());
        assert!(e.substitute(&b, 4).unwrap().is_zero());
    }

    #[test]
    fn substitution_rejects_unregistered_key() {
        let mut b = BTreeMap::new();
        b.insert(Var::Xi(7), ScalarExpr::zero());
        assert!(matches!(ScalarExpr::one().substitute(&b, 4), Err(Error::UnknownIndeterminate(_))));
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        assert_eq!(&ScalarExpr::i() * &ScalarExpr::i(), ScalarExpr::int(-1));
        assert_eq!(Coeff::i_pow(-1), -Coeff::i());
    }

    #[test]
    fn parity_multiplies() {
        let x: ScalarExpr = Var::XiDotX.into();
        assert_eq!(x.parity(), Some(Parity::Odd));
        assert_eq!((&x * &x).parity(), Some(Parity::Even));
        assert_eq!(ScalarExpr::var(Var::HPrime).parity(), Some(Parity::XiFree));
    }

    #[test]
    fn rendering_is_deterministic() {
        let e = &(&ScalarExpr::var(Var::Pi) * &ScalarExpr::var(Var::Omega3)).scale(&Coeff::ratio(-3, 8)) + &ScalarExpr::var(Var::HPrime);
        assert_eq!(e.to_string(), "-3/8*pi*Omega3 + hp");
    }
}
