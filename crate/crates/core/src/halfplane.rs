//! Rational functions of `ξ_n` with poles at `±i`.
//!
//! On `|ξ'| = 1` every denominator is a power of `1 + ξ_n² = (ξ_n − i)(ξ_n + i)`,
//! so a fraction is a Clifford-valued numerator polynomial over
//! `(ξ_n − i)^a (ξ_n + i)^b`. Partial fractions come from truncated Laurent
//! series at each pole (shift `ξ_n = ±i + u`, divide by the other factor).

use num_complex::Complex64;

use crate::clifford::{CliffordExpr, Pairing};
use crate::error::{Error, Result};
use crate::scalar::{Coeff, ScalarExpr, Var};
use crate::symbols::SymExpr;

/// Clifford polynomial in `ξ_n`: index = power.
pub type XiNPoly = Vec<CliffordExpr>;

fn xin() -> ScalarExpr {
    ScalarExpr::var(Var::XiN)
}

/// Splits the `ξ_n` dependence out of the coefficients.
pub fn to_poly(c: &CliffordExpr) -> XiNPoly {
    let mut out: XiNPoly = Vec::new();
    for (w, s) in c.terms() {
        for (k, coeff) in s.coefficients_in(Var::XiN).into_iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            if out.len() <= k {
                out.resize(k + 1, CliffordExpr::zero());
            }
            out[k] += &CliffordExpr::from_reduced(w.clone(), coeff);
        }
    }
    trim(out)
}

pub fn from_poly(p: &[CliffordExpr]) -> CliffordExpr {
    let mut out = CliffordExpr::zero();
    for (k, c) in p.iter().enumerate() {
        out += &c.scale(&xin().pow(k as u32));
    }
    out
}

fn trim(mut p: XiNPoly) -> XiNPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn binom(n: u32, k: u32) -> i64 {
    (0..k as i64).fold(1i64, |acc, j| acc * (n as i64 - j) / (j + 1))
}

/// Coefficients of `(x − r)^m` with `r ∈ {i, −i}`.
fn linear_power(r: &Coeff, m: u32) -> Vec<Coeff> {
    let mut out = vec![Coeff::one()];
    for _ in 0..m {
        let mut next = vec![Coeff::zero(); out.len() + 1];
        for (k, c) in out.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * r);
        }
        out = next;
    }
    out
}

fn mul_const_poly(p: &[CliffordExpr], q: &[Coeff]) -> XiNPoly {
    if p.is_empty() {
        return Vec::new();
    }
    let mut out = vec![CliffordExpr::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] += &a.scale_coeff(b);
            }
        }
    }
    trim(out)
}

fn add_poly(p: &mut XiNPoly, q: &[CliffordExpr]) {
    if p.len() < q.len() {
        p.resize(q.len(), CliffordExpr::zero());
    }
    for (k, c) in q.iter().enumerate() {
        p[k] += c;
    }
    let t = trim(std::mem::take(p));
    *p = t;
}

/// `num / ((ξ_n − i)^a (ξ_n + i)^b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct XiNFraction {
    pub num: CliffordExpr,
    pub a: u32,
    pub b: u32,
}

impl XiNFraction {
    pub fn new(num: CliffordExpr, a: u32, b: u32) -> Self {
        XiNFraction { num, a, b }
    }

    pub fn scalar(num: ScalarExpr, a: u32, b: u32) -> Self {
        XiNFraction::new(CliffordExpr::scalar(num), a, b)
    }

    /// Numerator over an arbitrary constant-coefficient denominator polynomial
    /// (index = power). Every root must be `±i`.
    pub fn over(num: CliffordExpr, den: &[Coeff]) -> Result<Self> {
        let mut d: Vec<Coeff> = den.to_vec();
        while d.last().is_some_and(|c| c.is_zero()) {
            d.pop();
        }
        if d.is_empty() {
            return Err(Error::ZeroDenominator);
        }
        let (mut a, mut b) = (0, 0);
        for (root, count) in [(Coeff::i(), &mut a), (-Coeff::i(), &mut b)] {
            loop {
                if d.len() < 2 {
                    break;
                }
                // synthetic division by (x − root)
                let mut q = vec![Coeff::zero(); d.len() - 1];
                let mut carry = Coeff::zero();
                for k in (0..d.len()).rev() {
                    let v = &d[k] + &(&carry * &root);
                    if k == 0 {
                        carry = v;
                    } else {
                        q[k - 1] = v.clone();
                        carry = v;
                    }
                }
                if !carry.is_zero() {
                    break;
                }
                d = q;
                *count += 1;
            }
        }
        if d.len() != 1 {
            return Err(Error::PoleOffAxis(format!("denominator factor of degree {} left after removing ±i", d.len() - 1)));
        }
        let lead = d[0].inv().ok_or(Error::ZeroDenominator)?;
        Ok(XiNFraction::new(num.scale_coeff(&lead), a, b))
    }

    /// Restriction of a collar symbol to `|ξ'| = 1`, where `|ξ|² = 1 + ξ_n²`.
    pub fn from_symbol(sym: &SymExpr) -> Self {
        let kmax = sym.parts().map(|(k, _)| k).max().unwrap_or(0).max(0);
        let one_plus = &ScalarExpr::one() + &xin().pow(2);
        let mut num = CliffordExpr::zero();
        for (k, c) in sym.parts() {
            num += &c.scale(&one_plus.pow((kmax - k) as u32));
        }
        XiNFraction::new(num, kmax as u32, kmax as u32)
    }

    pub fn mul(&self, o: &XiNFraction, p: &dyn Pairing) -> Result<Self> {
        Ok(XiNFraction::new(self.num.mul(&o.num, p)?, self.a + o.a, self.b + o.b))
    }

    pub fn map_num<F>(&self, f: F) -> Result<Self>
    where
        F: FnOnce(&CliffordExpr) -> Result<CliffordExpr>,
    {
        Ok(XiNFraction::new(f(&self.num)?, self.a, self.b))
    }

    /// Numeric value for a scalar fraction.
    pub fn eval<F>(&self, x: Complex64, value: F) -> Result<Complex64>
    where
        F: Fn(&Var) -> Option<Complex64>,
    {
        let s = self.num.as_scalar().ok_or(Error::Unsupported("numeric evaluation of a Clifford-valued fraction".into()))?;
        let n = s.eval(|v| if *v == Var::XiN { Some(x) } else { value(v) })?;
        let i = Complex64::i();
        Ok(n / ((x - i).powu(self.a) * (x + i).powu(self.b)))
    }
}

/// Partial-fraction form: polynomial part plus principal parts at `+i` and
/// `−i`. `plus[t]` multiplies `(ξ_n − i)^{-(t+1)}`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct XiNRational {
    pub poly: XiNPoly,
    pub plus: Vec<CliffordExpr>,
    pub minus: Vec<CliffordExpr>,
}

impl XiNRational {
    pub fn is_zero(&self) -> bool {
        self.poly.is_empty() && self.plus.iter().all(|c| c.is_zero()) && self.minus.iter().all(|c| c.is_zero())
    }

    pub fn residue_plus(&self) -> CliffordExpr {
        self.plus.first().cloned().unwrap_or_default()
    }

    pub fn residue_minus(&self) -> CliffordExpr {
        self.minus.first().cloned().unwrap_or_default()
    }

    /// Recombines over `(ξ_n − i)^A (ξ_n + i)^B`.
    pub fn to_fraction(&self) -> XiNFraction {
        let big_a = self.plus.len() as u32;
        let big_b = self.minus.len() as u32;
        let i = Coeff::i();
        let mi = -Coeff::i();
        let mut num = mul_const_poly(&self.poly, &mul_coeffs(&linear_power(&i, big_a), &linear_power(&mi, big_b)));
        for (t, c) in self.plus.iter().enumerate() {
            let f = mul_coeffs(&linear_power(&i, big_a - t as u32 - 1), &linear_power(&mi, big_b));
            add_poly(&mut num, &mul_const_poly(std::slice::from_ref(c), &f));
        }
        for (t, c) in self.minus.iter().enumerate() {
            let f = mul_coeffs(&linear_power(&i, big_a), &linear_power(&mi, big_b - t as u32 - 1));
            add_poly(&mut num, &mul_const_poly(std::slice::from_ref(c), &f));
        }
        XiNFraction::new(from_poly(&num), big_a, big_b)
    }

    pub fn plus_part(&self) -> XiNRational {
        XiNRational { poly: Vec::new(), plus: self.plus.clone(), minus: Vec::new() }
    }

    pub fn minus_part(&self) -> XiNRational {
        XiNRational { poly: Vec::new(), plus: Vec::new(), minus: self.minus.clone() }
    }

    pub fn add(&self, o: &XiNRational) -> XiNRational {
        let mut poly = self.poly.clone();
        add_poly(&mut poly, &o.poly);
        let merge = |x: &[CliffordExpr], y: &[CliffordExpr]| {
            let mut out: Vec<CliffordExpr> = x.to_vec();
            if out.len() < y.len() {
                out.resize(y.len(), CliffordExpr::zero());
            }
            for (k, c) in y.iter().enumerate() {
                out[k] += c;
            }
            while out.last().is_some_and(|c| c.is_zero()) {
                out.pop();
            }
            out
        };
        XiNRational { poly, plus: merge(&self.plus, &o.plus), minus: merge(&self.minus, &o.minus) }
    }

    /// `a · r` for a `ξ_n`-free Clifford coefficient `a` (left multiplication).
    pub fn left_mul(&self, a: &CliffordExpr, p: &dyn Pairing) -> Result<XiNRational> {
        let m = |v: &[CliffordExpr]| -> Result<Vec<CliffordExpr>> { v.iter().map(|c| a.mul(c, p)).collect() };
        Ok(XiNRational { poly: trim(m(&self.poly)?), plus: m(&self.plus)?, minus: m(&self.minus)? })
    }
}

fn mul_coeffs(p: &[Coeff], q: &[Coeff]) -> Vec<Coeff> {
    let mut out = vec![Coeff::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] = &out[i + j] + &(a * b);
        }
    }
    out
}

/// Laurent principal part at `pole` of `num / ((x − pole)^a (x − other)^b)`.
fn principal_part(num: &[CliffordExpr], pole: &Coeff, other: &Coeff, a: u32, b: u32) -> Vec<CliffordExpr> {
    if a == 0 {
        return Vec::new();
    }
    let a = a as usize;
    // num(pole + u), truncated to u^{a-1}
    let mut shifted = vec![CliffordExpr::zero(); a];
    for (j, c) in num.iter().enumerate() {
        for (m, slot) in shifted.iter_mut().enumerate().take(j.min(a - 1) + 1) {
            let k = &Coeff::int(binom(j as u32, m as u32)) * &pole.pow((j - m) as u32);
            *slot += &c.scale_coeff(&k);
        }
    }
    // (u + pole − other)^{-b}
    let gap = pole - other;
    let gap_inv = gap.inv().expect("distinct poles");
    let series: Vec<Coeff> = (0..a)
        .map(|m| {
            if b == 0 {
                return if m == 0 { Coeff::one() } else { Coeff::zero() };
            }
            let sign = if m % 2 == 0 { Coeff::one() } else { Coeff::int(-1) };
            let c = &sign * &Coeff::int(binom(b + m as u32 - 1, m as u32));
            &c * &gap_inv.pow(b + m as u32)
        })
        .collect();
    let mut out = vec![CliffordExpr::zero(); a];
    for (k, slot) in out.iter_mut().enumerate() {
        // coefficient of u^k in the product lands on u^{k−a}
        let mut acc = CliffordExpr::zero();
        for m in 0..=k {
            acc += &shifted[k - m].scale_coeff(&series[m]);
        }
        *slot = acc;
    }
    // out[k] multiplies u^{k−a}; plus[t] multiplies u^{−(t+1)}, t = a − 1 − k
    out.reverse();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Quotient of `num` by the monic `(x − i)^a (x + i)^b`.
fn polynomial_part(num: &[CliffordExpr], a: u32, b: u32) -> XiNPoly {
    let d = mul_coeffs(&linear_power(&Coeff::i(), a), &linear_power(&-Coeff::i(), b));
    let dd = d.len() - 1;
    if num.len() <= dd {
        return Vec::new();
    }
    let mut rem: Vec<CliffordExpr> = num.to_vec();
    let mut q = vec![CliffordExpr::zero(); num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in d.iter().enumerate() {
            rem[k + j] = &rem[k + j] - &c.scale_coeff(dj);
        }
        q[k] = c;
    }
    trim(q)
}

pub fn partial_fractions(f: &XiNFraction) -> Result<XiNRational> {
    let num = to_poly(&f.num);
    let i = Coeff::i();
    let mi = -Coeff::i();
    Ok(XiNRational {
        poly: polynomial_part(&num, f.a, f.b),
        plus: principal_part(&num, &i, &mi, f.a, f.b),
        minus: principal_part(&num, &mi, &i, f.b, f.a),
    })
}

/// Keeps the principal parts at the upper-half-plane pole.
pub fn pi_plus(r: &XiNRational) -> XiNRational {
    r.plus_part()
}

fn require_proper(r: &XiNRational) -> Result<()> {
    if r.poly.is_empty() {
        Ok(())
    } else {
        Err(Error::NonIntegrable("nonzero polynomial part".into()))
    }
}

fn times_pi_i(c: &CliffordExpr, k: i64) -> CliffordExpr {
    c.scale(&ScalarExpr::var(Var::Pi).scale(&(&Coeff::int(k) * &Coeff::i())))
}

/// `(1/2π) ∫_{Γ⁺} r dξ_n = i · Res_{+i} r`.
pub fn pi_prime(r: &XiNRational) -> Result<CliffordExpr> {
    require_proper(r)?;
    Ok(r.residue_plus().scale_coeff(&Coeff::i()))
}

/// `∫_{Γ⁺} r dξ_n = 2πi · Res_{+i} r`.
pub fn contour_gamma_plus(r: &XiNRational) -> Result<CliffordExpr> {
    require_proper(r)?;
    Ok(times_pi_i(&r.residue_plus(), 2))
}

/// `∫_ℝ r dξ_n`, closing in the upper half-plane. Needs decay `O(ξ_n^{-2})`.
pub fn real_line_integral(r: &XiNRational) -> Result<CliffordExpr> {
    require_proper(r)?;
    if !(&r.residue_plus() + &r.residue_minus()).is_zero() {
        return Err(Error::NonIntegrable("decays only like 1/ξ_n".into()));
    }
    contour_gamma_plus(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeoContext;
    use crate::parse::{parse_clifford, parse_scalar};

    fn sf(src: &str, a: u32, b: u32) -> XiNFraction {
        XiNFraction::scalar(parse_scalar(src).unwrap(), a, b)
    }

    fn pi_i(im_num: i64, den: i64) -> CliffordExpr {
        CliffordExpr::scalar(ScalarExpr::var(Var::Pi).scale(&(&Coeff::ratio(im_num, den) * &Coeff::i())))
    }

    #[test]
    fn one_over_one_plus_square() {
        let r = partial_fractions(&sf("1", 1, 1)).unwrap();
        assert_eq!(r.residue_plus(), CliffordExpr::scalar(ScalarExpr::constant(&Coeff::i() * &Coeff::ratio(-1, 2))));
        assert_eq!(pi_prime(&r).unwrap(), CliffordExpr::scalar(ScalarExpr::ratio(1, 2)));
        assert_eq!(real_line_integral(&r).unwrap(), CliffordExpr::scalar(ScalarExpr::var(Var::Pi)));
    }

    #[test]
    fn plus_projection_of_inverse_dirac_symbol() {
        let ctx = GeoContext::boundary(4).unwrap();
        let num = parse_clifford("i c(xi)", &ctx).unwrap();
        let r = pi_plus(&partial_fractions(&XiNFraction::new(num, 1, 1)).unwrap());
        let expected = parse_clifford("1/2 c(xip) + 1/2 i c(dxn)", &ctx).unwrap();
        assert_eq!(r.plus, vec![expected]);
        assert!(r.minus.is_empty());
    }

    #[test]
    fn worked_contour_values() {
        let r = partial_fractions(&sf("1", 2, 3)).unwrap();
        assert_eq!(contour_gamma_plus(&r).unwrap(), pi_i(-3, 8));
        let r = partial_fractions(&sf("1 - 3 xin^2 + 3 i xin - i xin^3", 4, 3)).unwrap();
        assert_eq!(contour_gamma_plus(&r).unwrap(), pi_i(1, 4));
        let r = partial_fractions(&sf("xin^3 + xin", 4, 2)).unwrap();
        assert_eq!(contour_gamma_plus(&r).unwrap(), pi_i(1, 4));
        let r = partial_fractions(&sf("-2 xin^3 - 2 xin", 4, 2)).unwrap();
        assert_eq!(real_line_integral(&r).unwrap(), pi_i(-1, 2));
    }

    #[test]
    fn simple_pole_is_not_integrable_on_the_line() {
        let r = partial_fractions(&sf("1", 1, 0)).unwrap();
        assert!(matches!(real_line_integral(&r), Err(Error::NonIntegrable(_))));
        let r = partial_fractions(&sf("xin^3", 1, 1)).unwrap();
        assert_eq!(r.poly.len(), 2);
        assert!(real_line_integral(&r).is_err());
    }

    #[test]
    fn recombination_reproduces_input() {
        let f = sf("3 xin^4 - 2 i xin + 5", 2, 3);
        let back = partial_fractions(&f).unwrap().to_fraction();
        assert_eq!((back.a, back.b), (2, 3));
        assert_eq!(back.num, f.num);
    }

    #[test]
    fn denominators_off_the_axis_are_rejected() {
        let num = CliffordExpr::one();
        assert!(matches!(XiNFraction::over(num.clone(), &[Coeff::int(-1), Coeff::zero(), Coeff::one()]), Err(Error::PoleOffAxis(_))));
        assert!(matches!(XiNFraction::over(num.clone(), &[Coeff::zero()]), Err(Error::ZeroDenominator)));
        let f = XiNFraction::over(num, &[Coeff::int(2), Coeff::zero(), Coeff::int(2)]).unwrap();
        assert_eq!((f.a, f.b), (1, 1));
    }

    fn poly(coeffs: &[i64]) -> ScalarExpr {
        coeffs.iter().enumerate().fold(ScalarExpr::zero(), |acc, (k, &c)| &acc + &(&ScalarExpr::int(c) * &xin().pow(k as u32)))
    }

    proptest::proptest! {
        #[test]
        fn partial_fractions_reconstruct_and_project(
            a in 0u32..4,
            b in 0u32..4,
            coeffs in proptest::collection::vec(-5i64..6, 1..7),
            x in -3.0f64..3.0,
        ) {
            proptest::prop_assume!(a + b > 0);
            let f = XiNFraction::new(CliffordExpr::scalar(poly(&coeffs)), a, b);
            let r = partial_fractions(&f).unwrap();
            let at = |g: &XiNFraction| g.eval(Complex64::new(x, 0.0), |_| None).unwrap();
            let (lhs, rhs) = (at(&f), at(&r.to_fraction()));
            proptest::prop_assert!((lhs - rhs).norm() < 1e-9 * lhs.norm().max(1.0), "{} vs {}", lhs, rhs);

            let poly_part = XiNRational { poly: r.poly.clone(), ..Default::default() };
            proptest::prop_assert_eq!(&r.plus_part().add(&r.minus_part()).add(&poly_part), &r);
            let p = pi_plus(&r);
            proptest::prop_assert_eq!(&pi_plus(&p), &p);
            proptest::prop_assert!(p.minus.iter().all(|c| c.is_zero()));
        }
    }
}
