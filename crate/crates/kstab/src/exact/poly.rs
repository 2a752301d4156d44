use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, Rational};
use super::AffineForm;

/// Degree beyond which a polynomial is suspicious for this problem domain.
pub const DEGREE_WARNING: u32 = 6;

/// Bivariate polynomial in `(u, v)` with exact coefficients.
/// Keys are `(deg_u, deg_v)`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial2 {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Polynomial2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn u() -> Self {
        Self::monomial(1, 0, Rational::one())
    }

    pub fn v() -> Self {
        Self::monomial(0, 1, Rational::one())
    }

    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_univariate(&self) -> bool {
        self.terms.keys().all(|&(_, j)| j == 0)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    pub fn degree_u(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn degree_v(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0 + k.1).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * num_traits::pow(u.clone(), i as usize) * num_traits::pow(v.clone(), j as usize);
        }
        acc
    }

    pub fn eval_f64(&self, u: f64, v: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| super::to_f64(c) * u.powi(i as i32) * v.powi(j as i32))
            .sum()
    }

    /// Substitutes `u := pu`, `v := pv`.
    pub fn compose(&self, pu: &Polynomial2, pv: &Polynomial2) -> Polynomial2 {
        let mut upow = vec![Polynomial2::one()];
        let mut vpow = vec![Polynomial2::one()];
        for _ in 0..self.degree_u() {
            let next = upow.last().unwrap() * pu;
            upow.push(next);
        }
        for _ in 0..self.degree_v() {
            let next = vpow.last().unwrap() * pv;
            vpow.push(next);
        }
        let mut out = Polynomial2::zero();
        for (&(i, j), c) in &self.terms {
            let t = &upow[i as usize] * &vpow[j as usize];
            out = &out + &t.scale(c);
        }
        out
    }

    /// Restricts to the line `v = line(u)` (the line must not involve `v`).
    pub fn restrict_v(&self, line: &AffineForm) -> Polynomial2 {
        self.compose(&Polynomial2::u(), &line.to_poly())
    }

    /// Antiderivative in `u`, for univariate polynomials.
    fn antiderivative_u(&self) -> Polynomial2 {
        let mut out = Polynomial2::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(i + 1, j, c / Rational::from_integer((i as i64 + 1).into()));
        }
        out
    }

    pub(crate) fn integrate_u(&self, a: &Rational, b: &Rational) -> Rational {
        let f = self.antiderivative_u();
        let z = Rational::zero();
        f.eval(b, &z) - f.eval(a, &z)
    }
}

impl From<Rational> for Polynomial2 {
    fn from(c: Rational) -> Self {
        Polynomial2::constant(c)
    }
}

impl<'a> Add<&'a Polynomial2> for &'a Polynomial2 {
    type Output = Polynomial2;
    fn add(self, rhs: &Polynomial2) -> Polynomial2 {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Polynomial2> for &'a Polynomial2 {
    type Output = Polynomial2;
    fn sub(self, rhs: &Polynomial2) -> Polynomial2 {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Polynomial2> for &'a Polynomial2 {
    type Output = Polynomial2;
    fn mul(self, rhs: &Polynomial2) -> Polynomial2 {
        let mut out = Polynomial2::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term(i + k, j + l, a * b);
            }
        }
        out
    }
}

impl Neg for &Polynomial2 {
    type Output = Polynomial2;
    fn neg(self) -> Polynomial2 {
        self.scale(&-Rational::one())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Polynomial2> for Polynomial2 {
            type Output = Polynomial2;
            fn $m(self, rhs: Polynomial2) -> Polynomial2 { (&self).$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Polynomial2 {
    /// Renders in the syntax accepted by [`crate::expr::parse_polynomial`],
    /// highest total degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| (b.0 + b.1).cmp(&(a.0 + a.1)).then(b.cmp(a)));
        for (idx, key) in keys.iter().enumerate() {
            let c = &self.terms[key];
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let mut parts = Vec::new();
            if !mag.is_one() || *key == (0, 0) {
                parts.push(format_rational(&mag));
            }
            for (var, deg) in [("u", key.0), ("v", key.1)] {
                match deg {
                    0 => {}
                    1 => parts.push(var.to_string()),
                    d => parts.push(format!("{var}^{d}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
