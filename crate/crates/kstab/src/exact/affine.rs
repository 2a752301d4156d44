use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::{Polynomial2, Rational};

/// `constant + coef_u*u + coef_v*v`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub constant: Rational,
    pub coef_u: Rational,
    pub coef_v: Rational,
}

impl AffineForm {
    pub fn new(constant: Rational, coef_u: Rational, coef_v: Rational) -> Self {
        Self { constant, coef_u, coef_v }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(c, Rational::zero(), Rational::zero())
    }

    pub fn u() -> Self {
        Self::new(Rational::zero(), Rational::one(), Rational::zero())
    }

    pub fn v() -> Self {
        Self::new(Rational::zero(), Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coef_u.is_zero() && self.coef_v.is_zero()
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        &self.constant + &self.coef_u * u + &self.coef_v * v
    }

    pub fn eval_f64(&self, u: f64, v: f64) -> f64 {
        super::to_f64(&self.constant) + super::to_f64(&self.coef_u) * u + super::to_f64(&self.coef_v) * v
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(&self.constant * c, &self.coef_u * c, &self.coef_v * c)
    }

    pub fn to_poly(&self) -> Polynomial2 {
        let mut p = Polynomial2::zero();
        p.add_term(0, 0, self.constant.clone());
        p.add_term(1, 0, self.coef_u.clone());
        p.add_term(0, 1, self.coef_v.clone());
        p
    }

    /// Inverse of [`AffineForm::to_poly`]; `None` when the polynomial is not affine.
    pub fn from_poly(p: &Polynomial2) -> Option<Self> {
        if p.total_degree() > 1 {
            return None;
        }
        Some(Self::new(p.coeff(0, 0), p.coeff(1, 0), p.coeff(0, 1)))
    }
}

impl<'a> Add<&'a AffineForm> for &'a AffineForm {
    type Output = AffineForm;
    fn add(self, r: &AffineForm) -> AffineForm {
        AffineForm::new(&self.constant + &r.constant, &self.coef_u + &r.coef_u, &self.coef_v + &r.coef_v)
    }
}

impl<'a> Sub<&'a AffineForm> for &'a AffineForm {
    type Output = AffineForm;
    fn sub(self, r: &AffineForm) -> AffineForm {
        AffineForm::new(&self.constant - &r.constant, &self.coef_u - &r.coef_u, &self.coef_v - &r.coef_v)
    }
}

impl Neg for &AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        AffineForm::new(-&self.constant, -&self.coef_u, -&self.coef_v)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_poly().fmt(f)
    }
}
