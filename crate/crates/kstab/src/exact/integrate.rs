use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ExactError, Point, Polygon, Polynomial2, Rational};

/// Exact `∫_a^b p(u) du`.
pub fn integrate_interval(p: &Polynomial2, a: &Rational, b: &Rational) -> Result<Rational, ExactError> {
    if !p.is_univariate() {
        return Err(ExactError::NotUnivariate);
    }
    Ok(p.integrate_u(a, b))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// ∫ over the standard simplex of s^i t^j = i! j! / (i+j+2)!
fn simplex_moment(i: u32, j: u32) -> Rational {
    Rational::new(factorial(i) * factorial(j), factorial(i + j + 2))
}

pub fn integrate_triangle(p: &Polynomial2, a: &Point, b: &Point, c: &Point) -> Rational {
    let du1 = &b.0 - &a.0;
    let dv1 = &b.1 - &a.1;
    let du2 = &c.0 - &a.0;
    let dv2 = &c.1 - &a.1;
    let jac = (&du1 * &dv2 - &du2 * &dv1).abs();
    if jac.is_zero() || p.is_zero() {
        return Rational::zero();
    }
    // (s, t) live in the variable slots (u, v) of the composed polynomial
    let mut pu = Polynomial2::constant(a.0.clone());
    pu.add_term(1, 0, du1);
    pu.add_term(0, 1, du2);
    let mut pv = Polynomial2::constant(a.1.clone());
    pv.add_term(1, 0, dv1);
    pv.add_term(0, 1, dv2);
    let q = p.compose(&pu, &pv);
    let mut acc = Rational::zero();
    for (&(i, j), coeff) in q.terms() {
        acc += coeff * simplex_moment(i, j);
    }
    acc * jac
}

/// Exact `∬_poly p(u, v) dv du` by a fan from vertex 0.
pub fn integrate_polygon(p: &Polynomial2, poly: &Polygon) -> Rational {
    let vs = poly.vertices();
    let mut acc = Rational::zero();
    for k in 1..vs.len().saturating_sub(1) {
        acc += integrate_triangle(p, &vs[0], &vs[k], &vs[k + 1]);
    }
    acc
}
