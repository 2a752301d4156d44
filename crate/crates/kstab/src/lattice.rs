//! Curve lattices: a basis with a rational intersection form and a finite
//! universe of named curve classes expressed in that basis.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::exact::{AffineForm, Polynomial2, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("gram matrix is not square of size {0}")]
    BadShape(usize),
    #[error("gram matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("duplicate curve name {0:?}")]
    DuplicateName(String),
    #[error("unknown curve {0:?}")]
    UnknownCurve(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass(pub Vec<Rational>);

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        Self(vec![Rational::zero(); rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.0[i] = Rational::one();
        c
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn add_scaled(&mut self, other: &DivisorClass, k: &Rational) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b * k;
        }
    }
}

/// A divisor whose coefficients are affine in `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricDivisor(pub Vec<AffineForm>);

impl ParametricDivisor {
    pub fn zero(rank: usize) -> Self {
        Self(vec![AffineForm::zero(); rank])
    }

    pub fn constant(d: &DivisorClass) -> Self {
        Self(d.0.iter().cloned().map(AffineForm::constant).collect())
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| a.eval(u, v)).collect())
    }

    pub fn sub_scaled(&self, class: &DivisorClass, k: &AffineForm) -> Self {
        Self(
            self.0
                .iter()
                .zip(&class.0)
                .map(|(a, c)| a - &k.scale(c))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub name: String,
    pub class: DivisorClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveLattice {
    basis: Vec<String>,
    gram: Vec<Vec<Rational>>,
    curves: Vec<Curve>,
    curve_gram: Vec<Vec<Rational>>,
    index: HashMap<String, usize>,
    pub anticanonical_degrees: Option<Vec<Rational>>,
}

fn check_gram(gram: &[Vec<Rational>], n: usize) -> Result<(), LatticeError> {
    if gram.len() != n || gram.iter().any(|row| row.len() != n) {
        return Err(LatticeError::BadShape(n));
    }
    for i in 0..n {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(LatticeError::NotSymmetric(i, j));
            }
        }
    }
    Ok(())
}

fn bilinear(gram: &[Vec<Rational>], a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() && !gram[i][j].is_zero() {
                acc += ai * &gram[i][j] * bj;
            }
        }
    }
    acc
}

impl CurveLattice {
    /// Lattice whose basis is the curve universe itself.
    pub fn new(names: Vec<String>, gram: Vec<Vec<Rational>>) -> Result<Self, LatticeError> {
        let n = names.len();
        let curves = names
            .iter()
            .enumerate()
            .map(|(i, name)| Curve { name: name.clone(), class: DivisorClass::unit(n, i) })
            .collect();
        Self::with_curves(names, gram, curves)
    }

    /// Lattice with an ambient basis and curves given as classes in it.
    pub fn with_curves(basis: Vec<String>, gram: Vec<Vec<Rational>>, curves: Vec<Curve>) -> Result<Self, LatticeError> {
        let n = basis.len();
        check_gram(&gram, n)?;
        let mut index = HashMap::new();
        for (i, c) in curves.iter().enumerate() {
            if c.class.0.len() != n {
                return Err(LatticeError::RankMismatch { expected: n, got: c.class.0.len() });
            }
            if index.insert(c.name.clone(), i).is_some() {
                return Err(LatticeError::DuplicateName(c.name.clone()));
            }
        }
        let curve_gram = curves
            .iter()
            .map(|a| curves.iter().map(|b| bilinear(&gram, &a.class.0, &b.class.0)).collect())
            .collect();
        Ok(Self { basis, gram, curves, curve_gram, index, anticanonical_degrees: None })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn curves(&self) -> &[Curve] {
        &self.curves
    }

    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    pub fn curve_name(&self, i: usize) -> &str {
        &self.curves[i].name
    }

    pub fn curve_index(&self, name: &str) -> Result<usize, LatticeError> {
        self.index.get(name).copied().ok_or_else(|| LatticeError::UnknownCurve(name.to_string()))
    }

    /// `C_i · C_j`.
    pub fn curve_pair(&self, i: usize, j: usize) -> &Rational {
        &self.curve_gram[i][j]
    }

    fn check(&self, d: &DivisorClass) -> Result<(), LatticeError> {
        if d.0.len() != self.rank() {
            return Err(LatticeError::RankMismatch { expected: self.rank(), got: d.0.len() });
        }
        Ok(())
    }

    pub fn pair(&self, a: &DivisorClass, b: &DivisorClass) -> Result<Rational, LatticeError> {
        self.check(a)?;
        self.check(b)?;
        Ok(bilinear(&self.gram, &a.0, &b.0))
    }

    /// `d · C_curve` as an affine form.
    pub fn pairing_form(&self, d: &ParametricDivisor, curve: usize) -> AffineForm {
        let cg: Vec<Rational> = (0..self.rank())
            .map(|j| {
                self.curves[curve]
                    .class
                    .0
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * &self.gram[i][j])
                    .sum()
            })
            .collect();
        let mut acc = AffineForm::zero();
        for (a, g) in d.0.iter().zip(&cg) {
            if !g.is_zero() {
                acc = &acc + &a.scale(g);
            }
        }
        acc
    }

    /// `d²` as a quadratic polynomial.
    pub fn square(&self, d: &ParametricDivisor) -> Polynomial2 {
        let polys: Vec<Polynomial2> = d.0.iter().map(AffineForm::to_poly).collect();
        let mut acc = Polynomial2::zero();
        for i in 0..polys.len() {
            if polys[i].is_zero() {
                continue;
            }
            for j in 0..polys.len() {
                if !self.gram[i][j].is_zero() && !polys[j].is_zero() {
                    acc = &acc + &(&polys[i] * &polys[j]).scale(&self.gram[i][j]);
                }
            }
        }
        acc
    }

    pub fn is_negative_definite(&self, subset: &[usize]) -> bool {
        let m: Vec<Vec<Rational>> = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.curve_gram[i][j].clone()).collect())
            .collect();
        negative_pivots(m)
    }
}

/// True iff every Gaussian pivot without row exchanges is negative, which is the
/// same as the leading principal minors alternating in sign starting negative.
pub fn negative_pivots(mut m: Vec<Vec<Rational>>) -> bool {
    let n = m.len();
    for k in 0..n {
        if !m[k][k].is_negative() {
            return false;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let t = &f * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    true
}

/// Exact inverse by Gauss–Jordan; `None` if singular.
pub fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn lz() -> CurveLattice {
        CurveLattice::new(
            vec!["L".into(), "Z".into()],
            vec![vec![int(-2), int(2)], vec![int(2), int(-2)]],
        )
        .unwrap()
    }

    #[test]
    fn pair_and_definiteness() {
        let lat = lz();
        assert_eq!(lat.pair(&DivisorClass::unit(2, 0), &DivisorClass::unit(2, 1)).unwrap(), int(2));
        assert!(!lat.is_negative_definite(&[0, 1]));
        assert!(lat.is_negative_definite(&[0]));
        assert!(lat.is_negative_definite(&[]));
        assert!(lat.pair(&DivisorClass::zero(3), &DivisorClass::zero(2)).is_err());
    }

    #[test]
    fn rejects_asymmetric_gram() {
        let r = CurveLattice::new(vec!["a".into(), "b".into()], vec![vec![int(0), int(1)], vec![int(2), int(0)]]);
        assert!(matches!(r, Err(LatticeError::NotSymmetric(1, 0))));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        assert!(invert(&[vec![int(1), int(1)], vec![int(1), int(1)]]).is_none());
    }
}
