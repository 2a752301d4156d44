//! (−1)-classes on the blow-up of P¹×P¹ in eight points, and the u-interval schedule.
//!
//! A class `(a1, a2; b1..b8)` stands for `a1·ℓ1 + a2·ℓ2 − Σ bi·ei`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{int, Rational};
use crate::lattice::DivisorClass;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlownQuadricClass {
    pub a: [BigInt; 2],
    pub b: [BigInt; 8],
}

impl BlownQuadricClass {
    pub fn pair(&self, other: &Self) -> BigInt {
        let mut acc = &self.a[0] * &other.a[1] + &self.a[1] * &other.a[0];
        for (x, y) in self.b.iter().zip(&other.b) {
            acc -= x * y;
        }
        acc
    }

    pub fn anticanonical() -> Self {
        BlownQuadricClass { a: [2.into(), 2.into()], b: std::array::from_fn(|_| BigInt::one()) }
    }

    pub fn is_minus_one_class(&self) -> bool {
        self.pair(self) == -BigInt::one() && Self::anticanonical().pair(self) == BigInt::one()
    }

    /// Coefficients in the basis `(ℓ1, ℓ2, e1, …, e8)`.
    pub fn to_divisor(&self) -> DivisorClass {
        let mut v: Vec<Rational> = self.a.iter().map(|x| Rational::from_integer(x.clone())).collect();
        v.extend(self.b.iter().map(|x| Rational::from_integer(-x.clone())));
        DivisorClass(v)
    }

    fn add(&self, other: &Self) -> Self {
        BlownQuadricClass {
            a: std::array::from_fn(|i| &self.a[i] + &other.a[i]),
            b: std::array::from_fn(|i| &self.b[i] + &other.b[i]),
        }
    }
}

pub const BASIS: [&str; 10] = ["l1", "l2", "e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8"];

/// Gram matrix of `(ℓ1, ℓ2, e1, …, e8)`.
pub fn gram() -> Vec<Vec<Rational>> {
    let mut g = vec![vec![Rational::zero(); 10]; 10];
    g[0][1] = int(1);
    g[1][0] = int(1);
    for (i, row) in g.iter_mut().enumerate().skip(2) {
        row[i] = int(-1);
    }
    g
}

fn poly(n: &BigInt, c: [i64; 3]) -> BigInt {
    BigInt::from(c[0]) * n * n + BigInt::from(c[1]) * n + BigInt::from(c[2])
}

fn class(n: &BigInt, a1: [i64; 3], a2: [i64; 3], b1: [i64; 3], special: Option<(usize, [i64; 3])>, rest: [i64; 3]) -> BlownQuadricClass {
    let mut b: [BigInt; 8] = std::array::from_fn(|_| poly(n, rest));
    b[0] = poly(n, b1);
    if let Some((i, c)) = special {
        b[i] = poly(n, c);
    }
    BlownQuadricClass { a: [poly(n, a1), poly(n, a2)], b }
}

/// Kinds of the generated classes, as `(i, j)` with `j = 0` when the kind has one member.
pub fn kinds() -> Vec<(usize, usize)> {
    let mut k = vec![(1, 1), (1, 2)];
    k.extend((2..=8).map(|j| (2, j)));
    k.push((3, 0));
    k.extend((2..=8).map(|j| (4, j)));
    k
}

/// The class `B_{n,i,j}`; `j` indexes the distinguished exceptional curve (2..=8) for
/// kinds 2 and 4, the swap for kind 1, and is ignored for kind 3.
pub fn b_class(n: u64, i: usize, j: usize) -> BlownQuadricClass {
    let n = BigInt::from(n);
    let n = &n;
    match (i, j) {
        (1, 1) => class(n, [14, 7, 1], [14, 7, 0], [7, 7, 1], None, [7, 3, 0]),
        (1, 2) => class(n, [14, 7, 0], [14, 7, 1], [7, 7, 1], None, [7, 3, 0]),
        (2, j) if (2..=8).contains(&j) => class(n, [14, 13, 3], [14, 13, 3], [7, 10, 3], Some((j - 1, [7, 6, 2])), [7, 6, 1]),
        (3, _) => class(n, [14, 21, 7], [14, 21, 7], [7, 14, 6], None, [7, 10, 3]),
        (4, j) if (2..=8).contains(&j) => {
            class(n, [14, 29, 15], [14, 29, 15], [7, 18, 11], Some((j - 1, [7, 14, 6])), [7, 14, 7])
        }
        _ => panic!("no B-class of kind ({i}, {j})"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("B_{{{n},{i},{j}}} is not a (-1)-class")]
pub struct BClassError {
    pub n: u64,
    pub i: usize,
    pub j: usize,
}

/// All 16 classes for `n`, each checked to be a (−1)-class.
pub fn generate_b_classes(n: u64) -> Result<Vec<((usize, usize), BlownQuadricClass)>, BClassError> {
    kinds()
        .into_iter()
        .map(|(i, j)| {
            let c = b_class(n, i, j);
            if c.is_minus_one_class() {
                Ok(((i, j), c))
            } else {
                Err(BClassError { n, i, j })
            }
        })
        .collect()
}

/// Sum over the symmetry orbit: `B_{n,1}`, `B_{n,2}` (j = 2..8), `B_{n,3}`, `B_{n,4}` (j = 2..8).
pub fn orbit_sum(n: u64, i: usize) -> BlownQuadricClass {
    let members: Vec<usize> = match i {
        1 => vec![1, 2],
        2 | 4 => (2..=8).collect(),
        3 => vec![0],
        _ => panic!("no orbit {i}"),
    };
    let mut it = members.into_iter().map(|j| b_class(n, i, j));
    let first = it.next().expect("orbits are non-empty");
    it.fold(first, |acc, c| acc.add(&c))
}

/// `ℓ·e1` for any component `ℓ` of `B_{n,i}`.
pub fn e1_degree(n: u64, i: usize) -> BigInt {
    let j = if i == 1 { 1 } else { 2 };
    b_class(n, i, j).b[0].clone()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Half {
    Prime,
    DoublePrime,
}

fn ratio(n: u64, num: [i64; 3], den: [i64; 3]) -> Rational {
    let n = BigInt::from(n);
    Rational::new(poly(&n, num), poly(&n, den))
}

/// Endpoints of `I′_{n,i}` or `I″_{n,i}`.
pub fn interval(n: u64, i: usize, half: Half) -> (Rational, Rational) {
    // Right endpoints of I′ and I″ for each i; I′_{n,i} starts where I″_{n,i−1} ends.
    let ends = |i: usize| -> (Rational, Rational) {
        match i {
            1 => (ratio(n, [21, 13, 1], [21, 16, 3]), ratio(n, [49, 35, 3], [49, 42, 8])),
            2 => (ratio(n, [28, 22, 3], [28, 26, 6]), ratio(n, [0, 7, 2], [0, 7, 3])),
            3 => (ratio(n, [28, 50, 21], [28, 54, 26]), ratio(n, [49, 91, 39], [49, 98, 48])),
            4 => (ratio(n, [21, 41, 19], [21, 44, 23]), ratio(n, [14, 32, 17], [14, 34, 20])),
            _ => panic!("no interval {i}"),
        }
    };
    let start = match (n, i) {
        (0, 1) => Rational::zero(),
        (_, 1) => ratio(n, [14, 4, -1], [14, 6, 0]),
        _ => ends(i - 1).1,
    };
    let (mid, end) = ends(i);
    match half {
        Half::Prime => (start, mid),
        Half::DoublePrime => (mid, end),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn table_rows_at_zero() {
        let b = b_class(0, 1, 1);
        assert_eq!(b.a, [1.into(), 0.into()]);
        assert_eq!(b.b[0], 1.into());
        assert!(b.b[1..].iter().all(|x| x.is_zero()));
        let b3 = b_class(0, 3, 0);
        let b: Vec<i64> = b3.b.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(b3.a, [7.into(), 7.into()]);
        assert_eq!(b, vec![6, 3, 3, 3, 3, 3, 3, 3]);
    }

    #[test]
    fn minus_one_classes() {
        for n in 0..=50 {
            generate_b_classes(n).unwrap();
        }
    }

    #[test]
    fn orbit_components_are_disjoint() {
        for n in [0, 1, 7] {
            for i in 1..=4 {
                let s = orbit_sum(n, i);
                let size = match i {
                    1 => 2,
                    3 => 1,
                    _ => 7,
                };
                assert_eq!(s.pair(&s), BigInt::from(-size));
            }
        }
    }

    #[test]
    fn schedule() {
        assert_eq!(interval(0, 1, Half::Prime), (rat(0, 1), rat(1, 3)));
        assert_eq!(interval(0, 1, Half::DoublePrime), (rat(1, 3), rat(3, 8)));
        assert_eq!(interval(0, 2, Half::Prime).0, rat(3, 8));
        for n in 0..40 {
            let mut prev = interval(n, 1, Half::Prime).0;
            for i in 1..=4 {
                for h in [Half::Prime, Half::DoublePrime] {
                    let (a, b) = interval(n, i, h);
                    assert_eq!(a, prev);
                    assert!(b > a);
                    prev = b;
                }
            }
            assert_eq!(prev, interval(n + 1, 1, Half::Prime).0);
        }
    }
}
