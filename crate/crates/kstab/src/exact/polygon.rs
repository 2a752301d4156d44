use num_traits::{Signed, Zero};

use super::{AffineForm, ExactError, Rational};

pub type Point = (Rational, Rational);

/// Convex polygon in the `(u, v)` plane, counter-clockwise. May be empty or degenerate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polygon {
    vertices: Vec<Point>,
}

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

fn dedup_cyclic(mut pts: Vec<Point>) -> Vec<Point> {
    pts.dedup();
    while pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    pts
}

impl Polygon {
    /// Validates convexity; clockwise input is reoriented.
    pub fn new(vertices: Vec<Point>) -> Result<Self, ExactError> {
        let mut pts = dedup_cyclic(vertices);
        let n = pts.len();
        if n >= 3 {
            let mut twice_area = Rational::zero();
            for i in 0..n {
                let (a, b) = (&pts[i], &pts[(i + 1) % n]);
                twice_area += &a.0 * &b.1 - &b.0 * &a.1;
            }
            if twice_area.is_negative() {
                pts.reverse();
            }
            for i in 0..n {
                let (a, b) = (&pts[i], &pts[(i + 1) % n]);
                if pts.iter().any(|p| cross(a, b, p).is_negative()) {
                    return Err(ExactError::NonConvex);
                }
            }
        }
        Ok(Self::from_ccw(pts))
    }

    /// Trusted constructor for vertex lists already known to be convex and CCW.
    fn from_ccw(pts: Vec<Point>) -> Self {
        let mut pts = dedup_cyclic(pts);
        // drop interior points of straight runs, unless everything is collinear
        if pts.len() >= 3 {
            let n = pts.len();
            let keep: Vec<bool> = (0..n)
                .map(|i| !cross(&pts[(i + n - 1) % n], &pts[i], &pts[(i + 1) % n]).is_zero())
                .collect();
            if keep.iter().filter(|k| **k).count() >= 3 {
                pts = pts.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
            }
        }
        Self { vertices: pts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn rectangle(u0: Rational, u1: Rational, v0: Rational, v1: Rational) -> Self {
        Self::new(vec![
            (u0.clone(), v0.clone()),
            (u1.clone(), v0),
            (u1, v1.clone()),
            (u0, v1),
        ])
        .expect("rectangles are convex")
    }

    /// `{u0 <= u <= u1, 0 <= v <= top(u)}`, with `top` affine in `u`.
    pub fn under_graph(u0: &Rational, u1: &Rational, top: &AffineForm) -> Self {
        let z = Rational::zero();
        let t0 = top.eval(u0, &z);
        let t1 = top.eval(u1, &z);
        let hi = if t0 > t1 { t0 } else { t1 };
        let hi = if hi.is_negative() { z.clone() } else { hi };
        let rect = Self::rectangle(u0.clone(), u1.clone(), z, hi);
        rect.clip(&(top - &AffineForm::v()))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> Rational {
        let n = self.vertices.len();
        if n < 3 {
            return Rational::zero();
        }
        let mut s = Rational::zero();
        for i in 0..n {
            let (a, b) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
            s += &a.0 * &b.1 - &b.0 * &a.1;
        }
        s / Rational::from_integer(2.into())
    }

    pub fn is_degenerate(&self) -> bool {
        self.area().is_zero()
    }

    /// Vertex average; an interior point when the polygon is non-degenerate.
    pub fn centroid(&self) -> Option<Point> {
        if self.vertices.is_empty() {
            return None;
        }
        let n = Rational::from_integer((self.vertices.len() as i64).into());
        let su: Rational = self.vertices.iter().map(|p| &p.0).sum();
        let sv: Rational = self.vertices.iter().map(|p| &p.1).sum();
        Some((su / &n, sv / n))
    }

    /// Inward half-planes of the edges (`form >= 0` inside).
    pub fn edge_halfplanes(&self) -> Vec<AffineForm> {
        let n = self.vertices.len();
        if n < 3 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let (p, q) = (&self.vertices[i], &self.vertices[(i + 1) % n]);
                let du = &q.0 - &p.0;
                let dv = &q.1 - &p.1;
                // du*(v - pv) - dv*(u - pu)
                AffineForm::new(&dv * &p.0 - &du * &p.1, -dv, du)
            })
            .collect()
    }

    pub fn contains(&self, u: &Rational, v: &Rational) -> bool {
        if self.is_degenerate() {
            return false;
        }
        self.edge_halfplanes().iter().all(|h| !h.eval(u, v).is_negative())
    }

    /// Intersection with the closed half-plane `h >= 0`.
    pub fn clip(&self, h: &AffineForm) -> Polygon {
        let n = self.vertices.len();
        if n == 0 {
            return Polygon::empty();
        }
        let vals: Vec<Rational> = self.vertices.iter().map(|p| h.eval(&p.0, &p.1)).collect();
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (p, q) = (&self.vertices[i], &self.vertices[j]);
            let (fp, fq) = (&vals[i], &vals[j]);
            if !fp.is_negative() {
                out.push(p.clone());
            }
            if n > 1 && ((fp.is_positive() && fq.is_negative()) || (fp.is_negative() && fq.is_positive())) {
                let t = fp / (fp - fq);
                out.push((&p.0 + (&q.0 - &p.0) * &t, &p.1 + (&q.1 - &p.1) * &t));
            }
        }
        Polygon::from_ccw(out)
    }

    pub fn clip_all<'a>(&self, hs: impl IntoIterator<Item = &'a AffineForm>) -> Polygon {
        let mut p = self.clone();
        for h in hs {
            if p.is_empty() {
                break;
            }
            p = p.clip(h);
        }
        p
    }

    pub fn intersect(&self, other: &Polygon) -> Polygon {
        if other.is_degenerate() {
            return Polygon::empty();
        }
        self.clip_all(&other.edge_halfplanes())
    }

    /// Convex pieces of `self \ other` with positive area.
    pub fn subtract(&self, other: &Polygon) -> Vec<Polygon> {
        if other.is_degenerate() {
            return if self.is_degenerate() { vec![] } else { vec![self.clone()] };
        }
        let mut rest = self.clone();
        let mut pieces = Vec::new();
        for h in other.edge_halfplanes() {
            let outside = rest.clip(&-&h);
            if !outside.is_degenerate() {
                pieces.push(outside);
            }
            rest = rest.clip(&h);
            if rest.is_degenerate() {
                break;
            }
        }
        pieces
    }

    /// Range of `u` over the vertices.
    pub fn u_range(&self) -> Option<(Rational, Rational)> {
        let us = self.vertices.iter().map(|p| &p.0);
        let lo = us.clone().min()?.clone();
        let hi = us.max()?.clone();
        Some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn unit_square() -> Polygon {
        Polygon::rectangle(int(0), int(1), int(0), int(1))
    }

    #[test]
    fn clip_noop_and_diagonal() {
        let sq = unit_square();
        assert_eq!(sq.clip(&AffineForm::u()), sq);
        let tri = sq.clip(&AffineForm::new(int(1), int(-1), int(-1)));
        assert_eq!(tri.vertices(), &[(int(0), int(0)), (int(1), int(0)), (int(0), int(1))]);
    }

    #[test]
    fn rejects_non_convex_and_star() {
        let dart = vec![(int(0), int(0)), (int(2), int(0)), (int(1), int(1)), (int(2), int(2)), (int(0), int(2))];
        assert!(matches!(Polygon::new(dart), Err(ExactError::NonConvex)));
        let star: Vec<Point> = [(0, 2), (1, -2), (-2, 1), (2, 1), (-1, -2)]
            .iter()
            .map(|&(a, b)| (int(a), int(b)))
            .collect();
        assert!(Polygon::new(star).is_err());
    }

    #[test]
    fn clockwise_is_reoriented() {
        let cw = vec![(int(0), int(0)), (int(0), int(1)), (int(1), int(0))];
        assert_eq!(Polygon::new(cw).unwrap().area(), rat(1, 2));
    }

    #[test]
    fn subtract_covers_difference() {
        let sq = Polygon::rectangle(int(0), int(2), int(0), int(2));
        let hole = Polygon::rectangle(int(0), int(1), int(0), int(1));
        let pieces = sq.subtract(&hole);
        let area: Rational = pieces.iter().map(|p| p.area()).sum();
        assert_eq!(area, int(3));
        assert!(hole.subtract(&sq).is_empty());
    }

    #[test]
    fn under_graph_domain() {
        // {0<=u<=1, 0<=v<=4-2u} cut by v <= 2-2u: the first chamber of the nodal 2.7 flag
        let dom = Polygon::under_graph(&int(0), &int(1), &AffineForm::new(int(4), int(-2), int(0)));
        let ch = dom.clip(&AffineForm::new(int(2), int(-2), int(-1)));
        assert_eq!(ch.vertices(), &[(int(0), int(0)), (int(1), int(0)), (int(0), int(2))]);
        assert_eq!(dom.area(), int(3));
    }
}
