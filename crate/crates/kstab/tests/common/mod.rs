#![allow(dead_code)]

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use kstab::exact::{to_f64, Polygon, Polynomial2};
use kstab::invariants::{PieceResult, SurfaceFamily};
use kstab::lattice::CurveLattice;
use kstab::scenario::{builtin_scenarios, Scenario};

/// Every family of every built-in scenario with its chamber data.
pub struct FamilyCase {
    pub scenario: String,
    pub family: String,
    pub lattice: CurveLattice,
    pub fam: SurfaceFamily,
    pub res: Vec<PieceResult>,
}

pub fn corpus() -> Vec<Scenario> {
    builtin_scenarios().expect("built-in corpus parses")
}

pub fn family_cases() -> Vec<FamilyCase> {
    let mut out = Vec::new();
    for sc in corpus() {
        for (name, fam) in &sc.families {
            let res = sc.family_results(name).expect("family decomposes");
            out.push(FamilyCase {
                scenario: sc.id.clone(),
                family: name.clone(),
                lattice: sc.lattice.clone().expect("families imply a lattice"),
                fam: fam.clone(),
                res,
            });
        }
    }
    out
}

fn rule() -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(16).unwrap())
}

/// `∫_a^b p(u, 0) du` by Gauss–Legendre.
pub fn quad_interval(p: &Polynomial2, a: f64, b: f64) -> f64 {
    rule().integrate(a, b, |u| p.eval_f64(u, 0.0))
}

/// Vertical extent of a convex polygon at abscissa `u`.
fn v_range(verts: &[(f64, f64)], u: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..verts.len() {
        let (a, b) = (verts[k], verts[(k + 1) % verts.len()]);
        let (umin, umax) = (a.0.min(b.0), a.0.max(b.0));
        if u < umin - 1e-15 || u > umax + 1e-15 {
            continue;
        }
        if (b.0 - a.0).abs() < 1e-300 {
            lo = lo.min(a.1.min(b.1));
            hi = hi.max(a.1.max(b.1));
        } else {
            let v = a.1 + (u - a.0) * (b.1 - a.1) / (b.0 - a.0);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// `∬_poly p du dv`, slicing at vertex abscissae so each slab has linear v-bounds.
pub fn quad_polygon(p: &Polynomial2, poly: &Polygon) -> f64 {
    let verts: Vec<(f64, f64)> = poly.vertices().iter().map(|(u, v)| (to_f64(u), to_f64(v))).collect();
    if verts.len() < 3 {
        return 0.0;
    }
    let mut us: Vec<f64> = verts.iter().map(|v| v.0).collect();
    us.sort_by(f64::total_cmp);
    us.dedup();
    let gl = rule();
    let mut total = 0.0;
    for w in us.windows(2) {
        total += gl.integrate(w[0], w[1], |u| match v_range(&verts, u) {
            Some((lo, hi)) => gl.integrate(lo, hi, |v| p.eval_f64(u, v)),
            None => 0.0,
        });
    }
    total
}

pub fn rel_close(exact: f64, numeric: f64, tol: f64) -> bool {
    (exact - numeric).abs() <= tol * exact.abs().max(1e-12)
}
