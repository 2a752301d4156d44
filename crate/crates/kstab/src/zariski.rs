//! Parametric Zariski decomposition over a polygonal `(u, v)` domain, relative to
//! the finite curve universe of a [`CurveLattice`].

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exact::{format_rational, AffineForm, Polygon, Polynomial2, Rational};
use crate::lattice::{invert, CurveLattice, DivisorClass, LatticeError, ParametricDivisor};

pub const MAX_UNIVERSE: usize = 20;

#[derive(Debug, Clone, thiserror::Error)]
pub enum ZariskiError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("curve universe has {0} curves; the cap is {MAX_UNIVERSE}")]
    UniverseTooLarge(usize),
    #[error("not pseudoeffective w.r.t. universe")]
    NotPseudoeffective,
    #[error("universe incomplete or domain exceeds pseudoeffective region: uncovered area {area} in {pieces}")]
    Uncovered { area: String, pieces: String },
    #[error("chambers {0} and {1} overlap; decomposition is not unique within the universe")]
    Overlap(String, String),
    #[error("no threshold: divisor stays pseudoeffective for arbitrarily large v")]
    NoThreshold,
    #[error("volume is negative at ({0}, {1}); the threshold is not governed by the universe")]
    NegativeVolume(String, String),
    #[error("outside parameter domain")]
    OutsideDomain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub region: Polygon,
    pub support: Vec<usize>,
    pub coeffs: Vec<AffineForm>,
    pub p_squared: Polynomial2,
    pub p_class: ParametricDivisor,
}

impl Chamber {
    pub fn coeff_of(&self, curve: usize) -> Option<&AffineForm> {
        self.support.iter().position(|&c| c == curve).map(|k| &self.coeffs[k])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberDecomposition {
    pub domain: Polygon,
    pub chambers: Vec<Chamber>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointDecomposition {
    pub support: Vec<usize>,
    pub coeffs: Vec<Rational>,
    pub positive: DivisorClass,
    pub negative: DivisorClass,
    pub p_squared: Rational,
}

/// Negative-definite candidate supports with their inverse Gram matrices,
/// ordered by size and then lexicographically.
#[derive(Debug, Clone)]
pub struct Supports {
    sets: Vec<(Vec<usize>, Vec<Vec<Rational>>)>,
}

impl Supports {
    pub fn new(lat: &CurveLattice) -> Result<Self, ZariskiError> {
        let n = lat.curve_count();
        if n > MAX_UNIVERSE {
            return Err(ZariskiError::UniverseTooLarge(n));
        }
        let mut found = vec![Vec::new()];
        fn grow(lat: &CurveLattice, start: usize, cur: &mut Vec<usize>, found: &mut Vec<Vec<usize>>) {
            for j in start..lat.curve_count() {
                if !lat.curve_pair(j, j).is_negative() {
                    continue;
                }
                cur.push(j);
                // supersets of a non-negative-definite set are never negative definite
                if lat.is_negative_definite(cur) {
                    found.push(cur.clone());
                    grow(lat, j + 1, cur, found);
                }
                cur.pop();
            }
        }
        grow(lat, 0, &mut Vec::new(), &mut found);
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let sets = found
            .into_iter()
            .map(|s| {
                let g: Vec<Vec<Rational>> =
                    s.iter().map(|&i| s.iter().map(|&j| lat.curve_pair(i, j).clone()).collect()).collect();
                let inv = invert(&g).expect("negative definite matrices are invertible");
                (s, inv)
            })
            .collect();
        Ok(Self { sets })
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> impl Iterator<Item = &[usize]> {
        self.sets.iter().map(|(s, _)| s.as_slice())
    }
}

fn support_names(lat: &CurveLattice, s: &[usize]) -> String {
    let names: Vec<&str> = s.iter().map(|&i| lat.curve_name(i)).collect();
    format!("{{{}}}", names.join(", "))
}

fn describe_polygons(ps: &[Polygon]) -> String {
    let mut out = String::new();
    for (k, p) in ps.iter().enumerate() {
        if k > 0 {
            out.push_str("; ");
        }
        out.push('[');
        for (i, (u, v)) in p.vertices().iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let _ = write!(out, "({}, {})", format_rational(u), format_rational(v));
        }
        out.push(']');
    }
    out
}

/// Valid supports at a point, with strictly positive coefficients.
pub fn valid_supports_at(
    lat: &CurveLattice,
    supports: &Supports,
    d: &DivisorClass,
) -> Result<Vec<PointDecomposition>, ZariskiError> {
    let n = lat.curve_count();
    let f: Vec<Rational> = (0..n)
        .map(|i| lat.pair(d, &lat.curves()[i].class))
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    for (set, inv) in &supports.sets {
        let coeffs: Vec<Rational> = inv
            .iter()
            .map(|row| row.iter().zip(set).map(|(g, &j)| g * &f[j]).sum())
            .collect();
        if coeffs.iter().any(|c| !c.is_positive()) {
            continue;
        }
        let nef = (0..n).filter(|c| !set.contains(c)).all(|c| {
            let mut pc = f[c].clone();
            for (k, &j) in set.iter().enumerate() {
                pc -= &coeffs[k] * lat.curve_pair(j, c);
            }
            !pc.is_negative()
        });
        if !nef {
            continue;
        }
        let mut negative = DivisorClass::zero(lat.rank());
        for (k, &j) in set.iter().enumerate() {
            negative.add_scaled(&lat.curves()[j].class, &coeffs[k]);
        }
        let mut positive = d.clone();
        positive.add_scaled(&negative, &-Rational::from_integer(1.into()));
        let mut p_squared = lat.pair(d, d)?;
        for (k, &j) in set.iter().enumerate() {
            p_squared -= &coeffs[k] * &f[j];
        }
        out.push(PointDecomposition { support: set.clone(), coeffs, positive, negative, p_squared });
    }
    Ok(out)
}

/// Zariski decomposition of a single class, smallest valid support first.
pub fn decompose_at(lat: &CurveLattice, d: &DivisorClass) -> Result<PointDecomposition, ZariskiError> {
    let supports = Supports::new(lat)?;
    decompose_at_with(lat, &supports, d)
}

pub fn decompose_at_with(
    lat: &CurveLattice,
    supports: &Supports,
    d: &DivisorClass,
) -> Result<PointDecomposition, ZariskiError> {
    valid_supports_at(lat, supports, d)?
        .into_iter()
        .next()
        .ok_or(ZariskiError::NotPseudoeffective)
}

fn candidate_chambers(lat: &CurveLattice, supports: &Supports, d: &ParametricDivisor, domain: &Polygon) -> Vec<Chamber> {
    let n = lat.curve_count();
    let f: Vec<AffineForm> = (0..n).map(|i| lat.pairing_form(d, i)).collect();
    let d_sq = lat.square(d);
    supports
        .sets
        .par_iter()
        .filter_map(|(set, inv)| {
            let coeffs: Vec<AffineForm> = inv
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(set)
                        .fold(AffineForm::zero(), |acc, (g, &j)| &acc + &f[j].scale(g))
                })
                .collect();
            // an identically vanishing coefficient duplicates a smaller support
            if coeffs.iter().any(AffineForm::is_zero) {
                return None;
            }
            let mut region = domain.clip_all(&coeffs);
            for c in (0..n).filter(|c| !set.contains(c)) {
                if region.is_degenerate() {
                    return None;
                }
                let mut pc = f[c].clone();
                for (k, &j) in set.iter().enumerate() {
                    pc = &pc - &coeffs[k].scale(lat.curve_pair(j, c));
                }
                region = region.clip(&pc);
            }
            if region.is_degenerate() {
                return None;
            }
            let mut p_squared = d_sq.clone();
            let mut p_class = d.clone();
            for (k, &j) in set.iter().enumerate() {
                p_squared = &p_squared - &(&coeffs[k].to_poly() * &f[j].to_poly());
                p_class = p_class.sub_scaled(&lat.curves()[j].class, &coeffs[k]);
            }
            Some(Chamber { region, support: set.clone(), coeffs, p_squared, p_class })
        })
        .collect()
}

fn verify_partition(lat: &CurveLattice, domain: &Polygon, chambers: &[Chamber]) -> Result<(), ZariskiError> {
    for i in 0..chambers.len() {
        for j in i + 1..chambers.len() {
            if !chambers[i].region.intersect(&chambers[j].region).is_degenerate() {
                return Err(ZariskiError::Overlap(
                    support_names(lat, &chambers[i].support),
                    support_names(lat, &chambers[j].support),
                ));
            }
        }
    }
    let mut rest = if domain.is_degenerate() { vec![] } else { vec![domain.clone()] };
    for ch in chambers {
        rest = rest.iter().flat_map(|p| p.subtract(&ch.region)).collect();
        if rest.is_empty() {
            break;
        }
    }
    if !rest.is_empty() {
        let area: Rational = rest.iter().map(Polygon::area).sum();
        return Err(ZariskiError::Uncovered { area: format_rational(&area), pieces: describe_polygons(&rest) });
    }
    Ok(())
}

pub fn decompose_parametric(
    lat: &CurveLattice,
    d: &ParametricDivisor,
    domain: &Polygon,
) -> Result<ChamberDecomposition, ZariskiError> {
    let supports = Supports::new(lat)?;
    decompose_parametric_with(lat, &supports, d, domain)
}

pub fn decompose_parametric_with(
    lat: &CurveLattice,
    supports: &Supports,
    d: &ParametricDivisor,
    domain: &Polygon,
) -> Result<ChamberDecomposition, ZariskiError> {
    let chambers = candidate_chambers(lat, supports, d, domain);
    verify_partition(lat, domain, &chambers)?;
    Ok(ChamberDecomposition { domain: domain.clone(), chambers })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdPiece {
    pub u0: Rational,
    pub u1: Rational,
    pub t: AffineForm,
}

/// Threshold `t(u)` on `[u0, u1]` together with the chamber decomposition of
/// `{u0 <= u <= u1, 0 <= v <= t(u)}`.
pub fn decompose_to_threshold(
    lat: &CurveLattice,
    supports: &Supports,
    d: &ParametricDivisor,
    u0: &Rational,
    u1: &Rational,
) -> Result<(Vec<ThresholdPiece>, ChamberDecomposition), ZariskiError> {
    if d.0.iter().all(|a| a.coef_v.is_zero()) {
        return Err(ZariskiError::NoThreshold);
    }
    let zero = Rational::zero();
    let mut height = Rational::from_integer(8.into());
    for _ in 0..40 {
        let rect = Polygon::rectangle(u0.clone(), u1.clone(), zero.clone(), height.clone());
        let chambers = candidate_chambers(lat, supports, d, &rect);
        let mut pts: Vec<(Rational, Rational)> =
            chambers.iter().flat_map(|c| c.region.vertices().iter().cloned()).collect();
        if pts.iter().any(|p| p.1 >= height) {
            height *= Rational::from_integer(4.into());
            continue;
        }
        pts.sort();
        pts.dedup();
        let hull = upper_hull(pts);
        if hull.len() < 2 || hull[0].0 != *u0 || hull[hull.len() - 1].0 != *u1 {
            return Err(ZariskiError::NotPseudoeffective);
        }
        let pieces: Vec<ThresholdPiece> = hull
            .windows(2)
            .map(|w| {
                let slope = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
                let c = &w[0].1 - &slope * &w[0].0;
                ThresholdPiece { u0: w[0].0.clone(), u1: w[1].0.clone(), t: AffineForm::new(c, slope, zero.clone()) }
            })
            .collect();
        let mut verts = vec![(u0.clone(), zero.clone()), (u1.clone(), zero.clone())];
        verts.extend(hull.into_iter().rev());
        let domain = Polygon::new(verts).map_err(|_| ZariskiError::NotPseudoeffective)?;
        verify_partition(lat, &domain, &chambers)?;
        for ch in &chambers {
            for (u, v) in ch.region.vertices() {
                if ch.p_squared.eval(u, v).is_negative() {
                    return Err(ZariskiError::NegativeVolume(format_rational(u), format_rational(v)));
                }
            }
        }
        return Ok((pieces, ChamberDecomposition { domain, chambers }));
    }
    Err(ZariskiError::NoThreshold)
}

pub fn effective_threshold(
    lat: &CurveLattice,
    d: &ParametricDivisor,
    u0: &Rational,
    u1: &Rational,
) -> Result<Vec<ThresholdPiece>, ZariskiError> {
    let supports = Supports::new(lat)?;
    decompose_to_threshold(lat, &supports, d, u0, u1).map(|r| r.0)
}

/// Upper convex chain of points sorted by `(u, v)`, one vertex per `u`.
fn upper_hull(pts: Vec<(Rational, Rational)>) -> Vec<(Rational, Rational)> {
    let mut h: Vec<(Rational, Rational)> = Vec::new();
    for p in pts {
        if let Some(last) = h.last() {
            if last.0 == p.0 {
                h.pop();
            }
        }
        while h.len() >= 2 {
            let (a, b) = (&h[h.len() - 2], &h[h.len() - 1]);
            let cr = (&b.0 - &a.0) * (&p.1 - &a.1) - (&b.1 - &a.1) * (&p.0 - &a.0);
            if cr.is_negative() {
                break;
            }
            h.pop();
        }
        h.push(p);
    }
    h
}

impl ChamberDecomposition {
    /// Chamber containing a point (first match on shared boundaries).
    pub fn locate(&self, u: &Rational, v: &Rational) -> Option<&Chamber> {
        self.chambers.iter().find(|c| {
            c.region.edge_halfplanes().iter().all(|h| !h.eval(u, v).is_negative())
        })
    }

    /// Adjacent chamber pairs whose volume polynomials disagree on the shared edge.
    pub fn continuity_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for i in 0..self.chambers.len() {
            for j in i + 1..self.chambers.len() {
                if let Some(line) = shared_edge(&self.chambers[i].region, &self.chambers[j].region) {
                    let (a, b) = (&self.chambers[i].p_squared, &self.chambers[j].p_squared);
                    if restrict_to_line(a, &line) != restrict_to_line(b, &line) {
                        bad.push((i, j));
                    }
                }
            }
        }
        bad
    }

    /// Number of chamber pairs sharing an edge of positive length.
    pub fn adjacent_pairs(&self) -> usize {
        let mut n = 0;
        for i in 0..self.chambers.len() {
            for j in i + 1..self.chambers.len() {
                if shared_edge(&self.chambers[i].region, &self.chambers[j].region).is_some() {
                    n += 1;
                }
            }
        }
        n
    }
}

/// Line (as an edge half-plane form) along which two regions share a segment.
fn shared_edge(a: &Polygon, b: &Polygon) -> Option<AffineForm> {
    for h in a.edge_halfplanes() {
        let on_line = b.clip(&h).clip(&-&h);
        let seg = a.clip(&h).clip(&-&h);
        let common = match (on_line.vertices().len(), seg.vertices().len()) {
            (0, _) | (_, 0) => continue,
            _ => overlap_length_positive(&on_line, &seg, &h),
        };
        if common {
            return Some(h);
        }
    }
    None
}

fn overlap_length_positive(a: &Polygon, b: &Polygon, line: &AffineForm) -> bool {
    // project onto the line direction (-coef_v, coef_u)
    let proj = |p: &(Rational, Rational)| -&line.coef_v * &p.0 + &line.coef_u * &p.1;
    let range = |poly: &Polygon| {
        let vals: Vec<Rational> = poly.vertices().iter().map(proj).collect();
        let lo = vals.iter().min().cloned().unwrap();
        let hi = vals.iter().max().cloned().unwrap();
        (lo, hi)
    };
    let (a0, a1) = range(a);
    let (b0, b1) = range(b);
    let lo = if a0 > b0 { a0 } else { b0 };
    let hi = if a1 < b1 { a1 } else { b1 };
    hi > lo
}

fn restrict_to_line(p: &Polynomial2, line: &AffineForm) -> Polynomial2 {
    if !line.coef_v.is_zero() {
        // v = -(c + a u)/b
        let k = -(Rational::from_integer(1.into()) / &line.coef_v);
        let v_of_u = AffineForm::new(&line.constant * &k, &line.coef_u * &k, Rational::zero());
        p.restrict_v(&v_of_u)
    } else {
        let u_const = -(&line.constant / &line.coef_u);
        p.compose(&Polynomial2::constant(u_const), &Polynomial2::v())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub samples: usize,
    pub failures: Vec<String>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Random interior point of a non-degenerate convex polygon.
pub fn sample_interior(poly: &Polygon, rng: &mut impl Rng) -> Option<(Rational, Rational)> {
    if poly.is_degenerate() {
        return None;
    }
    let mut su = Rational::zero();
    let mut sv = Rational::zero();
    let mut total = Rational::zero();
    for (u, v) in poly.vertices() {
        let w = Rational::from_integer(rng.gen_range(1i64..=97).into());
        su += &w * u;
        sv += &w * v;
        total += w;
    }
    Some((su / &total, sv / total))
}

/// Compares the chamber data against pointwise decompositions at random
/// interior points, spreading samples round-robin over the chambers.
pub fn oracle_check(
    lat: &CurveLattice,
    d: &ParametricDivisor,
    dec: &ChamberDecomposition,
    samples: usize,
    seed: u64,
) -> Result<OracleReport, ZariskiError> {
    let supports = Supports::new(lat)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = OracleReport::default();
    if dec.chambers.is_empty() {
        return Ok(report);
    }
    for k in 0..samples {
        let ch = &dec.chambers[k % dec.chambers.len()];
        let Some((u, v)) = sample_interior(&ch.region, &mut rng) else { continue };
        report.samples += 1;
        let found = valid_supports_at(lat, &supports, &d.eval(&u, &v))?;
        let at = format!("(u, v) = ({}, {})", format_rational(&u), format_rational(&v));
        if found.len() != 1 {
            report.failures.push(format!("{at}: {} valid supports", found.len()));
            continue;
        }
        let pt = &found[0];
        if pt.support != ch.support {
            report.failures.push(format!(
                "{at}: support {} but chamber says {}",
                support_names(lat, &pt.support),
                support_names(lat, &ch.support)
            ));
            continue;
        }
        for (k, c) in ch.coeffs.iter().enumerate() {
            let expect = c.eval(&u, &v);
            if expect != pt.coeffs[k] {
                report.failures.push(format!(
                    "{at}: coefficient of {} is {} but chamber gives {}",
                    lat.curve_name(ch.support[k]),
                    format_rational(&pt.coeffs[k]),
                    format_rational(&expect)
                ));
            }
        }
        if ch.p_squared.eval(&u, &v) != pt.p_squared {
            report.failures.push(format!("{at}: P^2 mismatch"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn cusp_24() -> CurveLattice {
        // f, C, L with f^2=-1/6, C^2=-6, L^2=-1/2, C.f=1, L.f=1/2, L.C=0
        CurveLattice::new(
            vec!["f".into(), "C".into(), "L".into()],
            vec![
                vec![rat(-1, 6), int(1), rat(1, 2)],
                vec![int(1), int(-6), int(0)],
                vec![rat(1, 2), int(0), rat(-1, 2)],
            ],
        )
        .unwrap()
    }

    fn cusp_family() -> ParametricDivisor {
        // (1-u)L + C + (9-3u-v)f
        ParametricDivisor(vec![
            AffineForm::new(int(9), int(-3), int(-1)),
            AffineForm::constant(int(1)),
            AffineForm::new(int(1), int(-1), int(0)),
        ])
    }

    #[test]
    fn cusp_chambers() {
        let lat = cusp_24();
        let dom = Polygon::under_graph(&int(0), &int(1), &AffineForm::new(int(9), int(-3), int(0)));
        let dec = decompose_parametric(&lat, &cusp_family(), &dom).unwrap();
        let supports: Vec<Vec<usize>> = dec.chambers.iter().map(|c| c.support.clone()).collect();
        assert_eq!(supports, vec![vec![], vec![1], vec![1, 2]]);
        assert!(dec.continuity_violations().is_empty());
        assert_eq!(dec.adjacent_pairs(), 2);
        let rep = oracle_check(&lat, &cusp_family(), &dec, 60, 7).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
    }

    #[test]
    fn pointwise_cusp() {
        let lat = cusp_24();
        let d = cusp_family().eval(&int(0), &int(4));
        let pt = decompose_at(&lat, &d).unwrap();
        assert_eq!(pt.support, vec![1]);
        assert_eq!(pt.coeffs, vec![rat(1, 6)]);
    }

    #[test]
    fn nef_class_has_no_negative_part() {
        let lat = cusp_24();
        let pt = decompose_at(&lat, &cusp_family().eval(&int(0), &int(0))).unwrap();
        assert!(pt.negative.is_zero());
    }

    #[test]
    fn threshold_of_cusp_family() {
        let lat = cusp_24();
        let t = effective_threshold(&lat, &cusp_family(), &int(0), &int(1)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].t, AffineForm::new(int(9), int(-3), int(0)));
    }

    #[test]
    fn overreaching_domain_is_reported() {
        let lat = cusp_24();
        let dom = Polygon::rectangle(int(0), int(1), int(0), int(10));
        let err = decompose_parametric(&lat, &cusp_family(), &dom).unwrap_err();
        assert!(err.to_string().starts_with("universe incomplete"));
    }

    #[test]
    fn corrupted_chamber_fails_oracle() {
        let lat = cusp_24();
        let dom = Polygon::under_graph(&int(0), &int(1), &AffineForm::new(int(9), int(-3), int(0)));
        let mut dec = decompose_parametric(&lat, &cusp_family(), &dom).unwrap();
        dec.chambers[1].coeffs[0] = &dec.chambers[1].coeffs[0] + &AffineForm::constant(rat(1, 7));
        let rep = oracle_check(&lat, &cusp_family(), &dec, 30, 1).unwrap();
        assert!(!rep.passed());
        assert!(rep.failures[0].contains("(u, v) = ("));
    }
}
