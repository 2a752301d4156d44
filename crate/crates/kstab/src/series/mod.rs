//! The family 2.7 series: per-band chamber decompositions of `P(u)|_T − v·e1`
//! on the blown-up quadric, summed exactly over `n`.

mod bclass;
pub mod closed_form;

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::exact::{integrate_polygon, rat, to_f64, AffineForm, Rational};
use crate::lattice::{Curve, CurveLattice, DivisorClass, LatticeError, ParametricDivisor};
use crate::zariski::{decompose_to_threshold, Supports, ThresholdPiece, ZariskiError};

pub use bclass::{b_class, e1_degree, generate_b_classes, gram, interval, kinds, orbit_sum, BClassError, BlownQuadricClass, Half, BASIS};

#[derive(Debug, Clone, thiserror::Error)]
pub enum SeriesError {
    #[error(transparent)]
    BClass(#[from] BClassError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("band ({n},{i},{half:?}): {source}")]
    Band { n: u64, i: usize, half: Half, source: ZariskiError },
}

/// Curve universe for the bands of `n`: `e1` and the orbit sums of `B_{k,·}` for `k ∈ {n−1, n, n+1}`.
#[derive(Debug, Clone)]
pub struct BandUniverse {
    pub n: u64,
    pub lattice: CurveLattice,
    /// `(k, i)` of each curve; `None` for `e1`.
    pub orbits: Vec<Option<(u64, usize)>>,
    supports: Supports,
}

impl BandUniverse {
    pub fn new(n: u64) -> Result<Self, SeriesError> {
        let mut curves = vec![Curve { name: "e1".into(), class: DivisorClass::unit(10, 2) }];
        let mut orbits = vec![None];
        for k in n.saturating_sub(1)..=n + 1 {
            generate_b_classes(k)?;
            for i in 1..=4 {
                curves.push(Curve { name: format!("B{k},{i}"), class: orbit_sum(k, i).to_divisor() });
                orbits.push(Some((k, i)));
            }
        }
        let basis = BASIS.iter().map(|s| s.to_string()).collect();
        let lattice = CurveLattice::with_curves(basis, gram(), curves)?;
        let supports = Supports::new(&lattice).map_err(|source| SeriesError::Band { n, i: 0, half: Half::Prime, source })?;
        Ok(BandUniverse { n, lattice, orbits, supports })
    }
}

/// `P(u)|_T − v·e1 = (3−u)(ℓ1+ℓ2) − (1+v)e1 − e2 − … − e8`.
pub fn family_divisor() -> ParametricDivisor {
    let three_minus_u = AffineForm::new(rat(3, 1), rat(-1, 1), Rational::zero());
    let mut coeffs = vec![three_minus_u.clone(), three_minus_u];
    coeffs.extend((0..8).map(|_| AffineForm::constant(rat(-1, 1))));
    ParametricDivisor(coeffs).sub_scaled(&DivisorClass::unit(10, 2), &AffineForm::v())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandResult {
    pub n: u64,
    pub i: usize,
    pub half: Half,
    pub u0: Rational,
    pub u1: Rational,
    pub threshold: Vec<ThresholdPiece>,
    pub chambers: usize,
    /// `(3/14) ∬ P²`
    pub s: Rational,
    /// `(3/14) ∬ (P·e1)²`
    pub m: Rational,
    /// Contributions to `F_{k,j}` from this band.
    pub f: BTreeMap<(u64, usize), Rational>,
}

pub fn compute_band(universe: &BandUniverse, i: usize, half: Half) -> Result<BandResult, SeriesError> {
    let n = universe.n;
    let lat = &universe.lattice;
    let (u0, u1) = interval(n, i, half);
    let d = family_divisor();
    let (threshold, dec) = decompose_to_threshold(lat, &universe.supports, &d, &u0, &u1)
        .map_err(|source| SeriesError::Band { n, i, half, source })?;
    let k = rat(3, 14);
    let mut s = Rational::zero();
    let mut m = Rational::zero();
    let mut f: BTreeMap<(u64, usize), Rational> = BTreeMap::new();
    for ch in &dec.chambers {
        s += integrate_polygon(&ch.p_squared, &ch.region);
        let pe = lat.pairing_form(&ch.p_class, 0).to_poly();
        m += integrate_polygon(&pe.pow(2), &ch.region);
        for (idx, &curve) in ch.support.iter().enumerate() {
            let Some((kk, j)) = universe.orbits[curve] else { continue };
            let val = integrate_polygon(&(&pe * &ch.coeffs[idx].to_poly()), &ch.region);
            let weight = rat(3, 7) * Rational::from_integer(e1_degree(kk, j));
            *f.entry((kk, j)).or_insert_with(Rational::zero) += weight * val;
        }
    }
    Ok(BandResult { n, i, half, u0, u1, threshold, chambers: dec.chambers.len(), s: s * &k, m: m * &k, f })
}

fn bands_of(n: u64, only_first: bool) -> Result<Vec<BandResult>, SeriesError> {
    let universe = BandUniverse::new(n)?;
    let is = if only_first { 1..=1 } else { 1..=4 };
    let mut out = Vec::new();
    for i in is {
        for half in [Half::Prime, Half::DoublePrime] {
            out.push(compute_band(&universe, i, half)?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRow {
    pub n: u64,
    pub s: [Rational; 4],
    pub m_prime: [Rational; 4],
    pub m_double: [Rational; 4],
    pub f: [Rational; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesReport {
    pub n_max: u64,
    pub rows: Vec<SeriesRow>,
    pub s_partial: Rational,
    pub m_partial: Rational,
    pub f_partial: Rational,
    /// `n_max · Σ_i S_{n_max,i}`, a c/n tail fit. Not a bound.
    pub s_tail_heuristic: f64,
    pub f_tail_heuristic: f64,
}

/// Exact partial sums over `n ≤ n_max`. The first bands of `n_max + 1` are also
/// decomposed so that every reported `F_{n,4}` is complete.
pub fn series_sum(n_max: u64) -> Result<SeriesReport, SeriesError> {
    let blocks: Vec<Result<Vec<BandResult>, SeriesError>> =
        (0..=n_max + 1).into_par_iter().map(|n| bands_of(n, n == n_max + 1)).collect();
    let mut bands = Vec::new();
    for b in blocks {
        bands.extend(b?);
    }
    Ok(assemble(n_max, &bands))
}

fn assemble(n_max: u64, bands: &[BandResult]) -> SeriesReport {
    let zero4 = || std::array::from_fn::<Rational, 4, _>(|_| Rational::zero());
    let mut rows: Vec<SeriesRow> = (0..=n_max)
        .map(|n| SeriesRow { n, s: zero4(), m_prime: zero4(), m_double: zero4(), f: zero4() })
        .collect();
    for b in bands {
        if b.n <= n_max {
            let row = &mut rows[b.n as usize];
            row.s[b.i - 1] += &b.s;
            match b.half {
                Half::Prime => row.m_prime[b.i - 1] += &b.m,
                Half::DoublePrime => row.m_double[b.i - 1] += &b.m,
            }
        }
        for ((k, j), val) in &b.f {
            if *k <= n_max {
                rows[*k as usize].f[j - 1] += val;
            }
        }
    }
    let sum = |f: &dyn Fn(&SeriesRow) -> Rational| rows.iter().map(f).sum::<Rational>();
    let s_partial = sum(&|r| r.s.iter().sum());
    let m_partial = sum(&|r| r.m_prime.iter().chain(&r.m_double).sum());
    let f_partial = sum(&|r| r.f.iter().sum());
    let last = rows.last().expect("n_max >= 0");
    let nm = n_max.max(1) as f64;
    let s_tail_heuristic = nm * to_f64(&last.s.iter().sum());
    let f_tail_heuristic = nm * to_f64(&last.f.iter().sum());
    SeriesReport { n_max, rows, s_partial, m_partial, f_partial, s_tail_heuristic, f_tail_heuristic }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    S,
    F,
    MPrime,
    MDouble,
}

/// One ledger entry, decomposing only the bands it depends on.
pub fn series_term(kind: TermKind, n: u64, i: usize) -> Result<Rational, SeriesError> {
    assert!((1..=4).contains(&i), "band index is 1..=4");
    match kind {
        TermKind::S | TermKind::MPrime | TermKind::MDouble => {
            let universe = BandUniverse::new(n)?;
            let halves: &[Half] = match kind {
                TermKind::MPrime => &[Half::Prime],
                TermKind::MDouble => &[Half::DoublePrime],
                _ => &[Half::Prime, Half::DoublePrime],
            };
            let mut acc = Rational::zero();
            for &h in halves {
                let b = compute_band(&universe, i, h)?;
                acc += if kind == TermKind::S { b.s } else { b.m };
            }
            Ok(acc)
        }
        TermKind::F => {
            // Bands I_{n,i−1}, I_{n,i}, I_{n,i+1}, with I_{n,0} = I_{n−1,4} and I_{n,5} = I_{n+1,1}.
            let mut wanted = vec![(n, i)];
            match i {
                1 if n > 0 => wanted.push((n - 1, 4)),
                1 => {}
                _ => wanted.push((n, i - 1)),
            }
            wanted.push(if i == 4 { (n + 1, 1) } else { (n, i + 1) });
            let mut acc = Rational::zero();
            let mut universes: BTreeMap<u64, BandUniverse> = BTreeMap::new();
            for (bn, bi) in wanted {
                if !universes.contains_key(&bn) {
                    universes.insert(bn, BandUniverse::new(bn)?);
                }
                for h in [Half::Prime, Half::DoublePrime] {
                    let b = compute_band(&universes[&bn], bi, h)?;
                    if let Some(v) = b.f.get(&(n, i)) {
                        acc += v;
                    }
                }
            }
            Ok(acc)
        }
    }
}
