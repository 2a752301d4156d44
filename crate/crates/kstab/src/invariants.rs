//! Threefold and flag-level invariants: S_X, S(W;C), S(W;P) with its F-term,
//! β, and the δ-bound combinators.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Signed, Zero};

use crate::exact::{format_rational, integrate_interval, integrate_polygon, rat, AffineForm, Polygon, Polynomial2, Rational};
use crate::lattice::{CurveLattice, ParametricDivisor};
use crate::zariski::{decompose_to_threshold, ChamberDecomposition, Supports, ThresholdPiece, ZariskiError};

#[derive(Debug, Clone, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Zariski(#[from] ZariskiError),
    #[error("interval {0} does not start where the previous one ends")]
    Gap(usize),
    #[error("P(u) + N(u) differs from the declared family on interval {0}")]
    DecompositionMismatch(usize),
    #[error("volume jumps at u = {0}")]
    Discontinuous(String),
    #[error("declared volume on interval {idx} disagrees with the triple form: declared {declared}, computed {computed}")]
    VolumeMismatch { idx: usize, declared: String, computed: String },
    #[error("interval {0} has neither a triple form nor a declared volume")]
    MissingVolume(usize),
    #[error("declared threshold {declared} disagrees with the computed threshold {computed} on [{u0}, {u1}]")]
    ThresholdMismatch { u0: String, u1: String, declared: String, computed: String },
    #[error("incomplete flag data: no multiplicity for {0}")]
    IncompleteFlag(String),
    #[error("invalid flag data: {0}")]
    InvalidFlag(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("degree must be 1, 2 or 3, got {0}")]
    BadDegree(i64),
}

/// Symmetric trilinear form, stored on sorted index triples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TripleForm {
    entries: HashMap<[usize; 3], Rational>,
}

impl TripleForm {
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        let mut key = [i, j, k];
        key.sort_unstable();
        self.entries.insert(key, value);
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Rational {
        let mut key = [i, j, k];
        key.sort_unstable();
        self.entries.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn cube(&self, d: &ParametricDivisor) -> Polynomial2 {
        let polys: Vec<Polynomial2> = d.0.iter().map(AffineForm::to_poly).collect();
        let mut acc = Polynomial2::zero();
        for (key, c) in &self.entries {
            let [i, j, k] = *key;
            // number of distinct orderings of the sorted key
            let mult = if i == j && j == k {
                1
            } else if i == j || j == k {
                3
            } else {
                6
            };
            let term = &(&polys[i] * &polys[j]) * &polys[k];
            acc = &acc + &term.scale(&(c * Rational::from_integer(mult.into())));
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreefoldPiece {
    pub u0: Rational,
    pub u1: Rational,
    pub p: Option<ParametricDivisor>,
    pub n: Option<ParametricDivisor>,
    pub declared_vol: Option<Polynomial2>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreefoldFamilyData {
    pub basis: Vec<String>,
    pub triple: Option<TripleForm>,
    pub volume: Rational,
    pub family: Option<ParametricDivisor>,
    pub pieces: Vec<ThreefoldPiece>,
}

impl ThreefoldFamilyData {
    /// Volume polynomial of each interval, after validation.
    pub fn volumes(&self) -> Result<Vec<Polynomial2>, InvariantError> {
        let vols = self.piece_volumes()?;
        let z = Rational::zero();
        for k in 1..vols.len() {
            let at = &self.pieces[k].u0;
            if vols[k - 1].eval(at, &z) != vols[k].eval(at, &z) {
                return Err(InvariantError::Discontinuous(format_rational(at)));
            }
        }
        Ok(vols)
    }

    /// Like [`Self::volumes`] but without the continuity check, for piecewise
    /// overestimates that may jump at interval ends.
    pub fn piece_volumes(&self) -> Result<Vec<Polynomial2>, InvariantError> {
        let mut vols = Vec::with_capacity(self.pieces.len());
        for (idx, piece) in self.pieces.iter().enumerate() {
            if idx > 0 && self.pieces[idx - 1].u1 != piece.u0 {
                return Err(InvariantError::Gap(idx));
            }
            if let (Some(fam), Some(p)) = (&self.family, &piece.p) {
                let n = piece.n.clone().unwrap_or_else(|| ParametricDivisor::zero(p.0.len()));
                let sum: Vec<AffineForm> = p.0.iter().zip(&n.0).map(|(a, b)| a + b).collect();
                if sum != fam.0 {
                    return Err(InvariantError::DecompositionMismatch(idx));
                }
            }
            let computed = match (&self.triple, &piece.p) {
                (Some(t), Some(p)) => Some(t.cube(p)),
                _ => None,
            };
            let vol = match (computed, &piece.declared_vol) {
                (Some(c), Some(d)) if &c != d => {
                    return Err(InvariantError::VolumeMismatch {
                        idx,
                        declared: d.to_string(),
                        computed: c.to_string(),
                    })
                }
                (Some(c), _) => c,
                (None, Some(d)) => d.clone(),
                (None, None) => return Err(InvariantError::MissingVolume(idx)),
            };
            vols.push(vol);
        }
        Ok(vols)
    }
}

fn integrate_u(p: &Polynomial2, a: &Rational, b: &Rational) -> Rational {
    integrate_interval(p, a, b).expect("threefold volumes are univariate")
}

/// `(1/V) ∫ P(u)³ du`.
pub fn s_threefold(data: &ThreefoldFamilyData) -> Result<Rational, InvariantError> {
    let vols = data.volumes()?;
    let total: Rational = data.pieces.iter().zip(&vols).map(|(p, v)| integrate_u(v, &p.u0, &p.u1)).sum();
    Ok(total / &data.volume)
}

pub fn beta(a_weight: &Rational, s_value: &Rational) -> Rational {
    a_weight - s_value
}

/// `A − (1/V) Σ ∫ piece`, for volume overestimates covering `[0, u_max]`.
pub fn beta_lower_bound(
    v: &Rational,
    a_weight: &Rational,
    overestimates: &[(Rational, Rational, Polynomial2)],
) -> Result<Rational, InvariantError> {
    let mut expect_start = Rational::zero();
    let mut total = Rational::zero();
    for (idx, (a, b, p)) in overestimates.iter().enumerate() {
        if *a != expect_start {
            return Err(InvariantError::Gap(idx));
        }
        total += integrate_u(p, a, b);
        expect_start = b.clone();
    }
    Ok(a_weight - total / v)
}

pub fn delta_min_combinator(terms: &[(Rational, Rational)]) -> Result<Rational, InvariantError> {
    let mut best: Option<Rational> = None;
    for (num, den) in terms {
        if den.is_zero() {
            return Err(InvariantError::ZeroDenominator);
        }
        let q = num / den;
        if best.as_ref().is_none_or(|b| q < *b) {
            best = Some(q);
        }
    }
    best.ok_or(InvariantError::ZeroDenominator)
}

pub fn fiber_delta_bound(d: i64, delta_a: &Rational, on_e: bool) -> Result<Rational, InvariantError> {
    if !(1..=3).contains(&d) {
        return Err(InvariantError::BadDegree(d));
    }
    let cap = rat(16, 11);
    let other = if on_e {
        rat(16, 1) * delta_a / (delta_a + rat(15, 1))
    } else {
        rat(16, 15) * delta_a
    };
    Ok(if other < cap { other } else { cap })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Positive => "positive",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

pub fn quartic_fiber_bound(delta_s: &Rational, singular_point: bool) -> Verdict {
    let bar = if singular_point { rat(27, 28) } else { rat(54, 55) };
    if *delta_s > bar {
        Verdict::Positive
    } else {
        Verdict::Inconclusive
    }
}

/// One u-interval of a surface flag family: `D(u, v) = base(u) − v·center`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfacePiece {
    pub u0: Rational,
    pub u1: Rational,
    pub base: ParametricDivisor,
    pub vmax: Option<AffineForm>,
    /// `ord_C(N(u)|_S)`
    pub ord_center: AffineForm,
    /// Restricted threefold negative part, by label.
    pub restricted: Vec<(String, AffineForm)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceFamily {
    pub center: usize,
    pub pieces: Vec<SurfacePiece>,
}

impl SurfaceFamily {
    pub fn divisor(&self, lat: &CurveLattice, piece: usize) -> ParametricDivisor {
        let class = &lat.curves()[self.center].class;
        self.pieces[piece].base.sub_scaled(class, &AffineForm::v())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceResult {
    pub threshold: Vec<ThresholdPiece>,
    pub dec: ChamberDecomposition,
}

pub fn decompose_family(lat: &CurveLattice, fam: &SurfaceFamily) -> Result<Vec<PieceResult>, InvariantError> {
    let supports = Supports::new(lat).map_err(InvariantError::from)?;
    let mut out = Vec::with_capacity(fam.pieces.len());
    for (idx, piece) in fam.pieces.iter().enumerate() {
        let d = fam.divisor(lat, idx);
        let (threshold, dec) = decompose_to_threshold(lat, &supports, &d, &piece.u0, &piece.u1)?;
        if let Some(vmax) = &piece.vmax {
            if threshold.iter().any(|t| &t.t != vmax) {
                let computed: Vec<String> = threshold.iter().map(|t| t.t.to_string()).collect();
                return Err(InvariantError::ThresholdMismatch {
                    u0: format_rational(&piece.u0),
                    u1: format_rational(&piece.u1),
                    declared: vmax.to_string(),
                    computed: computed.join(" | "),
                });
            }
        }
        out.push(PieceResult { threshold, dec });
    }
    Ok(out)
}

/// Per-piece `(∫ base²·ord_C du, ∬ P² dv du)`.
pub fn curve_terms(
    lat: &CurveLattice,
    fam: &SurfaceFamily,
    res: &[PieceResult],
) -> Vec<(Rational, Rational)> {
    fam.pieces
        .iter()
        .zip(res)
        .map(|(piece, r)| {
            let first = if piece.ord_center.is_zero() {
                Rational::zero()
            } else {
                let sq = lat.square(&piece.base);
                integrate_u(&(&sq * &piece.ord_center.to_poly()), &piece.u0, &piece.u1)
            };
            let double: Rational = r.dec.chambers.iter().map(|c| integrate_polygon(&c.p_squared, &c.region)).sum();
            (first, double)
        })
        .collect()
}

/// `S(W; C) = (3/V)[∫ (P|_S)²·ord_C(N|_S) du + ∬ vol dv du]`.
pub fn s_curve(v: &Rational, lat: &CurveLattice, fam: &SurfaceFamily, res: &[PieceResult]) -> Rational {
    let total: Rational = curve_terms(lat, fam, res).into_iter().map(|(a, b)| a + b).sum();
    rat(3, 1) * total / v
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlagData {
    /// Local multiplicity at the point of each curve (or restricted label) along the center.
    pub mult: BTreeMap<String, Rational>,
    pub default_mult: Option<Rational>,
    pub weight: Option<Rational>,
    pub different: Rational,
}

impl FlagData {
    pub fn validate(&self) -> Result<(), InvariantError> {
        if let Some((k, _)) = self.mult.iter().find(|(_, m)| m.is_negative()) {
            return Err(InvariantError::InvalidFlag(format!("negative multiplicity for {k}")));
        }
        if self.default_mult.as_ref().is_some_and(|m| m.is_negative()) {
            return Err(InvariantError::InvalidFlag("negative default multiplicity".into()));
        }
        if self.different.is_negative() || self.different >= Rational::one() {
            return Err(InvariantError::InvalidFlag("different coefficient outside [0, 1)".into()));
        }
        Ok(())
    }

    pub fn mult_of(&self, name: &str) -> Result<Rational, InvariantError> {
        self.mult
            .get(name)
            .or(self.default_mult.as_ref())
            .cloned()
            .ok_or_else(|| InvariantError::IncompleteFlag(name.to_string()))
    }
}

fn chamber_pieces<'a>(res: &'a [PieceResult]) -> impl Iterator<Item = (usize, &'a crate::zariski::Chamber)> {
    res.iter().enumerate().flat_map(|(i, r)| r.dec.chambers.iter().map(move |c| (i, c)))
}

/// `(3/V) ∬ (P·C)² dv du`.
pub fn point_base(v: &Rational, lat: &CurveLattice, fam: &SurfaceFamily, res: &[PieceResult]) -> Rational {
    let total: Rational = chamber_pieces(res)
        .map(|(_, c)| {
            let pc = lat.pairing_form(&c.p_class, fam.center).to_poly();
            integrate_polygon(&pc.pow(2), &c.region)
        })
        .sum();
    rat(3, 1) * total / v
}

/// Integrand `ord_P(N'|_C + N(u,v)|_C)` on a chamber of the given piece.
pub fn point_order(
    lat: &CurveLattice,
    fam: &SurfaceFamily,
    piece: usize,
    chamber: &crate::zariski::Chamber,
    flag: &FlagData,
) -> Result<AffineForm, InvariantError> {
    let mut ord = AffineForm::zero();
    for (k, &curve) in chamber.support.iter().enumerate() {
        let m = flag.mult_of(lat.curve_name(curve))?;
        ord = &ord + &chamber.coeffs[k].scale(&m);
    }
    for (label, coeff) in &fam.pieces[piece].restricted {
        let m = flag.mult_of(label)?;
        ord = &ord + &coeff.scale(&m);
    }
    Ok(ord)
}

/// `F_P = (6/V) ∬ (P·C)·ord_P(N'|_C + N|_C)`.
pub fn f_term(
    v: &Rational,
    lat: &CurveLattice,
    fam: &SurfaceFamily,
    res: &[PieceResult],
    flag: &FlagData,
) -> Result<Rational, InvariantError> {
    flag.validate()?;
    let mut total = Rational::zero();
    for (piece, c) in chamber_pieces(res) {
        let ord = point_order(lat, fam, piece, c, flag)?;
        if ord.is_zero() {
            continue;
        }
        let pc = lat.pairing_form(&c.p_class, fam.center);
        total += integrate_polygon(&(&pc.to_poly() * &ord.to_poly()), &c.region);
    }
    Ok(rat(6, 1) * total / v)
}

pub fn s_point(
    v: &Rational,
    lat: &CurveLattice,
    fam: &SurfaceFamily,
    res: &[PieceResult],
    flag: &FlagData,
) -> Result<Rational, InvariantError> {
    Ok(point_base(v, lat, fam, res) + f_term(v, lat, fam, res, flag)?)
}

/// All double integrals feeding a family's invariants, for numeric cross-checks.
pub fn integrands(lat: &CurveLattice, fam: &SurfaceFamily, res: &[PieceResult]) -> Vec<(Polynomial2, Polygon)> {
    let mut out = Vec::new();
    for (_, c) in chamber_pieces(res) {
        out.push((c.p_squared.clone(), c.region.clone()));
        let pc = lat.pairing_form(&c.p_class, fam.center).to_poly();
        out.push((pc.pow(2), c.region.clone()));
    }
    out
}
