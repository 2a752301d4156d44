//! Closed forms of the per-band series terms, as an independent check on the
//! engine-computed ledger. Only rational functions of `n`; no geometry.

use num_bigint::BigInt;

use crate::exact::Rational;

/// `Σ c_k n^k` with ascending coefficients.
fn p(n: u64, coeffs: &[i64]) -> BigInt {
    let n = BigInt::from(n);
    coeffs.iter().rev().fold(BigInt::from(0), |acc, &c| acc * &n + BigInt::from(c))
}

/// `(a + b n)^e`
fn lin(n: u64, a: i64, b: i64, e: u32) -> BigInt {
    p(n, &[a, b]).pow(e)
}

fn q(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

const A1: [i64; 14] = [
    1536, 109312, 2935552, 42681728, 386407488, 2335296292, 9789648099, 29038364761, 61312905318, 91454579804,
    94035837280, 63317750608, 25088413952, 4427367168,
];
const A2: [i64; 11] = [
    1618654, 31459234, 271069253, 1362423916, 4419070194, 9654348284, 14368501182, 14362052096, 9209328422,
    3412762192, 553420896,
];
const A3: [i64; 12] = [
    1167997914, 15454923336, 91492878645, 319934133575, 734395997090, 1162203105378, 1294197714054, 1014406754242,
    548632346402, 195059453722, 41045383120, 3873946272,
];
const A4: [i64; 14] = [
    365613573312, 4021500121920, 20341847967024, 62650071283024, 131072047236004, 196698030664492, 217823761840153,
    180219167765455, 111395400841326, 50802960251820, 16615457209344, 3690223711216, 498816700928, 30991570176,
];

/// `S_{n,i} = (3/14) ∬_{I_{n,i}} P²`.
pub fn s_term(n: u64, i: usize) -> Rational {
    match i {
        1 if n == 0 => Rational::new(84365.into(), 114688.into()),
        1 => q(
            p(n, &[8, 28, 21]) * p(n, &A1),
            BigInt::from(448)
                * BigInt::from(n).pow(4)
                * lin(n, 1, 1, 1)
                * lin(n, 2, 7, 4)
                * lin(n, 3, 7, 4)
                * lin(n, 4, 7, 4)
                * p(n, &[1, 7, 7]),
        ),
        2 => q(
            lin(n, 1, 2, 1) * p(n, &A2),
            BigInt::from(4) * lin(n, 1, 1, 1) * lin(n, 2, 7, 4) * lin(n, 3, 7, 4) * lin(n, 4, 7, 4) * p(n, &[6, 14, 7]),
        ),
        3 => q(
            lin(n, 3, 2, 1) * p(n, &A3),
            BigInt::from(4)
                * lin(n, 1, 1, 1)
                * lin(n, 3, 7, 4)
                * lin(n, 6, 7, 4)
                * lin(n, 8, 7, 4)
                * lin(n, 11, 7, 1)
                * p(n, &[6, 14, 7]),
        ),
        4 => q(
            p(n, &[36, 56, 21]) * p(n, &A4),
            BigInt::from(448)
                * lin(n, 1, 1, 4)
                * lin(n, 6, 7, 4)
                * lin(n, 8, 7, 4)
                * lin(n, 10, 7, 4)
                * lin(n, 11, 7, 1)
                * p(n, &[15, 21, 7]),
        ),
        _ => panic!("no series term {i}"),
    }
}

const M1P: [i64; 11] = [1, 81, 2535, 37209, 301046, 1459736, 4420190, 8425410, 9821448, 6392736, 1778112];
const M1PP: [i64; 13] = [
    480574, 12906866, 157271760, 1149521334, 5612285145, 19278934535, 47770884833, 86016481159, 111679016743,
    101939513907, 62077730148, 22635902898, 3735591048,
];
const M2P: [i64; 12] = [
    1561176, 35176776, 356105548, 2137950448, 8458603286, 23158717414, 44778314889, 61151030584, 57807289939,
    36026947376, 13321631568, 2213683584,
];
const M2PP: [i64; 7] = [11780, 111142, 430951, 875637, 978656, 566832, 131712];
const M3P: [i64; 10] = [
    13726028, 164541190, 859036123, 2564002455, 4823323519, 5933644367, 4776917782, 2428774768, 708314208, 90354432,
];
const M3PP: [i64; 12] = [
    67760261208, 703706084640, 3313300067388, 9335574166156, 17489294547578, 22873117200584, 21308562209725,
    14139587568253, 6548997703738, 2016283621072, 371345421216, 30991570176,
];
const M4P: [i64; 13] = [
    88135013250, 967134809574, 4853884596732, 14732868828434, 30120687035243, 43697011451345, 46124583653603,
    35692827118809, 20096052100397, 8028312817917, 2160120347280, 351456857766, 26149137336,
];
const M4PP: [i64; 11] = [
    7582266167, 59702225967, 210973884925, 440580768679, 602090743422, 562572998512, 363945674554, 160955181870,
    46566357768, 7957643904, 609892416,
];

/// `M′_{n,i}` (`double = false`) or `M″_{n,i}`: `(3/14) ∬ (P·e1)²` over the half-band.
pub fn m_term(n: u64, i: usize, double: bool) -> Rational {
    match (i, double) {
        // Printed with a stray digit (22268); the band integral gives 2268.
        (1, false) if n == 0 => Rational::new(1403.into(), 2268.into()),
        (1, false) => q(
            lin(n, 1, 1, 1) * p(n, &M1P),
            BigInt::from(448) * BigInt::from(n).pow(4) * lin(n, 1, 3, 4) * lin(n, 3, 7, 4) * p(n, &[1, 7, 7]),
        ),
        (1, true) => q(
            p(n, &[1, 7, 7]) * p(n, &M1PP),
            BigInt::from(28) * lin(n, 1, 1, 1) * lin(n, 1, 3, 4) * lin(n, 2, 7, 4) * lin(n, 3, 7, 4) * lin(n, 4, 7, 4),
        ),
        (2, false) => q(
            p(n, &[6, 14, 7]) * p(n, &M2P),
            BigInt::from(224) * lin(n, 1, 1, 1) * lin(n, 1, 2, 3) * lin(n, 2, 7, 4) * lin(n, 3, 7, 4) * lin(n, 4, 7, 4),
        ),
        (2, true) => q(p(n, &M2PP), BigInt::from(224) * lin(n, 1, 2, 3) * lin(n, 3, 7, 4) * p(n, &[6, 14, 7])),
        (3, false) => q(
            lin(n, 11, 7, 1) * p(n, &M3P),
            BigInt::from(224) * lin(n, 1, 1, 3) * lin(n, 3, 7, 4) * lin(n, 13, 14, 4) * p(n, &[6, 14, 7]),
        ),
        (3, true) => q(
            p(n, &[6, 14, 7]) * p(n, &M3PP),
            BigInt::from(224)
                * lin(n, 1, 1, 3)
                * lin(n, 6, 7, 4)
                * lin(n, 8, 7, 4)
                * lin(n, 11, 7, 1)
                * lin(n, 13, 14, 4),
        ),
        (4, false) => q(
            p(n, &[15, 21, 7]) * p(n, &M4P),
            BigInt::from(28) * lin(n, 1, 1, 4) * lin(n, 6, 7, 4) * lin(n, 8, 7, 4) * lin(n, 11, 7, 1) * lin(n, 23, 21, 4),
        ),
        (4, true) => q(
            lin(n, 11, 7, 1) * p(n, &M4PP),
            BigInt::from(448) * lin(n, 1, 1, 4) * lin(n, 10, 7, 4) * lin(n, 23, 21, 4) * p(n, &[15, 21, 7]),
        ),
        _ => panic!("no series term {i}"),
    }
}

/// `F_{n,i}`: the order ledger of one component of `B_{n,i}`.
pub fn f_term(n: u64, i: usize) -> Rational {
    match i {
        1 if n == 0 => Rational::new(281.into(), 32256.into()),
        1 => q(
            BigInt::from(3) * p(n, &[1, 7, 7]).pow(2),
            BigInt::from(2)
                * BigInt::from(n).pow(2)
                * lin(n, 1, 3, 1)
                * lin(n, -1, 7, 1)
                * lin(n, 1, 7, 1)
                * lin(n, 2, 7, 1)
                * lin(n, 3, 7, 2)
                * lin(n, 4, 7, 1)
                * lin(n, 2, 21, 1),
        ),
        2 if n == 0 => Rational::new(5.into(), 3584.into()),
        2 => q(
            lin(n, 1, 1, 1),
            BigInt::from(112) * BigInt::from(n) * lin(n, 1, 2, 1) * lin(n, 1, 3, 1) * lin(n, 2, 7, 1) * lin(n, 3, 7, 2) * lin(n, 4, 7, 1),
        ),
        3 => q(
            BigInt::from(15) * p(n, &[6, 14, 7]).pow(2),
            BigInt::from(4)
                * lin(n, 1, 1, 2)
                * lin(n, 1, 2, 1)
                * lin(n, 2, 7, 1)
                * lin(n, 3, 7, 2)
                * lin(n, 4, 7, 1)
                * lin(n, 6, 7, 1)
                * lin(n, 8, 7, 1)
                * lin(n, 13, 14, 1),
        ),
        4 => q(
            lin(n, 11, 7, 2),
            BigInt::from(112)
                * lin(n, 1, 1, 2)
                * lin(n, 3, 7, 1)
                * lin(n, 6, 7, 1)
                * lin(n, 8, 7, 1)
                * lin(n, 10, 7, 1)
                * lin(n, 13, 14, 1)
                * lin(n, 23, 21, 1),
        ),
        _ => panic!("no series term {i}"),
    }
}
