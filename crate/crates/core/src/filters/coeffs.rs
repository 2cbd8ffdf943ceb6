//! Embedded filter coefficients. Analysis taps are correlation taps (applied
//! without a flip); synthesis taps are stored time-reversed, so for the
//! orthogonal family `REC_*` is the reversal of `DEC_*`. Cohen filters keep
//! a common origin and are zero-padded to be exactly (anti)symmetric.

// Tabulated values, kept verbatim rather than rewritten as named constants.
#![allow(clippy::approx_constant)]

pub(super) const HAAR_DEC_LO: [f64; 2] = [
    0.7071067811865476,
    0.7071067811865476,
];
pub(super) const HAAR_DEC_HI: [f64; 2] = [
    0.7071067811865476,
    -0.7071067811865476,
];
pub(super) const HAAR_REC_LO: [f64; 2] = [
    0.7071067811865476,
    0.7071067811865476,
];
pub(super) const HAAR_REC_HI: [f64; 2] = [
    -0.7071067811865476,
    0.7071067811865476,
];
pub(super) const DB2_DEC_LO: [f64; 4] = [
    0.48296291314453416,
    0.8365163037378079,
    0.2241438680420134,
    -0.12940952255126037,
];
pub(super) const DB2_DEC_HI: [f64; 4] = [
    -0.12940952255126037,
    -0.2241438680420134,
    0.8365163037378079,
    -0.48296291314453416,
];
pub(super) const DB2_REC_LO: [f64; 4] = [
    -0.12940952255126037,
    0.2241438680420134,
    0.8365163037378079,
    0.48296291314453416,
];
pub(super) const DB2_REC_HI: [f64; 4] = [
    -0.48296291314453416,
    0.8365163037378079,
    -0.2241438680420134,
    -0.12940952255126037,
];
pub(super) const DB3_DEC_LO: [f64; 6] = [
    0.33267055295008263,
    0.8068915093110925,
    0.45987750211849154,
    -0.13501102001025458,
    -0.08544127388202666,
    0.03522629188570953,
];
pub(super) const DB3_DEC_HI: [f64; 6] = [
    0.03522629188570953,
    0.08544127388202666,
    -0.13501102001025458,
    -0.45987750211849154,
    0.8068915093110925,
    -0.33267055295008263,
];
pub(super) const DB3_REC_LO: [f64; 6] = [
    0.03522629188570953,
    -0.08544127388202666,
    -0.13501102001025458,
    0.45987750211849154,
    0.8068915093110925,
    0.33267055295008263,
];
pub(super) const DB3_REC_HI: [f64; 6] = [
    -0.33267055295008263,
    0.8068915093110925,
    -0.45987750211849154,
    -0.13501102001025458,
    0.08544127388202666,
    0.03522629188570953,
];
pub(super) const DB4_DEC_LO: [f64; 8] = [
    0.2303778133088965,
    0.7148465705529157,
    0.6308807679298589,
    -0.027983769416859854,
    -0.18703481171909309,
    0.030841381835560764,
    0.0328830116668852,
    -0.010597401785069032,
];
pub(super) const DB4_DEC_HI: [f64; 8] = [
    -0.010597401785069032,
    -0.0328830116668852,
    0.030841381835560764,
    0.18703481171909309,
    -0.027983769416859854,
    -0.6308807679298589,
    0.7148465705529157,
    -0.2303778133088965,
];
pub(super) const DB4_REC_LO: [f64; 8] = [
    -0.010597401785069032,
    0.0328830116668852,
    0.030841381835560764,
    -0.18703481171909309,
    -0.027983769416859854,
    0.6308807679298589,
    0.7148465705529157,
    0.2303778133088965,
];
pub(super) const DB4_REC_HI: [f64; 8] = [
    -0.2303778133088965,
    0.7148465705529157,
    -0.6308807679298589,
    -0.027983769416859854,
    0.18703481171909309,
    0.030841381835560764,
    -0.0328830116668852,
    -0.010597401785069032,
];
pub(super) const DB5_DEC_LO: [f64; 10] = [
    0.16010239797419293,
    0.6038292697971896,
    0.7243085284377729,
    0.13842814590132074,
    -0.24229488706638203,
    -0.032244869584638375,
    0.07757149384004572,
    -0.006241490212798274,
    -0.012580751999081999,
    0.0033357252854737712,
];
pub(super) const DB5_DEC_HI: [f64; 10] = [
    0.0033357252854737712,
    0.012580751999081999,
    -0.006241490212798274,
    -0.07757149384004572,
    -0.032244869584638375,
    0.24229488706638203,
    0.13842814590132074,
    -0.7243085284377729,
    0.6038292697971896,
    -0.16010239797419293,
];
pub(super) const DB5_REC_LO: [f64; 10] = [
    0.0033357252854737712,
    -0.012580751999081999,
    -0.006241490212798274,
    0.07757149384004572,
    -0.032244869584638375,
    -0.24229488706638203,
    0.13842814590132074,
    0.7243085284377729,
    0.6038292697971896,
    0.16010239797419293,
];
pub(super) const DB5_REC_HI: [f64; 10] = [
    -0.16010239797419293,
    0.6038292697971896,
    -0.7243085284377729,
    0.13842814590132074,
    0.24229488706638203,
    -0.032244869584638375,
    -0.07757149384004572,
    -0.006241490212798274,
    0.012580751999081999,
    0.0033357252854737712,
];
pub(super) const DB6_DEC_LO: [f64; 12] = [
    0.11154074335010947,
    0.49462389039845306,
    0.7511339080210954,
    0.31525035170919763,
    -0.22626469396543983,
    -0.12976686756726194,
    0.09750160558732304,
    0.027522865530305727,
    -0.03158203931748603,
    0.0005538422011614961,
    0.004777257510945511,
    -0.0010773010853084796,
];
pub(super) const DB6_DEC_HI: [f64; 12] = [
    -0.0010773010853084796,
    -0.004777257510945511,
    0.0005538422011614961,
    0.03158203931748603,
    0.027522865530305727,
    -0.09750160558732304,
    -0.12976686756726194,
    0.22626469396543983,
    0.31525035170919763,
    -0.7511339080210954,
    0.49462389039845306,
    -0.11154074335010947,
];
pub(super) const DB6_REC_LO: [f64; 12] = [
    -0.0010773010853084796,
    0.004777257510945511,
    0.0005538422011614961,
    -0.03158203931748603,
    0.027522865530305727,
    0.09750160558732304,
    -0.12976686756726194,
    -0.22626469396543983,
    0.31525035170919763,
    0.7511339080210954,
    0.49462389039845306,
    0.11154074335010947,
];
pub(super) const DB6_REC_HI: [f64; 12] = [
    -0.11154074335010947,
    0.49462389039845306,
    -0.7511339080210954,
    0.31525035170919763,
    0.22626469396543983,
    -0.12976686756726194,
    -0.09750160558732304,
    0.027522865530305727,
    0.03158203931748603,
    0.0005538422011614961,
    -0.004777257510945511,
    -0.0010773010853084796,
];
pub(super) const CH2_2_DEC_LO: [f64; 5] = [
    -0.1767766952966369,
    0.3535533905932738,
    1.0606601717798212,
    0.3535533905932738,
    -0.1767766952966369,
];
pub(super) const CH2_2_DEC_HI: [f64; 7] = [
    0.0,
    0.0,
    0.3535533905932738,
    -0.7071067811865476,
    0.3535533905932738,
    0.0,
    0.0,
];
pub(super) const CH2_2_REC_LO: [f64; 5] = [
    0.0,
    0.3535533905932738,
    0.7071067811865476,
    0.3535533905932738,
    0.0,
];
pub(super) const CH2_2_REC_HI: [f64; 7] = [
    0.0,
    0.1767766952966369,
    0.3535533905932738,
    -1.0606601717798212,
    0.3535533905932738,
    0.1767766952966369,
    0.0,
];
pub(super) const CH3_3_DEC_LO: [f64; 8] = [
    0.06629126073623882,
    -0.1988737822087165,
    -0.15467960838455727,
    0.9943689110435825,
    0.9943689110435825,
    -0.15467960838455727,
    -0.1988737822087165,
    0.06629126073623882,
];
pub(super) const CH3_3_DEC_HI: [f64; 8] = [
    0.0,
    0.0,
    0.1767766952966369,
    -0.5303300858899106,
    0.5303300858899106,
    -0.1767766952966369,
    0.0,
    0.0,
];
pub(super) const CH3_3_REC_LO: [f64; 8] = [
    0.0,
    0.0,
    0.1767766952966369,
    0.5303300858899106,
    0.5303300858899106,
    0.1767766952966369,
    0.0,
    0.0,
];
pub(super) const CH3_3_REC_HI: [f64; 8] = [
    -0.06629126073623882,
    -0.1988737822087165,
    0.15467960838455727,
    0.9943689110435825,
    -0.9943689110435825,
    -0.15467960838455727,
    0.1988737822087165,
    0.06629126073623882,
];
pub(super) const CH4_4_DEC_LO: [f64; 9] = [
    0.03782845550726404,
    -0.023849465019556843,
    -0.11062440441843718,
    0.37740285561283066,
    0.8526986790088938,
    0.37740285561283066,
    -0.11062440441843718,
    -0.023849465019556843,
    0.03782845550726404,
];
pub(super) const CH4_4_DEC_HI: [f64; 11] = [
    0.0,
    0.0,
    -0.06453888262869706,
    0.04068941760916406,
    0.41809227322161724,
    -0.7884856164055829,
    0.41809227322161724,
    0.04068941760916406,
    -0.06453888262869706,
    0.0,
    0.0,
];
pub(super) const CH4_4_REC_LO: [f64; 9] = [
    0.0,
    -0.06453888262869706,
    -0.04068941760916406,
    0.41809227322161724,
    0.7884856164055829,
    0.41809227322161724,
    -0.04068941760916406,
    -0.06453888262869706,
    0.0,
];
pub(super) const CH4_4_REC_HI: [f64; 11] = [
    0.0,
    -0.03782845550726404,
    -0.023849465019556843,
    0.11062440441843718,
    0.37740285561283066,
    -0.8526986790088938,
    0.37740285561283066,
    0.11062440441843718,
    -0.023849465019556843,
    -0.03782845550726404,
    0.0,
];
pub(super) const CH5_5_DEC_LO: [f64; 11] = [
    0.0,
    0.03968708834740544,
    0.007948108637240322,
    -0.05446378846823691,
    0.34560528195603346,
    0.7366601814282105,
    0.34560528195603346,
    -0.05446378846823691,
    0.007948108637240322,
    0.03968708834740544,
    0.0,
];
pub(super) const CH5_5_DEC_HI: [f64; 13] = [
    0.0,
    -0.013456709459118716,
    -0.002694966880111507,
    0.13670658466432914,
    -0.09350469740093886,
    -0.47680326579848425,
    0.8995061097486484,
    -0.47680326579848425,
    -0.09350469740093886,
    0.13670658466432914,
    -0.002694966880111507,
    -0.013456709459118716,
    0.0,
];
pub(super) const CH5_5_REC_LO: [f64; 11] = [
    0.013456709459118716,
    -0.002694966880111507,
    -0.13670658466432914,
    -0.09350469740093886,
    0.47680326579848425,
    0.8995061097486484,
    0.47680326579848425,
    -0.09350469740093886,
    -0.13670658466432914,
    -0.002694966880111507,
    0.013456709459118716,
];
pub(super) const CH5_5_REC_HI: [f64; 13] = [
    0.0,
    0.0,
    0.03968708834740544,
    -0.007948108637240322,
    -0.05446378846823691,
    -0.34560528195603346,
    0.7366601814282105,
    -0.34560528195603346,
    -0.05446378846823691,
    -0.007948108637240322,
    0.03968708834740544,
    0.0,
    0.0,
];
