//! Reference values from independent high-precision evaluations
//! (40-digit arbitrary precision, dense scans refined by local search).

#![allow(clippy::excessive_precision, clippy::type_complexity)]

/// `erf(x + iy)` as `((x, y), (re, im))`.
pub const CERF: &[((f64, f64), (f64, f64))] = &[
    (
        (0.5, 0.5),
        (0.642_612_914_854_820_5, 0.457_881_394_435_192_2),
    ),
    (
        (2.0, 1.0),
        (1.003_606_342_725_651_8, -0.011_259_006_028_815_025),
    ),
    (
        (-1.0, 2.5),
        (40.306_200_856_366_216, -6.412_103_948_446_194),
    ),
    (
        (3.5, -1.0),
        (0.999_998_907_191_266_9, -1.621_721_334_522_887_4e-6),
    ),
    (
        (0.1, 11.5),
        (9.986_377_100_539_542e55, -8.766_529_451_069_069e55),
    ),
    (
        (5.0, 5.0),
        (0.930_379_603_743_095_1, 0.038_936_190_895_121_38),
    ),
    (
        (1.0, -12.0),
        (-5.603_865_011_168_421e60, -2.073_132_170_417_557_7e60),
    ),
    (
        (2.9, 0.3),
        (1.000_011_632_501_050_4, 4.325_036_278_196_648_8e-5),
    ),
];

/// `Re[erf(α + iβ)] e^{-β²}` as `(α, β, value)`.
pub const SCALED_ERF_RE: &[(f64, f64, f64)] = &[
    (
        1.060_660_171_779_821_2,
        4.242_640_687_119_285,
        0.027_100_826_639_788_32,
    ),
    (0.5, 2.0, 0.253_488_179_715_605_86),
    (2.0, 0.5, 0.781_528_332_906_104_2),
    (1e-6, 3.0, 1.128_379_167_088_366_1e-6),
    (1e-3, 50.0, 0.001_126_499_100_243_903_4),
    (3.0, 7.0, -6.255_214_697_814_411e-6),
    (0.3, 200.0, 0.001_493_770_653_860_985_7),
    (0.05, 26.0, 0.011_202_220_797_226_053),
    (1.2, 12.0, -0.004_588_833_326_469_538),
    (4.0, 4.0, 1.101_212_089_156_138_9e-7),
    (0.01, 0.01, 0.011_283_415_480_628_853),
    (2.5, 1.5, 0.105_450_281_482_390_98),
    (6.0, 10.0, 8.510_994_037_603_599e-19),
];

/// Minimum of the projected WF (σ = 1, a = 3) on the default 301×351 grid
/// over `q ∈ [-1.5, 1.5]`, `p ∈ [1.5, 5]`.
pub const FIG1_MIN_301X351: f64 = -0.212_083_702_390_238_6;
/// Same scan on 601×701.
pub const FIG1_MIN_601X701: f64 = -0.212_093_737_356_091_4;
/// Minimum of the continuous function and its location `(|q|, p)`.
pub const FIG1_MIN_CONTINUUM: f64 = -0.212_096_847_206_204_17;
pub const FIG1_ARGMIN_CONTINUUM: (f64, f64) = (0.392_690_61, 2.168_626_87);

/// `erf(3/(2√2))`: probability of `|x| <= 1.5` for the σ = 1 Gaussian.
pub const WINDOW_PROBABILITY: f64 = 0.866_385_597_462_283_9;
/// `∫_{-1.5}^{1.5} x² e^{-x²/2}/√(2π) dx`.
pub const WINDOW_SECOND_MOMENT: f64 = 0.477_832_810_464_608_7;
/// Naive truncation at σ = 1, a = 3.
pub const TRUNCATED_VAR_Q: f64 = 0.551_524_415_761_551_3;
pub const TRUNCATED_PRODUCT: f64 = 0.137_881_103_940_387_8;
pub const TRUNCATION_FACTOR: f64 = 1.154_220_479_806_086_3;

/// `max |W' - θ W_G|` on the default 301×351 grid, attained at
/// `(q, p) = (-0.87, 1.5)`.
pub const NONFACTOR_GAP_301X351: f64 = 0.376_880_535_215_655_45;
/// Lower bound asserted on the non-factorization gap.
pub const NONFACTOR_MARGIN: f64 = 0.1;
