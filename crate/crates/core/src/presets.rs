//! Named parameter sets with well-documented behaviour, used by the tests,
//! the benches and the CLI `--preset` flag.

use crate::ext::C64;
use crate::plane_map::MapParams;

fn p(parts: [(f64, f64); 4]) -> MapParams {
    MapParams::from_parts(parts).expect("preset parameters are valid")
}

/// Source at −0.708428+0.171918i and a barely attracting fixed point at
/// 1.1079−0.305049i (|f′| ≈ 0.99976); orbits converge in ~10⁵ steps.
pub fn slow_convergence() -> MapParams {
    p([
        (0.92735, 0.9174938),
        (0.713574, 0.618337),
        (0.343287, 0.9360273),
        (0.124774, 0.7305853),
    ])
}

/// Sink at 0.515402−0.0307232i with |f′| ≈ 0.991066; orbits converge in ~10³ steps.
pub fn fast_convergence() -> MapParams {
    p([
        (0.27481, 0.24150174),
        (0.243145, 0.154159),
        (0.956416, 0.935661),
        (0.818714, 0.728261),
    ])
}

/// Real-line theory predicts convergence to zero; in ℂ every orbit escapes.
pub fn convergence_criterion() -> MapParams {
    p([
        (0.27481, 0.241501),
        (1.2431, 0.1542),
        (0.956416, 0.935661),
        (0.818714, 0.728261),
    ])
}

/// Real-line theory predicts divergence; orbits do diverge.
pub fn divergence_criterion() -> MapParams {
    p([
        (0.917193, 0.2858390),
        (1.13764, 1.32155),
        (0.993047, 0.33978),
        (0.7572, 0.753729),
    ])
}

/// |α+β| = |γ+δ| to four digits; real-line theory predicts constant orbits.
pub fn constancy_criterion() -> MapParams {
    p([
        (0.9172, 0.2858),
        (1.1376, 1.3216),
        (3.1376, 1.3216),
        (-1.0828, 0.2858),
    ])
}

/// γ = β, δ = α with an attracting 5-cycle.
pub fn period_5() -> MapParams {
    let a = C64::new(0.655098003973841, 0.162611735194631);
    let b = C64::new(0.118997681558377, 0.498364051982143);
    MapParams::new(a, b, b, a).expect("valid")
}

pub const PERIOD_5_POINTS: [(f64, f64); 5] = [
    (0.14044571, -0.62692799),
    (0.02078534, 0.517795),
    (2.994135, -1.828805),
    (0.27873451, -0.0515247),
    (1.8686505, 1.9830857),
];

pub fn period_8() -> MapParams {
    p([(0.1909, 0.4283), (0.4820, 0.1206), (0.5895, 0.2262), (0.3846, 0.5830)])
}

pub const PERIOD_8_POINTS: [(f64, f64); 8] = [
    (0.1245073, 0.0238456),
    (3.7977682, -3.81535),
    (0.0328615, 0.1531786),
    (-1.76641, -3.292791),
    (-0.296000, 0.07258225),
    (-1.224311, 1.8140937),
    (0.08601284, -0.129181),
    (4.8712818, 1.8954348),
];

pub fn period_13() -> MapParams {
    p([(0.1557, 0.8190), (0.6249, 0.7386), (0.8051, 0.0672), (0.9508, 0.4976)])
}

pub const PERIOD_13_POINTS: [(f64, f64); 13] = [
    (0.4995, -1.9204),
    (-0.4405, 0.5198),
    (-0.2696, -0.6103),
    (-1.6184, 1.5608),
    (0.1910, -0.1647),
    (1.3640, 3.7100),
    (0.2073, -0.0035),
    (3.7982, 2.2357),
    (0.1717, 0.1174),
    (4.0798, -0.3778),
    (0.0933, 0.2274),
    (2.4590, -2.0608),
    (-0.0609, 0.3453),
];

pub fn period_21() -> MapParams {
    p([(0.6228, 0.7966), (0.7459, 0.1255), (0.8224, 0.0252), (0.4144, 0.7314)])
}

pub const PERIOD_21_POINTS: [(f64, f64); 21] = [
    (0.1508, -0.2674),
    (4.2660, 1.6796),
    (0.2370, 0.0609),
    (2.6997, -2.6189),
    (0.0772, 0.3937),
    (-0.3141, -1.3571),
    (-2.2634, 2.1519),
    (0.0920, -0.2518),
    (4.6679, 2.2400),
    (0.2107, 0.0451),
    (3.0966, -2.9892),
    (0.0554, 0.3390),
    (-0.5706, -1.5730),
    (-2.0809, 0.6391),
    (0.1141, -0.3835),
    (3.5201, 2.3141),
    (0.2519, 0.0117),
    (3.2825, -2.0879),
    (0.1469, 0.3346),
    (-0.0137, -1.7473),
    (-0.8858, 1.3368),
];

/// The four chaotic parameter sets of the reference table, top row first.
/// Rows 1 and 4 have signature (<, <, <), rows 2 and 3 (>, >, >).
pub fn chaotic_rows() -> [MapParams; 4] {
    [
        p([(0.6849, 0.2083), (0.6082, 0.3262), (0.8808, 0.1334), (0.1024, 0.9591)]),
        p([(0.8491, 0.9340), (0.6787, 0.7577), (0.7431, 0.3922), (0.6555, 0.1712)]),
        p([(0.9322, 0.8351), (0.8954, 0.5825), (0.5827, 0.8549), (0.0349, 0.8854)]),
        p([(0.5078, 0.5856), (0.7629, 0.0830), (0.6616, 0.5170), (0.1710, 0.9386)]),
    ]
}

/// Published largest Lyapunov exponents for [`chaotic_rows`] (method-specific).
pub const CHAOTIC_ROWS_LYAPUNOV: [f64; 4] = [1.3342, 1.4765, 1.6225, 1.4872];

/// Published box dimensions for rows 2 and 3 of [`chaotic_rows`].
pub const CHAOTIC_ROWS_DIMENSION: [Option<f64>; 4] = [None, Some(1.3435), Some(1.4235), None];

/// γ = β, δ = α with chaotic orbits.
pub fn case_d_chaotic() -> MapParams {
    p([(28.0, 68.0), (66.0, 17.0), (66.0, 17.0), (28.0, 68.0)])
}

/// Parameters with a fixed point of very small multiplier.
pub fn tiny_multiplier() -> MapParams {
    p([
        (0.816885, -0.0738146),
        (-0.0245487, 0.0678909),
        (-0.360452, -0.788031),
        (1.89324, 0.104191),
    ])
}

/// Parameters with a fixed point of very large multiplier.
pub fn huge_multiplier() -> MapParams {
    p([
        (-0.0000775242, -0.0000567123),
        (-1.66869, 0.581375),
        (1.33603e-6, -6.20472e-7),
        (-5.94147, -1.73645),
    ])
}

/// `f(z) = 1/z²`: angle doubling on the unit circle.
pub fn inverse_square() -> MapParams {
    p([(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])
}

/// Looks up a preset by its CLI name.
pub fn by_name(name: &str) -> Option<MapParams> {
    let rows = chaotic_rows();
    Some(match name {
        "slow-convergence" => slow_convergence(),
        "fast-convergence" => fast_convergence(),
        "convergence-criterion" => convergence_criterion(),
        "divergence-criterion" => divergence_criterion(),
        "constancy-criterion" => constancy_criterion(),
        "period-5" => period_5(),
        "period-8" => period_8(),
        "period-13" => period_13(),
        "period-21" => period_21(),
        "chaotic-1" => rows[0],
        "chaotic-2" => rows[1],
        "chaotic-3" => rows[2],
        "chaotic-4" => rows[3],
        "case-d-chaotic" => case_d_chaotic(),
        "tiny-multiplier" => tiny_multiplier(),
        "huge-multiplier" => huge_multiplier(),
        "inverse-square" => inverse_square(),
        _ => return None,
    })
}

pub const NAMES: [&str; 17] = [
    "slow-convergence",
    "fast-convergence",
    "convergence-criterion",
    "divergence-criterion",
    "constancy-criterion",
    "period-5",
    "period-8",
    "period-13",
    "period-21",
    "chaotic-1",
    "chaotic-2",
    "chaotic-3",
    "chaotic-4",
    "case-d-chaotic",
    "tiny-multiplier",
    "huge-multiplier",
    "inverse-square",
];

/// Converts a published point list to complex values.
pub fn points(list: &[(f64, f64)]) -> Vec<C64> {
    list.iter().map(|&(re, im)| C64::new(re, im)).collect()
}
