// Inputs of the PPM golden images. Points are built from exact arithmetic
// only, so the images do not depend on libm.

fn golden_points() -> Vec<Vec<ratdyn::ExtComplex>> {
    use ratdyn::{ExtComplex, C64};
    let cycle: Vec<ExtComplex> = ratdyn::presets::PERIOD_5_POINTS
        .iter()
        .map(|&(re, im)| ExtComplex::Finite(C64::new(re, im)))
        .collect();
    let curve: Vec<ExtComplex> = (0..400)
        .map(|k| {
            let t = k as f64 / 400.0;
            ExtComplex::Finite(C64::new(4.0 * t - 1.0, ((k * k) % 97) as f64 / 97.0 * 3.0 - 1.5))
        })
        .collect();
    let mixed = vec![
        ExtComplex::Infinity,
        ExtComplex::Finite(C64::new(-1.25, 2.5)),
        ExtComplex::Finite(C64::new(100.0, 0.0)),
    ];
    vec![cycle, curve, mixed]
}

fn golden_specs() -> Vec<(&'static str, ratdyn::render::PlotSpec)> {
    use ratdyn::render::{PlotSpec, PointStyle, Rect, Viewport};
    vec![
        (
            "auto_pixel_64x48.ppm",
            PlotSpec {
                width: 64,
                height: 48,
                viewport: Viewport::Auto,
                point_style: PointStyle::Pixel,
            },
        ),
        (
            "fixed_square3_40x40.ppm",
            PlotSpec {
                width: 40,
                height: 40,
                viewport: Viewport::Fixed(Rect {
                    re_min: -2.0,
                    re_max: 4.0,
                    im_min: -3.0,
                    im_max: 3.0,
                }),
                point_style: PointStyle::Square3,
            },
        ),
    ]
}
