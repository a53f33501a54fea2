//! CSV/JSON round-trips and PPM golden images.

use std::path::PathBuf;

use proptest::prelude::*;
use ratdyn::chaos::{chaos_report, ChaosReport, ChaosSettings};
use ratdyn::cycles::{detect_cycle, CycleRecord};
use ratdyn::fixed_points::{fixed_points, FixedPointSet};
use ratdyn::io::{from_json, read_points_csv, to_json, write_orbit_csv, write_points_csv};
use ratdyn::orbit::{iterate_orbit, Orbit, OrbitSettings};
use ratdyn::presets;
use ratdyn::render::{rasterize, render_scatter, sidecar_path, PlotSidecar};
use ratdyn::{ExtComplex, MapParams, C64};

include!("golden/recipe.rs");

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn point() -> impl Strategy<Value = ExtComplex> {
    prop_oneof![
        1 => Just(ExtComplex::Infinity),
        8 => (-1e149..1e149f64, -1e149..1e149f64).prop_map(|(re, im)| ExtComplex::Finite(C64::new(re, im))),
        4 => (-10.0..10.0f64, -10.0..10.0f64).prop_map(|(re, im)| ExtComplex::Finite(C64::new(re, im))),
        1 => (-1e-300..1e-300f64).prop_map(|re| ExtComplex::Finite(C64::new(re, -0.0))),
    ]
}

fn params() -> impl Strategy<Value = MapParams> {
    prop::array::uniform8(-3.0..3.0f64)
        .prop_filter_map("gamma must be nonzero", |v| {
            MapParams::from_parts([(v[0], v[1]), (v[2], v[3]), (v[4], v[5]), (v[6], v[7])]).ok()
        })
}

proptest! {
    #[test]
    fn points_csv_round_trip(pts in prop::collection::vec(point(), 0..50)) {
        let indexed: Vec<(usize, ExtComplex)> = pts.into_iter().enumerate().map(|(k, z)| (3 * k, z)).collect();
        let mut buf = Vec::new();
        write_points_csv(&indexed, &mut buf).unwrap();
        prop_assert_eq!(read_points_csv(buf.as_slice()).unwrap(), indexed);
    }

    #[test]
    fn points_json_round_trip(pts in prop::collection::vec(point(), 0..50)) {
        prop_assert_eq!(from_json::<Vec<ExtComplex>>(&to_json(&pts).unwrap()).unwrap(), pts);
    }

    #[test]
    fn params_round_trip(p in params()) {
        prop_assert_eq!(from_json::<MapParams>(&to_json(&p).unwrap()).unwrap(), p);
        prop_assert_eq!(p.to_string().parse::<MapParams>().unwrap(), p);
    }

    #[test]
    fn fixed_point_set_round_trip(p in params()) {
        let set = fixed_points(&p).unwrap();
        prop_assert_eq!(from_json::<FixedPointSet>(&to_json(&set).unwrap()).unwrap(), set);
    }
}

#[test]
fn orbit_csv_and_json_round_trip() {
    let settings = OrbitSettings {
        max_iter: 200_000,
        ..Default::default()
    };
    let orbit = iterate_orbit(&presets::slow_convergence(), ExtComplex::Finite(C64::new(-1.0, 0.5)), &settings).unwrap();
    assert!(orbit.stride > 1, "exercise the decimated record");
    let mut buf = Vec::new();
    write_orbit_csv(&orbit, &mut buf).unwrap();
    assert_eq!(read_points_csv(buf.as_slice()).unwrap(), orbit.samples());
    assert_eq!(from_json::<Orbit>(&to_json(&orbit).unwrap()).unwrap(), orbit);

    let pole = iterate_orbit(&presets::slow_convergence(), ratdyn::ext::ZERO, &OrbitSettings::default()).unwrap();
    assert!(pole.samples().iter().any(|(_, z)| z.is_infinite()));
    let mut buf = Vec::new();
    write_orbit_csv(&pole, &mut buf).unwrap();
    assert!(String::from_utf8(buf.clone()).unwrap().contains("inf,inf"));
    assert_eq!(read_points_csv(buf.as_slice()).unwrap(), pole.samples());
}

#[test]
fn cycle_and_chaos_reports_round_trip() {
    let p = presets::period_5();
    let rec = detect_cycle(&p, ExtComplex::Finite(C64::new(0.3, 0.1)), 10_000, 1024, 1e-8).unwrap();
    assert_eq!(from_json::<CycleRecord>(&to_json(&rec).unwrap()).unwrap(), rec);
    let report = chaos_report(&presets::chaotic_rows()[2], &ChaosSettings::default());
    assert!(report.box_fit.is_some());
    assert_eq!(from_json::<ChaosReport>(&to_json(&report).unwrap()).unwrap(), report);
}

#[test]
fn csv_rejects_malformed_rows() {
    assert!(read_points_csv("n,re,im\n0,1.0\n".as_bytes()).is_err());
    assert!(read_points_csv("n,re,im\nx,1.0,2.0\n".as_bytes()).is_err());
    assert!(read_points_csv("n,re,im\n0,1.0,abc\n".as_bytes()).is_err());
}

/// Set RATDYN_BLESS=1 to rewrite the golden images after an intended change.
#[test]
fn ppm_goldens_are_bit_identical() {
    let bless = std::env::var_os("RATDYN_BLESS").is_some();
    for (name, spec) in golden_specs() {
        let (img, _) = rasterize(&golden_points(), &spec).unwrap();
        let ppm = img.to_ppm();
        let path = golden_dir().join(name);
        if bless {
            std::fs::write(&path, &ppm).unwrap();
        }
        let golden = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(golden == ppm, "{name} differs from its golden image");
    }
}

#[test]
fn golden_pixels_match_hand_computation() {
    // fixed viewport [-2, 4] x [-3, 3] on 40x40: -1.25+2.5i maps to column
    // floor(0.75/6 * 40) = 5 and row floor(0.5/6 * 40) = 3
    let ppm = std::fs::read(golden_dir().join("fixed_square3_40x40.ppm")).unwrap();
    let header = b"P6\n40 40\n255\n";
    assert!(ppm.starts_with(header));
    let px = |x: usize, y: usize| {
        let i = header.len() + 3 * (40 * y + x);
        [ppm[i], ppm[i + 1], ppm[i + 2]]
    };
    for dy in 0..3 {
        for dx in 0..3 {
            assert_eq!(px(4 + dx, 2 + dy), ratdyn::render::PALETTE[2]);
        }
    }
    assert_eq!(px(0, 39), [255, 255, 255]);
}

#[test]
fn render_scatter_writes_image_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golden.ppm");
    let (name, spec) = golden_specs().remove(1);
    let side = render_scatter(&golden_points(), &spec, &path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(golden_dir().join(name)).unwrap());
    let back: PlotSidecar = from_json(&std::fs::read_to_string(sidecar_path(&path)).unwrap()).unwrap();
    assert_eq!(back, side);
    assert_eq!(side.dropped_infinite, 1);
    // 100+0i is outside the fixed viewport, as are parts of the curve
    assert!(side.clipped >= 1);
    assert_eq!(side.per_seed_counts.iter().sum::<usize>() + side.clipped + side.dropped_infinite, 5 + 400 + 3);
}

#[test]
fn period_five_tail_renders_five_clusters() {
    let p = presets::period_5();
    let tail = ratdyn::orbit::trajectory(&p, ExtComplex::Finite(C64::new(0.3, 0.1)), 5_000, 1_000);
    let spec = ratdyn::render::PlotSpec {
        width: 200,
        height: 200,
        ..Default::default()
    };
    let (img, _) = rasterize(&[tail], &spec).unwrap();
    // the lit pixels of an attracting 5-cycle form five isolated spots
    let lit: Vec<(usize, usize)> = (0..200)
        .flat_map(|y| (0..200).map(move |x| (x, y)))
        .filter(|&(x, y)| img.pixel(x, y) != [255, 255, 255])
        .collect();
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    for (x, y) in lit {
        if !clusters.iter().any(|&(cx, cy)| cx.abs_diff(x) <= 2 && cy.abs_diff(y) <= 2) {
            clusters.push((x, y));
        }
    }
    assert_eq!(clusters.len(), 5);
}
