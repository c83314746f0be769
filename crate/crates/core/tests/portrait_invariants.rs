//! Portrait-level behavior pinned against the eigenstructure.

use ethos::dynamics::{
    build_psi, build_three_player, build_two_player, eigen, CarlInfluence, CouplingParams,
    IntegrationMethod, TwoPlayerVariant,
};
use ethos::portrait::{render_portrait, PortraitSpec};

const IC_2D: [[f64; 2]; 8] = [
    [-2.0, -2.0],
    [2.0, 2.0],
    [-2.0, 2.0],
    [2.0, -2.0],
    [0.5, -1.0],
    [-1.0, 0.5],
    [1.0, -0.5],
    [-0.5, 1.0],
];

/// With a real positive leading eigenvalue, every trajectory's final
/// segment lines up with the dominant eigenvector to within 5 degrees.
#[test]
fn saddle_flow_aligns_with_dominant_eigenvector() {
    let p = CouplingParams::two_player(2.0, 1.0, -1.0, -2.0);
    let s = build_two_player(&p, TwoPlayerVariant::EthicalBobCrookAlice).unwrap();
    let pairs = eigen(&s);
    let dominant = &pairs[0];
    assert!(dominant.value.im == 0.0 && dominant.value.re > 0.0);
    let ev = [dominant.vector[0].re, dominant.vector[1].re];

    let spec = PortraitSpec::with_defaults(s, IC_2D.iter().map(|ic| ic.to_vec()).collect());
    let r = render_portrait(&spec).unwrap();
    assert!(r.overflowed.is_empty());
    for t in &r.trajectories {
        let n = t.states.len();
        let seg = [
            t.states[n - 1][0] - t.states[n - 2][0],
            t.states[n - 1][1] - t.states[n - 2][1],
        ];
        let seg_norm = (seg[0] * seg[0] + seg[1] * seg[1]).sqrt();
        let cos = (seg[0] * ev[0] + seg[1] * ev[1]).abs() / seg_norm;
        let angle = cos.clamp(-1.0, 1.0).acos().to_degrees();
        assert!(angle <= 5.0, "final segment off by {angle} degrees");
    }
}

/// Center regime: after one period T = 2 pi / |Im lambda|, each RK4
/// trajectory comes back within 5% of its starting point.
#[test]
fn center_orbits_close_after_one_period() {
    let s = build_psi(1.0, 2.0).unwrap();
    let pairs = eigen(&s);
    let omega = pairs[0].value.im;
    assert!(omega > 0.0);
    let period = 2.0 * std::f64::consts::PI / omega;
    let dt = 1e-3;
    let steps = (period / dt).round() as usize;
    let spec = PortraitSpec {
        method: IntegrationMethod::Rk4,
        dt,
        steps,
        ..PortraitSpec::with_defaults(s, IC_2D.iter().map(|ic| ic.to_vec()).collect())
    };
    let r = render_portrait(&spec).unwrap();
    for (ic, t) in IC_2D.iter().zip(&r.trajectories) {
        let end = t.states.last().unwrap();
        let dist = ((end[0] - ic[0]).powi(2) + (end[1] - ic[1]).powi(2)).sqrt();
        let start_norm = (ic[0] * ic[0] + ic[1] * ic[1]).sqrt();
        assert!(dist <= 0.05 * start_norm, "loop gap {dist} from {ic:?}");
    }
}

/// 3D polyline points equal the camera projection of the CSV values
/// pushed through the same viewport map, to half a pixel.
#[test]
fn projected_polyline_matches_csv_values() {
    let mut p = CouplingParams::two_player(1.0, 2.0, 2.0, 1.0);
    p.gamma2 = Some(-3.0);
    p.gamma3 = Some(2.0);
    let s = build_three_player(&p, CarlInfluence::AliceOnly).unwrap();
    let spec = PortraitSpec {
        steps: 60,
        ..PortraitSpec::with_defaults(s, vec![vec![0.5, -0.5, 0.2]])
    };
    let r = render_portrait(&spec).unwrap();

    // Rebuild the projected-bounds viewport exactly as the renderer does.
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for c in 0..8u32 {
        let corner = [
            if c & 4 == 0 { -2.5 } else { 2.5 },
            if c & 2 == 0 { -2.5 } else { 2.5 },
            if c & 1 == 0 { -2.5 } else { 2.5 },
        ];
        let (x, y) = spec.camera.project(&corner);
        xmin = xmin.min(x);
        xmax = xmax.max(x);
        ymin = ymin.min(y);
        ymax = ymax.max(y);
    }
    let span = 800.0 - 2.0 * 40.0;

    let line = r.svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
    let attr = line
        .split("points=\"")
        .nth(1)
        .unwrap()
        .split('"')
        .next()
        .unwrap();
    let pts: Vec<(f64, f64)> = attr
        .split(' ')
        .map(|pair| {
            let mut it = pair.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    for (row, (px, py)) in r.csvs[0].lines().skip(1).zip(&pts) {
        let vals: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        let (wx, wy) = spec.camera.project(&vals[1..4]);
        let ex = 40.0 + (wx - xmin) / (xmax - xmin) * span;
        let ey = 800.0 - 40.0 - (wy - ymin) / (ymax - ymin) * span;
        assert!((px - ex).abs() <= 0.5, "{px} vs {ex}");
        assert!((py - ey).abs() <= 0.5, "{py} vs {ey}");
    }
}

/// Projection sanity: when the third player's state is frozen, the
/// pre-projection z column in every emitted CSV is constant.
#[test]
fn frozen_third_axis_is_constant_in_csv() {
    let mut p = CouplingParams::two_player(1.0, 2.0, 2.0, 1.0);
    p.gamma2 = Some(-3.0);
    p.gamma3 = Some(0.0);
    let s = build_three_player(&p, CarlInfluence::AliceOnly).unwrap();
    let ics = vec![
        vec![0.1, 0.1, 0.1],
        vec![0.5, -0.5, 0.2],
        vec![1.2, 1.4, 0.8],
    ];
    let spec = PortraitSpec::with_defaults(s, ics);
    let r = render_portrait(&spec).unwrap();
    for csv in &r.csvs {
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "t,U_B,U_A,E_C");
        let zs: Vec<&str> = lines.map(|l| l.rsplit(',').next().unwrap()).collect();
        assert!(!zs.is_empty());
        assert!(zs.iter().all(|z| z == &zs[0]), "z column drifted: {zs:?}");
    }
}
