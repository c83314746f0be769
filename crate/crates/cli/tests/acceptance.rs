//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (visible with `--nocapture`). Tolerances are pinned
//! in the assertions.
//!
//! Run with: cargo test -p ethos-cli --test acceptance -- --nocapture

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ethos::dynamics::{
    build_psi, build_two_player, classify_equilibrium, closed_form_solution, conserved_form, eigen,
    integrate, CouplingParams, EquilibriumKind, IntegrationMethod, LinearSystem, TwoPlayerVariant,
};
use ethos::games::{
    dominant_strategies, feb_transform, pure_nash_equilibria, OrdinalGame, Orientation,
};
use ethos::marker::{marker_curve, marker_value, MarkerParams};
use ethos::polytope::{
    and_vertices, combine, or_vertices, polytope_from_halfspaces, polytope_from_vertices,
    Halfspace, Point,
};
use ethos_cli::presets::registry;
use ethos_cli::scenario::{build_simulation_spec, execute, validate_scenario, ScenarioParams};

fn criterion(number: u32, description: &str, body: impl FnOnce() + UnwindSafe) {
    match catch_unwind(body) {
        Ok(()) => println!("[PASS] criterion {number}: {description}"),
        Err(cause) => {
            println!("[FAIL] criterion {number}: {description}");
            resume_unwind(cause);
        }
    }
}

fn system2(m: [[f64; 2]; 2]) -> LinearSystem {
    LinearSystem::new(
        m.iter().map(|r| r.to_vec()).collect(),
        vec!["x".into(), "y".into()],
    )
    .unwrap()
}

#[test]
fn c01_jacobian_classifications() {
    criterion(
        1,
        "trace/determinant classification of the three cases",
        || {
            let c = classify_equilibrium(&system2([[2.0, 1.0], [2.0, 1.0]])).unwrap();
            assert_eq!(c.trace, 3.0);
            assert_eq!(c.determinant, 0.0);
            assert_eq!(c.kind, EquilibriumKind::DegenerateLine);

            let c = classify_equilibrium(&system2([[1.0, 2.0], [3.0, 1.0]])).unwrap();
            assert_eq!(c.trace, 2.0);
            assert_eq!(c.determinant, -5.0);
            assert_eq!(c.kind, EquilibriumKind::Saddle);

            let c = classify_equilibrium(&system2([[2.0, 1.0], [1.0, 3.0]])).unwrap();
            assert_eq!(c.trace, 5.0);
            assert_eq!(c.determinant, 5.0);
            assert_eq!(c.kind, EquilibriumKind::UnstableNode);
        },
    );
}

#[test]
fn c02_psi_eigenvalue_law() {
    criterion(
        2,
        "eigenvalues match the +/- sqrt(alpha1^2 - beta1^2) law",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            let mut checked = 0;
            while checked < 100 {
                let alpha1: f64 = rng.gen_range(-3.0..3.0);
                let beta1: f64 = rng.gen_range(-3.0..3.0);
                let square = alpha1 * alpha1 - beta1 * beta1;
                let scale = square.abs().sqrt();
                if scale < 1e-3 {
                    continue; // too close to the branch point for a relative check
                }
                let pairs = eigen(&build_psi(alpha1, beta1).unwrap());
                if square > 0.0 {
                    assert!((pairs[0].value.re - scale).abs() <= 1e-9 * scale);
                    assert!((pairs[1].value.re + scale).abs() <= 1e-9 * scale);
                    assert_eq!(pairs[0].value.im, 0.0);
                } else {
                    assert!((pairs[0].value.im - scale).abs() <= 1e-9 * scale);
                    assert!((pairs[1].value.im + scale).abs() <= 1e-9 * scale);
                    assert!(pairs[0].value.re.abs() <= 1e-9 * scale);
                }
                checked += 1;
            }
        },
    );
}

#[test]
fn c03_decoupled_exponential() {
    criterion(
        3,
        "decoupled growth e^(alpha1 t) via closed form and RK4",
        || {
            for alpha1 in [-2.0, -1.0, 1.0, 2.0] {
                let params = CouplingParams::two_player(alpha1, 0.0, 0.0, 0.3);
                let s = build_two_player(&params, TwoPlayerVariant::EthicalBobCrookAlice).unwrap();
                let expected = alpha1.exp();

                let closed = closed_form_solution(&s, [1.0, 1.0]).unwrap().eval(1.0)[0];
                assert!(
                    (closed - expected).abs() <= 1e-6 * expected.abs(),
                    "closed form at alpha1={alpha1}: {closed} vs {expected}"
                );

                let end = integrate(&s, &[1.0, 1.0], 1e-3, 1000, IntegrationMethod::Rk4)
                    .unwrap()
                    .states
                    .last()
                    .unwrap()[0];
                assert!(
                    (end - expected).abs() <= 1e-6 * expected.abs(),
                    "rk4 at alpha1={alpha1}: {end} vs {expected}"
                );
            }
        },
    );
}

#[test]
fn c04_euler_first_order_convergence() {
    criterion(4, "Euler error halves as dt halves", || {
        let s = build_psi(2.0, 1.0).unwrap();
        let exact = closed_form_solution(&s, [2.0, 2.0]).unwrap().eval(0.5);
        let error_at = |dt: f64| {
            let steps = (0.5 / dt).round() as usize;
            let end = integrate(&s, &[2.0, 2.0], dt, steps, IntegrationMethod::Euler)
                .unwrap()
                .states
                .last()
                .unwrap()
                .clone();
            ((end[0] - exact[0]).powi(2) + (end[1] - exact[1]).powi(2)).sqrt()
        };
        let errors = [error_at(1e-2), error_at(5e-3), error_at(2.5e-3)];
        for pair in errors.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!(
                (1.8..=2.2).contains(&ratio),
                "ratio {ratio}, errors {errors:?}"
            );
        }
    });
}

#[test]
fn c05_center_conservation_and_period() {
    criterion(
        5,
        "quadratic invariant drift and orbit closure for the center",
        || {
            let s = build_psi(1.0, 2.0).unwrap();
            let q = conserved_form(&s).unwrap().expect("conserved form exists");
            assert_eq!((q.a, q.b, q.c), (1.0, 1.0, 1.0));

            let x0 = [2.0, 2.0];
            let q0 = q.eval(x0[0], x0[1]);
            let traj = integrate(&s, &x0, 1e-3, 5000, IntegrationMethod::Rk4).unwrap();
            let drift = traj
                .states
                .iter()
                .map(|s| (q.eval(s[0], s[1]) - q0).abs())
                .fold(0.0f64, f64::max);
            assert!(drift / q0.abs().max(1.0) <= 1e-6, "drift {drift}");

            let period = 2.0 * std::f64::consts::PI / 3.0f64.sqrt();
            let steps = (period / 1e-3).round() as usize;
            let traj = integrate(&s, &x0, 1e-3, steps, IntegrationMethod::Rk4).unwrap();
            let end = traj.states.last().unwrap();
            let gap = ((end[0] - x0[0]).powi(2) + (end[1] - x0[1]).powi(2)).sqrt();
            let start_norm = (x0[0] * x0[0] + x0[1] * x0[1]).sqrt();
            assert!(gap <= 0.05 * start_norm, "orbit gap {gap}");
        },
    );
}

fn close(a: &Point, b: &Point) -> bool {
    (0..3).all(|i| (a[i] - b[i]).abs() <= 1e-9)
}

fn same_point_set(got: &[Point], want: &[Point]) -> bool {
    got.len() == want.len()
        && want.iter().all(|w| got.iter().any(|g| close(g, w)))
        && got.iter().all(|g| want.iter().any(|w| close(g, w)))
}

#[test]
fn c06_polytope_facts() {
    criterion(
        6,
        "hull facets, shared vertices, and V/H round trip",
        || {
            let and_hull = polytope_from_vertices(&and_vertices()).unwrap();
            let or_hull = polytope_from_vertices(&or_vertices()).unwrap();

            let has_facet = |p: &ethos::polytope::Polytope, a: Point, b: f64| {
                p.halfspaces.iter().any(|h| {
                    (0..3).all(|i| (h.a[i] - a[i]).abs() <= 1e-9) && (h.b - b).abs() <= 1e-9
                })
            };
            // z <= x, z <= y, z >= x+y-1, z >= 0
            assert_eq!(and_hull.halfspaces.len(), 4);
            assert!(has_facet(&and_hull, [-1.0, 0.0, 1.0], 0.0));
            assert!(has_facet(&and_hull, [0.0, -1.0, 1.0], 0.0));
            assert!(has_facet(&and_hull, [1.0, 1.0, -1.0], 1.0));
            assert!(has_facet(&and_hull, [0.0, 0.0, -1.0], 0.0));
            // z >= x, z >= y, z <= x+y, z <= 1
            assert_eq!(or_hull.halfspaces.len(), 4);
            assert!(has_facet(&or_hull, [1.0, 0.0, -1.0], 0.0));
            assert!(has_facet(&or_hull, [0.0, 1.0, -1.0], 0.0));
            assert!(has_facet(&or_hull, [-1.0, -1.0, 1.0], 0.0));
            assert!(has_facet(&or_hull, [0.0, 0.0, 1.0], 1.0));

            // Triple-plane vertex enumeration of the published inequality
            // system reproduces the union-table vertices.
            let hs = |a: [f64; 3], b: f64| Halfspace::new(a, b);
            let mut system = vec![
                hs([-1.0, 0.0, 0.0], 0.0),
                hs([1.0, 0.0, 0.0], 1.0),
                hs([0.0, -1.0, 0.0], 0.0),
                hs([0.0, 1.0, 0.0], 1.0),
                hs([0.0, 0.0, -1.0], 0.0),
                hs([0.0, 0.0, 1.0], 1.0),
                hs([1.0, 0.0, -1.0], 0.0),
                hs([0.0, 1.0, -1.0], 0.0),
                hs([-1.0, -1.0, 1.0], 0.0),
            ];
            let enumerated = polytope_from_halfspaces(&system).unwrap();
            assert!(same_point_set(&enumerated.vertices, &or_vertices()));
            // Swapping the three connective constraints for the intersection
            // versions yields the other tetrahedron.
            system.truncate(6);
            system.push(hs([-1.0, 0.0, 1.0], 0.0));
            system.push(hs([0.0, -1.0, 1.0], 0.0));
            system.push(hs([1.0, 1.0, -1.0], 1.0));
            let enumerated = polytope_from_halfspaces(&system).unwrap();
            assert!(same_point_set(&enumerated.vertices, &and_vertices()));

            let shared = combine(&and_hull, &or_hull).shared_vertices;
            assert!(same_point_set(&shared, &[[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]]));

            for hull in [&and_hull, &or_hull] {
                let rebuilt = polytope_from_halfspaces(&hull.halfspaces).unwrap();
                assert!(same_point_set(&rebuilt.vertices, &hull.vertices));
            }
        },
    );
}

#[test]
fn c07_game_verdicts() {
    criterion(
        7,
        "dilemma verdicts with exhaustive deviation oracle",
        || {
            let labels = |a: &str, b: &str| {
                [
                    [a.to_string(), b.to_string()],
                    [a.to_string(), b.to_string()],
                ]
            };
            let pd = OrdinalGame::new(
                [[(1.0, 1.0), (10.0, 0.0)], [(0.0, 10.0), (5.0, 5.0)]],
                [Orientation::Minimize, Orientation::Minimize],
                labels("Cooperate", "Defect"),
            )
            .unwrap();
            let keep_return = OrdinalGame::new(
                [
                    [(50.0, 50.0), (50.0, 100.0)],
                    [(100.0, 50.0), (100.0, 100.0)],
                ],
                [Orientation::Maximize, Orientation::Maximize],
                labels("Return", "Keep"),
            )
            .unwrap();
            let feb = feb_transform(&keep_return, 50.0);

            // Exhaustive oracle: all 4 profiles, all 8 unilateral deviations.
            let oracle = |g: &OrdinalGame| -> Vec<(usize, usize)> {
                let pay = |p: usize, r: usize, c: usize| {
                    let cell = g.payoffs()[r][c];
                    if p == 0 {
                        cell.0
                    } else {
                        cell.1
                    }
                };
                let better = |p: usize, a: f64, b: f64| match g.orientation()[p] {
                    Orientation::Minimize => a < b,
                    Orientation::Maximize => a > b,
                };
                let mut out = Vec::new();
                for r in 0..2 {
                    for c in 0..2 {
                        let mut stable = true;
                        for alt in 0..2 {
                            if better(0, pay(0, alt, c), pay(0, r, c)) {
                                stable = false;
                            }
                            if better(1, pay(1, r, alt), pay(1, r, c)) {
                                stable = false;
                            }
                        }
                        if stable {
                            out.push((r, c));
                        }
                    }
                }
                out
            };

            assert_eq!(dominant_strategies(&pd), [Some(1), Some(1)]);
            assert_eq!(pure_nash_equilibria(&pd), vec![(1, 1)]);
            assert_eq!(pure_nash_equilibria(&pd), oracle(&pd));

            assert_eq!(dominant_strategies(&keep_return), [Some(1), Some(1)]);
            assert_eq!(pure_nash_equilibria(&keep_return), oracle(&keep_return));

            assert_eq!(pure_nash_equilibria(&feb), vec![(0, 0)]);
            assert_eq!(pure_nash_equilibria(&feb), oracle(&feb));
        },
    );
}

#[test]
fn c08_marker_model() {
    criterion(
        8,
        "midpoint, symmetry, and circumstantial smoothing",
        || {
            let p = MarkerParams::new(50.0, 0.1, 70.0).unwrap();
            assert_eq!(marker_value(50.0, &p).unwrap(), 0.5);

            let mut rng = ChaCha8Rng::seed_from_u64(8);
            for _ in 0..100 {
                let d: f64 = rng.gen_range(0.0..50.0);
                let up = marker_value(50.0 + d, &p).unwrap();
                let down = marker_value(50.0 - d, &p).unwrap();
                assert!((up + down - 1.0).abs() <= 1e-12, "d={d}");
            }

            let slopes: Vec<f64> = [10.0, 20.0, 50.0, 70.0]
                .iter()
                .map(|&cf| {
                    let p = MarkerParams::new(50.0, 0.1, cf).unwrap();
                    marker_curve(0.0, 100.0, 1001, &p).unwrap().max_slope()
                })
                .collect();
            for pair in slopes.windows(2) {
                assert!(pair[1] < pair[0], "max slope not decreasing: {slopes:?}");
            }
        },
    );
}

#[test]
fn c09_carl_dynamics() {
    criterion(
        9,
        "bitwise geometric third component and frozen nullclines",
        || {
            // The fig14a preset, integrated exactly as the CLI does it.
            let presets = registry();
            let scenario = presets.get("fig14a").expect("fig14a preset");
            let ScenarioParams::Simulate3D(sim) = &scenario.params else {
                panic!("fig14a is a 3D simulation");
            };
            let spec = build_simulation_spec(sim, 3).unwrap();
            let gamma3 = sim.coupling.gamma3.unwrap();
            let q = 1.0 + gamma3 * spec.dt;
            for ic in &spec.initial_conditions {
                let traj = integrate(&spec.system, ic, spec.dt, spec.steps, spec.method).unwrap();
                let mut expected = ic[2];
                for (n, state) in traj.states.iter().enumerate() {
                    assert_eq!(state[2], expected, "step {n} of ic {ic:?}");
                    expected *= q;
                }
            }

            // gamma3 = 0: the third CSV column of every emitted trajectory
            // is a constant string.
            let frozen = validate_scenario(
                r#"{
                "name": "frozen",
                "kind": "simulate3d",
                "params": {
                    "coupling": {"alpha1": 1, "beta1": 2, "alpha2": 2, "beta2": 1,
                                 "gamma2": -3, "gamma3": 0},
                    "carl_affects": "alice_only",
                    "initial_conditions": [[0.1, 0.1, 0.1], [0.5, -0.5, 0.2], [1.2, 1.4, 0.8]]
                }
            }"#,
            )
            .unwrap();
            let output = execute(&frozen, 1).unwrap();
            let csvs: Vec<&ethos_cli::scenario::Artifact> = output
                .artifacts
                .iter()
                .filter(|a| a.filename.ends_with(".csv"))
                .collect();
            assert_eq!(csvs.len(), 3);
            for artifact in csvs {
                let text = std::str::from_utf8(&artifact.contents).unwrap();
                let zs: Vec<&str> = text
                    .lines()
                    .skip(1)
                    .map(|l| l.rsplit(',').next().unwrap())
                    .collect();
                assert!(!zs.is_empty());
                assert!(
                    zs.iter().all(|z| z == &zs[0]),
                    "{}: z column drifted",
                    artifact.filename
                );
            }
        },
    );
}

#[test]
fn c10_end_to_end_determinism() {
    criterion(10, "preset fig7a is byte-identical across runs", || {
        let run = |dir: &std::path::Path| {
            let out = Command::new(env!("CARGO_BIN_EXE_ethos"))
                .args(["preset", "fig7a", "--out", dir.to_str().unwrap()])
                .output()
                .expect("binary runs");
            assert!(
                out.status.success(),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
        };
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        run(a.path());
        run(b.path());

        let mut names: Vec<String> = std::fs::read_dir(a.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
            .collect();
        names.sort();
        assert_eq!(
            names.len(),
            9,
            "8 trajectories plus the portrait: {names:?}"
        );
        assert_eq!(names.iter().filter(|n| n.ends_with(".csv")).count(), 8);
        for name in &names {
            let left = std::fs::read(a.path().join(name)).unwrap();
            let right = std::fs::read(b.path().join(name)).unwrap();
            assert_eq!(left, right, "{name} differs between runs");
        }
        let svg = std::fs::read_to_string(a.path().join("fig7a.svg")).unwrap();
        assert_eq!(svg.matches("<polyline").count(), 8);
    });
}
