//! Named presets reproducing each figure's parameter set.
//!
//! Every preset carries its parameters verbatim from the corresponding
//! figure caption, including the standard initial-condition lists. The
//! parameter table produced by `parameter_table` is pinned against a
//! checked-in transcription of the captions so numbering drift shows up
//! in tests.

use std::collections::BTreeMap;

use crate::scenario::{
    CombineInput, CouplingJson, GameScenario, IntegrationJson, MarkerScenario, PolytopeInput,
    PolytopeScenario, Scenario, ScenarioParams, SimulateScenario,
};

/// The eight 2D initial conditions shared by every 2D figure.
pub const IC_2D: [[f64; 2]; 8] = [
    [-2.0, -2.0],
    [2.0, 2.0],
    [-2.0, 2.0],
    [2.0, -2.0],
    [0.5, -1.0],
    [-1.0, 0.5],
    [1.0, -0.5],
    [-0.5, 1.0],
];

/// The eight 3D initial conditions shared by every 3D figure.
pub const IC_3D: [[f64; 3]; 8] = [
    [0.1, 0.1, 0.1],
    [1.0, 1.0, 1.0],
    [0.5, -0.5, 0.2],
    [1.5, 0.8, 0.3],
    [0.2, 0.4, 0.6],
    [-0.3, 0.7, 0.5],
    [0.6, -0.4, 0.9],
    [1.2, 1.4, 0.8],
];

fn marker(name: &str, tf: f64) -> Scenario {
    Scenario {
        name: name.to_string(),
        params: ScenarioParams::Marker(MarkerScenario {
            a0: 50.0,
            tf,
            cfs: vec![10.0, 20.0, 50.0, 70.0],
            age_start: 0.0,
            age_end: 100.0,
            samples: 1001,
        }),
    }
}

fn and_input() -> PolytopeInput {
    PolytopeInput {
        vertices: Some(vec![
            [0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 1.0, 1.0],
        ]),
        halfspaces: None,
    }
}

fn or_input() -> PolytopeInput {
    PolytopeInput {
        vertices: Some(vec![
            [0.0, 0.0, 0.0],
            [0.0, 1.0, 1.0],
            [1.0, 0.0, 1.0],
            [1.0, 1.0, 1.0],
        ]),
        halfspaces: None,
    }
}

fn polytope(name: &str, input: PolytopeInput) -> Scenario {
    Scenario {
        name: name.to_string(),
        params: ScenarioParams::Polytope(PolytopeScenario {
            vertices: input.vertices,
            halfspaces: input.halfspaces,
            combine: None,
        }),
    }
}

fn simulate2d(name: &str, variant: &str, rates: [f64; 4], ics: &[[f64; 2]]) -> Scenario {
    Scenario {
        name: name.to_string(),
        params: ScenarioParams::Simulate2D(SimulateScenario {
            coupling: CouplingJson {
                alpha1: rates[0],
                beta1: rates[1],
                alpha2: rates[2],
                beta2: rates[3],
                gamma1: None,
                gamma2: None,
                gamma3: None,
            },
            variant: Some(variant.to_string()),
            carl_affects: None,
            initial_conditions: ics.iter().map(|ic| ic.to_vec()).collect(),
            integration: IntegrationJson::default(),
            bounds: None,
            resolution: None,
            camera: None,
        }),
    }
}

fn simulate3d(
    name: &str,
    carl: &str,
    rates: [f64; 4],
    gamma1: Option<f64>,
    gamma2: f64,
    gamma3: f64,
) -> Scenario {
    Scenario {
        name: name.to_string(),
        params: ScenarioParams::Simulate3D(SimulateScenario {
            coupling: CouplingJson {
                alpha1: rates[0],
                beta1: rates[1],
                alpha2: rates[2],
                beta2: rates[3],
                gamma1,
                gamma2: Some(gamma2),
                gamma3: Some(gamma3),
            },
            variant: None,
            carl_affects: Some(carl.to_string()),
            initial_conditions: IC_3D.iter().map(|ic| ic.to_vec()).collect(),
            integration: IntegrationJson::default(),
            bounds: None,
            resolution: None,
            camera: None,
        }),
    }
}

/// All presets, keyed by name.
pub fn registry() -> BTreeMap<String, Scenario> {
    let mut presets: Vec<Scenario> = Vec::new();

    // Marker curves, one per transition factor panel.
    presets.push(marker("fig1a", 0.1));
    presets.push(marker("fig1b", 0.02));

    // Behavioral polytopes: intersection, union, and their combination.
    presets.push(polytope("fig3", and_input()));
    presets.push(polytope("fig4", or_input()));
    presets.push(Scenario {
        name: "fig5".to_string(),
        params: ScenarioParams::Polytope(PolytopeScenario {
            vertices: None,
            halfspaces: None,
            combine: Some(CombineInput {
                first: and_input(),
                second: or_input(),
            }),
        }),
    });

    // Decoupled exponential growth/decay. The caption fixes the signs
    // and the starting levels (0.01 growing, 1.5 decaying); unit rates.
    presets.push(simulate2d(
        "fig6a",
        "ethical_bob_crook_alice",
        [1.0, 0.0, 0.0, 1.0],
        &[[0.01, 0.01]],
    ));
    presets.push(simulate2d(
        "fig6b",
        "ethical_bob_crook_alice",
        [-1.0, 0.0, 0.0, -1.0],
        &[[1.5, 1.5]],
    ));

    // Real-eigenvalue regime, wide and narrow parameter separation.
    presets.push(simulate2d(
        "fig7a",
        "ethical_bob_crook_alice",
        [2.0, 1.0, -1.0, -2.0],
        &IC_2D,
    ));
    presets.push(simulate2d(
        "fig7b",
        "ethical_bob_crook_alice",
        [1.1, 1.0, -1.0, -1.1],
        &IC_2D,
    ));
    presets.push(simulate2d("fig8a", "psi", [2.0, -1.0, 1.0, -2.0], &IC_2D));
    presets.push(simulate2d("fig8b", "psi", [1.1, -1.0, 1.0, -1.1], &IC_2D));

    // Imaginary-eigenvalue regime: closed loops both ways round.
    presets.push(simulate2d("fig9a", "psi", [1.0, 2.0, -2.0, -1.0], &IC_2D));
    presets.push(simulate2d("fig9b", "psi", [1.0, 1.1, -1.1, -1.0], &IC_2D));
    presets.push(simulate2d("fig10a", "psi", [1.0, -2.0, 2.0, -1.0], &IC_2D));
    presets.push(simulate2d("fig10b", "psi", [1.0, -1.1, 1.1, -1.0], &IC_2D));

    // General sink and source spirals.
    presets.push(simulate2d(
        "fig11a",
        "unethical_duo",
        [1.0, -2.0, 2.0, -2.0],
        &IC_2D,
    ));
    presets.push(simulate2d(
        "fig11b",
        "unethical_duo",
        [1.0, -2.0, 2.0, 2.0],
        &IC_2D,
    ));

    // Unethical duo: degenerate cross/self coupling, then saddle/node.
    presets.push(simulate2d(
        "fig12a",
        "unethical_duo",
        [1.0, 2.0, 2.0, 1.0],
        &IC_2D,
    ));
    presets.push(simulate2d(
        "fig12b",
        "unethical_duo",
        [2.0, 1.0, 1.0, 2.0],
        &IC_2D,
    ));
    presets.push(simulate2d(
        "fig13a",
        "unethical_duo",
        [1.0, 2.0, 3.0, 1.0],
        &IC_2D,
    ));
    presets.push(simulate2d(
        "fig13b",
        "unethical_duo",
        [2.0, 1.0, 1.0, 3.0],
        &IC_2D,
    ));

    // Third player forcing Alice only.
    presets.push(simulate3d(
        "fig14a",
        "alice_only",
        [1.0, 2.0, 2.0, 1.0],
        None,
        -3.0,
        2.0,
    ));
    presets.push(simulate3d(
        "fig14b",
        "alice_only",
        [1.0, 2.0, 1.0, 2.0],
        None,
        3.0,
        2.0,
    ));
    presets.push(simulate3d(
        "fig14c",
        "alice_only",
        [2.0, 2.0, 2.0, 2.0],
        None,
        -2.0,
        2.0,
    ));
    presets.push(simulate3d(
        "fig14d",
        "alice_only",
        [2.0, 0.0, 2.0, 0.0],
        None,
        -2.0,
        2.0,
    ));
    presets.push(simulate3d(
        "fig14e",
        "alice_only",
        [3.0, 2.0, -3.0, -1.0],
        None,
        2.0,
        -2.0,
    ));

    // Third player forcing both.
    presets.push(simulate3d(
        "fig15a",
        "alice_and_bob",
        [1.0, 2.0, 2.0, 1.0],
        Some(-3.0),
        -3.0,
        2.0,
    ));
    presets.push(simulate3d(
        "fig15b",
        "alice_and_bob",
        [1.0, 2.0, 1.0, 2.0],
        Some(3.0),
        3.0,
        2.0,
    ));
    presets.push(simulate3d(
        "fig15c",
        "alice_and_bob",
        [2.0, 2.0, 2.0, 2.0],
        Some(-2.0),
        -2.0,
        2.0,
    ));
    presets.push(simulate3d(
        "fig15d",
        "alice_and_bob",
        [2.0, 0.0, 2.0, 0.0],
        Some(-2.0),
        -2.0,
        2.0,
    ));

    // The dilemma games themselves, runnable as scenarios.
    presets.push(Scenario {
        name: "pd".to_string(),
        params: ScenarioParams::Game(GameScenario {
            payoffs: [[[1.0, 1.0], [10.0, 0.0]], [[0.0, 10.0], [5.0, 5.0]]],
            orientation: ["min".to_string(), "min".to_string()],
            labels: [
                ["Cooperate".to_string(), "Defect".to_string()],
                ["Cooperate".to_string(), "Defect".to_string()],
            ],
            feb_bonus: None,
        }),
    });
    presets.push(Scenario {
        name: "keep_return".to_string(),
        params: ScenarioParams::Game(GameScenario {
            payoffs: [
                [[50.0, 50.0], [50.0, 100.0]],
                [[100.0, 50.0], [100.0, 100.0]],
            ],
            orientation: ["max".to_string(), "max".to_string()],
            labels: [
                ["Return".to_string(), "Keep".to_string()],
                ["Return".to_string(), "Keep".to_string()],
            ],
            feb_bonus: None,
        }),
    });
    presets.push(Scenario {
        name: "feb".to_string(),
        params: ScenarioParams::Game(GameScenario {
            payoffs: [
                [[50.0, 50.0], [50.0, 100.0]],
                [[100.0, 50.0], [100.0, 100.0]],
            ],
            orientation: ["max".to_string(), "max".to_string()],
            labels: [
                ["Return".to_string(), "Keep".to_string()],
                ["Return".to_string(), "Keep".to_string()],
            ],
            feb_bonus: Some(50.0),
        }),
    });

    presets.into_iter().map(|s| (s.name.clone(), s)).collect()
}

fn fmt_ics(ics: &[Vec<f64>]) -> String {
    if ics.len() == 8 && ics.iter().zip(IC_2D.iter()).all(|(a, b)| a == b) {
        return "2d8".to_string();
    }
    if ics.len() == 8 && ics.iter().zip(IC_3D.iter()).all(|(a, b)| a == b) {
        return "3d8".to_string();
    }
    let parts: Vec<String> = ics
        .iter()
        .map(|ic| {
            let coords: Vec<String> = ic.iter().map(|v| v.to_string()).collect();
            format!("({})", coords.join(","))
        })
        .collect();
    parts.join(";")
}

/// Canonical one-line-per-preset parameter table, compared in tests
/// against a checked-in transcription of the figure captions.
pub fn parameter_table() -> String {
    let mut out = String::new();
    for (name, scenario) in registry() {
        let line = match &scenario.params {
            ScenarioParams::Marker(m) => {
                let cfs: Vec<String> = m.cfs.iter().map(|c| c.to_string()).collect();
                format!(
                    "{name} marker a0={} tf={} cfs={} ages=[{},{}] samples={}",
                    m.a0,
                    m.tf,
                    cfs.join(","),
                    m.age_start,
                    m.age_end,
                    m.samples
                )
            }
            ScenarioParams::Game(g) => {
                let cells: Vec<String> = g
                    .payoffs
                    .iter()
                    .flatten()
                    .map(|p| format!("({},{})", p[0], p[1]))
                    .collect();
                let bonus = match g.feb_bonus {
                    Some(b) => format!(" feb_bonus={b}"),
                    None => String::new(),
                };
                format!(
                    "{name} game payoffs={} orientation={},{}{}",
                    cells.join(";"),
                    g.orientation[0],
                    g.orientation[1],
                    bonus
                )
            }
            ScenarioParams::Polytope(p) => {
                if let Some(c) = &p.combine {
                    let fmt_side = |side: &PolytopeInput| {
                        let verts: Vec<String> = side
                            .vertices
                            .as_ref()
                            .expect("preset polytopes use vertices")
                            .iter()
                            .map(|v| format!("({},{},{})", v[0], v[1], v[2]))
                            .collect();
                        verts.join(";")
                    };
                    format!(
                        "{name} polytope combine first={} second={}",
                        fmt_side(&c.first),
                        fmt_side(&c.second)
                    )
                } else {
                    let verts: Vec<String> = p
                        .vertices
                        .as_ref()
                        .expect("preset polytopes use vertices")
                        .iter()
                        .map(|v| format!("({},{},{})", v[0], v[1], v[2]))
                        .collect();
                    format!("{name} polytope vertices={}", verts.join(";"))
                }
            }
            ScenarioParams::Simulate2D(sim) => {
                format!(
                    "{name} simulate2d variant={} alpha1={} beta1={} alpha2={} beta2={} method={} dt={} steps={} ics={}",
                    sim.variant.as_deref().unwrap_or("ethical_bob_crook_alice"),
                    sim.coupling.alpha1,
                    sim.coupling.beta1,
                    sim.coupling.alpha2,
                    sim.coupling.beta2,
                    sim.integration.method,
                    sim.integration.dt,
                    sim.integration.steps.unwrap_or(500),
                    fmt_ics(&sim.initial_conditions)
                )
            }
            ScenarioParams::Simulate3D(sim) => {
                let gamma1 = match sim.coupling.gamma1 {
                    Some(g) => format!(" gamma1={g}"),
                    None => String::new(),
                };
                format!(
                    "{name} simulate3d carl={}{} gamma2={} gamma3={} alpha1={} beta1={} alpha2={} beta2={} method={} dt={} steps={} ics={}",
                    sim.carl_affects.as_deref().unwrap_or("alice_only"),
                    gamma1,
                    sim.coupling.gamma2.unwrap(),
                    sim.coupling.gamma3.unwrap(),
                    sim.coupling.alpha1,
                    sim.coupling.beta1,
                    sim.coupling.alpha2,
                    sim.coupling.beta2,
                    sim.integration.method,
                    sim.integration.dt,
                    sim.integration.steps.unwrap_or(300),
                    fmt_ics(&sim.initial_conditions)
                )
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}
