//! JSON scenario schema, validation, and execution.
//!
//! A scenario file names one run of the library: a marker sweep, a game
//! analysis, a polytope construction, or a 2D/3D simulation. Validation
//! reports the JSON path of the offending field; nothing is executed and
//! no file is written unless the whole scenario validates.

use serde::{Deserialize, Serialize};
use serde_json::json;

use ethos::dynamics::{
    build_psi, build_three_player, build_two_player, CarlInfluence, CouplingParams,
    IntegrationMethod, LinearSystem, TwoPlayerVariant,
};
use ethos::games::{
    dominant_strategies, feb_transform, pure_nash_equilibria, OrdinalGame, Orientation,
};
use ethos::marker::{marker_curve, MarkerParams};
use ethos::polytope::{
    combine, polytope_from_halfspaces, polytope_from_vertices, Halfspace, Polytope,
};
use ethos::portrait::{
    marker_chart_svg, render_from_trajectories, render_polytope_svg, single_polytope_svg,
    trajectory_for, Camera, PortraitSpec, RenderedPortrait,
};

use crate::error::CliError;

fn invalid(path: &str, constraint: &str) -> CliError {
    CliError::Validation(format!("{path}: {constraint}"))
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub kind: String,
    pub params: serde_json::Value,
}

/// A validated scenario, ready to execute.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub params: ScenarioParams,
}

#[derive(Debug, Clone)]
pub enum ScenarioParams {
    Marker(MarkerScenario),
    Game(GameScenario),
    Polytope(PolytopeScenario),
    Simulate2D(SimulateScenario),
    Simulate3D(SimulateScenario),
}

impl Scenario {
    pub fn kind(&self) -> &'static str {
        match self.params {
            ScenarioParams::Marker(_) => "marker",
            ScenarioParams::Game(_) => "game",
            ScenarioParams::Polytope(_) => "polytope",
            ScenarioParams::Simulate2D(_) => "simulate2d",
            ScenarioParams::Simulate3D(_) => "simulate3d",
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MarkerScenario {
    pub a0: f64,
    pub tf: f64,
    pub cfs: Vec<f64>,
    #[serde(default = "default_age_start")]
    pub age_start: f64,
    #[serde(default = "default_age_end")]
    pub age_end: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_age_start() -> f64 {
    0.0
}

fn default_age_end() -> f64 {
    100.0
}

fn default_samples() -> usize {
    1001
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GameScenario {
    pub payoffs: [[[f64; 2]; 2]; 2],
    pub orientation: [String; 2],
    pub labels: [[String; 2]; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub feb_bonus: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceJson {
    pub a: [f64; 3],
    pub b: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfspaceJson>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeScenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfspaceJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combine: Option<CombineInput>,
}

impl PolytopeScenario {
    fn input(&self) -> PolytopeInput {
        PolytopeInput {
            vertices: self.vertices.clone(),
            halfspaces: self.halfspaces.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CombineInput {
    pub first: PolytopeInput,
    pub second: PolytopeInput,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingJson {
    pub alpha1: f64,
    pub beta1: f64,
    pub alpha2: f64,
    pub beta2: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma3: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrationJson {
    #[serde(default = "default_method")]
    pub method: String,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub steps: Option<usize>,
}

fn default_method() -> String {
    "euler".to_string()
}

fn default_dt() -> f64 {
    0.01
}

impl Default for IntegrationJson {
    fn default() -> Self {
        Self {
            method: default_method(),
            dt: default_dt(),
            steps: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CameraJson {
    pub azimuth: f64,
    pub elevation: f64,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateScenario {
    pub coupling: CouplingJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carl_affects: Option<String>,
    pub initial_conditions: Vec<Vec<f64>>,
    #[serde(default)]
    pub integration: IntegrationJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera: Option<CameraJson>,
}

/// Parses and fully validates a scenario document. Malformed JSON is
/// reported with line and column; schema violations name the field path
/// and the violated constraint.
pub fn validate_scenario(text: &str) -> Result<Scenario, CliError> {
    let file: ScenarioFile = serde_json::from_str(text)
        .map_err(|e| CliError::Validation(format!("scenario JSON: {e}")))?;
    scenario_from_file(file)
}

pub fn scenario_from_file(file: ScenarioFile) -> Result<Scenario, CliError> {
    if file.name.is_empty()
        || !file
            .name
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
    {
        return Err(invalid("name", "must match [a-z0-9_]+"));
    }
    let params =
        match file.kind.as_str() {
            "marker" => ScenarioParams::Marker(parse_params(file.params)?),
            "game" => ScenarioParams::Game(parse_params(file.params)?),
            "polytope" => ScenarioParams::Polytope(parse_params(file.params)?),
            "simulate2d" => ScenarioParams::Simulate2D(parse_params(file.params)?),
            "simulate3d" => ScenarioParams::Simulate3D(parse_params(file.params)?),
            other => return Err(invalid(
                "kind",
                &format!(
                    "must be one of marker, game, polytope, simulate2d, simulate3d; got {other:?}"
                ),
            )),
        };
    let scenario = Scenario {
        name: file.name,
        params,
    };
    validate(&scenario)?;
    Ok(scenario)
}

fn parse_params<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Validation(format!("params: {e}")))
}

fn validate(s: &Scenario) -> Result<(), CliError> {
    match &s.params {
        ScenarioParams::Marker(m) => {
            MarkerParams::new(m.a0, m.tf, 1.0).map_err(|e| invalid("params", &e.to_string()))?;
            if m.cfs.is_empty() {
                return Err(invalid("params.cfs", "needs at least one value"));
            }
            for (i, &cf) in m.cfs.iter().enumerate() {
                if !cf.is_finite() || cf <= 0.0 {
                    return Err(invalid(&format!("params.cfs[{i}]"), "must be > 0"));
                }
            }
            if !(m.age_start < m.age_end) {
                return Err(invalid("params.age_start", "must be < params.age_end"));
            }
            if m.samples < 2 {
                return Err(invalid("params.samples", "must be >= 2"));
            }
        }
        ScenarioParams::Game(g) => {
            for side in &g.orientation {
                if side != "min" && side != "max" {
                    return Err(invalid(
                        "params.orientation",
                        "entries must be \"min\" or \"max\"",
                    ));
                }
            }
            if let Some(b) = g.feb_bonus {
                if !b.is_finite() || b < 0.0 {
                    return Err(invalid("params.feb_bonus", "must be >= 0"));
                }
            }
            build_game(g)?;
        }
        ScenarioParams::Polytope(p) => {
            let sources = [
                p.vertices.is_some(),
                p.halfspaces.is_some(),
                p.combine.is_some(),
            ];
            if sources.iter().filter(|&&s| s).count() != 1 {
                return Err(invalid(
                    "params",
                    "exactly one of vertices, halfspaces, or combine is required",
                ));
            }
        }
        ScenarioParams::Simulate2D(sim) => validate_simulation(sim, 2)?,
        ScenarioParams::Simulate3D(sim) => validate_simulation(sim, 3)?,
    }
    Ok(())
}

fn validate_simulation(sim: &SimulateScenario, n: usize) -> Result<(), CliError> {
    for (name, value) in [
        ("alpha1", sim.coupling.alpha1),
        ("beta1", sim.coupling.beta1),
        ("alpha2", sim.coupling.alpha2),
        ("beta2", sim.coupling.beta2),
    ] {
        if !value.is_finite() {
            return Err(invalid(
                &format!("params.coupling.{name}"),
                "must be finite",
            ));
        }
    }
    if n == 2 {
        let variant = sim.variant.as_deref().unwrap_or("ethical_bob_crook_alice");
        if parse_variant(variant).is_none() && variant != "psi" {
            return Err(invalid(
                "params.variant",
                "must be one of ethical_bob_crook_alice, ethical_alice_crook_bob, unethical_duo, ethical_duo, psi",
            ));
        }
        if variant == "psi" {
            if sim.coupling.alpha2 != -sim.coupling.beta1 {
                return Err(invalid(
                    "params.coupling.alpha2",
                    "psi form requires alpha2 = -beta1",
                ));
            }
            if sim.coupling.beta2 != -sim.coupling.alpha1 {
                return Err(invalid(
                    "params.coupling.beta2",
                    "psi form requires beta2 = -alpha1",
                ));
            }
        }
        for (name, g) in [
            ("gamma1", sim.coupling.gamma1),
            ("gamma2", sim.coupling.gamma2),
            ("gamma3", sim.coupling.gamma3),
        ] {
            if g.is_some() {
                return Err(invalid(
                    &format!("params.coupling.{name}"),
                    "not used by a 2-player simulation",
                ));
            }
        }
        if sim.carl_affects.is_some() {
            return Err(invalid("params.carl_affects", "only valid for simulate3d"));
        }
    } else {
        let carl = sim.carl_affects.as_deref().unwrap_or("alice_only");
        let needs_gamma1 = match carl {
            "alice_only" => false,
            "alice_and_bob" => true,
            _ => {
                return Err(invalid(
                    "params.carl_affects",
                    "must be alice_only or alice_and_bob",
                ))
            }
        };
        if sim.coupling.gamma2.is_none() {
            return Err(invalid("params.coupling.gamma2", "required for simulate3d"));
        }
        if sim.coupling.gamma3.is_none() {
            return Err(invalid("params.coupling.gamma3", "required for simulate3d"));
        }
        if needs_gamma1 && sim.coupling.gamma1.is_none() {
            return Err(invalid(
                "params.coupling.gamma1",
                "required when carl_affects = alice_and_bob",
            ));
        }
        if !needs_gamma1 && sim.coupling.gamma1.is_some() {
            return Err(invalid(
                "params.coupling.gamma1",
                "not used when carl_affects = alice_only",
            ));
        }
        if sim.variant.is_some() {
            return Err(invalid("params.variant", "only valid for simulate2d"));
        }
    }
    if sim.initial_conditions.is_empty() {
        return Err(invalid(
            "params.initial_conditions",
            "needs at least one entry",
        ));
    }
    for (i, ic) in sim.initial_conditions.iter().enumerate() {
        if ic.len() != n {
            return Err(invalid(
                &format!("params.initial_conditions[{i}]"),
                &format!("must have dimension {n}"),
            ));
        }
        if ic.iter().any(|v| !v.is_finite()) {
            return Err(invalid(
                &format!("params.initial_conditions[{i}]"),
                "must be finite",
            ));
        }
    }
    match sim.integration.method.as_str() {
        "euler" | "rk4" => {}
        _ => return Err(invalid("params.integration.method", "must be euler or rk4")),
    }
    if !sim.integration.dt.is_finite() || sim.integration.dt <= 0.0 {
        return Err(invalid("params.integration.dt", "must be > 0"));
    }
    if let Some(steps) = sim.integration.steps {
        if steps == 0 {
            return Err(invalid("params.integration.steps", "must be >= 1"));
        }
    }
    if let Some(bounds) = &sim.bounds {
        if bounds.len() != n {
            return Err(invalid("params.bounds", &format!("must have {n} axes")));
        }
        for (i, b) in bounds.iter().enumerate() {
            if !(b[0] < b[1]) {
                return Err(invalid(
                    &format!("params.bounds[{i}]"),
                    "must satisfy min < max",
                ));
            }
        }
    }
    if let Some(r) = sim.resolution {
        if r < 2 {
            return Err(invalid("params.resolution", "must be >= 2"));
        }
    }
    Ok(())
}

fn parse_variant(name: &str) -> Option<TwoPlayerVariant> {
    match name {
        "ethical_bob_crook_alice" => Some(TwoPlayerVariant::EthicalBobCrookAlice),
        "ethical_alice_crook_bob" => Some(TwoPlayerVariant::EthicalAliceCrookBob),
        "unethical_duo" => Some(TwoPlayerVariant::UnethicalDuo),
        "ethical_duo" => Some(TwoPlayerVariant::EthicalDuo),
        _ => None,
    }
}

pub fn build_game(g: &GameScenario) -> Result<OrdinalGame, CliError> {
    let orient = |s: &str| match s {
        "min" => Ok(Orientation::Minimize),
        "max" => Ok(Orientation::Maximize),
        other => Err(invalid(
            "params.orientation",
            &format!("entries must be \"min\" or \"max\", got {other:?}"),
        )),
    };
    let p = &g.payoffs;
    OrdinalGame::new(
        [
            [(p[0][0][0], p[0][0][1]), (p[0][1][0], p[0][1][1])],
            [(p[1][0][0], p[1][0][1]), (p[1][1][0], p[1][1][1])],
        ],
        [orient(&g.orientation[0])?, orient(&g.orientation[1])?],
        g.labels.clone(),
    )
    .map_err(|e| invalid("params.payoffs", &e.to_string()))
}

/// Analysis JSON for a game: per-player dominant strategy and the pure
/// Nash profiles, by label.
pub fn analyze_game(game: &OrdinalGame) -> serde_json::Value {
    let dominant = dominant_strategies(game);
    let nash = pure_nash_equilibria(game);
    json!({
        "dominant_strategies": [
            dominant[0].map(|s| game.label(0, s)),
            dominant[1].map(|s| game.label(1, s)),
        ],
        "pure_nash_equilibria": nash
            .iter()
            .map(|&(r, c)| vec![game.label(0, r), game.label(1, c)])
            .collect::<Vec<_>>(),
    })
}

fn build_polytope(input: &PolytopeInput, path: &str) -> Result<Polytope, CliError> {
    match (&input.vertices, &input.halfspaces) {
        (Some(verts), None) => polytope_from_vertices(verts).map_err(CliError::from_polytope),
        (None, Some(hs)) => {
            let list: Vec<Halfspace> = hs.iter().map(|h| Halfspace::new(h.a, h.b)).collect();
            polytope_from_halfspaces(&list).map_err(CliError::from_polytope)
        }
        _ => Err(invalid(
            path,
            "exactly one of vertices or halfspaces is required",
        )),
    }
}

pub fn polytope_json(p: &Polytope) -> serde_json::Value {
    json!({
        "vertices": p.vertices,
        "halfspaces": p
            .halfspaces
            .iter()
            .map(|h| json!({"a": h.a, "b": h.b}))
            .collect::<Vec<_>>(),
    })
}

pub fn build_simulation_spec(sim: &SimulateScenario, n: usize) -> Result<PortraitSpec, CliError> {
    let c = &sim.coupling;
    let system: LinearSystem = if n == 2 {
        let variant = sim.variant.as_deref().unwrap_or("ethical_bob_crook_alice");
        if variant == "psi" {
            build_psi(c.alpha1, c.beta1).map_err(CliError::from_dynamics)?
        } else {
            let params = CouplingParams::two_player(c.alpha1, c.beta1, c.alpha2, c.beta2);
            build_two_player(&params, parse_variant(variant).expect("validated"))
                .map_err(CliError::from_dynamics)?
        }
    } else {
        let mut params = CouplingParams::two_player(c.alpha1, c.beta1, c.alpha2, c.beta2);
        params.gamma1 = c.gamma1;
        params.gamma2 = c.gamma2;
        params.gamma3 = c.gamma3;
        let carl = match sim.carl_affects.as_deref().unwrap_or("alice_only") {
            "alice_only" => CarlInfluence::AliceOnly,
            _ => CarlInfluence::AliceAndBob,
        };
        build_three_player(&params, carl).map_err(CliError::from_dynamics)?
    };
    let mut spec = PortraitSpec::with_defaults(system, sim.initial_conditions.clone());
    spec.method = match sim.integration.method.as_str() {
        "rk4" => IntegrationMethod::Rk4,
        _ => IntegrationMethod::Euler,
    };
    spec.dt = sim.integration.dt;
    if let Some(steps) = sim.integration.steps {
        spec.steps = steps;
    }
    if let Some(bounds) = &sim.bounds {
        spec.bounds = bounds.iter().map(|b| (b[0], b[1])).collect();
    }
    if let Some(r) = sim.resolution {
        spec.resolution = r;
    }
    if let Some(cam) = &sim.camera {
        spec.camera = Camera {
            azimuth_deg: cam.azimuth,
            elevation_deg: cam.elevation,
        };
    }
    Ok(spec)
}

/// One output file, staged in memory until the whole run has succeeded.
pub struct Artifact {
    pub filename: String,
    pub contents: Vec<u8>,
}

pub struct RunOutput {
    pub summary: serde_json::Value,
    pub artifacts: Vec<Artifact>,
}

fn render_simulation(spec: &PortraitSpec, jobs: usize) -> Result<RenderedPortrait, CliError> {
    let count = spec.initial_conditions.len();
    let (trajectories, overflowed) = if jobs <= 1 || count <= 1 {
        let mut trajectories = Vec::with_capacity(count);
        let mut overflowed = Vec::new();
        for index in 0..count {
            let (t, did_overflow) = trajectory_for(spec, index).map_err(CliError::from_portrait)?;
            if did_overflow {
                overflowed.push(index);
            }
            trajectories.push(t);
        }
        (trajectories, overflowed)
    } else {
        // Fan the initial conditions out over worker threads; assembly
        // order stays fixed by index, so the output does not depend on
        // scheduling.
        let workers = jobs.min(count);
        let slots: Vec<Option<Result<_, _>>> = (0..count).map(|_| None).collect();
        let results = std::sync::Mutex::new(slots);
        let next = std::sync::atomic::AtomicUsize::new(0);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let index = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if index >= count {
                        break;
                    }
                    let outcome = trajectory_for(spec, index);
                    results.lock().unwrap()[index] = Some(outcome);
                });
            }
        });
        let mut trajectories = Vec::with_capacity(count);
        let mut overflowed = Vec::new();
        for (index, slot) in results.into_inner().unwrap().into_iter().enumerate() {
            let (t, did_overflow) = slot
                .expect("worker filled slot")
                .map_err(CliError::from_portrait)?;
            if did_overflow {
                overflowed.push(index);
            }
            trajectories.push(t);
        }
        (trajectories, overflowed)
    };
    render_from_trajectories(spec, trajectories, overflowed).map_err(CliError::from_portrait)
}

/// Executes one scenario. All artifacts are produced in memory; an error
/// anywhere yields no artifacts at all.
pub fn execute(scenario: &Scenario, jobs: usize) -> Result<RunOutput, CliError> {
    let name = &scenario.name;
    match &scenario.params {
        ScenarioParams::Marker(m) => {
            let mut artifacts = Vec::new();
            let mut curves = Vec::new();
            for (i, &cf) in m.cfs.iter().enumerate() {
                let params = MarkerParams::new(m.a0, m.tf, cf).map_err(CliError::from_marker)?;
                let curve = marker_curve(m.age_start, m.age_end, m.samples, &params)
                    .map_err(CliError::from_marker)?;
                let mut csv = String::from("age,value\n");
                for (a, v) in curve.ages.iter().zip(&curve.values) {
                    csv.push_str(&ethos::portrait::format_significant(*a, 9));
                    csv.push(',');
                    csv.push_str(&ethos::portrait::format_significant(*v, 9));
                    csv.push('\n');
                }
                artifacts.push(Artifact {
                    filename: format!("{name}_{i}.csv"),
                    contents: csv.into_bytes(),
                });
                curves.push((format!("cf={cf}"), curve));
            }
            artifacts.push(Artifact {
                filename: format!("{name}.svg"),
                contents: marker_chart_svg(&curves).into_bytes(),
            });
            Ok(RunOutput {
                summary: json!({
                    "scenario": name,
                    "kind": "marker",
                    "curves": m.cfs.len(),
                    "samples": m.samples,
                    "files": artifacts.iter().map(|a| a.filename.clone()).collect::<Vec<_>>(),
                }),
                artifacts,
            })
        }
        ScenarioParams::Game(g) => {
            let game = build_game(g)?;
            let mut result = analyze_game(&game);
            if let Some(bonus) = g.feb_bonus {
                let transformed = feb_transform(&game, bonus);
                let payoffs: Vec<Vec<[f64; 2]>> = transformed
                    .payoffs()
                    .iter()
                    .map(|row| row.iter().map(|&(a, b)| [a, b]).collect())
                    .collect();
                result["feb"] = json!({
                    "bonus": bonus,
                    "payoffs": payoffs,
                    "analysis": analyze_game(&transformed),
                });
            }
            let artifact = Artifact {
                filename: format!("{name}.json"),
                contents: serde_json::to_vec_pretty(&result).expect("serializable"),
            };
            Ok(RunOutput {
                summary: json!({
                    "scenario": name,
                    "kind": "game",
                    "result": result,
                    "files": [artifact.filename.clone()],
                }),
                artifacts: vec![artifact],
            })
        }
        ScenarioParams::Polytope(p) => {
            let camera = Camera::default();
            let (result, svg) = if let Some(combined_input) = &p.combine {
                let first = build_polytope(&combined_input.first, "params.combine.first")?;
                let second = build_polytope(&combined_input.second, "params.combine.second")?;
                let combined = combine(&first, &second);
                let result = json!({
                    "first": polytope_json(&first),
                    "second": polytope_json(&second),
                    "shared_vertices": combined.shared_vertices,
                    "shared_edges": combined.shared_edges,
                    "first_only_edges": combined.first_only_edges,
                    "second_only_edges": combined.second_only_edges,
                });
                (result, render_polytope_svg(&combined, &camera))
            } else {
                let poly = build_polytope(&p.input(), "params")?;
                (polytope_json(&poly), single_polytope_svg(&poly, &camera))
            };
            let artifacts = vec![
                Artifact {
                    filename: format!("{name}.json"),
                    contents: serde_json::to_vec_pretty(&result).expect("serializable"),
                },
                Artifact {
                    filename: format!("{name}.svg"),
                    contents: svg.into_bytes(),
                },
            ];
            Ok(RunOutput {
                summary: json!({
                    "scenario": name,
                    "kind": "polytope",
                    "result": result,
                    "files": artifacts.iter().map(|a| a.filename.clone()).collect::<Vec<_>>(),
                }),
                artifacts,
            })
        }
        ScenarioParams::Simulate2D(sim) | ScenarioParams::Simulate3D(sim) => {
            let n = if matches!(scenario.params, ScenarioParams::Simulate2D(_)) {
                2
            } else {
                3
            };
            let spec = build_simulation_spec(sim, n)?;
            let rendered = render_simulation(&spec, jobs)?;
            let mut artifacts = Vec::new();
            for (i, csv) in rendered.csvs.iter().enumerate() {
                artifacts.push(Artifact {
                    filename: format!("{name}_{i}.csv"),
                    contents: csv.clone().into_bytes(),
                });
            }
            artifacts.push(Artifact {
                filename: format!("{name}.svg"),
                contents: rendered.svg.into_bytes(),
            });
            Ok(RunOutput {
                summary: json!({
                    "scenario": name,
                    "kind": scenario.kind(),
                    "trajectories": rendered.trajectories.len(),
                    "steps": spec.steps,
                    "overflowed": rendered.overflowed,
                    "files": artifacts.iter().map(|a| a.filename.clone()).collect::<Vec<_>>(),
                }),
                artifacts,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_of(text: &str) -> String {
        match validate_scenario(text) {
            Err(CliError::Validation(m)) => m,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn name_must_be_snake_case() {
        let msg = err_of(r#"{"name": "Fig7A", "kind": "marker", "params": {}}"#);
        assert!(msg.contains("[a-z0-9_]+"), "{msg}");
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let msg = err_of(r#"{"name": "x", "kind": "simulate4d", "params": {}}"#);
        assert!(msg.starts_with("kind:"), "{msg}");
    }

    #[test]
    fn psi_variant_enforces_the_coupling_relations() {
        let msg = err_of(
            r#"{"name": "x", "kind": "simulate2d", "params": {
                "coupling": {"alpha1": 1, "beta1": 2, "alpha2": 2, "beta2": -2},
                "variant": "psi",
                "initial_conditions": [[1, 1]]
            }}"#,
        );
        assert!(msg.contains("alpha2 = -beta1"), "{msg}");
    }

    #[test]
    fn gammas_are_rejected_in_two_player_scenarios() {
        let msg = err_of(
            r#"{"name": "x", "kind": "simulate2d", "params": {
                "coupling": {"alpha1": 1, "beta1": 2, "alpha2": 2, "beta2": -2, "gamma3": 1},
                "initial_conditions": [[1, 1]]
            }}"#,
        );
        assert!(msg.contains("params.coupling.gamma3"), "{msg}");
    }

    #[test]
    fn stray_gamma1_is_rejected_for_alice_only() {
        let msg = err_of(
            r#"{"name": "x", "kind": "simulate3d", "params": {
                "coupling": {"alpha1": 1, "beta1": 2, "alpha2": 2, "beta2": 1,
                             "gamma1": -1, "gamma2": -3, "gamma3": 2},
                "carl_affects": "alice_only",
                "initial_conditions": [[0.1, 0.1, 0.1]]
            }}"#,
        );
        assert!(msg.contains("params.coupling.gamma1"), "{msg}");
    }

    #[test]
    fn polytope_requires_exactly_one_source() {
        let msg = err_of(
            r#"{"name": "x", "kind": "polytope", "params": {
                "vertices": [[0,0,0]],
                "halfspaces": [{"a": [1,0,0], "b": 1}]
            }}"#,
        );
        assert!(msg.contains("exactly one"), "{msg}");
    }

    #[test]
    fn initial_condition_dimension_is_checked() {
        let msg = err_of(
            r#"{"name": "x", "kind": "simulate2d", "params": {
                "coupling": {"alpha1": 1, "beta1": 0, "alpha2": 0, "beta2": 1},
                "initial_conditions": [[1, 1, 1]]
            }}"#,
        );
        assert!(msg.contains("params.initial_conditions[0]"), "{msg}");
    }

    #[test]
    fn valid_round_trip_executes() {
        let scenario = validate_scenario(
            r#"{"name": "probe", "kind": "simulate2d", "params": {
                "coupling": {"alpha1": 1, "beta1": 2, "alpha2": -2, "beta2": -1},
                "variant": "psi",
                "initial_conditions": [[1, 0]],
                "integration": {"dt": 0.01, "steps": 10}
            }}"#,
        )
        .unwrap();
        let out = execute(&scenario, 1).unwrap();
        assert_eq!(out.artifacts.len(), 2); // one CSV, one SVG
        assert_eq!(out.summary["trajectories"], 1);
    }
}
