//! Phase-portrait sampling and deterministic SVG/CSV export.
//!
//! A portrait is a direction-field grid plus one integrated trajectory
//! per initial condition. 2D systems map straight onto the viewport; 3D
//! systems are orthographically projected through a fixed camera. All
//! numeric output goes through fixed-width formatting so identical
//! specs render byte-identical documents.

use thiserror::Error;

use crate::dynamics::{integrate, DynamicsError, IntegrationMethod, LinearSystem, Trajectory};
use crate::polytope::{CombinedPolytopes, Point, Polytope};

const VIEW_SIZE: f64 = 800.0;
const MARGIN: f64 = 40.0;
const ARROW_LEN: f64 = 12.0;

/// Fixed stroke cycle keyed by initial-condition index.
pub const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

#[derive(Debug, Error, PartialEq)]
pub enum PortraitError {
    #[error("grid resolution must be at least 2, got {0}")]
    BadResolution(usize),
    #[error("axis {axis} bounds must satisfy min < max, got [{min}, {max}]")]
    BadBounds { axis: usize, min: f64, max: f64 },
    #[error("bounds dimension {got} does not match system dimension {expected}")]
    BoundsDimension { expected: usize, got: usize },
    #[error("portrait needs at least one initial condition")]
    NoInitialConditions,
    #[error("initial condition {index} has dimension {got}, system has {expected}")]
    InitialConditionDimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Formats with the given number of significant digits in plain decimal
/// notation. The output of a given value is a pure function of its bits,
/// which keeps emitted CSV and SVG reproducible.
pub fn format_significant(value: f64, digits: u32) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).clamp(0, 30) as usize;
    format!("{value:.decimals$}")
}

fn fmt9(value: f64) -> String {
    format_significant(value, 9)
}

fn fmt_px(value: f64) -> String {
    format!("{value:.2}")
}

/// Direction samples M.x over a uniform grid inclusive of the bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFieldGrid {
    pub bounds: Vec<(f64, f64)>,
    pub resolution: usize,
    pub points: Vec<Vec<f64>>,
    pub directions: Vec<Vec<f64>>,
}

pub fn vector_field_grid(
    s: &LinearSystem,
    bounds: &[(f64, f64)],
    resolution: usize,
) -> Result<VectorFieldGrid, PortraitError> {
    if resolution < 2 {
        return Err(PortraitError::BadResolution(resolution));
    }
    let n = s.n();
    if bounds.len() != n {
        return Err(PortraitError::BoundsDimension {
            expected: n,
            got: bounds.len(),
        });
    }
    for (axis, &(min, max)) in bounds.iter().enumerate() {
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(PortraitError::BadBounds { axis, min, max });
        }
    }
    let axis_samples: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(min, max)| {
            (0..resolution)
                .map(|i| min + (max - min) * i as f64 / (resolution - 1) as f64)
                .collect()
        })
        .collect();
    let total = resolution.pow(n as u32);
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(total);
    for flat in 0..total {
        // Row-major: last axis varies fastest.
        let mut rest = flat;
        let mut index = vec![0usize; n];
        for d in (0..n).rev() {
            index[d] = rest % resolution;
            rest /= resolution;
        }
        points.push((0..n).map(|d| axis_samples[d][index[d]]).collect());
    }
    let directions = points.iter().map(|p| s.derivative(p)).collect();

    Ok(VectorFieldGrid {
        bounds: bounds.to_vec(),
        resolution,
        points,
        directions,
    })
}

/// Orthographic camera for 3D portraits, angles in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
}

impl Default for Camera {
    fn default() -> Self {
        Self {
            azimuth_deg: 35.0,
            elevation_deg: 25.0,
        }
    }
}

impl Camera {
    /// Screen-plane basis vectors (right, up).
    fn axes(&self) -> ([f64; 3], [f64; 3]) {
        let az = self.azimuth_deg.to_radians();
        let el = self.elevation_deg.to_radians();
        let right = [-az.sin(), az.cos(), 0.0];
        let up = [-az.cos() * el.sin(), -az.sin() * el.sin(), el.cos()];
        (right, up)
    }

    pub fn project(&self, p: &[f64]) -> (f64, f64) {
        let (r, u) = self.axes();
        (
            p[0] * r[0] + p[1] * r[1] + p[2] * r[2],
            p[0] * u[0] + p[1] * u[1] + p[2] * u[2],
        )
    }
}

/// Everything needed to render one portrait.
#[derive(Debug, Clone, PartialEq)]
pub struct PortraitSpec {
    pub system: LinearSystem,
    pub initial_conditions: Vec<Vec<f64>>,
    pub method: IntegrationMethod,
    pub dt: f64,
    pub steps: usize,
    pub bounds: Vec<(f64, f64)>,
    pub resolution: usize,
    pub camera: Camera,
}

impl PortraitSpec {
    /// Figure-faithful defaults: Euler at dt 0.01 with 500 steps in 2D
    /// and 300 in 3D, bounds [-2.5, 2.5] per axis, grid resolution 20
    /// in 2D and 6 in 3D.
    pub fn with_defaults(system: LinearSystem, initial_conditions: Vec<Vec<f64>>) -> Self {
        let n = system.n();
        Self {
            system,
            initial_conditions,
            method: IntegrationMethod::Euler,
            dt: 0.01,
            steps: if n == 2 { 500 } else { 300 },
            bounds: vec![(-2.5, 2.5); n],
            resolution: if n == 2 { 20 } else { 6 },
            camera: Camera::default(),
        }
    }
}

/// A rendered portrait: one CSV per initial condition plus the SVG
/// document. Initial conditions whose integration overflowed carry a
/// truncated trajectory and are listed in `overflowed`.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedPortrait {
    pub trajectories: Vec<Trajectory>,
    pub csvs: Vec<String>,
    pub svg: String,
    pub overflowed: Vec<usize>,
}

/// CSV text for one trajectory: header `t,<label1>,...` then one row per
/// stored state, all values at 9 significant digits.
pub fn trajectory_csv(labels: &[String], t: &Trajectory) -> String {
    let mut out = String::with_capacity(t.states.len() * 32);
    out.push('t');
    for label in labels {
        out.push(',');
        out.push_str(label);
    }
    out.push('\n');
    for (time, state) in t.times.iter().zip(&t.states) {
        out.push_str(&fmt9(*time));
        for v in state {
            out.push(',');
            out.push_str(&fmt9(*v));
        }
        out.push('\n');
    }
    out
}

struct Viewport {
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
}

impl Viewport {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let span = VIEW_SIZE - 2.0 * MARGIN;
        (
            MARGIN + (x - self.xmin) / (self.xmax - self.xmin) * span,
            VIEW_SIZE - MARGIN - (y - self.ymin) / (self.ymax - self.ymin) * span,
        )
    }
}

/// Screen-plane box: the bounds themselves in 2D, the projected corners
/// of the bounds box in 3D.
fn viewport_for(spec: &PortraitSpec) -> Viewport {
    if spec.system.n() == 2 {
        return Viewport {
            xmin: spec.bounds[0].0,
            xmax: spec.bounds[0].1,
            ymin: spec.bounds[1].0,
            ymax: spec.bounds[1].1,
        };
    }
    let mut view = Viewport {
        xmin: f64::INFINITY,
        xmax: f64::NEG_INFINITY,
        ymin: f64::INFINITY,
        ymax: f64::NEG_INFINITY,
    };
    for corner in 0..8u32 {
        let p = [
            if corner & 4 == 0 {
                spec.bounds[0].0
            } else {
                spec.bounds[0].1
            },
            if corner & 2 == 0 {
                spec.bounds[1].0
            } else {
                spec.bounds[1].1
            },
            if corner & 1 == 0 {
                spec.bounds[2].0
            } else {
                spec.bounds[2].1
            },
        ];
        let (x, y) = spec.camera.project(&p);
        view.xmin = view.xmin.min(x);
        view.xmax = view.xmax.max(x);
        view.ymin = view.ymin.min(y);
        view.ymax = view.ymax.max(y);
    }
    view
}

fn svg_header(out: &mut String) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n",
        VIEW_SIZE as u32
    ));
    out.push_str(&format!(
        "<rect width=\"{0}\" height=\"{0}\" fill=\"white\"/>\n",
        VIEW_SIZE as u32
    ));
}

fn svg_frame(out: &mut String, x_label: &str, y_label: &str) {
    let lo = MARGIN;
    let hi = VIEW_SIZE - MARGIN;
    out.push_str(&format!(
        "<rect x=\"{lo}\" y=\"{lo}\" width=\"{w}\" height=\"{w}\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1\"/>\n",
        w = hi - lo
    ));
    out.push_str(&format!(
        "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"16\" text-anchor=\"middle\">{x_label}</text>\n",
        x = VIEW_SIZE / 2.0,
        y = VIEW_SIZE - 10.0
    ));
    out.push_str(&format!(
        "<text x=\"14\" y=\"{y}\" font-family=\"monospace\" font-size=\"16\" text-anchor=\"middle\" transform=\"rotate(-90 14 {y})\">{y_label}</text>\n",
        y = VIEW_SIZE / 2.0
    ));
}

fn project(spec: &PortraitSpec, state: &[f64]) -> (f64, f64) {
    if spec.system.n() == 2 {
        (state[0], state[1])
    } else {
        spec.camera.project(state)
    }
}

fn arrow_group(spec: &PortraitSpec, grid: &VectorFieldGrid, view: &Viewport, out: &mut String) {
    let max_mag = grid
        .directions
        .iter()
        .map(|d| d.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0f64, f64::max);
    if max_mag <= 0.0 {
        return;
    }
    out.push_str("<g stroke=\"#555555\" stroke-width=\"1\">\n");
    for (point, direction) in grid.points.iter().zip(&grid.directions) {
        let mag = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
        if mag <= 1e-12 {
            continue;
        }
        // Fixed pixel length encodes direction only; magnitude goes into
        // one of four opacity buckets.
        let (px, py) = project(spec, point);
        let (cx, cy) = view.map(px, py);
        let probe: Vec<f64> = point
            .iter()
            .zip(direction)
            .map(|(p, d)| p + d / mag * 1e-3)
            .collect();
        let (tx_w, ty_w) = project(spec, &probe);
        let (tx, ty) = view.map(tx_w, ty_w);
        let (mut dx, mut dy) = (tx - cx, ty - cy);
        let len = (dx * dx + dy * dy).sqrt();
        if len <= 0.0 {
            continue;
        }
        dx /= len;
        dy /= len;
        let bucket = ((mag / max_mag) * 4.0).floor().min(3.0);
        let opacity = 0.25 * (bucket + 1.0);
        let half = ARROW_LEN / 2.0;
        let (x1, y1) = (cx - dx * half, cy - dy * half);
        let (x2, y2) = (cx + dx * half, cy + dy * half);
        // Open arrowhead: two short strokes swept back from the tip.
        let (hx, hy) = (-dx * 4.0, -dy * 4.0);
        let (lx, ly) = (-dy * 2.5, dx * 2.5);
        let tip = format!("{} {}", fmt_px(x2), fmt_px(y2));
        out.push_str(&format!(
            "<path d=\"M {} {} L {tip} M {} {} L {tip} M {tip} L {} {}\" fill=\"none\" opacity=\"{:.2}\"/>\n",
            fmt_px(x1),
            fmt_px(y1),
            fmt_px(x2 + hx + lx),
            fmt_px(y2 + hy + ly),
            fmt_px(x2 + hx - lx),
            fmt_px(y2 + hy - ly),
            opacity
        ));
    }
    out.push_str("</g>\n");
}

fn validate_spec(spec: &PortraitSpec) -> Result<(), PortraitError> {
    let n = spec.system.n();
    if spec.initial_conditions.is_empty() {
        return Err(PortraitError::NoInitialConditions);
    }
    for (index, ic) in spec.initial_conditions.iter().enumerate() {
        if ic.len() != n {
            return Err(PortraitError::InitialConditionDimension {
                index,
                expected: n,
                got: ic.len(),
            });
        }
    }
    Ok(())
}

/// Integrates one initial condition of the spec. The flag reports an
/// overflow, in which case the trajectory is truncated at the last
/// finite step. Distinct indices are independent, so callers may fan
/// these out across threads; results depend only on the index.
pub fn trajectory_for(
    spec: &PortraitSpec,
    index: usize,
) -> Result<(Trajectory, bool), PortraitError> {
    let ic = &spec.initial_conditions[index];
    match integrate(&spec.system, ic, spec.dt, spec.steps, spec.method) {
        Ok(t) => Ok((t, false)),
        Err(DynamicsError::Overflow { partial, .. }) => Ok((partial, true)),
        Err(other) => Err(other.into()),
    }
}

/// Renders the portrait: integrates every initial condition, emits the
/// CSV bundle, and assembles the SVG (field arrows, then one polyline
/// per initial condition in spec order).
pub fn render_portrait(spec: &PortraitSpec) -> Result<RenderedPortrait, PortraitError> {
    validate_spec(spec)?;
    let mut trajectories = Vec::with_capacity(spec.initial_conditions.len());
    let mut overflowed = Vec::new();
    for index in 0..spec.initial_conditions.len() {
        let (t, did_overflow) = trajectory_for(spec, index)?;
        if did_overflow {
            overflowed.push(index);
        }
        trajectories.push(t);
    }
    render_from_trajectories(spec, trajectories, overflowed)
}

/// SVG/CSV assembly over precomputed trajectories (one per initial
/// condition, in spec order).
pub fn render_from_trajectories(
    spec: &PortraitSpec,
    trajectories: Vec<Trajectory>,
    overflowed: Vec<usize>,
) -> Result<RenderedPortrait, PortraitError> {
    validate_spec(spec)?;
    let n = spec.system.n();
    let grid = vector_field_grid(&spec.system, &spec.bounds, spec.resolution)?;
    let labels = spec.system.labels();
    let csvs: Vec<String> = trajectories
        .iter()
        .map(|t| trajectory_csv(labels, t))
        .collect();

    let view = viewport_for(spec);
    let mut svg = String::new();
    svg_header(&mut svg);
    if !overflowed.is_empty() {
        let list: Vec<String> = overflowed.iter().map(|i| i.to_string()).collect();
        svg.push_str(&format!(
            "<!-- overflow: trajectories [{}] truncated at last finite step -->\n",
            list.join(", ")
        ));
    }
    let (x_label, y_label) = if n == 2 {
        (labels[0].clone(), labels[1].clone())
    } else {
        (
            format!(
                "{} / {} (azimuth {})",
                labels[0], labels[1], spec.camera.azimuth_deg
            ),
            format!("{} (elevation {})", labels[2], spec.camera.elevation_deg),
        )
    };
    svg_frame(&mut svg, &x_label, &y_label);
    svg.push_str(&format!(
        "<clipPath id=\"plot\"><rect x=\"{m}\" y=\"{m}\" width=\"{w}\" height=\"{w}\"/></clipPath>\n",
        m = MARGIN,
        w = VIEW_SIZE - 2.0 * MARGIN
    ));
    svg.push_str("<g clip-path=\"url(#plot)\">\n");
    arrow_group(spec, &grid, &view, &mut svg);
    for (index, trajectory) in trajectories.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let mut points = String::new();
        for state in &trajectory.states {
            let (wx, wy) = project(spec, state);
            let (px, py) = view.map(wx, wy);
            if !points.is_empty() {
                points.push(' ');
            }
            points.push_str(&fmt_px(px));
            points.push(',');
            points.push_str(&fmt_px(py));
        }
        svg.push_str(&format!(
            "<polyline points=\"{points}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
        ));
    }
    svg.push_str("</g>\n</svg>\n");

    Ok(RenderedPortrait {
        trajectories,
        csvs,
        svg,
        overflowed,
    })
}

/// Line chart of one or more marker curves over a shared age range,
/// values on [0, 1]. One polyline per curve, palette by curve index,
/// with a small legend naming each curve.
pub fn marker_chart_svg(curves: &[(String, crate::marker::MarkerCurve)]) -> String {
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    for (_, c) in curves {
        for &a in &c.ages {
            xmin = xmin.min(a);
            xmax = xmax.max(a);
        }
    }
    let view = Viewport {
        xmin,
        xmax,
        ymin: 0.0,
        ymax: 1.0,
    };
    let mut svg = String::new();
    svg_header(&mut svg);
    svg_frame(&mut svg, "age", "marker");
    for (index, (label, curve)) in curves.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let mut points = String::new();
        for (a, v) in curve.ages.iter().zip(&curve.values) {
            let (px, py) = view.map(*a, *v);
            if !points.is_empty() {
                points.push(' ');
            }
            points.push_str(&fmt_px(px));
            points.push(',');
            points.push_str(&fmt_px(py));
        }
        svg.push_str(&format!(
            "<polyline points=\"{points}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"14\" fill=\"{color}\">{label}</text>\n",
            x = MARGIN + 10.0,
            y = MARGIN + 20.0 + 18.0 * index as f64
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Wireframe SVG of one or two polytopes in the unit cube, drawn through
/// the same orthographic camera as 3D portraits. With two polytopes the
/// shared edges are green and each polytope keeps its own color for its
/// exclusive edges.
pub fn render_polytope_svg(combined: &CombinedPolytopes, camera: &Camera) -> String {
    let view = cube_viewport(camera);
    let mut svg = String::new();
    svg_header(&mut svg);
    cube_frame(camera, &view, &mut svg);
    let groups: [(&str, &Vec<(Point, Point)>); 3] = [
        ("#1f77b4", &combined.first_only_edges),
        ("#d62728", &combined.second_only_edges),
        ("#2ca02c", &combined.shared_edges),
    ];
    for (color, edges) in groups {
        if edges.is_empty() {
            continue;
        }
        svg.push_str(&format!("<g stroke=\"{color}\" stroke-width=\"2\">\n"));
        for (a, b) in edges.iter() {
            let (ax, ay) = camera.project(a);
            let (bx, by) = camera.project(b);
            let (x1, y1) = view.map(ax, ay);
            let (x2, y2) = view.map(bx, by);
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                fmt_px(x1),
                fmt_px(y1),
                fmt_px(x2),
                fmt_px(y2)
            ));
        }
        svg.push_str("</g>\n");
    }
    let mut vertices: Vec<Point> = Vec::new();
    for (a, b) in combined
        .shared_edges
        .iter()
        .chain(&combined.first_only_edges)
        .chain(&combined.second_only_edges)
    {
        for v in [a, b] {
            if !vertices.iter().any(|w| w == v) {
                vertices.push(*v);
            }
        }
    }
    svg.push_str("<g fill=\"#000000\">\n");
    for v in &vertices {
        let (wx, wy) = camera.project(v);
        let (x, y) = view.map(wx, wy);
        svg.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"3\"/>\n",
            fmt_px(x),
            fmt_px(y)
        ));
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

/// Single-polytope wireframe: all edges in one color.
pub fn single_polytope_svg(p: &Polytope, camera: &Camera) -> String {
    let combined = CombinedPolytopes {
        shared_vertices: Vec::new(),
        shared_edges: Vec::new(),
        first_only_edges: p.edge_points(),
        second_only_edges: Vec::new(),
    };
    render_polytope_svg(&combined, camera)
}

fn cube_viewport(camera: &Camera) -> Viewport {
    let mut view = Viewport {
        xmin: f64::INFINITY,
        xmax: f64::NEG_INFINITY,
        ymin: f64::INFINITY,
        ymax: f64::NEG_INFINITY,
    };
    let pad = 0.05;
    for corner in 0..8u32 {
        let p = [
            if corner & 4 == 0 { -pad } else { 1.0 + pad },
            if corner & 2 == 0 { -pad } else { 1.0 + pad },
            if corner & 1 == 0 { -pad } else { 1.0 + pad },
        ];
        let (x, y) = camera.project(&p);
        view.xmin = view.xmin.min(x);
        view.xmax = view.xmax.max(x);
        view.ymin = view.ymin.min(y);
        view.ymax = view.ymax.max(y);
    }
    view
}

fn cube_frame(camera: &Camera, view: &Viewport, out: &mut String) {
    let corners: Vec<[f64; 3]> = (0..8)
        .map(|i| {
            [
                (i & 4 != 0) as u8 as f64,
                (i & 2 != 0) as u8 as f64,
                (i & 1 != 0) as u8 as f64,
            ]
        })
        .collect();
    out.push_str("<g stroke=\"#cccccc\" stroke-width=\"1\">\n");
    for i in 0..8usize {
        for j in i + 1..8usize {
            if (i ^ j).count_ones() != 1 {
                continue; // cube edges differ in exactly one coordinate
            }
            let (ax, ay) = camera.project(&corners[i]);
            let (bx, by) = camera.project(&corners[j]);
            let (x1, y1) = view.map(ax, ay);
            let (x2, y2) = view.map(bx, by);
            out.push_str(&format!(
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
                fmt_px(x1),
                fmt_px(y1),
                fmt_px(x2),
                fmt_px(y2)
            ));
        }
    }
    out.push_str("</g>\n");
}
