//! Behavioral polytopes in the unit cube.
//!
//! The extremal rows of a boolean truth table over the two players'
//! ethical markers become vertices of a convex polytope in the unit cube with
//! axes (E_A, E_B, P(E_C | E_A, E_B)). Both representations are kept:
//! vertices (V-rep) and facet halfspaces a.x <= b (H-rep). The scale is
//! tiny (at most 16 candidate vertices in 3 dimensions), so facets and
//! vertices are enumerated by brute force over triples, which is exact
//! here and needs no hull dependency.

use thiserror::Error;

/// Comparison tolerance for all geometric predicates. Coordinates are
/// small rationals, so this sits far above rounding noise and far below
/// vertex spacing.
const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum PolytopeError {
    #[error("output column {output} references unknown variable {operand}")]
    UnknownOperand { output: String, operand: String },
    #[error("truth table connective needs at least one operand")]
    NoOperands,
    #[error("vertex list is empty")]
    EmptyVertexList,
    #[error("coordinate {value} at vertex {index} is outside [0, 1]")]
    VertexOutOfDomain { index: usize, value: f64 },
    #[error("halfspace {index} has a non-finite coefficient")]
    NonFiniteHalfspace { index: usize },
    #[error("halfspace intersection is empty")]
    EmptyIntersection,
    #[error("halfspace intersection is unbounded")]
    Unbounded,
    #[error("complement pair ({0}, {1}) must name two distinct variables")]
    BadPair(String, String),
}

// ---------------------------------------------------------------------------
// Truth tables

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
}

impl Connective {
    fn apply(self, values: impl Iterator<Item = bool>) -> bool {
        match self {
            Connective::And => values.fold(true, |a, b| a && b),
            Connective::Or => values.fold(false, |a, b| a || b),
        }
    }
}

/// One derived output column of a truth table.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputColumn {
    pub name: String,
    pub connective: Connective,
    pub operands: Vec<String>,
    pub values: Vec<bool>,
}

/// A boolean truth table over named variables, rows in ascending binary
/// order with the first variable as the most significant bit.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthTable {
    pub variables: Vec<String>,
    pub rows: Vec<Vec<bool>>,
    pub outputs: Vec<OutputColumn>,
}

/// Full 2^k-row table with the requested connective columns filled in.
pub fn truth_table(
    variables: &[&str],
    outputs: &[(&str, Connective, &[&str])],
) -> Result<TruthTable, PolytopeError> {
    let k = variables.len();
    let index_of = |name: &str, output: &str| {
        variables
            .iter()
            .position(|v| *v == name)
            .ok_or_else(|| PolytopeError::UnknownOperand {
                output: output.to_string(),
                operand: name.to_string(),
            })
    };

    let rows: Vec<Vec<bool>> = (0..1usize << k)
        .map(|i| (0..k).map(|j| (i >> (k - 1 - j)) & 1 == 1).collect())
        .collect();

    let mut cols = Vec::with_capacity(outputs.len());
    for (name, connective, operands) in outputs {
        if operands.is_empty() {
            return Err(PolytopeError::NoOperands);
        }
        let idx: Vec<usize> = operands
            .iter()
            .map(|op| index_of(op, name))
            .collect::<Result<_, _>>()?;
        let values = rows
            .iter()
            .map(|row| connective.apply(idx.iter().map(|&i| row[i])))
            .collect();
        cols.push(OutputColumn {
            name: name.to_string(),
            connective: *connective,
            operands: operands.iter().map(|s| s.to_string()).collect(),
            values,
        });
    }
    Ok(TruthTable {
        variables: variables.iter().map(|s| s.to_string()).collect(),
        rows,
        outputs: cols,
    })
}

/// Keeps only the rows where each named pair of variables sums to one,
/// i.e. exactly one of the two events happens. This is the extremal
/// restriction: a player fully ethical or fully unethical.
pub fn restrict_extremal(
    t: &TruthTable,
    complement_pairs: &[(&str, &str)],
) -> Result<TruthTable, PolytopeError> {
    let mut pairs = Vec::with_capacity(complement_pairs.len());
    for (a, b) in complement_pairs {
        let find = |name: &str| t.variables.iter().position(|v| v == name);
        match (find(a), find(b)) {
            (Some(i), Some(j)) if i != j => pairs.push((i, j)),
            _ => return Err(PolytopeError::BadPair(a.to_string(), b.to_string())),
        }
    }
    let keep: Vec<usize> = t
        .rows
        .iter()
        .enumerate()
        .filter(|(_, row)| pairs.iter().all(|&(i, j)| row[i] != row[j]))
        .map(|(i, _)| i)
        .collect();
    Ok(TruthTable {
        variables: t.variables.clone(),
        rows: keep.iter().map(|&i| t.rows[i].clone()).collect(),
        outputs: t
            .outputs
            .iter()
            .map(|col| OutputColumn {
                name: col.name.clone(),
                connective: col.connective,
                operands: col.operands.clone(),
                values: keep.iter().map(|&i| col.values[i]).collect(),
            })
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// Geometry helpers

pub type Point = [f64; 3];

fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &Point, b: &Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: &Point) -> f64 {
    dot(a, a).sqrt()
}

fn points_equal(a: &Point, b: &Point) -> bool {
    (0..3).all(|i| (a[i] - b[i]).abs() <= GEOM_TOL)
}

/// The halfspace a.x <= b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Halfspace {
    pub a: Point,
    pub b: f64,
}

impl Halfspace {
    pub fn new(a: Point, b: f64) -> Self {
        Self { a, b }
    }

    pub fn contains(&self, x: &Point) -> bool {
        dot(&self.a, x) <= self.b + GEOM_TOL
    }

    pub fn tight_at(&self, x: &Point) -> bool {
        (dot(&self.a, x) - self.b).abs() <= GEOM_TOL
    }

    /// Scale so the largest normal component has magnitude one, with
    /// negative zeros flushed, for reproducible output.
    fn canonical(&self) -> Self {
        let s = self.a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let clean = |v: f64| if v == 0.0 { 0.0 } else { v };
        Self {
            a: [
                clean(self.a[0] / s),
                clean(self.a[1] / s),
                clean(self.a[2] / s),
            ],
            b: clean(self.b / s),
        }
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (0..3).all(|i| (self.a[i] - other.a[i]).abs() <= GEOM_TOL)
            && (self.b - other.b).abs() <= GEOM_TOL
    }
}

/// Convex polytope in the unit cube carrying both representations.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    pub vertices: Vec<Point>,
    pub halfspaces: Vec<Halfspace>,
}

fn dedup_points(points: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for p in points {
        if !out.iter().any(|q| points_equal(p, q)) {
            out.push(*p);
        }
    }
    out
}

fn sort_points(points: &mut [Point]) {
    points.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.partial_cmp(y).unwrap())
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

fn push_canonical(halfspaces: &mut Vec<Halfspace>, h: Halfspace) {
    let c = h.canonical();
    if !halfspaces.iter().any(|existing| existing.approx_eq(&c)) {
        halfspaces.push(c);
    }
}

fn sort_halfspaces(halfspaces: &mut [Halfspace]) {
    halfspaces.sort_by(|p, q| {
        let key = |h: &Halfspace| [h.a[0], h.a[1], h.a[2], h.b];
        key(p)
            .iter()
            .zip(key(q).iter())
            .map(|(x, y)| x.partial_cmp(y).unwrap())
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
}

/// Directions spanning the affine hull of `points`.
fn affine_basis(points: &[Point]) -> Vec<Point> {
    let origin = points[0];
    let mut basis: Vec<Point> = Vec::new();
    for p in &points[1..] {
        let mut d = sub(p, &origin);
        for b in &basis {
            let proj = dot(&d, b);
            for i in 0..3 {
                d[i] -= proj * b[i];
            }
        }
        let len = norm(&d);
        if len > GEOM_TOL {
            basis.push([d[0] / len, d[1] / len, d[2] / len]);
        }
        if basis.len() == 3 {
            break;
        }
    }
    basis
}

/// Phase-I simplex feasibility for A x = b, x >= 0 (Bland's rule).
/// Returns a feasible x when one exists.
fn simplex_feasible(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let m = a.len();
    let n = a[0].len();
    let cols = n + m; // structural variables then artificials
    let mut t: Vec<Vec<f64>> = vec![vec![0.0; cols + 1]; m];
    for r in 0..m {
        let flip = if b[r] < 0.0 { -1.0 } else { 1.0 };
        for c in 0..n {
            t[r][c] = flip * a[r][c];
        }
        t[r][n + r] = 1.0;
        t[r][cols] = flip * b[r];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs for minimizing the artificial sum.
    let mut rc = vec![0.0; cols + 1];
    for c in 0..=cols {
        let col_sum: f64 = (0..m).map(|r| t[r][c]).sum();
        rc[c] = if (n..cols).contains(&c) {
            1.0 - col_sum
        } else {
            -col_sum
        };
    }

    const TOL: f64 = 1e-10;
    loop {
        let Some(enter) = (0..cols).find(|&c| rc[c] < -TOL) else {
            break;
        };
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..m {
            if t[r][enter] > TOL {
                let ratio = t[r][cols] / t[r][enter];
                if ratio < best - TOL
                    || (ratio < best + TOL && leave.map_or(true, |l| basis[r] < basis[l]))
                {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(pr) = leave else {
            return None; // phase-I cannot be unbounded; bail defensively
        };
        let pivot = t[pr][enter];
        for c in 0..=cols {
            t[pr][c] /= pivot;
        }
        for r in 0..m {
            if r != pr && t[r][enter].abs() > 0.0 {
                let f = t[r][enter];
                for c in 0..=cols {
                    t[r][c] -= f * t[pr][c];
                }
            }
        }
        let f = rc[enter];
        for c in 0..=cols {
            rc[c] -= f * t[pr][c];
        }
        basis[pr] = enter;
    }

    let objective: f64 = (0..m).filter(|&r| basis[r] >= n).map(|r| t[r][cols]).sum();
    if objective > 1e-8 {
        return None;
    }
    let mut x = vec![0.0; n];
    for r in 0..m {
        if basis[r] < n {
            x[basis[r]] = t[r][cols].max(0.0);
        }
    }
    Some(x)
}

/// Nonnegative coefficients over `vertices` summing to one that
/// reproduce `x`, when `x` lies in their convex hull.
pub fn convex_coefficients(vertices: &[Point], x: &Point) -> Option<Vec<f64>> {
    let n = vertices.len();
    let mut a = vec![vec![0.0; n]; 4];
    for (j, v) in vertices.iter().enumerate() {
        for k in 0..3 {
            a[k][j] = v[k];
        }
        a[3][j] = 1.0;
    }
    let b = vec![x[0], x[1], x[2], 1.0];
    let coeffs = simplex_feasible(&a, &b)?;
    // Verify the reconstruction before handing the coefficients out.
    let mut rebuilt = [0.0; 3];
    for (j, v) in vertices.iter().enumerate() {
        for k in 0..3 {
            rebuilt[k] += coeffs[j] * v[k];
        }
    }
    let sum: f64 = coeffs.iter().sum();
    if (sum - 1.0).abs() > 1e-7 || (0..3).any(|k| (rebuilt[k] - x[k]).abs() > 1e-7) {
        return None;
    }
    Some(coeffs)
}

/// Hull vertices of a point set: a point is a hull vertex exactly when
/// it is not a convex combination of the others.
fn hull_vertices(points: &[Point]) -> Vec<Point> {
    let points = dedup_points(points);
    if points.len() <= 1 {
        return points;
    }
    let mut out = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let others: Vec<Point> = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| *q)
            .collect();
        if convex_coefficients(&others, p).is_none() {
            out.push(*p);
        }
    }
    out
}

/// Facet halfspaces of full-dimensional hulls by brute force: every
/// plane through three affinely independent vertices that keeps all
/// other vertices on one side is a facet.
fn facets_rank3(verts: &[Point]) -> Vec<Halfspace> {
    let mut out: Vec<Halfspace> = Vec::new();
    let n = verts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let normal = cross(&sub(&verts[j], &verts[i]), &sub(&verts[k], &verts[i]));
                if norm(&normal) <= GEOM_TOL {
                    continue;
                }
                let offset = dot(&normal, &verts[i]);
                let mut above = false;
                let mut below = false;
                for v in verts {
                    let d = dot(&normal, v) - offset;
                    if d > GEOM_TOL * norm(&normal).max(1.0) {
                        above = true;
                    } else if d < -GEOM_TOL * norm(&normal).max(1.0) {
                        below = true;
                    }
                }
                if above && below {
                    continue;
                }
                let h = if above {
                    Halfspace::new([-normal[0], -normal[1], -normal[2]], -offset)
                } else {
                    Halfspace::new(normal, offset)
                };
                push_canonical(&mut out, h);
            }
        }
    }
    out
}

/// H-rep for degenerate hulls. The affine hull is pinned by opposing
/// halfspace pairs; the polytope is then bounded within it by support
/// halfspaces whose normals lie inside the hull.
fn facets_degenerate(verts: &[Point], basis: &[Point]) -> Vec<Halfspace> {
    let mut out = Vec::new();
    let origin = verts[0];
    match basis.len() {
        0 => {
            // A single point: pin each coordinate from both sides.
            for axis in 0..3 {
                let mut a = [0.0; 3];
                a[axis] = 1.0;
                push_canonical(&mut out, Halfspace::new(a, origin[axis]));
                push_canonical(
                    &mut out,
                    Halfspace::new([-a[0], -a[1], -a[2]], -origin[axis]),
                );
            }
        }
        1 => {
            let d = basis[0];
            // Two independent normals orthogonal to the segment.
            let seed = if d[0].abs() <= d[1].abs() && d[0].abs() <= d[2].abs() {
                [1.0, 0.0, 0.0]
            } else if d[1].abs() <= d[2].abs() {
                [0.0, 1.0, 0.0]
            } else {
                [0.0, 0.0, 1.0]
            };
            let u = cross(&d, &seed);
            let u = [u[0] / norm(&u), u[1] / norm(&u), u[2] / norm(&u)];
            let v = cross(&d, &u);
            for nrm in [u, v] {
                let b = dot(&nrm, &origin);
                push_canonical(&mut out, Halfspace::new(nrm, b));
                push_canonical(&mut out, Halfspace::new([-nrm[0], -nrm[1], -nrm[2]], -b));
            }
            // End caps along the segment direction.
            let projections: Vec<f64> = verts.iter().map(|p| dot(&d, p)).collect();
            let lo = projections.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = projections
                .iter()
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max);
            push_canonical(&mut out, Halfspace::new(d, hi));
            push_canonical(&mut out, Halfspace::new([-d[0], -d[1], -d[2]], -lo));
        }
        _ => {
            // Planar polygon: the carrier plane from both sides...
            let n0 = cross(&basis[0], &basis[1]);
            let b0 = dot(&n0, &origin);
            push_canonical(&mut out, Halfspace::new(n0, b0));
            push_canonical(&mut out, Halfspace::new([-n0[0], -n0[1], -n0[2]], -b0));
            // ...plus an in-plane support line through each hull edge.
            for i in 0..verts.len() {
                for j in i + 1..verts.len() {
                    let edge = sub(&verts[j], &verts[i]);
                    let nrm = cross(&n0, &edge);
                    if norm(&nrm) <= GEOM_TOL {
                        continue;
                    }
                    let b = dot(&nrm, &verts[i]);
                    let mut above = false;
                    let mut below = false;
                    for v in verts {
                        let d = dot(&nrm, v) - b;
                        if d > GEOM_TOL * norm(&nrm).max(1.0) {
                            above = true;
                        } else if d < -GEOM_TOL * norm(&nrm).max(1.0) {
                            below = true;
                        }
                    }
                    if above && below {
                        continue;
                    }
                    let h = if above {
                        Halfspace::new([-nrm[0], -nrm[1], -nrm[2]], -b)
                    } else {
                        Halfspace::new(nrm, b)
                    };
                    push_canonical(&mut out, h);
                }
            }
        }
    }
    out
}

/// Builds the polytope spanned by `verts`: keeps only hull vertices and
/// derives the canonical facet list.
pub fn polytope_from_vertices(verts: &[Point]) -> Result<Polytope, PolytopeError> {
    if verts.is_empty() {
        return Err(PolytopeError::EmptyVertexList);
    }
    for (index, v) in verts.iter().enumerate() {
        for &coord in v {
            if !coord.is_finite() || !(-GEOM_TOL..=1.0 + GEOM_TOL).contains(&coord) {
                return Err(PolytopeError::VertexOutOfDomain {
                    index,
                    value: coord,
                });
            }
        }
    }
    let mut vertices = hull_vertices(verts);
    sort_points(&mut vertices);
    let basis = affine_basis(&vertices);
    let mut halfspaces = if basis.len() == 3 {
        facets_rank3(&vertices)
    } else {
        facets_degenerate(&vertices, &basis)
    };
    sort_halfspaces(&mut halfspaces);
    Ok(Polytope {
        vertices,
        halfspaces,
    })
}

/// Rank of the halfspace normal matrix, for unboundedness analysis.
fn normal_rank(hs: &[Halfspace]) -> usize {
    let points: Vec<Point> = std::iter::once([0.0; 3])
        .chain(hs.iter().map(|h| h.a))
        .collect();
    affine_basis(&points).len()
}

/// True when some direction d satisfies a.d <= 0 for every halfspace,
/// i.e. the recession cone is nontrivial and the intersection cannot be
/// bounded. Extreme rays of the cone lie on pairs of active normals.
fn has_recession_direction(hs: &[Halfspace]) -> bool {
    if normal_rank(hs) < 3 {
        return true;
    }
    let feasible_dir = |d: &Point| {
        let len = norm(d);
        len > GEOM_TOL
            && hs
                .iter()
                .all(|h| dot(&h.a, d) <= GEOM_TOL * len * norm(&h.a).max(1.0))
    };
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let d = cross(&hs[i].a, &hs[j].a);
            if feasible_dir(&d) {
                return true;
            }
            let neg = [-d[0], -d[1], -d[2]];
            if feasible_dir(&neg) {
                return true;
            }
        }
    }
    false
}

/// LP feasibility of the raw intersection, used to tell an empty system
/// from an unbounded one when no vertex exists. Free coordinates are
/// split into positive and negative parts and slacks close the rows.
fn intersection_nonempty(hs: &[Halfspace]) -> bool {
    let m = hs.len();
    let mut a = vec![vec![0.0; 6 + m]; m];
    let mut b = vec![0.0; m];
    for (r, h) in hs.iter().enumerate() {
        for c in 0..3 {
            a[r][c] = h.a[c];
            a[r][3 + c] = -h.a[c];
        }
        a[r][6 + r] = 1.0;
        b[r] = h.b;
    }
    simplex_feasible(&a, &b).is_some()
}

/// Solves the 3x3 system with rows n1, n2, n3 and right sides b1..b3.
fn plane_intersection(planes: [(&Point, f64); 3]) -> Option<Point> {
    let (n1, b1) = planes[0];
    let (n2, b2) = planes[1];
    let (n3, b3) = planes[2];
    let det = dot(n1, &cross(n2, n3));
    let scale = norm(n1) * norm(n2) * norm(n3);
    if det.abs() <= 1e-12 * scale.max(1e-12) {
        return None;
    }
    let num = [cross(n2, n3), cross(n3, n1), cross(n1, n2)];
    Some([
        (b1 * num[0][0] + b2 * num[1][0] + b3 * num[2][0]) / det,
        (b1 * num[0][1] + b2 * num[1][1] + b3 * num[2][1]) / det,
        (b1 * num[0][2] + b2 * num[1][2] + b3 * num[2][2]) / det,
    ])
}

/// Vertex enumeration of a bounded halfspace intersection: every triple
/// of independent facet planes is solved and feasible solutions kept.
/// The result is rebuilt through `polytope_from_vertices`, so the stored
/// H-rep is the canonical facet list rather than the raw input.
pub fn polytope_from_halfspaces(hs: &[Halfspace]) -> Result<Polytope, PolytopeError> {
    for (index, h) in hs.iter().enumerate() {
        if !h.b.is_finite() || h.a.iter().any(|v| !v.is_finite()) {
            return Err(PolytopeError::NonFiniteHalfspace { index });
        }
    }
    // Zero-normal rows are either vacuous or immediately infeasible.
    let mut active: Vec<Halfspace> = Vec::new();
    for h in hs {
        if norm(&h.a) <= GEOM_TOL {
            if h.b < -GEOM_TOL {
                return Err(PolytopeError::EmptyIntersection);
            }
            continue;
        }
        active.push(*h);
    }

    let mut candidates: Vec<Point> = Vec::new();
    let n = active.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let Some(p) = plane_intersection([
                    (&active[i].a, active[i].b),
                    (&active[j].a, active[j].b),
                    (&active[k].a, active[k].b),
                ]) else {
                    continue;
                };
                if active.iter().all(|h| h.contains(&p)) {
                    candidates.push(p);
                }
            }
        }
    }
    let vertices = dedup_points(&candidates);
    if vertices.is_empty() {
        return if intersection_nonempty(&active) {
            Err(PolytopeError::Unbounded)
        } else {
            Err(PolytopeError::EmptyIntersection)
        };
    }
    if has_recession_direction(&active) {
        return Err(PolytopeError::Unbounded);
    }
    polytope_from_vertices(&vertices)
}

impl Polytope {
    /// Membership test against the H-rep. When the point is inside, also
    /// returns convex coefficients over the vertices that reproduce it.
    pub fn contains(&self, x: &Point) -> (bool, Option<Vec<f64>>) {
        if !self.halfspaces.iter().all(|h| h.contains(x)) {
            return (false, None);
        }
        (true, convex_coefficients(&self.vertices, x))
    }

    /// Edges as index pairs into `vertices`. A pair is an edge when the
    /// face cut out by all facets tight at both endpoints contains no
    /// third vertex.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let tight_sets: Vec<Vec<usize>> = self
            .vertices
            .iter()
            .map(|v| {
                self.halfspaces
                    .iter()
                    .enumerate()
                    .filter(|(_, h)| h.tight_at(v))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let mut out = Vec::new();
        for i in 0..self.vertices.len() {
            for j in i + 1..self.vertices.len() {
                let common: Vec<usize> = tight_sets[i]
                    .iter()
                    .filter(|f| tight_sets[j].contains(f))
                    .cloned()
                    .collect();
                if common.len() < 2 {
                    continue;
                }
                let face_has_other = (0..self.vertices.len())
                    .filter(|&k| k != i && k != j)
                    .any(|k| common.iter().all(|f| tight_sets[k].contains(f)));
                if !face_has_other {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Edges as coordinate pairs.
    pub fn edge_points(&self) -> Vec<(Point, Point)> {
        self.edges()
            .into_iter()
            .map(|(i, j)| (self.vertices[i], self.vertices[j]))
            .collect()
    }
}

/// Shared/exclusive structure of two polytopes, for the combined figure.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedPolytopes {
    pub shared_vertices: Vec<Point>,
    pub shared_edges: Vec<(Point, Point)>,
    pub first_only_edges: Vec<(Point, Point)>,
    pub second_only_edges: Vec<(Point, Point)>,
}

fn edges_equal(a: &(Point, Point), b: &(Point, Point)) -> bool {
    (points_equal(&a.0, &b.0) && points_equal(&a.1, &b.1))
        || (points_equal(&a.0, &b.1) && points_equal(&a.1, &b.0))
}

/// Classifies vertices and edges of two polytopes as shared or
/// exclusive under the geometric tolerance.
pub fn combine(a: &Polytope, b: &Polytope) -> CombinedPolytopes {
    let shared_vertices: Vec<Point> = a
        .vertices
        .iter()
        .filter(|v| b.vertices.iter().any(|w| points_equal(v, w)))
        .cloned()
        .collect();
    let ea = a.edge_points();
    let eb = b.edge_points();
    let shared_edges: Vec<(Point, Point)> = ea
        .iter()
        .filter(|e| eb.iter().any(|f| edges_equal(e, f)))
        .cloned()
        .collect();
    let first_only_edges = ea
        .iter()
        .filter(|e| !shared_edges.iter().any(|f| edges_equal(e, f)))
        .cloned()
        .collect();
    let second_only_edges = eb
        .iter()
        .filter(|e| !shared_edges.iter().any(|f| edges_equal(e, f)))
        .cloned()
        .collect();
    CombinedPolytopes {
        shared_vertices,
        shared_edges,
        first_only_edges,
        second_only_edges,
    }
}

/// Vertex sets of the two connective polytopes over (E_A, E_B, P(E_C)).
pub fn and_vertices() -> Vec<Point> {
    vec![
        [0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 1.0],
    ]
}

pub fn or_vertices() -> Vec<Point> {
    vec![
        [0.0, 0.0, 0.0],
        [0.0, 1.0, 1.0],
        [1.0, 0.0, 1.0],
        [1.0, 1.0, 1.0],
    ]
}
