//! Conforming triangle meshes with tagged boundary edges.
//!
//! The text format is line oriented:
//!
//! ```text
//! tmesh 1
//! nodes N
//! x y            (N lines)
//! triangles T
//! i j k          (T lines, 0-based, counterclockwise)
//! bedges B
//! i j TAG        (B lines, TAG is G or GN)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::GeometrySummary;

pub type Point = [f64; 2];

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("cannot read mesh file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid mesh: {entity}: {msg}")]
    Invariant { entity: String, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
}

fn invariant(entity: impl Into<String>, msg: impl Into<String>) -> MeshError {
    MeshError::Invariant {
        entity: entity.into(),
        msg: msg.into(),
    }
}

/// Boundary part an edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryTag {
    /// Radiative part `Γ`.
    Gamma,
    /// Neumann part `Γ_N`.
    GammaN,
}

impl BoundaryTag {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "G" => Some(BoundaryTag::Gamma),
            "GN" => Some(BoundaryTag::GammaN),
            _ => None,
        }
    }
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryTag::Gamma => "G",
            BoundaryTag::GammaN => "GN",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub tag: BoundaryTag,
}

/// A validated triangle mesh. Immutable once constructed.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    nodes: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary_edges: Vec<BoundaryEdge>,
    boundary_node: Vec<bool>,
}

impl TriMesh {
    /// Builds a mesh and checks every invariant.
    pub fn new(
        nodes: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        boundary_edges: Vec<BoundaryEdge>,
    ) -> Result<Self, MeshError> {
        validate(&nodes, &triangles, &boundary_edges)?;
        let mut boundary_node = vec![false; nodes.len()];
        for e in &boundary_edges {
            boundary_node[e.nodes[0]] = true;
            boundary_node[e.nodes[1]] = true;
        }
        Ok(Self {
            nodes,
            triangles,
            boundary_edges,
            boundary_node,
        })
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_boundary_node(&self, i: usize) -> bool {
        self.boundary_node[i]
    }

    pub fn edges_with_tag(&self, tag: BoundaryTag) -> impl Iterator<Item = &BoundaryEdge> + '_ {
        self.boundary_edges.iter().filter(move |e| e.tag == tag)
    }

    pub fn has_tag(&self, tag: BoundaryTag) -> bool {
        self.edges_with_tag(tag).next().is_some()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        signed_area(&self.triangle_points(t))
    }

    pub fn centroid(&self, t: usize) -> Point {
        let [a, b, c] = self.triangle_points(t);
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn edge_length(&self, e: &BoundaryEdge) -> f64 {
        dist(self.nodes[e.nodes[0]], self.nodes[e.nodes[1]])
    }

    pub fn measure(&self, tag: BoundaryTag) -> f64 {
        self.edges_with_tag(tag).map(|e| self.edge_length(e)).sum()
    }

    /// Area of `Ω`.
    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.triangle_area(t)).sum()
    }

    /// Gradients of the three barycentric functions of triangle `t` (constant per element).
    pub fn shape_gradients(&self, t: usize) -> [[f64; 2]; 3] {
        let [p0, p1, p2] = self.triangle_points(t);
        let two_area = 2.0 * signed_area(&[p0, p1, p2]);
        [
            [(p1[1] - p2[1]) / two_area, (p2[0] - p1[0]) / two_area],
            [(p2[1] - p0[1]) / two_area, (p0[0] - p2[0]) / two_area],
            [(p0[1] - p1[1]) / two_area, (p1[0] - p0[0]) / two_area],
        ]
    }

    /// Splits every triangle into four through its edge midpoints; tags are inherited.
    pub fn refine_uniform(&self) -> TriMesh {
        let mut nodes = self.nodes.clone();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut mid = |a: usize, b: usize, nodes: &mut Vec<Point>| -> usize {
            let key = (a.min(b), a.max(b));
            *midpoint.entry(key).or_insert_with(|| {
                let (pa, pb) = (nodes[a], nodes[b]);
                nodes.push([0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])]);
                nodes.len() - 1
            })
        };
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let ab = mid(a, b, &mut nodes);
            let bc = mid(b, c, &mut nodes);
            let ca = mid(c, a, &mut nodes);
            triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for e in &self.boundary_edges {
            let [a, b] = e.nodes;
            let m = mid(a, b, &mut nodes);
            boundary_edges.push(BoundaryEdge {
                nodes: [a, m],
                tag: e.tag,
            });
            boundary_edges.push(BoundaryEdge {
                nodes: [m, b],
                tag: e.tag,
            });
        }
        TriMesh::new(nodes, triangles, boundary_edges).expect("refinement preserves validity")
    }

    /// Serializes to the text format.
    pub fn to_text(&self) -> String {
        let mut s = String::from("tmesh 1\n");
        let _ = writeln!(s, "nodes {}", self.nodes.len());
        for p in &self.nodes {
            let _ = writeln!(s, "{:.17e} {:.17e}", p[0], p[1]);
        }
        let _ = writeln!(s, "triangles {}", self.triangles.len());
        for t in &self.triangles {
            let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
        }
        let _ = writeln!(s, "bedges {}", self.boundary_edges.len());
        for e in &self.boundary_edges {
            let _ = writeln!(s, "{} {} {}", e.nodes[0], e.nodes[1], e.tag);
        }
        s
    }

    /// Whether the mesh fills its convex hull.
    pub fn is_convex(&self) -> bool {
        let hull = convex_hull(&self.nodes);
        let hull_area = polygon_area(&hull);
        (hull_area - self.area()).abs() <= 1e-12 * hull_area.max(f64::MIN_POSITIVE)
    }

    pub fn diameter(&self) -> f64 {
        let hull = convex_hull(&self.nodes);
        let mut d = 0.0f64;
        for (i, a) in hull.iter().enumerate() {
            for b in &hull[i + 1..] {
                d = d.max(dist(*a, *b));
            }
        }
        d
    }

    /// Half the smallest inradius among triangles touching the boundary.
    ///
    /// A stand-in for the covering radius `r_#`, which has no constructive
    /// definition; results that depend on it are labeled heuristic.
    pub fn default_r_sharp(&self) -> f64 {
        let mut r = f64::INFINITY;
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&i| self.boundary_node[i]) {
                let [a, b, c] = self.triangle_points(t);
                let perimeter = dist(a, b) + dist(b, c) + dist(c, a);
                r = r.min(2.0 * self.triangle_area(t) / perimeter);
            }
        }
        0.5 * r
    }
}

fn signed_area(p: &[Point; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]))
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Point>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn polygon_area(poly: &[Point]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        * 0.5
}

fn validate(
    nodes: &[Point],
    triangles: &[[usize; 3]],
    bedges: &[BoundaryEdge],
) -> Result<(), MeshError> {
    let nv = nodes.len();
    if triangles.is_empty() {
        return Err(invariant("mesh", "no triangles"));
    }
    for (i, p) in nodes.iter().enumerate() {
        if !p[0].is_finite() || !p[1].is_finite() {
            return Err(invariant(format!("node {i}"), "non-finite coordinate"));
        }
    }
    let mut used = vec![false; nv];
    let mut edge_tris: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t, tri) in triangles.iter().enumerate() {
        for &i in tri {
            if i >= nv {
                return Err(invariant(format!("triangle {t}"), format!("node index {i} out of range")));
            }
            used[i] = true;
        }
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            return Err(invariant(format!("triangle {t}"), "repeated node"));
        }
        let pts = [nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]];
        let area = signed_area(&pts);
        let longest = dist(pts[0], pts[1]).max(dist(pts[1], pts[2])).max(dist(pts[2], pts[0]));
        if !(area > 1e-14 * longest * longest) {
            return Err(invariant(
                format!("triangle {t}"),
                format!("signed area {area} is not strictly positive"),
            ));
        }
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            edge_tris.entry((a.min(b), a.max(b))).or_default().push(t);
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(invariant(format!("node {i}"), "not referenced by any triangle"));
    }
    for (&(a, b), tris) in &edge_tris {
        if tris.len() > 2 {
            return Err(invariant(format!("edge ({a}, {b})"), "shared by more than two triangles"));
        }
    }

    let mut tagged: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, e) in bedges.iter().enumerate() {
        let [a, b] = e.nodes;
        if a >= nv || b >= nv {
            return Err(invariant(format!("boundary edge {k}"), "node index out of range"));
        }
        let key = (a.min(b), a.max(b));
        match edge_tris.get(&key) {
            None => {
                return Err(invariant(format!("boundary edge {k}"), "not an edge of any triangle"))
            }
            Some(t) if t.len() != 1 => {
                return Err(invariant(
                    format!("boundary edge {k}"),
                    "interior edge tagged as boundary",
                ))
            }
            _ => {}
        }
        if let Some(prev) = tagged.insert(key, k) {
            return Err(invariant(
                format!("boundary edge {k}"),
                format!("duplicates boundary edge {prev}; Γ and Γ_N must be disjoint"),
            ));
        }
    }
    let mut boundary_count = 0usize;
    for (&(a, b), tris) in &edge_tris {
        if tris.len() == 1 {
            boundary_count += 1;
            if !tagged.contains_key(&(a, b)) {
                return Err(invariant(format!("edge ({a}, {b})"), "boundary edge without a tag"));
            }
        }
    }

    // connectivity across shared edges
    let mut uf = UnionFind::new(triangles.len());
    for tris in edge_tris.values() {
        if tris.len() == 2 {
            uf.union(tris[0], tris[1]);
        }
    }
    let root = uf.find(0);
    if let Some(t) = (0..triangles.len()).find(|&t| uf.find(t) != root) {
        return Err(invariant(format!("triangle {t}"), "mesh is not connected"));
    }

    // V - E + F = 2 - (number of boundary loops); equals 1 when simply connected
    let mut loops = UnionFind::new(nv);
    let mut on_boundary = vec![false; nv];
    for e in bedges {
        loops.union(e.nodes[0], e.nodes[1]);
        on_boundary[e.nodes[0]] = true;
        on_boundary[e.nodes[1]] = true;
    }
    let mut roots: Vec<usize> = (0..nv).filter(|&i| on_boundary[i]).map(|i| loops.find(i)).collect();
    roots.sort_unstable();
    roots.dedup();
    let euler = nv as i64 - edge_tris.len() as i64 + triangles.len() as i64;
    let expected = 2 - roots.len() as i64;
    if euler != expected || boundary_count != bedges.len() {
        return Err(invariant(
            "mesh",
            format!(
                "Euler characteristic {euler} inconsistent with {} boundary loop(s)",
                roots.len()
            ),
        ));
    }
    Ok(())
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Parses the text mesh format.
pub fn parse_mesh(text: &str) -> Result<TriMesh, MeshError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let perr = |line: usize, msg: String| MeshError::Parse { line, msg };
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| perr(0, format!("unexpected end of file, expected {what}")))
    };

    let (ln, header) = next("header")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["tmesh", "1"] {
        return Err(perr(ln, format!("expected header `tmesh 1`, found `{header}`")));
    }

    fn section(ln: usize, line: &str, name: &str) -> Result<usize, MeshError> {
        let mut it = line.split_whitespace();
        if it.next() != Some(name) {
            return Err(MeshError::Parse {
                line: ln,
                msg: format!("expected section `{name} <count>`, found `{line}`"),
            });
        }
        let count = it.next().and_then(|c| c.parse().ok()).ok_or_else(|| MeshError::Parse {
            line: ln,
            msg: format!("bad count in `{line}`"),
        })?;
        if it.next().is_some() {
            return Err(MeshError::Parse {
                line: ln,
                msg: format!("trailing tokens in `{line}`"),
            });
        }
        Ok(count)
    }

    fn fields<T: std::str::FromStr>(ln: usize, line: &str, n: usize) -> Result<Vec<T>, MeshError> {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != n {
            return Err(MeshError::Parse {
                line: ln,
                msg: format!("expected {n} fields, found {}", parts.len()),
            });
        }
        parts
            .iter()
            .map(|p| {
                p.parse().map_err(|_| MeshError::Parse {
                    line: ln,
                    msg: format!("cannot parse `{p}`"),
                })
            })
            .collect()
    }

    let (ln, l) = next("nodes section")?;
    let nn = section(ln, l, "nodes")?;
    let mut nodes = Vec::with_capacity(nn);
    for _ in 0..nn {
        let (ln, l) = next("node line")?;
        let v: Vec<f64> = fields(ln, l, 2)?;
        nodes.push([v[0], v[1]]);
    }
    let (ln, l) = next("triangles section")?;
    let nt = section(ln, l, "triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (ln, l) = next("triangle line")?;
        let v: Vec<usize> = fields(ln, l, 3)?;
        triangles.push([v[0], v[1], v[2]]);
    }
    let (ln, l) = next("bedges section")?;
    let nb = section(ln, l, "bedges")?;
    let mut bedges = Vec::with_capacity(nb);
    for _ in 0..nb {
        let (ln, l) = next("boundary edge line")?;
        let parts: Vec<&str> = l.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(perr(ln, format!("expected `i j TAG`, found `{l}`")));
        }
        let idx = |s: &str| s.parse::<usize>().map_err(|_| perr(ln, format!("cannot parse `{s}`")));
        let tag = BoundaryTag::parse(parts[2])
            .ok_or_else(|| perr(ln, format!("unknown tag `{}`, expected G or GN", parts[2])))?;
        bedges.push(BoundaryEdge {
            nodes: [idx(parts[0])?, idx(parts[1])?],
            tag,
        });
    }
    if let Some((ln, l)) = lines.next() {
        return Err(perr(ln, format!("unexpected trailing content `{l}`")));
    }
    TriMesh::new(nodes, triangles, bedges)
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<TriMesh, MeshError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| MeshError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_mesh(&text)
}

/// How the edges of the unit square are split between `Γ` and `Γ_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SquareBoundary {
    AllRadiative,
    /// `x = 0` is `Γ_N`, the rest is `Γ`.
    LeftNeumann,
    /// `x = 0` and `x = 1` are `Γ_N`, top and bottom are `Γ`.
    LeftRightNeumann,
    AllNeumann,
}

impl SquareBoundary {
    fn tag(self, side: Side) -> BoundaryTag {
        use BoundaryTag::*;
        match (self, side) {
            (SquareBoundary::AllRadiative, _) => Gamma,
            (SquareBoundary::AllNeumann, _) => GammaN,
            (SquareBoundary::LeftNeumann, Side::Left) => GammaN,
            (SquareBoundary::LeftNeumann, _) => Gamma,
            (SquareBoundary::LeftRightNeumann, Side::Left | Side::Right) => GammaN,
            (SquareBoundary::LeftRightNeumann, _) => Gamma,
        }
    }
}

#[derive(Clone, Copy)]
enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

/// Structured mesh of `[0,1]²` with `2m²` triangles.
pub fn unit_square_mesh(m: usize, rule: SquareBoundary) -> Result<TriMesh, MeshError> {
    if m == 0 {
        return Err(MeshError::Domain("unit_square_mesh needs m >= 1".into()));
    }
    let id = |i: usize, j: usize| j * (m + 1) + i;
    let h = 1.0 / m as f64;
    let mut nodes = Vec::with_capacity((m + 1) * (m + 1));
    for j in 0..=m {
        for i in 0..=m {
            // exact endpoints keep boundary coordinates at 0 and 1
            let x = if i == m { 1.0 } else { i as f64 * h };
            let y = if j == m { 1.0 } else { j as f64 * h };
            nodes.push([x, y]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * m * m);
    for j in 0..m {
        for i in 0..m {
            let (a, b, c, d) = (id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1));
            triangles.push([a, b, c]);
            triangles.push([a, c, d]);
        }
    }
    let mut bedges = Vec::with_capacity(4 * m);
    for i in 0..m {
        bedges.push(BoundaryEdge {
            nodes: [id(i, 0), id(i + 1, 0)],
            tag: rule.tag(Side::Bottom),
        });
    }
    for j in 0..m {
        bedges.push(BoundaryEdge {
            nodes: [id(m, j), id(m, j + 1)],
            tag: rule.tag(Side::Right),
        });
    }
    for i in (0..m).rev() {
        bedges.push(BoundaryEdge {
            nodes: [id(i + 1, m), id(i, m)],
            tag: rule.tag(Side::Top),
        });
    }
    for j in (0..m).rev() {
        bedges.push(BoundaryEdge {
            nodes: [id(0, j + 1), id(0, j)],
            tag: rule.tag(Side::Left),
        });
    }
    TriMesh::new(nodes, triangles, bedges)
}

/// Measures of the mesh, with the heuristic covering radius.
pub fn geometry_summary(mesh: &TriMesh) -> GeometrySummary {
    let meas_gamma = mesh.measure(BoundaryTag::Gamma);
    let meas_gamma_n = mesh.measure(BoundaryTag::GammaN);
    GeometrySummary {
        vol_omega: mesh.area(),
        meas_boundary: meas_gamma + meas_gamma_n,
        meas_gamma,
        meas_gamma_n,
        diameter: mesh.diameter(),
        r_sharp: mesh.default_r_sharp(),
        r_sharp_heuristic: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT_SQUARE: &str = "tmesh 1
nodes 4
0 0
1 0
1 1
0 1
triangles 2
0 1 2
0 2 3
bedges 4
0 1 G
1 2 G
2 3 G
3 0 G
";

    #[test]
    fn parses_unit_square() {
        let m = parse_mesh(UNIT_SQUARE).unwrap();
        assert_eq!(m.num_nodes(), 4);
        assert!((m.area() - 1.0).abs() < 1e-15);
        let g = geometry_summary(&m);
        assert_eq!(
            (g.vol_omega, g.meas_boundary, g.meas_gamma, g.meas_gamma_n),
            (1.0, 4.0, 4.0, 0.0)
        );
        assert!((g.diameter - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(parse_mesh(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn rejects_zero_area_triangle() {
        let text = "tmesh 1\nnodes 3\n0 0\n1 0\n2 0\ntriangles 1\n0 1 2\nbedges 3\n0 1 G\n1 2 G\n2 0 G\n";
        let err = parse_mesh(text).unwrap_err();
        assert!(matches!(err, MeshError::Invariant { ref entity, .. } if entity == "triangle 0"), "{err}");
    }

    #[test]
    fn rejects_tagged_interior_edge() {
        let text = UNIT_SQUARE.replace("bedges 4", "bedges 5") + "0 2 GN\n";
        let err = parse_mesh(&text).unwrap_err();
        assert!(err.to_string().contains("interior edge"), "{err}");
    }

    #[test]
    fn rejects_untagged_and_doubly_tagged() {
        let missing = UNIT_SQUARE.replace("bedges 4", "bedges 3").replace("3 0 G\n", "");
        assert!(parse_mesh(&missing).unwrap_err().to_string().contains("without a tag"));
        let twice = UNIT_SQUARE.replace("bedges 4", "bedges 5") + "1 0 GN\n";
        assert!(parse_mesh(&twice).unwrap_err().to_string().contains("disjoint"));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = UNIT_SQUARE.replace("1 1\n", "1 x\n");
        match parse_mesh(&bad).unwrap_err() {
            MeshError::Parse { line, .. } => assert_eq!(line, 5),
            e => panic!("{e}"),
        }
        let bad_tag = UNIT_SQUARE.replace("3 0 G", "3 0 Q");
        assert!(matches!(parse_mesh(&bad_tag), Err(MeshError::Parse { line: 14, .. })));
    }

    #[test]
    fn structured_square() {
        let m1 = unit_square_mesh(1, SquareBoundary::AllRadiative).unwrap();
        assert_eq!(m1.num_triangles(), 2);
        assert_eq!(m1.edges_with_tag(BoundaryTag::Gamma).count(), 4);
        assert_eq!(m1.edges_with_tag(BoundaryTag::GammaN).count(), 0);
        let m2 = unit_square_mesh(2, SquareBoundary::AllRadiative).unwrap();
        assert_eq!(m2.num_triangles(), 8);
        assert!((m2.area() - 1.0).abs() < 1e-15);
        let m4 = unit_square_mesh(4, SquareBoundary::LeftNeumann).unwrap();
        assert!((m4.measure(BoundaryTag::GammaN) - 1.0).abs() < 1e-15);
        assert!((m4.measure(BoundaryTag::Gamma) - 3.0).abs() < 1e-15);
        assert!(unit_square_mesh(0, SquareBoundary::AllRadiative).is_err());
    }

    #[test]
    fn refinement_invariant_geometry() {
        let coarse = unit_square_mesh(1, SquareBoundary::LeftNeumann).unwrap();
        let fine = unit_square_mesh(8, SquareBoundary::LeftNeumann).unwrap();
        let (a, b) = (geometry_summary(&coarse), geometry_summary(&fine));
        for (x, y) in [
            (a.vol_omega, b.vol_omega),
            (a.meas_boundary, b.meas_boundary),
            (a.meas_gamma, b.meas_gamma),
            (a.meas_gamma_n, b.meas_gamma_n),
            (a.diameter, b.diameter),
        ] {
            assert!((x - y).abs() <= 1e-14 * x.abs().max(1.0));
        }
        let mut m = coarse.clone();
        for _ in 0..3 {
            m = m.refine_uniform();
        }
        let c = geometry_summary(&m);
        assert_eq!(m.num_triangles(), 128);
        assert!((c.vol_omega - 1.0).abs() < 1e-13);
        assert!((c.meas_gamma - 3.0).abs() < 1e-13);
    }

    #[test]
    fn l_shape_area_and_convexity() {
        // three unit squares: [0,2]x[0,1] plus [0,1]x[1,2]
        let text = "tmesh 1
nodes 8
0 0
1 0
2 0
0 1
1 1
2 1
0 2
1 2
triangles 6
0 1 4
0 4 3
1 2 5
1 5 4
3 4 7
3 7 6
bedges 8
0 1 G
1 2 G
2 5 G
5 4 G
4 7 GN
7 6 G
6 3 G
3 0 G
";
        let m = parse_mesh(text).unwrap();
        assert!((m.area() - 3.0).abs() < 1e-15);
        assert!(!m.is_convex());
        assert!(unit_square_mesh(3, SquareBoundary::AllRadiative).unwrap().is_convex());
        assert!((m.diameter() - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn annulus_like_mesh_passes_euler_check() {
        // square with a square hole: outer [0,3]^2, hole [1,2]^2
        let mut nodes = Vec::new();
        for j in 0..4 {
            for i in 0..4 {
                nodes.push([i as f64, j as f64]);
            }
        }
        let id = |i: usize, j: usize| j * 4 + i;
        let mut tris = Vec::new();
        for j in 0..3 {
            for i in 0..3 {
                if i == 1 && j == 1 {
                    continue;
                }
                tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        let mut bedges = Vec::new();
        let mut push = |a, b| bedges.push(BoundaryEdge { nodes: [a, b], tag: BoundaryTag::Gamma });
        for i in 0..3 {
            push(id(i, 0), id(i + 1, 0));
            push(id(i, 3), id(i + 1, 3));
            push(id(0, i), id(0, i + 1));
            push(id(3, i), id(3, i + 1));
        }
        push(id(1, 1), id(2, 1));
        push(id(2, 1), id(2, 2));
        push(id(2, 2), id(1, 2));
        push(id(1, 2), id(1, 1));
        let m = TriMesh::new(nodes, tris, bedges).unwrap();
        assert!((m.area() - 8.0).abs() < 1e-14);
    }

    #[test]
    fn default_r_sharp_positive() {
        let m = unit_square_mesh(4, SquareBoundary::AllRadiative).unwrap();
        let r = m.default_r_sharp();
        // right isosceles triangle with legs 1/4: inradius (2 - √2)/8
        assert!((r - 0.5 * (2.0 - 2f64.sqrt()) / 8.0).abs() < 1e-15);
    }
}
