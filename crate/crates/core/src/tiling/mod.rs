//! The dP3 lattice: the triangular lattice superposed with its dual
//! hexagonal lattice.
//!
//! Every triangle is cut into three quadrilateral faces by its centroid and
//! edge midpoints. A triangular-lattice point `(a, b)` sits at
//! `a·(1, 0) + b·(1/2, √3/2)`. The up triangle `(a, b)` has corners
//! `(a,b), (a+1,b), (a,b+1)`; the down triangle `(a, b)` has corners
//! `(a+1,b), (a,b+1), (a+1,b+1)`. A face is named by its triangle and the
//! index of the triangle corner it contains.
//!
//! Midpoints are black; triangle vertices and centroids are white.

mod calibrate;
mod labeling;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use calibrate::{
    calibrate, default_calibration_path, load_or_calibrate, CalibrationError, CalibrationFile,
    CalibrationReport, LabelTable, SCHEMA_VERSION,
};
pub use labeling::{
    quiver_from_tiling, rotate_about, BlockScheme, BlockShape, BlockType, HalfPoint, Labeling,
    Tiling,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Up,
    Down,
}

impl Orientation {
    pub fn index(self) -> usize {
        match self {
            Orientation::Up => 0,
            Orientation::Down => 1,
        }
    }

    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }
}

/// Which lattice edge a midpoint bisects: `E` joins `(a,b)-(a+1,b)`,
/// `N` joins `(a,b)-(a,b+1)`, `D` joins `(a+1,b)-(a,b+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MidDir {
    E,
    N,
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriCoord {
    pub a: i32,
    pub b: i32,
}

impl TriCoord {
    pub const fn new(a: i32, b: i32) -> Self {
        TriCoord { a, b }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

/// Exact planar position: the real point is `(x / 12, y · √3 / 12)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn to_f64(self) -> (f64, f64) {
        (self.x as f64 / 12.0, self.y as f64 * 3f64.sqrt() / 12.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VertexId {
    Tri { a: i32, b: i32 },
    Centroid { a: i32, b: i32, o: Orientation },
    Midpoint { a: i32, b: i32, d: MidDir },
}

impl VertexId {
    pub fn color(&self) -> Color {
        match self {
            VertexId::Midpoint { .. } => Color::Black,
            _ => Color::White,
        }
    }

    pub fn position(&self) -> Point {
        let base = |a: i32, b: i32| (12 * a as i64 + 6 * b as i64, 6 * b as i64);
        match *self {
            VertexId::Tri { a, b } => {
                let (x, y) = base(a, b);
                Point { x, y }
            }
            VertexId::Midpoint { a, b, d } => {
                let (x, y) = base(a, b);
                match d {
                    MidDir::E => Point { x: x + 6, y },
                    MidDir::N => Point { x: x + 3, y: y + 3 },
                    MidDir::D => Point { x: x + 9, y: y + 3 },
                }
            }
            VertexId::Centroid { a, b, o } => {
                let (x, y) = base(a, b);
                match o {
                    Orientation::Up => Point { x: x + 6, y: y + 2 },
                    Orientation::Down => Point { x: x + 12, y: y + 4 },
                }
            }
        }
    }

    /// Number of incident edges in the infinite lattice.
    pub fn lattice_degree(&self) -> usize {
        match self {
            VertexId::Tri { .. } => 6,
            VertexId::Centroid { .. } => 3,
            VertexId::Midpoint { .. } => 4,
        }
    }

    pub fn translated(&self, da: i32, db: i32) -> VertexId {
        match *self {
            VertexId::Tri { a, b } => VertexId::Tri { a: a + da, b: b + db },
            VertexId::Centroid { a, b, o } => VertexId::Centroid { a: a + da, b: b + db, o },
            VertexId::Midpoint { a, b, d } => VertexId::Midpoint { a: a + da, b: b + db, d },
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Tri { a, b } => write!(f, "t_{a}_{b}"),
            VertexId::Centroid { a, b, o } => {
                let o = if *o == Orientation::Up { "u" } else { "d" };
                write!(f, "c_{a}_{b}_{o}")
            }
            VertexId::Midpoint { a, b, d } => write!(f, "m_{a}_{b}_{d:?}"),
        }
    }
}

/// A quadrilateral face: the corner `c` of triangle `(a, b, o)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceId {
    pub a: i32,
    pub b: i32,
    pub o: Orientation,
    pub c: u8,
}

impl FaceId {
    pub const fn new(a: i32, b: i32, o: Orientation, c: u8) -> Self {
        FaceId { a, b, o, c }
    }

    pub fn translated(&self, da: i32, db: i32) -> FaceId {
        FaceId { a: self.a + da, b: self.b + db, ..*self }
    }

    /// The triangle-lattice vertex this face contains.
    pub fn tri_vertex(&self) -> TriCoord {
        triangle_corners(self.a, self.b, self.o)[self.c as usize]
    }

    pub fn centroid(&self) -> VertexId {
        VertexId::Centroid { a: self.a, b: self.b, o: self.o }
    }

    /// The two edge midpoints of the face, before orientation is fixed.
    fn midpoints(&self) -> [VertexId; 2] {
        let (a, b) = (self.a, self.b);
        let m = |a, b, d| VertexId::Midpoint { a, b, d };
        match (self.o, self.c) {
            (Orientation::Up, 0) => [m(a, b, MidDir::E), m(a, b, MidDir::N)],
            (Orientation::Up, 1) => [m(a, b, MidDir::E), m(a, b, MidDir::D)],
            (Orientation::Up, 2) => [m(a, b, MidDir::N), m(a, b, MidDir::D)],
            (Orientation::Down, 0) => [m(a, b, MidDir::D), m(a + 1, b, MidDir::N)],
            (Orientation::Down, 1) => [m(a, b, MidDir::D), m(a, b + 1, MidDir::E)],
            (Orientation::Down, 2) => [m(a + 1, b, MidDir::N), m(a, b + 1, MidDir::E)],
            _ => panic!("corner index {} out of range", self.c),
        }
    }

    /// Sum of the four boundary vertex positions (four times the center).
    pub fn center4(&self) -> Point {
        face_boundary(self).vertices.iter().fold(Point { x: 0, y: 0 }, |acc, v| {
            let p = v.position();
            Point { x: acc.x + p.x, y: acc.y + p.y }
        })
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = if self.o == Orientation::Up { "up" } else { "down" };
        write!(f, "({}, {}, {o}, {})", self.a, self.b, self.c)
    }
}

/// An edge, always stored as (white endpoint, black endpoint).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId {
    pub white: VertexId,
    pub black: VertexId,
}

impl EdgeId {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        match (u.color(), v.color()) {
            (Color::White, Color::Black) => EdgeId { white: u, black: v },
            (Color::Black, Color::White) => EdgeId { white: v, black: u },
            _ => panic!("edge {u} - {v} does not join opposite colors"),
        }
    }

    /// The two faces on either side of the edge.
    pub fn faces(&self) -> [FaceId; 2] {
        let VertexId::Midpoint { a, b, d } = self.black else {
            unreachable!("black endpoint is a midpoint")
        };
        let (p, q) = lattice_edge(a, b, d);
        match self.white {
            VertexId::Tri { a: va, b: vb } => {
                let v = TriCoord::new(va, vb);
                let [t1, t2] = triangles_on_edge(a, b, d);
                [face_at_corner(t1, v), face_at_corner(t2, v)]
            }
            VertexId::Centroid { a: ta, b: tb, o } => {
                let t = (ta, tb, o);
                [face_at_corner(t, p), face_at_corner(t, q)]
            }
            VertexId::Midpoint { .. } => unreachable!("white endpoint is never a midpoint"),
        }
    }
}

/// A boundary edge of a face together with both faces it separates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundaryEdge {
    pub edge: EdgeId,
    pub faces: [FaceId; 2],
}

impl BoundaryEdge {
    /// The face across the edge from `f`.
    pub fn other(&self, f: &FaceId) -> FaceId {
        if self.faces[0] == *f {
            self.faces[1]
        } else {
            self.faces[0]
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceBoundary {
    /// Counterclockwise: triangle vertex, midpoint, centroid, midpoint.
    pub vertices: [VertexId; 4],
    /// `edges[k]` joins `vertices[k]` and `vertices[(k + 1) % 4]`.
    pub edges: [BoundaryEdge; 4],
}

pub fn triangle_corners(a: i32, b: i32, o: Orientation) -> [TriCoord; 3] {
    match o {
        Orientation::Up => [TriCoord::new(a, b), TriCoord::new(a + 1, b), TriCoord::new(a, b + 1)],
        Orientation::Down => {
            [TriCoord::new(a + 1, b), TriCoord::new(a, b + 1), TriCoord::new(a + 1, b + 1)]
        }
    }
}

fn lattice_edge(a: i32, b: i32, d: MidDir) -> (TriCoord, TriCoord) {
    match d {
        MidDir::E => (TriCoord::new(a, b), TriCoord::new(a + 1, b)),
        MidDir::N => (TriCoord::new(a, b), TriCoord::new(a, b + 1)),
        MidDir::D => (TriCoord::new(a + 1, b), TriCoord::new(a, b + 1)),
    }
}

fn triangles_on_edge(a: i32, b: i32, d: MidDir) -> [(i32, i32, Orientation); 2] {
    match d {
        MidDir::E => [(a, b, Orientation::Up), (a, b - 1, Orientation::Down)],
        MidDir::N => [(a, b, Orientation::Up), (a - 1, b, Orientation::Down)],
        MidDir::D => [(a, b, Orientation::Up), (a, b, Orientation::Down)],
    }
}

fn face_at_corner(t: (i32, i32, Orientation), v: TriCoord) -> FaceId {
    let corners = triangle_corners(t.0, t.1, t.2);
    let c = corners.iter().position(|&p| p == v).expect("vertex is a corner of the triangle");
    FaceId::new(t.0, t.1, t.2, c as u8)
}

fn cross(o: Point, p: Point, q: Point) -> i64 {
    (p.x - o.x) * (q.y - o.y) - (p.y - o.y) * (q.x - o.x)
}

/// Boundary 4-cycle of `f`, counterclockwise from its triangle vertex.
pub fn face_boundary(f: &FaceId) -> FaceBoundary {
    let t = VertexId::Tri { a: f.tri_vertex().a, b: f.tri_vertex().b };
    let [mut m1, mut m2] = f.midpoints();
    let c = f.centroid();
    if cross(t.position(), m1.position(), c.position()) < 0 {
        std::mem::swap(&mut m1, &mut m2);
    }
    let vertices = [t, m1, c, m2];
    let edges = std::array::from_fn(|k| {
        let edge = EdgeId::new(vertices[k], vertices[(k + 1) % 4]);
        BoundaryEdge { edge, faces: edge.faces() }
    });
    FaceBoundary { vertices, edges }
}

/// The four faces sharing an edge with `f`, in boundary order.
pub fn face_adjacency(f: &FaceId) -> [FaceId; 4] {
    face_boundary(f).edges.map(|e| e.other(f))
}

/// All faces of triangles `(a, b)` with `a` in `arange` and `b` in `brange`.
pub fn faces_in_window(
    arange: std::ops::RangeInclusive<i32>,
    brange: std::ops::RangeInclusive<i32>,
) -> Vec<FaceId> {
    let mut out = Vec::new();
    for b in brange {
        for a in arange.clone() {
            for o in [Orientation::Up, Orientation::Down] {
                for c in 0..3 {
                    out.push(FaceId::new(a, b, o, c));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeSet, HashSet};

    fn domain() -> Vec<FaceId> {
        faces_in_window(0..=0, 0..=0)
    }

    #[test]
    fn adjacency_is_symmetric_and_fourfold() {
        for f in faces_in_window(-2..=2, -2..=2) {
            let adj = face_adjacency(&f);
            let distinct: HashSet<_> = adj.iter().collect();
            assert_eq!(distinct.len(), 4);
            for g in adj {
                assert!(face_adjacency(&g).contains(&f), "{f} ~ {g}");
            }
        }
    }

    #[test]
    fn boundary_alternates_colors_and_shares_each_edge_once() {
        for f in faces_in_window(-1..=1, -1..=1) {
            let bd = face_boundary(&f);
            for k in 0..4 {
                assert_ne!(bd.vertices[k].color(), bd.vertices[(k + 1) % 4].color());
                let e = bd.edges[k];
                assert!(e.faces.contains(&f));
                assert_ne!(e.faces[0], e.faces[1]);
                let g = e.other(&f);
                let shared =
                    face_boundary(&g).edges.iter().filter(|x| x.edge == e.edge).count();
                assert_eq!(shared, 1);
            }
            assert!(matches!(bd.vertices[0], VertexId::Tri { .. }));
            assert!(matches!(bd.vertices[2], VertexId::Centroid { .. }));
            // counterclockwise
            let p: Vec<_> = bd.vertices.iter().map(|v| v.position()).collect();
            let area2: i64 = (0..4).map(|k| p[k].x * p[(k + 1) % 4].y - p[(k + 1) % 4].x * p[k].y).sum();
            assert!(area2 > 0);
        }
    }

    #[test]
    fn fundamental_domain_counts() {
        let faces = domain();
        assert_eq!(faces.len(), 6);
        // count translation classes of vertices and edges touching the domain
        let norm_v = |v: &VertexId| match *v {
            VertexId::Tri { .. } => VertexId::Tri { a: 0, b: 0 },
            VertexId::Centroid { o, .. } => VertexId::Centroid { a: 0, b: 0, o },
            VertexId::Midpoint { d, .. } => VertexId::Midpoint { a: 0, b: 0, d },
        };
        let mut vclasses = BTreeSet::new();
        let mut eclasses = BTreeSet::new();
        for f in &faces {
            for e in face_boundary(f).edges {
                vclasses.insert(norm_v(&e.edge.white));
                vclasses.insert(norm_v(&e.edge.black));
                // an edge class is fixed by its (face class, face class, kind of white end)
                let mut fc: Vec<_> = e.faces.iter().map(|g| (g.o, g.c)).collect();
                fc.sort();
                let kind = matches!(e.edge.white, VertexId::Tri { .. });
                eclasses.insert((fc, kind));
            }
        }
        let black = vclasses.iter().filter(|v| v.color() == Color::Black).count();
        let white = vclasses.len() - black;
        assert_eq!((black, white), (3, 3));
        assert_eq!(eclasses.len(), 12);
        assert_eq!(vclasses.len() as i64 - eclasses.len() as i64 + faces.len() as i64, 0);
        let degree_sum: usize = vclasses.iter().map(|v| v.lattice_degree()).sum();
        assert_eq!(degree_sum, 2 * 12);
    }

    #[test]
    fn degrees_in_the_lattice() {
        let mut edges = HashSet::new();
        for f in faces_in_window(-3..=3, -3..=3) {
            for e in face_boundary(&f).edges {
                edges.insert(e.edge);
            }
        }
        let probe = [
            VertexId::Tri { a: 0, b: 0 },
            VertexId::Centroid { a: 0, b: 0, o: Orientation::Up },
            VertexId::Centroid { a: 0, b: 0, o: Orientation::Down },
            VertexId::Midpoint { a: 0, b: 0, d: MidDir::E },
            VertexId::Midpoint { a: 0, b: 0, d: MidDir::N },
            VertexId::Midpoint { a: 0, b: 0, d: MidDir::D },
        ];
        for v in probe {
            let deg = edges.iter().filter(|e| e.white == v || e.black == v).count();
            assert_eq!(deg, v.lattice_degree(), "{v}");
        }
    }

    #[test]
    fn faces_of_one_triangle_are_mutually_adjacent() {
        for o in [Orientation::Up, Orientation::Down] {
            for c in 0..3u8 {
                let f = FaceId::new(0, 0, o, c);
                let adj = face_adjacency(&f);
                for c2 in (0..3u8).filter(|&x| x != c) {
                    assert!(adj.contains(&FaceId::new(0, 0, o, c2)));
                }
            }
        }
    }
}
