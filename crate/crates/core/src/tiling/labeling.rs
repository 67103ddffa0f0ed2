use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{face_adjacency, face_boundary, FaceId, Orientation, Point};
use crate::laurent::{VarPermutation, SIGMA};
use crate::quiver::BMatrix;

/// A point of the half-lattice `(a2 / 2, b2 / 2)` in triangular coordinates;
/// exactly the centers of half-turns preserving the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfPoint {
    pub a2: i32,
    pub b2: i32,
}

/// Half-turn of a face about `center`. Up faces map to down faces and the
/// corner index `c` maps to `2 - c`.
pub fn rotate_about(f: &FaceId, center: HalfPoint) -> FaceId {
    FaceId {
        a: center.a2 - f.a - 1,
        b: center.b2 - f.b - 1,
        o: f.o.flipped(),
        c: 2 - f.c,
    }
}

/// Face labels `1..=6`, constant on translation classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labeling {
    /// `table[o][c]` for `o = up, down`.
    pub table: [[u8; 3]; 2],
    /// Center of the reference half-turn.
    pub rho_anchor: HalfPoint,
}

impl Labeling {
    pub fn label(&self, f: &FaceId) -> u8 {
        self.table[f.o.index()][f.c as usize]
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = [false; 7];
        for &l in self.table.iter().flatten() {
            if !(1..=6).contains(&l) || seen[l as usize] {
                return false;
            }
            seen[l as usize] = true;
        }
        true
    }

    /// No two edge-adjacent faces carry antipodal labels `{1,5}`, `{2,4}`, `{3,6}`.
    pub fn is_octahedral(&self) -> bool {
        representative_faces().iter().all(|f| {
            let l = self.label(f) as usize;
            face_adjacency(f).iter().all(|g| self.label(g) as usize != SIGMA.apply(l))
        })
    }

    /// The half-turn relabels faces by `σ`.
    pub fn is_sigma_equivariant(&self) -> bool {
        representative_faces().iter().all(|f| {
            let g = rotate_about(f, self.rho_anchor);
            self.label(&g) as usize == SIGMA.apply(self.label(f) as usize)
        })
    }

    /// Image of `f` under the reference half-turn.
    pub fn rotate180(&self, f: &FaceId) -> FaceId {
        rotate_about(f, self.rho_anchor)
    }

    /// Labeling with every label pushed through `perm`.
    pub fn relabeled(&self, perm: &VarPermutation) -> Labeling {
        Labeling {
            table: self.table.map(|row| row.map(|l| perm.apply(l as usize) as u8)),
            rho_anchor: self.rho_anchor,
        }
    }
}

fn representative_faces() -> [FaceId; 6] {
    let mut out = [FaceId::new(0, 0, Orientation::Up, 0); 6];
    for (k, f) in out.iter_mut().enumerate() {
        let o = if k < 3 { Orientation::Up } else { Orientation::Down };
        *f = FaceId::new(0, 0, o, (k % 3) as u8);
    }
    out
}

/// Dual quiver of the labeled tiling.
///
/// Each edge contributes one arrow between the labels of its two faces:
/// walking the edge from its white to its black end, the face on the left is
/// the source.
pub fn quiver_from_tiling(labeling: &Labeling) -> BMatrix {
    let mut b = [[0i32; 6]; 6];
    // each translation class of edges is met twice among the domain's faces
    for f in representative_faces() {
        for e in face_boundary(&f).edges {
            let w = e.edge.white.position();
            let k = e.edge.black.position();
            let (w4, k4) = (Point { x: 4 * w.x, y: 4 * w.y }, Point { x: 4 * k.x, y: 4 * k.y });
            let c = e.faces[0].center4();
            let side = (k4.x - w4.x) * (c.y - w4.y) - (k4.y - w4.y) * (c.x - w4.x);
            let (src, dst) = if side > 0 { (e.faces[0], e.faces[1]) } else { (e.faces[1], e.faces[0]) };
            let s = labeling.label(&src) as usize - 1;
            let t = labeling.label(&dst) as usize - 1;
            b[s][t] += 1;
            b[t][s] -= 1;
        }
    }
    BMatrix(b.map(|row| row.map(|v| v / 2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockType {
    #[serde(rename = "254")]
    B254,
    #[serde(rename = "316")]
    B316,
    #[serde(rename = "214")]
    B214,
    #[serde(rename = "356")]
    B356,
}

impl BlockType {
    pub const ALL: [BlockType; 4] = [BlockType::B254, BlockType::B316, BlockType::B214, BlockType::B356];

    pub fn labels(self) -> [u8; 3] {
        match self {
            BlockType::B254 => [2, 5, 4],
            BlockType::B316 => [3, 1, 6],
            BlockType::B214 => [2, 1, 4],
            BlockType::B356 => [3, 5, 6],
        }
    }

    /// Type of `T(i, j)`: strips `j <= 0` alternate `[254]`/`[316]`, strips
    /// `j > 0` alternate `[214]`/`[356]`, with `T(0,0) = [254]`.
    pub fn of_block(i: i32, j: i32) -> BlockType {
        let even = (i + j).rem_euclid(2) == 0;
        match (j <= 0, even) {
            (true, true) => BlockType::B254,
            (true, false) => BlockType::B316,
            (false, true) => BlockType::B214,
            (false, false) => BlockType::B356,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BlockType::B254 => "[254]",
            BlockType::B316 => "[316]",
            BlockType::B214 => "[214]",
            BlockType::B356 => "[356]",
        }
    }
}

/// Three faces of one block, positioned in triangle row 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockShape(pub [FaceId; 3]);

impl BlockShape {
    pub fn translated(&self, da: i32, db: i32) -> [FaceId; 3] {
        self.0.map(|f| f.translated(da, db))
    }

    /// x-coordinate of the block center, scaled by 12 (see [`Point`]) and 12 again.
    pub fn center_x(&self) -> i64 {
        self.0.iter().map(|f| f.center4().x).sum()
    }
}

/// How blocks tile the strips and how `T(i, j)` is indexed.
///
/// Strip `s_j` is the triangle row `b = j`. Within a row the blocks are
/// enumerated eastwards as `B(j, k)`: `B(j, 2t)` is `shapes[0]` translated by
/// `(t, j)` and `B(j, 2t+1)` is `shapes[1]` translated likewise. Then
/// `T(i, j) = B(j, i + lower_slope·j)` for `j <= 0` and
/// `T(i, j) = B(j, i + upper_phase + upper_slope·j)` for `j > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockScheme {
    /// `[254]` then `[316]`, the latter directly east of the former.
    pub lower: [BlockShape; 2],
    /// `[214]` then `[356]`.
    pub upper: [BlockShape; 2],
    pub lower_slope: i32,
    pub upper_phase: i32,
    pub upper_slope: i32,
}

impl BlockScheme {
    /// The `k`-th block (eastwards) of triangle row `row`.
    pub fn row_block(&self, upper: bool, row: i32, k: i32) -> [FaceId; 3] {
        let shapes = if upper { &self.upper } else { &self.lower };
        shapes[k.rem_euclid(2) as usize].translated(k.div_euclid(2), row)
    }

    pub fn block_faces(&self, i: i32, j: i32) -> [FaceId; 3] {
        if j <= 0 {
            self.row_block(false, j, i + self.lower_slope * j)
        } else {
            self.row_block(true, j, i + self.upper_phase + self.upper_slope * j)
        }
    }
}

/// A labeled dP3 lattice with its block scheme: everything needed to build
/// diamonds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tiling {
    pub labeling: Labeling,
    pub scheme: BlockScheme,
}

impl Tiling {
    /// The calibrated tiling, computed once per process.
    pub fn calibrated() -> &'static Tiling {
        static CALIBRATED: OnceLock<Tiling> = OnceLock::new();
        CALIBRATED.get_or_init(|| {
            super::calibrate().expect("calibration of the dP3 tiling failed").tiling
        })
    }

    pub fn label(&self, f: &FaceId) -> u8 {
        self.labeling.label(f)
    }

    pub fn block_faces(&self, i: i32, j: i32) -> [FaceId; 3] {
        self.scheme.block_faces(i, j)
    }

    pub fn block_type(&self, i: i32, j: i32) -> BlockType {
        BlockType::of_block(i, j)
    }

    /// Labels of `T(i, j)` sorted ascending.
    pub fn block_labels(&self, i: i32, j: i32) -> [u8; 3] {
        let mut l = self.block_faces(i, j).map(|f| self.label(&f));
        l.sort_unstable();
        l
    }

    /// The face of `T(i, j)` carrying `label`, if any.
    pub fn block_face_with_label(&self, i: i32, j: i32, label: u8) -> Option<FaceId> {
        self.block_faces(i, j).into_iter().find(|f| self.label(f) == label)
    }

    /// The label-2 square of `T(2, 0)`; this is `D_{1/2}`.
    pub fn s2(&self) -> Option<FaceId> {
        self.block_face_with_label(2, 0, 2)
    }

    /// The label-3 square of `T(1, 0)`.
    pub fn s3(&self) -> Option<FaceId> {
        self.block_face_with_label(1, 0, 3)
    }

    pub fn rotate180(&self, f: &FaceId) -> FaceId {
        self.labeling.rotate180(f)
    }

    /// Half-turn center used for the primed diamond of half-order `n`: it
    /// tracks the westward drift of `D_m` so that `D'_m` nearly overlaps `D_m`.
    pub fn rotation_center(&self, half_order: u32) -> HalfPoint {
        let n = (half_order / 2) as i32;
        let odd = (half_order % 2) as i32;
        HalfPoint { a2: self.labeling.rho_anchor.a2 - n, b2: self.labeling.rho_anchor.b2 + odd }
    }

    /// Labels of the two faces separated by an edge.
    pub fn edge_labels(&self, faces: &[FaceId; 2]) -> [u8; 2] {
        faces.map(|f| self.label(&f))
    }
}
