//! Search for the labeling and block scheme, and the versioned calibration file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::labeling::{BlockScheme, BlockShape, BlockType, HalfPoint, Labeling, Tiling};
use super::{face_adjacency, FaceId, Orientation};
use crate::diamonds::{self, closed_form, HalfOrder};
use crate::matchings;
use crate::quiver::recurrence_y;

pub const SCHEMA_VERSION: u32 = 1;

const SLOPES: [i32; 4] = [-3, -1, 1, 3];
const PHASES: [i32; 7] = [-6, -4, -2, 0, 2, 4, 6];
/// Largest half-order checked against the face and boundary closed forms.
const SHAPE_CHECK_ORDER: u32 = 8;
/// `|PM(D_m)|` for half-orders `1..=4`.
const SMALL_COUNTS: [u64; 4] = [2, 4, 16, 64];
const ANCHOR_RANGE: std::ops::RangeInclusive<i32> = -8..=8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalibrationError {
    #[error("no labeling and block scheme satisfies the constraints")]
    Failed,
    #[error("{survivors} inequivalent assignments satisfy the constraints")]
    Ambiguous { survivors: usize },
    #[error("calibration file: {0}")]
    Io(String),
    #[error("calibration file is not valid JSON: {0}")]
    Json(String),
    #[error("calibration schema version {found}, expected {expected}")]
    SchemaVersion { found: u64, expected: u32 },
    #[error("invalid calibration data: {0}")]
    Invalid(String),
}

/// Outcome of a search together with how much of the space it visited.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CalibrationReport {
    pub tiling: Tiling,
    pub labelings_considered: usize,
    pub labelings_admissible: usize,
    pub schemes_tested: usize,
    pub survivors: usize,
    /// `Σ_N |D_N \ D'_N|` over half-orders `1..=8` for the chosen rotation anchor.
    pub rotation_mismatch: usize,
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Labels across opposite edges of the label-2 square are `{3,5}` and `{1,6}`.
fn label_two_square_ok(lab: &Labeling) -> bool {
    let Some(f) = all_classes().into_iter().find(|f| lab.label(f) == 2) else {
        return false;
    };
    let n = face_adjacency(&f).map(|g| lab.label(&g));
    let pair = |x: u8, y: u8| if x < y { [x, y] } else { [y, x] };
    let mut pairs = [pair(n[0], n[2]), pair(n[1], n[3])];
    pairs.sort();
    pairs == [[1, 6], [3, 5]]
}

fn all_classes() -> Vec<FaceId> {
    [Orientation::Up, Orientation::Down]
        .into_iter()
        .flat_map(|o| (0..3).map(move |c| FaceId::new(0, 0, o, c)))
        .collect()
}

pub(crate) fn admissible_labelings() -> (usize, Vec<Labeling>) {
    let perms = permutations(&[1, 2, 3, 4, 5, 6]);
    let considered = perms.len();
    let found = perms
        .into_iter()
        .map(|p| Labeling {
            table: [[p[0], p[1], p[2]], [p[3], p[4], p[5]]],
            rho_anchor: HalfPoint { a2: 0, b2: 0 },
        })
        .filter(|l| l.is_bijective() && l.is_octahedral() && l.is_sigma_equivariant())
        .filter(label_two_square_ok)
        .collect();
    (considered, found)
}

fn connected(faces: &[FaceId]) -> bool {
    let set: BTreeSet<FaceId> = faces.iter().copied().collect();
    let mut seen = BTreeSet::from([faces[0]]);
    let mut stack = vec![faces[0]];
    while let Some(f) = stack.pop() {
        for g in face_adjacency(&f) {
            if set.contains(&g) && seen.insert(g) {
                stack.push(g);
            }
        }
    }
    seen.len() == faces.len()
}

/// Edge-connected triples of faces in triangle row 0 with distinct
/// translation classes, translated so the westmost triangle has `a = 0`.
fn row_triples() -> Vec<BlockShape> {
    let faces = super::faces_in_window(-1..=2, 0..=0);
    let mut out = BTreeSet::new();
    for i in 0..faces.len() {
        for j in i + 1..faces.len() {
            for k in j + 1..faces.len() {
                let t = [faces[i], faces[j], faces[k]];
                let classes: BTreeSet<_> = t.iter().map(|f| (f.o, f.c)).collect();
                if classes.len() < 3 || !connected(&t) {
                    continue;
                }
                let min_a = t.iter().map(|f| f.a).min().unwrap_or(0);
                let mut n = t.map(|f| f.translated(-min_a, 0));
                n.sort();
                out.insert(n);
            }
        }
    }
    out.into_iter().map(BlockShape).collect()
}

fn sorted_labels(lab: &Labeling, shape: &BlockShape) -> [u8; 3] {
    let mut l = shape.0.map(|f| lab.label(&f));
    l.sort_unstable();
    l
}

/// Pairs of shapes with the given label sets, the second directly east of the first.
fn row_partitions(lab: &Labeling, triples: &[BlockShape], first: BlockType, second: BlockType) -> Vec<[BlockShape; 2]> {
    let want = |t: BlockType| {
        let mut l = t.labels();
        l.sort_unstable();
        l
    };
    let (w1, w2) = (want(first), want(second));
    let mut out = Vec::new();
    for s1 in triples.iter().filter(|s| sorted_labels(lab, s) == w1) {
        for s2 in triples.iter().filter(|s| sorted_labels(lab, s) == w2) {
            for d in -2..=2 {
                let moved = BlockShape(s2.translated(d, 0));
                let dx = moved.center_x() - s1.center_x();
                if dx > 0 && dx <= 144 {
                    out.push([*s1, moved]);
                }
            }
        }
    }
    out
}

fn blocks_touch(x: &[FaceId; 3], y: &[FaceId; 3]) -> bool {
    x.iter().any(|f| face_adjacency(f).iter().any(|g| y.contains(g)))
}

fn east_neighbours_touch(shapes: &[BlockShape; 2]) -> bool {
    let s = |k: i32| shapes[k.rem_euclid(2) as usize].translated(k.div_euclid(2), 0);
    (0..2).all(|k| blocks_touch(&s(k), &s(k + 1)))
}

fn north_neighbours_touch(scheme: &BlockScheme, rows: std::ops::RangeInclusive<i32>) -> bool {
    rows.into_iter()
        .all(|j| (-3..=3).all(|i| blocks_touch(&scheme.block_faces(i, j), &scheme.block_faces(i, j - 1))))
}

fn types_match(t: &Tiling) -> bool {
    (-4..=4).all(|j| {
        (-4..=4).all(|i| {
            let mut want = t.block_type(i, j).labels();
            want.sort_unstable();
            t.block_labels(i, j) == want
        })
    })
}

fn shapes_match(t: &Tiling) -> bool {
    (2..=SHAPE_CHECK_ORDER).all(|n| {
        let h = HalfOrder(n);
        diamonds::diamond_face_set(t, h, false).len() as u32 == closed_form::face_vector(h).iter().sum::<u32>()
            && diamonds::face_vector(t, h, false) == closed_form::face_vector(h)
            && diamonds::boundary_vector(t, h, false) == closed_form::boundary_vector(h)
    }) && (0..=5).all(|n| {
        diamonds::covering_exponents(t, HalfOrder(n), false) == closed_form::covering_exponents(HalfOrder(n))
    })
}

fn oracles_match(t: &Tiling) -> bool {
    let counts_ok = SMALL_COUNTS.iter().enumerate().all(|(k, &c)| {
        let g = diamonds::build_diamond(t, HalfOrder(k as u32 + 1), false);
        matches!(matchings::count_pm(&g), Ok(n) if n == BigInt::from(c))
    });
    if !counts_ok {
        return false;
    }
    let g = diamonds::build_diamond(t, HalfOrder(1), false);
    let Ok(w) = matchings::weighted_pm_sum(&g) else {
        return false;
    };
    let m = diamonds::covering_exponents(t, HalfOrder(1), false);
    matches!(recurrence_y(1), Ok((y, _)) if w.mul_monomial(&m) == y)
}

fn rotation_mismatch(t: &Tiling) -> usize {
    (1..=SHAPE_CHECK_ORDER)
        .map(|n| {
            let a = diamonds::diamond_face_set(t, HalfOrder(n), false);
            let b = diamonds::diamond_face_set(t, HalfOrder(n), true);
            a.difference(&b).count()
        })
        .sum()
}

/// Rotation anchor minimising how far each `D'_m` strays from `D_m`.
fn choose_anchor(t: Tiling) -> (Tiling, usize) {
    let mut best: Option<(usize, Tiling)> = None;
    for a2 in ANCHOR_RANGE {
        for b2 in ANCHOR_RANGE {
            let mut cand = t;
            cand.labeling.rho_anchor = HalfPoint { a2, b2 };
            let score = rotation_mismatch(&cand);
            if best.as_ref().is_none_or(|(s, _)| score < *s) {
                best = Some((score, cand));
            }
        }
    }
    let (score, tiling) = best.expect("anchor range is non-empty");
    (tiling, score)
}

/// Survivors are identified by label table and the faces of `D_{1/2}..D_2`.
type SurvivorKey = ([[u8; 3]; 2], Vec<Vec<FaceId>>);

/// Exhaustive search for the labeled lattice and block scheme.
pub fn calibrate() -> Result<CalibrationReport, CalibrationError> {
    let (considered, labelings) = admissible_labelings();
    let triples = row_triples();
    let mut tested = 0usize;
    let mut survivors: BTreeMap<SurvivorKey, Tiling> = BTreeMap::new();
    for lab in &labelings {
        let lowers: Vec<_> = row_partitions(lab, &triples, BlockType::B254, BlockType::B316)
            .into_iter()
            .filter(east_neighbours_touch)
            .collect();
        let uppers: Vec<_> = row_partitions(lab, &triples, BlockType::B214, BlockType::B356)
            .into_iter()
            .filter(east_neighbours_touch)
            .collect();
        for lower in &lowers {
            for lower_slope in SLOPES {
                let half = BlockScheme { lower: *lower, upper: *lower, lower_slope, upper_phase: 0, upper_slope: 1 };
                if !north_neighbours_touch(&half, -3..=0) {
                    continue;
                }
                for upper in &uppers {
                    for upper_slope in SLOPES {
                        for upper_phase in PHASES {
                            tested += 1;
                            let scheme = BlockScheme { lower: *lower, upper: *upper, lower_slope, upper_phase, upper_slope };
                            let t = Tiling { labeling: *lab, scheme };
                            if north_neighbours_touch(&scheme, 1..=3) && types_match(&t) && shapes_match(&t) && oracles_match(&t) {
                                let faces = (1..=4)
                                    .map(|n| diamonds::diamond_face_set(&t, HalfOrder(n), false).into_iter().collect())
                                    .collect();
                                let key = (lab.table, faces);
                                survivors.entry(key).or_insert(t);
                            }
                        }
                    }
                }
            }
        }
    }
    let count = survivors.len();
    let tiling = match count {
        0 => return Err(CalibrationError::Failed),
        1 => survivors.into_values().next().expect("one survivor"),
        n => return Err(CalibrationError::Ambiguous { survivors: n }),
    };
    let (tiling, rotation_mismatch) = choose_anchor(tiling);
    Ok(CalibrationReport {
        tiling,
        labelings_considered: considered,
        labelings_admissible: labelings.len(),
        schemes_tested: tested,
        survivors: count,
        rotation_mismatch,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTable {
    pub up: [u8; 3],
    pub down: [u8; 3],
}

/// On-disk form of a calibrated tiling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationFile {
    pub schema_version: u32,
    pub labeling: LabelTable,
    pub rho_anchor: HalfPoint,
    pub lower_blocks: [BlockShape; 2],
    pub upper_blocks: [BlockShape; 2],
    pub lower_slope: i32,
    pub upper_phase: i32,
    pub upper_slope: i32,
}

impl CalibrationFile {
    pub fn from_tiling(t: &Tiling) -> Self {
        CalibrationFile {
            schema_version: SCHEMA_VERSION,
            labeling: LabelTable { up: t.labeling.table[0], down: t.labeling.table[1] },
            rho_anchor: t.labeling.rho_anchor,
            lower_blocks: t.scheme.lower,
            upper_blocks: t.scheme.upper,
            lower_slope: t.scheme.lower_slope,
            upper_phase: t.scheme.upper_phase,
            upper_slope: t.scheme.upper_slope,
        }
    }

    /// Labels outside `1..=6` are rejected; anything else is left for verification to judge.
    pub fn into_tiling(self) -> Result<Tiling, CalibrationError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CalibrationError::SchemaVersion {
                found: u64::from(self.schema_version),
                expected: SCHEMA_VERSION,
            });
        }
        let table = [self.labeling.up, self.labeling.down];
        if let Some(bad) = table.iter().flatten().find(|l| !(1..=6).contains(*l)) {
            return Err(CalibrationError::Invalid(format!("label {bad} outside 1..=6")));
        }
        let shapes = self.lower_blocks.iter().chain(&self.upper_blocks);
        if let Some(bad) = shapes.flat_map(|s| s.0).find(|f| f.c > 2) {
            return Err(CalibrationError::Invalid(format!("corner index {} in face {bad}", bad.c)));
        }
        Ok(Tiling {
            labeling: Labeling { table, rho_anchor: self.rho_anchor },
            scheme: BlockScheme {
                lower: self.lower_blocks,
                upper: self.upper_blocks,
                lower_slope: self.lower_slope,
                upper_phase: self.upper_phase,
                upper_slope: self.upper_slope,
            },
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("calibration data serializes");
        s.push('\n');
        s
    }

    /// Reads the schema version before anything else so that files from
    /// other versions are refused rather than misread.
    pub fn from_json(text: &str) -> Result<Self, CalibrationError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CalibrationError::Json(e.to_string()))?;
        let found = value
            .get("schema_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| CalibrationError::Invalid("missing schema_version".into()))?;
        if found != u64::from(SCHEMA_VERSION) {
            return Err(CalibrationError::SchemaVersion { found, expected: SCHEMA_VERSION });
        }
        serde_json::from_value(value).map_err(|e| CalibrationError::Json(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CalibrationError> {
        let text = std::fs::read_to_string(path).map_err(|e| CalibrationError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), CalibrationError> {
        let io = |e: std::io::Error| CalibrationError::Io(format!("{}: {e}", path.display()));
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(io)?;
        }
        std::fs::write(path, self.to_json()).map_err(io)
    }
}

/// Where the calibration is cached when no path is given.
pub fn default_calibration_path() -> PathBuf {
    std::env::temp_dir().join("dp3").join(format!("calibration-v{SCHEMA_VERSION}.json"))
}

/// Reads the cached calibration at `path`, running the search and writing
/// the cache when the file is absent or `recalibrate` is set. The flag in the
/// result tells whether the search ran.
pub fn load_or_calibrate(path: &Path, recalibrate: bool) -> Result<(Tiling, bool), CalibrationError> {
    if !recalibrate && path.exists() {
        return Ok((CalibrationFile::load(path)?.into_tiling()?, false));
    }
    let report = calibrate()?;
    CalibrationFile::from_tiling(&report.tiling).save(path)?;
    Ok((report.tiling, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_space_sizes() {
        let (considered, labs) = admissible_labelings();
        assert_eq!(considered, 720);
        assert!(!labs.is_empty());
        assert!(labs.iter().all(label_two_square_ok));
        assert!(row_triples().iter().all(|s| connected(&s.0)));
    }

    #[test]
    fn unique_survivor() {
        let r = calibrate().unwrap();
        assert_eq!(r.survivors, 1);
        assert_eq!(r.tiling, *Tiling::calibrated());
        assert!(r.rotation_mismatch <= 2 * SHAPE_CHECK_ORDER as usize);
    }

    #[test]
    fn calibrated_blocks() {
        let t = Tiling::calibrated();
        assert_eq!(t.block_labels(0, 0), [2, 4, 5]);
        assert_eq!(t.block_labels(-1, 1), [1, 2, 4]);
        assert_eq!(t.block_labels(-1, 0), [1, 3, 6]);
        assert!(types_match(t) && shapes_match(t) && oracles_match(t));
    }

    #[test]
    fn file_round_trip() {
        let t = *Tiling::calibrated();
        let f = CalibrationFile::from_tiling(&t);
        let back = CalibrationFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.into_tiling().unwrap(), t);
    }

    #[test]
    fn file_save_and_load() {
        let dir = std::env::temp_dir().join(format!("dp3-calibrate-test-{}", std::process::id()));
        let path = dir.join("nested").join("cal.json");
        let f = CalibrationFile::from_tiling(Tiling::calibrated());
        f.save(&path).unwrap();
        assert_eq!(CalibrationFile::load(&path).unwrap(), f);
        let (t, fresh) = load_or_calibrate(&path, false).unwrap();
        assert!(!fresh);
        assert_eq!(t, *Tiling::calibrated());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn refuses_other_schema_versions() {
        let f = CalibrationFile::from_tiling(Tiling::calibrated());
        let text = f.to_json().replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert_eq!(
            CalibrationFile::from_json(&text),
            Err(CalibrationError::SchemaVersion { found: 2, expected: SCHEMA_VERSION })
        );
        let mut g = f;
        g.schema_version = 0;
        assert!(matches!(g.into_tiling(), Err(CalibrationError::SchemaVersion { .. })));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(CalibrationFile::from_json("{"), Err(CalibrationError::Json(_))));
        assert!(matches!(CalibrationFile::from_json("{}"), Err(CalibrationError::Invalid(_))));
        let mut f = CalibrationFile::from_tiling(Tiling::calibrated());
        f.labeling.up[0] = 9;
        assert!(matches!(f.into_tiling(), Err(CalibrationError::Invalid(_))));
    }
}
