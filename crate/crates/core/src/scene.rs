//! Scene domain model and JSON file I/O.
//!
//! A scene is a room (floor polygon plus wall segments) and a list of posed
//! object instances. Canonical geometry is an axis-aligned box, optionally
//! with a convex-hull vertex list for non-box shapes.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::math::{round_sig, Quat, Vec2, Vec3};
use crate::priors::PriorRegistry;

pub const SUPPORT_FLOOR: &str = "floor";
pub const SUPPORT_WALL: &str = "wall";

#[derive(Debug, thiserror::Error)]
pub enum SceneError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error in {path}: {message}")]
    Parse { path: String, message: String },
    #[error("validation error on object '{object}': {rule}")]
    Validation { object: String, rule: String },
    #[error("corpus generation failed: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, SceneError>;

/// Object pose: translation, unit rotation quaternion, positive per-axis scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub t: Vec3,
    pub q: Quat,
    pub s: Vec3,
}

impl Default for Pose {
    fn default() -> Self {
        Pose {
            t: Vec3::ZERO,
            q: Quat::IDENTITY,
            s: Vec3::splat(1.0),
        }
    }
}

impl Pose {
    /// Local point -> world: t + R (s o x).
    pub fn apply(&self, local: Vec3) -> Vec3 {
        self.t + self.q.rotate(self.s.mul_comp(local))
    }

    /// World point -> scaled local frame (the frame the SDF grid lives in).
    pub fn to_local(&self, world: Vec3) -> Vec3 {
        let u = self.q.rotate_inv(world - self.t);
        Vec3::new(u.x / self.s.x, u.y / self.s.y, u.z / self.s.z)
    }

    fn validate(&self, id: &str) -> Result<()> {
        if (self.q.norm() - 1.0).abs() > 1e-6 {
            return Err(SceneError::Validation {
                object: id.to_string(),
                rule: "quaternion must be unit norm".to_string(),
            });
        }
        if self.s.x <= 0.0 || self.s.y <= 0.0 || self.s.z <= 0.0 {
            return Err(SceneError::Validation {
                object: id.to_string(),
                rule: "scale must be positive".to_string(),
            });
        }
        if !self.t.is_finite() || !self.s.is_finite() {
            return Err(SceneError::Validation {
                object: id.to_string(),
                rule: "pose must be finite".to_string(),
            });
        }
        Ok(())
    }
}

/// Canonical geometry: box extents in meters, optional convex hull vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    /// Full extents (width, height, depth) of the canonical box.
    pub extents: Vec3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hull: Option<Vec<Vec3>>,
}

impl Geometry {
    pub fn from_box(extents: Vec3) -> Self {
        Geometry {
            extents,
            hull: None,
        }
    }

    /// Corner points of the canonical box (local frame, centered at origin).
    pub fn box_corners(&self) -> [Vec3; 8] {
        let h = self.extents * 0.5;
        let mut out = [Vec3::ZERO; 8];
        let mut i = 0;
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    out[i] = Vec3::new(h.x * sx, h.y * sy, h.z * sz);
                    i += 1;
                }
            }
        }
        out
    }

    /// Hull vertices when present, otherwise the 8 box corners.
    pub fn sample_vertices(&self) -> Vec<Vec3> {
        match &self.hull {
            Some(h) => h.clone(),
            None => self.box_corners().to_vec(),
        }
    }

    /// Local-frame centroid under uniform density.
    pub fn centroid(&self) -> Vec3 {
        match &self.hull {
            Some(h) => {
                let mut c = Vec3::ZERO;
                for v in h {
                    c += *v;
                }
                c / h.len() as f64
            }
            None => Vec3::ZERO,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectInstance {
    pub id: String,
    pub category: String,
    #[serde(rename = "box")]
    pub extents: Vec3,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hull: Option<Vec<Vec3>>,
    pub pose: Pose,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_parent: Option<String>,
}

impl ObjectInstance {
    pub fn new(id: impl Into<String>, category: impl Into<String>, extents: Vec3) -> Self {
        ObjectInstance {
            id: id.into(),
            category: category.into(),
            extents,
            hull: None,
            pose: Pose::default(),
            support_parent: None,
        }
    }

    pub fn geometry(&self) -> Geometry {
        Geometry {
            extents: self.extents,
            hull: self.hull.clone(),
        }
    }

    /// World-frame vertices (hull vertices or box corners).
    pub fn world_vertices(&self) -> Vec<Vec3> {
        self.geometry()
            .sample_vertices()
            .into_iter()
            .map(|v| self.pose.apply(v))
            .collect()
    }

    /// Lowest world y over the geometry vertices.
    pub fn bottom_height(&self) -> f64 {
        self.world_vertices()
            .iter()
            .map(|v| v.y)
            .fold(f64::INFINITY, f64::min)
    }

    /// Highest world y over the geometry vertices.
    pub fn top_height(&self) -> f64 {
        self.world_vertices()
            .iter()
            .map(|v| v.y)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// World-frame center of mass (uniform density centroid).
    pub fn com(&self) -> Vec3 {
        self.pose.apply(self.geometry().centroid())
    }

    /// Center of the canonical back face (-Z), in world frame.
    pub fn back_face_center(&self) -> Vec3 {
        self.pose.apply(Vec3::new(0.0, 0.0, -self.extents.z * 0.5))
    }

    /// Radius of the bounding sphere in world frame.
    pub fn bounding_radius(&self) -> f64 {
        self.geometry()
            .sample_vertices()
            .iter()
            .map(|v| self.pose.s.mul_comp(*v).norm())
            .fold(0.0, f64::max)
    }

    fn validate(&self) -> Result<()> {
        self.pose.validate(&self.id)?;
        if self.extents.x <= 0.0 || self.extents.y <= 0.0 || self.extents.z <= 0.0 {
            return Err(SceneError::Validation {
                object: self.id.clone(),
                rule: "box extents must be strictly positive".to_string(),
            });
        }
        if let Some(hull) = &self.hull {
            if hull.len() < 4 || coplanar(hull) {
                return Err(SceneError::Validation {
                    object: self.id.clone(),
                    rule: "hull needs at least 4 non-coplanar vertices".to_string(),
                });
            }
        }
        Ok(())
    }
}

fn coplanar(pts: &[Vec3]) -> bool {
    if pts.len() < 4 {
        return true;
    }
    let a = pts[0];
    let mut b = None;
    for p in &pts[1..] {
        if (*p - a).norm() > 1e-12 {
            b = Some(*p);
            break;
        }
    }
    let Some(b) = b else { return true };
    let ab = b - a;
    let mut n = None;
    for p in &pts[1..] {
        let c = ab.cross(*p - a);
        if c.norm() > 1e-12 {
            n = Some(c.normalized());
            break;
        }
    }
    let Some(n) = n else { return true };
    pts.iter().all(|p| (*p - a).dot(n).abs() < 1e-9)
}

/// Vertical wall segment: 2D endpoints on the floor plane plus a height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WallSegment {
    pub a: Vec2,
    pub b: Vec2,
    pub height: f64,
}

impl WallSegment {
    /// 2D distance from a floor-plane point to this segment.
    pub fn distance_2d(&self, p: Vec2) -> f64 {
        let ab = self.b - self.a;
        let len2 = ab.dot(ab);
        let t = if len2 == 0.0 {
            0.0
        } else {
            ((p - self.a).dot(ab) / len2).clamp(0.0, 1.0)
        };
        (p - (self.a + ab * t)).norm()
    }
}

/// Room: floor polygon at y = 0 plus wall segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Room {
    /// Simple polygon over (x, z), counter-clockwise.
    pub bounds: Vec<Vec2>,
    pub walls: Vec<WallSegment>,
}

impl Room {
    pub fn rectangular(half_x: f64, half_z: f64, wall_height: f64) -> Self {
        let c = [
            Vec2::new(-half_x, -half_z),
            Vec2::new(half_x, -half_z),
            Vec2::new(half_x, half_z),
            Vec2::new(-half_x, half_z),
        ];
        let walls = (0..4)
            .map(|i| WallSegment {
                a: c[i],
                b: c[(i + 1) % 4],
                height: wall_height,
            })
            .collect();
        Room {
            bounds: c.to_vec(),
            walls,
        }
    }

    pub fn contains_2d(&self, p: Vec2) -> bool {
        // Even-odd ray cast.
        let n = self.bounds.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.bounds[i];
            let b = self.bounds[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    fn validate(&self) -> Result<()> {
        if self.bounds.len() < 3 {
            return Err(SceneError::Validation {
                object: "<room>".to_string(),
                rule: "bounds polygon needs at least 3 vertices".to_string(),
            });
        }
        // Simple-polygon check: no two non-adjacent edges intersect.
        let n = self.bounds.len();
        for i in 0..n {
            for j in i + 1..n {
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue;
                }
                let (a1, a2) = (self.bounds[i], self.bounds[(i + 1) % n]);
                let (b1, b2) = (self.bounds[j], self.bounds[(j + 1) % n]);
                if segments_intersect(a1, a2, b1, b2) {
                    return Err(SceneError::Validation {
                        object: "<room>".to_string(),
                        rule: "bounds polygon must be simple".to_string(),
                    });
                }
            }
        }
        Ok(())
    }
}

fn segments_intersect(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> bool {
    let d = |p: Vec2, q: Vec2, r: Vec2| (q - p).cross(r - p);
    let d1 = d(b1, b2, a1);
    let d2 = d(b1, b2, a2);
    let d3 = d(a1, a2, b1);
    let d4 = d(a1, a2, b2);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub room: Room,
    pub objects: Vec<ObjectInstance>,
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
}

impl Scene {
    pub fn object(&self, id: &str) -> Option<&ObjectInstance> {
        self.objects.iter().find(|o| o.id == id)
    }

    /// Structural validation: type invariants that need no prior registry.
    pub fn validate(&self) -> Result<()> {
        self.room.validate()?;
        let mut seen = BTreeSet::new();
        for obj in &self.objects {
            obj.validate()?;
            if !seen.insert(obj.id.clone()) {
                return Err(SceneError::Validation {
                    object: obj.id.clone(),
                    rule: "object ids must be unique".to_string(),
                });
            }
        }
        for obj in &self.objects {
            if let Some(parent) = &obj.support_parent {
                let reserved = parent == SUPPORT_FLOOR || parent == SUPPORT_WALL;
                if !reserved && !seen.contains(parent) {
                    return Err(SceneError::Validation {
                        object: obj.id.clone(),
                        rule: format!("support_parent '{parent}' does not exist"),
                    });
                }
            }
        }
        Ok(())
    }

    /// Full validation including the prior-registry invariant.
    pub fn validate_with_priors(&self, priors: &PriorRegistry) -> Result<()> {
        self.validate()?;
        for obj in &self.objects {
            if priors.get(&obj.category).is_none() {
                return Err(SceneError::Validation {
                    object: obj.id.clone(),
                    rule: format!("category '{}' has no registered prior", obj.category),
                });
            }
        }
        Ok(())
    }
}

/// Ground-truth label attached to a corpus scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationLabel {
    pub object_id: String,
    pub kind: ViolationKind,
    pub magnitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Collision,
    Floating,
    Unsupported,
    Unanchored,
    Misoriented,
    MisScaled,
    StaticallyUnstable,
    Blocking,
}

const KNOWN_SCENE_KEYS: &[&str] = &["room", "objects", "metadata"];
const KNOWN_OBJECT_KEYS: &[&str] = &["id", "category", "box", "hull", "pose", "support_parent"];

/// Load a scene from the JSON scene format. Unknown keys are ignored; a
/// warning string is collected for each.
pub fn load_scene_report(path: impl AsRef<Path>) -> Result<(Scene, Vec<String>)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| SceneError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| SceneError::Parse {
            path: path.display().to_string(),
            message: format!("line {}, column {}: {}", e.line(), e.column(), e),
        })?;
    let mut warnings = Vec::new();
    if let Some(map) = value.as_object() {
        for key in map.keys() {
            if !KNOWN_SCENE_KEYS.contains(&key.as_str()) {
                warnings.push(format!("ignoring unknown key '{key}'"));
            }
        }
        if let Some(objs) = map.get("objects").and_then(|v| v.as_array()) {
            for obj in objs {
                if let Some(m) = obj.as_object() {
                    for key in m.keys() {
                        if !KNOWN_OBJECT_KEYS.contains(&key.as_str()) {
                            warnings.push(format!("ignoring unknown object key '{key}'"));
                        }
                    }
                }
            }
        }
    }
    let scene: Scene = serde_json::from_value(value).map_err(|e| SceneError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    scene.validate()?;
    Ok((scene, warnings))
}

pub fn load_scene(path: impl AsRef<Path>) -> Result<Scene> {
    load_scene_report(path).map(|(s, _)| s)
}

/// Save a scene; real values are rounded to 9 significant decimal digits so
/// that save -> load -> save is byte-stable.
pub fn save_scene(scene: &Scene, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = scene_to_json(scene);
    std::fs::write(path, text).map_err(|source| SceneError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn scene_to_json(scene: &Scene) -> String {
    to_canonical_json(scene)
}

/// Pretty JSON with floats rounded to 9 significant digits, so repeated
/// serialization is byte-stable.
pub fn to_canonical_json<T: Serialize>(v: &T) -> String {
    let mut value = serde_json::to_value(v).expect("value serializes");
    round_json_floats(&mut value);
    let mut text = serde_json::to_string_pretty(&value).expect("value serializes");
    text.push('\n');
    text
}

fn round_json_floats(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.is_f64() {
                    if let Some(r) = serde_json::Number::from_f64(round_sig(f, 9)) {
                        *n = r;
                    }
                }
            }
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(round_json_floats),
        serde_json::Value::Object(m) => m.values_mut().for_each(round_json_floats),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::priors::PriorRegistry;

    fn unit_box_scene() -> Scene {
        Scene {
            room: Room::rectangular(3.0, 3.0, 2.5),
            objects: vec![{
                let mut o = ObjectInstance::new("b0", "box", Vec3::splat(1.0));
                o.pose.t.y = 0.5;
                o
            }],
            metadata: BTreeMap::new(),
        }
    }

    #[test]
    fn minimal_scene_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        let scene = unit_box_scene();
        save_scene(&scene, &path).unwrap();
        let loaded = load_scene(&path).unwrap();
        assert_eq!(scene, loaded);
        assert_eq!(loaded.objects.len(), 1);
        assert_eq!(loaded.objects[0].pose.q, Quat::IDENTITY);
    }

    #[test]
    fn zero_scale_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        let mut scene = unit_box_scene();
        scene.objects[0].pose.s = Vec3::new(0.0, 1.0, 1.0);
        let text = serde_json::to_string(&scene).unwrap();
        std::fs::write(&path, text).unwrap();
        let err = load_scene(&path).unwrap_err();
        match err {
            SceneError::Validation { rule, .. } => assert!(rule.contains("scale must be positive")),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn unknown_keys_warn() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        let mut v = serde_json::to_value(unit_box_scene()).unwrap();
        v["mystery"] = serde_json::json!(1);
        std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
        let (_, warnings) = load_scene_report(&path).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("mystery"));
    }

    #[test]
    fn unregistered_category_rejected() {
        let scene = {
            let mut s = unit_box_scene();
            s.objects[0].category = "starship".to_string();
            s
        };
        let priors = PriorRegistry::default_indoor();
        assert!(scene.validate_with_priors(&priors).is_err());
    }

    #[test]
    fn missing_support_parent_rejected() {
        let mut scene = unit_box_scene();
        scene.objects[0].support_parent = Some("ghost".to_string());
        assert!(scene.validate().is_err());
        scene.objects[0].support_parent = Some(SUPPORT_FLOOR.to_string());
        assert!(scene.validate().is_ok());
    }

    #[test]
    fn save_is_byte_stable() {
        let scene = {
            let mut s = unit_box_scene();
            s.objects[0].pose.t = Vec3::new(0.123456789123, 0.5, -2.0 / 3.0);
            s
        };
        let a = scene_to_json(&scene);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        std::fs::write(&path, &a).unwrap();
        let loaded = load_scene(&path).unwrap();
        let b = scene_to_json(&loaded);
        assert_eq!(a, b);
    }
}
