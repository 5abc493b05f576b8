//! Geometric kernel: truncated SDF voxel grids with trilinear query and
//! gradient, cross-SDF penetration depth, support polygons, and
//! center-of-mass margins.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::math::{Vec2, Vec3};
use crate::scene::{Geometry, ObjectInstance, Pose};

/// Contact tolerance for support detection, meters.
pub const TAU_CONTACT: f64 = 0.005;
/// Default voxel budget for one grid.
pub const DEFAULT_VOXEL_BUDGET: usize = 128 * 128 * 128;
/// Default number of deterministic surface samples per object.
pub const DEFAULT_SURFACE_SAMPLES: usize = 512;

#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("sdf grid of {0} voxels exceeds the budget of {1}")]
    Resource(usize, usize),
    #[error("no contact points within tolerance: object is floating")]
    EmptySupport,
}

/// Truncated signed-distance voxel grid in the canonical (unscaled) object
/// frame. Negative inside, positive outside.
#[derive(Debug, Clone, PartialEq)]
pub struct SdfGrid {
    pub origin: Vec3,
    pub voxel_size: f64,
    pub dims: [usize; 3],
    pub values: Vec<f64>,
    pub truncation: f64,
}

impl SdfGrid {
    #[inline]
    fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[(i * self.dims[1] + j) * self.dims[2] + k]
    }

    /// Trilinear value and gradient at a point in the grid's local frame.
    /// Points outside the grid return (truncation, zero gradient).
    pub fn query_local(&self, p: Vec3) -> (f64, Vec3) {
        let g = (p - self.origin) / self.voxel_size;
        let max = [
            self.dims[0] as f64 - 1.0,
            self.dims[1] as f64 - 1.0,
            self.dims[2] as f64 - 1.0,
        ];
        if g.x < 0.0 || g.y < 0.0 || g.z < 0.0 || g.x > max[0] || g.y > max[1] || g.z > max[2] {
            return (self.truncation, Vec3::ZERO);
        }
        let i0 = (g.x.floor() as usize).min(self.dims[0] - 2);
        let j0 = (g.y.floor() as usize).min(self.dims[1] - 2);
        let k0 = (g.z.floor() as usize).min(self.dims[2] - 2);
        let fx = g.x - i0 as f64;
        let fy = g.y - j0 as f64;
        let fz = g.z - k0 as f64;

        let c000 = self.at(i0, j0, k0);
        let c100 = self.at(i0 + 1, j0, k0);
        let c010 = self.at(i0, j0 + 1, k0);
        let c110 = self.at(i0 + 1, j0 + 1, k0);
        let c001 = self.at(i0, j0, k0 + 1);
        let c101 = self.at(i0 + 1, j0, k0 + 1);
        let c011 = self.at(i0, j0 + 1, k0 + 1);
        let c111 = self.at(i0 + 1, j0 + 1, k0 + 1);

        let c00 = c000 + (c100 - c000) * fx;
        let c10 = c010 + (c110 - c010) * fx;
        let c01 = c001 + (c101 - c001) * fx;
        let c11 = c011 + (c111 - c011) * fx;
        let c0 = c00 + (c10 - c00) * fy;
        let c1 = c01 + (c11 - c01) * fy;
        let value = c0 + (c1 - c0) * fz;

        // Analytic derivative of the trilinear form.
        let dx = (c100 - c000) * (1.0 - fy) * (1.0 - fz)
            + (c110 - c010) * fy * (1.0 - fz)
            + (c101 - c001) * (1.0 - fy) * fz
            + (c111 - c011) * fy * fz;
        let dy = (c010 - c000) * (1.0 - fx) * (1.0 - fz)
            + (c110 - c100) * fx * (1.0 - fz)
            + (c011 - c001) * (1.0 - fx) * fz
            + (c111 - c101) * fx * fz;
        let dz = (c001 - c000) * (1.0 - fx) * (1.0 - fy)
            + (c101 - c100) * fx * (1.0 - fy)
            + (c011 - c010) * (1.0 - fx) * fy
            + (c111 - c110) * fx * fy;
        let grad = Vec3::new(dx, dy, dz) / self.voxel_size;
        (value, grad)
    }
}

/// Analytic SDF of an axis-aligned box with the given full extents,
/// centered at the origin.
pub fn box_sdf(p: Vec3, extents: Vec3) -> f64 {
    let h = extents * 0.5;
    let q = p.abs() - h;
    let outside = Vec3::new(q.x.max(0.0), q.y.max(0.0), q.z.max(0.0)).norm();
    let inside = q.max_comp().min(0.0);
    outside + inside
}

/// Gradient of the analytic box SDF (unit outward direction almost everywhere).
pub fn box_sdf_grad(p: Vec3, extents: Vec3) -> Vec3 {
    let h = extents * 0.5;
    let q = p.abs() - h;
    let sign = Vec3::new(
        if p.x >= 0.0 { 1.0 } else { -1.0 },
        if p.y >= 0.0 { 1.0 } else { -1.0 },
        if p.z >= 0.0 { 1.0 } else { -1.0 },
    );
    let outside = Vec3::new(q.x.max(0.0), q.y.max(0.0), q.z.max(0.0));
    let n = outside.norm();
    if n > 0.0 {
        return Vec3::new(
            sign.x * outside.x / n,
            sign.y * outside.y / n,
            sign.z * outside.z / n,
        );
    }
    // Inside: push along the axis of least depth.
    let m = q.max_comp();
    if q.x == m {
        Vec3::new(sign.x, 0.0, 0.0)
    } else if q.y == m {
        Vec3::new(0.0, sign.y, 0.0)
    } else {
        Vec3::new(0.0, 0.0, sign.z)
    }
}

/// Default voxel size for a canonical box: largest extent / 32.
pub fn default_voxel_size(extents: Vec3) -> f64 {
    extents.max_comp() / 32.0
}

/// Sample the analytic box SDF onto a truncated grid padded by `truncation`
/// on all sides.
pub fn sdf_from_box(extents: Vec3, voxel_size: f64, truncation: f64) -> Result<SdfGrid, GeometryError> {
    sdf_from_box_budget(extents, voxel_size, truncation, DEFAULT_VOXEL_BUDGET)
}

pub fn sdf_from_box_budget(
    extents: Vec3,
    voxel_size: f64,
    truncation: f64,
    budget: usize,
) -> Result<SdfGrid, GeometryError> {
    assert!(voxel_size > 0.0 && truncation > 0.0);
    let origin = extents * -0.5 - Vec3::splat(truncation);
    let span = extents + Vec3::splat(2.0 * truncation);
    let dims = [
        (span.x / voxel_size).ceil() as usize + 2,
        (span.y / voxel_size).ceil() as usize + 2,
        (span.z / voxel_size).ceil() as usize + 2,
    ];
    let total = dims[0] * dims[1] * dims[2];
    if total > budget {
        return Err(GeometryError::Resource(total, budget));
    }
    let mut values = Vec::with_capacity(total);
    for i in 0..dims[0] {
        for j in 0..dims[1] {
            for k in 0..dims[2] {
                let p = origin + Vec3::new(i as f64, j as f64, k as f64) * voxel_size;
                values.push(box_sdf(p, extents).clamp(-truncation, truncation));
            }
        }
    }
    Ok(SdfGrid {
        origin,
        voxel_size,
        dims,
        values,
        truncation,
    })
}

/// Query a grid attached to a posed object at a world point. The value is the
/// canonical-frame distance at the pulled-back point; the gradient is mapped
/// back to world through the pose rotation and per-axis scale.
pub fn sdf_query(grid: &SdfGrid, point_world: Vec3, pose: &Pose) -> (f64, Vec3) {
    let local = pose.to_local(point_world);
    let (value, g_local) = grid.query_local(local);
    let scaled = Vec3::new(g_local.x / pose.s.x, g_local.y / pose.s.y, g_local.z / pose.s.z);
    (value, pose.q.rotate(scaled))
}

/// Deterministic stratified samples over the canonical box surface,
/// roughly `n` points split across the six faces by area.
pub fn canonical_surface_samples(extents: Vec3, n: usize) -> Vec<Vec3> {
    let h = extents * 0.5;
    let areas = [
        extents.y * extents.z, // +-x faces
        extents.x * extents.z, // +-y faces
        extents.x * extents.y, // +-z faces
    ];
    let total_area: f64 = 2.0 * (areas[0] + areas[1] + areas[2]);
    let mut out = Vec::with_capacity(n + 16);
    for axis in 0..3usize {
        let (u_axis, v_axis) = match axis {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let per_face = ((n as f64) * areas[axis] / total_area).max(1.0);
        let ratio = extents.get(u_axis) / extents.get(v_axis);
        let ku = (per_face * ratio).sqrt().round().max(1.0) as usize;
        let kv = ((per_face / ratio).sqrt().round().max(1.0)) as usize;
        for side in [-1.0, 1.0] {
            for iu in 0..ku {
                for iv in 0..kv {
                    let u = ((iu as f64 + 0.5) / ku as f64 - 0.5) * extents.get(u_axis);
                    let v = ((iv as f64 + 0.5) / kv as f64 - 0.5) * extents.get(v_axis);
                    let mut p = Vec3::ZERO;
                    p.set(axis, side * h.get(axis));
                    p.set(u_axis, u);
                    p.set(v_axis, v);
                    out.push(p);
                }
            }
        }
    }
    out
}

fn cache() -> &'static Mutex<BTreeMap<String, Arc<SdfGrid>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<String, Arc<SdfGrid>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

/// Grid for a canonical geometry at default resolution, cached.
///
/// The truncation is at least half the smallest extent so that interior
/// values stay exact: penetration depths up to the deepest interior point
/// are then measurable without clamping.
pub fn cached_grid(geometry: &Geometry) -> Arc<SdfGrid> {
    let e = geometry.extents;
    let key = format!("{:.9e}:{:.9e}:{:.9e}", e.x, e.y, e.z);
    let mut map = cache().lock().unwrap();
    if let Some(g) = map.get(&key) {
        return g.clone();
    }
    let voxel = default_voxel_size(e);
    let truncation = (3.0 * voxel).max(0.5 * e.min_comp() + 2.0 * voxel);
    let grid = Arc::new(
        sdf_from_box(e, voxel, truncation).expect("default-resolution grid fits the budget"),
    );
    map.insert(key, grid.clone());
    grid
}

/// Symmetrized penetration depth between two posed objects via cross-SDF
/// surface sampling. Zero when disjoint.
pub fn penetration_depth(a: &ObjectInstance, b: &ObjectInstance) -> f64 {
    penetration_depth_sampled(a, b, DEFAULT_SURFACE_SAMPLES)
}

pub fn penetration_depth_sampled(a: &ObjectInstance, b: &ObjectInstance, samples: usize) -> f64 {
    let d_ab = directed_penetration(a, b, samples);
    let d_ba = directed_penetration(b, a, samples);
    d_ab.max(d_ba)
}

/// Max over sampled surface points p of `probe` of max(0, -sdf_target(p)).
fn directed_penetration(target: &ObjectInstance, probe: &ObjectInstance, samples: usize) -> f64 {
    // Broad phase: bounding spheres.
    let gap = (target.pose.t - probe.pose.t).norm();
    if gap > target.bounding_radius() + probe.bounding_radius() {
        return 0.0;
    }
    let grid = cached_grid(&target.geometry());
    let mut depth: f64 = 0.0;
    for s in canonical_surface_samples(probe.extents, samples) {
        let p = probe.pose.apply(s);
        let (v, _) = sdf_query(&grid, p, &target.pose);
        depth = depth.max(-v);
    }
    depth.max(0.0)
}

/// Convex support polygon, counter-clockwise. Degenerate point/segment
/// contacts keep 1-2 vertices and set the flag.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportPolygon {
    pub vertices: Vec<Vec2>,
    pub degenerate: bool,
}

impl SupportPolygon {
    pub fn area(&self) -> f64 {
        polygon_area(&self.vertices)
    }
}

pub fn polygon_area(pts: &[Vec2]) -> f64 {
    if pts.len() < 3 {
        return 0.0;
    }
    let mut a = 0.0;
    for i in 0..pts.len() {
        let p = pts[i];
        let q = pts[(i + 1) % pts.len()];
        a += p.cross(q);
    }
    a * 0.5
}

/// 2D convex hull, counter-clockwise (Andrew monotone chain).
pub fn convex_hull_2d(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| (a.x - b.x).abs() < 1e-12 && (a.y - b.y).abs() < 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Vec2, a: Vec2, b: Vec2| (a - o).cross(b - o);
    let mut lower: Vec<Vec2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 1e-12 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Vec2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 1e-12 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Clip a convex polygon against another convex polygon
/// (Sutherland-Hodgman; both counter-clockwise).
pub fn clip_convex(subject: &[Vec2], clip: &[Vec2]) -> Vec<Vec2> {
    if clip.len() < 3 {
        return subject.to_vec();
    }
    let mut output = subject.to_vec();
    for i in 0..clip.len() {
        if output.is_empty() {
            break;
        }
        let a = clip[i];
        let b = clip[(i + 1) % clip.len()];
        let edge = b - a;
        let inside = |p: Vec2| edge.cross(p - a) >= -1e-12;
        let input = output;
        output = Vec::new();
        for j in 0..input.len() {
            let cur = input[j];
            let next = input[(j + 1) % input.len()];
            let cur_in = inside(cur);
            let next_in = inside(next);
            if cur_in {
                output.push(cur);
            }
            if cur_in != next_in {
                // Solve edge.cross(cur + t*(next-cur) - a) = 0 for t.
                let num = edge.cross(cur - a);
                let den = num - edge.cross(next - a);
                if den.abs() > 1e-15 {
                    output.push(cur + (next - cur) * (num / den));
                }
            }
        }
    }
    output
}

/// Support polygon of an object against a horizontal surface at `surface_y`,
/// optionally clipped to the parent's footprint.
pub fn support_polygon(
    obj: &ObjectInstance,
    surface_y: f64,
    parent_footprint: Option<&[Vec2]>,
    tau_contact: f64,
) -> Result<SupportPolygon, GeometryError> {
    let contacts: Vec<Vec2> = obj
        .world_vertices()
        .into_iter()
        .filter(|v| (v.y - surface_y).abs() <= tau_contact)
        .map(|v| v.xz())
        .collect();
    if contacts.is_empty() {
        return Err(GeometryError::EmptySupport);
    }
    let mut hull = convex_hull_2d(&contacts);
    if let Some(parent) = parent_footprint {
        hull = clip_convex(&hull, parent);
        if hull.is_empty() {
            return Err(GeometryError::EmptySupport);
        }
    }
    let degenerate = hull.len() < 3 || polygon_area(&hull).abs() < 1e-12;
    Ok(SupportPolygon {
        vertices: hull,
        degenerate,
    })
}

fn point_segment_distance(p: Vec2, a: Vec2, b: Vec2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((p - a).dot(ab) / len2).clamp(0.0, 1.0)
    };
    (p - (a + ab * t)).norm()
}

/// Signed distance from a 2D point to a convex polygon boundary:
/// negative inside, positive outside. Degenerate supports give the
/// (non-negative) distance to the point/segment.
pub fn signed_distance_to_polygon(p: Vec2, poly: &[Vec2]) -> f64 {
    match poly.len() {
        0 => 0.0,
        1 => (p - poly[0]).norm(),
        2 => point_segment_distance(p, poly[0], poly[1]),
        _ => {
            let mut min_d = f64::INFINITY;
            let mut inside = true;
            for i in 0..poly.len() {
                let a = poly[i];
                let b = poly[(i + 1) % poly.len()];
                min_d = min_d.min(point_segment_distance(p, a, b));
                if (b - a).cross(p - a) < 0.0 {
                    inside = false;
                }
            }
            if inside {
                -min_d
            } else {
                min_d
            }
        }
    }
}

/// Signed horizontal distance from the object's COM projection to the
/// support polygon boundary; negative inside.
pub fn com_margin(obj: &ObjectInstance, support: &SupportPolygon) -> f64 {
    signed_distance_to_polygon(obj.com().xz(), &support.vertices)
}

/// Footprint of the object's top face: hull of world vertices within
/// `tau` of the top height.
pub fn top_footprint(obj: &ObjectInstance, tau: f64) -> Vec<Vec2> {
    let top = obj.top_height();
    let pts: Vec<Vec2> = obj
        .world_vertices()
        .into_iter()
        .filter(|v| v.y >= top - tau)
        .map(|v| v.xz())
        .collect();
    convex_hull_2d(&pts)
}

/// Footprint of the whole object projected onto the floor plane.
pub fn footprint(obj: &ObjectInstance) -> Vec<Vec2> {
    let pts: Vec<Vec2> = obj.world_vertices().into_iter().map(|v| v.xz()).collect();
    convex_hull_2d(&pts)
}
