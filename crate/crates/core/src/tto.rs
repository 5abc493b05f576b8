//! Test-time optimization: gradient descent on a differentiable physics
//! energy over per-object pose deltas (translation, yaw, log-scale).

use serde::{Deserialize, Serialize};

use crate::geometry::{cached_grid, canonical_surface_samples};
use crate::math::{softplus, softplus_deriv, Quat, Vec2, Vec3, WORLD_UP};
use crate::priors::PriorRegistry;
use crate::scene::{ObjectInstance, Pose, Scene, SUPPORT_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TtoConfig {
    pub steps: usize,
    pub lr: f64,
    pub lambda_collision: f64,
    pub lambda_ground: f64,
    pub lambda_anchor: f64,
    pub lambda_stability: f64,
    pub lambda_reg: f64,
    /// softplus width for the collision / stability hinges.
    pub softplus_beta: f64,
    /// Temperature of the smooth-min over wall distances.
    pub lse_temp: f64,
    /// Hard clamp on the per-axis log-scale delta.
    pub max_log_scale: f64,
    /// Per-object gradient norm clip.
    pub grad_clip: f64,
    pub surface_samples: usize,
}

impl Default for TtoConfig {
    fn default() -> Self {
        TtoConfig {
            steps: 200,
            lr: 0.01,
            lambda_collision: 10.0,
            lambda_ground: 5.0,
            lambda_anchor: 1.0,
            lambda_stability: 2.0,
            lambda_reg: 0.1,
            softplus_beta: 0.01,
            lse_temp: 0.05,
            max_log_scale: 0.7,
            grad_clip: 1.0,
            surface_samples: 256,
        }
    }
}

/// Per-object refinement parameters, applied on top of the base pose.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PoseDelta {
    pub t: Vec3,
    pub yaw: f64,
    pub log_s: Vec3,
}

impl PoseDelta {
    fn norm(&self) -> f64 {
        (self.t.dot(self.t) + self.yaw * self.yaw + self.log_s.dot(self.log_s)).sqrt()
    }

    fn scaled(&self, k: f64) -> PoseDelta {
        PoseDelta {
            t: self.t * k,
            yaw: self.yaw * k,
            log_s: self.log_s * k,
        }
    }

    fn is_finite(&self) -> bool {
        self.t.is_finite() && self.yaw.is_finite() && self.log_s.is_finite()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TtoResult {
    pub deltas: Vec<PoseDelta>,
    pub energy_history: Vec<f64>,
    pub aborted: bool,
}

/// Base pose composed with a delta: t0 + dt, yaw-rotated q0, scale * exp(ls).
pub fn posed(base: &Pose, d: &PoseDelta) -> Pose {
    Pose {
        t: base.t + d.t,
        q: Quat::from_yaw(d.yaw).mul(base.q).normalized(),
        s: Vec3::new(
            base.s.x * d.log_s.x.exp(),
            base.s.y * d.log_s.y.exp(),
            base.s.z * d.log_s.z.exp(),
        ),
    }
}

/// Scene with all deltas applied.
pub fn apply_deltas(scene: &Scene, deltas: &[PoseDelta]) -> Scene {
    let mut out = scene.clone();
    for (obj, d) in out.objects.iter_mut().zip(deltas) {
        obj.pose = posed(&obj.pose, d);
    }
    out
}

fn is_parent_child(a: &ObjectInstance, b: &ObjectInstance) -> bool {
    a.support_parent.as_deref() == Some(b.id.as_str())
        || b.support_parent.as_deref() == Some(a.id.as_str())
}

/// 2D box SDF with gradients wrt the point and the half extents.
fn sd_box2d(p: Vec2, h: Vec2) -> (f64, Vec2, Vec2) {
    let q = Vec2::new(p.x.abs() - h.x, p.y.abs() - h.y);
    let (d, ddq) = if q.x > 0.0 || q.y > 0.0 {
        let o = Vec2::new(q.x.max(0.0), q.y.max(0.0));
        let n = o.norm();
        (n, Vec2::new(o.x / n, o.y / n))
    } else if q.x >= q.y {
        (q.x, Vec2::new(1.0, 0.0))
    } else {
        (q.y, Vec2::new(0.0, 1.0))
    };
    let sp = Vec2::new(
        if p.x >= 0.0 { 1.0 } else { -1.0 },
        if p.y >= 0.0 { 1.0 } else { -1.0 },
    );
    (
        d,
        Vec2::new(ddq.x * sp.x, ddq.y * sp.y),
        Vec2::new(-ddq.x, -ddq.y),
    )
}

struct Ctx {
    poses: Vec<Pose>,
    on_floor: Vec<bool>,
    parent: Vec<Option<usize>>,
    wall_class: Vec<bool>,
}

fn build_ctx(scene: &Scene, priors: &PriorRegistry, deltas: &[PoseDelta]) -> Ctx {
    let poses: Vec<Pose> = scene
        .objects
        .iter()
        .zip(deltas)
        .map(|(o, d)| posed(&o.pose, d))
        .collect();
    let parent: Vec<Option<usize>> = scene
        .objects
        .iter()
        .map(|o| {
            o.support_parent
                .as_deref()
                .and_then(|p| scene.objects.iter().position(|q| q.id == p))
        })
        .collect();
    let on_floor = scene
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| {
            parent[i].is_none()
                && (o.support_parent.as_deref() == Some(SUPPORT_FLOOR)
                    || priors.get(&o.category).map_or(true, |p| {
                        p.is_floor_class || !(p.is_supported_class || p.is_wall_class)
                    }))
        })
        .collect();
    let wall_class = scene
        .objects
        .iter()
        .map(|o| priors.get(&o.category).is_some_and(|p| p.is_wall_class))
        .collect();
    Ctx {
        poses,
        on_floor,
        parent,
        wall_class,
    }
}

fn vertex_world(pose: &Pose, v: Vec3) -> Vec3 {
    pose.apply(v)
}

/// Lowest world-y vertex: (height, canonical vertex).
fn bottom_vertex(obj: &ObjectInstance, pose: &Pose) -> (f64, Vec3) {
    let mut best = (f64::INFINITY, Vec3::ZERO);
    for v in obj.geometry().sample_vertices() {
        let y = vertex_world(pose, v).y;
        if y < best.0 {
            best = (y, v);
        }
    }
    best
}

fn top_vertex(obj: &ObjectInstance, pose: &Pose) -> (f64, Vec3) {
    let mut best = (f64::NEG_INFINITY, Vec3::ZERO);
    for v in obj.geometry().sample_vertices() {
        let y = vertex_world(pose, v).y;
        if y > best.0 {
            best = (y, v);
        }
    }
    best
}

/// d(world point)/d(log-scale axis a) = R e_a * s_a * x_a.
fn dscale(pose: &Pose, x: Vec3, a: usize) -> Vec3 {
    let mut e = Vec3::ZERO;
    e.set(a, 1.0);
    pose.q.rotate(e) * (pose.s.get(a) * x.get(a))
}

pub fn energy(scene: &Scene, priors: &PriorRegistry, deltas: &[PoseDelta], config: &TtoConfig) -> f64 {
    energy_gradient(scene, priors, deltas, config).0
}

/// Energy and its analytic gradient wrt every object's delta.
pub fn energy_gradient(
    scene: &Scene,
    priors: &PriorRegistry,
    deltas: &[PoseDelta],
    config: &TtoConfig,
) -> (f64, Vec<PoseDelta>) {
    let n = scene.objects.len();
    let ctx = build_ctx(scene, priors, deltas);
    let mut e = 0.0;
    let mut grad = vec![PoseDelta::default(); n];
    let beta = config.softplus_beta;

    // Collision: cross-SDF surface samples, parent-child pairs excluded.
    for j in 0..n {
        let target = &scene.objects[j];
        let pose_j = &ctx.poses[j];
        let grid = cached_grid(&target.geometry());
        let rad_j = target
            .geometry()
            .sample_vertices()
            .iter()
            .map(|v| pose_j.s.mul_comp(*v).norm())
            .fold(0.0, f64::max);
        for i in 0..n {
            if i == j || is_parent_child(&scene.objects[i], &scene.objects[j]) {
                continue;
            }
            let probe = &scene.objects[i];
            let pose_i = &ctx.poses[i];
            let rad_i = probe
                .geometry()
                .sample_vertices()
                .iter()
                .map(|v| pose_i.s.mul_comp(*v).norm())
                .fold(0.0, f64::max);
            if (pose_i.t - pose_j.t).norm() > rad_i + rad_j + grid.truncation {
                continue;
            }
            for x in canonical_surface_samples(probe.extents, config.surface_samples) {
                let p = pose_i.apply(x);
                let u = pose_j.to_local(p);
                let (v, gl) = grid.query_local(u);
                if v >= grid.truncation {
                    continue;
                }
                let sp = softplus(-v, beta);
                if sp == 0.0 {
                    continue;
                }
                e += config.lambda_collision * sp * sp;
                let dedv = -2.0 * config.lambda_collision * sp * softplus_deriv(-v, beta);
                let gw = pose_j.q.rotate(Vec3::new(
                    gl.x / pose_j.s.x,
                    gl.y / pose_j.s.y,
                    gl.z / pose_j.s.z,
                ));
                grad[i].t += gw * dedv;
                grad[i].yaw += dedv * gw.dot(WORLD_UP.cross(p - pose_i.t));
                for a in 0..3 {
                    let da = grad[i].log_s.get(a) + dedv * gw.dot(dscale(pose_i, x, a));
                    grad[i].log_s.set(a, da);
                }
                grad[j].t -= gw * dedv;
                grad[j].yaw -= dedv * gw.dot(WORLD_UP.cross(p - pose_j.t));
                for a in 0..3 {
                    let da = grad[j].log_s.get(a) + dedv * gl.get(a) * (-u.get(a));
                    grad[j].log_s.set(a, da);
                }
            }
        }
    }

    // Grounding / on-top support: squared height error to the surface below.
    for i in 0..n {
        let obj = &scene.objects[i];
        let pose_i = &ctx.poses[i];
        let parent = ctx.parent[i];
        if !ctx.on_floor[i] && parent.is_none() {
            continue;
        }
        let (bottom, bx) = bottom_vertex(obj, pose_i);
        let (surface, top_info) = match parent {
            Some(pi) => {
                let (top, tx) = top_vertex(&scene.objects[pi], &ctx.poses[pi]);
                (top, Some((pi, tx)))
            }
            None => (0.0, None),
        };
        let h = bottom - surface;
        e += config.lambda_ground * h * h;
        let dedh = 2.0 * config.lambda_ground * h;
        grad[i].t.y += dedh;
        for a in 0..3 {
            let da = grad[i].log_s.get(a) + dedh * dscale(pose_i, bx, a).y;
            grad[i].log_s.set(a, da);
        }
        if let Some((pi, tx)) = top_info {
            grad[pi].t.y -= dedh;
            for a in 0..3 {
                let da = grad[pi].log_s.get(a) - dedh * dscale(&ctx.poses[pi], tx, a).y;
                grad[pi].log_s.set(a, da);
            }
        }
    }

    // Wall anchoring: squared smooth-min of back-face distance to the walls.
    for i in 0..n {
        if !ctx.wall_class[i] {
            continue;
        }
        let obj = &scene.objects[i];
        let pose_i = &ctx.poses[i];
        let back_local = Vec3::new(0.0, 0.0, -obj.extents.z * 0.5);
        let b3 = pose_i.apply(back_local);
        let b = b3.xz();
        let mut dists: Vec<(f64, Vec2)> = Vec::new();
        for w in &scene.room.walls {
            let ab = w.b - w.a;
            let len2 = ab.dot(ab);
            let t = if len2 == 0.0 {
                0.0
            } else {
                ((b - w.a).dot(ab) / len2).clamp(0.0, 1.0)
            };
            let closest = w.a + ab * t;
            let diff = b - closest;
            let d = diff.norm();
            if d > 1e-12 {
                dists.push((d, diff * (1.0 / d)));
            } else {
                dists.push((d, Vec2::ZERO));
            }
        }
        if dists.is_empty() {
            continue;
        }
        let tmp = config.lse_temp;
        let dmin = dists.iter().map(|(d, _)| *d).fold(f64::INFINITY, f64::min);
        let z: f64 = dists.iter().map(|(d, _)| (-(d - dmin) / tmp).exp()).sum();
        let m = dmin - tmp * z.ln();
        e += config.lambda_anchor * m * m;
        let dedm = 2.0 * config.lambda_anchor * m;
        let mut db = Vec2::ZERO;
        for (d, dir) in &dists {
            let w = (-(d - dmin) / tmp).exp() / z;
            db = db + *dir * (dedm * w);
        }
        let db3 = Vec3::new(db.x, 0.0, db.y);
        grad[i].t += db3;
        grad[i].yaw += db3.dot(WORLD_UP.cross(b3 - pose_i.t));
        for a in 0..3 {
            let da = grad[i].log_s.get(a) + db3.dot(dscale(pose_i, back_local, a));
            grad[i].log_s.set(a, da);
        }
    }

    // Static stability surrogate: COM inside the parent footprint (signed
    // 2D box distance in the parent frame, hinged with softplus).
    for i in 0..n {
        let Some(pi) = ctx.parent[i] else { continue };
        let child = &scene.objects[i];
        let parent = &scene.objects[pi];
        let pose_i = &ctx.poses[i];
        let pose_p = &ctx.poses[pi];
        let centroid = child.geometry().centroid();
        let c = pose_i.apply(centroid);
        let w = c - pose_p.t;
        let r3 = pose_p.q.rotate_inv(w);
        let half = Vec2::new(
            pose_p.s.x * parent.extents.x * 0.5,
            pose_p.s.z * parent.extents.z * 0.5,
        );
        let (d, ddr, ddh) = sd_box2d(Vec2::new(r3.x, r3.z), half);
        let sp = softplus(d, beta);
        if sp > 0.0 {
            e += config.lambda_stability * sp * sp;
            let dedd = 2.0 * config.lambda_stability * sp * softplus_deriv(d, beta);
            // d wrt the COM world position.
            let dc = pose_p.q.rotate(Vec3::new(ddr.x, 0.0, ddr.y)) * dedd;
            grad[i].t += dc;
            grad[i].yaw += dc.dot(WORLD_UP.cross(c - pose_i.t));
            for a in 0..3 {
                let da = grad[i].log_s.get(a) + dc.dot(dscale(pose_i, centroid, a));
                grad[i].log_s.set(a, da);
            }
            grad[pi].t -= dc;
            let drg = pose_p.q.rotate_inv(WORLD_UP.cross(w)) * -1.0;
            grad[pi].yaw += dedd * (ddr.x * drg.x + ddr.y * drg.z);
            let dx = grad[pi].log_s.x + dedd * ddh.x * half.x;
            grad[pi].log_s.set(0, dx);
            let dz = grad[pi].log_s.z + dedd * ddh.y * half.y;
            grad[pi].log_s.set(2, dz);
        }
    }

    // Regularizer on the deltas themselves.
    for i in 0..n {
        let d = &deltas[i];
        e += config.lambda_reg * (d.t.dot(d.t) + d.yaw * d.yaw + d.log_s.dot(d.log_s));
        grad[i].t += d.t * (2.0 * config.lambda_reg);
        grad[i].yaw += 2.0 * config.lambda_reg * d.yaw;
        grad[i].log_s += d.log_s * (2.0 * config.lambda_reg);
    }

    (e, grad)
}

/// Gradient descent with cosine-decayed step size and per-object clipping.
pub fn optimize(scene: &Scene, priors: &PriorRegistry, config: &TtoConfig) -> TtoResult {
    let n = scene.objects.len();
    let mut deltas = vec![PoseDelta::default(); n];
    let mut history = Vec::with_capacity(config.steps);
    let mut aborted = false;
    for step in 0..config.steps {
        let (e, grad) = energy_gradient(scene, priors, &deltas, config);
        if !e.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            aborted = true;
            break;
        }
        history.push(e);
        let lr = config.lr
            * 0.5
            * (1.0 + (std::f64::consts::PI * step as f64 / config.steps as f64).cos());
        for i in 0..n {
            let mut g = grad[i];
            let norm = g.norm();
            if norm > config.grad_clip {
                g = g.scaled(config.grad_clip / norm);
            }
            deltas[i].t -= g.t * lr;
            deltas[i].yaw -= g.yaw * lr;
            deltas[i].log_s -= g.log_s * lr;
            let c = config.max_log_scale;
            deltas[i].log_s = Vec3::new(
                deltas[i].log_s.x.clamp(-c, c),
                deltas[i].log_s.y.clamp(-c, c),
                deltas[i].log_s.z.clamp(-c, c),
            );
        }
    }
    TtoResult {
        deltas,
        energy_history: history,
        aborted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::penetration_depth;
    use crate::scene::{ObjectInstance, Room};
    use std::collections::BTreeMap;

    fn room_scene(objects: Vec<ObjectInstance>) -> Scene {
        Scene {
            room: Room::rectangular(4.8, 4.8, 2.5),
            objects,
            metadata: BTreeMap::new(),
        }
    }

    fn grounded(id: &str, category: &str, extents: Vec3, x: f64, z: f64) -> ObjectInstance {
        let mut o = ObjectInstance::new(id, category, extents);
        o.pose.t = Vec3::new(x, extents.y * 0.5, z);
        o.support_parent = Some(SUPPORT_FLOOR.to_string());
        o
    }

    fn mixed_scene() -> Scene {
        let desk = grounded("d", "desk", Vec3::new(1.1, 0.75, 0.6), 1.5, 1.5);
        let mut lamp = ObjectInstance::new("l", "lamp", Vec3::new(0.3, 0.5, 0.3));
        lamp.pose.t = Vec3::new(1.55, 0.75 + 0.25 + 0.04, 1.45);
        lamp.support_parent = Some("d".to_string());
        let a = grounded("a", "box", Vec3::splat(0.5), -1.5, -1.5);
        let b = grounded("b", "box", Vec3::splat(0.5), -1.1, -1.5);
        let mut cab = grounded("k", "cabinet", Vec3::new(0.9, 1.2, 0.45), 0.0, -4.0);
        cab.pose.t.z = -4.8 + 0.35 + 0.225;
        let mut float_chair = grounded("c", "chair", Vec3::new(0.5, 0.9, 0.5), -2.5, 2.5);
        float_chair.pose.t.y += 0.15;
        room_scene(vec![desk, lamp, a, b, cab, float_chair])
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let priors = PriorRegistry::default_indoor();
        let scene = mixed_scene();
        let config = TtoConfig {
            surface_samples: 128,
            ..TtoConfig::default()
        };
        let n = scene.objects.len();
        // Probe at a slightly perturbed point so nothing is exactly at a kink.
        let mut deltas = vec![PoseDelta::default(); n];
        for (i, d) in deltas.iter_mut().enumerate() {
            let f = (i as f64 + 1.0) * 1e-3;
            d.t = Vec3::new(f, -f * 0.5, f * 0.3);
            d.yaw = f * 0.2;
            d.log_s = Vec3::new(-f * 0.1, f * 0.1, f * 0.05);
        }
        let (_, grad) = energy_gradient(&scene, &priors, &deltas, &config);
        let eps = 1e-7;
        let mut max_rel: f64 = 0.0;
        for i in 0..n {
            for k in 0..7 {
                let mut dp = deltas.clone();
                let mut dm = deltas.clone();
                match k {
                    0 => {
                        dp[i].t.x += eps;
                        dm[i].t.x -= eps;
                    }
                    1 => {
                        dp[i].t.y += eps;
                        dm[i].t.y -= eps;
                    }
                    2 => {
                        dp[i].t.z += eps;
                        dm[i].t.z -= eps;
                    }
                    3 => {
                        dp[i].yaw += eps;
                        dm[i].yaw -= eps;
                    }
                    4 => {
                        dp[i].log_s.x += eps;
                        dm[i].log_s.x -= eps;
                    }
                    5 => {
                        dp[i].log_s.y += eps;
                        dm[i].log_s.y -= eps;
                    }
                    _ => {
                        dp[i].log_s.z += eps;
                        dm[i].log_s.z -= eps;
                    }
                }
                let fd = (energy(&scene, &priors, &dp, &config)
                    - energy(&scene, &priors, &dm, &config))
                    / (2.0 * eps);
                let an = match k {
                    0 => grad[i].t.x,
                    1 => grad[i].t.y,
                    2 => grad[i].t.z,
                    3 => grad[i].yaw,
                    4 => grad[i].log_s.x,
                    5 => grad[i].log_s.y,
                    _ => grad[i].log_s.z,
                };
                let denom = an.abs().max(fd.abs()).max(1e-3);
                let rel = (an - fd).abs() / denom;
                max_rel = max_rel.max(rel);
                assert!(rel < 1e-4, "obj {i} param {k}: an {an} fd {fd}");
            }
        }
        assert!(max_rel < 1e-4, "max rel {max_rel}");
    }

    #[test]
    fn optimize_grounds_floating_object() {
        let priors = PriorRegistry::default_indoor();
        let mut chair = grounded("c", "chair", Vec3::new(0.5, 0.9, 0.5), 0.0, 0.0);
        chair.pose.t.y += 0.25;
        let scene = room_scene(vec![chair]);
        let result = optimize(&scene, &priors, &TtoConfig::default());
        assert!(!result.aborted);
        let refined = apply_deltas(&scene, &result.deltas);
        assert!(refined.objects[0].bottom_height().abs() < 0.01);
    }

    #[test]
    fn optimize_separates_colliding_boxes() {
        let priors = PriorRegistry::default_indoor();
        let a = grounded("a", "box", Vec3::splat(0.5), 0.0, 0.0);
        let b = grounded("b", "box", Vec3::splat(0.5), 0.4, 0.0);
        let scene = room_scene(vec![a, b]);
        assert!(penetration_depth(&scene.objects[0], &scene.objects[1]) > 0.05);
        let result = optimize(&scene, &priors, &TtoConfig::default());
        let refined = apply_deltas(&scene, &result.deltas);
        let d = penetration_depth(&refined.objects[0], &refined.objects[1]);
        assert!(d < 0.005, "residual penetration {d}");
        // They also stay grounded.
        assert!(refined.objects[0].bottom_height().abs() < 0.01);
        assert!(refined.objects[1].bottom_height().abs() < 0.01);
    }

    #[test]
    fn optimize_anchors_cabinet() {
        let priors = PriorRegistry::default_indoor();
        let mut cab = grounded("k", "cabinet", Vec3::new(0.9, 1.2, 0.45), 0.0, 0.0);
        cab.pose.t.z = -4.8 + 0.4 + 0.225;
        let scene = room_scene(vec![cab]);
        let result = optimize(&scene, &priors, &TtoConfig::default());
        let refined = apply_deltas(&scene, &result.deltas);
        let back = refined.objects[0].back_face_center().xz();
        let d = refined
            .room
            .walls
            .iter()
            .map(|w| w.distance_2d(back))
            .fold(f64::INFINITY, f64::min);
        assert!(d < 0.1, "anchor distance {d}");
    }

    #[test]
    fn optimize_recenters_overhanging_lamp() {
        let priors = PriorRegistry::default_indoor();
        let desk = grounded("d", "desk", Vec3::new(1.1, 0.75, 0.6), 0.0, 0.0);
        let mut lamp = ObjectInstance::new("l", "lamp", Vec3::new(0.3, 0.5, 0.3));
        // COM 0.08 past the +x desk edge.
        lamp.pose.t = Vec3::new(0.55 + 0.08, 0.75 + 0.25, 0.0);
        lamp.support_parent = Some("d".to_string());
        let scene = room_scene(vec![desk, lamp]);
        let result = optimize(&scene, &priors, &TtoConfig::default());
        let refined = apply_deltas(&scene, &result.deltas);
        let desk_r = &refined.objects[0];
        let lamp_r = &refined.objects[1];
        let half = desk_r.pose.s.x * desk_r.extents.x * 0.5;
        let overshoot = (lamp_r.com().x - desk_r.pose.t.x).abs() - half;
        assert!(overshoot < 0.0, "overshoot {overshoot}");
        // Still resting on the desk.
        assert!((lamp_r.bottom_height() - desk_r.top_height()).abs() < 0.01);
    }

    #[test]
    fn energy_decreases() {
        let priors = PriorRegistry::default_indoor();
        let scene = mixed_scene();
        let result = optimize(&scene, &priors, &TtoConfig::default());
        assert!(!result.aborted);
        let first = result.energy_history.first().unwrap();
        let last = result.energy_history.last().unwrap();
        assert!(last < &(first * 0.2), "energy {first} -> {last}");
    }
}
