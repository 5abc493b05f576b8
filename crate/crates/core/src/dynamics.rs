//! Short-horizon rigid-body settle simulation.
//!
//! Every object is simulated as a free rigid box (hull vertices act as the
//! contact points when present) under gravity, against the floor plane, the
//! room walls, and each other. After the horizon the per-object motion is
//! compared against tilt / slide / rest-speed thresholds to flag dynamic
//! instability.

use serde::{Deserialize, Serialize};

use crate::geometry::{box_sdf, box_sdf_grad};
use crate::math::{Quat, Vec2, Vec3, WORLD_UP};
use crate::scene::Scene;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub dt: f64,
    pub horizon: f64,
    pub gravity: f64,
    pub restitution: f64,
    pub friction: f64,
    /// Tilt beyond this angle (radians) at the end of the horizon => unstable.
    pub tip_threshold: f64,
    /// Horizontal COM displacement beyond this (meters) => unstable.
    pub slide_threshold: f64,
    /// Linear speed above this (m/s) at the end of the horizon => unstable.
    pub rest_speed: f64,
    pub solver_iterations: usize,
    /// Positional correction factor (split impulse).
    pub correction_beta: f64,
    /// Penetration slop left uncorrected (meters).
    pub slop: f64,
    /// Speed at which a body is declared divergent and frozen.
    pub blowup_speed: f64,
    /// Record a trajectory frame every N steps (0 = off).
    pub record_every: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1.0 / 120.0,
            horizon: 2.0,
            gravity: 9.81,
            restitution: 0.0,
            friction: 0.5,
            tip_threshold: 15f64.to_radians(),
            slide_threshold: 0.05,
            rest_speed: 0.01,
            solver_iterations: 8,
            correction_beta: 0.2,
            slop: 0.002,
            blowup_speed: 100.0,
            record_every: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObjectDynamics {
    pub id: String,
    /// Final deviation of the initially-up body axis from world up, radians.
    pub tilt: f64,
    /// Final horizontal displacement of the body origin, meters.
    pub displacement: f64,
    pub final_speed: f64,
    pub blown_up: bool,
    pub unstable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrajectoryFrame {
    pub time: f64,
    pub poses: Vec<(Vec3, Quat)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SettleReport {
    pub objects: Vec<ObjectDynamics>,
    pub num_unstable: usize,
    pub trajectory: Vec<TrajectoryFrame>,
}

const DENSITY: f64 = 100.0;

struct Body {
    t: Vec3,
    q: Quat,
    v: Vec3,
    w: Vec3,
    inv_mass: f64,
    /// Inverse of the diagonal body-frame inertia tensor.
    inv_inertia: Vec3,
    half: Vec3,
    /// Contact points in the scaled body frame.
    points: Vec<Vec3>,
    t0: Vec3,
    q0: Quat,
    frozen: bool,
}

impl Body {
    fn inv_inertia_world(&self, v: Vec3) -> Vec3 {
        let u = self.q.rotate_inv(v);
        self.q.rotate(self.inv_inertia.mul_comp(u))
    }

    fn point_velocity(&self, r: Vec3) -> Vec3 {
        self.v + self.w.cross(r)
    }
}

struct Contact {
    a: usize,
    /// None => static geometry (floor or wall).
    b: Option<usize>,
    point: Vec3,
    /// Unit normal pointing from b (or the static surface) toward a.
    normal: Vec3,
    depth: f64,
    impulse_n: f64,
    impulse_t: [f64; 2],
    tangents: [Vec3; 2],
}

fn make_bodies(scene: &Scene) -> Vec<Body> {
    scene
        .objects
        .iter()
        .map(|o| {
            let full = o.pose.s.mul_comp(o.extents);
            let mass = (DENSITY * full.x * full.y * full.z).max(1e-6);
            let i = Vec3::new(
                mass / 12.0 * (full.y * full.y + full.z * full.z),
                mass / 12.0 * (full.x * full.x + full.z * full.z),
                mass / 12.0 * (full.x * full.x + full.y * full.y),
            );
            let points = o
                .geometry()
                .sample_vertices()
                .into_iter()
                .map(|p| o.pose.s.mul_comp(p))
                .collect();
            Body {
                t: o.pose.t,
                q: o.pose.q,
                v: Vec3::ZERO,
                w: Vec3::ZERO,
                inv_mass: 1.0 / mass,
                inv_inertia: Vec3::new(1.0 / i.x, 1.0 / i.y, 1.0 / i.z),
                half: full * 0.5,
                points,
                t0: o.pose.t,
                q0: o.pose.q,
                frozen: false,
            }
        })
        .collect()
}

fn tangent_basis(n: Vec3) -> [Vec3; 2] {
    let a = if n.x.abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let t1 = n.cross(a).normalized();
    let t2 = n.cross(t1);
    [t1, t2]
}

/// Inward wall normals for each wall segment (interior to the left of a->b
/// for a counter-clockwise room polygon).
fn wall_planes(scene: &Scene) -> Vec<(Vec2, Vec2, f64, f64)> {
    scene
        .room
        .walls
        .iter()
        .map(|w| {
            let dir = (w.b - w.a).normalized();
            (w.a, dir.perp(), (w.b - w.a).norm(), w.height)
        })
        .collect()
}

fn collect_contacts(bodies: &[Body], walls: &[(Vec2, Vec2, f64, f64)], margin: f64) -> Vec<Contact> {
    let mut contacts = Vec::new();
    for (ai, a) in bodies.iter().enumerate() {
        if a.frozen {
            continue;
        }
        for &pl in &a.points {
            let p = a.t + a.q.rotate(pl);
            // Floor.
            if p.y < margin {
                contacts.push(Contact {
                    a: ai,
                    b: None,
                    point: p,
                    normal: WORLD_UP,
                    depth: -p.y,
                    impulse_n: 0.0,
                    impulse_t: [0.0; 2],
                    tangents: tangent_basis(WORLD_UP),
                });
            }
            // Walls (treated as inward-facing planes over their span).
            for &(wa, n, len, height) in walls {
                if p.y < 0.0 || p.y > height {
                    continue;
                }
                let rel = p.xz() - wa;
                // Project onto the wall direction (perp of the inward normal).
                let s = rel.dot(Vec2::new(n.y, -n.x));
                if s < -margin || s > len + margin {
                    continue;
                }
                let d = rel.dot(n);
                if d < margin {
                    let nw = Vec3::new(n.x, 0.0, n.y);
                    contacts.push(Contact {
                        a: ai,
                        b: None,
                        point: p,
                        normal: nw,
                        depth: -d,
                        impulse_n: 0.0,
                        impulse_t: [0.0; 2],
                        tangents: tangent_basis(nw),
                    });
                }
            }
        }
    }
    // Body-body: corners of a against the analytic box SDF of b.
    for ai in 0..bodies.len() {
        for bi in 0..bodies.len() {
            if ai == bi || bodies[ai].frozen || bodies[bi].frozen {
                continue;
            }
            let (a, b) = (&bodies[ai], &bodies[bi]);
            let center_gap = (a.t - b.t).norm();
            let ra = a.half.norm();
            let rb = b.half.norm();
            if center_gap > ra + rb + margin {
                continue;
            }
            for &pl in &a.points {
                let p = a.t + a.q.rotate(pl);
                let u = b.q.rotate_inv(p - b.t);
                let d = box_sdf(u, b.half * 2.0);
                if d < margin {
                    let n = b.q.rotate(box_sdf_grad(u, b.half * 2.0)).normalized();
                    if n.norm() == 0.0 {
                        continue;
                    }
                    contacts.push(Contact {
                        a: ai,
                        b: Some(bi),
                        point: p,
                        normal: n,
                        depth: -d,
                        impulse_n: 0.0,
                        impulse_t: [0.0; 2],
                        tangents: tangent_basis(n),
                    });
                }
            }
        }
    }
    contacts
}

pub fn simulate_settle(scene: &Scene, config: &SimConfig) -> SettleReport {
    let mut bodies = make_bodies(scene);
    let walls = wall_planes(scene);
    let steps = (config.horizon / config.dt).round() as usize;
    let margin = config.slop.max(1e-4) * 2.0;
    let gravity = Vec3::new(0.0, -config.gravity, 0.0);
    let mut trajectory = Vec::new();

    for step in 0..steps {
        for b in bodies.iter_mut() {
            if !b.frozen {
                b.v += gravity * config.dt;
            }
        }
        let mut contacts = collect_contacts(&bodies, &walls, margin);
        for _ in 0..config.solver_iterations {
            for c in contacts.iter_mut() {
                solve_contact_velocity(&mut bodies, c, config);
            }
        }
        // Split-impulse positional correction (linear only).
        for c in &contacts {
            let corr = config.correction_beta * (c.depth - config.slop).max(0.0);
            if corr <= 0.0 {
                continue;
            }
            let inv_a = bodies[c.a].inv_mass;
            let inv_b = c.b.map_or(0.0, |bi| bodies[bi].inv_mass);
            let total = inv_a + inv_b;
            if total == 0.0 {
                continue;
            }
            bodies[c.a].t += c.normal * (corr * inv_a / total);
            if let Some(bi) = c.b {
                bodies[bi].t -= c.normal * (corr * inv_b / total);
            }
        }
        for b in bodies.iter_mut() {
            if b.frozen {
                continue;
            }
            if b.v.norm() > config.blowup_speed || !b.v.is_finite() || !b.t.is_finite() {
                b.frozen = true;
                b.v = Vec3::ZERO;
                b.w = Vec3::ZERO;
                continue;
            }
            b.t += b.v * config.dt;
            let wq = Quat {
                w: 0.0,
                x: b.w.x,
                y: b.w.y,
                z: b.w.z,
            };
            let dq = wq.mul(b.q);
            b.q = Quat {
                w: b.q.w + 0.5 * dq.w * config.dt,
                x: b.q.x + 0.5 * dq.x * config.dt,
                y: b.q.y + 0.5 * dq.y * config.dt,
                z: b.q.z + 0.5 * dq.z * config.dt,
            }
            .normalized();
        }
        if config.record_every > 0 && step % config.record_every == 0 {
            trajectory.push(TrajectoryFrame {
                time: (step + 1) as f64 * config.dt,
                poses: bodies.iter().map(|b| (b.t, b.q)).collect(),
            });
        }
    }

    let mut objects = Vec::with_capacity(bodies.len());
    let mut num_unstable = 0;
    for (b, obj) in bodies.iter().zip(&scene.objects) {
        let up0 = b.q0.rotate_inv(WORLD_UP);
        let tilt = b.q.rotate(up0).dot(WORLD_UP).clamp(-1.0, 1.0).acos();
        let displacement = (b.t.xz() - b.t0.xz()).norm();
        let final_speed = b.v.norm();
        let unstable = b.frozen
            || tilt > config.tip_threshold
            || displacement > config.slide_threshold
            || final_speed > config.rest_speed;
        if unstable {
            num_unstable += 1;
        }
        objects.push(ObjectDynamics {
            id: obj.id.clone(),
            tilt,
            displacement,
            final_speed,
            blown_up: b.frozen,
            unstable,
        });
    }
    SettleReport {
        objects,
        num_unstable,
        trajectory,
    }
}

fn solve_contact_velocity(bodies: &mut [Body], c: &mut Contact, config: &SimConfig) {
    let ra = c.point - bodies[c.a].t;
    let rb = c.b.map(|bi| c.point - bodies[bi].t);

    let rel_v = |bodies: &[Body], c: &Contact| -> Vec3 {
        let va = bodies[c.a].point_velocity(c.point - bodies[c.a].t);
        match c.b {
            Some(bi) => va - bodies[bi].point_velocity(c.point - bodies[bi].t),
            None => va,
        }
    };

    // Normal impulse (accumulated, clamped to be non-negative).
    let vn = rel_v(bodies, c).dot(c.normal);
    let k = effective_mass(bodies, c, c.normal, ra, rb);
    if k > 0.0 {
        let target = -config.restitution * vn.min(0.0);
        let dl = (target - vn) / k;
        let new_total = (c.impulse_n + dl).max(0.0);
        let applied = new_total - c.impulse_n;
        c.impulse_n = new_total;
        apply_impulse(bodies, c, c.normal * applied, ra, rb);
    }

    // Friction along both tangents, clamped by the friction cone.
    for ti in 0..2 {
        let t = c.tangents[ti];
        let vt = rel_v(bodies, c).dot(t);
        let k = effective_mass(bodies, c, t, ra, rb);
        if k <= 0.0 {
            continue;
        }
        let dl = -vt / k;
        let max = config.friction * c.impulse_n;
        let new_total = (c.impulse_t[ti] + dl).clamp(-max, max);
        let applied = new_total - c.impulse_t[ti];
        c.impulse_t[ti] = new_total;
        apply_impulse(bodies, c, t * applied, ra, rb);
    }
}

fn effective_mass(bodies: &[Body], c: &Contact, dir: Vec3, ra: Vec3, rb: Option<Vec3>) -> f64 {
    let a = &bodies[c.a];
    let mut k = a.inv_mass + dir.dot(a.inv_inertia_world(ra.cross(dir)).cross(ra));
    if let (Some(bi), Some(rb)) = (c.b, rb) {
        let b = &bodies[bi];
        k += b.inv_mass + dir.dot(b.inv_inertia_world(rb.cross(dir)).cross(rb));
    }
    k
}

fn apply_impulse(bodies: &mut [Body], c: &Contact, j: Vec3, ra: Vec3, rb: Option<Vec3>) {
    {
        let a = &mut bodies[c.a];
        a.v += j * a.inv_mass;
        let dw = a.inv_inertia_world(ra.cross(j));
        a.w += dw;
    }
    if let (Some(bi), Some(rb)) = (c.b, rb) {
        let b = &mut bodies[bi];
        b.v -= j * b.inv_mass;
        let dw = b.inv_inertia_world(rb.cross(j));
        b.w -= dw;
    }
}
