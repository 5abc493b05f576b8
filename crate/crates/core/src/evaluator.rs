//! Nine-constraint physical plausibility evaluator.
//!
//! Each constraint produces a raw potential (phi), per-object violation flags
//! with magnitudes, and a violation rate over the scene's objects. The rates
//! are combined into a single 0-100 plausibility score.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dynamics::{simulate_settle, SimConfig};
use crate::geometry::{
    com_margin, penetration_depth_sampled, signed_distance_to_polygon, support_polygon,
    top_footprint, GeometryError, DEFAULT_SURFACE_SAMPLES, TAU_CONTACT,
};
use crate::math::WORLD_UP;
use crate::navigation::{reachability, ReachConfig};
use crate::priors::{CategoryPrior, PriorRegistry};
use crate::scene::{ObjectInstance, Scene, ViolationKind, SUPPORT_FLOOR};

/// Constraint index order used by `phi`, `rates`, and `weights`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    Orient,
    Scale,
    Collision,
    Ground,
    Support,
    Anchor,
    Static,
    Dynamic,
    Reach,
}

pub const CONSTRAINTS: [Constraint; 9] = [
    Constraint::Orient,
    Constraint::Scale,
    Constraint::Collision,
    Constraint::Ground,
    Constraint::Support,
    Constraint::Anchor,
    Constraint::Static,
    Constraint::Dynamic,
    Constraint::Reach,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvaluatorConfig {
    pub tau_orient: f64,
    pub tau_scale: f64,
    pub tau_collision: f64,
    pub tau_ground: f64,
    pub tau_support: f64,
    pub tau_anchor: f64,
    pub tau_static: f64,
    pub tau_contact: f64,
    pub weights: [f64; 9],
    pub surface_samples: usize,
    pub sim: SimConfig,
    pub reach: ReachConfig,
    /// Skip the settle simulation (dynamic rate reported as zero).
    pub skip_dynamic: bool,
    /// Skip reachability (unreachable rate reported as zero).
    pub skip_reach: bool,
}

impl Default for EvaluatorConfig {
    fn default() -> Self {
        EvaluatorConfig {
            tau_orient: 0.174,
            tau_scale: 0.405,
            tau_collision: 0.005,
            tau_ground: 0.01,
            tau_support: 0.01,
            tau_anchor: 0.10,
            tau_static: 0.0,
            tau_contact: TAU_CONTACT,
            weights: [1.0; 9],
            surface_samples: DEFAULT_SURFACE_SAMPLES,
            sim: SimConfig::default(),
            reach: ReachConfig::default(),
            skip_dynamic: false,
            skip_reach: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectViolation {
    pub constraint: Constraint,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectReport {
    pub id: String,
    pub violations: Vec<ObjectViolation>,
    /// True when the static check found no contact to stand on; the support
    /// check carries the actual violation in that case.
    pub missing_support_contact: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairViolation {
    pub a: String,
    pub b: String,
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicsReport {
    /// Raw constraint potentials, indexed by `CONSTRAINTS`.
    pub phi: [f64; 9],
    /// Violation rates in percent, indexed by `CONSTRAINTS`.
    pub rates: [f64; 9],
    /// Grounding and on-top support failures combined, percent.
    pub floating_rate: f64,
    /// Mean penetration depth over min bounding radius, percent.
    pub collision_severity: f64,
    /// Mean float gap over object height, percent.
    pub floating_severity: f64,
    pub overall: f64,
    pub num_objects: usize,
    pub objects: Vec<ObjectReport>,
    pub collisions: Vec<PairViolation>,
}

impl PhysicsReport {
    pub fn rate(&self, c: Constraint) -> f64 {
        self.rates[c as usize]
    }

    /// Ids of objects flagged for a constraint.
    pub fn flagged(&self, c: Constraint) -> BTreeSet<&str> {
        self.objects
            .iter()
            .filter(|o| o.violations.iter().any(|v| v.constraint == c))
            .map(|o| o.id.as_str())
            .collect()
    }

    /// Ids flagged for the constraint matching a corpus label kind.
    /// Blocking is scene-level (`phi[Reach] > 0`), so it has no id set.
    pub fn flagged_for_kind(&self, kind: ViolationKind) -> Option<BTreeSet<&str>> {
        let c = match kind {
            ViolationKind::Collision => Constraint::Collision,
            ViolationKind::Floating => Constraint::Ground,
            ViolationKind::Unsupported => Constraint::Support,
            ViolationKind::Unanchored => Constraint::Anchor,
            ViolationKind::Misoriented => Constraint::Orient,
            ViolationKind::MisScaled => Constraint::Scale,
            ViolationKind::StaticallyUnstable => Constraint::Static,
            ViolationKind::Blocking => return None,
        };
        Some(self.flagged(c))
    }

    pub fn csv_header() -> &'static str {
        "misorientation_rate,scale_instability_rate,collision_rate,collision_severity,\
         floating_rate,floating_severity,unanchored_rate,static_instability_rate,\
         dynamic_instability_rate,unreachable_rate,overall"
    }

    pub fn csv_row(&self) -> String {
        let f = |x: f64| format!("{:.4}", x);
        [
            f(self.rate(Constraint::Orient)),
            f(self.rate(Constraint::Scale)),
            f(self.rate(Constraint::Collision)),
            f(self.collision_severity),
            f(self.floating_rate),
            f(self.floating_severity),
            f(self.rate(Constraint::Anchor)),
            f(self.rate(Constraint::Static)),
            f(self.rate(Constraint::Dynamic)),
            f(self.rate(Constraint::Reach)),
            f(self.overall),
        ]
        .join(",")
    }
}

fn fallback_prior(obj: &ObjectInstance) -> CategoryPrior {
    CategoryPrior {
        ref_scale: obj.extents,
        canonical_up: WORLD_UP,
        is_floor_class: false,
        is_wall_class: false,
        is_supported_class: false,
    }
}

fn is_parent_child(a: &ObjectInstance, b: &ObjectInstance) -> bool {
    a.support_parent.as_deref() == Some(b.id.as_str())
        || b.support_parent.as_deref() == Some(a.id.as_str())
}

/// World vertical extent of the object.
fn object_height(obj: &ObjectInstance) -> f64 {
    (obj.top_height() - obj.bottom_height()).max(1e-9)
}

pub fn evaluate(scene: &Scene, priors: &PriorRegistry, config: &EvaluatorConfig) -> PhysicsReport {
    let n = scene.objects.len();
    let mut phi = [0.0f64; 9];
    let mut objects: Vec<ObjectReport> = scene
        .objects
        .iter()
        .map(|o| ObjectReport {
            id: o.id.clone(),
            violations: Vec::new(),
            missing_support_contact: false,
        })
        .collect();
    let mut collisions = Vec::new();

    let mut float_mags: Vec<(usize, f64)> = Vec::new();

    for (i, obj) in scene.objects.iter().enumerate() {
        let prior = priors
            .get(&obj.category)
            .cloned()
            .unwrap_or_else(|| fallback_prior(obj));

        // Orientation: deviation of the canonical up axis from world up.
        let up_world = obj.pose.q.rotate(prior.canonical_up);
        let align = up_world.dot(WORLD_UP).clamp(-1.0, 1.0);
        phi[Constraint::Orient as usize] += 1.0 - align.abs();
        let tilt = align.abs().acos();
        if tilt > config.tau_orient {
            objects[i].violations.push(ObjectViolation {
                constraint: Constraint::Orient,
                magnitude: tilt,
            });
        }

        // Scale: L1 log-ratio of world extents against the category reference.
        let world = obj.pose.s.mul_comp(obj.extents);
        let e = (world.x / prior.ref_scale.x).ln().abs()
            + (world.y / prior.ref_scale.y).ln().abs()
            + (world.z / prior.ref_scale.z).ln().abs();
        phi[Constraint::Scale as usize] += e;
        if e > config.tau_scale {
            objects[i].violations.push(ObjectViolation {
                constraint: Constraint::Scale,
                magnitude: e,
            });
        }

        // Grounding: floor-standing objects must touch y = 0.
        let on_floor = prior.is_floor_class
            || obj.support_parent.as_deref() == Some(SUPPORT_FLOOR)
            || (obj.support_parent.is_none() && !prior.is_supported_class && !prior.is_wall_class);
        let parent_obj = obj
            .support_parent
            .as_deref()
            .and_then(|p| scene.object(p));
        if on_floor && parent_obj.is_none() {
            let h = obj.bottom_height().abs();
            phi[Constraint::Ground as usize] += h;
            if h > config.tau_ground {
                objects[i].violations.push(ObjectViolation {
                    constraint: Constraint::Ground,
                    magnitude: h,
                });
                float_mags.push((i, h));
            }
        }

        // On-top support: vertical gap to the parent's top surface plus the
        // horizontal COM overshoot beyond the parent's top footprint.
        if let Some(parent) = parent_obj {
            let surface_y = parent.top_height();
            let gap = (obj.bottom_height() - surface_y).abs();
            let fp = top_footprint(parent, config.tau_contact);
            let overshoot = signed_distance_to_polygon(obj.com().xz(), &fp).max(0.0);
            let d = gap + overshoot;
            phi[Constraint::Support as usize] += d;
            if d > config.tau_support {
                objects[i].violations.push(ObjectViolation {
                    constraint: Constraint::Support,
                    magnitude: d,
                });
                float_mags.push((i, d));
            }
        }

        // Wall anchoring: back-face center distance to the nearest wall.
        if prior.is_wall_class {
            let back = obj.back_face_center().xz();
            let d = scene
                .room
                .walls
                .iter()
                .map(|w| w.distance_2d(back))
                .fold(f64::INFINITY, f64::min);
            if d.is_finite() {
                phi[Constraint::Anchor as usize] += d;
                if d > config.tau_anchor {
                    objects[i].violations.push(ObjectViolation {
                        constraint: Constraint::Anchor,
                        magnitude: d,
                    });
                }
            }
        }

        // Static stability: COM must project inside the support polygon.
        let static_applicable = on_floor || parent_obj.is_some();
        if static_applicable {
            let (surface_y, parent_fp) = match parent_obj {
                Some(parent) => (
                    parent.top_height(),
                    Some(top_footprint(parent, config.tau_contact)),
                ),
                None => (0.0, None),
            };
            match support_polygon(obj, surface_y, parent_fp.as_deref(), config.tau_contact) {
                Ok(sp) => {
                    let margin = com_margin(obj, &sp);
                    phi[Constraint::Static as usize] += margin.max(0.0);
                    if margin > config.tau_static {
                        objects[i].violations.push(ObjectViolation {
                            constraint: Constraint::Static,
                            magnitude: margin,
                        });
                    }
                }
                Err(GeometryError::EmptySupport) => {
                    // Nothing to stand on: the grounding / support checks
                    // already report the gap, so only mark it.
                    objects[i].missing_support_contact = true;
                }
                Err(_) => {}
            }
        }
    }

    // Pairwise collisions; resting parent-child contact is not a collision.
    let mut severity_sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&scene.objects[i], &scene.objects[j]);
            if is_parent_child(a, b) {
                continue;
            }
            let depth = penetration_depth_sampled(a, b, config.surface_samples);
            phi[Constraint::Collision as usize] += depth;
            if depth > config.tau_collision {
                collisions.push(PairViolation {
                    a: a.id.clone(),
                    b: b.id.clone(),
                    depth,
                });
                severity_sum += depth / a.bounding_radius().min(b.bounding_radius());
                for k in [i, j] {
                    if !objects[k]
                        .violations
                        .iter()
                        .any(|v| v.constraint == Constraint::Collision)
                    {
                        objects[k].violations.push(ObjectViolation {
                            constraint: Constraint::Collision,
                            magnitude: depth,
                        });
                    }
                }
            }
        }
    }
    let collision_severity = if collisions.is_empty() {
        0.0
    } else {
        100.0 * severity_sum / collisions.len() as f64
    };

    // Dynamic stability: settle simulation.
    if !config.skip_dynamic && n > 0 {
        let settle = simulate_settle(scene, &config.sim);
        phi[Constraint::Dynamic as usize] = settle.num_unstable as f64;
        for (i, d) in settle.objects.iter().enumerate() {
            if d.unstable {
                objects[i].violations.push(ObjectViolation {
                    constraint: Constraint::Dynamic,
                    magnitude: d.tilt.max(d.displacement),
                });
            }
        }
    }

    // Reachability.
    if !config.skip_reach {
        let reach = reachability(scene, &config.reach);
        phi[Constraint::Reach as usize] = reach.phi;
    }

    // Rates.
    let mut rates = [0.0f64; 9];
    if n > 0 {
        for (ci, c) in CONSTRAINTS.iter().enumerate() {
            if *c == Constraint::Reach {
                continue;
            }
            let flagged = objects
                .iter()
                .filter(|o| o.violations.iter().any(|v| v.constraint == *c))
                .count();
            rates[ci] = 100.0 * flagged as f64 / n as f64;
        }
    }
    rates[Constraint::Reach as usize] = 100.0 * phi[Constraint::Reach as usize];

    let floating_flagged: BTreeSet<usize> = float_mags.iter().map(|(i, _)| *i).collect();
    let floating_rate = if n > 0 {
        100.0 * floating_flagged.len() as f64 / n as f64
    } else {
        0.0
    };
    let floating_severity = if float_mags.is_empty() {
        0.0
    } else {
        100.0
            * float_mags
                .iter()
                .map(|(i, m)| m / object_height(&scene.objects[*i]))
                .sum::<f64>()
            / float_mags.len() as f64
    };

    let wsum: f64 = config.weights.iter().sum();
    let overall = if wsum > 0.0 {
        100.0
            * (1.0
                - config
                    .weights
                    .iter()
                    .zip(&rates)
                    .map(|(w, r)| w * r / 100.0)
                    .sum::<f64>()
                    / wsum)
    } else {
        100.0
    };

    PhysicsReport {
        phi,
        rates,
        floating_rate,
        collision_severity,
        floating_severity,
        overall,
        num_objects: n,
        objects,
        collisions,
    }
}

/// Scalar physics reward: negative weighted sum of the constraint potentials.
pub fn reward(scene: &Scene, priors: &PriorRegistry, config: &EvaluatorConfig) -> f64 {
    let report = evaluate(scene, priors, config);
    -config
        .weights
        .iter()
        .zip(&report.phi)
        .map(|(w, p)| w * p)
        .sum::<f64>()
}
