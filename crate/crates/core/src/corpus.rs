//! Labeled synthetic corpus generator.
//!
//! Scenes are laid out on a 4x4 grid of 2.4 m cells inside a 9.6 x 9.6 m
//! room. Objects stay well inside their cell so the corridors between cells
//! are always traversable; each scene then receives at most one injected
//! violation with a known ground-truth magnitude.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::math::{Quat, Vec2, Vec3, WORLD_UP};
use crate::priors::PriorRegistry;
use crate::scene::{
    save_scene, to_canonical_json, ObjectInstance, Result, Room, Scene, SceneError,
    ViolationKind, ViolationLabel, SUPPORT_FLOOR,
};

pub const ROOM_HALF: f64 = 4.8;
pub const CELL: f64 = 2.4;
pub const GRID: usize = 4;
const WALL_HEIGHT: f64 = 2.5;
/// Maximum footprint circumradius around the cell center; keeps a >= 0.4 m
/// free corridor between neighboring cells under 0.3 m inflation.
const PLACE_RADIUS: f64 = 0.7;

/// Relative weights for the per-scene injection draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MixWeights {
    pub clean: f64,
    pub collision: f64,
    pub floating: f64,
    pub unsupported: f64,
    pub unanchored: f64,
    pub misoriented: f64,
    pub mis_scaled: f64,
    pub statically_unstable: f64,
    pub blocking: f64,
}

impl Default for MixWeights {
    fn default() -> Self {
        MixWeights {
            clean: 0.2,
            collision: 0.1,
            floating: 0.1,
            unsupported: 0.1,
            unanchored: 0.1,
            misoriented: 0.1,
            mis_scaled: 0.1,
            statically_unstable: 0.1,
            blocking: 0.1,
        }
    }
}

impl MixWeights {
    /// Mix used for pose-refinement experiments: only violations that a
    /// translation/yaw/scale refiner is expected to fix.
    pub fn refinable() -> Self {
        MixWeights {
            clean: 0.0,
            collision: 0.25,
            floating: 0.25,
            unsupported: 0.2,
            unanchored: 0.15,
            misoriented: 0.0,
            mis_scaled: 0.0,
            statically_unstable: 0.15,
            blocking: 0.0,
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Option<ViolationKind> {
        let entries = [
            (None, self.clean),
            (Some(ViolationKind::Collision), self.collision),
            (Some(ViolationKind::Floating), self.floating),
            (Some(ViolationKind::Unsupported), self.unsupported),
            (Some(ViolationKind::Unanchored), self.unanchored),
            (Some(ViolationKind::Misoriented), self.misoriented),
            (Some(ViolationKind::MisScaled), self.mis_scaled),
            (
                Some(ViolationKind::StaticallyUnstable),
                self.statically_unstable,
            ),
            (Some(ViolationKind::Blocking), self.blocking),
        ];
        let total: f64 = entries.iter().map(|(_, w)| w).sum();
        let mut u = rng.gen_range(0.0..total.max(1e-12));
        for (kind, w) in entries {
            if u < w {
                return kind;
            }
            u -= w;
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CorpusConfig {
    pub num_scenes: usize,
    pub seed: u64,
    pub cells_min: usize,
    pub cells_max: usize,
    pub mix: MixWeights,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            num_scenes: 200,
            seed: 7,
            cells_min: 5,
            cells_max: 8,
            mix: MixWeights::default(),
        }
    }
}

fn cell_center(cell: (usize, usize)) -> Vec2 {
    Vec2::new(
        -ROOM_HALF + CELL * (cell.0 as f64 + 0.5),
        -ROOM_HALF + CELL * (cell.1 as f64 + 0.5),
    )
}

fn is_perimeter_non_corner(cell: (usize, usize)) -> bool {
    let edge_x = cell.0 == 0 || cell.0 == GRID - 1;
    let edge_z = cell.1 == 0 || cell.1 == GRID - 1;
    edge_x != edge_z
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn jitter_scale(rng: &mut ChaCha8Rng) -> Vec3 {
    Vec3::new(
        rng.gen_range(-0.08..0.08f64).exp(),
        rng.gen_range(-0.08..0.08f64).exp(),
        rng.gen_range(-0.08..0.08f64).exp(),
    )
}

fn yaw_90k(rng: &mut ChaCha8Rng, jittered: bool) -> f64 {
    let k = rng.gen_range(0..4) as f64;
    let j = if jittered {
        rng.gen_range(-6f64.to_radians()..6f64.to_radians())
    } else {
        0.0
    };
    k * FRAC_PI_2 + j
}

struct Builder<'a> {
    rng: ChaCha8Rng,
    priors: &'a PriorRegistry,
    objects: Vec<ObjectInstance>,
    labels: Vec<ViolationLabel>,
    counter: usize,
}

impl<'a> Builder<'a> {
    fn next_id(&mut self, category: &str) -> String {
        let id = format!("{category}_{}", self.counter);
        self.counter += 1;
        id
    }

    /// Grounded, yawed object confined near the cell center.
    fn place_floor(&mut self, category: &str, cell: (usize, usize)) -> usize {
        let prior = self.priors.get(category).expect("registered category");
        let ref_scale = prior.ref_scale;
        let id = self.next_id(category);
        let s = jitter_scale(&mut self.rng);
        let world = s.mul_comp(ref_scale);
        let r = (world.x * world.x + world.z * world.z).sqrt() * 0.5;
        let slack = (PLACE_RADIUS - r).max(0.0);
        let c = cell_center(cell);
        let mut o = ObjectInstance::new(id, category, ref_scale);
        o.pose.s = s;
        o.pose.t = Vec3::new(
            c.x + self.rng.gen_range(-slack..slack.max(1e-9)),
            world.y * 0.5,
            c.y + self.rng.gen_range(-slack..slack.max(1e-9)),
        );
        o.pose.q = Quat::from_yaw(yaw_90k(&mut self.rng, true));
        o.support_parent = Some(SUPPORT_FLOOR.to_string());
        self.objects.push(o);
        self.objects.len() - 1
    }

    /// Lamp resting exactly on a parent's top surface, COM near its center.
    fn place_lamp_on(&mut self, parent_idx: usize) -> usize {
        let parent = self.objects[parent_idx].clone();
        let id = self.next_id("lamp");
        let prior = self.priors.get("lamp").expect("lamp prior");
        let s = jitter_scale(&mut self.rng);
        let world = s.mul_comp(prior.ref_scale);
        let top = parent.top_height();
        let (ox, oz) = (
            self.rng.gen_range(-0.1..0.1),
            self.rng.gen_range(-0.1..0.1),
        );
        let mut o = ObjectInstance::new(id, "lamp", prior.ref_scale);
        o.pose.s = s;
        o.pose.t = Vec3::new(
            parent.pose.t.x + ox,
            top + world.y * 0.5,
            parent.pose.t.z + oz,
        );
        o.pose.q = Quat::from_yaw(yaw_90k(&mut self.rng, true));
        o.support_parent = Some(parent.id.clone());
        self.objects.push(o);
        self.objects.len() - 1
    }

    /// Cabinet with its back face (-Z) at distance `d` from a perimeter wall.
    fn place_cabinet(&mut self, cell: (usize, usize), d: f64) -> usize {
        let prior = self.priors.get("cabinet").expect("cabinet prior");
        let id = self.next_id("cabinet");
        let s = jitter_scale(&mut self.rng);
        let world = s.mul_comp(prior.ref_scale);
        let c = cell_center(cell);
        // Face away from the nearest wall: back face -Z toward it.
        let (yaw, t) = if cell.1 == 0 {
            (0.0, Vec3::new(c.x, 0.0, -ROOM_HALF + d + world.z * 0.5))
        } else if cell.1 == GRID - 1 {
            (
                std::f64::consts::PI,
                Vec3::new(c.x, 0.0, ROOM_HALF - d - world.z * 0.5),
            )
        } else if cell.0 == 0 {
            (FRAC_PI_2, Vec3::new(-ROOM_HALF + d + world.z * 0.5, 0.0, c.y))
        } else {
            (-FRAC_PI_2, Vec3::new(ROOM_HALF - d - world.z * 0.5, 0.0, c.y))
        };
        let mut o = ObjectInstance::new(id, "cabinet", prior.ref_scale);
        o.pose.s = s;
        o.pose.t = Vec3::new(t.x, world.y * 0.5, t.z);
        o.pose.q = Quat::from_yaw(yaw);
        o.support_parent = Some(SUPPORT_FLOOR.to_string());
        self.objects.push(o);
        self.objects.len() - 1
    }

    fn label(&mut self, idx: usize, kind: ViolationKind, magnitude: f64) {
        self.labels.push(ViolationLabel {
            object_id: self.objects[idx].id.clone(),
            kind,
            magnitude,
        });
    }
}

/// Generate scene `index` of the corpus. Deterministic in (config, index).
pub fn generate_scene(
    config: &CorpusConfig,
    priors: &PriorRegistry,
    index: usize,
) -> Result<(Scene, Vec<ViolationLabel>)> {
    if config.cells_max > GRID * GRID || config.cells_min < 3 || config.cells_min > config.cells_max
    {
        return Err(SceneError::Generation(format!(
            "cell count range {}..={} outside 3..={}",
            config.cells_min,
            config.cells_max,
            GRID * GRID
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(
        config
            .seed
            .wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(index as u64 + 1)),
    );
    let kind = config.mix.draw(&mut rng);

    let mut cells: Vec<(usize, usize)> = (0..GRID)
        .flat_map(|i| (0..GRID).map(move |j| (i, j)))
        .collect();
    cells.shuffle(&mut rng);
    let n_cells = rng.gen_range(config.cells_min..=config.cells_max);

    let mut b = Builder {
        rng,
        priors,
        objects: Vec::new(),
        labels: Vec::new(),
        counter: 0,
    };

    // Reserve a perimeter (non-corner) cell when a wall cabinet is needed.
    let wants_cabinet = matches!(kind, Some(ViolationKind::Unanchored))
        || b.rng.gen_bool(0.4);
    let cabinet_cell = if wants_cabinet {
        let pos = cells.iter().position(|&c| is_perimeter_non_corner(c));
        pos.map(|p| cells.remove(p))
    } else {
        None
    };
    // A desk is required whenever something has to sit on it.
    let wants_desk = matches!(
        kind,
        Some(ViolationKind::Unsupported) | Some(ViolationKind::StaticallyUnstable)
    ) || b.rng.gen_bool(0.5);
    let desk_cell = if wants_desk { Some(cells.remove(0)) } else { None };

    let mut remaining = n_cells
        .saturating_sub(cabinet_cell.iter().count() + desk_cell.iter().count());

    // Collision injection takes its own cell with two overlapping boxes.
    let collision_cell = if matches!(kind, Some(ViolationKind::Collision)) {
        remaining = remaining.saturating_sub(1);
        Some(cells.remove(0))
    } else {
        None
    };

    let pool = ["chair", "nightstand", "plant", "box"];
    let mut generic: Vec<usize> = Vec::new();
    for _ in 0..remaining.max(1) {
        if cells.is_empty() {
            break;
        }
        let cell = cells.remove(0);
        let cat = pool[b.rng.gen_range(0..pool.len())];
        generic.push(b.place_floor(cat, cell));
    }

    let desk_idx = desk_cell.map(|cell| b.place_floor("desk", cell));
    // A well-placed lamp accompanies the desk unless the injection poses one.
    if let Some(d) = desk_idx {
        if !matches!(
            kind,
            Some(ViolationKind::Unsupported) | Some(ViolationKind::StaticallyUnstable)
        ) {
            b.place_lamp_on(d);
        }
    }

    let cabinet_d = match kind {
        Some(ViolationKind::Unanchored) => log_uniform(&mut b.rng, 0.15, 0.6),
        _ => 0.0,
    };
    let cabinet_idx = cabinet_cell.map(|cell| b.place_cabinet(cell, cabinet_d));

    match kind {
        None => {}
        Some(ViolationKind::Collision) => {
            let cell = collision_cell.expect("collision cell reserved");
            let d = log_uniform(&mut b.rng, 0.04, 0.15);
            let prior = b.priors.get("box").expect("box prior").clone();
            let c = cell_center(cell);
            let (s1, s2) = (jitter_scale(&mut b.rng), jitter_scale(&mut b.rng));
            let (w1, w2) = (s1.x * prior.ref_scale.x, s2.x * prior.ref_scale.x);
            let total = w1 + w2 - d;
            let id1 = b.next_id("box");
            let id2 = b.next_id("box");
            let mut a = ObjectInstance::new(id1, "box", prior.ref_scale);
            a.pose.s = s1;
            a.pose.t = Vec3::new(
                c.x - total * 0.5 + w1 * 0.5,
                s1.y * prior.ref_scale.y * 0.5,
                c.y,
            );
            a.support_parent = Some(SUPPORT_FLOOR.to_string());
            let mut o2 = ObjectInstance::new(id2, "box", prior.ref_scale);
            o2.pose.s = s2;
            o2.pose.t = Vec3::new(
                a.pose.t.x + (w1 + w2) * 0.5 - d,
                s2.y * prior.ref_scale.y * 0.5,
                c.y,
            );
            o2.support_parent = Some(SUPPORT_FLOOR.to_string());
            b.objects.push(a);
            let i1 = b.objects.len() - 1;
            b.objects.push(o2);
            let i2 = b.objects.len() - 1;
            b.label(i1, ViolationKind::Collision, d);
            b.label(i2, ViolationKind::Collision, d);
        }
        Some(ViolationKind::Floating) => {
            let idx = generic[b.rng.gen_range(0..generic.len())];
            let g = log_uniform(&mut b.rng, 0.03, 0.3);
            b.objects[idx].pose.t.y += g;
            let h = b.objects[idx].bottom_height();
            b.label(idx, ViolationKind::Floating, h);
        }
        Some(ViolationKind::Unsupported) => {
            let d = desk_idx.expect("desk reserved");
            let lamp = b.place_lamp_on(d);
            let g = log_uniform(&mut b.rng, 0.03, 0.3);
            b.objects[lamp].pose.t.y += g;
            b.label(lamp, ViolationKind::Unsupported, g);
        }
        Some(ViolationKind::Unanchored) => {
            let idx = cabinet_idx.expect("cabinet reserved");
            b.label(idx, ViolationKind::Unanchored, cabinet_d);
        }
        Some(ViolationKind::Misoriented) => {
            let idx = generic[b.rng.gen_range(0..generic.len())];
            let theta = b.rng.gen_range(11f64.to_radians()..14f64.to_radians());
            let axis = if b.rng.gen_bool(0.5) {
                Vec3::new(1.0, 0.0, 0.0)
            } else {
                Vec3::new(0.0, 0.0, 1.0)
            };
            let tilt = Quat::from_axis_angle(axis, theta);
            b.objects[idx].pose.q = tilt.mul(b.objects[idx].pose.q);
            let g = log_uniform(&mut b.rng, 0.03, 0.1);
            let lift = g - b.objects[idx].bottom_height();
            b.objects[idx].pose.t.y += lift;
            let up = b.objects[idx].pose.q.rotate(WORLD_UP);
            let measured = up.dot(WORLD_UP).clamp(-1.0, 1.0).abs().acos();
            b.label(idx, ViolationKind::Misoriented, measured);
            let h = b.objects[idx].bottom_height();
            b.label(idx, ViolationKind::Floating, h);
        }
        Some(ViolationKind::MisScaled) => {
            let idx = generic[b.rng.gen_range(0..generic.len())];
            let mag = log_uniform(&mut b.rng, 0.45, 0.9);
            let f = if b.rng.gen_bool(0.5) {
                (mag / 3.0).exp()
            } else {
                (-mag / 3.0).exp()
            };
            let obj = &mut b.objects[idx];
            obj.pose.s = Vec3::splat(f);
            obj.pose.t.y = obj.extents.y * f * 0.5;
            b.label(idx, ViolationKind::MisScaled, mag);
        }
        Some(ViolationKind::StaticallyUnstable) => {
            let di = desk_idx.expect("desk reserved");
            let lamp = b.place_lamp_on(di);
            let d = log_uniform(&mut b.rng, 0.03, 0.12);
            let desk = b.objects[di].clone();
            let half_w = desk.pose.s.x * desk.extents.x * 0.5;
            let u = desk.pose.q.rotate(Vec3::new(1.0, 0.0, 0.0));
            let lamp_y = b.objects[lamp].pose.t.y;
            b.objects[lamp].pose.t = Vec3::new(
                desk.pose.t.x + u.x * (half_w + d),
                lamp_y,
                desk.pose.t.z + u.z * (half_w + d),
            );
            b.label(lamp, ViolationKind::StaticallyUnstable, d);
            b.label(lamp, ViolationKind::Unsupported, d);
        }
        Some(ViolationKind::Blocking) => {
            // Wall-to-wall row of partitions; every gap is under the 0.6 m
            // traversable width (2 x 0.3 m inflation).
            let boundary = b.rng.gen_range(1..GRID) as f64;
            let z = -ROOM_HALF + CELL * boundary;
            let count = 4;
            let gap = 0.4;
            let len = (2.0 * ROOM_HALF - (count as f64 + 1.0) * gap) / count as f64;
            let prior = b.priors.get("partition").expect("partition prior").clone();
            for i in 0..count {
                let id = b.next_id("partition");
                let mut p = ObjectInstance::new(id, "partition", prior.ref_scale);
                p.pose.s = Vec3::new(len / prior.ref_scale.x, 1.0, 1.0);
                p.pose.t = Vec3::new(
                    -ROOM_HALF + gap + len * 0.5 + (len + gap) * i as f64,
                    prior.ref_scale.y * 0.5,
                    z,
                );
                p.support_parent = Some(SUPPORT_FLOOR.to_string());
                b.objects.push(p);
                let idx = b.objects.len() - 1;
                b.label(idx, ViolationKind::Blocking, 1.0);
            }
        }
    }

    let mut metadata = BTreeMap::new();
    metadata.insert("corpus_index".to_string(), index.to_string());
    metadata.insert(
        "injection".to_string(),
        match kind {
            None => "clean".to_string(),
            Some(k) => serde_json::to_value(k)
                .expect("kind serializes")
                .as_str()
                .expect("kind is a string")
                .to_string(),
        },
    );
    let scene = Scene {
        room: Room::rectangular(ROOM_HALF, ROOM_HALF, WALL_HEIGHT),
        objects: b.objects,
        metadata,
    };
    scene.validate_with_priors(priors)?;
    Ok((scene, b.labels))
}

pub fn generate_corpus(
    config: &CorpusConfig,
    priors: &PriorRegistry,
) -> Result<Vec<(Scene, Vec<ViolationLabel>)>> {
    (0..config.num_scenes)
        .map(|i| generate_scene(config, priors, i))
        .collect()
}

/// Write `scene_NNNN.json` + `scene_NNNN.labels.json` files into `dir`.
pub fn write_corpus(
    config: &CorpusConfig,
    priors: &PriorRegistry,
    dir: impl AsRef<Path>,
) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|source| SceneError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    for i in 0..config.num_scenes {
        let (scene, labels) = generate_scene(config, priors, i)?;
        save_scene(&scene, dir.join(format!("scene_{i:04}.json")))?;
        let path = dir.join(format!("scene_{i:04}.labels.json"));
        std::fs::write(&path, to_canonical_json(&labels)).map_err(|source| SceneError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{evaluate, Constraint, EvaluatorConfig};
    use crate::scene::scene_to_json;

    #[test]
    fn generation_is_deterministic() {
        let priors = PriorRegistry::default_indoor();
        let config = CorpusConfig::default();
        for i in [0, 3, 11] {
            let (a, la) = generate_scene(&config, &priors, i).unwrap();
            let (b, lb) = generate_scene(&config, &priors, i).unwrap();
            assert_eq!(scene_to_json(&a), scene_to_json(&b));
            assert_eq!(la, lb);
        }
    }

    #[test]
    fn scenes_validate_and_all_kinds_appear() {
        let priors = PriorRegistry::default_indoor();
        let config = CorpusConfig {
            num_scenes: 60,
            ..CorpusConfig::default()
        };
        let corpus = generate_corpus(&config, &priors).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for (scene, labels) in &corpus {
            scene.validate_with_priors(&priors).unwrap();
            for l in labels {
                seen.insert(l.kind);
            }
        }
        assert_eq!(seen.len(), 8, "kinds seen: {seen:?}");
    }

    #[test]
    fn clean_scene_is_violation_free() {
        let priors = PriorRegistry::default_indoor();
        let config = CorpusConfig {
            mix: MixWeights {
                clean: 1.0,
                collision: 0.0,
                floating: 0.0,
                unsupported: 0.0,
                unanchored: 0.0,
                misoriented: 0.0,
                mis_scaled: 0.0,
                statically_unstable: 0.0,
                blocking: 0.0,
            },
            ..CorpusConfig::default()
        };
        let mut eval_config = EvaluatorConfig::default();
        eval_config.skip_dynamic = true;
        for i in 0..5 {
            let (scene, labels) = generate_scene(&config, &priors, i).unwrap();
            assert!(labels.is_empty());
            let report = evaluate(&scene, &priors, &eval_config);
            assert_eq!(report.overall, 100.0, "scene {i}: {:?}", report.rates);
        }
    }

    #[test]
    fn floating_label_matches_measured_gap() {
        let priors = PriorRegistry::default_indoor();
        let config = CorpusConfig {
            mix: MixWeights {
                clean: 0.0,
                collision: 0.0,
                floating: 1.0,
                unsupported: 0.0,
                unanchored: 0.0,
                misoriented: 0.0,
                mis_scaled: 0.0,
                statically_unstable: 0.0,
                blocking: 0.0,
            },
            ..CorpusConfig::default()
        };
        let mut eval_config = EvaluatorConfig::default();
        eval_config.skip_dynamic = true;
        eval_config.skip_reach = true;
        for i in 0..5 {
            let (scene, labels) = generate_scene(&config, &priors, i).unwrap();
            assert_eq!(labels.len(), 1);
            let report = evaluate(&scene, &priors, &eval_config);
            let flagged = report.flagged(Constraint::Ground);
            assert!(flagged.contains(labels[0].object_id.as_str()));
            let mag = report
                .objects
                .iter()
                .find(|o| o.id == labels[0].object_id)
                .unwrap()
                .violations
                .iter()
                .find(|v| v.constraint == Constraint::Ground)
                .unwrap()
                .magnitude;
            assert!((mag - labels[0].magnitude).abs() < 1e-9);
        }
    }

    #[test]
    fn blocking_scene_is_unreachable() {
        let priors = PriorRegistry::default_indoor();
        let config = CorpusConfig {
            mix: MixWeights {
                clean: 0.0,
                collision: 0.0,
                floating: 0.0,
                unsupported: 0.0,
                unanchored: 0.0,
                misoriented: 0.0,
                mis_scaled: 0.0,
                statically_unstable: 0.0,
                blocking: 1.0,
            },
            ..CorpusConfig::default()
        };
        let mut eval_config = EvaluatorConfig::default();
        eval_config.skip_dynamic = true;
        let (scene, labels) = generate_scene(&config, &priors, 0).unwrap();
        assert!(labels.iter().all(|l| l.kind == ViolationKind::Blocking));
        let report = evaluate(&scene, &priors, &eval_config);
        assert!(report.phi[Constraint::Reach as usize] > 0.0);
        // No collisions between the partitions and the cell objects.
        assert!(report.collisions.is_empty(), "{:?}", report.collisions);
    }

    #[test]
    fn infeasible_cell_range_rejected() {
        let priors = PriorRegistry::default_indoor();
        let config = CorpusConfig {
            cells_min: 2,
            cells_max: 40,
            ..CorpusConfig::default()
        };
        assert!(generate_scene(&config, &priors, 0).is_err());
    }
}
