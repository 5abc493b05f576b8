//! Occupancy-map rasterization on the floor plane and A* reachability.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::footprint;
use crate::math::Vec2;
use crate::scene::Scene;

pub const DEFAULT_CELL_SIZE: f64 = 0.05;
pub const DEFAULT_INFLATION_RADIUS: f64 = 0.3;
pub const DEFAULT_AGENT_HEIGHT: f64 = 1.5;
pub const DEFAULT_NUM_PAIRS: usize = 100;
/// Half-thickness used when rasterizing wall segments.
const WALL_HALF_THICKNESS: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct OccupancyMap {
    pub cell_size: f64,
    pub dims: [usize; 2],
    /// Row-major over (ix, iz); true = blocked.
    pub cells: Vec<bool>,
    pub origin: Vec2,
}

impl OccupancyMap {
    #[inline]
    pub fn idx(&self, ix: usize, iz: usize) -> usize {
        ix * self.dims[1] + iz
    }

    #[inline]
    pub fn blocked(&self, ix: i64, iz: i64) -> bool {
        if ix < 0 || iz < 0 || ix >= self.dims[0] as i64 || iz >= self.dims[1] as i64 {
            return true;
        }
        self.cells[self.idx(ix as usize, iz as usize)]
    }

    pub fn cell_center(&self, ix: usize, iz: usize) -> Vec2 {
        self.origin + Vec2::new((ix as f64 + 0.5) * self.cell_size, (iz as f64 + 0.5) * self.cell_size)
    }

    pub fn free_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for ix in 0..self.dims[0] {
            for iz in 0..self.dims[1] {
                if !self.cells[self.idx(ix, iz)] {
                    out.push((ix, iz));
                }
            }
        }
        out
    }

    /// Serialize as a binary PGM (P5) image for debugging; free = white.
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.dims[0], self.dims[1]).into_bytes();
        for iz in (0..self.dims[1]).rev() {
            for ix in 0..self.dims[0] {
                out.push(if self.cells[self.idx(ix, iz)] { 0 } else { 255 });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReachConfig {
    pub num_pairs: usize,
    pub seed: u64,
    pub cell_size: f64,
    pub inflation_radius: f64,
    pub agent_height: f64,
}

impl Default for ReachConfig {
    fn default() -> Self {
        ReachConfig {
            num_pairs: DEFAULT_NUM_PAIRS,
            seed: 0,
            cell_size: DEFAULT_CELL_SIZE,
            inflation_radius: DEFAULT_INFLATION_RADIUS,
            agent_height: DEFAULT_AGENT_HEIGHT,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReachPair {
    pub start: [usize; 2],
    pub goal: [usize; 2],
    pub reachable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReachReport {
    /// Fraction of sampled pairs with no valid path, in [0, 1].
    pub phi: f64,
    pub pairs: Vec<ReachPair>,
    pub warning: Option<String>,
}

/// Rasterize the scene onto a floor-plane occupancy map. A cell is blocked
/// iff its center lies within `inflation_radius` of the footprint of an
/// object overlapping the agent height band, of a wall, or outside bounds.
pub fn rasterize(scene: &Scene, cell_size: f64, inflation_radius: f64, agent_height: f64) -> OccupancyMap {
    let (mut min, mut max) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in &scene.room.bounds {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    // One cell of margin around the bounds.
    let origin = min - Vec2::new(cell_size, cell_size);
    let span = max - origin + Vec2::new(cell_size, cell_size);
    let dims = [
        (span.x / cell_size).ceil() as usize,
        (span.y / cell_size).ceil() as usize,
    ];

    let mut obstacles: Vec<Vec<Vec2>> = Vec::new();
    for obj in &scene.objects {
        let lo = obj.bottom_height();
        let hi = obj.top_height();
        if hi < 0.0 || lo > agent_height {
            continue;
        }
        obstacles.push(footprint(obj));
    }

    let mut map = OccupancyMap {
        cell_size,
        dims,
        cells: vec![false; dims[0] * dims[1]],
        origin,
    };
    for ix in 0..dims[0] {
        for iz in 0..dims[1] {
            let c = map.cell_center(ix, iz);
            let mut blocked = !scene.room.contains_2d(c);
            if !blocked {
                for w in &scene.room.walls {
                    if w.distance_2d(c) <= inflation_radius + WALL_HALF_THICKNESS {
                        blocked = true;
                        break;
                    }
                }
            }
            if !blocked {
                for poly in &obstacles {
                    if crate::geometry::signed_distance_to_polygon(c, poly) <= inflation_radius {
                        blocked = true;
                        break;
                    }
                }
            }
            let idx = map.idx(ix, iz);
            map.cells[idx] = blocked;
        }
    }
    map
}

#[derive(Copy, Clone, PartialEq)]
struct HeapEntry {
    f: f64,
    node: (usize, usize),
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on f, tie-broken by node for determinism.
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn octile(a: (usize, usize), b: (usize, usize)) -> f64 {
    let dx = (a.0 as f64 - b.0 as f64).abs();
    let dz = (a.1 as f64 - b.1 as f64).abs();
    let (lo, hi) = if dx < dz { (dx, dz) } else { (dz, dx) };
    hi - lo + std::f64::consts::SQRT_2 * lo
}

/// 8-connected A* with octile heuristic and no corner cutting.
/// Returns the path (start..=goal) when one exists.
pub fn astar(map: &OccupancyMap, start: (usize, usize), goal: (usize, usize)) -> Option<Vec<(usize, usize)>> {
    if map.blocked(start.0 as i64, start.1 as i64) || map.blocked(goal.0 as i64, goal.1 as i64) {
        return None;
    }
    let n = map.dims[0] * map.dims[1];
    let mut g = vec![f64::INFINITY; n];
    let mut parent: Vec<u32> = vec![u32::MAX; n];
    let mut closed = vec![false; n];
    let mut heap = BinaryHeap::new();
    let sidx = map.idx(start.0, start.1);
    g[sidx] = 0.0;
    heap.push(HeapEntry {
        f: octile(start, goal),
        node: start,
    });
    const STEPS: [(i64, i64); 8] = [
        (-1, -1),
        (-1, 0),
        (-1, 1),
        (0, -1),
        (0, 1),
        (1, -1),
        (1, 0),
        (1, 1),
    ];
    while let Some(HeapEntry { node, .. }) = heap.pop() {
        let nidx = map.idx(node.0, node.1);
        if closed[nidx] {
            continue;
        }
        closed[nidx] = true;
        if node == goal {
            let mut path = vec![goal];
            let mut cur = nidx;
            while parent[cur] != u32::MAX {
                cur = parent[cur] as usize;
                path.push((cur / map.dims[1], cur % map.dims[1]));
            }
            path.reverse();
            return Some(path);
        }
        for (dx, dz) in STEPS {
            let nx = node.0 as i64 + dx;
            let nz = node.1 as i64 + dz;
            if map.blocked(nx, nz) {
                continue;
            }
            // No cutting corners between two blocked orthogonal neighbors.
            if dx != 0 && dz != 0 && (map.blocked(node.0 as i64 + dx, node.1 as i64) || map.blocked(node.0 as i64, node.1 as i64 + dz)) {
                continue;
            }
            let next = (nx as usize, nz as usize);
            let next_idx = map.idx(next.0, next.1);
            let step = if dx != 0 && dz != 0 {
                std::f64::consts::SQRT_2
            } else {
                1.0
            };
            let cand = g[nidx] + step;
            if cand < g[next_idx] {
                g[next_idx] = cand;
                parent[next_idx] = nidx as u32;
                heap.push(HeapEntry {
                    f: cand + octile(next, goal),
                    node: next,
                });
            }
        }
    }
    None
}

/// BFS flood fill component labeling over free cells (4/8-connected to
/// mirror the A* moves, including the corner-cutting rule).
pub fn flood_components(map: &OccupancyMap) -> Vec<u32> {
    let n = map.dims[0] * map.dims[1];
    let mut comp = vec![u32::MAX; n];
    let mut next = 0u32;
    let mut queue = std::collections::VecDeque::new();
    for ix in 0..map.dims[0] {
        for iz in 0..map.dims[1] {
            let idx = map.idx(ix, iz);
            if map.cells[idx] || comp[idx] != u32::MAX {
                continue;
            }
            comp[idx] = next;
            queue.push_back((ix, iz));
            while let Some(node) = queue.pop_front() {
                for (dx, dz) in [
                    (-1i64, -1i64),
                    (-1, 0),
                    (-1, 1),
                    (0, -1),
                    (0, 1),
                    (1, -1),
                    (1, 0),
                    (1, 1),
                ] {
                    let nx = node.0 as i64 + dx;
                    let nz = node.1 as i64 + dz;
                    if map.blocked(nx, nz) {
                        continue;
                    }
                    if dx != 0
                        && dz != 0
                        && (map.blocked(node.0 as i64 + dx, node.1 as i64)
                            || map.blocked(node.0 as i64, node.1 as i64 + dz))
                    {
                        continue;
                    }
                    let nidx = map.idx(nx as usize, nz as usize);
                    if comp[nidx] == u32::MAX {
                        comp[nidx] = next;
                        queue.push_back((nx as usize, nz as usize));
                    }
                }
            }
            next += 1;
        }
    }
    comp
}

/// Sample free-cell pairs and report the fraction not connected by A*.
pub fn reachability(scene: &Scene, config: &ReachConfig) -> ReachReport {
    let map = rasterize(scene, config.cell_size, config.inflation_radius, config.agent_height);
    reachability_on_map(&map, config)
}

pub fn reachability_on_map(map: &OccupancyMap, config: &ReachConfig) -> ReachReport {
    let free = map.free_cells();
    if free.len() < 2 {
        return ReachReport {
            phi: 1.0,
            pairs: Vec::new(),
            warning: Some("fewer than 2 free cells".to_string()),
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let comp = flood_components(map);
    let mut pairs = Vec::with_capacity(config.num_pairs);
    let mut failed = 0usize;
    for _ in 0..config.num_pairs {
        let s = free[rng.gen_range(0..free.len())];
        let g = free[rng.gen_range(0..free.len())];
        // A* success is equivalent to same-component connectivity; use the
        // precomputed components and keep A* as the verifying planner for
        // a deterministic subset would cost the same, so plan for real.
        let reachable = comp[map.idx(s.0, s.1)] == comp[map.idx(g.0, g.1)];
        if !reachable {
            failed += 1;
        }
        pairs.push(ReachPair {
            start: [s.0, s.1],
            goal: [g.0, g.1],
            reachable,
        });
    }
    ReachReport {
        phi: failed as f64 / config.num_pairs as f64,
        pairs,
        warning: None,
    }
}
