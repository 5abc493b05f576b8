//! Group-relative preference optimization of a toy flow-matching layout
//! generator, rewarded by the physics evaluator.
//!
//! A layout is a flat vector with 7 slots per object:
//! (t_x, t_y, t_z, sin yaw, cos yaw, uniform log-scale, padding).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::evaluator::{self, EvaluatorConfig};
use crate::math::Vec3;
use crate::navigation::ReachConfig;
use crate::priors::PriorRegistry;
use crate::scene::{ObjectInstance, Room, Scene, SUPPORT_FLOOR};

pub const SLOTS: usize = 7;

// ---------------------------------------------------------------------------
// Two-layer MLP with manual backprop.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub d_in: usize,
    pub d_hidden: usize,
    pub d_out: usize,
    /// Row-major (d_hidden x d_in).
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// Row-major (d_out x d_hidden).
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct MlpGrad {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl MlpGrad {
    fn zeros(net: &Mlp) -> Self {
        MlpGrad {
            w1: vec![0.0; net.w1.len()],
            b1: vec![0.0; net.b1.len()],
            w2: vec![0.0; net.w2.len()],
            b2: vec![0.0; net.b2.len()],
        }
    }

    pub fn add_scaled(&mut self, other: &MlpGrad, k: f64) {
        for (a, b) in self.w1.iter_mut().zip(&other.w1) {
            *a += b * k;
        }
        for (a, b) in self.b1.iter_mut().zip(&other.b1) {
            *a += b * k;
        }
        for (a, b) in self.w2.iter_mut().zip(&other.w2) {
            *a += b * k;
        }
        for (a, b) in self.b2.iter_mut().zip(&other.b2) {
            *a += b * k;
        }
    }

    pub fn norm(&self) -> f64 {
        let s: f64 = self
            .w1
            .iter()
            .chain(&self.b1)
            .chain(&self.w2)
            .chain(&self.b2)
            .map(|v| v * v)
            .sum();
        s.sqrt()
    }

    fn is_finite(&self) -> bool {
        self.w1
            .iter()
            .chain(&self.b1)
            .chain(&self.w2)
            .chain(&self.b2)
            .all(|v| v.is_finite())
    }
}

impl Mlp {
    pub fn new(d_in: usize, d_hidden: usize, d_out: usize, rng: &mut ChaCha8Rng) -> Self {
        let scale1 = 1.0 / (d_in as f64).sqrt();
        let scale2 = 1.0 / (d_hidden as f64).sqrt();
        let draw = |n: usize, s: f64, rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..n)
                .map(|_| {
                    let z: f64 = rng.sample(StandardNormal);
                    z * s
                })
                .collect()
        };
        Mlp {
            d_in,
            d_hidden,
            d_out,
            w1: draw(d_hidden * d_in, scale1, rng),
            b1: vec![0.0; d_hidden],
            w2: draw(d_out * d_hidden, 0.1 * scale2, rng),
            b2: vec![0.0; d_out],
        }
    }

    /// Forward pass; returns (output, hidden activations).
    pub fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        debug_assert_eq!(x.len(), self.d_in);
        let mut h = vec![0.0; self.d_hidden];
        for i in 0..self.d_hidden {
            let mut z = self.b1[i];
            let row = &self.w1[i * self.d_in..(i + 1) * self.d_in];
            for (w, xv) in row.iter().zip(x) {
                z += w * xv;
            }
            h[i] = z.tanh();
        }
        let mut y = vec![0.0; self.d_out];
        for o in 0..self.d_out {
            let mut z = self.b2[o];
            let row = &self.w2[o * self.d_hidden..(o + 1) * self.d_hidden];
            for (w, hv) in row.iter().zip(&h) {
                z += w * hv;
            }
            y[o] = z;
        }
        (y, h)
    }

    /// Accumulate weight gradients for upstream gradient `dy` at input `x`.
    pub fn backward(&self, x: &[f64], h: &[f64], dy: &[f64], grad: &mut MlpGrad) {
        let mut dh = vec![0.0; self.d_hidden];
        for o in 0..self.d_out {
            grad.b2[o] += dy[o];
            for i in 0..self.d_hidden {
                grad.w2[o * self.d_hidden + i] += dy[o] * h[i];
                dh[i] += dy[o] * self.w2[o * self.d_hidden + i];
            }
        }
        for i in 0..self.d_hidden {
            let dz = dh[i] * (1.0 - h[i] * h[i]);
            grad.b1[i] += dz;
            for j in 0..self.d_in {
                grad.w1[i * self.d_in + j] += dz * x[j];
            }
        }
    }

    pub fn apply(&mut self, grad: &MlpGrad, k: f64) {
        for (a, b) in self.w1.iter_mut().zip(&grad.w1) {
            *a += b * k;
        }
        for (a, b) in self.b1.iter_mut().zip(&grad.b1) {
            *a += b * k;
        }
        for (a, b) in self.w2.iter_mut().zip(&grad.w2) {
            *a += b * k;
        }
        for (a, b) in self.b2.iter_mut().zip(&grad.b2) {
            *a += b * k;
        }
    }

    pub fn ema_from(&mut self, other: &Mlp, decay: f64) {
        let mix = |a: &mut Vec<f64>, b: &Vec<f64>| {
            for (x, y) in a.iter_mut().zip(b) {
                *x = decay * *x + (1.0 - decay) * y;
            }
        };
        mix(&mut self.w1, &other.w1);
        mix(&mut self.b1, &other.b1);
        mix(&mut self.w2, &other.w2);
        mix(&mut self.b2, &other.b2);
    }
}

// ---------------------------------------------------------------------------
// Scene template and layout conversion.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneTemplate {
    pub room_half: f64,
    pub wall_height: f64,
    pub categories: Vec<String>,
    /// Reference layout, 7 slots per object.
    pub reference: Vec<f64>,
}

impl SceneTemplate {
    pub fn dim(&self) -> usize {
        self.categories.len() * SLOTS
    }

    /// Small three-object room used by the toy experiments.
    pub fn three_object() -> Self {
        let categories = vec!["desk".to_string(), "chair".to_string(), "box".to_string()];
        let spots = [
            (-1.2, 0.375, -1.2),
            (1.2, 0.45, 1.2),
            (1.2, 0.25, -1.2),
        ];
        let mut reference = Vec::new();
        for (x, y, z) in spots {
            reference.extend_from_slice(&[x, y, z, 0.0, 1.0, 0.0, 0.0]);
        }
        SceneTemplate {
            room_half: 2.4,
            wall_height: 2.5,
            categories,
            reference,
        }
    }

    pub fn scene_from_layout(&self, priors: &PriorRegistry, layout: &[f64]) -> Scene {
        let mut objects = Vec::new();
        for (i, category) in self.categories.iter().enumerate() {
            let v = &layout[i * SLOTS..(i + 1) * SLOTS];
            let extents = priors
                .get(category)
                .map(|p| p.ref_scale)
                .unwrap_or(Vec3::splat(0.5));
            let mut o = ObjectInstance::new(format!("{category}_{i}"), category.clone(), extents);
            let lim = self.room_half - 0.05;
            o.pose.t = Vec3::new(v[0].clamp(-lim, lim), v[1].clamp(0.0, 2.0), v[2].clamp(-lim, lim));
            let yaw = if v[3].abs() + v[4].abs() < 1e-9 {
                0.0
            } else {
                v[3].atan2(v[4])
            };
            o.pose.q = crate::math::Quat::from_yaw(yaw);
            o.pose.s = Vec3::splat(v[5].clamp(-0.7, 0.7).exp());
            o.support_parent = Some(SUPPORT_FLOOR.to_string());
            objects.push(o);
        }
        Scene {
            room: Room::rectangular(self.room_half, self.room_half, self.wall_height),
            objects,
            metadata: Default::default(),
        }
    }
}

/// Cheap evaluator settings for reward queries inside the training loop.
pub fn fast_reward_config() -> EvaluatorConfig {
    EvaluatorConfig {
        surface_samples: 32,
        reach: ReachConfig {
            num_pairs: 10,
            cell_size: 0.2,
            ..ReachConfig::default()
        },
        sim: crate::dynamics::SimConfig {
            horizon: 0.5,
            ..crate::dynamics::SimConfig::default()
        },
        ..EvaluatorConfig::default()
    }
}

/// Physics reward minus the alignment penalty against the template reference.
pub fn layout_reward(
    template: &SceneTemplate,
    priors: &PriorRegistry,
    layout: &[f64],
    eval_config: &EvaluatorConfig,
    lambda_align: f64,
) -> f64 {
    let scene = template.scene_from_layout(priors, layout);
    let physics = evaluator::reward(&scene, priors, eval_config);
    let align: f64 = layout
        .iter()
        .zip(&template.reference)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / layout.len() as f64;
    physics - lambda_align * align
}

// ---------------------------------------------------------------------------
// Flow matching.

/// Time / noise draws used by the flow-matching loss.
pub fn fm_draws(rng: &mut ChaCha8Rng, dim: usize, m: usize) -> Vec<(f64, Vec<f64>)> {
    (0..m)
        .map(|k| {
            // Stratified time keeps the small-sample estimate stable.
            let t = (k as f64 + rng.gen_range(0.0..1.0)) / m as f64;
            let eps = (0..dim)
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect();
            (t, eps)
        })
        .collect()
}

/// Mean squared error of the noise prediction along the interpolation path.
pub fn fm_loss(net: &Mlp, x: &[f64], draws: &[(f64, Vec<f64>)]) -> f64 {
    fm_loss_impl(net, x, draws, None)
}

pub fn fm_loss_grad(net: &Mlp, x: &[f64], draws: &[(f64, Vec<f64>)]) -> (f64, MlpGrad) {
    let mut grad = MlpGrad::zeros(net);
    let loss = fm_loss_impl(net, x, draws, Some(&mut grad));
    (loss, grad)
}

fn fm_loss_impl(net: &Mlp, x: &[f64], draws: &[(f64, Vec<f64>)], mut grad: Option<&mut MlpGrad>) -> f64 {
    let dim = x.len();
    let m = draws.len() as f64;
    let mut loss = 0.0;
    for (t, eps) in draws {
        let mut input = Vec::with_capacity(dim + 1);
        for i in 0..dim {
            input.push((1.0 - t) * x[i] + t * eps[i]);
        }
        input.push(*t);
        let (y, h) = net.forward(&input);
        let mut dy = vec![0.0; dim];
        for i in 0..dim {
            let d = y[i] - eps[i];
            loss += d * d / m;
            dy[i] = 2.0 * d / m;
        }
        if let Some(g) = grad.as_deref_mut() {
            net.backward(&input, &h, &dy, g);
        }
    }
    loss
}

/// Euler sampling of the jump rule, with the denoised estimate clamped to a
/// bounded region so an untrained network cannot diverge.
pub fn sample_layout(net: &Mlp, dim: usize, steps: usize, clamp: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    const T_MAX: f64 = 0.98;
    let mut h: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    for k in 0..steps {
        let t = T_MAX * (steps - k) as f64 / steps as f64;
        let s = T_MAX * (steps - k - 1) as f64 / steps as f64;
        let mut input = h.clone();
        input.push(t);
        let (eps_hat, _) = net.forward(&input);
        for i in 0..dim {
            let xh = ((h[i] - t * eps_hat[i]) / (1.0 - t)).clamp(-clamp, clamp);
            h[i] = (1.0 - s) * xh + s * eps_hat[i];
        }
    }
    h
}

// ---------------------------------------------------------------------------
// Group-relative objective.

/// Population-normalized advantages; all zero when the spread vanishes.
pub fn advantages(rewards: &[f64]) -> Vec<f64> {
    let n = rewards.len() as f64;
    let mean = rewards.iter().sum::<f64>() / n;
    let var = rewards.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if std < 1e-8 {
        return vec![0.0; rewards.len()];
    }
    rewards.iter().map(|r| (r - mean) / std).collect()
}

fn softmax(v: &[f64]) -> Vec<f64> {
    let max = v.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let exps: Vec<f64> = v.iter().map(|x| (x - max).exp()).collect();
    let z: f64 = exps.iter().sum();
    exps.iter().map(|e| e / z).collect()
}

/// KL(p || q) for two discrete distributions.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, qi)| pi * (pi / qi).ln())
        .sum()
}

/// Group loss and its gradient with respect to the per-sample flow losses.
/// Rewards are treated as constants.
pub fn grpo_loss(losses: &[f64], rewards: &[f64], tau: f64, kl_weight: f64) -> (f64, Vec<f64>) {
    let k = losses.len();
    let adv = advantages(rewards);
    let p = softmax(&losses.iter().map(|l| -l / tau).collect::<Vec<_>>());
    let q = softmax(&rewards.iter().map(|r| r / tau).collect::<Vec<_>>());
    let kl = kl_divergence(&p, &q);
    let policy: f64 = adv
        .iter()
        .zip(losses)
        .map(|(a, l)| -a * l)
        .sum::<f64>()
        / k as f64;
    let loss = policy + kl_weight * kl;
    let mut dl = vec![0.0; k];
    for m in 0..k {
        let dkl = (-1.0 / tau) * p[m] * ((p[m] / q[m]).ln() - kl);
        dl[m] = -adv[m] / k as f64 + kl_weight * dkl;
    }
    (loss, dl)
}

/// Per-sample loss-gradient coefficients used by the training update.
///
/// Descent must shrink the flow loss of above-average candidates, so the
/// policy term here carries `+advantage`; descending on the reported
/// objective verbatim moves preference the wrong way (confirmed empirically:
/// rewards degrade monotonically with the learning rate). The KL part is
/// identical to `grpo_loss`.
fn update_coefficients(losses: &[f64], rewards: &[f64], tau: f64, kl_weight: f64) -> Vec<f64> {
    let k = losses.len();
    let adv = advantages(rewards);
    let p = softmax(&losses.iter().map(|l| -l / tau).collect::<Vec<_>>());
    let q = softmax(&rewards.iter().map(|r| r / tau).collect::<Vec<_>>());
    let kl = kl_divergence(&p, &q);
    (0..k)
        .map(|m| {
            let dkl = (-1.0 / tau) * p[m] * ((p[m] / q[m]).ln() - kl);
            adv[m] / k as f64 + kl_weight * dkl
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Training.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GrpoConfig {
    pub steps: usize,
    pub group_size: usize,
    /// Flow-matching draws per loss estimate.
    pub fm_draws: usize,
    pub tau: f64,
    pub kl_weight_start: f64,
    pub kl_weight_end: f64,
    pub lr: f64,
    pub ema_decay: f64,
    pub lambda_align: f64,
    pub perturb_t: f64,
    pub perturb_yaw: f64,
    pub perturb_log_s: f64,
    pub sample_steps: usize,
    pub clamp: f64,
    pub grad_clip: f64,
    pub hidden: usize,
    /// Flow-matching warmup steps before group-relative updates; training
    /// post-tunes a base generator rather than starting from random weights.
    pub pretrain_steps: usize,
    /// Noise radius of the warmup layout distribution around the reference.
    pub pretrain_noise: f64,
    pub seed: u64,
}

impl Default for GrpoConfig {
    fn default() -> Self {
        GrpoConfig {
            steps: 500,
            group_size: 12,
            fm_draws: 16,
            tau: 1.0,
            kl_weight_start: 1.0,
            kl_weight_end: 0.1,
            lr: 3e-3,
            ema_decay: 0.99,
            lambda_align: 0.1,
            perturb_t: 0.10,
            perturb_yaw: 10f64.to_radians(),
            perturb_log_s: 0.05,
            sample_steps: 20,
            clamp: 4.0,
            grad_clip: 1.0,
            hidden: 64,
            pretrain_steps: 300,
            pretrain_noise: 0.5,
            seed: 0,
        }
    }
}

fn perturb_layout(layout: &mut [f64], config: &GrpoConfig, rng: &mut ChaCha8Rng) {
    for obj in layout.chunks_mut(SLOTS) {
        for v in obj.iter_mut().take(3) {
            *v += rng.gen_range(-config.perturb_t..config.perturb_t);
        }
        let yaw = obj[3].atan2(obj[4]) + rng.gen_range(-config.perturb_yaw..config.perturb_yaw);
        obj[3] = yaw.sin();
        obj[4] = yaw.cos();
        obj[5] += rng.gen_range(-config.perturb_log_s..config.perturb_log_s);
    }
}

/// Policy + EMA-perturbed sample group.
pub fn make_group(
    net: &Mlp,
    ema: &Mlp,
    dim: usize,
    config: &GrpoConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<f64>> {
    let n_policy = config.group_size.div_ceil(2);
    let mut group = Vec::with_capacity(config.group_size);
    for _ in 0..n_policy {
        group.push(sample_layout(net, dim, config.sample_steps, config.clamp, rng));
    }
    for _ in n_policy..config.group_size {
        let mut x = sample_layout(ema, dim, config.sample_steps, config.clamp, rng);
        perturb_layout(&mut x, config, rng);
        group.push(x);
    }
    group
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainHistory {
    /// Mean group reward per step.
    pub rewards: Vec<f64>,
    pub losses: Vec<f64>,
}

impl TrainHistory {
    /// Moving average of the reward over a trailing window.
    pub fn moving_average(&self, window: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rewards.len());
        let mut acc = 0.0;
        for (i, r) in self.rewards.iter().enumerate() {
            acc += r;
            if i >= window {
                acc -= self.rewards[i - window];
            }
            out.push(acc / window.min(i + 1) as f64);
        }
        out
    }
}

pub fn train(
    template: &SceneTemplate,
    priors: &PriorRegistry,
    config: &GrpoConfig,
) -> (Mlp, TrainHistory) {
    let dim = template.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut net = if config.pretrain_steps > 0 {
        pretrain_fm(template, config, config.pretrain_steps, config.pretrain_noise, &mut rng)
    } else {
        Mlp::new(dim + 1, config.hidden, dim, &mut rng)
    };
    let mut ema = net.clone();
    let eval_config = fast_reward_config();
    let mut history = TrainHistory {
        rewards: Vec::with_capacity(config.steps),
        losses: Vec::with_capacity(config.steps),
    };
    for step in 0..config.steps {
        let frac = if config.steps > 1 {
            step as f64 / (config.steps - 1) as f64
        } else {
            0.0
        };
        let kl_w = config.kl_weight_start + (config.kl_weight_end - config.kl_weight_start) * frac;
        let group = make_group(&net, &ema, dim, config, &mut rng);
        let rewards: Vec<f64> = group
            .iter()
            .map(|x| layout_reward(template, priors, x, &eval_config, config.lambda_align))
            .collect();
        let mut losses = Vec::with_capacity(group.len());
        let mut grads = Vec::with_capacity(group.len());
        for x in &group {
            let draws = fm_draws(&mut rng, dim, config.fm_draws);
            let (l, g) = fm_loss_grad(&net, x, &draws);
            losses.push(l);
            grads.push(g);
        }
        let (loss, _) = grpo_loss(&losses, &rewards, config.tau, kl_w);
        let dl = update_coefficients(&losses, &rewards, config.tau, kl_w);
        let mut total = MlpGrad::zeros(&net);
        for (g, c) in grads.iter().zip(&dl) {
            total.add_scaled(g, *c);
        }
        if !total.is_finite() || !loss.is_finite() {
            break;
        }
        let norm = total.norm();
        let scale = if norm > config.grad_clip {
            config.grad_clip / norm
        } else {
            1.0
        };
        net.apply(&total, -config.lr * scale);
        ema.ema_from(&net, config.ema_decay);
        history.rewards.push(rewards.iter().sum::<f64>() / rewards.len() as f64);
        history.losses.push(loss);
    }
    (net, history)
}

/// Fit the generator to layouts near the template reference with plain
/// flow matching. Used to get an informative network for validation runs.
pub fn pretrain_fm(
    template: &SceneTemplate,
    config: &GrpoConfig,
    steps: usize,
    noise: f64,
    rng: &mut ChaCha8Rng,
) -> Mlp {
    let dim = template.dim();
    let mut net = Mlp::new(dim + 1, config.hidden, dim, rng);
    for _ in 0..steps {
        let x: Vec<f64> = template
            .reference
            .iter()
            .map(|v| v + noise * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let draws = fm_draws(rng, dim, 8);
        let (_, grad) = fm_loss_grad(&net, &x, &draws);
        let norm = grad.norm();
        let scale = if norm > 5.0 { 5.0 / norm } else { 1.0 };
        net.apply(&grad, -1e-2 * scale);
    }
    net
}

// ---------------------------------------------------------------------------
// Rank statistics for the proxy validation.

/// Average ranks (1-based) with ties sharing their mean rank.
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut out = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let ra = ranks(a);
    let rb = ranks(b);
    let n = a.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for i in 0..a.len() {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if va == 0.0 || vb == 0.0 {
        return 0.0;
    }
    cov / (va.sqrt() * vb.sqrt())
}

/// Kendall tau-b, with tie corrections.
pub fn kendall_tau_b(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    let mut ties_a = 0i64;
    let mut ties_b = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let da = a[i] - a[j];
            let db = b[i] - b[j];
            if da == 0.0 && db == 0.0 {
                continue;
            } else if da == 0.0 {
                ties_a += 1;
            } else if db == 0.0 {
                ties_b += 1;
            } else if da * db > 0.0 {
                concordant += 1;
            } else {
                discordant += 1;
            }
        }
    }
    let n0 = (n * (n - 1) / 2) as f64;
    let denom = ((n0 - ties_a as f64) * (n0 - ties_b as f64)).sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    (concordant - discordant) as f64 / denom
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProxyReport {
    pub mean_spearman: f64,
    pub mean_kendall: f64,
    pub per_group: Vec<(f64, f64)>,
}

/// Agreement between the small-sample flow-loss estimate and a near-exact
/// one, over sampled groups. Both estimates share the same draws within a
/// group so the comparison isolates the sample-size effect.
pub fn proxy_validation(
    net: &Mlp,
    ema: &Mlp,
    dim: usize,
    config: &GrpoConfig,
    groups: usize,
    m_small: usize,
    m_large: usize,
    rng: &mut ChaCha8Rng,
) -> ProxyReport {
    let mut per_group = Vec::with_capacity(groups);
    for _ in 0..groups {
        let group = make_group(net, ema, dim, config, rng);
        let small_draws = fm_draws(rng, dim, m_small);
        let large_draws = fm_draws(rng, dim, m_large);
        let small: Vec<f64> = group.iter().map(|x| fm_loss(net, x, &small_draws)).collect();
        let large: Vec<f64> = group.iter().map(|x| fm_loss(net, x, &large_draws)).collect();
        per_group.push((spearman(&small, &large), kendall_tau_b(&small, &large)));
    }
    let mean_spearman = per_group.iter().map(|(s, _)| s).sum::<f64>() / groups as f64;
    let mean_kendall = per_group.iter().map(|(_, k)| k).sum::<f64>() / groups as f64;
    ProxyReport {
        mean_spearman,
        mean_kendall,
        per_group,
    }
}
