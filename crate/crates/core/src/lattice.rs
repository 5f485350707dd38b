//! Two-lane lattice gas with random traffic lights.
//!
//! Nodes are numbered `0..N` and segment `s` joins nodes `s` and `s + 1`.
//! `right[s]` is the particle on segment `s` heading for node `s + 1`,
//! `left[s]` the one heading for node `s`. Species: cream = 1, coffee = 0.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::compression::count_runs;
use crate::curve::ComplexityCurve;
use crate::error::{Error, Result};

pub const CREAM: u8 = 1;
pub const COFFEE: u8 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub n_nodes: usize,
    pub total_steps: u64,
    /// Segments left of this node (1-based) start as cream.
    pub split_node: usize,
    pub seed: u64,
    pub replicas: usize,
}

impl SimConfig {
    pub fn new(
        n_nodes: usize,
        total_steps: u64,
        split_node: usize,
        seed: u64,
        replicas: usize,
    ) -> Result<Self> {
        let cfg = SimConfig {
            n_nodes,
            total_steps,
            split_node,
            seed,
            replicas,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 2 {
            return Err(Error::invalid(format!(
                "need at least 2 nodes, got {}",
                self.n_nodes
            )));
        }
        if !(1..=self.n_nodes).contains(&self.split_node) {
            return Err(Error::invalid(format!(
                "split node {} is outside 1..={}",
                self.split_node, self.n_nodes
            )));
        }
        if self.replicas == 0 {
            return Err(Error::invalid("need at least one replica"));
        }
        Ok(())
    }

    pub fn segments(&self) -> usize {
        self.n_nodes - 1
    }

    /// Seed of replica `i`.
    pub fn replica_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_add(i as u64)
    }

    /// Time in diffusion units for `[-1, 1]` with unit diffusivity:
    /// step length `2/S`, so `t = 2·steps/S²`.
    pub fn diffusion_time(&self, steps: u64) -> f64 {
        let s = self.segments() as f64;
        2.0 * steps as f64 / (s * s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonState {
    pub right: Vec<u8>,
    pub left: Vec<u8>,
    pub time: u64,
}

pub fn init_state(cfg: &SimConfig) -> AutomatonState {
    let cream = cfg.split_node - 1;
    let lane: Vec<u8> = (0..cfg.segments())
        .map(|s| if s < cream { CREAM } else { COFFEE })
        .collect();
    AutomatonState {
        right: lane.clone(),
        left: lane,
        time: 0,
    }
}

impl AutomatonState {
    pub fn segments(&self) -> usize {
        self.right.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.right.len() + 1
    }

    pub fn cream_count(&self) -> usize {
        self.right
            .iter()
            .chain(&self.left)
            .filter(|&&p| p == CREAM)
            .count()
    }

    /// Mean species of the two particles on each segment.
    pub fn color_profile(&self) -> Vec<f64> {
        self.right
            .iter()
            .zip(&self.left)
            .map(|(&r, &l)| 0.5 * (r + l) as f64)
            .collect()
    }

    /// Share of the cream that sits on segments left of `split_node`.
    pub fn fraction_top(&self, split_node: usize) -> Result<f64> {
        let total = self.cream_count();
        if total == 0 {
            return Err(Error::Degenerate(
                "no cream particles; the fraction is undefined".into(),
            ));
        }
        let top = split_node.saturating_sub(1).min(self.segments());
        let above = self.right[..top]
            .iter()
            .chain(&self.left[..top])
            .filter(|&&p| p == CREAM)
            .count();
        Ok(above as f64 / total as f64)
    }

    /// One synchronous update into `out`. `green(k)` is the light at interior
    /// node `k` (`1..=S-1`).
    pub fn step_with_lights(&self, green: impl Fn(usize) -> bool, out: &mut AutomatonState) {
        let s = self.segments();
        out.right.resize(s, COFFEE);
        out.left.resize(s, COFFEE);
        out.right[0] = self.left[0];
        out.left[s - 1] = self.right[s - 1];
        for k in 1..s {
            let from_left = self.right[k - 1];
            let from_right = self.left[k];
            if from_left == from_right || green(k) {
                out.right[k] = from_left;
                out.left[k - 1] = from_right;
            } else {
                out.right[k] = from_right;
                out.left[k - 1] = from_left;
            }
        }
        out.time = self.time + 1;
    }

    /// One update with lights drawn from `rng`, one bit per interior node
    /// whether or not the node needs it.
    pub fn step_into<R: RngCore>(
        &self,
        rng: &mut R,
        lights: &mut Vec<u64>,
        out: &mut AutomatonState,
    ) {
        let interior = self.segments() - 1;
        lights.clear();
        lights.extend((0..interior.div_ceil(64)).map(|_| rng.next_u64()));
        let bits: &[u64] = lights;
        self.step_with_lights(|k| (bits[(k - 1) / 64] >> ((k - 1) % 64)) & 1 == 1, out);
    }
}

pub fn step<R: RngCore>(state: &AutomatonState, rng: &mut R) -> AutomatonState {
    let mut out = state.clone();
    state.step_into(rng, &mut Vec::new(), &mut out);
    out
}

/// Group averages of a profile and their bin labels `1..=B`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseProfile {
    pub group_means: Vec<f64>,
    pub bin_indices: Vec<u32>,
    pub groups: usize,
    pub bins: u32,
}

/// Label of a value in `[0, 1]` split into `bins` bins: `ceil(v·B)` clamped
/// to `1..=B`, so 0 lands in bin 1, 1 in bin `B` and 1/2 in bin `B/2`.
pub fn bin_index(v: f64, bins: u32) -> u32 {
    ((v * bins as f64).ceil() as i64).clamp(1, bins as i64) as u32
}

pub fn coarse_grain(profile: &[f64], groups: usize, bins: u32) -> Result<CoarseProfile> {
    if groups == 0 || bins == 0 {
        return Err(Error::invalid("groups and bins must be positive"));
    }
    if !profile.len().is_multiple_of(groups) {
        return Err(Error::invalid(format!(
            "{} segments do not split into {groups} equal groups",
            profile.len()
        )));
    }
    let width = profile.len() / groups;
    let group_means: Vec<f64> = profile
        .chunks(width)
        .map(|c| c.iter().sum::<f64>() / width as f64)
        .collect();
    let bin_indices = group_means.iter().map(|&m| bin_index(m, bins)).collect();
    Ok(CoarseProfile {
        group_means,
        bin_indices,
        groups,
        bins,
    })
}

/// Element-wise mean, summed in slice order.
pub fn average_profiles(profiles: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = profiles
        .first()
        .ok_or_else(|| Error::invalid("no profiles to average"))?;
    let mut acc = vec![0.0; first.len()];
    for p in profiles {
        if p.len() != acc.len() {
            return Err(Error::invalid("profiles differ in length"));
        }
        for (a, v) in acc.iter_mut().zip(p) {
            *a += v;
        }
    }
    let n = profiles.len() as f64;
    Ok(acc.into_iter().map(|a| a / n).collect())
}

/// `N_RLE` of the bin labels.
pub fn apparent_complexity(cp: &CoarseProfile) -> usize {
    count_runs(&cp.bin_indices)
}

/// One replica's color profiles and top fractions at the sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicaTrace {
    pub profiles: Vec<Vec<f64>>,
    pub fraction_top: Vec<f64>,
}

fn check_sample_times(cfg: &SimConfig, times: &[u64]) -> Result<()> {
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("sample times must be strictly increasing"));
    }
    if let Some(&t) = times.iter().find(|&&t| t > cfg.total_steps) {
        return Err(Error::invalid(format!(
            "sample time {t} exceeds the run length {}",
            cfg.total_steps
        )));
    }
    Ok(())
}

pub fn simulate_replica(
    cfg: &SimConfig,
    replica: usize,
    sample_times: &[u64],
) -> Result<ReplicaTrace> {
    cfg.validate()?;
    check_sample_times(cfg, sample_times)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.replica_seed(replica));
    let mut state = init_state(cfg);
    let mut next = state.clone();
    let mut lights = Vec::new();
    let has_cream = cfg.split_node > 1;
    let mut trace = ReplicaTrace {
        profiles: Vec::with_capacity(sample_times.len()),
        fraction_top: Vec::with_capacity(sample_times.len()),
    };
    for &t in sample_times {
        while state.time < t {
            state.step_into(&mut rng, &mut lights, &mut next);
            std::mem::swap(&mut state, &mut next);
        }
        trace.profiles.push(state.color_profile());
        trace.fraction_top.push(if has_cream {
            state.fraction_top(cfg.split_node)?
        } else {
            f64::NAN
        });
    }
    Ok(trace)
}

/// Replica-averaged results at each sample time.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeRun {
    pub sample_times: Vec<u64>,
    pub mean_profiles: Vec<Vec<f64>>,
    pub coarse: Vec<CoarseProfile>,
    pub complexity: ComplexityCurve,
    pub fraction_top: Vec<f64>,
}

/// Runs the replicas in parallel; aggregation is in replica order, so the
/// result depends only on `cfg`.
pub fn run_experiment(
    cfg: &SimConfig,
    groups: usize,
    bins: u32,
    sample_times: &[u64],
) -> Result<LatticeRun> {
    cfg.validate()?;
    check_sample_times(cfg, sample_times)?;
    if groups == 0 || !cfg.segments().is_multiple_of(groups) {
        return Err(Error::invalid(format!(
            "{} segments do not split into {groups} equal groups",
            cfg.segments()
        )));
    }
    let traces = (0..cfg.replicas)
        .into_par_iter()
        .map(|i| simulate_replica(cfg, i, sample_times))
        .collect::<Result<Vec<_>>>()?;
    let mut mean_profiles = Vec::with_capacity(sample_times.len());
    let mut coarse = Vec::with_capacity(sample_times.len());
    let mut fraction_top = Vec::with_capacity(sample_times.len());
    for j in 0..sample_times.len() {
        let at_j: Vec<Vec<f64>> = traces.iter().map(|tr| tr.profiles[j].clone()).collect();
        let mean = average_profiles(&at_j)?;
        coarse.push(coarse_grain(&mean, groups, bins)?);
        mean_profiles.push(mean);
        fraction_top
            .push(traces.iter().map(|tr| tr.fraction_top[j]).sum::<f64>() / traces.len() as f64);
    }
    let complexity = ComplexityCurve::new(
        "apparent_complexity",
        sample_times.iter().map(|&t| t as f64).collect(),
        coarse
            .iter()
            .map(|c| apparent_complexity(c) as f64)
            .collect(),
    )?;
    Ok(LatticeRun {
        sample_times: sample_times.to_vec(),
        mean_profiles,
        coarse,
        complexity,
        fraction_top,
    })
}

/// `0, every, 2·every, …` up to and including `total`.
pub fn sample_schedule(total: u64, every: u64) -> Result<Vec<u64>> {
    if every == 0 {
        return Err(Error::invalid("sample interval must be positive"));
    }
    let mut out: Vec<u64> = (0..=total / every).map(|i| i * every).collect();
    if *out.last().unwrap() != total {
        out.push(total);
    }
    Ok(out)
}
