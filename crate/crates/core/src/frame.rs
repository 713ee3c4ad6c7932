//! One MAC frame as a bipartite graph between packets (burst nodes) and
//! slots (slot nodes).

use rand::distributions::{Distribution, Uniform};
use rand::Rng;

use crate::error::{IrsaError, Result};
use crate::scenario::{Placement, ScenarioConfig, TransmissionStrategy};

/// Replica placement of every `(source, packet)` pair of one frame.
///
/// Packets are numbered `source * K + k`. Replica slots are stored flat, with
/// `offsets[p]..offsets[p + 1]` delimiting packet `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameRealization {
    sources: usize,
    packets: usize,
    slots: usize,
    placement: Placement,
    offsets: Vec<usize>,
    replica_slots: Vec<u32>,
    truncated: bool,
}

impl FrameRealization {
    /// Build a frame from explicit `bursts[source][packet] = slot list`.
    pub fn from_bursts(
        slots: usize,
        placement: Placement,
        bursts: &[Vec<Vec<usize>>],
    ) -> Result<Self> {
        let sources = bursts.len();
        if sources == 0 {
            return Err(IrsaError::InvalidFrame("no sources".into()));
        }
        let packets = bursts[0].len();
        let mut offsets = Vec::with_capacity(sources * packets + 1);
        let mut replica_slots = Vec::new();
        offsets.push(0);
        let mut seen = vec![usize::MAX; slots];
        for (source, source_bursts) in bursts.iter().enumerate() {
            if source_bursts.len() != packets {
                return Err(IrsaError::InvalidFrame(format!(
                    "source {source} has {} packets, expected {packets}",
                    source_bursts.len()
                )));
            }
            for (k, replicas) in source_bursts.iter().enumerate() {
                if replicas.is_empty() {
                    return Err(IrsaError::InvalidFrame(format!(
                        "packet ({source}, {k}) has no replicas"
                    )));
                }
                // tag identifies the scope within which slots must be distinct
                let tag = match placement {
                    Placement::PerSource => source,
                    Placement::PerPacket => source * packets + k,
                };
                for &slot in replicas {
                    if slot >= slots {
                        return Err(IrsaError::InvalidFrame(format!(
                            "slot {slot} out of range [0, {slots})"
                        )));
                    }
                    if seen[slot] == tag {
                        return Err(IrsaError::InvalidFrame(format!(
                            "slot {slot} reused by source {source}"
                        )));
                    }
                    seen[slot] = tag;
                    replica_slots.push(slot as u32);
                }
                offsets.push(replica_slots.len());
            }
        }
        Ok(Self {
            sources,
            packets,
            slots,
            placement,
            offsets,
            replica_slots,
            truncated: false,
        })
    }

    pub fn sources(&self) -> usize {
        self.sources
    }

    /// K, packets per source.
    pub fn packets_per_source(&self) -> usize {
        self.packets
    }

    pub fn num_packets(&self) -> usize {
        self.sources * self.packets
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn placement(&self) -> Placement {
        self.placement
    }

    /// Set when some source demanded more replicas than the frame has slots.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn total_replicas(&self) -> usize {
        self.replica_slots.len()
    }

    /// Replica slots of flat packet index `packet`.
    pub fn packet_slots(&self, packet: usize) -> &[u32] {
        &self.replica_slots[self.offsets[packet]..self.offsets[packet + 1]]
    }

    pub fn replicas(&self, source: usize, k: usize) -> &[u32] {
        self.packet_slots(source * self.packets + k)
    }

    pub fn source_of(&self, packet: usize) -> usize {
        packet / self.packets
    }

    /// Number of replicas landing in each slot.
    pub fn slot_loads(&self) -> Vec<usize> {
        let mut loads = vec![0; self.slots];
        for &s in &self.replica_slots {
            loads[s as usize] += 1;
        }
        loads
    }

    /// `bursts[source][packet]` with 0-based slot indices.
    pub fn to_bursts(&self) -> Vec<Vec<Vec<usize>>> {
        (0..self.sources)
            .map(|i| {
                (0..self.packets)
                    .map(|k| self.replicas(i, k).iter().map(|&s| s as usize).collect())
                    .collect()
            })
            .collect()
    }
}

/// Reusable scratch space for [`generate_frame_with`].
#[derive(Debug, Default)]
pub struct FrameSampler {
    pool: Vec<u32>,
    swaps: Vec<(usize, usize)>,
    marks: Vec<u32>,
    epoch: u32,
    degrees: Vec<usize>,
    uniform: Option<(usize, Uniform<u32>)>,
}

impl FrameSampler {
    pub fn new() -> Self {
        Self::default()
    }

    fn reset(&mut self, slots: usize) {
        if self.pool.len() != slots {
            self.pool = (0..slots as u32).collect();
            self.marks = vec![0; slots];
            self.epoch = 0;
            self.uniform = Some((slots, Uniform::new(0, slots as u32)));
        }
    }

    /// Draw `count` distinct slots uniformly, appending them to `out`.
    fn draw_distinct<R: Rng + ?Sized>(&mut self, count: usize, rng: &mut R, out: &mut Vec<u32>) {
        let m = self.pool.len();
        if 4 * count <= m {
            self.draw_by_rejection(count, rng, out);
            return;
        }
        // partial Fisher-Yates, undone afterwards so the pool stays sorted
        self.swaps.clear();
        for j in 0..count {
            let r = rng.gen_range(j..m);
            self.pool.swap(j, r);
            self.swaps.push((j, r));
            out.push(self.pool[j]);
        }
        for &(j, r) in self.swaps.iter().rev() {
            self.pool.swap(j, r);
        }
    }

    fn draw_by_rejection<R: Rng + ?Sized>(&mut self, count: usize, rng: &mut R, out: &mut Vec<u32>) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.marks.iter_mut().for_each(|m| *m = 0);
            self.epoch = 1;
        }
        let uniform = match &self.uniform {
            Some((_, u)) => *u,
            None => return,
        };
        for _ in 0..count {
            loop {
                let s = uniform.sample(rng);
                let mark = &mut self.marks[s as usize];
                if *mark != self.epoch {
                    *mark = self.epoch;
                    out.push(s);
                    break;
                }
            }
        }
    }
}

/// Sample one frame: i.i.d. degrees per packet, then uniform slots without
/// replacement under the scenario's [`Placement`].
pub fn generate_frame<R: Rng + ?Sized>(
    strategy: &TransmissionStrategy,
    cfg: &ScenarioConfig,
    rng: &mut R,
) -> Result<FrameRealization> {
    generate_frame_with(strategy, cfg, rng, &mut FrameSampler::new())
}

pub fn generate_frame_with<R: Rng + ?Sized>(
    strategy: &TransmissionStrategy,
    cfg: &ScenarioConfig,
    rng: &mut R,
    sampler: &mut FrameSampler,
) -> Result<FrameRealization> {
    strategy.check(cfg)?;
    let (sources, packets, slots) = (cfg.sources, strategy.packets, cfg.slots);
    sampler.reset(slots);

    let n_packets = sources * packets;
    let mut offsets = Vec::with_capacity(n_packets + 1);
    offsets.push(0);
    let mut replica_slots = Vec::with_capacity(n_packets * 3);
    let mut truncated = false;

    for _ in 0..sources {
        sampler.degrees.clear();
        for _ in 0..packets {
            let d = strategy.lambda.sample(rng);
            sampler.degrees.push(d);
        }
        match cfg.placement {
            Placement::PerSource => {
                let demand: usize = sampler.degrees.iter().sum();
                let take = demand.min(slots);
                truncated |= demand > slots;
                let start = replica_slots.len();
                sampler.draw_distinct(take, rng, &mut replica_slots);
                let mut cursor = start;
                for k in 0..packets {
                    let end = (cursor + sampler.degrees[k]).min(start + take);
                    offsets.push(end);
                    cursor = end;
                }
            }
            Placement::PerPacket => {
                for k in 0..packets {
                    let d = sampler.degrees[k].min(slots);
                    truncated |= sampler.degrees[k] > slots;
                    sampler.draw_distinct(d, rng, &mut replica_slots);
                    offsets.push(replica_slots.len());
                }
            }
        }
    }

    Ok(FrameRealization {
        sources,
        packets,
        slots,
        placement: cfg.placement,
        offsets,
        replica_slots,
        truncated,
    })
}
