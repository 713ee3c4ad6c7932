//! Successive interference cancellation as peeling on the frame graph.
//!
//! Each slot keeps the number of undecoded replicas it holds and the XOR of
//! their packet ids, so a singleton slot names its packet directly.

use rand::Rng;

use crate::frame::FrameRealization;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeResult {
    /// Flat `source * K + k` decode flags.
    pub decoded: Vec<bool>,
    /// `r^(i)`, decoded packets per source.
    pub per_source: Vec<usize>,
    /// Peeling rounds that resolved at least one packet.
    pub iterations: usize,
}

impl DecodeResult {
    pub fn num_decoded(&self) -> usize {
        self.per_source.iter().sum()
    }
}

/// One resolved packet in the decode trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeelStep {
    pub round: usize,
    pub slot: usize,
    pub source: usize,
    pub packet: usize,
}

#[derive(Debug, Default)]
struct SlotState {
    count: Vec<u32>,
    xor: Vec<u32>,
    decoded: Vec<bool>,
}

impl SlotState {
    fn new(frame: &FrameRealization) -> Self {
        let mut state = Self::default();
        state.load(frame);
        state
    }

    fn load(&mut self, frame: &FrameRealization) {
        self.count.clear();
        self.count.resize(frame.slots(), 0);
        self.xor.clear();
        self.xor.resize(frame.slots(), 0);
        self.decoded.clear();
        self.decoded.resize(frame.num_packets(), false);
        for p in 0..frame.num_packets() {
            for &s in frame.packet_slots(p) {
                self.count[s as usize] += 1;
                self.xor[s as usize] ^= p as u32;
            }
        }
    }

    fn singletons_into(&self, out: &mut Vec<u32>) {
        out.clear();
        out.extend((0..self.count.len() as u32).filter(|&s| self.count[s as usize] == 1));
    }

    fn singletons(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.singletons_into(&mut out);
        out
    }

    /// Resolve the packet in singleton slot `slot`, cancel all its replicas
    /// and push slots that became singletons onto `next`.
    fn resolve(&mut self, frame: &FrameRealization, slot: u32, next: &mut Vec<u32>) -> usize {
        let packet = self.xor[slot as usize] as usize;
        self.decoded[packet] = true;
        for &s in frame.packet_slots(packet) {
            let s = s as usize;
            self.count[s] -= 1;
            self.xor[s] ^= packet as u32;
            if self.count[s] == 1 {
                next.push(s as u32);
            }
        }
        packet
    }

    fn per_source_into(&self, frame: &FrameRealization, out: &mut Vec<usize>) {
        out.clear();
        out.resize(frame.sources(), 0);
        for (p, &d) in self.decoded.iter().enumerate() {
            if d {
                out[frame.source_of(p)] += 1;
            }
        }
    }

    fn finish(self, frame: &FrameRealization, iterations: usize) -> DecodeResult {
        let mut per_source = Vec::new();
        self.per_source_into(frame, &mut per_source);
        DecodeResult {
            decoded: self.decoded,
            per_source,
            iterations,
        }
    }
}

/// Round-based peeling decoder with reusable buffers.
#[derive(Debug, Default)]
pub struct SicDecoder {
    state: SlotState,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl SicDecoder {
    pub fn new() -> Self {
        Self::default()
    }

    fn peel(&mut self, frame: &FrameRealization, mut on_resolve: impl FnMut(PeelStep)) -> usize {
        let Self {
            state,
            frontier,
            next,
        } = self;
        state.load(frame);
        state.singletons_into(frontier);
        next.clear();
        let mut rounds = 0;
        while !frontier.is_empty() {
            let mut progressed = false;
            for &slot in frontier.iter() {
                // a slot may have been emptied earlier in this round
                if state.count[slot as usize] != 1 {
                    continue;
                }
                if !progressed {
                    progressed = true;
                    rounds += 1;
                }
                let packet = state.resolve(frame, slot, next);
                on_resolve(PeelStep {
                    round: rounds,
                    slot: slot as usize,
                    source: frame.source_of(packet),
                    packet,
                });
            }
            std::mem::swap(frontier, next);
            next.clear();
        }
        rounds
    }

    pub fn decode(&mut self, frame: &FrameRealization) -> DecodeResult {
        let iterations = self.peel(frame, |_| {});
        let mut per_source = Vec::new();
        self.state.per_source_into(frame, &mut per_source);
        DecodeResult {
            decoded: self.state.decoded.clone(),
            per_source,
            iterations,
        }
    }

    /// Decode and write only `r^(i)` into `out`.
    pub fn decode_counts(&mut self, frame: &FrameRealization, out: &mut Vec<usize>) {
        self.peel(frame, |_| {});
        self.state.per_source_into(frame, out);
    }

    pub fn decode_traced(&mut self, frame: &FrameRealization) -> (DecodeResult, Vec<PeelStep>) {
        let mut trace = Vec::new();
        let iterations = self.peel(frame, |step| trace.push(step));
        let mut per_source = Vec::new();
        self.state.per_source_into(frame, &mut per_source);
        let result = DecodeResult {
            decoded: self.state.decoded.clone(),
            per_source,
            iterations,
        };
        (result, trace)
    }
}

/// Peel to the fixpoint, resolving all current singletons in each round.
pub fn sic_decode(frame: &FrameRealization) -> DecodeResult {
    SicDecoder::new().decode(frame)
}

/// Like [`sic_decode`], also returning the resolution order.
pub fn sic_decode_traced(frame: &FrameRealization) -> (DecodeResult, Vec<PeelStep>) {
    SicDecoder::new().decode_traced(frame)
}

/// Peel one singleton at a time, picked uniformly from the current
/// singletons. `iterations` counts single-packet steps here.
pub fn sic_decode_random_order<R: Rng + ?Sized>(
    frame: &FrameRealization,
    rng: &mut R,
) -> DecodeResult {
    let mut state = SlotState::new(frame);
    let mut pending = state.singletons();
    let mut steps = 0;
    while !pending.is_empty() {
        let i = rng.gen_range(0..pending.len());
        let slot = pending.swap_remove(i);
        if state.count[slot as usize] != 1 {
            continue;
        }
        state.resolve(frame, slot, &mut pending);
        steps += 1;
    }
    state.finish(frame, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Placement;

    fn frame(slots: usize, bursts: &[Vec<Vec<usize>>]) -> FrameRealization {
        FrameRealization::from_bursts(slots, Placement::PerSource, bursts).unwrap()
    }

    #[test]
    fn three_source_chain_resolves_everything() {
        // 1-based: u1@{1,3}, u2@{3,5}, u3@{5}
        let f = frame(5, &[vec![vec![0, 2]], vec![vec![2, 4]], vec![vec![4]]]);
        let (res, trace) = sic_decode_traced(&f);
        assert_eq!(res.per_source, vec![1, 1, 1]);
        assert_eq!(res.iterations, 3);
        let order: Vec<_> = trace.iter().map(|s| (s.round, s.slot, s.source)).collect();
        assert_eq!(order, vec![(1, 0, 0), (2, 2, 1), (3, 4, 2)]);
    }

    #[test]
    fn stopping_set_decodes_nothing() {
        let f = frame(2, &[vec![vec![0, 1]], vec![vec![0, 1]]]);
        let res = sic_decode(&f);
        assert_eq!(res.num_decoded(), 0);
        assert_eq!(res.iterations, 0);
    }

    #[test]
    fn single_replica_one_iteration() {
        let f = frame(4, &[vec![vec![2]]]);
        let res = sic_decode(&f);
        assert_eq!(res.decoded, vec![true]);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn all_singletons_decode_in_one_round() {
        let f = frame(6, &[vec![vec![0], vec![1]], vec![vec![2, 3], vec![4, 5]]]);
        let res = sic_decode(&f);
        assert_eq!(res.num_decoded(), 4);
        assert!(res.iterations <= 4);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn same_source_packets_in_one_slot_per_packet_mode() {
        // source 0 has both packets in slot 0; packet 1 also sits alone in slot 1
        let f = FrameRealization::from_bursts(2, Placement::PerPacket, &[vec![vec![0], vec![0, 1]]])
            .unwrap();
        let res = sic_decode(&f);
        assert_eq!(res.per_source, vec![2]);
        assert_eq!(res.iterations, 2);
    }
}
