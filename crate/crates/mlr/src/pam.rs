//! Predecessor access methods and the prefix-extremum companion.
//!
//! A PAM answers "position of the largest stored key <= k" over a strictly
//! ascending key sequence. The interface is the seam that determines query
//! cost: every secondary structure in the trees is parameterized by one of
//! the implementations here.

use crate::error::{Error, Result};
use crate::geom::{Point, QueryCounters};
use crate::trace::{AccessSink, Phase, Region};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Default capacity for [`SmallSetPam`] when used standalone.
pub const SMALL_SET_DEFAULT_CAP: usize = 64;

/// Reported cost classes, for instrumentation and build reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PamCosts {
    pub query: &'static str,
    pub space: &'static str,
    pub build: &'static str,
}

pub trait Pam {
    /// Position (0-based) of the largest stored key <= `key`, if any.
    fn predecessor(&self, key: u32) -> Option<usize>;
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn key_at(&self, pos: usize) -> u32;
    fn costs(&self) -> PamCosts;
}

/// Which PAM implementation backs a structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PamKind {
    #[default]
    Sorted,
    Trie,
    Small,
}

impl PamKind {
    pub fn token(self) -> &'static str {
        match self {
            PamKind::Sorted => "sorted",
            PamKind::Trie => "trie",
            PamKind::Small => "small",
        }
    }

    pub fn parse(token: &str) -> Result<Self> {
        match token {
            "sorted" => Ok(PamKind::Sorted),
            "trie" => Ok(PamKind::Trie),
            "small" => Ok(PamKind::Small),
            other => Err(Error::Config(format!(
                "unknown PAM '{other}' (expected sorted, trie or small)"
            ))),
        }
    }
}

fn check_ascending(keys: &[u32]) -> Result<()> {
    if keys.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NotAscending);
    }
    Ok(())
}

/// Plain binary search over the ascending key sequence.
#[derive(Clone, Debug)]
pub struct SortedSeqPam {
    keys: Vec<u32>,
}

impl SortedSeqPam {
    pub fn new(keys: Vec<u32>) -> Result<Self> {
        check_ascending(&keys)?;
        Ok(SortedSeqPam { keys })
    }
}

impl Pam for SortedSeqPam {
    fn predecessor(&self, key: u32) -> Option<usize> {
        let n = self.keys.partition_point(|&v| v <= key);
        n.checked_sub(1)
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn key_at(&self, pos: usize) -> u32 {
        self.keys[pos]
    }

    fn costs(&self) -> PamCosts {
        PamCosts {
            query: "O(log N)",
            space: "O(N)",
            build: "O(N)",
        }
    }
}

/// Binary search over a sequence of bounded length. Stand-in for the
/// constant-time small-set structures the leaf arrays and microtrees call
/// for; the extra O(log k) factor is accepted and documented.
#[derive(Clone, Debug)]
pub struct SmallSetPam {
    keys: Vec<u32>,
    cap: usize,
}

impl SmallSetPam {
    pub fn new(keys: Vec<u32>) -> Result<Self> {
        Self::with_capacity(keys, SMALL_SET_DEFAULT_CAP)
    }

    pub fn with_capacity(keys: Vec<u32>, cap: usize) -> Result<Self> {
        check_ascending(&keys)?;
        if keys.len() > cap {
            return Err(Error::CapacityExceeded {
                len: keys.len(),
                cap,
            });
        }
        Ok(SmallSetPam { keys, cap })
    }

    pub fn capacity(&self) -> usize {
        self.cap
    }
}

impl Pam for SmallSetPam {
    fn predecessor(&self, key: u32) -> Option<usize> {
        let n = self.keys.partition_point(|&v| v <= key);
        n.checked_sub(1)
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn key_at(&self, pos: usize) -> u32 {
        self.keys[pos]
    }

    fn costs(&self) -> PamCosts {
        PamCosts {
            query: "O(log k)",
            space: "O(k)",
            build: "O(k)",
        }
    }
}

/// Recursive universe-splitting trie over `[1, M]` in the van Emde Boas
/// style, with lazily allocated clusters. Predecessor descends two half-width
/// universes per level, giving O(log log M) probes.
#[derive(Clone, Debug)]
pub struct GridTriePam {
    keys: Vec<u32>,
    positions: HashMap<u32, u32>,
    trie: Veb,
}

impl GridTriePam {
    pub fn new(keys: Vec<u32>, universe_m: u32) -> Result<Self> {
        check_ascending(&keys)?;
        if let Some(&last) = keys.last() {
            if last > universe_m {
                return Err(Error::OffGridCoord {
                    value: last,
                    m: universe_m,
                });
            }
        }
        let ubits = 32 - universe_m.leading_zeros().min(31);
        let mut trie = Veb::new(ubits.max(1));
        let mut positions = HashMap::with_capacity(keys.len());
        for (i, &k) in keys.iter().enumerate() {
            trie.insert(k);
            positions.insert(k, i as u32);
        }
        Ok(GridTriePam {
            keys,
            positions,
            trie,
        })
    }
}

impl Pam for GridTriePam {
    fn predecessor(&self, key: u32) -> Option<usize> {
        let v = self.trie.pred_le(key)?;
        Some(self.positions[&v] as usize)
    }

    fn len(&self) -> usize {
        self.keys.len()
    }

    fn key_at(&self, pos: usize) -> u32 {
        self.keys[pos]
    }

    fn costs(&self) -> PamCosts {
        PamCosts {
            query: "O(log log M)",
            space: "O(N log log M)",
            build: "O(N log log M)",
        }
    }
}

/// Universes of at most 64 values collapse to a bitmask.
const VEB_LEAF_BITS: u32 = 6;

#[derive(Clone, Debug)]
enum Veb {
    Leaf {
        mask: u64,
    },
    Node {
        low_bits: u32,
        minmax: Option<(u32, u32)>,
        summary: Box<Veb>,
        clusters: HashMap<u32, Veb>,
    },
}

impl Veb {
    fn new(ubits: u32) -> Veb {
        if ubits <= VEB_LEAF_BITS {
            Veb::Leaf { mask: 0 }
        } else {
            let low_bits = ubits / 2;
            Veb::Node {
                low_bits,
                minmax: None,
                summary: Box::new(Veb::new(ubits - low_bits)),
                clusters: HashMap::new(),
            }
        }
    }

    fn is_unset(&self) -> bool {
        match self {
            Veb::Leaf { mask } => *mask == 0,
            Veb::Node { minmax, .. } => minmax.is_none(),
        }
    }

    fn max_value(&self) -> u32 {
        match self {
            Veb::Leaf { mask } => 63 - mask.leading_zeros(),
            Veb::Node { minmax, .. } => minmax.expect("nonempty").1,
        }
    }

    fn min_value(&self) -> u32 {
        match self {
            Veb::Leaf { mask } => mask.trailing_zeros(),
            Veb::Node { minmax, .. } => minmax.expect("nonempty").0,
        }
    }

    fn insert(&mut self, x: u32) {
        match self {
            Veb::Leaf { mask } => *mask |= 1u64 << x,
            Veb::Node {
                low_bits,
                minmax,
                summary,
                clusters,
            } => {
                let mut x = x;
                match *minmax {
                    None => {
                        *minmax = Some((x, x));
                        return;
                    }
                    Some((mn, mx)) => {
                        if x < mn {
                            // The minimum lives only here; the old one descends.
                            *minmax = Some((x, mx));
                            x = mn;
                        } else if x > mx {
                            *minmax = Some((mn, x));
                        }
                    }
                }
                let h = x >> *low_bits;
                let l = x & ((1u32 << *low_bits) - 1);
                let lb = *low_bits;
                let cluster = clusters.entry(h).or_insert_with(|| Veb::new(lb));
                if cluster.is_unset() {
                    summary.insert(h);
                }
                cluster.insert(l);
            }
        }
    }

    /// Largest stored value <= x.
    fn pred_le(&self, x: u32) -> Option<u32> {
        match self {
            Veb::Leaf { mask } => {
                let keep = if x >= 63 { u64::MAX } else { (1u64 << (x + 1)) - 1 };
                let m = mask & keep;
                if m == 0 {
                    None
                } else {
                    Some(63 - m.leading_zeros())
                }
            }
            Veb::Node {
                low_bits,
                minmax,
                summary,
                clusters,
            } => {
                let (mn, mx) = (*minmax)?;
                if x < mn {
                    return None;
                }
                if x >= mx {
                    return Some(mx);
                }
                let h = x >> *low_bits;
                let l = x & ((1u32 << *low_bits) - 1);
                if let Some(c) = clusters.get(&h) {
                    if !c.is_unset() && l >= c.min_value() {
                        let ans = c.pred_le(l).expect("min <= l");
                        return Some((h << *low_bits) | ans);
                    }
                }
                if h > 0 {
                    if let Some(h2) = summary.pred_le(h - 1) {
                        let c = &clusters[&h2];
                        return Some((h2 << *low_bits) | c.max_value());
                    }
                }
                // No cluster precedes; the exclusive minimum is the answer.
                Some(mn)
            }
        }
    }
}

/// One of the three PAM implementations, selected by [`PamKind`].
#[derive(Clone, Debug)]
pub enum PamImpl {
    Sorted(SortedSeqPam),
    Trie(GridTriePam),
    Small(SmallSetPam),
}

impl PamImpl {
    pub fn kind(&self) -> PamKind {
        match self {
            PamImpl::Sorted(_) => PamKind::Sorted,
            PamImpl::Trie(_) => PamKind::Trie,
            PamImpl::Small(_) => PamKind::Small,
        }
    }
}

impl Pam for PamImpl {
    fn predecessor(&self, key: u32) -> Option<usize> {
        match self {
            PamImpl::Sorted(p) => p.predecessor(key),
            PamImpl::Trie(p) => p.predecessor(key),
            PamImpl::Small(p) => p.predecessor(key),
        }
    }

    fn len(&self) -> usize {
        match self {
            PamImpl::Sorted(p) => p.len(),
            PamImpl::Trie(p) => p.len(),
            PamImpl::Small(p) => p.len(),
        }
    }

    fn key_at(&self, pos: usize) -> u32 {
        match self {
            PamImpl::Sorted(p) => p.key_at(pos),
            PamImpl::Trie(p) => p.key_at(pos),
            PamImpl::Small(p) => p.key_at(pos),
        }
    }

    fn costs(&self) -> PamCosts {
        match self {
            PamImpl::Sorted(p) => p.costs(),
            PamImpl::Trie(p) => p.costs(),
            PamImpl::Small(p) => p.costs(),
        }
    }
}

/// Build a PAM over strictly ascending keys. `universe_m` bounds the key
/// range for the trie; small-set capacity is widened to fit the input so
/// the kind stays usable on secondaries of any size.
pub fn pam_build(keys: Vec<u32>, kind: PamKind, universe_m: u32) -> Result<PamImpl> {
    Ok(match kind {
        PamKind::Sorted => PamImpl::Sorted(SortedSeqPam::new(keys)?),
        PamKind::Trie => PamImpl::Trie(GridTriePam::new(keys, universe_m)?),
        PamKind::Small => {
            let cap = keys.len().max(SMALL_SET_DEFAULT_CAP);
            PamImpl::Small(SmallSetPam::with_capacity(keys, cap)?)
        }
    })
}

/// Prefix-argmax companion of a fixed value sequence: entry `r` of the side
/// table holds the position of the maximum among the first `r+1` values, so
/// a half-range maximum query is a single lookup.
#[derive(Clone, Debug)]
pub struct PrefixExtremum {
    values: Vec<u32>,
    prefix_argmax: Vec<u32>,
}

impl PrefixExtremum {
    pub fn new(values: Vec<u32>) -> Self {
        let mut prefix_argmax = Vec::with_capacity(values.len());
        let mut best = 0usize;
        for (i, &v) in values.iter().enumerate() {
            if v > values[best] {
                best = i;
            }
            prefix_argmax.push(best as u32);
        }
        PrefixExtremum {
            values,
            prefix_argmax,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Position (0-based) of the maximum among the first `r` values.
    /// `r` is a prefix length in `1..=len`; the empty prefix is an error.
    pub fn hrmq(&self, r: usize) -> Result<usize> {
        if r == 0 || r > self.values.len() {
            return Err(Error::PrefixOutOfBounds {
                r,
                len: self.values.len(),
            });
        }
        Ok(self.prefix_argmax[r - 1] as usize)
    }
}

/// A point sequence in ascending y order, with predecessor-by-y through a
/// PAM and half-range max-by-x through a prefix table. `tags` carries a
/// caller-defined payload per entry (tree node id, leaf slot, bucket or
/// microtree index).
#[derive(Clone, Debug)]
pub(crate) struct YSeq {
    pub points: Vec<Point>,
    pub tags: Vec<u32>,
    pam: PamImpl,
    argmax_x: PrefixExtremum,
    pub id: u32,
}

impl YSeq {
    /// Sorts by y and builds both companions. `id` is the block-tracing
    /// region identifier within the owning tree.
    pub fn build(
        mut entries: Vec<(Point, u32)>,
        kind: PamKind,
        universe_m: u32,
        id: u32,
    ) -> Result<YSeq> {
        entries.sort_by_key(|(p, _)| p.y);
        let points: Vec<Point> = entries.iter().map(|(p, _)| *p).collect();
        let tags: Vec<u32> = entries.iter().map(|(_, t)| *t).collect();
        let ys: Vec<u32> = points.iter().map(|p| p.y).collect();
        let xs: Vec<u32> = points.iter().map(|p| p.x).collect();
        let pam = pam_build(ys, kind, universe_m)?;
        Ok(YSeq {
            points,
            tags,
            pam,
            argmax_x: PrefixExtremum::new(xs),
            id,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Predecessor of `d` among the y keys. Counts one predecessor query.
    pub fn pred_by_y<S: AccessSink>(
        &self,
        d: u32,
        tree: u16,
        phase: Phase,
        counters: &mut QueryCounters,
        sink: &mut S,
    ) -> Option<usize> {
        counters.predecessor_queries += 1;
        if S::ENABLED {
            // The trace models the key array layout; emit the bisection path.
            let (mut lo, mut hi) = (0usize, self.points.len());
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                sink.touch(Region::Seq { tree, id: self.id }, mid as u32, phase);
                if self.points[mid].y <= d {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
        }
        self.pam.predecessor(d)
    }

    /// Max-x entry among positions `0..=pos`. Counts one h-RMQ.
    pub fn max_x_upto<S: AccessSink>(
        &self,
        pos: usize,
        tree: u16,
        phase: Phase,
        counters: &mut QueryCounters,
        sink: &mut S,
    ) -> (Point, u32) {
        counters.rmq_queries += 1;
        let idx = self.argmax_x.hrmq(pos + 1).expect("pos within sequence");
        if S::ENABLED {
            sink.touch(Region::Seq { tree, id: self.id }, pos as u32, phase);
            sink.touch(Region::Seq { tree, id: self.id }, idx as u32, phase);
        }
        (self.points[idx], self.tags[idx])
    }

    /// Predecessor-then-hrmq: the rightmost entry with y <= d, if any.
    pub fn probe<S: AccessSink>(
        &self,
        d: u32,
        tree: u16,
        phase: Phase,
        counters: &mut QueryCounters,
        sink: &mut S,
    ) -> Option<(Point, u32)> {
        let pos = self.pred_by_y(d, tree, phase, counters, sink)?;
        Some(self.max_x_upto(pos, tree, phase, counters, sink))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Linear-scan reference for predecessor position.
    fn pred_oracle(keys: &[u32], k: u32) -> Option<usize> {
        keys.iter().rposition(|&v| v <= k)
    }

    fn all_impls(keys: &[u32], m: u32) -> Vec<PamImpl> {
        vec![
            pam_build(keys.to_vec(), PamKind::Sorted, m).unwrap(),
            pam_build(keys.to_vec(), PamKind::Trie, m).unwrap(),
            pam_build(keys.to_vec(), PamKind::Small, m).unwrap(),
        ]
    }

    #[test]
    fn predecessor_examples() {
        let keys = vec![2, 5, 9];
        for pam in all_impls(&keys, 16) {
            assert_eq!(pam.predecessor(5), Some(1), "{:?}", pam.kind());
            assert_eq!(pam.predecessor(4), Some(0));
            assert_eq!(pam.predecessor(1), None);
            assert_eq!(pam.predecessor(9), Some(2));
            assert_eq!(pam.predecessor(16), Some(2));
        }
    }

    #[test]
    fn empty_pam_answers_none() {
        for pam in all_impls(&[], 8) {
            for k in 1..=8 {
                assert_eq!(pam.predecessor(k), None);
            }
        }
    }

    #[test]
    fn non_ascending_is_rejected() {
        assert!(pam_build(vec![3, 3], PamKind::Sorted, 8).is_err());
        assert!(pam_build(vec![5, 2], PamKind::Trie, 8).is_err());
    }

    #[test]
    fn small_set_capacity() {
        let keys: Vec<u32> = (1..=65).collect();
        assert!(SmallSetPam::new(keys.clone()).is_err());
        assert!(SmallSetPam::with_capacity(keys, 65).is_ok());
    }

    #[test]
    fn trie_agrees_with_binary_search_on_dense_universe() {
        let keys: Vec<u32> = (1..=1024).collect();
        let trie = pam_build(keys.clone(), PamKind::Trie, 1024).unwrap();
        let sorted = pam_build(keys, PamKind::Sorted, 1024).unwrap();
        for k in 1..=1025 {
            assert_eq!(trie.predecessor(k), sorted.predecessor(k), "k={k}");
        }
    }

    #[test]
    fn exhaustive_small_universes() {
        // Every key subset of a tiny universe, every probe.
        for m in 1u32..=9 {
            for mask in 0u32..(1 << m) {
                let keys: Vec<u32> = (1..=m).filter(|&v| mask & (1 << (v - 1)) != 0).collect();
                for pam in all_impls(&keys, m) {
                    for k in 1..=m {
                        assert_eq!(
                            pam.predecessor(k),
                            pred_oracle(&keys, k),
                            "kind={:?} m={m} mask={mask:b} k={k}",
                            pam.kind()
                        );
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn impls_agree_on_random_key_sets(
            raw in proptest::collection::btree_set(1u32..=4096, 0..256),
            probes in proptest::collection::vec(1u32..=4096, 1..64),
        ) {
            let keys: Vec<u32> = raw.into_iter().collect();
            let impls = all_impls(&keys, 4096);
            for k in probes {
                let expected = pred_oracle(&keys, k);
                for pam in &impls {
                    prop_assert_eq!(pam.predecessor(k), expected);
                }
            }
        }

        #[test]
        fn hrmq_matches_linear_scan(values in proptest::collection::vec(1u32..=1000, 1..64)) {
            // Distinct values arise in real use; the scan oracle must match
            // even with ties (first maximum wins in both).
            let pe = PrefixExtremum::new(values.clone());
            for r in 1..=values.len() {
                let scan = values[..r]
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
                    .map(|(i, _)| i)
                    .unwrap();
                prop_assert_eq!(pe.hrmq(r).unwrap(), scan);
            }
        }
    }

    #[test]
    fn hrmq_examples() {
        let pe = PrefixExtremum::new(vec![3, 1, 4, 1, 5]);
        assert_eq!(pe.hrmq(3).unwrap(), 2);
        assert_eq!(pe.hrmq(1).unwrap(), 0);
        assert_eq!(pe.hrmq(5).unwrap(), 4);
        assert!(pe.hrmq(0).is_err());
        assert!(pe.hrmq(6).is_err());
    }

    #[test]
    fn predecessor_counter_increments_once_per_call() {
        use crate::trace::NoopSink;
        let entries = vec![
            (Point::new(3, 2), 0),
            (Point::new(1, 5), 1),
            (Point::new(2, 9), 2),
        ];
        let seq = YSeq::build(entries, PamKind::Sorted, 16, 0).unwrap();
        let mut c = QueryCounters::default();
        let mut sink = NoopSink;
        for probes in 1..=5u64 {
            seq.pred_by_y(4, 0, Phase::Secondary, &mut c, &mut sink);
            assert_eq!(c.predecessor_queries, probes);
        }
        assert_eq!(c.rmq_queries, 0);
        let pos = seq.pred_by_y(9, 0, Phase::Secondary, &mut c, &mut sink).unwrap();
        seq.max_x_upto(pos, 0, Phase::Secondary, &mut c, &mut sink);
        assert_eq!(c.rmq_queries, 1);
    }

    #[test]
    fn yseq_probe_returns_rightmost_qualifying() {
        use crate::trace::NoopSink;
        // Points sorted by y: (5,1) (3,2) (1,5); max x with y <= 2 is 5.
        let entries = vec![
            (Point::new(1, 5), 10),
            (Point::new(5, 1), 11),
            (Point::new(3, 2), 12),
        ];
        let seq = YSeq::build(entries, PamKind::Sorted, 8, 0).unwrap();
        let mut c = QueryCounters::default();
        let got = seq.probe(2, 0, Phase::Secondary, &mut c, &mut NoopSink);
        assert_eq!(got, Some((Point::new(5, 1), 11)));
        let none = seq.probe(0, 0, Phase::Secondary, &mut c, &mut NoopSink);
        assert!(none.is_none());
    }
}
