//! Logical-access tracing hooks for the block-transfer simulation.
//!
//! Query code reports every entry it reads through an [`AccessSink`]. The
//! plain query path uses [`NoopSink`], which compiles away; the I/O model
//! installs an LRU-counting sink.

/// Addressable storage regions of a built structure. Offsets are entry
/// indices within the region; one entry is one point record or one locator
/// slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    /// The coordinate-to-leaf locator.
    Locator,
    /// Node summaries of one tree, offset = heap index.
    TreeSummaries(u16),
    /// Leaf points of one tree, offset = leaf slot.
    TreeLeaves(u16),
    /// A y-sorted sequence (secondary structure or leaf path array).
    Seq { tree: u16, id: u32 },
    /// A microtree's point records.
    Micro(u32),
}

/// Accounting bucket for the per-phase breakdown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    Locator,
    PathArrays,
    Secondary,
    Micro,
}

pub trait AccessSink {
    /// Statically gates trace emission so untraced queries pay nothing.
    const ENABLED: bool;

    fn touch(&mut self, region: Region, offset: u32, phase: Phase);
}

pub struct NoopSink;

impl AccessSink for NoopSink {
    const ENABLED: bool = false;

    #[inline(always)]
    fn touch(&mut self, _region: Region, _offset: u32, _phase: Phase) {}
}
