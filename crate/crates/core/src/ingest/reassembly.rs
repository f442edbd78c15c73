use std::collections::btree_map::{BTreeMap, Entry};

use super::datagram::{Datagram, MAX_PAYLOAD};
use super::IngestError;

/// Loss accounting for one reassembled session.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LossReport {
    pub expected_datagrams: u64,
    pub received: u64,
    /// `(first_missing_seq, length)` for every run of missing sequence numbers.
    pub gaps: Vec<(u64, u64)>,
    pub zero_filled_bytes: u64,
    /// Exact repeats of an already received datagram; dropped.
    pub duplicates: u64,
}

impl LossReport {
    pub fn lost(&self) -> u64 {
        self.gaps.iter().map(|&(_, n)| n).sum()
    }
}

/// Single-consumer reassembly stage. Datagrams may arrive in any order;
/// the session is assumed to start at sequence 0, byte offset 0.
#[derive(Debug)]
pub struct Reassembler {
    pending: BTreeMap<u32, Datagram>,
    duplicates: u64,
    limit_bytes: u64,
}

impl Default for Reassembler {
    fn default() -> Self {
        Self::new()
    }
}

impl Reassembler {
    /// Streams larger than this are rejected before any allocation.
    pub const DEFAULT_LIMIT_BYTES: u64 = 1 << 30;

    pub fn new() -> Self {
        Self::with_limit(Self::DEFAULT_LIMIT_BYTES)
    }

    pub fn with_limit(limit_bytes: u64) -> Self {
        Self { pending: BTreeMap::new(), duplicates: 0, limit_bytes }
    }

    pub fn len(&self) -> usize {
        self.pending.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn push(&mut self, datagram: Datagram) -> Result<(), IngestError> {
        match self.pending.entry(datagram.seq) {
            Entry::Vacant(slot) => {
                slot.insert(datagram);
            }
            Entry::Occupied(prev) => {
                if *prev.get() != datagram {
                    return Err(IngestError::DuplicateSeq { seq: datagram.seq });
                }
                self.duplicates += 1;
            }
        }
        Ok(())
    }

    pub fn finish(self) -> Result<(Vec<u8>, LossReport), IngestError> {
        if self.pending.is_empty() {
            return Err(IngestError::NoDatagrams);
        }

        // Validate the whole layout first so corrupt offsets never drive an allocation.
        let mut report = LossReport { duplicates: self.duplicates, ..Default::default() };
        let mut next_seq = 0u64;
        let mut offset = 0u64;
        for d in self.pending.values() {
            let seq = u64::from(d.seq);
            if d.byte_count < offset {
                return Err(IngestError::NonMonotonicByteCount {
                    seq: d.seq,
                    byte_count: d.byte_count,
                    expected_min: offset,
                });
            }
            let missing = seq - next_seq;
            let gap = d.byte_count - offset;
            if (missing == 0 && gap != 0) || gap < missing || gap > missing * MAX_PAYLOAD as u64 {
                return Err(IngestError::InconsistentGap {
                    seq: d.seq,
                    byte_count: d.byte_count,
                    missing_datagrams: missing,
                    missing_bytes: gap,
                });
            }
            if missing > 0 {
                report.gaps.push((next_seq, missing));
                report.zero_filled_bytes += gap;
            }
            offset = d.end_offset();
            next_seq = seq + 1;
        }
        if offset > self.limit_bytes {
            return Err(IngestError::StreamTooLarge { limit: self.limit_bytes, actual: offset });
        }
        report.expected_datagrams = next_seq;
        report.received = self.pending.len() as u64;

        let mut stream = Vec::with_capacity(offset as usize);
        for d in self.pending.into_values() {
            stream.resize(d.byte_count as usize, 0);
            stream.extend_from_slice(&d.payload);
        }
        Ok((stream, report))
    }
}

/// Reassemble datagrams given in arrival order into the session byte stream.
/// Missing datagrams are zero-filled so frame boundaries stay aligned.
pub fn reassemble<I>(datagrams: I) -> Result<(Vec<u8>, LossReport), IngestError>
where
    I: IntoIterator<Item = Datagram>,
{
    let mut r = Reassembler::new();
    for d in datagrams {
        r.push(d)?;
    }
    r.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chunk(stream: &[u8], size: usize) -> Vec<Datagram> {
        stream
            .chunks(size)
            .enumerate()
            .map(|(i, c)| Datagram::new(i as u32, (i * size) as u64, c.to_vec()).unwrap())
            .collect()
    }

    #[test]
    fn single_datagram() {
        let d = Datagram::new(0, 0, b"ABCD".to_vec()).unwrap();
        let (stream, report) = reassemble([d]).unwrap();
        assert_eq!(stream, b"ABCD");
        assert!(report.gaps.is_empty());
        assert_eq!(report.expected_datagrams, 1);
        assert_eq!(report.received, 1);
    }

    #[test]
    fn one_gap_is_zero_filled() {
        let a = Datagram::new(0, 0, vec![1; 1456]).unwrap();
        let c = Datagram::new(2, 2912, vec![3; 1456]).unwrap();
        let (stream, report) = reassemble([c, a]).unwrap();
        assert_eq!(stream.len(), 3 * 1456);
        assert!(stream[..1456].iter().all(|&b| b == 1));
        assert!(stream[1456..2912].iter().all(|&b| b == 0));
        assert!(stream[2912..].iter().all(|&b| b == 3));
        assert_eq!(report.gaps, vec![(1, 1)]);
        assert_eq!(report.zero_filled_bytes, 1456);
        assert_eq!(report.expected_datagrams, 3);
        assert_eq!(report.received + report.lost(), report.expected_datagrams);
    }

    #[test]
    fn leading_loss_counts_from_zero() {
        let d = Datagram::new(2, 20, vec![9; 10]).unwrap();
        let (stream, report) = reassemble([d]).unwrap();
        assert_eq!(stream.len(), 30);
        assert_eq!(report.gaps, vec![(0, 2)]);
    }

    #[test]
    fn duplicates() {
        let a = Datagram::new(0, 0, vec![1, 2]).unwrap();
        let (_, report) = reassemble([a.clone(), a.clone()]).unwrap();
        assert_eq!(report.duplicates, 1);
        assert_eq!(report.received, 1);

        let b = Datagram::new(0, 0, vec![1, 3]).unwrap();
        assert!(matches!(reassemble([a, b]), Err(IngestError::DuplicateSeq { seq: 0 })));
    }

    #[test]
    fn overlapping_offsets_rejected() {
        let a = Datagram::new(0, 0, vec![1; 100]).unwrap();
        let b = Datagram::new(1, 50, vec![1; 100]).unwrap();
        assert!(matches!(reassemble([a, b]), Err(IngestError::NonMonotonicByteCount { seq: 1, .. })));
    }

    #[test]
    fn contiguous_seq_with_byte_gap_rejected() {
        let a = Datagram::new(0, 0, vec![1; 100]).unwrap();
        let b = Datagram::new(1, 150, vec![1; 100]).unwrap();
        assert!(matches!(reassemble([a, b]), Err(IngestError::InconsistentGap { .. })));
    }

    #[test]
    fn huge_offsets_do_not_allocate() {
        let a = Datagram::new(0, 0, vec![1; 10]).unwrap();
        let b = Datagram::new(u32::MAX, 1 << 47, vec![1; 10]).unwrap();
        assert!(reassemble([a, b]).is_err());
    }

    #[test]
    fn empty_input() {
        assert!(matches!(reassemble(Vec::new()), Err(IngestError::NoDatagrams)));
    }

    proptest! {
        #[test]
        fn conservation(
            stream in proptest::collection::vec(any::<u8>(), 1..20_000),
            size in 1usize..=1456,
            keep in proptest::collection::vec(any::<bool>(), 64),
        ) {
            let all = chunk(&stream, size);
            let last = all.len() - 1;
            // Always keep the final datagram so the stream length is recoverable.
            let kept: Vec<_> = all.iter().enumerate()
                .filter(|(i, _)| *i == last || keep[i % keep.len()])
                .map(|(_, d)| d.clone())
                .collect();
            let (out, report) = reassemble(kept.iter().rev().cloned()).unwrap();

            let max = kept.iter().max_by_key(|d| d.byte_count).unwrap();
            prop_assert_eq!(out.len() as u64, max.byte_count + max.payload.len() as u64);
            prop_assert_eq!(out.len(), stream.len());
            prop_assert_eq!(report.received + report.lost(), report.expected_datagrams);

            let mut zeroed = 0u64;
            for d in &all {
                if kept.iter().any(|k| k.seq == d.seq) {
                    let s = d.byte_count as usize;
                    prop_assert_eq!(&out[s..s + d.payload.len()], &d.payload[..]);
                } else {
                    zeroed += d.payload.len() as u64;
                }
            }
            prop_assert_eq!(report.zero_filled_bytes, zeroed);
        }
    }
}
