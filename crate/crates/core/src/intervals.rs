//! Sets of disjoint half-open time intervals with exact sweep-based algebra.

use alloc::vec::Vec;

use crate::time::Millis;

/// A canonical set of half-open `[start, end)` intervals: sorted, disjoint,
/// and with touching intervals merged. Total duration is therefore exact and
/// membership is unambiguous.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntervalSet {
    spans: Vec<(Millis, Millis)>,
}

impl IntervalSet {
    pub fn new() -> Self {
        Self { spans: Vec::new() }
    }

    /// Builds a canonical set from arbitrary spans. Empty or inverted spans
    /// (`end <= start`) are dropped; overlapping and adjacent spans merge.
    pub fn from_spans<I: IntoIterator<Item = (Millis, Millis)>>(spans: I) -> Self {
        let mut spans: Vec<(Millis, Millis)> =
            spans.into_iter().filter(|(s, e)| e > s).collect();
        spans.sort_unstable();
        let mut merged: Vec<(Millis, Millis)> = Vec::with_capacity(spans.len());
        for (start, end) in spans {
            match merged.last_mut() {
                // adjacency (end == start) merges too: this is a point set
                Some((_, last_end)) if start <= *last_end => {
                    if end > *last_end {
                        *last_end = end;
                    }
                }
                _ => merged.push((start, end)),
            }
        }
        Self { spans: merged }
    }

    pub fn spans(&self) -> &[(Millis, Millis)] {
        &self.spans
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// Sum of span lengths.
    pub fn total(&self) -> Millis {
        self.spans.iter().map(|&(s, e)| e - s).sum()
    }

    pub fn contains(&self, t: Millis) -> bool {
        match self.spans.binary_search_by(|&(s, _)| s.cmp(&t)) {
            Ok(_) => true,
            Err(0) => false,
            Err(i) => self.spans[i - 1].1 > t,
        }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_spans(self.spans.iter().chain(other.spans.iter()).copied())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.spans.len() && j < other.spans.len() {
            let (a_start, a_end) = self.spans[i];
            let (b_start, b_end) = other.spans[j];
            let start = a_start.max(b_start);
            let end = a_end.min(b_end);
            if end > start {
                out.push((start, end));
            }
            if a_end <= b_end {
                i += 1;
            } else {
                j += 1;
            }
        }
        // pieces are already sorted and disjoint
        IntervalSet { spans: out }
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let mut j = 0;
        for &(start, end) in &self.spans {
            let mut cursor = start;
            while j < other.spans.len() && other.spans[j].1 <= cursor {
                j += 1;
            }
            let mut k = j;
            while k < other.spans.len() && other.spans[k].0 < end {
                let (b_start, b_end) = other.spans[k];
                if b_start > cursor {
                    out.push((cursor, b_start));
                }
                cursor = cursor.max(b_end);
                if b_end >= end {
                    break;
                }
                k += 1;
            }
            if cursor < end {
                out.push((cursor, end));
            }
        }
        IntervalSet { spans: out }
    }
}

impl FromIterator<(Millis, Millis)> for IntervalSet {
    fn from_iter<I: IntoIterator<Item = (Millis, Millis)>>(iter: I) -> Self {
        IntervalSet::from_spans(iter)
    }
}
