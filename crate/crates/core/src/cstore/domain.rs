use std::fmt;

/// A finite set of integers stored as sorted, disjoint, non-adjacent
/// closed intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalSet {
    ranges: Vec<(i64, i64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { ranges: Vec::new() }
    }

    pub fn range(lo: i64, hi: i64) -> Self {
        if lo > hi {
            Self::empty()
        } else {
            IntervalSet { ranges: vec![(lo, hi)] }
        }
    }

    pub fn singleton(v: i64) -> Self {
        Self::range(v, v)
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn min(&self) -> Option<i64> {
        self.ranges.first().map(|r| r.0)
    }

    pub fn max(&self) -> Option<i64> {
        self.ranges.last().map(|r| r.1)
    }

    /// Number of elements.
    pub fn size(&self) -> u128 {
        self.ranges.iter().map(|&(a, b)| (b as i128 - a as i128 + 1) as u128).sum()
    }

    pub fn value(&self) -> Option<i64> {
        match self.ranges.as_slice() {
            [(a, b)] if a == b => Some(*a),
            _ => None,
        }
    }

    pub fn contains(&self, v: i64) -> bool {
        self.ranges.iter().any(|&(a, b)| a <= v && v <= b)
    }

    pub fn ranges(&self) -> &[(i64, i64)] {
        &self.ranges
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.ranges.iter().flat_map(|&(a, b)| a..=b)
    }

    /// Restricts to `[lo, hi]`; returns whether anything was removed.
    pub fn clamp(&mut self, lo: i64, hi: i64) -> bool {
        let before = self.ranges.len();
        let (old_min, old_max) = (self.min(), self.max());
        self.ranges.retain(|&(a, b)| b >= lo && a <= hi);
        for r in &mut self.ranges {
            r.0 = r.0.max(lo);
            r.1 = r.1.min(hi);
        }
        before != self.ranges.len() || old_min != self.min() || old_max != self.max()
    }

    /// Removes one value; returns whether it was present.
    pub fn remove(&mut self, v: i64) -> bool {
        let Some(k) = self.ranges.iter().position(|&(a, b)| a <= v && v <= b) else {
            return false;
        };
        let (a, b) = self.ranges[k];
        match (a == v, b == v) {
            (true, true) => {
                self.ranges.remove(k);
            }
            (true, false) => self.ranges[k].0 = v + 1,
            (false, true) => self.ranges[k].1 = v - 1,
            (false, false) => {
                self.ranges[k].1 = v - 1;
                self.ranges.insert(k + 1, (v + 1, b));
            }
        }
        true
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a1, b1) = self.ranges[i];
            let (a2, b2) = other.ranges[j];
            let (lo, hi) = (a1.max(a2), b1.min(b2));
            if lo <= hi {
                out.push((lo, hi));
            }
            if b1 < b2 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { ranges: out }
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ranges.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self
            .ranges
            .iter()
            .map(|&(a, b)| if a == b { a.to_string() } else { format!("{}..{}", a, b) })
            .collect();
        write!(f, "{}", parts.join(" \\/ "))
    }
}
