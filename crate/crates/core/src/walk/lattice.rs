use std::fmt;

/// Walker position as traversal counts of cavities `1..2D`.
///
/// Cavity 0's count is redundant (all counts sum to the step number) and is
/// not stored. For `D = 1` the single entry is `k`, the number of passes
/// through the longer cavity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticePosition(Vec<u32>);

impl LatticePosition {
    pub fn origin(dims: usize) -> Self {
        LatticePosition(vec![0; 2 * dims - 1])
    }

    pub fn from_counts(counts: Vec<u32>) -> Self {
        LatticePosition(counts)
    }

    /// One-dimensional position `k`.
    pub fn line(k: u32) -> Self {
        LatticePosition(vec![k])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn dims(&self) -> usize {
        self.0.len().div_ceil(2)
    }

    /// `k` for a one-dimensional walk.
    ///
    /// # Panics
    /// If the position belongs to a lattice with `D > 1`.
    pub fn k(&self) -> u32 {
        assert_eq!(self.0.len(), 1, "k() is only defined for D = 1");
        self.0[0]
    }

    /// Symmetric label `x = 2k − N` used in reports.
    pub fn symmetric_label(&self, step: u32) -> i64 {
        2 * self.k() as i64 - step as i64
    }

    /// Full traversal vector `n_c` for all `2D` cavities at the given step.
    pub fn traversals(&self, step: u32) -> Vec<u32> {
        let rest: u32 = self.0.iter().sum();
        let mut out = Vec::with_capacity(self.0.len() + 1);
        out.push(step - rest);
        out.extend_from_slice(&self.0);
        out
    }

    /// Displacement on the `D`-dimensional lattice, `x_d = n_{2d+1} − n_{2d}`.
    pub fn displacement(&self, step: u32) -> Vec<i64> {
        self.traversals(step)
            .chunks(2)
            .map(|pair| pair[1] as i64 - pair[0] as i64)
            .collect()
    }

    /// Position after one pass through `cavity`.
    pub fn shifted(&self, cavity: usize) -> Self {
        let mut next = self.clone();
        if cavity > 0 {
            next.0[cavity - 1] += 1;
        }
        next
    }

    /// Whether the counts are reachable in `step` steps.
    pub fn fits_step(&self, step: u32) -> bool {
        self.0.iter().map(|&n| n as u64).sum::<u64>() <= step as u64
    }
}

impl fmt::Display for LatticePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// All positions reachable in `step` steps on a `dims`-dimensional lattice,
/// in ascending order.
pub fn positions_at_step(dims: usize, step: u32) -> Vec<LatticePosition> {
    fn fill(slots: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<LatticePosition>) {
        if prefix.len() == slots {
            out.push(LatticePosition(prefix.clone()));
            return;
        }
        for n in 0..=budget {
            prefix.push(n);
            fill(slots, budget - n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(2 * dims - 1, step, &mut Vec::new(), &mut out);
    out
}
