use crate::corpus::{CitationIndex, CorpusStore, PaperIdx};

/// Yearly citation counts from the publication year (`t = 0`) onward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CitationTrajectory {
    pub counts: Vec<u64>,
}

impl CitationTrajectory {
    pub fn new(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    /// Builds the trajectory of `paper`, observed through `min(horizon, last_year - year)`.
    ///
    /// Citations dated before publication are ignored.
    pub fn of(paper: PaperIdx, store: &CorpusStore, index: &CitationIndex, horizon: usize, last_year: i32) -> Self {
        let year = store.paper(paper).year;
        let observable = (last_year - year).max(0) as usize;
        let span = horizon.min(observable);
        let mut counts = vec![0u64; span + 1];
        for c in index.citers(paper) {
            let age = c.year - year;
            if age >= 0 && (age as usize) <= span {
                counts[age as usize] += 1;
            }
        }
        Self { counts }
    }

    /// `(t_m, c_tm)`: the earliest year of peak citations and the peak count.
    pub fn peak(&self) -> (usize, u64) {
        let mut best = (0, self.counts.first().copied().unwrap_or(0));
        for (t, &c) in self.counts.iter().enumerate() {
            if c > best.1 {
                best = (t, c);
            }
        }
        best
    }
}

/// The beauty coefficient: summed normalized gap between the straight line
/// from `(0, c_0)` to `(t_m, c_tm)` and the actual counts, up to the peak.
/// Zero when the peak is in the publication year.
pub fn sleeping_beauty(traj: &CitationTrajectory) -> f64 {
    let (t_m, c_tm) = traj.peak();
    if t_m == 0 {
        return 0.0;
    }
    let c0 = traj.counts[0] as f64;
    let slope = (c_tm as f64 - c0) / t_m as f64;
    traj.counts[..=t_m]
        .iter()
        .enumerate()
        .map(|(t, &c)| {
            let line = slope * t as f64 + c0;
            (line - c as f64) / (c.max(1) as f64)
        })
        .sum()
}
