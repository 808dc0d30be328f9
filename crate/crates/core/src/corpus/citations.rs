use super::{CorpusStore, PaperIdx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Citation {
    pub year: i32,
    pub citer: PaperIdx,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CitationReport {
    /// References whose target is not in the store.
    pub external: usize,
    /// Citations whose citing year precedes the cited paper's year.
    pub anomalies: usize,
}

/// Forward (cited-by) and backward (cites) adjacency over in-store papers.
///
/// External references stay in the paper records; they produce no forward
/// entry and are only counted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CitationIndex {
    forward: Vec<Vec<Citation>>,
    backward: Vec<Vec<PaperIdx>>,
    report: CitationReport,
}

impl CitationIndex {
    pub fn build(store: &CorpusStore) -> Self {
        let n = store.len();
        let mut forward = vec![Vec::new(); n];
        let mut backward = vec![Vec::new(); n];
        let mut report = CitationReport::default();
        for (citer, paper) in store.papers().iter().enumerate() {
            for r in &paper.references {
                let Some(cited) = store.idx_of(r) else {
                    report.external += 1;
                    continue;
                };
                if paper.year < store.paper(cited).year {
                    report.anomalies += 1;
                }
                forward[cited].push(Citation {
                    year: paper.year,
                    citer,
                });
                backward[citer].push(cited);
            }
        }
        // citers are visited in store order, which is already (year, idx)
        for refs in &mut backward {
            refs.sort_unstable();
        }
        Self {
            forward,
            backward,
            report,
        }
    }

    /// Papers citing `paper`, ascending by (year, citer).
    pub fn citers(&self, paper: PaperIdx) -> &[Citation] {
        &self.forward[paper]
    }

    /// In-store papers referenced by `paper`, ascending.
    pub fn references(&self, paper: PaperIdx) -> &[PaperIdx] {
        &self.backward[paper]
    }

    pub fn cites(&self, citer: PaperIdx, cited: PaperIdx) -> bool {
        self.backward[citer].binary_search(&cited).is_ok()
    }

    pub fn report(&self) -> CitationReport {
        self.report
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }
}
