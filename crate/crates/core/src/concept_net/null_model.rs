use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus::{ConceptScore, CorpusStore, PaperIdx, PaperRecord};
use crate::error::{Error, Result};
use crate::rng;

const RANDOM_SWAP_TRIES: usize = 64;

/// Randomly reassigns level-3 labels while keeping every paper's label count.
///
/// Papers are shuffled within groups sharing the same set of disciplines, so
/// each discipline's label multiset is preserved even for multi-discipline
/// papers. Within a group the pooled labels are permuted uniformly and dealt
/// back; a paper dealt the same label twice has the duplicate swapped with a
/// label from another paper. Zero-confidence level-3 entries are dropped.
pub fn randomize_labels(store: &CorpusStore, seed: u64) -> Result<CorpusStore> {
    let mut groups: BTreeMap<Vec<&str>, Vec<PaperIdx>> = BTreeMap::new();
    for (idx, paper) in store.papers().iter().enumerate() {
        groups.entry(paper.disciplines()).or_default().push(idx);
    }

    let mut records: Vec<PaperRecord> = store.papers().to_vec();
    for (gi, (key, members)) in groups.iter().enumerate() {
        let mut rng = rng::stream(seed, &[gi as u64]);
        let topic_lists: Vec<Vec<&str>> = members.iter().map(|&i| store.paper(i).topics()).collect();
        let dealt = shuffle_group(&topic_lists, &mut rng)
            .map_err(|e| Error::InfeasibleResampling(format!("disciplines {key:?}: {e}")))?;
        for (&idx, labels) in members.iter().zip(dealt) {
            records[idx].level3 = relabel(store.paper(idx), labels);
        }
    }
    Ok(CorpusStore::from_records(records))
}

fn shuffle_group<'a, R: Rng>(lists: &[Vec<&'a str>], rng: &mut R) -> Result<Vec<Vec<&'a str>>, String> {
    let mut pool: Vec<&str> = lists.iter().flatten().copied().collect();
    let mut distinct = pool.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if let Some(k) = lists.iter().map(Vec::len).find(|&k| k > distinct.len()) {
        return Err(format!(
            "a paper needs {k} distinct labels but the group has {}",
            distinct.len()
        ));
    }

    pool.shuffle(rng);
    let mut slots = Vec::with_capacity(lists.len());
    let mut owner = Vec::with_capacity(pool.len());
    let mut start = 0;
    for (i, l) in lists.iter().enumerate() {
        slots.push(start..start + l.len());
        owner.extend(std::iter::repeat_n(i, l.len()));
        start += l.len();
    }

    for (paper, slot) in slots.iter().enumerate() {
        for pos in slot.clone() {
            if !pool[slot.start..pos].contains(&pool[pos]) {
                continue;
            }
            let ok = |other: usize, pool: &[&str]| {
                let theirs = &slots[owner[other]];
                owner[other] != paper
                    && !pool[slot.clone()].contains(&pool[other])
                    && !pool[theirs.clone()]
                        .iter()
                        .enumerate()
                        .any(|(j, l)| theirs.start + j != other && *l == pool[pos])
            };
            let mut target = (0..RANDOM_SWAP_TRIES)
                .map(|_| rng.gen_range(0..pool.len()))
                .find(|&o| ok(o, &pool));
            if target.is_none() {
                target = (0..pool.len()).find(|&o| ok(o, &pool));
            }
            match target {
                Some(o) => pool.swap(pos, o),
                None => return Err(format!("no collision-free swap for label `{}`", pool[pos])),
            }
        }
    }

    Ok(slots.into_iter().map(|s| pool[s].to_vec()).collect())
}

/// Labels the paper already had keep their original positions and confidences;
/// new labels fill the remaining positive slots in sorted order.
fn relabel(paper: &PaperRecord, mut labels: Vec<&str>) -> Vec<ConceptScore> {
    let mut slots: Vec<&ConceptScore> = Vec::new();
    for s in paper.level3.iter().filter(|s| s.confidence > 0.0) {
        if !slots.iter().any(|t| t.concept == s.concept) {
            slots.push(s);
        }
    }
    labels.sort_unstable();
    let mut fresh = labels
        .iter()
        .filter(|l| !slots.iter().any(|s| s.concept == **l))
        .copied()
        .collect::<Vec<_>>()
        .into_iter();
    slots
        .iter()
        .map(|s| {
            let concept = if labels.binary_search(&s.concept.as_str()).is_ok() {
                s.concept.clone()
            } else {
                fresh.next().expect("label count preserved").to_string()
            };
            ConceptScore {
                concept,
                confidence: s.confidence,
            }
        })
        .collect()
}
