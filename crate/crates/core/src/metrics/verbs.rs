use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// Creation, innovation, demonstration, improvement, and exploitation verbs,
/// with their common inflections listed explicitly (matching is exact-token).
pub const DEFAULT_LEXICON: &[&str] = &[
    "produce", "produces", "produced", "producing",
    "generate", "generates", "generated", "generating",
    "develop", "develops", "developed", "developing",
    "construct", "constructs", "constructed", "constructing",
    "invent", "invents", "invented", "inventing",
    "embark", "embarks", "embarked", "embarking",
    "launch", "launches", "launched", "launching",
    "revolutionize", "revolutionizes", "revolutionized", "revolutionizing",
    "innovate", "innovates", "innovated", "innovating",
    "pioneer", "pioneers", "pioneered", "pioneering",
    "endorse", "endorses", "endorsed", "endorsing",
    "affirm", "affirms", "affirmed", "affirming",
    "confirm", "confirms", "confirmed", "confirming",
    "support", "supports", "supported", "supporting",
    "demonstrate", "demonstrates", "demonstrated", "demonstrating",
    "ameliorate", "ameliorates", "ameliorated", "ameliorating",
    "promote", "promotes", "promoted", "promoting",
    "enhance", "enhances", "enhanced", "enhancing",
    "modify", "modifies", "modified", "modifying",
    "improve", "improves", "improved", "improving",
    "update", "updates", "updated", "updating",
    "exploit", "exploits", "exploited", "exploiting",
    "leverage", "leverages", "leveraged", "leveraging",
    "extract", "extracts", "extracted", "extracting",
    "harness", "harnesses", "harnessed", "harnessing",
];

/// Lowercased runs of letters.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

struct Frequencies {
    tokens: usize,
    counts: HashMap<String, usize>,
}

impl Frequencies {
    fn of<'a>(titles: impl IntoIterator<Item = &'a str>) -> Self {
        let mut f = Frequencies {
            tokens: 0,
            counts: HashMap::new(),
        };
        for t in titles {
            for tok in tokenize(t) {
                f.tokens += 1;
                *f.counts.entry(tok).or_default() += 1;
            }
        }
        f
    }

    fn per_million(&self, word: &str) -> f64 {
        self.counts.get(word).copied().unwrap_or(0) as f64 * 1e6 / self.tokens as f64
    }
}

/// Ratio of per-million-token frequency in `titles_a` to that in `titles_b`
/// for every lexicon word. Words absent from `b` but present in `a` map to
/// `+inf`; words absent from both are omitted.
pub fn verb_ratio<'a>(
    titles_a: impl IntoIterator<Item = &'a str>,
    titles_b: impl IntoIterator<Item = &'a str>,
    lexicon: &[impl AsRef<str>],
) -> Result<BTreeMap<String, f64>> {
    let a = Frequencies::of(titles_a);
    let b = Frequencies::of(titles_b);
    if a.tokens == 0 {
        return Err(Error::EmptyCollection("first title collection"));
    }
    if b.tokens == 0 {
        return Err(Error::EmptyCollection("second title collection"));
    }
    let mut out = BTreeMap::new();
    for word in lexicon {
        let w = word.as_ref().to_lowercase();
        let (fa, fb) = (a.per_million(&w), b.per_million(&w));
        if fa == 0.0 && fb == 0.0 {
            continue;
        }
        out.insert(w, if fb == 0.0 { f64::INFINITY } else { fa / fb });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_on_non_letters() {
        let t: Vec<String> = tokenize("Deep-Learning: 3 NEW results!").collect();
        assert_eq!(t, ["deep", "learning", "new", "results"]);
    }

    #[test]
    fn twice_as_frequent() {
        // both collections have 4 tokens; "develop" appears twice vs once
        let r = verb_ratio(["develop develop x y"], ["develop a b c"], &["develop"]).unwrap();
        assert_eq!(r["develop"], 2.0);
    }

    #[test]
    fn absent_from_first() {
        let r = verb_ratio(["a b"], ["improve b"], &["improve"]).unwrap();
        assert_eq!(r["improve"], 0.0);
    }

    #[test]
    fn absent_from_second_and_both() {
        let r = verb_ratio(["launch b"], ["a b"], &["launch", "exploit"]).unwrap();
        assert_eq!(r["launch"], f64::INFINITY);
        assert!(!r.contains_key("exploit"));
    }

    #[test]
    fn identical_collections() {
        let titles = ["We develop and improve methods", "Improving support for launches"];
        let r = verb_ratio(titles, titles, DEFAULT_LEXICON).unwrap();
        assert!(!r.is_empty());
        assert!(r.values().all(|&v| v == 1.0));
    }

    #[test]
    fn empty_collection_is_an_error() {
        assert!(verb_ratio([], ["a"], &["a"]).is_err());
        assert!(verb_ratio(["a"], ["123 !!"], &["a"]).is_err());
    }
}
