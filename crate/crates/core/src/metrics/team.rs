use std::collections::HashMap;

use crate::corpus::{Affiliation, CorpusStore, PaperRecord};

pub const EARTH_RADIUS_KM: f64 = 6371.0088;
pub const FRESHNESS_TEAM_SIZES: std::ops::RangeInclusive<usize> = 2..=20;

/// Authors' first publication years and the first year each author pair co-published.
#[derive(Clone, Debug, Default)]
pub struct CollaborationHistory {
    ids: HashMap<String, u32>,
    first_year: Vec<i32>,
    first_pair: HashMap<(u32, u32), i32>,
}

impl CollaborationHistory {
    pub fn build(store: &CorpusStore) -> Self {
        let mut h = Self::default();
        for p in store.papers() {
            let mut team: Vec<u32> = p.authors.iter().map(|a| h.intern(a, p.year)).collect();
            team.sort_unstable();
            team.dedup();
            for (i, &a) in team.iter().enumerate() {
                for &b in &team[i + 1..] {
                    h.first_pair.entry((a, b)).or_insert(p.year);
                }
            }
        }
        h
    }

    fn intern(&mut self, author: &str, year: i32) -> u32 {
        if let Some(&id) = self.ids.get(author) {
            // papers arrive in year order
            return id;
        }
        let id = self.first_year.len() as u32;
        self.ids.insert(author.to_string(), id);
        self.first_year.push(year);
        id
    }

    pub fn first_publication(&self, author: &str) -> Option<i32> {
        self.ids.get(author).map(|&i| self.first_year[i as usize])
    }

    /// Whether `a` and `b` co-authored a paper published before `year`.
    pub fn collaborated_before(&self, a: &str, b: &str, year: i32) -> bool {
        let (Some(&x), Some(&y)) = (self.ids.get(a), self.ids.get(b)) else {
            return false;
        };
        let key = if x < y { (x, y) } else { (y, x) };
        self.first_pair.get(&key).is_some_and(|&t| t < year)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TeamStats {
    pub team_size: usize,
    pub mean_career_age: Option<f64>,
    /// Share of authors with no earlier paper alongside any current teammate.
    pub freshness: Option<f64>,
    pub mean_geo_distance_km: Option<f64>,
}

pub fn team_stats(paper: &PaperRecord, history: &CollaborationHistory) -> TeamStats {
    let mut team: Vec<&str> = paper.authors.iter().map(String::as_str).collect();
    team.sort_unstable();
    team.dedup();
    let size = team.len();
    if size == 0 {
        return TeamStats::default();
    }

    let career: f64 = team
        .iter()
        .map(|a| (paper.year - history.first_publication(a).unwrap_or(paper.year)) as f64)
        .sum();

    let freshness = FRESHNESS_TEAM_SIZES.contains(&size).then(|| {
        let fresh = team
            .iter()
            .filter(|a| {
                !team
                    .iter()
                    .any(|b| a != &b && history.collaborated_before(a, b, paper.year))
            })
            .count();
        fresh as f64 / size as f64
    });

    TeamStats {
        team_size: size,
        mean_career_age: Some(career / size as f64),
        freshness,
        mean_geo_distance_km: mean_pairwise_distance(&paper.affiliations),
    }
}

fn mean_pairwise_distance(affils: &[Affiliation]) -> Option<f64> {
    let pts: Vec<&Affiliation> = affils
        .iter()
        .filter(|a| a.latitude.is_finite() && a.longitude.is_finite())
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let mut total = 0.0;
    let mut n = 0usize;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            total += great_circle_km(a.latitude, a.longitude, b.latitude, b.longitude);
            n += 1;
        }
    }
    Some(total / n as f64)
}

/// Haversine distance on a spherical Earth.
pub fn great_circle_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dp = p2 - p1;
    let dl = (lon2 - lon1).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::test_paper;

    fn authored(id: &str, year: i32, authors: &[&str]) -> PaperRecord {
        let mut p = test_paper(id, year, &["D"], &["a", "b"]);
        p.authors = authors.iter().map(|s| s.to_string()).collect();
        p
    }

    #[test]
    fn solo_first_paper() {
        let s = CorpusStore::from_records(vec![authored("P", 2000, &["x"])]);
        let h = CollaborationHistory::build(&s);
        let t = team_stats(s.get("P").unwrap(), &h);
        assert_eq!(t.team_size, 1);
        assert_eq!(t.mean_career_age, Some(0.0));
        assert_eq!(t.freshness, None);
        assert_eq!(t.mean_geo_distance_km, None);
    }

    #[test]
    fn new_pair_is_fresh() {
        let s = CorpusStore::from_records(vec![
            authored("A", 1990, &["x", "z"]),
            authored("B", 1995, &["y"]),
            authored("P", 2000, &["x", "y"]),
        ]);
        let h = CollaborationHistory::build(&s);
        let t = team_stats(s.get("P").unwrap(), &h);
        assert_eq!(t.freshness, Some(1.0));
        assert_eq!(t.mean_career_age, Some(7.5));
    }

    #[test]
    fn repeat_collaborators_are_not_fresh() {
        let s = CorpusStore::from_records(vec![
            authored("A", 1990, &["x", "y"]),
            authored("Same", 2000, &["x", "w"]),
            authored("P", 2000, &["x", "y", "w", "v"]),
        ]);
        let h = CollaborationHistory::build(&s);
        let t = team_stats(s.get("P").unwrap(), &h);
        // x and y worked together before; the same-year x/w paper is not "before"
        assert_eq!(t.freshness, Some(0.5));
    }

    #[test]
    fn oversized_team_has_no_freshness() {
        let names: Vec<String> = (0..21).map(|i| format!("a{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let s = CorpusStore::from_records(vec![authored("P", 2000, &refs)]);
        let h = CollaborationHistory::build(&s);
        assert_eq!(team_stats(s.get("P").unwrap(), &h).freshness, None);
    }

    #[test]
    fn geo_distance() {
        let mut p = authored("P", 2000, &["x", "y"]);
        p.affiliations = vec![("x".to_string(), 51.5, -0.12).into(), ("y".to_string(), 51.5, -0.12).into()];
        let h = CollaborationHistory::default();
        assert_eq!(team_stats(&p, &h).mean_geo_distance_km, Some(0.0));

        // a quarter of a great circle
        let d = great_circle_km(0.0, 0.0, 0.0, 90.0);
        assert!((d - EARTH_RADIUS_KM * std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        let d = great_circle_km(90.0, 0.0, -90.0, 0.0);
        assert!((d - EARTH_RADIUS_KM * std::f64::consts::PI).abs() < 1e-9);
    }
}
