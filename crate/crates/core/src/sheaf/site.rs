use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ideal::Subset;
use crate::report::Report;

/// A finite topological space, given by its points and the list of its open sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSite {
    name: String,
    points: Vec<String>,
    opens: Vec<Subset>,
}

#[derive(Deserialize)]
pub(crate) struct SiteJson {
    #[serde(default)]
    pub name: Option<String>,
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

fn subset_label(points: &[String], s: Subset) -> String {
    let names: Vec<&str> = s.iter().map(|i| points[i].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// Exhaustive check that `opens` is a topology on `n` points.
fn topology_report(name: &str, points: &[String], opens: &[Subset]) -> Report {
    let n = points.len();
    let mut r = Report::new("site-topology", name);
    let has = |s: Subset| opens.contains(&s);
    r.check(has(Subset::empty()), "contains-empty", || "the empty set is not open".into());
    r.check(has(Subset::full(n)), "contains-whole", || "the whole space is not open".into());
    for &u in opens {
        r.check(u.is_subset(Subset::full(n)), "opens-in-space", || {
            format!("{u} is not a set of points")
        });
    }
    for (a, &u) in opens.iter().enumerate() {
        for &v in &opens[a..] {
            r.check(has(u.union(v)), "closed-under-union", || {
                format!("{} ∪ {}", subset_label(points, u), subset_label(points, v))
            });
            r.check(has(Subset(u.0 & v.0)), "closed-under-intersection", || {
                format!("{} ∩ {}", subset_label(points, u), subset_label(points, v))
            });
        }
    }
    r
}

impl FiniteSite {
    pub fn new(name: impl Into<String>, points: Vec<String>, opens: Vec<Subset>) -> Result<Self> {
        let name = name.into();
        if points.len() > 63 {
            return Err(Error::Resource(format!("{} points on a finite site", points.len())));
        }
        let mut opens = opens;
        opens.sort_by_key(|s| (s.len(), s.0));
        opens.dedup();
        let report = topology_report(&name, &points, &opens);
        if !report.pass {
            let w = &report.witnesses[0];
            return Err(Error::Structural(format!("not a topology ({}): {}", w.check, w.detail)));
        }
        Ok(FiniteSite { name, points, opens })
    }

    /// Opens named by lists of point labels.
    pub fn from_labels(name: impl Into<String>, points: &[&str], opens: &[&[&str]]) -> Result<Self> {
        let points: Vec<String> = points.iter().map(|s| s.to_string()).collect();
        let opens = opens
            .iter()
            .map(|o| Self::resolve(&points, &o.iter().map(|s| s.to_string()).collect::<Vec<_>>()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, points, opens)
    }

    pub(crate) fn resolve(points: &[String], labels: &[String]) -> Result<Subset> {
        let mut s = Subset::empty();
        for l in labels {
            let i = points
                .iter()
                .position(|p| p == l)
                .ok_or_else(|| Error::Parse(format!("unknown point {l:?}")))?;
            s.insert(i);
        }
        Ok(s)
    }

    pub(crate) fn from_site_json(j: &SiteJson) -> Result<Self> {
        let opens = j
            .opens
            .iter()
            .map(|o| Self::resolve(&j.points, o))
            .collect::<Result<Vec<_>>>()?;
        Self::new(j.name.clone().unwrap_or_else(|| "site".into()), j.points.clone(), opens)
    }

    /// `{"name": .., "points": [..], "opens": [[..], ..]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: SiteJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_site_json(&j)
    }

    pub fn one_point() -> Self {
        Self::from_labels("one-point", &["p"], &[&[], &["p"]]).expect("valid site")
    }

    /// Two points, `closed` and `open`, where only `{open}` is a proper nonempty open.
    pub fn sierpinski() -> Self {
        Self::from_labels("sierpinski", &["closed", "open"], &[&[], &["open"], &["closed", "open"]])
            .expect("valid site")
    }

    /// `p0, .., p{n-1}` whose opens are the initial segments.
    pub fn chain(n: usize) -> Self {
        let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let opens = (0..=n).map(|k| Subset::from_elems(0..k)).collect();
        Self::new(format!("chain-{n}"), points, opens).expect("valid site")
    }

    pub fn discrete(n: usize) -> Self {
        let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let opens = (0..1u64 << n).map(Subset).collect();
        Self::new(format!("discrete-{n}"), points, opens).expect("valid site")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Opens sorted by size; index 0 is the empty set and the last is the whole space.
    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    pub fn open(&self, u: usize) -> Subset {
        self.opens[u]
    }

    pub fn whole(&self) -> usize {
        self.opens.len() - 1
    }

    pub fn open_index(&self, s: Subset) -> Option<usize> {
        self.opens.iter().position(|&o| o == s)
    }

    pub fn open_label(&self, u: usize) -> String {
        subset_label(&self.points, self.opens[u])
    }

    /// The smallest open containing `x`.
    pub fn minimal_open(&self, x: usize) -> usize {
        let s = self
            .opens
            .iter()
            .filter(|o| o.contains(x))
            .fold(Subset::full(self.points.len()), |acc, o| Subset(acc.0 & o.0));
        self.open_index(s).expect("opens are closed under intersection")
    }

    /// Whether `y` lies in the closure of `x`.
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.opens[self.minimal_open(y)].contains(x)
    }

    /// Pairs `(u, v)` of open indices with `V ⊆ U`.
    pub fn inclusions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.opens.len() {
            for v in 0..self.opens.len() {
                if self.opens[v].is_subset(self.opens[u]) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Families of opens strictly inside `U` whose union is `U`.
    pub fn coverings(&self, u: usize) -> Result<Vec<Vec<usize>>> {
        let target = self.opens[u];
        let inside: Vec<usize> = (0..self.opens.len())
            .filter(|&v| v != u && self.opens[v].is_subset(target))
            .collect();
        if inside.len() > 16 {
            return Err(Error::Resource(format!("{} opens below {}", inside.len(), self.open_label(u))));
        }
        let mut out = Vec::new();
        for mask in 0u32..(1 << inside.len()) {
            let fam: Vec<usize> = (0..inside.len()).filter(|b| mask >> b & 1 == 1).map(|b| inside[b]).collect();
            let union = fam.iter().fold(Subset::empty(), |acc, &v| acc.union(self.opens[v]));
            if union == target {
                out.push(fam);
            }
        }
        Ok(out)
    }

    pub fn topology_check(&self) -> Report {
        topology_report(&self.name, &self.points, &self.opens)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "points": self.points,
            "opens": (0..self.opens.len()).map(|u| self.open_label(u)).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_topologies() {
        for s in [FiniteSite::one_point(), FiniteSite::sierpinski(), FiniteSite::chain(3), FiniteSite::discrete(2)] {
            assert!(s.topology_check().pass, "{}", s.name());
        }
        assert_eq!(FiniteSite::discrete(2).opens().len(), 4);
        assert_eq!(FiniteSite::chain(3).opens().len(), 4);
    }

    #[test]
    fn rejects_non_topologies() {
        let r = FiniteSite::from_labels("bad", &["a", "b"], &[&[], &["a"], &["b"]]);
        assert!(matches!(r, Err(Error::Structural(_))));
        let r = FiniteSite::from_labels("bad", &["a", "b", "c"], &[&[], &["a", "b"], &["b", "c"], &["a", "b", "c"]]);
        assert!(r.is_err());
    }

    #[test]
    fn minimal_opens_and_specialization() {
        let s = FiniteSite::sierpinski();
        assert_eq!(s.open_label(s.minimal_open(0)), "{closed,open}");
        assert_eq!(s.open_label(s.minimal_open(1)), "{open}");
        assert!(s.specializes(1, 0));
        assert!(!s.specializes(0, 1));
        let c = FiniteSite::chain(3);
        assert_eq!(c.open_label(c.minimal_open(1)), "{p0,p1}");
    }

    #[test]
    fn coverings_of_discrete_space() {
        let s = FiniteSite::discrete(2);
        let covers = s.coverings(s.whole()).unwrap();
        // {a},{b} with or without the empty set
        assert_eq!(covers.len(), 2);
        // the empty open is covered by the empty family
        assert_eq!(s.coverings(0).unwrap(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn parses_json() {
        let s = FiniteSite::from_json(r#"{"name":"s","points":["x","y"],"opens":[[],["y"],["x","y"]]}"#).unwrap();
        assert_eq!(s, FiniteSite::from_labels("s", &["x", "y"], &[&[], &["y"], &["x", "y"]]).unwrap());
    }
}
