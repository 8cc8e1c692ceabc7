use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::report::Report;
use crate::ring::{is_prime_ring_ideal, EuclideanDomain, FgRingIdeal, LocalSet, Pid, RingDescriptor, RingElement, RingMorphism};
use crate::spectrum::{speck_truncated, TruncatedSpectrum};
use crate::trop::{correspondence_forward, fgid_functor};

#[derive(Deserialize)]
struct ChartJson {
    ring: String,
}

#[derive(Deserialize)]
struct OverlapJson {
    i: usize,
    j: usize,
    f_i: String,
    f_j: String,
}

#[derive(Deserialize)]
struct TransitionJson {
    i: usize,
    j: usize,
    substitution: String,
}

#[derive(Deserialize)]
struct GluingJson {
    charts: Vec<ChartJson>,
    #[serde(default)]
    overlaps: Vec<OverlapJson>,
    #[serde(default)]
    transitions: Vec<TransitionJson>,
    #[serde(default)]
    covering: Option<String>,
}

/// Affine charts `Spec(Rᵢ)` glued along basic opens `D(f_ij) ⊆ Spec(Rᵢ)` by
/// isomorphisms `Rᵢ[1/f_ij] → Rⱼ[1/f_ji]`.
#[derive(Debug, Clone)]
pub struct GluingData {
    charts: Vec<RingDescriptor>,
    /// `(i, j) ↦ f_ij`, stored in both directions.
    overlaps: BTreeMap<(usize, usize), RingElement>,
    transitions: BTreeMap<(usize, usize), RingMorphism>,
    covering: String,
}

fn chart_pid(r: &RingDescriptor) -> Result<Pid> {
    r.as_pid()
        .ok_or_else(|| Error::Unsupported(format!("chart {} is not a principal ideal domain", r.name())))
}

impl GluingData {
    pub fn single_chart(ring: RingDescriptor) -> Result<Self> {
        chart_pid(&ring)?;
        Ok(GluingData {
            charts: vec![ring],
            overlaps: BTreeMap::new(),
            transitions: BTreeMap::new(),
            covering: "affine".into(),
        })
    }

    /// `{"charts": [{"ring": ..}], "overlaps": [{"i", "j", "f_i", "f_j"}],
    /// "transitions": [{"i", "j", "substitution"}], "covering": ..}`.
    ///
    /// A substitution gives the image of the chart variable, as in `"1/y"` or
    /// `"x -> 1/y"`; `"id"` uses the canonical map between equal localizations.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: GluingJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let charts = j
            .charts
            .iter()
            .map(|c| RingDescriptor::parse(&c.ring))
            .collect::<Result<Vec<_>>>()?;
        if charts.is_empty() {
            return Err(Error::Parse("no charts".into()));
        }
        for c in &charts {
            chart_pid(c)?;
        }
        let n = charts.len();
        let in_range = |i: usize, j: usize| {
            if i >= n || j >= n || i == j {
                Err(Error::Parse(format!("bad chart pair ({i}, {j})")))
            } else {
                Ok(())
            }
        };
        let mut overlaps = BTreeMap::new();
        for o in &j.overlaps {
            in_range(o.i, o.j)?;
            overlaps.insert((o.i, o.j), charts[o.i].parse_element(&o.f_i)?);
            overlaps.insert((o.j, o.i), charts[o.j].parse_element(&o.f_j)?);
        }
        let mut data = GluingData {
            charts,
            overlaps,
            transitions: BTreeMap::new(),
            covering: j.covering.unwrap_or_else(|| "given".into()),
        };
        for t in &j.transitions {
            in_range(t.i, t.j)?;
            let src = data.local(t.i, t.j)?;
            let tgt = data.local(t.j, t.i)?;
            let text = t.substitution.rsplit("->").next().expect("split yields a piece").trim();
            let m = if text == "id" {
                RingMorphism::canonical(&src, &tgt)?
            } else {
                let img = tgt.parse_element(text)?;
                RingMorphism::substitution(&src, &tgt, vec![img])?
            };
            data.transitions.insert((t.i, t.j), m);
        }
        for &(i, k) in data.overlaps.keys() {
            if !data.transitions.contains_key(&(i, k)) {
                return Err(Error::Structural(format!("no transition from chart {i} to chart {k}")));
            }
        }
        Ok(data)
    }

    /// The projective line over `field` (`"F2"`, `"Q"`, ..) with charts in `x` and `y`.
    pub fn projective_line(field: &str) -> Result<Self> {
        Self::from_json(&projective_line_json(field))
    }

    pub fn charts(&self) -> &[RingDescriptor] {
        &self.charts
    }

    pub fn covering(&self) -> &str {
        &self.covering
    }

    pub fn overlap_function(&self, i: usize, j: usize) -> Option<&RingElement> {
        self.overlaps.get(&(i, j))
    }

    pub fn transition(&self, i: usize, j: usize) -> Option<&RingMorphism> {
        self.transitions.get(&(i, j))
    }

    /// `Rᵢ[1/f_ij]`.
    pub fn local(&self, i: usize, j: usize) -> Result<RingDescriptor> {
        let f = self
            .overlaps
            .get(&(i, j))
            .ok_or_else(|| Error::Structural(format!("charts {i} and {j} do not overlap")))?;
        let pid = chart_pid(&self.charts[i])?;
        RingDescriptor::localized(pid, LocalSet::PowersOf(f.clone()))
    }
}

pub fn projective_line_json(field: &str) -> String {
    json!({
        "charts": [{"ring": format!("{field}[x]")}, {"ring": format!("{field}[y]")}],
        "overlaps": [{"i": 0, "j": 1, "f_i": "x", "f_j": "y"}],
        "transitions": [
            {"i": 0, "j": 1, "substitution": "x -> 1/y"},
            {"i": 1, "j": 0, "substitution": "y -> 1/x"}
        ],
        "covering": "standard"
    })
    .to_string()
}

/// The identification of `D_k(u(f_ij))` in chart `i` with `D_k(u(f_ji))` in chart `j`.
#[derive(Debug, Clone)]
pub struct ChartIdentification {
    pub i: usize,
    pub j: usize,
    /// Point index in chart `i` to point index in chart `j`.
    pub map: BTreeMap<usize, usize>,
    /// Points whose image lies beyond the truncation of chart `j`.
    pub escaped: Vec<usize>,
}

/// The tropicalization of the glued scheme, chart by chart, and the glued point set.
#[derive(Debug, Clone)]
pub struct TropScheme {
    data: GluingData,
    charts: Vec<TruncatedSpectrum>,
    identifications: Vec<ChartIdentification>,
    classes: Vec<Vec<(usize, usize)>>,
    report: Report,
}

impl TropScheme {
    pub fn charts(&self) -> &[TruncatedSpectrum] {
        &self.charts
    }

    pub fn identifications(&self) -> &[ChartIdentification] {
        &self.identifications
    }

    /// Glued points, each as the list of `(chart, point)` it identifies.
    pub fn points(&self) -> &[Vec<(usize, usize)>] {
        &self.classes
    }

    pub fn report(&self) -> &Report {
        &self.report
    }

    /// The glued points lying in chart `i`: an open of the glued space.
    pub fn chart_open(&self, i: usize) -> BTreeSet<usize> {
        (0..self.classes.len())
            .filter(|&c| self.classes[c].iter().any(|&(k, _)| k == i))
            .collect()
    }

    fn label(&self, (i, p): (usize, usize)) -> String {
        format!("{}:{}", i, self.charts[i].points()[p].format())
    }

    pub fn to_json(&self) -> Value {
        let charts: Vec<Value> = self
            .charts
            .iter()
            .map(|s| json!({"ring": s.ring().name(), "points": s.len(), "complete": s.is_complete()}))
            .collect();
        let overlaps: Vec<Value> = self
            .identifications
            .iter()
            .map(|id| {
                let map: BTreeMap<String, String> = id
                    .map
                    .iter()
                    .map(|(&a, &b)| (self.label((id.i, a)), self.label((id.j, b))))
                    .collect();
                json!({"i": id.i, "j": id.j, "map": map, "escaped": id.escaped.iter().map(|&a| self.label((id.i, a))).collect::<Vec<_>>()})
            })
            .collect();
        let points: Vec<Vec<String>> = self
            .classes
            .iter()
            .map(|c| c.iter().map(|&x| self.label(x)).collect())
            .collect();
        json!({
            "covering": self.data.covering,
            "charts": charts,
            "overlaps": overlaps,
            "points": points,
            "point_count": self.classes.len(),
            "report": self.report.to_json(),
        })
    }
}

/// The image in chart `j` of a prime of chart `i` lying in the overlap, computed on
/// the ring side and through `fgId` of the transition.
fn transport(data: &GluingData, i: usize, j: usize, q: &FgRingIdeal) -> Result<(FgRingIdeal, FgRingIdeal)> {
    let src = data.local(i, j)?;
    let alpha = data.transition(i, j).expect("checked when parsed");
    let pid_i = chart_pid(&data.charts[i])?;
    let pid_j = chart_pid(&data.charts[j])?;
    let g = q.generator().expect("principal").clone();
    let ring_img = FgRingIdeal::principal(alpha.target(), &alpha.apply(&src.make_frac(g, pid_i.one()))?)?;
    let (_, num) = ring_img.base_generator().expect("principal");
    let ring_side = FgRingIdeal::principal(&data.charts[j], &pid_j.normalize(&num))?;

    let ext = fgid_functor(&RingMorphism::canonical(&data.charts[i], &src)?).apply(q)?;
    let trop_img = fgid_functor(alpha).apply(&ext)?;
    let (_, num) = trop_img.base_generator().expect("principal");
    let trop_side = FgRingIdeal::principal(&data.charts[j], &pid_j.normalize(&num))?;
    Ok((ring_side, trop_side))
}

/// Sample elements `a/fⁿ` of `Rᵢ[1/f_ij]`.
fn overlap_samples(data: &GluingData, i: usize, j: usize) -> Result<Vec<RingElement>> {
    let src = data.local(i, j)?;
    let pid = chart_pid(&data.charts[i])?;
    let f = &data.overlaps[&(i, j)];
    let mut base: Vec<RingElement> = crate::spectrum::small_elements(&pid, 2)?.into_iter().take(16).collect();
    if let Ok(x) = data.charts[i].var(0) {
        base.push(pid.add(&x, &pid.one()));
        base.push(pid.neg(&x));
    }
    let mut out = Vec::new();
    for a in &base {
        for n in 0..=2 {
            out.push(src.make_frac(a.clone(), pid.pow(f, n)));
        }
    }
    Ok(out)
}

/// `α_jk ∘ α_ij = α_ik` (with `α_ii` the identity) on sampled elements and on the
/// ideals they generate, for every triple whose composite is defined.
fn cocycle_check(data: &GluingData, r: &mut Report) -> Result<()> {
    let n = data.charts.len();
    let mut checked = Vec::new();
    let mut skipped = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k {
                    continue;
                }
                let (Some(a_ij), Some(a_jk)) = (data.transition(i, j), data.transition(j, k)) else {
                    continue;
                };
                let direct = if i == k {
                    RingMorphism::Identity(data.local(i, j)?)
                } else {
                    match data.transition(i, k) {
                        Some(m) => m.clone(),
                        None => continue,
                    }
                };
                if a_ij.target() != a_jk.source() || direct.source() != a_ij.source() || direct.target() != a_jk.target() {
                    skipped.push(json!([i, j, k]));
                    continue;
                }
                let (f_ij, f_jk, f_ik) = (fgid_functor(a_ij), fgid_functor(a_jk), fgid_functor(&direct));
                for x in overlap_samples(data, i, j)? {
                    let two = a_jk.apply(&a_ij.apply(&x)?)?;
                    let one = direct.apply(&x)?;
                    let src = a_ij.source();
                    if two != one {
                        return Err(Error::Descent {
                            i,
                            j,
                            k,
                            detail: format!("{} maps to {} and {}", src.format(&x), direct.target().format(&two), direct.target().format(&one)),
                        });
                    }
                    let ideal = FgRingIdeal::principal(src, &x)?;
                    let t2 = f_jk.apply(&f_ij.apply(&ideal)?)?;
                    let t1 = f_ik.apply(&ideal)?;
                    if t2 != t1 {
                        return Err(Error::Descent {
                            i,
                            j,
                            k,
                            detail: format!("fgId images of {} differ: {} and {}", ideal.format(), t2.format(), t1.format()),
                        });
                    }
                }
                r.check(true, "cocycle", String::new);
                checked.push(json!([i, j, k]));
            }
        }
    }
    r.note("cocycle_triples", json!(checked));
    if !skipped.is_empty() {
        r.note("cocycle_skipped", json!(skipped));
    }
    Ok(())
}

/// Builds the truncated tropical charts, identifies their overlaps through `fgId`
/// of the transitions and glues; a failed cocycle is a descent error.
pub fn trop_scheme(data: &GluingData, bound: u64) -> Result<TropScheme> {
    let mut r = Report::new("trop-scheme", format!("{} charts, covering {}", data.charts.len(), data.covering));
    let charts = data
        .charts
        .iter()
        .map(|c| speck_truncated(c, bound))
        .collect::<Result<Vec<_>>>()?;
    cocycle_check(data, &mut r)?;

    let mut identifications = Vec::new();
    for (&(i, j), f) in &data.overlaps {
        let (si, sj) = (&charts[i], &charts[j]);
        let basic = si.d_ring(f);
        let u_f = FgRingIdeal::principal(&data.charts[i], f)?;
        r.check(si.dk(&u_f) == basic, "basic-open-matches", || format!("D({}) in chart {i}", data.charts[i].format(f)));
        let target_open = sj.d_ring(&data.overlaps[&(j, i)]);
        let mut id = ChartIdentification { i, j, map: BTreeMap::new(), escaped: Vec::new() };
        for &p in &basic {
            let q = &si.points()[p].prime;
            let (ring_side, trop_side) = transport(data, i, j, q)?;
            r.check(
                correspondence_forward(&ring_side) == correspondence_forward(&trop_side),
                "ring-and-tropical-agree",
                || format!("{} from chart {i}: {} vs {}", q.format(), ring_side.format(), trop_side.format()),
            );
            r.check(is_prime_ring_ideal(&ring_side)?, "image-is-prime", || ring_side.format());
            match sj.position(&ring_side) {
                Some(k) => {
                    r.check(target_open.contains(&k), "image-in-overlap", || {
                        format!("{} lands outside D(f) of chart {j}", ring_side.format())
                    });
                    id.map.insert(p, k);
                }
                None => id.escaped.push(p),
            }
        }
        let images: BTreeSet<usize> = id.map.values().copied().collect();
        r.check(images.len() == id.map.len(), "identification-injective", || format!("charts {i} -> {j}"));
        identifications.push(id);
    }
    for a in &identifications {
        let Some(b) = identifications.iter().find(|b| b.i == a.j && b.j == a.i) else {
            continue;
        };
        for (&p, &q) in &a.map {
            if let Some(&back) = b.map.get(&q) {
                r.check(back == p, "identification-round-trip", || {
                    format!("{} returns as {}", charts[a.i].points()[p].format(), charts[a.i].points()[back].format())
                });
            }
        }
        if a.escaped.is_empty() && b.escaped.is_empty() {
            let target: BTreeSet<usize> = charts[a.j].d_ring(&data.overlaps[&(a.j, a.i)]).into_iter().collect();
            let images: BTreeSet<usize> = a.map.values().copied().collect();
            r.check(images == target, "overlap-bijection", || format!("charts {} -> {}", a.i, a.j));
        } else {
            r.note("status", "identification partial beyond the truncation");
        }
    }

    // glue
    let offsets: Vec<usize> = charts
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s.len();
            Some(o)
        })
        .collect();
    let total: usize = charts.iter().map(|s| s.len()).sum();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for id in &identifications {
        for (&p, &q) in &id.map {
            let (a, b) = (find(&mut parent, offsets[id.i] + p), find(&mut parent, offsets[id.j] + q));
            parent[a] = b;
        }
    }
    let mut by_root: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, s) in charts.iter().enumerate() {
        for p in 0..s.len() {
            let root = find(&mut parent, offsets[c] + p);
            by_root.entry(root).or_default().push((c, p));
        }
    }
    let mut classes: Vec<Vec<(usize, usize)>> = by_root.into_values().collect();
    classes.sort();
    if data.charts.len() == 1 {
        r.check(classes.len() == charts[0].len(), "affine-is-speck", || {
            format!("{} glued points, {} in the spectrum", classes.len(), charts[0].len())
        });
    }
    let counts: Vec<usize> = charts.iter().map(|s| s.len()).collect();
    r.note("chart_points", json!(counts));
    r.note("glued_points", classes.len());
    Ok(TropScheme {
        data: data.clone(),
        charts,
        identifications,
        classes,
        report: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Monic irreducibles of degree `1..=max_deg` over `F_q`, by the necklace formula.
    fn irreducible_count(q: i64, max_deg: u32) -> usize {
        let mobius = |n: u32| -> i64 {
            let (mut n, mut sign, mut p) = (n, 1, 2);
            while p * p <= n {
                if n % p == 0 {
                    n /= p;
                    if n % p == 0 {
                        return 0;
                    }
                    sign = -sign;
                }
                p += 1;
            }
            if n > 1 { -sign } else { sign }
        };
        (1..=max_deg)
            .map(|d| {
                let sum: i64 = (1..=d).filter(|e| d % e == 0).map(|e| mobius(e) * q.pow(d / e)).sum();
                (sum / d as i64) as usize
            })
            .sum()
    }

    #[test]
    fn projective_line_over_f2() {
        let data = GluingData::projective_line("F2").unwrap();
        for bound in [2u64, 3] {
            let t = trop_scheme(&data, bound).unwrap();
            assert!(t.report().pass, "{:?}", t.report().witnesses);
            let irr = irreducible_count(2, bound as u32);
            for s in t.charts() {
                assert_eq!(s.len(), irr + 1);
            }
            // overlap: everything except <x> resp. <y>
            assert_eq!(t.identifications()[0].map.len(), irr);
            assert!(t.identifications()[0].escaped.is_empty());
            // closed points of P^1 of degree <= bound, plus the generic point
            assert_eq!(t.points().len(), irr + 2);
        }
        assert_eq!(irreducible_count(2, 3), 5);
        assert_eq!(trop_scheme(&data, 2).unwrap().points().len(), 5);
    }

    #[test]
    fn reversal_identifies_points() {
        let t = trop_scheme(&GluingData::projective_line("F2").unwrap(), 3).unwrap();
        let j = t.to_json();
        let map = &j["overlaps"][0]["map"];
        assert_eq!(map["0:<x^3 + x + 1>"], "1:<y^3 + y^2 + 1>");
        assert_eq!(map["0:<0>"], "1:<0>");
    }

    #[test]
    fn projective_line_over_q() {
        let t = trop_scheme(&GluingData::projective_line("Q").unwrap(), 2).unwrap();
        assert!(t.report().pass, "{:?}", t.report().witnesses);
        assert!(t.points().len() >= t.charts()[0].len());
    }

    #[test]
    fn single_chart_is_the_spectrum() {
        let data = GluingData::single_chart(RingDescriptor::Integers).unwrap();
        let t = trop_scheme(&data, 10).unwrap();
        assert!(t.report().pass);
        assert_eq!(t.points().len(), 5);
    }

    #[test]
    fn broken_cocycle_is_a_descent_error() {
        let text = r#"{"charts":[{"ring":"F2[x]"},{"ring":"F2[y]"}],
            "overlaps":[{"i":0,"j":1,"f_i":"x","f_j":"y"}],
            "transitions":[{"i":0,"j":1,"substitution":"1/y"},{"i":1,"j":0,"substitution":"1/x^3"}]}"#;
        let data = GluingData::from_json(text).unwrap();
        match trop_scheme(&data, 2) {
            Err(Error::Descent { i, j, k, .. }) => {
                assert_eq!(i, k);
                assert_ne!(i, j);
            }
            other => panic!("expected a descent error, got {other:?}"),
        }
    }

    #[test]
    fn missing_transition_is_rejected() {
        let text = r#"{"charts":[{"ring":"F2[x]"},{"ring":"F2[y]"}],
            "overlaps":[{"i":0,"j":1,"f_i":"x","f_j":"y"}],
            "transitions":[{"i":0,"j":1,"substitution":"1/y"}]}"#;
        assert!(matches!(GluingData::from_json(text), Err(Error::Structural(_))));
    }
}
