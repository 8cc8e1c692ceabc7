use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::Semiring;
use crate::error::{Error, Result};

/// A semiring given by explicit addition and multiplication tables.
///
/// Elements are indices into `labels`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemiring {
    labels: Vec<String>,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    zero: usize,
    one: usize,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    carrier: Vec<String>,
    add: Vec<Vec<String>>,
    mul: Vec<Vec<String>>,
    zero: String,
    one: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    AddCommutative,
    AddAssociative,
    MulCommutative,
    MulAssociative,
    AddIdentity,
    MulIdentity,
    ZeroAbsorbing,
    Distributive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<String>,
}

/// Every violated axiom, with one witness per failing tuple.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<AxiomViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violates(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }
}

/// Result of the lattice-ordered semiring test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoCheck {
    pub simple: bool,
    /// A pair without a greatest lower bound, if any.
    pub missing_meet: Option<(usize, usize)>,
}

impl LoCheck {
    pub fn holds(&self) -> bool {
        self.simple && self.missing_meet.is_none()
    }
}

impl FiniteSemiring {
    /// Builds a semiring from index tables, checking only the table shape.
    ///
    /// The semiring axioms are not enforced here; use
    /// [`check_semiring_axioms`](Self::check_semiring_axioms).
    pub fn new(
        labels: Vec<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Structural("empty carrier".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::Structural(format!("duplicate label {l:?}")));
            }
        }
        for (name, table) in [("add", &add), ("mul", &mul)] {
            if table.len() != n || table.iter().any(|row| row.len() != n) {
                return Err(Error::Structural(format!("{name} table is not {n}x{n}")));
            }
            if table.iter().flatten().any(|&x| x >= n) {
                return Err(Error::Structural(format!("{name} table has an out-of-range entry")));
            }
        }
        if zero >= n || one >= n {
            return Err(Error::Structural("zero or one out of range".into()));
        }
        Ok(FiniteSemiring {
            labels,
            add,
            mul,
            zero,
            one,
        })
    }

    /// Builds a semiring by evaluating operations on `0..n`.
    pub fn from_fns(
        labels: Vec<String>,
        add: impl Fn(usize, usize) -> usize,
        mul: impl Fn(usize, usize) -> usize,
        zero: usize,
        one: usize,
    ) -> Result<Self> {
        let n = labels.len();
        let add = (0..n).map(|a| (0..n).map(|b| add(a, b)).collect()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| mul(a, b)).collect()).collect();
        Self::new(labels, add, mul, zero, one)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: TableJson =
            serde_json::from_str(text).map_err(|e| Error::Structural(e.to_string()))?;
        let index: HashMap<&str, usize> = raw
            .carrier
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| Error::Structural(format!("unknown label {l:?}")))
        };
        let convert = |t: &Vec<Vec<String>>| -> Result<Vec<Vec<usize>>> {
            t.iter()
                .map(|row| row.iter().map(|l| lookup(l)).collect())
                .collect()
        };
        let add = convert(&raw.add)?;
        let mul = convert(&raw.mul)?;
        let zero = lookup(&raw.zero)?;
        let one = lookup(&raw.one)?;
        Self::new(raw.carrier.clone(), add, mul, zero, one)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let names = |t: &Vec<Vec<usize>>| -> Vec<Vec<String>> {
            t.iter()
                .map(|row| row.iter().map(|&x| self.labels[x].clone()).collect())
                .collect()
        };
        serde_json::to_value(TableJson {
            carrier: self.labels.clone(),
            add: names(&self.add),
            mul: names(&self.mul),
            zero: self.labels[self.zero].clone(),
            one: self.labels[self.one].clone(),
        })
        .expect("tables serialize")
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn zero_index(&self) -> usize {
        self.zero
    }

    pub fn one_index(&self) -> usize {
        self.one
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size()
    }

    #[inline]
    pub fn plus(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    #[inline]
    pub fn times(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.add[a][b] == b
    }

    /// Exhaustive check of the commutative semiring axioms.
    pub fn check_semiring_axioms(&self) -> ValidationReport {
        let n = self.size();
        let mut report = ValidationReport::default();
        let mut fail = |axiom: Axiom, w: &[usize]| {
            report.violations.push(AxiomViolation {
                axiom,
                witness: w.iter().map(|&x| self.labels[x].clone()).collect(),
            });
        };
        for a in 0..n {
            if self.plus(a, self.zero) != a {
                fail(Axiom::AddIdentity, &[a]);
            }
            if self.times(a, self.one) != a {
                fail(Axiom::MulIdentity, &[a]);
            }
            if self.times(a, self.zero) != self.zero {
                fail(Axiom::ZeroAbsorbing, &[a]);
            }
            for b in 0..n {
                if self.plus(a, b) != self.plus(b, a) {
                    fail(Axiom::AddCommutative, &[a, b]);
                }
                if self.times(a, b) != self.times(b, a) {
                    fail(Axiom::MulCommutative, &[a, b]);
                }
                for c in 0..n {
                    if self.plus(self.plus(a, b), c) != self.plus(a, self.plus(b, c)) {
                        fail(Axiom::AddAssociative, &[a, b, c]);
                    }
                    if self.times(self.times(a, b), c) != self.times(a, self.times(b, c)) {
                        fail(Axiom::MulAssociative, &[a, b, c]);
                    }
                    if self.times(a, self.plus(b, c))
                        != self.plus(self.times(a, b), self.times(a, c))
                    {
                        fail(Axiom::Distributive, &[a, b, c]);
                    }
                }
            }
        }
        report
    }

    pub fn is_idempotent(&self) -> bool {
        self.elements().all(|a| self.plus(a, a) == a)
    }

    pub fn is_simple(&self) -> bool {
        self.elements().all(|a| self.plus(a, self.one) == self.one)
    }

    /// Greatest lower bound of `a` and `b` in the natural order, if it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lower: Vec<usize> = self
            .elements()
            .filter(|&m| self.leq(m, a) && self.leq(m, b))
            .collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&l| self.leq(l, m)))
    }

    /// Simple, and every pair has a greatest lower bound.
    pub fn is_lo_semiring(&self) -> LoCheck {
        let simple = self.is_simple();
        let mut missing_meet = None;
        'outer: for a in self.elements() {
            for b in a..self.size() {
                if self.meet(a, b).is_none() {
                    missing_meet = Some((a, b));
                    break 'outer;
                }
            }
        }
        LoCheck {
            simple,
            missing_meet,
        }
    }

    /// Elements with a multiplicative inverse.
    pub fn units(&self) -> Vec<usize> {
        self.elements()
            .filter(|&a| self.elements().any(|b| self.times(a, b) == self.one))
            .collect()
    }

    /// Relabels elements; used when building derived semirings.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size() {
            return Err(Error::Structural("label count mismatch".into()));
        }
        self.labels = labels;
        Self::new(self.labels, self.add, self.mul, self.zero, self.one)
    }
}

impl Semiring for FiniteSemiring {
    type Elem = usize;
    fn zero(&self) -> usize {
        self.zero
    }
    fn one(&self) -> usize {
        self.one
    }
    fn add(&self, a: &usize, b: &usize) -> usize {
        self.add[*a][*b]
    }
    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.mul[*a][*b]
    }
    fn contains(&self, a: &usize) -> bool {
        *a < self.size()
    }
    fn name(&self) -> String {
        format!("finite[{}]", self.labels.join(","))
    }
}

/// A localization `V⁻¹S` of a finite semiring with its structure map.
#[derive(Debug, Clone)]
pub struct Localization {
    pub semiring: FiniteSemiring,
    /// Class of `s/v` at `class[s][k]` where `v = denominators[k]`; `denominators[0]` is 1.
    pub class: Vec<Vec<usize>>,
    pub denominators: Vec<usize>,
}

impl Localization {
    /// The structure map `s ↦ s/1`.
    pub fn map(&self, s: usize) -> usize {
        self.class[s][0]
    }
}

/// Fraction semiring of `s` at the multiplicative subset `v`.
///
/// Pairs `(a, x)`, `(b, y)` are identified when `t·y·a = t·x·b` for some
/// `t ∈ v`; classes are found by union-find over all pairs.
pub fn localize_semiring(s: &FiniteSemiring, v: &[usize]) -> Result<Localization> {
    if v.is_empty() {
        return Err(Error::Domain("multiplicative set is empty".into()));
    }
    if v.iter().any(|&x| x >= s.size()) {
        return Err(Error::Domain("multiplicative set has foreign elements".into()));
    }
    if !v.contains(&s.one) {
        return Err(Error::Domain("multiplicative set lacks 1".into()));
    }
    for &a in v {
        for &b in v {
            if !v.contains(&s.times(a, b)) {
                return Err(Error::Domain(format!(
                    "multiplicative set not closed: {}*{}",
                    s.label(a),
                    s.label(b)
                )));
            }
        }
    }
    let mut dens: Vec<usize> = v.to_vec();
    dens.sort_unstable();
    dens.dedup();
    // one first, so pairs (s, 1) give class representatives
    let pos1 = dens.iter().position(|&x| x == s.one).unwrap();
    dens.swap(0, pos1);

    let n = s.size();
    let m = dens.len();
    let id = |a: usize, k: usize| a * m + k;
    let mut parent: Vec<usize> = (0..n * m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let nx = p[c];
            p[c] = r;
            c = nx;
        }
        r
    }
    for a in 0..n {
        for (ka, &x) in dens.iter().enumerate() {
            for b in 0..n {
                for (kb, &y) in dens.iter().enumerate() {
                    let related = dens
                        .iter()
                        .any(|&t| s.times(t, s.times(y, a)) == s.times(t, s.times(x, b)));
                    if related {
                        let (ra, rb) = (find(&mut parent, id(a, ka)), find(&mut parent, id(b, kb)));
                        if ra != rb {
                            parent[ra] = rb;
                        }
                    }
                }
            }
        }
    }
    // number classes in order of first appearance
    let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut reps: Vec<(usize, usize)> = Vec::new();
    let mut class = vec![vec![0; m]; n];
    for a in 0..n {
        for k in 0..m {
            let r = find(&mut parent, id(a, k));
            let c = *class_of_root.entry(r).or_insert_with(|| {
                reps.push((a, k));
                reps.len() - 1
            });
            class[a][k] = c;
        }
    }
    let labels: Vec<String> = reps
        .iter()
        .map(|&(a, k)| {
            if dens[k] == s.one {
                s.label(a).to_string()
            } else {
                format!("{}/{}", s.label(a), s.label(dens[k]))
            }
        })
        .collect();
    let c = reps.len();
    let mut add = vec![vec![0; c]; c];
    let mut mul = vec![vec![0; c]; c];
    for i in 0..c {
        for j in 0..c {
            let (a, ka) = reps[i];
            let (b, kb) = reps[j];
            let (x, y) = (dens[ka], dens[kb]);
            let den = s.times(x, y);
            let kd = dens.iter().position(|&d| d == den).expect("closed");
            let num = s.plus(s.times(a, y), s.times(b, x));
            add[i][j] = class[num][kd];
            mul[i][j] = class[s.times(a, b)][kd];
        }
    }
    let zero = class[s.zero][0];
    let one = class[s.one][0];
    let semiring = FiniteSemiring::new(labels, add, mul, zero, one)?;
    Ok(Localization {
        semiring,
        class,
        denominators: dens,
    })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    use crate::semiring::catalogue::{chain, truncated_naturals as truncated_nat};

    #[test]
    fn boolean_is_a_semiring() {
        let b = super::super::Boolean::as_finite();
        assert!(b.check_semiring_axioms().is_ok());
        assert!(b.is_idempotent() && b.is_simple() && b.is_lo_semiring().holds());
    }

    #[test]
    fn chain_is_a_simple_lattice() {
        let c = chain(3);
        assert!(c.check_semiring_axioms().is_ok());
        assert!(c.is_lo_semiring().holds());
    }

    #[test]
    fn truncated_naturals_are_not_idempotent() {
        let s = truncated_nat(4);
        assert!(s.check_semiring_axioms().is_ok());
        assert!(!s.is_idempotent());
    }

    #[test]
    fn nondistributive_table_reports_a_triple() {
        // max as addition, but multiplication by "a" sends everything to a
        let labels = vec!["0".into(), "a".into(), "1".into()];
        let s = FiniteSemiring::from_fns(
            labels,
            |a, b| a.max(b),
            |a, b| match (a, b) {
                (0, _) | (_, 0) => 0,
                (1, _) | (_, 1) => 1,
                _ => 2,
            },
            0,
            2,
        )
        .unwrap();
        assert!(s.check_semiring_axioms().is_ok());

        let bad = FiniteSemiring::new(
            vec!["0".into(), "a".into(), "1".into()],
            vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 2, 2]],
            vec![vec![0, 0, 0], vec![0, 2, 1], vec![0, 1, 2]],
            0,
            2,
        )
        .unwrap();
        let report = bad.check_semiring_axioms();
        assert!(report.violates(Axiom::Distributive));
        let w = report
            .violations
            .iter()
            .find(|v| v.axiom == Axiom::Distributive)
            .unwrap();
        assert_eq!(w.witness.len(), 3);
    }

    #[test]
    fn max_plus_fragment_is_not_simple() {
        // {-inf, 0, 1} under (max, +) saturated at 1: the unit 0 is not the top
        let labels = vec!["-inf".into(), "0".into(), "1".into()];
        let s = FiniteSemiring::from_fns(
            labels,
            |a, b| a.max(b),
            |a, b| if a == 0 || b == 0 { 0 } else { (a + b - 1).min(2) },
            0,
            1,
        )
        .unwrap();
        assert!(s.check_semiring_axioms().is_ok());
        assert!(s.is_idempotent());
        assert!(!s.is_simple());
        assert_ne!(s.plus(2, 1), 1);
    }

    #[test]
    fn structural_errors() {
        let ragged = r#"{"carrier":["0","1"],"add":[["0","1"],["1"]],"mul":[["0","0"],["0","1"]],"zero":"0","one":"1"}"#;
        assert!(matches!(
            FiniteSemiring::from_json_str(ragged),
            Err(Error::Structural(_))
        ));
        let unknown = r#"{"carrier":["0","1"],"add":[["0","1"],["1","2"]],"mul":[["0","0"],["0","1"]],"zero":"0","one":"1"}"#;
        assert!(matches!(
            FiniteSemiring::from_json_str(unknown),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let c = chain(4);
        let text = c.to_json().to_string();
        assert_eq!(FiniteSemiring::from_json_str(&text).unwrap(), c);
    }

    #[test]
    fn localize_chain_at_middle() {
        let c = chain(3);
        let loc = localize_semiring(&c, &[1, 2]).unwrap();
        assert_eq!(loc.semiring.size(), 2);
        assert!(loc.semiring.check_semiring_axioms().is_ok());
        assert!(loc.semiring.is_idempotent());
        assert_eq!(loc.map(1), loc.map(2));
        assert_ne!(loc.map(0), loc.map(2));
    }

    #[test]
    fn localize_rejects_bad_sets() {
        let c = chain(3);
        assert!(localize_semiring(&c, &[]).is_err());
        assert!(localize_semiring(&c, &[1]).is_err());
        assert!(localize_semiring(&c, &[0, 1, 2]).is_ok());
        assert_eq!(localize_semiring(&c, &[0, 1, 2]).unwrap().semiring.size(), 1);
    }

    #[test]
    fn localize_at_one_is_identity() {
        let c = chain(4);
        let loc = localize_semiring(&c, &[3]).unwrap();
        assert_eq!(loc.semiring.size(), 4);
    }

    #[test]
    fn units_of_chain_and_boolean() {
        assert_eq!(chain(3).units(), vec![2]);
        assert_eq!(truncated_nat(3).units(), vec![1]);
    }

    /// Join table on `a, b < c < 1` with no common lower bound of `a` and `b`.
    /// No valid semiring has this shape, since 0 is always the bottom.
    pub(crate) fn missing_meet_table() -> FiniteSemiring {
        let join = |x: usize, y: usize| match (x.min(y), x.max(y)) {
            (0, 1) => 2,
            (p, q) if p == q => p,
            (_, q) => q,
        };
        FiniteSemiring::from_fns(
            vec!["a".into(), "b".into(), "c".into(), "1".into()],
            join,
            |x, y| x.min(y),
            0,
            3,
        )
        .unwrap()
    }

    #[test]
    fn missing_meet_is_reported() {
        let s = missing_meet_table();
        let lo = s.is_lo_semiring();
        assert!(lo.simple);
        assert_eq!(lo.missing_meet, Some((0, 1)));
        assert!(!s.check_semiring_axioms().is_ok());
    }
}
