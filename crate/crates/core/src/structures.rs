//! Explicit S4F standpoint structures: validation against the structural
//! conditions, pointed and global satisfaction, and JSON persistence.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{Atom, Expression, Formula, StandpointName, Theory};

/// A precisification: an opaque id carrying a propositional valuation.
/// Identity is by id; duplicate valuations are legal and meaningful.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precisification {
    pub id: String,
    pub valuation: BTreeSet<Atom>,
}

/// An S4F standpoint structure: precisifications plus per-standpoint inner
/// and outer sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPStructure {
    pub atoms: BTreeSet<Atom>,
    pub standpoints: BTreeSet<StandpointName>,
    pub precisifications: Vec<Precisification>,
    pub inner: BTreeMap<StandpointName, BTreeSet<String>>,
    pub outer: BTreeMap<StandpointName, BTreeSet<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoPrecisifications,
    MissingUniversal,
    DuplicateId(String),
    UnknownId { standpoint: StandpointName, id: String },
    UnknownStandpointKey(StandpointName),
    UnknownAtom { id: String, atom: Atom },
    EmptyInner(StandpointName),
    InnerOuterOverlap { inner_of: StandpointName, outer_of: StandpointName, id: String },
    GlobalCoverGap(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPrecisifications => write!(f, "empty set of precisifications"),
            Violation::MissingUniversal => write!(f, "standpoint `*` missing"),
            Violation::DuplicateId(id) => write!(f, "duplicate precisification id `{id}`"),
            Violation::UnknownId { standpoint, id } => {
                write!(f, "unknown precisification id `{id}` referenced for `{standpoint}`")
            }
            Violation::UnknownStandpointKey(s) => {
                write!(f, "inner/outer entry for undeclared standpoint `{s}`")
            }
            Violation::UnknownAtom { id, atom } => {
                write!(f, "precisification `{id}` uses undeclared atom `{atom}`")
            }
            Violation::EmptyInner(s) => write!(f, "empty inner set for standpoint `{s}`"),
            Violation::InnerOuterOverlap { inner_of, outer_of, id } => write!(
                f,
                "precisification `{id}` is inner for `{inner_of}` and outer for `{outer_of}`"
            ),
            Violation::GlobalCoverGap(id) => {
                write!(f, "precisification `{id}` is neither inner-global nor outer-global")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("unknown precisification id `{0}`")]
    UnknownPrecisification(String),
    #[error("atom `{0}` is not in the structure's vocabulary")]
    UnknownAtom(Atom),
    #[error("standpoint `{0}` is not in the structure's vocabulary")]
    UnknownStandpoint(StandpointName),
}

#[derive(Debug, thiserror::Error)]
pub enum StructureIoError {
    #[error("invalid structure JSON: {0}")]
    Schema(String),
    #[error("structure violates the structural conditions: {0}")]
    Invalid(String),
}

impl SPStructure {
    pub fn inner_set(&self, s: &StandpointName) -> BTreeSet<String> {
        self.inner.get(s).cloned().unwrap_or_default()
    }

    pub fn outer_set(&self, s: &StandpointName) -> BTreeSet<String> {
        self.outer.get(s).cloned().unwrap_or_default()
    }

    pub fn valuation_of(&self, id: &str) -> Option<&BTreeSet<Atom>> {
        self.precisifications.iter().find(|p| p.id == id).map(|p| &p.valuation)
    }

    /// True iff every outer set is empty.
    pub fn is_s5(&self) -> bool {
        self.outer.values().all(BTreeSet::is_empty)
    }

    /// Checks all structural conditions; an empty list means the structure
    /// is well-formed.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.precisifications.is_empty() {
            out.push(Violation::NoPrecisifications);
        }
        if !self.standpoints.contains(&StandpointName::universal()) {
            out.push(Violation::MissingUniversal);
        }
        let mut ids = BTreeSet::new();
        for p in &self.precisifications {
            if !ids.insert(p.id.clone()) {
                out.push(Violation::DuplicateId(p.id.clone()));
            }
            for a in &p.valuation {
                if !self.atoms.contains(a) {
                    out.push(Violation::UnknownAtom { id: p.id.clone(), atom: a.clone() });
                }
            }
        }
        for map in [&self.inner, &self.outer] {
            for (s, members) in map {
                if !self.standpoints.contains(s) {
                    out.push(Violation::UnknownStandpointKey(s.clone()));
                }
                for id in members {
                    if !ids.contains(id) {
                        out.push(Violation::UnknownId { standpoint: s.clone(), id: id.clone() });
                    }
                }
            }
        }
        for s in &self.standpoints {
            if self.inner_set(s).is_empty() {
                out.push(Violation::EmptyInner(s.clone()));
            }
        }
        for s in &self.standpoints {
            let inner_s = self.inner_set(s);
            for u in &self.standpoints {
                let outer_u = self.outer_set(u);
                for id in inner_s.intersection(&outer_u) {
                    out.push(Violation::InnerOuterOverlap {
                        inner_of: s.clone(),
                        outer_of: u.clone(),
                        id: id.clone(),
                    });
                }
            }
        }
        let star = StandpointName::universal();
        let cover: BTreeSet<String> =
            self.inner_set(&star).union(&self.outer_set(&star)).cloned().collect();
        for p in &self.precisifications {
            if ids.contains(&p.id) && !cover.contains(&p.id) {
                out.push(Violation::GlobalCoverGap(p.id.clone()));
            }
        }
        out
    }

    /// Pointed satisfaction per the two-cluster semantics, computed via a
    /// bottom-up (subformula, precisification) truth table.
    pub fn satisfies_at(&self, at: &str, e: &Expression) -> Result<bool, EvalError> {
        let eval = Evaluator::build(self, e)?;
        let idx = eval
            .id_index
            .get(at)
            .copied()
            .ok_or_else(|| EvalError::UnknownPrecisification(at.to_owned()))?;
        Ok(eval.expression_at(idx, e))
    }

    /// Global satisfaction: the expression holds at every precisification.
    pub fn models_expression(&self, e: &Expression) -> Result<bool, EvalError> {
        let eval = Evaluator::build(self, e)?;
        Ok((0..self.precisifications.len()).all(|i| eval.expression_at(i, e)))
    }

    /// `models_theory`: global satisfaction of every expression of `T`.
    pub fn models_theory(&self, t: &Theory) -> Result<bool, EvalError> {
        for e in t.expressions() {
            if !self.models_expression(e)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&JsonStructure::from(self)).expect("structure serialises")
    }

    /// Parses and validates a structure from its JSON form.
    pub fn from_json(text: &str) -> Result<SPStructure, StructureIoError> {
        let raw: JsonStructure =
            serde_json::from_str(text).map_err(|e| StructureIoError::Schema(e.to_string()))?;
        let st = raw.into_structure().map_err(StructureIoError::Schema)?;
        let violations = st.validate();
        if violations.is_empty() {
            Ok(st)
        } else {
            let msgs: Vec<String> = violations.iter().map(Violation::to_string).collect();
            Err(StructureIoError::Invalid(msgs.join("; ")))
        }
    }
}

/// Bottom-up truth table over (subformula, precisification) pairs; this is
/// the polynomial-time model checking scheme.
struct Evaluator<'a> {
    st: &'a SPStructure,
    id_index: HashMap<&'a str, usize>,
    inner: BTreeMap<StandpointName, Vec<usize>>,
    outer: BTreeMap<StandpointName, Vec<usize>>,
    inner_global: Vec<bool>,
    truth: HashMap<(Formula, usize), bool>,
}

impl<'a> Evaluator<'a> {
    fn build(st: &'a SPStructure, e: &Expression) -> Result<Evaluator<'a>, EvalError> {
        for a in e.atoms() {
            if !st.atoms.contains(&a) {
                return Err(EvalError::UnknownAtom(a));
            }
        }
        for s in e.standpoints() {
            if !st.standpoints.contains(&s) {
                return Err(EvalError::UnknownStandpoint(s));
            }
        }
        let mut id_index = HashMap::new();
        for (i, p) in st.precisifications.iter().enumerate() {
            id_index.insert(p.id.as_str(), i);
        }
        let mut inner = BTreeMap::new();
        let mut outer = BTreeMap::new();
        for s in &st.standpoints {
            let collect = |map: &BTreeMap<StandpointName, BTreeSet<String>>| {
                let mut v: Vec<usize> = map
                    .get(s)
                    .into_iter()
                    .flatten()
                    .filter_map(|id| id_index.get(id.as_str()).copied())
                    .collect();
                v.sort_unstable();
                v
            };
            inner.insert(s.clone(), collect(&st.inner));
            outer.insert(s.clone(), collect(&st.outer));
        }
        let star = StandpointName::universal();
        let star_inner: BTreeSet<usize> =
            inner.get(&star).into_iter().flatten().copied().collect();
        let inner_global =
            (0..st.precisifications.len()).map(|i| star_inner.contains(&i)).collect();
        let mut ev = Evaluator { st, id_index, inner, outer, inner_global, truth: HashMap::new() };

        if let Expression::Formula(f) = e {
            let mut subs: Vec<Formula> = f.subformulas().into_iter().collect();
            subs.sort_by(|a, b| a.canonical_cmp(b));
            for sub in subs {
                for i in 0..st.precisifications.len() {
                    let v = ev.eval(&sub, i);
                    ev.truth.insert((sub.clone(), i), v);
                }
            }
        }
        Ok(ev)
    }

    fn expression_at(&self, idx: usize, e: &Expression) -> bool {
        match e {
            Expression::Formula(f) => self.lookup(f, idx),
            // Sharpening statements are point-independent set inclusions.
            Expression::Sharpening(s, u) => {
                let sub = |m: &BTreeMap<StandpointName, Vec<usize>>| {
                    let a: BTreeSet<usize> = m.get(s).into_iter().flatten().copied().collect();
                    let b: BTreeSet<usize> = m.get(u).into_iter().flatten().copied().collect();
                    a.is_subset(&b)
                };
                sub(&self.inner) && sub(&self.outer)
            }
        }
    }

    fn lookup(&self, f: &Formula, i: usize) -> bool {
        *self.truth.get(&(f.clone(), i)).expect("subformula evaluated before its parent")
    }

    fn eval(&self, f: &Formula, i: usize) -> bool {
        match f {
            Formula::Atom(a) => self.st.precisifications[i].valuation.contains(a),
            Formula::Bottom => false,
            Formula::Not(g) => !self.lookup(g, i),
            Formula::And(a, b) => self.lookup(a, i) && self.lookup(b, i),
            Formula::Or(a, b) => self.lookup(a, i) || self.lookup(b, i),
            Formula::Implies(a, b) => !self.lookup(a, i) || self.lookup(b, i),
            Formula::Box(s, g) => self.box_domain(s, i).all(|j| self.lookup(g, j)),
            Formula::Diamond(s, g) => self.box_domain(s, i).any(|j| self.lookup(g, j)),
        }
    }

    /// The precisifications a modality quantifies over at point `i`:
    /// inner-global points see `inner(s)`, all other points see
    /// `inner(s) + outer(s)`.
    fn box_domain(&self, s: &StandpointName, i: usize) -> impl Iterator<Item = usize> + '_ {
        let inner = self.inner.get(s).map(|v| v.as_slice()).unwrap_or(&[]);
        let outer = if self.inner_global[i] {
            &[]
        } else {
            self.outer.get(s).map(|v| v.as_slice()).unwrap_or(&[])
        };
        inner.iter().chain(outer.iter()).copied()
    }
}

// JSON schema:
// {"atoms":[..],"standpoints":[..],
//  "precisifications":[{"id":..,"valuation":[..]}..],
//  "inner":{sp:[id..]},"outer":{sp:[id..]}}
#[derive(Serialize, Deserialize)]
struct JsonStructure {
    atoms: Vec<String>,
    standpoints: Vec<String>,
    precisifications: Vec<JsonPrec>,
    inner: BTreeMap<String, Vec<String>>,
    outer: BTreeMap<String, Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct JsonPrec {
    id: String,
    valuation: Vec<String>,
}

impl From<&SPStructure> for JsonStructure {
    fn from(st: &SPStructure) -> JsonStructure {
        JsonStructure {
            atoms: st.atoms.iter().map(|a| a.name().to_owned()).collect(),
            standpoints: st.standpoints.iter().map(|s| s.name().to_owned()).collect(),
            precisifications: st
                .precisifications
                .iter()
                .map(|p| JsonPrec {
                    id: p.id.clone(),
                    valuation: p.valuation.iter().map(|a| a.name().to_owned()).collect(),
                })
                .collect(),
            inner: st
                .inner
                .iter()
                .map(|(s, ids)| (s.name().to_owned(), ids.iter().cloned().collect()))
                .collect(),
            outer: st
                .outer
                .iter()
                .map(|(s, ids)| (s.name().to_owned(), ids.iter().cloned().collect()))
                .collect(),
        }
    }
}

impl JsonStructure {
    fn into_structure(self) -> Result<SPStructure, String> {
        let atoms = self
            .atoms
            .iter()
            .map(|n| Atom::new(n).map_err(|e| e.msg))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let standpoints = self
            .standpoints
            .iter()
            .map(|n| StandpointName::new(n).map_err(|e| e.msg))
            .collect::<Result<BTreeSet<_>, _>>()?;
        let precisifications = self
            .precisifications
            .into_iter()
            .map(|p| {
                let valuation = p
                    .valuation
                    .iter()
                    .map(|n| Atom::new(n).map_err(|e| e.msg))
                    .collect::<Result<BTreeSet<_>, _>>()?;
                Ok(Precisification { id: p.id, valuation })
            })
            .collect::<Result<Vec<_>, String>>()?;
        let parse_map = |m: BTreeMap<String, Vec<String>>| {
            m.into_iter()
                .map(|(k, v)| {
                    let s = StandpointName::new(&k).map_err(|e| e.msg)?;
                    Ok((s, v.into_iter().collect::<BTreeSet<String>>()))
                })
                .collect::<Result<BTreeMap<_, _>, String>>()
        };
        Ok(SPStructure {
            atoms,
            standpoints,
            precisifications,
            inner: parse_map(self.inner)?,
            outer: parse_map(self.outer)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expression, parse_theory, Mode};

    fn atoms(names: &[&str]) -> BTreeSet<Atom> {
        names.iter().map(|n| Atom::new(n).unwrap()).collect()
    }

    fn sp(n: &str) -> StandpointName {
        StandpointName::new(n).unwrap()
    }

    /// The worked-example structure: eight precisifications in nested
    /// inner/outer boxes (also shipped as `fixtures/fig1.json`).
    pub(crate) fn example_structure() -> SPStructure {
        let vals: [(&str, &[&str]); 8] = [
            ("p1", &["ovudis", "preg", "horm", "pcos", "fha"]),
            ("p2", &["ovudis", "preg", "horm", "fha"]),
            ("p3", &["ovudis", "preg", "fha"]),
            ("p4", &["ovudis", "preg"]),
            ("p5", &["ovudis", "preg", "pcos"]),
            ("p6", &["ovudis", "preg", "pcos", "fha"]),
            ("p7", &["ovudis", "preg", "horm"]),
            ("p8", &["ovudis", "preg", "horm", "pcos"]),
        ];
        let precisifications = vals
            .iter()
            .map(|(id, v)| Precisification { id: (*id).to_owned(), valuation: atoms(v) })
            .collect();
        let ids = |xs: &[&str]| xs.iter().map(|s| (*s).to_owned()).collect::<BTreeSet<_>>();
        SPStructure {
            atoms: atoms(&["ovudis", "preg", "horm", "pcos", "fha"]),
            standpoints: [sp("*"), sp("M"), sp("D1"), sp("D2")].into_iter().collect(),
            precisifications,
            inner: [
                (sp("*"), ids(&["p5", "p6", "p7", "p8"])),
                (sp("M"), ids(&["p7", "p8"])),
                (sp("D2"), ids(&["p7", "p8"])),
                (sp("D1"), ids(&["p8"])),
            ]
            .into_iter()
            .collect(),
            outer: [
                (sp("*"), ids(&["p1", "p2", "p3", "p4"])),
                (sp("M"), ids(&["p3", "p4"])),
                (sp("D2"), ids(&["p3", "p4"])),
                (sp("D1"), BTreeSet::new()),
            ]
            .into_iter()
            .collect(),
        }
    }

    fn t2_text() -> &'static str {
        "([D1] ovudis & [D1] ! [D1] ! pcos) -> [D1] pcos.
         ([D2] ovudis & [D2] ! [D2] ! (! preg) & [D2] ! [D2] ! fha) -> [D2] fha.
         [M] (pcos -> horm).
         [M] (fha -> ! horm).
         D1 <= M.
         D2 <= M.
         [*] ovudis.
         [*] preg."
    }

    #[test]
    fn example_structure_is_valid() {
        assert!(example_structure().validate().is_empty());
    }

    #[test]
    fn empty_inner_is_a_violation() {
        let mut st = example_structure();
        st.inner.insert(sp("D1"), BTreeSet::new());
        assert!(st.validate().iter().any(|v| matches!(v, Violation::EmptyInner(s) if *s == sp("D1"))));
    }

    #[test]
    fn inner_outer_overlap_is_a_violation() {
        let mut st = example_structure();
        st.outer.get_mut(&sp("D1")).unwrap().insert("p8".to_owned());
        assert!(st
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::InnerOuterOverlap { id, .. } if id == "p8")));
    }

    #[test]
    fn caption_facts() {
        let st = example_structure();
        let e = parse_expression("[*] (preg & ovudis)").unwrap();
        assert!(st.models_expression(&e).unwrap());

        let boxed_horm = parse_expression("[M] horm").unwrap();
        assert!(st.satisfies_at("p5", &boxed_horm).unwrap());
        assert!(!st.satisfies_at("p1", &boxed_horm).unwrap());
        let conceivable = parse_expression("<M> (! horm)").unwrap();
        assert!(st.satisfies_at("p1", &conceivable).unwrap());

        let coincidental = parse_expression("D1 <= D2").unwrap();
        assert!(st.models_expression(&coincidental).unwrap());
    }

    #[test]
    fn example_structure_models_t2() {
        let t2 = parse_theory(t2_text(), Mode::Spt).unwrap();
        let st = example_structure();
        assert!(st.models_theory(&t2).unwrap());
    }

    #[test]
    fn any_valid_structure_models_empty_theory() {
        let st = example_structure();
        assert!(st.models_theory(&Theory::empty()).unwrap());
    }

    /// Mutual preference does not transfer satisfaction between two S4F
    /// structures: a copy with a duplicated precisification moved to an
    /// outer set loses a nested box formula.
    #[test]
    fn outer_copy_counterexample() {
        let base = SPStructure {
            atoms: atoms(&["p"]),
            standpoints: [sp("*"), sp("s"), sp("u")].into_iter().collect(),
            precisifications: vec![
                Precisification { id: "pe".into(), valuation: atoms(&[]) },
                Precisification { id: "pp".into(), valuation: atoms(&["p"]) },
            ],
            inner: [
                (sp("*"), ["pp".to_owned()].into_iter().collect()),
                (sp("s"), ["pp".to_owned()].into_iter().collect()),
                (sp("u"), ["pp".to_owned()].into_iter().collect()),
            ]
            .into_iter()
            .collect(),
            outer: [
                (sp("*"), ["pe".to_owned()].into_iter().collect()),
                (sp("s"), BTreeSet::new()),
                (sp("u"), ["pe".to_owned()].into_iter().collect()),
            ]
            .into_iter()
            .collect(),
        };
        assert!(base.validate().is_empty());
        let query = parse_expression("[s] [u] p").unwrap();
        assert!(base.models_expression(&query).unwrap());

        let mut copy = base.clone();
        copy.precisifications
            .push(Precisification { id: "pp2".into(), valuation: atoms(&["p"]) });
        copy.outer.get_mut(&sp("s")).unwrap().insert("pp2".to_owned());
        copy.outer.get_mut(&sp("*")).unwrap().insert("pp2".to_owned());
        assert!(copy.validate().is_empty());
        assert!(!copy.models_expression(&query).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let st = example_structure();
        let json = st.to_json();
        let st2 = SPStructure::from_json(&json).unwrap();
        assert_eq!(st, st2);
    }

    #[test]
    fn json_missing_key_is_schema_error() {
        let err = SPStructure::from_json(r#"{"atoms":[],"standpoints":["*"]}"#).unwrap_err();
        assert!(matches!(err, StructureIoError::Schema(_)));
    }

    #[test]
    fn json_structural_violation_reported_on_load() {
        let bad = r#"{
            "atoms": ["p"],
            "standpoints": ["*", "s"],
            "precisifications": [{"id": "w", "valuation": ["p"]}],
            "inner": {"*": ["w"], "s": []},
            "outer": {"*": [], "s": []}
        }"#;
        let err = SPStructure::from_json(bad).unwrap_err();
        assert!(matches!(err, StructureIoError::Invalid(_)));
    }

    /// Renaming precisification ids never changes any verdict.
    #[test]
    fn id_renaming_is_invisible() {
        let st = example_structure();
        let mut renamed = st.clone();
        let rename = |id: &str| format!("x_{id}");
        for p in &mut renamed.precisifications {
            p.id = rename(&p.id);
        }
        for map in [&mut renamed.inner, &mut renamed.outer] {
            for v in map.values_mut() {
                *v = v.iter().map(|id| rename(id)).collect();
            }
        }
        let t2 = parse_theory(t2_text(), Mode::Spt).unwrap();
        assert_eq!(st.models_theory(&t2).unwrap(), renamed.models_theory(&t2).unwrap());
        let q = parse_expression("[M] horm").unwrap();
        assert_eq!(
            st.satisfies_at("p1", &q).unwrap(),
            renamed.satisfies_at("x_p1", &q).unwrap()
        );
    }

    #[test]
    fn vocabulary_mismatch_is_an_error() {
        let st = example_structure();
        let q = parse_expression("[M] unknown_atom").unwrap();
        assert!(matches!(st.satisfies_at("p1", &q), Err(EvalError::UnknownAtom(_))));
        let q = parse_expression("[Q] horm").unwrap();
        assert!(matches!(st.satisfies_at("p1", &q), Err(EvalError::UnknownStandpoint(_))));
        let q = parse_expression("[M] horm").unwrap();
        assert!(matches!(
            st.satisfies_at("p99", &q),
            Err(EvalError::UnknownPrecisification(_))
        ));
    }
}
