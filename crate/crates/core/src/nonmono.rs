//! The non-monotonic engine: partitions of the modal subformulas, the three
//! admissibility conditions, construction of the represented structure,
//! minimal-model enumeration, expansion signatures, and credulous/sceptical
//! entailment via the fresh-atom reductions.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::monosat;
use crate::propsat::{reading_of_formula, ExtAtom, PropProblem, Reading};
use crate::structures::{Precisification, SPStructure};
use crate::syntax::{Atom, Expression, Formula, StandpointName, Theory, RESERVED_FRESH_ATOM};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NonmonoError {
    #[error("not a partition of the modal subformulas: {0}")]
    NotAPartition(String),
    #[error("the partition does not satisfy {0}")]
    ConditionViolated(&'static str),
    #[error("query mentions the reserved atom `{}`", RESERVED_FRESH_ATOM)]
    ReservedAtomInQuery,
}

/// A partition of the modal subformulas: `phi` holds the boxes read as not
/// determined, `psi` those read as determined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub phi: Vec<Formula>,
    pub psi: Vec<Formula>,
}

impl Partition {
    /// Builds a partition from the set of determined boxes; errors unless
    /// `psi` is a subset of the theory's modal subformulas.
    pub fn from_psi(t: &Theory, psi: BTreeSet<Formula>) -> Result<Partition, NonmonoError> {
        let ms = t.modal_subformulas();
        for f in &psi {
            if !ms.contains(f) {
                return Err(NonmonoError::NotAPartition(format!(
                    "`{f}` is not a modal subformula of the theory"
                )));
            }
        }
        let phi = ms.iter().filter(|f| !psi.contains(f)).cloned().collect();
        let psi = ms.into_iter().filter(|f| psi.contains(f)).collect();
        Ok(Partition { phi, psi })
    }

    fn from_mask(ms: &[Formula], mask: u64) -> Partition {
        let mut phi = Vec::new();
        let mut psi = Vec::new();
        for (i, f) in ms.iter().enumerate() {
            if mask >> i & 1 == 1 {
                psi.push(f.clone());
            } else {
                phi.push(f.clone());
            }
        }
        Partition { phi, psi }
    }

    fn mask(&self, ms: &[Formula]) -> Result<u64, NonmonoError> {
        let mut mask = 0u64;
        let psi: BTreeSet<&Formula> = self.psi.iter().collect();
        let all: BTreeSet<&Formula> = self.phi.iter().chain(self.psi.iter()).collect();
        let ms_set: BTreeSet<&Formula> = ms.iter().collect();
        if all != ms_set || self.phi.len() + self.psi.len() != ms.len() {
            return Err(NonmonoError::NotAPartition(
                "phi and psi must split the modal subformulas exactly".into(),
            ));
        }
        for (i, f) in ms.iter().enumerate() {
            if psi.contains(f) {
                mask |= 1 << i;
            }
        }
        Ok(mask)
    }
}

/// Outcome of checking the three admissibility conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conditions {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.c1 && self.c2 && self.c3
    }
}

/// The propositional theory `Gamma_s = T + !Phi + Psi + Psi_s` over the
/// extended vocabulary.
#[derive(Debug, Clone)]
pub struct GammaTheory {
    pub standpoint: StandpointName,
    pub readings: Vec<Reading>,
}

struct Engine<'a> {
    t: &'a Theory,
    ms: Vec<Formula>,
    sp_of: Vec<StandpointName>,
    body_reading: Vec<Reading>,
    modal_atom: Vec<Reading>,
    t_readings: Vec<Reading>,
    sps: Vec<StandpointName>,
}

impl<'a> Engine<'a> {
    fn new(t: &'a Theory) -> Engine<'a> {
        let ms = t.modal_subformulas();
        let mut sp_of = Vec::new();
        let mut body_reading = Vec::new();
        let mut modal_atom = Vec::new();
        for m in &ms {
            let Formula::Box(s, body) = m else { unreachable!("modal subformulas are boxes") };
            sp_of.push(s.clone());
            body_reading.push(reading_of_formula(body));
            modal_atom.push(Reading::Atom(ExtAtom::Modal(m.clone())));
        }
        let t_readings =
            t.expressions().iter().map(crate::propsat::propositional_reading).collect();
        let sps = t.standpoints().iter().cloned().collect();
        Engine { t, ms, sp_of, body_reading, modal_atom, t_readings, sps }
    }

    /// `Gamma_s` for the first `decided` modal subformulas of the mask.
    fn gamma(&self, mask: u64, decided: usize, s: &StandpointName) -> Vec<Reading> {
        let mut readings = self.t_readings.clone();
        for i in 0..decided {
            if mask >> i & 1 == 1 {
                readings.push(self.modal_atom[i].clone());
                if self.t.closure().holds(s, &self.sp_of[i]) {
                    readings.push(self.body_reading[i].clone());
                }
            } else {
                readings.push(Reading::not(self.modal_atom[i].clone()));
            }
        }
        readings
    }

    fn c1(&self, mask: u64, decided: usize) -> bool {
        self.sps.iter().all(|s| {
            PropProblem::from_readings(&self.gamma(mask, decided, s)).solve().is_some()
        })
    }

    fn c2(&self, mask: u64) -> bool {
        let n = self.ms.len();
        for s in &self.sps {
            let gamma = self.gamma(mask, n, s);
            for i in 0..n {
                if mask >> i & 1 == 0 && self.t.closure().holds(&self.sp_of[i], s) {
                    let mut readings = gamma.clone();
                    readings.push(Reading::not(self.body_reading[i].clone()));
                    if PropProblem::from_readings(&readings).solve().is_none() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn with_negated_phi(&self, mask: u64) -> Theory {
        let extra: Vec<Expression> = (0..self.ms.len())
            .filter(|i| mask >> i & 1 == 0)
            .map(|i| Expression::Formula(Formula::not(self.ms[i].clone())))
            .collect();
        self.t.extended(extra)
    }

    fn c3(&self, mask: u64) -> bool {
        let t_phi = self.with_negated_phi(mask);
        (0..self.ms.len())
            .filter(|i| mask >> i & 1 == 1)
            .all(|i| monosat::entails_mono(&t_phi, &Expression::Formula(self.ms[i].clone())))
    }

    /// Depth-first search over partitions in ascending psi-bitmask order,
    /// pruning on partial C1 failure (the gamma theories only grow along a
    /// branch, so unsatisfiability is inherited by all completions).
    fn search(&self, mut visit: impl FnMut(u64) -> bool) {
        let n = self.ms.len();
        fn go(engine: &Engine, mask: u64, depth: usize, visit: &mut impl FnMut(u64) -> bool, stop: &mut bool) {
            if *stop {
                return;
            }
            let n = engine.ms.len();
            let decided = n - depth;
            if !engine.c1(mask, decided) {
                return;
            }
            if depth == 0 {
                if engine.c2(mask) && engine.c3(mask) && !visit(mask) {
                    *stop = true;
                }
                return;
            }
            let bit = depth - 1;
            go(engine, mask, depth - 1, visit, stop);
            go(engine, mask | (1 << bit), depth - 1, visit, stop);
        }
        let mut stop = false;
        go(self, 0, n, &mut visit, &mut stop);
    }
}

/// `Gamma_s` for a full partition: the theory readings, negative units for
/// `phi`, positive units for `psi`, and the bodies inherited through the
/// sharpening hierarchy.
pub fn gamma_theory(t: &Theory, p: &Partition, s: &StandpointName) -> Result<GammaTheory, NonmonoError> {
    let engine = Engine::new(t);
    let mask = p.mask(&engine.ms)?;
    Ok(GammaTheory { standpoint: s.clone(), readings: engine.gamma(mask, engine.ms.len(), s) })
}

/// Checks the three admissibility conditions for a partition.
pub fn check_conditions(t: &Theory, p: &Partition) -> Result<Conditions, NonmonoError> {
    let engine = Engine::new(t);
    let mask = p.mask(&engine.ms)?;
    Ok(Conditions {
        c1: engine.c1(mask, engine.ms.len()),
        c2: engine.c2(mask),
        c3: engine.c3(mask),
    })
}

/// Materialises the structure represented by a partition: per standpoint,
/// the inner valuations are the base-atom projections of the models of
/// `Gamma_s`; outer sets are empty. Requires the partition to satisfy the
/// first condition (otherwise some inner set would be empty).
pub fn build_structure(t: &Theory, p: &Partition) -> Result<SPStructure, NonmonoError> {
    let engine = Engine::new(t);
    let mask = p.mask(&engine.ms)?;
    if !engine.c1(mask, engine.ms.len()) {
        return Err(NonmonoError::ConditionViolated("C1"));
    }
    let atoms: Vec<Atom> = t.atoms().iter().cloned().collect();
    let mut inner: BTreeMap<StandpointName, BTreeSet<String>> = BTreeMap::new();
    let mut outer: BTreeMap<StandpointName, BTreeSet<String>> = BTreeMap::new();
    let mut precs: BTreeMap<String, BTreeSet<Atom>> = BTreeMap::new();
    for s in &engine.sps {
        let problem = PropProblem::from_readings(&engine.gamma(mask, engine.ms.len(), s));
        let mut ids = BTreeSet::new();
        for bits in 0u32..(1u32 << atoms.len()) {
            let assumptions: Vec<(ExtAtom, bool)> = atoms
                .iter()
                .enumerate()
                .map(|(i, a)| (ExtAtom::Base(a.clone()), bits >> i & 1 == 1))
                .collect();
            if problem.solve_with_assumptions(&assumptions).is_some() {
                let valuation: BTreeSet<Atom> = atoms
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> *i & 1 == 1)
                    .map(|(_, a)| a.clone())
                    .collect();
                let names: Vec<&str> = valuation.iter().map(Atom::name).collect();
                let id = format!("v{{{}}}", names.join(","));
                precs.entry(id.clone()).or_insert(valuation);
                ids.insert(id);
            }
        }
        inner.insert(s.clone(), ids);
        outer.insert(s.clone(), BTreeSet::new());
    }
    let precisifications = precs
        .into_iter()
        .map(|(id, valuation)| Precisification { id, valuation })
        .collect();
    Ok(SPStructure {
        atoms: t.atoms().clone(),
        standpoints: t.standpoints().clone(),
        precisifications,
        inner,
        outer,
    })
}

/// A minimal model, certified by its partition; the structure is
/// materialised on demand (it can be exponentially larger than the
/// certificate).
#[derive(Debug, Clone)]
pub struct MinimalModelCert {
    theory: Theory,
    pub partition: Partition,
}

impl MinimalModelCert {
    /// The expansion signature: the determined boxes.
    pub fn signature(&self) -> &[Formula] {
        &self.partition.psi
    }

    pub fn structure(&self) -> SPStructure {
        build_structure(&self.theory, &self.partition)
            .expect("certified partitions satisfy C1")
    }

    /// Whether the certified model globally satisfies an expression. For
    /// modal subformulas of the theory this coincides with psi-membership;
    /// for other expressions it decides membership in the represented
    /// expansion.
    pub fn supports(&self, e: &Expression) -> bool {
        self.structure()
            .models_expression(e)
            .expect("certificate structures carry the theory vocabulary")
    }

    pub fn to_json(&self, with_structure: bool) -> serde_json::Value {
        let mut obj = json!({
            "psi": self.partition.psi.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "phi": self.partition.phi.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        });
        if with_structure {
            let st = self.structure();
            obj["structure"] =
                serde_json::from_str(&st.to_json()).expect("structure JSON is valid");
        }
        obj
    }
}

/// Enumerates all partitions satisfying the three conditions, in ascending
/// psi-bitmask order over the canonical modal subformula order.
pub fn enumerate_minimal(t: &Theory) -> Vec<MinimalModelCert> {
    let engine = Engine::new(t);
    let mut out = Vec::new();
    engine.search(|mask| {
        out.push(MinimalModelCert {
            theory: t.clone(),
            partition: Partition::from_mask(&engine.ms, mask),
        });
        true
    });
    out
}

/// Existence of a minimal model, with early exit on the first certificate.
pub fn has_minimal_model(t: &Theory) -> bool {
    let engine = Engine::new(t);
    let mut found = false;
    engine.search(|_| {
        found = true;
        false
    });
    found
}

/// The expansion signature of a certified partition (its determined boxes);
/// errors unless the partition satisfies all three conditions.
pub fn expansion_signature(t: &Theory, p: &Partition) -> Result<BTreeSet<Formula>, NonmonoError> {
    let c = check_conditions(t, p)?;
    if !c.all() {
        return Err(NonmonoError::ConditionViolated(if !c.c1 {
            "C1"
        } else if !c.c2 {
            "C2"
        } else {
            "C3"
        }));
    }
    Ok(p.psi.iter().cloned().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryMode {
    Credulous,
    Sceptical,
}

/// Credulous/sceptical entailment via the fresh-atom reductions: the query
/// holds credulously iff the extended theory with the blocking implication
/// has a minimal model, and sceptically iff the dual extension has none.
pub fn entails_nonmono(t: &Theory, xi: &Formula, mode: QueryMode) -> Result<bool, NonmonoError> {
    if xi.atoms().iter().any(Atom::is_reserved) {
        return Err(NonmonoError::ReservedAtomInQuery);
    }
    let star = StandpointName::universal;
    let z = Formula::Atom(Atom::reserved(RESERVED_FRESH_ATOM));
    let not_boxed = |f: Formula| Formula::boxed(star(), Formula::not(Formula::boxed(star(), f)));
    let guard_z = not_boxed(z.clone());
    let xi_part = not_boxed(xi.clone());
    let antecedent = match mode {
        QueryMode::Credulous => Formula::and(guard_z, xi_part),
        QueryMode::Sceptical => Formula::and(guard_z, Formula::not(xi_part)),
    };
    let blocking =
        Expression::Formula(Formula::implies(antecedent, Formula::boxed(star(), z)));
    let extended = t.extended(vec![blocking]);
    let has = has_minimal_model(&extended);
    Ok(match mode {
        QueryMode::Credulous => has,
        QueryMode::Sceptical => !has,
    })
}

/// Direct evaluation against the enumerated minimal models (test surface
/// for the reduction): extends the vocabulary with the query's atoms before
/// partitioning, then checks the materialised structures.
pub fn entails_nonmono_direct(
    t: &Theory,
    xi: &Formula,
    mode: QueryMode,
) -> Result<bool, NonmonoError> {
    if xi.atoms().iter().any(Atom::is_reserved) {
        return Err(NonmonoError::ReservedAtomInQuery);
    }
    let t_ext = Theory::with_extra_atoms(t.expressions().to_vec(), xi.atoms());
    let certs = enumerate_minimal(&t_ext);
    let query = Expression::Formula(xi.clone());
    let mut verdicts = certs.iter().map(|c| {
        c.structure().models_expression(&query).expect("query vocabulary is included")
    });
    Ok(match mode {
        QueryMode::Credulous => verdicts.any(|b| b),
        QueryMode::Sceptical => verdicts.all(|b| b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::propsat::entails_prop;
    use crate::syntax::{parse_formula, parse_theory, Mode};

    fn theory(text: &str) -> Theory {
        parse_theory(text, Mode::Spt).unwrap()
    }

    fn t1() -> Theory {
        theory(
            "([D1] ovudis & [D1] ! [D1] ! pcos) -> [D1] pcos.
             ([D2] ovudis & [D2] ! [D2] ! (! preg) & [D2] ! [D2] ! fha) -> [D2] fha.
             [M] (pcos -> horm).
             [M] (fha -> ! horm).
             D1 <= M.
             D2 <= M.
             [*] ovudis.",
        )
    }

    fn t2() -> Theory {
        theory(
            "([D1] ovudis & [D1] ! [D1] ! pcos) -> [D1] pcos.
             ([D2] ovudis & [D2] ! [D2] ! (! preg) & [D2] ! [D2] ! fha) -> [D2] fha.
             [M] (pcos -> horm).
             [M] (fha -> ! horm).
             D1 <= M.
             D2 <= M.
             [*] ovudis.
             [*] preg.",
        )
    }

    fn sp(n: &str) -> StandpointName {
        StandpointName::new(n).unwrap()
    }

    #[test]
    fn empty_partition_gamma_is_the_reading_of_t() {
        let t = theory("[*] p -> q.");
        // all modal subformulas in phi
        let p = Partition::from_psi(&t, BTreeSet::new()).unwrap();
        let g = gamma_theory(&t, &p, &StandpointName::universal()).unwrap();
        // theory reading plus one negative unit for the lone box
        assert_eq!(g.readings.len(), t.expressions().len() + 1);
    }

    #[test]
    fn empty_theory_conditions_hold_vacuously() {
        let t = Theory::empty();
        let p = Partition::from_psi(&t, BTreeSet::new()).unwrap();
        let c = check_conditions(&t, &p).unwrap();
        assert!(c.c1 && c.c2 && c.c3);
    }

    #[test]
    fn t1_has_exactly_one_certificate() {
        let certs = enumerate_minimal(&t1());
        assert_eq!(certs.len(), 1);
        let cert = &certs[0];
        assert!(cert.supports(&Expression::Formula(parse_formula("[D1] (pcos & horm)").unwrap())));
        assert!(cert
            .supports(&Expression::Formula(parse_formula("[D2] (fha & ! horm)").unwrap())));
    }

    #[test]
    fn t2_certificate_signature() {
        let t = t2();
        let certs = enumerate_minimal(&t);
        assert_eq!(certs.len(), 1);
        let psi: BTreeSet<String> =
            certs[0].partition.psi.iter().map(|f| f.to_string()).collect();
        for required in ["[*] ovudis", "[*] preg", "[D1] pcos"] {
            assert!(psi.contains(required), "psi missing {required}: {psi:?}");
        }
        let phi: BTreeSet<String> =
            certs[0].partition.phi.iter().map(|f| f.to_string()).collect();
        assert!(phi.contains("[D2] fha"), "phi missing [D2] fha: {phi:?}");
        // the expansion contains [D1] horm even though it is not a modal
        // subformula of the theory
        assert!(certs[0].supports(&Expression::Formula(parse_formula("[D1] horm").unwrap())));
    }

    #[test]
    fn t2_gamma_examples() {
        let t = t2();
        let certs = enumerate_minimal(&t);
        let p = &certs[0].partition;
        // Gamma_D1 entails horm (via [D1] pcos in psi and the M-rule body)
        let g = gamma_theory(&t, p, &sp("D1")).unwrap();
        assert!(entails_prop(&g.readings, &reading_of_formula(&parse_formula("horm").unwrap())));
        // Gamma_M contains the bodies of the [*] elements of psi
        let g = gamma_theory(&t, p, &sp("M")).unwrap();
        let ovudis = reading_of_formula(&parse_formula("ovudis").unwrap());
        let preg = reading_of_formula(&parse_formula("preg").unwrap());
        assert!(g.readings.contains(&ovudis));
        assert!(g.readings.contains(&preg));
    }

    #[test]
    fn moving_a_determined_box_out_fails_conditions() {
        let t = t2();
        let certs = enumerate_minimal(&t);
        let good: BTreeSet<Formula> = certs[0].partition.psi.iter().cloned().collect();
        let d1_pcos = parse_formula("[D1] pcos").unwrap();
        assert!(good.contains(&d1_pcos));
        let mut smaller = good.clone();
        smaller.remove(&d1_pcos);
        let p = Partition::from_psi(&t, smaller).unwrap();
        let c = check_conditions(&t, &p).unwrap();
        assert!(!c.all(), "dropping [D1] pcos must break some condition");
    }

    #[test]
    fn gamma_psi_parts_nest_along_stated_sharpenings() {
        let t = t2();
        let certs = enumerate_minimal(&t);
        let p = &certs[0].partition;
        // D1 <= M stated: everything M inherits, D1 inherits too
        let gm = gamma_theory(&t, p, &sp("M")).unwrap();
        let gd1 = gamma_theory(&t, p, &sp("D1")).unwrap();
        for r in &gm.readings {
            assert!(gd1.readings.contains(r), "Gamma_D1 missing {r:?}");
        }
    }

    #[test]
    fn build_structure_over_free_vocabulary() {
        let t = Theory::with_extra_atoms(vec![], [Atom::new("p").unwrap()].into_iter().collect());
        let p = Partition::from_psi(&t, BTreeSet::new()).unwrap();
        let st = build_structure(&t, &p).unwrap();
        assert_eq!(st.precisifications.len(), 2); // {} and {p}
        assert!(st.is_s5());
        assert!(st.validate().is_empty());
        assert_eq!(st.inner_set(&StandpointName::universal()).len(), 2);
    }

    #[test]
    fn t2_structure_satisfies_determined_facts() {
        let t = t2();
        let certs = enumerate_minimal(&t);
        let st = certs[0].structure();
        assert!(st.validate().is_empty());
        assert!(st.is_s5());
        assert!(st.models_theory(&t).unwrap());
        for p in &st.precisifications {
            assert!(p.valuation.contains(&Atom::new("ovudis").unwrap()));
            assert!(p.valuation.contains(&Atom::new("preg").unwrap()));
        }
    }

    #[test]
    fn modality_free_style_theory() {
        let t = theory("[*] p -> [*] q. [*] p.");
        let certs = enumerate_minimal(&t);
        assert_eq!(certs.len(), 1);
        let psi: BTreeSet<String> =
            certs[0].partition.psi.iter().map(|f| f.to_string()).collect();
        assert_eq!(psi, ["[*] p".to_owned(), "[*] q".to_owned()].into_iter().collect());
    }

    #[test]
    fn self_supporting_theory_has_no_minimal_model() {
        let t = theory("([*] ! [*] ! p) -> [*] p. [*] p -> [*] ! p.");
        assert!(!has_minimal_model(&t));
        assert!(enumerate_minimal(&t).is_empty());
    }

    #[test]
    fn empty_theory_has_a_minimal_model() {
        assert!(has_minimal_model(&Theory::empty()));
    }

    #[test]
    fn expansion_signature_examples() {
        let t = Theory::empty();
        let p = Partition::from_psi(&t, BTreeSet::new()).unwrap();
        assert!(expansion_signature(&t, &p).unwrap().is_empty());

        let t = theory("[*] p.");
        let box_p = parse_formula("[*] p").unwrap();
        let p = Partition::from_psi(&t, [box_p.clone()].into_iter().collect()).unwrap();
        assert_eq!(expansion_signature(&t, &p).unwrap(), [box_p].into_iter().collect());
        // the all-phi partition is not certified
        let p = Partition::from_psi(&t, BTreeSet::new()).unwrap();
        assert!(expansion_signature(&t, &p).is_err());
    }

    #[test]
    fn example_queries_t1() {
        let t = t1();
        let q1 = parse_formula("[D1] (pcos & horm)").unwrap();
        let q2 = parse_formula("[D2] (fha & ! horm)").unwrap();
        assert!(entails_nonmono(&t, &q1, QueryMode::Sceptical).unwrap());
        assert!(entails_nonmono(&t, &q2, QueryMode::Sceptical).unwrap());
    }

    #[test]
    fn example_queries_t2() {
        let t = t2();
        let q1 = parse_formula("[D1] (pcos & horm)").unwrap();
        let q2 = parse_formula("[D2] (fha & ! horm)").unwrap();
        assert!(entails_nonmono(&t, &q1, QueryMode::Sceptical).unwrap());
        assert!(!entails_nonmono(&t, &q2, QueryMode::Credulous).unwrap());
    }

    #[test]
    fn plain_default_version_queries() {
        let t = theory(
            "([*] ovudis & [*] ! [*] ! pcos) -> [*] pcos.
             ([*] ovudis & [*] ! [*] ! (! preg) & [*] ! [*] ! fha) -> [*] fha.
             [*] (pcos -> horm).
             [*] (fha -> ! horm).
             [*] ovudis.",
        );
        assert_eq!(enumerate_minimal(&t).len(), 2);
        let q = parse_formula("pcos & horm").unwrap();
        assert!(entails_nonmono(&t, &q, QueryMode::Credulous).unwrap());
        assert!(!entails_nonmono(&t, &q, QueryMode::Sceptical).unwrap());
    }

    #[test]
    fn reserved_atom_rejected_in_queries() {
        let t = Theory::empty();
        let z = Formula::Atom(Atom::reserved(RESERVED_FRESH_ATOM));
        assert_eq!(
            entails_nonmono(&t, &z, QueryMode::Credulous),
            Err(NonmonoError::ReservedAtomInQuery)
        );
    }

    #[test]
    fn certificates_satisfy_their_signature_and_refute_phi() {
        let t = t1();
        for cert in enumerate_minimal(&t) {
            let st = cert.structure();
            for m in &cert.partition.psi {
                assert!(st.models_expression(&Expression::Formula(m.clone())).unwrap());
            }
            for m in &cert.partition.phi {
                assert!(!st.models_expression(&Expression::Formula(m.clone())).unwrap());
            }
        }
    }
}
