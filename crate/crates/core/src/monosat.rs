//! Monotonic satisfiability and entailment via a bounded-structure SAT
//! encoding. The small model property bounds the number of precisifications
//! a satisfiable theory needs, so a fixed number of slots suffices: slot
//! variables describe valuations and inner/outer memberships, and truth
//! variables mirror the two-case box semantics.

use std::collections::{BTreeMap, BTreeSet};

use crate::propsat::{Cnf, Lit, Var};
use crate::structures::{Precisification, SPStructure};
use crate::syntax::{Atom, Expression, Formula, StandpointName, Theory};

/// The CNF encoding of "some structure with `n` precisifications models the
/// theory", with decoding maps back to slot assignments.
pub struct BoundedEncoding {
    pub n: usize,
    cnf: Cnf,
    atoms: Vec<Atom>,
    standpoints: Vec<StandpointName>,
    val: Vec<Vec<Var>>,          // [slot][atom]
    inn: Vec<Vec<Var>>,          // [sp][slot]
    out: Vec<Vec<Var>>,          // [sp][slot]
    tru: Vec<Vec<Var>>,          // [slot][formula]
    formulas: Vec<Formula>,      // normalised subformula closure, parents last
    formula_index: BTreeMap<Formula, usize>,
}

impl BoundedEncoding {
    /// Encodes the theory over `n` slots. `extra_formulas` join the
    /// subformula closure without being asserted (used for queries).
    pub fn new(t: &Theory, extra_formulas: &[Formula], n: usize) -> BoundedEncoding {
        let atoms: Vec<Atom> = {
            let mut set = t.atoms().clone();
            for f in extra_formulas {
                set.extend(f.atoms());
            }
            set.into_iter().collect()
        };
        let standpoints: Vec<StandpointName> = {
            let mut set = t.standpoints().clone();
            for f in extra_formulas {
                set.extend(f.standpoints());
            }
            set.into_iter().collect()
        };

        let mut closure: BTreeSet<Formula> = BTreeSet::new();
        let mut roots = Vec::new();
        for f in t.normalized_formulas() {
            closure.extend(f.subformulas());
            roots.push(f);
        }
        for f in extra_formulas {
            let nf = f.normalize_diamonds();
            closure.extend(nf.subformulas());
        }
        let mut formulas: Vec<Formula> = closure.into_iter().collect();
        formulas.sort_by(|a, b| a.canonical_cmp(b));
        let formula_index: BTreeMap<Formula, usize> =
            formulas.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();

        let mut cnf = Cnf::default();
        let val: Vec<Vec<Var>> =
            (0..n).map(|_| atoms.iter().map(|_| cnf.new_var()).collect()).collect();
        let inn: Vec<Vec<Var>> =
            standpoints.iter().map(|_| (0..n).map(|_| cnf.new_var()).collect()).collect();
        let out: Vec<Vec<Var>> =
            standpoints.iter().map(|_| (0..n).map(|_| cnf.new_var()).collect()).collect();
        let tru: Vec<Vec<Var>> =
            (0..n).map(|_| formulas.iter().map(|_| cnf.new_var()).collect()).collect();

        let mut enc = BoundedEncoding {
            n,
            cnf,
            atoms,
            standpoints,
            val,
            inn,
            out,
            tru,
            formulas,
            formula_index,
        };
        enc.structural_clauses(t);
        enc.truth_clauses();
        for root in &roots {
            let fi = enc.formula_index[root];
            for i in 0..n {
                let l = Lit::pos(enc.tru[i][fi]);
                enc.cnf.add_clause(vec![l]);
            }
        }
        enc
    }

    fn sp_index(&self, s: &StandpointName) -> usize {
        self.standpoints.iter().position(|x| x == s).expect("standpoint in vocabulary")
    }

    fn star_index(&self) -> usize {
        self.sp_index(&StandpointName::universal())
    }

    fn structural_clauses(&mut self, t: &Theory) {
        let n = self.n;
        let star = self.star_index();
        // nonempty inner set per standpoint
        for s in 0..self.standpoints.len() {
            let clause: Vec<Lit> = (0..n).map(|i| Lit::pos(self.inn[s][i])).collect();
            self.cnf.add_clause(clause);
        }
        // inner and outer sets are disjoint across standpoints
        for s in 0..self.standpoints.len() {
            for u in 0..self.standpoints.len() {
                for i in 0..n {
                    self.cnf
                        .add_clause(vec![Lit::neg(self.inn[s][i]), Lit::neg(self.out[u][i])]);
                }
            }
        }
        // the universal standpoint covers every slot
        for i in 0..n {
            self.cnf.add_clause(vec![Lit::pos(self.inn[star][i]), Lit::pos(self.out[star][i])]);
        }
        // stated sharpenings hold as slotwise inclusions
        for (s, u) in t.sharpening_statements() {
            let (si, ui) = (self.sp_index(&s), self.sp_index(&u));
            for i in 0..n {
                self.cnf.add_clause(vec![Lit::neg(self.inn[si][i]), Lit::pos(self.inn[ui][i])]);
                self.cnf.add_clause(vec![Lit::neg(self.out[si][i]), Lit::pos(self.out[ui][i])]);
            }
        }
    }

    fn truth_clauses(&mut self) {
        let n = self.n;
        let star = self.star_index();
        for fi in 0..self.formulas.len() {
            match self.formulas[fi].clone() {
                Formula::Atom(a) => {
                    let ai = self.atoms.iter().position(|x| *x == a).unwrap();
                    for i in 0..n {
                        let t = Lit::pos(self.tru[i][fi]);
                        let v = Lit::pos(self.val[i][ai]);
                        self.cnf.add_clause(vec![t.negated(), v]);
                        self.cnf.add_clause(vec![t, v.negated()]);
                    }
                }
                Formula::Bottom => {
                    for i in 0..n {
                        self.cnf.add_clause(vec![Lit::neg(self.tru[i][fi])]);
                    }
                }
                Formula::Not(g) => {
                    let gi = self.formula_index[g.as_ref()];
                    for i in 0..n {
                        let t = Lit::pos(self.tru[i][fi]);
                        let tg = Lit::pos(self.tru[i][gi]);
                        self.cnf.add_clause(vec![t.negated(), tg.negated()]);
                        self.cnf.add_clause(vec![t, tg]);
                    }
                }
                Formula::And(a, b) => {
                    let (ai, bi) = (self.formula_index[a.as_ref()], self.formula_index[b.as_ref()]);
                    for i in 0..n {
                        let t = Lit::pos(self.tru[i][fi]);
                        let ta = Lit::pos(self.tru[i][ai]);
                        let tb = Lit::pos(self.tru[i][bi]);
                        self.cnf.add_clause(vec![t.negated(), ta]);
                        self.cnf.add_clause(vec![t.negated(), tb]);
                        self.cnf.add_clause(vec![t, ta.negated(), tb.negated()]);
                    }
                }
                Formula::Or(a, b) => {
                    let (ai, bi) = (self.formula_index[a.as_ref()], self.formula_index[b.as_ref()]);
                    for i in 0..n {
                        let t = Lit::pos(self.tru[i][fi]);
                        let ta = Lit::pos(self.tru[i][ai]);
                        let tb = Lit::pos(self.tru[i][bi]);
                        self.cnf.add_clause(vec![t.negated(), ta, tb]);
                        self.cnf.add_clause(vec![t, ta.negated()]);
                        self.cnf.add_clause(vec![t, tb.negated()]);
                    }
                }
                Formula::Implies(a, b) => {
                    let (ai, bi) = (self.formula_index[a.as_ref()], self.formula_index[b.as_ref()]);
                    for i in 0..n {
                        let t = Lit::pos(self.tru[i][fi]);
                        let ta = Lit::pos(self.tru[i][ai]);
                        let tb = Lit::pos(self.tru[i][bi]);
                        self.cnf.add_clause(vec![t.negated(), ta.negated(), tb]);
                        self.cnf.add_clause(vec![t, ta]);
                        self.cnf.add_clause(vec![t, tb.negated()]);
                    }
                }
                Formula::Box(s, g) => {
                    let si = self.sp_index(&s);
                    let gi = self.formula_index[g.as_ref()];
                    // ia <-> conj_j (inn(s,j) -> tru(j,g))
                    // oa <-> conj_j (inn(s,j) | out(s,j) -> tru(j,g))
                    let ia = self.cnf.new_var();
                    let oa = self.cnf.new_var();
                    let mut ia_back = vec![Lit::pos(ia)];
                    let mut oa_back = vec![Lit::pos(oa)];
                    for j in 0..n {
                        let member_in = Lit::pos(self.inn[si][j]);
                        let member_out = Lit::pos(self.out[si][j]);
                        let tg = Lit::pos(self.tru[j][gi]);
                        self.cnf.add_clause(vec![Lit::neg(ia), member_in.negated(), tg]);
                        self.cnf.add_clause(vec![Lit::neg(oa), member_in.negated(), tg]);
                        self.cnf.add_clause(vec![Lit::neg(oa), member_out.negated(), tg]);
                        // witness variables for the failure directions
                        let wi = self.cnf.new_var();
                        self.cnf.add_clause(vec![Lit::neg(wi), member_in]);
                        self.cnf.add_clause(vec![Lit::neg(wi), tg.negated()]);
                        ia_back.push(Lit::pos(wi));
                        let wo = self.cnf.new_var();
                        self.cnf.add_clause(vec![Lit::neg(wo), member_in, member_out]);
                        self.cnf.add_clause(vec![Lit::neg(wo), tg.negated()]);
                        oa_back.push(Lit::pos(wo));
                    }
                    self.cnf.add_clause(ia_back);
                    self.cnf.add_clause(oa_back);
                    for i in 0..n {
                        let t = Lit::pos(self.tru[i][fi]);
                        let gin = Lit::pos(self.inn[star][i]);
                        let gout = Lit::pos(self.out[star][i]);
                        self.cnf.add_clause(vec![gin.negated(), t.negated(), Lit::pos(ia)]);
                        self.cnf.add_clause(vec![gin.negated(), Lit::neg(ia), t]);
                        self.cnf.add_clause(vec![gout.negated(), t.negated(), Lit::pos(oa)]);
                        self.cnf.add_clause(vec![gout.negated(), Lit::neg(oa), t]);
                    }
                }
                Formula::Diamond(..) => unreachable!("closure is diamond-normalised"),
            }
        }
    }

    /// Adds the refutation side of an entailment check: the query must fail
    /// at some slot.
    pub fn require_failure_somewhere(&mut self, query: &Formula) {
        let fi = self.formula_index[&query.normalize_diamonds()];
        let clause: Vec<Lit> = (0..self.n).map(|i| Lit::neg(self.tru[i][fi])).collect();
        self.cnf.add_clause(clause);
    }

    pub fn solve(&self) -> Option<SPStructure> {
        let assignment = crate::propsat::solve_cnf(&self.cnf, &[])?;
        Some(self.decode(&assignment))
    }

    fn decode(&self, assignment: &[bool]) -> SPStructure {
        let precisifications: Vec<Precisification> = (0..self.n)
            .map(|i| Precisification {
                id: format!("w{i}"),
                valuation: self
                    .atoms
                    .iter()
                    .enumerate()
                    .filter(|(ai, _)| assignment[self.val[i][*ai] as usize])
                    .map(|(_, a)| a.clone())
                    .collect(),
            })
            .collect();
        let collect = |vars: &Vec<Vec<Var>>| {
            self.standpoints
                .iter()
                .enumerate()
                .map(|(si, s)| {
                    let ids: BTreeSet<String> = (0..self.n)
                        .filter(|i| assignment[vars[si][*i] as usize])
                        .map(|i| format!("w{i}"))
                        .collect();
                    (s.clone(), ids)
                })
                .collect::<BTreeMap<_, _>>()
        };
        SPStructure {
            atoms: self.atoms.iter().cloned().collect(),
            standpoints: self.standpoints.iter().cloned().collect(),
            precisifications,
            inner: collect(&self.inn),
            outer: collect(&self.out),
        }
    }
}

/// Slot budget: the sum-of-sizes bound from the small model property,
/// tightened to one witness per modal subformula plus one keeper per
/// standpoint (plus one refutation point for entailment queries).
fn budget(t: &Theory, query: Option<&Formula>) -> usize {
    let mut sum = t.size();
    let mut modal: BTreeSet<Formula> = t.modal_subformulas().into_iter().collect();
    let mut sps = t.standpoints().len();
    if let Some(q) = query {
        sum += q.size();
        for sub in q.normalize_diamonds().subformulas() {
            if matches!(sub, Formula::Box(..)) {
                modal.insert(sub);
            }
        }
        sps = t
            .standpoints()
            .iter()
            .cloned()
            .chain(q.standpoints())
            .collect::<BTreeSet<_>>()
            .len();
    }
    let tight = modal.len() + sps + usize::from(query.is_some());
    sum.min(tight).max(1)
}

/// Satisfiability of a theory. Returns a witness structure (which validates
/// and models the theory) or `None` for unsatisfiable.
pub fn sat_mono(t: &Theory) -> Option<SPStructure> {
    let n = budget(t, None);
    BoundedEncoding::new(t, &[], n).solve()
}

/// Monotonic entailment `T |= e`. Formula queries are decided by refuting a
/// bounded countermodel; sharpening queries reduce to the syntactic
/// hierarchy on satisfiable theories and hold vacuously on unsatisfiable
/// ones.
pub fn entails_mono(t: &Theory, e: &Expression) -> bool {
    match e {
        Expression::Sharpening(s, u) => {
            if sat_mono(t).is_none() {
                true
            } else {
                t.closure().holds(s, u)
            }
        }
        Expression::Formula(q) => {
            let n = budget(t, Some(q));
            let mut enc = BoundedEncoding::new(t, std::slice::from_ref(q), n);
            enc.require_failure_somewhere(q);
            enc.solve().is_none()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expression, parse_theory, Mode};

    fn theory(text: &str) -> Theory {
        parse_theory(text, Mode::Spt).unwrap()
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

    #[test]
    fn global_contradiction_unsat() {
        assert!(sat_mono(&theory("[*] (p & ! p).")).is_none());
    }

    #[test]
    fn empty_theory_sat() {
        let st = sat_mono(&Theory::empty()).expect("empty theory is satisfiable");
        assert!(st.validate().is_empty());
    }

    #[test]
    fn t2_sat_with_valid_witness() {
        let t = t2();
        let st = sat_mono(&t).expect("T2 is satisfiable");
        assert!(st.validate().is_empty());
        assert!(st.models_theory(&t).unwrap());
        assert!(st.precisifications.len() <= t.size());
    }

    #[test]
    fn box_star_entails_atom() {
        let t = theory("[*] p.");
        assert!(entails_mono(&t, &parse_expression("p").unwrap()));
        assert!(!entails_mono(&t, &parse_expression("q & p").unwrap()));
    }

    #[test]
    fn stated_sharpening_entailed() {
        let t = theory("D1 <= M. [D1] p.");
        assert!(entails_mono(&t, &parse_expression("D1 <= M").unwrap()));
        assert!(!entails_mono(&t, &parse_expression("M <= D1").unwrap()));
    }

    #[test]
    fn unsat_theory_entails_everything() {
        let t = theory("[*] (p & ! p).");
        assert!(entails_mono(&t, &parse_expression("q").unwrap()));
        assert!(entails_mono(&t, &parse_expression("M <= D1").unwrap()));
    }

    #[test]
    fn entailment_needs_outer_aware_countermodels() {
        // Negative introspection !([s]p) -> [s]![s]p holds in every S5
        // standpoint structure but fails in S4F ones; the countermodel
        // needs an outer precisification.
        let t = Theory::empty();
        assert!(!entails_mono(&t, &parse_expression("! [s] p -> [s] ! [s] p").unwrap()));
    }

    #[test]
    fn axiom_t_holds() {
        // [*]p -> p is valid in the logic
        let t = Theory::empty();
        assert!(entails_mono(&t, &parse_expression("[*] p -> p").unwrap()));
        // but [s]p -> p is not (s-inner worlds may differ from the point)
        assert!(!entails_mono(&t, &parse_expression("[s] p -> p").unwrap()));
    }

    #[test]
    fn sharpening_transfers_boxes() {
        let t = theory("D1 <= M. [M] horm.");
        assert!(entails_mono(&t, &parse_expression("[D1] horm").unwrap()));
        let t = theory("D1 <= M. [D1] horm.");
        assert!(!entails_mono(&t, &parse_expression("[M] horm").unwrap()));
    }

    #[test]
    fn entailment_monotone_under_growth_samples() {
        let base = theory("[*] p. [s] (p -> q).");
        let grown = theory("[*] p. [s] (p -> q). [*] r.");
        for q in ["[s] q", "p", "[s] p"] {
            let e = parse_expression(q).unwrap();
            if entails_mono(&base, &e) {
                assert!(entails_mono(&grown, &e), "monotonicity failed for {q}");
            }
        }
    }
}
