//! Emits a disjunctive answer-set program whose answer sets, projected onto
//! `inPsi/inPhi`, are exactly the certified partitions of a theory.
//!
//! The program follows the guess/check/saturate scheme:
//!   1. guess a partition of the modal subformulas, one extended valuation
//!      per standpoint, and one counter-valuation per modal subformula;
//!   2. check by plain evaluation that each standpoint valuation satisfies
//!      its gamma theory and that each counter-valuation refutes the body
//!      of its box within the gamma theory of every standpoint the box's
//!      standpoint sharpens into;
//!   3. verify by saturation that each determined box is entailed: no
//!      two-cluster structure up to the small-model bound satisfies the
//!      theory and the negated partition while dissatisfying the box
//!      somewhere.
//!
//! Predicates: `msub/1, inPsi/1, inPhi/1, val/2, cval/3, sharp/2, tru/2,
//! sat/1` as the primary scheme, plus documented auxiliaries (`nval/2`,
//! `fls/2`, the formula-structure facts, and the saturation-side guesses).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::propsat::{reading_of_formula, ExtAtom, Reading};
use crate::syntax::{Atom, Formula, StandpointName, Theory};

/// A total order over the subformulas of a theory, induced by an atom and
/// standpoint priority order (default: lexicographic). Stable across runs.
#[derive(Debug, Clone)]
pub struct SubformulaOrder {
    atom_rank: BTreeMap<Atom, usize>,
    sp_rank: BTreeMap<StandpointName, usize>,
}

impl SubformulaOrder {
    /// Lexicographic default order on the theory's vocabulary.
    pub fn lexicographic(t: &Theory) -> SubformulaOrder {
        let atom_rank = t.atoms().iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        let sp_rank =
            t.standpoints().iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        SubformulaOrder { atom_rank, sp_rank }
    }

    /// Order induced by an explicit priority list of atom and standpoint
    /// names; unlisted names follow lexicographically.
    pub fn with_priorities(t: &Theory, names: &[String]) -> SubformulaOrder {
        let mut order = Self::lexicographic(t);
        let offset = names.len();
        for r in order.atom_rank.values_mut() {
            *r += offset;
        }
        for r in order.sp_rank.values_mut() {
            *r += offset;
        }
        for (i, name) in names.iter().enumerate() {
            if let Ok(a) = Atom::new(name) {
                if let Some(r) = order.atom_rank.get_mut(&a) {
                    *r = i;
                }
            }
            if let Ok(s) = StandpointName::new(name) {
                if let Some(r) = order.sp_rank.get_mut(&s) {
                    *r = i;
                }
            }
        }
        order
    }

    /// Sort key: size first, then the printed form with names replaced by
    /// zero-padded ranks (so the priority order decides ties).
    fn key(&self, f: &Formula) -> (usize, String) {
        fn walk(this: &SubformulaOrder, f: &Formula, out: &mut String) {
            match f {
                Formula::Atom(a) => {
                    let r = this.atom_rank.get(a).copied().unwrap_or(usize::MAX);
                    let _ = write!(out, "a{r:06}");
                }
                Formula::Bottom => out.push_str("bot"),
                Formula::Not(g) => {
                    out.push('!');
                    walk(this, g, out);
                }
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    out.push(match f {
                        Formula::And(..) => '&',
                        Formula::Or(..) => '|',
                        _ => '>',
                    });
                    walk(this, a, out);
                    out.push(',');
                    walk(this, b, out);
                }
                Formula::Box(s, g) | Formula::Diamond(s, g) => {
                    let r = this.sp_rank.get(s).copied().unwrap_or(usize::MAX);
                    out.push(if matches!(f, Formula::Box(..)) { '[' } else { '<' });
                    let _ = write!(out, "s{r:06}");
                    walk(this, g, out);
                }
            }
        }
        let mut s = String::new();
        walk(self, f, &mut s);
        (f.size(), s)
    }

    pub fn sort(&self, formulas: &mut [Formula]) {
        formulas.sort_by_cached_key(|f| self.key(f));
    }
}

// term helpers --------------------------------------------------------------

fn sp_term(s: &StandpointName) -> String {
    format!("\"{}\"", s.name())
}

fn ext_atom_term(x: &ExtAtom, fid: &BTreeMap<Formula, usize>) -> String {
    match x {
        ExtAtom::Base(a) => format!("a({})", a.name()),
        ExtAtom::Modal(m) => format!("m(f{})", fid[m]),
        ExtAtom::Sharp(s, u) => format!("sp({},{})", sp_term(s), sp_term(u)),
    }
}

/// Emits the program text for a theory under a subformula order.
pub fn emit_asp(t: &Theory, order: &SubformulaOrder) -> String {
    Emitter::new(t, order).emit()
}

struct Emitter<'a> {
    t: &'a Theory,
    /// diamond-normalised subformula closure in the supplied order
    formulas: Vec<Formula>,
    fid: BTreeMap<Formula, usize>,
    modal: Vec<Formula>,
    /// propositional readings, indexed like `formulas` where applicable
    out: String,
}

impl<'a> Emitter<'a> {
    fn new(t: &'a Theory, order: &SubformulaOrder) -> Emitter<'a> {
        let mut closure: std::collections::BTreeSet<Formula> = Default::default();
        for f in t.normalized_formulas() {
            closure.extend(f.subformulas());
        }
        let mut formulas: Vec<Formula> = closure.into_iter().collect();
        order.sort(&mut formulas);
        let fid: BTreeMap<Formula, usize> =
            formulas.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        let mut modal: Vec<Formula> =
            formulas.iter().filter(|f| matches!(f, Formula::Box(..))).cloned().collect();
        order.sort(&mut modal);
        Emitter { t, formulas, fid, modal, out: String::new() }
    }

    fn line(&mut self, s: &str) {
        self.out.push_str(s);
        self.out.push('\n');
    }

    /// Prop-view ids: the readings of subformulas above the maximal boxes.
    /// Every closure formula gets a prop-view where boxes are leaves.
    fn emit(mut self) -> String {
        let slots = {
            let sps = self.t.standpoints().len();
            (self.modal.len() + sps + 1).min(self.t.size().max(1))
        }
        .max(1);

        self.line("% Disjunctive ASP encoding of the partition search.");
        self.line("% Answer sets project on inPsi/1, inPhi/1 to the certified partitions.");
        self.line("% Scheme: msub/1 inPsi/1 inPhi/1 val/2 cval/3 sharp/2 tru/2 sat/1.");
        self.line("% Auxiliaries: nval/2, fls/2, formula structure facts patom/2 pnot/2");
        self.line("%   pand/3 por/3 pimpl/3 pbot/1 (propositional view, boxes opaque),");
        self.line("%   matom/2 mnot/2 mand/3 mor/3 mimpl/3 mbot/1 mbox/3 (modal view),");
        self.line("%   saturation guesses wval/4 win/4 wout/4 and slot chains.");
        self.line("");

        self.line("% --- vocabulary ---");
        for s in self.t.standpoints() {
            self.line(&format!("standpoint({}).", sp_term(s)));
        }
        for a in self.t.atoms() {
            self.line(&format!("batom(a({})).", a.name()));
        }
        // extended atoms: base atoms, modal atoms, sharp atoms
        let mut ext_atoms: Vec<ExtAtom> =
            self.t.atoms().iter().map(|a| ExtAtom::Base(a.clone())).collect();
        for m in &self.modal {
            ext_atoms.push(ExtAtom::Modal(m.clone()));
        }
        for (s, u) in self.t.sharpening_statements() {
            ext_atoms.push(ExtAtom::Sharp(s, u));
        }
        for x in &ext_atoms {
            self.line(&format!("extatom({}).", ext_atom_term(x, &self.fid)));
        }
        self.line("");

        self.line("% --- subformula dictionary ---");
        for (i, f) in self.formulas.iter().enumerate() {
            self.line(&format!("% f{i} = {f}"));
        }
        for m in &self.modal {
            self.line(&format!("msub(f{}).", self.fid[m]));
        }
        for e in self.t.normalized_formulas() {
            self.line(&format!("thexpr(f{}).", self.fid[&e]));
        }
        for (s, u) in self.t.sharpening_statements() {
            self.line(&format!("stated({},{}).", sp_term(&s), sp_term(&u)));
        }
        // derived sharpening pairs over the vocabulary
        for (s, u) in self.t.closure().pairs() {
            self.line(&format!("sharp({},{}).", sp_term(&s), sp_term(&u)));
        }
        self.line("");

        self.emit_formula_views();
        self.emit_partition_guess();
        self.emit_gamma_check();
        self.emit_counter_check();
        self.emit_saturation(slots);
        self.out
    }

    fn emit_formula_views(&mut self) {
        self.line("% --- formula structure: propositional view (boxes opaque) ---");
        for (i, f) in self.formulas.iter().enumerate() {
            match f {
                Formula::Atom(a) => self.line(&format!("patom(f{i},a({})).", a.name())),
                Formula::Bottom => self.line(&format!("pbot(f{i}).")),
                Formula::Box(..) => self.line(&format!("patom(f{i},m(f{i})).")),
                Formula::Not(g) => {
                    let g = self.fid[g.as_ref()];
                    self.line(&format!("pnot(f{i},f{g})."));
                }
                Formula::And(a, b) => {
                    let (a, b) = (self.fid[a.as_ref()], self.fid[b.as_ref()]);
                    self.line(&format!("pand(f{i},f{a},f{b})."));
                }
                Formula::Or(a, b) => {
                    let (a, b) = (self.fid[a.as_ref()], self.fid[b.as_ref()]);
                    self.line(&format!("por(f{i},f{a},f{b})."));
                }
                Formula::Implies(a, b) => {
                    let (a, b) = (self.fid[a.as_ref()], self.fid[b.as_ref()]);
                    self.line(&format!("pimpl(f{i},f{a},f{b})."));
                }
                Formula::Diamond(..) => unreachable!("closure is diamond-normalised"),
            }
        }
        self.line("% --- formula structure: modal view ---");
        for (i, f) in self.formulas.iter().enumerate() {
            match f {
                Formula::Atom(a) => self.line(&format!("matom(f{i},a({})).", a.name())),
                Formula::Bottom => self.line(&format!("mbot(f{i}).")),
                Formula::Not(g) => {
                    let g = self.fid[g.as_ref()];
                    self.line(&format!("mnot(f{i},f{g})."));
                }
                Formula::And(a, b) => {
                    let (a, b) = (self.fid[a.as_ref()], self.fid[b.as_ref()]);
                    self.line(&format!("mand(f{i},f{a},f{b})."));
                }
                Formula::Or(a, b) => {
                    let (a, b) = (self.fid[a.as_ref()], self.fid[b.as_ref()]);
                    self.line(&format!("mor(f{i},f{a},f{b})."));
                }
                Formula::Implies(a, b) => {
                    let (a, b) = (self.fid[a.as_ref()], self.fid[b.as_ref()]);
                    self.line(&format!("mimpl(f{i},f{a},f{b})."));
                }
                Formula::Box(s, g) => {
                    let g = self.fid[g.as_ref()];
                    self.line(&format!("mbox(f{i},{},f{g}).", sp_term(s)));
                }
                Formula::Diamond(..) => unreachable!(),
            }
        }
        // per modal subformula: its standpoint and body for the gamma parts
        for m in &self.modal {
            let Formula::Box(s, g) = m else { unreachable!() };
            self.line(&format!(
                "msubinfo(f{},{},f{}).",
                self.fid[m],
                sp_term(s),
                self.fid[g.as_ref()]
            ));
        }
        self.line("");
    }

    fn emit_partition_guess(&mut self) {
        self.line("% --- (1a) guess a partition of the modal subformulas ---");
        let fids: Vec<usize> = self.modal.iter().map(|m| self.fid[m]).collect();
        for i in fids {
            self.line(&format!("inPsi(f{i}) | inPhi(f{i})."));
        }
        self.line("");
    }

    fn emit_gamma_check(&mut self) {
        self.line("% --- (1b)/(2a) guess and check one valuation per standpoint ---");
        self.line("val(S,X) | nval(S,X) :- standpoint(S), extatom(X).");
        self.line("% evaluation of the propositional view under val");
        self.line("tru(g(S),F) :- standpoint(S), patom(F,X), val(S,X).");
        self.line("fls(g(S),F) :- standpoint(S), patom(F,X), nval(S,X).");
        self.line("fls(g(S),F) :- standpoint(S), pbot(F).");
        self.line("tru(g(S),F) :- pnot(F,G), fls(g(S),G).");
        self.line("fls(g(S),F) :- pnot(F,G), tru(g(S),G).");
        self.line("tru(g(S),F) :- pand(F,G1,G2), tru(g(S),G1), tru(g(S),G2).");
        self.line("fls(g(S),F) :- pand(F,G1,G2), fls(g(S),G1).");
        self.line("fls(g(S),F) :- pand(F,G1,G2), fls(g(S),G2).");
        self.line("tru(g(S),F) :- por(F,G1,G2), tru(g(S),G1).");
        self.line("tru(g(S),F) :- por(F,G1,G2), tru(g(S),G2).");
        self.line("fls(g(S),F) :- por(F,G1,G2), fls(g(S),G1), fls(g(S),G2).");
        self.line("tru(g(S),F) :- pimpl(F,G1,G2), fls(g(S),G1).");
        self.line("tru(g(S),F) :- pimpl(F,G1,G2), tru(g(S),G2).");
        self.line("fls(g(S),F) :- pimpl(F,G1,G2), tru(g(S),G1), fls(g(S),G2).");
        self.line("% the theory readings hold");
        self.line(":- standpoint(S), thexpr(F), fls(g(S),F).");
        self.line("% stated sharpening statements are positive units");
        self.line(":- standpoint(S), stated(U1,U2), nval(S,sp(U1,U2)).");
        self.line("% psi elements hold as atoms, phi elements fail as atoms");
        self.line(":- standpoint(S), inPsi(M), nval(S,m(M)).");
        self.line(":- standpoint(S), inPhi(M), val(S,m(M)).");
        self.line("% inherited bodies: [U]B in psi and S sharpening U forces B");
        self.line(":- standpoint(S), inPsi(M), msubinfo(M,U,B), sharp(S,U), fls(g(S),B).");
        self.line("");
    }

    fn emit_counter_check(&mut self) {
        self.line("% --- (1c)/(2b) guess and check one counter-valuation per phi element ---");
        self.line("cval(M,X,t) | cval(M,X,f) :- msub(M), extatom(X).");
        self.line("% evaluation under cval, context c(M)");
        self.line("tru(c(M),F) :- msub(M), patom(F,X), cval(M,X,t).");
        self.line("fls(c(M),F) :- msub(M), patom(F,X), cval(M,X,f).");
        self.line("fls(c(M),F) :- msub(M), pbot(F).");
        self.line("tru(c(M),F) :- msub(M), pnot(F,G), fls(c(M),G).");
        self.line("fls(c(M),F) :- msub(M), pnot(F,G), tru(c(M),G).");
        self.line("tru(c(M),F) :- msub(M), pand(F,G1,G2), tru(c(M),G1), tru(c(M),G2).");
        self.line("fls(c(M),F) :- msub(M), pand(F,G1,G2), fls(c(M),G1).");
        self.line("fls(c(M),F) :- msub(M), pand(F,G1,G2), fls(c(M),G2).");
        self.line("tru(c(M),F) :- msub(M), por(F,G1,G2), tru(c(M),G1).");
        self.line("tru(c(M),F) :- msub(M), por(F,G1,G2), tru(c(M),G2).");
        self.line("fls(c(M),F) :- msub(M), por(F,G1,G2), fls(c(M),G1), fls(c(M),G2).");
        self.line("tru(c(M),F) :- msub(M), pimpl(F,G1,G2), fls(c(M),G1).");
        self.line("tru(c(M),F) :- msub(M), pimpl(F,G1,G2), tru(c(M),G2).");
        self.line("fls(c(M),F) :- msub(M), pimpl(F,G1,G2), tru(c(M),G1), fls(c(M),G2).");
        self.line("% for [U]P in phi: the counter-valuation refutes P and satisfies");
        self.line("% Gamma_S for every S that U sharpens into");
        self.line(":- inPhi(M), msubinfo(M,U,B), tru(c(M),B).");
        self.line(":- inPhi(M), thexpr(F), fls(c(M),F).");
        self.line(":- inPhi(M), stated(U1,U2), cval(M,sp(U1,U2),f).");
        self.line(":- inPhi(M), inPsi(M2), cval(M,m(M2),f).");
        self.line(":- inPhi(M), inPhi(M2), cval(M,m(M2),t).");
        self.line(
            ":- inPhi(M), msubinfo(M,U,B), inPsi(M2), msubinfo(M2,U2,B2), sharp(U,S), \
             sharp(S,U2), standpoint(S), fls(c(M),B2).",
        );
        self.line("");
    }

    fn emit_saturation(&mut self, slots: usize) {
        self.line("% --- (3) saturation: every psi element is entailed by T + !phi ---");
        self.line(&format!("% small-model bound: {slots} slots"));
        for i in 0..slots {
            self.line(&format!("slot({i})."));
        }
        for i in 0..slots {
            self.line(&format!("nextslot({},{}).", i, i + 1));
        }
        self.line(&format!("lastslot({slots})."));
        self.line("");
        self.line("% candidate countermodel guesses, one independent copy per msub K");
        self.line("wval(K,I,A,t) | wval(K,I,A,f) :- msub(K), slot(I), batom(A).");
        self.line("win(K,S,I,t) | win(K,S,I,f) :- msub(K), standpoint(S), slot(I).");
        self.line("wout(K,S,I,t) | wout(K,S,I,f) :- msub(K), standpoint(S), slot(I).");
        self.line("");
        self.line("% modal-view evaluation at slot I of candidate K");
        self.line("tru(w(K,I),F) :- matom(F,A), wval(K,I,A,t).");
        self.line("fls(w(K,I),F) :- matom(F,A), wval(K,I,A,f).");
        self.line("fls(w(K,I),F) :- mbot(F), msub(K), slot(I).");
        self.line("tru(w(K,I),F) :- mnot(F,G), fls(w(K,I),G).");
        self.line("fls(w(K,I),F) :- mnot(F,G), tru(w(K,I),G).");
        self.line("tru(w(K,I),F) :- mand(F,G1,G2), tru(w(K,I),G1), tru(w(K,I),G2).");
        self.line("fls(w(K,I),F) :- mand(F,G1,G2), fls(w(K,I),G1), slot(I), msub(K).");
        self.line("fls(w(K,I),F) :- mand(F,G1,G2), fls(w(K,I),G2), slot(I), msub(K).");
        self.line("tru(w(K,I),F) :- mor(F,G1,G2), tru(w(K,I),G1), slot(I), msub(K).");
        self.line("tru(w(K,I),F) :- mor(F,G1,G2), tru(w(K,I),G2), slot(I), msub(K).");
        self.line("fls(w(K,I),F) :- mor(F,G1,G2), fls(w(K,I),G1), fls(w(K,I),G2).");
        self.line("tru(w(K,I),F) :- mimpl(F,G1,G2), fls(w(K,I),G1), slot(I), msub(K).");
        self.line("tru(w(K,I),F) :- mimpl(F,G1,G2), tru(w(K,I),G2), slot(I), msub(K).");
        self.line("fls(w(K,I),F) :- mimpl(F,G1,G2), tru(w(K,I),G1), fls(w(K,I),G2).");
        self.line("");
        self.line("% box truth via slot chains (strictly positive)");
        self.line("% allin(K,F,J): body of box F true at all inner slots below J");
        self.line("allin(K,F,0) :- msub(K), mbox(F,S,G).");
        self.line("okin(K,F,J) :- mbox(F,S,G), win(K,S,J,f), msub(K), slot(J).");
        self.line("okin(K,F,J) :- mbox(F,S,G), tru(w(K,J),G).");
        self.line("allin(K,F,J1) :- allin(K,F,J), nextslot(J,J1), okin(K,F,J).");
        self.line("allio(K,F,0) :- msub(K), mbox(F,S,G).");
        self.line("okio(K,F,J) :- mbox(F,S,G), win(K,S,J,f), wout(K,S,J,f), msub(K), slot(J).");
        self.line("okio(K,F,J) :- mbox(F,S,G), tru(w(K,J),G).");
        self.line("allio(K,F,J1) :- allio(K,F,J), nextslot(J,J1), okio(K,F,J).");
        self.line("tru(w(K,I),F) :- mbox(F,S,G), win(K,\"*\",I,t), allin(K,F,N), lastslot(N).");
        self.line("tru(w(K,I),F) :- mbox(F,S,G), wout(K,\"*\",I,t), allio(K,F,N), lastslot(N).");
        self.line("fls(w(K,I),F) :- mbox(F,S,G), win(K,\"*\",I,t), win(K,S,J,t), fls(w(K,J),G), slot(I).");
        self.line("fls(w(K,I),F) :- mbox(F,S,G), wout(K,\"*\",I,t), win(K,S,J,t), fls(w(K,J),G), slot(I).");
        self.line("fls(w(K,I),F) :- mbox(F,S,G), wout(K,\"*\",I,t), wout(K,S,J,t), fls(w(K,J),G), slot(I).");
        self.line("");
        self.line("% violations saturate the candidate");
        self.line("sat(K) :- inPhi(K).");
        self.line("% structural defects");
        self.line("sat(K) :- win(K,S,I,t), win(K,S,I,f).");
        self.line("sat(K) :- wout(K,S,I,t), wout(K,S,I,f).");
        self.line("sat(K) :- wval(K,I,A,t), wval(K,I,A,f).");
        self.line("sat(K) :- win(K,S,I,t), wout(K,U,I,t).");
        self.line("sat(K) :- win(K,\"*\",I,f), wout(K,\"*\",I,f).");
        self.line("noin(K,S,0) :- msub(K), standpoint(S).");
        self.line("noin(K,S,J1) :- noin(K,S,J), nextslot(J,J1), win(K,S,J,f).");
        self.line("sat(K) :- noin(K,S,N), lastslot(N).");
        self.line("sat(K) :- stated(S,U), win(K,S,I,t), win(K,U,I,f).");
        self.line("sat(K) :- stated(S,U), wout(K,S,I,t), wout(K,U,I,f).");
        self.line("% the theory must hold at every slot");
        self.line("sat(K) :- thexpr(F), fls(w(K,I),F).");
        self.line("% the phi elements must fail at every slot");
        self.line("sat(K) :- inPhi(M), tru(w(K,I),M), msub(K).");
        self.line("% the checked box K must fail somewhere");
        self.line("alltru(K,0) :- msub(K).");
        self.line("alltru(K,J1) :- alltru(K,J), nextslot(J,J1), tru(w(K,J),K).");
        self.line("sat(K) :- alltru(K,N), lastslot(N).");
        self.line("");
        self.line("% saturation of the candidate guesses");
        self.line("wval(K,I,A,t) :- sat(K), slot(I), batom(A).");
        self.line("wval(K,I,A,f) :- sat(K), slot(I), batom(A).");
        self.line("win(K,S,I,t) :- sat(K), standpoint(S), slot(I).");
        self.line("win(K,S,I,f) :- sat(K), standpoint(S), slot(I).");
        self.line("wout(K,S,I,t) :- sat(K), standpoint(S), slot(I).");
        self.line("wout(K,S,I,f) :- sat(K), standpoint(S), slot(I).");
        self.line(":- msub(K), not sat(K).");
    }
}

// ---------------------------------------------------------------------------
// ASP-Core-2 grammar checker (subset: facts, rules, constraints,
// disjunctive heads, default negation, function terms, strings, integers)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ASP syntax error at {line}:{col}: {msg}")]
pub struct AspSyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// Validates that a program conforms to the supported ASP-Core-2 subset.
pub fn check_asp_core2(text: &str) -> Result<(), AspSyntaxError> {
    AspChecker::new(text).program()
}

struct AspChecker<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _text: &'a str,
}

impl<'a> AspChecker<'a> {
    fn new(text: &'a str) -> AspChecker<'a> {
        AspChecker { chars: text.chars().collect(), pos: 0, line: 1, col: 1, _text: text }
    }

    fn err(&self, msg: impl Into<String>) -> AspSyntaxError {
        AspSyntaxError { line: self.line, col: self.col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                _ => break,
            }
        }
    }

    fn eat(&mut self, expected: char) -> Result<(), AspSyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == expected => {
                self.bump();
                Ok(())
            }
            other => Err(self.err(format!("expected `{expected}`, found {other:?}"))),
        }
    }

    fn try_eat(&mut self, expected: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(expected) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn try_eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        let save = (self.pos, self.line, self.col);
        for c in s.chars() {
            if self.peek() == Some(c) {
                self.bump();
            } else {
                (self.pos, self.line, self.col) = save;
                return false;
            }
        }
        true
    }

    fn ident(&mut self) -> Result<String, AspSyntaxError> {
        self.skip_ws();
        let mut name = String::new();
        match self.peek() {
            Some(c) if c.is_ascii_lowercase() => {
                name.push(c);
                self.bump();
            }
            other => return Err(self.err(format!("expected identifier, found {other:?}"))),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                name.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok(name)
    }

    fn term(&mut self) -> Result<(), AspSyntaxError> {
        self.skip_ws();
        match self.peek() {
            Some('"') => {
                self.bump();
                while let Some(c) = self.bump() {
                    if c == '"' {
                        return Ok(());
                    }
                }
                Err(self.err("unterminated string"))
            }
            Some(c) if c.is_ascii_digit() => {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.bump();
                }
                Ok(())
            }
            Some(c) if c.is_ascii_uppercase() || c == '_' => {
                // variable
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.bump();
                }
                Ok(())
            }
            Some(c) if c.is_ascii_lowercase() => {
                self.ident()?;
                if self.try_eat('(') {
                    loop {
                        self.term()?;
                        if !self.try_eat(',') {
                            break;
                        }
                    }
                    self.eat(')')?;
                }
                Ok(())
            }
            other => Err(self.err(format!("expected term, found {other:?}"))),
        }
    }

    fn atom(&mut self) -> Result<(), AspSyntaxError> {
        self.ident()?;
        if self.try_eat('(') {
            loop {
                self.term()?;
                if !self.try_eat(',') {
                    break;
                }
            }
            self.eat(')')?;
        }
        Ok(())
    }

    fn literal(&mut self) -> Result<(), AspSyntaxError> {
        let _ = self.try_eat_str("not ");
        self.atom()
    }

    fn rule(&mut self) -> Result<(), AspSyntaxError> {
        self.skip_ws();
        let has_head = self.peek() != Some(':');
        if has_head {
            self.atom()?;
            while self.try_eat('|') {
                self.atom()?;
            }
        }
        if self.try_eat_str(":-") {
            self.skip_ws();
            if self.peek() != Some('.') {
                loop {
                    self.literal()?;
                    if !self.try_eat(',') {
                        break;
                    }
                }
            }
        } else if !has_head {
            return Err(self.err("constraint without body"));
        }
        self.eat('.')
    }

    fn program(&mut self) -> Result<(), AspSyntaxError> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            self.rule()?;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_theory, Mode};

    fn t2() -> Theory {
        parse_theory(
            "([D1] ovudis & [D1] ! [D1] ! pcos) -> [D1] pcos.
             ([D2] ovudis & [D2] ! [D2] ! (! preg) & [D2] ! [D2] ! fha) -> [D2] fha.
             [M] (pcos -> horm).
             [M] (fha -> ! horm).
             D1 <= M.
             D2 <= M.
             [*] ovudis.
             [*] preg.",
            Mode::Spt,
        )
        .unwrap()
    }

    #[test]
    fn empty_theory_program_is_valid_and_guess_free() {
        let t = Theory::empty();
        let text = emit_asp(&t, &SubformulaOrder::lexicographic(&t));
        check_asp_core2(&text).unwrap();
        assert!(!text.contains("inPsi(f"));
    }

    #[test]
    fn t2_program_has_one_guess_line_per_modal_subformula() {
        let t = t2();
        let text = emit_asp(&t, &SubformulaOrder::lexicographic(&t));
        check_asp_core2(&text).unwrap();
        let guesses = text.lines().filter(|l| l.starts_with("inPsi(")).count();
        assert_eq!(guesses, t.modal_subformulas().len());
        assert_eq!(guesses, 14);
    }

    #[test]
    fn sharp_facts_cover_derived_pairs() {
        let t = t2();
        let text = emit_asp(&t, &SubformulaOrder::lexicographic(&t));
        assert!(text.contains("sharp(\"D1\",\"M\")."));
        assert!(text.contains("sharp(\"D1\",\"*\")."));
        assert!(!text.contains("sharp(\"M\",\"D1\")."));
    }

    #[test]
    fn explicit_order_changes_ids_stably() {
        let t = t2();
        let default_order = SubformulaOrder::lexicographic(&t);
        let custom =
            SubformulaOrder::with_priorities(&t, &["preg".into(), "M".into()]);
        let a = emit_asp(&t, &default_order);
        let b = emit_asp(&t, &custom);
        let a2 = emit_asp(&t, &SubformulaOrder::lexicographic(&t));
        assert_eq!(a, a2, "emission must be deterministic");
        assert_ne!(a, b, "priorities reorder subformula ids");
        check_asp_core2(&b).unwrap();
    }

    #[test]
    fn grammar_checker_rejects_junk() {
        assert!(check_asp_core2("p(a) :- q(.").is_err());
        assert!(check_asp_core2("Head :- q.").is_err());
        assert!(check_asp_core2("p :- q").is_err());
        check_asp_core2("p(a). q :- not p(a), r. a | b :- c.").unwrap();
    }
}
