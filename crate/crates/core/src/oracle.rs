//! Brute-force reference implementations used by tests and fixture
//! derivation. Nothing here is on the solving path; the point is an
//! independent route to the same answers at small scale.
//!
//! Canonical representation: since satisfaction in an S5 standpoint
//! structure depends only on the per-standpoint sets of inner valuations,
//! and the determination orderings compare valuation images only, candidate
//! structures are enumerated as profiles assigning each standpoint a set of
//! valuations. Candidate structures are screened by guessing the truth
//! value of every box subformula first (a profile realises exactly one such
//! guess), which keeps the enumeration polynomial per candidate. The
//! domination search for minimality enumerates, per guess of the box truths
//! at outer precisifications, the unique maximal family of outer valuation
//! sets; escape and witness conditions are monotone, so checking the
//! maximal family is complete.

use std::collections::{BTreeMap, BTreeSet};

use crate::structures::SPStructure;
use crate::syntax::{Atom, Expression, Formula, StandpointName, Theory};

const MAX_ATOMS: usize = 4;
const MAX_STANDPOINTS: usize = 3;
const MAX_MODAL: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("oracle guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("structures have different vocabularies")]
    VocabularyMismatch,
}

/// The valuation-image profile of a structure: per standpoint, the set of
/// inner valuations. Minimal models are compared at this level.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalProfile {
    pub inner_vals: BTreeMap<StandpointName, BTreeSet<BTreeSet<Atom>>>,
}

impl CanonicalProfile {
    pub fn of_structure(st: &SPStructure) -> CanonicalProfile {
        let inner_vals = st
            .standpoints
            .iter()
            .map(|s| {
                let vals: BTreeSet<BTreeSet<Atom>> = st
                    .inner_set(s)
                    .iter()
                    .filter_map(|id| st.valuation_of(id).cloned())
                    .collect();
                (s.clone(), vals)
            })
            .collect();
        CanonicalProfile { inner_vals }
    }
}

// ---------------------------------------------------------------------------
// Bitmask context shared by the brute-force procedures
// ---------------------------------------------------------------------------

type VSet = u32; // set of valuation indices

struct Ctx {
    atoms: Vec<Atom>,
    sps: Vec<StandpointName>,
    star: usize,
    full: VSet,
    /// normalised subformula closure, children before parents
    formulas: Vec<Formula>,
    /// per closure entry: structural shape with child indices
    shapes: Vec<Shape>,
    /// box entries of the closure, canonical order; `boxes[k] = (closure
    /// index, standpoint index, body closure index)`
    boxes: Vec<(usize, usize, usize)>,
    /// closure index -> box bit (for box entries)
    box_bit: BTreeMap<usize, usize>,
    /// roots of the theory's formula members
    roots: Vec<usize>,
    /// stated sharpening pairs as standpoint indices
    stated: Vec<(usize, usize)>,
}

enum Shape {
    Atom(usize),
    Bottom,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Box,
}

impl Ctx {
    fn new(t: &Theory, extra: &[Formula]) -> Result<Ctx, OracleError> {
        let mut atom_set = t.atoms().clone();
        let mut sp_set = t.standpoints().clone();
        for f in extra {
            atom_set.extend(f.atoms());
            sp_set.extend(f.standpoints());
        }
        if atom_set.len() > MAX_ATOMS {
            return Err(OracleError::GuardExceeded(format!(
                "{} atoms (max {MAX_ATOMS})",
                atom_set.len()
            )));
        }
        if sp_set.len() > MAX_STANDPOINTS {
            return Err(OracleError::GuardExceeded(format!(
                "{} standpoints (max {MAX_STANDPOINTS})",
                sp_set.len()
            )));
        }
        let atoms: Vec<Atom> = atom_set.into_iter().collect();
        let sps: Vec<StandpointName> = sp_set.into_iter().collect();
        let star = sps.iter().position(StandpointName::is_universal).unwrap();

        let mut closure: BTreeSet<Formula> = BTreeSet::new();
        let mut root_formulas = Vec::new();
        for f in t.normalized_formulas() {
            closure.extend(f.subformulas());
            root_formulas.push(f);
        }
        for f in extra {
            closure.extend(f.normalize_diamonds().subformulas());
        }
        let mut formulas: Vec<Formula> = closure.into_iter().collect();
        formulas.sort_by(|a, b| a.canonical_cmp(b));
        let index: BTreeMap<&Formula, usize> =
            formulas.iter().enumerate().map(|(i, f)| (f, i)).collect();

        let mut shapes = Vec::new();
        let mut boxes = Vec::new();
        let mut box_bit = BTreeMap::new();
        for (i, f) in formulas.iter().enumerate() {
            let shape = match f {
                Formula::Atom(a) => Shape::Atom(atoms.iter().position(|x| x == a).unwrap()),
                Formula::Bottom => Shape::Bottom,
                Formula::Not(g) => Shape::Not(index[g.as_ref()]),
                Formula::And(a, b) => Shape::And(index[a.as_ref()], index[b.as_ref()]),
                Formula::Or(a, b) => Shape::Or(index[a.as_ref()], index[b.as_ref()]),
                Formula::Implies(a, b) => Shape::Implies(index[a.as_ref()], index[b.as_ref()]),
                Formula::Box(s, g) => {
                    let si = sps.iter().position(|x| x == s).unwrap();
                    box_bit.insert(i, boxes.len());
                    boxes.push((i, si, index[g.as_ref()]));
                    Shape::Box
                }
                Formula::Diamond(..) => unreachable!("closure is diamond-normalised"),
            };
            shapes.push(shape);
        }
        if boxes.len() > MAX_MODAL {
            return Err(OracleError::GuardExceeded(format!(
                "{} modal subformulas (max {MAX_MODAL})",
                boxes.len()
            )));
        }
        let roots = root_formulas.iter().map(|f| index[f]).collect();
        let stated = t
            .sharpening_statements()
            .iter()
            .map(|(s, u)| {
                (
                    sps.iter().position(|x| x == s).unwrap(),
                    sps.iter().position(|x| x == u).unwrap(),
                )
            })
            .collect();
        let nv = 1usize << atoms.len();
        Ok(Ctx {
            atoms,
            sps,
            star,
            full: ((1u64 << nv) - 1) as VSet,
            formulas,
            shapes,
            boxes,
            box_bit,
            roots,
            stated,
        })
    }

    fn n_vals(&self) -> usize {
        1 << self.atoms.len()
    }

    /// Truth table per closure entry, with every box entry replaced by the
    /// given truth bits: entry `i` gets the set of valuations satisfying it.
    fn eval_tables(&self, box_bits: u32) -> Vec<VSet> {
        let mut tab = vec![0 as VSet; self.formulas.len()];
        for i in 0..self.formulas.len() {
            tab[i] = match self.shapes[i] {
                Shape::Atom(ai) => {
                    let mut m = 0;
                    for v in 0..self.n_vals() {
                        if v >> ai & 1 == 1 {
                            m |= 1 << v;
                        }
                    }
                    m
                }
                Shape::Bottom => 0,
                Shape::Not(g) => !tab[g] & self.full,
                Shape::And(a, b) => tab[a] & tab[b],
                Shape::Or(a, b) => tab[a] | tab[b],
                Shape::Implies(a, b) => (!tab[a] & self.full) | tab[b],
                Shape::Box => {
                    if box_bits >> self.box_bit[&i] & 1 == 1 {
                        self.full
                    } else {
                        0
                    }
                }
            };
        }
        tab
    }

    fn valuation(&self, v: usize) -> BTreeSet<Atom> {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(ai, _)| v >> ai & 1 == 1)
            .map(|(_, a)| a.clone())
            .collect()
    }

    fn profile_to_canonical(&self, profile: &[VSet]) -> CanonicalProfile {
        let inner_vals = self
            .sps
            .iter()
            .enumerate()
            .map(|(si, s)| {
                let vals: BTreeSet<BTreeSet<Atom>> = (0..self.n_vals())
                    .filter(|v| profile[si] >> v & 1 == 1)
                    .map(|v| self.valuation(v))
                    .collect();
                (s.clone(), vals)
            })
            .collect();
        CanonicalProfile { inner_vals }
    }

    /// Enumerates the profiles of all canonical S5 models of the theory.
    fn model_profiles(&self) -> Vec<Vec<VSet>> {
        let mut out = Vec::new();
        let n_boxes = self.boxes.len();
        for beta in 0u32..(1u32 << n_boxes) {
            let tab = self.eval_tables(beta);
            let ok: VSet = self.roots.iter().fold(self.full, |m, &r| m & tab[r]);
            // per-standpoint upper bounds and falsity witnesses
            let mut ub = vec![self.full; self.sps.len()];
            let mut wits: Vec<Vec<VSet>> = vec![Vec::new(); self.sps.len()];
            for (k, &(_, si, body)) in self.boxes.iter().enumerate() {
                if beta >> k & 1 == 1 {
                    ub[si] &= tab[body];
                } else {
                    wits[si].push(!tab[body] & self.full);
                }
            }
            ub[self.star] &= ok;
            self.enumerate_profiles(beta, &ub, &wits, &mut out);
        }
        out
    }

    fn enumerate_profiles(
        &self,
        _beta: u32,
        ub: &[VSet],
        wits: &[Vec<VSet>],
        out: &mut Vec<Vec<VSet>>,
    ) {
        // P(*) ranges over nonempty submasks of its bound; every named
        // standpoint then over nonempty submasks of P(*) within its bound.
        fn submasks(m: VSet) -> Vec<VSet> {
            let mut subs = Vec::new();
            let mut s = m;
            loop {
                subs.push(s);
                if s == 0 {
                    break;
                }
                s = (s - 1) & m;
            }
            subs
        }
        let named: Vec<usize> = (0..self.sps.len()).filter(|&i| i != self.star).collect();
        for p_star in submasks(ub[self.star]) {
            if p_star == 0 {
                continue;
            }
            if !wits[self.star].iter().all(|w| w & p_star != 0) {
                continue;
            }
            let mut profile = vec![0 as VSet; self.sps.len()];
            profile[self.star] = p_star;
            self.assign_named(&named, 0, p_star, ub, wits, &mut profile, out);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_named(
        &self,
        named: &[usize],
        k: usize,
        p_star: VSet,
        ub: &[VSet],
        wits: &[Vec<VSet>],
        profile: &mut Vec<VSet>,
        out: &mut Vec<Vec<VSet>>,
    ) {
        if k == named.len() {
            // stated sharpenings hold at the canonical realisation iff the
            // profile sets are nested accordingly
            for &(s, u) in &self.stated {
                if profile[s] & !profile[u] != 0 {
                    return;
                }
            }
            out.push(profile.clone());
            return;
        }
        let si = named[k];
        let bound = ub[si] & p_star;
        let mut sub = bound;
        loop {
            if sub != 0 && wits[si].iter().all(|w| w & sub != 0) {
                profile[si] = sub;
                self.assign_named(named, k + 1, p_star, ub, wits, profile, out);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & bound;
        }
        profile[si] = 0;
    }

    /// Is there an S4F structure modelling the theory whose inner profile
    /// equals `profile` and whose outer part escapes it somewhere? The box
    /// truths at inner points are `beta` (the profile's own); the box truths
    /// at outer points are guessed as `b`, and for each guess the maximal
    /// consistent family of outer valuation sets is checked.
    fn dominated(&self, profile: &[VSet], beta: u32) -> bool {
        let n_boxes = self.boxes.len();
        'guess: for b in 0u32..(1u32 << n_boxes) {
            if b & !beta != 0 {
                continue; // a box true at outer points must be true at inner ones
            }
            let tab = self.eval_tables(b);
            let ok: VSet = self.roots.iter().fold(self.full, |m, &r| m & tab[r]);
            let mut v = vec![self.full; self.sps.len()];
            v[self.star] &= ok;
            for (k, &(_, si, body)) in self.boxes.iter().enumerate() {
                if b >> k & 1 == 1 {
                    v[si] &= tab[body];
                }
            }
            // fixpoint over the nesting constraints
            loop {
                let mut changed = false;
                for si in 0..self.sps.len() {
                    if si != self.star {
                        let new = v[si] & v[self.star];
                        if new != v[si] {
                            v[si] = new;
                            changed = true;
                        }
                    }
                }
                for &(s, u) in &self.stated {
                    let new = v[s] & v[u];
                    if new != v[s] {
                        v[s] = new;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            // boxes true at inner but false at outer need an outer witness
            for (k, &(_, si, body)) in self.boxes.iter().enumerate() {
                if beta >> k & 1 == 1 && b >> k & 1 == 0 && v[si] & (!tab[body] & self.full) == 0 {
                    continue 'guess;
                }
            }
            // escape: some outer valuation set leaves the inner image
            if (0..self.sps.len()).any(|si| v[si] & !profile[si] != 0) {
                return true;
            }
        }
        false
    }

    /// The box truth assignment realised by a model profile, computed
    /// bottom-up: a box is true iff its body holds at every inner valuation
    /// of its standpoint. The closure is children-first, so one pass works.
    fn beta_of(&self, profile: &[VSet]) -> u32 {
        let mut beta = 0u32;
        let mut tab = vec![0 as VSet; self.formulas.len()];
        for i in 0..self.formulas.len() {
            tab[i] = match self.shapes[i] {
                Shape::Atom(ai) => {
                    let mut m = 0;
                    for v in 0..self.n_vals() {
                        if v >> ai & 1 == 1 {
                            m |= 1 << v;
                        }
                    }
                    m
                }
                Shape::Bottom => 0,
                Shape::Not(g) => !tab[g] & self.full,
                Shape::And(a, b) => tab[a] & tab[b],
                Shape::Or(a, b) => tab[a] | tab[b],
                Shape::Implies(a, b) => (!tab[a] & self.full) | tab[b],
                Shape::Box => {
                    let k = self.box_bit[&i];
                    let (_, si, body) = self.boxes[k];
                    let holds = profile[si] & !tab[body] == 0;
                    if holds {
                        beta |= 1 << k;
                        self.full
                    } else {
                        0
                    }
                }
            };
        }
        beta
    }
}

// ---------------------------------------------------------------------------
// Public oracle operations
// ---------------------------------------------------------------------------

/// Enumerates the canonical profiles of all minimal models of the theory by
/// exhaustive search: every canonical S5 model, with every dominating S4F
/// extension attempted.
pub fn brute_minimal_models(t: &Theory) -> Result<BTreeSet<CanonicalProfile>, OracleError> {
    let ctx = Ctx::new(t, &[])?;
    let mut out = BTreeSet::new();
    for profile in ctx.model_profiles() {
        let beta = ctx.beta_of(&profile);
        if !ctx.dominated(&profile, beta) {
            out.insert(ctx.profile_to_canonical(&profile));
        }
    }
    Ok(out)
}

/// Satisfiability by exhaustive canonical-structure search. A theory is
/// satisfiable iff it has an S5 model (dropping the outer sets of any model
/// preserves all inner-point truths), so S5 profiles suffice.
pub fn brute_satisfiable(t: &Theory) -> Result<bool, OracleError> {
    let ctx = Ctx::new(t, &[])?;
    Ok(!ctx.model_profiles().is_empty())
}

/// Entailment by exhaustive countermodel search: `T |= f` iff no S4F model
/// of `T` dissatisfies `f` at some precisification (inner or outer).
pub fn brute_entails(t: &Theory, f: &Formula) -> Result<bool, OracleError> {
    let ctx = Ctx::new(t, std::slice::from_ref(f))?;
    let nf = f.normalize_diamonds();
    let query_idx =
        ctx.formulas.iter().position(|x| *x == nf).expect("query is in the closure");
    let n_boxes = ctx.boxes.len();
    for profile in ctx.model_profiles() {
        let beta = ctx.beta_of(&profile);
        let tab = ctx.eval_tables(beta);
        if profile[ctx.star] & (!tab[query_idx] & ctx.full) != 0 {
            return Ok(false); // fails at an inner precisification
        }
        'guess: for b in 0u32..(1u32 << n_boxes) {
            if b & !beta != 0 {
                continue;
            }
            let tab = ctx.eval_tables(b);
            let ok: VSet = ctx.roots.iter().fold(ctx.full, |m, &r| m & tab[r]);
            let mut v = vec![ctx.full; ctx.sps.len()];
            v[ctx.star] &= ok;
            for (k, &(_, si, body)) in ctx.boxes.iter().enumerate() {
                if b >> k & 1 == 1 {
                    v[si] &= tab[body];
                }
            }
            loop {
                let mut changed = false;
                for si in 0..ctx.sps.len() {
                    if si != ctx.star {
                        let new = v[si] & v[ctx.star];
                        if new != v[si] {
                            v[si] = new;
                            changed = true;
                        }
                    }
                }
                for &(s, u) in &ctx.stated {
                    let new = v[s] & v[u];
                    if new != v[s] {
                        v[s] = new;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            for (k, &(_, si, body)) in ctx.boxes.iter().enumerate() {
                if beta >> k & 1 == 1 && b >> k & 1 == 0 && v[si] & (!tab[body] & ctx.full) == 0 {
                    continue 'guess;
                }
            }
            if v[ctx.star] & (!tab[query_idx] & ctx.full) != 0 {
                return Ok(false); // fails at an outer precisification
            }
        }
    }
    Ok(true)
}

/// The determination comparison between two structures over the same
/// vocabulary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub leq_s: BTreeMap<StandpointName, bool>,
    pub leq: bool,
    pub strict: bool,
    pub equiv: bool,
}

/// Implements the determination orderings literally: `f1 <=_s f2` iff the
/// inner valuation images agree on `s` and every outer valuation of `f1`
/// occurs among `f2`'s inner-or-outer valuations... with the roles as in
/// the ordering definition: the *left* structure is the less determined one.
pub fn compare_structures(f1: &SPStructure, f2: &SPStructure) -> Result<Comparison, OracleError> {
    if f1.atoms != f2.atoms || f1.standpoints != f2.standpoints {
        return Err(OracleError::VocabularyMismatch);
    }
    let images = |st: &SPStructure, ids: &BTreeSet<String>| -> BTreeSet<BTreeSet<Atom>> {
        ids.iter().filter_map(|id| st.valuation_of(id).cloned()).collect()
    };
    let leq_one = |a: &SPStructure, b: &SPStructure, s: &StandpointName| {
        let inner_a = images(a, &a.inner_set(s));
        let inner_b = images(b, &b.inner_set(s));
        let outer_a = images(a, &a.outer_set(s));
        let both_a: BTreeSet<BTreeSet<Atom>> =
            inner_a.union(&outer_a).cloned().collect();
        // f1 <=_s f2 : gamma2(inner2) = gamma1(inner1), gamma2(outer2) subset gamma1(inner1 + outer1)
        let outer_b = images(b, &b.outer_set(s));
        inner_b == inner_a && outer_b.is_subset(&both_a)
    };
    let leq_s: BTreeMap<StandpointName, bool> =
        f1.standpoints.iter().map(|s| (s.clone(), leq_one(f1, f2, s))).collect();
    let leq = leq_s.values().all(|&b| b);
    let back = f1.standpoints.iter().all(|s| leq_one(f2, f1, s));
    Ok(Comparison { leq_s, leq, strict: leq && !back, equiv: leq && back })
}

/// The formula satisfied exactly by valuations other than `E` (over the
/// given vocabulary): `!(conj of E-atoms & conj of negated non-E-atoms)`.
pub fn uniq_formula(e: &BTreeSet<Atom>, vocab: &BTreeSet<Atom>) -> Formula {
    let mut conjuncts = Vec::new();
    for a in vocab {
        if e.contains(a) {
            conjuncts.push(Formula::Atom(a.clone()));
        } else {
            conjuncts.push(Formula::not(Formula::Atom(a.clone())));
        }
    }
    match Formula::conjoin(conjuncts) {
        Some(c) => Formula::not(c),
        None => Formula::not(Formula::not(Formula::Bottom)),
    }
}

/// Stable extensions of an argumentation framework by exhaustive subset
/// check: conflict-free sets attacking every outside argument.
pub fn af_stable(
    args: &BTreeSet<Atom>,
    attacks: &BTreeSet<(Atom, Atom)>,
) -> BTreeSet<BTreeSet<Atom>> {
    let arg_list: Vec<&Atom> = args.iter().collect();
    let mut out = BTreeSet::new();
    for bits in 0u32..(1u32 << arg_list.len()) {
        let set: BTreeSet<Atom> = arg_list
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, a)| (*a).clone())
            .collect();
        let conflict_free =
            !attacks.iter().any(|(a, b)| set.contains(a) && set.contains(b));
        let attacks_outside = arg_list
            .iter()
            .filter(|a| !set.contains(**a))
            .all(|b| attacks.iter().any(|(a, b2)| set.contains(a) && b2 == *b));
        if conflict_free && attacks_outside {
            out.insert(set);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Reference evaluators for the generalisation properties
// ---------------------------------------------------------------------------

/// A plain standpoint structure (every world globally reachable): worlds
/// with valuations and one precisification set per standpoint, the
/// universal one holding all worlds.
pub struct SlStructure {
    pub valuations: Vec<BTreeSet<Atom>>,
    pub sigma: BTreeMap<StandpointName, BTreeSet<usize>>,
}

impl SlStructure {
    /// Satisfaction at a world; boxes always quantify over `sigma(s)`.
    pub fn satisfies_at(&self, w: usize, e: &Expression) -> bool {
        match e {
            Expression::Sharpening(s, u) => {
                let a = self.sigma.get(s).cloned().unwrap_or_default();
                let b = self.sigma.get(u).cloned().unwrap_or_default();
                a.is_subset(&b)
            }
            Expression::Formula(f) => self.eval(w, f),
        }
    }

    fn eval(&self, w: usize, f: &Formula) -> bool {
        match f {
            Formula::Atom(a) => self.valuations[w].contains(a),
            Formula::Bottom => false,
            Formula::Not(g) => !self.eval(w, g),
            Formula::And(a, b) => self.eval(w, a) && self.eval(w, b),
            Formula::Or(a, b) => self.eval(w, a) || self.eval(w, b),
            Formula::Implies(a, b) => !self.eval(w, a) || self.eval(w, b),
            Formula::Box(s, g) => {
                self.sigma.get(s).into_iter().flatten().all(|&v| self.eval(v, g))
            }
            Formula::Diamond(s, g) => {
                self.sigma.get(s).into_iter().flatten().any(|&v| self.eval(v, g))
            }
        }
    }

    pub fn models(&self, e: &Expression) -> bool {
        (0..self.valuations.len()).all(|w| self.satisfies_at(w, e))
    }
}

/// A unimodal two-cluster structure: outer and inner worlds, the single
/// modality reading "known".
pub struct UnimodalS4F {
    pub outer: Vec<BTreeSet<Atom>>,
    pub inner: Vec<BTreeSet<Atom>>,
}

impl UnimodalS4F {
    /// Worlds are indexed with outer worlds first.
    pub fn satisfies_at(&self, w: usize, f: &Formula) -> bool {
        let val = if w < self.outer.len() {
            &self.outer[w]
        } else {
            &self.inner[w - self.outer.len()]
        };
        match f {
            Formula::Atom(a) => val.contains(a),
            Formula::Bottom => false,
            Formula::Not(g) => !self.satisfies_at(w, g),
            Formula::And(a, b) => self.satisfies_at(w, a) && self.satisfies_at(w, b),
            Formula::Or(a, b) => self.satisfies_at(w, a) || self.satisfies_at(w, b),
            Formula::Implies(a, b) => !self.satisfies_at(w, a) || self.satisfies_at(w, b),
            Formula::Box(s, g) => {
                debug_assert!(s.is_universal(), "unimodal formulas use `*` only");
                if w < self.outer.len() {
                    (0..self.outer.len() + self.inner.len()).all(|v| self.satisfies_at(v, g))
                } else {
                    (self.outer.len()..self.outer.len() + self.inner.len())
                        .all(|v| self.satisfies_at(v, g))
                }
            }
            Formula::Diamond(s, g) => {
                self.satisfies_at(w, &Formula::not(Formula::boxed(
                    s.clone(),
                    Formula::not((**g).clone()),
                )))
            }
        }
    }

    pub fn models(&self, f: &Formula) -> bool {
        (0..self.outer.len() + self.inner.len()).all(|w| self.satisfies_at(w, f))
    }
}
