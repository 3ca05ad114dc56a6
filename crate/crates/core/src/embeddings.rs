//! Faithful, rule-by-rule translations of default theories, normal logic
//! programs, and argumentation frameworks (under stable semantics) into
//! standpoint theories. Every translation takes a standpoint annotation,
//! defaulting to `*`.

use std::collections::BTreeSet;

use crate::syntax::{
    desugar_default, AnnotatedDefault, Atom, Expression, Formula, StandpointName, Theory,
};

/// A normal logic program rule `head :- pos, not neg`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicProgramRule {
    pub head: Atom,
    pub pos: Vec<Atom>,
    pub neg: Vec<Atom>,
}

/// An abstract argumentation framework.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArgFramework {
    args: BTreeSet<Atom>,
    attacks: BTreeSet<(Atom, Atom)>,
}

impl ArgFramework {
    pub fn new(
        args: BTreeSet<Atom>,
        attacks: BTreeSet<(Atom, Atom)>,
    ) -> Result<ArgFramework, String> {
        for (a, b) in &attacks {
            if !args.contains(a) || !args.contains(b) {
                return Err(format!("attack ({a},{b}) mentions an undeclared argument"));
            }
        }
        Ok(ArgFramework { args, attacks })
    }

    pub fn args(&self) -> &BTreeSet<Atom> {
        &self.args
    }

    pub fn attacks(&self) -> &BTreeSet<(Atom, Atom)> {
        &self.attacks
    }
}

/// Translates a default; identical to the syntactic-sugar expansion.
pub fn embed_default(d: &AnnotatedDefault) -> Formula {
    desugar_default(d)
}

/// Embeds a normal logic program: `p0 :- p1..pm, not q1..qn` becomes
/// `([s]p1 & .. & [s]pm & [s]![s]q1 & .. & [s]![s]qn) -> [s]p0`; a fact
/// becomes `[s]p0` directly.
pub fn embed_lp(rules: &[LogicProgramRule], s: &StandpointName) -> Theory {
    let exprs = rules
        .iter()
        .map(|r| {
            let head = Formula::boxed(s.clone(), Formula::Atom(r.head.clone()));
            let mut body = Vec::new();
            for p in &r.pos {
                body.push(Formula::boxed(s.clone(), Formula::Atom(p.clone())));
            }
            for q in &r.neg {
                body.push(Formula::boxed(
                    s.clone(),
                    Formula::not(Formula::boxed(s.clone(), Formula::Atom(q.clone()))),
                ));
            }
            let f = match Formula::conjoin(body) {
                Some(antecedent) => Formula::implies(antecedent, head),
                None => head,
            };
            Expression::Formula(f)
        })
        .collect();
    Theory::new(exprs)
}

/// Embeds an argumentation framework under stable semantics:
/// `[s]![s]!a -> [s]a` for every argument and `[s]a -> [s]!b` for every
/// attack `(a, b)`.
pub fn embed_af(af: &ArgFramework, s: &StandpointName) -> Theory {
    let mut exprs = Vec::new();
    for a in af.args() {
        let atom = Formula::Atom(a.clone());
        exprs.push(Expression::Formula(Formula::implies(
            Formula::boxed(
                s.clone(),
                Formula::not(Formula::boxed(s.clone(), Formula::not(atom.clone()))),
            ),
            Formula::boxed(s.clone(), atom),
        )));
    }
    for (a, b) in af.attacks() {
        exprs.push(Expression::Formula(Formula::implies(
            Formula::boxed(s.clone(), Formula::Atom(a.clone())),
            Formula::boxed(s.clone(), Formula::not(Formula::Atom(b.clone()))),
        )));
    }
    Theory::new(exprs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_theory, print_theory, Mode};

    fn atom(n: &str) -> Atom {
        Atom::new(n).unwrap()
    }

    fn star() -> StandpointName {
        StandpointName::universal()
    }

    #[test]
    fn embed_default_matches_desugaring() {
        let d = AnnotatedDefault {
            standpoint: StandpointName::new("D1").unwrap(),
            prerequisite: Formula::atom("ovudis"),
            justifications: vec![Formula::atom("pcos")],
            consequent: Formula::atom("pcos"),
        };
        let expected =
            parse_formula("([D1] ovudis & [D1] ! [D1] ! pcos) -> [D1] pcos").unwrap();
        assert_eq!(embed_default(&d), expected);
    }

    #[test]
    fn prerequisite_only_default_is_strict_rule() {
        let d = AnnotatedDefault {
            standpoint: StandpointName::new("s").unwrap(),
            prerequisite: Formula::atom("a"),
            justifications: vec![],
            consequent: Formula::atom("b"),
        };
        assert_eq!(embed_default(&d), parse_formula("[s] a -> [s] b").unwrap());
    }

    #[test]
    fn lp_rule_translation() {
        let rules = vec![LogicProgramRule {
            head: atom("p"),
            pos: vec![atom("a"), atom("b")],
            neg: vec![atom("q")],
        }];
        let t = embed_lp(&rules, &star());
        let expected =
            parse_formula("([*] a & [*] b & [*] ! [*] q) -> [*] p").unwrap();
        assert_eq!(t.expressions(), &[Expression::Formula(expected)]);
    }

    #[test]
    fn lp_fact_translation() {
        let rules = vec![LogicProgramRule { head: atom("p"), pos: vec![], neg: vec![] }];
        let t = embed_lp(&rules, &star());
        assert_eq!(t.expressions(), &[Expression::Formula(parse_formula("[*] p").unwrap())]);
    }

    #[test]
    fn af_translation_shape() {
        let af = ArgFramework::new(
            [atom("a"), atom("b")].into_iter().collect(),
            [(atom("a"), atom("b"))].into_iter().collect(),
        )
        .unwrap();
        let t = embed_af(&af, &star());
        let printed = print_theory(&t);
        assert!(printed.contains("([*] (! [*] (! a))) -> [*] a"));
        assert!(printed.contains("([*] a) -> [*] (! b)"));
    }

    #[test]
    fn attack_on_undeclared_argument_rejected() {
        let err = ArgFramework::new(
            [atom("a")].into_iter().collect(),
            [(atom("a"), atom("b"))].into_iter().collect(),
        )
        .unwrap_err();
        assert!(err.contains("undeclared"));
    }

    /// Embedding a union of programs equals the union of the embeddings.
    #[test]
    fn lp_embedding_is_modular() {
        let r1 = LogicProgramRule { head: atom("p"), pos: vec![], neg: vec![atom("q")] };
        let r2 = LogicProgramRule { head: atom("q"), pos: vec![], neg: vec![atom("p")] };
        let both = embed_lp(&[r1.clone(), r2.clone()], &star());
        let mut merged: Vec<Expression> = embed_lp(&[r1], &star()).expressions().to_vec();
        merged.extend(embed_lp(&[r2], &star()).expressions().iter().cloned());
        assert_eq!(both.expressions(), Theory::new(merged).expressions());
    }

    #[test]
    fn parse_modes_feed_embeddings() {
        let t = parse_theory("p :- a, not q.\na.\n", Mode::Lp).unwrap();
        assert_eq!(t.expressions().len(), 2);
        let t = parse_theory("arg(a). arg(b). att(a,b).", Mode::Af).unwrap();
        assert_eq!(t.expressions().len(), 3);
        let t = parse_theory("[D1] default(ovudis; pcos; pcos).", Mode::Dl).unwrap();
        assert_eq!(
            t.expressions(),
            &[Expression::Formula(
                parse_formula("([D1] ovudis & [D1] ! [D1] ! pcos) -> [D1] pcos").unwrap()
            )]
        );
    }
}
