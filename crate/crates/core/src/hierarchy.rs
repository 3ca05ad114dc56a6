//! The syntactic sharpening relation `T |- s <= u`, computed once per theory
//! as reachability in the directed graph of stated sharpenings (with every
//! standpoint reaching `*` and itself).

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Expression, StandpointName, Theory};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("unknown standpoint name `{0}`")]
    UnknownStandpoint(StandpointName),
}

/// Reflexive-transitive closure of the stated sharpenings over the
/// standpoint vocabulary, extended with an edge to `*` from everything.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SharpeningClosure {
    universe: BTreeSet<StandpointName>,
    reach: BTreeMap<StandpointName, BTreeSet<StandpointName>>,
}

impl SharpeningClosure {
    pub(crate) fn build(
        expressions: &[Expression],
        universe: &BTreeSet<StandpointName>,
    ) -> SharpeningClosure {
        // reachability in the graph of stated sharpenings plus an edge to
        // `*` from every standpoint (so paths may continue through stated
        // sharpenings of `*`)
        let star = StandpointName::universal();
        let mut edges: BTreeMap<StandpointName, BTreeSet<StandpointName>> = BTreeMap::new();
        for e in expressions {
            if let Expression::Sharpening(s, u) = e {
                edges.entry(s.clone()).or_default().insert(u.clone());
            }
        }
        for s in universe {
            edges.entry(s.clone()).or_default().insert(star.clone());
        }
        let mut reach = BTreeMap::new();
        for s in universe {
            let mut seen: BTreeSet<StandpointName> = BTreeSet::new();
            let mut stack = vec![s.clone()];
            while let Some(x) = stack.pop() {
                if !seen.insert(x.clone()) {
                    continue;
                }
                for y in edges.get(&x).into_iter().flatten() {
                    stack.push(y.clone());
                }
            }
            reach.insert(s.clone(), seen);
        }
        SharpeningClosure { universe: universe.clone(), reach }
    }

    pub fn universe(&self) -> &BTreeSet<StandpointName> {
        &self.universe
    }

    /// `T |- s <= u` for names in the theory's vocabulary.
    pub fn derives(
        &self,
        s: &StandpointName,
        u: &StandpointName,
    ) -> Result<bool, HierarchyError> {
        if !self.universe.contains(s) {
            return Err(HierarchyError::UnknownStandpoint(s.clone()));
        }
        if !self.universe.contains(u) {
            return Err(HierarchyError::UnknownStandpoint(u.clone()));
        }
        Ok(self.holds(s, u))
    }

    /// Total variant: names outside the vocabulary have no stated edges, so
    /// only the base cases (`u = *`, `s = u`) apply to them.
    pub fn holds(&self, s: &StandpointName, u: &StandpointName) -> bool {
        if u.is_universal() || s == u {
            return true;
        }
        self.reach.get(s).is_some_and(|r| r.contains(u))
    }

    /// All derivable pairs `(s, u)` over the vocabulary, including the
    /// reflexive and universal base cases.
    pub fn pairs(&self) -> Vec<(StandpointName, StandpointName)> {
        let mut out = Vec::new();
        for s in &self.universe {
            for u in &self.universe {
                if self.holds(s, u) {
                    out.push((s.clone(), u.clone()));
                }
            }
        }
        out
    }
}

/// `derives(T, s, u)` per the inductive definition of the sharpening
/// hierarchy; decided by graph reachability.
pub fn derives(
    t: &Theory,
    s: &StandpointName,
    u: &StandpointName,
) -> Result<bool, HierarchyError> {
    t.closure().derives(s, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_theory, Mode};

    fn sp(n: &str) -> StandpointName {
        StandpointName::new(n).unwrap()
    }

    #[test]
    fn base_cases() {
        let t = parse_theory("[s] p.", Mode::Spt).unwrap();
        assert!(derives(&t, &sp("s"), &StandpointName::universal()).unwrap());
        assert!(derives(&t, &sp("s"), &sp("s")).unwrap());
        assert!(derives(&t, &StandpointName::universal(), &StandpointName::universal()).unwrap());
    }

    #[test]
    fn example_one_d1_sharpens_m() {
        let t = parse_theory("D1 <= M. D2 <= M. [D1] p. [D2] q. [M] r.", Mode::Spt).unwrap();
        assert!(derives(&t, &sp("D1"), &sp("M")).unwrap());
        assert!(!derives(&t, &sp("M"), &sp("D1")).unwrap());
        assert!(!derives(&t, &sp("D1"), &sp("D2")).unwrap());
    }

    #[test]
    fn transitive_chain() {
        let t = parse_theory("a <= b. b <= c. [a] p. [c] q.", Mode::Spt).unwrap();
        assert!(derives(&t, &sp("a"), &sp("c")).unwrap());
        assert!(!derives(&t, &sp("c"), &sp("a")).unwrap());
    }

    #[test]
    fn unknown_standpoint_is_an_error() {
        let t = parse_theory("[s] p.", Mode::Spt).unwrap();
        assert_eq!(
            derives(&t, &sp("nope"), &sp("s")),
            Err(HierarchyError::UnknownStandpoint(sp("nope")))
        );
    }

    /// Closure agrees with an independent Floyd-Warshall-style oracle on
    /// random edge sets.
    #[test]
    fn agrees_with_transitive_closure_oracle() {
        use rand::{Rng, SeedableRng};
        let names = ["a", "b", "c", "d"];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let mut stmts = String::new();
            let mut edges = Vec::new();
            for _ in 0..rng.gen_range(0..6) {
                let i = rng.gen_range(0..names.len());
                let j = rng.gen_range(0..names.len());
                stmts.push_str(&format!("{} <= {}. ", names[i], names[j]));
                edges.push((i, j));
            }
            // mention every name so it is in the vocabulary
            for n in names {
                stmts.push_str(&format!("[{n}] p. "));
            }
            let t = parse_theory(&stmts, Mode::Spt).unwrap();

            // oracle: boolean matrix closure with reflexivity
            let n = names.len();
            let mut m = vec![vec![false; n]; n];
            for i in 0..n {
                m[i][i] = true;
            }
            for &(i, j) in &edges {
                m[i][j] = true;
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        m[i][j] = m[i][j] || (m[i][k] && m[k][j]);
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(
                        derives(&t, &sp(names[i]), &sp(names[j])).unwrap(),
                        m[i][j],
                        "closure mismatch for {} <= {} under {stmts}",
                        names[i],
                        names[j]
                    );
                }
            }
        }
    }
}
