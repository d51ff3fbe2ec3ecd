//! Structural checks on a (possibly hand-edited) `π†`.

use serde::Serialize;

use super::{Cage, GadgetInstance, GadgetToken};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Empty when the check passed; otherwise the first few violations.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<InvariantCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &InvariantCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

const MAX_LISTED: usize = 5;

fn check(name: &'static str, problems: Vec<String>) -> InvariantCheck {
    let detail = if problems.len() > MAX_LISTED {
        format!("{}; and {} more", problems[..MAX_LISTED].join("; "), problems.len() - MAX_LISTED)
    } else {
        problems.join("; ")
    };
    InvariantCheck {
        name,
        passed: problems.is_empty(),
        detail,
    }
}

/// Runs every check; never short-circuits.
pub fn verify_instance(inst: &GadgetInstance) -> VerifyReport {
    let v = inst.pi_dagger.as_slice();
    let cages = inst.cages();
    let mut in_cage = vec![None; inst.tokens.len()];
    for (idx, c) in cages.iter().enumerate() {
        for pos in c.span() {
            in_cage[pos] = Some(idx);
        }
    }

    let checks = vec![
        check("token_table", token_table(inst, &cages)),
        check("rev_2r", {
            let rev = inst.pi_dagger.rev().rev;
            if rev == 2 * inst.r {
                vec![]
            } else {
                vec![format!("rev = {rev}, expected 2R = {}", 2 * inst.r)]
            }
        }),
        check(
            "cage_internal_descents",
            cages
                .iter()
                .filter_map(|c| {
                    let span = &v[c.span()];
                    let d: usize = span.windows(2).filter(|w| w[0] > w[1]).count();
                    (d != 2).then(|| format!("cage {} has {d} descents", c.boundary))
                })
                .collect(),
        ),
        check(
            "cross_boundary_ascending",
            (0..v.len().saturating_sub(1))
                .filter(|&k| in_cage[k].is_none() || in_cage[k] != in_cage[k + 1])
                .filter(|&k| v[k] > v[k + 1])
                .map(|k| {
                    format!(
                        "{} ({}) > {} ({}) at positions {}-{}",
                        label(inst, k),
                        v[k],
                        label(inst, k + 1),
                        v[k + 1],
                        k + 1,
                        k + 2
                    )
                })
                .collect(),
        ),
        check("cage_chain", cages.iter().filter_map(|c| cage_chain(v, c)).collect()),
        check(
            "constraints_respected",
            inst.constraints
                .iter()
                .filter(|&&(lo, hi, _)| lo >= v.len() || hi >= v.len() || v[lo] >= v[hi])
                .map(|&(lo, hi, reason)| format!("{:?} constraint {} < {} violated", reason, lo + 1, hi + 1))
                .collect(),
        ),
        check("size_bound", {
            let bound = inst.source.len() + 5 * inst.r;
            if inst.len() <= bound {
                vec![]
            } else {
                vec![format!("N = {} exceeds n + 5R = {bound}", inst.len())]
            }
        }),
    ];
    VerifyReport { checks }
}

fn label(inst: &GadgetInstance, pos: usize) -> String {
    inst.tokens.get(pos).map_or_else(|| "?".into(), GadgetToken::label)
}

fn cage_chain(v: &[u32], c: &Cage) -> Option<String> {
    let chain = [c.start, c.right_pos(), c.median_pos(), c.left_pos(), c.high_pos()];
    let ok = chain.windows(2).all(|w| v[w[0]] < v[w[1]]);
    (!ok).then(|| {
        let vals: Vec<String> = chain.iter().map(|&p| v[p].to_string()).collect();
        format!("cage {}: L < b < m < a < U fails on {}", c.boundary, vals.join(" "))
    })
}

/// Tokens agree with the source: one cage per descent with the right
/// elements, every element present once, shadows only for shared elements.
fn token_table(inst: &GadgetInstance, cages: &[Cage]) -> Vec<String> {
    let mut problems = Vec::new();
    let a = inst.source.as_slice();
    let descents = inst.source.rev().descent_positions;
    if inst.tokens.len() != inst.pi_dagger.len() {
        problems.push(format!("{} tokens for N = {}", inst.tokens.len(), inst.pi_dagger.len()));
    }
    if descents.len() != inst.r {
        problems.push(format!("R = {} but the source has {} descents", inst.r, descents.len()));
    }
    let expected: Vec<(usize, u32, u32)> = descents.iter().map(|&i| (i + 1, a[i], a[i + 1])).collect();
    let found: Vec<(usize, u32, u32)> = cages.iter().map(|c| (c.boundary, c.left, c.right)).collect();
    if expected != found {
        problems.push(format!("cages {found:?}, expected {expected:?}"));
    }
    let mut seen = vec![0usize; a.len() + 1];
    for t in &inst.tokens {
        match *t {
            GadgetToken::Original { element } => match seen.get_mut(element as usize) {
                Some(count) if element > 0 => *count += 1,
                _ => problems.push(format!("unknown element {element}")),
            },
            GadgetToken::Shadow { element, boundary } => {
                let shared = boundary >= 2 && descents.contains(&(boundary - 2)) && descents.contains(&(boundary - 1));
                if !shared || a.get(boundary - 1) != Some(&element) {
                    problems.push(format!("shadow {element}' at boundary {boundary} is not a shared element"));
                }
            }
            _ => {}
        }
    }
    for (element, &count) in seen.iter().enumerate().skip(1) {
        if count != 1 {
            problems.push(format!("element {element} appears {count} times"));
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::{parse_permutation, Permutation};
    use crate::reduction::{build_dagger, build_dagger_with, HingeLayout};

    #[test]
    fn constructed_instances_pass() {
        for text in ["4 1 3 2", "7 2 6 5 8 3 1 4", "3 2 1", "4 3 2 1", "1 2 3", "2 4 1 3"] {
            let p = parse_permutation(text).unwrap();
            for layout in [HingeLayout::Figure, HingeLayout::Text] {
                let report = verify_instance(&build_dagger_with(&p, layout));
                assert!(report.passed(), "{text} {layout}: {report:?}");
            }
        }
    }

    #[test]
    fn corrupted_boundary_is_reported() {
        let mut inst = build_dagger(&parse_permutation("4 1 3 2").unwrap());
        let mut v = inst.pi_dagger.clone().into_vec();
        v.swap(4, 5);
        inst.pi_dagger = Permutation::new(v).unwrap();
        let report = verify_instance(&inst);
        assert!(!report.passed());
        let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
        assert!(failed.contains(&"cross_boundary_ascending"), "{failed:?}");
        assert!(failed.contains(&"rev_2r"));
        assert!(!failed.contains(&"token_table"));
        let cross = report.checks.iter().find(|c| c.name == "cross_boundary_ascending").unwrap();
        assert!(cross.detail.contains("U1"), "{}", cross.detail);
    }

    #[test]
    fn broken_chain_is_reported() {
        let mut inst = build_dagger(&parse_permutation("2 1").unwrap());
        // L 2 m 1 U = 1 4 3 2 5; exchanging m and a keeps two descents
        // only if the chain breaks: 1 3 4 2 5.
        inst.pi_dagger = parse_permutation("1 3 4 2 5").unwrap();
        let report = verify_instance(&inst);
        let failed: Vec<&str> = report.failures().map(|c| c.name).collect();
        assert!(failed.contains(&"cage_chain"));
        assert!(failed.contains(&"constraints_respected"));
    }
}
