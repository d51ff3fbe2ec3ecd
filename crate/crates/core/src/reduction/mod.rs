//! The cage/hinge construction `π -> π†`.
//!
//! Every descent `(a_i, a_{i+1})` of `π` becomes a cage
//! `L_i a_i m_i a_{i+1} U_i` constrained by `L_i < a_{i+1} < m_i < a_i < U_i`,
//! so the cage holds exactly two descents. Ascending adjacencies of `π` are
//! copied through. An element shared by two consecutive descents appears in
//! the left cage itself and in the right cage as a [`GadgetToken::Shadow`]
//! valued above it; hinge tokens are placed after the cages that share it.
//! Every adjacency that is not inside a cage is constrained to ascend, and
//! the tokens are relabelled to `1..=N` by a deterministic linear extension.
//!
//! The construction is split into [`build_cages`], [`insert_hinges`] and
//! [`relabel`]; [`build_dagger`] runs all three.

mod project;
mod verify;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permutation::{ParseError, Permutation};

pub use project::{cage_swap_schedule, forward_schedule, project_schedule, ProjectionError};
pub use verify::{verify_instance, InvariantCheck, VerifyReport};

/// Where hinge tokens go relative to the two cages sharing an element.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HingeLayout {
    /// `h^L` between the cages, `h^R` after the right cage. A right hinge
    /// that lands where the next left hinge would go is merged with it.
    #[default]
    Figure,
    /// Both hinges between the two cages.
    Text,
}

impl fmt::Display for HingeLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HingeLayout::Figure => "figure",
            HingeLayout::Text => "text",
        })
    }
}

impl std::str::FromStr for HingeLayout {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "figure" => Ok(HingeLayout::Figure),
            "text" => Ok(HingeLayout::Text),
            other => Err(format!("unknown hinge layout {other:?} (expected figure|text)")),
        }
    }
}

/// A token of `π†` with its provenance in `π`.
///
/// `boundary` is the 1-based descent index `i` of `(a_i, a_{i+1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GadgetToken {
    Original { element: u32 },
    GuardLow { boundary: usize },
    Median { boundary: usize },
    GuardHigh { boundary: usize },
    /// Second copy of an element shared by cages `boundary - 1` and `boundary`.
    Shadow { element: u32, boundary: usize },
    HingeLeft { shared: u32 },
    HingeRight { shared: u32 },
    /// Right hinge of `closes` merged with the left hinge of `opens`.
    HingeJoint { closes: u32, opens: u32 },
}

impl GadgetToken {
    pub fn is_hinge(&self) -> bool {
        matches!(
            self,
            GadgetToken::HingeLeft { .. } | GadgetToken::HingeRight { .. } | GadgetToken::HingeJoint { .. }
        )
    }

    /// The source element this token stands for, if any.
    pub fn element(&self) -> Option<u32> {
        match *self {
            GadgetToken::Original { element } | GadgetToken::Shadow { element, .. } => Some(element),
            _ => None,
        }
    }

    fn kind_rank(&self) -> u8 {
        match self {
            GadgetToken::Original { .. } => 0,
            GadgetToken::Shadow { .. } => 1,
            GadgetToken::GuardLow { .. } => 2,
            GadgetToken::Median { .. } => 3,
            GadgetToken::GuardHigh { .. } => 4,
            _ => 5,
        }
    }

    /// Short label used by the renderers, e.g. `L3`, `m3`, `U3`, `2'`, `hL2`.
    pub fn label(&self) -> String {
        match *self {
            GadgetToken::Original { element } => element.to_string(),
            GadgetToken::GuardLow { boundary } => format!("L{boundary}"),
            GadgetToken::Median { boundary } => format!("m{boundary}"),
            GadgetToken::GuardHigh { boundary } => format!("U{boundary}"),
            GadgetToken::Shadow { element, .. } => format!("{element}'"),
            GadgetToken::HingeLeft { shared } => format!("hL{shared}"),
            GadgetToken::HingeRight { shared } => format!("hR{shared}"),
            GadgetToken::HingeJoint { closes, opens } => format!("hR{closes}/hL{opens}"),
        }
    }
}

/// Why a `lo < hi` constraint exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeReason {
    /// `L_i < a_{i+1} < m_i < a_i < U_i`.
    Cage,
    /// Adjacent tokens outside a single cage must ascend.
    Ascent,
    /// Adjacency involving a hinge token.
    Hinge,
    /// A shared element lies below its shadow.
    Shadow,
}

/// Strict order constraints over a token sequence; indices are positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    tokens: Vec<GadgetToken>,
    less_than: BTreeMap<(usize, usize), EdgeReason>,
}

impl ConstraintSet {
    pub fn tokens(&self) -> &[GadgetToken] {
        &self.tokens
    }

    /// `(lo, hi, reason)` triples sorted by position.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EdgeReason)> + '_ {
        self.less_than.iter().map(|(&(lo, hi), &r)| (lo, hi, r))
    }

    pub fn len(&self) -> usize {
        self.less_than.len()
    }

    pub fn is_empty(&self) -> bool {
        self.less_than.is_empty()
    }

    /// Adds `lo < hi`; the first reason recorded for a pair wins.
    pub fn add(&mut self, lo: usize, hi: usize, reason: EdgeReason) {
        assert!(lo < self.tokens.len() && hi < self.tokens.len() && lo != hi);
        self.less_than.entry((lo, hi)).or_insert(reason);
    }

    pub fn cages(&self) -> Vec<Cage> {
        find_cages(&self.tokens)
    }

    fn add_adjacency(&mut self) {
        let cages = find_cages(&self.tokens);
        let mut cage_of = vec![None; self.tokens.len()];
        for (idx, c) in cages.iter().enumerate() {
            for pos in c.span() {
                cage_of[pos] = Some(idx);
            }
        }
        for k in 0..self.tokens.len().saturating_sub(1) {
            if cage_of[k].is_some() && cage_of[k] == cage_of[k + 1] {
                continue;
            }
            let reason = if self.tokens[k].is_hinge() || self.tokens[k + 1].is_hinge() {
                EdgeReason::Hinge
            } else {
                EdgeReason::Ascent
            };
            self.add(k, k + 1, reason);
        }
    }
}

/// Five consecutive tokens `L a m b U` standing for the descent `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cage {
    pub boundary: usize,
    /// Position of `L_i`; the cage spans `start..start + 5`.
    pub start: usize,
    /// `a_i`, the larger element.
    pub left: u32,
    /// `a_{i+1}`.
    pub right: u32,
}

impl Cage {
    pub fn span(&self) -> std::ops::Range<usize> {
        self.start..self.start + 5
    }

    pub fn left_pos(&self) -> usize {
        self.start + 1
    }

    pub fn median_pos(&self) -> usize {
        self.start + 2
    }

    pub fn right_pos(&self) -> usize {
        self.start + 3
    }

    pub fn high_pos(&self) -> usize {
        self.start + 4
    }
}

/// Cages of a token sequence, in positional order. Malformed windows are
/// skipped; the verifier reports them.
pub(crate) fn find_cages(tokens: &[GadgetToken]) -> Vec<Cage> {
    let mut cages = Vec::new();
    for (start, window) in tokens.windows(5).enumerate() {
        let GadgetToken::GuardLow { boundary } = window[0] else {
            continue;
        };
        let left = match window[1] {
            GadgetToken::Original { element } => element,
            GadgetToken::Shadow { element, boundary: b } if b == boundary => element,
            _ => continue,
        };
        let (GadgetToken::Median { boundary: bm }, GadgetToken::Original { element: right }, GadgetToken::GuardHigh { boundary: bu }) =
            (window[2], window[3], window[4])
        else {
            continue;
        };
        if bm == boundary && bu == boundary {
            cages.push(Cage {
                boundary,
                start,
                left,
                right,
            });
        }
    }
    cages
}

fn descents(p: &Permutation) -> Vec<bool> {
    // descent[i] for 1-based boundary i, i.e. a_i > a_{i+1}.
    let a = p.as_slice();
    let mut d = vec![false; a.len() + 1];
    for i in 1..a.len() {
        d[i] = a[i - 1] > a[i];
    }
    d
}

/// One cage per descent in left-to-right order, ascending adjacencies copied
/// through. Shared elements get a shadow in the right cage.
pub fn build_cages(p: &Permutation) -> ConstraintSet {
    let a = p.as_slice();
    let n = a.len();
    let desc = descents(p);
    let mut tokens = Vec::with_capacity(n + 4 * p.rev().rev);
    let mut chains = Vec::new();
    let mut shadows = Vec::new();
    let mut original_pos = vec![usize::MAX; n + 1];
    for i in 1..=n {
        let element = a[i - 1];
        let shared = i > 1 && desc[i - 1];
        if i < n && desc[i] {
            let start = tokens.len();
            let left = if shared {
                shadows.push((element, start + 1));
                GadgetToken::Shadow { element, boundary: i }
            } else {
                original_pos[element as usize] = start + 1;
                GadgetToken::Original { element }
            };
            original_pos[a[i] as usize] = start + 3;
            tokens.extend([
                GadgetToken::GuardLow { boundary: i },
                left,
                GadgetToken::Median { boundary: i },
                GadgetToken::Original { element: a[i] },
                GadgetToken::GuardHigh { boundary: i },
            ]);
            // L < a_{i+1} < m < a_i < U
            chains.push([start, start + 3, start + 2, start + 1, start + 4]);
        } else if !shared {
            original_pos[element as usize] = tokens.len();
            tokens.push(GadgetToken::Original { element });
        }
    }
    let mut set = ConstraintSet {
        tokens,
        less_than: BTreeMap::new(),
    };
    for chain in chains {
        for w in chain.windows(2) {
            set.add(w[0], w[1], EdgeReason::Cage);
        }
    }
    for (element, pos) in shadows {
        set.add(original_pos[element as usize], pos, EdgeReason::Shadow);
    }
    set.add_adjacency();
    set
}

/// Inserts hinge tokens for every element shared by two consecutive cages
/// and re-derives the adjacency constraints around them.
pub fn insert_hinges(cages: &ConstraintSet, p: &Permutation, layout: HingeLayout) -> ConstraintSet {
    let a = p.as_slice();
    let desc = descents(p);
    // Tokens to insert right after the U of each boundary's cage.
    let mut after: BTreeMap<usize, Vec<GadgetToken>> = BTreeMap::new();
    for j in 2..a.len() {
        if !(desc[j - 1] && desc[j]) {
            continue;
        }
        let shared = a[j - 1];
        match layout {
            HingeLayout::Figure => {
                let left_slot = after.entry(j - 1).or_default();
                match left_slot.pop() {
                    Some(GadgetToken::HingeRight { shared: closes }) => {
                        left_slot.push(GadgetToken::HingeJoint { closes, opens: shared })
                    }
                    Some(other) => {
                        left_slot.push(other);
                        left_slot.push(GadgetToken::HingeLeft { shared });
                    }
                    None => left_slot.push(GadgetToken::HingeLeft { shared }),
                }
                after.entry(j).or_default().push(GadgetToken::HingeRight { shared });
            }
            HingeLayout::Text => {
                after
                    .entry(j - 1)
                    .or_default()
                    .extend([GadgetToken::HingeLeft { shared }, GadgetToken::HingeRight { shared }]);
            }
        }
    }

    let mut tokens = Vec::with_capacity(cages.tokens.len() + 2 * after.len());
    let mut remap = Vec::with_capacity(cages.tokens.len());
    for &t in &cages.tokens {
        remap.push(tokens.len());
        tokens.push(t);
        if let GadgetToken::GuardHigh { boundary } = t {
            if let Some(extra) = after.get(&boundary) {
                tokens.extend(extra.iter().copied());
            }
        }
    }
    let mut set = ConstraintSet {
        tokens,
        less_than: BTreeMap::new(),
    };
    for (lo, hi, reason) in cages.edges() {
        if matches!(reason, EdgeReason::Cage | EdgeReason::Shadow) {
            set.add(remap[lo], remap[hi], reason);
        }
    }
    set.add_adjacency();
    set
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("constraint cycle through {}", .0.iter().map(GadgetToken::label).collect::<Vec<_>>().join(" < "))]
    ConstraintCycle(Vec<GadgetToken>),
    #[error("instance tokens and permutation disagree: {0}")]
    Malformed(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `π†` together with the provenance of each position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetInstance {
    pub source: Permutation,
    /// `rev(source)`.
    pub r: usize,
    pub layout: HingeLayout,
    pub pi_dagger: Permutation,
    /// `tokens[pos]` is the token at position `pos` of `pi_dagger`.
    pub tokens: Vec<GadgetToken>,
    /// Sorted `(lo, hi, reason)` position triples.
    pub constraints: Vec<(usize, usize, EdgeReason)>,
}

impl GadgetInstance {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn cages(&self) -> Vec<Cage> {
        find_cages(&self.tokens)
    }

    /// Number of elements shared by two consecutive descents of the source.
    pub fn shared_count(&self) -> usize {
        self.tokens
            .iter()
            .filter(|t| matches!(t, GadgetToken::Shadow { .. }))
            .count()
    }
}

/// Assigns values `1..=N` by repeatedly taking the constraint-minimal token
/// with the smallest `(kind rank, source position, position)` key.
pub fn relabel(set: &ConstraintSet, source: &Permutation, layout: HingeLayout) -> Result<GadgetInstance, ReductionError> {
    let len = set.tokens.len();
    let src_pos = source.positions();
    let source_key = |t: &GadgetToken| -> usize {
        match *t {
            GadgetToken::Original { element } | GadgetToken::Shadow { element, .. } => src_pos[element as usize - 1],
            GadgetToken::GuardLow { boundary } | GadgetToken::Median { boundary } | GadgetToken::GuardHigh { boundary } => {
                boundary - 1
            }
            GadgetToken::HingeLeft { shared } | GadgetToken::HingeRight { shared } => src_pos[shared as usize - 1],
            GadgetToken::HingeJoint { opens, .. } => src_pos[opens as usize - 1],
        }
    };

    let mut indegree = vec![0usize; len];
    let mut succ = vec![Vec::new(); len];
    for (lo, hi, _) in set.edges() {
        indegree[hi] += 1;
        succ[lo].push(hi);
    }
    let key = |pos: usize| Reverse((set.tokens[pos].kind_rank(), source_key(&set.tokens[pos]), pos));
    let mut ready: BinaryHeap<_> = (0..len).filter(|&k| indegree[k] == 0).map(key).collect();
    let mut values = vec![0u32; len];
    let mut next = 1u32;
    while let Some(Reverse((_, _, pos))) = ready.pop() {
        values[pos] = next;
        next += 1;
        for &hi in &succ[pos] {
            indegree[hi] -= 1;
            if indegree[hi] == 0 {
                ready.push(key(hi));
            }
        }
    }
    if (next as usize) <= len {
        return Err(ReductionError::ConstraintCycle(find_cycle(set, &indegree)));
    }

    Ok(GadgetInstance {
        source: source.clone(),
        r: source.rev().rev,
        layout,
        pi_dagger: Permutation::new(values).expect("a linear extension is a permutation"),
        tokens: set.tokens.clone(),
        constraints: set.edges().collect(),
    })
}

/// A cycle among the tokens Kahn's algorithm could not place.
fn find_cycle(set: &ConstraintSet, indegree: &[usize]) -> Vec<GadgetToken> {
    let stuck: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
    let mut succ = vec![Vec::new(); set.tokens.len()];
    for (lo, hi, _) in set.edges() {
        if stuck[lo] && stuck[hi] {
            succ[lo].push(hi);
        }
    }
    // Every stuck node has a stuck predecessor; walk predecessors until a repeat.
    let mut pred = vec![None; set.tokens.len()];
    for (lo, hi, _) in set.edges() {
        if stuck[lo] && stuck[hi] {
            pred[hi] = Some(lo);
        }
    }
    let Some(mut cur) = stuck.iter().position(|&s| s) else {
        return Vec::new();
    };
    let mut visited = vec![false; set.tokens.len()];
    while !visited[cur] {
        visited[cur] = true;
        cur = pred[cur].expect("stuck tokens have a stuck predecessor");
    }
    let mut cycle = vec![cur];
    let mut walk = pred[cur].unwrap();
    while walk != cur {
        cycle.push(walk);
        walk = pred[walk].unwrap();
    }
    cycle.reverse();
    cycle.into_iter().map(|pos| set.tokens[pos]).collect()
}

/// `build_cages`, `insert_hinges` and `relabel` in sequence.
pub fn build_dagger(p: &Permutation) -> GadgetInstance {
    build_dagger_with(p, HingeLayout::Figure)
}

pub fn build_dagger_with(p: &Permutation, layout: HingeLayout) -> GadgetInstance {
    let cages = build_cages(p);
    let hinged = insert_hinges(&cages, p, layout);
    relabel(&hinged, p, layout).expect("the construction emits acyclic constraints")
}

/// JSON form of a [`GadgetInstance`]; positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub source: Vec<u32>,
    #[serde(rename = "R")]
    pub r: usize,
    pub hinge_layout: HingeLayout,
    pub permutation: Vec<u32>,
    pub tokens: Vec<TokenRecord>,
    pub constraints: Vec<ConstraintRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenRecord {
    pub position: usize,
    pub value: u32,
    #[serde(flatten)]
    pub token: GadgetToken,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintRecord {
    pub lo: usize,
    pub hi: usize,
    pub reason: EdgeReason,
}

impl GadgetInstance {
    pub fn to_record(&self) -> InstanceRecord {
        InstanceRecord {
            source: self.source.as_slice().to_vec(),
            r: self.r,
            hinge_layout: self.layout,
            permutation: self.pi_dagger.as_slice().to_vec(),
            tokens: self
                .tokens
                .iter()
                .enumerate()
                .map(|(pos, &token)| TokenRecord {
                    position: pos + 1,
                    value: self.pi_dagger.as_slice()[pos],
                    token,
                })
                .collect(),
            constraints: self
                .constraints
                .iter()
                .map(|&(lo, hi, reason)| ConstraintRecord {
                    lo: lo + 1,
                    hi: hi + 1,
                    reason,
                })
                .collect(),
        }
    }

    /// Loads a record without checking the gadget invariants, so that
    /// damaged instances can still be handed to [`verify_instance`].
    pub fn from_record(record: InstanceRecord) -> Result<Self, ReductionError> {
        let source = Permutation::new(record.source)?;
        let pi_dagger = Permutation::new(record.permutation)?;
        let n = pi_dagger.len();
        if record.tokens.len() != n {
            return Err(ReductionError::Malformed(format!(
                "{} tokens for a permutation of length {n}",
                record.tokens.len()
            )));
        }
        let mut tokens = Vec::with_capacity(n);
        for (idx, t) in record.tokens.into_iter().enumerate() {
            if t.position != idx + 1 || t.value != pi_dagger.as_slice()[idx] {
                return Err(ReductionError::Malformed(format!(
                    "token row {} has position {} value {}",
                    idx + 1,
                    t.position,
                    t.value
                )));
            }
            tokens.push(t.token);
        }
        let mut constraints = Vec::with_capacity(record.constraints.len());
        for c in record.constraints {
            if c.lo == 0 || c.hi == 0 || c.lo > n || c.hi > n {
                return Err(ReductionError::Malformed(format!("constraint {} < {} out of range", c.lo, c.hi)));
            }
            constraints.push((c.lo - 1, c.hi - 1, c.reason));
        }
        constraints.sort();
        Ok(Self {
            source,
            r: record.r,
            layout: record.hinge_layout,
            pi_dagger,
            tokens,
            constraints,
        })
    }
}

impl Serialize for GadgetInstance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_record().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GadgetInstance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        GadgetInstance::from_record(InstanceRecord::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutation::parse_permutation;

    fn perm(text: &str) -> Permutation {
        parse_permutation(text).unwrap()
    }

    fn labels(tokens: &[GadgetToken]) -> String {
        tokens.iter().map(GadgetToken::label).collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn cages_for_yes_instance() {
        let set = build_cages(&perm("4 1 3 2"));
        assert_eq!(labels(set.tokens()), "L1 4 m1 1 U1 L3 3 m3 2 U3");
        assert_eq!(set.cages().len(), 2);
        let hinged = insert_hinges(&set, &perm("4 1 3 2"), HingeLayout::Figure);
        assert_eq!(hinged.tokens(), set.tokens());
    }

    #[test]
    fn identity_passes_through() {
        let p = Permutation::identity(5);
        let set = build_cages(&p);
        assert_eq!(labels(set.tokens()), "1 2 3 4 5");
        let inst = build_dagger(&p);
        assert_eq!(inst.pi_dagger, p);
        assert_eq!(inst.r, 0);
    }

    #[test]
    fn cages_for_no_instance_share_three() {
        let p = perm("7 2 6 5 8 3 1 4");
        let set = build_cages(&p);
        assert_eq!(
            labels(set.tokens()),
            "L1 7 m1 2 U1 L3 6 m3 5 U3 L5 8 m5 3 U5 L6 3' m6 1 U6 4"
        );
        let hinged = insert_hinges(&set, &p, HingeLayout::Figure);
        assert_eq!(
            labels(hinged.tokens()),
            "L1 7 m1 2 U1 L3 6 m3 5 U3 L5 8 m5 3 U5 hL3 L6 3' m6 1 U6 hR3 4"
        );
        let text = insert_hinges(&set, &p, HingeLayout::Text);
        assert_eq!(
            labels(text.tokens()),
            "L1 7 m1 2 U1 L3 6 m3 5 U3 L5 8 m5 3 U5 hL3 hR3 L6 3' m6 1 U6 4"
        );
    }

    #[test]
    fn hinge_for_321() {
        let p = perm("3 2 1");
        let hinged = insert_hinges(&build_cages(&p), &p, HingeLayout::Figure);
        assert_eq!(labels(hinged.tokens()), "L1 3 m1 2 U1 hL2 L2 2' m2 1 U2 hR2");
        let inst = build_dagger(&p);
        assert_eq!(inst.pi_dagger.rev().rev, 4);
        assert_eq!(inst.pi_dagger, perm("1 4 3 2 5 6 7 10 9 8 11 12"));
    }

    #[test]
    fn runs_merge_hinges_in_figure_layout() {
        let p = perm("4 3 2 1");
        let inst = build_dagger(&p);
        assert_eq!(
            labels(&inst.tokens),
            "L1 4 m1 3 U1 hL3 L2 3' m2 2 U2 hR3/hL2 L3 2' m3 1 U3 hR2"
        );
        // n + 3R + 2 shadows + 3 hinge tokens
        assert_eq!(inst.len(), 18);
        assert!(inst.len() <= 4 + 5 * 3);
        let text = build_dagger_with(&p, HingeLayout::Text);
        assert_eq!(text.len(), 4 + 3 * 3 + 3 * 2);
    }

    #[test]
    fn relabel_yes_instance() {
        let inst = build_dagger(&perm("4 1 3 2"));
        assert_eq!(inst.pi_dagger, perm("1 4 3 2 5 6 9 8 7 10"));
        assert_eq!(inst.r, 2);
        assert_eq!(inst.pi_dagger.rev().rev, 4);
    }

    #[test]
    fn relabel_reports_cycles() {
        let mut set = build_cages(&perm("2 1"));
        // Close the chain L < 1 < m < 2 < U into a loop.
        set.add(4, 0, EdgeReason::Ascent);
        let err = relabel(&set, &perm("2 1"), HingeLayout::Figure).unwrap_err();
        let ReductionError::ConstraintCycle(cycle) = err else {
            panic!("expected a cycle");
        };
        assert_eq!(cycle.len(), 5);
        assert!(cycle.contains(&GadgetToken::GuardLow { boundary: 1 }));
    }

    #[test]
    fn no_instance_dimensions() {
        let inst = build_dagger(&perm("7 2 6 5 8 3 1 4"));
        assert_eq!(inst.r, 4);
        assert_eq!(inst.pi_dagger.rev().rev, 8);
        assert_eq!(inst.len(), 23);
        assert_eq!(inst.shared_count(), 1);
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = build_dagger(&perm("7 2 6 5 8 3 1 4"));
        let json = serde_json::to_string(&inst).unwrap();
        let back: GadgetInstance = serde_json::from_str(&json).unwrap();
        assert_eq!(back, inst);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["R"], 4);
        assert_eq!(v["tokens"][0]["kind"], "guard_low");
        assert_eq!(v["tokens"][0]["boundary"], 1);
        assert_eq!(v["constraints"][0]["lo"], 1);
    }
}
