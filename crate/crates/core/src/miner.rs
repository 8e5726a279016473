//! Depth-first listing of (abstract) support-closed patterns of a strongly
//! accessible subconfluence.
//!
//! The outer loop walks the minimal elements `m1, m2, ...` in pattern order
//! and lists the closed patterns above `mi` that contain none of the earlier
//! minimals (the list `ELM`). Inside one up-set the search augments a closed
//! pattern by one item, closes the result and recurses, with an item
//! exclusion list `EL` growing left to right over sibling branches. A closed
//! pattern is reached only through closed patterns it contains, so a pattern
//! is listed exactly once.

use thiserror::Error;

use crate::galois::{Concept, ExtensionalAbstraction, ObjectContext};
use crate::pattern::{Extent, Pattern};
use crate::setsys::Family;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MineError {
    #[error("context has {context} items, family has {family}")]
    UniverseMismatch { context: usize, family: usize },
    #[error("family is not strongly accessible: no augmentation path from {0:?} to {1:?}")]
    NotStronglyAccessible(Pattern, Pattern),
    #[error("pattern {0:?} is not a member of the family")]
    NotInFamily(Pattern),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputOrder {
    /// Enumeration order.
    #[default]
    Traversal,
    /// Buffered, then sorted by intent.
    Sorted,
}

/// When a minimal element joins `ELM`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ElmPolicy {
    /// After its iteration, whether or not its closure was expanded.
    #[default]
    Always,
    /// Only when its closure passed the `ELM` test and was expanded.
    WhenExpanded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MinerConfig {
    /// Emit closed patterns whose abstract support is empty (the `⊤_m`).
    pub emit_empty_support: bool,
    pub order: OutputOrder,
    pub elm_policy: ElmPolicy,
    /// Expand sibling branches on the rayon pool. Ignored without the
    /// `parallel` feature. Output is identical to the sequential walk.
    pub parallel: bool,
}

impl Default for MinerConfig {
    fn default() -> Self {
        MinerConfig {
            emit_empty_support: true,
            order: OutputOrder::Traversal,
            elm_policy: ElmPolicy::Always,
            parallel: false,
        }
    }
}

/// A listed closed pattern and the pattern it was augmented from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MineEvent {
    pub concept: Concept,
    /// `None` for the closure of a minimal element.
    pub parent: Option<Pattern>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PruneReason {
    /// The candidate contains this earlier minimal element.
    Elm(Pattern),
    /// The candidate meets the item exclusion list in these items.
    El(Pattern),
}

/// One step of the enumeration, for tracing and golden tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    /// Outer loop: the closure of a minimal element, expanded or pruned.
    Root {
        minimal: Pattern,
        closure: Pattern,
        pruned_by: Option<Pattern>,
    },
    Emit(MineEvent),
    /// `parent ∪ {item}` closed to `candidate`, which was pruned.
    Pruned {
        parent: Pattern,
        item: usize,
        candidate: Pattern,
        reason: PruneReason,
    },
}

/// True when no element of `elm` is contained in `p`.
pub fn not_include_any_of(p: &Pattern, elm: &[Pattern]) -> bool {
    !elm.iter().any(|m| m.is_subset(p))
}

/// A closed pattern with what the search needs to extend it.
#[derive(Clone, Debug)]
struct Node {
    concept: Concept,
    /// Plain support `ext(intent)`.
    support: Extent,
}

/// A root of the outer loop: the minimal, its closure, the length of the
/// `ELM` prefix it was checked against and the minimal that pruned it.
type Root = (Pattern, Node, usize, Option<Pattern>);

enum Step {
    Pruned(TraceEvent),
    Descend { node: Node, excluded: Pattern },
}

pub struct Miner<'a> {
    family: &'a dyn Family,
    context: &'a ObjectContext,
    abstraction: &'a ExtensionalAbstraction,
    config: MinerConfig,
}

impl<'a> Miner<'a> {
    /// Explicit families are checked for strong accessibility here; implicit
    /// families are trusted to be strongly accessible by construction.
    pub fn new(
        family: &'a dyn Family,
        context: &'a ObjectContext,
        abstraction: &'a ExtensionalAbstraction,
        config: MinerConfig,
    ) -> Result<Self, MineError> {
        if family.universe() != context.universe() {
            return Err(MineError::UniverseMismatch {
                context: context.universe(),
                family: family.universe(),
            });
        }
        if let Some(explicit) = family.explicit() {
            explicit
                .is_strongly_accessible()
                .map_err(|(a, b)| MineError::NotStronglyAccessible(a, b))?;
        }
        Ok(Miner {
            family,
            context,
            abstraction,
            config,
        })
    }

    pub fn config(&self) -> &MinerConfig {
        &self.config
    }

    /// `Clo(P)`: close `p` in `2^S` through its abstract support, then
    /// project with the smallest minimal element below `p`.
    pub fn clo(&self, p: &Pattern) -> Result<Concept, MineError> {
        if !self.family.contains(p) {
            return Err(MineError::NotInFamily(*p));
        }
        Ok(self.close(p, self.context.ext(p)).concept)
    }

    /// `support` must be `ext(p)`.
    fn close(&self, p: &Pattern, support: Extent) -> Node {
        let abstract_support = self.abstraction.project(&support);
        let empty_support = abstract_support.is_empty();
        let closed_in_powerset = self.context.int(&abstract_support);
        let anchor = self
            .family
            .anchor(p)
            .expect("family members lie above a minimal element");
        let intent = self.family.project(&anchor, &closed_in_powerset);
        let mut support = support;
        for i in intent.difference(p).iter() {
            support.intersect_with(self.context.column(i));
        }
        let extent = if self.abstraction.is_identity() {
            support.clone()
        } else {
            self.abstraction.project(&support)
        };
        Node {
            concept: Concept {
                extent,
                intent,
                anchor_minimal: anchor,
                empty_support,
            },
            support,
        }
    }

    /// Closes every augmentation of `node` and decides, left to right, which
    /// ones are explored and with which item exclusion list.
    fn expand(&self, node: &Node, elm: &[Pattern], excluded: Pattern) -> Vec<Step> {
        let parent = node.concept.intent;
        let mut excluded = excluded;
        let mut steps = Vec::new();
        for item in self.family.augmentations(&parent) {
            let support = node.support.intersection(self.context.column(item));
            let child = self.close(&parent.with(item), support);
            let candidate = child.concept.intent;
            if let Some(m) = elm.iter().find(|m| m.is_subset(&candidate)) {
                steps.push(Step::Pruned(TraceEvent::Pruned {
                    parent,
                    item,
                    candidate,
                    reason: PruneReason::Elm(*m),
                }));
                continue;
            }
            if candidate.intersects(&excluded) {
                steps.push(Step::Pruned(TraceEvent::Pruned {
                    parent,
                    item,
                    candidate,
                    reason: PruneReason::El(candidate.intersection(&excluded)),
                }));
                continue;
            }
            steps.push(Step::Descend {
                node: child,
                excluded,
            });
            excluded.insert(item);
        }
        steps
    }

    fn emit(&self, node: &Node, parent: Option<Pattern>) -> Option<TraceEvent> {
        if node.concept.empty_support && !self.config.emit_empty_support {
            return None;
        }
        Some(TraceEvent::Emit(MineEvent {
            concept: node.concept.clone(),
            parent,
        }))
    }

    fn walk(
        &self,
        node: Node,
        parent: Option<Pattern>,
        elm: &[Pattern],
        excluded: Pattern,
        sink: &mut dyn FnMut(TraceEvent),
    ) {
        if let Some(ev) = self.emit(&node, parent) {
            sink(ev);
        }
        if node.concept.empty_support {
            // ⊤_m: nothing above it in its up-set.
            return;
        }
        let here = node.concept.intent;
        for step in self.expand(&node, elm, excluded) {
            match step {
                Step::Pruned(ev) => sink(ev),
                Step::Descend { node, excluded } => {
                    self.walk(node, Some(here), elm, excluded, sink)
                }
            }
        }
    }

    #[cfg(feature = "parallel")]
    fn walk_par(
        &self,
        node: Node,
        parent: Option<Pattern>,
        elm: &[Pattern],
        excluded: Pattern,
    ) -> Vec<TraceEvent> {
        use rayon::prelude::*;

        let mut out: Vec<TraceEvent> = self.emit(&node, parent).into_iter().collect();
        if node.concept.empty_support {
            return out;
        }
        let here = node.concept.intent;
        let parts: Vec<Vec<TraceEvent>> = self
            .expand(&node, elm, excluded)
            .into_par_iter()
            .map(|step| match step {
                Step::Pruned(ev) => vec![ev],
                Step::Descend { node, excluded } => self.walk_par(node, Some(here), elm, excluded),
            })
            .collect();
        out.extend(parts.into_iter().flatten());
        out
    }

    /// Outer loop over minimal elements.
    fn roots(&self) -> (Vec<Pattern>, Vec<Root>) {
        let mut elm: Vec<Pattern> = Vec::new();
        let mut roots = Vec::new();
        for &m in self.family.minimals() {
            let node = self.close(&m, self.context.ext(&m));
            let pruned_by = elm
                .iter()
                .find(|e| e.is_subset(&node.concept.intent))
                .copied();
            let expanded = pruned_by.is_none();
            roots.push((m, node, elm.len(), pruned_by));
            if expanded || self.config.elm_policy == ElmPolicy::Always {
                elm.push(m);
            }
        }
        (elm, roots)
    }

    /// Streams the full enumeration trace in traversal order.
    pub fn for_each_trace(&self, mut sink: impl FnMut(TraceEvent)) {
        #[cfg(feature = "parallel")]
        if self.config.parallel {
            for ev in self.trace_par() {
                sink(ev);
            }
            return;
        }
        let (elm, roots) = self.roots();
        for (minimal, node, prefix, pruned_by) in roots {
            sink(TraceEvent::Root {
                minimal,
                closure: node.concept.intent,
                pruned_by,
            });
            if pruned_by.is_none() {
                self.walk(node, None, &elm[..prefix], Pattern::empty(), &mut sink);
            }
        }
    }

    #[cfg(feature = "parallel")]
    fn trace_par(&self) -> Vec<TraceEvent> {
        use rayon::prelude::*;

        let (elm, roots) = self.roots();
        let parts: Vec<Vec<TraceEvent>> = roots
            .into_par_iter()
            .map(|(minimal, node, prefix, pruned_by)| {
                let mut out = vec![TraceEvent::Root {
                    minimal,
                    closure: node.concept.intent,
                    pruned_by,
                }];
                if pruned_by.is_none() {
                    out.extend(self.walk_par(node, None, &elm[..prefix], Pattern::empty()));
                }
                out
            })
            .collect();
        parts.into_iter().flatten().collect()
    }

    /// Streams listed closed patterns in traversal order.
    pub fn for_each(&self, mut sink: impl FnMut(MineEvent)) {
        self.for_each_trace(|ev| {
            if let TraceEvent::Emit(e) = ev {
                sink(e);
            }
        });
    }

    pub fn trace(&self) -> Vec<TraceEvent> {
        let mut out = Vec::new();
        self.for_each_trace(|ev| out.push(ev));
        out
    }

    /// All listed closed patterns, in the configured order.
    pub fn mine(&self) -> Vec<MineEvent> {
        let mut out = Vec::new();
        self.for_each(|ev| out.push(ev));
        if self.config.order == OutputOrder::Sorted {
            out.sort_by_key(|e| e.concept.intent);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setsys::{ConnectedEdgeFamily, ExplicitFamily, GraphSpec};

    fn pat(s: &str) -> Pattern {
        Pattern::from_items(s.bytes().map(|b| (b - b'a') as usize))
    }

    fn accessible() -> (ObjectContext, ExplicitFamily) {
        let ctx = ObjectContext::new(5, ["abde", "abcd", "acd"].map(pat).to_vec()).unwrap();
        let fam = ExplicitFamily::new(
            ["ab", "ac", "abc", "abd", "acd", "abcd"].map(pat).to_vec(),
            5,
        )
        .unwrap();
        (ctx, fam)
    }

    #[test]
    fn exclusion_test() {
        assert!(!not_include_any_of(&pat("abcd"), &[pat("ab")]));
        assert!(not_include_any_of(&pat("abcd"), &[]));
        assert!(not_include_any_of(&pat("acd"), &[pat("ab")]));
    }

    #[test]
    fn clo_examples() {
        let (ctx, fam) = accessible();
        let abs = ExtensionalAbstraction::Identity;
        let miner = Miner::new(&fam, &ctx, &abs, MinerConfig::default()).unwrap();
        assert_eq!(miner.clo(&pat("ab")).unwrap().intent, pat("abd"));
        assert_eq!(miner.clo(&pat("ac")).unwrap().intent, pat("acd"));
        assert_eq!(miner.clo(&pat("abc")).unwrap().intent, pat("abcd"));
        assert_eq!(miner.clo(&pat("abd")).unwrap().intent, pat("abd"));
        assert_eq!(miner.clo(&pat("a")), Err(MineError::NotInFamily(pat("a"))));

        let rare = ExtensionalAbstraction::MinSupport(4);
        let miner = Miner::new(&fam, &ctx, &rare, MinerConfig::default()).unwrap();
        for t in fam.members() {
            let c = miner.clo(t).unwrap();
            assert_eq!(c.intent, pat("abcd"));
            assert!(c.empty_support);
        }
    }

    #[test]
    fn accessible_trace() {
        let (ctx, fam) = accessible();
        let abs = ExtensionalAbstraction::Identity;
        let miner = Miner::new(&fam, &ctx, &abs, MinerConfig::default()).unwrap();
        let intents: Vec<Pattern> = miner.mine().iter().map(|e| e.concept.intent).collect();
        assert_eq!(intents, ["abd", "abcd", "acd"].map(pat).to_vec());
        let trace = miner.trace();
        assert!(trace.contains(&TraceEvent::Pruned {
            parent: pat("acd"),
            item: 1,
            candidate: pat("abcd"),
            reason: PruneReason::Elm(pat("ab")),
        }));
    }

    #[test]
    fn rejects_non_accessible_and_mismatched() {
        let fam =
            ExplicitFamily::new(["a", "b", "abc", "abd", "abcd"].map(pat).to_vec(), 4).unwrap();
        let ctx = ObjectContext::new(4, vec![pat("ab")]).unwrap();
        let abs = ExtensionalAbstraction::Identity;
        assert!(matches!(
            Miner::new(&fam, &ctx, &abs, MinerConfig::default()),
            Err(MineError::NotStronglyAccessible(..))
        ));
        let ctx5 = ObjectContext::new(5, vec![]).unwrap();
        let graph = GraphSpec::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let edges = ConnectedEdgeFamily::new(&graph).unwrap();
        assert_eq!(
            Miner::new(&edges, &ctx5, &abs, MinerConfig::default()).err(),
            Some(MineError::UniverseMismatch {
                context: 5,
                family: 2
            })
        );
    }

    #[test]
    fn single_minimal_with_full_objects_lists_top_only() {
        let fam = ExplicitFamily::new(["a", "ab", "abc"].map(pat).to_vec(), 3).unwrap();
        let ctx = ObjectContext::new(3, vec![pat("abc"), pat("abc")]).unwrap();
        let abs = ExtensionalAbstraction::Identity;
        let miner = Miner::new(&fam, &ctx, &abs, MinerConfig::default()).unwrap();
        let intents: Vec<Pattern> = miner.mine().iter().map(|e| e.concept.intent).collect();
        assert_eq!(intents, vec![pat("abc")]);
    }

    #[test]
    fn elm_placement_case() {
        // b closes to ab, which holds the earlier minimal a: the root of b is
        // pruned, so the two policies disagree on whether b joins ELM.
        let fam =
            ExplicitFamily::new(["a", "b", "c", "ab", "bc", "abc"].map(pat).to_vec(), 3).unwrap();
        let ctx = ObjectContext::new(3, vec![pat("ab"), pat("abc")]).unwrap();
        let abs = ExtensionalAbstraction::Identity;
        let run = |elm_policy| {
            let config = MinerConfig {
                elm_policy,
                ..MinerConfig::default()
            };
            let miner = Miner::new(&fam, &ctx, &abs, config).unwrap();
            let (elm, _) = miner.roots();
            (elm, miner.trace(), miner.mine())
        };
        let (elm_always, trace_always, out_always) = run(ElmPolicy::Always);
        let (elm_expanded, trace_expanded, out_expanded) = run(ElmPolicy::WhenExpanded);
        assert_eq!(elm_always, ["a", "b", "c"].map(pat).to_vec());
        assert_eq!(elm_expanded, vec![pat("a")]);
        assert_eq!(out_always, out_expanded);
        assert_eq!(trace_always, trace_expanded);
        let intents: Vec<Pattern> = out_always.iter().map(|e| e.concept.intent).collect();
        assert_eq!(intents, vec![pat("ab"), pat("abc")]);
    }

    #[test]
    fn empty_support_filtering() {
        let (ctx, fam) = accessible();
        let abs = ExtensionalAbstraction::MinSupport(2);
        let all = Miner::new(&fam, &ctx, &abs, MinerConfig::default())
            .unwrap()
            .mine();
        let flagged: Vec<Pattern> = all
            .iter()
            .filter(|e| e.concept.empty_support)
            .map(|e| e.concept.intent)
            .collect();
        assert_eq!(flagged, vec![pat("abcd")]);
        let config = MinerConfig {
            emit_empty_support: false,
            ..MinerConfig::default()
        };
        let kept = Miner::new(&fam, &ctx, &abs, config).unwrap().mine();
        assert_eq!(kept.len(), all.len() - 1);
    }
}
