//! Finite bounded posets of systems, requirements as extensional member
//! sets, and the up/down closure operators used to classify requirements.
//!
//! A [`SystemModel`] is either an explicit relation (closed under
//! reflexivity and transitivity at build time) or the powerset of a finite
//! set of atoms ordered by inclusion. The powerset form backs the
//! input-output and temporal universes, whose order matrices would not fit
//! in memory when materialized.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Largest atom count accepted by [`SystemModel::powerset`].
pub const MAX_POWERSET_ATOMS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("element `{0}` is not declared in the model")]
    UnknownElement(String),
    #[error("order is not antisymmetric: `{0}` and `{1}` refine each other")]
    CycleDetected(String, String),
    #[error("`{bound}` is not the {which} element: it is unrelated to `{element}`")]
    BoundViolation {
        which: &'static str,
        bound: String,
        element: String,
    },
    #[error("a system model needs at least one element")]
    Empty,
    #[error("requirement `{0}` is not defined over this model")]
    ModelMismatch(String),
    #[error("a powerset over {0} atoms is too large (max {MAX_POWERSET_ATOMS})")]
    TooManyAtoms(usize),
}

enum Order {
    /// `up[i]` holds every `j` with `i ⪯ j`; `down[j]` every `i` with `i ⪯ j`.
    Relation {
        up: Vec<FixedBitSet>,
        down: Vec<FixedBitSet>,
    },
    /// Element index is the bitmask of the atoms it contains.
    Powerset { atoms: usize },
}

struct ModelInner {
    key: u64,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    order: Order,
    bot: usize,
    top: usize,
}

/// A finite bounded poset `(Sys, ⪯, ⊥, ⊤)`. Cheap to clone.
#[derive(Clone)]
pub struct SystemModel {
    inner: Arc<ModelInner>,
}

impl fmt::Debug for SystemModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemModel")
            .field("elements", &self.len())
            .field("bot", &self.id(self.bot()))
            .field("top", &self.id(self.top()))
            .finish()
    }
}

impl PartialEq for SystemModel {
    fn eq(&self, other: &Self) -> bool {
        self.inner.key == other.inner.key && self.inner.ids == other.inner.ids
    }
}

impl Eq for SystemModel {}

/// Builds a model from explicit elements and generating order pairs
/// `(lower, upper)`. The stored order is the reflexive-transitive closure.
pub fn build_model<E, S, P, A, B>(
    elements: E,
    order_pairs: P,
    bot: &str,
    top: &str,
) -> Result<SystemModel, OrderError>
where
    E: IntoIterator<Item = S>,
    S: Into<String>,
    P: IntoIterator<Item = (A, B)>,
    A: AsRef<str>,
    B: AsRef<str>,
{
    let ids: Vec<String> = elements
        .into_iter()
        .map(Into::into)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if ids.is_empty() {
        return Err(OrderError::Empty);
    }
    let index: HashMap<String, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let lookup = |s: &str| {
        index
            .get(s)
            .copied()
            .ok_or_else(|| OrderError::UnknownElement(s.to_string()))
    };
    let n = ids.len();
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for (i, row) in up.iter_mut().enumerate() {
        row.insert(i);
    }
    for (a, b) in order_pairs {
        let (a, b) = (lookup(a.as_ref())?, lookup(b.as_ref())?);
        up[a].insert(b);
    }
    // Warshall over bit rows.
    for k in 0..n {
        let via = up[k].clone();
        for row in up.iter_mut() {
            if row.contains(k) {
                row.union_with(&via);
            }
        }
    }
    for i in 0..n {
        for j in up[i].ones() {
            if j > i && up[j].contains(i) {
                return Err(OrderError::CycleDetected(ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let (bot, top) = (lookup(bot)?, lookup(top)?);
    for e in 0..n {
        if !up[bot].contains(e) {
            return Err(OrderError::BoundViolation {
                which: "least",
                bound: ids[bot].clone(),
                element: ids[e].clone(),
            });
        }
        if !up[e].contains(top) {
            return Err(OrderError::BoundViolation {
                which: "greatest",
                bound: ids[top].clone(),
                element: ids[e].clone(),
            });
        }
    }
    let mut down = vec![FixedBitSet::with_capacity(n); n];
    for (i, row) in up.iter().enumerate() {
        for j in row.ones() {
            down[j].insert(i);
        }
    }
    let mut hasher = DefaultHasher::new();
    ids.hash(&mut hasher);
    for row in &up {
        row.as_slice().hash(&mut hasher);
    }
    Ok(SystemModel {
        inner: Arc::new(ModelInner {
            key: hasher.finish(),
            ids,
            index,
            order: Order::Relation { up, down },
            bot,
            top,
        }),
    })
}

impl SystemModel {
    /// The powerset of `atoms` ordered by inclusion, `⊥ = {}` and `⊤` the
    /// full set. Element `m` is the subset whose atoms are the set bits of `m`.
    pub fn powerset<S: AsRef<str>>(atoms: &[S]) -> Result<SystemModel, OrderError> {
        let n = atoms.len();
        if n > MAX_POWERSET_ATOMS {
            return Err(OrderError::TooManyAtoms(n));
        }
        let size = 1usize << n;
        let ids: Vec<String> = (0..size)
            .map(|mask| {
                let names: Vec<&str> = (0..n)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| atoms[b].as_ref())
                    .collect();
                format!("{{{}}}", names.join(","))
            })
            .collect();
        let index = ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut hasher = DefaultHasher::new();
        "powerset".hash(&mut hasher);
        for a in atoms {
            a.as_ref().hash(&mut hasher);
        }
        Ok(SystemModel {
            inner: Arc::new(ModelInner {
                key: hasher.finish(),
                ids,
                index,
                order: Order::Powerset { atoms: n },
                bot: 0,
                top: size - 1,
            }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn key(&self) -> u64 {
        self.inner.key
    }

    pub fn ids(&self) -> &[String] {
        &self.inner.ids
    }

    pub fn id(&self, element: usize) -> &str {
        &self.inner.ids[element]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.inner.index.get(id).copied()
    }

    pub fn element(&self, id: &str) -> Result<usize, OrderError> {
        self.index_of(id)
            .ok_or_else(|| OrderError::UnknownElement(id.to_string()))
    }

    pub fn bot(&self) -> usize {
        self.inner.bot
    }

    pub fn top(&self) -> usize {
        self.inner.top
    }

    /// Number of atoms when this is a powerset model.
    pub fn powerset_atoms(&self) -> Option<usize> {
        match self.inner.order {
            Order::Powerset { atoms } => Some(atoms),
            Order::Relation { .. } => None,
        }
    }

    /// `lower ⪯ upper`.
    pub fn leq(&self, lower: usize, upper: usize) -> bool {
        match &self.inner.order {
            Order::Relation { up, .. } => up[lower].contains(upper),
            Order::Powerset { .. } => lower & !upper == 0,
        }
    }

    /// Pairs `(S, S')` with `S ⪯ S'` whose order-preservation implies it for
    /// every comparable pair: all strict pairs of an explicit relation, or the
    /// single-atom extensions of a powerset.
    pub fn generating_pairs(&self) -> Box<dyn Iterator<Item = (usize, usize)> + '_> {
        match &self.inner.order {
            Order::Relation { up, .. } => Box::new(
                up.iter()
                    .enumerate()
                    .flat_map(|(i, row)| row.ones().filter(move |&j| j != i).map(move |j| (i, j))),
            ),
            &Order::Powerset { atoms } => Box::new((0..self.len()).flat_map(move |m| {
                (0..atoms)
                    .filter(move |b| m & (1 << b) == 0)
                    .map(move |b| (m, m | (1 << b)))
            })),
        }
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// `⌈X⌉` on a raw element set.
    pub fn up_set(&self, set: &FixedBitSet) -> FixedBitSet {
        match &self.inner.order {
            Order::Relation { up, .. } => {
                let mut out = self.empty_set();
                for i in set.ones() {
                    out.union_with(&up[i]);
                }
                out
            }
            &Order::Powerset { atoms } => {
                let mut out = set.clone();
                for b in 0..atoms {
                    let bit = 1 << b;
                    for m in 0..self.len() {
                        if m & bit != 0 && out.contains(m ^ bit) {
                            out.insert(m);
                        }
                    }
                }
                out
            }
        }
    }

    /// `⌊X⌋` on a raw element set.
    pub fn down_set(&self, set: &FixedBitSet) -> FixedBitSet {
        match &self.inner.order {
            Order::Relation { down, .. } => {
                let mut out = self.empty_set();
                for i in set.ones() {
                    out.union_with(&down[i]);
                }
                out
            }
            &Order::Powerset { atoms } => {
                let mut out = set.clone();
                for b in 0..atoms {
                    let bit = 1 << b;
                    for m in (0..self.len()).rev() {
                        if m & bit != 0 && out.contains(m) {
                            out.insert(m ^ bit);
                        }
                    }
                }
                out
            }
        }
    }

    fn singleton(&self, element: usize) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert(element);
        s
    }

    /// `⌈S⌉`, the systems abstracting `element`.
    pub fn above(&self, element: usize) -> FixedBitSet {
        match &self.inner.order {
            Order::Relation { up, .. } => up[element].clone(),
            Order::Powerset { .. } => self.up_set(&self.singleton(element)),
        }
    }

    /// `⌊S⌋`, the systems refining `element`.
    pub fn below(&self, element: usize) -> FixedBitSet {
        match &self.inner.order {
            Order::Relation { down, .. } => down[element].clone(),
            Order::Powerset { .. } => {
                let mut s = self.empty_set();
                // Submask enumeration.
                let mut sub = element;
                loop {
                    s.insert(sub);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & element;
                }
                s
            }
        }
    }

    pub(crate) fn check(&self, r: &Requirement) -> Result<(), OrderError> {
        if r.model == self.key() && r.members.len() == self.len() {
            Ok(())
        } else {
            Err(OrderError::ModelMismatch(r.name.clone()))
        }
    }
}

/// A named set of systems. Also used for assumptions.
///
/// Equality compares the model and the member set; names are labels only.
#[derive(Clone, Debug)]
pub struct Requirement {
    name: String,
    model: u64,
    members: FixedBitSet,
}

impl PartialEq for Requirement {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model && self.members == other.members
    }
}

impl Eq for Requirement {}

impl Requirement {
    /// Requirement whose members are the listed element identifiers.
    pub fn new<I, S>(
        model: &SystemModel,
        name: impl Into<String>,
        members: I,
    ) -> Result<Self, OrderError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = model.empty_set();
        for id in members {
            set.insert(model.element(id.as_ref())?);
        }
        Ok(Self::from_set(model, name, set))
    }

    pub fn from_set(model: &SystemModel, name: impl Into<String>, members: FixedBitSet) -> Self {
        assert_eq!(
            members.len(),
            model.len(),
            "member set sized for another model"
        );
        Requirement {
            name: name.into(),
            model: model.key(),
            members,
        }
    }

    /// Members are the elements for which `pred` holds.
    pub fn from_predicate(
        model: &SystemModel,
        name: impl Into<String>,
        mut pred: impl FnMut(usize) -> bool,
    ) -> Self {
        let mut set = model.empty_set();
        for i in 0..model.len() {
            if pred(i) {
                set.insert(i);
            }
        }
        Self::from_set(model, name, set)
    }

    pub fn all(model: &SystemModel, name: impl Into<String>) -> Self {
        Self::from_set(model, name, model.full_set())
    }

    pub fn none(model: &SystemModel, name: impl Into<String>) -> Self {
        Self::from_set(model, name, model.empty_set())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn model_key(&self) -> u64 {
        self.model
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    /// `χ_R(S)`.
    pub fn contains(&self, element: usize) -> bool {
        self.members.contains(element)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    pub fn is_subset(&self, other: &Requirement) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Member identifiers in lexicographic order.
    pub fn member_ids<'m>(&self, model: &'m SystemModel) -> Vec<&'m str> {
        let mut ids: Vec<&str> = self.members.ones().map(|i| model.id(i)).collect();
        ids.sort_unstable();
        ids
    }

    pub fn complement(&self) -> Requirement {
        let mut members = self.members.clone();
        members.toggle_range(..);
        Requirement {
            name: format!("not {}", self.name),
            model: self.model,
            members,
        }
    }
}

/// Flags of a requirement's type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub is_obligation: bool,
    pub is_prohibition: bool,
    pub is_trivial: bool,
    pub is_semi_monotone: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    Meet,
    Join,
}

/// `⌈R⌉ = { S' | ∃S∈R. S ⪯ S' }`.
pub fn up_closure(model: &SystemModel, r: &Requirement) -> Result<Requirement, OrderError> {
    model.check(r)?;
    Ok(Requirement::from_set(
        model,
        format!("up({})", r.name),
        model.up_set(&r.members),
    ))
}

/// `⌊R⌋ = { S' | ∃S∈R. S' ⪯ S }`.
pub fn down_closure(model: &SystemModel, r: &Requirement) -> Result<Requirement, OrderError> {
    model.check(r)?;
    Ok(Requirement::from_set(
        model,
        format!("down({})", r.name),
        model.down_set(&r.members),
    ))
}

pub fn classify(model: &SystemModel, r: &Requirement) -> Result<Classification, OrderError> {
    model.check(r)?;
    let up = model.up_set(&r.members);
    let down = model.down_set(&r.members);
    let count = r.len();
    let mut both = up.clone();
    both.intersect_with(&down);
    Ok(Classification {
        is_obligation: up == r.members,
        is_prohibition: down == r.members,
        is_trivial: count == 0 || count == model.len(),
        is_semi_monotone: both == r.members,
    })
}

/// Conjunction (meet) or disjunction (join) of two requirements.
pub fn combine(op: Combine, r1: &Requirement, r2: &Requirement) -> Result<Requirement, OrderError> {
    if r1.model != r2.model || r1.members.len() != r2.members.len() {
        return Err(OrderError::ModelMismatch(r2.name.clone()));
    }
    let mut members = r1.members.clone();
    let name = match op {
        Combine::Meet => {
            members.intersect_with(&r2.members);
            format!("{} and {}", r1.name, r2.name)
        }
        Combine::Join => {
            members.union_with(&r2.members);
            format!("{} or {}", r1.name, r2.name)
        }
    };
    Ok(Requirement {
        name,
        model: r1.model,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> SystemModel {
        build_model(
            ["bot", "a", "b", "top"],
            [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
            "bot",
            "top",
        )
        .unwrap()
    }

    fn req(m: &SystemModel, ids: &[&str]) -> Requirement {
        Requirement::new(m, "r", ids).unwrap()
    }

    #[test]
    fn diamond_has_incomparable_middle() {
        let m = diamond();
        let (a, b) = (m.element("a").unwrap(), m.element("b").unwrap());
        assert!(!m.leq(a, b) && !m.leq(b, a));
        assert!(m.leq(m.bot(), a) && m.leq(a, m.top()));
        assert_eq!(m.len(), 4);
    }

    #[test]
    fn cycle_is_rejected() {
        let err = build_model(
            ["bot", "a", "top"],
            [("bot", "a"), ("a", "top"), ("top", "a")],
            "bot",
            "top",
        )
        .unwrap_err();
        assert!(matches!(err, OrderError::CycleDetected(..)));
    }

    #[test]
    fn unrelated_element_violates_bounds() {
        let err = build_model(
            ["bot", "a", "b", "top"],
            [("bot", "a"), ("a", "top")],
            "bot",
            "top",
        )
        .unwrap_err();
        assert!(matches!(err, OrderError::BoundViolation { .. }));
    }

    #[test]
    fn unknown_elements_are_reported() {
        let err = build_model(["bot", "top"], [("bot", "c")], "bot", "top").unwrap_err();
        assert_eq!(err, OrderError::UnknownElement("c".into()));
        let err = build_model(["bot", "top"], [("bot", "top")], "bot", "x").unwrap_err();
        assert_eq!(err, OrderError::UnknownElement("x".into()));
    }

    #[test]
    fn closures_on_diamond() {
        let m = diamond();
        let up = up_closure(&m, &req(&m, &["a"])).unwrap();
        assert_eq!(up.member_ids(&m), ["a", "top"]);
        let down = down_closure(&m, &req(&m, &["a"])).unwrap();
        assert_eq!(down.member_ids(&m), ["a", "bot"]);
        assert_eq!(
            up_closure(&m, &req(&m, &["top"])).unwrap().member_ids(&m),
            ["top"]
        );
        assert_eq!(
            down_closure(&m, &req(&m, &["bot"])).unwrap().member_ids(&m),
            ["bot"]
        );
        assert_eq!(down_closure(&m, &req(&m, &["top"])).unwrap().len(), 4);
        assert!(up_closure(&m, &req(&m, &[])).unwrap().is_empty());
    }

    #[test]
    fn classify_diamond_upset() {
        let m = diamond();
        let c = classify(&m, &req(&m, &["a", "top"])).unwrap();
        assert_eq!(
            c,
            Classification {
                is_obligation: true,
                is_prohibition: false,
                is_trivial: false,
                is_semi_monotone: true
            }
        );
        let c = classify(&m, &Requirement::all(&m, "all")).unwrap();
        assert!(c.is_obligation && c.is_prohibition && c.is_trivial && c.is_semi_monotone);
    }

    #[test]
    fn zigzag_on_chain_is_not_semi_monotone() {
        let m = build_model(
            ["bot", "s1", "s2", "s3", "top"],
            [("bot", "s1"), ("s1", "s2"), ("s2", "s3"), ("s3", "top")],
            "bot",
            "top",
        )
        .unwrap();
        let c = classify(&m, &req(&m, &["s1", "s3"])).unwrap();
        assert!(!c.is_obligation && !c.is_prohibition && !c.is_semi_monotone);
    }

    #[test]
    fn combine_identities() {
        let m = diamond();
        let r = req(&m, &["a", "bot"]);
        assert_eq!(
            combine(Combine::Meet, &r, &Requirement::all(&m, "all")).unwrap(),
            r
        );
        assert_eq!(
            combine(Combine::Join, &r, &Requirement::none(&m, "none")).unwrap(),
            r
        );
    }

    #[test]
    fn mismatched_models_are_rejected() {
        let m = diamond();
        let other = build_model(["x"], Vec::<(&str, &str)>::new(), "x", "x").unwrap();
        let r = Requirement::all(&other, "foreign");
        assert_eq!(
            up_closure(&m, &r).unwrap_err(),
            OrderError::ModelMismatch("foreign".into())
        );
        assert!(combine(Combine::Meet, &r, &Requirement::all(&m, "x")).is_err());
    }

    #[test]
    fn powerset_closures_match_relation_closures() {
        let ps = SystemModel::powerset(&["p", "q", "r"]).unwrap();
        let ids = ps.ids().to_vec();
        let pairs: Vec<(String, String)> = ps
            .generating_pairs()
            .map(|(i, j)| (ids[i].clone(), ids[j].clone()))
            .collect();
        let rel = build_model(ids.clone(), pairs, "{}", "{p,q,r}").unwrap();
        for mask in 0u32..256 {
            let members: Vec<&str> = (0..8)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| ids[b].as_str())
                .collect();
            let a = Requirement::new(&ps, "x", &members).unwrap();
            let b = Requirement::new(&rel, "x", &members).unwrap();
            let mut up_a = up_closure(&ps, &a)
                .unwrap()
                .member_ids(&ps)
                .into_iter()
                .map(String::from)
                .collect::<Vec<_>>();
            let mut up_b = up_closure(&rel, &b)
                .unwrap()
                .member_ids(&rel)
                .into_iter()
                .map(String::from)
                .collect::<Vec<_>>();
            up_a.sort();
            up_b.sort();
            assert_eq!(up_a, up_b);
            assert_eq!(
                down_closure(&ps, &a).unwrap().member_ids(&ps),
                down_closure(&rel, &b).unwrap().member_ids(&rel)
            );
            assert_eq!(classify(&ps, &a).unwrap(), classify(&rel, &b).unwrap());
        }
        assert_eq!(ps.below(0b101).count_ones(..), 4);
    }
}
