//! Test setups `(T, α)`, the inverse map `α̂`, and exhaustive deciders for
//! refutability and verifiability that report a witness per system.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::order::{OrderError, Requirement, SystemModel};

/// Default element cap for [`is_more_permissive`].
pub const DEFAULT_PERMISSIVE_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetupError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("alpha is not order-preserving: `{lower}` refines `{upper}` but alpha({lower}) is not within alpha({upper})")]
    NotOrderPreserving { lower: String, upper: String },
    #[error("alpha has no entry for element `{0}`")]
    AlphaNotTotal(String),
    #[error("unknown observation `{0}`")]
    UnknownObservation(String),
    #[error("test setup `{0}` is defined over a different model")]
    SetupMismatch(String),
    #[error("model has {elements} elements; exhaustive enumeration is capped at {cap}")]
    ModelTooLarge { elements: usize, cap: usize },
}

/// A test setup over a fixed model. Observations are kept in lexicographic
/// order of their identifiers, so index order is identifier order.
#[derive(Clone, Debug)]
pub struct TestSetup {
    name: String,
    model: SystemModel,
    observations: Vec<String>,
    obs_index: HashMap<String, usize>,
    alpha: Vec<FixedBitSet>,
    alpha_hat: Vec<FixedBitSet>,
}

/// Validates a setup given by identifiers. `alpha` must list every element.
pub fn build_setup<O, S>(
    name: impl Into<String>,
    model: &SystemModel,
    observations: O,
    alpha: &BTreeMap<String, BTreeSet<String>>,
) -> Result<TestSetup, SetupError>
where
    O: IntoIterator<Item = S>,
    S: Into<String>,
{
    let observations: Vec<String> = observations.into_iter().map(Into::into).collect();
    let obs_index: HashMap<&str, usize> = observations
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut rows = Vec::with_capacity(model.len());
    for (element, id) in model.ids().iter().enumerate() {
        let observed = alpha
            .get(id)
            .ok_or_else(|| SetupError::AlphaNotTotal(id.clone()))?;
        let mut row = Vec::with_capacity(observed.len());
        for t in observed {
            row.push(
                *obs_index
                    .get(t.as_str())
                    .ok_or_else(|| SetupError::UnknownObservation(t.clone()))?,
            );
        }
        debug_assert_eq!(rows.len(), element);
        rows.push(row);
    }
    for key in alpha.keys() {
        model.element(key)?;
    }
    TestSetup::from_indices(name, model, observations, rows)
}

impl TestSetup {
    /// Builds a setup from per-element lists of observation indices into
    /// `observations`. Duplicated observation identifiers are merged.
    pub fn from_indices(
        name: impl Into<String>,
        model: &SystemModel,
        observations: Vec<String>,
        alpha: Vec<Vec<usize>>,
    ) -> Result<Self, SetupError> {
        assert_eq!(alpha.len(), model.len(), "alpha must cover every element");
        let n = observations.len();
        let rows = alpha
            .into_iter()
            .map(|row| {
                let mut set = FixedBitSet::with_capacity(n);
                set.extend(row);
                set
            })
            .collect();
        Self::from_unsorted(name, model, observations, rows)
    }

    pub(crate) fn from_unsorted(
        name: impl Into<String>,
        model: &SystemModel,
        observations: Vec<String>,
        alpha: Vec<FixedBitSet>,
    ) -> Result<Self, SetupError> {
        let sorted: Vec<String> = observations
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let obs_index: HashMap<String, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let remap: Vec<usize> = observations.iter().map(|s| obs_index[s]).collect();
        let alpha = alpha
            .into_iter()
            .map(|row| {
                let mut set = FixedBitSet::with_capacity(sorted.len());
                set.extend(row.ones().map(|t| remap[t]));
                set
            })
            .collect();
        Self::from_bitsets(name, model, sorted, obs_index, alpha)
    }

    fn from_bitsets(
        name: impl Into<String>,
        model: &SystemModel,
        observations: Vec<String>,
        obs_index: HashMap<String, usize>,
        alpha: Vec<FixedBitSet>,
    ) -> Result<Self, SetupError> {
        for (lower, upper) in model.generating_pairs() {
            if !alpha[lower].is_subset(&alpha[upper]) {
                return Err(SetupError::NotOrderPreserving {
                    lower: model.id(lower).to_string(),
                    upper: model.id(upper).to_string(),
                });
            }
        }
        let mut alpha_hat = vec![model.empty_set(); observations.len()];
        for (element, row) in alpha.iter().enumerate() {
            for t in row.ones() {
                alpha_hat[t].insert(element);
            }
        }
        Ok(TestSetup {
            name: name.into(),
            model: model.clone(),
            observations,
            obs_index,
            alpha,
            alpha_hat,
        })
    }

    /// Builds from sorted, duplicate-free observation ids and alpha bitsets.
    pub(crate) fn from_sorted(
        name: impl Into<String>,
        model: &SystemModel,
        observations: Vec<String>,
        alpha: Vec<FixedBitSet>,
    ) -> Result<Self, SetupError> {
        debug_assert!(observations.windows(2).all(|w| w[0] < w[1]));
        let obs_index = observations
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Self::from_bitsets(name, model, observations, obs_index, alpha)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn model(&self) -> &SystemModel {
        &self.model
    }

    pub fn observations(&self) -> &[String] {
        &self.observations
    }

    pub fn observation_index(&self, id: &str) -> Option<usize> {
        self.obs_index.get(id).copied()
    }

    /// `α(S)` as observation indices.
    pub fn alpha(&self, element: usize) -> &FixedBitSet {
        &self.alpha[element]
    }

    pub fn alpha_ids(&self, element: usize) -> Vec<&str> {
        self.alpha[element]
            .ones()
            .map(|t| self.observations[t].as_str())
            .collect()
    }

    /// `α̂(t)` by observation index.
    pub fn alpha_hat_at(&self, t: usize) -> &FixedBitSet {
        &self.alpha_hat[t]
    }

    pub(crate) fn check(&self, r: &Requirement) -> Result<(), SetupError> {
        self.model.check(r).map_err(SetupError::from)
    }
}

/// Observation domain = elements, `α(S) = ⌊S⌋`.
pub fn reflexive_setup(model: &SystemModel) -> TestSetup {
    let alpha = (0..model.len()).map(|e| model.below(e)).collect();
    let observations: Vec<String> = model.ids().to_vec();
    let sorted = observations.windows(2).all(|w| w[0] < w[1]);
    let built = if sorted {
        TestSetup::from_sorted("reflexive", model, observations, alpha)
    } else {
        // Powerset ids are in mask order rather than lexicographic order.
        TestSetup::from_unsorted("reflexive", model, observations, alpha)
    };
    built.expect("down-closure is order-preserving")
}

/// `α̂(t) = { S | t ∈ α(S) }`.
pub fn alpha_hat(setup: &TestSetup, t: &str) -> Result<Requirement, SetupError> {
    let idx = setup
        .observation_index(t)
        .ok_or_else(|| SetupError::UnknownObservation(t.to_string()))?;
    Ok(Requirement::from_set(
        &setup.model,
        format!("alpha_hat({t})"),
        setup.alpha_hat[idx].clone(),
    ))
}

/// `{ α̂(t) | t ∈ T }`, deduplicated by member set, in observation order.
pub fn induced_obligations(setup: &TestSetup) -> Vec<Requirement> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (t, hat) in setup.alpha_hat.iter().enumerate() {
        if seen.insert(hat.as_slice().to_vec()) {
            out.push(Requirement::from_set(
                &setup.model,
                format!("alpha_hat({})", setup.observations[t]),
                hat.clone(),
            ));
        }
    }
    out
}

/// Outcome of a refutability or verifiability check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefutabilityReport {
    pub holds: bool,
    /// Checked system to the least observation that settles it.
    pub witnesses: BTreeMap<String, String>,
    /// Checked systems with no such observation.
    pub blockers: BTreeSet<String>,
}

impl RefutabilityReport {
    pub(crate) fn collect(
        setup: &TestSetup,
        candidates: impl Iterator<Item = usize>,
        settling: &FixedBitSet,
    ) -> Self {
        let mut witnesses = BTreeMap::new();
        let mut blockers = BTreeSet::new();
        for s in candidates {
            let id = setup.model.id(s).to_string();
            match setup.alpha[s].intersection(settling).next() {
                Some(t) => {
                    witnesses.insert(id, setup.observations[t].clone());
                }
                None => {
                    blockers.insert(id);
                }
            }
        }
        RefutabilityReport {
            holds: blockers.is_empty(),
            witnesses,
            blockers,
        }
    }
}

/// Observations `t` with `α̂(t) ∩ R = ∅`, as indices.
pub(crate) fn irremediable(setup: &TestSetup, members: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(setup.observations.len());
    for (t, hat) in setup.alpha_hat.iter().enumerate() {
        if hat.is_disjoint(members) {
            out.insert(t);
        }
    }
    out
}

/// Observations `t` with `α̂(t) ⊆ R`, as indices.
pub(crate) fn conclusive(setup: &TestSetup, members: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(setup.observations.len());
    for (t, hat) in setup.alpha_hat.iter().enumerate() {
        if hat.is_subset(members) {
            out.insert(t);
        }
    }
    out
}

/// Every violator of `r` has an observation whose `α̂` misses `r` entirely.
pub fn is_refutable(setup: &TestSetup, r: &Requirement) -> Result<RefutabilityReport, SetupError> {
    setup.check(r)?;
    let omega = irremediable(setup, r.members());
    let violators = (0..setup.model.len()).filter(|&s| !r.contains(s));
    Ok(RefutabilityReport::collect(setup, violators, &omega))
}

/// Every satisfier of `r` has an observation whose `α̂` lies inside `r`.
pub fn is_verifiable(setup: &TestSetup, r: &Requirement) -> Result<RefutabilityReport, SetupError> {
    setup.check(r)?;
    let proofs = conclusive(setup, r.members());
    let satisfiers = r.members().ones();
    Ok(RefutabilityReport::collect(setup, satisfiers, &proofs))
}

/// Fast refutability verdict on a raw member set.
pub(crate) fn refutable_set(setup: &TestSetup, members: &FixedBitSet) -> bool {
    let omega = irremediable(setup, members);
    (0..setup.model.len())
        .filter(|&s| !members.contains(s))
        .all(|s| !setup.alpha[s].is_disjoint(&omega))
}

/// Result of comparing two setups by the requirements they can refute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permissiveness {
    pub holds: bool,
    /// A requirement refutable in the second setup but not the first.
    pub separating: Option<Vec<String>>,
}

/// Whether `more` refutes every requirement that `less` refutes, decided by
/// enumerating all `2^|Sys|` requirements. Refuses models above `cap`.
pub fn is_more_permissive(
    more: &TestSetup,
    less: &TestSetup,
    model: &SystemModel,
    cap: usize,
) -> Result<Permissiveness, SetupError> {
    for s in [more, less] {
        if s.model != *model {
            return Err(SetupError::SetupMismatch(s.name.clone()));
        }
    }
    let n = model.len();
    if n > cap || n >= usize::BITS as usize {
        return Err(SetupError::ModelTooLarge { elements: n, cap });
    }
    let mut members = model.empty_set();
    for mask in 0u64..(1u64 << n) {
        members.clear();
        for b in 0..n {
            if mask & (1 << b) != 0 {
                members.insert(b);
            }
        }
        if refutable_set(less, &members) && !refutable_set(more, &members) {
            let mut ids: Vec<String> = members.ones().map(|e| model.id(e).to_string()).collect();
            ids.sort();
            return Ok(Permissiveness {
                holds: false,
                separating: Some(ids),
            });
        }
    }
    Ok(Permissiveness {
        holds: true,
        separating: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{build_model, classify};

    fn diamond() -> SystemModel {
        build_model(
            ["bot", "a", "b", "top"],
            [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
            "bot",
            "top",
        )
        .unwrap()
    }

    fn alpha(entries: &[(&str, &[&str])]) -> BTreeMap<String, BTreeSet<String>> {
        entries
            .iter()
            .map(|(k, v)| (k.to_string(), v.iter().map(|s| s.to_string()).collect()))
            .collect()
    }

    #[test]
    fn monotone_alpha_validates() {
        let m = diamond();
        let a = alpha(&[
            ("bot", &[]),
            ("a", &["t1"]),
            ("b", &["t2"]),
            ("top", &["t1", "t2"]),
        ]);
        let s = build_setup("s", &m, ["t1", "t2"], &a).unwrap();
        assert_eq!(s.alpha_ids(m.top()), ["t1", "t2"]);
    }

    #[test]
    fn non_monotone_alpha_names_the_pair() {
        let m = diamond();
        let a = alpha(&[
            ("bot", &[]),
            ("a", &["t1"]),
            ("b", &["t2"]),
            ("top", &["t1"]),
        ]);
        let err = build_setup("s", &m, ["t1", "t2"], &a).unwrap_err();
        assert_eq!(
            err,
            SetupError::NotOrderPreserving {
                lower: "b".into(),
                upper: "top".into()
            }
        );
    }

    #[test]
    fn missing_and_unknown_entries() {
        let m = diamond();
        let a = alpha(&[("bot", &[]), ("a", &["t1"]), ("top", &["t1"])]);
        assert_eq!(
            build_setup("s", &m, ["t1"], &a).unwrap_err(),
            SetupError::AlphaNotTotal("b".into())
        );
        let a = alpha(&[("bot", &[]), ("a", &["zz"]), ("b", &[]), ("top", &[])]);
        assert_eq!(
            build_setup("s", &m, ["t1"], &a).unwrap_err(),
            SetupError::UnknownObservation("zz".into())
        );
    }

    #[test]
    fn reflexive_alpha_is_down_closure() {
        let m = diamond();
        let r = reflexive_setup(&m);
        assert_eq!(r.alpha_ids(m.element("a").unwrap()), ["a", "bot"]);
        assert_eq!(r.alpha_ids(m.bot()), ["bot"]);
        assert_eq!(r.alpha_ids(m.top()).len(), 4);
    }

    #[test]
    fn alpha_hat_on_reflexive_diamond() {
        let m = diamond();
        let r = reflexive_setup(&m);
        assert_eq!(alpha_hat(&r, "a").unwrap().member_ids(&m), ["a", "top"]);
        assert_eq!(alpha_hat(&r, "bot").unwrap().len(), 4);
        assert!(matches!(
            alpha_hat(&r, "nope"),
            Err(SetupError::UnknownObservation(_))
        ));
    }

    #[test]
    fn induced_obligations_of_reflexive_diamond() {
        let m = diamond();
        let obl = induced_obligations(&reflexive_setup(&m));
        let sets: BTreeSet<Vec<&str>> = obl.iter().map(|r| r.member_ids(&m)).collect();
        let expected: BTreeSet<Vec<&str>> = [
            vec!["top"],
            vec!["a", "top"],
            vec!["b", "top"],
            vec!["a", "b", "bot", "top"],
        ]
        .into_iter()
        .collect();
        assert_eq!(sets, expected);
        for o in &obl {
            assert!(classify(&m, o).unwrap().is_obligation);
        }
    }

    #[test]
    fn empty_alpha_induces_nothing() {
        let m = diamond();
        let s = TestSetup::from_indices("blind", &m, vec![], vec![vec![]; 4]).unwrap();
        assert!(induced_obligations(&s).is_empty());
    }

    #[test]
    fn reflexive_refutes_prohibition_with_self_witness() {
        let m = diamond();
        let p = Requirement::new(&m, "p", ["bot", "a"]).unwrap();
        let rep = is_refutable(&reflexive_setup(&m), &p).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.witnesses["b"], "b");
        assert_eq!(rep.witnesses["top"], "b");
    }

    #[test]
    fn nontrivial_obligation_is_irrefutable() {
        let m = diamond();
        let o = Requirement::new(&m, "o", ["a", "top"]).unwrap();
        let rep = is_refutable(&reflexive_setup(&m), &o).unwrap();
        assert!(!rep.holds);
        assert!(rep.blockers.contains("bot"));
        let ver = is_verifiable(&reflexive_setup(&m), &o).unwrap();
        assert!(ver.holds);
        assert_eq!(ver.witnesses["top"], "a");
    }

    #[test]
    fn everything_is_verifiable_for_the_full_requirement() {
        let m = diamond();
        let rep = is_verifiable(&reflexive_setup(&m), &Requirement::all(&m, "all")).unwrap();
        assert!(rep.holds && rep.witnesses.len() == 4);
    }

    #[test]
    fn permissiveness_is_reflexive_and_capped() {
        let m = diamond();
        let r = reflexive_setup(&m);
        let blind = TestSetup::from_indices("blind", &m, vec![], vec![vec![]; 4]).unwrap();
        assert!(
            is_more_permissive(&r, &r, &m, DEFAULT_PERMISSIVE_CAP)
                .unwrap()
                .holds
        );
        assert!(
            is_more_permissive(&r, &blind, &m, DEFAULT_PERMISSIVE_CAP)
                .unwrap()
                .holds
        );
        let back = is_more_permissive(&blind, &r, &m, DEFAULT_PERMISSIVE_CAP).unwrap();
        assert!(!back.holds && back.separating.is_some());
        assert_eq!(
            is_more_permissive(&r, &r, &m, 3).unwrap_err(),
            SetupError::ModelTooLarge {
                elements: 4,
                cap: 3
            }
        );
    }
}
