//! Behaviors as ultimately periodic words, systems as finite sets of them.
//!
//! The universe is truncated: behaviors are the canonical lassos `u·v^ω`
//! with `|u|` and `|v|` within configured bounds, and prefixes are looked
//! at up to a fixed depth. Safety, liveness and the derived notions are
//! evaluated relative to that carrier, so "every extension" means every
//! universe behavior with the given prefix.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::order::{OrderError, Requirement, SystemModel, MAX_POWERSET_ATOMS};
use crate::setup::{is_refutable, SetupError, TestSetup};

pub const DEFAULT_MAX_BEHAVIORS: usize = 12;
pub const DEFAULT_PREFIX_DEPTH: usize = 4;
pub const DEFAULT_SET_CAP: usize = 3;
/// Largest observation-set size supported by [`tstar_setup`].
pub const MAX_SET_CAP: usize = 4;
pub const MAX_TSTAR_OBSERVATIONS: usize = 100_000;

const RESERVED: &[char] = &['(', ')', '{', '}', ',', '^', ':', 'ε'];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TemporalError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("symbol `{0}` is not allowed in an alphabet")]
    InvalidSymbol(char),
    #[error("symbol `{0}` appears twice in the alphabet")]
    DuplicateSymbol(char),
    #[error("{0} must be at least 1")]
    ZeroBound(&'static str),
    #[error("loop of a lasso word must be nonempty")]
    EmptyLoop,
    #[error("cannot parse `{0}` as a lasso word; expected `stem(loop)^w`")]
    BadLasso(String),
    #[error("universe has {behaviors} behaviors; the cap is {cap}")]
    UniverseTooLarge { behaviors: usize, cap: usize },
    #[error("T_* would have {size} observations; the cap is {cap}")]
    ObservationSpaceTooLarge { size: u128, cap: usize },
    #[error("set cap {0} is outside 1..={MAX_SET_CAP}")]
    BadSetCap(usize),
    #[error("`{0}` is not a behavior of this universe")]
    UnknownBehavior(String),
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(char),
    #[error(
        "unknown property `{0}`; expected never:<s>, eventually:<s>, always:<s> or infinitely:<s>"
    )]
    UnknownProperty(String),
    #[error("property `{0}` belongs to a different universe")]
    PropertyMismatch(String),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Setup(#[from] SetupError),
}

/// The ω-word `stem · cycle^ω` in canonical form: the cycle is primitive
/// and the stem is as short as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoWord {
    stem: Vec<char>,
    cycle: Vec<char>,
}

impl LassoWord {
    pub fn new(stem: &str, cycle: &str) -> Result<Self, TemporalError> {
        let mut stem: Vec<char> = stem.chars().collect();
        let mut cycle: Vec<char> = cycle.chars().collect();
        if cycle.is_empty() {
            return Err(TemporalError::EmptyLoop);
        }
        let n = cycle.len();
        let period = (1..=n)
            .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| cycle[i] == cycle[i - p]))
            .unwrap_or(n);
        cycle.truncate(period);
        while stem.last() == cycle.last() {
            stem.pop();
            cycle.rotate_right(1);
        }
        Ok(LassoWord { stem, cycle })
    }

    pub fn stem(&self) -> String {
        self.stem.iter().collect()
    }

    pub fn cycle(&self) -> String {
        self.cycle.iter().collect()
    }

    pub fn letter(&self, i: usize) -> char {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// The first `n` letters.
    pub fn unroll(&self, n: usize) -> String {
        (0..n).map(|i| self.letter(i)).collect()
    }

    pub fn contains(&self, symbol: char) -> bool {
        self.stem.contains(&symbol) || self.cycle.contains(&symbol)
    }

    /// Whether `symbol` occurs infinitely often.
    pub fn recurs(&self, symbol: char) -> bool {
        self.cycle.contains(&symbol)
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})^w", self.stem(), self.cycle())
    }
}

impl FromStr for LassoWord {
    type Err = TemporalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TemporalError::BadLasso(s.to_string());
        let body = s.trim().strip_suffix(")^w").ok_or_else(bad)?;
        let (stem, cycle) = body.split_once('(').ok_or_else(bad)?;
        if cycle.contains('(') || stem.contains(')') {
            return Err(bad());
        }
        LassoWord::new(stem, cycle)
    }
}

/// All prefixes of `w` of length `0..=depth`, shortest first.
pub fn prefixes(w: &LassoWord, depth: usize) -> Vec<String> {
    (0..=depth).map(|n| w.unroll(n)).collect()
}

/// Display form of a finite word; the empty word is `ε`.
pub fn word_id(word: &str) -> String {
    if word.is_empty() {
        "ε".to_string()
    } else {
        word.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniverseParams {
    pub alphabet: Vec<char>,
    pub stem_bound: usize,
    pub loop_bound: usize,
    pub prefix_depth: usize,
    /// Largest observation set in `T_*`.
    pub set_cap: usize,
    pub max_behaviors: usize,
}

impl UniverseParams {
    pub fn new(
        alphabet: &[char],
        stem_bound: usize,
        loop_bound: usize,
        prefix_depth: usize,
    ) -> Self {
        UniverseParams {
            alphabet: alphabet.to_vec(),
            stem_bound,
            loop_bound,
            prefix_depth,
            set_cap: DEFAULT_SET_CAP,
            max_behaviors: DEFAULT_MAX_BEHAVIORS,
        }
    }

    pub fn with_set_cap(mut self, set_cap: usize) -> Self {
        self.set_cap = set_cap;
        self
    }

    pub fn with_max_behaviors(mut self, max_behaviors: usize) -> Self {
        self.max_behaviors = max_behaviors;
        self
    }
}

impl fmt::Display for UniverseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sigma: String = self.alphabet.iter().collect();
        write!(
            f,
            "temporal(sigma={sigma},stem<={},loop<={},depth={},set_cap={})",
            self.stem_bound, self.loop_bound, self.prefix_depth, self.set_cap
        )
    }
}

#[derive(Debug)]
struct UniverseInner {
    params: UniverseParams,
    behaviors: Vec<LassoWord>,
    model: SystemModel,
    /// Prefixes of universe behaviors up to the depth, shortest first.
    words: Vec<String>,
    /// Behaviors (as a bitmask) extending each stored word.
    extensions: Vec<u32>,
    word_index: HashMap<String, usize>,
    tstar: OnceLock<TestSetup>,
}

#[derive(Clone, Debug)]
pub struct TemporalUniverse {
    inner: Arc<UniverseInner>,
}

pub fn build_temporal_universe(params: &UniverseParams) -> Result<TemporalUniverse, TemporalError> {
    if params.alphabet.is_empty() {
        return Err(TemporalError::EmptyAlphabet);
    }
    let mut seen = Vec::new();
    for &c in &params.alphabet {
        if c.is_whitespace() || RESERVED.contains(&c) {
            return Err(TemporalError::InvalidSymbol(c));
        }
        if seen.contains(&c) {
            return Err(TemporalError::DuplicateSymbol(c));
        }
        seen.push(c);
    }
    if params.loop_bound == 0 {
        return Err(TemporalError::ZeroBound("loop bound"));
    }
    if params.prefix_depth == 0 {
        return Err(TemporalError::ZeroBound("prefix depth"));
    }
    if params.set_cap == 0 || params.set_cap > MAX_SET_CAP {
        return Err(TemporalError::BadSetCap(params.set_cap));
    }
    let cap = params.max_behaviors.min(MAX_POWERSET_ATOMS);
    let mut behaviors = Vec::new();
    for stem_len in 0..=params.stem_bound {
        for stem in words_of_length(&params.alphabet, stem_len) {
            for loop_len in 1..=params.loop_bound {
                for cycle in words_of_length(&params.alphabet, loop_len) {
                    let w = LassoWord::new(&stem, &cycle)?;
                    if w.stem.len() == stem_len && w.cycle.len() == loop_len {
                        behaviors.push(w);
                        if behaviors.len() > cap {
                            return Err(TemporalError::UniverseTooLarge {
                                behaviors: count_behaviors(params),
                                cap,
                            });
                        }
                    }
                }
            }
        }
    }
    let names: Vec<String> = behaviors.iter().map(ToString::to_string).collect();
    let model = SystemModel::powerset(&names)?;

    let mut extensions: BTreeMap<String, u32> = BTreeMap::new();
    for (b, w) in behaviors.iter().enumerate() {
        for p in prefixes(w, params.prefix_depth) {
            *extensions.entry(p).or_default() |= 1 << b;
        }
    }
    let mut words: Vec<String> = extensions.keys().cloned().collect();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let word_index = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.clone(), i))
        .collect();
    let extensions = words.iter().map(|w| extensions[w]).collect();
    Ok(TemporalUniverse {
        inner: Arc::new(UniverseInner {
            params: params.clone(),
            behaviors,
            model,
            words,
            extensions,
            word_index,
            tstar: OnceLock::new(),
        }),
    })
}

/// Number of canonical behaviors the parameters would produce.
fn count_behaviors(params: &UniverseParams) -> usize {
    // Canonical lassos with exactly these lengths are counted by the same
    // filter the builder applies.
    let mut n = 0;
    for stem_len in 0..=params.stem_bound {
        for stem in words_of_length(&params.alphabet, stem_len) {
            for loop_len in 1..=params.loop_bound {
                for cycle in words_of_length(&params.alphabet, loop_len) {
                    if let Ok(w) = LassoWord::new(&stem, &cycle) {
                        n += usize::from(w.stem.len() == stem_len && w.cycle.len() == loop_len);
                    }
                }
            }
        }
    }
    n
}

fn words_of_length(alphabet: &[char], len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
    }
    out
}

impl TemporalUniverse {
    pub fn params(&self) -> &UniverseParams {
        &self.inner.params
    }

    pub fn behaviors(&self) -> &[LassoWord] {
        &self.inner.behaviors
    }

    pub fn model(&self) -> &SystemModel {
        &self.inner.model
    }

    pub fn prefix_depth(&self) -> usize {
        self.inner.params.prefix_depth
    }

    /// Prefixes of universe behaviors up to the depth, shortest first.
    pub fn words(&self) -> &[String] {
        &self.inner.words
    }

    pub fn behavior_index(&self, name: &str) -> Result<usize, TemporalError> {
        let w: LassoWord = name.parse()?;
        self.inner
            .behaviors
            .iter()
            .position(|b| *b == w)
            .ok_or_else(|| TemporalError::UnknownBehavior(name.to_string()))
    }

    /// Universe behaviors having `word` as a prefix, as a bitmask.
    pub fn extensions(&self, word: &str) -> u32 {
        self.inner
            .word_index
            .get(word)
            .map_or(0, |&i| self.inner.extensions[i])
    }

    fn full_mask(&self) -> u32 {
        ((1u64 << self.inner.behaviors.len()) - 1) as u32
    }

    /// The system (model element) containing exactly the listed behaviors.
    pub fn system(&self, names: &[&str]) -> Result<usize, TemporalError> {
        let mut mask = 0usize;
        for name in names {
            mask |= 1 << self.behavior_index(name)?;
        }
        Ok(mask)
    }

    fn check_symbol(&self, symbol: char) -> Result<(), TemporalError> {
        if self.inner.params.alphabet.contains(&symbol) {
            Ok(())
        } else {
            Err(TemporalError::UnknownSymbol(symbol))
        }
    }

    /// The cached `T_*` setup, built on first use.
    pub fn tstar(&self) -> Result<&TestSetup, TemporalError> {
        if let Some(s) = self.inner.tstar.get() {
            return Ok(s);
        }
        let built = build_tstar(self)?;
        Ok(self.inner.tstar.get_or_init(|| built))
    }
}

/// A set of permissible behaviors, restricted to one universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalProperty {
    name: String,
    universe: u64,
    members: u32,
}

impl TemporalProperty {
    pub fn from_mask(universe: &TemporalUniverse, name: impl Into<String>, members: u32) -> Self {
        TemporalProperty {
            name: name.into(),
            universe: universe.model().key(),
            members: members & universe.full_mask(),
        }
    }

    pub fn from_predicate(
        universe: &TemporalUniverse,
        name: impl Into<String>,
        pred: impl Fn(&LassoWord) -> bool,
    ) -> Self {
        let mask = universe
            .behaviors()
            .iter()
            .enumerate()
            .filter(|(_, w)| pred(w))
            .fold(0u32, |m, (b, _)| m | 1 << b);
        Self::from_mask(universe, name, mask)
    }

    pub fn from_behaviors(
        universe: &TemporalUniverse,
        name: impl Into<String>,
        behaviors: &[&str],
    ) -> Result<Self, TemporalError> {
        Ok(Self::from_mask(
            universe,
            name,
            universe.system(behaviors)? as u32,
        ))
    }

    pub fn all(universe: &TemporalUniverse) -> Self {
        Self::from_mask(universe, "all", universe.full_mask())
    }

    pub fn none(universe: &TemporalUniverse) -> Self {
        Self::from_mask(universe, "none", 0)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mask(&self) -> u32 {
        self.members
    }

    pub fn contains(&self, behavior: usize) -> bool {
        self.members & (1 << behavior) != 0
    }

    pub fn member_names(&self, universe: &TemporalUniverse) -> Vec<String> {
        universe
            .behaviors()
            .iter()
            .enumerate()
            .filter(|&(b, _)| self.contains(b))
            .map(|(_, w)| w.to_string())
            .collect()
    }

    fn check(&self, universe: &TemporalUniverse) -> Result<(), TemporalError> {
        if self.universe == universe.model().key() {
            Ok(())
        } else {
            Err(TemporalError::PropertyMismatch(self.name.clone()))
        }
    }
}

/// `never:x`, `eventually:x`, `always:x` or `infinitely:x` for a symbol `x`.
pub fn named_property(
    universe: &TemporalUniverse,
    spec: &str,
) -> Result<TemporalProperty, TemporalError> {
    let unknown = || TemporalError::UnknownProperty(spec.to_string());
    let (kind, sym) = spec.split_once(':').ok_or_else(unknown)?;
    let mut chars = sym.chars();
    let (Some(s), None) = (chars.next(), chars.next()) else {
        return Err(unknown());
    };
    universe.check_symbol(s)?;
    let name = spec.to_string();
    Ok(match kind {
        "never" => TemporalProperty::from_predicate(universe, name, |w| !w.contains(s)),
        "eventually" => TemporalProperty::from_predicate(universe, name, |w| w.contains(s)),
        "always" => TemporalProperty::from_predicate(universe, name, |w| {
            w.stem.iter().chain(&w.cycle).all(|&c| c == s)
        }),
        "infinitely" => TemporalProperty::from_predicate(universe, name, |w| w.recurs(s)),
        _ => return Err(unknown()),
    })
}

/// Outcome of [`is_safety`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SafetyReport {
    pub holds: bool,
    /// Violating behavior to its shortest bad prefix.
    pub bad_prefixes: BTreeMap<String, String>,
    /// Violating behaviors without a bad prefix within the depth.
    pub offenders: Vec<String>,
}

/// Outcome of [`is_liveness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LivenessReport {
    pub holds: bool,
    /// Shortest stored word that no member of the property extends.
    pub stuck: Option<String>,
}

fn blocked(universe: &TemporalUniverse, word: &str, members: u32) -> bool {
    universe.extensions(word) & members == 0
}

/// Every violating behavior has a prefix that no member of `phi` extends.
pub fn is_safety(
    universe: &TemporalUniverse,
    phi: &TemporalProperty,
) -> Result<SafetyReport, TemporalError> {
    phi.check(universe)?;
    let depth = universe.prefix_depth();
    let mut bad_prefixes = BTreeMap::new();
    let mut offenders = Vec::new();
    for (b, w) in universe.behaviors().iter().enumerate() {
        if phi.contains(b) {
            continue;
        }
        match prefixes(w, depth)
            .into_iter()
            .find(|p| blocked(universe, p, phi.members))
        {
            Some(p) => {
                bad_prefixes.insert(w.to_string(), word_id(&p));
            }
            None => offenders.push(w.to_string()),
        }
    }
    Ok(SafetyReport {
        holds: offenders.is_empty(),
        bad_prefixes,
        offenders,
    })
}

/// Every stored word extends to some member of `phi`.
pub fn is_liveness(
    universe: &TemporalUniverse,
    phi: &TemporalProperty,
) -> Result<LivenessReport, TemporalError> {
    phi.check(universe)?;
    let stuck = universe
        .words()
        .iter()
        .find(|w| blocked(universe, w, phi.members))
        .map(|w| word_id(w));
    Ok(LivenessReport {
        holds: stuck.is_none(),
        stuck,
    })
}

/// Stored words no member of `phi` extends.
pub fn nabla(
    universe: &TemporalUniverse,
    phi: &TemporalProperty,
) -> Result<Vec<String>, TemporalError> {
    phi.check(universe)?;
    Ok(universe
        .words()
        .iter()
        .filter(|w| blocked(universe, w, phi.members))
        .map(|w| word_id(w))
        .collect())
}

/// Splits `phi` into its closure and the liveness part, whose
/// intersection is `phi`.
pub fn decompose(
    universe: &TemporalUniverse,
    phi: &TemporalProperty,
) -> Result<(TemporalProperty, TemporalProperty), TemporalError> {
    phi.check(universe)?;
    let depth = universe.prefix_depth();
    let safe = universe
        .behaviors()
        .iter()
        .enumerate()
        .filter(|(_, w)| {
            prefixes(w, depth)
                .iter()
                .all(|p| !blocked(universe, p, phi.members))
        })
        .fold(0u32, |m, (b, _)| m | 1 << b);
    let live = phi.members | (universe.full_mask() & !safe);
    Ok((
        TemporalProperty::from_mask(universe, format!("safe({})", phi.name), safe),
        TemporalProperty::from_mask(universe, format!("live({})", phi.name), live),
    ))
}

/// `R_φ`: the systems all of whose behaviors lie in `phi`.
pub fn property_requirement(
    universe: &TemporalUniverse,
    phi: &TemporalProperty,
) -> Result<Requirement, TemporalError> {
    phi.check(universe)?;
    let outside = !phi.members as usize;
    Ok(Requirement::from_predicate(
        universe.model(),
        format!("R[{}]", phi.name),
        |s| s & outside == 0,
    ))
}

/// Systems exhibiting at least one behavior that contains `symbol`.
pub fn exhibits_symbol(
    universe: &TemporalUniverse,
    symbol: char,
) -> Result<Requirement, TemporalError> {
    universe.check_symbol(symbol)?;
    let with =
        TemporalProperty::from_predicate(universe, "", |w| w.contains(symbol)).members as usize;
    Ok(Requirement::from_predicate(
        universe.model(),
        format!("exhibits({symbol})"),
        |s| s & with != 0,
    ))
}

pub fn tstar_setup(universe: &TemporalUniverse) -> Result<TestSetup, TemporalError> {
    universe.tstar().cloned()
}

/// Refutability in `T_*`.
pub fn is_hyper_safety(
    universe: &TemporalUniverse,
    r: &Requirement,
) -> Result<bool, TemporalError> {
    Ok(is_refutable(universe.tstar()?, r)?.holds)
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Observations are the sets of at most `set_cap` words of length up to
/// the depth. A set is observed of `S` when each of its words is a prefix
/// of some behavior in `S`.
fn build_tstar(universe: &TemporalUniverse) -> Result<TestSetup, TemporalError> {
    let params = universe.params();
    let mut all_words = Vec::new();
    for len in 0..=params.prefix_depth {
        all_words.extend(words_of_length(&params.alphabet, len));
    }
    let w = all_words.len() as u128;
    let size: u128 = (0..=params.set_cap as u128)
        .filter(|&k| k <= w)
        .map(|k| binomial(w, k))
        .fold(0u128, u128::saturating_add);
    if size > MAX_TSTAR_OBSERVATIONS as u128 {
        return Err(TemporalError::ObservationSpaceTooLarge {
            size,
            cap: MAX_TSTAR_OBSERVATIONS,
        });
    }

    let model = universe.model();
    let n = model.len();
    // Systems exhibiting some extension of each word.
    let hits: Vec<FixedBitSet> = all_words
        .iter()
        .map(|word| {
            let ext = universe.extensions(word) as usize;
            let mut set = FixedBitSet::with_capacity(n);
            if ext != 0 {
                set.extend((0..n).filter(|s| s & ext != 0));
            }
            set
        })
        .collect();

    let mut observations = Vec::with_capacity(size as usize);
    let mut alpha = vec![FixedBitSet::with_capacity(size as usize); n];
    let mut combo: Vec<usize> = Vec::with_capacity(params.set_cap);
    let mut emit = |combo: &[usize]| {
        let t = observations.len();
        let parts: Vec<String> = combo.iter().map(|&i| word_id(&all_words[i])).collect();
        observations.push(format!("{{{}}}", parts.join(",")));
        let mut hat = model.full_set();
        for &i in combo {
            hat.intersect_with(&hits[i]);
        }
        for s in hat.ones() {
            alpha[s].insert(t);
        }
    };
    combinations(all_words.len(), params.set_cap, 0, &mut combo, &mut emit);
    Ok(TestSetup::from_unsorted(
        "t_star",
        model,
        observations,
        alpha,
    )?)
}

fn combinations(
    n: usize,
    cap: usize,
    from: usize,
    combo: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    emit(combo);
    if combo.len() == cap {
        return;
    }
    for i in from..n {
        combo.push(i);
        combinations(n, cap, i + 1, combo, emit);
        combo.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::classify;
    use crate::setup::is_verifiable;

    fn universe(alphabet: &[char], stem: usize, cycle: usize, depth: usize) -> TemporalUniverse {
        build_temporal_universe(&UniverseParams::new(alphabet, stem, cycle, depth)).unwrap()
    }

    fn names(u: &TemporalUniverse) -> Vec<String> {
        u.behaviors().iter().map(ToString::to_string).collect()
    }

    #[test]
    fn canonical_forms() {
        let w = LassoWord::new("a", "a").unwrap();
        assert_eq!(w.to_string(), "(a)^w");
        assert_eq!(LassoWord::new("", "abab").unwrap().to_string(), "(ab)^w");
        assert_eq!(LassoWord::new("ba", "ba").unwrap().to_string(), "(ba)^w");
        assert_eq!(LassoWord::new("a", "ba").unwrap().to_string(), "(ab)^w");
        assert_eq!(LassoWord::new("ab", "b").unwrap().to_string(), "a(b)^w");
        assert_eq!("a(ab)^w".parse::<LassoWord>().unwrap().unroll(5), "aabab");
        assert!(matches!(
            LassoWord::new("a", ""),
            Err(TemporalError::EmptyLoop)
        ));
        assert!("a(b)".parse::<LassoWord>().is_err());
    }

    #[test]
    fn small_universes() {
        let u = universe(&['a', 'b'], 1, 1, 3);
        assert_eq!(names(&u), ["(a)^w", "(b)^w", "a(b)^w", "b(a)^w"]);
        assert_eq!(u.model().len(), 16);
        let unary = universe(&['a'], 3, 3, 2);
        assert_eq!(names(&unary), ["(a)^w"]);
        let u8 = universe(&['a', 'b'], 1, 2, 2);
        assert_eq!(u8.behaviors().len(), 8);
        assert!(names(&u8).contains(&"(ab)^w".to_string()));
    }

    #[test]
    fn oversized_universe_is_rejected() {
        let p = UniverseParams::new(&['a', 'b'], 2, 3, 2);
        assert!(matches!(
            build_temporal_universe(&p),
            Err(TemporalError::UniverseTooLarge { cap: 12, .. })
        ));
        assert_eq!(
            build_temporal_universe(&UniverseParams::new(&['a', 'a'], 1, 1, 1)).unwrap_err(),
            TemporalError::DuplicateSymbol('a')
        );
        assert_eq!(
            build_temporal_universe(&UniverseParams::new(&[], 1, 1, 1)).unwrap_err(),
            TemporalError::EmptyAlphabet
        );
    }

    #[test]
    fn prefix_lists() {
        let ab = LassoWord::new("a", "b").unwrap();
        assert_eq!(prefixes(&ab, 3), ["", "a", "ab", "abb"]);
        assert_eq!(prefixes(&ab, 0), [""]);
        let alt = LassoWord::new("", "ab").unwrap();
        assert_eq!(prefixes(&alt, 4), ["", "a", "ab", "aba", "abab"]);
    }

    #[test]
    fn never_b_is_safety() {
        let u = universe(&['a', 'b'], 1, 1, 2);
        let phi = named_property(&u, "never:b").unwrap();
        assert_eq!(phi.member_names(&u), ["(a)^w"]);
        let rep = is_safety(&u, &phi).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.bad_prefixes["b(a)^w"], "b");
        assert!(is_safety(&u, &TemporalProperty::all(&u)).unwrap().holds);
    }

    #[test]
    fn eventually_b_in_eight_behavior_universe() {
        let u = universe(&['a', 'b'], 1, 2, 2);
        let phi = named_property(&u, "eventually:b").unwrap();
        let safety = is_safety(&u, &phi).unwrap();
        assert!(!safety.holds);
        assert_eq!(safety.offenders, ["(a)^w"]);
        assert!(is_liveness(&u, &phi).unwrap().holds);
        let none = is_liveness(&u, &TemporalProperty::none(&u)).unwrap();
        assert_eq!(none.stuck.as_deref(), Some("ε"));
    }

    #[test]
    fn decomposition_edges() {
        let u = universe(&['a', 'b'], 1, 1, 3);
        let (s, l) = decompose(&u, &TemporalProperty::all(&u)).unwrap();
        assert_eq!((s.mask(), l.mask()), (15, 15));
        let (s, l) = decompose(&u, &TemporalProperty::none(&u)).unwrap();
        assert_eq!((s.mask(), l.mask()), (0, 15));
        let phi = named_property(&u, "eventually:b").unwrap();
        let (s, l) = decompose(&u, &phi).unwrap();
        assert!(is_safety(&u, &s).unwrap().holds);
        assert!(is_liveness(&u, &l).unwrap().holds);
        assert_eq!(s.mask() & l.mask(), phi.mask());
    }

    #[test]
    fn property_requirements_are_prohibitions() {
        let u = universe(&['a', 'b'], 1, 1, 2);
        let r = property_requirement(&u, &TemporalProperty::all(&u)).unwrap();
        assert_eq!(r.len(), 16);
        let r = property_requirement(&u, &TemporalProperty::none(&u)).unwrap();
        assert_eq!(r.member_ids(u.model()), ["{}"]);
        let phi = TemporalProperty::from_behaviors(&u, "a", &["(a)^w"]).unwrap();
        let r = property_requirement(&u, &phi).unwrap();
        assert_eq!(r.member_ids(u.model()), ["{(a)^w}", "{}"]);
        assert!(classify(u.model(), &r).unwrap().is_prohibition);
    }

    #[test]
    fn nabla_words() {
        let u = universe(&['a', 'b'], 1, 1, 2);
        assert!(nabla(&u, &TemporalProperty::all(&u)).unwrap().is_empty());
        let never_b = named_property(&u, "never:b").unwrap();
        assert_eq!(nabla(&u, &never_b).unwrap(), ["b", "ab", "ba", "bb"]);
        assert_eq!(
            nabla(&u, &TemporalProperty::none(&u)).unwrap(),
            ["ε", "a", "b", "aa", "ab", "ba", "bb"]
        );
    }

    #[test]
    fn tstar_shape() {
        let u = universe(&['a'], 0, 1, 2);
        let t = u.tstar().unwrap();
        // Words ε, a, aa; sets of at most three of them.
        assert_eq!(t.observations().len(), 8);
        assert_eq!(t.alpha_ids(0), ["{}"]);
        assert_eq!(t.alpha(1).count_ones(..), 8);
        let u = universe(&['a', 'b'], 0, 1, 2);
        let t = u.tstar().unwrap();
        let s = u.system(&["(a)^w"]).unwrap();
        assert!(t.alpha_ids(s).contains(&"{ε,a,aa}"));
        assert!(!t.alpha_ids(s).contains(&"{b}"));
    }

    #[test]
    fn exhibits_symbol_is_verifiable_not_hyper_safety() {
        let u = universe(&['a', 'b'], 1, 2, 4);
        let r = exhibits_symbol(&u, 'b').unwrap();
        assert!(classify(u.model(), &r).unwrap().is_obligation);
        assert!(!is_hyper_safety(&u, &r).unwrap());
        assert!(is_verifiable(u.tstar().unwrap(), &r).unwrap().holds);
        let never_b = named_property(&u, "never:b").unwrap();
        let r = property_requirement(&u, &never_b).unwrap();
        assert!(is_hyper_safety(&u, &r).unwrap());
    }
}
