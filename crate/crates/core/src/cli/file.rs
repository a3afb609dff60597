//! The workbench file: a JSON document naming a model and the
//! requirements, setups, assumptions and temporal properties over it.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::eio::{build_universe, builtin_requirement, tk_setup, Builtin, EioUniverse};
use crate::order::{build_model, Requirement, SystemModel};
use crate::setup::{build_setup, reflexive_setup, TestSetup};
use crate::temporal::{
    build_temporal_universe, exhibits_symbol, named_property, property_requirement,
    TemporalProperty, TemporalUniverse, UniverseParams, DEFAULT_MAX_BEHAVIORS,
    DEFAULT_PREFIX_DEPTH, DEFAULT_SET_CAP,
};

use super::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchDoc {
    pub model: ModelDoc,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub properties: BTreeMap<String, PropertyDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub requirements: BTreeMap<String, SetDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub assumptions: BTreeMap<String, SetDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub setups: BTreeMap<String, SetupDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelDoc {
    Builtin(BuiltinModel),
    Explicit(ExplicitModel),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitModel {
    pub elements: Vec<String>,
    /// Pairs `[lower, upper]`; closed reflexively and transitively.
    #[serde(default)]
    pub order: Vec<(String, String)>,
    pub bot: String,
    pub top: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case", deny_unknown_fields)]
pub enum BuiltinModel {
    Eio {
        bound: usize,
    },
    Temporal {
        alphabet: Vec<String>,
        stem_bound: usize,
        loop_bound: usize,
        #[serde(default = "default_depth")]
        prefix_depth: usize,
        #[serde(default = "default_set_cap")]
        set_cap: usize,
        #[serde(default = "default_max_behaviors")]
        max_behaviors: usize,
    },
}

fn default_depth() -> usize {
    DEFAULT_PREFIX_DEPTH
}

fn default_set_cap() -> usize {
    DEFAULT_SET_CAP
}

fn default_max_behaviors() -> usize {
    DEFAULT_MAX_BEHAVIORS
}

/// A set of systems: explicit member ids or a generator reference.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetDoc {
    Members(Vec<String>),
    Builtin(BuiltinSet),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case", deny_unknown_fields)]
pub enum BuiltinSet {
    All,
    None,
    Determinism,
    Totality,
    TotalFunction,
    AnonymityZigzag,
    NeverZeroOdd,
    Exhibits {
        input: u64,
        output: u64,
    },
    /// `R_φ` for a property named in `properties` or written inline.
    Property {
        property: String,
    },
    ExhibitsSymbol {
        symbol: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetupDoc {
    Builtin(BuiltinSetup),
    Explicit {
        observations: Vec<String>,
        alpha: BTreeMap<String, Vec<String>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case", deny_unknown_fields)]
pub enum BuiltinSetup {
    Reflexive,
    #[serde(rename = "t_k")]
    Tk {
        k: usize,
    },
    #[serde(rename = "t_star")]
    TStar,
}

/// A temporal property: `never:x`-style name or explicit behaviors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyDoc {
    Named(String),
    Behaviors(Vec<String>),
}

#[derive(Clone, Debug)]
pub enum Universe {
    Explicit,
    Eio(EioUniverse),
    Temporal(TemporalUniverse),
}

/// A parsed and validated workbench file.
#[derive(Clone, Debug)]
pub struct Workbench {
    pub doc: WorkbenchDoc,
    pub path: PathBuf,
    pub universe: Universe,
    pub model: SystemModel,
    pub properties: BTreeMap<String, TemporalProperty>,
    pub requirements: BTreeMap<String, Requirement>,
    pub assumptions: BTreeMap<String, Requirement>,
    explicit_setups: BTreeMap<String, TestSetup>,
}

/// Reads a workbench; `name` falls back to `name.json` when absent.
pub fn parse_file(path: impl AsRef<Path>) -> Result<Workbench, CliError> {
    let mut path = path.as_ref().to_path_buf();
    if !path.exists() && path.extension().is_none() {
        path.set_extension("json");
    }
    let raw = fs::read_to_string(&path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    parse_str(&raw, &path)
}

pub fn parse_str(raw: &str, path: &Path) -> Result<Workbench, CliError> {
    let doc: WorkbenchDoc = serde_json::from_str(raw).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    resolve(doc, raw, path)
}

/// Validates an in-memory document, as produced by the generators.
pub fn from_doc(doc: WorkbenchDoc) -> Result<Workbench, CliError> {
    let raw = serde_json::to_string_pretty(&doc).expect("documents serialize");
    resolve(doc, &raw, Path::new("<generated>"))
}

struct Locator<'a> {
    raw: &'a str,
    path: &'a Path,
}

impl Locator<'_> {
    /// Error positioned at the first `"token"` after `"section"`.
    fn error(&self, section: &str, token: &str, message: impl ToString) -> CliError {
        let quoted = |s: &str| serde_json::to_string(s).expect("strings serialize");
        let start = self.raw.find(&quoted(section)).unwrap_or(0);
        let offset = self.raw[start..]
            .find(&quoted(token))
            .map_or(start, |o| start + o);
        let before = &self.raw[..offset];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        CliError::Validation {
            path: self.path.to_path_buf(),
            line,
            column,
            message: message.to_string(),
        }
    }
}

fn resolve(doc: WorkbenchDoc, raw: &str, path: &Path) -> Result<Workbench, CliError> {
    let at = Locator { raw, path };
    let universe = match &doc.model {
        ModelDoc::Explicit(_) => Universe::Explicit,
        ModelDoc::Builtin(BuiltinModel::Eio { bound }) => {
            Universe::Eio(build_universe(*bound).map_err(|e| at.error("model", "bound", e))?)
        }
        ModelDoc::Builtin(BuiltinModel::Temporal {
            alphabet,
            stem_bound,
            loop_bound,
            prefix_depth,
            set_cap,
            max_behaviors,
        }) => {
            let mut symbols = Vec::with_capacity(alphabet.len());
            for s in alphabet {
                let mut chars = s.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => symbols.push(c),
                    _ => {
                        return Err(at.error(
                            "alphabet",
                            s,
                            format!("symbol `{s}` must be a single character"),
                        ))
                    }
                }
            }
            let params = UniverseParams::new(&symbols, *stem_bound, *loop_bound, *prefix_depth)
                .with_set_cap(*set_cap)
                .with_max_behaviors(*max_behaviors);
            Universe::Temporal(
                build_temporal_universe(&params).map_err(|e| at.error("model", "builtin", e))?,
            )
        }
    };
    let model = match (&doc.model, &universe) {
        (ModelDoc::Explicit(m), _) => build_model(
            &m.elements,
            m.order.iter().map(|(a, b)| (a, b)),
            &m.bot,
            &m.top,
        )
        .map_err(|e| {
            let token = match &e {
                crate::order::OrderError::UnknownElement(x) => x.clone(),
                crate::order::OrderError::CycleDetected(a, _) => a.clone(),
                crate::order::OrderError::BoundViolation { bound, .. } => bound.clone(),
                _ => "elements".to_string(),
            };
            at.error("model", &token, e)
        })?,
        (_, Universe::Eio(u)) => u.model().clone(),
        (_, Universe::Temporal(u)) => u.model().clone(),
        (_, Universe::Explicit) => unreachable!("explicit universes come from explicit models"),
    };

    let mut properties = BTreeMap::new();
    for (name, p) in &doc.properties {
        let Universe::Temporal(u) = &universe else {
            return Err(at.error("properties", name, "properties need a temporal model"));
        };
        let prop = match p {
            PropertyDoc::Named(spec) => {
                named_property(u, spec).map(|p| rename_property(u, &p, name))
            }
            PropertyDoc::Behaviors(list) => {
                let names: Vec<&str> = list.iter().map(String::as_str).collect();
                TemporalProperty::from_behaviors(u, name.clone(), &names)
            }
        }
        .map_err(|e| at.error("properties", name, e))?;
        properties.insert(name.clone(), prop);
    }

    let resolve_set = |section: &str, name: &str, set: &SetDoc| -> Result<Requirement, CliError> {
        match set {
            SetDoc::Members(ids) => Requirement::new(&model, name, ids).map_err(|e| {
                let token = match &e {
                    crate::order::OrderError::UnknownElement(x) => x.clone(),
                    _ => name.to_string(),
                };
                at.error(section, &token, e)
            }),
            SetDoc::Builtin(b) => builtin_set(&universe, &model, &properties, name, b)
                .map_err(|m| at.error(section, name, m)),
        }
    };
    let mut requirements = BTreeMap::new();
    for (name, set) in &doc.requirements {
        requirements.insert(name.clone(), resolve_set("requirements", name, set)?);
    }
    let mut assumptions = BTreeMap::new();
    for (name, set) in &doc.assumptions {
        assumptions.insert(name.clone(), resolve_set("assumptions", name, set)?);
    }

    let mut explicit_setups = BTreeMap::new();
    for (name, setup) in &doc.setups {
        match setup {
            SetupDoc::Explicit {
                observations,
                alpha,
            } => {
                let alpha: BTreeMap<String, std::collections::BTreeSet<String>> = alpha
                    .iter()
                    .map(|(k, v)| (k.clone(), v.iter().cloned().collect()))
                    .collect();
                let built = build_setup(name.clone(), &model, observations.clone(), &alpha)
                    .map_err(|e| {
                        let token = match &e {
                            crate::setup::SetupError::NotOrderPreserving { lower, .. } => {
                                lower.clone()
                            }
                            crate::setup::SetupError::AlphaNotTotal(x)
                            | crate::setup::SetupError::UnknownObservation(x) => x.clone(),
                            crate::setup::SetupError::Order(
                                crate::order::OrderError::UnknownElement(x),
                            ) => x.clone(),
                            _ => name.clone(),
                        };
                        at.error("setups", &token, e)
                    })?;
                explicit_setups.insert(name.clone(), built);
            }
            SetupDoc::Builtin(b) => {
                let ok = match (b, &universe) {
                    (BuiltinSetup::Reflexive, _) => model.len() <= 1 << 14,
                    (BuiltinSetup::Tk { .. }, Universe::Eio(_)) => true,
                    (BuiltinSetup::TStar, Universe::Temporal(_)) => true,
                    _ => false,
                };
                if !ok {
                    return Err(at.error(
                        "setups",
                        name,
                        format!("setup `{name}` is not available for this model"),
                    ));
                }
            }
        }
    }

    Ok(Workbench {
        doc,
        path: path.to_path_buf(),
        universe,
        model,
        properties,
        requirements,
        assumptions,
        explicit_setups,
    })
}

fn rename_property(u: &TemporalUniverse, p: &TemporalProperty, name: &str) -> TemporalProperty {
    TemporalProperty::from_mask(u, name, p.mask())
}

fn builtin_set(
    universe: &Universe,
    model: &SystemModel,
    properties: &BTreeMap<String, TemporalProperty>,
    name: &str,
    b: &BuiltinSet,
) -> Result<Requirement, String> {
    let eio_builtin = |which: Builtin| match universe {
        Universe::Eio(u) => Ok(builtin_requirement(u, which).renamed(name)),
        _ => Err(format!("`{}` needs an eio model", which.name())),
    };
    match b {
        BuiltinSet::All => Ok(Requirement::all(model, name)),
        BuiltinSet::None => Ok(Requirement::none(model, name)),
        BuiltinSet::Determinism => eio_builtin(Builtin::Determinism),
        BuiltinSet::Totality => eio_builtin(Builtin::Totality),
        BuiltinSet::TotalFunction => eio_builtin(Builtin::TotalFunction),
        BuiltinSet::AnonymityZigzag => eio_builtin(Builtin::AnonymityZigzag),
        BuiltinSet::NeverZeroOdd => eio_builtin(Builtin::NeverZeroOdd),
        BuiltinSet::Exhibits { input, output } => match universe {
            Universe::Eio(u) => u
                .exhibits(*input, *output)
                .map(|r| r.renamed(name))
                .map_err(|e| e.to_string()),
            _ => Err("`exhibits` needs an eio model".to_string()),
        },
        BuiltinSet::Property { property } => match universe {
            Universe::Temporal(u) => {
                let phi = match properties.get(property) {
                    Some(p) => p.clone(),
                    None => named_property(u, property).map_err(|e| e.to_string())?,
                };
                property_requirement(u, &phi)
                    .map(|r| r.renamed(name))
                    .map_err(|e| e.to_string())
            }
            _ => Err("`property` needs a temporal model".to_string()),
        },
        BuiltinSet::ExhibitsSymbol { symbol } => match universe {
            Universe::Temporal(u) => {
                let mut chars = symbol.chars();
                let (Some(c), None) = (chars.next(), chars.next()) else {
                    return Err(format!("symbol `{symbol}` must be a single character"));
                };
                exhibits_symbol(u, c)
                    .map(|r| r.renamed(name))
                    .map_err(|e| e.to_string())
            }
            _ => Err("`exhibits_symbol` needs a temporal model".to_string()),
        },
    }
}

impl Workbench {
    pub fn requirement(&self, name: &str) -> Result<&Requirement, CliError> {
        self.requirements.get(name).ok_or_else(|| {
            CliError::Usage(format!(
                "no requirement named `{name}` in {}",
                self.path.display()
            ))
        })
    }

    pub fn assumption(&self, name: &str) -> Result<&Requirement, CliError> {
        self.assumptions
            .get(name)
            .or_else(|| self.requirements.get(name))
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "no assumption named `{name}` in {}",
                    self.path.display()
                ))
            })
    }

    pub fn property(&self, name: &str) -> Result<TemporalProperty, CliError> {
        let u = self.temporal()?;
        if let Some(p) = self.properties.get(name) {
            return Ok(p.clone());
        }
        named_property(u, name)
            .map_err(|e| CliError::Usage(format!("no property named `{name}`: {e}")))
    }

    pub fn temporal(&self) -> Result<&TemporalUniverse, CliError> {
        match &self.universe {
            Universe::Temporal(u) => Ok(u),
            _ => Err(CliError::Usage(format!(
                "{} does not describe a temporal model",
                self.path.display()
            ))),
        }
    }

    /// Builds the named setup. Builtin setups are built on demand.
    pub fn setup(&self, name: &str) -> Result<TestSetup, CliError> {
        if let Some(s) = self.explicit_setups.get(name) {
            return Ok(s.clone());
        }
        let Some(SetupDoc::Builtin(b)) = self.doc.setups.get(name) else {
            return Err(CliError::Usage(format!(
                "no setup named `{name}` in {}",
                self.path.display()
            )));
        };
        let runtime = |e: &dyn std::fmt::Display| CliError::Usage(format!("setup `{name}`: {e}"));
        match (b, &self.universe) {
            (BuiltinSetup::Reflexive, _) => Ok(reflexive_setup(&self.model)),
            (BuiltinSetup::Tk { k }, Universe::Eio(u)) => tk_setup(u, *k).map_err(|e| runtime(&e)),
            (BuiltinSetup::TStar, Universe::Temporal(u)) => {
                u.tstar().cloned().map_err(|e| runtime(&e))
            }
            _ => Err(runtime(&"not available for this model")),
        }
    }

    /// `explicit(n)`, `eio(bound=B)` or the temporal parameters.
    pub fn universe_label(&self) -> String {
        match &self.universe {
            Universe::Explicit => format!("explicit({})", self.model.len()),
            Universe::Eio(u) => format!("eio(bound={})", u.bound()),
            Universe::Temporal(u) => u.params().to_string(),
        }
    }

    pub fn element(&self, id: &str) -> Result<usize, CliError> {
        self.model
            .element(id)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// A workbench over the `bound × bound` grid with every builtin
/// requirement and the `T_1`, `T_2` setups.
pub fn eio_document(bound: usize) -> WorkbenchDoc {
    let mut requirements = BTreeMap::new();
    for (name, b) in [
        ("determinism", BuiltinSet::Determinism),
        ("totality", BuiltinSet::Totality),
        ("total_function", BuiltinSet::TotalFunction),
        ("anonymity_zigzag", BuiltinSet::AnonymityZigzag),
        ("never_zero_odd", BuiltinSet::NeverZeroOdd),
    ] {
        requirements.insert(name.to_string(), SetDoc::Builtin(b));
    }
    if bound >= 2 {
        requirements.insert(
            "exhibits_1_0".to_string(),
            SetDoc::Builtin(BuiltinSet::Exhibits {
                input: 1,
                output: 0,
            }),
        );
    }
    let mut setups = BTreeMap::new();
    setups.insert(
        "t1".to_string(),
        SetupDoc::Builtin(BuiltinSetup::Tk { k: 1 }),
    );
    if bound <= 3 {
        setups.insert(
            "t2".to_string(),
            SetupDoc::Builtin(BuiltinSetup::Tk { k: 2 }),
        );
    }
    let mut assumptions = BTreeMap::new();
    assumptions.insert(
        "total_function".to_string(),
        SetDoc::Builtin(BuiltinSet::TotalFunction),
    );
    WorkbenchDoc {
        model: ModelDoc::Builtin(BuiltinModel::Eio { bound }),
        properties: BTreeMap::new(),
        requirements,
        assumptions,
        setups,
    }
}

/// A workbench over a temporal universe with `never`, `eventually`,
/// `always` and `infinitely` properties for each symbol and their `R_φ`.
pub fn temporal_document(params: &UniverseParams) -> WorkbenchDoc {
    let mut properties = BTreeMap::new();
    let mut requirements = BTreeMap::new();
    for c in &params.alphabet {
        for kind in ["never", "eventually", "always", "infinitely"] {
            let name = format!("{kind}_{c}");
            properties.insert(name.clone(), PropertyDoc::Named(format!("{kind}:{c}")));
            requirements.insert(
                format!("R_{name}"),
                SetDoc::Builtin(BuiltinSet::Property { property: name }),
            );
        }
        requirements.insert(
            format!("exhibits_{c}"),
            SetDoc::Builtin(BuiltinSet::ExhibitsSymbol {
                symbol: c.to_string(),
            }),
        );
    }
    let mut setups = BTreeMap::new();
    setups.insert("t_star".to_string(), SetupDoc::Builtin(BuiltinSetup::TStar));
    WorkbenchDoc {
        model: ModelDoc::Builtin(BuiltinModel::Temporal {
            alphabet: params.alphabet.iter().map(char::to_string).collect(),
            stem_bound: params.stem_bound,
            loop_bound: params.loop_bound,
            prefix_depth: params.prefix_depth,
            set_cap: params.set_cap,
            max_behaviors: params.max_behaviors,
        }),
        properties,
        requirements,
        assumptions: BTreeMap::new(),
        setups,
    }
}
