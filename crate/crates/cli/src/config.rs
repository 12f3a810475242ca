//! Lab configuration files.
//!
//! A TOML document with the tables `[space]`, `[sets]`, `[[topology.clause]]`,
//! `[map.<name>]`, `[ifs.<name>]`, `[cover.<name>]` and `[bounds]`. Every set
//! is written as an expression (see [`crate::expr`]).

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use ifslab_core::bounds::{DEFAULT_CHAIN_STEPS, DEFAULT_DEPTH_STEPS, DEFAULT_SEED};
use ifslab_core::maps::{MapRule, PiecewiseMap};
use ifslab_core::setalg::{GroundStructure, SymbolicSet};
use ifslab_core::topology::{sampled_axioms, Clause, Primitive, Topology};
use ifslab_core::{Bounds, LabError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::expr::{self, ExprError, RESERVED};

/// The shipped odd/even configuration.
pub const PAPER_TOML: &str = include_str!("../configs/paper.toml");

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("{origin}: {at}: {source}")]
    Expr {
        origin: String,
        at: String,
        source: ExprError,
    },
    #[error("{origin}: {rule}: {message}")]
    Invalid {
        origin: String,
        rule: &'static str,
        message: String,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    space: RawSpace,
    #[serde(default)]
    sets: BTreeMap<String, String>,
    #[serde(default)]
    topology: RawTopology,
    #[serde(default)]
    map: BTreeMap<String, RawMap>,
    #[serde(default)]
    ifs: BTreeMap<String, RawIfs>,
    #[serde(default)]
    cover: BTreeMap<String, RawCover>,
    #[serde(default)]
    bounds: RawBounds,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    #[serde(default)]
    atoms: Vec<String>,
    #[serde(default)]
    blocks: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTopology {
    #[serde(default)]
    clause: Vec<RawClause>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    #[default]
    None,
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn items(&self) -> Vec<&str> {
        match self {
            OneOrMany::None => Vec::new(),
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClause {
    label: Option<String>,
    #[serde(default)]
    subset_of: OneOrMany,
    #[serde(default)]
    cofinite_within: OneOrMany,
    #[serde(default)]
    meets: OneOrMany,
    #[serde(default)]
    avoids: OneOrMany,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    #[serde(default)]
    identity: bool,
    #[serde(default)]
    atoms: BTreeMap<String, String>,
    #[serde(default)]
    blocks: BTreeMap<String, String>,
    #[serde(default)]
    overrides: Vec<RawOverride>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOverride {
    at: String,
    to: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIfs {
    maps: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCover {
    sets: Vec<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBounds {
    max_exceptions: Option<i64>,
    max_index: Option<i64>,
    samples: Option<i64>,
    neighborhoods: Option<i64>,
    n_max: Option<i64>,
    depth_max: Option<i64>,
    seed: Option<u64>,
}

/// Budgets from `[bounds]`, with command-line overrides applied by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct LabBounds {
    pub max_exceptions: usize,
    pub max_index: u64,
    pub samples: usize,
    pub neighborhoods: usize,
    /// Step budget for map chains and attractor iteration.
    pub n_max: usize,
    /// Step budget for word-image collections.
    pub depth_max: usize,
    pub seed: u64,
}

impl Default for LabBounds {
    fn default() -> Self {
        let b = Bounds::default();
        Self {
            max_exceptions: b.max_exceptions,
            max_index: b.max_index,
            samples: b.samples,
            neighborhoods: b.neighborhoods,
            n_max: DEFAULT_CHAIN_STEPS,
            depth_max: DEFAULT_DEPTH_STEPS,
            seed: DEFAULT_SEED,
        }
    }
}

impl LabBounds {
    pub fn core(&self) -> Bounds {
        Bounds {
            max_exceptions: self.max_exceptions,
            max_index: self.max_index,
            samples: self.samples,
            neighborhoods: self.neighborhoods,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LabConfig {
    /// Where the config came from, for messages.
    pub origin: String,
    pub ground: Arc<GroundStructure>,
    pub topology: Topology,
    pub sets: BTreeMap<String, SymbolicSet>,
    pub maps: BTreeMap<String, PiecewiseMap>,
    pub ifs: BTreeMap<String, Vec<String>>,
    pub covers: BTreeMap<String, Vec<SymbolicSet>>,
    pub bounds: LabBounds,
    pub warnings: Vec<String>,
}

pub fn load_config(path: &Path) -> Result<LabConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_config(&text, &path.display().to_string())
}

/// The shipped configuration; it always loads.
pub fn paper_config() -> LabConfig {
    parse_config(PAPER_TOML, "configs/paper.toml").expect("shipped config is valid")
}

pub fn parse_config(text: &str, origin: &str) -> Result<LabConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Parse {
        origin: origin.to_string(),
        message: e.to_string().trim_end().to_string(),
    })?;
    Builder {
        origin: origin.to_string(),
    }
    .build(raw)
}

type Conjuncts<'a> = (&'static str, &'a OneOrMany, fn(SymbolicSet) -> Primitive);

struct Builder {
    origin: String,
}

impl Builder {
    fn invalid(&self, rule: &'static str, message: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            origin: self.origin.clone(),
            rule,
            message: message.into(),
        }
    }

    fn lab(&self, rule: &'static str, at: &str, e: LabError) -> ConfigError {
        self.invalid(rule, format!("{at}: {e}"))
    }

    fn set(
        &self,
        at: &str,
        src: &str,
        ground: &Arc<GroundStructure>,
        names: &BTreeMap<String, SymbolicSet>,
    ) -> Result<SymbolicSet, ConfigError> {
        expr::parse_set(src, ground, names).map_err(|source| ConfigError::Expr {
            origin: self.origin.clone(),
            at: at.to_string(),
            source,
        })
    }

    fn check_name(&self, kind: &str, name: &str) -> Result<(), ConfigError> {
        if !expr::is_identifier(name) || RESERVED.contains(&name) {
            return Err(self.invalid(
                "names",
                format!("{kind} name `{name}` must be an identifier other than {RESERVED:?}"),
            ));
        }
        Ok(())
    }

    fn build(&self, raw: RawConfig) -> Result<LabConfig, ConfigError> {
        for a in &raw.space.atoms {
            self.check_name("atom", a)?;
        }
        for b in &raw.space.blocks {
            self.check_name("block", b)?;
        }
        let ground = GroundStructure::new(raw.space.atoms.iter(), raw.space.blocks.iter())
            .map_err(|e| self.lab("space", "space", e))?;
        let sets = self.sets(&ground, &raw.sets)?;
        let topology = self.topology(&ground, &sets, &raw.topology)?;
        let mut maps = BTreeMap::new();
        for (name, m) in &raw.map {
            maps.insert(name.clone(), self.map(&ground, name, m)?);
        }
        let mut ifs = BTreeMap::new();
        for (name, s) in &raw.ifs {
            if s.maps.is_empty() {
                return Err(self.invalid("references", format!("ifs `{name}` lists no maps")));
            }
            for m in &s.maps {
                if !maps.contains_key(m) {
                    return Err(self.invalid(
                        "references",
                        format!("ifs `{name}` uses undeclared map `{m}`"),
                    ));
                }
            }
            ifs.insert(name.clone(), s.maps.clone());
        }
        let mut covers = BTreeMap::new();
        for (name, c) in &raw.cover {
            let members = c
                .sets
                .iter()
                .enumerate()
                .map(|(i, src)| self.set(&format!("cover.{name}.sets[{i}]"), src, &ground, &sets))
                .collect::<Result<Vec<_>, _>>()?;
            if !topology.cover_check(&members).expect("same ground") {
                return Err(self.invalid(
                    "cover",
                    format!("cover `{name}` has a non-open member or does not cover X"),
                ));
            }
            covers.insert(name.clone(), members);
        }
        let bounds = self.bounds(&raw.bounds)?;
        let mut warnings = topology.warnings();
        if warnings.is_empty() {
            let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
            let axioms = sampled_axioms(&topology, &mut rng, 64, bounds.max_index);
            if let Some(first) = axioms.failures.first() {
                return Err(self.invalid(
                    "topology axioms",
                    format!(
                        "{} sampled check(s) failed, first: {first}",
                        axioms.failures.len()
                    ),
                ));
            }
        } else {
            warnings.push("sampled topology axioms skipped".into());
        }
        Ok(LabConfig {
            origin: self.origin.clone(),
            warnings,
            ground,
            topology,
            sets,
            maps,
            ifs,
            covers,
            bounds,
        })
    }

    /// Named sets may refer to each other in any order, but not cyclically.
    fn sets(
        &self,
        ground: &Arc<GroundStructure>,
        raw: &BTreeMap<String, String>,
    ) -> Result<BTreeMap<String, SymbolicSet>, ConfigError> {
        for name in raw.keys() {
            self.check_name("set", name)?;
            if ground.block_id(name).is_ok() {
                return Err(self.invalid("names", format!("set `{name}` shadows a block")));
            }
        }
        let mut done = BTreeMap::new();
        let mut pending: Vec<(&String, &String)> = raw.iter().collect();
        while !pending.is_empty() {
            let before = pending.len();
            let mut last_err = None;
            pending.retain(|&(name, src)| {
                match self.set(&format!("sets.{name}"), src, ground, &done) {
                    Ok(s) => {
                        done.insert(name.clone(), s);
                        false
                    }
                    Err(e) => {
                        last_err = Some(e);
                        true
                    }
                }
            });
            if pending.len() == before {
                return Err(last_err.expect("a pending set failed"));
            }
        }
        Ok(done)
    }

    fn topology(
        &self,
        ground: &Arc<GroundStructure>,
        sets: &BTreeMap<String, SymbolicSet>,
        raw: &RawTopology,
    ) -> Result<Topology, ConfigError> {
        let mut clauses = Vec::new();
        for (i, c) in raw.clause.iter().enumerate() {
            let label = c.label.clone().unwrap_or_else(|| (i + 1).to_string());
            let at = format!("topology.clause[{i}]");
            let mut conjuncts = Vec::new();
            let groups: [Conjuncts; 4] = [
                ("subset_of", &c.subset_of, Primitive::SubsetOf),
                (
                    "cofinite_within",
                    &c.cofinite_within,
                    Primitive::CofiniteWithin,
                ),
                ("meets", &c.meets, Primitive::Meets),
                ("avoids", &c.avoids, Primitive::Avoids),
            ];
            for (key, items, make) in groups {
                for src in items.items() {
                    conjuncts.push(make(self.set(&format!("{at}.{key}"), src, ground, sets)?));
                }
            }
            clauses.push(Clause::new(label, conjuncts));
        }
        Topology::new(ground, clauses).map_err(|e| self.lab("clauses", "topology", e))
    }

    fn map(
        &self,
        ground: &Arc<GroundStructure>,
        name: &str,
        raw: &RawMap,
    ) -> Result<PiecewiseMap, ConfigError> {
        let at = format!("map.{name}");
        let point = |key: &str, src: &str| {
            expr::parse_point(src, ground).map_err(|source| ConfigError::Expr {
                origin: self.origin.clone(),
                at: format!("{at}.{key}"),
                source,
            })
        };
        let mut rules = Vec::new();
        for (atom, target) in &raw.atoms {
            let id = ground
                .atom_id(atom)
                .map_err(|e| self.lab("references", &format!("{at}.atoms"), e))?;
            rules.push(MapRule::AtomToPoint(
                id,
                point(&format!("atoms.{atom}"), target)?,
            ));
        }
        for (block, target) in &raw.blocks {
            let id = ground
                .block_id(block)
                .map_err(|e| self.lab("references", &format!("{at}.blocks"), e))?;
            let rule = match ground.block_id(target) {
                Ok(dst) => MapRule::BlockToBlock(id, dst),
                Err(_) => MapRule::BlockToConst(id, point(&format!("blocks.{block}"), target)?),
            };
            rules.push(rule);
        }
        if raw.identity {
            for a in ground.atom_ids() {
                if !raw.atoms.contains_key(ground.atom_name(a)) {
                    rules.push(MapRule::AtomToPoint(a, ifslab_core::setalg::Point::Atom(a)));
                }
            }
            for b in ground.block_ids() {
                if !raw.blocks.contains_key(ground.block_name(b)) {
                    rules.push(MapRule::BlockToBlock(b, b));
                }
            }
        }
        let mut overrides = Vec::new();
        for (i, o) in raw.overrides.iter().enumerate() {
            let key = format!("overrides[{i}]");
            let ifslab_core::setalg::Point::Elem(b, idx) = point(&format!("{key}.at"), &o.at)?
            else {
                return Err(self.invalid(
                    "overrides",
                    format!("{at}.{key}.at: overrides apply to block elements only"),
                ));
            };
            overrides.push((b, idx, point(&format!("{key}.to"), &o.to)?));
        }
        PiecewiseMap::new(ground, rules, overrides).map_err(|e| {
            let rule = match e {
                LabError::DuplicateOverride(_) => "overrides",
                _ => "totality",
            };
            self.lab(rule, &at, e)
        })
    }

    fn bounds(&self, raw: &RawBounds) -> Result<LabBounds, ConfigError> {
        let d = LabBounds::default();
        let positive = |key: &str, v: Option<i64>, default: u64| -> Result<u64, ConfigError> {
            match v {
                None => Ok(default),
                Some(n) if n >= 1 => Ok(n as u64),
                Some(n) => {
                    Err(self.invalid("bounds", format!("bounds.{key} must be positive, got {n}")))
                }
            }
        };
        Ok(LabBounds {
            max_exceptions: positive(
                "max_exceptions",
                raw.max_exceptions,
                d.max_exceptions as u64,
            )? as usize,
            max_index: positive("max_index", raw.max_index, d.max_index)?,
            samples: positive("samples", raw.samples, d.samples as u64)? as usize,
            neighborhoods: positive("neighborhoods", raw.neighborhoods, d.neighborhoods as u64)?
                as usize,
            n_max: positive("n_max", raw.n_max, d.n_max as u64)? as usize,
            depth_max: positive("depth_max", raw.depth_max, d.depth_max as u64)? as usize,
            seed: raw.seed.unwrap_or(d.seed),
        })
    }
}

impl LabConfig {
    pub fn map(&self, name: &str) -> Result<&PiecewiseMap, String> {
        self.maps.get(name).ok_or_else(|| {
            format!(
                "no map named `{name}` (declared: {})",
                list(self.maps.keys())
            )
        })
    }

    pub fn ifs(&self, name: &str) -> Result<ifslab_core::ifs::Ifs, String> {
        let names = self.ifs.get(name).ok_or_else(|| {
            format!(
                "no ifs named `{name}` (declared: {})",
                list(self.ifs.keys())
            )
        })?;
        let maps = names.iter().map(|m| self.maps[m].clone()).collect();
        ifslab_core::ifs::Ifs::new(maps).map_err(|e| e.to_string())
    }

    pub fn parse_set(&self, src: &str) -> Result<SymbolicSet, ExprError> {
        expr::parse_set(src, &self.ground, &self.sets)
    }
}

fn list<'a>(names: impl Iterator<Item = &'a String>) -> String {
    let v: Vec<&str> = names.map(String::as_str).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(", ")
    }
}
