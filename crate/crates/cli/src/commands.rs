//! Command-line surface and command dispatch.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use ifslab_core::hyperspace::{
    guided_closure_proof, is_in_hutchinson_image, nonclosedness_report, ImageMembership,
    NonClosednessVerdict,
};
use ifslab_core::ifs::{AttractorVerdict, ContractivityVerdict, Ifs};
use ifslab_core::maps::{
    closed_map_bounded, pointwise_agreement, space_chain, topological_contraction,
    ClosedMapVerdict, ContractionVerdict, PiecewiseMap,
};
use ifslab_core::setalg::{oracle, SymbolicSet};
use ifslab_core::topology::sampled_axioms;
use ifslab_core::{sample, Bounds, LabError};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::config::{load_config, paper_config, ConfigError, LabConfig};
use crate::expr::ExprError;
use crate::report::{Check, Outcome, Report};

#[derive(Debug, Parser)]
#[command(
    name = "ifslab",
    version,
    about = "Symbolic checks for iterated function systems on countable spaces"
)]
pub struct Cli {
    /// Lab configuration; the shipped odd/even instance when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Step budget for chains, attractor iteration and word-image depth.
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    #[arg(long = "max-index", global = true)]
    pub max_index: Option<u64>,
    #[arg(long = "max-exceptions", global = true)]
    pub max_exceptions: Option<usize>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Also write the JSON report here; `-` prints JSON instead of text.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Refuse systems whose maps fail the bounded closed-map check.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Sampled topology axioms, T1 samples and declared covers.
    CheckSpace,
    /// Closure, interior, openness and closedness of a set.
    Closure { set: String },
    /// Image and preimage of a set under a map.
    Image { map: String, set: String },
    /// Bounded-exhaustive check that a map sends closed sets to closed sets.
    CheckClosedMap { map: String },
    /// Whether a single map is a topological contraction.
    Contraction { map: String },
    /// Contractivity certificate or refutation for an IFS.
    Contractivity { ifs: String },
    /// Iterate the Hutchinson operator from the whole space.
    Attractor { ifs: String },
    /// Bounded search for nonempty closed fixed points.
    FixedPoints { ifs: String },
    /// Whether a set witnesses that the Hutchinson operator is not closed.
    NotClosed { ifs: String, set: String },
    /// End-to-end checks of the odd/even instance.
    ReproducePaper,
    /// Compare set algebra and maps against brute-force oracles.
    OracleFuzz {
        /// Number of random triples.
        #[arg(long = "n", default_value_t = 10_000)]
        n: usize,
        /// Truncation bound.
        #[arg(long = "N", default_value_t = 64)]
        big_n: u64,
    },
}

impl Command {
    fn words(&self) -> Vec<String> {
        let v: Vec<&str> = match self {
            Command::CheckSpace => vec!["check-space"],
            Command::Closure { set } => vec!["closure", set],
            Command::Image { map, set } => vec!["image", map, set],
            Command::CheckClosedMap { map } => vec!["check-closed-map", map],
            Command::Contraction { map } => vec!["contraction", map],
            Command::Contractivity { ifs } => vec!["contractivity", ifs],
            Command::Attractor { ifs } => vec!["attractor", ifs],
            Command::FixedPoints { ifs } => vec!["fixed-points", ifs],
            Command::NotClosed { ifs, set } => vec!["not-closed", ifs, set],
            Command::ReproducePaper => vec!["reproduce-paper"],
            Command::OracleFuzz { n, big_n } => {
                return vec![
                    "oracle-fuzz".into(),
                    format!("--n={n}"),
                    format!("--N={big_n}"),
                ]
            }
        };
        v.into_iter().map(String::from).collect()
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("argument `{arg}`: {source}")]
    Expr { arg: String, source: ExprError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lab(#[from] LabError),
    #[error("strict mode: map `{map}` is not closed: {detail}")]
    Strict { map: String, detail: String },
}

impl RunError {
    pub const EXIT_CODE: i32 = 3;
}

/// Load the configuration named by `cli` and apply flag overrides.
pub fn configure(cli: &Cli) -> Result<LabConfig, RunError> {
    let mut cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => paper_config(),
    };
    let b = &mut cfg.bounds;
    if let Some(s) = cli.seed {
        b.seed = s;
    }
    if let Some(n) = cli.n_max {
        b.n_max = n;
        b.depth_max = n;
    }
    if let Some(i) = cli.max_index {
        b.max_index = i;
    }
    if let Some(e) = cli.max_exceptions {
        b.max_exceptions = e;
    }
    if let Some(s) = cli.samples {
        b.samples = s;
    }
    let zero = [
        ("--n-max", b.n_max == 0),
        ("--max-index", b.max_index == 0),
        ("--max-exceptions", b.max_exceptions == 0),
        ("--samples", b.samples == 0),
    ];
    if let Some((flag, _)) = zero.iter().find(|(_, z)| *z) {
        return Err(RunError::Usage(format!("{flag} must be positive")));
    }
    Ok(cfg)
}

pub fn run_cli(cli: &Cli) -> Result<Report, RunError> {
    let cfg = configure(cli)?;
    run(&cfg, &cli.command, cli.strict)
}

pub fn run(cfg: &LabConfig, command: &Command, strict: bool) -> Result<Report, RunError> {
    let mut report = Report::new(command.words(), cfg.origin.clone(), cfg.bounds, strict);
    report.warnings.extend(cfg.warnings.iter().cloned());
    let lab = Lab { cfg, strict };
    match command {
        Command::CheckSpace => lab.check_space(&mut report),
        Command::Closure { set } => lab.closure(&mut report, set),
        Command::Image { map, set } => lab.image(&mut report, map, set),
        Command::CheckClosedMap { map } => lab.closed_map(&mut report, map),
        Command::Contraction { map } => lab.contraction(&mut report, map),
        Command::Contractivity { ifs } => lab.contractivity(&mut report, ifs),
        Command::Attractor { ifs } => lab.attractor(&mut report, ifs),
        Command::FixedPoints { ifs } => lab.fixed_points(&mut report, ifs),
        Command::NotClosed { ifs, set } => lab.not_closed(&mut report, ifs, set),
        Command::ReproducePaper => lab.reproduce(&mut report),
        Command::OracleFuzz { n, big_n } => lab.oracle_fuzz(&mut report, *n, *big_n),
    }?;
    Ok(report)
}

fn closed_outcome(v: &ClosedMapVerdict) -> Outcome {
    if v.is_verified() {
        Outcome::Verified
    } else {
        Outcome::Refuted
    }
}

struct Lab<'a> {
    cfg: &'a LabConfig,
    strict: bool,
}

impl Lab<'_> {
    fn bounds(&self) -> Bounds {
        self.cfg.bounds.core()
    }

    fn set(&self, src: &str) -> Result<SymbolicSet, RunError> {
        self.cfg.parse_set(src).map_err(|source| RunError::Expr {
            arg: src.to_string(),
            source,
        })
    }

    fn map(&self, name: &str) -> Result<&PiecewiseMap, RunError> {
        self.cfg.map(name).map_err(RunError::Usage)
    }

    /// Resolve an IFS and screen its maps for closedness: the full bounded
    /// check under `--strict`, a small one that only warns otherwise.
    fn ifs(&self, name: &str, report: &mut Report) -> Result<Ifs, RunError> {
        let ifs = self.cfg.ifs(name).map_err(RunError::Usage)?;
        let t = &self.cfg.topology;
        let screen = if self.strict {
            self.bounds()
        } else {
            Bounds {
                max_exceptions: 1,
                max_index: 3,
                samples: 50,
                ..self.bounds()
            }
        };
        for map_name in &self.cfg.ifs[name] {
            let verdict = closed_map_bounded(&self.cfg.maps[map_name], t, &screen)?;
            if let ClosedMapVerdict::Counterexample { set, image } = verdict {
                let detail = format!("it maps the closed set {set} onto {image}");
                if self.strict {
                    return Err(RunError::Strict {
                        map: map_name.clone(),
                        detail,
                    });
                }
                report
                    .warnings
                    .push(format!("map `{map_name}` is not closed: {detail}"));
            }
        }
        Ok(ifs)
    }

    fn check_space(&self, r: &mut Report) -> Result<(), RunError> {
        let t = &self.cfg.topology;
        let g = &self.cfg.ground;
        let b = &self.cfg.bounds;
        let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
        let axioms = sampled_axioms(t, &mut rng, b.samples, b.max_index);
        r.push(Check::holds(
            "closure axioms, open/interior and closed/closure agreement, finite unions and intersections of opens, on sampled sets",
            axioms.passed(),
            &axioms,
        ));
        let points = g.points_up_to(b.max_index);
        let t1 = t.is_t1_sample(&points)?;
        r.push(Check::holds(
            "every point up to the index bound is closed",
            t1,
            json!({ "points": points.len() }),
        ));
        for (name, cover) in &self.cfg.covers {
            let ok = t.cover_check(cover)?;
            let sets: Vec<String> = cover.iter().map(ToString::to_string).collect();
            r.push(Check::holds(
                format!("`{name}` is an open cover"),
                ok,
                json!({ "sets": sets }),
            ));
        }
        Ok(())
    }

    fn closure(&self, r: &mut Report, src: &str) -> Result<(), RunError> {
        let t = &self.cfg.topology;
        let a = self.set(src)?;
        r.push(Check::new(
            "closure and interior",
            Outcome::Verified,
            json!({
                "set": a.to_string(),
                "closure": t.closure(&a)?.to_string(),
                "interior": t.interior(&a)?.to_string(),
                "open": t.is_open(&a)?,
                "closed": t.is_closed(&a)?,
            }),
        ));
        Ok(())
    }

    fn image(&self, r: &mut Report, map: &str, src: &str) -> Result<(), RunError> {
        let m = self.map(map)?;
        let a = self.set(src)?;
        r.push(Check::new(
            format!("image and preimage under `{map}`"),
            Outcome::Verified,
            json!({
                "set": a.to_string(),
                "image": m.image(&a)?.to_string(),
                "preimage": m.preimage(&a)?.to_string(),
            }),
        ));
        Ok(())
    }

    fn closed_map(&self, r: &mut Report, map: &str) -> Result<(), RunError> {
        let v = closed_map_bounded(self.map(map)?, &self.cfg.topology, &self.bounds())?;
        r.push(Check::new(
            format!("`{map}` maps closed sets to closed sets (bounded)"),
            closed_outcome(&v),
            &v,
        ));
        Ok(())
    }

    fn contraction(&self, r: &mut Report, map: &str) -> Result<(), RunError> {
        let m = self.map(map)?;
        let n_max = self.cfg.bounds.n_max;
        let v = topological_contraction(m, &self.cfg.topology, n_max, &self.bounds())?;
        let outcome = match v {
            ContractionVerdict::Certified { .. } => Outcome::Verified,
            ContractionVerdict::Refuted { .. } | ContractionVerdict::NotClosed { .. } => {
                Outcome::Refuted
            }
            ContractionVerdict::Inconclusive { .. } => Outcome::Inconclusive,
        };
        let chain = space_chain(m, n_max)?;
        let entries: Vec<String> = chain.entries.iter().map(ToString::to_string).collect();
        r.push(Check::new(
            format!("`{map}` is a topological contraction"),
            outcome,
            json!({ "verdict": v, "chain": entries, "stabilized_at": chain.stabilized_at }),
        ));
        Ok(())
    }

    fn contractivity(&self, r: &mut Report, name: &str) -> Result<(), RunError> {
        let s = self.ifs(name, r)?;
        let v = s.contractivity_certificate(&self.cfg.topology, self.cfg.bounds.depth_max)?;
        r.push(contractivity_check(&s, name, &v));
        Ok(())
    }

    fn attractor(&self, r: &mut Report, name: &str) -> Result<(), RunError> {
        let s = self.ifs(name, r)?;
        let v = s.attractor_from_space(&self.cfg.topology, self.cfg.bounds.n_max)?;
        r.push(attractor_check(&s, name, &v)?);
        Ok(())
    }

    fn fixed_points(&self, r: &mut Report, name: &str) -> Result<(), RunError> {
        let s = self.ifs(name, r)?;
        let t = &self.cfg.topology;
        let attractor = s.attractor_from_space(t, self.cfg.bounds.n_max)?;
        let found = s.fixed_point_search(t, &self.bounds())?;
        r.push(fixed_point_check(name, &found, attractor.set()));
        Ok(())
    }

    fn not_closed(&self, r: &mut Report, name: &str, src: &str) -> Result<(), RunError> {
        let s = self.ifs(name, r)?;
        let k = self.set(src)?;
        let rep = nonclosedness_report(&s, &self.cfg.topology, &k, &self.bounds())?;
        let outcome = match rep.verdict {
            NonClosednessVerdict::NonClosedCertified | NonClosednessVerdict::NonClosedEvidence => {
                Outcome::Verified
            }
            NonClosednessVerdict::NotApplicable => Outcome::Refuted,
            NonClosednessVerdict::Inconclusive => Outcome::Inconclusive,
        };
        r.push(Check::new(
            format!("{k} is in the closure of the image of the Hutchinson operator of `{name}` but not in the image"),
            outcome,
            &rep,
        ));
        Ok(())
    }

    fn oracle_fuzz(&self, r: &mut Report, n: usize, big_n: u64) -> Result<(), RunError> {
        let g = &self.cfg.ground;
        let seed = self.cfg.bounds.seed;
        let out = oracle::fuzz(g, n, big_n, seed)?;
        r.push(Check::holds(
            format!("set operations agree with truncation at N={big_n}"),
            out.mismatches.is_empty(),
            &out,
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d61_7073);
        for (name, m) in &self.cfg.maps {
            let mut disagreements = Vec::new();
            for _ in 0..100 {
                let a = sample::random_set(g, &mut rng, big_n.saturating_sub(1).max(1), 4);
                if !pointwise_agreement(m, &a, big_n)? {
                    disagreements.push(a.to_string());
                }
            }
            r.push(Check::holds(
                format!("`{name}`: apply, image and preimage agree with the pointwise oracle up to index {big_n}"),
                disagreements.is_empty(),
                json!({ "sets": 100, "disagreements": disagreements }),
            ));
        }
        Ok(())
    }

    /// The odd/even instance end to end. Needs maps `f`, `g` and the systems
    /// `paper` = {f, g} and `f` = {f}.
    fn reproduce(&self, r: &mut Report) -> Result<(), RunError> {
        let t = &self.cfg.topology;
        let bounds = self.bounds();
        let b = &self.cfg.bounds;
        let f = self.map("f")?;
        let g = self.map("g")?;
        let s = self.ifs("paper", r)?;
        let single = self.ifs("f", r)?;
        let set = |src: &str| self.set(src);

        let mut rng = ChaCha8Rng::seed_from_u64(b.seed);
        let axioms = sampled_axioms(t, &mut rng, 200, b.max_index);
        r.push(Check::holds(
            "the clause topology passes the sampled closure, open/interior, closed/closure and T1 checks",
            axioms.passed(),
            &axioms,
        ));

        for (name, m) in [("f", f), ("g", g)] {
            let v = closed_map_bounded(m, t, &bounds)?;
            r.push(Check::new(
                format!("`{name}` is a closed map (bounded)"),
                closed_outcome(&v),
                &v,
            ));
        }

        let expected = [
            vec![set("EVEN | atom:a | atom:b")?],
            vec![set("atom:a | atom:b")?],
            vec![set("atom:a")?, set("atom:b")?],
        ];
        for (i, want) in expected.iter().enumerate() {
            let depth = i + 1;
            let got = s.depth_images(depth);
            let want: BTreeSet<SymbolicSet> = want.iter().cloned().collect();
            r.push(Check::holds(
                format!("word images of X at depth {depth}"),
                *got.images == want,
                json!({
                    "expected": want.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "found": got.images.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }),
            ));
        }

        let cv = s.contractivity_certificate(t, b.depth_max)?;
        let mut check = contractivity_check(&s, "paper", &cv);
        if !matches!(cv, ContractivityVerdict::Certified { depth: 3 }) {
            check.outcome = check.outcome.max(Outcome::Refuted);
        }
        check.claim = "{f, g} is contractive, certified at depth 3".into();
        r.push(check);

        for point in ["atom:a", "atom:b"] {
            let k = set(point)?;
            let membership = is_in_hutchinson_image(&s, t, &k, &bounds)?;
            r.push(Check::holds(
                format!("{k} is not in the image of F (empty fiber intersection)"),
                matches!(membership, ImageMembership::NotInImageCertified { .. }),
                &membership,
            ));
            let even = self.cfg.ground.block_id("EVEN")?;
            let cert = guided_closure_proof(&s, t, &k, even)?;
            r.push(Check::holds(
                format!(
                    "every basis neighborhood of {k} meets the image of F (analytic certificate)"
                ),
                cert.is_some(),
                &cert,
            ));
            let rep = nonclosedness_report(&s, t, &k, &bounds)?;
            let all_odd = rep.challenges.iter().all(|c| {
                c.witness.as_ref().is_some_and(|w| {
                    w.elements().is_some_and(|e| matches!(e[..], [ifslab_core::setalg::Point::Elem(blk, _)] if self.cfg.ground.block_name(blk) == "ODD"))
                })
            });
            r.push(Check::holds(
                format!("F is not closed at {k}"),
                rep.verdict == NonClosednessVerdict::NonClosedCertified
                    && (point != "atom:a" || all_odd),
                json!({
                    "verdict": rep.verdict,
                    "challenges": rep.challenges.len(),
                    "challenges_met": rep.challenges_met,
                    "every_witness_is_one_odd_point": all_odd,
                }),
            ));
        }

        let av = s.attractor_from_space(t, b.n_max)?;
        let ab = set("atom:a | atom:b")?;
        let mut check = attractor_check(&s, "paper", &av)?;
        if !matches!(&av, AttractorVerdict::Attractor { set, steps: 2 } if *set == ab) {
            check.outcome = check.outcome.max(Outcome::Refuted);
        }
        check.claim = "iterating F from X reaches the attractor {a, b} in 2 steps".into();
        r.push(check);

        let found = s.fixed_point_search(t, &bounds)?;
        let mut check = fixed_point_check("paper", &found, av.set());
        if found != [ab.clone()] {
            check.outcome = Outcome::Refuted;
        }
        check.claim = "{a, b} is the only fixed point within bounds".into();
        r.push(check);

        let witness = s.separation_witness(t, &ab, &ab, 3)?;
        r.push(Check::holds(
            "no distinguishing word separates the attractor from itself",
            witness.is_none(),
            &witness,
        ));

        let a = set("atom:a")?;
        let tc = topological_contraction(f, t, b.n_max, &bounds)?;
        r.push(Check::holds(
            "`f` alone is a topological contraction with stable set {a}",
            matches!(&tc, ContractionVerdict::Certified { stable, .. } if *stable == a),
            &tc,
        ));
        let av1 = single.attractor_from_space(t, b.n_max)?;
        let found1 = single.fixed_point_search(t, &bounds)?;
        r.push(Check::holds(
            "{f} has attractor {a} and no other fixed point within bounds",
            av1.set() == Some(&a) && found1 == [a.clone()],
            json!({
                "attractor": av1,
                "fixed_points": found1.iter().map(ToString::to_string).collect::<Vec<_>>(),
            }),
        ));
        Ok(())
    }
}

fn contractivity_check(s: &Ifs, name: &str, v: &ContractivityVerdict) -> Check {
    let (outcome, depth) = match v {
        ContractivityVerdict::Certified { depth } => (Outcome::Verified, *depth),
        ContractivityVerdict::Refuted { .. } => (Outcome::Refuted, 0),
        ContractivityVerdict::Inconclusive { .. } => (Outcome::Inconclusive, 0),
    };
    let collections: Vec<Vec<String>> = (1..=depth.min(8))
        .map(|n| {
            s.depth_images(n)
                .images
                .iter()
                .map(ToString::to_string)
                .collect()
        })
        .collect();
    Check::new(
        format!("`{name}` is contractive"),
        outcome,
        json!({ "verdict": v, "word_images_by_depth": collections }),
    )
}

fn attractor_check(s: &Ifs, name: &str, v: &AttractorVerdict) -> Result<Check, RunError> {
    Ok(match v {
        AttractorVerdict::Attractor { set, .. } => {
            let image = s.hutchinson(set)?;
            Check::holds(
                format!("attractor of `{name}` by iteration from X"),
                image == *set,
                json!({ "verdict": v, "image_of_attractor": image.to_string() }),
            )
        }
        AttractorVerdict::Inconclusive { .. } => Check::new(
            format!("attractor of `{name}` by iteration from X"),
            Outcome::Inconclusive,
            v,
        ),
    })
}

fn fixed_point_check(name: &str, found: &[SymbolicSet], attractor: Option<&SymbolicSet>) -> Check {
    let inside = attractor.map(|k| found.iter().all(|e| e.is_subset(k).unwrap_or(false)));
    let outcome = match inside {
        Some(true) => Outcome::Verified,
        Some(false) => Outcome::Refuted,
        None => Outcome::Inconclusive,
    };
    Check::new(
        format!("fixed points of `{name}` within bounds lie inside the attractor"),
        outcome,
        json!({
            "count": found.len(),
            "fixed_points": found.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "attractor": attractor.map(ToString::to_string),
        }),
    )
}
