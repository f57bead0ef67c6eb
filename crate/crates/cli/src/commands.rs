use std::io::Read;

use alcove_core::compat::{
    self, check_collection, check_pair, check_pair_with, orders_compatible_with_standard,
    CompatError, CountMode, Strategy, Verdict, Witness,
};
use alcove_core::families::{
    dhat_summands, higher_pellytope_summands, verify_family_with, FamilyError, FamilyName,
    FamilySpec, VerifyMode,
};
use alcove_core::geom::{self, GeomError};
use alcove_core::osp::{all_cyclic_orders, all_normalized, OrderedSetPartition, OspError};
use alcove_core::pdgraph::{intersect_root_cones, GraphError, RootCone};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::report::{code_of, join_ints, verdict_text, witness_text, Output};
use crate::{Command, CountModeArg, Global, VerifyModeArg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Osp(#[from] OspError),
    #[error(transparent)]
    Compat(#[from] CompatError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("reading {0}: {1}")]
    Io(String, std::io::Error),
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cmd: Command, g: &Global) -> Result<Output> {
    match cmd {
        Command::CheckPair { s, t, restriction } => cmd_check_pair(&s, &t, restriction),
        Command::CheckCollection { file } => cmd_check_collection(&file),
        Command::Oracle {
            osps,
            compare,
            exhaustive,
            partitions,
        } => match exhaustive {
            Some(n) => cmd_oracle_exhaustive(n, partitions, compare, g.oracle_bound),
            None => cmd_oracle(&osps, compare, g.oracle_bound),
        },
        Command::Count { n, mode, list } => cmd_count(n, mode, list),
        Command::Family {
            name,
            n,
            mode,
            k,
            dedup,
        } => cmd_family(&name, n, mode, k, dedup, g.oracle_bound),
        Command::Cones { s, t, n } => cmd_cones(&s, &t, n),
        Command::Enumerate { osp, nondegenerate } => cmd_enumerate(&osp, nondegenerate),
        Command::Crossval {
            n,
            samples,
            seed,
            degenerate,
        } => cmd_crossval(n, samples, seed, degenerate, g.oracle_bound),
    }
}

fn parse(text: &str) -> Result<OrderedSetPartition> {
    Ok(OrderedSetPartition::parse(text)?)
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn cmd_check_pair(s: &str, t: &str, restriction: bool) -> Result<Output> {
    let (s, t) = (parse(s)?, parse(t)?);
    let v = if restriction {
        check_pair_with(&s, &t, Strategy::Restriction)?
    } else {
        check_pair(&s, &t)?
    };
    Ok(Output::single(
        to_json(&v),
        verdict_text(&v),
        code_of(v.compatible),
    ))
}

fn read_input(file: &str) -> Result<String> {
    let mut text = String::new();
    if file == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(file.to_string(), e))?;
    } else {
        text = std::fs::read_to_string(file).map_err(|e| CliError::Io(file.to_string(), e))?;
    }
    Ok(text)
}

fn parse_lines(text: &str) -> Result<Vec<OrderedSetPartition>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse)
        .collect()
}

fn cmd_check_collection(file: &str) -> Result<Output> {
    let ps = parse_lines(&read_input(file)?)?;
    if ps.is_empty() {
        eprintln!("warning: {file} holds no partitions; an empty collection is compatible");
    }
    let v = check_collection(&ps)?;
    let mut text = verdict_text(&v);
    if let Some((i, j)) = v.pair {
        text.push_str(&format!("\n  {}: {}\n  {}: {}", i, ps[i - 1], j, ps[j - 1]));
    }
    Ok(Output::single(to_json(&v), text, code_of(v.compatible)))
}

fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        return Err(CliError::Usage(format!(
            "the oracle is limited to n <= {bound}, got {n} (raise ALCOVE_ORACLE_BOUND or --oracle-bound)"
        )));
    }
    Ok(())
}

fn cmd_oracle(osps: &[String], compare: bool, bound: usize) -> Result<Output> {
    let ps: Vec<OrderedSetPartition> = osps.iter().map(|s| parse(s)).collect::<Result<_>>()?;
    let first = ps.first().ok_or_else(|| {
        CliError::Usage("oracle needs at least one partition or --exhaustive".into())
    })?;
    check_bound(first.len(), bound)?;
    for p in &ps[1..] {
        if p.ground_set() != first.ground_set() {
            return Err(CompatError::GroundMismatch(first.ground_set(), p.ground_set()).into());
        }
    }
    let simplices: Vec<_> = ps.iter().map(geom::simplex_vertices).collect();
    let sum = geom::minkowski_sum_vertices(&simplices)?;
    let facets = geom::facets(&sum)?;
    let verdict = geom::is_alcoved(&sum)?;
    let non_root: Vec<&geom::FacetWitness> = facets.iter().filter(|f| !f.is_root).collect();

    let mut json = json!({
        "alcoved": verdict.alcoved,
        "vertices": sum.len(),
        "facets": facets.len(),
        "non_root_facets": non_root,
        "witness": verdict.witness,
        "hrep": verdict.hrep,
    });
    let mut text = if verdict.alcoved {
        format!("alcoved ({} vertices, {} facets)", sum.len(), facets.len())
    } else {
        format!(
            "not alcoved ({} vertices, {} facets)",
            sum.len(),
            facets.len()
        )
    };
    if let Some(w) = verdict.witness.as_ref().filter(|_| non_root.is_empty()) {
        text.push_str(&format!("\n  {}", witness_text(&Witness::Facet(w.clone()))));
    }
    for f in &non_root {
        text.push_str(&format!(
            "\n  {}",
            witness_text(&Witness::Facet((*f).clone()))
        ));
    }
    let mut code = code_of(verdict.alcoved);
    if compare {
        let c = check_collection(&ps)?;
        let agree = c.compatible == verdict.alcoved;
        json["criterion"] = to_json(&c);
        json["agree"] = json!(agree);
        text.push_str(&format!("\ncriterion: {}", verdict_text(&c)));
        if !agree {
            text.push_str("\nDISAGREEMENT between criterion and oracle");
            code = 3;
        }
    }
    Ok(Output::single(json, text, code))
}

/// Tallies of a criterion-vs-oracle comparison.
struct Comparison {
    disagreements: Vec<Value>,
    compatible: usize,
    alcoved: usize,
}

fn compare_pairs(pairs: &[(OrderedSetPartition, OrderedSetPartition)]) -> Result<Comparison> {
    let results: Vec<Result<(Verdict, Verdict)>> = pairs
        .par_iter()
        .map(|(s, t)| Ok((check_pair(s, t)?, compat::oracle_pair(s, t)?)))
        .collect();
    let mut out = Comparison {
        disagreements: Vec::new(),
        compatible: 0,
        alcoved: 0,
    };
    for (r, (s, t)) in results.into_iter().zip(pairs) {
        let (a, b) = r?;
        out.compatible += usize::from(a.compatible);
        out.alcoved += usize::from(b.compatible);
        if a.compatible != b.compatible {
            out.disagreements
                .push(json!({"s": s, "t": t, "criterion": a, "oracle": b}));
        }
    }
    Ok(out)
}

fn disagreement_text(bad: &[Value]) -> String {
    bad.iter()
        .map(|d| format!("\n  DISAGREEMENT {} vs {}", d["s"], d["t"]))
        .collect()
}

fn cmd_oracle_exhaustive(
    n: usize,
    partitions: bool,
    compare: bool,
    bound: usize,
) -> Result<Output> {
    check_bound(n, bound)?;
    if n < 2 {
        return Err(CliError::Usage("--exhaustive needs n >= 2".into()));
    }
    let ps = if partitions {
        all_normalized(n)
    } else {
        all_cyclic_orders(n)
    };
    let pairs: Vec<_> = ps
        .iter()
        .flat_map(|s| ps.iter().map(move |t| (s.clone(), t.clone())))
        .collect();
    eprintln!("checking {} ordered pairs on [{n}]", pairs.len());
    if compare {
        let c = compare_pairs(&pairs)?;
        let code = if c.disagreements.is_empty() { 0 } else { 3 };
        let text = format!(
            "{} pairs on [{n}]: {} alcoved, {} compatible, {} disagreements{}",
            pairs.len(),
            c.alcoved,
            c.compatible,
            c.disagreements.len(),
            disagreement_text(&c.disagreements)
        );
        let json = json!({
            "n": n,
            "pairs": pairs.len(),
            "alcoved": c.alcoved,
            "compatible": c.compatible,
            "disagreements": c.disagreements,
        });
        return Ok(Output::single(json, text, code));
    }
    let alcoved: usize = pairs
        .par_iter()
        .map(|(s, t)| compat::oracle_pair(s, t).map(|v| usize::from(v.compatible)))
        .collect::<std::result::Result<Vec<_>, _>>()?
        .into_iter()
        .sum();
    let text = format!("{} pairs on [{n}]: {alcoved} alcoved", pairs.len());
    Ok(Output::single(
        json!({"n": n, "pairs": pairs.len(), "alcoved": alcoved}),
        text,
        0,
    ))
}

fn cmd_count(n: usize, mode: CountModeArg, list: bool) -> Result<Output> {
    let mode = match mode {
        CountModeArg::FourOnly => CountMode::FourOnly,
        CountModeArg::Full => CountMode::Full,
    };
    let orders = orders_compatible_with_standard(n, mode, compat::DEFAULT_COUNT_BOUND)?;
    let mut json = json!({"n": n, "mode": mode, "count": orders.len()});
    let mut text = orders.len().to_string();
    if list {
        json["orders"] = to_json(&orders);
        for o in &orders {
            text.push_str(&format!("\n{o}"));
        }
    }
    Ok(Output::single(json, text, 0))
}

fn cmd_family(
    name: &str,
    n: usize,
    mode: VerifyModeArg,
    k: Option<usize>,
    dedup: bool,
    bound: usize,
) -> Result<Output> {
    let name: FamilyName = match (name, k) {
        ("higher-pellytope", Some(k)) => FamilyName::HigherPellytope(k),
        ("higher-pellytope", None) => {
            return Err(CliError::Usage("higher-pellytope needs --k".into()))
        }
        (other, _) => other.parse()?,
    };
    if name == FamilyName::Custom {
        return Err(CliError::Usage(
            "use check-collection for custom lists".into(),
        ));
    }
    let mut spec = FamilySpec::new(name, n)?;
    if dedup {
        spec.summands = match name {
            FamilyName::Dhat => dhat_summands(n, true)?,
            FamilyName::HigherPellytope(k) => higher_pellytope_summands(n, k)?,
            _ => spec.summands,
        };
    }
    let mode = match mode {
        VerifyModeArg::Pairwise => VerifyMode::Pairwise,
        VerifyModeArg::Oracle => VerifyMode::Oracle,
    };
    let r = verify_family_with(&spec, mode, bound)?;
    let verdict = if r.is_alcoved() {
        "alcoved"
    } else {
        "not alcoved"
    };
    let mut text = format!(
        "{} n={}: {verdict} ({} summands, {} distinct, {} checked)",
        r.family, r.n, r.counts.summands, r.counts.distinct, r.counts.checked
    );
    if let Some(w) = &r.witness {
        text.push_str(&format!("\n  {}", witness_text(w)));
    }
    if let Some((i, j)) = r.pair {
        text.push_str(&format!(
            "\n  summands {i} ({}) and {j} ({})",
            r.summands[i - 1],
            r.summands[j - 1]
        ));
    }
    Ok(Output::single(to_json(&r), text, code_of(r.is_alcoved())))
}

fn max_label(text: &str) -> usize {
    text.split(|c: char| !c.is_ascii_digit())
        .filter_map(|x| x.parse().ok())
        .max()
        .unwrap_or(1)
}

fn cmd_cones(s: &str, t: &str, n: Option<usize>) -> Result<Output> {
    let n = n.unwrap_or_else(|| max_label(s).max(max_label(t)));
    let (a, b) = (RootCone::parse(n, s)?, RootCone::parse(n, t)?);
    let r = intersect_root_cones(&a, &b)?;
    let ray_text: Vec<String> = r
        .rays
        .iter()
        .map(|v| format!("({})", join_ints(v)))
        .collect();
    let mut text = if r.is_root_cone {
        "root cone".to_string()
    } else {
        "not a root cone".to_string()
    };
    if ray_text.is_empty() {
        text.push_str("; no rays");
    } else {
        text.push_str(&format!("; rays {}", ray_text.join(" ")));
    }
    if let Some(c) = &r.witness {
        text.push_str(&format!("\n  cycle {}", join_ints(&c.vertex_sequence())));
    }
    let json = json!({
        "s": a.to_string(),
        "t": b.to_string(),
        "is_root_cone": r.is_root_cone,
        "rays": r.rays,
        "witness": r.witness,
    });
    Ok(Output::single(json, text, code_of(r.is_root_cone)))
}

fn cmd_enumerate(osp: &str, nondegenerate: bool) -> Result<Output> {
    let p = parse(osp)?;
    if p.ground_set() != (1..=p.len()).collect::<Vec<_>>() {
        return Err(CliError::Usage(format!(
            "{p} is not a partition of [{}]",
            p.len()
        )));
    }
    let n = p.len();
    let partners = if nondegenerate {
        all_cyclic_orders(n)
    } else {
        all_normalized(n)
    };
    let verdicts: Vec<(OrderedSetPartition, Verdict)> = partners
        .into_par_iter()
        .map(|q| check_pair(&p, &q).map(|v| (q, v)))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let total = verdicts.len();
    let bad: Vec<_> = verdicts
        .into_iter()
        .filter(|(_, v)| !v.compatible)
        .collect();
    eprintln!("{} of {total} partners incompatible with {p}", bad.len());
    let json = bad
        .iter()
        .map(|(q, v)| json!({"partner": q, "verdict": v}))
        .collect();
    let text = bad
        .iter()
        .map(|(q, v)| format!("{q}\t{}", verdict_text(v)))
        .collect();
    Ok(Output {
        json,
        text,
        code: 0,
    })
}

fn cmd_crossval(
    n: usize,
    samples: usize,
    seed: u64,
    degenerate: bool,
    bound: usize,
) -> Result<Output> {
    check_bound(n, bound)?;
    if n < 2 {
        return Err(CliError::Usage("crossval needs n >= 2".into()));
    }
    let pool = if degenerate {
        all_normalized(n)
    } else {
        all_cyclic_orders(n)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<_> = (0..samples)
        .map(|_| {
            let s = pool.choose(&mut rng).unwrap().clone();
            let t = pool.choose(&mut rng).unwrap().clone();
            (s, t)
        })
        .collect();
    let c = compare_pairs(&pairs)?;
    let code = if c.disagreements.is_empty() { 0 } else { 3 };
    let text = format!(
        "{samples} pairs on [{n}] (seed {seed}): {} compatible, {} alcoved, {} disagreements{}",
        c.compatible,
        c.alcoved,
        c.disagreements.len(),
        disagreement_text(&c.disagreements)
    );
    let json = json!({
        "n": n,
        "samples": samples,
        "seed": seed,
        "degenerate": degenerate,
        "compatible": c.compatible,
        "alcoved": c.alcoved,
        "disagreements": c.disagreements,
    });
    Ok(Output::single(json, text, code))
}
