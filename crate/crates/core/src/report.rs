//! Rendering of decisions, certificates and constructions.
//!
//! JSON output is pretty-printed from types with a fixed field order and no
//! timing data, so identical inputs give identical bytes.

use serde::Serialize;

use crate::constructions::Construction;
use crate::error::Result;
use crate::pattern::PatternSpec;
use crate::search::{Certificate, Decision};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    #[default]
    Table,
}

/// `R^3(BK4,BK5)`, or `R^3_3(...)` for three or more colors.
pub fn ramsey_label(r: usize, targets: &[Option<PatternSpec>]) -> String {
    let names: Vec<String> = targets
        .iter()
        .map(|t| t.as_ref().map_or_else(|| "-".into(), PatternSpec::short))
        .collect();
    if targets.len() > 2 {
        format!("R^{r}_{}({})", targets.len(), names.join(","))
    } else {
        format!("R^{r}({})", names.join(","))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

pub fn decision(d: &Decision, format: Format) -> Result<String> {
    if format == Format::Json {
        return to_json(d);
    }
    let mut out = format!(
        "{} on {} vertices: {}\n{:<10} {:>12} {:>12} {:>12}\n{:<10} {:>12} {:>12} {:>12}\n",
        ramsey_label(d.r, &d.targets),
        d.n,
        d.status.name(),
        "pruning",
        "nodes",
        "symmetry",
        "witness",
        d.pruning.name(),
        d.stats.nodes,
        d.stats.symmetry_prunes,
        d.stats.witness_prunes,
    );
    if let Some(c) = &d.counterexample {
        out += &format!("counterexample: {}\n", serde_json::to_string(c)?);
    }
    Ok(out)
}

pub fn certificate(c: &Certificate, format: Format) -> Result<String> {
    if format == Format::Json {
        return to_json(c);
    }
    Ok(format!(
        "{} = {}\n{:<16} {:>8} {:>8} {:>12}\n{:<16} {:>8} {:>8} {:>12}\n",
        ramsey_label(c.r, &c.targets),
        c.value,
        "lower witness",
        "vertices",
        "edges",
        "upper nodes",
        "",
        c.lower_witness.n(),
        c.lower_witness.len(),
        c.upper_token.nodes,
    ))
}

pub fn construction(c: &Construction, format: Format) -> Result<String> {
    if format == Format::Json {
        return to_json(c);
    }
    let counts: Vec<String> = c
        .coloring
        .color_counts()
        .iter()
        .map(usize::to_string)
        .collect();
    let guarantee: Vec<String> = c
        .recipe
        .guarantee
        .iter()
        .map(|g| g.as_ref().map_or_else(|| "-".into(), PatternSpec::short))
        .collect();
    Ok(format!(
        "{}: n = {}, r = {}, k = {}, edges per color {}\nno monochromatic {} (verified: {})\ncoloring: {}\n",
        c.recipe.name,
        c.coloring.n(),
        c.coloring.r(),
        c.coloring.k(),
        counts.join("/"),
        guarantee.join("/"),
        c.recipe.verified,
        serde_json::to_string(&c.coloring)?,
    ))
}
