//! Explicit lower-bound colorings, each shipped with the guarantee it
//! claims and checked by the detectors before it is returned.
//!
//! Color 0 is blue and color 1 is red throughout.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::detect::{detect, Witness};
use crate::error::{invalid, Error, Result};
use crate::hypergraph::{Bits, Coloring, Edge};
use crate::pattern::{Kind, Pattern, PatternSpec};

pub const BLUE: u8 = 0;
pub const RED: u8 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionRecipe {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    /// Per color, the target asserted absent.
    pub guarantee: Vec<Option<PatternSpec>>,
    pub seed: Option<u64>,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub coloring: Coloring,
    pub recipe: ConstructionRecipe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BlockMode {
    Berge,
    Shadow,
}

/// First color (lowest index) whose claimed-absent target is present.
/// Colors are checked in parallel.
pub fn verify_recipe(c: &Coloring, recipe: &ConstructionRecipe) -> Result<Option<(u8, Witness)>> {
    if recipe.guarantee.len() != c.k() {
        return Err(invalid(format!(
            "guarantee lists {} colors, coloring has {}",
            recipe.guarantee.len(),
            c.k()
        )));
    }
    let found: Vec<Option<Witness>> = recipe
        .guarantee
        .par_iter()
        .enumerate()
        .map(|(color, spec)| match spec {
            Some(spec) => detect(c, color as u8, spec),
            None => Ok(None),
        })
        .collect::<Result<_>>()?;
    Ok(found
        .into_iter()
        .enumerate()
        .find_map(|(color, w)| w.map(|w| (color as u8, w))))
}

fn finish(coloring: Coloring, mut recipe: ConstructionRecipe) -> Result<Construction> {
    if let Some((color, _)) = verify_recipe(&coloring, &recipe)? {
        return Err(Error::ConstructionFailed {
            name: recipe.name,
            color,
        });
    }
    recipe.verified = true;
    Ok(Construction { coloring, recipe })
}

fn recipe(
    name: &str,
    params: Value,
    guarantee: Vec<Option<PatternSpec>>,
    seed: Option<u64>,
) -> ConstructionRecipe {
    let params = match params {
        Value::Object(map) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    ConstructionRecipe {
        name: name.into(),
        params,
        guarantee,
        seed,
        verified: false,
    }
}

/// 3-uniform coloring on `t + s − 4` vertices split into `A` (the first
/// `t − 2`) and `B`: an edge is blue iff it has at least two vertices in `A`.
pub fn two_block(t: usize, s: usize, mode: BlockMode) -> Result<Construction> {
    if t < 3 || s < 3 {
        return Err(invalid("two_block needs t, s >= 3"));
    }
    let n = t + s - 4;
    let a_mask = (1u64 << (t - 2)) - 1;
    let coloring = Coloring::from_fn(n, 3, 2, |e| {
        if (e.mask() & a_mask).count_ones() >= 2 {
            BLUE
        } else {
            RED
        }
    })?;
    let kind = match mode {
        BlockMode::Berge => Kind::Berge,
        BlockMode::Shadow => Kind::Shadow,
    };
    let guarantee = vec![
        Some(PatternSpec::clique(kind, t)?),
        Some(PatternSpec::clique(kind, s)?),
    ];
    finish(
        coloring,
        recipe(
            "two_block",
            json!({"t": t, "s": s, "mode": mode, "block_a": t - 2}),
            guarantee,
            None,
        ),
    )
}

/// Blue iff the edge contains both vertices 0 and 1.
///
/// For `r = 3` the guarantee is no blue BK_3 and no red BK_n; for `r >= 4`
/// no monochromatic BK_n.
pub fn special_pair(n: usize, r: usize) -> Result<Construction> {
    if r < 3 || n < r {
        return Err(invalid("special_pair needs n >= r >= 3"));
    }
    let coloring = Coloring::from_fn(
        n,
        r,
        2,
        |e| if e.mask() & 0b11 == 0b11 { BLUE } else { RED },
    )?;
    let blue = if r == 3 { 3 } else { n };
    let guarantee = vec![Some(PatternSpec::berge(blue)), Some(PatternSpec::berge(n))];
    finish(
        coloring,
        recipe("special_pair", json!({"n": n, "r": r}), guarantee, None),
    )
}

/// `(a+1)`-uniform coloring on `s − 1` classes of `⌊t/a⌋` vertices: red iff
/// the edge meets every class at most once. Claims no blue SK_t^(a) and no
/// red ∂K_s.
pub fn class_partition_suspension(t: usize, s: usize, a: usize) -> Result<Construction> {
    if a < 2 || t < a + 1 || s < 2 {
        return Err(invalid(
            "class_partition_suspension needs a >= 2, t >= a + 1, s >= 2",
        ));
    }
    let size = t / a;
    let n = (s - 1) * size;
    let r = a + 1;
    let classes = class_masks(s - 1, size);
    let coloring = Coloring::from_fn(n, r, 2, |e| {
        if classes.iter().all(|&m| (e.mask() & m).count_ones() <= 1) {
            RED
        } else {
            BLUE
        }
    })?;
    let guarantee = vec![
        Some(PatternSpec::new(Kind::Suspension, Pattern::clique(t, a)?)?),
        Some(PatternSpec::clique(Kind::Shadow, s)?),
    ];
    let params = json!({"t": t, "s": s, "a": a, "r": r, "classes": s - 1, "class_size": size});
    finish(
        coloring,
        recipe("class_partition_suspension", params, guarantee, None),
    )
}

/// Every edge gets `color`; the same-color guarantee is `target`, the other
/// colors claim no edge at all (a K_2 of the same kind).
pub fn monochromatic_clique(
    n: usize,
    r: usize,
    k: usize,
    color: u8,
    target: &PatternSpec,
) -> Result<Construction> {
    if n < r {
        return Err(invalid("monochromatic_clique needs n >= r"));
    }
    let coloring = Coloring::monochromatic(n, r, k, color)?;
    let other = PatternSpec::new(target.kind, Pattern::clique(2, 2)?)?;
    let guarantee = (0..k)
        .map(|c| {
            Some(if c == color as usize {
                target.clone()
            } else {
                other.clone()
            })
        })
        .collect();
    let params = json!({"n": n, "r": r, "k": k, "color": color, "target": target});
    finish(
        coloring,
        recipe("monochromatic_clique", params, guarantee, None),
    )
}

fn class_masks(count: usize, size: usize) -> Vec<u64> {
    (0..count)
        .map(|i| ((1u64 << size) - 1) << (i * size))
        .collect()
}

/// A positive rational `num / den` strictly between 0 and 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Epsilon {
    pub num: u32,
    pub den: u32,
}

impl Epsilon {
    pub fn new(num: u32, den: u32) -> Result<Epsilon> {
        if num == 0 || den == 0 || num >= den {
            return Err(invalid(format!(
                "epsilon = {num}/{den} must lie strictly between 0 and 1"
            )));
        }
        Ok(Epsilon { num, den })
    }
}

impl std::str::FromStr for Epsilon {
    type Err = Error;

    fn from_str(text: &str) -> Result<Epsilon> {
        let (num, den) = text
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("epsilon `{text}` is not p/q")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("epsilon `{text}` is not p/q")))
        };
        Epsilon::new(parse(num)?, parse(den)?)
    }
}

impl std::fmt::Display for Epsilon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `⌊t^(p/q)⌋`, exactly.
pub fn floor_power(t: usize, e: Epsilon) -> usize {
    let target = BigUint::from(t).pow(e.num);
    let mut m = 0usize;
    while BigUint::from(m + 1).pow(e.den) <= target {
        m += 1;
    }
    m
}

/// `⌈t^(1 − p/q)⌉`, exactly.
pub fn ceil_co_power(t: usize, e: Epsilon) -> usize {
    let target = BigUint::from(t).pow(e.den - e.num);
    let mut x = 1usize;
    while BigUint::from(x).pow(e.den) < target {
        x += 1;
    }
    x
}

/// Colorings of the class hypergraphs `K_M^(s)`, for `s = 2 .. r − 1`.
#[derive(Clone, Debug)]
pub enum BaseColorings {
    /// Caller-supplied, ordered by uniformity; each is re-checked.
    Supplied(Vec<Coloring>),
    /// Found by seeded random sampling.
    Sampled { seed: u64 },
}

/// Number of colors the class-hypergraph coloring of uniformity `s` uses.
pub fn superlinear_colors(s: usize) -> usize {
    match s {
        0..=2 => 2,
        3 => 3,
        _ => (2..s).map(superlinear_colors).sum::<usize>() + 2,
    }
}

const SAMPLE_ATTEMPTS: usize = 20_000;

fn sample_base(m: usize, s: usize, k: usize, q: usize, rng: &mut ChaCha8Rng) -> Result<Coloring> {
    let spec = PatternSpec::berge(q);
    let len = crate::hypergraph::edge_count(m, s);
    for _ in 0..SAMPLE_ATTEMPTS {
        let colors: Vec<u8> = (0..len).map(|_| rng.gen_range(0..k) as u8).collect();
        let c = Coloring::new(m, s, k, colors)?;
        if base_ok(&c, &spec)? {
            return Ok(c);
        }
    }
    Err(invalid(format!("no {k}-coloring of K_{m}^({s}) without a monochromatic BK_{q} found in {SAMPLE_ATTEMPTS} samples")))
}

fn base_ok(c: &Coloring, spec: &PatternSpec) -> Result<bool> {
    for color in 0..c.k() as u8 {
        if detect(c, color, spec)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Class blow-up coloring with no monochromatic BK_t.
///
/// Vertices form `M` classes of `⌊t^ε⌋` vertices (`M = t − 1` unless
/// `classes` is given). An edge whose vertices lie in the class set `S`
/// takes, when `2 <= |S| <= r − 1`, the color of `S` in the base coloring of
/// uniformity `|S|` (shifted into its own color block); edges spanning `r`
/// classes get a dedicated color, and edges inside one class take the
/// lowest color. For `r = 3` this is blue/red from the base graph, red
/// inside classes and green (color 2) across three classes. For `r >= 4` the
/// palette has `Σ c_s + 2` colors, the last of which stays unused.
pub fn superlinear_multicolor(
    r: usize,
    t: usize,
    epsilon: Epsilon,
    classes: Option<usize>,
    base: BaseColorings,
) -> Result<Construction> {
    if r < 3 {
        return Err(invalid("superlinear_multicolor needs r >= 3"));
    }
    let m_classes = classes.unwrap_or(t.saturating_sub(1));
    if m_classes < 2 {
        return Err(invalid("superlinear_multicolor needs at least two classes"));
    }
    let size = floor_power(t, epsilon);
    let q = ceil_co_power(t, epsilon);
    if size == 0 || m_classes * size > 64 {
        return Err(invalid(format!(
            "{m_classes} classes of {size} vertices do not fit"
        )));
    }
    let n = m_classes * size;
    let q_spec = PatternSpec::berge(q);

    let (bases, seed) = match base {
        BaseColorings::Supplied(list) => {
            if list.len() != r - 2 {
                return Err(invalid(format!(
                    "expected {} base colorings (uniformities 2..{})",
                    r - 2,
                    r - 1
                )));
            }
            for (i, c) in list.iter().enumerate() {
                let s = i + 2;
                if c.n() != m_classes || c.r() != s || c.k() != superlinear_colors(s) {
                    return Err(invalid(format!(
                        "base coloring {i} must color K_{m_classes}^({s}) with {} colors",
                        superlinear_colors(s)
                    )));
                }
                if !base_ok(c, &q_spec)? {
                    return Err(invalid(format!(
                        "base coloring of uniformity {s} has a monochromatic BK_{q}"
                    )));
                }
            }
            (list, None)
        }
        BaseColorings::Sampled { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let list = (2..r)
                .map(|s| sample_base(m_classes, s, superlinear_colors(s), q, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            (list, Some(seed))
        }
    };

    // Color block offsets per class-span size.
    let mut offset = vec![0usize; r + 1];
    let mut next = 0;
    for (s, slot) in offset.iter_mut().enumerate().take(r).skip(2) {
        *slot = next;
        next += superlinear_colors(s);
    }
    let span_color = next;
    let k = if r == 3 { 3 } else { next + 2 };
    let within = if r == 3 { RED } else { 0 };

    let class_of = |v: usize| v / size;
    let coloring = Coloring::from_fn(n, r, k, |e| {
        let set = e.vertices().fold(0u64, |acc, v| acc | 1 << class_of(v));
        let span = set.count_ones() as usize;
        match span {
            1 => within,
            s if s == r => span_color as u8,
            s => {
                let base = &bases[s - 2];
                let id = crate::hypergraph::rank_unchecked(Edge(set));
                (offset[s] + base.colors()[id] as usize) as u8
            }
        }
    })?;
    let guarantee = vec![Some(PatternSpec::berge(t)); k];
    let params = json!({
        "r": r,
        "t": t,
        "epsilon": epsilon.to_string(),
        "classes": m_classes,
        "class_size": size,
        "q": q,
        "colors": k,
        "within_class_color": within,
        "span_color": span_color,
        "base": bases.iter().map(Coloring::to_doc).collect::<Vec<_>>(),
    });
    let construction = finish(
        coloring,
        recipe("superlinear_multicolor", params, guarantee, seed),
    )?;
    if let Some(color) = core_span_violation(&construction.coloring, m_classes, size, q, r) {
        return Err(Error::ConstructionFailed {
            name: "superlinear_multicolor (core span)".into(),
            color,
        });
    }
    Ok(construction)
}

/// A color (from the class-graph blocks) in which some `q` classes are
/// pairwise joined by edges of that color, so a monochromatic Berge clique
/// could have a core meeting `q` classes.
pub fn core_span_violation(
    c: &Coloring,
    classes: usize,
    size: usize,
    q: usize,
    r: usize,
) -> Option<u8> {
    let class_mask = |i: usize| ((1u64 << size) - 1) << (i * size);
    let block_colors = if r == 3 {
        2
    } else {
        (2..r).map(superlinear_colors).sum()
    };
    (0..block_colors as u8).find(|&color| {
        let mut joined = vec![0u64; classes];
        for (e, col) in c.edges() {
            if col != color {
                continue;
            }
            let set: u64 = (0..classes)
                .filter(|&i| e.mask() & class_mask(i) != 0)
                .fold(0, |m, i| m | 1 << i);
            for i in Bits(set) {
                joined[i] |= set & !(1 << i);
            }
        }
        crate::hypergraph::Colex::new(classes, q)
            .any(|set| Bits(set).all(|i| set & !(1 << i) & !joined[i] == 0))
    })
}
