//! Flag value parsers: numbers, grids, patterns, models and coordinate sets.

use uptail_core::ap::{ApModel, IntegerSet};
use uptail_core::cube::{CubeModel, Mask};
use uptail_core::graph::{parse_graph6, InducedModel, SubgraphModel};
use uptail_core::model::Model;
use uptail_core::scalar::{parse_rational, ratio_to_f64};
use uptail_core::{Error, Graph, Rational, Result};

fn bad(text: &str, what: &str) -> Error {
    Error::Parse { offset: 0, msg: format!("`{text}` is not {what}") }
}

/// Exact rational from `a/b`, a decimal or an integer.
pub fn rational(text: &str) -> Result<Rational> {
    parse_rational(text.trim())
}

/// Real number; accepts `inf` and anything [`rational`] accepts.
pub fn real(text: &str) -> Result<f64> {
    let t = text.trim();
    match t {
        "inf" | "+inf" | "∞" => Ok(f64::INFINITY),
        _ => match parse_rational(t) {
            Ok(q) => Ok(ratio_to_f64(&q)),
            Err(_) => t.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad(text, "a number")),
        },
    }
}

/// `start:stop:step` (stop included up to rounding), `a,b,c`, or one value.
pub fn grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (a, b, s) = (real(start)?, real(stop)?, real(step)?);
            if !(s > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
                return Err(bad(text, "a finite increasing range"));
            }
            let count = ((b - a) / s + 1e-9).floor() as usize + 1;
            if count > 10_000_000 {
                return Err(bad(text, "a range of at most 10^7 points"));
            }
            Ok((0..count).map(|i| a + i as f64 * s).collect())
        }
        [_] => text.split(',').map(real).collect(),
        _ => Err(bad(text, "a range start:stop:step")),
    }
}

/// Comma-separated list of nonnegative integers.
pub fn usize_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().map_err(|_| bad(s, "a nonnegative integer")))
        .collect()
}

/// Edge list `0-1,1-2`.
pub fn edge_list(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (u, v) = s.split_once('-').ok_or_else(|| bad(s, "an edge u-v"))?;
            let u = u.trim().parse().map_err(|_| bad(s, "an edge u-v"))?;
            let v = v.trim().parse().map_err(|_| bad(s, "an edge u-v"))?;
            Ok((u, v))
        })
        .collect()
}

fn size_arg(name: &str, arg: &str) -> Result<usize> {
    arg.parse().map_err(|_| bad(arg, &format!("a size for {name}")))
}

/// `triangles`, `clique:R`, `cycle:L`, `path:V`, `star:S`, `kbip:A,B` or
/// `g6:CODE` (a bare graph6 string also works).
pub fn pattern(text: &str) -> Result<Graph> {
    let (name, arg) = text.split_once(':').unwrap_or((text, ""));
    match name {
        "triangles" | "triangle" => Ok(Graph::complete(3)),
        "clique" => Ok(Graph::complete(size_arg(name, arg)?)),
        "cycle" => Ok(Graph::cycle(size_arg(name, arg)?)),
        "path" => Ok(Graph::path(size_arg(name, arg)?)),
        "star" => Ok(Graph::star(size_arg(name, arg)?)),
        "kbip" => {
            let sides = usize_list(arg)?;
            match sides.as_slice() {
                [a, b] => Ok(Graph::complete_bipartite(*a, *b)),
                _ => Err(bad(text, "kbip:A,B")),
            }
        }
        "g6" => parse_graph6(arg),
        _ => parse_graph6(text).map_err(|_| bad(text, "a known pattern or graph6 string")),
    }
}

/// Which count a model flag names.
#[derive(Clone, Debug)]
pub enum ModelSpec {
    Subgraph(Graph),
    Induced(Graph),
    Ap,
}

pub fn model_spec(text: &str) -> Result<ModelSpec> {
    match text {
        "ap" => Ok(ModelSpec::Ap),
        _ => match text.strip_prefix("induced:") {
            Some(rest) => Ok(ModelSpec::Induced(pattern(rest)?)),
            None => Ok(ModelSpec::Subgraph(pattern(text)?)),
        },
    }
}

pub fn build_model(spec: &ModelSpec, n: usize, k: usize, p: Rational) -> Result<Model<Rational>> {
    Ok(match spec {
        ModelSpec::Subgraph(h) => Model::Subgraph(SubgraphModel::new(h.clone(), n, p)?),
        ModelSpec::Induced(h) => Model::Induced(InducedModel::new(h.clone(), n, p)?),
        ModelSpec::Ap => Model::Ap(ApModel::new(n, k, p)?),
    })
}

/// A coordinate set: edges `0-1,2-3` on pair models, integers `1,4,7` on
/// progression models.
pub fn coord_set(cube: &CubeModel<Rational>, text: &str) -> Result<Mask> {
    match cube.coords {
        uptail_core::cube::Coords::Pairs { n } => {
            let g = Graph::from_edges(n, &edge_list(text)?)?;
            cube.graph_to_mask(&g)
        }
        uptail_core::cube::Coords::Integers { n } => cube.set_to_mask(&IntegerSet::from_members(n, &usize_list(text)?)?),
    }
}
