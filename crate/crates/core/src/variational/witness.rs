use serde_json::{json, Value};

use crate::ap::IntegerSet;
use crate::cube::{mask_bits, CubeModel, Mask};
use crate::graph::Graph;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Subset,
    Subcube,
    Graph,
}

impl WitnessKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            WitnessKind::Subset => "subset",
            WitnessKind::Subcube => "subcube",
            WitnessKind::Graph => "graph",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Set(IntegerSet),
    Graph(Graph),
    /// Coordinates fixed to one and to zero, as model labels.
    Subcube { ones: Vec<Value>, zeros: Vec<Value> },
    None,
}

/// A feasible (or flagged infeasible) point of the variational problem.
#[derive(Clone, Debug)]
pub struct Witness<F> {
    pub kind: WitnessKind,
    pub payload: Payload,
    /// Coordinates fixed to one / zero when the witness lives on a cube model.
    pub ones: Mask,
    pub zeros: Mask,
    pub fixed_ones: usize,
    pub fixed_zeros: usize,
    pub log_cost: f64,
    pub conditional_mean: F,
    pub feasible: bool,
}

impl<F: Scalar> Witness<F> {
    pub(crate) fn from_cube(cube: &CubeModel<F>, kind: WitnessKind, ones: Mask, zeros: Mask, mean: F, feasible: bool) -> Self {
        let payload = match kind {
            WitnessKind::Subcube => Payload::Subcube {
                ones: mask_bits(ones).map(|i| cube.label(i)).collect(),
                zeros: mask_bits(zeros).map(|i| cube.label(i)).collect(),
            },
            _ => match cube.mask_to_graph(ones) {
                Some(g) => Payload::Graph(g),
                None => Payload::Set(cube.mask_to_set(ones).unwrap()),
            },
        };
        Witness {
            kind,
            payload,
            ones,
            zeros,
            fixed_ones: ones.count_ones() as usize,
            fixed_zeros: zeros.count_ones() as usize,
            log_cost: cube.log_cost(ones, zeros),
            conditional_mean: mean,
            feasible,
        }
    }

    /// The `min ∅ = ∞` answer.
    pub(crate) fn infeasible(kind: WitnessKind, mean: F) -> Self {
        Witness {
            kind,
            payload: Payload::None,
            ones: 0,
            zeros: 0,
            fixed_ones: 0,
            fixed_zeros: 0,
            log_cost: f64::INFINITY,
            conditional_mean: mean,
            feasible: false,
        }
    }

    pub fn payload_json(&self) -> Value {
        match &self.payload {
            Payload::Set(s) => json!(s.members()),
            Payload::Graph(g) => json!({ "n": g.n(), "edges": g.edges() }),
            Payload::Subcube { ones, zeros } => json!({ "ones": ones, "zeros": zeros }),
            Payload::None => Value::Null,
        }
    }

    pub fn to_json(&self) -> Value {
        let cost = if self.log_cost.is_finite() { json!(self.log_cost) } else { json!("inf") };
        json!({
            "kind": self.kind.as_str(),
            "payload": self.payload_json(),
            "log_cost": cost,
            "conditional_mean": self.conditional_mean.render(),
            "feasible": self.feasible,
        })
    }
}
