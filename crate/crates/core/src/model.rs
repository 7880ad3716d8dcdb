//! The three count models behind one interface.

use crate::ap::ApModel;
use crate::cube::CubeModel;
use crate::error::Result;
use crate::graph::{InducedModel, SubgraphModel};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub enum Model<F> {
    Subgraph(SubgraphModel<F>),
    Induced(InducedModel<F>),
    Ap(ApModel<F>),
}

impl<F: Scalar> Model<F> {
    pub fn cube(&self) -> Result<CubeModel<F>> {
        match self {
            Model::Subgraph(m) => CubeModel::from_subgraph(m),
            Model::Induced(m) => CubeModel::from_induced(m),
            Model::Ap(m) => CubeModel::from_ap(m),
        }
    }

    pub fn mean(&self) -> F {
        match self {
            Model::Subgraph(m) => m.mean(),
            Model::Induced(m) => m.mean(),
            Model::Ap(m) => m.mean(),
        }
    }

    pub fn p(&self) -> &F {
        match self {
            Model::Subgraph(m) => &m.p,
            Model::Induced(m) => &m.p,
            Model::Ap(m) => &m.p,
        }
    }

    pub fn is_monotone(&self) -> bool {
        !matches!(self, Model::Induced(_))
    }
}
