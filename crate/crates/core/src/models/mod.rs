//! Catalog of symmetric model geometries.

pub mod calabi;
pub mod product;

pub use calabi::{
    calabi_ma_ratio, hessian_det_reduced, Background, CalabiGrid, CalabiModel, CalabiProfile,
    Jet2, LogisticPotential,
};
pub use product::{CurveKind, Factor, ProductModel, ProductState, RicciEigs};

use crate::cohomology::CohomologySetup;
use crate::error::Result;

/// A flow backend: exact product ODE or the Calabi-reduced PDE.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Product(ProductModel),
    Calabi(CalabiModel),
}

impl Model {
    pub fn setup(&self) -> Result<CohomologySetup> {
        match self {
            Model::Product(m) => m.setup(),
            Model::Calabi(m) => m.setup(),
        }
    }
}
