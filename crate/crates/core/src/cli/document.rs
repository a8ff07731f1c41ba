//! The JSON file format for manifold specs.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::construct::LatticeSpec;
use crate::error::{Error, Result};
use crate::model::{LambdaSpec, ManifoldSpec, SpecialTau, TauSpec};
use crate::scalars::rational::serde_z;
use crate::scalars::QVec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TauDocument {
    Generic,
    Special {
        c: QVec,
        #[serde(with = "serde_z")]
        h: BigInt,
        #[serde(with = "serde_z")]
        k: BigInt,
        #[serde(default = "yes")]
        ck_positive: bool,
    },
}

fn yes() -> bool {
    true
}

impl From<&TauSpec> for TauDocument {
    fn from(t: &TauSpec) -> Self {
        match t {
            TauSpec::Generic => TauDocument::Generic,
            TauSpec::Special(s) => TauDocument::Special {
                c: s.c_ref.clone(),
                h: s.h.clone(),
                k: s.k.clone(),
                ck_positive: s.ck_positive,
            },
        }
    }
}

impl From<TauDocument> for TauSpec {
    fn from(t: TauDocument) -> Self {
        match t {
            TauDocument::Generic => TauSpec::Generic,
            TauDocument::Special { c, h, k, ck_positive } => TauSpec::Special(SpecialTau {
                c_ref: c,
                h,
                k,
                ck_positive,
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub n: usize,
    pub basis_dim: usize,
    pub lambdas: Vec<QVec>,
    pub tau: TauDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeSpec>,
}

impl SpecDocument {
    pub fn from_spec(s: &ManifoldSpec) -> Self {
        SpecDocument {
            n: s.n(),
            basis_dim: s.basis_dim(),
            lambdas: s.lambdas().to_vec(),
            tau: (&s.tau).into(),
            lattice: s.lattice.clone(),
        }
    }

    /// Converts to a `ManifoldSpec`, checking only the declared `n`.
    pub fn into_spec(self) -> Result<ManifoldSpec> {
        if self.n != self.lambdas.len() {
            return Err(Error::InvalidSpec(vec![format!(
                "n = {} but {} lambdas are listed",
                self.n,
                self.lambdas.len()
            )]));
        }
        Ok(ManifoldSpec {
            lambda: LambdaSpec::new(self.basis_dim, self.lambdas),
            tau: self.tau.into(),
            lattice: self.lattice,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
