use serde::{Deserialize, Serialize};

use super::Distribution;
use crate::error::{Error, Result};
use crate::graph::VertexSet;

/// JSON form of a [`Distribution`], with vertex sets as index lists.
///
/// ```json
/// {"type": "blended", "U": [0, 3], "S": [1, 2, 4], "beta": 0.05}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DistributionSpec {
    Trivial {
        #[serde(rename = "S")]
        set: Vec<usize>,
    },
    UniformConstant {
        #[serde(rename = "S")]
        set: Vec<usize>,
    },
    Blended {
        #[serde(rename = "U")]
        centres: Vec<usize>,
        #[serde(rename = "S")]
        support: Vec<usize>,
        beta: f64,
    },
    Product {
        children: Vec<DistributionSpec>,
    },
}

impl DistributionSpec {
    /// Resolves index lists against a universe of `n` vertices.
    pub fn build(&self, n: usize) -> Result<Distribution> {
        let to_set = |v: &[usize]| {
            VertexSet::from_indices(n, v.iter().copied()).map_err(|e| Error::InvalidDomain(e.to_string()))
        };
        match self {
            DistributionSpec::Trivial { set } => Ok(Distribution::Trivial(to_set(set)?)),
            DistributionSpec::UniformConstant { set } => Ok(Distribution::UniformConstant(to_set(set)?)),
            DistributionSpec::Blended {
                centres,
                support,
                beta,
            } => Distribution::blended(to_set(centres)?, to_set(support)?, *beta),
            DistributionSpec::Product { children } => {
                Distribution::product(children.iter().map(|c| c.build(n)).collect::<Result<_>>()?)
            }
        }
    }
}

impl From<&Distribution> for DistributionSpec {
    fn from(d: &Distribution) -> Self {
        match d {
            Distribution::Trivial(s) => DistributionSpec::Trivial { set: s.to_vec() },
            Distribution::UniformConstant(s) => DistributionSpec::UniformConstant { set: s.to_vec() },
            Distribution::Blended {
                centres,
                support,
                beta,
            } => DistributionSpec::Blended {
                centres: centres.to_vec(),
                support: support.to_vec(),
                beta: *beta,
            },
            Distribution::Product(children) => DistributionSpec::Product {
                children: children.iter().map(DistributionSpec::from).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let text = r#"{"type":"product","children":[
            {"type":"blended","U":[0,3],"S":[1,2],"beta":0.05},
            {"type":"trivial","S":[0,3]},
            {"type":"uniform_constant","S":[4]}]}"#;
        let spec: DistributionSpec = serde_json::from_str(text).unwrap();
        let d = spec.build(5).unwrap();
        assert_eq!(d.domain(), VertexSet::full(5));
        assert_eq!(DistributionSpec::from(&d), spec);
    }

    #[test]
    fn out_of_range_is_domain_error() {
        let spec = DistributionSpec::Trivial { set: vec![7] };
        assert!(matches!(spec.build(5), Err(Error::InvalidDomain(_))));
    }
}
