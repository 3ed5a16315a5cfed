use serde::{Deserialize, Serialize};

use super::ClassicalOracle;
use crate::{Error, Result};

/// Adaptive classical query algorithm. Query indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub enum DecisionTree {
    Leaf(bool),
    Query { index: usize, on0: Box<DecisionTree>, on1: Box<DecisionTree> },
}

impl DecisionTree {
    pub fn query(index: usize, on0: DecisionTree, on1: DecisionTree) -> Self {
        DecisionTree::Query { index, on0: Box::new(on0), on1: Box::new(on1) }
    }

    /// Length of the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { on0, on1, .. } => 1 + on0.depth().max(on1.depth()),
        }
    }

    /// Largest query index, 0 for a bare leaf.
    pub fn max_index(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 0,
            DecisionTree::Query { index, on0, on1 } => (*index).max(on0.max_index()).max(on1.max_index()),
        }
    }

    pub fn eval(&self, oracle: &ClassicalOracle) -> Result<bool> {
        Ok(self.eval_counting(oracle)?.0)
    }

    /// Output bit together with the number of queries spent.
    pub fn eval_counting(&self, oracle: &ClassicalOracle) -> Result<(bool, usize)> {
        let mut node = self;
        let mut queries = 0;
        loop {
            match node {
                DecisionTree::Leaf(b) => return Ok((*b, queries)),
                DecisionTree::Query { index, on0, on1 } => {
                    queries += 1;
                    node = if oracle.query(*index)? { on1 } else { on0 };
                }
            }
        }
    }

    pub fn eval_bits(&self, x: &[bool]) -> Result<bool> {
        self.eval(&ClassicalOracle::new(x.to_vec()))
    }

    /// Extends every shallow leaf with dummy queries of index 1 so that all
    /// leaves sit at exactly `depth`. Computes the same function.
    pub fn pad_to_depth(&self, depth: usize) -> Result<DecisionTree> {
        if self.depth() > depth {
            return Err(Error::Precondition(format!("tree of depth {} cannot be padded to {depth}", self.depth())));
        }
        Ok(self.pad(depth))
    }

    fn pad(&self, depth: usize) -> DecisionTree {
        match self {
            DecisionTree::Leaf(b) if depth > 0 => {
                let child = DecisionTree::Leaf(*b).pad(depth - 1);
                DecisionTree::query(1, child.clone(), child)
            }
            DecisionTree::Leaf(b) => DecisionTree::Leaf(*b),
            DecisionTree::Query { index, on0, on1 } => {
                DecisionTree::query(*index, on0.pad(depth - 1), on1.pad(depth - 1))
            }
        }
    }

    /// True when every leaf sits at exactly `depth`.
    pub fn is_complete(&self, depth: usize) -> bool {
        match self {
            DecisionTree::Leaf(_) => depth == 0,
            DecisionTree::Query { on0, on1, .. } => {
                depth > 0 && on0.is_complete(depth - 1) && on1.is_complete(depth - 1)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum TreeRepr {
    Leaf { leaf: u8 },
    Query { query: usize, on0: Box<TreeRepr>, on1: Box<TreeRepr> },
}

impl TryFrom<TreeRepr> for DecisionTree {
    type Error = String;

    fn try_from(repr: TreeRepr) -> std::result::Result<Self, String> {
        match repr {
            TreeRepr::Leaf { leaf: 0 } => Ok(DecisionTree::Leaf(false)),
            TreeRepr::Leaf { leaf: 1 } => Ok(DecisionTree::Leaf(true)),
            TreeRepr::Leaf { leaf } => Err(format!("leaf value {leaf} is not a bit")),
            TreeRepr::Query { query: 0, .. } => Err("query indices are 1-based".to_string()),
            TreeRepr::Query { query, on0, on1 } => {
                Ok(DecisionTree::query(query, DecisionTree::try_from(*on0)?, DecisionTree::try_from(*on1)?))
            }
        }
    }
}

impl From<DecisionTree> for TreeRepr {
    fn from(tree: DecisionTree) -> Self {
        match tree {
            DecisionTree::Leaf(b) => TreeRepr::Leaf { leaf: b as u8 },
            DecisionTree::Query { index, on0, on1 } => {
                TreeRepr::Query { query: index, on0: Box::new((*on0).into()), on1: Box::new((*on1).into()) }
            }
        }
    }
}
