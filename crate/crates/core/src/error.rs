use thiserror::Error;

use crate::model::{Cost, EdgeId, VertexId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid prize {prize} at vertex {vertex}")]
    InvalidPrize { vertex: VertexId, prize: Cost },
    #[error("non-positive edge cost {cost} on edge {u}-{v}")]
    NonPositiveCost {
        u: VertexId,
        v: VertexId,
        cost: Cost,
    },
    #[error("vertex {vertex} out of range (instance has {count} vertices)")]
    VertexOutOfRange { vertex: VertexId, count: usize },
    #[error("offset must be finite")]
    InvalidOffset,
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertex {0} is not part of the instance")]
    UnknownVertex(VertexId),
    #[error("edge {0} is not part of the instance")]
    UnknownEdge(EdgeId),
    #[error("edge {0} has an endpoint outside the tree")]
    DanglingEdge(EdgeId),
    #[error("fixed terminal {0} is missing from the tree")]
    MissingFixedTerminal(VertexId),
    #[error("not a tree: {vertices} vertices but {edges} edges")]
    NotATree { vertices: usize, edges: usize },
    #[error("vertex {0} is already deleted")]
    DeadVertex(VertexId),
    #[error("fixed terminal {0} cannot be deleted")]
    FixedTerminalRemoved(VertexId),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WalkError {
    #[error("walk has {vertices} vertices but {edges} edges")]
    Shape { vertices: usize, edges: usize },
    #[error("walk edge {edge} does not join vertices {from} and {to}")]
    NotIncident {
        edge: EdgeId,
        from: VertexId,
        to: VertexId,
    },
    #[error("vertex {0} is a terminal or endpoint and occurs more than once")]
    RepeatedVertex(VertexId),
    #[error("walk uses a deleted element")]
    DeadElement,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("instance has no potential terminals")]
    NoTerminals,
    #[error("vertex {0} is a terminal; the bound applies to non-terminals only")]
    TerminalVertex(VertexId),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SapError {
    #[error("transformation requires a {expected} instance")]
    WrongClass { expected: &'static str },
    #[error("instance has no potential terminals")]
    NoTerminals,
    #[error("vertex {0} is not a fixed terminal")]
    NotFixed(VertexId),
    #[error("terminal {0} is unreachable from the root")]
    Unreachable(usize),
    #[error("arc set is not a feasible arborescence: {0}")]
    Infeasible(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle refuses instances with {0} vertices (limit 20)")]
    TooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HeuristicError {
    #[error("start vertex {0} is neither fixed nor of positive prize")]
    InvalidStart(VertexId),
    #[error("fixed terminal {0} cannot be connected to the tree")]
    Unreachable(VertexId),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogError {
    #[error("log references edge {0} which is not in the tree's instance")]
    UnknownEdge(EdgeId),
    #[error(transparent)]
    Model(#[from] ModelError),
}
