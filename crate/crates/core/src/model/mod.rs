//! Graphs, turning costs, transition systems and circuits.

pub mod circuit;
pub mod costs;
pub mod graph;
pub mod rational;

pub use circuit::{
    circuit_cost, transitions_of, validate_circuit, CircuitError, EulerianCircuit,
    TransitionError, TransitionSystem,
};
pub use costs::{pair_key, CostEntry, CostError, TurningCostTable};
pub use graph::{augment_to_eulerian, AugmentPolicy, Edge, EdgeId, Graph, GraphError, HalfEdge, VertexId};
pub use rational::{Rational, RationalParseError};
