use crate::graph::{Edge, Vertex};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {0} is out of range or has been removed")]
    InvalidVertex(Vertex),
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("special neighbour {k0} is not adjacent to measured vertex {v}")]
    NotAdjacent { v: Vertex, k0: Vertex },
    #[error("({}, {}) is not an edge of the graph", .0.0, .0.1)]
    NotAnEdge(Edge),
    #[error("edge ({}, {}) joins two vertices of QNet {qnet}", .edge.0, .edge.1)]
    IntraQNetEdge { edge: Edge, qnet: usize },
    #[error("QNet {0} has no vertices")]
    EmptyQNet(usize),
    #[error("vertex {0} is not assigned to any QNet")]
    Unassigned(Vertex),
    #[error("inter-QNet graph is not connected")]
    Disconnected,
    #[error("at least {min} QNets required, got {got}")]
    TooFewQNets { min: usize, got: usize },
    #[error("edge probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("request ({}, {}) has both endpoints in QNet {qnet}", .pair.0, .pair.1)]
    IntraDomainRequest { pair: Edge, qnet: usize },
    #[error("request ({}, {}) is already an edge of the original inter-QNet", .0.0, .0.1)]
    AdjacentRequest(Edge),
    #[error("request ({}, {}) is listed twice", .0.0, .0.1)]
    DuplicateRequest(Edge),
    #[error("request ({}, {}) is not an edge of the complement inter-QNet", .0.0, .0.1)]
    NotInComplement(Edge),
    #[error("requested {requested} pairs but only {available} are available")]
    NotEnoughPairs { requested: usize, available: usize },
    #[error("instance size {size} exceeds the limit of {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("qubit {0} is entangled with the rest of the register")]
    NotProductQubit(usize),
    #[error("tableau sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("invalid timing parameters: {0}")]
    InvalidTiming(&'static str),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}
