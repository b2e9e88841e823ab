use alloc::string::String;

/// Which solution invariant failed, and where.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Violation {
    #[error("assignment has {got} entries, instance has {expected} nodes")]
    Length { expected: usize, got: usize },
    #[error("node {node} assigned to {facility}, which is not open")]
    AssignedToClosed { node: usize, facility: usize },
    #[error("open facility {facility} is assigned to {assigned} instead of itself")]
    HubNotSelfAssigned { facility: usize, assigned: usize },
    #[error("{open} facilities open, at most {p} allowed")]
    TooManyFacilities { open: usize, p: usize },
    #[error("facility {facility} serves {load} but has capacity {capacity}")]
    CapacityExceeded {
        facility: usize,
        load: f64,
        capacity: f64,
    },
    #[error("facility {facility} cannot open (capacity below its own demand)")]
    NotOpenable { facility: usize },
    #[error("node index {0} out of range")]
    OutOfRange(usize),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("infeasible solution: {0}")]
    InfeasibleSolution(Violation),
    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("size guard: {what} = {got} exceeds limit {limit}")]
    SizeGuard {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("instance has no feasible solution")]
    InfeasibleInstance,
    #[error("transportation problem unbalanced: supply {supply}, demand {demand}")]
    UnbalancedProblem { supply: f64, demand: f64 },
    #[error("invalid cardinality: |H| = {candidates}, p = {p}")]
    InvalidCardinality { candidates: usize, p: usize },
    #[error("interrupted by time limit")]
    Interrupted,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("index {index} out of range (size {len})")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("reduced facility-location MILP infeasible on the given support")]
    RlfInfeasible,
    #[error("generalized assignment problem infeasible for the given facility set")]
    GapInfeasible,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
