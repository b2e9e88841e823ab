/// Algorithm parameters for the root loop and the branch-and-cut search.
///
/// Defaults are the final values used for the published experiments:
/// stabilization weight 0.5, cut threshold 100, relative root improvement
/// threshold 0.1%, two extra cuts at nodes whose depth is a multiple of 10.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    /// Weight of the previous separation point in the stabilized update.
    pub phi: f64,
    /// Minimum violation for a cut at fractional points.
    pub eps_cut: f64,
    /// Relative LB improvement (fraction, 0.001 = 0.1%) below which the root
    /// loop stops.
    pub kappa: f64,
    /// Cuts separated at a fractional node whose depth is a multiple of `gamma`.
    pub upsilon: usize,
    pub gamma: usize,
    /// PE0 runs on root iterations divisible by this.
    pub pe0_every: usize,
    pub use_elimination: bool,
    pub use_partial_enumeration: bool,
    pub use_matheuristic: bool,
    /// Core point parameter; `None` takes half the admissible upper bound.
    pub core_eps: Option<f64>,
    pub time_limit: f64,
    pub node_limit: usize,
    /// Maximum root iterations (safety net, not part of the method).
    pub max_root_iterations: usize,
    /// Relative optimality gap at which the search stops.
    pub tol_gap: f64,
    pub int_tol: f64,
    pub pool_cap: usize,
    /// A cut whose slack exceeds `archive_slack_factor * eps_cut` for
    /// `archive_after` consecutive solves leaves the LP.
    pub archive_slack_factor: f64,
    pub archive_after: usize,
    pub milp_node_limit: usize,
    pub milp_time_limit: f64,
    /// Reuse transportation solutions between pairs with identical
    /// supply/demand vectors when the quadratic cost is flow x distance.
    pub factorized_shortcut: bool,
    pub threads: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            phi: 0.5,
            eps_cut: 100.0,
            kappa: 0.001,
            upsilon: 2,
            gamma: 10,
            pe0_every: 2,
            use_elimination: true,
            use_partial_enumeration: true,
            use_matheuristic: true,
            core_eps: None,
            time_limit: f64::INFINITY,
            node_limit: usize::MAX,
            max_root_iterations: 10_000,
            tol_gap: 1e-6,
            int_tol: 1e-6,
            pool_cap: 5000,
            archive_slack_factor: 10.0,
            archive_after: 20,
            milp_node_limit: 5000,
            milp_time_limit: 5.0,
            factorized_shortcut: true,
            threads: 1,
        }
    }
}

impl SolverParams {
    /// Settings that run the root cutting plane loop to full convergence.
    pub fn converged_root() -> Self {
        SolverParams {
            eps_cut: 1e-6,
            kappa: 0.0,
            ..SolverParams::default()
        }
    }
}
