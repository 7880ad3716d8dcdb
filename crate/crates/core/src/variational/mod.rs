//! Rate functions, constructions and brute-force solvers for the
//! variational problem `Φ_X(δ)`.

mod brute;
mod construct;
mod rates;
mod witness;

pub use brute::{next_combination, phi_bruteforce, phi_subcube_bruteforce, ut_upper_bound, UtBound};
pub use construct::{build_clique, build_hub, build_interval, clique_size, ConstructionKind};
pub use rates::{
    crossover_bisection, crossover_closed_form, independence_polynomial, phase_diagram, phi_clique_hub, poisson_rate, psi,
    psi_grid_min, psi_infinite, rate_regular, theta_root, MinimiserSet, PhaseRow, ARGMIN_TOL,
};
pub use witness::{Payload, Witness, WitnessKind};
