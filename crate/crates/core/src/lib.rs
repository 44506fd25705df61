//! Exact Lyapunov constants, perturbation jets and limit-cycle lower bounds for
//! three-dimensional quadratic systems with a Hopf singular point.

pub mod bifurcate;
pub mod exactalg;
pub mod lyapcore;
pub mod numoracle;
pub mod sysmodel;
