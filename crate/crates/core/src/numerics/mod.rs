//! Numerical building blocks: quadrature, ODE integration, scalar roots and
//! truncated Taylor arithmetic.

pub mod jet;
pub mod ode;
pub mod quad;
pub mod roots;
