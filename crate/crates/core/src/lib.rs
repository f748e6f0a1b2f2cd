//! Exact upper bounds on the number of systems of prime-to-`p` Hecke
//! eigenvalues of mod-`p` automorphic forms on totally indefinite
//! quaternionic Shimura varieties.
//!
//! The bound factors as `mass * irr_count * dim_bound`: the number of
//! superspecial points, the number of simple modular representations of the
//! finite group `I(p)`, and the order of its `p`-Sylow subgroup. Each factor
//! is computed in closed form ([`bounds`], [`groups`]) and checked against
//! brute-force enumeration of small groups ([`oracle`]).

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod groups;
pub mod numberfield;
pub mod oracle;
