//! Eigenvarieties of combinatorial symmetric Z-tensors and of the adjacency,
//! Laplacian and signless Laplacian tensors of uniform hypergraphs.
//!
//! The eigenvectors at the least H-eigenvalue of a weakly irreducible
//! Z-tensor `A = sI − B` are finitely many. When `A` is combinatorial
//! symmetric they are `ω^φ ⊙ v_p`, where `v_p` is the Perron vector of `B` and
//! `φ` ranges over the kernel of the incidence matrix over `Z_m`. Their number
//! is `m^{n−1−r} ∏ d_i`, read from the Smith normal form of that matrix.
//!
//! ```
//! use eigvar::{gen_power, stabilizing_index, structured_tensor, SimpleGraph, TensorKind};
//!
//! let h = gen_power(&SimpleGraph::cycle(3).unwrap(), 4).unwrap();
//! let l = structured_tensor(&h, TensorKind::Laplacian);
//! assert_eq!(stabilizing_index(&l).unwrap(), 32u32.into());
//! ```

pub mod eigenvariety;
pub mod error;
pub mod hypergraph;
pub mod oracle;
pub mod perron;
pub mod smith;
pub mod tensor;

pub use eigenvariety::{
    gauge_member, least_eigenvariety, ps0, ps0_with_budget, quasi_hadamard, rho_eigenvariety,
    root_of_unity, stabilizing_index, zero_variety_signless, EigenOptions, EigenvarietyResult,
    ExponentVector, GaugeMatrix,
};
pub use error::{Error, Result};
pub use hypergraph::{
    classify, gen_complete, gen_power, parse_hypergraph, parse_simple_graph, ClassificationReport,
    Hypergraph, SimpleGraph,
};
pub use oracle::{kernel_scan, phase_scan, OracleMethod, OracleReport, Scan};
pub use perron::{cw_bounds, spectral_radius, PerronOptions, PerronResult};
pub use smith::{
    integer_snf, kernel_mod, snf_mod, solve_mod, IntMatrix, IntegerSmith, KernelDescription,
    SmithForm, Transforms,
};
pub use tensor::{structured_tensor, GenTensor, IncidenceMatrix, MClass, TensorKind, ZSplit};
