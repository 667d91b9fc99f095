//! Fixed workloads shared by the benchmarks.

use eigvar::{gen_complete, gen_power, Hypergraph, SimpleGraph};

/// Power hypergraph of the cycle `C_n` with edges of size `m`.
pub fn cycle_power(n: usize, m: usize) -> Hypergraph {
    gen_power(&SimpleGraph::cycle(n).expect("n >= 3"), m).expect("even m >= 4")
}

/// A sunflower-like 3-graph with uneven degrees, so the power iteration
/// does not converge in one step.
pub fn irregular(petals: usize) -> Hypergraph {
    let edges = (0..petals)
        .map(|i| vec![0, 2 * i + 1, 2 * i + 2])
        .chain([vec![1, 3, 5]]);
    Hypergraph::new(2 * petals + 1, 3, edges.collect()).expect("valid edges")
}

/// Named instances, smallest first.
pub fn workloads() -> Vec<(&'static str, Hypergraph)> {
    vec![
        ("C3^{4,2}", cycle_power(3, 4)),
        ("K7^[3]", gen_complete(7, 3).expect("n > m")),
        ("C5^{4,2}", cycle_power(5, 4)),
        ("sunflower8", irregular(8)),
    ]
}
