//! Agent networks and combination weights.
//!
//! Neighbourhoods always contain the node itself, so the adjacency matrix has
//! a true diagonal. Random generators redraw until the graph is connected.
//!
//! Edge-list text format, used by the `topology` subcommand:
//!
//! ```text
//! N 4
//! coord 0 0.12 0.93
//! ...
//! 0 1
//! 1 3
//! ```
//!
//! The header comes first. `coord` lines are present only for radius graphs.
//! Each edge is listed once as `l n` with `l < n`. Self-loops are implicit.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::{substream, Purpose};

pub const DEFAULT_MAX_RETRIES: usize = 1000;
pub const DEFAULT_AREA: f64 = 1.0;

/// Knobs shared by the random generators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorOptions {
    /// Number of draws attempted before giving up on connectivity.
    pub max_retries: usize,
    /// Side length of the square nodes are placed in (radius rule).
    pub area: f64,
}

impl Default for GeneratorOptions {
    fn default() -> Self {
        Self {
            max_retries: DEFAULT_MAX_RETRIES,
            area: DEFAULT_AREA,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NetworkTopology {
    node_count: usize,
    adjacency: Vec<bool>,
    coordinates: Option<Vec<[f64; 2]>>,
}

impl NetworkTopology {
    /// Builds a topology from an undirected edge list. Self-loops are added;
    /// connectivity is not required.
    pub fn from_edges(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::invalid("node_count", "must be at least 1"));
        }
        let mut adjacency = vec![false; node_count * node_count];
        for n in 0..node_count {
            adjacency[n * node_count + n] = true;
        }
        for &(l, n) in edges {
            if l >= node_count || n >= node_count {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({l}, {n}) outside 0..{node_count}"),
                ));
            }
            adjacency[l * node_count + n] = true;
            adjacency[n * node_count + l] = true;
        }
        Ok(Self {
            node_count,
            adjacency,
            coordinates: None,
        })
    }

    pub fn with_coordinates(mut self, coordinates: Vec<[f64; 2]>) -> Result<Self> {
        if coordinates.len() != self.node_count {
            return Err(Error::DimensionMismatch {
                expected: self.node_count,
                actual: coordinates.len(),
            });
        }
        self.coordinates = Some(coordinates);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn coordinates(&self) -> Option<&[[f64; 2]]> {
        self.coordinates.as_deref()
    }

    pub fn is_neighbor(&self, l: usize, n: usize) -> bool {
        self.adjacency[l * self.node_count + n]
    }

    /// Members of `N_n`, including `n`, in ascending order.
    pub fn neighbors(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adjacency[n * self.node_count..(n + 1) * self.node_count];
        row.iter()
            .enumerate()
            .filter_map(|(l, &linked)| linked.then_some(l))
    }

    /// `|N_n|`, counting the node itself.
    pub fn degree(&self, n: usize) -> usize {
        self.neighbors(n).count()
    }

    /// Undirected edges `(l, n)` with `l < n`, in row-major order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for l in 0..self.node_count {
            for n in l + 1..self.node_count {
                if self.is_neighbor(l, n) {
                    out.push((l, n));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(n) = queue.pop_front() {
            for l in self.neighbors(n) {
                if !seen[l] {
                    seen[l] = true;
                    reached += 1;
                    queue.push_back(l);
                }
            }
        }
        reached == self.node_count
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("N {}\n", self.node_count);
        if let Some(coords) = &self.coordinates {
            for (n, [x, y]) in coords.iter().enumerate() {
                writeln!(out, "coord {n} {x} {y}").expect("write to String");
            }
        }
        for (l, n) in self.edges() {
            writeln!(out, "{l} {n}").expect("write to String");
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let bad = |line: usize, what: &str| Error::Malformed(format!("edge list line {line}: {what}"));
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (first, header) = lines.next().ok_or_else(|| bad(1, "missing `N <count>` header"))?;
        let node_count = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["N", count] => count.parse::<usize>().map_err(|_| bad(first, "bad node count"))?,
            _ => return Err(bad(first, "expected `N <count>` header")),
        };

        let mut edges = Vec::new();
        let mut coords: Vec<Option<[f64; 2]>> = vec![None; node_count];
        let mut any_coord = false;
        for (lineno, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields[..] {
                ["coord", n, x, y] => {
                    let n: usize = n.parse().map_err(|_| bad(lineno, "bad node index"))?;
                    let x: f64 = x.parse().map_err(|_| bad(lineno, "bad x coordinate"))?;
                    let y: f64 = y.parse().map_err(|_| bad(lineno, "bad y coordinate"))?;
                    let slot = coords
                        .get_mut(n)
                        .ok_or_else(|| bad(lineno, "node index out of range"))?;
                    *slot = Some([x, y]);
                    any_coord = true;
                }
                [l, n] => {
                    let l: usize = l.parse().map_err(|_| bad(lineno, "bad node index"))?;
                    let n: usize = n.parse().map_err(|_| bad(lineno, "bad node index"))?;
                    edges.push((l, n));
                }
                _ => return Err(bad(lineno, "expected `l n` or `coord n x y`")),
            }
        }

        let topology = Self::from_edges(node_count, &edges)?;
        if any_coord {
            let coords = coords
                .into_iter()
                .enumerate()
                .map(|(n, c)| c.ok_or_else(|| Error::Malformed(format!("missing coord for node {n}"))))
                .collect::<Result<Vec<_>>>()?;
            topology.with_coordinates(coords)
        } else {
            Ok(topology)
        }
    }
}

fn check_node_count(node_count: usize) -> Result<()> {
    if node_count < 2 {
        return Err(Error::invalid("node_count", "must be at least 2"));
    }
    Ok(())
}

fn check_options(options: &GeneratorOptions) -> Result<()> {
    if options.max_retries == 0 {
        return Err(Error::invalid("max_retries", "must be at least 1"));
    }
    if !(options.area.is_finite() && options.area > 0.0) {
        return Err(Error::invalid("area", "must be positive and finite"));
    }
    Ok(())
}

pub fn build_probability_graph(node_count: usize, edge_probability: f64, seed: u64) -> Result<NetworkTopology> {
    build_probability_graph_with(node_count, edge_probability, seed, &GeneratorOptions::default())
}

/// Erdős–Rényi draw. Attempt `k` uses the stream `(seed, Topology, k, 0, 0)`
/// and visits pairs `l < n` in row-major order, linking when a uniform draw
/// on `[0, 1)` falls below `edge_probability`.
pub fn build_probability_graph_with(
    node_count: usize,
    edge_probability: f64,
    seed: u64,
    options: &GeneratorOptions,
) -> Result<NetworkTopology> {
    check_node_count(node_count)?;
    check_options(options)?;
    if !(0.0..=1.0).contains(&edge_probability) {
        return Err(Error::invalid("edge_probability", "must lie in [0, 1]"));
    }
    for attempt in 0..options.max_retries {
        let mut rng = substream(seed, Purpose::Topology, attempt as u64, 0, 0);
        let mut edges = Vec::new();
        for l in 0..node_count {
            for n in l + 1..node_count {
                if rng.random::<f64>() < edge_probability {
                    edges.push((l, n));
                }
            }
        }
        let topology = NetworkTopology::from_edges(node_count, &edges)?;
        if topology.is_connected() {
            return Ok(topology);
        }
    }
    Err(Error::Disconnected {
        attempts: options.max_retries,
    })
}

pub fn build_radius_graph(node_count: usize, radius: f64, seed: u64) -> Result<NetworkTopology> {
    build_radius_graph_with(node_count, radius, seed, &GeneratorOptions::default())
}

/// Random geometric graph: nodes uniform in `[0, area]²`, linked iff their
/// Euclidean distance is at most `radius`.
pub fn build_radius_graph_with(
    node_count: usize,
    radius: f64,
    seed: u64,
    options: &GeneratorOptions,
) -> Result<NetworkTopology> {
    check_node_count(node_count)?;
    check_options(options)?;
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::invalid("radius", "must be positive and finite"));
    }
    for attempt in 0..options.max_retries {
        let mut rng = substream(seed, Purpose::Topology, attempt as u64, 0, 0);
        let coords: Vec<[f64; 2]> = (0..node_count)
            .map(|_| {
                let x = rng.random::<f64>() * options.area;
                let y = rng.random::<f64>() * options.area;
                [x, y]
            })
            .collect();
        let mut edges = Vec::new();
        for l in 0..node_count {
            for n in l + 1..node_count {
                if distance(coords[l], coords[n]) <= radius {
                    edges.push((l, n));
                }
            }
        }
        let topology = NetworkTopology::from_edges(node_count, &edges)?;
        if topology.is_connected() {
            return topology.with_coordinates(coords);
        }
    }
    Err(Error::Disconnected {
        attempts: options.max_retries,
    })
}

pub fn distance(p: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// Nonnegative weights `c_{l,n}` mixing neighbour intermediates into node `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinationMatrix {
    node_count: usize,
    /// Entry `(l, n)` at `l * node_count + n`.
    weights: Vec<f64>,
    /// Nonzero `(l, c_{l,n})` per column `n`.
    columns: Vec<Vec<(usize, f64)>>,
}

impl CombinationMatrix {
    /// Builds from a dense row-major `N×N` matrix, checking nonnegativity and
    /// that each column sums to one.
    pub fn from_dense(node_count: usize, weights: Vec<f64>) -> Result<Self> {
        crate::error::check_len(node_count * node_count, weights.len())?;
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::invalid("weights", "entries must be finite and nonnegative"));
        }
        let columns: Vec<Vec<(usize, f64)>> = (0..node_count)
            .map(|n| {
                (0..node_count)
                    .filter_map(|l| {
                        let c = weights[l * node_count + n];
                        (c > 0.0).then_some((l, c))
                    })
                    .collect()
            })
            .collect();
        for (n, col) in columns.iter().enumerate() {
            let sum: f64 = col.iter().map(|(_, c)| c).sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::invalid("weights", format!("column {n} sums to {sum}, not 1")));
            }
        }
        Ok(Self {
            node_count,
            weights,
            columns,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn weight(&self, l: usize, n: usize) -> f64 {
        self.weights[l * self.node_count + n]
    }

    /// Nonzero `(l, c_{l,n})` pairs feeding node `n`.
    pub fn column(&self, n: usize) -> &[(usize, f64)] {
        &self.columns[n]
    }

    pub fn column_sum(&self, n: usize) -> f64 {
        (0..self.node_count).map(|l| self.weight(l, n)).sum()
    }
}

/// Uniform rule: `c_{l,n} = 1/|N_n|` for `l ∈ N_n`.
pub fn uniform_combination(topology: &NetworkTopology) -> CombinationMatrix {
    let n_nodes = topology.node_count();
    let mut weights = vec![0.0; n_nodes * n_nodes];
    let mut columns = Vec::with_capacity(n_nodes);
    for n in 0..n_nodes {
        let members: Vec<usize> = topology.neighbors(n).collect();
        let c = 1.0 / members.len() as f64;
        for &l in &members {
            weights[l * n_nodes + n] = c;
        }
        columns.push(members.into_iter().map(|l| (l, c)).collect());
    }
    CombinationMatrix {
        node_count: n_nodes,
        weights,
        columns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_probability_gives_complete_graph() {
        for seed in 0..5 {
            let t = build_probability_graph(5, 1.0, seed).unwrap();
            for n in 0..5 {
                assert_eq!(t.degree(n), 5);
            }
        }
    }

    #[test]
    fn zero_probability_cannot_connect() {
        let err = build_probability_graph(2, 0.0, 1).unwrap_err();
        assert!(matches!(err, Error::Disconnected { attempts: 1000 }));
    }

    #[test]
    fn probability_out_of_range_is_rejected() {
        assert!(matches!(
            build_probability_graph(5, 1.5, 1),
            Err(Error::InvalidParameter { field: "edge_probability", .. })
        ));
        assert!(build_probability_graph(5, f64::NAN, 1).is_err());
        assert!(build_probability_graph(1, 0.5, 1).is_err());
    }

    #[test]
    fn large_radius_gives_complete_graph() {
        let t = build_radius_graph(4, 2.0, 9).unwrap();
        assert_eq!(t.edges().len(), 6);
        assert_eq!(t.coordinates().unwrap().len(), 4);
    }

    #[test]
    fn tiny_radius_exhausts_retries() {
        let opts = GeneratorOptions {
            max_retries: 50,
            ..Default::default()
        };
        assert!(matches!(
            build_radius_graph_with(2, 1e-9, 3, &opts),
            Err(Error::Disconnected { attempts: 50 })
        ));
        assert!(matches!(build_radius_graph(2, 1e-9, 3), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn uniform_weights_follow_degree() {
        // path 0-1-2-3 plus 1-3: node 1 has N_1 = {0,1,2,3}
        let t = NetworkTopology::from_edges(4, &[(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        let c = uniform_combination(&t);
        for l in 0..4 {
            assert_eq!(c.weight(l, 1), 0.25);
        }
        assert_eq!(c.weight(0, 0), 0.5);
        assert_eq!(c.weight(2, 0), 0.0);
    }

    #[test]
    fn complete_three_node_weights_are_thirds() {
        let t = NetworkTopology::from_edges(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        let c = uniform_combination(&t);
        for l in 0..3 {
            for n in 0..3 {
                assert_eq!(c.weight(l, n), 1.0 / 3.0);
            }
        }
    }

    #[test]
    fn isolated_node_keeps_its_own_estimate() {
        let t = NetworkTopology::from_edges(3, &[(0, 1)]).unwrap();
        assert!(!t.is_connected());
        let c = uniform_combination(&t);
        assert_eq!(c.weight(2, 2), 1.0);
        assert_eq!(c.column(2), &[(2, 1.0)]);
    }

    #[test]
    fn dense_matrix_must_be_column_stochastic() {
        assert!(CombinationMatrix::from_dense(2, vec![0.5, 0.5, 0.5, 0.5]).is_ok());
        assert!(CombinationMatrix::from_dense(2, vec![0.5, 0.5, 0.4, 0.5]).is_err());
        assert!(CombinationMatrix::from_dense(2, vec![1.5, 0.0, -0.5, 1.0]).is_err());
    }

    #[test]
    fn edge_list_round_trips_with_coordinates() {
        let t = build_radius_graph(12, 0.4, 5).unwrap();
        let text = t.to_edge_list();
        assert!(text.starts_with("N 12\ncoord 0 "));
        assert_eq!(NetworkTopology::parse_edge_list(&text).unwrap(), t);
    }

    #[test]
    fn edge_list_rejects_garbage() {
        assert!(NetworkTopology::parse_edge_list("").is_err());
        assert!(NetworkTopology::parse_edge_list("N x\n").is_err());
        assert!(NetworkTopology::parse_edge_list("N 3\n0 1 2 3\n").is_err());
        assert!(NetworkTopology::parse_edge_list("N 3\n0 5\n").is_err());
    }
}
