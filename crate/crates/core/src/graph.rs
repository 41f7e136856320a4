//! Regular graphs with a permutation labeling of their directed edges.
//!
//! Labels are zero-based here: label `a` in `0..degree` corresponds to the one-based label `a + 1`.

use crate::error::{Result, WalkError};

/// A d-regular graph whose edges carry labels `0..d` such that, for each label,
/// `v -> neighbor(v, a)` is a permutation of the vertices.
pub trait LabeledGraph {
    fn vertex_count(&self) -> usize;

    fn degree(&self) -> usize;

    fn neighbor(&self, vertex: usize, label: usize) -> usize;

    /// Graph diameter when known; used to size the stopping window.
    fn diameter(&self) -> Option<usize> {
        None
    }

    /// Check that every label acts as a permutation and that the labeling respects the
    /// graph structure (no label maps a vertex to itself unless the graph has loops).
    fn validate_labeling(&self) -> Result<()> {
        let n = self.vertex_count();
        for a in 0..self.degree() {
            let mut hit = vec![false; n];
            for v in 0..n {
                let w = self.neighbor(v, a);
                if w >= n {
                    return Err(WalkError::Config(format!("label {a} maps vertex {v} outside the graph ({w})")));
                }
                if std::mem::replace(&mut hit[w], true) {
                    return Err(WalkError::Config(format!("label {a} is not a permutation: vertex {w} reached twice")));
                }
            }
        }
        Ok(())
    }
}

/// Explicit neighbor table; `table[v * degree + a] = neighbor(v, a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableGraph {
    vertex_count: usize,
    degree: usize,
    table: Vec<usize>,
    diameter: Option<usize>,
}

impl TableGraph {
    /// Builds the graph and checks the per-label permutation property.
    pub fn new(vertex_count: usize, degree: usize, table: Vec<usize>) -> Result<Self> {
        if vertex_count == 0 || degree == 0 {
            return Err(WalkError::Config("graph needs at least one vertex and one label".into()));
        }
        if table.len() != vertex_count * degree {
            return Err(WalkError::Config(format!(
                "neighbor table has {} entries, expected {}",
                table.len(),
                vertex_count * degree
            )));
        }
        let graph = Self { vertex_count, degree, table, diameter: None };
        graph.validate_labeling()?;
        Ok(graph)
    }

    pub fn from_fn(vertex_count: usize, degree: usize, neighbor: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let table =
            (0..vertex_count).flat_map(|v| (0..degree).map(move |a| (v, a))).map(|(v, a)| neighbor(v, a)).collect();
        Self::new(vertex_count, degree, table)
    }

    pub fn with_diameter(mut self, diameter: usize) -> Self {
        self.diameter = Some(diameter);
        self
    }
}

impl LabeledGraph for TableGraph {
    fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    fn neighbor(&self, vertex: usize, label: usize) -> usize {
        self.table[vertex * self.degree + label]
    }

    fn diameter(&self) -> Option<usize> {
        self.diameter
    }
}

/// The cycle Z_k as a Cayley graph with generators +1 (label 0, "R") and -1 (label 1, "L").
///
/// Vertex `j` stands for position `j + offset` on the integer line, so a cycle long enough
/// that no amplitude wraps around within the horizon reproduces the walk on the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleGraph {
    len: usize,
    offset: i64,
}

impl CycleGraph {
    pub fn new(len: usize) -> Result<Self> {
        Self::with_offset(len, 0)
    }

    pub fn with_offset(len: usize, offset: i64) -> Result<Self> {
        if len < 3 {
            return Err(WalkError::Config(format!("cycle needs at least 3 vertices, got {len}")));
        }
        Ok(Self { len, offset })
    }

    /// Vertex index of an integer position.
    pub fn vertex(&self, position: i64) -> usize {
        (position - self.offset).rem_euclid(self.len as i64) as usize
    }

    pub fn position(&self, vertex: usize) -> i64 {
        vertex as i64 + self.offset
    }
}

impl LabeledGraph for CycleGraph {
    fn vertex_count(&self) -> usize {
        self.len
    }

    fn degree(&self) -> usize {
        2
    }

    #[inline]
    fn neighbor(&self, vertex: usize, label: usize) -> usize {
        match label {
            0 => (vertex + 1) % self.len,
            _ => (vertex + self.len - 1) % self.len,
        }
    }

    fn diameter(&self) -> Option<usize> {
        Some(self.len / 2)
    }
}

/// Default cap on the hypercube dimension for full-space simulation.
pub const DEFAULT_MAX_HYPERCUBE_DIMENSION: u32 = 20;

/// The n-dimensional hypercube as the Cayley graph of Z_2^n.
///
/// Vertices are n-bit integers written most-significant bit first, so generator g_1 is
/// `(100..0)_2`; label `a` (zero-based) flips bit `n - 1 - a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypercubeGraph {
    dimension: u32,
}

impl HypercubeGraph {
    pub fn new(dimension: u32) -> Result<Self> {
        Self::with_cap(dimension, DEFAULT_MAX_HYPERCUBE_DIMENSION)
    }

    pub fn with_cap(dimension: u32, max_dimension: u32) -> Result<Self> {
        if dimension == 0 {
            return Err(WalkError::Domain("hypercube dimension must be at least 1".into()));
        }
        if dimension > max_dimension {
            return Err(WalkError::Resource(format!(
                "hypercube dimension {dimension} exceeds the configured cap {max_dimension} \
                 ({} amplitudes)",
                (dimension as u128) << dimension
            )));
        }
        Ok(Self { dimension })
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Bit mask of generator g_{label+1}.
    #[inline]
    pub fn generator(&self, label: usize) -> usize {
        1usize << (self.dimension as usize - 1 - label)
    }

    /// The vertex g_1 g_2 ... g_i: the first `distance` generators applied to the origin.
    pub fn vertex_at_distance(&self, distance: u32) -> usize {
        (0..distance as usize).fold(0, |v, a| v | self.generator(a))
    }
}

impl LabeledGraph for HypercubeGraph {
    fn vertex_count(&self) -> usize {
        1usize << self.dimension
    }

    fn degree(&self) -> usize {
        self.dimension as usize
    }

    #[inline]
    fn neighbor(&self, vertex: usize, label: usize) -> usize {
        vertex ^ self.generator(label)
    }

    fn diameter(&self) -> Option<usize> {
        Some(self.dimension as usize)
    }
}
