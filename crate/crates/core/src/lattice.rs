//! Toroidal M×N square lattices. Rows are indexed by `y` (bottom to top),
//! columns by `x` (left to right). Each vertex owns its right and up edges:
//! edge `2(yN+x)` is R(x,y) and edge `2(yN+x)+1` is U(x,y).

use alloc::vec;
use alloc::vec::Vec;

use crate::vertex::{Crease, Neighborhood};

/// Torus of `m` rows and `n` columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    pub m: usize,
    pub n: usize,
}

impl Shape {
    pub fn new(m: usize, n: usize) -> Self {
        assert!(m >= 1 && n >= 1, "torus needs at least one row and column");
        Shape { m, n }
    }

    #[inline]
    pub fn sites(&self) -> usize {
        self.m * self.n
    }

    #[inline]
    pub fn edges(&self) -> usize {
        2 * self.m * self.n
    }

    #[inline]
    pub fn site(&self, x: usize, y: usize) -> usize {
        y * self.n + x
    }

    #[inline]
    pub fn right_edge(&self, x: usize, y: usize) -> usize {
        2 * self.site(x, y)
    }

    #[inline]
    pub fn up_edge(&self, x: usize, y: usize) -> usize {
        2 * self.site(x, y) + 1
    }

    #[inline]
    pub fn left_edge(&self, x: usize, y: usize) -> usize {
        self.right_edge((x + self.n - 1) % self.n, y)
    }

    #[inline]
    pub fn down_edge(&self, x: usize, y: usize) -> usize {
        self.up_edge(x, (y + self.m - 1) % self.m)
    }

    /// Edge indices around (x, y) in U, D, L, R order.
    #[inline]
    pub fn star(&self, x: usize, y: usize) -> [usize; 4] {
        [self.up_edge(x, y), self.down_edge(x, y), self.left_edge(x, y), self.right_edge(x, y)]
    }
}

/// A mountain/valley assignment of every edge of a torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusConfig {
    pub shape: Shape,
    pub edges: Vec<Crease>,
}

impl TorusConfig {
    pub fn uniform(shape: Shape, c: Crease) -> Self {
        TorusConfig { shape, edges: vec![c; shape.edges()] }
    }

    pub fn from_bits(shape: Shape, bits: &[u8]) -> Self {
        assert_eq!(bits.len(), shape.edges());
        TorusConfig { shape, edges: bits.iter().map(|&b| Crease::from_bit(b)).collect() }
    }

    pub fn bits(&self) -> Vec<u8> {
        self.edges.iter().map(|c| c.bit()).collect()
    }

    pub fn neighborhood(&self, x: usize, y: usize) -> Neighborhood {
        let [u, d, l, r] = self.shape.star(x, y);
        Neighborhood::new(self.edges[u], self.edges[d], self.edges[l], self.edges[r])
    }

    /// Number of edges where `self` and `other` differ.
    pub fn distance(&self, other: &TorusConfig) -> usize {
        self.edges.iter().zip(&other.edges).filter(|(a, b)| a != b).count()
    }

    pub fn reversed(&self) -> TorusConfig {
        TorusConfig { shape: self.shape, edges: self.edges.iter().map(|c| c.reversed()).collect() }
    }

    /// Reverse the four creases bounding face (x, y), the face whose lower-left corner is
    /// vertex (x, y).
    pub fn flip_face(&mut self, x: usize, y: usize) {
        let s = self.shape;
        for e in [
            s.right_edge(x, y),
            s.up_edge(x, y),
            s.up_edge((x + 1) % s.n, y),
            s.right_edge(x, (y + 1) % s.m),
        ] {
            self.edges[e] = self.edges[e].reversed();
        }
    }
}
