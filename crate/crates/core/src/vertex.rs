//! Crease states, vertex neighbourhoods and the odd/even 8-vertex labelling.
//!
//! A neighbourhood is packed into four bits `U D L R` (up is the high bit),
//! with a mountain crease stored as 1.

/// Fold direction of a single crease.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Crease {
    Mountain,
    Valley,
}

impl Crease {
    #[inline]
    pub fn bit(self) -> u8 {
        match self {
            Crease::Mountain => 1,
            Crease::Valley => 0,
        }
    }

    #[inline]
    pub fn from_bit(b: u8) -> Self {
        if b & 1 == 1 {
            Crease::Mountain
        } else {
            Crease::Valley
        }
    }

    #[inline]
    pub fn reversed(self) -> Self {
        match self {
            Crease::Mountain => Crease::Valley,
            Crease::Valley => Crease::Mountain,
        }
    }

    /// Solid for mountain, dashed for valley, as in the usual crease drawings.
    pub fn line_style(self) -> &'static str {
        match self {
            Crease::Mountain => "solid",
            Crease::Valley => "dashed",
        }
    }
}

/// The four creases meeting at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Neighborhood {
    pub up: Crease,
    pub down: Crease,
    pub left: Crease,
    pub right: Crease,
}

impl Neighborhood {
    pub fn new(up: Crease, down: Crease, left: Crease, right: Crease) -> Self {
        Neighborhood { up, down, left, right }
    }

    #[inline]
    pub fn bits(self) -> u8 {
        (self.up.bit() << 3) | (self.down.bit() << 2) | (self.left.bit() << 1) | self.right.bit()
    }

    #[inline]
    pub fn from_bits(b: u8) -> Self {
        Neighborhood {
            up: Crease::from_bit(b >> 3),
            down: Crease::from_bit(b >> 2),
            left: Crease::from_bit(b >> 1),
            right: Crease::from_bit(b),
        }
    }

    pub fn mountains(self) -> u32 {
        u32::from(self.bits()).count_ones()
    }

    /// All sixteen neighbourhoods in bit order.
    pub fn all() -> impl Iterator<Item = Neighborhood> {
        (0u8..16).map(Neighborhood::from_bits)
    }
}

/// Mountain parity of a vertex: odd vertices obey Maekawa's theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Odd,
    Even,
}

/// A vertex's label in the odd or even 8-vertex numbering (1..=8).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexClass {
    pub index: usize,
    pub parity: Parity,
}

/// Bits of odd configurations v1..v8.
pub const ODD_BITS: [u8; 8] = [0b0100, 0b1011, 0b1000, 0b0111, 0b0001, 0b1110, 0b0010, 0b1101];

/// Bits of even configurations ω1..ω8.
pub const EVEN_BITS: [u8; 8] = [0b0000, 0b1111, 0b1100, 0b0011, 0b0101, 0b1010, 0b0110, 0b1001];

const fn build_class_table() -> [(u8, bool); 16] {
    let mut t = [(0u8, false); 16];
    let mut i = 0;
    while i < 8 {
        t[ODD_BITS[i] as usize] = (i as u8 + 1, true);
        t[EVEN_BITS[i] as usize] = (i as u8 + 1, false);
        i += 1;
    }
    t
}

// bits -> (index, is_odd)
const CLASS_OF_BITS: [(u8, bool); 16] = build_class_table();

/// Labels a neighbourhood. Total and bijective on the sixteen neighbourhoods.
pub fn classify_vertex(n: Neighborhood) -> VertexClass {
    classify_bits(n.bits())
}

#[inline]
pub fn classify_bits(bits: u8) -> VertexClass {
    let (index, odd) = CLASS_OF_BITS[(bits & 15) as usize];
    VertexClass {
        index: index as usize,
        parity: if odd { Parity::Odd } else { Parity::Even },
    }
}

/// Neighbourhood of odd configuration `index` (1..=8).
pub fn odd_config(index: usize) -> Neighborhood {
    Neighborhood::from_bits(ODD_BITS[index - 1])
}

/// Neighbourhood of even configuration `index` (1..=8).
pub fn even_config(index: usize) -> Neighborhood {
    Neighborhood::from_bits(EVEN_BITS[index - 1])
}

/// Maekawa: mountain and valley counts differ by two.
pub fn maekawa_ok(n: Neighborhood) -> bool {
    let m = n.mountains();
    m == 1 || m == 3
}

/// The eight weights of the odd vertex configurations, stored 0-based;
/// use [`OddWeights::get`] for the 1-based labels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OddWeights(pub [f64; 8]);

impl OddWeights {
    pub const ZERO: OddWeights = OddWeights([0.0; 8]);
    pub const ONES: OddWeights = OddWeights([1.0; 8]);

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: f64) {
        self.0[i - 1] = value;
    }

    pub fn is_valid(&self) -> bool {
        self.0.iter().all(|w| w.is_finite() && *w >= 0.0)
    }

    /// v1·v2 + v3·v4 − v5·v6 − v7·v8.
    pub fn free_fermion_residual(&self) -> f64 {
        free_fermion_residual(self)
    }

    /// Free-fermion within relative tolerance, scaled by the largest product.
    pub fn is_free_fermion(&self, rel_tol: f64) -> bool {
        let v = &self.0;
        let scale = [v[0] * v[1], v[2] * v[3], v[4] * v[5], v[6] * v[7]]
            .iter()
            .fold(0.0f64, |a, b| a.max(libm::fabs(*b)));
        libm::fabs(self.free_fermion_residual()) <= rel_tol * scale.max(f64::MIN_POSITIVE)
    }

    /// Weight by neighbourhood bits, zero for even neighbourhoods.
    #[inline]
    pub fn by_bits(&self, bits: u8) -> f64 {
        let c = classify_bits(bits);
        match c.parity {
            Parity::Odd => self.0[c.index - 1],
            Parity::Even => 0.0,
        }
    }

    /// The same weights with every crease reversed: v1↔v2, v3↔v4, ...
    pub fn crease_reversed(&self) -> OddWeights {
        let v = self.0;
        OddWeights([v[1], v[0], v[3], v[2], v[5], v[4], v[7], v[6]])
    }

    /// The weights of the vertex seen after a half turn of the plane.
    pub fn rotated_half_turn(&self) -> OddWeights {
        let mut out = [0.0; 8];
        for (i, &b) in ODD_BITS.iter().enumerate() {
            let n = Neighborhood::from_bits(b);
            let r = Neighborhood::new(n.down, n.up, n.right, n.left);
            out[classify_vertex(r).index - 1] = self.0[i];
        }
        OddWeights(out)
    }
}

pub fn free_fermion_residual(w: &OddWeights) -> f64 {
    let v = &w.0;
    v[0] * v[1] + v[2] * v[3] - v[4] * v[5] - v[6] * v[7]
}

/// Weights ω1..ω8 of the even configurations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvenWeights(pub [f64; 8]);

impl EvenWeights {
    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.0[i - 1]
    }

    #[inline]
    pub fn by_bits(&self, bits: u8) -> f64 {
        let c = classify_bits(bits);
        match c.parity {
            Parity::Even => self.0[c.index - 1],
            Parity::Odd => 0.0,
        }
    }

    /// ω1ω2 + ω3ω4 − ω5ω6 − ω7ω8, the even free-fermion residual.
    pub fn free_fermion_residual(&self) -> f64 {
        let w = &self.0;
        w[0] * w[1] + w[2] * w[3] - w[4] * w[5] - w[6] * w[7]
    }
}
