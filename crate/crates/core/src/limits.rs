/// Size caps for the exponential parts of the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest custom graph handed to the backtracking automorphism search.
    pub automorphism_n: usize,
    /// Automorphism groups larger than this are refused.
    pub max_group_order: usize,
    /// Largest matrix dimension for characteristic polynomials.
    pub char_poly_n: usize,
    /// Largest vertex count for driver-set enumeration.
    pub enumeration_n: usize,
    /// Largest subset size tried by driver-set enumeration.
    pub enumeration_k: usize,
    /// Largest vertex count for the zero forcing number search.
    pub zero_forcing_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            automorphism_n: 12,
            max_group_order: 100_000,
            char_poly_n: 24,
            enumeration_n: 14,
            enumeration_k: 4,
            zero_forcing_n: 14,
        }
    }
}

impl Limits {
    /// Raise the enumeration caps (driver sets and zero forcing) to `n`.
    pub fn with_enumeration_cap(mut self, n: usize) -> Self {
        self.enumeration_n = n;
        self.zero_forcing_n = n;
        self
    }
}
