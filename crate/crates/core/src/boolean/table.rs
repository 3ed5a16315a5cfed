use std::fmt;

/// Dense truth table over `arity` variables.
///
/// Entry `k` holds `f(x)` where `x_1` is the most significant bit of `k`,
/// i.e. variable `i` (0-based) sits at bit `arity - 1 - i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn zeros(arity: usize) -> Self {
        let len = 1usize << arity;
        TruthTable { arity, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_fn(arity: usize, mut f: impl FnMut(u64) -> bool) -> Self {
        let mut table = TruthTable::zeros(arity);
        for index in 0..table.len() as u64 {
            if f(index) {
                table.set(index, true);
            }
        }
        table
    }

    /// Builds a table from `0`/`1` values in lexicographic input order.
    pub fn from_bits(arity: usize, bits: &[bool]) -> Option<Self> {
        if bits.len() != 1usize << arity {
            return None;
        }
        Some(TruthTable::from_fn(arity, |i| bits[i as usize]))
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.arity
    }

    #[inline]
    pub fn len(&self) -> usize {
        1usize << self.arity
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, index: u64) -> bool {
        (self.words[(index / 64) as usize] >> (index % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: u64, value: bool) {
        let word = &mut self.words[(index / 64) as usize];
        let mask = 1u64 << (index % 64);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    pub fn count_ones(&self) -> u64 {
        // bits past `len()` are never set
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// `Some(b)` when every entry equals `b`.
    pub fn constant_value(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            c if c == self.len() as u64 => Some(true),
            _ => None,
        }
    }

    /// Table of the function with variable `var` (0-based) fixed to `value`.
    /// The remaining variables keep their relative order.
    pub fn restrict(&self, var: usize, value: bool) -> TruthTable {
        assert!(var < self.arity, "variable {var} out of range");
        let pos = self.arity - 1 - var;
        let low_mask = (1u64 << pos) - 1;
        let fixed = (value as u64) << pos;
        TruthTable::from_fn(self.arity - 1, |j| {
            let old = ((j & !low_mask) << 1) | fixed | (j & low_mask);
            self.get(old)
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len() as u64).map(move |i| self.get(i))
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, ", self.arity)?;
        if self.arity <= 8 {
            for bit in self.iter() {
                f.write_str(if bit { "1" } else { "0" })?;
            }
        } else {
            write!(f, "{} ones", self.count_ones())?;
        }
        f.write_str(")")
    }
}
