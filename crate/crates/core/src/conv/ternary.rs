use std::fmt;

/// One symbol observed through an erasure channel.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
#[repr(u8)]
pub enum Ternary {
    Zero = 0,
    One = 1,
    #[default]
    Erased = 2,
}

impl Ternary {
    pub const ALL: [Ternary; 3] = [Ternary::Zero, Ternary::One, Ternary::Erased];

    #[inline]
    pub fn known(bit: u8) -> Self {
        if bit & 1 == 0 {
            Ternary::Zero
        } else {
            Ternary::One
        }
    }

    #[inline]
    pub fn is_erased(self) -> bool {
        self == Ternary::Erased
    }

    #[inline]
    pub fn bit(self) -> Option<u8> {
        match self {
            Ternary::Zero => Some(0),
            Ternary::One => Some(1),
            Ternary::Erased => None,
        }
    }

    /// True if a transmitted `bit` is compatible with this observation.
    #[inline]
    pub fn admits(self, bit: u8) -> bool {
        self == Ternary::Erased || self as u8 == bit
    }
}

/// Fixed-length sequence of erasure-channel observations.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TernarySeq(Vec<Ternary>);

impl TernarySeq {
    pub fn erased(len: usize) -> Self {
        Self(vec![Ternary::Erased; len])
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        Self(bits.iter().map(|&b| Ternary::known(b)).collect())
    }

    /// Observes `bits`, erasing position `i` where `erase[i]` is true.
    pub fn observe(bits: &[u8], erase: &[bool]) -> Self {
        assert_eq!(bits.len(), erase.len());
        Self(
            bits.iter()
                .zip(erase)
                .map(|(&b, &e)| if e { Ternary::Erased } else { Ternary::known(b) })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Ternary] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Ternary] {
        &mut self.0
    }

    pub fn count_erased(&self) -> usize {
        self.0.iter().filter(|t| t.is_erased()).count()
    }
}

impl From<Vec<Ternary>> for TernarySeq {
    fn from(v: Vec<Ternary>) -> Self {
        Self(v)
    }
}

impl std::ops::Index<usize> for TernarySeq {
    type Output = Ternary;
    fn index(&self, i: usize) -> &Ternary {
        &self.0[i]
    }
}

impl fmt::Debug for TernarySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self
            .0
            .iter()
            .map(|t| match t {
                Ternary::Zero => '0',
                Ternary::One => '1',
                Ternary::Erased => '?',
            })
            .collect();
        write!(f, "TernarySeq({s})")
    }
}
