/// Size caps for dense simulation and exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum `n_search + n_control` for a dense amplitude vector.
    pub max_qubits: usize,
    /// Maximum search-register width for exhaustive per-state tables.
    pub max_enumeration_bits: usize,
}

pub const DEFAULT_MAX_QUBITS: usize = 26;
pub const DEFAULT_MAX_ENUMERATION_BITS: usize = 24;

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_qubits: DEFAULT_MAX_QUBITS,
            max_enumeration_bits: DEFAULT_MAX_ENUMERATION_BITS,
        }
    }
}

impl Limits {
    pub fn with_max_qubits(mut self, max_qubits: usize) -> Self {
        self.max_qubits = max_qubits;
        self
    }

    pub(crate) fn check_state(&self, qubits: usize) -> crate::Result<()> {
        if qubits > self.max_qubits {
            return Err(crate::Error::StateTooLarge {
                requested: qubits,
                max: self.max_qubits,
            });
        }
        Ok(())
    }

    pub(crate) fn check_enumeration(&self, bits: usize) -> crate::Result<()> {
        if bits > self.max_enumeration_bits {
            return Err(crate::Error::EnumerationTooLarge {
                requested: bits,
                max: self.max_enumeration_bits,
            });
        }
        Ok(())
    }
}
