//! Quantum memory buffers: allocation, measurement counts, metadata,
//! and derived expectation values.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::ExecError;
use crate::het::{HetMap, HetValue};

/// Allocate a register of `size` qubits.
pub fn qalloc(size: usize) -> Result<QuantumBuffer, ExecError> {
    QuantumBuffer::new(size)
}

/// A register of qubits plus everything an execution left behind:
/// bitstring counts, backend metadata, and child buffers from batched
/// runs.
///
/// Bitstrings cover the full register, leftmost character = qubit 0.
/// Executing a program into a buffer replaces the previous counts and
/// result metadata, so one buffer can be reused across a parameter
/// sweep; user-supplied metadata keys survive.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuantumBuffer {
    size: usize,
    counts: BTreeMap<String, u64>,
    metadata: HetMap,
    children: Vec<(String, QuantumBuffer)>,
}

impl QuantumBuffer {
    pub fn new(size: usize) -> Result<Self, ExecError> {
        if size == 0 {
            return Err(ExecError::InvalidSize);
        }
        Ok(QuantumBuffer {
            size,
            counts: BTreeMap::new(),
            metadata: HetMap::new(),
            children: Vec::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn total_shots(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Record `n` further observations of `bitstring`.
    pub fn add_count(&mut self, bitstring: &str, n: u64) {
        *self.counts.entry(bitstring.to_string()).or_insert(0) += n;
    }

    pub fn set_counts(&mut self, counts: BTreeMap<String, u64>) {
        self.counts = counts;
    }

    pub fn metadata(&self) -> &HetMap {
        &self.metadata
    }

    pub fn metadata_mut(&mut self) -> &mut HetMap {
        &mut self.metadata
    }

    pub fn append_child(&mut self, label: &str, child: QuantumBuffer) {
        self.children.push((label.to_string(), child));
    }

    pub fn children(&self) -> &[(String, QuantumBuffer)] {
        &self.children
    }

    pub fn children_mut(&mut self) -> &mut [(String, QuantumBuffer)] {
        &mut self.children
    }

    /// First child appended under `label`, if any.
    pub fn child(&self, label: &str) -> Option<&QuantumBuffer> {
        self.children
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, b)| b)
    }

    /// Drop all counts, result metadata, and children, keeping the size.
    pub fn reset(&mut self) {
        self.counts.clear();
        self.metadata = HetMap::new();
        self.children.clear();
    }

    /// Qubits whose outcomes the counts describe: the `measured-bits`
    /// metadata when an execution recorded it, otherwise every qubit.
    pub fn measured_bits(&self) -> Vec<usize> {
        match self.metadata.get_int_list("measured-bits") {
            Ok(bits) => bits.iter().map(|&b| b as usize).collect(),
            Err(_) => (0..self.size).collect(),
        }
    }

    /// ⟨Z…Z⟩ over the measured qubits.
    ///
    /// Sampled runs average the parity `(-1)^(number of 1s)` of each
    /// observed bitstring, restricted to the measured qubits. Exact
    /// runs stored the value directly under the `exp-val-z` metadata
    /// key. A buffer with neither is an error.
    pub fn expectation_value_z(&self) -> Result<f64, ExecError> {
        if !self.counts.is_empty() {
            let bits = self.measured_bits();
            let mut acc = 0.0;
            let mut total = 0u64;
            for (bitstring, &n) in &self.counts {
                let ones = bitstring
                    .bytes()
                    .enumerate()
                    .filter(|(i, b)| bits.contains(i) && *b == b'1')
                    .count();
                let parity = if ones % 2 == 0 { 1.0 } else { -1.0 };
                acc += parity * n as f64;
                total += n;
            }
            if total == 0 {
                return Err(ExecError::EmptyBuffer);
            }
            return Ok(acc / total as f64);
        }
        if let Ok(v) = self.metadata.get_real("exp-val-z") {
            return Ok(v);
        }
        Err(ExecError::EmptyBuffer)
    }

    /// Observed probability of each bitstring, empty if no counts.
    pub fn probabilities(&self) -> BTreeMap<String, f64> {
        let total = self.total_shots();
        if total == 0 {
            return BTreeMap::new();
        }
        self.counts
            .iter()
            .map(|(k, &v)| (k.clone(), v as f64 / total as f64))
            .collect()
    }

    /// Probability that qubit `q` was observed as `1`.
    pub fn marginal_one(&self, q: usize) -> Result<f64, ExecError> {
        let total = self.total_shots();
        if total == 0 {
            return Err(ExecError::EmptyBuffer);
        }
        let mut ones = 0u64;
        for (bitstring, &n) in &self.counts {
            if bitstring.as_bytes().get(q) == Some(&b'1') {
                ones += n;
            }
        }
        Ok(ones as f64 / total as f64)
    }
}

/// Render amplitude index `k` of an `n`-qubit register as a bitstring,
/// leftmost character = qubit 0.
pub(crate) fn index_to_bitstring(k: usize, n: usize) -> String {
    let mut s = String::with_capacity(n);
    for q in 0..n {
        let bit = (k >> (n - 1 - q)) & 1;
        s.push(if bit == 1 { '1' } else { '0' });
    }
    s
}

impl QuantumBuffer {
    /// Store a value under a metadata key (convenience wrapper).
    pub fn set_metadata(&mut self, key: &str, value: impl Into<HetValue>) {
        self.metadata.insert(key, value);
    }
}
