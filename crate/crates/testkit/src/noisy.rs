//! A simulator wrapper that corrupts sampled readout with a known
//! bit-flip channel, for exercising readout-error mitigation.

use std::collections::BTreeMap;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qframe_core::backend::{Accelerator, ExecError, QuantumBuffer, SimAccelerator};
use qframe_core::het::HetMap;
use qframe_core::ir::Composite;

/// Accelerator that runs the exact simulator, then flips each measured
/// bit of every shot independently: a recorded `0` becomes `1` with
/// probability `p01`, a recorded `1` becomes `0` with probability
/// `p10`. The true rates are reported through `properties()` so a
/// mitigation decorator can discover them.
pub struct NoisyReadout {
    inner: SimAccelerator,
    p01: f64,
    p10: f64,
    rng: Mutex<ChaCha8Rng>,
}

impl NoisyReadout {
    pub fn new(shots: u64, seed: u64, p01: f64, p10: f64) -> Self {
        assert!((0.0..1.0).contains(&p01) && (0.0..1.0).contains(&p10));
        let mut inner = SimAccelerator::with_shots(shots);
        inner.set_seed(seed);
        NoisyReadout {
            inner,
            p01,
            p10,
            rng: Mutex::new(ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x0f1e_2d3c))),
        }
    }
}

impl Accelerator for NoisyReadout {
    fn name(&self) -> &str {
        "noisy-readout"
    }

    fn execute(&self, buffer: &mut QuantumBuffer, program: &Composite) -> Result<(), ExecError> {
        self.inner.execute(buffer, program)?;
        if buffer.counts().is_empty() {
            return Ok(());
        }
        let clean = buffer.counts().clone();
        let mut rng = self.rng.lock().expect("rng lock");
        let mut noisy: BTreeMap<String, u64> = BTreeMap::new();
        for (bits, count) in clean {
            for _ in 0..count {
                let read: String = bits
                    .chars()
                    .map(|c| {
                        let flip = if c == '0' { self.p01 } else { self.p10 };
                        if rng.gen::<f64>() < flip {
                            if c == '0' {
                                '1'
                            } else {
                                '0'
                            }
                        } else {
                            c
                        }
                    })
                    .collect();
                *noisy.entry(read).or_insert(0) += 1;
            }
        }
        buffer.set_counts(noisy);
        Ok(())
    }

    fn properties(&self) -> HetMap {
        let mut props = HetMap::new();
        props.insert("p01", self.p01);
        props.insert("p10", self.p10);
        props
    }
}
