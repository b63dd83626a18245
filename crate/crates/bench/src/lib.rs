//! Shared fixtures for the benchmarks.

use blockvqe::classical_sector::compute_factors;
use blockvqe::vqe::HubbardOperators;
use blockvqe::{AnsatzSpec, ClassicalFactors, EncodingKind, HubbardParams};

/// Half-filled ring with the compact register, depth-2 ansatz plus the
/// closing layer.
pub struct HubbardFixture {
    pub params: HubbardParams,
    pub factors: ClassicalFactors,
    pub ops: HubbardOperators,
    pub spec: AnsatzSpec,
}

impl HubbardFixture {
    pub fn new(sites: usize, onsite: f64, kind: EncodingKind) -> Self {
        let params = HubbardParams::half_filled(sites, -1.0, onsite);
        let factors = compute_factors(&params).expect("valid parameters");
        let ops = HubbardOperators::build(&params, kind, kind == EncodingKind::Compact, None).expect("encodable");
        let spec = AnsatzSpec::linear(ops.qubits, 2).with_closing_layer(true);
        Self {
            params,
            factors,
            ops,
            spec,
        }
    }
}
