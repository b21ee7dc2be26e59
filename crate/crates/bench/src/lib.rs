//! Shared fixtures for the benchmarks.

use moldsched::generator::{gen_instance, ParModel, SeqModel, WorkloadSpec};
use moldsched::harness::Workload;
use moldsched::Instance;

pub const WORKLOADS: [Workload; 4] = Workload::DEFAULTS;

pub fn instance(w: Workload, n: usize, m: usize, seed: u64) -> Instance {
    gen_instance(&WorkloadSpec::new(n, m, w.seq, w.par, seed)).expect("valid workload")
}

pub fn mixed(n: usize, m: usize, seed: u64) -> Instance {
    instance(Workload::new(SeqModel::MixedGaussian, ParModel::MixedByClass), n, m, seed)
}
