//! Sequential vs parallel batch execution of the two hot loops: oracle
//! calls of one attack and independent CVP solves.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::Rng;

use ntru_vfk::attack::AttackInstance;
use ntru_vfk::cvp::cvp_vfk;
use ntru_vfk::registry::Registry;
use ntru_vfk::seed;
use ntru_vfk::vfk::VfkLattice;
use ntru_vfk::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn attack_calls(c: &mut Criterion) {
    let reg = Registry::builtin();
    let set = reg.get("ntruhps2048509").expect("registered");
    let inst = AttackInstance::generate(*set.scheme().expect("hps"), *set.lattice(), 1)
        .expect("instance");
    let mut group = c.benchmark_group("attack_16_calls_R26");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| inst.run_attack(26, 16, 7, exec).expect("attack"))
        });
    }
    group.finish();
}

fn cvp_batch(c: &mut Criterion) {
    let lat = VfkLattice::build(677, 70, 10, 6).expect("lattice");
    let mut rng = seed::rng(3);
    let targets: Vec<Vec<i64>> = (0..16)
        .map(|_| {
            let mut y: Vec<i64> = (0..677).map(|_| rng.gen_range(0..=1)).collect();
            y.extend((0..677).map(|_| rng.gen_range(-1000..=1000)));
            y
        })
        .collect();
    let mut group = c.benchmark_group("cvp_16_targets_N677");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| exec.map(targets.len(), |i| cvp_vfk(&lat, &targets[i]).expect("cvp")))
        });
    }
    group.finish();
}

criterion_group!(benches, attack_calls, cvp_batch);
criterion_main!(benches);
