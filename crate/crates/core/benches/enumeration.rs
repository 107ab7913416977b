use criterion::{criterion_group, criterion_main, Criterion};

use degform_core::enumeration::{enumerate_triples_with_mode, EnumerationRequest, ExecMode};
use degform_core::geometry::BlowupGeometry;
use degform_core::lattice::LatticeVector;

fn request(geom: &BlowupGeometry, g: i64, k: usize, beta: i64, c: i64) -> EnumerationRequest {
    let amp = geom.ample_from_scalar(c).unwrap();
    EnumerationRequest::class_mode(g, k, LatticeVector::new(vec![beta]).unwrap(), amp).unwrap()
}

fn bench_modes(c: &mut Criterion) {
    let geom = BlowupGeometry::preset("p2-point").unwrap();
    let mut group = c.benchmark_group("enumerate_triples");
    for (g, k, beta) in [(1i64, 1usize, 2i64), (2, 2, 3)] {
        let req = request(&geom, g, k, beta, 2);
        group.bench_function(format!("sequential/g{g}_k{k}_b{beta}"), |b| {
            b.iter(|| enumerate_triples_with_mode(&req, &geom, ExecMode::Sequential).unwrap())
        });
        group.bench_function(format!("parallel/g{g}_k{k}_b{beta}"), |b| {
            b.iter(|| enumerate_triples_with_mode(&req, &geom, ExecMode::Parallel).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_modes);
criterion_main!(benches);
