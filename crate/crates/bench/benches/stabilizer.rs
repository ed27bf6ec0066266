use criterion::{criterion_group, criterion_main, Criterion};
use niho::equiv;
use niho::gfun::GFamily;
use niho_bench::{field, zero_free_g};

fn stabilizers(c: &mut Criterion) {
    let mut group = c.benchmark_group("stabilizer");
    group.sample_size(10);
    let k4 = field(4);
    let h = zero_free_g(&k4, GFamily::LunelliSce).hyperoval(&k4);
    group.bench_function("lunelli-sce m=4", |b| b.iter(|| equiv::stabilizer(k4.base(), &h).unwrap()));
    let k5 = field(5);
    for fam in [GFamily::Cherowitzo, GFamily::Hyperconic] {
        let h = zero_free_g(&k5, fam.clone()).hyperoval(&k5);
        group.bench_function(format!("{fam} m=5"), |b| b.iter(|| equiv::stabilizer(k5.base(), &h).unwrap()));
    }
    let g = zero_free_g(&k5, GFamily::Payne);
    group.bench_function("classify payne m=5", |b| b.iter(|| equiv::classify_bent(&k5, &g).unwrap()));
    group.finish();
}

criterion_group!(benches, stabilizers);
criterion_main!(benches);
