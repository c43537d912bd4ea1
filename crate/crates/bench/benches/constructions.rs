use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use qalph_core::bimorphism::{nonclosure_witness, qaln};
use qalph_core::random;
use qalph_core::{Bimorphism, Cfg, Fta, Transducer};

fn enumeration(c: &mut Criterion) {
    let mut rng = random::rng(1);
    let b = random::qa_bimorphism(&mut rng, 3);
    let center = b.center().clone();
    c.bench_function("fta_enumerate_h4", |bench| bench.iter(|| center.enumerate(4)));
    c.bench_function("bim_relation_h4", |bench| bench.iter(|| b.relation(4)));
}

fn automata(c: &mut Criterion) {
    let mut rng = random::rng(2);
    let sig = random::source_signature(&mut rng);
    let (a, b) = (random::fta(&mut rng, &sig, 4), random::fta(&mut rng, &sig, 4));
    c.bench_function("fta_intersection", |bench| bench.iter(|| a.intersection(&b).unwrap()));
    let w = nonclosure_witness();
    c.bench_function("fta_image_linear", |bench| bench.iter(|| w.language.image(&w.psi1).unwrap()));
    let h = random::hom(&mut rng, &sig, random::HomKind::QuasiAlphabetic, "d", "y");
    let target = random::fta(&mut rng, h.target(), 3);
    c.bench_function("fta_preimage_hom", |bench| bench.iter(|| target.preimage_hom(&h).unwrap()));
}

fn bimorphisms(c: &mut Criterion) {
    let mut rng = random::rng(3);
    let pairs: Vec<(Bimorphism, Bimorphism)> = (0..8)
        .map(|_| (random::qa_bimorphism(&mut rng, 3), random::qa_bimorphism(&mut rng, 3)))
        .collect();
    c.bench_function("bim_canonical", |bench| {
        bench.iter(|| pairs.iter().map(|(b, _)| b.canonical().unwrap()).count())
    });
    c.bench_function("bim_union", |bench| bench.iter(|| pairs.iter().map(|(a, b)| a.union(b).unwrap()).count()));
    c.bench_function("bim_to_alphabetic", |bench| {
        bench.iter(|| pairs.iter().map(|(b, _)| b.to_alphabetic().unwrap()).count())
    });
}

fn transducers(c: &mut Criterion) {
    let mut rng = random::rng(4);
    let b = random::qa_bimorphism(&mut rng, 3);
    c.bench_function("td_compile", |bench| bench.iter(|| Transducer::compile_bimorphism(&b).unwrap()));
    let m = Transducer::compile_bimorphism(&b).unwrap();
    let inputs: Vec<_> = b.relation(3).into_iter().map(|(s, _)| s).collect();
    c.bench_function("td_derive_compiled", |bench| {
        bench.iter(|| inputs.iter().map(|s| m.derive(s, 1 << 12).unwrap().len()).sum::<usize>())
    });
    let r = random::relabeling(&mut rng, 3);
    let a = random::fta(&mut rng, r.output(), 3);
    c.bench_function("td_preimage_relabeling", |bench| bench.iter(|| r.preimage(&a).unwrap()));
    let q = Transducer::compile_bimorphism(&qaln()).unwrap();
    let any = Fta::universal(q.output().clone());
    c.bench_function("td_preimage_qaln", |bench| bench.iter(|| q.preimage(&any).unwrap()));
    c.bench_function("bim_from_relabeling", |bench| {
        bench.iter_batched(|| r.clone(), |r| Bimorphism::from_relabeling(&r).unwrap(), BatchSize::SmallInput)
    });
}

fn grammars(c: &mut Criterion) {
    let g1: Cfg = "start: S\nS -> a S b | a b\n".parse().unwrap();
    let g2: Cfg = "start: S\nS -> c | c c\n".parse().unwrap();
    c.bench_function("cfg_product", |bench| bench.iter(|| Bimorphism::from_cfgs(&g1, &g2).unwrap()));
    let b = Bimorphism::from_cfgs(&g1, &g2).unwrap();
    c.bench_function("cfg_product_translation_h5", |bench| bench.iter(|| b.translation(5)));
    let w: Vec<_> = "aaaaaaaabbbbbbbb".chars().map(|ch| qalph_core::Symbol::new(ch.to_string())).collect();
    c.bench_function("cfg_cyk_16", |bench| bench.iter(|| g1.cyk_member(&w)));
}

criterion_group!(benches, enumeration, automata, bimorphisms, transducers, grammars);
criterion_main!(benches);
