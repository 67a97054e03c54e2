use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use cubica::{
    eisenstein, find_flexes, hesse_form, to_standard, BasedGroup, CubicForm, HesseParam, Lattice, ProjPoint, Scalar,
    StandardCurve,
};
use num_complex::Complex64;

fn generic_cubic() -> CubicForm {
    let c: [Complex64; 10] = std::array::from_fn(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()));
    CubicForm::from_complex(c).unwrap()
}

fn flexes(c: &mut Criterion) {
    let phi = generic_cubic();
    c.bench_function("find_flexes/generic", |b| b.iter(|| find_flexes(black_box(&phi)).unwrap()));
}

fn reduction(c: &mut Criterion) {
    let phi = hesse_form(&HesseParam::Finite(Scalar::real(2.5)));
    let flex = ProjPoint::from_ints(0, 1, -1).unwrap();
    c.bench_function("to_standard/hesse", |b| b.iter(|| to_standard(black_box(&phi), &flex).unwrap()));
}

fn group_add(c: &mut Criterion) {
    let g = BasedGroup::new(StandardCurve::from_ints(-2, 0).to_form(), ProjPoint::from_ints(0, 1, 0).unwrap()).unwrap();
    let p = g.point(ProjPoint::from_ints(-1, 1, 1).unwrap()).unwrap();
    let q = g.point(ProjPoint::from_ints(0, 0, 1).unwrap()).unwrap();
    c.bench_function("group/add_exact", |b| b.iter(|| g.add(black_box(&p), black_box(&q)).unwrap()));

    let phi = generic_cubic();
    let fl = find_flexes(&phi).unwrap();
    let g = BasedGroup::new(phi, fl.points()[0].clone()).unwrap();
    let p = g.point(fl.points()[1].clone()).unwrap();
    let q = g.point(fl.points()[2].clone()).unwrap();
    c.bench_function("group/add_float", |b| b.iter(|| g.add(black_box(&p), black_box(&q)).unwrap()));
}

fn lattice(c: &mut Criterion) {
    let l = Lattice::from_tau(Complex64::new(0.6, 0.8)).unwrap();
    c.bench_function("eisenstein/generic", |b| b.iter(|| eisenstein(black_box(&l))));
}

criterion_group!(benches, flexes, reduction, group_add, lattice);
criterion_main!(benches);
