use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use eiscong::congruence::{check_harder, check_ramanujan};
use eiscong::exactmath::{primes_up_to, rat_int};
use eiscong::lfunction::{lambda_value, level1_systems, level_p_newform_from_traces};
use eiscong::modforms::eigen_systems_level1;
use eiscong::satake::verdict;
use eiscong::traceformula::{trace_tm, trace_tm_new};
use eiscong::{CongruenceTarget, EigenSystem, NFElement};

fn traces(c: &mut Criterion) {
    c.bench_function("trace_tm k=24 m=1..100", |b| {
        b.iter(|| {
            (1..=100u64)
                .map(|m| black_box(trace_tm(24, 1, black_box(m)).unwrap()))
                .for_each(drop)
        })
    });
    c.bench_function("trace_tm_new k=8 p=2 odd m<100", |b| {
        b.iter(|| {
            (1..100u64)
                .step_by(2)
                .map(|m| black_box(trace_tm_new(8, 2, black_box(m)).unwrap()))
                .for_each(drop)
        })
    });
}

fn eigenforms(c: &mut Criterion) {
    let primes = primes_up_to(100);
    c.bench_function("eigen_systems_level1 k=24 q<=100", |b| {
        b.iter(|| eigen_systems_level1(black_box(24), &primes, 101).unwrap())
    });
}

fn lvalues(c: &mut Criterion) {
    let delta = level1_systems(12, 30).unwrap().remove(0);
    c.bench_function("lambda_value Delta s=6 D=30", |b| {
        b.iter(|| lambda_value(&delta, black_box(6), 30, 0).unwrap())
    });
}

fn satake(c: &mut Criterion) {
    c.bench_function("verdict (4,10,2,41)", |b| {
        b.iter(|| verdict(4, 10, 2, black_box(41), 1, 1).unwrap())
    });
}

fn congruences(c: &mut Criterion) {
    let target = CongruenceTarget::new(2, 4, 2).unwrap();
    let f = level_p_newform_from_traces(8, 2, 30).unwrap().system;
    // a rational system that satisfies the congruence exactly
    let values = f
        .values
        .iter()
        .filter(|(&q, _)| q != 2 && q <= 50)
        .map(|(&q, aq)| {
            (
                q,
                NFElement::from_rational(
                    f.ctx.clone(),
                    aq.as_rational().unwrap() + rat_int(target.twist(q)),
                ),
            )
        })
        .collect();
    let big = EigenSystem {
        weight: 4,
        level: 2,
        ctx: f.ctx.clone(),
        values,
        normalized: true,
    };
    c.bench_function("check_harder q<=50", |b| {
        b.iter(|| check_harder(&f, &big, &target, black_box(13), 50).unwrap())
    });
    let tau = eigen_systems_level1(12, &primes_up_to(100), 101)
        .unwrap()
        .remove(0);
    c.bench_function("check_ramanujan 691 q<=100", |b| {
        b.iter(|| check_ramanujan(&tau, black_box(691), 100).unwrap())
    });
}

criterion_group!(benches, traces, eigenforms, lvalues, satake, congruences);
criterion_main!(benches);
