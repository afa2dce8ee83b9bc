//! Acceptance suite. Each criterion prints one pass/fail line (visible with
//! `cargo test --test acceptance -- --nocapture`) and asserts its stated
//! tolerance.

use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sphere_designs::bounds::{
    absolute_lower_complex, annihilator, annihilator_poly, fisher_bound, s_angular_bound,
    tightness_check, AnnihilatorSpec, BoundValue,
};
use sphere_designs::builtin;
use sphere_designs::config::{angle_set, Configuration, Field};
use sphere_designs::designs::{
    gradient_check, synthesize, verify, verify_t_design, SynthesisOptions, WeightsMode,
};
use sphere_designs::gegenbauer::{
    binomial, complex_q, dim_h, dim_harm, monomial_expansion_complex, project_real, real_q,
    rogers_product, sum_identity, to_geg_basis_complex, to_geg_basis_real, GegExpansion,
};
use sphere_designs::indices::{named_family, ComplexIndexSet, Family, IndexSet, RealIndexSet};
use sphere_designs::poly::MonomialPoly;
use sphere_designs::potentials::{
    angle_form_value, evaluate, weighted_sum, Potential,
};
use sphere_designs::quadrature::{geg_inner_complex, geg_inner_real};
use sphere_designs::Real;

type C = Complex<Real>;

fn pass(name: &str, detail: String) {
    println!("PASS {name}: {detail}");
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn random_unit_config(rng: &mut ChaCha8Rng, field: Field, d: usize, n: usize) -> Configuration<Real> {
    let vectors: Vec<Vec<C>> = (0..n)
        .map(|_| {
            let mut v: Vec<C> = (0..d)
                .map(|_| match field {
                    Field::Real => C::new(rng.sample(rand_distr::StandardNormal), 0.0),
                    Field::Complex => C::new(
                        rng.sample(rand_distr::StandardNormal),
                        rng.sample(rand_distr::StandardNormal),
                    ),
                })
                .collect();
            let norm: Real = v.iter().map(|c| c.norm_sqr()).sum::<Real>().sqrt();
            v.iter_mut().for_each(|c| *c = c.scale(1.0 / norm));
            v
        })
        .collect();
    Configuration::new(field, d, vectors, None).unwrap()
}

/// Random unitary by modified Gram-Schmidt of a Gaussian matrix.
fn random_unitary(rng: &mut ChaCha8Rng, field: Field, d: usize) -> Vec<Vec<C>> {
    let mut rows: Vec<Vec<C>> = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| match field {
                    Field::Real => C::new(rng.sample(rand_distr::StandardNormal), 0.0),
                    Field::Complex => C::new(
                        rng.sample(rand_distr::StandardNormal),
                        rng.sample(rand_distr::StandardNormal),
                    ),
                })
                .collect()
        })
        .collect();
    for i in 0..d {
        for j in 0..i {
            let proj: C = (0..d).map(|k| rows[i][k] * rows[j][k].conj()).sum();
            let prior = rows[j].clone();
            for (k, cell) in rows[i].iter_mut().enumerate() {
                *cell -= proj * prior[k];
            }
        }
        let norm: Real = rows[i].iter().map(|c| c.norm_sqr()).sum::<Real>().sqrt();
        rows[i].iter_mut().for_each(|c| *c = c.scale(1.0 / norm));
    }
    rows
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_orthogonality() {
    let start = Instant::now();
    let mut worst_real: Real = 0.0;
    for d in 2..=6usize {
        let qs: Vec<_> = (0..=10u32).map(|k| real_q::<Real>(d, k).unwrap()).collect();
        for j in 0..=10usize {
            for k in j..=10usize {
                let v = geg_inner_real(&qs[j], &qs[k], d).unwrap();
                let want = if j == k { dim_harm(d, k as u32).unwrap() as Real } else { 0.0 };
                let tol = 1e-9 * dim_harm(d, k as u32).unwrap() as Real;
                let err = (v - want).abs();
                assert!(err <= tol, "real d={d} j={j} k={k}: {v} vs {want}");
                worst_real = worst_real.max(err / dim_harm(d, k as u32).unwrap() as Real);
            }
        }
    }
    let mut worst_complex: Real = 0.0;
    for d in 2..=4usize {
        let mut indices = Vec::new();
        for p in 0..=6u32 {
            for q in 0..=(6 - p) {
                indices.push((p, q));
            }
        }
        let polys: Vec<_> = indices
            .iter()
            .map(|&(p, q)| complex_q::<Real>(d, p, q).unwrap())
            .collect();
        for (a, &(p, q)) in indices.iter().enumerate() {
            for (b, &(r, s)) in indices.iter().enumerate() {
                if b < a {
                    continue;
                }
                let v = geg_inner_complex(&polys[a], &polys[b], d).unwrap();
                let want = if (p, q) == (r, s) { dim_h(d, p, q).unwrap() as Real } else { 0.0 };
                let err = (v - C::new(want, 0.0)).norm();
                assert!(err <= 1e-8 * want.max(1.0), "complex d={d} ({p},{q})({r},{s}): {v}");
                worst_complex = worst_complex.max(err);
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "orthogonality suite took {elapsed:?}");
    pass(
        "criterion 1 (orthogonality)",
        format!("worst real rel err {worst_real:.2e}, worst complex err {worst_complex:.2e}, {elapsed:?}"),
    );
}

#[test]
fn criterion_2_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: Real = 0.0;
    for d in 2..=4usize {
        for p in 0..=6u32 {
            for q in 0..=(6 - p) {
                let tele = monomial_expansion_complex::<Real>(d, p, q).to_poly().unwrap();
                let sum = sum_identity::<Real>(d, p, q).to_poly().unwrap();
                let up = complex_q::<Real>(d + 1, p, q).unwrap();
                let scale = d as Real / ((p + q) as Real + d as Real);
                for _ in 0..100 {
                    let r: Real = rng.gen::<Real>().sqrt();
                    let th: Real = rng.gen::<Real>() * std::f64::consts::TAU;
                    let z = C::from_polar(r, th);
                    let t_err = (tele.eval(z) - z.powu(p) * z.conj().powu(q)).norm();
                    let s_err = (sum.eval(z) - up.eval(z).scale(scale)).norm();
                    worst = worst.max(t_err).max(s_err);
                    assert!(t_err < 1e-10, "telescoping d={d} p={p} q={q}: {t_err}");
                    assert!(s_err < 1e-10, "sum formula d={d} p={p} q={q}: {s_err}");
                }
            }
        }
    }
    let mut worst_rogers: Real = 0.0;
    for d in [3usize, 4, 5] {
        for k in 0..=6u32 {
            for l in 0..=6u32 {
                let closed = rogers_product::<Real>(d, k, l).unwrap();
                let prod = real_q::<Real>(d, k).unwrap().mul(&real_q::<Real>(d, l).unwrap());
                for (m, c) in closed.iter() {
                    let projected = project_real(&prod, d, m).unwrap();
                    let err = (c - projected).abs();
                    assert!(err < 1e-9 * c.abs().max(1.0), "rogers d={d} k={k} l={l} m={m}");
                    worst_rogers = worst_rogers.max(err / c.abs().max(1.0));
                }
            }
        }
    }
    pass(
        "criterion 2 (identities)",
        format!("pointwise err {worst:.2e}, Rogers vs quadrature rel err {worst_rogers:.2e}"),
    );
}

#[test]
fn criterion_3_design_verification() {
    let start = Instant::now();
    // simplex: tight 2-design with a vanishing first moment sum
    for d in 2..=8usize {
        let cfg = builtin::simplex::<Real>(d).unwrap();
        let report = verify_t_design(&cfg, &WeightsMode::Uniform, 2, 1e-10).unwrap();
        assert!(report.pass, "simplex d={d}: {:?}", report.entries);
        // sum <v_j, v_k> = (d+1) + ((d+1)^2 - (d+1))(-1/d) = 0
        let gram = cfg.gramian();
        let mut sum = 0.0;
        for j in 0..=d {
            for k in 0..=d {
                sum += gram.get(j, k).re;
            }
        }
        assert!(sum.abs() < 1e-10, "simplex d={d}: first moment sum {sum}");
        // tight: n = d + 1 meets the absolute bound for t = 2
        let e = RealIndexSet::new([0, 1]);
        let bound = sphere_designs::bounds::absolute_lower_real::<Real>(
            d,
            &e,
            sphere_designs::bounds::AbsoluteVariant::Square,
        )
        .unwrap();
        assert_eq!(bound.value, BoundValue::Exact((d + 1) as u64));
        let cert = tightness_check(&cfg, &bound, 1e-10).unwrap();
        assert!(cert.pass, "simplex d={d} tightness");
    }
    // orthoplex: passes t=3, fails t=4
    for d in 2..=8usize {
        let cfg = builtin::orthoplex::<Real>(d).unwrap();
        assert!(verify_t_design(&cfg, &WeightsMode::Uniform, 3, 1e-10).unwrap().pass);
        assert!(!verify_t_design(&cfg, &WeightsMode::Uniform, 4, 1e-10).unwrap().pass);
    }
    // icosahedron: passes t=5, fails t=6
    let ico = builtin::icosahedron::<Real>().unwrap();
    assert!(verify_t_design(&ico, &WeightsMode::Uniform, 5, 1e-10).unwrap().pass);
    assert!(!verify_t_design(&ico, &WeightsMode::Uniform, 6, 1e-10).unwrap().pass);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "verification suite took {elapsed:?}");
    pass("criterion 3 (design verification)", format!("{elapsed:?}"));
}

#[test]
fn criterion_4_complex_tight_families() {
    // orthonormal basis of C^d meets the (1,1)-design bound n = d
    for d in 2..=6usize {
        let e = ComplexIndexSet::new([(1, 0)]);
        let bound = absolute_lower_complex::<Real>(d, &e).unwrap();
        assert_eq!(bound.value, BoundValue::Exact(d as u64));
        let cfg = builtin::orthonormal::<Real>(d, Field::Complex).unwrap();
        let cert = tightness_check(&cfg, &bound, 1e-10).unwrap();
        assert!(cert.pass, "orthonormal d={d}");
    }
    // the (t,t) lower-bound table for t = 1, 2, 3
    for d in 2..=6usize {
        for t in 1..=3u32 {
            let q = t / 2;
            let p = t - q;
            let e = ComplexIndexSet::new((0..=p.min(q)).map(|j| (p - j, q - j)));
            let bound = absolute_lower_complex::<Real>(d, &e).unwrap();
            let want: u64 = match t {
                1 => d as u64,
                2 => (d * d) as u64,
                3 => (d * d * (d + 1) / 2) as u64,
                _ => unreachable!(),
            };
            assert_eq!(bound.value, BoundValue::Exact(want), "d={d} t={t}");
            // tight angle sets {0}, {1/(d+1)}, {0, 2/(d+2)}
            let roots: Vec<Real> = bound.tight_roots.iter().map(|z| z.re).collect();
            match t {
                1 => {
                    assert_eq!(roots.len(), 1);
                    assert!(roots[0].abs() < 1e-10);
                }
                2 => {
                    assert_eq!(roots.len(), 1);
                    assert!((roots[0] - 1.0 / (d as Real + 1.0)).abs() < 1e-10);
                }
                3 => {
                    assert_eq!(roots.len(), 2);
                    assert!(roots[0].abs() < 1e-10);
                    assert!((roots[1] - 2.0 / (d as Real + 2.0)).abs() < 1e-10);
                }
                _ => unreachable!(),
            }
        }
    }
    // the named values 40 and 126
    let e = ComplexIndexSet::new([(2, 1), (1, 0)]);
    assert_eq!(absolute_lower_complex::<Real>(4, &e).unwrap().value, BoundValue::Exact(40));
    assert_eq!(absolute_lower_complex::<Real>(6, &e).unwrap().value, BoundValue::Exact(126));
    pass("criterion 4 (complex tight families)", "t = 1..3, d = 2..6 table exact".into());
}

#[test]
fn criterion_5_bound_cross_checks() {
    // fisher on s-angle projective annihilators equals the s-angular bound
    for d in 2..=5usize {
        for s in 1..=3u32 {
            for with_zero in [false, true] {
                let nonzero = (s - u32::from(with_zero)) as usize;
                let angles: Vec<Real> =
                    (0..nonzero).map(|i| 0.11 + 0.13 * i as Real).collect();
                let spec =
                    AnnihilatorSpec::Projective { nonzero_angles: angles, include_zero: with_zero };
                let e = annihilator::<Real>(&spec, d).unwrap();
                let fisher = fisher_bound(&e).unwrap();
                let s_ang = s_angular_bound::<Real>(d, s, with_zero).unwrap();
                assert_eq!(fisher.value, s_ang.value, "d={d} s={s} zero={with_zero}");
            }
        }
    }
    // two-angle bounds 2d+1 / 2d
    for d in 2..=5usize {
        let e = annihilator::<Real>(&AnnihilatorSpec::RealParts(vec![-0.21]), d).unwrap();
        assert_eq!(fisher_bound(&e).unwrap().value, BoundValue::Exact((2 * d + 1) as u64));
        let e = annihilator::<Real>(&AnnihilatorSpec::RealParts(vec![0.0]), d).unwrap();
        assert_eq!(fisher_bound(&e).unwrap().value, BoundValue::Exact((2 * d) as u64));
    }
    // generic three-angle bound d(3d+5)/2
    for d in 2..=5usize {
        let rp = annihilator_poly(&AnnihilatorSpec::RealParts(vec![0.17])).unwrap();
        let zb = annihilator_poly(&AnnihilatorSpec::Angles(vec![C::new(-0.4, 0.0)])).unwrap();
        let e = to_geg_basis_complex(&rp.mul(&zb).unwrap(), d).unwrap().trimmed(1e-10);
        assert_eq!(
            fisher_bound(&e).unwrap().value,
            BoundValue::Exact((d * (3 * d + 5) / 2) as u64)
        );
    }
    // cube roots of unity meet n = 3 with annihilator (z^2+z+1)/3
    let omega = C::from_polar(1.0, std::f64::consts::TAU / 3.0);
    let spec = AnnihilatorSpec::Angles(vec![omega, omega.conj()]);
    let e = annihilator::<Real>(&spec, 1).unwrap();
    // coefficients are exactly (1/3)(Q_00 + Q_10 + Q_20)
    for (idx, c) in e.iter() {
        assert!(idx.q == 0 && idx.p <= 2);
        assert!((c - C::new(1.0 / 3.0, 0.0)).norm() < 1e-12);
    }
    let bound = fisher_bound(&e).unwrap();
    assert_eq!(bound.value, BoundValue::Exact(3));
    let cfg = builtin::roots_of_unity::<Real>(3).unwrap();
    let cert = tightness_check(&cfg, &bound, 1e-10).unwrap();
    assert!(cert.pass, "cube roots of unity tightness");
    pass("criterion 5 (bound cross-checks)", "exact integer agreement".into());
}

#[test]
fn criterion_6_synthesis() {
    let start = Instant::now();
    let opts = SynthesisOptions::<Real> { max_iters: 5000, restarts: 8, tol: 1e-9, threads: 1 };

    // (a) R^2, n=4, t=2
    let idx = named_family(Field::Real, Family::TDesign(2));
    let a = synthesize(Field::Real, 2, 4, &idx, &WeightsMode::Uniform, 42, &opts).unwrap();
    assert!(a.residual <= 1e-9, "(a) residual {}", a.residual);
    let re_verify = verify_t_design(&a.configuration, &WeightsMode::Uniform, 2, 1e-8).unwrap();
    assert!(re_verify.pass);

    // (b) R^3, n=12, t=5
    let idx = named_family(Field::Real, Family::TDesign(5));
    let opts_b = SynthesisOptions::<Real> { tol: 1e-8, ..opts.clone() };
    let b = synthesize(Field::Real, 3, 12, &idx, &WeightsMode::Uniform, 42, &opts_b).unwrap();
    assert!(b.residual <= 1e-8, "(b) residual {}", b.residual);
    let re_verify = verify_t_design(&b.configuration, &WeightsMode::Uniform, 5, 1e-7).unwrap();
    assert!(re_verify.pass);

    // (c) C^2, n=4, (2,2)-design: a SIC-like family with |<v_j,v_k>|^2 = 1/3
    let idx = named_family(Field::Complex, Family::PqDesign(2, 2));
    let c = synthesize(Field::Complex, 2, 4, &idx, &WeightsMode::Uniform, 42, &opts_b).unwrap();
    assert!(c.residual <= 1e-8, "(c) residual {}", c.residual);
    let re_verify = verify(
        &c.configuration,
        &WeightsMode::Uniform,
        &named_family(Field::Complex, Family::PqDesign(2, 2)),
        1e-7,
    )
    .unwrap();
    assert!(re_verify.pass);
    let angles = angle_set(
        &c.configuration.gramian(),
        &c.configuration.weights_or_uniform(),
        1e-4,
    )
    .unwrap();
    for z in &angles.angles {
        assert!(
            (z.norm_sqr() - 1.0 / 3.0).abs() < 1e-4,
            "(c) angle modulus^2 {} differs from 1/3",
            z.norm_sqr()
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "synthesis took {elapsed:?}");
    pass(
        "criterion 6 (synthesis)",
        format!(
            "residuals {:.2e} / {:.2e} / {:.2e} in {elapsed:?}",
            a.residual, b.residual, c.residual
        ),
    );
}

#[test]
fn criterion_7_gradient_correctness() {
    let mut worst: Real = 0.0;
    for t in 1..=5u32 {
        let idx = named_family(Field::Real, Family::TDesign(t));
        for inst in 0..20u64 {
            let err = gradient_check(
                Field::Real,
                3,
                6,
                &idx,
                &WeightsMode::Uniform,
                1000 * t as u64 + inst,
                1e-6,
            )
            .unwrap();
            assert!(err < 1e-5, "real t={t} instance {inst}: rel err {err}");
            worst = worst.max(err);
        }
    }
    for p in 0..=4u32 {
        for q in 0..=p {
            if p + q == 0 || p + q > 4 {
                continue;
            }
            let idx = named_family(Field::Complex, Family::PqDesign(p, q));
            for inst in 0..20u64 {
                let err = gradient_check(
                    Field::Complex,
                    2,
                    5,
                    &idx,
                    &WeightsMode::Uniform,
                    7000 + 100 * (10 * p + q) as u64 + inst,
                    1e-6,
                )
                .unwrap();
                assert!(err < 1e-5, "complex ({p},{q}) instance {inst}: rel err {err}");
                worst = worst.max(err);
            }
        }
    }
    pass("criterion 7 (gradient correctness)", format!("worst rel err {worst:.2e}"));
}

#[test]
fn criterion_8_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    // potential nonnegativity on 200 random unit configurations
    let mut worst_residual: Real = 0.0;
    for i in 0..200 {
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let d = 2 + (i % 3);
        let n = 2 + (i % 11);
        let cfg = random_unit_config(&mut rng, field, d, n);
        let indices = match field {
            Field::Real => named_family(Field::Real, Family::TDesign(3)),
            Field::Complex => named_family(Field::Complex, Family::TtDesign(2)),
        };
        let pot = Potential::<Real>::canonical(d, &indices).unwrap();
        let w = cfg.weights_or_uniform();
        let v = evaluate(&pot, &cfg.gramian(), &w).unwrap();
        assert!(v.residual >= -1e-10, "nonnegativity violated: {}", v.residual);
        worst_residual = worst_residual.min(v.residual);
    }
    // unitary invariance of verification outcomes
    for field in [Field::Real, Field::Complex] {
        let d = 3;
        let cfg = match field {
            Field::Real => {
                let s = builtin::simplex::<Real>(d).unwrap();
                Configuration::new(Field::Real, d, s.vectors().to_vec(), None).unwrap()
            }
            Field::Complex => builtin::orthonormal::<Real>(d, Field::Complex).unwrap(),
        };
        let u = random_unitary(&mut rng, field, d);
        let rotated = cfg.transformed(&u).unwrap();
        let indices = match field {
            Field::Real => named_family(Field::Real, Family::TDesign(2)),
            Field::Complex => named_family(Field::Complex, Family::TtDesign(1)),
        };
        let before = verify(&cfg, &WeightsMode::Uniform, &indices, 1e-9).unwrap();
        let after = verify(&rotated, &WeightsMode::Uniform, &indices, 1e-9).unwrap();
        assert_eq!(before.pass, after.pass);
        // Gramian invariance under the unitary
        let (ga, gb) = (cfg.gramian(), rotated.gramian());
        for j in 0..cfg.len() {
            for k in 0..cfg.len() {
                assert!((ga.get(j, k) - gb.get(j, k)).norm() < 1e-12);
            }
        }
    }
    // Gramian vs angle-multiset evaluation agreement
    for i in 0..20 {
        let field = if i % 2 == 0 { Field::Real } else { Field::Complex };
        let cfg = random_unit_config(&mut rng, field, 3, 6);
        let indices = match field {
            Field::Real => named_family(Field::Real, Family::TDesign(3)),
            Field::Complex => named_family(Field::Complex, Family::TtDesign(2)),
        };
        let pot = Potential::<Real>::canonical(3, &indices).unwrap();
        let w = cfg.weights_or_uniform();
        let gram = cfg.gramian();
        let direct = weighted_sum(pot.monomial(), &gram, &w).unwrap();
        assert!(direct.im.abs() < 1e-12, "imaginary part {}", direct.im);
        let angles = angle_set(&gram, &w, 1e-9).unwrap();
        let via_angles = angle_form_value(pot.monomial(), &angles);
        assert!((direct.re - via_angles).abs() < 1e-10);
    }
    // Cauchy-Schwarz optimality of equal coefficients
    for _ in 0..100 {
        let d = 2 + (rng.gen::<u32>() % 4) as usize; // 2..=5
        let e_max = 1 + rng.gen::<u32>() % 6;
        let members: Vec<u32> = (0..=e_max).filter(|_| rng.gen::<bool>()).collect();
        let members = if members.is_empty() { vec![e_max] } else { members };
        let coeffs: Vec<Real> = members.iter().map(|_| 0.05 + rng.gen::<Real>()).collect();
        let mut num = 0.0;
        let mut den = 0.0;
        let mut dim_total = 0.0;
        for (&k, &c) in members.iter().zip(&coeffs) {
            let q1 = dim_harm(d, k).unwrap() as Real;
            num += c * q1;
            den += c * c * q1;
            dim_total += q1;
        }
        let m = num * num / den;
        assert!(m <= dim_total + 1e-9, "M = {m} exceeds {dim_total}");
    }
    pass(
        "criterion 8 (property suite)",
        format!("worst potential residual {worst_residual:.2e}"),
    );
}

/// Companion check used by criterion 4's wording: the monomial route and the
/// binomial closed forms agree exactly for the whole table.
#[test]
fn criterion_4b_closed_forms() {
    for d in 2..=6usize {
        for t in 1..=6u32 {
            let q = t / 2;
            let p = t - q;
            let e = ComplexIndexSet::new((0..=p.min(q)).map(|j| (p - j, q - j)));
            let bound = absolute_lower_complex::<Real>(d, &e).unwrap();
            let k = (t / 2) as i64;
            let want = if t % 2 == 0 {
                let b = binomial(k + d as i64 - 1, d as i64 - 1).unwrap();
                (b * b) as u64
            } else {
                (binomial(k + d as i64 - 1, d as i64 - 1).unwrap()
                    * binomial(k + d as i64, d as i64 - 1).unwrap()) as u64
            };
            assert_eq!(bound.value, BoundValue::Exact(want), "d={d} t={t}");
        }
    }
    pass("criterion 4b (closed forms)", "binomial identities exact for t <= 6, d <= 6".into());
}

/// Verification consistency: synthesized designs re-verify at 10x tolerance.
#[test]
fn criterion_6b_verification_consistency() {
    let opts = SynthesisOptions::<Real> { max_iters: 4000, restarts: 4, tol: 1e-9, threads: 1 };
    let cases: Vec<(Field, usize, usize, IndexSet)> = vec![
        (Field::Real, 2, 4, named_family(Field::Real, Family::TDesign(2))),
        (Field::Real, 3, 6, named_family(Field::Real, Family::TDesign(3))),
        (Field::Complex, 2, 4, named_family(Field::Complex, Family::TtDesign(1))),
    ];
    for (field, d, n, idx) in cases {
        let r = synthesize(field, d, n, &idx, &WeightsMode::Uniform, 42, &opts).unwrap();
        assert!(r.converged, "{field:?} d={d} n={n}: residual {}", r.residual);
        let check = verify(&r.configuration, &WeightsMode::Uniform, &idx, 1e-8).unwrap();
        assert!(check.pass);
    }
    pass("criterion 6b (verification consistency)", "synthesized designs re-verify".into());
}

/// The real addition-formula consistency stated with the identity suite.
#[test]
fn criterion_2b_addition_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2usize, 3, 4] {
        for k in 0..=8u32 {
            for _ in 0..10 {
                let sample = |rng: &mut ChaCha8Rng| -> Vec<Real> {
                    let mut v: Vec<Real> =
                        (0..2 * d).map(|_| rng.sample(rand_distr::StandardNormal)).collect();
                    let n = v.iter().map(|x| x * x).sum::<Real>().sqrt();
                    v.iter_mut().for_each(|x| *x /= n);
                    v
                };
                let x = sample(&mut rng);
                let y = sample(&mut rng);
                let dot: Real = x.iter().zip(&y).map(|(a, b)| a * b).sum();
                let z: C = (0..d)
                    .map(|i| C::new(x[i], x[i + d]) * C::new(y[i], y[i + d]).conj())
                    .sum();
                let lhs = real_q::<Real>(2 * d, k).unwrap().eval(dot);
                let rhs: C = (0..=k)
                    .map(|p| complex_q::<Real>(d, p, k - p).unwrap().eval(z))
                    .sum();
                assert!((lhs - rhs.re).abs() < 1e-10 * lhs.abs().max(1.0), "d={d} k={k}");
            }
        }
    }
    pass("criterion 2b (addition formula)", "Q_k^(2d) = sum_(p+q=k) Q_pq^(d)".into());
}

/// Monomial-vs-canonical agreement on designs: a zero-residual canonical
/// verification implies a zero residual for the monomial potential of the
/// same support, and conversely.
#[test]
fn criterion_8b_monomial_canonical_agreement() {
    use sphere_designs::potentials::MonomialFamily;
    // the orthoplex is a half-design of order 2 and the simplex of order 1
    let cases: Vec<(Configuration<Real>, u32)> = vec![
        (builtin::orthoplex::<Real>(3).unwrap(), 2),
        (builtin::simplex::<Real>(4).unwrap(), 1),
        (builtin::icosahedron::<Real>().unwrap(), 4),
    ];
    for (cfg, m) in cases {
        let d = cfg.dimension();
        let indices = named_family(Field::Real, Family::HalfDesign(m));
        let canonical = Potential::<Real>::canonical(d, &indices).unwrap();
        let monomial = Potential::<Real>::monomial_family(d, MonomialFamily::HalfDesign { m }).unwrap();
        let w = cfg.weights_or_uniform();
        let g = cfg.gramian();
        let rc = evaluate(&canonical, &g, &w).unwrap().residual;
        let rm = evaluate(&monomial, &g, &w).unwrap().residual;
        assert!(
            (rc.abs() < 1e-9) == (rm.abs() < 1e-9),
            "m={m}: canonical {rc} vs monomial {rm}"
        );
        assert!(rc.abs() < 1e-9, "expected designs in this list (m={m})");
    }
    // negative case: icosahedron is not a half-design of order 6
    let ico = builtin::icosahedron::<Real>().unwrap();
    let canonical = Potential::<Real>::canonical(
        3,
        &named_family(Field::Real, Family::HalfDesign(6)),
    )
    .unwrap();
    let monomial =
        Potential::<Real>::monomial_family(3, MonomialFamily::HalfDesign { m: 6 }).unwrap();
    let w = ico.weights_or_uniform();
    let g = ico.gramian();
    assert!(evaluate(&canonical, &g, &w).unwrap().residual > 1e-6);
    assert!(evaluate(&monomial, &g, &w).unwrap().residual > 1e-6);
    pass("criterion 8b (monomial vs canonical)", "agreement on designs and non-designs".into());
}

/// GegExpansion contract: real monomial -> Q basis -> monomial is the
/// identity within 1e-10 relative up to degree 30.
#[test]
fn criterion_1b_basis_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in [2usize, 3, 5] {
        for deg in [1usize, 7, 18, 30] {
            let coeffs: Vec<Real> =
                (0..=deg).map(|_| rng.gen::<Real>() * 2.0 - 1.0).collect();
            let f = sphere_designs::poly::RealPolynomial::new(coeffs);
            let e = to_geg_basis_real(&f, d).unwrap();
            let back = e.to_poly().unwrap();
            let scale: Real = f.coeffs().iter().map(|c| c.abs()).fold(0.0, Real::max);
            for j in 0..=deg {
                assert!(
                    (f.coeff(j) - back.coeff(j)).abs() <= 1e-10 * scale.max(1.0),
                    "d={d} deg={deg} j={j}"
                );
            }
            // evaluation at 1 equals the coefficient-dimension sum
            let at_one = e.value_at_one().unwrap();
            assert!((at_one - f.eval(1.0)).abs() <= 1e-12 * f.eval(1.0).abs().max(1.0));
        }
    }
    pass("criterion 1b (basis round trip)", "identity to 1e-10 through degree 30".into());
}

/// Exposes the GegExpansion potential flag on the acceptance surface.
#[test]
fn criterion_8c_is_potential_flag() {
    let idx = named_family(Field::Complex, Family::TtDesign(2));
    let pot = Potential::<Real>::canonical(2, &idx).unwrap();
    assert!(pot.is_potential());
    match pot.monomial() {
        MonomialPoly::Complex(_) => {}
        _ => panic!("complex family must produce a bivariate view"),
    }
    let signed = GegExpansion::Real(sphere_designs::gegenbauer::RealExpansion::from_coeffs(
        3,
        [(1u32, -1.0)],
    ));
    assert!(!signed.is_potential(1e-10));
    pass("criterion 8c (potential flag)", "sign checks".into());
}
