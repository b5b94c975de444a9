use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use holonomy::angles::{
    build_canonical_n2, build_canonical_n3, pancharatnam_phase, solve_dependent_n2, CanonicalParamsN2,
    CanonicalParamsN3, Triad,
};
use holonomy::coherent::solve_dependent_coherent;
use holonomy::hilbert::UnitaryMatrix;
use holonomy::majorana::{
    coefficients_to_roots, matched_distance, roots_to_coefficients, su2_apply, Star, Su2,
};
use holonomy::npc::{
    connection_integral, generate_npc_profile, geodesic_lift, in_phase_gauge, loop_geometric_phase,
    npc_lift_between, profile_to_lift, subgrid_indices, validate_profile, verify_npc, CurveFrame, CurveLift,
    Grid, DEFAULT_QUADRATURE_TOLERANCE, DEFAULT_SUBGRID,
};
use holonomy::sphere::{bi_factorization, phase_from_solid_angles_n3, reduce_triad};
use holonomy::{StateVector, Tolerances};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::oracles::{
    apply2, bargmann, bi_phase, circle_distance, fock_coherent, inner, open_angle, pure_product, random_unit_vector,
    random_vector, relative_error_up_to_scalar, rodrigues, rotate, su2_matrix,
};
use crate::{CriterionResult, Measure};

pub const CRITERION_COUNT: u32 = 12;

/// Runs one criterion; `None` for an unknown id.
pub fn run_criterion(id: u32, seed: u64) -> Option<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(id as u64));
    let r = &mut rng;
    Some(match id {
        1 => pancharatnam_n2(r),
        2 => pancharatnam_n3(r),
        3 => dependent_pair_n2(r),
        4 => coherent_constraint(r),
        5 => majorana_round_trip(r),
        6 => factorization_phase_sum(r),
        7 => two_solid_angles(r),
        8 => npc_soundness(r),
        9 => horizontal_lift(r),
        10 => loop_invariance(r),
        11 => su2_covariance(r),
        12 => gauge_behaviour(r),
        _ => return None,
    })
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERION_COUNT).filter_map(|id| run_criterion(id, seed)).collect()
}

fn amps(s: &StateVector) -> &[Complex64] {
    s.amplitudes()
}

fn triad_phase(t: &Triad) -> f64 {
    let [a, b, c] = t.states();
    bi_phase(amps(a), amps(b), amps(c))
}

fn state(v: Vec<Complex64>) -> holonomy::Result<StateVector> {
    StateVector::new(v)
}

fn random_triad(rng: &mut ChaCha8Rng, dim: usize) -> holonomy::Result<Triad> {
    Triad::new(
        state(random_vector(rng, dim))?,
        state(random_vector(rng, dim))?,
        state(random_vector(rng, dim))?,
    )
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.0..TAU)
}

fn pancharatnam_n2(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(1, "Pancharatnam identity, n=2");
    let mut m = Measure::new("phase error", 1e-10);
    for _ in 0..1000 {
        let p = CanonicalParamsN2 {
            theta12: open_angle(rng),
            theta31: open_angle(rng),
            phi12: angle(rng),
            phi31: angle(rng),
            phi: angle(rng),
        };
        let err = (|| -> holonomy::Result<_> {
            let triad = build_canonical_n2(&p)?;
            let formula = pancharatnam_phase(p.theta12, p.theta31, p.phi, None)?;
            Ok(circle_distance(formula, triad_phase(&triad)))
        })();
        out.take(&mut m, err);
    }
    out.with(m)
}

fn pancharatnam_n3(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(2, "Pancharatnam identity, n=3");
    let mut m = Measure::new("phase error", 1e-10);
    for _ in 0..1000 {
        let p = CanonicalParamsN3 {
            theta12: open_angle(rng),
            theta31: open_angle(rng),
            phi12: angle(rng),
            phi31: angle(rng),
            phi: angle(rng),
            xi: rng.random_range(0.0..=FRAC_PI_2),
        };
        let err = (|| -> holonomy::Result<_> {
            let built = build_canonical_n3(&p)?;
            let formula = pancharatnam_phase(p.theta12, p.theta31, p.phi, Some(p.xi))?;
            Ok(circle_distance(formula, triad_phase(&built.triad)))
        })();
        out.take(&mut m, err);
    }
    out.with(m)
}

fn dependent_pair_n2(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(3, "dependent angle pair, n=2");
    let mut theta = Measure::new("theta23 error", 1e-10);
    let mut phase = Measure::new("phi23 error", 1e-10);
    for _ in 0..1000 {
        let p = CanonicalParamsN2 {
            theta12: open_angle(rng),
            theta31: open_angle(rng),
            phi12: angle(rng),
            phi31: angle(rng),
            phi: angle(rng),
        };
        let errs = (|| -> holonomy::Result<_> {
            let triad = build_canonical_n2(&p)?;
            let pair = solve_dependent_n2(p.theta12, p.theta31, p.phi)?;
            let w = inner(amps(triad.get(1)), amps(triad.get(2)));
            let theta23 = 2.0 * w.norm().min(1.0).acos();
            Ok((
                (pair.theta23 - theta23).abs(),
                circle_distance(pair.phi23(p.phi12, p.phi31), w.arg()),
            ))
        })();
        match errs {
            Ok((a, b)) => {
                theta.record(a);
                phase.record(b);
            }
            Err(e) => out.error(e),
        }
    }
    out.with(theta).with(phase)
}

fn coherent_constraint(rng: &mut ChaCha8Rng) -> CriterionResult {
    const TERMS: usize = 64;
    let mut out = CriterionResult::new(4, "coherent-state constraint vs truncated Fock sum");
    let mut theta = Measure::new("theta23 error", 1e-8);
    let mut phase = Measure::new("phi_g error", 1e-8);
    for _ in 0..200 {
        let r: f64 = rng.random_range(0.05..=2.0);
        let r2: f64 = rng.random_range(0.05..=2.0);
        let phi_prime = angle(rng);
        let (phi12, phi31) = (angle(rng), angle(rng));
        let theta12 = 2.0 * (-r * r / 2.0).exp().acos();
        let theta31 = 2.0 * (-r2 * r2 / 2.0).exp().acos();
        let shift = |v: Vec<Complex64>, a: f64| -> Vec<Complex64> {
            v.into_iter().map(|x| x * Complex64::from_polar(1.0, a)).collect()
        };
        let s1 = fock_coherent(Complex64::new(0.0, 0.0), TERMS);
        let s2 = shift(fock_coherent(Complex64::new(r, 0.0), TERMS), phi12);
        let s3 = shift(fock_coherent(Complex64::from_polar(r2, phi_prime), TERMS), -phi31);
        let w = inner(&s2, &s3);
        let theta23 = 2.0 * w.norm().min(1.0).acos();
        let phi_g = -bargmann(&s1, &s2, &s3).arg();
        match solve_dependent_coherent(theta12, theta31, phi_prime) {
            Ok(pair) => {
                theta.record((pair.theta23 - theta23).abs());
                phase.record(circle_distance(pair.phi_g, phi_g));
            }
            Err(e) => out.error(e),
        }
    }
    out.with(theta).with(phase)
}

fn majorana_round_trip(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(5, "Majorana round trip, n=2..20");
    let mut m = Measure::new("relative error", 1e-8);
    for n in 2..=20usize {
        for case in 0..1000 {
            let mut v = random_vector(rng, n);
            if case < 100 {
                // vanishing amplitudes at the top powers of the polynomial
                let zeros = rng.random_range(1..n);
                for x in v.iter_mut().skip(n - zeros) {
                    *x = Complex64::new(0.0, 0.0);
                }
                crate::oracles::normalize(&mut v);
            }
            let err = (|| -> holonomy::Result<_> {
                let psi = state(v.clone())?;
                let back = roots_to_coefficients(&coefficients_to_roots(&psi)?)?;
                Ok(relative_error_up_to_scalar(&v, amps(&back)))
            })();
            out.take(&mut m, err);
        }
    }
    out.with(m)
}

fn factorization_phase_sum(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(6, "Bargmann factorization phase sum, n=2..8");
    let mut sum = Measure::new("sum of factor phases", 1e-8);
    let mut reported = Measure::new("reported total phase", 1e-8);
    for n in 2..=8usize {
        for _ in 0..200 {
            let errs = (|| -> holonomy::Result<_> {
                let triad = random_triad(rng, n)?;
                let target = triad_phase(&triad);
                let red = reduce_triad(&triad)?;
                let xi = [red.xi.alpha(), red.xi.beta()];
                let up = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
                let phase: f64 = red
                    .rep3
                    .spinors
                    .iter()
                    .map(|s| bi_phase(&up, &xi, &[s.alpha(), s.beta()]))
                    .sum();
                let fac = bi_factorization(&red)?;
                Ok((circle_distance(phase, target), circle_distance(fac.total_phase, target)))
            })();
            match errs {
                Ok((a, b)) => {
                    sum.record(a);
                    reported.record(b);
                }
                Err(e) => out.error(e),
            }
        }
    }
    out.with(sum).with(reported)
}

fn two_solid_angles(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(7, "two-solid-angle phase, n=3");
    let mut m = Measure::new("phase error", 1e-8);
    for _ in 0..500 {
        let err = (|| -> holonomy::Result<_> {
            let triad = random_triad(rng, 3)?;
            let got = phase_from_solid_angles_n3(&triad)?.phase;
            Ok(circle_distance(got, triad_phase(&triad)))
        })();
        out.take(&mut m, err);
    }
    let mut golden = Measure::new("octant value -pi/4", 1e-12);
    let h = 0.5f64.sqrt();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let octant = (|| -> holonomy::Result<_> {
        let triad = Triad::new(
            state(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])?,
            state(vec![c(h, 0.0), c(h, 0.0), c(0.0, 0.0)])?,
            state(vec![c(h, 0.0), c(0.0, h), c(0.0, 0.0)])?,
        )?;
        Ok(circle_distance(phase_from_solid_angles_n3(&triad)?.phase, -FRAC_PI_4))
    })();
    out.take(&mut golden, octant);
    out.with(m).with(golden)
}

/// Largest `|Im Δ₃| / |Δ₃|` over subgrid triples, or infinity if some
/// `Re Δ₃ ≤ 0`.
fn worst_imaginary_ratio(lift: &CurveLift, subgrid: usize) -> f64 {
    let idx = subgrid_indices(lift.grid().samples, subgrid);
    let s: Vec<&[Complex64]> = idx.iter().map(|&i| amps(&lift.states()[i])).collect();
    let mut worst: f64 = 0.0;
    for a in 0..s.len() {
        for b in a + 1..s.len() {
            for c in b + 1..s.len() {
                let d = bargmann(s[a], s[b], s[c]);
                if d.re <= 0.0 {
                    return f64::INFINITY;
                }
                worst = worst.max(d.im.abs() / d.norm());
            }
        }
    }
    worst
}

fn npc_soundness(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(8, "NPC verifier soundness");
    let mut geo = Measure::new("geodesic relative Im", 1e-10);
    let mut family = Measure::new("epsilon family relative Im", 1e-10);
    let tol = Tolerances::default();
    for n in 2..=8usize {
        for _ in 0..100 {
            let res = (|| -> holonomy::Result<_> {
                let pair = in_phase_gauge(&state(random_vector(rng, n))?, &state(random_vector(rng, n))?)?;
                let lift = geodesic_lift(&pair.psi1, &pair.psi2, Grid::unit(257)?)?;
                let report = verify_npc(&lift, DEFAULT_SUBGRID, &tol)?;
                Ok((report.passed, worst_imaginary_ratio(&lift, DEFAULT_SUBGRID)))
            })();
            match res {
                Ok((true, w)) => geo.record(w),
                Ok((false, _)) => out.fail(format!("geodesic in dimension {n} rejected by verify_npc")),
                Err(e) => out.error(e),
            }
        }
    }
    for step in 1..=12 {
        let epsilon = 0.1 * step as f64;
        for k in 1..=5 {
            let theta0 = k as f64 * PI / 6.0;
            for n in [3usize, 5, 8] {
                let res = (|| -> holonomy::Result<_> {
                    let profile = generate_npc_profile(theta0, n, epsilon, Grid::unit(257)?)?;
                    let valid = validate_profile(&profile, theta0).is_valid();
                    let lift = profile_to_lift(&CurveFrame::standard(n, theta0)?, &profile)?;
                    let report = verify_npc(&lift, DEFAULT_SUBGRID, &tol)?;
                    Ok((valid && report.passed, worst_imaginary_ratio(&lift, DEFAULT_SUBGRID)))
                })();
                match res {
                    Ok((true, w)) => family.record(w),
                    Ok((false, _)) => out.fail(format!("profile eps={epsilon:.1} theta0={k}pi/6 n={n} rejected")),
                    Err(e) => out.error(e),
                }
            }
        }
    }
    out.with(geo).with(family)
}

fn random_frame(rng: &mut ChaCha8Rng, n: usize, theta0: f64) -> holonomy::Result<CurveFrame> {
    let u = UnitaryMatrix::random(n, rng);
    let basis = (0..n)
        .map(|j| StateVector::new(u.matrix().column(j).iter().copied().collect()))
        .collect::<holonomy::Result<Vec<_>>>()?;
    CurveFrame::new(basis, theta0)
}

fn horizontal_lift(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(9, "horizontal lift and gauge twist");
    let mut flat = Measure::new("|connection integral|", 1e-8);
    let mut twist = Measure::new("twist shift error", 1e-8);
    for _ in 0..100 {
        let n = rng.random_range(3..=6usize);
        let theta0 = rng.random_range(0.1..3.0);
        let epsilon = rng.random_range(0.0..1.2);
        let (a, b, c, d) = (
            rng.random_range(-2.0..2.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(0.0..6.0),
            rng.random_range(-2.0..2.0),
        );
        let chi = move |s: f64| a * s + b * (c * s).sin() + d * s * s;
        let res = (|| -> holonomy::Result<_> {
            let frame = random_frame(rng, n, theta0)?;
            let profile = generate_npc_profile(theta0, n, epsilon, Grid::unit(1025)?)?;
            let lift = profile_to_lift(&frame, &profile)?;
            let base = connection_integral(&lift, DEFAULT_QUADRATURE_TOLERANCE)?.value;
            let twisted = connection_integral(&lift.regauged(chi), DEFAULT_QUADRATURE_TOLERANCE)?.value;
            Ok((base.abs(), (twisted - base - (chi(1.0) - chi(0.0))).abs()))
        })();
        match res {
            Ok((x, y)) => {
                flat.record(x);
                twist.record(y);
            }
            Err(e) => out.error(e),
        }
    }
    out.with(flat).with(twist)
}

fn loop_invariance(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(10, "loop phase invariance");
    let mut geo = Measure::new("geodesic loop vs Bargmann phase", 1e-8);
    let mut swap = Measure::new("change with one NPC side", 1e-6);
    let tol = Tolerances::default();
    for _ in 0..50 {
        let res = (|| -> holonomy::Result<_> {
            let triad = random_triad(rng, 3)?;
            let v = triad.states();
            let grid = Grid::unit(257)?;
            let geodesics = (0..3)
                .map(|k| geodesic_lift(&v[k], &v[(k + 1) % 3], grid))
                .collect::<holonomy::Result<Vec<_>>>()?;
            let run = |segs: &[CurveLift]| {
                loop_geometric_phase(segs, DEFAULT_SUBGRID, DEFAULT_QUADRATURE_TOLERANCE, &tol).map(|l| l.phase)
            };
            let base = run(&geodesics)?;
            let mut changes = [0.0; 3];
            for (k, change) in changes.iter_mut().enumerate() {
                let mut segs = geodesics.clone();
                segs[k] = npc_lift_between(&v[k], &v[(k + 1) % 3], 0.5, grid)?;
                *change = circle_distance(run(&segs)?, base);
            }
            Ok((circle_distance(base, triad_phase(&triad)), changes))
        })();
        match res {
            Ok((e, changes)) => {
                geo.record(e);
                for c in changes {
                    swap.record(c);
                }
            }
            Err(e) => out.error(e),
        }
    }
    out.with(geo).with(swap)
}

fn su2_covariance(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(11, "SU(2) covariance");
    let mut delta = Measure::new("Bargmann invariant change", 1e-12);
    let mut pure = Measure::new("pure product image error", 1e-12);
    let mut stars = Measure::new("matched star distance", 1e-10);
    for _ in 0..200 {
        let n = rng.random_range(2..=10usize);
        let axis = random_unit_vector(rng);
        let t = angle(rng);
        let psis: Vec<Vec<Complex64>> = (0..3).map(|_| random_vector(rng, n)).collect();
        let xi = random_vector(rng, 2);
        let res = (|| -> holonomy::Result<_> {
            let u = Su2::from_axis_angle(axis, t)?;
            let moved = psis
                .iter()
                .map(|p| su2_apply(&u, &state(p.clone())?))
                .collect::<holonomy::Result<Vec<_>>>()?;
            let before = bargmann(&psis[0], &psis[1], &psis[2]);
            let after = bargmann(amps(&moved[0]), amps(&moved[1]), amps(&moved[2]));

            let image = su2_apply(&u, &state(pure_product(xi[0], xi[1], n))?)?;
            let uxi = apply2(&su2_matrix(axis, t), [xi[0], xi[1]]);
            let expected = pure_product(uxi[0], uxi[1], n);

            let rot = rodrigues(axis, t);
            let rotated = coefficients_to_roots(&state(psis[0].clone())?)?
                .stars()
                .iter()
                .map(|s| Star::from_direction(rotate(&rot, s.coords())))
                .collect::<holonomy::Result<Vec<_>>>()?;
            let found = coefficients_to_roots(&moved[0])?.stars();
            Ok((
                (before - after).norm(),
                relative_error_up_to_scalar(&expected, amps(&image)),
                matched_distance(&rotated, &found)?,
            ))
        })();
        match res {
            Ok((a, b, c)) => {
                delta.record(a);
                pure.record(b);
                stars.record(c);
            }
            Err(e) => out.error(e),
        }
    }
    out.with(delta).with(pure).with(stars)
}

fn gauge_behaviour(rng: &mut ChaCha8Rng) -> CriterionResult {
    let mut out = CriterionResult::new(12, "gauge behaviour of intrinsic angles");
    let mut theta = Measure::new("theta change", 1e-12);
    let mut sum = Measure::new("phi sum change", 1e-12);
    let mut shift = Measure::new("phi_jk shift error", 1e-12);
    for _ in 0..500 {
        let n = rng.random_range(2..=6usize);
        let alphas = [angle(rng), angle(rng), angle(rng)];
        let vs: Vec<Vec<Complex64>> = (0..3).map(|_| random_vector(rng, n)).collect();
        let res = (|| -> holonomy::Result<_> {
            let triad = Triad::new(state(vs[0].clone())?, state(vs[1].clone())?, state(vs[2].clone())?)?;
            let turned: Vec<StateVector> = vs
                .iter()
                .zip(alphas)
                .map(|(v, a)| state(v.iter().map(|x| x * Complex64::from_polar(1.0, a)).collect()))
                .collect::<holonomy::Result<_>>()?;
            let turned = Triad::new(turned[0].clone(), turned[1].clone(), turned[2].clone())?;
            let before = holonomy::angles::extract_angles(&triad)?;
            let after = holonomy::angles::extract_angles(&turned)?;
            let dtheta = before
                .thetas()
                .iter()
                .zip(after.thetas())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            let total = |p: [f64; 3]| p.iter().sum::<f64>();
            let dsum = circle_distance(total(before.phis()), total(after.phis()));
            // pairs (1,2), (2,3), (3,1)
            let pairs = [(0, 1), (1, 2), (2, 0)];
            let dshift = pairs
                .iter()
                .enumerate()
                .map(|(p, &(j, k))| {
                    circle_distance(after.phis()[p], before.phis()[p] - alphas[j] + alphas[k])
                })
                .fold(0.0, f64::max);
            Ok((dtheta, dsum, dshift))
        })();
        match res {
            Ok((a, b, c)) => {
                theta.record(a);
                sum.record(b);
                shift.record(c);
            }
            Err(e) => out.error(e),
        }
    }
    out.with(theta).with(sum).with(shift)
}
