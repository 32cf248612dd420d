//! Release gate: one test per headline guarantee, each printing a single
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; any FAIL also fails the corresponding test.

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::Instant;

use bessel_lattice::characters::{all_characters, DirichletCharacter, DirichletCharacterFamily};
use bessel_lattice::codes::{
    code_from_generators, dual_code, parity_check_code, verify_cwe_bessel,
    verify_macwilliams_bessel, LinearCode,
};
use bessel_lattice::exact::{rat_i64, Rat};
use bessel_lattice::heat::{
    code_heat_solution, eta_heat_limit, eta_heat_probe, heat_kernel_index,
    heat_solve_convolution, heat_solve_ode_oracle, kernel_window, InitialData,
};
use bessel_lattice::lattice::Lattice;
use bessel_lattice::lattice_sums::{discrete_torus_trace, lhs_bessel_sum, verify_identity};
use bessel_lattice::special::bessel_i_scaled;
use bessel_lattice::theta::{
    continuum_limit_probe, dedekind_eta, jacobi_theta_identity_check, sqrt_principal,
    ContinuumLimitSchedule,
};

fn report(name: &str, pass: bool, detail: &str) {
    println!(
        "[{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{name}: {detail}");
}

fn family(chi: DirichletCharacter, n: usize) -> DirichletCharacterFamily {
    DirichletCharacterFamily::new(vec![chi; n]).unwrap()
}

/// Random full-rank basis with all entries divisible by q and |det| <= 20.
fn random_basis(rng: &mut ChaCha8Rng, n: usize, q: i64) -> Vec<Vec<i64>> {
    loop {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| q * rng.gen_range(-2i64..=2)).collect())
            .collect();
        let det = match n {
            1 => rows[0][0],
            2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
            3 => {
                rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
                    - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
                    + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0])
            }
            _ => unreachable!(),
        };
        if det != 0 && det.abs() <= 20 {
            return rows;
        }
    }
}

fn random_offset(rng: &mut ChaCha8Rng) -> Rat {
    if rng.gen_bool(0.5) {
        Rat::zero()
    } else {
        let den = rng.gen_range(2i64..=8);
        rat_i64(rng.gen_range(-(den - 1)..den), den)
    }
}

#[test]
fn a01_twisted_identity_random_matrix() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let t_pool = [
        Complex64::new(0.5, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(1.0, 0.5),
    ];
    // the character modulus divides every basis entry, so |det| <= 20
    // forces q^n <= 20; pair each dimension with the moduli that fit
    let cases: [(usize, &[i64]); 3] = [(1, &[1, 3, 4, 12]), (2, &[1, 3, 4]), (3, &[1])];
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for (n, qs) in cases {
        for &q in qs {
            let chi = match q {
                1 => DirichletCharacter::trivial(),
                3 => DirichletCharacter::kronecker(-3).unwrap(),
                4 => DirichletCharacter::kronecker(-4).unwrap(),
                12 => DirichletCharacter::kronecker(12).unwrap(),
                _ => unreachable!(),
            };
            for _ in 0..20 {
                let lat = Lattice::from_i64(&random_basis(&mut rng, n, q)).unwrap();
                let fam = family(chi.clone(), n);
                let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-3i64..=3)).collect();
                let y: Vec<Rat> = (0..n).map(|_| random_offset(&mut rng)).collect();
                let t: Vec<Complex64> =
                    (0..n).map(|_| t_pool[rng.gen_range(0..3)]).collect();
                let rep = verify_identity(&lat, &fam, &x, &y, &t, 1e-9, false).unwrap();
                assert!(
                    rep.abs_residual < 1e-9 + rep.lhs_tail_bound,
                    "residual {} (tail {}) for n={n} q={q} x={x:?} y={y:?} t={t:?}",
                    rep.abs_residual,
                    rep.lhs_tail_bound
                );
                worst = worst.max(rep.abs_residual);
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "twisted identity, random basis matrix",
        elapsed < 60.0,
        &format!("{count} instances, worst residual {worst:.3e}, {elapsed:.1}s"),
    );
}

#[test]
fn a02_one_dimensional_closed_form() {
    let mut worst = 0.0f64;
    for m in 1i64..=8 {
        let lat = Lattice::from_i64(&[vec![m]]).unwrap();
        let fam = DirichletCharacterFamily::trivial(1);
        for x in -3i64..=3 {
            for t in [
                Complex64::new(0.5, 0.0),
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, 1.0),
            ] {
                let (lhs, _, _) =
                    lhs_bessel_sum(&lat, &fam, &[x], &[Rat::zero()], &[t], 1e-13).unwrap();
                // residue-class sum of e^{-t} I_a(t) over a = x mod m via
                // the discrete Fourier transform of the generating function
                let mut closed = Complex64::zero();
                for j in 0..m {
                    let theta = 2.0 * PI * j as f64 / m as f64;
                    closed += (t * theta.cos()).exp()
                        * Complex64::new(0.0, -theta * x as f64).exp();
                }
                closed /= m as f64;
                worst = worst.max((lhs - closed).norm());
            }
        }
    }
    report(
        "1-D residue-class sums vs closed form",
        worst < 1e-10,
        &format!("worst residual {worst:.3e}"),
    );
}

#[test]
fn a03_discrete_torus_trace() {
    let shapes: [&[u64]; 4] = [&[4], &[2, 3], &[4, 6], &[3, 3, 3]];
    let mut worst = 0.0f64;
    for m in shapes {
        for t in [0.5, 1.2] {
            let rep = discrete_torus_trace(m, Complex64::new(t, 0.0)).unwrap();
            worst = worst.max(rep.abs_residual);
        }
    }
    report(
        "discrete torus heat trace",
        worst < 1e-10,
        &format!("worst residual {worst:.3e}"),
    );
}

#[test]
fn a04_gauss_sums() {
    let k12 = DirichletCharacter::kronecker(12).unwrap();
    let g12 = (k12.gauss_sum() - 12f64.sqrt()).norm();

    let mut worst_mod = 0.0f64;
    let mut worst_dft = 0.0f64;
    let mut primitive_count = 0usize;
    for q in 1u64..=24 {
        for chi in all_characters(q) {
            if !chi.is_primitive() {
                continue;
            }
            primitive_count += 1;
            let g = chi.gauss_sum();
            worst_mod = worst_mod.max((g.norm_sqr() - q as f64).abs());
            // chi(n) * conj(G(chi)) should reproduce the additive transform
            let gc = chi.conj().gauss_sum();
            for n in 0..q as i64 {
                let mut dft = Complex64::zero();
                for a in 0..q as i64 {
                    dft += chi.conj().eval(a)
                        * Complex64::new(0.0, 2.0 * PI * (a * n) as f64 / q as f64).exp();
                }
                worst_dft = worst_dft.max((dft - chi.eval(n) * gc).norm());
            }
        }
    }
    report(
        "Gauss sums: value, modulus, finite Fourier transform",
        g12 < 1e-12 && worst_mod < 1e-10 && worst_dft < 1e-10,
        &format!(
            "G(12) residual {g12:.3e}, |G|^2 residual {worst_mod:.3e}, \
             DFT residual {worst_dft:.3e} over {primitive_count} primitive characters"
        ),
    );
}

#[test]
fn a05_eta_functional_equation() {
    let mut worst_gap = 0.0f64;
    let mut worst_inv = 0.0f64;
    for tau in [
        Complex64::new(0.0, 1.0),
        Complex64::new(0.3, 1.7),
        Complex64::new(0.5, 2.0),
    ] {
        let (series, product) = dedekind_eta(tau);
        worst_gap = worst_gap.max((series.complex() - product.complex()).norm());
        let (inv, _) = dedekind_eta(-1.0 / tau);
        worst_inv = worst_inv.max(
            (sqrt_principal(Complex64::new(0.0, 1.0) / tau) * inv.complex() - series.complex())
                .norm(),
        );
    }
    report(
        "Dedekind eta: two routes and the inversion law",
        worst_gap < 1e-12 && worst_inv < 1e-12,
        &format!("route gap {worst_gap:.3e}, inversion residual {worst_inv:.3e}"),
    );
}

#[test]
fn a06_jacobi_theta_identity() {
    let mut worst = 0.0f64;
    for t in [0.1, 0.25, 1.0, 5.0] {
        worst = worst.max(jacobi_theta_identity_check(t).abs_residual);
    }
    report(
        "Jacobi theta inversion",
        worst < 1e-13,
        &format!("worst residual {worst:.3e}"),
    );
}

#[test]
fn a07_continuum_limit() {
    let start = Instant::now();
    let schedules = [
        ContinuumLimitSchedule {
            l_values: vec![8, 16, 32, 64],
            lattice: Lattice::from_i64(&[vec![1]]).unwrap(),
            family: DirichletCharacterFamily::trivial(1),
            x: vec![0],
            y: vec![Rat::zero()],
            t: vec![0.5],
        },
        ContinuumLimitSchedule {
            l_values: vec![8, 16, 32, 64],
            lattice: Lattice::from_i64(&[vec![12]]).unwrap(),
            family: family(DirichletCharacter::kronecker(12).unwrap(), 1),
            x: vec![0],
            y: vec![Rat::zero()],
            t: vec![0.5],
        },
    ];
    let mut ok = true;
    let mut finals = Vec::new();
    for schedule in &schedules {
        let rows = continuum_limit_probe(schedule).unwrap();
        ok &= rows
            .windows(2)
            .all(|w| w[1].limit_residual < w[0].limit_residual);
        let last = rows.last().unwrap().limit_residual;
        ok &= last < 5e-3;
        finals.push(last);
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        "continuum scaling limit",
        ok && elapsed < 30.0,
        &format!("final residuals {finals:?}, {elapsed:.1}s"),
    );
}

/// Expands W(X+Y, X-Y)/|C| for a binary Hamming weight enumerator, exactly.
fn binary_macwilliams_transform(we: &[(u32, u64)], n: u32, size: i64) -> Vec<i64> {
    let binom = |n: u32, k: u32| -> i64 {
        (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
    };
    let mut out = vec![0i64; n as usize + 1];
    for &(w, coeff) in we {
        // (X+Y)^{n-w} (X-Y)^w: collect the Y-degree j coefficient
        for j in 0..=n {
            let mut c = 0i64;
            for a in 0..=j.min(n - w) {
                let b = j - a;
                if b > w {
                    continue;
                }
                let sign = if b % 2 == 0 { 1 } else { -1 };
                c += sign * binom(n - w, a) * binom(w, b);
            }
            out[j as usize] += coeff as i64 * c;
        }
    }
    assert!(out.iter().all(|c| c % size == 0));
    out.iter().map(|c| c / size).collect()
}

fn hamming_vector(code: &LinearCode) -> Vec<i64> {
    let n = code.length() as u32;
    let mut out = vec![0i64; n as usize + 1];
    for c in code.codewords() {
        let w = c.iter().filter(|&&v| v != 0).count();
        out[w] += 1;
    }
    out
}

#[test]
fn a08_code_identities() {
    let even3 = parity_check_code(2, 3, &[vec![1, 1, 1]]).unwrap();
    let codes: Vec<LinearCode> = vec![
        code_from_generators(2, 3, &[vec![1, 1, 1]]).unwrap(),
        code_from_generators(2, 5, &[vec![1, 1, 1, 1, 1]]).unwrap(),
        even3,
        code_from_generators(4, 1, &[vec![2]]).unwrap(),
        {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
            let gens: Vec<Vec<u64>> = (0..2)
                .map(|_| (0..4).map(|_| rng.gen_range(0u64..3)).collect())
                .collect();
            code_from_generators(3, 4, &gens).unwrap()
        },
    ];
    let mut worst = 0.0f64;
    for code in &codes {
        let dual = dual_code(code).unwrap();
        assert_eq!(
            code.size() as u128 * dual.size() as u128,
            (code.modulus() as u128).pow(code.length() as u32)
        );
        let n = code.length();
        let xs: [Vec<i64>; 2] = [vec![0; n], (0..n as i64).map(|j| j % 3 - 1).collect()];
        for x in &xs {
            for t in [Complex64::new(0.7, 0.0), Complex64::new(0.4, 0.2)] {
                let rep = verify_cwe_bessel(code, x, t, 1e-12).unwrap();
                worst = worst.max(rep.abs_residual);
                let rep = verify_macwilliams_bessel(code, x, t).unwrap();
                worst = worst.max(rep.abs_residual);
            }
        }
    }

    // binary length-3 repetition: the dual weight distribution must come out
    // of the exact polynomial transform with integer coefficients
    let rep3 = &codes[0];
    let transformed = binary_macwilliams_transform(
        &hamming_vector(rep3)
            .iter()
            .enumerate()
            .map(|(w, &c)| (w as u32, c as u64))
            .collect::<Vec<_>>(),
        3,
        rep3.size() as i64,
    );
    let exact_ok = transformed == hamming_vector(&dual_code(rep3).unwrap());

    report(
        "weight enumerator and dual-code identities",
        worst < 1e-9 && exact_ok,
        &format!("worst residual {worst:.3e}, polynomial transform exact: {exact_ok}"),
    );
}

#[test]
fn a09_heat_equation() {
    let start = Instant::now();

    // kernel mass
    let mut worst_mass = 0.0f64;
    for n in [1usize, 2, 3] {
        for t in [0.5, 5.0, 50.0] {
            let (radius, _) = kernel_window(n, t, 1e-15);
            let coord: f64 = (-radius..=radius)
                .map(|k| bessel_i_scaled(k, t / n as f64))
                .sum();
            worst_mass = worst_mass.max((coord.powi(n as i32) - 1.0).abs());
        }
    }

    // time-stepping oracle vs the kernel formula for a point source
    let mut worst_ode = 0.0f64;
    let lattices = [
        Lattice::from_i64(&[vec![1]]).unwrap(),
        Lattice::from_i64(&[vec![1, 0], vec![0, 1]]).unwrap(),
        Lattice::from_i64(&[vec![1, 1], vec![0, 1]]).unwrap(),
    ];
    for lat in &lattices {
        let n = lat.dimension();
        let t = 5.0;
        let oracle = heat_solve_ode_oracle(lat, &InitialData::Delta, t, 40, 0.05).unwrap();
        for k1 in -3i64..=3 {
            let k: Vec<i64> = std::iter::once(k1).chain(std::iter::repeat(0)).take(n).collect();
            worst_ode =
                worst_ode.max((oracle.value(&k).unwrap() - heat_kernel_index(n, &k, t)).abs());
        }
    }

    // coset initial data: closed formula vs convolution vs time stepping
    let mut worst_triple = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let cases = [
        (code_from_generators(2, 3, &[vec![1, 1, 1]]).unwrap(), vec![0i64, 0, 0]),
        (code_from_generators(4, 1, &[vec![2]]).unwrap(), vec![1i64]),
    ];
    for (code, x) in &cases {
        let n = code.length();
        let lat = Lattice::from_i64(
            &(0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let t = 1.5;
        let data = InitialData::CosetIndicator(code.clone());
        let conv = heat_solve_convolution(&lat, &data, t, 2).unwrap();
        let oracle = heat_solve_ode_oracle(&lat, &data, t, 2, 0.02).unwrap();
        let formula = code_heat_solution(code, x, t).unwrap();
        worst_triple = worst_triple.max((conv.value(x).unwrap() - formula).abs());
        worst_oracle = worst_oracle.max((oracle.value(x).unwrap() - formula).abs());
    }

    // 1-D even-sublattice coset: u(x, t) = (1 + (-1)^x e^{-2t}) / 2
    let two_z = code_from_generators(2, 1, &[]).unwrap();
    let mut worst_closed = 0.0f64;
    for x in -2i64..=2 {
        for t in [0.3f64, 1.0, 4.0] {
            let expect = 0.5 * (1.0 + (if x % 2 == 0 { 1.0 } else { -1.0 }) * (-2.0 * t).exp());
            worst_closed = worst_closed.max((code_heat_solution(&two_z, &[x], t).unwrap() - expect).abs());
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    report(
        "lattice heat equation",
        worst_mass < 1e-12
            && worst_ode < 1e-6
            && worst_triple < 1e-8
            && worst_oracle < 1e-6
            && worst_closed < 1e-10
            && elapsed < 30.0,
        &format!(
            "mass {worst_mass:.3e}, oracle {worst_ode:.3e}, coset triple {worst_triple:.3e}/{worst_oracle:.3e}, \
             closed form {worst_closed:.3e}, {elapsed:.1}s"
        ),
    );
}

#[test]
fn a10_eta_heat_probe() {
    let mut ok = true;
    let mut detail = String::new();
    for t in [0.2, 1.0] {
        let limit = eta_heat_limit(t);
        let e5 = (eta_heat_probe(5, t).unwrap() - limit).abs();
        let e25 = (eta_heat_probe(25, t).unwrap() - limit).abs();
        ok &= e25 < e5;
        detail.push_str(&format!("t={t}: {e5:.3e} -> {e25:.3e}; "));
    }
    report("eta limit of the rescaled heat probe", ok, detail.trim_end());
}
