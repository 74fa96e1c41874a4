use std::f64::consts::{PI, TAU};

use approx::assert_relative_eq;
use bloch_braids::linalg::{eigenvalues_with, Solver};
use bloch_braids::braid::extract_braid_word;
use bloch_braids::spectrum::{dimer_bands_analytic, track, track_bands};
use bloch_braids::topology::{
    dimer_ep_lines, find_eps_k, find_eps_z, min_discriminant, phase_diagram, winding_number, Axis, EpLocation,
    SweepOptions,
};
use bloch_braids::{
    BraidWord, DimerParams, Execution, Letter, ModelSpec, Permutation, SamplePath, TrackOptions, TrimerParams,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn letter(strands: usize) -> impl Strategy<Value = Letter> {
    (1..strands, any::<bool>()).prop_map(|(g, pos)| if pos { Letter::pos(g) } else { Letter::neg(g) })
}

fn word(strands: usize) -> impl Strategy<Value = BraidWord> {
    prop::collection::vec(letter(strands), 0..16).prop_map(move |l| BraidWord::new(strands, l).unwrap())
}

fn words3() -> impl Strategy<Value = (BraidWord, BraidWord, BraidWord)> {
    (2usize..6).prop_flat_map(|n| (word(n), word(n), word(n)))
}

fn dimer() -> impl Strategy<Value = DimerParams> {
    (-2.0..2.0, -2.0..2.0, -2.0..2.0, -2.0..2.0, 1u32..4).prop_map(|(alpha, beta, delta, gamma, m)| DimerParams {
        alpha,
        beta,
        delta,
        gamma,
        m,
    })
}

fn model() -> impl Strategy<Value = ModelSpec> {
    prop_oneof![
        dimer().prop_map(ModelSpec::Dimer),
        (dimer(), -2.0..2.0).prop_map(|(d, v)| ModelSpec::Trimer(TrimerParams {
            alpha: d.alpha,
            beta: d.beta,
            delta: d.delta,
            gamma: d.gamma,
            v,
            m: d.m,
        })),
    ]
}

fn nearest(z: Complex64, set: &[Complex64]) -> f64 {
    set.iter().map(|w| (z - w).norm()).fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn concat_is_associative_with_identity((a, b, c) in words3()) {
        let left = a.concat(&b).unwrap().concat(&c).unwrap();
        let right = a.concat(&b.concat(&c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(a.concat(&BraidWord::identity(a.strands())).unwrap(), a.clone());
    }

    #[test]
    fn permutation_is_a_homomorphism((a, b, _) in words3()) {
        let ab = a.concat(&b).unwrap();
        prop_assert_eq!(ab.induced_permutation(), a.induced_permutation().then(&b.induced_permutation()));
        prop_assert_eq!(ab.exponent_sum(), a.exponent_sum() + b.exponent_sum());
        prop_assert_eq!(a.inverse().induced_permutation(), a.induced_permutation().inverse());
    }

    #[test]
    fn inverses_cancel((a, _, _) in words3()) {
        prop_assert!(a.concat(&a.inverse()).unwrap().free_reduce().is_empty());
        prop_assert!(a.inverse().concat(&a).unwrap().free_reduce().is_empty());
        prop_assert_eq!(a.inverse().inverse(), a.clone());
        prop_assert_eq!(a.inverse().exponent_sum(), -a.exponent_sum());
    }

    #[test]
    fn reductions_keep_invariants((a, _, _) in words3()) {
        for reduced in [a.free_reduce(), a.cyclic_reduce()] {
            prop_assert_eq!(reduced.exponent_sum(), a.exponent_sum());
            prop_assert!(reduced.len() <= a.len());
        }
        prop_assert_eq!(a.free_reduce().induced_permutation(), a.induced_permutation());
        let r = a.canonical_rotation();
        prop_assert!(r.cyclically_equivalent(&a.cyclic_reduce()));
        prop_assert_eq!(r.clone(), r.canonical_rotation());
    }

    #[test]
    fn rotations_are_cyclically_equivalent((a, _, _) in words3(), by in 0usize..20) {
        let r = a.rotated(by);
        prop_assert!(r.cyclically_equivalent(&a));
        prop_assert_eq!(r.exponent_sum(), a.exponent_sum());
        // conjugate permutations share their cycle type
        let lens = |p: Permutation| {
            let mut l: Vec<usize> = p.cycles().iter().map(|c| c.len()).collect();
            l.sort_unstable();
            l
        };
        prop_assert_eq!(lens(r.induced_permutation()), lens(a.induced_permutation()));
    }

    #[test]
    fn braid_relations_agree_on_invariants(n in 1usize..4, far in 3usize..5) {
        let strands = 5;
        let w = |s: &str| BraidWord::parse(s, strands).unwrap();
        let (a, b) = (n, n + 1);
        let lhs = w(&format!("t{a} t{b} t{a}"));
        let rhs = w(&format!("t{b} t{a} t{b}"));
        prop_assert_eq!(lhs.induced_permutation(), rhs.induced_permutation());
        prop_assert_eq!(lhs.exponent_sum(), rhs.exponent_sum());
        if far.abs_diff(n) > 1 {
            let x = w(&format!("t{n} t{far}"));
            let y = w(&format!("t{far} t{n}"));
            prop_assert_eq!(x.induced_permutation(), y.induced_permutation());
        }
    }

    #[test]
    fn permutation_serde_round_trip((a, _, _) in words3()) {
        let p = a.induced_permutation();
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<Permutation>(&text).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigenvalues_conserve_trace_and_determinant(spec in model(), k in 0.0..TAU) {
        let h = spec.at_momentum(k);
        let e = spec.energies_at(k);
        let scale = 1.0 + h.max_abs();
        let sum: Complex64 = e.iter().sum();
        let prod: Complex64 = e.iter().product();
        prop_assert!((sum - h.trace()).norm() < 1e-8 * scale);
        prop_assert!((prod - h.determinant()).norm() < 1e-8 * scale.powi(e.len() as i32));
    }

    #[test]
    fn gain_loss_flip_conjugates_the_spectrum(spec in model(), k in 0.0..TAU) {
        let g = spec.param("gamma").unwrap();
        let flipped = spec.with_param("gamma", -g).unwrap();
        let e = spec.energies_at(k);
        let scale = 1.0 + spec.at_momentum(k).max_abs();
        for z in flipped.energies_at(k) {
            prop_assert!(nearest(z.conj(), &e) < 1e-10 * scale);
        }
    }

    #[test]
    fn closed_form_matches_schur(spec in model(), k in 0.0..TAU) {
        let h = spec.at_momentum(k);
        let closed = eigenvalues_with(&h, Solver::Closed).unwrap();
        let general = eigenvalues_with(&h, Solver::General).unwrap();
        let scale = 1.0 + h.max_abs();
        for z in &closed {
            prop_assert!(nearest(*z, &general) < 1e-8 * scale);
        }
    }

    #[test]
    fn dimer_closed_form_bands(p in dimer(), k in 0.0..TAU) {
        let spec = ModelSpec::Dimer(p);
        let (lo, hi) = dimer_bands_analytic(&p, k);
        let e = spec.energies_at(k);
        let scale = 1.0 + spec.at_momentum(k).max_abs();
        prop_assert!(nearest(lo, &e) < 1e-8 * scale);
        prop_assert!(nearest(hi, &e) < 1e-8 * scale);
    }
}

/// Plain golden-section minimization, kept separate from the library's.
fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    while b - a > 1e-12 {
        let (c, d) = (b - r * (b - a), a + r * (b - a));
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

#[test]
fn dimer_ep_lines_match_numerical_minima() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    while checked < 100 {
        let (alpha, beta): (f64, f64) = (rng.gen_range(0.3..2.0), rng.gen_range(0.3..2.0));
        if (beta - alpha).abs() < 0.25 {
            continue;
        }
        let base = DimerParams {
            alpha,
            beta,
            delta: 0.3,
            gamma: 0.0,
            m: 1,
        };
        for line in dimer_ep_lines(alpha, beta, 1).lines {
            let spec = |gamma: f64| ModelSpec::Dimer(DimerParams { gamma, ..base });
            let gap = |gamma: f64| min_discriminant(&spec(gamma)).unwrap().1;
            let found = golden(gap, line.gamma - 0.1, line.gamma + 0.1);
            assert!(
                (found - line.gamma).abs() < 1e-5,
                "alpha {alpha}, beta {beta}: minimum at {found}, line at {}",
                line.gamma
            );
            let eps = find_eps_k(&spec(line.gamma)).unwrap();
            assert!(eps.iter().any(|ep| matches!(ep.location,
                EpLocation::Momentum { k } if (k - line.k).abs().min(TAU - (k - line.k).abs()) < 1e-6)
                && ep.energy.norm() < 1e-8));
        }
        checked += 1;
    }
}

fn dimer_spec(gamma: f64, m: u32) -> ModelSpec {
    ModelSpec::Dimer(DimerParams {
        alpha: 1.0,
        beta: 1.5,
        delta: 0.3,
        gamma,
        m,
    })
}

#[test]
fn winding_is_stable_under_refinement() {
    let zero = Complex64::new(0.0, 0.0);
    for gamma in [-2.0, -1.0, -0.2, 0.3, 1.0, 2.2, 3.0] {
        let coarse = winding_number(&dimer_spec(gamma, 1), zero, 64).unwrap();
        let fine = winding_number(&dimer_spec(gamma, 1), zero, 8192).unwrap();
        assert_eq!(coarse.nu, fine.nu, "gamma {gamma}");
        assert_relative_eq!(coarse.raw, fine.raw, epsilon = 1e-6);
    }
}

#[test]
fn winding_scales_with_hopping_range() {
    let zero = Complex64::new(0.0, 0.0);
    for gamma in [-1.0, 1.0, 2.0] {
        let base = winding_number(&dimer_spec(gamma, 1), zero, 512).unwrap().nu;
        assert_ne!(base, 0);
        for m in 2..=4 {
            assert_eq!(winding_number(&dimer_spec(gamma, m), zero, 512).unwrap().nu, m as i64 * base);
        }
    }
}

#[test]
fn extracted_words_flip_with_gain_and_loss() {
    for (spec, k0) in [
        (dimer_spec(1.0, 1), 0.0),
        (dimer_spec(1.0, 3), 0.0),
        (
            ModelSpec::Trimer(TrimerParams {
                alpha: 1.0,
                beta: -1.2,
                delta: 0.3,
                gamma: 0.7,
                v: 0.7,
                m: 1,
            }),
            PI / 4.0,
        ),
    ] {
        let g = spec.param("gamma").unwrap();
        let w = |s: &ModelSpec| extract_braid_word(&track_bands(s, k0, 512).unwrap()).unwrap();
        let plus = w(&spec);
        let minus = w(&spec.with_param("gamma", -g).unwrap());
        let flipped = BraidWord::new(plus.strands(), plus.letters().iter().map(|l| l.inverse()).collect()).unwrap();
        assert!(minus.cyclically_equivalent(&flipped), "{plus} vs {minus}");
    }
}

/// The swap case's z-plane EPs are genuine double roots of the
/// characteristic polynomial, and the Riemann loop at |z| = 1 agrees with
/// the Brillouin-zone closure.
#[test]
fn swap_case_zplane_eps() {
    let spec = ModelSpec::Trimer(TrimerParams {
        alpha: 1.0,
        beta: -1.2,
        delta: 0.3,
        gamma: 0.7,
        v: 0.7,
        m: 1,
    });
    let eps = find_eps_z(&spec).unwrap();
    assert!(!eps.is_empty());
    for ep in &eps {
        assert!(ep.discriminant < 1e-8, "{ep:?}");
    }
    let zone = track_bands(&spec, 0.0, 512).unwrap();
    let loop_ = bloch_braids::spectrum::riemann_loop(&spec, 1.0, 512).unwrap();
    assert_eq!(zone.closure.cycles().len(), loop_.closure.cycles().len());
}

fn swap_case(beta: f64, m: u32) -> ModelSpec {
    ModelSpec::Trimer(TrimerParams {
        alpha: 1.0,
        beta,
        delta: 0.3,
        gamma: 0.7,
        v: 0.7,
        m,
    })
}

fn cycle_type(p: &Permutation) -> Vec<usize> {
    let mut l: Vec<usize> = p.cycles().iter().map(|c| c.len()).collect();
    l.sort_unstable();
    l
}

#[test]
fn exponent_sum_does_not_depend_on_the_base_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in [dimer_spec(1.0, 3), swap_case(-1.2, 1), swap_case(1.2, 2)] {
        let reference = extract_braid_word(&track_bands(&spec, 0.3, 512).unwrap()).unwrap();
        let closure = track_bands(&spec, 0.3, 512).unwrap().closure;
        for _ in 0..10 {
            let k0 = rng.gen_range(0.0..TAU);
            let t = track_bands(&spec, k0, 512).unwrap();
            let w = extract_braid_word(&t).unwrap();
            assert_eq!(w.exponent_sum(), reference.exponent_sum(), "k0 {k0}");
            assert_eq!(w.induced_permutation(), t.closure);
            assert_eq!(cycle_type(&t.closure), cycle_type(&closure));
        }
    }
}

#[test]
fn dimer_winding_is_odd_in_gamma() {
    let zero = Complex64::new(0.0, 0.0);
    for gamma in [0.2, 0.8, 1.3, 2.0, 2.8] {
        for m in 1..=3 {
            let plus = winding_number(&dimer_spec(gamma, m), zero, 512).unwrap().nu;
            let minus = winding_number(&dimer_spec(-gamma, m), zero, 512).unwrap().nu;
            assert_eq!(plus, -minus, "gamma {gamma}, m {m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn bloch_matrices_are_periodic_with_known_trace(spec in model(), k in 0.0..TAU) {
        let (h, shifted) = (spec.at_momentum(k), spec.at_momentum(k + TAU));
        for (a, b) in h.entries().iter().zip(shifted.entries()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        let delta = spec.param("delta").unwrap();
        let m = spec.param("m").unwrap();
        let trace = match spec {
            ModelSpec::Dimer(_) => Complex64::from(2.0 * delta * (m * k).sin()),
            _ => Complex64::from(spec.param("v").unwrap() - 2.0 * delta * (2.0 * m * k).sin()),
        };
        let sum: Complex64 = spec.energies_at(k).iter().sum();
        prop_assert!((sum - trace).norm() < 1e-10 * (1.0 + h.max_abs()));
    }
}

#[test]
fn trajectories_close_on_their_start_points() {
    for spec in [dimer_spec(1.0, 3), dimer_spec(-0.2, 1), swap_case(-1.2, 1), swap_case(1.2, 2)] {
        let t = track_bands(&spec, 0.1, 512).unwrap();
        let last = t.grid.len() - 1;
        for n in 0..t.band_count() {
            let end = t.bands[n][last];
            let start = t.bands[t.closure.image(n)][0];
            assert!((end - start).norm() < 1e-8, "band {n}: {end} vs {start}");
        }
    }
}

#[test]
fn solver_choice_does_not_move_tracked_bands() {
    for spec in [dimer_spec(1.0, 2), swap_case(-1.2, 1), swap_case(1.2, 1)] {
        let with = |solver| {
            let opts = TrackOptions {
                solver,
                ..TrackOptions::default()
            };
            track(&spec, SamplePath::Momentum, 0.5, &opts).unwrap()
        };
        let (closed, general) = (with(Solver::Closed), with(Solver::General));
        assert_eq!(closed.grid, general.grid);
        assert_eq!(closed.closure, general.closure);
        for (a, b) in closed.bands.iter().zip(&general.bands) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).norm() < 1e-8);
            }
        }
    }
}

#[test]
fn sweeps_match_across_execution_modes() {
    let beta = Axis::new("beta", -2.0, 2.0, 9).unwrap();
    let gamma = Axis::new("gamma", 0.05, 1.0, 7).unwrap();
    let run = |execution| {
        let opts = SweepOptions {
            k0: PI / 4.0,
            execution,
            ..SweepOptions::default()
        };
        phase_diagram(&swap_case(1.0, 1), &beta, &gamma, &opts).unwrap()
    };
    assert_eq!(run(Execution::Sequential), run(Execution::Parallel));
}

/// The EP pair (−0.51, 1.15) expected for the swap cases matches the energies
/// of z-plane EPs inside the unit disc, not their locations.
#[test]
fn swap_case_ep_pair_reads_as_zplane_energies() {
    for beta in [-1.2, 1.2] {
        let eps = find_eps_z(&swap_case(beta, 1)).unwrap();
        let inside: Vec<(Complex64, Complex64)> = eps
            .iter()
            .filter_map(|ep| match ep.location {
                EpLocation::Z { z } if z.norm() < 1.0 => Some((z, ep.energy)),
                _ => None,
            })
            .collect();
        let energies: Vec<Complex64> = inside.iter().map(|p| p.1).collect();
        let locations: Vec<Complex64> = inside.iter().map(|p| p.0).collect();
        for (target, tol) in [(-0.51, 0.2), (1.15, 0.1)] {
            let t = Complex64::from(target);
            assert!(nearest(t, &energies) < tol, "beta {beta}: no EP energy near {target}");
            assert!(nearest(t, &locations) > 0.25, "beta {beta}: EP located near {target}");
        }
    }
}
