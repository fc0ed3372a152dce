use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use solenoid_xsec_core::spinor::{
    current_sq_avg, current_sq_uniform, free_spinor, helicity_spinor, slash, transverse_transfer,
    FourVector, GammaSet, Matrix4, Spin,
};
use solenoid_xsec_core::units::Helicity;
use std::f64::consts::PI;

const MC: f64 = 1.0;

/// Elastic pair in the plane transverse to the solenoid with |p| = p and angle θ.
fn planar_pair(p: f64, theta: f64, phase: f64) -> (FourVector, FourVector) {
    let pi = FourVector::on_shell(MC, [p * phase.cos(), p * phase.sin(), 0.0]);
    (pi, pi.rotate_x3(theta))
}

#[test]
fn spin_sum_three_routes_agree_on_random_kinematics() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let p = rng.gen_range(0.1..=100.0) * MC;
        let theta = PI - rng.gen_range(0.0..PI);
        let (pi, pf) = planar_pair(p, theta, rng.gen_range(0.0..2.0 * PI));
        let s = current_sq_avg(&pi, &pf, MC).unwrap();
        worst = worst.max(s.max_rel_disagreement());
    }
    assert!(worst < 1e-10, "{worst}");
}

/// Oracle for the explicit sum: Σ_s u ū = (p̸ + m)/(2m) in the ūu = 1
/// normalization, so (1/2)ΣΣ|ū_f M u_i|² = Tr[(p̸_f+m) M (p̸_i+m) M̄] / (8m²).
fn projector_trace(pi: &FourVector, pf: &FourVector, m: &Matrix4) -> f64 {
    let g = GammaSet::bjorken_drell();
    let mass = Matrix4::identity().scale(Complex64::new(MC, 0.0));
    let g0 = g.gamma[0];
    let m_bar = g0 * m.adjoint() * g0;
    let t = (slash(pf, &g) + mass) * *m * (slash(pi, &g) + mass) * m_bar;
    t.trace().re / (8.0 * MC * MC)
}

#[test]
fn explicit_spin_sum_matches_projector_trace() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let g = GammaSet::bjorken_drell();
    for _ in 0..100 {
        let p = rng.gen_range(0.1..10.0);
        let (pi, pf) = planar_pair(p, rng.gen_range(0.01..PI), rng.gen_range(0.0..2.0 * PI));
        let k = slash(&transverse_transfer(&pi, &pf), &g);
        let oracle = projector_trace(&pi, &pf, &k) * (2.0 * MC) * (2.0 * MC);
        let s = current_sq_avg(&pi, &pf, MC).unwrap();
        assert!((s.explicit - oracle).abs() <= 1e-10 * oracle.abs().max(1e-12));
    }
}

#[test]
fn uniform_current_matches_trace_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let mut v = || {
            [
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
                rng.gen_range(-5.0..5.0),
            ]
        };
        let pi = FourVector::on_shell(MC, v());
        let pf = FourVector::on_shell(MC, v());
        let c = current_sq_uniform(&pi, &pf, MC).unwrap();
        assert!(c.rel_disagreement() < 1e-10, "{}", c.rel_disagreement());
    }
}

#[test]
fn spinor_density_and_dirac_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = GammaSet::bjorken_drell();
    for _ in 0..50 {
        let p = FourVector::on_shell(
            MC,
            [
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            ],
        );
        let ps = slash(&p, &g);
        for spin in [Spin::Up, Spin::Down] {
            let u = free_spinor(&p, MC, spin).unwrap();
            assert!((u.scalar_norm() - 1.0).abs() < 1e-12);
            assert!((u.density() - p.t / MC).abs() < 1e-12 * p.t);
            let lhs = ps.apply(&u.components);
            for (a, b) in lhs.iter().zip(u.components.iter()) {
                assert!((a - b * MC).norm() < 1e-12 * p.t);
            }
        }
    }
}

#[test]
fn spin_sum_is_rotation_invariant_about_the_axis() {
    let (pi, pf) = planar_pair(2.5, 1.1, 0.0);
    let base = current_sq_avg(&pi, &pf, MC).unwrap().value();
    for k in 1..8 {
        let a = k as f64 * 0.7;
        let v = current_sq_avg(&pi.rotate_x3(a), &pf.rotate_x3(a), MC)
            .unwrap()
            .value();
        assert!((v / base - 1.0).abs() < 1e-12);
    }
    let mirrored = current_sq_avg(&pi, &pi.rotate_x3(-1.1), MC)
        .unwrap()
        .value();
    assert!((mirrored / base - 1.0).abs() < 1e-12);
}

#[test]
fn helicity_basis_gives_same_sum_over_final_states() {
    // summing over final helicities equals summing over final spins
    let g = GammaSet::bjorken_drell();
    let (pi, pf) = planar_pair(1.7, 2.0, 0.3);
    let k = slash(&transverse_transfer(&pi, &pf), &g);
    for si in [Spin::Up, Spin::Down] {
        let ui = free_spinor(&pi, MC, si).unwrap();
        let spins: f64 = [Spin::Up, Spin::Down]
            .iter()
            .map(|&sf| {
                free_spinor(&pf, MC, sf)
                    .unwrap()
                    .sandwich(&k, &ui)
                    .norm_sqr()
            })
            .sum();
        let hels: f64 = [Helicity::Plus, Helicity::Minus]
            .iter()
            .map(|&h| {
                helicity_spinor(&pf, MC, h)
                    .unwrap()
                    .sandwich(&k, &ui)
                    .norm_sqr()
            })
            .sum();
        assert!((spins - hels).abs() < 1e-12 * spins.max(1.0));
    }
}

#[test]
fn helicity_flip_amplitude_vanishes_and_conserving_matches_average() {
    let g = GammaSet::bjorken_drell();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..50 {
        let (pi, pf) = planar_pair(
            rng.gen_range(0.1..50.0),
            rng.gen_range(0.05..PI),
            rng.gen_range(0.0..6.0),
        );
        let k = slash(&transverse_transfer(&pi, &pf), &g);
        let avg = current_sq_avg(&pi, &pf, MC).unwrap().value();
        for h in [Helicity::Plus, Helicity::Minus] {
            let ui = helicity_spinor(&pi, MC, h).unwrap();
            let keep = helicity_spinor(&pf, MC, h)
                .unwrap()
                .sandwich(&k, &ui)
                .norm_sqr()
                * 4.0
                * MC
                * MC;
            let other = if h == Helicity::Plus {
                Helicity::Minus
            } else {
                Helicity::Plus
            };
            let flip = helicity_spinor(&pf, MC, other)
                .unwrap()
                .sandwich(&k, &ui)
                .norm_sqr()
                * 4.0
                * MC
                * MC;
            assert!(flip <= 1e-20 * avg.max(1.0), "{flip}");
            assert!((keep / avg - 1.0).abs() < 1e-10);
        }
    }
}
