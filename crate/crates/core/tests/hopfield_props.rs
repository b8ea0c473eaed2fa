use landau_core::eigen;
use landau_core::hopfield::*;
use landau_core::physics::{cyclotron_frequency, slot_mode_frequency};
use landau_core::SampleParams;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn paper_fit() -> CouplingSet {
    CouplingSet::normalized(0.925, 0.18, &[(1, 0.084), (3, 0.084)]).unwrap()
}

fn random_case(rng: &mut ChaCha8Rng) -> (CouplingSet, f64) {
    let modes = rng.random_range(0..=4usize);
    let mp: Vec<(u32, f64)> = (0..modes).map(|i| (2 * i as u32 + 1, rng.random_range(0.0..0.3))).collect();
    let c = CouplingSet::normalized(rng.random_range(0.5..1.5), rng.random_range(0.0..0.3), &mp).unwrap();
    (c, rng.random_range(0.05..7.0))
}

#[test]
fn bogoliubov_norm_is_unity() {
    let s = SampleParams::gaas_slot_sample();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let (c, b) = random_case(&mut rng);
        let branches = positive_branches(&c, b, &s, eigen::DEFAULT_TOLERANCE).unwrap();
        assert_eq!(branches.len(), c.matter_mode_count() + 1);
        for (_, coeffs) in branches {
            assert!((coeffs.bogoliubov_norm() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn combined_spectrum_is_closed_under_mirror() {
    let s = SampleParams::gaas_slot_sample();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let (c, b) = random_case(&mut rng);
        let mut all: Vec<Complex64> = Vec::new();
        for set in [OperatorSet::CrActive, OperatorSet::CrInactive] {
            all.extend(eigen::eigenvalues(&build_matrix_for(&c, b, &s, set).unwrap().entries).unwrap());
        }
        for z in &all {
            let mirror = -z.conj();
            let nearest = all.iter().map(|w| (w - mirror).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-9, "{z} has no mirror partner");
        }
    }
}

#[test]
fn inactive_spectrum_is_the_active_mirror() {
    let s = SampleParams::gaas_slot_sample();
    let c = paper_fit();
    let mut active = eigen::eigenvalues(&build_matrix(&c, 1.7, &s).unwrap().entries).unwrap();
    let mut inactive = eigen::eigenvalues(&build_matrix_for(&c, 1.7, &s, OperatorSet::CrInactive).unwrap().entries).unwrap();
    active.sort_by(|a, b| a.re.total_cmp(&b.re));
    inactive.sort_by(|a, b| b.re.total_cmp(&a.re));
    for (a, i) in active.iter().zip(&inactive) {
        assert!((a + i.conj()).norm() < 1e-9, "{a} vs {i}");
    }
}

#[test]
fn weak_coupling_deviation_is_quadratic() {
    // Away from every resonance, branches shift from the bare modes as O(s²).
    let s = SampleParams::gaas_slot_sample();
    let b = 4.0;
    let mut bare = vec![
        0.925,
        cyclotron_frequency(b, &s).unwrap().thz(),
        slot_mode_frequency(1, b, &s).unwrap().thz(),
        slot_mode_frequency(3, b, &s).unwrap().thz(),
    ];
    bare.sort_by(f64::total_cmp);
    let deviation = |scale: f64| {
        let c = paper_fit().scaled(scale);
        positive_branches(&c, b, &s, eigen::DEFAULT_TOLERANCE)
            .unwrap()
            .iter()
            .zip(&bare)
            .map(|((f, _), b0)| (f.thz() - b0).abs())
            .fold(0.0, f64::max)
    };
    let (d1, d2, d3) = (deviation(0.04), deviation(0.02), deviation(0.01));
    assert!((d1 / d2 - 4.0).abs() < 0.1 && (d2 / d3 - 4.0).abs() < 0.05, "{d1} {d2} {d3}");
}

#[test]
fn branches_are_symplectically_orthonormal() {
    let s = SampleParams::gaas_slot_sample();
    for b in [0.5, 1.25, 2.51, 5.0] {
        let branches = positive_branches(&paper_fit(), b, &s, eigen::DEFAULT_TOLERANCE).unwrap();
        let vec_of = |c: &HopfieldCoefficients| {
            let mut v = vec![c.photon, c.photon_anomalous, c.cyclotron];
            v.extend(c.magnetoplasmons.iter().copied());
            v
        };
        for (i, (_, a)) in branches.iter().enumerate() {
            for (j, (_, c)) in branches.iter().enumerate() {
                let (u, v) = (vec_of(a), vec_of(c));
                let dot: Complex64 = u
                    .iter()
                    .zip(&v)
                    .enumerate()
                    .map(|(k, (x, y))| if k == 1 { -x.conj() * y } else { x.conj() * y })
                    .sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).norm() < 1e-9, "B = {b}, ({i}, {j}): {dot}");
            }
        }
    }
}

#[test]
fn sweep_labels_are_continuous_and_ordered() {
    let s = SampleParams::gaas_slot_sample();
    let spectrum = polariton_sweep(&paper_fit(), &s, &linspace(0.05, 7.0, 200)).unwrap();
    assert_eq!(spectrum.branch_count(), 4);
    for p in &spectrum.points {
        let f: Vec<f64> = p.branches.iter().map(|b| b.frequency.thz()).collect();
        assert!(f.windows(2).all(|w| w[0] <= w[1]));
    }
}
