use landau_core::fit::*;
use landau_core::hopfield::{linspace, CouplingSet};
use landau_core::SampleParams;

fn truth() -> CouplingSet {
    CouplingSet::normalized(0.925, 0.18, &[(1, 0.084), (3, 0.084)]).unwrap()
}

fn peaks(noise: f64, seed: u64) -> PeakDataset {
    let spec = SyntheticSpec {
        fields: linspace(0.1, 4.0, 79),
        relative_noise: noise,
        seed,
        min_photon_weight: DEFAULT_MIN_PHOTON_WEIGHT,
    };
    synthetic_peaks(&SampleParams::gaas_slot_sample(), &truth(), &spec).unwrap()
}

fn problem(scale: CouplingScale, shared: bool) -> FitProblem {
    let f = match scale {
        CouplingScale::Absolute => 0.925,
        CouplingScale::Normalized => 1.0,
    };
    let mut free = vec![ParamSpec::new(FreeParam::Cr, 0.05 * f, 0.3 * f, 0.15 * f)];
    if shared {
        free.push(ParamSpec::new(FreeParam::SharedMp, 0.01 * f, 0.2 * f, 0.07 * f));
    } else {
        free.push(ParamSpec::new(FreeParam::Mp(1), 0.01 * f, 0.2 * f, 0.07 * f));
        free.push(ParamSpec::new(FreeParam::Mp(3), 0.01 * f, 0.2 * f, 0.07 * f));
    }
    let start = CouplingSet::normalized(0.925, 0.15, &[(1, 0.07), (3, 0.07)]).unwrap();
    FitProblem::new(SampleParams::gaas_slot_sample(), start, free)
        .unwrap()
        .with_scale(scale)
}

fn relative_errors(r: &FitResult) -> (f64, f64) {
    let g = (r.couplings.cr_coupling.thz() / truth().cr_coupling.thz() - 1.0).abs();
    let gn = r
        .couplings
        .mp_couplings
        .iter()
        .map(|(n, g)| (g.thz() / truth().mp_couplings[n].thz() - 1.0).abs())
        .fold(0.0, f64::max);
    (g, gn)
}

#[test]
fn noiseless_recovery_per_mode() {
    let r = fit(&problem(CouplingScale::Normalized, false), &peaks(0.0, 0)).unwrap();
    let (g, gn) = relative_errors(&r);
    assert!(r.converged && g < 1e-3 && gn < 1e-3, "{g} {gn}");
    assert!(r.residual_rms < 1e-6);
}

#[test]
fn noisy_recovery_over_twenty_seeds() {
    let p = problem(CouplingScale::Normalized, true);
    let mut worst = (0.0f64, 0.0f64);
    for seed in 0..20 {
        let r = fit(&p, &peaks(0.005, seed)).unwrap();
        let (g, gn) = relative_errors(&r);
        worst = (worst.0.max(g), worst.1.max(gn));
    }
    assert!(worst.0 < 0.02 && worst.1 < 0.05, "{worst:?}");
}

#[test]
fn absolute_and_normalized_scales_agree() {
    let data = peaks(0.005, 3);
    let a = fit(&problem(CouplingScale::Absolute, true), &data).unwrap();
    let b = fit(&problem(CouplingScale::Normalized, true), &data).unwrap();
    assert!((a.couplings.cr_coupling.thz() - b.couplings.cr_coupling.thz()).abs() < 1e-6);
    for (x, y) in a.couplings.mp_couplings.values().zip(b.couplings.mp_couplings.values()) {
        assert!((x.thz() - y.thz()).abs() < 1e-6);
    }
}

#[test]
fn heavier_weight_never_increases_that_residual() {
    let p = problem(CouplingScale::Normalized, true);
    let mut violations = 0;
    let trials = 12;
    for seed in 0..trials {
        let data = peaks(0.005, 100 + seed);
        let base = fit(&p, &data).unwrap();
        let i = (seed as usize * 17) % data.len();
        let mut heavier = data.clone();
        heavier.set_weight(i, 2.0).unwrap();
        let r = fit(&p, &heavier).unwrap();
        if r.assignments[i].residual.abs() > base.assignments[i].residual.abs() + 1e-6 {
            violations += 1;
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn shared_parameter_drops_one_dimension() {
    let shared = problem(CouplingScale::Normalized, true);
    let separate = problem(CouplingScale::Normalized, false);
    assert_eq!(shared.free.len() + 1, separate.free.len());
    let r = fit(&shared, &peaks(0.0, 0)).unwrap();
    assert!(r.converged);
    let g1 = r.couplings.mp_couplings[&1];
    assert_eq!(g1, r.couplings.mp_couplings[&3]);
}

#[test]
fn identical_inputs_give_identical_results() {
    let p = problem(CouplingScale::Normalized, true);
    assert_eq!(fit(&p, &peaks(0.005, 5)).unwrap(), fit(&p, &peaks(0.005, 5)).unwrap());
}
