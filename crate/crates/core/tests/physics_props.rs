use landau_core::physics::*;
use landau_core::{Frequency, SampleParams};
use proptest::prelude::*;

fn sample(density: f64, mass: f64, eps: f64) -> SampleParams {
    SampleParams {
        electron_density: density,
        effective_mass_ratio: mass,
        rel_permittivity: eps,
        ..SampleParams::gaas_slot_sample()
    }
}

proptest! {
    #[test]
    fn plasmon_scales_with_sqrt_k(k in 1e4f64..1e7, ratio in 1.1f64..20.0,
                                  density in 1e14f64..1e17, mass in 0.02f64..0.5, eps in 1.0f64..20.0) {
        let s = sample(density, mass, eps);
        let a = plasmon_frequency(k, &s).unwrap().thz();
        let b = plasmon_frequency(k * ratio, &s).unwrap().thz();
        prop_assert!((b / a / ratio.sqrt() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn magnetoplasmon_is_pythagorean(k in 1e4f64..1e7, field in 0.0f64..20.0, mass in 0.02f64..0.5) {
        let s = sample(3.6e15, mass, 6.98);
        let p = plasmon_frequency(k, &s).unwrap().thz();
        let c = cyclotron_frequency(field, &s).unwrap().thz();
        let mp = magnetoplasmon_frequency(k, field, &s).unwrap().thz();
        prop_assert!((mp * mp - p * p - c * c).abs() <= 1e-12 * mp * mp);
        prop_assert!(mp >= p && mp >= c);
    }

    #[test]
    fn zero_detuning_round_trip(n in prop::sample::select(vec![1u32, 3, 5, 7]), target in 0.5f64..3.0) {
        let s = SampleParams::gaas_slot_sample();
        let k = slot_momentum(n, s.slot_width).unwrap();
        let floor = plasmon_frequency(k, &s).unwrap().thz();
        match zero_detuning_field(Frequency::from_thz(target), k, &s) {
            Ok(b) => {
                let back = magnetoplasmon_frequency(k, b, &s).unwrap().thz();
                prop_assert!((back / target - 1.0).abs() < 1e-12);
            }
            Err(_) => prop_assert!(target < floor),
        }
    }

    #[test]
    fn frequencies_grow_with_field(n in prop::sample::select(vec![1u32, 3, 5]), b in 0.0f64..10.0, db in 1e-3f64..1.0) {
        let s = SampleParams::gaas_slot_sample();
        prop_assert!(slot_mode_frequency(n, b + db, &s).unwrap().thz() > slot_mode_frequency(n, b, &s).unwrap().thz());
        prop_assert!(cyclotron_frequency(b + db, &s).unwrap().thz() > cyclotron_frequency(b, &s).unwrap().thz());
    }

    #[test]
    fn higher_modes_lie_higher(b in 0.0f64..10.0) {
        let s = SampleParams::gaas_slot_sample();
        let f1 = slot_mode_frequency(1, b, &s).unwrap().thz();
        let f3 = slot_mode_frequency(3, b, &s).unwrap().thz();
        let f5 = slot_mode_frequency(5, b, &s).unwrap().thz();
        prop_assert!(f1 < f3 && f3 < f5);
    }
}

#[test]
fn even_modes_rejected() {
    let s = SampleParams::gaas_slot_sample();
    assert!(slot_mode_frequency(2, 1.0, &s).is_err());
    assert!(slot_momentum(0, 4e-6).is_err());
}
