//! Differential tests: the closed-form enumerators against the exhaustive
//! oracle, over randomized slopes, families and cone positions.

use num_bigint::BigInt;

use coneatoms_core::cone::{atoms_of_cone, classify, ConeSpec, RayDir, RaySpec};
use coneatoms_core::monoid::{enumerate_atoms, Family, SpecialMonoid};
use coneatoms_core::oracle::oracle_atoms_in_box;
use coneatoms_core::{ExactReal, LatticePoint, Unimodular};

fn split_mix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn pick(state: &mut u64, lo: i64, hi: i64) -> i64 {
    lo + (split_mix(state) % ((hi - lo + 1) as u64)) as i64
}

fn random_positive_slope(state: &mut u64) -> ExactReal {
    if split_mix(state).is_multiple_of(2) {
        ExactReal::ratio(pick(state, 1, 12), pick(state, 1, 12)).unwrap()
    } else {
        let d = [2, 3, 5, 6, 7, 13, 21][(split_mix(state) % 7) as usize];
        loop {
            let a = pick(state, -4, 6);
            let b = pick(state, 1, 3);
            let c = pick(state, 1, 4);
            let v = ExactReal::quadratic(a, b, c, d).unwrap();
            if v.is_positive() {
                return v;
            }
        }
    }
}

fn random_family(state: &mut u64) -> Family {
    match split_mix(state) % 4 {
        0 => Family::M,
        1 => Family::MCirc,
        2 => Family::MGt0,
        _ => Family::MCircGt0,
    }
}

#[test]
fn families_agree_with_the_oracle() {
    let mut state = 0x5eed_a10e_u64;
    for round in 0..40 {
        let spec = SpecialMonoid::new(random_family(&mut state), random_positive_slope(&mut state))
            .unwrap();
        let bound = pick(&mut state, 5, 60);
        let theorem = enumerate_atoms(&spec, bound).unwrap();
        let cone = ConeSpec::from_special(&spec);
        let oracle = oracle_atoms_in_box(&cone, bound).unwrap();
        assert_eq!(
            theorem.atoms, oracle.atoms,
            "round {round}: family {} alpha {} bound {bound}",
            spec.family(),
            spec.alpha()
        );
    }
}

fn random_ray(state: &mut u64) -> RayDir {
    if split_mix(state).is_multiple_of(2) {
        loop {
            let x = pick(state, -6, 6);
            let y = pick(state, -6, 6);
            if let Ok(dir) = RayDir::vector(x, y) {
                return dir;
            }
        }
    } else {
        let d = [2, 3, 5, 7, 13][(split_mix(state) % 5) as usize];
        let slope = loop {
            let a = pick(state, -5, 5);
            let b = if split_mix(state).is_multiple_of(2) { 1 } else { -1 };
            let c = pick(state, 1, 3);
            let v = ExactReal::quadratic(a, b, c, d).unwrap();
            if !v.is_rational() {
                break v;
            }
        };
        let x_sign = if split_mix(state).is_multiple_of(2) { 1 } else { -1 };
        RayDir::from_slope(x_sign, slope).unwrap()
    }
}

fn random_sector(state: &mut u64) -> ConeSpec {
    loop {
        let a = random_ray(state);
        let b = random_ray(state);
        let inc_a = split_mix(state).is_multiple_of(2);
        let inc_b = split_mix(state).is_multiple_of(2);
        let (low, high) = match a.cross_dir(&b) {
            1 => (RaySpec::new(a, inc_a), RaySpec::new(b, inc_b)),
            -1 => (RaySpec::new(b, inc_b), RaySpec::new(a, inc_a)),
            _ => continue,
        };
        return ConeSpec::sector(low, high).unwrap();
    }
}

fn random_unimodular(state: &mut u64) -> Unimodular {
    let mut m = Unimodular::identity();
    let factors = pick(state, 0, 6);
    for _ in 0..factors {
        let f = match split_mix(state) % 4 {
            0 => Unimodular::shear_x(pick(state, -2, 2)),
            1 => Unimodular::shear_y(pick(state, -2, 2)),
            2 => Unimodular::quarter_turn(),
            _ => Unimodular::new(0, 1, 1, 0).unwrap(),
        };
        m = f.compose(&m);
    }
    m
}

#[test]
fn transformed_cones_agree_with_the_oracle() {
    let mut state = 0xc0de_2024_u64;
    for round in 0..35 {
        let cone = random_sector(&mut state).transformed(&random_unimodular(&mut state));
        let bound = 20;
        let theorem = atoms_of_cone(&cone, bound).unwrap();
        let oracle = oracle_atoms_in_box(&cone, bound).unwrap();
        assert_eq!(
            theorem.atoms, oracle.atoms,
            "round {round}: cone {cone:?}"
        );
    }
}

#[test]
fn classification_membership_is_sound_on_random_cones() {
    let mut state = 0xface_feed_u64;
    for _ in 0..25 {
        let cone = random_sector(&mut state).transformed(&random_unimodular(&mut state));
        let class = classify(&cone).unwrap();
        assert!(class.phi.det() == 1 || class.phi.det() == -1);
        assert_eq!(
            class.phi.compose(&class.phi.inverse()),
            Unimodular::identity()
        );
        let mut sampled = 0;
        let mut state2 = split_mix(&mut state);
        while sampled < 1000 {
            let x = pick(&mut state2, -50, 50);
            let y = pick(&mut state2, -50, 50);
            let p = LatticePoint::new(x, y);
            assert_eq!(
                cone.contains(p),
                class.canonical.contains(class.phi.apply(p)),
                "membership through phi at {p}"
            );
            sampled += 1;
        }
    }
}

#[test]
fn krull_sectors_have_stable_finite_atom_sets() {
    // A sector is a Krull monoid exactly when both rays are rational and
    // included; then the atom set is finite and stops growing once the box
    // passes the largest convergent.
    let mut state = 0xbead_5eed_u64;
    for _ in 0..20 {
        let p = pick(&mut state, 1, 12);
        let q = pick(&mut state, 1, 12);
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        let alpha = ExactReal::ratio(p, q).unwrap();
        let spec = SpecialMonoid::new(Family::M, alpha).unwrap();
        let cone = ConeSpec::from_special(&spec);
        let flags = coneatoms_core::cone::monoid_properties(&cone);
        assert!(flags.krull);
        let b1 = 2 * (p + q);
        let small = atoms_of_cone(&cone, b1).unwrap();
        let large = atoms_of_cone(&cone, 4 * b1).unwrap();
        assert_eq!(small.atoms, large.atoms, "atom set stable for {p}/{q}");
        let count = coneatoms_core::monoid::closed_atom_count(
            &ExactReal::ratio(p, q).unwrap(),
        )
        .unwrap();
        assert_eq!(BigInt::from(small.atoms.len()), count);
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
