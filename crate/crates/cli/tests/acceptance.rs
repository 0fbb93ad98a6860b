//! Acceptance suite: one test per criterion, each printing a pass line
//! with its elapsed time and asserting its runtime budget.
//!
//! Everything here is exact — set equalities and integer identities with
//! zero tolerance; the only measured quantities are wall-clock budgets.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use coneatoms_core::cone::{
    atoms_of_cone, b4_witness_decomposition, monoid_properties, ConeSpec, RayDir, RaySpec,
};
use coneatoms_core::contfrac::{cf_expand, ConvergentTable};
use coneatoms_core::monoid::{
    atoms_closed, closed_atom_count, enumerate_atoms, Family, SpecialMonoid,
};
use coneatoms_core::oracle::oracle_atoms_in_box;
use coneatoms_core::{ExactReal, LatticePoint, Unimodular};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn coprime_pairs(limit: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for p in 1..=limit {
        for q in 1..=limit {
            if gcd(p, q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

fn quadratic_corpus() -> Vec<ExactReal> {
    let q = |a: i64, b: i64, c: i64, d: i64| ExactReal::quadratic(a, b, c, d).unwrap();
    vec![
        q(1, 1, 2, 5),   // golden ratio
        q(0, 1, 1, 2),   // sqrt 2
        q(0, 1, 1, 3),   // sqrt 3
        q(3, 1, 2, 5),   // (3 + sqrt 5)/2
        q(3, -1, 2, 5),  // (3 - sqrt 5)/2
        q(1, 1, 1, 2),   // 1 + sqrt 2
        q(1, 1, 2, 13),  // (1 + sqrt 13)/2
        q(2, 1, 1, 2),   // 2 + sqrt 2
        q(0, 1, 1, 5),   // sqrt 5
        q(5, 1, 2, 21),  // (5 + sqrt 21)/2
    ]
}

fn pass(criterion: u32, what: &str, elapsed: Duration, budget: Duration) {
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its {budget:?} budget: {elapsed:?}"
    );
    println!("criterion {criterion} PASS ({elapsed:?}): {what}");
}

#[test]
fn criterion_1_closed_family_count_law() {
    let start = Instant::now();
    for (p, q) in coprime_pairs(12) {
        let alpha = ExactReal::ratio(p, q).unwrap();
        let bound = 2 * (p + q);
        let report = atoms_closed(&alpha, bound).unwrap();
        let expected = closed_atom_count(&alpha).unwrap();
        assert_eq!(
            BigInt::from(report.atoms.len()),
            expected,
            "count law at {p}/{q}"
        );
        let spec = SpecialMonoid::new(Family::M, alpha).unwrap();
        let oracle = oracle_atoms_in_box(&ConeSpec::from_special(&spec), bound).unwrap();
        assert_eq!(report.atoms.len(), oracle.atoms.len(), "oracle count at {p}/{q}");
        assert_eq!(report.atoms, oracle.atoms, "oracle set at {p}/{q}");
    }
    pass(
        1,
        "closed-family atom count = 1 + even-indexed quotient sum = oracle count, all p/q <= 12",
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_2_rational_corpus_oracle_equality() {
    let start = Instant::now();
    for (p, q) in coprime_pairs(12) {
        for family in [Family::M, Family::MCirc, Family::MGt0, Family::MCircGt0] {
            let spec =
                SpecialMonoid::new(family, ExactReal::ratio(p, q).unwrap()).unwrap();
            let theorem = enumerate_atoms(&spec, 40).unwrap();
            let oracle = oracle_atoms_in_box(&ConeSpec::from_special(&spec), 40).unwrap();
            assert_eq!(theorem.atoms, oracle.atoms, "{family:?} at {p}/{q}");
        }
    }
    pass(
        2,
        "all four families equal the oracle at bound 40 for every p/q <= 12",
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_3_quadratic_corpus_oracle_equality() {
    let start = Instant::now();
    for alpha in quadratic_corpus() {
        for family in [Family::M, Family::MGt0] {
            let spec = SpecialMonoid::new(family, alpha.clone()).unwrap();
            let theorem = enumerate_atoms(&spec, 100).unwrap();
            let oracle = oracle_atoms_in_box(&ConeSpec::from_special(&spec), 100).unwrap();
            assert_eq!(theorem.atoms, oracle.atoms, "{family:?} at {alpha}");
        }
    }
    pass(
        3,
        "quadratic corpus equals the oracle at bound 100 for both tested families",
        start.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_4_fibonacci_atoms_of_the_golden_ratio() {
    let start = Instant::now();
    let phi = ExactReal::quadratic(1, 1, 2, 5).unwrap();
    let report = atoms_closed(&phi, 1000).unwrap();
    let expected: Vec<LatticePoint> = [
        (1, 0),
        (1, 1),
        (2, 3),
        (5, 8),
        (13, 21),
        (34, 55),
        (89, 144),
        (233, 377),
        (610, 987),
    ]
    .iter()
    .map(|&(x, y)| LatticePoint::new(x, y))
    .collect();
    assert_eq!(report.atoms, expected);
    pass(
        4,
        "golden-ratio atoms in box 1000 are exactly the odd-step consecutive Fibonacci pairs",
        start.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_5_irrational_half_plane_has_no_atoms() {
    let start = Instant::now();
    for alpha in [
        ExactReal::quadratic(1, 1, 2, 5).unwrap(),
        ExactReal::sqrt(2).unwrap(),
    ] {
        for x in -30i64..=30 {
            for y in -30i64..=30 {
                let h = LatticePoint::new(x, y);
                if h.is_origin() {
                    continue;
                }
                let member = alpha
                    .cmp_mul_int(&BigInt::from(x), &BigInt::from(y))
                    != std::cmp::Ordering::Less;
                if !member {
                    continue;
                }
                let (a, b) = b4_witness_decomposition(&alpha, h)
                    .unwrap_or_else(|e| panic!("no witness for {h} at {alpha}: {e}"));
                assert_eq!(a + b, h, "witness sums at {h}");
                for part in [a, b] {
                    assert!(!part.is_origin(), "nonzero parts at {h}");
                    assert!(
                        alpha.cmp_mul_int(&BigInt::from(part.x), &BigInt::from(part.y))
                            != std::cmp::Ordering::Less,
                        "member parts at {h}"
                    );
                }
            }
        }
    }
    pass(
        5,
        "every nonzero element below an irrational slope splits into two nonzero members",
        start.elapsed(),
        Duration::from_secs(10),
    );
}

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

fn random_ray(state: &mut u64) -> RayDir {
    if split_mix(state).is_multiple_of(2) {
        loop {
            let x = pick(state, -5, 5);
            let y = pick(state, -5, 5);
            if let Ok(dir) = RayDir::vector(x, y) {
                return dir;
            }
        }
    } else {
        let d = [2, 3, 5, 7, 13][(split_mix(state) % 5) as usize];
        let slope = loop {
            let a = pick(state, -4, 4);
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

/// Product of at most six elementary factors: unit shears, the quarter
/// turn, and the coordinate swap.
fn random_unimodular(state: &mut u64) -> Unimodular {
    let mut m = Unimodular::identity();
    for _ in 0..pick(state, 0, 6) {
        let f = match split_mix(state) % 4 {
            0 => Unimodular::shear_x(if split_mix(state).is_multiple_of(2) { 1 } else { -1 }),
            1 => Unimodular::shear_y(if split_mix(state).is_multiple_of(2) { 1 } else { -1 }),
            2 => Unimodular::quarter_turn(),
            _ => Unimodular::new(0, 1, 1, 0).unwrap(),
        };
        m = f.compose(&m);
    }
    m
}

#[test]
fn criterion_6_transformed_cones_match_the_oracle() {
    let start = Instant::now();
    let mut state = 0x6006_1e55_u64;
    for round in 0..50 {
        let cone = random_sector(&mut state).transformed(&random_unimodular(&mut state));
        assert!(cone.is_sector(), "transforms preserve strict convexity");
        let theorem = atoms_of_cone(&cone, 30).unwrap();
        let oracle = oracle_atoms_in_box(&cone, 30).unwrap();
        assert_eq!(theorem.atoms, oracle.atoms, "round {round}: {cone:?}");
    }
    pass(
        6,
        "50 random unimodular images of random sectors equal the oracle at bound 30",
        start.elapsed(),
        Duration::from_secs(300),
    );
}

#[test]
fn criterion_7_continued_fraction_identity_suite() {
    let start = Instant::now();
    let mut state = 0x001d_ea11_u64;
    let mut checked = 0usize;
    while checked < 1000 {
        let value = if checked.is_multiple_of(2) {
            ExactReal::ratio(pick(&mut state, 1, 2000), pick(&mut state, 1, 2000)).unwrap()
        } else {
            let d = [2, 3, 5, 6, 7, 11, 13, 19, 21, 94][(split_mix(&mut state) % 10) as usize];
            ExactReal::quadratic(
                pick(&mut state, 0, 40),
                pick(&mut state, 1, 6),
                pick(&mut state, 1, 9),
                d,
            )
            .unwrap()
        };
        if !value.is_positive() {
            continue;
        }
        checked += 1;
        let cf = cf_expand(&value, 40);
        let available = cf.term_count().map(|n| n as i64 - 1).unwrap_or(18);
        let mut table = ConvergentTable::new(cf);
        // First determinant identity at every index.
        for n in -1..=available {
            let (pn, qn) = table.convergent(n).unwrap();
            let (pm, qm) = table.convergent(n - 1).unwrap();
            let expect = if (n - 1).rem_euclid(2) == 0 { 1 } else { -1 };
            assert_eq!(&pn * &qm - &pm * &qn, BigInt::from(expect), "{value} n={n}");
        }
        // Second determinant identity at every index.
        for n in 0..=available {
            let (pn, qn) = table.convergent(n).unwrap();
            let (pm, qm) = table.convergent(n - 2).unwrap();
            let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
            assert_eq!(
                &pn * &qm - &pm * &qn,
                BigInt::from(sign) * table.quotient(n).unwrap(),
                "{value} n={n}"
            );
        }
        // Strictly increasing chain of second convergents at even indices,
        // bounded by the value itself.
        let mut n = -2i64;
        while n + 2 <= available {
            let row = table.second_convergents(n).unwrap();
            for w in row.windows(2) {
                let a = ExactReal::ratio(w[0].0.clone(), w[0].1.clone());
                let b = ExactReal::ratio(w[1].0.clone(), w[1].1.clone());
                if let (Ok(a), Ok(b)) = (a, b) {
                    assert_eq!(a.compare(&b), std::cmp::Ordering::Less, "{value} n={n}");
                }
            }
            let (pl, ql) = row.last().unwrap().clone();
            let last = ExactReal::ratio(pl, ql).unwrap();
            assert_ne!(
                value.compare(&last),
                std::cmp::Ordering::Less,
                "{value} chain cap at n={n}"
            );
            n += 2;
        }
    }
    pass(
        7,
        "determinant identities and the monotone chain hold on 1000 random expansions",
        start.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_8_property_flags_are_consistent() {
    let start = Instant::now();
    for (p, q) in coprime_pairs(12) {
        let alpha = ExactReal::ratio(p, q).unwrap();
        for family in [Family::M, Family::MCirc, Family::MGt0, Family::MCircGt0] {
            let spec = SpecialMonoid::new(family, alpha.clone()).unwrap();
            let cone = ConeSpec::from_special(&spec);
            let flags = monoid_properties(&cone);
            assert!(flags.root_closed);
            assert_eq!(
                flags.primary_reduced,
                family == Family::MCircGt0,
                "openness flags at {family:?} {p}/{q}"
            );
            let b1 = 2 * (p + q);
            let small = atoms_of_cone(&cone, b1).unwrap();
            let large = atoms_of_cone(&cone, 2 * b1).unwrap();
            if flags.krull {
                // Finite complete atom set, already certified at b1.
                assert_eq!(small.atoms, large.atoms, "stable at {family:?} {p}/{q}");
                assert_eq!(
                    BigInt::from(small.atoms.len()),
                    closed_atom_count(&alpha).unwrap()
                );
            } else {
                assert!(
                    large.atoms.len() > small.atoms.len(),
                    "non-Krull atom sets keep growing at {family:?} {p}/{q}"
                );
            }
            assert_eq!(flags.krull, family == Family::M);
            assert!(!flags.krull || flags.completely_integrally_closed);
        }
    }
    pass(
        8,
        "Krull flag matches finite stable atom sets; reduced-primary matches boundary openness",
        start.elapsed(),
        Duration::from_secs(60),
    );
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/goldens")
}

fn run_tool(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_coneatoms"))
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
        out.status.code().expect("exit code"),
    )
}

fn expect_golden(name: &str, args: &[&str]) {
    let (stdout, stderr, code) = run_tool(args);
    assert_eq!(code, 0, "{name}: exit code, stderr: {stderr}");
    let want = std::fs::read_to_string(golden_dir().join(name)).expect("golden exists");
    assert_eq!(stdout, want, "{name}: byte-identical output");
}

#[test]
fn criterion_9_cli_golden_outputs() {
    let start = Instant::now();
    expect_golden(
        "atoms_m_5_2.json.golden",
        &["atoms", "--family", "M", "--alpha", "5/2", "--bound", "10"],
    );
    expect_golden(
        "atoms_m_5_2.csv.golden",
        &[
            "atoms", "--family", "M", "--alpha", "5/2", "--bound", "10", "--format", "csv",
        ],
    );
    expect_golden(
        "atoms_mo_3.json.golden",
        &["atoms", "--family", "Mo", "--alpha", "3", "--bound", "11"],
    );
    expect_golden(
        "atoms_mogt0_1_2.json.golden",
        &[
            "atoms", "--family", "Mogt0", "--alpha", "1/2", "--bound", "9",
        ],
    );
    expect_golden(
        "cone_m_5_2.json.golden",
        &["cone", "--spec", "sector_m_5_2.json", "--bound", "10"],
    );
    expect_golden(
        "cone_mo_3.json.golden",
        &["cone", "--spec", "sector_mo_3.json", "--bound", "11"],
    );
    expect_golden(
        "cone_mogt0_1_2.json.golden",
        &["cone", "--spec", "sector_mogt0_1_2.json", "--bound", "9"],
    );
    expect_golden(
        "cone_mixed.json.golden",
        &["cone", "--spec", "sector_mixed.json", "--bound", "5"],
    );
    expect_golden(
        "cone_b4_phi.json.golden",
        &["cone", "--spec", "halfplane_b4_phi.json", "--bound", "10"],
    );
    for (golden, spec) in [
        ("verify_m_5_2.golden", "sector_m_5_2.json"),
        ("verify_mo_3.golden", "sector_mo_3.json"),
        ("verify_mogt0_1_2.golden", "sector_mogt0_1_2.json"),
        ("verify_mixed.golden", "sector_mixed.json"),
    ] {
        expect_golden(golden, &["verify", "--spec", spec, "--bound", "20"]);
    }
    // The irrational half-plane is not strictly convex; the oracle refuses
    // it with its dedicated exit code rather than guessing.
    let (_, stderr, code) = run_tool(&["verify", "--spec", "halfplane_b4_phi.json", "--bound", "10"]);
    assert_eq!(code, 5);
    assert!(stderr.contains("strictly convex"));
    // The slope-phi sector is strictly convex and verifies cleanly.
    let phi_spec = r#"{"kind":"sector","rays":[{"dir":{"vector":[1,0]},"included":true},{"dir":{"x_sign":1,"slope":"(1+1*sqrt(5))/2"},"included":false}]}"#;
    let dir = golden_dir();
    let tmp = dir.join("_tmp_phi_sector.json");
    std::fs::write(&tmp, phi_spec).unwrap();
    let (stdout, _, code) = run_tool(&["verify", "--spec", "_tmp_phi_sector.json", "--bound", "25"]);
    std::fs::remove_file(&tmp).ok();
    assert_eq!(code, 0);
    assert!(stdout.starts_with("verify ok:"));
    pass(
        9,
        "CLI outputs for the worked examples are byte-identical to the goldens; verify exits 0",
        start.elapsed(),
        Duration::from_secs(60),
    );
}
