//! Acceptance criteria 1-10, one pass/fail line each. Runs without the libtest
//! harness so the report is printed on success too.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toric_dt::charcalc::{edge_e, restrict_cy, taylor_poincare, vertex_v, EdgeFrame, Laurent2};
use toric_dt::dtsum::{
    gw_expansion, reconstruct_part, reduced, symmetry_check, z_dt, QPoly, RationalFn,
};
use toric_dt::geometry::builtin;
use toric_dt::gwref::{
    asymptotic_tail_check, bernoulli_table, inverse_sine_square, lambda_cube, macmahon_coeffs,
};
use toric_dt::partitions::{enumerate2d_upto, enumerate3d, minimal3d};
use toric_dt_cli::{prepare, run_check, Check, RunConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn degree0_macmahon() -> Outcome {
    let start = Instant::now();
    let c3 = z_dt(&builtin("c3").unwrap(), &[], 8).unwrap();
    let c3_ok = c3.part(&[]).unwrap().coeffs == macmahon_coeffs(8, true, 1);
    let conifold = z_dt(&builtin("conifold").unwrap(), &[0], 6).unwrap();
    let con_ok = conifold.part(&[0]).unwrap().coeffs == macmahon_coeffs(6, true, 2);
    let elapsed = start.elapsed();
    outcome(
        c3_ok && con_ok && elapsed < Duration::from_secs(60),
        format!("c3 through q^8 {c3_ok}, conifold M(-q)^2 through q^6 {con_ok}, {}", secs(elapsed)),
    )
}

fn sign_theorem() -> Outcome {
    let start = Instant::now();
    let mut details = Vec::new();
    let mut passed = true;
    for (geometry, beta, n) in [("conifold", 2, 5), ("local_p2", 1, 4)] {
        let config = RunConfig {
            beta_max: Some(vec![beta]),
            n_max: n,
            checks: vec![Check::SignOracle],
            seed: 20_240_601,
            ..RunConfig::new(geometry)
        };
        let report = run_check(Check::SignOracle, &config, &prepare(&config).unwrap()).unwrap();
        passed &= report.passed;
        details.push(format!("{geometry}: {}", report.summary));
    }
    let elapsed = start.elapsed();
    outcome(
        passed && elapsed < Duration::from_secs(300),
        format!("{}, {}", details.join("; "), secs(elapsed)),
    )
}

fn conifold_function() -> RationalFn {
    RationalFn::new(QPoly::from_ints(&[0, 1]), QPoly::from_ints(&[1, 2, 1]), 0)
}

fn conifold_reconstruction() -> Result<(RationalFn, usize), String> {
    let z = z_dt(&builtin("conifold").unwrap(), &[1], 9).map_err(|e| e.to_string())?;
    let r = reduced(&z, Some(9)).map_err(|e| e.to_string())?;
    let part = r.part(&[1]).ok_or("no degree-1 part")?;
    let supplied = (part.start + part.coeffs.len() as i64) as usize;
    let verification = supplied - (1 + 2 + 1);
    let f = reconstruct_part(part, (1, 2), 2).map_err(|e| e.to_string())?;
    Ok((f, verification))
}

fn conifold_rationality() -> Outcome {
    match conifold_reconstruction() {
        Ok((f, verification)) => {
            let ok = f == conifold_function() && verification >= 2 && symmetry_check(&f);
            outcome(ok, format!("{f} with {verification} verification coefficients, symmetric {}", symmetry_check(&f)))
        }
        Err(e) => outcome(false, e),
    }
}

fn conifold_gw() -> Outcome {
    let f = match conifold_reconstruction() {
        Ok((f, _)) => f,
        Err(e) => return outcome(false, e),
    };
    let u = match gw_expansion(&f, 6) {
        Ok(u) => u,
        Err(e) => return outcome(false, e.to_string()),
    };
    let oracle = inverse_sine_square(6);
    let all_match = (-2..=6).all(|k| u.coeff(k) == oracle.coeff(k));
    let named = u.coeff(-2) == int(1)
        && u.coeff(0) == frac(1, 12)
        && u.coeff(2) == frac(1, 240)
        && u.coeff(4) == frac(1, 6048);
    outcome(
        all_match && named,
        format!(
            "u^-2: {}, u^0: {}, u^2: {}, u^4: {}, u^6: {}",
            u.coeff(-2),
            u.coeff(0),
            u.coeff(2),
            u.coeff(4),
            u.coeff(6)
        ),
    )
}

/// Degree-1 reduced coefficients of local P², `q^1 … q^7`, frozen from the
/// fixed-point enumeration.
const LOCAL_P2_DEGREE_ONE: [i64; 7] = [3, -6, 9, -12, 15, -18, 21];

fn local_p2_rationality() -> Outcome {
    let z = z_dt(&builtin("local_p2").unwrap(), &[1], 7).unwrap();
    let r = reduced(&z, None).unwrap();
    let part = r.part(&[1]).unwrap();
    let frozen: Vec<BigRational> = LOCAL_P2_DEGREE_ONE.iter().map(|&c| int(c)).collect();
    let regression = part.start == 1 && part.coeffs == frozen;
    match reconstruct_part(part, (1, 2), 2) {
        Ok(f) => {
            let symmetric = symmetry_check(&f);
            outcome(
                regression && symmetric,
                format!("frozen coefficients match {regression}, {f}, symmetric {symmetric}"),
            )
        }
        Err(e) => outcome(false, format!("frozen coefficients match {regression}, {e}")),
    }
}

fn odd_without_constant(f: &Laurent2) -> bool {
    f.bar() == -f && f.constant_term().is_zero()
}

fn character_properties() -> Outcome {
    let legs = enumerate2d_upto(3);
    let (mut vertices, mut edges, mut failures) = (0usize, 0usize, Vec::new());
    for a in &legs {
        for b in &legs {
            for c in &legs {
                let l = [a.clone(), b.clone(), c.clone()];
                let min = minimal3d(l.clone()).renorm_volume();
                for pi in enumerate3d(l, min + 4).unwrap() {
                    vertices += 1;
                    match vertex_v(&pi) {
                        Ok(v) if odd_without_constant(&restrict_cy(&v)) => {}
                        Ok(_) => failures.push(format!("{pi:?}: parity")),
                        Err(e) => failures.push(format!("{pi:?}: {e}")),
                    }
                }
            }
        }
    }
    let frames = [EdgeFrame::new(-1, -1), EdgeFrame::new(0, -2), EdgeFrame::new(1, -3)];
    for lambda in enumerate2d_upto(4) {
        for frame in frames {
            edges += 1;
            match edge_e(&lambda, frame) {
                Ok(e) if odd_without_constant(&restrict_cy(&e)) => {}
                Ok(_) => failures.push(format!("{lambda} {frame:?}: parity")),
                Err(e) => failures.push(format!("{lambda} {frame:?}: {e}")),
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{vertices} vertex and {edges} edge characters, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(" (first: {f})")).unwrap_or_default()
        ),
    )
}

const WINDOW: usize = 9;

/// Taylor-resolution trace and the direct count of standard monomials agree
/// on `[0, 8]³`.
fn taylor_matches(gens: &[[i64; 3]]) -> bool {
    let at = |x: usize, y: usize, z: usize| (x * WINDOW + y) * WINDOW + z;
    let mut grid = vec![0i64; WINDOW * WINDOW * WINDOW];
    grid[0] = 1;
    for (e, c) in taylor_poincare(gens).terms() {
        grid[at(e[0] as usize, e[1] as usize, e[2] as usize)] += c.to_i64().expect("small coefficient");
    }
    // Dividing by Π(1 − t_i) is a prefix sum along each axis.
    for axis in 0..3 {
        for x in 0..WINDOW {
            for y in 0..WINDOW {
                for z in 0..WINDOW {
                    let mut p = [x, y, z];
                    if p[axis] == 0 {
                        continue;
                    }
                    p[axis] -= 1;
                    grid[at(x, y, z)] += grid[at(p[0], p[1], p[2])];
                }
            }
        }
    }
    (0..grid.len()).all(|k| {
        let a = [(k / (WINDOW * WINDOW)) as i64, (k / WINDOW % WINDOW) as i64, (k % WINDOW) as i64];
        let in_ideal = gens.iter().any(|g| (0..3).all(|i| g[i] <= a[i]));
        grid[k] == i64::from(!in_ideal)
    })
}

const RANDOM_IDEALS_PER_SIZE: usize = 3000;

fn taylor_identity() -> Outcome {
    let monomials: Vec<[i64; 3]> = (0..125).map(|k| [k / 25, k / 5 % 5, k % 5]).collect();
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut check = |gens: &[[i64; 3]], checked: &mut usize| {
        *checked += 1;
        if !taylor_matches(gens) && failures.len() < 3 {
            failures.push(format!("{gens:?}"));
        }
    };
    // Every generating set of size at most 3.
    for i in 0..125 {
        check(&[monomials[i]], &mut checked);
        for j in i + 1..125 {
            check(&[monomials[i], monomials[j]], &mut checked);
            for k in j + 1..125 {
                check(&[monomials[i], monomials[j], monomials[k]], &mut checked);
            }
        }
    }
    let exhaustive = checked;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for size in 4..=6 {
        for _ in 0..RANDOM_IDEALS_PER_SIZE {
            let gens: Vec<[i64; 3]> = sample(&mut rng, 125, size).into_iter().map(|i| monomials[i]).collect();
            check(&gens, &mut checked);
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{checked} generating sets ({exhaustive} exhaustive up to 3 generators, {} seeded for 4-6), {} failures {failures:?}",
            checked - exhaustive,
            failures.len()
        ),
    )
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * (n - j) / (j + 1))
}

fn hodge_integrals() -> Outcome {
    let l2 = lambda_cube(2).unwrap();
    let l3 = lambda_cube(3).unwrap();
    let b = bernoulli_table(20);
    let recurrence = (1..=20).all(|n| {
        (0..=n)
            .map(|j| BigRational::from_integer(binomial(n + 1, j)) * &b[j])
            .sum::<BigRational>()
            .is_zero()
    });
    let ok = l2 == frac(1, 2880) && l3 == frac(1, 725_760) && recurrence && b[20] == frac(-174_611, 330);
    outcome(ok, format!("lambda_cube(2) = {l2}, lambda_cube(3) = {l3}, recurrence through B_20 {recurrence}"))
}

fn gw_macmahon() -> Outcome {
    let start = Instant::now();
    let report = asymptotic_tail_check(3, 2, 1e-6);
    let elapsed = start.elapsed();
    match report {
        Ok(r) => {
            let errors: Vec<String> = r
                .entries
                .iter()
                .map(|e| format!("g={} extracted {:e} vs {} (rel {:e})", e.genus, e.extracted, e.expected, e.relative_error))
                .collect();
            outcome(
                r.passed() && elapsed < Duration::from_secs(10),
                format!("{}, {}", errors.join("; "), secs(elapsed)),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn run_binary(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_toric-dt"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism() -> Outcome {
    let series = [
        "series", "--geometry", "local_p1p1", "--beta-max", "1", "--n-max", "5", "--reduced",
        "--pade", "1,2", "--seed", "42",
    ];
    let verify = [
        "verify", "--geometry", "conifold", "--beta-max", "1", "--n-max", "4", "--check",
        "sign-oracle", "--seed", "42", "--format", "csv",
    ];
    let same_series = run_binary(&series) == run_binary(&series);
    let same_verify = run_binary(&verify) == run_binary(&verify);
    outcome(
        same_series && same_verify,
        format!("series byte-identical {same_series}, seeded verify byte-identical {same_verify}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("degree-0 series is MacMahon", degree0_macmahon),
        ("weight ratio equals sign", sign_theorem),
        ("conifold degree 1 is rational and symmetric", conifold_rationality),
        ("conifold degree 1 matches 1/(2 sin(u/2))^2", conifold_gw),
        ("local P2 degree 1 is rational and symmetric", local_p2_rationality),
        ("character calculus properties", character_properties),
        ("Taylor resolution trace", taylor_identity),
        ("Hodge integrals and Bernoulli numbers", hodge_integrals),
        ("degree-0 free energy asymptotics", gw_macmahon),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.passed;
        println!(
            "criterion {:>2} {}: {name}: {}",
            k + 1,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
