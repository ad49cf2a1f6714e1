//! End-to-end acceptance checks, one line of output per criterion.
//!
//! Runs without the libtest harness.  Positional arguments select criteria
//! by number or by a substring of their name; with none, all of them run.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use hermclass::classify::minor_name;
use hermclass::linalg::{determinant, signature_exact};
use hermclass::matrix::{kron, Matrix};
use hermclass::oracle::{count_and_sign, isolate, specialize_all, tarski_query_direct};
use hermclass::signdet::{
    ada, exhaustive_signs, is_adapted, mat_of_signs, sort_signs, Exponent, SignCondition, SignDetState,
};
use hermclass::upoly::sign_of;
use hermclass::{
    classify, classify_practical, first_hermite_matrix, gen_random_system, hermite_determinants, parse_poly,
    verify_region, ClassifyOptions, Poly, System, SystemFile, VarSpace,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    if spent > limit {
        return Err(format!("took {spent:.1?}, limit {limit:?}"));
    }
    Ok(())
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn quadratic() -> (Arc<VarSpace>, Vec<Poly>) {
    let sp = VarSpace::new(&["x"], &["y1", "y2"]).unwrap();
    let f = vec![parse_poly(&sp, "x^2 + y1*x + y2").unwrap()];
    (sp, f)
}

fn quadratic_family() -> Outcome {
    let start = Instant::now();
    let (sp, f) = quadratic();
    let c = classify(&sp, &f, &[], &ClassifyOptions::default()).map_err(err)?;
    let disc = parse_poly(&sp, "y1^2 - 4*y2").unwrap();
    let m = c.minors.iter().find(|m| m.poly == disc).ok_or("no minor equal to y1^2 - 4*y2")?;
    let mut checked = 0;
    for (k, r) in c.regions.iter().enumerate() {
        let lit = r.formula.iter().find(|l| l.minor == m.name).ok_or("region formula omits the discriminant")?;
        let expected = if lit.sign > 0 { 2 } else { 0 };
        ensure!(lit.sign != 0 && r.count == expected, "region {:?} has count {}", r.formula, r.count);
        let report = verify_region(r, &c, 10, 100 + k as u64).map_err(err)?;
        ensure!(report.ok(), "oracle disagrees: {:?}", report.mismatches);
        ensure!(report.checked >= 10, "only {} witnesses for region {k}", report.checked);
        checked += report.checked;
    }
    ensure!(c.counts() == vec![0, 2], "counts {:?}", c.counts());
    within(start, Duration::from_secs(5))?;
    Ok(format!("{} regions, {checked} oracle witnesses", c.regions.len()))
}

/// Small random systems with one inequality.
fn fixtures() -> Vec<System> {
    let shapes = [(1, 1, 2), (1, 1, 3), (1, 2, 2), (1, 2, 3), (2, 1, 1), (2, 1, 2), (2, 2, 2), (2, 1, 3), (2, 2, 1), (1, 2, 1)];
    shapes
        .iter()
        .enumerate()
        .map(|(k, &(n, t, d))| gen_random_system(n, t, 1, d, 40 + k as u64).unwrap().parse().unwrap())
        .collect()
}

/// Random points with `w_∞(η) ≠ 0`.
fn points(data: &hermclass::HermiteData, t: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<BigRational>> {
    let mut out = Vec::new();
    while out.len() < count {
        let eta: Vec<BigRational> = (0..t).map(|_| q(rng.random_range(-20..=20), rng.random_range(1..=4))).collect();
        if data.cert.contains(&eta) {
            out.push(eta);
        }
    }
    out
}

fn signature_is_tarski_query() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut compared = 0;
    for sys in fixtures() {
        let data = first_hermite_matrix(&sys.space, &sys.equations).map_err(err)?;
        let g1 = &sys.inequalities[0];
        let weights = [Poly::one(&sys.space), g1.clone(), g1.mul(g1)];
        let hs: Vec<_> = weights.iter().map(|g| data.hermite_of(g)).collect::<Result<_, _>>().map_err(err)?;
        for eta in points(&data, sys.space.t(), 25, &mut rng) {
            let roots = isolate(&specialize_all(&sys.equations, &eta)).map_err(err)?;
            for (g, h) in weights.iter().zip(&hs) {
                let sig = signature_exact(&h.specialize(&eta, &data.cert).map_err(err)?).map_err(err)?;
                let tq = tarski_query_direct(&specialize_all(std::slice::from_ref(g), &eta)[0], &roots).map_err(err)?;
                ensure!(sig == tq, "signature {sig} but Tarski query {tq} for g = {g} at {eta:?} in {:?}", sys.equations);
                compared += 1;
            }
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{compared} signatures equal their Tarski queries"))
}

fn specialization_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut compared = 0;
    for sys in fixtures() {
        let data = first_hermite_matrix(&sys.space, &sys.equations).map_err(err)?;
        let g1 = &sys.inequalities[0];
        for eta in points(&data, sys.space.t(), 25, &mut rng) {
            let fibre = specialize_all(&sys.equations, &eta);
            let fresh = first_hermite_matrix(fibre[0].space(), &fibre).map_err(err)?;
            for g in [Poly::one(&sys.space), g1.clone(), g1.mul(g1)] {
                let generic = data.hermite_of(&g).map_err(err)?.specialize(&eta, &data.cert).map_err(err)?;
                let local = fresh.hermite_of(&specialize_all(&[g], &eta)[0]).map_err(err)?.eval(&[]).map_err(err)?;
                ensure!(generic == local, "specialized and rebuilt matrices differ at {eta:?} for {:?}", sys.equations);
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} matrices equal entrywise"))
}

fn random_univariate(sp: &Arc<VarSpace>, deg: u32, rng: &mut ChaCha8Rng) -> Poly {
    let x = Poly::var(sp, 0);
    let mut p = Poly::zero(sp);
    for _ in 0..=deg {
        p = p.mul(&x).add(&Poly::constant(sp, q(rng.random_range(-9..=9), rng.random_range(1..=3))));
    }
    if p.degree().unwrap_or(0) == 0 {
        p = p.add(&x);
    }
    p
}

fn bkr_equivalence() -> Outcome {
    let start = Instant::now();
    let sp = VarSpace::new(&["x"], &[] as &[&str]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut total_roots = 0;
    for _ in 0..50 {
        // products of linear factors guarantee real roots to sign
        let mut f = Poly::one(&sp);
        let roots = rng.random_range(1..=4);
        for _ in 0..roots {
            f = f.mul(&parse_poly(&sp, &format!("x - {}/{}", rng.random_range(-6..=6), rng.random_range(1..=2))).unwrap());
        }
        if rng.random_bool(0.5) {
            f = f.mul(&random_univariate(&sp, rng.random_range(1..=6 - roots), &mut rng));
        }
        let g: Vec<Poly> = (0..rng.random_range(1..=4)).map(|_| random_univariate(&sp, rng.random_range(1..=4), &mut rng)).collect();
        let data = first_hermite_matrix(&sp, &[f.clone()]).map_err(err)?;
        let tq = |alpha: &[u8], offset: usize| -> hermclass::Result<i64> {
            let mut w = Poly::one(&sp);
            for (a, p) in alpha.iter().zip(&g[offset..]) {
                for _ in 0..*a {
                    w = w.mul(p);
                }
            }
            signature_exact(&data.hermite_of(&w)?.eval(&[])?)
        };
        let mut state = SignDetState::initial(tq(&[], 0).map_err(err)?);
        for i in (0..g.len()).rev() {
            state = hermclass::signdet::signdet_step(&state, |alpha| tq(alpha, i)).map_err(err)?;
        }
        let (count, signs) = count_and_sign(&[f.clone()], &g).map_err(err)?;
        let (sigma, counts) = exhaustive_signs(&signs);
        ensure!(state.sigma == sigma && state.counts == counts, "f = {f}, g = {g:?}: {:?}/{:?} against {sigma:?}/{counts:?}", state.sigma, state.counts);
        total_roots += count;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("50 instances, {total_roots} real roots"))
}

fn random_sigma(rng: &mut ChaCha8Rng) -> Vec<SignCondition> {
    let s = rng.random_range(1..=6);
    let all = 3usize.pow(s as u32);
    let mut sigma: Vec<SignCondition> = (0..all)
        .filter(|_| rng.random_bool(0.3))
        .map(|mut code| {
            (0..s)
                .map(|_| {
                    let v = [0i8, 1, -1][code % 3];
                    code /= 3;
                    v
                })
                .collect()
        })
        .collect();
    if sigma.is_empty() {
        sigma.push(vec![1; s]);
    }
    sort_signs(&mut sigma);
    sigma
}

fn adapted_families() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let sigma = random_sigma(&mut rng);
        let a = ada(&sigma);
        ensure!(a.len() == sigma.len(), "|Ada| = {} for |Σ| = {}", a.len(), sigma.len());
        ensure!(is_adapted(&a, &sigma), "Mat(Ada(Σ), Σ) singular for {sigma:?}");
    }
    for _ in 0..50 {
        let (s1, s2) = (random_sigma(&mut rng), random_sigma(&mut rng));
        let (a1, a2) = (ada(&s1), ada(&s2));
        let cat = |x: &[i8], y: &[i8]| -> Vec<i8> { x.iter().chain(y).copied().collect() };
        let sigma: Vec<SignCondition> = s1.iter().flat_map(|x| s2.iter().map(move |y| cat(x, y))).collect();
        let alphas: Vec<Exponent> =
            a1.iter().flat_map(|x| a2.iter().map(move |y| x.iter().chain(y).copied().collect())).collect();
        ensure!(
            mat_of_signs(&alphas, &sigma) == kron(&mat_of_signs(&a1, &s1), &mat_of_signs(&a2, &s2)),
            "Kronecker identity fails for {s1:?} × {s2:?}"
        );
    }
    Ok("200 families adapted, 50 Kronecker products".into())
}

fn matrix_of_signs() -> Outcome {
    let m = mat_of_signs(&[vec![0], vec![1], vec![2]], &[vec![0], vec![1], vec![-1]]);
    let expected = Matrix::from_rows(vec![vec![1, 1, 1], vec![0, 1, -1], vec![0, 1, 1]]);
    ensure!(m == expected, "got {:?}", m.to_rows());
    Ok("[[1, 1, 1], [0, 1, -1], [0, 1, 1]]".into())
}

fn degree_bounds() -> Outcome {
    let shapes = [(1, 1, 1, 1), (1, 1, 2, 1), (1, 2, 2, 1), (2, 1, 1, 1), (2, 1, 2, 1), (1, 1, 2, 2), (2, 2, 1, 1), (1, 2, 2, 2), (2, 1, 2, 2), (2, 2, 2, 1)];
    let mut minors = 0;
    for (k, &(n, t, d, s)) in shapes.iter().enumerate() {
        let mut seed = 70 + 10 * k as u64;
        let sys = loop {
            let sys = gen_random_system(n, t, s, d, seed).unwrap().parse().unwrap();
            if first_hermite_matrix(&sys.space, &sys.equations).map_err(err)?.gb.is_degree_regular() {
                break sys;
            }
            seed += 1;
        };
        let opts = ClassifyOptions { assume_regular: true, ..Default::default() };
        let c = classify_practical(&sys.space, &sys.equations, &sys.inequalities, &opts).map_err(err)?;
        let audit = c.degree_audit.ok_or("no degree audit")?;
        ensure!(audit.pass, "{:?} (seed {seed}): {:?}", (n, t, d, s), audit.offenses);
        minors += c.minors.len();
    }
    Ok(format!("10 regular fixtures, {minors} minors within bounds"))
}

fn desk_scale_run() -> Outcome {
    let start = Instant::now();
    let sys = gen_random_system(2, 2, 2, 2, 1).unwrap().parse().unwrap();
    let c = classify_practical(&sys.space, &sys.equations, &sys.inequalities, &ClassifyOptions::default()).map_err(err)?;
    let mut witnesses = 0;
    for (k, r) in c.regions.iter().enumerate() {
        let report = verify_region(r, &c, 0, k as u64).map_err(err)?;
        ensure!(report.ok(), "region {k}: {:?}", report.mismatches);
        witnesses += report.checked;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("{} regions, counts {:?}, {witnesses} witnesses checked", c.regions.len(), c.counts()))
}

fn p3p_determinants() -> Outcome {
    let start = Instant::now();
    let sys = SystemFile::from_toml(include_str!("fixtures/p3p_isosceles.toml")).map_err(err)?.parse().map_err(err)?;
    let data = first_hermite_matrix(&sys.space, &sys.equations).map_err(err)?;
    let c = hermite_determinants(&sys.space, &sys.equations, &sys.inequalities, &ClassifyOptions::default()).map_err(err)?;
    within(start, Duration::from_secs(1800))?;
    ensure!(c.determinants.len() == 4, "determinants {:?}, notes {:?}", c.determinants, c.notes);
    let spent = start.elapsed();
    let sp = &sys.space;
    let weights: Vec<Poly> = std::iter::once(Poly::one(sp)).chain(sys.inequalities.iter().cloned()).collect();
    let etas = [[q(1, 1), q(1, 2), q(1, 3), q(1, 4)], [q(3, 2), q(-1, 3), q(1, 2), q(5, 4)], [q(1, 3), q(3, 2), q(-3, 2), q(1, 2)]];
    let mut counts = Vec::new();
    for eta in &etas {
        ensure!(data.cert.contains(eta), "{eta:?} is outside the open set");
        let roots = isolate(&specialize_all(&sys.equations, eta)).map_err(err)?;
        for (k, g) in weights.iter().enumerate() {
            let mut alpha = vec![0u8; 3];
            if k > 0 {
                alpha[k - 1] = 1;
            }
            let h = data.hermite_of(g).map_err(err)?.specialize(eta, &data.cert).map_err(err)?;
            let tq = tarski_query_direct(&specialize_all(std::slice::from_ref(g), eta)[0], &roots).map_err(err)?;
            ensure!(signature_exact(&h).map_err(err)? == tq, "signature of H_{g} at {eta:?} is not {tq}");
            let det = &c.minor(&minor_name(&alpha, data.dim())).ok_or("missing determinant")?.poly;
            ensure!(
                sign_of(&det.eval_params(eta)) == sign_of(&determinant(&h)),
                "det H_{g} has the wrong sign at {eta:?}"
            );
        }
        counts.push(hermclass::oracle::count_satisfying(&sys.equations, &sys.inequalities, eta).map_err(err)?);
    }
    Ok(format!("4 determinants in {spent:.1?}, positive solutions at the checked points {counts:?}"))
}

fn seed_stability() -> Outcome {
    let (sp, f) = quadratic();
    let run = |seed: u64| classify(&sp, &f, &[], &ClassifyOptions { seed, ..Default::default() });
    let (a, b) = (run(11).map_err(err)?, run(29).map_err(err)?);
    let mut ca: Vec<i64> = a.regions.iter().map(|r| r.count).collect();
    let mut cb: Vec<i64> = b.regions.iter().map(|r| r.count).collect();
    ca.sort();
    cb.sort();
    ensure!(a.sigma == b.sigma, "Σ differs: {:?} / {:?}", a.sigma, b.sigma);
    ensure!(ca == cb, "region counts differ: {ca:?} / {cb:?}");
    Ok(format!("Σ = {:?}, counts {ca:?}", a.sigma))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("quadratic_family", quadratic_family),
        ("signature_is_tarski_query", signature_is_tarski_query),
        ("specialization_property", specialization_property),
        ("bkr_equivalence", bkr_equivalence),
        ("adapted_families", adapted_families),
        ("matrix_of_signs", matrix_of_signs),
        ("degree_bounds", degree_bounds),
        ("desk_scale_run", desk_scale_run),
        ("p3p_determinants", p3p_determinants),
        ("seed_stability", seed_stability),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let number = (i + 1).to_string();
        if !filters.is_empty() && !filters.iter().any(|f| if f.parse::<usize>().is_ok() { *f == number } else { name.contains(f.as_str()) }) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {number:>2} {name} ({secs:.1} s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {number:>2} {name} ({secs:.1} s): {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
