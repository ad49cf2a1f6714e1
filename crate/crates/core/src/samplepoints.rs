//! Rational points meeting every connected component of
//! `{η ∈ R^t : h_1(η) ≠ 0, …, h_ℓ(η) ≠ 0}`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcd::{coprime_basis, discriminant, resultant};
use crate::poly::Poly;
use crate::upoly::{isolate_real_roots, points_between_roots, refine, sign_of, RealRoot, UPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Isolate1d,
    Cad2d,
    Heuristic,
    Auto,
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "isolate1d" => Ok(Backend::Isolate1d),
            "cad2d" => Ok(Backend::Cad2d),
            "heuristic" => Ok(Backend::Heuristic),
            "auto" => Ok(Backend::Auto),
            _ => Err(Error::InvalidInput(format!("unknown backend `{s}`"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Isolate1d => "isolate1d",
            Backend::Cad2d => "cad2d",
            Backend::Heuristic => "heuristic",
            Backend::Auto => "auto",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    Guaranteed,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSet {
    pub points: Vec<Vec<BigRational>>,
    pub backend: Backend,
    pub completeness: Completeness,
}

#[derive(Clone, Copy, Debug)]
pub struct SampleOptions {
    pub backend: Backend,
    pub seed: u64,
    /// Candidate points drawn by the heuristic backend.
    pub heuristic_trials: usize,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { backend: Backend::Auto, seed: 0, heuristic_trials: 400 }
    }
}

/// `t` is the number of parameters; every `h` must be a nonzero
/// polynomial in the parameters only.
pub fn sample_points(h: &[Poly], t: usize, opts: &SampleOptions) -> Result<SampleSet> {
    if let Some(p) = h.iter().find(|p| p.is_zero()) {
        return Err(Error::InvalidInput(format!("identically zero polynomial in sample set input: {p}")));
    }
    if let Some(p) = h.iter().find(|p| !p.is_pure_parameter()) {
        return Err(Error::InvalidInput(format!("sample set input involves unknowns: {p}")));
    }
    if let Some(p) = h.first() {
        if p.space().t() != t {
            return Err(Error::SpaceMismatch);
        }
    }
    let backend = match opts.backend {
        Backend::Auto => match t {
            0 | 1 => Backend::Isolate1d,
            2 => Backend::Cad2d,
            _ => Backend::Heuristic,
        },
        b => b,
    };
    if t == 0 {
        return Ok(SampleSet { points: vec![Vec::new()], backend, completeness: Completeness::Guaranteed });
    }
    match backend {
        Backend::Isolate1d => {
            if t != 1 {
                return Err(Error::InvalidInput(format!("isolate1d needs one parameter, got {t}")));
            }
            let n = h.first().map_or(0, |p| p.space().n());
            let pts = sample_line(h, n)?;
            Ok(SampleSet { points: pts.into_iter().map(|p| vec![p]).collect(), backend, completeness: Completeness::Guaranteed })
        }
        Backend::Cad2d => {
            if t != 2 {
                return Err(Error::InvalidInput(format!("cad2d needs two parameters, got {t}")));
            }
            Ok(SampleSet { points: open_cad_2d(h)?, backend, completeness: Completeness::Guaranteed })
        }
        Backend::Heuristic => Ok(SampleSet {
            points: heuristic(h, t, opts.seed, opts.heuristic_trials),
            backend,
            completeness: Completeness::Heuristic,
        }),
        Backend::Auto => unreachable!(),
    }
}

/// Sample points on the line of variable `var`: the coprime factors are
/// isolated one at a time and their intervals refined until pairwise
/// disjoint.
fn sample_line(h: &[Poly], var: usize) -> Result<Vec<BigRational>> {
    let factors: Vec<UPoly> = coprime_basis(h).iter().map(|p| UPoly::from_poly(p, var)).collect();
    let mut roots: Vec<(RealRoot, usize)> = Vec::new();
    for (k, f) in factors.iter().enumerate() {
        roots.extend(isolate_real_roots(f).into_iter().map(|r| (r, k)));
    }
    loop {
        roots.sort_by(|a, b| a.0.lower().cmp(b.0.lower()).then_with(|| a.0.upper().cmp(b.0.upper())));
        let clash = roots.windows(2).position(|w| {
            let (a, b) = (&w[0].0, &w[1].0);
            match a.upper().cmp(b.lower()) {
                Ordering::Less => false,
                Ordering::Equal => matches!(a, RealRoot::Exact(_)) || matches!(b, RealRoot::Exact(_)),
                Ordering::Greater => true,
            }
        });
        let Some(i) = clash else { break };
        // roots of coprime factors differ, so refining the wider one ends this
        let j = if roots[i].0.width() >= roots[i + 1].0.width() { i } else { i + 1 };
        let (r, k) = &roots[j];
        roots[j] = (refine(&factors[*k], r), *k);
    }
    let roots: Vec<RealRoot> = roots.into_iter().map(|(r, _)| r).collect();
    Ok(points_between_roots(&roots))
}

fn open_cad_2d(h: &[Poly]) -> Result<Vec<Vec<BigRational>>> {
    let Some(first) = h.first() else {
        return Ok(vec![vec![BigRational::zero(), BigRational::zero()]]);
    };
    let sp = first.space().clone();
    let (y1, y2) = (sp.n(), sp.n() + 1);
    let basis = coprime_basis(h);
    let mut proj: Vec<Poly> = Vec::new();
    let mut push = |p: Poly| {
        if !p.is_constant() {
            proj.push(p);
        }
    };
    for (i, p) in basis.iter().enumerate() {
        if !p.uses_var(y2) {
            push(p.clone());
            continue;
        }
        let coeffs = p.coeffs_in(y2);
        push(coeffs.last().unwrap().clone());
        if let Some(tc) = coeffs.iter().find(|c| !c.is_zero()) {
            push(tc.clone());
        }
        if p.degree_in(y2) > Some(1) {
            push(discriminant(p, y2));
        }
        for q in &basis[i + 1..] {
            if q.uses_var(y2) {
                push(resultant(p, q, y2));
            }
        }
    }
    debug_assert!(proj.iter().all(|p| !p.is_zero()));
    let base = sample_line(&proj, y1)?;
    let mut out = Vec::new();
    for a in base {
        let fibre: Vec<Poly> = basis
            .iter()
            .filter(|p| p.uses_var(y2))
            .map(|p| substitute_var(p, y1, &a))
            .collect();
        for b in sample_line(&fibre, y2)? {
            out.push(vec![a.clone(), b]);
        }
    }
    Ok(out)
}

fn substitute_var(p: &Poly, var: usize, v: &BigRational) -> Poly {
    let sp = p.space();
    let mut images: Vec<Poly> = (0..sp.nvars()).map(|i| Poly::var(sp, i)).collect();
    images[var] = Poly::constant(sp, v.clone());
    p.substitute(&images, sp)
}

fn heuristic(h: &[Poly], t: usize, seed: u64, trials: usize) -> Vec<Vec<BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5a_4d_9e);
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    let mut out = Vec::new();
    let origin = vec![BigRational::zero(); t];
    let mut candidates = vec![origin];
    for k in 0..trials {
        // magnitudes grow with k; denominators are powers of two
        let range = 1i64 << (1 + (k / 32).min(20));
        let den = BigInt::one() << rng.random_range(0..4u32);
        candidates.push(
            (0..t)
                .map(|_| BigRational::new(BigInt::from(rng.random_range(-range..=range)), den.clone()))
                .collect(),
        );
    }
    for eta in candidates {
        let signs: Vec<i32> = h.iter().map(|p| sign_of(&p.eval_params(&eta))).collect();
        if signs.contains(&0) {
            continue;
        }
        if seen.insert(signs) {
            out.push(eta);
        }
    }
    out
}
