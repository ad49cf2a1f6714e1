//! Classification of the real-solution count of `f = 0, g > 0` over the
//! parameter space, through signs of leading principal minors of
//! parametric Hermite matrices.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::{first_hermite_matrix, hermite_g, DegreeBudget, HermiteData, ParametricSymMatrix};
use crate::linalg::{integral_scaling, leading_principal_minors, rank_parametric, signature_from_minors, signature_int, CongruenceSeed};
use crate::matrix::{kron, Matrix};
use crate::oracle::count_satisfying;
use crate::poly::{same_space, Poly, VarSpace};
use crate::quotient::MultMatrix;
use crate::ratfn::RatFn;
use crate::samplepoints::{sample_points, Backend, Completeness, SampleOptions};
use crate::signdet::{mat_of_signs, prune, signdet_step, solve_counts, sort_signs, Exponent, SignCondition, SignDetState};
use crate::upoly::sign_of;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Full,
    DeterminantsFirst,
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "determinants-first" => Ok(Variant::DeterminantsFirst),
            _ => Err(Error::InvalidInput(format!("unknown variant `{s}`"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::DeterminantsFirst => "determinants-first",
        })
    }
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub seed: u64,
    pub backend: Backend,
    pub heuristic_trials: usize,
    /// Fresh congruence matrices tried after a minor vanishes identically.
    pub max_resamples: u64,
    /// Use `U = I` instead of a random congruence.
    pub identity_congruence: bool,
    /// Audit entry and minor degrees against the regular-case bounds.
    pub assume_regular: bool,
    /// Upper bound on count vectors enumerated by the determinants-first
    /// variant when listing count conditions.
    pub max_count_vectors: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            seed: 1,
            backend: Backend::Auto,
            heuristic_trials: 400,
            max_resamples: 5,
            identity_congruence: false,
            assume_regular: false,
            max_count_vectors: 200_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedMinor {
    pub name: String,
    pub alpha: Exponent,
    /// 1-based index of the leading principal minor.
    pub index: usize,
    pub poly: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub minor: String,
    pub sign: i8,
}

/// Conjunction of strict sign conditions on named minors (together with
/// `w_∞ ≠ 0` and every listed minor nonzero), a witness per merged region
/// and the number of real solutions with `g > 0` on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub formula: Vec<Literal>,
    pub witnesses: Vec<Vec<BigRational>>,
    pub count: i64,
}

impl Region {
    pub fn witness(&self) -> &[BigRational] {
        &self.witnesses[0]
    }
}

/// Signature-level description of one achievable count: Hermite matrix
/// `H_{g^α}` must show exactly `variations[α]` sign variations in
/// `(1, m[α][1], …, m[α][rank])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountCondition {
    pub count: i64,
    pub variations: Vec<(Exponent, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeAudit {
    pub pass: bool,
    pub offenses: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub space: Arc<VarSpace>,
    pub equations: Vec<Poly>,
    pub inequalities: Vec<Poly>,
    pub inconsistent: bool,
    pub dim: usize,
    pub w_infinity: Poly,
    pub sigma: Vec<SignCondition>,
    pub regions: Vec<Region>,
    pub minors: Vec<NamedMinor>,
    /// Names of the determinants of `H_1, H_{g_1}, …` (determinants-first).
    pub determinants: Vec<String>,
    pub count_conditions: Vec<CountCondition>,
    pub completeness: Completeness,
    pub backend: Backend,
    pub seed: u64,
    pub variant: Variant,
    pub degree_audit: Option<DegreeAudit>,
    pub notes: Vec<String>,
}

impl Classification {
    pub fn minor(&self, name: &str) -> Option<&NamedMinor> {
        self.minors.iter().find(|m| m.name == name)
    }

    /// Distinct counts over all regions, sorted.
    pub fn counts(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.regions.iter().map(|r| r.count).collect();
        set.into_iter().collect()
    }

    /// Whether `eta` satisfies `w_∞ ≠ 0` and every literal of `formula`.
    pub fn satisfies(&self, formula: &[Literal], eta: &[BigRational]) -> bool {
        if self.w_infinity.eval_params(eta).is_zero() {
            return false;
        }
        formula.iter().all(|l| match self.minor(&l.minor) {
            Some(m) => sign_of(&m.poly.eval_params(eta)) as i8 == l.sign,
            None => false,
        })
    }
}

pub fn minor_name(alpha: &[u8], index: usize) -> String {
    let digits: String = alpha.iter().map(|a| char::from(b'0' + a)).collect();
    format!("m[{digits}][{index}]")
}

struct AlphaEntry {
    h: ParametricSymMatrix,
    rank: usize,
    minors: Vec<Poly>,
}

/// Hermite matrices `H_{g^α} = H_1·∏ M_{g_k}^{α_k}` with ranks and minors,
/// computed once per `α`.
struct Engine<'a> {
    data: &'a HermiteData,
    g: &'a [Poly],
    mg: Vec<Matrix<RatFn>>,
    u: CongruenceSeed,
    seed: u64,
    products: HashMap<Exponent, Matrix<RatFn>>,
    entries: BTreeMap<Exponent, AlphaEntry>,
}

impl<'a> Engine<'a> {
    fn new(data: &'a HermiteData, g: &'a [Poly], u: CongruenceSeed, seed: u64) -> Result<Self> {
        let mg = g.iter().map(|p| data.mult_matrix(p).map(|m| m.entries)).collect::<Result<_>>()?;
        Ok(Engine { data, g, mg, u, seed, products: HashMap::new(), entries: BTreeMap::new() })
    }

    fn label(&self, alpha: &[u8]) -> Poly {
        let mut acc = Poly::one(self.data.gb.space());
        for (p, &a) in self.g.iter().zip(alpha) {
            if a > 0 {
                acc = acc.mul(&p.pow(a as u32));
            }
        }
        acc
    }

    fn product(&mut self, alpha: &[u8]) -> Option<Matrix<RatFn>> {
        let k = alpha.iter().position(|&a| a > 0)?;
        if let Some(p) = self.products.get(alpha) {
            return Some(p.clone());
        }
        let mut rest = alpha.to_vec();
        rest[k] -= 1;
        let p = match self.product(&rest) {
            Some(r) => self.mg[k].mul(&r),
            None => self.mg[k].clone(),
        };
        self.products.insert(alpha.to_vec(), p.clone());
        Some(p)
    }

    fn entry(&mut self, alpha: &[u8]) -> Result<&AlphaEntry> {
        if !self.entries.contains_key(alpha) {
            let h = match self.product(alpha) {
                None => self.data.h1.clone(),
                Some(p) => hermite_g(&self.data.h1, &MultMatrix { entries: p, label: self.label(alpha) })?,
            };
            let salt = alpha.iter().fold(self.seed, |acc, &a| acc.wrapping_mul(31).wrapping_add(a as u64 + 1));
            let rank = rank_parametric(&h, &self.data.cert, salt)?;
            let minors = leading_principal_minors(&h, &self.u, rank)?.minors;
            self.entries.insert(alpha.to_vec(), AlphaEntry { h, rank, minors });
        }
        Ok(&self.entries[alpha])
    }

    fn named_minors(&self) -> Vec<NamedMinor> {
        let mut out = Vec::new();
        for (alpha, e) in &self.entries {
            for (j, m) in e.minors.iter().enumerate() {
                out.push(NamedMinor { name: minor_name(alpha, j + 1), alpha: alpha.clone(), index: j + 1, poly: m.clone() });
            }
        }
        out
    }

    /// Signature of `H_{g^α}(η)` read off the minor signs; `None` when some
    /// minor vanishes at `η`.
    fn signature_at(&self, alpha: &[u8], eta: &[BigRational]) -> Option<i64> {
        let e = &self.entries[alpha];
        let signs: Vec<i32> = e.minors.iter().map(|m| sign_of(&m.eval_params(eta))).collect();
        if signs.contains(&0) {
            return None;
        }
        Some(signature_from_minors(&signs))
    }

    fn literals(&self, alphas: &[Exponent], eta: &[BigRational]) -> Vec<Literal> {
        let mut out = Vec::new();
        for alpha in alphas {
            for (j, m) in self.entries[alpha].minors.iter().enumerate() {
                out.push(Literal { minor: minor_name(alpha, j + 1), sign: sign_of(&m.eval_params(eta)) as i8 });
            }
        }
        out
    }

    fn audit(&self, f: &[Poly]) -> DegreeAudit {
        let n = self.data.gb.space().n() as u64;
        let t = self.data.gb.space().t() as u64;
        let d = f.iter().chain(self.g).filter_map(|p| p.degree()).max().unwrap_or(0) as u64;
        let budget = DegreeBudget::new(n, t, self.g.len() as u64, d);
        let mut offenses = Vec::new();
        if !self.data.gb.is_degree_regular() {
            offenses.push("Gröbner basis has an element with deg p ≠ deg_x p".to_string());
        }
        for (alpha, e) in &self.entries {
            let deg_g: u64 = alpha.iter().zip(self.g).map(|(&a, p)| a as u64 * p.degree().unwrap_or(0) as u64).sum();
            let report = crate::hermite::audit_degrees(&e.h, &self.data.qa, deg_g, &budget);
            for o in &report.offending {
                offenses.push(format!("entry ({}, {}) of H_{:?}: degree {:?} exceeds {}", o.row, o.col, alpha, o.degree, o.bound));
            }
            let bound = budget.minor_bound(deg_g);
            for (j, m) in e.minors.iter().enumerate() {
                let deg = m.degree().unwrap_or(0) as u64;
                if deg > bound {
                    offenses.push(format!("{} has degree {deg} > {bound}", minor_name(alpha, j + 1)));
                }
            }
        }
        DegreeAudit { pass: offenses.is_empty(), offenses }
    }
}

/// `{0,1,2}^s` and `{0,1,−1}^s` in the order matching `kron`.
fn product_family<T: Copy>(values: [T; 3], s: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..s {
        let mut next = Vec::with_capacity(out.len() * 3);
        for &v in &values {
            for rest in &out {
                let mut x = vec![v];
                x.extend_from_slice(rest);
                next.push(x);
            }
        }
        out = next;
    }
    out
}

fn base_matrix() -> Matrix<i64> {
    mat_of_signs(&[vec![0], vec![1], vec![2]], &[vec![0], vec![1], vec![-1]])
}

fn check_inputs(space: &Arc<VarSpace>, f: &[Poly], g: &[Poly]) -> Result<()> {
    if f.is_empty() {
        return Err(Error::InvalidInput("at least one equation is required".into()));
    }
    if f.iter().chain(g).any(|p| !same_space(p.space(), space)) {
        return Err(Error::SpaceMismatch);
    }
    if let Some(p) = g.iter().find(|p| p.is_zero()) {
        return Err(Error::InvalidInput(format!("inequality polynomial is identically zero: {p}")));
    }
    Ok(())
}

fn empty_classification(space: &Arc<VarSpace>, f: &[Poly], g: &[Poly], seed: u64, variant: Variant, note: &str) -> Classification {
    Classification {
        space: space.clone(),
        equations: f.to_vec(),
        inequalities: g.to_vec(),
        inconsistent: true,
        dim: 0,
        w_infinity: Poly::one(space),
        sigma: Vec::new(),
        regions: Vec::new(),
        minors: Vec::new(),
        determinants: Vec::new(),
        count_conditions: Vec::new(),
        completeness: Completeness::Guaranteed,
        backend: Backend::Auto,
        seed,
        variant,
        degree_audit: None,
        notes: vec![note.to_string()],
    }
}

fn with_resampling<T>(opts: &ClassifyOptions, mut run: impl FnMut(u64) -> Result<T>) -> Result<T> {
    let mut last = Error::ResampleNeeded;
    for attempt in 0..=opts.max_resamples {
        match run(opts.seed.wrapping_add(attempt)) {
            Err(Error::ResampleNeeded) => last = Error::ResampleNeeded,
            r => return r,
        }
        if opts.identity_congruence {
            break;
        }
    }
    Err(last)
}

fn congruence(opts: &ClassifyOptions, dim: usize, seed: u64) -> CongruenceSeed {
    if opts.identity_congruence {
        CongruenceSeed::identity(dim)
    } else {
        CongruenceSeed::draw(dim, seed)
    }
}

/// Sampling input: `w_∞` and the minors, deduplicated up to content and sign.
fn sampling_family(w: &Poly, minors: &[Poly]) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    for p in std::iter::once(w).chain(minors) {
        if p.is_constant() {
            continue;
        }
        let q = p.normalized();
        if !out.contains(&q) {
            out.push(q);
        }
    }
    out
}

fn merge_regions(raw: Vec<(Vec<Literal>, Vec<BigRational>, i64)>) -> Vec<Region> {
    let mut regions: Vec<Region> = Vec::new();
    for (formula, eta, count) in raw {
        match regions.iter_mut().find(|r| r.formula == formula && r.count == count) {
            Some(r) => r.witnesses.push(eta),
            None => regions.push(Region { formula, witnesses: vec![eta], count }),
        }
    }
    regions
}

/// The full algorithm: incremental sign determination over `g_s, …, g_1`,
/// one sampling call per step, formulas from the final adapted family.
pub fn classify(space: &Arc<VarSpace>, f: &[Poly], g: &[Poly], opts: &ClassifyOptions) -> Result<Classification> {
    check_inputs(space, f, g)?;
    with_resampling(opts, |seed| classify_once(space, f, g, opts, seed))
}

fn classify_once(space: &Arc<VarSpace>, f: &[Poly], g: &[Poly], opts: &ClassifyOptions, seed: u64) -> Result<Classification> {
    let data = first_hermite_matrix(space, f)?;
    if data.gb.is_inconsistent() || data.dim() == 0 {
        return Ok(empty_classification(space, f, g, seed, Variant::Full, "inconsistent system: no complex solutions for generic parameters"));
    }
    let s = g.len();
    let t = space.t();
    let mut engine = Engine::new(&data, g, congruence(opts, data.dim(), seed), seed)?;
    let sopts = SampleOptions { backend: opts.backend, seed, heuristic_trials: opts.heuristic_trials };
    let w = data.cert.w_infinity.clone();
    let full = |local: &[u8]| -> Exponent {
        let mut a = vec![0u8; s - local.len()];
        a.extend_from_slice(local);
        a
    };

    let mut sigma: Vec<SignCondition> = vec![Vec::new()];
    let mut ada: Vec<Exponent> = vec![Vec::new()];
    let mut mat = Matrix::new(1, 1, vec![1i64]);
    let mut all_minors: Vec<Poly> = Vec::new();
    // per-point counts over the candidate sign conditions of the last step
    let mut last: Vec<(Vec<BigRational>, Vec<i64>)> = Vec::new();
    let mut last_sigma: Vec<SignCondition> = vec![Vec::new()];
    let mut completeness = Completeness::Guaranteed;
    let mut backend = opts.backend;

    if s == 0 {
        let alpha = full(&[]);
        all_minors.extend(engine.entry(&alpha)?.minors.iter().cloned());
        let set = sample_points(&sampling_family(&w, &all_minors), t, &sopts)?;
        completeness = set.completeness;
        backend = set.backend;
        for eta in set.points {
            let tq = engine
                .signature_at(&alpha, &eta)
                .ok_or_else(|| Error::InternalConsistency("sample point on a minor".into()))?;
            last.push((eta, vec![tq]));
        }
    }
    for _ in 0..s {
        let sigma_cand: Vec<SignCondition> = [0i8, 1, -1]
            .iter()
            .flat_map(|&x| sigma.iter().map(move |r| std::iter::once(x).chain(r.iter().copied()).collect()))
            .collect();
        let ada_cand: Vec<Exponent> = [0u8, 1, 2]
            .iter()
            .flat_map(|&a| ada.iter().map(move |r| std::iter::once(a).chain(r.iter().copied()).collect()))
            .collect();
        let m = kron(&base_matrix(), &mat);
        for alpha in &ada_cand {
            let e = engine.entry(&full(alpha))?;
            all_minors.extend(e.minors.iter().cloned());
        }
        let set = sample_points(&sampling_family(&w, &all_minors), t, &sopts)?;
        completeness = set.completeness;
        backend = set.backend;
        let mut keep = vec![false; sigma_cand.len()];
        last.clear();
        for eta in set.points {
            let tq: Vec<i64> = ada_cand
                .iter()
                .map(|a| {
                    engine
                        .signature_at(&full(a), &eta)
                        .ok_or_else(|| Error::InternalConsistency("sample point on a minor".into()))
                })
                .collect::<Result<_>>()?;
            let c = solve_counts(&m, &tq)?;
            for (k, &x) in c.iter().enumerate() {
                keep[k] |= x > 0;
            }
            last.push((eta, c));
        }
        let (ns, na, nm) = prune(&sigma_cand, &ada_cand, &m, &keep);
        last_sigma = sigma_cand;
        sigma = ns;
        ada = na;
        mat = nm;
    }

    let ones: Vec<i8> = vec![1; s];
    let ones_idx = last_sigma.iter().position(|x| *x == ones);
    let final_alphas: Vec<Exponent> = ada.iter().map(|a| full(a)).collect();
    let mut raw = Vec::new();
    for (eta, c) in &last {
        let count = ones_idx.map_or(0, |k| c[k]);
        raw.push((engine.literals(&final_alphas, eta), eta.clone(), count));
    }
    if s == 0 {
        sigma = if last.iter().any(|(_, c)| c[0] > 0) { vec![Vec::new()] } else { Vec::new() };
    }
    sort_signs(&mut sigma);
    let degree_audit = opts.assume_regular.then(|| engine.audit(f));
    let mut notes = Vec::new();
    if completeness == Completeness::Heuristic {
        notes.push("sample points from the heuristic backend: some regions may be missing".into());
    }
    Ok(Classification {
        space: space.clone(),
        equations: f.to_vec(),
        inequalities: g.to_vec(),
        inconsistent: false,
        dim: data.dim(),
        w_infinity: w,
        sigma,
        regions: merge_regions(raw),
        minors: engine.named_minors(),
        determinants: Vec::new(),
        count_conditions: Vec::new(),
        completeness,
        backend,
        seed,
        variant: Variant::Full,
        degree_audit,
        notes,
    })
}

/// Numeric `H_1(η)` and `M_{g_k}(η)` for sign determination at one point,
/// scaled to integers by positive constants (which leaves every signature
/// unchanged).
struct PointData {
    h1: Matrix<BigInt>,
    mg: Vec<Matrix<BigInt>>,
    cache: HashMap<Exponent, i64>,
}

impl PointData {
    fn new(engine: &Engine<'_>, eta: &[BigRational]) -> Result<Self> {
        let h1 = integral_scaling(&engine.data.h1.eval(eta)?);
        let mg = engine
            .mg
            .iter()
            .map(|m| Ok(integral_scaling(&m.try_map(|e| e.eval(eta))?)))
            .collect::<Result<_>>()?;
        Ok(PointData { h1, mg, cache: HashMap::new() })
    }

    fn tq(&mut self, alpha: &[u8]) -> Result<i64> {
        if let Some(&v) = self.cache.get(alpha) {
            return Ok(v);
        }
        let mut h = self.h1.clone();
        for (m, &a) in self.mg.iter().zip(alpha) {
            for _ in 0..a {
                h = h.mul(m);
            }
        }
        let v = signature_int(&h)?;
        self.cache.insert(alpha.to_vec(), v);
        Ok(v)
    }

    /// Sign determination for `g_1, …, g_s` on the real solutions.
    fn sign_determination(&mut self, s: usize) -> Result<SignDetState> {
        let size = self.tq(&vec![0; s])?;
        let mut state = SignDetState::initial(size);
        for k in (0..s).rev() {
            state = signdet_step(&state, |local| {
                let mut a = vec![0u8; k];
                a.extend_from_slice(local);
                self.tq(&a)
            })?;
        }
        Ok(state)
    }
}

fn count_of_ones(state: &SignDetState, s: usize) -> i64 {
    let ones = vec![1i8; s];
    state.sigma.iter().position(|x| *x == ones).map_or(0, |k| state.counts[k])
}

/// Determinants-first variant: sample points only off the determinants of
/// `H_1, H_{g_1}, …, H_{g_s}`, sign determination at each point for the
/// achievable counts, then formulas from the minors of all `3^s` matrices.
/// Falls back to [`classify`] when some `H_{g_i}` is singular.
pub fn classify_practical(space: &Arc<VarSpace>, f: &[Poly], g: &[Poly], opts: &ClassifyOptions) -> Result<Classification> {
    check_inputs(space, f, g)?;
    with_resampling(opts, |seed| practical_once(space, f, g, opts, seed))
}

fn practical_once(space: &Arc<VarSpace>, f: &[Poly], g: &[Poly], opts: &ClassifyOptions, seed: u64) -> Result<Classification> {
    let data = first_hermite_matrix(space, f)?;
    if data.gb.is_inconsistent() || data.dim() == 0 {
        return Ok(empty_classification(
            space,
            f,
            g,
            seed,
            Variant::DeterminantsFirst,
            "inconsistent system: no complex solutions for generic parameters",
        ));
    }
    let s = g.len();
    let t = space.t();
    let dim = data.dim();
    let mut engine = Engine::new(&data, g, congruence(opts, dim, seed), seed)?;
    let mut dets = Vec::new();
    let mut det_names = Vec::new();
    for k in 0..=s {
        let mut alpha = vec![0u8; s];
        if k > 0 {
            alpha[k - 1] = 1;
        }
        let e = engine.entry(&alpha)?;
        if e.rank < dim {
            let mut c = classify(space, f, g, &ClassifyOptions { seed, ..opts.clone() })?;
            c.notes.push(format!("H for exponent {alpha:?} is singular (rank {} < {dim}); ran the full algorithm", e.rank));
            return Ok(c);
        }
        dets.push(e.minors[dim - 1].clone());
        det_names.push(minor_name(&alpha, dim));
    }
    let w = data.cert.w_infinity.clone();
    let sopts = SampleOptions { backend: opts.backend, seed, heuristic_trials: opts.heuristic_trials };
    let set = sample_points(&sampling_family(&w, &dets), t, &sopts)?;

    let mut observed: Vec<(Vec<BigRational>, SignDetState)> = Vec::new();
    for eta in &set.points {
        let mut pd = PointData::new(&engine, eta)?;
        observed.push((eta.clone(), pd.sign_determination(s)?));
    }
    let counts: BTreeSet<i64> = observed.iter().map(|(_, st)| count_of_ones(st, s)).collect();
    let mut sigma: Vec<SignCondition> = observed.iter().flat_map(|(_, st)| st.sigma.iter().cloned()).collect();
    sort_signs(&mut sigma);
    sigma.dedup();

    // all 3^s matrices and their minors
    let alphas = product_family([0u8, 1, 2], s);
    for a in &alphas {
        engine.entry(a)?;
    }
    let full_mat = (0..s).fold(Matrix::new(1, 1, vec![1i64]), |acc, _| kron(&base_matrix(), &acc));
    let signs_all = product_family([0i8, 1, -1], s);
    let ones_idx = signs_all.iter().position(|x| x.iter().all(|&v| v == 1)).unwrap();

    let mut raw = Vec::new();
    let mut notes = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0b5e_77ed);
    for (eta, st) in &observed {
        let r_eta = count_of_ones(st, s);
        let Some(eta) = nudge_off_minors(&engine, &alphas, &dets, &w, eta, &mut rng) else {
            notes.push(format!("no point near {} avoids every minor; its count {r_eta} has no formula", fmt_point(eta)));
            continue;
        };
        let tq: Vec<i64> = alphas.iter().map(|a| engine.signature_at(a, &eta).unwrap()).collect();
        let c = solve_counts(&full_mat, &tq)?;
        let r_tau = c[ones_idx];
        let mut pd = PointData::new(&engine, &eta)?;
        let r_here = count_of_ones(&pd.sign_determination(s)?, s);
        if r_tau != r_here {
            return Err(Error::InternalConsistency(format!(
                "minor signs give {r_tau} solutions at {} but sign determination gives {r_here}",
                fmt_point(&eta)
            )));
        }
        raw.push((engine.literals(&alphas, &eta), eta, r_tau));
    }

    let count_conditions = enumerate_count_conditions(&engine, &alphas, &full_mat, ones_idx, dim, &counts, opts.max_count_vectors, &mut notes);
    let degree_audit = opts.assume_regular.then(|| engine.audit(f));
    if set.completeness == Completeness::Heuristic {
        notes.push("sample points from the heuristic backend: some counts may be missing".into());
    }
    Ok(Classification {
        space: space.clone(),
        equations: f.to_vec(),
        inequalities: g.to_vec(),
        inconsistent: false,
        dim,
        w_infinity: w,
        sigma,
        regions: merge_regions(raw),
        minors: engine.named_minors(),
        determinants: det_names,
        count_conditions,
        completeness: set.completeness,
        backend: set.backend,
        seed,
        variant: Variant::DeterminantsFirst,
        degree_audit,
        notes,
    })
}

/// The leading principal minors of `H_1, H_{g_1}, …, H_{g_s}` only: no
/// sampling and no regions.  The result is marked heuristic since it
/// classifies nothing.
pub fn hermite_determinants(space: &Arc<VarSpace>, f: &[Poly], g: &[Poly], opts: &ClassifyOptions) -> Result<Classification> {
    check_inputs(space, f, g)?;
    with_resampling(opts, |seed| {
        let data = first_hermite_matrix(space, f)?;
        if data.gb.is_inconsistent() || data.dim() == 0 {
            return Ok(empty_classification(
                space,
                f,
                g,
                seed,
                Variant::DeterminantsFirst,
                "inconsistent system: no complex solutions for generic parameters",
            ));
        }
        let dim = data.dim();
        let mut engine = Engine::new(&data, g, congruence(opts, dim, seed), seed)?;
        let mut determinants = Vec::new();
        let mut notes = vec!["determinants only: no sample points, no regions".to_string()];
        for k in 0..=g.len() {
            let mut alpha = vec![0u8; g.len()];
            if k > 0 {
                alpha[k - 1] = 1;
            }
            let rank = engine.entry(&alpha)?.rank;
            if rank == dim {
                determinants.push(minor_name(&alpha, dim));
            } else {
                notes.push(format!("H for exponent {alpha:?} is singular (rank {rank} < {dim})"));
            }
        }
        let degree_audit = opts.assume_regular.then(|| engine.audit(f));
        Ok(Classification {
            space: space.clone(),
            equations: f.to_vec(),
            inequalities: g.to_vec(),
            inconsistent: false,
            dim,
            w_infinity: data.cert.w_infinity.clone(),
            sigma: Vec::new(),
            regions: Vec::new(),
            minors: engine.named_minors(),
            determinants,
            count_conditions: Vec::new(),
            completeness: Completeness::Heuristic,
            backend: opts.backend,
            seed,
            variant: Variant::DeterminantsFirst,
            degree_audit,
            notes,
        })
    })
}

fn fmt_point(eta: &[BigRational]) -> String {
    let parts: Vec<String> = eta.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// `η` itself when no minor vanishes there, otherwise a nearby rational
/// point with the same determinant signs and no vanishing minor.
fn nudge_off_minors(
    engine: &Engine<'_>,
    alphas: &[Exponent],
    dets: &[Poly],
    w: &Poly,
    eta: &[BigRational],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<BigRational>> {
    let clear = |p: &[BigRational]| alphas.iter().all(|a| engine.signature_at(a, p).is_some());
    if clear(eta) {
        return Some(eta.to_vec());
    }
    let det_signs: Vec<i32> = dets.iter().map(|d| sign_of(&d.eval_params(eta))).collect();
    let w_sign = sign_of(&w.eval_params(eta));
    for k in 4..40u32 {
        let scale = BigRational::new(BigInt::one(), BigInt::one() << k);
        for _ in 0..8 {
            let p: Vec<BigRational> = eta
                .iter()
                .map(|x| x + &scale * BigRational::from_integer(BigInt::from(rng.random_range(-8i64..=8))))
                .collect();
            let same = dets.iter().zip(&det_signs).all(|(d, &sg)| sign_of(&d.eval_params(&p)) == sg)
                && sign_of(&w.eval_params(&p)) == w_sign;
            if same && clear(&p) {
                return Some(p);
            }
        }
    }
    None
}

/// Count vectors `c` over `{0,1,−1}^s` with `Σ c ≤ δ` whose Tarski queries
/// `Mat·c` are compatible with the ranks, restricted to observed counts.
#[allow(clippy::too_many_arguments)]
fn enumerate_count_conditions(
    engine: &Engine<'_>,
    alphas: &[Exponent],
    full_mat: &Matrix<i64>,
    ones_idx: usize,
    dim: usize,
    counts: &BTreeSet<i64>,
    limit: usize,
    notes: &mut Vec<String>,
) -> Vec<CountCondition> {
    let bins = full_mat.cols();
    // number of vectors with Σ c ≤ δ is C(δ + bins, bins)
    let mut total: u128 = 1;
    for i in 1..=dim as u128 {
        total = total * (bins as u128 + i) / i;
    }
    if total > limit as u128 {
        notes.push(format!("count conditions not enumerated: {total} candidate count vectors exceed the limit {limit}"));
        return Vec::new();
    }
    let ranks: Vec<usize> = alphas.iter().map(|a| engine.entries[a].rank).collect();
    let mut out = Vec::new();
    let mut c = vec![0i64; bins];
    fn rec(
        pos: usize,
        left: i64,
        c: &mut Vec<i64>,
        visit: &mut dyn FnMut(&[i64]),
    ) {
        if pos + 1 == c.len() {
            for v in 0..=left {
                c[pos] = v;
                visit(c);
            }
            c[pos] = 0;
            return;
        }
        for v in 0..=left {
            c[pos] = v;
            rec(pos + 1, left - v, c, visit);
        }
        c[pos] = 0;
    }
    let mut visit = |c: &[i64]| {
        if !counts.contains(&c[ones_idx]) {
            return;
        }
        let mut variations = Vec::with_capacity(alphas.len());
        for (i, a) in alphas.iter().enumerate() {
            let tq: i64 = (0..bins).map(|j| full_mat.get(i, j) * c[j]).sum();
            let r = ranks[i] as i64;
            if tq.abs() > r || (r - tq) % 2 != 0 {
                return;
            }
            variations.push((a.clone(), ((r - tq) / 2) as usize));
        }
        out.push(CountCondition { count: c[ones_idx], variations });
    };
    rec(0, dim as i64, &mut c, &mut visit);
    out.sort_by(|a, b| a.count.cmp(&b.count).then_with(|| a.variations.cmp(&b.variations)));
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub point: Vec<BigRational>,
    pub expected: i64,
    pub found: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    /// Points checked with the oracle, witnesses included.
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    /// Set when the classification came from a heuristic sampling backend.
    pub advisory: bool,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Recounts with the oracle at every witness of `region` and at up to
/// `trials` random points near the first witness that satisfy its formula.
pub fn verify_region(region: &Region, c: &Classification, trials: usize, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7e51_f1ed);
    let mut points: Vec<Vec<BigRational>> = region.witnesses.clone();
    let base = region.witness().to_vec();
    for _ in 0..trials {
        let mut radius = BigRational::one();
        for _ in 0..40 {
            let p: Vec<BigRational> = base
                .iter()
                .map(|x| x + &radius * BigRational::new(BigInt::from(rng.random_range(-64i64..=64)), BigInt::from(64)))
                .collect();
            if c.satisfies(&region.formula, &p) {
                points.push(p);
                break;
            }
            radius /= BigRational::from_integer(2.into());
        }
    }
    let mut mismatches = Vec::new();
    for p in &points {
        let found = count_satisfying(&c.equations, &c.inequalities, p)? as i64;
        if found != region.count {
            mismatches.push(Mismatch { point: p.clone(), expected: region.count, found });
        }
    }
    Ok(VerifyReport { checked: points.len(), mismatches, advisory: c.completeness == Completeness::Heuristic })
}
