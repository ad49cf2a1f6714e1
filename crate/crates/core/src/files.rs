//! Input systems (TOML) and classification results (JSON), plus the random
//! dense system generator.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{Classification, ClassifyOptions, Variant};
use crate::error::{Error, Result};
use crate::parse::parse_poly;
use crate::poly::{Monomial, Poly, VarSpace};
use crate::samplepoints::{Backend, Completeness};
use crate::upoly::sign_of;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub unknowns: Vec<String>,
    #[serde(default)]
    pub parameters: Vec<String>,
    pub equations: Vec<String>,
    #[serde(default)]
    pub inequalities: Vec<String>,
    #[serde(default)]
    pub options: SystemOptions,
}

/// A system file with every expression parsed.
#[derive(Clone, Debug)]
pub struct System {
    pub space: Arc<VarSpace>,
    pub equations: Vec<Poly>,
    pub inequalities: Vec<Poly>,
    pub options: SystemOptions,
}

impl SystemFile {
    pub fn from_toml(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::InvalidInput(format!("system file: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("system files always serialize")
    }

    pub fn parse(&self) -> Result<System> {
        if self.equations.is_empty() {
            return Err(Error::InvalidInput("system file lists no equations".into()));
        }
        let space = VarSpace::new(&self.unknowns, &self.parameters)?;
        let read = |what: &str, list: &[String]| -> Result<Vec<Poly>> {
            list.iter()
                .enumerate()
                .map(|(i, s)| {
                    parse_poly(&space, s).map_err(|e| match e {
                        Error::Parse { column, message } => Error::Expression {
                            list: what.into(),
                            index: i,
                            source_text: s.clone(),
                            column,
                            message,
                        },
                        e => e,
                    })
                })
                .collect()
        };
        Ok(System {
            equations: read("equations", &self.equations)?,
            inequalities: read("inequalities", &self.inequalities)?,
            space,
            options: self.options.clone(),
        })
    }
}

impl System {
    pub fn to_file(&self) -> SystemFile {
        SystemFile {
            unknowns: self.space.unknowns().to_vec(),
            parameters: self.space.parameters().to_vec(),
            equations: self.equations.iter().map(|p| p.to_string()).collect(),
            inequalities: self.inequalities.iter().map(|p| p.to_string()).collect(),
            options: self.options.clone(),
        }
    }

    /// File options layered over `base`.
    pub fn classify_options(&self, base: &ClassifyOptions) -> ClassifyOptions {
        let mut o = base.clone();
        if let Some(s) = self.options.seed {
            o.seed = s;
        }
        if let Some(b) = self.options.backend {
            o.backend = b;
        }
        o
    }
}

/// Dense polynomials of exact total degree `d` in `n` unknowns and `t`
/// parameters: `n` equations and `s` inequalities, every coefficient a
/// nonzero integer in `[−99, 99]`.
pub fn gen_random_system(n: usize, t: usize, s: usize, d: u32, seed: u64) -> Result<SystemFile> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidInput("need at least one unknown and positive degree".into()));
    }
    let unknowns: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let parameters: Vec<String> = (1..=t).map(|i| format!("y{i}")).collect();
    let space = VarSpace::new(&unknowns, &parameters)?;
    let monos = monomials_up_to(n + t, d);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || -> String {
        let p = Poly::from_terms(
            &space,
            monos.iter().map(|m| {
                let mut c = 0i64;
                while c == 0 {
                    c = rng.random_range(-99..=99);
                }
                (Monomial::from_exponents(m.clone()), BigRational::from_integer(BigInt::from(c)))
            }),
        );
        p.to_string()
    };
    let equations = (0..n).map(|_| draw()).collect();
    let inequalities = (0..s).map(|_| draw()).collect();
    Ok(SystemFile { unknowns, parameters, equations, inequalities, options: SystemOptions { seed: Some(seed), ..Default::default() } })
}

fn monomials_up_to(vars: usize, d: u32) -> Vec<Vec<u32>> {
    if vars == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for e in 0..=d {
        for mut rest in monomials_up_to(vars - 1, d - e) {
            rest.insert(0, e);
            out.push(rest);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorRecord {
    pub name: String,
    pub alpha: Vec<u8>,
    pub index: usize,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteralRecord {
    pub minor: String,
    /// `"+"` or `"-"`.
    pub sign: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub formula: Vec<LiteralRecord>,
    /// Rationals written as `p/q` or integers.
    pub witnesses: Vec<Vec<String>>,
    pub count: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountConditionRecord {
    pub count: i64,
    /// Required sign variations in `(1, m[α][1], …)` keyed by `α` digits.
    pub variations: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub unknowns: Vec<String>,
    pub parameters: Vec<String>,
    pub equations: Vec<String>,
    pub inequalities: Vec<String>,
    pub inconsistent: bool,
    pub dim: usize,
    pub w_infinity: String,
    pub sigma: Vec<Vec<i8>>,
    pub minors: Vec<MinorRecord>,
    pub determinants: Vec<String>,
    pub regions: Vec<RegionRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub count_conditions: Vec<CountConditionRecord>,
    pub completeness: Completeness,
    pub backend: Backend,
    pub seed: u64,
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree_audit_pass: Option<bool>,
    #[serde(default)]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

fn digits(alpha: &[u8]) -> String {
    alpha.iter().map(|a| char::from(b'0' + a)).collect()
}

impl ResultFile {
    pub fn from_classification(c: &Classification, timing: Option<Timing>) -> Self {
        ResultFile {
            unknowns: c.space.unknowns().to_vec(),
            parameters: c.space.parameters().to_vec(),
            equations: c.equations.iter().map(|p| p.to_string()).collect(),
            inequalities: c.inequalities.iter().map(|p| p.to_string()).collect(),
            inconsistent: c.inconsistent,
            dim: c.dim,
            w_infinity: c.w_infinity.to_string(),
            sigma: c.sigma.clone(),
            minors: c
                .minors
                .iter()
                .map(|m| MinorRecord { name: m.name.clone(), alpha: m.alpha.clone(), index: m.index, poly: m.poly.to_string() })
                .collect(),
            determinants: c.determinants.clone(),
            regions: c
                .regions
                .iter()
                .map(|r| RegionRecord {
                    formula: r
                        .formula
                        .iter()
                        .map(|l| LiteralRecord { minor: l.minor.clone(), sign: if l.sign > 0 { "+" } else { "-" }.into() })
                        .collect(),
                    witnesses: r.witnesses.iter().map(|w| w.iter().map(|x| x.to_string()).collect()).collect(),
                    count: r.count,
                })
                .collect(),
            count_conditions: c
                .count_conditions
                .iter()
                .map(|cc| CountConditionRecord {
                    count: cc.count,
                    variations: cc.variations.iter().map(|(a, v)| (digits(a), *v)).collect(),
                })
                .collect(),
            completeness: c.completeness,
            backend: c.backend,
            seed: c.seed,
            variant: c.variant,
            degree_audit_pass: c.degree_audit.as_ref().map(|a| a.pass),
            notes: c.notes.clone(),
            timing,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result files always serialize")
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::InvalidInput(format!("result file: {e}")))
    }

    /// Re-reads the minors and witnesses and checks every region formula at
    /// every witness by exact evaluation, using nothing but this file.
    pub fn self_check(&self) -> Result<()> {
        let space = VarSpace::new(&self.unknowns, &self.parameters)?;
        let w = parse_poly(&space, &self.w_infinity)?;
        let mut minors = BTreeMap::new();
        for m in &self.minors {
            minors.insert(m.name.as_str(), parse_poly(&space, &m.poly)?);
        }
        for (k, r) in self.regions.iter().enumerate() {
            for wit in &r.witnesses {
                let eta: Vec<BigRational> = wit.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?;
                if sign_of(&w.eval_params(&eta)) == 0 {
                    return Err(Error::InternalConsistency(format!("region {k}: w_infinity vanishes at a witness")));
                }
                for l in &r.formula {
                    let p = minors
                        .get(l.minor.as_str())
                        .ok_or_else(|| Error::InvalidInput(format!("region {k} names unknown minor {}", l.minor)))?;
                    let want = if l.sign == "+" { 1 } else { -1 };
                    if sign_of(&p.eval_params(&eta)) != want {
                        return Err(Error::InternalConsistency(format!("region {k}: {} has the wrong sign at a witness", l.minor)));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("not a rational number: `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
