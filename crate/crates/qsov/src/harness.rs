//! Configuration files, the verification suite, and JSON reports.
//!
//! Config files are flat `key = value` lines; `#` starts a comment, lists
//! are comma separated, rationals are written `p/q`:
//!
//! ```text
//! N = 3
//! q = 7/5
//! kinds = eval
//! sym = 2
//! inhomogeneities = 3
//! seed = 1
//! ```

use std::collections::BTreeMap;
use std::time::Instant;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::exactnum::{fmt_scalar, parse_scalar, rho, theorem1_scalar_identity, QParam, Scalar};
use crate::fusion::Fusion;
use crate::monodromy::{comm_check, default_cyclic, default_twist, BlockSource, Dressed, LOperator, ModelConfig, Site, SiteKind};
use crate::rmatrix::RMatrix;
use crate::sovcore::{
    build_b, check_corollary_van, check_lemma1, check_lemma2, check_lemma3, lemma3_coefficient, theorem1_commutator,
    vanishing_tensor, Separator,
};
use crate::spectra::{analyze, certify_degree, fmt_f64, random_xi, CommutingFamily, SpectralReport, WClass, CHECK_TOL};
use crate::tensorspace::Mat;
use crate::{Error, Result};

/// Parsed configuration: the model plus run settings.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub model: ModelConfig,
    pub tolerance: f64,
}

const KEYS: [&str; 10] = ["N", "q", "sites", "kinds", "sym", "inhomogeneities", "twist", "cyclic", "seed", "tolerance"];

fn list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// Broadcasts a one-entry list to `n` entries.
fn per_site<'a>(key: &str, vals: Vec<&'a str>, n: usize) -> Result<Vec<&'a str>> {
    match vals.len() {
        1 => Ok(vec![vals[0]; n]),
        l if l == n => Ok(vals),
        l => Err(Error::Config(format!("`{key}` has {l} entries for {n} sites"))),
    }
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let k = k.trim();
            if !KEYS.contains(&k) {
                return Err(Error::Config(format!("line {}: unknown key `{k}`", lineno + 1)));
            }
            if kv.insert(k.to_string(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key `{k}`", lineno + 1)));
            }
        }
        let get = |k: &str| kv.get(k).map(String::as_str);
        let int = |k: &str, v: &str| v.parse::<u64>().map_err(|_| Error::Config(format!("`{k}` must be a non-negative integer, got `{v}`")));
        let scalar = |k: &str, v: &str| parse_scalar(v).map_err(|e| Error::Config(format!("`{k}`: {e}")));

        let n_rank = int("N", get("N").ok_or_else(|| Error::Config("missing key `N`".into()))?)? as usize;
        let ys = list(get("inhomogeneities").ok_or_else(|| Error::Config("missing key `inhomogeneities`".into()))?);
        let n = ys.len();
        if let Some(s) = get("sites") {
            if int("sites", s)? as usize != n {
                return Err(Error::Config(format!("`sites = {s}` but {n} inhomogeneities given")));
            }
        }
        let kinds = per_site("kinds", list(get("kinds").unwrap_or("eval")), n)?;
        let syms = per_site("sym", list(get("sym").unwrap_or("1")), n)?;
        let mut sites = Vec::with_capacity(n);
        for i in 0..n {
            sites.push(Site { kind: SiteKind::parse(kinds[i])?, sym: int("sym", syms[i])? as usize, y: scalar("inhomogeneities", ys[i])? });
        }
        let scalars = |k: &str, default: Vec<Scalar>| -> Result<Vec<Scalar>> {
            match get(k) {
                Some(v) => list(v).into_iter().map(|s| scalar(k, s)).collect(),
                None => Ok(default),
            }
        };
        let model = ModelConfig {
            n_rank,
            q: scalar("q", get("q").unwrap_or("7/5"))?,
            sites,
            twist: scalars("twist", default_twist(n_rank))?,
            cyclic: scalars("cyclic", default_cyclic(n_rank))?,
            seed: match get("seed") {
                Some(v) => int("seed", v)?,
                None => 1,
            },
        };
        let tolerance = match get("tolerance") {
            Some(v) => v.parse::<f64>().ok().filter(|t| *t > 0.0).ok_or_else(|| Error::Config(format!("bad tolerance `{v}`")))?,
            None => CHECK_TOL,
        };
        let cfg = SuiteConfig { model, tolerance };
        cfg.model.validate()?;
        Ok(cfg)
    }

    /// The configuration that runs when none is given: `N = 3`, one
    /// evaluation site on `Sym²`, `q = 7/5`.
    pub fn default_config() -> Self {
        Self::parse(DEFAULT_CONFIG).expect("bundled default config is valid")
    }

    /// Canonical `key = value` text; parsing it gives back `self`.
    pub fn to_text(&self) -> String {
        self.echo().iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    /// Ordered key/value echo for reports.
    pub fn echo(&self) -> Vec<(String, String)> {
        let m = &self.model;
        let join = |v: &[Scalar]| v.iter().map(fmt_scalar).collect::<Vec<_>>().join(", ");
        vec![
            ("N".into(), m.n_rank.to_string()),
            ("q".into(), fmt_scalar(&m.q)),
            ("sites".into(), m.n_sites().to_string()),
            ("kinds".into(), m.sites.iter().map(|s| s.kind.name()).collect::<Vec<_>>().join(", ")),
            ("sym".into(), m.sites.iter().map(|s| s.sym.to_string()).collect::<Vec<_>>().join(", ")),
            ("inhomogeneities".into(), join(&m.sites.iter().map(|s| s.y.clone()).collect::<Vec<_>>())),
            ("twist".into(), join(&m.twist)),
            ("cyclic".into(), join(&m.cyclic)),
            ("seed".into(), m.seed.to_string()),
            ("tolerance".into(), format!("{:e}", self.tolerance)),
        ]
    }
}

pub const DEFAULT_CONFIG: &str = "\
# N = 3, one evaluation site carrying Sym^2 of the vector representation.
N = 3
q = 7/5
kinds = eval
sym = 2
inhomogeneities = 3
seed = 1
";

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub anchor: String,
    pub parameters: Value,
    /// `"0"` for exact checks that hold, otherwise a count or a float.
    pub residual: String,
    pub pass: bool,
    pub wall_time_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with every `wall_time_ms` zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> String {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.wall_time_ms = 0;
        }
        r.to_json()
    }
}

/// Check names with their anchors, in execution order.
pub const SUITE: [(&str, &str); 16] = [
    ("exactnum-identities", "structure functions: quantum-determinant scalar identity and pole detection"),
    ("ybe-unitarity", "trigonometric R-matrix: Yang-Baxter equation and unitarity"),
    ("fusion-ranks-rho", "q-antisymmetrizer ranks and scalarity of r on the top fused module"),
    ("rtt", "monodromy: RTT relation"),
    ("comm-relations", "monodromy: b-b, d-d, b-d exchange relations and component form"),
    ("dressing-covariance", "dressed blocks satisfy the same exchange relations"),
    ("lemma1", "Lemma 1: b_v(x) b_v(xq^-2) = 0"),
    ("corollary-vanishing", "Corollary: b_v(x) d_v(x)^k b_w^l(xq^-2) = 0 for k < l"),
    ("lemma2", "Lemma 2: exchange of fused covectors b_w^k(x), b_w^l(y)"),
    ("theorem1", "Theorem 1: [B(x), B(y)] = 0 and its scalar identity"),
    ("degree-certificate", "B(x) is a polynomial of degree g = (N-1)(Nn-2)/2"),
    ("definition3-build", "Definition 3: Y(x) invertible, D(x) = Y(x)^-1 X(x)"),
    ("lemma3", "Lemma 3: exchange of b_w^k(x) with d_v(y) modulo b_v(y)"),
    ("spectral-exchange", "Theorem 2 consequence: w_j shifts z_j to q^-2 z_j and beta to q beta"),
    ("w-commutativity", "Theorem 3 consequence: w_i w_j = w_j w_i on joint eigenvectors"),
    ("xi-independence", "w_j does not depend on the covector xi"),
];

/// Seeded rational points avoiding zero and the q-orbits of each other and
/// of `avoid` (ratios `q^{2m}`, `|m| ≤ 2N`).
pub struct PointSampler {
    rng: ChaCha8Rng,
    q: QParam,
    orbit: i64,
    taken: Vec<Scalar>,
}

impl PointSampler {
    pub fn new(seed: u64, q: &QParam, n_rank: usize, avoid: &[Scalar]) -> Self {
        PointSampler { rng: ChaCha8Rng::seed_from_u64(seed), q: q.clone(), orbit: 2 * n_rank as i64, taken: avoid.to_vec() }
    }

    fn admissible(&self, p: &Scalar) -> bool {
        !p.is_zero() && self.taken.iter().all(|t| {
            let r = p / t;
            (-self.orbit..=self.orbit).all(|m| self.q.pow(2 * m) != r)
        })
    }

    pub fn next(&mut self) -> Scalar {
        loop {
            let num: i64 = self.rng.gen_range(-40..=40);
            let den: i64 = self.rng.gen_range(1..=12);
            let p = Scalar::new(num.into(), den.into());
            if self.admissible(&p) {
                self.taken.push(p.clone());
                return p;
            }
        }
    }

    pub fn pair(&mut self) -> (Scalar, Scalar) {
        (self.next(), self.next())
    }
}

fn nnz_residual(n: usize) -> String {
    if n == 0 {
        "0".into()
    } else {
        format!("{n} nonzero entries")
    }
}

fn failures(n: usize, what: &str) -> String {
    if n == 0 {
        "0".into()
    } else {
        format!("{n} {what}")
    }
}

struct Outcome {
    parameters: Value,
    residual: String,
    pass: bool,
}

fn outcome(parameters: Value, residual: String, pass: bool) -> Outcome {
    Outcome { parameters, residual, pass }
}

/// Everything the checks share.
pub struct Suite {
    pub cfg: SuiteConfig,
    pub op: LOperator,
    q: QParam,
    spectral: Option<std::result::Result<(SpectralReport, bool), String>>,
}

impl Suite {
    pub fn new(cfg: SuiteConfig) -> Result<Self> {
        let q = cfg.model.validate()?;
        let op = LOperator::build(&cfg.model)?;
        Ok(Suite { cfg, op, q, spectral: None })
    }

    fn sampler(&self, salt: u64) -> PointSampler {
        let ys: Vec<Scalar> = self.cfg.model.sites.iter().map(|s| s.y.clone()).collect();
        PointSampler::new(self.cfg.model.seed.wrapping_mul(0x9e37_79b9).wrapping_add(salt), &self.q, self.cfg.model.n_rank, &ys)
    }

    fn m(&self) -> usize {
        self.cfg.model.n_rank - 1
    }

    fn run_check(&mut self, name: &str) -> Result<Outcome> {
        let n_rank = self.cfg.model.n_rank;
        let m = self.m();
        let salt = SUITE.iter().position(|(n, _)| *n == name).unwrap_or(0) as u64;
        let mut s = self.sampler(salt);
        match name {
            "exactnum-identities" => {
                let mut bad = 0;
                let mut pts = Vec::new();
                for _ in 0..3 {
                    let (x, y) = s.pair();
                    if !theorem1_scalar_identity(n_rank, &x, &y, &self.q)? {
                        bad += 1;
                    }
                    pts.push(json!([fmt_scalar(&x), fmt_scalar(&y)]));
                }
                let x = s.next();
                let pole = crate::exactnum::kappa(&x, &x, &self.q).is_err();
                Ok(outcome(json!({"points": pts, "pole_detected_at_x_eq_y": pole}), failures(bad, "identity failures"), bad == 0 && pole))
            }
            "ybe-unitarity" => {
                let rm = RMatrix::new(n_rank, &self.q);
                let (x, y) = s.pair();
                let z = s.next();
                let n = rm.ybe_residual(&x, &y, &z).nnz() + rm.unitarity_residual(&x, &y).nnz();
                Ok(outcome(json!({"rank": n_rank, "x": fmt_scalar(&x), "y": fmt_scalar(&y), "z": fmt_scalar(&z)}), nnz_residual(n), n == 0))
            }
            "fusion-ranks-rho" => {
                let f: &Fusion = self.op.fusion();
                let mut bad = 0;
                let mut ranks = Vec::new();
                for k in 0..=m {
                    let r = f.module(k).dim();
                    ranks.push(r);
                    if r != binomial(m, k) {
                        bad += 1;
                    }
                }
                let (y, x) = s.pair();
                for l in 1..=m {
                    let r = f.r_ww(l, &y, m, &x)?;
                    if r != Mat::scalar_identity(r.rows(), &rho(l, &y, &x, n_rank, &self.q)) {
                        bad += 1;
                    }
                }
                Ok(outcome(json!({"ranks": ranks, "y": fmt_scalar(&y), "x": fmt_scalar(&x)}), failures(bad, "mismatches"), bad == 0))
            }
            "rtt" => {
                let (x, y) = s.pair();
                let n = self.op.rtt_residual(&x, &y);
                Ok(outcome(json!({"x": fmt_scalar(&x), "y": fmt_scalar(&y)}), nnz_residual(n), n == 0))
            }
            "comm-relations" => {
                let (x, y) = s.pair();
                let r = comm_check(&self.op, &x, &y)?;
                Ok(outcome(json!({"x": fmt_scalar(&x), "y": fmt_scalar(&y), "bb": r.bb, "dd": r.dd, "bd": r.bd, "component": r.component}), nnz_residual(r.total()), r.is_zero()))
            }
            "dressing-covariance" => {
                let (x, y) = s.pair();
                let z = s.next();
                let dressed = Dressed::vector(&self.op, z.clone());
                let r = comm_check(&dressed, &x, &y)?;
                Ok(outcome(json!({"x": fmt_scalar(&x), "y": fmt_scalar(&y), "slot": fmt_scalar(&z)}), nnz_residual(r.total()), r.is_zero()))
            }
            "lemma1" => {
                let x = s.next();
                let y = s.next();
                let holds = check_lemma1(&self.op, &x)?;
                let inversion = vanishing_tensor(&self.op, 0, 1, &x, &y)?.iter().any(|c| !c.is_zero());
                Ok(outcome(json!({"x": fmt_scalar(&x), "generic_y": fmt_scalar(&y), "inversion_nonzero": inversion}), if holds { "0".into() } else { "nonzero tensor".into() }, holds && inversion))
            }
            "corollary-vanishing" => {
                let x = s.next();
                let mut cases = Vec::new();
                let mut bad = 0;
                for l in 1..m {
                    for k in 0..l {
                        let ok = check_corollary_van(&self.op, k, l, &x)?;
                        bad += usize::from(!ok);
                        cases.push(json!({"k": k, "l": l, "zero": ok}));
                    }
                }
                // k = l lies outside the statement and should not vanish.
                let mut inversions_nonzero = true;
                for l in 1..m {
                    let z = check_corollary_van(&self.op, l, l, &x)?;
                    inversions_nonzero &= !z;
                }
                Ok(outcome(json!({"x": fmt_scalar(&x), "cases": cases, "inversions_nonzero": inversions_nonzero}), failures(bad, "nonzero tensors"), bad == 0 && inversions_nonzero))
            }
            "lemma2" => {
                let mut cases = Vec::new();
                let mut bad = 0;
                for k in 1..=m {
                    for l in 1..=m {
                        let (x, y, out) = retry_poles(&mut s, |x, y| check_lemma2(&self.op, k, l, x, y))?;
                        bad += usize::from(!out.holds);
                        cases.push(json!({"k": k, "l": l, "x": fmt_scalar(&x), "y": fmt_scalar(&y), "holds": out.holds, "lhs_zero": out.lhs_zero}));
                    }
                }
                Ok(outcome(json!({"cases": cases}), failures(bad, "unequal cases"), bad == 0))
            }
            "theorem1" => {
                let mut pts = Vec::new();
                let mut n = 0;
                let mut scalar_ok = true;
                for _ in 0..3 {
                    let (x, y) = s.pair();
                    n += theorem1_commutator(&self.op, &x, &y)?;
                    scalar_ok &= theorem1_scalar_identity(n_rank, &x, &y, &self.q)?;
                    pts.push(json!([fmt_scalar(&x), fmt_scalar(&y)]));
                }
                Ok(outcome(json!({"pairs": pts, "scalar_identity": scalar_ok}), nnz_residual(n), n == 0 && scalar_ok))
            }
            "degree-certificate" => {
                let g = self.cfg.model.genus();
                let cert = certify_degree(&self.op, g)?;
                let found = cert.found.map_or(Value::Null, |d| json!(d));
                let top_nnz = cert.coeffs.get(g + 1).map_or(0, Mat::nnz);
                let residual = if cert.holds() { "0".into() } else { format!("degree {:?}, coefficient g+1 has {top_nnz} nonzero entries", cert.found) };
                Ok(outcome(json!({"g": g, "found": found, "verified_at_extra_point": cert.verified}), residual, cert.holds()))
            }
            "definition3-build" => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.model.seed);
                let mut pts = Vec::new();
                let mut redraws = 0;
                let mut xi = random_xi(m, &mut rng);
                let mut ok = true;
                for _ in 0..3 {
                    let x = s.next();
                    let sep = Separator::new(&self.op, xi.clone())?;
                    match sep.d(&x) {
                        Ok(_) => {}
                        Err(Error::SingularY(_)) if redraws == 0 => {
                            redraws += 1;
                            xi = random_xi(m, &mut rng);
                            ok &= Separator::new(&self.op, xi.clone())?.d(&x).is_ok();
                        }
                        Err(Error::SingularY(_)) => ok = false,
                        Err(e) => return Err(e),
                    }
                    pts.push(fmt_scalar(&x));
                }
                let xi_s: Vec<String> = xi.iter().map(fmt_scalar).collect();
                Ok(outcome(json!({"xi": xi_s, "points": pts, "redraws": redraws}), if ok { "0".into() } else { "Y(x) singular".into() }, ok))
            }
            "lemma3" => {
                let (x, y) = s.pair();
                let mut cases = Vec::new();
                let mut bad = 0;
                for k in 1..=m {
                    let c = lemma3_coefficient(k, &x, &y, &self.q)?;
                    let ok = check_lemma3(&self.op, k, &x, &y, &c)?;
                    bad += usize::from(!ok);
                    cases.push(json!({"k": k, "consistent": ok}));
                }
                Ok(outcome(json!({"x": fmt_scalar(&x), "y": fmt_scalar(&y), "cases": cases}), failures(bad, "inconsistent solves"), bad == 0))
            }
            "spectral-exchange" | "w-commutativity" | "xi-independence" => {
                let tol = self.cfg.tolerance;
                let (rep, cert_ok) = match self.spectral()? {
                    Ok(v) => v,
                    Err(msg) => return Ok(outcome(json!({}), msg, false)),
                };
                let counts = serde_json::to_value(&rep.counts).expect("counts serialize");
                if !cert_ok {
                    let msg = format!("degree of B is {}, not g = {}", rep.degree, self.cfg.model.genus());
                    return Ok(outcome(json!({"degree": rep.degree, "degree_certified": false, "counts": counts}), msg, false));
                }
                Ok(match name {
                    "spectral-exchange" => {
                        let pass = rep.exchange_pass();
                        let worst = rep
                            .eigenvectors
                            .iter()
                            .flat_map(|e| e.actions.iter())
                            .filter(|a| a.class == WClass::Ok)
                            .map(|a| a.root_error)
                            .fold(None, |m: Option<f64>, r| Some(m.map_or(r, |m| m.max(r))));
                        let res = match (rep.counts.bad + rep.counts.convention_flip, worst) {
                            (0, Some(w)) => fmt_f64(w),
                            (0, None) if rep.degree == 0 => "0".into(),
                            (0, None) => "no successful actions".into(),
                            (n, _) => format!("{n} failed actions"),
                        };
                        outcome(json!({"degree": rep.degree, "counts": counts}), res, pass)
                    }
                    "w-commutativity" => {
                        let pass = rep.w_commute_pass(tol);
                        let res = rep.w_commute_max.map_or_else(|| "no pairs tested".into(), fmt_f64);
                        outcome(json!({"pairs": rep.w_commute_pairs}), res, pass)
                    }
                    _ => {
                        let pass = rep.xi_pass(tol);
                        let res = rep.xi_difference_max.map_or_else(|| "no actions tested".into(), fmt_f64);
                        outcome(json!({"actions_ok": rep.counts.ok}), res, pass)
                    }
                })
            }
            other => Err(Error::Config(format!("unknown check `{other}`"))),
        }
    }

    /// Spectral analysis, computed once and shared by the last three checks.
    fn spectral(&mut self) -> Result<std::result::Result<(SpectralReport, bool), String>> {
        if self.spectral.is_none() {
            self.spectral = Some(self.compute_spectral()?);
        }
        Ok(self.spectral.clone().expect("just computed"))
    }

    fn compute_spectral(&self) -> Result<std::result::Result<(SpectralReport, bool), String>> {
        let g = self.cfg.model.genus();
        let cert = certify_degree(&self.op, g)?;
        let Some(fam) = CommutingFamily::from_certificate(&cert) else {
            return Ok(Err("B vanishes identically".into()));
        };
        match analyze(&self.op, &fam, self.cfg.model.seed, self.cfg.tolerance) {
            Ok(rep) => Ok(Ok((rep, cert.holds()))),
            Err(e @ (Error::DegenerateSpectrum | Error::IllConditioned(_) | Error::SingularY(_) | Error::DegreeMismatch { .. })) => Ok(Err(e.to_string())),
            Err(e) => Err(e),
        }
    }

    /// Full spectral report (for the `spectra` command).
    pub fn spectral_report(&mut self) -> Result<Value> {
        let g = self.cfg.model.genus();
        let spec = self.spectral()?;
        Ok(match spec {
            Ok((rep, cert_ok)) => json!({"genus": g, "degree_certified": cert_ok, "report": rep, "pass": cert_ok && rep.exchange_pass()}),
            Err(msg) => json!({"genus": g, "error": msg, "pass": false}),
        })
    }

    pub fn run(&mut self) -> Result<ReportDocument> {
        let mut checks = Vec::with_capacity(SUITE.len());
        for (name, anchor) in SUITE {
            let t = Instant::now();
            let out = self.run_check(name)?;
            checks.push(CheckResult {
                name: name.to_string(),
                anchor: anchor.to_string(),
                parameters: out.parameters,
                residual: out.residual,
                pass: out.pass,
                wall_time_ms: t.elapsed().as_millis() as u64,
            });
        }
        let pass = checks.iter().all(|c| c.pass);
        Ok(ReportDocument { config: self.cfg.echo().into_iter().collect(), checks, pass })
    }

    /// `B`, `D`, `Y` or `X` at `x` as an operator tensor on `H`.
    pub fn dump_operator(&self, which: &str, x: &Scalar) -> Result<Value> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.model.seed);
        let mut sep = || Separator::new(&self.op, random_xi(self.m(), &mut rng));
        let mat = match which {
            "B" => build_b(&self.op, x)?,
            "D" => sep()?.d(x)?,
            "Y" => sep()?.y_x(x)?.0,
            "X" => sep()?.y_x(x)?.1,
            other => return Err(Error::Config(format!("unknown operator `{other}`; expected B, D, Y or X"))),
        };
        let h = crate::tensorspace::LabeledSpace::quantum("H", self.op.dim());
        let t = crate::tensorspace::OpTensor::operator(&[h], &mat)?;
        let mut v = t.to_json();
        v["operator"] = json!(which);
        v["at"] = json!(fmt_scalar(x));
        Ok(v)
    }
}

/// Re-samples the pair while the identity hits a pole of its structure
/// functions.
fn retry_poles<T>(s: &mut PointSampler, mut f: impl FnMut(&Scalar, &Scalar) -> Result<T>) -> Result<(Scalar, Scalar, T)> {
    let mut last = None;
    for _ in 0..8 {
        let (x, y) = s.pair();
        match f(&x, &y) {
            Ok(v) => return Ok((x, y, v)),
            Err(e @ (Error::PoleDetected(_) | Error::PoleInPsi(_) | Error::PoleAtEqualArguments(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Exit status for a finished run: 0 all pass, 1 some check failed.
pub fn exit_code(report: &ReportDocument) -> i32 {
    if report.pass {
        0
    } else {
        1
    }
}

/// Whether an error stems from the configuration (exit code 2).
pub fn is_config_error(e: &Error) -> bool {
    matches!(e, Error::Config(_) | Error::InvalidQ(_))
}

/// Parses, builds and runs the suite.
pub fn run_suite(text: &str) -> Result<ReportDocument> {
    Suite::new(SuiteConfig::parse(text)?)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_roundtrips() {
        let c = SuiteConfig::default_config();
        assert_eq!(SuiteConfig::parse(&c.to_text()).unwrap(), c);
        assert_eq!(c.model.sites[0].sym, 2);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = "N = 2\ninhomogeneities = 2, 3\n";
        assert!(SuiteConfig::parse(base).is_ok());
        for bad in [
            "N = 2\nq = 1\ninhomogeneities = 2\n",
            "N = 2\ninhomogeneities = 2, 2\n",
            "N = 2\ninhomogeneities = 2\ncolour = red\n",
            "N = 2\nN = 3\ninhomogeneities = 2\n",
            "N = 2\ninhomogeneities = 2, 3\nkinds = eval, cyclic, eval\n",
            "inhomogeneities = 2\n",
        ] {
            let e = SuiteConfig::parse(bad).unwrap_err();
            assert!(is_config_error(&e), "{bad:?} gave {e:?}");
        }
    }

    #[test]
    fn suite_order_and_names_unique() {
        let mut names: Vec<_> = SUITE.iter().map(|(n, _)| *n).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), SUITE.len());
    }

    #[test]
    fn binomials() {
        assert_eq!((0..=3).map(|k| binomial(3, k)).collect::<Vec<_>>(), vec![1, 3, 3, 1]);
    }
}
