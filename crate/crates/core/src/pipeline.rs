//! Batch verification pipeline: one stage per lemma cluster, deterministic
//! reports, and a strict exit-code contract.
//!
//! Exit codes: 0 all pass, 1 any fail, 2 usage error, 3 inconclusive
//! results present without failures. A fixed seed makes the JSON report
//! byte-identical across runs; wall-clock timings are therefore shown only
//! in the text rendering and zeroed in the canonical JSON.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::building::{
    b_translate, boundary_action, contraction_profile, elementary_poly, fixes_vertex,
    poly_matrix_to_laurent, sector_contains, stabilizer_degree_bounds, verify_m_combinatorics,
    ApartmentVertex, LatticeVertex, ParabolicVertex,
};
use crate::cyclelab::{build_sphere, CycleSystem, HomologyGroup};
use crate::error::{ExactError, Result};
use crate::exactfield::{LaurentRing, LaurentSeries, Matrix, PolyRing, ValBound};
use crate::rootlift::{build_f, default_floor, lift_root, q_sequence, residual_valuation, RootLiftState};
use crate::toruslab::{
    diagonalizer, make_generators, scan_words, Diagonalizer, WordExponents,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllChoice {
    Auto,
    Fixed(u64),
}

impl Serialize for EllChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EllChoice::Auto => s.serialize_str("auto"),
            EllChoice::Fixed(v) => s.serialize_str(&v.to_string()),
        }
    }
}

/// Full run configuration; identical configurations produce byte-identical
/// JSON reports.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub n: usize,
    /// Truncation floor; `None` picks per-stage defaults.
    pub floor: Option<i64>,
    /// Word exponent bound M for the exhaustive suites.
    pub word_bound: i64,
    /// Filtration escape exponent (the sphere surrounds `b^k e`).
    pub k: i64,
    /// Distance of the fundamental domain base from the cone base;
    /// defaults to k + 2.
    pub k0: Option<i64>,
    pub ell: EllChoice,
    pub matrix_samples: usize,
    pub vertex_samples: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 3,
            floor: None,
            word_bound: 3,
            k: 4,
            k0: None,
            ell: EllChoice::Auto,
            matrix_samples: 100,
            vertex_samples: 10,
            seed: 7,
            format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(ExactError::InvalidInput(format!("n must be >= 2, got {}", self.n)));
        }
        if let Some(f) = self.floor {
            if f > 1 - self.n as i64 {
                return Err(ExactError::InvalidInput(format!(
                    "floor must be <= {}, got {f}",
                    1 - self.n as i64
                )));
            }
        }
        if self.word_bound < 1 {
            return Err(ExactError::InvalidInput("word bound must be >= 1".to_string()));
        }
        if self.k < 1 {
            return Err(ExactError::InvalidInput("k must be >= 1".to_string()));
        }
        if self.matrix_samples == 0 || self.vertex_samples == 0 {
            return Err(ExactError::InvalidInput("sample sizes must be positive".to_string()));
        }
        Ok(())
    }

    fn root_floor(&self) -> i64 {
        self.floor.unwrap_or_else(|| default_floor(self.n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// One verified claim. `millis` is fixed at zero so reports stay
/// byte-identical; measured time lives in the transient `elapsed_ms`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub status: CheckStatus,
    pub witness: Value,
    pub millis: u64,
    #[serde(skip)]
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub total: usize,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl VerificationReport {
    fn assemble(config: RunConfig, checks: Vec<CheckRecord>) -> Self {
        let pass = checks.iter().filter(|c| c.status == CheckStatus::Pass).count();
        let fail = checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
        let inconclusive =
            checks.iter().filter(|c| c.status == CheckStatus::Inconclusive).count();
        let status = if fail > 0 {
            CheckStatus::Fail
        } else if inconclusive > 0 {
            CheckStatus::Inconclusive
        } else {
            CheckStatus::Pass
        };
        let total = checks.len();
        VerificationReport {
            config,
            checks,
            summary: Summary { pass, fail, inconclusive, total, status },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.summary.status {
            CheckStatus::Pass => 0,
            CheckStatus::Fail => 1,
            CheckStatus::Inconclusive => 3,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Inconclusive => "INCONCLUSIVE",
            };
            out.push_str(&format!(
                "{status:12} {:32} [{}] ({} ms)\n",
                c.name, c.anchor, c.elapsed_ms
            ));
            if c.status != CheckStatus::Pass {
                out.push_str(&format!("             witness: {}\n", c.witness));
            }
        }
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} inconclusive ({} checks)\n",
            self.summary.pass, self.summary.fail, self.summary.inconclusive, self.summary.total
        ));
        out
    }
}

struct StageRunner {
    checks: Vec<CheckRecord>,
}

impl StageRunner {
    fn new() -> Self {
        StageRunner { checks: Vec::new() }
    }

    fn run(
        &mut self,
        name: &str,
        anchor: &str,
        body: impl FnOnce() -> Result<(bool, Value)>,
    ) {
        let started = std::time::Instant::now();
        let (status, witness) = match body() {
            Ok((true, w)) => (CheckStatus::Pass, w),
            Ok((false, w)) => (CheckStatus::Fail, w),
            Err(ExactError::InsufficientPrecision(msg)) | Err(ExactError::Inconclusive(msg)) => {
                (CheckStatus::Inconclusive, json!({ "reason": msg }))
            }
            Err(other) => (CheckStatus::Fail, json!({ "error": other.to_string() })),
        };
        self.checks.push(CheckRecord {
            name: name.to_string(),
            anchor: anchor.to_string(),
            status,
            witness,
            millis: 0,
            elapsed_ms: started.elapsed().as_millis() as u64,
        });
    }

    fn has_inconclusive(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Inconclusive)
    }
}

fn val_bound_json(b: &ValBound) -> Value {
    match b {
        ValBound::Exact(v) => json!({ "kind": "exact", "value": v }),
        ValBound::AtLeast(v) => json!({ "kind": "at-least", "value": v }),
        ValBound::Infinite => json!({ "kind": "infinite" }),
    }
}

/// Doubles the truncation depth below the shallowest legal floor.
fn deepen(floor: i64, n: usize) -> i64 {
    let base = 1 - n as i64;
    base + 2 * (floor - base)
}

// ---------------------------------------------------------------------------
// Sampling helpers (seeded, deterministic).

pub fn random_unimodular(
    rng: &mut ChaCha8Rng,
    n: usize,
    steps: usize,
    max_deg: u32,
    max_coeff: i64,
) -> Matrix<PolyRing> {
    let mut acc = Matrix::identity(PolyRing::rational(), n);
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let mut c = 0;
        while c == 0 {
            c = rng.gen_range(-max_coeff..=max_coeff);
        }
        let d = rng.gen_range(0..=max_deg);
        let e = elementary_poly(n, i, j, c, d).expect("valid elementary");
        acc = acc.mul(&e).expect("square");
    }
    acc
}

pub fn random_sector_vertex(rng: &mut ChaCha8Rng, n: usize, max_exp: i64) -> ApartmentVertex {
    let mut exps: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    ApartmentVertex::new(exps)
}

pub fn random_word(rng: &mut ChaCha8Rng, rank: usize, bound: i64) -> WordExponents {
    loop {
        let w: Vec<i64> = (0..rank).map(|_| rng.gen_range(-bound..=bound)).collect();
        if w.iter().any(|x| *x != 0) {
            return WordExponents(w);
        }
    }
}

// ---------------------------------------------------------------------------
// Stage: root lifting.

fn root_checks(config: &RunConfig, floor: i64) -> StageRunner {
    let n = config.n;
    let mut r = StageRunner::new();

    r.run("root.q-sequence", "q-sequence positive and pairwise distinct", || {
        let q = q_sequence(n)?;
        let distinct = (0..q.len()).all(|i| (0..i).all(|j| q[i] != q[j]));
        let positive = q.iter().all(|x| *x > 0);
        Ok((distinct && positive, json!({ "q": q })))
    });

    r.run("root.f-endpoints", "marker polynomial is monic with pinned endpoints", || {
        let f = build_f(n)?;
        let q = q_sequence(n)?;
        let monic = f.is_monic();
        let prod_q: i64 = q.iter().product();
        let const_ok = f.coeff(0)
            == crate::exactfield::Poly::from_int_coeffs([(n as u32, prod_q), (0, -1)]);
        // the first factor vanishes at -q_1 t, leaving exactly -1
        let at_root = f.eval(&crate::exactfield::Poly::from_int_coeffs([(1, -q[0])]));
        let eval_ok = at_root == crate::exactfield::Poly::from_int_coeffs([(0, -1)]);
        Ok((
            monic && const_ok && eval_ok,
            json!({ "monic": monic, "constant_ok": const_ok, "eval_ok": eval_ok }),
        ))
    });

    let needed = -floor - n as i64;
    for branch in 1..=n {
        r.run(
            &format!("root.residual.branch-{branch}"),
            "substituted root leaves residual below the floor",
            || {
                let st = RootLiftState::run(n, branch, floor)?;
                let alpha = st.series();
                let res = residual_valuation(&alpha, n)?;
                let ok = res.certifies_at_least(needed);
                Ok((
                    ok,
                    json!({
                        "floor": floor,
                        "required": needed,
                        "residual": val_bound_json(&res),
                        "c0": st.coefficients()[0].to_string(),
                        "coefficients": st.coefficients().len(),
                    }),
                ))
            },
        );
    }

    r.run("root.branch1-factor-product", "product of shifted branch-1 root is 1", || {
        let alpha = lift_root(n, 1, floor)?;
        let q = q_sequence(n)?;
        let mut prod = LaurentSeries::one();
        for qi in &q {
            prod = &prod * &(&alpha + &LaurentSeries::monomial(1, crate::exactfield::rat(*qi)));
        }
        let diff = &prod - &LaurentSeries::one();
        Ok((diff.stored_is_empty(), json!({ "residual_floor": diff.floor() })))
    });

    r.run("root.vieta", "branch sum and product match the coefficients", || {
        let q = q_sequence(n)?;
        let roots: Vec<LaurentSeries> =
            (1..=n).map(|b| lift_root(n, b, floor)).collect::<Result<_>>()?;
        let mut sum = LaurentSeries::zero();
        let mut prod = LaurentSeries::one();
        for root in &roots {
            sum = &sum + root;
            prod = &prod * root;
        }
        let q_total: i64 = q.iter().sum();
        let q_prod: i64 = q.iter().product();
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let sum_ok =
            (&sum - &LaurentSeries::monomial(1, crate::exactfield::rat(-q_total))).stored_is_empty();
        let expect_prod = LaurentSeries::from_terms(
            [
                (n as i64, crate::exactfield::rat(sign * q_prod)),
                (0, crate::exactfield::rat(-sign)),
            ],
            None,
        );
        let prod_ok = (&prod - &expect_prod).stored_is_empty();
        Ok((sum_ok && prod_ok, json!({ "sum_ok": sum_ok, "product_ok": prod_ok })))
    });

    r.run("root.prefix-stability", "deeper floors keep earlier coefficients", || {
        let shallow = RootLiftState::run(n, 1, floor)?;
        let deep = RootLiftState::run(n, 1, deepen(floor, n))?;
        let k = shallow.coefficients().len();
        let ok = &deep.coefficients()[..k] == shallow.coefficients();
        Ok((ok, json!({ "prefix": k })))
    });

    r
}

// ---------------------------------------------------------------------------
// Stage: torus identities and word certificates.

fn torus_checks(config: &RunConfig, floor: i64) -> StageRunner {
    let n = config.n;
    let m_bound = config.word_bound;
    let mut r = StageRunner::new();

    let gens = match make_generators(n) {
        Ok(g) => g,
        Err(e) => {
            r.run("torus.generators", "generator construction identities", || Err(e.clone()));
            return r;
        }
    };

    r.run("torus.cayley-hamilton", "f vanishes on its companion matrix", || {
        let f = build_f(n)?;
        let z = f.eval_matrix(gens.companion())?;
        let ok = z == Matrix::zero(*gens.companion().ring(), n, n);
        Ok((ok, json!({})))
    });

    r.run("torus.factor-product", "shifted companion factors multiply to I", || {
        let identity = Matrix::identity(*gens.companion().ring(), n);
        let mut prod = identity.clone();
        for qi in gens.q() {
            let shift = identity.scale(&crate::exactfield::Poly::from_int_coeffs([(1, *qi)]));
            prod = prod.mul(&gens.companion().add(&shift)?)?;
        }
        Ok((prod == identity, json!({})))
    });

    r.run("torus.generator-units", "squared generators have determinant one", || {
        let one = crate::exactfield::Poly::one(crate::exactfield::RingTag::Int);
        let ok = gens
            .generators()
            .iter()
            .map(|a| a.det())
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|d| *d == one);
        Ok((ok, json!({ "generators": gens.generators().len() })))
    });

    r.run("torus.commuting", "generators commute exactly", || {
        for i in 0..gens.generators().len() {
            for j in 0..i {
                let ab = gens.generators()[i].mul(&gens.generators()[j])?;
                let ba = gens.generators()[j].mul(&gens.generators()[i])?;
                if ab != ba {
                    return Ok((false, json!({ "i": i + 1, "j": j + 1 })));
                }
            }
        }
        Ok((true, json!({})))
    });

    r.run("torus.char-poly", "companion characteristic polynomial is the marker", || {
        let cp = gens.companion().char_poly()?;
        let f = build_f(n)?;
        Ok((cp == f || cp == f.neg(), json!({})))
    });

    // One scan powers the word suite: nontriviality, leading terms,
    // valuation sums, fixed-point obstructions.
    let frame = match gens.eigen_frame(floor) {
        Ok(f) => f,
        Err(e) => {
            r.run("torus.word-suite", "word suite over the exponent cube", || Err(e.clone()));
            return r;
        }
    };
    let mut words = 0usize;
    let mut nontrivial_fail: Option<WordExponents> = None;
    let mut leading_fail: Option<WordExponents> = None;
    let mut valsum_fail: Option<WordExponents> = None;
    let mut nofix_fail: Option<WordExponents> = None;
    let identity = Matrix::identity(*gens.companion().ring(), n);
    let primes = gens.primes().to_vec();
    let scan = scan_words(&gens, &frame, m_bound, &mut |m, mat, leads| {
        if m.is_zero() {
            return Ok(());
        }
        words += 1;
        if nontrivial_fail.is_none() && *mat == identity {
            nontrivial_fail = Some(m.clone());
        }
        if leading_fail.is_none() {
            // branch-1 leading term must be prod p_i^(2 m_i) t^(2 sum m_i)
            let mut expected = crate::exactfield::rat(1);
            for (p, e) in primes.iter().zip(&m.0) {
                expected *= crate::exactfield::rat(*p).pow((2 * e) as i32);
            }
            let (le, lc) = &leads[0];
            let nontrivial = !(expected == crate::exactfield::rat(1) && m.sum() == 0);
            if !(*le == 2 * m.sum() && *lc == expected && nontrivial) {
                leading_fail = Some(m.clone());
            }
        }
        // valuations are the negated leading exponents
        if valsum_fail.is_none() && leads.iter().map(|(e, _)| -e).sum::<i64>() != 0 {
            valsum_fail = Some(m.clone());
        }
        if nofix_fail.is_none() {
            let has_nonzero_val = leads.iter().any(|(e, _)| *e != 0);
            // All valuations zero would need the full series to look for a
            // nonconstant tail; fall back to the per-word computation.
            let certified = has_nonzero_val || frame.fixes_no_point_certificate(m).is_ok();
            if !certified {
                nofix_fail = Some(m.clone());
            }
        }
        Ok(())
    });

    let scan_err = scan.err();
    let report_scan = |r: &mut StageRunner,
                       name: &str,
                       anchor: &str,
                       failure: Option<WordExponents>,
                       words: usize,
                       scan_err: &Option<ExactError>| {
        let failure = failure.clone();
        let scan_err = scan_err.clone();
        r.run(name, anchor, move || {
            if let Some(e) = scan_err {
                return Err(e);
            }
            match failure {
                None => Ok((true, json!({ "words": words }))),
                Some(m) => Ok((false, json!({ "words": words, "first_failure": m.to_string() }))),
            }
        });
    };
    report_scan(
        &mut r,
        "torus.word-nontrivial",
        "no nonzero word collapses to the identity",
        nontrivial_fail,
        words,
        &scan_err,
    );
    report_scan(
        &mut r,
        "torus.leading-terms",
        "leading eigen-terms are the predicted prime powers",
        leading_fail,
        words,
        &scan_err,
    );
    report_scan(
        &mut r,
        "torus.valuation-sum",
        "branch valuations of every word sum to zero",
        valsum_fail,
        words,
        &scan_err,
    );
    report_scan(
        &mut r,
        "torus.no-fixed-point",
        "every nonzero word carries a fixed-point obstruction",
        nofix_fail,
        words,
        &scan_err,
    );

    r.run("torus.diagonalizer", "conjugation kills all off-diagonal entries", || {
        let d = diagonalizer(n, floor)?;
        let mut worst: Option<ValBound> = None;
        let mut targets: Vec<Matrix<PolyRing>> = vec![gens.companion().clone()];
        targets.extend(gens.generators().iter().cloned());
        for mmat in &targets {
            let conj = d.conjugate_poly(mmat)?;
            let b = Diagonalizer::off_diagonal_bound(&conj);
            let replace = match (&worst, &b) {
                (None, _) => true,
                (Some(ValBound::Infinite), _) => false,
                (Some(ValBound::Exact(w)) | Some(ValBound::AtLeast(w)), ValBound::Exact(v))
                | (Some(ValBound::Exact(w)) | Some(ValBound::AtLeast(w)), ValBound::AtLeast(v)) => {
                    v < w
                }
                (Some(_), ValBound::Infinite) => false,
            };
            if replace {
                worst = Some(b);
            }
        }
        let worst = worst.unwrap_or(ValBound::Infinite);
        let ok = worst.certifies_at_least(20);
        Ok((ok, json!({ "min_off_diagonal": val_bound_json(&worst), "required": 20 })))
    });

    r.run("torus.vertex-crosscheck", "sampled words fix no sampled vertex", || {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x746f7275);
        let words: Vec<WordExponents> =
            (0..10).map(|_| random_word(&mut rng, n - 1, m_bound)).collect();
        let mut vertices = Vec::new();
        for _ in 0..10 {
            let v = random_sector_vertex(&mut rng, n, 4);
            let shear = random_unimodular(&mut rng, n, 2, 1, 2);
            let basis = poly_matrix_to_laurent(&shear, None).mul(v.to_lattice().basis())?;
            vertices.push(LatticeVertex::new(basis)?);
        }
        let mut checked = 0usize;
        for m in &words {
            let w = gens.word_matrix(m)?;
            let wl = poly_matrix_to_laurent(&w, None);
            for v in &vertices {
                checked += 1;
                if fixes_vertex(&wl, v)? {
                    return Ok((
                        false,
                        json!({ "word": m.to_string(), "checked": checked }),
                    ));
                }
            }
        }
        Ok((true, json!({ "checked": checked })))
    });

    r
}

// ---------------------------------------------------------------------------
// Stage: building decision procedures.

/// Floor pinned by the stabilizer-oracle acceptance criterion.
const ORACLE_FLOOR: i64 = -60;

fn building_checks(config: &RunConfig) -> StageRunner {
    let n = config.n;
    let mut r = StageRunner::new();

    r.run("building.shape-oracle", "degree bounds agree with the valuation oracle", || {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x6f7261636c65);
        let vertices: Vec<ApartmentVertex> = (0..config.vertex_samples)
            .map(|_| random_sector_vertex(&mut rng, n, 5))
            .collect();
        let mut agree = 0usize;
        let mut undecidable = 0usize;
        let mut disagreements = Vec::new();
        let mut member_hits = 0usize;
        for s in 0..config.matrix_samples {
            // alternate a generic population with one built inside a shape
            let in_shape_of = if s % 4 == 3 { Some(&vertices[s % vertices.len()]) } else { None };
            let g = match in_shape_of {
                None => random_unimodular(&mut rng, n, 6, 2, 3),
                Some(v) => {
                    let shape = stabilizer_degree_bounds(v);
                    let mut acc = Matrix::identity(PolyRing::rational(), n);
                    for _ in 0..4 {
                        let i = rng.gen_range(0..n);
                        let mut j = rng.gen_range(0..n - 1);
                        if j >= i {
                            j += 1;
                        }
                        if let crate::building::DegreeBound::AtMost(d) = shape.bound(i, j) {
                            let deg = rng.gen_range(0..=d.max(0)) as u32;
                            let mut c = 0;
                            while c == 0 {
                                c = rng.gen_range(-3..=3);
                            }
                            acc = acc.mul(&elementary_poly(n, i, j, c, deg)?)?;
                        }
                    }
                    acc
                }
            };
            let gl = poly_matrix_to_laurent(&g, Some(ORACLE_FLOOR));
            for v in &vertices {
                let shape = stabilizer_degree_bounds(v);
                let by_shape = shape.contains(&g);
                match fixes_vertex(&gl, &v.to_lattice()) {
                    Ok(by_oracle) => {
                        if by_oracle == by_shape {
                            agree += 1;
                            if by_shape {
                                member_hits += 1;
                            }
                        } else if disagreements.len() < 3 {
                            disagreements.push(format!("vertex {v}"));
                        }
                    }
                    Err(_) => undecidable += 1,
                }
            }
        }
        let total = config.matrix_samples * config.vertex_samples;
        let ok = agree == total && undecidable == 0;
        Ok((
            ok,
            json!({
                "checked": total,
                "agree": agree,
                "undecidable": undecidable,
                "members_seen": member_hits,
                "floor": ORACLE_FLOOR,
                "disagreements": disagreements,
            }),
        ))
    });

    r.run("building.equivariance", "fixing is conjugation-equivariant", || {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x65717569);
        let mut checked = 0usize;
        for _ in 0..20 {
            let g = random_unimodular(&mut rng, n, 4, 2, 2);
            let h = random_unimodular(&mut rng, n, 3, 1, 2);
            let v = random_sector_vertex(&mut rng, n, 3);
            let gl = poly_matrix_to_laurent(&g, None);
            let hl = poly_matrix_to_laurent(&h, None);
            let hinv = poly_matrix_to_laurent(&h, None).inv()?;
            let lhs = fixes_vertex(&gl, &v.to_lattice())?;
            let conj = hl.mul(&gl)?.mul(&hinv)?;
            let moved = LatticeVertex::new(hl.mul(v.to_lattice().basis())?)?;
            let rhs = fixes_vertex(&conj, &moved)?;
            checked += 1;
            if lhs != rhs {
                return Ok((false, json!({ "vertex": v.to_string(), "checked": checked })));
            }
        }
        Ok((true, json!({ "checked": checked })))
    });

    r.run("building.shape-closure", "shape members multiply into the shape", || {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x636c6f73);
        let mut checked = 0usize;
        for _ in 0..20 {
            let v = random_sector_vertex(&mut rng, n, 4);
            let shape = stabilizer_degree_bounds(&v);
            let member = |rng: &mut ChaCha8Rng| -> Result<Matrix<PolyRing>> {
                let mut acc = Matrix::identity(PolyRing::rational(), n);
                for _ in 0..3 {
                    let i = rng.gen_range(0..n);
                    let mut j = rng.gen_range(0..n - 1);
                    if j >= i {
                        j += 1;
                    }
                    if let crate::building::DegreeBound::AtMost(d) = shape.bound(i, j) {
                        let deg = rng.gen_range(0..=d.max(0)) as u32;
                        let mut c = 0;
                        while c == 0 {
                            c = rng.gen_range(-2..=2);
                        }
                        acc = acc.mul(&elementary_poly(n, i, j, c, deg)?)?;
                    }
                }
                Ok(acc)
            };
            let a = member(&mut rng)?;
            let b = member(&mut rng)?;
            if !shape.contains(&a) || !shape.contains(&b) {
                return Ok((false, json!({ "reason": "member construction left the shape" })));
            }
            checked += 1;
            if !shape.contains(&a.mul(&b)?) {
                return Ok((false, json!({ "vertex": v.to_string() })));
            }
        }
        Ok((true, json!({ "checked": checked })))
    });

    r.run("building.translation", "sector tests and b-translation arithmetic", || {
        let base = ApartmentVertex::base(n);
        let one_step = b_translate(&base, 1);
        let expect: Vec<i64> =
            (0..n).map(|i| if i + 1 == n { 0 } else { n as i64 }).collect();
        let step_ok = one_step.exponents() == expect.as_slice();
        let additive = b_translate(&b_translate(&base, 2), 3) == b_translate(&base, 5);
        let sector_ok = sector_contains(&ApartmentVertex::new(vec![0; n]))
            && sector_contains(&one_step)
            && !sector_contains(&ApartmentVertex::new(
                (0..n).map(|i| if i == 1 { 1 } else { 0 }).collect(),
            ));
        Ok((
            step_ok && additive && sector_ok,
            json!({ "one_step": one_step.to_string() }),
        ))
    });

    r.run("building.contraction", "root coordinates contract linearly in k", || {
        for j in 1..n {
            for k in 0..=10i64 {
                if contraction_profile(n, j, k)? != k * n as i64 {
                    return Ok((false, json!({ "j": j, "k": k })));
                }
            }
        }
        // matrix-level dual route at j = 1
        for k in 0..3i64 {
            let shift = contraction_profile(n, 1, k)?;
            let mut e = Matrix::identity(LaurentRing, n);
            e.set(0, n - 1, LaurentSeries::t_power(-shift));
            for m in 0..=6i64 {
                let mut exps = vec![0i64; n];
                exps[0] = -m;
                let v = ApartmentVertex::new(exps).to_lattice();
                if fixes_vertex(&e, &v)? != (m <= shift) {
                    return Ok((false, json!({ "k": k, "m": m })));
                }
            }
        }
        Ok((true, json!({ "max_k": 10 })))
    });

    r.run("building.m-combinatorics", "fixed boundary set is the subdivided simplex", || {
        let rep = verify_m_combinatorics(n)?;
        Ok((
            rep.pass,
            json!({
                "fixed": rep.fixed_count,
                "expected_fixed": rep.expected_fixed_count,
                "top_cells": rep.top_cells,
                "expected_top_cells": rep.expected_top_cells,
                "euler": rep.euler,
                "homology_trivial": rep.homology_trivial,
                "facet_walls_ok": rep.facet_walls_ok,
            }),
        ))
    });

    // spot check of the quoted action rule
    r.run("building.boundary-action", "root groups fix exactly the compatible vertices", || {
        let mut ok = true;
        for v in ParabolicVertex::enumerate(n) {
            for i in 1..n {
                let expect = !v.subset().contains(&n) || v.subset().contains(&i);
                if boundary_action(n, i, &v)? != expect {
                    ok = false;
                }
            }
        }
        Ok((ok, json!({ "vertices": (1usize << n) - 2 })))
    });

    r
}

// ---------------------------------------------------------------------------
// Stage: cycle machinery.

fn cycle_checks(config: &RunConfig) -> StageRunner {
    let n = config.n;
    let mut r = StageRunner::new();
    let ell_override = match config.ell {
        EllChoice::Auto => None,
        EllChoice::Fixed(v) => Some(BigUint::from(v)),
    };
    let sys = match CycleSystem::new(n, config.k, config.k0, config.floor, ell_override) {
        Ok(s) => s,
        Err(e) => {
            r.run("cycle.system", "cycle system construction", || Err(e.clone()));
            return r;
        }
    };

    r.run("cycle.walls", "wall elements pass exactly through the deep vertex", || {
        let checks = sys.check_walls()?;
        let ok = checks.iter().all(|c| c.pass);
        let detail: Vec<Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "j": c.j,
                    "on_wall": c.on_wall,
                    "fixes_center": c.fixes_center,
                    "moves_previous": c.moves_previous,
                    "power_same_wall": c.power_same_wall,
                })
            })
            .collect();
        Ok((ok, json!({ "center": sys.center().to_string(), "walls": detail })))
    });

    r.run("cycle.ell", "common rescaling exponent assembled from the word set", || {
        let ell = sys.ell();
        let digits = ell.to_string();
        let shown = if digits.len() <= 40 {
            digits.clone()
        } else {
            format!("{}... ({} digits)", &digits[..20], digits.len())
        };
        Ok((
            true,
            json!({
                "ell": shown,
                "factors": sys.ell_factors().len(),
                "words": sys.script_d().len(),
            }),
        ))
    });

    r.run("cycle.power-identity", "polynomial part of the power is the power", || {
        Ok((sys.check_power_identity()?, json!({ "pairs": sys.ell_factors().len() })))
    });

    r.run("cycle.membership", "every sphere piece certifies into the orbit", || {
        let certs = sys.membership_certificates()?;
        let ok = certs.iter().all(|c| c.ok);
        let failing: Vec<String> = certs
            .iter()
            .filter(|c| !c.ok)
            .take(3)
            .map(|c| format!("subset {:?} word {}", c.subset, c.word))
            .collect();
        Ok((
            ok,
            json!({
                "certificates": certs.len(),
                "subsets": 1 << (n - 1),
                "words": sys.script_d().len(),
                "vertices": sys.d_sample().len(),
                "failing": failing,
            }),
        ))
    });

    r.run("cycle.translation-rank", "translation lattice has full rank", || {
        let rank = sys.translation_lattice_rank();
        Ok((rank == n - 2, json!({ "rank": rank, "expected": n - 2 })))
    });

    r.run("cycle.sphere", "ball and boundary sphere have the right homology", || {
        let sc = build_sphere(n, sys.ell().clone(), config.k)?;
        let ball = sc.ball_chain()?;
        let sphere = sc.sphere_chain()?;
        let dd = ball.boundary_squares_to_zero()? && sphere.boundary_squares_to_zero()?;
        let top = n - 2;
        let sphere_top = sc.sphere_homology(top)?;
        let sphere_ok = sphere_top == HomologyGroup::free(1);
        let mut lower_ok = true;
        for d in 0..top {
            lower_ok &= sc.sphere_homology(d)?.is_trivial();
        }
        let mut ball_ok = true;
        for d in 0..=(n - 1) {
            ball_ok &= sc.ball_homology(d)?.is_trivial();
        }
        let euler_ball = sc.ball().euler_characteristic();
        let euler_sphere = sc.sphere().euler_characteristic();
        let expected_sphere_euler = if (n - 2) % 2 == 0 { 2 } else { 0 };
        let interior = sc.center_is_interior();
        let chain_boundary = sc.ball_boundary_is_sphere()?;
        let orthants = sc.orthants().len() == (1 << (n - 1));
        let ok = dd
            && sphere_ok
            && lower_ok
            && ball_ok
            && euler_ball == 1
            && euler_sphere == expected_sphere_euler
            && interior
            && chain_boundary
            && orthants;
        Ok((
            ok,
            json!({
                "boundary_squares_to_zero": dd,
                "sphere_top_homology": sphere_top.to_string(),
                "ball_acyclic": ball_ok,
                "euler_ball": euler_ball,
                "euler_sphere": euler_sphere,
                "center_interior": interior,
                "chain_boundary_is_sphere": chain_boundary,
                "orthants": sc.orthants().len(),
            }),
        ))
    });

    r
}

// ---------------------------------------------------------------------------
// Commands.

fn run_with_retry(floor: i64, f: impl Fn(i64) -> StageRunner) -> Vec<CheckRecord> {
    let first = f(floor);
    if !first.has_inconclusive() {
        return first.checks;
    }
    // one retry at doubled depth before reporting inconclusive
    let deeper = deepen(floor, 2);
    let second = f(deeper);
    if second.has_inconclusive() { first.checks } else { second.checks }
}

pub fn cmd_verify_root(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let checks = run_with_retry(config.root_floor(), |fl| root_checks(config, fl));
    Ok(VerificationReport::assemble(config.clone(), checks))
}

pub fn cmd_verify_torus(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let checks = run_with_retry(config.root_floor(), |fl| torus_checks(config, fl));
    Ok(VerificationReport::assemble(config.clone(), checks))
}

pub fn cmd_verify_building(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    Ok(VerificationReport::assemble(config.clone(), building_checks(config).checks))
}

pub fn cmd_verify_cycle(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let first = cycle_checks(config);
    let checks = if first.has_inconclusive() && config.floor.is_none() {
        // retry the whole stage at doubled default depth
        let mut deeper = config.clone();
        let shift = (config.k0.unwrap_or(config.k + 2) + config.k) * config.n as i64;
        let base = if config.n >= 3 { default_floor(config.n - 1) - shift } else { -(40 + shift) };
        deeper.floor = Some(deepen(base, 2));
        let second = cycle_checks(&deeper);
        if second.has_inconclusive() { first.checks } else { second.checks }
    } else {
        first.checks
    };
    Ok(VerificationReport::assemble(config.clone(), checks))
}

/// Runs the four stages in order, stopping after a stage that hard-fails.
pub fn cmd_all(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut checks = Vec::new();
    let stages: [(&str, fn(&RunConfig) -> Result<VerificationReport>); 4] = [
        ("root", cmd_verify_root),
        ("torus", cmd_verify_torus),
        ("building", cmd_verify_building),
        ("cycle", cmd_verify_cycle),
    ];
    for (_, stage) in stages {
        let report = stage(config)?;
        let failed = report.summary.fail > 0;
        checks.extend(report.checks);
        if failed {
            break;
        }
    }
    Ok(VerificationReport::assemble(config.clone(), checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> RunConfig {
        RunConfig {
            n: 2,
            word_bound: 2,
            k: 2,
            matrix_samples: 10,
            vertex_samples: 4,
            ..RunConfig::default()
        }
    }

    #[test]
    fn root_stage_passes_n2() {
        let r = cmd_verify_root(&small_config()).unwrap();
        assert_eq!(r.summary.status, CheckStatus::Pass, "{}", r.render_text());
    }

    #[test]
    fn torus_stage_passes_n2() {
        let r = cmd_verify_torus(&small_config()).unwrap();
        assert_eq!(r.summary.status, CheckStatus::Pass, "{}", r.render_text());
    }

    #[test]
    fn building_stage_passes_n2() {
        let r = cmd_verify_building(&small_config()).unwrap();
        assert_eq!(r.summary.status, CheckStatus::Pass, "{}", r.render_text());
    }

    #[test]
    fn cycle_stage_passes_n2() {
        let r = cmd_verify_cycle(&small_config()).unwrap();
        assert_eq!(r.summary.status, CheckStatus::Pass, "{}", r.render_text());
    }

    #[test]
    fn all_passes_and_is_deterministic_n2() {
        let c = RunConfig { format: OutputFormat::Json, ..small_config() };
        let a = cmd_all(&c).unwrap().to_json_string();
        let b = cmd_all(&c).unwrap().to_json_string();
        assert_eq!(a, b);
        assert!(a.contains("\"status\": \"pass\""));
    }

    #[test]
    fn invalid_config_rejected() {
        let mut c = small_config();
        c.n = 1;
        assert!(cmd_verify_root(&c).is_err());
        let mut c2 = small_config();
        c2.floor = Some(0);
        assert!(cmd_verify_root(&c2).is_err());
    }

    #[test]
    fn ell_override_fails_cycle_n3() {
        let c = RunConfig {
            n: 3,
            k: 2,
            ell: EllChoice::Fixed(1),
            ..RunConfig::default()
        };
        let r = cmd_verify_cycle(&c).unwrap();
        assert_eq!(r.summary.status, CheckStatus::Fail);
        assert_eq!(r.exit_code(), 1);
    }
}
