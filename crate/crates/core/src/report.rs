//! The full claim suite, evaluated into a deterministic document.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::certificates::{translate_family_probe, Generator};
use crate::constructions::{
    corrected_odd_step_holds, norm_profile, range_compactness_probe, ConstructionFn, Domain, IntervalSequence, Rule,
};
use crate::error::{EapError, Result};
use crate::fourier::{coeff_decay_series, fourier_coeff, parseval_defect, Lambda};
use crate::means::{
    mean_series, oscillation_report, uniform_mean_probe, window_mean, Horizons, MeanQuery, Normalization, Quantity,
    Verdict,
};
use crate::piecewise::{pp_integral, sup_tolerance};
use crate::rational::{self, int, ratio, Rational};

/// Largest schedule length accepted by [`run_report`].
pub const MAX_K: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    pub rule: Rule,
    pub k: usize,
    pub q_list: Vec<usize>,
    pub lambda_grid: Vec<Lambda>,
    /// seed of the random-spacing translate generator
    pub seed: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            rule: Rule::Corrected,
            k: 12,
            q_list: vec![4, 16, 64],
            lambda_grid: [0, 1, -1, 2, -2].into_iter().map(Lambda::two_pi).collect(),
            seed: 7,
        }
    }
}

impl ReportOptions {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(EapError::config("k", "K must be ≥ 1"));
        }
        if self.k > MAX_K {
            return Err(EapError::config("k", format!("K must be ≤ {MAX_K}")));
        }
        if self.k < 4 {
            return Err(EapError::config("k", "the report needs K ≥ 4 (two even intervals)"));
        }
        if self.q_list.is_empty() || self.q_list.contains(&0) {
            return Err(EapError::config("q_list", "q values must be positive and non-empty"));
        }
        if self.lambda_grid.is_empty() {
            return Err(EapError::config("lambda_grid", "grid must be non-empty"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

/// A named number with its exact value and a 15-digit rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Value {
    pub name: String,
    pub exact: String,
    pub decimal: String,
}

impl Value {
    pub fn exact(name: impl Into<String>, r: &Rational) -> Self {
        Value { name: name.into(), exact: rational::to_pq(r), decimal: rational::to_decimal(r, 15) }
    }

    /// A float recorded through its exact binary value.
    pub fn float(name: impl Into<String>, x: f64) -> Self {
        let r = rational::from_f64(x).unwrap_or_else(Rational::zero);
        Value::exact(name, &r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub id: String,
    pub anchor: String,
    pub statement: String,
    pub status: Status,
    pub values: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportConfig {
    pub rule: Rule,
    #[serde(rename = "K")]
    pub k: usize,
    pub q_list: Vec<usize>,
    pub lambda_grid: Vec<String>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub config: ReportConfig,
    pub bounds: Vec<String>,
    pub claims: Vec<Claim>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    /// Pretty JSON with object keys in sorted order.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes") + "\n"
    }

    pub fn claim(&self, id: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.id == id)
    }
}

struct Builder {
    claims: Vec<Claim>,
}

impl Builder {
    fn push(&mut self, id: &str, anchor: &str, statement: &str, ok: bool, values: Vec<Value>) -> &mut Claim {
        self.claims.push(Claim {
            id: id.into(),
            anchor: anchor.into(),
            statement: statement.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            values,
            note: None,
        });
        self.claims.last_mut().unwrap()
    }
}

fn plus(f: &ConstructionFn, q: Quantity) -> MeanQuery {
    MeanQuery::new(f.clone(), q, Normalization::Plus)
}

pub fn run_report(opts: &ReportOptions) -> Result<Report> {
    opts.validate()?;
    let seq = Arc::new(IntervalSequence::build(opts.k, opts.rule)?);
    let f32 = ConstructionFn::cut_tent(seq.clone(), Domain::HalfLine);
    let f33 = ConstructionFn::two_sided(Domain::HalfLine);
    let beta = |n: usize| rational::from_big(seq.beta(n));
    let odd_k = (seq.len() - 1) / 2;
    let even_k = seq.len() / 2;
    let mut b = Builder { claims: Vec::new() };

    // schedule
    let v = seq.violations();
    b.push(
        "schedule-steps",
        "interval recursion: each right end is minimal for its step inequality",
        "every step inequality of the selected rule holds exactly",
        v.is_empty(),
        vec![Value::exact("K", &int(seq.len() as i64)), Value::exact("violations", &int(v.len() as i64))],
    );
    let short: Vec<usize> = (1..=odd_k)
        .filter(|&k| !corrected_odd_step_holds(seq.beta(2 * k), seq.beta(2 * k + 1)))
        .map(|k| 2 * k + 1)
        .collect();
    let c = b.push(
        "schedule-odd-ratio",
        "odd intervals outgrow the whole preceding prefix",
        "β_{2k} / β_{2k+1} < 1/5 for every odd step",
        short.is_empty(),
        short.iter().map(|&n| Value::exact(format!("beta_{}/beta_{n}", n - 1), &(beta(n - 1) / beta(n)))).collect(),
    );
    if !short.is_empty() {
        c.note = Some(format!("odd steps {short:?} are too short under rule {}", opts.rule));
    }

    // lower chain along odd right ends
    let odd = Horizons::BetaOdd { from: 1, to: odd_k };
    let phi_odd = mean_series(&plus(&f32, Quantity::Envelope), &odd)?;
    let bad: Vec<_> = phi_odd.rows.iter().filter(|r| r.mean > ratio(1, 5)).collect();
    let mut values: Vec<Value> = phi_odd.rows.iter().take(3).map(|r| Value::exact(format!("phi mean at T={}", r.horizon), &r.mean)).collect();
    values.extend(bad.iter().map(|r| Value::exact(format!("violating mean at T={}", r.horizon), &r.mean)));
    let worst = bad.first().map(|r| (r.horizon.clone(), r.mean.clone()));
    let c = b.push(
        "liminf-envelope",
        "lower chain: envelope means at odd right ends",
        "mean of φ over [0, β_{2k+1}] ≤ 1/5 for every odd right end",
        bad.is_empty(),
        values,
    );
    if let Some((t, m)) = worst {
        c.note = Some(format!(
            "discrepancy: under rule {} the mean at T = {t} is ({})/{t} = {} > 1/5; the odd step compares α_{{2k}} instead of β_{{2k}}, which leaves the odd interval too short",
            opts.rule,
            rational::to_pq(&(&m * &t)),
            rational::to_pq(&m)
        ));
    }
    let norm_odd = mean_series(&plus(&f32, Quantity::Norm), &odd)?;
    let sq_odd = mean_series(&plus(&f32, Quantity::NormSq), &odd)?;
    let dominated = norm_odd.rows.iter().zip(&phi_odd.rows).all(|(n, p)| n.mean <= p.mean)
        && sq_odd.rows.iter().zip(&norm_odd.rows).all(|(s, n)| s.mean <= n.mean);
    let max_norm_odd = norm_odd.means().max().unwrap().clone();
    b.push(
        "liminf-norms",
        "lower chain carried to |f| and |f|² by domination",
        "means of |f|² ≤ |f| ≤ φ at each odd right end, all ≤ 1/5",
        dominated && max_norm_odd <= ratio(1, 5),
        vec![Value::exact("largest |f| mean", &max_norm_odd)],
    );

    // upper chain along even right ends
    let even = Horizons::BetaEven { from: 1, to: even_k };
    let sq_even = mean_series(&plus(&f32, Quantity::NormSq), &even)?;
    let norm_even = mean_series(&plus(&f32, Quantity::Norm), &even)?;
    let min_sq = sq_even.means().min().unwrap().clone();
    let min_norm = norm_even.means().min().unwrap().clone();
    b.push(
        "limsup-norm-sq",
        "upper chain: plateau tents fill three quarters of [0, β_{2k}]",
        "mean of |f|² over [0, β_{2k}] ≥ 1/4 for every even right end",
        min_sq >= ratio(1, 4),
        vec![Value::exact("smallest |f|² mean", &min_sq), Value::exact("first |f|² mean", &sq_even.rows[0].mean)],
    );
    b.push(
        "limsup-norm",
        "upper chain for |f|",
        "mean of |f| over [0, β_{2k}] ≥ 3/8 for every even right end",
        min_norm >= ratio(3, 8),
        vec![Value::exact("smallest |f| mean", &min_norm)],
    );
    let osc_sq = oscillation_report(&sq_odd, &sq_even)?;
    let osc_n = oscillation_report(&norm_odd, &norm_even)?;
    b.push(
        "mean-oscillation-norm-sq",
        "|f|² has no mean",
        "gap between odd and even |f|² means ≥ 1/20; the mean does not exist",
        osc_sq.gap >= ratio(1, 20) && osc_sq.verdict == Verdict::MeanDoesNotExist,
        vec![
            Value::exact("liminf bound", &osc_sq.liminf_bound),
            Value::exact("limsup bound", &osc_sq.limsup_bound),
            Value::exact("gap", &osc_sq.gap),
        ],
    );
    b.push(
        "mean-oscillation-norm",
        "|f| has no mean",
        "gap between odd and even |f| means ≥ 7/40; the mean does not exist",
        osc_n.gap >= ratio(7, 40) && osc_n.verdict == Verdict::MeanDoesNotExist,
        vec![
            Value::exact("liminf bound", &osc_n.liminf_bound),
            Value::exact("limsup bound", &osc_n.limsup_bound),
            Value::exact("gap", &osc_n.gap),
        ],
    );
    let line = f32.with_domain(Domain::Line);
    let t2 = beta(2);
    let p = window_mean(&plus(&line, Quantity::NormSq), &t2)?;
    let s = window_mean(&MeanQuery::new(line, Quantity::NormSq, Normalization::Sym), &t2)?;
    b.push(
        "symmetric-normalization",
        "symmetric windows halve the means of a function vanishing on the negative axis",
        "sym mean of |f|² at β_2 equals half the plus mean",
        s == &p / int(2),
        vec![Value::exact("plus", &p), Value::exact("sym", &s)],
    );
    let t4 = beta(4);
    // candidate: the mean over the longest prefix ending at an odd right end
    let candidate = window_mean(&plus(&f32, Quantity::Norm), &beta(2 * odd_k + 1))?;
    let u = uniform_mean_probe(&plus(&f32, Quantity::Norm), &t4, &[Rational::zero(), t2.clone()], Some(candidate))?;
    b.push(
        "uniform-mean-fails",
        "window means of |f| are not uniform in the offset",
        "at T = β_4, offsets {0, β_2} deviate by more than 1/20 from the mean at the last odd right end",
        u.sup_deviation > ratio(1, 20),
        vec![
            Value::exact("candidate limit", &u.candidate_limit),
            Value::exact("sup deviation", &u.sup_deviation),
            Value::exact("spread across offsets", &u.spread),
        ],
    );

    // weak-null certificates
    let gens = [
        ("weak-null-cut-tent", &f32, Generator::default(), "integer translates of f"),
        ("weak-null-two-sided", &f33, Generator::default(), "integer translates of the two-sided train"),
        ("weak-null-random", &f32, Generator::Random { seed: opts.seed }, "randomly spaced translates of f"),
    ];
    for (id, f, g, what) in gens {
        let rows = translate_family_probe(f, &g, &opts.q_list)?;
        b.push(
            id,
            "equal-weight convex combinations of spaced translates",
            &format!("{what}: certified sup² ≤ 1/q with width ≤ 2^-40 for q in {:?}", opts.q_list),
            rows.iter().all(|r| r.holds),
            rows.iter()
                .flat_map(|r| {
                    [
                        Value::exact(format!("q={} sup² upper", r.q), &r.sup_sq_upper),
                        Value::exact(format!("q={} width", r.q), &(&r.sup_sq_upper - &r.sup_sq_lower)),
                    ]
                })
                .collect(),
        );
    }

    // two-sided train
    let base = norm_profile(&f33, 2, &int(0), &int(1))?;
    let periodic = [1i64, 7, 1000].iter().all(|&k| {
        norm_profile(&f33, 2, &int(k), &int(k + 1)).map(|p| p == base.translate(&int(k))).unwrap_or(false)
    });
    b.push(
        "two-sided-period",
        "the norm of the two-sided train has period 1",
        "‖f(t+k)‖² profile on [k, k+1] equals the shifted profile on [0, 1]",
        periodic,
        vec![Value::exact("one-period energy", &pp_integral(&base, &int(0), &int(1))?)],
    );
    let ints: Vec<Rational> = [1, 2, 5, 64, 1000].into_iter().map(int).collect();
    let hn = mean_series(&plus(&f33, Quantity::Norm), &Horizons::Explicit(ints.clone()))?;
    let hs = mean_series(&plus(&f33, Quantity::NormSq), &Horizons::Explicit(ints))?;
    b.push(
        "two-sided-means",
        "the norm and its square have means 1/2 and 1/3",
        "plus means at integer T equal 1/2 (|f|) and 1/3 (|f|²) exactly",
        hn.means().all(|m| m == &ratio(1, 2)) && hs.means().all(|m| m == &ratio(1, 3)),
        vec![Value::exact("|f| mean", &hn.rows[0].mean), Value::exact("|f|² mean", &hs.rows[0].mean)],
    );
    let idx: Vec<BigInt> = (0..20).map(|i| BigInt::from(i * 3 + 1)).collect();
    let d = range_compactness_probe(&f33, &idx)?;
    let all_two = d.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| if i == j { x.is_zero() } else { x == &int(2) }));
    b.push(
        "two-sided-range",
        "the range is not relatively compact",
        "‖f(m) − f(n)‖² = 2 for distinct sampled integers",
        all_two,
        vec![Value::exact("distance² of first pair", &d[0][1])],
    );
    let offsets = [int(0), ratio(1, 4), ratio(1, 2), ratio(3, 4)];
    let mut ok = true;
    let mut values = Vec::new();
    for t in [10, 100, 1000] {
        let u = uniform_mean_probe(&plus(&f33, Quantity::Norm), &int(t), &offsets, Some(ratio(1, 2)))?;
        ok &= u.sup_deviation <= ratio(1, 2 * t);
        values.push(Value::exact(format!("T={t} deviation"), &u.sup_deviation));
    }
    b.push(
        "two-sided-uniform-mean",
        "window means of the periodic norm converge uniformly",
        "|window mean − 1/2| ≤ 1/(2T) over offsets {0, 1/4, 1/2, 3/4}",
        ok,
        values,
    );
    let plateau_pair = cut_tent_plateau_indices(&seq);
    let range_ok = match &plateau_pair {
        Some(ix) => {
            let d = range_compactness_probe(&f32, ix)?;
            d[0][1] == int(2)
        }
        None => false,
    };
    b.push(
        "cut-tent-range",
        "the range of f is not relatively compact",
        "two plateau values of f are at squared distance 2",
        range_ok,
        vec![],
    );

    // Fourier side
    let horizons: Vec<Rational> = [4, 16, 64, 256, 1024].into_iter().map(int).collect();
    let mut ok = true;
    let mut values = Vec::new();
    for lambda in &opts.lambda_grid {
        for row in coeff_decay_series(&f33, lambda, &horizons)? {
            let t = rational::to_f64(&row.horizon);
            ok &= row.norm_upper <= 1.0 / (2.0 * t.sqrt()) * (1.0 + 2.0 / t.sqrt());
            if row.horizon == int(1024) {
                values.push(Value::float(format!("λ={lambda} T=1024 norm"), row.norm_upper));
            }
        }
    }
    b.push(
        "fourier-decay",
        "Fourier coefficients of the two-sided train vanish",
        "‖a(λ, T)‖ ≤ (1 + 2/√T) / (2√T) for T in {4, 16, 64, 256, 1024}",
        ok,
        values,
    );
    let a0 = fourier_coeff(&f33, &Lambda::zero(), &int(1024))?;
    let exact = crate::fourier::mean_coordinates(&f33, &int(1024))?;
    let tol = rational::to_f64(&sup_tolerance());
    let exact_ok = a0.exact.as_ref() == Some(&exact)
        && a0.coords.iter().all(|(n, c)| (c.re - rational::to_f64(&exact[n])).abs() <= tol && c.im == 0.0);
    b.push(
        "fourier-zero-exact",
        "the zero-frequency coefficient is an exact mean",
        "λ = 0 coordinates equal the exact rational integrals",
        exact_ok,
        vec![Value::exact("coordinate 1", &exact[&crate::hilbert::BasisIndex::from(1)])],
    );
    let r = parseval_defect(&f33, &opts.lambda_grid, &int(1024))?;
    b.push(
        "parseval-two-sided",
        "no Parseval equation for the two-sided train",
        "energy at T = 1024 is 1/3 exactly and the defect is ≥ 0.32",
        r.energy == ratio(1, 3) && r.defect >= 0.32,
        vec![Value::exact("energy", &r.energy), Value::float("coefficient energy", r.coeff_energy), Value::float("defect", r.defect)],
    );
    let r = parseval_defect(&f32, &[Lambda::zero()], &t4)?;
    b.push(
        "parseval-cut-tent",
        "no Parseval equation for f",
        "at T = β_4 the energy is ≥ 1/4, coefficient energy ≤ 0.01 and defect ≥ 0.24",
        r.energy >= ratio(1, 4) && r.coeff_energy <= 0.01 && r.defect >= 0.24,
        vec![Value::exact("energy", &r.energy), Value::float("coefficient energy", r.coeff_energy), Value::float("defect", r.defect)],
    );

    let passed = b.claims.iter().filter(|c| c.status == Status::Pass).count();
    let failed = b.claims.len() - passed;
    Ok(Report {
        config: ReportConfig {
            rule: opts.rule,
            k: opts.k,
            q_list: opts.q_list.clone(),
            lambda_grid: opts.lambda_grid.iter().map(|l| l.to_string()).collect(),
            seed: opts.seed,
        },
        bounds: seq.bounds().iter().map(|b| b.to_string()).collect(),
        claims: b.claims,
        passed,
        failed,
    })
}

/// Two integers inside the plateau of the second interval.
fn cut_tent_plateau_indices(seq: &IntervalSequence) -> Option<Vec<BigInt>> {
    let (_, alpha, beta) = seq.even_intervals().next()?;
    let m = rational::ceil(&(alpha + ratio(1, 10)));
    let n = &m + BigInt::one();
    (rational::from_big(&n) <= beta - ratio(1, 10)).then(|| vec![m, n])
}
