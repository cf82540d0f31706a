//! The work behind each CLI subcommand, independent of argument parsing.

use std::collections::HashMap;
use std::fmt;

use typicality_core::closedform::{ClosedFormQuantity, ClosedFormValue};
use typicality_core::concentration::{bound, chebyshev_bound, BoundKind};
use typicality_core::montecarlo::{EstimateReport, QuantityId, QuantitySpec};

use crate::error::{LabError, Result};
use crate::memo::closed_form;
use crate::output::{ClosedFormRecord, EstimateRecord, FigureRow, ReportRow, TailRecord};
use crate::runner::Runner;

/// Absolute slack for reference comparisons, so zero-variance quantities
/// (purity at `α = 1`) are not failed on rounding noise.
pub const EXACT_FLOOR: f64 = 1e-12;

pub const MAX_FIGURE_KAPPA: u32 = 10;
pub const MAX_FIGURE_MC_KAPPA: u32 = 7;

pub fn spec(id: QuantityId, n: u64, alpha: Option<f64>) -> Result<QuantitySpec> {
    let n = usize::try_from(n).map_err(LabError::usage)?;
    QuantitySpec::new(id, n, alpha).map_err(LabError::usage)
}

/// The exact closed form for the quantity's mean, if one exists.
pub fn exact_mean(spec: &QuantitySpec) -> Result<Option<ClosedFormValue>> {
    let q = spec.id().mean_closed_form();
    if q.is_asymptotic_reference() {
        return Ok(None);
    }
    Ok(Some(closed_form(q, spec.n() as u64, spec.alpha())?))
}

fn record(r: &EstimateReport) -> EstimateRecord {
    EstimateRecord {
        quantity: r.quantity.as_str().to_owned(),
        n: r.n as u64,
        alpha: r.alpha,
        samples: r.samples,
        seed: r.master_seed,
        mean: r.mean,
        variance: r.variance,
        stderr: r.stderr,
        statistic: None,
        variance_stderr: None,
        closed_form: None,
        z: None,
        rule: None,
        pass: None,
    }
}

fn z_score(diff: f64, se: f64) -> Option<f64> {
    (se > 0.0).then(|| diff / se)
}

pub fn estimate(runner: &Runner, spec: &QuantitySpec, samples: u64, seed: u64) -> Result<EstimateRecord> {
    let report = runner.estimate(spec, samples, seed)?;
    let mut rec = record(&report);
    if let Some(cf) = exact_mean(spec)? {
        rec.closed_form = Some(cf.value);
        rec.z = z_score(report.mean - cf.value, report.stderr);
    }
    Ok(rec)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    Mean,
    Variance,
}

impl Statistic {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Mean => "mean",
            Self::Variance => "variance",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rule {
    /// `|estimate − reference| ≤ k·stderr`.
    Sigma(f64),
    /// `|estimate − reference| ≤ r·|reference|`.
    Relative(f64),
    /// `|estimate − reference| ≤ a`.
    Absolute(f64),
}

impl Rule {
    pub fn passes(self, estimate: f64, stderr: f64, reference: f64) -> bool {
        let diff = (estimate - reference).abs();
        match self {
            Self::Sigma(k) => diff <= k * stderr + EXACT_FLOOR,
            Self::Relative(r) => diff <= r * reference.abs() + EXACT_FLOOR,
            Self::Absolute(a) => diff <= a,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sigma(k) => write!(f, "|z|<={k}"),
            Self::Relative(r) => write!(f, "rel<={r}"),
            Self::Absolute(a) => write!(f, "abs<={a}"),
        }
    }
}

/// One verifiable statement: a Monte Carlo statistic against a closed form.
#[derive(Clone, Copy, Debug)]
pub struct Claim {
    pub id: &'static str,
    pub quantity: QuantityId,
    pub statistic: Statistic,
    pub reference: ClosedFormQuantity,
    pub rule: Rule,
    pub samples: u64,
    pub dims: &'static [u64],
    pub alphas: &'static [f64],
    /// Whether a bare `verify` runs it.
    pub default_grid: bool,
}

const fn claim(
    id: &'static str,
    quantity: QuantityId,
    statistic: Statistic,
    reference: ClosedFormQuantity,
    rule: Rule,
    samples: u64,
    dims: &'static [u64],
) -> Claim {
    Claim {
        id,
        quantity,
        statistic,
        reference,
        rule,
        samples,
        dims,
        alphas: &[],
        default_grid: true,
    }
}

const PURITY_ALPHAS: &[f64] = &[0.5, 2.0, 3.0];

pub const CLAIMS: &[Claim] = {
    use ClosedFormQuantity as C;
    use QuantityId as Q;
    use Statistic::{Mean, Variance};
    const Z3: Rule = Rule::Sigma(3.0);
    &[
        claim("mean_l1", Q::L1, Mean, C::MeanL1, Z3, 100_000, &[2, 8, 64]),
        claim("mean_l1_scaled", Q::L1Scaled, Mean, C::MeanL1Scaled, Z3, 100_000, &[2, 4, 8, 64, 256]),
        claim("var_l1", Q::L1, Variance, C::VarianceL1, Z3, 100_000, &[2, 8, 32]),
        Claim {
            default_grid: false,
            ..claim("var_l1_published", Q::L1, Variance, C::VarianceL1Published, Rule::Relative(0.05), 100_000, &[2, 8, 32])
        },
        claim("mean_relent", Q::RelativeEntropy, Mean, C::MeanRelativeEntropy, Z3, 100_000, &[2, 16, 128]),
        claim("d2_tr_coh", Q::TraceSqCoherent, Mean, C::MeanTraceSqCoherent, Z3, 100_000, &[2, 8, 64]),
        claim("d2_hs_coh", Q::HsSqCoherent, Mean, C::MeanHsSqCoherent, Z3, 100_000, &[2, 8, 64]),
        claim("d2_b_coh", Q::BuresSqCoherent, Mean, C::MeanBuresSqCoherent, Z3, 100_000, &[2, 8, 64]),
        claim("bures_entangled", Q::BuresSqEntangled, Mean, C::MeanBuresSqEntangled, Z3, 100_000, &[2, 3, 4, 8]),
        Claim {
            default_grid: false,
            ..claim("negativity_scaled", Q::NegativityScaled, Mean, C::MeanScaledNegativity, Rule::Absolute(0.01), 20_000, &[32])
        },
        Claim {
            default_grid: false,
            ..claim("d2_tr_ent", Q::TraceSqEntangled, Mean, C::MeanTraceSqEntangled, Rule::Relative(0.05), 20_000, &[32])
        },
        Claim {
            default_grid: false,
            ..claim("d2_hs_ent", Q::HsSqEntangled, Mean, C::MeanHsSqEntangled, Rule::Relative(0.05), 20_000, &[32])
        },
        claim("diag_trace_dist", Q::DiagTraceDistance, Mean, C::MeanDiagTraceDistance, Z3, 100_000, &[2, 4, 64]),
        Claim {
            alphas: PURITY_ALPHAS,
            ..claim("alpha_purity", Q::AlphaPurity, Mean, C::MeanAlphaPurity, Z3, 100_000, &[2, 8, 64])
        },
        Claim {
            alphas: PURITY_ALPHAS,
            ..claim("var_alpha_purity", Q::AlphaPurity, Variance, C::VarianceAlphaPurity, Rule::Relative(0.05), 100_000, &[2, 8, 64])
        },
    ]
};

pub fn find_claim(id: &str) -> Result<&'static Claim> {
    CLAIMS.iter().find(|c| c.id == id).ok_or_else(|| {
        let known: Vec<_> = CLAIMS.iter().map(|c| c.id).collect();
        LabError::Usage(format!("unknown claim `{id}`; known: {}", known.join(", ")))
    })
}

/// Overrides applied to every selected claim.
#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    pub dims: Option<Vec<u64>>,
    pub alphas: Option<Vec<f64>>,
    pub samples: Option<u64>,
    pub seed: u64,
}

/// Runs each claim over its grid. Claims that share a quantity, `N`, `α` and
/// sample count reuse one Monte Carlo run.
pub fn verify(runner: &Runner, claims: &[&Claim], opts: &VerifyOptions) -> Result<Vec<EstimateRecord>> {
    let mut cache: HashMap<(QuantityId, u64, Option<u64>, u64), EstimateReport> = HashMap::new();
    let mut rows = Vec::new();
    for c in claims {
        let dims = opts.dims.as_deref().unwrap_or(c.dims);
        let alphas: Vec<Option<f64>> = if c.quantity == QuantityId::AlphaPurity {
            opts.alphas.as_deref().unwrap_or(c.alphas).iter().map(|&a| Some(a)).collect()
        } else {
            vec![None]
        };
        let samples = opts.samples.unwrap_or(c.samples);
        for &n in dims {
            for &alpha in &alphas {
                let s = spec(c.quantity, n, alpha)?;
                let reference = closed_form(c.reference, n, alpha).map_err(|e| match e {
                    LabError::Core(inner) => LabError::Usage(format!("claim {} at N={n}: {inner}", c.id)),
                    other => other,
                })?;
                let key = (c.quantity, n, alpha.map(f64::to_bits), samples);
                let report = match cache.get(&key) {
                    Some(r) => *r,
                    None => {
                        let r = runner.estimate(&s, samples, opts.seed)?;
                        cache.insert(key, r);
                        r
                    }
                };
                let (estimate, se) = match c.statistic {
                    Statistic::Mean => (report.mean, report.stderr),
                    Statistic::Variance => (report.variance, report.variance_stderr),
                };
                let mut rec = record(&report);
                rec.quantity = c.id.to_owned();
                rec.statistic = Some(c.statistic.as_str().to_owned());
                if c.statistic == Statistic::Variance {
                    rec.variance_stderr = Some(report.variance_stderr);
                }
                rec.closed_form = Some(reference.value);
                rec.z = z_score(estimate - reference.value, se);
                rec.rule = Some(c.rule.to_string());
                rec.pass = Some(c.rule.passes(estimate, se, reference.value));
                rows.push(rec);
            }
        }
    }
    Ok(rows)
}

pub fn closed_forms(quantities: &[ClosedFormQuantity], dims: &[u64], alpha: Option<f64>) -> Result<Vec<ClosedFormRecord>> {
    let mut rows = Vec::new();
    for &q in quantities {
        if q.needs_alpha() && alpha.is_none() {
            return Err(LabError::Usage(format!("{} needs --alpha", q.id())));
        }
        for &n in dims {
            let v = closed_form(q, n, alpha).map_err(|e| match e {
                LabError::Core(inner) => LabError::Usage(format!("{} at N={n}: {inner}", q.id())),
                other => other,
            })?;
            rows.push(ClosedFormRecord {
                quantity: q.id().to_owned(),
                n,
                alpha: if q.needs_alpha() { alpha } else { None },
                value: v.value,
                limit: v.limit_value,
                asymptotic_reference: q.is_asymptotic_reference(),
            });
        }
    }
    Ok(rows)
}

/// The concentration bound the paper states for a quantity, if any.
pub fn bound_kind(id: QuantityId) -> Option<BoundKind> {
    BoundKind::ALL.into_iter().find(|k| k.quantity_id() == id.as_str())
}

fn exact_variance(spec: &QuantitySpec) -> Result<Option<f64>> {
    let q = match spec.id() {
        QuantityId::L1 => ClosedFormQuantity::VarianceL1,
        QuantityId::L1Scaled => ClosedFormQuantity::VarianceL1Scaled,
        QuantityId::AlphaPurity => ClosedFormQuantity::VarianceAlphaPurity,
        _ => return Ok(None),
    };
    Ok(Some(closed_form(q, spec.n() as u64, spec.alpha())?.value))
}

/// Empirical tails around `center` (default: the closed-form mean), next to
/// the analytic and Chebyshev bounds.
pub fn tails(
    runner: &Runner,
    spec: &QuantitySpec,
    center: Option<f64>,
    epsilons: &[f64],
    samples: u64,
    seed: u64,
) -> Result<Vec<TailRecord>> {
    let center = match center {
        Some(c) => c,
        None => closed_form(spec.id().mean_closed_form(), spec.n() as u64, spec.alpha())?.value,
    };
    let estimates = runner.tails(spec, center, epsilons, samples, seed)?;
    let variance = exact_variance(spec)?;
    let n = spec.n() as u64;
    epsilons
        .iter()
        .zip(estimates)
        .map(|(&eps, t)| {
            let bound = match bound_kind(spec.id()) {
                Some(k) if n >= 2 => Some(bound(k, n, eps)?.analytic_bound),
                _ => None,
            };
            let chebyshev = variance.map(|v| chebyshev_bound(v, eps)).transpose()?;
            Ok(TailRecord {
                quantity: spec.id().as_str().to_owned(),
                n,
                alpha: spec.alpha(),
                samples: t.samples,
                seed,
                center,
                epsilon: eps,
                tail: t.fraction,
                tail_stderr: t.stderr,
                exceed: t.exceed,
                bound,
                chebyshev,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct FigureOptions {
    pub kappa_min: u32,
    pub kappa_max: u32,
    pub samples: u64,
    pub seed: u64,
    /// Monte Carlo runs only for `κ ≤ mc_max_kappa`.
    pub mc_max_kappa: u32,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            kappa_min: 1,
            kappa_max: 6,
            samples: 20_000,
            seed: 1,
            mc_max_kappa: 5,
        }
    }
}

/// Average squared Bures distance to the maximally entangled set against
/// `κ = log₂ N`.
pub fn figure(runner: &Runner, opts: &FigureOptions) -> Result<Vec<FigureRow>> {
    if opts.kappa_min > opts.kappa_max {
        return Err(LabError::Usage("empty kappa range".into()));
    }
    if opts.kappa_max > MAX_FIGURE_KAPPA {
        return Err(LabError::Usage(format!(
            "kappa {} unsupported; the closed form is tabulated up to kappa {MAX_FIGURE_KAPPA}",
            opts.kappa_max
        )));
    }
    if opts.mc_max_kappa > MAX_FIGURE_MC_KAPPA {
        return Err(LabError::Usage(format!(
            "Monte Carlo is limited to kappa <= {MAX_FIGURE_MC_KAPPA}"
        )));
    }
    (opts.kappa_min..=opts.kappa_max)
        .map(|kappa| {
            let n = 1u64 << kappa;
            let cf = closed_form(ClosedFormQuantity::MeanBuresSqEntangled, n, None)?.value;
            let mut row = FigureRow {
                kappa,
                n,
                closed_form: cf,
                mc_mean: None,
                mc_stderr: None,
                samples: None,
                seed: None,
            };
            if kappa <= opts.mc_max_kappa && opts.samples > 0 {
                let s = spec(QuantityId::BuresSqEntangled, n, None)?;
                let r = runner.estimate(&s, opts.samples, opts.seed)?;
                row.mc_mean = Some(r.mean);
                row.mc_stderr = Some(r.stderr);
                row.samples = Some(r.samples);
                row.seed = Some(opts.seed);
            }
            Ok(row)
        })
        .collect()
}

/// Every closed form and concentration bound at one `N`.
pub fn report(n: u64, alphas: &[f64], epsilons: &[f64]) -> Result<Vec<ReportRow>> {
    if n == 0 {
        return Err(LabError::Usage("N must be positive".into()));
    }
    let mut rows = Vec::new();
    for q in ClosedFormQuantity::ALL {
        let alpha_list: Vec<Option<f64>> = if q.needs_alpha() {
            alphas.iter().map(|&a| Some(a)).collect()
        } else {
            vec![None]
        };
        for alpha in alpha_list {
            // Quantities undefined at this N (scaled forms at N = 1) are skipped.
            let Ok(v) = closed_form(q, n, alpha) else {
                continue;
            };
            rows.push(ReportRow {
                kind: "closed_form".into(),
                id: q.id().into(),
                n,
                alpha,
                epsilon: None,
                value: v.value,
                limit: v.limit_value,
                reconstruction: None,
                exponent_ratio: None,
            });
        }
    }
    if n >= 2 {
        for k in BoundKind::ALL {
            for &eps in epsilons {
                let b = bound(k, n, eps).map_err(LabError::usage)?;
                rows.push(ReportRow {
                    kind: "bound".into(),
                    id: k.quantity_id().into(),
                    n,
                    alpha: None,
                    epsilon: Some(eps),
                    value: b.analytic_bound,
                    limit: None,
                    reconstruction: Some(b.reconstruction),
                    exponent_ratio: Some(b.exponent_ratio()),
                });
            }
        }
    }
    Ok(rows)
}
