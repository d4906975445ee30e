//! Verification suites. Each check records an identifier, the identity it exercises, a status
//! and, on failure, a witness with exact values.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::arith::{to_fraction_string as frac, Rational};
use crate::darboux::{build_darboux, IndexSet};
use crate::diophantine::{
    apply_difference, closed_form_q, lambda_poly, leading_coeff, q_racah_lambda_product, to_eta_poly, zero_norm_data,
};
use crate::error::Error;
use crate::family::{CoordClass, FamilyId, FamilyParams};
use crate::shape;
use crate::spectral::{
    build_operator, check_simple_spectrum, completeness_determinant, ground_state_squared, lattice_values,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Status {
    Pass,
    Fail,
    /// A seed Casoratian vanished where the construction needs it nonzero.
    Degenerate,
    /// Informational: computed and recorded, not asserted.
    Report,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub x: Option<i64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub n: Option<u64>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub lhs: Option<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub rhs: Option<String>,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub detail: Option<String>,
}

impl Witness {
    pub fn values(x: Option<i64>, n: Option<u64>, lhs: &Rational, rhs: &Rational) -> Self {
        Self { x, n, lhs: Some(frac(lhs)), rhs: Some(frac(rhs)), detail: None }
    }

    pub fn note(detail: impl Into<String>) -> Self {
        Self { detail: Some(detail.into()), ..Self::default() }
    }

    fn with_note(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub witness: Option<Witness>,
}

impl Check {
    fn pass(id: String, anchor: &str) -> Self {
        Self { id, anchor: anchor.to_string(), status: Status::Pass, witness: None }
    }

    fn with(id: String, anchor: &str, status: Status, witness: Witness) -> Self {
        Self { id, anchor: anchor.to_string(), status, witness: Some(witness) }
    }

    fn fail(id: String, anchor: &str, witness: Witness) -> Self {
        Self::with(id, anchor, Status::Fail, witness)
    }

    fn error(id: String, anchor: &str, e: &Error) -> Self {
        Self::fail(id, anchor, Witness::note(e.to_string()))
    }

    /// Pass if no defect was found, otherwise fail with the defect.
    fn from_defect(id: String, anchor: &str, defect: Result<Option<Witness>, Error>) -> Self {
        match defect {
            Ok(None) => Self::pass(id, anchor),
            Ok(Some(w)) => Self::fail(id, anchor, w),
            Err(e) => Self::error(id, anchor, &e),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Orthogonality,
    Diophantine,
    Darboux,
    ShapeInvariance,
    Operators,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Orthogonality, Suite::Diophantine, Suite::Darboux, Suite::ShapeInvariance, Suite::Operators];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Orthogonality => "orthogonality",
            Suite::Diophantine => "diophantine",
            Suite::Darboux => "darboux",
            Suite::ShapeInvariance => "shape-invariance",
            Suite::Operators => "operators",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Largest zero-norm index `m` in the factorisation suite.
    pub m_max: u64,
    /// Largest seed count `M` in the Darboux and shape-invariance suites.
    pub big_m_max: u32,
    /// Perturbs `B(0)` in the matrix used by the eigen-equation check. Test fixture only.
    pub tamper: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { m_max: 3, big_m_max: 3, tamper: false }
    }
}

pub fn run_suite(params: &FamilyParams, suite: Suite, opts: &SuiteOptions) -> SuiteReport {
    let checks = match suite {
        Suite::Orthogonality => orthogonality(params, opts),
        Suite::Diophantine => diophantine(params, opts),
        Suite::Darboux => darboux(params, opts),
        Suite::ShapeInvariance => shape_invariance(params, opts),
        Suite::Operators => operators(params),
    };
    let mut checks = checks;
    checks.sort_by(|a, b| a.id.cmp(&b.id));
    SuiteReport { name: suite.name().to_string(), checks }
}

fn first_mismatch<I>(items: I) -> Result<Option<Witness>, Error>
where
    I: IntoIterator<Item = Result<(Option<i64>, Option<u64>, Rational, Rational), Error>>,
{
    for item in items {
        let (x, n, lhs, rhs) = item?;
        if lhs != rhs {
            return Ok(Some(Witness::values(x, n, &lhs, &rhs)));
        }
    }
    Ok(None)
}

fn orthogonality(params: &FamilyParams, opts: &SuiteOptions) -> Vec<Check> {
    let nn = params.size() as i64;
    let top = params.size() as u64;
    let mut out = Vec::new();
    let violations = params.validate();
    out.push(if violations.is_empty() {
        Check::pass("parameters".into(), "parameter-range")
    } else {
        let text: Vec<String> = violations.into_iter().map(|v| v.predicate).collect();
        Check::with("parameters".into(), "parameter-range", Status::Report, Witness::note(text.join(", ")))
    });

    for n in 0..=top {
        let id = format!("difference-equation/n={n}");
        let defect = to_eta_poly(params, n).and_then(|p| {
            let f = |y: i64| Ok(p.eval(&params.eta(y)));
            first_mismatch(
                (-2..=nn + 2)
                    .filter(|&x| params.b_coeff(x).is_ok() && params.d_coeff(x).is_ok())
                    .map(|x| Ok((Some(x), Some(n), apply_difference(params, f, x)?, params.energy(n) * f(x)?))),
            )
        });
        out.push(Check::from_defect(id, "difference-equation", defect));
    }

    let operator = build_operator(params).map(|mut op| {
        if opts.tamper && !op.upper.is_empty() {
            op.upper[0] += Rational::one();
        }
        op
    });
    for n in 0..=top {
        let id = format!("matrix-eigen-equation/n={n}");
        let defect = operator.clone().and_then(|op| {
            let v = lattice_values(params, n)?;
            let hv = op.apply(&v)?;
            let e = params.energy(n);
            first_mismatch(
                hv.into_iter().zip(v).enumerate().map(|(x, (l, r))| Ok((Some(x as i64), Some(n), l, &e * r))),
            )
        });
        out.push(Check::from_defect(id, "matrix-eigen-equation", defect));
    }

    let id = String::from("orthogonality");
    let defect = (|| -> Result<Option<Witness>, Error> {
        let w = ground_state_squared(params)?;
        let vals: Vec<Vec<Rational>> = (0..=top).map(|n| lattice_values(params, n)).collect::<Result<_, _>>()?;
        for m in 0..vals.len() {
            for n in 0..m {
                let s = w.iter().zip(&vals[m]).zip(&vals[n]).fold(Rational::zero(), |acc, ((w, a), b)| acc + w * a * b);
                if !s.is_zero() {
                    return Ok(Some(
                        Witness::values(None, Some(m as u64), &s, &Rational::zero())
                            .with_note(format!("pair ({m}, {n})")),
                    ));
                }
            }
        }
        Ok(None)
    })();
    out.push(Check::from_defect(id, "orthogonality", defect));

    if params.is_valid() {
        let defect = ground_state_squared(params).and_then(|w| {
            let mut norms = Vec::new();
            for n in 0..=top {
                let v = lattice_values(params, n)?;
                norms.push(w.iter().zip(&v).fold(Rational::zero(), |acc, (w, p)| acc + w * p * p));
            }
            Ok(norms.iter().enumerate().find(|(_, s)| !s.is_positive()).map(|(n, s)| {
                Witness::values(None, Some(n as u64), s, &Rational::zero()).with_note("norm must be positive")
            }))
        });
        out.push(Check::from_defect("norm-positivity".into(), "orthogonality", defect));
    }

    out.push(match check_simple_spectrum(params) {
        Ok(()) => Check::pass("simple-spectrum".into(), "simple-spectrum"),
        Err(e) => Check::error("simple-spectrum".into(), "simple-spectrum", &e),
    });
    out.push(match completeness_determinant(params) {
        Ok(d) if !d.is_zero() => Check::pass("completeness".into(), "completeness"),
        Ok(d) => Check::fail(
            "completeness".into(),
            "completeness",
            Witness::values(None, None, &d, &Rational::one()).with_note("determinant of (P_n(x)) vanishes"),
        ),
        Err(e) => Check::error("completeness".into(), "completeness", &e),
    });

    if matches!(params.family(), FamilyId::K | FamilyId::H) {
        for n in 0..=top {
            let id = format!("mirror-symmetry/n={n}");
            out.push(match params.mirror_check(n) {
                Ok(true) => Check::pass(id, "mirror-symmetry"),
                Ok(false) => Check::fail(id, "mirror-symmetry", Witness { n: Some(n), ..Witness::default() }),
                Err(e) => Check::error(id, "mirror-symmetry", &e),
            });
        }
    }
    out
}

fn diophantine(params: &FamilyParams, opts: &SuiteOptions) -> Vec<Check> {
    let nn = params.size() as i64;
    let mut out = Vec::new();
    for n in 0..=params.size() as u64 {
        let id = format!("leading-coefficient/n={n}");
        let defect = to_eta_poly(params, n)
            .map(|p| (p.leading(), leading_coeff(params, n)))
            .map(|(l, r)| (l != r).then(|| Witness::values(None, Some(n), &l, &r)));
        out.push(Check::from_defect(id, "leading-coefficient", defect));
    }
    match zero_norm_data(params, opts.m_max) {
        Err(e) => out.push(Check::error("factorisation".into(), "zero-norm-factorisation", &e)),
        Ok(data) => {
            for m in 0..=opts.m_max {
                let mi = m as i64;
                let monic = &data.monic[m as usize];
                let id = format!("zero-norm/m={m}");
                let defect = first_mismatch((0..=nn).map(|x| {
                    Ok((Some(x), Some(params.size() as u64 + 1 + m), monic.eval(&params.eta(x)), Rational::zero()))
                }));
                out.push(Check::from_defect(id, "zero-norm", defect));

                let q = &data.quotients[m as usize];
                let (_, rem) = monic.div_rem(&data.lambda);
                let id = format!("factorisation/m={m}");
                out.push(if rem.is_zero() && q.is_monic() && q.degree() == Some(m as usize) {
                    Check::pass(id, "zero-norm-factorisation")
                } else {
                    Check::fail(
                        id,
                        "zero-norm-factorisation",
                        Witness { n: Some(m), ..Witness::note("remainder or quotient shape") },
                    )
                });

                let id = format!("quotient-closed-form/m={m}");
                let defect = first_mismatch(
                    (0..=nn + 2 * mi + 2)
                        .map(|x| Ok((Some(x), Some(m), q.eval(&params.eta(x)), closed_form_q(params, m, x)))),
                );
                out.push(Check::from_defect(id, "quotient-closed-form", defect));
            }
        }
    }
    if params.family() == FamilyId::QR {
        let defect = lambda_poly(params).and_then(|lam| {
            first_mismatch(
                (-2..=nn + 3)
                    .map(|x| Ok((Some(x), None, lam.eval(&params.eta(x)), q_racah_lambda_product(params, x)?))),
            )
        });
        out.push(Check::from_defect("lambda-product".into(), "lambda-product", defect));
    }
    out
}

fn index_sets(big_m_max: u32) -> Vec<(IndexSet, bool)> {
    let mut sets: Vec<(IndexSet, bool)> =
        (1..=big_m_max.max(1)).map(|m| (IndexSet::contiguous(m).unwrap(), true)).collect();
    sets.push((IndexSet::new(vec![1]).unwrap(), false));
    sets.push((IndexSet::new(vec![0, 2]).unwrap(), false));
    sets
}

fn darboux(params: &FamilyParams, opts: &SuiteOptions) -> Vec<Check> {
    let mut out = Vec::new();
    let norms = match crate::spectral::norms(params) {
        Ok(t) => t,
        Err(e) => {
            out.push(Check::error("norm-relation".into(), "deformed-norm", &e));
            return out;
        }
    };
    for (dset, contiguous) in index_sets(opts.big_m_max) {
        let tag = format!("D={dset}");
        let sys = match build_darboux(params, dset) {
            Ok(sys) => sys,
            Err(Error::DegenerateCasoratian(x)) => {
                let w = Witness { x: Some(x), ..Witness::note("seed Casoratian vanishes") };
                let status = if contiguous { Status::Fail } else { Status::Degenerate };
                out.push(Check::with(format!("norm-relation/{tag}"), "deformed-norm", status, w));
                continue;
            }
            Err(e) => {
                out.push(Check::error(format!("norm-relation/{tag}"), "deformed-norm", &e));
                continue;
            }
        };
        let defect = sys.verify_norm_relation(&norms).map(|fails| {
            fails.first().map(|(n, l, lhs, rhs)| {
                Witness::values(None, Some(*n as u64), lhs, rhs)
                    .with_note(format!("pair ({n}, {l}), summed over x = -M..N"))
            })
        });
        out.push(Check::from_defect(format!("norm-relation/{tag}"), "deformed-norm", defect));

        let poles: Vec<String> = sys
            .bbar
            .iter()
            .filter(|(_, v)| v.is_none())
            .map(|(x, _)| format!("B-bar({x})"))
            .chain(sys.dbar.iter().filter(|(_, v)| v.is_none()).map(|(x, _)| format!("D-bar({x})")))
            .collect();
        if !poles.is_empty() {
            out.push(Check::with(
                format!("window-poles/{tag}"),
                "deformed-coefficients",
                Status::Report,
                Witness::note(poles.join(", ")),
            ));
        }
        let bad = sys.positivity_violations();
        let note = if bad.is_empty() {
            String::from("B-bar(x) D-bar(x+1) > 0 on 0..N-1")
        } else {
            format!("sign change or pole at x in {bad:?}")
        };
        out.push(Check::with(
            format!("deformed-positivity/{tag}"),
            "deformed-coefficients",
            Status::Report,
            Witness::note(note),
        ));
    }
    out
}

fn shape_invariance(params: &FamilyParams, opts: &SuiteOptions) -> Vec<Check> {
    let nn = params.size() as i64;
    let class = params.class();
    let label = match class {
        CoordClass::I => "i",
        CoordClass::II => "ii",
        CoordClass::III => "iii",
        CoordClass::IV => "iv",
        CoordClass::V => "v",
    };
    let anchor = |name: &str| format!("{name}/class-{label}");
    let mut out = Vec::new();
    let zero_norm = zero_norm_data(params, opts.big_m_max.saturating_sub(1) as u64);
    for m in 1..=opts.big_m_max {
        let mi = m as i64;

        let id = format!("shifted-coefficients/M={m}");
        let a = anchor("shifted-coefficients");
        let defect = build_darboux(params, IndexSet::contiguous(m).unwrap()).map(|sys| {
            let shifted = params.xshifted(m);
            for (x, v) in &sys.bbar {
                if let (Some(v), Ok(want)) = (v, shifted.b_coeff(x + mi)) {
                    if *v != want {
                        return Some(Witness::values(Some(*x), None, v, &want).with_note("B-bar vs shifted B"));
                    }
                    if let Ok(c) = shape::closed_bbar(params, m, *x) {
                        if *v != c {
                            return Some(Witness::values(Some(*x), None, v, &c).with_note("B-bar vs closed form"));
                        }
                    }
                }
            }
            for (x, v) in &sys.dbar {
                if let (Some(v), Ok(want)) = (v, shifted.d_coeff(x + mi)) {
                    if *v != want {
                        return Some(Witness::values(Some(*x), None, v, &want).with_note("D-bar vs shifted D"));
                    }
                    if let Ok(c) = shape::closed_dbar(params, m, *x) {
                        if *v != c {
                            return Some(Witness::values(Some(*x), None, v, &c).with_note("D-bar vs closed form"));
                        }
                    }
                }
            }
            None
        });
        out.push(Check::from_defect(id, &a, defect));

        let id = format!("closed-casoratians/M={m}");
        let a = anchor("closed-casoratians");
        let defect = zero_norm.clone().and_then(|zn| {
            let mut kinds = vec![
                shape::CasoratianKind::Vandermonde,
                shape::CasoratianKind::LambdaLeft,
                shape::CasoratianKind::LambdaRight,
            ];
            kinds.extend((0..=params.size() as u64).map(shape::CasoratianKind::Eigen));
            for x in -mi..=nn + 2 {
                for &kind in &kinds {
                    if let Ok(c) = shape::closed_casoratian(params, m, kind, x) {
                        let d = shape::casoratian_by_determinant(params, &zn, m, kind, x)?;
                        if c != d {
                            return Ok(Some(Witness::values(Some(x), None, &c, &d).with_note(format!("{kind:?}"))));
                        }
                    }
                }
            }
            Ok(None)
        });
        out.push(Check::from_defect(id, &a, defect));

        let id = format!("x-shift-sum/M={m}");
        let a = anchor("x-shift-sum");
        let defect = first_mismatch((-mi..=nn + 1).flat_map(|x| {
            (0..=params.size() as u64).map(move |n| {
                let (l, r) = shape::xshift_sum_sides(params, m, n, x)?;
                Ok((Some(x), Some(n), l, r))
            })
        }));
        out.push(Check::from_defect(id, &a, defect));

        let id = format!("ordered-product/M={m}");
        let a = anchor("ordered-product");
        let defect = shape::verify_ordered_product(params, m).map(|bad| {
            bad.first().map(|&x| {
                let l = shape::ordered_product_expand(params, m, x).unwrap_or_default();
                let r = shape::ordered_product_closed(params, m, x).unwrap_or_default();
                let j = l.iter().zip(&r).position(|(a, b)| a != b).unwrap_or(0);
                Witness::values(Some(x), None, &l[j], &r[j]).with_note(format!("coefficient of shift {j}"))
            })
        });
        out.push(Check::from_defect(id, &a, defect));

        let report = shape::positivity_transport(params, m);
        let id = format!("positivity-transport/M={m}");
        let a = anchor("positivity-transport");
        let text: Vec<String> = report.violations.iter().map(|v| v.predicate.clone()).collect();
        // The qqK range p > q^-N moves with N, so transport is not guaranteed there.
        let asserted = report.guaranteed && params.family() != FamilyId::QqK && params.is_valid();
        out.push(if text.is_empty() {
            if asserted {
                Check::pass(id, &a)
            } else {
                Check::with(id, &a, Status::Report, Witness::note("shifted parameters in range"))
            }
        } else if asserted {
            Check::fail(id, &a, Witness::note(text.join(", ")))
        } else {
            Check::with(
                id,
                &a,
                Status::Report,
                Witness::note(format!("shifted parameters leave the range: {}", text.join(", "))),
            )
        });
    }

    let q = params.q().cloned().unwrap_or_else(|| crate::arith::ratio(1, 2));
    let defects = shape::pascal_defects(12, &q);
    out.push(match defects.first() {
        None => Check::pass("pascal-identities".into(), "pascal-identities"),
        Some((name, m, j)) => Check::fail(
            "pascal-identities".into(),
            "pascal-identities",
            Witness { x: Some(*j), n: Some(*m as u64), ..Witness::note(*name) },
        ),
    });
    out
}

fn operators(params: &FamilyParams) -> Vec<Check> {
    let nn = params.size() as i64;
    let mut out = Vec::new();
    for n in 0..=params.size() as u64 {
        let defect = first_mismatch((0..=nn).map(|x| {
            let d = shape::forward_action_defect(params, n, x)?;
            Ok((Some(x), Some(n), d, Rational::zero()))
        }))
        .map(|w| w.map(|w| w.with_note("F~ P_n(x;N) - P_n(x+1;N+1,shifted)")));
        out.push(Check::from_defect(format!("forward-x-shift/n={n}"), "forward-x-shift", defect));

        let defect = first_mismatch((0..=nn).map(|x| {
            let d = shape::backward_action_defect(params, n, x)?;
            Ok((Some(x), Some(n), d, Rational::zero()))
        }))
        .map(|w| w.map(|w| w.with_note("B~ P_n(x+1;N+1,shifted) - (E(N+1)-E(n)) P_n(x;N)")));
        out.push(Check::from_defect(format!("backward-x-shift/n={n}"), "backward-x-shift", defect));
    }

    let defect = shape::xshift_factorisation_defect(params, params.size() + 2).map(|d| {
        d.map(|(k, x, l, r)| Witness::values(Some(x), Some(k as u64), &l, &r).with_note(format!("f = eta^{k}")))
    });
    out.push(Check::from_defect("x-shift-factorisation".into(), "x-shift-factorisation", defect));

    if params.family() == FamilyId::R {
        let defect = shape::racah_bf_defect(params)
            .map(|d| d.map(|(what, n, x, l, r)| Witness::values(Some(x), Some(n), &l, &r).with_note(what)));
        out.push(Check::from_defect("degree-shift-factorisation".into(), "degree-shift-factorisation", defect));
    }
    out
}
