//! `spinc` command line: identity suites, bound tables and spectra as reports.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num::rational::Rational64;
use num::traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::bounds::{hmu_structure, SpincParams};
use crate::error::{Error, Result};
use crate::fock::{sigma_rank, SpinorModule};
use crate::forms::{
    eff_inequality_bruteforce, effective_basis, effective_pointwise_lemma_check_with,
    sl2_commutator_residual, FormClifford, FormElement,
};
use crate::linalg::{hermitian_eigenvalues, Matrix};
use crate::report::{fraction, Check, EigenRow, Report};
use crate::sampling;
use crate::scalar::{binomial, C64};
use crate::spectral::cp1::{self, DEFAULT_L_MAX, MIN_L_MAX};
use crate::spectral::torus::DEFAULT_CUTOFF;
use crate::spectral::{domeg_consistency, torus_leibniz_check, FormField, SpinorField, TorusModel};
use crate::twistor::{expected_ker_rank, TwistorContext};

/// Random samples per randomized identity in `identities`.
const SAMPLES: usize = 20;
pub const OUT_DIR_ENV: &str = "SPINC_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "txt",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spinc",
    version,
    about = "Spin^c Dirac operator identities, bounds and spectra"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout (or the $SPINC_OUT_DIR default).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fiberwise identities: Clifford, Kähler form, twistor, Lefschetz, effective forms.
    Identities {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        m: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Exact eigenvalue bounds for given (m, p, q).
    Bounds {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long)]
        r: Option<i64>,
    },
    /// Spectrum of D² on a model space.
    Spectrum {
        #[command(subcommand)]
        model: SpectrumModel,
    },
    /// Kählerian Killing spinors on a model space.
    Kk {
        #[command(subcommand)]
        model: KkModel,
    },
    /// Flat torus: Fourier spectrum and the Leibniz formula for D(ω·φ).
    Torus {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: i32,
    },
    /// Degree inequality for effective forms against Killing spinors.
    Eff {
        #[arg(long = "m-max", default_value_t = 60)]
        m_max: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SpectrumModel {
    Cp1 {
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, default_value_t = DEFAULT_L_MAX)]
        lmax: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum KkModel {
    Cp1 {
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        /// Killing constant: integer, `num/den` or decimal.
        #[arg(long, allow_hyphen_values = true, default_value = "-1", value_parser = parse_rational)]
        alpha: Rational64,
        #[arg(long, default_value_t = MIN_L_MAX)]
        lmax: u32,
    },
}

fn parse_rational(s: &str) -> std::result::Result<Rational64, String> {
    let s = s.trim();
    if let Ok(q) = s.parse::<Rational64>() {
        return Ok(q);
    }
    s.parse::<f64>()
        .ok()
        .and_then(Rational64::approximate_float)
        .ok_or_else(|| format!("not a rational number: {s}"))
}

fn max_f(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn c64(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn cmd_identities(m: usize, seed: u64, tol: f64) -> Result<Report> {
    let module = SpinorModule::new(m)?;
    if m > crate::forms::MAX_FORM_M {
        return Err(Error::DimensionOutOfRange {
            m,
            min: 1,
            max: crate::forms::MAX_FORM_M,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new("identities")
        .param("m", m)
        .param("seed", seed)
        .param("tol", tol);
    let dim = module.dim();
    let id = Matrix::<C64>::identity(dim);
    let proj: Vec<Matrix<C64>> = (0..=m)
        .map(|r| module.sigma_projector::<C64>(r as i64).map(|p| p.matrix))
        .collect::<Result<_>>()?;

    let mut worst: f64 = 0.0;
    for _ in 0..SAMPLES {
        let x = sampling::real_vector(&mut rng, m);
        let y = sampling::real_vector(&mut rng, m);
        let cx = module.clifford(&x)?.matrix;
        let cy = module.clifford(&y)?.matrix;
        let g = x.bilinear(&y);
        worst = worst.max((&cx.anticommutator(&cy) + &id.scale(&(g * c64(2.0)))).max_abs());
    }
    rep.push(Check::new(
        "clifford_relation",
        "clifford.anticommutator",
        worst,
        tol,
    ));

    let omega = module.omega_action::<C64>().matrix;
    let mut expected = Matrix::<C64>::zeros(dim, dim);
    for (r, p) in proj.iter().enumerate() {
        expected = &expected + &p.scale(&C64::new(0.0, (2 * r) as f64 - m as f64));
    }
    let mut res = (&omega - &expected).max_abs();
    let mut ev = hermitian_eigenvalues(&omega.scale(&C64::i()));
    ev.sort_by(f64::total_cmp);
    let mut want: Vec<f64> = (0..=m)
        .flat_map(|r| {
            std::iter::repeat_n(
                m as f64 - (2 * r) as f64,
                binomial(m as i64, r as i64) as usize,
            )
        })
        .collect();
    want.sort_by(f64::total_cmp);
    res = res.max(max_f(ev.iter().zip(&want).map(|(a, b)| (a - b).abs())));
    rep.push(Check::new(
        "omega_spectrum",
        "kahler.omega_eigenvalues",
        res,
        tol,
    ));

    let total = proj
        .iter()
        .fold(Matrix::<C64>::zeros(dim, dim), |acc, p| &acc + p);
    let mut res = (&total - &id).max_abs();
    for (r, p) in proj.iter().enumerate() {
        res = res.max((&p.matmul(p) - p).max_abs());
        res = res.max((p.trace().re - sigma_rank(m, r as i64) as f64).abs());
    }
    rep.push(Check::new(
        "sigma_projectors",
        "kahler.sigma_projectors",
        res,
        tol,
    ));

    let vol = module.volume_element::<C64>().matrix;
    let signed = proj
        .iter()
        .enumerate()
        .fold(Matrix::<C64>::zeros(dim, dim), |acc, (r, p)| {
            &acc + &p.scale(&c64(if r % 2 == 0 { 1.0 } else { -1.0 }))
        });
    rep.push(Check::new(
        "volume_element",
        "kahler.volume_element",
        (&vol - &signed).max_abs(),
        tol,
    ));

    let mut res: f64 = 0.0;
    for k in 0..2 * m {
        let (xp, xm) = (
            module.clifford_plus::<C64>(k),
            module.clifford_minus::<C64>(k),
        );
        for (r, p) in proj.iter().enumerate() {
            let up = xp.matmul(p);
            let down = xm.matmul(p);
            let up_target = if r < m {
                proj[r + 1].matmul(&up)
            } else {
                Matrix::zeros(dim, dim)
            };
            let down_target = if r > 0 {
                proj[r - 1].matmul(&down)
            } else {
                Matrix::zeros(dim, dim)
            };
            res = res
                .max((&up - &up_target).max_abs())
                .max((&down - &down_target).max_abs());
        }
    }
    rep.push(Check::new(
        "grading_shift",
        "clifford.grading_shift",
        res,
        tol,
    ));

    let s = c64((4 * m * (m + 1)) as f64);
    for r in 0..=m {
        let res = module
            .contraction_identities::<C64>(r as i64, &s)?
            .max_residual();
        rep.push(Check::new(
            format!("contraction_identities_r{r}"),
            "kahler.contraction_identities",
            res,
            tol,
        ));
    }

    let ctx = TwistorContext::<C64>::new(module.clone());
    for r in 0..=m {
        let mut res: f64 = 0.0;
        for _ in 0..SAMPLES {
            let xi = sampling::twistor(&mut rng, &ctx, r)?;
            res = res.max(ctx.norm_identity_residual(&xi) / xi.norm_sqr().max(1.0));
        }
        rep.push(Check::new(
            format!("twistor_norm_r{r}"),
            "twistor.norm_decomposition",
            res,
            tol,
        ));
    }
    for r in 0..=m {
        let rank = ctx.ker_rank_numeric(r, 1e-8)? as i64;
        let exp = expected_ker_rank(m, r);
        rep.push(Check::new(
            format!("twistor_rank_r{r}"),
            "twistor.kernel_rank",
            (rank - exp).abs() as f64,
            0.0,
        ));
    }

    for t in 0..=2 * m {
        let res = sl2_commutator_residual::<C64>(m, t)?;
        rep.push(Check::new(
            format!("sl2_commutator_t{t}"),
            "lefschetz.sl2_commutator",
            res,
            tol,
        ));
    }

    let kahler = FormElement::<C64>::kahler_form(m)
        .form_clifford(&module)?
        .matrix;
    rep.push(Check::new(
        "kahler_form_clifford",
        "forms.kahler_form_clifford",
        (&kahler - &omega).max_abs(),
        tol,
    ));

    let mut clifford = FormClifford::new(&module, m)?;
    for k in 0..=m {
        for kp in 0..=m - k {
            let basis = effective_basis(m, k, kp)?;
            let mut res: f64 = 0.0;
            for _ in 0..SAMPLES.min(5) {
                let Some(w) = sampling::effective_form(&mut rng, &basis) else {
                    break;
                };
                let phi = sampling::spinor(&mut rng, &module);
                res = res.max(effective_pointwise_lemma_check_with(
                    &w,
                    &phi,
                    &mut clifford,
                )?);
            }
            rep.push(Check::new(
                format!("effective_lemma_{k}_{kp}"),
                "effective.pointwise_lemma",
                res,
                tol,
            ));
        }
    }
    Ok(rep.finish())
}

pub fn cmd_bounds(m: i64, p: i64, q: i64, r: Option<i64>) -> Result<Report> {
    let sp = SpincParams::new(m, p, q)?;
    if let Some(r) = r {
        sp.c_r(r)?;
    }
    let mut rep = Report::new("bounds")
        .param("m", m)
        .param("p", p)
        .param("q", q)
        .param("r", r);
    let profile = sp.profile();
    let rows: Vec<_> = profile
        .rows
        .iter()
        .filter(|row| r.is_none_or(|r| r == row.r))
        .map(|row| {
            json!({
                "r": row.r,
                "c_r": fraction(row.c_r),
                "a1": fraction(row.a1),
                "a2": fraction(row.a2),
                "e": fraction(row.e),
                "e_bound": fraction(row.e_bound),
                "prop_bound": fraction(row.prop_bound.value),
                "dropped_branches": row.prop_bound.dropped.iter().map(|d| format!("{d:?}")).collect::<Vec<_>>(),
            })
        })
        .collect();
    rep.value("rows", rows);
    rep.value("b", fraction(profile.b));
    rep.value("crossing", fraction(profile.crossing));
    rep.value("global_bound", fraction(profile.global));
    rep.value("scalar_curvature", fraction(sp.scalar_curvature()));

    let ratio = sp.ratio();
    let closed = Rational64::new(m + 1, 2 * m) * (Rational64::one() - ratio * ratio) * sp.half_s();
    rep.push(Check::exact(
        "global_closed_form",
        "bounds.global_closed_form",
        closed == profile.global,
    ));
    if let Some(b) = sp.b_integral() {
        let e1 = sp.e1(Rational64::from_integer(b)) * sp.half_s();
        let e2 = sp.e2(Rational64::from_integer(b + 1)) * sp.half_s();
        rep.push(Check::exact(
            "crossing_values",
            "bounds.crossing",
            e1 == profile.global && e2 == profile.global,
        ));
    }
    for rr in 0..=m {
        let Ok(c) = sp.comparison_identities(rr) else {
            continue;
        };
        if let Some((d, cf)) = c.e_minus_a1 {
            let ok = d == cf && d >= Rational64::from_integer(0);
            rep.push(Check::exact(
                format!("e_minus_a1_r{rr}"),
                "bounds.comparison_a1",
                ok,
            ));
        }
        if let Some((d, cf)) = c.e_minus_a2 {
            let ok = d == cf && d >= Rational64::from_integer(0);
            rep.push(Check::exact(
                format!("e_minus_a2_r{rr}"),
                "bounds.comparison_a2",
                ok,
            ));
        }
    }
    let hmu: Vec<_> = (0..=m + 1)
        .filter_map(|rr| hmu_structure(m, p, rr))
        .filter(|h| h.params.q() == q)
        .map(|h| json!({"r": h.r, "cp_kk_dimension": h.projective_kk_dimension, "contact_kk_dimension": h.contact_kk_dimension, "parallel": h.parallel}))
        .collect();
    rep.value("killing_structures", hmu);
    Ok(rep.finish())
}

pub fn cmd_spectrum(q: i64, l_max: u32) -> Result<Report> {
    let model = cp1::build_cp1(q, l_max)?;
    let spec = cp1::spectrum(&model);
    let mut rep = Report::new("spectrum cp1")
        .param("q", q)
        .param("lmax", l_max);
    for r in &spec.residuals {
        let anchor = if r.name == "bound_saturation" {
            "cp1.bound_saturation"
        } else {
            "cp1.dirac_structure"
        };
        rep.push(Check::from_residual(r, anchor));
    }
    for r in 0..=1 {
        let lr = cp1::verify_refined_lichnerowicz(&model, r)?;
        rep.push(Check::new(
            format!("lichnerowicz_10_r{r}"),
            "cp1.lichnerowicz_refined_10",
            lr.sl1,
            1e-8,
        ));
        rep.push(Check::new(
            format!("lichnerowicz_01_r{r}"),
            "cp1.lichnerowicz_refined_01",
            lr.sl2,
            1e-8,
        ));
        rep.push(Check::new(
            format!("lichnerowicz_r{r}"),
            "cp1.lichnerowicz",
            lr.sl,
            1e-8,
        ));
    }
    rep.push(Check::exact(
        "truncation_stable",
        "cp1.truncation",
        cp1::truncation_stable(q, l_max, 5)?,
    ));
    rep.eigenvalues = spec.lines.iter().map(EigenRow::from).collect();
    rep.value("min_eigenvalue", spec.min_eigenvalue());
    rep.value("global_bound", spec.bound.map(fraction));
    rep.value("basis_dimension", spec.basis_dimension);
    rep.value("spectrum", &spec.spectrum);
    Ok(rep.finish())
}

pub fn cmd_kk(q: i64, alpha: Rational64, l_max: u32) -> Result<Report> {
    let model = cp1::build_cp1(q, l_max)?;
    let kk = cp1::kk_solve(&model, alpha)?;
    let mut rep = Report::new("kk cp1")
        .param("q", q)
        .param("alpha", fraction(alpha))
        .param("lmax", l_max);
    for r in &kk.residuals {
        rep.push(Check::from_residual(r, "cp1.kk_system"));
    }
    let dim = kk.kk_dimension.unwrap_or(0);
    // Solutions exist only for α² = 1, filling C(m+1, r) = C(2, 1) dimensions.
    let expected = if alpha * alpha == Rational64::one() {
        binomial(2, 1) as usize
    } else {
        0
    };
    rep.push(Check::new(
        "kk_dimension",
        "cp1.kk_dimension",
        dim.abs_diff(expected) as f64,
        0.0,
    ));
    if let Some(gap) = kk.singular_gap {
        rep.push(Check::new(
            "singular_gap",
            "cp1.kk_dimension",
            1.0 / gap,
            1e-3,
        ));
    }
    rep.eigenvalues = kk.lines.iter().map(EigenRow::from).collect();
    rep.value("kk_dimension", dim);
    rep.value("singular_gap", kk.singular_gap);
    rep.value("kk_eigenvalue", kk.bound.map(fraction));
    Ok(rep.finish())
}

pub fn cmd_torus(seed: u64, samples: usize, cutoff: i32) -> Result<Report> {
    let model = TorusModel::new(cutoff)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = Report::new("torus")
        .param("seed", seed)
        .param("samples", samples)
        .param("cutoff", cutoff);
    let spec = model.spectrum();
    for r in &spec.residuals {
        rep.push(Check::from_residual(r, "torus.flat_laplacian"));
    }
    let band_phi = (cutoff / 2).max(1);
    let band_omega = (cutoff - band_phi).max(0);
    for deg in [1u32, 2] {
        let mut res: f64 = 0.0;
        for _ in 0..samples {
            let omega = FormField::random(&mut rng, deg, band_omega);
            let phi = SpinorField::random(&mut rng, band_phi);
            res = res.max(torus_leibniz_check(&model, &omega, &phi)?);
        }
        rep.push(Check::new(
            format!("leibniz_deg{deg}"),
            "torus.dirac_leibniz",
            res,
            1e-10,
        ));
    }
    rep.eigenvalues = spec.lines.iter().map(EigenRow::from).collect();
    rep.value("basis_dimension", spec.basis_dimension);
    Ok(rep.finish())
}

pub fn cmd_eff(m_max: i64) -> Result<Report> {
    if m_max < 1 {
        return Err(Error::OutOfDomain(format!(
            "m_max must be >= 1 (m_max = {m_max})"
        )));
    }
    let mut rep = Report::new("eff").param("m_max", m_max);
    let violations = eff_inequality_bruteforce(m_max);
    rep.push(Check::new(
        "degree_inequality",
        "effective.degree_inequality",
        violations.len() as f64,
        0.0,
    ));
    let mut bad = 0usize;
    let mut cases = 0usize;
    for m in 1..=m_max {
        for r in 0..=m + 1 {
            for k in 0..=m {
                for kp in 0..=m {
                    let f = domeg_consistency(m, r, k, kp)?;
                    cases += 1;
                    if f.product != 4 * (r - k) * (m - r + 1 - kp) {
                        bad += 1;
                    }
                }
            }
        }
    }
    rep.push(Check::new(
        "dirac_factor_composition",
        "effective.dirac_factors",
        bad as f64,
        0.0,
    ));
    rep.value("cases", cases);
    rep.value("violations", &violations);
    Ok(rep.finish())
}

fn dispatch(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Identities { m, seed, tol } => cmd_identities(*m as usize, *seed, *tol),
        Command::Bounds { m, p, q, r } => cmd_bounds(*m, *p, *q, *r),
        Command::Spectrum {
            model: SpectrumModel::Cp1 { q, lmax },
        } => cmd_spectrum(*q, *lmax),
        Command::Kk {
            model: KkModel::Cp1 { q, alpha, lmax },
        } => cmd_kk(*q, *alpha, *lmax),
        Command::Torus {
            seed,
            samples,
            cutoff,
        } => cmd_torus(*seed, *samples, *cutoff),
        Command::Eff { m_max } => cmd_eff(*m_max),
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    }
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidParams(_)
            | Error::OutOfDomain(_)
            | Error::GradingOutOfRange { .. }
            | Error::DimensionOutOfRange { .. }
    )
}

/// Runs the command line, writing the report to `out` (or a file) and
/// diagnostics to `err`. Returns the process exit code: 0 when every check
/// passes, 1 on a failed check or solver error, 2 on a usage error.
pub fn run_with<I, T>(
    args: I,
    out_dir: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let report = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return if is_usage_error(&e) { 2 } else { 1 };
        }
    };
    let text = render(&report, cli.format);
    let target = cli.output.or_else(|| {
        out_dir.map(|d| {
            d.join(format!(
                "{}.{}",
                report.command.replace(' ', "_"),
                cli.format.extension()
            ))
        })
    });
    match target {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return 1;
            }
            let _ = writeln!(err, "wrote {}", path.display());
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    if report.passed() {
        0
    } else {
        1
    }
}

/// [`run_with`] using `$SPINC_OUT_DIR` as the default output directory.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let dir = std::env::var_os(OUT_DIR_ENV)
        .filter(|d| !d.is_empty())
        .map(PathBuf::from);
    run_with(args, dir, out, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("spinc").chain(args.iter().copied());
        let code = run_with(argv, None, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn json_of(args: &[&str]) -> (i32, serde_json::Value) {
        let (code, out, _) = call(args);
        (code, serde_json::from_str(&out).unwrap())
    }

    #[test]
    fn identities_pass() {
        let (code, v) = json_of(&["identities", "--m", "3", "--seed", "7"]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["status"], "pass");
        let n = v["checks"].as_array().unwrap().len();
        assert!((30..=40).contains(&n), "{n} checks");
        for key in ["command", "params", "checks", "eigenvalues", "status"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let c = &v["checks"][0];
        for key in ["name", "anchor", "status", "max_residual", "tolerance"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["identities", "--m", "0"]).0, 2);
        assert_eq!(call(&["identities", "--m", "7"]).0, 2);
        let (code, _, err) = call(&["bounds", "--m", "2", "--p", "3", "--q", "2"]);
        assert_eq!(code, 2);
        assert!(err.contains("p + q must be even"), "{err}");
        assert_eq!(call(&["spectrum", "cp1", "--q", "1"]).0, 2);
        assert_eq!(call(&["kk", "cp1", "--q", "2"]).0, 2);
        assert_eq!(call(&["nonsense"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn bounds_values() {
        let (code, v) = json_of(&["bounds", "--m", "1", "--p", "2", "--q", "0"]);
        assert_eq!(code, 0);
        assert_eq!(v["values"]["global_bound"]["exact"], "4/1");
        let (code, v) = json_of(&["bounds", "--m", "3", "--p", "4", "--q", "2"]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["values"]["b"]["exact"], "2/1");
        assert_eq!(v["values"]["global_bound"]["decimal"], 12.0);
        let (_, v) = json_of(&["bounds", "--m", "3", "--p", "4", "--q", "-2", "--r", "1"]);
        assert_eq!(v["values"]["rows"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn spectrum_and_kk() {
        let (code, v) = json_of(&["spectrum", "cp1", "--q", "0", "--lmax", "20"]);
        assert_eq!(code, 0, "{v}");
        assert!((v["values"]["min_eigenvalue"].as_f64().unwrap() - 4.0).abs() < 1e-8);
        let (code, v) = json_of(&["spectrum", "cp1", "--q", "-2", "--lmax", "6"]);
        assert_eq!(code, 0);
        assert!(v["values"]["min_eigenvalue"].as_f64().unwrap().abs() < 1e-8);
        let (code, v) = json_of(&["kk", "cp1", "--q", "0", "--alpha", "-1"]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["values"]["kk_dimension"], 2);
        let (code, v) = json_of(&["kk", "cp1", "--q", "0", "--alpha", "1/2"]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["values"]["kk_dimension"], 0);
    }

    #[test]
    fn csv_eigen_table() {
        let (code, out, _) = call(&[
            "--format", "csv", "spectrum", "cp1", "--q", "0", "--lmax", "4",
        ]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("l,eigenvalue,multiplicity,grading"));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!((first[0], first[2], first[3]), ("0.5", "2", "0"));
        assert!((first[1].parse::<f64>().unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn torus_and_eff() {
        let (code, v) = json_of(&["torus", "--seed", "3", "--samples", "5"]);
        assert_eq!(code, 0, "{v}");
        let (code, v) = json_of(&["eff", "--m-max", "12"]);
        assert_eq!(code, 0);
        assert_eq!(v["values"]["violations"].as_array().unwrap().len(), 0);
        assert_eq!(call(&["eff", "--m-max", "0"]).0, 2);
    }

    #[test]
    fn byte_stable_output() {
        let a = call(&["identities", "--m", "2", "--seed", "11"]).1;
        let b = call(&["identities", "--m", "2", "--seed", "11"]).1;
        assert_eq!(a, b);
        let a = call(&[
            "--format", "text", "bounds", "--m", "4", "--p", "5", "--q", "3",
        ])
        .1;
        let b = call(&[
            "--format", "text", "bounds", "--m", "4", "--p", "5", "--q", "3",
        ])
        .1;
        assert_eq!(a, b);
    }

    #[test]
    fn writes_into_output_directory() {
        let dir = std::env::temp_dir().join(format!("spinc-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = [
            "spinc", "--format", "csv", "spectrum", "cp1", "--q", "2", "--lmax", "4",
        ];
        let code = run_with(argv, Some(dir.clone()), &mut out, &mut err);
        assert_eq!(code, 0);
        assert!(out.is_empty());
        let written = std::fs::read_to_string(dir.join("spectrum_cp1.csv")).unwrap();
        assert!(written.starts_with("l,eigenvalue"));
        std::fs::remove_dir_all(dir).unwrap();
    }
}
