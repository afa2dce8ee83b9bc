//! Command-line front end: verification, synthesis, bounds, polynomial and
//! angle queries, and the builtin reference configurations.
//!
//! Exit codes: 0 = pass/success, 2 = computed but failed the mathematical
//! test (or outside a bound's validity domain), 1 = tool error.

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use sphere_designs::bounds::{
    self, AbsoluteVariant, AnnihilatorSpec, BoundReport, BoundValue, TightnessPoly,
};
use sphere_designs::builtin::builtin_configuration;
use sphere_designs::config::{angle_set, load_configuration, save_configuration, Field};
use sphere_designs::designs::{
    self, SynthesisOptions, VerificationReport, WeightsMode,
};
use sphere_designs::error::Error;
use sphere_designs::gegenbauer::{complex_q, real_q, GegExpansion};
use sphere_designs::indices::{parse_index_spec, ComplexIndexSet, IndexSet, RealIndexSet};
use sphere_designs::poly::{BivariatePoly, MonomialPoly, RealPolynomial};
use sphere_designs::potentials::{pair_energy, MonomialFamily, Potential};
use sphere_designs::{Complex, Real};

#[derive(Parser)]
#[command(name = "sphere-designs", version, about = "Spherical designs through Gramians")]
struct Cli {
    /// Residual tolerance for verification-style checks.
    #[arg(long, global = true)]
    tol: Option<Real>,
    /// Seed for randomized subcommands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (falls back to SPHERE_DESIGNS_THREADS, then 1).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Emit::Json)]
    emit: Emit,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Basis {
    Monomial,
    Geg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PotentialForm {
    Canonical,
    Monomial,
}

#[derive(Subcommand)]
enum Command {
    /// Print a Gegenbauer / disk polynomial.
    Gegenbauer {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, value_enum, default_value_t = Basis::Monomial)]
        basis: Basis,
    },
    /// Print the canonical or monomial potential of a design family.
    Potential {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        indices: String,
        #[arg(long, value_enum, default_value_t = PotentialForm::Canonical)]
        form: PotentialForm,
    },
    /// Verify a configuration against a design family or index set.
    Verify {
        #[arg(long)]
        input: String,
        #[arg(long)]
        design: String,
        /// `uniform`, `m:K` (m-weights), or `file` (weights from the input).
        #[arg(long, default_value = "uniform")]
        weights: String,
    },
    /// Report the maximal integrated index set up to a degree cap.
    MaxClass {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 8)]
        cap: u32,
        #[arg(long, default_value = "uniform")]
        weights: String,
    },
    /// Construct a design numerically by potential minimization.
    Synthesize {
        #[arg(long)]
        field: Field,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        design: String,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        /// `uniform` or `m:K` for the m-weighted monomial objective.
        #[arg(long, default_value = "uniform")]
        weights: String,
        /// Also write the bare configuration JSON here.
        #[arg(long)]
        output: Option<String>,
    },
    /// Compute a bound on the number of points.
    Bound(BoundArgs),
    /// Cluster the off-diagonal Gramian entries into distinct angles.
    Angles {
        #[arg(long)]
        input: String,
    },
    /// Off-diagonal pair energy sum_{j != k} F(<v_j, v_k>).
    Energy {
        #[arg(long)]
        input: String,
        /// Real configs: monomial coefficients `c0,c1,...`. Complex configs:
        /// terms `p,q:re[,im]` separated by `;`.
        #[arg(long)]
        poly: String,
    },
    /// Emit a builtin reference configuration.
    Builtin {
        name: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        scale: Option<Real>,
    },
    /// Check a configuration for tightness against a bound.
    Tightness {
        #[arg(long)]
        input: String,
        #[command(flatten)]
        bound: BoundArgs,
    },
}

#[derive(Args, Clone)]
struct BoundArgs {
    /// absolute | special | fisher | acode | lower
    kind: String,
    #[arg(long)]
    field: Field,
    #[arg(long)]
    d: usize,
    /// Design family or certificate index set.
    #[arg(long)]
    indices: Option<String>,
    /// Angle list: projective values `0,0.25` or complex `0.1+0.2i`.
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,
    /// Number of angles for the s-angular bound.
    #[arg(long)]
    s: Option<u32>,
    /// Whether zero is one of the s angles.
    #[arg(long, default_value_t = false)]
    zero: bool,
    /// Annihilator form for `fisher`: holo | realpart | projective.
    #[arg(long, default_value = "projective")]
    form: String,
    /// Constant term added to the `acode` potential.
    #[arg(long, default_value_t = 1.0)]
    constant: Real,
}

fn main() {
    let started = Instant::now();
    // usage problems are tool errors (exit 1); exit 2 is reserved for
    // checks that ran and failed mathematically
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let code = match run(&cli, started) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::OutOfValidityDomain(_) | Error::PreconditionFailed(_) => 2,
                _ => 1,
            }
        }
    };
    std::process::exit(code);
}

fn threads(cli: &Cli) -> usize {
    cli.threads
        .or_else(|| {
            std::env::var("SPHERE_DESIGNS_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
}

fn manifest(cli: &Cli, input_bytes: Option<&[u8]>) -> Value {
    let command: Vec<String> = std::env::args().collect();
    let digest = input_bytes.map(|b| {
        let mut h = Sha256::new();
        h.update(b);
        format!("sha256:{:x}", h.finalize())
    });
    json!({
        "command": command.join(" "),
        "seed": cli.seed,
        "version": env!("CARGO_PKG_VERSION"),
        "tolerances": { "residual": cli.tol.unwrap_or(1e-9) },
        "input_digest": digest,
        "threads": threads(cli),
    })
}

fn emit_report(value: &Value, started: Instant) {
    let mut out = serde_json::to_vec_pretty(value).expect("serialization");
    out.push(b'\n');
    std::io::stdout().write_all(&out).expect("stdout");
    eprintln!("wall_time_ms: {}", started.elapsed().as_millis());
}

fn parse_weights_mode(spec: &str) -> Result<Option<WeightsMode<Real>>, Error> {
    match spec {
        "uniform" => Ok(Some(WeightsMode::Uniform)),
        "file" => Ok(None), // resolved from the configuration
        other => {
            if let Some(m) = other.strip_prefix("m:") {
                let m = m
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad m-weight order `{m}`")))?;
                Ok(Some(WeightsMode::MWeights(m)))
            } else {
                Err(Error::Parse(format!("unknown weights mode `{other}`")))
            }
        }
    }
}

fn resolve_weights_mode(
    spec: &str,
    config: &sphere_designs::Configuration,
) -> Result<WeightsMode<Real>, Error> {
    match parse_weights_mode(spec)? {
        Some(mode) => Ok(mode),
        None => match config.explicit_weights() {
            Some(w) => Ok(WeightsMode::Explicit(w.to_vec())),
            None => Ok(WeightsMode::Uniform),
        },
    }
}

fn load_input(path: &str) -> Result<(sphere_designs::Configuration, Vec<u8>), Error> {
    let bytes = std::fs::read(path)
        .map_err(|e| Error::Parse(format!("cannot read `{path}`: {e}")))?;
    let cfg = load_configuration::<Real>(&bytes)?;
    Ok((cfg, bytes))
}

fn expansion_json(e: &GegExpansion<Real>) -> Value {
    match e {
        GegExpansion::Real(e) => Value::Array(
            e.iter()
                .map(|(k, c)| json!({ "k": k, "coeff": c }))
                .collect(),
        ),
        GegExpansion::Complex(e) => Value::Array(
            e.iter()
                .map(|(i, c)| json!({ "p": i.p, "q": i.q, "re": c.re, "im": c.im }))
                .collect(),
        ),
    }
}

fn monomial_json(p: &MonomialPoly<Real>) -> Value {
    match p {
        MonomialPoly::Real(p) => json!(p.coeffs()),
        MonomialPoly::Complex(p) => Value::Array(
            p.terms()
                .map(|(pp, qq, c)| json!({ "p": pp, "q": qq, "re": c.re, "im": c.im }))
                .collect(),
        ),
    }
}

fn report_json(report: &VerificationReport<Real>) -> Value {
    json!({
        "pass": report.pass,
        "tol": report.tol,
        "weights": report.weights,
        "residuals": report
            .entries
            .iter()
            .map(|(idx, r)| json!({ "index": idx.to_string(), "residual": r }))
            .collect::<Vec<_>>(),
        "max_residual": report.max_residual(),
    })
}

fn parse_complex_list(spec: &str) -> Result<Vec<Complex>, Error> {
    spec.split(',')
        .map(|s| parse_complex(s.trim()))
        .collect()
}

fn parse_complex(s: &str) -> Result<Complex, Error> {
    let s = s.trim();
    if let Ok(x) = s.parse::<Real>() {
        return Ok(Complex::new(x, 0.0));
    }
    let body = s.strip_suffix('i').ok_or_else(|| Error::Parse(format!("bad complex `{s}`")))?;
    for (i, ch) in body.char_indices().skip(1) {
        if ch == '+' || ch == '-' {
            let re = body[..i]
                .parse::<Real>()
                .map_err(|_| Error::Parse(format!("bad complex `{s}`")))?;
            let im_str = &body[i..];
            let im = if im_str == "+" || im_str == "-" {
                if im_str == "+" { 1.0 } else { -1.0 }
            } else {
                im_str
                    .parse::<Real>()
                    .map_err(|_| Error::Parse(format!("bad complex `{s}`")))?
            };
            return Ok(Complex::new(re, im));
        }
    }
    // pure imaginary
    let im = body
        .parse::<Real>()
        .map_err(|_| Error::Parse(format!("bad complex `{s}`")))?;
    Ok(Complex::new(0.0, im))
}

fn parse_real_list(spec: &str) -> Result<Vec<Real>, Error> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<Real>()
                .map_err(|_| Error::Parse(format!("bad number `{s}`")))
        })
        .collect()
}

fn parse_poly_spec(spec: &str, field: Field) -> Result<MonomialPoly<Real>, Error> {
    match field {
        Field::Real => Ok(MonomialPoly::Real(RealPolynomial::new(parse_real_list(spec)?))),
        Field::Complex => {
            let mut terms = Vec::new();
            for part in spec.split(';') {
                let (idx, val) = part
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("bad term `{part}`; use p,q:re[,im]")))?;
                let pq = parse_real_list(idx)?;
                if pq.len() != 2 {
                    return Err(Error::Parse(format!("bad index in `{part}`")));
                }
                let vals = parse_real_list(val)?;
                let c = match vals.as_slice() {
                    [re] => Complex::new(*re, 0.0),
                    [re, im] => Complex::new(*re, *im),
                    _ => return Err(Error::Parse(format!("bad coefficient in `{part}`"))),
                };
                terms.push((pq[0] as usize, pq[1] as usize, c));
            }
            Ok(MonomialPoly::Complex(BivariatePoly::from_terms(terms)?))
        }
    }
}

/// Derives the certificate set `E` for the absolute bound of a design
/// family, following the optimal choices of the worked examples.
fn absolute_bound_for(
    field: Field,
    d: usize,
    spec: &str,
) -> Result<BoundReport<Real>, Error> {
    let spec = spec.trim();
    if let Some((name, arg)) = spec.split_once(':') {
        let nums = parse_real_list(arg)?;
        let as_u32 = |x: Real| x as u32;
        match (name, field) {
            ("t", Field::Real) => {
                let t = as_u32(nums[0]);
                if t % 2 == 0 {
                    let e = RealIndexSet::new(0..=t / 2);
                    return bounds::absolute_lower_real(d, &e, AbsoluteVariant::Square);
                }
                let e = t / 2;
                let set = RealIndexSet::new((0..=e).filter(|k| (e - k) % 2 == 0));
                return bounds::absolute_lower_real(d, &set, AbsoluteVariant::OddEven);
            }
            ("half", Field::Real) => {
                let m = as_u32(nums[0]);
                if m % 2 != 0 {
                    return Err(Error::Invalid(
                        "absolute half-design bounds need an even order".into(),
                    ));
                }
                let t = m / 2;
                let set = RealIndexSet::new((0..=t).filter(|k| (t - k) % 2 == 0));
                return bounds::absolute_lower_real(d, &set, AbsoluteVariant::Square);
            }
            ("tt", _) => {
                let t = as_u32(nums[0]);
                let q = t / 2;
                let p = t - q;
                let e = ComplexIndexSet::new((0..=p.min(q)).map(|j| (p - j, q - j)));
                return bounds::absolute_lower_complex(d, &e);
            }
            ("pq", _) => {
                let (p, q) = (as_u32(nums[0]), as_u32(nums[1]));
                let e = ComplexIndexSet::new((0..=p.min(q)).map(|j| (p - j, q - j)));
                return bounds::absolute_lower_complex(d, &e);
            }
            _ => {}
        }
    }
    match parse_index_spec(spec, field)? {
        IndexSet::Real(e) => bounds::absolute_lower_real(d, &e, AbsoluteVariant::Square),
        IndexSet::Complex(e) => bounds::absolute_lower_complex(d, &e),
    }
}

fn bound_report_json(r: &BoundReport<Real>) -> Value {
    let value = match r.value {
        BoundValue::Exact(n) => json!(n),
        BoundValue::Approx(v) => json!(v),
    };
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(format!("{:?}", r.kind)));
    obj.insert("value".into(), value);
    obj.insert("valid".into(), json!(r.valid));
    if let Some(v) = &r.violated {
        obj.insert("violated".into(), json!(v));
    }
    if let Some(dm) = &r.domain {
        obj.insert("domain".into(), json!(dm));
    }
    obj.insert(
        "tight_roots".into(),
        Value::Array(r.tight_roots.iter().map(|z| json!([z.re, z.im])).collect()),
    );
    if let Some(poly) = &r.tightness_poly {
        let p = match poly {
            TightnessPoly::Angle(p) => json!({ "variable": "angle", "poly": monomial_json(p) }),
            TightnessPoly::SquaredModulus(p) => {
                json!({ "variable": "|z|^2", "poly": json!(p.coeffs()) })
            }
        };
        obj.insert("tightness_poly".into(), p);
    }
    if let Some(idx) = &r.design_indices {
        obj.insert("design_indices".into(), json!(idx.to_string()));
    }
    Value::Object(obj)
}

fn compute_bound(args: &BoundArgs) -> Result<BoundReport<Real>, Error> {
    match args.kind.as_str() {
        "absolute" | "lower" if args.s.is_some() => {
            bounds::s_angular_bound(args.d, args.s.unwrap(), args.zero)
        }
        "absolute" => {
            let spec = args
                .indices
                .as_deref()
                .ok_or_else(|| Error::Invalid("absolute bounds need --indices".into()))?;
            absolute_bound_for(args.field, args.d, spec)
        }
        "lower" => {
            let spec = args
                .indices
                .as_deref()
                .ok_or_else(|| Error::Invalid("lower bounds need --indices".into()))?;
            if let Some(t) = spec.strip_prefix("harm:") {
                let t = t
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad harmonic index `{t}`")))?;
                // F = Q_t + c with the optimal c = -min Q_t
                let q = real_q::<Real>(args.d, t)?;
                let (_, min_v) = sphere_designs::roots::min_on_interval(&q, -1.0, 1.0);
                let e = sphere_designs::gegenbauer::RealExpansion::from_coeffs(
                    args.d,
                    [(0u32, -min_v), (t, 1.0)],
                );
                let l = IndexSet::Real(RealIndexSet::new([t]));
                return bounds::lower_bound(&GegExpansion::Real(e), &l);
            }
            absolute_bound_for(args.field, args.d, spec)
        }
        "special" => {
            let spec = args
                .angles
                .as_deref()
                .ok_or_else(|| Error::Invalid("special bounds need --angles".into()))?;
            bounds::special_bounds(args.d, &parse_real_list(spec)?)
        }
        "fisher" => {
            if let Some(s) = args.s {
                return bounds::s_angular_bound(args.d, s, args.zero);
            }
            let spec = args
                .angles
                .as_deref()
                .ok_or_else(|| Error::Invalid("fisher bounds need --angles".into()))?;
            let ann = match args.form.as_str() {
                "holo" => AnnihilatorSpec::Angles(parse_complex_list(spec)?),
                "realpart" => AnnihilatorSpec::RealParts(parse_real_list(spec)?),
                "projective" => {
                    let all = parse_real_list(spec)?;
                    let include_zero = all.contains(&0.0) || args.zero;
                    AnnihilatorSpec::Projective {
                        nonzero_angles: all.into_iter().filter(|a| *a != 0.0).collect(),
                        include_zero,
                    }
                }
                other => return Err(Error::Parse(format!("unknown annihilator form `{other}`"))),
            };
            let e = bounds::annihilator(&ann, args.d)?;
            bounds::fisher_bound(&e)
        }
        "acode" => {
            let spec = args
                .indices
                .as_deref()
                .ok_or_else(|| Error::Invalid("acode bounds need --indices".into()))?;
            let idx = parse_index_spec(spec, args.field)?;
            let pot = Potential::canonical(args.d, &idx)?.with_constant(args.constant);
            let angles = match args.angles.as_deref() {
                Some(a) => parse_complex_list(a)?,
                None => Vec::new(),
            };
            bounds::upper_bound_acode(&pot, &angles)
        }
        other => Err(Error::Parse(format!("unknown bound kind `{other}`"))),
    }
}

fn bound_table(args: &BoundArgs) -> Result<String, Error> {
    let mut rows = String::from("| d | bound | tight angles |\n|---|-------|--------------|\n");
    for d in 2..=args.d {
        let mut a = args.clone();
        a.d = d;
        let row = match compute_bound(&a) {
            Ok(r) => {
                let value = match r.value {
                    BoundValue::Exact(n) => n.to_string(),
                    BoundValue::Approx(v) => format!("{v}"),
                };
                let roots: Vec<String> = r
                    .tight_roots
                    .iter()
                    .map(|z| {
                        if z.im.abs() < 1e-12 {
                            format!("{:.6}", z.re)
                        } else {
                            format!("{:.6}{:+.6}i", z.re, z.im)
                        }
                    })
                    .collect();
                format!("| {d} | {value} | {} |\n", roots.join(", "))
            }
            Err(e) => format!("| {d} | - | {e} |\n"),
        };
        rows.push_str(&row);
    }
    Ok(rows)
}

fn run(cli: &Cli, started: Instant) -> Result<i32, Error> {
    let tol = cli.tol.unwrap_or(1e-9);
    match &cli.command {
        Command::Gegenbauer { field, d, k, p, q, basis } => {
            let (label, mono, geg): (String, MonomialPoly<Real>, GegExpansion<Real>) =
                match (field, k, p, q) {
                    (Field::Real, Some(k), None, None) => {
                        let poly = real_q::<Real>(*d, *k)?;
                        let geg = sphere_designs::gegenbauer::RealExpansion::from_coeffs(
                            *d,
                            [(*k, 1.0)],
                        );
                        (format!("Q_{k}"), MonomialPoly::Real(poly), GegExpansion::Real(geg))
                    }
                    (Field::Complex, None, Some(p), Some(q)) => {
                        let poly = complex_q::<Real>(*d, *p, *q)?;
                        let geg = sphere_designs::gegenbauer::ComplexExpansion::from_coeffs(
                            *d,
                            [((*p, *q), Complex::new(1.0, 0.0))],
                        );
                        (
                            format!("Q_{p}{q}"),
                            MonomialPoly::Complex(poly),
                            GegExpansion::Complex(geg),
                        )
                    }
                    _ => {
                        return Err(Error::Invalid(
                            "real polynomials take --k, complex ones --p and --q".into(),
                        ))
                    }
                };
            let coeffs = match basis {
                Basis::Monomial => monomial_json(&mono),
                Basis::Geg => expansion_json(&geg),
            };
            let out = json!({
                "manifest": manifest(cli, None),
                "polynomial": label,
                "d": d,
                "basis": match basis { Basis::Monomial => "monomial", Basis::Geg => "geg" },
                "coefficients": coeffs,
                "value_at_one": mono.eval_at_one().re,
            });
            emit_report(&out, started);
            Ok(0)
        }
        Command::Potential { field, d, indices, form } => {
            let pot = match form {
                PotentialForm::Canonical => {
                    let idx = parse_index_spec(indices, *field)?;
                    Potential::canonical(*d, &idx)?
                }
                PotentialForm::Monomial => {
                    let family = if let Some(m) = indices.strip_prefix("half:") {
                        MonomialFamily::HalfDesign {
                            m: m.parse().map_err(|_| Error::Parse("bad half order".into()))?,
                        }
                    } else if let Some(pq) = indices.strip_prefix("pq:") {
                        let nums = parse_real_list(pq)?;
                        MonomialFamily::HomPq { p: nums[0] as u32, q: nums[1] as u32 }
                    } else if let Some(t) = indices.strip_prefix("tt:") {
                        let t: u32 = t.parse().map_err(|_| Error::Parse("bad tt order".into()))?;
                        MonomialFamily::HomPq { p: t, q: t }
                    } else if let Some(m) = indices.strip_prefix("hom:") {
                        MonomialFamily::HomComplex {
                            m: m.parse().map_err(|_| Error::Parse("bad hom order".into()))?,
                        }
                    } else {
                        return Err(Error::Invalid(
                            "monomial potentials cover half:m, pq:p,q, tt:t and hom:m".into(),
                        ));
                    };
                    Potential::monomial_family(*d, family)?
                }
            };
            let out = json!({
                "manifest": manifest(cli, None),
                "d": d,
                "is_potential": pot.is_potential(),
                "floor": pot.floor(),
                "geg_coefficients": expansion_json(pot.expansion()),
                "monomial": monomial_json(pot.monomial()),
            });
            emit_report(&out, started);
            Ok(0)
        }
        Command::Verify { input, design, weights } => {
            let (cfg, bytes) = load_input(input)?;
            let mode = resolve_weights_mode(weights, &cfg)?;
            let report = if let Some(t) = design.strip_prefix("t:") {
                let t: u32 = t.parse().map_err(|_| Error::Parse("bad t".into()))?;
                designs::verify_t_design(&cfg, &mode, t, tol)?
            } else if let (Some(m), WeightsMode::MWeights(mw)) =
                (design.strip_prefix("half:"), &mode)
            {
                let m: u32 = m.parse().map_err(|_| Error::Parse("bad half order".into()))?;
                if m != *mw {
                    return Err(Error::Invalid(
                        "half:m verification expects matching m-weights".into(),
                    ));
                }
                designs::verify_half_design_m_weights(&cfg, m, false, tol, true)?
            } else {
                let idx = parse_index_spec(design, cfg.field())?;
                designs::verify(&cfg, &mode, &idx, tol)?
            };
            if cli.emit == Emit::Table {
                println!("| index | residual |\n|-------|----------|");
                for (idx, r) in &report.entries {
                    println!("| {idx} | {r:e} |");
                }
                println!("| pass | {} |", report.pass);
                eprintln!("wall_time_ms: {}", started.elapsed().as_millis());
                return Ok(if report.pass { 0 } else { 2 });
            }
            let out = json!({
                "manifest": manifest(cli, Some(&bytes)),
                "design": design,
                "report": report_json(&report),
            });
            emit_report(&out, started);
            Ok(if report.pass { 0 } else { 2 })
        }
        Command::MaxClass { input, cap, weights } => {
            let (cfg, bytes) = load_input(input)?;
            let mode = resolve_weights_mode(weights, &cfg)?;
            let class = designs::max_class(&cfg, &mode, *cap, tol)?;
            let out = json!({
                "manifest": manifest(cli, Some(&bytes)),
                "cap": cap,
                "class": class.to_string(),
            });
            emit_report(&out, started);
            Ok(0)
        }
        Command::Synthesize { field, d, n, design, restarts, max_iters, weights, output } => {
            let idx = parse_index_spec(design, *field)?;
            let mode = parse_weights_mode(weights)?
                .ok_or_else(|| Error::Invalid("synthesis weights: uniform or m:K".into()))?;
            let opts = SynthesisOptions {
                max_iters: *max_iters,
                restarts: *restarts,
                tol,
                threads: threads(cli),
            };
            let result = designs::synthesize(*field, *d, *n, &idx, &mode, cli.seed, &opts)?;
            let cfg_bytes = save_configuration(&result.configuration);
            if let Some(path) = output {
                std::fs::write(path, &cfg_bytes)
                    .map_err(|e| Error::Invalid(format!("cannot write `{path}`: {e}")))?;
            }
            let cfg_value: Value =
                serde_json::from_slice(&cfg_bytes).expect("configuration serialization");
            let out = json!({
                "manifest": manifest(cli, None),
                "result": {
                    "converged": result.converged,
                    "residual": result.residual,
                    "iterations": result.iterations,
                    "restart": result.restart,
                    "restarts_used": result.restarts_used,
                    "seed": result.seed,
                },
                "configuration": cfg_value,
            });
            emit_report(&out, started);
            Ok(if result.converged { 0 } else { 2 })
        }
        Command::Bound(args) => {
            if cli.emit == Emit::Table {
                let table = bound_table(args)?;
                print!("{table}");
                eprintln!("wall_time_ms: {}", started.elapsed().as_millis());
                return Ok(0);
            }
            let report = compute_bound(args)?;
            let out = json!({
                "manifest": manifest(cli, None),
                "bound": bound_report_json(&report),
            });
            emit_report(&out, started);
            Ok(0)
        }
        Command::Angles { input } => {
            let (cfg, bytes) = load_input(input)?;
            let cluster_tol = cli.tol.unwrap_or(1e-9);
            let set = angle_set(&cfg.gramian(), &cfg.weights_or_uniform(), cluster_tol)?;
            if cli.emit == Emit::Table {
                println!("| angle | count | weighted multiplicity |\n|-------|-------|----------------------|");
                for ((z, c), w) in set.angles.iter().zip(&set.counts).zip(&set.weighted) {
                    println!("| {:.12}{:+.12}i | {c} | {w:.12} |", z.re, z.im);
                }
                eprintln!("wall_time_ms: {}", started.elapsed().as_millis());
                return Ok(0);
            }
            let out = json!({
                "manifest": manifest(cli, Some(&bytes)),
                "angles": set
                    .angles
                    .iter()
                    .zip(&set.counts)
                    .zip(&set.weighted)
                    .map(|((z, c), w)| json!({
                        "angle": [z.re, z.im],
                        "count": c,
                        "weighted_multiplicity": w,
                    }))
                    .collect::<Vec<_>>(),
                "diagonal_weight": set.diagonal_weight,
            });
            emit_report(&out, started);
            Ok(0)
        }
        Command::Energy { input, poly } => {
            let (cfg, bytes) = load_input(input)?;
            let f = parse_poly_spec(poly, cfg.field())?;
            let energy = pair_energy(&cfg, &f)?;
            let out = json!({
                "manifest": manifest(cli, Some(&bytes)),
                "energy": energy,
            });
            emit_report(&out, started);
            Ok(0)
        }
        Command::Builtin { name, d, n, scale } => {
            let cfg = builtin_configuration::<Real>(name, d.or(*n), *scale)?;
            let bytes = save_configuration(&cfg);
            std::io::stdout().write_all(&bytes).expect("stdout");
            eprintln!("wall_time_ms: {}", started.elapsed().as_millis());
            Ok(0)
        }
        Command::Tightness { input, bound } => {
            let (cfg, bytes) = load_input(input)?;
            let report = compute_bound(bound)?;
            let cert = bounds::tightness_check(&cfg, &report, tol)?;
            let out = json!({
                "manifest": manifest(cli, Some(&bytes)),
                "bound": bound_report_json(&report),
                "tight": {
                    "pass": cert.pass,
                    "n_matches": cert.n_matches,
                    "worst_root_residual": cert.worst_root_residual,
                },
            });
            emit_report(&out, started);
            Ok(if cert.pass { 0 } else { 2 })
        }
    }
}
