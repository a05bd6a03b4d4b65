use std::fmt::Display;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use gct::hwv::{self, CertifyOptions, EvalCertificate, PermTriple, TrialReport};
use gct::invariants::{self, MatmulFormat};
use gct::kronecker::{self, WeightTriple};
use gct::obstructions::{self, ObstructionReport};
use gct::partitions;
use gct::polytopes::{self, GeneratorSet, RationalPoint};
use gct::serial::rational_to_string;
use gct::symgroup::{character, CycleType};
use gct::tableaux::{self, Tableau};
use gct::tensors::{self, GroupElement, RankOneDecomposition};
use gct::Partition;
use serde_json::{json, Value};

use crate::{
    Cli, Command, Decomp, HwvCommand, InvdimCommand, ObstructCommand, Outcome, Output, PolytopeCommand, RunConfig,
    TensorCommand,
};

pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Kron { lambda, mu, nu } => {
            let [l, m, n] = [lambda, mu, nu].map(|s| partition(s));
            let (l, m, n) = (l?, m?, n?);
            check_degree(cfg, l.size())?;
            let g = kronecker::kronecker(&l, &m, &n)?;
            emit(cfg, &g, json!({ "g": g.to_string() }))
        }
        Command::KronPoints { format, max_degree } => {
            let format = triple_usize(format)?;
            check_degree(cfg, *max_degree)?;
            let points = kronecker::kronecker_semigroup_points(format, *max_degree)?;
            let plain = points.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
            emit(cfg, plain, json!({ "format": format, "points": points }))
        }
        Command::Char { lambda, class } => {
            let (l, rho) = (partition(lambda)?, partition(class)?);
            let chi = character(&l, &CycleType(rho))?;
            emit(cfg, &chi, json!({ "chi": chi.to_string() }))
        }
        Command::Kostka { lambda, alpha } => {
            let l = partition(lambda)?;
            let alpha = usize_list(alpha)?;
            if alpha.iter().sum::<usize>() != l.size() {
                bail!("content {alpha:?} does not sum to |λ| = {}", l.size());
            }
            let k = tableaux::weight_space_dim(&l, &alpha);
            emit(cfg, k, json!({ "kostka": k.to_string() }))
        }
        Command::Straighten { tableau } => {
            let t: Tableau = tableau.parse()?;
            let e = tableaux::straighten(&t)?;
            let terms: Vec<Value> = e
                .terms()
                .iter()
                .map(|(t, c)| json!({ "tableau": t.to_string(), "coefficient": c.to_string() }))
                .collect();
            emit(cfg, &e, json!({ "expansion": terms }))
        }
        Command::Staircase { m, d } => {
            let s = partitions::staircase(*m, *d)?;
            emit(cfg, &s, json!({ "staircase": s }))
        }
        Command::Invdim { which } => invdim(cfg, which),
        Command::Barrier { weight, m } => {
            let w = weight_triple(cfg, weight, Some([*m; 3]))?;
            let (k, lifted) = invariants::barrier_lift(&w, *m)?;
            let passes = invariants::in_so_unit(&lifted, m + 1)?;
            if !passes {
                bail!(gct::Error::Defect(format!("lifted weight {lifted} fails the S° test")));
            }
            emit(
                cfg,
                format!("k = {k}\n{lifted}"),
                json!({ "k": k, "bound": invariants::barrier_bound(*m), "lifted": lifted, "in_so": passes }),
            )
        }
        Command::Tensor { which } => tensor(cfg, which),
        Command::Hwv { which } => hwv_cmd(cfg, which),
        Command::Obstruct { which } => obstruct(cfg, which),
        Command::Polytope { which } => polytope(cfg, which),
    }
}

fn invdim(cfg: &RunConfig, which: &InvdimCommand) -> Result<Outcome> {
    match which {
        InvdimCommand::Unit { weight, m, terms } => {
            let w = weight_triple(cfg, weight, Some([*m; 3]))?;
            let ts = invariants::unit_invariant_terms(&w, *m)?;
            let dim: num_bigint::BigInt = ts.iter().map(|t| &t.dim).sum();
            let mut plain = dim.to_string();
            if *terms {
                for t in &ts {
                    plain.push_str(&format!("\nalpha {}  |stab| {}  dim {}", t.alpha, t.stabilizer_order, t.dim));
                }
            }
            let mut out = json!({ "weight": w, "m": m, "dim": dim.to_string() });
            if *terms {
                out["terms"] = serde_json::to_value(&ts)?;
            }
            emit(cfg, plain, out)
        }
        InvdimCommand::Matmul { weight, format } => {
            let fmt: MatmulFormat = format.parse()?;
            let w = weight_triple(cfg, weight, Some(fmt.tensor_format()))?;
            let [a, b, c] = &w.lambda;
            let dim = invariants::matmul_invariant_dim(a, b, c, fmt)?;
            emit(cfg, &dim, json!({ "weight": w, "format": fmt.to_string(), "dim": dim.to_string() }))
        }
    }
}

fn tensor(cfg: &RunConfig, which: &TensorCommand) -> Result<Outcome> {
    match which {
        TensorCommand::Emit { name, out, dense } => {
            let w = tensors::named_tensor(name)?;
            let text = if *dense {
                let [a, b, c] = w.format();
                if (a * b * c) as u64 > cfg.dense_limit {
                    bail!(gct::Error::SizeGuard(format!("{a}x{b}x{c} exceeds the dense limit {}", cfg.dense_limit)));
                }
                let d = tensors::dense_expand(&w)?;
                let mut s = format!("dense {a} {b} {c}\n");
                for chunk in d.data.chunks(c) {
                    s.push_str(&chunk.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
                    s.push('\n');
                }
                s
            } else {
                w.to_string()
            };
            if let Some(path) = out {
                fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
            match cfg.output {
                Output::Plain => print!("{text}"),
                Output::Json => print_json(&json!({
                    "format": w.format(),
                    "rank": w.len(),
                    "digest": w.digest(),
                    "text": text,
                })),
            }
            Ok(Outcome::Done)
        }
    }
}

fn hwv_cmd(cfg: &RunConfig, which: &HwvCommand) -> Result<Outcome> {
    match which {
        HwvCommand::Eval { weight, perms, tensor, g } => {
            let w = load_tensor(tensor)?;
            let lambda = weight_triple(cfg, weight, Some(w.format()))?;
            let pi = perm_triple(lambda.degree(), perms)?;
            let target = match g {
                Some(path) => {
                    let g: GroupElement = serde_json::from_str(&read(path)?)?;
                    tensors::apply_group(&g, &w)?
                }
                None => w,
            };
            let stats = hwv::evaluate_with(&lambda, &pi, &target, Default::default())?;
            emit(
                cfg,
                &stats.value,
                json!({
                    "weight": lambda,
                    "perms": pi,
                    "value": stats.value.to_string(),
                    "terms": stats.terms.to_string(),
                }),
            )
        }
        HwvCommand::Certify { weight, tensor, g_bound } => {
            let w = load_tensor(tensor)?;
            let lambda = weight_triple(cfg, weight, Some(w.format()))?;
            let opts = certify_options(cfg, *g_bound);
            let outcome = hwv::certify_in_s_with_progress(&lambda, &w, &opts, progress)?;
            eprintln!("{} trials, {} terms", outcome.trials_run, outcome.terms);
            match outcome.certificate {
                Some(cert) => {
                    let plain = format!("{}\nvalue {} at π = {}", cert.weight, cert.value, cert.perms);
                    emit(cfg, plain, serde_json::to_value(&cert)?)
                }
                None => {
                    emit(cfg, "inconclusive", json!({ "certificate": null }))?;
                    Ok(Outcome::Inconclusive)
                }
            }
        }
        HwvCommand::Verify { certificate, tensor } => {
            let w = load_tensor(tensor)?;
            let cert: EvalCertificate = serde_json::from_str(&read(certificate)?)?;
            let ok = hwv::verify_certificate(&cert, &w)?;
            emit(cfg, ok, json!({ "valid": ok }))?;
            Ok(if ok { Outcome::Done } else { Outcome::Inconclusive })
        }
    }
}

fn obstruct(cfg: &RunConfig, which: &ObstructCommand) -> Result<Outcome> {
    match which {
        ObstructCommand::Lemma61 { n, decomp, g_bound, out } => {
            let lambda = obstructions::lemma61_weight(*n)?;
            check_degree(cfg, lambda.degree())?;
            let fmt = MatmulFormat::new(*n, *n, *n)?;
            let w = match decomp {
                Decomp::Naive => tensors::matmul_tensor(fmt),
                Decomp::Strassen if *n == 2 => tensors::strassen_decomposition()?,
                Decomp::Strassen => bail!("the 7-term decomposition exists only for n = 2"),
            };
            let m = n * n + 1;
            let opts = certify_options(cfg, Some(*g_bound));
            let report = obstructions::run_obstruction_with_progress(&lambda, &w, m, &opts, progress)?;
            let text = serde_json::to_string_pretty(&report)?;
            if let Some(path) = out {
                fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
            }
            println!("{text}");
            eprint!("{}", summary(&report, &format!("⟨{n},{n},{n}⟩")));
            Ok(if report.is_conclusive() { Outcome::Done } else { Outcome::Inconclusive })
        }
        ObstructCommand::Search { tensor, m, max_degree, g_bound } => {
            let w = load_tensor(tensor)?;
            check_degree(cfg, *max_degree)?;
            let opts = certify_options(cfg, Some(*g_bound));
            let reports = obstructions::search_obstructions(&w, *m, *max_degree, &opts, |r| {
                eprintln!(
                    "{}: not in S°(⟨{}⟩), {}",
                    r.weight,
                    r.target_m,
                    if r.is_conclusive() { "certified" } else { "no certificate" }
                );
            })?;
            let found = reports.iter().any(ObstructionReport::is_conclusive);
            print_json(&json!({ "tensor_digest": w.digest(), "m": m, "reports": reports }));
            Ok(if found { Outcome::Done } else { Outcome::Inconclusive })
        }
    }
}

fn summary(r: &ObstructionReport, tensor: &str) -> String {
    let m = r.target_m;
    let mut s = format!("weight {}\n", r.weight);
    let verdict = if r.not_in_so { "not in" } else { "in" };
    s.push_str(&format!(
        "S° half: dim of H_{m}-invariants = {}, {verdict} S°(⟨{m}⟩)\n",
        r.so_dimension
    ));
    match &r.membership {
        Some(c) => s.push_str(&format!(
            "S half: value {} at π = {}{} after {} trials, {} terms\n",
            c.value,
            c.perms,
            if c.group_element.is_some() { " (at g·w)" } else { "" },
            r.trials_run,
            r.terms
        )),
        None if r.not_in_so => s.push_str(&format!("S half: no certificate in {} trials\n", r.trials_run)),
        None => {}
    }
    match &r.conclusion {
        Some(_) => s.push_str(&format!("conclusion: R̲ > {m}, that is R̲({tensor}) > {m}\n")),
        None => s.push_str("conclusion: inconclusive\n"),
    }
    s
}

fn polytope(cfg: &RunConfig, which: &PolytopeCommand) -> Result<Outcome> {
    match which {
        PolytopeCommand::Member { point, gens } => {
            let p: RationalPoint = serde_json::from_str(&read(point)?).context("parsing the point")?;
            let g: GeneratorSet = serde_json::from_str(&read(gens)?).context("parsing the generators")?;
            let witness = polytopes::hull_membership(&p, &g)?;
            if let Some(c) = &witness {
                if !polytopes::check_witness(&p, &g, c) {
                    bail!(gct::Error::Defect("hull witness does not revalidate".into()));
                }
            }
            let plain = match &witness {
                Some(c) => format!("member\n{}", c.iter().map(rational_to_string).collect::<Vec<_>>().join(",")),
                None => "not a member".into(),
            };
            let coeffs = witness.as_ref().map(|c| c.iter().map(rational_to_string).collect::<Vec<_>>());
            emit(cfg, plain, json!({ "member": witness.is_some(), "witness": coeffs }))
        }
        PolytopeCommand::KronGens { format, max_degree, out } => {
            let format = triple_usize(format)?;
            check_degree(cfg, *max_degree)?;
            let gens = polytopes::kronecker_generators(format, *max_degree)?;
            let text = serde_json::to_string_pretty(&gens)?;
            match out {
                Some(path) => {
                    fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display()))?;
                    eprintln!("{} generators written to {}", gens.len(), path.display());
                }
                None => println!("{text}"),
            }
            Ok(Outcome::Done)
        }
    }
}

fn certify_options(cfg: &RunConfig, g_bound: Option<i64>) -> CertifyOptions {
    CertifyOptions {
        trials: cfg.trials as usize,
        seed: cfg.seed,
        random_g: g_bound,
        ..Default::default()
    }
}

fn progress(t: &TrialReport<'_>) {
    if t.trial.is_multiple_of(10) && !t.at_g {
        eprintln!("trial {}: π = {}", t.trial, t.perms);
    }
}

fn emit(cfg: &RunConfig, plain: impl Display, json: Value) -> Result<Outcome> {
    match cfg.output {
        Output::Plain => println!("{plain}"),
        Output::Json => print_json(&json),
    }
    Ok(Outcome::Done)
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values always serialise"));
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// A named tensor, or a decomposition file.
fn load_tensor(spec: &str) -> Result<RankOneDecomposition> {
    let path = Path::new(spec);
    if path.is_file() {
        return Ok(read(path)?.parse()?);
    }
    tensors::named_tensor(spec).with_context(|| format!("{spec:?} is neither a file nor a known tensor"))
}

fn check_degree(cfg: &RunConfig, d: usize) -> Result<()> {
    if d as u64 > cfg.degree_limit {
        bail!(gct::Error::SizeGuard(format!("degree {d} exceeds --degree-limit {}", cfg.degree_limit)));
    }
    Ok(())
}

fn partition(s: &str) -> Result<Partition> {
    Ok(s.parse()?)
}

fn usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad number {t:?} in {s:?}")))
        .collect()
}

fn triple_usize(s: &str) -> Result<[usize; 3]> {
    let v = usize_list(s)?;
    v.try_into().map_err(|v: Vec<usize>| anyhow::anyhow!("expected three numbers, got {}", v.len()))
}

/// `λ₁;λ₂;λ₃`, placed in `format` or the tightest format.
fn weight_triple(cfg: &RunConfig, s: &str, format: Option<[usize; 3]>) -> Result<WeightTriple> {
    let parts: Vec<&str> = s.split(';').collect();
    let [a, b, c] = parts[..] else {
        bail!("a weight is three partitions split by ';', got {s:?}");
    };
    let (a, b, c) = (partition(a)?, partition(b)?, partition(c)?);
    check_degree(cfg, a.size())?;
    Ok(match format {
        Some(f) => WeightTriple::new(a, b, c, f)?,
        None => WeightTriple::tight(a, b, c)?,
    })
}

fn perm_triple(d: usize, s: &str) -> Result<PermTriple> {
    let parts: Vec<&str> = s.split(';').collect();
    let [a, b, c] = parts[..] else {
        bail!("permutations are three cycle strings split by ';', got {s:?}");
    };
    Ok(PermTriple::parse(d, [a, b, c])?)
}
