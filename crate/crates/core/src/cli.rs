//! Command-line surface: distribution specs in (JSON or catalog
//! shorthand), tables, verdicts and Monte Carlo reports out.

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalog::{self, CatalogEntry};
use crate::classify;
use crate::error::{Error, Result};
use crate::freeconv;
use crate::measures::{self, DistSpec, FiniteMeasure, IdFlavor, LevyMeasure, LevyTriplet};
use crate::rmt;
use crate::scalar::{format_sig, parse_scalar, scalar_from_value, Scalar};

#[derive(Parser)]
#[command(name = "freeconv", about = "Free-probability convolution calculator", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    Freeid,
    Regular,
    Box2div,
    Typew,
    Typeas,
    Wignermix,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McModel {
    Boxtimes,
    Boxplus,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print the moment and free-cumulant table of a spec.
    Show {
        spec: String,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run one of the finite-order classification tests.
    Classify {
        #[arg(value_enum)]
        test: TestKind,
        spec: String,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Tabulate a catalog density on a grid (CSV).
    Density {
        spec: String,
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
    },
    /// Monte Carlo cross-check of a convolution against its series prediction.
    Mc {
        #[arg(value_enum)]
        model: McModel,
        spec_a: String,
        spec_b: String,
        #[arg(long, default_value_t = 512)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        orders: usize,
        #[arg(long, default_value_t = 4.0)]
        threshold: f64,
    },
    /// Normalize a spec: parse, validate, and re-emit its JSON form.
    Convert {
        spec: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Bercovici-Pata image of a classical law.
    Bp {
        spec: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Positive-to-symmetric map via cumulant doubling.
    Symmetrize {
        spec: String,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Symmetric-to-positive inverse map.
    Desymmetrize {
        spec: String,
        #[arg(long)]
        order: Option<usize>,
    },
}

fn default_order() -> usize {
    std::env::var("FREECONV_ORDER")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(16)
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidParams(_)
        | Error::SpecValidation(_)
        | Error::UnsupportedOrder(_)
        | Error::NoDensity
        | Error::NoClosedForm
        | Error::InvalidDimension
        | Error::ModelUnavailable(_)
        | Error::AsymmetricInput
        | Error::NegativeSupport
        | Error::NegativeScale
        | Error::InvalidExponent(_)
        | Error::TooShort => 2,
        _ => 3,
    }
}

/// Parse a spec argument: inline JSON, or catalog shorthand like
/// `wigner(0,1)`, plus the `gue` / `wishart(c)` ensemble aliases.
pub fn parse_spec_arg(arg: &str) -> Result<DistSpec> {
    let arg = arg.trim();
    if arg.starts_with('{') {
        let v: Value = serde_json::from_str(arg)
            .map_err(|e| Error::SpecValidation(format!("bad JSON: {e}")))?;
        return spec_from_json(&v);
    }
    let (name, params) = match arg.split_once('(') {
        Some((name, rest)) => {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::SpecValidation("unbalanced parentheses".into()))?;
            let params: Vec<Scalar> = if inner.trim().is_empty() {
                vec![]
            } else {
                inner.split(',').map(parse_scalar).collect::<Result<_>>()?
            };
            (name.trim(), params)
        }
        None => (arg, vec![]),
    };
    match name {
        "gue" => Ok(DistSpec::catalog(CatalogEntry::Wigner {
            b: Scalar::from_int(0),
            a: Scalar::from_int(1),
        })),
        "wishart" => {
            let c = params
                .first()
                .cloned()
                .ok_or_else(|| Error::SpecValidation("wishart needs an aspect ratio".into()))?;
            Ok(DistSpec::catalog(CatalogEntry::MarchenkoPastur { c }))
        }
        _ => {
            let e = CatalogEntry::from_name(name, &params)?;
            e.validate()?;
            Ok(DistSpec::catalog(e))
        }
    }
}

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key)
        .ok_or_else(|| Error::SpecValidation(format!("missing field \"{key}\"")))
}

fn scalar_field(v: &Value, key: &str) -> Result<Scalar> {
    scalar_from_value(field(v, key)?)
}

pub fn spec_from_json(v: &Value) -> Result<DistSpec> {
    let kind = field(v, "kind")?
        .as_str()
        .ok_or_else(|| Error::SpecValidation("\"kind\" must be a string".into()))?;
    match kind {
        "catalog" => {
            let name = field(v, "name")?
                .as_str()
                .ok_or_else(|| Error::SpecValidation("\"name\" must be a string".into()))?;
            let params: Vec<Scalar> = match v.get("params") {
                Some(Value::Array(items)) => {
                    items.iter().map(scalar_from_value).collect::<Result<_>>()?
                }
                Some(_) => return Err(Error::SpecValidation("\"params\" must be an array".into())),
                None => vec![],
            };
            let e = CatalogEntry::from_name(name, &params)?;
            e.validate()?;
            Ok(DistSpec::catalog(e))
        }
        "moments" => {
            let items = field(v, "values")?
                .as_array()
                .ok_or_else(|| Error::SpecValidation("\"values\" must be an array".into()))?;
            let m: Vec<Scalar> = items.iter().map(scalar_from_value).collect::<Result<_>>()?;
            if m.is_empty() {
                return Err(Error::TooShort);
            }
            Ok(DistSpec::moments(m))
        }
        "symmetric_carrier" => {
            let carrier = spec_from_json(field(v, "carrier")?)?;
            Ok(DistSpec::symmetric_from_carrier(carrier))
        }
        "triplet" => {
            let a = scalar_field(v, "a")?;
            let b = scalar_field(v, "b")?;
            let flavor = match v.get("flavor").and_then(|f| f.as_str()) {
                Some("classical") => IdFlavor::Classical,
                Some("free") | None => IdFlavor::Free,
                Some(other) => {
                    return Err(Error::SpecValidation(format!("unknown flavor \"{other}\"")))
                }
            };
            let nu_val = field(v, "nu")?;
            let nu = if let Some(atoms) = nu_val.get("atoms") {
                let items = atoms
                    .as_array()
                    .ok_or_else(|| Error::SpecValidation("\"atoms\" must be an array".into()))?;
                let mut parsed = Vec::with_capacity(items.len());
                for pair in items {
                    let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                        Error::SpecValidation("each atom must be [location, weight]".into())
                    })?;
                    parsed.push((scalar_from_value(&pair[0])?, scalar_from_value(&pair[1])?));
                }
                LevyMeasure::Discrete(FiniteMeasure::new(parsed)?)
            } else if let Some(density) = nu_val.get("density") {
                let DistSpec::Catalog(entry) = spec_from_json(density)? else {
                    return Err(Error::SpecValidation(
                        "\"density\" must be a catalog spec".into(),
                    ));
                };
                let mass = scalar_field(nu_val, "mass")?;
                LevyMeasure::Density { mass, entry }
            } else {
                return Err(Error::SpecValidation(
                    "\"nu\" needs \"atoms\" or \"density\"".into(),
                ));
            };
            let triplet = LevyTriplet { a, nu, b };
            triplet.validate()?;
            Ok(DistSpec::Triplet { triplet, flavor })
        }
        "ops" => spec_from_ops(v),
        other => Err(Error::SpecValidation(format!("unknown kind \"{other}\""))),
    }
}

fn spec_from_ops(v: &Value) -> Result<DistSpec> {
    let order = default_order();
    if let Some(items) = v.get("boxplus") {
        let specs = op_list(items)?;
        return fold_specs(specs, |a, b| freeconv::boxplus(a, b, order));
    }
    if let Some(items) = v.get("boxtimes") {
        let specs = op_list(items)?;
        return fold_specs(specs, |a, b| freeconv::boxtimes(a, b, 2 * order));
    }
    if let Some(inner) = v.get("reflect") {
        return Ok(spec_from_json(inner)?.reflect());
    }
    if let Some(pp) = v.get("push_power") {
        let of = spec_from_json(field(pp, "of")?)?;
        let p = field(pp, "p")?
            .as_u64()
            .ok_or_else(|| Error::SpecValidation("\"p\" must be a positive integer".into()))?;
        return measures::push_power(&of, p as u32, order);
    }
    if let Some(cp) = v.get("compound_poisson") {
        let c = scalar_field(cp, "c")?;
        let jump = spec_from_json(field(cp, "jump")?)?;
        return freeconv::compound_poisson(&c, &jump, order);
    }
    Err(Error::SpecValidation("\"ops\" needs one of boxplus/boxtimes/reflect/push_power/compound_poisson".into()))
}

fn op_list(items: &Value) -> Result<Vec<DistSpec>> {
    let arr = items
        .as_array()
        .ok_or_else(|| Error::SpecValidation("ops operands must be an array".into()))?;
    if arr.len() < 2 {
        return Err(Error::SpecValidation("ops need at least two operands".into()));
    }
    arr.iter().map(spec_from_json).collect()
}

fn fold_specs<F>(specs: Vec<DistSpec>, op: F) -> Result<DistSpec>
where
    F: Fn(&DistSpec, &DistSpec) -> Result<DistSpec>,
{
    let mut iter = specs.into_iter();
    let mut acc = iter.next().unwrap();
    for next in iter {
        acc = op(&acc, &next)?;
    }
    Ok(acc)
}

pub fn spec_to_json(spec: &DistSpec) -> Value {
    match spec {
        DistSpec::Moments(m) => json!({"kind": "moments", "values": m.as_slice()}),
        DistSpec::Catalog(e) => json!({"kind": "catalog", "name": e.name(), "params": e.params()}),
        DistSpec::SymmetricCarrier(c) => {
            json!({"kind": "symmetric_carrier", "carrier": spec_to_json(c)})
        }
        DistSpec::Triplet { triplet, flavor } => {
            let nu = match &triplet.nu {
                LevyMeasure::Discrete(m) => {
                    let atoms: Vec<Value> =
                        m.atoms().iter().map(|(x, w)| json!([x, w])).collect();
                    json!({"atoms": atoms})
                }
                LevyMeasure::Density { mass, entry } => json!({
                    "mass": mass,
                    "density": {"kind": "catalog", "name": entry.name(), "params": entry.params()},
                }),
            };
            json!({
                "kind": "triplet",
                "a": triplet.a,
                "b": triplet.b,
                "nu": nu,
                "flavor": match flavor { IdFlavor::Free => "free", IdFlavor::Classical => "classical" },
            })
        }
        DistSpec::Reflected(inner) => json!({"kind": "ops", "reflect": spec_to_json(inner)}),
        DistSpec::PushPower { of, p } => {
            json!({"kind": "ops", "push_power": {"of": spec_to_json(of), "p": p}})
        }
    }
}

/// Run a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Show { spec, order, format } => {
            let n = order.unwrap_or_else(default_order);
            let mu = parse_spec_arg(&spec)?;
            let m = measures::moments_of(&mu, n)?;
            let kappa = freeconv::free_cumulants_of(&mu, n)?;
            match format {
                Format::Json => {
                    let out = json!({
                        "order": n,
                        "moments": m.as_slice(),
                        "free_cumulants": kappa,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).unwrap());
                }
                Format::Csv => {
                    println!("n,moment,free_cumulant");
                    for k in 1..=n {
                        println!("{k},{},{}", m.get(k), kappa[k - 1]);
                    }
                }
            }
            Ok(0)
        }
        Command::Classify { test, spec, order, grid } => {
            let n = order.unwrap_or_else(default_order);
            let mu = parse_spec_arg(&spec)?;
            let verdict = match test {
                TestKind::Freeid => classify::free_id_test(&mu, n)?,
                TestKind::Regular => classify::free_regular_test(&mu, n)?,
                TestKind::Box2div => classify::box2div_test(&mu, n)?,
                TestKind::Typew => classify::type_w_test(&mu, n)?,
                TestKind::Typeas => classify::type_as_test(&mu, n)?,
                TestKind::Wignermix => classify::wigner_mixture_test(&mu, n, grid)?,
            };
            println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
            Ok(if verdict.is_rejected() { 1 } else { 0 })
        }
        Command::Density { spec, grid } => {
            let mu = parse_spec_arg(&spec)?;
            let DistSpec::Catalog(e) = &mu else {
                return Err(Error::NoDensity);
            };
            let (a, b, steps) = parse_grid(&grid)?;
            let atom = catalog::atom_at_zero(e);
            if atom > 0.0 {
                println!("# atom at 0: {}", format_sig(atom));
            }
            println!("x,density");
            for i in 0..=steps {
                let x = a + (b - a) * i as f64 / steps as f64;
                let d = catalog::catalog_density(e, x)?;
                println!("{},{}", format_sig(x), format_sig(d));
            }
            Ok(0)
        }
        Command::Mc { model, spec_a, spec_b, dim, trials, seed, orders, threshold } => {
            let a = parse_spec_arg(&spec_a)?;
            let b = parse_spec_arg(&spec_b)?;
            let report = match model {
                McModel::Boxtimes => rmt::mc_boxtimes(&a, &b, dim, trials, seed, orders)?,
                McModel::Boxplus => rmt::mc_boxplus(&a, &b, dim, trials, seed, orders)?,
            };
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
            Ok(if report.max_abs_z() > threshold { 1 } else { 0 })
        }
        Command::Convert { spec, order } => {
            let mu = parse_spec_arg(&spec)?;
            // validate that the requested order is actually computable
            let n = order.unwrap_or_else(default_order);
            measures::moments_of(&mu, n)?;
            println!("{}", serde_json::to_string_pretty(&spec_to_json(&mu)).unwrap());
            Ok(0)
        }
        Command::Bp { spec, order } => {
            let n = order.unwrap_or_else(default_order);
            let mu = parse_spec_arg(&spec)?;
            let img = freeconv::bp_lambda(&mu, n)?;
            println!("{}", serde_json::to_string_pretty(&spec_to_json(&img)).unwrap());
            Ok(0)
        }
        Command::Symmetrize { spec, order } => {
            let n = order.unwrap_or_else(default_order);
            let sigma = parse_spec_arg(&spec)?;
            let mu = freeconv::main1_pos_to_sym(&sigma, n)?;
            println!("{}", serde_json::to_string_pretty(&spec_to_json(&mu)).unwrap());
            Ok(0)
        }
        Command::Desymmetrize { spec, order } => {
            let n = order.unwrap_or_else(default_order);
            let mu = parse_spec_arg(&spec)?;
            let sigma = freeconv::main1_sym_to_pos(&mu, n)?;
            println!("{}", serde_json::to_string_pretty(&spec_to_json(&sigma)).unwrap());
            Ok(0)
        }
    }
}

fn parse_grid(grid: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = grid.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::SpecValidation("grid must be a:b:steps".into()));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|_| Error::SpecValidation("bad grid start".into()))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|_| Error::SpecValidation("bad grid end".into()))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| Error::SpecValidation("bad grid step count".into()))?;
    if !(b > a) || steps == 0 {
        return Err(Error::SpecValidation("grid must satisfy a < b, steps > 0".into()));
    }
    Ok((a, b, steps))
}
