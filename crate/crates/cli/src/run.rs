use std::fs;
use std::path::Path;
use std::time::Instant;

use eddeg_core::critical::{CountField, CountProtocol, EdCertificate, LinearChoice, SECOND_PRIME};
use eddeg_core::euler::{euler_row, milnor_number, model_fiber_chi, to_tsv, EulerRow, MilnorModel, MilnorTag, PointCount};
use eddeg_core::field::prev_prime;
use eddeg_core::multiview::{conjecture_value, ed_degree_multiview, hl_bound, MultiviewOptions};
use eddeg_core::{
    conormal_ideal, ed_degree, groebner_basis, ideal_dimension, linear_critical_count, parse_poly, parse_variety,
    Error, GroebnerConfig, PrimeField, Rational, RationalField, Ring, VarietyPresentation, DEFAULT_PRIME,
};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::args::{parse_range, Cli, Command, Format, GlobalOpts};

#[derive(Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

/// Everything printed on success.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<EulerRow>>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
    pub trials: Vec<eddeg_core::error::TrialRecord>,
    pub agreed: bool,
    pub timings: Timings,
    pub seed: u64,
    pub modulus: Option<u32>,
    pub primes: Vec<u32>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Core(Error::NonGeneric { .. }) | Failure::Core(Error::InfiniteCriticalLocus { .. }) => 2,
            Failure::Core(Error::ResourceLimit(_)) => 3,
            Failure::Core(_) => 1,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
        }
    }
}

pub fn protocol(opts: &GlobalOpts) -> Result<CountProtocol, Failure> {
    let primes = match opts.modulus {
        Some(p) => {
            let first = PrimeField::new(p)?.prime();
            let mut primes = vec![first];
            if let Some(q) = prev_prime(p).filter(|&q| q > 2) {
                primes.push(q as u32);
            }
            primes
        }
        None => vec![DEFAULT_PRIME, SECOND_PRIME],
    };
    let protocol = CountProtocol {
        trials: opts.trials,
        primes,
        seed: opts.seed,
        field: if opts.rational {
            CountField::Rational
        } else {
            CountField::Prime
        },
        groebner: GroebnerConfig::default(),
        parallel: !opts.sequential,
    };
    protocol.validate()?;
    Ok(protocol)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_variety(path: &Path) -> Result<VarietyPresentation<RationalField>, Failure> {
    parse_variety(&read(path)?).map_err(|e| match e {
        Error::Syntax { .. } | Error::UnknownVariable(_) | Error::InvalidPresentation(_) => {
            Failure::Usage(format!("{}: {e}", path.display()))
        }
        other => Failure::Core(other),
    })
}

fn parse_rationals(items: &[String]) -> Result<Vec<Rational>, Failure> {
    items
        .iter()
        .map(|s| s.parse::<Rational>().map_err(|e| Failure::Usage(e.to_string())))
        .collect()
}

struct Outcome {
    inputs: Map<String, Value>,
    count: Option<Value>,
    table: Option<Vec<EulerRow>>,
    details: Map<String, Value>,
    certificate: Option<EdCertificate>,
}

impl Outcome {
    fn new(inputs: Value) -> Self {
        Outcome {
            inputs: match inputs {
                Value::Object(m) => m,
                _ => Map::new(),
            },
            count: None,
            table: None,
            details: Map::new(),
            certificate: None,
        }
    }

    fn certified(mut self, cert: EdCertificate) -> Self {
        self.count = cert.count.map(Value::from);
        self.certificate = Some(cert);
        self
    }
}

fn execute(cli: &Cli, protocol: &CountProtocol) -> Result<Outcome, Failure> {
    let opts = &cli.global;
    match &cli.command {
        Command::Implicit { file, check_codim } => {
            let v = load_variety(file)?;
            let VarietyPresentation::Implicit(iv) = &v else {
                return Err(Failure::Usage(format!("{} is a parametric file", file.display())));
            };
            let mut out = Outcome::new(json!({ "file": file.display().to_string(), "codim": iv.codim() }));
            if *check_codim {
                let ok = iv.check_codim(&protocol.groebner)?;
                out.details.insert("codim_consistent".into(), ok.into());
                if !ok {
                    return Err(Failure::Usage(format!("stated codimension {} does not match the ideal", iv.codim())));
                }
            }
            Ok(out.certified(ed_degree(&v, protocol)?))
        }
        Command::Parametric { file } => {
            let v = load_variety(file)?;
            if !matches!(v, VarietyPresentation::Parametric(_)) {
                return Err(Failure::Usage(format!("{} is an implicit file", file.display())));
            }
            let out = Outcome::new(json!({ "file": file.display().to_string() }));
            Ok(out.certified(ed_degree(&v, protocol)?))
        }
        Command::LinearCount { file, coefficients } => {
            let VarietyPresentation::Implicit(iv) = load_variety(file)? else {
                return Err(Failure::Usage(format!("{} is a parametric file", file.display())));
            };
            let choice = match coefficients {
                Some(c) => LinearChoice::Fixed(parse_rationals(c)?),
                None => LinearChoice::Random,
            };
            let out = Outcome::new(json!({
                "file": file.display().to_string(),
                "coefficients": coefficients.clone().map(Value::from).unwrap_or_else(|| "random".into()),
            }));
            Ok(out.certified(linear_critical_count(&iv, &choice, protocol)?))
        }
        Command::Conormal { file } => {
            let VarietyPresentation::Implicit(iv) = load_variety(file)? else {
                return Err(Failure::Usage(format!("{} is a parametric file", file.display())));
            };
            let ideal = conormal_ideal(&iv)?;
            let basis = groebner_basis(&ideal, opts.order, &protocol.groebner)?;
            let mut out = Outcome::new(json!({ "file": file.display().to_string(), "order": opts.order.to_string() }));
            let strings = |ps: &[eddeg_core::Polynomial<RationalField>]| -> Value {
                ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().into()
            };
            out.details.insert("variables".into(), ideal.ring().vars().to_vec().into());
            out.details.insert("generators".into(), strings(ideal.generators()));
            out.details.insert("basis".into(), strings(basis.elements()));
            out.details.insert("dimension".into(), ideal_dimension(&basis)?.into());
            Ok(out)
        }
        Command::Multiview {
            n,
            long,
            verify_second_chart,
        } => {
            if *n < 2 {
                return Err(Failure::Usage("multiview needs at least 2 cameras".into()));
            }
            if *n >= 4 && !long {
                return Err(Failure::Usage(format!("n = {n} is long running; pass --long to run it")));
            }
            let mut out = Outcome::new(json!({ "n": n, "verify_second_chart": verify_second_chart }));
            out.details.insert("conjecture_value".into(), conjecture_value(*n as u64)?.into());
            out.details.insert("hl_bound".into(), hl_bound(*n as u64).into());
            let options = MultiviewOptions {
                verify_second_chart: *verify_second_chart,
            };
            Ok(out.certified(ed_degree_multiview(*n, protocol, options)?))
        }
        Command::Euler { symbolic, n, range } => {
            let points: Vec<PointCount> = if *symbolic {
                vec![PointCount::Symbolic]
            } else if let Some(n) = n {
                vec![PointCount::Concrete(*n)]
            } else {
                let (a, b) = parse_range(range).map_err(Failure::Usage)?;
                (a..=b).map(PointCount::Concrete).collect()
            };
            if points.iter().any(|p| matches!(p, PointCount::Concrete(k) if *k < 2)) {
                return Err(Failure::Usage("the Euler chain needs n >= 2".into()));
            }
            let rows = points.iter().map(|&p| euler_row(p)).collect::<Result<Vec<_>, _>>()?;
            let inputs = if *symbolic {
                json!({ "n": "symbolic" })
            } else {
                json!({ "n": points.iter().map(|p| p.to_string()).collect::<Vec<_>>() })
            };
            let mut out = Outcome::new(inputs);
            if rows.len() == 1 {
                out.count = Some(match &rows[0] {
                    EulerRow::Concrete { ed_degree, .. } => Value::from(*ed_degree),
                    EulerRow::Symbolic { ed_degree, .. } => Value::from(ed_degree.clone()),
                });
            }
            out.table = Some(rows);
            Ok(out)
        }
        Command::Milnor {
            equation,
            vars,
            point,
            model,
        } => {
            if let Some(tag) = model {
                let tag: MilnorTag = tag.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
                let model = MilnorModel::new(tag);
                let mut out = Outcome::new(json!({ "model": tag.to_string() }));
                out.details.insert("equation".into(), model.equation.to_string().into());
                out.count = Some(model_fiber_chi(&model)?.into());
                return Ok(out);
            }
            let equation = equation.as_deref().unwrap_or_default();
            let ring = Ring::new(vars, RationalField, opts.order);
            let f = parse_poly(equation, &ring).map_err(|e| Failure::Usage(format!("equation: {e}")))?;
            let point = match point {
                Some(p) => parse_rationals(p)?,
                None => vec![Rational::from(0); vars.len()],
            };
            let out_point: Vec<String> = point.iter().map(|q| q.to_string()).collect();
            let mut out = Outcome::new(json!({ "equation": equation, "vars": vars, "point": out_point }));
            out.count = Some(milnor_number(&f, &point, &protocol.groebner)?.into());
            Ok(out)
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, Failure> {
    let start = Instant::now();
    let protocol = protocol(&cli.global)?;
    let outcome = execute(cli, &protocol)?;
    let (trials, agreed) = match outcome.certificate {
        Some(c) => (c.trials, c.agreed),
        None => (Vec::new(), true),
    };
    let primes = match protocol.field {
        CountField::Prime => protocol.primes.clone(),
        CountField::Rational => Vec::new(),
    };
    Ok(Report {
        command: cli.command.name().to_string(),
        inputs: outcome.inputs,
        count: outcome.count,
        table: outcome.table,
        details: outcome.details,
        trials,
        agreed,
        timings: Timings {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        },
        seed: cli.global.seed,
        modulus: primes.first().copied(),
        primes,
    })
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Tsv => {
            if let Some(rows) = &report.table {
                return to_tsv(rows);
            }
            let mut out = String::new();
            out.push_str(&format!("command\t{}\n", report.command));
            for (k, v) in &report.inputs {
                out.push_str(&format!("input.{k}\t{}\n", plain(v)));
            }
            if let Some(c) = &report.count {
                out.push_str(&format!("count\t{}\n", plain(c)));
            }
            for (k, v) in &report.details {
                out.push_str(&format!("{k}\t{}\n", plain(v)));
            }
            out.push_str(&format!("agreed\t{}\n", report.agreed));
            out.push_str(&format!("seed\t{}\n", report.seed));
            if let Some(m) = report.modulus {
                out.push_str(&format!("modulus\t{m}\n"));
            }
            for (k, t) in report.trials.iter().enumerate() {
                let prime = t.prime.map_or("QQ".to_string(), |p| p.to_string());
                out.push_str(&format!("trial.{k}\t{prime}\t{}\t{}\n", t.seed, t.count));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn report(argv: &[&str]) -> Result<Report, Failure> {
        run(&Cli::try_parse_from(argv).unwrap())
    }

    #[test]
    fn modulus_policy() {
        let cli = Cli::try_parse_from(["eddeg", "--modulus", "32003", "euler", "--n", "2"]).unwrap();
        assert_eq!(protocol(&cli.global).unwrap().primes, vec![32003, 31991]);
        let bad = Cli::try_parse_from(["eddeg", "--modulus", "32004", "euler", "--n", "2"]).unwrap();
        assert_eq!(protocol(&bad.global).unwrap_err().exit_code(), 1);
        let few = Cli::try_parse_from(["eddeg", "--trials", "2", "euler", "--n", "2"]).unwrap();
        assert!(protocol(&few.global).is_err());
    }

    #[test]
    fn euler_single_and_symbolic() {
        let r = report(&["eddeg", "euler", "--n", "3"]).unwrap();
        assert_eq!(r.count, Some(Value::from(47)));
        let r = report(&["eddeg", "euler", "--symbolic"]).unwrap();
        assert_eq!(r.count, Some(Value::from("9/2*n^3 - 21/2*n^2 + 8*n - 4")));
    }

    #[test]
    fn milnor_commands() {
        let r = report(&["eddeg", "milnor", "x^3 + y^3 + z^3"]).unwrap();
        assert_eq!(r.count, Some(Value::from(8)));
        let r = report(&["eddeg", "milnor", "--model", "triple"]).unwrap();
        assert_eq!(r.count, Some(Value::from(15)));
        assert_eq!(report(&["eddeg", "milnor", "x +"]).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn long_flag_required() {
        assert_eq!(report(&["eddeg", "multiview", "4"]).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::Core(Error::NonGeneric { trials: vec![] }).exit_code(), 2);
        assert_eq!(Failure::Core(Error::ResourceLimit("x".into())).exit_code(), 3);
        assert_eq!(Failure::Usage("x".into()).exit_code(), 1);
    }
}
