use std::fmt::Write as _;

use negbeta::admissibility::CheckStatus;
use negbeta::beta::parse_rational;
use negbeta::interval::to_decimal;
use negbeta::lapcount::lap_number_table;
use negbeta::solver::SolveResult;
use negbeta::{
    cylinders, gamma_base, is_admissible_for_base, is_admissible_prefix, left_endpoint,
    order_compare, solve_beta, solve_beta_prefix, u_prefix, AdmissibilityBounds, BetaValue, Error,
    EvPeriodicSeq, PointValue, SequenceInput, SolveOptions, ValidateOptions, VerdictStatus,
};
use serde_json::{json, Value};

use crate::config::OutputFormat;
use crate::Settings;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_LIMIT: u8 = 2;
pub const EXIT_NO: u8 = 3;
pub const EXIT_UNSETTLED: u8 = 4;

/// What a command prints, and its exit code.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: u8,
    pub error: bool,
    pub format: Option<OutputFormat>,
}

impl Outcome {
    fn new(s: &Settings, text: String, json: Value, code: u8) -> Self {
        Outcome {
            text,
            json,
            code,
            error: false,
            format: Some(s.config.output),
        }
    }

    fn failure(message: String, code: u8) -> Self {
        Outcome {
            json: json!({ "error": message }),
            text: format!("error: {message}"),
            code,
            error: true,
            format: None,
        }
    }

    pub fn usage(message: String) -> Self {
        Outcome::failure(message, EXIT_INPUT)
    }

    pub fn print(&self, format: OutputFormat) {
        let body = match format {
            OutputFormat::Text => self.text.trim_end().to_string(),
            OutputFormat::Json => {
                serde_json::to_string_pretty(&self.json).expect("JSON values serialize")
            }
        };
        if self.error {
            eprintln!("{body}");
        } else {
            println!("{body}");
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::Malformed(_)
        | Error::Domain(_)
        | Error::Unsupported(_)
        | Error::InvalidInput(_) => EXIT_INPUT,
        Error::Precision { .. }
        | Error::Resource(_)
        | Error::DepthExhausted { .. }
        | Error::DeadlineExceeded => EXIT_LIMIT,
        Error::InvariantViolation(_) | Error::Inconsistent(_) => EXIT_UNSETTLED,
    }
}

impl From<Error> for Outcome {
    fn from(e: Error) -> Self {
        Outcome::failure(e.to_string(), error_code(&e))
    }
}

type CmdResult = Result<Outcome, Outcome>;

fn solve_options(s: &Settings) -> SolveOptions {
    SolveOptions {
        tol: s.config.tol.clone(),
        max_depth: s.config.max_depth,
        precision_bits: s.config.precision_bits,
        u_depth: s.config.u_depth,
        deadline: s.deadline,
    }
}

fn parse_beta(spec: &str) -> Result<BetaValue, Outcome> {
    Ok(spec.parse::<BetaValue>()?)
}

fn parse_point(spec: &str) -> Result<PointValue, Outcome> {
    let body = spec
        .strip_prefix("rat:")
        .or_else(|| spec.strip_prefix("dec:"))
        .unwrap_or(spec);
    Ok(PointValue::rational(parse_rational(body)?))
}

fn parse_periodic(text: &str) -> Result<EvPeriodicSeq, Outcome> {
    match text.parse::<SequenceInput>()? {
        SequenceInput::Periodic(s) => Ok(s),
        SequenceInput::Finite(_) => Err(Outcome::usage(format!(
            "{text:?} has no period; write the repeating part in parentheses"
        ))),
    }
}

fn digits_json(d: &[u64]) -> Value {
    json!(d)
}

/// Bits needed to print `decimals` fractional digits.
fn display_bits(decimals: usize) -> u32 {
    (decimals as u32).saturating_mul(4).saturating_add(8)
}

/// Midpoint of the enclosure, or the exact value.
fn beta_decimal(b: &BetaValue, decimals: usize) -> String {
    match b.exact_rational() {
        Some(q) if q.is_integer() => q.to_string(),
        _ => to_decimal(
            &b.refined(display_bits(decimals))
                .enclosure_interval()
                .midpoint(),
            decimals,
        ),
    }
}

pub fn expand(s: &Settings, beta: &str, x: Option<&str>, n: usize) -> CmdResult {
    let beta = parse_beta(beta)?;
    let x = match x {
        Some(x) => parse_point(x)?,
        None => left_endpoint(&beta)?,
    };
    let orbit = negbeta::dynamics::expand_orbit(&beta, &x, n)?;
    let points: Vec<String> = orbit
        .points
        .iter()
        .map(|p| p.to_decimal(s.decimals))
        .collect();
    let mut text = format!("{}\n", orbit.digits);
    let last = points.last().expect("orbit has its starting point");
    writeln!(text, "T^{n}(x) = {last}").unwrap();
    let json = json!({
        "beta": beta.to_string(),
        "x": points[0],
        "digits": digits_json(orbit.digits.as_slice()),
        "points": points,
    });
    Ok(Outcome::new(s, text, json, EXIT_OK))
}

fn solve_report(s: &Settings, input: &str, r: &SolveResult) -> (String, Value) {
    // exact roots are sharpened for display; prefix enclosures stay as found
    let summary = r.beta.refined(display_bits(s.decimals)).summary(s.decimals);
    let mut text = format!("beta = {}\n", beta_decimal(&r.beta, s.decimals));
    writeln!(
        text,
        "enclosure = [{}, {}]",
        summary.beta_lo, summary.beta_hi
    )
    .unwrap();
    if let Some(p) = &summary.poly {
        writeln!(text, "polynomial = {}", p.join(",")).unwrap();
    }
    writeln!(text, "method = {}", r.method).unwrap();
    let json = json!({
        "sequence": input,
        "beta": beta_decimal(&r.beta, s.decimals),
        "beta_lo": summary.beta_lo,
        "beta_hi": summary.beta_hi,
        "exact": summary.exact,
        "poly": summary.poly,
        "method": r.method,
        "depth_used": r.depth_used,
    });
    (text, json)
}

pub fn solve(s: &Settings, sequence: &str) -> CmdResult {
    let input = sequence.parse::<SequenceInput>()?;
    let opts = solve_options(s);
    let r = match &input {
        SequenceInput::Periodic(a) => solve_beta(a, &opts)?,
        SequenceInput::Finite(w) => solve_beta_prefix(w.as_slice(), &opts)?,
    };
    let (text, json) = solve_report(s, &input.to_string(), &r);
    Ok(Outcome::new(s, text, json, EXIT_OK))
}

pub fn validate(s: &Settings, sequence: &str) -> CmdResult {
    let a = parse_periodic(sequence)?;
    let opts = ValidateOptions {
        precision_bits: s.config.precision_bits,
        u_depth: s.config.u_depth,
        solve: solve_options(s),
    };
    let v = negbeta::validate(&a, &opts)?;
    let code = match v.status {
        VerdictStatus::Valid => EXIT_OK,
        VerdictStatus::Invalid => EXIT_NO,
        VerdictStatus::Indeterminate | VerdictStatus::Suspect => EXIT_UNSETTLED,
    };
    let mut text = format!("{}\n", v.status);
    let witness = |w: Option<usize>| w.map(|k| format!(" (k = {k})")).unwrap_or_default();
    writeln!(text, "sequence = {}", v.sequence).unwrap();
    writeln!(
        text,
        "shift: {}{}",
        if v.cond_shift.pass { "PASS" } else { "FAIL" },
        witness(v.cond_shift.witness)
    )
    .unwrap();
    let status = |c: CheckStatus| match c {
        CheckStatus::Pass => "PASS",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Undecided => "UNDECIDED",
    };
    writeln!(text, "above u: {}", status(v.cond_u.status)).unwrap();
    writeln!(
        text,
        "blocks 1: {}{}",
        status(v.cond_ak1.status),
        witness(v.cond_ak1.witness)
    )
    .unwrap();
    writeln!(
        text,
        "blocks 2: {}{}",
        status(v.cond_ak2.status),
        witness(v.cond_ak2.witness)
    )
    .unwrap();
    if let Some(b) = &v.beta_value {
        writeln!(text, "beta = {}", beta_decimal(b, s.decimals)).unwrap();
    }
    if let Some(k) = v.tail_hit {
        writeln!(text, "tail at k = {k} sums to 1/(beta+1)").unwrap();
    }
    if let Some(r) = &v.reason {
        writeln!(text, "reason: {r}").unwrap();
    }
    let json = serde_json::to_value(&v).expect("verdicts serialize");
    Ok(Outcome::new(s, text, json, code))
}

pub fn admissible(s: &Settings, beta: &str, word: &str) -> CmdResult {
    let beta = parse_beta(beta)?;
    let input = word.parse::<SequenceInput>()?;
    let check = match &input {
        SequenceInput::Periodic(b) => is_admissible_for_base(b, &beta, s.config.max_depth)?,
        SequenceInput::Finite(w) => {
            let bounds = AdmissibilityBounds::for_base(&beta, w.len())?;
            is_admissible_prefix(w.as_slice(), &bounds)?
        }
    };
    let mut text = format!("{}\n", check.pass);
    if let Some(k) = check.witness {
        writeln!(text, "fails at k = {k}").unwrap();
    }
    let json = json!({
        "beta": beta.to_string(),
        "word": input.to_string(),
        "admissible": check.pass,
        "witness": check.witness,
    });
    Ok(Outcome::new(
        s,
        text,
        json,
        if check.pass { EXIT_OK } else { EXIT_NO },
    ))
}

pub fn compare(s: &Settings, a: &str, b: &str) -> CmdResult {
    let (a, b) = (parse_periodic(a)?, parse_periodic(b)?);
    let c = order_compare(&a, &b);
    let text = format!("{}\n", c.statement);
    let mut json = serde_json::to_value(&c).expect("comparisons serialize");
    json["seq_a"] = json!(a.to_string());
    json["seq_b"] = json!(b.to_string());
    Ok(Outcome::new(s, text, json, EXIT_OK))
}

pub fn u_seq(s: &Settings, n: usize) -> CmdResult {
    if n > negbeta::morphism::PHI_SIZE_CAP {
        return Err(Error::Resource(format!(
            "at most {} digits of u are produced",
            negbeta::morphism::PHI_SIZE_CAP
        ))
        .into());
    }
    let u = u_prefix(n);
    let text = format!("{u}\n");
    let json = json!({ "text": u.to_string(), "digits": digits_json(u.as_slice()) });
    Ok(Outcome::new(s, text, json, EXIT_OK))
}

pub fn laps(s: &Settings, beta: &str, n: usize, list: bool) -> CmdResult {
    let beta = parse_beta(beta)?;
    let table = lap_number_table(&beta, n)?;
    let &(l, lp) = table
        .last()
        .ok_or_else(|| Outcome::usage("cylinder length must be at least 1".into()))?;
    let entropy = (n >= 2).then(|| (lp as f64).ln() / n as f64);
    let mut text = format!("L = {l}\nL' = {lp}\n");
    if let Some(e) = entropy {
        writeln!(text, "entropy estimate = {e:.6}").unwrap();
    }
    let mut json = json!({ "L": l, "L_prime": lp, "entropy_estimate": entropy });
    if list {
        let cs = cylinders(&beta, n)?;
        let summaries: Vec<_> = cs.iter().map(|c| c.summary(s.decimals)).collect();
        for c in &summaries {
            writeln!(
                text,
                "{}  {}{}, {}{}  {:?}",
                c.label,
                if c.lo_closed { '[' } else { '(' },
                c.lo,
                c.hi,
                if c.hi_closed { ']' } else { ')' },
                c.status
            )
            .unwrap();
        }
        json["cylinders"] = serde_json::to_value(&summaries).expect("cylinders serialize");
    }
    Ok(Outcome::new(s, text, json, EXIT_OK))
}

pub fn gamma(s: &Settings, k: u32) -> CmdResult {
    let bits = (s.decimals as u32 * 4).max(s.config.precision_bits).max(8);
    let g = gamma_base(k, bits)?;
    let summary = g.value.summary(s.decimals);
    let text = format!(
        "g_{k} = {}\ngamma_{k} = {}\npolynomial = x^{} - x - 1\n",
        g.g,
        beta_decimal(&g.value, s.decimals),
        g.g + 1
    );
    let json = json!({
        "k": k,
        "g": g.g,
        "beta": beta_decimal(&g.value, s.decimals),
        "beta_lo": summary.beta_lo,
        "beta_hi": summary.beta_hi,
        "poly": summary.poly,
    });
    Ok(Outcome::new(s, text, json, EXIT_OK))
}
