//! The `pg` command line, callable in-process through [`run`].
//!
//! Exit codes: 0 on success, 2 for parse and usage errors, 3 for domain
//! errors such as a zero weight or an element outside the required subspace.

use std::ffi::OsString;
use std::io::{self, Read, Write};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use paragrassmann::coherent::sb_transform;
use paragrassmann::expr::{self, parse_q_mode, ParseError};
use paragrassmann::form::{inner_closed, negative_norm_witness, norm_squared};
use paragrassmann::kernel::{kernel_ah, kernel_bh, kernel_pg_from};
use paragrassmann::render::{self, Format};
use paragrassmann::{GramMatrix, PgElement, PgError, Ring, Scalar, TensorElement, WeightSpec};

#[derive(Parser)]
#[command(name = "pg", version, about = "Exact algebra in the paragrassmann algebra PG_{l,q}")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Nilpotency order: th^l = thb^l = 0.
    #[arg(long = "l", global = true, default_value_t = 2)]
    l: usize,
    /// `symbolic`, `real`, or a nonzero constant such as `1/2` or `1/2+1/3 i`.
    #[arg(long, global = true, default_value = "symbolic")]
    q: String,
    /// `symbolic`, `preset:ones|factorial|qfactorial`, or `w0,w1,...`.
    #[arg(long, global = true, default_value = "symbolic")]
    weights: String,
    #[arg(long, global = true, env = "PG_FORMAT", default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Product of the expressions, left to right.
    Mul {
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// The conjugation f*.
    Star { expr: String },
    /// Berezin integral (coefficient of th^{l-1} thb^{l-1}).
    Integrate { expr: String },
    /// <f, g>_w.
    Inner { f: String, g: String },
    /// <f, f>_w.
    Norm2 { expr: String },
    /// Reproducing kernel of a subspace or of the whole algebra.
    Kernel {
        #[arg(long, value_enum, default_value_t = Space::Bh)]
        space: Space,
        /// Invert the Gram matrix without using its block structure.
        #[arg(long)]
        dense_oracle: bool,
    },
    /// Gram matrix of the anti-Wick basis.
    Gram {
        #[arg(long)]
        det: bool,
        #[arg(long)]
        dense_oracle: bool,
    },
    /// Segal-Bargmann transform of coordinates psi.
    Sbt {
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
    },
    /// An element of negative square norm.
    WitnessNegativeNorm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Bh,
    Ah,
    Pg,
}

enum Failure {
    Parse { input: String, err: ParseError },
    Domain(PgError),
    Io(io::Error),
}

impl From<PgError> for Failure {
    fn from(e: PgError) -> Self {
        Failure::Domain(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

struct Session<'a> {
    ring: Ring,
    format: Format,
    reader: &'a mut dyn Read,
    stdin: Option<Vec<String>>,
    warnings: Vec<String>,
}

impl<'a> Session<'a> {
    fn new(g: &Global, reader: &'a mut dyn Read) -> Result<Self, Failure> {
        let q = parse_q_mode(&g.q).map_err(|e| match e {
            PgError::Parse(err) => Failure::Parse { input: g.q.clone(), err },
            e => Failure::Domain(e),
        })?;
        let weights = WeightSpec::parse(&g.weights, g.l, &q)?;
        Ok(Session { ring: Ring::new(q, weights)?, format: g.format, reader, stdin: None, warnings: Vec::new() })
    }

    /// Expression text, with `-` standing for the next line of stdin (all of
    /// stdin when only one argument is `-`).
    fn source(&mut self, arg: &str, dashes: usize) -> Result<String, Failure> {
        if arg != "-" {
            return Ok(arg.to_owned());
        }
        if self.stdin.is_none() {
            let mut buf = String::new();
            self.reader.read_to_string(&mut buf)?;
            let lines = if dashes == 1 {
                vec![buf.trim().to_owned()]
            } else {
                buf.lines().map(str::trim).filter(|s| !s.is_empty()).map(str::to_owned).collect()
            };
            self.stdin = Some(lines.into_iter().rev().collect());
        }
        self.stdin
            .as_mut()
            .and_then(Vec::pop)
            .ok_or_else(|| Failure::Domain(PgError::Unsupported("stdin ran out of expressions".into())))
    }

    fn eval_all(&mut self, args: &[&str]) -> Result<Vec<PgElement>, Failure> {
        let dashes = args.iter().filter(|a| **a == "-").count();
        let mut out = Vec::new();
        for a in args {
            let text = self.source(a, dashes)?;
            let ast = expr::parse(&text).map_err(|err| Failure::Parse { input: text.clone(), err })?;
            self.warnings.extend(expr::warnings(&ast, self.ring.l()));
            out.push(expr::eval_ast(&ast, &self.ring)?);
        }
        Ok(out)
    }

    fn element(&self, f: &PgElement) -> String {
        match self.format {
            Format::Text => render::element_text(f),
            Format::Latex => render::element_latex(f),
            Format::Json => render::element_json(f).to_string(),
        }
    }

    fn scalar(&self, s: &Scalar) -> String {
        match self.format {
            Format::Text => render::scalar_text(s),
            Format::Latex => render::scalar_latex(s),
            Format::Json => render::scalar_json(s).to_string(),
        }
    }

    fn tensor(&self, t: &TensorElement) -> String {
        match self.format {
            Format::Text => render::tensor_text(t),
            Format::Latex => render::tensor_latex(t),
            Format::Json => render::tensor_json(t).to_string(),
        }
    }
}

fn signed(text: String) -> String {
    if text.starts_with('-') { text } else { format!("+{text}") }
}

fn execute(cli: Cli, s: &mut Session) -> Result<String, Failure> {
    let ring = s.ring.clone();
    Ok(match cli.command {
        Command::Mul { exprs } => {
            let args: Vec<&str> = exprs.iter().map(String::as_str).collect();
            let mut acc = PgElement::one(&ring);
            for f in s.eval_all(&args)? {
                acc = acc.mul(&f)?;
            }
            s.element(&acc)
        }
        Command::Star { expr } => {
            let f = s.eval_all(&[&expr])?.remove(0);
            s.element(&f.star())
        }
        Command::Integrate { expr } => {
            let f = s.eval_all(&[&expr])?.remove(0);
            s.scalar(&f.berezin_integral())
        }
        Command::Inner { f, g } => {
            let v = s.eval_all(&[&f, &g])?;
            s.scalar(&inner_closed(&v[0], &v[1])?)
        }
        Command::Norm2 { expr } => {
            let f = s.eval_all(&[&expr])?.remove(0);
            s.scalar(&norm_squared(&f)?)
        }
        Command::Kernel { space, dense_oracle } => {
            let k = match space {
                Space::Bh => kernel_bh(&ring)?,
                Space::Ah => kernel_ah(&ring)?,
                Space::Pg => kernel_pg_from(&GramMatrix::new(&ring), dense_oracle)?,
            };
            s.tensor(&k)
        }
        Command::Gram { det, dense_oracle } => {
            let g = GramMatrix::new(&ring);
            if det {
                let d = if dense_oracle { g.det_dense()? } else { g.det_blocks()? };
                match s.format {
                    Format::Json => render::scalar_json(&d).to_string(),
                    _ => signed(s.scalar(&d)),
                }
            } else {
                if dense_oracle {
                    // full elimination as a cross-check of the block path
                    if g.det_dense()? != g.det_blocks()? {
                        return Err(PgError::Unsupported("block and dense determinants disagree".into()).into());
                    }
                }
                match s.format {
                    Format::Text => render::gram_text(&g),
                    Format::Latex => render::matrix_latex(g.entries()),
                    Format::Json => render::gram_json(&g).to_string(),
                }
            }
        }
        Command::Sbt { psi } => {
            let coords = psi
                .split(',')
                .map(|c| {
                    let ast = expr::parse(c.trim()).map_err(|err| Failure::Parse { input: c.trim().to_owned(), err })?;
                    Ok(expr::eval_scalar(&ast, &ring)?)
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            s.element(&sb_transform(&ring, &coords)?)
        }
        Command::WitnessNegativeNorm => {
            let f = negative_norm_witness(&ring)?;
            let n = norm_squared(&f)?;
            match s.format {
                Format::Json => {
                    let v: Value = json!({ "witness": render::element_json(&f), "norm2": render::scalar_json(&n) });
                    v.to_string()
                }
                _ => format!("f = {}\n<f, f> = {}", s.element(&f), s.scalar(&n)),
            }
        }
    })
}

/// Runs `pg` with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let shown = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            let _ = if shown { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return if shown { 0 } else { 2 };
        }
    };
    let outcome = Session::new(&cli.global, stdin).and_then(|mut s| {
        let out = execute(cli, &mut s);
        for w in &s.warnings {
            let _ = writeln!(stderr, "warning: {w}");
        }
        out
    });
    let report = |stderr: &mut dyn Write, msg: &dyn std::fmt::Display| {
        let _ = writeln!(stderr, "error: {msg}");
    };
    match outcome {
        Ok(out) => match writeln!(stdout, "{out}") {
            Ok(()) => 0,
            Err(e) => {
                report(stderr, &e);
                1
            }
        },
        Err(Failure::Parse { input, err }) => {
            report(stderr, &err);
            let _ = writeln!(stderr, "  {input}\n  {}^", " ".repeat(err.position));
            2
        }
        Err(Failure::Domain(PgError::Parse(err))) => {
            report(stderr, &err);
            2
        }
        Err(Failure::Domain(e)) => {
            report(stderr, &e);
            3
        }
        Err(Failure::Io(e)) => {
            report(stderr, &e);
            1
        }
    }
}
