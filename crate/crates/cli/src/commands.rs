//! Subcommand definitions and their execution against the library.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use germcore::algebra::field::{set_max_tower_degree, Field};
use germcore::algebra::rational::{fmt_rational, parse_rational};
use germcore::algebra::{BiPoly, TruncSeries};
use germcore::discriminant::{
    direct_image, discriminant_at_least, hironaka_factorization, jacobian, jacobian_newton_diagram,
    DirectImage, MapGerm,
};
use germcore::lab::{
    atypical_values, key_lemma_check, nu_via_intersection, nu_via_milnor, rescaling_check,
    tc3_check, verify_main_theorem, PencilSpec, VerificationReport,
};
use germcore::local::{
    casas_check, equisingular, equisingularity_type, i0_resultant, i0_zeuthen,
    intersection_multiplicity_from, milnor_number, IntersectionNumber,
};
use germcore::newton::{
    factor_edge, initial_newton_polynomial, newton_diagram, rescale_equal, weighted_initial_form,
    NewtonDiagram,
};
use germcore::GermError;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algnum::{class_json, element_json};
use crate::parse::{parse_either, parse_germ, ParseError};
use crate::render::{diagram_json, render_diagram, Format};

#[derive(Parser, Debug)]
#[command(
    name = "germ",
    version,
    about = "Newton diagrams, Puiseux expansions and discriminants of plane map germs"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the Newton diagram of the result as SVG.
    #[arg(long, global = true, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    /// Minimum precision (total degree) for truncated series.
    #[arg(long, global = true, value_name = "N")]
    pub precision: Option<u32>,
    /// First shear tried by the resultant method.
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    pub seed: i64,
    /// Largest absolute degree of a number field.
    #[arg(long, global = true, value_name = "N")]
    pub max_tower_degree: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct MapArgs {
    /// First component, in x and y.
    #[arg(allow_hyphen_values = true)]
    pub f: String,
    /// Second component, in x and y.
    #[arg(allow_hyphen_values = true)]
    pub g: String,
}

#[derive(Args, Debug, Clone)]
pub struct UnitArgs {
    /// Unit multiplying f.
    #[arg(long, default_value = "1")]
    pub u1: String,
    /// Unit multiplying g.
    #[arg(long, default_value = "1")]
    pub u2: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Newton diagram of a germ.
    Diagram {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Initial Newton polynomial.
    Initial {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Weighted initial form for the weight K,L.
    Inw {
        #[arg(short, value_parser = parse_weight)]
        w: (u32, u32),
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Factor a quasi-homogeneous polynomial along the weight K,L.
    FactorEdge {
        #[arg(short, value_parser = parse_weight)]
        w: (u32, u32),
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Decide whether Q(u, v) = c P(a u, b v) for nonzero a, b, c.
    RescaleEqual {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Newton-Puiseux branches.
    Puiseux {
        #[arg(long, default_value_t = 8)]
        terms: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Value semigroups and multiplicities of the branches.
    Semigroup {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Intersection multiplicity at the origin.
    Intersect {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Milnor number.
    Milnor {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Casas' formula for a map germ and a target curve H(u, v).
    CasasCheck {
        #[command(flatten)]
        map: MapArgs,
        /// Target curve, in u and v.
        #[arg(allow_hyphen_values = true)]
        big_h: String,
    },
    /// Jacobian determinant.
    Jacobian {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Direct image of h = 0 under (f, g).
    DirectImage {
        #[arg(allow_hyphen_values = true)]
        h: String,
        #[command(flatten)]
        map: MapArgs,
    },
    /// Discriminant of (f, g).
    Discriminant {
        #[command(flatten)]
        map: MapArgs,
        /// Print only the terms of total degree below N.
        #[arg(long, value_name = "N")]
        trunc: Option<u32>,
    },
    /// Newton diagram of the discriminant, checked against the branch ledger.
    JacobianDiagram {
        #[command(flatten)]
        map: MapArgs,
    },
    /// Branches of h grouped by Hironaka quotient.
    Hironaka {
        #[arg(allow_hyphen_values = true)]
        h: String,
        #[command(flatten)]
        map: MapArgs,
    },
    /// Compare the discriminants of (f, g) and (u1 f, u2 g); u1(0) = u2(0) = 1.
    VerifyMain {
        #[command(flatten)]
        map: MapArgs,
        /// Unit multiplying f, with constant term 1.
        #[arg(long)]
        u1: String,
        /// Unit multiplying g, with constant term 1.
        #[arg(long)]
        u2: String,
    },
    /// Order of the discriminant along a pencil member, from Milnor numbers.
    NuFromMilnor {
        #[command(flatten)]
        map: MapArgs,
        #[arg(short, value_parser = parse_weight)]
        w: (u32, u32),
        #[arg(short, allow_hyphen_values = true)]
        t: String,
        #[arg(short = 'N')]
        n: Option<u32>,
    },
    /// Values of t where the pencil member meets the discriminant with excess.
    Atypical {
        #[command(flatten)]
        map: MapArgs,
        #[arg(short, value_parser = parse_weight)]
        w: (u32, u32),
    },
    /// Compare the equisingularity types of two lists of germs separated by `;`.
    Equisingular {
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
    },
    /// Equisingularity of (g - f)^N - f^(N+1) for the original and perturbed map; u1(0) = u2(0) = 1.
    KeyLemma {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        units: UnitArgs,
        #[arg(short = 'N')]
        n: Option<u32>,
        /// Also compare the pencil member g^K - t f^L.
        #[arg(short, value_parser = parse_weight, requires = "t")]
        w: Option<(u32, u32)>,
        #[arg(short, allow_hyphen_values = true, requires = "w")]
        t: Option<String>,
    },
    /// Compare the discriminants of (h, l1) and (h, l2) for transversal lines.
    Tc3Check {
        #[arg(allow_hyphen_values = true)]
        h: String,
        #[arg(allow_hyphen_values = true)]
        l1: String,
        #[arg(allow_hyphen_values = true)]
        l2: String,
    },
    /// Check that (a f, b g) has a discriminant D1 with D1(a u, b v) = c D(u, v).
    RescalingCheck {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        units: UnitArgs,
    },
}

fn parse_weight(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s.split_once(',').ok_or("expected K,L")?;
    let k: u32 = a.trim().parse().map_err(|_| format!("bad weight `{a}`"))?;
    let l: u32 = b.trim().parse().map_err(|_| format!("bad weight `{b}`"))?;
    if k == 0 || l == 0 {
        return Err("weights must be positive".into());
    }
    Ok((k, l))
}

#[derive(Debug)]
pub enum CliError {
    Parse { input: String, err: ParseError },
    Input(String),
    Germ(GermError),
    Io(String),
}

impl From<GermError> for CliError {
    fn from(e: GermError) -> Self {
        CliError::Germ(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::Input(_) => 2,
            CliError::Germ(GermError::Capacity { .. }) => 3,
            CliError::Germ(
                GermError::InvalidInput(_)
                | GermError::ZeroInput(_)
                | GermError::NonIsolated(_)
                | GermError::IncompatibleField,
            ) => 2,
            CliError::Germ(_) | CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Input(_) => "input",
            CliError::Germ(GermError::Capacity { .. }) => "capacity",
            CliError::Germ(_) => "computation",
            CliError::Io(_) => "io",
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse { input, err } => write!(f, "in `{input}`: {err}"),
            CliError::Input(m) | CliError::Io(m) => write!(f, "{m}"),
            CliError::Germ(e) => write!(f, "{e}"),
        }
    }
}

/// The JSON document printed with `--json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub result: Value,
    pub warnings: Vec<String>,
}

/// What a command produced: the JSON payload, its text rendering, and a diagram for `--svg`.
pub struct Outcome {
    pub doc: ReportDocument,
    pub text: String,
    pub diagram: Option<NewtonDiagram>,
}

struct Ctx {
    name: &'static str,
    inputs: BTreeMap<String, String>,
    warnings: Vec<String>,
}

impl Ctx {
    fn source(&mut self, key: &str, text: &str) -> Result<BiPoly, CliError> {
        self.inputs.insert(key.into(), text.into());
        parse_germ(text, ("x", "y")).map_err(|err| CliError::Parse {
            input: text.into(),
            err,
        })
    }

    fn target(&mut self, key: &str, text: &str) -> Result<BiPoly, CliError> {
        self.inputs.insert(key.into(), text.into());
        parse_germ(text, ("u", "v")).map_err(|err| CliError::Parse {
            input: text.into(),
            err,
        })
    }

    /// Either variable pair; the pair found is returned for printing.
    fn any(
        &mut self,
        key: &str,
        text: &str,
    ) -> Result<(BiPoly, (&'static str, &'static str)), CliError> {
        self.inputs.insert(key.into(), text.into());
        parse_either(text).map_err(|err| CliError::Parse {
            input: text.into(),
            err,
        })
    }

    fn map(&mut self, m: &MapArgs) -> Result<MapGerm, CliError> {
        let f = self.source("f", &m.f)?;
        let g = self.source("g", &m.g)?;
        Ok(MapGerm::new(f, g)?)
    }

    fn rational(&mut self, key: &str, text: &str) -> Result<germcore::algebra::Fe, CliError> {
        self.inputs.insert(key.into(), text.into());
        let q = parse_rational(text.trim())
            .ok_or_else(|| CliError::Input(format!("`{text}` is not a rational number")))?;
        Ok(Field::rationals().from_rational(q))
    }

    fn done(self, result: Value, text: String, diagram: Option<NewtonDiagram>) -> Outcome {
        Outcome {
            doc: ReportDocument {
                command: self.name.into(),
                inputs: self.inputs,
                result,
                warnings: self.warnings,
            },
            text,
            diagram,
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Diagram { .. } => "diagram",
        Command::Initial { .. } => "initial",
        Command::Inw { .. } => "inw",
        Command::FactorEdge { .. } => "factor-edge",
        Command::RescaleEqual { .. } => "rescale-equal",
        Command::Puiseux { .. } => "puiseux",
        Command::Semigroup { .. } => "semigroup",
        Command::Intersect { .. } => "intersect",
        Command::Milnor { .. } => "milnor",
        Command::CasasCheck { .. } => "casas-check",
        Command::Jacobian { .. } => "jacobian",
        Command::DirectImage { .. } => "direct-image",
        Command::Discriminant { .. } => "discriminant",
        Command::JacobianDiagram { .. } => "jacobian-diagram",
        Command::Hironaka { .. } => "hironaka",
        Command::VerifyMain { .. } => "verify-main",
        Command::NuFromMilnor { .. } => "nu-from-milnor",
        Command::Atypical { .. } => "atypical",
        Command::Equisingular { .. } => "equisingular",
        Command::KeyLemma { .. } => "key-lemma",
        Command::Tc3Check { .. } => "tc3-check",
        Command::RescalingCheck { .. } => "rescaling-check",
    }
}

fn uv(p: &BiPoly) -> String {
    p.to_string_in("u", "v")
}

fn xy(p: &BiPoly) -> String {
    p.to_string_in("x", "y")
}

fn series_uv(s: &TruncSeries) -> String {
    format!("{} + O({})", uv(s.body()), s.prec())
}

fn inum(n: IntersectionNumber) -> String {
    match n {
        IntersectionNumber::Finite(n) => n.to_string(),
        IntersectionNumber::Infinite => "inf".into(),
    }
}

fn inum_json(n: IntersectionNumber) -> Value {
    match n {
        IntersectionNumber::Finite(n) => json!(n),
        IntersectionNumber::Infinite => json!("inf"),
    }
}

fn diagram_text(d: &NewtonDiagram) -> String {
    let edges: Vec<String> = d
        .compact_edges
        .iter()
        .map(|e| {
            format!(
                "{:?}-{:?} inclination {}",
                e.from,
                e.to,
                fmt_rational(&e.inclination)
            )
        })
        .collect();
    format!(
        "vertices: {:?}\ncompact edges: {}\naxis exponents: {:?}\n{}",
        d.vertices,
        if edges.is_empty() {
            "none".into()
        } else {
            edges.join(", ")
        },
        d.axis_exponents,
        String::from_utf8(render_diagram(d, Format::Ascii)).expect("ascii")
    )
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn image_json(d: &DirectImage, trunc: Option<u32>) -> Result<Value, CliError> {
    let (eq, canon) = match trunc {
        Some(n) => (
            TruncSeries::new(d.equation.body().clone(), n.min(d.equation.prec())),
            TruncSeries::new(d.canonical.body().clone(), n.min(d.canonical.prec())),
        ),
        None => (d.equation.clone(), d.canonical.clone()),
    };
    let diagram = d.diagram()?;
    Ok(json!({
        "unit": d.unit,
        "equation": uv(eq.body()),
        "canonical": uv(canon.body()),
        "precision": eq.prec(),
        "field": eq.body().field().describe(),
        "diagram": diagram_json(&diagram),
        "initial": if d.unit { "1".to_string() } else { uv(&initial_newton_polynomial(d.canonical.body())?.normalized()?) },
        "ledger": to_json(&d.ledger),
    }))
}

fn image_text(d: &DirectImage, trunc: Option<u32>) -> Result<String, CliError> {
    if d.unit {
        return Ok("unit (empty image)\n".into());
    }
    let canon = match trunc {
        Some(n) => TruncSeries::new(d.canonical.body().clone(), n.min(d.canonical.prec())),
        None => d.canonical.clone(),
    };
    let mut s = format!("{}\n", series_uv(&canon));
    for e in &d.ledger {
        s.push_str(&format!(
            "  branch {}: multiplicity {}, conjugates {}, i0(f) = {}, i0(g) = {}, degree {}\n",
            e.branch,
            e.multiplicity,
            e.conjugacy,
            inum(e.i_f),
            inum(e.i_g),
            e.degree
        ));
    }
    s.push_str(&diagram_text(&d.diagram()?));
    Ok(s)
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = format!(
        "{}\nverdict: {}\n",
        r.claim,
        to_json(&r.verdict).as_str().unwrap_or("?")
    );
    for (k, v) in &r.artifacts {
        s.push_str(&format!("  {k}: {v}\n"));
    }
    if let Some(c) = &r.counterexample {
        s.push_str("counterexample:\n");
        for (k, v) in c {
            s.push_str(&format!("  {k}: {v}\n"));
        }
    }
    s
}

/// Runs one subcommand; errors carry their exit code.
pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    if let Some(cap) = cli.global.max_tower_degree {
        set_max_tower_degree(cap);
    }
    let g = &cli.global;
    let mut cx = Ctx {
        name: command_name(&cli.command),
        inputs: BTreeMap::new(),
        warnings: Vec::new(),
    };
    match &cli.command {
        Command::Diagram { expr } => {
            let (p, _) = cx.any("expr", expr)?;
            let d = newton_diagram(&p)?;
            Ok(cx.done(diagram_json(&d), diagram_text(&d), Some(d)))
        }
        Command::Initial { expr } => {
            let (p, (a, b)) = cx.any("expr", expr)?;
            let i = initial_newton_polynomial(&p)?;
            let s = i.to_string_in(a, b);
            Ok(cx.done(
                json!({"initial": s}),
                format!("{s}\n"),
                Some(newton_diagram(&p)?),
            ))
        }
        Command::Inw { w, expr } => {
            let (p, (a, b)) = cx.any("expr", expr)?;
            cx.inputs.insert("w".into(), format!("{},{}", w.0, w.1));
            let s = weighted_initial_form(&p, *w)?.to_string_in(a, b);
            Ok(cx.done(json!({"initial_form": s}), format!("{s}\n"), None))
        }
        Command::FactorEdge { w, expr } => {
            let (p, (a, b)) = cx.any("expr", expr)?;
            cx.inputs.insert("w".into(), format!("{},{}", w.0, w.1));
            let fz = factor_edge(&p, *w)?;
            let roots: Vec<Value> = fz
                .roots
                .iter()
                .map(|r| json!({"minpoly": r.minpoly.to_string_in("t"), "t": element_json(&r.t), "nu": r.nu}))
                .collect();
            let mut text = format!(
                "{} = ({}) * {a}^{} * {b}^{}",
                p.to_string_in(a, b),
                fz.constant,
                fz.nu0,
                fz.nu_last
            );
            for r in &fz.roots {
                let tvar = if r.count() == 1 {
                    r.t.to_string()
                } else {
                    "t".to_string()
                };
                text.push_str(&format!(" * ({b}^{} - ({tvar})*{a}^{})^{}", w.0, w.1, r.nu));
                if r.count() > 1 {
                    text.push_str(&format!(
                        " over the roots t of {}",
                        r.minpoly.to_string_in("t")
                    ));
                }
            }
            text.push('\n');
            let result = json!({
                "constant": element_json(&fz.constant),
                "nu0": fz.nu0,
                "nu_last": fz.nu_last,
                "roots": roots,
                "n": fz.n(),
            });
            Ok(cx.done(result, text, None))
        }
        Command::RescaleEqual { p, q } => {
            let (pp, (a, b)) = cx.any("p", p)?;
            let (qq, pair) = cx.any("q", q)?;
            if pair != (a, b) {
                return Err(CliError::Input(
                    "both polynomials must use the same variables".into(),
                ));
            }
            let r = rescale_equal(&pp, &qq)?;
            let witness = r
                .witness
                .as_ref()
                .map(|(x, y)| json!({"a": element_json(x), "b": element_json(y)}));
            let obstruction = r.obstruction.as_ref().map(|o| {
                json!({
                    "relation": o.terms.iter().map(|(e, k)| json!({"exponent": [e.0, e.1], "power": k})).collect::<Vec<_>>(),
                    "ratio": element_json(&o.ratio),
                })
            });
            let text = match (&r.witness, r.solvable, r.supports_differ) {
                (Some((x, y)), _, _) => format!("equal up to rescaling: a = {x}, b = {y}\n"),
                (None, true, _) => {
                    "equal up to rescaling; the witness lies beyond the tower-degree cap\n".into()
                }
                (None, false, true) => "not equal: supports differ\n".into(),
                (None, false, false) => {
                    "not equal: the coefficient ratios violate a lattice relation\n".into()
                }
            };
            let result = json!({
                "solvable": r.solvable,
                "supports_differ": r.supports_differ,
                "witness": witness,
                "obstruction": obstruction,
            });
            Ok(cx.done(result, text, None))
        }
        Command::Puiseux { terms, expr } => {
            let (p, (a, b)) = cx.any("expr", expr)?;
            cx.inputs.insert("terms".into(), terms.to_string());
            let e = germcore::puiseux::puiseux_expand(&p, *terms)?;
            let mut text = String::new();
            let mut branches = Vec::new();
            for br in &e.branches {
                let d = br
                    .describe()
                    .replacen("x =", &format!("{a} ="), 1)
                    .replacen("y =", &format!("{b} ="), 1);
                text.push_str(&format!(
                    "{d}  [multiplicity {}, conjugates {}]\n",
                    br.multiplicity, br.conjugacy
                ));
                for line in br.field.describe() {
                    text.push_str(&format!("    {line}\n"));
                }
                branches.push(json!({
                    "parametrization": d,
                    "m": br.m,
                    "gamma": element_json(&br.gamma),
                    "multiplicity": br.multiplicity,
                    "conjugacy": br.conjugacy,
                    "exact": br.exact,
                    "precision": br.prec(),
                    "tower": br.field.describe(),
                }));
            }
            Ok(cx.done(
                json!({"branches": branches, "branch_count": e.branch_count()}),
                text,
                None,
            ))
        }
        Command::Semigroup { expr } => {
            let (p, _) = cx.any("expr", expr)?;
            let t = equisingularity_type(&[(expr.clone(), p)])?;
            let mut text = String::new();
            for (k, b) in t.branches.iter().enumerate() {
                text.push_str(&format!(
                    "branch {k}: multiplicity {}, semigroup <{}>\n",
                    b.multiplicity,
                    join(&b.semigroup)
                ));
            }
            Ok(cx.done(to_json(&t), text, None))
        }
        Command::Intersect { f, g: gg } => {
            let (a, pa) = cx.any("f", f)?;
            let (b, pb) = cx.any("g", gg)?;
            if pa != pb {
                return Err(CliError::Input(
                    "both germs must use the same variables".into(),
                ));
            }
            let n = intersection_multiplicity_from(&a, &b, g.seed)?;
            let res = i0_resultant(&a, &b, g.seed)?;
            let zeu = i0_zeuthen(&a, &b)?;
            if res != zeu {
                cx.warnings.push(format!(
                    "resultant gives {}, Zeuthen gives {}",
                    inum(res),
                    inum(zeu)
                ));
            }
            let result =
                json!({"i0": inum_json(n), "resultant": inum_json(res), "zeuthen": inum_json(zeu)});
            Ok(cx.done(result, format!("{}\n", inum(n)), None))
        }
        Command::Milnor { expr } => {
            let (p, _) = cx.any("expr", expr)?;
            let mu = milnor_number(&p)?;
            Ok(cx.done(json!({"mu": mu}), format!("{mu}\n"), None))
        }
        Command::CasasCheck { map, big_h } => {
            let phi = cx.map(map)?;
            let h = cx.target("H", big_h)?;
            let r = casas_check(&phi, &h)?;
            let text = format!(
                "mu(h) = {}, mu(H) = {}, i0(f, g) = {}, i0(D, H) = {}\nmu(h) - 1 = {}, mu(H) - 1 + 2 (i0(f, g) - 1) - i0(D, H) = {}\n{}\n",
                r.mu_h,
                r.mu_big_h,
                r.i0_fg,
                r.i0_d_big_h,
                r.lhs,
                r.rhs,
                if r.holds { "holds" } else { "fails" }
            );
            Ok(cx.done(to_json(&r), text, None))
        }
        Command::Jacobian { map } => {
            let phi = cx.map(map)?;
            let j = jacobian(&phi)?;
            Ok(cx.done(
                json!({"jacobian": xy(&j)}),
                format!("{}\n", xy(&j)),
                newton_diagram(&j).ok(),
            ))
        }
        Command::DirectImage { h, map } => {
            let hh = cx.source("h", h)?;
            let phi = cx.map(map)?;
            let prec = match g.precision {
                Some(p) => p,
                None => {
                    let a = intersection_multiplicity_from(&phi.f, &hh, g.seed)?
                        .finite()
                        .unwrap_or(8);
                    let b = intersection_multiplicity_from(&phi.g, &hh, g.seed)?
                        .finite()
                        .unwrap_or(8);
                    (a + b + 2) as u32
                }
            };
            let d = direct_image(&hh, &phi, prec)?;
            let text = image_text(&d, None)?;
            let dg = d.diagram()?;
            Ok(cx.done(image_json(&d, None)?, text, Some(dg)))
        }
        Command::Discriminant { map, trunc } => {
            let phi = cx.map(map)?;
            if let Some(n) = trunc {
                cx.inputs.insert("trunc".into(), n.to_string());
            }
            let min = g.precision.unwrap_or(0).max(trunc.unwrap_or(0));
            let d = discriminant_at_least(&phi, min)?;
            let text = image_text(&d, *trunc)?;
            let dg = d.diagram()?;
            Ok(cx.done(image_json(&d, *trunc)?, text, Some(dg)))
        }
        Command::JacobianDiagram { map } => {
            let phi = cx.map(map)?;
            let d = jacobian_newton_diagram(&phi)?;
            Ok(cx.done(diagram_json(&d), diagram_text(&d), Some(d)))
        }
        Command::Hironaka { h, map } => {
            let hh = cx.source("h", h)?;
            let phi = cx.map(map)?;
            let fs = hironaka_factorization(&hh, &phi)?;
            let mut text = String::new();
            for f in &fs {
                text.push_str(&format!(
                    "quotient {}: {} branch(es), i0(f) = {}, i0(g) = {}{}\n",
                    f.quotient,
                    f.branches.len(),
                    inum(f.i_f),
                    inum(f.i_g),
                    f.edge
                        .as_ref()
                        .map(|e| format!(", edge {:?}-{:?}", e.from, e.to))
                        .unwrap_or_default()
                ));
                for b in &f.branches {
                    text.push_str(&format!("    {b}\n"));
                }
            }
            Ok(cx.done(to_json(&fs), text, None))
        }
        Command::VerifyMain { map, u1, u2 } => {
            let f = cx.source("f", &map.f)?;
            let gg = cx.source("g", &map.g)?;
            let a = perturbation(cx.source("u1", u1)?)?;
            let b = perturbation(cx.source("u2", u2)?)?;
            let r = verify_main_theorem(&f, &gg, &a, &b)?;
            Ok(cx.done(to_json(&r), report_text(&r), None))
        }
        Command::NuFromMilnor { map, w, t, n } => {
            let phi = cx.map(map)?;
            let tt = cx.rational("t", t)?;
            cx.inputs.insert("w".into(), format!("{},{}", w.0, w.1));
            if let Some(n) = n {
                cx.inputs.insert("N".into(), n.to_string());
            }
            let m = nu_via_milnor(&phi, *w, &tt, *n)?;
            let i = nu_via_intersection(&phi, *w, &tt, *n)?;
            if i.nu != m.nu {
                cx.warnings
                    .push(format!("intersection method gives nu = {}", i.nu));
            }
            let text = format!(
                "nu = {} (Milnor difference {} at N = {}, reference t = {}; intersection method {})\n",
                m.nu, m.delta, m.n, m.t_ref, i.nu
            );
            Ok(cx.done(
                json!({"milnor": to_json(&m), "intersection": to_json(&i), "nu": m.nu}),
                text,
                None,
            ))
        }
        Command::Atypical { map, w } => {
            let phi = cx.map(map)?;
            cx.inputs.insert("w".into(), format!("{},{}", w.0, w.1));
            let vals = atypical_values(&phi, *w)?;
            let mut text = String::new();
            if vals.is_empty() {
                text.push_str("none\n");
            }
            for v in &vals {
                text.push_str(&format!("t = {}: nu = {}\n", v.t, v.nu));
            }
            let result: Vec<Value> = vals
                .iter()
                .map(|v| json!({"t": class_json(&v.t), "nu": v.nu}))
                .collect();
            Ok(cx.done(json!({"values": result}), text, None))
        }
        Command::Equisingular { left, right } => {
            let l = germ_list(&mut cx, "left", left)?;
            let r = germ_list(&mut cx, "right", right)?;
            let (tl, tr) = (equisingularity_type(&l)?, equisingularity_type(&r)?);
            let m = equisingular(&tl, &tr)?;
            let text = match &m {
                Some(m) => format!("equisingular; branch matching {m:?}\n"),
                None => "not equisingular\n".into(),
            };
            let result = json!({"equisingular": m.is_some(), "matching": m, "left": to_json(&tl), "right": to_json(&tr)});
            Ok(cx.done(result, text, None))
        }
        Command::KeyLemma {
            map,
            units,
            n,
            w,
            t,
        } => {
            let f = cx.source("f", &map.f)?;
            let gg = cx.source("g", &map.g)?;
            let a = perturbation(cx.source("u1", &units.u1)?)?;
            let b = perturbation(cx.source("u2", &units.u2)?)?;
            if let Some(n) = n {
                cx.inputs.insert("N".into(), n.to_string());
            }
            let pencil = match (w, t) {
                (Some(w), Some(t)) => {
                    cx.inputs.insert("w".into(), format!("{},{}", w.0, w.1));
                    Some(PencilSpec {
                        w: *w,
                        t: cx.rational("t", t)?,
                    })
                }
                _ => None,
            };
            let r = key_lemma_check(&f, &gg, &a, &b, *n, pencil.as_ref())?;
            Ok(cx.done(to_json(&r), report_text(&r), None))
        }
        Command::Tc3Check { h, l1, l2 } => {
            let hh = cx.source("h", h)?;
            let a = cx.source("l1", l1)?;
            let b = cx.source("l2", l2)?;
            let r = tc3_check(&hh, &a, &b)?;
            Ok(cx.done(to_json(&r), report_text(&r), None))
        }
        Command::RescalingCheck { map, units } => {
            let f = cx.source("f", &map.f)?;
            let gg = cx.source("g", &map.g)?;
            let a = cx.source("u1", &units.u1)?;
            let b = cx.source("u2", &units.u2)?;
            let r = rescaling_check(&f, &gg, &a, &b)?;
            Ok(cx.done(to_json(&r), report_text(&r), None))
        }
    }
}

/// `u - 1` for a unit `u` with `u(0) = 1`.
fn perturbation(u: BiPoly) -> Result<BiPoly, CliError> {
    let one = BiPoly::one(&Field::rationals());
    if !u.sub(&one).constant_term().is_zero() {
        return Err(CliError::Input(format!(
            "the unit {} must have constant term 1 (constant factors are handled by rescaling-check)",
            xy(&u)
        )));
    }
    Ok(u.sub(&one))
}

fn join(v: &[u32]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn germ_list(cx: &mut Ctx, key: &str, text: &str) -> Result<Vec<(String, BiPoly)>, CliError> {
    cx.inputs.insert(key.into(), text.into());
    text.split(';')
        .map(|s| {
            let s = s.trim();
            let p = parse_germ(s, ("x", "y")).map_err(|err| CliError::Parse {
                input: s.into(),
                err,
            })?;
            Ok((s.to_string(), p))
        })
        .collect()
}

/// Runs the parsed command line, printing to stdout and stderr; returns the exit code.
pub fn run(cli: &Cli) -> u8 {
    match execute(cli) {
        Ok(out) => {
            if let (Some(path), Some(d)) = (&cli.global.svg, &out.diagram) {
                if let Err(e) = std::fs::write(path, render_diagram(d, Format::Svg)) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 1;
                }
            } else if cli.global.svg.is_some() {
                eprintln!("warning: this command has no diagram to write");
            }
            if cli.global.json {
                println!("{}", serde_json::to_string_pretty(&out.doc).expect("json"));
            } else {
                print!("{}", out.text);
                for w in &out.doc.warnings {
                    eprintln!("warning: {w}");
                }
            }
            0
        }
        Err(e) => {
            if cli.global.json {
                let v = json!({"command": command_name(&cli.command), "error": {"kind": e.kind(), "message": e.to_string()}});
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            }
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
