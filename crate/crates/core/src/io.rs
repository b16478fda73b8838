//! Plain-text formats for circuits, ideals, low-rank inputs, matrices,
//! graphs, certificates and reduction instances.
//!
//! Blank lines and `#` comments are ignored everywhere. Circuit node ids
//! count node lines only, starting at 0.

use crate::applications::Graph;
use crate::circuit::{Circuit, Node};
use crate::division::UnivariateIdeal;
use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, Field, Scalar};
use crate::gaussian::Gaussian;
use crate::linalg::{LinearForm, Matrix};
use crate::lowrank::LowRankInput;
use crate::poly::UnivariatePoly;
use crate::reductions::{KLinEqInstance, OneInThreeInstance};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn scalar(tok: &str, field: Field, line: usize) -> Result<Scalar> {
    let r = parse_rational(tok).map_err(|e| perr(line, e.to_string()))?;
    Scalar::from_rational(&r, field).map_err(|e| perr(line, e.to_string()))
}

fn number<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| perr(line, format!("expected a nonnegative integer, got `{tok}`")))
}

pub fn format_scalar(s: &Scalar) -> String {
    match s.as_rational() {
        Some(r) => format_rational(r),
        None => s.as_residue().unwrap().to_string(),
    }
}

/// `c1 … cn [+ c0]`.
fn parse_form(toks: &[&str], field: Field, line: usize) -> Result<LinearForm> {
    let (coeffs, constant) = match toks.iter().position(|&t| t == "+") {
        Some(p) => {
            if p + 2 != toks.len() {
                return Err(perr(line, "expected a single constant after `+`"));
            }
            (&toks[..p], scalar(toks[p + 1], field, line)?)
        }
        None => (toks, field.zero()),
    };
    let coeffs = coeffs.iter().map(|t| scalar(t, field, line)).collect::<Result<Vec<_>>>()?;
    Ok(LinearForm::new(coeffs, constant))
}

fn format_form(f: &LinearForm) -> String {
    let mut s: Vec<String> = f.coeffs.iter().map(format_scalar).collect();
    if !f.constant.is_zero() {
        s.push("+".into());
        s.push(format_scalar(&f.constant));
    }
    s.join(" ")
}

/// Circuit lines plus whatever extra directives `extra` accepts.
fn parse_circuit_with(
    text: &str,
    field: Field,
    mut extra: impl FnMut(&[&str], usize) -> Result<bool>,
) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut out: Option<(usize, usize)> = None;
    for (line, toks) in content_lines(text) {
        let Some(c) = circuit.as_mut() else {
            if toks.len() != 2 || toks[0] != "vars" {
                return Err(perr(line, "expected header `vars n`"));
            }
            circuit = Some(Circuit::new(number(toks[1], line)?));
            continue;
        };
        if extra(&toks, line)? {
            continue;
        }
        let ids = |ts: &[&str]| ts.iter().map(|t| number::<usize>(t, line)).collect::<Result<Vec<_>>>();
        let node = match toks[0] {
            "in" if toks.len() == 2 => Node::Input(number(toks[1], line)?),
            "const" if toks.len() == 2 => Node::Const(scalar(toks[1], field, line)?),
            "add" => Node::Add(ids(&toks[1..])?),
            "mul" => Node::Mul(ids(&toks[1..])?),
            "lin" => Node::Linear(parse_form(&toks[1..], field, line)?),
            "out" if toks.len() == 2 => {
                out = Some((number(toks[1], line)?, line));
                continue;
            }
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        };
        c.add_node(node).map_err(|e| perr(line, e.to_string()))?;
    }
    let mut c = circuit.ok_or_else(|| perr(0, "empty circuit file"))?;
    if c.nodes().is_empty() {
        return Err(perr(0, "circuit has no nodes"));
    }
    if let Some((id, line)) = out {
        c.set_output(id).map_err(|e| perr(line, e.to_string()))?;
    }
    Ok(c)
}

pub fn parse_circuit(text: &str, field: Field) -> Result<Circuit> {
    parse_circuit_with(text, field, |_, _| Ok(false))
}

pub fn write_circuit(c: &Circuit) -> String {
    let mut s = format!("vars {}\n", c.nvars());
    for node in c.nodes() {
        let line = match node {
            Node::Input(i) => format!("in {i}"),
            Node::Const(v) => format!("const {}", format_scalar(v)),
            Node::Add(ch) => format!("add {}", join(ch)),
            Node::Mul(ch) => format!("mul {}", join(ch)),
            Node::Linear(f) => format!("lin {}", format_form(f)),
        };
        s.push_str(&line);
        s.push('\n');
    }
    s.push_str(&format!("out {}\n", c.output()));
    s
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Outer circuit over `r` inputs, then `form c1 … cn [+ c0]` lines and an
/// optional `degree d`.
pub fn parse_lowrank(text: &str, field: Field) -> Result<LowRankInput> {
    let mut forms = Vec::new();
    let mut degree = None;
    let outer = parse_circuit_with(text, field, |toks, line| match toks[0] {
        "form" => {
            forms.push(parse_form(&toks[1..], field, line)?);
            Ok(true)
        }
        "degree" if toks.len() == 2 => {
            degree = Some(number(toks[1], line)?);
            Ok(true)
        }
        _ => Ok(false),
    })?;
    LowRankInput::new(outer, forms, degree)
}

pub fn write_lowrank(input: &LowRankInput) -> String {
    let mut s = write_circuit(&input.outer);
    for f in &input.forms {
        s.push_str(&format!("form {}\n", format_form(f)));
    }
    s.push_str(&format!("degree {}\n", input.degree));
    s
}

/// `var i : c0 c1 … cd`, coefficients from low to high degree.
pub fn parse_ideal(text: &str, field: Field) -> Result<UnivariateIdeal> {
    let mut gens = Vec::new();
    for (line, toks) in content_lines(text) {
        if toks.len() < 4 || toks[0] != "var" || toks[2] != ":" {
            return Err(perr(line, "expected `var i : c0 c1 … cd`"));
        }
        let v: usize = number(toks[1], line)?;
        let coeffs = toks[3..].iter().map(|t| scalar(t, field, line)).collect::<Result<Vec<_>>>()?;
        let p = UnivariatePoly::new(field, coeffs).map_err(|e| perr(line, e.to_string()))?;
        gens.push((v, p));
    }
    UnivariateIdeal::new(field, gens)
}

pub fn write_ideal(ideal: &UnivariateIdeal) -> String {
    ideal
        .generators()
        .iter()
        .map(|(v, p)| {
            let cs: Vec<String> = p.coeffs().iter().map(format_scalar).collect();
            format!("var {v} : {}\n", cs.join(" "))
        })
        .collect()
}

pub fn parse_matrix(text: &str, field: Field) -> Result<Matrix> {
    let mut rows = Vec::new();
    for (line, toks) in content_lines(text) {
        rows.push(toks.iter().map(|t| scalar(t, field, line)).collect::<Result<Vec<_>>>()?);
    }
    if rows.is_empty() {
        return Err(perr(0, "empty matrix"));
    }
    Matrix::from_rows(field, rows)
}

pub fn write_matrix(m: &Matrix) -> String {
    m.to_rows()
        .iter()
        .map(|r| format!("{}\n", r.iter().map(format_scalar).collect::<Vec<_>>().join(" ")))
        .collect()
}

/// `n m`, then `m` lines `u v` with 0-based vertices.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (line, head) = lines.next().ok_or_else(|| perr(0, "empty graph file"))?;
    if head.len() != 2 {
        return Err(perr(line, "expected header `n m`"));
    }
    let n: usize = number(head[0], line)?;
    let m: usize = number(head[1], line)?;
    let mut edges = Vec::with_capacity(m);
    for (line, toks) in lines {
        if toks.len() != 2 {
            return Err(perr(line, "expected an edge `u v`"));
        }
        edges.push((number(toks[0], line)?, number(toks[1], line)?));
    }
    if edges.len() != m {
        return Err(perr(line, format!("header promises {m} edges, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.num_edges());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// One `re im` line per coordinate.
pub fn parse_certificate(text: &str) -> Result<Vec<Gaussian>> {
    content_lines(text).map(|(_, toks)| Gaussian::parse(&toks.join(" "))).collect()
}

pub fn write_certificate(cert: &[Gaussian]) -> String {
    cert.iter().map(|z| format!("{z}\n")).collect()
}

/// `k n`, then `k` rows of `A`, then `b b_1 … b_k`.
pub fn parse_klineq(text: &str) -> Result<KLinEqInstance> {
    let lines: Vec<(usize, Vec<&str>)> = content_lines(text).collect();
    let (line, head) = lines.first().ok_or_else(|| perr(0, "empty instance"))?;
    if head.len() != 2 {
        return Err(perr(*line, "expected header `k n`"));
    }
    let k: usize = number(head[0], *line)?;
    let n: usize = number(head[1], *line)?;
    if lines.len() != k + 2 {
        return Err(perr(*line, format!("expected {k} rows and a `b` line")));
    }
    let mut a = Vec::with_capacity(k);
    for (line, toks) in &lines[1..=k] {
        if toks.len() != n {
            return Err(perr(*line, format!("expected {n} entries")));
        }
        a.push(toks.iter().map(|t| number(t, *line)).collect::<Result<Vec<u64>>>()?);
    }
    let (line, btoks) = &lines[k + 1];
    if btoks[0] != "b" || btoks.len() != k + 1 {
        return Err(perr(*line, format!("expected `b` followed by {k} entries")));
    }
    let b = btoks[1..].iter().map(|t| number(t, *line)).collect::<Result<Vec<u64>>>()?;
    KLinEqInstance::with_columns(a, b, n)
}

pub fn write_klineq(inst: &KLinEqInstance) -> String {
    let mut s = format!("{} {}\n", inst.k(), inst.n());
    for row in &inst.a {
        s.push_str(&join(row));
        s.push('\n');
    }
    s.push_str(&format!("b {}\n", join(&inst.b)));
    s
}

/// `v m`, then `m` clause lines `a b c` with 0-based variables.
pub fn parse_one_in_three(text: &str) -> Result<OneInThreeInstance> {
    let mut lines = content_lines(text);
    let (line, head) = lines.next().ok_or_else(|| perr(0, "empty instance"))?;
    if head.len() != 2 {
        return Err(perr(line, "expected header `v m`"));
    }
    let v: usize = number(head[0], line)?;
    let m: usize = number(head[1], line)?;
    let mut clauses = Vec::with_capacity(m);
    for (line, toks) in lines {
        if toks.len() != 3 {
            return Err(perr(line, "expected three literals"));
        }
        clauses.push([number(toks[0], line)?, number(toks[1], line)?, number(toks[2], line)?]);
    }
    if clauses.len() != m {
        return Err(perr(line, format!("header promises {m} clauses, found {}", clauses.len())));
    }
    OneInThreeInstance::new(v, clauses)
}

pub fn write_one_in_three(inst: &OneInThreeInstance) -> String {
    let mut s = format!("{} {}\n", inst.vars, inst.clauses.len());
    for c in &inst.clauses {
        s.push_str(&format!("{} {} {}\n", c[0], c[1], c[2]));
    }
    s
}
