//! Line-oriented circuit text format.
//!
//! ```text
//! # (x1 - 1)^2
//! nvars 1
//! g1 = in 1
//! g2 = const -1
//! g3 = add g1 g2
//! g4 = mul g3 g3
//! out g4
//! ```

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use super::{Circuit, Node};
use crate::error::{Error, Result};

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        msg: msg.into(),
    }
}

fn is_gate_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('g') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| syntax(line, format!("expected a count after {what}")))
}

/// Parses the circuit text format. The `nvars`/`nparams` header lines are
/// optional; when absent the counts are the largest index used.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();

    // Definition sites, so that a reference to a later gate can be reported
    // as a forward reference rather than an unknown name.
    let mut defined_at: HashMap<&str, usize> = HashMap::new();
    for &(no, l) in &lines {
        let mut toks = l.split_whitespace();
        if let (Some(name), Some("=")) = (toks.next(), toks.next()) {
            if defined_at.insert(name, no).is_some() {
                return Err(Error::DuplicateGate {
                    line: no,
                    name: name.to_string(),
                });
            }
        }
    }

    let mut nvars: Option<usize> = None;
    let mut nparams: Option<usize> = None;
    let mut index_of: HashMap<&str, usize> = HashMap::new();
    let mut nodes: Vec<Node> = Vec::new();
    let mut output: Option<usize> = None;

    for &(no, l) in &lines {
        if output.is_some() {
            return Err(syntax(no, "content after the out line"));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            ["nvars", rest @ ..] => {
                if !nodes.is_empty() || nvars.is_some() || rest.len() != 1 {
                    return Err(syntax(no, "misplaced nvars header"));
                }
                nvars = Some(parse_count(rest.first().copied(), no, "nvars")?);
            }
            ["nparams", rest @ ..] => {
                if !nodes.is_empty() || nparams.is_some() || rest.len() != 1 {
                    return Err(syntax(no, "misplaced nparams header"));
                }
                nparams = Some(parse_count(rest.first().copied(), no, "nparams")?);
            }
            ["out", name] => {
                let idx = resolve(name, no, &index_of, &defined_at)?;
                output = Some(idx);
            }
            [name, "=", op, args @ ..] => {
                if !is_gate_name(name) {
                    return Err(syntax(no, format!("bad gate name {name:?}")));
                }
                let node = match (*op, args) {
                    ("in", [j]) => Node::Input(parse_index(j, no)?),
                    ("param", [j]) => Node::Param(parse_index(j, no)?),
                    ("const", [v]) => Node::Const(
                        v.parse::<BigInt>()
                            .map_err(|_| syntax(no, format!("bad constant {v:?}")))?,
                    ),
                    ("add", [a, b]) => Node::Add(
                        resolve(a, no, &index_of, &defined_at)?,
                        resolve(b, no, &index_of, &defined_at)?,
                    ),
                    ("mul", [a, b]) => Node::Mul(
                        resolve(a, no, &index_of, &defined_at)?,
                        resolve(b, no, &index_of, &defined_at)?,
                    ),
                    _ => return Err(syntax(no, format!("malformed gate {l:?}"))),
                };
                match node {
                    Node::Input(j) if nvars.is_some_and(|n| j > n) => {
                        return Err(syntax(no, format!("input {j} exceeds nvars")))
                    }
                    Node::Param(j) if nparams.is_some_and(|n| j > n) => {
                        return Err(syntax(no, format!("param {j} exceeds nparams")))
                    }
                    _ => {}
                }
                index_of.insert(name, nodes.len());
                nodes.push(node);
            }
            _ => return Err(syntax(no, format!("unrecognised line {l:?}"))),
        }
    }

    let output = output.ok_or(Error::MissingOutput)?;
    let used_vars = nodes
        .iter()
        .filter_map(|n| if let Node::Input(j) = n { Some(*j) } else { None })
        .max()
        .unwrap_or(0);
    let used_params = nodes
        .iter()
        .filter_map(|n| if let Node::Param(j) = n { Some(*j) } else { None })
        .max()
        .unwrap_or(0);
    Circuit::new(
        nodes,
        output,
        nvars.unwrap_or(used_vars),
        nparams.unwrap_or(used_params),
    )
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(j) if j >= 1 => Ok(j),
        _ => Err(syntax(line, format!("bad index {tok:?}, indices start at 1"))),
    }
}

fn resolve(
    name: &str,
    line: usize,
    index_of: &HashMap<&str, usize>,
    defined_at: &HashMap<&str, usize>,
) -> Result<usize> {
    if let Some(&i) = index_of.get(name) {
        return Ok(i);
    }
    if defined_at.contains_key(name) {
        Err(Error::ForwardReference {
            line,
            name: name.to_string(),
        })
    } else {
        Err(Error::UndefinedGate {
            line,
            name: name.to_string(),
        })
    }
}

impl Circuit {
    /// Serialises to the text format: header, nodes in index order named
    /// `g1..gN`, then the out line.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nvars {}", self.num_vars)?;
        if self.num_params > 0 {
            writeln!(f, "nparams {}", self.num_params)?;
        }
        for (i, node) in self.nodes.iter().enumerate() {
            write!(f, "g{} = ", i + 1)?;
            match node {
                Node::Input(j) => writeln!(f, "in {j}")?,
                Node::Param(j) => writeln!(f, "param {j}")?,
                Node::Const(v) => writeln!(f, "const {v}")?,
                Node::Add(a, b) => writeln!(f, "add g{} g{}", a + 1, b + 1)?,
                Node::Mul(a, b) => writeln!(f, "mul g{} g{}", a + 1, b + 1)?,
            }
        }
        writeln!(f, "out g{}", self.output + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lines(s: &str) -> String {
        s.split(" / ").collect::<Vec<_>>().join("\n")
    }

    #[test]
    fn parses_square_of_shift() {
        let c = parse_circuit(&lines(
            "g1 = in 1 / g2 = const -1 / g3 = add g1 g2 / g4 = mul g3 g3 / out g4",
        ))
        .unwrap();
        assert_eq!(c.size(), 4);
        assert_eq!(c.num_vars(), 1);
        assert_eq!(c.nodes()[3], Node::Mul(2, 2));
    }

    #[test]
    fn single_constant() {
        let c = parse_circuit(&lines("g1 = const -1 / out g1")).unwrap();
        assert_eq!(c.size(), 1);
        assert!(crate::circuit::is_constant_free(&c));
    }

    #[test]
    fn forward_reference_reports_line() {
        let err = parse_circuit(&lines("g1 = in 1 / g2 = add g3 g1 / g3 = in 1 / out g2")).unwrap_err();
        assert_eq!(
            err,
            Error::ForwardReference {
                line: 2,
                name: "g3".into()
            }
        );
    }

    #[test]
    fn errors() {
        assert_eq!(parse_circuit("g1 = in 1\n").unwrap_err(), Error::MissingOutput);
        assert!(matches!(
            parse_circuit("g1 = in 1\ng1 = in 1\nout g1"),
            Err(Error::DuplicateGate { line: 2, .. })
        ));
        assert!(matches!(
            parse_circuit("g1 = in 1\ng2 = sub g1 g1\nout g2"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_circuit("g1 = in 1\nout g7"),
            Err(Error::UndefinedGate { line: 2, .. })
        ));
        assert!(matches!(
            parse_circuit("nvars 1\ng1 = in 2\nout g1"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_circuit("g1 = in 1\nout g1\ng2 = in 1"),
            Err(Error::Syntax { line: 3, .. })
        ));
    }

    #[test]
    fn comments_and_headers() {
        let c = parse_circuit("# comment\nnvars 3\nnparams 2\ng1 = param 2 # trailing\nout g1\n").unwrap();
        assert_eq!((c.num_vars(), c.num_params()), (3, 2));
        assert_eq!(parse_circuit(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn serialization_is_exact() {
        let c = parse_circuit("g1 = in 1\ng2 = const -1\ng3 = add g1 g2\ng4 = mul g3 g3\nout g4").unwrap();
        assert_eq!(
            c.to_text(),
            "nvars 1\ng1 = in 1\ng2 = const -1\ng3 = add g1 g2\ng4 = mul g3 g3\nout g4\n"
        );
    }
}
