//! Textual knot inputs: Dowker–Thistlethwaite codes, braid words and the
//! structural expression grammar.
//!
//! ```text
//! expr := "torus(" int "," int ")"
//!       | "cable(" int "," int ";" expr ")"
//!       | "sum(" expr { "," expr }+ ")"
//!       | "dt[" dt-text "]"
//!       | "braid[" braid-text "]"
//!       | "table(" name ")"
//! ```

use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::census::CensusTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotationError {
    #[error("trivial knot rejected: {0}")]
    TrivialKnotRejected(String),
    #[error("malformed DT code: {0}")]
    MalformedDt(String),
    #[error("braid closure is not a knot: {components} components")]
    NotAKnot { components: usize },
    #[error("malformed braid word: {0}")]
    MalformedBraid(String),
    #[error("gcd({0}, {1}) = {2}, parameters must be coprime")]
    GcdViolation(i64, i64, i64),
    #[error("unknown table name `{0}`")]
    UnknownTableName(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

/// Dowker–Thistlethwaite code: entry `i` is the signed even label paired
/// with the odd label `2i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DtCode {
    pairs: Vec<i64>,
}

impl DtCode {
    pub fn new(pairs: Vec<i64>) -> Result<Self, NotationError> {
        let n = pairs.len();
        if n < 2 {
            return Err(NotationError::TrivialKnotRejected(format!(
                "a DT code with {n} crossing(s) describes the unknot"
            )));
        }
        let mut seen = vec![false; n];
        for &v in &pairs {
            let a = v.unsigned_abs() as usize;
            if !a.is_multiple_of(2) {
                return Err(NotationError::MalformedDt(format!("odd entry {v}")));
            }
            if a < 2 || a > 2 * n {
                return Err(NotationError::MalformedDt(format!(
                    "entry {v} out of range for {n} crossings"
                )));
            }
            if std::mem::replace(&mut seen[a / 2 - 1], true) {
                return Err(NotationError::MalformedDt(format!("repeated label {a}")));
            }
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[i64] {
        &self.pairs
    }

    pub fn crossings(&self) -> usize {
        self.pairs.len()
    }
}

impl fmt::Display for DtCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(i64::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Braid word on `strands` strands; letter `i` is `σ_i`, `-i` is `σ_i⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i64>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i64>) -> Result<Self, NotationError> {
        if strands < 2 {
            return Err(NotationError::MalformedBraid(format!(
                "need at least 2 strands, got {strands}"
            )));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(NotationError::MalformedBraid(format!(
                    "letter {l} invalid on {strands} strands"
                )));
            }
        }
        let components = closure_components(strands, &letters);
        if components != 1 {
            return Err(NotationError::NotAKnot { components });
        }
        if letters.len() < 2 {
            return Err(NotationError::TrivialKnotRejected(format!(
                "braid closure with {} crossing(s) is the unknot",
                letters.len()
            )));
        }
        Ok(Self { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i64] {
        &self.letters
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}:", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// Number of cycles of the strand permutation, i.e. link components.
pub(crate) fn closure_components(strands: usize, letters: &[i64]) -> usize {
    let mut perm: Vec<usize> = (0..strands).collect();
    for &l in letters {
        let i = l.unsigned_abs() as usize;
        perm.swap(i - 1, i);
    }
    let mut seen = vec![false; strands];
    let mut cycles = 0;
    for s in 0..strands {
        if seen[s] {
            continue;
        }
        cycles += 1;
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            c = perm[c];
        }
    }
    cycles
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DiagramSource {
    Dt(DtCode),
    Braid(BraidWord),
}

impl DiagramSource {
    pub fn crossings(&self) -> usize {
        match self {
            DiagramSource::Dt(d) => d.crossings(),
            DiagramSource::Braid(b) => b.letters().len(),
        }
    }
}

/// Structural description of a knot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum KnotExpression {
    Torus {
        p: i64,
        q: i64,
    },
    Cable {
        a: i64,
        b: i64,
        companion: Box<KnotExpression>,
    },
    Sum(Vec<KnotExpression>),
    FromDiagram {
        source: DiagramSource,
        name: Option<String>,
    },
}

impl KnotExpression {
    pub fn torus(p: i64, q: i64) -> Result<Self, NotationError> {
        check_coprime(p, q)?;
        if p.abs() < 2 || q.abs() < 2 {
            return Err(NotationError::TrivialKnotRejected(format!(
                "torus({p},{q}) is the unknot"
            )));
        }
        Ok(Self::Torus { p, q })
    }

    pub fn cable(a: i64, b: i64, companion: KnotExpression) -> Result<Self, NotationError> {
        check_coprime(a, b)?;
        if a.abs() < 2 {
            return Err(NotationError::TrivialKnotRejected(format!(
                "cable({a},{b}; ..) has a trivial pattern"
            )));
        }
        Ok(Self::Cable {
            a,
            b,
            companion: Box::new(companion),
        })
    }

    pub fn sum(factors: Vec<KnotExpression>) -> Result<Self, NotationError> {
        if factors.len() < 2 {
            return Err(NotationError::Syntax {
                pos: 0,
                msg: "sum needs at least two factors".into(),
            });
        }
        Ok(Self::Sum(factors))
    }

    /// Flattened list of summands; a non-sum is its own single summand.
    pub fn summands(&self) -> Vec<&KnotExpression> {
        match self {
            KnotExpression::Sum(fs) => fs.iter().flat_map(|f| f.summands()).collect(),
            other => vec![other],
        }
    }
}

fn check_coprime(a: i64, b: i64) -> Result<(), NotationError> {
    let g = a.gcd(&b);
    if g != 1 {
        return Err(NotationError::GcdViolation(a, b, g));
    }
    Ok(())
}

impl fmt::Display for KnotExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KnotExpression::Torus { p, q } => write!(f, "torus({p},{q})"),
            KnotExpression::Cable { a, b, companion } => write!(f, "cable({a},{b}; {companion})"),
            KnotExpression::Sum(fs) => {
                f.write_str("sum(")?;
                for (i, k) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}")?;
                }
                f.write_str(")")
            }
            KnotExpression::FromDiagram { name: Some(n), .. } => write!(f, "table({n})"),
            KnotExpression::FromDiagram {
                source: DiagramSource::Dt(d),
                ..
            } => write!(f, "dt[{d}]"),
            KnotExpression::FromDiagram {
                source: DiagramSource::Braid(b),
                ..
            } => {
                write!(f, "braid[{b}]")
            }
        }
    }
}

fn parse_int_list(text: &str) -> Option<Vec<i64>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().ok())
        .collect()
}

pub fn parse_dt(text: &str) -> Result<DtCode, NotationError> {
    let pairs = parse_int_list(text)
        .ok_or_else(|| NotationError::MalformedDt(format!("not an integer list: `{text}`")))?;
    DtCode::new(pairs)
}

pub fn parse_braid(text: &str) -> Result<BraidWord, NotationError> {
    let text = text.trim();
    let rest = text.strip_prefix('B').ok_or_else(|| {
        NotationError::MalformedBraid(format!("expected `B<strands>:`, got `{text}`"))
    })?;
    let (head, body) = rest
        .split_once(':')
        .ok_or_else(|| NotationError::MalformedBraid("missing `:`".into()))?;
    let strands = head
        .trim()
        .parse::<usize>()
        .map_err(|_| NotationError::MalformedBraid(format!("bad strand count `{head}`")))?;
    let letters = parse_int_list(body)
        .ok_or_else(|| NotationError::MalformedBraid(format!("bad letters `{body}`")))?;
    BraidWord::new(strands, letters)
}

/// Parse a knot expression. `table(..)` entries resolve through `census`.
pub fn parse_knot_expr(
    text: &str,
    census: Option<&CensusTable>,
) -> Result<KnotExpression, NotationError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        census,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    census: Option<&'a CensusTable>,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> NotationError {
        NotationError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), NotationError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{tok}`")))
        }
    }

    fn int(&mut self) -> Result<i64, NotationError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .take_while(|&(i, c)| c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+')))
            .count();
        let v = rest[..len]
            .parse::<i64>()
            .map_err(|_| self.err("expected integer"))?;
        self.pos += len;
        Ok(v)
    }

    /// Raw text up to the closing delimiter.
    fn until(&mut self, close: char) -> Result<&'a str, NotationError> {
        let rest = self.rest();
        let end = rest
            .find(close)
            .ok_or_else(|| self.err(&format!("missing `{close}`")))?;
        self.pos += end + close.len_utf8();
        Ok(&rest[..end])
    }

    fn expr(&mut self) -> Result<KnotExpression, NotationError> {
        if self.eat("torus(") {
            let p = self.int()?;
            self.expect(",")?;
            let q = self.int()?;
            self.expect(")")?;
            KnotExpression::torus(p, q)
        } else if self.eat("cable(") {
            let a = self.int()?;
            self.expect(",")?;
            let b = self.int()?;
            self.expect(";")?;
            let companion = self.expr()?;
            self.expect(")")?;
            KnotExpression::cable(a, b, companion)
        } else if self.eat("sum(") {
            let mut factors = vec![self.expr()?];
            while self.eat(",") {
                factors.push(self.expr()?);
            }
            self.expect(")")?;
            if factors.len() < 2 {
                return Err(self.err("sum needs at least two factors"));
            }
            KnotExpression::sum(factors)
        } else if self.eat("dt[") {
            let body = self.until(']')?;
            Ok(KnotExpression::FromDiagram {
                source: DiagramSource::Dt(parse_dt(body)?),
                name: None,
            })
        } else if self.eat("braid[") {
            let body = self.until(']')?;
            Ok(KnotExpression::FromDiagram {
                source: DiagramSource::Braid(parse_braid(body)?),
                name: None,
            })
        } else if self.eat("table(") {
            let name = self.until(')')?.trim().to_string();
            let census = self
                .census
                .ok_or_else(|| NotationError::UnknownTableName(name.clone()))?;
            let entry = census
                .lookup(&name)
                .map_err(|_| NotationError::UnknownTableName(name.clone()))?;
            Ok(KnotExpression::FromDiagram {
                source: DiagramSource::Dt(entry.dt.clone()),
                name: Some(name),
            })
        } else {
            Err(self.err("expected torus(, cable(, sum(, dt[, braid[ or table("))
        }
    }
}

/// Parse a file body: one expression per line, `#` starts a comment.
pub fn parse_expression_lines(
    body: &str,
    census: Option<&CensusTable>,
) -> Vec<(usize, Result<KnotExpression, NotationError>)> {
    body.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then(|| (i + 1, parse_knot_expr(line, census)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dt_examples() {
        assert_eq!(parse_dt("4 6 2").unwrap().pairs(), &[4, 6, 2]);
        assert_eq!(parse_dt("4, 6, 8, 2").unwrap().pairs(), &[4, 6, 8, 2]);
        assert!(matches!(
            parse_dt("2"),
            Err(NotationError::TrivialKnotRejected(_))
        ));
        assert!(matches!(
            parse_dt("4 4 2"),
            Err(NotationError::MalformedDt(_))
        ));
        assert!(matches!(
            parse_dt("3 6 2"),
            Err(NotationError::MalformedDt(_))
        ));
        assert!(matches!(
            parse_dt("4 6 8"),
            Err(NotationError::MalformedDt(_))
        ));
        assert!(matches!(
            parse_dt("4 x 2"),
            Err(NotationError::MalformedDt(_))
        ));
    }

    #[test]
    fn braid_examples() {
        let b = parse_braid("B2: 1 1 1").unwrap();
        assert_eq!((b.strands(), b.letters()), (2, &[1, 1, 1][..]));
        assert_eq!(
            parse_braid("B2: 1 1"),
            Err(NotationError::NotAKnot { components: 2 })
        );
        let b = parse_braid("B3: 1 -2 1 -2").unwrap();
        assert_eq!(b.letters(), &[1, -2, 1, -2]);
        assert!(matches!(
            parse_braid("B2: 2"),
            Err(NotationError::MalformedBraid(_))
        ));
        assert!(matches!(
            parse_braid("2: 1"),
            Err(NotationError::MalformedBraid(_))
        ));
        assert!(matches!(
            parse_braid("B2: 1"),
            Err(NotationError::TrivialKnotRejected(_))
        ));
    }

    #[test]
    fn expression_examples() {
        assert_eq!(
            parse_knot_expr("torus(2,3)", None).unwrap(),
            KnotExpression::Torus { p: 2, q: 3 }
        );
        assert_eq!(
            parse_knot_expr("torus(2,4)", None),
            Err(NotationError::GcdViolation(2, 4, 2))
        );
        assert!(matches!(
            parse_knot_expr("torus(1,5)", None),
            Err(NotationError::TrivialKnotRejected(_))
        ));
        let c = parse_knot_expr("cable(2,3; torus(2,5))", None).unwrap();
        assert_eq!(
            c,
            KnotExpression::Cable {
                a: 2,
                b: 3,
                companion: Box::new(KnotExpression::Torus { p: 2, q: 5 })
            }
        );
        assert!(matches!(
            parse_knot_expr("cable(1,3; torus(2,5))", None),
            Err(NotationError::TrivialKnotRejected(_))
        ));
        assert!(matches!(
            parse_knot_expr("cable(2,0; torus(2,5))", None),
            Err(NotationError::GcdViolation(..))
        ));
        assert!(matches!(
            parse_knot_expr("sum(torus(2,3))", None),
            Err(NotationError::Syntax { .. })
        ));
        assert!(matches!(
            parse_knot_expr("table(3_1)", None),
            Err(NotationError::UnknownTableName(_))
        ));
        assert!(matches!(
            parse_knot_expr("torus(2,3) x", None),
            Err(NotationError::Syntax { .. })
        ));
    }

    #[test]
    fn display_reparses() {
        for s in [
            "torus(2,-3)",
            "cable(3,-7; sum(torus(2,3), dt[4 6 8 2]))",
            "sum(torus(2,3), torus(2,5), braid[B3: 1 -2 1 -2])",
        ] {
            let e = parse_knot_expr(s, None).unwrap();
            assert_eq!(e.to_string(), s);
            assert_eq!(parse_knot_expr(&e.to_string(), None).unwrap(), e);
        }
    }

    #[test]
    fn file_lines_skip_comments() {
        let body =
            "# header\ntorus(2,3)\n\n  sum(torus(2,3), torus(2,5)) # granny-ish\ntorus(2,4)\n";
        let out = parse_expression_lines(body, None);
        assert_eq!(out.len(), 3);
        assert_eq!(out[0].0, 2);
        assert!(out[2].1.is_err());
    }
}
