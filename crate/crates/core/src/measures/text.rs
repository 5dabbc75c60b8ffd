//! Canonical text form of the families, e.g. `PowerDensity(a=0.5)` or
//! `Levy(pos=Sum[StableLike(beta0=1.3,c=1),ParetoTail(eta=3,scale=1)],neg=Sum[])`.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so
//! `parse(x.to_string()) == x` holds exactly.

use std::str::FromStr;

use super::{Atom, JumpLaw, LevyFamily, LevyPart, MeasureFamily, PiVariant, Segment};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Num(f64),
    Node(Node),
    Tuples(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Call { name: String, args: Vec<(String, Value)> },
    Seq { name: String, items: Vec<Node> },
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            s: s.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos || self.s[start].is_ascii_digit() {
            return Err(self.err("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len()
            && (self.s[self.pos].is_ascii_alphanumeric() || b"+-.".contains(&self.s[self.pos]))
        {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).map_err(|_| self.err("bad utf-8"))?;
        txt.parse::<f64>()
            .map_err(|_| Error::Parse(format!("invalid number '{txt}' at byte {start}")))
    }

    fn node(&mut self) -> Result<Node> {
        let name = self.ident()?;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let mut args = Vec::new();
                if self.peek() != Some(b')') {
                    loop {
                        let key = self.ident()?;
                        self.expect(b'=')?;
                        let v = self.value()?;
                        args.push((key, v));
                        if self.peek() == Some(b',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(b')')?;
                Ok(Node::Call { name, args })
            }
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                if self.peek() != Some(b']') {
                    loop {
                        items.push(self.node()?);
                        if self.peek() == Some(b',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(b']')?;
                Ok(Node::Seq { name, items })
            }
            _ => Err(self.err("expected '(' or '['")),
        }
    }

    fn value(&mut self) -> Result<Value> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let mut rows = Vec::new();
                if self.peek() != Some(b']') {
                    loop {
                        let mut row = vec![self.number()?];
                        while self.peek() == Some(b':') {
                            self.pos += 1;
                            row.push(self.number()?);
                        }
                        rows.push(row);
                        if self.peek() == Some(b';') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(b']')?;
                Ok(Value::Tuples(rows))
            }
            Some(c) if c.is_ascii_alphabetic() && !self.looks_numeric() => {
                Ok(Value::Node(self.node()?))
            }
            _ => Ok(Value::Num(self.number()?)),
        }
    }

    fn looks_numeric(&self) -> bool {
        let rest = &self.s[self.pos..];
        rest.starts_with(b"inf") || rest.starts_with(b"NaN")
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(())
    }
}

fn parse_node(s: &str) -> Result<Node> {
    let mut p = Parser::new(s);
    let n = p.node()?;
    p.finish()?;
    Ok(n)
}

struct Args {
    family: String,
    args: Vec<(String, Value)>,
}

impl Args {
    fn new(family: &str, args: Vec<(String, Value)>, allowed: &[&str]) -> Result<Self> {
        for (k, _) in &args {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::Parse(format!("{family}: unknown parameter '{k}'")));
            }
        }
        Ok(Args {
            family: family.to_string(),
            args,
        })
    }

    fn take(&mut self, key: &str) -> Result<Value> {
        let i = self
            .args
            .iter()
            .position(|(k, _)| k == key)
            .ok_or_else(|| Error::Parse(format!("{}: missing parameter '{key}'", self.family)))?;
        Ok(self.args.remove(i).1)
    }

    fn num(&mut self, key: &str) -> Result<f64> {
        match self.take(key)? {
            Value::Num(x) => Ok(x),
            _ => Err(Error::Parse(format!("{}: '{key}' must be a number", self.family))),
        }
    }

    fn node(&mut self, key: &str) -> Result<Node> {
        match self.take(key)? {
            Value::Node(n) => Ok(n),
            _ => Err(Error::Parse(format!("{}: '{key}' must be a family", self.family))),
        }
    }

    fn tuples(&mut self, key: &str, width: usize) -> Result<Vec<Vec<f64>>> {
        match self.take(key)? {
            Value::Tuples(rows) if rows.iter().all(|r| r.len() == width) => Ok(rows),
            _ => Err(Error::Parse(format!(
                "{}: '{key}' must be a list of {width}-tuples",
                self.family
            ))),
        }
    }
}

fn pi_from_node(node: Node) -> Result<MeasureFamily> {
    let Node::Call { name, args } = node else {
        return Err(Error::Parse("expected a pi family".into()));
    };
    let variant = match name.as_str() {
        "PointMass" => PiVariant::PointMass {
            x0: Args::new(&name, args, &["x0"])?.num("x0")?,
        },
        "PowerDensity" => PiVariant::PowerDensity {
            a: Args::new(&name, args, &["a"])?.num("a")?,
        },
        "GammaDensity" => {
            let mut a = Args::new(&name, args, &["shape", "rate"])?;
            PiVariant::GammaDensity {
                shape: a.num("shape")?,
                rate: a.num("rate")?,
            }
        }
        "DyadicExotic" => PiVariant::DyadicExotic {
            a: Args::new(&name, args, &["a"])?.num("a")?,
        },
        "Tabulated" => {
            let mut a = Args::new(&name, args, &["atoms", "segments"])?;
            let atoms = a
                .tuples("atoms", 2)?
                .into_iter()
                .map(|r| Atom { x: r[0], mass: r[1] })
                .collect();
            let segments = a
                .tuples("segments", 4)?
                .into_iter()
                .map(|r| Segment {
                    lo: r[0],
                    hi: r[1],
                    coef: r[2],
                    power: r[3],
                })
                .collect();
            PiVariant::Tabulated { atoms, segments }
        }
        other => return Err(Error::Parse(format!("unknown pi family '{other}'"))),
    };
    MeasureFamily::new(variant)
}

fn jumps_from_node(node: Node) -> Result<JumpLaw> {
    let Node::Call { name, args } = node else {
        return Err(Error::Parse("expected a jump law".into()));
    };
    Ok(match name.as_str() {
        "Fixed" => JumpLaw::Fixed {
            size: Args::new(&name, args, &["size"])?.num("size")?,
        },
        "Discrete" => JumpLaw::Discrete {
            atoms: Args::new(&name, args, &["atoms"])?
                .tuples("atoms", 2)?
                .into_iter()
                .map(|r| (r[0], r[1]))
                .collect(),
        },
        "Uniform" => {
            let mut a = Args::new(&name, args, &["lo", "hi"])?;
            JumpLaw::Uniform {
                lo: a.num("lo")?,
                hi: a.num("hi")?,
            }
        }
        "Exponential" => JumpLaw::Exponential {
            rate: Args::new(&name, args, &["rate"])?.num("rate")?,
        },
        "ShiftedExponential" => {
            let mut a = Args::new(&name, args, &["shift", "rate"])?;
            JumpLaw::ShiftedExponential {
                shift: a.num("shift")?,
                rate: a.num("rate")?,
            }
        }
        other => return Err(Error::Parse(format!("unknown jump law '{other}'"))),
    })
}

fn part_from_node(node: Node) -> Result<LevyPart> {
    match node {
        Node::Seq { name, items } => {
            if name != "Sum" {
                return Err(Error::Parse(format!("unknown list family '{name}'")));
            }
            Ok(LevyPart::Sum(
                items.into_iter().map(part_from_node).collect::<Result<_>>()?,
            ))
        }
        Node::Call { name, args } => Ok(match name.as_str() {
            "CompoundPoisson" => {
                let mut a = Args::new(&name, args, &["rate", "jumps"])?;
                LevyPart::CompoundPoisson {
                    rate: a.num("rate")?,
                    jumps: jumps_from_node(a.node("jumps")?)?,
                }
            }
            "StableLike" => {
                let mut a = Args::new(&name, args, &["beta0", "c"])?;
                LevyPart::StableLike {
                    beta0: a.num("beta0")?,
                    c: a.num("c")?,
                }
            }
            "TemperedStable" => {
                let mut a = Args::new(&name, args, &["beta0", "theta", "c"])?;
                LevyPart::TemperedStable {
                    beta0: a.num("beta0")?,
                    theta: a.num("theta")?,
                    c: a.num("c")?,
                }
            }
            "ParetoTail" => {
                let mut a = Args::new(&name, args, &["eta", "scale"])?;
                LevyPart::ParetoTail {
                    eta: a.num("eta")?,
                    scale: a.num("scale")?,
                }
            }
            "DyadicExotic" => LevyPart::DyadicExotic {
                b: Args::new(&name, args, &["b"])?.num("b")?,
            },
            "Scaled" => {
                let mut a = Args::new(&name, args, &["factor", "inner"])?;
                LevyPart::Scaled {
                    factor: a.num("factor")?,
                    inner: Box::new(part_from_node(a.node("inner")?)?),
                }
            }
            other => return Err(Error::Parse(format!("unknown lambda family '{other}'"))),
        }),
    }
}

impl FromStr for MeasureFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        pi_from_node(parse_node(s)?)
    }
}

impl FromStr for LevyPart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let p = part_from_node(parse_node(s)?)?;
        p.check_params(false)?;
        Ok(p)
    }
}

impl FromStr for JumpLaw {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        jumps_from_node(parse_node(s)?)
    }
}

impl FromStr for LevyFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match parse_node(s)? {
            Node::Call { name, args } if name == "Levy" => {
                let mut a = Args::new(&name, args, &["pos", "neg"])?;
                let pos = part_from_node(a.node("pos")?)?;
                let neg = part_from_node(a.node("neg")?)?;
                LevyFamily::new(pos, neg)
            }
            _ => Err(Error::Parse("expected Levy(pos=...,neg=...)".into())),
        }
    }
}
