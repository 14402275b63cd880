//! Surface spec files: a line-based key = value format with expression
//! values for model coefficients, declared places, sections and Galois
//! data. Counts and polynomials elsewhere in the toolchain are serialized
//! as exact decimal integer strings; nothing here is floating point.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use ellsurf_core::counting::Strategy;
use ellsurf_core::field::Rationals;
use ellsurf_core::numfield::NumberField;
use ellsurf_core::poly::Poly;
use ellsurf_core::ratfunc::RatFunc;
use ellsurf_core::weierstrass::{Curve, FunctionField, Point, Section, SurfaceCurve};

use crate::expr::parse_ratfunc;

#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub name: String,
    pub field: NumberField,
    pub r: RatFunc<NumberField>,
    pub s: RatFunc<NumberField>,
    /// supplied place candidates (polynomials over Q)
    pub places: Vec<Poly<Rationals>>,
    pub primes: Vec<u64>,
    pub base_degree: usize,
    pub depth: usize,
    pub strategy: Strategy,
    /// declared extra F_q-rational divisor classes at the reduction
    pub extra_classes: usize,
    pub sections: Vec<Section<NumberField>>,
    pub generators: Vec<Section<NumberField>>,
    pub torsion_listed: Vec<Section<NumberField>>,
    pub sigmas: Vec<Poly<Rationals>>,
    pub admissible_indices: Vec<u64>,
    /// sha256 of the spec source
    pub hash: String,
    pub source: String,
}

#[derive(Debug)]
pub enum SpecError {
    Io(std::io::Error),
    Parse(String),
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SpecError::Io(e) => write!(f, "io: {e}"),
            SpecError::Parse(m) => write!(f, "spec: {m}"),
        }
    }
}

impl std::error::Error for SpecError {}

impl From<std::io::Error> for SpecError {
    fn from(e: std::io::Error) -> Self {
        SpecError::Io(e)
    }
}

pub fn sha256_hex(data: &[u8]) -> String {
    use sha2::Digest;
    let mut h = sha2::Sha256::new();
    h.update(data);
    hex::encode(h.finalize())
}

pub fn load_spec(path: &Path) -> Result<SurfaceSpec, SpecError> {
    let src = std::fs::read_to_string(path)?;
    parse_spec(&src)
}

pub fn parse_spec(src: &str) -> Result<SurfaceSpec, SpecError> {
    let mut kv: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (lineno, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, '=');
        let key = parts
            .next()
            .map(str::trim)
            .filter(|k| !k.is_empty())
            .ok_or_else(|| SpecError::Parse(format!("line {}: missing key", lineno + 1)))?;
        let value = parts
            .next()
            .map(str::trim)
            .ok_or_else(|| SpecError::Parse(format!("line {}: missing '='", lineno + 1)))?;
        kv.entry(key.to_string()).or_default().push(value.to_string());
    }
    let one = |key: &str| -> Result<String, SpecError> {
        kv.get(key)
            .and_then(|v| v.first())
            .cloned()
            .ok_or_else(|| SpecError::Parse(format!("missing key '{key}'")))
    };
    let opt = |key: &str| -> Option<String> { kv.get(key).and_then(|v| v.first()).cloned() };

    let name = one("name")?;
    let field = match opt("field").as_deref() {
        None | Some("Q") => NumberField::rationals(),
        Some(expr) => {
            // modulus polynomial in a, e.g. "a^4+1"
            let q = NumberField::rationals();
            let rf = parse_ratfunc(&q, &expr.replace('a', "t"))
                .map_err(|e| SpecError::Parse(format!("field modulus: {e:?}")))?;
            if !rf.is_polynomial() {
                return Err(SpecError::Parse("field modulus must be polynomial".into()));
            }
            let coeffs = rf
                .num
                .coeffs
                .iter()
                .map(|c| {
                    q.to_rational(c)
                        .ok_or_else(|| SpecError::Parse("modulus coefficients".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            NumberField::new(Poly::from_coeffs(&Rationals, coeffs))
                .map_err(|e| SpecError::Parse(format!("field: {e:?}")))?
        }
    };
    let parse_rf = |s: &str| -> Result<RatFunc<NumberField>, SpecError> {
        parse_ratfunc(&field, s).map_err(|e| SpecError::Parse(format!("'{s}': {e:?}")))
    };
    let r = parse_rf(&one("r")?)?;
    let s = parse_rf(&one("s")?)?;
    let mut places = Vec::new();
    if let Some(line) = opt("places") {
        let q = NumberField::rationals();
        for part in split_top_level(&line, ',') {
            let rf = parse_ratfunc(&q, part.trim())
                .map_err(|e| SpecError::Parse(format!("place '{part}': {e:?}")))?;
            if !rf.is_polynomial() {
                return Err(SpecError::Parse(format!("place '{part}' not polynomial")));
            }
            let coeffs = rf
                .num
                .coeffs
                .iter()
                .map(|c| q.to_rational(c).unwrap())
                .collect();
            places.push(Poly::from_coeffs(&Rationals, coeffs).into_monic(&Rationals));
        }
    }
    let primes = match opt("prime") {
        Some(line) => line
            .split_whitespace()
            .map(|w| {
                w.parse::<u64>()
                    .map_err(|_| SpecError::Parse(format!("prime '{w}'")))
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };
    let base_degree = match opt("base_degree") {
        Some(v) => v
            .parse()
            .map_err(|_| SpecError::Parse("base_degree".into()))?,
        None => 1,
    };
    let depth = match opt("depth") {
        Some(v) => v.parse().map_err(|_| SpecError::Parse("depth".into()))?,
        None => 2,
    };
    let strategy = match opt("strategy").as_deref() {
        None | Some("auto") => Strategy::default(),
        Some("char-sum") => Strategy::CharSum,
        Some("bsgs") => Strategy::Bsgs,
        Some(other) => return Err(SpecError::Parse(format!("strategy '{other}'"))),
    };
    let extra_classes = match opt("extra_classes") {
        Some(v) => v
            .parse()
            .map_err(|_| SpecError::Parse("extra_classes".into()))?,
        None => 0,
    };
    let parse_sections = |key: &str| -> Result<Vec<Section<NumberField>>, SpecError> {
        let mut out = Vec::new();
        for line in kv.get(key).cloned().unwrap_or_default() {
            for part in split_top_level(&line, ';') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                if part == "O" || part == "inf" {
                    out.push(Point::Infinity);
                    continue;
                }
                let inner = part
                    .strip_prefix('(')
                    .and_then(|p| p.strip_suffix(')'))
                    .ok_or_else(|| SpecError::Parse(format!("section '{part}'")))?;
                let coords: Vec<&str> = split_top_level(inner, ',');
                if coords.len() != 2 {
                    return Err(SpecError::Parse(format!("section '{part}'")));
                }
                let x = parse_rf(coords[0].trim())?;
                let yv = parse_rf(coords[1].trim())?;
                out.push(Point::Affine(x, yv));
            }
        }
        Ok(out)
    };
    let sections = parse_sections("sections")?;
    let generators = parse_sections("generators")?;
    let torsion_listed = parse_sections("torsion")?;
    let mut sigmas = Vec::new();
    for line in kv.get("sigma").cloned().unwrap_or_default() {
        let q = NumberField::rationals();
        let rf = parse_ratfunc(&q, &line.replace('a', "t"))
            .map_err(|e| SpecError::Parse(format!("sigma '{line}': {e:?}")))?;
        if !rf.is_polynomial() {
            return Err(SpecError::Parse(format!("sigma '{line}' not polynomial")));
        }
        let coeffs = rf
            .num
            .coeffs
            .iter()
            .map(|c| q.to_rational(c).unwrap())
            .collect();
        sigmas.push(Poly::from_coeffs(&Rationals, coeffs));
    }
    let admissible_indices = match opt("admissible_indices") {
        Some(line) => line
            .split_whitespace()
            .map(|w| {
                w.parse::<u64>()
                    .map_err(|_| SpecError::Parse(format!("index '{w}'")))
            })
            .collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
    };

    let curve_check = Curve::new(FunctionField::new(field.clone()), r.clone(), s.clone());
    for (i, sec) in sections
        .iter()
        .chain(generators.iter())
        .chain(torsion_listed.iter())
        .enumerate()
    {
        if !curve_check.contains(sec) {
            return Err(SpecError::Parse(format!(
                "declared section {i} does not satisfy the model equation"
            )));
        }
    }

    Ok(SurfaceSpec {
        name,
        field,
        r,
        s,
        places,
        primes,
        base_degree,
        depth,
        strategy,
        extra_classes,
        sections,
        generators,
        torsion_listed,
        sigmas,
        admissible_indices,
        hash: sha256_hex(src.as_bytes()),
        source: src.to_string(),
    })
}

/// Split on a separator at parenthesis depth zero.
pub fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl SurfaceSpec {
    pub fn curve(&self) -> SurfaceCurve<NumberField> {
        Curve::new(
            FunctionField::new(self.field.clone()),
            self.r.clone(),
            self.s.clone(),
        )
    }

    /// The model with rational coefficients, required by reduction and
    /// counting; errors when the model genuinely needs the number field.
    pub fn rational_curve(&self) -> Result<SurfaceCurve<Rationals>, SpecError> {
        let k = &self.field;
        let lower = |rf: &RatFunc<NumberField>| -> Result<RatFunc<Rationals>, SpecError> {
            let conv = |p: &Poly<NumberField>| -> Result<Poly<Rationals>, SpecError> {
                p.coeffs
                    .iter()
                    .map(|c| {
                        k.to_rational(c)
                            .ok_or_else(|| SpecError::Parse("model is not over Q(t)".into()))
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map(|cs| Poly::from_coeffs(&Rationals, cs))
            };
            Ok(RatFunc::new(&Rationals, conv(&rf.num)?, conv(&rf.den)?))
        };
        Ok(Curve::new(
            FunctionField::new(Rationals),
            lower(&self.r)?,
            lower(&self.s)?,
        ))
    }

    pub fn describe(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "name = {}", self.name);
        let _ = writeln!(out, "spec_sha256 = {}", self.hash);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_minimal_spec() {
        let spec = parse_spec(
            "name = e1\nr = (t-1)^2\ns = 4*t\nprime = 17\ndepth = 3\n",
        )
        .unwrap();
        assert_eq!(spec.name, "e1");
        assert_eq!(spec.primes, vec![17]);
        assert_eq!(spec.depth, 3);
        assert!(spec.rational_curve().is_ok());
    }

    #[test]
    fn sections_are_verified() {
        // (1-t, 1-t) on the twisted equation -t(-1+5t) y^2 = x(x-(t-1)^2)(x-4t)
        // becomes (u x, u^2 y) with u = t(1-5t) on the factored model
        let ok = parse_spec(
            "name = x\nr = t*(1-5*t)*(t-1)^2\ns = 4*t^2*(1-5*t)\n\
             sections = (t*(1-5*t)*(1-t), t^2*(1-5*t)^2*(1-t))\n",
        );
        assert!(ok.is_ok(), "{:?}", ok.err().map(|e| e.to_string()));
        let bad = parse_spec(
            "name = x\nr = t*(1-5*t)*(t-1)^2\ns = 4*t^2*(1-5*t)\nsections = (1-t, 2-t)\n",
        );
        assert!(bad.is_err());
    }

    #[test]
    fn zeta8_field_and_generator_sections() {
        let src = "name = k3\nfield = a^4+1\nr = (t^2-1)^2\ns = 4*t^2\n\
                   generators = (2*(t-1)^2, 2*(t-1)^2*(t^2+2*t-1))\n\
                   sigma = -a^3\n";
        let spec = parse_spec(src).unwrap();
        assert_eq!(spec.field.degree, 4);
        assert_eq!(spec.generators.len(), 1);
        assert_eq!(spec.sigmas.len(), 1);
    }
}
