//! Instance files and builtin instance names.
//!
//! A file is a JSON object:
//!
//! ```json
//! { "name": "scalar", "n": 1, "lambda": [1, 1, 0, 1],
//!   "r": [[-2, 1]], "z": ["3"], "t": [1] }
//! ```
//!
//! Each scalar is an integer, a string such as `"-2/3"` or `"1/2+1i"`, a
//! pair `[num, den]`, or `[num, den, num_im, den_im]`. Tensors are flat,
//! row-major: `r` as `[n][l][k][m]`, `z` as `[n][k][q]`, `t` as `[n][m]`,
//! optional `z_tilde` as `[n][k][m]`. An optional `q` (`n²` entries) must
//! equal `λ·I`. A `tolerance` field switches to float arithmetic, where
//! plain JSON floats are accepted too.

use std::path::Path;

use qlie_core::{Approx, Exact, InstanceError, QGroupInstance, Rational, Scalar, Tensor};
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {msg}")]
    Field { field: String, msg: String },
    #[error("unknown builtin `{0}` (expected classical:N, graded:N:SIGNS or scalar1:LAMBDA:R:Z:T)")]
    Builtin(String),
    #[error("`q` must equal lambda times the identity")]
    QNotScalar,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// On-disk layout of an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default)]
    pub name: Option<String>,
    pub n: usize,
    pub lambda: Value,
    pub r: Vec<Value>,
    pub z: Vec<Value>,
    pub t: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_tilde: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// An instance in exact or float arithmetic.
#[derive(Debug, Clone)]
pub enum Loaded {
    Exact(QGroupInstance<Exact>),
    Float(QGroupInstance<Approx>),
}

impl Loaded {
    pub fn name(&self) -> &str {
        match self {
            Loaded::Exact(i) => i.name(),
            Loaded::Float(i) => i.name(),
        }
    }
}

fn field_err(field: &str, msg: impl Into<String>) -> LoadError {
    LoadError::Field { field: field.to_string(), msg: msg.into() }
}

fn int(v: &Value, field: &str) -> Result<i64, LoadError> {
    v.as_i64().ok_or_else(|| field_err(field, format!("expected an integer, got {v}")))
}

fn exact_scalar(v: &Value, field: &str) -> Result<Exact, LoadError> {
    match v {
        Value::Number(_) => Ok(Exact::from_i64(int(v, field)?)),
        Value::String(s) => Exact::parse(s).ok_or_else(|| field_err(field, format!("bad scalar \"{s}\""))),
        Value::Array(a) if a.len() == 2 || a.len() == 4 => {
            let p: Vec<i64> = a.iter().map(|x| int(x, field)).collect::<Result<_, _>>()?;
            let im = if p.len() == 4 { (p[2], p[3]) } else { (0, 1) };
            Exact::from_parts((p[0], p[1]), im).ok_or_else(|| field_err(field, "zero denominator"))
        }
        _ => Err(field_err(field, format!("unsupported scalar {v}"))),
    }
}

fn float_scalar(v: &Value, field: &str) -> Result<Approx, LoadError> {
    match v {
        Value::Number(x) => x.as_f64().map(|x| Approx::new(x, 0.0)).ok_or_else(|| field_err(field, "bad number")),
        _ => exact_scalar(v, field).map(|e| Approx::from(&e)),
    }
}

fn tensor<S: Scalar>(
    vals: &[Value],
    field: &str,
    shape: &[usize],
    conv: &dyn Fn(&Value, &str) -> Result<S, LoadError>,
) -> Result<Tensor<S>, LoadError> {
    let want: usize = shape.iter().product();
    if vals.len() != want {
        return Err(field_err(field, format!("expected {want} entries, got {}", vals.len())));
    }
    let data = vals.iter().map(|v| conv(v, field)).collect::<Result<Vec<_>, _>>()?;
    Ok(Tensor::from_vec(shape, data).expect("length checked"))
}

fn build<S: Scalar>(
    f: &InstanceFile,
    conv: &dyn Fn(&Value, &str) -> Result<S, LoadError>,
) -> Result<QGroupInstance<S>, LoadError> {
    let n = f.n;
    if n == 0 {
        return Err(InstanceError::ZeroDimension.into());
    }
    let lambda = conv(&f.lambda, "lambda")?;
    let r = tensor(&f.r, "r", &[n; 4], conv)?;
    let z = tensor(&f.z, "z", &[n; 3], conv)?;
    let t = tensor(&f.t, "t", &[n; 2], conv)?;
    let zt = f.z_tilde.as_ref().map(|v| tensor(v, "z_tilde", &[n; 3], conv)).transpose()?;
    if let Some(q) = &f.q {
        let q = tensor(q, "q", &[n; 2], conv)?;
        let tol = f.tolerance.unwrap_or(0.0);
        for a in 0..n {
            for b in 0..n {
                let want = if a == b { lambda.clone() } else { S::zero() };
                if !q.get(&[a, b]).sub(&want).is_negligible(tol) {
                    return Err(LoadError::QNotScalar);
                }
            }
        }
    }
    let name = f.name.clone().unwrap_or_else(|| String::from("unnamed"));
    let mut inst = QGroupInstance::new(name, n, r, z, t, lambda, zt)?;
    if let Some(tol) = f.tolerance {
        inst = inst.with_tolerance(tol);
    }
    Ok(inst)
}

pub fn parse_instance(text: &str) -> Result<Loaded, LoadError> {
    let f: InstanceFile = serde_json::from_str(text)?;
    if f.tolerance.is_some() {
        Ok(Loaded::Float(build(&f, &float_scalar)?))
    } else {
        Ok(Loaded::Exact(build(&f, &exact_scalar)?))
    }
}

pub fn load_path(path: &Path) -> Result<Loaded, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })?;
    parse_instance(&text)
}

/// `classical:N`, `graded:N:SIGNS` (e.g. `graded:2:+-`), `scalar1:λ:r:z:t`.
pub fn builtin(name: &str) -> Result<QGroupInstance<Exact>, LoadError> {
    let bad = || LoadError::Builtin(name.to_string());
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["classical", n] => {
            let n: usize = n.parse().map_err(|_| bad())?;
            Ok(QGroupInstance::classical(n)?)
        }
        ["graded", n, signs] => {
            let n: usize = n.parse().map_err(|_| bad())?;
            let s: Vec<i64> = signs
                .chars()
                .map(|c| match c {
                    '+' => Ok(1),
                    '-' => Ok(-1),
                    _ => Err(bad()),
                })
                .collect::<Result<_, _>>()?;
            if s.len() != n {
                return Err(bad());
            }
            Ok(QGroupInstance::graded(&s)?)
        }
        ["scalar1", lam, r, z, t] => {
            let p = |s: &str| Exact::parse(s).ok_or_else(bad);
            Ok(QGroupInstance::scalar1(p(lam)?, p(r)?, p(z)?, p(t)?)?)
        }
        _ => Err(bad()),
    }
}

/// Builtin name when it names one, otherwise a file path.
pub fn load(source: &str) -> Result<Loaded, LoadError> {
    let head = source.split(':').next().unwrap_or_default();
    if matches!(head, "classical" | "graded" | "scalar1") && !Path::new(source).exists() {
        return builtin(source).map(Loaded::Exact);
    }
    load_path(Path::new(source))
}

fn rational_parts(r: &Rational) -> Option<(i64, i64)> {
    match r {
        Rational::Small(n, d) => Some((*n, *d)),
        Rational::Big(_) => None,
    }
}

fn exact_value(x: &Exact) -> Value {
    match (rational_parts(&x.re), rational_parts(&x.im)) {
        (Some((a, b)), Some((c, d))) => serde_json::json!([a, b, c, d]),
        _ => Value::String(x.to_string()),
    }
}

/// File form of an exact instance; `parse_instance` reads it back.
pub fn to_file(inst: &QGroupInstance<Exact>) -> InstanceFile {
    let flat = |t: &Tensor<Exact>| t.data().iter().map(exact_value).collect();
    InstanceFile {
        name: Some(inst.name().to_string()),
        n: inst.n(),
        lambda: exact_value(inst.lambda()),
        r: flat(inst.r()),
        z: flat(inst.z()),
        t: flat(inst.t()),
        z_tilde: inst.z_tilde_supplied().then(|| flat(inst.z_tilde())),
        q: None,
        tolerance: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("classical:2").unwrap().n(), 2);
        assert_eq!(builtin("graded:2:+-").unwrap().r().get(&[1, 1, 1, 1]), &Exact::one());
        let s = builtin("scalar1:1/2:-3/2:1:2").unwrap();
        assert_eq!(s.lambda(), &Exact::ratio(1, 2));
        assert!(builtin("graded:3:+-").is_err());
        assert!(builtin("hecke:2").is_err());
        assert!(matches!(builtin("scalar1:-1:0:0:0"), Err(LoadError::Instance(InstanceError::LambdaMinusOne))));
    }

    #[test]
    fn file_round_trip() {
        let inst = builtin("scalar1:1:-2:3:1").unwrap();
        let text = serde_json::to_string(&to_file(&inst)).unwrap();
        match parse_instance(&text).unwrap() {
            Loaded::Exact(back) => assert_eq!(back, inst),
            Loaded::Float(_) => panic!("exact file read as float"),
        }
    }

    #[test]
    fn scalar_spellings() {
        for (v, want) in [
            (serde_json::json!(3), Exact::from_i64(3)),
            (serde_json::json!("-2/3"), Exact::ratio(-2, 3)),
            (serde_json::json!([1, 2]), Exact::ratio(1, 2)),
            (serde_json::json!([0, 1, 1, 1]), Exact::parse("1i").unwrap()),
        ] {
            assert_eq!(exact_scalar(&v, "x").unwrap(), want);
        }
        assert!(exact_scalar(&serde_json::json!(0.5), "x").is_err());
        assert_eq!(float_scalar(&serde_json::json!(0.5), "x").unwrap(), Approx::new(0.5, 0.0));
    }

    #[test]
    fn q_must_be_scalar() {
        let text = r#"{"n":1,"lambda":1,"r":[-2],"z":[0],"t":[0],"q":[2]}"#;
        assert!(matches!(parse_instance(text), Err(LoadError::QNotScalar)));
        let text = r#"{"n":1,"lambda":1,"r":[-2],"z":[0],"t":[0],"q":[1]}"#;
        assert!(parse_instance(text).is_ok());
    }

    #[test]
    fn float_mode_from_tolerance() {
        let text = r#"{"n":1,"lambda":0.5,"r":[-1.5],"z":[1],"t":[2],"tolerance":1e-10}"#;
        match parse_instance(text).unwrap() {
            Loaded::Float(i) => assert_eq!(i.tolerance(), 1e-10),
            Loaded::Exact(_) => panic!("tolerance should select float mode"),
        }
    }
}
