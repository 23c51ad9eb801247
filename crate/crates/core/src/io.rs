//! Text file formats for curves, correspondences, divisors and reports.
//! Rationals are "p/q" strings; coefficient lists ascend in degree; number
//! field elements are coordinate vectors in the power basis.

use crate::certify::CertReport;
use crate::curves::{validate_curve, Correspondence, CurveModel, MumfordDivisor};
use crate::error::{Error, Result};
use crate::exact::{AlgebraicNumber, CurveFn, CurveRing, Field, NumberField, Poly, RatFunc};
use rug::{Integer, Rational};
use serde_json::{json, Map, Value};
use std::sync::Arc;

type K = AlgebraicNumber;

fn rational_to_string(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn rational_from_str(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<Integer> {
        Integer::parse(t)
            .map(Integer::from)
            .map_err(|_| Error::Parse(format!("bad integer: {t}")))
    };
    if let Some((n, d)) = s.split_once('/') {
        let num = parse_int(n)?;
        let den = parse_int(d)?;
        if den == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational::from((num, den)))
    } else {
        Ok(Rational::from(parse_int(s)?))
    }
}

pub fn field_to_json(field: &Arc<NumberField>) -> Value {
    json!({
        "min_poly": field.min_poly_coeffs().iter().map(|c| c.to_i64().unwrap_or(0)).collect::<Vec<i64>>(),
        "embedding": field.seed(),
    })
}

pub fn field_from_json(v: &Value) -> Result<Arc<NumberField>> {
    let mp: Vec<i64> = v
        .get("min_poly")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::Parse("field.min_poly missing".into()))?
        .iter()
        .map(|c| c.as_i64().ok_or_else(|| Error::Parse("bad min_poly".into())))
        .collect::<Result<_>>()?;
    let emb = v
        .get("embedding")
        .and_then(|x| x.as_str())
        .ok_or_else(|| Error::Parse("field.embedding missing".into()))?;
    Ok(NumberField::new(mp, emb, "K"))
}

pub fn algebraic_to_json(x: &K) -> Value {
    Value::Array(
        x.coords()
            .iter()
            .map(|q| Value::String(rational_to_string(q)))
            .collect(),
    )
}

pub fn algebraic_from_json(v: &Value, field: &Arc<NumberField>) -> Result<K> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("coefficient must be an array".into()))?;
    if arr.len() != field.degree() {
        return Err(Error::Parse(format!(
            "coefficient has {} coordinates, field degree is {}",
            arr.len(),
            field.degree()
        )));
    }
    let coords: Result<Vec<Rational>> = arr
        .iter()
        .map(|s| {
            s.as_str()
                .ok_or_else(|| Error::Parse("coordinate must be a string".into()))
                .and_then(rational_from_str)
        })
        .collect();
    Ok(field.element(coords?))
}

pub fn poly_to_json(p: &Poly<K>) -> Value {
    Value::Array(p.coeffs().iter().map(algebraic_to_json).collect())
}

pub fn poly_from_json(v: &Value, field: &Arc<NumberField>) -> Result<Poly<K>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse("polynomial must be an array".into()))?;
    let coeffs: Result<Vec<K>> = arr.iter().map(|c| algebraic_from_json(c, field)).collect();
    Ok(Poly::new(&field.zero(), coeffs?))
}

pub fn curve_to_json(curve: &CurveModel<K>) -> Value {
    let field = curve.h.ctx().field();
    json!({
        "field": field_to_json(field),
        "h": poly_to_json(&curve.h),
    })
}

pub fn curve_from_json(v: &Value) -> Result<CurveModel<K>> {
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::Parse("curve.field missing".into()))?,
    )?;
    let h = poly_from_json(
        v.get("h")
            .ok_or_else(|| Error::Parse("curve.h missing".into()))?,
        &field,
    )?;
    validate_curve(h)
}

fn curvefn_to_json(f: &CurveFn<K>) -> Value {
    json!({
        "a_num": poly_to_json(f.a.num()),
        "a_den": poly_to_json(f.a.den()),
        "b_num": poly_to_json(f.b.num()),
        "b_den": poly_to_json(f.b.den()),
    })
}

fn curvefn_from_json(
    v: &Value,
    ring: &Arc<CurveRing<K>>,
    field: &Arc<NumberField>,
) -> Result<CurveFn<K>> {
    let get = |k: &str| -> Result<Poly<K>> {
        poly_from_json(
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("correspondence field {k} missing")))?,
            field,
        )
    };
    let a = RatFunc::new(get("a_num")?, get("a_den")?)?;
    let b = RatFunc::new(get("b_num")?, get("b_den")?)?;
    Ok(ring.elem(a, b))
}

pub fn correspondence_to_json(corr: &Correspondence<K>) -> Value {
    let mut m = Map::new();
    m.insert(
        "field".into(),
        field_to_json(corr.curve.h.ctx().field()),
    );
    m.insert("h".into(), poly_to_json(&corr.curve.h));
    m.insert(
        "F".into(),
        Value::Array(vec![
            curvefn_to_json(&corr.f0),
            curvefn_to_json(&corr.f1),
            curvefn_to_json(&corr.f2),
        ]),
    );
    m.insert(
        "y".into(),
        Value::Array(vec![curvefn_to_json(&corr.y0), curvefn_to_json(&corr.y1)]),
    );
    m.insert("disc".into(), json!(corr.disc));
    Value::Object(m)
}

pub fn correspondence_from_json(v: &Value) -> Result<Correspondence<K>> {
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::Parse("correspondence.field missing".into()))?,
    )?;
    let h = poly_from_json(
        v.get("h")
            .ok_or_else(|| Error::Parse("correspondence.h missing".into()))?,
        &field,
    )?;
    let curve = validate_curve(h.clone())?;
    let ring = CurveRing::new(h);
    let f = v
        .get("F")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::Parse("correspondence.F missing".into()))?;
    if f.len() != 3 {
        return Err(Error::Parse("correspondence.F must have three entries".into()));
    }
    let y = v
        .get("y")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::Parse("correspondence.y missing".into()))?;
    if y.len() != 2 {
        return Err(Error::Parse("correspondence.y must have two entries".into()));
    }
    let disc = v
        .get("disc")
        .and_then(|x| x.as_i64())
        .ok_or_else(|| Error::Parse("correspondence.disc missing".into()))?;
    Correspondence::new(
        curve,
        curvefn_from_json(&f[2], &ring, &field)?,
        curvefn_from_json(&f[1], &ring, &field)?,
        curvefn_from_json(&f[0], &ring, &field)?,
        curvefn_from_json(&y[0], &ring, &field)?,
        curvefn_from_json(&y[1], &ring, &field)?,
        disc,
    )
}

pub fn divisor_to_json(d: &MumfordDivisor<K>) -> Value {
    json!({
        "a": poly_to_json(&d.a),
        "b": poly_to_json(&d.b),
        "n_plus": d.n_plus,
    })
}

pub fn divisor_from_json(v: &Value, field: &Arc<NumberField>) -> Result<MumfordDivisor<K>> {
    let a = poly_from_json(
        v.get("a").ok_or_else(|| Error::Parse("divisor.a missing".into()))?,
        field,
    )?;
    let b = poly_from_json(
        v.get("b").ok_or_else(|| Error::Parse("divisor.b missing".into()))?,
        field,
    )?;
    let n_plus = v.get("n_plus").and_then(|x| x.as_u64()).unwrap_or(0) as usize;
    Ok(MumfordDivisor { a, b, n_plus })
}

fn poly_display(p: &[K]) -> String {
    let strs: Vec<String> = p
        .iter()
        .map(|c| {
            let coords: Vec<String> = c.coords().iter().map(rational_to_string).collect();
            if coords.len() == 1 {
                coords[0].clone()
            } else {
                format!("[{}]", coords.join(", "))
            }
        })
        .collect();
    format!("[{}]", strs.join(", "))
}

pub fn report_to_text(report: &CertReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "t_omega: {} {}\n",
        poly_display(&report.t_omega[0]),
        poly_display(&report.t_omega[1])
    ));
    out.push_str(&format!("min_poly: {}\n", poly_display(&report.min_poly)));
    out.push_str(&format!(
        "rosati_self_adjoint: {}\n",
        report.rosati_self_adjoint
    ));
    out.push_str(&format!("genus_Z: {}\n", report.genus_z));
    out.push_str(&format!("deg_psi: {}\n", report.deg_psi));
    out.push_str(&format!("verdict: {}\n", report.verdict()));
    out
}

pub fn read_json(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_json(path: &str, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Parse(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::curves::same_correspondence;

    #[test]
    fn curve_round_trip() {
        let c = corpus::thm1_curve();
        let v = curve_to_json(&c);
        let back = curve_from_json(&v).unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn correspondence_round_trip() {
        let c = corpus::thm1_correspondence();
        let v = correspondence_to_json(&c);
        let back = correspondence_from_json(&v).unwrap();
        assert!(same_correspondence(&c, &back));
        assert_eq!(c.y0, back.y0);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_from_str("-3/4").unwrap(), Rational::from((-3, 4)));
        assert_eq!(rational_to_string(&Rational::from(17)), "17");
        assert!(rational_from_str("1/0").is_err());
    }
}
