//! Genus-2 hyperelliptic curve models u^2 = h(t), deg h in {5, 6}.

use crate::error::{Error, Result};
use crate::exact::{Field, FieldSqrt, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// deg h = 5, monic: one Weierstrass point at infinity, the base point.
    Quintic,
    /// deg h = 6: two points at infinity; the base point is the one where
    /// u/t^3 tends to +sqrt(lc h) under the pinned embedding.
    Sextic,
}

#[derive(Clone, Debug)]
pub struct CurveModel<F: Field> {
    pub h: Poly<F>,
    pub kind: ModelKind,
    /// Sextic only: the cubic V with deg(h - V^2) <= 2, normalized so the
    /// leading coefficient of V is the chosen sqrt of lc(h). The base point
    /// at infinity is where u - V vanishes.
    pub vplus: Option<Poly<F>>,
}

impl<F: Field> PartialEq for CurveModel<F> {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.kind == other.kind
    }
}

/// Validate a defining polynomial and assemble the model.
pub fn validate_curve<F: FieldSqrt>(h: Poly<F>) -> Result<CurveModel<F>> {
    let deg = h.degree().ok_or_else(|| Error::InvalidCurve("h is zero".into()))?;
    if deg != 5 && deg != 6 {
        return Err(Error::InvalidCurve(format!("deg h = {deg}, expected 5 or 6")));
    }
    if !h.is_squarefree()? {
        return Err(Error::InvalidCurve("h is not squarefree".into()));
    }
    if deg == 5 {
        if !h.is_monic() {
            return Err(Error::InvalidCurve("quintic model must be monic".into()));
        }
        return Ok(CurveModel {
            h,
            kind: ModelKind::Quintic,
            vplus: None,
        });
    }
    let s = h
        .leading()
        .sqrt_in_field()
        .ok_or_else(|| Error::InvalidCurve("sextic leading coefficient is not a square in K".into()))?;
    let vplus = infinity_sqrt(&h, &s)?;
    Ok(CurveModel {
        h,
        kind: ModelKind::Sextic,
        vplus: Some(vplus),
    })
}

/// The cubic V = s t^3 + v2 t^2 + v1 t + v0 with deg(h - V^2) <= 2.
fn infinity_sqrt<F: Field>(h: &Poly<F>, s: &F) -> Result<Poly<F>> {
    let two_s = s.add(s);
    let inv = two_s.inv()?;
    // match t^6, t^5, t^4, t^3
    let v2 = h.coeff(5).mul(&inv);
    let v1 = h.coeff(4).sub(&v2.mul(&v2)).mul(&inv);
    let v0 = h
        .coeff(3)
        .sub(&v2.mul(&v1).add(&v1.mul(&v2)))
        .mul(&inv);
    Ok(Poly::new(h.ctx(), vec![v0, v1, v2, s.clone()]))
}

impl<F: Field> CurveModel<F> {
    pub fn genus_weight(&self) -> usize {
        2
    }

    pub fn is_sextic(&self) -> bool {
        self.kind == ModelKind::Sextic
    }

    /// Map coefficients into another field (base change / tower promotion).
    pub fn map<G: Field>(&self, f: &impl Fn(&F) -> G) -> CurveModel<G> {
        CurveModel {
            h: crate::exact::tower::map_poly(&self.h, f),
            kind: self.kind,
            vplus: self.vplus.as_ref().map(|v| crate::exact::tower::map_poly(v, f)),
        }
    }
}

/// Points of the curve over a field extension G of the coefficient field.
#[derive(Clone, Debug, PartialEq)]
pub enum CurvePoint<G: Field> {
    Finite { t: G, u: G },
    /// The quintic point at infinity (a Weierstrass point).
    InfQuintic,
    /// Sextic: base point at infinity (u/t^3 -> +sqrt lc).
    InfPlus,
    /// Sextic: the other point at infinity.
    InfMinus,
}

impl<G: Field> CurvePoint<G> {
    pub fn finite(t: G, u: G) -> Self {
        CurvePoint::Finite { t, u }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self, CurvePoint::Finite { .. })
    }

    /// Hyperelliptic involution.
    pub fn involute(&self) -> Self {
        match self {
            CurvePoint::Finite { t, u } => CurvePoint::Finite {
                t: t.clone(),
                u: u.neg(),
            },
            CurvePoint::InfQuintic => CurvePoint::InfQuintic,
            CurvePoint::InfPlus => CurvePoint::InfMinus,
            CurvePoint::InfMinus => CurvePoint::InfPlus,
        }
    }

    /// Exact on-curve check against a model mapped into G.
    pub fn on_curve<F: Field>(&self, curve: &CurveModel<F>, map: &impl Fn(&F) -> G) -> bool {
        match self {
            CurvePoint::Finite { t, u } => {
                let hv = crate::exact::tower::eval_poly_at(&curve.h, map, t);
                u.mul(u) == hv
            }
            CurvePoint::InfQuintic => curve.kind == ModelKind::Quintic,
            _ => curve.kind == ModelKind::Sextic,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::NumberField;

    #[test]
    fn validates_shipped_models() {
        let k = NumberField::rationals();
        let z = k.zero();
        // t^5 - t^4 + t^3 + t^2 - 2t + 1
        let h = Poly::from_i64(&z, &[1, -2, 1, 1, -1, 1]);
        let c = validate_curve(h).unwrap();
        assert_eq!(c.kind, ModelKind::Quintic);
        // t^6 + t^5 + 7t^2 - 5t + 4
        let h6 = Poly::from_i64(&z, &[4, -5, 7, 0, 0, 1, 1]);
        let c6 = validate_curve(h6.clone()).unwrap();
        assert_eq!(c6.kind, ModelKind::Sextic);
        let v = c6.vplus.clone().unwrap();
        // deg(h - V^2) <= 2
        let diff = h6.sub(&v.mul(&v));
        assert!(diff.deg_i() <= 2);
        // t^5 is rejected
        let bad = Poly::from_i64(&z, &[0, 0, 0, 0, 0, 1]);
        assert!(validate_curve(bad).is_err());
    }
}
